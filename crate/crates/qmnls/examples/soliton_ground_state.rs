//! Ground-state solitons by Petviashvili iteration, with the variational
//! identities evaluated on the converged profile and the eps -> 0 limit
//! against the cubic-NLS soliton sqrt(2 tau) sech(sqrt(tau) x).
//!
//! ```bash
//! cargo run --release --example soliton_ground_state
//! ```

use num_complex::Complex64;
use qmnls::field::Field;
use qmnls::grid::Grid;
use qmnls::soliton::{
    action_gradient, combined_identity_residual, nonexistence_report, petviashvili_solve,
    SolitonProblem,
};

fn main() {
    let grid = Grid::shared(1024, 60.0).expect("grid");
    let init = Field::from_fn_physical(grid.clone(), |x| {
        Complex64::new((-x * x / 2.0).exp(), 0.0)
    });

    println!("{:>6} {:>6} {:>7} {:>14} {:>12} {:>12} {:>12}", "eps", "tau", "iters", "action", "pde res", "pohozaev", "nehari");
    for &eps in &[0.5, 0.25, 0.1, 0.01] {
        let problem = SolitonProblem::new(eps, 1.0, 1024, 60.0).expect("problem");
        let sol = petviashvili_solve(&problem, &init, 1e-9, 600).expect("converged");
        println!(
            "{eps:6.2} {:6.2} {:7} {:14.9} {:12.3e} {:12.3e} {:12.3e}",
            problem.tau, sol.iterations, sol.action, sol.residual_pde,
            sol.residual_pohozaev, sol.residual_nehari
        );
        if eps == 0.01 {
            let sech = Field::from_fn_physical(grid.clone(), |x| {
                Complex64::new(2.0f64.sqrt() / x.cosh(), 0.0)
            });
            let rel = sol.q.l2_distance(&sech) / sech.l2_norm();
            println!("        eps=0.01 profile vs sqrt(2) sech(x): relative L2 distance {rel:.2e}");
        }
        if eps == 0.5 {
            let (gu, gv) = action_gradient(&sol.q, &sol.v, problem.eps, problem.tau);
            println!(
                "        action gradient at the critical point: ({:.2e}, {:.2e})",
                gu.l2_norm(),
                gv.l2_norm()
            );
            let comb = combined_identity_residual(&sol.q, &sol.v, problem.eps, problem.tau, 1);
            println!(
                "        combined dilation/Nehari identity: relative residual {:.2e}",
                comb.relative()
            );
        }
    }

    println!();
    println!("dimension arithmetic of the combined identity:");
    for &(d, eps_zero) in &[(9usize, false), (12, false), (5, true), (6, true)] {
        let r = nonexistence_report(d, eps_zero);
        println!(
            "  d = {d:2}, eps {}: coefficients ({:+.2}, {:+.2}, {:+.2}) -> {}",
            if eps_zero { "= 0" } else { "> 0" },
            r.coefficients.0,
            r.coefficients.1,
            r.coefficients.2,
            if r.triviality_forced { "only the trivial solution" } else { "nontrivial solutions not excluded" }
        );
    }
}
