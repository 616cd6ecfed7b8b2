//! Numerical audits of the cubic-root machinery: the closed-form negative
//! root, its two-sided bounds, the explicit ratio-91 estimate, the calculus
//! kernels, and the sampled smoothing supremum.
//!
//! ```bash
//! cargo run --release --example kernel_audits
//! ```

use qmnls::kernel_bounds::{
    eval_p, lower_bound_audit, phi_kernel_audit, root_r, smoothing_supremum_sample,
    tail_integral_audit, upper_bound_audit, RootProblem,
};

fn main() {
    // the closed-form root against a direct evaluation
    let p = RootProblem::new(10.0, 10100.0, 1.0, 3.0).expect("valid problem");
    let r = root_r(&p);
    println!("root problem (xi=10, tau=1.01 d, eps=1, xi1=3):");
    println!("  r = {r:.12}, P(r) = {:.3e}", eval_p(&p, r));
    println!();

    let eps = 1.0;
    let xis = [2.0, 10.0, 50.0];
    let lower = lower_bound_audit(eps, &xis).expect("lower audit");
    println!("lower bound |r| >~ xi^(4/3): per-xi minima of |r|/xi^(4/3)");
    for &(xi, m) in &lower.per_xi_min {
        println!("  xi = {xi:5}: min ratio {m:.4}");
    }
    println!(
        "  |r| increasing in tau across the window: {}; |r(-xi1)| >= |r(xi1)|: {}",
        lower.tau_monotone_ok, lower.neg_dominates_ok
    );
    println!();

    let upper = upper_bound_audit(eps, &xis).expect("upper audit");
    println!("upper bounds and the ratio-91 estimate:");
    for s in &upper.per_xi {
        println!(
            "  xi = {:5}: |r|/d^(1/3) <= {:.4} on the core, |r|/(|xi1|^(1/3)<eps xi1>) <= {:.4} outside, alpha1/alpha2 <= {:.3} (bound 91), |r| decreasing on (0, xi): {}",
            s.xi, s.k_core, s.k_outer, s.ratio91_max, s.monotone_ok
        );
    }
    println!();

    println!("two-weight kernel int dt / (<t-a1>^b <t-a2>^g) vs <a>^-g phi_b(a):");
    for &(beta, gamma) in &[(1.5, 0.7), (1.0, 0.8), (0.6, 0.6)] {
        let r = phi_kernel_audit(beta, gamma, &[1.0, 10.0, 100.0]).expect("kernel audit");
        println!(
            "  beta = {beta}, gamma = {gamma}: integral/bound in [{:.4}, {:.4}]",
            r.min_ratio, r.max_ratio
        );
    }
    println!();

    println!("tail integral int_A^inf dz/(z (z-A)^a) vs A^-a pi/sin(pi a):");
    let tail = tail_integral_audit(0.5, &[0.1, 1.0, 10.0, 1000.0]).expect("tail audit");
    for row in &tail.rows {
        println!(
            "  A = {:8}: quadrature {:.12e}, closed form {:.12e}, rel err {:.1e}, explicit bound respected: {}",
            row.big_a, row.quadrature, row.closed_form, row.rel_err, row.within_explicit_bound
        );
    }
    println!();

    println!("smoothing supremum sample (eps=1, b=0.55, gamma=0.4, a=1, s=0):");
    let sm = smoothing_supremum_sample(1.0, 0.55, 0.4, 1.0, 0.0, 504).expect("smoothing audit");
    println!(
        "  {} samples, running max {:.6e}, last xi-decade raised it by {:.3}%, flagged {}",
        sm.samples.len(),
        sm.max_total,
        100.0 * sm.last_decade_increase,
        sm.flagged
    );
}
