//! Ground-state profiles of the reduced soliton equation
//!
//! ```text
//! eps^2 Q'''' - Q'' + tau Q - J_eps(Q^2) Q = 0
//! ```
//!
//! solved in one dimension by stabilized Petviashvili iteration, plus the
//! action functional, its gradient, and the Pohozaev/Nehari identities with
//! the dimension d kept as a formal parameter (the d >= 12 and eps = 0,
//! d >= 6 non-existence arithmetic runs on the same coefficients).
//!
//! The auxiliary field of the first-order system is eliminated exactly:
//! v = J_eps(Q^2) inverts the second Euler-Lagrange equation in closed form,
//! leaving a single nonlinear unknown.
//!
//! All fields here are real-valued; the operators applied are real even
//! multipliers, so imaginary parts are roundoff and are discarded after each
//! transform.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field, Space};
use crate::grid::Grid;

#[derive(Debug, Clone)]
pub struct SolitonProblem {
    pub eps: f64,
    pub tau: f64,
    pub n: usize,
    pub length: f64,
    /// Dimension parameter used only in identity formulas; the solver is 1-D.
    pub d: usize,
}

impl SolitonProblem {
    pub fn new(eps: f64, tau: f64, n: usize, length: f64) -> Result<SolitonProblem> {
        let p = SolitonProblem {
            eps,
            tau,
            n,
            length,
            d: 1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n, self.length)?;
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!("soliton solve needs eps > 0, got {}", self.eps)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Config(format!("soliton solve needs tau > 0, got {}", self.tau)));
        }
        if self.d == 0 || self.d > 11 {
            return Err(Error::Config(format!(
                "identity evaluation supports d in 1..=11, got {} (d >= 12 is the non-existence report)",
                self.d
            )));
        }
        Ok(())
    }

    /// Positive multiplier of the linear operator, M(xi) = eps^2 xi^4 + xi^2 + tau.
    pub fn linear_multiplier(&self, xi: f64) -> f64 {
        let x2 = xi * xi;
        self.eps * self.eps * x2 * x2 + x2 + self.tau
    }
}

fn real_field(grid: &Arc<Grid>, vals: Vec<f64>) -> Field {
    Field::new(
        grid.clone(),
        vals.into_iter().map(|r| Complex64::new(r, 0.0)).collect(),
        Space::Physical,
    )
    .expect("length matches grid")
}

fn real_values(f: &Field) -> Vec<f64> {
    f.values().iter().map(|z| z.re).collect()
}

/// Apply a real even multiplier to a real physical-space vector.
fn apply_real_multiplier(grid: &Arc<Grid>, vals: &[f64], m: impl Fn(f64) -> f64) -> Vec<f64> {
    let f = real_field(grid, vals.to_vec());
    let mut hat = forward_transform(&f).expect("physical input");
    for (idx, v) in hat.values_mut().iter_mut().enumerate() {
        *v *= m(grid.freq(idx));
    }
    real_values(&inverse_transform(&hat).expect("frequency input"))
}

fn integrate(grid: &Grid, vals: impl Iterator<Item = f64>) -> f64 {
    vals.sum::<f64>() * grid.dx()
}

/// Closed-form reconstruction of the auxiliary field, v = J_eps(Q^2).
/// Solves -eps^2 v'' + v = Q^2 exactly on the grid.
pub fn reconstruct_v(q: &Field, eps: f64) -> Field {
    let grid = q.grid().clone();
    let q_phys = q.to_physical();
    let q2: Vec<f64> = q_phys.values().iter().map(|z| z.re * z.re).collect();
    let e2 = eps * eps;
    let v = apply_real_multiplier(&grid, &q2, |xi| 1.0 / (1.0 + e2 * xi * xi));
    real_field(&grid, v)
}

/// Shared quadratic integrals of a pair (u, v).
struct PairTerms {
    /// int (u'')^2
    lap_u: f64,
    /// int (u')^2
    grad_u: f64,
    /// int u^2
    u2: f64,
    /// int (v')^2
    grad_v: f64,
    /// int v^2
    v2: f64,
    /// int u^2 v
    u2v: f64,
}

fn pair_terms(u: &Field, v: &Field) -> PairTerms {
    let grid = u.grid().clone();
    let uu = real_values(&u.to_physical());
    let vv = real_values(&v.to_physical());
    let u_hat = forward_transform(&real_field(&grid, uu.clone())).unwrap();
    let v_hat = forward_transform(&real_field(&grid, vv.clone())).unwrap();
    let mut lap_u = 0.0;
    let mut grad_u = 0.0;
    let mut grad_v = 0.0;
    for m in 0..grid.n() {
        let xi2 = grid.freq(m) * grid.freq(m);
        lap_u += xi2 * xi2 * u_hat.values()[m].norm_sqr();
        grad_u += xi2 * u_hat.values()[m].norm_sqr();
        grad_v += xi2 * v_hat.values()[m].norm_sqr();
    }
    lap_u /= grid.length();
    grad_u /= grid.length();
    grad_v /= grid.length();
    let u2 = integrate(&grid, uu.iter().map(|&x| x * x));
    let v2 = integrate(&grid, vv.iter().map(|&x| x * x));
    let u2v = integrate(&grid, uu.iter().zip(vv.iter()).map(|(&a, &b)| a * a * b));
    PairTerms {
        lap_u,
        grad_u,
        u2,
        grad_v,
        v2,
        u2v,
    }
}

/// Action functional
/// I(u, v) = int eps^2 (u'')^2/2 + (u')^2/2 + tau u^2/2
///           + eps^2 (v')^2/4 + v^2/4 - u^2 v / 2.
pub fn action(u: &Field, v: &Field, eps: f64, tau: f64) -> f64 {
    let t = pair_terms(u, v);
    0.5 * eps * eps * t.lap_u + 0.5 * t.grad_u + 0.5 * tau * t.u2
        + 0.25 * eps * eps * t.grad_v
        + 0.25 * t.v2
        - 0.5 * t.u2v
}

/// L2-pairing gradient of the action:
/// (eps^2 u'''' - u'' + tau u - u v,  (-eps^2 v'' + v - u^2)/2).
pub fn action_gradient(u: &Field, v: &Field, eps: f64, tau: f64) -> (Field, Field) {
    let grid = u.grid().clone();
    let uu = real_values(&u.to_physical());
    let vv = real_values(&v.to_physical());
    let e2 = eps * eps;
    let lin_u = apply_real_multiplier(&grid, &uu, |xi| {
        let x2 = xi * xi;
        e2 * x2 * x2 + x2
    });
    let grad_u: Vec<f64> = lin_u
        .iter()
        .zip(uu.iter().zip(vv.iter()))
        .map(|(&l, (&a, &b))| l + tau * a - a * b)
        .collect();
    let lap_v = apply_real_multiplier(&grid, &vv, |xi| xi * xi);
    let grad_v: Vec<f64> = lap_v
        .iter()
        .zip(vv.iter().zip(uu.iter()))
        .map(|(&l, (&b, &a))| 0.5 * (e2 * l + b - a * a))
        .collect();
    (real_field(&grid, grad_u), real_field(&grid, grad_v))
}

/// Residual and magnitude scale of an integral identity.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub residual: f64,
    /// Sum of the absolute values of the identity's terms.
    pub scale: f64,
}

impl IdentityCheck {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }
}

/// Pohozaev identity (dilation testing of the Euler-Lagrange system):
///
/// ```text
/// -2 eps^2 (d-4) int (lap u)^2 - 2 (d-2) int |grad u|^2 - 2 tau d int u^2
///   - eps^2 (d-2) int |grad v|^2 - d int v^2 + 2 d int u^2 v = 0
/// ```
///
/// for solutions; evaluated with 1-D integrals and d as a formal parameter.
pub fn pohozaev_residual(u: &Field, v: &Field, eps: f64, tau: f64, d: usize) -> IdentityCheck {
    let t = pair_terms(u, v);
    let dd = d as f64;
    let e2 = eps * eps;
    let terms = [
        -2.0 * e2 * (dd - 4.0) * t.lap_u,
        -2.0 * (dd - 2.0) * t.grad_u,
        -2.0 * tau * dd * t.u2,
        -e2 * (dd - 2.0) * t.grad_v,
        -dd * t.v2,
        2.0 * dd * t.u2v,
    ];
    IdentityCheck {
        residual: terms.iter().sum(),
        scale: terms.iter().map(|x| x.abs()).sum(),
    }
}

/// Nehari identity <I'(u,v), (u,v)> = 0:
///
/// ```text
/// int eps^2 (lap u)^2 + |grad u|^2 + tau u^2 + eps^2/2 |grad v|^2 + v^2/2
///   - 3/2 u^2 v = 0
/// ```
///
/// for critical points.
pub fn nehari_residual(u: &Field, v: &Field, eps: f64, tau: f64) -> IdentityCheck {
    let t = pair_terms(u, v);
    let e2 = eps * eps;
    let terms = [
        e2 * t.lap_u,
        t.grad_u,
        tau * t.u2,
        0.5 * e2 * t.grad_v,
        0.5 * t.v2,
        -1.5 * t.u2v,
    ];
    IdentityCheck {
        residual: terms.iter().sum(),
        scale: terms.iter().map(|x| x.abs()).sum(),
    }
}

/// The combined identity:
///
/// ```text
/// (8 - 2d/3) eps^2 int (lap u)^2 + (4 - 2d/3) int |grad u|^2
///   + (2 - d/3) eps^2 int |grad v|^2 = (2 tau d / 3) int u^2 + (d/3) int v^2
/// ```
///
/// Algebraically this is Pohozaev + (4d/3) * Nehari.
pub fn combined_identity_residual(
    u: &Field,
    v: &Field,
    eps: f64,
    tau: f64,
    d: usize,
) -> IdentityCheck {
    let t = pair_terms(u, v);
    let dd = d as f64;
    let e2 = eps * eps;
    let terms = [
        (8.0 - 2.0 * dd / 3.0) * e2 * t.lap_u,
        (4.0 - 2.0 * dd / 3.0) * t.grad_u,
        (2.0 - dd / 3.0) * e2 * t.grad_v,
        -(2.0 * tau * dd / 3.0) * t.u2,
        -(dd / 3.0) * t.v2,
    ];
    IdentityCheck {
        residual: terms.iter().sum(),
        scale: terms.iter().map(|x| x.abs()).sum(),
    }
}

#[derive(Debug, Clone)]
pub struct NonexistenceReport {
    pub d: usize,
    pub eps_zero: bool,
    /// Coefficients (8 - 2d/3, 4 - 2d/3, 2 - d/3) of the combined identity.
    pub coefficients: (f64, f64, f64),
    pub triviality_forced: bool,
    pub note: String,
}

/// Sign analysis of the combined identity's coefficients for dimension d.
///
/// With every left coefficient <= 0 and the right side positive for
/// nontrivial pairs, only (0, 0) solves the system: this happens for all
/// d >= 12, and already for d >= 6 when eps = 0 (the bi-Laplacian and
/// grad-v terms drop).
pub fn nonexistence_report(d: usize, eps_zero: bool) -> NonexistenceReport {
    let dd = d as f64;
    let c1 = 8.0 - 2.0 * dd / 3.0;
    let c2 = 4.0 - 2.0 * dd / 3.0;
    let c3 = 2.0 - dd / 3.0;
    let forced = if eps_zero {
        // eps = 0 removes the c1 and c3 terms
        c2 <= 0.0
    } else {
        c1 <= 0.0 && c2 <= 0.0 && c3 <= 0.0
    };
    let note = if forced {
        format!(
            "left-side coefficients {:?} are all <= 0 while the right side is positive for nontrivial pairs: only the trivial solution remains",
            if eps_zero { vec![c2] } else { vec![c1, c2, c3] }
        )
    } else {
        "at least one left-side coefficient is positive: the sign argument does not force triviality".to_string()
    };
    NonexistenceReport {
        d,
        eps_zero,
        coefficients: (c1, c2, c3),
        triviality_forced: forced,
        note,
    }
}

#[derive(Debug, Clone)]
pub struct SolitonResult {
    /// Converged profile, recentered so its maximum sits at x = 0.
    pub q: Field,
    /// Auxiliary field v = J_eps(Q^2).
    pub v: Field,
    pub action: f64,
    /// ||eps^2 Q'''' - Q'' + tau Q - J_eps(Q^2) Q||_{L2} / ||Q||_{L2}.
    pub residual_pde: f64,
    /// Relative Pohozaev residual at d = 1.
    pub residual_pohozaev: f64,
    /// Relative Nehari residual.
    pub residual_nehari: f64,
    pub iterations: usize,
    pub gamma_history: Vec<f64>,
}

/// Stabilized Petviashvili iteration for the fixed point
/// Q = M^{-1}[J_eps(Q^2) Q], M = eps^2 xi^4 + xi^2 + tau:
///
/// ```text
/// gamma_n = <M Q_n, Q_n> / <J_eps(Q_n^2) Q_n, Q_n>
/// Q_{n+1} = gamma_n^{3/2} M^{-1}[J_eps(Q_n^2) Q_n]
/// ```
///
/// (exponent 3/2 for the degree-3 nonlinearity). Converged when the relative
/// PDE residual is below `tol` and |gamma - 1| <= 1e-10.
pub fn petviashvili_solve(
    problem: &SolitonProblem,
    init: &Field,
    tol: f64,
    max_iter: usize,
) -> Result<SolitonResult> {
    problem.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let grid = Grid::shared(problem.n, problem.length)?;
    if init.grid().n() != grid.n() || init.grid().length() != grid.length() {
        return Err(Error::Config("init field grid does not match the problem grid".into()));
    }
    let eps = problem.eps;
    let e2 = eps * eps;
    let mut q = real_values(&init.to_physical());
    let mut gamma_history = Vec::new();

    for iter in 1..=max_iter {
        let q_field = real_field(&grid, q.clone());
        let norm_q = q_field.l2_norm();
        if norm_q < 1e-12 {
            return Err(Error::Numerics(format!(
                "iteration collapsed to the trivial fixed point at iteration {iter}"
            )));
        }
        // N(Q) = J_eps(Q^2) Q
        let q2: Vec<f64> = q.iter().map(|&x| x * x).collect();
        let jq2 = apply_real_multiplier(&grid, &q2, |xi| 1.0 / (1.0 + e2 * xi * xi));
        let w: Vec<f64> = jq2.iter().zip(q.iter()).map(|(&a, &b)| a * b).collect();

        let q_hat = forward_transform(&q_field).expect("physical");
        let w_hat = forward_transform(&real_field(&grid, w.clone())).expect("physical");

        let mut num = 0.0;
        let mut den = 0.0;
        let mut res_sq = 0.0;
        for m in 0..grid.n() {
            let mm = problem.linear_multiplier(grid.freq(m));
            let qh = q_hat.values()[m];
            let wh = w_hat.values()[m];
            num += mm * qh.norm_sqr();
            den += (wh * qh.conj()).re;
            res_sq += (qh * mm - wh).norm_sqr();
        }
        num /= grid.length();
        den /= grid.length();
        res_sq /= grid.length();
        if den <= 0.0 {
            return Err(Error::Numerics(format!(
                "stabilizer undefined: <N(Q), Q> = {den} at iteration {iter}"
            )));
        }
        let gamma = num / den;
        gamma_history.push(gamma);
        let rel_res = res_sq.sqrt() / norm_q;
        if rel_res <= tol && (gamma - 1.0).abs() <= 1e-10 {
            return Ok(finalize(problem, &grid, q, rel_res, iter, gamma_history));
        }
        if iter == max_iter {
            return Err(Error::Numerics(format!(
                "petviashvili did not converge in {max_iter} iterations: residual {rel_res:.3e}, gamma - 1 = {:.3e}",
                gamma - 1.0
            )));
        }
        // update Q
        let g32 = gamma.powf(1.5);
        let mut next_hat = w_hat;
        for m in 0..grid.n() {
            let mm = problem.linear_multiplier(grid.freq(m));
            next_hat.values_mut()[m] *= g32 / mm;
        }
        q = real_values(&inverse_transform(&next_hat).expect("frequency"));
    }
    unreachable!("loop returns or errors at max_iter")
}

fn finalize(
    problem: &SolitonProblem,
    grid: &Arc<Grid>,
    q: Vec<f64>,
    rel_res: f64,
    iterations: usize,
    gamma_history: Vec<f64>,
) -> SolitonResult {
    // recenter the profile maximum to x = 0 (index n/2); translation
    // invariance on the torus makes this a relabeling
    let n = grid.n();
    let argmax = q
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let shift = (argmax + n - n / 2) % n;
    let centered: Vec<f64> = (0..n).map(|i| q[(i + shift) % n]).collect();
    let q_field = real_field(grid, centered);
    let v = reconstruct_v(&q_field, problem.eps);
    let act = action(&q_field, &v, problem.eps, problem.tau);
    let poho = pohozaev_residual(&q_field, &v, problem.eps, problem.tau, 1);
    let nehari = nehari_residual(&q_field, &v, problem.eps, problem.tau);
    SolitonResult {
        q: q_field,
        v,
        action: act,
        residual_pde: rel_res,
        residual_pohozaev: poho.relative(),
        residual_nehari: nehari.relative(),
        iterations,
        gamma_history,
    }
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub k_values: Vec<i32>,
    /// log2 ||u_k||^3_{L^3} per k, fitted slope (expected 2d = 2).
    pub l3_cubed_slope: f64,
    /// per-s fitted slopes of log2 ||u_k||_{H^s} (expected s + 1/2).
    pub hs_slopes: Vec<(f64, f64)>,
}

fn smooth_step(t: f64) -> f64 {
    // C-infinity transition: 0 for t <= 0, 1 for t >= 1
    let g = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = g(t);
    let b = g(1.0 - t);
    a / (a + b)
}

/// Dyadic-annulus scaling exponents of the Littlewood-Paley pieces
/// uhat_k(xi) = uhat(xi / 2^k) with uhat = phihat(xi) - phihat(2 xi):
/// measures the slopes of log2 ||u_k||^3_{L3} and log2 ||u_k||_{H^s} in k
/// (2dk and (s + d/2)k in the defining computation, d = 1 here).
pub fn scaling_exponents_check(
    s_list: &[f64],
    k_min: i32,
    k_max: i32,
    n: usize,
    length: f64,
) -> Result<ScalingReport> {
    let grid = Grid::shared(n, length)?;
    if grid.max_freq() < (2.0f64).powi(k_max) {
        return Err(Error::Config(format!(
            "grid resolves |xi| <= {:.1} but the k = {k_max} annulus reaches {:.1}",
            grid.max_freq(),
            2.0f64.powi(k_max)
        )));
    }
    if k_min >= k_max {
        return Err(Error::Config("need k_min < k_max".into()));
    }
    // phihat: 1 on [-1/2, 1/2], 0 outside [-1, 1], smooth in between
    let phihat = |xi: f64| smooth_step(2.0 * (1.0 - xi.abs()));
    let uhat = move |xi: f64| phihat(xi) - phihat(2.0 * xi);

    let ks: Vec<i32> = (k_min..=k_max).collect();
    let mut l3_logs = Vec::new();
    let mut hs_logs: Vec<Vec<f64>> = vec![Vec::new(); s_list.len()];
    for &k in &ks {
        let scale = (2.0f64).powi(k);
        let hat = Field::from_fn_frequency(grid.clone(), move |xi| {
            Complex64::new(uhat(xi / scale), 0.0)
        });
        let u = inverse_transform(&hat)?;
        let l3_cubed = integrate(
            &grid,
            u.values().iter().map(|z| z.norm().powi(3)),
        );
        l3_logs.push(l3_cubed.log2());
        for (i, &s) in s_list.iter().enumerate() {
            hs_logs[i].push(crate::spectral::sobolev_norm(&u, s).log2());
        }
    }
    let kxs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let slope = |ys: &[f64]| {
        let n = kxs.len() as f64;
        let mx = kxs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let num: f64 = kxs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = kxs.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    };
    Ok(ScalingReport {
        k_values: ks.clone(),
        l3_cubed_slope: slope(&l3_logs),
        hs_slopes: s_list
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, slope(&hs_logs[i])))
            .collect(),
    })
}
