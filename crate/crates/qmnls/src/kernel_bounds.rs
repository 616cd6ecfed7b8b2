//! Numerical verification of the cubic-root machinery behind the smoothing
//! estimate.
//!
//! The central object is the cubic in xi2
//!
//! ```text
//! P(xi2) = 4 eps^2 xi2^3 + |xi1|^(2/3) (eps^2 xi1^2 + 2) xi2
//!          + |(1 + eps^2 (xi1 - xi)^2)(xi1 - xi)^2 + tau|
//! ```
//!
//! which is strictly increasing (both nonconstant coefficients are
//! nonnegative), hence has a unique real root r < 0. The closed form is the
//! hyperbolic-sine representation of the single real root of a depressed
//! cubic; the degenerate xi1 = 0 case reduces to a plain cube root.
//!
//! Boundedness statements of the form "<= up to an eps-dependent constant"
//! are audited, not proven: the audits report measured extrema over
//! log-spaced grids and check their stabilization, the only honest numerical
//! rendering of an implicit-constant bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_real_line, tanh_sinh};
use crate::spectral::{bracket, DispersionSymbol};

/// Parameters of one root problem, inside (the closure of) the resonance
/// window tau in [d_eps(xi)/2, 2 d_eps(xi)] with xi > 1, eps > 0.
#[derive(Debug, Clone, Copy)]
pub struct RootProblem {
    pub xi: f64,
    pub tau: f64,
    pub eps: f64,
    pub xi1: f64,
}

impl RootProblem {
    pub fn new(xi: f64, tau: f64, eps: f64, xi1: f64) -> Result<RootProblem> {
        if !(xi > 1.0) {
            return Err(Error::Config(format!("root problem needs xi > 1, got {xi}")));
        }
        if !(eps > 0.0) {
            return Err(Error::Config(format!("root problem needs eps > 0, got {eps}")));
        }
        if !xi1.is_finite() {
            return Err(Error::Config("xi1 must be finite".into()));
        }
        let d = DispersionSymbol { eps }.eval(xi);
        // The window is accepted as its closure so endpoint audits can probe
        // tau -> d/2 and tau -> 2d.
        if !(tau >= 0.5 * d * (1.0 - 1e-12) && tau <= 2.0 * d * (1.0 + 1e-12)) {
            return Err(Error::Config(format!(
                "tau = {tau} outside the window [{}, {}] for xi = {xi}, eps = {eps}",
                0.5 * d,
                2.0 * d
            )));
        }
        Ok(RootProblem { xi, tau, eps, xi1 })
    }

    /// Coefficient of the linear term, |xi1|^(2/3) (eps^2 xi1^2 + 2).
    pub fn linear_coeff(&self) -> f64 {
        self.xi1.abs().powf(2.0 / 3.0) * (self.eps * self.eps * self.xi1 * self.xi1 + 2.0)
    }

    /// Constant term |(1 + eps^2 (xi1 - xi)^2)(xi1 - xi)^2 + tau|.
    pub fn constant_term(&self) -> f64 {
        let y = self.xi1 - self.xi;
        let y2 = y * y;
        ((1.0 + self.eps * self.eps * y2) * y2 + self.tau).abs()
    }
}

/// Horner evaluation of the cubic P at xi2.
pub fn eval_p(p: &RootProblem, xi2: f64) -> f64 {
    let a3 = 4.0 * p.eps * p.eps;
    ((a3 * xi2) * xi2 + p.linear_coeff()) * xi2 + p.constant_term()
}

/// The unique negative root of P via the sinh representation
///
/// ```text
/// r = -(|xi1|^(1/3) (eps^2 xi1^2 + 2)^(1/2)) / (sqrt(3) eps)
///     * sinh( (1/3) asinh( 3 sqrt(3) eps c / (|xi1| (eps^2 xi1^2 + 2)^(3/2)) ) )
/// ```
///
/// with c the constant term. The formula is 0/0 at xi1 = 0; magnitudes below
/// 1e-12 route to the exact degenerate form r = -(c / (4 eps^2))^(1/3).
pub fn root_r(p: &RootProblem) -> f64 {
    let c = p.constant_term();
    let eps = p.eps;
    let r = if p.xi1.abs() < 1e-12 {
        -(c / (4.0 * eps * eps)).cbrt()
    } else {
        let q = eps * eps * p.xi1 * p.xi1 + 2.0;
        let arg = 3.0 * 3.0f64.sqrt() * eps * c / (p.xi1.abs() * q.powf(1.5));
        let prefactor = p.xi1.abs().powf(1.0 / 3.0) * q.sqrt() / (3.0f64.sqrt() * eps);
        -prefactor * ((arg.asinh()) / 3.0).sinh()
    };
    debug_assert!(r < 0.0, "root must be negative, got {r}");
    debug_assert!(
        eval_p(p, r).abs() <= 1e-8 * (1.0 + c),
        "root residual {} exceeds tolerance (c = {c})",
        eval_p(p, r)
    );
    r
}

/// One audited point; serialized as `case,xi,tau,xi1_or_na,value,bound,ratio`.
#[derive(Debug, Clone)]
pub struct AuditRow {
    pub case: String,
    pub xi: f64,
    pub tau: f64,
    pub xi1: Option<f64>,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Log-spaced xi1 magnitudes covering (0, 1e3 * xi] plus the structural
/// points xi/2, xi, 2 xi, mirrored to both signs.
fn xi1_grid(xi: f64, per_decade: usize) -> Vec<f64> {
    let mut mags = Vec::new();
    let lo: f64 = 1e-3;
    let hi = 1e3 * xi;
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).ceil() as usize;
    for i in 0..=count {
        mags.push(lo * (hi / lo).powf(i as f64 / count as f64));
    }
    mags.extend_from_slice(&[0.5 * xi, xi, 2.0 * xi]);
    let mut grid: Vec<f64> = mags.iter().flat_map(|&m| [m, -m]).collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub eps: f64,
    pub rows: Vec<AuditRow>,
    /// Per-xi minimum of |r| / xi^(4/3) over the audited (xi1, tau) grid.
    pub per_xi_min: Vec<(f64, f64)>,
    /// tau at the upper window endpoint gives the larger |r| (monotonicity
    /// of the constant term in tau).
    pub tau_monotone_ok: bool,
    /// |r(-xi1)| >= |r(xi1)| for xi1 > 0 on the audit grid.
    pub neg_dominates_ok: bool,
}

/// Audit of the lower bound |r(xi1)| >~ xi^(4/3).
pub fn lower_bound_audit(eps: f64, xi_grid: &[f64]) -> Result<LowerBoundReport> {
    if xi_grid.iter().any(|&x| !(x > 1.0)) {
        return Err(Error::Config("lower bound audit needs xi > 1".into()));
    }
    let mut rows = Vec::new();
    let mut per_xi_min = Vec::new();
    let mut tau_monotone_ok = true;
    let mut neg_dominates_ok = true;
    for &xi in xi_grid {
        let d = DispersionSymbol { eps }.eval(xi);
        let taus = [0.5 * d, d, 2.0 * d];
        let mut min_ratio = f64::INFINITY;
        for &xi1 in &xi1_grid(xi, 4) {
            for &tau in &taus {
                let p = RootProblem::new(xi, tau, eps, xi1)?;
                let r = root_r(&p).abs();
                let bound = xi.powf(4.0 / 3.0);
                let ratio = r / bound;
                min_ratio = min_ratio.min(ratio);
                rows.push(AuditRow {
                    case: "lower".into(),
                    xi,
                    tau,
                    xi1: Some(xi1),
                    value: r,
                    bound,
                    ratio,
                });
            }
            // window endpoints: |r| is increasing in tau
            let lo = root_r(&RootProblem::new(xi, 0.5 * d, eps, xi1)?).abs();
            let hi = root_r(&RootProblem::new(xi, 2.0 * d, eps, xi1)?).abs();
            if hi < lo * (1.0 - 1e-12) {
                tau_monotone_ok = false;
            }
            if xi1 > 0.0 {
                let plus = root_r(&RootProblem::new(xi, d, eps, xi1)?).abs();
                let minus = root_r(&RootProblem::new(xi, d, eps, -xi1)?).abs();
                if minus < plus * (1.0 - 1e-12) {
                    neg_dominates_ok = false;
                }
            }
        }
        per_xi_min.push((xi, min_ratio));
    }
    Ok(LowerBoundReport {
        eps,
        rows,
        per_xi_min,
        tau_monotone_ok,
        neg_dominates_ok,
    })
}

#[derive(Debug, Clone)]
pub struct UpperXiSummary {
    pub xi: f64,
    /// max |r| / d_eps(xi)^(1/3) over |xi1| <= xi/2.
    pub k_core: f64,
    /// max |r| / (|xi1|^(1/3) <eps xi1>) over |xi1| > xi/2.
    pub k_outer: f64,
    /// max of alpha1/alpha2 over xi1 in [0, xi/2); the appendix bounds it by 91.
    pub ratio91_max: f64,
    /// |r| decreasing on xi1 in (0, xi).
    pub monotone_ok: bool,
}

#[derive(Debug, Clone)]
pub struct UpperBoundReport {
    pub eps: f64,
    pub rows: Vec<AuditRow>,
    pub per_xi: Vec<UpperXiSummary>,
}

/// Audit of the branch upper bounds and the explicit ratio-91 estimate.
pub fn upper_bound_audit(eps: f64, xi_grid: &[f64]) -> Result<UpperBoundReport> {
    if xi_grid.iter().any(|&x| !(x > 1.0)) {
        return Err(Error::Config("upper bound audit needs xi > 1".into()));
    }
    let mut rows = Vec::new();
    let mut per_xi = Vec::new();
    for &xi in xi_grid {
        let d = DispersionSymbol { eps }.eval(xi);
        let taus = [0.5 * d, d, 2.0 * d];
        let mut k_core: f64 = 0.0;
        let mut k_outer: f64 = 0.0;
        let mut ratio91_max: f64 = 0.0;
        for &xi1 in &xi1_grid(xi, 4) {
            for &tau in &taus {
                let p = RootProblem::new(xi, tau, eps, xi1)?;
                let r = root_r(&p).abs();
                let (case, bound) = if xi1.abs() <= 0.5 * xi {
                    ("upper-core", d.cbrt())
                } else {
                    ("upper-outer", xi1.abs().cbrt() * bracket(eps * xi1))
                };
                let ratio = r / bound;
                if case == "upper-core" {
                    k_core = k_core.max(ratio);
                } else {
                    k_outer = k_outer.max(ratio);
                }
                rows.push(AuditRow {
                    case: case.into(),
                    xi,
                    tau,
                    xi1: Some(xi1),
                    value: r,
                    bound,
                    ratio,
                });
            }
        }
        // alpha1/alpha2 <= 91 on xi1 in [0, xi/2)
        for i in 0..64 {
            let xi1 = 0.5 * xi * i as f64 / 64.0;
            for &tau in &taus {
                let a1 = {
                    let y = xi1 + xi;
                    (1.0 + eps * eps * y * y) * y * y + tau
                };
                let a2 = {
                    let y = xi1 - xi;
                    (1.0 + eps * eps * y * y) * y * y + tau
                };
                let ratio = a1 / a2;
                ratio91_max = ratio91_max.max(ratio);
                rows.push(AuditRow {
                    case: "ratio91".into(),
                    xi,
                    tau,
                    xi1: Some(xi1),
                    value: ratio,
                    bound: 91.0,
                    ratio: ratio / 91.0,
                });
            }
        }
        // |r| decreasing on (0, xi) at fixed tau = d
        let mut monotone_ok = true;
        let mut prev = f64::INFINITY;
        for i in 1..=48 {
            let xi1 = xi * i as f64 / 49.0;
            let r = root_r(&RootProblem::new(xi, d, eps, xi1)?).abs();
            if r > prev * (1.0 + 1e-12) {
                monotone_ok = false;
            }
            prev = r;
        }
        per_xi.push(UpperXiSummary {
            xi,
            k_core,
            k_outer,
            ratio91_max,
            monotone_ok,
        });
    }
    Ok(UpperBoundReport { eps, rows, per_xi })
}

/// phi_beta regimes of the two-weight kernel bound.
fn phi_beta(beta: f64, a: f64) -> f64 {
    if beta > 1.0 {
        1.0
    } else if beta == 1.0 {
        (1.0 + bracket(a)).ln()
    } else {
        bracket(a).powf(1.0 - beta)
    }
}

#[derive(Debug, Clone)]
pub struct PhiKernelReport {
    pub beta: f64,
    pub gamma: f64,
    pub rows: Vec<AuditRow>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

/// Quadrature audit of
/// `int dtau / (<tau - a1>^beta <tau - a2>^gamma) <~ <a1-a2>^{-gamma} phi_beta(a1-a2)`.
///
/// By translation invariance only the separation a1 - a2 matters; the audit
/// fixes a1 = 0.
pub fn phi_kernel_audit(beta: f64, gamma: f64, separations: &[f64]) -> Result<PhiKernelReport> {
    if !(beta >= gamma && gamma >= 0.0 && beta + gamma > 1.0) {
        return Err(Error::Config(format!(
            "kernel audit needs beta >= gamma >= 0 and beta + gamma > 1, got ({beta}, {gamma})"
        )));
    }
    let mut rows = Vec::new();
    let mut max_ratio: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    for &a in separations {
        let f = move |t: f64| bracket(t).powf(-beta) * bracket(t - a).powf(-gamma);
        let integral = adaptive_real_line(&f, &[0.0, a], 1e-9, 0.0, 4000)?;
        let bound = bracket(a).powf(-gamma) * phi_beta(beta, a);
        let ratio = integral.value / bound;
        max_ratio = max_ratio.max(ratio);
        min_ratio = min_ratio.min(ratio);
        rows.push(AuditRow {
            case: format!("phi-beta{beta}-gamma{gamma}"),
            xi: a,
            tau: 0.0,
            xi1: None,
            value: integral.value,
            bound,
            ratio,
        });
    }
    Ok(PhiKernelReport {
        beta,
        gamma,
        rows,
        max_ratio,
        min_ratio,
    })
}

#[derive(Debug, Clone)]
pub struct TailIntegralRow {
    pub big_a: f64,
    pub quadrature: f64,
    pub closed_form: f64,
    pub rel_err: f64,
    /// The explicit constant (1/(1-a) + 1/a) A^{-a} from splitting the
    /// integral at t = A.
    pub explicit_bound: f64,
    pub within_explicit_bound: bool,
}

#[derive(Debug, Clone)]
pub struct TailIntegralReport {
    pub a: f64,
    pub rows: Vec<TailIntegralRow>,
}

/// Audit of `int_A^inf dz / (z (z - A)^a)`.
///
/// Quadrature goes through t = z - A split at t = A, with the outer piece
/// mapped by t -> 1/t; both pieces have integrable endpoint singularities
/// handled by tanh-sinh. The closed form A^{-a} pi / sin(pi a) is the Beta
/// integral `int_0^inf t^{-a}/(t + A) dt = A^{-a} B(1-a, a)`.
pub fn tail_integral_audit(a: f64, big_a_values: &[f64]) -> Result<TailIntegralReport> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Config(format!("tail audit needs a in (0,1), got {a}")));
    }
    let mut rows = Vec::new();
    for &big_a in big_a_values {
        if !(big_a > 0.0) {
            return Err(Error::Config(format!("tail audit needs A > 0, got {big_a}")));
        }
        let inner = tanh_sinh(&|t: f64| 1.0 / ((t + big_a) * t.powf(a)), 0.0, big_a, 1e-13)?;
        let outer = tanh_sinh(
            &|u: f64| u.powf(a - 1.0) / (1.0 + big_a * u),
            0.0,
            1.0 / big_a,
            1e-13,
        )?;
        let quadrature = inner.value + outer.value;
        let closed_form = big_a.powf(-a) * std::f64::consts::PI / (std::f64::consts::PI * a).sin();
        let rel_err = (quadrature - closed_form).abs() / closed_form;
        let explicit_bound = (1.0 / (1.0 - a) + 1.0 / a) * big_a.powf(-a);
        rows.push(TailIntegralRow {
            big_a,
            quadrature,
            closed_form,
            rel_err,
            explicit_bound,
            within_explicit_bound: quadrature <= explicit_bound * (1.0 + 1e-12),
        });
    }
    Ok(TailIntegralReport { a, rows })
}

/// Which of the proof's three tau regions a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauCase {
    Negative,
    OffWindow,
    Window,
}

impl TauCase {
    pub fn label(&self) -> &'static str {
        match self {
            TauCase::Negative => "case-I",
            TauCase::OffWindow => "case-II",
            TauCase::Window => "case-III",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothingSample {
    pub case: TauCase,
    pub xi: f64,
    pub tau: f64,
    /// Prefactored value at this sample; None marks a flagged quadrature
    /// failure (the audit continues).
    pub value: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SmoothingReport {
    pub eps: f64,
    pub b: f64,
    pub gamma: f64,
    pub a: f64,
    pub s: f64,
    pub samples: Vec<SmoothingSample>,
    pub max_total: f64,
    /// Running max restricted to the first nine tenths of the xi range
    /// (xi <= xi_max / 10 on the log-spaced schedule).
    pub max_early: f64,
    /// Relative increase contributed by the last xi decade.
    pub last_decade_increase: f64,
    pub flagged: usize,
}

/// Sampled boundedness audit of the reduced smoothing supremum
///
/// ```text
/// sup_{xi, tau}  <xi>^{2a} <tau - d_eps(xi)>^{-2 gamma}
///   * int <eps xi1>^{-4} |xi1|^{-1/3} / <P(xi2)>^{2b}  d xi2 d xi1
/// ```
///
/// at sampled (xi, tau) covering the three proof cases. The xi2 integral is
/// split at the cubic's root and at 0; the xi1 singularity |xi1|^{-1/3} is
/// removed exactly by the substitution xi1 = u^3. The parameter s enters the
/// hypothesis box only (the reduced integrand is s-free).
pub fn smoothing_supremum_sample(
    eps: f64,
    b: f64,
    gamma: f64,
    a: f64,
    s: f64,
    sample_count: usize,
) -> Result<SmoothingReport> {
    if !(eps > 0.0) {
        return Err(Error::Config("smoothing audit needs eps > 0".into()));
    }
    if !(s >= 0.0) {
        return Err(Error::Config(format!("need s >= 0, got {s}")));
    }
    if !((1.0 / 3.0..0.5).contains(&gamma)) {
        return Err(Error::Config(format!("need gamma in [1/3, 1/2), got {gamma}")));
    }
    if !(b > 0.5 && b < 1.0 - gamma) {
        return Err(Error::Config(format!(
            "need b in (1/2, 1 - gamma) = (0.5, {}), got {b}",
            1.0 - gamma
        )));
    }
    if !((0.0..4.0 / 3.0).contains(&a)) {
        return Err(Error::Config(format!("need a in [0, 4/3), got {a}")));
    }
    if sample_count == 0 {
        return Err(Error::Config("sample count must be positive".into()));
    }

    // 12 tau values per xi covering the three cases
    let taus_per_xi = 12usize;
    let n_xi = sample_count.div_ceil(taus_per_xi).max(2);
    let (xi_lo, xi_hi) = (0.1f64, 1e3f64);
    let sym = DispersionSymbol { eps };

    let mut points: Vec<(f64, f64, TauCase)> = Vec::new();
    for i in 0..n_xi {
        let xi = xi_lo * (xi_hi / xi_lo).powf(i as f64 / (n_xi - 1) as f64);
        let d = sym.eval(xi);
        let schedule: [(f64, TauCase); 12] = [
            (-10.0 * d, TauCase::Negative),
            (-d, TauCase::Negative),
            (-0.1 * d, TauCase::Negative),
            (0.0, TauCase::OffWindow),
            (0.25 * d, TauCase::OffWindow),
            (0.5 * d, TauCase::OffWindow),
            (2.0 * d, TauCase::OffWindow),
            (10.0 * d, TauCase::OffWindow),
            (0.55 * d, TauCase::Window),
            (d, TauCase::Window),
            (1.5 * d, TauCase::Window),
            (1.95 * d, TauCase::Window),
        ];
        for (tau, case) in schedule {
            points.push((xi, tau, case));
        }
    }

    let samples: Vec<SmoothingSample> = points
        .par_iter()
        .map(|&(xi, tau, case)| {
            let value = smoothing_value(eps, b, gamma, a, xi, tau).ok();
            SmoothingSample {
                case,
                xi,
                tau,
                value,
            }
        })
        .collect();

    let mut max_total: f64 = 0.0;
    let mut max_early: f64 = 0.0;
    let cutoff = xi_hi / 10.0;
    let mut flagged = 0;
    for sm in &samples {
        match sm.value {
            Some(v) => {
                max_total = max_total.max(v);
                if sm.xi <= cutoff {
                    max_early = max_early.max(v);
                }
            }
            None => flagged += 1,
        }
    }
    let last_decade_increase = if max_early > 0.0 {
        (max_total - max_early) / max_early
    } else {
        f64::INFINITY
    };
    Ok(SmoothingReport {
        eps,
        b,
        gamma,
        a,
        s,
        samples,
        max_total,
        max_early,
        last_decade_increase,
        flagged,
    })
}

/// Prefactored smoothing value at one (xi, tau).
///
/// Nested quadrature with explicit truncation: the inner xi2 integral is cut
/// where the integrand follows its (4 eps^2 xi2^3)^{-2b} asymptote and the
/// remainder is added in closed form; the outer xi1 integral is cut where
/// the <eps xi1>^{-4} damping makes the remainder ~1e-17 of the total. The
/// outer tolerance sits above the inner tolerance so the inner quadrature's
/// evaluation noise cannot stall the refinement.
pub fn smoothing_value(eps: f64, b: f64, gamma: f64, a: f64, xi: f64, tau: f64) -> Result<f64> {
    let sym = DispersionSymbol { eps };
    let d = sym.eval(xi);
    let prefactor = bracket(xi).powf(2.0 * a) * bracket(tau - d).powf(-2.0 * gamma);

    // inner xi2 integral for a fixed xi1
    let inner = |xi1: f64| -> Result<f64> {
        let lin = xi1.abs().powf(2.0 / 3.0) * (eps * eps * xi1 * xi1 + 2.0);
        let y = xi1 - xi;
        let c = ((1.0 + eps * eps * y * y) * y * y + tau).abs();
        let root = if xi1.abs() < 1e-12 {
            -(c / (4.0 * eps * eps)).cbrt()
        } else {
            let q = eps * eps * xi1 * xi1 + 2.0;
            let arg = 3.0 * 3.0f64.sqrt() * eps * c / (xi1.abs() * q.powf(1.5));
            -(xi1.abs().powf(1.0 / 3.0) * q.sqrt() / (3.0f64.sqrt() * eps))
                * ((arg.asinh()) / 3.0).sinh()
        };
        let f = move |x2: f64| {
            let p = ((4.0 * eps * eps * x2) * x2 + lin) * x2 + c;
            (1.0 + p * p).powf(-b)
        };
        // beyond cut the integrand tracks (4 eps^2 |xi2|^3)^{-2b}
        let cut = 200.0 * root.abs().max(1.0 / eps.min(1.0));
        let core = adaptive(
            &f,
            -cut,
            cut,
            1e-6,
            1e-300,
            500,
            &[2.0 * root, root, 0.5 * root, 0.0],
        )?;
        let tail = 2.0 * (4.0 * eps * eps).powf(-2.0 * b) * cut.powf(1.0 - 6.0 * b)
            / (6.0 * b - 1.0);
        Ok(core.value + tail)
    };

    // outer xi1 integral with xi1 = sign * u^3 (removes the |xi1|^{-1/3}
    // singularity: |xi1|^{-1/3} d xi1 = 3 u du); truncated where the
    // <eps xi1>^{-4} damping is ~1e-20
    let u_max = (1e5 / eps).cbrt();
    let mut total = 0.0;
    for sign in [1.0f64, -1.0] {
        let g = |u: f64| -> f64 {
            let xi1 = sign * u * u * u;
            let damp = {
                let t = eps * xi1;
                1.0 / ((1.0 + t * t) * (1.0 + t * t))
            };
            match inner(xi1) {
                Ok(v) => 3.0 * u * damp * v,
                Err(_) => f64::NAN,
            }
        };
        let mut breaks: Vec<f64> = vec![(0.5 * xi).cbrt(), xi.cbrt(), (2.0 * xi).cbrt()];
        if tau < 0.0 {
            // the absolute value's argument vanishes along |xi1 - xi| = y*
            let y_star =
                (((1.0 + 4.0 * eps * eps * (-tau)).sqrt() - 1.0) / (2.0 * eps * eps)).sqrt();
            for z in [xi - y_star, xi + y_star] {
                if sign * z > 0.0 {
                    breaks.push((sign * z).cbrt());
                }
            }
        }
        breaks.retain(|&u| u < u_max);
        let r = adaptive(&g, 0.0, u_max, 1e-4, 1e-300, 300, &breaks)?;
        if !r.value.is_finite() {
            return Err(Error::Numerics("smoothing outer integral failed".into()));
        }
        total += r.value;
    }
    Ok(prefactor * total)
}
