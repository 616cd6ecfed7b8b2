//! Fourier-multiplier operators, Sobolev norms, and the exact linear
//! propagator for the quartic dispersion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Space};

/// Japanese bracket <xi> = (1 + xi^2)^(1/2).
#[inline]
pub fn bracket(xi: f64) -> f64 {
    (1.0 + xi * xi).sqrt()
}

/// Quartic dispersion relation d_eps(xi) = xi^2 + eps^2 * xi^4.
///
/// The evaluation groups as `x2 + (eps*eps) * x2 * x2` with `x2 = xi*xi`;
/// callers comparing against the defining formula must use the same grouping
/// to get bit-exact agreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSymbol {
    pub eps: f64,
}

impl DispersionSymbol {
    pub fn new(eps: f64) -> Result<DispersionSymbol> {
        if !(eps >= 0.0) {
            return Err(Error::Config(format!(
                "quantum parameter must satisfy eps >= 0, got {eps}"
            )));
        }
        Ok(DispersionSymbol { eps })
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let x2 = xi * xi;
        x2 + (self.eps * self.eps) * x2 * x2
    }
}

/// Apply a frequency multiplier `m(xi)` pointwise. The input's space tag is
/// preserved on the output; transforms are inserted internally as needed.
///
/// A non-finite multiplier value at any lattice frequency is a
/// numerical-domain error.
pub fn apply_multiplier(f: &Field, m: impl Fn(f64) -> Complex64) -> Result<Field> {
    let grid = f.grid().clone();
    let mut hat = f.to_frequency();
    for (idx, v) in hat.values_mut().iter_mut().enumerate() {
        let mv = m(grid.freq(idx));
        if !mv.re.is_finite() || !mv.im.is_finite() {
            return Err(Error::Numerics(format!(
                "multiplier is not finite at xi = {}",
                grid.freq(idx)
            )));
        }
        *v *= mv;
    }
    match f.space() {
        Space::Frequency => Ok(hat),
        Space::Physical => Ok(hat.to_physical()),
    }
}

/// The smoothing operator J_eps = (I - eps^2 Lap)^(-1), i.e. the real even
/// multiplier 1/(1 + eps^2 xi^2). J_0 is the identity; for every eps >= 0 it
/// is an L2 (indeed every H^s) contraction.
pub fn apply_j(f: &Field, eps: f64) -> Field {
    let e2 = eps * eps;
    apply_multiplier(f, |xi| Complex64::new(1.0 / (1.0 + e2 * xi * xi), 0.0))
        .expect("J multiplier is finite")
}

/// Sobolev norm ||f||_{H^s} via the frequency-weighted Parseval sum
/// (1/L) * sum_k <xi_k>^{2s} |fhat(xi_k)|^2. Negative s is permitted.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let hat = f.to_frequency();
    let grid = f.grid();
    let mut sum = 0.0;
    for (idx, v) in hat.values().iter().enumerate() {
        let w = bracket(grid.freq(idx)).powf(2.0 * s);
        sum += w * v.norm_sqr();
    }
    (sum / grid.length()).sqrt()
}

/// Exact linear propagator U_eps(t): multiplier e^{-i t d_eps(xi)}.
/// Unitary on every H^s; the input space tag is preserved.
pub fn linear_propagate(f: &Field, t: f64, eps: f64) -> Field {
    let sym = DispersionSymbol { eps };
    apply_multiplier(f, |xi| {
        let phase = -t * sym.eval(xi);
        Complex64::new(phase.cos(), phase.sin())
    })
    .expect("propagator multiplier is finite")
}
