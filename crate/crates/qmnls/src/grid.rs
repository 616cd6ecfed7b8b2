//! Uniform periodic 1-D lattice and its dual frequency lattice.
//!
//! The line is modeled as a torus of length `L` chosen large enough that the
//! data of interest are negligible at the boundary (below ~1e-14), so the
//! continuum Fourier formulas apply without renormalization constants.
//!
//! Frequency storage follows the transform-native ordering: storage index
//! `m` in `0..n` maps to the signed mode index
//!
//! ```text
//! k(m) = m        for m <  n/2
//! k(m) = m - n    for m >= n/2
//! ```
//!
//! and the dual frequency is `xi_k = 2*pi*k / L`. Use [`Grid::signed_index`]
//! rather than re-deriving this map.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    dx: f64,
    freqs: Vec<f64>,
}

impl Grid {
    /// Build a grid with `n` lattice points (power of two, >= 8) on a domain
    /// of length `length`.
    pub fn new(n: usize, length: f64) -> Result<Grid> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Config(format!(
                "domain length must be positive and finite, got {length}"
            )));
        }
        // n is a power of two, so dx = L/n and dx*n == L are exact in f64.
        let dx = length / n as f64;
        let freqs = (0..n)
            .map(|m| {
                let k = if m < n / 2 {
                    m as i64
                } else {
                    m as i64 - n as i64
                };
                2.0 * std::f64::consts::PI * k as f64 / length
            })
            .collect();
        Ok(Grid {
            n,
            length,
            dx,
            freqs,
        })
    }

    /// Convenience constructor returning a shared handle.
    pub fn shared(n: usize, length: f64) -> Result<Arc<Grid>> {
        Ok(Arc::new(Grid::new(n, length)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Dual frequencies in transform-native storage order.
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// Frequency at storage index `m`.
    pub fn freq(&self, m: usize) -> f64 {
        self.freqs[m]
    }

    /// Signed mode index k for storage index `m` (see module docs).
    pub fn signed_index(&self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Physical coordinate of lattice site `j`; index 0 sits at x = -L/2.
    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx
    }

    /// Largest frequency magnitude on the lattice, |xi| = pi*n/L.
    pub fn max_freq(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / self.length
    }
}
