//! Complex-valued state on a [`Grid`], tagged physical- or frequency-space,
//! with the discrete Fourier transforms connecting them.
//!
//! The transform pair is normalized so discrete and continuum transforms
//! agree for well-resolved, well-localized data:
//!
//! ```text
//! fhat(xi_k) = dx * sum_j f(x_j) e^{-i x_j xi_k}
//! f(x_j)     = (1/L) * sum_k fhat(xi_k) e^{+i x_j xi_k}
//! ```
//!
//! With `x_j = -L/2 + j*dx` this reduces to a plain FFT times `dx * (-1)^m`
//! (the half-domain shift contributes the alternating sign). Parseval holds
//! in the form `||f||^2_{L2,disc} = (1/L) * sum_k |fhat(xi_k)|^2`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Physical,
    Frequency,
}

#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    space: Space,
}

thread_local! {
    // rustfft's planner caches plans by size, so one planner per thread
    // amortizes all transforms of the same grid.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex64], forward: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let plan = if forward {
            planner.plan_fft_forward(buf.len())
        } else {
            planner.plan_fft_inverse(buf.len())
        };
        plan.process(buf);
    });
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>, space: Space) -> Result<Field> {
        if values.len() != grid.n() {
            return Err(Error::Usage(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.n()
            )));
        }
        Ok(Field { grid, values, space })
    }

    pub fn zeros(grid: Arc<Grid>, space: Space) -> Field {
        let n = grid.n();
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
            space,
        }
    }

    /// Sample a function of the physical coordinate onto the lattice.
    pub fn from_fn_physical(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Field {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Field {
            grid,
            values,
            space: Space::Physical,
        }
    }

    /// Set frequency-space values directly from a function of xi.
    pub fn from_fn_frequency(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Field {
        let values = (0..grid.n()).map(|m| f(grid.freq(m))).collect();
        Field {
            grid,
            values,
            space: Space::Frequency,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Discrete L2 norm, computed in whichever space the field lives in
    /// (the two forms agree by Parseval).
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        match self.space {
            Space::Physical => (sum * self.grid.dx()).sqrt(),
            Space::Frequency => (sum / self.grid.length()).sqrt(),
        }
    }

    pub fn l2_distance(&self, other: &Field) -> f64 {
        assert_eq!(self.space, other.space, "l2_distance requires matching spaces");
        assert_eq!(self.grid.n(), other.grid.n());
        let sum: f64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        match self.space {
            Space::Physical => (sum * self.grid.dx()).sqrt(),
            Space::Frequency => (sum / self.grid.length()).sqrt(),
        }
    }

    /// Return the field in physical space (clone if already there).
    pub fn to_physical(&self) -> Field {
        match self.space {
            Space::Physical => self.clone(),
            Space::Frequency => inverse_transform(self).expect("frequency input"),
        }
    }

    /// Return the field in frequency space (clone if already there).
    pub fn to_frequency(&self) -> Field {
        match self.space {
            Space::Frequency => self.clone(),
            Space::Physical => forward_transform(self).expect("physical input"),
        }
    }
}

/// Physical -> frequency transform with the dx-scaled convention above.
pub fn forward_transform(f: &Field) -> Result<Field> {
    if f.space != Space::Physical {
        return Err(Error::Usage(
            "forward_transform expects a physical-space field".into(),
        ));
    }
    let mut values = f.values.clone();
    fft_in_place(&mut values, true);
    let dx = f.grid.dx();
    for (m, v) in values.iter_mut().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *v *= dx * sign;
    }
    Ok(Field {
        grid: f.grid.clone(),
        values,
        space: Space::Frequency,
    })
}

/// Frequency -> physical transform; exact inverse of [`forward_transform`].
pub fn inverse_transform(f: &Field) -> Result<Field> {
    if f.space != Space::Frequency {
        return Err(Error::Usage(
            "inverse_transform expects a frequency-space field".into(),
        ));
    }
    let mut values = f.values.clone();
    for (m, v) in values.iter_mut().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *v *= sign;
    }
    fft_in_place(&mut values, false);
    let inv_l = 1.0 / f.grid.length();
    for v in values.iter_mut() {
        *v *= inv_l;
    }
    Ok(Field {
        grid: f.grid.clone(),
        values,
        space: Space::Physical,
    })
}
