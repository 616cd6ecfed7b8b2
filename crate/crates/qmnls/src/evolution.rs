//! Time integration of the mNLS by Strang splitting.
//!
//! Both substeps are solved exactly. The linear flow is the multiplier
//! `e^{-i dt d_eps(xi)}`. For the nonlinear substep `u_t = i J_eps(|u|^2) u`,
//! the phase `J_eps(|u|^2)` is real, so `|u(x)|` is pointwise invariant along
//! the subflow and the substep integrates in closed form,
//! `u <- e^{i dt J_eps(|u|^2)} u`. The composition is the symmetric
//! N(dt/2) . Lin(dt) . N(dt/2), second order in dt, with mass conserved to
//! roundoff (every substep is L2-unitary).
//!
//! `eps = 0` is a first-class value: the cubic NLS path shares all code.

use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field, Space};
use crate::grid::Grid;
use crate::spectral::{apply_j, bracket, linear_propagate, sobolev_norm, DispersionSymbol};

/// Initial data for evolution experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum {
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    PlaneWaveModulated {
        amplitude: f64,
        wavenumber: f64,
        width: f64,
    },
    /// The special limit profile, built frequency-side as
    /// `uhat(xi) = <xi>^{-s} sqrt(2 pi) e^{-xi^2/2}` (one dimension).
    SpecialLimitProfile { s: f64 },
    FromFile { path: PathBuf },
}

impl InitialDatum {
    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> InitialDatum {
        InitialDatum::Gaussian {
            amplitude,
            width,
            center,
        }
    }

    /// Sample the datum on `grid`, returning a physical-space field.
    pub fn realize(&self, grid: &Arc<Grid>) -> Result<Field> {
        let field = match self {
            InitialDatum::Gaussian {
                amplitude,
                width,
                center,
            } => {
                if !(*width > 0.0) {
                    return Err(Error::Config(format!("gaussian width must be > 0, got {width}")));
                }
                let (a, w, c) = (*amplitude, *width, *center);
                Field::from_fn_physical(grid.clone(), move |x| {
                    Complex64::new(a * (-(x - c) * (x - c) / (2.0 * w * w)).exp(), 0.0)
                })
            }
            InitialDatum::PlaneWaveModulated {
                amplitude,
                wavenumber,
                width,
            } => {
                if !(*width > 0.0) {
                    return Err(Error::Config(format!(
                        "modulated plane-wave width must be > 0, got {width}"
                    )));
                }
                let (a, k, w) = (*amplitude, *wavenumber, *width);
                Field::from_fn_physical(grid.clone(), move |x| {
                    let env = a * (-x * x / (2.0 * w * w)).exp();
                    Complex64::new(env * (k * x).cos(), env * (k * x).sin())
                })
            }
            InitialDatum::SpecialLimitProfile { s } => {
                let s = *s;
                let hat = Field::from_fn_frequency(grid.clone(), move |xi| {
                    let amp = bracket(xi).powf(-s)
                        * (2.0 * std::f64::consts::PI).sqrt()
                        * (-xi * xi / 2.0).exp();
                    Complex64::new(amp, 0.0)
                });
                inverse_transform(&hat)?
            }
            InitialDatum::FromFile { path } => {
                let loaded = crate::checkpoint::read(path)?;
                if loaded.field.grid().n() != grid.n()
                    || loaded.field.grid().length() != grid.length()
                {
                    return Err(Error::Config(format!(
                        "checkpoint grid ({}, {}) does not match configured grid ({}, {})",
                        loaded.field.grid().n(),
                        loaded.field.grid().length(),
                        grid.n(),
                        grid.length()
                    )));
                }
                loaded.field
            }
        };
        if !field.is_finite() {
            return Err(Error::Config("initial datum is not finite everywhere".into()));
        }
        Ok(field)
    }

    /// Short stable identifier used in CSV rows and file names.
    pub fn id(&self) -> String {
        match self {
            InitialDatum::Gaussian {
                amplitude,
                width,
                center,
            } => format!("gaussian-a{amplitude}-w{width}-c{center}"),
            InitialDatum::PlaneWaveModulated {
                amplitude,
                wavenumber,
                width,
            } => format!("pwmod-a{amplitude}-k{wavenumber}-w{width}"),
            InitialDatum::SpecialLimitProfile { s } => format!("slp-s{s}"),
            InitialDatum::FromFile { path } => format!(
                "file-{}",
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            ),
        }
    }
}

/// Full description of one evolution experiment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub length: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    pub datum: InitialDatum,
    /// Steps between diagnostic samples (>= 1).
    pub diag_stride: usize,
    /// Sobolev orders tracked alongside mass and energy.
    pub sobolev_orders: Vec<f64>,
    /// Steps between state dumps; 0 = never.
    pub checkpoint_stride: usize,
    /// Apply the 2/3-rule anti-aliasing mask each step. Off by default; the
    /// cubic nonlinearity aliases, but the conservation diagnostics detect
    /// contamination, and the flag lets runs compare both.
    pub dealias: bool,
}

impl RunConfig {
    pub fn new(n: usize, length: f64, eps: f64, dt: f64, t_final: f64, datum: InitialDatum) -> RunConfig {
        RunConfig {
            n,
            length,
            eps,
            dt,
            t_final,
            datum,
            diag_stride: 1,
            sobolev_orders: Vec::new(),
            checkpoint_stride: 0,
            dealias: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n, self.length)?;
        if !(self.eps >= 0.0) {
            return Err(Error::Config(format!("eps must be >= 0, got {}", self.eps)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::Config(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if self.dt >= self.t_final {
            return Err(Error::Config(format!(
                "dt = {} must be smaller than t_final = {}",
                self.dt, self.t_final
            )));
        }
        if self.diag_stride == 0 {
            return Err(Error::Config("diag_stride must be >= 1".into()));
        }
        if self.sobolev_orders.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("sobolev orders must be finite".into()));
        }
        // The fastest linear phase is applied exactly; overflow of the phase
        // argument is a reporting concern, not a stability bound.
        let grid = Grid::new(self.n, self.length)?;
        let sym = DispersionSymbol::new(self.eps)?;
        let phase = self.dt * sym.eval(grid.max_freq());
        if !phase.is_finite() {
            return Err(Error::Config(format!(
                "dt * d_eps(xi_max) overflows ({phase}); reduce dt or the grid resolution"
            )));
        }
        Ok(())
    }

    /// Largest per-step linear phase, dt * d_eps(xi_max). Reported in run
    /// summaries.
    pub fn max_linear_phase(&self) -> f64 {
        let grid = Grid::new(self.n, self.length).expect("validated grid");
        self.dt * DispersionSymbol { eps: self.eps }.eval(grid.max_freq())
    }
}

/// Time series of mass, energy, and tracked Sobolev norms.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// Tracked orders, aligned with the rows of `hs_norms`.
    pub orders: Vec<f64>,
    /// `hs_norms[i][j]` is the H^{orders[i]} norm at `times[j]`.
    pub hs_norms: Vec<Vec<f64>>,
}

impl Diagnostics {
    fn new(orders: &[f64]) -> Diagnostics {
        Diagnostics {
            orders: orders.to_vec(),
            hs_norms: vec![Vec::new(); orders.len()],
            ..Default::default()
        }
    }

    fn record(&mut self, t: f64, field: &Field, eps: f64) {
        self.times.push(t);
        self.mass.push(mass(field));
        self.energy.push(energy(field, eps));
        for (i, &s) in self.orders.iter().enumerate() {
            self.hs_norms[i].push(sobolev_norm(field, s));
        }
    }

    /// Peak relative mass deviation from the initial sample.
    pub fn mass_drift(&self) -> f64 {
        relative_drift(&self.mass)
    }

    /// Peak relative energy deviation from the initial sample.
    pub fn energy_drift(&self) -> f64 {
        relative_drift(&self.energy)
    }
}

fn relative_drift(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let base = series[0];
    let denom = base.abs().max(f64::MIN_POSITIVE);
    series
        .iter()
        .map(|v| (v - base).abs() / denom)
        .fold(0.0, f64::max)
}

/// MASS = ||u||^2_{L2}, the squared discrete L2 norm.
pub fn mass(f: &Field) -> f64 {
    let norm = f.l2_norm();
    norm * norm
}

/// ENERGY[u] = eps^2/2 ||u_xx||^2 + 1/2 ||u_x||^2 - 1/4 int J_eps(|u|^2) |u|^2.
///
/// The derivative terms are computed spectrally. `J_eps(|u|^2)` is real for
/// any u (real even multiplier acting on a real function), so the quartic
/// term is a plain integral of a real product.
pub fn energy(f: &Field, eps: f64) -> f64 {
    let grid = f.grid().clone();
    let hat = f.to_frequency();
    let mut grad_sq = 0.0;
    let mut lap_sq = 0.0;
    for (m, v) in hat.values().iter().enumerate() {
        let xi2 = grid.freq(m) * grid.freq(m);
        let a = v.norm_sqr();
        grad_sq += xi2 * a;
        lap_sq += xi2 * xi2 * a;
    }
    grad_sq /= grid.length();
    lap_sq /= grid.length();

    let phys = f.to_physical();
    let w: Vec<f64> = phys.values().iter().map(|z| z.norm_sqr()).collect();
    let w_field = Field::new(
        grid.clone(),
        w.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        Space::Physical,
    )
    .expect("matching length");
    let jw = apply_j(&w_field, eps);
    let quartic: f64 = jw
        .values()
        .iter()
        .zip(w.iter())
        .map(|(jz, &wz)| jz.re * wz)
        .sum::<f64>()
        * grid.dx();

    0.5 * eps * eps * lap_sq + 0.5 * grad_sq - 0.25 * quartic
}

/// Exact nonlinear substep u <- e^{i dt J_eps(|u|^2)} u (physical space).
///
/// The pointwise modulus is invariant and mass is conserved up to roundoff.
pub fn nonlinear_step(f: &Field, dt: f64, eps: f64) -> Field {
    nonlinear_step_opts(f, dt, eps, false)
}

fn nonlinear_step_opts(f: &Field, dt: f64, eps: f64, dealias: bool) -> Field {
    let phys = f.to_physical();
    let grid = phys.grid().clone();
    let w: Vec<Complex64> = phys
        .values()
        .iter()
        .map(|z| Complex64::new(z.norm_sqr(), 0.0))
        .collect();
    let w_field = Field::new(grid.clone(), w, Space::Physical).expect("matching length");
    let cutoff = 2.0 / 3.0 * grid.max_freq();
    let e2 = eps * eps;
    let mut w_hat = forward_transform(&w_field).expect("physical input");
    for (m, v) in w_hat.values_mut().iter_mut().enumerate() {
        let xi = grid.freq(m);
        let mut mult = 1.0 / (1.0 + e2 * xi * xi);
        if dealias && xi.abs() > cutoff {
            mult = 0.0;
        }
        *v *= mult;
    }
    let phase = inverse_transform(&w_hat).expect("frequency input");
    let mut out = phys;
    for (u, p) in out.values_mut().iter_mut().zip(phase.values().iter()) {
        let theta = dt * p.re;
        *u *= Complex64::new(theta.cos(), theta.sin());
    }
    out
}

/// One symmetric splitting step N(dt/2) . Lin(dt) . N(dt/2).
pub fn strang_step(f: &Field, dt: f64, eps: f64) -> Field {
    strang_step_opts(f, dt, eps, false)
}

pub(crate) fn strang_step_opts(f: &Field, dt: f64, eps: f64, dealias: bool) -> Field {
    let half = nonlinear_step_opts(f, 0.5 * dt, eps, dealias);
    let lin = linear_propagate(&half, dt, eps);
    let mut out = nonlinear_step_opts(&lin, 0.5 * dt, eps, dealias);
    if dealias {
        let grid = out.grid().clone();
        let cutoff = 2.0 / 3.0 * grid.max_freq();
        let mut hat = forward_transform(&out).expect("physical input");
        for (m, v) in hat.values_mut().iter_mut().enumerate() {
            if grid.freq(m).abs() > cutoff {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        out = inverse_transform(&hat).expect("frequency input");
    }
    out
}

/// A state dump produced during [`evolve`].
#[derive(Debug, Clone)]
pub struct CheckpointRecord {
    pub step: usize,
    pub t: f64,
    pub field: Field,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub final_field: Field,
    pub diagnostics: Diagnostics,
    pub checkpoints: Vec<CheckpointRecord>,
    pub steps: usize,
}

/// Run the full experiment described by `cfg`.
///
/// Deterministic for a fixed transform implementation. Diagnostics are
/// sampled at step 0, every `diag_stride` steps, and the final step; the
/// state is checked for NaN/Inf at every sample and the run aborts with the
/// offending step index and the last-good diagnostics.
pub fn evolve(cfg: &RunConfig) -> Result<EvolveResult> {
    cfg.validate()?;
    let grid = Grid::shared(cfg.n, cfg.length)?;
    let mut u = cfg.datum.realize(&grid)?.to_physical();

    let n_steps = (cfg.t_final / cfg.dt).round() as usize;
    if n_steps == 0 {
        return Err(Error::Config("t_final/dt rounds to zero steps".into()));
    }

    let mut diagnostics = Diagnostics::new(&cfg.sobolev_orders);
    diagnostics.record(0.0, &u, cfg.eps);

    let mut checkpoints = Vec::new();
    if cfg.checkpoint_stride > 0 {
        checkpoints.push(CheckpointRecord {
            step: 0,
            t: 0.0,
            field: u.clone(),
        });
    }

    for step in 1..=n_steps {
        u = strang_step_opts(&u, cfg.dt, cfg.eps, cfg.dealias);
        let t = step as f64 * cfg.dt;
        let sample_due = step % cfg.diag_stride == 0 || step == n_steps;
        if sample_due {
            if !u.is_finite() {
                let last_good_t = diagnostics.times.last().copied().unwrap_or(0.0);
                return Err(Error::Blowup {
                    step,
                    t,
                    last_good_t,
                    diagnostics: Box::new(diagnostics),
                });
            }
            diagnostics.record(t, &u, cfg.eps);
        }
        if cfg.checkpoint_stride > 0 && step % cfg.checkpoint_stride == 0 {
            checkpoints.push(CheckpointRecord {
                step,
                t,
                field: u.clone(),
            });
        }
    }

    Ok(EvolveResult {
        final_field: u,
        diagnostics,
        checkpoints,
        steps: n_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gaussian_cfg() -> RunConfig {
        RunConfig::new(
            512,
            40.0,
            0.5,
            1e-3,
            1.0,
            InitialDatum::gaussian(1.0, 1.0, 0.0),
        )
    }

    #[test]
    fn mass_of_zero_and_constant() {
        let g = Grid::shared(64, 7.0).unwrap();
        assert_eq!(mass(&Field::zeros(g.clone(), Space::Physical)), 0.0);
        let c = Complex64::new(0.3, -1.2);
        let f = Field::from_fn_physical(g, move |_| c);
        let expect = c.norm_sqr() * 7.0;
        assert!((mass(&f) - expect).abs() / expect < 1e-13);
    }

    #[test]
    fn mass_matches_parseval_sum() {
        let g = Grid::shared(128, 31.0).unwrap();
        let mut rng = StdRng::seed_from_u64(77);
        let f = Field::new(
            g.clone(),
            (0..g.n())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
            Space::Physical,
        )
        .unwrap();
        let hat = forward_transform(&f).unwrap();
        let parseval: f64 =
            hat.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / g.length();
        assert!((mass(&f) - parseval).abs() / parseval < 1e-12);
    }

    #[test]
    fn energy_zero_field() {
        let g = Grid::shared(32, 5.0).unwrap();
        assert_eq!(energy(&Field::zeros(g, Space::Physical), 0.7), 0.0);
    }

    #[test]
    fn energy_plane_wave_closed_form() {
        // sqrt(a) e^{ix} on (n, 2*pi), eps = 0:
        // E = 1/2 * a * 2*pi - 1/4 * a^2 * 2*pi
        let two_pi = 2.0 * std::f64::consts::PI;
        let a: f64 = 0.37;
        let g = Grid::shared(64, two_pi).unwrap();
        let amp = a.sqrt();
        let f = Field::from_fn_physical(g, move |x| Complex64::new(amp * x.cos(), amp * x.sin()));
        let expect = 0.5 * a * two_pi - 0.25 * a * a * two_pi;
        let got = energy(&f, 0.0);
        assert!((got - expect).abs() / expect.abs() < 1e-12, "{got} vs {expect}");
    }

    /// Composite Simpson on [a, b] with an even number of subintervals.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
        let m = intervals + intervals % 2;
        let h = (b - a) / m as f64;
        let mut acc = f(a) + f(b);
        for j in 1..m {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + j as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn energy_gaussian_matches_quadrature_oracle() {
        // Line-integral oracle on an 8x refined lattice: analytic derivatives
        // of the Gaussian, J_eps via its exponential kernel
        // (1/(2 eps)) e^{-|x-y|/eps}, convolution split at the kink.
        let eps = 0.5;
        let n = 512usize;
        let l = 40.0;
        let g = Grid::shared(n, l).unwrap();
        let u = |x: f64| (-x * x / 2.0).exp();
        let du = |x: f64| -x * (-x * x / 2.0).exp();
        let d2u = |x: f64| (x * x - 1.0) * (-x * x / 2.0).exp();
        let w = move |x: f64| u(x) * u(x);

        let lap_sq = simpson(&|x| d2u(x) * d2u(x), -l / 2.0, l / 2.0, 8 * n);
        let grad_sq = simpson(&|x| du(x) * du(x), -l / 2.0, l / 2.0, 8 * n);
        let kernel = move |x: f64, y: f64| (-(x - y).abs() / eps).exp() / (2.0 * eps);
        let v_at = move |x: f64| {
            simpson(&|y| kernel(x, y) * w(y), -l / 2.0, x, 2048)
                + simpson(&|y| kernel(x, y) * w(y), x, l / 2.0, 2048)
        };
        let quartic = simpson(&move |x| v_at(x) * w(x), -l / 2.0, l / 2.0, 1024);
        let oracle = 0.5 * eps * eps * lap_sq + 0.5 * grad_sq - 0.25 * quartic;

        let f = InitialDatum::gaussian(1.0, 1.0, 0.0).realize(&g).unwrap();
        let got = energy(&f, eps);
        assert!(
            (got - oracle).abs() / oracle.abs() < 1e-6,
            "energy {got} vs oracle {oracle}"
        );
    }

    #[test]
    fn nonlinear_step_zero_and_constant() {
        let g = Grid::shared(32, 4.0).unwrap();
        let z = Field::zeros(g.clone(), Space::Physical);
        let out = nonlinear_step(&z, 0.1, 0.5);
        assert!(out.l2_norm() == 0.0);

        let c = Complex64::new(0.8, 0.3);
        let f = Field::from_fn_physical(g, move |_| c);
        let dt = 0.05;
        let out = nonlinear_step(&f, dt, 1.7);
        // DC mode through J_eps: J(|c|^2) = |c|^2
        let theta = dt * c.norm_sqr();
        let expect = c * Complex64::new(theta.cos(), theta.sin());
        for v in out.values() {
            assert!((v - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn nonlinear_step_matches_rk4_oracle() {
        // Classical RK4 on the substep ODE u_t = i J_eps(|u|^2) u, 100
        // substeps, recomputing the phase at every stage.
        let g = Grid::shared(64, 12.0).unwrap();
        let eps = 0.4;
        let dt = 1e-3;
        let f = Field::from_fn_physical(g.clone(), |x| {
            Complex64::new((-x * x / 2.0).exp(), 0.4 * (-x * x / 3.0).exp() * x)
        });
        let rhs = |state: &Field| -> Vec<Complex64> {
            let w = Field::new(
                state.grid().clone(),
                state
                    .values()
                    .iter()
                    .map(|z| Complex64::new(z.norm_sqr(), 0.0))
                    .collect(),
                Space::Physical,
            )
            .unwrap();
            let j = apply_j(&w, eps);
            state
                .values()
                .iter()
                .zip(j.values().iter())
                .map(|(u, v)| Complex64::new(0.0, 1.0) * v.re * u)
                .collect()
        };
        let mut state = f.clone();
        let m = 100;
        let h = dt / m as f64;
        for _ in 0..m {
            let k1 = rhs(&state);
            let add = |s: &Field, k: &[Complex64], c: f64| {
                Field::new(
                    s.grid().clone(),
                    s.values()
                        .iter()
                        .zip(k.iter())
                        .map(|(u, kk)| u + kk * c)
                        .collect(),
                    Space::Physical,
                )
                .unwrap()
            };
            let k2 = rhs(&add(&state, &k1, 0.5 * h));
            let k3 = rhs(&add(&state, &k2, 0.5 * h));
            let k4 = rhs(&add(&state, &k3, h));
            let vals: Vec<Complex64> = state
                .values()
                .iter()
                .enumerate()
                .map(|(i, u)| u + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
                .collect();
            state = Field::new(state.grid().clone(), vals, Space::Physical).unwrap();
        }
        let exact = nonlinear_step(&f, dt, eps);
        let rel = exact.l2_distance(&state) / exact.l2_norm();
        assert!(rel < 1e-13, "substep vs RK4 oracle: {rel}");
    }

    #[test]
    fn nonlinear_step_preserves_modulus_pointwise() {
        let g = Grid::shared(128, 20.0).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let f = Field::new(
            g.clone(),
            (0..g.n())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
            Space::Physical,
        )
        .unwrap();
        let out = nonlinear_step(&f, 0.37, 0.9);
        for (a, b) in f.values().iter().zip(out.values().iter()) {
            assert!((a.norm() - b.norm()).abs() < 1e-13);
        }
        let m0 = mass(&f);
        let m1 = mass(&out);
        assert!((m0 - m1).abs() / m0 < 1e-14);
    }

    #[test]
    fn strang_step_tiny_amplitude_is_linear() {
        let g = Grid::shared(256, 40.0).unwrap();
        let datum = InitialDatum::gaussian(1e-6, 1.0, 0.0).realize(&g).unwrap();
        let dt = 1e-2;
        let split = strang_step(&datum, dt, 0.5);
        let lin = linear_propagate(&datum, dt, 0.5);
        assert!(split.l2_distance(&lin) < 1e-13);
    }

    #[test]
    fn strang_observed_order_two() {
        // Richardson self-convergence against a dt = 1.25e-4 reference.
        let run = |dt: f64| {
            let cfg = RunConfig {
                dt,
                t_final: 0.5,
                diag_stride: usize::MAX / 2,
                ..gaussian_cfg()
            };
            let cfg = RunConfig {
                n: 256,
                ..cfg
            };
            evolve(&cfg).unwrap().final_field
        };
        let reference = run(1.25e-4);
        let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
            .iter()
            .map(|&dt| run(dt).l2_distance(&reference))
            .collect();
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(
                (order - 2.0).abs() <= 0.1,
                "observed order {order} outside 2.0 +- 0.1 (errors {errs:?})"
            );
        }
    }

    #[test]
    fn nls_soliton_stays_single_bump() {
        // eps = 0, datum sqrt(2) sech(x): the cubic NLS ground state is
        // stationary up to phase, so the evolution stays a single bump.
        let cfg = RunConfig {
            n: 256,
            eps: 0.0,
            datum: InitialDatum::Gaussian {
                amplitude: 0.0,
                width: 1.0,
                center: 0.0,
            },
            ..gaussian_cfg()
        };
        let grid = Grid::shared(cfg.n, cfg.length).unwrap();
        let sech = Field::from_fn_physical(grid, |x| {
            Complex64::new(2.0f64.sqrt() / x.cosh(), 0.0)
        });
        let mut u = sech;
        let steps = 1000;
        let m0 = mass(&u);
        for _ in 0..steps {
            u = strang_step(&u, 1e-3, 0.0);
        }
        let m1 = mass(&u);
        assert!((m1 - m0).abs() / m0 < 1e-12, "mass drift on soliton");
        let moduli: Vec<f64> = u.values().iter().map(|z| z.norm()).collect();
        let peak = moduli.iter().cloned().fold(0.0, f64::max);
        let mut bumps = 0;
        for j in 1..moduli.len() - 1 {
            if moduli[j] > moduli[j - 1] && moduli[j] > moduli[j + 1] && moduli[j] > 0.1 * peak {
                bumps += 1;
            }
        }
        assert_eq!(bumps, 1, "profile should remain a single bump");
    }

    #[test]
    fn evolve_zero_datum() {
        let cfg = RunConfig {
            datum: InitialDatum::gaussian(0.0, 1.0, 0.0),
            diag_stride: 100,
            n: 64,
            ..gaussian_cfg()
        };
        let out = evolve(&cfg).unwrap();
        assert!(out.final_field.l2_norm() == 0.0);
        assert!(out.diagnostics.mass.iter().all(|&m| m == 0.0));
        assert!(out.diagnostics.energy.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn evolve_gaussian_conservation() {
        let cfg = RunConfig {
            diag_stride: 20,
            ..gaussian_cfg()
        };
        let out = evolve(&cfg).unwrap();
        assert!(
            out.diagnostics.mass_drift() <= 1e-11,
            "mass drift {}",
            out.diagnostics.mass_drift()
        );
        assert!(
            out.diagnostics.energy_drift() <= 1e-5,
            "energy drift {}",
            out.diagnostics.energy_drift()
        );

        let halved = RunConfig {
            dt: 5e-4,
            diag_stride: 40,
            ..gaussian_cfg()
        };
        let out2 = evolve(&halved).unwrap();
        let ratio = out.diagnostics.energy_drift() / out2.diagnostics.energy_drift();
        assert!(
            (3.0..=5.0).contains(&ratio),
            "energy drift should shrink ~4x when dt halves, got {ratio}"
        );
    }

    #[test]
    fn evolve_aborts_on_overflow_with_context() {
        // An amplitude of 1e200 overflows |u|^2 in the first nonlinear substep.
        let cfg = RunConfig {
            datum: InitialDatum::gaussian(1e200, 1.0, 0.0),
            n: 64,
            ..gaussian_cfg()
        };
        match evolve(&cfg) {
            Err(Error::Blowup {
                step, diagnostics, ..
            }) => {
                assert_eq!(step, 1);
                assert_eq!(diagnostics.times.len(), 1); // only the t = 0 sample
            }
            other => panic!("expected blow-up abort, got {other:?}"),
        }
    }

    #[test]
    fn evolve_time_reversal() {
        let cfg = RunConfig {
            n: 256,
            t_final: 0.5,
            diag_stride: 1000,
            ..gaussian_cfg()
        };
        let grid = Grid::shared(cfg.n, cfg.length).unwrap();
        let datum = cfg.datum.realize(&grid).unwrap();
        let fwd = evolve(&cfg).unwrap().final_field;
        let mut back = fwd;
        for _ in 0..500 {
            back = strang_step(&back, -1e-3, cfg.eps);
        }
        let rel = back.l2_distance(&datum) / datum.l2_norm();
        assert!(rel < 1e-8, "time reversal defect {rel}");
    }

    #[test]
    fn zero_nonlinearity_limit_scaling() {
        // For datum a*g, ||evolve - linear||_{L2}/a = O(a^2).
        let run = |a: f64| {
            let cfg = RunConfig {
                n: 256,
                t_final: 0.2,
                datum: InitialDatum::gaussian(a, 1.0, 0.0),
                diag_stride: 1000,
                ..gaussian_cfg()
            };
            let grid = Grid::shared(cfg.n, cfg.length).unwrap();
            let datum = cfg.datum.realize(&grid).unwrap();
            let nonlinear = evolve(&cfg).unwrap().final_field;
            let linear = linear_propagate(&datum, 0.2, cfg.eps);
            nonlinear.l2_distance(&linear) / a
        };
        let d2 = run(1e-2);
        let d3 = run(1e-3);
        let ratio = d2 / d3;
        assert!(
            (30.0..300.0).contains(&ratio),
            "normalized defect should scale ~a^2: ratio {ratio}"
        );
    }

    #[test]
    fn special_limit_profile_frequency_construction() {
        let g = Grid::shared(256, 40.0).unwrap();
        let s = 1.0;
        let f = InitialDatum::SpecialLimitProfile { s }.realize(&g).unwrap();
        assert_eq!(f.space(), Space::Physical);
        let hat = forward_transform(&f).unwrap();
        for m in 0..g.n() {
            let xi = g.freq(m);
            let expect =
                bracket(xi).powf(-s) * (2.0 * std::f64::consts::PI).sqrt() * (-xi * xi / 2.0).exp();
            let got = hat.values()[m];
            assert!(
                (got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-10,
                "xi={xi}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn from_file_datum_rejects_grid_mismatch() {
        let dir = std::env::temp_dir().join(format!("qmnls-evo-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.bin");
        let g = Grid::shared(64, 20.0).unwrap();
        let f = InitialDatum::gaussian(1.0, 1.0, 0.0).realize(&g).unwrap();
        crate::checkpoint::write(&path, &f, 0.5, 0.0).unwrap();
        let other = Grid::shared(128, 20.0).unwrap();
        let r = InitialDatum::FromFile { path: path.clone() }.realize(&other);
        assert!(matches!(r, Err(Error::Config(_))));
        // matching grid loads fine
        let ok = InitialDatum::FromFile { path }.realize(&g).unwrap();
        assert_eq!(ok.values(), f.values());
    }

    #[test]
    fn run_config_validation() {
        let mut cfg = gaussian_cfg();
        cfg.dt = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = gaussian_cfg();
        cfg.dt = 2.0; // >= t_final
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = gaussian_cfg();
        cfg.n = 100;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        assert!(gaussian_cfg().validate().is_ok());
    }

    #[test]
    fn dealias_flag_keeps_conservation_on_smooth_data() {
        let cfg = RunConfig {
            n: 256,
            t_final: 0.2,
            dealias: true,
            diag_stride: 20,
            ..gaussian_cfg()
        };
        let out = evolve(&cfg).unwrap();
        assert!(out.diagnostics.mass_drift() <= 1e-10);
    }
}
