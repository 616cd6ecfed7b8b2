//! # qmnls
//!
//! A pseudospectral laboratory for the modified nonlinear Schrödinger
//! equation with bi-Laplacian dispersion and nonlocal cubic nonlinearity
//!
//! ```text
//! i u_t + u_xx - eps^2 u_xxxx = -(I - eps^2 d_xx)^{-1}(|u|^2) u
//! ```
//!
//! covering time evolution with conservation diagnostics, the semiclassical
//! eps -> 0 limit, quantitative audits of the cubic-root and kernel bounds
//! behind the smoothing estimate, and variational ground-state solitons.
//!
//! ## Modules
//!
//! - [`grid`], [`field`], [`spectral`] — periodic lattice, transforms,
//!   Fourier multipliers, Sobolev norms, exact linear propagator
//! - [`evolution`] — Strang splitting with an exactly solvable nonlinear
//!   substep, mass/energy diagnostics, checkpointing
//! - [`limits`] — eps -> 0 sweeps, linear-propagator limit integrals,
//!   Sobolev growth tracking
//! - [`kernel_bounds`] — cubic-root formula and two-sided bound audits,
//!   calculus-kernel quadrature checks, smoothing-supremum sampling
//! - [`soliton`] — Petviashvili iteration, action functional, Pohozaev and
//!   Nehari identities, dimension arithmetic
//! - [`quad`] — adaptive Gauss–Kronrod and tanh-sinh quadrature
//! - [`checkpoint`], [`config`], [`cli`] — binary state files, strict run
//!   configs, and the `qmnls` command-line front end
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example evolve_gaussian
//! cargo run --release --example semiclassical_sweep
//! cargo run --release --example limit_plateau
//! cargo run --release --example soliton_ground_state
//! cargo run --release --example kernel_audits
//! cargo run --release --example growth_and_bounds
//! cargo run --release --example negative_s_scaling
//! ```
//!
//! The thin `qmnls` binary drives the same machinery from JSON configs; see
//! the README for the schema and the CSV/checkpoint formats.

pub mod checkpoint;
pub mod cli;
pub mod config;
pub mod error;
pub mod evolution;
pub mod field;
pub mod grid;
pub mod kernel_bounds;
pub mod limits;
pub mod quad;
pub mod report;
pub mod soliton;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{Field, Space};
pub use grid::Grid;
