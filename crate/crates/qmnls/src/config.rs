//! Strict flat-JSON run configurations.
//!
//! Every subcommand has its own schema; unknown keys are rejected, numeric
//! fields are validated against the module invariants, and datum parameters
//! use `datum_*` keys so config files stay a single flat object (diff-able
//! and trivially machine-writable by sweep scripts).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::evolution::{InitialDatum, RunConfig};

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFields {
    datum: String,
    #[serde(default)]
    datum_amplitude: Option<f64>,
    #[serde(default)]
    datum_width: Option<f64>,
    #[serde(default)]
    datum_center: Option<f64>,
    #[serde(default)]
    datum_wavenumber: Option<f64>,
    #[serde(default)]
    datum_s: Option<f64>,
    #[serde(default)]
    datum_path: Option<String>,
}

impl DatumFields {
    fn build(&self) -> Result<InitialDatum> {
        let reject_extra = |allowed: &[&str]| -> Result<()> {
            let present: &[(&str, bool)] = &[
                ("datum_amplitude", self.datum_amplitude.is_some()),
                ("datum_width", self.datum_width.is_some()),
                ("datum_center", self.datum_center.is_some()),
                ("datum_wavenumber", self.datum_wavenumber.is_some()),
                ("datum_s", self.datum_s.is_some()),
                ("datum_path", self.datum_path.is_some()),
            ];
            for (name, set) in present {
                if *set && !allowed.contains(name) {
                    return Err(Error::Config(format!(
                        "field {name} does not apply to datum kind '{}'",
                        self.datum
                    )));
                }
            }
            Ok(())
        };
        let need = |opt: Option<f64>, name: &str| {
            opt.ok_or_else(|| {
                Error::Config(format!("datum kind '{}' requires field {name}", self.datum))
            })
        };
        match self.datum.as_str() {
            "gaussian" => {
                reject_extra(&["datum_amplitude", "datum_width", "datum_center"])?;
                Ok(InitialDatum::Gaussian {
                    amplitude: need(self.datum_amplitude, "datum_amplitude")?,
                    width: need(self.datum_width, "datum_width")?,
                    center: self.datum_center.unwrap_or(0.0),
                })
            }
            "plane_wave" => {
                reject_extra(&["datum_amplitude", "datum_width", "datum_wavenumber"])?;
                Ok(InitialDatum::PlaneWaveModulated {
                    amplitude: need(self.datum_amplitude, "datum_amplitude")?,
                    wavenumber: need(self.datum_wavenumber, "datum_wavenumber")?,
                    width: need(self.datum_width, "datum_width")?,
                })
            }
            "special_limit_profile" => {
                reject_extra(&["datum_s"])?;
                Ok(InitialDatum::SpecialLimitProfile {
                    s: need(self.datum_s, "datum_s")?,
                })
            }
            "from_file" => {
                reject_extra(&["datum_path"])?;
                let p = self
                    .datum_path
                    .as_ref()
                    .ok_or_else(|| Error::Config("datum kind 'from_file' requires datum_path".into()))?;
                Ok(InitialDatum::FromFile {
                    path: PathBuf::from(p),
                })
            }
            other => Err(Error::Config(format!(
                "unknown datum kind '{other}' (expected gaussian, plane_wave, special_limit_profile, from_file)"
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveFile {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    #[serde(flatten)]
    datum: DatumFields,
    #[serde(default)]
    pub diag_stride: Option<usize>,
    #[serde(default)]
    pub sobolev_orders: Option<Vec<f64>>,
    #[serde(default)]
    pub checkpoint_stride: Option<usize>,
    #[serde(default)]
    pub dealias: Option<bool>,
}

pub fn parse_evolve(path: &Path) -> Result<RunConfig> {
    let file: EvolveFile = read_json(path)?;
    let cfg = RunConfig {
        n: file.n,
        length: file.length,
        eps: file.eps,
        dt: file.dt,
        t_final: file.t_final,
        datum: file.datum.build()?,
        diag_stride: file.diag_stride.unwrap_or(10),
        sobolev_orders: file.sobolev_orders.unwrap_or_default(),
        checkpoint_stride: file.checkpoint_stride.unwrap_or(0),
        dealias: file.dealias.unwrap_or(false),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub s: f64,
    pub t_final: f64,
    pub dt: f64,
    pub eps_list: Vec<f64>,
    #[serde(flatten)]
    datum: DatumFields,
}

pub struct SweepSpec {
    pub n: usize,
    pub length: f64,
    pub s: f64,
    pub t_final: f64,
    pub dt: f64,
    pub eps_list: Vec<f64>,
    pub datum: InitialDatum,
}

pub fn parse_sweep(path: &Path) -> Result<SweepSpec> {
    let file: SweepFile = read_json(path)?;
    if file.eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Config(
            "eps_list must be strictly decreasing".into(),
        ));
    }
    Ok(SweepSpec {
        n: file.n,
        length: file.length,
        s: file.s,
        t_final: file.t_final,
        dt: file.dt,
        eps_list: file.eps_list,
        datum: file.datum.build()?,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitIntegralFile {
    pub profile: String,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    /// Optional finite-t evaluations (pairs with `eps`).
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub t_values: Option<Vec<f64>>,
}

pub struct LimitIntegralSpec {
    pub profile: crate::limits::LimitProfile,
    pub eps: f64,
    pub t_values: Vec<f64>,
}

pub fn parse_limit_integral(path: &Path) -> Result<LimitIntegralSpec> {
    let file: LimitIntegralFile = read_json(path)?;
    let profile = match file.profile.as_str() {
        "special" => crate::limits::LimitProfile::Special {
            s: file
                .s
                .ok_or_else(|| Error::Config("profile 'special' requires s".into()))?,
        },
        "indicator" => crate::limits::LimitProfile::Indicator {
            lo: file
                .lo
                .ok_or_else(|| Error::Config("profile 'indicator' requires lo".into()))?,
            hi: file
                .hi
                .ok_or_else(|| Error::Config("profile 'indicator' requires hi".into()))?,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown profile '{other}' (expected special or indicator)"
            )))
        }
    };
    Ok(LimitIntegralSpec {
        profile,
        eps: file.eps.unwrap_or(1.0),
        t_values: file.t_values.unwrap_or_default(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonFile {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub eps: f64,
    pub tau: f64,
    #[serde(default)]
    pub init_amplitude: Option<f64>,
    #[serde(default)]
    pub init_width: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

pub struct SolitonSpec {
    pub problem: crate::soliton::SolitonProblem,
    pub init_amplitude: f64,
    pub init_width: f64,
    pub tol: f64,
    pub max_iter: usize,
}

pub fn parse_soliton(path: &Path) -> Result<SolitonSpec> {
    let file: SolitonFile = read_json(path)?;
    let problem = crate::soliton::SolitonProblem::new(file.eps, file.tau, file.n, file.length)?;
    let spec = SolitonSpec {
        problem,
        init_amplitude: file.init_amplitude.unwrap_or(1.0),
        init_width: file.init_width.unwrap_or(1.0),
        tol: file.tol.unwrap_or(1e-8),
        max_iter: file.max_iter.unwrap_or(500),
    };
    if !(spec.init_amplitude != 0.0 && spec.init_width > 0.0) {
        return Err(Error::Config(
            "soliton init needs nonzero amplitude and positive width".into(),
        ));
    }
    Ok(spec)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsFile {
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub xi_values: Option<Vec<f64>>,
    #[serde(default)]
    pub tail_exponents: Option<Vec<f64>>,
    #[serde(default)]
    pub tail_thresholds: Option<Vec<f64>>,
    #[serde(default)]
    pub smoothing_b: Option<f64>,
    #[serde(default)]
    pub smoothing_gamma: Option<f64>,
    #[serde(default)]
    pub smoothing_a: Option<f64>,
    #[serde(default)]
    pub smoothing_s: Option<f64>,
    #[serde(default)]
    pub smoothing_samples: Option<usize>,
}

pub struct KernelsSpec {
    pub eps: f64,
    pub xi_values: Vec<f64>,
    pub tail_exponents: Vec<f64>,
    pub tail_thresholds: Vec<f64>,
    pub smoothing_b: f64,
    pub smoothing_gamma: f64,
    pub smoothing_a: f64,
    pub smoothing_s: f64,
    pub smoothing_samples: usize,
}

pub fn parse_kernels(path: &Path) -> Result<KernelsSpec> {
    let file: KernelsFile = read_json(path)?;
    Ok(KernelsSpec {
        eps: file.eps.unwrap_or(1.0),
        xi_values: file.xi_values.unwrap_or_else(|| vec![2.0, 10.0, 50.0]),
        tail_exponents: file
            .tail_exponents
            .unwrap_or_else(|| vec![0.1, 0.25, 0.5, 0.75, 0.9]),
        tail_thresholds: file
            .tail_thresholds
            .unwrap_or_else(|| vec![0.1, 1.0, 10.0, 1000.0]),
        smoothing_b: file.smoothing_b.unwrap_or(0.55),
        smoothing_gamma: file.smoothing_gamma.unwrap_or(0.4),
        smoothing_a: file.smoothing_a.unwrap_or(1.0),
        smoothing_s: file.smoothing_s.unwrap_or(0.0),
        smoothing_samples: file.smoothing_samples.unwrap_or(1008),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthFile {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    pub s_list: Vec<f64>,
    #[serde(flatten)]
    datum: DatumFields,
}

pub struct GrowthSpec {
    pub n: usize,
    pub length: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    pub s_list: Vec<f64>,
    pub datum: InitialDatum,
}

pub fn parse_growth(path: &Path) -> Result<GrowthSpec> {
    let file: GrowthFile = read_json(path)?;
    if file.s_list.is_empty() {
        return Err(Error::Config("s_list must not be empty".into()));
    }
    Ok(GrowthSpec {
        n: file.n,
        length: file.length,
        eps: file.eps,
        dt: file.dt,
        t_final: file.t_final,
        s_list: file.s_list,
        datum: file.datum.build()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(name: &str, contents: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("qmnls-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    #[test]
    fn minimal_evolve_config_parses() {
        let p = write_tmp(
            "evolve_ok.json",
            r#"{"n":256,"L":40.0,"eps":0.5,"dt":1e-3,"t_final":1.0,
                "datum":"gaussian","datum_amplitude":1.0,"datum_width":1.0,"datum_center":0.0}"#,
        );
        let cfg = parse_evolve(&p).unwrap();
        assert_eq!(cfg.n, 256);
        assert_eq!(cfg.datum.id(), "gaussian-a1-w1-c0");
    }

    #[test]
    fn zero_dt_rejected() {
        let p = write_tmp(
            "evolve_dt0.json",
            r#"{"n":256,"L":40.0,"eps":0.5,"dt":0.0,"t_final":1.0,
                "datum":"gaussian","datum_amplitude":1.0,"datum_width":1.0}"#,
        );
        assert!(matches!(parse_evolve(&p), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_keys_rejected() {
        let p = write_tmp(
            "evolve_unknown.json",
            r#"{"n":256,"L":40.0,"eps":0.5,"dt":1e-3,"t_final":1.0,
                "datum":"gaussian","datum_amplitude":1.0,"datum_width":1.0,
                "surprise":7}"#,
        );
        assert!(matches!(parse_evolve(&p), Err(Error::Config(_))));
    }

    #[test]
    fn irrelevant_datum_field_rejected() {
        let p = write_tmp(
            "evolve_extra_datum.json",
            r#"{"n":256,"L":40.0,"eps":0.5,"dt":1e-3,"t_final":1.0,
                "datum":"gaussian","datum_amplitude":1.0,"datum_width":1.0,
                "datum_wavenumber":3.0}"#,
        );
        assert!(matches!(parse_evolve(&p), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_requires_strictly_decreasing_eps() {
        let p = write_tmp(
            "sweep_bad.json",
            r#"{"n":256,"L":40.0,"s":1.0,"t_final":1.0,"dt":1e-3,
                "eps_list":[0.1,0.2],
                "datum":"gaussian","datum_amplitude":1.0,"datum_width":1.0}"#,
        );
        assert!(matches!(parse_sweep(&p), Err(Error::Config(_))));
    }

    #[test]
    fn kernels_defaults() {
        let p = write_tmp("kernels_min.json", "{}");
        let spec = parse_kernels(&p).unwrap();
        assert_eq!(spec.eps, 1.0);
        assert_eq!(spec.xi_values, vec![2.0, 10.0, 50.0]);
        assert_eq!(spec.smoothing_samples, 1008);
    }
}
