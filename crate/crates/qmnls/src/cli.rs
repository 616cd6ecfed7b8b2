//! Command-line orchestration for the `qmnls` binary.
//!
//! `qmnls <subcommand> --config <path> [--out <dir>] [--threads <k>]`
//!
//! Subcommands: `evolve`, `sweep-eps`, `limit-integral`, `soliton`,
//! `verify-kernels`, `growth`. Exit codes: 0 success, 1 numerical failure
//! (NaN, non-convergence, failed audit), 2 configuration error.
//!
//! Data artifacts (CSV, checkpoints, reports) are deterministic for a fixed
//! config; wall-clock information goes only to `run.log`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evolution::InitialDatum;
use crate::report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subcommand {
    Evolve,
    SweepEps,
    LimitIntegral,
    Soliton,
    VerifyKernels,
    Growth,
}

#[derive(Debug, Clone)]
pub struct CliOptions {
    pub subcommand: Subcommand,
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

pub const USAGE: &str = "usage: qmnls <evolve|sweep-eps|limit-integral|soliton|verify-kernels|growth> --config <path> [--out <dir>] [--threads <k>]";

pub fn parse_args(args: &[String]) -> Result<CliOptions> {
    let mut it = args.iter();
    let sub = it
        .next()
        .ok_or_else(|| Error::Usage(format!("missing subcommand\n{USAGE}")))?;
    let subcommand = match sub.as_str() {
        "evolve" => Subcommand::Evolve,
        "sweep-eps" => Subcommand::SweepEps,
        "limit-integral" => Subcommand::LimitIntegral,
        "soliton" => Subcommand::Soliton,
        "verify-kernels" => Subcommand::VerifyKernels,
        "growth" => Subcommand::Growth,
        other => {
            return Err(Error::Usage(format!(
                "unknown subcommand '{other}'\n{USAGE}"
            )))
        }
    };
    let mut config = None;
    let mut out_dir = PathBuf::from("out");
    let mut threads = None;
    while let Some(flag) = it.next() {
        match flag.as_str() {
            "--config" => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Usage("--config needs a path".into()))?;
                config = Some(PathBuf::from(v));
            }
            "--out" => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Usage("--out needs a directory".into()))?;
                out_dir = PathBuf::from(v);
            }
            "--threads" => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Usage("--threads needs a count".into()))?;
                threads = Some(v.parse::<usize>().map_err(|_| {
                    Error::Usage(format!("--threads expects a positive integer, got '{v}'"))
                })?);
            }
            other => {
                return Err(Error::Usage(format!("unknown flag '{other}'\n{USAGE}")));
            }
        }
    }
    let config =
        config.ok_or_else(|| Error::Usage(format!("--config is required\n{USAGE}")))?;
    if !config.exists() {
        return Err(Error::Config(format!(
            "config file {} does not exist",
            config.display()
        )));
    }
    Ok(CliOptions {
        subcommand,
        config,
        out_dir,
        threads,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn log_line(dir: &Path, line: &str) {
    // wall-clock stamps live here and only here
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let entry = format!("[unix:{stamp}] {line}\n");
    let _ = std::fs::create_dir_all(dir);
    let _ = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("run.log"))
        .and_then(|mut f| std::io::Write::write_all(&mut f, entry.as_bytes()));
}

fn summarize(dir: &Path, line: &str) {
    println!("{line}");
    log_line(dir, line);
}

/// Run one parsed command to completion, writing artifacts under `out_dir`.
pub fn run(opts: &CliOptions) -> Result<()> {
    if let Some(k) = opts.threads {
        // best effort; a pool may already exist when called in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    match opts.subcommand {
        Subcommand::Evolve => run_evolve(&opts.config, &opts.out_dir),
        Subcommand::SweepEps => run_sweep(&opts.config, &opts.out_dir),
        Subcommand::LimitIntegral => run_limit_integral(&opts.config, &opts.out_dir),
        Subcommand::Soliton => run_soliton(&opts.config, &opts.out_dir),
        Subcommand::VerifyKernels => run_verify_kernels(&opts.config, &opts.out_dir),
        Subcommand::Growth => run_growth(&opts.config, &opts.out_dir),
    }
}

fn run_evolve(config: &Path, out: &Path) -> Result<()> {
    let cfg = crate::config::parse_evolve(config)?;
    match crate::evolution::evolve(&cfg) {
        Ok(result) => {
            write_file(out, "diagnostics.csv", &report::diagnostics_csv(&result.diagnostics))?;
            std::fs::create_dir_all(out)?;
            crate::checkpoint::write(
                &out.join("final_state.bin"),
                &result.final_field,
                cfg.eps,
                result.steps as f64 * cfg.dt,
            )?;
            for ck in &result.checkpoints {
                crate::checkpoint::write(
                    &out.join(format!("checkpoint_{:08}.bin", ck.step)),
                    &ck.field,
                    cfg.eps,
                    ck.t,
                )?;
            }
            summarize(
                out,
                &format!(
                    "evolve: datum={} n={} L={} eps={} dt={} T={} steps={} mass_drift={:.3e} energy_drift={:.3e} max_phase={:.3e}",
                    cfg.datum.id(),
                    cfg.n,
                    cfg.length,
                    cfg.eps,
                    cfg.dt,
                    cfg.t_final,
                    result.steps,
                    result.diagnostics.mass_drift(),
                    result.diagnostics.energy_drift(),
                    cfg.max_linear_phase(),
                ),
            );
            Ok(())
        }
        Err(Error::Blowup {
            step,
            t,
            last_good_t,
            diagnostics,
        }) => {
            write_file(out, "diagnostics.csv", &report::diagnostics_csv(&diagnostics))?;
            summarize(
                out,
                &format!(
                    "evolve: ABORTED non-finite state at step {step} (t={t}); last good sample t={last_good_t}; partial diagnostics written"
                ),
            );
            Err(Error::Blowup {
                step,
                t,
                last_good_t,
                diagnostics,
            })
        }
        Err(e) => Err(e),
    }
}

fn run_sweep(config: &Path, out: &Path) -> Result<()> {
    let spec = crate::config::parse_sweep(config)?;
    let result = crate::limits::semiclassical_sweep(
        &spec.datum,
        spec.s,
        spec.t_final,
        &spec.eps_list,
        spec.dt,
        spec.n,
        spec.length,
    )?;
    write_file(out, "sweep.csv", &report::sweep_csv(&result))?;
    let failed = result.sup_errors.iter().filter(|e| e.is_none()).count();
    summarize(
        out,
        &format!(
            "sweep-eps: datum={} s={} T={} members={} failed={} hypothesis={}",
            result.meta.datum_id,
            result.meta.s,
            result.meta.t_final,
            result.eps_values.len(),
            failed,
            if result.meta.in_hypothesis { "s>1/2" } else { "outside (s<=1/2)" },
        ),
    );
    if failed > 0 {
        return Err(Error::Numerics(format!("{failed} sweep members aborted")));
    }
    Ok(())
}

fn run_limit_integral(config: &Path, out: &Path) -> Result<()> {
    let spec = crate::config::parse_limit_integral(config)?;
    let plateau = crate::limits::limit_integral_plateau(&spec.profile)?;
    write_file(out, "limit_report.txt", &plateau.render())?;
    if !spec.t_values.is_empty() {
        let mut csv = String::from("eps,t,value\n");
        for &t in &spec.t_values {
            let v = crate::limits::limit_integral_at(&spec.profile, spec.eps, t)?;
            let _ = writeln!(
                csv,
                "{},{},{}",
                report::fmt_f64(spec.eps),
                report::fmt_f64(t),
                report::fmt_f64(v)
            );
        }
        write_file(out, "limit_values.csv", &csv)?;
    }
    summarize(
        out,
        &format!(
            "limit-integral: plateau={:.9} |diff 2pi|={:.3e} |diff 2pi^1.5|={:.3e}",
            plateau.plateau, plateau.diff_claim, plateau.diff_computed
        ),
    );
    Ok(())
}

fn run_soliton(config: &Path, out: &Path) -> Result<()> {
    let spec = crate::config::parse_soliton(config)?;
    let grid = crate::grid::Grid::shared(spec.problem.n, spec.problem.length)?;
    let init = InitialDatum::gaussian(spec.init_amplitude, spec.init_width, 0.0)
        .realize(&grid)?;
    match crate::soliton::petviashvili_solve(&spec.problem, &init, spec.tol, spec.max_iter) {
        Ok(result) => {
            std::fs::create_dir_all(out)?;
            // t field repurposed as tau, documented in the adjacent metadata
            crate::checkpoint::write(
                &out.join("soliton.bin"),
                &result.q,
                spec.problem.eps,
                spec.problem.tau,
            )?;
            write_file(
                out,
                "soliton.meta.csv",
                &report::soliton_meta_csv(&result, spec.problem.eps, spec.problem.tau),
            )?;
            summarize(
                out,
                &format!(
                    "soliton: eps={} tau={} iterations={} action={:.9} residual_pde={:.3e} pohozaev={:.3e} nehari={:.3e}",
                    spec.problem.eps,
                    spec.problem.tau,
                    result.iterations,
                    result.action,
                    result.residual_pde,
                    result.residual_pohozaev,
                    result.residual_nehari,
                ),
            );
            Ok(())
        }
        Err(e) => {
            write_file(out, "soliton_failure.txt", &format!("{e}\n"))?;
            summarize(out, &format!("soliton: FAILED {e}"));
            Err(e)
        }
    }
}

fn run_verify_kernels(config: &Path, out: &Path) -> Result<()> {
    let spec = crate::config::parse_kernels(config)?;
    let mut rows = Vec::new();
    let mut summary = String::new();
    let mut pass = true;

    let lower = crate::kernel_bounds::lower_bound_audit(spec.eps, &spec.xi_values)?;
    rows.extend(lower.rows.iter().cloned());
    let min_lo = lower.per_xi_min.iter().map(|&(_, m)| m).fold(f64::MAX, f64::min);
    let max_lo = lower.per_xi_min.iter().map(|&(_, m)| m).fold(f64::MIN, f64::max);
    let lower_ok =
        min_lo > 0.0 && max_lo / min_lo <= 2.0 && lower.tau_monotone_ok && lower.neg_dominates_ok;
    pass &= lower_ok;
    let _ = writeln!(
        summary,
        "lower bound audit: per-xi min |r|/xi^(4/3) in [{min_lo:.6e}, {max_lo:.6e}], tau monotone {}, |r(-xi1)|>=|r(xi1)| {}: {}",
        lower.tau_monotone_ok,
        lower.neg_dominates_ok,
        if lower_ok { "PASS" } else { "FAIL" }
    );

    let upper = crate::kernel_bounds::upper_bound_audit(spec.eps, &spec.xi_values)?;
    rows.extend(upper.rows.iter().cloned());
    let ratio91 = upper
        .per_xi
        .iter()
        .map(|s| s.ratio91_max)
        .fold(f64::MIN, f64::max);
    let upper_ok = upper.per_xi.iter().all(|s| {
        s.monotone_ok && s.k_core.is_finite() && s.k_outer.is_finite() && s.ratio91_max <= 91.0
    });
    pass &= upper_ok;
    let _ = writeln!(
        summary,
        "upper bound audit: max alpha1/alpha2 = {ratio91:.6} (explicit constant 91): {}",
        if upper_ok { "PASS" } else { "FAIL" }
    );

    for &(beta, gamma) in &[(1.5, 0.7), (1.0, 0.8), (0.6, 0.6)] {
        let phi = crate::kernel_bounds::phi_kernel_audit(beta, gamma, &[1.0, 10.0, 100.0])?;
        rows.extend(phi.rows.iter().cloned());
        let ok = phi.max_ratio.is_finite() && phi.max_ratio / phi.min_ratio <= 4.0;
        pass &= ok;
        let _ = writeln!(
            summary,
            "phi kernel audit beta={beta} gamma={gamma}: ratio range [{:.4}, {:.4}]: {}",
            phi.min_ratio,
            phi.max_ratio,
            if ok { "PASS" } else { "FAIL" }
        );
    }

    for &a in &spec.tail_exponents {
        let tail = crate::kernel_bounds::tail_integral_audit(a, &spec.tail_thresholds)?;
        let mut ok = true;
        for row in &tail.rows {
            ok &= row.rel_err <= 1e-8 && row.within_explicit_bound;
            rows.push(crate::kernel_bounds::AuditRow {
                case: "tail".into(),
                xi: row.big_a,
                tau: a,
                xi1: None,
                value: row.quadrature,
                bound: row.explicit_bound,
                ratio: row.quadrature / row.explicit_bound,
            });
        }
        pass &= ok;
        let _ = writeln!(
            summary,
            "tail integral audit a={a}: closed-form agreement <= 1e-8 and explicit bound: {}",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    let sm = crate::kernel_bounds::smoothing_supremum_sample(
        spec.eps,
        spec.smoothing_b,
        spec.smoothing_gamma,
        spec.smoothing_a,
        spec.smoothing_s,
        spec.smoothing_samples,
    )?;
    for s in &sm.samples {
        rows.push(crate::kernel_bounds::AuditRow {
            case: format!("smoothing-{}", s.case.label()),
            xi: s.xi,
            tau: s.tau,
            xi1: None,
            value: s.value.unwrap_or(f64::NAN),
            bound: f64::NAN,
            ratio: f64::NAN,
        });
    }
    let sm_ok = sm.flagged == 0 && sm.last_decade_increase < 0.05;
    pass &= sm_ok;
    let _ = writeln!(
        summary,
        "smoothing supremum audit: running max {:.6e}, last-decade increase {:.3}%, flagged {}: {}",
        sm.max_total,
        100.0 * sm.last_decade_increase,
        sm.flagged,
        if sm_ok { "PASS" } else { "FAIL" }
    );

    write_file(out, "audits.csv", &report::audit_csv(&rows))?;
    let _ = writeln!(
        summary,
        "overall: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    write_file(out, "kernel_summary.txt", &summary)?;
    summarize(
        out,
        &format!(
            "verify-kernels: eps={} rows={} overall={}",
            spec.eps,
            rows.len(),
            if pass { "PASS" } else { "FAIL" }
        ),
    );
    if pass {
        Ok(())
    } else {
        Err(Error::Numerics("kernel audits failed; see kernel_summary.txt".into()))
    }
}

fn run_growth(config: &Path, out: &Path) -> Result<()> {
    let spec = crate::config::parse_growth(config)?;
    let mut reports = Vec::new();
    for &s in &spec.s_list {
        reports.push(crate::limits::growth_tracking(
            &spec.datum,
            s,
            spec.t_final,
            spec.eps,
            spec.dt,
            spec.n,
            spec.length,
        )?);
    }
    write_file(out, "growth.csv", &report::growth_csv(&reports))?;
    write_file(out, "growth_summary.txt", &report::growth_summary(&reports))?;
    // one-sided check against the polynomial bound with a fitting margin
    let margin = 0.1;
    let violations: Vec<String> = reports
        .iter()
        .filter(|r| r.fitted_slope > r.bound_exponent + margin)
        .map(|r| format!("s={}: slope {} > bound {}", r.s, r.fitted_slope, r.bound_exponent))
        .collect();
    summarize(
        out,
        &format!(
            "growth: datum={} orders={:?} slopes={:?}",
            spec.datum.id(),
            spec.s_list,
            reports.iter().map(|r| r.fitted_slope).collect::<Vec<_>>(),
        ),
    );
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Numerics(format!(
            "growth exceeded the polynomial bound: {}",
            violations.join("; ")
        )))
    }
}
