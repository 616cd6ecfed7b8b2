//! Deterministic text artifacts: CSV serialization with lossless float
//! formatting and the plain-text report blocks.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`), which
//! round-trips any f64; identical inputs therefore produce byte-identical
//! files. Data files carry no timestamps (those belong in the run log).

use crate::evolution::Diagnostics;
use crate::kernel_bounds::AuditRow;
use crate::limits::{GrowthReport, NegativeSReport, SweepResult};
use crate::soliton::SolitonResult;

/// 17-significant-digit form; round-trips f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact order label for CSV headers: integers print bare, otherwise the
/// shortest round-trip decimal.
pub fn fmt_order(s: f64) -> String {
    if s == s.trunc() && s.abs() < 1e15 {
        format!("{}", s as i64)
    } else {
        format!("{s}")
    }
}

/// Diagnostics CSV: `t,mass,energy,hs_<s>...`, one row per sample.
pub fn diagnostics_csv(d: &Diagnostics) -> String {
    let mut header = String::from("t,mass,energy");
    for &s in &d.orders {
        header.push_str(&format!(",hs_{}", fmt_order(s)));
    }
    let mut out = header;
    out.push('\n');
    for j in 0..d.times.len() {
        out.push_str(&fmt_f64(d.times[j]));
        out.push(',');
        out.push_str(&fmt_f64(d.mass[j]));
        out.push(',');
        out.push_str(&fmt_f64(d.energy[j]));
        for series in &d.hs_norms {
            out.push(',');
            out.push_str(&fmt_f64(series[j]));
        }
        out.push('\n');
    }
    out
}

/// Sweep CSV: `eps,sup_err,s,T,dt,n,L,datum_id`; failed members carry `nan`.
pub fn sweep_csv(r: &SweepResult) -> String {
    let mut out = String::from("eps,sup_err,s,T,dt,n,L,datum_id\n");
    for (i, &eps) in r.eps_values.iter().enumerate() {
        let err = match r.sup_errors[i] {
            Some(e) => fmt_f64(e),
            None => "nan".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(eps),
            err,
            fmt_f64(r.meta.s),
            fmt_f64(r.meta.t_final),
            fmt_f64(r.meta.dt),
            r.meta.n,
            fmt_f64(r.meta.length),
            r.meta.datum_id
        ));
    }
    out
}

/// Audit CSV: `case,xi,tau,xi1_or_na,value,bound,ratio`.
pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from("case,xi,tau,xi1_or_na,value,bound,ratio\n");
    for r in rows {
        let xi1 = match r.xi1 {
            Some(x) => fmt_f64(x),
            None => "na".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.case,
            fmt_f64(r.xi),
            fmt_f64(r.tau),
            xi1,
            fmt_f64(r.value),
            fmt_f64(r.bound),
            fmt_f64(r.ratio)
        ));
    }
    out
}

/// Negative-s difference series: `t,err_eps_<eps>...`.
pub fn negative_s_csv(r: &NegativeSReport) -> String {
    let mut header = String::from("t");
    for &eps in &r.eps_values {
        header.push_str(&format!(",err_eps_{eps}"));
    }
    let mut out = header;
    out.push('\n');
    for (j, &t) in r.times.iter().enumerate() {
        out.push_str(&fmt_f64(t));
        for series in &r.series {
            out.push(',');
            out.push_str(&fmt_f64(series[j]));
        }
        out.push('\n');
    }
    out
}

/// Growth series for several orders sharing one time axis:
/// `t,hs_<s>...` rows plus a fitted-slope summary block.
pub fn growth_csv(reports: &[GrowthReport]) -> String {
    let mut header = String::from("t");
    for r in reports {
        header.push_str(&format!(",hs_{}", fmt_order(r.s)));
    }
    let mut out = header;
    out.push('\n');
    let times = &reports[0].times;
    for (j, &t) in times.iter().enumerate() {
        out.push_str(&fmt_f64(t));
        for r in reports {
            out.push(',');
            out.push_str(&fmt_f64(r.norms[j]));
        }
        out.push('\n');
    }
    out
}

pub fn growth_summary(reports: &[GrowthReport]) -> String {
    let mut out = String::from("growth tracking: fitted slope of log||u||_{H^s} vs log<t>\n");
    for r in reports {
        out.push_str(&format!(
            "  s = {:<6} slope = {:+.6e}  bound exponent = {}\n",
            fmt_order(r.s),
            r.fitted_slope,
            r.bound_exponent
        ));
    }
    out
}

/// Soliton metadata CSV placed next to the binary profile.
pub fn soliton_meta_csv(result: &SolitonResult, eps: f64, tau: f64) -> String {
    format!(
        "eps,tau,action,residual_pde,residual_pohozaev,residual_nehari,iterations\n{},{},{},{},{},{},{}\n",
        fmt_f64(eps),
        fmt_f64(tau),
        fmt_f64(result.action),
        fmt_f64(result.residual_pde),
        fmt_f64(result.residual_pohozaev),
        fmt_f64(result.residual_nehari),
        result.iterations
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for &x in &[0.0, 1.0, -1.5, std::f64::consts::PI, 1e-300, 1.23456789012345e17] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn order_labels() {
        assert_eq!(fmt_order(1.0), "1");
        assert_eq!(fmt_order(-2.0), "-2");
        assert_eq!(fmt_order(-0.5), "-0.5");
        assert_eq!(fmt_order(2.5), "2.5");
    }

    #[test]
    fn diagnostics_csv_shape() {
        let d = Diagnostics {
            times: vec![0.0, 0.5],
            mass: vec![1.0, 1.0],
            energy: vec![0.25, 0.25],
            orders: vec![1.0, -0.5],
            hs_norms: vec![vec![2.0, 2.0], vec![0.5, 0.5]],
        };
        let csv = diagnostics_csv(&d);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,mass,energy,hs_1,hs_-0.5");
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.split(',').count() == 5));
    }
}
