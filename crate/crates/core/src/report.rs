//! CSV writers for sweeps, density-evolution traces and decoder traces.
//!
//! Floats are printed with 6 significant digits in `%g` style so files are
//! stable across runs and platforms.

use std::io::{self, Write};

use crate::decoder::DecodeTrace;
use crate::density::DeTrace;
use crate::model::SystemConfig;
use crate::montecarlo::{aloha_baseline, AlohaVariant, SweepResult, TrialAggregate};

pub const SWEEP_HEADER: &str = "g,ns,n,k,frames,throughput,plr,t_ci95,plr_ci95,seed";
pub const DE_HEADER: &str = "l,p,q,beta";
pub const TRACE_HEADER: &str = "l,newly_decoded,p_empirical,q_empirical";
pub const BASELINE_HEADER: &str = "g,variant,throughput";

/// Formats `x` with `digits` significant digits, like C's `%g`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    // Round first so that e.g. 9.9999996 is classified with exponent 1.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g6(x: f64) -> String {
    fmt_sig(x, 6)
}

/// `n` and `k` columns: exact for a homogeneous population, means otherwise.
fn code_columns(config: &SystemConfig) -> (String, String) {
    match config.common_code() {
        Some(c) => (c.n().to_string(), c.k().to_string()),
        None => {
            let u = config.num_users() as f64;
            (g6(config.total_bursts() as f64 / u), g6(config.total_k() as f64 / u))
        }
    }
}

fn sweep_row<W: Write>(out: &mut W, config: &SystemConfig, agg: &TrialAggregate) -> io::Result<()> {
    let (n, k) = code_columns(config);
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        g6(agg.g),
        config.ns(),
        n,
        k,
        agg.frames,
        g6(agg.t_mean),
        g6(agg.plr_mean),
        g6(agg.t_ci95),
        g6(agg.plr_ci95),
        config.seed()
    )
}

/// One-row sweep-format file for a single configuration.
pub fn write_trial<W: Write>(out: &mut W, config: &SystemConfig, agg: &TrialAggregate) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    sweep_row(out, config, agg)
}

pub fn write_sweep<W: Write>(out: &mut W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for point in &sweep.points {
        sweep_row(out, &point.config, &point.aggregate)?;
    }
    Ok(())
}

pub fn write_de<W: Write>(out: &mut W, trace: &DeTrace) -> io::Result<()> {
    writeln!(out, "{DE_HEADER}")?;
    for s in &trace.states {
        writeln!(out, "{},{},{},{}", s.l, g6(s.p), g6(s.q), g6(s.beta))?;
    }
    Ok(())
}

/// Decoder trace; `newly_decoded` lists user indices separated by spaces.
pub fn write_trace<W: Write>(out: &mut W, trace: &DecodeTrace) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in &trace.rounds {
        let users: Vec<String> = r.newly_decoded.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{},{},{},{}",
            r.round,
            users.join(" "),
            g6(r.p_empirical),
            g6(r.q_empirical)
        )?;
    }
    Ok(())
}

pub fn write_baseline<W: Write>(out: &mut W, variant: AlohaVariant, g_values: &[f64]) -> io::Result<()> {
    let name = match variant {
        AlohaVariant::Pure => "pure",
        AlohaVariant::Slotted => "slotted",
    };
    let mut sorted = g_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    writeln!(out, "{BASELINE_HEADER}")?;
    for g in sorted {
        writeln!(out, "{},{name},{}", g6(g), g6(aloha_baseline(g, variant)))?;
    }
    Ok(())
}
