//! CSV emission for sweep results, plus a matching gnuplot script.
//!
//! Every sweep point yields two rows — the plain-forwarding baseline and
//! the coded scheme — so the file plots directly as two series.

use std::io::{self, Write};

use crate::scenario::ConnectivityMode;

use super::{SweepRow, SweepVar};

/// Column order for sweep output. Kept in one place so the emitter and
/// its tests cannot drift apart.
pub const CSV_HEADER: &str = "sweep_var,sweep_value,scheme,n,m,pt,mode,w,trials,seed,\
                              mean_packets,ci95_halfwidth,savings,decode_success_rate";

/// Formats with six significant digits, the resolution carried through
/// all numeric output (padding with trailing zeros keeps columns tidy).
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 12) as usize;
    format!("{x:.decimals$}")
}

/// Sweep values print as integers on count axes and at full resolution
/// on the probability axis.
fn format_sweep_value(var: SweepVar, value: f64) -> String {
    match var {
        SweepVar::N | SweepVar::W => format!("{}", value as u64),
        SweepVar::Pt => format_significant(value),
    }
}

/// Writes the results table. Points appear in sweep order; within each
/// point the baseline row precedes the coded row.
pub fn emit_csv(rows: &[SweepRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let c = &row.config;
        let value = format_sweep_value(row.variable, row.value);
        let (mode, w) = match c.mode {
            ConnectivityMode::Rand => ("rand", String::new()),
            ConnectivityMode::Equal { w } => ("equal", w.to_string()),
        };
        let shared = format!(
            "{},{},{},{},{},{},{},{}",
            c.n,
            c.m,
            format_significant(c.p_t),
            mode,
            w,
            row.trials,
            c.seed,
            format_significant(row.stats.mean_lorawan),
        );
        // Savings and success rate describe the comparison, not one
        // scheme, so both rows repeat them.
        writeln!(
            out,
            "{},{},lorawan,{},{},{},{}",
            row.variable.key(),
            value,
            shared,
            format_significant(row.stats.ci95_lorawan),
            format_significant(row.stats.savings),
            format_significant(row.stats.decode_success_rate),
        )?;
        let shared_ncf = format!(
            "{},{},{},{},{},{},{},{}",
            c.n,
            c.m,
            format_significant(c.p_t),
            mode,
            w,
            row.trials,
            c.seed,
            format_significant(row.stats.mean_ncf),
        );
        writeln!(
            out,
            "{},{},ncf,{},{},{},{}",
            row.variable.key(),
            value,
            shared_ncf,
            format_significant(row.stats.ci95_ncf),
            format_significant(row.stats.savings),
            format_significant(row.stats.decode_success_rate),
        )?;
    }
    Ok(())
}

/// Emits a self-contained gnuplot script that plots both schemes from
/// `csv_path` with 95% confidence error bars.
pub fn gnuplot_script(csv_path: &str, var: SweepVar) -> String {
    let (xlabel, title) = match var {
        SweepVar::N => ("end devices (n)", "Forwarded uplink traffic vs network size"),
        SweepVar::Pt => ("transmission probability", "Forwarded uplink traffic vs traffic load"),
        SweepVar::W => ("gateways per device (w)", "Forwarded uplink traffic vs connectivity"),
    };
    format!(
        r#"set datafile separator ','
set title "{title}"
set xlabel "{xlabel}"
set ylabel "mean forwarded packets per generation"
set key top left
set grid
plot "{csv_path}" using 2:(strcol(3) eq "lorawan" ? $11 : 1/0):12 \
         with yerrorlines title "pure forwarding", \
     "{csv_path}" using 2:(strcol(3) eq "ncf" ? $11 : 1/0):12 \
         with yerrorlines title "network coded"
"#
    )
}
