use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;
use spectra_graft::VerificationRun;

/// `x` with `digits` significant digits in fixed notation.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), x);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn opt_f64(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.6e}"))
}

pub fn table(run: &VerificationRun) -> String {
    let mut s = String::new();
    for report in &run.reports {
        let _ = writeln!(
            s,
            "claim {} [{}] n={}..{}: {}",
            report.claim, report.status, report.n_min, report.n_max, report.title
        );
        if let Some(note) = &report.note {
            let _ = writeln!(s, "  note: {note}");
        }
        let _ = writeln!(
            s,
            "  {:>3}  {:<14} {:>8} {:>8} {:>8}  {:>13}  {:>13}  detail",
            "n", "status", "class", "checked", "vacuous", "rho", "margin"
        );
        for e in &report.entries {
            let mut detail = e.detail.clone().unwrap_or_default();
            if let Some(code) = &e.extremal_code {
                let matched = e.expected_code.as_ref() == Some(code);
                if !detail.is_empty() {
                    detail.push(' ');
                }
                detail.push_str(if matched || e.expected_code.is_none() { "extremal " } else { "extremal (unexpected) " });
                detail.push_str(code);
            }
            if !e.ties.is_empty() {
                let _ = write!(detail, " ties={}", e.ties.len());
            }
            let _ = writeln!(
                s,
                "  {:>3}  {:<14} {:>8} {:>8} {:>8}  {:>13}  {:>13}  {}",
                e.n,
                e.status.to_string(),
                e.class_size,
                e.checked,
                e.vacuous,
                opt_f64(e.rho_extremal),
                opt_f64(e.margin),
                detail.trim()
            );
            if let Some(c) = &e.counterexample {
                let _ = writeln!(s, "       counterexample: {} (rho {})", c.description, c.rho);
                for line in c.graph.lines() {
                    let _ = writeln!(s, "         {line}");
                }
            }
        }
    }
    let _ = writeln!(s, "overall: {}", run.status);
    s
}

#[derive(Serialize)]
struct Row<'a> {
    claim: &'a str,
    n: usize,
    status: String,
    class_size: usize,
    checked: usize,
    vacuous: usize,
    extremal_code: Option<&'a str>,
    expected_code: Option<&'a str>,
    rho_extremal: Option<f64>,
    margin: Option<f64>,
    ties: usize,
    detail: Option<&'a str>,
    counterexample: Option<&'a str>,
    elapsed_ms: u64,
}

pub fn csv(run: &VerificationRun) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for report in &run.reports {
        for e in &report.entries {
            w.serialize(Row {
                claim: &e.claim,
                n: e.n,
                status: e.status.to_string(),
                class_size: e.class_size,
                checked: e.checked,
                vacuous: e.vacuous,
                extremal_code: e.extremal_code.as_deref(),
                expected_code: e.expected_code.as_deref(),
                rho_extremal: e.rho_extremal,
                margin: e.margin,
                ties: e.ties.len(),
                detail: e.detail.as_deref(),
                counterexample: e.counterexample.as_ref().map(|c| c.description.as_str()),
                elapsed_ms: e.elapsed_ms,
            })?;
        }
    }
    Ok(w.into_inner()?)
}
