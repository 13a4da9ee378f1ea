//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde_json::Value;
use spectra_graft::enumerate::{enumerate_trees, DEFAULT_ENUMERATION_CAP};
use spectra_graft::families::{make_path, make_spine_graft, make_star};
use spectra_graft::spectral::oracle_spectral_radius;
use spectra_graft::verify::{ClassFilter, Direction, ExtremalQuery};
use spectra_graft::{
    canonical_code, prufer_count_oracle, q_matrix, spectral_radius, Claim, ClaimReport, Graph,
    Status, Verifier, VerifyOptions,
};

const BIN: &str = env!("CARGO_BIN_EXE_spectra-graft");

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

/// Prüfer dedup counts for n = 1..=9, shared by two criteria.
fn prufer_counts() -> &'static [usize] {
    static COUNTS: OnceLock<Vec<usize>> = OnceLock::new();
    COUNTS.get_or_init(|| (1..=9).map(|n| prufer_count_oracle(n).unwrap()).collect())
}

fn verifier() -> Verifier {
    Verifier::new(VerifyOptions::default())
}

/// Verifier that never samples.
fn exhaustive_verifier() -> Verifier {
    Verifier::new(VerifyOptions {
        contraction_exhaustive_max: usize::MAX,
        branch_move_exhaustive_max: usize::MAX,
        ..VerifyOptions::default()
    })
}

/// Every entry verified; otherwise the first offending entry.
fn all_verified(report: &ClaimReport) -> Result<(), String> {
    for e in &report.entries {
        if e.status != Status::Verified {
            let why = e
                .counterexample
                .as_ref()
                .map(|c| c.description.clone())
                .unwrap_or_else(|| format!("ties {:?}", e.ties));
            return Err(format!("claim {} n={} {}: {why}", e.claim, e.n, e.status));
        }
    }
    Ok(())
}

fn checked(report: &ClaimReport) -> usize {
    report.entries.iter().map(|e| e.checked).sum()
}

fn min_margin(report: &ClaimReport) -> f64 {
    report
        .entries
        .iter()
        .filter_map(|e| e.margin)
        .fold(f64::INFINITY, f64::min)
}

fn closed_form_spectra() -> Outcome {
    let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let cases = [
        ("K_2", make_path(2).unwrap(), 2.0),
        ("K_3", k3, 4.0),
        ("P_3", make_path(3).unwrap(), (7.0 + 17f64.sqrt()) / 2.0),
        ("K_{1,3}", make_star(4).unwrap(), 6.0 + 2.0 * 3f64.sqrt()),
    ];
    let mut worst = 0f64;
    for (name, g, expected) in cases {
        let rho = spectral_radius(&g, 1e-12).unwrap().rho;
        let err = (rho - expected).abs();
        if err > 1e-10 {
            return fail(format!("{name}: rho = {rho}, expected {expected}"));
        }
        worst = worst.max(err);
    }
    pass(format!("K_2, K_3, P_3, K_1,3 max abs error {worst:.1e} (tol 1e-10)"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut trees = 0;
    let mut worst = 0f64;
    for n in 2..=9 {
        for t in enumerate_trees(n, DEFAULT_ENUMERATION_CAP).unwrap() {
            let power = spectral_radius(&t.graph, 1e-12).unwrap().rho;
            let oracle = oracle_spectral_radius(&q_matrix(&t.graph).unwrap()).unwrap().rho;
            let rel = (power - oracle).abs() / power;
            if rel > 1e-9 {
                return fail(format!("{}: power {power} oracle {oracle}", t.code));
            }
            worst = worst.max(rel);
            trees += 1;
        }
    }
    let elapsed = start.elapsed();
    let expected: usize = prufer_counts()[1..].iter().sum();
    if trees != expected {
        return fail(format!("{trees} trees, count oracle says {expected}"));
    }
    if elapsed > Duration::from_secs(30) {
        return fail(format!("took {elapsed:.1?} (limit 30 s)"));
    }
    pass(format!(
        "{trees} trees with 2 <= n <= 9, max relative gap {worst:.1e} (tol 1e-9), {elapsed:.1?}"
    ))
}

fn enumeration_counts() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=9 {
        let ours = enumerate_trees(n, DEFAULT_ENUMERATION_CAP).unwrap().len();
        let oracle = prufer_counts()[n - 1];
        if ours != oracle {
            return fail(format!("n={n}: enumerated {ours}, Prüfer oracle {oracle}"));
        }
        counts.push(ours.to_string());
    }
    let non_caterpillar_7 = verifier()
        .find_extremal(ExtremalQuery {
            n: 7,
            class: ClassFilter::NonCaterpillar,
            direction: Direction::Min,
        })
        .unwrap()
        .class_size;
    if non_caterpillar_7 != 1 {
        return fail(format!("{non_caterpillar_7} non-caterpillar trees of order 7"));
    }
    pass(format!(
        "n=1..9 counts {} match the Prüfer oracle; 1 non-caterpillar tree at n=7",
        counts.join(",")
    ))
}

fn invariant_sweep() -> Outcome {
    let report = verifier().verify(Claim::InvariantSweep, 3, 12).unwrap();
    match all_verified(&report) {
        Ok(()) => pass(format!(
            "{} trees with 3 <= n <= 12, zero violations, min(rho - Tr_max) = {:.3}",
            checked(&report),
            min_margin(&report)
        )),
        Err(e) => fail(e),
    }
}

fn sweep(claim: Claim, lo: usize, hi: usize, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let report = exhaustive_verifier().verify(claim, lo, hi).unwrap();
    let elapsed = start.elapsed();
    if let Err(e) = all_verified(&report) {
        return fail(e);
    }
    if let Some(limit) = limit {
        if elapsed > limit {
            return fail(format!("took {elapsed:.1?} (limit {limit:?})"));
        }
    }
    let vacuous: usize = report.entries.iter().map(|e| e.vacuous).sum();
    pass(format!(
        "n={lo}..{hi} exhaustive: {} configurations, {vacuous} vacuous, zero counterexamples, min margin {:.3e}, {elapsed:.1?}",
        checked(&report),
        min_margin(&report)
    ))
}

fn broom_sweeps() -> Outcome {
    let mut v = verifier();
    let mut parts = Vec::new();
    for (claim, lo) in [(Claim::BroomAboveSpider, 8), (Claim::BroomAboveUnevenSpider, 9)] {
        let report = v.verify(claim, lo, 13).unwrap();
        if let Err(e) = all_verified(&report) {
            return fail(e);
        }
        parts.push(format!("{} n={lo}..13 {} tuples", claim.id(), checked(&report)));
    }
    pass(format!("{}, zero counterexamples", parts.join("; ")))
}

fn unique_extremals() -> Outcome {
    let start = Instant::now();
    let mut v = verifier();
    let mut parts = Vec::new();
    for (claim, lo) in [
        (Claim::MinNonCaterpillar, 7),
        (Claim::MinNonCaterpillarNonStarlike, 8),
        (Claim::MaxNonCaterpillar, 7),
    ] {
        let report = v.verify(claim, lo, 13).unwrap();
        if let Err(e) = all_verified(&report) {
            return fail(e);
        }
        for e in &report.entries {
            if e.extremal_code != e.expected_code || !e.ties.is_empty() {
                return fail(format!("claim {} n={}: extremal differs or ties", e.claim, e.n));
            }
        }
        parts.push(format!("{} min margin {:.3}", claim.id(), min_margin(&report)));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        return fail(format!("took {elapsed:.1?} (limit 5 min)"));
    }
    pass(format!(
        "argext code equals the family member, no ties within 1e-9*rho: {}; {elapsed:.1?}",
        parts.join(", ")
    ))
}

fn double_broom_maximizer() -> Outcome {
    let report = verifier().verify(Claim::MaxNonStarlikeDoubleBroom, 7, 13).unwrap();
    if let Err(e) = all_verified(&report) {
        return fail(e);
    }
    let realized: Vec<String> = report
        .entries
        .iter()
        .map(|e| e.detail.clone().unwrap_or_default())
        .collect();
    if realized.iter().any(|d| !d.starts_with("T(")) {
        return fail(format!("realized parameters missing: {realized:?}"));
    }
    pass(format!("argmax is a double broom for n=7..13: {}", realized.join(" ")))
}

fn spine_graft_maximizers() -> Outcome {
    let mut v = verifier();
    for claim in [Claim::MaxFourPendants, Claim::MaxNonCaterpillarNonStarlike] {
        let report = v.verify(claim, 8, 13).unwrap();
        if let Err(e) = all_verified(&report) {
            return fail(e);
        }
    }
    let a = canonical_code(&make_spine_graft(8, 2, 3).unwrap()).unwrap();
    let b = canonical_code(&make_spine_graft(8, 2, 8 - 5).unwrap()).unwrap();
    if a != b {
        return fail("P(8;2,3) and P(8;2,n-5) differ at n=8");
    }
    pass("3.5 and 3.6 argmax equals the rho-larger of P(n;2,3), P(n;2,n-5) for n=8..13; candidates coincide at n=8")
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_elapsed);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

fn cli_report(jobs: &str) -> Result<String, String> {
    let out = Command::new(BIN)
        .args(["verify", "--claim", "all", "--n-max", "12", "--json", "-", "--jobs", jobs])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "jobs {jobs}: exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let mut v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    strip_elapsed(&mut v);
    serde_json::to_string(&v).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let runs: Result<Vec<String>, String> = ["1", "8", "1", "8"].iter().map(|j| cli_report(j)).collect();
    match runs {
        Err(e) => fail(e),
        Ok(runs) if runs.windows(2).all(|w| w[0] == w[1]) => pass(format!(
            "verify --claim all --n-max 12: 4 runs (jobs 1, 8, 1, 8) byte-identical after dropping elapsed_ms ({} bytes)",
            runs[0].len()
        )),
        Ok(_) => fail("JSON reports differ between runs"),
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("closed-form spectra", closed_form_spectra),
        ("oracle equivalence", oracle_equivalence),
        ("enumeration counts", enumeration_counts),
        ("invariant sweep", invariant_sweep),
        ("contraction lowers rho (2.1)", || {
            sweep(Claim::ContractionDecrease, 4, 9, Some(Duration::from_secs(120)))
        }),
        ("pendant path shift raises rho (3.2)", || sweep(Claim::PendantShift, 4, 9, None)),
        ("branch move raises rho (3.1)", || sweep(Claim::BranchMove, 4, 8, None)),
        ("broom comparisons (2.2, 2.4)", broom_sweeps),
        ("unique extremal trees (2.5, 2.6, 3.4)", unique_extremals),
        ("double broom maximizer (3.3)", double_broom_maximizer),
        ("spine graft maximizers (3.5, 3.6)", spine_graft_maximizers),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
