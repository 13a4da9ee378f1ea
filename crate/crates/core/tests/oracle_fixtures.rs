//! Values computed independently with numpy `eigvalsh` and networkx tree
//! generation, frozen under `tests/fixtures`.

use spectra_graft::enumerate::{enumerate_trees, DEFAULT_ENUMERATION_CAP};
use spectra_graft::spectral::{oracle_spectral_radius, DEFAULT_TOL};
use spectra_graft::verify::{ClassFilter, Direction, ExtremalQuery, Verifier, VerifyOptions};
use spectra_graft::{canonical_code, q_matrix, spectral_radius, FamilySpec, Graph};
use std::collections::BTreeSet;

const CLASS_EXTREMES: &str = include_str!("fixtures/class_extremes.tsv");
const FAMILY_RHO: &str = include_str!("fixtures/family_rho.tsv");
const NETWORKX_TREES_9: &str = include_str!("fixtures/networkx_trees_9.txt");
const NETWORKX_TREES_10: &str = include_str!("fixtures/networkx_trees_10.txt");

fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').collect())
}

fn tree_from_dashes(edges: &str) -> Graph {
    let edges: Vec<(usize, usize)> = edges
        .split_whitespace()
        .map(|e| {
            let (u, v) = e.split_once('-').unwrap();
            (u.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    Graph::from_edges(edges.len() + 1, edges).unwrap()
}

fn assert_rel(a: f64, b: f64, rel: f64, what: &str) {
    assert!(
        (a - b).abs() <= rel * a.abs().max(b.abs()),
        "{what}: {a} vs {b}"
    );
}

#[test]
fn family_rho_matches_numpy() {
    let mut count = 0;
    for row in rows(FAMILY_RHO) {
        let spec: FamilySpec = row[0].parse().unwrap();
        let expected: f64 = row[1].parse().unwrap();
        let g = spec.build().unwrap();
        let power = spectral_radius(&g, DEFAULT_TOL).unwrap().rho;
        let oracle = oracle_spectral_radius(&q_matrix(&g).unwrap()).unwrap().rho;
        assert_rel(power, expected, 1e-12, row[0]);
        assert_rel(oracle, expected, 1e-12, row[0]);
        count += 1;
    }
    assert_eq!(count, 45);
}

#[test]
fn class_extremes_match_networkx() {
    let mut verifier = Verifier::new(VerifyOptions::default());
    let mut count = 0;
    for row in rows(CLASS_EXTREMES) {
        let n: usize = row[0].parse().unwrap();
        let class = match row[1] {
            "all" => ClassFilter::AllTrees,
            "noncat" => ClassFilter::NonCaterpillar,
            "nonstar" => ClassFilter::NonStarlike,
            "both" => ClassFilter::NonCaterpillarNonStarlike,
            "both4" => ClassFilter::NonCaterpillarNonStarlikeFourPendants,
            other => panic!("unknown class {other}"),
        };
        let size: usize = row[2].parse().unwrap();
        let direction = if row[3] == "min" { Direction::Min } else { Direction::Max };
        let rho: f64 = row[4].parse().unwrap();
        let runner_up: Option<f64> = row[5].parse().ok();
        let expected_tree = tree_from_dashes(row[6]);
        let label = format!("n={n} {} {}", row[1], row[3]);

        let out = verifier.find_extremal(ExtremalQuery { n, class, direction }).unwrap();
        assert_eq!(out.class_size, size, "{label}");
        let best = out.extremal.unwrap();
        assert_rel(best.rho, rho, 1e-12, &label);
        assert_eq!(best.code, canonical_code(&expected_tree).unwrap(), "{label}");
        assert!(out.ties.is_empty(), "{label}");
        match (out.margin, runner_up) {
            (Some(m), Some(r)) => assert!((m - (r - rho).abs()).abs() < 1e-9, "{label}"),
            (None, None) => {}
            (m, r) => panic!("{label}: margin {m:?} vs runner-up {r:?}"),
        }
        count += 1;
    }
    assert_eq!(count, 66);
}

#[test]
fn enumeration_matches_networkx_trees() {
    for (n, text) in [(9, NETWORKX_TREES_9), (10, NETWORKX_TREES_10)] {
        let theirs: BTreeSet<String> = text
            .lines()
            .map(|l| canonical_code(&tree_from_dashes(l)).unwrap().to_string())
            .collect();
        let ours: BTreeSet<String> = enumerate_trees(n, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .into_iter()
            .map(|t| t.code.to_string())
            .collect();
        assert_eq!(theirs.len(), text.lines().count(), "networkx trees at {n} are distinct");
        assert_eq!(ours, theirs, "n = {n}");
    }
}

#[test]
fn tree_counts_up_to_sixteen() {
    // Unlabeled trees by order.
    let expected = [
        1usize, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320,
    ];
    for (i, &count) in expected.iter().enumerate() {
        let n = i + 1;
        assert_eq!(enumerate_trees(n, 16).unwrap().len(), count, "n = {n}");
    }
}
