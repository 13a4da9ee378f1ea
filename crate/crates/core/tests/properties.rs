use proptest::prelude::*;
use spectra_graft::enumerate::prufer_decode;
use spectra_graft::families::{is_caterpillar, is_starlike, make_double_broom};
use spectra_graft::spectral::{
    matrix_quadratic_form, oracle_spectral_radius, quadratic_form_with, DEFAULT_TOL,
};
use spectra_graft::transforms::{
    c_transform, contraction_candidates, pendant_path_shift, pendant_shift_candidates,
};
use spectra_graft::{
    all_pairs_distances, canonical_code, class_membership, full_spectrum_oracle, graph_stats,
    q_matrix, spectral_radius, transmissions, Graph,
};

fn rho(g: &Graph) -> f64 {
    spectral_radius(g, DEFAULT_TOL).unwrap().rho
}

/// A random labeled tree on `n` vertices and a random permutation of it.
fn tree_and_perm(min: usize, max: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (min..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n, n.saturating_sub(2)),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(seq, perm)| (prufer_decode(n, &seq), perm))
    })
}

fn tree(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    tree_and_perm(min, max).prop_map(|(g, _)| g)
}

/// Caterpillar iff some path has every vertex within distance one of it.
fn caterpillar_brute(g: &Graph) -> bool {
    let n = g.order();
    let d = all_pairs_distances(g).unwrap();
    (0..n).any(|a| {
        (0..n).any(|b| {
            let on_path = |w: usize| d.get(a, w) + d.get(w, b) == d.get(a, b);
            (0..n).all(|v| on_path(v) || g.neighbors(v).iter().any(|&w| on_path(w)))
        })
    })
}

/// Starlike iff deleting some vertex `c` leaves paths each hanging from `c`
/// by an endpoint.
fn starlike_brute(g: &Graph) -> bool {
    let n = g.order();
    if n <= 2 {
        return true;
    }
    (0..n).any(|c| {
        (0..n).filter(|&v| v != c).all(|v| {
            let rest = g.neighbors(v).iter().filter(|&&w| w != c).count();
            rest <= if g.has_edge(v, c) { 1 } else { 2 }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn code_and_rho_ignore_labels((g, perm) in tree_and_perm(1, 14)) {
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(canonical_code(&g).unwrap(), canonical_code(&h).unwrap());
        let (a, b) = (rho(&g), rho(&h));
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn power_iteration_agrees_with_oracle(g in tree(2, 16)) {
        let q = q_matrix(&g).unwrap();
        let power = spectral_radius(&g, DEFAULT_TOL).unwrap();
        let oracle = oracle_spectral_radius(&q).unwrap();
        prop_assert!((power.rho - oracle.rho).abs() <= 1e-9 * power.rho);
        let dot: f64 = power.perron.iter().zip(&oracle.perron).map(|(a, b)| a * b).sum();
        prop_assert!(dot > 1.0 - 1e-8);
        prop_assert!(power.perron.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn spectral_bounds_hold(g in tree(3, 16)) {
        let d = all_pairs_distances(&g).unwrap();
        let tr = transmissions(&d);
        let r = rho(&g);
        let w = graph_stats(&g).unwrap().wiener_index as f64;
        let n = g.order() as f64;
        prop_assert!(r > tr.max() as f64);
        prop_assert!(r >= 2.0 * tr.min() as f64 - 1e-9 * r);
        prop_assert!(r <= 2.0 * tr.max() as f64 + 1e-9 * r);
        prop_assert!(r >= 4.0 * w / n - 1e-9 * r);
        let spectrum = full_spectrum_oracle(&q_matrix(&g).unwrap()).unwrap();
        prop_assert!(spectrum[0] > 0.0);
        let trace: f64 = tr.values().iter().map(|&t| t as f64).sum();
        let sum: f64 = spectrum.iter().sum();
        prop_assert!((sum - trace).abs() <= 1e-9 * trace);
    }

    #[test]
    fn quadratic_form_identity(g in tree(2, 12), seed in proptest::collection::vec(-1.0f64..1.0, 12)) {
        let d = all_pairs_distances(&g).unwrap();
        let q = q_matrix(&g).unwrap();
        let x = &seed[..g.order()];
        let a = quadratic_form_with(&d, x).unwrap();
        let b = matrix_quadratic_form(&q, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300));
    }

    #[test]
    fn class_predicates_match_brute_force(g in tree(1, 13)) {
        prop_assert_eq!(is_caterpillar(&g).unwrap(), caterpillar_brute(&g));
        prop_assert_eq!(is_starlike(&g).unwrap(), starlike_brute(&g));
        let m = class_membership(&g).unwrap();
        if let Some((t1, t2)) = m.double_broom {
            let built = make_double_broom(g.order(), t1, t2).unwrap();
            prop_assert_eq!(canonical_code(&built).unwrap(), canonical_code(&g).unwrap());
        }
    }

    #[test]
    fn contraction_lowers_rho(g in tree(4, 13), pick in any::<prop::sample::Index>()) {
        let candidates = contraction_candidates(&g);
        prop_assume!(!candidates.is_empty());
        let (u, v) = candidates[pick.index(candidates.len())];
        let (h, map) = c_transform(&g, u, v).unwrap();
        prop_assert!(h.is_tree());
        prop_assert_eq!(h.order(), g.order());
        prop_assert_eq!(map.len(), g.order());
        prop_assert!(rho(&h) < rho(&g));
    }

    #[test]
    fn pendant_shift_raises_rho(g in tree(4, 13), pick in any::<prop::sample::Index>()) {
        let candidates = pendant_shift_candidates(&g);
        prop_assume!(!candidates.is_empty());
        let (u, p, q) = &candidates[pick.index(candidates.len())];
        let h = pendant_path_shift(&g, *u, p, q).unwrap();
        prop_assert!(h.is_tree());
        prop_assert!(rho(&h) > rho(&g));
    }
}

#[test]
fn double_broom_detection_is_complete() {
    // Every valid T(n, k; t1, t2) is recognized with its parameters.
    for n in 4..=12 {
        for t1 in 1..n {
            for t2 in t1..n {
                if let Ok(g) = make_double_broom(n, t1, t2) {
                    assert_eq!(class_membership(&g).unwrap().double_broom, Some((t1, t2)));
                }
            }
        }
    }
}
