//! Spectral radius and Perron vector of the distance signless Laplacian.
//!
//! The production path is power iteration on the exact integer matrix. A
//! cyclic Jacobi rotation solver serves as an independent dense oracle and as
//! the fallback when power iteration hits its iteration cap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, QMatrix};

/// Default relative residual tolerance for power iteration.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Power iteration cap before falling back to the oracle.
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Relative tolerance under which two spectral radii count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Relative off-diagonal Frobenius norm at which the rotation solver stops.
pub const ORACLE_OFF_DIAGONAL_TOL: f64 = 1e-12;
const ORACLE_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Power,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub rho: f64,
    /// Unit 2-norm, strictly positive for connected graphs.
    pub perron: Vec<f64>,
    /// Max-norm of `Q x - rho x`.
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iterations: MAX_ITERATIONS,
        }
    }
}

impl PowerIteration {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Runs power iteration from the all-ones vector. Converged once the
    /// eigen-residual max-norm drops to `tol * rho`.
    pub fn solve(&self, q: &QMatrix) -> Result<SpectralResult> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        let n = q.order();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if n == 1 {
            return Ok(SpectralResult {
                rho: q.get(0, 0) as f64,
                perron: vec![1.0],
                residual: 0.0,
                iterations: 0,
                method: Method::Power,
            });
        }

        let a = q.to_f64();
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0; n];
        for iteration in 1..=self.max_iterations {
            mat_vec(&a, &x, &mut y);
            let rho = dot(&x, &y);
            let residual = x
                .iter()
                .zip(&y)
                .map(|(xi, yi)| (yi - rho * xi).abs())
                .fold(0.0, f64::max);
            if residual <= self.tol * rho {
                return Ok(SpectralResult {
                    rho,
                    perron: x,
                    residual,
                    iterations: iteration,
                    method: Method::Power,
                });
            }
            let norm = dot(&y, &y).sqrt();
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / norm;
            }
        }
        oracle_perron(q, self.max_iterations)
    }
}

/// `rho` and the Perron vector of `Q_D(g)`.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult> {
    let q = crate::graph::q_matrix(g)?;
    PowerIteration::with_tol(tol).solve(&q)
}

/// Largest eigenvalue with the default tolerance.
pub fn rho(g: &Graph) -> Result<f64> {
    spectral_radius(g, DEFAULT_TOL).map(|r| r.rho)
}

/// `rho` and Perron vector from the Jacobi oracle alone.
pub fn oracle_spectral_radius(q: &QMatrix) -> Result<SpectralResult> {
    if !q.is_symmetric() {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    oracle_perron(q, 0)
}

fn oracle_perron(q: &QMatrix, iterations: usize) -> Result<SpectralResult> {
    let n = q.order();
    let (values, vectors) = jacobi(q.to_f64(), n, true)?;
    let vectors = vectors.expect("vectors requested");
    let top = (0..n)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("nonempty");
    let mut x: Vec<f64> = (0..n).map(|r| vectors[r * n + top]).collect();
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    let norm = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    let rho = values[top];
    let mut y = vec![0.0; n];
    mat_vec(&q.to_f64(), &x, &mut y);
    let residual = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - rho * xi).abs())
        .fold(0.0, f64::max);
    Ok(SpectralResult {
        rho,
        perron: x,
        residual,
        iterations,
        method: Method::Oracle,
    })
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations. Shares no code with the power iteration path.
pub fn full_spectrum_oracle(q: &QMatrix) -> Result<Vec<f64>> {
    if !q.is_symmetric() {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let (mut values, _) = jacobi(q.to_f64(), q.order(), false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues (ascending) paired with their unit eigenvectors.
pub fn oracle_eigenpairs(q: &QMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if !q.is_symmetric() {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let n = q.order();
    let (values, vectors) = jacobi(q.to_f64(), n, true)?;
    let vectors = vectors.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let columns = order
        .iter()
        .map(|&c| (0..n).map(|r| vectors[r * n + c]).collect())
        .collect();
    Ok((sorted_values, columns))
}

fn jacobi(mut a: Vec<f64>, n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; n * n];
        (0..n).for_each(|i| id[i * n + i] = 1.0);
        id
    });
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= ORACLE_OFF_DIAGONAL_TOL * scale {
            break;
        }
        if sweeps == ORACLE_MAX_SWEEPS {
            return Err(Error::OracleNoConvergence {
                off_norm: off,
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[r * n + p];
                        let vrq = v[r * n + q];
                        v[r * n + p] = c * vrp - s * vrq;
                        v[r * n + q] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

/// Sum over unordered vertex pairs of `d(u,v) * (x(u) + x(v))^2`.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> Result<f64> {
    quadratic_form_with(&all_pairs_distances(g)?, x)
}

pub fn quadratic_form_with(d: &DistanceMatrix, x: &[f64]) -> Result<f64> {
    check_len(d.order(), x)?;
    let mut total = 0.0;
    for u in 0..d.order() {
        for v in u + 1..d.order() {
            let s = x[u] + x[v];
            total += f64::from(d.get(u, v)) * s * s;
        }
    }
    Ok(total)
}

/// Direct `x^T Q x`.
pub fn matrix_quadratic_form(q: &QMatrix, x: &[f64]) -> Result<f64> {
    check_len(q.order(), x)?;
    let n = q.order();
    let mut y = vec![0.0; n];
    mat_vec(&q.to_f64(), x, &mut y);
    Ok(dot(x, &y))
}

/// `max_v |sum_u d(u,v)(x(u)+x(v)) - rho x(v)| / |x|_inf`.
pub fn eigen_equation_residual(g: &Graph, rho: f64, x: &[f64]) -> Result<f64> {
    eigen_equation_residual_with(&all_pairs_distances(g)?, rho, x)
}

pub fn eigen_equation_residual_with(d: &DistanceMatrix, rho: f64, x: &[f64]) -> Result<f64> {
    check_len(d.order(), x)?;
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::InvalidArgument("eigenvector must be nonzero".into()));
    }
    let worst = (0..d.order())
        .map(|v| {
            let lhs: f64 = (0..d.order())
                .map(|u| f64::from(d.get(u, v)) * (x[u] + x[v]))
                .sum();
            (lhs - rho * x[v]).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

/// Outcome of comparing two spectral radii under [`TIE_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoOrdering {
    Less,
    Greater,
    Tied,
}

pub fn tie_tolerance(a: f64, b: f64) -> f64 {
    TIE_TOLERANCE * a.abs().max(b.abs())
}

/// Orders `a` against `b`, refusing to separate values within the tie
/// tolerance.
pub fn compare_rho(a: f64, b: f64) -> RhoOrdering {
    let tol = tie_tolerance(a, b);
    if a - b > tol {
        RhoOrdering::Greater
    } else if b - a > tol {
        RhoOrdering::Less
    } else {
        RhoOrdering::Tied
    }
}

fn check_len(n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(())
}

fn mat_vec(a: &[f64], x: &[f64], y: &mut [f64]) {
    let n = x.len();
    for (i, yi) in y.iter_mut().enumerate() {
        *yi = dot(&a[i * n..(i + 1) * n], x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::q_matrix;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (0, v))).unwrap()
    }

    // Symmetric-ansatz closed forms: P_3 has x = (1, t, 1) giving
    // t^2 + 3t - 2 = 0 and rho = 5 + t; K_{1,3} has x = (1, t, t, t) giving
    // 3t^2 - 6t - 1 = 0 and rho = 3 + 3t.
    fn p3_closed_form() -> f64 {
        let t = (-3.0 + 17f64.sqrt()) / 2.0;
        5.0 + t
    }

    fn star4_closed_form() -> f64 {
        let t = (6.0 + 48f64.sqrt()) / 6.0;
        3.0 + 3.0 * t
    }

    #[test]
    fn ansatz_closed_forms_match_literals() {
        assert!((p3_closed_form() - (7.0 + 17f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((star4_closed_form() - (6.0 + 2.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!((p3_closed_form() - 5.5615528).abs() < 1e-7);
        assert!((star4_closed_form() - 9.4641016).abs() < 1e-7);
    }

    #[test]
    fn power_iteration_on_closed_form_graphs() {
        let r = spectral_radius(&complete(2), DEFAULT_TOL).unwrap();
        assert!((r.rho - 2.0).abs() < 1e-12);
        assert!((r.perron[0] - r.perron[1]).abs() < 1e-12);
        assert_eq!(r.method, Method::Power);
        assert!((rho(&complete(3)).unwrap() - 4.0).abs() < 1e-11);
        assert!((rho(&path(3)).unwrap() - p3_closed_form()).abs() < 1e-10);
        assert!((rho(&star(4)).unwrap() - star4_closed_form()).abs() < 1e-10);
    }

    #[test]
    fn single_vertex_convention() {
        let r = spectral_radius(&Graph::empty(1), DEFAULT_TOL).unwrap();
        assert_eq!(r.rho, 0.0);
        assert_eq!(r.perron, vec![1.0]);
    }

    #[test]
    fn rejects_bad_tolerance_and_disconnected_graphs() {
        assert!(spectral_radius(&path(3), 0.0).is_err());
        assert!(spectral_radius(&path(3), f64::NAN).is_err());
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            spectral_radius(&g, DEFAULT_TOL),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn iteration_cap_falls_back_to_oracle() {
        let q = q_matrix(&path(6)).unwrap();
        let capped = PowerIteration {
            tol: DEFAULT_TOL,
            max_iterations: 2,
        };
        let r = capped.solve(&q).unwrap();
        assert_eq!(r.method, Method::Oracle);
        let full = PowerIteration::default().solve(&q).unwrap();
        assert!((r.rho - full.rho).abs() < 1e-9 * full.rho);
        assert!(r.perron.iter().all(|&v| v > 0.0));
        assert!(r.residual <= 1e-9 * r.rho);
    }

    #[test]
    fn oracle_spectra() {
        let spec = full_spectrum_oracle(&q_matrix(&complete(3)).unwrap()).unwrap();
        for (got, want) in spec.iter().zip([1.0, 1.0, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{spec:?}");
        }
        let spec = full_spectrum_oracle(&q_matrix(&complete(2)).unwrap()).unwrap();
        assert!(spec[0].abs() < 1e-12 && (spec[1] - 2.0).abs() < 1e-12);
        let spec = full_spectrum_oracle(&q_matrix(&path(3)).unwrap()).unwrap();
        assert!((spec[2] - p3_closed_form()).abs() < 1e-12);
        assert!(spec.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn oracle_rejects_asymmetric_input() {
        let q = QMatrix::from_rows(&[vec![1, 2], vec![3, 1]]).unwrap();
        assert!(full_spectrum_oracle(&q).is_err());
    }

    #[test]
    fn oracle_eigenpairs_satisfy_eigen_equation() {
        let g = star(5);
        let q = q_matrix(&g).unwrap();
        let (values, vectors) = oracle_eigenpairs(&q).unwrap();
        for (lambda, x) in values.iter().zip(&vectors) {
            assert!(eigen_equation_residual(&g, *lambda, x).unwrap() < 1e-10);
        }
    }

    #[test]
    fn quadratic_form_examples() {
        assert_eq!(quadratic_form(&complete(2), &[1.0, -1.0]).unwrap(), 0.0);
        assert_eq!(quadratic_form(&complete(2), &[1.0, 1.0]).unwrap(), 4.0);
        assert_eq!(quadratic_form(&path(3), &[1.0, 0.0, 0.0]).unwrap(), 3.0);
        assert!(matches!(
            quadratic_form(&path(3), &[1.0]),
            Err(Error::LengthMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn eigen_equation_examples() {
        assert_eq!(eigen_equation_residual(&complete(2), 2.0, &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(eigen_equation_residual(&complete(3), 4.0, &[1.0; 3]).unwrap(), 0.0);
        assert_eq!(eigen_equation_residual(&complete(3), 3.0, &[1.0; 3]).unwrap(), 1.0);
    }

    #[test]
    fn tie_comparisons() {
        assert_eq!(compare_rho(10.0, 10.0 + 1e-9), RhoOrdering::Tied);
        assert_eq!(compare_rho(10.0, 10.0 + 1e-7), RhoOrdering::Less);
        assert_eq!(compare_rho(10.0 + 1e-7, 10.0), RhoOrdering::Greater);
    }
}
