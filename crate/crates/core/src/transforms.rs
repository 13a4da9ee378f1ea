//! Graft transformations: cut-edge contraction, branch moves and pendant
//! path shifts.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Contracts the cut edge `{u, v}` into `u` and hangs a new pendant vertex on
/// `u`.
///
/// Labels: `v` disappears, the remaining vertices keep their relative order
/// (labels above `v` shift down by one) and the new pendant is `n - 1`. The
/// returned map sends each old label to its new label, with `v` sent to the
/// image of `u`.
pub fn c_transform(g: &Graph, u: usize, v: usize) -> Result<(Graph, Vec<usize>)> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge { u, v });
    }
    g.ensure_connected()?;
    if !is_cut_edge(g, u, v) {
        return Err(Error::NotCutEdge { u, v });
    }
    let n = g.order();
    let shift = |w: usize| if w > v { w - 1 } else { w };
    let map: Vec<usize> = (0..n).map(|w| if w == v { shift(u) } else { shift(w) }).collect();

    let mut out = Graph::empty(n);
    for (a, b) in g.edges() {
        if (a, b) == (u.min(v), u.max(v)) {
            continue;
        }
        out.try_add_edge(map[a], map[b])?;
    }
    out.try_add_edge(map[u], n - 1)?;
    Ok((out, map))
}

fn is_cut_edge(g: &Graph, u: usize, v: usize) -> bool {
    let mut h = g.clone();
    h.remove_edge(u, v).expect("edge checked by caller");
    h.bfs(u)[v].is_none()
}

/// Ordered pairs `(u, v)` such that `{u, v}` is an edge with neither endpoint
/// a leaf and `u` carries a pendant edge.
pub fn contraction_candidates(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.order() {
        if g.degree(u) < 2 || !g.neighbors(u).iter().any(|&z| g.degree(z) == 1) {
            continue;
        }
        out.extend(g.neighbors(u).iter().filter(|&&v| g.degree(v) >= 2).map(|&v| (u, v)));
    }
    out
}

/// The branches of `G - v0` grouped into three parts `G1`, `G2`, `G3`, each of
/// which also contains `v0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDecomposition {
    pub order: usize,
    pub v0: usize,
    /// Components of `G - v0`, sorted, ordered by smallest vertex.
    pub branches: Vec<Vec<usize>>,
    /// Branch indices per group; `None` when there are fewer than three
    /// branches and no grouping was supplied.
    pub groups: Option<[Vec<usize>; 3]>,
}

impl BranchDecomposition {
    /// Branches of `g` at the cut vertex `v0`. With three or more branches the
    /// default grouping is `G1 = {B0}`, `G2 = {B1}`, `G3 = {B2, ...}`.
    pub fn new(g: &Graph, v0: usize) -> Result<Self> {
        if v0 >= g.order() {
            return Err(Error::InvalidDecomposition(format!("vertex {v0} out of range")));
        }
        g.ensure_connected()?;
        let mut h = g.clone();
        for w in g.neighbors(v0).to_vec() {
            h.remove_edge(v0, w)?;
        }
        let branches: Vec<Vec<usize>> =
            h.components().into_iter().filter(|c| c != &[v0]).collect();
        if branches.len() < 2 {
            return Err(Error::InvalidDecomposition(format!("{v0} is not a cut vertex")));
        }
        let groups = (branches.len() >= 3).then(|| [vec![0], vec![1], (2..branches.len()).collect()]);
        Ok(Self {
            order: g.order(),
            v0,
            branches,
            groups,
        })
    }

    /// Replaces the grouping; the three groups must partition the branch
    /// indices and be nonempty.
    pub fn with_grouping(mut self, groups: [Vec<usize>; 3]) -> Result<Self> {
        let mut seen = vec![false; self.branches.len()];
        for (i, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidDecomposition(format!("group G{} is empty", i + 1)));
            }
            for &b in group {
                if b >= seen.len() || std::mem::replace(&mut seen[b], true) {
                    return Err(Error::InvalidDecomposition(format!(
                        "grouping is not a partition (branch index {b})"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidDecomposition(
                "grouping is not a partition (branch left out)".into(),
            ));
        }
        self.groups = Some(groups);
        Ok(self)
    }

    fn groups(&self) -> Result<&[Vec<usize>; 3]> {
        self.groups.as_ref().ok_or_else(|| {
            Error::InvalidDecomposition(format!(
                "only {} branches at {} and no grouping supplied",
                self.branches.len(),
                self.v0
            ))
        })
    }

    /// Vertices of group `G_{index+1}` excluding `v0`.
    pub fn group_without_root(&self, index: usize) -> Result<Vec<usize>> {
        let mut out: Vec<usize> = self.groups()?[index]
            .iter()
            .flat_map(|&b| self.branches[b].iter().copied())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Vertices of group `G_{index+1}` including `v0`.
    pub fn group_vertices(&self, index: usize) -> Result<Vec<usize>> {
        let mut out = self.group_without_root(index)?;
        out.push(self.v0);
        out.sort_unstable();
        Ok(out)
    }
}

pub fn branch_decomposition(g: &Graph, v0: usize) -> Result<BranchDecomposition> {
    BranchDecomposition::new(g, v0)
}

/// Every assignment of `branch_count` branches onto three labeled nonempty
/// groups, in lexicographic order of the assignment vector.
pub fn all_groupings(branch_count: usize) -> Vec<[Vec<usize>; 3]> {
    let mut out = Vec::new();
    let total = 3usize.pow(branch_count as u32);
    for code in 0..total {
        let mut groups: [Vec<usize>; 3] = Default::default();
        let mut rest = code;
        let mut digits = vec![0; branch_count];
        for d in digits.iter_mut().rev() {
            *d = rest % 3;
            rest /= 3;
        }
        for (b, &d) in digits.iter().enumerate() {
            groups[d].push(b);
        }
        if groups.iter().all(|g| !g.is_empty()) {
            out.push(groups);
        }
    }
    out
}

/// Moves `G3` from `v0` to `u`: each edge `v0 - w` with `w` in `G3` becomes
/// `u - w`. Labels are unchanged.
pub fn move_branch(g: &Graph, dec: &BranchDecomposition, u: usize) -> Result<Graph> {
    if u == dec.v0 {
        return Err(Error::InvalidDecomposition("target equals v0".into()));
    }
    if dec.group_without_root(1)?.binary_search(&u).is_err() {
        return Err(Error::InvalidDecomposition(format!("target {u} is not in G2")));
    }
    let third = dec.group_without_root(2)?;
    let mut out = g.clone();
    for w in g.neighbors(dec.v0).to_vec() {
        if third.binary_search(&w).is_ok() {
            out.remove_edge(dec.v0, w)?;
            out.try_add_edge(u, w)?;
        }
    }
    Ok(out)
}

/// Relative slack under which the two branch-move sums count as equal.
pub const CONDITION_SLACK: f64 = 1e-12;

/// The two double sums `sum_{i in G3 - v0} sum_{j in G1} (x_i + x_j)^2` and
/// the same over `G2`; `G1` and `G2` include `v0`.
pub fn branch_move_sums(dec: &BranchDecomposition, x: &[f64]) -> Result<(f64, f64)> {
    if x.len() != dec.order {
        return Err(Error::LengthMismatch {
            expected: dec.order,
            got: x.len(),
        });
    }
    let third = dec.group_without_root(2)?;
    let sum_over = |targets: &[usize]| -> f64 {
        third
            .iter()
            .flat_map(|&i| targets.iter().map(move |&j| (x[i] + x[j]).powi(2)))
            .sum()
    };
    Ok((sum_over(&dec.group_vertices(0)?), sum_over(&dec.group_vertices(1)?)))
}

/// True when the `G1` sum is at least the `G2` sum (within
/// [`CONDITION_SLACK`]), which guarantees that [`move_branch`] increases the
/// spectral radius.
pub fn branch_move_condition(dec: &BranchDecomposition, x: &[f64]) -> Result<bool> {
    let (first, second) = branch_move_sums(dec, x)?;
    Ok(first >= second - CONDITION_SLACK * first.max(second))
}

/// A path `attach - vertices[0] - ... - vertices[p-1]` whose last vertex is a
/// leaf and whose inner vertices have degree two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendantPath {
    pub attach: usize,
    pub vertices: Vec<usize>,
}

impl PendantPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn leaf(&self) -> usize {
        *self.vertices.last().expect("pendant paths are nonempty")
    }
}

/// Pendant paths hanging at `u`, one per neighbor whose branch is a path.
pub fn pendant_paths_at(g: &Graph, u: usize) -> Vec<PendantPath> {
    let mut out = Vec::new();
    'outer: for &first in g.neighbors(u) {
        let mut vertices = vec![first];
        let (mut prev, mut cur) = (u, first);
        loop {
            match g.degree(cur) {
                1 => break,
                2 => {
                    let next = g.neighbors(cur).iter().copied().find(|&w| w != prev).unwrap();
                    if next == u {
                        continue 'outer;
                    }
                    prev = cur;
                    cur = next;
                    vertices.push(cur);
                }
                _ => continue 'outer,
            }
        }
        out.push(PendantPath { attach: u, vertices });
    }
    out
}

/// `(u, P, Q)` with `P`, `Q` distinct pendant paths at `u`, `|P| <= |Q|`, and
/// at least two vertices outside the two paths.
pub fn pendant_shift_candidates(g: &Graph) -> Vec<(usize, PendantPath, PendantPath)> {
    let mut out = Vec::new();
    for u in 0..g.order() {
        let paths = pendant_paths_at(g, u);
        for a in 0..paths.len() {
            for b in a + 1..paths.len() {
                let (p, q) = if paths[a].len() <= paths[b].len() {
                    (&paths[a], &paths[b])
                } else {
                    (&paths[b], &paths[a])
                };
                if g.order() >= p.len() + q.len() + 2 {
                    out.push((u, p.clone(), q.clone()));
                }
            }
        }
    }
    out
}

/// Turns `G_{p,q}` into `G_{p-1,q+1}`: the leaf of the shorter path `p_path`
/// is detached and appended to the end of `q_path`. Labels are unchanged.
pub fn pendant_path_shift(
    g: &Graph,
    u: usize,
    p_path: &PendantPath,
    q_path: &PendantPath,
) -> Result<Graph> {
    let bad = |m: String| Err(Error::InvalidPendantPath(m));
    if p_path.is_empty() {
        return bad("p = 0".into());
    }
    let paths = pendant_paths_at(g, u);
    for path in [p_path, q_path] {
        if path.attach != u || !paths.contains(path) {
            return bad(format!("{:?} is not a pendant path at {u}", path.vertices));
        }
    }
    if p_path == q_path {
        return bad("the two paths coincide".into());
    }
    if p_path.len() > q_path.len() {
        return bad(format!("q >= p violated (p = {}, q = {})", p_path.len(), q_path.len()));
    }
    if g.order() < p_path.len() + q_path.len() + 2 {
        return bad("base graph has fewer than two vertices".into());
    }
    let leaf = p_path.leaf();
    let before = if p_path.len() == 1 {
        u
    } else {
        p_path.vertices[p_path.len() - 2]
    };
    let mut out = g.clone();
    out.remove_edge(before, leaf)?;
    out.try_add_edge(q_path.leaf(), leaf)?;
    Ok(out)
}
