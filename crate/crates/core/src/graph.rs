//! Simple undirected graphs with exact integer distance data.
//!
//! Vertices are dense indices `0..n`. Distances, transmissions and the
//! distance signless Laplacian are kept as exact integers; floating point
//! only enters in [`crate::spectral`].

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `order` vertices.
    pub fn empty(order: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); order],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(order);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge {{{u},{v}}} has an endpoint outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Err(Error::InvalidGraph(format!("duplicate edge {{{u},{v}}}"))),
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                self.edge_count += 1;
                Ok(())
            }
        }
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let pos_v = self.adjacency[u]
            .binary_search(&v)
            .map_err(|_| Error::NotAnEdge { u, v })?;
        self.adjacency[u].remove(pos_v);
        let pos_u = self.adjacency[v].binary_search(&u).expect("adjacency is symmetric");
        self.adjacency[v].remove(pos_u);
        self.edge_count -= 1;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.order()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].unwrap() + 1;
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for start in 0..self.order() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Fails with the representatives of the first two components when the
    /// graph is disconnected.
    pub fn ensure_connected(&self) -> Result<()> {
        if self.order() == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected {
                reachable: comps[0][0],
                unreachable: comps[1][0],
            });
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        self.ensure_connected().is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.order() >= 1 && self.size() + 1 == self.order() && self.is_connected()
    }

    pub fn ensure_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree {
                order: self.order(),
                edges: self.size(),
            })
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.order() {
            return Err(Error::LengthMismatch {
                expected: self.order(),
                got: perm.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        Self::from_edges(
            self.order(),
            self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])),
        )
    }

    /// Serializes as `n m` followed by one `u v` line per edge, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.order(), self.size());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parses the `n m` / `u v` edge-list format. Blank lines and `#` comments are
/// skipped; every error carries the 1-based line number it was found on.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"n m\"".into(),
    })?;
    let [n, m] = parse_pair(header, header_line)?;
    if n == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "order must be at least 1".into(),
        });
    }

    let mut g = Graph::empty(n);
    let mut last_line = header_line;
    for (line, body) in lines {
        if g.size() == m {
            return Err(Error::Parse {
                line,
                message: format!("wrong edge count: header declares {m} edges but more follow"),
            });
        }
        let [u, v] = parse_pair(body, line)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("vertex id out of range 0..{n} in edge \"{body}\""),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        if g.has_edge(u, v) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate edge {{{u},{v}}}"),
            });
        }
        g.try_add_edge(u, v).expect("validated above");
        last_line = line;
    }
    if g.size() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!(
                "wrong edge count: header declares {m} edges, found {}",
                g.size()
            ),
        });
    }
    Ok(g)
}

fn parse_pair(body: &str, line: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, found \"{body}\""),
        });
    }
    let mut out = [0; 2];
    for (slot, field) in out.iter_mut().zip(&fields) {
        *slot = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("\"{field}\" is not a nonnegative integer"),
        })?;
    }
    Ok(out)
}

/// Exact all-pairs shortest-path distances of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Largest entry (the diameter).
    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first search from every vertex.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix> {
    g.ensure_connected()?;
    let n = g.order();
    let mut data = Vec::with_capacity(n * n);
    for s in 0..n {
        data.extend(g.bfs(s).into_iter().map(|d| d.expect("graph is connected")));
    }
    Ok(DistanceMatrix { n, data })
}

/// Per-vertex transmission (distance row sum) with cached extremes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionVector {
    values: Vec<u64>,
    max: u64,
    min: u64,
}

impl TransmissionVector {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, v: usize) -> u64 {
        self.values[v]
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn min(&self) -> u64 {
        self.min
    }
}

pub fn transmissions(d: &DistanceMatrix) -> TransmissionVector {
    let values: Vec<u64> = (0..d.order())
        .map(|v| d.row(v).iter().map(|&x| u64::from(x)).sum())
        .collect();
    let max = values.iter().copied().max().unwrap_or(0);
    let min = values.iter().copied().min().unwrap_or(0);
    TransmissionVector { values, max, min }
}

/// Distance signless Laplacian: transmissions on the diagonal, distances off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<u64>,
}

impl QMatrix {
    pub fn from_distances(d: &DistanceMatrix) -> Self {
        let n = d.order();
        let tr = transmissions(d);
        let mut data: Vec<u64> = (0..n * n).map(|i| u64::from(d.data[i])).collect();
        for v in 0..n {
            data[v * n + v] = tr.get(v);
        }
        Self { n, data }
    }

    /// Builds from a dense row-major matrix. Only used for oracle inputs and
    /// tests; no graph structure is implied.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..u).all(|v| self.get(u, v) == self.get(v, u)))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&x| x as f64).collect()
    }
}

pub fn q_matrix(g: &Graph) -> Result<QMatrix> {
    Ok(QMatrix::from_distances(&all_pairs_distances(g)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub degrees: Vec<usize>,
    pub pendant_vertices: Vec<usize>,
    pub diameter: u32,
    /// Vertices of degree at least three.
    pub branching_vertices: usize,
    /// Sum of distances over unordered vertex pairs.
    pub wiener_index: u64,
}

pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    let d = all_pairs_distances(g)?;
    let degrees = g.degrees();
    let pendant_vertices = (0..g.order()).filter(|&v| degrees[v] == 1).collect();
    let branching_vertices = degrees.iter().filter(|&&k| k >= 3).count();
    let wiener_index = transmissions(&d).values().iter().sum::<u64>() / 2;
    Ok(GraphStats {
        degrees,
        pendant_vertices,
        diameter: d.max_entry(),
        branching_vertices,
        wiener_index,
    })
}
