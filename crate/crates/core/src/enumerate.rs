//! Unlabeled tree enumeration and canonical codes.
//!
//! Encoding: the rooted code of a vertex is `(` followed by its children's
//! codes in ascending byte order, then `)`. A tree with one centroid is coded
//! from that centroid. A tree with two adjacent centroids `a`, `b` is coded as
//! the smaller of `code(a) + code(b)` and `code(b) + code(a)`, where each side
//! is rooted with the centroid edge removed. Codes use only the bytes `(` and
//! `)` and have length `2n`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default largest order accepted by [`enumerate_trees`].
pub const DEFAULT_ENUMERATION_CAP: usize = 16;
/// Largest order accepted by [`prufer_count_oracle`].
pub const PRUFER_ORACLE_CAP: usize = 9;

/// Isomorphism-invariant code of an unlabeled tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len() / 2
    }

    /// Parses and validates a code string. The string must be the canonical
    /// code of the tree it describes.
    pub fn parse(text: &str) -> Result<Self> {
        let g = decode(text)?;
        let code = canonical_code(&g)?;
        if code.0 != text {
            return Err(Error::InvalidArgument(format!(
                "\"{text}\" is a tree encoding but not its canonical code"
            )));
        }
        Ok(code)
    }

    /// Tree built from the code with vertices labeled in preorder; the root of
    /// the first group is 0.
    pub fn to_graph(&self) -> Graph {
        decode(&self.0).expect("canonical codes are well formed")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn decode(text: &str) -> Result<Graph> {
    let bad = || Error::InvalidArgument(format!("\"{text}\" is not a tree encoding"));
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut roots = Vec::new();
    let mut next = 0;
    for byte in text.bytes() {
        match byte {
            b'(' => {
                match stack.last() {
                    Some(&parent) => edges.push((parent, next)),
                    None => roots.push(next),
                }
                stack.push(next);
                next += 1;
            }
            b')' => {
                stack.pop().ok_or_else(bad)?;
            }
            _ => return Err(bad()),
        }
    }
    if !stack.is_empty() {
        return Err(bad());
    }
    match roots.as_slice() {
        [_] => {}
        [a, b] => edges.push((*a, *b)),
        _ => return Err(bad()),
    }
    Graph::from_edges(next, edges)
}

/// Code of the subtree hanging from `root` when `blocked` (a neighbor of
/// `root`, if any) is removed.
fn rooted_code(g: &Graph, root: usize, blocked: Option<usize>) -> String {
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    if let Some(b) = blocked {
        parent[root] = b;
    }
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if w != parent[v] {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut children: Vec<Vec<String>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        let mut kids = std::mem::take(&mut children[v]);
        kids.sort_unstable();
        let mut code = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        code.push('(');
        kids.iter().for_each(|k| code.push_str(k));
        code.push(')');
        if v == root {
            return code;
        }
        children[parent[v]].push(code);
    }
    unreachable!("root is always visited")
}

/// One or two centroids of a tree.
pub fn centroids(g: &Graph) -> Result<Vec<usize>> {
    g.ensure_tree()?;
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if w != parent[v] {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    let mut heaviest = vec![0usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            size[parent[v]] += size[v];
            heaviest[parent[v]] = heaviest[parent[v]].max(size[v]);
        }
    }
    let weight: Vec<usize> = (0..n).map(|v| heaviest[v].max(n - size[v])).collect();
    let best = *weight.iter().min().expect("nonempty");
    Ok((0..n).filter(|&v| weight[v] == best).collect())
}

pub fn canonical_code(g: &Graph) -> Result<CanonicalCode> {
    let cs = centroids(g)?;
    Ok(CanonicalCode(match cs.as_slice() {
        [c] => rooted_code(g, *c, None),
        [a, b] => {
            let ca = rooted_code(g, *a, Some(*b));
            let cb = rooted_code(g, *b, Some(*a));
            let (first, second) = if ca <= cb { (ca, cb) } else { (cb, ca) };
            first + &second
        }
        _ => unreachable!("a tree has one or two centroids"),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedTree {
    pub code: CanonicalCode,
    pub graph: Graph,
}

impl EnumeratedTree {
    fn from_code(code: CanonicalCode) -> Self {
        let graph = code.to_graph();
        Self { code, graph }
    }

    /// Fixture line `code<TAB>u-v u-v ...` with edges sorted.
    pub fn fixture_line(&self) -> String {
        let edges: Vec<String> = self
            .graph
            .edges()
            .into_iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        format!("{}\t{}", self.code, edges.join(" "))
    }

    /// Parses a fixture line, checking that the edge list really has the
    /// stated code.
    pub fn parse_fixture_line(line: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("fixture line \"{line}\": {m}"));
        let (code, edges) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
        let n = code.len() / 2;
        let edges = edges
            .split_whitespace()
            .map(|tok| {
                let (u, v) = tok.split_once('-').ok_or_else(|| bad("edge is not u-v"))?;
                Ok((
                    u.parse().map_err(|_| bad("bad vertex"))?,
                    v.parse().map_err(|_| bad("bad vertex"))?,
                ))
            })
            .collect::<Result<Vec<(usize, usize)>>>()?;
        let graph = Graph::from_edges(n, edges)?;
        let computed = canonical_code(&graph)?;
        if computed.as_str() != code {
            return Err(bad("edge list does not match its code"));
        }
        Ok(Self {
            code: computed,
            graph,
        })
    }
}

/// One representative per unlabeled tree of order `n`, sorted by canonical
/// code. Representatives are labeled in preorder of their code.
///
/// Trees of order `k + 1` are grown by attaching a leaf to every vertex of
/// every tree of order `k` and deduplicating by code.
pub fn enumerate_trees(n: usize, cap: usize) -> Result<Vec<EnumeratedTree>> {
    if n == 0 {
        return Err(Error::InvalidArgument("tree order must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut level: BTreeSet<CanonicalCode> = BTreeSet::from([CanonicalCode("()".into())]);
    for _ in 1..n {
        level = level
            .par_iter()
            .flat_map_iter(|code| {
                let g = code.to_graph();
                let k = g.order();
                (0..k).map(move |v| {
                    let mut grown = Graph::empty(k + 1);
                    for (a, b) in g.edges() {
                        grown.try_add_edge(a, b).expect("copied edge");
                    }
                    grown.try_add_edge(v, k).expect("new leaf");
                    canonical_code(&grown).expect("grown graph is a tree")
                })
            })
            .collect();
    }
    Ok(level.into_iter().map(EnumeratedTree::from_code).collect())
}

/// Counts unlabeled trees by decoding every Prüfer sequence and
/// deduplicating the resulting labeled trees by canonical code.
pub fn prufer_count_oracle(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("tree order must be at least 1".into()));
    }
    if n > PRUFER_ORACLE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: PRUFER_ORACLE_CAP,
        });
    }
    if n <= 2 {
        return Ok(1);
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let block = total / n;
    let codes: HashSet<String> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut seen = HashSet::new();
            let mut seq = vec![0; len];
            for index in first * block..(first + 1) * block {
                let mut rest = index;
                for slot in seq.iter_mut().rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                let g = prufer_decode(n, &seq);
                seen.insert(canonical_code(&g).expect("Prüfer trees are trees").0);
            }
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(codes.len())
}

/// Labeled tree on `n` vertices from its Prüfer sequence (length `n - 2`).
pub fn prufer_decode(n: usize, seq: &[usize]) -> Graph {
    if n < 2 {
        return Graph::empty(n);
    }
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut g = Graph::empty(n);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        g.try_add_edge(leaf, s).expect("Prüfer edge");
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    g.try_add_edge(last[0], last[1]).expect("final Prüfer edge");
    g
}
