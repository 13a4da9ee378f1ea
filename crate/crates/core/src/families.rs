//! Named tree families and the class predicates built on them.
//!
//! Every constructor uses a fixed, documented labeling so that edge lists and
//! fixtures are reproducible.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidFamily("path: n >= 1 violated (n = 0)".into()));
    }
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Star `K_{1,n-1}` with center 0.
pub fn make_star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidFamily(format!("star: n >= 2 violated (n = {n})")));
    }
    Graph::from_edges(n, (1..n).map(|v| (0, v)))
}

/// Broom `B(n; n0, n1, ..., nr)`: the star `S_{1,r}` with `n0` extra pendants
/// on the center and `ni` pendants on arm `i`.
///
/// Labels: center 0, arms `1..=r`, then the `n0` center pendants, then the
/// pendants of arm 1, arm 2, ... consecutively.
pub fn make_broom(n: usize, n0: usize, parts: &[usize]) -> Result<Graph> {
    let r = parts.len();
    if r == 0 {
        return Err(Error::InvalidFamily("B: r >= 1 violated (no parts)".into()));
    }
    if parts[0] < 1 {
        return Err(Error::InvalidFamily(format!(
            "B: n1 >= 1 violated (n1 = {})",
            parts[0]
        )));
    }
    if let Some(i) = (1..r).find(|&i| parts[i] < parts[i - 1]) {
        return Err(Error::InvalidFamily(format!(
            "B: n{} <= n{} violated ({} > {})",
            i,
            i + 1,
            parts[i - 1],
            parts[i]
        )));
    }
    let total = n0 + parts.iter().sum::<usize>();
    if total + r + 1 != n {
        return Err(Error::InvalidFamily(format!(
            "B: n0 + n1 + ... + nr = n - r - 1 violated ({total} != {n} - {r} - 1)"
        )));
    }
    let mut edges: Vec<(usize, usize)> = (1..=r).map(|a| (0, a)).collect();
    let mut next = r + 1;
    for _ in 0..n0 {
        edges.push((0, next));
        next += 1;
    }
    for (arm, &count) in (1..=r).zip(parts) {
        for _ in 0..count {
            edges.push((arm, next));
            next += 1;
        }
    }
    Graph::from_edges(n, edges)
}

/// Spider `S(n; n1, ..., nr)`: paths on `ni` vertices each joined by an edge
/// to the center.
///
/// Labels: center 0, then each leg's vertices consecutively starting from the
/// vertex adjacent to the center.
pub fn make_spider(n: usize, legs: &[usize]) -> Result<Graph> {
    if legs.is_empty() {
        return Err(Error::InvalidFamily("S: r >= 1 violated (no legs)".into()));
    }
    if let Some(&bad) = legs.iter().find(|&&l| l < 1) {
        return Err(Error::InvalidFamily(format!("S: ni >= 1 violated (leg {bad})")));
    }
    if let Some(i) = (1..legs.len()).find(|&i| legs[i] < legs[i - 1]) {
        return Err(Error::InvalidFamily(format!(
            "S: n{} <= n{} violated ({} > {})",
            i,
            i + 1,
            legs[i - 1],
            legs[i]
        )));
    }
    let total: usize = legs.iter().sum();
    if total + 1 != n {
        return Err(Error::InvalidFamily(format!(
            "S: n1 + ... + nr = n - 1 violated ({total} != {n} - 1)"
        )));
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut next = 1;
    for &len in legs {
        edges.push((0, next));
        for v in next + 1..next + len {
            edges.push((v - 1, v));
        }
        next += len;
    }
    Graph::from_edges(n, edges)
}

/// Double broom `T(n, t1 + t2; t1, t2)`: the path `0..l-1` (`l = n - t1 - t2`)
/// with `t1` pendants at 0 labeled `l..l+t1-1` and `t2` pendants at `l-1`.
pub fn make_double_broom(n: usize, t1: usize, t2: usize) -> Result<Graph> {
    if t1 < 1 || t2 < 1 {
        return Err(Error::InvalidFamily(format!(
            "T: t1 >= 1 and t2 >= 1 violated (t1 = {t1}, t2 = {t2})"
        )));
    }
    let k = t1 + t2;
    if n < k + 2 {
        return Err(Error::InvalidFamily(format!(
            "T: l = n - k >= 2 violated (n = {n}, k = {k})"
        )));
    }
    let l = n - k;
    let mut edges: Vec<(usize, usize)> = (1..l).map(|v| (v - 1, v)).collect();
    edges.extend((l..l + t1).map(|p| (0, p)));
    edges.extend((l + t1..n).map(|p| (l - 1, p)));
    Graph::from_edges(n, edges)
}

/// `P(n; i, j)`: spine `v1..v_{n-3}` (label `t - 1` for `v_t`), a pendant edge
/// at `v_i` (label `n-3`) and a pendant 2-path at `v_j` (labels `n-2`, `n-1`).
pub fn make_spine_graft(n: usize, i: usize, j: usize) -> Result<Graph> {
    if n < 8 {
        return Err(Error::InvalidFamily(format!("P: n >= 8 violated (n = {n})")));
    }
    for (name, value) in [("i", i), ("j", j)] {
        if value < 2 || value > n - 4 {
            return Err(Error::InvalidFamily(format!(
                "P: 2 <= {name} <= n - 4 violated ({name} = {value}, n - 4 = {})",
                n - 4
            )));
        }
    }
    if i == j {
        return Err(Error::InvalidFamily(format!("P: i != j violated (i = j = {i})")));
    }
    let spine = n - 3;
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|v| (v - 1, v)).collect();
    edges.push((i - 1, n - 3));
    edges.push((j - 1, n - 2));
    edges.push((n - 2, n - 1));
    Graph::from_edges(n, edges)
}

/// A parsed family member, e.g. `B:n=10,n0=3,parts=1,1,1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Path { n: usize },
    Star { n: usize },
    Broom { n: usize, n0: usize, parts: Vec<usize> },
    Spider { n: usize, legs: Vec<usize> },
    DoubleBroom { n: usize, t1: usize, t2: usize },
    SpineGraft { n: usize, i: usize, j: usize },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            Self::Path { n } => make_path(*n),
            Self::Star { n } => make_star(*n),
            Self::Broom { n, n0, parts } => make_broom(*n, *n0, parts),
            Self::Spider { n, legs } => make_spider(*n, legs),
            Self::DoubleBroom { n, t1, t2 } => make_double_broom(*n, *t1, *t2),
            Self::SpineGraft { n, i, j } => make_spine_graft(*n, *i, *j),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Self::Path { n }
            | Self::Star { n }
            | Self::Broom { n, .. }
            | Self::Spider { n, .. }
            | Self::DoubleBroom { n, .. }
            | Self::SpineGraft { n, .. } => *n,
        }
    }
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Path { n } => write!(f, "Path:n={n}"),
            Self::Star { n } => write!(f, "Star:n={n}"),
            Self::Broom { n, n0, parts } => write!(f, "B:n={n},n0={n0},parts={}", join(parts)),
            Self::Spider { n, legs } => write!(f, "S:n={n},legs={}", join(legs)),
            Self::DoubleBroom { n, t1, t2 } => write!(f, "T:n={n},t1={t1},t2={t2}"),
            Self::SpineGraft { n, i, j } => write!(f, "P:n={n},i={i},j={j}"),
        }
    }
}

type Fields = Vec<(String, Vec<usize>)>;

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidFamily(format!("\"{s}\": {msg}"));
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected TAG:key=value,...".into()))?;

        // Keys map to value lists; bare tokens extend the previous key's list.
        let mut fields: Fields = Vec::new();
        for token in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = match token.split_once('=') {
                Some((k, v)) => (Some(k.trim()), v.trim()),
                None => (None, token),
            };
            let value: usize = value
                .parse()
                .map_err(|_| bad(format!("\"{value}\" is not a nonnegative integer")))?;
            match key {
                Some(k) => {
                    if fields.iter().any(|(f, _)| f == k) {
                        return Err(bad(format!("duplicate key \"{k}\"")));
                    }
                    fields.push((k.to_string(), vec![value]));
                }
                None => fields
                    .last_mut()
                    .ok_or_else(|| bad("value without a key".into()))?
                    .1
                    .push(value),
            }
        }

        let take = |fields: &mut Fields, key: &str| -> Result<Vec<usize>> {
            let pos = fields
                .iter()
                .position(|(k, _)| k == key)
                .ok_or_else(|| bad(format!("missing key \"{key}\"")))?;
            Ok(fields.remove(pos).1)
        };
        let scalar = |fields: &mut Fields, key: &str| -> Result<usize> {
            match take(fields, key)?.as_slice() {
                [v] => Ok(*v),
                _ => Err(bad(format!("key \"{key}\" takes a single value"))),
            }
        };

        let f = &mut fields;
        let spec = match tag.trim() {
            "Path" => Self::Path { n: scalar(f, "n")? },
            "Star" => Self::Star { n: scalar(f, "n")? },
            "B" => Self::Broom {
                n: scalar(f, "n")?,
                n0: scalar(f, "n0")?,
                parts: take(f, "parts")?,
            },
            "S" => Self::Spider {
                n: scalar(f, "n")?,
                legs: take(f, "legs")?,
            },
            "T" => {
                let n = scalar(f, "n")?;
                let t1 = scalar(f, "t1")?;
                let t2 = scalar(f, "t2")?;
                if f.iter().any(|(k, _)| k == "k") {
                    let k = scalar(f, "k")?;
                    if k != t1 + t2 {
                        return Err(bad(format!("t1 + t2 = k violated ({t1} + {t2} != {k})")));
                    }
                }
                Self::DoubleBroom { n, t1, t2 }
            }
            "P" => Self::SpineGraft {
                n: scalar(f, "n")?,
                i: scalar(f, "i")?,
                j: scalar(f, "j")?,
            },
            other => return Err(bad(format!("unknown family \"{other}\""))),
        };
        if let Some((k, _)) = fields.first() {
            return Err(bad(format!("unexpected key \"{k}\"")));
        }
        spec.build()?;
        Ok(spec)
    }
}

pub fn pendant_count(g: &Graph) -> usize {
    (0..g.order()).filter(|&v| g.degree(v) == 1).count()
}

/// At most one vertex of degree three or more.
pub fn is_starlike(g: &Graph) -> Result<bool> {
    g.ensure_tree()?;
    Ok((0..g.order()).filter(|&v| g.degree(v) >= 3).count() <= 1)
}

/// Deleting every pendant vertex leaves a path. An empty or single-vertex
/// remainder counts as a path, so all trees on at most three vertices and all
/// stars are caterpillars.
pub fn is_caterpillar(g: &Graph) -> Result<bool> {
    g.ensure_tree()?;
    let internal: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) >= 2).collect();
    // The internal vertices of a tree induce a subtree, so it is a path iff
    // no internal vertex has three internal neighbours.
    Ok(internal.iter().all(|&v| {
        g.neighbors(v).iter().filter(|&&w| g.degree(w) >= 2).count() <= 2
    }))
}

/// `Some((t1, t2))` with `t1 <= t2` when `g` is isomorphic to
/// `T(n, t1 + t2; t1, t2)`.
///
/// Structural test: the non-leaf vertices form a path on at least two
/// vertices and its interior vertices have degree exactly two in `g`.
pub fn double_broom_params(g: &Graph) -> Result<Option<(usize, usize)>> {
    g.ensure_tree()?;
    let internal: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) >= 2).collect();
    if internal.len() < 2 {
        return Ok(None);
    }
    let internal_degree =
        |v: usize| g.neighbors(v).iter().filter(|&&w| g.degree(w) >= 2).count();
    let ends: Vec<usize> = internal.iter().copied().filter(|&v| internal_degree(v) == 1).collect();
    if ends.len() != 2 {
        return Ok(None);
    }
    let interior_ok = internal
        .iter()
        .filter(|v| !ends.contains(v))
        .all(|&v| internal_degree(v) == 2 && g.degree(v) == 2);
    if !interior_ok {
        return Ok(None);
    }
    let (a, b) = (g.degree(ends[0]) - 1, g.degree(ends[1]) - 1);
    Ok(Some((a.min(b), a.max(b))))
}

pub fn is_double_broom(g: &Graph) -> Result<bool> {
    Ok(double_broom_params(g)?.is_some())
}

/// Class flags of a tree: non-caterpillar, non-starlike, pendant count and
/// double-broom parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassMembership {
    pub non_caterpillar: bool,
    pub non_starlike: bool,
    pub pendants: usize,
    pub double_broom: Option<(usize, usize)>,
}

impl ClassMembership {
    pub fn of(g: &Graph) -> Result<Self> {
        Ok(Self {
            non_caterpillar: !is_caterpillar(g)?,
            non_starlike: !is_starlike(g)?,
            pendants: pendant_count(g),
            double_broom: double_broom_params(g)?,
        })
    }
}

pub fn class_membership(g: &Graph) -> Result<ClassMembership> {
    ClassMembership::of(g)
}
