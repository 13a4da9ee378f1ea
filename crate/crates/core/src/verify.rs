//! Exhaustive verification of extremal-tree claims and graft monotonicity.
//!
//! Per-tree spectral work runs on the ambient rayon pool; every reduction is
//! an ordered fold over trees sorted by canonical code, so reports do not
//! depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{canonical_code, enumerate_trees, CanonicalCode, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::families::{
    make_broom, make_spider, make_spine_graft, ClassMembership,
};
use crate::graph::{all_pairs_distances, transmissions, Graph, QMatrix};
use crate::spectral::{
    eigen_equation_residual_with, full_spectrum_oracle, matrix_quadratic_form,
    quadratic_form_with, spectral_radius, tie_tolerance, PowerIteration, DEFAULT_TOL,
};
use crate::transforms::{
    all_groupings, branch_move_condition, c_transform, contraction_candidates,
    move_branch, pendant_path_shift, pendant_shift_candidates, BranchDecomposition,
};

/// The checkable statements, identified on the command line by their ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// `2.1`: contracting a non-pendant cut edge next to a pendant edge lowers rho.
    ContractionDecrease,
    /// `2.2`: brooms with some arm carrying two pendants beat `B(n;n-7,1,1,1)`.
    BroomAboveSpider,
    /// `2.3`: spectral bounds and identities on every tree.
    InvariantSweep,
    /// `2.4`: brooms with more than four arm pendants beat `B(n;n-8,1,1,2)`.
    BroomAboveUnevenSpider,
    /// `2.5`: minimum over non-caterpillar trees.
    MinNonCaterpillar,
    /// `2.6`: minimum over non-caterpillar non-starlike trees.
    MinNonCaterpillarNonStarlike,
    /// `3.1`: the branch move raises rho when its Perron condition holds.
    BranchMove,
    /// `3.2`: lengthening the longer of two pendant paths raises rho.
    PendantShift,
    /// `3.3`: the maximum over non-starlike trees is a double broom.
    MaxNonStarlikeDoubleBroom,
    /// `3.4`: maximum over non-caterpillar trees.
    MaxNonCaterpillar,
    /// `3.5`: maximum over non-caterpillar non-starlike trees with four leaves.
    MaxFourPendants,
    /// `3.6`: maximum over non-caterpillar non-starlike trees.
    MaxNonCaterpillarNonStarlike,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::ContractionDecrease,
        Claim::BroomAboveSpider,
        Claim::InvariantSweep,
        Claim::BroomAboveUnevenSpider,
        Claim::MinNonCaterpillar,
        Claim::MinNonCaterpillarNonStarlike,
        Claim::BranchMove,
        Claim::PendantShift,
        Claim::MaxNonStarlikeDoubleBroom,
        Claim::MaxNonCaterpillar,
        Claim::MaxFourPendants,
        Claim::MaxNonCaterpillarNonStarlike,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::ContractionDecrease => "2.1",
            Claim::BroomAboveSpider => "2.2",
            Claim::InvariantSweep => "2.3",
            Claim::BroomAboveUnevenSpider => "2.4",
            Claim::MinNonCaterpillar => "2.5",
            Claim::MinNonCaterpillarNonStarlike => "2.6",
            Claim::BranchMove => "3.1",
            Claim::PendantShift => "3.2",
            Claim::MaxNonStarlikeDoubleBroom => "3.3",
            Claim::MaxNonCaterpillar => "3.4",
            Claim::MaxFourPendants => "3.5",
            Claim::MaxNonCaterpillarNonStarlike => "3.6",
        }
    }

    pub fn from_id(id: &str) -> Option<Claim> {
        Claim::ALL.into_iter().find(|c| c.id() == id)
    }

    pub fn title(self) -> &'static str {
        match self {
            Claim::ContractionDecrease => {
                "contracting a non-pendant cut edge uv where u carries a pendant edge strictly lowers rho"
            }
            Claim::BroomAboveSpider => {
                "rho(B(n;n0,n1,n2,n3)) > rho(B(n;n-7,1,1,1)) whenever max(n1,n2,n3) > 1"
            }
            Claim::InvariantSweep => {
                "rho > Tr_max, 2Tr_min <= rho <= 2Tr_max, rho >= 4W/n, Q positive definite, quadratic-form identity"
            }
            Claim::BroomAboveUnevenSpider => {
                "rho(B(n;n0,n1,n2,n3)) > rho(B(n;n-8,1,1,2)) whenever n1+n2+n3 > 4"
            }
            Claim::MinNonCaterpillar => "the unique minimizer over non-caterpillar trees is B(n;n-7,1,1,1)",
            Claim::MinNonCaterpillarNonStarlike => {
                "the unique minimizer over non-caterpillar non-starlike trees is B(n;n-8,1,1,2)"
            }
            Claim::BranchMove => {
                "moving G3 from v0 to u in G2 strictly raises rho when the G1 Perron sum is at least the G2 sum"
            }
            Claim::PendantShift => "G_{p-1,q+1} has strictly larger rho than G_{p,q} for q >= p >= 1",
            Claim::MaxNonStarlikeDoubleBroom => "the maximizer over non-starlike trees is a double broom T(n,k;t1,t2)",
            Claim::MaxNonCaterpillar => "the unique maximizer over non-caterpillar trees is S(n;2,2,n-5)",
            Claim::MaxFourPendants => {
                "the maximizer over non-caterpillar non-starlike trees with 4 leaves is the larger of P(n;2,3), P(n;2,n-5)"
            }
            Claim::MaxNonCaterpillarNonStarlike => {
                "the maximizer over non-caterpillar non-starlike trees is the larger of P(n;2,3), P(n;2,n-5)"
            }
        }
    }

    /// Provenance note carried in every report of the claim.
    pub fn note(self) -> Option<&'static str> {
        match self {
            Claim::BroomAboveSpider => Some(
                "reconstructed comparison: the compared pair is B(n;n0,n1,n2,n3) against B(n;n-7,1,1,1), \
                 as used to pin down the non-caterpillar minimizer",
            ),
            Claim::BroomAboveUnevenSpider => Some(
                "reconstructed comparison: the compared pair is B(n;n0,n1,n2,n3) against B(n;n-8,1,1,2), \
                 as used to pin down the non-caterpillar non-starlike minimizer",
            ),
            Claim::MaxNonStarlikeDoubleBroom => {
                Some("membership only; the realized (t1,t2) is recorded per order")
            }
            _ => None,
        }
    }

    /// Smallest order at which the claim's hypothesis can be met.
    pub fn min_order(self) -> usize {
        match self {
            Claim::InvariantSweep => 2,
            Claim::ContractionDecrease | Claim::BranchMove | Claim::PendantShift => 4,
            Claim::MaxNonStarlikeDoubleBroom => 6,
            Claim::MinNonCaterpillar | Claim::MaxNonCaterpillar => 7,
            Claim::BroomAboveSpider
            | Claim::MinNonCaterpillarNonStarlike
            | Claim::MaxFourPendants
            | Claim::MaxNonCaterpillarNonStarlike => 8,
            Claim::BroomAboveUnevenSpider => 9,
        }
    }

    pub fn default_range(self) -> (usize, usize) {
        match self {
            Claim::ContractionDecrease => (4, 9),
            Claim::BroomAboveSpider => (8, 13),
            Claim::InvariantSweep => (3, 12),
            Claim::BroomAboveUnevenSpider => (9, 13),
            Claim::MinNonCaterpillar => (7, 13),
            Claim::MinNonCaterpillarNonStarlike => (8, 13),
            Claim::BranchMove => (4, 8),
            Claim::PendantShift => (4, 9),
            Claim::MaxNonStarlikeDoubleBroom | Claim::MaxNonCaterpillar => (7, 13),
            Claim::MaxFourPendants | Claim::MaxNonCaterpillarNonStarlike => (8, 13),
        }
    }

    /// Range actually checked: the requested bounds (or defaults) clipped to
    /// the claim's minimum order. `None` when nothing is left.
    pub fn resolve_range(self, n_min: Option<usize>, n_max: Option<usize>) -> Option<(usize, usize)> {
        let (lo, hi) = self.default_range();
        let lo = n_min.unwrap_or(lo).max(self.min_order());
        let hi = n_max.unwrap_or(hi.max(lo));
        (lo <= hi).then_some((lo, hi))
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Tree classes the extremal claims quantify over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFilter {
    AllTrees,
    NonCaterpillar,
    NonStarlike,
    NonCaterpillarNonStarlike,
    /// Non-caterpillar, non-starlike, exactly four pendant vertices.
    NonCaterpillarNonStarlikeFourPendants,
}

impl ClassFilter {
    pub fn contains(self, m: &ClassMembership) -> bool {
        match self {
            ClassFilter::AllTrees => true,
            ClassFilter::NonCaterpillar => m.non_caterpillar,
            ClassFilter::NonStarlike => m.non_starlike,
            ClassFilter::NonCaterpillarNonStarlike => m.non_caterpillar && m.non_starlike,
            ClassFilter::NonCaterpillarNonStarlikeFourPendants => {
                m.non_caterpillar && m.non_starlike && m.pendants == 4
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalQuery {
    pub n: usize,
    pub class: ClassFilter,
    pub direction: Direction,
}

/// A tree of the enumeration together with its class flags and rho.
#[derive(Debug, Clone)]
pub struct TreeRecord {
    pub code: CanonicalCode,
    pub graph: Graph,
    pub membership: ClassMembership,
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct Extremal {
    pub code: CanonicalCode,
    pub graph: Graph,
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct ExtremalOutcome {
    pub class_size: usize,
    /// `None` for an empty class.
    pub extremal: Option<Extremal>,
    /// Gap to the best member outside the tie set; `None` without one.
    pub margin: Option<f64>,
    /// Other members within the tie tolerance of the extremal value.
    pub ties: Vec<CanonicalCode>,
}

/// Arg-extremum over the records in `class`. Records are scanned in code
/// order and only a strictly better value replaces the incumbent.
pub fn extremal_of(records: &[TreeRecord], class: ClassFilter, direction: Direction) -> ExtremalOutcome {
    let members: Vec<&TreeRecord> = records.iter().filter(|r| class.contains(&r.membership)).collect();
    let better = |a: f64, b: f64| match direction {
        Direction::Min => a < b,
        Direction::Max => a > b,
    };
    let Some(best) = members.iter().copied().reduce(|best, r| if better(r.rho, best.rho) { r } else { best })
    else {
        return ExtremalOutcome {
            class_size: 0,
            extremal: None,
            margin: None,
            ties: Vec::new(),
        };
    };
    let mut ties = Vec::new();
    let mut margin: Option<f64> = None;
    for r in &members {
        if r.code == best.code {
            continue;
        }
        let gap = (r.rho - best.rho).abs();
        if gap <= tie_tolerance(r.rho, best.rho) {
            ties.push(r.code.clone());
        } else {
            margin = Some(margin.map_or(gap, |m| m.min(gap)));
        }
    }
    ExtremalOutcome {
        class_size: members.len(),
        extremal: Some(Extremal {
            code: best.code.clone(),
            graph: best.graph.clone(),
            rho: best.rho,
        }),
        margin,
        ties,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Vacuous,
    Verified,
    Tied,
    Counterexample,
}

impl Status {
    /// Counterexample dominates ties, ties dominate verified results.
    pub fn combine(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Vacuous | Status::Verified => 0,
            Status::Counterexample => 1,
            Status::Tied => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Vacuous => "vacuous",
            Status::Verified => "verified",
            Status::Tied => "tied",
            Status::Counterexample => "counterexample",
        })
    }
}

/// A violating instance with replayable edge lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub description: String,
    /// Edge list in the `n m` / `u v` format.
    pub graph: String,
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_graph: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_rho: Option<f64>,
}

/// Outcome of one claim at one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub claim: String,
    pub n: usize,
    /// Trees in the class (extremal claims), trees of order `n` (sweeps), or
    /// hypothesis-satisfying tuples (broom comparisons).
    pub class_size: usize,
    pub status: Status,
    pub extremal_code: Option<String>,
    pub expected_code: Option<String>,
    pub rho_extremal: Option<f64>,
    /// Smallest separation observed: runner-up gap or smallest monotone step.
    pub margin: Option<f64>,
    pub ties: Vec<String>,
    /// Configurations compared.
    pub checked: usize,
    /// Configurations or trees where the hypothesis did not apply.
    pub vacuous: usize,
    pub detail: Option<String>,
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl Entry {
    fn new(claim: Claim, n: usize) -> Self {
        Self {
            claim: claim.id().to_string(),
            n,
            class_size: 0,
            status: Status::Vacuous,
            extremal_code: None,
            expected_code: None,
            rho_extremal: None,
            margin: None,
            ties: Vec::new(),
            checked: 0,
            vacuous: 0,
            detail: None,
            counterexample: None,
            elapsed_ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub title: String,
    pub note: Option<String>,
    pub n_min: usize,
    pub n_max: usize,
    pub status: Status,
    pub entries: Vec<Entry>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRun {
    pub status: Status,
    pub reports: Vec<ClaimReport>,
}

impl VerificationRun {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub cap: usize,
    /// Power iteration tolerance.
    pub tol: f64,
    /// Seeds the random vectors of the quadratic-form identity. Sampled
    /// sweeps draw from a fixed stream so they do not move with it.
    pub seed: u64,
    /// Largest order at which every contraction candidate is checked.
    pub contraction_exhaustive_max: usize,
    /// Largest order at which every branch move is checked.
    pub branch_move_exhaustive_max: usize,
    /// Configurations per tree above the exhaustive limits.
    pub samples_per_tree: usize,
    /// Random vectors per tree for the quadratic-form identity at `n <= 8`;
    /// a tenth of that above.
    pub quadratic_form_vectors: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            tol: DEFAULT_TOL,
            seed: 1,
            contraction_exhaustive_max: 12,
            branch_move_exhaustive_max: 10,
            samples_per_tree: 16,
            quadratic_form_vectors: 100,
        }
    }
}

/// Runs claims, caching the evaluated tree tables per order.
#[derive(Debug, Default)]
pub struct Verifier {
    options: VerifyOptions,
    tables: BTreeMap<usize, Arc<Vec<TreeRecord>>>,
}

impl Verifier {
    pub fn new(options: VerifyOptions) -> Self {
        Self {
            options,
            tables: BTreeMap::new(),
        }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.options
    }

    fn rho(&self, g: &Graph) -> Result<f64> {
        spectral_radius(g, self.options.tol).map(|r| r.rho)
    }

    /// Every tree of order `n` with class flags and rho, sorted by code.
    pub fn trees(&mut self, n: usize) -> Result<Arc<Vec<TreeRecord>>> {
        if let Some(t) = self.tables.get(&n) {
            return Ok(Arc::clone(t));
        }
        let tol = self.options.tol;
        let records = enumerate_trees(n, self.options.cap)?
            .into_par_iter()
            .map(|t| {
                Ok(TreeRecord {
                    membership: ClassMembership::of(&t.graph)?,
                    rho: spectral_radius(&t.graph, tol)?.rho,
                    code: t.code,
                    graph: t.graph,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let records = Arc::new(records);
        self.tables.insert(n, Arc::clone(&records));
        Ok(records)
    }

    pub fn find_extremal(&mut self, query: ExtremalQuery) -> Result<ExtremalOutcome> {
        let trees = self.trees(query.n)?;
        Ok(extremal_of(&trees, query.class, query.direction))
    }

    /// Runs `claim` over `lo..=hi`.
    pub fn verify(&mut self, claim: Claim, lo: usize, hi: usize) -> Result<ClaimReport> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty range {lo}..{hi}")));
        }
        if hi > self.options.cap {
            return Err(Error::CapExceeded {
                n: hi,
                cap: self.options.cap,
            });
        }
        let start = Instant::now();
        let mut entries = Vec::new();
        for n in lo..=hi {
            let t = Instant::now();
            let mut entry = if n < claim.min_order() {
                Entry::new(claim, n)
            } else {
                self.verify_order(claim, n)?
            };
            entry.elapsed_ms = t.elapsed().as_millis() as u64;
            entries.push(entry);
        }
        let status = entries
            .iter()
            .map(|e| e.status)
            .fold(Status::Vacuous, Status::combine);
        Ok(ClaimReport {
            claim: claim.id().to_string(),
            title: claim.title().to_string(),
            note: claim.note().map(str::to_string),
            n_min: lo,
            n_max: hi,
            status,
            entries,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// Runs each claim over its resolved range; claims whose range is empty
    /// are skipped.
    pub fn verify_claims(
        &mut self,
        claims: &[Claim],
        n_min: Option<usize>,
        n_max: Option<usize>,
    ) -> Result<VerificationRun> {
        let mut reports = Vec::new();
        for &claim in claims {
            if let Some((lo, hi)) = claim.resolve_range(n_min, n_max) {
                reports.push(self.verify(claim, lo, hi)?);
            }
        }
        let status = reports
            .iter()
            .map(|r| r.status)
            .fold(Status::Vacuous, Status::combine);
        Ok(VerificationRun { status, reports })
    }

    fn verify_order(&mut self, claim: Claim, n: usize) -> Result<Entry> {
        match claim {
            Claim::MinNonCaterpillar => {
                let expected = make_broom(n, n - 7, &[1, 1, 1])?;
                self.extremal_entry(claim, n, ClassFilter::NonCaterpillar, Direction::Min, &[expected])
            }
            Claim::MinNonCaterpillarNonStarlike => {
                let expected = make_broom(n, n - 8, &[1, 1, 2])?;
                self.extremal_entry(
                    claim,
                    n,
                    ClassFilter::NonCaterpillarNonStarlike,
                    Direction::Min,
                    &[expected],
                )
            }
            Claim::MaxNonCaterpillar => {
                let expected = make_spider(n, &[2, 2, n - 5])?;
                self.extremal_entry(claim, n, ClassFilter::NonCaterpillar, Direction::Max, &[expected])
            }
            Claim::MaxFourPendants | Claim::MaxNonCaterpillarNonStarlike => {
                let candidates = [make_spine_graft(n, 2, 3)?, make_spine_graft(n, 2, n - 5)?];
                let class = if claim == Claim::MaxFourPendants {
                    ClassFilter::NonCaterpillarNonStarlikeFourPendants
                } else {
                    ClassFilter::NonCaterpillarNonStarlike
                };
                self.extremal_entry(claim, n, class, Direction::Max, &candidates)
            }
            Claim::MaxNonStarlikeDoubleBroom => self.double_broom_entry(n),
            Claim::BroomAboveSpider => self.broom_entry(claim, n),
            Claim::BroomAboveUnevenSpider => self.broom_entry(claim, n),
            Claim::ContractionDecrease => self.contraction_entry(n),
            Claim::PendantShift => self.pendant_shift_entry(n),
            Claim::BranchMove => self.branch_move_entry(n),
            Claim::InvariantSweep => self.invariant_entry(n),
        }
    }

    /// The expected extremal is the rho-best of `candidates` (in the claim's
    /// direction); verified iff it is the unique arg-extremum.
    fn extremal_entry(
        &mut self,
        claim: Claim,
        n: usize,
        class: ClassFilter,
        direction: Direction,
        candidates: &[Graph],
    ) -> Result<Entry> {
        let outcome = self.find_extremal(ExtremalQuery { n, class, direction })?;
        let mut scored = Vec::new();
        for g in candidates {
            scored.push((self.rho(g)?, canonical_code(g)?, g));
        }
        let (expected_rho, expected_code, expected_graph) = scored
            .into_iter()
            .reduce(|best, c| {
                let wins = match direction {
                    Direction::Min => c.0 < best.0,
                    Direction::Max => c.0 > best.0,
                };
                if wins {
                    c
                } else {
                    best
                }
            })
            .expect("at least one candidate");

        let mut entry = Entry::new(claim, n);
        entry.class_size = outcome.class_size;
        entry.expected_code = Some(expected_code.to_string());
        entry.margin = outcome.margin;
        entry.ties = outcome.ties.iter().map(ToString::to_string).collect();
        entry.checked = outcome.class_size;
        let Some(best) = outcome.extremal else {
            return Ok(entry);
        };
        entry.extremal_code = Some(best.code.to_string());
        entry.rho_extremal = Some(best.rho);
        let expected_in_ties = outcome.ties.contains(&expected_code);
        entry.status = if best.code == expected_code && outcome.ties.is_empty() {
            Status::Verified
        } else if best.code == expected_code || expected_in_ties {
            Status::Tied
        } else {
            entry.counterexample = Some(Counterexample {
                description: format!(
                    "arg-{} of the class differs from the expected tree",
                    if direction == Direction::Min { "min" } else { "max" }
                ),
                graph: best.graph.to_edge_list(),
                rho: best.rho,
                other_graph: Some(expected_graph.to_edge_list()),
                other_rho: Some(expected_rho),
            });
            Status::Counterexample
        };
        Ok(entry)
    }

    fn double_broom_entry(&mut self, n: usize) -> Result<Entry> {
        let claim = Claim::MaxNonStarlikeDoubleBroom;
        let trees = self.trees(n)?;
        let outcome = extremal_of(&trees, ClassFilter::NonStarlike, Direction::Max);
        let mut entry = Entry::new(claim, n);
        entry.class_size = outcome.class_size;
        entry.checked = outcome.class_size;
        entry.margin = outcome.margin;
        entry.ties = outcome.ties.iter().map(ToString::to_string).collect();
        let Some(best) = outcome.extremal else {
            return Ok(entry);
        };
        entry.extremal_code = Some(best.code.to_string());
        entry.rho_extremal = Some(best.rho);
        let params = |code: &CanonicalCode| {
            trees
                .iter()
                .find(|r| &r.code == code)
                .and_then(|r| r.membership.double_broom)
        };
        match params(&best.code) {
            Some((t1, t2)) => {
                entry.detail = Some(format!("T({n},{};{t1},{t2})", t1 + t2));
                let all_tied_are_brooms = outcome.ties.iter().all(|c| params(c).is_some());
                entry.status = if all_tied_are_brooms {
                    Status::Verified
                } else {
                    Status::Tied
                };
            }
            None if !outcome.ties.is_empty() => entry.status = Status::Tied,
            None => {
                entry.status = Status::Counterexample;
                entry.counterexample = Some(Counterexample {
                    description: "maximizer over non-starlike trees is not a double broom".into(),
                    graph: best.graph.to_edge_list(),
                    rho: best.rho,
                    other_graph: None,
                    other_rho: None,
                });
            }
        }
        Ok(entry)
    }

    fn broom_entry(&mut self, claim: Claim, n: usize) -> Result<Entry> {
        let (baseline, hypothesis): (Graph, fn([usize; 3]) -> bool) = match claim {
            Claim::BroomAboveSpider => (make_broom(n, n - 7, &[1, 1, 1])?, broom_above_spider_hypothesis),
            _ => (make_broom(n, n - 8, &[1, 1, 2])?, broom_above_uneven_spider_hypothesis),
        };
        let base_rho = self.rho(&baseline)?;
        let (applicable, skipped): (Vec<_>, Vec<_>) =
            broom_tuples(n).into_iter().partition(|&(_, parts)| hypothesis(parts));
        let tol = self.options.tol;
        let results = applicable
            .par_iter()
            .map(|&(n0, parts)| {
                let g = make_broom(n, n0, &parts)?;
                let rho = spectral_radius(&g, tol)?.rho;
                Ok((n0, parts, g, rho))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut tally = Tally::default();
        for (n0, parts, g, rho) in results {
            let label = format!("B({n};{n0},{},{},{})", parts[0], parts[1], parts[2]);
            tally.step(rho - base_rho, tie_tolerance(rho, base_rho), || Counterexample {
                description: format!("{label} does not exceed the baseline"),
                graph: g.to_edge_list(),
                rho,
                other_graph: Some(baseline.to_edge_list()),
                other_rho: Some(base_rho),
            }, &label);
        }
        let mut entry = tally.into_entry(claim, n);
        entry.class_size = entry.checked;
        entry.vacuous = skipped.len();
        entry.expected_code = Some(canonical_code(&baseline)?.to_string());
        Ok(entry)
    }

    fn contraction_entry(&mut self, n: usize) -> Result<Entry> {
        let claim = Claim::ContractionDecrease;
        let trees = self.trees(n)?;
        let exhaustive = n <= self.options.contraction_exhaustive_max;
        let (tol, samples) = (self.options.tol, self.options.samples_per_tree);
        let per_tree = trees
            .par_iter()
            .enumerate()
            .map(|(index, rec)| {
                let mut candidates = contraction_candidates(&rec.graph);
                if !exhaustive {
                    let mut rng = tree_rng(SAMPLING_SEED, claim, n, index);
                    candidates.shuffle(&mut rng);
                    candidates.truncate(samples);
                    candidates.sort_unstable();
                }
                let mut tally = Tally::default();
                if candidates.is_empty() {
                    tally.vacuous += 1;
                }
                for (u, v) in candidates {
                    let (h, _) = c_transform(&rec.graph, u, v)?;
                    let after = spectral_radius(&h, tol)?.rho;
                    let label = format!("{} edge ({u},{v})", rec.code);
                    tally.step(rec.rho - after, tie_tolerance(rec.rho, after), || Counterexample {
                        description: format!("contracting ({u},{v}) did not lower rho"),
                        graph: rec.graph.to_edge_list(),
                        rho: rec.rho,
                        other_graph: Some(h.to_edge_list()),
                        other_rho: Some(after),
                    }, &label);
                }
                Ok(tally)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entry = Tally::merge(per_tree).into_entry(claim, n);
        entry.class_size = trees.len();
        entry.detail = Some(sweep_mode(exhaustive, samples));
        Ok(entry)
    }

    fn pendant_shift_entry(&mut self, n: usize) -> Result<Entry> {
        let claim = Claim::PendantShift;
        let trees = self.trees(n)?;
        let tol = self.options.tol;
        let per_tree = trees
            .par_iter()
            .map(|rec| {
                let candidates = pendant_shift_candidates(&rec.graph);
                let mut tally = Tally::default();
                if candidates.is_empty() {
                    tally.vacuous += 1;
                }
                for (u, p, q) in candidates {
                    let h = pendant_path_shift(&rec.graph, u, &p, &q)?;
                    let after = spectral_radius(&h, tol)?.rho;
                    let label = format!("{} at {u} (p={}, q={})", rec.code, p.len(), q.len());
                    tally.step(after - rec.rho, tie_tolerance(rec.rho, after), || Counterexample {
                        description: format!(
                            "shifting the {}-path onto the {}-path at {u} did not raise rho",
                            p.len(),
                            q.len()
                        ),
                        graph: rec.graph.to_edge_list(),
                        rho: rec.rho,
                        other_graph: Some(h.to_edge_list()),
                        other_rho: Some(after),
                    }, &label);
                }
                Ok(tally)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entry = Tally::merge(per_tree).into_entry(claim, n);
        entry.class_size = trees.len();
        entry.detail = Some("exhaustive".into());
        Ok(entry)
    }

    fn branch_move_entry(&mut self, n: usize) -> Result<Entry> {
        let claim = Claim::BranchMove;
        let trees = self.trees(n)?;
        let exhaustive = n <= self.options.branch_move_exhaustive_max;
        let (tol, samples) = (self.options.tol, self.options.samples_per_tree);
        let per_tree = trees
            .par_iter()
            .enumerate()
            .map(|(index, rec)| {
                let g = &rec.graph;
                let perron = spectral_radius(g, tol)?.perron;
                let mut configs: Vec<(BranchDecomposition, usize)> = Vec::new();
                let mut tally = Tally::default();
                let roots: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
                if roots.is_empty() {
                    tally.vacuous += 1;
                    return Ok(tally);
                }
                if exhaustive {
                    for &v0 in &roots {
                        let base = BranchDecomposition::new(g, v0)?;
                        for grouping in all_groupings(base.branches.len()) {
                            let dec = base.clone().with_grouping(grouping)?;
                            if !branch_move_condition(&dec, &perron)? {
                                tally.vacuous += 1;
                                continue;
                            }
                            for u in dec.group_without_root(1)? {
                                configs.push((dec.clone(), u));
                            }
                        }
                    }
                } else {
                    let mut rng = tree_rng(SAMPLING_SEED, claim, n, index);
                    for _ in 0..samples {
                        let v0 = roots[rng.gen_range(0..roots.len())];
                        let base = BranchDecomposition::new(g, v0)?;
                        let groupings = all_groupings(base.branches.len());
                        let grouping = groupings[rng.gen_range(0..groupings.len())].clone();
                        let dec = base.with_grouping(grouping)?;
                        let targets = dec.group_without_root(1)?;
                        let u = targets[rng.gen_range(0..targets.len())];
                        if branch_move_condition(&dec, &perron)? {
                            configs.push((dec, u));
                        } else {
                            tally.vacuous += 1;
                        }
                    }
                }
                for (dec, u) in configs {
                    let h = move_branch(g, &dec, u)?;
                    let after = spectral_radius(&h, tol)?.rho;
                    let groups = dec.groups.as_ref().expect("grouped");
                    let label = format!("{} v0={} groups={:?} u={u}", rec.code, dec.v0, groups);
                    tally.step(after - rec.rho, tie_tolerance(rec.rho, after), || Counterexample {
                        description: format!(
                            "moving G3 from {} to {u} with groups {:?} did not raise rho",
                            dec.v0, groups
                        ),
                        graph: g.to_edge_list(),
                        rho: rec.rho,
                        other_graph: Some(h.to_edge_list()),
                        other_rho: Some(after),
                    }, &label);
                }
                Ok(tally)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entry = Tally::merge(per_tree).into_entry(claim, n);
        entry.class_size = trees.len();
        entry.detail = Some(sweep_mode(exhaustive, samples));
        Ok(entry)
    }

    fn invariant_entry(&mut self, n: usize) -> Result<Entry> {
        let claim = Claim::InvariantSweep;
        let trees = self.trees(n)?;
        let options = self.options;
        let vectors = if n <= 8 {
            options.quadratic_form_vectors
        } else {
            options.quadratic_form_vectors.div_ceil(10)
        };
        let per_tree = trees
            .par_iter()
            .enumerate()
            .map(|(index, rec)| {
                let mut rng = tree_rng(options.seed, claim, n, index);
                check_invariants(rec, options.tol, vectors, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entry = Tally::merge(per_tree).into_entry(claim, n);
        entry.class_size = trees.len();
        entry.detail = Some(format!(
            "margin is min(rho - Tr_max); {vectors} quadratic-form vectors per tree"
        ));
        Ok(entry)
    }
}

/// Bound and identity checks on one tree. The monotone step recorded is
/// `rho - Tr_max`; the remaining checks are pass/fail.
fn check_invariants(rec: &TreeRecord, tol: f64, vectors: usize, rng: &mut ChaCha8Rng) -> Result<Tally> {
    let g = &rec.graph;
    let n = g.order();
    let d = all_pairs_distances(g)?;
    let tr = transmissions(&d);
    let q = QMatrix::from_distances(&d);
    let power = PowerIteration::with_tol(tol).solve(&q)?;
    let rho = power.rho;
    let slack = tie_tolerance(rho, rho);
    let wiener = tr.values().iter().sum::<u64>() as f64 / 2.0;
    let spectrum = full_spectrum_oracle(&q)?;
    let oracle_rho = *spectrum.last().expect("nonempty");

    let mut failures = Vec::new();
    if rho < 2.0 * tr.min() as f64 - slack || rho > 2.0 * tr.max() as f64 + slack {
        failures.push(format!(
            "rho = {rho} outside [2Tr_min, 2Tr_max] = [{}, {}]",
            2 * tr.min(),
            2 * tr.max()
        ));
    }
    if rho < 4.0 * wiener / n as f64 - slack {
        failures.push(format!("rho = {rho} below 4W/n = {}", 4.0 * wiener / n as f64));
    }
    if (rho - oracle_rho).abs() > slack {
        failures.push(format!("power rho {rho} disagrees with oracle {oracle_rho}"));
    }
    if n >= 3 && spectrum[0] <= 0.0 {
        failures.push(format!("smallest eigenvalue {} is not positive", spectrum[0]));
    }
    if power.perron.iter().any(|&x| x <= 0.0) {
        failures.push("Perron vector is not strictly positive".into());
    }
    let eq_residual = eigen_equation_residual_with(&d, rho, &power.perron)?;
    if eq_residual > slack {
        failures.push(format!("eigen-equation residual {eq_residual:e}"));
    }
    for _ in 0..vectors {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let pairwise = quadratic_form_with(&d, &x)?;
        let direct = matrix_quadratic_form(&q, &x)?;
        let scale = pairwise.abs().max(direct.abs()).max(f64::MIN_POSITIVE);
        if (pairwise - direct).abs() > 1e-10 * scale {
            failures.push(format!("quadratic form {pairwise} != x^T Q x = {direct}"));
            break;
        }
    }

    let mut tally = Tally::default();
    let tr_max = tr.max() as f64;
    let make = |description: String| Counterexample {
        description,
        graph: g.to_edge_list(),
        rho,
        other_graph: None,
        other_rho: None,
    };
    if n >= 2 {
        tally.step(rho - tr_max, tie_tolerance(rho, tr_max), || make(format!("rho = {rho} <= Tr_max = {tr_max}")), rec.code.as_str());
    } else {
        tally.vacuous += 1;
    }
    if !failures.is_empty() {
        tally.fail(make(failures.join("; ")));
    }
    Ok(tally)
}

/// Running summary of a monotonicity sweep.
#[derive(Debug, Default)]
struct Tally {
    checked: usize,
    vacuous: usize,
    min_margin: Option<f64>,
    ties: Vec<String>,
    counterexample: Option<Counterexample>,
}

impl Tally {
    /// Records a step that should be strictly positive.
    fn step(&mut self, margin: f64, tol: f64, witness: impl FnOnce() -> Counterexample, label: &str) {
        self.checked += 1;
        self.min_margin = Some(self.min_margin.map_or(margin, |m| m.min(margin)));
        if margin > tol {
            return;
        }
        if margin < -tol {
            self.fail(witness());
        } else {
            self.ties.push(label.to_string());
        }
    }

    fn fail(&mut self, c: Counterexample) {
        if self.counterexample.is_none() {
            self.counterexample = Some(c);
        }
    }

    /// Ordered merge; the first counterexample in tree order wins.
    fn merge(parts: Vec<Tally>) -> Tally {
        parts.into_iter().fold(Tally::default(), |mut acc, t| {
            acc.checked += t.checked;
            acc.vacuous += t.vacuous;
            acc.min_margin = match (acc.min_margin, t.min_margin) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            acc.ties.extend(t.ties);
            if acc.counterexample.is_none() {
                acc.counterexample = t.counterexample;
            }
            acc
        })
    }

    fn into_entry(self, claim: Claim, n: usize) -> Entry {
        let mut entry = Entry::new(claim, n);
        entry.status = if self.counterexample.is_some() {
            Status::Counterexample
        } else if !self.ties.is_empty() {
            Status::Tied
        } else if self.checked > 0 {
            Status::Verified
        } else {
            Status::Vacuous
        };
        entry.checked = self.checked;
        entry.vacuous = self.vacuous;
        entry.margin = self.min_margin;
        entry.ties = self.ties;
        entry.counterexample = self.counterexample;
        entry
    }
}

fn sweep_mode(exhaustive: bool, samples: usize) -> String {
    if exhaustive {
        "exhaustive".into()
    } else {
        format!("sampled, {samples} configurations per tree")
    }
}

const SAMPLING_SEED: u64 = 0x005e_ed0f_9af7;

/// Per-tree generator, independent of scheduling.
fn tree_rng(seed: u64, claim: Claim, n: usize, index: usize) -> ChaCha8Rng {
    let claim_index = Claim::ALL.iter().position(|&c| c == claim).expect("listed") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((claim_index << 56) ^ ((n as u64) << 32) ^ index as u64);
    rng
}

/// All `(n0, [n1, n2, n3])` with `n0 >= 0`, `1 <= n1 <= n2 <= n3` and
/// `n0 + n1 + n2 + n3 = n - 4`.
pub fn broom_tuples(n: usize) -> Vec<(usize, [usize; 3])> {
    let mut out = Vec::new();
    let Some(budget) = n.checked_sub(4) else {
        return out;
    };
    for n1 in 1..=budget {
        for n2 in n1..=budget {
            for n3 in n2..=budget {
                if n1 + n2 + n3 <= budget {
                    out.push((budget - n1 - n2 - n3, [n1, n2, n3]));
                }
            }
        }
    }
    out
}

/// Some arm carries more than one pendant.
pub fn broom_above_spider_hypothesis(parts: [usize; 3]) -> bool {
    parts.iter().copied().max().unwrap_or(0) > 1
}

/// The arms carry more than four pendants in total.
pub fn broom_above_uneven_spider_hypothesis(parts: [usize; 3]) -> bool {
    parts.iter().sum::<usize>() > 4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(Claim::from_id(c.id()), Some(c));
        }
        assert_eq!(Claim::from_id("9.9"), None);
    }

    #[test]
    fn ranges_are_clipped() {
        assert_eq!(Claim::MinNonCaterpillar.resolve_range(None, None), Some((7, 13)));
        assert_eq!(Claim::MinNonCaterpillar.resolve_range(Some(3), Some(9)), Some((7, 9)));
        assert_eq!(Claim::BroomAboveUnevenSpider.resolve_range(None, Some(8)), None);
        assert_eq!(Claim::BranchMove.resolve_range(Some(10), None), Some((10, 10)));
    }

    #[test]
    fn broom_hypotheses() {
        assert!(broom_above_spider_hypothesis([1, 1, 2]));
        assert!(!broom_above_spider_hypothesis([1, 1, 1]));
        assert!(broom_above_spider_hypothesis([2, 2, 2]));
        assert!(broom_above_uneven_spider_hypothesis([1, 1, 3]));
        assert!(broom_above_uneven_spider_hypothesis([1, 2, 2]));
        assert!(!broom_above_uneven_spider_hypothesis([1, 1, 2]));
        assert!(!broom_above_uneven_spider_hypothesis([1, 1, 1]));
    }

    #[test]
    fn broom_tuples_respect_order() {
        let t = broom_tuples(9);
        assert!(t.contains(&(2, [1, 1, 1])));
        assert!(t.contains(&(1, [1, 1, 2])));
        assert!(t.contains(&(0, [1, 2, 2])));
        assert!(t.iter().all(|&(n0, p)| n0 + p.iter().sum::<usize>() == 5 && p[0] <= p[1] && p[1] <= p[2]));
        assert_eq!(t.len(), 4);
        assert!(broom_tuples(6).is_empty());
    }

    #[test]
    fn status_precedence() {
        assert_eq!(Status::Verified.combine(Status::Tied), Status::Tied);
        assert_eq!(Status::Tied.combine(Status::Counterexample), Status::Counterexample);
        assert_eq!(Status::Vacuous.combine(Status::Verified), Status::Verified);
        assert_eq!(Status::Tied.exit_code(), 3);
    }

    #[test]
    fn singleton_class_at_seven() {
        let mut v = Verifier::new(VerifyOptions::default());
        let out = v
            .find_extremal(ExtremalQuery {
                n: 7,
                class: ClassFilter::NonCaterpillar,
                direction: Direction::Min,
            })
            .unwrap();
        assert_eq!(out.class_size, 1);
        assert_eq!(
            out.extremal.unwrap().code,
            canonical_code(&make_broom(7, 0, &[1, 1, 1]).unwrap()).unwrap()
        );
        assert!(out.margin.is_none() && out.ties.is_empty());
    }

    #[test]
    fn empty_class_is_vacuous() {
        let mut v = Verifier::new(VerifyOptions::default());
        let report = v.verify(Claim::MaxNonStarlikeDoubleBroom, 5, 5).unwrap();
        assert_eq!(report.status, Status::Vacuous);
    }

    #[test]
    fn planted_counterexample_is_reported() {
        let mut v = Verifier::new(VerifyOptions::default());
        // Asking for the maximizer while expecting the minimizer must fail.
        let entry = v
            .extremal_entry(
                Claim::MaxNonCaterpillar,
                9,
                ClassFilter::NonCaterpillar,
                Direction::Max,
                &[make_broom(9, 2, &[1, 1, 1]).unwrap()],
            )
            .unwrap();
        assert_eq!(entry.status, Status::Counterexample);
        let c = entry.counterexample.unwrap();
        let replay = crate::graph::parse_edge_list(&c.graph).unwrap();
        assert_eq!(spectral_radius(&replay, DEFAULT_TOL).unwrap().rho, c.rho);
    }

    #[test]
    fn cap_is_enforced() {
        let mut v = Verifier::new(VerifyOptions {
            cap: 8,
            ..VerifyOptions::default()
        });
        assert!(matches!(
            v.verify(Claim::MinNonCaterpillar, 7, 9),
            Err(Error::CapExceeded { n: 9, cap: 8 })
        ));
    }
}
