//! Exhaustive and sampled checks that recognition agrees with the forbidden
//! catalog, plus the property suites built on top of the library.

mod compat;
pub mod suites;

use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use compat::{compatibility_sweep, CompatibilityInstance, CompatibilitySweep};

use crate::catalog::ForbiddenSearch;
use crate::coloring::{BitClosure, Coloring};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryId};
use crate::pointset::PointSet;

/// Most colorings an exhaustive sweep will enumerate.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 25;

/// Most offending colorings kept in a report.
pub const MISMATCH_CAP: usize = 16;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "FLATLANDS_THREADS";

/// Colorings per shard of a sweep.
const SHARD: u64 = 1 << 14;

/// The shared worker pool, sized by `FLATLANDS_THREADS` when set.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, n: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sampled { seed, n } => write!(f, "sampled (n={n}, seed={seed})"),
        }
    }
}

/// Outcome of a sweep comparing recognition with the forbidden search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub geometry: GeometryId,
    pub mode: Mode,
    pub total: u64,
    pub accepted: u64,
    pub forbidden_free: u64,
    pub mismatch_count: u64,
    /// Green sets of the first offending colorings, at most
    /// [`MISMATCH_CAP`].
    pub mismatches: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "geometry:       {}", self.geometry)?;
        writeln!(f, "mode:           {}", self.mode)?;
        writeln!(f, "colorings:      {}", self.total)?;
        writeln!(f, "accepted:       {}", self.accepted)?;
        writeln!(f, "forbidden-free: {}", self.forbidden_free)?;
        writeln!(f, "mismatches:     {}", self.mismatch_count)?;
        for m in &self.mismatches {
            writeln!(f, "  green {m:?}")?;
        }
        write!(f, "elapsed:        {:.3}s", self.elapsed.as_secs_f64())
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    accepted: u64,
    forbidden_free: u64,
    mismatch_count: u64,
    mismatches: Vec<Vec<usize>>,
}

impl Tally {
    fn record(&mut self, green: &PointSet, accept: bool, free: bool) {
        self.total += 1;
        self.accepted += accept as u64;
        self.forbidden_free += free as u64;
        if accept != free {
            self.mismatch_count += 1;
            if self.mismatches.len() < MISMATCH_CAP {
                self.mismatches.push(green.to_vec());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.accepted += other.accepted;
        self.forbidden_free += other.forbidden_free;
        self.mismatch_count += other.mismatch_count;
        let room = MISMATCH_CAP - self.mismatches.len();
        self.mismatches.extend(other.mismatches.into_iter().take(room));
        self
    }

    fn into_report(self, geometry: GeometryId, mode: Mode, started: Instant) -> VerificationReport {
        VerificationReport {
            geometry,
            mode,
            total: self.total,
            accepted: self.accepted,
            forbidden_free: self.forbidden_free,
            mismatch_count: self.mismatch_count,
            mismatches: self.mismatches,
            elapsed: started.elapsed(),
        }
    }
}

/// Decides one coloring both ways.
struct Checker<'g> {
    geometry: &'g Geometry,
    search: ForbiddenSearch<'g>,
}

impl<'g> Checker<'g> {
    fn new(geometry: &'g Geometry) -> Result<Self> {
        Ok(Self { geometry, search: ForbiddenSearch::new(geometry)? })
    }

    fn check(&self, green: &PointSet) -> (bool, bool) {
        let g = self.geometry;
        if g.len() <= 64 {
            let bits = green.low_word();
            let all = g.full_bits();
            let accept = BitClosure::new(g.hyperplane_masks(), all, all).is_target(bits, all);
            (accept, !self.search.contains_forbidden_bits(bits))
        } else {
            let accept = crate::coloring::peel(g, green, &g.all()).is_accept();
            (accept, !self.search.contains_forbidden(green))
        }
    }
}

/// Number of colorings of `g`, failing if it exceeds the budget.
pub fn exhaustive_count(g: &Geometry) -> Result<u64> {
    let n = g.len();
    if n as u32 >= 64 || (1u64 << n) > EXHAUSTIVE_BUDGET {
        return Err(Error::BudgetExceeded { points: n, budget: EXHAUSTIVE_BUDGET });
    }
    Ok(1 << n)
}

fn shards(total: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = total.div_ceil(SHARD) as usize;
    (0..count).into_par_iter().map(move |s| {
        let s = s as u64;
        (s * SHARD, ((s + 1) * SHARD).min(total))
    })
}

/// Checks every coloring of `g`: it is a target iff it has no forbidden
/// induced restriction.
pub fn verify_theorem(g: &Geometry) -> Result<VerificationReport> {
    let total = exhaustive_count(g)?;
    let started = Instant::now();
    let checker = Checker::new(g)?;
    let n = g.len();
    let tally = pool().install(|| {
        shards(total)
            .map(|(lo, hi)| {
                let mut t = Tally::default();
                for bits in lo..hi {
                    let green = PointSet::from_mask(n, bits);
                    let (accept, free) = checker.check(&green);
                    t.record(&green, accept, free);
                }
                t
            })
            .reduce(Tally::default, Tally::merge)
    });
    Ok(tally.into_report(g.id(), Mode::Exhaustive, started))
}

/// The `index`-th sampled coloring for `seed`: each point is green with
/// probability one half. Independent of how the indices are sharded.
pub fn sample_coloring(g: &Geometry, seed: u64, index: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut green = g.none();
    let mut word = 0u64;
    for i in 0..g.len() {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        if word >> (i % 64) & 1 == 1 {
            green.insert(i);
        }
    }
    green
}

/// Checks `n` seeded random colorings of `g`.
pub fn sample_verify(g: &Geometry, n: u64, seed: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    let checker = Checker::new(g)?;
    let tally = pool().install(|| {
        shards(n)
            .map(|(lo, hi)| {
                let mut t = Tally::default();
                for i in lo..hi {
                    let green = sample_coloring(g, seed, i);
                    let (accept, free) = checker.check(&green);
                    t.record(&green, accept, free);
                }
                t
            })
            .reduce(Tally::default, Tally::merge)
    });
    Ok(tally.into_report(g.id(), Mode::Sampled { seed, n }, started))
}

/// Every non-target coloring of `g` whose restriction to each proper
/// nonempty flat is a target.
pub fn find_minimal_non_targets(g: &std::sync::Arc<Geometry>) -> Result<Vec<Coloring>> {
    let total = exhaustive_count(g)?;
    let all = g.full_bits();
    let closure = BitClosure::new(g.hyperplane_masks(), all, all);
    let proper: Vec<u64> =
        (1..g.rank()).flat_map(|k| g.flats_of_rank(k).iter().map(|f| f.members().low_word())).collect();
    let found: Vec<u64> = pool().install(|| {
        shards(total)
            .flat_map_iter(|(lo, hi)| {
                let proper = &proper;
                (lo..hi).filter(move |&bits| {
                    !closure.is_target(bits, all) && proper.iter().all(|&f| closure.is_target(bits, f))
                })
            })
            .collect()
    });
    Ok(found.into_iter().map(|bits| Coloring::new(g.clone(), PointSet::from_mask(g.len(), bits)).expect("same geometry")).collect())
}

/// For every minimal non-target of full green rank in the affine geometry
/// `g`, looks for a red hyperplane and a green hyperplane that are disjoint.
/// True iff every such coloring has a pair.
pub fn disjoint_hyperplane_scan(g: &std::sync::Arc<Geometry>) -> Result<bool> {
    if g.kind() != crate::geometry::Kind::Affine {
        return Err(Error::WrongKind { expected: "affine" });
    }
    let full = g.rank() as usize;
    let hyperplanes = g.hyperplanes();
    for c in find_minimal_non_targets(g)? {
        if g.rank_of(c.green()) != full {
            continue;
        }
        let red = c.red();
        let spans = |h: &PointSet, side: &PointSet| g.rank_of(&h.intersection(side)) == full - 1;
        let found = hyperplanes.iter().any(|x| {
            spans(x.members(), &red)
                && hyperplanes
                    .iter()
                    .any(|y| x.members().is_disjoint(y.members()) && spans(y.members(), c.green()))
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
