//! Named property suites. Each returns a [`SuiteOutcome`] counting the
//! instances checked and describing the first failures.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{exhaustive_count, find_minimal_non_targets, MISMATCH_CAP};
use crate::catalog::{find_forbidden_by_seeds, line_profile_forbidden, ForbiddenSearch, SmallMatroid};
use crate::coloring::{random_flag, random_sequence, BitClosure, Coloring, FlatColor, SequenceShape, TargetDecision};
use crate::error::{Error, Result};
use crate::geometry::{Flat, Geometry, GeometryId, Kind};
use crate::pointset::PointSet;

/// Largest green matroid the well-definedness suite compares.
pub const ISOMORPHISM_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub geometry: GeometryId,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &'static str, g: &Geometry) -> Self {
        Self { suite, geometry: g.id(), checked: 0, failure_count: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MISMATCH_CAP {
                self.failures.push(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}: {} checked, {} failures", self.suite, self.geometry, self.checked, self.failure_count)?;
        for d in &self.failures {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

fn all_colorings(g: &Geometry) -> Result<impl Iterator<Item = PointSet> + '_> {
    let total = exhaustive_count(g)?;
    Ok((0..total).map(|bits| PointSet::from_mask(g.len(), bits)))
}

fn targets(g: &Geometry) -> Result<impl Iterator<Item = PointSet> + '_> {
    let all = g.full_bits();
    let closure = BitClosure::new(g.hyperplane_masks(), all, all);
    Ok(all_colorings(g)?.filter(move |s| closure.is_target(s.low_word(), all)))
}

/// Every flat of rank `1..r`.
fn proper_flats(g: &Geometry) -> Vec<&Flat> {
    (1..g.rank()).flat_map(|k| g.flats_of_rank(k)).collect()
}

fn seeded_targets(g: &Arc<Geometry>, count: usize, seed: u64) -> Vec<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let seq = random_sequence(g.as_ref(), &mut rng);
            Coloring::from_sequence(g.clone(), &seq).expect("random sequences are valid")
        })
        .collect()
}

/// Random targets stay targets on every proper flat.
pub fn restriction_closure(g: &Arc<Geometry>, count: usize, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("restriction-closure", g);
    let flats = proper_flats(g);
    for c in seeded_targets(g, count, seed) {
        out.check(c.is_target(), || format!("generated coloring {:?} is not a target", c.green()));
        for f in &flats {
            out.check(c.is_target_within(f.members()), || {
                format!("green {:?} fails on flat {:?}", c.green(), f.members())
            });
        }
    }
    out
}

/// Random projective targets stay targets after contracting any green
/// point, and (by swapping colors) any red point.
pub fn contraction_closure(g: &Arc<Geometry>, count: usize, seed: u64) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Projective {
        return Err(Error::WrongKind { expected: "projective" });
    }
    let mut out = SuiteOutcome::new("contraction-closure", g);
    for c in seeded_targets(g, count, seed) {
        for e in 0..g.len() {
            let contracted = if c.green().contains(e) {
                c.contract_point(e)?
            } else {
                c.complement().contract_point(e)?.complement()
            };
            out.check(contracted.is_target(), || format!("green {:?} contracted at {e}", c.green()));
        }
    }
    Ok(out)
}

/// Every projective target restricts to an affine target off every
/// hyperplane.
pub fn projective_to_affine(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("projective-to-affine", g);
    for green in targets(g)? {
        let c = Coloring::new(g.clone(), green)?;
        for h in g.hyperplanes() {
            let ok = c.is_target_off(h.members())?;
            out.check(ok, || format!("green {:?} off hyperplane {:?}", c.green(), h.members()));
        }
    }
    Ok(out)
}

/// Affine target → standard projective target → delete the complementary
/// hyperplane gives back the affine coloring, and the middle step is a
/// projective target.
pub fn standard_target_round_trip(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let emb = g.embed_affine()?;
    let mut out = SuiteOutcome::new("standard-target-round-trip", g);
    for green in targets(g)? {
        let c = Coloring::new(g.clone(), green)?;
        let lifted = c.standard_projective_target(&emb)?.expect("c is a target");
        let back = lifted.restrict_to_affine(&emb)?;
        out.check(lifted.is_target() && back == c, || format!("green {:?}", c.green()));
    }
    Ok(out)
}

/// In every target, each nonempty flat is spanned by exactly one color.
/// Projective geometries and affine ones over fields of order at least 3.
pub fn exactly_one_full_rank(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() == Kind::Affine && g.order() == 2 {
        return Err(Error::WrongRegime);
    }
    let mut out = SuiteOutcome::new("exactly-one-full-rank", g);
    let mut flats = proper_flats(g);
    flats.extend(g.flats_of_rank(g.rank()));
    for green in targets(g)? {
        let c = Coloring::new(g.clone(), green)?;
        for f in &flats {
            let color = c.flat_color(f.members());
            out.check(matches!(color, FlatColor::Green | FlatColor::Red), || {
                format!("green {:?}, flat {:?} is {color:?}", c.green(), f.members())
            });
        }
    }
    Ok(out)
}

/// In every binary affine target, each nonempty flat is green, red, or
/// split into two complementary hyperplanes of it; and a green flat has a
/// green hyperplane in every disjoint pair of its hyperplanes.
pub fn binary_affine_trichotomy(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Affine || g.order() != 2 {
        return Err(Error::WrongRegime);
    }
    let mut out = SuiteOutcome::new("binary-affine-trichotomy", g);
    let mut flats = proper_flats(g);
    flats.extend(g.flats_of_rank(g.rank()));
    // disjoint hyperplane pairs inside each flat
    let pairs: Vec<Vec<(&Flat, &Flat)>> = flats
        .iter()
        .map(|f| {
            if f.rank() < 2 {
                return Vec::new();
            }
            let inside: Vec<&Flat> =
                g.flats_of_rank(f.rank() - 1).iter().filter(|h| h.members().is_subset(f.members())).collect();
            let mut v = Vec::new();
            for (i, a) in inside.iter().enumerate() {
                for b in &inside[i + 1..] {
                    if a.members().is_disjoint(b.members()) {
                        v.push((*a, *b));
                    }
                }
            }
            v
        })
        .collect();
    for green in targets(g)? {
        let c = Coloring::new(g.clone(), green)?;
        for (f, hs) in flats.iter().zip(&pairs) {
            let color = c.flat_color(f.members());
            out.check(matches!(color, FlatColor::Green | FlatColor::Red | FlatColor::HalfHalf), || {
                format!("green {:?}, flat {:?} is {color:?}", c.green(), f.members())
            });
            if color == FlatColor::Green {
                let want = f.rank() as usize - 1;
                for (a, b) in hs {
                    let ga = g.rank_of(&a.members().intersection(c.green()));
                    let gb = g.rank_of(&b.members().intersection(c.green()));
                    out.check(ga == want || gb == want, || {
                        format!("green {:?}, flat {:?}: neither {:?} nor {:?} is green", c.green(), f.members(), a.members(), b.members())
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Pairs of random sequences along different flags with the same rank
/// profile give isomorphic green matroids. When more than
/// [`ISOMORPHISM_LIMIT`] points are green, the red matroids are compared.
pub fn well_definedness(g: &Arc<Geometry>, pairs: usize, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("well-definedness", g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = g.rank() as usize;
    for _ in 0..pairs {
        let shape = SequenceShape::random(r, &mut rng);
        let a = shape.along(&random_flag(g.as_ref(), &mut rng));
        let b = shape.along(&random_flag(g.as_ref(), &mut rng));
        let ga = a.green(g.as_ref()).expect("valid sequence");
        let gb = b.green(g.as_ref()).expect("valid sequence");
        let (sa, sb) = if ga.len() <= ISOMORPHISM_LIMIT { (ga, gb) } else { (ga.complement(), gb.complement()) };
        let same = a.ranks(g.as_ref()) == b.ranks(g.as_ref()) && sa.len() == sb.len() && {
            let ma = SmallMatroid::from_points(g, &sa.to_vec()).expect("within limit");
            let mb = SmallMatroid::from_points(g, &sb.to_vec()).expect("within limit");
            ma.is_isomorphic(&mb)
        };
        out.check(same, || format!("{:?} vs {:?}", a.flats(), b.flats()));
    }
    out
}

/// Both color classes of every projective target are connected, except
/// over GF(2) when one of them is `U_{2,2}`.
pub fn connectivity(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Projective {
        return Err(Error::WrongKind { expected: "projective" });
    }
    let mut out = SuiteOutcome::new("connectivity", g);
    let u22 = SmallMatroid::uniform(2, 2)?;
    for green in targets(g)? {
        let red = green.complement();
        let mg = SmallMatroid::from_points(g, &green.to_vec())?;
        let mr = SmallMatroid::from_points(g, &red.to_vec())?;
        let connected = mg.is_connected() && mr.is_connected();
        let exception = g.order() == 2 && (mg.is_isomorphic(&u22) || mr.is_isomorphic(&u22));
        out.check(connected || exception, || format!("green {green:?}"));
    }
    Ok(out)
}

/// In a binary affine geometry, equally sized color classes have equal
/// rank.
pub fn balanced_binary_rank(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Affine || g.order() != 2 {
        return Err(Error::WrongRegime);
    }
    let mut out = SuiteOutcome::new("balanced-binary-rank", g);
    for green in all_colorings(g)?.filter(|s| 2 * s.len() == g.len()) {
        let red = green.complement();
        out.check(g.rank_of(&green) == g.rank_of(&red), || format!("green {green:?}"));
    }
    Ok(out)
}

/// Both colors of every minimal non-target span the geometry.
pub fn minimal_non_target_ranks(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("minimal-non-target-ranks", g);
    let r = g.rank() as usize;
    for c in find_minimal_non_targets(g)? {
        let (gr, rr) = (g.rank_of(c.green()), g.rank_of(&c.red()));
        out.check(gr == r && rr == r, || format!("green {:?} has ranks {gr}/{rr}", c.green()));
    }
    Ok(out)
}

/// Every minimal non-target of an affine geometry has a disjoint red and
/// green hyperplane.
pub fn disjoint_hyperplanes(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("disjoint-red-green-hyperplanes", g);
    let ok = super::disjoint_hyperplane_scan(g)?;
    out.check(ok, || "some minimal non-target lacks a disjoint red/green hyperplane pair".into());
    Ok(out)
}

/// Each hyperplane of an affine geometry has `q` disjoint translates
/// covering the points.
pub fn parallel_partition(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("parallel-partition", g);
    let hyperplanes = g.hyperplanes();
    for h in hyperplanes {
        let parts = g.parallel_partition(h.members())?;
        let mut union = g.none();
        let mut disjoint = true;
        for p in &parts {
            disjoint &= union.is_disjoint(p.members());
            union.union_with(p.members());
        }
        let ok = parts.len() == g.order() as usize
            && disjoint
            && union == g.all()
            && parts.iter().any(|p| p == h)
            && parts.iter().all(|p| hyperplanes.contains(p));
        out.check(ok, || format!("hyperplane {:?}", h.members()));
    }
    Ok(out)
}

/// Two distinct affine hyperplanes meet in nothing or in a flat of rank
/// `r - 2`.
pub fn hyperplane_intersections(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Affine {
        return Err(Error::WrongKind { expected: "affine" });
    }
    let mut out = SuiteOutcome::new("hyperplane-intersection", g);
    let hs = g.hyperplanes();
    let r = g.rank() as usize;
    for (i, x) in hs.iter().enumerate() {
        for y in &hs[i + 1..] {
            let k = g.rank_of(&x.members().intersection(y.members()));
            out.check(k == 0 || k + 2 == r, || format!("{:?} and {:?} meet in rank {k}", x.members(), y.members()));
        }
    }
    Ok(out)
}

/// The parallel classes of affine hyperplanes, each ordered by smallest
/// member.
pub fn parallel_classes(g: &Geometry) -> Result<Vec<Vec<Flat>>> {
    let mut classes: Vec<Vec<Flat>> = Vec::new();
    for h in g.hyperplanes() {
        if classes.iter().any(|c| c.contains(h)) {
            continue;
        }
        classes.push(g.parallel_partition(h.members())?);
    }
    Ok(classes)
}

fn grids(g: &Geometry) -> Result<Vec<crate::geometry::PartitionGrid>> {
    let classes = parallel_classes(g)?;
    let mut out = Vec::new();
    for (i, x) in classes.iter().enumerate() {
        for (j, y) in classes.iter().enumerate() {
            if i != j {
                out.push(g.grid(x, y)?);
            }
        }
    }
    Ok(out)
}

fn hits(s: &PointSet, parts: &[Flat]) -> Vec<usize> {
    parts.iter().map(|p| s.intersection_len(p.members())).collect()
}

/// A line through two points that share no cell and no family member meets
/// every member of both families exactly once.
pub fn line_grid(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("line-grid", g);
    for grid in grids(g)? {
        for x in 0..g.len() {
            for y in x + 1..g.len() {
                let pair = PointSet::from_indices(g.len(), [x, y]);
                let shared = grid.x().iter().chain(grid.y()).any(|f| pair.is_subset(f.members()));
                if shared {
                    continue;
                }
                let line = g.closure(&pair);
                let ok = hits(&line, grid.x()).iter().chain(&hits(&line, grid.y())).all(|&k| k == 1);
                out.check(ok, || format!("points {x}, {y}"));
            }
        }
    }
    Ok(out)
}

/// For `q` in {2, 3}: the plane through three independent points in
/// distinct cells, two of them in one member of the first family, meets
/// every cell exactly once.
pub fn plane_grid(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Affine || g.order() > 3 {
        return Err(Error::WrongRegime);
    }
    let mut out = SuiteOutcome::new("plane-grid", g);
    let n = g.len();
    for grid in grids(g)? {
        let cell_of: Vec<usize> = (0..n)
            .map(|p| grid.cells().position(|c| c.members().contains(p)).expect("cells partition the points"))
            .collect();
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let (a, b, c) = (cell_of[x], cell_of[y], cell_of[z]);
                    if a == b || a == c || b == c {
                        continue;
                    }
                    let triple = PointSet::from_indices(n, [x, y, z]);
                    if g.rank_of(&triple) != 3 || !grid.x().iter().any(|f| triple.intersection_len(f.members()) == 2) {
                        continue;
                    }
                    let plane = g.closure(&triple);
                    let ok = grid.cells().all(|cell| plane.intersection_len(cell.members()) == 1);
                    out.check(ok, || format!("points {x}, {y}, {z}"));
                }
            }
        }
    }
    Ok(out)
}

/// Over GF(2): a plane with two points in each of `F_{1,2}` and `F_{2,1}`,
/// and a plane through the latter two with its other points in `F_{2,2}`,
/// together span a rank-4 flat meeting every cell in exactly two points.
pub fn double_plane_grid(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    if g.kind() != Kind::Affine || g.order() != 2 {
        return Err(Error::WrongRegime);
    }
    let mut out = SuiteOutcome::new("double-plane-grid", g);
    let planes = g.flats_of_rank(3);
    for grid in grids(g)? {
        // every labelling of the two members of each family
        for (i1, j1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let cell = |i: usize, j: usize| grid.cell((i + i1) % 2, (j + j1) % 2).members();
            let (f12, f21, f22) = (cell(0, 1), cell(1, 0), cell(1, 1));
            for p1 in planes {
                let m = p1.members();
                if m.intersection_len(f12) != 2 || m.intersection_len(f21) != 2 {
                    continue;
                }
                let yz = m.intersection(f21);
                for p2 in planes {
                    let m2 = p2.members();
                    if !yz.is_subset(m2) || m2.difference(&yz).intersection_len(f22) != 2 {
                        continue;
                    }
                    let span = g.closure(&m.union(m2));
                    let ok = g.rank_of(&span) == 4 && grid.cells().all(|c| span.intersection_len(c.members()) == 2);
                    out.check(ok, || format!("planes {m:?} and {m2:?}"));
                }
            }
        }
    }
    Ok(out)
}

/// The line scan and the general flat search agree on whether a forbidden
/// restriction exists, on every coloring.
pub fn line_profile_agreement(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("line-profile-agreement", g);
    let search = ForbiddenSearch::new(g)?;
    for green in all_colorings(g)? {
        let c = Coloring::new(g.clone(), green)?;
        let fast = line_profile_forbidden(&c)?.is_some();
        let general = search.find(c.green()).is_some();
        out.check(fast == general, || format!("green {:?}: lines {fast}, flats {general}", c.green()));
    }
    Ok(out)
}

/// The flat search finds a forbidden restriction iff a closure of at most 4
/// green seeds does, iff a closure of at most 6 does.
pub fn seed_search_agreement(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("seed-search-agreement", g);
    let search = ForbiddenSearch::new(g)?;
    for green in all_colorings(g)? {
        let c = Coloring::new(g.clone(), green)?;
        let flat = search.find(c.green()).is_some();
        let four = find_forbidden_by_seeds(&c, 4)?.is_some();
        let six = find_forbidden_by_seeds(&c, 6)?.is_some();
        out.check(flat == four && four == six, || format!("green {:?}: {flat}/{four}/{six}", c.green()));
    }
    Ok(out)
}

/// Every certificate replays to its coloring and every rejection names a
/// flat spanned by both colors.
pub fn certificates(g: &Arc<Geometry>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("certificates", g);
    for green in all_colorings(g)? {
        let c = Coloring::new(g.clone(), green)?;
        let ok = match c.recognize() {
            TargetDecision::Accept(seq) => seq.is_canonical() && c.verify_sequence(&seq),
            TargetDecision::Reject(f) => g.is_flat(f.members()) && c.flat_color(f.members()).both_full(f.rank()),
        };
        out.check(ok, || format!("green {:?}", c.green()));
    }
    Ok(out)
}
