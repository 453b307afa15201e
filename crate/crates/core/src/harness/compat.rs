//! Gluing an affine target on the complement of a projective hyperplane to a
//! projective target on the hyperplane.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::{pool, MISMATCH_CAP};
use crate::coloring::{canonical_sequences, nested_sequences, peel, ClosureSpace, Coloring, HyperplaneComplement, NestedSequence, Peel};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Kind};
use crate::pointset::PointSet;

/// A projective geometry split along a hyperplane `H`, with a target on each
/// side.
#[derive(Clone, Debug)]
pub struct CompatibilityInstance {
    geometry: Arc<Geometry>,
    hyperplane: PointSet,
    affine_green: PointSet,
    hyperplane_green: PointSet,
    /// Canonical sequence `F_0, …, F_k` of the affine side.
    affine_seq: NestedSequence,
    /// Canonical sequence `S_0, …, S_t` of the hyperplane side.
    hyperplane_seq: NestedSequence,
}

impl CompatibilityInstance {
    /// `affine_green` must lie off `hyperplane` and `hyperplane_green` on
    /// it; both sides must be targets.
    pub fn new(
        geometry: Arc<Geometry>,
        hyperplane: PointSet,
        affine_green: PointSet,
        hyperplane_green: PointSet,
    ) -> Result<Self> {
        if geometry.kind() != Kind::Projective {
            return Err(Error::WrongKind { expected: "projective" });
        }
        for s in [&hyperplane, &affine_green, &hyperplane_green] {
            geometry.check_set(s)?;
        }
        if geometry.rank_of(&hyperplane) + 1 != geometry.rank() as usize || !geometry.is_flat(&hyperplane) {
            return Err(Error::NotHyperplane);
        }
        if affine_green.intersects(&hyperplane) || !hyperplane_green.is_subset(&hyperplane) {
            return Err(Error::GeometryMismatch);
        }
        let space = HyperplaneComplement::new(&geometry, hyperplane.clone());
        let Peel::Accept(affine_seq) = peel(&space, &affine_green, &space.ground()) else {
            return Err(Error::ComponentNotTarget);
        };
        let Peel::Accept(hyperplane_seq) = peel(geometry.as_ref(), &hyperplane_green, &hyperplane) else {
            return Err(Error::ComponentNotTarget);
        };
        Ok(Self { geometry, hyperplane, affine_green, hyperplane_green, affine_seq, hyperplane_seq })
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn hyperplane(&self) -> &PointSet {
        &self.hyperplane
    }

    pub fn affine_sequence(&self) -> &NestedSequence {
        &self.affine_seq
    }

    pub fn hyperplane_sequence(&self) -> &NestedSequence {
        &self.hyperplane_seq
    }

    /// The merged coloring of the whole projective geometry.
    pub fn merged(&self) -> Coloring {
        Coloring::new(self.geometry.clone(), self.affine_green.union(&self.hyperplane_green)).expect("same geometry")
    }

    /// Index of the first nonempty flat of the affine sequence.
    pub fn beta(&self) -> usize {
        self.affine_seq.flats().iter().position(|f| !f.is_empty()).expect("affine side is nonempty")
    }

    /// Whether the merged coloring is a target.
    pub fn check_direct(&self) -> bool {
        self.merged().is_target()
    }

    /// The index `m` for which the gluing conditions hold for the
    /// recognizer's own canonical sequences of the two sides, if any.
    pub fn matching_index(&self) -> Option<usize> {
        gluing_index(&self.geometry, &self.merged(), self.affine_seq.flats(), self.hyperplane_seq.flats())
    }

    /// Whether the gluing conditions hold for some canonical sequence of
    /// the affine side and some sequence of the hyperplane side that is
    /// canonical up to one repeated flat.
    ///
    /// The repeat is needed: the trace on `H` of a chain of projective flats
    /// repeats a flat where the chain first leaves `H` by one rank. Without
    /// it, e.g. a two-point affine line glued to an all-red line in the Fano
    /// plane is compatible but fails the rank condition for every `m`.
    pub fn check_conditions(&self) -> bool {
        let g = self.geometry.as_ref();
        let space = HyperplaneComplement::new(g, self.hyperplane.clone());
        let (affine_flats, hyperplane_flats) = side_flats(g, &self.hyperplane);
        let affine = canonical_sequences(&space, &affine_flats, &self.affine_green);
        let on_h = nested_sequences(
            &OnHyperplane::new(g, &self.hyperplane),
            &hyperplane_flats,
            &self.hyperplane_green,
            HYPERPLANE_REPEATS,
        );
        let merged = self.merged();
        affine.iter().any(|f| on_h.iter().any(|s| gluing_index(g, &merged, f.flats(), s.flats()).is_some()))
    }
}

/// The index `m` for which the gluing conditions hold for the affine
/// sequence `f` and hyperplane sequence `s`:
///
/// 1. `F_β ∪ S_m` is a flat, `r(S_m) = r(F_β) - 1`, and the merged coloring
///    is a target on `F_β ∪ S_m`;
/// 2. `t = m + k - β`, and for `α = 1, …, k - β` the union
///    `F_{β+α} ∪ S_{m+α}` is a flat whose difference from
///    `F_{β+α-1} ∪ S_{m+α-1}` is monochromatic.
///
/// `β` is the index of the first nonempty flat of `f`.
pub fn gluing_index(g: &Geometry, merged: &Coloring, f: &[PointSet], s: &[PointSet]) -> Option<usize> {
    let k = f.len() - 1;
    let t = s.len() - 1;
    let beta = f.iter().position(|x| !x.is_empty())?;
    let fb_rank = g.rank_of(&f[beta]);
    (0..=t).find(|&m| {
        let base = f[beta].union(&s[m]);
        let first = g.is_flat(&base) && g.rank_of(&s[m]) + 1 == fb_rank && merged.is_target_within(&base);
        if !first || t != m + k - beta {
            return false;
        }
        (1..=k - beta).all(|a| {
            let outer = f[beta + a].union(&s[m + a]);
            let inner = f[beta + a - 1].union(&s[m + a - 1]);
            let shell = outer.difference(&inner);
            g.is_flat(&outer) && (shell.is_subset(merged.green()) || shell.is_disjoint(merged.green()))
        })
    })
}

/// A projective hyperplane as a projective geometry in its own right.
struct OnHyperplane<'g> {
    geometry: &'g Geometry,
    hyperplane: &'g PointSet,
}

impl<'g> OnHyperplane<'g> {
    fn new(geometry: &'g Geometry, hyperplane: &'g PointSet) -> Self {
        Self { geometry, hyperplane }
    }
}

impl ClosureSpace for OnHyperplane<'_> {
    fn universe(&self) -> usize {
        self.geometry.len()
    }

    fn ground(&self) -> PointSet {
        self.hyperplane.clone()
    }

    fn closure(&self, s: &PointSet) -> PointSet {
        self.geometry.closure(s)
    }

    fn rank_of(&self, s: &PointSet) -> usize {
        self.geometry.rank_of(s)
    }
}

/// Flats of the affine side `E - H` and of `H`, as traces of projective
/// flats.
fn side_flats(g: &Geometry, h: &PointSet) -> (Vec<PointSet>, Vec<PointSet>) {
    let mut affine = HashSet::new();
    let mut on_h = HashSet::new();
    for k in 0..=g.rank() {
        for f in g.flats_of_rank(k) {
            affine.insert(f.members().difference(h));
            on_h.insert(f.members().intersection(h));
        }
    }
    (affine.into_iter().collect(), on_h.into_iter().collect())
}

/// Totals of a compatibility sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompatibilitySweep {
    pub instances: u64,
    pub compatible: u64,
    /// Instances where "some pair of canonical sequences glues" disagrees
    /// with direct recognition.
    pub mismatch_count: u64,
    /// `(hyperplane index, affine green, hyperplane green)` of the first
    /// disagreements.
    pub mismatches: Vec<(usize, Vec<usize>, Vec<usize>)>,
    /// Disagreements when only the recognizer's own pair of canonical
    /// sequences is tried.
    pub fixed_sequence_mismatches: u64,
    /// Disagreements when every pair of canonical sequences is tried but the
    /// hyperplane side may not repeat a flat.
    pub canonical_only_mismatches: u64,
}

impl CompatibilitySweep {
    fn merge(mut self, other: Self) -> Self {
        self.instances += other.instances;
        self.compatible += other.compatible;
        self.mismatch_count += other.mismatch_count;
        self.fixed_sequence_mismatches += other.fixed_sequence_mismatches;
        self.canonical_only_mismatches += other.canonical_only_mismatches;
        let room = MISMATCH_CAP - self.mismatches.len();
        self.mismatches.extend(other.mismatches.into_iter().take(room));
        self
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

/// One side of a split: a green set, its recognized sequence, its canonical
/// sequences and the sequences with extra repeated flats.
struct Side {
    green: PointSet,
    peeled: NestedSequence,
    canonical: Vec<NestedSequence>,
    relaxed: Vec<NestedSequence>,
}

/// Repeated flats allowed in hyperplane-side sequences.
const HYPERPLANE_REPEATS: usize = 1;

/// Every target of `space` among the subsets of its ground set.
fn sides(space: &impl ClosureSpace, flats: &[PointSet], repeats: usize) -> Vec<Side> {
    let ground = space.ground();
    let pts = ground.to_vec();
    (0..1u64 << pts.len())
        .filter_map(|bits| {
            let green = PointSet::from_indices(
                ground.universe(),
                pts.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p),
            );
            match peel(space, &green, &ground) {
                Peel::Accept(peeled) => {
                    let relaxed = nested_sequences(space, flats, &green, repeats);
                    let canonical = relaxed.iter().filter(|s| s.is_canonical()).cloned().collect();
                    Some(Side { green, peeled, canonical, relaxed })
                }
                Peel::Reject(_) => None,
            }
        })
        .collect()
}

/// Pairs every affine target off each hyperplane with every projective
/// target on it and compares the gluing conditions with direct recognition.
pub fn compatibility_sweep(g: &Arc<Geometry>) -> Result<CompatibilitySweep> {
    if g.kind() != Kind::Projective {
        return Err(Error::WrongKind { expected: "projective" });
    }
    let mut out = CompatibilitySweep::default();
    for (hi, h) in g.hyperplanes().iter().enumerate() {
        let h = h.members();
        let (affine_flats, hyperplane_flats) = side_flats(g, h);
        let affine = sides(&HyperplaneComplement::new(g, h.clone()), &affine_flats, 0);
        let on_h = sides(&OnHyperplane::new(g, h), &hyperplane_flats, HYPERPLANE_REPEATS);
        let part = pool().install(|| {
            affine
                .par_iter()
                .map(|a| {
                    let mut acc = CompatibilitySweep::default();
                    for b in &on_h {
                        let merged = Coloring::new(g.clone(), a.green.union(&b.green)).expect("same geometry");
                        let direct = merged.is_target();
                        let fixed = gluing_index(g, &merged, a.peeled.flats(), b.peeled.flats()).is_some();
                        let glues = |bs: &[NestedSequence]| {
                            a.canonical.iter().any(|f| {
                                bs.iter().any(|s| gluing_index(g, &merged, f.flats(), s.flats()).is_some())
                            })
                        };
                        let canonical = fixed || glues(&b.canonical);
                        let any = canonical || glues(&b.relaxed);
                        acc.instances += 1;
                        acc.compatible += direct as u64;
                        acc.fixed_sequence_mismatches += (direct != fixed) as u64;
                        acc.canonical_only_mismatches += (direct != canonical) as u64;
                        if direct != any {
                            acc.mismatch_count += 1;
                            if acc.mismatches.len() < MISMATCH_CAP {
                                acc.mismatches.push((hi, a.green.to_vec(), b.green.to_vec()));
                            }
                        }
                    }
                    acc
                })
                .reduce(CompatibilitySweep::default, CompatibilitySweep::merge)
        });
        out = out.merge(part);
    }
    Ok(out)
}
