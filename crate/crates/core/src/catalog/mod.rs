//! Forbidden induced restrictions and the search for them.
//!
//! A coloring contains a catalog matroid `N` as an induced restriction when
//! some ambient flat `F` is spanned by its green points and `G ∩ F ≅ N`. The
//! flats of the green matroid are exactly these traces, so the search walks
//! the ambient flats of the ranks that occur in the catalog.

mod matroid;

pub use matroid::{SmallMatroid, MAX_ELEMENTS};

use crate::coloring::{BitClosure, Coloring};
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::geometry::{Flat, Geometry, Kind};
use crate::pointset::PointSet;

/// The forbidden matroids for targets of one geometry family.
#[derive(Clone, Debug)]
pub struct Catalog {
    kind: Kind,
    q: u32,
    entries: Vec<SmallMatroid>,
}

fn uniform_lines(lo: usize, hi: usize) -> Vec<SmallMatroid> {
    (lo..=hi).map(|j| SmallMatroid::uniform(2, j).expect("valid uniform")).collect()
}

impl Catalog {
    pub fn new(kind: Kind, q: u32) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::UnsupportedOrder(q));
        }
        let qs = q as usize;
        let entries = match (kind, q) {
            (Kind::Projective, 2) => vec![Self::claw(), Self::anticlaw()],
            (Kind::Projective, _) => uniform_lines(2, qs - 1),
            (Kind::Affine, 2) => vec![SmallMatroid::uniform(4, 4).expect("valid uniform")],
            (Kind::Affine, 3) => {
                let u23 = SmallMatroid::uniform(2, 3).expect("valid uniform");
                let u24 = SmallMatroid::uniform(2, 4).expect("valid uniform");
                vec![
                    SmallMatroid::uniform(3, 3).expect("valid uniform"),
                    SmallMatroid::uniform(3, 4).expect("valid uniform"),
                    Self::anticlaw(),
                    u23.two_sum(0, &u24, 0).expect("valid basepoints").with_name("U_{2,3}(+)_2U_{2,4}"),
                    u23.parallel_connection(0, &u23, 0)
                        .expect("valid basepoints")
                        .with_name("P(U_{2,3},U_{2,3})"),
                    SmallMatroid::whirl3().with_name("W^3 (whirl)"),
                ]
            }
            (Kind::Affine, _) => uniform_lines(2, qs - 2),
        };
        Ok(Self { kind, q, entries })
    }

    pub fn for_geometry(g: &Geometry) -> Result<Self> {
        Self::new(g.kind(), g.order())
    }

    fn claw() -> SmallMatroid {
        SmallMatroid::uniform(3, 3).expect("valid uniform").with_name("U_{3,3} (claw)")
    }

    fn anticlaw() -> SmallMatroid {
        let u23 = SmallMatroid::uniform(2, 3).expect("valid uniform");
        let u11 = SmallMatroid::uniform(1, 1).expect("valid uniform");
        u23.direct_sum(&u11).expect("fits").with_name("U_{2,3}+U_{1,1} (anti-claw)")
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[SmallMatroid] {
        &self.entries
    }

    /// Distinct ranks of the entries, ascending.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.entries.iter().map(SmallMatroid::rank).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn max_len(&self) -> usize {
        self.entries.iter().map(SmallMatroid::len).max().unwrap_or(0)
    }

    /// First entry isomorphic to `m`.
    pub fn identify(&self, m: &SmallMatroid) -> Option<&SmallMatroid> {
        self.entries.iter().find(|e| e.is_isomorphic(m))
    }

    fn has_shape(&self, len: usize, rank: usize) -> bool {
        self.entries.iter().any(|e| e.len() == len && e.rank() == rank)
    }
}

/// A forbidden matroid found inside a coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWitness {
    pub name: String,
    /// The green points of `flat`; their restriction is the named matroid.
    pub points: PointSet,
    pub flat: Flat,
}

/// The catalog together with the ambient flats it has to look at, prepared
/// once per geometry.
pub struct ForbiddenSearch<'g> {
    geometry: &'g Geometry,
    catalog: Catalog,
    flats: Vec<&'g Flat>,
    /// Bit masks of `flats` and their ranks, for geometries of at most 64
    /// points.
    masks: Vec<(u64, u32)>,
    shapes: Vec<Vec<bool>>,
}

impl<'g> ForbiddenSearch<'g> {
    pub fn new(geometry: &'g Geometry) -> Result<Self> {
        let catalog = Catalog::for_geometry(geometry)?;
        let mut flats = Vec::new();
        for k in catalog.ranks() {
            if k <= geometry.rank() as usize {
                flats.extend(geometry.flats_of_rank(k as u32));
            }
        }
        let masks = if geometry.len() <= 64 {
            flats.iter().map(|f| (f.members().low_word(), f.rank())).collect()
        } else {
            Vec::new()
        };
        let max_len = catalog.max_len();
        let top = geometry.rank() as usize;
        let shapes = (0..=max_len).map(|len| (0..=top).map(|k| catalog.has_shape(len, k)).collect()).collect();
        Ok(Self { geometry, catalog, flats, masks, shapes })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    #[inline]
    fn shape_ok(&self, len: usize, rank: usize) -> bool {
        self.shapes.get(len).is_some_and(|row| row[rank])
    }

    /// Name of the catalog entry the green trace of a flat realizes, if any.
    fn classify(&self, trace: &PointSet, rank: usize) -> Option<String> {
        let g = self.geometry;
        if !self.shape_ok(trace.len(), rank) {
            return None;
        }
        let mut candidates =
            self.catalog.entries.iter().filter(|e| e.len() == trace.len() && e.rank() == rank);
        if rank <= 2 {
            // simple matroids of rank at most two are uniform
            return candidates.next().map(|e| e.name().unwrap_or("unnamed").to_string());
        }
        if g.rank_of(trace) != rank {
            return None;
        }
        let m = SmallMatroid::from_points(g, &trace.to_vec()).ok()?;
        candidates
            .find(|e| e.is_isomorphic(&m))
            .map(|e| e.name().unwrap_or("unnamed").to_string())
    }

    /// First witness in flat order (rank, then member list).
    pub fn find(&self, green: &PointSet) -> Option<ForbiddenWitness> {
        for f in &self.flats {
            let trace = green.intersection(f.members());
            if let Some(name) = self.classify(&trace, f.rank() as usize) {
                return Some(ForbiddenWitness { name, points: trace, flat: (*f).clone() });
            }
        }
        None
    }

    /// Whether any witness exists.
    pub fn contains_forbidden(&self, green: &PointSet) -> bool {
        if self.geometry.len() > 64 {
            return self.find(green).is_some();
        }
        self.contains_forbidden_bits(green.low_word())
    }

    /// [`ForbiddenSearch::contains_forbidden`] on a bit mask; geometries of
    /// at most 64 points only.
    pub(crate) fn contains_forbidden_bits(&self, bits: u64) -> bool {
        let closure = BitClosure::new(self.geometry.hyperplane_masks(), self.geometry.full_bits(), !0);
        for &(mask, rank) in &self.masks {
            let trace = bits & mask;
            let len = trace.count_ones() as usize;
            let rank = rank as usize;
            if !self.shape_ok(len, rank) {
                continue;
            }
            // green spans a flat of rank at most two as soon as it has
            // `rank` points, and the trace is then uniform
            if rank <= 2 {
                return true;
            }
            if closure.close(trace) != mask {
                continue;
            }
            let pts = PointSet::from_mask(self.geometry.len(), trace);
            if self.classify(&pts, rank).is_some() {
                return true;
            }
        }
        false
    }
}

/// First forbidden induced restriction in the coloring, if any.
pub fn find_forbidden(c: &Coloring) -> Result<Option<ForbiddenWitness>> {
    Ok(ForbiddenSearch::new(c.geometry())?.find(c.green()))
}

/// Reference search: close every green seed subset of at most `max_seed`
/// points and test its green trace against the catalog. Seeds are visited by
/// size, then lexicographically.
pub fn find_forbidden_by_seeds(c: &Coloring, max_seed: usize) -> Result<Option<ForbiddenWitness>> {
    let g = c.geometry();
    let catalog = Catalog::for_geometry(g)?;
    let green = c.green().to_vec();
    let max_len = catalog.max_len();
    let mut seed = Vec::with_capacity(max_seed);
    for size in 1..=max_seed.min(green.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            seed.clear();
            seed.extend(idx.iter().map(|&i| green[i]));
            let f = g.closure(&PointSet::from_indices(g.len(), seed.iter().copied()));
            let trace = f.intersection(c.green());
            if trace.len() <= max_len {
                let m = SmallMatroid::from_points(g, &trace.to_vec())?;
                if let Some(entry) = catalog.identify(&m) {
                    return Ok(Some(ForbiddenWitness {
                        name: entry.name().unwrap_or("unnamed").to_string(),
                        points: trace,
                        flat: g.flat(&f),
                    }));
                }
            }
            if !next_combination(&mut idx, green.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Scans lines for a green count that realizes a forbidden `U_{2,j}`. Only
/// for projective geometries with `q ≥ 3` and affine ones with `q ≥ 4`.
pub fn line_profile_forbidden(c: &Coloring) -> Result<Option<ForbiddenWitness>> {
    let g = c.geometry();
    let q = g.order() as usize;
    let hi = match (g.kind(), q) {
        (Kind::Projective, q) if q >= 3 => q - 1,
        (Kind::Affine, q) if q >= 4 => q - 2,
        _ => return Err(Error::WrongRegime),
    };
    for line in g.flats_of_rank(2) {
        let trace = c.green().intersection(line.members());
        let j = trace.len();
        if (2..=hi).contains(&j) {
            return Ok(Some(ForbiddenWitness { name: format!("U_{{2,{j}}}"), points: trace, flat: line.clone() }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn catalog_contents() {
        let names = |k, q| -> Vec<String> {
            Catalog::new(k, q).unwrap().entries().iter().map(|e| e.name().unwrap().to_string()).collect()
        };
        assert_eq!(names(Kind::Projective, 3), vec!["U_{2,2}"]);
        assert_eq!(names(Kind::Projective, 5), vec!["U_{2,2}", "U_{2,3}", "U_{2,4}"]);
        assert_eq!(names(Kind::Projective, 2).len(), 2);
        assert_eq!(names(Kind::Affine, 2), vec!["U_{4,4}"]);
        assert_eq!(names(Kind::Affine, 3).len(), 6);
        assert_eq!(names(Kind::Affine, 4), vec!["U_{2,2}"]);
        assert_eq!(names(Kind::Affine, 7), vec!["U_{2,2}", "U_{2,3}", "U_{2,4}", "U_{2,5}"]);
        assert_eq!(Catalog::new(Kind::Affine, 6).unwrap_err(), Error::UnsupportedOrder(6));
    }

    #[test]
    fn affine_ternary_entries_are_distinct() {
        let c = Catalog::new(Kind::Affine, 3).unwrap();
        let e = c.entries();
        for i in 0..e.len() {
            for j in 0..e.len() {
                assert_eq!(e[i].is_isomorphic(&e[j]), i == j, "{:?} vs {:?}", e[i], e[j]);
            }
        }
        assert!(e.iter().all(|m| m.rank() == 3));
    }

    #[test]
    fn witness_examples() {
        let g = Arc::new(Geometry::projective(3, 2).unwrap());
        let e = |v: &[u8]| g.index_of(v).unwrap();
        let claw = Coloring::from_indices(g.clone(), [e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]).unwrap();
        let w = find_forbidden(&claw).unwrap().unwrap();
        assert_eq!(w.name, "U_{3,3} (claw)");
        assert_eq!(w.flat.members(), &g.all());
        assert!(find_forbidden(&Coloring::all_green(g.clone())).unwrap().is_none());

        let ag = Arc::new(Geometry::affine(4, 2).unwrap());
        let pts = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]].map(|v| ag.index_of(&v).unwrap());
        let c = Coloring::from_indices(ag.clone(), pts).unwrap();
        let w = find_forbidden(&c).unwrap().unwrap();
        assert_eq!(w.name, "U_{4,4}");
        assert_eq!(w.flat.members(), &ag.all());
        assert_eq!(w.points.len(), 4);
        assert!(!c.is_target());

        let line = Arc::new(Geometry::projective(2, 3).unwrap());
        let c = Coloring::from_indices(line.clone(), [0, 1]).unwrap();
        assert_eq!(line_profile_forbidden(&c).unwrap().unwrap().name, "U_{2,2}");
        assert_eq!(find_forbidden(&c).unwrap().unwrap().name, "U_{2,2}");
    }

    #[test]
    fn line_profile_regimes() {
        let ag = Arc::new(Geometry::affine(3, 5).unwrap());
        let l = ag.flats_of_rank(2)[0].members().to_vec();
        let c = Coloring::from_indices(ag.clone(), l[..3].iter().copied()).unwrap();
        assert_eq!(line_profile_forbidden(&c).unwrap().unwrap().name, "U_{2,3}");
        assert!(line_profile_forbidden(&Coloring::all_green(ag)).unwrap().is_none());
        let ag4 = Arc::new(Geometry::affine(3, 4).unwrap());
        let l = ag4.flats_of_rank(2)[0].members().to_vec();
        let c = Coloring::from_indices(ag4, l[..3].iter().copied()).unwrap();
        assert!(line_profile_forbidden(&c).unwrap().is_none());
        let fano = Arc::new(Geometry::projective(3, 2).unwrap());
        assert_eq!(line_profile_forbidden(&Coloring::all_green(fano)).unwrap_err(), Error::WrongRegime);
    }

    #[test]
    fn fast_and_generic_search_agree() {
        for g in [Geometry::projective(3, 2).unwrap(), Geometry::affine(3, 3).unwrap()] {
            let g = Arc::new(g);
            let search = ForbiddenSearch::new(&g).unwrap();
            for bits in 0..1u64 << g.len() {
                let green = PointSet::from_mask(g.len(), bits);
                assert_eq!(search.contains_forbidden(&green), search.find(&green).is_some());
            }
        }
    }
}
