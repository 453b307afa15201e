//! Point enumeration, closure and rank for PG(r-1, q) and AG(r-1, q).
//!
//! Every point carries two coordinate vectors. The canonical vector is what
//! orders the points: length `r` with first nonzero entry 1 for projective
//! geometries, length `r-1` for affine ones. The homogeneous vector (length
//! `r`) is what the linear algebra runs on; for an affine point `v` it is
//! `(1, v)`, which makes affine rank and closure the projective rank and
//! closure of the embedded image.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{Echelon, MAX_DIM};
use crate::pointset::PointSet;

/// Default cap on the number of points in a geometry.
pub const DEFAULT_POINT_CAP: usize = 1 << 16;

/// Geometries up to this size close sets by intersecting hyperplanes.
const HYPERPLANE_CLOSURE_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Projective,
    Affine,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Projective => "PG",
            Kind::Affine => "AG",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "PG" | "pg" => Ok(Kind::Projective),
            "AG" | "ag" => Ok(Kind::Affine),
            other => Err(format!("unknown geometry kind {other:?}, expected PG or AG")),
        }
    }
}

/// Identifies a geometry up to equality: `(kind, rank, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeometryId {
    pub kind: Kind,
    pub rank: u32,
    pub q: u32,
}

impl fmt::Display for GeometryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.rank - 1, self.q)
    }
}

/// A closed set of points together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    members: PointSet,
    rank: u32,
}

impl Flat {
    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> PointSet {
        self.members
    }
}

pub struct Geometry {
    kind: Kind,
    rank: u32,
    field: Arc<FiniteField>,
    n: usize,
    coord_len: usize,
    coords: Vec<Elem>,
    homog: Vec<Elem>,
    flats: Vec<OnceLock<Vec<Flat>>>,
    hyperplane_masks: OnceLock<Vec<u64>>,
    lower: OnceLock<Arc<Geometry>>,
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Number of points of the geometry, or `None` on overflow.
pub fn point_count(kind: Kind, rank: u32, q: u32) -> Option<u64> {
    let q = q as u64;
    match kind {
        Kind::Projective => Some((q.checked_pow(rank)? - 1) / (q - 1)),
        Kind::Affine => q.checked_pow(rank.checked_sub(1)?),
    }
}

fn digits_into(mut value: usize, q: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (value % q) as Elem;
        value /= q;
    }
}

impl Geometry {
    /// Enumerates the points of PG(rank-1, q) or AG(rank-1, q) with the
    /// default point cap.
    pub fn build(kind: Kind, rank: u32, field: impl Into<Arc<FiniteField>>) -> Result<Self> {
        Self::build_with_cap(kind, rank, field, DEFAULT_POINT_CAP)
    }

    pub fn build_with_cap(
        kind: Kind,
        rank: u32,
        field: impl Into<Arc<FiniteField>>,
        cap: usize,
    ) -> Result<Self> {
        let field = field.into();
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        let q = field.order();
        let n = match point_count(kind, rank, q) {
            Some(n) if n <= cap as u64 => n as usize,
            Some(n) => return Err(Error::TooLarge { points: n, cap }),
            None => return Err(Error::TooLarge { points: u64::MAX, cap }),
        };
        let r = rank as usize;
        if r > MAX_DIM {
            return Err(Error::InvalidRank(rank));
        }
        let qs = q as usize;
        let coord_len = match kind {
            Kind::Projective => r,
            Kind::Affine => r - 1,
        };
        let mut coords = Vec::with_capacity(n * coord_len);
        let mut homog = Vec::with_capacity(n * r);
        let mut buf = vec![0; r];
        match kind {
            Kind::Projective => {
                for pivot in (0..r).rev() {
                    let tail_len = r - 1 - pivot;
                    for tail in 0..qs.pow(tail_len as u32) {
                        buf.iter_mut().for_each(|x| *x = 0);
                        buf[pivot] = 1;
                        digits_into(tail, qs, &mut buf[pivot + 1..]);
                        coords.extend_from_slice(&buf);
                        homog.extend_from_slice(&buf);
                    }
                }
            }
            Kind::Affine => {
                for v in 0..n {
                    buf[0] = 1;
                    digits_into(v, qs, &mut buf[1..]);
                    coords.extend_from_slice(&buf[1..]);
                    homog.extend_from_slice(&buf);
                }
            }
        }
        debug_assert_eq!(homog.len(), n * r);
        Ok(Self {
            kind,
            rank,
            field,
            n,
            coord_len,
            coords,
            homog,
            flats: (0..=r).map(|_| OnceLock::new()).collect(),
            hyperplane_masks: OnceLock::new(),
            lower: OnceLock::new(),
        })
    }

    /// PG(rank-1, q).
    pub fn projective(rank: u32, q: u32) -> Result<Self> {
        Self::build(Kind::Projective, rank, FiniteField::new(q)?)
    }

    /// AG(rank-1, q).
    pub fn affine(rank: u32, q: u32) -> Result<Self> {
        Self::build(Kind::Affine, rank, FiniteField::new(q)?)
    }

    pub fn id(&self) -> GeometryId {
        GeometryId { kind: self.kind, rank: self.rank, q: self.field.order() }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn none(&self) -> PointSet {
        PointSet::empty(self.n)
    }

    /// Canonical coordinates of point `i`.
    pub fn coords(&self, i: usize) -> &[Elem] {
        &self.coords[i * self.coord_len..(i + 1) * self.coord_len]
    }

    /// Homogeneous coordinates of point `i` (length `rank`).
    pub fn homogeneous(&self, i: usize) -> &[Elem] {
        let r = self.rank as usize;
        &self.homog[i * r..(i + 1) * r]
    }

    /// Index of the point with the given canonical coordinates. Projective
    /// input need not be normalized; the zero vector has no index.
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        if v.len() != self.coord_len {
            return None;
        }
        let q = self.order() as usize;
        match self.kind {
            Kind::Affine => Some(v.iter().fold(0, |acc, &x| acc * q + x as usize)),
            Kind::Projective => {
                let pivot = v.iter().position(|&x| x != 0)?;
                let s = self.field.inv(v[pivot])?;
                let tail_len = (v.len() - 1 - pivot) as u32;
                let offset = (q.pow(tail_len) - 1) / (q - 1);
                let tail = v[pivot + 1..]
                    .iter()
                    .fold(0, |acc, &x| acc * q + self.field.mul(x, s) as usize);
                Some(offset + tail)
            }
        }
    }

    pub fn check_set(&self, s: &PointSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(Error::GeometryMismatch);
        }
        Ok(())
    }

    pub fn check_point(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::PointOutOfRange { index: i, len: self.n });
        }
        Ok(())
    }

    fn echelon_of(&self, s: &PointSet) -> Echelon<'_> {
        let r = self.rank as usize;
        let mut e = Echelon::new(&self.field, r);
        for i in s {
            e.insert(self.homogeneous(i));
            if e.rank() == r {
                break;
            }
        }
        e
    }

    /// Matroid rank: dimension of the linear span of the homogeneous
    /// vectors. For affine geometries this is the affine dimension plus one.
    pub fn rank_of(&self, s: &PointSet) -> usize {
        self.echelon_of(s).rank()
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        if s.is_empty() {
            return self.none();
        }
        if self.n <= 64 {
            PointSet::from_mask(self.n, self.closure_bits(s.low_word()))
        } else if self.n <= HYPERPLANE_CLOSURE_LIMIT {
            let mut out = self.all();
            for h in self.hyperplanes() {
                if s.is_subset(h.members()) {
                    out.intersect_with(h.members());
                }
            }
            out
        } else {
            self.closure_linear(s)
        }
    }

    /// Every point as a bit mask. Only for geometries of at most 64 points.
    #[inline]
    pub(crate) fn full_bits(&self) -> u64 {
        debug_assert!(self.n <= 64);
        if self.n == 64 {
            !0
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Closure of a set given as a bit mask. Only for geometries of at most
    /// 64 points.
    #[inline]
    pub(crate) fn closure_bits(&self, bits: u64) -> u64 {
        debug_assert!(self.n <= 64);
        if bits == 0 {
            return 0;
        }
        let mut out = self.full_bits();
        for &h in self.hyperplane_masks() {
            if bits & !h == 0 {
                out &= h;
            }
        }
        out
    }

    /// Closure by testing every point for membership in the span of `s`.
    pub fn closure_linear(&self, s: &PointSet) -> PointSet {
        let e = self.echelon_of(s);
        if e.rank() == self.rank as usize {
            return self.all();
        }
        if e.rank() == 0 {
            return self.none();
        }
        let mut out = self.none();
        for i in 0..self.n {
            if s.contains(i) || e.contains(self.homogeneous(i)) {
                out.insert(i);
            }
        }
        out
    }

    pub fn is_flat(&self, s: &PointSet) -> bool {
        s.universe() == self.n && self.closure(s) == *s
    }

    /// The closure of `s` as a [`Flat`].
    pub fn flat(&self, s: &PointSet) -> Flat {
        let members = self.closure(s);
        let rank = self.rank_of(&members) as u32;
        Flat { members, rank }
    }

    /// Wraps `s` as a flat, failing if it is not closed.
    pub fn as_flat(&self, s: PointSet) -> Option<Flat> {
        if !self.is_flat(&s) {
            return None;
        }
        let rank = self.rank_of(&s) as u32;
        Some(Flat { members: s, rank })
    }

    fn sort_flats(flats: &mut [Flat]) {
        flats.sort_by_cached_key(|f| f.members.to_vec());
    }

    fn compute_hyperplanes(&self) -> Vec<Flat> {
        let r = self.rank as usize;
        if r == 1 {
            return vec![Flat { members: self.none(), rank: 0 }];
        }
        let duals = Geometry::build_with_cap(Kind::Projective, self.rank, self.field.clone(), usize::MAX)
            .expect("dual space of a capped geometry is enumerable");
        let f = &self.field;
        let mut out = Vec::with_capacity(duals.len());
        for a in 0..duals.len() {
            let normal = duals.homogeneous(a);
            let mut members = self.none();
            for i in 0..self.n {
                let dot = normal
                    .iter()
                    .zip(self.homogeneous(i))
                    .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                if dot == 0 {
                    members.insert(i);
                }
            }
            // the normal (1, 0, ..., 0) cuts out nothing from an affine space
            if !members.is_empty() {
                out.push(Flat { members, rank: self.rank - 1 });
            }
        }
        Self::sort_flats(&mut out);
        out
    }

    /// All rank-(r-1) flats, sorted by their member lists. Memoized.
    pub fn hyperplanes(&self) -> &[Flat] {
        self.flats_of_rank(self.rank.saturating_sub(1))
    }

    pub(crate) fn hyperplane_masks(&self) -> &[u64] {
        self.hyperplane_masks
            .get_or_init(|| self.hyperplanes().iter().map(|h| h.members.low_word()).collect())
    }

    /// All flats of rank `k`, sorted by their member lists. Memoized.
    ///
    /// Intermediate ranks are found by extending each rank-(k-1) flat by one
    /// point, so this is only meant for geometries of desk size.
    pub fn flats_of_rank(&self, k: u32) -> &[Flat] {
        if k > self.rank {
            return &[];
        }
        self.flats[k as usize].get_or_init(|| {
            if k == 0 {
                vec![Flat { members: self.none(), rank: 0 }]
            } else if k == self.rank {
                vec![Flat { members: self.all(), rank: k }]
            } else if k == self.rank - 1 {
                self.compute_hyperplanes()
            } else {
                let mut seen = std::collections::HashSet::new();
                let mut out = Vec::new();
                for lower in self.flats_of_rank(k - 1) {
                    for p in lower.members.complement().iter() {
                        let mut s = lower.members.clone();
                        s.insert(p);
                        let c = self.closure(&s);
                        if seen.insert(c.clone()) {
                            out.push(Flat { members: c, rank: k });
                        }
                    }
                }
                Self::sort_flats(&mut out);
                out
            }
        })
    }

    fn require(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongKind {
                expected: match kind {
                    Kind::Projective => "projective",
                    Kind::Affine => "affine",
                },
            });
        }
        Ok(())
    }

    /// Affine rank from the intrinsic coordinates: the dimension of the span
    /// of differences from one member, plus one.
    pub fn intrinsic_rank(&self, s: &PointSet) -> Result<usize> {
        self.require(Kind::Affine)?;
        let Some(base) = s.first() else {
            return Ok(0);
        };
        Ok(self.difference_span(base, s).rank() + 1)
    }

    /// Affine span from the intrinsic coordinates: every point whose offset
    /// from one member lies in the span of the members' offsets.
    pub fn intrinsic_closure(&self, s: &PointSet) -> Result<PointSet> {
        self.require(Kind::Affine)?;
        let Some(base) = s.first() else {
            return Ok(self.none());
        };
        let span = self.difference_span(base, s);
        let mut out = self.none();
        let mut d = [0; MAX_DIM];
        for i in 0..self.n {
            self.offset(base, i, &mut d);
            if span.contains(&d[..self.coord_len]) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    fn offset(&self, from: usize, to: usize, out: &mut [Elem]) {
        let (a, b) = (self.coords(from), self.coords(to));
        for j in 0..self.coord_len {
            out[j] = self.field.sub(b[j], a[j]);
        }
    }

    fn difference_span(&self, base: usize, s: &PointSet) -> Echelon<'_> {
        let mut e = Echelon::new(&self.field, self.coord_len);
        let mut d = [0; MAX_DIM];
        for i in s {
            self.offset(base, i, &mut d);
            e.insert(&d[..self.coord_len]);
        }
        e
    }

    fn require_hyperplane(&self, h: &PointSet) -> Result<()> {
        if h.universe() != self.n
            || h.is_empty()
            || self.rank_of(h) != self.rank as usize - 1
            || !self.is_flat(h)
        {
            return Err(Error::NotHyperplane);
        }
        Ok(())
    }

    /// The `q` pairwise disjoint translates of an affine hyperplane `h`
    /// (including `h`), ordered by smallest member.
    pub fn parallel_partition(&self, h: &PointSet) -> Result<Vec<Flat>> {
        self.require(Kind::Affine)?;
        self.require_hyperplane(h)?;
        let base = h.first().expect("hyperplane is nonempty");
        let mut covered = self.none();
        let mut classes = Vec::new();
        let mut d = [0; MAX_DIM];
        let mut v = [0; MAX_DIM];
        for p in 0..self.n {
            if covered.contains(p) {
                continue;
            }
            self.offset(base, p, &mut d);
            let mut class = self.none();
            for x in h {
                let cx = self.coords(x);
                for j in 0..self.coord_len {
                    v[j] = self.field.add(cx[j], d[j]);
                }
                class.insert(self.index_of(&v[..self.coord_len]).expect("affine coordinates"));
            }
            covered.union_with(&class);
            classes.push(Flat { members: class, rank: self.rank - 1 });
        }
        Ok(classes)
    }

    /// Crosses two parallel classes of affine hyperplanes.
    pub fn grid(&self, x: &[Flat], y: &[Flat]) -> Result<PartitionGrid> {
        self.require(Kind::Affine)?;
        for family in [x, y] {
            let mut covered = self.none();
            for h in family {
                self.require_hyperplane(h.members())?;
                if covered.intersects(h.members()) {
                    return Err(Error::NotHyperplane);
                }
                covered.union_with(h.members());
            }
            if covered != self.all() {
                return Err(Error::NotHyperplane);
            }
        }
        let mut cells = Vec::with_capacity(x.len());
        for xi in x {
            let mut row = Vec::with_capacity(y.len());
            for yj in y {
                let members = xi.members().intersection(yj.members());
                if members.is_empty() {
                    return Err(Error::ParallelFamilies);
                }
                let rank = self.rank_of(&members) as u32;
                row.push(Flat { members, rank });
            }
            cells.push(row);
        }
        Ok(PartitionGrid { x: x.to_vec(), y: y.to_vec(), cells })
    }

    /// Embeds AG(r-1, q) into PG(r-1, q) by `v ↦ (1, v)`.
    pub fn embed_affine(self: &Arc<Self>) -> Result<Embedding> {
        self.require(Kind::Affine)?;
        let projective = Arc::new(Geometry::build_with_cap(
            Kind::Projective,
            self.rank,
            self.field.clone(),
            usize::MAX,
        )?);
        // projective points with leading coordinate 0 sort first
        let offset = projective.len() - self.n;
        let point_map: Vec<usize> = (offset..projective.len()).collect();
        debug_assert!(point_map
            .iter()
            .enumerate()
            .all(|(i, &p)| projective.homogeneous(p) == self.homogeneous(i)));
        let complement = PointSet::from_indices(projective.len(), 0..offset);
        let complement = Flat { rank: self.rank - 1, members: complement };
        Ok(Embedding { affine: self.clone(), projective, point_map, complement })
    }

    /// PG(r-2, q), shared by every single-point quotient of this geometry.
    pub fn lower(&self) -> Result<&Arc<Geometry>> {
        self.require(Kind::Projective)?;
        if self.rank < 2 {
            return Err(Error::InvalidRank(self.rank));
        }
        if let Some(g) = self.lower.get() {
            return Ok(g);
        }
        let g = Geometry::build_with_cap(Kind::Projective, self.rank - 1, self.field.clone(), usize::MAX)?;
        Ok(self.lower.get_or_init(|| Arc::new(g)))
    }

    /// Contracts point `e` and simplifies: each line through `e` becomes a
    /// point of PG(r-2, q).
    pub fn quotient_by_point(&self, e: usize) -> Result<Quotient> {
        self.require(Kind::Projective)?;
        self.check_point(e)?;
        let lower = self.lower()?.clone();
        let r = self.rank as usize;
        let ev = self.homogeneous(e);
        let pivot = ev.iter().position(|&x| x == 1).expect("normalized point");
        let f = &self.field;
        let mut class_of = vec![None; self.n];
        let mut w = [0; MAX_DIM];
        for (x, slot) in class_of.iter_mut().enumerate() {
            if x == e {
                continue;
            }
            let xv = self.homogeneous(x);
            let c = xv[pivot];
            let mut k = 0;
            for j in 0..r {
                if j != pivot {
                    w[k] = f.sub(xv[j], f.mul(c, ev[j]));
                    k += 1;
                }
            }
            *slot = lower.index_of(&w[..r - 1]);
            debug_assert!(slot.is_some());
        }
        Ok(Quotient { geometry: lower, point: e, class_of })
    }
}

/// Two parallel classes of affine hyperplanes and their pairwise
/// intersections.
#[derive(Clone, Debug)]
pub struct PartitionGrid {
    x: Vec<Flat>,
    y: Vec<Flat>,
    cells: Vec<Vec<Flat>>,
}

impl PartitionGrid {
    pub fn x(&self) -> &[Flat] {
        &self.x
    }

    pub fn y(&self) -> &[Flat] {
        &self.y
    }

    /// `X_i ∩ Y_j`.
    pub fn cell(&self, i: usize, j: usize) -> &Flat {
        &self.cells[i][j]
    }

    pub fn cells(&self) -> impl Iterator<Item = &Flat> {
        self.cells.iter().flatten()
    }
}

/// AG(r-1, q) sitting inside PG(r-1, q) off its complementary hyperplane.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub affine: Arc<Geometry>,
    pub projective: Arc<Geometry>,
    point_map: Vec<usize>,
    complement: Flat,
}

impl Embedding {
    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    /// The projective hyperplane missed by the image.
    pub fn complement(&self) -> &Flat {
        &self.complement
    }

    pub fn image(&self) -> PointSet {
        self.complement.members.complement()
    }

    /// Image of an affine point set.
    pub fn push(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(self.projective.len(), s.iter().map(|i| self.point_map[i]))
    }

    /// Affine points whose image lies in `s`.
    pub fn pull(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.affine.len(),
            self.point_map.iter().enumerate().filter(|(_, &p)| s.contains(p)).map(|(i, _)| i),
        )
    }
}

/// The simplified contraction of a projective geometry by one point.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub geometry: Arc<Geometry>,
    pub point: usize,
    class_of: Vec<Option<usize>>,
}

impl Quotient {
    /// Quotient point represented by the line through the contracted point
    /// and `x`; `None` for the contracted point itself.
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.class_of[x]
    }

    /// Preimage of each quotient point.
    pub fn fibers(&self) -> Vec<PointSet> {
        let mut out = vec![PointSet::empty(self.class_of.len()); self.geometry.len()];
        for (x, c) in self.class_of.iter().enumerate() {
            if let Some(c) = c {
                out[*c].insert(x);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &Geometry, pts: &[usize]) -> PointSet {
        PointSet::from_indices(g.len(), pts.iter().copied())
    }

    #[test]
    fn point_counts() {
        assert_eq!(Geometry::projective(3, 2).unwrap().len(), 7);
        assert_eq!(Geometry::affine(3, 3).unwrap().len(), 9);
        assert_eq!(Geometry::projective(2, 4).unwrap().len(), 5);
        assert_eq!(Geometry::affine(1, 5).unwrap().len(), 1);
        assert_eq!(Geometry::projective(1, 7).unwrap().len(), 1);
    }

    #[test]
    fn cap_and_rank_errors() {
        assert!(matches!(Geometry::affine(6, 32), Err(Error::TooLarge { .. })));
        assert!(matches!(Geometry::projective(0, 2), Err(Error::InvalidRank(0))));
        let f = FiniteField::new(2).unwrap();
        assert!(Geometry::build_with_cap(Kind::Projective, 4, f, 14).is_err());
    }

    #[test]
    fn projective_points_are_normalized_and_sorted() {
        for (r, q) in [(3, 2), (3, 3), (2, 4), (4, 2), (3, 5)] {
            let g = Geometry::projective(r, q).unwrap();
            for i in 0..g.len() {
                let v = g.coords(i);
                assert_eq!(v[v.iter().position(|&x| x != 0).unwrap()], 1);
                assert_eq!(g.index_of(v), Some(i));
                if i > 0 {
                    assert!(g.coords(i - 1) < v);
                }
            }
            assert_eq!(g.rank_of(&g.all()), r as usize);
        }
    }

    #[test]
    fn projective_index_normalizes_scalar_multiples() {
        let g = Geometry::projective(3, 5).unwrap();
        let i = g.index_of(&[0, 1, 3]).unwrap();
        assert_eq!(g.index_of(&[0, 2, 1]), Some(i));
        assert_eq!(g.index_of(&[0, 0, 0]), None);
    }

    #[test]
    fn affine_points_are_sorted() {
        let g = Geometry::affine(3, 3).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.index_of(g.coords(i)), Some(i));
        }
        assert_eq!(g.coords(5), &[1, 2]);
        assert_eq!(g.rank_of(&g.all()), 3);
    }

    #[test]
    fn closure_examples() {
        let fano = Geometry::projective(3, 2).unwrap();
        assert_eq!(fano.closure(&set(&fano, &[0, 1])).len(), 3);
        let ag = Geometry::affine(3, 3).unwrap();
        assert_eq!(ag.closure(&set(&ag, &[0, 4])).len(), 3);
        for g in [&fano, &ag] {
            assert_eq!(g.closure(&set(g, &[2])), set(g, &[2]));
            assert!(g.closure(&g.none()).is_empty());
        }
    }

    #[test]
    fn rank_examples() {
        let ag = Geometry::affine(4, 2).unwrap();
        // 000, 001, 010, 100
        assert_eq!(ag.rank_of(&set(&ag, &[0, 1, 2, 4])), 4);
        let fano = Geometry::projective(3, 2).unwrap();
        assert_eq!(fano.rank_of(&fano.all()), 3);
        let ag = Geometry::affine(3, 3).unwrap();
        assert_eq!(ag.rank_of(&set(&ag, &[7])), 1);
        assert_eq!(ag.rank_of(&ag.none()), 0);
    }

    /// Brute-force hyperplane oracle: close every (r-1)-subset that is
    /// independent and deduplicate.
    fn hyperplanes_by_closure(g: &Geometry) -> Vec<Vec<usize>> {
        let n = g.len();
        let k = g.rank() as usize - 1;
        let mut found = std::collections::BTreeSet::new();
        let mut stack = vec![(0usize, Vec::<usize>::new())];
        while let Some((next, chosen)) = stack.pop() {
            if chosen.len() == k {
                let s = set(g, &chosen);
                if g.rank_of(&s) == k {
                    found.insert(g.closure_linear(&s).to_vec());
                }
                continue;
            }
            for p in next..n {
                let mut c = chosen.clone();
                c.push(p);
                stack.push((p + 1, c));
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn hyperplane_counts_match_brute_force() {
        for (g, expected) in [
            (Geometry::projective(3, 2).unwrap(), 7),
            (Geometry::affine(3, 3).unwrap(), 12),
            (Geometry::affine(4, 2).unwrap(), 14),
            (Geometry::projective(4, 2).unwrap(), 15),
            (Geometry::affine(3, 4).unwrap(), 20),
        ] {
            let listed: Vec<Vec<usize>> = g.hyperplanes().iter().map(|h| h.members().to_vec()).collect();
            assert_eq!(listed.len(), expected, "{g:?}");
            assert_eq!(listed, hyperplanes_by_closure(&g), "{g:?}");
        }
    }

    #[test]
    fn closure_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for g in [
            Geometry::projective(3, 3).unwrap(),
            Geometry::affine(4, 2).unwrap(),
            Geometry::affine(3, 5).unwrap(),
            Geometry::projective(3, 7).unwrap(),
            Geometry::affine(4, 3).unwrap(),
        ] {
            for _ in 0..200 {
                let k = rng.gen_range(0..5);
                let s = PointSet::from_indices(g.len(), (0..k).map(|_| rng.gen_range(0..g.len())));
                let c = g.closure(&s);
                assert_eq!(c, g.closure_linear(&s));
                if g.kind() == Kind::Affine {
                    assert_eq!(c, g.intrinsic_closure(&s).unwrap());
                    assert_eq!(g.rank_of(&s), g.intrinsic_rank(&s).unwrap());
                }
            }
        }
    }

    #[test]
    fn parallel_partitions() {
        let g = Geometry::affine(3, 3).unwrap();
        let h = g.hyperplanes()[0].members().clone();
        let parts = g.parallel_partition(&h).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().any(|p| *p.members() == h));
        let total: usize = parts.iter().map(|p| p.len()).sum();
        assert_eq!(total, 9);

        let g = Geometry::affine(4, 2).unwrap();
        let h = g.hyperplanes()[3].members().clone();
        let parts = g.parallel_partition(&h).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(*parts[1].members(), parts[0].members().complement());

        let g = Geometry::affine(2, 5).unwrap();
        let parts = g.parallel_partition(&set(&g, &[3])).unwrap();
        assert_eq!(parts.len(), 5);
        assert!(parts.iter().all(|p| p.len() == 1));

        assert!(matches!(g.parallel_partition(&set(&g, &[1, 2])), Err(Error::NotHyperplane)));
    }

    #[test]
    fn grid_cells() {
        let g = Geometry::affine(3, 3).unwrap();
        let hs = g.hyperplanes();
        let x = g.parallel_partition(hs[0].members()).unwrap();
        let other = hs.iter().find(|h| x.iter().all(|p| p != *h)).unwrap();
        let y = g.parallel_partition(other.members()).unwrap();
        let grid = g.grid(&x, &y).unwrap();
        assert!(grid.cells().all(|c| c.len() == 1 && c.rank() == 1));
        assert!(matches!(g.grid(&x, &x), Err(Error::ParallelFamilies)));

        let g = Geometry::affine(4, 2).unwrap();
        let hs = g.hyperplanes();
        let x = g.parallel_partition(hs[0].members()).unwrap();
        let other = hs.iter().find(|h| x.iter().all(|p| p != *h)).unwrap();
        let y = g.parallel_partition(other.members()).unwrap();
        let grid = g.grid(&x, &y).unwrap();
        let sizes: Vec<usize> = grid.cells().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2]);
    }

    #[test]
    fn embedding_examples() {
        let ag = Arc::new(Geometry::affine(3, 2).unwrap());
        let emb = ag.embed_affine().unwrap();
        assert_eq!(emb.projective.len(), 7);
        assert_eq!(emb.complement().len(), 3);
        assert_eq!(emb.image().len(), 4);
        assert!(emb.projective.is_flat(emb.complement().members()));

        let ag = Arc::new(Geometry::affine(3, 3).unwrap());
        let emb = ag.embed_affine().unwrap();
        assert_eq!(emb.complement().len(), 4);
        assert_eq!(emb.projective.len(), 13);
        for s in [set(&ag, &[0, 1, 3]), set(&ag, &[0, 4, 8]), set(&ag, &[2, 5])] {
            let img = emb.push(&s);
            assert_eq!(ag.rank_of(&s), emb.projective.rank_of(&img));
            assert_eq!(emb.pull(&img), s);
            let affine_cl = ag.closure(&s);
            let projective_cl = emb.projective.closure(&img);
            assert_eq!(emb.pull(&projective_cl), affine_cl);
        }
    }

    #[test]
    fn quotient_classes() {
        for (q, classes) in [(2, 3), (3, 4)] {
            let g = Geometry::projective(3, q).unwrap();
            for e in 0..g.len() {
                let quo = g.quotient_by_point(e).unwrap();
                assert_eq!(quo.geometry.len(), classes);
                assert_eq!(quo.class_of(e), None);
                let fibers = quo.fibers();
                let mut union = g.none();
                for fiber in &fibers {
                    assert_eq!(fiber.len(), q as usize);
                    assert!(union.is_disjoint(fiber));
                    union.union_with(fiber);
                    let mut line = fiber.clone();
                    line.insert(e);
                    assert!(g.is_flat(&line));
                    assert_eq!(g.rank_of(&line), 2);
                }
                let mut rest = g.all();
                rest.remove(e);
                assert_eq!(union, rest);
            }
        }
        assert!(Geometry::affine(3, 3).unwrap().quotient_by_point(0).is_err());
    }
}
