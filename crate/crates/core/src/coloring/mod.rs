//! Green/red colorings of a geometry, targets and their recognition.

mod recognize;
mod sequence;
mod space;

use std::sync::Arc;

pub(crate) use recognize::BitClosure;
pub use recognize::{peel, Peel};
pub use sequence::{canonical_sequences, nested_sequences, random_flag, random_sequence, NestedSequence, SequenceShape};
pub use space::{ClosureSpace, HyperplaneComplement};

use crate::catalog::SmallMatroid;
use crate::error::{Error, Result};
use crate::geometry::{Embedding, Flat, Geometry, Kind};
use crate::pointset::PointSet;

/// Largest green flat [`Coloring::induced_restriction`] will turn into a
/// rank table.
pub const RESTRICTION_LIMIT: usize = 8;

/// A partition of a geometry's points into green and red.
#[derive(Clone, Debug)]
pub struct Coloring {
    geometry: Arc<Geometry>,
    green: PointSet,
}

impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        self.geometry.id() == other.geometry.id() && self.green == other.green
    }
}

impl Eq for Coloring {}

/// Result of target recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetDecision {
    /// The canonical sequence defining the coloring.
    Accept(NestedSequence),
    /// A flat inside which both colors span.
    Reject(Flat),
}

impl TargetDecision {
    pub fn is_accept(&self) -> bool {
        matches!(self, TargetDecision::Accept(_))
    }
}

/// How the two colors sit inside a flat.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatColor {
    /// The rank-0 flat.
    Empty,
    /// Green spans the flat and red does not.
    Green,
    /// Red spans the flat and green does not.
    Red,
    /// Both colors are flats of corank one.
    HalfHalf,
    Mixed { green_rank: u32, red_rank: u32 },
}

impl FlatColor {
    /// Both colors span the flat.
    pub fn both_full(self, rank: u32) -> bool {
        matches!(self, FlatColor::Mixed { green_rank, red_rank } if green_rank == rank && red_rank == rank)
    }
}

impl Coloring {
    pub fn new(geometry: Arc<Geometry>, green: PointSet) -> Result<Self> {
        geometry.check_set(&green)?;
        Ok(Self { geometry, green })
    }

    pub fn from_indices(geometry: Arc<Geometry>, green: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = geometry.none();
        for i in green {
            geometry.check_point(i)?;
            set.insert(i);
        }
        Ok(Self { geometry, green: set })
    }

    pub fn all_green(geometry: Arc<Geometry>) -> Self {
        let green = geometry.all();
        Self { geometry, green }
    }

    pub fn all_red(geometry: Arc<Geometry>) -> Self {
        let green = geometry.none();
        Self { geometry, green }
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn green(&self) -> &PointSet {
        &self.green
    }

    pub fn red(&self) -> PointSet {
        self.green.complement()
    }

    /// Swaps the colors.
    pub fn complement(&self) -> Self {
        Self { geometry: self.geometry.clone(), green: self.red() }
    }

    /// The green set defined by `seq`.
    pub fn from_sequence(geometry: Arc<Geometry>, seq: &NestedSequence) -> Result<Self> {
        let green = seq.green(geometry.as_ref())?;
        Ok(Self { geometry, green })
    }

    pub fn recognize(&self) -> TargetDecision {
        self.decide(&self.geometry.all())
    }

    /// Recognizes the restriction of the coloring to the flat `f`.
    pub fn recognize_within(&self, f: &PointSet) -> Result<TargetDecision> {
        if !self.geometry.is_flat(f) {
            return Err(Error::NotAFlat(0));
        }
        Ok(self.decide(f))
    }

    fn decide(&self, start: &PointSet) -> TargetDecision {
        match peel(self.geometry.as_ref(), &self.green, start) {
            Peel::Accept(seq) => TargetDecision::Accept(seq),
            Peel::Reject(f) => TargetDecision::Reject(self.geometry.flat(&f)),
        }
    }

    /// Same answer as [`Coloring::recognize`], without a certificate.
    pub fn is_target(&self) -> bool {
        self.is_target_within(&self.geometry.all())
    }

    /// `f` is trusted to be a flat.
    pub fn is_target_within(&self, f: &PointSet) -> bool {
        let g = self.geometry.as_ref();
        if g.len() <= 64 {
            BitClosure::new(g.hyperplane_masks(), g.full_bits(), g.full_bits())
                .is_target(self.green.low_word(), f.low_word())
        } else {
            matches!(peel(g, &self.green, f), Peel::Accept(_))
        }
    }

    /// True iff `seq` is a valid nested sequence defining exactly this
    /// coloring.
    pub fn verify_sequence(&self, seq: &NestedSequence) -> bool {
        seq.green(self.geometry.as_ref()).is_ok_and(|g| g == self.green)
    }

    pub fn flat_color(&self, f: &PointSet) -> FlatColor {
        let geo = &self.geometry;
        let rank = geo.rank_of(f) as u32;
        if rank == 0 {
            return FlatColor::Empty;
        }
        let g = self.green.intersection(f);
        let r = f.difference(&self.green);
        let gr = geo.rank_of(&g) as u32;
        let rr = geo.rank_of(&r) as u32;
        if gr == rank && rr < rank {
            FlatColor::Green
        } else if rr == rank && gr < rank {
            FlatColor::Red
        } else if gr + 1 == rank && rr + 1 == rank && geo.is_flat(&g) && geo.is_flat(&r) {
            FlatColor::HalfHalf
        } else {
            FlatColor::Mixed { green_rank: gr, red_rank: rr }
        }
    }

    /// Rank table of the green points in the closure of `s`.
    pub fn induced_restriction(&self, s: &PointSet) -> Result<SmallMatroid> {
        self.geometry.check_set(s)?;
        if let Some(p) = s.difference(&self.green).first() {
            return Err(Error::NotGreen(p));
        }
        let ground = self.geometry.closure(s).intersection(&self.green);
        if ground.len() > RESTRICTION_LIMIT {
            return Err(Error::TooLargeForOracle(ground.len()));
        }
        SmallMatroid::from_points(&self.geometry, &ground.to_vec())
    }

    /// Rank table of the whole green matroid.
    pub fn green_matroid(&self) -> Result<SmallMatroid> {
        SmallMatroid::from_points(&self.geometry, &self.green.to_vec())
    }

    /// Contracts the green point `e` and simplifies. A quotient point is
    /// green iff its parallel class has a green point.
    pub fn contract_point(&self, e: usize) -> Result<Coloring> {
        let quotient = self.geometry.quotient_by_point(e)?;
        if !self.green.contains(e) {
            return Err(Error::RedContraction(e));
        }
        let mut green = quotient.geometry.none();
        for x in &self.green {
            if let Some(c) = quotient.class_of(x) {
                green.insert(c);
            }
        }
        Ok(Coloring { geometry: quotient.geometry, green })
    }

    /// Whether the coloring left on the complement of the projective
    /// hyperplane `h` is an affine target.
    pub fn is_target_off(&self, h: &PointSet) -> Result<bool> {
        self.geometry.check_set(h)?;
        if self.geometry.kind() != Kind::Projective
            || self.geometry.rank_of(h) + 1 != self.geometry.rank() as usize
            || !self.geometry.is_flat(h)
        {
            return Err(Error::NotHyperplane);
        }
        let space = HyperplaneComplement::new(&self.geometry, h.clone());
        Ok(matches!(peel(&space, &self.green, &space.ground()), Peel::Accept(_)))
    }

    /// For an affine target: the projective coloring defined by the
    /// projective closures of its canonical sequence. `None` if this
    /// coloring is not a target.
    pub fn standard_projective_target(&self, embedding: &Embedding) -> Result<Option<Coloring>> {
        if embedding.affine.id() != self.geometry.id() {
            return Err(Error::GeometryMismatch);
        }
        let TargetDecision::Accept(seq) = self.recognize() else {
            return Ok(None);
        };
        let pg = &embedding.projective;
        let lifted: Vec<PointSet> = seq.flats().iter().map(|f| pg.closure(&embedding.push(f))).collect();
        let seq = NestedSequence::new(lifted);
        Ok(Some(Coloring::from_sequence(pg.clone(), &seq)?))
    }

    /// Pulls a projective coloring back along an embedding.
    pub fn restrict_to_affine(&self, embedding: &Embedding) -> Result<Coloring> {
        if embedding.projective.id() != self.geometry.id() {
            return Err(Error::GeometryMismatch);
        }
        Ok(Coloring { geometry: embedding.affine.clone(), green: embedding.pull(&self.green) })
    }
}
