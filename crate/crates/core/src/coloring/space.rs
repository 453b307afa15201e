use crate::geometry::Geometry;
use crate::pointset::PointSet;

/// A matroid on a subset of some geometry's points, seen through its closure
/// operator. The recognizer and sequence checks only need this much.
pub trait ClosureSpace {
    /// Size of the universe point sets are drawn from.
    fn universe(&self) -> usize;

    /// Every element of the matroid.
    fn ground(&self) -> PointSet;

    fn closure(&self, s: &PointSet) -> PointSet;

    fn rank_of(&self, s: &PointSet) -> usize;

    fn is_flat(&self, s: &PointSet) -> bool {
        s.universe() == self.universe() && s.is_subset(&self.ground()) && self.closure(s) == *s
    }
}

impl ClosureSpace for Geometry {
    fn universe(&self) -> usize {
        self.len()
    }

    fn ground(&self) -> PointSet {
        self.all()
    }

    fn closure(&self, s: &PointSet) -> PointSet {
        Geometry::closure(self, s)
    }

    fn rank_of(&self, s: &PointSet) -> usize {
        Geometry::rank_of(self, s)
    }

    fn is_flat(&self, s: &PointSet) -> bool {
        Geometry::is_flat(self, s)
    }
}

/// The affine geometry left after deleting a hyperplane from a projective
/// geometry, kept in the projective point indexing.
#[derive(Debug, Clone)]
pub struct HyperplaneComplement<'g> {
    geometry: &'g Geometry,
    hyperplane: PointSet,
    ground: PointSet,
}

impl<'g> HyperplaneComplement<'g> {
    /// `hyperplane` is trusted to be a projective hyperplane of `geometry`.
    pub fn new(geometry: &'g Geometry, hyperplane: PointSet) -> Self {
        let ground = hyperplane.complement();
        Self { geometry, hyperplane, ground }
    }

    pub fn geometry(&self) -> &'g Geometry {
        self.geometry
    }

    pub fn hyperplane(&self) -> &PointSet {
        &self.hyperplane
    }
}

impl ClosureSpace for HyperplaneComplement<'_> {
    fn universe(&self) -> usize {
        self.geometry.len()
    }

    fn ground(&self) -> PointSet {
        self.ground.clone()
    }

    fn closure(&self, s: &PointSet) -> PointSet {
        let mut c = self.geometry.closure(s);
        c.difference_with(&self.hyperplane);
        c
    }

    fn rank_of(&self, s: &PointSet) -> usize {
        self.geometry.rank_of(s)
    }
}
