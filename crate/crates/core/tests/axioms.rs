use std::sync::{Arc, OnceLock};

use flatlands_core::coloring::{random_sequence, NestedSequence};
use flatlands_core::{Coloring, Geometry, PointSet, TargetDecision};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn geometries() -> &'static [Arc<Geometry>] {
    static ALL: OnceLock<Vec<Arc<Geometry>>> = OnceLock::new();
    ALL.get_or_init(|| {
        [
            Geometry::projective(3, 2),
            Geometry::projective(4, 2),
            Geometry::projective(3, 4),
            Geometry::projective(4, 3),
            Geometry::affine(4, 2),
            Geometry::affine(4, 3),
            Geometry::affine(3, 5),
            Geometry::affine(3, 7),
        ]
        .into_iter()
        .map(|g| Arc::new(g.unwrap()))
        .collect()
    })
}

fn subset(g: &Geometry, bits: &[bool]) -> PointSet {
    PointSet::from_indices(g.len(), (0..g.len()).filter(|&i| bits[i % bits.len()]))
}

fn sparse(g: &Geometry, picks: &[usize]) -> PointSet {
    PointSet::from_indices(g.len(), picks.iter().map(|p| p % g.len()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_extensive_monotone_idempotent(
        gi in 0..8usize,
        a in prop::collection::vec(0..200usize, 0..6),
        b in prop::collection::vec(0..200usize, 0..6),
    ) {
        let g = &geometries()[gi];
        let a = sparse(g, &a);
        let ab = a.union(&sparse(g, &b));
        let ca = g.closure(&a);
        prop_assert!(a.is_subset(&ca));
        prop_assert_eq!(g.closure(&ca), ca.clone());
        prop_assert!(ca.is_subset(&g.closure(&ab)));
        prop_assert!(g.is_flat(&ca));
        prop_assert_eq!(g.rank_of(&ca), g.rank_of(&a));
    }

    #[test]
    fn rank_is_bounded_and_submodular(
        gi in 0..8usize,
        a in prop::collection::vec(any::<bool>(), 1..40),
        b in prop::collection::vec(any::<bool>(), 1..40),
    ) {
        let g = &geometries()[gi];
        let (a, b) = (subset(g, &a), subset(g, &b));
        let r = g.rank() as usize;
        prop_assert!(g.rank_of(&a) <= a.len().min(r));
        prop_assert!(g.rank_of(&a.union(&b)) + g.rank_of(&a.intersection(&b)) <= g.rank_of(&a) + g.rank_of(&b));
    }

    #[test]
    fn sequences_round_trip(gi in 0..8usize, seed in any::<u64>()) {
        let g = &geometries()[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = random_sequence(g.as_ref(), &mut rng);
        let c = Coloring::from_sequence(g.clone(), &seq).unwrap();
        let canonical = seq.canonicalize();
        prop_assert!(canonical.is_canonical());
        prop_assert_eq!(Coloring::from_sequence(g.clone(), &canonical).unwrap(), c.clone());
        prop_assert_eq!(canonical.canonicalize(), canonical.clone());
        match c.recognize() {
            TargetDecision::Accept(cert) => {
                prop_assert!(cert.is_canonical());
                prop_assert!(c.verify_sequence(&cert));
            }
            TargetDecision::Reject(f) => prop_assert!(false, "rejected inside {:?}", f.members()),
        }
        prop_assert!(c.complement().is_target());
    }

    #[test]
    fn rejections_are_certified(gi in 0..8usize, bits in prop::collection::vec(any::<bool>(), 1..40)) {
        let g = &geometries()[gi];
        let c = Coloring::new(g.clone(), subset(g, &bits)).unwrap();
        match c.recognize() {
            TargetDecision::Accept(cert) => prop_assert!(c.verify_sequence(&cert)),
            TargetDecision::Reject(f) => {
                prop_assert!(g.is_flat(f.members()));
                prop_assert!(c.flat_color(f.members()).both_full(f.rank()));
            }
        }
    }
}

#[test]
fn empty_and_full_sequences() {
    let g = Arc::new(Geometry::projective(3, 2).unwrap());
    let red = Coloring::all_red(g.clone());
    let TargetDecision::Accept(cert) = red.recognize() else { panic!("all red is a target") };
    assert_eq!(cert, NestedSequence::new(vec![g.none(), g.none(), g.all()]));
    let TargetDecision::Accept(cert) = Coloring::all_green(g.clone()).recognize() else { panic!() };
    assert_eq!(cert, NestedSequence::new(vec![g.none(), g.all()]));
}
