use std::sync::Arc;

use flatlands_core::coloring::random_sequence;
use flatlands_core::harness::{compatibility_sweep, CompatibilityInstance};
use flatlands_core::{Coloring, Error, Geometry, PointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pg(r: u32, q: u32) -> Arc<Geometry> {
    Arc::new(Geometry::projective(r, q).unwrap())
}

fn split(g: &Arc<Geometry>, h: &PointSet, green: &PointSet) -> CompatibilityInstance {
    CompatibilityInstance::new(g.clone(), h.clone(), green.difference(h), green.intersection(h)).unwrap()
}

#[test]
fn split_targets_are_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in [pg(3, 2), pg(4, 2), pg(3, 3), pg(3, 4)] {
        for _ in 0..40 {
            let seq = random_sequence(g.as_ref(), &mut rng);
            let c = Coloring::from_sequence(g.clone(), &seq).unwrap();
            for h in g.hyperplanes() {
                let inst = split(&g, h.members(), c.green());
                assert!(inst.check_direct());
                assert!(inst.check_conditions(), "{:?} off {:?}", c.green(), h.members());
            }
        }
    }
}

#[test]
fn all_green_components_are_compatible() {
    let g = pg(3, 3);
    let h = g.hyperplanes()[0].members();
    let inst = split(&g, h, &g.all());
    assert!(inst.check_direct());
    assert!(inst.check_conditions());
    assert_eq!(inst.beta(), 1);
}

#[test]
fn bad_hyperplane_coloring_is_incompatible() {
    // two green and two red points on the line: the merged coloring has a
    // two-point green line trace
    let g = pg(3, 3);
    let h = g.hyperplanes()[0].members().clone();
    let on_h: Vec<usize> = h.to_vec();
    let affine = g.all().difference(&h);
    let hg = PointSet::from_indices(g.len(), on_h[..2].iter().copied());
    // the line itself is not a target, so it is rejected as a component
    assert_eq!(
        CompatibilityInstance::new(g.clone(), h.clone(), affine.clone(), hg).unwrap_err(),
        Error::ComponentNotTarget
    );
    // one green point on the line is fine on its own but fails condition (i)
    let hg = PointSet::from_indices(g.len(), [on_h[0]]);
    let inst = CompatibilityInstance::new(g.clone(), h.clone(), affine, hg).unwrap();
    assert_eq!(inst.check_direct(), inst.check_conditions());
}

#[test]
fn instance_validation() {
    let g = pg(3, 2);
    let line = g.hyperplanes()[0].members().clone();
    let point = PointSet::from_indices(7, [line.first().unwrap()]);
    assert_eq!(
        CompatibilityInstance::new(g.clone(), point, g.none(), g.none()).unwrap_err(),
        Error::NotHyperplane
    );
    assert_eq!(
        CompatibilityInstance::new(g.clone(), line.clone(), line.clone(), g.none()).unwrap_err(),
        Error::GeometryMismatch
    );
    let a = Arc::new(Geometry::affine(3, 2).unwrap());
    assert_eq!(
        CompatibilityInstance::new(a.clone(), a.none(), a.none(), a.none()).unwrap_err(),
        Error::WrongKind { expected: "projective" }
    );
}

#[test]
fn sweep_matches_direct_recognition() {
    for g in [pg(3, 2), pg(3, 3)] {
        let sweep = compatibility_sweep(&g).unwrap();
        assert_eq!(sweep.mismatch_count, 0, "{:?}", sweep.mismatches);
        assert!(sweep.passed());
        assert!(sweep.compatible > 0 && sweep.compatible < sweep.instances);
    }
}

#[test]
fn literal_canonical_reading_has_counterexamples() {
    let g = pg(3, 2);
    let sweep = compatibility_sweep(&g).unwrap();
    assert!(sweep.canonical_only_mismatches > 0);
    assert!(sweep.fixed_sequence_mismatches >= sweep.canonical_only_mismatches);

    // a two-point affine line over an all-red hyperplane
    let h = g.hyperplanes()[0].members().clone();
    let off: Vec<usize> = g.all().difference(&h).to_vec();
    let affine = PointSet::from_indices(7, off[..2].iter().copied());
    let inst = CompatibilityInstance::new(g.clone(), h, affine, g.none()).unwrap();
    assert!(inst.check_direct());
    assert_eq!(inst.matching_index(), None);
    assert!(inst.check_conditions());
}
