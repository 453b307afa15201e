use rand::Rng;

use super::space::ClosureSpace;
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A chain of flats `∅ = F_0 ⊆ F_1 ⊆ … ⊆ F_k = E`. The green set it defines
/// is the union of the shells `F_{i+1} - F_i` over even `i`.
///
/// Construction does not validate; use [`NestedSequence::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedSequence {
    flats: Vec<PointSet>,
}

impl NestedSequence {
    pub fn new(flats: Vec<PointSet>) -> Self {
        Self { flats }
    }

    pub fn flats(&self) -> &[PointSet] {
        &self.flats
    }

    /// Index of the last flat, `k`.
    pub fn last_index(&self) -> usize {
        self.flats.len().saturating_sub(1)
    }

    pub fn ranks(&self, space: &impl ClosureSpace) -> Vec<usize> {
        self.flats.iter().map(|f| space.rank_of(f)).collect()
    }

    /// Checks that the entries are flats of `space`, start empty, end at the
    /// ground set and increase weakly.
    pub fn validate(&self, space: &impl ClosureSpace) -> Result<()> {
        let ground = space.ground();
        let Some(first) = self.flats.first() else {
            return Err(Error::NotNested(0));
        };
        for (i, f) in self.flats.iter().enumerate() {
            if f.universe() != space.universe() {
                return Err(Error::GeometryMismatch);
            }
            if !space.is_flat(f) {
                return Err(Error::NotAFlat(i));
            }
        }
        if !first.is_empty() {
            return Err(Error::NotNested(0));
        }
        for (i, pair) in self.flats.windows(2).enumerate() {
            if !pair[0].is_subset(&pair[1]) {
                return Err(Error::NotNested(i + 1));
            }
        }
        if *self.flats.last().expect("nonempty") != ground {
            return Err(Error::NotNested(self.last_index()));
        }
        Ok(())
    }

    /// Green set defined by the sequence.
    pub fn green(&self, space: &impl ClosureSpace) -> Result<PointSet> {
        self.validate(space)?;
        Ok(self.green_unchecked(space.universe()))
    }

    pub(crate) fn green_unchecked(&self, universe: usize) -> PointSet {
        let mut green = PointSet::empty(universe);
        for pair in self.flats.windows(2).step_by(2) {
            green.union_with(&pair[1].difference(&pair[0]));
        }
        green
    }

    /// Drops empty shells and merges neighbouring shells of one color, so
    /// that `F_1, …, F_k` are distinct. `F_1 = ∅` marks a red innermost
    /// shell. The defined coloring is unchanged.
    pub fn canonicalize(&self) -> NestedSequence {
        let Some(first) = self.flats.first() else {
            return self.clone();
        };
        // (outer flat of the shell, shell is green)
        let mut shells: Vec<(PointSet, bool)> = Vec::new();
        for (i, pair) in self.flats.windows(2).enumerate() {
            if pair[1] == pair[0] {
                continue;
            }
            let green = i % 2 == 0;
            match shells.last_mut() {
                Some((outer, color)) if *color == green => *outer = pair[1].clone(),
                _ => shells.push((pair[1].clone(), green)),
            }
        }
        let empty = PointSet::empty(first.universe());
        let mut flats = vec![empty.clone()];
        if let Some((_, false)) = shells.first() {
            flats.push(empty);
        }
        flats.extend(shells.into_iter().map(|(f, _)| f));
        NestedSequence { flats }
    }

    pub fn is_canonical(&self) -> bool {
        let tail = self.flats.get(1..).unwrap_or(&[]);
        self.flats.first().is_some_and(PointSet::is_empty)
            && tail.windows(2).all(|w| w[0] != w[1])
    }
}

/// A random complete flag `∅ = L_0 ⊂ L_1 ⊂ … ⊂ L_r = E`, one flat per rank.
pub fn random_flag(space: &impl ClosureSpace, rng: &mut impl Rng) -> Vec<PointSet> {
    let ground = space.ground();
    let mut current = PointSet::empty(space.universe());
    let mut flag = vec![current.clone()];
    while current != ground {
        let outside = ground.difference(&current).to_vec();
        let p = outside[rng.gen_range(0..outside.len())];
        current.insert(p);
        current = space.closure(&current);
        flag.push(current.clone());
    }
    flag
}

/// Shape of a random sequence: which intermediate flag ranks to keep and
/// whether the innermost shell is red.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceShape {
    pub ranks: Vec<usize>,
    pub red_core: bool,
}

impl SequenceShape {
    pub fn random(rank: usize, rng: &mut impl Rng) -> Self {
        let ranks = (1..rank).filter(|_| rng.gen_bool(0.5)).collect();
        Self { ranks, red_core: rng.gen_bool(0.5) }
    }

    /// Realizes the shape along `flag`.
    pub fn along(&self, flag: &[PointSet]) -> NestedSequence {
        let mut flats = vec![flag[0].clone()];
        if self.red_core {
            flats.push(flag[0].clone());
        }
        flats.extend(self.ranks.iter().map(|&k| flag[k].clone()));
        flats.push(flag.last().expect("flag reaches the ground set").clone());
        NestedSequence { flats }
    }
}

/// A random nested sequence: a random shape laid along a random flag.
pub fn random_sequence(space: &impl ClosureSpace, rng: &mut impl Rng) -> NestedSequence {
    let flag = random_flag(space, rng);
    SequenceShape::random(flag.len() - 1, rng).along(&flag)
}

/// Every canonical sequence defining the coloring `green` of `space`.
/// `flats` must list every flat of `space` (in any order).
///
/// Canonical sequences need not be unique: in a small affine geometry a
/// lone green point can be its own green shell or sit on a line above a red
/// point.
pub fn canonical_sequences(space: &impl ClosureSpace, flats: &[PointSet], green: &PointSet) -> Vec<NestedSequence> {
    nested_sequences(space, flats, green, 0)
}

/// Like [`canonical_sequences`], but also allowing up to `repeats` empty
/// shells (a flat listed twice) after the initial `F_1 = ∅`.
pub fn nested_sequences(
    space: &impl ClosureSpace,
    flats: &[PointSet],
    green: &PointSet,
    repeats: usize,
) -> Vec<NestedSequence> {
    let ground = space.ground();
    let empty = PointSet::empty(space.universe());
    let mut out = Vec::new();
    // (chain so far, colour of the next shell is green, repeats left)
    let mut stack = vec![(vec![empty.clone()], true, repeats), (vec![empty.clone(), empty], false, repeats)];
    while let Some((chain, next_green, left)) = stack.pop() {
        let top = chain.last().expect("chains start at the empty flat");
        if *top == ground && chain.len() > 1 {
            out.push(NestedSequence { flats: chain });
            continue;
        }
        if left > 0 && chain.len() > 1 {
            let mut longer = chain.clone();
            longer.push(top.clone());
            stack.push((longer, !next_green, left - 1));
        }
        for f in flats {
            if f.len() <= top.len() || !top.is_subset(f) {
                continue;
            }
            let shell = f.difference(top);
            let mono = if next_green { shell.is_subset(green) } else { shell.is_disjoint(green) };
            if mono {
                let mut longer = chain.clone();
                longer.push(f.clone());
                stack.push((longer, !next_green, left));
            }
        }
    }
    out.sort_by(|a, b| {
        a.flats
            .len()
            .cmp(&b.flats.len())
            .then_with(|| a.flats.iter().map(PointSet::to_vec).cmp(b.flats.iter().map(PointSet::to_vec)))
    });
    out
}
