//! Greedy flat peeling.
//!
//! Starting from a flat `F`, repeatedly replace `F` by the closure of its red
//! part or of its green part, whichever is proper. Each peel strips a
//! monochromatic shell. The loop stops when `F` is monochromatic (accept) or
//! when both colors span `F` (reject). If both closures are proper the red
//! one is taken, which leaves the green shell outermost.

use super::sequence::NestedSequence;
use super::space::ClosureSpace;
use crate::pointset::PointSet;

/// Outcome of peeling inside one flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Peel {
    /// Canonical sequence ending at the start flat.
    Accept(NestedSequence),
    /// A flat in which both colors span.
    Reject(PointSet),
}

impl Peel {
    pub fn is_accept(&self) -> bool {
        matches!(self, Peel::Accept(_))
    }
}

/// Peels `start` (a flat of `space`) against `green`.
pub fn peel(space: &impl ClosureSpace, green: &PointSet, start: &PointSet) -> Peel {
    let mut f = start.clone();
    let mut outer: Vec<PointSet> = Vec::new();
    loop {
        let g = green.intersection(&f);
        let r = f.difference(green);
        if g.is_empty() || r.is_empty() {
            break;
        }
        let fr = space.closure(&r);
        if fr != f {
            outer.push(std::mem::replace(&mut f, fr));
            continue;
        }
        let fg = space.closure(&g);
        if fg != f {
            outer.push(std::mem::replace(&mut f, fg));
            continue;
        }
        return Peel::Reject(f);
    }
    let empty = PointSet::empty(space.universe());
    let mut flats = vec![empty.clone()];
    if !f.is_empty() {
        if !f.intersects(green) {
            flats.push(empty);
        }
        flats.push(f);
    }
    flats.extend(outer.into_iter().rev());
    Peel::Accept(NestedSequence::new(flats))
}

/// Bit-mask closure over a geometry of at most 64 points, optionally with
/// some points removed from the ground set (a deleted hyperplane).
#[derive(Clone, Copy, Debug)]
pub(crate) struct BitClosure<'a> {
    hyperplanes: &'a [u64],
    all: u64,
    keep: u64,
}

impl<'a> BitClosure<'a> {
    pub fn new(hyperplanes: &'a [u64], all: u64, keep: u64) -> Self {
        Self { hyperplanes, all, keep }
    }

    #[inline]
    pub fn close(&self, s: u64) -> u64 {
        if s == 0 {
            return 0;
        }
        let mut out = self.all;
        for &h in self.hyperplanes {
            if s & !h == 0 {
                out &= h;
            }
        }
        out & self.keep
    }

    /// Same decision as [`peel`], without building a certificate.
    #[inline]
    pub fn is_target(&self, green: u64, start: u64) -> bool {
        let mut f = start;
        loop {
            let g = green & f;
            let r = f & !green;
            if g == 0 || r == 0 {
                return true;
            }
            let fr = self.close(r);
            if fr != f {
                f = fr;
                continue;
            }
            let fg = self.close(g);
            if fg != f {
                f = fg;
                continue;
            }
            return false;
        }
    }
}
