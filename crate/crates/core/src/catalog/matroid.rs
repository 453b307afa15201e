use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::linalg::Echelon;

/// Largest ground set a [`SmallMatroid`] may have.
pub const MAX_ELEMENTS: usize = 16;

/// A matroid on `{0, …, n-1}` given by the rank of every subset. Subsets are
/// bit masks.
#[derive(Clone, PartialEq, Eq)]
pub struct SmallMatroid {
    n: usize,
    ranks: Vec<u8>,
    name: Option<String>,
}

impl fmt::Debug for SmallMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "SmallMatroid(n={}, r={})", self.n, self.rank()),
        }
    }
}

#[inline]
fn bit(e: usize) -> u32 {
    1 << e
}

impl SmallMatroid {
    /// Validates the rank axioms: `r(∅) = 0`, unit increase and (local)
    /// submodularity.
    pub fn from_rank_table(n: usize, ranks: Vec<u8>) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooLargeForOracle(n));
        }
        if ranks.len() != 1 << n {
            return Err(Error::InvalidRankTable("table length is not 2^n"));
        }
        if ranks[0] != 0 {
            return Err(Error::InvalidRankTable("empty set has nonzero rank"));
        }
        for s in 0..1u32 << n {
            let rs = ranks[s as usize];
            for a in 0..n {
                if s & bit(a) != 0 {
                    continue;
                }
                let ra = ranks[(s | bit(a)) as usize];
                if ra != rs && ra != rs + 1 {
                    return Err(Error::InvalidRankTable("adding an element changes rank by more than one"));
                }
                for b in a + 1..n {
                    if s & bit(b) != 0 {
                        continue;
                    }
                    let rb = ranks[(s | bit(b)) as usize];
                    let rab = ranks[(s | bit(a) | bit(b)) as usize];
                    if ra + rb < rab + rs {
                        return Err(Error::InvalidRankTable("rank function is not submodular"));
                    }
                }
            }
        }
        Ok(Self { n, ranks, name: None })
    }

    /// Ranks computed from a rank function on masks, then validated.
    pub fn from_rank_fn(n: usize, rank: impl Fn(u32) -> usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooLargeForOracle(n));
        }
        let ranks = (0..1u32 << n).map(|s| rank(s) as u8).collect();
        Self::from_rank_table(n, ranks)
    }

    /// The restriction of a geometry to the listed points, in that order.
    pub fn from_points(geometry: &Geometry, points: &[usize]) -> Result<Self> {
        let n = points.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLargeForOracle(n));
        }
        let r = geometry.rank() as usize;
        let mut ranks = vec![0u8; 1 << n];
        for (s, rank) in ranks.iter_mut().enumerate().skip(1) {
            let mut e = Echelon::new(geometry.field(), r);
            let mut bits = s;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                e.insert(geometry.homogeneous(points[i]));
            }
            *rank = e.rank() as u8;
        }
        debug_assert!(Self::from_rank_table(n, ranks.clone()).is_ok());
        Ok(Self { n, ranks, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Rank of the subset given as a bit mask.
    #[inline]
    pub fn rank_of(&self, s: u32) -> usize {
        self.ranks[s as usize] as usize
    }

    pub fn rank(&self) -> usize {
        self.rank_of(self.full())
    }

    pub fn closure(&self, s: u32) -> u32 {
        let r = self.rank_of(s);
        (0..self.n).filter(|&e| self.rank_of(s | bit(e)) == r).fold(s, |acc, e| acc | bit(e))
    }

    /// `U_{m,n}`.
    pub fn uniform(m: usize, n: usize) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidRankTable("uniform matroid rank exceeds its size"));
        }
        Ok(Self::from_rank_fn(n, |s| (s.count_ones() as usize).min(m))?.with_name(format!("U_{{{m},{n}}}")))
    }

    /// Elements of `self` first, then those of `other`.
    pub fn direct_sum(&self, other: &SmallMatroid) -> Result<Self> {
        let shift = self.n;
        let low = self.full();
        Self::from_rank_fn(self.n + other.n, |s| self.rank_of(s & low) + other.rank_of(s >> shift))
    }

    /// Glues `self` and `other` along `p` in `self` and `q` in `other`. The
    /// ground set is `self`'s elements (with `p` as the shared point)
    /// followed by `other`'s elements other than `q`.
    pub fn parallel_connection(&self, p: usize, other: &SmallMatroid, q: usize) -> Result<Self> {
        if p >= self.n || q >= other.n {
            return Err(Error::InvalidBasepoint);
        }
        if self.rank_of(bit(p)) == 0 || other.rank_of(bit(q)) == 0 {
            return Err(Error::InvalidBasepoint);
        }
        let n = self.n + other.n - 1;
        // element j of the tail stands for element `tail[j]` of `other`
        let tail: Vec<usize> = (0..other.n).filter(|&e| e != q).collect();
        let low = self.full();
        let split = |s: u32| -> (u32, u32) {
            let a = s & low;
            let mut b = if a & bit(p) != 0 { bit(q) } else { 0 };
            for (j, &e) in tail.iter().enumerate() {
                if s & bit(self.n + j) != 0 {
                    b |= bit(e);
                }
            }
            (a, b)
        };
        Self::from_rank_fn(n, |s| {
            let (a, b) = split(s);
            let apart = self.rank_of(a) + other.rank_of(b);
            let glued = self.rank_of(a | bit(p)) + other.rank_of(b | bit(q)) - 1;
            apart.min(glued)
        })
    }

    /// Parallel connection with the basepoint deleted.
    pub fn two_sum(&self, p: usize, other: &SmallMatroid, q: usize) -> Result<Self> {
        Ok(self.parallel_connection(p, other, q)?.delete(p))
    }

    /// Removes element `e`, renumbering the later ones down by one.
    pub fn delete(&self, e: usize) -> Self {
        assert!(e < self.n);
        let low = bit(e) - 1;
        let n = self.n - 1;
        let ranks = (0..1u32 << n)
            .map(|s| {
                let wide = (s & low) | ((s & !low) << 1);
                self.ranks[wide as usize]
            })
            .collect();
        Self { n, ranks, name: None }
    }

    /// The simple rank-3 matroid whose only dependent triples lie on the given
    /// lines.
    pub fn rank3_from_lines(n: usize, lines: &[&[usize]]) -> Result<Self> {
        let masks: Vec<u32> = lines.iter().map(|l| l.iter().fold(0, |m, &e| m | bit(e))).collect();
        if masks.iter().any(|&m| m >= 1 << n) {
            return Err(Error::InvalidRankTable("line element out of range"));
        }
        Self::from_rank_fn(n, |s| {
            let k = s.count_ones() as usize;
            if k <= 2 {
                k
            } else if masks.iter().any(|&m| s & !m == 0) {
                2
            } else {
                3
            }
        })
    }

    /// The rank-3 whirl on `a1, b1, a2, b2, a3, b3`, whose 3-point lines are
    /// `{a1,b1,a2}`, `{a2,b2,a3}` and `{a3,b3,a1}`.
    pub fn whirl3() -> Self {
        Self::rank3_from_lines(6, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]).expect("whirl rank table is valid")
    }

    /// Rank-2 flats with at least three elements.
    pub fn long_lines(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let s = bit(a) | bit(b);
                if self.rank_of(s) != 2 {
                    continue;
                }
                let line = self.closure(s);
                if line.count_ones() >= 3 && !out.contains(&line) {
                    out.push(line);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// No nonempty proper subset `A` has `r(A) + r(E - A) = r(E)`.
    pub fn is_connected(&self) -> bool {
        let full = self.full();
        let r = self.rank();
        // fixing element 0 on one side visits each split once
        (1..full).filter(|s| s & 1 == 1).all(|a| self.rank_of(a) + self.rank_of(full & !a) != r)
    }

    /// Per-subset-size histogram of ranks.
    fn profile(&self) -> Vec<u32> {
        let width = self.n + 1;
        let mut h = vec![0u32; width * width];
        for s in 0..=self.full() {
            h[s.count_ones() as usize * width + self.rank_of(s)] += 1;
        }
        h
    }

    /// Per-element histogram of `(|S|, r(S))` over subsets containing it.
    fn signatures(&self) -> Vec<Vec<u32>> {
        let width = self.n + 1;
        let mut sig = vec![vec![0u32; width * width]; self.n];
        for s in 1..=self.full() {
            let slot = s.count_ones() as usize * width + self.rank_of(s);
            let mut bits = s;
            while bits != 0 {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                sig[e][slot] += 1;
            }
        }
        sig
    }

    /// Whether some bijection of ground sets preserves every rank.
    pub fn is_isomorphic(&self, other: &SmallMatroid) -> bool {
        if self.n != other.n || self.rank() != other.rank() || self.profile() != other.profile() {
            return false;
        }
        let sa = self.signatures();
        let sb = other.signatures();
        let mut map = vec![usize::MAX; self.n];
        let mut used = 0u32;
        self.extend_map(other, &sa, &sb, &mut map, &mut used, 0)
    }

    fn extend_map(
        &self,
        other: &SmallMatroid,
        sa: &[Vec<u32>],
        sb: &[Vec<u32>],
        map: &mut [usize],
        used: &mut u32,
        k: usize,
    ) -> bool {
        if k == self.n {
            return true;
        }
        for t in 0..other.n {
            if *used & bit(t) != 0 || sa[k] != sb[t] {
                continue;
            }
            map[k] = t;
            // every subset of the mapped prefix that contains k
            let consistent = (0..bit(k)).all(|low| {
                let s = low | bit(k);
                let mut image = 0;
                let mut bits = s;
                while bits != 0 {
                    let e = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    image |= bit(map[e]);
                }
                self.rank_of(s) == other.rank_of(image)
            });
            if consistent {
                *used |= bit(t);
                if self.extend_map(other, sa, sb, map, used, k + 1) {
                    return true;
                }
                *used &= !bit(t);
            }
        }
        map[k] = usize::MAX;
        false
    }
}
