//! Table-driven arithmetic in GF(q) for prime powers q ≤ 32.
//!
//! Elements are the integers `0..q`. For a prime field the integer is the
//! residue itself; for an extension GF(p^k) the base-p digits of the integer
//! are the coefficients of a polynomial in `x` (least significant digit is
//! the constant term), reduced modulo a fixed irreducible polynomial.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 32;

/// An element of a [`FiniteField`], encoded as an index in `0..q`.
pub type Elem = u8;

/// Irreducible polynomials for the proper prime-power orders, as
/// `(q, p, k, coefficients of x^0..x^{k-1})`. The monic leading term is
/// implicit.
const MODULI: &[(u32, u32, u32, &[u8])] = &[
    (4, 2, 2, &[1, 1]),          // x^2 + x + 1
    (8, 2, 3, &[1, 1, 0]),       // x^3 + x + 1
    (9, 3, 2, &[2, 1]),          // x^2 + x + 2
    (16, 2, 4, &[1, 1, 0, 0]),   // x^4 + x + 1
    (25, 5, 2, &[2, 1]),         // x^2 + x + 2
    (27, 3, 3, &[1, 2, 0]),      // x^3 + 2x + 1
    (32, 2, 5, &[1, 0, 1, 0, 0]), // x^5 + x^2 + 1
];

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Returns `(p, k)` with `q = p^k` when `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FiniteField {
    /// Builds the arithmetic tables for GF(q).
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::OrderTooLarge(q));
        }
        let modulus: Vec<u32> = if k == 1 {
            Vec::new()
        } else {
            let (_, _, _, coeffs) = MODULI
                .iter()
                .find(|m| m.0 == q)
                .expect("every prime power up to MAX_ORDER has a modulus");
            coeffs.iter().map(|&c| c as u32).collect()
        };

        let digits = |mut a: u32| -> Vec<u32> {
            let mut d = vec![0; k as usize];
            for slot in d.iter_mut() {
                *slot = a % p;
                a /= p;
            }
            d
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum) as Elem;

                // schoolbook product, then reduce the high coefficients
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    // x^k = -(modulus low terms)
                    for (j, m) in modulus.iter().enumerate() {
                        let t = deg - k as usize + j;
                        prod[t] = (prod[t] + (p - m % p) % p * c) % p;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..k as usize]) as Elem;
            }
        }

        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).expect("additive inverse") as Elem;
            if a != 0 {
                inv[a] = (1..n)
                    .find(|&b| mul[a * n + b] == 1)
                    .expect("modulus is irreducible") as Elem;
            }
        }
        Ok(Self { q, p, k, add, mul, neg, inv })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPPORTED: &[u32] = &[
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32,
    ];

    #[test]
    fn prime_field_examples() {
        let f = FiniteField::new(5).unwrap();
        assert_eq!(f.add(2, 3), 0);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn gf4_square_of_x() {
        // x = 0b10 = 2, x + 1 = 3 under x^2 + x + 1
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(FiniteField::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(FiniteField::new(1), Err(Error::NotPrimePower(1))));
        assert!(matches!(FiniteField::new(0), Err(Error::NotPrimePower(0))));
        assert!(matches!(FiniteField::new(49), Err(Error::OrderTooLarge(49))));
        assert!(matches!(FiniteField::new(64), Err(Error::OrderTooLarge(64))));
        assert!(matches!(FiniteField::new(37), Err(Error::OrderTooLarge(37))));
    }

    #[test]
    fn supported_orders_are_exactly_the_prime_powers() {
        let found: Vec<u32> = (0..=MAX_ORDER).filter(|&q| FiniteField::new(q).is_ok()).collect();
        assert_eq!(found, SUPPORTED);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &q in SUPPORTED {
            let f = FiniteField::new(q).unwrap();
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                let mut acc = 0;
                for _ in 0..f.characteristic() {
                    acc = f.add(acc, a);
                }
                assert_eq!(acc, 0);
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        for &q in SUPPORTED {
            assert_eq!(FiniteField::new(q).unwrap(), FiniteField::new(q).unwrap());
        }
    }
}
