//! Exact arithmetic in small finite fields GF(q), q = p^k <= 256.
//!
//! Prime fields use residue arithmetic. Extension fields are built on a
//! fixed Conway polynomial so that every run (and every implementation)
//! agrees on the multiplication table; orders without a pinned polynomial
//! are rejected rather than picking one arbitrarily.
//!
//! Elements are indices in `[0, q)`. For extension fields the index packs
//! the coefficient vector of the polynomial representative in base p:
//! `index = sum c_i * p^i`, so in GF(4) index 2 is the generator x and
//! index 3 is x + 1.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Conway polynomials, coefficients in ascending degree (monic).
const CONWAY: &[(u16, &[u8])] = &[
    (4, &[1, 1, 1]),       // x^2 + x + 1
    (8, &[1, 1, 0, 1]),    // x^3 + x + 1
    (9, &[2, 2, 1]),       // x^2 + 2x + 2
    (16, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (25, &[2, 4, 1]),      // x^2 + 4x + 2
    (27, &[1, 2, 0, 1]),   // x^3 + 2x + 1
];

/// An element of a finite field, identified by its index in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u16 {
        self.0 as u16
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u16,
    k: u32,
    q: u16,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>, // inv[0] unused
}

/// A finite field GF(q). Cheap to clone; all state is immutable and shared.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn factor_prime_power(q: u64) -> Option<(u16, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            let mut k = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p as u16, k)) } else { None };
        }
        p += 1;
    }
    Some((q as u16, 1))
}

impl FiniteField {
    /// Construct GF(q). Errors: `NotPrimePower`, `UnsupportedOrder`.
    pub fn new(q: u64) -> Result<FiniteField> {
        let (p, k) = factor_prime_power(q).ok_or(Error::NotPrimePower { q })?;
        if q > 256 {
            return Err(Error::UnsupportedOrder { q });
        }
        let q = q as u16;
        if k == 1 {
            return Ok(FiniteField(Arc::new(Self::build_prime(p))));
        }
        let poly = CONWAY
            .iter()
            .find(|(order, _)| *order == q)
            .map(|(_, c)| *c)
            .ok_or(Error::UnsupportedOrder { q: q as u64 })?;
        Ok(FiniteField(Arc::new(Self::build_extension(p, k, q, poly))))
    }

    fn build_prime(p: u16) -> Inner {
        let q = p as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = ((q - a) % q) as u8;
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u8;
                mul[a * q + b] = ((a * b) % q) as u8;
                if (a * b) % q == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Inner {
            p,
            k: 1,
            q: p,
            add,
            mul,
            neg,
            inv,
        }
    }

    fn build_extension(p: u16, k: u32, q: u16, poly: &[u8]) -> Inner {
        let qs = q as usize;
        let pu = p as usize;
        let kd = k as usize;
        let unpack = |mut i: usize| -> Vec<u8> {
            let mut c = vec![0u8; kd];
            for slot in c.iter_mut() {
                *slot = (i % pu) as u8;
                i /= pu;
            }
            c
        };
        let pack = |c: &[u8]| -> usize {
            let mut i = 0usize;
            for d in (0..kd).rev() {
                i = i * pu + c[d] as usize;
            }
            i
        };
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            let ca = unpack(a);
            let cn: Vec<u8> = ca.iter().map(|&x| ((p - x as u16) % p) as u8).collect();
            neg[a] = pack(&cn) as u8;
            for b in 0..qs {
                let cb = unpack(b);
                let cs: Vec<u8> = ca
                    .iter()
                    .zip(&cb)
                    .map(|(&x, &y)| ((x as u16 + y as u16) % p) as u8)
                    .collect();
                add[a * qs + b] = pack(&cs) as u8;
                // schoolbook product, then reduce modulo the Conway polynomial
                let mut prod = vec![0u16; 2 * kd - 1];
                for (i, &x) in ca.iter().enumerate() {
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p;
                    }
                }
                for d in (kd..prod.len()).rev() {
                    let c = prod[d];
                    if c != 0 {
                        prod[d] = 0;
                        for (j, &pc) in poly.iter().enumerate().take(kd) {
                            let idx = d - kd + j;
                            let sub = (c * pc as u16) % p;
                            prod[idx] = (prod[idx] + p - sub) % p;
                        }
                    }
                }
                let cm: Vec<u8> = prod[..kd].iter().map(|&x| x as u8).collect();
                mul[a * qs + b] = pack(&cm) as u8;
            }
        }
        for a in 1..qs {
            for b in 1..qs {
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Inner {
            p,
            k,
            q,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn order(&self) -> u16 {
        self.0.q
    }

    pub fn characteristic(&self) -> u16 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// -1, which equals 1 exactly in characteristic 2.
    pub fn minus_one(&self) -> FieldElement {
        self.neg(self.one())
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.0.q as u64 {
            Ok(FieldElement(index as u8))
        } else {
            Err(Error::ParseError {
                line: 0,
                reason: format!("element index {index} out of range for GF({})", self.0.q),
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(|i| FieldElement(i as u8))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero { q: self.0.q })
        } else {
            Ok(FieldElement(self.0.inv[a.0 as usize]))
        }
    }

    /// Parse the text form of an element: its decimal index.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let idx: u64 = s.parse().map_err(|_| Error::ParseError {
            line: 0,
            reason: format!("`{s}` is not a field element index"),
        })?;
        self.element(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn supported_small_orders() -> Vec<u64> {
        vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    }

    #[test]
    fn rejects_non_prime_powers_and_unsupported_orders() {
        assert_eq!(
            FiniteField::new(6).unwrap_err(),
            Error::NotPrimePower { q: 6 }
        );
        assert_eq!(
            FiniteField::new(0).unwrap_err(),
            Error::NotPrimePower { q: 0 }
        );
        assert_eq!(
            FiniteField::new(1).unwrap_err(),
            Error::NotPrimePower { q: 1 }
        );
        assert_eq!(
            FiniteField::new(49).unwrap_err(),
            Error::UnsupportedOrder { q: 49 }
        );
        assert_eq!(
            FiniteField::new(512).unwrap_err(),
            Error::UnsupportedOrder { q: 512 }
        );
        assert!(FiniteField::new(251).is_ok());
        assert!(FiniteField::new(27).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for q in supported_small_orders() {
            let f = FiniteField::new(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_two_self_inverse_addition() {
        for q in [2u64, 4, 8, 16] {
            let f = FiniteField::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, a), f.zero());
                assert_eq!(f.neg(a), a);
            }
        }
    }

    #[test]
    fn conway_polynomials_have_no_roots_in_base_field() {
        // Degree-2 and degree-3 polynomials are irreducible iff they have no
        // roots; for GF(16)'s quartic x^4 + x + 1 also rule out the one
        // irreducible quadratic factor square over GF(2).
        for (q, poly) in CONWAY {
            let (p, _) = factor_prime_power(*q as u64).unwrap();
            let f = FiniteField::new(p as u64).unwrap();
            for x in f.elements() {
                let mut acc = f.zero();
                let mut pow = f.one();
                for &c in poly.iter() {
                    acc = f.add(acc, f.mul(FieldElement(c), pow));
                    pow = f.mul(pow, x);
                }
                assert!(!acc.is_zero(), "root {x} of poly for GF({q})");
            }
        }
        // x^4 + x + 1 != (x^2 + x + 1)^2 = x^4 + x^2 + 1 over GF(2)
        assert_ne!(CONWAY[3].1, &[1, 0, 1, 0, 1]);
    }

    #[test]
    fn known_arithmetic_values() {
        let gf2 = FiniteField::new(2).unwrap();
        assert_eq!(gf2.add(FieldElement(1), FieldElement(1)), FieldElement(0));

        let gf5 = FiniteField::new(5).unwrap();
        assert_eq!(gf5.inv(FieldElement(2)).unwrap(), FieldElement(3));
        assert!(gf5.inv(FieldElement(0)).is_err());

        // GF(4): x * x = x + 1 in the packed index encoding (x = 2, x+1 = 3)
        let gf4 = FiniteField::new(4).unwrap();
        assert_eq!(gf4.mul(FieldElement(2), FieldElement(2)), FieldElement(3));
        assert_eq!(gf4.mul(FieldElement(2), FieldElement(3)), FieldElement(1));
    }

    #[test]
    fn element_text_round_trip() {
        let f = FiniteField::new(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_element(&a.to_string()).unwrap(), a);
        }
        assert!(f.parse_element("9").is_err());
        assert!(f.parse_element("x").is_err());
    }
}
