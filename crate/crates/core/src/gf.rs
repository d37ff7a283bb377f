//! Exact arithmetic in finite fields F_{p^e}.
//!
//! Elements are stored as their polynomial-basis coefficient vector packed into a
//! single integer, `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Ordering elements by this
//! encoding is the lexicographic order on coefficient vectors read from the top
//! coefficient down, and every "first" or "least" choice in this crate uses it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field of size {p}^{e} exceeds the supported size 2^20")]
    Overflow { p: u64, e: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("coefficient vector {0:?} does not describe an element of the field")]
    BadCoefficients(Vec<u64>),
}

/// A field element, identified by its packed coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({})", self.0)
    }
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp/log tables relative to a primitive element; only built when e > 1.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p, self.e, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds F_{p^e} with the lexicographically least monic irreducible modulus of degree `e`.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !arith::is_prime_64(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(FieldError::Overflow { p, e })?;
        let p = p as u32;
        let q = q as u32;
        if e == 1 {
            return Ok(FiniteField { p, e, q, modulus: vec![0, 1], exp: Vec::new(), log: Vec::new() });
        }
        let modulus = least_irreducible(p, e);
        let mut field = FiniteField { p, e, q, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    /// Builds F_q from `q = p^e`.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        match arith::prime_power(q) {
            Some((p, e)) => FiniteField::new(p, e),
            None => Err(FieldError::NonPrimeCharacteristic(q)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Monic modulus, coefficients from the constant term up.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn element(&self, index: u32) -> Option<Fe> {
        (index < self.q).then_some(Fe(index))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(Fe)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut x = a.0;
        for _ in 0..self.e {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe, FieldError> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p as u64) {
            return Err(FieldError::BadCoefficients(coeffs.to_vec()));
        }
        Ok(Fe(pack(coeffs.iter().map(|&c| c as u32), self.p)))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.e == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        if self.e == 1 {
            return Some(Fe(arith::pow_mod(a.0 as u64, self.p as u64 - 2, self.p as u64) as u32));
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(Fe(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, exp: u64) -> Fe {
        if exp == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        if self.e == 1 {
            return Fe(arith::pow_mod(a.0 as u64, exp, self.p as u64) as u32);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (exp % n)) % n) as usize])
    }

    /// Least `k >= 1` with `a^k = 1`.
    pub fn multiplicative_order(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(order_by_descent(self.order() - 1, |k| self.pow(a, k) == Fe::ONE))
    }

    /// Absolute trace `a + a^p + ... + a^{p^{e-1}}`, an element of the prime field.
    pub fn absolute_trace(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut t = a;
        for _ in 0..self.e {
            acc = self.add(acc, t);
            t = self.pow(t, self.p as u64);
        }
        acc
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.p == 2 || self.pow(a, (self.order() - 1) / 2) == Fe::ONE
    }

    /// Square root of `a`, choosing the root with the smaller encoding.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        if self.p == 2 {
            // Frobenius is a bijection; a^(q/2) squares to a^q = a.
            return Some(self.pow(a, self.order() / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        let r = self.tonelli_shanks(a);
        debug_assert_eq!(self.square(r), a);
        Some(r.min(self.neg(r)))
    }

    fn tonelli_shanks(&self, a: Fe) -> Fe {
        let mut t = self.order() - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(1)
            .find(|&z| !self.is_square(z))
            .expect("odd-order field has a non-square");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t);
        let mut r = self.pow(a, (t + 1) / 2);
        while x != Fe::ONE {
            let mut i = 0;
            let mut x2 = x;
            while x2 != Fe::ONE {
                x2 = self.square(x2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            x = self.mul(x, c);
            r = self.mul(r, b);
        }
        r
    }

    /// All roots of `X^2 + bX + c`, sorted by encoding.
    pub fn solve_monic_quadratic(&self, b: Fe, c: Fe) -> Vec<Fe> {
        let mut roots = if self.p != 2 {
            let two = self.from_int(2);
            let four = self.from_int(4);
            let disc = self.sub(self.square(b), self.mul(four, c));
            match self.sqrt(disc) {
                None => Vec::new(),
                Some(r) => {
                    let half = self.inv(two).expect("2 is invertible in odd characteristic");
                    let nb = self.neg(b);
                    vec![self.mul(self.add(nb, r), half), self.mul(self.sub(nb, r), half)]
                }
            }
        } else if b.is_zero() {
            vec![self.sqrt(c).expect("every element is a square in characteristic 2")]
        } else {
            // X = bY turns the equation into Y^2 + Y + c/b^2 = 0.
            let u = self.div(c, self.square(b)).expect("b is nonzero");
            if !self.absolute_trace(u).is_zero() {
                Vec::new()
            } else {
                let y = self.artin_schreier_root(u);
                let y1 = self.add(y, Fe::ONE);
                vec![self.mul(b, y), self.mul(b, y1)]
            }
        };
        roots.sort_unstable();
        roots.dedup();
        debug_assert!(roots
            .iter()
            .all(|&x| self.add(self.add(self.square(x), self.mul(b, x)), c).is_zero()));
        roots
    }

    // Root of Y^2 + Y = u in characteristic 2, assuming Tr(u) = 0.
    fn artin_schreier_root(&self, u: Fe) -> Fe {
        let e = self.e as usize;
        if e % 2 == 1 {
            // Half-trace: sum of u^(2^(2i)) for i = 0..(e-1)/2.
            let mut acc = Fe::ZERO;
            let mut t = u;
            for _ in 0..=(e - 1) / 2 {
                acc = self.add(acc, t);
                t = self.square(self.square(t));
            }
            return acc;
        }
        let delta = self
            .elements()
            .find(|&d| self.absolute_trace(d) == Fe::ONE)
            .expect("some element has trace one");
        let mut delta_pows = Vec::with_capacity(e);
        let mut u_pows = Vec::with_capacity(e);
        let (mut d, mut w) = (delta, u);
        for _ in 0..e {
            delta_pows.push(d);
            u_pows.push(w);
            d = self.square(d);
            w = self.square(w);
        }
        let mut acc = Fe::ZERO;
        for i in 0..e - 1 {
            let inner = delta_pows[i + 1..].iter().fold(Fe::ZERO, |s, &x| self.add(s, x));
            acc = self.add(acc, self.mul(inner, u_pows[i]));
        }
        acc
    }

    /// The field F_{q^2} built as a degree-2e extension of F_p, together with an
    /// embedding of this field into it.
    pub fn quadratic_extension(&self) -> Result<QuadraticExtension, FieldError> {
        let big = FiniteField::new(self.p as u64, 2 * self.e)?;
        let q = self.order();
        let embed = if self.e == 1 {
            (0..self.q).map(Fe).collect()
        } else {
            // A root of our modulus inside the subfield {a : a^q = a} of the big field.
            let g = Fe(big.exp[1]);
            let step = big.pow(g, q + 1);
            let mut candidate = Fe::ONE;
            let mut root = None;
            for _ in 0..q - 1 {
                let value = self.modulus.iter().rev().fold(Fe::ZERO, |acc, &c| {
                    big.add(big.mul(acc, candidate), big.from_int(c as i64))
                });
                if value.is_zero() {
                    root = Some(candidate);
                    break;
                }
                candidate = big.mul(candidate, step);
            }
            let root = root.expect("modulus splits over the quadratic extension");
            let mut powers = Vec::with_capacity(self.e as usize);
            let mut t = Fe::ONE;
            for _ in 0..self.e {
                powers.push(t);
                t = big.mul(t, root);
            }
            self.elements()
                .map(|a| {
                    self.coeffs(a).iter().zip(&powers).fold(Fe::ZERO, |acc, (&c, &pw)| {
                        big.add(acc, big.mul(big.from_int(c as i64), pw))
                    })
                })
                .collect()
        };
        Ok(QuadraticExtension { field: big, embed })
    }

    fn build_tables(&mut self) {
        let p = self.p;
        let e = self.e as usize;
        let q = self.q;
        let n = (q - 1) as u64;
        let mul_slow = |a: u32, b: u32| pack(poly_mulmod(&unpack(a, p, e), &unpack(b, p, e), &self.modulus, p).into_iter(), p);
        let pow_slow = |a: u32, mut k: u64| {
            let mut acc = 1u32;
            let mut base = a;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul_slow(acc, base);
                }
                base = mul_slow(base, base);
                k >>= 1;
            }
            acc
        };
        let primes = arith::prime_divisors(n);
        let generator = (2..q)
            .find(|&g| primes.iter().all(|&l| pow_slow(g, n / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = mul_slow(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }
}

/// F_{q^2} together with the embedding F_q -> F_{q^2}, indexed by element encoding.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub field: FiniteField,
    pub embed: Vec<Fe>,
}

impl QuadraticExtension {
    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.0 as usize]
    }
}

/// Least divisor `k` of `n` with `holds(k)`, assuming `holds` is true exactly on
/// the multiples of some divisor of `n`.
pub(crate) fn order_by_descent(n: u64, holds: impl Fn(u64) -> bool) -> u64 {
    let mut k = n;
    for p in arith::prime_divisors(n) {
        while k % p == 0 && holds(k / p) {
            k /= p;
        }
    }
    k
}

fn pack(coeffs: impl DoubleEndedIterator<Item = u32>, p: u32) -> u32 {
    coeffs.rev().fold(0, |acc, c| acc * p + c)
}

fn unpack(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    for c in v.iter_mut() {
        *c = x % p;
        x /= p;
    }
    v
}

// Product of two polynomials of degree < e, reduced modulo the monic `modulus`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for d in (e..2 * e).rev() {
        let lead = prod[d];
        if lead == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate().take(e) {
            let idx = d - e + k;
            prod[idx] = (prod[idx] + p64 - lead * m as u64 % p64) % p64;
        }
        prod[d] = 0;
    }
    prod.truncate(e);
    prod.into_iter().map(|c| c as u32).collect()
}

// Remainder of `a` modulo the monic `m`, both low-to-high, over F_p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let shift = r.len() - dm;
            for (k, &c) in m.iter().enumerate().take(dm) {
                let idx = shift + k;
                r[idx] = (r[idx] + p64 - lead * c as u64 % p64) % p64;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility over F_p by trial division by every monic polynomial of degree <= deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = unpack(low as u32, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut poly = unpack(low as u32, p, e as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.order(), 7);
        assert_eq!(f7.modulus(), &[0, 1]);
        let f8 = FiniteField::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]); // x^3 + x + 1
        assert_eq!(FiniteField::new(4, 1), Err(FieldError::NonPrimeCharacteristic(4)));
        assert!(matches!(FiniteField::new(2, 21), Err(FieldError::Overflow { .. })));
        assert!(FiniteField::new(2, 20).is_ok());
    }

    #[test]
    fn least_cubic_over_f2_by_enumeration() {
        // Monic cubics over F_2 in encoding order: only x^3+x+1 and x^3+x^2+1 are irreducible.
        let irreducible: Vec<u32> =
            (0..8u32).filter(|&low| {
                let mut poly = unpack(low, 2, 3);
                poly.push(1);
                is_irreducible(&poly, 2)
            }).collect();
        assert_eq!(irreducible, vec![0b011, 0b101]);
    }

    #[test]
    fn sqrt_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.sqrt(Fe(2)), Some(Fe(3)));
        assert_eq!(f7.sqrt(Fe(3)), None);
        assert_eq!(f7.sqrt(Fe(0)), Some(Fe(0)));
    }

    #[test]
    fn quadratic_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.solve_monic_quadratic(Fe(0), f7.from_int(-2)), vec![Fe(3), Fe(4)]);
        let f8 = FiniteField::new(2, 3).unwrap();
        assert!(f8.solve_monic_quadratic(Fe(1), Fe(1)).is_empty());
        assert_eq!(f8.absolute_trace(Fe(1)), Fe(1));
        assert_eq!(f7.solve_monic_quadratic(Fe(0), Fe(0)), vec![Fe(0)]);
    }

    #[test]
    fn order_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.multiplicative_order(Fe(3)), Ok(6));
        assert_eq!(f7.multiplicative_order(Fe(1)), Ok(1));
        assert_eq!(f7.multiplicative_order(Fe(6)), Ok(2));
        assert_eq!(f7.multiplicative_order(Fe(0)), Err(FieldError::ZeroElement));
    }

    #[test]
    fn coefficient_round_trip() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in f.elements() {
            let c: Vec<u64> = f.coeffs(a).into_iter().map(u64::from).collect();
            assert_eq!(f.from_coeffs(&c), Ok(a));
        }
        assert!(f.from_coeffs(&[3, 0, 0]).is_err());
        assert!(f.from_coeffs(&[1, 0]).is_err());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for q in [4u64, 8, 9, 25, 27] {
            let f = FiniteField::with_order(q).unwrap();
            let ext = f.quadratic_extension().unwrap();
            let big = &ext.field;
            assert_eq!(big.order(), q * q);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(ext.embed(f.add(a, b)), big.add(ext.embed(a), ext.embed(b)));
                    assert_eq!(ext.embed(f.mul(a, b)), big.mul(ext.embed(a), ext.embed(b)));
                }
            }
        }
    }
}
