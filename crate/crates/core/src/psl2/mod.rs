//! PSL(2,q) as 2×2 matrices of determinant one modulo ±I, with the trace
//! machinery used to build generating triples.

mod construct;

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{divisors, gcd, prime_divisors};
use crate::gf::{order_by_descent, Fe, FieldError, FiniteField};
use crate::group::{generation_by_closure, Generation, Group, GroupError, Verdict, ENUMERATION_CAP};

pub use construct::{
    beauville_psl2, beauville_psl2p_typed, unipotent_triple, ConstructError, Construction, UnipotentTriple, MAX_CONSTRUCTION_Q,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Psl2Error {
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A matrix `[[a, b], [c, d]]` over F_q. As an element of PSL(2,q) it is kept in
/// canonical form: the first non-zero entry in the order a, b, c, d is the one of
/// `x`, `-x` with the smaller encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl Mat2 {
    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn entries(&self) -> [Fe; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Whether the characteristic polynomial `x² - αx + 1` has two, one or no roots in F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Central,
    Unipotent,
    Split,
    Nonsplit,
}

/// Conjugacy class label in PSL(2,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Psl2Key {
    Identity,
    /// The two unipotent classes for odd q: 0 when the off-diagonal parameter is a
    /// square, 1 otherwise. Always 0 for even q.
    Unipotent(u8),
    /// Semisimple classes, labelled by the smaller of the traces ±α.
    Semisimple(Fe),
}

#[derive(Clone, Debug)]
pub struct Psl2 {
    field: Arc<FiniteField>,
}

impl PartialEq for Psl2 {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
    }
}

impl Psl2 {
    pub fn new(q: u64) -> Result<Self, Psl2Error> {
        Ok(Psl2 { field: Arc::new(FiniteField::with_order(q)?) })
    }

    pub fn from_field(field: FiniteField) -> Self {
        Psl2 { field: Arc::new(field) }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    fn odd(&self) -> bool {
        self.p() != 2
    }

    /// `gcd(2, q - 1)`.
    pub fn d(&self) -> u64 {
        if self.odd() {
            2
        } else {
            1
        }
    }

    pub fn order_u64(&self) -> u64 {
        let q = self.q();
        q * (q - 1) * (q + 1) / self.d()
    }

    pub fn fe(&self, n: i64) -> Fe {
        self.field.from_int(n)
    }

    // ---- raw SL(2,q) arithmetic -------------------------------------------------

    pub fn sl_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let f = &*self.field;
        Mat2 {
            a: f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            c: f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)),
            d: f.add(f.mul(x.c, y.b), f.mul(x.d, y.d)),
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn sl_inv(&self, x: &Mat2) -> Mat2 {
        let f = &*self.field;
        Mat2 { a: x.d, b: f.neg(x.b), c: f.neg(x.c), d: x.a }
    }

    pub fn sl_neg(&self, x: &Mat2) -> Mat2 {
        let f = &*self.field;
        Mat2 { a: f.neg(x.a), b: f.neg(x.b), c: f.neg(x.c), d: f.neg(x.d) }
    }

    pub fn sl_identity(&self) -> Mat2 {
        Mat2 { a: Fe::ONE, b: Fe::ZERO, c: Fe::ZERO, d: Fe::ONE }
    }

    pub fn det(&self, x: &Mat2) -> Fe {
        let f = &*self.field;
        f.sub(f.mul(x.a, x.d), f.mul(x.b, x.c))
    }

    pub fn trace(&self, x: &Mat2) -> Fe {
        self.field.add(x.a, x.d)
    }

    pub fn sl_pow(&self, x: &Mat2, mut k: u64) -> Mat2 {
        let mut base = *x;
        let mut acc = self.sl_identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.sl_mul(&acc, &base);
            }
            base = self.sl_mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn normalize(&self, x: &Mat2) -> Mat2 {
        if !self.odd() {
            return *x;
        }
        let lead = x.entries().into_iter().find(|v| !v.is_zero()).expect("invertible matrix has a non-zero entry");
        if self.field.neg(lead) < lead {
            self.sl_neg(x)
        } else {
            *x
        }
    }

    fn is_projective_identity(&self, x: &Mat2) -> bool {
        x.b.is_zero() && x.c.is_zero() && x.a == x.d && self.field.mul(x.a, x.a) == Fe::ONE
    }

    /// Builds an element from entries, checking the determinant.
    pub fn element(&self, a: Fe, b: Fe, c: Fe, d: Fe) -> Option<Mat2> {
        let m = Mat2 { a, b, c, d };
        (self.det(&m) == Fe::ONE).then(|| self.normalize(&m))
    }

    // ---- traces and orders ------------------------------------------------------

    pub fn kind_of_trace(&self, alpha: Fe) -> ElementKind {
        match self.field.solve_monic_quadratic(self.field.neg(alpha), Fe::ONE).len() {
            2 => ElementKind::Split,
            1 => ElementKind::Unipotent,
            _ => ElementKind::Nonsplit,
        }
    }

    pub fn kind(&self, x: &Mat2) -> ElementKind {
        if self.is_projective_identity(x) {
            ElementKind::Central
        } else {
            self.kind_of_trace(self.trace(x))
        }
    }

    /// `[[0, -1], [1, α]]`, a matrix of trace α.
    pub fn companion(&self, alpha: Fe) -> Mat2 {
        Mat2 { a: Fe::ZERO, b: self.field.neg(Fe::ONE), c: Fe::ONE, d: alpha }
    }

    /// The order in PSL(2,q) of any non-central element with trace α. Trace ±2 gives
    /// `p`, the order of a non-trivial unipotent element.
    pub fn ord_of_trace(&self, alpha: Fe) -> u64 {
        if self.q() <= 1000 {
            self.ord_of_trace_by_iteration(alpha)
        } else {
            self.ord_of_trace_by_descent(alpha)
        }
    }

    pub(crate) fn ord_of_trace_by_iteration(&self, alpha: Fe) -> u64 {
        let m = self.companion(alpha);
        let mut x = m;
        let mut k = 1;
        while !self.is_projective_identity(&x) {
            x = self.sl_mul(&x, &m);
            k += 1;
        }
        k
    }

    pub(crate) fn ord_of_trace_by_descent(&self, alpha: Fe) -> u64 {
        let q = self.q();
        let n = match self.kind_of_trace(alpha) {
            ElementKind::Unipotent | ElementKind::Central => return self.p(),
            ElementKind::Split => (q - 1) / self.d(),
            ElementKind::Nonsplit => (q + 1) / self.d(),
        };
        let m = self.companion(alpha);
        order_by_descent(n, |k| self.is_projective_identity(&self.sl_pow(&m, k)))
    }

    /// All traces whose elements have projective order exactly `r`.
    pub fn traces_of_order(&self, r: u64) -> Vec<Fe> {
        let q = self.q();
        let d = self.d();
        let possible = r == self.p() || (q - 1) / d % r == 0 || (q + 1) / d % r == 0;
        if r < 2 || !possible {
            return Vec::new();
        }
        self.field.elements().filter(|&a| self.ord_of_trace(a) == r).collect()
    }

    /// `α² + β² + γ² - αβγ = 4`.
    pub fn is_singular(&self, alpha: Fe, beta: Fe, gamma: Fe) -> bool {
        let f = &*self.field;
        let sq = f.add(f.add(f.square(alpha), f.square(beta)), f.square(gamma));
        f.sub(sq, f.mul(f.mul(alpha, beta), gamma)) == self.fe(4)
    }

    /// At least two of the orders equal 2, or all three lie in `2..=5`.
    pub fn is_small_orders(l: u64, m: u64, n: u64) -> bool {
        let twos = [l, m, n].iter().filter(|&&x| x == 2).count();
        twos >= 2 || [l, m, n].iter().all(|&x| (2..=5).contains(&x))
    }

    pub fn is_small(&self, alpha: Fe, beta: Fe, gamma: Fe) -> bool {
        Psl2::is_small_orders(self.ord_of_trace(alpha), self.ord_of_trace(beta), self.ord_of_trace(gamma))
    }

    /// SL(2,q) matrices `A, B, C` with `ABC = I` and traces `α, β, γ`.
    ///
    /// `A = [[α, -1], [1, 0]]` and `B = [[λ, μ], [ν, β - λ]]`; the trace condition on
    /// `AB` fixes `ν`, and the determinant of `B` leaves a monic quadratic in `μ`.
    /// The first `λ` in encoding order with a root is used, with the smallest root.
    /// When no such `λ` exists the only solutions have `A = ±I`, which needs α = ±2.
    pub fn solve_trace_triple(&self, alpha: Fe, beta: Fe, gamma: Fe) -> (Mat2, Mat2, Mat2) {
        let f = &*self.field;
        let a = Mat2 { a: alpha, b: f.neg(Fe::ONE), c: Fe::ONE, d: Fe::ZERO };
        for lambda in f.elements() {
            let lin = f.sub(f.mul(alpha, lambda), gamma);
            let konst = f.add(f.sub(Fe::ONE, f.mul(lambda, beta)), f.square(lambda));
            if let Some(&mu) = f.solve_monic_quadratic(lin, konst).first() {
                let nu = f.add(lin, mu);
                let b = Mat2 { a: lambda, b: mu, c: nu, d: f.sub(beta, lambda) };
                let c = self.sl_inv(&self.sl_mul(&a, &b));
                debug_assert_eq!(self.det(&b), Fe::ONE);
                debug_assert_eq!(self.trace(&c), gamma);
                return (a, b, c);
            }
        }
        let sign = if alpha == self.fe(2) { Some(Fe::ONE) } else if alpha == self.fe(-2) { Some(f.neg(Fe::ONE)) } else { None };
        if let Some(sign) = sign {
            if gamma == f.mul(sign, beta) {
                let a = Mat2 { a: sign, b: Fe::ZERO, c: Fe::ZERO, d: sign };
                let b = self.companion(beta);
                return (a, b, self.sl_inv(&self.sl_mul(&a, &b)));
            }
        }
        panic!("no trace triple for ({alpha:?}, {beta:?}, {gamma:?}) over F_{}", self.q());
    }

    /// Generation of PSL(2,q) by two elements. Decided by closure for groups of at
    /// most [`ENUMERATION_CAP`] elements. Above that the answer is `Yes` only when the
    /// trace triple `(tr A, tr B, tr AB)` is neither singular nor small and, for
    /// q = p^e with e > 1, the order of `A` or `B` has a prime divisor `ℓ ≠ p` that
    /// divides no `p^{2f} - 1` with `f` a proper divisor of `e`; that rules out every
    /// proper subfield subgroup. Otherwise the answer is `Undecided`.
    pub fn generates_pair(&self, x: &Mat2, y: &Mat2) -> Generation {
        if self.order_u64() <= ENUMERATION_CAP as u64 {
            return generation_by_closure(self, &[*x, *y]);
        }
        if self.certifies_generation(x, y) {
            Generation::without_order(Verdict::Yes, "subfield certificate")
        } else {
            Generation::without_order(Verdict::Undecided, "no certificate")
        }
    }

    pub fn certifies_generation(&self, x: &Mat2, y: &Mat2) -> bool {
        let (alpha, beta, gamma) = (self.trace(x), self.trace(y), self.trace(&self.sl_mul(x, y)));
        if self.is_singular(alpha, beta, gamma) || self.is_small(alpha, beta, gamma) {
            return false;
        }
        let e = self.field.degree() as u64;
        if e == 1 {
            return true;
        }
        let p = self.p();
        let blockers: Vec<u64> = divisors(e)
            .into_iter()
            .filter(|&f| f < e)
            .map(|f| p.pow(2 * f as u32) - 1)
            .collect();
        [x, y].iter().any(|m| {
            prime_divisors(self.elem_order(m))
                .into_iter()
                .any(|l| l != p && blockers.iter().all(|&b| b % l != 0))
        })
    }

    /// An integer over a prime field, otherwise the coefficient vector in the
    /// polynomial basis, constant term first.
    fn fe_to_json(&self, a: Fe) -> Value {
        let c = self.field.coeffs(a);
        if self.field.degree() == 1 {
            json!(c[0])
        } else {
            json!(c)
        }
    }

    fn fe_from_json(&self, v: &Value) -> Result<Fe, GroupError> {
        let bad = |why: &str| GroupError::BadElement(v.to_string(), why.into());
        match v {
            Value::Number(n) if self.field.degree() == 1 => {
                let k = n.as_i64().ok_or_else(|| bad("expected an integer"))?;
                Ok(self.fe(k))
            }
            Value::Array(cs) => {
                let coeffs = cs.iter().map(|c| c.as_u64().ok_or_else(|| bad("coefficients must be integers"))).collect::<Result<Vec<_>, _>>()?;
                self.field.from_coeffs(&coeffs).map_err(|e| bad(&e.to_string()))
            }
            _ => Err(bad("expected a coefficient vector")),
        }
    }
}

impl Group for Psl2 {
    type Elem = Mat2;
    type Key = Psl2Key;

    fn spec(&self) -> String {
        format!("psl2:{}", self.q())
    }

    fn identity(&self) -> Mat2 {
        self.sl_identity()
    }

    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        self.normalize(&self.sl_mul(a, b))
    }

    fn inv(&self, a: &Mat2) -> Mat2 {
        self.normalize(&self.sl_inv(a))
    }

    fn is_identity(&self, a: &Mat2) -> bool {
        self.is_projective_identity(a)
    }

    fn elem_order(&self, a: &Mat2) -> u64 {
        if self.is_projective_identity(a) {
            1
        } else {
            self.ord_of_trace(self.trace(a))
        }
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.order_u64())
    }

    /// Uniform over SL(2,q) by decoding a uniform index: `a ≠ 0` with free `b, c`,
    /// or `a = 0` with `c = -1/b` and free `d`.
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Mat2 {
        let f = &*self.field;
        let q = self.q();
        let with_a = (q - 1) * q * q;
        let idx = rng.gen_range(0..q * (q * q - 1));
        let el = |i: u64| Fe(i as u32);
        let m = if idx < with_a {
            let (a, rest) = (el(idx % (q - 1) + 1), idx / (q - 1));
            let (b, c) = (el(rest % q), el(rest / q));
            let d = f.div(f.add(Fe::ONE, f.mul(b, c)), a).expect("a is non-zero");
            Mat2 { a, b, c, d }
        } else {
            let rest = idx - with_a;
            let b = el(rest % (q - 1) + 1);
            let d = el(rest / (q - 1));
            let c = f.neg(f.inv(b).expect("b is non-zero"));
            Mat2 { a: Fe::ZERO, b, c, d }
        };
        self.normalize(&m)
    }

    fn elements(&self) -> Option<Vec<Mat2>> {
        if self.order_u64() > ENUMERATION_CAP as u64 {
            return None;
        }
        let f = &*self.field;
        let mut out = Vec::with_capacity(self.order_u64() as usize);
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    let ds: Vec<Fe> = if a.is_zero() {
                        if f.mul(b, c) == f.neg(Fe::ONE) {
                            f.elements().collect()
                        } else {
                            Vec::new()
                        }
                    } else {
                        vec![f.div(f.add(Fe::ONE, f.mul(b, c)), a).expect("a is non-zero")]
                    };
                    for d in ds {
                        let m = Mat2 { a, b, c, d };
                        if self.normalize(&m) == m {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }

    fn class_key(&self, x: &Mat2) -> Option<Psl2Key> {
        let f = &*self.field;
        Some(match self.kind(x) {
            ElementKind::Central => Psl2Key::Identity,
            ElementKind::Unipotent => {
                if !self.odd() {
                    Psl2Key::Unipotent(0)
                } else {
                    let m = if self.trace(x) == self.fe(2) { *x } else { self.sl_neg(x) };
                    let param = if !m.b.is_zero() { m.b } else { f.neg(m.c) };
                    Psl2Key::Unipotent(u8::from(!f.is_square(param)))
                }
            }
            ElementKind::Split | ElementKind::Nonsplit => {
                let t = self.trace(x);
                Psl2Key::Semisimple(t.min(f.neg(t)))
            }
        })
    }

    fn class_size(&self, key: &Psl2Key) -> Option<BigUint> {
        let q = self.q();
        let size = match key {
            Psl2Key::Identity => 1,
            Psl2Key::Unipotent(_) => (q * q - 1) / self.d(),
            Psl2Key::Semisimple(t) => {
                let base = match self.kind_of_trace(*t) {
                    ElementKind::Split => q * (q + 1),
                    ElementKind::Nonsplit => q * (q - 1),
                    _ => return None,
                };
                if self.odd() && t.is_zero() {
                    base / 2
                } else {
                    base
                }
            }
        };
        Some(BigUint::from(size))
    }

    fn generation(&self, gens: &[Mat2]) -> Generation {
        match gens {
            [x, y] => self.generates_pair(x, y),
            _ if self.order_u64() <= ENUMERATION_CAP as u64 => generation_by_closure(self, gens),
            _ => {
                for (i, x) in gens.iter().enumerate() {
                    for y in &gens[i + 1..] {
                        if self.certifies_generation(x, y) {
                            return Generation::without_order(Verdict::Yes, "subfield certificate");
                        }
                    }
                }
                Generation::without_order(Verdict::Undecided, "no certificate")
            }
        }
    }

    fn elem_to_json(&self, x: &Mat2) -> Value {
        json!([[self.fe_to_json(x.a), self.fe_to_json(x.b)], [self.fe_to_json(x.c), self.fe_to_json(x.d)]])
    }

    fn elem_from_json(&self, v: &Value) -> Result<Mat2, GroupError> {
        let bad = |why: &str| GroupError::BadElement(v.to_string(), why.into());
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| bad("expected [[a, b], [c, d]]"))?;
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(|| bad("expected [[a, b], [c, d]]"))?;
            for x in row {
                entries.push(self.fe_from_json(x)?);
            }
        }
        self.element(entries[0], entries[1], entries[2], entries[3]).ok_or_else(|| bad("determinant is not 1"))
    }
}

/// `gcd((q-1)/d, (q+1)/d) = 1`, the arithmetic behind the coprime-order argument.
pub fn split_and_nonsplit_orders_coprime(q: u64) -> bool {
    let d = if q % 2 == 1 { 2 } else { 1 };
    gcd((q - 1) / d, (q + 1) / d) == 1
}

#[cfg(test)]
mod tests;
