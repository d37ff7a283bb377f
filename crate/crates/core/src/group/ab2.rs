use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{closure, Generation, Group, GroupError, Verdict, ENUMERATION_CAP};
use crate::arith::gcd;

/// The abelian group `(Z/nZ)²` under componentwise addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ab2 {
    n: u32,
}

impl Ab2 {
    pub fn new(n: u32) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadSpec("ab2:0".into(), "n must be positive".into()));
        }
        Ok(Ab2 { n })
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn elem(&self, a: i64, b: i64) -> (u32, u32) {
        let n = self.n as i64;
        (a.rem_euclid(n) as u32, b.rem_euclid(n) as u32)
    }
}

impl Group for Ab2 {
    type Elem = (u32, u32);
    type Key = (u32, u32);

    fn spec(&self) -> String {
        format!("ab2:{}", self.n)
    }

    fn identity(&self) -> Self::Elem {
        (0, 0)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        ((a.0 + b.0) % self.n, (a.1 + b.1) % self.n)
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        ((self.n - a.0) % self.n, (self.n - a.1) % self.n)
    }

    fn elem_order(&self, a: &Self::Elem) -> u64 {
        let n = self.n as u64;
        n / gcd(gcd(a.0 as u64, a.1 as u64), n)
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.n as u64 * self.n as u64)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        (rng.gen_range(0..self.n), rng.gen_range(0..self.n))
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let n = self.n;
        if (n as u64) * (n as u64) > ENUMERATION_CAP as u64 {
            return None;
        }
        Some((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect())
    }

    fn class_key(&self, a: &Self::Elem) -> Option<Self::Key> {
        Some(*a)
    }

    fn class_size(&self, _key: &Self::Key) -> Option<BigUint> {
        Some(BigUint::from(1u32))
    }

    /// Vectors generate `(Z/nZ)²` exactly when their 2×2 minors generate the unit
    /// ideal modulo `n`.
    fn generation(&self, gens: &[Self::Elem]) -> Generation {
        let n = self.n as i64;
        let mut g = n as u64;
        for (i, u) in gens.iter().enumerate() {
            for v in &gens[i + 1..] {
                let minor = (u.0 as i64 * v.1 as i64 - u.1 as i64 * v.0 as i64).rem_euclid(n);
                g = gcd(g, minor as u64);
            }
        }
        let verdict = Verdict::from_bool(g == 1);
        match closure(self, gens, ENUMERATION_CAP) {
            Ok(set) => {
                let gen = Generation::exact(BigUint::from(set.len()), &self.order(), "closure");
                debug_assert_eq!(gen.verdict, verdict);
                gen
            }
            Err(_) => Generation::without_order(verdict, "minors"),
        }
    }

    fn elem_to_json(&self, a: &Self::Elem) -> Value {
        json!([a.0, a.1])
    }

    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, GroupError> {
        let bad = |why: &str| GroupError::BadElement(v.to_string(), why.into());
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("expected [a, b]"))?;
        let mut out = [0i64; 2];
        for (o, x) in out.iter_mut().zip(arr) {
            *o = x.as_i64().ok_or_else(|| bad("entries must be integers"))?;
        }
        Ok(self.elem(out[0], out[1]))
    }
}
