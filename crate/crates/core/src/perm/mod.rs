//! Permutations of `{0, ..., n-1}` and the cycle-shape vocabulary used for
//! conjugacy classes of the symmetric group.
//!
//! Products are read left to right: `a.mul(&b)` applies `a` first, then `b`.

mod chain;
mod giant;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chain::StabChain;
pub use giant::{contains_alternating, generated_group_order, is_primitive, orbits, Giant};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cannot parse permutation {0:?}: {1}")]
    Parse(String, String),
    #[error("image vector is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("point {point} is outside 0..{degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("invalid cycle shape: {0}")]
    BadShape(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(PermError::PointOutOfRange { point: a, degree: n });
                }
                if touched[a] {
                    return Err(PermError::NotBijection(n));
                }
                touched[a] = true;
                images[a] = cycle[(idx + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(0 1 2)(3 4)"` or a JSON image vector such as
    /// `"[1, 2, 0, 4, 3]"`. With cycle notation the degree defaults to one more than
    /// the largest point mentioned.
    pub fn parse(s: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let t = s.trim();
        let bad = |why: &str| PermError::Parse(s.to_string(), why.to_string());
        let perm = if t.starts_with('[') {
            let images: Vec<u32> = serde_json::from_str(t).map_err(|e| bad(&e.to_string()))?;
            Permutation::from_images(images)?
        } else {
            let mut cycles = Vec::new();
            let mut rest = t;
            while !rest.is_empty() {
                let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
                let points = body[..close]
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|w| !w.is_empty())
                    .map(|w| w.parse::<usize>().map_err(|_| bad("point is not a non-negative integer")))
                    .collect::<Result<Vec<_>, _>>()?;
                if !points.is_empty() {
                    cycles.push(points);
                }
                rest = body[close + 1..].trim_start();
            }
            let needed = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
            let n = degree.unwrap_or(needed);
            if needed > n {
                return Err(PermError::PointOutOfRange { point: needed - 1, degree: n });
            }
            return Permutation::from_cycles(n, &cycles);
        };
        match degree {
            Some(n) if n != perm.degree() => Err(PermError::DegreeMismatch(n, perm.degree())),
            _ => Ok(perm),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        acc
    }

    /// `s^-1 self s`.
    pub fn conjugate_by(&self, s: &Permutation) -> Permutation {
        s.inverse().mul(self).mul(s)
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point,
    /// ordered by starting point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut out = self.cycles_with_fixed_points();
        out.retain(|c| c.len() > 1);
        out
    }

    /// Like [`Permutation::cycles`] but fixed points appear as 1-cycles.
    pub fn cycles_with_fixed_points(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.image(start);
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.image(j);
            }
            out.push(cycle);
        }
        out
    }

    /// Lengths of all cycles including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<u32> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.image(j);
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let n = self.degree();
        let cycles = self.cycle_type().len();
        if (n - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn order(&self) -> u128 {
        self.cycle_type().into_iter().fold(1u128, |acc, l| {
            let l = l as u128;
            acc / num_integer::gcd(acc, l) * l
        })
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[n={}]", self.degree())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Permutation::parse(s, None)
    }
}

/// An almost homogeneous cycle shape `(m^k, 1^f)` on `n = m k + f` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleShape {
    pub m: u32,
    pub k: u32,
    pub f: u32,
}

impl CycleShape {
    pub fn new(m: u32, k: u32, f: u32) -> Result<Self, PermError> {
        if m < 2 {
            return Err(PermError::BadShape(format!("cycle length {m} must be at least 2")));
        }
        if k < 1 {
            return Err(PermError::BadShape("at least one cycle is required".into()));
        }
        let n = m as usize * k as usize + f as usize;
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        Ok(CycleShape { m, k, f })
    }

    pub fn degree(&self) -> usize {
        (self.m * self.k + self.f) as usize
    }

    pub fn sign(&self) -> i8 {
        if (self.m - 1) % 2 == 1 && self.k % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// The cycle type as returned by [`Permutation::cycle_type`].
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut v = vec![self.m; self.k as usize];
        v.extend(std::iter::repeat(1).take(self.f as usize));
        v
    }

    /// `k` consecutive `m`-cycles on the points `0..mk`, fixing the rest.
    pub fn representative(&self) -> Permutation {
        let n = self.degree();
        let m = self.m as usize;
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in 0..self.k as usize {
            for t in 0..m {
                images[c * m + t] = (c * m + (t + 1) % m) as u32;
            }
        }
        Permutation { images }
    }

    /// A uniformly distributed element of the class: the representative conjugated
    /// by a uniformly random permutation.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut sigma: Vec<u32> = (0..self.degree() as u32).collect();
        sigma.shuffle(rng);
        let sigma = Permutation { images: sigma };
        self.representative().conjugate_by(&sigma)
    }

    /// Size of the conjugacy class in S_n, `n! / (m^k k! f!)`.
    pub fn class_size(&self) -> BigUint {
        let fact = |x: u32| (1..=x).fold(BigUint::from(1u32), |a, i| a * i);
        fact(self.m * self.k + self.f) / (BigUint::from(self.m).pow(self.k) * fact(self.k) * fact(self.f))
    }
}

impl fmt::Display for CycleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}^{}, 1^{})", self.m, self.k, self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(5).cycle_type(), vec![1, 1, 1, 1, 1]);
        assert_eq!(p("(0 1 2)(3 4)", 5).cycle_type(), vec![3, 2]);
        let shape = CycleShape::new(3, 2, 2).unwrap();
        assert_eq!(shape.representative().cycle_type(), vec![3, 3, 1, 1]);
    }

    #[test]
    fn sign_examples() {
        assert_eq!(p("(0 1)", 5).sign(), -1);
        assert_eq!(p("(0 1 2)", 5).sign(), 1);
        let shape = CycleShape::new(7, 14, 2).unwrap();
        assert_eq!(shape.sign(), 1);
        assert_eq!(shape.representative().sign(), 1);
        assert_eq!(CycleShape::new(2, 3, 0).unwrap().sign(), -1);
    }

    #[test]
    fn order_and_fixed_points() {
        let shape = CycleShape::new(7, 14, 2).unwrap();
        let r = shape.representative();
        assert_eq!(r.order(), 7);
        assert_eq!(r.fixed_point_count(), 2);
        assert_eq!(r.degree(), 100);
        assert!(r.fixed_point_count() == 2 && r.image(98) == 98 && r.image(99) == 99);
        assert_eq!(p("(0 1 2)(3 4)", 5).order(), 6);
        assert_eq!(Permutation::identity(9).fixed_point_count(), 9);
    }

    #[test]
    fn class_representative_examples() {
        assert_eq!(CycleShape::new(2, 1, 1).unwrap().representative(), p("(0 1)", 3));
        assert!(CycleShape::new(1, 3, 0).is_err());
        assert!(CycleShape::new(3, 0, 2).is_err());
    }

    #[test]
    fn parse_and_display() {
        let g = p("(0 1 2)(3 4)", 6);
        assert_eq!(g.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::parse("[1,2,0,4,3,5]", None).unwrap(), g);
        assert_eq!(Permutation::parse("(0,1,2)(3,4)", Some(6)).unwrap(), g);
        assert_eq!(Permutation::parse("()", Some(3)).unwrap(), Permutation::identity(3));
        assert!(Permutation::parse("(0 1)(1 2)", None).is_err());
        assert!(Permutation::parse("(0 7)", Some(5)).is_err());
        assert!(Permutation::parse("[0,0]", None).is_err());
        assert!(Permutation::parse("(0 x)", None).is_err());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "[1,2,0,4,3,5]");
    }

    #[test]
    fn random_class_element_is_uniform_on_the_double_transposition_class() {
        let shape = CycleShape::new(2, 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = std::collections::BTreeMap::new();
        let draws = 10_000;
        for _ in 0..draws {
            let g = shape.random_element(&mut rng);
            assert_eq!(g.cycle_type(), vec![2, 2]);
            *counts.entry(g).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 3);
        let expect = draws as f64 / 3.0;
        let sigma = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - expect).abs() < 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn random_class_element_is_deterministic_per_seed() {
        let shape = CycleShape::new(5, 3, 4).unwrap();
        let a = shape.random_element(&mut ChaCha8Rng::seed_from_u64(3));
        let b = shape.random_element(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn nontrivial_powers_keep_the_fixed_points_of_almost_homogeneous_classes() {
        for n in 2..=20u32 {
            for m in 2..=n {
                for k in 1..=n / m {
                    let shape = CycleShape::new(m, k, n - m * k).unwrap();
                    let g = shape.representative();
                    for l in 1..m {
                        assert_eq!(g.pow(l as i64).fixed_point_count(), shape.f as usize);
                    }
                }
            }
        }
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|images| Permutation::from_images(images).unwrap())
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative(a in perm_strategy(9), b in perm_strategy(9)) {
            prop_assert_eq!(a.mul(&b).sign(), a.sign() * b.sign());
        }

        #[test]
        fn inverse_composes_to_identity(a in perm_strategy(12)) {
            prop_assert!(a.mul(&a.inverse()).is_identity());
            prop_assert!(a.pow(a.order() as i64).is_identity());
        }

        #[test]
        fn cycle_notation_round_trips(a in perm_strategy(10)) {
            prop_assert_eq!(Permutation::parse(&a.to_string(), Some(10)).unwrap(), a);
        }

        #[test]
        fn random_class_element_has_the_requested_shape(m in 2u32..8, k in 1u32..6, f in 0u32..6, seed in any::<u64>()) {
            let shape = CycleShape::new(m, k, f).unwrap();
            let g = shape.random_element(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(g.cycle_type(), shape.cycle_type());
        }
    }
}
