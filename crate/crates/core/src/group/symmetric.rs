use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Generation, Group, GroupError, Verdict, ENUMERATION_CAP};
use crate::perm::{contains_alternating, Giant, Permutation, StabChain, MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricKind {
    Alternating,
    Symmetric,
}

/// The natural permutation representation of A_n or S_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetric {
    n: usize,
    kind: SymmetricKind,
}

/// Cycle type, plus which of the two A_n-classes the element lies in when the
/// S_n-class splits (all cycle lengths distinct and odd). `half` is 0 otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShapeKey {
    pub cycle_type: Vec<u32>,
    pub half: u8,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// Order of the S_n-centralizer of an element with this cycle type.
fn centralizer_order(cycle_type: &[u32]) -> BigUint {
    let mut z = BigUint::from(1u32);
    let mut i = 0;
    while i < cycle_type.len() {
        let l = cycle_type[i];
        let mut j = i;
        while j < cycle_type.len() && cycle_type[j] == l {
            j += 1;
        }
        z *= BigUint::from(l).pow((j - i) as u32) * factorial(j - i);
        i = j;
    }
    z
}

pub(crate) fn splits_in_alternating(cycle_type: &[u32]) -> bool {
    cycle_type.iter().all(|l| l % 2 == 1) && cycle_type.windows(2).all(|w| w[0] != w[1])
}

/// Parity of the permutation carrying the canonical representative (cycles sorted
/// by decreasing length on consecutive points) onto `g`, with each cycle of `g`
/// started at its least point. Only meaningful when the class splits.
fn half_of(g: &Permutation) -> u8 {
    let mut cycles: Vec<Vec<usize>> = g.cycles_with_fixed_points();
    cycles.sort_by(|a, b| b.len().cmp(&a.len()));
    let images: Vec<u32> = cycles.into_iter().flatten().map(|x| x as u32).collect();
    let sigma = Permutation::from_images(images).expect("cycles partition the points");
    u8::from(sigma.sign() == -1)
}

impl Symmetric {
    pub fn new(n: usize, kind: SymmetricKind) -> Result<Self, GroupError> {
        if n == 0 || n > MAX_DEGREE {
            return Err(GroupError::BadSpec(format!("{n}"), format!("degree must lie in 1..={MAX_DEGREE}")));
        }
        Ok(Symmetric { n, kind })
    }

    pub fn alternating(n: usize) -> Result<Self, GroupError> {
        Symmetric::new(n, SymmetricKind::Alternating)
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        Symmetric::new(n, SymmetricKind::Symmetric)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SymmetricKind {
        self.kind
    }

    fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && (self.kind == SymmetricKind::Symmetric || g.sign() == 1)
    }
}

impl Group for Symmetric {
    type Elem = Permutation;
    type Key = ShapeKey;

    fn spec(&self) -> String {
        match self.kind {
            SymmetricKind::Alternating => format!("an:{}", self.n),
            SymmetricKind::Symmetric => format!("sn:{}", self.n),
        }
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.n)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.mul(b)
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn elem_order(&self, a: &Permutation) -> u64 {
        a.order() as u64
    }

    fn order(&self) -> BigUint {
        let full = factorial(self.n);
        match self.kind {
            SymmetricKind::Alternating if self.n >= 2 => full / 2u32,
            _ => full,
        }
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Permutation {
        let mut images: Vec<u32> = (0..self.n as u32).collect();
        images.shuffle(rng);
        let mut g = Permutation::from_images(images).expect("shuffle is a bijection");
        if self.kind == SymmetricKind::Alternating && g.sign() == -1 {
            let mut images = g.images().to_vec();
            images.swap(0, 1);
            g = Permutation::from_images(images).expect("swap keeps a bijection");
        }
        g
    }

    fn elements(&self) -> Option<Vec<Permutation>> {
        if self.order() > BigUint::from(ENUMERATION_CAP) {
            return None;
        }
        let mut out = Vec::new();
        let mut images: Vec<u32> = (0..self.n as u32).collect();
        loop {
            let g = Permutation::from_images(images.clone()).expect("permutation of 0..n");
            if self.contains(&g) {
                out.push(g);
            }
            if !next_permutation(&mut images) {
                break;
            }
        }
        Some(out)
    }

    fn class_key(&self, a: &Permutation) -> Option<ShapeKey> {
        let cycle_type = a.cycle_type();
        let half = if self.kind == SymmetricKind::Alternating && splits_in_alternating(&cycle_type) {
            half_of(a)
        } else {
            0
        };
        Some(ShapeKey { cycle_type, half })
    }

    fn class_size(&self, key: &ShapeKey) -> Option<BigUint> {
        if key.cycle_type.iter().map(|&l| l as usize).sum::<usize>() != self.n {
            return None;
        }
        let size = factorial(self.n) / centralizer_order(&key.cycle_type);
        match self.kind {
            SymmetricKind::Symmetric => Some(size),
            SymmetricKind::Alternating => {
                let odd = key.cycle_type.iter().filter(|&&l| l % 2 == 0).count() % 2 == 1;
                if odd {
                    None
                } else if splits_in_alternating(&key.cycle_type) && self.n > 1 {
                    Some(size / 2u32)
                } else {
                    Some(size)
                }
            }
        }
    }

    fn generation(&self, gens: &[Permutation]) -> Generation {
        let order = self.order();
        if self.n <= 12 {
            let sub = StabChain::new(self.n, gens).order();
            return Generation::exact(sub, &order, "stabilizer chain");
        }
        let target = match self.kind {
            SymmetricKind::Alternating => Giant::Alternating,
            SymmetricKind::Symmetric => Giant::Symmetric,
        };
        match contains_alternating(gens, self.n) {
            Giant::Proper => Generation::without_order(Verdict::No, "giant test"),
            found if found == target => Generation::exact(order.clone(), &order, "giant test"),
            Giant::Alternating => Generation::exact(order.clone() / 2u32, &order, "giant test"),
            Giant::Symmetric => Generation::without_order(Verdict::No, "generators leave the group"),
        }
    }

    fn elem_to_json(&self, a: &Permutation) -> Value {
        Value::String(a.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Permutation, GroupError> {
        let g = permutation_from_json(v, self.n)?;
        if !self.contains(&g) {
            return Err(GroupError::BadElement(v.to_string(), format!("not an element of {}", self.spec())));
        }
        Ok(g)
    }
}

/// Accepts cycle notation or an image vector, either as a JSON string or (for the
/// image vector) as a JSON array.
pub(crate) fn permutation_from_json(v: &Value, n: usize) -> Result<Permutation, GroupError> {
    let bad = |why: String| GroupError::BadElement(v.to_string(), why);
    match v {
        Value::String(s) => Permutation::parse(s, Some(n)).map_err(|e| bad(e.to_string())),
        Value::Array(_) => Permutation::parse(&v.to_string(), Some(n)).map_err(|e| bad(e.to_string())),
        _ => Err(bad("expected cycle notation or an image vector".into())),
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
