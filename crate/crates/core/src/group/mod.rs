//! A uniform interface over the finite groups the structure engine works with.
//!
//! Elements are plain values with a canonical form, so an element is its own
//! identifier: equality, hashing and ordering of `Elem` are equality, hashing and
//! ordering of group elements.

mod ab2;
mod perm_group;
mod spec;
mod symmetric;
mod table;

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use ab2::Ab2;
pub use perm_group::PermGroup;
pub use spec::{parse_builtin_spec, parse_group_spec, AnyGroup};
pub use symmetric::{ShapeKey, Symmetric, SymmetricKind};
pub use table::ClassTable;

/// Groups with at most this many elements may be enumerated in full.
pub const ENUMERATION_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("subgroup has more than {0} elements")]
    CapExceeded(usize),
    #[error("bad group specification {0:?}: {1}")]
    BadSpec(String, String),
    #[error("bad element {0}: {1}")]
    BadElement(String, String),
    #[error("group of order {0} is too large for this operation")]
    TooLarge(String),
}

/// Three-valued answer for checks that may exceed what can be decided exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Undecided,
        }
    }
}

/// Outcome of a generation test, with the evidence used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generation {
    pub verdict: Verdict,
    /// Order of the generated subgroup when it was computed exactly.
    #[serde(with = "crate::report::opt_big")]
    pub subgroup_order: Option<BigUint>,
    pub method: String,
}

impl Generation {
    pub fn exact(order: BigUint, group_order: &BigUint, method: &str) -> Self {
        Generation { verdict: Verdict::from_bool(&order == group_order), subgroup_order: Some(order), method: method.into() }
    }

    pub fn without_order(verdict: Verdict, method: &str) -> Self {
        Generation { verdict, subgroup_order: None, method: method.into() }
    }
}

pub trait Group: Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    /// Conjugacy-class label: equal keys exactly when the elements are conjugate.
    type Key: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    /// The specification string that rebuilds this group, e.g. `psl2:7`.
    fn spec(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn elem_order(&self, a: &Self::Elem) -> u64;
    fn order(&self) -> BigUint;
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    /// Every element in a fixed order, or `None` above [`ENUMERATION_CAP`].
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// `None` when the backend cannot label classes exactly for this group.
    fn class_key(&self, a: &Self::Elem) -> Option<Self::Key>;
    fn class_size(&self, key: &Self::Key) -> Option<BigUint>;
    fn generation(&self, gens: &[Self::Elem]) -> Generation;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, GroupError>;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    fn conjugate(&self, a: &Self::Elem, s: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(s), a), s)
    }
}

/// The subgroup generated by `gens`, by breadth-first closure under right
/// multiplication by the generators.
pub fn closure<G: Group>(g: &G, gens: &[G::Elem], cap: usize) -> Result<HashSet<G::Elem>, GroupError> {
    let id = g.identity();
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = g.mul(&x, s);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Generation decided by closure, for groups small enough to enumerate.
pub fn generation_by_closure<G: Group>(g: &G, gens: &[G::Elem]) -> Generation {
    let order = g.order();
    match closure(g, gens, ENUMERATION_CAP) {
        Ok(set) => Generation::exact(BigUint::from(set.len()), &order, "closure"),
        Err(_) => Generation::without_order(Verdict::Undecided, "closure cap exceeded"),
    }
}
