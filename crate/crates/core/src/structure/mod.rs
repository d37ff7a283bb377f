//! Spherical systems of generators, Σ-sets, and verification of Beauville and
//! ramification structures.

mod invariants;
pub mod search;

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{gcd, lcm};
use crate::group::{Generation, Group, GroupError, Verdict};
use crate::report::big_to_json;

pub use invariants::{branching_sum, genus_from_type, is_hyperbolic, surface_invariants, InvariantError, SurfaceInvariants};
pub use search::{
    exhaustive_beauville_search, hom_census, hom_census_sampled, random_search, random_search_typed, Census, ClassSpec,
    SampledCensus, SearchError, SearchOutcome, CENSUS_CAP, EXHAUSTIVE_CAP, EXHAUSTIVE_FILTERED_CAP, SEARCH_SHARDS,
};

/// Elements whose order exceeds this are not expanded into their powers.
pub const MAX_POWER_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{0} has no exact conjugacy-class labels; Σ-sets cannot be formed")]
    NoClassKeys(String),
    #[error("element order {0} is too large to enumerate powers")]
    OrderTooLarge(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed structure: {0}")]
    Malformed(String),
}

/// A pair of tuples `(T₁, T₂)`; each tuple lists every element, so a triple
/// `(x, y, z)` carries `z = (xy)⁻¹` explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure<E> {
    pub t1: Vec<E>,
    pub t2: Vec<E>,
}

impl<E: Clone> Structure<E> {
    /// The structure `(x₁, y₁; x₂, y₂)` with `z_i = (x_i y_i)⁻¹` filled in.
    pub fn from_quadruple<G: Group<Elem = E>>(g: &G, x1: &E, y1: &E, x2: &E, y2: &E) -> Self {
        Structure { t1: complete_triple(g, x1, y1), t2: complete_triple(g, x2, y2) }
    }

    pub fn tuples(&self) -> [&Vec<E>; 2] {
        [&self.t1, &self.t2]
    }
}

pub fn complete_triple<G: Group>(g: &G, x: &G::Elem, y: &G::Elem) -> Vec<G::Elem> {
    vec![x.clone(), y.clone(), g.inv(&g.mul(x, y))]
}

pub fn type_of<G: Group>(g: &G, tuple: &[G::Elem]) -> Vec<u64> {
    tuple.iter().map(|x| g.elem_order(x)).collect()
}

pub fn product<G: Group>(g: &G, tuple: &[G::Elem]) -> G::Elem {
    tuple.iter().fold(g.identity(), |acc, x| g.mul(&acc, x))
}

/// Class labels of every power `x^j`, `j >= 0`, of every entry. Includes the
/// identity's label.
pub fn sigma_keys<G: Group>(g: &G, tuple: &[G::Elem]) -> Result<BTreeSet<G::Key>, StructureError> {
    let no_keys = || StructureError::NoClassKeys(g.spec());
    let mut keys = BTreeSet::new();
    keys.insert(g.class_key(&g.identity()).ok_or_else(no_keys)?);
    for x in tuple {
        let m = g.elem_order(x);
        if m > MAX_POWER_ORDER {
            return Err(StructureError::OrderTooLarge(m));
        }
        let mut p = x.clone();
        for _ in 1..m {
            keys.insert(g.class_key(&p).ok_or_else(no_keys)?);
            p = g.mul(&p, x);
        }
    }
    Ok(keys)
}

/// Σ(T) as a set of elements: every conjugate of every power of every entry.
/// Needs a full enumeration of the group.
pub fn sigma_set<G: Group>(g: &G, tuple: &[G::Elem]) -> Result<HashSet<G::Elem>, StructureError> {
    let keys = sigma_keys(g, tuple)?;
    let els = g.elements().ok_or_else(|| GroupError::TooLarge(g.order().to_string()))?;
    Ok(els.into_iter().filter(|x| g.class_key(x).is_some_and(|k| keys.contains(&k))).collect())
}

/// |Σ(T)| from class sizes, without enumerating the group.
pub fn sigma_size<G: Group>(g: &G, keys: &BTreeSet<G::Key>) -> Option<BigUint> {
    keys.iter().map(|k| g.class_size(k)).sum()
}

/// `Σ(T₁) ∩ Σ(T₂) = {1}`. Without class labels the answer is `Yes` when the orders
/// appearing in the two tuples are coprime and `Undecided` otherwise.
pub fn is_disjoint<G: Group>(g: &G, t1: &[G::Elem], t2: &[G::Elem]) -> Verdict {
    match (sigma_keys(g, t1), sigma_keys(g, t2)) {
        (Ok(a), Ok(b)) => Verdict::from_bool(keys_disjoint(g, &a, &b)),
        _ => {
            let l1 = t1.iter().fold(1, |acc, x| lcm(acc, g.elem_order(x)));
            let l2 = t2.iter().fold(1, |acc, x| lcm(acc, g.elem_order(x)));
            if gcd(l1, l2) == 1 {
                Verdict::Yes
            } else {
                Verdict::Undecided
            }
        }
    }
}

pub fn keys_disjoint<G: Group>(g: &G, a: &BTreeSet<G::Key>, b: &BTreeSet<G::Key>) -> bool {
    let id = g.class_key(&g.identity());
    a.intersection(b).all(|k| Some(k) == id.as_ref())
}

/// Which condition failed first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Failure {
    #[serde(rename = "shape")]
    Shape,
    #[serde(rename = "product(T1)")]
    Product1,
    #[serde(rename = "product(T2)")]
    Product2,
    #[serde(rename = "generation(T1)")]
    Generation1,
    #[serde(rename = "generation(T2)")]
    Generation2,
    #[serde(rename = "disjointness")]
    Disjointness,
}

impl Failure {
    pub fn label(self) -> &'static str {
        match self {
            Failure::Shape => "shape",
            Failure::Product1 => "product(T1)",
            Failure::Product2 => "product(T2)",
            Failure::Generation1 => "generation(T1)",
            Failure::Generation2 => "generation(T2)",
            Failure::Disjointness => "disjointness",
        }
    }
}

/// Outcome of checking a structure, with the evidence gathered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub verdict: Verdict,
    /// First condition that failed, or that could not be decided.
    pub failure: Option<Failure>,
    pub types: [Vec<u64>; 2],
    pub hyperbolic: [bool; 2],
    pub generation: [Option<Generation>; 2],
    pub sigma_sizes: [Option<BigUint>; 2],
    pub disjoint: Option<Verdict>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

/// Checks that both tuples multiply to 1, each generates G, and Σ(T₁) ∩ Σ(T₂) = {1}.
/// Hyperbolicity is recorded but not required.
pub fn is_ramification_structure<G: Group>(g: &G, s: &Structure<G::Elem>) -> Verification {
    verify(g, s, None)
}

/// [`is_ramification_structure`] restricted to triples.
pub fn is_unmixed_beauville<G: Group>(g: &G, s: &Structure<G::Elem>) -> Verification {
    verify(g, s, Some(3))
}

/// Checks the quadruple `(x₁, y₁; x₂, y₂)`.
pub fn is_unmixed_beauville_quadruple<G: Group>(g: &G, x1: &G::Elem, y1: &G::Elem, x2: &G::Elem, y2: &G::Elem) -> Verification {
    is_unmixed_beauville(g, &Structure::from_quadruple(g, x1, y1, x2, y2))
}

fn verify<G: Group>(g: &G, s: &Structure<G::Elem>, arity: Option<usize>) -> Verification {
    let types = [type_of(g, &s.t1), type_of(g, &s.t2)];
    let hyperbolic = [is_hyperbolic(&types[0]), is_hyperbolic(&types[1])];
    let mut v = Verification {
        verdict: Verdict::No,
        failure: None,
        types,
        hyperbolic,
        generation: [None, None],
        sigma_sizes: [None, None],
        disjoint: None,
    };
    let shape_ok = |t: &Vec<G::Elem>| match arity {
        Some(r) => t.len() == r,
        None => t.len() >= 2,
    };
    if !shape_ok(&s.t1) || !shape_ok(&s.t2) {
        v.failure = Some(Failure::Shape);
        return v;
    }
    for (t, fail) in [(&s.t1, Failure::Product1), (&s.t2, Failure::Product2)] {
        if !g.is_identity(&product(g, t)) {
            v.failure = Some(fail);
            return v;
        }
    }
    let mut verdict = Verdict::Yes;
    for (i, (t, fail)) in [(&s.t1, Failure::Generation1), (&s.t2, Failure::Generation2)].into_iter().enumerate() {
        let gen = g.generation(t);
        let gv = gen.verdict;
        v.generation[i] = Some(gen);
        if gv == Verdict::No {
            v.failure = Some(fail);
            return v;
        }
        if gv == Verdict::Undecided && v.failure.is_none() {
            v.failure = Some(fail);
        }
        verdict = verdict.and(gv);
    }
    let keys = (sigma_keys(g, &s.t1), sigma_keys(g, &s.t2));
    if let (Ok(a), Ok(b)) = (&keys.0, &keys.1) {
        v.sigma_sizes = [sigma_size(g, a), sigma_size(g, b)];
    }
    let disjoint = is_disjoint(g, &s.t1, &s.t2);
    v.disjoint = Some(disjoint);
    if disjoint != Verdict::Yes && v.failure.is_none() {
        v.failure = Some(Failure::Disjointness);
    }
    v.verdict = verdict.and(disjoint);
    v
}

/// The JSON document for a structure:
/// `{group, order, T1: {elements, type, genus}, T2, invariants, verified, witness}`.
pub fn structure_report<G: Group>(g: &G, s: &Structure<G::Elem>, v: &Verification) -> Value {
    let order = g.order();
    let tuple = |t: &Vec<G::Elem>, ty: &Vec<u64>, hyp: bool| {
        let genus = genus_from_type(&order, 0, ty).ok().map(|x| crate::report::bigint_to_json(&x)).unwrap_or(Value::Null);
        json!({
            "elements": t.iter().map(|x| g.elem_to_json(x)).collect::<Vec<_>>(),
            "type": ty,
            "genus": genus,
            "hyperbolic": hyp,
        })
    };
    let invariants = surface_invariants(&order, &v.types[0], &v.types[1])
        .ok()
        .map(|inv| serde_json::to_value(inv).expect("invariants serialise"))
        .unwrap_or(Value::Null);
    let mut witness = Map::new();
    witness.insert(
        "closure_sizes".into(),
        json!(v.generation.iter().map(|gen| gen.as_ref().and_then(|x| x.subgroup_order.as_ref()).map(big_to_json)).collect::<Vec<_>>()),
    );
    witness.insert(
        "generation_methods".into(),
        json!(v.generation.iter().map(|gen| gen.as_ref().map(|x| x.method.clone())).collect::<Vec<_>>()),
    );
    witness.insert("sigma_sizes".into(), json!(v.sigma_sizes.iter().map(|x| x.as_ref().map(big_to_json)).collect::<Vec<_>>()));
    json!({
        "group": g.spec(),
        "order": big_to_json(&order),
        "T1": tuple(&s.t1, &v.types[0], v.hyperbolic[0]),
        "T2": tuple(&s.t2, &v.types[1], v.hyperbolic[1]),
        "invariants": invariants,
        "verified": v.is_valid(),
        "verdict": v.verdict,
        "failure": v.failure.map(Failure::label),
        "witness": Value::Object(witness),
    })
}

/// Reads the `T1.elements` and `T2.elements` of a structure document, or a bare
/// `{"T1": [...], "T2": [...]}`.
pub fn structure_from_json<G: Group>(g: &G, v: &Value) -> Result<Structure<G::Elem>, StructureError> {
    let tuple = |name: &str| -> Result<Vec<G::Elem>, StructureError> {
        let t = v.get(name).ok_or_else(|| StructureError::Malformed(format!("missing {name}")))?;
        let list = match t {
            Value::Array(a) => a,
            Value::Object(o) => o
                .get("elements")
                .and_then(Value::as_array)
                .ok_or_else(|| StructureError::Malformed(format!("{name} has no element list")))?,
            _ => return Err(StructureError::Malformed(format!("{name} must be a list or an object"))),
        };
        Ok(list.iter().map(|x| g.elem_from_json(x)).collect::<Result<Vec<_>, _>>()?)
    };
    Ok(Structure { t1: tuple("T1")?, t2: tuple("T2")? })
}
