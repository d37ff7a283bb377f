use thiserror::Error;

use super::{Mat2, Psl2};
use crate::arith::{gcd, is_prime_64, prime_power};
use crate::group::{Generation, Group, Verdict};
use crate::structure::{exhaustive_beauville_search, is_unmixed_beauville, SearchError, Structure, Verification};

/// Largest q for which the explicit constructions are attempted.
pub const MAX_CONSTRUCTION_Q: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("unsupported q = {0}: {1}")]
    UnsupportedQ(u64, String),
    #[error("unsupported p = {0}: need an odd prime p >= 7")]
    UnsupportedP(u64),
    #[error("bad type: {0}")]
    BadType(String),
    #[error("construction did not verify: {0}")]
    Unverified(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// A structure produced by one of the constructions, with its verification.
#[derive(Clone, Debug)]
pub struct Construction {
    pub group: Psl2,
    pub structure: Structure<Mat2>,
    pub verification: Verification,
    pub method: String,
}

/// The types searched for when q is too small for the trace construction.
fn small_q_types(q: u64) -> Option<([u64; 3], [u64; 3])> {
    match q {
        7 => Some(([4, 4, 4], [7, 7, 7])),
        9 => Some(([4, 4, 4], [5, 5, 5])),
        11 => Some(([5, 5, 5], [6, 6, 6])),
        _ => None,
    }
}

/// An unmixed Beauville structure on PSL(2,q), or `None` for q ≤ 5 where none
/// exists. For q = 7, 9, 11 an exhaustive search at a fixed type is used. Otherwise
/// both triples come from equal traces `(α, α, α)` with `α` of projective order
/// `(q ∓ 1)/d`; the two orders are coprime, so the Σ-sets meet only in 1.
pub fn beauville_psl2(q: u64) -> Result<Option<Construction>, ConstructError> {
    if prime_power(q).is_none() {
        return Err(ConstructError::UnsupportedQ(q, "not a prime power".into()));
    }
    if q > MAX_CONSTRUCTION_Q {
        return Err(ConstructError::UnsupportedQ(q, format!("above the limit {MAX_CONSTRUCTION_Q}")));
    }
    if q <= 5 {
        return Ok(None);
    }
    let g = Psl2::new(q).map_err(|e| ConstructError::UnsupportedQ(q, e.to_string()))?;
    if let Some((a, b)) = small_q_types(q) {
        let out = exhaustive_beauville_search(&g, Some((&a, &b)))?;
        return Ok(match (out.structure, out.verification) {
            (Some(structure), Some(verification)) => {
                Some(Construction { group: g, structure, verification, method: "exhaustive search".into() })
            }
            _ => None,
        });
    }
    let d = g.d();
    let t1 = equal_trace_triple(&g, (q - 1) / d)?;
    let t2 = equal_trace_triple(&g, (q + 1) / d)?;
    finish(g, Structure { t1, t2 }, "equal traces").map(Some)
}

fn finish(g: Psl2, structure: Structure<Mat2>, method: &str) -> Result<Construction, ConstructError> {
    let verification = is_unmixed_beauville(&g, &structure);
    if !verification.is_valid() {
        return Err(ConstructError::Unverified(format!(
            "{} via {method}: {:?} failed",
            g.spec(),
            verification.failure
        )));
    }
    Ok(Construction { group: g, structure, verification, method: method.into() })
}

fn normalized(g: &Psl2, t: (Mat2, Mat2, Mat2)) -> Vec<Mat2> {
    vec![g.normalize(&t.0), g.normalize(&t.1), g.normalize(&t.2)]
}

/// A generating triple of type (r, r, r) from traces `(α, α, α)`.
fn equal_trace_triple(g: &Psl2, r: u64) -> Result<Vec<Mat2>, ConstructError> {
    let traces = g.traces_of_order(r);
    if traces.is_empty() {
        return Err(ConstructError::BadType(format!("{} has no element of order {r}", g.spec())));
    }
    for alpha in traces {
        if g.is_singular(alpha, alpha, alpha) {
            continue;
        }
        let t = normalized(g, g.solve_trace_triple(alpha, alpha, alpha));
        if g.generation(&t[..2]).verdict == Verdict::Yes {
            return Ok(t);
        }
    }
    Err(ConstructError::Unverified(format!("no generating triple of type ({r},{r},{r}) in {}", g.spec())))
}

/// Three unipotent elements of PSL(2,p) with product 1 and traces (2, 2, -2).
#[derive(Clone, Debug)]
pub struct UnipotentTriple {
    pub group: Psl2,
    pub triple: Vec<Mat2>,
    pub generation: Generation,
}

pub fn unipotent_triple(p: u64) -> Result<UnipotentTriple, ConstructError> {
    if p < 7 || !is_prime_64(p) || p > MAX_CONSTRUCTION_Q {
        return Err(ConstructError::UnsupportedP(p));
    }
    let g = Psl2::new(p).map_err(|_| ConstructError::UnsupportedP(p))?;
    let (two, minus_two) = (g.fe(2), g.fe(-2));
    let triple = normalized(&g, g.solve_trace_triple(two, two, minus_two));
    let generation = g.generation(&triple[..2]);
    if generation.verdict != Verdict::Yes {
        return Err(ConstructError::Unverified(format!("unipotent triple does not generate {}", g.spec())));
    }
    Ok(UnipotentTriple { group: g, triple, generation })
}

/// A structure of type ((r,r,r),(s,s,s)) on PSL(2,p) for coprime r, s > 5 dividing
/// the group order. An order equal to p uses the unipotent triple.
pub fn beauville_psl2p_typed(p: u64, r: u64, s: u64) -> Result<Construction, ConstructError> {
    if p < 3 || !is_prime_64(p) {
        return Err(ConstructError::BadType(format!("p = {p} is not an odd prime")));
    }
    if p > MAX_CONSTRUCTION_Q {
        return Err(ConstructError::UnsupportedQ(p, format!("above the limit {MAX_CONSTRUCTION_Q}")));
    }
    if r <= 5 || s <= 5 {
        return Err(ConstructError::BadType(format!("orders must exceed 5, got ({r}, {s})")));
    }
    if gcd(r, s) != 1 {
        return Err(ConstructError::BadType(format!(
            "gcd({r}, {s}) = {} > 1: coprime orders are necessary for triples of equal orders",
            gcd(r, s)
        )));
    }
    let g = Psl2::new(p).map_err(|e| ConstructError::UnsupportedQ(p, e.to_string()))?;
    let order = g.order_u64();
    for x in [r, s] {
        if order % x != 0 {
            return Err(ConstructError::BadType(format!("{x} does not divide |PSL(2,{p})| = {order}")));
        }
    }
    let triple = |x: u64| -> Result<Vec<Mat2>, ConstructError> {
        if x == p {
            Ok(unipotent_triple(p)?.triple)
        } else {
            equal_trace_triple(&g, x)
        }
    };
    let (t1, t2) = (triple(r)?, triple(s)?);
    finish(g.clone(), Structure { t1, t2 }, "equal traces")
}
