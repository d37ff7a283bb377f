//! Riemann–Hurwitz genus and the numerical invariants of the surface `(C₁ × C₂)/G`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("type entries must be at least 2, got {0:?}")]
    BadType(Vec<u64>),
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("2g - 2 = {0} is not an even integer; the type is not realisable at this order")]
    NonIntegralGenus(String),
    #[error("curve genera ({g1}, {g2}) give the non-integral χ = {chi}")]
    NonIntegralChi { g1: String, g2: String, chi: String },
    #[error("curve genus {0} is below 2")]
    GenusBelowTwo(String),
}

/// `Σ (1 - 1/m_i)` as an exact rational.
pub fn branching_sum(ty: &[u64]) -> BigRational {
    ty.iter().fold(BigRational::zero(), |acc, &m| {
        acc + BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m))
    })
}

/// `1/a + 1/b + 1/c < 1` for triples; for longer tuples the same condition in the
/// form `Σ (1 - 1/m_i) > 2`.
pub fn is_hyperbolic(ty: &[u64]) -> bool {
    !ty.is_empty() && ty.iter().all(|&m| m >= 1) && branching_sum(ty) > BigRational::from_integer(BigInt::from(2))
}

/// Solves `2g - 2 = |G| (2g' - 2 + Σ (1 - 1/m_i))` for `g`.
pub fn genus_from_type(group_order: &BigUint, gprime: u64, ty: &[u64]) -> Result<BigInt, InvariantError> {
    if ty.iter().any(|&m| m < 2) {
        return Err(InvariantError::BadType(ty.to_vec()));
    }
    if group_order.is_zero() {
        return Err(InvariantError::ZeroOrder);
    }
    let order = BigRational::from_integer(BigInt::from(group_order.clone()));
    let base = BigRational::from_integer(BigInt::from(2 * gprime) - 2);
    let rhs = order * (base + branching_sum(ty));
    if !rhs.is_integer() || rhs.to_integer().is_odd() {
        return Err(InvariantError::NonIntegralGenus(rhs.to_string()));
    }
    Ok((rhs.to_integer() + 2) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    #[serde(with = "bigint_json")]
    pub g1: BigInt,
    #[serde(with = "bigint_json")]
    pub g2: BigInt,
    #[serde(with = "bigint_json")]
    pub chi: BigInt,
    #[serde(rename = "K2", with = "bigint_json")]
    pub k2: BigInt,
    #[serde(with = "bigint_json")]
    pub e: BigInt,
    pub q: u32,
    #[serde(with = "bigint_json")]
    pub pg: BigInt,
}

/// Invariants of the surface isogenous to a product built from a ramification
/// structure of the given types over the projective line.
pub fn surface_invariants(group_order: &BigUint, type1: &[u64], type2: &[u64]) -> Result<SurfaceInvariants, InvariantError> {
    let g1 = genus_from_type(group_order, 0, type1)?;
    let g2 = genus_from_type(group_order, 0, type2)?;
    for g in [&g1, &g2] {
        if *g < BigInt::from(2) {
            return Err(InvariantError::GenusBelowTwo(g.to_string()));
        }
    }
    let num: BigInt = (&g1 - 1) * (&g2 - 1);
    let order = BigInt::from(group_order.clone());
    let (chi, rem) = num.div_rem(&order);
    if !rem.is_zero() {
        return Err(InvariantError::NonIntegralChi {
            g1: g1.to_string(),
            g2: g2.to_string(),
            chi: BigRational::new(num, order).to_string(),
        });
    }
    debug_assert!(chi.is_positive());
    Ok(SurfaceInvariants { k2: &chi * 8, e: &chi * 4, q: 0, pg: &chi - 1, g1, g2, chi })
}

mod bigint_json {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&crate::report::bigint_to_json(x), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        match &v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
        .ok_or_else(|| D::Error::custom(format!("expected an integer, got {v}")))
    }
}
