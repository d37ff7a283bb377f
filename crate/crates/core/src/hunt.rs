//! Primes `p` for which PSL(2,p) carries a structure of type `((r,r,r),(s,s,s))`.
//!
//! With `s` odd and `gcd(r, s) = 1`, every prime `p ≡ x (mod 2rs)` where `x ≡ 1 (mod 2r)`
//! and `x ≡ -1 (mod s)` has `r | (p-1)/2` and `s | (p+1)/2`, so PSL(2,p) has elements
//! of both orders and the equal-trace construction applies. Dirichlet's theorem
//! supplies infinitely many such primes; the hunt walks the progression.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::arith::{gcd, is_prime_64};
use crate::par::map_shards;
use crate::psl2::{beauville_psl2p_typed, ConstructError, Construction};
use crate::group::Verdict;
use crate::structure::structure_report;

/// Progression steps scanned when no limit is given.
pub const DEFAULT_LIMIT: u64 = 100_000;
/// Largest `r` or `s` accepted, keeping `2rs·limit` well inside 64 bits.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HuntError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(
        "no prime p = {modulus}k + {x} with k <= {limit}; primes in this progression exist by Dirichlet's \
         theorem, but no bound on the first one is known, so this is not a disproof"
    )]
    NoneFound { x: u64, modulus: u64, limit: u64 },
}

/// The normalised orders and the residue they determine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtTarget {
    pub r: u64,
    pub s: u64,
    /// Whether the inputs were exchanged to make `s` odd.
    pub swapped: bool,
    pub x: u64,
    pub modulus: u64,
}

fn check_orders(r: u64, s: u64) -> Result<(), HuntError> {
    if r <= 5 || s <= 5 {
        return Err(HuntError::BadInput(format!("orders must exceed 5, got ({r}, {s})")));
    }
    if r > MAX_ORDER || s > MAX_ORDER {
        return Err(HuntError::BadInput(format!("orders above {MAX_ORDER} are not supported")));
    }
    if gcd(r, s) != 1 {
        return Err(HuntError::BadInput(format!("gcd({r}, {s}) = {} is not 1", gcd(r, s))));
    }
    Ok(())
}

/// Inverse of `a` modulo `m` for coprime inputs.
fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// The unique `0 <= x < 2rs` with `x ≡ 1 (mod 2r)` and `x ≡ -1 (mod s)`, after
/// exchanging `r` and `s` if `s` is even.
pub fn crt_target(r: u64, s: u64) -> Result<CrtTarget, HuntError> {
    check_orders(r, s)?;
    let swapped = s % 2 == 0;
    let (r, s) = if swapped { (s, r) } else { (r, s) };
    let m1 = 2 * r;
    let modulus = m1 * s;
    // x = 1 + 2r·t with 2r·t ≡ -2 (mod s)
    let t = ((s - 2 % s) as u128 * inverse_mod(m1 % s, s) as u128 % s as u128) as u64;
    let x = (1 + m1 as u128 * t as u128) as u64 % modulus;
    Ok(CrtTarget { r, s, swapped, x, modulus })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeStatus {
    /// The structure passed every check.
    Verified,
    /// Built, but generation or disjointness could not be decided.
    UndecidedGeneration,
    /// Too large to construct here.
    Unconstructed,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntPrime {
    pub p: u64,
    pub k: u64,
    pub status: PrimeStatus,
    pub note: Option<String>,
    /// The structure report of the construction.
    pub structure: Option<Value>,
    #[serde(skip)]
    pub construction: Option<Construction>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntResult {
    pub r: u64,
    pub s: u64,
    pub swapped: bool,
    pub x: u64,
    pub modulus: u64,
    pub limit: u64,
    pub primes: Vec<HuntPrime>,
}

fn examine(p: u64, k: u64, r: u64, s: u64) -> HuntPrime {
    let (status, note, construction) = match beauville_psl2p_typed(p, r, s) {
        Ok(c) => {
            let status = if c.verification.verdict == Verdict::Yes { PrimeStatus::Verified } else { PrimeStatus::UndecidedGeneration };
            (status, None, Some(c))
        }
        Err(ConstructError::Unverified(m)) => (PrimeStatus::UndecidedGeneration, Some(m), None),
        Err(e) => (PrimeStatus::Unconstructed, Some(e.to_string()), None),
    };
    let structure = construction.as_ref().map(|c| structure_report(&c.group, &c.structure, &c.verification));
    HuntPrime { p, k, status, note, structure, construction }
}

/// The first `count` primes `p = modulus·k + x` with `k <= limit`, each with the
/// structure of type `((r,r,r),(s,s,s))` on PSL(2,p).
pub fn hunt(r: u64, s: u64, count: usize, limit: u64) -> Result<HuntResult, HuntError> {
    if count == 0 {
        return Err(HuntError::BadInput("count must be positive".into()));
    }
    let target = crt_target(r, s)?;
    let CrtTarget { r, s, swapped, x, modulus } = target;
    let primes: Vec<(u64, u64)> = (0..=limit)
        .map_while(|k| modulus.checked_mul(k).and_then(|v| v.checked_add(x)).map(|p| (p, k)))
        .filter(|&(p, _)| is_prime_64(p))
        .take(count)
        .collect();
    if primes.is_empty() {
        return Err(HuntError::NoneFound { x, modulus, limit });
    }
    let primes = map_shards(primes.len(), |i| examine(primes[i].0, primes[i].1, r, s));
    Ok(HuntResult { r, s, swapped, x, modulus, limit, primes })
}
