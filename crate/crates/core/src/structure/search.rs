//! Exhaustive and randomized searches for Beauville structures, and counts of
//! triangle-group homomorphisms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{complete_triple, is_hyperbolic, is_unmixed_beauville, keys_disjoint, sigma_keys, type_of, Structure, StructureError, Verification};
use crate::group::{Group, Verdict};
use crate::par::{first_by_shard, map_shards};

/// Largest group searched without a type filter.
pub const EXHAUSTIVE_CAP: usize = 10_000;
/// Largest group searched with a type filter.
pub const EXHAUSTIVE_FILTERED_CAP: usize = 100_000;
/// Largest group for an exact homomorphism census.
pub const CENSUS_CAP: usize = 5_000;
/// Random searches are split into this many independently seeded shards.
pub const SEARCH_SHARDS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("group of order {0} exceeds the limit {1} for this search")]
    TooLarge(String, usize),
    #[error("budget of {0} samples exhausted without a structure (this is not a proof of non-existence)")]
    BudgetExhausted(u64),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct SearchOutcome<E> {
    pub structure: Option<Structure<E>>,
    pub verification: Option<Verification>,
    /// Distinct Σ-signatures of generating triples that were collected.
    pub signatures: usize,
    /// Candidate pairs `(x, y)` examined.
    pub examined: u64,
}

type Signature<K> = BTreeSet<K>;

fn sorted(ty: &[u64]) -> Vec<u64> {
    let mut t = ty.to_vec();
    t.sort_unstable();
    t
}

struct Found<E, K> {
    sig: Signature<K>,
    x: E,
    y: E,
    ty: Vec<u64>,
}

fn distinct(ty: &[u64]) -> usize {
    ty.iter().collect::<BTreeSet<_>>().len()
}

/// Deterministic exhaustive search. `x` runs over class representatives and `y`
/// over the whole group; each generating triple is reduced to the set of class
/// labels of its powers. Without a filter, pairs of hyperbolic types are tried in
/// order of the number of distinct orders in both types, then lexicographically, so
/// ((4,4,4),(7,7,7)) is preferred to ((3,3,4),(7,7,7)); the first pair of signatures
/// meeting only in the identity gives the structure. `None` in the outcome proves no structure exists
/// (of the requested types, when a filter is given).
pub fn exhaustive_beauville_search<G: Group>(
    g: &G,
    filter: Option<(&[u64], &[u64])>,
) -> Result<SearchOutcome<G::Elem>, SearchError> {
    let cap = if filter.is_some() { EXHAUSTIVE_FILTERED_CAP } else { EXHAUSTIVE_CAP };
    let order = g.order();
    let els = match g.elements() {
        Some(e) if e.len() <= cap => e,
        _ => return Err(SearchError::TooLarge(order.to_string(), cap)),
    };
    let mut reps = Vec::new();
    let mut seen_keys = std::collections::HashSet::new();
    for x in &els {
        let k = g.class_key(x).ok_or_else(|| StructureError::NoClassKeys(g.spec()))?;
        if seen_keys.insert(k) {
            reps.push(x.clone());
        }
    }
    let wanted = filter.map(|(a, b)| [sorted(a), sorted(b)]);

    let per_rep = map_shards(reps.len(), |i| {
        let x = &reps[i];
        let mut local: Vec<Found<G::Elem, G::Key>> = Vec::new();
        let mut index: HashMap<Signature<G::Key>, usize> = HashMap::new();
        let mut examined = 0u64;
        for y in &els {
            examined += 1;
            let triple = complete_triple(g, x, y);
            let ty = sorted(&type_of(g, &triple));
            if wanted.as_ref().is_some_and(|w| ty != w[0] && ty != w[1]) {
                continue;
            }
            let sig = sigma_keys(g, &triple)?;
            if index.contains_key(&sig) {
                continue;
            }
            if g.generation(&triple[..2]).verdict != Verdict::Yes {
                continue;
            }
            index.insert(sig.clone(), local.len());
            local.push(Found { sig, x: x.clone(), y: y.clone(), ty });
        }
        Ok::<_, SearchError>((local, examined))
    });

    let mut all: Vec<Found<G::Elem, G::Key>> = Vec::new();
    let mut index: HashMap<Signature<G::Key>, usize> = HashMap::new();
    let mut examined = 0;
    for shard in per_rep {
        let (local, n) = shard?;
        examined += n;
        for f in local {
            if !index.contains_key(&f.sig) {
                index.insert(f.sig.clone(), all.len());
                all.push(f);
            }
        }
    }

    let mut by_type: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, f) in all.iter().enumerate() {
        by_type.entry(f.ty.clone()).or_default().push(i);
    }
    let mut candidates: Vec<(&Vec<u64>, &Vec<u64>)> = match &wanted {
        Some(w) => vec![(&w[0], &w[1])],
        None => {
            let types: Vec<&Vec<u64>> = by_type.keys().filter(|t| is_hyperbolic(t)).collect();
            types.iter().enumerate().flat_map(|(i, &a)| types[i..].iter().map(move |&b| (a, b))).collect()
        }
    };
    candidates.sort_by_key(|&(a, b)| (distinct(a) + distinct(b), a.clone(), b.clone()));

    let mut hit = None;
    'outer: for (ta, tb) in candidates {
        let (Some(left), Some(right)) = (by_type.get(ta), by_type.get(tb)) else { continue };
        for &i in left {
            for &j in right {
                let (a, b) = (&all[i], &all[j]);
                if keys_disjoint(g, &a.sig, &b.sig) {
                    hit = Some(Structure::from_quadruple(g, &a.x, &a.y, &b.x, &b.y));
                    break 'outer;
                }
            }
        }
    }
    finish(g, hit, all.len(), examined)
}

fn finish<G: Group>(g: &G, hit: Option<Structure<G::Elem>>, signatures: usize, examined: u64) -> Result<SearchOutcome<G::Elem>, SearchError> {
    let verification = match &hit {
        Some(s) => {
            let v = is_unmixed_beauville(g, s);
            if !v.is_valid() {
                return Err(SearchError::Internal(format!("search produced a structure that fails verification: {:?}", v.failure)));
            }
            Some(v)
        }
        None => None,
    };
    Ok(SearchOutcome { structure: hit, verification, signatures, examined })
}

/// A conjugacy class given by one of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec<E> {
    pub representative: E,
}

impl<E: Clone> ClassSpec<E> {
    pub fn new(representative: E) -> Self {
        ClassSpec { representative }
    }
}

fn shard_seed(seed: u64, shard: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (shard as u64).wrapping_mul(0xD1B5_4A32_D192_ED03) ^ 0x5EED
}

enum Draw<'a, G: Group> {
    Free,
    Classes(&'a [[ClassSpec<G::Elem>; 3]; 2], Vec<G::Key>),
    Types([Vec<u64>; 2]),
}

/// Budgeted random search. Without constraints `x, y` are uniform; with
/// constraints `[[a₁, b₁, c₁], [a₂, b₂, c₂]]`, triple `i` draws `x` from `aᵢ` and
/// `y` from `bᵢ` and is kept only if `(xy)⁻¹` lies in `cᵢ`. Generating triples are
/// pooled by Σ-signature and the first disjoint pair wins. The budget is split
/// over [`SEARCH_SHARDS`] shards with seeds derived from `seed`; the lowest shard
/// with a hit decides the result, so the outcome depends only on the arguments.
pub fn random_search<G: Group>(
    g: &G,
    constraints: Option<&[[ClassSpec<G::Elem>; 3]; 2]>,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome<G::Elem>, SearchError> {
    let draw = match constraints {
        Some(c) => {
            let keys = c
                .iter()
                .map(|t| g.class_key(&t[2].representative).ok_or_else(|| StructureError::NoClassKeys(g.spec())))
                .collect::<Result<_, _>>()?;
            Draw::Classes(c, keys)
        }
        None => Draw::Free,
    };
    random_impl(g, draw, budget, seed)
}

/// Uniform random search keeping only triples whose types, as multisets, are
/// `type1` (first tuple) or `type2` (second tuple).
pub fn random_search_typed<G: Group>(
    g: &G,
    type1: &[u64],
    type2: &[u64],
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome<G::Elem>, SearchError> {
    random_impl(g, Draw::Types([sorted(type1), sorted(type2)]), budget, seed)
}

fn random_impl<G: Group>(g: &G, draw: Draw<'_, G>, budget: u64, seed: u64) -> Result<SearchOutcome<G::Elem>, SearchError> {
    if budget == 0 {
        return Err(SearchError::BudgetExhausted(0));
    }
    let shards = SEARCH_SHARDS.min(budget as usize);
    let found = first_by_shard(shards, |shard| {
        let share = budget / shards as u64 + u64::from((shard as u64) < budget % shards as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(shard_seed(seed, shard));
        let mut pools: [Vec<(Signature<G::Key>, Vec<G::Elem>)>; 2] = [Vec::new(), Vec::new()];
        for attempt in 0..share {
            let (triple, sides) = match &draw {
                Draw::Free => (complete_triple(g, &g.random_element(&mut rng), &g.random_element(&mut rng)), [true, false]),
                Draw::Classes(c, keys) => {
                    let side = (attempt % 2) as usize;
                    let s1 = g.random_element(&mut rng);
                    let s2 = g.random_element(&mut rng);
                    let x = g.conjugate(&c[side][0].representative, &s1);
                    let y = g.conjugate(&c[side][1].representative, &s2);
                    let triple = complete_triple(g, &x, &y);
                    if g.class_key(&triple[2]).as_ref() != Some(&keys[side]) {
                        continue;
                    }
                    (triple, [side == 0, side == 1])
                }
                Draw::Types(w) => {
                    let triple = complete_triple(g, &g.random_element(&mut rng), &g.random_element(&mut rng));
                    let ty = sorted(&type_of(g, &triple));
                    (triple, [ty == w[0], ty == w[1]])
                }
            };
            if !sides[0] && !sides[1] {
                continue;
            }
            let Ok(sig) = sigma_keys(g, &triple) else { continue };
            let home = if sides[0] { 0 } else { 1 };
            if pools[home].iter().any(|(s, _)| *s == sig) {
                continue;
            }
            if g.generation(&triple[..2]).verdict != Verdict::Yes {
                continue;
            }
            for side in 0..2 {
                if !sides[side] {
                    continue;
                }
                let other = if matches!(draw, Draw::Free) { 0 } else { 1 - side };
                if let Some((_, mate)) = pools[other].iter().find(|(s, _)| keys_disjoint(g, s, &sig)) {
                    let s = if side == 0 {
                        Structure { t1: triple, t2: mate.clone() }
                    } else {
                        Structure { t1: mate.clone(), t2: triple }
                    };
                    return Some((s, attempt + 1, pools[0].len() + pools[1].len() + 1));
                }
            }
            for side in 0..2 {
                if sides[side] {
                    pools[side].push((sig.clone(), triple.clone()));
                }
            }
        }
        None
    });
    match found {
        Some((s, examined, signatures)) => finish(g, Some(s), signatures, examined),
        None => Err(SearchError::BudgetExhausted(budget)),
    }
}

/// Homomorphisms from the triangle group Δ(r, s, t) to G, i.e. pairs `(x, y)` with
/// `x^r = y^s = (xy)^t = 1`, and how many of them are onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    #[serde(with = "crate::report::big")]
    pub pairs: BigUint,
    #[serde(with = "crate::report::big")]
    pub epi_pairs: BigUint,
}

/// Exact census for groups of at most [`CENSUS_CAP`] elements. `x` runs over class
/// representatives weighted by class size.
pub fn hom_census<G: Group>(g: &G, rst: (u64, u64, u64)) -> Result<Census, SearchError> {
    let els = match g.elements() {
        Some(e) if e.len() <= CENSUS_CAP => e,
        _ => return Err(SearchError::TooLarge(g.order().to_string(), CENSUS_CAP)),
    };
    let (r, s, t) = rst;
    let mut class_of: HashMap<G::Key, (G::Elem, u64)> = HashMap::new();
    let mut order_keys = Vec::new();
    for x in &els {
        let k = g.class_key(x).ok_or_else(|| StructureError::NoClassKeys(g.spec()))?;
        match class_of.get_mut(&k) {
            Some(entry) => entry.1 += 1,
            None => {
                order_keys.push(k.clone());
                class_of.insert(k, (x.clone(), 1));
            }
        }
    }
    let ys: Vec<&G::Elem> = els.iter().filter(|y| g.is_identity(&g.pow(y, s))).collect();
    let counts = map_shards(order_keys.len(), |i| {
        let (x, size) = &class_of[&order_keys[i]];
        if !g.is_identity(&g.pow(x, r)) {
            return (0u64, 0u64);
        }
        let (mut pairs, mut epi) = (0u64, 0u64);
        for y in &ys {
            if g.is_identity(&g.pow(&g.mul(x, y), t)) {
                pairs += size;
                if g.generation(&[x.clone(), (*y).clone()]).verdict == Verdict::Yes {
                    epi += size;
                }
            }
        }
        (pairs, epi)
    });
    let (pairs, epi) = counts.into_iter().fold((0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(Census { pairs: pairs.into(), epi_pairs: epi.into() })
}

/// Monte Carlo estimate of [`Census`] from uniformly random pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCensus {
    pub samples: u64,
    pub pair_hits: u64,
    pub epi_hits: u64,
    pub pairs_estimate: f64,
    pub pairs_sigma: f64,
    pub epi_estimate: f64,
    pub epi_sigma: f64,
    /// Pairs whose generation could not be decided; they count as non-surjective.
    pub undecided: u64,
}

pub fn hom_census_sampled<G: Group>(g: &G, rst: (u64, u64, u64), samples: u64, seed: u64) -> SampledCensus {
    let (r, s, t) = rst;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut hits, mut epi, mut undecided) = (0u64, 0u64, 0u64);
    for _ in 0..samples {
        let x = g.random_element(&mut rng);
        let y = g.random_element(&mut rng);
        if g.is_identity(&g.pow(&x, r)) && g.is_identity(&g.pow(&y, s)) && g.is_identity(&g.pow(&g.mul(&x, &y), t)) {
            hits += 1;
            match g.generation(&[x, y]).verdict {
                Verdict::Yes => epi += 1,
                Verdict::Undecided => undecided += 1,
                Verdict::No => {}
            }
        }
    }
    let total = g.order().to_f64().unwrap_or(f64::INFINITY).powi(2);
    let n = samples.max(1) as f64;
    let est = |h: u64| {
        let p = h as f64 / n;
        (total * p, total * (p * (1.0 - p) / n).sqrt())
    };
    let (pairs_estimate, pairs_sigma) = est(hits);
    let (epi_estimate, epi_sigma) = est(epi);
    SampledCensus { samples, pair_hits: hits, epi_hits: epi, pairs_estimate, pairs_sigma, epi_estimate, epi_sigma, undecided }
}
