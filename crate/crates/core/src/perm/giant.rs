//! Recognising when a permutation group contains the alternating group.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Permutation, StabChain};
use crate::arith::is_prime_64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Giant {
    Alternating,
    Symmetric,
    Proper,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        Some((lo, hi))
    }
}

/// Orbits of `<gens>` on `0..n`, each sorted, ordered by least point.
pub fn orbits(gens: &[Permutation], n: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for i in 0..n {
            uf.union(i, g.image(i));
        }
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = uf.find(i);
        buckets[r].push(i);
    }
    buckets.into_iter().filter(|b| !b.is_empty()).collect()
}

/// Primitivity of a transitive group: for each `b != 0`, the finest block system in
/// which 0 and `b` share a block must be trivial.
pub fn is_primitive(gens: &[Permutation], n: usize) -> bool {
    if n <= 2 {
        return true;
    }
    for b in 1..n {
        let mut uf = UnionFind::new(n);
        uf.union(0, b);
        let mut queue = vec![(0usize, b)];
        while let Some((x, y)) = queue.pop() {
            for g in gens {
                let (gx, gy) = (g.image(x), g.image(y));
                if let Some(pair) = uf.union(gx, gy) {
                    queue.push(pair);
                }
            }
        }
        let root = uf.find(0);
        let block = (0..n).filter(|&i| uf.find(i) == root).count();
        if block < n {
            return false;
        }
    }
    true
}

// Jordan: a primitive group containing a p-cycle, p prime and p <= n - 3, contains A_n.
// An element has a p-cycle as a power when exactly one of its cycle lengths is divisible
// by p and that length is p itself.
fn has_jordan_power(g: &Permutation, n: usize) -> bool {
    let lens = g.cycle_type();
    lens.iter().any(|&l| {
        (l as usize) + 3 <= n
            && is_prime_64(l as u64)
            && lens.iter().filter(|&&other| other % l == 0).count() == 1
    })
}

// Product replacement with an accumulator.
fn find_jordan_element(gens: &[Permutation], n: usize, attempts: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a6f7264616e);
    let mut state: Vec<Permutation> = gens.iter().cycle().take(gens.len().max(10)).cloned().collect();
    let mut acc = Permutation::identity(n);
    let len = state.len();
    for step in 0..attempts + 50 {
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        state[i] = if rng.gen_bool(0.5) { state[i].mul(&state[j]) } else { state[j].mul(&state[i]) };
        acc = acc.mul(&state[i]);
        if step >= 50 && (has_jordan_power(&acc, n) || has_jordan_power(&state[i], n)) {
            return true;
        }
    }
    false
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

fn is_giant_by_certificate(gens: &[Permutation], n: usize) -> bool {
    n >= 8
        && orbits(gens, n).len() == 1
        && is_primitive(gens, n)
        && find_jordan_element(gens, n, 40 * n)
}

/// Exact order of `<gens>`. Groups certified to contain A_n by a Jordan element get
/// the factorial formula; every other group goes through the stabilizer chain.
pub fn generated_group_order(gens: &[Permutation], n: usize) -> BigUint {
    if is_giant_by_certificate(gens, n) {
        let full = factorial(n);
        return if gens.iter().all(|g| g.sign() == 1) { full / 2u32 } else { full };
    }
    StabChain::new(n, gens).order()
}

/// Classifies `<gens>` as exactly A_n, exactly S_n, or a proper subgroup of S_n
/// not containing A_n.
pub fn contains_alternating(gens: &[Permutation], n: usize) -> Giant {
    let even = gens.iter().all(|g| g.sign() == 1);
    let giant = if even { Giant::Alternating } else { Giant::Symmetric };
    if n >= 3 && (orbits(gens, n).len() > 1 || !is_primitive(gens, n)) {
        return Giant::Proper;
    }
    if is_giant_by_certificate(gens, n) {
        return giant;
    }
    let order = StabChain::new(n, gens).order();
    let full = factorial(n);
    if order == full {
        Giant::Symmetric
    } else if even && order * 2u32 == full {
        Giant::Alternating
    } else {
        Giant::Proper
    }
}
