//! Almost homogeneous conjugacy classes of S_n and the sampled construction of
//! Beauville and ramification structures on A_n and S_n from them.
//!
//! Class selection: the orders of both tuples are sorted in decreasing order, each
//! gets `k'ᵢ = ⌊n/mᵢ⌋` rounded to the wanted parity, then `kᵢ = k'ᵢ - 2l` with the
//! smallest `l` for which `kᵢmᵢ` differs from every earlier product. Then
//! `fᵢ = n - kᵢmᵢ` are pairwise distinct, and since every non-trivial power of an
//! element of shape `(mᵢ^kᵢ, 1^fᵢ)` fixes exactly `fᵢ` points, classes from the two
//! tuples never share a non-trivial power.
//!
//! Triples are built by a Metropolis walk rather than by independent draws: the
//! first `r - 2` entries are drawn from their classes, the last free entry is
//! conjugated by random transpositions (which keeps it in its class), and the walk
//! minimises the distance between the cycle type of the product and the target
//! shape of the closing entry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Symmetric, SymmetricKind};
use crate::par::first_by_shard;
use crate::perm::{contains_alternating, CycleShape, Giant, Permutation, MAX_DEGREE};
use crate::structure::{branching_sum, is_hyperbolic, is_ramification_structure, Structure, Verification};

/// Largest `l` tried when separating the products `kᵢmᵢ`.
pub const MAX_OFFSET: u32 = 11;
/// Offsets above this are logged.
pub const NOMINAL_OFFSET: u32 = 5;
/// Independent walks per tuple; the budget is shared between them.
pub const WALK_SHARDS: usize = 8;

/// How large n must be relative to the largest order `m₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `n > 100·m₁`.
    Strict,
    /// `n > 20·m₁`, for runs at small degree.
    Relaxed,
    /// No lower bound; the class arithmetic alone.
    Unbounded,
}

impl Profile {
    pub fn factor(self) -> usize {
        match self {
            Profile::Strict => 100,
            Profile::Relaxed => 20,
            Profile::Unbounded => 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectionError {
    #[error("bad type: {0}")]
    BadType(String),
    #[error("degree {n} is too small: need n > {bound} ({factor}·m₁ with m₁ = {m1})")]
    DegreeTooSmall { n: usize, bound: usize, factor: usize, m1: u64 },
    #[error("degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("no offset l <= {MAX_OFFSET} separates the product k·m for order {m} at n = {n}")]
    NoOffset { m: u64, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(
        "tuple {tuple} cannot generate a transitive group at n = {n}: the classes move {index_sum} in total \
         (sum of n - #cycles) but Riemann–Hurwitz needs at least 2n - 2 = {needed}"
    )]
    Infeasible { tuple: usize, n: usize, index_sum: usize, needed: usize },
    #[error("budget of {0} steps exhausted without a generating tuple (this is not a proof of non-existence)")]
    BudgetExhausted(u64),
    #[error("constructed structure failed verification: {0}")]
    Unverified(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    An,
    Sn,
}

/// The classes chosen for the entries of both tuples, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSelection {
    pub n: usize,
    pub mode: Mode,
    pub types: [Vec<u64>; 2],
    pub shapes: [Vec<CycleShape>; 2],
    /// Largest offset `l` used.
    pub max_offset: u32,
}

impl ClassSelection {
    pub fn all_shapes(&self) -> impl Iterator<Item = &CycleShape> {
        self.shapes[0].iter().chain(&self.shapes[1])
    }

    /// `Σ (n - #cycles)` over the classes of tuple `i`.
    pub fn index_sum(&self, i: usize) -> usize {
        self.shapes[i].iter().map(|s| ((s.m - 1) * s.k) as usize).sum()
    }
}

fn check_degree(n: usize, m1: u64, profile: Profile) -> Result<(), SelectionError> {
    if n > MAX_DEGREE {
        return Err(SelectionError::DegreeTooLarge(n));
    }
    let bound = profile.factor() * m1 as usize;
    if n <= bound {
        return Err(SelectionError::DegreeTooSmall { n, bound, factor: profile.factor(), m1 });
    }
    Ok(())
}

fn odd_entries_for(t: &[u64]) -> Vec<bool> {
    let mut even: Vec<usize> = (0..t.len()).filter(|&i| t[i] % 2 == 0).collect();
    even.sort_by(|&a, &b| t[b].cmp(&t[a]));
    let mut odd = vec![false; t.len()];
    for &i in even.iter().take(2) {
        odd[i] = true;
    }
    odd
}

/// Shapes for the orders `t₁ ++ t₂`, with `odd[i]` asking for an odd `kᵢ`.
fn select(types: [&[u64]; 2], n: usize, odd: [Vec<bool>; 2], mode: Mode) -> Result<ClassSelection, SelectionError> {
    let flat: Vec<(u64, bool)> = types[0]
        .iter()
        .zip(&odd[0])
        .chain(types[1].iter().zip(&odd[1]))
        .map(|(&m, &o)| (m, o))
        .collect();
    let mut order: Vec<usize> = (0..flat.len()).collect();
    order.sort_by(|&a, &b| flat[b].0.cmp(&flat[a].0));
    let mut products: Vec<u64> = Vec::new();
    let mut chosen = vec![None; flat.len()];
    let mut max_offset = 0;
    for &i in &order {
        let (m, want_odd) = flat[i];
        let mut k0 = n as u64 / m;
        if (k0 % 2 == 1) != want_odd {
            k0 = k0.saturating_sub(1);
        }
        let l = (0..=MAX_OFFSET)
            .find(|&l| {
                let k = k0 as i64 - 2 * l as i64;
                k > 0 && !products.contains(&(k as u64 * m))
            })
            .ok_or(SelectionError::NoOffset { m, n })?;
        if l > NOMINAL_OFFSET {
            log::info!("class selection at n = {n}: order {m} needed offset l = {l}");
        }
        max_offset = max_offset.max(l);
        let k = k0 - 2 * l as u64;
        products.push(k * m);
        let shape = CycleShape::new(m as u32, k as u32, (n as u64 - k * m) as u32)
            .map_err(|e| SelectionError::BadType(e.to_string()))?;
        chosen[i] = Some(shape);
    }
    let chosen: Vec<CycleShape> = chosen.into_iter().map(|s| s.expect("every entry is assigned")).collect();
    let split = types[0].len();
    Ok(ClassSelection {
        n,
        mode,
        types: [types[0].to_vec(), types[1].to_vec()],
        shapes: [chosen[..split].to_vec(), chosen[split..].to_vec()],
        max_offset,
    })
}

fn check_orders(t: &[u64]) -> Result<(), SelectionError> {
    if t.len() < 2 {
        return Err(SelectionError::BadType(format!("{t:?} needs at least two entries")));
    }
    if let Some(m) = t.iter().find(|&&m| m < 2) {
        return Err(SelectionError::BadType(format!("order {m} in {t:?} is below 2")));
    }
    Ok(())
}

fn check_two_even(t: &[u64]) -> Result<(), SelectionError> {
    if t.iter().filter(|&&m| m % 2 == 0).count() < 2 {
        return Err(SelectionError::BadType(format!("{t:?} has fewer than two even entries, so no two classes can be odd")));
    }
    Ok(())
}

fn largest(t1: &[u64], t2: &[u64]) -> u64 {
    t1.iter().chain(t2).copied().max().unwrap_or(0)
}

/// Classes of even permutations for a pair of hyperbolic triples, with `n > 100·m₁`.
pub fn choose_classes_an(t1: &[u64], t2: &[u64], n: usize) -> Result<ClassSelection, SelectionError> {
    choose_classes_an_with(t1, t2, n, Profile::Strict)
}

pub fn choose_classes_an_with(t1: &[u64], t2: &[u64], n: usize, profile: Profile) -> Result<ClassSelection, SelectionError> {
    for t in [t1, t2] {
        check_orders(t)?;
        if t.len() != 3 || !is_hyperbolic(t) {
            return Err(SelectionError::BadType(format!("{t:?} is not a hyperbolic triple")));
        }
    }
    check_degree(n, largest(t1, t2), profile)?;
    select([t1, t2], n, [vec![false; 3], vec![false; 3]], Mode::An)
}

/// As [`choose_classes_an`], but in each triple the two largest even orders get an
/// odd number of cycles, so those two classes are odd.
pub fn choose_classes_sn(t1: &[u64], t2: &[u64], n: usize) -> Result<ClassSelection, SelectionError> {
    choose_classes_sn_with(t1, t2, n, Profile::Strict)
}

pub fn choose_classes_sn_with(t1: &[u64], t2: &[u64], n: usize, profile: Profile) -> Result<ClassSelection, SelectionError> {
    for t in [t1, t2] {
        check_orders(t)?;
        if t.len() != 3 || !is_hyperbolic(t) {
            return Err(SelectionError::BadType(format!("{t:?} is not a hyperbolic triple")));
        }
        check_two_even(t)?;
    }
    check_degree(n, largest(t1, t2), profile)?;
    select([t1, t2], n, [odd_entries_for(t1), odd_entries_for(t2)], Mode::Sn)
}

/// Classes for tuples of any lengths with `Σ(1 - 1/m) > 2` each.
pub fn choose_classes_ramification(
    tau1: &[u64],
    tau2: &[u64],
    n: usize,
    mode: Mode,
    profile: Profile,
) -> Result<ClassSelection, SelectionError> {
    let two = num_rational::BigRational::from_integer(2.into());
    for t in [tau1, tau2] {
        check_orders(t)?;
        if branching_sum(t) <= two {
            return Err(SelectionError::BadType(format!("{t:?} has Σ(1 - 1/m) <= 2")));
        }
        if mode == Mode::Sn {
            check_two_even(t)?;
        }
    }
    check_degree(n, largest(tau1, tau2), profile)?;
    let odd = match mode {
        Mode::An => [vec![false; tau1.len()], vec![false; tau2.len()]],
        Mode::Sn => [odd_entries_for(tau1), odd_entries_for(tau2)],
    };
    select([tau1, tau2], n, odd, mode)
}

// ---- the walk -------------------------------------------------------------------

/// Contribution of one cycle of length `len` to the distance from `(m^k, 1^f)`: a
/// cycle not of length 1 or `m` needs `⌊len/m⌋ + (len mod m) - 1` splits to break
/// into `m`-cycles and fixed points, leaving `len mod m` fixed points.
fn cycle_term(len: u32, m: u32) -> (u32, u32) {
    if len == 1 {
        (0, 1)
    } else if len == m {
        (0, 0)
    } else {
        (len / m + len % m - 1, len % m)
    }
}

/// The product `P = Q·y` of a walk together with the bookkeeping needed to score
/// a move in time proportional to the cycles it touches.
struct State {
    m: u32,
    f: u32,
    q_inv: Vec<u32>,
    y: Vec<u32>,
    y_inv: Vec<u32>,
    p: Vec<u32>,
    p_inv: Vec<u32>,
    splits: u32,
    fixed: u32,
    stamp: Vec<u32>,
    generation: u32,
}

/// A proposed conjugation of `y` by `(a b)`: the points whose image under `P`
/// changes and their new images.
struct Move {
    a: usize,
    b: usize,
    changed: [(usize, u32); 4],
    len: usize,
    splits: u32,
    fixed: u32,
}

impl State {
    fn new(q: &[u32], y: Vec<u32>, target: &CycleShape) -> Self {
        let n = q.len();
        let invert = |v: &[u32]| {
            let mut out = vec![0u32; v.len()];
            for (i, &x) in v.iter().enumerate() {
                out[x as usize] = i as u32;
            }
            out
        };
        let p: Vec<u32> = q.iter().map(|&i| y[i as usize]).collect();
        let mut s = State {
            m: target.m,
            f: target.f,
            q_inv: invert(q),
            y_inv: invert(&y),
            p_inv: invert(&p),
            y,
            p,
            splits: 0,
            fixed: 0,
            stamp: vec![0; n],
            generation: 0,
        };
        s.generation += 1;
        let p = s.p.clone();
        for start in 0..n {
            if s.stamp[start] == s.generation {
                continue;
            }
            let len = s.walk(start, |i| p[i] as usize);
            let (sp, fx) = cycle_term(len, s.m);
            s.splits += sp;
            s.fixed += fx;
        }
        s
    }

    fn cost_of(&self, splits: u32, fixed: u32) -> u32 {
        splits + fixed.abs_diff(self.f)
    }

    fn cost(&self) -> u32 {
        self.cost_of(self.splits, self.fixed)
    }

    /// Length of the cycle through `start` under `next`, stamping every point.
    fn walk(&mut self, start: usize, next: impl Fn(usize) -> usize) -> u32 {
        let mut len = 0;
        let mut j = start;
        loop {
            self.stamp[j] = self.generation;
            len += 1;
            j = next(j);
            if j == start {
                return len;
            }
        }
    }

    fn propose(&mut self, a: usize, b: usize) -> Move {
        let t = |v: u32| {
            if v as usize == a {
                b as u32
            } else if v as usize == b {
                a as u32
            } else {
                v
            }
        };
        let (u1, u2) = (self.q_inv[a] as usize, self.q_inv[b] as usize);
        let s = |i: usize| {
            if i == u1 {
                u2
            } else if i == u2 {
                u1
            } else {
                i
            }
        };
        let mut changed = [(0usize, 0u32); 4];
        let mut len = 0;
        for i in [u1, u2, self.p_inv[a] as usize, self.p_inv[b] as usize] {
            if changed[..len].iter().all(|&(j, _)| j != i) {
                changed[len] = (i, t(self.p[s(i)]));
                len += 1;
            }
        }
        let touched: Vec<usize> = changed[..len].iter().map(|&(i, _)| i).collect();
        let (mut splits, mut fixed) = (self.splits, self.fixed);
        self.generation += 1;
        for &i in &touched {
            if self.stamp[i] != self.generation {
                let p = &self.p;
                let l = {
                    let mut len = 0;
                    let mut j = i;
                    loop {
                        self.stamp[j] = self.generation;
                        len += 1;
                        j = p[j] as usize;
                        if j == i {
                            break len;
                        }
                    }
                };
                let (sp, fx) = cycle_term(l, self.m);
                splits -= sp;
                fixed -= fx;
            }
        }
        self.generation += 1;
        let new_image = |j: usize| changed[..len].iter().find(|&&(k, _)| k == j).map(|&(_, v)| v as usize);
        for &i in &touched {
            if self.stamp[i] != self.generation {
                let p = &self.p;
                let l = {
                    let mut len = 0;
                    let mut j = i;
                    loop {
                        self.stamp[j] = self.generation;
                        len += 1;
                        j = new_image(j).unwrap_or(p[j] as usize);
                        if j == i {
                            break len;
                        }
                    }
                };
                let (sp, fx) = cycle_term(l, self.m);
                splits += sp;
                fixed += fx;
            }
        }
        Move { a, b, changed, len, splits, fixed }
    }

    /// Whether the cycle of `P` through `i` is neither an `m`-cycle nor a wanted
    /// fixed point.
    fn is_defective(&self, i: usize) -> bool {
        let mut len = 1;
        let mut j = self.p[i] as usize;
        while j != i {
            len += 1;
            if len > self.m {
                return true;
            }
            j = self.p[j] as usize;
        }
        if len == 1 {
            self.fixed > self.f
        } else {
            len != self.m
        }
    }

    fn apply(&mut self, mv: &Move) {
        let (a, b) = (mv.a, mv.b);
        let t = |v: u32| {
            if v as usize == a {
                b as u32
            } else if v as usize == b {
                a as u32
            } else {
                v
            }
        };
        let mut ys = [a, b, self.y_inv[a] as usize, self.y_inv[b] as usize];
        ys.sort_unstable();
        let old: Vec<(usize, u32)> = ys.iter().map(|&i| (i, self.y[i])).collect();
        let y_old = |k: usize| old.iter().find(|&&(j, _)| j == k).map(|&(_, v)| v).unwrap();
        for &(i, _) in &old {
            let ti = t(i as u32) as usize;
            let src = if ys.contains(&ti) { y_old(ti) } else { self.y[ti] };
            self.y[i] = t(src);
        }
        for &i in &ys {
            self.y_inv[self.y[i] as usize] = i as u32;
        }
        for &(i, v) in &mv.changed[..mv.len] {
            self.p[i] = v;
        }
        for &(i, _) in &mv.changed[..mv.len] {
            self.p_inv[self.p[i] as usize] = i as u32;
        }
        self.splits = mv.splits;
        self.fixed = mv.fixed;
    }
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n - 1);
    (a, if b >= a { b + 1 } else { b })
}

fn to_perm(images: Vec<u32>) -> Permutation {
    Permutation::from_images(images).expect("walk preserves bijections")
}

struct Walk<'a> {
    shapes: &'a [CycleShape],
    group: Giant,
    steps: u64,
}

impl Walk<'_> {
    /// Runs restarts until a generating tuple is found or the steps run out. Returns
    /// the tuple and the steps used.
    fn run(&self, rng: &mut ChaCha8Rng) -> Option<(Vec<Permutation>, u64)> {
        let r = self.shapes.len();
        let n = self.shapes[0].degree();
        let target = self.shapes[r - 1];
        let restart_after = 400 * n as u64;
        let temperature = 0.15f64;
        let mut used = 0u64;
        while used < self.steps {
            let fixed: Vec<Permutation> = self.shapes[..r - 2].iter().map(|s| s.random_element(rng)).collect();
            let prefix = fixed.iter().fold(Permutation::identity(n), |acc, x| acc.mul(x));
            let y = self.shapes[r - 2].random_element(rng).images().to_vec();
            let mut st = State::new(prefix.images(), y, &target);
            let mut best = st.cost();
            let mut since_best = 0u64;
            loop {
                if st.cost() == 0 {
                    let mut tuple = fixed.clone();
                    tuple.push(to_perm(st.y.clone()));
                    tuple.push(to_perm(st.p_inv.clone()));
                    if contains_alternating(&tuple[..r - 1], n) == self.group {
                        return Some((tuple, used));
                    }
                    let (a, b) = random_pair(rng, n);
                    let mv = st.propose(a, b);
                    st.apply(&mv);
                }
                if used >= self.steps || since_best >= restart_after {
                    break;
                }
                used += 1;
                since_best += 1;
                let (mut a, mut b) = random_pair(rng, n);
                if rng.gen_bool(0.5) {
                    for _ in 0..8 {
                        let c = rng.gen_range(0..n);
                        if st.is_defective(c) {
                            a = c;
                            if b == a {
                                b = (a + 1) % n;
                            }
                            break;
                        }
                    }
                }
                if rng.gen_bool(0.5) {
                    let hop = if rng.gen_bool(0.5) { target.m } else { target.m - 1 };
                    let mut c = a;
                    for _ in 0..hop {
                        c = st.p[c] as usize;
                    }
                    if c != a {
                        b = c;
                    }
                }
                let mv = st.propose(a, b);
                let (old, new) = (st.cost(), st.cost_of(mv.splits, mv.fixed));
                let accept = new <= old || rng.gen::<f64>() < (-((new - old) as f64) / temperature).exp();
                if accept {
                    st.apply(&mv);
                    if new < best {
                        best = new;
                        since_best = 0;
                    }
                }
            }
        }
        None
    }
}

fn walk_seed(seed: u64, tuple: usize, shard: usize) -> u64 {
    seed ^ 0xA17E_5EA2_C400_0000u64.wrapping_mul(tuple as u64 + 1) ^ (shard as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A structure of the selected classes together with its independent verification.
#[derive(Clone, Debug)]
pub struct AnConstruction {
    pub group: Symmetric,
    pub selection: ClassSelection,
    pub structure: Structure<Permutation>,
    pub verification: Verification,
    pub steps: u64,
}

/// Builds tuples in the selected classes generating A_n (or S_n), then verifies the
/// structure. `budget` bounds the walk steps over both tuples.
pub fn build_from_selection(sel: &ClassSelection, budget: u64, seed: u64) -> Result<AnConstruction, BuildError> {
    let n = sel.n;
    for i in 0..2 {
        let needed = 2 * n - 2;
        let index_sum = sel.index_sum(i);
        if index_sum < needed {
            return Err(BuildError::Infeasible { tuple: i + 1, n, index_sum, needed });
        }
    }
    let (kind, giant) = match sel.mode {
        Mode::An => (SymmetricKind::Alternating, Giant::Alternating),
        Mode::Sn => (SymmetricKind::Symmetric, Giant::Symmetric),
    };
    let per_walk = budget / (2 * WALK_SHARDS as u64);
    let mut tuples = Vec::new();
    let mut steps = 0;
    for (i, shapes) in sel.shapes.iter().enumerate() {
        let walk = Walk { shapes, group: giant, steps: per_walk };
        let found = first_by_shard(WALK_SHARDS, |shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(walk_seed(seed, i, shard));
            walk.run(&mut rng)
        });
        match found {
            Some((t, used)) => {
                steps += used;
                tuples.push(t);
            }
            None => return Err(BuildError::BudgetExhausted(budget)),
        }
    }
    let group = Symmetric::new(n, kind).map_err(|e| BuildError::Unverified(e.to_string()))?;
    let t2 = tuples.pop().expect("two tuples");
    let t1 = tuples.pop().expect("two tuples");
    let structure = Structure { t1, t2 };
    let verification = is_ramification_structure(&group, &structure);
    if !verification.is_valid() {
        return Err(BuildError::Unverified(format!("{:?} failed", verification.failure)));
    }
    Ok(AnConstruction { group, selection: sel.clone(), structure, verification, steps })
}

/// A Beauville structure on A_n of the given hyperbolic types.
pub fn build_structure_an(t1: &[u64], t2: &[u64], n: usize, budget: u64, seed: u64, profile: Profile) -> Result<AnConstruction, BuildError> {
    build_from_selection(&choose_classes_an_with(t1, t2, n, profile)?, budget, seed)
}

/// A Beauville structure on S_n of the given hyperbolic types.
pub fn build_structure_sn(t1: &[u64], t2: &[u64], n: usize, budget: u64, seed: u64, profile: Profile) -> Result<AnConstruction, BuildError> {
    build_from_selection(&choose_classes_sn_with(t1, t2, n, profile)?, budget, seed)
}

/// A ramification structure of sizes `(|τ₁|, |τ₂|)` on A_n or S_n.
pub fn build_ramification_structure(
    tau1: &[u64],
    tau2: &[u64],
    n: usize,
    budget: u64,
    seed: u64,
    mode: Mode,
    profile: Profile,
) -> Result<AnConstruction, BuildError> {
    build_from_selection(&choose_classes_ramification(tau1, tau2, n, mode, profile)?, budget, seed)
}

/// Whether `group` can be generated by a tuple from the given classes without
/// contradicting Riemann–Hurwitz for the action on n points.
pub fn transitive_feasible(shapes: &[CycleShape]) -> bool {
    let n = shapes.first().map(|s| s.degree()).unwrap_or(0);
    let sum: usize = shapes.iter().map(|s| ((s.m - 1) * s.k) as usize).sum();
    n > 0 && sum + 2 >= 2 * n
}
