use num_bigint::BigUint;
use rand::Rng;

use super::Permutation;

/// Base and strong generating set built by the deterministic Schreier–Sims
/// algorithm. Base points are taken as the first point moved by the generator that
/// forces a new level, so the base is ordered 0, 1, 2, ... whenever possible.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    // transversal[b] maps the base point to b.
    transversal: Vec<Option<Permutation>>,
    // number of generators whose Schreier generator has been sifted, per orbit position
    checked: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level { base, gens: Vec::new(), orbit: vec![base], transversal, checked: vec![0] }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        // Extend the orbit: every known point under the new generator, and every
        // new point under every generator.
        let g = self.gens.len() - 1;
        let mut frontier: Vec<(usize, usize)> = self.orbit.iter().map(|&b| (b, g)).collect();
        while let Some((b, gi)) = frontier.pop() {
            let image = self.gens[gi].image(b);
            if self.transversal[image].is_none() {
                let u = self.transversal[b].as_ref().unwrap().mul(&self.gens[gi]);
                self.transversal[image] = Some(u);
                self.orbit.push(image);
                self.checked.push(0);
                for gj in 0..self.gens.len() {
                    frontier.push((image, gj));
                }
            }
        }
    }
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = StabChain { degree, levels: Vec::new() };
        let gens: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
        if let Some(first) = gens.first() {
            let mut level = Level::new(first.first_moved_point().unwrap(), degree);
            for g in gens {
                level.add_generator(g.clone());
            }
            chain.levels.push(level);
            chain.complete();
        }
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() - 1;
        loop {
            match self.next_unchecked(i) {
                Some((pos, gi)) => {
                    self.levels[i].checked[pos] += 1;
                    let level = &self.levels[i];
                    let b = level.orbit[pos];
                    let s = &level.gens[gi];
                    let image = s.image(b);
                    let u_b = level.transversal[b].as_ref().unwrap();
                    let u_image = level.transversal[image].as_ref().unwrap();
                    let schreier = u_b.mul(s).mul(&u_image.inverse());
                    let (residue, depth) = self.sift_from(schreier, i + 1);
                    if !residue.is_identity() {
                        if depth == self.levels.len() {
                            let base = residue.first_moved_point().unwrap();
                            self.levels.push(Level::new(base, self.degree));
                        }
                        for level in &mut self.levels[i + 1..=depth] {
                            level.add_generator(residue.clone());
                        }
                        i = depth;
                    }
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    fn next_unchecked(&self, i: usize) -> Option<(usize, usize)> {
        let level = &self.levels[i];
        let ngens = level.gens.len();
        level.checked.iter().position(|&c| c < ngens).map(|pos| (pos, level.checked[pos]))
    }

    /// Strips `g` through the levels starting at `start`; returns the residue and
    /// the index of the level where stripping stopped.
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (idx, level) in self.levels.iter().enumerate().skip(start) {
            let image = g.image(level.base);
            match &level.transversal[image] {
                Some(u) => g = g.mul(&u.inverse()),
                None => return (g, idx),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    /// Uniformly random group element, as a product of random coset representatives.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.mul(level.transversal[b].as_ref().unwrap());
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn closure(gens: &[Permutation], n: usize) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(n);
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.mul(s);
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn order_examples() {
        let s5 = StabChain::new(5, &[p("(0 1)", 5), p("(0 1 2 3 4)", 5)]);
        assert_eq!(s5.order(), BigUint::from(120u32));
        assert_eq!(StabChain::new(5, &[p("(0 1 2)", 5)]).order(), BigUint::from(3u32));
        assert_eq!(StabChain::new(5, &[]).order(), BigUint::from(1u32));
    }

    #[test]
    fn agrees_with_closure_on_random_generator_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 150 {
            let n = rng.gen_range(2..=8);
            let count = rng.gen_range(1..=3);
            let gens: Vec<Permutation> = (0..count)
                .map(|_| {
                    // bias toward small subgroups by using short random cycles
                    let len = rng.gen_range(1..=n);
                    let mut pts: Vec<usize> = (0..n).collect();
                    rand::seq::SliceRandom::shuffle(pts.as_mut_slice(), &mut rng);
                    let mut cycles = vec![pts[..len].to_vec()];
                    if rng.gen_bool(0.5) && len + 2 <= n {
                        cycles.push(pts[len..len + 2].to_vec());
                    }
                    Permutation::from_cycles(n, &cycles).unwrap()
                })
                .collect();
            let direct = closure(&gens, n);
            if direct.len() > 10_000 {
                continue;
            }
            let chain = StabChain::new(n, &gens);
            assert_eq!(chain.order(), BigUint::from(direct.len()), "gens {gens:?}");
            for g in &direct {
                assert!(chain.contains(g));
            }
            checked += 1;
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        let a5 = StabChain::new(5, &[p("(0 1 2)", 5), p("(0 1 2 3 4)", 5)]);
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(a5.contains(&p("(0 1)(2 3)", 5)));
        assert!(!a5.contains(&p("(0 1)", 5)));
    }

    #[test]
    fn random_elements_are_members() {
        let chain = StabChain::new(7, &[p("(0 1 2 3 4 5 6)", 7), p("(0 1)(2 3)", 7)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(chain.contains(&chain.random_element(&mut rng)));
        }
    }
}
