use std::collections::HashMap;
use std::hash::Hash;

/// Conjugacy classes of an enumerated group, found by closing each element under
/// conjugation by the generators. Classes are numbered in order of their first
/// element in the enumeration.
#[derive(Clone, Debug)]
pub struct ClassTable<E> {
    index: HashMap<E, u32>,
    sizes: Vec<u64>,
    reps: Vec<E>,
}

impl<E: Clone + Eq + Hash> ClassTable<E> {
    pub fn build(elements: &[E], gens: &[E], conj: impl Fn(&E, &E) -> E) -> Self {
        let mut index = HashMap::with_capacity(elements.len());
        let mut sizes = Vec::new();
        let mut reps = Vec::new();
        for x in elements {
            if index.contains_key(x) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x.clone());
            index.insert(x.clone(), id);
            let mut size = 1u64;
            let mut frontier = vec![x.clone()];
            while let Some(y) = frontier.pop() {
                for s in gens {
                    let z = conj(&y, s);
                    if !index.contains_key(&z) {
                        index.insert(z.clone(), id);
                        size += 1;
                        frontier.push(z);
                    }
                }
            }
            sizes.push(size);
        }
        ClassTable { index, sizes, reps }
    }

    pub fn key(&self, x: &E) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn size(&self, key: u32) -> Option<u64> {
        self.sizes.get(key as usize).copied()
    }

    pub fn representatives(&self) -> &[E] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}
