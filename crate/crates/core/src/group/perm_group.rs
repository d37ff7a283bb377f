use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::symmetric::permutation_from_json;
use super::{closure, ClassTable, Generation, Group, GroupError, ENUMERATION_CAP};
use crate::perm::{Permutation, StabChain, MAX_DEGREE};

/// A permutation group given by generators. Groups of at most
/// [`ENUMERATION_CAP`] elements are enumerated once and get a class table.
#[derive(Clone, Debug)]
pub struct PermGroup {
    label: String,
    degree: usize,
    gens: Vec<Permutation>,
    chain: StabChain,
    order: BigUint,
    elements: Option<Vec<Permutation>>,
    table: Option<ClassTable<Permutation>>,
}

impl PermGroup {
    pub fn new(label: &str, degree: usize, gens: Vec<Permutation>) -> Result<Self, GroupError> {
        if degree > MAX_DEGREE {
            return Err(GroupError::BadSpec(label.into(), format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::BadSpec(label.into(), format!("generator {g} does not have degree {degree}")));
        }
        let chain = StabChain::new(degree, &gens);
        let order = chain.order();
        let (elements, table) = match order.to_usize().filter(|&o| o <= ENUMERATION_CAP) {
            Some(_) => {
                let mut els: Vec<Permutation> = closure_of(degree, &gens).into_iter().collect();
                els.sort();
                let table = ClassTable::build(&els, &gens, |x, s| x.conjugate_by(s));
                (Some(els), Some(table))
            }
            None => (None, None),
        };
        Ok(PermGroup { label: label.into(), degree, gens, chain, order, elements, table })
    }

    /// Reads either a JSON list of generators or an object
    /// `{"degree": n, "generators": [...]}`. Generators may be cycle-notation strings
    /// or image vectors; without an explicit degree it is the largest point plus one.
    pub fn from_json_text(label: &str, text: &str) -> Result<Self, GroupError> {
        let bad = |why: String| GroupError::BadSpec(label.into(), why);
        let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let (degree, list) = match &v {
            Value::Array(list) => (None, list.clone()),
            Value::Object(map) => {
                let list = map.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing \"generators\"".into()))?;
                (map.get("degree").and_then(Value::as_u64).map(|d| d as usize), list.clone())
            }
            _ => return Err(bad("expected a list of generators".into())),
        };
        let degree = match degree {
            Some(d) => d,
            None => {
                let mut d = 0;
                for g in &list {
                    let p = match g {
                        Value::String(s) => Permutation::parse(s, None),
                        other => Permutation::parse(&other.to_string(), None),
                    }
                    .map_err(|e| bad(e.to_string()))?;
                    d = d.max(p.degree());
                }
                d
            }
        };
        let gens = list.iter().map(|g| permutation_from_json(g, degree)).collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(label, degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }
}

fn closure_of(degree: usize, gens: &[Permutation]) -> std::collections::HashSet<Permutation> {
    let mut seen = std::collections::HashSet::new();
    let id = Permutation::identity(degree);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = x.mul(s);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

impl Group for PermGroup {
    type Elem = Permutation;
    type Key = u32;

    fn spec(&self) -> String {
        format!("perm:{}", self.label)
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.mul(b)
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn elem_order(&self, a: &Permutation) -> u64 {
        a.order() as u64
    }

    fn order(&self) -> BigUint {
        self.order.clone()
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Permutation {
        self.chain.random_element(rng)
    }

    fn elements(&self) -> Option<Vec<Permutation>> {
        self.elements.clone()
    }

    fn class_key(&self, a: &Permutation) -> Option<u32> {
        self.table.as_ref().and_then(|t| t.key(a))
    }

    fn class_size(&self, key: &u32) -> Option<BigUint> {
        self.table.as_ref().and_then(|t| t.size(*key)).map(BigUint::from)
    }

    fn generation(&self, gens: &[Permutation]) -> Generation {
        if self.elements.is_some() {
            if let Ok(set) = closure(self, gens, ENUMERATION_CAP) {
                return Generation::exact(BigUint::from(set.len()), &self.order, "closure");
            }
        }
        Generation::exact(StabChain::new(self.degree, gens).order(), &self.order, "stabilizer chain")
    }

    fn elem_to_json(&self, a: &Permutation) -> Value {
        Value::String(a.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Permutation, GroupError> {
        let g = permutation_from_json(v, self.degree)?;
        if !self.chain.contains(&g) {
            return Err(GroupError::BadElement(v.to_string(), format!("not an element of {}", self.spec())));
        }
        Ok(g)
    }
}
