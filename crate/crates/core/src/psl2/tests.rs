use std::collections::{HashMap, HashSet};

use rand::SeedableRng;

use super::*;
use crate::structure::{is_unmixed_beauville, type_of};

const SMALL_Q: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

fn g(q: u64) -> Psl2 {
    Psl2::new(q).unwrap()
}

#[test]
fn orders_of_traces_in_f7() {
    let g = g(7);
    assert_eq!(g.ord_of_trace(g.fe(0)), 2);
    assert_eq!(g.ord_of_trace(g.fe(1)), 3);
    assert_eq!(g.ord_of_trace(g.fe(-1)), 3);
    assert_eq!(g.ord_of_trace(g.fe(2)), 7);
    assert_eq!(g.ord_of_trace(g.fe(-2)), 7);
    assert_eq!(g.ord_of_trace(g.fe(3)), 4);
    assert_eq!(g.traces_of_order(7), vec![g.fe(2), g.fe(5)]);
    assert_eq!(g.traces_of_order(2), vec![g.fe(0)]);
    assert!(g.traces_of_order(5).is_empty());
}

#[test]
fn every_trace_triple_is_realised() {
    for q in SMALL_Q {
        let g = g(q);
        let f = g.field();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    let (x, y, z) = g.solve_trace_triple(a, b, c);
                    for m in [&x, &y, &z] {
                        assert_eq!(g.det(m), Fe::ONE);
                    }
                    assert_eq!((g.trace(&x), g.trace(&y), g.trace(&z)), (a, b, c), "q = {q}");
                    assert_eq!(g.sl_mul(&g.sl_mul(&x, &y), &z), g.sl_identity());
                }
            }
        }
    }
}

#[test]
fn singular_diagonal_traces() {
    let odd_prime_powers = (3..=101u64).filter(|&q| q % 2 == 1 && crate::arith::prime_power(q).is_some());
    for q in odd_prime_powers {
        let g = g(q);
        let f = g.field();
        for a in f.elements() {
            let two = g.fe(2);
            let rhs = f.mul(f.square(f.sub(a, two)), f.add(a, Fe::ONE));
            assert_eq!(g.is_singular(a, a, a), rhs.is_zero(), "q = {q}");
        }
    }
    let g2 = g(4);
    assert!(g2.is_singular(Fe::ZERO, Fe::ZERO, Fe::ZERO));
    let g7 = g(7);
    assert!(!g7.is_singular(Fe::ZERO, Fe::ZERO, Fe::ZERO));
    assert!(g7.is_singular(g7.fe(2), g7.fe(2), g7.fe(2)));
}

#[test]
fn small_triples() {
    assert!(Psl2::is_small_orders(2, 2, 9));
    assert!(Psl2::is_small_orders(3, 4, 5));
    assert!(!Psl2::is_small_orders(3, 3, 7));
    assert!(!Psl2::is_small_orders(2, 3, 7));
    let g = g(11);
    assert!(g.is_small(Fe::ZERO, Fe::ZERO, g.fe(3)));
}

#[test]
fn orders_divide_the_three_cyclic_orders() {
    for q in 2..=64u64 {
        if crate::arith::prime_power(q).is_none() {
            continue;
        }
        let g = g(q);
        let d = g.d();
        for a in g.field().elements() {
            let o = g.ord_of_trace(a);
            assert!(g.p() % o == 0 || (q - 1) / d % o == 0 || (q + 1) / d % o == 0, "q = {q}, order {o}");
        }
        assert!(split_and_nonsplit_orders_coprime(q));
    }
}

#[test]
fn descent_matches_iteration() {
    for q in [3u64, 7, 9, 16, 25, 27, 49, 64, 81, 101, 125, 128, 243, 256, 289, 343] {
        let g = g(q);
        for a in g.field().elements() {
            assert_eq!(g.ord_of_trace_by_iteration(a), g.ord_of_trace_by_descent(a), "q = {q}");
        }
    }
}

#[test]
fn orders_agree_with_eigenvalues() {
    for q in [5u64, 7, 9, 11, 13, 25, 27, 31, 49] {
        let g = g(q);
        let f = g.field();
        let ext = f.quadratic_extension().unwrap();
        let big = &ext.field;
        for a in f.elements() {
            if a == g.fe(2) || a == g.fe(-2) {
                continue;
            }
            let roots = big.solve_monic_quadratic(big.neg(ext.embed(a)), Fe::ONE);
            assert_eq!(roots.len(), 2);
            let o = big.multiplicative_order(roots[0]).unwrap();
            let projective = if o % 2 == 0 { o / 2 } else { o };
            assert_eq!(g.ord_of_trace(a), projective, "q = {q}");
        }
    }
}

fn brute_classes(g: &Psl2) -> Vec<HashSet<Mat2>> {
    let els = g.elements().unwrap();
    let mut seen = HashSet::new();
    let mut classes = Vec::new();
    for x in &els {
        if seen.contains(x) {
            continue;
        }
        let class: HashSet<Mat2> = els.iter().map(|s| g.conjugate(x, s)).collect();
        seen.extend(class.iter().copied());
        classes.push(class);
    }
    classes
}

#[test]
fn class_keys_match_brute_conjugation() {
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
        let g = g(q);
        let classes = brute_classes(&g);
        let mut key_of_class = HashMap::new();
        for class in &classes {
            let keys: HashSet<Psl2Key> = class.iter().map(|x| g.class_key(x).unwrap()).collect();
            assert_eq!(keys.len(), 1, "q = {q}: one class, several keys");
            let key = *keys.iter().next().unwrap();
            assert!(key_of_class.insert(key, class.len()).is_none(), "q = {q}: one key, several classes");
            assert_eq!(g.class_size(&key).unwrap(), BigUint::from(class.len()), "q = {q}, key {key:?}");
        }
    }
}

#[test]
fn elements_and_random_elements_are_canonical() {
    for q in [3u64, 4, 7, 9] {
        let g = g(q);
        let els = g.elements().unwrap();
        assert_eq!(els.len() as u64, g.order_u64());
        let set: HashSet<Mat2> = els.iter().copied().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for _ in 0..200 {
            let x = g.random_element(&mut rng);
            assert!(set.contains(&x));
            assert_eq!(g.normalize(&g.sl_neg(&x)), x);
        }
    }
    assert!(g(59).elements().is_none());
}

#[test]
fn json_round_trip() {
    for q in [7u64, 9, 8] {
        let g = g(q);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = g.random_element(&mut rng);
            assert_eq!(g.elem_from_json(&g.elem_to_json(&x)).unwrap(), x);
        }
    }
    let g7 = g(7);
    assert!(g7.elem_from_json(&json!([[1, 1], [1, 1]])).is_err());
    assert_eq!(g7.elem_from_json(&json!([[6, 0], [0, 6]])).unwrap(), g7.identity());
}

#[test]
fn generation_examples() {
    let g = g(7);
    let id = g.identity();
    assert_eq!(g.generates_pair(&id, &id).verdict, Verdict::No);
    let u1 = g.element(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE).unwrap();
    let u2 = g.element(g.fe(3), g.fe(2), Fe::ZERO, g.fe(5)).unwrap();
    let borel = g.generates_pair(&u1, &u2);
    assert_eq!(borel.verdict, Verdict::No);
    assert!(borel.subgroup_order.unwrap() <= BigUint::from(21u32));
}

#[test]
fn certificate_agrees_with_closure_where_both_apply() {
    for q in [7u64, 11, 13, 17, 19, 25, 27, 49] {
        let g = g(q);
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for _ in 0..100 {
            let (x, y) = (g.random_element(&mut rng), g.random_element(&mut rng));
            if g.certifies_generation(&x, &y) {
                assert_eq!(generation_by_closure(&g, &[x, y]).verdict, Verdict::Yes, "q = {q}");
            }
        }
    }
}

#[test]
fn unipotent_triples() {
    for (p, size) in [(7u64, 168u32), (13, 1092)] {
        let t = unipotent_triple(p).unwrap();
        let g = &t.group;
        assert_eq!(type_of(g, &t.triple), vec![p, p, p]);
        assert_eq!(t.generation.subgroup_order, Some(BigUint::from(size)));
        let traces: Vec<Fe> = t.triple.iter().map(|m| g.trace(m)).collect();
        assert!(traces.iter().all(|&a| a == g.fe(2) || a == g.fe(-2)));
    }
    assert_eq!(unipotent_triple(5).unwrap_err(), ConstructError::UnsupportedP(5));
    assert_eq!(unipotent_triple(9).unwrap_err(), ConstructError::UnsupportedP(9));
}

fn sorted_type(t: &[u64]) -> Vec<u64> {
    let mut t = t.to_vec();
    t.sort_unstable();
    t
}

#[test]
fn constructions_verify_independently() {
    for q in [7u64, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
        let c = beauville_psl2(q).unwrap().unwrap_or_else(|| panic!("no structure for q = {q}"));
        let v = is_unmixed_beauville(&c.group, &c.structure);
        assert!(v.is_valid(), "q = {q}: {:?}", v.failure);
        let d = c.group.d();
        let expected = match q {
            7 => [4, 7],
            9 => [4, 5],
            11 => [5, 6],
            _ => [(q - 1) / d, (q + 1) / d],
        };
        assert_eq!(sorted_type(&v.types[0]), vec![expected[0]; 3], "q = {q}");
        assert_eq!(sorted_type(&v.types[1]), vec![expected[1]; 3], "q = {q}");
    }
    for q in [2u64, 3, 4, 5] {
        assert!(beauville_psl2(q).unwrap().is_none());
    }
    assert!(matches!(beauville_psl2(6), Err(ConstructError::UnsupportedQ(6, _))));
}

#[test]
fn typed_constructions() {
    let c = beauville_psl2p_typed(43, 7, 11).unwrap();
    assert_eq!(c.verification.types, [vec![7, 7, 7], vec![11, 11, 11]]);
    assert_eq!(c.verification.generation[0].as_ref().unwrap().subgroup_order, Some(BigUint::from(39732u32)));
    let c = beauville_psl2p_typed(13, 7, 13).unwrap();
    assert_eq!(c.verification.types, [vec![7, 7, 7], vec![13, 13, 13]]);
    assert!(c.verification.is_valid());
    for (p, r, s) in [(43, 6, 10), (43, 7, 5), (43, 7, 13), (43, 14, 11)] {
        assert!(matches!(beauville_psl2p_typed(p, r, s), Err(ConstructError::BadType(_))), "({p}, {r}, {s})");
    }
}
