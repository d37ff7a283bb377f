use beauville_core::gf::{Fe, FiniteField};
use proptest::prelude::*;

const ORDERS: [u64; 8] = [2, 3, 4, 8, 9, 25, 27, 49];

fn field(i: usize) -> FiniteField {
    FiniteField::with_order(ORDERS[i % ORDERS.len()]).unwrap()
}

fn el(f: &FiniteField, i: u32) -> Fe {
    f.element(i % f.order() as u32).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(i in 0usize..8, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let (a, b, c) = (el(&f, a), el(&f, b), el(&f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }

    #[test]
    fn inverses_and_frobenius(i in 0usize..8, a in any::<u32>(), b in any::<u32>()) {
        let f = field(i);
        let (a, b) = (el(&f, a), el(&f, b));
        match f.inv(a) {
            Some(x) => prop_assert_eq!(f.mul(a, x), Fe::ONE),
            None => prop_assert!(a.is_zero()),
        }
        let p = f.characteristic();
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn quadratic_roots(i in 0usize..8, b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let (b, c) = (el(&f, b), el(&f, c));
        let roots = f.solve_monic_quadratic(b, c);
        for &x in &roots {
            prop_assert!(f.add(f.add(f.square(x), f.mul(b, x)), c).is_zero());
        }
        let brute = f.elements().filter(|&x| f.add(f.add(f.square(x), f.mul(b, x)), c).is_zero()).count();
        prop_assert_eq!(roots.len(), brute);
    }
}
