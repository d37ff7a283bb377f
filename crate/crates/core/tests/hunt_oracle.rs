use beauville_core::arith::is_prime_64;
use beauville_core::hunt::{crt_target, hunt, PrimeStatus};
use beauville_core::structure::is_unmixed_beauville;
use num_bigint::BigUint;
use proptest::prelude::*;

fn by_trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[test]
fn miller_rabin_matches_trial_division_up_to_a_million() {
    for n in 0..=1_000_000u64 {
        assert_eq!(is_prime_64(n), by_trial_division(n), "n = {n}");
    }
}

#[test]
fn miller_rabin_on_large_inputs() {
    assert!(is_prime_64(18_446_744_073_709_551_557));
    assert!(!is_prime_64(18_446_744_073_709_551_559));
    // 149491 · 747451 · 34233211, a strong pseudoprime to every prime base up to 23
    assert_eq!(149_491u64 * 747_451 * 34_233_211, 3_825_123_056_546_413_051);
    assert!(!is_prime_64(3_825_123_056_546_413_051));
    assert!(is_prime_64((1 << 61) - 1));
    assert!(!is_prime_64(((1u64 << 31) - 1) * ((1 << 31) - 1)));
}

#[test]
fn hunt_seven_eleven() {
    let h = hunt(7, 11, 1, 1_000_000).unwrap();
    assert_eq!((h.x, h.modulus), (43, 154));
    assert_eq!(h.primes.len(), 1);
    let p = &h.primes[0];
    assert_eq!((p.p, p.k, p.status), (43, 0, PrimeStatus::Verified));
    let c = p.construction.as_ref().unwrap();
    let v = is_unmixed_beauville(&c.group, &c.structure);
    assert!(v.is_valid());
    assert_eq!(v.types, [vec![7, 7, 7], vec![11, 11, 11]]);
    let order = BigUint::from(39_732u32);
    for g in v.generation.iter() {
        assert_eq!(g.as_ref().unwrap().subgroup_order.as_ref(), Some(&order));
    }
    assert_eq!(p.structure.as_ref().unwrap()["verified"], true);
}

#[test]
fn first_three_primes_in_the_progression() {
    let expected: Vec<u64> = (0..).map(|k| 43 + 154 * k).filter(|&p| by_trial_division(p)).take(3).collect();
    let h = hunt(7, 11, 3, 1_000_000).unwrap();
    let got: Vec<u64> = h.primes.iter().map(|p| p.p).collect();
    assert_eq!(got, expected);
    for p in &h.primes {
        assert_eq!(p.status, PrimeStatus::Verified, "p = {}", p.p);
        assert_eq!(((p.p - 1) / 2) % 7, 0);
        assert_eq!(((p.p + 1) / 2) % 11, 0);
        let c = p.construction.as_ref().unwrap();
        assert_eq!(is_unmixed_beauville(&c.group, &c.structure).types, [vec![7, 7, 7], vec![11, 11, 11]]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn hunted_primes_lie_in_the_progression(r in 6u64..40, s in 6u64..40) {
        let Ok(t) = crt_target(r, s) else { return Ok(()) };
        prop_assert!(t.x < t.modulus);
        prop_assert_eq!(t.x % (2 * t.r), 1);
        prop_assert_eq!((t.x + 1) % t.s, 0);
        let h = hunt(r, s, 1, 100_000).unwrap();
        let p = &h.primes[0];
        prop_assert_eq!(p.p % t.modulus, t.x);
        prop_assert_eq!(((p.p - 1) / 2) % t.r, 0);
        prop_assert_eq!(((p.p + 1) / 2) % t.s, 0);
        if p.status == PrimeStatus::Verified {
            let c = p.construction.as_ref().unwrap();
            let v = is_unmixed_beauville(&c.group, &c.structure);
            prop_assert!(v.is_valid());
            prop_assert_eq!(v.types, [vec![t.r; 3], vec![t.s; 3]]);
        }
    }
}
