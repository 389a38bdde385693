use num_bigint::BigInt;
use proptest::prelude::*;

use mahler_core::lift::lift_linear_relation;
use mahler_core::modular::{crt_push, primes, rational_reconstruct, big_mod, inv_mod, mul_mod};
use mahler_core::relation::monomial::MonomialBasis;
use mahler_core::scalar::{frac, int};
use mahler_core::{CoeffBound, MahlerSystem, Matrix, Poly, RatFunc, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn rat_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(small_rational(), n * n).prop_map(move |v| Matrix::new(n, n, v))
}

fn poly_entry() -> impl Strategy<Value = RatFunc> {
    proptest::collection::vec(-3i64..=3, 1..=3).prop_map(|c| RatFunc::from_poly(Poly::from_i64(&c)))
}

fn cantor3() -> MahlerSystem {
    MahlerSystem::from_json(include_str!("../../../corpus/cantor3.json")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cocycle_identity(entries in proptest::collection::vec(poly_entry(), 4), k in 0u32..=2, l in 0u32..=2) {
        let a = Matrix::new(2, 2, entries);
        let sys = MahlerSystem::new("random", 2, a, None, None);
        prop_assume!(sys.is_ok());
        let sys = sys.unwrap();
        let lhs = sys.cocycle(k + l).unwrap();
        let shifted = sys.cocycle(l).unwrap().map(|r| r.substitute_power(2usize.pow(k)));
        prop_assert_eq!(lhs, sys.cocycle(k).unwrap().mul(&shifted).unwrap());
    }

    #[test]
    fn kron_mixed_product(a in rat_matrix(2), b in rat_matrix(3), c in rat_matrix(2), d in rat_matrix(3)) {
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_determinant(a in rat_matrix(2), b in rat_matrix(3)) {
        let det = a.kron(&b).det();
        let expect = mahler_core::scalar::rat_pow(&a.det(), 3) * mahler_core::scalar::rat_pow(&b.det(), 2);
        prop_assert_eq!(det, expect);
    }

    #[test]
    fn monomial_rank_unrank(nvars in 1usize..=4, d1 in 0u32..=4, d2 in 0u32..=4, seed in any::<u64>()) {
        let basis = MonomialBasis::new(nvars, d1, d2).unwrap();
        let idx = (seed % basis.len() as u64) as usize;
        let (nu, lambda) = basis.entry(idx);
        prop_assert!(nu.iter().all(|&e| e <= d1) && lambda <= d2);
        prop_assert_eq!(basis.len() as u64, (d1 as u64 + 1).pow(nvars as u32) * (d2 as u64 + 1));
        prop_assert_eq!(basis.index_of(&nu, lambda), idx);
    }

    #[test]
    fn reconstruction_roundtrip(n in -100_000i64..=100_000, d in 1i64..=100_000) {
        let r = frac(n, d);
        let mut acc = (BigInt::from(0), BigInt::from(1));
        for p in primes(0, 3) {
            let num = big_mod(r.numer(), p);
            let den = inv_mod(big_mod(r.denom(), p), p).unwrap();
            crt_push(&mut acc, mul_mod(num, den, p), p);
        }
        prop_assert_eq!(rational_reconstruct(&acc.0, &acc.1), Some(r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lift_roundtrip(den in 2i64..=7, scale in 1i64..=5) {
        let sys = cantor3();
        let alpha = frac(1, den);
        let c = int(scale);
        let tau = vec![c.clone(), -c.clone(), &c * &alpha];
        let r = lift_linear_relation(&sys, &alpha, &tau, 1, 48).unwrap();
        prop_assert_eq!(r.specialize(&alpha), tau);
        prop_assert!(r.residual_order >= 48);
    }

    #[test]
    fn series_satisfy_system(order in 8usize..=64) {
        for text in [include_str!("../../../corpus/cantor2.json"), include_str!("../../../corpus/thue_morse.json")] {
            let sys = MahlerSystem::from_json(text).unwrap();
            let f = sys.solve_series(order).unwrap();
            prop_assert_eq!(sys.verify_solution(&f), order);
        }
    }
}

#[test]
fn bound_fields_parse() {
    let sys = cantor3();
    assert_eq!(sys.coeff_bound, Some(CoeffBound { c: int(2), rho: int(1) }));
}
