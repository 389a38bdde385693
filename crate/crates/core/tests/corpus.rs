use mahler_core::hilbert::{estimate_trdeg, phi_profile};
use mahler_core::relation::{kernel_basis, shift_check};
use mahler_core::scalar::frac;
use mahler_core::{MahlerSystem, Poly, Rational};

fn load(name: &str) -> MahlerSystem {
    let path = format!("{}/../../corpus/{name}.json", env!("CARGO_MANIFEST_DIR"));
    MahlerSystem::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn corpus_roundtrips_through_json() {
    for name in ["trivial", "thue_morse", "cantor2", "cantor3", "singular16"] {
        let sys = load(name);
        assert_eq!(MahlerSystem::from_json(&sys.to_json()).unwrap(), sys, "{name}");
    }
}

#[test]
fn thue_morse_is_the_infinite_product() {
    let f = load("thue_morse").solve_series(128).unwrap();
    let mut prod = Poly::one();
    for n in 0..7 {
        prod = &prod * &(&Poly::one() - &Poly::monomial(Rational::from_integer(1.into()), 1 << n));
    }
    assert_eq!(f[0].to_poly(), prod);
}

#[test]
fn regularity_of_corpus_points() {
    assert!(load("cantor3").certify_regular(&frac(1, 2)).unwrap().regular);
    let cert = load("singular16").certify_regular(&frac(1, 4)).unwrap();
    assert_eq!(cert.failing_k, Some(1));
    assert!(load("singular16").certify_regular(&frac(1, 3)).unwrap().regular);
}

#[test]
fn cantor3_kernel_is_shift_invariant() {
    let sys = load("cantor3");
    let alpha = frac(1, 2);
    let kb = kernel_basis(&sys, &alpha, 1, 1).unwrap();
    assert!(kb.dim() > 0);
    let basis = kb.monomial_basis();
    for v in kb.basis.iter().take(40) {
        assert!(shift_check(&sys, &alpha, &basis, v, 1, &[4, 5]).unwrap());
    }
}

#[test]
fn cantor3_family_has_transcendence_degree_one() {
    let f = load("cantor3").solve_series(96).unwrap();
    let profile = phi_profile(&f, 3, 3, 96).unwrap();
    assert_eq!(profile.phi, vec![1, 2, 3, 4]);
    assert_eq!(estimate_trdeg(&profile).t_hat, 1);
}
