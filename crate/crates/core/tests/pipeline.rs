use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dilatation_core::dilatation::{check_maximality, dilatation_of_phi, search_family, verify_maximality, MaximalityCertificate};
use dilatation_core::exactalg::{brute_force_factor, UniPoly};
use dilatation_core::irreducibility::{
    check_certificate, prove_by_elimination, prove_irreducible, prove_irreducible_with, EliminationOptions,
    Engine, IrreducibilityCertificate, Payload, ProveOptions, Verdict,
};
use dilatation_core::penner::{ls_polynomial, MappingClassWord};

/// Monic, constant term +-1, middle coefficients in [-2, 2].
fn corpus(degree: usize) -> impl Iterator<Item = UniPoly> {
    let count = 2 * 5u64.pow(degree as u32 - 1);
    (0..count).map(move |index| {
        let mut c = vec![0i64; degree + 1];
        c[degree] = 1;
        c[0] = if index % 2 == 0 { 1 } else { -1 };
        let mut rest = index / 2;
        for coeff in c.iter_mut().take(degree).skip(1) {
            *coeff = (rest % 5) as i64 - 2;
            rest /= 5;
        }
        UniPoly::from_i64s(&c)
    })
}

#[test]
fn pipeline_agrees_with_exhaustive_search() {
    for degree in 1..=7 {
        for p in corpus(degree) {
            let cert = prove_irreducible(&p).unwrap();
            let oracle = brute_force_factor(&p, degree / 2).unwrap();
            match (&cert.verdict, &oracle) {
                (Verdict::Irreducible, None) => {}
                (Verdict::Reducible { factors }, Some(_)) => {
                    assert_eq!(factors.iter().fold(UniPoly::one(), |a, f| &a * f), p);
                }
                other => panic!("{p}: {other:?}"),
            }
            check_certificate(&cert).unwrap_or_else(|e| panic!("{p}: {e}"));
        }
    }
}

#[test]
fn certificates_survive_json() {
    for k in 2..=12 {
        let cert = prove_irreducible(&ls_polynomial(k).unwrap()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: IrreducibilityCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        check_certificate(&back).unwrap();
    }
    let reducible = &UniPoly::from_i64s(&[-1, -1, -1, 1]) * &UniPoly::from_i64s(&[1, 0, 1]);
    let cert = prove_irreducible(&reducible).unwrap();
    assert_eq!(cert.engine, Engine::Zassenhaus);
    let back: IrreducibilityCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    check_certificate(&back).unwrap();
}

#[test]
fn attached_traces_replay_after_json() {
    let options = ProveOptions {
        attach_elimination: true,
        ..ProveOptions::default()
    };
    let cert = prove_irreducible_with(&ls_polynomial(3).unwrap(), &options).unwrap();
    let traces = cert.elimination.as_ref().unwrap();
    assert_eq!(traces.len(), 4);
    assert!(traces.iter().all(|t| t.is_contradiction()));
    let back: IrreducibilityCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    check_certificate(&back).unwrap();

    let mut tampered = back.clone();
    let t = &mut tampered.elimination.as_mut().unwrap()[0];
    t.steps[0].result = t.steps[0].result.scale(&BigInt::from(2));
    assert!(check_certificate(&tampered).is_err());
}

#[test]
fn elimination_alone_decides_small_members() {
    for k in [2, 3] {
        let cert = prove_by_elimination(&ls_polynomial(k).unwrap(), &EliminationOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Irreducible, "k={k}");
        check_certificate(&cert).unwrap();
    }
    // Beyond the linear split the greedy search runs out of moves; the
    // certificate says so instead of guessing.
    let options = EliminationOptions {
        max_steps: 40,
        ..EliminationOptions::default()
    };
    let cert = prove_by_elimination(&ls_polynomial(4).unwrap(), &options).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    let Payload::Elimination { traces } = &cert.payload else {
        panic!("wrong payload")
    };
    assert!(traces.iter().filter(|t| t.split == (6, 1)).all(|t| t.is_contradiction()));
    check_certificate(&cert).unwrap();
}

#[test]
fn maximality_at_k_10() {
    let cert = verify_maximality(10).unwrap();
    assert_eq!((cert.degree, cert.homology_dim), (19, 19));
    let back: MaximalityCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    check_maximality(&back).unwrap();
}

#[test]
fn random_products_are_reducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let mut f = || {
            let d = rng.gen_range(1..=6);
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
            c[d] = rng.gen_range(1..=3);
            UniPoly::from_i64s(&c).primitive_part()
        };
        let (a, b) = (f(), f());
        let p = &a * &b;
        if p.deg() == 0 || !p.content().is_one() {
            continue;
        }
        let cert = prove_irreducible(&p).unwrap();
        assert!(matches!(cert.verdict, Verdict::Reducible { .. }), "{p}");
        check_certificate(&cert).unwrap();
    }
}

#[test]
fn dilatation_exceeds_one_along_the_family() {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(9)));
    for k in 2..=20 {
        let r = dilatation_of_phi(k, &tol).unwrap();
        assert!(r.lo > BigRational::one(), "k={k}");
    }
}

#[test]
fn search_examples() {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    let hits = search_family(3, 1, &tol).unwrap();
    let phi = MappingClassWord::phi(3).unwrap();
    let hit = hits.iter().find(|h| h.word == phi).expect("r.T1 is listed");
    assert!((hit.dilatation.value - 1.42912).abs() < 1e-4);
    assert!(hits.iter().all(|h| h.dilatation.value > 1.0));
    assert!(search_family(2, 0, &tol).unwrap().is_empty());
    let wider = search_family(3, 2, &tol).unwrap();
    assert!(wider[0].dilatation.value <= 1.42912 + 1e-10);
    assert!(wider.windows(2).all(|w| w[0].dilatation.lo <= w[1].dilatation.lo));
}
