use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use dilatation_core::dilatation::{canonical_twists, largest_real_root};
use dilatation_core::exactalg::{
    degree_pattern, factor_mod_p, factor_over_z, resultant_multi, resultant_subresultant, resultant_uni,
    sturm_count, DegreePattern, ModPoly, MultiPoly, UniPoly,
};
use dilatation_core::penner::{char_poly, rotation_matrix, twist_matrix, word_matrix, IntMatrix, Letter, MappingClassWord};
use dilatation_core::surface::{build_labels, intersection_graph, linked};

fn poly(max_deg: usize, coeff: i64) -> impl Strategy<Value = UniPoly> {
    (1..=max_deg)
        .prop_flat_map(move |d| prop::collection::vec(-coeff..=coeff, d + 1))
        .prop_filter_map("nonzero leading coefficient", |mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            Some(UniPoly::from_i64s(&c))
        })
}

fn unit_monic(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    (1..=max_deg, any::<bool>()).prop_flat_map(|(d, neg)| {
        prop::collection::vec(-3i64..=3, d - 1).prop_map(move |mid| {
            let mut c = vec![if neg { -1 } else { 1 }];
            c.extend(mid);
            c.push(1);
            UniPoly::from_i64s(&c)
        })
    })
}

fn multi_vars() -> std::sync::Arc<Vec<String>> {
    MultiPoly::var_list(&["x", "y", "u", "v"])
}

/// Random polynomial in `x, y, u, v` with small exponents.
fn multi(max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::array::uniform4(0u32..3), -4i64..=4), 1..=max_terms).prop_map(|terms| {
        MultiPoly::from_terms(
            multi_vars(),
            terms.into_iter().map(|(e, c)| (e.to_vec(), BigInt::from(c))),
        )
    })
}

/// `det(xI - M)` by cofactor expansion over polynomial entries.
fn cofactor_char_poly(m: &IntMatrix) -> UniPoly {
    let n = m.dim();
    let entries: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = UniPoly::constant(-m.get(i, j).clone());
                    if i == j {
                        &c + &UniPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    fn det(rows: &[Vec<UniPoly>], cols: &[usize]) -> UniPoly {
        if rows.is_empty() {
            return UniPoly::one();
        }
        let mut acc = UniPoly::zero();
        for (k, &c) in cols.iter().enumerate() {
            if rows[0][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &rows[0][c] * &det(&rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    det(&entries, &(0..n).collect::<Vec<_>>())
}

fn random_word(k: usize) -> impl Strategy<Value = MappingClassWord> {
    let n = 2 * k - 1;
    prop::collection::vec(prop_oneof![Just(Letter::Rotation), (1..=n).prop_map(Letter::Twist)], 0..6)
        .prop_map(move |letters| MappingClassWord::new(k, letters).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_antisymmetry(p in poly(5, 6), q in poly(5, 6)) {
        let pq = resultant_uni(&p, &q).unwrap();
        let qp = resultant_uni(&q, &p).unwrap();
        let sign = if p.deg() * q.deg() % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        prop_assert_eq!(qp, pq * sign);
    }

    #[test]
    fn resultant_engines_agree(p in poly(6, 9), q in poly(6, 9)) {
        prop_assert_eq!(resultant_uni(&p, &q).unwrap(), resultant_subresultant(&p, &q).unwrap());
    }

    #[test]
    fn resultant_is_multiplicative(p in poly(4, 5), q in poly(3, 5), r in poly(3, 5)) {
        let lhs = resultant_uni(&p, &(&q * &r)).unwrap();
        let rhs = resultant_uni(&p, &q).unwrap() * resultant_uni(&p, &r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multivariate_resultant_specializes(p in multi(6), q in multi(6), y in -3i64..=3) {
        let xi = 0;
        prop_assume!(p.contains_var(xi) && q.contains_var(xi));
        let yi = 1;
        let y = BigInt::from(y);
        let (ps, qs) = (p.substitute(yi, &y), q.substitute(yi, &y));
        // Specialization commutes with the resultant when the x-degrees survive.
        prop_assume!(ps.degree_in(xi) == p.degree_in(xi) && qs.degree_in(xi) == q.degree_in(xi));
        let r = resultant_multi(&p, &q, "x").unwrap();
        prop_assert_eq!(r.substitute(yi, &y), resultant_multi(&ps, &qs, "x").unwrap());
    }

    #[test]
    fn unit_reduction_is_a_homomorphism(a in multi(5), b in multi(5)) {
        let units = [1usize, 3];
        let (ra, rb) = (a.reduce_units(&units), b.reduce_units(&units));
        prop_assert_eq!(ra.reduce_units(&units), ra.clone());
        prop_assert_eq!((&a * &b).reduce_units(&units), (&ra * &rb).reduce_units(&units));
        prop_assert_eq!((&a + &b).reduce_units(&units), &ra + &rb);
        // Values agree at every +-1 assignment of the units.
        for (sy, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let pins = [(1usize, BigInt::from(sy)), (3usize, BigInt::from(sv))];
            let full = |p: &MultiPoly| p.substitute(1, &pins[0].1).substitute(3, &pins[1].1);
            prop_assert_eq!(full(&a), full(&ra));
        }
    }

    #[test]
    fn degree_pattern_sums_to_degree(p in unit_monic(10), prime in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101])) {
        match degree_pattern(&p, prime).unwrap() {
            DegreePattern::Usable(ds) => prop_assert_eq!(ds.iter().sum::<usize>(), p.deg()),
            DegreePattern::UnusablePrime => prop_assert!(!factor_mod_p(&p, prime).unwrap().iter().all(|(_, m)| *m == 1)),
        }
    }

    #[test]
    fn modular_factors_reassemble(p in unit_monic(10), prime in prop::sample::select(vec![2u64, 3, 5, 7, 31])) {
        let factors = factor_mod_p(&p, prime).unwrap();
        let mut acc = ModPoly::new(vec![1], prime).unwrap();
        for (f, m) in &factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        prop_assert_eq!(acc, ModPoly::reduce(&p, prime).unwrap());
    }

    #[test]
    fn integer_factors_reassemble(f in unit_monic(5), g in unit_monic(5)) {
        let p = &f * &g;
        prop_assume!(p.is_squarefree());
        let factors = factor_over_z(&p).unwrap();
        prop_assert!(factors.len() >= 2);
        let prod = factors.iter().fold(UniPoly::one(), |acc, h| &acc * h);
        prop_assert!(prod == p || prod == -&p);
    }

    #[test]
    fn sturm_matches_known_roots(
        roots in prop::collection::btree_set(-3000i64..3000, 1..=3),
        a in -3500i64..3500,
        w in 1i64..3000,
    ) {
        // Roots r/1000 separated by at least 10^-3.
        let p = roots.iter().fold(UniPoly::one(), |acc, &r| &acc * &UniPoly::from_i64s(&[-r, 1000]));
        let b = a + w;
        let lo = BigRational::new(BigInt::from(2 * a + 1), BigInt::from(2000));
        let hi = BigRational::new(BigInt::from(2 * b + 1), BigInt::from(2000));
        let expected = roots.iter().filter(|&&r| 2 * r > 2 * a + 1 && 2 * r < 2 * b + 1).count();
        prop_assert_eq!(sturm_count(&p, &lo, &hi).unwrap(), expected);
        // Sign tracking on a grid of width 2.5 * 10^-4 sees the same changes.
        let grid: Vec<BigRational> = ((2 * a + 1) * 500..=(2 * b + 1) * 500)
            .step_by(250)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(1_000_000)))
            .collect();
        let signs: Vec<_> = grid.iter().map(|x| p.eval_rational(x).signum()).filter(|s| !s.is_zero()).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        prop_assert_eq!(changes, expected);
    }

    #[test]
    fn largest_root_brackets_the_true_root(roots in prop::collection::btree_set(-50i64..50, 1..=4), den in 1i64..7) {
        let p = roots.iter().fold(UniPoly::one(), |acc, &r| &acc * &UniPoly::from_i64s(&[-r, den]));
        let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
        let r = largest_real_root(&p, &tol).unwrap();
        let truth = BigRational::new(BigInt::from(*roots.iter().max().unwrap()), BigInt::from(den));
        prop_assert!(r.lo <= truth && truth <= r.hi);
        prop_assert!(r.width() <= tol);
    }

    #[test]
    fn linking_is_symmetric_and_rotation_invariant(k in 2usize..=20, i in 1usize..40, j in 1usize..40, s in 0usize..80) {
        let n = 2 * k - 1;
        let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
        prop_assume!(i != j);
        let d = build_labels(k).unwrap();
        let l = linked(&d, i, j).unwrap();
        prop_assert_eq!(l, linked(&d, j, i).unwrap());
        prop_assert_eq!(l, linked(&d.rotated(s), i, j).unwrap());
    }

    #[test]
    fn graph_is_vertex_transitive(k in 2usize..=30, v in 1usize..60, w in 1usize..60, s in 0usize..60) {
        let g = intersection_graph(k).unwrap();
        let n = g.n;
        let (v, w) = ((v - 1) % n + 1, (w - 1) % n + 1);
        let shift = |x: usize| (x - 1 + s) % n + 1;
        prop_assert_eq!(g.adjacent(v, w), g.adjacent(shift(v), shift(w)));
        prop_assert_eq!(g.degrees()[v - 1], 2);
    }

    #[test]
    fn rotation_conjugates_twists(k in 2usize..=20, i in 1usize..40) {
        let n = 2 * k - 1;
        let i = (i - 1) % n + 1;
        let r = rotation_matrix(k).unwrap();
        let next = i % n + 1;
        // R T_{i+1} R^T = T_i.
        let conj = r.mul(&twist_matrix(k, next).unwrap()).mul(&r.transpose());
        prop_assert_eq!(conj, twist_matrix(k, i).unwrap());
    }

    #[test]
    fn word_matrices_are_nonnegative_unimodular(word in (2usize..=6).prop_flat_map(random_word)) {
        let m = word_matrix(&word).unwrap();
        prop_assert!(m.is_nonnegative());
        prop_assert_eq!(m.determinant().abs(), BigInt::one());
    }

    #[test]
    fn char_poly_matches_cofactor_expansion(word in (2usize..=3).prop_flat_map(random_word)) {
        let m = word_matrix(&word).unwrap();
        prop_assert_eq!(char_poly(&m), cofactor_char_poly(&m));
    }

    #[test]
    fn canonical_form_respects_commutation(k in 3usize..=6, twists in prop::collection::vec(1usize..12, 0..6), pos in 0usize..6) {
        let n = 2 * k - 1;
        let mut w: Vec<usize> = twists.iter().map(|t| (t - 1) % n + 1).collect();
        let canon = canonical_twists(k, &w).unwrap();
        let g = intersection_graph(k).unwrap();
        if pos + 1 < w.len() && !g.adjacent(w[pos], w[pos + 1]) {
            w.swap(pos, pos + 1);
            prop_assert_eq!(canonical_twists(k, &w).unwrap(), canon.clone());
        }
        let shifted: Vec<usize> = w.iter().map(|&t| t % n + 1).collect();
        prop_assert_eq!(canonical_twists(k, &shifted).unwrap(), canon);
    }

    #[test]
    fn conjugate_words_share_char_poly(k in 2usize..=5, j in 0usize..9, twists in prop::collection::vec(1usize..10, 0..5)) {
        let n = 2 * k - 1;
        let w: Vec<usize> = twists.iter().map(|t| (t - 1) % n + 1).collect();
        let word = |tw: &[usize]| {
            let letters = std::iter::repeat_n(Letter::Rotation, j % n).chain(tw.iter().map(|&t| Letter::Twist(t))).collect();
            MappingClassWord::new(k, letters).unwrap()
        };
        let shifted: Vec<usize> = w.iter().map(|&t| (t + n - 2) % n + 1).collect();
        prop_assert_eq!(
            char_poly(&word_matrix(&word(&w)).unwrap()),
            char_poly(&word_matrix(&word(&shifted)).unwrap())
        );
    }
}

#[test]
fn search_radii_are_invariant_under_relabeling() {
    use dilatation_core::dilatation::{search_family, word_dilatation};
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    let k = 3;
    let n = 2 * k - 1;
    let hits = search_family(k, 2, &tol).unwrap();
    let radii = |f: &dyn Fn(usize) -> usize| -> BTreeSet<String> {
        hits.iter()
            .map(|h| {
                let letters = h
                    .word
                    .letters
                    .iter()
                    .map(|l| match *l {
                        Letter::Twist(i) => Letter::Twist(f(i)),
                        Letter::Rotation => Letter::Rotation,
                    })
                    .collect();
                let w = MappingClassWord::new(k, letters).unwrap();
                let (_, r) = word_dilatation(&w, &tol).unwrap().unwrap();
                format!("{:.8}", r.value)
            })
            .collect()
    };
    let base = radii(&|i| i);
    for s in 1..n {
        assert_eq!(radii(&|i| (i - 1 + s) % n + 1), base);
    }
    let min = hits.first().unwrap().dilatation.value;
    assert!(min <= 1.42912 + 1e-10);
}
