use hypglue::hyperboloid::{exact_is_isometry, exact_reflection, ExactMatrix};
use hypglue::numfield::{Embedding, FieldElement, FieldTag};
use hypglue::qforms::{build_counting_family, split_prime, Certificate, DiagonalForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const Q: FieldTag = FieldTag::Rationals;
const K: FieldTag = FieldTag::RationalsSqrt2;

fn elem(field: FieldTag) -> impl Strategy<Value = FieldElement> {
    let b = if field == Q { Just(0i64).boxed() } else { (-40i64..40).boxed() };
    (-60i64..60, 1i64..12, b, 1i64..12).prop_map(move |(an, ad, bn, bd)| {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        FieldElement::new(r(an, ad), r(bn, bd), field).unwrap()
    })
}

fn any_elem() -> impl Strategy<Value = FieldElement> {
    prop_oneof![elem(Q), elem(K)]
}

fn int_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..6, len)
}

fn to_field(v: &[i64], field: FieldTag) -> Vec<FieldElement> {
    v.iter().map(|&x| FieldElement::from_int(x, field)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn field_axioms(x in elem(K), y in elem(K), z in elem(K)) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
    }

    #[test]
    fn conjugation_is_an_automorphism(x in elem(K), y in elem(K)) {
        let c = |e: &FieldElement| e.galois_conjugate();
        prop_assert_eq!(c(&(&x * &y)), &c(&x) * &c(&y));
        prop_assert_eq!(c(&(&x + &y)), &c(&x) + &c(&y));
        prop_assert_eq!(c(&c(&x)), x.clone());
        prop_assert_eq!(x.embed(Embedding::Sigma), c(&x));
    }

    #[test]
    fn sign_matches_floating_evaluation(x in any_elem()) {
        for &e in x.field().embeddings() {
            let v = x.to_f64_at(e);
            let s = x.sign_at(e);
            if v.abs() > 1e-9 {
                prop_assert_eq!(s, v.signum() as i8);
            }
        }
    }

    #[test]
    fn squares_are_squares(x in any_elem()) {
        let sq = &x * &x;
        prop_assert!(sq.is_square());
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(&r * &r, sq.clone());
        if x.is_square() {
            prop_assert!(x.is_zero() || x.is_totally_positive());
        }
    }

    #[test]
    fn text_round_trip(x in any_elem()) {
        prop_assert_eq!(FieldElement::parse(&x.to_string(), x.field()).unwrap(), x.clone());
    }

    #[test]
    fn reflections_are_exact_involutions(v in int_vec(4), field in prop_oneof![Just(Q), Just(K)]) {
        let f = DiagonalForm::counting_base(3, field);
        let v = to_field(&v, field);
        prop_assume!(f.evaluate(&v).unwrap().sign() > 0);
        let r = exact_reflection(&f, &v).unwrap();
        prop_assert!(r.mul(&r).unwrap().is_identity());
        prop_assert!(exact_is_isometry(&f, &r));
        let neg: Vec<_> = v.iter().map(|x| -x).collect();
        prop_assert_eq!(r.apply(&v).unwrap(), neg);
    }

    #[test]
    fn restriction_stays_admissible(v in int_vec(4), field in prop_oneof![Just(Q), Just(K)]) {
        let f = DiagonalForm::counting_base(3, field);
        let v = to_field(&v, field);
        let fv = f.evaluate(&v).unwrap();
        prop_assume!(fv.sign() > 0);
        let g = f.restrict_to_orthogonal(&v).unwrap();
        prop_assert_eq!(g.dimension(), 3);
        prop_assert!(g.is_admissible());
    }

    #[test]
    fn permutation_is_never_certified_inequivalent(c in proptest::collection::vec(1i64..30, 3), seed in 0usize..6) {
        let mut coeffs = vec![-2];
        coeffs.extend(c);
        let f = DiagonalForm::from_ints(Q, &coeffs).unwrap();
        let perms = [[0, 1, 2, 3], [1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [0, 3, 1, 2], [1, 2, 3, 0]];
        let g = f.permuted(&perms[seed]);
        prop_assert_eq!(f.equivalence_certificate(&g).unwrap(), Certificate::Unknown);
        prop_assert_eq!(g.signature_at(Embedding::Identity), f.signature_at(Embedding::Identity));
    }

    #[test]
    fn direct_sum_keeps_admissibility(q in 1i64..50, n in 2usize..6, field in prop_oneof![Just(Q), Just(K)]) {
        let f = DiagonalForm::counting_base(n, field);
        let g = f.direct_sum(&FieldElement::from_int(q, field)).unwrap();
        prop_assert_eq!(g.dimension(), f.dimension() + 1);
        prop_assert_eq!(g.field(), field);
        prop_assert!(g.is_admissible());
    }
}

/// Brute-force oracle: search for `(c + d√2)² = x` with small denominators.
fn square_by_search(x: &FieldElement) -> bool {
    let field = x.field();
    for den in 1..=6i64 {
        for c in -30..=30i64 {
            let ds: Vec<i64> = if field == Q { vec![0] } else { (-30..=30).collect() };
            for d in ds {
                let r = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
                let y = FieldElement::new(r(c), r(d), field).unwrap();
                if &(&y * &y) == x {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn square_decisions_agree_with_search() {
    let cases = [(5, 0), (2, 0), (3, 2), (6, 4), (9, 0), (1, 1), (11, 6), (7, 0), (18, 8)];
    for (a, b) in cases {
        for field in [Q, K] {
            if field == Q && b != 0 {
                continue;
            }
            let x = FieldElement::from_ints(a, b, field);
            assert_eq!(x.is_square(), square_by_search(&x), "{x:?}");
        }
    }
    assert!(!FieldElement::from_int(5, K).is_square());
    assert!(FieldElement::from_int(2, K).is_square());
    assert!(!FieldElement::from_int(2, Q).is_square());
}

#[test]
fn field_examples() {
    let one_plus = FieldElement::from_ints(1, 1, K);
    assert_eq!(&one_plus * &FieldElement::from_ints(1, -1, K), FieldElement::from_int(-1, K));
    assert_eq!(one_plus.inverse().unwrap(), FieldElement::from_ints(-1, 1, K));
    assert_eq!(FieldElement::sqrt2().sign_at(Embedding::Sigma), -1);
    assert_eq!(FieldElement::from_ints(3, 1, K).sign_at(Embedding::Sigma), 1);
    assert!(FieldElement::from_int(1, Q).checked_add(&FieldElement::from_int(1, K)).is_err());
    assert!(FieldElement::from_int(1, Q).checked_div(&FieldElement::zero(Q)).is_err());
}

#[test]
fn restriction_oracle() {
    // basis {(1,0,0), (0,1,-1)} of (0,1,1)^⊥ has Gram matrix diag(-1, 2)
    let f = DiagonalForm::from_ints(Q, &[-1, 1, 1]).unwrap();
    let g = f.restrict_to_orthogonal(&to_field(&[0, 1, 1], Q)).unwrap();
    let expected = DiagonalForm::from_ints(Q, &[-1, 2]).unwrap();
    assert_eq!(g.equivalence_certificate(&expected).unwrap(), Certificate::Unknown);
    assert_eq!(g.signature_at(Embedding::Identity), expected.signature_at(Embedding::Identity));
    let axis = f.restrict_to_orthogonal(&to_field(&[0, 0, 1], Q)).unwrap();
    assert_eq!(axis, DiagonalForm::from_ints(Q, &[-1, 1]).unwrap());
    assert!(f.restrict_to_orthogonal(&to_field(&[1, 1, 0], Q)).is_err());
}

#[test]
fn admissibility_examples() {
    let f3 = DiagonalForm::counting_base(3, K);
    assert_eq!(f3.signature_at(Embedding::Sigma).positives, 4);
    assert!(f3.is_admissible());
    assert!(!DiagonalForm::parse(K, "-r2,-1,1").unwrap().is_admissible());
    assert!(!DiagonalForm::from_ints(K, &[-3, 1, 1]).unwrap().is_admissible());
    assert!(DiagonalForm::from_ints(Q, &[-3, 1, 1]).unwrap().is_admissible());
    assert!(DiagonalForm::lorentzian(2, Q).direct_sum(&FieldElement::from_int(-1, Q)).is_err());
    assert!(DiagonalForm::lorentzian(2, K).direct_sum(&FieldElement::sqrt2()).is_err());
}

#[test]
fn counting_families() {
    for n in 2..=8 {
        for field in [Q, K] {
            let fam = build_counting_family(n, field).unwrap();
            assert_eq!(fam.members.len(), 6);
            assert!(fam.base.is_admissible());
            for m in &fam.members {
                assert!(m.form.is_admissible());
                assert_eq!(m.form.dimension(), n + 1);
                assert!(m.prime.is_totally_positive());
            }
            for (i, j, c) in fam.certificates() {
                assert!(c.is_non_equivalent(), "n={n} {field}: {i} vs {j}");
            }
        }
    }
    let q3 = build_counting_family(3, Q).unwrap();
    let primes: Vec<String> = q3.members.iter().map(|m| m.prime.to_string()).collect();
    assert_eq!(primes, ["2", "3", "5", "7", "11", "13"]);
}

#[test]
fn prime_splitting_oracle() {
    // p splits in ℤ[√2] iff p = 2 or p ≡ ±1 mod 8
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 43, 47] {
        let splits = p == 2 || p % 8 == 1 || p % 8 == 7;
        assert_eq!(split_prime(p).is_some(), splits, "p = {p}");
        if let Some((a, b)) = split_prime(p) {
            assert_eq!((a * a - 2 * b * b).unsigned_abs(), p);
        }
    }
}

#[test]
fn exact_matrix_identities() {
    let f = DiagonalForm::lorentzian(2, Q);
    let r = exact_reflection(&f, &to_field(&[0, 0, 1], Q)).unwrap();
    assert_eq!(r, ExactMatrix::from_ints(Q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap());
    assert!(!exact_is_isometry(&f, &ExactMatrix::from_ints(Q, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]).unwrap()));
    let s = exact_reflection(&f, &to_field(&[1, 2, 1], Q)).unwrap();
    assert!(exact_is_isometry(&f, &r.mul(&s).unwrap()));
}
