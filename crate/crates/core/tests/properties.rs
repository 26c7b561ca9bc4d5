use proptest::prelude::*;

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{random, Curve, Model};
use hurwitz_tr::oracle::hurwitz_number;
use hurwitz_tr::series::{reconstruct, Poly, Series};
use hurwitz_tr::trengine::{Recursion, TrEngine};
use hurwitz_tr::verify::cross::closed_values;
use hurwitz_tr::verify::lemmas::cvy;
use hurwitz_tr::{Scalar, Q};

fn small_q() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Q::new(n, d))
}

fn exact_model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::simple_hurwitz()), Just(Model::monotone_hurwitz()), Just(Model::dessins())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_is_symmetric_in_k(m in exact_model(), g in 0u32..=1, mut k in prop::collection::vec(1u32..=3, 1..=3), seed in any::<u64>()) {
        let a = hurwitz_number(&m, g, &k).unwrap();
        let n = k.len();
        k.rotate_left(seed as usize % n);
        prop_assert_eq!(a, hurwitz_number(&m, g, &k).unwrap());
    }

    #[test]
    fn closed_formula_matches_oracle(m in exact_model(), g in 0u32..=1, mut k in prop::collection::vec(1u32..=3, 1..=3)) {
        k.sort_unstable();
        let cf = ClosedForm::<Q>::new(&m).unwrap();
        let c = closed_values(&cf, g, std::slice::from_ref(&k)).unwrap();
        prop_assert_eq!(&c[&k], &hurwitz_number(&m, g, &k).unwrap());
    }

    #[test]
    fn exp_inverts_log(c in prop::collection::vec(small_q(), 1..6)) {
        let mut coeffs = vec![Q::one()];
        coeffs.extend(c);
        let f = Series::from_coeffs(coeffs, 12);
        let back = f.log().unwrap().exp().unwrap();
        for e in 0..12 {
            prop_assert_eq!(back.coeff(e), f.coeff(e));
        }
    }

    #[test]
    fn reversion_is_a_compositional_inverse(c in prop::collection::vec(small_q(), 0..5)) {
        let mut coeffs = vec![Q::zero(), Q::one()];
        coeffs.extend(c);
        let f = Series::from_coeffs(coeffs, 10);
        let id = f.compose(&f.reversion().unwrap()).unwrap();
        prop_assert_eq!(id.coeff(1), Q::one());
        for e in 2..id.prec {
            prop_assert_eq!(id.coeff(e), Q::zero());
        }
    }

    #[test]
    fn pade_recovers_rational_functions(num in prop::collection::vec(small_q(), 1..4), den in prop::collection::vec(small_q(), 0..3)) {
        let p = Poly::new(num);
        let mut d = vec![Q::one()];
        d.extend(den);
        let q = Poly::new(d);
        let s = p.to_series(40).div_ref(&q.to_series(40)).unwrap();
        let r = reconstruct(&s, 8).unwrap();
        prop_assert_eq!(r.num.mul_ref(&q), p.mul_ref(&r.den));
    }

    #[test]
    fn c2k_at_integers_is_a_product(m in 2i64..=7) {
        // at v = m the operator is a product of m shifts
        let c = cvy(3);
        let mut prod = vec![Q::one()];
        for i in 0..m {
            let a = Q::new(2 * i - m + 1, 2);
            let mut next = vec![Q::zero(); prod.len() + 1];
            for (j, x) in prod.iter().enumerate() {
                next[j] += x.clone();
                next[j + 1] += x.clone() * a.clone();
            }
            prod = next;
        }
        for (k, ck) in c.iter().enumerate() {
            prop_assert_eq!(ck.eval(&Q::int(m)), prod.get(2 * k).cloned().unwrap_or_else(Q::zero));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn random_models_are_usable(seed in any::<u64>()) {
        for m in [random::family_i(seed), random::family_ii(seed)] {
            prop_assert!(m.validate().is_ok());
            prop_assert_eq!(m.clone(), match &m {
                Model::FamilyI { .. } => random::family_i(seed),
                _ => random::family_ii(seed),
            });
        }
    }
}

#[test]
fn omega_is_symmetric() {
    for m in [Model::simple_hurwitz(), Model::monotone_hurwitz(), Model::dessins()] {
        let mut e = TrEngine::new(Curve::<Q>::build(&m).unwrap(), Recursion::Tr).unwrap();
        for (g, n) in [(0, 3), (0, 4), (1, 2), (2, 1)] {
            assert_eq!(e.omega(g, n).unwrap().asymmetry(), 0.0, "{} ({g},{n})", m.fingerprint());
        }
    }
}
