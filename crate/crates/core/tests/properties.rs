use std::sync::OnceLock;

use proptest::prelude::*;

use qgx_core::hopfpair::{Functionals, PairingEngine};
use qgx_core::ncalg::{word_grade, Family, GenLetter, NCElem, RuleSet};
use qgx_core::qfield::{rat, LaurentPoly};
use qgx_core::wcalc::{Forms, Op};
use qgx_core::{IndexedTensor, RBundle, RatFunc, Word};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 0..4)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, rat(c)))))
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_filter_map("nonzero denominator", |(n, d)| RatFunc::new(n, d).ok())
}

struct Env {
    rules: RuleSet,
    engine: PairingEngine,
    funcs: Functionals,
}

fn env2() -> &'static Env {
    static E: OnceLock<Env> = OnceLock::new();
    E.get_or_init(|| {
        let bundle = RBundle::standard(2);
        Env {
            rules: RuleSet::build(&bundle).unwrap(),
            engine: PairingEngine::new(&bundle).unwrap(),
            funcs: Functionals::new(&bundle),
        }
    })
}

fn forms() -> Forms<'static> {
    let e = env2();
    Forms::new(&e.rules, &e.engine, &e.funcs, 3).unwrap()
}

fn letter(fams: &'static [Family]) -> impl Strategy<Value = GenLetter> {
    (prop::sample::select(fams), 0usize..2, 0usize..2).prop_map(|(f, i, j)| GenLetter::new(f, i, j))
}

const ALL: &[Family] = &[Family::T, Family::W, Family::Y, Family::J];
const FORM: &[Family] = &[Family::T, Family::W];

fn elem(fams: &'static [Family], max_len: usize) -> impl Strategy<Value = NCElem> {
    prop::collection::vec((prop::collection::vec(letter(fams), 0..=max_len), -2i64..=2), 1..3).prop_map(|ts| {
        let mut e = NCElem::zero();
        for (w, c) in ts {
            e.add_term(Word(w), RatFunc::from_int(c) * RatFunc::q_pow(1));
        }
        e
    })
}

/// A form whose terms all have grade ≤ `max_grade`.
fn form(max_len: usize, max_grade: usize) -> impl Strategy<Value = NCElem> {
    elem(FORM, max_len).prop_map(move |e| {
        e.iter()
            .filter(|(w, _)| word_grade(w.letters()) <= max_grade)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    })
}

fn homogeneous(e: &NCElem) -> Option<usize> {
    let mut g = None;
    for (w, _) in e.iter() {
        let k = word_grade(w.letters());
        if g.is_some_and(|x| x != k) {
            return None;
        }
        g = Some(k);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn eval_is_a_homomorphism(a in ratfunc(), b in ratfunc()) {
        let x = rat(2);
        if let (Ok(va), Ok(vb)) = (a.eval_at(&x), b.eval_at(&x)) {
            prop_assert_eq!((&a * &b).eval_at(&x).unwrap(), &va * &vb);
            prop_assert_eq!((&a + &b).eval_at(&x).unwrap(), &va + &vb);
        }
    }

    #[test]
    fn field_text_round_trip(a in ratfunc()) {
        prop_assert_eq!(a.to_string().parse::<RatFunc>().unwrap(), a);
    }

    #[test]
    fn tensor_json_round_trip(es in prop::collection::vec(((0usize..3, 0usize..3, 0usize..3, 0usize..3), ratfunc()), 0..6)) {
        let mut t = IndexedTensor::new(3, 4);
        for ((a, b, c, d), v) in es {
            t.set(vec![a, b, c, d], v);
        }
        prop_assert_eq!(IndexedTensor::from_json(&t.to_json()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_idempotent(e in elem(ALL, 3)) {
        let rs = &env2().rules;
        let a = rs.normal_form(&e).unwrap();
        prop_assert_eq!(rs.normal_form(&a).unwrap(), a.clone());
        for (w, _) in a.iter() {
            prop_assert!(rs.is_normal(w.letters()));
        }
    }

    #[test]
    fn product_associative(a in elem(ALL, 2), b in elem(ALL, 2), c in elem(ALL, 2)) {
        let rs = &env2().rules;
        let l = rs.mul(&rs.mul(&a, &b).unwrap(), &c).unwrap();
        let r = rs.mul(&a, &rs.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn d_is_graded_derivation(a in form(2, 1), b in form(2, 1)) {
        let f = forms();
        prop_assume!(homogeneous(&a).is_some());
        let ga = homogeneous(&a).unwrap();
        let lhs = f.d(&f.mul(&a, &b).unwrap()).unwrap();
        let mut rhs = f.mul(&f.d(&a).unwrap(), &b).unwrap();
        let sign = if ga % 2 == 1 { RatFunc::from_int(-1) } else { RatFunc::one() };
        rhs.add_scaled(&f.mul(&a, &f.d(&b).unwrap()).unwrap(), &sign);
        prop_assert_eq!(lhs, f.nf(&rhs).unwrap());
    }

    #[test]
    fn d_squares_to_zero(a in form(2, 1)) {
        let f = forms();
        prop_assert!(f.d(&f.d(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn fast_and_direct_actions_agree(e in form(2, 2), k in 0usize..4, which in 0usize..4) {
        let f = forms();
        let fs = &env2().funcs;
        let op = match which {
            0 => Op::Gamma(k),
            1 => Op::GammaTilde(k),
            2 => Op::Dual(fs.chi(k).clone()),
            _ => Op::Dual(fs.f(k, (k + 1) % 4).clone()),
        };
        let e = f.nf(&e).unwrap();
        prop_assert_eq!(f.act(&op, &e).unwrap(), f.act_direct(&op, &e).unwrap());
    }
}
