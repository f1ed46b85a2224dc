use qgx_core::expr::parse;
use qgx_core::hopfpair::{Functionals, PairingEngine};
use qgx_core::ncalg::{eval_nc, format_nc, relations, RuleOptions, RuleSet};
use qgx_core::rtensor::derive_constants;
use qgx_core::wcalc::{gamma_tilde_factor, sigma_trace_factor};
use qgx_core::{RBundle, RatFunc, StructureConstants};

fn consts(n: usize) -> (RBundle, StructureConstants) {
    let b = RBundle::standard(n);
    let e = PairingEngine::new(&b).unwrap();
    let c = derive_constants(&b, &e, &Functionals::new(&b)).unwrap();
    (b, c)
}

#[test]
fn gamma_tilde_factor_is_d_ratio() {
    let (b, c) = consts(2);
    let x = gamma_tilde_factor(&c).unwrap();
    let m = 4;
    for jj in 0..m {
        for kk in 0..m {
            let want = if jj == kk {
                let (a, bb) = (jj / 2, jj % 2);
                b.d(bb, bb).checked_div(&b.d(a, a)).unwrap()
            } else {
                RatFunc::zero()
            };
            assert_eq!(x[jj * m + kk], want, "({},{})", jj, kk);
        }
    }
}

#[test]
fn trace_contraction_differs_beyond_n1() {
    let (_, c1) = consts(1);
    assert_eq!(gamma_tilde_factor(&c1).unwrap(), sigma_trace_factor(&c1));
    let (_, c2) = consts(2);
    assert_ne!(gamma_tilde_factor(&c2).unwrap(), sigma_trace_factor(&c2));
}

#[test]
fn scalar_wedge_with_j() {
    let rs = RuleSet::build(&RBundle::standard(1)).unwrap();
    let v = eval_nc(&parse("w[1,1]*J[1,1] + J[1,1]*w[1,1]").unwrap(), &rs, None).unwrap();
    assert_eq!(format_nc(&v), "-q^-1");
}

#[test]
fn dropped_tail_is_detected() {
    let b = RBundle::standard(2);
    let bad = RuleSet::build_with(&b, RuleOptions { drop_wj_tail: true }).unwrap();
    let truth = relations(&b, RuleOptions::default());
    let r112 = truth.iter().find(|r| r.name == "(112)").unwrap();
    let residue = r112.eqs.iter().any(|e| !bad.normal_form(e).unwrap().is_zero());
    assert!(residue);
    let good = RuleSet::build(&b).unwrap();
    assert!(r112.eqs.iter().all(|e| good.normal_form(e).unwrap().is_zero()));
}

#[test]
fn sigma_tilde_is_inverse() {
    for n in 1..=2 {
        let (_, c) = consts(n);
        let m = c.dim();
        let s = c.sigma_matrix();
        let st = c.sigma_tilde.to_matrix4();
        assert_eq!(&s * &st, qgx_core::linalg::Matrix::identity(m * m));
    }
}
