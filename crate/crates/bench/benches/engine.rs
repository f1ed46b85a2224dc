use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qgx_core::expr::parse;
use qgx_core::hopfpair::{Functionals, PairingEngine};
use qgx_core::ncalg::{check_overlaps, eval_nc, RuleSet};
use qgx_core::rtensor::{build_r, check_hecke, check_ybe, derive_constants};
use qgx_core::wcalc::{dt, Forms, Op};
use qgx_core::RBundle;

fn rtensor(c: &mut Criterion) {
    c.bench_function("ybe and hecke, n = 3", |b| {
        b.iter(|| {
            let r = build_r(3);
            black_box(check_ybe(&r) && check_hecke(&r).unwrap())
        })
    });
    let bundle = RBundle::standard(2);
    let engine = PairingEngine::new(&bundle).unwrap();
    let funcs = Functionals::new(&bundle);
    c.bench_function("structure constants, n = 2", |b| {
        b.iter(|| black_box(derive_constants(&bundle, &engine, &funcs).unwrap()))
    });
}

fn ncalg(c: &mut Criterion) {
    let bundle = RBundle::standard(2);
    let rules = RuleSet::build(&bundle).unwrap();
    let e = parse("J[1,2]*Y[2,1]*w[1,1]*t[2,2]*t[1,1]").unwrap();
    c.bench_function("normal form of a mixed word, n = 2", |b| {
        b.iter(|| black_box(eval_nc(&e, &rules, None).unwrap()))
    });
    let mut g = c.benchmark_group("overlaps");
    g.sample_size(10);
    g.bench_function("degree-3 overlaps, n = 2", |b| b.iter(|| black_box(check_overlaps(&rules).unwrap())));
    g.finish();
}

fn wcalc(c: &mut Criterion) {
    let bundle = RBundle::standard(2);
    let rules = RuleSet::build(&bundle).unwrap();
    let engine = PairingEngine::new(&bundle).unwrap();
    let funcs = Functionals::new(&bundle);
    let forms = Forms::new(&rules, &engine, &funcs, 3).unwrap();
    let rho = forms.mul(&dt(2, 0, 1), &dt(2, 1, 0)).unwrap();
    c.bench_function("d of dt dt, n = 2", |b| b.iter(|| black_box(forms.d(&rho).unwrap())));
    let chi = Op::Dual(funcs.chi(1).clone());
    c.bench_function("chi on dt dt, direct, n = 2", |b| b.iter(|| black_box(forms.act_direct(&chi, &rho).unwrap())));
}

criterion_group!(benches, rtensor, ncalg, wcalc);
criterion_main!(benches);
