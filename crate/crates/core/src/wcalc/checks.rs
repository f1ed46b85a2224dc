use rayon::prelude::*;

use crate::hopfpair::{functional_eq, probe_letters, t_words, AElem, ALetter, DualElem, Functionals, PairingEngine};
use crate::lincomb::Word;
use crate::ncalg::{Family, GenLetter, NCElem, ShowNc};
use crate::qfield::RatFunc;
use crate::report::{Report, Witness};
use crate::rtensor::{RBundle, StructureConstants};

use super::{dt, pair_ops, t, w, FLetter, FormElem, Forms, Op, WcalcError};

fn wit(e: WcalcError) -> Witness {
    Witness(e.to_string())
}

fn all_ok(rs: Vec<Result<(), Witness>>) -> Result<(), Witness> {
    rs.into_iter().collect::<Result<Vec<()>, Witness>>().map(|_| ())
}

fn zero_or(forms: &Forms, e: &FormElem, what: impl FnOnce() -> String) -> Result<(), Witness> {
    let z = forms.nf(e).map_err(wit)?;
    if z.is_zero() {
        Ok(())
    } else {
        Err(Witness(format!("{}: residual {}", what(), ShowNc(&z))))
    }
}

fn form_of(a: &[ALetter]) -> FormElem {
    FormElem::word(a.iter().map(|l| GenLetter::t(l.row, l.col)).collect())
}

fn show(e: &FormElem) -> String {
    ShowNc(e).to_string()
}

/// The test family {t, t·dt, dt·dt}, each entry labelled.
pub fn test_family(n: usize) -> Vec<(String, FormElem)> {
    let mut out = Vec::new();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    for &(i, j) in &idx {
        out.push((format!("t[{},{}]", i + 1, j + 1), t(i, j)));
    }
    for &(i, j) in &idx {
        for &(k, l) in &idx {
            out.push((format!("t[{},{}]*d(t[{},{}])", i + 1, j + 1, k + 1, l + 1), &t(i, j) * &dt(n, k, l)));
        }
    }
    for &(i, j) in &idx {
        for &(k, l) in &idx {
            out.push((format!("d(t[{},{}])*d(t[{},{}])", i + 1, j + 1, k + 1, l + 1), &dt(n, i, j) * &dt(n, k, l)));
        }
    }
    out
}

/// Grade-1 right-leg words `a Ω^K b` with |a| + |b| ≤ len.
fn grade_one_words(n: usize, len: usize) -> Vec<Vec<FLetter>> {
    let words = t_words(n, len);
    let mut out = Vec::new();
    for a in &words {
        for b in &words {
            if a.len() + b.len() > len {
                continue;
            }
            for k in 0..n * n {
                let mut v: Vec<FLetter> = a.iter().map(|l| FLetter::A(*l)).collect();
                v.push(FLetter::W(k / n, k % n));
                v.extend(b.iter().map(|l| FLetter::A(*l)));
                out.push(v);
            }
        }
    }
    out
}

fn fmt_fword(w: &[FLetter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*")
}

/// d(dΩ) replay, d∘d = 0, the graded Leibniz rule, coassociativity of the graded coproduct and
/// the action on products through the coproducts of χ, f and γ.
pub fn exterior_check(forms: &Forms) -> Report {
    let n = forms.n();
    let cap = forms.cap();
    let mut rep = Report::new();
    rep.push("(98) d of Maurer-Cartan forms from d(dT) = 0", None, forms.d_omega_self_test());

    let mut grade0: Vec<FormElem> = t_words(n, 2).iter().map(|a| form_of(a)).collect();
    let mut grade1: Vec<FormElem> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            grade1.push(w(i, j));
            grade1.push(dt(n, i, j));
            for k in 0..n {
                for l in 0..n {
                    grade1.push(&t(i, j) * &w(k, l));
                }
            }
        }
    }
    let mut dd_family: Vec<FormElem> = Vec::new();
    dd_family.append(&mut grade0);
    if cap >= 3 {
        dd_family.append(&mut grade1);
    }
    let dd = if cap < 2 {
        Err(Witness(format!("grade cap {} leaves no room for d(d(e))", cap)))
    } else {
        all_ok(
            dd_family
                .par_iter()
                .map(|e| {
                    let d2 = forms.d(&forms.d(&forms.nf(e).map_err(wit)?).map_err(wit)?).map_err(wit)?;
                    zero_or(forms, &d2, || format!("d(d({}))", show(e)))
                })
                .collect(),
        )
    };
    rep.push("d(d(e)) = 0", None, dd);

    let mut basic: Vec<FormElem> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            basic.push(t(i, j));
            basic.push(w(i, j));
            basic.push(dt(n, i, j));
        }
    }
    let grade = |e: &FormElem| forms.grade(e).map(|g| g.unwrap_or(0));
    let pairs: Vec<(&FormElem, &FormElem)> =
        basic.iter().flat_map(|a| basic.iter().map(move |b| (a, b))).collect();
    let leib = all_ok(
        pairs
            .par_iter()
            .map(|(a, b)| {
                let (ga, gb) = (grade(a).map_err(wit)?, grade(b).map_err(wit)?);
                if ga + gb + 1 > cap {
                    return Ok(());
                }
                let ab = forms.mul(a, b).map_err(wit)?;
                let lhs = forms.d(&ab).map_err(wit)?;
                let t1 = forms.mul(&forms.d(a).map_err(wit)?, b).map_err(wit)?;
                let t2 = forms.mul(a, &forms.d(b).map_err(wit)?).map_err(wit)?;
                let t2 = if ga % 2 == 1 { -&t2 } else { t2 };
                let res = &(&lhs - &t1) - &t2;
                zero_or(forms, &res, || format!("d({} * {})", show(a), show(b)))
            })
            .collect(),
    );
    rep.push("(2) graded Leibniz rule", None, leib);

    rep.push("(99) coassociativity", None, coassociativity(forms));
    rep.push("(11) action on products", None, action_on_products(forms));
    rep
}

/// `x ▷ (y ▷ ρ)` against `ρ₁ <x y, ρ₂>` with the pairing taken through the right-leg coproduct.
fn coassociativity(forms: &Forms) -> Result<(), Witness> {
    let n = forms.n();
    let m = n * n;
    let mut ops: Vec<Op> = (0..m).map(Op::Gamma).collect();
    ops.extend((0..m).map(|i| Op::Dual(forms.funcs().chi(i).clone())));
    let mut rhos: Vec<FormElem> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            rhos.push(w(i, j));
            rhos.push(dt(n, i, j));
        }
    }
    rhos.push(&w(0, n - 1) * &w(n - 1, 0));
    let rhos = &rhos;
    let jobs: Vec<(&Op, &Op, &FormElem)> = ops
        .iter()
        .flat_map(|x| ops.iter().flat_map(move |y| rhos.iter().map(move |r| (x, y, r))))
        .collect();
    all_ok(
        jobs.par_iter()
            .map(|&(x, y, rho)| {
                let rho = forms.nf(rho).map_err(wit)?;
                let lhs = forms.act_direct(x, &forms.act_direct(y, &rho).map_err(wit)?).map_err(wit)?;
                let two = super::graded_coproduct(&rho, n).map_err(wit)?;
                let xy = [x.clone(), y.clone()];
                let grade = x.grade() + y.grade();
                let mut rhs = FormElem::zero();
                for ((w1, w2), c) in two.iter() {
                    let v = pair_ops(forms.engine(), forms.funcs(), &xy, w2.letters()).map_err(|e| Witness(e.to_string()))?;
                    if v.is_zero() {
                        continue;
                    }
                    let v = &v * c;
                    let odd = grade * crate::ncalg::word_grade(w1.letters()) % 2 == 1;
                    rhs.add_term(w1.clone(), if odd { -v } else { v });
                }
                zero_or(forms, &(&lhs - &rhs), || format!("{:?} {:?} on {}", x, y, show(&rho)))
            })
            .collect(),
    )
}

/// `x ▷ (e₁e₂) = (−1)^{|x₂||e₁|} (x₁ ▷ e₁)(x₂ ▷ e₂)` with Δχ_I = 1⊗χ_I + χ_J⊗f^J_I,
/// Δf^I_J = f^I_K⊗f^K_J and Δγ_I = 1⊗γ_I + γ_J⊗f^J_I.
fn action_on_products(forms: &Forms) -> Result<(), Witness> {
    let n = forms.n();
    let m = n * n;
    let fs = forms.funcs();
    let last = n - 1;
    let sample = &[t(0, last), t(last, 0), w(0, last), w(last, last), dt(n, last, 0)];
    let f_op = |u: usize, l: usize| Op::Dual(fs.f(u, l).clone());
    // (operator, its coproduct as pairs)
    let mut cases: Vec<(Op, Vec<(Op, Op)>)> = Vec::new();
    for i in 0..m {
        let mut d = vec![(Op::one(), Op::Dual(fs.chi(i).clone()))];
        d.extend((0..m).map(|j| (Op::Dual(fs.chi(j).clone()), f_op(j, i))));
        cases.push((Op::Dual(fs.chi(i).clone()), d));
        let mut g = vec![(Op::one(), Op::Gamma(i))];
        g.extend((0..m).map(|j| (Op::Gamma(j), f_op(j, i))));
        cases.push((Op::Gamma(i), g));
        for j in 0..m {
            cases.push((f_op(i, j), (0..m).map(|k| (f_op(i, k), f_op(k, j))).collect()));
        }
    }
    let jobs: Vec<(&(Op, Vec<(Op, Op)>), &FormElem, &FormElem)> = cases
        .iter()
        .flat_map(|c| sample.iter().flat_map(move |a| sample.iter().map(move |b| (c, a, b))))
        .collect();
    all_ok(
        jobs.par_iter()
            .map(|&((x, cop), a, b)| {
                let ab = forms.mul(a, b).map_err(wit)?;
                if forms.grade(&ab).map_err(wit)?.unwrap_or(0) > forms.cap() {
                    return Ok(());
                }
                let lhs = forms.act_direct(x, &ab).map_err(wit)?;
                let ga = forms.grade(a).map_err(wit)?.unwrap_or(0);
                let mut rhs = FormElem::zero();
                for (x1, x2) in cop {
                    let p = forms.mul(&forms.act_direct(x1, a).map_err(wit)?, &forms.act_direct(x2, b).map_err(wit)?).map_err(wit)?;
                    let s = if x2.grade() * ga % 2 == 1 { -RatFunc::one() } else { RatFunc::one() };
                    rhs.add_scaled(&p, &s);
                }
                zero_or(forms, &(&lhs - &rhs), || format!("{:?} on {} * {}", x, show(a), show(b)))
            })
            .collect(),
    )
}

/// Cartan identity and its ingredients on the test family.
pub fn cartan_check(forms: &Forms) -> Report {
    let n = forms.n();
    let m = n * n;
    let fs = forms.funcs();
    let mut rep = Report::new();
    let family: Vec<(String, FormElem)> = test_family(n)
        .into_iter()
        .map(|(s, e)| {
            let e = forms.nf(&e).unwrap_or(e);
            (s, e)
        })
        .collect();

    let words = t_words(n, 2);
    let r64 = all_ok(
        (0..m)
            .into_par_iter()
            .flat_map(|i| words.par_iter().map(move |a| (i, a)))
            .map(|(i, a)| {
                let a = form_of(a);
                let g = forms.act(&Op::Gamma(i), &a).map_err(wit)?;
                if !g.is_zero() {
                    return Err(Witness(format!("gamma_{} on {} gives {}", i, show(&a), show(&g))));
                }
                let l = forms.act(&Op::Gamma(i), &forms.d(&a).map_err(wit)?).map_err(wit)?;
                let r = forms.act(&Op::Dual(fs.chi(i).clone()), &a).map_err(wit)?;
                zero_or(forms, &(&l - &r), || format!("gamma_{} on d({})", i, show(&a)))
            })
            .collect(),
    );
    rep.push("(64)", None, r64);

    let cap_ok = |e: &FormElem| forms.grade(e).map(|g| g.unwrap_or(0) < forms.cap()).unwrap_or(false);
    let jobs: Vec<(usize, &(String, FormElem))> =
        (0..m).flat_map(|i| family.iter().map(move |f| (i, f))).collect();
    let r63 = all_ok(
        jobs.par_iter()
            .map(|&(i, (label, e))| {
                if !cap_ok(e) {
                    return Err(Witness(format!("{} exceeds the grade cap", label)));
                }
                let chi = forms.act(&Op::Dual(fs.chi(i).clone()), e).map_err(wit)?;
                let a = forms.d(&forms.act(&Op::Gamma(i), e).map_err(wit)?).map_err(wit)?;
                let b = forms.act(&Op::Gamma(i), &forms.d(e).map_err(wit)?).map_err(wit)?;
                zero_or(forms, &(&(&chi - &a) - &b), || format!("index {} on {}", i, label))
            })
            .collect(),
    );
    rep.push("(63)", None, r63);

    let mut hs: Vec<(String, DualElem)> = Vec::new();
    for i in 0..m {
        hs.push((format!("chi_{}", i), fs.chi(i).clone()));
        for j in 0..m {
            hs.push((format!("f^{}_{}", i, j), fs.f(i, j).clone()));
        }
    }
    for l in probe_letters(n) {
        hs.push((l.to_string(), DualElem::letter(l)));
    }
    let jobs: Vec<(&(String, DualElem), &(String, FormElem))> =
        hs.iter().flat_map(|h| family.iter().map(move |f| (h, f))).collect();
    let r58 = all_ok(
        jobs.par_iter()
            .map(|&((hl, h), (label, e))| {
                let op = Op::Dual(h.clone());
                let a = forms.act(&op, &forms.d(e).map_err(wit)?).map_err(wit)?;
                let b = forms.d(&forms.act(&op, e).map_err(wit)?).map_err(wit)?;
                zero_or(forms, &(&a - &b), || format!("{} on {}", hl, label))
            })
            .collect(),
    );
    rep.push("(58)", None, r58);
    rep
}

/// `<γ_I, da> = <χ_I, a>` and `<γ_I, a db> = ε(a) <χ_I, b>` on t-words.
pub fn dstar_check(forms: &Forms, degree: usize) -> Report {
    let n = forms.n();
    let m = n * n;
    let engine = forms.engine();
    let fs = forms.funcs();
    let mut rep = Report::new();
    let words = t_words(n, degree);
    let r38 = all_ok(
        words
            .par_iter()
            .map(|a| {
                let da = forms.d(&form_of(a)).map_err(wit)?;
                let ae = AElem::word(a.clone());
                for i in 0..m {
                    let l = forms.pair_form(&Op::Gamma(i), &da).map_err(wit)?;
                    let r = engine.pair(fs.chi(i), &ae).map_err(|e| Witness(e.to_string()))?;
                    if l != r {
                        return Err(Witness(format!("index {} on {}: {} vs {}", i, show(&form_of(a)), l, r)));
                    }
                }
                Ok(())
            })
            .collect(),
    );
    rep.push("(38)", Some(degree), r38);

    let pairs: Vec<(&Vec<ALetter>, &Vec<ALetter>)> = words
        .iter()
        .flat_map(|a| words.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.len() + b.len() <= degree)
        .collect();
    let r75 = all_ok(
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let adb = forms.mul(&form_of(a), &forms.d(&form_of(b)).map_err(wit)?).map_err(wit)?;
                let eps = crate::hopfpair::counit_a(&AElem::word(a.clone()));
                for i in 0..m {
                    let l = forms.pair_form(&Op::Gamma(i), &adb).map_err(wit)?;
                    let r = &eps * &engine.pair(fs.chi(i), &AElem::word(b.clone())).map_err(|e| Witness(e.to_string()))?;
                    if l != r {
                        return Err(Witness(format!(
                            "index {} on {} d({}): {} vs {}",
                            i,
                            show(&form_of(a)),
                            show(&form_of(b)),
                            l,
                            r
                        )));
                    }
                }
                Ok(())
            })
            .collect(),
    );
    rep.push("(75)", Some(degree), r75);
    rep
}

fn delta(a: usize, b: usize) -> RatFunc {
    if a == b {
        RatFunc::one()
    } else {
        RatFunc::zero()
    }
}

/// Brackets of γγ with aΩΩ and of γ̃γ̃ with ΩΩa against the structure constants.
pub fn brackets_check(forms: &Forms, consts: &StructureConstants) -> Report {
    let n = forms.n();
    let m = n * n;
    let (engine, fs) = (forms.engine(), forms.funcs());
    let mut rep = Report::new();
    let a_words = t_words(n, 1);
    let quads: Vec<[usize; 4]> = (0..m.pow(4)).map(|x| [x / (m * m * m), (x / (m * m)) % m, (x / m) % m, x % m]).collect();
    for tilde in [false, true] {
        let res = all_ok(
            quads
                .par_iter()
                .map(|&[i, j, k, l]| {
                    for a in &a_words {
                        let eps = crate::hopfpair::counit_a(&AElem::word(a.clone()));
                        let av = a.iter().map(|x| FLetter::A(*x));
                        let ww = [FLetter::W(k / n, k % n), FLetter::W(l / n, l % n)];
                        let (ops, word, want) = if !tilde {
                            let word: Vec<FLetter> = av.chain(ww).collect();
                            let want = &consts.sigma(i, j, k, l) - &(&delta(i, k) * &delta(j, l));
                            ([Op::Gamma(i), Op::Gamma(j)], word, want)
                        } else {
                            let word: Vec<FLetter> = ww.into_iter().chain(av).collect();
                            let want = &(&delta(j, k) * &delta(i, l)) - &consts.sigma_tilde(j, i, k, l);
                            ([Op::GammaTilde(i), Op::GammaTilde(j)], word, want)
                        };
                        let got = pair_ops(engine, fs, &ops, &word).map_err(|e| Witness(e.to_string()))?;
                        let want = &eps * &want;
                        if got != want {
                            return Err(Witness(format!("({},{},{},{}) on {}: {} vs {}", i, j, k, l, fmt_fword(&word), got, want)));
                        }
                    }
                    Ok(())
                })
                .collect(),
        );
        rep.push(if tilde { "(89)" } else { "(57)" }, None, res);
    }
    rep
}

fn exchange(
    engine: &PairingEngine,
    funcs: &Functionals,
    degree: usize,
    g: fn(usize) -> Op,
    moved: impl Fn(&PairingEngine, &DualElem, usize, usize) -> DualElem + Sync,
) -> Result<(), Witness> {
    let n = engine.n();
    let m = n * n;
    let words = grade_one_words(n, degree.saturating_sub(1));
    let probes = probe_letters(n);
    let jobs: Vec<(usize, DualElem)> =
        (0..m).flat_map(|i| probes.iter().map(move |h| (i, DualElem::letter(*h)))).collect();
    all_ok(
        jobs.par_iter()
            .map(|(i, h)| {
                let moved: Vec<DualElem> = (0..m).map(|j| moved(engine, h, j, *i)).collect();
                for wd in &words {
                    let pe = |ops: &[Op]| pair_ops(engine, funcs, ops, wd).map_err(|e| Witness(e.to_string()));
                    let lhs = pe(&[g(*i), Op::Dual(h.clone())])?;
                    let mut rhs = RatFunc::zero();
                    for (j, hj) in moved.iter().enumerate() {
                        if !hj.is_zero() {
                            rhs += &pe(&[Op::Dual(hj.clone()), g(j)])?;
                        }
                    }
                    if lhs != rhs {
                        return Err(Witness(format!("index {} with {} on {}: {} vs {}", i, crate::hopfpair::Show(h), fmt_fword(wd), lhs, rhs)));
                    }
                }
                Ok(())
            })
            .collect(),
    )
}

/// `γ_I h = (r^J_I ▷ h) γ_J` tested on grade-one words.
pub fn check_gamma_exchange(engine: &PairingEngine, funcs: &Functionals, degree: usize) -> Result<(), Witness> {
    exchange(engine, funcs, degree, Op::Gamma, |e, h, j, i| e.a_act_left(&funcs.r(j, i), h))
}

/// `γ̃_I h = (h ◁ r^J_I) γ̃_J` tested on grade-one words.
pub fn check_gamma_tilde_exchange(engine: &PairingEngine, funcs: &Functionals, degree: usize) -> Result<(), Witness> {
    exchange(engine, funcs, degree, Op::GammaTilde, |e, h, j, i| e.a_act_right(h, &funcs.r(j, i)))
}

/// The tilded generators: (76), (79), (80), (84), (85), (87), (88).
pub fn tilded_check(forms: &Forms, bundle: &RBundle, consts: &StructureConstants, degree: usize) -> Report {
    let n = forms.n();
    let m = n * n;
    let (engine, fs) = (forms.engine(), forms.funcs());
    let mut rep = Report::new();
    let words = t_words(n, 2);

    let r76 = all_ok(
        words
            .par_iter()
            .map(|a| {
                let a = form_of(a);
                let lhs = forms.d(&a).map_err(wit)?;
                let mut rhs = FormElem::zero();
                for i in 0..m {
                    let x = forms.act(&Op::Dual(fs.chi_tilde(i).clone()), &a).map_err(wit)?;
                    rhs = &rhs + &(&w(i / n, i % n) * &x);
                }
                zero_or(forms, &(&lhs - &rhs), || format!("d({})", show(&a)))
            })
            .collect(),
    );
    rep.push("(76)", None, r76);

    let jobs: Vec<(&Vec<ALetter>, usize)> = words.iter().flat_map(|a| (0..m).map(move |j| (a, j))).collect();
    let r79 = all_ok(
        jobs.par_iter()
            .map(|&(a, j)| {
                let a = form_of(a);
                let lhs = &a * &w(j / n, j % n);
                let mut rhs = FormElem::zero();
                for i in 0..m {
                    let x = forms.act(&Op::Dual(fs.phi(j, i).clone()), &a).map_err(wit)?;
                    rhs = &rhs + &(&w(i / n, i % n) * &x);
                }
                zero_or(forms, &(&lhs - &rhs), || format!("{} * w[{},{}]", show(&a), j / n + 1, j % n + 1))
            })
            .collect(),
    );
    rep.push("(79)", None, r79);

    rep.push("(80)", Some(degree), check_80(forms, consts, degree));
    rep.push("(81)", None, tilde_coproduct(forms));

    let (r84, r85) = tilde_rules(forms, bundle, consts);
    rep.push("(84)", None, r84);
    rep.push("(85)", None, r85);

    let gw = grade_one_words(n, degree.saturating_sub(1));
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let r87 = all_ok(
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let ct = |k: usize| Op::Dual(fs.chi_tilde(k).clone());
                for wd in &gw {
                    let pe = |ops: &[Op]| pair_ops(engine, fs, ops, wd).map_err(|e| Witness(e.to_string()));
                    let mut lhs = pe(&[Op::GammaTilde(i), ct(j)])?;
                    let mut rhs = RatFunc::zero();
                    for k in 0..m {
                        for l in 0..m {
                            let s = consts.sigma_tilde(j, i, k, l);
                            if !s.is_zero() {
                                lhs -= &(&s * &pe(&[ct(l), Op::GammaTilde(k)])?);
                            }
                        }
                        let c = consts.c_tilde(i, j, k);
                        if !c.is_zero() {
                            rhs += &(&c * &pe(&[Op::GammaTilde(k)])?);
                        }
                    }
                    if lhs != rhs {
                        return Err(Witness(format!("({},{}) on {}: {} vs {}", i, j, fmt_fword(wd), lhs, rhs)));
                    }
                }
                Ok(())
            })
            .collect(),
    );
    rep.push("(87)", Some(degree), r87);

    let r88 = all_ok(
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let ct = |k: usize| fs.chi_tilde(k);
                let mut lhs = ct(i) * ct(j);
                let mut rhs = DualElem::zero();
                for k in 0..m {
                    for l in 0..m {
                        let s = consts.sigma_tilde(j, i, k, l);
                        if !s.is_zero() {
                            lhs.add_scaled(&(ct(l) * ct(k)), &-s);
                        }
                    }
                    rhs.add_scaled(ct(k), &consts.c_tilde(i, j, k));
                }
                functional_eq(engine, &lhs, &rhs, degree).map_err(|w| Witness(format!("({},{}): {}", i, j, w)))
            })
            .collect(),
    );
    rep.push("(88)", Some(degree), r88);
    rep
}

/// φ = S⁻¹(f), χ̃_I = φ^J_I χ_J, and γ̃_I = X^{JK} γ_J φ^K_I with X from [`gamma_tilde_factor`].
fn check_80(forms: &Forms, consts: &StructureConstants, degree: usize) -> Result<(), Witness> {
    let n = forms.n();
    let m = n * n;
    let (engine, fs) = (forms.engine(), forms.funcs());
    let words = t_words(n, degree);
    let pe = |e: crate::hopfpair::PairingError| Witness(e.to_string());
    for a in &words {
        let ae = AElem::word(a.clone());
        let sa = engine.antipode_a(&ae);
        for u in 0..m {
            for l in 0..m {
                let x = engine.pair(fs.phi(u, l), &sa).map_err(pe)?;
                let y = engine.pair(fs.f(u, l), &ae).map_err(pe)?;
                if x != y {
                    return Err(Witness(format!("phi^{}_{} on S({}): {} vs {}", u, l, show(&form_of(a)), x, y)));
                }
            }
        }
    }
    for i in 0..m {
        let mut alt = DualElem::zero();
        for j in 0..m {
            alt = &alt + &(fs.phi(j, i) * fs.chi(j));
        }
        functional_eq(engine, fs.chi_tilde(i), &alt, degree).map_err(|w| Witness(format!("chi-tilde {}: {}", i, w)))?;
    }
    let x = gamma_tilde_factor(consts)?;
    let gw = grade_one_words(n, degree.saturating_sub(1));
    for i in 0..m {
        for wd in &gw {
            let lhs = pair_ops(engine, fs, &[Op::GammaTilde(i)], wd).map_err(pe)?;
            let mut rhs = RatFunc::zero();
            for j in 0..m {
                for k in 0..m {
                    let s = &x[j * m + k];
                    if s.is_zero() {
                        continue;
                    }
                    let v = pair_ops(engine, fs, &[Op::Gamma(j), Op::Dual(fs.phi(k, i).clone())], wd).map_err(pe)?;
                    rhs += &(s * &v);
                }
            }
            if lhs != rhs {
                return Err(Witness(format!("gamma-tilde {} on {}: {} vs {}", i, fmt_fword(wd), lhs, rhs)));
            }
        }
    }
    Ok(())
}

/// `γ̃_I ▷ (e₁e₂) = (γ̃_I ▷ e₁) e₂ + (−1)^{|e₁|} (φ^J_I ▷ e₁)(γ̃_J ▷ e₂)`.
fn tilde_coproduct(forms: &Forms) -> Result<(), Witness> {
    let n = forms.n();
    let m = n * n;
    let fs = forms.funcs();
    let last = n - 1;
    let sample = &[t(0, last), t(last, 0), w(0, last), w(last, last), dt(n, last, 0)];
    let jobs: Vec<(usize, &FormElem, &FormElem)> = (0..m)
        .flat_map(|i| sample.iter().flat_map(move |a| sample.iter().map(move |b| (i, a, b))))
        .collect();
    all_ok(
        jobs.par_iter()
            .map(|&(i, a, b)| {
                let ab = forms.mul(a, b).map_err(wit)?;
                let lhs = forms.act_direct(&Op::GammaTilde(i), &ab).map_err(wit)?;
                let ga = forms.grade(a).map_err(wit)?.unwrap_or(0);
                let mut rhs = forms.mul(&forms.act_direct(&Op::GammaTilde(i), a).map_err(wit)?, b).map_err(wit)?;
                for j in 0..m {
                    let p = forms
                        .mul(
                            &forms.act_direct(&Op::Dual(fs.phi(j, i).clone()), a).map_err(wit)?,
                            &forms.act_direct(&Op::GammaTilde(j), b).map_err(wit)?,
                        )
                        .map_err(wit)?;
                    let s = if ga % 2 == 1 { -RatFunc::one() } else { RatFunc::one() };
                    rhs.add_scaled(&p, &s);
                }
                zero_or(forms, &(&lhs - &rhs), || format!("gamma-tilde {} on {} * {}", i, show(a), show(b)))
            })
            .collect(),
    )
}

/// (84) and (85) in the algebra with γ̃ and χ̃ realized through J and Y.
fn tilde_rules(forms: &Forms, bundle: &RBundle, consts: &StructureConstants) -> (Result<(), Witness>, Result<(), Witness>) {
    let n = forms.n();
    let m = n * n;
    let rules = forms.rules();
    let li = bundle.lambda.inv().expect("lambda is nonzero");
    let letter = |f: Family, i: usize, j: usize| NCElem::letter(GenLetter::new(f, i, j));
    // γ̃_(k,l) = −Σ_j J^l_j D⁻¹^j_k
    let gt = |x: usize| {
        let (k, l) = (x / n, x % n);
        let mut e = NCElem::zero();
        for j in 0..n {
            e.add_scaled(&letter(Family::J, l, j), &-bundle.dinv(j, k));
        }
        e
    };
    // χ̃_(k,l) = −Σ_j X^l_j D⁻¹^j_k with X = (1 − Y)/λ
    let xt = |x: usize| {
        let (k, l) = (x / n, x % n);
        let mut e = NCElem::zero();
        for j in 0..n {
            let d = &bundle.dinv(j, k) * &li;
            e.add_scaled(&letter(Family::Y, l, j), &d);
            if l == j {
                e.add_term(Word::empty(), -d);
            }
        }
        e
    };
    let wl = |x: usize| letter(Family::W, x / n, x % n);
    let mut r84 = Ok(());
    let mut r85 = Ok(());
    for i in 0..m {
        for j in 0..m {
            let mut e85 = &gt(i) * &wl(j);
            let mut e84 = &xt(i) * &wl(j);
            for k in 0..m {
                for l in 0..m {
                    let s = consts.sigma_tilde(i, k, j, l);
                    if !s.is_zero() {
                        e85.add_scaled(&(&wl(k) * &gt(l)), &s);
                        e84.add_scaled(&(&wl(k) * &xt(l)), &-s);
                    }
                }
                e84.add_scaled(&wl(k), &-consts.c_tilde(k, i, j));
            }
            e85.add_term(Word::empty(), -delta(i, j));
            for (res, e, name) in [(&mut r84, e84, "(84)"), (&mut r85, e85, "(85)")] {
                if res.is_err() {
                    continue;
                }
                match rules.normal_form(&e) {
                    Ok(z) if z.is_zero() => {}
                    Ok(z) => *res = Err(Witness(format!("{} at ({},{}): residual {}", name, i, j, ShowNc(&z)))),
                    Err(x) => *res = Err(Witness(x.to_string())),
                }
            }
        }
    }
    (r84, r85)
}

/// The coefficients `X^{JK}` (flattened J*m + K) with `Σ_{JK} X^{JK} σ̃_{SJ}^{LK} = δ_S^L`.
///
/// Moving φ to the left of γ with the exchange rule for γ turns `X^{JK} γ_J φ^K_I` into
/// `φ^S_I γ_L` times this contraction, and `γ̃_I = φ^J_I γ_J` holds exactly. For the standard
/// R-matrix the solution is diagonal, `X^{(a,b)(a,b)} = D^b_b / D^a_a`.
pub fn gamma_tilde_factor(consts: &StructureConstants) -> Result<Vec<RatFunc>, Witness> {
    let m = consts.dim();
    let a = crate::linalg::Matrix::from_fn(m * m, m * m, |r, c| consts.sigma_tilde(r / m, c / m, r % m, c % m));
    let ai = a.inverse("sigma-tilde contraction").map_err(|e| Witness(e.to_string()))?;
    Ok((0..m * m)
        .map(|jk| {
            let mut s = RatFunc::zero();
            for l in 0..m {
                s += ai.get(jk, l * m + l);
            }
            s
        })
        .collect())
}

/// The contraction `Σ_M σ_{MK}^{MJ}` at flattened J*m + K.
pub fn sigma_trace_factor(consts: &StructureConstants) -> Vec<RatFunc> {
    let m = consts.dim();
    (0..m * m)
        .map(|jk| {
            let (j, k) = (jk / m, jk % m);
            let mut s = RatFunc::zero();
            for mm in 0..m {
                s += &consts.sigma(mm, k, mm, j);
            }
            s
        })
        .collect()
}
