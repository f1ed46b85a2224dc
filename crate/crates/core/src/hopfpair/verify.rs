use std::collections::HashMap;

use rayon::prelude::*;

use crate::lincomb::Word;
use crate::qfield::RatFunc;
use crate::report::Report;
use crate::rtensor::StructureConstants;

pub use crate::report::Witness;

use super::{
    coproduct_a, coproduct_dual, counit_a, dual_letter, format_word, AElem, AKind, ALetter, ATwo, DKind,
    DualElem, DualLetter, DualTwo, Functionals, Image, PairingEngine, Show, TestSpace,
};

/// All t-words of length ≤ max_len.
pub fn t_words(n: usize, max_len: usize) -> Vec<Vec<ALetter>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<ALetter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..n {
                for j in 0..n {
                    let mut v = w.clone();
                    v.push(ALetter::t(i, j));
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn image_witness(engine: &PairingEngine, space: &TestSpace, img: &Image, label: &str) -> Result<(), Witness> {
    match img.first_nonzero() {
        None => Ok(()),
        Some((k, r, c)) => {
            let w = engine.pattern_word(&space.patterns[k], r, c);
            Err(Witness(format!("<{}, {}> = {}", label, format_word(&w), img.mats[k].get(r, c))))
        }
    }
}

/// Bounded-degree equality of functionals: pairs x − y against every t-word of length ≤ degree.
pub fn functional_eq(engine: &PairingEngine, x: &DualElem, y: &DualElem, degree: usize) -> Result<(), Witness> {
    functional_eq_in(engine, x, y, &TestSpace::new(degree, false))
}

pub fn functional_eq_in(
    engine: &PairingEngine,
    x: &DualElem,
    y: &DualElem,
    space: &TestSpace,
) -> Result<(), Witness> {
    let d = x - y;
    image_witness(engine, space, &engine.image(&d, space), "lhs - rhs")
}

/// Zero test for the difference of two precomputed images.
pub fn images_eq(engine: &PairingEngine, space: &TestSpace, lhs: &Image, rhs: &Image, label: &str) -> Result<(), Witness> {
    image_witness(engine, space, &lhs.sub(rhs), label)
}

/// Kind patterns of length ≤ degree over the given dual kinds.
pub fn kind_patterns(kinds: &[DKind], degree: usize) -> Vec<Vec<DKind>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<DKind>> = vec![Vec::new()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for p in &layer {
            for k in kinds {
                let mut v = p.clone();
                v.push(*k);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Zero test on the function side: all pairings with dual words of length ≤ degree in the given kinds vanish.
pub fn a_is_zero(engine: &PairingEngine, a: &AElem, degree: usize, kinds: &[DKind]) -> Result<(), Witness> {
    if a.is_zero() {
        return Ok(());
    }
    for kp in kind_patterns(kinds, degree) {
        let m = engine.pi(a, &kp);
        if let Some((r, c, v)) = m.first_nonzero() {
            let w = engine.kind_word(&kp, r, c);
            return Err(Witness(format!("<{}, {}> = {}", format_word(&w), Show(a), v)));
        }
    }
    Ok(())
}

fn first_err(it: impl IntoIterator<Item = Result<(), Witness>>) -> Result<(), Witness> {
    for r in it {
        r?;
    }
    Ok(())
}

/// Consistency checks of the single-letter pairing table.
pub fn table_checks(engine: &PairingEngine, degree: usize) -> Report {
    let n = engine.n();
    let t = engine.table();
    let mut rep = Report::new();
    let idx4: Vec<[usize; 4]> = (0..n.pow(4)).map(|x| [x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n]).collect();

    // <X, t^i_c S(t)^c_j> = <X, S(t)^i_c t^c_j> = δ^i_j ε(X)
    let antipode = first_err(DKind::ALL.iter().flat_map(|&k| {
        idx4.iter().map(move |&[a, b, i, j]| {
            let x = [DualLetter::new(k, a, b)];
            let mut s1 = RatFunc::zero();
            let mut s2 = RatFunc::zero();
            for c in 0..n {
                s1 += &engine.pair_words(&x, &[ALetter::t(i, c), ALetter::st(c, j)]);
                s2 += &engine.pair_words(&x, &[ALetter::st(i, c), ALetter::t(c, j)]);
            }
            let want = if a == b && i == j { RatFunc::one() } else { RatFunc::zero() };
            if s1 != want || s2 != want {
                Err(Witness(format!("antipode axiom fails for {} at t-indices ({},{})", x[0], i + 1, j + 1)))
            } else {
                Ok(())
            }
        })
    }));
    rep.push("antipode axiom", None, antipode);

    let conj = |k: DKind, i: usize, j: usize, a: usize, b: usize| {
        let mut s = RatFunc::zero();
        for x in 0..n {
            for y in 0..n {
                let dv = engine.d().get(i, x);
                let iv = engine.dinv().get(y, j);
                if !dv.is_zero() && !iv.is_zero() {
                    s += &(&(dv * iv) * t.get(k, AKind::T, x, y, a, b));
                }
            }
        }
        s
    };
    let compat = first_err([(DKind::Lp, DKind::SLp, DKind::SiLp), (DKind::Lm, DKind::SLm, DKind::SiLm)].iter().flat_map(
        |&(k, sk, sik)| {
            idx4.iter().map(move |&[i, j, a, b]| {
                let here = format!("{} at ({},{};{},{})", k.name(), i + 1, j + 1, a + 1, b + 1);
                if t.get(sk, AKind::T, i, j, a, b) != t.get(k, AKind::St, i, j, a, b) {
                    return Err(Witness(format!("<S(X), t> differs from <X, S(t)> for {}", here)));
                }
                if *t.get(sk, AKind::St, i, j, a, b) != conj(k, i, j, a, b) {
                    return Err(Witness(format!("<S(X), S(t)> differs from <X, D t D^-1> for {}", here)));
                }
                if *t.get(k, AKind::St, i, j, a, b) != conj(sik, i, j, a, b) {
                    return Err(Witness(format!("<X, S(t)> differs from <Sinv(X), D t D^-1> for {}", here)));
                }
                Ok(())
            })
        },
    ));
    rep.push("antipode compatibility", None, compat);

    let rtt = first_err(rtt_elements(engine).iter().map(|e| a_is_zero(engine, e, degree, &DKind::ALL)));
    rep.push("(91) RTT in pairing kernel", Some(degree), rtt);
    rep
}

/// `R^{ab}_{cd} t^c_e t^d_f − t^b_d t^a_c R^{cd}_{ef}` for all a, b, e, f.
pub fn rtt_elements(engine: &PairingEngine) -> Vec<AElem> {
    let n = engine.n();
    let r = |a, b, c, d| engine.table().get(DKind::Lp, AKind::T, a, c, b, d).clone();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for e in 0..n {
                for f in 0..n {
                    let mut x = AElem::zero();
                    for c in 0..n {
                        for d in 0..n {
                            x.add_term(Word(vec![ALetter::t(c, e), ALetter::t(d, f)]), r(a, b, c, d));
                            x.add_term(Word(vec![ALetter::t(b, d), ALetter::t(a, c)]), -r(c, d, e, f));
                        }
                    }
                    out.push(x);
                }
            }
        }
    }
    out
}

fn two_leg_patterns(degree: usize) -> Vec<(Vec<AKind>, Vec<AKind>)> {
    let mut out = Vec::new();
    for tot in 0..=degree {
        for a in 0..=tot {
            out.push((vec![AKind::T; a], vec![AKind::T; tot - a]));
        }
    }
    out
}

/// Two-leg bounded equality: pairs both sides against `u ⊗ v` for t-words with |u| + |v| ≤ degree.
pub fn two_leg_eq(engine: &PairingEngine, x: &DualTwo, y: &DualTwo, degree: usize) -> Result<(), Witness> {
    let n = engine.n();
    for (p1, p2) in two_leg_patterns(degree) {
        let d = &engine.rho2(x, &p1, &p2) - &engine.rho2(y, &p1, &p2);
        if let Some((r, c, v)) = d.first_nonzero() {
            let s2 = n.pow(p2.len() as u32);
            let w1 = engine.pattern_word(&p1, r / s2, c / s2);
            let w2 = engine.pattern_word(&p2, r % s2, c % s2);
            return Err(Witness(format!("<lhs - rhs, {} (x) {}> = {}", format_word(&w1), format_word(&w2), v)));
        }
    }
    Ok(())
}

fn tensor(x: &DualElem, y: &DualElem) -> DualTwo {
    DualTwo::tensor(x, y)
}

fn a_two_eq(x: &ATwo, y: &ATwo) -> Result<(), Witness> {
    let mut d = x.clone();
    d.add_scaled(y, &RatFunc::from_int(-1));
    let res = match d.iter().next() {
        None => Ok(()),
        Some(((a, b), c)) => Err(Witness(format!(
            "term {} * {} (x) {} does not cancel",
            c,
            format_word(a.letters()),
            format_word(b.letters())
        ))),
    };
    res
}

/// The bicovariance conditions of the calculus.
pub fn verify_woronowicz(engine: &PairingEngine, funcs: &Functionals, degree: usize) -> Report {
    let n = engine.n();
    let m = n * n;
    let mut rep = Report::new();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();

    let r23 = first_err(pairs.iter().map(|&(i, j)| {
        let lhs = coproduct_a(&funcs.r(i, j), n);
        let mut rhs = ATwo::zero();
        for k in 0..m {
            rhs.add_scaled(&ATwo::tensor(&funcs.r(k, j), &funcs.r(i, k)), &RatFunc::one());
        }
        a_two_eq(&lhs, &rhs).map_err(|w| Witness(format!("I={} J={}: {}", i + 1, j + 1, w)))
    }));
    rep.push("(23)", None, r23);

    let r24 = first_err(pairs.par_iter().map(|&(i, j)| {
        let lhs = coproduct_dual(funcs.f(i, j), n);
        let mut rhs = DualTwo::zero();
        for k in 0..m {
            rhs.add_scaled(&tensor(funcs.f(i, k), funcs.f(k, j)), &RatFunc::one());
        }
        two_leg_eq(engine, &lhs, &rhs, degree).map_err(|w| Witness(format!("f^{}_{}: {}", i + 1, j + 1, w)))
    }).collect::<Vec<_>>());
    rep.push("(24)", Some(degree), r24);

    let a_deg = degree.saturating_sub(1).min(2);
    let words = t_words(n, a_deg);
    let lr = [DKind::Lp, DKind::Lm];
    let r25 = first_err(
        pairs
            .par_iter()
            .map(|&(j, k)| {
                for w in &words {
                    let a = AElem::word(w.clone());
                    let mut e = AElem::zero();
                    for i in 0..m {
                        e.add_scaled(&(&engine.left_action(funcs.f(j, i), &a) * &funcs.r(i, k)), &RatFunc::one());
                        e.add_scaled(
                            &(&funcs.r(j, i) * &engine.right_action(&a, funcs.f(i, k))),
                            &RatFunc::from_int(-1),
                        );
                    }
                    a_is_zero(engine, &e, degree, &lr)
                        .map_err(|x| Witness(format!("J={} K={} a={}: {}", j + 1, k + 1, format_word(w), x)))?;
                }
                Ok(())
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(25)", Some(degree), r25);

    let r26 = first_err((0..m).into_par_iter().map(|i| {
        let lhs = coproduct_dual(funcs.chi(i), n);
        let mut rhs = tensor(&DualElem::one(), funcs.chi(i));
        for j in 0..m {
            rhs.add_scaled(&tensor(funcs.chi(j), funcs.f(j, i)), &RatFunc::one());
        }
        two_leg_eq(engine, &lhs, &rhs, degree).map_err(|w| Witness(format!("chi_{}: {}", i + 1, w)))
    }).collect::<Vec<_>>());
    rep.push("(26)", Some(degree), r26);

    let r27 = first_err(
        (0..m)
            .into_par_iter()
            .map(|i| {
                for w in &words {
                    let a = AElem::word(w.clone());
                    let mut e = engine.right_action(&a, funcs.chi(i));
                    for j in 0..m {
                        e.add_scaled(&(&engine.left_action(funcs.chi(j), &a) * &funcs.r(j, i)), &RatFunc::from_int(-1));
                    }
                    a_is_zero(engine, &e, degree, &lr)
                        .map_err(|x| Witness(format!("I={} a={}: {}", i + 1, format_word(w), x)))?;
                }
                Ok(())
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(27)", Some(degree), r27);

    let counit_f = first_err(pairs.iter().map(|&(i, j)| {
        let v = engine.pair(funcs.f(i, j), &AElem::one()).expect("same n");
        let want = if i == j { RatFunc::one() } else { RatFunc::zero() };
        if v == want {
            Ok(())
        } else {
            Err(Witness(format!("eps(f^{}_{}) = {}", i + 1, j + 1, v)))
        }
    }));
    rep.push("(28) counit of f", None, counit_f);

    let counit_r = first_err(pairs.iter().map(|&(i, j)| {
        let v = counit_a(&funcs.r(i, j));
        let want = if i == j { RatFunc::one() } else { RatFunc::zero() };
        if v == want {
            Ok(())
        } else {
            Err(Witness(format!("eps(r^{}_{}) = {}", i + 1, j + 1, v)))
        }
    }));
    rep.push("(28) counit of r", None, counit_r);

    rep.push("(28) antipode of f", Some(degree), antipode_f(engine, funcs, degree));

    let anti_r = first_err(pairs.iter().map(|&(j, i)| {
        let mut e = if i == j { AElem::scalar(RatFunc::from_int(-1)) } else { AElem::zero() };
        for k in 0..m {
            e.add_scaled(&(&engine.antipode_a(&funcs.r(k, i)) * &funcs.r(j, k)), &RatFunc::one());
        }
        a_is_zero(engine, &e, degree, &lr).map_err(|w| Witness(format!("J={} I={}: {}", j + 1, i + 1, w)))
    }));
    rep.push("(28) antipode of r", Some(degree), anti_r);
    rep
}

/// `Σ_K <S(f^J_K) f^K_I, a> = δ^J_I ε(a)`, evaluated as `Σ <f^J_K, S(a₍₁₎)> <f^K_I, a₍₂₎>`.
fn antipode_f(engine: &PairingEngine, funcs: &Functionals, degree: usize) -> Result<(), Witness> {
    let n = engine.n();
    let m = n * n;
    let mut patterns = Vec::new();
    for d in 0..=degree {
        patterns.push(vec![AKind::T; d]);
        patterns.push(vec![AKind::St; d]);
    }
    let space = TestSpace { patterns };
    let imgs: Vec<Image> = (0..m * m).into_par_iter().map(|x| engine.image(funcs.f(x / m, x % m), &space)).collect();
    let pos: HashMap<Vec<AKind>, usize> = space.patterns.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let lookup = |img: &Image, w: &[ALetter]| -> RatFunc {
        let p: Vec<AKind> = w.iter().map(|l| l.kind).collect();
        let mut row = 0;
        let mut col = 0;
        for l in w {
            row = row * n + l.row_comp();
            col = col * n + l.col_comp();
        }
        img.mats[pos[&p]].get(row, col).clone()
    };
    for w in t_words(n, degree) {
        let a = AElem::word(w.clone());
        let cop = coproduct_a(&a, n);
        let eps = counit_a(&a);
        for j in 0..m {
            for i in 0..m {
                let mut s = RatFunc::zero();
                for ((w1, w2), c) in cop.iter() {
                    let sw1: Vec<ALetter> = w1.letters().iter().rev().map(|l| ALetter::st(l.row, l.col)).collect();
                    for k in 0..m {
                        let x = lookup(&imgs[j * m + k], &sw1);
                        if x.is_zero() {
                            continue;
                        }
                        let y = lookup(&imgs[k * m + i], w2.letters());
                        if !y.is_zero() {
                            s += &(&(&x * &y) * c);
                        }
                    }
                }
                let want = if i == j { eps.clone() } else { RatFunc::zero() };
                if s != want {
                    return Err(Witness(format!(
                        "J={} I={} a={}: got {}, expected {}",
                        j + 1,
                        i + 1,
                        format_word(&w),
                        s,
                        want
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Precomputed images of the functional families on one test space.
pub struct FuncImages {
    pub space: TestSpace,
    pub f: Vec<Image>,
    pub phi: Vec<Image>,
    pub chi: Vec<Image>,
    pub chi_tilde: Vec<Image>,
    pub letters: HashMap<DualLetter, Image>,
    pub m: usize,
}

impl FuncImages {
    pub fn new(engine: &PairingEngine, funcs: &Functionals, space: TestSpace) -> Self {
        let n = engine.n();
        let m = n * n;
        let f = (0..m * m).into_par_iter().map(|x| engine.image(funcs.f(x / m, x % m), &space)).collect();
        let phi = (0..m * m).into_par_iter().map(|x| engine.image(funcs.phi(x / m, x % m), &space)).collect();
        let chi = (0..m).into_par_iter().map(|x| engine.image(funcs.chi(x), &space)).collect();
        let chi_tilde = (0..m).into_par_iter().map(|x| engine.image(funcs.chi_tilde(x), &space)).collect();
        let mut letters = HashMap::new();
        for k in DKind::ALL {
            for a in 0..n {
                for b in 0..n {
                    let l = DualLetter::new(k, a, b);
                    letters.insert(l, engine.image(&dual_letter(k, a, b), &space));
                }
            }
        }
        FuncImages { space, f, phi, chi, chi_tilde, letters, m }
    }

    pub fn f(&self, upper: usize, lower: usize) -> &Image {
        &self.f[upper * self.m + lower]
    }

    pub fn phi(&self, upper: usize, lower: usize) -> &Image {
        &self.phi[upper * self.m + lower]
    }

    pub fn zero(&self) -> Image {
        self.chi[0].zero_like()
    }
}

/// The generators h used as probes in the commutation formulas.
pub fn probe_letters(n: usize) -> Vec<DualLetter> {
    let mut v = Vec::new();
    for k in [DKind::Lp, DKind::Lm] {
        for a in 0..n {
            for b in 0..n {
                v.push(DualLetter::new(k, a, b));
            }
        }
    }
    v
}

/// Commutation formulas between the functionals and the structure relations among them.
pub fn verify_functional_relations(
    engine: &PairingEngine,
    funcs: &Functionals,
    consts: &StructureConstants,
    degree: usize,
) -> Report {
    let n = engine.n();
    let m = n * n;
    let im = FuncImages::new(engine, funcs, TestSpace::new(degree, false));
    let space = &im.space;
    let mut rep = Report::new();
    let probes = probe_letters(n);

    rep.push("(47)", Some(degree), crate::wcalc::check_gamma_exchange(engine, funcs, degree));

    let r49 = first_err(
        probes
            .par_iter()
            .flat_map(|h| (0..m).into_par_iter().map(move |i| (*h, i)))
            .map(|(h, i)| {
                let he = DualElem::letter(h);
                let lhs = im.chi[i].mul(&im.letters[&h]);
                let mut rhs = im.zero();
                for j in 0..m {
                    let x = engine.a_act_left(&funcs.r(j, i), &he);
                    rhs = rhs.add(&engine.image(&x, space).mul(&im.chi[j]));
                }
                images_eq(engine, space, &lhs, &rhs, &format!("chi_{} {} - rhs", i + 1, h))
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(49)", Some(degree), r49);

    rep.push("(51)", Some(degree), check_51(engine, &im));

    let sigma = |i, j, k, l| consts.sigma(i, j, k, l);
    let c = |l, k, j| consts.c(l, k, j);

    let r52 = first_err(
        (0..m * m)
            .into_par_iter()
            .map(|x| {
                let (i, j) = (x / m, x % m);
                let mut lhs = im.chi[i].mul(&im.chi[j]);
                for l in 0..m {
                    for k in 0..m {
                        lhs.add_product_scaled(&im.chi[l], &im.chi[k], &-sigma(i, j, l, k));
                    }
                }
                let mut rhs = im.zero();
                for k in 0..m {
                    rhs.add_scaled(&im.chi[k], &c(i, j, k));
                }
                images_eq(engine, space, &lhs, &rhs, &format!("(52) I={} J={}", i + 1, j + 1))
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(52)", Some(degree), r52);

    let r53 = first_err(
        (0..m * m * m * m)
            .into_par_iter()
            .map(|x| {
                let (mm, nn, k, l) = (x / (m * m * m), (x / (m * m)) % m, (x / m) % m, x % m);
                let mut lhs = im.zero();
                let mut rhs = im.zero();
                for i in 0..m {
                    for j in 0..m {
                        lhs.add_product_scaled(im.f(i, k), im.f(j, l), &sigma(i, j, mm, nn));
                        rhs.add_product_scaled(im.f(mm, i), im.f(nn, j), &sigma(k, l, i, j));
                    }
                }
                images_eq(engine, space, &lhs, &rhs, &format!("(53) M={} N={} K={} L={}", mm + 1, nn + 1, k + 1, l + 1))
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(53)", Some(degree), r53);

    let r54 = first_err(
        (0..m * m * m)
            .into_par_iter()
            .map(|x| {
                let (k, nn, l) = (x / (m * m), (x / m) % m, x % m);
                let lhs = im.chi[k].mul(im.f(nn, l));
                let mut rhs = im.zero();
                for i in 0..m {
                    for j in 0..m {
                        rhs.add_product_scaled(im.f(nn, i), &im.chi[j], &sigma(k, l, i, j));
                    }
                }
                images_eq(engine, space, &lhs, &rhs, &format!("(54) K={} N={} L={}", k + 1, nn + 1, l + 1))
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(54)", Some(degree), r54);

    let r55 = first_err(
        (0..m * m * m)
            .into_par_iter()
            .map(|x| {
                let (i, j, k) = (x / (m * m), (x / m) % m, x % m);
                let mut lhs = im.f(i, j).mul(&im.chi[k]);
                let mut rhs = im.zero();
                for mm in 0..m {
                    for nn in 0..m {
                        lhs.add_product_scaled(im.f(mm, j), im.f(nn, k), &c(mm, nn, i));
                        rhs.add_product_scaled(&im.chi[mm], im.f(i, nn), &sigma(j, k, mm, nn));
                    }
                    rhs.add_scaled(im.f(i, mm), &c(j, k, mm));
                }
                images_eq(engine, space, &lhs, &rhs, &format!("(55) I={} J={} K={}", i + 1, j + 1, k + 1))
            })
            .collect::<Vec<_>>(),
    );
    rep.push("(55)", Some(degree), r55);

    let r90 = first_err(
        probes
            .par_iter()
            .flat_map(|h| (0..m).into_par_iter().map(move |i| (*h, i)))
            .map(|(h, i)| {
                let he = DualElem::letter(h);
                let lhs = im.chi_tilde[i].mul(&im.letters[&h]);
                let mut rhs = im.zero();
                for j in 0..m {
                    let x = engine.a_act_right(&he, &funcs.r(j, i));
                    rhs = rhs.add(&engine.image(&x, space).mul(&im.chi_tilde[j]));
                }
                images_eq(engine, space, &lhs, &rhs, &format!("chi~_{} {} - rhs", i + 1, h))
            })
            .collect::<Vec<_>>(),
    );
    let r90g = crate::wcalc::check_gamma_tilde_exchange(engine, funcs, degree);
    rep.push("(90)", Some(degree), r90.and(r90g));
    rep
}

/// `f^J_I h = Σ <S⁻¹(h₍₁₎), r^J_M> h₍₂₎ f^M_K <h₍₃₎, r^K_I>` for every generator h.
fn check_51(engine: &PairingEngine, im: &FuncImages) -> Result<(), Witness> {
    let n = engine.n();
    let m = n * n;
    let probes = probe_letters(n);
    let mut pvals: HashMap<(DualLetter, usize, usize), RatFunc> = HashMap::new();
    for k in DKind::ALL {
        for a in 0..n {
            for b in 0..n {
                let l = DualLetter::new(k, a, b);
                for u in 0..m {
                    for v in 0..m {
                        let x = engine.pair_words(&[l], &[ALetter::st(u / n, v / n), ALetter::t(v % n, u % n)]);
                        if !x.is_zero() {
                            pvals.insert((l, u, v), x);
                        }
                    }
                }
            }
        }
    }
    let pv = |l: DualLetter, u: usize, v: usize| pvals.get(&(l, u, v)).cloned().unwrap_or_else(RatFunc::zero);
    first_err(
        probes
            .par_iter()
            .flat_map(|h| (0..m * m).into_par_iter().map(move |x| (*h, x / m, x % m)))
            .map(|(h, j, i)| {
                let lhs = im.f(j, i).mul(&im.letters[&h]);
                let sik = match h.kind {
                    DKind::Lp => DKind::SiLp,
                    DKind::Lm => DKind::SiLm,
                    _ => unreachable!("probes are l± letters"),
                };
                let mut rhs = im.zero();
                for c in 0..n {
                    for d in 0..n {
                        let mid = &im.letters[&DualLetter::new(h.kind, c, d)];
                        for mm in 0..m {
                            let x = pv(DualLetter::new(sik, h.row, c), j, mm);
                            if x.is_zero() {
                                continue;
                            }
                            for k in 0..m {
                                let y = pv(DualLetter::new(h.kind, d, h.col), k, i);
                                if y.is_zero() {
                                    continue;
                                }
                                rhs.add_product_scaled(mid, im.f(mm, k), &(&x * &y));
                            }
                        }
                    }
                }
                images_eq(engine, &im.space, &lhs, &rhs, &format!("f^{}_{} {} - rhs", j + 1, i + 1, h))
            })
            .collect::<Vec<_>>(),
    )
}
