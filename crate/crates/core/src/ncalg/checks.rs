use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::hopfpair::{a_is_zero, AElem, AKind, ALetter, DKind, PairingEngine};
use crate::lincomb::{LinComb2, Word};
use crate::qfield::{rat, Rat, RatFunc};
use crate::report::{Report, Witness};
use crate::rtensor::RBundle;

use super::{x_relations, Family, GenLetter, NCElem, NcError, Relation, RuleSet, ShowNc};

/// Outcome of the length-3 ambiguity sweep.
#[derive(Clone, Debug, Default)]
pub struct OverlapReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl OverlapReport {
    pub fn resolved(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Reduces every overlap `uvw` with rules on `uv` and `vw` both ways and compares.
pub fn check_overlaps(rules: &RuleSet) -> Result<OverlapReport, NcError> {
    let keys: Vec<(GenLetter, GenLetter)> = rules.rule_keys().copied().collect();
    let mut by_first: HashMap<GenLetter, Vec<GenLetter>> = HashMap::new();
    for (a, b) in &keys {
        by_first.entry(*a).or_default().push(*b);
    }
    let mut triples: Vec<(GenLetter, GenLetter, GenLetter)> = Vec::new();
    for (u, v) in &keys {
        if let Some(ws) = by_first.get(v) {
            for w in ws {
                triples.push((*u, *v, *w));
            }
        }
    }
    triples.sort();
    let results: Vec<Result<Option<String>, NcError>> = triples
        .par_iter()
        .map(|&(u, v, w)| {
            let uw = NCElem::letter(w);
            let uu = NCElem::letter(u);
            let a = rules.normal_form(&(rules.rule(u, v).unwrap() * &uw))?;
            let b = rules.normal_form(&(&uu * rules.rule(v, w).unwrap()))?;
            let d = &a - &b;
            Ok(if d.is_zero() {
                None
            } else {
                Some(format!(
                    "{}*{}*{} ({} then {}): difference {}",
                    u,
                    v,
                    w,
                    rules.origin(u, v).unwrap_or("?"),
                    rules.origin(v, w).unwrap_or("?"),
                    ShowNc(&d)
                ))
            })
        })
        .collect();
    let mut rep = OverlapReport { checked: triples.len(), mismatches: Vec::new() };
    for r in results {
        if let Some(m) = r? {
            rep.mismatches.push(m);
        }
    }
    Ok(rep)
}

/// Each relation family, moved to one side, must normal-form to zero.
pub fn relation_smoke(rules: &RuleSet) -> Report {
    let mut rep = Report::new();
    for rel in rules.relations() {
        let mut res = Ok(());
        for e in &rel.eqs {
            match rules.normal_form(e) {
                Ok(z) if z.is_zero() => {}
                Ok(z) => {
                    res = Err(Witness(format!("{} leaves {}", ShowNc(e), ShowNc(&z))));
                    break;
                }
                Err(err) => {
                    res = Err(Witness(err.to_string()));
                    break;
                }
            }
        }
        rep.push(rel.name.clone(), None, res);
    }
    rep
}

fn subst_y(e: &NCElem, lambda: &RatFunc) -> NCElem {
    e.substitute(&|l: &GenLetter| {
        if l.family == Family::Y {
            let mut x = NCElem::letter(GenLetter::new(Family::X, l.row, l.col)).scale(&-lambda);
            if l.row == l.col {
                x.add_term(Word::empty(), RatFunc::one());
            }
            x
        } else {
            NCElem::letter(*l)
        }
    })
}

fn subst_x(e: &NCElem, lambda: &RatFunc) -> NCElem {
    let li = lambda.inv().expect("lambda is nonzero");
    e.substitute(&|l: &GenLetter| {
        if l.family == Family::X {
            let mut x = NCElem::letter(GenLetter::new(Family::Y, l.row, l.col)).scale(&-&li);
            if l.row == l.col {
                x.add_term(Word::empty(), li.clone());
            }
            x
        } else {
            NCElem::letter(*l)
        }
    })
}

fn all_nf_zero(rules: &RuleSet, eqs: impl Iterator<Item = NCElem>) -> Result<(), Witness> {
    for e in eqs {
        let z = rules.normal_form(&e).map_err(|x| Witness(x.to_string()))?;
        if !z.is_zero() {
            return Err(Witness(format!("{} reduces to {}", ShowNc(&e), ShowNc(&z))));
        }
    }
    Ok(())
}

/// The quantum Lie algebra: substitution Y = 1 − λX in the reflection equation, ideal equivalence, classical limit.
pub fn quantum_lie_check(bundle: &RBundle, rules: &RuleSet) -> Report {
    let n = bundle.n;
    let lambda = &bundle.lambda;
    let mut rep = Report::new();
    let refl = rules.relations().iter().find(|r| r.name == "(113)").cloned();
    let Some(refl) = refl else {
        rep.push("(116) from (113)", None, Err("rule set has no reflection equation".into()));
        return rep;
    };
    let xr = x_relations(bundle);
    let l2 = lambda * lambda;

    let free = (|| {
        for (k, (y, x)) in refl.eqs.iter().zip(&xr.eqs).enumerate() {
            let lhs = subst_y(y, lambda);
            let rhs = x.scale(&l2);
            if lhs != rhs {
                return Err(Witness(format!("entry {}: {} vs {}", k, ShowNc(&lhs), ShowNc(&rhs))));
            }
        }
        Ok(())
    })();
    rep.push("(116) from (113) under Y = 1 - lambda X", None, free);

    match RuleSet::from_relations(n, vec![xr.clone()]) {
        Err(e) => rep.push("(116) rewriting", None, Err(Witness(e.to_string()))),
        Ok(xrules) => {
            let conf = match check_overlaps(&xrules) {
                Ok(o) if o.resolved() => Ok(()),
                Ok(o) => Err(Witness(o.mismatches[0].clone())),
                Err(e) => Err(Witness(e.to_string())),
            };
            rep.push("(116) overlaps resolve", None, conf);
            rep.push(
                "(113) in the ideal of (116)",
                None,
                all_nf_zero(&xrules, refl.eqs.iter().map(|e| subst_y(e, lambda))),
            );
        }
    }
    let yrules = RuleSet::from_relations(n, vec![refl.clone()]);
    let back = match yrules {
        Ok(yr) => all_nf_zero(&yr, xr.eqs.iter().map(|e| subst_x(e, lambda))),
        Err(e) => Err(Witness(e.to_string())),
    };
    rep.push("(116) in the ideal of (113)", None, back);
    rep.push("(116) classical limit", None, classical_limit(n, &xr));
    rep
}

/// At q = 1 the X relation must read [X^a_c, X^b_d] = c (δ^b_c X^a_d − δ^a_d X^b_c) for one nonzero c.
fn classical_limit(n: usize, xr: &Relation) -> Result<(), Witness> {
    let one = rat(1);
    let mut scale: Option<Rat> = None;
    for (x, e) in xr.eqs.iter().enumerate() {
        let (a, b, c, d) = (x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n);
        let here = format!("entry ({},{};{},{})", a + 1, b + 1, c + 1, d + 1);
        let mut quad: HashMap<Vec<GenLetter>, Rat> = HashMap::new();
        let mut lin: HashMap<GenLetter, Rat> = HashMap::new();
        for (w, v) in e.iter() {
            let v0 = v.eval_at(&one).map_err(|err| Witness(format!("{}: {}", here, err)))?;
            if v0 == rat(0) {
                continue;
            }
            match w.len() {
                2 => {
                    quad.insert(w.letters().to_vec(), v0);
                }
                1 => {
                    lin.insert(w.letters()[0], v0);
                }
                _ => return Err(Witness(format!("{}: unexpected word length {}", here, w.len()))),
            }
        }
        let xa = GenLetter::new(Family::X, a, c);
        let xb = GenLetter::new(Family::X, b, d);
        let mut want_quad: HashMap<Vec<GenLetter>, Rat> = HashMap::new();
        if xa != xb {
            want_quad.insert(vec![xa, xb], rat(1));
            want_quad.insert(vec![xb, xa], rat(-1));
        }
        if quad != want_quad {
            return Err(Witness(format!("{}: quadratic part is not a commutator", here)));
        }
        // E = [X^a_c, X^b_d] + lin = 0, so −lin is the commutator value.
        let mut want: HashMap<GenLetter, Rat> = HashMap::new();
        let mut add = |l: GenLetter, v: Rat| {
            let e = want.entry(l).or_insert_with(|| rat(0));
            *e += v;
        };
        if b == c {
            add(GenLetter::new(Family::X, a, d), rat(1));
        }
        if a == d {
            add(GenLetter::new(Family::X, b, c), rat(-1));
        }
        want.retain(|_, v| *v != rat(0));
        let got: HashMap<GenLetter, Rat> = lin.iter().map(|(l, v)| (*l, -v.clone())).collect();
        if want.is_empty() {
            if !got.is_empty() {
                return Err(Witness(format!("{}: expected a vanishing commutator", here)));
            }
            continue;
        }
        let keys: BTreeSet<GenLetter> = want.keys().chain(got.keys()).copied().collect();
        for k in keys {
            let w = want.get(&k).cloned().unwrap_or_else(|| rat(0));
            let g = got.get(&k).cloned().unwrap_or_else(|| rat(0));
            if w == rat(0) {
                if g != rat(0) {
                    return Err(Witness(format!("{}: unexpected term {}", here, k)));
                }
                continue;
            }
            let s = g / w;
            match &scale {
                None if s == rat(0) => return Err(Witness(format!("{}: commutator vanishes classically", here))),
                None => scale = Some(s),
                Some(c0) if *c0 != s => {
                    return Err(Witness(format!("{}: normalization {} differs from {}", here, s, c0)))
                }
                _ => {}
            }
        }
    }
    if scale.is_none() && n > 1 {
        return Err(Witness("no nonzero commutator found".into()));
    }
    Ok(())
}

type Two = LinComb2<ALetter, GenLetter>;

fn coact_letter(l: &GenLetter, n: usize, left: bool) -> Two {
    let mut e = Two::zero();
    let one = RatFunc::one();
    match (l.family, left) {
        (Family::T, true) => {
            for k in 0..n {
                e.add_term(Word::single(ALetter::t(l.row, k)), Word::single(GenLetter::t(k, l.col)), one.clone());
            }
        }
        (Family::T, false) => {
            for k in 0..n {
                e.add_term(Word::single(ALetter::t(k, l.col)), Word::single(GenLetter::t(l.row, k)), one.clone());
            }
        }
        (_, true) => e.add_term(Word::empty(), Word::single(*l), one),
        (f, false) => {
            for k in 0..n {
                for m in 0..n {
                    e.add_term(
                        Word(vec![ALetter::st(l.row, k), ALetter::t(m, l.col)]),
                        Word::single(GenLetter::new(f, k, m)),
                        one.clone(),
                    );
                }
            }
        }
    }
    e
}

fn coact(e: &NCElem, n: usize, left: bool) -> Two {
    let mut out = Two::zero();
    for (w, c) in e.iter() {
        let mut acc = Two::one();
        for l in w.letters() {
            acc = acc.mul(&coact_letter(l, n, left));
        }
        out.add_scaled(&acc, c);
    }
    out
}

fn a_to_nc(a: &AElem) -> NCElem {
    a.substitute(&|l: &ALetter| {
        debug_assert_eq!(l.kind, AKind::T);
        NCElem::letter(GenLetter::t(l.row, l.col))
    })
}

/// Image of one relation entry under a coaction, with the algebra leg normal-formed and the
/// function leg of each group tested for zero.
fn coaction_zero(
    rules: &RuleSet,
    engine: &PairingEngine,
    e: &NCElem,
    left: bool,
    degree: usize,
) -> Result<(), Witness> {
    let n = rules.n();
    let img = coact(e, n, left);
    let mut cache: HashMap<Word<GenLetter>, NCElem> = HashMap::new();
    let mut groups: HashMap<Word<GenLetter>, AElem> = HashMap::new();
    for ((aw, gw), c) in img.iter() {
        if !cache.contains_key(gw) {
            let nf = rules.normal_form(&NCElem::term(gw.clone(), RatFunc::one())).map_err(|x| Witness(x.to_string()))?;
            cache.insert(gw.clone(), nf);
        }
        for (g2, c2) in cache[gw].iter() {
            groups.entry(g2.clone()).or_default().add_term(aw.clone(), c * c2);
        }
    }
    let mut keys: Vec<&Word<GenLetter>> = groups.keys().collect();
    keys.sort();
    for g in keys {
        let a = &groups[g];
        let gs = ShowNc(&NCElem::term(g.clone(), RatFunc::one())).to_string();
        if left {
            let z = rules.normal_form(&a_to_nc(a)).map_err(|x| Witness(x.to_string()))?;
            if !z.is_zero() {
                return Err(Witness(format!("{}: function leg {} at {}", ShowNc(e), ShowNc(&z), gs)));
            }
        } else {
            a_is_zero(engine, a, degree, &[DKind::Lp, DKind::Lm])
                .map_err(|w| Witness(format!("{}: at {}: {}", ShowNc(e), gs, w)))?;
        }
    }
    Ok(())
}

/// Left and right coaction covariance of every relation family.
pub fn coaction_check(rules: &RuleSet, engine: &PairingEngine, degree: usize) -> Report {
    let mut rep = Report::new();
    for (left, label) in [(true, "(117)"), (false, "(118)")] {
        for rel in rules.relations() {
            let res: Vec<Result<(), Witness>> = rel
                .eqs
                .par_iter()
                .filter(|e| !e.is_zero())
                .map(|e| coaction_zero(rules, engine, e, left, degree))
                .collect();
            let res = res.into_iter().collect::<Result<Vec<()>, Witness>>().map(|_| ());
            let deg = if left { None } else { Some(degree) };
            rep.push(format!("{} on {}", label, rel.name), deg, res);
        }
    }
    rep
}
