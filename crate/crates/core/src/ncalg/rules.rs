use std::collections::{BTreeSet, HashMap};

use crate::lincomb::Word;
use crate::qfield::RatFunc;
use crate::rtensor::RBundle;

use super::{Family, GenLetter, NCElem, NcError, ShowNc};

/// One relation family: a label and its n⁴ scalar equations, each written as LHS − RHS.
///
/// Equation `x` is the matrix entry with rows (a,b) = (x / n³, (x / n²) % n) and columns (c,d).
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub eqs: Vec<NCElem>,
}

/// n²×n² matrix with algebra entries; rows (a,b), columns (c,d).
#[derive(Clone)]
struct NMat {
    n: usize,
    data: Vec<NCElem>,
}

impl NMat {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> NCElem) -> Self {
        let m = n * n;
        let mut data = Vec::with_capacity(m * m);
        for r in 0..m {
            for c in 0..m {
                data.push(f(r / n, r % n, c / n, c % n));
            }
        }
        NMat { n, data }
    }

    fn get(&self, r: usize, c: usize) -> &NCElem {
        &self.data[r * self.dim() + c]
    }

    fn mul(&self, o: &NMat) -> NMat {
        let m = self.dim();
        let mut data = vec![NCElem::zero(); m * m];
        for r in 0..m {
            for k in 0..m {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..m {
                    let y = o.get(k, c);
                    if !y.is_zero() {
                        data[r * m + c].add_scaled(&(x * y), &RatFunc::one());
                    }
                }
            }
        }
        NMat { n: self.n, data }
    }

    fn add_scaled(&self, o: &NMat, s: &RatFunc) -> NMat {
        let mut data = self.data.clone();
        for (a, b) in data.iter_mut().zip(&o.data) {
            a.add_scaled(b, s);
        }
        NMat { n: self.n, data }
    }

    fn entries(self) -> Vec<NCElem> {
        self.data
    }
}

fn prod(ms: &[&NMat]) -> NMat {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = acc.mul(m);
    }
    acc
}

struct Factors {
    n: usize,
    r12: NMat,
    r21: NMat,
    r12i: NMat,
    r21i: NMat,
    one: NMat,
}

impl Factors {
    fn new(b: &RBundle) -> Self {
        let n = b.n;
        let scalar = |v: RatFunc| NCElem::scalar(v);
        Factors {
            n,
            r12: NMat::from_fn(n, |a, bb, c, d| scalar(b.r(a, bb, c, d))),
            r21: NMat::from_fn(n, |a, bb, c, d| scalar(b.r21(a, bb, c, d))),
            r12i: NMat::from_fn(n, |a, bb, c, d| scalar(b.rinv(a, bb, c, d))),
            r21i: NMat::from_fn(n, |a, bb, c, d| scalar(b.rinv21(a, bb, c, d))),
            one: NMat::from_fn(n, |a, bb, c, d| {
                if a == c && bb == d {
                    NCElem::one()
                } else {
                    NCElem::zero()
                }
            }),
        }
    }

    /// `G₁`: G^a_c δ^b_d.
    fn g1(&self, f: Family) -> NMat {
        NMat::from_fn(self.n, |a, b, c, d| if b == d { super::gen(f, a, c) } else { NCElem::zero() })
    }

    /// `G₂`: δ^a_c G^b_d.
    fn g2(&self, f: Family) -> NMat {
        NMat::from_fn(self.n, |a, b, c, d| if a == c { super::gen(f, b, d) } else { NCElem::zero() })
    }
}

/// Switches for deliberately corrupted rule sets used in mutation tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleOptions {
    /// Omit the inhomogeneous term of the Ω–J relation.
    pub drop_wj_tail: bool,
}

/// The ten relation families of the cross-product algebra.
pub fn relations(b: &RBundle, opts: RuleOptions) -> Vec<Relation> {
    use Family::*;
    let f = Factors::new(b);
    let m1 = RatFunc::from_int(-1);
    let one = RatFunc::one();
    let lam_inv = b.lambda.inv().expect("lambda is nonzero at generic q");
    let (r12, r21, r12i, r21i) = (&f.r12, &f.r21, &f.r12i, &f.r21i);
    let rel = |name: &str, m: NMat| Relation { name: name.to_string(), eqs: m.entries() };
    let diff = |a: NMat, b: NMat| a.add_scaled(&b, &m1);
    let sum = |a: NMat, b: NMat| a.add_scaled(&b, &one);

    let mut tail_112 = sum(prod(&[&f.g1(W), r12, &f.g2(J), r21]), prod(&[r12, &f.g2(J), r21, &f.g1(W)]));
    if !opts.drop_wj_tail {
        tail_112 = tail_112.add_scaled(&diff(f.one.clone(), r12.mul(r21)), &-lam_inv);
    }
    vec![
        rel("(106)", diff(prod(&[r12, &f.g1(T), &f.g2(T)]), prod(&[&f.g2(T), &f.g1(T), r12]))),
        rel("(107)", diff(prod(&[&f.g1(W), &f.g2(T)]), prod(&[&f.g2(T), r12i, &f.g1(W), r21i]))),
        rel("(108)", sum(prod(&[&f.g1(W), r21i, &f.g2(W), r21]), prod(&[r21i, &f.g2(W), r12i, &f.g1(W)]))),
        rel("(109)", diff(prod(&[&f.g1(Y), &f.g2(T)]), prod(&[&f.g2(T), r21, &f.g1(Y), r12]))),
        rel("(110)", diff(prod(&[&f.g1(W), r12, &f.g2(Y), r21]), prod(&[r12, &f.g2(Y), r21, &f.g1(W)]))),
        rel("(111)", diff(prod(&[&f.g1(J), &f.g2(T)]), prod(&[&f.g2(T), r21, &f.g1(J), r12]))),
        rel("(112)", tail_112),
        rel("(113)", diff(prod(&[&f.g1(Y), r12, &f.g2(Y), r21]), prod(&[r12, &f.g2(Y), r21, &f.g1(Y)]))),
        rel("(114)", diff(prod(&[&f.g1(J), r12, &f.g2(Y), r21]), prod(&[r12, &f.g2(Y), r21, &f.g1(J)]))),
        rel("(115)", sum(prod(&[&f.g1(J), r12, &f.g2(J), r21]), prod(&[r21i, &f.g2(J), r21, &f.g1(J)]))),
    ]
}

/// The quantum Lie algebra relation for X, written as LHS − RHS.
pub fn x_relations(b: &RBundle) -> Relation {
    use Family::X;
    let f = Factors::new(b);
    let lam_inv = b.lambda.inv().expect("lambda is nonzero at generic q");
    let m1 = RatFunc::from_int(-1);
    let (r12, r21) = (&f.r12, &f.r21);
    let rr = r12.mul(r21);
    let quad = prod(&[&f.g1(X), r12, &f.g2(X), r21]).add_scaled(&prod(&[r12, &f.g2(X), r21, &f.g1(X)]), &m1);
    let lin = f.g1(X).mul(&rr).add_scaled(&rr.mul(&f.g1(X)), &m1);
    Relation { name: "(116)".into(), eqs: quad.add_scaled(&lin, &-lam_inv).entries() }
}

/// Rewriting rules: each misordered two-letter word maps to a combination of smaller words.
#[derive(Clone, Debug)]
pub struct RuleSet {
    n: usize,
    rules: HashMap<(GenLetter, GenLetter), NCElem>,
    origin: HashMap<(GenLetter, GenLetter), String>,
    relations: Vec<Relation>,
    fuel: u64,
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Row-reduces a family; returns pivot words with their replacements.
fn row_reduce(eqs: &[NCElem]) -> Vec<(Word<GenLetter>, NCElem)> {
    let mut basis: Vec<(Word<GenLetter>, NCElem)> = Vec::new();
    for e in eqs {
        let mut e = e.clone();
        for (pw, pr) in &basis {
            let c = e.coeff(pw);
            if !c.is_zero() {
                e.add_scaled(pr, &-c);
            }
        }
        let Some(lead) = e.max_word().cloned() else { continue };
        let inv = e.coeff(&lead).inv().expect("nonzero leading coefficient");
        let e = e.scale(&inv);
        for (_, pr) in basis.iter_mut() {
            let c = pr.coeff(&lead);
            if !c.is_zero() {
                pr.add_scaled(&e, &-c);
            }
        }
        basis.push((lead, e));
    }
    basis
        .into_iter()
        .map(|(pw, pr)| {
            let mut rep = NCElem::zero();
            for (w, c) in pr.iter() {
                if *w != pw {
                    rep.add_term(w.clone(), -c);
                }
            }
            (pw, rep)
        })
        .collect()
}

impl RuleSet {
    /// Standard rule set from a bundle.
    pub fn build(b: &RBundle) -> Result<Self, NcError> {
        Self::from_relations(b.n, relations(b, RuleOptions::default()))
    }

    pub fn build_with(b: &RBundle, opts: RuleOptions) -> Result<Self, NcError> {
        Self::from_relations(b.n, relations(b, opts))
    }

    /// Orients each family by its highest words. Families mixing two generator kinds must have full rank.
    pub fn from_relations(n: usize, relations: Vec<Relation>) -> Result<Self, NcError> {
        let mut rules = HashMap::new();
        let mut origin = HashMap::new();
        for rel in &relations {
            let fams: BTreeSet<u8> = rel
                .eqs
                .iter()
                .flat_map(|e| e.iter().flat_map(|(w, _)| w.letters().iter().map(|l| l.family as u8)).collect::<Vec<_>>())
                .collect();
            let reduced = row_reduce(&rel.eqs);
            if fams.len() > 1 && reduced.len() < n.pow(4) {
                return Err(NcError::Singular(rel.name.clone()));
            }
            for (pw, rep) in reduced {
                let l = pw.letters();
                if l.len() != 2 {
                    return Err(NcError::Singular(format!("{} (pivot {} is not a two-letter word)", rel.name, ShowNc(&NCElem::term(pw.clone(), RatFunc::one())))));
                }
                origin.insert((l[0], l[1]), rel.name.clone());
                rules.insert((l[0], l[1]), rep);
            }
        }
        Ok(RuleSet { n, rules, origin, relations, fuel: DEFAULT_FUEL })
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rule(&self, a: GenLetter, b: GenLetter) -> Option<&NCElem> {
        self.rules.get(&(a, b))
    }

    pub fn origin(&self, a: GenLetter, b: GenLetter) -> Option<&str> {
        self.origin.get(&(a, b)).map(|s| s.as_str())
    }

    pub fn rule_keys(&self) -> impl Iterator<Item = &(GenLetter, GenLetter)> {
        self.rules.keys()
    }

    fn check_indices(&self, e: &NCElem) -> Result<(), NcError> {
        for (w, _) in e.iter() {
            for l in w.letters() {
                if l.row >= self.n || l.col >= self.n {
                    return Err(NcError::Index { n: self.n, what: l.to_string() });
                }
            }
        }
        Ok(())
    }

    /// Rewrites the highest word first until no misordered pair remains.
    pub fn normal_form(&self, e: &NCElem) -> Result<NCElem, NcError> {
        self.check_indices(e)?;
        let mut todo = e.clone();
        let mut out = NCElem::zero();
        let mut steps = 0u64;
        while let Some((w, c)) = todo.pop_max() {
            let l = w.letters();
            let hit = (0..l.len().saturating_sub(1)).find(|&p| self.rules.contains_key(&(l[p], l[p + 1])));
            match hit {
                None => out.add_term(w, c),
                Some(p) => {
                    steps += 1;
                    if steps > self.fuel {
                        return Err(NcError::Fuel {
                            fuel: self.fuel,
                            word: ShowNc(&NCElem::term(w.clone(), RatFunc::one())).to_string(),
                        });
                    }
                    for (w2, c2) in self.rules[&(l[p], l[p + 1])].iter() {
                        let mut v = Vec::with_capacity(l.len());
                        v.extend_from_slice(&l[..p]);
                        v.extend_from_slice(w2.letters());
                        v.extend_from_slice(&l[p + 2..]);
                        todo.add_term(Word(v), &c * c2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product followed by normal form.
    pub fn mul(&self, a: &NCElem, b: &NCElem) -> Result<NCElem, NcError> {
        self.normal_form(&(a * b))
    }

    pub fn is_normal(&self, w: &[GenLetter]) -> bool {
        w.windows(2).all(|p| !self.rules.contains_key(&(p[0], p[1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::gen;

    #[test]
    fn scalar_rules() {
        let b = RBundle::standard(1);
        let rs = RuleSet::build(&b).unwrap();
        let w = gen(Family::W, 0, 0);
        let t = gen(Family::T, 0, 0);
        let y = gen(Family::Y, 0, 0);
        let j = gen(Family::J, 0, 0);
        assert!(rs.mul(&w, &w).unwrap().is_zero());
        assert_eq!(rs.mul(&w, &t).unwrap(), (&t * &w).scale(&RatFunc::q_pow(-2)));
        assert_eq!(rs.mul(&y, &t).unwrap(), (&t * &y).scale(&RatFunc::q_pow(2)));
        // Ω J + J Ω = (1 − q²)/(λ q²) = −q⁻¹
        let s = &rs.mul(&w, &j).unwrap() + &rs.mul(&j, &w).unwrap();
        assert_eq!(s, NCElem::scalar(-RatFunc::q_pow(-1)));
    }

    #[test]
    fn fuel_exhaustion() {
        let b = RBundle::standard(2);
        let rs = RuleSet::build(&b).unwrap().with_fuel(3);
        let e = &(&gen(Family::J, 0, 1) * &gen(Family::W, 1, 0)) * &gen(Family::T, 0, 0);
        assert!(matches!(rs.normal_form(&e), Err(NcError::Fuel { .. })));
    }
}
