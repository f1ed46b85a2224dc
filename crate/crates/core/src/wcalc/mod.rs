//! Differential forms on GL_q(N): the exterior differential, the graded coproduct, and the actions of
//! dual functionals and inner-derivation functionals γ, γ̃ on forms.

mod checks;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::expr::FuncRef;
use crate::hopfpair::{AElem, AKind, ALetter, DKind, DualElem, DualLetter, Functionals, PairingEngine, PairingError};
use crate::lincomb::{LinComb2, Word};
use crate::ncalg::{word_grade, DslError, Family, GenLetter, NCElem, NcError, OperatorForms, RuleSet, ShowNc};
use crate::qfield::RatFunc;
use crate::report::Witness;

pub use checks::{
    brackets_check, cartan_check, check_gamma_exchange, check_gamma_tilde_exchange, dstar_check, exterior_check,
    gamma_tilde_factor, sigma_trace_factor, test_family, tilded_check,
};

pub const DEFAULT_GRADE_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WcalcError {
    #[error("form of grade {grade} exceeds the grade cap {cap}")]
    GradeOverflow { grade: usize, cap: usize },
    #[error("{0} is not a form (only t and w letters are allowed)")]
    NotAForm(String),
    #[error("unknown functional {0}")]
    UnknownFunctional(String),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("startup self-test failed: {0}")]
    SelfTest(String),
}

/// Element of Γ^∧ in the T/Ω sector of the rewriting system.
pub type FormElem = NCElem;

/// Right-leg letter of a graded coproduct: a function-side letter or a Maurer–Cartan form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FLetter {
    A(ALetter),
    W(usize, usize),
}

impl fmt::Display for FLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FLetter::A(a) => write!(f, "{}", a),
            FLetter::W(i, j) => write!(f, "w[{},{}]", i + 1, j + 1),
        }
    }
}

pub type FWord = Word<FLetter>;
pub type FormTwo = LinComb2<GenLetter, FLetter>;
type FTwo = LinComb2<FLetter, FLetter>;

fn f_grade(w: &[FLetter]) -> usize {
    w.iter().filter(|l| matches!(l, FLetter::W(..))).count()
}

fn odd_f(b: &Word<FLetter>, a: &Word<FLetter>) -> bool {
    f_grade(b.letters()) * f_grade(a.letters()) % 2 == 1
}

fn odd_g(b: &Word<FLetter>, a: &Word<GenLetter>) -> bool {
    f_grade(b.letters()) * word_grade(a.letters()) % 2 == 1
}

/// An operator acting on forms: a dual functional (even) or an inner-derivation functional (odd).
#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Dual(DualElem),
    Gamma(usize),
    GammaTilde(usize),
}

impl Op {
    pub fn grade(&self) -> usize {
        match self {
            Op::Dual(_) => 0,
            _ => 1,
        }
    }

    pub fn one() -> Self {
        Op::Dual(DualElem::one())
    }
}

fn r_word(n: usize, upper: usize, lower: usize) -> Vec<FLetter> {
    let (i, j) = (upper / n, upper % n);
    let (k, l) = (lower / n, lower % n);
    vec![FLetter::A(ALetter::st(i, k)), FLetter::A(ALetter::t(l, j))]
}

/// `Δ(Ω^I) = 1⊗Ω^I + Σ_K Ω^K ⊗ r^I_K` on the right leg alphabet.
fn coproduct_f_letter(l: &FLetter, n: usize) -> FTwo {
    let mut e = FTwo::zero();
    let one = RatFunc::one();
    match *l {
        FLetter::A(a) => {
            for c in 0..n {
                let (x, y) = match a.kind {
                    AKind::T => (ALetter::t(a.row, c), ALetter::t(c, a.col)),
                    AKind::St => (ALetter::st(c, a.col), ALetter::st(a.row, c)),
                };
                e.add_term(Word::single(FLetter::A(x)), Word::single(FLetter::A(y)), one.clone());
            }
        }
        FLetter::W(i, j) => {
            e.add_term(Word::empty(), Word::single(*l), one.clone());
            for k in 0..n * n {
                e.add_term(Word::single(FLetter::W(k / n, k % n)), Word(r_word(n, i * n + j, k)), one.clone());
            }
        }
    }
    e
}

fn coproduct_f_word(w: &[FLetter], n: usize) -> FTwo {
    let mut acc = FTwo::one();
    for l in w {
        acc = acc.mul_signed(&coproduct_f_letter(l, n), odd_f);
    }
    acc
}

/// Graded coproduct of one form letter with function-side right legs.
pub fn coproduct_form_letter(l: &GenLetter, n: usize) -> Result<FormTwo, WcalcError> {
    let mut e = FormTwo::zero();
    let one = RatFunc::one();
    match l.family {
        Family::T => {
            for k in 0..n {
                e.add_term(
                    Word::single(GenLetter::t(l.row, k)),
                    Word::single(FLetter::A(ALetter::t(k, l.col))),
                    one.clone(),
                );
            }
        }
        Family::W => {
            e.add_term(Word::empty(), Word::single(FLetter::W(l.row, l.col)), one.clone());
            for k in 0..n * n {
                e.add_term(
                    Word::single(GenLetter::w(k / n, k % n)),
                    Word(r_word(n, l.row * n + l.col, k)),
                    one.clone(),
                );
            }
        }
        _ => return Err(WcalcError::NotAForm(l.to_string())),
    }
    Ok(e)
}

/// Graded coproduct of a form, extended multiplicatively with Koszul signs.
pub fn graded_coproduct(e: &FormElem, n: usize) -> Result<FormTwo, WcalcError> {
    let mut out = FormTwo::zero();
    for (w, c) in e.iter() {
        let mut acc = FormTwo::one();
        for l in w.letters() {
            acc = acc.mul_signed(&coproduct_form_letter(l, n)?, odd_g);
        }
        out.add_scaled(&acc, c);
    }
    Ok(out)
}

fn counit_f(w: &[FLetter]) -> bool {
    w.iter().all(|l| matches!(l, FLetter::A(a) if a.row == a.col))
}

fn a_elem(w: &[FLetter]) -> Option<AElem> {
    let mut v = Vec::with_capacity(w.len());
    for l in w {
        match l {
            FLetter::A(a) => v.push(*a),
            FLetter::W(..) => return None,
        }
    }
    Some(AElem::word(v))
}

/// `<op, w>` for a single operator against one right-leg word.
pub fn pair_single(engine: &PairingEngine, funcs: &Functionals, op: &Op, w: &[FLetter]) -> Result<RatFunc, PairingError> {
    let n = funcs.n();
    match op {
        Op::Dual(x) => match a_elem(w) {
            Some(a) => engine.pair(x, &a),
            None => Ok(RatFunc::zero()),
        },
        Op::Gamma(p) | Op::GammaTilde(p) => {
            let pos: Vec<usize> = (0..w.len()).filter(|&i| matches!(w[i], FLetter::W(..))).collect();
            if pos.len() != 1 {
                return Ok(RatFunc::zero());
            }
            let FLetter::W(i, j) = w[pos[0]] else { unreachable!() };
            let k = i * n + j;
            let (a, b) = (&w[..pos[0]], &w[pos[0] + 1..]);
            if matches!(op, Op::Gamma(_)) {
                // <γ_P, a Ω^K b> = ε(a) <f^K_P, b>
                if !counit_f(a) {
                    return Ok(RatFunc::zero());
                }
                engine.pair(funcs.f(k, *p), &a_elem(b).expect("single form letter"))
            } else {
                // <γ̃_P, a Ω^K b> = <φ^K_P, a> ε(b)
                if !counit_f(b) {
                    return Ok(RatFunc::zero());
                }
                engine.pair(funcs.phi(k, *p), &a_elem(a).expect("single form letter"))
            }
        }
    }
}

/// `<x_1 x_2 ⋯ x_k, w>` through iterated graded coproducts of `w`.
pub fn pair_ops(engine: &PairingEngine, funcs: &Functionals, ops: &[Op], w: &[FLetter]) -> Result<RatFunc, PairingError> {
    match ops.len() {
        0 => Ok(if counit_f(w) { RatFunc::one() } else { RatFunc::zero() }),
        1 => pair_single(engine, funcs, &ops[0], w),
        _ => {
            let rest_grade: usize = ops[1..].iter().map(|o| o.grade()).sum();
            let mut s = RatFunc::zero();
            for ((w1, w2), c) in coproduct_f_word(w, funcs.n()).iter() {
                let v1 = pair_single(engine, funcs, &ops[0], w1.letters())?;
                if v1.is_zero() {
                    continue;
                }
                let v2 = pair_ops(engine, funcs, &ops[1..], w2.letters())?;
                if v2.is_zero() {
                    continue;
                }
                let v = &(&v1 * &v2) * c;
                if rest_grade * f_grade(w1.letters()) % 2 == 1 {
                    s -= &v;
                } else {
                    s += &v;
                }
            }
            Ok(s)
        }
    }
}

/// A form word read on the right-leg alphabet.
pub fn form_word_to_f(w: &[GenLetter]) -> Result<Vec<FLetter>, WcalcError> {
    w.iter()
        .map(|l| match l.family {
            Family::T => Ok(FLetter::A(ALetter::t(l.row, l.col))),
            Family::W => Ok(FLetter::W(l.row, l.col)),
            _ => Err(WcalcError::NotAForm(l.to_string())),
        })
        .collect()
}

/// The forms layer over a rule set, a pairing engine and the functional families.
pub struct Forms<'a> {
    rules: &'a RuleSet,
    engine: &'a PairingEngine,
    funcs: &'a Functionals,
    cap: usize,
    letter_cache: RwLock<HashMap<(DualLetter, Word<GenLetter>), Arc<FormElem>>>,
}

impl<'a> Forms<'a> {
    /// Builds the layer and replays the derivation dΩ = −ΩΩ from d²T = 0.
    pub fn new(rules: &'a RuleSet, engine: &'a PairingEngine, funcs: &'a Functionals, cap: usize) -> Result<Self, WcalcError> {
        let f = Forms { rules, engine, funcs, cap, letter_cache: RwLock::new(HashMap::new()) };
        f.d_omega_self_test().map_err(|w| WcalcError::SelfTest(w.0))?;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.rules.n()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rules(&self) -> &RuleSet {
        self.rules
    }

    pub fn engine(&self) -> &PairingEngine {
        self.engine
    }

    pub fn funcs(&self) -> &Functionals {
        self.funcs
    }

    /// Highest grade present; `None` for zero.
    pub fn grade(&self, e: &FormElem) -> Result<Option<usize>, WcalcError> {
        self.check_form(e)?;
        Ok(e.iter().map(|(w, _)| word_grade(w.letters())).max())
    }

    fn check_form(&self, e: &FormElem) -> Result<(), WcalcError> {
        for (w, _) in e.iter() {
            if let Some(l) = w.letters().iter().find(|l| !matches!(l.family, Family::T | Family::W)) {
                return Err(WcalcError::NotAForm(l.to_string()));
            }
        }
        Ok(())
    }

    fn check_cap(&self, e: &FormElem, extra: usize) -> Result<(), WcalcError> {
        if let Some(g) = self.grade(e)? {
            if g + extra > self.cap {
                return Err(WcalcError::GradeOverflow { grade: g + extra, cap: self.cap });
            }
        }
        Ok(())
    }

    pub fn nf(&self, e: &FormElem) -> Result<FormElem, WcalcError> {
        Ok(self.rules.normal_form(e)?)
    }

    pub fn mul(&self, a: &FormElem, b: &FormElem) -> Result<FormElem, WcalcError> {
        Ok(self.rules.mul(a, b)?)
    }

    fn d_letter(&self, l: &GenLetter) -> FormElem {
        let n = self.n();
        let mut e = FormElem::zero();
        for k in 0..n {
            match l.family {
                // dt^i_j = t^i_k Ω^k_j
                Family::T => e.add_term(Word(vec![GenLetter::t(l.row, k), GenLetter::w(k, l.col)]), RatFunc::one()),
                // dΩ^i_j = −Ω^i_k Ω^k_j
                _ => e.add_term(Word(vec![GenLetter::w(l.row, k), GenLetter::w(k, l.col)]), -RatFunc::one()),
            }
        }
        e
    }

    fn d_raw(&self, e: &FormElem) -> FormElem {
        let mut out = FormElem::zero();
        for (w, c) in e.iter() {
            let l = w.letters();
            let mut sign_odd = false;
            for p in 0..l.len() {
                let pre = FormElem::word(l[..p].to_vec());
                let post = FormElem::word(l[p + 1..].to_vec());
                let term = &(&pre * &self.d_letter(&l[p])) * &post;
                out.add_scaled(&term, &if sign_odd { -c } else { c.clone() });
                if l[p].family == Family::W {
                    sign_odd = !sign_odd;
                }
            }
        }
        out
    }

    /// Exterior differential with the graded Leibniz rule.
    pub fn d(&self, e: &FormElem) -> Result<FormElem, WcalcError> {
        self.check_cap(e, 1)?;
        self.nf(&self.d_raw(e))
    }

    /// d(T Ω) = dT Ω + T dΩ must vanish; solving for dΩ gives −ΩΩ, which is then replayed on d(dt).
    pub fn d_omega_self_test(&self) -> Result<(), Witness> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let t = FormElem::letter(GenLetter::t(i, j));
                let z = self.nf(&self.d_raw(&self.nf(&self.d_raw(&t)).map_err(|e| Witness(e.to_string()))?));
                let z = z.map_err(|e| Witness(e.to_string()))?;
                if !z.is_zero() {
                    return Err(Witness(format!("d(d({})) = {}", GenLetter::t(i, j), ShowNc(&z))));
                }
            }
        }
        Ok(())
    }

    fn pair_cached(
        &self,
        op: &Op,
        w: &[FLetter],
        cache: &mut HashMap<Vec<FLetter>, RatFunc>,
    ) -> Result<RatFunc, WcalcError> {
        if let Some(v) = cache.get(w) {
            return Ok(v.clone());
        }
        let v = pair_single(self.engine, self.funcs, op, w)?;
        cache.insert(w.to_vec(), v.clone());
        Ok(v)
    }

    /// `X^a_b ▷ g` for one dual letter and one form letter.
    fn letter_on_letter(&self, x: &DualLetter, g: &GenLetter) -> Result<FormElem, WcalcError> {
        let n = self.n();
        let xe = DualElem::letter(*x);
        let mut out = FormElem::zero();
        match g.family {
            Family::T => {
                for k in 0..n {
                    let v = self.engine.pair(&xe, &AElem::letter(ALetter::t(k, g.col)))?;
                    out.add_term(Word::single(GenLetter::t(g.row, k)), v);
                }
            }
            Family::W => {
                for k in 0..n * n {
                    let r = self.funcs.r(g.row * n + g.col, k);
                    out.add_term(Word::single(GenLetter::w(k / n, k % n)), self.engine.pair(&xe, &r)?);
                }
            }
            _ => return Err(WcalcError::NotAForm(g.to_string())),
        }
        Ok(out)
    }

    /// `X^a_b ▷ (g₁⋯g_p)` through the matrix coproduct of the letter, memoized.
    fn letter_on_word(&self, x: &DualLetter, w: &[GenLetter]) -> Result<Arc<FormElem>, WcalcError> {
        let key = (*x, Word(w.to_vec()));
        if let Some(v) = self.letter_cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let n = self.n();
        let out = match w.len() {
            0 => FormElem::scalar(if x.row == x.col { RatFunc::one() } else { RatFunc::zero() }),
            1 => self.letter_on_letter(x, &w[0])?,
            _ => {
                let mut acc = FormElem::zero();
                for c in 0..n {
                    let (head, tail) = if x.kind.forward() {
                        (DualLetter::new(x.kind, x.row, c), DualLetter::new(x.kind, c, x.col))
                    } else {
                        (DualLetter::new(x.kind, c, x.col), DualLetter::new(x.kind, x.row, c))
                    };
                    let a = self.letter_on_word(&head, &w[..1])?;
                    if a.is_zero() {
                        continue;
                    }
                    let b = self.letter_on_word(&tail, &w[1..])?;
                    acc = &acc + &(&*a * &*b);
                }
                acc
            }
        };
        let out = Arc::new(out);
        self.letter_cache.write().expect("cache lock").insert(key, out.clone());
        Ok(out)
    }

    fn dual_act(&self, x: &DualElem, e: &FormElem) -> Result<FormElem, WcalcError> {
        let mut out = FormElem::zero();
        for (xw, xc) in x.iter() {
            let mut cur = e.clone();
            for l in xw.letters().iter().rev() {
                let mut next = FormElem::zero();
                for (w, c) in cur.iter() {
                    next.add_scaled(&*self.letter_on_word(l, w.letters())?, c);
                }
                cur = next;
            }
            out.add_scaled(&cur, xc);
        }
        Ok(out)
    }

    /// γ_P ▷ (g R) = (−1)^{|g|} g (γ_P ▷ R) + [g = Ω^J] f^J_P ▷ R.
    fn gamma_word(&self, p: usize, w: &[GenLetter]) -> Result<FormElem, WcalcError> {
        let n = self.n();
        if w.is_empty() {
            return Ok(FormElem::zero());
        }
        let (g, rest) = (w[0], &w[1..]);
        let mut out = &FormElem::letter(g) * &self.gamma_word(p, rest)?;
        if g.family == Family::W {
            out = -&out;
            let tail = FormElem::word(rest.to_vec());
            out = &out + &self.dual_act(self.funcs.f(g.row * n + g.col, p), &tail)?;
        }
        Ok(out)
    }

    /// γ̃_P ▷ (R g) = (γ̃_P ▷ R) g + (−1)^{|R|} (φ^J_P ▷ R) [g = Ω^J].
    fn gamma_tilde_word(&self, p: usize, w: &[GenLetter]) -> Result<FormElem, WcalcError> {
        let n = self.n();
        let Some((&g, rest)) = w.split_last() else {
            return Ok(FormElem::zero());
        };
        let mut out = &self.gamma_tilde_word(p, rest)? * &FormElem::letter(g);
        if g.family == Family::W {
            let head = FormElem::word(rest.to_vec());
            let x = self.dual_act(self.funcs.phi(g.row * n + g.col, p), &head)?;
            let x = if word_grade(rest) % 2 == 1 { -&x } else { x };
            out = &out + &x;
        }
        Ok(out)
    }

    /// `x ▷ ρ`, evaluated letterwise through the coproduct of `x`.
    pub fn act(&self, op: &Op, e: &FormElem) -> Result<FormElem, WcalcError> {
        self.check_form(e)?;
        let out = match op {
            Op::Dual(x) => self.dual_act(x, e)?,
            Op::Gamma(p) | Op::GammaTilde(p) => {
                let mut out = FormElem::zero();
                for (w, c) in e.iter() {
                    let x = if matches!(op, Op::Gamma(_)) {
                        self.gamma_word(*p, w.letters())?
                    } else {
                        self.gamma_tilde_word(*p, w.letters())?
                    };
                    out.add_scaled(&x, c);
                }
                out
            }
        };
        self.nf(&out)
    }

    /// `x ▷ ρ = (−1)^{|x||ρ₁|} ρ₁ <x, ρ₂>` from the graded coproduct of ρ and the defining brackets.
    pub fn act_direct(&self, op: &Op, e: &FormElem) -> Result<FormElem, WcalcError> {
        self.check_form(e)?;
        let n = self.n();
        let mut cache = HashMap::new();
        let mut out = FormElem::zero();
        for (w, c) in e.iter() {
            let mut acc = FormTwo::one();
            for l in w.letters() {
                acc = acc.mul_signed(&coproduct_form_letter(l, n)?, odd_g);
            }
            for ((w1, w2), c2) in acc.iter() {
                let v = self.pair_cached(op, w2.letters(), &mut cache)?;
                if v.is_zero() {
                    continue;
                }
                let v = &(&v * c2) * c;
                let odd = op.grade() * word_grade(w1.letters()) % 2 == 1;
                out.add_term(w1.clone(), if odd { -v } else { v });
            }
        }
        self.nf(&out)
    }

    /// Acts with a product of operators, rightmost first.
    pub fn act_ops(&self, ops: &[Op], e: &FormElem) -> Result<FormElem, WcalcError> {
        let mut x = e.clone();
        for op in ops.iter().rev() {
            x = self.act(op, &x)?;
        }
        Ok(x)
    }

    /// Bracket of one operator with a form.
    pub fn pair_form(&self, op: &Op, e: &FormElem) -> Result<RatFunc, WcalcError> {
        let mut s = RatFunc::zero();
        for (w, c) in e.iter() {
            let fw = form_word_to_f(w.letters())?;
            s += &(&pair_single(self.engine, self.funcs, op, &fw)? * c);
        }
        Ok(s)
    }

    /// Counit on forms: zero on positive grade.
    pub fn counit(&self, e: &FormElem) -> RatFunc {
        let mut s = RatFunc::zero();
        for (w, c) in e.iter() {
            if w.letters().iter().all(|l| l.family == Family::T && l.row == l.col) {
                s += c;
            }
        }
        s
    }

    /// Resolves a functional name as written inside `L[...]`.
    pub fn functional(&self, h: &FuncRef) -> Result<DualElem, WcalcError> {
        let n = self.n();
        let bad = || WcalcError::UnknownFunctional(format!("{}{:?}", h.name, h.idx.iter().map(|i| i + 1).collect::<Vec<_>>()));
        let idx = &h.idx;
        if idx.iter().any(|&i| i >= n) {
            return Err(bad());
        }
        let dbl = |a: usize, b: usize| a * n + b;
        let kind = |k| match idx.as_slice() {
            [i, j] => Ok(DualElem::letter(DualLetter::new(k, *i, *j))),
            _ => Err(bad()),
        };
        let e = match (h.name.as_str(), idx.as_slice()) {
            ("chi", [k, l]) => self.funcs.chi(dbl(*k, *l)).clone(),
            ("chit", [k, l]) => self.funcs.chi_tilde(dbl(*k, *l)).clone(),
            ("f", [i, j, k, l]) => self.funcs.f(dbl(*i, *j), dbl(*k, *l)).clone(),
            ("phi", [i, j, k, l]) => self.funcs.phi(dbl(*i, *j), dbl(*k, *l)).clone(),
            ("lp", _) => kind(DKind::Lp)?,
            ("lm", _) => kind(DKind::Lm)?,
            ("Slp", _) => kind(DKind::SLp)?,
            ("Slm", _) => kind(DKind::SLm)?,
            ("one", []) => DualElem::one(),
            _ => return Err(bad()),
        };
        Ok(e)
    }
}

impl From<WcalcError> for DslError {
    fn from(e: WcalcError) -> Self {
        match e {
            WcalcError::Nc(x) => DslError::Nc(x),
            other => DslError::Operator(other.to_string()),
        }
    }
}

impl OperatorForms for Forms<'_> {
    fn d(&self, e: &NCElem) -> Result<NCElem, DslError> {
        Ok(Forms::d(self, e)?)
    }

    fn lie(&self, h: &FuncRef, e: &NCElem) -> Result<NCElem, DslError> {
        let x = self.functional(h)?;
        Ok(self.act(&Op::Dual(x), e)?)
    }

    fn inner(&self, i: usize, j: usize, e: &NCElem) -> Result<NCElem, DslError> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(DslError::Nc(NcError::Index { n, what: format!("i[{},{}]", i + 1, j + 1) }));
        }
        Ok(self.act(&Op::Gamma(i * n + j), e)?)
    }
}

/// `Σ_k t^i_k Ω^k_j` as a form.
pub fn dt(n: usize, i: usize, j: usize) -> FormElem {
    let mut e = FormElem::zero();
    for k in 0..n {
        e.add_term(Word(vec![GenLetter::t(i, k), GenLetter::w(k, j)]), RatFunc::one());
    }
    e
}

pub fn t(i: usize, j: usize) -> FormElem {
    FormElem::letter(GenLetter::t(i, j))
}

pub fn w(i: usize, j: usize) -> FormElem {
    FormElem::letter(GenLetter::w(i, j))
}
