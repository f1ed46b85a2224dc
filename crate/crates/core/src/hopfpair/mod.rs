//! Hopf duality between the function algebra (letters t, S(t)) and its dual (letters l±, S(l±), S⁻¹(l±)).

mod engine;
mod functionals;
mod table;
mod verify;

use std::fmt;

use thiserror::Error;

use crate::lincomb::{format_lincomb, LinComb, LinComb2, Word};

pub use engine::{Image, PairingEngine, TestSpace};
pub use functionals::Functionals;
pub use table::PairingTable;
pub use verify::{
    a_is_zero, functional_eq, functional_eq_in, images_eq, kind_patterns, probe_letters, rtt_elements, t_words,
    table_checks, two_leg_eq, verify_functional_relations, verify_woronowicz, FuncImages, Witness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("dimension mismatch: engine has n = {expected}, letter index {got} out of range")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pairing table could not be built: {0}")]
    Table(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum AKind {
    T,
    St,
}

/// A generator of the function side: `t^row_col` or `S(t)^row_col`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ALetter {
    pub kind: AKind,
    pub row: usize,
    pub col: usize,
}

impl ALetter {
    pub fn t(row: usize, col: usize) -> Self {
        ALetter { kind: AKind::T, row, col }
    }

    pub fn st(row: usize, col: usize) -> Self {
        ALetter { kind: AKind::St, row, col }
    }

    /// Index entering the row of the letter's pairing matrix.
    pub fn row_comp(&self) -> usize {
        match self.kind {
            AKind::T => self.row,
            AKind::St => self.col,
        }
    }

    pub fn col_comp(&self) -> usize {
        match self.kind {
            AKind::T => self.col,
            AKind::St => self.row,
        }
    }
}

impl fmt::Display for ALetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AKind::T => write!(f, "t[{},{}]", self.row + 1, self.col + 1),
            AKind::St => write!(f, "S(t)[{},{}]", self.row + 1, self.col + 1),
        }
    }
}

pub type AElem = LinComb<ALetter>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum DKind {
    Lp,
    Lm,
    SLp,
    SLm,
    SiLm,
    SiLp,
}

impl DKind {
    pub const ALL: [DKind; 6] = [DKind::Lp, DKind::Lm, DKind::SLp, DKind::SLm, DKind::SiLm, DKind::SiLp];

    /// l± have the matrix coproduct `X^a_c ⊗ X^c_b`; antipode images have it reversed.
    pub fn forward(self) -> bool {
        matches!(self, DKind::Lp | DKind::Lm)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DKind::Lp => "lp",
            DKind::Lm => "lm",
            DKind::SLp => "S(lp)",
            DKind::SLm => "S(lm)",
            DKind::SiLm => "Sinv(lm)",
            DKind::SiLp => "Sinv(lp)",
        }
    }

    pub fn antipode_inverse(self) -> Option<DKind> {
        match self {
            DKind::Lp => Some(DKind::SiLp),
            DKind::Lm => Some(DKind::SiLm),
            DKind::SLp => Some(DKind::Lp),
            DKind::SLm => Some(DKind::Lm),
            _ => None,
        }
    }
}

/// A generator of the dual side: `X^row_col` for one of the six kinds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct DualLetter {
    pub kind: DKind,
    pub row: usize,
    pub col: usize,
}

impl DualLetter {
    pub fn new(kind: DKind, row: usize, col: usize) -> Self {
        DualLetter { kind, row, col }
    }
}

impl fmt::Display for DualLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind.name(), self.row + 1, self.col + 1)
    }
}

pub type DualElem = LinComb<DualLetter>;
pub type DualTwo = LinComb2<DualLetter, DualLetter>;
pub type ATwo = LinComb2<ALetter, ALetter>;

pub fn dual_letter(kind: DKind, row: usize, col: usize) -> DualElem {
    LinComb::letter(DualLetter::new(kind, row, col))
}

pub fn a_word(letters: Vec<ALetter>) -> AElem {
    LinComb::word(letters)
}

pub fn format_word<L: fmt::Display>(w: &[L]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*")
    }
}

pub struct Show<'a, L: Ord>(pub &'a LinComb<L>);

impl<L: Ord + Clone + fmt::Display> fmt::Display for Show<'_, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_lincomb(self.0, f, |l| l.to_string())
    }
}

/// Matrix coproduct of a dual letter.
pub fn coproduct_letter(l: &DualLetter, n: usize) -> DualTwo {
    let mut e = DualTwo::zero();
    for c in 0..n {
        let (x, y) = if l.kind.forward() {
            (DualLetter::new(l.kind, l.row, c), DualLetter::new(l.kind, c, l.col))
        } else {
            (DualLetter::new(l.kind, c, l.col), DualLetter::new(l.kind, l.row, c))
        };
        e.add_term(Word::single(x), Word::single(y), crate::qfield::RatFunc::one());
    }
    e
}

/// Coproduct of a dual element, extended multiplicatively from the letters.
pub fn coproduct_dual(x: &DualElem, n: usize) -> DualTwo {
    let mut out = DualTwo::zero();
    for (w, c) in x.iter() {
        let mut acc = DualTwo::one();
        for l in w.letters() {
            acc = acc.mul(&coproduct_letter(l, n));
        }
        out.add_scaled(&acc, c);
    }
    out
}

/// Coproduct of a function-side letter.
pub fn coproduct_a_letter(l: &ALetter, n: usize) -> ATwo {
    let mut e = ATwo::zero();
    for c in 0..n {
        let (x, y) = match l.kind {
            AKind::T => (ALetter::t(l.row, c), ALetter::t(c, l.col)),
            AKind::St => (ALetter::st(c, l.col), ALetter::st(l.row, c)),
        };
        e.add_term(Word::single(x), Word::single(y), crate::qfield::RatFunc::one());
    }
    e
}

pub fn coproduct_a(a: &AElem, n: usize) -> ATwo {
    let mut out = ATwo::zero();
    for (w, c) in a.iter() {
        let mut acc = ATwo::one();
        for l in w.letters() {
            acc = acc.mul(&coproduct_a_letter(l, n));
        }
        out.add_scaled(&acc, c);
    }
    out
}

/// Counit on the function side: ε(t^i_j) = ε(S(t)^i_j) = δ^i_j.
pub fn counit_a(a: &AElem) -> crate::qfield::RatFunc {
    let mut s = crate::qfield::RatFunc::zero();
    for (w, c) in a.iter() {
        if w.letters().iter().all(|l| l.row == l.col) {
            s += c;
        }
    }
    s
}
