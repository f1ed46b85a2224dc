//! The cross-product algebra in matrix form: generators T, Ω, Y, J (or X), relations, rewriting and checks.

mod checks;
mod dsl;
mod rules;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::lincomb::{format_lincomb, LinComb};

pub use checks::{check_overlaps, coaction_check, quantum_lie_check, relation_smoke, OverlapReport};
pub use dsl::{eval_nc, format_nc, DslError, OperatorForms};
pub use rules::{relations, x_relations, Relation, RuleOptions, RuleSet, DEFAULT_FUEL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("relation family {0} is not invertible on its two-letter span")]
    Singular(String),
    #[error("rewriting did not terminate within {fuel} steps; last word {word}")]
    Fuel { fuel: u64, word: String },
    #[error("index out of range for n = {n}: {what}")]
    Index { n: usize, what: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    T,
    W,
    Y,
    J,
    X,
}

impl Family {
    /// Position in the normal order T < Ω < Y = X < J.
    pub fn rank(self) -> u8 {
        match self {
            Family::T => 0,
            Family::W => 1,
            Family::Y | Family::X => 2,
            Family::J => 3,
        }
    }

    fn descending(self) -> bool {
        matches!(self, Family::Y | Family::J | Family::X)
    }

    pub fn symbol(self) -> char {
        match self {
            Family::T => 't',
            Family::W => 'w',
            Family::Y => 'Y',
            Family::J => 'J',
            Family::X => 'X',
        }
    }

    /// Form degree carried by one letter.
    pub fn grade(self) -> usize {
        match self {
            Family::W | Family::J => 1,
            _ => 0,
        }
    }
}

/// A generator `G^row_col` of one family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GenLetter {
    pub family: Family,
    pub row: usize,
    pub col: usize,
}

impl GenLetter {
    pub fn new(family: Family, row: usize, col: usize) -> Self {
        GenLetter { family, row, col }
    }

    pub fn t(row: usize, col: usize) -> Self {
        Self::new(Family::T, row, col)
    }

    pub fn w(row: usize, col: usize) -> Self {
        Self::new(Family::W, row, col)
    }
}

impl Ord for GenLetter {
    fn cmp(&self, o: &Self) -> Ordering {
        self.family
            .rank()
            .cmp(&o.family.rank())
            .then_with(|| {
                let a = (self.row, self.col).cmp(&(o.row, o.col));
                if self.family.descending() {
                    a.reverse()
                } else {
                    a
                }
            })
            .then_with(|| (self.family as u8).cmp(&(o.family as u8)))
    }
}

impl PartialOrd for GenLetter {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for GenLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.family.symbol(), self.row + 1, self.col + 1)
    }
}

pub type NCElem = LinComb<GenLetter>;

/// Display wrapper printing an element in the expression syntax.
pub struct ShowNc<'a>(pub &'a NCElem);

impl fmt::Display for ShowNc<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_lincomb(self.0, f, |l| l.to_string())
    }
}

pub fn gen(family: Family, row: usize, col: usize) -> NCElem {
    NCElem::letter(GenLetter::new(family, row, col))
}

/// Total Ω + J count of a word.
pub fn word_grade(w: &[GenLetter]) -> usize {
    w.iter().map(|l| l.family.grade()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_order() {
        assert!(GenLetter::t(1, 1) < GenLetter::w(0, 0));
        assert!(GenLetter::t(0, 0) < GenLetter::t(0, 1));
        assert!(GenLetter::new(Family::Y, 1, 1) < GenLetter::new(Family::Y, 0, 0));
        assert!(GenLetter::new(Family::Y, 0, 0) < GenLetter::new(Family::J, 1, 1));
    }
}
