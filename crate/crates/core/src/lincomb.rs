//! Words over an ordered alphabet and finite linear combinations of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::qfield::RatFunc;

/// A word; ordered by length first, then lexicographically by letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word<L>(pub Vec<L>);

impl<L: Ord> Ord for Word<L> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl<L: Ord> PartialOrd for Word<L> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<L> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }
}

impl<L: Clone> Word<L> {
    pub fn single(l: L) -> Self {
        Word(vec![l])
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }
}

/// Finite linear combination of words with RatFunc coefficients and no zero terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<L: Ord> {
    terms: BTreeMap<Word<L>, RatFunc>,
}

impl<L: Ord> Default for LinComb<L> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<L: Ord + Clone> LinComb<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RatFunc::one())
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(w: Word<L>, c: RatFunc) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn letter(l: L) -> Self {
        Self::term(Word::single(l), RatFunc::one())
    }

    pub fn word(letters: Vec<L>) -> Self {
        Self::term(Word(letters), RatFunc::one())
    }

    pub fn add_term(&mut self, w: Word<L>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &o.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word<L>, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word<L>) -> RatFunc {
        self.terms.get(w).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn max_word(&self) -> Option<&Word<L>> {
        self.terms.keys().next_back()
    }

    pub fn pop_max(&mut self) -> Option<(Word<L>, RatFunc)> {
        self.terms.pop_last()
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&Word::empty())
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Replaces every letter by a linear combination and multiplies out.
    pub fn substitute<M: Ord + Clone>(&self, f: &impl Fn(&L) -> LinComb<M>) -> LinComb<M> {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            let mut acc = LinComb::scalar(c.clone());
            for l in &w.0 {
                acc = &acc * &f(l);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &RatFunc::one());
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<Word<L>, RatFunc> {
        self.terms
    }
}

impl<L: Ord + Clone> FromIterator<(Word<L>, RatFunc)> for LinComb<L> {
    fn from_iter<I: IntoIterator<Item = (Word<L>, RatFunc)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }
}

impl<'a, L: Ord + Clone> Add<&'a LinComb<L>> for &'a LinComb<L> {
    type Output = LinComb<L>;
    fn add(self, o: &LinComb<L>) -> LinComb<L> {
        let mut e = self.clone();
        e.add_scaled(o, &RatFunc::one());
        e
    }
}

impl<'a, L: Ord + Clone> Sub<&'a LinComb<L>> for &'a LinComb<L> {
    type Output = LinComb<L>;
    fn sub(self, o: &LinComb<L>) -> LinComb<L> {
        let mut e = self.clone();
        e.add_scaled(o, &RatFunc::from_int(-1));
        e
    }
}

impl<'a, L: Ord + Clone> Mul<&'a LinComb<L>> for &'a LinComb<L> {
    type Output = LinComb<L>;
    fn mul(self, o: &LinComb<L>) -> LinComb<L> {
        let mut e = LinComb::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                e.add_term(w1.concat(w2), c1 * c2);
            }
        }
        e
    }
}

impl<L: Ord + Clone> Neg for &LinComb<L> {
    type Output = LinComb<L>;
    fn neg(self) -> LinComb<L> {
        self.scale(&RatFunc::from_int(-1))
    }
}

/// Writes `c*w1*w2 + ...` with a caller-supplied letter printer; highest words first.
pub fn format_lincomb<L: Ord + Clone>(
    e: &LinComb<L>,
    f: &mut fmt::Formatter<'_>,
    letter: impl Fn(&L) -> String,
) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (w, c) in e.terms.iter().rev() {
        let mut s = c.to_string();
        let word: Vec<String> = w.0.iter().map(&letter).collect();
        let neg = s.starts_with('-') && c.is_laurent() && c.num().terms().len() == 1;
        if neg {
            s.remove(0);
        }
        let coef_needs_paren = c.is_laurent() && c.num().terms().len() > 1;
        let body = if word.is_empty() {
            if coef_needs_paren {
                format!("({})", s)
            } else {
                s
            }
        } else if c.is_one() || (neg && s == "1") {
            word.join("*")
        } else if coef_needs_paren {
            format!("({})*{}", s, word.join("*"))
        } else {
            format!("{}*{}", s, word.join("*"))
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
            write!(f, "{}", body)?;
        } else {
            write!(f, "{}{}", if neg { " - " } else { " + " }, body)?;
        }
        first = false;
    }
    Ok(())
}

/// Linear combination of pairs of words (an element of a tensor product of two free algebras).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb2<A: Ord, B: Ord> {
    terms: BTreeMap<(Word<A>, Word<B>), RatFunc>,
}

impl<A: Ord, B: Ord> Default for LinComb2<A, B> {
    fn default() -> Self {
        LinComb2 { terms: BTreeMap::new() }
    }
}

impl<A: Ord + Clone, B: Ord + Clone> LinComb2<A, B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.add_term(Word::empty(), Word::empty(), RatFunc::one());
        e
    }

    pub fn add_term(&mut self, a: Word<A>, b: Word<B>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let k = (a, b);
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &RatFunc) {
        for ((a, b), v) in &o.terms {
            self.add_term(a.clone(), b.clone(), v * c);
        }
    }

    /// `x ⊗ y` for two linear combinations.
    pub fn tensor(x: &LinComb<A>, y: &LinComb<B>) -> Self {
        let mut e = Self::zero();
        for (a, c1) in x.iter() {
            for (b, c2) in y.iter() {
                e.add_term(a.clone(), b.clone(), c1 * c2);
            }
        }
        e
    }

    /// Legwise product without signs.
    pub fn mul(&self, o: &Self) -> Self {
        let mut e = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                e.add_term(a1.concat(a2), b1.concat(b2), c1 * c2);
            }
        }
        e
    }

    /// Legwise product with a Koszul sign: `odd(b1, a2)` says whether passing `b1` over `a2` flips the sign.
    pub fn mul_signed(&self, o: &Self, odd: impl Fn(&Word<B>, &Word<A>) -> bool) -> Self {
        let mut e = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                let c = c1 * c2;
                let c = if odd(b1, a2) { -c } else { c };
                e.add_term(a1.concat(a2), b1.concat(b2), c);
            }
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word<A>, Word<B>), &RatFunc)> {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex() {
        let a: Word<u8> = Word(vec![3]);
        let b: Word<u8> = Word(vec![1, 1]);
        assert!(a < b);
        assert!(Word(vec![1u8, 2]) < Word(vec![2u8, 1]));
    }

    #[test]
    fn cancellation() {
        let x: LinComb<u8> = LinComb::letter(1);
        let z = &x - &x;
        assert!(z.is_zero());
        let p = &x * &x;
        assert_eq!(p.coeff(&Word(vec![1, 1])), RatFunc::one());
    }
}
