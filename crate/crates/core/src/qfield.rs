//! Exact arithmetic in the field Q(q) of rational functions in the deformation parameter.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::expr::{self, Expr};

/// Exact rational number.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(Rat),
    #[error("evaluation at q = 0 is not allowed")]
    ZeroArgument,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Laurent polynomial in q with rational coefficients, stored sparse and sorted by exponent.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Rat)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(exp, c)] }
        }
    }

    /// Builds from arbitrary (exponent, coefficient) pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rat)>>(it: I) -> Self {
        let mut v: Vec<(i32, Rat)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Rat)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i32, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn low_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn high_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Multiplies by q^k.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if sign { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LaurentPoly { terms: out }
    }

    pub fn eval(&self, q0: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(q0, *e);
        }
        acc
    }

    /// Dense ascending coefficients of q^{-low} * self, together with low.
    fn to_dense(&self) -> (i32, Vec<Rat>) {
        let lo = match self.low_exp() {
            Some(l) => l,
            None => return (0, Vec::new()),
        };
        let hi = self.high_exp().unwrap();
        let mut v = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i32, v: &[Rat]) -> Self {
        LaurentPoly {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (lo + k as i32, c.clone()))
                .collect(),
        }
    }
}

fn pow_rat(x: &Rat, e: i32) -> Rat {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.combine(o, false)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.combine(o, true)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if o.is_monomial() {
            let (e, c) = &o.terms[0];
            return LaurentPoly {
                terms: self.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
            };
        }
        if self.is_monomial() {
            return o * self;
        }
        let mut acc: Vec<(i32, Rat)> = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                acc.push((e1 + e2, c1 * c2));
            }
        }
        LaurentPoly::from_terms(acc)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

fn trim(v: &mut Vec<Rat>) {
    while matches!(v.last(), Some(c) if c.is_zero()) {
        v.pop();
    }
}

/// Division with remainder of dense polynomials (ascending coefficients, divisor nonzero).
fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r: Vec<Rat> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = &b[db];
    let mut quo = vec![Rat::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / lb;
        for (i, bi) in b.iter().enumerate() {
            if !bi.is_zero() {
                r[k + i] -= &c * bi;
            }
        }
        quo[k] = c;
        r.pop();
        trim(&mut r);
    }
    (quo, r)
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &l;
        }
    }
    x
}

/// Element of Q(q) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::from_poly(LaurentPoly::monomial(k, Rat::one()))
    }

    /// q − q⁻¹.
    pub fn lambda() -> Self {
        Self::from_poly(LaurentPoly::from_terms([(1, Rat::one()), (-1, -Rat::one())]))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    /// Canonicalizes num/den.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let s = den.low_exp().unwrap();
        let num = num.shift(-s);
        let den = den.shift(-s);
        if den.is_monomial() {
            let c = den.terms[0].1.recip();
            return Ok(RatFunc { num: num.scale(&c), den: LaurentPoly::one() });
        }
        let (nlo, nd) = num.to_dense();
        let (_, dd) = den.to_dense();
        let g = poly_gcd(&nd, &dd);
        let (nd, dd) = if g.len() > 1 {
            (poly_divmod(&nd, &g).0, poly_divmod(&dd, &g).0)
        } else {
            (nd, dd)
        };
        let lc = dd.last().unwrap().recip();
        let nd: Vec<Rat> = nd.iter().map(|c| c * &lc).collect();
        let dd: Vec<Rat> = dd.iter().map(|c| c * &lc).collect();
        Ok(RatFunc { num: LaurentPoly::from_dense(nlo, &nd), den: LaurentPoly::from_dense(0, &dd) })
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value is c·q^k for a nonzero rational c.
    pub fn is_laurent_monomial(&self) -> bool {
        self.den.is_one() && self.num.is_monomial()
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<RatFunc, FieldError> {
        if o.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if o.den.is_one() && o.num.is_monomial() {
            let (e, c) = &o.num.terms[0];
            let num = self.num.shift(-e).scale(&c.recip());
            return Ok(RatFunc { num, den: self.den.clone() });
        }
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn inv(&self) -> Result<RatFunc, FieldError> {
        RatFunc::one().checked_div(self)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, k: i32) -> Result<RatFunc, FieldError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn eval_at(&self, q0: &Rat) -> Result<Rat, FieldError> {
        if q0.is_zero() {
            return Err(FieldError::ZeroArgument);
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(FieldError::Pole(q0.clone()));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Returns the rational value if this is a constant.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.den.is_one() && self.num.is_monomial() && self.num.terms[0].0 == 0 {
            Some(self.num.terms[0].1.clone())
        } else {
            None
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num + &o.num, den: LaurentPoly::one() };
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero denominator");
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
            .expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num * &o.num, den: LaurentPoly::one() };
        }
        if o.den.is_one() && o.num.is_monomial() {
            return RatFunc { num: &self.num * &o.num, den: self.den.clone() };
        }
        if self.den.is_one() && self.num.is_monomial() {
            return RatFunc { num: &self.num * &o.num, den: o.den.clone() };
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use `checked_div` to handle it.
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, o: &RatFunc) {
        *self = &*self + o;
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, o: &RatFunc) {
        *self = &*self - o;
    }
}

impl MulAssign<&RatFunc> for RatFunc {
    fn mul_assign(&mut self, o: &RatFunc) {
        *self = &*self * o;
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::from_rat(c)
    }
}

fn fmt_rat_abs(c: &Rat) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = fmt_rat_abs(c);
            let mono = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{}", e),
            };
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if c.abs().is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for RatFunc {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = expr::parse(s).map_err(|e| FieldError::Parse(e.to_string()))?;
        eval_scalar(&e)
    }
}

/// Evaluates a scalar expression (no generators or operators) to a RatFunc.
pub fn eval_scalar(e: &Expr) -> Result<RatFunc, FieldError> {
    Ok(match e {
        Expr::Num(n) => RatFunc::from_rat(Rat::from_integer(n.clone())),
        Expr::Q => RatFunc::q(),
        Expr::Neg(a) => -eval_scalar(a)?,
        Expr::Add(a, b) => eval_scalar(a)? + eval_scalar(b)?,
        Expr::Sub(a, b) => eval_scalar(a)? - eval_scalar(b)?,
        Expr::Mul(a, b) => eval_scalar(a)? * eval_scalar(b)?,
        Expr::Div(a, b) => eval_scalar(a)?.checked_div(&eval_scalar(b)?)?,
        Expr::Pow(a, k) => eval_scalar(a)?.pow(*k)?,
        other => return Err(FieldError::Parse(format!("not a scalar: {}", other))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn additive_identity() {
        assert_eq!(RatFunc::lambda() + RatFunc::zero(), RatFunc::lambda());
    }

    #[test]
    fn multiplicative_inverse() {
        let l = RatFunc::lambda();
        assert!((&l * &l.inv().unwrap()).is_one());
    }

    #[test]
    fn hand_expansion() {
        let a = p("(q^2 - 1)/q");
        assert!((a - RatFunc::lambda()).is_zero());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatFunc::one().checked_div(&RatFunc::zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn evaluation() {
        assert_eq!(RatFunc::lambda().eval_at(&rat(1)).unwrap(), rat(0));
        let inv = RatFunc::lambda().inv().unwrap();
        assert_eq!(inv.eval_at(&rat(1)), Err(FieldError::Pole(rat(1))));
        assert_eq!(p("q^2").eval_at(&rat(2)).unwrap(), rat(4));
        assert_eq!(p("q").eval_at(&rat(0)), Err(FieldError::ZeroArgument));
    }

    #[test]
    fn canonical_denominator() {
        let a = p("1/(q - q^-1)");
        assert_eq!(a.den().low_exp(), Some(0));
        assert!(a.den().leading_coeff().unwrap().is_one());
        assert_eq!(a.to_string(), "(q)/(q^2 - 1)");
        let b = p("(q + 1)/(q^2 - 1)");
        assert_eq!(b, p("1/(q - 1)"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["q^2 - 1", "-q^-1 + 2", "1/2*q^3 - 3/7", "(2*q)/(q^2 + 1)", "0", "-1"] {
            let v = p(s);
            assert_eq!(p(&v.to_string()), v, "{}", s);
        }
        assert_eq!(p("q - q^-1").to_string(), "q - q^-1");
    }
}
