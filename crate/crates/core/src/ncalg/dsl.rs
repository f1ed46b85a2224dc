use thiserror::Error;

use crate::expr::{Expr, FuncRef, GenKind};
use crate::qfield::{eval_scalar, FieldError, RatFunc};

use super::{Family, GenLetter, NCElem, NcError, RuleSet, ShowNc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("division by a non-scalar element")]
    NonScalarDivisor,
    #[error("negative power of a non-scalar element")]
    NegativePower,
    #[error("operator {0} is not available here")]
    Unsupported(String),
    #[error("{0}")]
    Operator(String),
}

/// Operator forms `d(...)`, `L[h](...)` and `i[i,j](...)`; supplied by the forms layer.
pub trait OperatorForms {
    fn d(&self, e: &NCElem) -> Result<NCElem, DslError>;
    fn lie(&self, h: &FuncRef, e: &NCElem) -> Result<NCElem, DslError>;
    fn inner(&self, i: usize, j: usize, e: &NCElem) -> Result<NCElem, DslError>;
}

fn family(k: GenKind) -> Family {
    match k {
        GenKind::T => Family::T,
        GenKind::W => Family::W,
        GenKind::Y => Family::Y,
        GenKind::J => Family::J,
        GenKind::X => Family::X,
    }
}

fn as_scalar(e: &NCElem) -> Option<RatFunc> {
    if e.iter().all(|(w, _)| w.is_empty()) {
        Some(e.constant_term())
    } else {
        None
    }
}

/// Evaluates an expression to its normal form under `rules`.
pub fn eval_nc(e: &Expr, rules: &RuleSet, ops: Option<&dyn OperatorForms>) -> Result<NCElem, DslError> {
    if let Ok(c) = eval_scalar(e) {
        return Ok(NCElem::scalar(c));
    }
    let ev = |x: &Expr| eval_nc(x, rules, ops);
    let need = |name: &str| ops.ok_or_else(|| DslError::Unsupported(name.to_string()));
    Ok(match e {
        Expr::Num(_) | Expr::Q => unreachable!("scalars handled above"),
        Expr::Gen(k, i, j) => {
            let g = NCElem::letter(GenLetter::new(family(*k), *i, *j));
            rules.normal_form(&g)?
        }
        Expr::Neg(a) => -&ev(a)?,
        Expr::Add(a, b) => &ev(a)? + &ev(b)?,
        Expr::Sub(a, b) => &ev(a)? - &ev(b)?,
        Expr::Mul(a, b) => rules.mul(&ev(a)?, &ev(b)?)?,
        Expr::Div(a, b) => {
            let d = as_scalar(&ev(b)?).ok_or(DslError::NonScalarDivisor)?;
            ev(a)?.scale(&d.inv()?)
        }
        Expr::Pow(a, k) => {
            let x = ev(a)?;
            if *k < 0 {
                let c = as_scalar(&x).ok_or(DslError::NegativePower)?;
                NCElem::scalar(c.pow(*k)?)
            } else {
                let mut acc = NCElem::one();
                for _ in 0..*k {
                    acc = rules.mul(&acc, &x)?;
                }
                acc
            }
        }
        Expr::D(a) => rules.normal_form(&need("d")?.d(&ev(a)?)?)?,
        Expr::Lie(h, a) => rules.normal_form(&need("L")?.lie(h, &ev(a)?)?)?,
        Expr::Inner(i, j, a) => rules.normal_form(&need("i")?.inner(*i, *j, &ev(a)?)?)?,
    })
}

/// Canonical text form; round-trips through the parser.
pub fn format_nc(e: &NCElem) -> String {
    ShowNc(e).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rtensor::RBundle;

    fn nf(s: &str, n: usize) -> String {
        let rs = RuleSet::build(&RBundle::standard(n)).unwrap();
        format_nc(&eval_nc(&parse(s).unwrap(), &rs, None).unwrap())
    }

    #[test]
    fn already_normal() {
        assert_eq!(nf("t[1,1]", 2), "t[1,1]");
    }

    #[test]
    fn scalar_wedge_square() {
        assert_eq!(nf("w[1,1]*w[1,1]", 1), "0");
    }

    #[test]
    fn round_trip() {
        let rs = RuleSet::build(&RBundle::standard(2)).unwrap();
        let a = eval_nc(&parse("w[1,1]*t[1,1] + Y[2,1]*t[1,2]/(q+1)").unwrap(), &rs, None).unwrap();
        let b = eval_nc(&parse(&format_nc(&a)).unwrap(), &rs, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn operators_need_forms_layer() {
        let rs = RuleSet::build(&RBundle::standard(1)).unwrap();
        let r = eval_nc(&parse("d(t[1,1])").unwrap(), &rs, None);
        assert!(matches!(r, Err(DslError::Unsupported(_))));
    }
}
