use crate::lincomb::Word;
use crate::qfield::RatFunc;
use crate::rtensor::RBundle;

use super::{AElem, ALetter, DKind, DualElem, DualLetter};

/// The doubled-index functional families f, φ, χ, χ̃ and the adjoint-matrix words r.
///
/// A doubled index I = (i, j) is flattened as i*n + j.
#[derive(Clone, Debug)]
pub struct Functionals {
    n: usize,
    f: Vec<DualElem>,
    phi: Vec<DualElem>,
    chi: Vec<DualElem>,
    chi_tilde: Vec<DualElem>,
}

impl Functionals {
    pub fn new(bundle: &RBundle) -> Self {
        let n = bundle.n;
        let m = n * n;
        let inv_lambda = bundle.lambda.inv().expect("lambda is nonzero at generic q");
        let mut f = Vec::with_capacity(m * m);
        let mut phi = Vec::with_capacity(m * m);
        for upper in 0..m {
            let (i, j) = (upper / n, upper % n);
            for lower in 0..m {
                let (k, l) = (lower / n, lower % n);
                f.push(DualElem::word(vec![
                    DualLetter::new(DKind::Lm, i, k),
                    DualLetter::new(DKind::SLp, l, j),
                ]));
                phi.push(DualElem::word(vec![
                    DualLetter::new(DKind::Lp, l, j),
                    DualLetter::new(DKind::SiLm, i, k),
                ]));
            }
        }
        let mut chi = Vec::with_capacity(m);
        let mut chi_tilde = Vec::with_capacity(m);
        for lower in 0..m {
            let (k, l) = (lower / n, lower % n);
            let mut c = DualElem::scalar(bundle.dinv(l, k) * &inv_lambda);
            let mut ct = DualElem::scalar(-(bundle.dinv(l, k) * &inv_lambda));
            for i in 0..n {
                for j in 0..n {
                    let a = bundle.dinv(j, i);
                    if !a.is_zero() {
                        c.add_scaled(&f[(i * n + j) * m + lower], &-(&a * &inv_lambda));
                    }
                    let b = bundle.dinv(i, j);
                    if !b.is_zero() {
                        ct.add_scaled(&phi[(j * n + i) * m + lower], &(&b * &inv_lambda));
                    }
                }
            }
            chi.push(c);
            chi_tilde.push(ct);
        }
        Functionals { n, f, phi, chi, chi_tilde }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of doubled indices.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// `f^upper_lower`.
    pub fn f(&self, upper: usize, lower: usize) -> &DualElem {
        &self.f[upper * self.dim() + lower]
    }

    pub fn phi(&self, upper: usize, lower: usize) -> &DualElem {
        &self.phi[upper * self.dim() + lower]
    }

    pub fn chi(&self, lower: usize) -> &DualElem {
        &self.chi[lower]
    }

    pub fn chi_tilde(&self, lower: usize) -> &DualElem {
        &self.chi_tilde[lower]
    }

    /// `r^upper_lower = S(t)^i_k t^l_j` for upper = (i,j), lower = (k,l).
    pub fn r(&self, upper: usize, lower: usize) -> AElem {
        let n = self.n;
        let (i, j) = (upper / n, upper % n);
        let (k, l) = (lower / n, lower % n);
        AElem::word(vec![ALetter::st(i, k), ALetter::t(l, j)])
    }

    /// `Y^l_j = Σ_k l⁺^l_k S(l⁻)^k_j`.
    pub fn y(&self, l: usize, j: usize) -> DualElem {
        let mut e = DualElem::zero();
        for k in 0..self.n {
            e.add_term(
                Word(vec![DualLetter::new(DKind::Lp, l, k), DualLetter::new(DKind::SLm, k, j)]),
                RatFunc::one(),
            );
        }
        e
    }
}
