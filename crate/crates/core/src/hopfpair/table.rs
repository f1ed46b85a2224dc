use crate::linalg::Matrix;
use crate::qfield::RatFunc;
use crate::rtensor::RBundle;

use super::{AKind, DKind, PairingError};

/// Single-letter pairings `<X^a_b, L^i_j>` for every dual kind X and function-side kind L.
#[derive(Clone, Debug)]
pub struct PairingTable {
    n: usize,
    // [kind][akind] -> n⁴ values at ((i*n + j)*n + a)*n + b
    data: Vec<Vec<Vec<RatFunc>>>,
}

impl PairingTable {
    pub fn n(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        let n = self.n;
        ((i * n + j) * n + a) * n + b
    }

    /// `<X^a_b, L^i_j>` with X of kind `k` and L of kind `ak`.
    pub fn get(&self, k: DKind, ak: AKind, i: usize, j: usize, a: usize, b: usize) -> &RatFunc {
        &self.data[k.index()][ak as usize][self.at(i, j, a, b)]
    }

    fn fill(&mut self, k: DKind, ak: AKind, f: impl Fn(usize, usize, usize, usize) -> RatFunc) {
        let n = self.n;
        let mut v = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        v.push(f(i, j, a, b));
                    }
                }
            }
        }
        self.data[k.index()][ak as usize] = v;
    }

    /// Builds the table from the fixed pairings with t and the antipode axiom.
    pub fn new(bundle: &RBundle) -> Result<Self, PairingError> {
        let n = bundle.n;
        let mut t = PairingTable { n, data: vec![vec![Vec::new(), Vec::new()]; 6] };
        t.fill(DKind::Lp, AKind::T, |i, j, a, b| bundle.r(i, a, j, b));
        t.fill(DKind::Lm, AKind::T, |i, j, a, b| bundle.rinv(a, i, b, j));
        t.fill(DKind::SLp, AKind::T, |i, j, a, b| bundle.rinv(i, a, j, b));
        t.fill(DKind::SLm, AKind::T, |i, j, a, b| bundle.r(a, i, b, j));
        let lp = t.data[DKind::Lp.index()][0].clone();
        let lm = t.data[DKind::Lm.index()][0].clone();
        t.data[DKind::SiLp.index()][1] = lp;
        t.data[DKind::SiLm.index()][1] = lm;
        let nn = n * n;
        let err = |k: DKind| {
            move |e: crate::linalg::LinalgError| PairingError::Table(format!("{} pairing matrix: {}", k.name(), e))
        };
        for k in [DKind::Lp, DKind::Lm] {
            // P[(k,c),(j,b)] = <X^c_b, t^k_j>;  Q = P^{-1}, Q[(i,a),(k,c)] = <X^a_c, S(t)^i_k>
            let p = Matrix::from_fn(nn, nn, |r, col| {
                t.get(k, AKind::T, r / n, col / n, r % n, col % n).clone()
            });
            let q = p.inverse(k.name()).map_err(err(k))?;
            t.fill(k, AKind::St, |i, kk, a, c| q.get(i * n + a, kk * n + c).clone());
        }
        for k in [DKind::SLp, DKind::SLm] {
            // P[(a,j),(c,k)] = <X^a_c, t^k_j>;  Q = P^{-1}, Q[(c,k),(b,i)] = <X^c_b, S(t)^i_k>
            let p = Matrix::from_fn(nn, nn, |r, col| {
                t.get(k, AKind::T, col % n, r % n, r / n, col / n).clone()
            });
            let q = p.inverse(k.name()).map_err(err(k))?;
            t.fill(k, AKind::St, |i, kk, c, b| q.get(c * n + kk, b * n + i).clone());
        }
        for k in [DKind::SiLp, DKind::SiLm] {
            // Q[(c,k),(b,i)] = <X^c_b, S(t)^i_k>;  P = Q^{-1}, P[(a,j),(c,k)] = <X^a_c, t^k_j>
            let q = Matrix::from_fn(nn, nn, |r, col| {
                t.get(k, AKind::St, col % n, r % n, r / n, col / n).clone()
            });
            let p = q.inverse(k.name()).map_err(err(k))?;
            t.fill(k, AKind::T, |kk, j, a, c| p.get(a * n + j, c * n + kk).clone());
        }
        Ok(t)
    }
}
