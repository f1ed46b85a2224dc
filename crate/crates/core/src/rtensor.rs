//! R-matrix data for GL_q(N) and the numerical structure constants derived from it.
//!
//! Index conventions: a 4-leg R-type tensor stores `R^{ab}_{cd}` at `[a, b, c, d]`, upper
//! indices are rows. A 2-leg tensor stores `D^i_j` at `[i, j]`. Indices are 0-based in memory
//! and 1-based in JSON.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hopfpair::{Functionals, PairingEngine, PairingError};
use crate::linalg::{LinalgError, Matrix};
use crate::qfield::{Rat, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RError {
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("json error: {0}")]
    Json(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

impl From<LinalgError> for RError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Singular(s) => RError::Singular(s),
            LinalgError::Shape(s) => RError::Shape(s),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexedTensor {
    n: usize,
    legs: usize,
    entries: BTreeMap<Vec<usize>, RatFunc>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    n: usize,
    legs: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    val: String,
}

impl IndexedTensor {
    pub fn new(n: usize, legs: usize) -> Self {
        IndexedTensor { n, legs, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn get(&self, idx: &[usize]) -> RatFunc {
        self.entries.get(idx).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn get_ref(&self, idx: &[usize]) -> Option<&RatFunc> {
        self.entries.get(idx)
    }

    pub fn set(&mut self, idx: Vec<usize>, v: RatFunc) {
        assert_eq!(idx.len(), self.legs, "index arity");
        assert!(idx.iter().all(|&i| i < self.n), "index out of range");
        if v.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &RatFunc)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Views a 4-leg tensor as the matrix with rows (a,b) and columns (c,d).
    pub fn to_matrix4(&self) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(n * n, n * n);
        for (k, v) in &self.entries {
            m.set(k[0] * n + k[1], k[2] * n + k[3], v.clone());
        }
        m
    }

    pub fn from_matrix4(n: usize, m: &Matrix) -> Self {
        let mut t = IndexedTensor::new(n, 4);
        for r in 0..n * n {
            for c in 0..n * n {
                let v = m.get(r, c);
                if !v.is_zero() {
                    t.set(vec![r / n, r % n, c / n, c % n], v.clone());
                }
            }
        }
        t
    }

    pub fn to_matrix2(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (k, v) in &self.entries {
            m.set(k[0], k[1], v.clone());
        }
        m
    }

    pub fn from_matrix2(m: &Matrix) -> Self {
        let mut t = IndexedTensor::new(m.rows(), 2);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if !v.is_zero() {
                    t.set(vec![r, c], v.clone());
                }
            }
        }
        t
    }

    pub fn to_json(&self) -> String {
        let j = TensorJson {
            n: self.n,
            legs: self.legs,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson { idx: k.iter().map(|i| i + 1).collect(), val: v.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, RError> {
        let j: TensorJson = serde_json::from_str(s).map_err(|e| RError::Json(e.to_string()))?;
        let mut t = IndexedTensor::new(j.n, j.legs);
        for e in j.entries {
            if e.idx.len() != j.legs || e.idx.iter().any(|&i| i == 0 || i > j.n) {
                return Err(RError::Json(format!("bad index {:?}", e.idx)));
            }
            let v: RatFunc = e.val.parse().map_err(|e: crate::qfield::FieldError| RError::Json(e.to_string()))?;
            let idx: Vec<usize> = e.idx.iter().map(|i| i - 1).collect();
            if t.entries.contains_key(&idx) {
                return Err(RError::Json(format!("duplicate index {:?}", e.idx)));
            }
            t.set(idx, v);
        }
        Ok(t)
    }

    /// Evaluates every entry at q0.
    pub fn eval_at(&self, q0: &Rat) -> Result<BTreeMap<Vec<usize>, Rat>, crate::qfield::FieldError> {
        self.entries.iter().map(|(k, v)| Ok((k.clone(), v.eval_at(q0)?))).collect()
    }
}

/// The standard GL_q(n) R-matrix with λ on `R^{ij}_{ji}` for i > j.
pub fn build_r(n: usize) -> IndexedTensor {
    assert!(n >= 1, "n must be positive");
    let mut r = IndexedTensor::new(n, 4);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                r.set(vec![i, i, i, i], RatFunc::q());
            } else {
                r.set(vec![i, j, i, j], RatFunc::one());
            }
            if i > j {
                r.set(vec![i, j, j, i], RatFunc::lambda());
            }
        }
    }
    r
}

/// Expected number of nonzero entries of `build_r(n)`.
pub fn standard_entry_count(n: usize) -> usize {
    n + n * (n - 1) + n * (n - 1) / 2
}

fn require_r(r: &IndexedTensor) -> Result<(), RError> {
    if r.legs != 4 {
        return Err(RError::Shape(format!("expected a 4-leg tensor, got {} legs", r.legs)));
    }
    Ok(())
}

/// Three-space operators R12, R13, R23 as n³×n³ matrices.
fn r_three(r: &IndexedTensor) -> (Matrix, Matrix, Matrix) {
    let n = r.n;
    let m = n * n * n;
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut r12 = Matrix::zeros(m, m);
    let mut r13 = Matrix::zeros(m, m);
    let mut r23 = Matrix::zeros(m, m);
    for (k, v) in &r.entries {
        let (a, b, c, d) = (k[0], k[1], k[2], k[3]);
        for x in 0..n {
            r12.set(idx(a, b, x), idx(c, d, x), v.clone());
            r13.set(idx(a, x, b), idx(c, x, d), v.clone());
            r23.set(idx(x, a, b), idx(x, c, d), v.clone());
        }
    }
    (r12, r13, r23)
}

/// First index tuple `(a,b,c,d,e,f)` where R12R13R23 and R23R13R12 differ.
pub fn ybe_witness(r: &IndexedTensor) -> Option<Vec<usize>> {
    let n = r.n;
    let (r12, r13, r23) = r_three(r);
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    let diff = &lhs - &rhs;
    diff.first_nonzero().map(|(row, col, _)| {
        vec![row / (n * n), (row / n) % n, row % n, col / (n * n), (col / n) % n, col % n]
    })
}

pub fn check_ybe(r: &IndexedTensor) -> bool {
    require_r(r).is_ok() && ybe_witness(r).is_none()
}

pub fn inverse_r(r: &IndexedTensor) -> Result<IndexedTensor, RError> {
    require_r(r)?;
    let inv = r.to_matrix4().inverse("R^{-1}")?;
    Ok(IndexedTensor::from_matrix4(r.n, &inv))
}

/// First `[i,j,p,q]` violating `R^{ij}_{pq} = (R^{-1})^{ji}_{qp} + λ δ^i_q δ^j_p`.
pub fn hecke_witness(r: &IndexedTensor) -> Result<Option<Vec<usize>>, RError> {
    let rinv = inverse_r(r)?;
    let n = r.n;
    let lam = RatFunc::lambda();
    for i in 0..n {
        for j in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let mut rhs = rinv.get(&[j, i, q, p]);
                    if i == q && j == p {
                        rhs = rhs + &lam;
                    }
                    if r.get(&[i, j, p, q]) != rhs {
                        return Ok(Some(vec![i, j, p, q]));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_hecke(r: &IndexedTensor) -> Result<bool, RError> {
    Ok(hecke_witness(r)?.is_none())
}

/// Solves `R^{mj}_{pn} R̃^{in}_{mq} = δ^i_p δ^j_q` for R̃.
pub fn second_inverse(r: &IndexedTensor) -> Result<IndexedTensor, RError> {
    require_r(r)?;
    let n = r.n;
    // A[(p,j),(m,n)] = R^{mj}_{pn};  B = A^{-1} with B[(m,n),(i,q)] = R̃^{in}_{mq}.
    let a = Matrix::from_fn(n * n, n * n, |row, col| {
        let (p, j) = (row / n, row % n);
        let (m, nn) = (col / n, col % n);
        r.get(&[m, j, p, nn])
    });
    let b = a
        .inverse("second inverse: partial transpose R^{mj}_{pn} over rows (p,j) and columns (m,n)")?;
    let mut rt = IndexedTensor::new(n, 4);
    for row in 0..n * n {
        for col in 0..n * n {
            let v = b.get(row, col);
            if !v.is_zero() {
                let (m, nn) = (row / n, row % n);
                let (i, q) = (col / n, col % n);
                rt.set(vec![i, nn, m, q], v.clone());
            }
        }
    }
    Ok(rt)
}

/// Both contractions of the second-inverse condition; each entry is true iff it yields δδ.
pub fn check_second_inverse(r: &IndexedTensor, rt: &IndexedTensor) -> (bool, bool) {
    let n = r.n;
    let contract = |x: &IndexedTensor, y: &IndexedTensor| {
        for p in 0..n {
            for q in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut s = RatFunc::zero();
                        for m in 0..n {
                            for k in 0..n {
                                if let (Some(a), Some(b)) =
                                    (x.get_ref(&[m, j, p, k]), y.get_ref(&[i, k, m, q]))
                                {
                                    s += &(a * b);
                                }
                            }
                        }
                        let want = p == i && q == j;
                        if (want && !s.is_one()) || (!want && !s.is_zero()) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };
    (contract(r, rt), contract(rt, r))
}

/// `D^i_j = Σ_m R̃^{mi}_{jm}`.
pub fn d_matrix(rt: &IndexedTensor) -> IndexedTensor {
    let n = rt.n;
    let mut d = IndexedTensor::new(n, 2);
    for i in 0..n {
        for j in 0..n {
            let mut s = RatFunc::zero();
            for m in 0..n {
                s += &rt.get(&[m, i, j, m]);
            }
            d.set(vec![i, j], s);
        }
    }
    d
}

/// R together with its inverses, D and λ.
#[derive(Clone, Debug)]
pub struct RBundle {
    pub n: usize,
    pub r: IndexedTensor,
    pub rinv: IndexedTensor,
    pub rtilde: IndexedTensor,
    pub d: IndexedTensor,
    pub dinv: IndexedTensor,
    pub lambda: RatFunc,
}

impl RBundle {
    pub fn standard(n: usize) -> Self {
        Self::from_r(build_r(n)).expect("standard R-matrix is invertible")
    }

    /// Computes the derived data; fails if any required inverse does not exist.
    pub fn from_r(r: IndexedTensor) -> Result<Self, RError> {
        require_r(&r)?;
        let n = r.n;
        let rinv = inverse_r(&r)?;
        let rtilde = second_inverse(&r)?;
        let d = d_matrix(&rtilde);
        let dinv = IndexedTensor::from_matrix2(&d.to_matrix2().inverse("D")?);
        Ok(RBundle { n, r, rinv, rtilde, d, dinv, lambda: RatFunc::lambda() })
    }

    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> RatFunc {
        self.r.get(&[a, b, c, d])
    }

    pub fn r21(&self, a: usize, b: usize, c: usize, d: usize) -> RatFunc {
        self.r.get(&[b, a, d, c])
    }

    pub fn rinv(&self, a: usize, b: usize, c: usize, d: usize) -> RatFunc {
        self.rinv.get(&[a, b, c, d])
    }

    pub fn rinv21(&self, a: usize, b: usize, c: usize, d: usize) -> RatFunc {
        self.rinv.get(&[b, a, d, c])
    }

    pub fn d(&self, i: usize, j: usize) -> RatFunc {
        self.d.get(&[i, j])
    }

    pub fn dinv(&self, i: usize, j: usize) -> RatFunc {
        self.dinv.get(&[i, j])
    }

    /// True when D is diagonal with Laurent-monomial entries.
    pub fn d_is_diagonal_monomial(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.d(i, j);
                if i == j {
                    v.is_laurent_monomial()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn r_times_rinv_is_identity(&self) -> bool {
        let m = self.r.to_matrix4();
        let mi = self.rinv.to_matrix4();
        (&m * &mi).is_identity() && (&mi * &m).is_identity()
    }
}

/// σ, σ̃, C, C̃ over doubled indices; each tensor has index range n².
///
/// Layouts: `sigma[I,J,K,L] = σ_{IJ}^{KL}`, `sigma_tilde[I,J,K,L] = σ̃_{IJ}^{KL}`,
/// `c[L,K,J] = C_{LK}^J`, `c_tilde[J,K,I] = C̃_{JK}^I`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub n: usize,
    pub sigma: IndexedTensor,
    pub sigma_tilde: IndexedTensor,
    pub c: IndexedTensor,
    pub c_tilde: IndexedTensor,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn sigma(&self, i: usize, j: usize, k: usize, l: usize) -> RatFunc {
        self.sigma.get(&[i, j, k, l])
    }

    pub fn sigma_tilde(&self, i: usize, j: usize, k: usize, l: usize) -> RatFunc {
        self.sigma_tilde.get(&[i, j, k, l])
    }

    pub fn c(&self, l: usize, k: usize, j: usize) -> RatFunc {
        self.c.get(&[l, k, j])
    }

    pub fn c_tilde(&self, j: usize, k: usize, i: usize) -> RatFunc {
        self.c_tilde.get(&[j, k, i])
    }

    /// σ as the matrix with rows (I,J) and columns (K,L).
    pub fn sigma_matrix(&self) -> Matrix {
        self.sigma.to_matrix4()
    }
}

/// Evaluates σ and σ̃ by pairing, C and C̃ by pairing, and cross-checks σ̃ = σ⁻¹ and both C̃ routes.
pub fn derive_constants(
    bundle: &RBundle,
    engine: &PairingEngine,
    funcs: &Functionals,
) -> Result<StructureConstants, RError> {
    let n = bundle.n;
    let m = n * n;
    let quads: Vec<[usize; 4]> = (0..m * m * m * m)
        .map(|x| [x / (m * m * m), (x / (m * m)) % m, (x / m) % m, x % m])
        .collect();
    let vals: Vec<Result<(RatFunc, RatFunc), PairingError>> = quads
        .par_iter()
        .map(|&[i, j, k, l]| {
            let s = engine.pair(funcs.f(k, j), &funcs.r(l, i))?;
            let st = engine.pair(funcs.phi(l, i), &funcs.r(k, j))?;
            Ok((s, st))
        })
        .collect();
    let mut sigma = IndexedTensor::new(m, 4);
    let mut sigma_pair = IndexedTensor::new(m, 4);
    for (q, v) in quads.iter().zip(vals) {
        let (s, st) = v?;
        sigma.set(q.to_vec(), s);
        sigma_pair.set(q.to_vec(), st);
    }
    let sigma_inv = IndexedTensor::from_matrix4(m, &sigma.to_matrix4().inverse("sigma as a map on doubled pairs")?);
    if sigma_inv != sigma_pair {
        return Err(RError::Inconsistent(
            "sigma-tilde from pairing phi against r differs from the inverse of sigma".into(),
        ));
    }
    let mut c = IndexedTensor::new(m, 3);
    let mut c_pair = IndexedTensor::new(m, 3);
    for l in 0..m {
        for k in 0..m {
            for j in 0..m {
                c.set(vec![l, k, j], engine.pair(funcs.chi(k), &funcs.r(j, l))?);
                c_pair.set(vec![l, k, j], engine.pair(funcs.chi_tilde(k), &funcs.r(j, l))?);
            }
        }
    }
    let mut c_tilde = IndexedTensor::new(m, 3);
    for j in 0..m {
        for k in 0..m {
            for i in 0..m {
                let mut s = RatFunc::zero();
                for x in 0..m {
                    for y in 0..m {
                        if let (Some(a), Some(b)) = (c.get_ref(&[x, y, i]), sigma_inv.get_ref(&[k, j, x, y])) {
                            s += &(a * b);
                        }
                    }
                }
                c_tilde.set(vec![j, k, i], s);
            }
        }
    }
    if c_tilde != c_pair {
        return Err(RError::Inconsistent(
            "C-tilde from pairing differs from the contraction of C with the inverse of sigma".into(),
        ));
    }
    Ok(StructureConstants { n, sigma, sigma_tilde: sigma_inv, c, c_tilde })
}

/// Checks σ₁₂σ₂₃σ₁₂ = σ₂₃σ₁₂σ₂₃ on three doubled-index legs.
pub fn check_braid(sigma: &IndexedTensor) -> bool {
    let m = sigma.n();
    let s = sigma.to_matrix4();
    let id = Matrix::identity(m);
    let s12 = s.kron(&id);
    let s23 = id.kron(&s);
    let lhs = &(&s12 * &s23) * &s12;
    let rhs = &(&s23 * &s12) * &s23;
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_r() {
        let r = build_r(1);
        assert_eq!(r.nnz(), 1);
        assert_eq!(r.get(&[0, 0, 0, 0]), RatFunc::q());
        assert!(check_ybe(&r));
        assert!(check_hecke(&r).unwrap());
        let rt = second_inverse(&r).unwrap();
        assert_eq!(rt.get(&[0, 0, 0, 0]), RatFunc::q_pow(-1));
    }

    #[test]
    fn entry_count() {
        for n in 1..=4 {
            assert_eq!(build_r(n).nnz(), standard_entry_count(n));
        }
        assert_eq!(standard_entry_count(2), 5);
    }

    #[test]
    fn identity_fails_hecke() {
        let mut id = IndexedTensor::new(2, 4);
        for a in 0..2 {
            for b in 0..2 {
                id.set(vec![a, b, a, b], RatFunc::one());
            }
        }
        assert!(check_ybe(&id));
        assert!(!check_hecke(&id).unwrap());
    }

    #[test]
    fn singular_r_reports() {
        let r = IndexedTensor::new(2, 4);
        assert!(matches!(check_hecke(&r), Err(RError::Singular(_))));
        assert!(matches!(second_inverse(&r), Err(RError::Singular(s)) if s.contains("second inverse")));
    }

    #[test]
    fn json_round_trip() {
        let r = build_r(2);
        let s = r.to_json();
        assert!(s.contains("\"val\": \"q - q^-1\""));
        assert_eq!(IndexedTensor::from_json(&s).unwrap(), r);
    }
}
