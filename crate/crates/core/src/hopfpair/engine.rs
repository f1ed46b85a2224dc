use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::linalg::Matrix;
use crate::lincomb::Word;
use crate::qfield::RatFunc;
use crate::rtensor::RBundle;

use super::{
    coproduct_dual, AElem, AKind, ALetter, DKind, DualElem, DualLetter, DualTwo, PairingError, PairingTable,
};

/// The pairing, computed through matrix representations.
///
/// For a sequence `p` of function-side kinds, `rho(x, p)` is the matrix whose entry at
/// (row components, column components) is `<x, L_1 ... L_d>`; it is multiplicative in x.
/// Dually, `pi(a, kp)` for a sequence of dual kinds is multiplicative in a.
pub struct PairingEngine {
    n: usize,
    table: PairingTable,
    d: Matrix,
    dinv: Matrix,
    rho_cache: RwLock<HashMap<(DualLetter, Vec<AKind>), Arc<Matrix>>>,
    pi_cache: RwLock<HashMap<(ALetter, Vec<DKind>), Arc<Matrix>>>,
}

/// A list of function-side kind patterns on which functionals are compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSpace {
    pub patterns: Vec<Vec<AKind>>,
}

impl TestSpace {
    /// All t-only patterns of length ≤ degree, optionally with every single-S(t) pattern too.
    pub fn new(degree: usize, with_st: bool) -> Self {
        let mut patterns = Vec::new();
        for d in 0..=degree {
            patterns.push(vec![AKind::T; d]);
            if with_st {
                for k in 0..d {
                    let mut p = vec![AKind::T; d];
                    p[k] = AKind::St;
                    patterns.push(p);
                }
            }
        }
        TestSpace { patterns }
    }
}

/// Images of a functional on every pattern of a test space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub mats: Vec<Matrix>,
}

impl Image {
    pub fn add(&self, o: &Image) -> Image {
        Image { mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Image) -> Image {
        Image { mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Image) -> Image {
        Image { mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a * b).collect() }
    }

    pub fn scale(&self, c: &RatFunc) -> Image {
        Image { mats: self.mats.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn add_scaled(&mut self, o: &Image, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.mats.iter_mut().zip(&o.mats) {
            *a = &*a + &b.scale(c);
        }
    }

    pub fn add_product_scaled(&mut self, x: &Image, y: &Image, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for ((a, b), d) in self.mats.iter_mut().zip(&x.mats).zip(&y.mats) {
            *a = &*a + &(b * d).scale(c);
        }
    }

    pub fn zero_like(&self) -> Image {
        Image { mats: self.mats.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// (pattern index, row, column) of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        self.mats
            .iter()
            .enumerate()
            .find_map(|(k, m)| m.first_nonzero().map(|(r, c, _)| (k, r, c)))
    }
}

fn digits(mut x: usize, n: usize, len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for k in (0..len).rev() {
        v[k] = x % n;
        x /= n;
    }
    v
}

impl PairingEngine {
    pub fn new(bundle: &RBundle) -> Result<Self, PairingError> {
        Ok(PairingEngine {
            n: bundle.n,
            table: PairingTable::new(bundle)?,
            d: bundle.d.to_matrix2(),
            dinv: bundle.dinv.to_matrix2(),
            rho_cache: RwLock::new(HashMap::new()),
            pi_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &PairingTable {
        &self.table
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn dinv(&self) -> &Matrix {
        &self.dinv
    }

    fn check_letter(&self, r: usize, c: usize) -> Result<(), PairingError> {
        let m = r.max(c);
        if m >= self.n {
            return Err(PairingError::DimensionMismatch { expected: self.n, got: m + 1 });
        }
        Ok(())
    }

    /// `M[row, col]` for the letter X^x_y against a single letter of kind `ak`.
    fn single(&self, k: DKind, ak: AKind, x: usize, y: usize) -> Matrix {
        let n = self.n;
        match ak {
            AKind::T => Matrix::from_fn(n, n, |i, j| self.table.get(k, ak, i, j, x, y).clone()),
            AKind::St => Matrix::from_fn(n, n, |j, i| self.table.get(k, ak, i, j, x, y).clone()),
        }
    }

    pub fn letter_rho(&self, l: &DualLetter, p: &[AKind]) -> Arc<Matrix> {
        let key = (*l, p.to_vec());
        if let Some(m) = self.rho_cache.read().unwrap().get(&key) {
            return m.clone();
        }
        let n = self.n;
        let d = p.len();
        let m = if d == 0 {
            let mut m = Matrix::zeros(1, 1);
            if l.row == l.col {
                m.set(0, 0, RatFunc::one());
            }
            m
        } else {
            let (start, end) = if l.kind.forward() { (l.row, l.col) } else { (l.col, l.row) };
            let size = n.pow(d as u32);
            let mut acc = Matrix::zeros(size, size);
            for chain in 0..n.pow((d - 1) as u32) {
                let mut e = vec![start];
                e.extend(digits(chain, n, d - 1));
                e.push(end);
                let mut prod = Matrix::identity(1);
                for (s, ak) in p.iter().enumerate() {
                    let (x, y) = if l.kind.forward() { (e[s], e[s + 1]) } else { (e[s + 1], e[s]) };
                    prod = prod.kron(&self.single(l.kind, *ak, x, y));
                    if prod.is_zero() {
                        break;
                    }
                }
                if prod.rows() == size {
                    acc = &acc + &prod;
                }
            }
            acc
        };
        let m = Arc::new(m);
        self.rho_cache.write().unwrap().insert(key, m.clone());
        m
    }

    pub fn word_rho(&self, w: &[DualLetter], p: &[AKind]) -> Matrix {
        let size = self.n.pow(p.len() as u32);
        let mut acc: Option<Matrix> = None;
        for l in w {
            let m = self.letter_rho(l, p);
            acc = Some(match acc {
                None => (*m).clone(),
                Some(a) => &a * &m,
            });
        }
        acc.unwrap_or_else(|| Matrix::identity(size))
    }

    pub fn rho(&self, x: &DualElem, p: &[AKind]) -> Matrix {
        let size = self.n.pow(p.len() as u32);
        let mut acc = Matrix::zeros(size, size);
        for (w, c) in x.iter() {
            acc = &acc + &self.word_rho(w.letters(), p).scale(c);
        }
        acc
    }

    pub fn image(&self, x: &DualElem, space: &TestSpace) -> Image {
        Image { mats: space.patterns.iter().map(|p| self.rho(x, p)).collect() }
    }

    /// Function-side word with the given pattern and flattened row/column components.
    pub fn pattern_word(&self, p: &[AKind], row: usize, col: usize) -> Vec<ALetter> {
        let d = p.len();
        let rs = digits(row, self.n, d);
        let cs = digits(col, self.n, d);
        p.iter()
            .enumerate()
            .map(|(k, ak)| match ak {
                AKind::T => ALetter::t(rs[k], cs[k]),
                AKind::St => ALetter::st(cs[k], rs[k]),
            })
            .collect()
    }

    fn word_index(&self, w: &[ALetter]) -> (Vec<AKind>, usize, usize) {
        let mut row = 0;
        let mut col = 0;
        for l in w {
            row = row * self.n + l.row_comp();
            col = col * self.n + l.col_comp();
        }
        (w.iter().map(|l| l.kind).collect(), row, col)
    }

    fn check_a(&self, a: &AElem) -> Result<(), PairingError> {
        for (w, _) in a.iter() {
            for l in w.letters() {
                self.check_letter(l.row, l.col)?;
            }
        }
        Ok(())
    }

    fn check_x(&self, x: &DualElem) -> Result<(), PairingError> {
        for (w, _) in x.iter() {
            for l in w.letters() {
                self.check_letter(l.row, l.col)?;
            }
        }
        Ok(())
    }

    /// `<x, a>`.
    pub fn pair(&self, x: &DualElem, a: &AElem) -> Result<RatFunc, PairingError> {
        self.check_x(x)?;
        self.check_a(a)?;
        let mut by_pattern: HashMap<Vec<AKind>, Matrix> = HashMap::new();
        let mut s = RatFunc::zero();
        for (w, c) in a.iter() {
            let (p, row, col) = self.word_index(w.letters());
            let m = by_pattern.entry(p.clone()).or_insert_with(|| self.rho(x, &p));
            let v = m.get(row, col);
            if !v.is_zero() {
                s += &(v * c);
            }
        }
        Ok(s)
    }

    /// `<x, a>` for single words.
    pub fn pair_words(&self, x: &[DualLetter], a: &[ALetter]) -> RatFunc {
        let (p, row, col) = self.word_index(a);
        self.word_rho(x, &p).get(row, col).clone()
    }

    /// Pairing of a two-leg dual element with `a ⊗ b` for all words of patterns p1, p2.
    pub fn rho2(&self, x: &DualTwo, p1: &[AKind], p2: &[AKind]) -> Matrix {
        let s1 = self.n.pow(p1.len() as u32);
        let s2 = self.n.pow(p2.len() as u32);
        let mut acc = Matrix::zeros(s1 * s2, s1 * s2);
        for ((w1, w2), c) in x.iter() {
            let m = self.word_rho(w1.letters(), p1).kron(&self.word_rho(w2.letters(), p2));
            acc = &acc + &m.scale(c);
        }
        acc
    }

    /// `x ▷ a = a₍₁₎ <x, a₍₂₎>`.
    pub fn left_action(&self, x: &DualElem, a: &AElem) -> AElem {
        self.action(x, a, true)
    }

    /// `a ◁ x = a₍₂₎ <x, a₍₁₎>`.
    pub fn right_action(&self, a: &AElem, x: &DualElem) -> AElem {
        self.action(x, a, false)
    }

    fn action(&self, x: &DualElem, a: &AElem, left: bool) -> AElem {
        let n = self.n;
        let mut out = AElem::zero();
        let mut by_pattern: HashMap<Vec<AKind>, Matrix> = HashMap::new();
        for (w, c) in a.iter() {
            let letters = w.letters();
            let m = letters.len();
            let p: Vec<AKind> = letters.iter().map(|l| l.kind).collect();
            let rho = by_pattern.entry(p.clone()).or_insert_with(|| self.rho(x, &p));
            for split in 0..n.pow(m as u32) {
                let mids = digits(split, n, m);
                let mut w1 = Vec::with_capacity(m);
                let mut w2 = Vec::with_capacity(m);
                for (l, &c) in letters.iter().zip(&mids) {
                    match l.kind {
                        AKind::T => {
                            w1.push(ALetter::t(l.row, c));
                            w2.push(ALetter::t(c, l.col));
                        }
                        AKind::St => {
                            w1.push(ALetter::st(c, l.col));
                            w2.push(ALetter::st(l.row, c));
                        }
                    }
                }
                let (kept, paired) = if left { (w1, w2) } else { (w2, w1) };
                let (_, row, col) = self.word_index(&paired);
                let v = rho.get(row, col);
                if !v.is_zero() {
                    out.add_term(Word(kept), v * c);
                }
            }
        }
        out
    }

    /// `Σ h₍₁₎ <h₍₂₎, a>`: the function-side element acting on a functional from the left.
    pub fn a_act_left(&self, a: &AElem, h: &DualElem) -> DualElem {
        let mut out = DualElem::zero();
        for ((w1, w2), c) in coproduct_dual(h, self.n).iter() {
            let v = self.pair(&DualElem::term(w2.clone(), RatFunc::one()), a).expect("same n");
            if !v.is_zero() {
                out.add_term(w1.clone(), &v * c);
            }
        }
        out
    }

    /// `Σ <h₍₁₎, a> h₍₂₎`.
    pub fn a_act_right(&self, h: &DualElem, a: &AElem) -> DualElem {
        let mut out = DualElem::zero();
        for ((w1, w2), c) in coproduct_dual(h, self.n).iter() {
            let v = self.pair(&DualElem::term(w1.clone(), RatFunc::one()), a).expect("same n");
            if !v.is_zero() {
                out.add_term(w2.clone(), &v * c);
            }
        }
        out
    }

    /// Representation of a function-side letter on the dual words of kind pattern `kp`.
    pub fn letter_pi(&self, l: &ALetter, kp: &[DKind]) -> Arc<Matrix> {
        let key = (*l, kp.to_vec());
        if let Some(m) = self.pi_cache.read().unwrap().get(&key) {
            return m.clone();
        }
        let n = self.n;
        let k = kp.len();
        let m = if k == 0 {
            let mut m = Matrix::zeros(1, 1);
            if l.row == l.col {
                m.set(0, 0, RatFunc::one());
            }
            m
        } else {
            let (start, end) = match l.kind {
                AKind::T => (l.row, l.col),
                AKind::St => (l.col, l.row),
            };
            let size = n.pow(k as u32);
            let mut acc = Matrix::zeros(size, size);
            for chain in 0..n.pow((k - 1) as u32) {
                let mut c = vec![start];
                c.extend(digits(chain, n, k - 1));
                c.push(end);
                let mut prod = Matrix::identity(1);
                for (s, dk) in kp.iter().enumerate() {
                    let (i, j) = match l.kind {
                        AKind::T => (c[s], c[s + 1]),
                        AKind::St => (c[s + 1], c[s]),
                    };
                    let nm = Matrix::from_fn(n, n, |r, col| {
                        let (a, b) = if dk.forward() { (r, col) } else { (col, r) };
                        self.table.get(*dk, l.kind, i, j, a, b).clone()
                    });
                    prod = prod.kron(&nm);
                    if prod.is_zero() {
                        break;
                    }
                }
                if prod.rows() == size {
                    acc = &acc + &prod;
                }
            }
            acc
        };
        let m = Arc::new(m);
        self.pi_cache.write().unwrap().insert(key, m.clone());
        m
    }

    pub fn pi(&self, a: &AElem, kp: &[DKind]) -> Matrix {
        let size = self.n.pow(kp.len() as u32);
        let mut acc = Matrix::zeros(size, size);
        for (w, c) in a.iter() {
            let mut prod: Option<Matrix> = None;
            for l in w.letters() {
                let m = self.letter_pi(l, kp);
                prod = Some(match prod {
                    None => (*m).clone(),
                    Some(p) => &p * &m,
                });
            }
            let prod = prod.unwrap_or_else(|| Matrix::identity(size));
            acc = &acc + &prod.scale(c);
        }
        acc
    }

    /// Dual word of kind pattern `kp` with flattened row/column components.
    pub fn kind_word(&self, kp: &[DKind], row: usize, col: usize) -> Vec<DualLetter> {
        let k = kp.len();
        let rs = digits(row, self.n, k);
        let cs = digits(col, self.n, k);
        kp.iter()
            .enumerate()
            .map(|(s, dk)| {
                if dk.forward() {
                    DualLetter::new(*dk, rs[s], cs[s])
                } else {
                    DualLetter::new(*dk, cs[s], rs[s])
                }
            })
            .collect()
    }

    /// S applied to a function-side element, using S²(t) = D t D⁻¹.
    pub fn antipode_a(&self, a: &AElem) -> AElem {
        let n = self.n;
        let mut out = AElem::zero();
        for (w, c) in a.iter() {
            let mut acc = AElem::scalar(c.clone());
            for l in w.letters().iter().rev() {
                let img = match l.kind {
                    AKind::T => AElem::letter(ALetter::st(l.row, l.col)),
                    AKind::St => {
                        let mut e = AElem::zero();
                        for x in 0..n {
                            for y in 0..n {
                                let v = self.d.get(l.row, x) * self.dinv.get(y, l.col);
                                e.add_term(Word::single(ALetter::t(x, y)), v);
                            }
                        }
                        e
                    }
                };
                acc = &acc * &img;
            }
            out.add_scaled(&acc, &RatFunc::one());
        }
        out
    }
}
