//! Dense exact linear algebra over the rationals: row reduction, kernels,
//! affine solves, determinants, characteristic polynomials and spectra of
//! symmetric matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(scalar::format).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| scalar::int(v)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Scalar::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> QMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn max_abs(&self) -> Scalar {
        self.data
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| scalar::to_f64(&self[(i, j)]))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solution set of `Ax = b` as particular solution plus kernel basis, or
    /// `None` when the system is inconsistent.
    pub fn solve_affine(&self, b: &[Scalar]) -> Option<AffineSolution> {
        assert_eq!(b.len(), self.rows);
        let aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            particular[p] = r[(row, self.cols)].clone();
        }
        Some(AffineSolution {
            particular,
            directions: self.nullspace(),
        })
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Coefficients of `det(x I - A)`, constant term first; monic.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![Scalar::zero(); n + 1];
        c[n] = Scalar::one();
        let mut m = QMatrix::zeros(n, n);
        let id = QMatrix::identity(n);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&c[n - k + 1]));
            let am = self.mul(&m);
            c[n - k] = -am.trace() / scalar::int(k as i64);
        }
        c
    }
}

/// `{ particular + Σ tᵢ·directionᵢ }`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub directions: Vec<Vec<Scalar>>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    pub fn point(&self, params: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(params.len(), self.directions.len());
        let mut p = self.particular.clone();
        for (t, d) in params.iter().zip(&self.directions) {
            for (pi, di) in p.iter_mut().zip(d) {
                *pi += t * di;
            }
        }
        p
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Scalar]) -> bool {
        let diff: Vec<Scalar> = x.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        let mut span = Span::new(diff.len());
        for d in &self.directions {
            span.insert(d);
        }
        span.contains(&diff)
    }
}

/// Incrementally grown linear span, kept in reduced echelon form.
#[derive(Debug, Clone)]
pub struct Span {
    len: usize,
    // (pivot column, normalized row)
    rows: Vec<(usize, Vec<Scalar>)>,
    basis: Vec<Vec<Scalar>>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The vectors that were accepted, in insertion order.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi -= &f * ri;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if independent; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        let w: Vec<Scalar> = w.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (ri, wi) in row.iter_mut().zip(&w) {
                if !wi.is_zero() {
                    *ri -= &f * wi;
                }
            }
        }
        self.rows.push((p, w));
        self.basis.push(v.to_vec());
        true
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Exact orthogonal matrix `(I - S)(I + S)^{-1}` from a skew matrix `S`.
pub fn cayley(skew: &QMatrix) -> QMatrix {
    assert!(skew.is_skew(), "Cayley transform needs a skew matrix");
    let id = QMatrix::identity(skew.rows());
    let inv = id
        .add(skew)
        .inverse()
        .expect("I + S is invertible for skew S");
    id.sub(skew).mul(&inv)
}

/// `p(x)` by Horner's rule; coefficients constant-first.
pub fn poly_eval(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs
        .iter()
        .rev()
        .fold(Scalar::zero(), |acc, c| acc * x + c)
}

/// Divides `p` by `(x - r)`, assuming `r` is a root.
fn deflate(coeffs: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = coeffs.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for i in (1..=n).rev() {
        carry = &coeffs[i] + carry * r;
        q[i - 1] = carry.clone();
    }
    q
}

/// A floating-point eigenvalue together with a radius guaranteed to contain
/// an exact eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifiedEigenvalue {
    pub value: f64,
    pub radius: f64,
}

/// Eigenvalues of a symmetric matrix with algebraic multiplicities: exact
/// rationals where the characteristic polynomial has rational roots, and
/// certified floating-point values for the irreducible remainder.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub exact: BTreeMap<Scalar, usize>,
    pub numeric: Vec<CertifiedEigenvalue>,
}

impl Spectrum {
    pub fn is_exact(&self) -> bool {
        self.numeric.is_empty()
    }

    pub fn multiplicity(&self, value: &Scalar) -> usize {
        self.exact.get(value).copied().unwrap_or(0)
    }

    pub fn from_pairs(pairs: &[(Scalar, usize)]) -> Self {
        Self {
            exact: pairs.iter().cloned().collect(),
            numeric: Vec::new(),
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .exact
            .iter()
            .map(|(v, m)| format!("{}: {m}", scalar::format(v)))
            .collect();
        parts.extend(
            self.numeric
                .iter()
                .map(|e| format!("{:.12e} ± {:.1e}", e.value, e.radius)),
        );
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Spectrum of a symmetric rational matrix. Returns `None` if `m` is not
/// symmetric.
pub fn symmetric_spectrum(m: &QMatrix) -> Option<Spectrum> {
    if !m.is_symmetric() {
        return None;
    }
    let n = m.rows();
    let mut poly = m.charpoly();
    let mf = m.to_f64();
    let eig = nalgebra::SymmetricEigen::new(mf.clone());
    let mut numeric: Vec<(f64, usize)> = eig.eigenvalues.iter().copied().zip(0..n).collect();
    numeric.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut exact = BTreeMap::new();
    let mut tried: Vec<Scalar> = Vec::new();
    for &(val, _) in &numeric {
        let Some(cand) = scalar::rationalize(val, 1_000_000) else {
            continue;
        };
        if tried.contains(&cand) {
            continue;
        }
        tried.push(cand.clone());
        let mut mult = 0;
        while poly.len() > 1 && poly_eval(&poly, &cand).is_zero() {
            poly = deflate(&poly, &cand);
            mult += 1;
        }
        if mult > 0 {
            exact.insert(cand, mult);
        }
    }

    // numeric eigenvalues not accounted for by rational roots
    let mut remaining: Vec<(f64, usize)> = numeric.clone();
    for (v, &mult) in &exact {
        let vf = scalar::to_f64(v);
        for _ in 0..mult {
            if let Some(pos) = remaining
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 .0 - vf).abs().total_cmp(&(b.1 .0 - vf).abs()))
                .map(|(i, _)| i)
            {
                remaining.remove(pos);
            }
        }
    }
    let norm = mf.norm();
    let numeric = remaining
        .into_iter()
        .map(|(value, idx)| {
            let v = eig.eigenvectors.column(idx);
            let r = (&mf * v - v * value).norm() / v.norm();
            CertifiedEigenvalue {
                value,
                radius: r + 1e-12 * (1.0 + norm),
            }
        })
        .collect();
    Some(Spectrum { exact, numeric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn rank_and_kernel() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn affine_solve_reports_inconsistency() {
        let m = QMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(m.solve_affine(&[int(1), int(3)]).is_none());
        let s = m.solve_affine(&[int(1), int(2)]).unwrap();
        assert_eq!(s.dimension(), 1);
        assert!(s.contains(&[int(0), int(1)]));
        assert!(!s.contains(&[int(0), int(0)]));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = QMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.charpoly(), vec![int(6), int(-5), int(1)]);
    }

    #[test]
    fn cayley_is_orthogonal() {
        let s = QMatrix::from_rows(vec![
            vec![int(0), ratio(1, 2), int(-1)],
            vec![ratio(-1, 2), int(0), int(2)],
            vec![int(1), int(-2), int(0)],
        ]);
        let q = cayley(&s);
        assert_eq!(q.transpose().mul(&q), QMatrix::identity(3));
    }

    #[test]
    fn spectrum_mixes_exact_and_certified() {
        // eigenvalues 1 and 3 (exact) plus (1 ± sqrt 5)/2
        let m = QMatrix::from_i64(&[&[2, 1, 0, 0], &[1, 2, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 1]]);
        let s = symmetric_spectrum(&m).unwrap();
        assert_eq!(s.multiplicity(&int(1)), 1);
        assert_eq!(s.multiplicity(&int(3)), 1);
        assert_eq!(s.numeric.len(), 2);
        for e in &s.numeric {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            assert!(
                (e.value - golden).abs() <= e.radius + 1e-12
                    || (e.value - (1.0 - golden)).abs() <= e.radius + 1e-12
            );
        }
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new(3);
        assert!(s.insert(&[int(1), int(1), int(0)]));
        assert!(s.insert(&[int(0), int(1), int(1)]));
        assert!(!s.insert(&[int(1), int(2), int(1)]));
        assert!(s.contains(&[int(1), int(0), int(-1)]));
        assert!(!s.contains(&[int(0), int(0), int(1)]));
        assert_eq!(s.dim(), 2);
    }
}
