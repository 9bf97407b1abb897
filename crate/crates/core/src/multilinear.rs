//! Exterior algebra of an oriented Euclidean `ℝⁿ`, `n ≤ 8`, with exact
//! rational coefficients.
//!
//! Index conventions: the programmatic API is 0-based (`Form::basis(7, &[0, 1, 6])`
//! is `e₁∧e₂∧e₇`), the text format is 1-based (`+1 e127`). Orientation is
//! the ascending frame order, and the conventions are
//!
//! * interior product: `(X⨼α)(Y₁,…) = α(X,Y₁,…)`,
//! * inner product: sorted basis blades are orthonormal,
//! * Hodge star: `α ∧ *β = (α,β)·vol`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::linalg::QMatrix;
use crate::scalar::{self, Scalar};

pub const MAX_DIM: usize = 8;

/// A basis blade `e_{i₁…i_k}` as a bit set (bit `i` is frame index `i`).
pub type Blade = u16;

pub fn blade_of(indices: &[usize]) -> Blade {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..16).filter(|i| b & (1 << i) != 0).collect()
}

fn grade(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}`, zero if they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    for j in blade_indices(b) {
        swaps += (a >> (j + 1)).count_ones();
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Parity of the permutation sorting `indices`, or 0 on a repeat.
pub fn permutation_sign(indices: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            match indices[i].cmp(&indices[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Oriented orthonormal frame `e₁…e_n` with volume form `e₁∧…∧e_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSignature {
    pub dim: usize,
}

impl FrameSignature {
    pub fn new(dim: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim, format!("1..={MAX_DIM}")));
        }
        Ok(Self { dim })
    }

    pub fn volume(&self) -> Form {
        Form::volume(self.dim)
    }

    pub fn frame(&self) -> Vec<Form> {
        (0..self.dim).map(|i| Form::one_form(self.dim, i)).collect()
    }
}

/// Homogeneous exterior form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[n={}, k={}]({self})", self.dim, self.degree)
    }
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Scalar) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(0, value);
        f
    }

    /// `e_{i₁}∧…∧e_{i_k}` for 0-based, not necessarily sorted indices.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::term(dim, indices, Scalar::one())
    }

    pub fn term(dim: usize, indices: &[usize], coeff: Scalar) -> Self {
        assert!(indices.iter().all(|&i| i < dim), "index out of range");
        let mut f = Self::zero(dim, indices.len());
        match permutation_sign(indices) {
            0 => {}
            s => f.add_term(blade_of(indices), coeff * scalar::int(s as i64)),
        }
        f
    }

    pub fn one_form(dim: usize, i: usize) -> Self {
        Self::basis(dim, &[i])
    }

    /// 1-form with the given components.
    pub fn from_vector(v: &[Scalar]) -> Self {
        let mut f = Self::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            f.add_term(1 << i, c.clone());
        }
        f
    }

    pub fn volume(dim: usize) -> Self {
        Self::basis(dim, &(0..dim).collect::<Vec<_>>())
    }

    /// Sum of terms given as (0-based indices, coefficient).
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree mismatch");
            f += &Self::term(dim, &idx, c);
        }
        f
    }

    /// Form with coefficients `coeffs[j]` on the `j`-th blade of
    /// [`basis_blades`].
    pub fn from_coordinates(dim: usize, degree: usize, coeffs: &[Scalar]) -> Self {
        let blades = basis_blades(dim, degree);
        assert_eq!(coeffs.len(), blades.len());
        let mut f = Self::zero(dim, degree);
        for (b, c) in blades.into_iter().zip(coeffs) {
            f.add_term(b, c.clone());
        }
        f
    }

    /// Coefficients in the [`basis_blades`] order.
    pub fn coordinates(&self) -> Vec<Scalar> {
        basis_blades(self.dim, self.degree)
            .into_iter()
            .map(|b| self.coeff_blade(b))
            .collect()
    }

    fn add_term(&mut self, b: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(grade(b), self.degree);
        let entry = self.terms.entry(b).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_blade(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `α(e_{i₁},…,e_{i_k})` for 0-based indices in any order.
    pub fn coeff(&self, indices: &[usize]) -> Scalar {
        if indices.len() != self.degree {
            return Scalar::zero();
        }
        match permutation_sign(indices) {
            0 => Scalar::zero(),
            s => self.coeff_blade(blade_of(indices)) * scalar::int(s as i64),
        }
    }

    /// Evaluation on `k` vectors given by components.
    pub fn eval(&self, vectors: &[Vec<Scalar>]) -> Scalar {
        assert_eq!(vectors.len(), self.degree);
        let mut total = Scalar::zero();
        for (b, c) in &self.terms {
            let idx = blade_indices(*b);
            let minor =
                QMatrix::from_fn(self.degree, self.degree, |r, s| vectors[r][idx[s]].clone());
            total += c * minor.det();
        }
        total
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut f = Self::zero(self.dim, self.degree);
        if s.is_zero() {
            return f;
        }
        f.terms = self.terms.iter().map(|(b, c)| (*b, c * s)).collect();
        f
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut f = self.clone();
        for (b, c) in &other.terms {
            f.add_term(*b, c.clone());
        }
        Ok(f)
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut f = Self::zero(self.dim, self.degree + other.degree);
        if f.degree > self.dim {
            return Ok(f);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                match wedge_sign(*a, *b) {
                    0 => {}
                    1 => f.add_term(a | b, ca * cb),
                    _ => f.add_term(a | b, -(ca * cb)),
                }
            }
        }
        Ok(f)
    }

    /// Panics on dimension mismatch; see [`Form::try_wedge`].
    pub fn wedge(&self, other: &Form) -> Form {
        self.try_wedge(other)
            .expect("wedge of forms of different dimension")
    }

    /// `e_i ⨼ α`.
    pub fn hook_basis(&self, i: usize) -> Form {
        let mut f = Self::zero(self.dim, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return f;
        }
        let bit = 1 << i;
        for (b, c) in &self.terms {
            if b & bit == 0 {
                continue;
            }
            let before = (b & (bit - 1)).count_ones();
            let c = if before.is_multiple_of(2) {
                c.clone()
            } else {
                -c.clone()
            };
            f.add_term(b & !bit, c);
        }
        f
    }

    /// `X ⨼ α` for a vector given by components.
    pub fn hook_vec(&self, v: &[Scalar]) -> Form {
        let mut f = Self::zero(self.dim, self.degree.saturating_sub(1));
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                f += &self.hook_basis(i).scale(c);
            }
        }
        f
    }

    /// `X ⨼ α` with `X` the metric dual of a 1-form.
    pub fn try_hook(x: &Form, alpha: &Form) -> Result<Form> {
        x.check_compatible(alpha)?;
        if x.degree != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: x.degree,
            });
        }
        Ok(alpha.hook_vec(&x.to_vector()))
    }

    pub fn hook(x: &Form, alpha: &Form) -> Form {
        Self::try_hook(x, alpha).expect("hook needs a 1-form of matching dimension")
    }

    /// Components of a 1-form.
    pub fn to_vector(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1, "to_vector on a {}-form", self.degree);
        (0..self.dim).map(|i| self.coeff_blade(1 << i)).collect()
    }

    pub fn hodge(&self) -> Form {
        let full: Blade = (1 << self.dim) - 1;
        let mut f = Self::zero(self.dim, self.dim - self.degree);
        for (b, c) in &self.terms {
            let comp = full & !b;
            match wedge_sign(*b, comp) {
                1 => f.add_term(comp, c.clone()),
                _ => f.add_term(comp, -c.clone()),
            }
        }
        f
    }

    pub fn inner(&self, other: &Form) -> Scalar {
        if self.dim != other.dim || self.degree != other.degree {
            return Scalar::zero();
        }
        self.terms
            .iter()
            .filter_map(|(b, c)| other.terms.get(b).map(|d| c * d))
            .fold(Scalar::zero(), |acc, x| acc + x)
    }

    pub fn norm2(&self) -> Scalar {
        self.inner(self)
    }

    /// `σ_T = ½ Σᵢ (eᵢ⨼T) ∧ (eᵢ⨼T)`.
    pub fn sigma_t(&self) -> Result<Form> {
        if self.degree != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                found: self.degree,
            });
        }
        let mut s = Self::zero(self.dim, 4);
        for i in 0..self.dim {
            let h = self.hook_basis(i);
            s += &h.wedge(&h);
        }
        Ok(s.scale(&scalar::ratio(1, 2)))
    }

    /// Extends a map on 1-forms `eⁱ ↦ images[i]` (all of one degree `p`) to
    /// a graded derivation of degree `p - 1`:
    /// `D(e^{i₁}∧…∧e^{i_k}) = Σ_r (-1)^{r(p-1)} e^{i₁}∧…∧D(e^{i_r})∧…∧e^{i_k}`.
    /// Images of degree 2 give `d`, degree 1 a derivation such as `∇_X`.
    pub fn extend_derivation(&self, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.dim);
        let p = images[0].degree();
        let mut out = Self::zero(self.dim, (self.degree + p).saturating_sub(1));
        if self.degree == 0 || self.degree + p > self.dim + 1 {
            return out;
        }
        for (b, c) in &self.terms {
            let idx = blade_indices(*b);
            for r in 0..idx.len() {
                let left = Form::basis(self.dim, &idx[..r]);
                let right = Form::basis(self.dim, &idx[r + 1..]);
                let mut piece = left.wedge(&images[idx[r]]).wedge(&right);
                if (r * (p + 1)) % 2 == 1 {
                    piece = -piece;
                }
                out += &piece.scale(c);
            }
        }
        out
    }

    /// Pullback under `eⁱ ↦ images[i]` (an algebra homomorphism).
    pub fn substitute(&self, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.dim);
        let target_dim = images.first().map_or(self.dim, Form::dim);
        let mut out = Form::zero(target_dim, self.degree);
        for (b, c) in &self.terms {
            let mut piece = Form::constant(target_dim, c.clone());
            for i in blade_indices(*b) {
                piece = piece.wedge(&images[i]);
            }
            out += &piece;
        }
        out
    }

    /// Parses the text format, e.g. `+1 e127 -1/2 e146`. Lines may carry
    /// `#` comments and a `dim N` header (default 7); `degree K` is needed
    /// only for an empty form.
    pub fn parse(text: &str) -> std::result::Result<Form, ParseError> {
        let mut dim = 7;
        let mut degree: Option<usize> = None;
        let mut raw: Vec<(Vec<usize>, Scalar, usize, usize)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let body = line.split('#').next().unwrap_or("");
            let tokens = tokenize(body);
            if let Some((col, first)) = tokens.first() {
                if *first == "dim" || *first == "degree" {
                    let (vcol, v) = tokens.get(1).ok_or_else(|| {
                        ParseError::new(
                            ln,
                            col + first.len() + 1,
                            format!("`{first}` needs a value"),
                        )
                    })?;
                    let value: usize = v.parse().map_err(|_| {
                        ParseError::new(ln, *vcol, format!("invalid {first} `{v}`"))
                    })?;
                    if *first == "dim" {
                        if !(1..=MAX_DIM).contains(&value) {
                            return Err(ParseError::new(
                                ln,
                                *vcol,
                                format!("dimension {value} outside 1..={MAX_DIM}"),
                            ));
                        }
                        dim = value;
                    } else {
                        degree = Some(value);
                    }
                    if let Some((c, extra)) = tokens.get(2) {
                        return Err(ParseError::new(ln, *c, format!("unexpected `{extra}`")));
                    }
                    continue;
                }
            }
            let mut i = 0;
            while i < tokens.len() {
                let (col, tok) = tokens[i];
                let (coeff, blade_tok) = if let Some(pos) = tok.find('e') {
                    // `e127`, `-e127` or `+3e127`
                    let (c, rest) = tok.split_at(pos);
                    let coeff = match c {
                        "" | "+" => Scalar::one(),
                        "-" => -Scalar::one(),
                        c => scalar::parse(c).map_err(|e| e.at(ln, col))?,
                    };
                    (coeff, Some((col + pos, rest)))
                } else {
                    let coeff = scalar::parse(tok).map_err(|e| e.at(ln, col))?;
                    match tokens.get(i + 1) {
                        Some((c2, t2)) if t2.starts_with('e') => {
                            i += 1;
                            (coeff, Some((*c2, *t2)))
                        }
                        _ => (coeff, None),
                    }
                };
                let idx = match blade_tok {
                    None => Vec::new(),
                    Some((bcol, b)) => {
                        parse_blade(&b[1..]).map_err(|msg| ParseError::new(ln, bcol, msg))?
                    }
                };
                raw.push((idx, coeff, ln, col));
                i += 1;
            }
        }
        let k = match (degree, raw.first()) {
            (Some(k), _) => k,
            (None, Some((idx, ..))) => idx.len(),
            (None, None) => return Err(ParseError::new(1, 1, "empty form needs a `degree` line")),
        };
        if k > dim {
            return Err(ParseError::new(
                1,
                1,
                format!("degree {k} exceeds dimension {dim}"),
            ));
        }
        let mut f = Form::zero(dim, k);
        for (idx, c, ln, col) in raw {
            if idx.len() != k {
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("term of degree {} in a {k}-form", idx.len()),
                ));
            }
            if let Some(bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("index {} exceeds dimension {dim}", bad + 1),
                ));
            }
            if permutation_sign(&idx) == 0 {
                return Err(ParseError::new(ln, col, "repeated index in basis blade"));
            }
            f += &Form::term(dim, &idx, c);
        }
        Ok(f)
    }

    /// Text serialization with a `dim` header, inverse of [`Form::parse`].
    pub fn to_file_string(&self) -> String {
        format!("dim {}\ndegree {}\n{}\n", self.dim, self.degree, self)
    }

    /// Terms sorted lexicographically by index tuple.
    pub fn sorted_terms(&self) -> Vec<(Vec<usize>, Scalar)> {
        let mut v: Vec<(Vec<usize>, Scalar)> = self
            .terms
            .iter()
            .map(|(b, c)| (blade_indices(*b), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_blade(digits: &str) -> std::result::Result<Vec<usize>, String> {
    if digits.is_empty() {
        return Err("basis blade `e` without indices".into());
    }
    digits
        .chars()
        .map(|c| match c.to_digit(10) {
            Some(d) if d >= 1 => Ok(d as usize - 1),
            _ => Err(format!("invalid blade index `{c}`")),
        })
        .collect()
}

/// Sorted basis blades of degree `k` in lexicographic order of index tuples.
pub fn basis_blades(dim: usize, k: usize) -> Vec<Blade> {
    let mut out: Vec<Blade> = (0..(1u32 << dim))
        .map(|b| b as Blade)
        .filter(|b| grade(*b) == k)
        .collect();
    out.sort_by_key(|b| blade_indices(*b));
    out
}

pub fn basis_forms(dim: usize, k: usize) -> Vec<Form> {
    basis_blades(dim, k)
        .into_iter()
        .map(|b| Form::basis(dim, &blade_indices(b)))
        .collect()
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    scalar::format_signed(&c)
                } else {
                    let name: String = idx.iter().map(|i| char::from(b'1' + *i as u8)).collect();
                    format!("{} e{name}", scalar::format_signed(&c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl serde::Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        *self = self.try_add(rhs).expect("adding incompatible forms");
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("adding incompatible forms")
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl Mul<&Form> for &Scalar {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

/// Skew matrix `(i, j) ↦ α(e_i, e_j)` of a 2-form.
pub fn two_form_matrix(alpha: &Form) -> QMatrix {
    assert_eq!(alpha.degree(), 2);
    QMatrix::from_fn(alpha.dim(), alpha.dim(), |i, j| alpha.coeff(&[i, j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn e(idx: &[usize]) -> Form {
        Form::basis(7, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    fn omega() -> Form {
        Form::parse("+1 e127 +1 e135 -1 e146 -1 e236 -1 e245 +1 e347 +1 e567").unwrap()
    }

    #[test]
    fn wedge_examples() {
        let v = e(&[1, 2, 7]).wedge(&e(&[3, 4, 5, 6]));
        // permutation (1,2,7,3,4,5,6) has four inversions
        assert_eq!(v, Form::volume(7));
        assert!(omega().wedge(&omega()).is_zero());
        assert_eq!(e(&[1]).wedge(&e(&[2])), e(&[1, 2]));
    }

    #[test]
    fn hook_examples() {
        let a = e(&[1, 2, 7]);
        assert_eq!(a.hook_basis(0), e(&[2, 7]));
        assert!(a.hook_basis(2).is_zero());
        assert_eq!(a.hook_basis(1), -e(&[1, 7]));
        assert!(Form::constant(7, int(3)).hook_basis(0).is_zero());
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(Form::constant(7, int(1)).hodge(), Form::volume(7));
        assert_eq!(e(&[1, 2, 7]).hodge(), e(&[3, 4, 5, 6]));
        let w = omega();
        assert_eq!(w.hodge().hodge(), w);
        assert_eq!(w.wedge(&w.hodge()), Form::volume(7).scale(&int(7)));
    }

    #[test]
    fn inner_examples() {
        assert_eq!(omega().norm2(), int(7));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 2])), int(1));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 3])), int(0));
    }

    #[test]
    fn sigma_examples() {
        assert!(e(&[1, 2, 3]).sigma_t().unwrap().is_zero());
        let t = omega();
        let s = t.sigma_t().unwrap();
        assert!(!s.is_zero());
        assert_eq!(t.scale(&int(3)).sigma_t().unwrap(), s.scale(&int(9)));
        assert!(e(&[1, 2]).sigma_t().is_err());
    }

    #[test]
    fn unsorted_construction_is_signed() {
        assert_eq!(Form::basis(7, &[1, 0]), -Form::basis(7, &[0, 1]));
        assert!(Form::basis(7, &[2, 2]).is_zero());
        assert_eq!(e(&[1, 2, 7]).coeff(&[6, 0, 1]), int(1));
        assert_eq!(e(&[1, 2, 7]).coeff(&[1, 0, 6]), int(-1));
    }

    #[test]
    fn evaluation_matches_coefficients() {
        let w = omega();
        let unit = |i: usize| (0..7).map(|j| int((i == j) as i64)).collect::<Vec<_>>();
        assert_eq!(w.eval(&[unit(0), unit(1), unit(6)]), int(1));
        assert_eq!(w.eval(&[unit(1), unit(0), unit(6)]), int(-1));
    }

    #[test]
    fn derivation_extension_of_d() {
        // d e¹ = e²³ on a toy algebra; d(e¹∧e⁴) = e²³∧e⁴
        let mut images = vec![Form::zero(7, 2); 7];
        images[0] = e(&[2, 3]);
        let d = e(&[1, 4]).extend_derivation(&images);
        assert_eq!(d, e(&[2, 3, 4]));
        let d = e(&[4, 1]).extend_derivation(&images);
        assert_eq!(d, -e(&[2, 3, 4]));
    }

    #[test]
    fn text_round_trip() {
        let w = omega();
        assert_eq!(
            w.to_string(),
            "+1 e127 +1 e135 -1 e146 -1 e236 -1 e245 +1 e347 +1 e567"
        );
        assert_eq!(Form::parse(&w.to_file_string()).unwrap(), w);
        let f = Form::parse("dim 5\n+1/2 e12 -e35 3 e14").unwrap();
        assert_eq!(f.dim(), 5);
        assert_eq!(f.coeff(&[0, 1]), ratio(1, 2));
        assert_eq!(f.coeff(&[2, 4]), int(-1));
    }

    #[test]
    fn parse_errors_have_locations() {
        let err = Form::parse("+1 e127\n+1 e12").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        let err = Form::parse("+1 e129").unwrap_err();
        assert_eq!(err.line, 1);
        let err = Form::parse("+x e12").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }
}
