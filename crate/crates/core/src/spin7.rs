//! The real 8-dimensional spin representation of `Cl(7)` (signature
//! `eᵢ² = -1`), built from left multiplication by imaginary octonions.
//!
//! Spinor index 0 is the real unit of the octonions; index `j ≥ 1` is the
//! imaginary unit `e_j`. The octonion product is read off the standard 3-form,
//! `e_i e_j = Σ_k ω(e_i, e_j, e_k) e_k` for `i ≠ j`.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, Spectrum};
use crate::multilinear::{blade_indices, Blade, Form};
use crate::scalar::{self, Scalar};

pub const SPINOR_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Spinor(Vec<Scalar>);

impl Spinor {
    pub fn new(components: Vec<Scalar>) -> Self {
        assert_eq!(components.len(), SPINOR_DIM, "spinors have 8 components");
        Self(components)
    }

    pub fn zero() -> Self {
        Self(vec![Scalar::zero(); SPINOR_DIM])
    }

    pub fn unit(i: usize) -> Self {
        let mut s = Self::zero();
        s.0[i] = Scalar::one();
        s
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Spinor) -> Scalar {
        linalg::dot(&self.0, &other.0)
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, s: &Scalar) -> Spinor {
        Spinor(self.0.iter().map(|c| c * s).collect())
    }

    /// `Some(λ)` if `self = λ·other` with `other ≠ 0`.
    pub fn ratio_to(&self, other: &Spinor) -> Option<Scalar> {
        let k = other.0.iter().position(|c| !c.is_zero())?;
        let lambda = &self.0[k] / &other.0[k];
        (*self == other.scale(&lambda)).then_some(lambda)
    }
}

impl Add for &Spinor {
    type Output = Spinor;
    fn add(self, rhs: &Spinor) -> Spinor {
        Spinor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Spinor {
    type Output = Spinor;
    fn sub(self, rhs: &Spinor) -> Spinor {
        Spinor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(scalar::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Spinor {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        scalar::serialize_vec(&self.0, ser)
    }
}

/// Generators `γ₁…γ₇` of the Clifford action on spinors.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    gammas: Vec<QMatrix>,
}

impl CliffordRep {
    /// Builds the representation compatible with the standard 3-form and
    /// runs the self-check.
    pub fn build() -> Result<Self> {
        let rep = Self::from_three_form(&crate::g2::standard_omega3_form());
        rep.self_check()?;
        Ok(rep)
    }

    /// Left multiplication by imaginary units of the algebra whose structure
    /// constants are the coefficients of `omega`.
    pub fn from_three_form(omega: &Form) -> Self {
        assert_eq!((omega.dim(), omega.degree()), (7, 3));
        let gammas = (0..7)
            .map(|i| {
                let mut g = QMatrix::zeros(SPINOR_DIM, SPINOR_DIM);
                // L_i(1) = e_i, L_i(e_i) = -1, L_i(e_j) = Σ_k ω_ijk e_k
                g[(i + 1, 0)] = Scalar::one();
                g[(0, i + 1)] = -Scalar::one();
                for j in (0..7).filter(|&j| j != i) {
                    for k in 0..7 {
                        let c = omega.coeff(&[i, j, k]);
                        if !c.is_zero() {
                            g[(k + 1, j + 1)] = c;
                        }
                    }
                }
                g
            })
            .collect();
        Self { gammas }
    }

    pub fn gamma(&self, i: usize) -> &QMatrix {
        &self.gammas[i]
    }

    pub fn gammas(&self) -> &[QMatrix] {
        &self.gammas
    }

    /// Clifford relations, skewness, orthogonality and compatibility with
    /// the standard 3-form.
    pub fn self_check(&self) -> Result<()> {
        let id = QMatrix::identity(SPINOR_DIM);
        for (i, gi) in self.gammas.iter().enumerate() {
            if !gi.is_skew() {
                return Err(Error::CliffordSelfCheck(format!("γ{} is not skew", i + 1)));
            }
            if gi.transpose().mul(gi) != id {
                return Err(Error::CliffordSelfCheck(format!(
                    "γ{} is not orthogonal",
                    i + 1
                )));
            }
            for (j, gj) in self.gammas.iter().enumerate() {
                let anti = gi.mul(gj).add(&gj.mul(gi));
                let expected = if i == j {
                    id.scale(&scalar::int(-2))
                } else {
                    QMatrix::zeros(SPINOR_DIM, SPINOR_DIM)
                };
                if anti != expected {
                    return Err(Error::CliffordSelfCheck(format!(
                        "γ{}γ{} + γ{}γ{} ≠ {}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1,
                        if i == j { "-2·Id" } else { "0" }
                    )));
                }
            }
        }
        let spec = self.spectrum(&crate::g2::standard_omega3_form())?;
        let expected = Spectrum::from_pairs(&[(scalar::int(-7), 1), (scalar::int(1), 7)]);
        if spec != expected {
            return Err(Error::CliffordSelfCheck(format!(
                "spectrum of the standard 3-form is {spec}, expected {expected}"
            )));
        }
        Ok(())
    }

    fn blade_matrix(&self, b: Blade) -> QMatrix {
        blade_indices(b)
            .into_iter()
            .fold(QMatrix::identity(SPINOR_DIM), |m, i| m.mul(&self.gammas[i]))
    }

    /// Endomorphism of spinors by which `alpha` acts.
    pub fn operator(&self, alpha: &Form) -> Result<QMatrix> {
        if alpha.dim() != 7 {
            return Err(Error::UnsupportedDimension(alpha.dim(), "7".into()));
        }
        let mut m = QMatrix::zeros(SPINOR_DIM, SPINOR_DIM);
        for (b, c) in alpha.terms() {
            m = m.add(&self.blade_matrix(b).scale(c));
        }
        Ok(m)
    }

    /// Operator of an inhomogeneous sum of forms.
    pub fn operator_sum(&self, parts: &[Form]) -> Result<QMatrix> {
        parts
            .iter()
            .try_fold(QMatrix::zeros(SPINOR_DIM, SPINOR_DIM), |acc, f| {
                Ok(acc.add(&self.operator(f)?))
            })
    }

    pub fn act(&self, alpha: &Form, psi: &Spinor) -> Result<Spinor> {
        Ok(Spinor(self.operator(alpha)?.mul_vec(&psi.0)))
    }

    pub fn spectrum(&self, alpha: &Form) -> Result<Spectrum> {
        let op = self.operator(alpha)?;
        linalg::symmetric_spectrum(&op).ok_or_else(|| Error::NotSymmetric(alpha.to_string()))
    }

    /// Generator of the `-7`-eigenspace of `omega`, scaled to unit length when
    /// that is possible over the rationals and otherwise to first nonzero
    /// component `1`; the first nonzero component is positive.
    pub fn find_psi0(&self, omega: &Form) -> Result<Spinor> {
        let op = self.operator(omega)?;
        let shifted = op.add(&QMatrix::identity(SPINOR_DIM).scale(&scalar::int(7)));
        let kernel = shifted.nullspace();
        if kernel.len() != 1 {
            return Err(Error::NotG2Form(format!(
                "(-7)-eigenspace has dimension {}, expected 1",
                kernel.len()
            )));
        }
        let v = Spinor(kernel.into_iter().next().expect("one kernel vector"));
        let lead =
            v.0.iter()
                .find(|c| !c.is_zero())
                .expect("nonzero kernel vector")
                .clone();
        let v = match scalar::sqrt_exact(&v.norm2()) {
            Some(n) => v.scale(&(n.recip() * scalar::int(if lead.is_negative() { -1 } else { 1 }))),
            None => v.scale(&lead.recip()),
        };
        Ok(v)
    }
}

/// Clifford product of two forms, returned by degree `0..=n`.
pub fn clifford_product(a: &Form, b: &Form) -> Vec<Form> {
    assert_eq!(a.dim(), b.dim());
    let n = a.dim();
    let mut out: Vec<Form> = (0..=n).map(|k| Form::zero(n, k)).collect();
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            let mut swaps = 0u32;
            for j in blade_indices(bb) {
                swaps += (ba >> (j + 1)).count_ones();
            }
            swaps += (ba & bb).count_ones();
            let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
            let res = ba ^ bb;
            let idx = blade_indices(res);
            let k = idx.len();
            out[k] += &Form::term(n, &idx, ca * cb * scalar::int(sign));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::standard_omega3_form;
    use crate::scalar::int;

    #[test]
    fn generators_satisfy_clifford_relations() {
        let rep = CliffordRep::build().unwrap();
        let id = QMatrix::identity(8);
        assert_eq!(rep.gamma(0).mul(rep.gamma(0)), id.scale(&int(-1)));
        assert!(rep
            .gamma(0)
            .mul(rep.gamma(1))
            .add(&rep.gamma(1).mul(rep.gamma(0)))
            .is_zero());
        for g in rep.gammas() {
            assert_eq!(g.transpose().mul(g), id);
        }
    }

    #[test]
    fn omega_spectrum_and_psi0() {
        let rep = CliffordRep::build().unwrap();
        let w = standard_omega3_form();
        let psi0 = rep.find_psi0(&w).unwrap();
        assert_eq!(psi0, Spinor::unit(0));
        assert_eq!(rep.act(&w, &psi0).unwrap(), psi0.scale(&int(-7)));
        for i in [0, 1, 6] {
            let psi_i = rep.act(&Form::one_form(7, i), &psi0).unwrap();
            assert_eq!(rep.act(&w, &psi_i).unwrap(), psi_i);
            assert!(psi_i.dot(&psi0).is_zero());
        }
        assert!(rep.find_psi0(&-w).is_err());
    }

    #[test]
    fn spectra() {
        let rep = CliffordRep::build().unwrap();
        let zero = rep.spectrum(&Form::zero(7, 3)).unwrap();
        assert_eq!(zero, Spectrum::from_pairs(&[(int(0), 8)]));
        let a = rep.operator(&standard_omega3_form()).unwrap();
        let sq = linalg::symmetric_spectrum(&a.mul(&a)).unwrap();
        assert_eq!(sq, Spectrum::from_pairs(&[(int(1), 7), (int(49), 1)]));
        // a 2-form acts skew-symmetrically
        assert!(matches!(
            rep.spectrum(&Form::basis(7, &[0, 1])),
            Err(Error::NotSymmetric(_))
        ));
        assert!(rep.operator(&Form::basis(6, &[0])).is_err());
    }

    #[test]
    fn action_is_multiplicative_on_blades() {
        let rep = CliffordRep::build().unwrap();
        let a = Form::basis(7, &[0, 2, 4]);
        let b = Form::basis(7, &[2, 3]);
        let prod = clifford_product(&a, &b);
        let lhs = rep.operator(&a).unwrap().mul(&rep.operator(&b).unwrap());
        assert_eq!(lhs, rep.operator_sum(&prod).unwrap());
    }
}
