//! The standard G2 3-form, the splitting `Λ³ = Λ³₁ ⊕ Λ³₇ ⊕ Λ³₂₇` with exact
//! orthogonal projectors, and the characteristic torsion of a cocalibrated
//! structure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::multilinear::{basis_forms, Form};
use crate::scalar::{self, Scalar};
use crate::spin7::{CliffordRep, Spinor};

pub const STANDARD_OMEGA3: &str = "+1 e127 +1 e135 -1 e146 -1 e236 -1 e245 +1 e347 +1 e567";

pub fn standard_omega3_form() -> Form {
    Form::parse(STANDARD_OMEGA3).expect("built-in 3-form parses")
}

/// Dimension of `Λ³ℝ⁷`.
pub const LAMBDA3_DIM: usize = 35;

#[derive(Debug, Clone)]
pub struct G2Structure {
    pub omega: Form,
    pub star_omega: Form,
    pub psi0: Spinor,
    pub rep: CliffordRep,
    splitting: Splitting,
}

/// Projectors onto the three summands, as matrices on coordinates in the
/// lexicographic basis of `Λ³`.
#[derive(Debug, Clone)]
struct Splitting {
    p1: QMatrix,
    p7: QMatrix,
    p27: QMatrix,
    basis27: Vec<Form>,
}

fn projector(columns: &[Vec<Scalar>]) -> QMatrix {
    let v = QMatrix::from_columns(columns);
    let gram = v.transpose().mul(&v);
    let inv = gram.inverse().expect("spanning vectors are independent");
    v.mul(&inv).mul(&v.transpose())
}

impl Splitting {
    fn new(omega: &Form) -> Self {
        let p1 = projector(&[omega.coordinates()]);
        let l7: Vec<Vec<Scalar>> = lambda7_basis(omega).iter().map(Form::coordinates).collect();
        let p7 = projector(&l7);
        let p27 = QMatrix::identity(LAMBDA3_DIM).sub(&p1).sub(&p7);
        let mut constraints = l7.clone();
        constraints.push(omega.coordinates());
        let basis27 = QMatrix::from_rows(constraints)
            .nullspace()
            .into_iter()
            .map(|v| Form::from_coordinates(7, 3, &v))
            .collect();
        Self {
            p1,
            p7,
            p27,
            basis27,
        }
    }
}

/// `Λ³₇ = {*(α∧ω)}`, spanned by `*(eᵢ∧ω)`.
pub fn lambda7_basis(omega: &Form) -> Vec<Form> {
    (0..7)
        .map(|i| Form::one_form(7, i).wedge(omega).hodge())
        .collect()
}

/// Orthogonal components of a 3-form, plus the scalar `(T, ω)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionDecomposition {
    pub t: Form,
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: Scalar,
    pub t1: Form,
    pub t7: Form,
    pub t27: Form,
}

impl TorsionDecomposition {
    /// Admissible characteristic torsion has no `Λ³₇` part.
    pub fn t7_vanishes(&self) -> bool {
        self.t7.is_zero()
    }
}

impl G2Structure {
    pub fn standard() -> Self {
        Self::from_omega(standard_omega3_form()).expect("standard 3-form is a G2 form")
    }

    /// Structure for a 3-form with spectrum `{-7, 1⁷}` in the fixed spin
    /// representation.
    pub fn from_omega(omega: Form) -> Result<Self> {
        if (omega.dim(), omega.degree()) != (7, 3) {
            return Err(Error::NotG2Form(format!(
                "need a 3-form in dimension 7, got a {}-form in dimension {}",
                omega.degree(),
                omega.dim()
            )));
        }
        let rep = CliffordRep::build()?;
        let psi0 = rep.find_psi0(&omega)?;
        if omega.norm2() != scalar::int(7) {
            return Err(Error::NotG2Form(format!("norm² {} ≠ 7", omega.norm2())));
        }
        Ok(Self {
            star_omega: omega.hodge(),
            splitting: Splitting::new(&omega),
            psi0,
            rep,
            omega,
        })
    }

    /// `Ψᵢ = eᵢ·Ψ₀` (0-based frame index).
    pub fn psi(&self, i: usize) -> Spinor {
        self.rep
            .act(&Form::one_form(7, i), &self.psi0)
            .expect("dimension 7")
    }

    fn check3(gamma: &Form) -> Result<()> {
        if gamma.dim() != 7 {
            return Err(Error::UnsupportedDimension(gamma.dim(), "7".into()));
        }
        if gamma.degree() != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                found: gamma.degree(),
            });
        }
        Ok(())
    }

    fn apply(p: &QMatrix, gamma: &Form) -> Form {
        Form::from_coordinates(7, 3, &p.mul_vec(&gamma.coordinates()))
    }

    /// `(γ₁, γ₇, γ₂₇)`.
    pub fn project3(&self, gamma: &Form) -> Result<(Form, Form, Form)> {
        Self::check3(gamma)?;
        let s = &self.splitting;
        Ok((
            Self::apply(&s.p1, gamma),
            Self::apply(&s.p7, gamma),
            Self::apply(&s.p27, gamma),
        ))
    }

    pub fn projectors(&self) -> [&QMatrix; 3] {
        [&self.splitting.p1, &self.splitting.p7, &self.splitting.p27]
    }

    /// Ranks of the three projectors.
    pub fn splitting_ranks(&self) -> [usize; 3] {
        self.projectors().map(QMatrix::rank)
    }

    /// A (non-orthogonal) basis of `Λ³₂₇`.
    pub fn lambda27_basis(&self) -> &[Form] {
        &self.splitting.basis27
    }

    pub fn lambda7_basis(&self) -> Vec<Form> {
        lambda7_basis(&self.omega)
    }

    pub fn torsion_split(&self, t: &Form) -> Result<TorsionDecomposition> {
        let (t1, t7, t27) = self.project3(t)?;
        Ok(TorsionDecomposition {
            mu: t.inner(&self.omega),
            t: t.clone(),
            t1,
            t7,
            t27,
        })
    }

    /// `T = -*dω + μω` with `μ = (dω, *ω)/6`.
    pub fn char_torsion(&self, d_omega: &Form) -> Result<TorsionDecomposition> {
        if d_omega.degree() != 4 || d_omega.dim() != 7 {
            return Err(Error::WrongDegree {
                expected: 4,
                found: d_omega.degree(),
            });
        }
        let mu = d_omega.inner(&self.star_omega) / scalar::int(6);
        let t = &(-d_omega.hodge()) + &self.omega.scale(&mu);
        let mut dec = self.torsion_split(&t)?;
        debug_assert_eq!(dec.mu, mu);
        dec.mu = mu;
        Ok(dec)
    }

    /// Generic Gram-matrix form of `‖T‖²` from `‖dω‖²`, `(*dω, ω)` and `μ`:
    /// `‖dω‖² - 2μ(*dω, ω) + 7μ²`.
    pub fn norm_chain(
        d_omega_norm2: &Scalar,
        star_d_omega_dot_omega: &Scalar,
        mu: &Scalar,
    ) -> Scalar {
        d_omega_norm2 - scalar::int(2) * mu * star_d_omega_dot_omega + scalar::int(7) * mu * mu
    }

    /// Whether `γ ∧ ω = 0`.
    pub fn wedges_to_zero(&self, gamma: &Form) -> bool {
        gamma.wedge(&self.omega).is_zero()
    }
}

/// All 3-forms of the lexicographic basis, for exhaustive checks.
pub fn lambda3_basis() -> Vec<Form> {
    basis_forms(7, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use num_traits::Zero;

    #[test]
    fn standard_values() {
        let g = G2Structure::standard();
        assert_eq!(g.omega.norm2(), int(7));
        assert_eq!(g.omega.coeff(&[0, 1, 6]), int(1));
        assert_eq!(
            g.rep.act(&g.omega, &g.psi0).unwrap(),
            g.psi0.scale(&int(-7))
        );
    }

    #[test]
    fn splitting_ranks_and_examples() {
        let g = G2Structure::standard();
        assert_eq!(g.splitting_ranks(), [1, 7, 27]);
        assert_eq!(g.lambda27_basis().len(), 27);
        let (a, b, c) = g.project3(&g.omega).unwrap();
        assert_eq!((a, b.is_zero(), c.is_zero()), (g.omega.clone(), true, true));
        let x = Form::one_form(7, 0).wedge(&g.omega).hodge();
        let (a, b, c) = g.project3(&x).unwrap();
        assert!(a.is_zero() && c.is_zero());
        assert_eq!(b, x);
    }

    #[test]
    fn lambda27_annihilates_psi0_and_omega() {
        let g = G2Structure::standard();
        for s in g.lambda27_basis() {
            assert!(g.rep.act(s, &g.psi0).unwrap().is_zero());
            assert!(g.wedges_to_zero(s));
        }
    }

    #[test]
    fn char_torsion_examples() {
        let g = G2Structure::standard();
        let dec = g.char_torsion(&Form::zero(7, 4)).unwrap();
        assert!(dec.t.is_zero() && dec.mu.is_zero());
        let dec = g.char_torsion(&g.star_omega.scale(&int(6))).unwrap();
        assert_eq!(dec.mu, int(7));
        assert_eq!(dec.t, g.omega);
    }

    #[test]
    fn torsion_split_of_lambda27() {
        let g = G2Structure::standard();
        let s = g.lambda27_basis()[5].clone();
        let dec = g.torsion_split(&s).unwrap();
        assert!(dec.t1.is_zero() && dec.t7.is_zero());
        assert_eq!(dec.t27, s);
    }
}
