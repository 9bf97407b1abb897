//! Eigen-torsion classification for three parallel vector fields
//! `θ₁ = e₁, θ₂ = e₂, θ₃ = e₇` of the standard G2 structure.
//!
//! The torsion of the characteristic connection is `T = (μ/7)ω + T₂₇`, and
//! `T₂₇·Ψᵢ = mᵢΨᵢ` with `Ψᵢ = θᵢ·Ψ₀`. Everything here is exact; `μ` is a
//! rational parameter and all relations are homogeneous in it.
//!
//! The 5-frame `f₁…f₅ = e₃…e₇` is handled by [`to_n5`] / [`from_n5`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::check::{all_pass, Check};
use crate::error::{Error, Result};
use crate::g2::{G2Structure, LAMBDA3_DIM};
use crate::liegroup::ric_from_torsion;
use crate::linalg::{symmetric_spectrum, AffineSolution, QMatrix, Spectrum};
use crate::multilinear::{basis_forms, two_form_matrix, Form};
use crate::scalar::{self, int, ratio, Scalar};
use crate::spin7::Spinor;

/// 0-based frame indices of `θ₁, θ₂, θ₃`.
pub const THETA: [usize; 3] = [0, 1, 6];

/// `(m₁, m₂, m₃)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenTriple {
    #[serde(serialize_with = "scalar::serialize_vec")]
    pub m: [Scalar; 3],
}

impl EigenTriple {
    pub fn new(m1: Scalar, m2: Scalar, m3: Scalar) -> Self {
        Self { m: [m1, m2, m3] }
    }

    /// `mᵢ = kᵢ·μ`.
    pub fn from_multiples(k: &[Scalar; 3], mu: &Scalar) -> Self {
        Self {
            m: [&k[0] * mu, &k[1] * mu, &k[2] * mu],
        }
    }

    /// Triple built from root choices: `true` picks `6μ/7`, `false` `-8μ/7`.
    pub fn from_roots(pattern: [bool; 3], mu: &Scalar) -> Self {
        let [plus, minus] = eigenvalue_roots(mu);
        Self {
            m: pattern.map(|p| if p { plus.clone() } else { minus.clone() }),
        }
    }

    pub fn swapped_13(&self) -> Self {
        Self::new(self.m[2].clone(), self.m[1].clone(), self.m[0].clone())
    }

    pub fn sum(&self) -> Scalar {
        self.m.iter().fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::fmt::Display for EigenTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c] = &self.m;
        write!(
            f,
            "({}, {}, {})",
            scalar::format(a),
            scalar::format(b),
            scalar::format(c)
        )
    }
}

/// `(a, b, c) = (t₂₃₆+t₂₄₅, t₃₄₇+t₅₆₇, t₂₃₅-t₂₄₆)`.
pub fn abc_of(t: &Form) -> [Scalar; 3] {
    let c = |i: &[usize]| t.coeff(i);
    [
        c(&[1, 2, 5]) + c(&[1, 3, 4]),
        c(&[2, 3, 6]) + c(&[4, 5, 6]),
        c(&[1, 2, 4]) - c(&[1, 3, 5]),
    ]
}

/// Exact solution set of `{Σ ∈ Λ³₂₇ : Σ·Ψᵢ = mᵢΨᵢ, i = 1,2,3}`.
#[derive(Debug, Clone)]
pub struct Torsion27Family {
    pub m: EigenTriple,
    pub mu: Scalar,
    /// Solution in coordinates of the lexicographic `Λ³` basis.
    pub solution: Option<AffineSolution>,
}

impl Torsion27Family {
    /// Affine dimension, `-1` if empty.
    pub fn dimension(&self) -> i64 {
        self.solution.as_ref().map_or(-1, |s| s.dimension() as i64)
    }

    pub fn particular(&self) -> Option<Form> {
        self.solution
            .as_ref()
            .map(|s| Form::from_coordinates(7, 3, &s.particular))
    }

    pub fn directions(&self) -> Vec<Form> {
        self.solution.as_ref().map_or_else(Vec::new, |s| {
            s.directions
                .iter()
                .map(|d| Form::from_coordinates(7, 3, d))
                .collect()
        })
    }

    /// `T₂₇` at the given parameters.
    pub fn member(&self, params: &[Scalar]) -> Option<Form> {
        self.solution
            .as_ref()
            .map(|s| Form::from_coordinates(7, 3, &s.point(params)))
    }

    /// Full torsion `(μ/7)ω + T₂₇`.
    pub fn torsion(&self, params: &[Scalar]) -> Option<Form> {
        let omega = crate::g2::standard_omega3_form();
        self.member(params)
            .map(|t27| &omega.scale(&(&self.mu / int(7))) + &t27)
    }

    /// `(a, b, c)` of the particular solution; `None` for an empty family.
    pub fn abc(&self) -> Option<[Scalar; 3]> {
        self.particular().map(|p| abc_of(&p))
    }

    /// Whether `a, b, c` are the same for every member.
    pub fn abc_constant(&self) -> bool {
        self.directions()
            .iter()
            .all(|d| abc_of(d).iter().all(Zero::is_zero))
    }

    /// `m₁ + 2a + 2b = m₂`, `-2a + 2b = m₃`, `c = 0` as displayed with the
    /// closed-form parameterization.
    pub fn displayed_relations(&self) -> Option<[bool; 3]> {
        let [a, b, c] = self.abc()?;
        let [m1, m2, m3] = &self.m.m;
        let two = int(2);
        Some([
            m1 + &two * &a + &two * &b == *m2,
            -&two * &a + &two * &b == *m3,
            c.is_zero(),
        ])
    }

    /// `m₃ + 2a + 2b = m₂`, `-2a + 2b = m₁`, `c = 0`: what the solved system
    /// satisfies in this frame.
    pub fn solved_relations(&self) -> Option<[bool; 3]> {
        let [a, b, c] = self.abc()?;
        let [m1, m2, m3] = &self.m.m;
        let two = int(2);
        Some([
            m3 + &two * &a + &two * &b == *m2,
            -&two * &a + &two * &b == *m1,
            c.is_zero(),
        ])
    }
}

/// `(-¼(m₁-m₂+m₃), ¼(-m₁+m₂+m₃))`.
pub fn displayed_ab(m: &EigenTriple) -> [Scalar; 2] {
    let [m1, m2, m3] = &m.m;
    let q = ratio(1, 4);
    [-(m1 - m2 + m3) * &q, (-m1 + m2 + m3) * &q]
}

/// `(-¼(m₁-m₂+m₃), ¼(m₁+m₂-m₃))`.
pub fn solved_ab(m: &EigenTriple) -> [Scalar; 2] {
    let [m1, m2, m3] = &m.m;
    let q = ratio(1, 4);
    [-(m1 - m2 + m3) * &q, (m1 + m2 - m3) * &q]
}

/// The closed-form 9-parameter family with `a, b` from [`displayed_ab`].
///
/// Free parameters, in order: `t₁₄₅ t₁₄₆ t₁₅₆ t₂₃₅ t₂₃₆ t₂₅₆ t₄₅₇ t₄₆₇ t₅₆₇`;
/// then `t₂₄₆ = t₂₃₅`, `t₂₄₅ = a - t₂₃₆`, `t₃₄₇ = b - t₅₆₇`.
pub fn closed_form_member(m: &EigenTriple, params: &[Scalar; 9]) -> Form {
    let [a, b] = displayed_ab(m);
    let [t145, t146, t156, t235, t236, t256, t457, t467, t567] = params.clone();
    let t246 = t235.clone();
    let t245 = &a - &t236;
    let t347 = &b - &t567;
    let m1 = &m.m[0];
    let half = ratio(1, 2);
    let terms: Vec<(&str, Scalar)> = vec![
        ("127", -(m1 * &half) - &b),
        ("134", -t156.clone()),
        ("135", m1 * &half + &t146 + &a),
        ("136", -t145.clone()),
        ("145", t145),
        ("146", t146),
        ("156", t156),
        ("234", -t256.clone()),
        ("235", t235),
        ("236", t236),
        ("245", t245),
        ("246", t246),
        ("256", t256),
        ("347", t347),
        ("357", t467.clone()),
        ("367", -t457.clone()),
        ("457", t457),
        ("467", t467),
        ("567", t567),
    ];
    Form::from_terms(
        7,
        3,
        terms.into_iter().map(|(s, c)| {
            let idx = s.bytes().map(|d| (d - b'1') as usize).collect();
            (idx, c)
        }),
    )
}

/// The closed-form family as an affine set in `Λ³` coordinates.
pub fn closed_form_family(m: &EigenTriple) -> AffineSolution {
    let zero: [Scalar; 9] = std::array::from_fn(|_| Scalar::zero());
    let base = closed_form_member(m, &zero);
    let bc = base.coordinates();
    let directions = (0..9)
        .map(|k| {
            let mut p = zero.clone();
            p[k] = Scalar::one();
            let v = closed_form_member(m, &p).coordinates();
            v.iter().zip(&bc).map(|(x, y)| x - y).collect()
        })
        .collect();
    AffineSolution {
        particular: bc,
        directions,
    }
}

/// Double inclusion of two affine sets of equal ambient dimension.
pub fn same_affine_set(x: &AffineSolution, y: &AffineSolution) -> bool {
    let rank = |s: &AffineSolution| QMatrix::from_rows(s.directions.clone()).rank();
    if s_dim(x, rank) != s_dim(y, rank) {
        return false;
    }
    let inside = |a: &AffineSolution, b: &AffineSolution| {
        b.contains(&a.particular)
            && a.directions.iter().all(|d| {
                let p: Vec<Scalar> = a.particular.iter().zip(d).map(|(u, v)| u + v).collect();
                b.contains(&p)
            })
    };
    inside(x, y) && inside(y, x)
}

fn s_dim(s: &AffineSolution, rank: impl Fn(&AffineSolution) -> usize) -> usize {
    if s.directions.is_empty() {
        0
    } else {
        rank(s)
    }
}

/// Roots of `m² + (2/7)μm - (48/49)μ² = 0`, larger-for-positive-μ first:
/// `[-μ/7 + |μ|, -μ/7 - |μ|]`, i.e. `{6μ/7, -8μ/7}`.
pub fn eigenvalue_roots(mu: &Scalar) -> [Scalar; 2] {
    let p = ratio(2, 7) * mu;
    let q = -ratio(48, 49) * mu * mu;
    let disc = &p * &p - int(4) * &q;
    let s = scalar::sqrt_exact(&disc).expect("discriminant is 4μ²");
    let half = ratio(1, 2);
    [(-&p + &s) * &half, (-&p - &s) * &half]
}

/// `T(θ₁,θ₂,θ₃) = μ/7 - ¼(m₁+m₂+m₃)`.
pub fn torsion_value(m: &EigenTriple, mu: &Scalar) -> Scalar {
    mu / int(7) - m.sum() * ratio(1, 4)
}

/// Root pattern key: `+` for `6μ/7`, `-` for `-8μ/7`.
pub fn pattern_key(p: [bool; 3]) -> String {
    p.iter().map(|&b| if b { '+' } else { '-' }).collect()
}

pub fn all_patterns() -> Vec<[bool; 3]> {
    (0..8u8)
        .map(|k| [k & 4 == 0, k & 2 == 0, k & 1 == 0])
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueEntry {
    pub m: EigenTriple,
    #[serde(serialize_with = "scalar::serialize")]
    pub value: Scalar,
    /// `T(θ₁,θ₂,θ₃)` read off a solved family member.
    #[serde(serialize_with = "scalar::serialize")]
    pub from_family: Scalar,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueEnumeration {
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: Scalar,
    pub patterns: BTreeMap<String, ValueEntry>,
    /// Value → number of patterns.
    pub fibers: BTreeMap<String, usize>,
}

impl ValueEnumeration {
    pub fn values(&self) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = self.patterns.values().map(|e| e.value.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn fiber(&self, value: &Scalar) -> usize {
        self.patterns.values().filter(|e| &e.value == value).count()
    }

    pub fn family_agrees(&self) -> bool {
        self.patterns.values().all(|e| e.value == e.from_family)
    }
}

/// Exact determinant report for the `θ₃⨼T` restriction.
#[derive(Debug, Clone, Serialize)]
pub struct DetE2Report {
    #[serde(serialize_with = "scalar::serialize")]
    pub b: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: Scalar,
    /// `¼(-b² - 4bμ/7 + 45μ²/49)²`.
    #[serde(serialize_with = "scalar::serialize")]
    pub closed_form: Scalar,
    /// Determinant on `f₁…f₄`, the `θ₃`-complement in the 5-frame.
    #[serde(serialize_with = "scalar::serialize_opt")]
    pub brute_n5: Option<Scalar>,
    /// Determinant on the 6-dimensional `θ₃`-complement in `ℝ⁷`.
    #[serde(serialize_with = "scalar::serialize_opt")]
    pub brute_r7: Option<Scalar>,
    pub member: Option<Form>,
}

/// `T = A f₁₂₅ + x(f₁₃₅+f₂₄₅) + y(-f₁₄₅+f₂₃₅) + B f₃₄₅` on the 5-frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct N5Template {
    #[serde(serialize_with = "scalar::serialize")]
    pub a: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub x: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub y: Scalar,
    #[serde(rename = "b", serialize_with = "scalar::serialize")]
    pub b_coef: Scalar,
}

fn f_term(idx: &str, c: Scalar) -> Form {
    let i: Vec<usize> = idx.bytes().map(|d| (d - b'1') as usize).collect();
    Form::term(5, &i, c)
}

/// The three template directions with `A + B = 0`.
pub fn template_zero_trace_basis() -> [Form; 3] {
    [
        &f_term("125", int(1)) - &f_term("345", int(1)),
        &f_term("135", int(1)) + &f_term("245", int(1)),
        &f_term("145", int(-1)) + &f_term("235", int(1)),
    ]
}

impl N5Template {
    pub fn form(&self) -> Form {
        let mut t = f_term("125", self.a.clone());
        t += &f_term("135", self.x.clone());
        t += &f_term("245", self.x.clone());
        t += &f_term("145", -self.y.clone());
        t += &f_term("235", self.y.clone());
        t += &f_term("345", self.b_coef.clone());
        t
    }

    pub fn form7(&self) -> Form {
        from_n5(&self.form())
    }

    /// `A² + B² + 2x² + 2y²`.
    pub fn norm2(&self) -> Scalar {
        &self.a * &self.a
            + &self.b_coef * &self.b_coef
            + int(2) * (&self.x * &self.x + &self.y * &self.y)
    }

    /// `b = A + B - 2μ/7`.
    pub fn b_param(&self, mu: &Scalar) -> Scalar {
        &self.a + &self.b_coef - ratio(2, 7) * mu
    }

    /// Reads the template coefficients off a 5-frame 3-form; `None` if the
    /// form is not of template shape.
    pub fn from_form(t: &Form) -> Option<Self> {
        let c = |s: &str| {
            let i: Vec<usize> = s.bytes().map(|d| (d - b'1') as usize).collect();
            t.coeff(&i)
        };
        let tpl = Self {
            a: c("125"),
            x: c("135"),
            y: c("235"),
            b_coef: c("345"),
        };
        (tpl.form() == *t).then_some(tpl)
    }
}

/// `f_a = e_{a+2}`: pushes a 5-frame form into `ℝ⁷`.
pub fn from_n5(f: &Form) -> Form {
    let images: Vec<Form> = (0..5).map(|a| Form::one_form(7, a + 2)).collect();
    if f.degree() == 0 {
        return Form::constant(7, f.coeff(&[]));
    }
    f.substitute(&images)
}

/// Restricts a 7-dimensional form without `e₁, e₂` components to the
/// 5-frame.
pub fn to_n5(f: &Form) -> Result<Form> {
    if f.dim() != 7 {
        return Err(Error::UnsupportedDimension(f.dim(), "7".into()));
    }
    if !f.hook_basis(0).is_zero() || !f.hook_basis(1).is_zero() {
        return Err(Error::InvalidParameter(format!(
            "form has e1/e2 components: {f}"
        )));
    }
    let mut images: Vec<Form> = vec![Form::zero(5, 1), Form::zero(5, 1)];
    images.extend((0..5).map(|a| Form::one_form(5, a)));
    if f.degree() == 0 {
        return Ok(Form::constant(5, f.coeff(&[])));
    }
    Ok(f.substitute(&images))
}

/// `Ωᵢ = θᵢ⨼(ω - θ₁₂₃)`, as 5-frame forms.
pub fn omega_forms(omega: &Form) -> Result<[Form; 3]> {
    let rest = omega - &Form::basis(7, &THETA);
    let o: Vec<Form> = THETA
        .iter()
        .map(|&i| to_n5(&rest.hook_basis(i)))
        .collect::<Result<_>>()?;
    Ok([o[0].clone(), o[1].clone(), o[2].clone()])
}

/// `Ω₁ = f₁₃ - f₂₄, Ω₂ = -f₁₄ - f₂₃, Ω₃ = f₁₂ + f₃₄`.
pub fn expected_omega_forms() -> [Form; 3] {
    [
        &f_term("13", int(1)) - &f_term("24", int(1)),
        &f_term("14", int(-1)) - &f_term("23", int(1)),
        &f_term("12", int(1)) + &f_term("34", int(1)),
    ]
}

/// `dΩ = Σⱼ (fⱼ⨼Ω) ∧ (fⱼ⨼T)` for a `∇`-parallel form `Ω`.
pub fn parallel_form_d(omega: &Form, t: &Form) -> Form {
    let n = t.dim();
    let mut out = Form::zero(n, omega.degree() + 1);
    for j in 0..n {
        out += &omega.hook_basis(j).wedge(&t.hook_basis(j));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub m: EigenTriple,
    #[serde(serialize_with = "scalar::serialize")]
    pub a: Scalar,
    #[serde(serialize_with = "scalar::serialize")]
    pub b: Scalar,
    /// Dimension of the family cut out by `θ₂⨼T = 0`.
    pub dim_theta2: i64,
    /// Dimension after also imposing `θ₁⨼T = 0` (`-1`: inconsistent).
    pub dim_theta12: i64,
    /// A member satisfying all feasible hook constraints.
    pub example: Form,
    /// Whether the constrained members are all of [`N5Template`] shape.
    pub template_shape: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Exclusion {
    #[serde(serialize_with = "scalar::serialize")]
    pub b: Scalar,
    /// `*₅T = -θ₃⨼T` on the `A + B = 0` template.
    pub star_is_minus_hook: bool,
    /// `‖dθ₃‖² vol = -θ₃∧dθ₃∧dθ₃` on sample members.
    pub norm_identity: bool,
    /// `dθ₃∧dθ₃ = q·f₁₂₃₄` with `q` negative definite in `(A, x, y)`.
    pub quadratic_negative_definite: bool,
    /// Torsion forced by `dT = dθ₃∧dθ₃ = 0`.
    pub torsion_after_exclusion: Form,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoFieldReport {
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: Scalar,
    pub branches: Vec<Branch>,
    pub exclusion: Exclusion,
    /// Instance `A = μ, B = 0, x = y = 0` of the branch with `A + B = μ`.
    pub template_instance: N5Template,
    pub template_norm_ok: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaReport {
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: Scalar,
    pub torsion: Form,
    pub omegas: [Form; 3],
    pub d_omegas: [Form; 3],
    pub ricci_spectrum: String,
    /// `dim E² = dim{X : X⨼T = 0}`.
    pub kernel_dim: usize,
    pub checks: Vec<Check>,
}

impl OmegaReport {
    pub fn pass(&self) -> bool {
        all_pass(&self.checks)
    }
}

/// Family solver with the standard structure and precomputed spinor data.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub g2: G2Structure,
    /// `Ψ₀, Ψ₁, Ψ₂, Ψ₃`.
    pub psis: [Spinor; 4],
    /// `(basis form)·Ψⱼ` for each of the 35 basis 3-forms.
    actions: Vec<[Vec<Scalar>; 4]>,
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Classifier {
    pub fn new() -> Self {
        let g2 = G2Structure::standard();
        let psis = [
            g2.psi0.clone(),
            g2.psi(THETA[0]),
            g2.psi(THETA[1]),
            g2.psi(THETA[2]),
        ];
        let actions = basis_forms(7, 3)
            .iter()
            .map(|b| {
                let op = g2.rep.operator(b).expect("dimension 7");
                std::array::from_fn(|j| op.mul_vec(psis[j].components()))
            })
            .collect();
        Self { g2, psis, actions }
    }

    /// Rows of `Σ ↦ (Σ, λ)` for `λ ∈ Λ³₇ ⊕ Λ³₁`.
    fn lambda27_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = self
            .g2
            .lambda7_basis()
            .iter()
            .map(Form::coordinates)
            .collect();
        rows.push(self.g2.omega.coordinates());
        rows
    }

    fn spinor_rows(&self, j: usize) -> Vec<Vec<Scalar>> {
        (0..8)
            .map(|r| {
                (0..LAMBDA3_DIM)
                    .map(|b| self.actions[b][j][r].clone())
                    .collect()
            })
            .collect()
    }

    pub fn solve_family(&self, m: &EigenTriple, mu: &Scalar) -> Torsion27Family {
        let mut rows = self.lambda27_rows();
        let mut rhs = vec![Scalar::zero(); rows.len()];
        for i in 0..3 {
            rows.extend(self.spinor_rows(i + 1));
            rhs.extend(self.psis[i + 1].components().iter().map(|c| c * &m.m[i]));
        }
        let solution = QMatrix::from_rows(rows).solve_affine(&rhs);
        Torsion27Family {
            m: m.clone(),
            mu: mu.clone(),
            solution,
        }
    }

    /// `dim{Σ ∈ Λ³₂₇ : Σ·Ψⱼ = 0, j < k}` for the prefix `Ψ₀, …, Ψ_{k-1}`.
    pub fn kernel_dim(&self, k: usize) -> Result<usize> {
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidParameter(format!("k = {k} not in 1..=4")));
        }
        let mut rows = self.lambda27_rows();
        for j in 0..k {
            rows.extend(self.spinor_rows(j));
        }
        Ok(LAMBDA3_DIM - QMatrix::from_rows(rows).rank())
    }

    pub fn kernel_dims(&self) -> [usize; 4] {
        std::array::from_fn(|k| self.kernel_dim(k + 1).expect("k in range"))
    }

    pub fn torsion_value_enumeration(&self, mu: &Scalar) -> ValueEnumeration {
        let mut patterns = BTreeMap::new();
        for p in all_patterns() {
            let m = EigenTriple::from_roots(p, mu);
            let value = torsion_value(&m, mu);
            let fam = self.solve_family(&m, mu);
            let from_family = fam
                .torsion(&vec![Scalar::zero(); fam.dimension().max(0) as usize])
                .map_or_else(Scalar::zero, |t| t.coeff(&THETA));
            patterns.insert(
                pattern_key(p),
                ValueEntry {
                    m,
                    value,
                    from_family,
                },
            );
        }
        let mut fibers = BTreeMap::new();
        for e in patterns.values() {
            *fibers.entry(scalar::format(&e.value)).or_insert(0) += 1;
        }
        ValueEnumeration {
            mu: mu.clone(),
            patterns,
            fibers,
        }
    }

    /// Members of `fam` (as full torsions) with `θ⨼T = 0` for the listed
    /// frame indices, parameterized over the family parameters.
    pub fn constrain_hooks(
        &self,
        fam: &Torsion27Family,
        hooks: &[usize],
    ) -> Option<(Form, Vec<Form>)> {
        let base = fam.torsion(&vec![Scalar::zero(); fam.dimension().max(0) as usize])?;
        let dirs = fam.directions();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs = Vec::new();
        for &h in hooks {
            let cols: Vec<Vec<Scalar>> =
                dirs.iter().map(|d| d.hook_basis(h).coordinates()).collect();
            let b0 = base.hook_basis(h).coordinates();
            for r in 0..b0.len() {
                rows.push(cols.iter().map(|c| c[r].clone()).collect());
                rhs.push(-b0[r].clone());
            }
        }
        let sol = if dirs.is_empty() {
            let consistent = rhs.iter().all(Zero::is_zero);
            return consistent.then(|| (base, Vec::new()));
        } else {
            QMatrix::from_rows(rows).solve_affine(&rhs)?
        };
        let combine = |params: &[Scalar]| {
            let mut t = Form::zero(7, 3);
            for (p, d) in params.iter().zip(&dirs) {
                t += &d.scale(p);
            }
            t
        };
        let particular = &base + &combine(&sol.particular);
        let directions = sol.directions.iter().map(|d| combine(d)).collect();
        Some((particular, directions))
    }

    pub fn two_field_case_analysis(&self, mu: &Scalar) -> TwoFieldReport {
        let mut branches = Vec::new();
        let mut checks = Vec::new();
        for p in all_patterns() {
            let m = EigenTriple::from_roots(p, mu);
            if !torsion_value(&m, mu).is_zero() {
                continue;
            }
            let fam = self.solve_family(&m, mu);
            let Some((t2, d2)) = self.constrain_hooks(&fam, &[THETA[1]]) else {
                continue;
            };
            let both = self.constrain_hooks(&fam, &[THETA[0], THETA[1]]);
            let [a, b, _] = fam.abc().expect("family is nonempty");
            let (example, template_shape, dim12) = match &both {
                Some((t, d)) => {
                    let shape = std::iter::once(t.clone())
                        .chain(d.iter().map(|x| x + t))
                        .all(|f| {
                            to_n5(&f)
                                .ok()
                                .and_then(|g| N5Template::from_form(&g))
                                .is_some()
                        });
                    (t.clone(), shape, d.len() as i64)
                }
                None => (t2.clone(), false, -1),
            };
            branches.push(Branch {
                m,
                a,
                b,
                dim_theta2: d2.len() as i64,
                dim_theta12: dim12,
                example,
                template_shape,
            });
        }
        branches.sort_by(|x, y| y.b.cmp(&x.b));

        let expected = [
            (ratio(2, 7) * mu, ratio(5, 7) * mu),
            (ratio(2, 7) * mu, ratio(-2, 7) * mu),
        ];
        let found: Vec<(Scalar, Scalar)> = branches
            .iter()
            .map(|b| (b.a.clone(), b.b.clone()))
            .collect();
        checks.push(Check::new(
            "two (a,b) branches",
            found.len() == 2 && expected.iter().all(|e| found.contains(e)),
            found
                .iter()
                .map(|(a, b)| format!("({}, {})", scalar::format(a), scalar::format(b)))
                .collect::<Vec<_>>()
                .join(", "),
        ));

        let exclusion = exclusion_argument(mu);
        checks.push(Check::new(
            "second branch forces T = 0",
            exclusion.star_is_minus_hook
                && exclusion.norm_identity
                && exclusion.quadratic_negative_definite
                && exclusion.torsion_after_exclusion.is_zero(),
            format!("T = {}", exclusion.torsion_after_exclusion),
        ));

        let template_instance = N5Template {
            a: mu.clone(),
            x: Scalar::zero(),
            y: Scalar::zero(),
            b_coef: Scalar::zero(),
        };
        let template_norm_ok = template_instance.norm2() == mu * mu
            && template_instance.b_param(mu) == ratio(5, 7) * mu;
        checks.push(Check::new(
            "template norm instance",
            template_norm_ok,
            format!("‖T‖² = {}", scalar::format(&template_instance.norm2())),
        ));
        TwoFieldReport {
            mu: mu.clone(),
            branches,
            exclusion,
            template_instance,
            template_norm_ok,
            checks,
        }
    }
}

/// `*₅T = -θ₃⨼T`, `‖dθ₃‖²vol = -θ₃∧dθ₃∧dθ₃`, and negativity of
/// `dθ₃∧dθ₃` on the `A + B = 0` template, with `dθ₃ = θ₃⨼T`.
fn exclusion_argument(mu: &Scalar) -> Exclusion {
    let basis = template_zero_trace_basis();
    let f5 = |t: &Form| t.hook_basis(4);
    let star_is_minus_hook = basis.iter().all(|t| t.hodge() == -f5(t));

    let vol = Form::volume(5);
    let theta3 = Form::one_form(5, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let norm_identity = (0..8).all(|_| {
        let mut t = Form::zero(5, 3);
        for b in &basis {
            t += &b.scale(&ratio(rng.random_range(-9..=9), rng.random_range(1..=5)));
        }
        let dth = f5(&t);
        vol.scale(&dth.norm2()) == -theta3.wedge(&dth).wedge(&dth)
    });

    // polarization of q(v) = coefficient of f₁₂₃₄ in dθ₃∧dθ₃
    let f1234 = [0usize, 1, 2, 3];
    let gram = QMatrix::from_fn(3, 3, |i, j| {
        f5(&basis[i]).wedge(&f5(&basis[j])).coeff(&f1234)
    });
    let neg = gram.scale(&int(-1));
    let quadratic_negative_definite = (1..=3).all(|k| {
        QMatrix::from_fn(k, k, |i, j| neg[(i, j)].clone())
            .det()
            .is_positive()
    });
    // negative definite ⇒ the only zero of q is A = x = y = 0
    let forced = Form::zero(5, 3);
    let torsion_after_exclusion = if quadratic_negative_definite {
        forced
    } else {
        basis[0].clone()
    };
    Exclusion {
        b: ratio(-2, 7) * mu,
        star_is_minus_hook,
        norm_identity,
        quadratic_negative_definite,
        torsion_after_exclusion,
    }
}

/// `¼(-b² - 4bμ/7 + 45μ²/49)²`.
pub fn det_e2_closed(b: &Scalar, mu: &Scalar) -> Scalar {
    let inner = -(b * b) - ratio(4, 7) * b * mu + ratio(45, 49) * mu * mu;
    &inner * &inner * ratio(1, 4)
}

/// Determinant of `θ₃⨼T` on `f₁…f₄` for a 5-frame torsion.
pub fn det_restricted_n5(t5: &Form) -> Scalar {
    let m = two_form_matrix(&t5.hook_basis(4));
    QMatrix::from_fn(4, 4, |i, j| m[(i, j)].clone()).det()
}

/// Determinant of `θ₃⨼T` on the 6 frame vectors orthogonal to `θ₃` in `ℝ⁷`.
pub fn det_restricted_r7(t7: &Form) -> Scalar {
    let m = two_form_matrix(&t7.hook_basis(THETA[2]));
    QMatrix::from_fn(6, 6, |i, j| m[(i, j)].clone()).det()
}

/// A template member with `‖T‖² = μ²` and the given `b`, when the sphere
/// `u² + x² + y² = μ²/2 - s²/4` (`s = b + 2μ/7`) has a rational point found
/// by bounded search.
pub fn template_member_for_b(b: &Scalar, mu: &Scalar) -> Option<N5Template> {
    let s = b + ratio(2, 7) * mu;
    let r2 = mu * mu * ratio(1, 2) - &s * &s * ratio(1, 4);
    let [u, x, y] = rational_point_on_sphere(&r2)?;
    let half = &s * ratio(1, 2);
    Some(N5Template {
        a: &half + &u,
        x,
        y,
        b_coef: &half - &u,
    })
}

const SPHERE_SEARCH_LIMIT: u64 = 100_000_000;

/// Rational `(u, x, y)` with `u² + x² + y² = r2`, via integer points on
/// `U² + X² + Y² = p·q` for `r2 = p/q`.
pub fn rational_point_on_sphere(r2: &Scalar) -> Option<[Scalar; 3]> {
    if r2.is_negative() {
        return None;
    }
    let n: BigInt = r2.numer() * r2.denom();
    let n = n.to_u64().filter(|&n| n <= SPHERE_SEARCH_LIMIT)?;
    // Legendre: n = 4^k(8m+7) is not a sum of three squares
    let mut k = n;
    while k > 0 && k % 4 == 0 {
        k /= 4;
    }
    if k % 8 == 7 {
        return None;
    }
    let q = Scalar::from_integer(r2.denom().clone());
    let root = n.sqrt();
    for a in 0..=root {
        let ra = n - a * a;
        for b in a..=ra.sqrt() {
            let rb = ra - b * b;
            let c = rb.sqrt();
            if c * c == rb {
                let f = |v: u64| Scalar::from_integer(BigInt::from(v)) / &q;
                return Some([f(c), f(b), f(a)]);
            }
        }
    }
    None
}

/// Closed form with exact cross-checks. Errors if the closed form disagrees
/// with the 5-frame determinant of a template member.
pub fn det_e2(b: &Scalar, mu: &Scalar) -> Result<DetE2Report> {
    let closed_form = det_e2_closed(b, mu);
    let member = template_member_for_b(b, mu);
    let brute_n5 = member.as_ref().map(|m| det_restricted_n5(&m.form()));
    let brute_r7 = member.as_ref().map(|m| det_restricted_r7(&m.form7()));
    if let Some(d) = &brute_n5 {
        if *d != closed_form {
            return Err(Error::DeterminantMismatch {
                closed: scalar::format(&closed_form),
                brute: scalar::format(d),
            });
        }
    }
    Ok(DetE2Report {
        b: b.clone(),
        mu: mu.clone(),
        closed_form,
        brute_n5,
        brute_r7,
        member: member.map(|m| m.form7()),
    })
}

/// Random rational template members with `‖T‖² = μ²`: second intersection
/// of random rational lines through `(μ, 0, 0, 0)` with the ellipsoid
/// `A² + B² + 2x² + 2y² = μ²`.
pub fn random_template_members(mu: &Scalar, count: usize, seed: u64) -> Vec<N5Template> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d: [Scalar; 4] = std::array::from_fn(|_| int(rng.random_range(-6..=6)));
        let qd = &d[0] * &d[0] + &d[1] * &d[1] + int(2) * (&d[2] * &d[2] + &d[3] * &d[3]);
        if qd.is_zero() || d[0].is_zero() {
            continue;
        }
        let t = -int(2) * mu * &d[0] / qd;
        out.push(N5Template {
            a: mu + &t * &d[0],
            b_coef: &t * &d[1],
            x: &t * &d[2],
            y: &t * &d[3],
        });
    }
    out
}

/// Checks the `Ωᵢ` identities, `dΩᵢ` and the Ricci eigenvalues for a
/// branch-one torsion (a 7-dimensional form without `e₁, e₂` components).
pub fn omega_form_identities(t: &Form, mu: &Scalar) -> Result<OmegaReport> {
    if mu.is_zero() {
        return Err(Error::InvalidParameter("μ must be nonzero".into()));
    }
    let omega = crate::g2::standard_omega3_form();
    let t5 = to_n5(t)?;
    let omegas = omega_forms(&omega)?;
    let theta3 = Form::one_form(5, 4);
    let hook = t5.hook_basis(4);
    let mut checks = Vec::new();

    let expected = expected_omega_forms();
    checks.push(Check::new(
        "Ω forms in the 5-frame",
        omegas == expected,
        omegas
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; "),
    ));
    let pairing: Vec<Scalar> = omegas.iter().map(|o| hook.inner(o)).collect();
    checks.push(Check::equal("(θ₃⨼T, Ω₁)", &pairing[0], &Scalar::zero()));
    checks.push(Check::equal("(θ₃⨼T, Ω₂)", &pairing[1], &Scalar::zero()));
    checks.push(Check::equal("(θ₃⨼T, Ω₃)", &pairing[2], mu));
    checks.push(Check::equal("‖T‖² = μ²", &t5.norm2(), &(mu * mu)));
    let recon = (&t5.hodge() + &hook).scale(&mu.recip());
    checks.push(Check::equal("Ω₃ = (*₅T + θ₃⨼T)/μ", &omegas[2], &recon));

    let d_omegas: [Form; 3] = std::array::from_fn(|i| parallel_form_d(&omegas[i], &t5));
    checks.push(Check::equal(
        "dΩ₁ = μΩ₂∧θ₃",
        &d_omegas[0],
        &omegas[1].wedge(&theta3).scale(mu),
    ));
    checks.push(Check::equal(
        "dΩ₂ = -μΩ₁∧θ₃",
        &d_omegas[1],
        &omegas[0].wedge(&theta3).scale(&-mu),
    ));
    checks.push(Check::equal("dΩ₃ = 0", &d_omegas[2], &Form::zero(5, 3)));
    // θ₃⨼Ωᵢ = 0, so L_θ₃ Ωᵢ = θ₃⨼dΩᵢ
    let lie1 = d_omegas[0].hook_basis(4);
    checks.push(Check::equal("L_θ₃ Ω₁ = μΩ₂", &lie1, &omegas[1].scale(mu)));

    let kernel_dim =
        5 - QMatrix::from_rows((0..5).map(|a| t5.hook_basis(a).coordinates()).collect()).rank();
    checks.push(Check::new(
        "dim E² = 2",
        kernel_dim == 2,
        kernel_dim.to_string(),
    ));

    let ric = ric_from_torsion(&t5)?;
    let spectrum = symmetric_spectrum(&ric).expect("Ricci from torsion is symmetric");
    let want = Spectrum::from_pairs(&[(Scalar::zero(), 2), (mu * mu * ratio(1, 2), 3)]);
    checks.push(Check::new(
        "Ric eigenvalues {0², (μ²/2)³}",
        spectrum == want,
        spectrum.to_string(),
    ));
    checks.push(Check::equal(
        "Scal = (3/2)‖T‖²",
        &ric.trace(),
        &(ratio(3, 2) * t5.norm2()),
    ));

    Ok(OmegaReport {
        mu: mu.clone(),
        torsion: t.clone(),
        omegas,
        d_omegas,
        ricci_spectrum: spectrum.to_string(),
        kernel_dim,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(a: i64, b: i64, c: i64) -> EigenTriple {
        EigenTriple::new(int(a), int(b), int(c))
    }

    #[test]
    fn family_dimension_and_abc() {
        let cl = Classifier::new();
        for m in [
            triple(0, 0, 0),
            triple(1, 2, 3),
            triple(-8, 6, 6),
            triple(5, -1, 2),
        ] {
            let fam = cl.solve_family(&m, &int(7));
            assert_eq!(fam.dimension(), 9, "{m}");
            assert!(fam.abc_constant());
            let [a, b, c] = fam.abc().unwrap();
            assert!(c.is_zero());
            assert_eq!([a, b], solved_ab(&m));
            assert_eq!(fam.solved_relations(), Some([true, true, true]));
        }
    }

    #[test]
    fn members_are_eigen_torsions() {
        let cl = Classifier::new();
        let m = triple(1, 2, 3);
        let fam = cl.solve_family(&m, &int(1));
        let params: Vec<Scalar> = (0..9).map(|k| ratio(k - 4, 3)).collect();
        let t = fam.member(&params).unwrap();
        let (t1, t7, _) = cl.g2.project3(&t).unwrap();
        assert!(t1.is_zero() && t7.is_zero());
        for i in 0..3 {
            let got = cl.g2.rep.act(&t, &cl.psis[i + 1]).unwrap();
            assert_eq!(got, cl.psis[i + 1].scale(&m.m[i]));
        }
    }

    #[test]
    fn displayed_family_matches_after_swapping_first_and_third() {
        let cl = Classifier::new();
        let m = triple(1, 2, 3);
        let solved = cl.solve_family(&m, &int(1)).solution.unwrap();
        assert!(same_affine_set(
            &closed_form_family(&m.swapped_13()),
            &solved
        ));
        assert!(!same_affine_set(&closed_form_family(&m), &solved));
        let sym = triple(3, -2, 3);
        let solved = cl.solve_family(&sym, &int(1)).solution.unwrap();
        assert!(same_affine_set(&closed_form_family(&sym), &solved));
    }

    #[test]
    fn closed_form_member_abc() {
        let m = triple(4, 0, -4);
        let p: [Scalar; 9] = std::array::from_fn(|k| int(k as i64));
        let [a, b, c] = abc_of(&closed_form_member(&m, &p));
        assert_eq!([a, b], displayed_ab(&m));
        assert!(c.is_zero());
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(Classifier::new().kernel_dims(), [27, 20, 14, 9]);
        assert!(Classifier::new().kernel_dim(0).is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(eigenvalue_roots(&int(7)), [int(6), int(-8)]);
        assert_eq!(eigenvalue_roots(&int(1)), [ratio(6, 7), ratio(-8, 7)]);
        assert_eq!(eigenvalue_roots(&int(0)), [int(0), int(0)]);
        // substitution
        let m = ratio(6, 7);
        assert_eq!(&m * &m + ratio(2, 7) * &m, ratio(48, 49));
    }

    #[test]
    fn value_enumeration() {
        let mu = int(7);
        let e = Classifier::new().torsion_value_enumeration(&mu);
        assert_eq!(e.values(), vec![ratio(-7, 2), int(0), ratio(7, 2), int(7)]);
        assert_eq!(e.patterns["+++"].value, ratio(-7, 2));
        assert_eq!(e.patterns["---"].value, int(7));
        assert_eq!(e.patterns["++-"].value, int(0));
        assert_eq!(
            [ratio(-7, 2), int(0), ratio(7, 2), int(7)].map(|v| e.fiber(&v)),
            [1, 3, 3, 1]
        );
        assert!(e.family_agrees());
    }

    #[test]
    fn det_examples() {
        let mu = int(7);
        assert!(det_e2_closed(&int(5), &mu).is_zero());
        assert_eq!(
            det_e2_closed(&int(-2), &mu),
            int(7 * 7 * 7 * 7) * ratio(1, 4)
        );
        assert_eq!(det_e2_closed(&int(0), &mu), ratio(2025, 4));
        let r = det_e2(&int(5), &mu).unwrap();
        assert_eq!(r.brute_n5, Some(int(0)));
        let r = det_e2(&int(-2), &int(7)).unwrap();
        assert_eq!(r.brute_n5, Some(ratio(2401, 4)));
    }

    #[test]
    fn det_on_random_members() {
        let mu = int(7);
        for m in random_template_members(&mu, 10, 3) {
            assert_eq!(m.norm2(), &mu * &mu);
            let b = m.b_param(&mu);
            assert_eq!(det_restricted_n5(&m.form()), det_e2_closed(&b, &mu));
            // e₁, e₂ lie in the kernel of θ₃⨼T on ℝ⁷
            assert!(det_restricted_r7(&m.form7()).is_zero());
        }
    }

    #[test]
    fn sphere_points() {
        let p = rational_point_on_sphere(&ratio(3, 4)).unwrap();
        let s: Scalar = p.iter().map(|v| v * v).sum();
        assert_eq!(s, ratio(3, 4));
        assert!(rational_point_on_sphere(&int(7)).is_none());
        assert!(rational_point_on_sphere(&int(-1)).is_none());
    }

    #[test]
    fn two_field_branches() {
        let mu = int(7);
        let r = Classifier::new().two_field_case_analysis(&mu);
        assert!(all_pass(&r.checks), "{:?}", r.checks);
        assert_eq!(r.branches.len(), 2);
        let first = &r.branches[0];
        assert_eq!((first.a.clone(), first.b.clone()), (int(2), int(5)));
        assert_eq!(first.m, triple(6, 6, -8));
        assert!(first.template_shape && first.dim_theta12 >= 0);
        let second = &r.branches[1];
        assert_eq!((second.a.clone(), second.b.clone()), (int(2), int(-2)));
        assert_eq!(second.m, triple(-8, 6, 6));
        assert_eq!(second.dim_theta12, -1);
    }

    #[test]
    fn omega_identities_on_branch_one() {
        let mu = int(7);
        let r = Classifier::new().two_field_case_analysis(&mu);
        let rep = omega_form_identities(&r.template_instance.form7(), &mu).unwrap();
        assert!(rep.pass(), "{:?}", rep.checks);
        // a generic member of the norm ellipsoid with A + B = μ
        let t = N5Template {
            a: int(2),
            b_coef: int(5),
            x: int(3),
            y: int(1),
        };
        assert_eq!(t.norm2(), &mu * &mu);
        let rep = omega_form_identities(&t.form7(), &mu).unwrap();
        assert!(rep.pass(), "{:?}", rep.checks);
    }

    #[test]
    fn branch_one_members_are_template_shaped() {
        let cl = Classifier::new();
        let mu = int(7);
        let fam = cl.solve_family(&EigenTriple::from_roots([true, true, false], &mu), &mu);
        let (t, dirs) = cl.constrain_hooks(&fam, &[0, 1]).unwrap();
        for d in &dirs {
            let tpl = N5Template::from_form(&to_n5(&(&t + d)).unwrap()).unwrap();
            assert_eq!(&tpl.a + &tpl.b_coef, mu.clone());
        }
    }

    #[test]
    fn n5_round_trip() {
        let f = Form::parse("+1 e347 -2 e567").unwrap();
        assert_eq!(from_n5(&to_n5(&f).unwrap()), f);
        assert!(to_n5(&Form::parse("+1 e127").unwrap()).is_err());
    }
}
