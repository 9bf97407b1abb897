//! Invariant geometry of a Lie group with a left-invariant metric for which
//! the chosen frame `e₁…e_n` is orthonormal.
//!
//! Conventions: `[eᵢ, eⱼ] = Σ_k c^k_ij e_k`, `c_ijk := c^k_ij`,
//! `deᵏ = -½ Σ c^k_ij eⁱ∧eʲ`, `Γ_ijk = ⟨∇_{eᵢ}eⱼ, e_k⟩`, connection matrices
//! `(A_i)_{kj} = Γ_ijk`, `R(eᵢ,eⱼ) = [A_i, A_j] - Σ_k c^k_ij A_k`,
//! `Ric_jk = Σ_i ⟨R(eᵢ,eⱼ)e_k, eᵢ⟩`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::linalg::{QMatrix, Span};
use crate::multilinear::{Form, MAX_DIM};
use crate::scalar::{self, Scalar};
use crate::spin7::{CliffordRep, Spinor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    // c[(i * n + j) * n + k] = c^k_ij
    c: Vec<Scalar>,
}

impl LieAlgebraData {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim, format!("1..={MAX_DIM}")));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                c.len()
            )));
        }
        let alg = Self { dim, c };
        alg.validate()?;
        Ok(alg)
    }

    /// From `(i, j, k, c^k_ij)` entries (0-based); antisymmetric partners are
    /// filled in, contradictory duplicates rejected.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        let mut set = vec![false; dim * dim * dim];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j).max(k),
                    dim,
                });
            }
            for (idx, val) in [
                ((i * dim + j) * dim + k, v.clone()),
                ((j * dim + i) * dim + k, -v.clone()),
            ] {
                if set[idx] && c[idx] != val {
                    return Err(Error::InvalidAlgebra(format!(
                        "antisymmetry: conflicting values for c^{}_{}{}",
                        k + 1,
                        i + 1,
                        j + 1
                    )));
                }
                c[idx] = val;
                set[idx] = true;
            }
        }
        Self::new(dim, c)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, vec![Scalar::zero(); dim * dim * dim]).expect("abelian algebra is valid")
    }

    /// `ℝ⁴ ⊕ su(2)` in algebra order: indices 0..4 central, and
    /// `[e₅,e₆] = λe₇` cyclic on 4, 5, 6.
    pub fn r4_su2(lambda: &Scalar) -> Self {
        let (a, b, c) = (4, 5, 6);
        Self::from_entries(
            7,
            &[
                (a, b, c, lambda.clone()),
                (b, c, a, lambda.clone()),
                (c, a, b, lambda.clone()),
            ],
        )
        .expect("su(2) is a Lie algebra")
    }

    /// Placement of [`LieAlgebraData::r4_su2`] that puts the `su(2)` factor in
    /// the frame slots `(e₁, e₂, e₇)`.
    pub const R4_SU2_PLACEMENT: [usize; 7] = [2, 3, 4, 5, 0, 1, 6];

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_ij`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.c(i, j, k) != -self.c(j, i, k).clone() {
                        return Err(Error::InvalidAlgebra(format!(
                            "antisymmetry: c^{}_{}{} ≠ -c^{}_{}{}",
                            k + 1,
                            i + 1,
                            j + 1,
                            k + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l);
                            s += self.c(j, k, m) * self.c(m, i, l);
                            s += self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(Error::InvalidAlgebra(format!(
                                "the Jacobi identity for (e{}, e{}, e{})",
                                i + 1,
                                j + 1,
                                k + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `tr ad_X = 0` for all `X`.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim)
                .fold(Scalar::zero(), |acc, j| acc + self.c(i, j, j))
                .is_zero()
        })
    }

    /// Renames algebra index `a` to frame slot `placement[a]`.
    pub fn relabel(&self, placement: &[usize]) -> Result<Self> {
        let n = self.dim;
        let mut seen = vec![false; n];
        if placement.len() != n
            || placement
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(format!(
                "placement {placement:?} is not a permutation of 0..{n}"
            )));
        }
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(placement[i] * n + placement[j]) * n + placement[k]] =
                        self.c(i, j, k).clone();
                }
            }
        }
        Ok(Self { dim: n, c })
    }

    /// `Σ_{i<j<k} c_ijk e^{ijk}`, the Cartan 3-form `⟨[X,Y],Z⟩` when the
    /// metric is bi-invariant.
    pub fn cartan_form(&self) -> Result<Form> {
        let n = self.dim;
        let mut f = Form::zero(n, 3);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *self.c(i, j, k) != *self.c(j, k, i) {
                        return Err(Error::InvalidAlgebra(
                            "bi-invariance: c_ijk is not totally antisymmetric".into(),
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    f += &Form::term(n, &[i, j, k], self.c(i, j, k).clone());
                }
            }
        }
        Ok(f)
    }

    /// `deᵏ` for every `k`.
    pub fn d_one_forms(&self) -> Vec<Form> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut f = Form::zero(n, 2);
                for i in 0..n {
                    for j in i + 1..n {
                        f += &Form::term(n, &[i, j], -self.c(i, j, k).clone());
                    }
                }
                f
            })
            .collect()
    }

    /// Chevalley–Eilenberg differential of an invariant form.
    pub fn ce_d(&self, alpha: &Form) -> Form {
        assert_eq!(alpha.dim(), self.dim);
        alpha.extend_derivation(&self.d_one_forms())
    }

    /// `δ = (-1)^{n(k+1)+1} *d*`, the formal adjoint of `d` on unimodular
    /// algebras.
    pub fn codiff(&self, alpha: &Form) -> Form {
        if !self.is_unimodular() {
            log::warn!("codifferential on a non-unimodular algebra is not adjoint to d");
        }
        let n = self.dim;
        let k = alpha.degree();
        if k == 0 {
            return Form::zero(n, 0);
        }
        let r = self.ce_d(&alpha.hodge()).hodge();
        if (n * (k + 1) + 1) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// `L_X α = d(X⨼α) + X⨼dα`.
    pub fn lie_derivative(&self, x: &[Scalar], alpha: &Form) -> Form {
        let a = self.ce_d(&alpha.hook_vec(x));
        let b = self.ce_d(alpha).hook_vec(x);
        if alpha.degree() == 0 {
            return b;
        }
        &a + &b
    }
}

/// Parsed algebra file: `i j k value` lines (1-based, meaning `c^k_ij`),
/// an optional `dim N` header (default 7) and `#` comments. Antisymmetric
/// partners may be omitted.
#[derive(Debug, Clone)]
pub struct AlgebraFile {
    pub dim: usize,
    pub entries: Vec<(usize, usize, usize, Scalar)>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut dim = 7;
        let mut dim_seen = false;
        let mut raw: Vec<([usize; 3], Scalar, usize, usize)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let body = line.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = body
                .split_whitespace()
                .map(|t| (t.as_ptr() as usize - body.as_ptr() as usize + 1, t))
                .collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens[0].1 == "dim" {
                if dim_seen || !raw.is_empty() {
                    return Err(ParseError::new(
                        ln,
                        tokens[0].0,
                        "`dim` must come first and only once",
                    ));
                }
                let (col, v) = *tokens
                    .get(1)
                    .ok_or_else(|| ParseError::new(ln, tokens[0].0 + 3, "`dim` needs a value"))?;
                dim = v
                    .parse()
                    .ok()
                    .filter(|d| (1..=MAX_DIM).contains(d))
                    .ok_or_else(|| {
                        ParseError::new(
                            ln,
                            col,
                            format!("dimension must be in 1..={MAX_DIM}, got `{v}`"),
                        )
                    })?;
                dim_seen = true;
                continue;
            }
            if tokens.len() != 4 {
                let col = tokens.get(4).map_or(tokens[0].0, |t| t.0);
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("expected `i j k value`, found {} fields", tokens.len()),
                ));
            }
            let mut idx = [0usize; 3];
            for (slot, (col, t)) in idx.iter_mut().zip(&tokens[..3]) {
                let v: usize = t
                    .parse()
                    .map_err(|_| ParseError::new(ln, *col, format!("invalid index `{t}`")))?;
                if v == 0 {
                    return Err(ParseError::new(ln, *col, "indices are 1-based"));
                }
                *slot = v - 1;
            }
            if idx[0] == idx[1] {
                return Err(ParseError::new(
                    ln,
                    tokens[1].0,
                    "c^k_ii must vanish; i = j",
                ));
            }
            let value = scalar::parse(tokens[3].1).map_err(|e| e.at(ln, tokens[3].0))?;
            raw.push((idx, value, ln, tokens[0].0));
        }
        let mut entries = Vec::new();
        let mut seen: std::collections::HashMap<(usize, usize, usize), Scalar> = Default::default();
        for ([i, j, k], v, ln, col) in raw {
            if let Some(bad) = [i, j, k].into_iter().find(|&x| x >= dim) {
                return Err(ParseError::new(
                    ln,
                    col,
                    format!("index {} exceeds dimension {dim}", bad + 1),
                ));
            }
            for (key, val) in [((i, j, k), v.clone()), ((j, i, k), -v.clone())] {
                if let Some(prev) = seen.get(&key) {
                    if *prev != val {
                        return Err(ParseError::new(
                            ln,
                            col,
                            format!(
                                "contradicts an earlier value for c^{}_{}{}",
                                key.2 + 1,
                                key.0 + 1,
                                key.1 + 1
                            ),
                        ));
                    }
                }
                seen.insert(key, val);
            }
            entries.push((i, j, k, v));
        }
        Ok(Self { dim, entries })
    }

    pub fn into_algebra(self) -> Result<LieAlgebraData> {
        LieAlgebraData::from_entries(self.dim, &self.entries)
    }
}

/// Invariant metric connection, `Γ_ijk = ⟨∇_{eᵢ}eⱼ, e_k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantConnection {
    pub algebra: LieAlgebraData,
    pub torsion: Form,
    gamma: Vec<Scalar>,
}

impl InvariantConnection {
    /// Koszul formula: `Γ_ijk = ½(c_ijk - c_jki + c_kij)`.
    pub fn levi_civita(algebra: &LieAlgebraData) -> Self {
        let n = algebra.dim();
        let half = scalar::ratio(1, 2);
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    gamma.push(
                        &half * (algebra.c(i, j, k) - algebra.c(j, k, i) + algebra.c(k, i, j)),
                    );
                }
            }
        }
        Self {
            algebra: algebra.clone(),
            torsion: Form::zero(n, 3),
            gamma,
        }
    }

    /// `∇ = ∇^g + ½T(X, Y, -)`.
    pub fn with_torsion(algebra: &LieAlgebraData, torsion: &Form) -> Result<Self> {
        let n = algebra.dim();
        if torsion.dim() != n {
            return Err(Error::DimensionMismatch(torsion.dim(), n));
        }
        if torsion.degree() != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                found: torsion.degree(),
            });
        }
        let mut conn = Self::levi_civita(algebra);
        let half = scalar::ratio(1, 2);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = torsion.coeff(&[i, j, k]);
                    if !t.is_zero() {
                        conn.gamma[(i * n + j) * n + k] += &half * t;
                    }
                }
            }
        }
        conn.torsion = torsion.clone();
        Ok(conn)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.gamma[(i * n + j) * n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Zero::is_zero)
    }

    /// `A_i` with `∇_{eᵢ} v = A_i v` on constant components.
    pub fn connection_matrix(&self, i: usize) -> QMatrix {
        let n = self.dim();
        QMatrix::from_fn(n, n, |k, j| self.gamma(i, j, k).clone())
    }

    /// `Γ_ijk + Γ_ikj` should vanish.
    pub fn is_metric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| (self.gamma(i, j, k) + self.gamma(i, k, j)).is_zero()))
        })
    }

    /// `T(eᵢ,eⱼ,e_k) = Γ_ijk - Γ_jik - c_ijk` as a trilinear array.
    pub fn torsion_tensor(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.gamma(i, j, k) - self.gamma(j, i, k) - self.algebra.c(i, j, k)
    }

    /// The torsion as a 3-form, when it is totally skew.
    pub fn torsion_form(&self) -> Option<Form> {
        let n = self.dim();
        let mut f = Form::zero(n, 3);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = self.torsion_tensor(i, j, k);
                    if t != self.torsion_tensor(j, k, i) || t != -self.torsion_tensor(j, i, k) {
                        return None;
                    }
                    if i < j && j < k {
                        f += &Form::term(n, &[i, j, k], t);
                    }
                }
            }
        }
        Some(f)
    }

    /// `∇_{eᵢ} α` for an invariant form.
    pub fn covariant_derivative(&self, i: usize, alpha: &Form) -> Form {
        let n = self.dim();
        if alpha.degree() == 0 {
            return Form::zero(n, 0);
        }
        let images: Vec<Form> = (0..n)
            .map(|j| {
                let mut f = Form::zero(n, 1);
                for k in 0..n {
                    f += &Form::term(n, &[k], self.gamma(i, j, k).clone());
                }
                f
            })
            .collect();
        alpha.extend_derivation(&images)
    }

    /// `R(eᵢ, eⱼ)` as a matrix acting on components.
    pub fn curvature_operator(&self, i: usize, j: usize) -> QMatrix {
        let n = self.dim();
        let ai = self.connection_matrix(i);
        let aj = self.connection_matrix(j);
        let mut r = ai.commutator(&aj);
        for k in 0..n {
            let c = self.algebra.c(i, j, k);
            if !c.is_zero() {
                r = r.sub(&self.connection_matrix(k).scale(c));
            }
        }
        r
    }

    pub fn curvature(&self) -> CurvatureData {
        let n = self.dim();
        let r: Vec<QMatrix> = (0..n * n)
            .map(|ij| self.curvature_operator(ij / n, ij % n))
            .collect();
        let ric_nabla = ricci_from_operators(n, &r);
        let lc = Self::levi_civita(&self.algebra);
        let r_lc: Vec<QMatrix> = (0..n * n)
            .map(|ij| lc.curvature_operator(ij / n, ij % n))
            .collect();
        let ric_g = ricci_from_operators(n, &r_lc);
        let scal_g = ric_g.trace();
        CurvatureData {
            dim: n,
            r,
            ric_nabla,
            ric_g,
            scal_g,
        }
    }

    /// Infinitesimal holonomy algebra: the span of the curvature operators
    /// closed under `[A_k, ·]` and under brackets.
    pub fn holonomy_algebra(&self) -> HolonomyAlgebra {
        let n = self.dim();
        let flat = |m: &QMatrix| m.entries().to_vec();
        let mut span = Span::new(n * n);
        let mut basis: Vec<QMatrix> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let r = self.curvature_operator(i, j);
                if span.insert(&flat(&r)) {
                    basis.push(r);
                }
            }
        }
        let conn: Vec<QMatrix> = (0..n).map(|k| self.connection_matrix(k)).collect();
        let mut frontier = 0;
        while frontier < basis.len() {
            let x = basis[frontier].clone();
            frontier += 1;
            let mut candidates: Vec<QMatrix> = conn.iter().map(|a| a.commutator(&x)).collect();
            candidates.extend(basis.iter().map(|y| x.commutator(y)));
            for m in candidates {
                if span.insert(&flat(&m)) {
                    basis.push(m);
                }
            }
        }
        HolonomyAlgebra { basis }
    }

    /// Invariant fields with `∇θ = 0`, i.e. the common kernel of the `A_i`.
    pub fn parallel_fields(&self) -> ParallelFields {
        let n = self.dim();
        let stacked = QMatrix::from_fn(n * n, n, |r, c| {
            self.connection_matrix(r / n)[(r % n, c)].clone()
        });
        let basis = stacked.nullspace();
        let d_theta_is_hook: Vec<bool> = basis
            .iter()
            .map(|v| {
                let theta = Form::from_vector(v);
                self.algebra.ce_d(&theta) == self.torsion.hook_vec(v)
            })
            .collect();
        ParallelFields {
            basis,
            d_theta_is_hook,
        }
    }

    /// Residuals of the parallel-spinor integrability conditions:
    /// `(X⨼dT + 2∇_X T)·Ψ` per frame vector, `(3dT - 2σ_T)·Ψ` and
    /// `T²·Ψ - ‖T‖²Ψ`.
    pub fn integrability_residual(
        &self,
        rep: &CliffordRep,
        psi: &Spinor,
    ) -> Result<IntegrabilityResidual> {
        let n = self.dim();
        if n != 7 {
            return Err(Error::UnsupportedDimension(n, "7".into()));
        }
        let t = &self.torsion;
        let dt = self.algebra.ce_d(t);
        let per_vector = (0..n)
            .map(|i| {
                let f = &dt.hook_basis(i) + &self.covariant_derivative(i, t).scale(&scalar::int(2));
                rep.act(&f, psi)
            })
            .collect::<Result<Vec<_>>>()?;
        let sigma = t.sigma_t()?;
        let four = &dt.scale(&scalar::int(3)) - &sigma.scale(&scalar::int(2));
        let sigma_residual = rep.act(&four, psi)?;
        let tpsi = rep.act(t, psi)?;
        let square_residual = &rep.act(t, &tpsi)? - &psi.scale(&t.norm2());
        Ok(IntegrabilityResidual {
            per_vector,
            sigma_residual,
            square_residual,
        })
    }
}

fn ricci_from_operators(n: usize, r: &[QMatrix]) -> QMatrix {
    // Ric_jk = Σ_i ⟨R(e_i, e_j) e_k, e_i⟩ = Σ_i R(e_i,e_j)[i][k]
    QMatrix::from_fn(n, n, |j, k| {
        (0..n).fold(Scalar::zero(), |acc, i| acc + &r[i * n + j][(i, k)])
    })
}

/// `Ric^g_ab = ¼ Σ_ij T_aij T_bij`.
pub fn ric_from_torsion(t: &Form) -> Result<QMatrix> {
    if t.degree() != 3 {
        return Err(Error::WrongDegree {
            expected: 3,
            found: t.degree(),
        });
    }
    let n = t.dim();
    let hooks: Vec<Form> = (0..n).map(|a| t.hook_basis(a)).collect();
    // Σ_ij T_aij T_bij = 2 (e_a⨼T, e_b⨼T)
    Ok(QMatrix::from_fn(n, n, |a, b| {
        hooks[a].inner(&hooks[b]) * scalar::ratio(1, 2)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    pub dim: usize,
    /// `R(eᵢ,eⱼ)` at index `i * n + j`.
    pub r: Vec<QMatrix>,
    pub ric_nabla: QMatrix,
    pub ric_g: QMatrix,
    pub scal_g: Scalar,
}

impl CurvatureData {
    pub fn is_flat(&self) -> bool {
        self.r.iter().all(QMatrix::is_zero)
    }

    /// `⟨R(eᵢ,eⱼ)e_k, e_l⟩`.
    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.r[i * self.dim + j][(l, k)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyAlgebra {
    pub basis: Vec<QMatrix>,
}

impl HolonomyAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelFields {
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<Vec<Scalar>>,
    /// `dθ = θ⨼T` for each basis field.
    pub d_theta_is_hook: Vec<bool>,
}

fn serialize_basis<S: serde::Serializer>(
    b: &[Vec<Scalar>],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(
        b.iter()
            .map(|v| v.iter().map(scalar::format).collect::<Vec<_>>()),
    )
}

impl ParallelFields {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityResidual {
    pub per_vector: Vec<Spinor>,
    pub sigma_residual: Spinor,
    pub square_residual: Spinor,
}

impl IntegrabilityResidual {
    pub fn is_zero(&self) -> bool {
        self.per_vector.iter().all(Spinor::is_zero)
            && self.sigma_residual.is_zero()
            && self.square_residual.is_zero()
    }
}

/// `vᵀ M v`.
pub fn quadratic_form(m: &QMatrix, v: &[Scalar]) -> Scalar {
    crate::linalg::dot(v, &m.mul_vec(v))
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn su2_r4(lambda: i64) -> LieAlgebraData {
        LieAlgebraData::r4_su2(&int(lambda))
    }

    #[test]
    fn ce_d_examples() {
        let g = su2_r4(2);
        let d7 = g.ce_d(&Form::one_form(7, 6));
        assert_eq!(d7, Form::term(7, &[4, 5], int(-2)));
        let ab = LieAlgebraData::abelian(7);
        assert!(ab.ce_d(&Form::basis(7, &[0, 3])).is_zero());
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [e1,e2] = e3, [e3,e1] = e1: the Jacobi sum on (e1,e2,e3) is e3
        let r = LieAlgebraData::from_entries(3, &[(0, 1, 2, int(1)), (2, 0, 0, int(1))]);
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn codiff_examples() {
        let g = su2_r4(1);
        assert!(g.codiff(&Form::one_form(7, 6)).is_zero());
        let ab = LieAlgebraData::abelian(7);
        assert!(ab.codiff(&Form::basis(7, &[1, 2, 3])).is_zero());
    }

    #[test]
    fn codiff_is_adjoint_of_d() {
        let g = su2_r4(3);
        let alpha = Form::parse("+1 e15 -2 e67 +1/2 e56").unwrap();
        for beta in crate::multilinear::basis_forms(7, 3) {
            assert_eq!(g.ce_d(&alpha).inner(&beta), alpha.inner(&g.codiff(&beta)));
        }
    }

    #[test]
    fn levi_civita_examples() {
        let ab = LieAlgebraData::abelian(5);
        assert!(InvariantConnection::levi_civita(&ab).is_zero());
        let g = su2_r4(1);
        let lc = InvariantConnection::levi_civita(&g);
        // ∇_X Y = ½[X,Y] for a bi-invariant metric
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    assert_eq!(*lc.gamma(i, j, k), ratio(1, 2) * g.c(i, j, k));
                    assert!(lc.torsion_tensor(i, j, k).is_zero());
                }
            }
        }
        assert!(lc.is_metric());
    }

    #[test]
    fn cartan_schouten_flatness() {
        let g = su2_r4(1);
        let cartan = g.cartan_form().unwrap();
        let minus = InvariantConnection::with_torsion(&g, &-&cartan).unwrap();
        assert!(minus.is_zero());
        assert!(minus.curvature().is_flat());
        assert_eq!(minus.parallel_fields().dim(), 7);
        assert_eq!(minus.holonomy_algebra().dim(), 0);
        let plus = InvariantConnection::with_torsion(&g, &cartan).unwrap();
        assert!(plus.curvature().is_flat());
        assert_eq!(plus.parallel_fields().dim(), 4);
        assert_eq!(plus.torsion_form().unwrap(), cartan);
    }

    #[test]
    fn levi_civita_holonomy_of_su2() {
        let lc = InvariantConnection::levi_civita(&su2_r4(1));
        assert_eq!(lc.holonomy_algebra().dim(), 3);
    }

    #[test]
    fn ric_from_torsion_example() {
        let mu = int(3);
        let t = Form::term(7, &[4, 5, 6], mu.clone());
        let r = ric_from_torsion(&t).unwrap();
        let half = &mu * &mu * ratio(1, 2);
        for a in 0..7 {
            assert_eq!(r[(a, a)], if a >= 4 { half.clone() } else { int(0) });
        }
        assert_eq!(r.trace(), ratio(3, 2) * t.norm2());
    }

    #[test]
    fn algebra_file_parsing() {
        let f = AlgebraFile::parse("dim 3\n1 2 3 1\n2 3 1 1\n3 1 2 1 # so(3)\n").unwrap();
        let g = f.into_algebra().unwrap();
        assert_eq!(*g.c(1, 0, 2), int(-1));
        let e = AlgebraFile::parse("1 2 3 1\n2 1 3 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = AlgebraFile::parse("1 2 x 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = AlgebraFile::parse("dim 3\n1 2 4 1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn lie_derivative_abelian() {
        let ab = LieAlgebraData::abelian(7);
        let x = unit_vector(7, 2);
        assert!(ab.lie_derivative(&x, &Form::basis(7, &[0, 2])).is_zero());
    }

    #[test]
    fn integrability_on_flat_cartan_example() {
        let g = su2_r4(1)
            .relabel(&LieAlgebraData::R4_SU2_PLACEMENT)
            .unwrap();
        let rep = CliffordRep::build().unwrap();
        let cartan = g.cartan_form().unwrap();
        let conn = InvariantConnection::with_torsion(&g, &-&cartan).unwrap();
        let psi0 = Spinor::unit(0);
        let res = conn.integrability_residual(&rep, &psi0).unwrap();
        assert!(res.per_vector.iter().all(Spinor::is_zero));
        assert!(res.sigma_residual.is_zero());
        assert!(res.square_residual.is_zero());
        let ab = InvariantConnection::levi_civita(&LieAlgebraData::abelian(7));
        assert!(ab
            .integrability_residual(&rep, &Spinor::unit(3))
            .unwrap()
            .is_zero());
    }
}
