//! Orthonormal coframes on a chart and their Cartan-structure curvature.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use super::forms::FrameForm;
use crate::error::{Error, Result};
use crate::multilinear::basis_blades;

type MatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
type DerivFn = Arc<dyn Fn(&[f64], usize) -> DMatrix<f64> + Send + Sync>;

/// `fⁱ = Σⱼ A_ij(p) dxʲ`, declared orthonormal.
#[derive(Clone)]
pub struct CoframeField {
    pub dim: usize,
    pub domain: Vec<(f64, f64)>,
    /// Central finite-difference step.
    pub step: f64,
    map: MatrixFn,
    derivative: Option<DerivFn>,
}

impl fmt::Debug for CoframeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoframeField")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("step", &self.step)
            .field("closed_derivative", &self.derivative.is_some())
            .finish()
    }
}

pub const DEFAULT_STEP: f64 = 1e-5;

impl CoframeField {
    pub fn new(
        domain: Vec<(f64, f64)>,
        map: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim: domain.len(),
            domain,
            step: DEFAULT_STEP,
            map: Arc::new(map),
            derivative: None,
        }
    }

    /// Supplies `∂A/∂x^k` in closed form.
    pub fn with_derivative(
        mut self,
        d: impl Fn(&[f64], usize) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.step = h;
        self
    }

    pub fn has_closed_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn matrix(&self, p: &[f64]) -> DMatrix<f64> {
        (self.map)(p)
    }

    pub fn derivative(&self, p: &[f64], k: usize) -> DMatrix<f64> {
        match &self.derivative {
            Some(d) => d(p, k),
            None => self.derivative_fd(p, k, self.step),
        }
    }

    pub fn derivative_fd(&self, p: &[f64], k: usize, h: f64) -> DMatrix<f64> {
        let (plus, minus) = shifted(p, k, h);
        (self.matrix(&plus) - self.matrix(&minus)) / (2.0 * h)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p.iter()
                .zip(&self.domain)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Frame vectors `e_a = Σⱼ B_ja ∂ⱼ`, `B = A⁻¹`.
    pub fn inverse(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let a = self.matrix(p);
        let lu = a.clone().lu();
        let det = lu.determinant();
        if !det.is_finite() || det.abs() < 1e-14 * a.norm().powi(self.dim as i32).max(1e-300) {
            return Err(Error::SingularCoframe(p.to_vec()));
        }
        lu.try_inverse()
            .ok_or_else(|| Error::SingularCoframe(p.to_vec()))
    }
}

pub(crate) fn shifted(p: &[f64], k: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    let mut plus = p.to_vec();
    let mut minus = p.to_vec();
    plus[k] += h;
    minus[k] -= h;
    (plus, minus)
}

/// `c[l][a][b] = cˡ_ab` with `dfˡ = -½ Σ cˡ_ab fᵃ∧fᵇ`, i.e. `[e_a, e_b] = Σ cˡ_ab e_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureFunctions {
    pub dim: usize,
    pub c: Vec<f64>,
}

impl StructureFunctions {
    pub fn get(&self, l: usize, a: usize, b: usize) -> f64 {
        self.c[(l * self.dim + a) * self.dim + b]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn structure_functions(cf: &CoframeField, p: &[f64]) -> Result<StructureFunctions> {
    let n = cf.dim;
    let b = cf.inverse(p)?;
    let da: Vec<DMatrix<f64>> = (0..n).map(|k| cf.derivative(p, k)).collect();
    // M^i_ab = Σ_kj ∂_k A_ij B_ka B_jb; dfⁱ = Σ_ab M^i_ab fᵃ∧fᵇ
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (k, dak) in da.iter().enumerate() {
            for j in 0..n {
                let d = dak[(i, j)];
                if d == 0.0 {
                    continue;
                }
                for a in 0..n {
                    for bb in 0..n {
                        m[(a, bb)] += d * b[(k, a)] * b[(j, bb)];
                    }
                }
            }
        }
        for a in 0..n {
            for bb in 0..n {
                c[(i * n + a) * n + bb] = -(m[(a, bb)] - m[(bb, a)]);
            }
        }
    }
    Ok(StructureFunctions { dim: n, c })
}

/// `Γ_ijk = ⟨∇_{e_i} e_j, e_k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub dim: usize,
    pub gamma: Vec<f64>,
}

impl Connection {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// Torsion `T(e_i, e_j, e_k) = Γ_ijk - Γ_jik - c^k_ij`.
    pub fn torsion(&self, s: &StructureFunctions, i: usize, j: usize, k: usize) -> f64 {
        self.get(i, j, k) - self.get(j, i, k) - s.get(k, i, j)
    }

    /// Adds `½T_ijk`.
    pub fn with_torsion(&self, t: &FrameForm) -> Connection {
        let n = self.dim;
        let mut gamma = self.gamma.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    gamma[(i * n + j) * n + k] += 0.5 * t.eval(&[i, j, k]);
                }
            }
        }
        Connection { dim: n, gamma }
    }
}

/// Koszul formula `Γ_ijk = ½(c_ijk - c_jki + c_kij)` with `c_ijk = cᵏ_ij`.
pub fn levi_civita_cartan(s: &StructureFunctions) -> Connection {
    let n = s.dim;
    let c = |i, j, k| s.get(k, i, j);
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gamma[(i * n + j) * n + k] = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
            }
        }
    }
    Connection { dim: n, gamma }
}

/// Connection data at a point: inverse coframe, structure functions,
/// Levi-Civita and (optionally) the torsion connection.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub b: DMatrix<f64>,
    pub structure: StructureFunctions,
    pub levi_civita: Connection,
}

impl PointGeometry {
    pub fn at(cf: &CoframeField, p: &[f64]) -> Result<Self> {
        let structure = structure_functions(cf, p)?;
        Ok(Self {
            b: cf.inverse(p)?,
            levi_civita: levi_civita_cartan(&structure),
            structure,
        })
    }
}

/// Curvature `R_ijkm = ⟨R(e_i,e_j)e_k, e_m⟩`, Ricci
/// `Ric_jk = Σᵢ R_ijki` and its eigenvalues.
#[derive(Debug, Clone)]
pub struct CurvaturePoint {
    pub dim: usize,
    pub r: Vec<f64>,
    pub ricci: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub asymmetry: f64,
}

impl CurvaturePoint {
    pub fn get(&self, i: usize, j: usize, k: usize, m: usize) -> f64 {
        let n = self.dim;
        self.r[((i * n + j) * n + k) * n + m]
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scalar(&self) -> f64 {
        self.ricci.trace()
    }
}

/// Threshold for the Ricci symmetry check.
pub const RICCI_SYMMETRY_TOL: f64 = 1e-8;

/// Riemann and Ricci tensors of the Levi-Civita connection of `cf`.
pub fn riemann_ricci(cf: &CoframeField, p: &[f64]) -> Result<CurvaturePoint> {
    let c = curvature_of(cf, p, None)?;
    if c.asymmetry > RICCI_SYMMETRY_TOL {
        return Err(Error::RicciAsymmetry(c.asymmetry));
    }
    Ok(c)
}

/// Curvature of `∇ = ∇^g + ½T` (or of `∇^g` when `torsion` is `None`).
/// Derivatives of `Γ` along frame vectors come from central differences in
/// the chart coordinates.
pub fn curvature_of(
    cf: &CoframeField,
    p: &[f64],
    torsion: Option<&dyn Fn(&[f64]) -> FrameForm>,
) -> Result<CurvaturePoint> {
    let n = cf.dim;
    let conn = |q: &[f64]| -> Result<Connection> {
        let s = structure_functions(cf, q)?;
        let lc = levi_civita_cartan(&s);
        Ok(match torsion {
            Some(t) => lc.with_torsion(&t(q)),
            None => lc,
        })
    };
    let geo = PointGeometry::at(cf, p)?;
    let g0 = conn(p)?;
    let h = cf.step;
    // ∂_x Γ for each chart coordinate x
    let mut dgamma = Vec::with_capacity(n);
    for x in 0..n {
        let (plus, minus) = shifted(p, x, h);
        let gp = conn(&plus)?;
        let gm = conn(&minus)?;
        dgamma.push(
            gp.gamma
                .iter()
                .zip(&gm.gamma)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect::<Vec<f64>>(),
        );
    }
    // e_i(Γ) = Σ_x B_xi ∂_x Γ
    let e_deriv =
        |i: usize, idx: usize| -> f64 { (0..n).map(|x| geo.b[(x, i)] * dgamma[x][idx]).sum() };
    let gi = |i, j, k| (i * n + j) * n + k;
    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let mut v = e_deriv(i, gi(j, k, m)) - e_deriv(j, gi(i, k, m));
                    for l in 0..n {
                        v += g0.get(j, k, l) * g0.get(i, l, m) - g0.get(i, k, l) * g0.get(j, l, m);
                        v -= geo.structure.get(l, i, j) * g0.get(l, k, m);
                    }
                    r[((i * n + j) * n + k) * n + m] = v;
                }
            }
        }
    }
    let ricci = DMatrix::from_fn(n, n, |j, k| {
        (0..n).map(|i| r[((i * n + j) * n + k) * n + i]).sum()
    });
    let asymmetry = (&ricci - ricci.transpose()).amax();
    let sym = (&ricci + ricci.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |row, col| eig.eigenvectors[(row, order[col])]);
    Ok(CurvaturePoint {
        dim: n,
        r,
        ricci,
        eigenvalues,
        eigenvectors,
        asymmetry,
    })
}

/// `dα` at `p` for a form given by its frame coefficients as a function of
/// the point:
/// `dα(e₀…e_k) = Σ_r (-1)^r e_r(α(…ê_r…)) + Σ_{r<s} (-1)^{r+s} α([e_r,e_s], …ê_r…ê_s…)`.
pub fn exterior_derivative(
    cf: &CoframeField,
    p: &[f64],
    alpha: &dyn Fn(&[f64]) -> FrameForm,
) -> Result<FrameForm> {
    let n = cf.dim;
    let geo = PointGeometry::at(cf, p)?;
    let a0 = alpha(p);
    let k = a0.degree;
    let h = cf.step;
    let mut da_coord = Vec::with_capacity(n);
    for x in 0..n {
        let (plus, minus) = shifted(p, x, h);
        da_coord.push(alpha(&plus).sub(&alpha(&minus)).scale(1.0 / (2.0 * h)));
    }
    let e_deriv = |i: usize, idx: &[usize]| -> f64 {
        (0..n).map(|x| geo.b[(x, i)] * da_coord[x].eval(idx)).sum()
    };
    let mut out = FrameForm::zero(n, k + 1);
    for blade in basis_blades(n, k + 1) {
        let idx = crate::multilinear::blade_indices(blade);
        let mut v = 0.0;
        for r in 0..idx.len() {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != r)
                .map(|(_, &x)| x)
                .collect();
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            v += sign * e_deriv(idx[r], &rest);
        }
        for r in 0..idx.len() {
            for s in r + 1..idx.len() {
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != r && q != s)
                    .map(|(_, &x)| x)
                    .collect();
                let sign = if (r + s) % 2 == 0 { 1.0 } else { -1.0 };
                for l in 0..n {
                    let cl = geo.structure.get(l, idx[r], idx[s]);
                    if cl != 0.0 {
                        let mut args = vec![l];
                        args.extend(&rest);
                        v += sign * cl * a0.eval(&args);
                    }
                }
            }
        }
        if v != 0.0 {
            out.terms.insert(blade, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: usize) -> CoframeField {
        CoframeField::new(vec![(-1.0, 1.0); n], move |_| DMatrix::identity(n, n))
    }

    pub(crate) fn sphere(r: f64) -> CoframeField {
        CoframeField::new(vec![(0.1, 3.0), (-3.0, 3.0)], move |p| {
            DMatrix::from_row_slice(2, 2, &[r, 0.0, 0.0, r * p[0].sin()])
        })
        .with_derivative(move |p, k| {
            let mut d = DMatrix::zeros(2, 2);
            if k == 0 {
                d[(1, 1)] = r * p[0].cos();
            }
            d
        })
    }

    #[test]
    fn flat_is_flat() {
        let cf = flat(4);
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(structure_functions(&cf, &p).unwrap().max_abs(), 0.0);
        let c = riemann_ricci(&cf, &p).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn sphere_structure_and_ricci() {
        let r = 2.0;
        let cf = sphere(r);
        let p = [0.7, 0.3];
        let s = structure_functions(&cf, &p).unwrap();
        // df² = r cosθ dθ∧dφ = (cotθ / r) f¹∧f², so c²₁₂ = -cotθ / r
        let want = -(p[0].cos() / p[0].sin()) / r;
        assert!((s.get(1, 0, 1) - want).abs() < 1e-9);
        assert!((s.get(1, 0, 1) + s.get(1, 1, 0)).abs() < 1e-15);
        let lc = levi_civita_cartan(&s);
        for (i, j, k) in [(0, 1, 0), (1, 0, 1), (1, 1, 0)] {
            assert!(lc.torsion(&s, i, j, k).abs() < 1e-12);
        }
        let c = riemann_ricci(&cf, &p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 / (r * r) } else { 0.0 };
                assert!((c.ricci[(i, j)] - want).abs() < 1e-8, "{}", c.ricci);
            }
        }
    }

    #[test]
    fn d_squared_vanishes_on_sphere_coframe() {
        let cf = sphere(1.5).with_step(1e-4);
        let f2 = |_: &[f64]| FrameForm::term(2, &[1], 1.0);
        let d = exterior_derivative(&cf, &[0.9, 0.1], &f2).unwrap();
        let want = 0.9f64.cos() / 0.9f64.sin() / 1.5;
        assert!((d.eval(&[0, 1]) - want).abs() < 1e-9);
    }

    #[test]
    fn singular_coframe() {
        let cf = CoframeField::new(vec![(-1.0, 1.0)], |_| DMatrix::zeros(1, 1));
        assert!(matches!(cf.inverse(&[0.0]), Err(Error::SingularCoframe(_))));
    }
}
