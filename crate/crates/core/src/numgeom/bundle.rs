//! The line bundle `N⁵ → Z⁴` with connection form `η = ds + A`, `dA = Ω`,
//! and torsion `T = Ω∧η`, in chart coordinates `(x¹…x⁴, s)`.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::forms::FrameForm;
use super::frame::{curvature_of, exterior_derivative, riemann_ricci, CoframeField, PointGeometry};
use super::quadrature::gauss_legendre;
use crate::check::{all_pass, Check};
use crate::error::{Error, Result};

const GL_NODES: usize = 24;
const GL_PANELS: usize = 4;

/// Radial-homotopy potential `A = ∫₀¹ t·Ω_{p₀+tv}(v, ·) dt`, `v = p - p₀`,
/// for the frame-constant 2-form `Ω = 2a f¹∧f²` of a 4-dimensional coframe.
#[derive(Clone)]
pub struct Potential {
    base: CoframeField,
    a: f64,
    origin: Vec<f64>,
    nodes: Vec<(f64, f64)>,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("a", &self.a)
            .field("origin", &self.origin)
            .finish()
    }
}

impl Potential {
    pub fn new(base: CoframeField, a: f64, origin: Vec<f64>) -> Self {
        let (x, w) = gauss_legendre(GL_NODES);
        let width = 1.0 / GL_PANELS as f64;
        let nodes = (0..GL_PANELS)
            .flat_map(|k| {
                let lo = k as f64 * width;
                x.iter()
                    .zip(&w)
                    .map(move |(x, w)| (lo + width * x, width * w))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self {
            base,
            a,
            origin,
            nodes,
        }
    }

    /// Coordinate components `Ω_jk = 2a(A₀ⱼA₁ₖ - A₀ₖA₁ⱼ)`.
    pub fn omega_coords(&self, p: &[f64]) -> DMatrix<f64> {
        let m = self.base.matrix(p);
        let n = self.base.dim;
        DMatrix::from_fn(n, n, |j, k| {
            2.0 * self.a * (m[(0, j)] * m[(1, k)] - m[(0, k)] * m[(1, j)])
        })
    }

    fn d_omega_coords(&self, p: &[f64], l: usize) -> DMatrix<f64> {
        let m = self.base.matrix(p);
        let d = self.base.derivative(p, l);
        let n = self.base.dim;
        DMatrix::from_fn(n, n, |j, k| {
            2.0 * self.a
                * (d[(0, j)] * m[(1, k)] + m[(0, j)] * d[(1, k)]
                    - d[(0, k)] * m[(1, j)]
                    - m[(0, k)] * d[(1, j)])
        })
    }

    fn along(&self, p: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let v: Vec<f64> = p.iter().zip(&self.origin).map(|(x, o)| x - o).collect();
        let q = self.origin.iter().zip(&v).map(|(o, v)| o + t * v).collect();
        (q, v)
    }

    pub fn value(&self, p: &[f64]) -> Vec<f64> {
        let n = self.base.dim;
        let mut out = vec![0.0; n];
        for &(t, w) in &self.nodes {
            let (q, v) = self.along(p, t);
            let om = self.omega_coords(&q);
            for (k, o) in out.iter_mut().enumerate() {
                let s: f64 = (0..n).map(|j| v[j] * om[(j, k)]).sum();
                *o += w * t * s;
            }
        }
        out
    }

    /// `∂_l A_k = ∫₀¹ [t Ω_lk(q) + t² Σⱼ vʲ ∂_l Ω_jk(q)] dt`.
    pub fn derivative(&self, p: &[f64], l: usize) -> Vec<f64> {
        let n = self.base.dim;
        let mut out = vec![0.0; n];
        for &(t, w) in &self.nodes {
            let (q, v) = self.along(p, t);
            let om = self.omega_coords(&q);
            let dom = self.d_omega_coords(&q, l);
            for (k, o) in out.iter_mut().enumerate() {
                let s: f64 = (0..n).map(|j| v[j] * dom[(j, k)]).sum();
                *o += w * (t * om[(l, k)] + t * t * s);
            }
        }
        out
    }

    /// `max |∂ⱼAₖ - ∂ₖAⱼ - Ω_jk|`.
    pub fn curvature_residual(&self, p: &[f64]) -> f64 {
        let n = self.base.dim;
        let d: Vec<Vec<f64>> = (0..n).map(|l| self.derivative(p, l)).collect();
        let om = self.omega_coords(p);
        let mut r: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                r = r.max((d[j][k] - d[k][j] - om[(j, k)]).abs());
            }
        }
        r
    }
}

/// One of the five hypotheses, evaluated at sample points.
#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub condition: u8,
    pub description: String,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct BundleData {
    pub a: f64,
    pub base: CoframeField,
    pub potential: Potential,
    pub total: CoframeField,
    /// `Ω = 2a f¹∧f²` on the base frame.
    pub omega: FrameForm,
    /// `T = Ω∧η = 2a f¹∧f²∧η` on the total frame.
    pub torsion: FrameForm,
    pub hypotheses: Vec<Hypothesis>,
}

/// Total-space coframe `(f¹…f⁴, η)` with `η = ds + Σ Aⱼ dxʲ`.
fn total_coframe(base: &CoframeField, pot: &Potential) -> CoframeField {
    let mut domain = base.domain.clone();
    domain.push(base.domain[1]);
    let (b1, p1) = (base.clone(), pot.clone());
    let (b2, p2) = (base.clone(), pot.clone());
    CoframeField::new(domain, move |p| {
        let m = b1.matrix(&p[..4]);
        let a = p1.value(&p[..4]);
        DMatrix::from_fn(5, 5, |i, j| match (i, j) {
            (4, 4) => 1.0,
            (4, j) => a[j],
            (_, 4) => 0.0,
            (i, j) => m[(i, j)],
        })
    })
    .with_derivative(move |p, k| {
        if k == 4 {
            return DMatrix::zeros(5, 5);
        }
        let d = b2.derivative(&p[..4], k);
        let da = p2.derivative(&p[..4], k);
        DMatrix::from_fn(5, 5, |i, j| match (i, j) {
            (_, 4) => 0.0,
            (4, j) => da[j],
            (i, j) => d[(i, j)],
        })
    })
    .with_step(base.step)
}

/// Frame-constant function wrapper.
fn constant(f: FrameForm) -> impl Fn(&[f64]) -> FrameForm {
    move |_| f.clone()
}

/// Evaluates the hypotheses on `base` with `Ω = 2a f¹∧f²` and builds the
/// bundle. Fails with the number of the first violated condition.
pub fn assemble_n5(
    base: &CoframeField,
    a: f64,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<BundleData> {
    if base.dim != 4 {
        return Err(Error::UnsupportedDimension(base.dim, "4".into()));
    }
    let origin: Vec<f64> = base.domain.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
    let potential = Potential::new(base.clone(), a, origin);
    let omega = FrameForm::term(4, &[0, 1], 2.0 * a);
    let target = 4.0 * a * a;
    let mut res = [0.0f64; 5];
    for p in samples {
        // (1) closed, coclosed, degenerate
        let d = exterior_derivative(base, p, &constant(omega.clone()))?.max_abs();
        let dstar = exterior_derivative(base, p, &constant(omega.hodge()))?.max_abs();
        let sq = omega.wedge(&omega).max_abs();
        res[0] = res[0].max(d).max(dstar).max(sq);

        // (2) E² = ker Ω and F² = E²⊥ integrable; Ω is frame-constant,
        // so both are spanned by constant frame vectors
        let om = DMatrix::from_fn(4, 4, |i, j| omega.eval(&[i, j]));
        let svd = SymmetricEigen::new(om.transpose() * &om);
        let (e_vecs, f_vecs): (Vec<usize>, Vec<usize>) =
            (0..4).partition(|&i| svd.eigenvalues[i] <= tol * (1.0 + target));
        let geo = PointGeometry::at(base, p)?;
        let bracket_leak = |inside: &[usize], outside: &[usize]| -> f64 {
            let mut m: f64 = 0.0;
            for &u in inside {
                for &v in inside {
                    for &w in outside {
                        let vu = svd.eigenvectors.column(u);
                        let vv = svd.eigenvectors.column(v);
                        let vw = svd.eigenvectors.column(w);
                        let mut s = 0.0;
                        for l in 0..4 {
                            for i in 0..4 {
                                for j in 0..4 {
                                    s += vu[i] * vv[j] * geo.structure.get(l, i, j) * vw[l];
                                }
                            }
                        }
                        m = m.max(s.abs());
                    }
                }
            }
            m
        };
        if a != 0.0 {
            if e_vecs.len() != 2 {
                return Err(Error::Hypothesis {
                    condition: 2,
                    detail: format!("kernel of Ω has dimension {}", e_vecs.len()),
                });
            }
            res[1] = res[1]
                .max(bracket_leak(&e_vecs, &f_vecs))
                .max(bracket_leak(&f_vecs, &e_vecs));
        }

        // (3) F² from Ricci eigenvectors; Ω = ±2a·vol(F²)
        // (4) Ricci eigenvalues {0, 0, 4a², 4a²}
        let ric = riemann_ricci(base, p)?;
        let ev = &ric.eigenvalues;
        let want = [0.0, 0.0, target, target];
        res[3] = res[3].max(
            ev.iter()
                .zip(want)
                .map(|(l, w)| (l - w).abs())
                .fold(0.0, f64::max),
        );
        if a != 0.0 {
            let v1 = ric.eigenvectors.column(2);
            let v2 = ric.eigenvectors.column(3);
            let proj_ric = v1 * v1.transpose() + v2 * v2.transpose();
            let proj_f = f_vecs.iter().fold(DMatrix::zeros(4, 4), |acc, &i| {
                let c = svd.eigenvectors.column(i);
                acc + c * c.transpose()
            });
            let value = (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| v1[i] * v2[j] * om[(i, j)])
                .sum::<f64>();
            let r3 = (proj_ric - proj_f)
                .amax()
                .max((value.abs() - 2.0 * a).abs());
            res[2] = res[2].max(r3);
        }

        // (5) Ω = dA for the constructed potential
        res[4] = res[4].max(potential.curvature_residual(p));
    }
    let descriptions = [
        "dΩ = 0, d*Ω = 0, Ω∧Ω = 0",
        "E² = ker Ω and F² = E²⊥ integrable",
        "Ω = 2a f₁∧f₂ on the Ricci eigenframe of F²",
        "Ric = 4a² on F², 0 on E²",
        "Ω is the curvature of η = ds + A",
    ];
    let hypotheses: Vec<Hypothesis> = (0..5)
        .map(|i| Hypothesis {
            condition: i as u8 + 1,
            description: descriptions[i].into(),
            max_residual: res[i],
            pass: res[i] < tol,
        })
        .collect();
    if let Some(h) = hypotheses.iter().find(|h| !h.pass) {
        return Err(Error::Hypothesis {
            condition: h.condition,
            detail: format!("{} (residual {:.3e})", h.description, h.max_residual),
        });
    }
    let total = total_coframe(base, &potential);
    Ok(BundleData {
        a,
        torsion: FrameForm::term(5, &[0, 1, 4], 2.0 * a),
        base: base.clone(),
        potential,
        total,
        omega,
        hypotheses,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StromingerSample {
    pub point: Vec<f64>,
    pub norm_t2: f64,
    pub d_t: f64,
    pub d_star_t: f64,
    pub nabla_eta: f64,
    pub ric_nabla: f64,
    pub oneill: f64,
    pub ric_g_eigenvalues: Vec<f64>,
    pub scal_residual: f64,
    pub r_nabla_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StromingerReport {
    pub a: f64,
    pub hypotheses: Vec<Hypothesis>,
    pub samples: Vec<StromingerSample>,
    pub checks: Vec<Check>,
}

impl StromingerReport {
    pub fn pass(&self) -> bool {
        all_pass(&self.checks)
    }
}

/// `¼ Σᵢⱼ T_aij T_bij`.
pub fn ric_from_torsion_f64(t: &FrameForm) -> DMatrix<f64> {
    let n = t.dim;
    let hooks: Vec<FrameForm> = (0..n).map(|a| t.hook(a)).collect();
    DMatrix::from_fn(n, n, |a, b| {
        let s: f64 = hooks[a]
            .terms
            .iter()
            .map(|(k, v)| v * hooks[b].terms.get(k).copied().unwrap_or(0.0))
            .sum();
        0.5 * s
    })
}

pub fn strominger_check(b: &BundleData, points: &[Vec<f64>], tol: f64) -> Result<StromingerReport> {
    let t = b.torsion.clone();
    let tf = constant(t.clone());
    let star_t = constant(t.hodge());
    let oneill_target = ric_from_torsion_f64(&t);
    let mut samples = Vec::new();
    for p in points {
        let geo = PointGeometry::at(&b.total, p)?;
        let nabla = geo.levi_civita.with_torsion(&t);
        let nabla_eta = (0..5)
            .flat_map(|i| (0..5).map(move |k| (i, k)))
            .map(|(i, k)| nabla.get(i, k, 4).abs())
            .fold(0.0, f64::max);
        let rn = curvature_of(&b.total, p, Some(&tf))?;
        let rg = curvature_of(&b.total, p, None)?;
        let scal_residual = (rg.scalar() - 1.5 * t.norm2()).abs();
        samples.push(StromingerSample {
            point: p.clone(),
            norm_t2: t.norm2(),
            d_t: exterior_derivative(&b.total, p, &tf)?.max_abs(),
            d_star_t: exterior_derivative(&b.total, p, &star_t)?.max_abs(),
            nabla_eta,
            ric_nabla: rn.ricci.amax(),
            oneill: (&rg.ricci - &oneill_target).amax(),
            ric_g_eigenvalues: rg.eigenvalues.clone(),
            scal_residual,
            r_nabla_max: rn.max_abs(),
        });
    }
    let max = |f: fn(&StromingerSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let a2 = 2.0 * b.a * b.a;
    let eig_err = samples
        .iter()
        .map(|s| {
            s.ric_g_eigenvalues
                .iter()
                .zip([0.0, 0.0, a2, a2, a2])
                .map(|(l, w)| (l - w).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let norm_err = samples
        .iter()
        .map(|s| (s.norm_t2 - 4.0 * b.a * b.a).abs())
        .fold(0.0, f64::max);
    let min_r = samples
        .iter()
        .map(|s| s.r_nabla_max)
        .fold(f64::INFINITY, f64::min);
    let fmt = |x: f64| format!("{x:.11e}");
    let mut checks = vec![
        Check::new("‖T‖² = 4a²", norm_err < 1e-8, fmt(norm_err)),
        Check::new("dT = 0", max(|s| s.d_t) < tol, fmt(max(|s| s.d_t))),
        Check::new(
            "d*T = 0",
            max(|s| s.d_star_t) < tol,
            fmt(max(|s| s.d_star_t)),
        ),
        Check::new(
            "∇η = 0",
            max(|s| s.nabla_eta) < tol,
            fmt(max(|s| s.nabla_eta)),
        ),
        Check::new(
            "Ric^∇ = 0",
            max(|s| s.ric_nabla) < tol,
            fmt(max(|s| s.ric_nabla)),
        ),
        Check::new(
            "O'Neill identity",
            max(|s| s.oneill) < tol,
            fmt(max(|s| s.oneill)),
        ),
        Check::new(
            "Ric^g eigenvalues {0², (2a²)³}",
            eig_err < tol,
            fmt(eig_err),
        ),
        Check::new(
            "Scal^g = (3/2)‖T‖²",
            max(|s| s.scal_residual) < tol,
            fmt(max(|s| s.scal_residual)),
        ),
    ];
    if b.a != 0.0 {
        checks.push(Check::new("max |R^∇| > 0.01", min_r > 0.01, fmt(min_r)));
    }
    Ok(StromingerReport {
        a: b.a,
        hypotheses: b.hypotheses.clone(),
        samples,
        checks,
    })
}

/// Kähler example → bundle → checks, with `u` from the configured solve.
pub fn run_theorem1(cfg: &super::kahler::KahlerConfig) -> Result<StromingerReport> {
    let sol = Arc::new(cfg.solve()?);
    let base = super::kahler::kahler_coframe(sol, cfg);
    let pts4 = cfg.sample_points(0);
    let bundle = assemble_n5(&base, cfg.a, &pts4, cfg.tolerance)?;
    let pts5 = cfg.sample_points(1);
    strominger_check(&bundle, &pts5, cfg.tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numgeom::kahler::{kahler_coframe, KahlerConfig};

    #[test]
    fn potential_of_flat_area_form() {
        let base = CoframeField::new(vec![(-1.0, 1.0); 4], |_| DMatrix::identity(4, 4));
        let pot = Potential::new(base, 0.5, vec![0.0; 4]);
        let p = [0.3, -0.2, 0.1, 0.4];
        // Ω = dx∧dy: radial potential ½(x dy - y dx)
        let a = pot.value(&p);
        assert!((a[0] - 0.1).abs() < 1e-14 && (a[1] - 0.15).abs() < 1e-14);
        assert!(pot.curvature_residual(&p) < 1e-14);
    }

    #[test]
    fn flat_base_fails_ricci_condition() {
        let base = CoframeField::new(vec![(-1.0, 1.0); 4], |_| DMatrix::identity(4, 4));
        let err = assemble_n5(&base, 0.5, &[vec![0.1, 0.2, 0.3, 0.4]], 1e-6).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Hypothesis {
                    condition: 3 | 4,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn kahler_bundle_a_zero_is_product() {
        let cfg = KahlerConfig {
            a: 0.0,
            samples: 2,
            ..KahlerConfig::default()
        };
        let r = run_theorem1(&cfg).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        assert!(r.samples.iter().all(|s| s.norm_t2 == 0.0));
    }

    #[test]
    fn kahler_bundle_half() {
        let cfg = KahlerConfig {
            samples: 2,
            ..KahlerConfig::default()
        };
        let sol = Arc::new(cfg.solve().unwrap());
        let base = kahler_coframe(sol, &cfg);
        let b = assemble_n5(&base, cfg.a, &cfg.sample_points(0), cfg.tolerance).unwrap();
        assert!(b.hypotheses.iter().all(|h| h.pass));
        let r = strominger_check(&b, &cfg.sample_points(1), cfg.tolerance).unwrap();
        assert!(r.pass(), "{:#?}", r.checks);
    }
}
