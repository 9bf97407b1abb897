//! The Kähler metric `eᵘx(dx² + dy²) + x dz² + x⁻¹(dt + y dz)²` with
//! `u = u(x)` solving the Liouville-type equation, in chart coordinates
//! `(x, y, z, t)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frame::{riemann_ricci, CoframeField, DEFAULT_STEP};
use super::liouville::{solve_liouville, LiouvilleSolution, Stencil};
use crate::error::{Error, Result};

/// Parameters shared by the Kähler example and the bundle construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KahlerConfig {
    pub a: f64,
    /// `[x₀, x₁]`, `x₀ > 0`.
    pub x_range: (f64, f64),
    /// `u(x₀), u(x₁)`.
    pub boundary: (f64, f64),
    /// Range used for each of `y, z, t` (and the fiber coordinate).
    pub box_range: (f64, f64),
    pub grid: usize,
    pub stencil: Stencil,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    /// Eigenvalue / residual tolerance.
    pub tolerance: f64,
    /// Fraction of each coordinate range kept clear of the edge when
    /// sampling.
    pub margin: f64,
}

impl Default for KahlerConfig {
    fn default() -> Self {
        Self {
            a: 0.5,
            x_range: (1.0, 2.0),
            boundary: (0.0, 0.0),
            box_range: (-1.0, 1.0),
            grid: 400,
            stencil: Stencil::Numerov,
            samples: 10,
            seed: 2024,
            step: DEFAULT_STEP,
            tolerance: 1e-6,
            margin: 0.05,
        }
    }
}

impl KahlerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.a >= 0.0) {
            return bad("a must be ≥ 0");
        }
        if !(self.x_range.0 > 0.0 && self.x_range.1 > self.x_range.0) {
            return bad("x range must satisfy 0 < x₀ < x₁");
        }
        if !(self.box_range.1 > self.box_range.0) {
            return bad("empty box range");
        }
        if !(self.tolerance > 0.0 && self.step > 0.0) {
            return bad("tolerance and step must be positive");
        }
        if !(0.0..0.5).contains(&self.margin) {
            return bad("margin must lie in [0, 0.5)");
        }
        if self.grid < 4 || self.samples == 0 {
            return bad("grid ≥ 4 and samples ≥ 1 required");
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LiouvilleSolution> {
        self.validate()?;
        solve_liouville(self.a, self.x_range, self.boundary, self.grid, self.stencil)
    }

    /// Uniform random points with the configured margin; `extra` further
    /// coordinates use the box range.
    pub fn sample_points(&self, extra: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let inside = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
            let m = self.margin * (hi - lo);
            rng.random_range(lo + m..hi - m)
        };
        (0..self.samples)
            .map(|_| {
                let mut p = vec![inside(&mut rng, self.x_range)];
                for _ in 0..3 + extra {
                    p.push(inside(&mut rng, self.box_range));
                }
                p
            })
            .collect()
    }
}

/// Orthonormal coframe `f¹ = √(eᵘx) dx, f² = √(eᵘx) dy, f³ = √x dz,
/// f⁴ = x^{-1/2}(dt + y dz)` with closed-form derivatives.
pub fn kahler_coframe(u: Arc<LiouvilleSolution>, cfg: &KahlerConfig) -> CoframeField {
    let domain = vec![cfg.x_range, cfg.box_range, cfg.box_range, cfg.box_range];
    let u2 = u.clone();
    CoframeField::new(domain, move |p| {
        let (x, y) = (p[0], p[1]);
        let [uu, _, _] = u.eval(x);
        let s = (uu.exp() * x).sqrt();
        let r = x.sqrt();
        DMatrix::from_row_slice(
            4,
            4,
            &[
                s,
                0.0,
                0.0,
                0.0,
                0.0,
                s,
                0.0,
                0.0,
                0.0,
                0.0,
                r,
                0.0,
                0.0,
                0.0,
                y / r,
                1.0 / r,
            ],
        )
    })
    .with_derivative(move |p, k| {
        let (x, y) = (p[0], p[1]);
        let mut d = DMatrix::zeros(4, 4);
        match k {
            0 => {
                let [uu, du, _] = u2.eval(x);
                let s = (uu.exp() * x).sqrt();
                let ds = 0.5 * s * (du + 1.0 / x);
                let r = x.sqrt();
                d[(0, 0)] = ds;
                d[(1, 1)] = ds;
                d[(2, 2)] = 0.5 / r;
                d[(3, 2)] = -0.5 * y / (x * r);
                d[(3, 3)] = -0.5 / (x * r);
            }
            1 => d[(3, 2)] = 1.0 / x.sqrt(),
            _ => {}
        }
        d
    })
    .with_step(cfg.step)
}

#[derive(Debug, Clone, Serialize)]
pub struct KahlerSample {
    pub point: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// `-u''/(2xeᵘ)` from the interpolant.
    pub predicted: f64,
    /// `max |λ - {0, 0, 4a², 4a²}|`.
    pub error: f64,
    pub multiplicities_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KahlerReport {
    pub a: f64,
    pub newton_residual: f64,
    pub newton_iterations: usize,
    pub interpolant_residual: f64,
    pub concave: bool,
    pub samples: Vec<KahlerSample>,
    pub max_error: f64,
    pub pass: bool,
}

/// Multiplicity pattern `(2, 2)`: the two lower and the two upper
/// eigenvalues agree and the gap between them exceeds `1e-4·max|λ|`.
pub fn two_two_pattern(eig: &[f64], tol: f64) -> bool {
    let scale = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale < tol {
        return true;
    }
    let gap = eig[2] - eig[1];
    (eig[1] - eig[0]).abs() < tol && (eig[3] - eig[2]).abs() < tol && gap > 1e-4 * scale
}

pub fn run_kahler(cfg: &KahlerConfig) -> Result<KahlerReport> {
    let sol = Arc::new(cfg.solve()?);
    let cf = kahler_coframe(sol.clone(), cfg);
    let target = 4.0 * cfg.a * cfg.a;
    let mut samples = Vec::new();
    for p in cfg.sample_points(0) {
        let c = riemann_ricci(&cf, &p)?;
        let [uu, _, upp] = sol.eval(p[0]);
        let predicted = -upp / (2.0 * p[0] * uu.exp());
        let want = [0.0, 0.0, target, target];
        let error = c
            .eigenvalues
            .iter()
            .zip(want)
            .map(|(l, w)| (l - w).abs())
            .fold(0.0, f64::max);
        samples.push(KahlerSample {
            multiplicities_ok: two_two_pattern(&c.eigenvalues, cfg.tolerance),
            point: p,
            eigenvalues: c.eigenvalues,
            predicted,
            error,
        });
    }
    let max_error = samples.iter().map(|s| s.error).fold(0.0, f64::max);
    let pass = sol.residual < 1e-10
        && max_error < cfg.tolerance
        && samples.iter().all(|s| s.multiplicities_ok);
    Ok(KahlerReport {
        a: cfg.a,
        newton_residual: sol.residual,
        newton_iterations: sol.iterations,
        interpolant_residual: sol.interpolant_residual(1000),
        concave: sol.is_concave(),
        samples,
        max_error,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_derivative_matches_fd() {
        let cfg = KahlerConfig::default();
        let cf = kahler_coframe(Arc::new(cfg.solve().unwrap()), &cfg);
        let p = [1.37, 0.2, -0.4, 0.1];
        for k in 0..4 {
            let d = cf.derivative(&p, k) - cf.derivative_fd(&p, k, 1e-5);
            assert!(d.amax() < 1e-8, "k = {k}: {d}");
        }
    }

    #[test]
    fn eigenvalues_at_samples() {
        let cfg = KahlerConfig {
            samples: 3,
            ..KahlerConfig::default()
        };
        let r = run_kahler(&cfg).unwrap();
        assert!(r.pass, "{r:?}");
        for s in &r.samples {
            assert!((s.predicted - 1.0).abs() < 1e-6);
        }
    }
}
