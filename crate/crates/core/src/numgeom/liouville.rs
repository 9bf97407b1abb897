//! Two-point boundary value problem `u'' = -8a²·x·eᵘ` on `[x₀, x₁]`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// `(u_{i+1} - 2uᵢ + u_{i-1})/h² = fᵢ`, second order.
    Central,
    /// `(u_{i+1} - 2uᵢ + u_{i-1})/h² = (f_{i-1} + 10fᵢ + f_{i+1})/12`, fourth order.
    Numerov,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiouvilleSolution {
    pub a: f64,
    pub stencil: Stencil,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// Nodal `u'` from fourth-order differences.
    pub du: Vec<f64>,
    /// Nodal `u''` from the equation.
    pub d2u: Vec<f64>,
    /// Max-norm of the discrete residual at convergence.
    pub residual: f64,
    pub iterations: usize,
}

pub const NEWTON_TOL: f64 = 1e-10;
const MAX_ITER: usize = 50;

fn rhs(a: f64, x: f64, u: f64) -> f64 {
    -8.0 * a * a * x * u.exp()
}

pub fn solve_liouville(
    a: f64,
    domain: (f64, f64),
    boundary: (f64, f64),
    intervals: usize,
    stencil: Stencil,
) -> Result<LiouvilleSolution> {
    let (x0, x1) = domain;
    if !(a >= 0.0) || !(x0 > 0.0) || !(x1 > x0) || intervals < 4 {
        return Err(Error::InvalidParameter(format!(
            "need a ≥ 0, 0 < x₀ < x₁ and at least 4 intervals (a = {a}, domain = [{x0}, {x1}], intervals = {intervals})"
        )));
    }
    let n = intervals;
    let h = (x1 - x0) / n as f64;
    let x: Vec<f64> = (0..=n).map(|i| x0 + h * i as f64).collect();
    let mut u: Vec<f64> = x
        .iter()
        .map(|&xi| boundary.0 + (boundary.1 - boundary.0) * (xi - x0) / (x1 - x0))
        .collect();
    let (wl, wc, wr) = match stencil {
        Stencil::Central => (0.0, 1.0, 0.0),
        Stencil::Numerov => (1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0),
    };
    let h2 = h * h;
    let m = n - 1;
    let mut trace = Vec::new();
    for it in 0..MAX_ITER {
        let f: Vec<f64> = x.iter().zip(&u).map(|(&xi, &ui)| rhs(a, xi, ui)).collect();
        let mut res = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, m);
        for i in 1..n {
            let r = i - 1;
            res[r] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2
                - (wl * f[i - 1] + wc * f[i] + wr * f[i + 1]);
            // ∂f/∂u = f
            jac[(r, r)] = -2.0 / h2 - wc * f[i];
            if i > 1 {
                jac[(r, r - 1)] = 1.0 / h2 - wl * f[i - 1];
            }
            if i < n - 1 {
                jac[(r, r + 1)] = 1.0 / h2 - wr * f[i + 1];
            }
        }
        let norm = res.amax();
        trace.push(norm);
        if norm < NEWTON_TOL {
            let du = nodal_derivative(&u, h);
            let d2u = x.iter().zip(&u).map(|(&xi, &ui)| rhs(a, xi, ui)).collect();
            return Ok(LiouvilleSolution {
                a,
                stencil,
                x,
                u,
                du,
                d2u,
                residual: norm,
                iterations: it,
            });
        }
        let step = jac
            .lu()
            .solve(&(-res))
            .ok_or_else(|| Error::NewtonDiverged(trace.clone()))?;
        if !step.iter().all(|s| s.is_finite()) {
            return Err(Error::NewtonDiverged(trace));
        }
        for i in 1..n {
            u[i] += step[i - 1];
        }
    }
    Err(Error::NewtonDiverged(trace))
}

/// Fourth-order five-point first differences, one-sided at the ends.
fn nodal_derivative(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len() - 1;
    (0..=n)
        .map(|i| {
            if i >= 2 && i + 2 <= n {
                (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
            } else if i < 2 {
                (-25.0 * u[i] + 48.0 * u[i + 1] - 36.0 * u[i + 2] + 16.0 * u[i + 3]
                    - 3.0 * u[i + 4])
                    / (12.0 * h)
            } else {
                (25.0 * u[i] - 48.0 * u[i - 1] + 36.0 * u[i - 2] - 16.0 * u[i - 3] + 3.0 * u[i - 4])
                    / (12.0 * h)
            }
        })
        .collect()
}

// quintic Hermite basis and derivatives on [0, 1]
fn h0(t: f64) -> [f64; 3] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        1.0 - 10.0 * t3 + 15.0 * t3 * t - 6.0 * t3 * t2,
        -30.0 * t2 + 60.0 * t3 - 30.0 * t3 * t,
        -60.0 * t + 180.0 * t2 - 120.0 * t3,
    ]
}

fn h1(t: f64) -> [f64; 3] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        t - 6.0 * t3 + 8.0 * t3 * t - 3.0 * t3 * t2,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t3 * t,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
    ]
}

fn h2(t: f64) -> [f64; 3] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * t2 - 1.5 * t3 + 1.5 * t3 * t - 0.5 * t3 * t2,
        t - 4.5 * t2 + 6.0 * t3 - 2.5 * t3 * t,
        1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3,
    ]
}

impl LiouvilleSolution {
    pub fn step(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    /// `(u, u', u'')` of the C² quintic Hermite interpolant.
    pub fn eval(&self, x: f64) -> [f64; 3] {
        let h = self.step();
        let n = self.x.len() - 1;
        let i = (((x - self.x[0]) / h).floor().max(0.0) as usize).min(n - 1);
        let t = (x - self.x[i]) / h;
        let s = 1.0 - t;
        let (a0, a1, a2) = (h0(t), h1(t), h2(t));
        let (b0, b1, b2) = (h0(s), h1(s), h2(s));
        let (u0, d0, s0) = (self.u[i], self.du[i], self.d2u[i]);
        let (u1, d1, s1) = (self.u[i + 1], self.du[i + 1], self.d2u[i + 1]);
        let v = a0[0] * u0 + h * a1[0] * d0 + h * h * a2[0] * s0 + b0[0] * u1 - h * b1[0] * d1
            + h * h * b2[0] * s1;
        let dv = a0[1] * u0 + h * a1[1] * d0 + h * h * a2[1] * s0 - b0[1] * u1 + h * b1[1] * d1
            - h * h * b2[1] * s1;
        let ddv = a0[2] * u0 + h * a1[2] * d0 + h * h * a2[2] * s0 + b0[2] * u1 - h * b1[2] * d1
            + h * h * b2[2] * s1;
        [v, dv / h, ddv / (h * h)]
    }

    /// Max of `|u'' + 8a²xeᵘ|` for the interpolant over `samples` points.
    pub fn interpolant_residual(&self, samples: usize) -> f64 {
        let (x0, x1) = (self.x[0], *self.x.last().expect("nonempty grid"));
        (0..=samples)
            .map(|k| {
                let x = x0 + (x1 - x0) * k as f64 / samples as f64;
                let [u, _, upp] = self.eval(x);
                (upp - rhs(self.a, x, u)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Discrete second differences are `≤ 0`.
    pub fn is_concave(&self) -> bool {
        self.u.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] <= 1e-14)
    }
}

/// Observed order `log₂(e(n)/e(2n))` with errors at coarse nodes measured
/// against a solution on `8n` intervals with the same stencil.
pub fn convergence_order(
    a: f64,
    domain: (f64, f64),
    boundary: (f64, f64),
    n: usize,
    stencil: Stencil,
) -> Result<f64> {
    let reference = solve_liouville(a, domain, boundary, 8 * n, stencil)?;
    let err = |m: usize| -> Result<f64> {
        let s = solve_liouville(a, domain, boundary, m, stencil)?;
        let stride = 8 * n / m;
        Ok(s.u
            .iter()
            .enumerate()
            .map(|(i, u)| (u - reference.u[i * stride]).abs())
            .fold(0.0, f64::max))
    };
    Ok((err(n)? / err(2 * n)?).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_zero_is_linear() {
        let s = solve_liouville(0.0, (1.0, 2.0), (0.5, -0.5), 40, Stencil::Central).unwrap();
        for (x, u) in s.x.iter().zip(&s.u) {
            assert!((u - (0.5 - (x - 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn half_on_unit_interval() {
        for st in [Stencil::Central, Stencil::Numerov] {
            let s = solve_liouville(0.5, (1.0, 2.0), (0.0, 0.0), 400, st).unwrap();
            assert!(s.residual < 1e-10);
            assert!(s.is_concave());
            assert!(s.u[200] > 0.0);
        }
    }

    #[test]
    fn numerov_interpolant_is_accurate() {
        let coarse = solve_liouville(0.5, (1.0, 2.0), (0.0, 0.0), 200, Stencil::Numerov).unwrap();
        let s = solve_liouville(0.5, (1.0, 2.0), (0.0, 0.0), 400, Stencil::Numerov).unwrap();
        let (rc, rf) = (
            coarse.interpolant_residual(997),
            s.interpolant_residual(997),
        );
        assert!(rf < 5e-6 && rc / rf > 6.0, "{rc:e} {rf:e}");
        let [u, _, _] = s.eval(1.5);
        assert!((u - s.u[200]).abs() < 1e-14);
    }

    #[test]
    fn central_is_second_order() {
        let p = convergence_order(0.5, (1.0, 2.0), (0.0, 0.0), 40, Stencil::Central).unwrap();
        assert!((1.9..2.2).contains(&p), "{p}");
    }

    #[test]
    fn bad_input() {
        assert!(solve_liouville(-1.0, (1.0, 2.0), (0.0, 0.0), 10, Stencil::Central).is_err());
        assert!(solve_liouville(1.0, (0.0, 2.0), (0.0, 0.0), 10, Stencil::Central).is_err());
    }
}
