//! Strategies and properties shared by the property suite and the
//! acceptance runner.

#![allow(dead_code)]

use std::sync::OnceLock;

use g2ricci::liegroup::LieAlgebraData;
use g2ricci::linalg::{cayley, QMatrix};
use g2ricci::multilinear::{basis_blades, Form};
use g2ricci::numgeom::liouville::{convergence_order, Stencil};
use g2ricci::scalar::{int, ratio, Scalar};
use g2ricci::G2Structure;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 128;

pub fn g2() -> &'static G2Structure {
    static G2: OnceLock<G2Structure> = OnceLock::new();
    G2.get_or_init(G2Structure::standard)
}

fn binomial(n: usize, k: usize) -> usize {
    basis_blades(n, k).len()
}

pub fn coefficient() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        3 => Just(int(0)),
        2 => (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q)),
    ]
}

pub fn form(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
    prop::collection::vec(coefficient(), binomial(dim, degree))
        .prop_map(move |c| Form::from_coordinates(dim, degree, &c))
}

pub fn form_any_degree(dim: usize) -> impl Strategy<Value = Form> {
    (0..=dim).prop_flat_map(move |k| form(dim, k))
}

/// Pair of forms of one degree.
pub fn form_pair(dim: usize) -> impl Strategy<Value = (Form, Form)> {
    (0..=dim).prop_flat_map(move |k| (form(dim, k), form(dim, k)))
}

fn seed_algebras() -> Vec<LieAlgebraData> {
    let e = |i, j, k, c| (i, j, k, int(c));
    let from = |entries: &[(usize, usize, usize, Scalar)]| {
        LieAlgebraData::from_entries(7, entries).unwrap()
    };
    vec![
        LieAlgebraData::r4_su2(&int(1)),
        LieAlgebraData::r4_su2(&ratio(-2, 3)),
        // Heisenberg ⊕ ℝ⁴
        from(&[e(0, 1, 2, 1)]),
        // 5-dimensional Heisenberg ⊕ ℝ²
        from(&[e(0, 1, 4, 1), e(2, 3, 4, 1)]),
        // filiform: [e1,e2] = e3, [e1,e3] = e4, [e1,e4] = e5
        from(&[e(0, 1, 2, 1), e(0, 2, 3, 1), e(0, 3, 4, 1)]),
        // solvable, not unimodular
        from(&[e(0, 1, 1, 1), e(0, 2, 2, 2), e(0, 3, 4, 1), e(0, 4, 3, -1)]),
        // so(3) ⊕ so(3) ⊕ ℝ
        from(&[
            e(0, 1, 2, 1),
            e(1, 2, 0, 1),
            e(2, 0, 1, 1),
            e(3, 4, 5, 1),
            e(4, 5, 3, 1),
            e(5, 3, 4, 1),
        ]),
    ]
}

/// `c'` in the basis `e'_i = Σ_p G_pi e_p` with `G = L U` unimodular.
fn change_basis(g: &LieAlgebraData, lower: &[i64], upper: &[i64]) -> LieAlgebraData {
    let n = g.dim();
    let mut l = QMatrix::identity(n);
    let mut u = QMatrix::identity(n);
    let mut it = lower.iter().chain(upper.iter());
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = int(*it.next().unwrap());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = int(*it.next().unwrap());
        }
    }
    let gm = l.mul(&u);
    let inv = gm.inverse().expect("unimodular");
    let cols: Vec<Vec<Scalar>> = (0..n).map(|i| gm.column(i)).collect();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let br = inv.mul_vec(&g.bracket(&cols[i], &cols[j]));
            for (k, c) in br.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, k, c));
                }
            }
        }
    }
    LieAlgebraData::from_entries(n, &entries).expect("isomorphic image is a Lie algebra")
}

pub fn algebra() -> impl Strategy<Value = LieAlgebraData> {
    let seeds = seed_algebras();
    (
        0..seeds.len(),
        prop::collection::vec(-1i64..=1, 21),
        prop::collection::vec(-1i64..=1, 21),
    )
        .prop_map(move |(s, l, u)| change_basis(&seeds[s], &l, &u))
}

pub fn skew7() -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-2i64..=2, 21).prop_map(|v| {
        let mut m = QMatrix::zeros(7, 7);
        let mut it = v.into_iter();
        for i in 0..7 {
            for j in i + 1..7 {
                let x = it.next().unwrap();
                m[(i, j)] = int(x);
                m[(j, i)] = int(-x);
            }
        }
        m
    })
}

fn sign(even: bool) -> Scalar {
    if even {
        int(1)
    } else {
        int(-1)
    }
}

pub fn hodge_isometry(a: &Form, b: &Form) -> Result<(), TestCaseError> {
    let (n, k) = (a.dim(), a.degree());
    prop_assert_eq!(a.hodge().inner(&b.hodge()), a.inner(b));
    prop_assert_eq!(a.hodge().hodge(), a.scale(&sign(k * (n - k) % 2 == 0)));
    Ok(())
}

pub fn wedge_star_is_inner(a: &Form, b: &Form) -> Result<(), TestCaseError> {
    let vol = Form::volume(a.dim());
    prop_assert_eq!(a.wedge(&b.hodge()), vol.scale(&a.inner(b)));
    Ok(())
}

pub fn antiderivation(g: &LieAlgebraData, a: &Form, b: &Form) -> Result<(), TestCaseError> {
    let lhs = g.ce_d(&a.wedge(b));
    let rhs = &g.ce_d(a).wedge(b)
        + &a.wedge(&g.ce_d(b))
            .scale(&sign(a.degree().is_multiple_of(2)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn d_squared(g: &LieAlgebraData, a: &Form) -> Result<(), TestCaseError> {
    prop_assert!(g.ce_d(&g.ce_d(a)).is_zero());
    Ok(())
}

pub fn projectors(gamma: &Form) -> Result<(), TestCaseError> {
    let g2 = g2();
    let (p1, p7, p27) = g2.project3(gamma).unwrap();
    for (p, part) in [(&p1, "1"), (&p7, "7"), (&p27, "27")] {
        let again = g2.project3(p).unwrap();
        let same = match part {
            "1" => again.0,
            "7" => again.1,
            _ => again.2,
        };
        prop_assert_eq!(&same, p, "Λ³_{} projector is not idempotent", part);
    }
    prop_assert_eq!(&(&p1 + &p7) + &p27, gamma.clone());
    prop_assert!(p1.inner(&p7).is_zero() && p1.inner(&p27).is_zero() && p7.inner(&p27).is_zero());
    Ok(())
}

/// `σ_{Q*T} = Q*σ_T` for orthogonal `Q = cayley(S)`.
pub fn sigma_equivariance(s: &QMatrix, t: &Form) -> Result<(), TestCaseError> {
    let q = cayley(s);
    let images: Vec<Form> = (0..7).map(|i| Form::from_vector(q.row(i))).collect();
    let lhs = t.substitute(&images).sigma_t().unwrap();
    let rhs = t.sigma_t().unwrap().substitute(&images);
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn fd_order(a: f64, u0: f64, u1: f64) -> Result<(), TestCaseError> {
    let p = convergence_order(a, (1.0, 2.0), (u0, u1), 20, Stencil::Central).unwrap();
    prop_assert!(
        p >= 1.9,
        "observed order {p} for a = {a}, boundary ({u0}, {u1})"
    );
    Ok(())
}

pub fn fd_inputs() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..0.45, -0.5f64..0.1, -0.5f64..0.1)
}
