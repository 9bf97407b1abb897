//! Floating-point curvature of explicit coframes by Cartan's structure
//! equations, the Liouville-type ODE behind the Kähler example, and the
//! 5-dimensional bundle with parallel torsion built over it.
//!
//! Conventions: `fⁱ = Σ A_ij dxʲ` is orthonormal, `[e_a, e_b] = Σ cˡ_ab e_l`,
//! `Γ_ijk = ⟨∇_{e_i} e_j, e_k⟩` and `R_ijkm = ⟨R(e_i,e_j)e_k, e_m⟩`.

pub mod bundle;
pub mod forms;
pub mod frame;
pub mod kahler;
pub mod liouville;
pub mod quadrature;

pub use bundle::{assemble_n5, run_theorem1, strominger_check, BundleData, StromingerReport};
pub use forms::FrameForm;
pub use frame::{
    curvature_of, exterior_derivative, levi_civita_cartan, riemann_ricci, structure_functions,
    CoframeField, CurvaturePoint,
};
pub use kahler::{kahler_coframe, run_kahler, KahlerConfig, KahlerReport};
pub use liouville::{solve_liouville, LiouvilleSolution, Stencil};
