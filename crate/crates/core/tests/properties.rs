mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn hodge_is_an_isometry((a, b) in form_pair(7)) {
        hodge_isometry(&a, &b)?;
    }

    #[test]
    fn hodge_isometry_in_dimension_five((a, b) in form_pair(5)) {
        hodge_isometry(&a, &b)?;
    }

    #[test]
    fn wedge_with_star_gives_inner_product((a, b) in form_pair(7)) {
        wedge_star_is_inner(&a, &b)?;
    }

    #[test]
    fn d_is_an_antiderivation(g in algebra(), a in form_any_degree(7), b in form(7, 2)) {
        antiderivation(&g, &a, &b)?;
    }

    #[test]
    fn d_squares_to_zero(g in algebra(), a in form_any_degree(7)) {
        d_squared(&g, &a)?;
    }

    #[test]
    fn projectors_are_idempotent_and_orthogonal(gamma in form(7, 3)) {
        projectors(&gamma)?;
    }

    #[test]
    fn sigma_is_frame_independent(s in skew7(), t in form(7, 3)) {
        sigma_equivariance(&s, &t)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn central_stencil_is_second_order((a, u0, u1) in fd_inputs()) {
        fd_order(a, u0, u1)?;
    }
}
