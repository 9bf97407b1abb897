//! Shared fixtures for the criterion benches.

use g2ricci::numgeom::KahlerConfig;
use g2ricci::scalar::{int, ratio};
use g2ricci::{Form, G2Structure, LieAlgebraData, Scalar};

/// `μ = 7` keeps every torsion value an integer multiple of `½`.
pub fn mu() -> Scalar {
    int(7)
}

/// A dense generic 3-form in dimension 7.
pub fn generic_three_form() -> Form {
    let extra = [[0, 1, 2], [0, 3, 5], [1, 4, 6], [2, 3, 4], [3, 5, 6]]
        .into_iter()
        .enumerate()
        .map(|(n, blade)| Form::term(7, &blade, ratio(n as i64 + 1, 3)));
    extra.fold(G2Structure::standard().omega.clone(), |acc, t| &acc + &t)
}

pub fn r4_su2() -> LieAlgebraData {
    LieAlgebraData::r4_su2(&int(1))
}

/// Fewer samples than the default so one iteration stays short.
pub fn kahler_config() -> KahlerConfig {
    KahlerConfig {
        samples: 2,
        ..KahlerConfig::default()
    }
}
