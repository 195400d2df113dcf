//! Ten-point worked example.
//!
//! The coordinates are constructed, not measured: they were chosen so that
//! with [`FIG8_P`] and [`FIG8_TARGET_COUNT`] the pipeline exhibits the
//! relations of the classic walkthrough. Using 1-based point numbers:
//! targets are {1, 5, 8}, target 1 pairs with 5, the farthest admissible point
//! of target 1 is 4, of target 5 is 6 and of target 8 is 7, the region of
//! target 1 holds exactly {2, 3, 4}, and point 10 is an outlier.

use super::{DataSet, Source};

/// Neighbor fraction for the fixture (two neighbors per point).
pub const FIG8_P: f64 = 0.2;
pub const FIG8_TARGET_COUNT: usize = 3;

const COORDS: [[f64; 2]; 10] = [
    [0.0, 0.0],
    [0.06, -0.05],
    [-0.07, -0.06],
    [-0.17, -0.08],
    [0.99, 0.0],
    [1.06, 0.09],
    [0.52, 1.08],
    [0.5, 0.86],
    [1.04, -0.1],
    [1.93, 2.4],
];

const CLASSES: [&str; 10] = [
    "g1", "g1", "g1", "g1", "g2", "g2", "g3", "g3", "g2", "outlier",
];

pub fn fig8_fixture() -> DataSet {
    DataSet::from_rows(
        "fig8",
        COORDS.iter().map(|c| c.to_vec()).collect(),
        Source::Fixture,
    )
    .and_then(|d| d.with_named_labels(&CLASSES))
    .expect("fixture is well formed")
}
