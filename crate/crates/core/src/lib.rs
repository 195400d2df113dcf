//! Neighborhood construction with Apollonius regions.
//!
//! Targets are picked as density peaks, each target is paired with its
//! nearest other target, and every group is bounded by the Apollonius region
//! through its farthest admissible point. Points outside every region are
//! reassigned or flagged as outliers, and overlaps are resolved by mean
//! distance.
//!
//! ```
//! use ncar::{data::fig8_fixture, ncar::{run_ncar, NcarParams}};
//!
//! let data = fig8_fixture();
//! let params = NcarParams { p: 0.2, target_count: Some(3) };
//! let partition = run_ncar(&data, &params).unwrap();
//! assert_eq!(partition.targets(), vec![0, 4, 7]);
//! ```

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod data;
pub mod density;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod ncar;
pub mod partition;
pub mod plot;
pub mod registry;
pub mod report;

pub use data::DataSet;
pub use density::DistanceMatrix;
pub use error::{Error, Result};
pub use geometry::{ApolloniusRegion, RegionForm, Side};
pub use ncar::{run_ncar, NcarParams};
pub use partition::{Label, Partition, Provenance};
pub use registry::{AlgorithmParams, GroupingAlgorithm, Registry};
pub use report::{MetricsReport, RunResult};
