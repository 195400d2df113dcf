//! Name-keyed registry of grouping algorithms.
//!
//! Every algorithm implements [`GroupingAlgorithm`]; the CLI and the bench
//! harness look them up by name and build them from [`AlgorithmParams`].

use std::collections::BTreeMap;
use std::fmt;

use crate::baselines;
use crate::data::DataSet;
use crate::density::DistanceMatrix;
use crate::error::{Error, Result};
use crate::ncar::{self, NcarParams};
use crate::partition::Partition;

/// Loosely typed parameters; each factory picks the fields it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgorithmParams {
    /// Density neighbor fraction.
    pub p: Option<f64>,
    /// Target / center count.
    pub targets: Option<usize>,
    /// kNN neighbor fraction override.
    pub k_fraction: Option<f64>,
    pub epsilon: Option<f64>,
}

pub trait GroupingAlgorithm: Send + Sync {
    fn name(&self) -> &str;

    /// Parameter echo, `key=value` pairs separated by `;`.
    fn params(&self) -> String;

    fn group_with_distances(&self, data: &DataSet, dist: &DistanceMatrix) -> Result<Partition>;

    /// Groups the dataset, computing distances as part of the run.
    fn group(&self, data: &DataSet) -> Result<Partition> {
        self.group_with_distances(data, &DistanceMatrix::from_dataset(data))
    }
}

impl fmt::Debug for dyn GroupingAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}

#[derive(Debug, Clone)]
pub struct Ncar {
    pub params: NcarParams,
}

impl GroupingAlgorithm for Ncar {
    fn name(&self) -> &str {
        "ncar"
    }

    fn params(&self) -> String {
        match self.params.target_count {
            Some(t) => format!("p={};targets={t}", self.params.p),
            None => format!("p={};targets=auto", self.params.p),
        }
    }

    fn group_with_distances(&self, data: &DataSet, dist: &DistanceMatrix) -> Result<Partition> {
        ncar::run_ncar_with_distances(data, dist, &self.params).map(|r| r.partition)
    }
}

#[derive(Debug, Clone)]
pub struct KnnGraph {
    pub name: String,
    pub k_fraction: f64,
}

impl GroupingAlgorithm for KnnGraph {
    fn name(&self) -> &str {
        &self.name
    }

    fn params(&self) -> String {
        format!("k_fraction={}", self.k_fraction)
    }

    fn group_with_distances(&self, _data: &DataSet, dist: &DistanceMatrix) -> Result<Partition> {
        baselines::knn_graph_groups_with_distances(dist, self.k_fraction)
    }
}

#[derive(Debug, Clone)]
pub struct EpsilonGraph {
    pub epsilon: Option<f64>,
}

impl GroupingAlgorithm for EpsilonGraph {
    fn name(&self) -> &str {
        "epsilon"
    }

    fn params(&self) -> String {
        match self.epsilon {
            Some(e) => format!("epsilon={e}"),
            None => "epsilon=auto".into(),
        }
    }

    fn group_with_distances(&self, _data: &DataSet, dist: &DistanceMatrix) -> Result<Partition> {
        baselines::epsilon_groups_with_distances(dist, self.epsilon)
    }
}

#[derive(Debug, Clone)]
pub struct DpcNearestCenter {
    pub p: f64,
    pub center_count: usize,
}

impl GroupingAlgorithm for DpcNearestCenter {
    fn name(&self) -> &str {
        "dpc"
    }

    fn params(&self) -> String {
        format!("p={};centers={}", self.p, self.center_count)
    }

    fn group_with_distances(&self, _data: &DataSet, dist: &DistanceMatrix) -> Result<Partition> {
        baselines::dpc_nearest_center_with_distances(dist, self.p, self.center_count)
    }
}

pub type Factory = fn(&AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>>;

fn ncar_factory(params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
    Ok(Box::new(Ncar {
        params: NcarParams {
            p: params.p.unwrap_or(NcarParams::default().p),
            target_count: params.targets,
        },
    }))
}

fn knn1_factory(params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
    Ok(Box::new(KnnGraph {
        name: "knn1".into(),
        k_fraction: params.k_fraction.unwrap_or(0.05),
    }))
}

fn knn2_factory(params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
    Ok(Box::new(KnnGraph {
        name: "knn2".into(),
        k_fraction: params.k_fraction.unwrap_or(0.10),
    }))
}

fn epsilon_factory(params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
    Ok(Box::new(EpsilonGraph {
        epsilon: params.epsilon,
    }))
}

fn dpc_factory(params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
    let center_count = params
        .targets
        .ok_or_else(|| Error::InvalidParameter("dpc needs a center count (--targets)".into()))?;
    Ok(Box::new(DpcNearestCenter {
        p: params.p.unwrap_or(NcarParams::default().p),
        center_count,
    }))
}

#[derive(Debug, Clone, Default)]
pub struct Registry {
    factories: BTreeMap<String, Factory>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `ncar`, `knn1`, `knn2`, `epsilon` and `dpc`.
    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        registry.register("ncar", ncar_factory);
        registry.register("knn1", knn1_factory);
        registry.register("knn2", knn2_factory);
        registry.register("epsilon", epsilon_factory);
        registry.register("dpc", dpc_factory);
        registry
    }

    /// Registers a factory, replacing any previous one with the same name.
    pub fn register(&mut self, name: impl Into<String>, factory: Factory) {
        self.factories.insert(name.into(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn build(&self, name: &str, params: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))?;
        factory(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::fig8_fixture;

    #[test]
    fn builtins_are_registered() {
        let r = Registry::with_builtins();
        let names: Vec<&str> = r.names().collect();
        assert_eq!(names, vec!["dpc", "epsilon", "knn1", "knn2", "ncar"]);
        assert!(matches!(
            r.build("bogus", &AlgorithmParams::default()),
            Err(Error::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn knn_presets() {
        let r = Registry::with_builtins();
        let p = AlgorithmParams::default();
        assert_eq!(r.build("knn1", &p).unwrap().params(), "k_fraction=0.05");
        assert_eq!(r.build("knn2", &p).unwrap().params(), "k_fraction=0.1");
    }

    #[test]
    fn dpc_requires_count() {
        let r = Registry::with_builtins();
        assert!(r.build("dpc", &AlgorithmParams::default()).is_err());
    }

    #[test]
    fn every_builtin_runs() {
        let r = Registry::with_builtins();
        let data = fig8_fixture();
        let params = AlgorithmParams {
            p: Some(0.2),
            targets: Some(3),
            ..AlgorithmParams::default()
        };
        for name in ["ncar", "knn1", "knn2", "epsilon", "dpc"] {
            let algo = r.build(name, &params).unwrap();
            let part = algo.group(&data).unwrap();
            assert_eq!(part.len(), data.len(), "{name}");
        }
    }

    #[test]
    fn custom_registration() {
        fn always_knn(_: &AlgorithmParams) -> Result<Box<dyn GroupingAlgorithm>> {
            Ok(Box::new(KnnGraph {
                name: "knn-third".into(),
                k_fraction: 0.3,
            }))
        }
        let mut r = Registry::empty();
        r.register("third", always_knn);
        assert_eq!(r.build("third", &AlgorithmParams::default()).unwrap().name(), "knn-third");
    }
}
