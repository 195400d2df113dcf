//! Group assignments shared by every grouping algorithm.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::ApolloniusRegion;

/// Final label of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Group(usize),
    Outlier,
}

impl Label {
    pub fn group(self) -> Option<usize> {
        match self {
            Label::Group(g) => Some(g),
            Label::Outlier => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Group(g) => write!(f, "{g}"),
            Label::Outlier => f.write_str("outlier"),
        }
    }
}

/// How a point obtained its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Target,
    InsideCircle,
    ReassignedUncovered,
    ReassignedOverlap,
    Outlier,
    /// Assigned by a baseline algorithm without Apollonius regions.
    Member,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub id: usize,
    /// Seed point of the group, when the algorithm has one.
    pub target: Option<usize>,
    pub region: Option<ApolloniusRegion>,
}

/// A total labelling of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignments: Vec<Label>,
    groups: Vec<Group>,
    outliers: BTreeSet<usize>,
    provenance: Vec<Provenance>,
}

impl Partition {
    /// Validates and assembles a partition. Group ids must be `0..groups.len()`
    /// in order, every label must reference an existing group, and targets
    /// must be members of their own group.
    pub fn new(assignments: Vec<Label>, groups: Vec<Group>, provenance: Vec<Provenance>) -> Result<Self> {
        if assignments.len() != provenance.len() {
            return Err(Error::LengthMismatch {
                left: assignments.len(),
                right: provenance.len(),
            });
        }
        if let Some((pos, g)) = groups.iter().enumerate().find(|(i, g)| g.id != *i) {
            return Err(Error::InvalidParameter(format!(
                "group at position {pos} has id {}",
                g.id
            )));
        }
        let mut outliers = BTreeSet::new();
        for (i, (label, prov)) in assignments.iter().zip(&provenance).enumerate() {
            match label {
                Label::Group(g) if *g >= groups.len() => {
                    return Err(Error::InvalidParameter(format!(
                        "point {i} assigned to missing group {g}"
                    )))
                }
                Label::Outlier => {
                    outliers.insert(i);
                }
                _ => {}
            }
            if (*label == Label::Outlier) != (*prov == Provenance::Outlier) {
                return Err(Error::InvalidParameter(format!(
                    "point {i}: label {label} disagrees with provenance {prov:?}"
                )));
            }
        }
        for g in &groups {
            if let Some(t) = g.target {
                if assignments.get(t) != Some(&Label::Group(g.id)) {
                    return Err(Error::InvalidParameter(format!(
                        "target {t} is not a member of group {}",
                        g.id
                    )));
                }
            }
        }
        Ok(Self {
            assignments,
            groups,
            outliers,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[Label] {
        &self.assignments
    }

    pub fn label(&self, i: usize) -> Label {
        self.assignments[i]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn outliers(&self) -> &BTreeSet<usize> {
        &self.outliers
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// Member indices of each group, in ascending order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.groups.len()];
        for (i, label) in self.assignments.iter().enumerate() {
            if let Label::Group(g) = label {
                members[*g].push(i);
            }
        }
        members
    }

    pub fn targets(&self) -> Vec<usize> {
        self.groups.iter().filter_map(|g| g.target).collect()
    }

    /// Cluster ids for pair counting: groups keep their id, each outlier gets
    /// a fresh singleton id.
    pub fn cluster_ids(&self) -> Vec<usize> {
        let mut next = self.groups.len();
        self.assignments
            .iter()
            .map(|l| match l {
                Label::Group(g) => *g,
                Label::Outlier => {
                    next += 1;
                    next - 1
                }
            })
            .collect()
    }
}
