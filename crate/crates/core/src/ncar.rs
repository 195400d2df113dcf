//! Neighborhood construction with Apollonius regions.
//!
//! The pipeline:
//!
//! 1. Rank points by `delta · rho` and take the best as targets.
//! 2. Pair every target with its nearest other target. For each target `T`
//!    with partner `P`, find the farthest non-target `F` that is closer to `T`
//!    than to any other target and closer to `T` than `P` is. The Apollonius
//!    region with foci `(T, P)` through `F` (so `k = d(T, F) / d(F, P) < 1`)
//!    encloses `T` and defines its initial group.
//! 3. Points covered by no region are outliers when they are at least as far
//!    from their nearest target as that target is from its partner; the
//!    remaining uncovered points, then the points covered by several regions,
//!    join the group with the smallest mean distance to its members.

use std::cmp::Ordering;

use crate::data::DataSet;
use crate::density::{DensityProfile, DistanceMatrix};
use crate::error::{Error, Result};
use crate::geometry::{euclidean, ratio, ApolloniusRegion, RegionForm};
use crate::partition::{Group, Label, Partition, Provenance};

/// Relative tolerance under which two mean distances count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcarParams {
    /// Fraction of points used as density neighbors.
    pub p: f64,
    /// Number of targets; automatic selection when `None`.
    pub target_count: Option<usize>,
}

impl Default for NcarParams {
    fn default() -> Self {
        Self {
            p: 0.05,
            target_count: None,
        }
    }
}

/// A target and the nearest other target it is paired with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPairing {
    pub target: usize,
    pub partner: usize,
    pub pair_distance: f64,
}

/// Farthest admissible point of a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarthestPoint {
    pub point: usize,
    pub distance: f64,
}

/// Pairs each target with its nearest other target (lower index on ties) and
/// sorts the pairings by ascending pair distance, then target index.
pub fn pair_targets(targets: &[usize], dist: &DistanceMatrix) -> Result<Vec<TargetPairing>> {
    match targets.len() {
        0 => return Err(Error::EmptySelection),
        1 => return Err(Error::SingleTarget),
        _ => {}
    }
    let mut pairings: Vec<TargetPairing> = targets
        .iter()
        .map(|&t| {
            let partner = targets
                .iter()
                .copied()
                .filter(|&u| u != t)
                .min_by(|&a, &b| dist.get(t, a).total_cmp(&dist.get(t, b)).then(a.cmp(&b)))
                .expect("at least two targets");
            TargetPairing {
                target: t,
                partner,
                pair_distance: dist.get(t, partner),
            }
        })
        .collect();
    pairings.sort_by(|a, b| {
        a.pair_distance
            .total_cmp(&b.pair_distance)
            .then(a.target.cmp(&b.target))
    });
    Ok(pairings)
}

/// Whether `m` is admissible for the pairing: strictly closer to the target
/// than the partner is, and strictly closer to the target than to any other
/// target.
pub fn is_admissible(pairing: &TargetPairing, dist: &DistanceMatrix, targets: &[usize], m: usize) -> bool {
    let t = pairing.target;
    let d = dist.get(t, m);
    d < pairing.pair_distance && targets.iter().all(|&l| l == t || d < dist.get(l, m))
}

/// The admissible non-target farthest from the pairing's target; the lowest
/// index wins among equally far points.
pub fn farthest_admissible(
    pairing: &TargetPairing,
    dist: &DistanceMatrix,
    targets: &[usize],
    non_targets: &[usize],
) -> Option<FarthestPoint> {
    let t = pairing.target;
    non_targets
        .iter()
        .copied()
        .filter(|&m| is_admissible(pairing, dist, targets, m))
        .map(|m| FarthestPoint {
            point: m,
            distance: dist.get(t, m),
        })
        .min_by(|a, b| b.distance.total_cmp(&a.distance).then(a.point.cmp(&b.point)))
}

/// Apollonius region per pairing with foci (target, partner) passing through
/// the farthest admissible point; `None` where that point is absent.
pub fn build_group_regions(
    pairings: &[TargetPairing],
    farthest: &[Option<FarthestPoint>],
    data: &DataSet,
) -> Result<Vec<Option<ApolloniusRegion>>> {
    if pairings.len() != farthest.len() {
        return Err(Error::LengthMismatch {
            left: pairings.len(),
            right: farthest.len(),
        });
    }
    pairings
        .iter()
        .zip(farthest)
        .map(|(pairing, fp)| {
            let Some(fp) = fp else { return Ok(None) };
            let a = data.row(pairing.target);
            let b = data.row(pairing.partner);
            let k = match ratio(a, b, data.row(fp.point)) {
                Ok(k) => k,
                Err(Error::DegenerateRatio) => return Ok(None),
                Err(e) => return Err(e),
            };
            if k == 0.0 {
                return Ok(None);
            }
            ApolloniusRegion::new(a, b, k).map(Some)
        })
        .collect()
}

/// Partition under construction: some points are still queued.
#[derive(Debug, Clone, PartialEq)]
pub struct DraftPartition {
    assignments: Vec<Option<Label>>,
    provenance: Vec<Option<Provenance>>,
    groups: Vec<Group>,
    uncovered: Vec<usize>,
    overlaps: Vec<(usize, Vec<usize>)>,
}

impl DraftPartition {
    pub fn assignments(&self) -> &[Option<Label>] {
        &self.assignments
    }

    pub fn provenance(&self) -> &[Option<Provenance>] {
        &self.provenance
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Points covered by no region, ascending.
    pub fn uncovered(&self) -> &[usize] {
        &self.uncovered
    }

    /// Points covered by several regions with the covering group ids.
    pub fn overlaps(&self) -> &[(usize, Vec<usize>)] {
        &self.overlaps
    }

    fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.groups.len()];
        for (i, label) in self.assignments.iter().enumerate() {
            if let Some(Label::Group(g)) = label {
                members[*g].push(i);
            }
        }
        members
    }

    fn assign(&mut self, i: usize, label: Label, provenance: Provenance) {
        self.assignments[i] = Some(label);
        self.provenance[i] = Some(provenance);
    }

    /// Converts to a final partition; fails if any point is still unassigned.
    pub fn finish(self) -> Result<Partition> {
        let n = self.assignments.len();
        let mut assignments = Vec::with_capacity(n);
        let mut provenance = Vec::with_capacity(n);
        for (i, (label, prov)) in self.assignments.into_iter().zip(self.provenance).enumerate() {
            match (label, prov) {
                (Some(l), Some(p)) => {
                    assignments.push(l);
                    provenance.push(p);
                }
                _ => {
                    return Err(Error::InvalidParameter(format!("point {i} is unassigned")));
                }
            }
        }
        Partition::new(assignments, self.groups, provenance)
    }
}

/// Assigns targets to their own groups and every non-target covered by
/// exactly one region (closed: boundary included) to that region's group.
/// Points covered by no region or by several are queued.
pub fn initial_assignment(groups: Vec<Group>, data: &DataSet) -> DraftPartition {
    let n = data.len();
    let mut draft = DraftPartition {
        assignments: vec![None; n],
        provenance: vec![None; n],
        groups,
        uncovered: Vec::new(),
        overlaps: Vec::new(),
    };
    for g in draft.groups.clone() {
        if let Some(t) = g.target {
            draft.assign(t, Label::Group(g.id), Provenance::Target);
        }
    }
    for i in 0..n {
        if draft.assignments[i].is_some() {
            continue;
        }
        let m = data.row(i);
        let covering: Vec<usize> = draft
            .groups
            .iter()
            .filter(|g| g.region.as_ref().is_some_and(|r| r.covers(m)))
            .map(|g| g.id)
            .collect();
        match covering.as_slice() {
            [] => draft.uncovered.push(i),
            [g] => draft.assign(i, Label::Group(*g), Provenance::InsideCircle),
            _ => draft.overlaps.push((i, covering)),
        }
    }
    draft
}

/// Marks queued uncovered points as outliers when their distance to the
/// nearest target is at least that target's pair distance.
pub fn detect_outliers(
    mut draft: DraftPartition,
    dist: &DistanceMatrix,
    pairings: &[TargetPairing],
) -> DraftPartition {
    if pairings.is_empty() {
        return draft;
    }
    let mut still_uncovered = Vec::with_capacity(draft.uncovered.len());
    for &m in &draft.uncovered {
        let nearest = pairings
            .iter()
            .min_by(|a, b| {
                dist.get(a.target, m)
                    .total_cmp(&dist.get(b.target, m))
                    .then(a.target.cmp(&b.target))
            })
            .expect("non-empty pairings");
        if dist.get(nearest.target, m) >= nearest.pair_distance {
            draft.assignments[m] = Some(Label::Outlier);
            draft.provenance[m] = Some(Provenance::Outlier);
        } else {
            still_uncovered.push(m);
        }
    }
    draft.uncovered = still_uncovered;
    draft
}

/// Tie-break anchor of a group: its sphere center, else its target.
fn anchor<'a>(group: &'a Group, data: &'a DataSet) -> Option<&'a [f64]> {
    match group.region.as_ref() {
        Some(r) if r.form() != RegionForm::BisectorLine => r.center(),
        _ => group.target.map(|t| data.row(t)),
    }
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs())
}

/// Among `candidates`, the group with the smallest mean distance from `m` to
/// its `members`, then nearest anchor, then lowest id. Groups without members
/// rank last.
fn most_similar_group(
    m: usize,
    candidates: &[usize],
    members: &[Vec<usize>],
    groups: &[Group],
    dist: &DistanceMatrix,
    data: &DataSet,
) -> usize {
    let mean = |g: usize| -> f64 {
        let ms = &members[g];
        if ms.is_empty() {
            return f64::INFINITY;
        }
        ms.iter().map(|&j| dist.get(m, j)).sum::<f64>() / ms.len() as f64
    };
    let anchor_dist = |g: usize| -> f64 {
        anchor(&groups[g], data)
            .map(|c| euclidean(c, data.row(m)))
            .unwrap_or(f64::INFINITY)
    };
    let scored: Vec<(usize, f64)> = candidates.iter().map(|&g| (g, mean(g))).collect();
    let mut best = scored[0];
    for &(g, mg) in &scored[1..] {
        let ord = if nearly_equal(mg, best.1) {
            anchor_dist(g)
                .total_cmp(&anchor_dist(best.0))
                .then(g.cmp(&best.0))
        } else {
            mg.total_cmp(&best.1)
        };
        if ord == Ordering::Less {
            best = (g, mg);
        }
    }
    best.0
}

/// Assigns each queued uncovered point, in ascending index order, to the most
/// similar group. Memberships are frozen at the start of the pass.
pub fn reassign_uncovered(mut draft: DraftPartition, dist: &DistanceMatrix, data: &DataSet) -> DraftPartition {
    let members = draft.members();
    let all: Vec<usize> = (0..draft.groups.len()).collect();
    let mut queue = std::mem::take(&mut draft.uncovered);
    queue.sort_unstable();
    for m in queue {
        let g = most_similar_group(m, &all, &members, &draft.groups, dist, data);
        draft.assign(m, Label::Group(g), Provenance::ReassignedUncovered);
    }
    draft
}

/// Assigns each point covered by several regions to the most similar of only
/// those groups, with memberships frozen at the start of the pass.
pub fn resolve_overlaps(mut draft: DraftPartition, dist: &DistanceMatrix, data: &DataSet) -> Result<Partition> {
    let members = draft.members();
    let mut queue = std::mem::take(&mut draft.overlaps);
    queue.sort_unstable_by_key(|(m, _)| *m);
    for (m, covering) in queue {
        let g = most_similar_group(m, &covering, &members, &draft.groups, dist, data);
        draft.assign(m, Label::Group(g), Provenance::ReassignedOverlap);
    }
    draft.finish()
}

/// Intermediate products of one pipeline run.
#[derive(Debug, Clone)]
pub struct NcarRun {
    pub profile: DensityProfile,
    /// Targets in ascending index order; group `g` is seeded by `targets[g]`.
    pub targets: Vec<usize>,
    /// Sorted by pair distance; empty for a single target.
    pub pairings: Vec<TargetPairing>,
    /// Farthest admissible point per pairing.
    pub farthest: Vec<Option<FarthestPoint>>,
    pub partition: Partition,
}

impl NcarRun {
    pub fn farthest_of(&self, target: usize) -> Option<FarthestPoint> {
        self.pairings
            .iter()
            .position(|p| p.target == target)
            .and_then(|i| self.farthest[i])
    }

    pub fn pairing_of(&self, target: usize) -> Option<&TargetPairing> {
        self.pairings.iter().find(|p| p.target == target)
    }
}

fn single_group(n: usize, target: usize) -> Result<Partition> {
    let assignments = vec![Label::Group(0); n];
    let provenance = (0..n)
        .map(|i| {
            if i == target {
                Provenance::Target
            } else {
                Provenance::ReassignedUncovered
            }
        })
        .collect();
    let groups = vec![Group {
        id: 0,
        target: Some(target),
        region: None,
    }];
    Partition::new(assignments, groups, provenance)
}

/// Runs the full pipeline and keeps the intermediate products.
pub fn run_ncar_detailed(data: &DataSet, params: &NcarParams) -> Result<NcarRun> {
    let dist = DistanceMatrix::from_dataset(data);
    run_ncar_with_distances(data, &dist, params)
}

/// [`run_ncar_detailed`] with a precomputed distance matrix.
pub fn run_ncar_with_distances(data: &DataSet, dist: &DistanceMatrix, params: &NcarParams) -> Result<NcarRun> {
    let n = data.len();
    if dist.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: dist.len(),
        });
    }
    let profile = DensityProfile::compute(dist, params.p)?;

    if dist.diameter() == 0.0 {
        return Ok(NcarRun {
            profile,
            targets: vec![0],
            pairings: Vec::new(),
            farthest: Vec::new(),
            partition: single_group(n, 0)?,
        });
    }

    let mut targets = profile.select_targets(params.target_count)?;
    targets.sort_unstable();

    let pairings = match pair_targets(&targets, dist) {
        Ok(p) => p,
        Err(Error::SingleTarget) => {
            return Ok(NcarRun {
                partition: single_group(n, targets[0])?,
                profile,
                targets,
                pairings: Vec::new(),
                farthest: Vec::new(),
            });
        }
        Err(e) => return Err(e),
    };

    let mut is_target = vec![false; n];
    for &t in &targets {
        is_target[t] = true;
    }
    let non_targets: Vec<usize> = (0..n).filter(|&i| !is_target[i]).collect();

    let farthest: Vec<Option<FarthestPoint>> = pairings
        .iter()
        .map(|p| farthest_admissible(p, dist, &targets, &non_targets))
        .collect();
    let regions = build_group_regions(&pairings, &farthest, data)?;

    let mut groups: Vec<Group> = targets
        .iter()
        .enumerate()
        .map(|(id, &t)| Group {
            id,
            target: Some(t),
            region: None,
        })
        .collect();
    for (pairing, region) in pairings.iter().zip(regions) {
        let id = targets.binary_search(&pairing.target).expect("paired target");
        groups[id].region = region;
    }

    let draft = initial_assignment(groups, data);
    let draft = detect_outliers(draft, dist, &pairings);
    let draft = reassign_uncovered(draft, dist, data);
    let partition = resolve_overlaps(draft, dist, data)?;

    Ok(NcarRun {
        profile,
        targets,
        pairings,
        farthest,
        partition,
    })
}

pub fn run_ncar(data: &DataSet, params: &NcarParams) -> Result<Partition> {
    run_ncar_detailed(data, params).map(|r| r.partition)
}

/// One step of the ratio sequence around a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KStep {
    /// Farthest remaining candidate (lowest index among equally far ones).
    pub point: usize,
    /// `d(target, point) / d(partner, point)`.
    pub k: f64,
    /// Mean of the ratios emitted so far.
    pub mean: f64,
    /// Sample variance of the ratios emitted so far; zero for the first.
    pub variance: f64,
}

/// Peels farthest points off a target's candidate set and reports the ratio
/// sequence with running mean and variance. Candidates are the non-targets
/// strictly closer to the target than its partner. Observational only.
pub fn k_sequence_diagnostic(
    pairing: &TargetPairing,
    dist: &DistanceMatrix,
    non_targets: &[usize],
) -> Vec<KStep> {
    let t = pairing.target;
    let mut remaining: Vec<usize> = non_targets
        .iter()
        .copied()
        .filter(|&m| dist.get(t, m) < pairing.pair_distance)
        .collect();
    // farthest first, lowest index among equals
    remaining.sort_by(|&a, &b| dist.get(t, b).total_cmp(&dist.get(t, a)).then(a.cmp(&b)));

    let mut steps = Vec::new();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut i = 0;
    while i < remaining.len() {
        let m = remaining[i];
        let fd = dist.get(t, m);
        let k = fd / dist.get(pairing.partner, m);
        sum += k;
        sum_sq += k * k;
        let j = (steps.len() + 1) as f64;
        let mean = sum / j;
        let variance = if steps.is_empty() {
            0.0
        } else {
            ((sum_sq - j * mean * mean) / (j - 1.0)).max(0.0)
        };
        steps.push(KStep {
            point: m,
            k,
            mean,
            variance,
        });
        // the whole farthest set is removed at once
        while i < remaining.len() && dist.get(t, remaining[i]) == fd {
            i += 1;
        }
    }
    steps
}
