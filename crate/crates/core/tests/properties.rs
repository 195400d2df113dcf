mod common;

use common::*;
use ncar::baselines::{
    auto_epsilon, dpc_nearest_center_with_distances, epsilon_groups_with_distances, knn_graph_groups_with_distances,
    knn_k,
};
use ncar::data::{load_csv, normalize_zscore, save_csv, CsvOptions, DataSet, Source};
use ncar::density::{DensityProfile, DistanceMatrix};
use ncar::geometry::{ratio, ApolloniusRegion, RegionForm, Side, BOUNDARY_TOL};
use ncar::metrics::{pair_counts, rand_index, similarity_neighborhood, variability_neighborhood};
use ncar::ncar::{farthest_admissible as lib_farthest, pair_targets, run_ncar, run_ncar_detailed, NcarParams};
use ncar::partition::{Label, Provenance};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![-10.0..10.0f64, (-4i32..=4).prop_map(f64::from)]
}

fn rows(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4, 2usize..=max_n)
        .prop_flat_map(|(dim, n)| prop::collection::vec(prop::collection::vec(coord(), dim), n))
        .prop_filter("needs two distinct points", |r| r.iter().any(|x| x != &r[0]))
}

fn unit(theta: &[f64]) -> Vec<f64> {
    let norm = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
    theta.iter().map(|v| v / norm).collect()
}

fn focus_pair(dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(-10.0..10.0f64, dim),
        prop::collection::vec(-10.0..10.0f64, dim),
    )
        .prop_filter("distinct foci", |(a, b)| dist(a, b) > 1e-3)
}

fn ratio_k() -> impl Strategy<Value = f64> {
    prop_oneof![0.05..0.95f64, 1.05..20.0f64]
}

fn boundary_ratio_holds(a: &[f64], b: &[f64], k: f64, dir: &[f64]) -> Result<(), TestCaseError> {
    let region = ApolloniusRegion::new(a, b, k).unwrap();
    let c = region.center().unwrap();
    let r = region.radius().unwrap();
    let m: Vec<f64> = c.iter().zip(dir).map(|(ci, u)| ci + r * u).collect();
    let got = ratio(a, b, &m).unwrap();
    prop_assert!((got - k).abs() <= 1e-7 * k.max(1.0), "ratio {} vs k {}", got, k);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_points_have_ratio_k_2d((a, b) in focus_pair(2), k in ratio_k(), theta in 0.0..std::f64::consts::TAU) {
        boundary_ratio_holds(&a, &b, k, &[theta.cos(), theta.sin()])?;
    }

    #[test]
    fn boundary_points_have_ratio_k_3d((a, b) in focus_pair(3), k in ratio_k(), dir in prop::collection::vec(-1.0..1.0f64, 3)) {
        prop_assume!(dir.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        boundary_ratio_holds(&a, &b, k, &unit(&dir))?;
    }

    #[test]
    fn boundary_points_have_ratio_k_7d((a, b) in focus_pair(7), k in ratio_k(), dir in prop::collection::vec(-1.0..1.0f64, 7)) {
        prop_assume!(dir.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        boundary_ratio_holds(&a, &b, k, &unit(&dir))?;
    }

    #[test]
    fn ratio_test_agrees_with_center_radius_test((a, b) in focus_pair(2), k in ratio_k(), m in prop::collection::vec(-30.0..30.0f64, 2)) {
        let region = ApolloniusRegion::new(&a, &b, k).unwrap();
        let rm = dist(&a, &m) / dist(&m, &b);
        prop_assume!((rm - k).abs() > 1e-6 * k.max(1.0));
        let inside_sphere = dist(&m, region.center().unwrap()) < region.radius().unwrap();
        let side = region.side_of(&m);
        prop_assert_ne!(side, Side::OnBoundary);
        prop_assert_eq!(side == Side::Inside, inside_sphere);
    }

    #[test]
    fn bisector_form_near_unit_ratio((a, b) in focus_pair(2), eps in -1e-10..1e-10f64) {
        let region = ApolloniusRegion::new(&a, &b, 1.0 + eps).unwrap();
        prop_assert_eq!(region.form(), RegionForm::BisectorLine);
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x + y) / 2.0).collect();
        prop_assert_eq!(region.side_of(&mid), Side::OnBoundary);
    }

    #[test]
    fn delta_and_score_match_exhaustive_search(rows in rows(30), p in 0.02..0.5f64) {
        let d = DistanceMatrix::from_points(&rows).unwrap();
        let profile = DensityProfile::compute(&d, p).unwrap();
        let (delta, nearest, score) = delta_score(&rows, p);
        prop_assert_eq!(&profile.log_rho, &log_density(&rows, p));
        prop_assert_eq!(&profile.delta, &delta);
        prop_assert_eq!(&profile.nearest_higher, &nearest);
        prop_assert_eq!(&profile.score, &score);
    }

    #[test]
    fn scaling_scales_delta_and_keeps_rho_order(rows in rows(30), p in 0.02..0.5f64, c in prop_oneof![Just(2.0f64), Just(0.5), Just(4.0)]) {
        // powers of two keep every product exact
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
        let base = DensityProfile::compute(&DistanceMatrix::from_points(&rows).unwrap(), p).unwrap();
        let big = DensityProfile::compute(&DistanceMatrix::from_points(&scaled).unwrap(), p).unwrap();
        for (x, y) in base.delta.iter().zip(&big.delta) {
            prop_assert_eq!(x * c, *y);
        }
        prop_assert_eq!(&base.nearest_higher, &big.nearest_higher);
        let n = rows.len();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(base.log_rho[i] < base.log_rho[j], big.log_rho[i] < big.log_rho[j]);
            }
        }
    }

    #[test]
    fn permuting_points_permutes_profile(rows in rows(25), p in 0.02..0.5f64, seed in any::<u64>()) {
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = seeded(seed);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let a = DensityProfile::compute(&DistanceMatrix::from_points(&rows).unwrap(), p).unwrap();
        let b = DensityProfile::compute(&DistanceMatrix::from_points(&permuted).unwrap(), p).unwrap();
        for (new, &old) in perm.iter().enumerate() {
            prop_assert_eq!(a.rho[old], b.rho[new]);
            prop_assert_eq!(a.delta[old], b.delta[new]);
            prop_assert_eq!(a.score[old], b.score[new]);
        }
    }

    #[test]
    fn farthest_admissible_matches_enumeration(rows in rows(30), picks in prop::collection::vec(any::<prop::sample::Index>(), 2..6)) {
        let n = rows.len();
        let mut targets: Vec<usize> = picks.iter().map(|ix| ix.index(n)).collect();
        targets.sort_unstable();
        targets.dedup();
        prop_assume!(targets.len() >= 2);
        let d = DistanceMatrix::from_points(&rows).unwrap();
        let non_targets: Vec<usize> = (0..n).filter(|i| !targets.contains(i)).collect();
        for pairing in pair_targets(&targets, &d).unwrap() {
            prop_assert_eq!(pairing.partner, partner_of(&rows, &targets, pairing.target));
            let got = lib_farthest(&pairing, &d, &targets, &non_targets).map(|f| f.point);
            prop_assert_eq!(got, farthest_admissible(&rows, &targets, pairing.target, pairing.partner));
        }
    }

    #[test]
    fn ncar_partition_is_total_and_sound(rows in rows(40), p in 0.02..0.3f64, t in 1usize..5) {
        let data = dataset(&rows);
        prop_assume!(t <= rows.len());
        let run = run_ncar_detailed(&data, &NcarParams { p, target_count: Some(t) }).unwrap();
        let part = &run.partition;
        let grouped: usize = part.members().iter().map(Vec::len).sum();
        prop_assert_eq!(grouped + part.outliers().len(), rows.len());
        for (i, prov) in part.provenance().iter().enumerate() {
            if *prov == Provenance::InsideCircle {
                let g = part.label(i).group().unwrap();
                let region = part.groups()[g].region.as_ref().unwrap();
                prop_assert_ne!(region.side_of(data.row(i)), Side::Outside);
            }
        }
        // determinism
        let again = run_ncar(&data, &NcarParams { p, target_count: Some(t) }).unwrap();
        prop_assert_eq!(part, &again);
    }

    #[test]
    fn grouping_is_permutation_covariant(rows in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 2), 8..30), seed in any::<u64>()) {
        let n = rows.len();
        let params = NcarParams { p: 0.1, target_count: Some(3) };
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut seeded(seed));
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let a = run_ncar(&dataset(&rows), &params).unwrap();
        let b = run_ncar(&dataset(&permuted), &params).unwrap();
        let a_ids = singleton_ids(a.assignments());
        let b_back: Vec<Label> = {
            let mut v = vec![Label::Outlier; n];
            for (new, &old) in perm.iter().enumerate() {
                v[old] = b.label(new);
            }
            v
        };
        prop_assert!(same_partition(&a_ids, &singleton_ids(&b_back)));
        prop_assert_eq!(a.outliers().len(), b.outliers().len());
    }

    #[test]
    fn moving_an_outlier_away_keeps_it_an_outlier(seed in any::<u64>(), factor in 1.01..5.0f64) {
        let mut rng = seeded(seed);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for c in [[0.0, 0.0], [6.0, 0.0], [3.0, 5.0]] {
            for _ in 0..12 {
                rows.push(vec![c[0] + rand::Rng::random_range(&mut rng, -1.0..1.0), c[1] + rand::Rng::random_range(&mut rng, -1.0..1.0)]);
            }
        }
        let angle: f64 = rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU);
        let dist0: f64 = rand::Rng::random_range(&mut rng, 8.0..20.0);
        let centroid = [3.0, 5.0 / 3.0];
        rows.push(vec![centroid[0] + dist0 * angle.cos(), centroid[1] + dist0 * angle.sin()]);
        let o = rows.len() - 1;
        let params = NcarParams { p: 0.1, target_count: Some(3) };
        let first = run_ncar_detailed(&dataset(&rows), &params).unwrap();
        prop_assume!(first.partition.label(o) == Label::Outlier);
        // push the outlier along the ray from its nearest target
        let t = *first.targets.iter().min_by(|&&x, &&y| dist(&rows[x], &rows[o]).total_cmp(&dist(&rows[y], &rows[o]))).unwrap();
        let moved: Vec<f64> = rows[t].iter().zip(&rows[o]).map(|(a, b)| a + factor * (b - a)).collect();
        prop_assume!(first.targets.iter().all(|&l| dist(&rows[l], &moved) > dist(&rows[l], &rows[o])));
        let mut rows2 = rows.clone();
        rows2[o] = moved;
        let second = run_ncar_detailed(&dataset(&rows2), &params).unwrap();
        prop_assert_eq!(&second.targets, &first.targets);
        prop_assert_eq!(second.partition.label(o), Label::Outlier);
    }

    #[test]
    fn graph_baselines_match_bfs(rows in rows(40), kf in 0.02..0.6f64, eps in 0.1..8.0f64) {
        let n = rows.len();
        let d = DistanceMatrix::from_points(&rows).unwrap();
        let knn = knn_graph_groups_with_distances(&d, kf).unwrap();
        let expected = bfs_components(&knn_adjacency(&rows, knn_k(kf, n).unwrap()));
        prop_assert!(same_partition(knn.assignments(), &expected));
        prop_assert!(knn.outliers().is_empty());

        let eg = epsilon_groups_with_distances(&d, Some(eps)).unwrap();
        let comps = bfs_components(&epsilon_adjacency(&rows, eps));
        prop_assert!(same_partition(&singleton_ids(eg.assignments()), &comps));
        for i in 0..n {
            let alone = comps.iter().filter(|&&c| c == comps[i]).count() == 1;
            prop_assert_eq!(alone, eg.label(i) == Label::Outlier);
        }
    }

    #[test]
    fn larger_epsilon_never_adds_components(rows in rows(40), e1 in 0.05..5.0f64, grow in 0.0..5.0f64) {
        let d = DistanceMatrix::from_points(&rows).unwrap();
        let count = |e: f64| {
            let p = epsilon_groups_with_distances(&d, Some(e)).unwrap();
            p.group_count() + p.outliers().len()
        };
        prop_assert!(count(e1 + grow) <= count(e1));
        prop_assert!(auto_epsilon(&d) >= 0.0);
    }

    #[test]
    fn dpc_is_voronoi_consistent(rows in rows(40), c in 1usize..5) {
        prop_assume!(c <= rows.len());
        let d = DistanceMatrix::from_points(&rows).unwrap();
        let part = dpc_nearest_center_with_distances(&d, 0.1, c).unwrap();
        let centers = part.targets();
        for i in 0..rows.len() {
            let g = part.label(i).group().unwrap();
            let best = centers.iter().map(|&ct| dist(&rows[i], &rows[ct])).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(dist(&rows[i], &rows[centers[g]]), best);
        }
    }

    #[test]
    fn rand_index_matches_pair_enumeration(labels in prop::collection::vec((0usize..5, 0usize..4), 2..60)) {
        let (x, y): (Vec<usize>, Vec<usize>) = labels.into_iter().unzip();
        let n = x.len() as u64;
        let counts = pair_counts(&x, &y).unwrap();
        let (a, b, c, d, ri) = rand_index_pairs(&x, &y);
        prop_assert_eq!((counts.a, counts.b, counts.c, counts.d), (a, b, c, d));
        prop_assert_eq!(counts.total(), n * (n - 1) / 2);
        prop_assert_eq!(counts.rand_index(), ri);
        // symmetry and relabeling invariance
        prop_assert_eq!(pair_counts(&y, &x).unwrap().rand_index(), ri);
        let relabeled: Vec<usize> = x.iter().map(|v| 100 - v).collect();
        prop_assert_eq!(pair_counts(&relabeled, &y).unwrap().rand_index(), ri);
        let predicted: Vec<Label> = x.iter().map(|&g| Label::Group(g)).collect();
        prop_assert_eq!(rand_index(&predicted, &y).unwrap(), ri);
    }

    #[test]
    fn vn_is_translation_invariant_and_scales(rows in rows(30), shift in -5.0..5.0f64) {
        let data = dataset(&rows);
        let part = run_ncar(&data, &NcarParams { p: 0.1, target_count: Some(2.min(rows.len())) }).unwrap();
        let vn = |r: &[Vec<f64>]| variability_neighborhood(&part, &DistanceMatrix::from_points(r).unwrap()).unwrap();
        let base = vn(&rows);
        let shifted: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v + shift).collect()).collect();
        prop_assert!((vn(&shifted) - base).abs() <= 1e-9 * base.max(1.0));
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * 3.0).collect()).collect();
        prop_assert!((vn(&scaled) - 3.0 * base).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn sn_is_one_on_class_pure_groups(rows in rows(30)) {
        let data = dataset(&rows);
        let part = run_ncar(&data, &NcarParams { p: 0.1, target_count: Some(2) }).unwrap();
        // classes equal to the predicted groups, outliers in a class of their own
        let truth = singleton_ids(part.assignments());
        prop_assert_eq!(similarity_neighborhood(&part, &truth).unwrap(), 1.0);
    }

    #[test]
    fn csv_round_trip_is_bit_exact(rows in rows(20), labelled in any::<bool>()) {
        let mut data = DataSet::from_rows("rt", rows.clone(), Source::Fixture).unwrap();
        if labelled {
            let names: Vec<String> = (0..rows.len()).map(|i| format!("c{}", i % 3)).collect();
            data = data.with_named_labels(&names).unwrap();
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.csv");
        save_csv(&data, &path).unwrap();
        let opts = CsvOptions {
            label_column: if labelled { ncar::data::LabelColumn::Last } else { ncar::data::LabelColumn::None },
            ..CsvOptions::default()
        };
        let back = load_csv(&path, &opts).unwrap();
        for i in 0..rows.len() {
            let same = back.row(i).iter().zip(data.row(i)).all(|(a, b)| a.to_bits() == b.to_bits() || (*a == 0.0 && *b == 0.0));
            prop_assert!(same);
        }
        prop_assert_eq!(back.labels(), data.labels());
        prop_assert_eq!(back.label_names(), data.label_names());
    }

    #[test]
    fn zscore_gives_zero_mean_unit_sd(rows in rows(30)) {
        let data = dataset(&rows);
        let z = normalize_zscore(&data);
        let n = rows.len() as f64;
        for c in 0..data.dim() {
            let col: Vec<f64> = (0..rows.len()).map(|i| z.row(i)[c]).collect();
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!(var.abs() < 1e-9 || (var - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn boundary_band_is_on_boundary() {
    let region = ApolloniusRegion::new(&[0.0, 0.0], &[4.0, 0.0], 1.0 / 3.0).unwrap();
    // (1, 0) has ratio exactly 1/3
    assert_eq!(region.side_of(&[1.0, 0.0]), Side::OnBoundary);
    let nudged = 1.0 + BOUNDARY_TOL / 10.0;
    assert_eq!(region.side_of(&[nudged, 0.0]), Side::OnBoundary);
}
