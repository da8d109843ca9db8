//! Distance matrices over collections of series and agglomerative
//! clustering.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lti::Signal;
use crate::metrics::{cosine_similarity, euclidean_distance, weighted_cepstral_distance};
use crate::phase::{classify_from_io, IoClassifierConfig, PhaseKind};
use crate::spectral::{
    power_cepstrum_of_signal, transfer_cepstrum_from_io, CepstrumSequence, Estimator, DEFAULT_ORDER,
};
use crate::subspace::{
    observability_ranges_from_data, subspace_distance_between_ranges, HankelConfig,
    ObservabilityRanges,
};

/// A named output series, with the input that drove it when known.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub id: String,
    pub input: Option<Signal>,
    pub output: Signal,
}

impl Series {
    pub fn autonomous(id: impl Into<String>, output: Signal) -> Self {
        Self {
            id: id.into(),
            input: None,
            output,
        }
    }

    pub fn driven(id: impl Into<String>, input: Signal, output: Signal) -> Self {
        Self {
            id: id.into(),
            input: Some(input),
            output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Euclidean distance between the outputs.
    Euclidean,
    /// `1 - cos θ` between the outputs.
    CosineDerived,
    /// Weighted cepstral distance `d_c`; power cepstra of the outputs, or
    /// transfer cepstra when inputs are given.
    Cepstral,
    /// Square root of the data-driven subspace distance. Needs inputs and
    /// stable minimum-phase systems.
    Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig {
    pub estimator: Estimator,
    /// Cepstral order `K`.
    pub order: usize,
    pub hankel: HankelConfig,
    /// Phase gate applied before the subspace metric.
    pub phase: IoClassifierConfig,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            estimator: Estimator::Auto,
            order: DEFAULT_ORDER,
            hankel: HankelConfig::default(),
            phase: IoClassifierConfig::default(),
        }
    }
}

/// A pairwise computation that failed. `first == second` marks a failure
/// of the series itself, which poisons its whole row.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFailure {
    pub first: usize,
    pub second: usize,
    pub error: Error,
}

/// Symmetric matrix of pairwise distances with an exact zero diagonal.
/// Failed entries hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    metric: Metric,
    ids: Vec<String>,
    failures: Vec<PairFailure>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major values, checking the invariants.
    pub fn from_values(ids: Vec<String>, values: Vec<f64>, metric: Metric) -> Result<Self> {
        let n = ids.len();
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "distance matrix entries",
                expected: n * n,
                found: values.len(),
            });
        }
        for a in 0..n {
            if values[a * n + a] != 0.0 {
                return Err(Error::InvalidArgument(
                    "distance matrix diagonal must be zero",
                ));
            }
            for b in 0..a {
                let (x, y) = (values[a * n + b], values[b * n + a]);
                if x.is_nan() != y.is_nan() || x < 0.0 || libm::fabs(x - y) > 1e-10 {
                    return Err(Error::InvalidArgument(
                        "distance matrix must be symmetric and nonnegative",
                    ));
                }
            }
        }
        let failures = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| values[a * n + b].is_nan())
            .map(|(first, second)| PairFailure {
                first,
                second,
                error: Error::InvalidArgument("entry missing"),
            })
            .collect();
        Ok(Self {
            n,
            values,
            metric,
            ids,
            failures,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.n + b]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn failures(&self) -> &[PairFailure] {
        &self.failures
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Series to leave out so that no failed entry remains: repeatedly the
    /// one with the most failed entries, the later one on ties.
    pub fn poisoned(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        loop {
            let bad = |a: usize| {
                (0..self.n)
                    .filter(|b| !out.contains(b) && self.get(a, *b).is_nan())
                    .count()
            };
            let worst = (0..self.n)
                .filter(|a| !out.contains(a))
                .map(|a| (bad(a), a))
                .max();
            match worst {
                Some((count, a)) if count > 0 => out.push(a),
                _ => break,
            }
        }
        out.sort_unstable();
        out
    }

    fn set(&mut self, a: usize, b: usize, v: f64) {
        self.values[a * self.n + b] = v;
        self.values[b * self.n + a] = v;
    }
}

enum Feature {
    Output,
    Cepstrum(CepstrumSequence),
    Ranges(ObservabilityRanges),
}

fn feature(s: &Series, metric: Metric, config: &MetricConfig) -> Result<Feature> {
    match metric {
        Metric::Euclidean | Metric::CosineDerived => Ok(Feature::Output),
        Metric::Cepstral => Ok(Feature::Cepstrum(match &s.input {
            Some(u) => transfer_cepstrum_from_io(u, &s.output, &config.estimator, config.order)?,
            None => power_cepstrum_of_signal(&s.output, &config.estimator, config.order)?,
        })),
        Metric::Subspace => {
            let u = s.input.as_ref().ok_or(Error::InvalidArgument(
                "subspace metric needs an input signal",
            ))?;
            match classify_from_io(u, &s.output, &config.phase)?.kind {
                PhaseKind::MinimumPhaseStable | PhaseKind::Indeterminate => {}
                PhaseKind::MaximumPhaseUnstable => return Err(Error::NotMinimumPhaseStable),
                PhaseKind::Mixed => return Err(Error::MixedPhaseUnsupported),
            }
            Ok(Feature::Ranges(observability_ranges_from_data(
                u,
                &s.output,
                &config.hankel,
            )?))
        }
    }
}

fn pair(a: (&Series, &Feature), b: (&Series, &Feature), metric: Metric) -> Result<f64> {
    match (a.1, b.1) {
        (Feature::Cepstrum(x), Feature::Cepstrum(y)) => {
            Ok(weighted_cepstral_distance(x, y)?.value())
        }
        (Feature::Ranges(x), Feature::Ranges(y)) => {
            Ok(libm::sqrt(subspace_distance_between_ranges(x, y)?.max(0.0)))
        }
        _ if metric == Metric::Euclidean => euclidean_distance(&a.0.output, &b.0.output),
        _ => Ok((1.0 - cosine_similarity(&a.0.output, &b.0.output)?).max(0.0)),
    }
}

/// All pairwise distances under `metric`. A series whose feature cannot be
/// computed, or a pair whose distance fails, is recorded in
/// [`DistanceMatrix::failures`] with NaN entries; the batch carries on.
pub fn distance_matrix(
    series: &[Series],
    metric: Metric,
    config: &MetricConfig,
) -> Result<DistanceMatrix> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two series"));
    }
    let mut dm = DistanceMatrix {
        n,
        values: vec![0.0; n * n],
        metric,
        ids: series.iter().map(|s| s.id.clone()).collect(),
        failures: Vec::new(),
    };
    let mut features = Vec::with_capacity(n);
    for (a, s) in series.iter().enumerate() {
        match feature(s, metric, config) {
            Ok(f) => features.push(Some(f)),
            Err(error) => {
                log::warn!("series {} excluded: {error}", s.id);
                dm.failures.push(PairFailure {
                    first: a,
                    second: a,
                    error,
                });
                features.push(None);
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let (Some(fa), Some(fb)) = (&features[a], &features[b]) else {
                dm.set(a, b, f64::NAN);
                continue;
            };
            match pair((&series[a], fa), (&series[b], fb), metric) {
                Ok(d) => dm.set(a, b, d),
                Err(error) => {
                    dm.set(a, b, f64::NAN);
                    dm.failures.push(PairFailure {
                        first: a,
                        second: b,
                        error,
                    });
                }
            }
        }
    }
    Ok(dm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    Single,
    Average,
    Complete,
}

/// One merge step; clusters are named by their smallest member index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster of each series, numbered by first appearance; `None` for
    /// excluded series.
    pub labels: Vec<Option<usize>>,
    pub merges: Vec<Merge>,
    /// Series left out because of failed distance entries.
    pub excluded: Vec<usize>,
}

impl Clustering {
    pub fn cluster_count(&self) -> usize {
        self.labels.iter().flatten().max().map_or(0, |m| m + 1)
    }
}

/// Agglomerative clustering into `k` clusters with Lance-Williams updates.
/// Among equally close pairs the one with the lowest indices merges first.
pub fn agglomerative_cluster(
    dm: &DistanceMatrix,
    linkage: Linkage,
    k: usize,
) -> Result<Clustering> {
    let excluded = dm.poisoned();
    let active: Vec<usize> = (0..dm.len()).filter(|a| !excluded.contains(a)).collect();
    if k == 0 || k > active.len() {
        return Err(Error::InvalidArgument("cluster count must lie in 1..=n"));
    }
    let m = active.len();
    let mut d: Vec<f64> = active
        .iter()
        .flat_map(|&a| active.iter().map(move |&b| (a, b)))
        .map(|(a, b)| dm.get(a, b))
        .collect();
    let mut size = vec![1usize; m];
    let mut owner: Vec<usize> = (0..m).collect();
    let mut alive = vec![true; m];
    let mut merges = Vec::with_capacity(m - k);
    for _ in 0..m - k {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..m {
            for b in a + 1..m {
                if alive[a] && alive[b] && best.is_none_or(|(_, _, v)| d[a * m + b] < v) {
                    best = Some((a, b, d[a * m + b]));
                }
            }
        }
        let (a, b, dist) = best.expect("at least two clusters remain");
        for c in (0..m).filter(|&c| alive[c] && c != a && c != b) {
            let (da, db) = (d[a * m + c], d[b * m + c]);
            let v = match linkage {
                Linkage::Single => da.min(db),
                Linkage::Complete => da.max(db),
                Linkage::Average => {
                    (size[a] as f64 * da + size[b] as f64 * db) / (size[a] + size[b]) as f64
                }
            };
            d[a * m + c] = v;
            d[c * m + a] = v;
        }
        size[a] += size[b];
        alive[b] = false;
        for o in owner.iter_mut().filter(|o| **o == b) {
            *o = a;
        }
        merges.push(Merge {
            first: active[a],
            second: active[b],
            distance: dist,
        });
    }
    let mut labels = vec![None; dm.len()];
    let mut seen: Vec<usize> = Vec::new();
    for (pos, &a) in active.iter().enumerate() {
        let root = owner[pos];
        let label = match seen.iter().position(|&r| r == root) {
            Some(l) => l,
            None => {
                seen.push(root);
                seen.len() - 1
            }
        };
        labels[a] = Some(label);
    }
    Ok(Clustering {
        labels,
        merges,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::{make_example_signals, ZeroPoleGain, DEFAULT_DAMPING};
    use alloc::format;
    use proptest::prelude::*;

    fn matrix(n: usize, values: &[f64]) -> DistanceMatrix {
        let ids = (0..n).map(|a| format!("s{a}")).collect();
        DistanceMatrix::from_values(ids, values.to_vec(), Metric::Euclidean).unwrap()
    }

    fn line(points: &[f64]) -> DistanceMatrix {
        let n = points.len();
        let v: Vec<f64> = (0..n * n)
            .map(|i| libm::fabs(points[i / n] - points[i % n]))
            .collect();
        matrix(n, &v)
    }

    #[test]
    fn identical_series_give_zero_matrix() {
        let y = make_example_signals(DEFAULT_DAMPING, 1).unwrap().sine;
        let s: Vec<Series> = (0..3)
            .map(|a| Series::autonomous(format!("{a}"), y.clone()))
            .collect();
        for metric in [Metric::Euclidean, Metric::CosineDerived, Metric::Cepstral] {
            let dm = distance_matrix(&s, metric, &MetricConfig::default()).unwrap();
            assert!(dm.values().iter().all(|v| v.abs() < 1e-12), "{metric:?}");
            assert!(dm.failures().is_empty());
        }
    }

    #[test]
    fn matrix_invariants() {
        let ex = make_example_signals(DEFAULT_DAMPING, 3).unwrap();
        let s = [
            Series::autonomous("sin", ex.sine),
            Series::autonomous("cos", ex.cosine),
            Series::autonomous("gauss", ex.noise),
        ];
        for metric in [Metric::Euclidean, Metric::CosineDerived, Metric::Cepstral] {
            let dm = distance_matrix(&s, metric, &MetricConfig::default()).unwrap();
            assert_eq!(dm.ids(), ["sin", "cos", "gauss"]);
            for a in 0..3 {
                assert_eq!(dm.get(a, a), 0.0);
                for b in 0..3 {
                    assert!(dm.get(a, b) >= 0.0);
                    assert_eq!(dm.get(a, b), dm.get(b, a));
                }
            }
        }
    }

    #[test]
    fn too_few_series() {
        let y = Signal::from_samples(vec![1.0; 8]).unwrap();
        assert!(distance_matrix(
            &[Series::autonomous("a", y)],
            Metric::Euclidean,
            &MetricConfig::default()
        )
        .is_err());
    }

    #[test]
    fn failures_poison_entries() {
        let a = Signal::from_samples(vec![1.0, 2.0, 3.0]).unwrap();
        let b = Signal::from_samples(vec![1.0, 2.0]).unwrap();
        let s = [
            Series::autonomous("a", a.clone()),
            Series::autonomous("b", b),
            Series::autonomous("c", a),
        ];
        let dm = distance_matrix(&s, Metric::Euclidean, &MetricConfig::default()).unwrap();
        assert!(dm.get(0, 1).is_nan() && dm.get(1, 2).is_nan());
        assert_eq!(dm.get(0, 2), 0.0);
        assert_eq!(dm.failures().len(), 2);
        assert_eq!(dm.poisoned(), [1]);
        let c = agglomerative_cluster(&dm, Linkage::Single, 1).unwrap();
        assert_eq!(c.labels, [Some(0), None, Some(0)]);
        assert_eq!(c.excluded, [1]);
    }

    #[test]
    fn subspace_metric_gates_autonomous_series() {
        let y = make_example_signals(DEFAULT_DAMPING, 1).unwrap().sine;
        let s = [
            Series::autonomous("a", y.clone()),
            Series::autonomous("b", y),
        ];
        let dm = distance_matrix(&s, Metric::Subspace, &MetricConfig::default()).unwrap();
        assert_eq!(dm.failures().len(), 2);
        assert_eq!(dm.failures()[0].first, dm.failures()[0].second);
    }

    #[test]
    fn subspace_metric_on_driven_series() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut s = Vec::new();
        for (id, pole) in [("a", 0.5), ("b", 0.5), ("c", 0.9)] {
            let u =
                Signal::from_samples((0..2048).map(|_| StandardNormal.sample(&mut rng)).collect())
                    .unwrap();
            let ss = ZeroPoleGain::from_real(&[pole], &[], 1.0)
                .unwrap()
                .to_state_space()
                .unwrap();
            let y = ss.simulate(&u, &[0.0]).unwrap();
            s.push(Series::driven(id, u, y));
        }
        let cfg = MetricConfig {
            hankel: HankelConfig {
                rows: 64,
                ..HankelConfig::default()
            },
            ..MetricConfig::default()
        };
        let dm = distance_matrix(&s, Metric::Subspace, &cfg).unwrap();
        assert!(dm.failures().is_empty(), "{:?}", dm.failures());
        assert!(dm.get(0, 1) < 1e-4);
        let exact = libm::sqrt(libm::log(0.55 * 0.55 / (0.75 * 0.19)));
        assert!((dm.get(0, 2) - exact).abs() < 1e-4, "{}", dm.get(0, 2));
    }

    #[test]
    fn from_values_checks() {
        let ids = || vec![String::from("a"), String::from("b")];
        assert!(
            DistanceMatrix::from_values(ids(), vec![0.0, 1.0, 1.0, 0.0], Metric::Cepstral).is_ok()
        );
        assert!(
            DistanceMatrix::from_values(ids(), vec![0.0, 1.0, 2.0, 0.0], Metric::Cepstral).is_err()
        );
        assert!(
            DistanceMatrix::from_values(ids(), vec![1.0, 1.0, 1.0, 0.0], Metric::Cepstral).is_err()
        );
        assert!(
            DistanceMatrix::from_values(ids(), vec![0.0, -1.0, -1.0, 0.0], Metric::Cepstral)
                .is_err()
        );
        assert!(DistanceMatrix::from_values(ids(), vec![0.0; 3], Metric::Cepstral).is_err());
    }

    #[test]
    fn trivial_cluster_counts() {
        let dm = line(&[0.0, 1.0, 5.0, 6.0]);
        for linkage in [Linkage::Single, Linkage::Average, Linkage::Complete] {
            let all = agglomerative_cluster(&dm, linkage, 4).unwrap();
            assert_eq!(all.labels, [Some(0), Some(1), Some(2), Some(3)]);
            assert!(all.merges.is_empty());
            let one = agglomerative_cluster(&dm, linkage, 1).unwrap();
            assert_eq!(one.labels, [Some(0); 4]);
            assert_eq!(one.merges.len(), 3);
            let two = agglomerative_cluster(&dm, linkage, 2).unwrap();
            assert_eq!(two.labels, [Some(0), Some(0), Some(1), Some(1)]);
            assert_eq!(two.cluster_count(), 2);
        }
        assert!(agglomerative_cluster(&dm, Linkage::Single, 0).is_err());
        assert!(agglomerative_cluster(&dm, Linkage::Single, 5).is_err());
    }

    #[test]
    fn linkage_update_rules() {
        // Points 0, 1, 3: after merging {0, 1}, the distance to 3 is 2, 2.5
        // or 3 depending on linkage.
        let dm = line(&[0.0, 1.0, 3.0]);
        let last = |l| agglomerative_cluster(&dm, l, 1).unwrap().merges[1].distance;
        assert_eq!(last(Linkage::Single), 2.0);
        assert_eq!(last(Linkage::Average), 2.5);
        assert_eq!(last(Linkage::Complete), 3.0);
    }

    #[test]
    fn ties_merge_lowest_indices_first() {
        let dm = line(&[0.0, 1.0, 2.0, 3.0]);
        let c = agglomerative_cluster(&dm, Linkage::Single, 3).unwrap();
        assert_eq!(
            c.merges[0],
            Merge {
                first: 0,
                second: 1,
                distance: 1.0
            }
        );
        assert_eq!(c.labels, [Some(0), Some(0), Some(1), Some(2)]);
    }

    fn partition(labels: &[Option<usize>], a: usize, b: usize) -> bool {
        labels[a] == labels[b]
    }

    proptest! {
        #[test]
        fn merge_distances_are_monotone(points in prop::collection::vec(-10.0f64..10.0, 2..12)) {
            let dm = line(&points);
            for linkage in [Linkage::Single, Linkage::Complete, Linkage::Average] {
                let c = agglomerative_cluster(&dm, linkage, 1).unwrap();
                for w in c.merges.windows(2) {
                    prop_assert!(w[0].distance <= w[1].distance + 1e-12);
                }
            }
        }

        #[test]
        fn labels_survive_permutation(
            points in prop::collection::vec(0.0f64..1.0, 3..10),
            k in 1usize..3,
            seed in any::<u64>(),
        ) {
            // Distinct gaps avoid ties, which the index tie-break resolves
            // differently once the order changes.
            let pts: Vec<f64> = points.iter().enumerate().map(|(i, p)| p + (i * i) as f64).collect();
            let n = pts.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (state >> 33) as usize % (i + 1));
            }
            let shuffled: Vec<f64> = perm.iter().map(|&i| pts[i]).collect();
            for linkage in [Linkage::Single, Linkage::Average, Linkage::Complete] {
                let x = agglomerative_cluster(&line(&pts), linkage, k).unwrap().labels;
                let y = agglomerative_cluster(&line(&shuffled), linkage, k).unwrap().labels;
                for a in 0..n {
                    for b in 0..n {
                        prop_assert_eq!(partition(&x, perm[a], perm[b]), partition(&y, a, b));
                    }
                }
            }
        }
    }
}
