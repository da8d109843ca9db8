//! Command implementations.

use std::io::Write;
use std::path::Path;

use cepdist_core::cluster::{
    agglomerative_cluster, distance_matrix, DistanceMatrix, Linkage, Metric,
};
use cepdist_core::fft::next_pow2;
use cepdist_core::lti::{make_example_signals, Signal, ZeroPoleGain};
use cepdist_core::metrics::{cosine_similarity, euclidean_distance, weighted_cepstral_distance};
use cepdist_core::phase::{classify, classify_from_io, ClassifierConfig, PhaseKind, PhaseVerdict};
use cepdist_core::spectral::{
    complex_cepstrum, complex_cepstrum_from_zpk, power_cepstrum_from_zpk, power_cepstrum_of_signal,
    transfer_cepstrum_from_io, transfer_complex_cepstrum_from_io, CepstrumKind, CepstrumSequence,
};
use cepdist_core::subspace::subspace_distance_from_data;
use serde::Serialize;

use crate::cli::{
    CepstrumArgs, ClassifyArgs, Cli, ClusterArgs, Command, DistanceArgs, DistmatArgs, LinkageArg,
    MetricArg, SimulateArgs, VerifyArgs,
};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::generate::white_noise;
use crate::io::{
    emit, fmt, read_dataset, read_model, read_signal_file, write_signal, write_table, Model,
    SignalFile,
};
use crate::report::render;
use crate::verify::verify;

/// Defaults, then the config file, then `CEPDIST_*` variables, then flags.
pub fn resolve_config(
    cli: &Cli,
    env: impl IntoIterator<Item = (String, String)>,
) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env(env)?;
    for (key, value) in cli.settings.overrides() {
        cfg.set(key, value)
            .map_err(|e| CliError::Validation(format!("--{}: {e}", key.replace('_', "-"))))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: &Cli, cfg: &RunConfig) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(a, cfg),
        Command::Cepstrum(a) => cepstrum(a, cfg),
        Command::Distance(a) => distance(a, cfg),
        Command::Classify(a) => classify_cmd(a, cfg),
        Command::Verify(a) => verify_cmd(a, cfg),
        Command::Distmat(a) => distmat(a, cfg),
        Command::Cluster(a) => cluster(a, cfg),
    }
}

fn core(context: &str) -> impl Fn(cepdist_core::Error) -> CliError + '_ {
    move |e| CliError::core(context, e)
}

fn write_text(out: Option<&Path>, text: &str) -> CliResult<()> {
    emit(out, |w| {
        w.write_all(text.as_bytes())
            .map_err(|e| CliError::io("writing output", e))
    })
}

fn input_signal(spec: &str, cfg: &RunConfig) -> CliResult<Signal> {
    let n = cfg.length;
    let generated = match spec {
        "impulse" => Signal::impulse(n),
        "white" => return Ok(white_noise(n, cfg.seed)),
        "step" => Signal::from_samples(vec![1.0; n]),
        "zero" => Signal::from_samples(vec![0.0; n]),
        path => return Ok(read_signal_file(Path::new(path))?.output().clone()),
    };
    generated.map_err(core("input"))
}

const UNSTABLE_HINT: &str = "model has poles outside the unit circle; time-domain simulation would diverge. \
Use --two-sided for the stable noncausal response, or the frequency-domain path (`cepstrum --model`, `classify --model`)";

pub fn simulate(a: &SimulateArgs, cfg: &RunConfig) -> CliResult<()> {
    if let Some(dir) = &a.example {
        let ex = make_example_signals(cfg.damping, cfg.seed).map_err(core("example"))?;
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        for (name, s) in [
            ("sine", &ex.sine),
            ("cosine", &ex.cosine),
            ("noise", &ex.noise),
        ] {
            let path = dir.join(format!("{name}.csv"));
            emit(Some(&path), |w| write_signal(w, None, s))?;
        }
        return Ok(());
    }
    let model = read_model(a.model.as_deref().expect("clap enforces a source"))?;
    let u = input_signal(&a.input, cfg)?;
    let y = if a.two_sided {
        model
            .zpk()?
            .filter_two_sided(&u)
            .map_err(core("simulation"))?
    } else {
        let ss = match &model {
            Model::StateSpace(m) => m.clone(),
            Model::Zpk(z) => {
                if !z.unstable_poles().is_empty() {
                    return Err(CliError::PhaseGate(UNSTABLE_HINT.into()));
                }
                z.to_state_space().map_err(core("realization"))?
            }
        };
        if ss.poles().iter().any(|p| p.norm() >= 1.0) {
            return Err(CliError::PhaseGate(UNSTABLE_HINT.into()));
        }
        ss.simulate(&u, &vec![0.0; ss.order()])
            .map_err(core("simulation"))?
    };
    emit(a.output.as_deref(), |w| write_signal(w, Some(&u), &y))
}

fn cepstrum_rows(c: &CepstrumSequence) -> Vec<Vec<String>> {
    let k = c.order() as isize;
    let start = if c.kind() == CepstrumKind::Complex {
        -k
    } else {
        0
    };
    (start..=k)
        .map(|i| vec![i.to_string(), fmt(c.at(i))])
        .collect()
}

pub fn cepstrum(a: &CepstrumArgs, cfg: &RunConfig) -> CliResult<()> {
    let c = if let Some(path) = &a.model {
        let z = read_model(path)?.zpk()?;
        if a.complex {
            complex_cepstrum_from_zpk(&z, cfg.order)
        } else {
            power_cepstrum_from_zpk(&z, cfg.order)
        }
    } else {
        let file = read_signal_file(a.file.as_deref().expect("clap enforces a source"))?;
        let fft_len = |n: usize| cfg.fft_length.unwrap_or(2 * next_pow2(n));
        match (&file, a.complex) {
            (SignalFile::Single(y), false) => {
                power_cepstrum_of_signal(y, &cfg.estimator(), cfg.order)
            }
            (SignalFile::Single(y), true) => complex_cepstrum(y, fft_len(y.len()), cfg.order),
            (SignalFile::Pair { input, output }, false) => {
                transfer_cepstrum_from_io(input, output, &cfg.estimator(), cfg.order)
            }
            (SignalFile::Pair { input, output }, true) => {
                transfer_complex_cepstrum_from_io(input, output, fft_len(input.len()), cfg.order)
            }
        }
        .map_err(core("cepstrum"))?
    };
    emit(a.output.as_deref(), |w| {
        write_table(w, &["k", "c"], &cepstrum_rows(&c))
    })
}

#[derive(Serialize)]
struct DistanceReport {
    metric: &'static str,
    first: String,
    second: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    squared_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cosine_similarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_bound: Option<f64>,
}

fn metric_name(m: MetricArg) -> &'static str {
    match m {
        MetricArg::Euclidean => "euclidean",
        MetricArg::Cosine => "cosine",
        MetricArg::Cepstral => "cepstral",
        MetricArg::Subspace => "subspace",
    }
}

fn cepstrum_of(file: &SignalFile, cfg: &RunConfig) -> CliResult<CepstrumSequence> {
    match file {
        SignalFile::Single(y) => power_cepstrum_of_signal(y, &cfg.estimator(), cfg.order),
        SignalFile::Pair { input, output } => {
            transfer_cepstrum_from_io(input, output, &cfg.estimator(), cfg.order)
        }
    }
    .map_err(core("cepstrum"))
}

fn require_min_phase(u: &Signal, y: &Signal, cfg: &RunConfig, which: &Path) -> CliResult<()> {
    let context = which.display().to_string();
    match classify_from_io(u, y, &cfg.io_classifier())
        .map_err(core(&context))?
        .kind
    {
        PhaseKind::MinimumPhaseStable | PhaseKind::Indeterminate => Ok(()),
        PhaseKind::MaximumPhaseUnstable => Err(CliError::core(
            &context,
            cepdist_core::Error::NotMinimumPhaseStable,
        )),
        PhaseKind::Mixed => Err(CliError::core(
            &context,
            cepdist_core::Error::MixedPhaseUnsupported,
        )),
    }
}

pub fn distance(a: &DistanceArgs, cfg: &RunConfig) -> CliResult<()> {
    let f1 = read_signal_file(&a.first)?;
    let f2 = read_signal_file(&a.second)?;
    let mut report = DistanceReport {
        metric: metric_name(a.metric),
        first: a.first.display().to_string(),
        second: a.second.display().to_string(),
        value: 0.0,
        squared_value: None,
        cosine_similarity: None,
        order: None,
        tail_bound: None,
    };
    match a.metric {
        MetricArg::Euclidean => {
            report.value =
                euclidean_distance(f1.output(), f2.output()).map_err(core("euclidean distance"))?;
        }
        MetricArg::Cosine => {
            let c =
                cosine_similarity(f1.output(), f2.output()).map_err(core("cosine similarity"))?;
            report.value = (1.0 - c).max(0.0);
            report.cosine_similarity = Some(c);
        }
        MetricArg::Cepstral => {
            let r = weighted_cepstral_distance(&cepstrum_of(&f1, cfg)?, &cepstrum_of(&f2, cfg)?)
                .map_err(core("cepstral distance"))?;
            report.value = r.value();
            report.squared_value = Some(r.squared_value);
            report.order = Some(r.order);
            report.tail_bound = Some(r.tail_bound);
        }
        MetricArg::Subspace => {
            let (Some(u1), Some(u2)) = (f1.input(), f2.input()) else {
                return Err(CliError::Validation(
                    "the subspace metric needs `t,u,y` files".into(),
                ));
            };
            require_min_phase(u1, f1.output(), cfg, &a.first)?;
            require_min_phase(u2, f2.output(), cfg, &a.second)?;
            let d2 =
                subspace_distance_from_data((u1, f1.output()), (u2, f2.output()), &cfg.hankel())
                    .map_err(core("subspace distance"))?;
            report.value = d2.max(0.0).sqrt();
            report.squared_value = Some(d2);
        }
    }
    match cfg.format {
        Format::Json => write_text(a.output.as_deref(), &render("distance", &report)?),
        Format::Text => write_text(a.output.as_deref(), &format!("{}\n", fmt(report.value))),
    }
}

fn kind_name(k: PhaseKind) -> &'static str {
    match k {
        PhaseKind::MinimumPhaseStable => "minimum_phase_stable",
        PhaseKind::MaximumPhaseUnstable => "maximum_phase_unstable",
        PhaseKind::Mixed => "mixed",
        PhaseKind::Indeterminate => "indeterminate",
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    source: &'static str,
    verdict: &'static str,
    positive_energy: f64,
    negative_energy: f64,
    tolerance: f64,
    k_test: usize,
}

pub fn classify_cmd(a: &ClassifyArgs, cfg: &RunConfig) -> CliResult<()> {
    let (source, v): (&'static str, PhaseVerdict) = if let Some(path) = &a.model {
        let z: ZeroPoleGain = read_model(path)?.zpk()?;
        let c = complex_cepstrum_from_zpk(&z, cfg.k_test);
        let model_cfg = ClassifierConfig {
            k_test: cfg.k_test,
            ..ClassifierConfig::MODEL
        };
        (
            "model",
            classify(&c, &model_cfg).map_err(core("classification"))?,
        )
    } else {
        let first = read_signal_file(a.file.as_deref().expect("clap enforces a source"))?;
        let (u, y) = match (&first, &a.output_file) {
            (SignalFile::Pair { input, output }, None) => (input.clone(), output.clone()),
            (SignalFile::Single(u), Some(yp)) => {
                (u.clone(), read_signal_file(yp)?.output().clone())
            }
            (SignalFile::Single(_), None) => {
                return Err(CliError::Validation(
                    "classify needs a `t,u,y` file or separate input and output files".into(),
                ))
            }
            (SignalFile::Pair { .. }, Some(_)) => {
                return Err(CliError::Validation(
                    "a `t,u,y` file already holds both signals".into(),
                ))
            }
        };
        (
            "data",
            classify_from_io(&u, &y, &cfg.io_classifier()).map_err(core("classification"))?,
        )
    };
    let report = ClassifyReport {
        source,
        verdict: kind_name(v.kind),
        positive_energy: v.positive_energy,
        negative_energy: v.negative_energy,
        tolerance: v.tolerance,
        k_test: cfg.k_test,
    };
    match cfg.format {
        Format::Json => write_text(a.output.as_deref(), &render("classify", &report)?),
        Format::Text => write_text(a.output.as_deref(), &format!("{}\n", report.verdict)),
    }
}

pub fn verify_cmd(a: &VerifyArgs, cfg: &RunConfig) -> CliResult<()> {
    let report = verify(a.case, cfg)?;
    let text = match cfg.format {
        Format::Json => render("verify", &report)?,
        Format::Text => {
            let mut s = String::new();
            for case in &report.cases {
                for c in &case.checks {
                    s.push_str(&format!(
                        "{} {} {} <= {} {}\n",
                        case.case,
                        c.name,
                        fmt(c.measured),
                        fmt(c.tolerance),
                        if c.pass { "PASS" } else { "FAIL" }
                    ));
                }
            }
            s
        }
    };
    write_text(a.output.as_deref(), &text)?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .cases
            .iter()
            .flat_map(|c| {
                c.checks
                    .iter()
                    .filter(|k| !k.pass)
                    .map(move |k| format!("{}/{}", c.case, k.name))
            })
            .collect();
        Err(CliError::Tolerance(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}

fn core_metric(m: MetricArg) -> Metric {
    match m {
        MetricArg::Euclidean => Metric::Euclidean,
        MetricArg::Cosine => Metric::CosineDerived,
        MetricArg::Cepstral => Metric::Cepstral,
        MetricArg::Subspace => Metric::Subspace,
    }
}

fn build_matrix(dir: &Path, metric: MetricArg, cfg: &RunConfig) -> CliResult<DistanceMatrix> {
    let series = read_dataset(dir)?;
    let dm = distance_matrix(&series, core_metric(metric), &cfg.metric())
        .map_err(core("distance matrix"))?;
    for f in dm.failures() {
        let ids = dm.ids();
        if f.first == f.second {
            log::warn!("{}: {}", ids[f.first], f.error);
        } else {
            log::warn!("{} vs {}: {}", ids[f.first], ids[f.second], f.error);
        }
    }
    Ok(dm)
}

fn write_matrix(w: &mut dyn Write, dm: &DistanceMatrix) -> CliResult<()> {
    let ids = dm.ids();
    let mut header = vec!["id"];
    header.extend(ids.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = (0..dm.len())
        .map(|a| {
            std::iter::once(ids[a].clone())
                .chain((0..dm.len()).map(|b| fmt(dm.get(a, b))))
                .collect()
        })
        .collect();
    write_table(w, &header, &rows)
}

pub fn distmat(a: &DistmatArgs, cfg: &RunConfig) -> CliResult<()> {
    let dm = build_matrix(&a.dir, a.metric, cfg)?;
    emit(a.output.as_deref(), |w| write_matrix(w, &dm))
}

#[derive(Serialize)]
struct MergeReport {
    first: String,
    second: String,
    distance: f64,
}

#[derive(Serialize)]
struct FailureReport {
    first: String,
    second: String,
    error: String,
}

#[derive(Serialize)]
struct ClusterReport {
    metric: &'static str,
    linkage: &'static str,
    k: usize,
    ids: Vec<String>,
    labels: Vec<Option<usize>>,
    excluded: Vec<String>,
    merges: Vec<MergeReport>,
    failures: Vec<FailureReport>,
}

pub fn cluster(a: &ClusterArgs, cfg: &RunConfig) -> CliResult<()> {
    let dm = build_matrix(&a.dir, a.metric, cfg)?;
    if let Some(path) = &a.matrix {
        emit(Some(path), |w| write_matrix(w, &dm))?;
    }
    let (linkage, linkage_name) = match a.linkage {
        LinkageArg::Single => (Linkage::Single, "single"),
        LinkageArg::Average => (Linkage::Average, "average"),
        LinkageArg::Complete => (Linkage::Complete, "complete"),
    };
    let cl = agglomerative_cluster(&dm, linkage, a.k).map_err(core("clustering"))?;
    let ids = dm.ids();
    let report = ClusterReport {
        metric: metric_name(a.metric),
        linkage: linkage_name,
        k: a.k,
        ids: ids.to_vec(),
        labels: cl.labels.clone(),
        excluded: cl.excluded.iter().map(|&i| ids[i].clone()).collect(),
        merges: cl
            .merges
            .iter()
            .map(|m| MergeReport {
                first: ids[m.first].clone(),
                second: ids[m.second].clone(),
                distance: m.distance,
            })
            .collect(),
        failures: dm
            .failures()
            .iter()
            .map(|f| FailureReport {
                first: ids[f.first].clone(),
                second: ids[f.second].clone(),
                error: f.error.to_string(),
            })
            .collect(),
    };
    match cfg.format {
        Format::Json => write_text(a.output.as_deref(), &render("cluster", &report)?),
        Format::Text => {
            let mut s = String::new();
            for (id, l) in ids.iter().zip(&cl.labels) {
                let label = l.map_or_else(|| "excluded".to_string(), |l| l.to_string());
                s.push_str(&format!("{id} {label}\n"));
            }
            write_text(a.output.as_deref(), &s)
        }
    }
}
