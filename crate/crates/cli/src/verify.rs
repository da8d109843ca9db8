//! Self-contained checks that cepstral norms, subspace-angle norms and the
//! pole-zero closed forms agree on generated data.

use std::collections::BTreeMap;

use cepdist_core::lti::{
    maximum_phase_reference, minimum_phase_reference, mixed_phase_reference, ZeroPoleGain,
};
use cepdist_core::metrics::{
    cascade, closed_form_norm_max_phase, closed_form_norm_min_phase, closed_form_norm_mixed,
    weighted_cepstral_distance, weighted_cepstral_norm,
};
use cepdist_core::phase::{classify, classify_from_io, ClassifierConfig, PhaseKind};
use cepdist_core::spectral::{
    complex_cepstrum_from_response, power_cepstrum_from_psd, power_cepstrum_from_zpk,
    power_cepstrum_of_signal, psd_from_response, transfer_cepstrum_from_io,
};
use cepdist_core::subspace::{
    subspace_distance_between_models, subspace_norm_from_data, subspace_norm_from_model,
    subspace_norm_from_response,
};
use cepdist_core::Error as CoreError;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::generate::{random_min_phase, rng, white_noise};
use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Case {
    MinPhase,
    MaxPhase,
    Mixed,
    Cascade,
    WhiteNoise,
    All,
}

impl Case {
    fn name(self) -> &'static str {
        match self {
            Case::MinPhase => "min-phase",
            Case::MaxPhase => "max-phase",
            Case::Mixed => "mixed",
            Case::Cascade => "cascade",
            Case::WhiteNoise => "white-noise",
            Case::All => "all",
        }
    }
}

/// Seeds drawn for the white-noise case.
pub const WHITE_NOISE_SEEDS: u64 = 50;
/// Cepstral order for the model-based cascade check.
pub const CASCADE_ORDER: usize = 4096;
/// Coefficients examined by the white-noise case.
pub const WHITE_NOISE_LAGS: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: &'static str,
    pub measurements: BTreeMap<&'static str, f64>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CaseReport {
    fn new(case: Case) -> Self {
        Self {
            case: case.name(),
            measurements: BTreeMap::new(),
            notes: Vec::new(),
            checks: Vec::new(),
            pass: false,
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

fn core(context: &str) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| CliError::core(context, e)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn kind_name(k: PhaseKind) -> &'static str {
    match k {
        PhaseKind::MinimumPhaseStable => "minimum_phase_stable",
        PhaseKind::MaximumPhaseUnstable => "maximum_phase_unstable",
        PhaseKind::Mixed => "mixed",
        PhaseKind::Indeterminate => "indeterminate",
    }
}

/// Power cepstrum norm and phase verdict from frequency-response samples.
fn from_response(
    zpk: &ZeroPoleGain,
    cfg: &RunConfig,
) -> CliResult<(f64, PhaseKind, Vec<num_complex::Complex64>)> {
    let l = cfg.response_length;
    let h = zpk.response_on_grid(l);
    let psd = psd_from_response(&h).map_err(core("spectrum"))?;
    let c = power_cepstrum_from_psd(&psd, l / 2).map_err(core("power cepstrum"))?;
    let norm = weighted_cepstral_norm(&c)
        .map_err(core("cepstral norm"))?
        .squared_value;
    let model_cfg = ClassifierConfig {
        k_test: cfg.k_test,
        ..ClassifierConfig::MODEL
    };
    let cc = complex_cepstrum_from_response(&h, cfg.k_test).map_err(core("complex cepstrum"))?;
    let kind = classify(&cc, &model_cfg)
        .map_err(core("classification"))?
        .kind;
    Ok((norm, kind, h))
}

fn min_phase(cfg: &RunConfig) -> CliResult<CaseReport> {
    let mut r = CaseReport::new(Case::MinPhase);
    let zpk = minimum_phase_reference();
    let u = white_noise(cfg.length, cfg.seed);
    let y = zpk.filter_two_sided(&u).map_err(core("simulation"))?;
    let c = transfer_cepstrum_from_io(&u, &y, &cfg.estimator(), cfg.order)
        .map_err(core("transfer cepstrum"))?;
    let cep = weighted_cepstral_norm(&c)
        .map_err(core("cepstral norm"))?
        .squared_value;
    let sub = subspace_norm_from_data(&u, &y, &cfg.hankel()).map_err(core("data subspace norm"))?;
    let sub_model =
        subspace_norm_from_model(&zpk, cfg.truncation).map_err(core("model subspace norm"))?;
    let closed = closed_form_norm_min_phase(&zpk).map_err(core("closed form"))?;
    let verdict = classify_from_io(&u, &y, &cfg.io_classifier()).map_err(core("classification"))?;
    let m = &mut r.measurements;
    m.insert("cepstral_from_data", cep);
    m.insert("subspace_from_data", sub);
    m.insert("subspace_from_model", sub_model);
    m.insert("closed_form", closed);
    m.insert("cepstral_vs_subspace_relative", rel(cep, sub));
    m.insert("cepstral_vs_closed_form_relative", rel(cep, closed));
    m.insert("subspace_vs_closed_form_relative", rel(sub, closed));
    r.notes
        .push(format!("verdict: {}", kind_name(verdict.kind)));
    r.checks = vec![
        Check::holds(
            "verdict_minimum_phase_stable",
            verdict.kind == PhaseKind::MinimumPhaseStable,
        ),
        Check::at_most(
            "cepstral_vs_subspace_relative",
            rel(cep, sub),
            cfg.data_tolerance,
        ),
        Check::at_most(
            "subspace_model_vs_closed_form",
            (sub_model - closed).abs(),
            cfg.model_tolerance,
        ),
    ];
    Ok(r.finish())
}

fn max_phase(cfg: &RunConfig) -> CliResult<CaseReport> {
    let mut r = CaseReport::new(Case::MaxPhase);
    let zpk = maximum_phase_reference();
    let (cep, kind, h) = from_response(&zpk, cfg)?;
    let closed = closed_form_norm_max_phase(&zpk).map_err(core("closed form"))?;
    let sub =
        subspace_norm_from_response(&h, &cfg.hankel()).map_err(core("response subspace norm"))?;
    let sub_model =
        subspace_norm_from_model(&zpk, cfg.truncation).map_err(core("model subspace norm"))?;
    let m = &mut r.measurements;
    m.insert("cepstral_from_response", cep);
    m.insert("subspace_from_response", sub);
    m.insert("subspace_from_model", sub_model);
    m.insert("closed_form", closed);
    m.insert("cepstral_vs_subspace_relative", rel(cep, sub));
    m.insert("cepstral_vs_closed_form", (cep - closed).abs());
    m.insert("subspace_vs_closed_form_relative", rel(sub, closed));
    r.notes.push(format!("verdict: {}", kind_name(kind)));
    r.checks = vec![
        Check::holds(
            "verdict_maximum_phase_unstable",
            kind == PhaseKind::MaximumPhaseUnstable,
        ),
        Check::at_most(
            "cepstral_vs_closed_form",
            (cep - closed).abs(),
            cfg.frequency_tolerance,
        ),
        Check::at_most(
            "subspace_vs_closed_form_relative",
            rel(sub, closed),
            cfg.data_tolerance,
        ),
        Check::at_most(
            "subspace_model_vs_closed_form",
            (sub_model - closed).abs(),
            cfg.model_tolerance,
        ),
    ];
    Ok(r.finish())
}

fn mixed(cfg: &RunConfig) -> CliResult<CaseReport> {
    let mut r = CaseReport::new(Case::Mixed);
    let zpk = mixed_phase_reference();
    let (cep, kind, h) = from_response(&zpk, cfg)?;
    let closed = closed_form_norm_mixed(&zpk);
    r.measurements.insert("cepstral_from_response", cep);
    r.measurements.insert("closed_form", closed);
    r.measurements
        .insert("cepstral_vs_closed_form", (cep - closed).abs());
    r.notes.push(format!("verdict: {}", kind_name(kind)));
    let gated =
        |res: cepdist_core::Result<f64>| matches!(res, Err(CoreError::MixedPhaseUnsupported));
    let response_gate = gated(subspace_norm_from_response(&h, &cfg.hankel()));
    let model_gate = gated(subspace_norm_from_model(&zpk, cfg.truncation));
    r.notes
        .push("subspace path: mixed-phase systems have no subspace-angle interpretation".into());
    r.checks = vec![
        Check::holds("verdict_mixed", kind == PhaseKind::Mixed),
        Check::at_most(
            "cepstral_vs_closed_form",
            (cep - closed).abs(),
            cfg.frequency_tolerance,
        ),
        Check::holds("subspace_from_response_gated", response_gate),
        Check::holds("subspace_from_model_gated", model_gate),
    ];
    Ok(r.finish())
}

fn cascade_case(cfg: &RunConfig) -> CliResult<CaseReport> {
    let mut r = CaseReport::new(Case::Cascade);
    let mut g = rng(cfg.seed);
    let (h1, h2, both) = loop {
        let h1 = random_min_phase(&mut g, 3);
        let h2 = random_min_phase(&mut g, 3);
        if let Ok(c) = cascade(&h1, &h2) {
            if c.cancelled.is_empty() {
                break (h1, h2, c.system);
            }
        }
    };
    let d2 = weighted_cepstral_distance(
        &power_cepstrum_from_zpk(&h1, CASCADE_ORDER),
        &power_cepstrum_from_zpk(&h2, CASCADE_ORDER),
    )
    .map_err(core("cepstral distance"))?
    .squared_value;
    let closed = closed_form_norm_min_phase(&both).map_err(core("closed form"))?;
    let sub = subspace_distance_between_models(&h1, &h2, cfg.truncation)
        .map_err(core("subspace distance"))?;
    r.measurements.insert("cepstral_distance_squared", d2);
    r.measurements.insert("closed_form", closed);
    r.measurements.insert("subspace_from_models", sub);
    r.measurements
        .insert("cepstral_vs_closed_form", (d2 - closed).abs());
    r.measurements
        .insert("subspace_vs_closed_form", (sub - closed).abs());
    r.notes.push(format!(
        "H1: poles {:?}, zeros {:?}",
        h1.poles().collect::<Vec<_>>(),
        h1.zeros().collect::<Vec<_>>()
    ));
    r.notes.push(format!(
        "H2: poles {:?}, zeros {:?}",
        h2.poles().collect::<Vec<_>>(),
        h2.zeros().collect::<Vec<_>>()
    ));
    r.checks = vec![
        Check::at_most(
            "cepstral_vs_closed_form",
            (d2 - closed).abs(),
            cfg.cascade_tolerance,
        ),
        Check::at_most(
            "subspace_vs_closed_form",
            (sub - closed).abs(),
            cfg.model_tolerance,
        ),
    ];
    Ok(r.finish())
}

fn white(cfg: &RunConfig) -> CliResult<CaseReport> {
    let mut r = CaseReport::new(Case::WhiteNoise);
    let mut draws = vec![Vec::new(); WHITE_NOISE_LAGS];
    for s in 0..WHITE_NOISE_SEEDS {
        let u = white_noise(cfg.length, cfg.seed.wrapping_add(s));
        let c = power_cepstrum_of_signal(&u, &cfg.estimator(), WHITE_NOISE_LAGS)
            .map_err(core("power cepstrum"))?;
        for (k, d) in draws.iter_mut().enumerate() {
            d.push(c.at(k as isize + 1));
        }
    }
    let n = WHITE_NOISE_SEEDS as f64;
    let mut worst: f64 = 0.0;
    for d in &draws {
        let mean = d.iter().sum::<f64>() / n;
        let sd = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        worst = worst.max(mean.abs() / (sd / n.sqrt()));
    }
    r.measurements.insert("max_standard_errors", worst);
    r.checks = vec![Check::at_most(
        "mean_within_standard_errors",
        worst,
        cfg.white_noise_sigmas,
    )];
    Ok(r.finish())
}

pub fn run_case(case: Case, cfg: &RunConfig) -> CliResult<Vec<CaseReport>> {
    Ok(match case {
        Case::MinPhase => vec![min_phase(cfg)?],
        Case::MaxPhase => vec![max_phase(cfg)?],
        Case::Mixed => vec![mixed(cfg)?],
        Case::Cascade => vec![cascade_case(cfg)?],
        Case::WhiteNoise => vec![white(cfg)?],
        Case::All => {
            let mut all = Vec::new();
            for c in [
                Case::MinPhase,
                Case::MaxPhase,
                Case::Mixed,
                Case::Cascade,
                Case::WhiteNoise,
            ] {
                all.extend(run_case(c, cfg)?);
            }
            all
        }
    })
}

pub fn verify(case: Case, cfg: &RunConfig) -> CliResult<VerifyReport> {
    let cases = run_case(case, cfg)?;
    let pass = cases.iter().all(|c| c.pass);
    Ok(VerifyReport {
        config: cfg.clone(),
        cases,
        pass,
    })
}
