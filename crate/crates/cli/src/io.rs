//! Signal CSV files, model JSON files and datasets.
//!
//! Signals are CSV with header `t,value`, or `t,u,y` for an input/output
//! pair, and a uniform time column. Models are JSON objects, either
//! `{"A": [[..]], "B": [..], "C": [..], "D": ..}` or
//! `{"poles": [..], "zeros": [..], "gain": ..}` with complex roots as
//! `[re, im]`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cepdist_core::cluster::Series;
use cepdist_core::lti::{Signal, StateSpaceModel, ZeroPoleGain};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Contents of a signal file.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalFile {
    Single(Signal),
    Pair { input: Signal, output: Signal },
}

impl SignalFile {
    /// The output, or the only signal.
    pub fn output(&self) -> &Signal {
        match self {
            SignalFile::Single(s) => s,
            SignalFile::Pair { output, .. } => output,
        }
    }

    pub fn input(&self) -> Option<&Signal> {
        match self {
            SignalFile::Single(_) => None,
            SignalFile::Pair { input, .. } => Some(input),
        }
    }
}

fn invalid(path: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{}:{line}: {msg}", path.display()))
}

pub fn read_signal_file(path: &Path) -> CliResult<SignalFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| invalid(path, 1, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let columns = match header
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["t", "value"] => 1,
        ["t", "u", "y"] => 2,
        _ => return Err(invalid(path, 1, "header must be `t,value` or `t,u,y`")),
    };
    let mut t = Vec::new();
    let mut cols = vec![Vec::new(); columns];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            invalid(path, line, e)
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut values = record.iter().map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(path, line, format!("not a finite number: {f:?}")))
        });
        t.push((values.next().expect("header fixes the width")?, line));
        for c in cols.iter_mut() {
            c.push(values.next().expect("header fixes the width")?);
        }
    }
    if t.is_empty() {
        return Err(invalid(path, 1, "no samples"));
    }
    let period = if t.len() > 1 { t[1].0 - t[0].0 } else { 1.0 };
    if !(period > 0.0) {
        return Err(invalid(
            path,
            t.get(1).map_or(2, |x| x.1),
            "time must increase",
        ));
    }
    for (k, &(tk, line)) in t.iter().enumerate() {
        let expected = t[0].0 + k as f64 * period;
        if (tk - expected).abs() > 1e-6 * period.max(expected.abs() * 1e-3) {
            return Err(invalid(
                path,
                line,
                format!("non-uniform time step at t = {tk}"),
            ));
        }
    }
    let signal = |v: Vec<f64>| {
        Signal::new(v, period).map_err(|e| CliError::core(&path.display().to_string(), e))
    };
    let mut cols = cols.into_iter();
    let first = signal(cols.next().expect("at least one column"))?;
    Ok(match cols.next() {
        None => SignalFile::Single(first),
        Some(y) => SignalFile::Pair {
            input: first,
            output: signal(y)?,
        },
    })
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Validation(format!("writing CSV: {e}"))
}

/// Writes `t,value` rows, or `t,u,y` when an input is given.
pub fn write_signal<W: Write>(w: W, input: Option<&Signal>, output: &Signal) -> CliResult<()> {
    let mut wr = csv_writer(w);
    let dt = output.sample_period();
    match input {
        None => {
            wr.write_record(["t", "value"]).map_err(csv_error)?;
            for (k, y) in output.samples().iter().enumerate() {
                wr.write_record([fmt(k as f64 * dt), fmt(*y)])
                    .map_err(csv_error)?;
            }
        }
        Some(u) => {
            wr.write_record(["t", "u", "y"]).map_err(csv_error)?;
            for (k, (u, y)) in u.samples().iter().zip(output.samples()).enumerate() {
                wr.write_record([fmt(k as f64 * dt), fmt(*u), fmt(*y)])
                    .map_err(csv_error)?;
            }
        }
    }
    wr.flush().map_err(|e| CliError::io("writing CSV", e))
}

/// Writes a header and rows of already formatted cells.
pub fn write_table<W: Write>(w: W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut wr = csv_writer(w);
    wr.write_record(header).map_err(csv_error)?;
    for row in rows {
        wr.write_record(row).map_err(csv_error)?;
    }
    wr.flush().map_err(|e| CliError::io("writing CSV", e))
}

/// Shortest round-trip decimal form.
pub fn fmt(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    StateSpace(StateSpaceModel),
    Zpk(ZeroPoleGain),
}

impl Model {
    pub fn zpk(&self) -> CliResult<ZeroPoleGain> {
        match self {
            Model::Zpk(z) => Ok(z.clone()),
            Model::StateSpace(m) => m.to_zpk().map_err(|e| CliError::core("model roots", e)),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Numbers {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

impl Numbers {
    fn flatten(self) -> Vec<f64> {
        match self {
            Numbers::Scalar(x) => vec![x],
            Numbers::Vector(v) => v,
            Numbers::Matrix(m) => m.into_iter().flatten().collect(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct StateSpaceSpec {
    A: Vec<Vec<f64>>,
    B: Numbers,
    C: Numbers,
    D: Numbers,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RootSpec {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZpkSpec {
    #[serde(default)]
    poles: Vec<RootSpec>,
    #[serde(default)]
    zeros: Vec<RootSpec>,
    #[serde(default = "unit_gain")]
    gain: f64,
}

fn unit_gain() -> f64 {
    1.0
}

fn roots(spec: Vec<RootSpec>) -> Vec<Complex64> {
    spec.into_iter()
        .map(|r| match r {
            RootSpec::Real(x) => Complex64::new(x, 0.0),
            RootSpec::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect()
}

pub fn parse_model(text: &str, origin: &str) -> CliResult<Model> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    let shape = |e: serde_json::Error| CliError::Validation(format!("{origin}: {e}"));
    let core = |e| CliError::core(origin, e);
    if value.get("A").is_some() {
        let spec: StateSpaceSpec = serde_json::from_value(value).map_err(shape)?;
        let n = spec.A.len();
        if spec.A.iter().any(|row| row.len() != n) {
            return Err(CliError::Validation(format!("{origin}: A must be square")));
        }
        let d = spec.D.flatten();
        if d.len() != 1 {
            return Err(CliError::Validation(format!(
                "{origin}: D must be a scalar"
            )));
        }
        let a: Vec<f64> = spec.A.into_iter().flatten().collect();
        let m = StateSpaceModel::from_slices(&a, &spec.B.flatten(), &spec.C.flatten(), d[0])
            .map_err(core)?;
        Ok(Model::StateSpace(m))
    } else if value.get("poles").is_some()
        || value.get("zeros").is_some()
        || value.get("gain").is_some()
    {
        let spec: ZpkSpec = serde_json::from_value(value).map_err(shape)?;
        let z =
            ZeroPoleGain::new(&roots(spec.poles), &roots(spec.zeros), spec.gain).map_err(core)?;
        Ok(Model::Zpk(z))
    } else {
        Err(CliError::Validation(format!(
            "{origin}: expected either A, B, C, D or poles, zeros, gain"
        )))
    }
}

pub fn read_model(path: &Path) -> CliResult<Model> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_model(&text, &path.display().to_string())
}

/// The `*.csv` files of a directory in name order, as series named by
/// file stem.
pub fn read_dataset(dir: &Path) -> CliResult<Vec<Series>> {
    let entries =
        fs::read_dir(dir).map_err(|e| CliError::io(format!("reading {}", dir.display()), e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    if paths.len() < 2 {
        return Err(CliError::Validation(format!(
            "{}: need at least two .csv signal files",
            dir.display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            let id = p
                .file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok(match read_signal_file(p)? {
                SignalFile::Single(y) => Series::autonomous(id, y),
                SignalFile::Pair { input, output } => Series::driven(id, input, output),
            })
        })
        .collect()
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> CliResult<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut f = fs::File::create(p)
                .map_err(|e| CliError::io(format!("creating {}", p.display()), e))?;
            write(&mut f)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn signal_round_trip() {
        let u = Signal::new(vec![1.0, -0.5, 0.25], 0.01).unwrap();
        let y = Signal::new(vec![0.1, 2.0, 1e-20], 0.01).unwrap();
        let mut buf = Vec::new();
        write_signal(&mut buf, Some(&u), &y).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,u,y\n0.0,1.0,0.1\n"));
        assert!(!text.contains('\r'));
        let f = temp(&text);
        assert_eq!(
            read_signal_file(f.path()).unwrap(),
            SignalFile::Pair {
                input: u,
                output: y.clone()
            }
        );
        let mut buf = Vec::new();
        write_signal(&mut buf, None, &y).unwrap();
        let f = temp(std::str::from_utf8(&buf).unwrap());
        assert_eq!(read_signal_file(f.path()).unwrap(), SignalFile::Single(y));
    }

    #[test]
    fn signal_errors_name_the_line() {
        let f = temp("t,value\n0,1\n1,x\n");
        let e = read_signal_file(f.path()).unwrap_err().to_string();
        assert!(e.contains(":3:"), "{e}");
        let f = temp("t,value\n0,1\n1,2\n2.5,3\n");
        let e = read_signal_file(f.path()).unwrap_err().to_string();
        assert!(e.contains(":4:") && e.contains("non-uniform"), "{e}");
        let f = temp("time,value\n0,1\n");
        assert!(read_signal_file(f.path())
            .unwrap_err()
            .to_string()
            .contains(":1:"));
        let f = temp("t,value\n0,1,2\n");
        assert_eq!(read_signal_file(f.path()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn model_formats() {
        let m = parse_model(
            r#"{"poles": [0.5, [0.1, 0.2], [0.1, -0.2]], "zeros": [-0.3], "gain": 2}"#,
            "m",
        )
        .unwrap();
        let Model::Zpk(z) = m else { panic!() };
        assert_eq!(z.stable_poles().len(), 3);
        assert_eq!(z.gain(), 2.0);
        let m = parse_model(r#"{"A": [[0.5]], "B": [1], "C": [[1]], "D": 1}"#, "m").unwrap();
        let z = m.zpk().unwrap();
        assert!((z.stable_poles()[0].re - 0.5).abs() < 1e-12);
        assert!((z.min_zeros()[0].re + 0.5).abs() < 1e-12);
        assert!(parse_model(r#"{"A": [[0.5, 1]], "B": [1], "C": [1], "D": 1}"#, "m").is_err());
        assert!(parse_model(r#"{"poles": [0.5], "extra": 1}"#, "m").is_err());
        assert!(parse_model(r#"{"poles": [[0.1, 0.2]]}"#, "m").is_err());
        let e = parse_model("{\n\"poles\": [0.5,]\n}", "m.json")
            .unwrap_err()
            .to_string();
        assert!(e.starts_with("m.json:2:"), "{e}");
    }
}
