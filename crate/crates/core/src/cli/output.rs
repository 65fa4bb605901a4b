//! Series files. Floats are printed as `{:.16e}` (17 significant digits) in
//! both formats, so identical configs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::propagator::unitarity_residual;
use crate::su2::{pauli_decompose, Complex2x2, StateVector2};

use super::config::{Format, OutputKind, ScenarioConfig};
use super::scenario::Sample;

const PAULI: [&str; 4] = ["0", "x", "y", "z"];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn hermitian_columns(prefix: &str) -> Vec<String> {
    PAULI.iter().map(|p| format!("{prefix}_{p}")).collect()
}

/// Column names of one output kind, excluding `t`.
pub fn columns(kind: OutputKind) -> Vec<String> {
    match kind {
        OutputKind::Metric => hermitian_columns("rho"),
        OutputKind::Dyson => {
            let mut c = hermitian_columns("eta");
            c.extend(hermitian_columns("eta_dot"));
            c
        }
        OutputKind::HermitianH => hermitian_columns("h"),
        OutputKind::States => ["plus", "minus"]
            .iter()
            .flat_map(|b| {
                (0..2).flat_map(move |i| ["re", "im"].map(|part| format!("phi_{b}_{i}_{part}")))
            })
            .collect(),
        OutputKind::Propagator => (0..2)
            .flat_map(|r| {
                (0..2).flat_map(move |c| ["re", "im"].map(|part| format!("u_{r}{c}_{part}")))
            })
            .collect(),
        OutputKind::Energies => vec!["e_plus".into(), "e_minus".into()],
        OutputKind::Invariants => vec![
            "det_rho".into(),
            "unitarity_residual".into(),
            "quasi_hermiticity_residual".into(),
        ],
    }
}

/// Real Pauli coefficients; the matrices written this way are Hermitian.
fn hermitian_values(m: &Complex2x2) -> [f64; 4] {
    let p = pauli_decompose(m);
    let v = p.real_vector();
    [p.a0.re, v[0], v[1], v[2]]
}

fn state_values(s: &StateVector2) -> [f64; 4] {
    [s.0[0].re, s.0[0].im, s.0[1].re, s.0[1].im]
}

pub fn values(kind: OutputKind, s: &Sample) -> Vec<f64> {
    match kind {
        OutputKind::Metric => hermitian_values(&s.rho).to_vec(),
        OutputKind::Dyson => {
            let mut v = hermitian_values(&s.dyson.eta).to_vec();
            v.extend(hermitian_values(&s.dyson.eta_dot));
            v
        }
        OutputKind::HermitianH => hermitian_values(&s.h).to_vec(),
        OutputKind::States => s.states.iter().flat_map(state_values).collect(),
        OutputKind::Propagator => s
            .u
            .rows()
            .iter()
            .flatten()
            .flat_map(|z| [z.re, z.im])
            .collect(),
        OutputKind::Energies => s.energies.to_vec(),
        OutputKind::Invariants => vec![s.rho.det().re, unitarity_residual(&s.u), s.quasi_hermiticity],
    }
}

/// Header and rows: `t` first, then each output's columns in config order.
pub fn table(outputs: &[OutputKind], samples: &[Sample]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut header = vec!["t".to_string()];
    for &o in outputs {
        header.extend(columns(o));
    }
    let rows = samples
        .iter()
        .map(|s| {
            let mut row = vec![s.t];
            for &o in outputs {
                row.extend(values(o, s));
            }
            row
        })
        .collect();
    (header, rows)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn write_csv<W: Write>(out: W, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_float(x)))
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Metadata<'a> {
    code_version: &'static str,
    config: &'a ScenarioConfig,
    columns: &'a [String],
}

/// One sample as an ordered JSON object.
struct Record<'a> {
    header: &'a [String],
    row: &'a [f64],
}

impl Serialize for Record<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.header.len()))?;
        for (name, &x) in self.header.iter().zip(self.row) {
            map.serialize_entry(name, &json_number(x))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Document<'a> {
    metadata: Metadata<'a>,
    samples: Vec<Record<'a>>,
}

/// Same digits as the CSV; non-finite values become `null`.
fn json_number(x: f64) -> Option<Box<RawValue>> {
    x.is_finite()
        .then(|| RawValue::from_string(format_float(x)).expect("formatted float is valid JSON"))
}

pub fn write_json<W: Write>(
    mut out: W,
    cfg: &ScenarioConfig,
    header: &[String],
    rows: &[Vec<f64>],
) -> Result<()> {
    let doc = Document {
        metadata: Metadata {
            code_version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            columns: header,
        },
        samples: rows.iter().map(|row| Record { header, row }).collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomically(path: &Path, body: impl FnOnce(&mut fs::File) -> Result<()>) -> Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut file = fs::File::create(&tmp)?;
    body(&mut file)?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_series(cfg: &ScenarioConfig, samples: &[Sample], path: &Path) -> Result<()> {
    let (header, rows) = table(&cfg.outputs, samples);
    write_atomically(path, |f| match cfg.format {
        Format::Csv => write_csv(f, &header, &rows),
        Format::Json => write_json(f, cfg, &header, &rows),
    })
}
