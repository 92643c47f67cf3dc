//! Per-qubit calibration tables: CSV ingest, validation and percentile
//! summaries.
//!
//! Expected header (order free, `ecr_error` optional):
//!
//! ```text
//! qubit,T1,T2,f_qubit,anharmonicity,readout_error,P_m0p1,P_m1p0,t_readout,id_error,sx_error,pauli_x_error[,ecr_error]
//! ```
//!
//! Units: T1 and T2 in microseconds, `f_qubit` and `anharmonicity` in GHz,
//! `t_readout` in nanoseconds; every other column is a probability.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub qubit: usize,
    pub t1_us: f64,
    pub t2_us: f64,
    pub f_qubit_ghz: f64,
    pub anharmonicity_ghz: f64,
    pub readout_error: f64,
    /// P(measure 0 | prepared 1).
    pub p_m0p1: f64,
    /// P(measure 1 | prepared 0).
    pub p_m1p0: f64,
    pub t_readout_ns: f64,
    pub id_error: f64,
    pub sx_error: f64,
    pub pauli_x_error: f64,
    pub ecr_error: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Index,
    Time,
    Probability,
    Free,
}

const COLUMNS: [(&str, Kind); 13] = [
    ("qubit", Kind::Index),
    ("T1", Kind::Time),
    ("T2", Kind::Time),
    ("f_qubit", Kind::Free),
    ("anharmonicity", Kind::Free),
    ("readout_error", Kind::Probability),
    ("P_m0p1", Kind::Probability),
    ("P_m1p0", Kind::Probability),
    ("t_readout", Kind::Time),
    ("id_error", Kind::Probability),
    ("sx_error", Kind::Probability),
    ("pauli_x_error", Kind::Probability),
    ("ecr_error", Kind::Probability),
];
const OPTIONAL: &str = "ecr_error";

pub fn load_calibration(path: impl AsRef<Path>) -> Result<Vec<CalibrationRecord>> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_calibration(&text)
}

pub fn parse_calibration(text: &str) -> Result<Vec<CalibrationRecord>> {
    if text.trim().is_empty() {
        return Err(Error::InsufficientData("calibration file is empty".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut index = [None; COLUMNS.len()];
    for (slot, (name, _)) in index.iter_mut().zip(COLUMNS) {
        *slot = headers.iter().position(|h| h == name);
        if slot.is_none() && name != OPTIONAL {
            return Err(Error::Schema(name.to_string()));
        }
    }
    let mut records = Vec::new();
    for (row, result) in reader.records().enumerate() {
        // header is line 1
        let line = row + 2;
        let rec = result?;
        let mut vals = [f64::NAN; COLUMNS.len()];
        for (c, (name, kind)) in COLUMNS.iter().enumerate() {
            let Some(col) = index[c] else { continue };
            let cell = rec.get(col).unwrap_or("");
            let location = format!("line {line}, column {name}");
            if cell.is_empty() && *name == OPTIONAL {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                location: location.clone(),
                message: format!("{cell:?} is not a number"),
            })?;
            let ok = match kind {
                Kind::Index => v >= 0.0 && v.fract() == 0.0,
                Kind::Time => v >= 0.0 && !v.is_nan(),
                Kind::Probability => (0.0..=1.0).contains(&v),
                Kind::Free => v.is_finite(),
            };
            if !ok {
                let message = match kind {
                    Kind::Index => format!("{v} is not a qubit index"),
                    Kind::Time => format!("{v} is not a nonnegative time"),
                    Kind::Probability => format!("{v} is outside [0, 1]"),
                    Kind::Free => format!("{v} is not finite"),
                };
                return Err(Error::Validation { location, message });
            }
            vals[c] = v;
        }
        records.push(CalibrationRecord {
            qubit: vals[0] as usize,
            t1_us: vals[1],
            t2_us: vals[2],
            f_qubit_ghz: vals[3],
            anharmonicity_ghz: vals[4],
            readout_error: vals[5],
            p_m0p1: vals[6],
            p_m1p0: vals[7],
            t_readout_ns: vals[8],
            id_error: vals[9],
            sx_error: vals[10],
            pauli_x_error: vals[11],
            ecr_error: (!vals[12].is_nan()).then_some(vals[12]),
        });
    }
    Ok(records)
}

/// Write records in the column layout `load_calibration` reads.
pub fn write_calibration(path: impl AsRef<Path>, records: &[CalibrationRecord]) -> Result<()> {
    let with_ecr = records.iter().any(|r| r.ecr_error.is_some());
    let mut w = csv::Writer::from_path(path.as_ref())?;
    let names = COLUMNS.iter().map(|(n, _)| *n).filter(|n| with_ecr || *n != OPTIONAL);
    w.write_record(names)?;
    for r in records {
        let mut row = vec![
            r.qubit.to_string(),
            r.t1_us.to_string(),
            r.t2_us.to_string(),
            r.f_qubit_ghz.to_string(),
            r.anharmonicity_ghz.to_string(),
            r.readout_error.to_string(),
            r.p_m0p1.to_string(),
            r.p_m1p0.to_string(),
            r.t_readout_ns.to_string(),
            r.id_error.to_string(),
            r.sx_error.to_string(),
            r.pauli_x_error.to_string(),
        ];
        if with_ecr {
            row.push(r.ecr_error.map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Device-level medians as published by the provider, which need not equal
/// the medians of the per-qubit rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceReport {
    pub name: String,
    pub t1_us: f64,
    pub t2_us: f64,
    pub sx_error: f64,
    pub ecr_error: f64,
    pub readout_error: f64,
}

pub fn load_device_report(path: impl AsRef<Path>) -> Result<DeviceReport> {
    Ok(serde_json::from_str(&fs::read_to_string(path.as_ref())?)?)
}

/// `foo.csv` -> `foo.device.json`.
pub fn device_report_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("device.json")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub mean: f64,
    pub stdev: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl FieldSummary {
    /// Mean, sample stdev (zero for one value) and inclusive linearly
    /// interpolated quantiles.
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData("no values to summarize".into()));
        }
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let constant = sorted[0] == sorted[n - 1];
        let mean = if constant { sorted[0] } else { sorted.iter().sum::<f64>() / n as f64 };
        let stdev = if n > 1 && !constant {
            (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(FieldSummary {
            mean,
            stdev,
            min: sorted[0],
            q25: quantile_sorted(&sorted, 0.25),
            median: quantile_sorted(&sorted, 0.5),
            q75: quantile_sorted(&sorted, 0.75),
            max: sorted[n - 1],
        })
    }
}

/// Inclusive linear interpolation between order statistics.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSummary {
    pub qubits: usize,
    pub t1_us: FieldSummary,
    pub t2_us: FieldSummary,
    pub f_qubit_ghz: FieldSummary,
    pub anharmonicity_ghz: FieldSummary,
    pub readout_error: FieldSummary,
    pub p_m0p1: FieldSummary,
    pub p_m1p0: FieldSummary,
    pub t_readout_ns: FieldSummary,
    pub id_error: FieldSummary,
    pub sx_error: FieldSummary,
    pub pauli_x_error: FieldSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ecr_error: Option<FieldSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub device: Option<DeviceReport>,
}

impl CalibrationSummary {
    pub fn with_device(mut self, device: DeviceReport) -> Self {
        self.device = Some(device);
        self
    }

    /// Rows in table order: `(field, summary)`.
    pub fn rows(&self) -> Vec<(&'static str, &FieldSummary)> {
        let mut rows = vec![
            ("T1", &self.t1_us),
            ("T2", &self.t2_us),
            ("f_qubit", &self.f_qubit_ghz),
            ("anharmonicity", &self.anharmonicity_ghz),
            ("readout_error", &self.readout_error),
            ("P_m0p1", &self.p_m0p1),
            ("P_m1p0", &self.p_m1p0),
            ("t_readout", &self.t_readout_ns),
            ("id_error", &self.id_error),
            ("sx_error", &self.sx_error),
            ("pauli_x_error", &self.pauli_x_error),
        ];
        if let Some(e) = &self.ecr_error {
            rows.push(("ecr_error", e));
        }
        rows
    }
}

pub fn summarize_calibration(records: &[CalibrationRecord]) -> Result<CalibrationSummary> {
    if records.is_empty() {
        return Err(Error::InsufficientData("no calibration records".into()));
    }
    let field = |f: fn(&CalibrationRecord) -> f64| {
        FieldSummary::of(&records.iter().map(f).collect::<Vec<_>>())
    };
    let ecr: Vec<f64> = records.iter().filter_map(|r| r.ecr_error).collect();
    Ok(CalibrationSummary {
        qubits: records.len(),
        t1_us: field(|r| r.t1_us)?,
        t2_us: field(|r| r.t2_us)?,
        f_qubit_ghz: field(|r| r.f_qubit_ghz)?,
        anharmonicity_ghz: field(|r| r.anharmonicity_ghz)?,
        readout_error: field(|r| r.readout_error)?,
        p_m0p1: field(|r| r.p_m0p1)?,
        p_m1p0: field(|r| r.p_m1p0)?,
        t_readout_ns: field(|r| r.t_readout_ns)?,
        id_error: field(|r| r.id_error)?,
        sx_error: field(|r| r.sx_error)?,
        pauli_x_error: field(|r| r.pauli_x_error)?,
        ecr_error: if ecr.is_empty() { None } else { Some(FieldSummary::of(&ecr)?) },
        device: None,
    })
}

/// Load a CSV and summarize it, attaching `<stem>.device.json` when present.
pub fn load_summary(path: impl AsRef<Path>) -> Result<CalibrationSummary> {
    let path = path.as_ref();
    let summary = summarize_calibration(&load_calibration(path)?)?;
    let device = device_report_path(path);
    Ok(if device.exists() {
        summary.with_device(load_device_report(device)?)
    } else {
        summary
    })
}
