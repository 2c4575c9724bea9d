//! Interchange formats. Complex numbers are `[re, im]` pairs throughout:
//! a matrix is a row-major nested array of such pairs.

use crate::construct::AllPassFilter;
use crate::dataset::InterpolationPoint;
use crate::experiments::{ComparisonReport, PowerDelayProfile, TimingRow};
use crate::linalg::{cplx, CMat, CVec};
use crate::polyfilter::VectorSignal;
use crate::polynom::MatrixPolynomial;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMat> {
    let nr = rows.len();
    if nr == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    let nc = rows[0].len();
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| cplx(rows[i][j][0], rows[i][j][1])))
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    omega: f64,
    #[serde(rename = "A")]
    a: MatrixJson,
    #[serde(default)]
    gamma: Option<MatrixJson>,
}

#[derive(Serialize, Deserialize)]
struct DatasetFile {
    m: usize,
    points: Vec<PointFile>,
}

pub fn dataset_to_json(m: usize, points: &[InterpolationPoint]) -> Result<String> {
    let file = DatasetFile {
        m,
        points: points
            .iter()
            .map(|p| PointFile {
                omega: p.omega,
                a: matrix_to_json(&p.a),
                gamma: p.gamma.as_ref().map(matrix_to_json),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn dataset_from_json(text: &str) -> Result<(usize, Vec<InterpolationPoint>)> {
    let file: DatasetFile = serde_json::from_str(text)?;
    let points = file
        .points
        .iter()
        .map(|p| {
            let a = matrix_from_json(&p.a)?;
            let gamma = p.gamma.as_ref().map(|g| matrix_from_json(g)).transpose()?;
            Ok(InterpolationPoint::new(p.omega, a, gamma))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((file.m, points))
}

#[derive(Serialize, Deserialize)]
struct FilterFile {
    m: usize,
    degree: usize,
    #[serde(rename = "N")]
    n: Vec<MatrixJson>,
    #[serde(rename = "D")]
    d: Vec<MatrixJson>,
    #[serde(default)]
    derotation: Option<MatrixJson>,
    #[serde(default)]
    interp_omegas: Vec<f64>,
}

pub fn filter_to_json(f: &AllPassFilter) -> Result<String> {
    let file = FilterFile {
        m: f.dim(),
        degree: f.degree(),
        n: f.n.coeffs().iter().map(matrix_to_json).collect(),
        d: f.d.coeffs().iter().map(matrix_to_json).collect(),
        derotation: f.derotation.as_ref().map(matrix_to_json),
        interp_omegas: f.interp_omegas.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn filter_from_json(text: &str) -> Result<AllPassFilter> {
    let file: FilterFile = serde_json::from_str(text)?;
    let n = file
        .n
        .iter()
        .map(|c| matrix_from_json(c))
        .collect::<Result<Vec<_>>>()?;
    let d = file
        .d
        .iter()
        .map(|c| matrix_from_json(c))
        .collect::<Result<Vec<_>>>()?;
    if n.is_empty() || d.is_empty() {
        return Err(Error::Parse("filter polynomials need coefficients".into()));
    }
    Ok(AllPassFilter {
        n: MatrixPolynomial::from_coeffs(n),
        d: MatrixPolynomial::from_coeffs(d),
        interp_omegas: file.interp_omegas,
        derotation: file
            .derotation
            .as_ref()
            .map(|c| matrix_from_json(c))
            .transpose()?,
    })
}

/// Scientific notation with 17 significant digits, for bit-stable diffs.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Signal CSV: one row per sample, columns t, re(x_1), im(x_1), …
pub fn signal_to_csv(x: &VectorSignal) -> String {
    let m = x.dim();
    let mut out = String::from("t");
    for c in 1..=m {
        out.push_str(&format!(",re_x{c},im_x{c}"));
    }
    out.push('\n');
    for (t, s) in x.samples.iter().enumerate() {
        out.push_str(&t.to_string());
        for i in 0..m {
            out.push(',');
            out.push_str(&fmt_float(s[i].re));
            out.push(',');
            out.push_str(&fmt_float(s[i].im));
        }
        out.push('\n');
    }
    out
}

pub fn signal_from_csv(text: &str) -> Result<VectorSignal> {
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('t') || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 3 || fields.len() % 2 == 0 {
            return Err(Error::Parse(format!(
                "line {}: expected t,re,im,… columns",
                lineno + 1
            )));
        }
        let m = (fields.len() - 1) / 2;
        let mut v = CVec::zeros(m);
        for i in 0..m {
            let re: f64 = fields[1 + 2 * i]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad float", lineno + 1)))?;
            let im: f64 = fields[2 + 2 * i]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad float", lineno + 1)))?;
            v[i] = cplx(re, im);
        }
        samples.push(v);
    }
    VectorSignal::new(samples)
}

/// Comparison report CSV: one row per grid frequency per method per metric.
pub fn report_to_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("omega,method,metric,mean,median\n");
    for curves in &report.curves {
        for (g, &omega) in report.grid.iter().enumerate() {
            out.push_str(&format!(
                "{},{},frobenius,{},{}\n",
                fmt_float(omega),
                curves.method.name(),
                fmt_float(curves.frob_mean[g]),
                fmt_float(curves.frob_median[g]),
            ));
        }
        for (g, &omega) in report.grid.iter().enumerate() {
            out.push_str(&format!(
                "{},{},flag,{},{}\n",
                fmt_float(omega),
                curves.method.name(),
                fmt_float(curves.flag_mean[g]),
                fmt_float(curves.flag_median[g]),
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct ReportSummary<'a> {
    m: usize,
    n_seeds: usize,
    seeds_used: usize,
    failures: usize,
    failure_rate: f64,
    grid_size: usize,
    anchor_omegas: Vec<f64>,
    methods: Vec<&'a str>,
}

pub fn report_summary_json(report: &ComparisonReport) -> Result<String> {
    let summary = ReportSummary {
        m: report.config_m,
        n_seeds: report.config_n_seeds,
        seeds_used: report.seeds_used,
        failures: report.failures,
        failure_rate: report.failure_rate,
        grid_size: report.grid.len(),
        anchor_omegas: report
            .anchor_indices
            .iter()
            .map(|&i| report.grid[i])
            .collect(),
        methods: report.curves.iter().map(|c| c.method.name()).collect(),
    };
    Ok(serde_json::to_string_pretty(&summary)?)
}

pub fn timing_to_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from("method,m,mean_ms\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.method.name(), r.m, fmt_float(r.mean_ms)));
    }
    out
}

#[derive(Deserialize)]
struct PdpFile {
    delays_ns: Vec<f64>,
    powers_db: Vec<f64>,
    sample_rate_hz: f64,
}

pub fn pdp_from_json(text: &str) -> Result<PowerDelayProfile> {
    let file: PdpFile = serde_json::from_str(text)?;
    PowerDelayProfile::from_ns(&file.delays_ns, &file.powers_db, file.sample_rate_hz)
}
