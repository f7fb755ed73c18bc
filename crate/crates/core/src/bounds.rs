//! Envelopes for log|ζ(ρ′)| at critical points, fitted constants and the
//! CSV/JSON report.

use std::f64::consts::LN_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critical::CriticalPoint;

/// Smallest ordinate with `log log γ > 1`, rounded up.
pub const MIN_GAMMA: f64 = 16.0;

pub const CSV_HEADER: [&str; 10] = [
    "gamma",
    "beta",
    "re_zeta",
    "im_zeta",
    "log_abs_zeta",
    "residual",
    "env_thm1",
    "env_thm3",
    "ratio_upper",
    "ratio_lower",
];

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no records to fit")]
    Empty,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("report schema: {0}")]
    Schema(String),
}

/// B(σ₁) = (σ₁ − ½)^{1−σ₁} log 2 / ((1−σ₁)² 4^{1−σ₁}).
pub fn b_constant(sigma1: f64) -> Result<f64, BoundsError> {
    if !(sigma1 > 0.5 && sigma1 < 1.0) {
        return Err(BoundsError::InvalidArgument(format!("sigma1 = {sigma1} outside (1/2, 1)")));
    }
    let r = 1.0 - sigma1;
    Ok((sigma1 - 0.5).powf(r) * LN_2 / (r * r * 4f64.powf(r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
}

impl FromStr for Theorem {
    type Err = BoundsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Theorem::T1),
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "T4" => Ok(Theorem::T4),
            _ => Err(BoundsError::InvalidArgument(format!("unknown theorem {s:?}"))),
        }
    }
}

/// Which log log exponent to use for the T2/T4 envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentForm {
    /// `5 − 3β′ + ε`
    Stated,
    /// `2 + b(1 − σ₁)`
    Proof,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub sigma1: f64,
    pub sigma2: f64,
    pub a_fit: f64,
    pub c_fit: f64,
    /// `b` of the parameter coupling, used by the proof-form exponent.
    pub b: f64,
    pub eps: f64,
    pub eps_prime: f64,
}

impl EnvelopeParams {
    /// Envelopes with A = C = 1, so ratios read directly as constants.
    pub fn unit(sigma1: f64, sigma2: f64) -> Result<Self, BoundsError> {
        let p = Self {
            sigma1,
            sigma2,
            a_fit: 1.0,
            c_fit: 1.0,
            b: 3.2,
            eps: 0.0,
            eps_prime: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        if !(0.5 < self.sigma1 && self.sigma1 < self.sigma2 && self.sigma2 < 1.0) {
            return Err(BoundsError::InvalidArgument(format!(
                "need 1/2 < sigma1 < sigma2 < 1, got {} and {}",
                self.sigma1, self.sigma2
            )));
        }
        if !(self.a_fit >= 0.0 && self.c_fit >= 0.0) || self.eps < 0.0 || self.eps_prime < 0.0 {
            return Err(BoundsError::InvalidArgument("constants must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn with_fit(self, fit: FittedConstants) -> Self {
        Self {
            a_fit: fit.a_fit,
            c_fit: fit.c_fit,
            ..self
        }
    }
}

/// The named envelope with the stated exponent form.
pub fn envelope(theorem: Theorem, beta: f64, gamma: f64, params: &EnvelopeParams) -> Result<f64, BoundsError> {
    envelope_with(theorem, ExponentForm::Stated, beta, gamma, params)
}

pub fn envelope_with(
    theorem: Theorem,
    form: ExponentForm,
    beta: f64,
    gamma: f64,
    params: &EnvelopeParams,
) -> Result<f64, BoundsError> {
    if !(gamma >= MIN_GAMMA) {
        return Err(BoundsError::InvalidArgument(format!("gamma = {gamma} below {MIN_GAMMA}")));
    }
    if !beta.is_finite() {
        return Err(BoundsError::InvalidArgument(format!("beta = {beta}")));
    }
    let lg = gamma.ln();
    let llg = lg.ln();
    let base = lg.powf(2.0 - 2.0 * beta) / llg;
    let b_env = || -> Result<f64, BoundsError> {
        let exponent = match form {
            ExponentForm::Stated => 5.0 - 3.0 * beta + params.eps,
            ExponentForm::Proof => 2.0 + params.b * (1.0 - params.sigma1),
        };
        Ok(lg.powf(1.0 - beta) / llg.powf(exponent))
    };
    Ok(match theorem {
        Theorem::T1 => params.a_fit * base,
        Theorem::T3 => -params.c_fit * base,
        Theorem::T2 => (b_constant(params.sigma1)? - params.eps_prime) * b_env()?,
        Theorem::T4 => (-b_constant(params.sigma1)? + params.eps_prime) * b_env()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub point: CriticalPoint,
    pub env_thm1: f64,
    pub env_thm3: f64,
    pub env_thm2: f64,
    pub env_thm4: f64,
    pub env_thm2_proof: f64,
    pub env_thm4_proof: f64,
    pub ratio_upper: f64,
    pub ratio_lower: f64,
}

impl BoundRecord {
    pub fn new(point: CriticalPoint, params: &EnvelopeParams) -> Result<Self, BoundsError> {
        let (b, g) = (point.beta, point.gamma);
        let env = |t| envelope(t, b, g, params);
        let proof = |t| envelope_with(t, ExponentForm::Proof, b, g, params);
        let env_thm1 = env(Theorem::T1)?;
        let env_thm3 = env(Theorem::T3)?;
        Ok(Self {
            point,
            env_thm1,
            env_thm3,
            env_thm2: env(Theorem::T2)?,
            env_thm4: env(Theorem::T4)?,
            env_thm2_proof: proof(Theorem::T2)?,
            env_thm4_proof: proof(Theorem::T4)?,
            ratio_upper: point.log_abs_zeta / env_thm1,
            ratio_lower: point.log_abs_zeta / env_thm3,
        })
    }
}

/// Records for every point with a defined envelope; ordinates below
/// [`MIN_GAMMA`] are skipped.
pub fn build_records(points: &[CriticalPoint], params: &EnvelopeParams) -> Result<Vec<BoundRecord>, BoundsError> {
    points
        .iter()
        .filter(|p| p.gamma >= MIN_GAMMA)
        .map(|p| BoundRecord::new(*p, params))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedConstants {
    pub a_fit: f64,
    pub c_fit: f64,
}

/// Smallest A and C making every record satisfy the T1 and T3 envelopes:
/// `max log|ζ| · loglog γ / (log γ)^{2−2β}` over the records, and likewise
/// for `−log|ζ|`, both clamped below at 0.
pub fn fit_constants(records: &[BoundRecord]) -> Result<FittedConstants, BoundsError> {
    if records.is_empty() {
        return Err(BoundsError::Empty);
    }
    let mut a_fit: f64 = 0.0;
    let mut c_fit: f64 = 0.0;
    for r in records {
        let p = &r.point;
        let lg = p.gamma.ln();
        let scaled = p.log_abs_zeta * lg.ln() / lg.powf(2.0 - 2.0 * p.beta);
        a_fit = a_fit.max(scaled);
        c_fit = c_fit.max(-scaled);
    }
    Ok(FittedConstants { a_fit, c_fit })
}

/// Extremes of the records against the T2/T4 envelopes. Descriptive only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub count: usize,
    pub a_fit: f64,
    pub c_fit: f64,
    pub max_log_abs_zeta: f64,
    pub min_log_abs_zeta: f64,
    pub max_over_thm2: f64,
    pub min_over_thm4: f64,
    pub max_over_thm2_proof: f64,
    pub min_over_thm4_proof: f64,
}

pub fn summarize(records: &[BoundRecord]) -> Result<ReportSummary, BoundsError> {
    let fit = fit_constants(records)?;
    let fold_max = |f: &dyn Fn(&BoundRecord) -> f64| records.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let fold_min = |f: &dyn Fn(&BoundRecord) -> f64| records.iter().map(f).fold(f64::INFINITY, f64::min);
    Ok(ReportSummary {
        count: records.len(),
        a_fit: fit.a_fit,
        c_fit: fit.c_fit,
        max_log_abs_zeta: fold_max(&|r| r.point.log_abs_zeta),
        min_log_abs_zeta: fold_min(&|r| r.point.log_abs_zeta),
        max_over_thm2: fold_max(&|r| r.point.log_abs_zeta / r.env_thm2),
        min_over_thm4: fold_min(&|r| r.point.log_abs_zeta / r.env_thm4.abs()),
        max_over_thm2_proof: fold_max(&|r| r.point.log_abs_zeta / r.env_thm2_proof),
        min_over_thm4_proof: fold_min(&|r| r.point.log_abs_zeta / r.env_thm4_proof.abs()),
    })
}

/// One output row. Values are rounded to 12 significant digits, so CSV and
/// JSON renderings parse back to the same row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub gamma: f64,
    pub beta: f64,
    pub re_zeta: f64,
    pub im_zeta: f64,
    pub log_abs_zeta: f64,
    pub residual: f64,
    pub env_thm1: f64,
    pub env_thm3: f64,
    pub ratio_upper: f64,
    pub ratio_lower: f64,
}

impl ReportRow {
    pub fn from_record(r: &BoundRecord) -> Self {
        let q = |v: f64| round_sig(v);
        Self {
            gamma: q(r.point.gamma),
            beta: q(r.point.beta),
            re_zeta: q(r.point.zeta_value.re),
            im_zeta: q(r.point.zeta_value.im),
            log_abs_zeta: q(r.point.log_abs_zeta),
            residual: q(r.point.residual),
            env_thm1: q(r.env_thm1),
            env_thm3: q(r.env_thm3),
            ratio_upper: q(r.ratio_upper),
            ratio_lower: q(r.ratio_lower),
        }
    }

    fn values(&self) -> [f64; 10] {
        [
            self.gamma,
            self.beta,
            self.re_zeta,
            self.im_zeta,
            self.log_abs_zeta,
            self.residual,
            self.env_thm1,
            self.env_thm3,
            self.ratio_upper,
            self.ratio_lower,
        ]
    }
}

/// `printf("%.12g")`.
pub fn format_g12(v: f64) -> String {
    const P: i32 = 12;
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= P {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_sig(v: f64) -> f64 {
    format_g12(v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = BoundsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(BoundsError::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

/// Rows sorted by γ′ (ties by β′).
pub fn report_rows(records: &[BoundRecord]) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = records.iter().map(ReportRow::from_record).collect();
    rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    rows
}

/// The report document. `preamble` lines are written as `#` comments at the
/// top of CSV output and ignored for JSON.
pub fn emit_report(records: &[BoundRecord], format: ReportFormat, preamble: &[String]) -> Result<String, BoundsError> {
    let rows = report_rows(records);
    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            for line in preamble {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for r in &rows {
                w.write_record(r.values().map(format_g12))?;
            }
            let body = w.into_inner().map_err(|e| BoundsError::Schema(e.to_string()))?;
            out.push_str(&String::from_utf8(body).map_err(|e| BoundsError::Schema(e.to_string()))?);
            Ok(out)
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn parse_csv_report(text: &str) -> Result<Vec<ReportRow>, BoundsError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(BoundsError::Schema(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

pub fn parse_json_report(text: &str) -> Result<Vec<ReportRow>, BoundsError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn point(beta: f64, gamma: f64, log_abs: f64) -> CriticalPoint {
        CriticalPoint {
            beta,
            gamma,
            zeta_value: Complex64::from_polar(log_abs.exp(), 0.3),
            log_abs_zeta: log_abs,
            residual: 1e-12,
        }
    }

    #[test]
    fn b_constant_values() {
        assert!((b_constant(0.75).unwrap() - 5.5451).abs() < 1e-4);
        assert!((b_constant(0.6).unwrap() - 0.9906).abs() < 1e-4);
        assert!(b_constant(0.5 + 1e-12).unwrap() < 1e-4);
        assert!(b_constant(0.5).is_err() && b_constant(1.0).is_err());
    }

    #[test]
    fn envelope_values() {
        let p = EnvelopeParams::unit(0.6, 0.9).unwrap();
        let t1 = envelope(Theorem::T1, 0.75, 1000.0, &p).unwrap();
        assert!((t1 - 1.3600).abs() < 1e-4);
        let t3 = envelope(Theorem::T3, 0.75, 1000.0, &p).unwrap();
        assert_eq!(t3, -t1);

        let p = EnvelopeParams::unit(0.75, 0.9).unwrap();
        let t2 = envelope(Theorem::T2, 0.75, 1e6, &p).unwrap();
        let lg = 1e6f64.ln();
        let expect = 5.5451 * lg.powf(0.25) / lg.ln().powf(2.75);
        assert!((t2 - expect).abs() < 1e-4 * expect);
        let t4 = envelope(Theorem::T4, 0.75, 1e6, &p).unwrap();
        assert_eq!(t4, -t2);
        let proof = envelope_with(Theorem::T2, ExponentForm::Proof, 0.75, 1e6, &p).unwrap();
        assert!((proof - b_constant(0.75).unwrap() * lg.powf(0.25) / lg.ln().powf(2.0 + 3.2 * 0.25)).abs() < 1e-12);
        assert!(envelope(Theorem::T1, 0.75, 15.0, &p).is_err());
    }

    #[test]
    fn fit_cases() {
        let p = EnvelopeParams::unit(0.6, 0.9).unwrap();
        assert!(matches!(fit_constants(&[]), Err(BoundsError::Empty)));
        let r = BoundRecord::new(point(0.7, 100.0, 0.0), &p).unwrap();
        assert_eq!(fit_constants(&[r]).unwrap(), FittedConstants { a_fit: 0.0, c_fit: 0.0 });

        let pts = [point(0.7, 100.0, 0.8), point(0.6, 500.0, -0.4), point(0.9, 3000.0, 0.1)];
        let recs: Vec<_> = pts.iter().map(|q| BoundRecord::new(*q, &p).unwrap()).collect();
        let fit = fit_constants(&recs).unwrap();
        let doubled: Vec<_> = pts
            .iter()
            .map(|q| BoundRecord::new(CriticalPoint { log_abs_zeta: 2.0 * q.log_abs_zeta, ..*q }, &p).unwrap())
            .collect();
        let fit2 = fit_constants(&doubled).unwrap();
        assert_eq!(fit2.a_fit, 2.0 * fit.a_fit);
        assert_eq!(fit2.c_fit, 2.0 * fit.c_fit);
        for r in &recs {
            assert!(r.ratio_upper <= fit.a_fit && r.ratio_lower <= fit.c_fit);
        }
    }

    #[test]
    fn g12_format() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(23.298_248_477_395_1), "23.2982484774");
        assert_eq!(format_g12(1.5e-12), "1.5e-12");
        assert_eq!(format_g12(-0.000_123_456_789_012_345), "-0.000123456789012");
        assert_eq!(format_g12(1e12), "1e+12");
        assert_eq!(format_g12(999_999_999_999.6), "1e+12");
        assert_eq!(format_g12(123_456_789_012.4), "123456789012");
    }

    #[test]
    fn report_round_trip() {
        let p = EnvelopeParams::unit(0.6, 0.9).unwrap();
        let empty = emit_report(&[], ReportFormat::Csv, &[]).unwrap();
        assert_eq!(empty.trim_end(), CSV_HEADER.join(","));
        assert!(parse_csv_report(&empty).unwrap().is_empty());

        let pts = [point(0.7, 300.0, 0.8), point(0.61, 100.0, -0.4), point(0.9, 3000.123, 0.1)];
        let recs: Vec<_> = pts.iter().map(|q| BoundRecord::new(*q, &p).unwrap()).collect();
        let csv = emit_report(&recs, ReportFormat::Csv, &["config a=1".into()]).unwrap();
        assert!(csv.starts_with("# config a=1\n"));
        assert_eq!(csv.lines().count(), 5);
        let json = emit_report(&recs, ReportFormat::Json, &[]).unwrap();
        let a = parse_csv_report(&csv).unwrap();
        let b = parse_json_report(&json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.windows(2).all(|w| w[0].gamma <= w[1].gamma));
    }
}
