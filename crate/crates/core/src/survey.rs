//! Proving every field in a discriminant range, one CSV row per field.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::certificate::{smoothness_report, verify_certificate};
use crate::covering::{prove, Schedule};
use crate::error::ProveError;
use crate::field::{discriminant, is_squarefree, QuadField};
use crate::ideals::{is_prime, splitting_type, SplittingType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurveyStatus {
    Proved,
    Inconclusive,
    ClassNumberNotOne,
    NotSquarefree,
}

impl SurveyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SurveyStatus::Proved => "proved",
            SurveyStatus::Inconclusive => "inconclusive",
            SurveyStatus::ClassNumberNotOne => "class_number_not_one",
            SurveyStatus::NotSquarefree => "not_squarefree",
        }
    }
}

impl FromStr for SurveyStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "proved" => SurveyStatus::Proved,
            "inconclusive" => SurveyStatus::Inconclusive,
            "class_number_not_one" => SurveyStatus::ClassNumberNotOne,
            "not_squarefree" => SurveyStatus::NotSquarefree,
            _ => return Err(format!("unknown status `{s}`")),
        })
    }
}

/// The certificate statistics are present only for proved fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub m: u64,
    pub disc: u64,
    pub status: SurveyStatus,
    pub max_denominator_norm: Option<u64>,
    pub region_count: Option<usize>,
    pub max_depth: Option<usize>,
    pub wall_time_ms: u64,
    pub inert_small_primes: Vec<u64>,
}

pub const SURVEY_CSV_HEADER: &str =
    "m,disc,status,max_denominator_norm,region_count,max_depth,wall_time_ms,inert_small_primes";

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl SurveyRow {
    pub fn csv_row(&self) -> String {
        let inert: Vec<String> = self.inert_small_primes.iter().map(|p| p.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.m,
            self.disc,
            self.status.as_str(),
            opt(&self.max_denominator_norm),
            opt(&self.region_count),
            opt(&self.max_depth),
            self.wall_time_ms,
            inert.join(";")
        )
    }

    /// The row with the timing column blanked, for comparisons.
    pub fn without_time(&self) -> SurveyRow {
        SurveyRow { wall_time_ms: 0, ..self.clone() }
    }
}

impl FromStr for SurveyRow {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(format!("expected 8 columns, found {}", cols.len()));
        }
        fn num<T: FromStr>(s: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad number `{s}`"))
        }
        fn maybe<T: FromStr>(s: &str) -> Result<Option<T>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        }
        let inert =
            if cols[7].is_empty() { Vec::new() } else { cols[7].split(';').map(num).collect::<Result<_, _>>()? };
        Ok(SurveyRow {
            m: num(cols[0])?,
            disc: num(cols[1])?,
            status: cols[2].parse()?,
            max_denominator_norm: maybe(cols[3])?,
            region_count: maybe(cols[4])?,
            max_depth: maybe(cols[5])?,
            wall_time_ms: num(cols[6])?,
            inert_small_primes: inert,
        })
    }
}

/// Primes below 20 that stay prime in `O_F`.
pub fn inert_small_primes(field: &QuadField) -> Vec<u64> {
    (2..20).filter(|&p| is_prime(p) && splitting_type(field, p) == SplittingType::Inert).collect()
}

/// Proves and verifies one field.
pub fn survey_field(m: u64, schedule: &Schedule) -> SurveyRow {
    let start = Instant::now();
    let disc = discriminant(m);
    let field = match QuadField::new(m) {
        Ok(f) => f,
        Err(_) => {
            return SurveyRow {
                m,
                disc,
                status: SurveyStatus::NotSquarefree,
                max_denominator_norm: None,
                region_count: None,
                max_depth: None,
                wall_time_ms: 0,
                inert_small_primes: Vec::new(),
            }
        }
    };
    let mut row = SurveyRow {
        m,
        disc,
        status: SurveyStatus::Inconclusive,
        max_denominator_norm: None,
        region_count: None,
        max_depth: None,
        wall_time_ms: 0,
        inert_small_primes: inert_small_primes(&field),
    };
    match prove(&field, schedule) {
        Ok(cert) => {
            if verify_certificate(&cert).is_accepted() {
                let report = smoothness_report(&cert);
                row.status = SurveyStatus::Proved;
                row.max_denominator_norm = Some(report.max_denominator_norm);
                row.region_count = Some(report.region_count);
                row.max_depth = Some(report.max_depth);
            }
        }
        Err(ProveError::ClassNumberNotOne(_)) | Err(ProveError::Ring(_)) => {
            row.status = SurveyStatus::ClassNumberNotOne;
        }
        Err(_) => {}
    }
    row.wall_time_ms = start.elapsed().as_millis() as u64;
    row
}

/// Squarefree `m ≥ 2` with discriminant below the bound, by discriminant;
/// also returns the skipped non-squarefree values.
pub fn survey_fields(max_disc: u64) -> (Vec<u64>, Vec<u64>) {
    let mut ms: Vec<u64> = (2..max_disc).filter(|&m| discriminant(m) < max_disc).collect();
    ms.sort_by_key(|&m| (discriminant(m), m));
    ms.into_iter().partition(|&m| is_squarefree(m))
}

/// One row per squarefree field with `disc < max_disc`, sorted by
/// discriminant. With `parallel`, fields run concurrently on the current
/// rayon pool.
pub fn run_survey(max_disc: u64, schedule: &Schedule, parallel: bool) -> Vec<SurveyRow> {
    let (fields, _) = survey_fields(max_disc);
    let mut rows: Vec<SurveyRow> = if parallel {
        fields.par_iter().map(|&m| survey_field(m, schedule)).collect()
    } else {
        let sequential = Schedule { parallel: false, ..schedule.clone() };
        fields.iter().map(|&m| survey_field(m, &sequential)).collect()
    };
    rows.sort_by_key(|r| (r.disc, r.m));
    rows
}

/// Static scatter plot of `max_denominator_norm` against the discriminant
/// for proved rows; fields with 2 and 3 both inert are drawn in red.
pub fn survey_svg(rows: &[SurveyRow]) -> String {
    let (w, h, pad) = (800.0, 500.0, 50.0);
    let proved: Vec<&SurveyRow> = rows.iter().filter(|r| r.status == SurveyStatus::Proved).collect();
    let max_d = proved.iter().map(|r| r.disc).max().unwrap_or(1).max(1) as f64;
    let max_n = proved.iter().filter_map(|r| r.max_denominator_norm).max().unwrap_or(1).max(1) as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <line x1=\"{pad}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <text x=\"{xm}\" y=\"{yl}\" text-anchor=\"middle\" font-size=\"14\">discriminant (max {max_d})</text>\n\
         <text x=\"15\" y=\"{ym}\" font-size=\"14\" transform=\"rotate(-90 15 {ym})\" text-anchor=\"middle\">max denominator norm (max {max_n})</text>\n",
        y0 = h - pad,
        x1 = w - pad,
        xm = w / 2.0,
        yl = h - 15.0,
        ym = h / 2.0,
    );
    for r in proved {
        let x = pad + (w - 2.0 * pad) * r.disc as f64 / max_d;
        let y = h - pad - (h - 2.0 * pad) * r.max_denominator_norm.unwrap_or(0) as f64 / max_n;
        let colour =
            if r.inert_small_primes.contains(&2) && r.inert_small_primes.contains(&3) { "red" } else { "steelblue" };
        out.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{colour}\"><title>m={}</title></circle>\n",
            r.m
        ));
    }
    out.push_str("</svg>\n");
    out
}
