//! Covering certificates: canonical JSON form, an independent verifier,
//! smoothness reports and the Ennola lower bound.
//!
//! The verifier uses only field arithmetic and the exact geometry; nothing
//! from the covering search is trusted.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, QuadraticReal, Rational};
use crate::error::CertificateError;
use crate::field::{discriminant, FieldElement, QuadField};
use crate::geometry::{fundamental_box, region_contains_box, Region};

pub const CERTIFICATE_EXTENSION: &str = ".e2cert.json";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertRegion {
    pub center: FieldElement,
    pub q2: FieldElement,
}

/// A dyadic sub-box of `R0`, addressed by quadrant digits, and the region
/// claimed to contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertLeaf {
    pub path: String,
    pub region: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub m: u64,
    pub disc: u64,
    pub t: u64,
    pub n: u64,
    pub regions: Vec<CertRegion>,
    pub leaves: Vec<CertLeaf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionJson {
    center: [String; 2],
    q2: [String; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeafJson {
    path: String,
    region: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    m: u64,
    disc: u64,
    #[serde(rename = "T")]
    t: u64,
    #[serde(rename = "N")]
    n: u64,
    regions: Vec<RegionJson>,
    leaves: Vec<LeafJson>,
}

fn element_json(e: &FieldElement) -> [String; 2] {
    [format_rational(&e.a), format_rational(&e.b)]
}

fn element_from_json(pair: &[String; 2], what: &str) -> Result<FieldElement, CertificateError> {
    let parse = |s: &str| {
        parse_rational(s).map_err(|e| CertificateError::Parse { line: 0, column: 0, message: format!("{what}: {e}") })
    };
    Ok(FieldElement::new(parse(&pair[0])?, parse(&pair[1])?))
}

impl Certificate {
    /// Canonical compact JSON; equal certificates give equal bytes.
    pub fn to_json(&self) -> String {
        let json = CertificateJson {
            m: self.m,
            disc: self.disc,
            t: self.t,
            n: self.n,
            regions: self
                .regions
                .iter()
                .map(|r| RegionJson { center: element_json(&r.center), q2: element_json(&r.q2) })
                .collect(),
            leaves: self.leaves.iter().map(|l| LeafJson { path: l.path.clone(), region: l.region }).collect(),
        };
        serde_json::to_string(&json).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertificateError> {
        let json: CertificateJson = serde_json::from_str(text).map_err(|e| CertificateError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let regions = json
            .regions
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(CertRegion {
                    center: element_from_json(&r.center, &format!("region {i} center"))?,
                    q2: element_from_json(&r.q2, &format!("region {i} q2"))?,
                })
            })
            .collect::<Result<Vec<_>, CertificateError>>()?;
        Ok(Certificate {
            m: json.m,
            disc: json.disc,
            t: json.t,
            n: json.n,
            regions,
            leaves: json.leaves.into_iter().map(|l| CertLeaf { path: l.path, region: l.region }).collect(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CertificateError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Certificate, CertificateError> {
        Certificate::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn max_depth(&self) -> usize {
        self.leaves.iter().map(|l| l.path.len()).max().unwrap_or(0)
    }
}

/// Outcome of verification; `check` numbers the failed stage (1 field,
/// 2 regions, 3 leaf partition, 4 containment) and `locus` names the
/// offending item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerificationReport {
    Accepted,
    Rejected { check: u8, reason: String, locus: String },
}

impl VerificationReport {
    pub fn is_accepted(&self) -> bool {
        matches!(self, VerificationReport::Accepted)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationReport::Accepted => write!(f, "accepted"),
            VerificationReport::Rejected { check, reason, locus } => {
                write!(f, "rejected at check {check}: {reason} (at {locus})")
            }
        }
    }
}

fn reject(check: u8, reason: impl Into<String>, locus: impl Into<String>) -> VerificationReport {
    VerificationReport::Rejected { check, reason: reason.into(), locus: locus.into() }
}

/// Deepest leaf path accepted by the verifier.
pub const MAX_PATH_LEN: usize = 120;

/// First structural defect of the leaf paths in path order: a hole, a leaf
/// that is a prefix of another (including duplicates), or a bad digit.
fn partition_defect(paths: &[&str]) -> Option<(String, String)> {
    fn walk(paths: &[&str], prefix: &mut String) -> Option<(String, String)> {
        let depth = prefix.len();
        match paths {
            [] => return Some(("region of R0 not covered by any leaf".into(), display_path(prefix))),
            [only] if only.len() == depth => return None,
            _ => {}
        }
        if paths[0].len() == depth {
            return Some(("leaf overlaps another leaf".into(), display_path(prefix)));
        }
        let mut start = 0;
        for digit in b'0'..=b'3' {
            let end = start + paths[start..].iter().take_while(|p| p.as_bytes()[depth] == digit).count();
            prefix.push(digit as char);
            let defect = walk(&paths[start..end], prefix);
            prefix.pop();
            if defect.is_some() {
                return defect;
            }
            start = end;
        }
        None
    }
    if let Some(p) = paths.iter().find(|p| p.len() > MAX_PATH_LEN || !p.bytes().all(|c| (b'0'..=b'3').contains(&c))) {
        return Some(("leaf path is not a quadrant string of allowed length".into(), display_path(p)));
    }
    let mut sorted = paths.to_vec();
    sorted.sort_unstable();
    walk(&sorted, &mut String::new())
}

fn display_path(p: &str) -> String {
    if p.is_empty() {
        "leaf \"\" (R0)".into()
    } else {
        format!("leaf \"{p}\"")
    }
}

/// Checks, in order: the field, every region, the leaf partition, and the
/// containment of every leaf box in its region. The first failure is
/// reported; leaf failures are reported in path order.
pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    // (1) field
    let field = match QuadField::new(cert.m) {
        Ok(f) => f,
        Err(_) => return reject(1, format!("m = {} is not a squarefree integer >= 2", cert.m), "m"),
    };
    if cert.disc != discriminant(cert.m) {
        return reject(1, format!("disc {} does not match m = {}", cert.disc, cert.m), "disc");
    }
    // (2) regions
    let mut regions = Vec::with_capacity(cert.regions.len());
    for (i, r) in cert.regions.iter().enumerate() {
        match Region::new(&field, r.center.clone(), r.q2.clone()) {
            Ok(region) => regions.push(region),
            Err(e) => return reject(2, format!("malformed region: {e}"), format!("region {i}")),
        }
    }
    // (3) leaves
    if let Some(leaf) = cert.leaves.iter().find(|l| l.region >= regions.len()) {
        return reject(3, format!("region index {} out of range", leaf.region), display_path(&leaf.path));
    }
    let paths: Vec<&str> = cert.leaves.iter().map(|l| l.path.as_str()).collect();
    if let Some((reason, locus)) = partition_defect(&paths) {
        return reject(3, reason, locus);
    }
    // (4) containment
    let r0 = fundamental_box(&field);
    let mut order: Vec<&CertLeaf> = cert.leaves.iter().collect();
    order.sort_unstable_by(|a, b| a.path.cmp(&b.path));
    let bad = order.par_iter().find_first(|leaf| {
        let rect = r0.at_path(&leaf.path).expect("paths checked");
        !region_contains_box(&regions[leaf.region], &rect)
    });
    match bad {
        Some(leaf) => reject(4, format!("box is not inside region {}", leaf.region), display_path(&leaf.path)),
        None => VerificationReport::Accepted,
    }
}

/// Summary of an accepted certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub m: u64,
    pub disc: u64,
    /// Upper bound for the least `n` with `F` `n`-smooth euclidean.
    pub max_denominator_norm: u64,
    pub region_count: usize,
    pub max_depth: usize,
    pub ennola_floor: u64,
}

impl SmoothnessReport {
    pub const CSV_HEADER: &'static str = "m,disc,max_denominator_norm,region_count,max_depth,ennola_floor";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.m, self.disc, self.max_denominator_norm, self.region_count, self.max_depth, self.ennola_floor
        )
    }
}

pub fn smoothness_report(cert: &Certificate) -> SmoothnessReport {
    let field = QuadField::new(cert.m).expect("accepted certificate has a valid m");
    let max_denominator_norm = cert
        .regions
        .iter()
        .map(|r| u64::try_from(field.norm(&r.q2).abs().to_integer()).unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0);
    let mut used: Vec<usize> = cert.leaves.iter().map(|l| l.region).collect();
    used.sort_unstable();
    used.dedup();
    SmoothnessReport {
        m: cert.m,
        disc: cert.disc,
        max_denominator_norm,
        region_count: used.len(),
        max_depth: cert.max_depth(),
        ennola_floor: ennola_floor(cert.disc),
    }
}

/// Least `n` with `disc ≤ (16+6√6)²·lcm(1..n)⁴`: a field whose
/// discriminant exceeds the bound for `t = lcm(1..n)` has euclidean minimum
/// too large for `n`-smooth coverings. The comparison is exact in `Q(√6)`.
pub fn ennola_floor(disc: u64) -> u64 {
    let base = QuadraticReal::new(Rational::from_integer(472.into()), Rational::from_integer(192.into()), 6);
    let disc = Rational::from_integer(disc.into());
    let mut t = BigInt::one();
    let mut n = 1u64;
    loop {
        let t4 = Rational::from_integer(t.pow(4));
        if base.scale(&t4).cmp_rational(&disc) != std::cmp::Ordering::Less {
            return n;
        }
        n += 1;
        t = num_integer::lcm(t, BigInt::from(n));
    }
}
