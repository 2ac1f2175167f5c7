//! Continued fractions over `O_F` from 2-stage decreasing division chains.
//!
//! For `x = α/β`, a region `V(q)` with `x ∈ V(q)`, `q = q1 + 1/q2`, gives
//! `α = q1·β + r1`, `β = q2·r1 + r2` with
//! `|Nm r2| = |Nm β|·|Nm q2|·|Nm(x − q)| < |Nm β|`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::arith::{floor_rational, round_half_toward_zero, Rational};
use crate::certificate::Certificate;
use crate::error::{CfracError, ParseError};
use crate::field::{FieldElement, QuadField};
use crate::geometry::{fundamental_box, Point2, Rect, Region};

/// Quotient/remainder pairs `(q_i, r_i)` with `r_{i−2} = q_i·r_{i−1} + r_i`,
/// `r_{−1} = α`, `r_0 = β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionChain {
    pub stages: Vec<(FieldElement, FieldElement)>,
}

impl DivisionChain {
    pub fn quotients(&self) -> ContinuedFraction {
        ContinuedFraction { quotients: self.stages.iter().map(|(q, _)| q.clone()).collect() }
    }
}

/// `[q1, q2, …, qn] = q1 + 1/[q2, …, qn]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<FieldElement>,
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.quotients.iter().map(|q| q.to_string()).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

impl FromStr for ContinuedFraction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::ContinuedFraction(s.to_string());
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let quotients =
            inner.split("; ").map(|e| e.parse::<FieldElement>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        Ok(ContinuedFraction { quotients })
    }
}

/// `x = xbar + gamma` with `gamma` integral and both coordinates of `xbar`
/// in `[0, 1)`.
pub fn reduce_mod_of(x: &FieldElement) -> (FieldElement, FieldElement) {
    let gamma = FieldElement::from_bigints(floor_rational(&x.a), floor_rational(&x.b));
    (x - &gamma, gamma)
}

/// One step of a decreasing chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    One { q1: FieldElement, r1: FieldElement },
    Two { q1: FieldElement, r1: FieldElement, q2: FieldElement, r2: FieldElement },
}

/// A verified certificate prepared for quotient lookups.
pub struct CoveringIndex {
    field: QuadField,
    regions: Vec<Region>,
    /// regions sorted by denominator norm, for the fallback scan
    by_size: Vec<usize>,
    leaves: HashMap<String, usize>,
    r0: Rect,
    depth: usize,
}

impl CoveringIndex {
    /// Expects a certificate that passed verification.
    pub fn new(cert: &Certificate) -> Result<CoveringIndex, CfracError> {
        let field = QuadField::new(cert.m).map_err(|_| CfracError::NoRegion("certificate field is invalid".into()))?;
        let regions = cert
            .regions
            .iter()
            .map(|r| Region::new(&field, r.center.clone(), r.q2.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CfracError::NoRegion(format!("malformed certificate region: {e}")))?;
        let mut by_size: Vec<usize> = (0..regions.len()).collect();
        by_size.sort_by_key(|&i| (regions[i].n, i));
        Ok(CoveringIndex {
            r0: fundamental_box(&field),
            depth: cert.max_depth(),
            leaves: cert.leaves.iter().map(|l| (l.path.clone(), l.region)).collect(),
            field,
            regions,
            by_size,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    /// Region of the leaf containing the point; on a subdivision line the
    /// lower child is taken.
    fn leaf_region(&self, p: &Point2) -> Option<usize> {
        let mut rect = self.r0.clone();
        let mut path = String::new();
        for _ in 0..=self.depth {
            if let Some(&r) = self.leaves.get(&path) {
                return Some(r);
            }
            let kids = rect.subdivide();
            let right = p.x > kids[0].x1;
            let up = p.y > kids[0].y1;
            let q = (right as usize) + 2 * (up as usize);
            path.push(char::from(b'0' + q as u8));
            rect = kids[q].clone();
        }
        None
    }

    /// A region containing `xbar + γ` and the translate `γ`.
    fn locate(&self, xbar: &FieldElement) -> Result<(usize, FieldElement), CfracError> {
        let zero = FieldElement::zero();
        if let Some(r) = self.leaf_region(&Point2::of(&self.field, xbar)) {
            if self.regions[r].contains_element(&self.field, xbar) {
                return Ok((r, zero));
            }
        }
        if let Some(&r) = self.by_size.iter().find(|&&r| self.regions[r].contains_element(&self.field, xbar)) {
            return Ok((r, zero));
        }
        for da in -1..=1 {
            for db in -1..=1 {
                let g = FieldElement::from_ints(da, db);
                let moved = xbar + &g;
                if let Some(&r) = self.by_size.iter().find(|&&r| self.regions[r].contains_element(&self.field, &moved))
                {
                    return Ok((r, g));
                }
            }
        }
        Err(CfracError::NoRegion(xbar.to_string()))
    }
}

/// Coordinate-wise rounding, ties toward zero.
fn round_element(x: &FieldElement) -> FieldElement {
    FieldElement::from_bigints(round_half_toward_zero(&x.a), round_half_toward_zero(&x.b))
}

/// One stage when rounding already decreases the norm, otherwise two stages
/// read off the covering.
pub fn two_stage_step(alpha: &FieldElement, beta: &FieldElement, index: &CoveringIndex) -> Result<Step, CfracError> {
    let f = &index.field;
    if beta.is_zero() {
        return Err(CfracError::DivisionByZero);
    }
    let x = f.div(alpha, beta).map_err(|_| CfracError::DivisionByZero)?;
    let q1 = round_element(&x);
    let r1 = alpha - &f.mul(&q1, beta);
    let beta_norm = f.norm(beta).abs();
    if f.norm(&r1).abs() < beta_norm {
        return Ok(Step::One { q1, r1 });
    }
    let (xbar, gamma) = reduce_mod_of(&x);
    let (r, shift) = index.locate(&xbar)?;
    let region = &index.regions[r];
    // x lies in V(q − shift + gamma)
    let q1 = &(&region.q1_base + &gamma) - &shift;
    let q2 = region.q2.clone();
    let r1 = alpha - &f.mul(&q1, beta);
    let r2 = beta - &f.mul(&q2, &r1);
    Ok(Step::Two { q1, r1, q2, r2 })
}

/// The division chain of `α/β` and its continued fraction.
pub fn cfrac_chain(
    alpha: &FieldElement,
    beta: &FieldElement,
    index: &CoveringIndex,
) -> Result<DivisionChain, CfracError> {
    if !alpha.is_integral() || !beta.is_integral() {
        return Err(CfracError::NotIntegral);
    }
    if beta.is_zero() {
        return Err(CfracError::DivisionByZero);
    }
    let mut stages = Vec::new();
    let (mut a, mut b) = (alpha.clone(), beta.clone());
    while !b.is_zero() {
        match two_stage_step(&a, &b, index)? {
            Step::One { q1, r1 } => {
                stages.push((q1, r1.clone()));
                (a, b) = (b, r1);
            }
            Step::Two { q1, r1, q2, r2 } => {
                stages.push((q1, r1.clone()));
                if r1.is_zero() {
                    break;
                }
                stages.push((q2, r2.clone()));
                (a, b) = (r1, r2);
            }
        }
    }
    Ok(DivisionChain { stages })
}

pub fn cfrac(
    alpha: &FieldElement,
    beta: &FieldElement,
    index: &CoveringIndex,
) -> Result<ContinuedFraction, CfracError> {
    Ok(cfrac_chain(alpha, beta, index)?.quotients())
}

/// Chain for an arbitrary element `x`, written as `α/β` first.
pub fn cfrac_chain_for(
    x: &FieldElement,
    index: &CoveringIndex,
) -> Result<(FieldElement, FieldElement, DivisionChain), CfracError> {
    let (alpha, beta) = clear_denominators(x);
    let chain = cfrac_chain(&alpha, &beta, index)?;
    Ok((alpha, beta, chain))
}

/// Writes `x` as `α/β` with `β` a positive rational integer.
pub fn clear_denominators(x: &FieldElement) -> (FieldElement, FieldElement) {
    let d = Rational::from_integer(x.denominator());
    (x.scale(&d), FieldElement::from_rational(d))
}

/// Backward evaluation `t ← q_i + 1/t`.
pub fn eval_cf(field: &QuadField, cf: &ContinuedFraction) -> Result<FieldElement, CfracError> {
    let (last, rest) = cf.quotients.split_last().ok_or(CfracError::Empty)?;
    let mut t = last.clone();
    for (i, q) in rest.iter().enumerate().rev() {
        if t.is_zero() {
            return Err(CfracError::ZeroTail(i + 1));
        }
        t = q + &field.inv(&t).expect("nonzero");
    }
    Ok(t)
}

/// Stage identities, integrality, a final zero remainder, a decreasing
/// norm in blocks of one or two stages, and `eval = α/β`.
///
/// The norm condition asks for a split of the chain into consecutive
/// blocks of length 1 or 2, each ending with a remainder of smaller norm
/// than the divisor it started from.
pub fn verify_chain(field: &QuadField, alpha: &FieldElement, beta: &FieldElement, chain: &DivisionChain) -> bool {
    let k = chain.stages.len();
    if k == 0 || beta.is_zero() {
        return false;
    }
    let mut rems = vec![alpha.clone(), beta.clone()];
    for (i, (q, r)) in chain.stages.iter().enumerate() {
        if !q.is_integral() || !r.is_integral() {
            return false;
        }
        if rems[i] != &field.mul(q, &rems[i + 1]) + r {
            return false;
        }
        if r.is_zero() != (i + 1 == k) {
            return false;
        }
        rems.push(r.clone());
    }
    // rems[j + 1] is r_j; reachable[j]: stages 1..=j split into valid blocks
    let norm = |j: usize| field.norm(&rems[j + 1]).abs();
    let mut reachable = vec![false; k + 1];
    reachable[0] = true;
    for j in 0..k {
        if !reachable[j] {
            continue;
        }
        if norm(j + 1) < norm(j) {
            reachable[j + 1] = true;
        }
        if j + 2 <= k && norm(j + 2) < norm(j) {
            reachable[j + 2] = true;
        }
    }
    if !reachable[k] {
        return false;
    }
    match (eval_cf(field, &chain.quotients()), field.div(alpha, beta)) {
        (Ok(v), Ok(x)) => v == x,
        _ => false,
    }
}

/// `|Nm r2| = |Nm β|·n·|Nm(α/β − q)|` for a two-stage step.
pub fn two_stage_identity(
    field: &QuadField,
    alpha: &FieldElement,
    beta: &FieldElement,
    q1: &FieldElement,
    q2: &FieldElement,
    r2: &FieldElement,
) -> bool {
    let Ok(inv) = field.inv(q2) else { return false };
    let q = q1 + &inv;
    let Ok(x) = field.div(alpha, beta) else { return false };
    let rhs = field.norm(beta).abs() * field.norm(q2).abs() * field.norm(&(&x - &q)).abs();
    field.norm(r2).abs() == rhs
}
