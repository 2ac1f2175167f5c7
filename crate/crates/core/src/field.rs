//! The real quadratic field `Q(√m)`, elements in the basis `{1, ω}`, and the
//! fundamental unit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, parse_rational, rational_to_f64, QuadraticReal, Rational};
use crate::error::{FieldError, ParseError, RingError};
use crate::ideals::PrincipalCycle;

/// `ω = (1+√m)/2` when `m ≡ 1 mod 4`, otherwise `ω = √m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    Half,
    Plain,
}

/// One of the two real embeddings; `First` sends `√m` to the positive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    First,
    Second,
}

/// The element `a + b·ω` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FieldElement {
    pub a: Rational,
    pub b: Rational,
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FieldElement::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn from_bigints(a: BigInt, b: BigInt) -> Self {
        FieldElement::new(Rational::from_integer(a), Rational::from_integer(b))
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldElement::new(a, Rational::zero())
    }

    pub fn zero() -> Self {
        FieldElement::from_ints(0, 0)
    }

    pub fn one() -> Self {
        FieldElement::from_ints(1, 0)
    }

    pub fn omega() -> Self {
        FieldElement::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Membership in `O_F = Z + Zω`.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        FieldElement::new(&self.a * k, &self.b * k)
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-&self.a, -&self.b)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Text form `a/b,c/d` meaning `(a/b) + (c/d)·ω`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.a), format_rational(&self.b))
    }
}

impl FromStr for FieldElement {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::FieldElement(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let a = parse_rational(a).map_err(|_| bad())?;
        let b = parse_rational(b).map_err(|_| bad())?;
        Ok(FieldElement::new(a, b))
    }
}

/// Result of [`QuadField::fe_arith`]: norm and trace are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeValue {
    Element(FieldElement),
    Rational(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeOp {
    Add,
    Sub,
    Mul,
    Conj,
    Norm,
    Trace,
}

pub fn is_squarefree(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= m {
        if m.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn discriminant(m: u64) -> u64 {
    if m % 4 == 1 {
        m
    } else {
        4 * m
    }
}

/// `Q(√m)` with its ring of integers `Z + Zω` and fundamental unit.
pub struct QuadField {
    m: u64,
    disc: u64,
    kind: OmegaKind,
    unit: FieldElement,
    unit_inv: FieldElement,
    unit_norm: i32,
    cycle: OnceLock<PrincipalCycle>,
}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadField")
            .field("m", &self.m)
            .field("disc", &self.disc)
            .field("unit", &self.unit.to_string())
            .finish()
    }
}

impl QuadField {
    pub fn new(m: u64) -> Result<QuadField, FieldError> {
        if !is_squarefree(m) {
            return Err(FieldError::BadRadicand(m));
        }
        let kind = if m % 4 == 1 { OmegaKind::Half } else { OmegaKind::Plain };
        let mut field = QuadField {
            m,
            disc: discriminant(m),
            kind,
            unit: FieldElement::one(),
            unit_inv: FieldElement::one(),
            unit_norm: 1,
            cycle: OnceLock::new(),
        };
        let unit = fundamental_unit(m)?;
        let norm = field.norm(&unit);
        field.unit_norm = if norm.is_positive() { 1 } else { -1 };
        field.unit_inv = field.conj(&unit).scale(&norm);
        field.unit = unit;
        Ok(field)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    /// `Tr(ω)`: 1 for the half case, 0 otherwise.
    pub fn omega_trace(&self) -> i64 {
        match self.kind {
            OmegaKind::Half => 1,
            OmegaKind::Plain => 0,
        }
    }

    /// `Nm(ω)`: `(1−m)/4` or `−m`.
    pub fn omega_norm(&self) -> i64 {
        match self.kind {
            OmegaKind::Half => (1 - self.m as i64) / 4,
            OmegaKind::Plain => -(self.m as i64),
        }
    }

    pub fn fundamental_unit(&self) -> &FieldElement {
        &self.unit
    }

    pub fn unit_inverse(&self) -> &FieldElement {
        &self.unit_inv
    }

    pub fn unit_norm(&self) -> i32 {
        self.unit_norm
    }

    pub(crate) fn principal_cycle(&self) -> &PrincipalCycle {
        self.cycle.get_or_init(|| PrincipalCycle::build(self))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        // ω² = Tr(ω)·ω − Nm(ω)
        let tr = Rational::from_integer(self.omega_trace().into());
        let nw = Rational::from_integer(self.omega_norm().into());
        let bd = &x.b * &y.b;
        let a = &x.a * &y.a - &bd * nw;
        let b = &x.a * &y.b + &x.b * &y.a + bd * tr;
        FieldElement::new(a, b)
    }

    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        let tr = Rational::from_integer(self.omega_trace().into());
        FieldElement::new(&x.a + &x.b * tr, -&x.b)
    }

    pub fn norm(&self, x: &FieldElement) -> Rational {
        let tr = Rational::from_integer(self.omega_trace().into());
        let nw = Rational::from_integer(self.omega_norm().into());
        &x.a * &x.a + &x.a * &x.b * tr + &x.b * &x.b * nw
    }

    pub fn trace(&self, x: &FieldElement) -> Rational {
        let tr = Rational::from_integer(self.omega_trace().into());
        &x.a * Rational::from_integer(2.into()) + &x.b * tr
    }

    /// Norm of an integral element as an integer.
    pub fn norm_int(&self, x: &FieldElement) -> BigInt {
        let n = self.norm(x);
        debug_assert!(n.is_integer());
        n.to_integer()
    }

    pub fn fe_arith(&self, x: &FieldElement, y: &FieldElement, op: FeOp) -> FeValue {
        match op {
            FeOp::Add => FeValue::Element(x + y),
            FeOp::Sub => FeValue::Element(x - y),
            FeOp::Mul => FeValue::Element(self.mul(x, y)),
            FeOp::Conj => FeValue::Element(self.conj(x)),
            FeOp::Norm => FeValue::Rational(self.norm(x)),
            FeOp::Trace => FeValue::Rational(self.trace(x)),
        }
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, RingError> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(self.conj(x).scale(&n.recip()))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, RingError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// `x / y` when the quotient lies in `O_F`.
    pub fn exact_divide(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, RingError> {
        let q = self.div(x, y)?;
        if q.is_integral() {
            Ok(q)
        } else {
            Err(RingError::NotDivisible)
        }
    }

    /// `ε^k` for any integer `k`.
    pub fn unit_pow(&self, k: i64) -> FieldElement {
        let base = if k >= 0 { &self.unit } else { &self.unit_inv };
        self.pow(base, k.unsigned_abs())
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::one();
        let mut sq = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// The image of `ω` under an embedding.
    pub fn omega_embedding(&self, which: Embedding) -> QuadraticReal {
        let sign = match which {
            Embedding::First => Rational::one(),
            Embedding::Second => -Rational::one(),
        };
        match self.kind {
            OmegaKind::Half => {
                let half = Rational::new(1.into(), 2.into());
                QuadraticReal::new(half.clone(), half * sign, self.m)
            }
            OmegaKind::Plain => QuadraticReal::new(Rational::zero(), sign, self.m),
        }
    }

    pub fn embed(&self, x: &FieldElement, which: Embedding) -> QuadraticReal {
        self.omega_embedding(which).scale(&x.b).add_rational(&x.a)
    }

    /// Float images of `ω` under both embeddings.
    pub fn omega_f64(&self) -> (f64, f64) {
        let r = (self.m as f64).sqrt();
        match self.kind {
            OmegaKind::Half => ((1.0 + r) / 2.0, (1.0 - r) / 2.0),
            OmegaKind::Plain => (r, -r),
        }
    }

    pub fn embed_f64(&self, x: &FieldElement) -> (f64, f64) {
        (self.embed(x, Embedding::First).to_f64(), self.embed(x, Embedding::Second).to_f64())
    }

    /// `x` is a unit of `O_F`.
    pub fn is_unit(&self, x: &FieldElement) -> bool {
        x.is_integral() && self.norm(x).abs().is_one()
    }

    pub fn cmp_embedded(&self, x: &FieldElement, y: &FieldElement, which: Embedding) -> Ordering {
        self.embed(&(x - y), which).sign()
    }
}

/// Regular continued fraction of `(P + √D)/Q` with `Q | D − P²`, as an
/// iterator over partial quotients.
#[derive(Clone, Debug)]
pub struct QuadraticIrrationalCf {
    p: i128,
    q: i128,
    d: i128,
    s: i128,
}

impl QuadraticIrrationalCf {
    pub fn new(p: i128, q: i128, d: i128) -> Self {
        assert!(q != 0 && (d - p * p) % q == 0, "Q must divide D - P^2");
        let s = num_integer::Roots::sqrt(&d);
        assert!(s * s != d, "D must not be a square");
        QuadraticIrrationalCf { p, q, d, s }
    }
}

impl Iterator for QuadraticIrrationalCf {
    type Item = i128;

    fn next(&mut self) -> Option<i128> {
        // floor((P + √D)/Q); √D is irrational so floor(√D) can stand in for it.
        let a = if self.q > 0 {
            Integer::div_floor(&(self.p + self.s), &self.q)
        } else {
            -Integer::div_floor(&(self.p + self.s), &-self.q) - 1
        };
        let p_next = a * self.q - self.p;
        self.q = (self.d - p_next * p_next) / self.q;
        self.p = p_next;
        Some(a)
    }
}

/// Smallest unit `ε > 1` of `O_F`, read off the convergents of `ω`.
///
/// A unit `ε = x + yω` has `|v₂(ε)| = 1/ε`, which makes `(x + y·Tr ω)/y` a
/// convergent of `v₁(ω)`; the first convergent of norm `±1` is `ε`.
pub fn fundamental_unit(m: u64) -> Result<FieldElement, FieldError> {
    if !is_squarefree(m) {
        return Err(FieldError::BadRadicand(m));
    }
    let (p0, q0, tr, nw): (i128, i128, i64, i64) =
        if m % 4 == 1 { (1, 2, 1, (1 - m as i64) / 4) } else { (0, 1, 0, -(m as i64)) };
    let cf = QuadraticIrrationalCf::new(p0, q0, m as i128);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    for a in cf {
        let a = BigInt::from(a);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        // element (h − k·Tr ω) + k·ω, whose second embedding is h − k·v₁(ω)
        let x = &h - &k * BigInt::from(tr);
        let y = k.clone();
        let norm = &x * &x + &x * &y * BigInt::from(tr) + &y * &y * BigInt::from(nw);
        if norm.abs().is_one() {
            return Ok(FieldElement::from_bigints(x, y));
        }
    }
    unreachable!("the continued fraction of ω is infinite")
}

/// Float value of an embedding, for diagnostics.
pub fn approx(field: &QuadField, x: &FieldElement) -> (f64, f64) {
    let (w1, w2) = field.omega_f64();
    let a = rational_to_f64(&x.a);
    let b = rational_to_f64(&x.b);
    (a + b * w1, a + b * w2)
}
