//! Exact arithmetic over `Q` and over real numbers of the form `p + q·√m`.
//!
//! Every geometric predicate in the crate reduces to the sign of such a
//! number, which is decided here with integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ArithError, ParseError};

/// Arbitrary precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses the `p/q` text form. Only the canonical spelling is accepted
/// (reduced, positive denominator, no `/1`, no leading `+`), so that
/// `format_rational(parse_rational(s)) == s` for every accepted `s`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::Rational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num).ok_or_else(bad)?;
    let den = match den {
        Some(d) => {
            if d.starts_with('-') {
                return Err(bad());
            }
            parse_int(d).ok_or_else(bad)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    let r = Rational::new(num.clone(), den.clone());
    if *r.numer() != num || *r.denom() != den || (r.is_integer() && s.contains('/')) {
        return Err(bad());
    }
    Ok(r)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s.starts_with('-') && digits == "0" {
        return None;
    }
    s.parse().ok()
}

/// Floor of a rational as an integer.
pub fn floor_rational(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Nearest integer, ties broken toward zero.
pub fn round_half_toward_zero(r: &Rational) -> BigInt {
    let two = BigInt::from(2);
    // floor((2n + d) / 2d) rounds half up; fix the positive tie afterwards.
    let n = r.numer();
    let d = r.denom();
    let up = (n * &two + d).div_floor(&(d * &two));
    let is_tie = (n * &two).mod_floor(&(d * &two)) == *d;
    if is_tie && r.is_positive() {
        up - 1
    } else {
        up
    }
}

/// Lossy conversion used only for diagnostics and float prefilters.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `ln|x|` for integers of any size.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::NAN).abs().ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln|r|`, finite for any nonzero rational regardless of size.
pub fn ln_abs_rational(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// The real number `p + q·√m` for a fixed squarefree radicand `m ≥ 2`.
///
/// Equality is structural: since `√m` is irrational, `(p, q)` determines
/// the value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticReal {
    p: Rational,
    q: Rational,
    m: u64,
}

/// Operation selector for [`qr_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// `a (op) b` with a radicand check. For `Neg`, `b` is ignored apart from the check.
pub fn qr_arith(a: &QuadraticReal, b: &QuadraticReal, op: QrOp) -> Result<QuadraticReal, ArithError> {
    match op {
        QrOp::Add => a.try_add(b),
        QrOp::Sub => a.try_sub(b),
        QrOp::Mul => a.try_mul(b),
        QrOp::Neg => {
            a.check(b)?;
            Ok(-a)
        }
    }
}

impl QuadraticReal {
    pub fn new(p: Rational, q: Rational, m: u64) -> Self {
        debug_assert!(m >= 2);
        QuadraticReal { p, q, m }
    }

    pub fn from_rational(p: Rational, m: u64) -> Self {
        QuadraticReal::new(p, Rational::zero(), m)
    }

    pub fn zero(m: u64) -> Self {
        QuadraticReal::from_rational(Rational::zero(), m)
    }

    /// `√m` itself.
    pub fn sqrt_radicand(m: u64) -> Self {
        QuadraticReal::new(Rational::zero(), Rational::one(), m)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(ArithError::RadicandMismatch(self.m, other.m))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(QuadraticReal::new(&self.p + &other.p, &self.q + &other.q, self.m))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(QuadraticReal::new(&self.p - &other.p, &self.q - &other.q, self.m))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        let m = Rational::from_integer(BigInt::from(self.m));
        let p = &self.p * &other.p + &self.q * &other.q * m;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(QuadraticReal::new(p, q, self.m))
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ArithError> {
        Ok(self.try_sub(other)?.sign())
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, k: &Rational) -> Self {
        QuadraticReal::new(&self.p * k, &self.q * k, self.m)
    }

    pub fn add_rational(&self, k: &Rational) -> Self {
        QuadraticReal::new(&self.p + k, self.q.clone(), self.m)
    }

    /// The Galois conjugate `p − q·√m`.
    pub fn conjugate(&self) -> Self {
        QuadraticReal::new(self.p.clone(), -&self.q, self.m)
    }

    /// `p² − m·q²`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - &self.q * &self.q * Rational::from_integer(BigInt::from(self.m))
    }

    /// Exact sign, returned as the ordering of `self` relative to zero.
    pub fn sign(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Mixed signs: the part with the larger square dominates.
            (sp, _) => {
                let p2 = &self.p * &self.p;
                let mq2 = &self.q * &self.q * Rational::from_integer(BigInt::from(self.m));
                match p2.cmp(&mq2) {
                    Ordering::Greater => sp,
                    Ordering::Less => sp.reverse(),
                    Ordering::Equal => unreachable!("√m is irrational"),
                }
            }
        }
    }

    pub fn signum(&self) -> i32 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self.try_mul(self).expect("same radicand")
    }

    /// `sign(self − k)` for a rational `k`.
    pub fn cmp_rational(&self, k: &Rational) -> Ordering {
        QuadraticReal::new(&self.p - k, self.q.clone(), self.m).sign()
    }

    /// Exact floor, via an integer square root of `q²·m`.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return floor_rational(&self.p);
        }
        // self = (P + Q·√m) / D with integers P, Q and D > 0.
        let d = self.p.denom().lcm(self.q.denom());
        let big_p = self.p.numer() * (&d / self.p.denom());
        let big_q = self.q.numer() * (&d / self.q.denom());
        let t = num_integer::Roots::sqrt(&(&big_q * &big_q * BigInt::from(self.m)));
        // Q·√m lies strictly inside (lo, lo + 1).
        let lo = if big_q.is_positive() { t } else { -t - 1 };
        let candidate: BigInt = Integer::div_floor(&(&big_p + &lo + 1), &d);
        if self.cmp_rational(&Rational::from_integer(candidate.clone())) == Ordering::Less {
            candidate - 1
        } else {
            candidate
        }
    }

    /// `ln|self|`, usable when the value overflows `f64`.
    pub fn ln_abs(&self) -> f64 {
        let lp = ln_abs_rational(&self.p);
        let lq = ln_abs_rational(&self.q) + 0.5 * (self.m as f64).ln();
        if self.p.is_zero() || self.q.is_zero() || self.p.is_positive() == self.q.is_positive() {
            return ln_add_exp(lp, lq);
        }
        // |p + q√m| = |p² − mq²| / |p − q√m|, and the latter has no cancellation.
        ln_abs_rational(&self.norm()) - ln_add_exp(lp, lq)
    }

    pub fn to_f64(&self) -> f64 {
        let r = (self.m as f64).sqrt();
        let p = rational_to_f64(&self.p);
        let q = rational_to_f64(&self.q);
        if p.signum() == q.signum() || p == 0.0 || q == 0.0 {
            return p + q * r;
        }
        // Cancellation: recover the small value from the conjugate.
        let conj = p - q * r;
        let n = rational_to_f64(&self.norm());
        if conj != 0.0 && conj.is_finite() && (p + q * r).abs() < conj.abs() {
            n / conj
        } else {
            p + q * r
        }
    }
}

impl PartialOrd for QuadraticReal {
    /// Values with different radicands are incomparable.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl Neg for &QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        QuadraticReal::new(-&self.p, -&self.q, self.m)
    }
}

impl Neg for QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        -&self
    }
}

// The operator forms panic on mismatched radicands; use the `try_` methods
// where the inputs are not known to share a field.
macro_rules! qr_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticReal> for &QuadraticReal {
            type Output = QuadraticReal;
            fn $method(self, rhs: &QuadraticReal) -> QuadraticReal {
                self.$try(rhs).expect("radicand mismatch")
            }
        }
        impl $trait<QuadraticReal> for QuadraticReal {
            type Output = QuadraticReal;
            fn $method(self, rhs: QuadraticReal) -> QuadraticReal {
                (&self).$method(&rhs)
            }
        }
    };
}

qr_binop!(Add, add, try_add);
qr_binop!(Sub, sub, try_sub);
qr_binop!(Mul, mul, try_mul);

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.p, self.q, self.m)
    }
}
