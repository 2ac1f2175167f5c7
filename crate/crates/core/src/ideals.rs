//! Ideals of `O_F`: generators via the cycle of reduced principal ideals,
//! canonical associates, bounded-norm enumeration, splitting of primes and
//! the class-number-one test.
//!
//! A primitive ideal is stored as `[a, (b+√D)/2]` with `D` the
//! discriminant, `b ≡ D mod 2` and `b² ≡ D mod 4a`. The reduction operator
//! `ρ` maps it to `(γ̄/a)·I` with `γ = (b+√D)/2`, so a generator of either
//! ideal gives a generator of the other. Walking the principal cycle once
//! from `(1)` records a generator for every reduced principal ideal; any
//! other ideal is reduced and looked up.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Signed;

use crate::arith::Rational;
use crate::error::RingError;
use crate::field::{Embedding, FieldElement, QuadField};

/// A principal ideal with its canonical generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealGen {
    pub generator: FieldElement,
    pub norm: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Inert,
    Split,
    Ramified,
}

/// Primitive ideal `[a, (b+√D)/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Primitive {
    a: i128,
    b: i128,
}

impl Primitive {
    fn key(self) -> (i128, i128) {
        (self.a, self.b.rem_euclid(2 * self.a))
    }
}

/// Generators of the reduced ideals in the principal cycle.
#[derive(Debug)]
pub(crate) struct PrincipalCycle {
    disc: i128,
    sqrt_floor: i128,
    generators: HashMap<(i128, i128), FieldElement>,
}

impl PrincipalCycle {
    pub(crate) fn build(field: &QuadField) -> PrincipalCycle {
        let disc = field.disc() as i128;
        let mut cycle = PrincipalCycle { disc, sqrt_floor: disc.sqrt(), generators: HashMap::new() };
        let mut ideal = Primitive { a: 1, b: field.omega_trace() as i128 };
        let mut gen = FieldElement::one();
        while !cycle.is_reduced(ideal) {
            (ideal, gen) = cycle.rho_forward(field, ideal, &gen);
        }
        let start = ideal.key();
        loop {
            cycle.generators.insert(ideal.key(), gen.clone());
            (ideal, gen) = cycle.rho_forward(field, ideal, &gen);
            if ideal.key() == start {
                break;
            }
        }
        cycle
    }

    pub(crate) fn len(&self) -> usize {
        self.generators.len()
    }

    fn is_reduced(&self, i: Primitive) -> bool {
        let d = self.disc;
        let (a, b) = (i.a, i.b);
        b > 0 && b * b < d && (2 * a + b) * (2 * a + b) > d && (2 * a - b <= 0 || (2 * a - b) * (2 * a - b) < d)
    }

    /// `γ = (b + √D)/2` in the basis `{1, ω}`.
    fn gamma(&self, field: &QuadField, b: i128) -> FieldElement {
        let a = (b - field.omega_trace() as i128) / 2;
        FieldElement::from_bigints(BigInt::from(a), BigInt::from(1))
    }

    /// One reduction step; returns the next ideal and `c = (b² − D)/4a`.
    fn rho(&self, i: Primitive) -> (Primitive, i128) {
        let c = (i.b * i.b - self.disc) / (4 * i.a);
        let a = c.abs();
        let r = (-i.b).rem_euclid(2 * a);
        let b = if a > self.sqrt_floor {
            // representative in (−a, a]
            if r > a {
                r - 2 * a
            } else {
                r
            }
        } else {
            // largest representative below √D
            let top = self.sqrt_floor;
            top - (top - r).rem_euclid(2 * a)
        };
        (Primitive { a, b }, c)
    }

    /// `ρ` carrying a generator of `I` to a generator of `ρ(I) = (γ̄/a)·I`.
    fn rho_forward(&self, field: &QuadField, i: Primitive, gen: &FieldElement) -> (Primitive, FieldElement) {
        let gamma_bar = field.conj(&self.gamma(field, i.b));
        let (next, _) = self.rho(i);
        let scaled = field.mul(gen, &gamma_bar).scale(&Rational::new(1.into(), i.a.into()));
        (next, scaled)
    }

    /// A generator of the primitive ideal, or `None` if it is not principal.
    fn generator(&self, field: &QuadField, start: Primitive) -> Option<FieldElement> {
        // I = ν·ρᵏ(I) where ν accumulates γ/c.
        let mut ideal = start;
        let mut nu = FieldElement::one();
        let mut steps_after_reduced = 0usize;
        loop {
            if self.is_reduced(ideal) {
                if let Some(g) = self.generators.get(&ideal.key()) {
                    return Some(field.mul(g, &nu));
                }
                // Reduced ideals of one class form a single ρ-cycle.
                steps_after_reduced += 1;
                if steps_after_reduced > self.len() + 1 {
                    return None;
                }
            }
            let gamma = self.gamma(field, ideal.b);
            let (next, c) = self.rho(ideal);
            nu = field.mul(&nu, &gamma).scale(&Rational::new(1.into(), c.into()));
            ideal = next;
        }
    }
}

/// Residues `b mod 2a` of the primitive ideals of norm `a`.
fn primitive_ideals_of_norm(disc: i128, a: i128) -> Vec<Primitive> {
    (0..2 * a)
        .filter(|b| (b - disc).rem_euclid(2) == 0 && (b * b - disc).rem_euclid(4 * a) == 0)
        .map(|b| Primitive { a, b })
        .collect()
}

/// `y = ±εᵏ·x` with `v₁(y) > 0` and `v₁(y)² ∈ [n, n·v₁(ε)²)`, `n = |Nm x|`.
pub fn canonical_associate(field: &QuadField, x: &FieldElement) -> Result<FieldElement, RingError> {
    if !x.is_integral() || x.is_zero() {
        return Err(RingError::NotIntegralNonzero);
    }
    let n = field.norm(x).abs();
    let ln_eps = field.embed(field.fundamental_unit(), Embedding::First).ln_abs();
    let ln_v1 = field.embed(x, Embedding::First).ln_abs();
    let ln_sqrt_n = 0.5 * crate::arith::ln_abs_rational(&n);
    let k = ((ln_v1 - ln_sqrt_n) / ln_eps).floor() as i64;
    let mut y = field.mul(x, &field.unit_pow(-k));
    if field.embed(&y, Embedding::First).sign() == Ordering::Less {
        y = -y;
    }
    let eps1 = field.embed(field.fundamental_unit(), Embedding::First);
    let upper = eps1.square().scale(&n);
    // The float estimate is off by at most one step; settle exactly.
    loop {
        let v1_sq = field.embed(&y, Embedding::First).square();
        if v1_sq.cmp_rational(&n) == Ordering::Less {
            y = field.mul(&y, field.fundamental_unit());
        } else if (&v1_sq - &upper).sign() != Ordering::Less {
            y = field.mul(&y, field.unit_inverse());
        } else {
            return Ok(y);
        }
    }
}

/// A generator of some ideal of norm `n` from its factorization as a
/// rational integer times a primitive ideal.
fn ideal_generator(field: &QuadField, g: i128, p: Primitive) -> Result<FieldElement, RingError> {
    let cycle = field.principal_cycle();
    let gen = cycle.generator(field, p).ok_or(RingError::NotPrincipal { norm: (g * g * p.a) as u64 })?;
    canonical_associate(field, &gen.scale(&Rational::from_integer(g.into())))
}

/// One canonical generator per ideal of norm exactly `n`, sorted by `(a, b)`.
pub fn ideals_of_norm(field: &QuadField, n: u64) -> Result<Vec<IdealGen>, RingError> {
    let disc = field.disc() as i128;
    let n = n as i128;
    let mut out = Vec::new();
    let mut g = 1i128;
    // every ideal is uniquely g·P with P primitive
    while g * g <= n {
        if n % (g * g) == 0 {
            for p in primitive_ideals_of_norm(disc, n / (g * g)) {
                let generator = ideal_generator(field, g, p)?;
                out.push(IdealGen { generator, norm: n as u64 });
            }
        }
        g += 1;
    }
    out.sort_by(|x, y| (&x.generator.a, &x.generator.b).cmp(&(&y.generator.a, &y.generator.b)));
    Ok(out)
}

/// One canonical generator per nonzero ideal of norm at most `bound`,
/// sorted by `(norm, a, b)`.
pub fn ideals_up_to(field: &QuadField, bound: u64) -> Result<Vec<IdealGen>, RingError> {
    let mut out = Vec::new();
    for n in 1..=bound {
        out.extend(ideals_of_norm(field, n)?);
    }
    Ok(out)
}

/// Kronecker symbol `(D | p)` decides how `p` factors.
pub fn splitting_type(field: &QuadField, p: u64) -> SplittingType {
    let disc = field.disc();
    if disc.is_multiple_of(p) {
        return SplittingType::Ramified;
    }
    let residue = if p == 2 {
        disc % 8 == 1
    } else {
        let e = BigInt::from((p - 1) / 2);
        BigInt::from(disc).modpow(&e, &BigInt::from(p)) == BigInt::from(1)
    };
    if residue {
        SplittingType::Split
    } else {
        SplittingType::Inert
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Every class contains an ideal of norm below `√D/2`, so the class group
/// is trivial iff all prime ideals of norm `p` with `4p² ≤ D` are principal.
pub fn class_number_is_one(field: &QuadField) -> bool {
    let disc = field.disc() as i128;
    let cycle = field.principal_cycle();
    (2u64..)
        .take_while(|p| 4 * (*p as i128) * (*p as i128) <= disc)
        .filter(|p| is_prime(*p))
        .filter(|p| splitting_type(field, *p) != SplittingType::Inert)
        .all(|p| primitive_ideals_of_norm(disc, p as i128).into_iter().all(|i| cycle.generator(field, i).is_some()))
}
