//! Plane geometry under the embedding `x ↦ (v₁(x), v₂(x))`: points,
//! axis-aligned boxes, hyperbolic regions and exact containment.

use std::cmp::Ordering;

use num_traits::{One, Signed};

use crate::arith::{QuadraticReal, Rational};
use crate::error::RingError;
use crate::field::{Embedding, FieldElement, QuadField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point2 {
    pub x: QuadraticReal,
    pub y: QuadraticReal,
}

impl Point2 {
    pub fn new(x: QuadraticReal, y: QuadraticReal) -> Self {
        Point2 { x, y }
    }

    /// The image `(v₁(e), v₂(e))` of a field element.
    pub fn of(field: &QuadField, e: &FieldElement) -> Self {
        Point2::new(field.embed(e, Embedding::First), field.embed(e, Embedding::Second))
    }
}

/// The closed box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x0: QuadraticReal,
    pub x1: QuadraticReal,
    pub y0: QuadraticReal,
    pub y1: QuadraticReal,
}

impl Rect {
    pub fn new(x0: QuadraticReal, x1: QuadraticReal, y0: QuadraticReal, y1: QuadraticReal) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Rect { x0, x1, y0, y1 }
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x0.clone(), self.y0.clone()),
            Point2::new(self.x1.clone(), self.y0.clone()),
            Point2::new(self.x0.clone(), self.y1.clone()),
            Point2::new(self.x1.clone(), self.y1.clone()),
        ]
    }

    /// Quadrants in the order lower-left, lower-right, upper-left,
    /// upper-right; the digits `0..=3` of a leaf path index this order.
    pub fn subdivide(&self) -> [Rect; 4] {
        let half = Rational::new(1.into(), 2.into());
        let xm = (&self.x0 + &self.x1).scale(&half);
        let ym = (&self.y0 + &self.y1).scale(&half);
        [
            Rect::new(self.x0.clone(), xm.clone(), self.y0.clone(), ym.clone()),
            Rect::new(xm.clone(), self.x1.clone(), self.y0.clone(), ym.clone()),
            Rect::new(self.x0.clone(), xm.clone(), ym.clone(), self.y1.clone()),
            Rect::new(xm, self.x1.clone(), ym, self.y1.clone()),
        ]
    }

    /// The sub-box reached by following quadrant digits; `None` on a digit
    /// outside `0..=3`.
    pub fn at_path(&self, path: &str) -> Option<Rect> {
        let mut depth = 0u32;
        let (mut ix, mut iy) = (0u128, 0u128);
        for c in path.bytes() {
            let q = match c {
                b'0'..=b'3' => (c - b'0') as u128,
                _ => return None,
            };
            depth += 1;
            if depth > 126 {
                return None;
            }
            ix = 2 * ix + (q & 1);
            iy = 2 * iy + (q >> 1);
        }
        Some(self.dyadic(depth, ix, iy))
    }

    /// The box `[ix, ix+1] × [iy, iy+1]` of the `2^depth × 2^depth` grid.
    pub fn dyadic(&self, depth: u32, ix: u128, iy: u128) -> Rect {
        let den = Rational::from_integer(num_bigint::BigInt::one() << depth);
        let w = &self.x1 - &self.x0;
        let h = &self.y1 - &self.y0;
        let at = |base: &QuadraticReal, span: &QuadraticReal, i: u128| {
            base + &span.scale(&(Rational::from_integer(i.into()) / &den))
        };
        Rect::new(at(&self.x0, &w, ix), at(&self.x0, &w, ix + 1), at(&self.y0, &h, iy), at(&self.y0, &h, iy + 1))
    }
}

/// `R0 = [0, 1+v₁(ω)] × [v₂(ω), 1]`, which contains the fundamental domain
/// `{a·v(1) + b·v(ω) : a, b ∈ [0,1)}`.
pub fn fundamental_box(field: &QuadField) -> Rect {
    let m = field.m();
    let one = Rational::one();
    Rect::new(
        QuadraticReal::zero(m),
        field.omega_embedding(Embedding::First).add_rational(&one),
        field.omega_embedding(Embedding::Second),
        QuadraticReal::from_rational(one, m),
    )
}

/// The open set `{|Nm(x − q)| < 1/n}` with `q = q1_base + 1/q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub center: FieldElement,
    pub q2: FieldElement,
    pub n: u64,
    pub q1_base: FieldElement,
    cx: QuadraticReal,
    cy: QuadraticReal,
}

impl Region {
    /// Requires `q2` integral and nonzero and `center − 1/q2` integral.
    pub fn new(field: &QuadField, center: FieldElement, q2: FieldElement) -> Result<Region, RingError> {
        if !q2.is_integral() || q2.is_zero() {
            return Err(RingError::NotIntegralNonzero);
        }
        let q1_base = &center - &field.inv(&q2)?;
        if !q1_base.is_integral() {
            return Err(RingError::NotDivisible);
        }
        let n = u64::try_from(field.norm(&q2).abs().to_integer()).map_err(|_| RingError::NotIntegralNonzero)?;
        let c = Point2::of(field, &center);
        Ok(Region { center, q2, n, q1_base, cx: c.x, cy: c.y })
    }

    pub fn center_point(&self) -> Point2 {
        Point2::new(self.cx.clone(), self.cy.clone())
    }

    /// `|Nm(x − q)| < 1/n` evaluated on a field element, without embeddings.
    pub fn contains_element(&self, field: &QuadField, x: &FieldElement) -> bool {
        let d = field.norm(&(x - &self.center)).abs();
        d * Rational::from_integer(self.n.into()) < Rational::one()
    }
}

/// `|(x − cx)(y − cy)| < 1/n`.
pub fn hyperbola_contains_point(
    cx: &QuadraticReal,
    cy: &QuadraticReal,
    n: u64,
    x: &QuadraticReal,
    y: &QuadraticReal,
) -> bool {
    let prod = &(x - cx) * &(y - cy);
    let r = Rational::new(1.into(), n.into());
    prod.cmp_rational(&r) == Ordering::Less && prod.cmp_rational(&-r) == Ordering::Greater
}

/// All four corners inside implies the whole box inside: along any
/// horizontal or vertical segment `|(x−X)(y−Y)|` is maximized at an end.
pub fn hyperbola_contains_box(cx: &QuadraticReal, cy: &QuadraticReal, n: u64, r: &Rect) -> bool {
    [(&r.x0, &r.y0), (&r.x1, &r.y0), (&r.x0, &r.y1), (&r.x1, &r.y1)]
        .into_iter()
        .all(|(x, y)| hyperbola_contains_point(cx, cy, n, x, y))
}

pub fn region_contains_point(v: &Region, p: &Point2) -> bool {
    hyperbola_contains_point(&v.cx, &v.cy, v.n, &p.x, &p.y)
}

pub fn region_contains_box(v: &Region, r: &Rect) -> bool {
    hyperbola_contains_box(&v.cx, &v.cy, v.n, r)
}
