//! Region centers and the recursive covering search.
//!
//! A center `q = [q1, q2]` lies in `1/q2 + O_F`, so the regions of
//! denominator norm `n` are the integer translates of finitely many classes
//! in `(1/n)O_F / O_F`: for each ideal `(α)` of norm `n`, the classes of
//! `±ε^{-k}/α`. The search works on dyadic sub-boxes of `R0` and, for each
//! box, looks up the first region in pool order that contains it. The pool
//! at depth `d` is every translate with `n ≤ N(d)` and `|b| < T(d)` whose
//! strips meet `R0`; it is never materialized, candidates are located per
//! box with a float prefilter and confirmed exactly.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{QuadraticReal, Rational};
use crate::certificate::{CertLeaf, CertRegion, Certificate};
use crate::error::{ProveError, RingError};
use crate::field::{Embedding, FieldElement, QuadField};
use crate::geometry::{fundamental_box, hyperbola_contains_box, Rect, Region};
use crate::ideals::{class_number_is_one, ideals_of_norm, IdealGen};

/// Growth of the pool with recursion depth:
/// `N(d) = ⌊N0·(1 + d·cN)⌋` and `T(d) = T0 + ⌊d/2⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub t0: u32,
    pub n0: u64,
    pub cn: f64,
    pub max_depth: u32,
    /// Total boxes examined before giving up.
    pub box_budget: u64,
    pub skip_class_check: bool,
    /// Search the four quadrants of shallow boxes on the rayon pool.
    pub parallel: bool,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            t0: 5,
            n0: 40,
            cn: 1.0,
            max_depth: 64,
            box_budget: 20_000_000,
            skip_class_check: false,
            parallel: true,
        }
    }
}

pub const MAX_DEPTH_LIMIT: u32 = 120;

impl Schedule {
    /// Only unit-norm denominators at every depth.
    pub fn norm_one() -> Self {
        Schedule { n0: 1, cn: 0.0, ..Schedule::default() }
    }

    pub fn validate(&self) -> Result<(), ProveError> {
        let bad = |s: &str| Err(ProveError::BadSchedule(s.to_string()));
        if self.t0 == 0 {
            return bad("t0 must be positive");
        }
        if self.n0 == 0 {
            return bad("n0 must be positive");
        }
        if !(self.cn.is_finite() && self.cn >= 0.0) {
            return bad("cN must be a finite nonnegative number");
        }
        if self.max_depth > MAX_DEPTH_LIMIT {
            return bad("depth cap must be at most 120");
        }
        Ok(())
    }

    /// `(T, N)` in force at a given depth.
    pub fn at_depth(&self, depth: u32) -> (u32, u64) {
        let t = self.t0 + depth / 2;
        let n = (self.n0 as f64 * (1.0 + depth as f64 * self.cn)).floor() as u64;
        (t, n.max(self.n0))
    }
}

/// Pool parameters when moving to `new_depth`.
pub fn schedule_step(schedule: &Schedule, new_depth: u32) -> (u32, u64) {
    schedule.at_depth(new_depth)
}

/// A class of `F/O_F` of the form `1/q2 + O_F`, with `n = |Nm q2|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterClass {
    pub a_mod1: Rational,
    pub b_mod1: Rational,
    pub n: u64,
    pub q2: FieldElement,
}

impl CenterClass {
    pub fn element(&self) -> FieldElement {
        FieldElement::new(self.a_mod1.clone(), self.b_mod1.clone())
    }
}

/// Compact class record: the class is `(a + bω)/n`, its witness
/// `sign·ε^k·α` with `α` the ideal generator at index `alpha`.
#[derive(Clone, Debug)]
struct Class {
    a: u64,
    b: u64,
    n: u64,
    alpha: usize,
    negative: bool,
    k: i64,
    af: f64,
    bf: f64,
}

impl Class {
    fn a_mod1(&self) -> Rational {
        Rational::new(self.a.into(), self.n.into())
    }

    fn b_mod1(&self) -> Rational {
        Rational::new(self.b.into(), self.n.into())
    }

    fn witness(&self, field: &QuadField, ideals: &[IdealGen]) -> FieldElement {
        let q2 = field.mul(&field.unit_pow(self.k), &ideals[self.alpha].generator);
        if self.negative {
            -q2
        } else {
            q2
        }
    }
}

fn int_mod(x: &Rational, n: u64) -> i128 {
    debug_assert!(x.is_integer());
    x.to_integer().mod_floor(&BigInt::from(n)).to_i128().expect("residue fits")
}

/// Classes of `±ε^{-k}/α` modulo `O_F` for one ideal generator.
///
/// Multiplication by `ε^{-1}` permutes the finite group `(1/n)O_F/O_F`, so
/// the orbit of `1/α` is purely periodic. The class reached after `j`
/// steps is also reached after `j − P` steps for the period `P`; the
/// witness keeps whichever exponent is smaller in absolute value.
fn orbit_classes(field: &QuadField, alpha: &IdealGen, alpha_idx: usize) -> Vec<Class> {
    let n = alpha.norm;
    let ni = n as i128;
    let tr = field.omega_trace() as i128;
    let nw = (field.omega_norm() as i128).rem_euclid(ni);
    let inv = field.unit_inverse();
    let (ea, eb) = (int_mod(&inv.a, n), int_mod(&inv.b, n));
    // 1/α = sgn·conj(α)/n
    let conj = field.conj(&alpha.generator);
    let sgn = if field.norm(&alpha.generator).is_positive() { 1 } else { -1 };
    let start = ((sgn * int_mod(&conj.a, n)).rem_euclid(ni), (sgn * int_mod(&conj.b, n)).rem_euclid(ni));
    let mut orbit = vec![start];
    loop {
        let (a, b) = *orbit.last().unwrap();
        let next = ((a * ea - b * eb % ni * nw).rem_euclid(ni), (a * eb + b * ea + b * eb % ni * tr).rem_euclid(ni));
        if next == start {
            break;
        }
        orbit.push(next);
    }
    let period = orbit.len() as i64;
    // rank: (|k|, k < 0, negative sign), smaller is preferred
    let mut best: HashMap<(i128, i128), (u64, bool, bool, i64)> = HashMap::new();
    for (j, &(a, b)) in orbit.iter().enumerate() {
        let j = j as i64;
        let k = if j <= period - j { j } else { j - period };
        for negative in [false, true] {
            let key = if negative { ((-a).rem_euclid(ni), (-b).rem_euclid(ni)) } else { (a, b) };
            let rank = (k.unsigned_abs(), k < 0, negative, k);
            match best.get(&key) {
                Some(r) if *r <= rank => {}
                _ => {
                    best.insert(key, rank);
                }
            }
        }
    }
    best.into_iter()
        .map(|((a, b), (_, _, negative, k))| Class {
            a: a as u64,
            b: b as u64,
            n,
            alpha: alpha_idx,
            negative,
            k,
            af: a as f64 / n as f64,
            bf: b as f64 / n as f64,
        })
        .collect()
}

/// Classes grouped by norm, grown on demand.
#[derive(Default)]
struct ClassTable {
    ideals: Vec<IdealGen>,
    /// `by_norm[n]` holds the classes of norm `n`, sorted by `(a, b)`.
    by_norm: Vec<Arc<Vec<Class>>>,
}

impl ClassTable {
    fn bound(&self) -> u64 {
        self.by_norm.len().saturating_sub(1) as u64
    }

    fn extend_to(&mut self, field: &QuadField, bound: u64) -> Result<(), RingError> {
        if self.by_norm.is_empty() {
            self.by_norm.push(Arc::new(Vec::new()));
        }
        for n in self.bound() + 1..=bound {
            let mut classes = Vec::new();
            for ideal in ideals_of_norm(field, n)? {
                self.ideals.push(ideal);
                let idx = self.ideals.len() - 1;
                classes.extend(orbit_classes(field, &self.ideals[idx], idx));
            }
            classes.sort_by_key(|c| (c.a, c.b));
            self.by_norm.push(Arc::new(classes));
        }
        Ok(())
    }
}

/// All classes `1/q2 + O_F` with `|Nm q2| ≤ bound`, sorted by
/// `(n, a_mod1, b_mod1)`, each with a witness `q2 = ±ε^k·α`.
pub fn compute_qn(field: &QuadField, bound: u64) -> Result<Vec<CenterClass>, RingError> {
    let mut table = ClassTable::default();
    table.extend_to(field, bound)?;
    let mut out = Vec::new();
    for group in &table.by_norm {
        for c in group.iter() {
            out.push(CenterClass {
                a_mod1: c.a_mod1(),
                b_mod1: c.b_mod1(),
                n: c.n,
                q2: c.witness(field, &table.ideals),
            });
        }
    }
    Ok(out)
}

/// Least `k/64` with `(k/64)² ≥ 1/n`, a rational bound on the strip
/// half-width `n^{-1/2}`.
pub fn strip_half_width(n: u64) -> Rational {
    let mut k = (64.0 / (n as f64).sqrt()).floor().max(1.0) as u64 - 1;
    while k * k * n < 4096 {
        k += 1;
    }
    Rational::new(k.into(), 64.into())
}

/// Smallest integer strictly above `x`.
fn int_above(x: &QuadraticReal) -> BigInt {
    x.floor() + 1
}

/// Largest integer strictly below `x`.
fn int_below(x: &QuadraticReal) -> BigInt {
    -(-x).floor() - 1
}

/// The pool `Q_{T,N}`: every translate `class + d + tω` of a class with
/// `n ≤ N` and `|b_mod1 + t| < T` whose x-strip or y-strip meets `r0`,
/// ordered by `(n, |t|, t, d, class index)`.
pub fn expand_translates(
    field: &QuadField,
    classes: &[CenterClass],
    t_bound: u32,
    n_bound: u64,
    r0: &Rect,
) -> Result<Vec<Region>, RingError> {
    let w1 = field.omega_embedding(Embedding::First);
    let w2 = field.omega_embedding(Embedding::Second);
    let tb = t_bound as i64;
    let mut keyed = Vec::new();
    for (idx, class) in classes.iter().enumerate().filter(|(_, c)| c.n <= n_bound) {
        let u = strip_half_width(class.n);
        let t_min = if class.b_mod1.is_zero() { -tb + 1 } else { -tb };
        for t in t_min..tb {
            let b = &class.b_mod1 + Rational::from_integer(t.into());
            // X = a_mod1 + d + b·v₁(ω) ∈ (x0 − u, x1 + u), likewise Y.
            let x_shift = w1.scale(&b).add_rational(&class.a_mod1);
            let y_shift = w2.scale(&b).add_rational(&class.a_mod1);
            let ranges = [
                (int_above(&(&r0.x0 - &x_shift).add_rational(&-&u)), int_below(&(&r0.x1 - &x_shift).add_rational(&u))),
                (int_above(&(&r0.y0 - &y_shift).add_rational(&-&u)), int_below(&(&r0.y1 - &y_shift).add_rational(&u))),
            ];
            let mut ds: Vec<BigInt> = Vec::new();
            for (lo, hi) in ranges {
                let mut d = lo;
                while d <= hi {
                    ds.push(d.clone());
                    d += 1;
                }
            }
            ds.sort();
            ds.dedup();
            for d in ds {
                let key = (class.n, t.unsigned_abs(), t, d.clone(), idx);
                let center = FieldElement::new(&class.a_mod1 + Rational::from_integer(d), b.clone());
                keyed.push((key, center, class.q2.clone()));
            }
        }
    }
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    keyed.into_iter().map(|(_, center, q2)| Region::new(field, center, q2)).collect()
}

/// A pool member located for a box: class `class` of norm `n`, translated
/// by `d + tω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Hit {
    n: u64,
    class: usize,
    t: i64,
    d: i64,
}

/// Float image of the dyadic grid on `R0`.
#[derive(Clone, Copy, Debug)]
struct Grid {
    width: f64,
    height: f64,
    y0: f64,
    w1: f64,
    w2: f64,
    /// `v₁(ω) − v₂(ω)`
    spread: f64,
}

/// Mutable state of one covering search.
pub struct SearchState<'a> {
    field: &'a QuadField,
    schedule: Schedule,
    r0: Rect,
    grid: Grid,
    table: RwLock<ClassTable>,
    boxes: AtomicU64,
    abort: AtomicBool,
    failure: Mutex<Option<ProveError>>,
}

type Leaves = Vec<(String, Hit)>;

impl<'a> SearchState<'a> {
    pub fn new(field: &'a QuadField, schedule: Schedule) -> Self {
        let (w1, w2) = field.omega_f64();
        SearchState {
            field,
            schedule,
            r0: fundamental_box(field),
            grid: Grid { width: 1.0 + w1, height: 1.0 - w2, y0: w2, w1, w2, spread: w1 - w2 },
            table: RwLock::new(ClassTable::default()),
            boxes: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            failure: Mutex::new(None),
        }
    }

    /// Boxes examined so far.
    pub fn boxes_examined(&self) -> u64 {
        self.boxes.load(AtomicOrdering::Relaxed)
    }

    fn ensure_classes(&self, bound: u64) -> Result<(), RingError> {
        if self.table.read().unwrap().bound() >= bound {
            return Ok(());
        }
        let mut table = self.table.write().unwrap();
        table.extend_to(self.field, bound)
    }

    /// First pool member, in pool order, containing the dyadic box.
    fn find_region(&self, depth: u32, ix: u128, iy: u128) -> Result<Option<Hit>, ProveError> {
        let (t_bound, n_bound) = self.schedule.at_depth(depth);
        self.ensure_classes(n_bound)?;
        let table = self.table.read().unwrap();
        let g = self.grid;
        let scale = 0.5f64.powi(depth as i32);
        let hx = g.width * scale / 2.0;
        let hy = g.height * scale / 2.0;
        let cx = g.width * scale * (ix as f64 + 0.5);
        let cy = g.y0 + g.height * scale * (iy as f64 + 0.5);
        let tb = t_bound as i64;
        let slack = 1e-7;
        let mut rect: Option<Rect> = None;
        let mut candidates: Vec<((u64, i64, i64, usize), Hit)> = Vec::new();
        for n in 1..=n_bound {
            let c = 1.0 / n as f64;
            // every corner product is at least hx·hy
            if hx * hy >= c * (1.0 + 1e-9) {
                break;
            }
            let group = &table.by_norm[n as usize];
            if group.is_empty() {
                continue;
            }
            // |u0| + |w0| < reach, where u0 − w0 = (cx − cy) − b·(v₁(ω) − v₂(ω))
            let reach = (c / hy + hy).max(c / hx + hx) - hx - hy + slack;
            let base = cx - cy;
            let root_c = c.sqrt();
            candidates.clear();
            for (idx, class) in group.iter().enumerate() {
                let t_lo = ((base - reach) / g.spread - class.bf).floor() as i64;
                let t_hi = ((base + reach) / g.spread - class.bf).ceil() as i64;
                let t_min = if class.b == 0 { -tb + 1 } else { -tb };
                for t in t_lo.max(t_min)..=t_hi.min(tb - 1) {
                    let b = class.bf + t as f64;
                    let delta = base - b * g.spread;
                    if delta.abs() > reach {
                        continue;
                    }
                    // The smaller of |u0|, |w0| is below √c, and below
                    // c/(|δ|/2 + h) − h' since the larger is at least |δ|/2.
                    let half = delta.abs() / 2.0;
                    let wa = (c / (half + hy) - hx).min(root_c) + slack;
                    let wb = (c / (half + hx) - hy).min(root_c) + slack;
                    let xa = cx - class.af - b * g.w1;
                    let ya = cy - class.af - b * g.w2;
                    let mut ds = [i64::MIN; 6];
                    let mut count = 0;
                    for (centre, w) in [(xa, wa), (ya, wb)] {
                        if w <= 0.0 {
                            continue;
                        }
                        let mut d = (centre - w).ceil() as i64;
                        while (d as f64) <= centre + w && count < ds.len() {
                            ds[count] = d;
                            count += 1;
                            d += 1;
                        }
                    }
                    let ds = &mut ds[..count];
                    ds.sort_unstable();
                    for (i, &d) in ds.iter().enumerate() {
                        if i > 0 && ds[i - 1] == d {
                            continue;
                        }
                        let u0 = (xa - d as f64).abs();
                        let w0 = (ya - d as f64).abs();
                        let gauge = (u0 + hx) * (w0 + hy);
                        if gauge < c + 1e-9 * (1.0 + u0 + w0) {
                            candidates.push(((t.unsigned_abs(), t, d, idx), Hit { n, class: idx, t, d }));
                        }
                    }
                }
            }
            if candidates.is_empty() {
                continue;
            }
            candidates.sort_unstable_by_key(|c| c.0);
            let rect = rect.get_or_insert_with(|| self.r0.dyadic(depth, ix, iy));
            for (_, hit) in &candidates {
                let class = &group[hit.class];
                let (x, y) = self.center_point(class, hit.t, hit.d);
                if hyperbola_contains_box(&x, &y, n, rect) {
                    return Ok(Some(*hit));
                }
            }
        }
        Ok(None)
    }

    fn center(&self, class: &Class, t: i64, d: i64) -> FieldElement {
        FieldElement::new(
            class.a_mod1() + Rational::from_integer(d.into()),
            class.b_mod1() + Rational::from_integer(t.into()),
        )
    }

    fn center_point(&self, class: &Class, t: i64, d: i64) -> (QuadraticReal, QuadraticReal) {
        let e = self.center(class, t, d);
        (self.field.embed(&e, Embedding::First), self.field.embed(&e, Embedding::Second))
    }

    fn fail(&self, e: ProveError) -> ProveError {
        let mut slot = self.failure.lock().unwrap();
        self.abort.store(true, AtomicOrdering::Relaxed);
        slot.get_or_insert(e).clone()
    }

    fn solve_box(&self, depth: u32, ix: u128, iy: u128, path: String) -> Result<Leaves, ProveError> {
        if self.abort.load(AtomicOrdering::Relaxed) {
            let slot = self.failure.lock().unwrap();
            return Err(slot.clone().expect("abort without a recorded failure"));
        }
        let seen = self.boxes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if seen > self.schedule.box_budget {
            return Err(self.fail(ProveError::BudgetExhausted { budget: self.schedule.box_budget }));
        }
        match self.find_region(depth, ix, iy) {
            Err(e) => return Err(self.fail(e)),
            Ok(Some(hit)) => return Ok(vec![(path, hit)]),
            Ok(None) => {}
        }
        if depth >= self.schedule.max_depth {
            return Err(self.fail(ProveError::DepthExceeded { cap: self.schedule.max_depth, path }));
        }
        let child = |q: u128| {
            let mut p = path.clone();
            p.push(char::from(b'0' + q as u8));
            (depth + 1, 2 * ix + (q & 1), 2 * iy + (q >> 1), p)
        };
        let run = |(d, x, y, p): (u32, u128, u128, String)| self.solve_box(d, x, y, p);
        let parts: [Result<Leaves, ProveError>; 4] = if self.schedule.parallel && depth < 10 {
            let ((r0, r1), (r2, r3)) = rayon::join(
                || rayon::join(|| run(child(0)), || run(child(1))),
                || rayon::join(|| run(child(2)), || run(child(3))),
            );
            [r0, r1, r2, r3]
        } else {
            [run(child(0)), run(child(1)), run(child(2)), run(child(3))]
        };
        let mut leaves = Vec::new();
        for part in parts {
            leaves.extend(part?);
        }
        Ok(leaves)
    }

    /// Runs the search on `R0` and assembles the certificate.
    pub fn solve(&self) -> Result<Certificate, ProveError> {
        let leaves = self.solve_box(0, 0, 0, String::new())?;
        let table = self.table.read().unwrap();
        let mut index: HashMap<Hit, usize> = HashMap::new();
        let mut regions = Vec::new();
        let mut cert_leaves = Vec::with_capacity(leaves.len());
        let mut max_depth = 0;
        for (path, hit) in leaves {
            max_depth = max_depth.max(path.len() as u32);
            let region = *index.entry(hit).or_insert_with(|| {
                let class = &table.by_norm[hit.n as usize][hit.class];
                regions.push(CertRegion {
                    center: self.center(class, hit.t, hit.d),
                    q2: class.witness(self.field, &table.ideals),
                });
                regions.len() - 1
            });
            cert_leaves.push(CertLeaf { path, region });
        }
        let (t, n) = self.schedule.at_depth(max_depth);
        Ok(Certificate { m: self.field.m(), disc: self.field.disc(), t: t as u64, n, regions, leaves: cert_leaves })
    }
}

/// Covers `R0` with regions and returns the certificate.
pub fn prove(field: &QuadField, schedule: &Schedule) -> Result<Certificate, ProveError> {
    schedule.validate()?;
    if !schedule.skip_class_check && !class_number_is_one(field) {
        return Err(ProveError::ClassNumberNotOne(field.m()));
    }
    SearchState::new(field, schedule.clone()).solve()
}
