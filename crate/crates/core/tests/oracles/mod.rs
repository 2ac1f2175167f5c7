//! Brute-force references that share no code with the library beyond the
//! element types used to compare results.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;

pub fn is_squarefree(m: u64) -> bool {
    m >= 2 && (2..).take_while(|p| p * p <= m).all(|p| !m.is_multiple_of(p * p))
}

pub fn disc(m: u64) -> i128 {
    if m % 4 == 1 {
        m as i128
    } else {
        4 * m as i128
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `(Tr ω, Nm ω)` for the integral basis `{1, ω}`.
pub fn omega_data(m: u64) -> (i128, i128) {
    if m % 4 == 1 {
        (1, (1 - m as i128) / 4)
    } else {
        (0, -(m as i128))
    }
}

/// Smallest unit above 1, as `(a, b)` with `ε = a + bω`: scan `y = 1, 2, …`
/// for `x² − D·y² = ±4`, giving `ε = (x + y√D)/2`.
pub fn pell_unit(m: u64) -> (i128, i128) {
    let d = disc(m);
    for y in 1i128.. {
        let mut best: Option<i128> = None;
        for s in [-4, 4] {
            let x2 = d * y * y + s;
            let x = isqrt(x2);
            if x > 0 && x * x == x2 {
                best = Some(best.map_or(x, |b| b.min(x)));
            }
        }
        if let Some(x) = best {
            // √D = 2ω − 1 when D = m, √D = 2ω when D = 4m
            return if d == m as i128 { ((x - y) / 2, y) } else { (x / 2, y) };
        }
    }
    unreachable!()
}

pub fn unit_norm(m: u64) -> i128 {
    let (a, b) = pell_unit(m);
    let (tr, nw) = omega_data(m);
    a * a + a * b * tr + b * b * nw
}

/// Class number from cycles of reduced primitive forms `(a, b, c)` of
/// discriminant `D`; the cycle count is the narrow class number, which is
/// twice the class number when the fundamental unit has norm `+1`.
pub fn class_number(m: u64) -> usize {
    let d = disc(m);
    let s = isqrt(d);
    let mut reduced = HashSet::new();
    for b in 1..=s {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a_abs in 1..=ac.abs() {
            if ac % a_abs != 0 || 2 * a_abs + b < s + 1 || 2 * a_abs - b > s {
                continue;
            }
            for a in [a_abs, -a_abs] {
                let c = ac / a;
                if a.gcd(&b).gcd(&c) == 1 {
                    reduced.insert((a, b, c));
                }
            }
        }
    }
    let step = |(_, b, c): (i128, i128, i128)| {
        let two_c = 2 * c.abs();
        // b' ≡ −b (mod 2|c|) with s + 1 − 2|c| ≤ b' ≤ s
        let lo = s + 1 - two_c;
        let b2 = lo + (-b - lo).rem_euclid(two_c);
        (c, b2, (b2 * b2 - d) / (4 * c))
    };
    let mut seen = HashSet::new();
    let mut cycles = 0;
    for &f in &reduced {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        while seen.insert(g) {
            assert!(reduced.contains(&g), "reduction left the reduced set at {g:?}");
            g = step(g);
        }
    }
    if unit_norm(m) == -1 {
        cycles
    } else {
        cycles / 2
    }
}

/// Classes `(a/n, b/n) mod 1` of `x/n` over integral `x` with
/// `|Nm x| = n ≤ bound`, as reduced fractions `(a_num, a_den, b_num,
/// b_den, n)`. Elements of each norm are found in a coefficient box; the
/// residues mod `n` are then closed under `±ε`.
pub fn qn_classes(m: u64, bound: u64) -> BTreeSet<(i128, i128, i128, i128, u64)> {
    let (tr, nw) = omega_data(m);
    let (ea, eb) = pell_unit(m);
    let norm = |a: i128, b: i128| a * a + a * b * tr + b * b * nw;
    let mut out = BTreeSet::new();
    for n in 1..=bound {
        let ni = n as i128;
        let mut seen: HashSet<(i128, i128)> = HashSet::new();
        let mut stack = Vec::new();
        for a in -60i128..=60 {
            for b in -60i128..=60 {
                if norm(a, b).abs() == ni {
                    let r = (a.rem_euclid(ni), b.rem_euclid(ni));
                    if seen.insert(r) {
                        stack.push(r);
                    }
                }
            }
        }
        while let Some((a, b)) = stack.pop() {
            let times_unit = ((a * ea - b * eb * nw).rem_euclid(ni), (a * eb + b * ea + b * eb * tr).rem_euclid(ni));
            let negated = ((-a).rem_euclid(ni), (-b).rem_euclid(ni));
            for r in [times_unit, negated] {
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        for (a, b) in seen {
            let ga = a.gcd(&ni);
            let gb = b.gcd(&ni);
            out.insert((a / ga, ni / ga, b / gb, ni / gb, n));
        }
    }
    out
}

/// `(472 + 192√6)·lcm(1..n)⁴ ≥ d` in floating point, for spot checks away
/// from the thresholds.
pub fn ennola_floor_f64(d: u64) -> u64 {
    let c = 472.0 + 192.0 * 6f64.sqrt();
    let mut lcm = 1u64;
    for n in 1u64.. {
        lcm = lcm.lcm(&n);
        if c * (lcm as f64).powi(4) >= d as f64 {
            return n;
        }
    }
    unreachable!()
}
