//! Bracketing root finders on positive distances.

use alloc::vec::Vec;

use crate::math;

/// Bisects `f` on `[a, b]` where `f(a)` and `f(b)` have opposite signs (or
/// one of them is zero) until the bracket is narrower than `rel_tol·|b|`.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..300 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= rel_tol * b.abs().max(a.abs()) || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Log-spaced grid of `n ≥ 2` points over `[lo, hi]`, both positive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (l0, l1) = (math::ln(lo), math::ln(hi));
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == n - 1 {
                hi
            } else {
                math::exp(l0 + (l1 - l0) * k as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Every root of `f` on `grid` found by sign changes between consecutive
/// samples, each refined by bisection. Returned in increasing order.
pub fn scan_roots<F>(mut f: F, grid: &[f64], rel_tol: f64) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut roots = Vec::new();
    let Some(&first) = grid.first() else {
        return roots;
    };
    let mut prev = (first, f(first));
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for &x in &grid[1..] {
        let cur = (x, f(x));
        if cur.1 == 0.0 {
            roots.push(cur.0);
        } else if prev.1 != 0.0 && (prev.1 < 0.0) != (cur.1 < 0.0) {
            roots.push(bisect(&mut f, prev.0, cur.0, rel_tol));
        }
        prev = cur;
    }
    roots
}

/// Largest root of `f` below `start`, assuming `f < 0` beyond it.
///
/// Steps down from `start` geometrically by `factor` until the sign flips,
/// then bisects the last step. If `f(start) ≥ 0` the search first walks
/// upward. Returns `None` when no sign change appears above `floor`.
pub fn largest_root<F>(mut f: F, start: f64, floor: f64, factor: f64, rel_tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut hi = start;
    let mut f_hi = f(hi);
    let mut grow = 0;
    while f_hi >= 0.0 {
        if grow >= 200 || !hi.is_finite() {
            return None;
        }
        hi *= 2.0;
        f_hi = f(hi);
        grow += 1;
    }
    loop {
        let lo = (hi / factor).max(floor);
        let f_lo = f(lo);
        if f_lo >= 0.0 {
            return Some(bisect(&mut f, lo, hi, rel_tol));
        }
        if lo <= floor {
            return None;
        }
        hi = lo;
    }
}
