//! Independent oracles shared by the integration tests. Nothing here calls
//! the closed forms under test.

#![allow(dead_code)]

pub const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimisation on `[a, b]`, run to the limit of f64.
pub fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        if b - a <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// `(max, min)` of `f` over `[lo, hi]`: an `n`-point scan, then a golden
/// refinement between the neighbours of the best samples.
pub fn dense_extrema(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    if hi <= lo {
        let v = f(lo);
        return (v, v);
    }
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let imax = (0..n).max_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap();
    let imin = (0..n).min_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap();
    let nb = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
    let (a, b) = nb(imax);
    let max = -golden_min(&|x| -f(x), a, b).1;
    let (a, b) = nb(imin);
    let min = golden_min(f, a, b).1;
    (max.max(ys[imax]), min.min(ys[imin]))
}

/// Composite trapezoid rule with `n` panels.
pub fn trapezoid(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + h * k as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

pub type V3 = [f64; 3];

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// Spread of `⟨(p − s)/|p − s|, v⟩` over source points `s = c + t·u`,
/// `t ∈ [−L/2, L/2]`, found by brute force in whatever frame the caller uses.
pub fn brute_bandwidth(p: V3, v: V3, c: V3, u: V3, length: f64, n: usize) -> f64 {
    let g = |t: f64| {
        let s = [c[0] + t * u[0], c[1] + t * u[1], c[2] + t * u[2]];
        let r = sub(p, s);
        dot(r, v) / norm(r)
    };
    let (max, min) = dense_extrema(&g, -0.5 * length, 0.5 * length, n);
    max - min
}

/// Frame-free K number for a receive array of half-length `rho` centred at
/// `center` along `v`, from a trapezoid over brute-force bandwidths.
pub fn brute_k(center: V3, v: V3, rho: f64, c: V3, u: V3, length: f64, panels: usize) -> f64 {
    let w = |l: f64| {
        let p = [center[0] + l * v[0], center[1] + l * v[1], center[2] + l * v[2]];
        brute_bandwidth(p, v, c, u, length, 257)
    };
    trapezoid(&w, -rho, rho, panels)
}

/// Pass/fail line in the acceptance format.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}
