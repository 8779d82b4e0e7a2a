//! Numeric minimization of a one-variable objective on `(0, 2)`: a uniform scan
//! followed by golden-section refinement around the best grid point.

pub const GRID_LO: f64 = 0.01;
pub const GRID_HI: f64 = 1.99;
pub const GRID_STEP: f64 = 1e-3;
pub const GOLDEN_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `(argmin, min)` of `f` on `[GRID_LO, GRID_HI]`.
pub fn minimize(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let steps = ((GRID_HI - GRID_LO) / GRID_STEP).round() as usize;
    let (mut best_k, mut best) = (0, f64::INFINITY);
    for k in 0..=steps {
        let v = f(GRID_LO + k as f64 * GRID_STEP);
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let centre = GRID_LO + best_k as f64 * GRID_STEP;
    let a = (centre - GRID_STEP).max(GRID_LO);
    let b = (centre + GRID_STEP).min(GRID_HI);
    golden(&f, a, b)
}

/// Golden-section search on `[a, b]` for a unimodal `f`.
pub fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
