//! Complex log-gamma (Lanczos, g = 7) with a reflection formula that stays
//! finite for large imaginary parts.

use std::f64::consts::PI;

use num_complex::Complex64;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// A branch of `ln Γ(z)`. Only `exp` of sums of these values is used, so the
/// imaginary part is determined modulo `2π`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln(1/Γ(z))`, or `None` where `1/Γ` vanishes (non-positive integers).
pub fn ln_rgamma(z: Complex64) -> Option<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        None
    } else {
        Some(-ln_gamma(z))
    }
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    // sin(π(z − m)) = (−1)^m sin(πz)
    let m = z.re.round();
    let w = Complex64::new(z.re - m, z.im);
    let shift = Complex64::new(0.0, PI * m);
    if w.im < 0.0 {
        return ln_sin_pi(w.conj()).conj() + shift;
    }
    // sin(πw) = (i/2) e^{−iπw} (1 − e^{2iπw})
    let i = Complex64::i();
    let e = (2.0 * i * PI * w).exp();
    -i * PI * w + (1.0 - e).ln() + Complex64::new(0.5f64.ln(), PI / 2.0) + shift
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}
