//! Scalar special functions used by the kernel formulas: log-gamma and gamma,
//! the Gauss hypergeometric function on `[0, 1]`, the complete elliptic
//! integral of the first kind and the Riemann zeta function.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Accuracy controls for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionAccuracy {
    rel_tol: f64,
    max_terms: usize,
}

impl FunctionAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-8) {
            return domain(format!("rel_tol must lie in (0, 1e-8], got {rel_tol}"));
        }
        if max_terms < 50 {
            return domain(format!("max_terms must be at least 50, got {max_terms}"));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for FunctionAccuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-17,
            max_terms: 20_000,
        }
    }
}

const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma requires finite x > 0, got {x}"));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x >= 10.0 {
        // Stirling series; the truncation error is below 1e-17 for x >= 10.
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                + inv2
                    * (-1.0 / 360.0
                        + inv2
                            * (1.0 / 1260.0
                                + inv2
                                    * (-1.0 / 1680.0
                                        + inv2
                                            * (1.0 / 1188.0
                                                + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))));
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series;
    }
    let shifted = x + 5.242_187_5;
    let head = (x + 0.5) * shifted.ln() - shifted;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        ser += c / y;
    }
    head + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// `sin(pi * x)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// The gamma function on the real line, excluding its poles.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma requires a finite argument, got {x}"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Singularity(format!("gamma has a pole at {x}")));
    }
    if x >= 0.5 {
        if x > 171.6 {
            return domain(format!("gamma({x}) overflows"));
        }
        return Ok(ln_gamma_pos(x).exp());
    }
    // Reflection formula.
    let g = gamma(1.0 - x)?;
    Ok(PI / (sin_pi(x) * g))
}

/// `1 / gamma(x)`, equal to zero at the poles of gamma.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Direct hypergeometric series `sum (a)_k (b)_k / ((c)_k k!) z^k` for `0 <= z < 1`.
///
/// This is the raw power series with no transformation; it converges at the
/// geometric rate `z` and is meant for arguments well inside the unit disk.
pub fn gauss_2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return domain(format!("2F1 undefined for c = {c}"));
    }
    if !(0.0..1.0).contains(&z) {
        return domain(format!("series argument must lie in [0, 1), got {z}"));
    }
    series(a, b, c, z, &FunctionAccuracy::default())
}

fn series(a: f64, b: f64, c: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small = 0;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= acc.rel_tol * sum.abs() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {z}) series exceeded {} terms",
        acc.max_terms
    )))
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for `z` in `[0, 1]`.
///
/// Arguments up to 1/2 use the power series; larger arguments go through the
/// linear transformation to `1 - z`, so accuracy is retained as `z -> 1`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_split(a, b, c, z, 1.0 - z, &FunctionAccuracy::default())
}

/// [`gauss_2f1`] with the complement `1 - z` supplied by the caller.
///
/// Kernel evaluations know `1 - z` in closed form to full relative precision,
/// which matters when `z` is within rounding distance of one.
pub fn gauss_2f1_split(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    one_minus_z: f64,
    acc: &FunctionAccuracy,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return domain("2F1 parameters must be finite");
    }
    if is_nonpositive_integer(c) {
        return domain(format!("2F1 undefined for c = {c}"));
    }
    if !(0.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&one_minus_z) {
        return domain(format!("2F1 argument must lie in [0, 1], got {z}"));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    // Terminating series are polynomials: evaluate directly.
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= 0.5 {
        return series(a, b, c, z, acc);
    }
    let excess = c - (a + b);
    if one_minus_z == 0.0 {
        if excess <= 0.0 {
            return domain(format!(
                "2F1({a}, {b}; {c}; 1) diverges since c - a - b = {excess} <= 0"
            ));
        }
        return Ok(gamma(c)? * gamma(excess)? * (recip_gamma(c - a) * recip_gamma(c - b)));
    }
    if excess == excess.round() && excess.abs() < 64.0 {
        return integer_excess(a, b, c, excess as i32, z, one_minus_z, acc);
    }
    if (excess - excess.round()).abs() < 1e-8 {
        return Err(Error::UnsupportedParameter(format!(
            "c - a - b = {excess} is within 1e-8 of an integer; the 1 - z connection formula cancels"
        )));
    }
    let gc = gamma(c)?;
    let first = gc * gamma(excess)? * (recip_gamma(c - a) * recip_gamma(c - b));
    let second = gc * gamma(-excess)? * (recip_gamma(a) * recip_gamma(b));
    let mut value = 0.0;
    if first != 0.0 {
        value += first * series(a, b, 1.0 - excess, one_minus_z, acc)?;
    }
    if second != 0.0 {
        value += second
            * one_minus_z.powf(excess)
            * series(c - a, c - b, 1.0 + excess, one_minus_z, acc)?;
    }
    Ok(value)
}

/// Connection formula at `1 - z` when `c - a - b` is exactly the integer `m`.
///
/// The two gamma-weighted branches of the generic formula merge into a
/// logarithmic series (Abramowitz & Stegun 15.3.10 and 15.3.11).
fn integer_excess(
    a: f64,
    b: f64,
    c: f64,
    m: i32,
    z: f64,
    zc: f64,
    acc: &FunctionAccuracy,
) -> Result<f64> {
    if m < 0 {
        // Euler's transformation flips the sign of the excess.
        let inner = integer_excess(c - a, c - b, c, -m, z, zc, acc)?;
        return Ok(zc.powi(m) * inner);
    }
    let mf = m as f64;
    let log_zc = zc.ln();
    let mut finite = 0.0;
    if m > 0 {
        let mut term = 1.0;
        for n in 0..m {
            let nf = n as f64;
            finite += term;
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * zc;
        }
        finite *= gamma(mf)? * gamma(c)? * (recip_gamma(a + mf) * recip_gamma(b + mf));
    }
    let prefactor = gamma(c)? * (recip_gamma(a) * recip_gamma(b));
    if prefactor == 0.0 {
        return Ok(finite);
    }
    // coefficient (a+m)_n (b+m)_n / (n! (n+m)!)
    let mut coeff = 1.0 / gamma(mf + 1.0)?;
    let mut power = 1.0;
    let mut sum = 0.0;
    let mut small = 0;
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_a = digamma(a + mf);
    let mut psi_b = digamma(b + mf);
    for n in 0..acc.max_terms {
        let nf = n as f64;
        let bracket = log_zc - psi_n1 - psi_nm1 + (psi_a + psi_b);
        let term = coeff * power * bracket;
        sum += term;
        if term.abs() <= acc.rel_tol * sum.abs() || term == 0.0 {
            small += 1;
            if small >= 2 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                return Ok(finite - prefactor * sign * zc.powi(m) * sum);
            }
        } else {
            small = 0;
        }
        coeff *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0));
        power *= zc;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
    }
    Err(Error::NonConvergence(format!(
        "logarithmic 2F1({a}, {b}; {c}; {z}) series exceeded {} terms",
        acc.max_terms
    )))
}

/// Digamma function away from its poles.
pub(crate) fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.round() {
            return f64::NAN;
        }
        // reflection: psi(1 - x) - psi(x) = pi cot(pi x)
        let cot = (PI * (x - x.round())).cos() / sin_pi(x - x.round());
        return digamma(1.0 - x) - PI * cot;
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32_760.0)))));
    shift + y.ln() - 0.5 / y - tail
}

/// Complete elliptic integral of the first kind, `K(m) = int_0^{pi/2} (1 - m sin^2)^{-1/2}`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return domain(format!("elliptic_k requires 0 <= m < 1, got {m}"));
    }
    Ok(elliptic_k_complement(1.0 - m))
}

/// `K` expressed through the complementary parameter `1 - m` (which must be positive).
pub(crate) fn elliptic_k_complement(mc: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut b = mc.sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    PI / (a + b)
}

// B_{2j} / (2j)! for j = 1..=10.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
];

/// Riemann zeta function for real `s > 1`, by Euler-Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return domain(format!("riemann_zeta requires finite s > 1, got {s}"));
    }
    const N: usize = 12;
    let n = N as f64;
    let mut head = 0.0;
    for k in (1..N).rev() {
        head += (k as f64).powf(-s);
    }
    let n_pow = n.powf(-s);
    let mut tail = n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s (s+1) ... (s + 2j - 2), times N^{-s-2j+1}
    let mut rising = s;
    let mut power = n_pow / n;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coeff * rising * power;
        tail += term;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (s + j2 - 1.0) * (s + j2);
        power /= n * n;
    }
    Ok(head + tail)
}
