//! Special functions: Gamma, digamma, Bessel `J` of integer and half-integer
//! order, unit-ball volumes and the Gauss hypergeometric factor
//! `F(-1/2, 1/2; s/2; M)` that enters the random-wave nodal density.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_real(x))
}

/// Gamma on the whole real line except the poles, via reflection below 1/2.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_real(1.0 - x))
    } else if x > 140.0 {
        ln_gamma_pos(x).exp()
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

fn ln_gamma_pos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `1/Gamma(x)`, zero at the poles.
pub(crate) fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma_real(x)
    }
}

/// Digamma function for `x > 0`.
pub(crate) fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// Volume of the unit ball in dimension `s`, `pi^(s/2) / Gamma(s/2 + 1)`.
///
/// Built from `xi_0 = 1`, `xi_1 = 2` and `xi_s = xi_{s-2} * 2 pi / s`, which is
/// exact for `s <= 2` and accurate to a few ulps beyond.
pub fn ball_volume(s: usize) -> f64 {
    let mut v = if s % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if s % 2 == 0 { 2 } else { 3 };
    while k <= s {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

// ---------------------------------------------------------------------------
// Bessel functions of the first kind
// ---------------------------------------------------------------------------

/// Bessel function `J_order(x)` for `order` a non-negative multiple of 1/2 and
/// `x >= 0`.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_j requires finite x >= 0, got {x}")));
    }
    let mut out = [0.0];
    bessel_j_run(order, x, &mut out);
    Ok(out[0])
}

fn check_order(order: f64) -> Result<()> {
    let twice = 2.0 * order;
    if !(order >= 0.0) || twice != twice.floor() || order > 64.0 {
        return Err(domain(format!(
            "bessel_j supports orders 0, 1/2, 1, ... up to 64, got {order}"
        )));
    }
    Ok(())
}

/// Fills `out[i] = J_{order + i}(x)`. `order` must be a non-negative multiple
/// of 1/2 and `x >= 0`.
pub(crate) fn bessel_j_run(order: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    if x == 0.0 {
        for (i, v) in out.iter_mut().enumerate() {
            *v = if order + i as f64 == 0.0 { 1.0 } else { 0.0 };
        }
        return;
    }
    let top = order + (out.len() - 1) as f64;
    if order.fract() != 0.0 {
        half_integer_run(order, top, x, out);
    } else {
        integer_run(order as usize, top, x, out);
    }
}

fn half_integer_run(order: f64, top: f64, x: f64, out: &mut [f64]) {
    if x < top && x < 40.0 {
        for (i, v) in out.iter_mut().enumerate() {
            *v = bessel_series(order + i as f64, x);
        }
        return;
    }
    let pref = (2.0 / (PI * x)).sqrt();
    let (sin, cos) = x.sin_cos();
    // J_{-1/2}, J_{1/2}
    let mut prev = pref * cos;
    let mut cur = pref * sin;
    let mut nu = 0.5;
    loop {
        if nu >= order {
            let idx = (nu - order) as usize;
            out[idx] = cur;
            if idx + 1 == out.len() {
                return;
            }
        }
        let next = 2.0 * nu / x * cur - prev;
        prev = cur;
        cur = next;
        nu += 1.0;
    }
}

fn integer_run(order: usize, top: f64, x: f64, out: &mut [f64]) {
    if x <= 8.0 || x < 0.5 * top {
        for (i, v) in out.iter_mut().enumerate() {
            *v = bessel_series((order + i) as f64, x);
        }
    } else if x >= hankel_threshold(top) {
        for (i, v) in out.iter_mut().enumerate() {
            *v = bessel_hankel((order + i) as f64, x);
        }
    } else {
        bessel_miller(order, x, out);
    }
}

/// Smallest `x` at which the Hankel expansion is trusted for orders up to `nu`.
fn hankel_threshold(nu: f64) -> f64 {
    (25.0f64).max(nu * nu)
}

/// Ascending power series, summed until the terms stop contributing.
pub(crate) fn bessel_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(nu) * rgamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > half {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion for large `x`; truncated at the smallest term.
fn bessel_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Miller's backward recurrence normalised by `J_0 + 2 sum J_2k = 1`.
fn bessel_miller(order: usize, x: f64, out: &mut [f64]) {
    let top = order + out.len() - 1;
    let base = top.max(x as usize);
    let mut start = base + 20 + (40.0 * base as f64).sqrt() as usize;
    start += start % 2;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{k-1}
        let idx = k - 1;
        if idx >= order && idx <= top {
            out[idx - order] = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function
// ---------------------------------------------------------------------------

/// Argument above which the power series is replaced by the expansion around
/// `z = 1`.
const HYP_SERIES_MAX: f64 = 0.9;

/// `F(-1/2, 1/2; s/2; m)` for `s >= 2` and `m <= 1`.
///
/// The random-wave covariance parameter `M` stays inside `[-1, 1]`; a value
/// above one points at a broken covariance evaluation and is rejected.
pub fn hyp_factor(s: usize, m: f64) -> Result<f64> {
    if s < 2 {
        return Err(domain(format!("hyp_factor requires s >= 2, got {s}")));
    }
    if !(m <= 1.0) || !m.is_finite() {
        return Err(domain(format!("hyp_factor requires M <= 1, got {m}")));
    }
    Ok(hyp2f1(-0.5, 0.5, 0.5 * s as f64, m))
}

/// `2F1(a, b; c; z)` for `z <= 1` with `c - a - b > 0`; `c` is assumed not to
/// be a non-positive integer.
pub(crate) fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    debug_assert!(c - a - b > 0.0);
    if z == 1.0 {
        return gamma_real(c) * gamma_real(c - a - b) * rgamma(c - a) * rgamma(c - b);
    }
    if z < -0.5 {
        // Pfaff: F(a,b;c;z) = (1-z)^-a F(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        return (1.0 - z).powf(-a) * hyp2f1(a, c - b, c, w);
    }
    if z <= HYP_SERIES_MAX {
        return hyp_series(a, b, c, z);
    }
    let m = c - a - b;
    let mi = m.round();
    if (m - mi).abs() < 1e-12 {
        hyp_near_one_integer(a, b, mi as usize, 1.0 - z)
    } else {
        hyp_near_one(a, b, c, 1.0 - z)
    }
}

fn hyp_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..100_000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && n > 2) {
            break;
        }
    }
    sum
}

/// Connection formula to argument `w = 1 - z` for non-integer `c - a - b`.
fn hyp_near_one(a: f64, b: f64, c: f64, w: f64) -> f64 {
    let m = c - a - b;
    let first = gamma_real(c)
        * gamma_real(m)
        * rgamma(c - a)
        * rgamma(c - b)
        * hyp_series(a, b, 1.0 - m, w);
    let second = gamma_real(c)
        * gamma_real(-m)
        * rgamma(a)
        * rgamma(b)
        * hyp_series(c - a, c - b, m + 1.0, w);
    first + w.powf(m) * second
}

/// Logarithmic connection formula for `c = a + b + m` with integer `m >= 1`,
/// written in terms of `w = 1 - z`.
fn hyp_near_one_integer(a: f64, b: f64, m: usize, w: f64) -> f64 {
    let mf = m as f64;
    let c = a + b + mf;

    let mut finite = 0.0;
    let mut term = 1.0;
    for n in 0..m {
        finite += term;
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
    }
    finite *= gamma_real(mf) * gamma_real(c) * rgamma(a + mf) * rgamma(b + mf);

    let ln_w = w.ln();
    let mut tail = 0.0;
    // (a+m)_n (b+m)_n / (n! (n+m)!) w^n
    let mut coef = 1.0 / factorial(m);
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_a = digamma(a + mf);
    let mut psi_b = digamma(b + mf);
    for n in 0..10_000 {
        let nf = n as f64;
        let t = coef * (ln_w - psi_n1 - psi_nm1 + psi_a + psi_b);
        tail += t;
        if n > 2 && t.abs() < 1e-17 * tail.abs().max(1e-300) {
            break;
        }
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
    }
    // (z - 1)^m = (-w)^m
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    finite - sign * w.powi(m as i32) * gamma_real(c) * rgamma(a) * rgamma(b) * tail
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
