//! Special functions needed by the densities and their CDFs.
//!
//! `ln Γ` and `erfc` come from `libm`; the incomplete gamma and beta
//! functions and `ln I₀` are evaluated here.

use std::f64::consts::PI;

use crate::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// Below this argument `I₀` is summed from its power series; above it the
/// asymptotic expansion converges to machine precision.
const I0_SERIES_LIMIT: f64 = 30.0;

fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Natural log of the modified Bessel function of the first kind, order 0.
pub fn log_bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(domain("x", x, "finite and >= 0"));
    }
    if x <= I0_SERIES_LIMIT {
        // Σ (x²/4)ᵏ / (k!)²
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_ITER {
            let kf = k as f64;
            term *= q / (kf * kf);
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        Ok(sum.ln())
    } else {
        // I₀(x) ~ eˣ / √(2πx) · Σ ((2k−1)!!)² / (k! (8x)ᵏ)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_ITER {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (8.0 * x * k as f64);
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        Ok(x - 0.5 * (2.0 * PI * x).ln() + sum.ln())
    }
}

pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("a", a, "> 0"));
    }
    if !(b > 0.0) {
        return Err(domain("b", b, "> 0"));
    }
    Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(domain("a", a, "> 0"));
    }
    if !(x >= 0.0) {
        return Err(domain("x", x, ">= 0"));
    }
    Ok(())
}

/// Regularized lower incomplete gamma function `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    })
}

/// Regularized upper incomplete gamma function `Q(a, x) = 1 − P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    })
}

fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * gamma_prefactor(a, x)
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    gamma_prefactor(a, x) * h
}

fn check_dof(dof: f64) -> Result<()> {
    if !(dof > 0.0) || dof.is_infinite() {
        return Err(domain("dof", dof, "finite and > 0"));
    }
    Ok(())
}

pub fn chi2_logpdf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if !(x >= 0.0) {
        return Err(domain("x", x, ">= 0"));
    }
    let half = 0.5 * dof;
    let log_norm = -half * std::f64::consts::LN_2 - ln_gamma(half);
    if x == 0.0 {
        return Ok(match half.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => log_norm,
            _ => f64::NEG_INFINITY,
        });
    }
    Ok((half - 1.0) * x.ln() - 0.5 * x + log_norm)
}

pub fn chi2_cdf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if !(x >= 0.0) {
        return Err(domain("x", x, ">= 0"));
    }
    gamma_p(0.5 * dof, 0.5 * x)
}

/// Survival function `1 − chi2_cdf`, accurate in the upper tail.
pub fn chi2_sf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if !(x >= 0.0) {
        return Err(domain("x", x, ">= 0"));
    }
    gamma_q(0.5 * dof, 0.5 * x)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "in [0, 1]"));
    }
    let lbeta = log_beta(a, b)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let front = (a * x.ln() + b * (1.0 - x).ln() - lbeta).exp();
    Ok(if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    })
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Standard normal CDF Φ(z).
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}
