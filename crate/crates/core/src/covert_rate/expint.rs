//! Exponential integral on the negative axis.
//!
//! `Ei(-x) = -E1(x)` for `x > 0`. Small arguments use the convergent power
//! series around zero; larger ones use the Lentz continued fraction for
//! `e^x E1(x)`, which also gives the scaled form used by the covert-rate
//! closed form without overflowing `e^x`.

use crate::error::{CovertError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Below this `E1` comes from the series, at or above from the continued fraction.
const SERIES_CUTOFF: f64 = 1.0;
const MAX_TERMS: usize = 500;

/// `E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)`.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= -x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() <= sum.abs() * f64::EPSILON * 0.25 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x E1(x)` by modified Lentz evaluation of
/// `1 / (x + 1 - 1^2 / (x + 3 - 2^2 / (x + 5 - ...)))`.
fn scaled_e1_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h
}

/// `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(CovertError::DomainError { function: "E1", x });
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(if x < SERIES_CUTOFF {
        e1_series(x)
    } else {
        (-x).exp() * scaled_e1_cf(x)
    })
}

/// `Ei(x)` for `x < 0`.
pub fn exp_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x >= 0.0 {
        return Err(CovertError::DomainError { function: "Ei", x });
    }
    Ok(-exp_integral_e1(-x)?)
}

/// `e^x Ei(-x)` for `x > 0`, finite for arbitrarily large `x` (tends to
/// `-1/x`). Returns `0` at `x = +inf`.
pub fn scaled_exp_integral_neg(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(CovertError::DomainError {
            function: "e^x Ei(-x)",
            x,
        });
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(if x < SERIES_CUTOFF {
        -x.exp() * e1_series(x)
    } else {
        -scaled_e1_cf(x)
    })
}
