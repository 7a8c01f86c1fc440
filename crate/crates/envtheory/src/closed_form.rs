//! Analytic solutions for power-law and exponential interactions, plus the
//! principal-branch Lambert W evaluator they rely on.
//!
//! For `T = c p^alpha` with a single K-body term these families admit closed
//! forms for the stationary radius and energy. The exponential family leads
//! to a transcendental equation solved by the Lambert W function; bound
//! states exist only while its argument stays at or above -1/e, which caps
//! the global quantum number Q.

use crate::math::{exp, ln, powf, sqrt};
use crate::model::binomial;
use crate::{Error, Result};

/// -1/e, the principal-branch domain edge of the Lambert W function.
pub const LAMBERT_BRANCH_POINT: f64 = -1.0 / core::f64::consts::E;

/// Arguments within this band of -1/e are treated as sitting on the branch
/// point (marginal bound state).
const BRANCH_BAND: f64 = 1e-12;

/// Principal branch W0 of the Lambert W function: the w >= -1 solving
/// w e^w = x for x >= -1/e.
///
/// Starts from a regime-dependent initial guess (series near the branch
/// point, log-based asymptotics for large x) and polishes with Halley
/// iteration to an absolute residual near machine precision.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            context: "lambert_w0 argument must be finite",
            value: x,
        });
    }
    if x < LAMBERT_BRANCH_POINT {
        if x >= LAMBERT_BRANCH_POINT - BRANCH_BAND {
            return Ok(-1.0);
        }
        return Err(Error::Domain {
            context: "lambert_w0 argument below -1/e",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    // distance from the branch point, in the natural series variable
    let p = sqrt(2.0 * (core::f64::consts::E * x + 1.0).max(0.0));
    let mut w = if p < 1e-4 {
        // series w = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540; the omitted
        // term is O(p^5), far below the residual target in this band
        return Ok(-1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0 - 43.0 * p * p * p * p / 540.0);
    } else if x < -0.2 {
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x < core::f64::consts::E {
        // W0(x) = x - x^2 + ... near zero; crude but inside Halley's basin
        let l = ln(1.0 + x);
        l * (1.0 - ln(1.0 + l) / (2.0 + l))
    } else {
        let l1 = ln(x);
        let l2 = ln(l1);
        l1 - l2 + l2 / l1
    };

    for _ in 0..40 {
        let ew = exp(w);
        let wew = w * ew;
        let f = wew - x;
        if f.abs() <= 0.25e-15 * (1.0 + x.abs()) {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        let next = (w - step).max(-1.0);
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    let residual = w * exp(w) - x;
    if residual.abs() <= 1e-13 * (1.0 + x.abs()) {
        Ok(w)
    } else {
        Err(Error::NonConvergence {
            bracket: (w, w),
            residual,
        })
    }
}

fn common_factors(n: u32, k: u32) -> Result<(f64, f64)> {
    if k < 2 || k > n {
        return Err(Error::Domain {
            context: "need 2 <= K <= N",
            value: f64::from(k),
        });
    }
    let count = binomial(n, k)? as f64;
    let ratio2 = binomial(k, 2)? as f64 / binomial(n, 2)? as f64;
    Ok((count, ratio2))
}

fn check_power_inputs(
    coefficient: f64,
    alpha: f64,
    strength: f64,
    exponent: f64,
    q: f64,
) -> Result<()> {
    for (context, v) in [
        ("kinetic coefficient must be positive", coefficient),
        ("kinetic exponent must be positive", alpha),
        ("potential strength must be positive", strength),
        ("global quantum number must be positive", q),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain { context, value: v });
        }
    }
    if exponent == 0.0 {
        return Err(Error::Domain {
            context: "power-law exponent must be nonzero",
            value: exponent,
        });
    }
    if exponent <= -alpha {
        return Err(Error::Domain {
            context: "power-law exponent must exceed -alpha (no bound solution)",
            value: exponent,
        });
    }
    Ok(())
}

/// Stationary radius for T = c p^alpha plus one K-body power-law term
/// V(x) = a sign(b) x^b:
/// `r0 = [alpha N c Q^alpha / (C(N,K) a |b|) * (C(N,2)/C(K,2))^(b/2)]^(1/(b+alpha))`.
pub fn power_law_r0(
    n: u32,
    k: u32,
    coefficient: f64,
    alpha: f64,
    strength: f64,
    exponent: f64,
    q: f64,
) -> Result<f64> {
    check_power_inputs(coefficient, alpha, strength, exponent, q)?;
    let (count, ratio2) = common_factors(n, k)?;
    let inner = alpha * f64::from(n) * coefficient * powf(q, alpha)
        / (count * strength * exponent.abs())
        * powf(1.0 / ratio2, exponent / 2.0);
    Ok(powf(inner, 1.0 / (exponent + alpha)))
}

/// Stationary energy for the same system:
/// `E = sign(b) (b+alpha) [ (N c/|b|)^b (a C(N,K)/alpha)^alpha
///      (C(K,2)/C(N,2))^(alpha b/2) Q^(alpha b) ]^(1/(b+alpha))`.
/// The sign of E is the sign of b.
pub fn power_law_energy(
    n: u32,
    k: u32,
    coefficient: f64,
    alpha: f64,
    strength: f64,
    exponent: f64,
    q: f64,
) -> Result<f64> {
    check_power_inputs(coefficient, alpha, strength, exponent, q)?;
    let (count, ratio2) = common_factors(n, k)?;
    let b = exponent;
    let inner = powf(f64::from(n) * coefficient / b.abs(), b)
        * powf(strength * count / alpha, alpha)
        * powf(ratio2, alpha * b / 2.0)
        * powf(q, alpha * b);
    Ok(b.signum() * (b + alpha) * powf(inner, 1.0 / (b + alpha)))
}

/// Closed-form solution for one exponential K-body term
/// V(x) = -a exp(-b x^gamma).
#[derive(Debug, Clone, Copy)]
pub struct ExponentialSolution {
    pub energy: f64,
    pub r0: f64,
    /// Argument handed to the Lambert W function; bound states require it to
    /// stay in [-1/e, 0).
    pub lambert_argument: f64,
    /// True when the argument sits on the -1/e branch point within the
    /// documented tolerance band (marginal bound state).
    pub marginal: bool,
}

/// Solves the exponential family through the principal Lambert branch.
///
/// Returns [`Error::NoBoundState`] when the Lambert argument falls below
/// -1/e, which is how too-high quantum numbers manifest here. Note the
/// returned energy is negative only below the critical coupling; close to
/// the branch point the stationary value can reach zero and above.
#[allow(clippy::too_many_arguments)]
pub fn exponential_solution(
    n: u32,
    k: u32,
    coefficient: f64,
    alpha: f64,
    depth: f64,
    rate: f64,
    gamma: f64,
    q: f64,
) -> Result<ExponentialSolution> {
    for (context, v) in [
        ("kinetic coefficient must be positive", coefficient),
        ("kinetic exponent must be positive", alpha),
        ("exponential depth must be positive", depth),
        ("exponential rate must be positive", rate),
        ("exponential exponent must be positive", gamma),
        ("global quantum number must be positive", q),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain { context, value: v });
        }
    }
    let (count, ratio2) = common_factors(n, k)?;
    let total = alpha + gamma;
    let inner = alpha
        * powf(rate, alpha / gamma)
        * coefficient
        * f64::from(n)
        * powf(ratio2, alpha / 2.0)
        * powf(q, alpha)
        / (depth * gamma * count);
    let delta = -(gamma / total) * powf(inner, gamma / total);

    if delta < LAMBERT_BRANCH_POINT - BRANCH_BAND {
        return Err(Error::NoBoundState);
    }
    let marginal = (delta - LAMBERT_BRANCH_POINT).abs() <= BRANCH_BAND;
    let w = lambert_w0(delta)?;
    let energy = -depth * count * exp(total / gamma * w) * (total / alpha * w + 1.0);
    // invert the stationarity relation for the radius: with
    // u = rate * (sqrt(ratio2) r0)^gamma one finds u = -(total/gamma) w
    let u = -(total / gamma) * w;
    let r0 = powf(u / rate, 1.0 / gamma) / sqrt(ratio2);
    Ok(ExponentialSolution {
        energy,
        r0,
        lambert_argument: delta,
        marginal,
    })
}
