//! Independent reference solutions used to validate the method: the exact
//! harmonic-oscillator spectrum and a Numerov shooting solver for the
//! two-body radial equation in three dimensions.
//!
//! The Numerov solver never touches the stationarity machinery; it
//! discretises u''(r) = 2 mu (V_eff(r) - E) u(r) on a uniform grid, counts
//! nodes to bracket an eigenvalue, bisects on the energy, and removes the
//! O(h^4) discretisation error by Richardson extrapolation over grid
//! halvings.

use alloc::vec::Vec;

use crate::law::PotentialLaw;
use crate::math::sqrt;
use crate::model::binomial;
use crate::{Error, Result};

/// x^n by binary exponentiation (u(r) ~ r^(l+1) starts).
fn powu(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Exact eigenvalue of the N-body harmonic Hamiltonian with kinetic term
/// p^2/(2 mu), one-body strength nu (U = nu s^2) and K-body strength rho:
/// `E = Q sqrt((2/mu)(nu + N C(N-2,K-2) rho))`.
pub fn ho_exact_energy(
    n_particles: u32,
    arity: u32,
    mass: f64,
    one_body_strength: f64,
    many_body_strength: f64,
    q: f64,
) -> Result<f64> {
    if arity < 2 || arity > n_particles {
        return Err(Error::Domain {
            context: "need 2 <= K <= N",
            value: f64::from(arity),
        });
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain {
            context: "mass must be positive",
            value: mass,
        });
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain {
            context: "global quantum number must be positive",
            value: q,
        });
    }
    let reduction = binomial(n_particles - 2, arity - 2)? as f64;
    let radicand = one_body_strength + f64::from(n_particles) * reduction * many_body_strength;
    if radicand <= 0.0 {
        return Err(Error::Domain {
            context: "oscillator radicand must be positive",
            value: radicand,
        });
    }
    Ok(q * sqrt(2.0 / mass * radicand))
}

/// Two-body radial problem (D = 3) for the Numerov oracle.
#[derive(Debug, Clone)]
pub struct RadialProblem {
    pub reduced_mass: f64,
    pub potential: PotentialLaw,
    pub angular_momentum: u32,
    /// Outer edge of the integration grid.
    pub r_max: f64,
    /// Points of the coarsest grid; refinements double this.
    pub base_points: usize,
    /// Upper energy edge of the bound spectrum, `Some(0.0)` for potentials
    /// vanishing at infinity, `None` for confining ones (the bracket then
    /// grows until it encloses the state).
    pub spectrum_top: Option<f64>,
}

impl RadialProblem {
    /// Problem with an explicit outer radius. The spectrum edge is inferred
    /// from the law: power laws with positive exponent confine, everything
    /// else is treated as vanishing at infinity.
    pub fn new(
        reduced_mass: f64,
        potential: PotentialLaw,
        angular_momentum: u32,
        r_max: f64,
    ) -> Self {
        let spectrum_top = match &potential {
            PotentialLaw::Power { exponent, .. } if *exponent > 0.0 => None,
            _ => Some(0.0),
        };
        RadialProblem {
            reduced_mass,
            potential,
            angular_momentum,
            r_max,
            base_points: 4000,
            spectrum_top,
        }
    }

    /// Problem sized from a characteristic length: r_max = 20 * scale.
    pub fn with_scale(
        reduced_mass: f64,
        potential: PotentialLaw,
        angular_momentum: u32,
        length_scale: f64,
    ) -> Self {
        RadialProblem::new(
            reduced_mass,
            potential,
            angular_momentum,
            20.0 * length_scale,
        )
    }
}

/// Converged eigenvalue with its Richardson error estimate.
#[derive(Debug, Clone, Copy)]
pub struct RadialLevel {
    pub energy: f64,
    /// Richardson estimate of the residual discretisation error.
    pub error_estimate: f64,
    /// Points of the finest grid used.
    pub grid_points: usize,
}

/// Small-r series data for the outward start: V(r) ~ -coulomb/r + regular.
#[derive(Debug, Clone, Copy)]
struct OriginSeries {
    coulomb: f64,
    regular: f64,
}

impl OriginSeries {
    /// u(r) = r^(l+1) (1 + a1 r + a2 r^2) with the energy-dependent second
    /// coefficient; keeps the start error at the integrator's own order.
    fn start_value(&self, mu: f64, l: u32, e: f64, r: f64) -> f64 {
        let lf = f64::from(l);
        let a1 = -mu * self.coulomb / (lf + 1.0);
        let a2 = (-2.0 * mu * self.coulomb * a1 + 2.0 * mu * (self.regular - e))
            / (2.0 * (2.0 * lf + 3.0));
        powu(r, l + 1) * (1.0 + a1 * r + a2 * r * r)
    }
}

/// Number of interior nodes of the outward Numerov solution at energy `e`,
/// on a precomputed effective-potential table.
fn node_count(
    two_mu_veff: &[f64],
    h: f64,
    r: &[f64],
    l: u32,
    series: OriginSeries,
    two_mu: f64,
    e: f64,
) -> usize {
    let n = two_mu_veff.len();
    let h2 = h * h;
    let mu = 0.5 * two_mu;
    let mut um = series.start_value(mu, l, e, r[0]);
    let mut uc = series.start_value(mu, l, e, r[1]);
    let mut nodes = 0usize;
    let mut fm = two_mu_veff[0] - two_mu * e;
    let mut fc = two_mu_veff[1] - two_mu * e;
    let mut last_sign = if um != 0.0 { um.signum() } else { uc.signum() };
    if uc != 0.0 && uc.signum() != last_sign {
        nodes += 1;
        last_sign = uc.signum();
    }
    for i in 1..n - 1 {
        let fp = two_mu_veff[i + 1] - two_mu * e;
        let up = ((2.0 + 10.0 * h2 * fc / 12.0) * uc - (1.0 - h2 * fm / 12.0) * um)
            / (1.0 - h2 * fp / 12.0);
        if up != 0.0 {
            if up.signum() != last_sign {
                nodes += 1;
            }
            last_sign = up.signum();
        }
        um = uc;
        uc = up;
        fm = fc;
        fc = fp;
        if uc.abs() > 1e250 {
            um /= 1e250;
            uc /= 1e250;
        }
    }
    nodes
}

fn eigenvalue_on_grid(problem: &RadialProblem, points: usize, node_target: usize) -> Result<f64> {
    let l = problem.angular_momentum;
    let two_mu = 2.0 * problem.reduced_mass;
    let h = problem.r_max / points as f64;
    let r: Vec<f64> = (1..=points).map(|i| i as f64 * h).collect();
    let mut two_mu_veff = Vec::with_capacity(points);
    let lfac = f64::from(l) * f64::from(l + 1);
    let mut v_min = f64::INFINITY;
    for &ri in &r {
        let v = problem.potential.eval(ri)?;
        let veff = v + lfac / (two_mu * ri * ri);
        v_min = v_min.min(veff);
        two_mu_veff.push(two_mu * veff);
    }
    if !v_min.is_finite() {
        return Err(Error::Domain {
            context: "effective potential must be finite on the grid",
            value: v_min,
        });
    }
    // split V near the origin into -coulomb/r plus a regular part, both by
    // linear extrapolation from the first two grid points (a one-point
    // sample would inject spurious series terms and degrade the
    // integrator's convergence order)
    let (v1, v2) = (problem.potential.eval(r[0])?, problem.potential.eval(r[1])?);
    let coulomb = -(2.0 * r[0] * v1 - r[1] * v2);
    let regular = 2.0 * (v1 + coulomb / r[0]) - (v2 + coulomb / r[1]);
    let series = OriginSeries { coulomb, regular };

    let count = |e: f64| node_count(&two_mu_veff, h, &r, l, series, two_mu, e);

    let mut lo = v_min - 0.1 * v_min.abs() - 1.0;
    if count(lo) > node_target {
        return Err(Error::NonConvergence {
            bracket: (lo, lo),
            residual: f64::NAN,
        });
    }
    let mut hi = match problem.spectrum_top {
        Some(top) => {
            if count(top) <= node_target {
                return Err(Error::NoBoundState);
            }
            top
        }
        None => {
            let mut hi = lo.abs().max(1.0);
            let mut tries = 0;
            while count(hi) <= node_target {
                hi = hi * 2.0 + 1.0;
                tries += 1;
                if tries > 60 {
                    return Err(Error::NonConvergence {
                        bracket: (lo, hi),
                        residual: f64::NAN,
                    });
                }
            }
            hi
        }
    };
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if count(mid) > node_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Eigenvalue with `node_count` radial nodes. `tol` bounds the
/// Richardson-estimated discretisation error relative to 1 + |E|.
pub fn solve_two_body(problem: &RadialProblem, node_count: u32, tol: f64) -> Result<RadialLevel> {
    if !(problem.reduced_mass > 0.0) || !(problem.r_max > 0.0) {
        return Err(Error::Domain {
            context: "reduced mass and r_max must be positive",
            value: problem.reduced_mass.min(problem.r_max),
        });
    }
    let target = node_count as usize;
    let mut points = problem.base_points.max(500);
    let mut prev = eigenvalue_on_grid(problem, points, target)?;
    for _ in 0..5 {
        points *= 2;
        let cur = eigenvalue_on_grid(problem, points, target)?;
        // Numerov converges at fourth order; extrapolate and keep the
        // conservative defect as the error estimate
        let defect = (cur - prev).abs();
        let extrapolated = cur + (cur - prev) / 15.0;
        if defect / 15.0 < tol * (1.0 + cur.abs()) {
            return Ok(RadialLevel {
                energy: extrapolated,
                error_estimate: defect / 15.0,
                grid_points: points,
            });
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        bracket: (prev, prev),
        residual: tol,
    })
}
