//! Generic numeric solution of the stationarity system.
//!
//! For a state with global quantum number Q the method reduces to one
//! unknown, the mean radius r0, through
//!
//! ```text
//! E      = N T(p0) + N U(r0/N) + sum_t C(N,K_t) V_t(c_t r0)
//! p0     = Q / r0
//! N p0 T'(p0) = r0 U'(r0/N) + sum_t C(N,K_t) c_t r0 V_t'(c_t r0)
//! ```
//!
//! with `c_t = sqrt(C(K_t,2)/C(N,2))`. The solver scans a logarithmic r0
//! window for sign changes of the stationarity residual, refines every
//! bracket, and reports the stationary point that is a local minimum of
//! E(r0) (the branch carrying bound states).

use alloc::vec::Vec;

use crate::bracket::{log_grid, scan_roots};
use crate::law::{classify_bound_character, BoundCharacter, KineticLaw, PotentialLaw};
use crate::math::{powf, sqrt};
use crate::model::{binomial, QuantumState, SystemSpec};
use crate::{Error, Result};

/// Scan window and refinement controls for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Number of points of the logarithmic scan grid.
    pub scan_points: usize,
    /// Decades scanned below and above the characteristic length.
    pub window_decades: (f64, f64),
    /// Relative tolerance on r0 for bracket refinement.
    pub rel_tol: f64,
    /// Iteration cap for one bracket refinement.
    pub max_iterations: usize,
    /// Override for the characteristic length centring the scan window.
    pub length_scale: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            scan_points: 400,
            window_decades: (8.0, 8.0),
            rel_tol: 1e-12,
            max_iterations: 200,
            length_scale: None,
        }
    }
}

/// One root of the stationarity residual.
#[derive(Debug, Clone, Copy)]
pub struct StationaryPoint {
    pub r0: f64,
    pub energy: f64,
    /// Whether E(r0) has a local minimum here (second-difference test).
    pub is_minimum: bool,
}

/// Solver bookkeeping for auditing a solution.
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    pub scan_window: (f64, f64),
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Stationarity residual at the reported r0.
    pub residual: f64,
}

/// Solution of the stationarity system for one state.
#[derive(Debug, Clone)]
pub struct EtSolution {
    pub r0: f64,
    /// Mean momentum, p0 = Q/r0 by construction.
    pub p0: f64,
    pub energy: f64,
    pub character: BoundCharacter,
    /// Every stationary point found in the scan window, by increasing r0.
    pub stationary_points: Vec<StationaryPoint>,
    pub diagnostics: Diagnostics,
}

struct TermFactors {
    count: f64,
    ratio: f64,
}

fn term_factors(n: u32, k: u32) -> Result<TermFactors> {
    Ok(TermFactors {
        count: binomial(n, k)? as f64,
        ratio: sqrt(binomial(k, 2)? as f64 / binomial(n, 2)? as f64),
    })
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            context: "global quantum number must be positive",
            value: q,
        })
    }
}

/// Total energy functional E(r0) at fixed Q.
pub fn energy_at(spec: &SystemSpec, q: f64, r0: f64) -> Result<f64> {
    check_q(q)?;
    let n = f64::from(spec.n_particles());
    let p0 = q / r0;
    let mut e = n * spec.kinetic().eval(p0)?;
    if let Some(u) = spec.one_body() {
        e += n * u.eval(r0 / n)?;
    }
    for term in spec.many_body() {
        let f = term_factors(spec.n_particles(), term.arity)?;
        e += f.count * term.law.eval(f.ratio * r0)?;
    }
    Ok(e)
}

/// Stationarity residual whose zeros are the stationary points of
/// [`energy_at`] under the constraint p0 r0 = Q:
/// `N p0 T'(p0) - r0 U'(r0/N) - sum_t C(N,K_t) c_t r0 V_t'(c_t r0)`.
pub fn stationarity_residual(spec: &SystemSpec, q: f64, r0: f64) -> Result<f64> {
    check_q(q)?;
    let n = f64::from(spec.n_particles());
    let p0 = q / r0;
    let mut res = n * p0 * spec.kinetic().derivative(p0)?;
    if let Some(u) = spec.one_body() {
        res -= r0 * u.derivative(r0 / n)?;
    }
    for term in spec.many_body() {
        let f = term_factors(spec.n_particles(), term.arity)?;
        res -= f.count * f.ratio * r0 * term.law.derivative(f.ratio * r0)?;
    }
    Ok(res)
}

/// Characteristic r0 scale assembled from the law parameters, used to centre
/// the scan window.
fn characteristic_length(spec: &SystemSpec, q: f64) -> f64 {
    let n = f64::from(spec.n_particles());
    let (alpha, coeff) = match spec.kinetic() {
        KineticLaw::Power {
            coefficient,
            exponent,
        } => (*exponent, *coefficient),
        KineticLaw::Custom(_) => (2.0, 1.0),
    };
    let mut best: f64 = 0.0;
    let mut push = |scale: f64| {
        if scale.is_finite() && scale > best {
            best = scale;
        }
    };
    let law_scale = |law: &PotentialLaw, count: f64, ratio: f64| match law {
        PotentialLaw::Power { strength, exponent } => {
            if *exponent > -alpha {
                let inner = alpha * n * coeff * powf(q, alpha)
                    / (count * strength * exponent.abs())
                    * powf(ratio, -exponent);
                powf(inner, 1.0 / (exponent + alpha))
            } else {
                1.0
            }
        }
        PotentialLaw::Exponential { rate, exponent, .. } => {
            powf(1.0 / rate, 1.0 / exponent) / ratio
        }
        PotentialLaw::AttractiveWell { .. } | PotentialLaw::Custom(_) => 1.0 / ratio,
    };
    if let Some(u) = spec.one_body() {
        // the one-body argument is r0/N: same formulas with count = N, ratio = 1/N
        push(law_scale(u, n, 1.0 / n));
    }
    for term in spec.many_body() {
        if let Ok(f) = term_factors(spec.n_particles(), term.arity) {
            push(law_scale(&term.law, f.count, f.ratio));
        }
    }
    if best > 0.0 {
        best.clamp(1e-100, 1e100)
    } else {
        1.0
    }
}

/// Solves the stationarity system for the state with global quantum number Q.
///
/// Every sign change of the residual in the scan window is refined; the
/// reported solution is the stationary point at which E(r0) has a local
/// minimum (lowest E first if there are several). Returns
/// [`Error::NoStationaryPoint`] when no such point exists, which is how
/// unbound configurations (too weak a well, too high a state) show up.
pub fn solve(spec: &SystemSpec, q: f64, options: &SolveOptions) -> Result<EtSolution> {
    check_q(q)?;
    let scale = options
        .length_scale
        .unwrap_or_else(|| characteristic_length(spec, q));
    let lo = scale * powf(10.0, -options.window_decades.0);
    let hi = scale * powf(10.0, options.window_decades.1);
    let grid = log_grid(lo, hi, options.scan_points.max(16));
    let residual = |r: f64| stationarity_residual(spec, q, r).unwrap_or(f64::NAN);
    let roots = scan_roots(
        residual,
        &grid,
        options.rel_tol,
        options.max_iterations.max(8),
    )?;

    let mut points = Vec::with_capacity(roots.len());
    for root in &roots {
        let r0 = root.root;
        let Ok(energy) = energy_at(spec, q, r0) else {
            continue;
        };
        // second-difference curvature of E along r0
        let h = 1e-5 * r0;
        let is_minimum = match (energy_at(spec, q, r0 - h), energy_at(spec, q, r0 + h)) {
            (Ok(lo_e), Ok(hi_e)) => lo_e + hi_e - 2.0 * energy > 0.0,
            _ => false,
        };
        points.push((
            StationaryPoint {
                r0,
                energy,
                is_minimum,
            },
            *root,
        ));
    }
    let selected = points
        .iter()
        .filter(|(p, _)| p.is_minimum)
        .min_by(|(a, _), (b, _)| a.energy.total_cmp(&b.energy))
        .cloned();
    let Some((best, root)) = selected else {
        return Err(Error::NoStationaryPoint { window: (lo, hi) });
    };

    let character = classify_bound_character(spec).unwrap_or(BoundCharacter::Indeterminate);
    Ok(EtSolution {
        r0: best.r0,
        p0: q / best.r0,
        energy: best.energy,
        character,
        stationary_points: points.into_iter().map(|(p, _)| p).collect(),
        diagnostics: Diagnostics {
            scan_window: (lo, hi),
            bracket: root.bracket,
            iterations: root.iterations,
            residual: root.residual,
        },
    })
}

/// [`solve`] for an explicit quantum state; checks that the state matches the
/// system's particle count and dimension.
pub fn solve_state(
    spec: &SystemSpec,
    state: &QuantumState,
    options: &SolveOptions,
) -> Result<EtSolution> {
    if state.modes().len() != (spec.n_particles() - 1) as usize {
        return Err(Error::InvalidSystem(
            "state must carry exactly N-1 internal modes",
        ));
    }
    if state.dimension() != spec.dimension() {
        return Err(Error::InvalidSystem("state and system dimensions differ"));
    }
    solve(spec, state.global_quantum_number(), options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{KineticLaw, PotentialLaw};
    use crate::model::ManyBodyTerm;
    use crate::oracle::ho_exact_energy;
    use alloc::vec;

    fn harmonic_spec(n: u32, k: u32, mass: f64, strength: f64) -> SystemSpec {
        SystemSpec::new(
            n,
            3,
            KineticLaw::power(1.0 / (2.0 * mass), 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                k,
                PotentialLaw::power(strength, 2.0).unwrap(),
            )],
        )
        .unwrap()
    }

    #[test]
    fn two_body_oscillator_stationary_value() {
        // T = p^2/2 per particle, V = x^2/2: stationary radius (2Q^2)^(1/4),
        // stationary energy Q sqrt(2)
        let spec = harmonic_spec(2, 2, 1.0, 0.5);
        let q: f64 = 1.5;
        let r_star = (2.0 * q * q).powf(0.25);
        let e = energy_at(&spec, q, r_star).unwrap();
        assert!((e - q * 2.0f64.sqrt()).abs() < 1e-13);
        let res = stationarity_residual(&spec, q, r_star).unwrap();
        assert!(res.abs() < 1e-12);
    }

    #[test]
    fn energy_finite_on_wide_radius_range() {
        let spec = harmonic_spec(3, 3, 1.0, 1.0);
        for i in 0..200 {
            let r = 1e-3 * (1e6f64).powf(i as f64 / 199.0);
            assert!(energy_at(&spec, 2.5, r).unwrap().is_finite());
        }
    }

    #[test]
    fn residual_positive_at_small_radius() {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::exponential(1.0, 1.0, 1.0).unwrap(),
            )],
        )
        .unwrap();
        assert!(stationarity_residual(&spec, 1.5, 1e-6).unwrap() > 0.0);
    }

    #[test]
    fn harmonic_solve_matches_exact_formula() {
        let spec = harmonic_spec(4, 3, 1.0, 1.0);
        let q = 4.5;
        let sol = solve(&spec, q, &SolveOptions::default()).unwrap();
        assert!((sol.energy - 18.0).abs() < 1e-10 * 18.0);
        assert_eq!(sol.character, BoundCharacter::Exact);
        let exact = ho_exact_energy(4, 3, 1.0, 0.0, 1.0, q).unwrap();
        assert!((sol.energy - exact).abs() < 1e-10 * exact);
        // constraint holds by construction
        assert!((sol.p0 * sol.r0 - q).abs() <= 1e-12 * q);
    }

    #[test]
    fn coulomb_solve_matches_closed_form() {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::power(1.0, -1.0).unwrap(),
            )],
        )
        .unwrap();
        let sol = solve(&spec, 1.5, &SolveOptions::default()).unwrap();
        assert!((sol.energy - (-1.0 / 9.0)).abs() < 1e-10);
        assert!((sol.r0 - 4.5).abs() < 1e-9 * 4.5);
        assert_eq!(sol.character, BoundCharacter::UpperBound);
    }

    #[test]
    fn exponential_solve_matches_closed_form() {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::exponential(1.0, 0.1, 2.0).unwrap(),
            )],
        )
        .unwrap();
        let sol = solve(&spec, 1.5, &SolveOptions::default()).unwrap();
        let closed =
            crate::closed_form::exponential_solution(2, 2, 0.5, 2.0, 1.0, 0.1, 2.0, 1.5).unwrap();
        assert!((sol.energy - closed.energy).abs() <= 1e-8 * closed.energy.abs());
        assert!((sol.r0 - closed.r0).abs() <= 1e-8 * closed.r0);
        // the exponential family has a second stationary point (the maximum)
        assert_eq!(sol.stationary_points.len(), 2);
        assert!(sol.stationary_points.iter().any(|p| !p.is_minimum));
    }

    #[test]
    fn too_weak_well_has_no_stationary_point() {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::exponential(0.05, 1.0, 1.0).unwrap(),
            )],
        )
        .unwrap();
        match solve(&spec, 1.5, &SolveOptions::default()) {
            Err(Error::NoStationaryPoint { .. }) => {}
            other => panic!("expected NoStationaryPoint, got {other:?}"),
        }
    }

    #[test]
    fn one_body_term_contributes() {
        // pure one-body confinement: E = Q sqrt(2 nu / mu)
        let spec = SystemSpec::new(
            3,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            Some(PotentialLaw::power(1.0, 2.0).unwrap()),
            vec![],
        )
        .unwrap();
        let q = 3.0;
        let sol = solve(&spec, q, &SolveOptions::default()).unwrap();
        let expect = q * (2.0f64).sqrt() * (1.0f64).sqrt();
        assert!((sol.energy - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn equal_arity_terms_sum_independently() {
        // two quadratic terms of the same arity behave as one with the
        // summed strength
        let split = SystemSpec::new(
            4,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![
                ManyBodyTerm::new(3, PotentialLaw::power(0.7, 2.0).unwrap()),
                ManyBodyTerm::new(3, PotentialLaw::power(0.3, 2.0).unwrap()),
            ],
        )
        .unwrap();
        let merged = harmonic_spec(4, 3, 1.0, 1.0);
        let q = 5.5;
        let a = solve(&split, q, &SolveOptions::default()).unwrap();
        let b = solve(&merged, q, &SolveOptions::default()).unwrap();
        assert!((a.energy - b.energy).abs() < 1e-12 * b.energy);
        assert!((a.r0 - b.r0).abs() < 1e-12 * b.r0);
    }

    #[test]
    fn length_scale_override_is_honoured() {
        let spec = harmonic_spec(2, 2, 1.0, 0.5);
        let opts = SolveOptions {
            length_scale: Some(1.0),
            ..SolveOptions::default()
        };
        let sol = solve(&spec, 1.5, &opts).unwrap();
        assert!((sol.energy - 1.5 * 2.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn solve_state_validates_shape() {
        let spec = harmonic_spec(3, 2, 1.0, 1.0);
        let state = QuantumState::ground(4, 3).unwrap();
        assert!(solve_state(&spec, &state, &SolveOptions::default()).is_err());
        let state = QuantumState::ground(3, 3).unwrap();
        let sol = solve_state(&spec, &state, &SolveOptions::default()).unwrap();
        assert!(sol.energy > 0.0);
    }
}
