//! Critical coupling constants for attractive wells V = -g v(x).
//!
//! For kinetic laws T = c p^alpha, the coupling below which no state with
//! global quantum number Q is bound follows from setting E = 0 in the
//! stationarity system:
//!
//! ```text
//! g_c = 1/(x0^alpha v(x0)) * N/C(N,K) * (C(K,2)/C(N,2))^(alpha/2) * c Q^alpha
//! 0   = x0 v'(x0) + alpha v(x0)
//! ```
//!
//! The root x0 of the shape equation depends only on the profile v and on
//! alpha. g_c inherits the variational character of the underlying energy:
//! an upper-bound energy gives an upper bound on the genuine critical
//! coupling.

use alloc::vec::Vec;

use crate::bracket::{log_grid, scan_roots};
use crate::law::{
    combine_curvatures, BoundCharacter, ClassifyOptions, KineticLaw, PotentialLaw, WellShape,
};
use crate::math::powf;
use crate::model::binomial;
use crate::{Error, Result};

const SHAPE_WINDOW: (f64, f64) = (1e-8, 1e8);
const SHAPE_SCAN_POINTS: usize = 400;

/// Critical coupling for one state.
#[derive(Debug, Clone)]
pub struct CriticalResult {
    /// Selected root of the shape equation.
    pub shape_root: f64,
    /// Critical coupling g_c (energy units).
    pub coupling: f64,
    /// Global quantum number the result refers to.
    pub state_q: f64,
    /// Variational character inherited from the energy classifier;
    /// `Indeterminate` when the shape carries no curvature information.
    pub character: BoundCharacter,
    /// Every root of the shape equation found in the scan window. More than
    /// one entry means the profile is not certified single-welled; the root
    /// giving the smallest g_c is the one selected.
    pub all_shape_roots: Vec<f64>,
}

impl CriticalResult {
    pub fn has_multiple_critical_points(&self) -> bool {
        self.all_shape_roots.len() > 1
    }
}

/// All roots of `x v'(x) + alpha v(x) = 0` in the scan window.
///
/// The profile is sampled for positivity along the way; grid points where it
/// has underflowed to zero are ignored.
pub fn shape_roots(shape: &WellShape, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain {
            context: "kinetic exponent must be positive",
            value: alpha,
        });
    }
    let grid = log_grid(SHAPE_WINDOW.0, SHAPE_WINDOW.1, SHAPE_SCAN_POINTS);
    for &x in &grid {
        let v = (shape.value)(x);
        if v < 0.0 {
            return Err(Error::Domain {
                context: "well profile must be positive on the scan grid",
                value: x,
            });
        }
    }
    let residual = |x: f64| {
        let v = (shape.value)(x);
        if v == 0.0 {
            // profile underflowed; no usable information here
            f64::NAN
        } else {
            x * (shape.slope)(x) + alpha * v
        }
    };
    let roots = scan_roots(residual, &grid, 1e-12, 200)?;
    Ok(roots.into_iter().map(|r| r.root).collect())
}

/// The root of the shape equation selected for the critical coupling: the
/// one maximising x^alpha v(x), i.e. minimising g_c.
pub fn shape_root(shape: &WellShape, alpha: f64) -> Result<f64> {
    let roots = shape_roots(shape, alpha)?;
    select_root(shape, alpha, &roots)
}

fn select_root(shape: &WellShape, alpha: f64, roots: &[f64]) -> Result<f64> {
    roots
        .iter()
        .copied()
        .max_by(|&a, &b| {
            let fa = powf(a, alpha) * (shape.value)(a);
            let fb = powf(b, alpha) * (shape.value)(b);
            fa.total_cmp(&fb)
        })
        .ok_or(Error::NoCriticalPoint {
            window: SHAPE_WINDOW,
        })
}

/// Critical coupling constant for an N-body system with kinetic law
/// T = coefficient * p^alpha and one K-body attractive well of profile v.
pub fn critical_coupling(
    n: u32,
    arity: u32,
    coefficient: f64,
    alpha: f64,
    shape: &WellShape,
    q: f64,
) -> Result<CriticalResult> {
    if arity < 2 || arity > n {
        return Err(Error::Domain {
            context: "need 2 <= K <= N",
            value: f64::from(arity),
        });
    }
    for (context, v) in [
        ("kinetic coefficient must be positive", coefficient),
        ("global quantum number must be positive", q),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain { context, value: v });
        }
    }
    let all_shape_roots = shape_roots(shape, alpha)?;
    let x0 = select_root(shape, alpha, &all_shape_roots)?;
    let count = binomial(n, arity)? as f64;
    let ratio2 = binomial(arity, 2)? as f64 / binomial(n, 2)? as f64;
    let coupling = 1.0 / (powf(x0, alpha) * (shape.value)(x0)) * f64::from(n) / count
        * powf(ratio2, alpha / 2.0)
        * coefficient
        * powf(q, alpha);

    // character of the underlying energy: kinetic law plus the well at unit
    // coupling (the sign pattern of b'' does not depend on g)
    let character = well_character(coefficient, alpha, shape);

    Ok(CriticalResult {
        shape_root: x0,
        coupling,
        state_q: q,
        character,
        all_shape_roots,
    })
}

fn well_character(coefficient: f64, alpha: f64, shape: &WellShape) -> BoundCharacter {
    let opts = ClassifyOptions::default();
    let kinetic = match KineticLaw::power(coefficient, alpha) {
        Ok(k) => k,
        Err(_) => return BoundCharacter::Indeterminate,
    };
    let Ok(kin_class) = kinetic.curvature_class(&opts) else {
        return BoundCharacter::Indeterminate;
    };
    let well = match PotentialLaw::attractive_well(1.0, shape.clone()) {
        Ok(w) => w,
        Err(_) => return BoundCharacter::Indeterminate,
    };
    match well.curvature_class(&opts) {
        Ok(well_class) => combine_curvatures([kin_class, well_class]),
        Err(_) => BoundCharacter::Indeterminate,
    }
}
