//! Kinetic and potential laws, their derivatives, squared-argument forms and
//! the convexity-based bound-character classifier.
//!
//! Every law exposes (where possible) the function b with `V(x) = b(x^2)`.
//! The auxiliary (tangent) laws used by the method are quadratic in x, i.e.
//! affine in y = x^2; the comparison theorem then turns the curvature of b
//! into the variational character of the eigenvalue: all b concave gives an
//! upper bound, all convex a lower bound, all affine the exact value.

use alloc::sync::Arc;
use core::fmt;

use crate::math::{exp, powf, sqrt};
use crate::model::SystemSpec;
use crate::{Error, Result};

/// Shared evaluable used by user-supplied laws.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Squared-argument form of a user-supplied law: b(y) and b''(y).
#[derive(Clone)]
pub struct SquaredForm {
    pub value: RealFn,
    pub second: RealFn,
}

impl fmt::Debug for SquaredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SquaredForm { .. }")
    }
}

/// User-supplied law given by closures for the value and first derivative,
/// optionally with its squared-argument form for classification.
#[derive(Clone)]
pub struct CustomLaw {
    pub value: RealFn,
    pub derivative: RealFn,
    pub squared_form: Option<SquaredForm>,
}

impl fmt::Debug for CustomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomLaw { .. }")
    }
}

/// Dimensionless well profile v(x) for attractive potentials -g v(x).
/// `curvature` (v'') is optional; without it the bound character of systems
/// containing the well cannot be classified.
#[derive(Clone)]
pub struct WellShape {
    pub value: RealFn,
    pub slope: RealFn,
    pub curvature: Option<RealFn>,
}

impl fmt::Debug for WellShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("WellShape { .. }")
    }
}

/// Kinetic energy law T(p).
#[derive(Debug, Clone)]
pub enum KineticLaw {
    /// T(p) = coefficient * p^exponent with both parameters positive, so that
    /// T is positive and growing. exponent = 2 is the non-relativistic case,
    /// exponent = 1 the ultra-relativistic one.
    Power {
        coefficient: f64,
        exponent: f64,
    },
    Custom(CustomLaw),
}

/// Potential law V(x).
#[derive(Debug, Clone)]
pub enum PotentialLaw {
    /// V(x) = strength * sign(exponent) * x^exponent, strength > 0.
    Power {
        strength: f64,
        exponent: f64,
    },
    /// V(x) = -depth * exp(-rate * x^exponent), all parameters positive.
    Exponential {
        depth: f64,
        rate: f64,
        exponent: f64,
    },
    /// V(x) = -coupling * v(x) for a well profile v vanishing at infinity.
    AttractiveWell {
        coupling: f64,
        shape: WellShape,
    },
    Custom(CustomLaw),
}

/// Variational character of the envelope-theory eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCharacter {
    UpperBound,
    LowerBound,
    /// Every squared-argument form is affine (the harmonic case).
    Exact,
    Indeterminate,
}

impl fmt::Display for BoundCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundCharacter::UpperBound => "upper",
            BoundCharacter::LowerBound => "lower",
            BoundCharacter::Exact => "exact",
            BoundCharacter::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// Sign class of b'' over the sampled domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    /// b'' identically zero: b affine.
    Zero,
    /// b'' <= 0 everywhere: b concave.
    NonPositive,
    /// b'' >= 0 everywhere: b convex.
    NonNegative,
    Mixed,
}

fn check_positive(context: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { context, value })
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            context: "law argument must be positive",
            value: x,
        })
    }
}

impl KineticLaw {
    pub fn power(coefficient: f64, exponent: f64) -> Result<Self> {
        check_positive("kinetic coefficient must be positive", coefficient)?;
        check_positive("kinetic exponent must be positive", exponent)?;
        Ok(KineticLaw::Power {
            coefficient,
            exponent,
        })
    }

    pub fn custom(value: RealFn, derivative: RealFn, squared_form: Option<SquaredForm>) -> Self {
        KineticLaw::Custom(CustomLaw {
            value,
            derivative,
            squared_form,
        })
    }

    /// T(p).
    pub fn eval(&self, p: f64) -> Result<f64> {
        check_argument(p)?;
        Ok(match self {
            KineticLaw::Power {
                coefficient,
                exponent,
            } => coefficient * powf(p, *exponent),
            KineticLaw::Custom(c) => (c.value)(p),
        })
    }

    /// T'(p).
    pub fn derivative(&self, p: f64) -> Result<f64> {
        check_argument(p)?;
        Ok(match self {
            KineticLaw::Power {
                coefficient,
                exponent,
            } => coefficient * exponent * powf(p, exponent - 1.0),
            KineticLaw::Custom(c) => (c.derivative)(p),
        })
    }

    /// b_T(y) with T(p) = b_T(p^2).
    pub fn squared_form(&self, y: f64) -> Result<f64> {
        check_argument(y)?;
        match self {
            KineticLaw::Power {
                coefficient,
                exponent,
            } => Ok(coefficient * powf(y, exponent / 2.0)),
            KineticLaw::Custom(c) => match &c.squared_form {
                Some(form) => Ok((form.value)(y)),
                None => Err(Error::UnsupportedSquaredForm),
            },
        }
    }

    /// b_T''(y).
    pub fn squared_form_second(&self, y: f64) -> Result<f64> {
        check_argument(y)?;
        match self {
            KineticLaw::Power {
                coefficient,
                exponent,
            } => {
                let s = exponent / 2.0;
                Ok(coefficient * s * (s - 1.0) * powf(y, s - 2.0))
            }
            KineticLaw::Custom(c) => match &c.squared_form {
                Some(form) => Ok((form.second)(y)),
                None => Err(Error::UnsupportedSquaredForm),
            },
        }
    }

    pub(crate) fn curvature_class(&self, grid: &ClassifyOptions) -> Result<Curvature> {
        match self {
            KineticLaw::Power { exponent, .. } => Ok(power_curvature(*exponent)),
            KineticLaw::Custom(_) => sample_curvature(|y| self.squared_form_second(y), grid),
        }
    }
}

impl PotentialLaw {
    pub fn power(strength: f64, exponent: f64) -> Result<Self> {
        check_positive("power-law strength must be positive", strength)?;
        if exponent == 0.0 || !exponent.is_finite() {
            return Err(Error::Domain {
                context: "power-law exponent must be nonzero",
                value: exponent,
            });
        }
        Ok(PotentialLaw::Power { strength, exponent })
    }

    pub fn exponential(depth: f64, rate: f64, exponent: f64) -> Result<Self> {
        check_positive("exponential depth must be positive", depth)?;
        check_positive("exponential rate must be positive", rate)?;
        check_positive("exponential exponent must be positive", exponent)?;
        Ok(PotentialLaw::Exponential {
            depth,
            rate,
            exponent,
        })
    }

    pub fn attractive_well(coupling: f64, shape: WellShape) -> Result<Self> {
        check_positive("well coupling must be positive", coupling)?;
        Ok(PotentialLaw::AttractiveWell { coupling, shape })
    }

    pub fn custom(value: RealFn, derivative: RealFn, squared_form: Option<SquaredForm>) -> Self {
        PotentialLaw::Custom(CustomLaw {
            value,
            derivative,
            squared_form,
        })
    }

    /// V(x).
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_argument(x)?;
        Ok(match self {
            PotentialLaw::Power { strength, exponent } => {
                strength * exponent.signum() * powf(x, *exponent)
            }
            PotentialLaw::Exponential {
                depth,
                rate,
                exponent,
            } => -depth * exp(-rate * powf(x, *exponent)),
            PotentialLaw::AttractiveWell { coupling, shape } => -coupling * (shape.value)(x),
            PotentialLaw::Custom(c) => (c.value)(x),
        })
    }

    /// V'(x).
    pub fn derivative(&self, x: f64) -> Result<f64> {
        check_argument(x)?;
        Ok(match self {
            PotentialLaw::Power { strength, exponent } => {
                // sign(b) * b = |b|
                strength * exponent.abs() * powf(x, exponent - 1.0)
            }
            PotentialLaw::Exponential {
                depth,
                rate,
                exponent,
            } => {
                depth * rate * exponent * powf(x, exponent - 1.0) * exp(-rate * powf(x, *exponent))
            }
            PotentialLaw::AttractiveWell { coupling, shape } => -coupling * (shape.slope)(x),
            PotentialLaw::Custom(c) => (c.derivative)(x),
        })
    }

    /// b_V(y) with V(x) = b_V(x^2).
    pub fn squared_form(&self, y: f64) -> Result<f64> {
        check_argument(y)?;
        match self {
            PotentialLaw::Power { strength, exponent } => {
                Ok(strength * exponent.signum() * powf(y, exponent / 2.0))
            }
            PotentialLaw::Exponential {
                depth,
                rate,
                exponent,
            } => Ok(-depth * exp(-rate * powf(y, exponent / 2.0))),
            PotentialLaw::AttractiveWell { coupling, shape } => {
                Ok(-coupling * (shape.value)(sqrt(y)))
            }
            PotentialLaw::Custom(c) => match &c.squared_form {
                Some(form) => Ok((form.value)(y)),
                None => Err(Error::UnsupportedSquaredForm),
            },
        }
    }

    /// b_V''(y).
    pub fn squared_form_second(&self, y: f64) -> Result<f64> {
        check_argument(y)?;
        match self {
            PotentialLaw::Power { strength, exponent } => {
                let s = exponent / 2.0;
                Ok(strength * exponent.signum() * s * (s - 1.0) * powf(y, s - 2.0))
            }
            PotentialLaw::Exponential {
                depth,
                rate,
                exponent,
            } => {
                let s = exponent / 2.0;
                let ys = powf(y, s);
                Ok(depth
                    * rate
                    * s
                    * powf(y, s - 2.0)
                    * exp(-rate * ys)
                    * (s - 1.0 - rate * s * ys))
            }
            PotentialLaw::AttractiveWell { coupling, shape } => match &shape.curvature {
                Some(curv) => {
                    let x = sqrt(y);
                    Ok(-coupling * (x * curv(x) - (shape.slope)(x)) / (4.0 * x * x * x))
                }
                None => Err(Error::UnsupportedSquaredForm),
            },
            PotentialLaw::Custom(c) => match &c.squared_form {
                Some(form) => Ok((form.second)(y)),
                None => Err(Error::UnsupportedSquaredForm),
            },
        }
    }

    pub(crate) fn curvature_class(&self, grid: &ClassifyOptions) -> Result<Curvature> {
        match self {
            PotentialLaw::Power { exponent, .. } => Ok(power_curvature(*exponent)),
            PotentialLaw::Exponential { exponent, .. } => {
                // b(y) = -a exp(-b y^(g/2)) is concave in y exactly when g <= 2;
                // beyond that the sign of b'' changes across the domain.
                if *exponent <= 2.0 {
                    Ok(Curvature::NonPositive)
                } else {
                    Ok(Curvature::Mixed)
                }
            }
            PotentialLaw::AttractiveWell { .. } | PotentialLaw::Custom(_) => {
                sample_curvature(|y| self.squared_form_second(y), grid)
            }
        }
    }
}

/// b(y) = c y^(e/2) is concave for e < 2, affine for e = 2, convex beyond.
/// For potentials the sign prefactor sign(e) keeps the same rule: negative
/// exponents give sign(e) * (e/2)(e/2 - 1) < 0.
fn power_curvature(exponent: f64) -> Curvature {
    if exponent == 2.0 {
        Curvature::Zero
    } else if exponent < 2.0 {
        Curvature::NonPositive
    } else {
        Curvature::NonNegative
    }
}

/// Sampling grid for curvature classification of laws without an analytic
/// sign rule.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub grid_points: usize,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            grid_points: 200,
            y_min: 1e-6,
            y_max: 1e6,
        }
    }
}

fn sample_curvature<F: Fn(f64) -> Result<f64>>(
    second: F,
    opts: &ClassifyOptions,
) -> Result<Curvature> {
    let n = opts.grid_points.max(2);
    let ratio = opts.y_max / opts.y_min;
    let mut any_pos = false;
    let mut any_neg = false;
    for i in 0..n {
        let y = opts.y_min * powf(ratio, i as f64 / (n - 1) as f64);
        let s = second(y)?;
        if !s.is_finite() {
            return Ok(Curvature::Mixed);
        }
        let tol = 1e-12 * (1.0 + s.abs());
        if s > tol {
            any_pos = true;
        } else if s < -tol {
            any_neg = true;
        }
        if any_pos && any_neg {
            return Ok(Curvature::Mixed);
        }
    }
    Ok(match (any_pos, any_neg) {
        (false, false) => Curvature::Zero,
        (true, false) => Curvature::NonNegative,
        (false, true) => Curvature::NonPositive,
        (true, true) => Curvature::Mixed,
    })
}

pub(crate) fn combine_curvatures<I: IntoIterator<Item = Curvature>>(classes: I) -> BoundCharacter {
    let mut all_zero = true;
    let mut upper_ok = true;
    let mut lower_ok = true;
    for c in classes {
        match c {
            Curvature::Zero => {}
            Curvature::NonPositive => {
                all_zero = false;
                lower_ok = false;
            }
            Curvature::NonNegative => {
                all_zero = false;
                upper_ok = false;
            }
            Curvature::Mixed => {
                all_zero = false;
                upper_ok = false;
                lower_ok = false;
            }
        }
    }
    if all_zero {
        BoundCharacter::Exact
    } else if upper_ok {
        BoundCharacter::UpperBound
    } else if lower_ok {
        BoundCharacter::LowerBound
    } else {
        BoundCharacter::Indeterminate
    }
}

/// Variational character of the eigenvalue for this system, from the
/// curvature of every squared-argument form (default sampling grid).
pub fn classify_bound_character(spec: &SystemSpec) -> Result<BoundCharacter> {
    classify_bound_character_with(spec, &ClassifyOptions::default())
}

/// Same as [`classify_bound_character`] with an explicit sampling grid.
pub fn classify_bound_character_with(
    spec: &SystemSpec,
    opts: &ClassifyOptions,
) -> Result<BoundCharacter> {
    let mut classes = alloc::vec::Vec::new();
    classes.push(spec.kinetic().curvature_class(opts)?);
    if let Some(u) = spec.one_body() {
        classes.push(u.curvature_class(opts)?);
    }
    for term in spec.many_body() {
        classes.push(term.law.curvature_class(opts)?);
    }
    Ok(combine_curvatures(classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ManyBodyTerm;
    use alloc::vec;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn laws_and_specs_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<KineticLaw>();
        assert_send_sync::<PotentialLaw>();
        assert_send_sync::<SystemSpec>();
        assert_send_sync::<crate::solver::EtSolution>();
    }

    #[test]
    fn power_law_values() {
        let v = PotentialLaw::power(1.0, -1.0).unwrap();
        assert!(rel_close(v.eval(2.0).unwrap(), -0.5, 1e-15));
        assert!(rel_close(v.derivative(2.0).unwrap(), 0.25, 1e-15));
    }

    #[test]
    fn exponential_approaches_minus_depth_at_origin() {
        let v = PotentialLaw::exponential(1.0, 1.0, 1.0).unwrap();
        assert!(rel_close(v.eval(1e-12).unwrap(), -1.0, 1e-9));
    }

    #[test]
    fn linear_kinetic() {
        let t = KineticLaw::power(1.0, 1.0).unwrap();
        assert_eq!(t.eval(3.0).unwrap(), 3.0);
        assert_eq!(t.derivative(3.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        let v = PotentialLaw::power(1.0, 2.0).unwrap();
        assert!(v.eval(0.0).is_err());
        assert!(v.eval(-1.0).is_err());
    }

    #[test]
    fn squared_form_examples() {
        // harmonic kinetic: b(y) = y, b'' = 0
        let t = KineticLaw::power(1.0, 2.0).unwrap();
        assert!(rel_close(t.squared_form(3.7).unwrap(), 3.7, 1e-15));
        assert_eq!(t.squared_form_second(3.7).unwrap(), 0.0);

        // linear potential: b(y) = y^(1/2), b'' = -y^(-3/2)/4
        let v = PotentialLaw::power(1.0, 1.0).unwrap();
        assert!(rel_close(v.squared_form(4.0).unwrap(), 2.0, 1e-15));
        assert!(rel_close(
            v.squared_form_second(4.0).unwrap(),
            -0.25 / 8.0,
            1e-15
        ));
        assert!(v.squared_form_second(1.0).unwrap() < 0.0);

        // gaussian: b(y) = -e^{-y}, b'' = -e^{-y}
        let v = PotentialLaw::exponential(1.0, 1.0, 2.0).unwrap();
        let y: f64 = 1.3;
        let expect = -(-y).exp();
        assert!(rel_close(v.squared_form(y).unwrap(), expect, 1e-14));
        assert!(rel_close(v.squared_form_second(y).unwrap(), expect, 1e-14));
    }

    #[test]
    fn squared_form_matches_law_on_grid() {
        let laws = vec![
            PotentialLaw::power(2.0, -1.5).unwrap(),
            PotentialLaw::power(0.7, 3.0).unwrap(),
            PotentialLaw::exponential(1.3, 0.4, 1.7).unwrap(),
        ];
        for law in &laws {
            for i in 0..=60 {
                let x = 1e-3 * powf(1e6, i as f64 / 60.0);
                let direct = law.eval(x).unwrap();
                let via_b = law.squared_form(x * x).unwrap();
                assert!(
                    rel_close(direct, via_b, 1e-12),
                    "b(x^2) != V(x) at x = {x}: {direct} vs {via_b}"
                );
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let laws = vec![
            PotentialLaw::power(1.0, -1.0).unwrap(),
            PotentialLaw::power(1.0, 2.0).unwrap(),
            PotentialLaw::exponential(2.0, 0.5, 2.0).unwrap(),
        ];
        for law in &laws {
            for i in 0..=30 {
                let x = 1e-3 * powf(1e6, i as f64 / 30.0);
                let h = 1e-5 * x;
                let fd = (law.eval(x + h).unwrap() - law.eval(x - h).unwrap()) / (2.0 * h);
                let an = law.derivative(x).unwrap();
                assert!(
                    rel_close(fd, an, 1e-6),
                    "derivative mismatch at x = {x}: {an} vs fd {fd}"
                );
            }
        }
        let t = KineticLaw::power(0.5, 1.3).unwrap();
        let p = 2.7;
        let h = 1e-5 * p;
        let fd = (t.eval(p + h).unwrap() - t.eval(p - h).unwrap()) / (2.0 * h);
        assert!(rel_close(fd, t.derivative(p).unwrap(), 1e-6));
    }

    fn classify(kin_exp: f64, pot_exp: f64) -> BoundCharacter {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(1.0, kin_exp).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::power(1.0, pot_exp).unwrap(),
            )],
        )
        .unwrap();
        classify_bound_character(&spec).unwrap()
    }

    #[test]
    fn classifier_power_family() {
        assert_eq!(classify(2.0, 1.0), BoundCharacter::UpperBound);
        assert_eq!(classify(2.0, -1.0), BoundCharacter::UpperBound);
        assert_eq!(classify(2.0, 2.0), BoundCharacter::Exact);
        assert_eq!(classify(2.0, 4.0), BoundCharacter::LowerBound);
        assert_eq!(classify(1.0, 4.0), BoundCharacter::Indeterminate);
        assert_eq!(classify(3.0, 4.0), BoundCharacter::LowerBound);
    }

    #[test]
    fn classifier_exponential() {
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(
                2,
                PotentialLaw::exponential(1.0, 1.0, 2.0).unwrap(),
            )],
        )
        .unwrap();
        assert_eq!(
            classify_bound_character(&spec).unwrap(),
            BoundCharacter::UpperBound
        );
    }

    #[test]
    fn well_second_form_matches_exponential_law() {
        // -1 * e^{-x} expressed as a well must carry the same squared-form
        // data as the equivalent exponential law
        let well = PotentialLaw::attractive_well(
            1.0,
            WellShape {
                value: Arc::new(|x: f64| (-x).exp()),
                slope: Arc::new(|x: f64| -(-x).exp()),
                curvature: Some(Arc::new(|x: f64| (-x).exp())),
            },
        )
        .unwrap();
        let exp_law = PotentialLaw::exponential(1.0, 1.0, 1.0).unwrap();
        for i in 0..=40 {
            let y = 1e-3 * powf(1e6, i as f64 / 40.0);
            assert!(rel_close(
                well.squared_form(y).unwrap(),
                exp_law.squared_form(y).unwrap(),
                1e-13
            ));
            assert!(rel_close(
                well.squared_form_second(y).unwrap(),
                exp_law.squared_form_second(y).unwrap(),
                1e-13
            ));
        }
    }

    #[test]
    fn classifier_custom_sampled() {
        // custom law mirroring the linear potential: concave b
        let law = PotentialLaw::custom(
            Arc::new(|x| x),
            Arc::new(|_| 1.0),
            Some(SquaredForm {
                value: Arc::new(|y: f64| y.sqrt()),
                second: Arc::new(|y: f64| -0.25 * y.powf(-1.5)),
            }),
        );
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(2, law)],
        )
        .unwrap();
        assert_eq!(
            classify_bound_character(&spec).unwrap(),
            BoundCharacter::UpperBound
        );
    }

    #[test]
    fn classifier_rejects_opaque_custom() {
        let law = PotentialLaw::custom(Arc::new(|x| x), Arc::new(|_| 1.0), None);
        let spec = SystemSpec::new(
            2,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(2, law)],
        )
        .unwrap();
        assert_eq!(
            classify_bound_character(&spec),
            Err(Error::UnsupportedSquaredForm)
        );
    }
}
