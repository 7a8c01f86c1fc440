//! Semiclassical picture: N particles at the vertices of a regular simplex.
//!
//! The stationarity equations describe N particles of momentum p0 sitting at
//! the vertices of a regular simplex in N-1 dimensions whose circumscribed
//! sphere has radius r0/N. All edges share the length e = r0/sqrt(C(N,2)),
//! every K-subset has quadratic radius sqrt(C(K,2)/C(N,2)) r0 (exactly the
//! argument of the K-body potential), and the summed potential forces on a
//! vertex are purely radial, reproducing the potential side of the
//! stationarity condition.

use alloc::vec::Vec;

use crate::math::sqrt;
use crate::model::{binomial, SystemSpec};
use crate::{Error, Result};

/// Brute-force subset enumeration is capped here; the analytic formulas
/// carry beyond.
pub const MAX_COORDINATE_N: u32 = 12;

/// Explicit coordinates of the regular simplex configuration.
#[derive(Debug, Clone)]
pub struct SimplexConfig {
    n: u32,
    radius_parameter: f64,
    coordinates: Vec<Vec<f64>>,
}

impl SimplexConfig {
    pub fn n_vertices(&self) -> u32 {
        self.n
    }

    /// The r0 the configuration was built for.
    pub fn radius_parameter(&self) -> f64 {
        self.radius_parameter
    }

    /// N points in N-1 dimensions, centred on the origin.
    pub fn coordinates(&self) -> &[Vec<f64>] {
        &self.coordinates
    }

    /// Edge length r0/sqrt(C(N,2)).
    pub fn edge_length(&self) -> f64 {
        self.radius_parameter / sqrt(binomial(self.n, 2).expect("validated") as f64)
    }

    /// Circumscribed-sphere radius r0/N.
    pub fn circumradius(&self) -> f64 {
        self.radius_parameter / f64::from(self.n)
    }
}

/// Builds the regular simplex with N vertices in N-1 dimensions, centred and
/// scaled so the circumradius is r0/N.
///
/// Coordinates come from projecting the standard basis of R^N onto the
/// hyperplane orthogonal to (1,...,1) in an orthonormal (Helmert) frame, so
/// the orientation is deterministic.
pub fn build_simplex(n: u32, r0: f64) -> Result<SimplexConfig> {
    if n < 2 {
        return Err(Error::InvalidSystem("a simplex needs at least 2 vertices"));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Domain {
            context: "simplex radius parameter must be positive",
            value: r0,
        });
    }
    let nf = f64::from(n);
    let scale = r0 / sqrt(nf * (nf - 1.0));
    let dim = (n - 1) as usize;
    let mut coordinates = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let mut point = Vec::with_capacity(dim);
        for k in 1..=dim {
            let norm = sqrt((k * (k + 1)) as f64);
            let component = if i < k {
                1.0 / norm
            } else if i == k {
                -(k as f64) / norm
            } else {
                0.0
            };
            point.push(scale * component);
        }
        coordinates.push(point);
    }
    Ok(SimplexConfig {
        n,
        radius_parameter: r0,
        coordinates,
    })
}

/// Quadratic radius of any K-subset of the simplex:
/// sqrt(C(K,2)/C(N,2)) r0.
pub fn subset_radius(n: u32, k: u32, r0: f64) -> Result<f64> {
    if k < 2 || k > n {
        return Err(Error::Domain {
            context: "need 2 <= K <= N",
            value: f64::from(k),
        });
    }
    Ok(sqrt(binomial(k, 2)? as f64 / binomial(n, 2)? as f64) * r0)
}

/// Cosine of the angle between an edge at a vertex and the radial direction
/// through that vertex: N / (2 sqrt(C(N,2))).
pub fn projection_cosine(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain {
            context: "need N >= 2",
            value: f64::from(n),
        });
    }
    Ok(f64::from(n) / (2.0 * sqrt(binomial(n, 2)? as f64)))
}

/// Radial force magnitude per K-body term.
#[derive(Debug, Clone, Copy)]
pub struct TermRadialForce {
    pub arity: u32,
    /// C(N,K) sqrt(C(K,2)/C(N,2)) V'(sqrt(C(K,2)/C(N,2)) r0): the total
    /// radial force a single particle receives from this term. Multiplied by
    /// r0 and summed with the one-body piece it is the potential side of the
    /// stationarity condition.
    pub force: f64,
}

/// Total radial force on one particle, per K-body term of the system.
pub fn total_radial_force(spec: &SystemSpec, r0: f64) -> Result<Vec<TermRadialForce>> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Domain {
            context: "radius must be positive",
            value: r0,
        });
    }
    let mut out = Vec::with_capacity(spec.many_body().len());
    for term in spec.many_body() {
        let count = binomial(spec.n_particles(), term.arity)? as f64;
        let ratio = sqrt(binomial(term.arity, 2)? as f64 / binomial(spec.n_particles(), 2)? as f64);
        out.push(TermRadialForce {
            arity: term.arity,
            force: count * ratio * term.law.derivative(ratio * r0)?,
        });
    }
    Ok(out)
}

/// Deviations between the analytic formulas and explicit coordinate
/// computations, one record per K-body term.
#[derive(Debug, Clone, Copy)]
pub struct SimplexCheck {
    pub arity: u32,
    /// max |distance(i,j) - e| over all pairs, relative to e.
    pub edge_deviation: f64,
    /// max | |v_i| - r0/N |, relative to r0/N.
    pub circumradius_deviation: f64,
    /// max |centroid component|, relative to r0.
    pub centroid_deviation: f64,
    /// max over K-subsets of |coordinate subset radius - analytic|, relative.
    pub subset_radius_deviation: f64,
    /// max |coordinate edge/radial cosine - N/(2 sqrt(C(N,2)))|.
    pub cosine_deviation: f64,
    /// |coordinate radial force - analytic| / |analytic|.
    pub radial_force_deviation: f64,
    /// max tangential component of the summed force, relative to the radial
    /// force magnitude.
    pub tangential_residual: f64,
}

/// Runs every subset of size k of {0, .., n-1} through `f`.
pub(crate) fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        f(&indices);
        // advance to the next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if indices[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Verifies the semiclassical identities on explicit coordinates for every
/// K-body term of `spec` at radius parameter `r0`. Capped at N <= 12 by the
/// combinatorial growth of the subset enumeration.
pub fn coordinate_check(spec: &SystemSpec, r0: f64) -> Result<Vec<SimplexCheck>> {
    let n = spec.n_particles();
    if n > MAX_COORDINATE_N {
        return Err(Error::Domain {
            context: "coordinate verification is capped at N <= 12",
            value: f64::from(n),
        });
    }
    let simplex = build_simplex(n, r0)?;
    let coords = simplex.coordinates();
    let nu = n as usize;
    let dim = nu - 1;
    let edge = simplex.edge_length();
    let circum = simplex.circumradius();

    // geometry shared by all terms
    let mut edge_deviation: f64 = 0.0;
    for i in 0..nu {
        for j in i + 1..nu {
            let d2: f64 = (0..dim)
                .map(|c| (coords[i][c] - coords[j][c]) * (coords[i][c] - coords[j][c]))
                .sum();
            edge_deviation = edge_deviation.max((sqrt(d2) - edge).abs() / edge);
        }
    }
    let mut circumradius_deviation: f64 = 0.0;
    for p in coords {
        let r = sqrt(dot(p, p));
        circumradius_deviation = circumradius_deviation.max((r - circum).abs() / circum);
    }
    let mut centroid_deviation: f64 = 0.0;
    for c in 0..dim {
        let s: f64 = coords.iter().map(|p| p[c]).sum();
        centroid_deviation = centroid_deviation.max((s / nu as f64).abs() / r0);
    }
    let cos_expected = projection_cosine(n)?;
    let mut cosine_deviation: f64 = 0.0;
    for i in 0..nu {
        let ri = sqrt(dot(&coords[i], &coords[i]));
        for j in 0..nu {
            if i == j {
                continue;
            }
            let diff: Vec<f64> = (0..dim).map(|c| coords[i][c] - coords[j][c]).collect();
            let cos = dot(&diff, &coords[i]) / (sqrt(dot(&diff, &diff)) * ri);
            cosine_deviation = cosine_deviation.max((cos - cos_expected).abs());
        }
    }

    let mut out = Vec::with_capacity(spec.many_body().len());
    let analytic_forces = total_radial_force(spec, r0)?;
    for (term, analytic) in spec.many_body().iter().zip(&analytic_forces) {
        let k = term.arity as usize;
        let analytic_radius = subset_radius(n, term.arity, r0)?;
        let analytic_force = analytic.force;

        let mut subset_radius_deviation: f64 = 0.0;
        // summed potential force on each vertex:
        // F_i = -sum_{subsets containing i} V'(r_S) sum_{j in S, j != i} (v_i - v_j)/r_S
        let mut forces = alloc::vec![alloc::vec![0.0f64; dim]; nu];
        let mut check_err: Option<Error> = None;
        for_each_subset(nu, k, |subset| {
            if check_err.is_some() {
                return;
            }
            let mut sum2 = 0.0;
            for (a, &i) in subset.iter().enumerate() {
                for &j in subset.iter().skip(a + 1) {
                    sum2 += (0..dim)
                        .map(|c| (coords[i][c] - coords[j][c]) * (coords[i][c] - coords[j][c]))
                        .sum::<f64>();
                }
            }
            let r_s = sqrt(sum2);
            subset_radius_deviation =
                subset_radius_deviation.max((r_s - analytic_radius).abs() / analytic_radius);
            let slope = match term.law.derivative(r_s) {
                Ok(s) => s,
                Err(e) => {
                    check_err = Some(e);
                    return;
                }
            };
            for &i in subset {
                for &j in subset {
                    if i == j {
                        continue;
                    }
                    for c in 0..dim {
                        forces[i][c] -= slope * (coords[i][c] - coords[j][c]) / r_s;
                    }
                }
            }
        });
        if let Some(e) = check_err {
            return Err(e);
        }

        let force_scale = analytic_force.abs().max(1e-300);
        let mut radial_force_deviation: f64 = 0.0;
        let mut tangential_residual: f64 = 0.0;
        for i in 0..nu {
            let ri = sqrt(dot(&coords[i], &coords[i]));
            // inward radial component of the summed force
            let inward = -dot(&forces[i], &coords[i]) / ri;
            radial_force_deviation =
                radial_force_deviation.max((inward - analytic_force).abs() / force_scale);
            let mut tang2 = 0.0;
            for c in 0..dim {
                let radial_part = -inward * coords[i][c] / ri;
                let t = forces[i][c] - radial_part;
                tang2 += t * t;
            }
            tangential_residual = tangential_residual.max(sqrt(tang2) / force_scale);
        }

        out.push(SimplexCheck {
            arity: term.arity,
            edge_deviation,
            circumradius_deviation,
            centroid_deviation,
            subset_radius_deviation,
            cosine_deviation,
            radial_force_deviation,
            tangential_residual,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{KineticLaw, PotentialLaw};
    use crate::model::ManyBodyTerm;
    use crate::solver::stationarity_residual;
    use alloc::vec;

    #[test]
    fn two_vertices_on_a_line() {
        let s = build_simplex(2, 1.0).unwrap();
        let c = s.coordinates();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].len(), 1);
        assert!((c[0][0] - 0.5).abs() < 1e-15);
        assert!((c[1][0] + 0.5).abs() < 1e-15);
        assert!((s.edge_length() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle_edge() {
        let s = build_simplex(3, 1.0).unwrap();
        assert!((s.edge_length() - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tetrahedron_edge() {
        let s = build_simplex(4, 2.0).unwrap();
        assert!((s.edge_length() - 2.0 / 6.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn subset_radius_examples() {
        assert!((subset_radius(4, 3, 1.0).unwrap() - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((subset_radius(5, 5, 3.0).unwrap() - 3.0).abs() < 1e-15);
        // K = 2 recovers the edge length
        let n = 7;
        let e = 1.0 / (binomial(n, 2).unwrap() as f64).sqrt();
        assert!((subset_radius(n, 2, 1.0).unwrap() - e).abs() < 1e-15);
    }

    #[test]
    fn projection_cosine_examples() {
        assert!((projection_cosine(2).unwrap() - 1.0).abs() < 1e-15);
        assert!((projection_cosine(3).unwrap() - 3.0f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((projection_cosine(4).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn harmonic_three_body_force_value() {
        let spec = SystemSpec::new(
            3,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(3, PotentialLaw::power(1.0, 2.0).unwrap())],
        )
        .unwrap();
        let f = total_radial_force(&spec, 1.0).unwrap();
        assert_eq!(f.len(), 1);
        assert!((f[0].force - 2.0).abs() < 1e-14);
    }

    #[test]
    fn force_times_radius_matches_residual_potential_part() {
        let spec = SystemSpec::new(
            5,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            Some(PotentialLaw::power(0.3, 2.0).unwrap()),
            vec![
                ManyBodyTerm::new(2, PotentialLaw::power(1.0, 1.0).unwrap()),
                ManyBodyTerm::new(4, PotentialLaw::exponential(2.0, 0.5, 1.0).unwrap()),
            ],
        )
        .unwrap();
        let q = 6.0;
        let r0 = 1.7;
        let forces = total_radial_force(&spec, r0).unwrap();
        let potential_side: f64 = r0 * forces.iter().map(|t| t.force).sum::<f64>()
            + r0 * spec.one_body().unwrap().derivative(r0 / 5.0).unwrap();
        let kinetic_side = 5.0 * (q / r0) * spec.kinetic().derivative(q / r0).unwrap();
        let residual = stationarity_residual(&spec, q, r0).unwrap();
        assert!(((kinetic_side - potential_side) - residual).abs() < 1e-12 * kinetic_side.abs());
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut count = 0u64;
        for_each_subset(6, 3, |s| {
            assert_eq!(s.len(), 3);
            count += 1;
        });
        assert_eq!(count, binomial(6, 3).unwrap());
        let mut count = 0u64;
        for_each_subset(5, 5, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn coordinate_check_harmonic() {
        let spec = SystemSpec::new(
            6,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(4, PotentialLaw::power(1.0, 2.0).unwrap())],
        )
        .unwrap();
        let checks = coordinate_check(&spec, 1.3).unwrap();
        let c = &checks[0];
        assert!(c.edge_deviation < 1e-12);
        assert!(c.circumradius_deviation < 1e-12);
        assert!(c.centroid_deviation < 1e-12);
        assert!(c.subset_radius_deviation < 1e-12);
        assert!(c.cosine_deviation < 1e-12);
        assert!(c.radial_force_deviation < 1e-12);
        assert!(c.tangential_residual < 1e-12);
    }

    #[test]
    fn coordinate_check_respects_cap() {
        let spec = SystemSpec::new(
            20,
            3,
            KineticLaw::power(0.5, 2.0).unwrap(),
            None,
            vec![ManyBodyTerm::new(2, PotentialLaw::power(1.0, 2.0).unwrap())],
        )
        .unwrap();
        assert!(coordinate_check(&spec, 1.0).is_err());
    }
}
