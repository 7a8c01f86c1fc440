//! System definition, quantum numbers and exact combinatorics.

use alloc::vec::Vec;

use crate::law::{KineticLaw, PotentialLaw};
use crate::{Error, Result};

/// Largest argument for which `binomial` is exact in 64-bit arithmetic, and
/// therefore the largest supported particle count.
pub const MAX_PARTICLES: u32 = 64;

/// Binomial coefficient C(n, k), exact for n <= 64.
///
/// Uses the multiplicative scheme with interleaved division so every
/// intermediate value is itself a binomial coefficient.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if n > MAX_PARTICLES {
        return Err(Error::Domain {
            context: "binomial requires n <= 64",
            value: f64::from(n),
        });
    }
    if k > n {
        return Err(Error::Domain {
            context: "binomial requires k <= n",
            value: f64::from(k),
        });
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=u128::from(k) {
        // acc * (n - k + i) is at most C(n, i) * i <= C(64, 32) * 64 < 2^127
        acc = acc * (u128::from(n - k) + i) / i;
    }
    Ok(acc as u64)
}

/// Truth of the identity C(N,K) C(K,2) == C(N-2,K-2) C(N,2).
///
/// This is the combinatorial fact that lets a K-body quadratic term be
/// rewritten as a pairwise one; it must hold for every 2 <= K <= N.
pub fn combinatorial_identity_check(n: u32, k: u32) -> Result<bool> {
    if !(2..=n).contains(&k) {
        return Err(Error::Domain {
            context: "identity check requires 2 <= K <= N",
            value: f64::from(k),
        });
    }
    let lhs = u128::from(binomial(n, k)?) * u128::from(binomial(k, 2)?);
    let rhs = u128::from(binomial(n - 2, k - 2)?) * u128::from(binomial(n, 2)?);
    Ok(lhs == rhs)
}

/// One internal oscillator mode: radial quantum number n and orbital l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    pub radial: u32,
    pub orbital: u32,
}

impl Mode {
    pub fn new(radial: u32, orbital: u32) -> Self {
        Mode { radial, orbital }
    }
}

/// Quantum numbers of an N-body state: the N-1 internal modes plus the space
/// dimension. Solver routines consume only the derived global quantum number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumState {
    modes: Vec<Mode>,
    dimension: u32,
}

impl QuantumState {
    /// State with explicit internal modes. `modes` must hold N-1 entries for
    /// an N-particle system.
    pub fn new(modes: Vec<Mode>, dimension: u32) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidSystem(
                "a quantum state needs at least one internal mode (N >= 2)",
            ));
        }
        if dimension == 0 {
            return Err(Error::InvalidSystem("dimension must be >= 1"));
        }
        Ok(QuantumState { modes, dimension })
    }

    /// Ground state of `n_particles` particles: all modes at n = l = 0.
    pub fn ground(n_particles: u32, dimension: u32) -> Result<Self> {
        if n_particles < 2 {
            return Err(Error::InvalidSystem("need at least two particles"));
        }
        let modes = alloc::vec![Mode::new(0, 0); (n_particles - 1) as usize];
        QuantumState::new(modes, dimension)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Global quantum number Q = sum over modes of (2 n_i + l_i + D/2).
    pub fn global_quantum_number(&self) -> f64 {
        let integer_part: u64 = self
            .modes
            .iter()
            .map(|m| 2 * u64::from(m.radial) + u64::from(m.orbital))
            .sum();
        integer_part as f64 + self.modes.len() as f64 * f64::from(self.dimension) / 2.0
    }
}

/// One K-body interaction term of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct ManyBodyTerm {
    /// Number of particles K entering each interaction set, 2 <= K <= N.
    pub arity: u32,
    pub law: PotentialLaw,
}

impl ManyBodyTerm {
    pub fn new(arity: u32, law: PotentialLaw) -> Self {
        ManyBodyTerm { arity, law }
    }
}

/// Full system definition: particle count, dimension, kinetic law, optional
/// one-body potential (argument: distance to the centre of mass) and any
/// number of K-body potential terms.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    n_particles: u32,
    dimension: u32,
    kinetic: KineticLaw,
    one_body: Option<PotentialLaw>,
    many_body: Vec<ManyBodyTerm>,
}

impl SystemSpec {
    pub fn new(
        n_particles: u32,
        dimension: u32,
        kinetic: KineticLaw,
        one_body: Option<PotentialLaw>,
        many_body: Vec<ManyBodyTerm>,
    ) -> Result<Self> {
        if n_particles < 2 {
            return Err(Error::InvalidSystem("need at least two particles"));
        }
        if n_particles > MAX_PARTICLES {
            return Err(Error::InvalidSystem(
                "particle count exceeds the exact-combinatorics limit of 64",
            ));
        }
        if dimension == 0 {
            return Err(Error::InvalidSystem("dimension must be >= 1"));
        }
        if one_body.is_none() && many_body.is_empty() {
            return Err(Error::InvalidSystem(
                "at least one potential term is required",
            ));
        }
        for term in &many_body {
            if term.arity < 2 || term.arity > n_particles {
                return Err(Error::InvalidSystem(
                    "many-body arity must satisfy 2 <= K <= N",
                ));
            }
        }
        Ok(SystemSpec {
            n_particles,
            dimension,
            kinetic,
            one_body,
            many_body,
        })
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn kinetic(&self) -> &KineticLaw {
        &self.kinetic
    }

    pub fn one_body(&self) -> Option<&PotentialLaw> {
        self.one_body.as_ref()
    }

    pub fn many_body(&self) -> &[ManyBodyTerm] {
        &self.many_body
    }

    /// Ground state matching this system's particle count and dimension.
    pub fn ground_state(&self) -> QuantumState {
        QuantumState::ground(self.n_particles, self.dimension).expect("validated spec")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::KineticLaw;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(10, 0).unwrap(), 1);
        assert_eq!(binomial(23, 0).unwrap(), 1);
        assert_eq!(binomial(10, 5).unwrap(), 252);
        assert_eq!(binomial(64, 32).unwrap(), 1_832_624_140_942_590_534);
    }

    #[test]
    fn binomial_rejects_out_of_range() {
        assert!(binomial(65, 1).is_err());
        assert!(binomial(5, 6).is_err());
    }

    #[test]
    fn pascal_rule_holds() {
        for n in 2..=64u32 {
            for k in 1..n {
                let lhs = binomial(n, k).unwrap();
                let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
                assert_eq!(lhs, rhs, "Pascal rule failed at ({n}, {k})");
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(combinatorial_identity_check(5, 3).unwrap());
        assert!(combinatorial_identity_check(2, 2).unwrap());
        assert!(combinatorial_identity_check(8, 4).unwrap());
    }

    #[test]
    fn identity_exhaustive_to_30() {
        for n in 2..=30u32 {
            for k in 2..=n {
                assert!(
                    combinatorial_identity_check(n, k).unwrap(),
                    "identity failed at ({n}, {k})"
                );
            }
        }
    }

    #[test]
    fn global_quantum_number_examples() {
        // three particles in D = 3, all modes in the ground state
        let s = QuantumState::ground(3, 3).unwrap();
        assert_eq!(s.global_quantum_number(), 3.0);

        // two particles in D = 3 with one radial excitation
        let s = QuantumState::new(alloc::vec![Mode::new(1, 0)], 3).unwrap();
        assert_eq!(s.global_quantum_number(), 3.5);

        // four particles in D = 1
        let s = QuantumState::ground(4, 1).unwrap();
        assert_eq!(s.global_quantum_number(), 1.5);
    }

    #[test]
    fn quantum_number_is_additive() {
        let base = QuantumState::new(alloc::vec![Mode::new(1, 2)], 3).unwrap();
        let q0 = base.global_quantum_number();
        let extended = QuantumState::new(alloc::vec![Mode::new(1, 2), Mode::new(2, 1)], 3).unwrap();
        let q1 = extended.global_quantum_number();
        assert_eq!(q1 - q0, 2.0 * 2.0 + 1.0 + 1.5);
    }

    #[test]
    fn spec_validation() {
        let kin = KineticLaw::power(0.5, 2.0).unwrap();
        let v = PotentialLaw::power(1.0, 2.0).unwrap();
        assert!(SystemSpec::new(
            3,
            3,
            kin.clone(),
            None,
            alloc::vec![ManyBodyTerm::new(2, v.clone())]
        )
        .is_ok());
        // K > N
        assert!(SystemSpec::new(
            3,
            3,
            kin.clone(),
            None,
            alloc::vec![ManyBodyTerm::new(4, v.clone())]
        )
        .is_err());
        // no potential at all
        assert!(SystemSpec::new(3, 3, kin.clone(), None, alloc::vec![]).is_err());
        // one particle
        assert!(SystemSpec::new(1, 3, kin, None, alloc::vec![ManyBodyTerm::new(2, v)]).is_err());
    }
}
