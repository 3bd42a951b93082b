//! Analytic results for the three-level atom.
//!
//! Levels are labelled 1, 2, 3 in order of increasing energy with Bohr
//! frequencies `omega1 = e2 - e1`, `omega2 = e3 - e1`, `omega3 = e3 - e2`, so
//! that `omega2 = omega1 + omega3`.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::levels::LevelSystem;

/// Default width of the equilibrium band used by [`regime_classifier`].
pub const DEFAULT_REGIME_TOL: f64 = 1e-12;

/// Relative tolerance on `omega2 = omega1 + omega3`.
const OMEGA_SUM_RTOL: f64 = 1e-12;

/// Everything the closed forms need, indexed by line 1, 2, 3 as above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelParams {
    pub omegas: [f64; 3],
    pub d12: f64,
    pub d13: f64,
    pub d23: f64,
    pub intensities: [f64; 3],
    pub betas: [f64; 3],
}

impl ThreeLevelParams {
    pub fn new(
        omegas: [f64; 3],
        (d12, d13, d23): (f64, f64, f64),
        intensities: [f64; 3],
        betas: [f64; 3],
    ) -> Result<Self> {
        let [w1, w2, w3] = omegas;
        if omegas.iter().any(|w| !(*w > 0.0) || w.is_infinite()) {
            return Err(Error::InvalidParameter(format!(
                "Bohr frequencies must be positive, got {omegas:?}"
            )));
        }
        if (w2 - w1 - w3).abs() > OMEGA_SUM_RTOL * w2 {
            return Err(Error::InvalidParameter(format!(
                "omega2 = {w2} differs from omega1 + omega3 = {}",
                w1 + w3
            )));
        }
        for d in [d12, d13, d23] {
            if !(d >= 0.0) || d.is_infinite() {
                return Err(Error::InvalidParameter(format!("dipole strength {d} must be >= 0")));
            }
        }
        for i in intensities {
            if !(i >= 0.0) || i.is_infinite() {
                return Err(Error::InvalidParameter(format!("intensity {i} must be >= 0")));
            }
        }
        for b in betas {
            if !(b > 0.0) || b.is_infinite() {
                return Err(Error::NonPositiveBeta(b));
            }
        }
        Ok(Self {
            omegas,
            d12,
            d13,
            d23,
            intensities,
            betas,
        })
    }

    /// Reads the parameters off a three-level system and its field.
    ///
    /// Lines with zero dipole strength need no field entry; they are given
    /// zero intensity and a placeholder inverse temperature of 1, neither of
    /// which enters any result.
    pub fn from_system(system: &LevelSystem, field: &FieldSpec) -> Result<Self> {
        if system.len() != 3 {
            return Err(Error::InvalidSystem(format!(
                "closed forms need exactly 3 levels, got {}",
                system.len()
            )));
        }
        let e = system.energies();
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let omegas = pairs.map(|(a, b)| e[b] - e[a]);
        let [d12, d13, d23] = pairs.map(|(a, b)| system.dipole(a, b));
        let mut intensities = [0.0; 3];
        let mut betas = [1.0; 3];
        for (k, d) in [d12, d13, d23].into_iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            let entry = field
                .entry(omegas[k])
                .ok_or(Error::MissingFieldEntry(omegas[k]))?;
            intensities[k] = entry.intensity;
            betas[k] = entry
                .beta()
                .ok_or(Error::NonPositiveOccupation(entry.occupation))?;
        }
        Self::new(omegas, (d12, d13, d23), intensities, betas)
    }

    fn check_connected(&self) -> Result<()> {
        let couplings = [
            self.d12 * self.intensities[0],
            self.d13 * self.intensities[1],
            self.d23 * self.intensities[2],
        ];
        if couplings.iter().filter(|&&c| c > 0.0).count() < 2 {
            return Err(Error::DisconnectedSystem(format!(
                "need at least two lines with d * I > 0, got {couplings:?}"
            )));
        }
        Ok(())
    }
}

/// `I / (1 - e^-beta) = I (N + 1)`: the emission factor of a line.
fn down(intensity: f64, beta: f64) -> f64 {
    intensity / -(-beta).exp_m1()
}

/// `I / (e^beta - 1) = I N`: the absorption factor of a line.
fn up(intensity: f64, beta: f64) -> f64 {
    intensity / beta.exp_m1()
}

/// Unnormalized stationary populations `(rho1, rho2, rho3)`.
///
/// Each population is a sum of three products of emission/absorption
/// factors, one per spanning tree of the level triangle.
pub fn stationary_3level(p: &ThreeLevelParams) -> Result<[f64; 3]> {
    p.check_connected()?;
    let [i1, i2, i3] = p.intensities;
    let [b1, b2, b3] = p.betas;
    let (a, b, c) = (p.d12 * p.d13, p.d12 * p.d23, p.d13 * p.d23);

    let rho1 = a * down(i1, b1) * down(i2, b2)
        + b * down(i1, b1) * down(i3, b3)
        + c * down(i2, b2) * up(i3, b3);
    let rho2 = a * up(i1, b1) * down(i2, b2)
        + b * up(i1, b1) * down(i3, b3)
        + c * up(i2, b2) * down(i3, b3);
    let rho3 = a * down(i1, b1) * up(i2, b2)
        + b * up(i1, b1) * up(i3, b3)
        + c * up(i2, b2) * up(i3, b3);
    Ok([rho1, rho2, rho3])
}

/// [`stationary_3level`] scaled to unit trace.
pub fn stationary_3level_normalized(p: &ThreeLevelParams) -> Result<[f64; 3]> {
    let rho = stationary_3level(p)?;
    let z: f64 = rho.iter().sum();
    Ok(rho.map(|r| r / z))
}

/// Predicted `rho1 / rho2` for a two-level atom: `(N + 1)/N`.
pub fn einstein_relation_2level(n: f64) -> Result<f64> {
    crate::field::einstein_quotient(n)
}

/// Predicted `rho2 / rho1` when the 1-2 transition is forbidden:
/// `exp(beta3 - beta2)`.
pub fn double_einstein_quotient(beta2: f64, beta3: f64) -> f64 {
    debug_assert!(beta2 > 0.0 && beta3 > 0.0);
    (beta3 - beta2).exp()
}

/// `rho2 > rho1` with a forbidden 1-2 transition iff `beta(omega3) > beta(omega1 + omega3)`.
pub fn inversion_condition(beta3: f64, beta2: f64) -> bool {
    beta3 > beta2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Emission,
    Absorption,
    Equilibrium,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Emission => "emission",
            Regime::Absorption => "absorption",
            Regime::Equilibrium => "equilibrium",
        }
    }

    /// +1, -1 or 0, matching the sign of the net photon production.
    pub fn sign(&self) -> i32 {
        match self {
            Regime::Emission => 1,
            Regime::Absorption => -1,
            Regime::Equilibrium => 0,
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `beta1 + beta3 - beta2`; zero for any equilibrium (linear) `beta`.
pub fn regime_gap(beta1: f64, beta2: f64, beta3: f64) -> f64 {
    beta1 + beta3 - beta2
}

pub fn regime_classifier(beta1: f64, beta2: f64, beta3: f64, tol: f64) -> Regime {
    let s = regime_gap(beta1, beta2, beta3);
    if s > tol {
        Regime::Emission
    } else if s < -tol {
        Regime::Absorption
    } else {
        Regime::Equilibrium
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const OMEGAS: [f64; 3] = [1.0, 3.0, 2.0];

    fn params(d: (f64, f64, f64), i: [f64; 3], b: [f64; 3]) -> ThreeLevelParams {
        ThreeLevelParams::new(OMEGAS, d, i, b).unwrap()
    }

    #[test]
    fn gibbs_is_boltzmann() {
        let p = params((1.0, 1.0, 1.0), [1.0; 3], OMEGAS);
        let rho = stationary_3level_normalized(&p).unwrap();
        let z = 1.0 + (-1.0f64).exp() + (-3.0f64).exp();
        assert_relative_eq!(rho[0], 1.0 / z, max_relative = 1e-13);
        assert_relative_eq!(rho[1], (-1.0f64).exp() / z, max_relative = 1e-13);
        assert_relative_eq!(rho[2], (-3.0f64).exp() / z, max_relative = 1e-13);
    }

    #[test]
    fn forbidden_transition_gives_double_einstein() {
        let p = params((0.0, 1.0, 1.0), [0.0, 1.0, 1.0], [1.0, 2.5, 3.0]);
        let rho = stationary_3level(&p).unwrap();
        assert_relative_eq!(rho[1] / rho[0], 0.5f64.exp(), max_relative = 1e-13);
        assert_relative_eq!(rho[1] / rho[0], 1.6487212707001282, max_relative = 1e-13);
    }

    #[test]
    fn disconnected_rejected() {
        let p = params((0.0, 0.0, 1.0), [1.0; 3], [1.0, 2.0, 1.0]);
        assert!(matches!(stationary_3level(&p), Err(Error::DisconnectedSystem(_))));
        let p = params((1.0, 1.0, 1.0), [0.0, 0.0, 1.0], [1.0, 2.0, 1.0]);
        assert!(matches!(stationary_3level(&p), Err(Error::DisconnectedSystem(_))));
    }

    #[test]
    fn params_validation() {
        assert!(ThreeLevelParams::new([1.0, 3.5, 2.0], (1.0, 1.0, 1.0), [1.0; 3], [1.0; 3]).is_err());
        assert!(ThreeLevelParams::new(OMEGAS, (1.0, -1.0, 1.0), [1.0; 3], [1.0; 3]).is_err());
        assert!(ThreeLevelParams::new(OMEGAS, (1.0, 1.0, 1.0), [1.0; 3], [1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn from_system_reads_lines() {
        let d = vec![vec![0.0, 0.0, 0.3], vec![0.0, 0.0, 0.4], vec![0.3, 0.4, 0.0]];
        let sys = LevelSystem::new(vec![0.0, 1.0, 3.0], d).unwrap();
        let field = FieldSpec::from_betas([(2.0, 5.0, 3.0), (3.0, 7.0, 2.5)]).unwrap();
        let p = ThreeLevelParams::from_system(&sys, &field).unwrap();
        assert_eq!(p.omegas, [1.0, 3.0, 2.0]);
        assert_eq!((p.d12, p.d13, p.d23), (0.0, 0.3, 0.4));
        assert_eq!(p.intensities, [0.0, 7.0, 5.0]);
        assert_eq!(p.betas[1..], [2.5, 3.0]);
    }

    #[test]
    fn einstein_two_level() {
        assert_eq!(einstein_relation_2level(1.0).unwrap(), 2.0);
        let n = crate::field::occupation(0.3).unwrap();
        assert_relative_eq!(einstein_relation_2level(n).unwrap(), 0.3f64.exp(), max_relative = 1e-14);
        assert!(einstein_relation_2level(0.0).is_err());
    }

    #[test]
    fn double_einstein_values() {
        assert_eq!(double_einstein_quotient(1.7, 1.7), 1.0);
        assert_relative_eq!(double_einstein_quotient(2.5, 3.0), 0.5f64.exp(), max_relative = 1e-15);
        let beta0 = 0.8;
        assert_relative_eq!(
            double_einstein_quotient(beta0 * 3.0, beta0 * 2.0),
            (-beta0 * 1.0f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn inversion_examples() {
        assert!(inversion_condition(3.0, 2.5));
        assert!(!inversion_condition(0.7 * 2.0, 0.7 * 3.0));
        assert!(!inversion_condition(2.0, 2.0));
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime_gap(2.0, 2.5, 3.0), 2.5);
        assert_eq!(regime_classifier(2.0, 2.5, 3.0, DEFAULT_REGIME_TOL), Regime::Emission);
        assert_eq!(regime_classifier(0.5, 2.0, 0.5, DEFAULT_REGIME_TOL), Regime::Absorption);
        assert_eq!(regime_classifier(1.0, 3.0, 2.0, DEFAULT_REGIME_TOL), Regime::Equilibrium);
    }

    proptest! {
        #[test]
        fn gibbs_always_equilibrium(beta0 in 0.01f64..10.0, w1 in 0.01f64..10.0, w3 in 0.01f64..10.0) {
            let r = regime_classifier(beta0 * w1, beta0 * (w1 + w3), beta0 * w3, DEFAULT_REGIME_TOL);
            prop_assert_eq!(r, Regime::Equilibrium);
        }

        #[test]
        fn inversion_implies_quotient_above_one(b2 in 0.01f64..10.0, b3 in 0.01f64..10.0) {
            if inversion_condition(b3, b2) {
                prop_assert!(double_einstein_quotient(b2, b3) > 1.0);
            }
        }

        #[test]
        fn double_einstein_insensitive_to_other_lines(
            b2 in 0.1f64..5.0, b3 in 0.1f64..5.0,
            d13 in 0.1f64..1.0, d23 in 0.1f64..1.0,
            i2 in 0.1f64..10.0, i3 in 0.1f64..10.0,
            scale13 in 0.1f64..10.0, scale23 in 0.1f64..10.0, i1 in 0.0f64..10.0,
        ) {
            let base = params((0.0, d13, d23), [0.0, i2, i3], [1.0, b2, b3]);
            let scaled = params((0.0, d13 * scale13, d23 * scale23), [i1, i2, i3], [1.0, b2, b3]);
            let q = |p: &ThreeLevelParams| {
                let r = stationary_3level(p).unwrap();
                r[1] / r[0]
            };
            let expected = double_einstein_quotient(b2, b3);
            prop_assert!((q(&base) / expected - 1.0).abs() <= 1e-12);
            prop_assert!((q(&scaled) / expected - 1.0).abs() <= 1e-12);
        }
    }
}
