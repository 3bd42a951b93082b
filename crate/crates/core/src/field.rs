//! Stationary Gaussian bosonic field, described at the Bohr frequencies of
//! the atom by its spectral intensity `I(omega)` and occupation `N(omega)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::levels::BohrLine;

/// Relative tolerance for matching a field entry to a Bohr frequency.
pub const OMEGA_MATCH_RTOL: f64 = 1e-9;

/// Planck occupation `1/(e^beta - 1)`.
pub fn occupation(beta: f64) -> Result<f64> {
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::NonPositiveBeta(beta));
    }
    Ok(1.0 / beta.exp_m1())
}

/// Inverse of [`occupation`]: `ln(1 + 1/N)`.
pub fn local_beta(n: f64) -> Result<f64> {
    if !(n > 0.0) || n.is_infinite() {
        return Err(Error::NonPositiveOccupation(n));
    }
    Ok((1.0 / n).ln_1p())
}

/// Real part of the downward susceptivity, `pi * I * (N + 1)`.
pub fn susceptivity_minus(intensity: f64, n: f64) -> f64 {
    debug_assert!(intensity >= 0.0 && n >= 0.0);
    PI * intensity * (n + 1.0)
}

/// Real part of the upward susceptivity, `pi * I * N`.
pub fn susceptivity_plus(intensity: f64, n: f64) -> f64 {
    debug_assert!(intensity >= 0.0 && n >= 0.0);
    PI * intensity * n
}

/// Emission over absorption probability, `(N + 1)/N = e^beta`.
pub fn einstein_quotient(n: f64) -> Result<f64> {
    if n == 0.0 {
        return Err(Error::ZeroOccupation);
    }
    if !(n > 0.0) || n.is_infinite() {
        return Err(Error::NonPositiveOccupation(n));
    }
    Ok((n + 1.0) / n)
}

/// How the occupation of a [`FieldSpec`] was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldMode {
    /// Occupations given directly (`"table-N"`).
    TableN,
    /// Local inverse temperatures given per frequency (`"table-beta"`).
    TableBeta,
    /// Equilibrium field with `beta(omega) = beta0 * omega` (`"gibbs"`).
    Gibbs { beta0: f64 },
}

impl FieldMode {
    pub fn name(&self) -> &'static str {
        match self {
            FieldMode::TableN => "table-N",
            FieldMode::TableBeta => "table-beta",
            FieldMode::Gibbs { .. } => "gibbs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEntry {
    pub omega: f64,
    pub intensity: f64,
    pub occupation: f64,
    /// Present when the entry was specified through an inverse temperature.
    pub beta: Option<f64>,
}

impl FieldEntry {
    /// Local inverse temperature; `None` for the vacuum (`N = 0`).
    pub fn beta(&self) -> Option<f64> {
        self.beta.or_else(|| local_beta(self.occupation).ok())
    }

    pub fn susceptivity_minus(&self) -> f64 {
        susceptivity_minus(self.intensity, self.occupation)
    }

    pub fn susceptivity_plus(&self) -> f64 {
        susceptivity_plus(self.intensity, self.occupation)
    }
}

/// Field state tabulated at a set of frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    mode: FieldMode,
    entries: Vec<FieldEntry>,
}

fn check_omega_intensity(omega: f64, intensity: f64) -> Result<()> {
    if !(omega > 0.0) || omega.is_infinite() {
        return Err(Error::InvalidField(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    if !(intensity >= 0.0) || intensity.is_infinite() {
        return Err(Error::InvalidField(format!(
            "intensity at omega = {omega} must be finite and >= 0, got {intensity}"
        )));
    }
    Ok(())
}

fn omega_matches(a: f64, b: f64) -> bool {
    (a - b).abs() <= OMEGA_MATCH_RTOL * a.abs().max(b.abs())
}

impl FieldSpec {
    fn from_entries(mode: FieldMode, mut entries: Vec<FieldEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        for w in entries.windows(2) {
            if omega_matches(w[0].omega, w[1].omega) {
                return Err(Error::InvalidField(format!(
                    "duplicate entries for omega = {} and {}",
                    w[0].omega, w[1].omega
                )));
            }
        }
        Ok(Self { mode, entries })
    }

    /// `"table-N"`: rows of `(omega, I, N)`.
    pub fn from_occupations<T>(rows: T) -> Result<Self>
    where
        T: IntoIterator<Item = (f64, f64, f64)>,
    {
        let entries = rows
            .into_iter()
            .map(|(omega, intensity, n)| {
                check_omega_intensity(omega, intensity)?;
                if !(n >= 0.0) || n.is_infinite() {
                    return Err(Error::InvalidField(format!(
                        "occupation at omega = {omega} must be finite and >= 0, got {n}"
                    )));
                }
                Ok(FieldEntry {
                    omega,
                    intensity,
                    occupation: n,
                    beta: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(FieldMode::TableN, entries)
    }

    /// `"table-beta"`: rows of `(omega, I, beta)` with `N = 1/(e^beta - 1)`.
    pub fn from_betas<T>(rows: T) -> Result<Self>
    where
        T: IntoIterator<Item = (f64, f64, f64)>,
    {
        let entries = rows
            .into_iter()
            .map(|(omega, intensity, beta)| {
                check_omega_intensity(omega, intensity)?;
                Ok(FieldEntry {
                    omega,
                    intensity,
                    occupation: occupation(beta)?,
                    beta: Some(beta),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(FieldMode::TableBeta, entries)
    }

    /// `"gibbs"`: rows of `(omega, I)` with `beta(omega) = beta0 * omega`.
    pub fn gibbs<T>(beta0: f64, rows: T) -> Result<Self>
    where
        T: IntoIterator<Item = (f64, f64)>,
    {
        if !(beta0 > 0.0) || beta0.is_infinite() {
            return Err(Error::NonPositiveBeta(beta0));
        }
        let entries = rows
            .into_iter()
            .map(|(omega, intensity)| {
                check_omega_intensity(omega, intensity)?;
                let beta = beta0 * omega;
                Ok(FieldEntry {
                    omega,
                    intensity,
                    occupation: occupation(beta)?,
                    beta: Some(beta),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(FieldMode::Gibbs { beta0 }, entries)
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn entries(&self) -> &[FieldEntry] {
        &self.entries
    }

    /// Entry whose frequency matches `omega` to relative [`OMEGA_MATCH_RTOL`].
    pub fn entry(&self, omega: f64) -> Option<&FieldEntry> {
        self.entries.iter().find(|e| omega_matches(e.omega, omega))
    }

    /// Field entries for each line, in line order.
    pub fn resolve(&self, lines: &[BohrLine]) -> Result<Vec<FieldEntry>> {
        lines
            .iter()
            .map(|l| {
                self.entry(l.omega)
                    .copied()
                    .ok_or(Error::MissingFieldEntry(l.omega))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn occupation_values() {
        assert_relative_eq!(occupation(2f64.ln()).unwrap(), 1.0, max_relative = 1e-15);
        assert!(occupation(1000.0).unwrap() < 1e-300);
        assert_relative_eq!(
            occupation((1.0 + 1.0 / 3.0f64).ln()).unwrap(),
            3.0,
            max_relative = 1e-14
        );
        assert!(matches!(occupation(0.0), Err(Error::NonPositiveBeta(_))));
        assert!(matches!(occupation(-1.0), Err(Error::NonPositiveBeta(_))));
    }

    #[test]
    fn local_beta_values() {
        assert_relative_eq!(local_beta(1.0).unwrap(), 2f64.ln(), max_relative = 1e-15);
        let n = occupation(0.7).unwrap();
        assert_relative_eq!(local_beta(n).unwrap(), 0.7, max_relative = 1e-12);
        // ln(1 + 1e9) evaluated independently
        assert_relative_eq!(local_beta(1e-9).unwrap(), 20.72326583794641, max_relative = 1e-12);
        assert!(matches!(local_beta(0.0), Err(Error::NonPositiveOccupation(_))));
    }

    #[test]
    fn susceptivities() {
        assert_relative_eq!(susceptivity_minus(1.0, 1.0), 2.0 * PI);
        assert_eq!(susceptivity_minus(0.0, 5.0), 0.0);
        assert_relative_eq!(susceptivity_minus(2.0, 0.0), 2.0 * PI);
        assert_relative_eq!(susceptivity_plus(1.0, 1.0), PI);
        assert_eq!(susceptivity_plus(3.0, 0.0), 0.0);
        let n = occupation(1.5).unwrap();
        assert_relative_eq!(
            susceptivity_plus(1.0, n),
            PI / (1.5f64.exp() - 1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn einstein_quotient_values() {
        assert_eq!(einstein_quotient(1.0).unwrap(), 2.0);
        let n = occupation(0.8).unwrap();
        assert_relative_eq!(einstein_quotient(n).unwrap(), 0.8f64.exp(), max_relative = 1e-14);
        let ratio = susceptivity_minus(2.5, 0.3) / susceptivity_plus(2.5, 0.3);
        assert_relative_eq!(ratio, einstein_quotient(0.3).unwrap(), max_relative = 1e-14);
        assert_eq!(einstein_quotient(0.0), Err(Error::ZeroOccupation));
    }

    #[test]
    fn gibbs_beta_is_additive() {
        // dyadic values keep beta0 * omega exact
        let f = FieldSpec::gibbs(0.75, [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).unwrap();
        let b = |w: f64| f.entry(w).unwrap().beta().unwrap();
        assert_eq!(b(1.0) + b(2.0), b(3.0));
        assert_eq!(f.mode().name(), "gibbs");
    }

    #[test]
    fn table_lookup_and_missing_entry() {
        let f = FieldSpec::from_betas([(1.0, 1.0, 2.0), (3.0, 1.0, 2.5)]).unwrap();
        assert!(f.entry(1.0 + 1e-12).is_some());
        assert!(f.entry(2.0).is_none());
        let line = BohrLine {
            lower: 1,
            upper: 2,
            omega: 2.0,
            d: 1.0,
        };
        assert_eq!(f.resolve(&[line]), Err(Error::MissingFieldEntry(2.0)));
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(FieldSpec::from_occupations([(1.0, -1.0, 1.0)]).is_err());
        assert!(FieldSpec::from_occupations([(1.0, 1.0, -0.5)]).is_err());
        assert!(FieldSpec::from_occupations([(0.0, 1.0, 1.0)]).is_err());
        assert!(FieldSpec::from_betas([(1.0, 1.0, 0.0)]).is_err());
        assert!(FieldSpec::gibbs(-1.0, [(1.0, 1.0)]).is_err());
        assert!(FieldSpec::from_occupations([(1.0, 1.0, 1.0), (1.0, 2.0, 1.0)]).is_err());
    }

    #[test]
    fn vacuum_entry_has_no_beta() {
        let f = FieldSpec::from_occupations([(1.0, 1.0, 0.0)]).unwrap();
        assert_eq!(f.entries()[0].beta(), None);
    }

    proptest! {
        #[test]
        fn occupation_round_trip(beta in 1e-3f64..50.0) {
            let n = occupation(beta).unwrap();
            let back = local_beta(n).unwrap();
            prop_assert!((back - beta).abs() <= 1e-12 * beta);
        }

        #[test]
        fn occupation_decreasing(beta in 1e-3f64..30.0, step in 1e-3f64..1.0) {
            prop_assert!(occupation(beta + step).unwrap() < occupation(beta).unwrap());
        }

        #[test]
        fn susceptivity_difference(i in 0.0f64..10.0, n in 0.0f64..10.0) {
            let diff = susceptivity_minus(i, n) - susceptivity_plus(i, n);
            prop_assert!((diff - PI * i).abs() <= 1e-14 * susceptivity_minus(i, n).max(1e-300));
        }
    }
}
