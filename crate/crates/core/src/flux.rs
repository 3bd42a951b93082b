//! Photon exchange between the atom and the field.
//!
//! Positive flux means net emission of photons into the field at that Bohr
//! frequency; negative flux means net absorption.

use std::f64::consts::PI;

use crate::closedform::{stationary_3level, ThreeLevelParams};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::kinetics::StateVector;
use crate::levels::{BohrLine, LevelSystem};

/// Net photon emission rate per Bohr line, sorted by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFlux {
    entries: Vec<(BohrLine, f64)>,
}

impl LineFlux {
    pub fn entries(&self) -> &[(BohrLine, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries.iter().map(|(l, f)| (l.omega, *f))
    }

    /// Flux of the line at exactly this frequency.
    pub fn get(&self, omega: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l.omega == omega)
            .map(|(_, f)| *f)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `2 pi I d ((N + 1) rho_upper - N rho_lower)` for every coupled line.
pub fn line_fluxes(system: &LevelSystem, field: &FieldSpec, rho: &StateVector) -> Result<LineFlux> {
    if rho.len() != system.len() {
        return Err(Error::InvalidState(format!(
            "state has {} entries, system has {} levels",
            rho.len(),
            system.len()
        )));
    }
    let lines = system.bohr_lines();
    let fields = field.resolve(&lines)?;
    let entries = lines
        .into_iter()
        .zip(fields)
        .map(|(l, f)| {
            let n = f.occupation;
            let flux = 2.0 * PI * f.intensity * l.d * ((n + 1.0) * rho[l.upper] - n * rho[l.lower]);
            (l, flux)
        })
        .collect();
    Ok(LineFlux { entries })
}

/// Net number of photons emitted into the field per unit time.
pub fn total_photon_rate(fluxes: &LineFlux) -> f64 {
    fluxes.iter().map(|(_, f)| f).sum()
}

/// `sum_omega w(omega) * flux(omega)`.
pub fn energy_rate<W: Fn(f64) -> f64>(fluxes: &LineFlux, weight: W) -> f64 {
    fluxes.iter().map(|(w, f)| weight(w) * f).sum()
}

/// Field energy gain with the linear dispersion `w(omega) = omega`.
pub fn field_energy_rate(fluxes: &LineFlux) -> f64 {
    energy_rate(fluxes, |w| w)
}

/// Stationary fluxes `(flux(omega1), flux(omega2), flux(omega3))` from the
/// closed-form populations, normalized to unit trace.
///
/// All three share the magnitude
/// `2 pi d12 d13 d23 I1 I2 I3 (e^s - 1) / [(e^b1 - 1)(1 - e^-b2)(e^b3 - 1)] / Z`
/// with `s = b1 - b2 + b3`; the flux at `omega2` has the opposite sign.
pub fn stationary_flux_3level_closed(p: &ThreeLevelParams) -> Result<[f64; 3]> {
    let z: f64 = stationary_3level(p)?.iter().sum();
    let [b1, b2, b3] = p.betas;
    let [i1, i2, i3] = p.intensities;
    let s = b1 - b2 + b3;
    let denom = b1.exp_m1() * -(-b2).exp_m1() * b3.exp_m1();
    let k = 2.0 * PI * p.d12 * p.d13 * p.d23 * i1 * i2 * i3 * s.exp_m1() / denom / z;
    Ok([k, -k, k])
}
