//! Atomic level structure: energies, squared dipole elements and the Bohr
//! lines they induce.

use crate::error::{Error, Result};

/// Energies and squared dipole matrix elements `|<i|D|j>|^2` of an N-level atom.
///
/// Levels are always stored with strictly increasing energies. The dipole
/// matrix is symmetric, non-negative and has a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    energies: Vec<f64>,
    dipole: Vec<f64>,
}

/// One allowed transition between two levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohrLine {
    pub lower: usize,
    pub upper: usize,
    pub omega: f64,
    pub d: f64,
}

impl LevelSystem {
    /// Builds a level system from energies and a square dipole matrix.
    ///
    /// Unsorted energies are accepted: levels are reordered by energy and the
    /// dipole matrix is permuted along with them.
    pub fn new(energies: Vec<f64>, dipole: Vec<Vec<f64>>) -> Result<Self> {
        let n = energies.len();
        if n < 2 {
            return Err(Error::InvalidSystem(format!(
                "need at least 2 levels, got {n}"
            )));
        }
        if dipole.len() != n || dipole.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSystem(format!(
                "dipole matrix must be {n}x{n}"
            )));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidSystem(format!("non-finite energy {e}")));
        }
        for i in 0..n {
            if dipole[i][i] != 0.0 {
                return Err(Error::InvalidSystem(format!(
                    "dipole diagonal entry ({i},{i}) must be 0, got {}",
                    dipole[i][i]
                )));
            }
            for j in 0..n {
                let v = dipole[i][j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidSystem(format!(
                        "dipole entry ({i},{j}) must be finite and >= 0, got {v}"
                    )));
                }
                if v != dipole[j][i] {
                    return Err(Error::InvalidSystem(format!(
                        "dipole matrix not symmetric at ({i},{j}): {v} vs {}",
                        dipole[j][i]
                    )));
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        for w in order.windows(2) {
            if energies[w[0]] == energies[w[1]] {
                return Err(Error::InvalidSystem(format!(
                    "levels {} and {} share energy {}",
                    w[0], w[1], energies[w[0]]
                )));
            }
        }

        let sorted_energies = order.iter().map(|&k| energies[k]).collect();
        let mut flat = vec![0.0; n * n];
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                flat[i * n + j] = dipole[oi][oj];
            }
        }
        Ok(Self {
            energies: sorted_energies,
            dipole: flat,
        })
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Squared dipole element between levels `i` and `j`.
    pub fn dipole(&self, i: usize, j: usize) -> f64 {
        self.dipole[i * self.len() + j]
    }

    /// All transitions with non-zero dipole strength, sorted by frequency.
    ///
    /// Ties in frequency (only possible for non-generic systems) are broken by
    /// level indices so the order is fully deterministic.
    pub fn bohr_lines(&self) -> Vec<BohrLine> {
        let n = self.len();
        let mut lines = Vec::with_capacity(n * (n - 1) / 2);
        for lower in 0..n {
            for upper in lower + 1..n {
                let d = self.dipole(lower, upper);
                if d > 0.0 {
                    lines.push(BohrLine {
                        lower,
                        upper,
                        omega: self.energies[upper] - self.energies[lower],
                        d,
                    });
                }
            }
        }
        lines.sort_by(|a, b| {
            a.omega
                .total_cmp(&b.omega)
                .then(a.lower.cmp(&b.lower))
                .then(a.upper.cmp(&b.upper))
        });
        lines
    }

    /// Largest Bohr frequency among coupled lines, or 0 if there are none.
    pub fn max_omega(&self) -> f64 {
        self.bohr_lines()
            .iter()
            .map(|l| l.omega)
            .fold(0.0, f64::max)
    }

    /// Default separation tolerance used by [`validate_generic`](Self::validate_generic).
    pub fn default_generic_tol(&self) -> f64 {
        1e-9 * self.max_omega()
    }

    /// Checks that every coupled Bohr frequency belongs to a unique pair of levels.
    ///
    /// `tol = None` uses `1e-9` times the largest Bohr frequency.
    pub fn validate_generic(&self, tol: Option<f64>) -> Result<()> {
        let tol = tol.unwrap_or_else(|| self.default_generic_tol());
        if !(tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "genericity tolerance must be >= 0, got {tol}"
            )));
        }
        // Lines are sorted by omega, so the closest pair is always adjacent.
        let lines = self.bohr_lines();
        for w in lines.windows(2) {
            if (w[1].omega - w[0].omega).abs() <= tol {
                return Err(Error::DegenerateBohrFrequency {
                    first: (w[0].lower, w[0].upper),
                    second: (w[1].lower, w[1].upper),
                    omega_first: w[0].omega,
                    omega_second: w[1].omega,
                    tol,
                });
            }
        }
        Ok(())
    }
}
