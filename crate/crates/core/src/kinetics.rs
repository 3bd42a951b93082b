//! Pauli master equation for the level populations.
//!
//! Each Bohr line `(lower, upper, omega, d)` contributes a downward rate
//! `2 pi I (N + 1) d` and an upward rate `2 pi I N d`. The populations obey
//! `d rho / dt = L rho` with `L` a Markov generator (non-negative off-diagonal
//! entries, zero column sums).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::levels::{BohrLine, LevelSystem};

/// Slack allowed on negative populations and on the trace of a [`StateVector`].
pub const STATE_TOL: f64 = 1e-12;

/// Largest `dt * max|L_ii|` accepted by [`evolve`].
pub const STABILITY_FACTOR: f64 = 0.1;

/// Rates contributed by one Bohr line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineRates {
    pub line: BohrLine,
    pub intensity: f64,
    pub occupation: f64,
    pub rate_down: f64,
    pub rate_up: f64,
}

/// Rate matrix of the diagonal master equation, together with its lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    energies: Vec<f64>,
    matrix: DMatrix<f64>,
    lines: Vec<LineRates>,
}

/// Downward (emission) rate of a line: `2 pi I (N + 1) d`.
pub fn rate_down(intensity: f64, occupation: f64, d: f64) -> f64 {
    2.0 * PI * intensity * (occupation + 1.0) * d
}

/// Upward (absorption) rate of a line: `2 pi I N d`.
pub fn rate_up(intensity: f64, occupation: f64, d: f64) -> f64 {
    2.0 * PI * intensity * occupation * d
}

/// Builds the generator after checking genericity with the default tolerance.
pub fn build_generator(system: &LevelSystem, field: &FieldSpec) -> Result<Generator> {
    Generator::new(system, field, None)
}

impl Generator {
    /// `generic_tol = None` uses [`LevelSystem::default_generic_tol`].
    pub fn new(system: &LevelSystem, field: &FieldSpec, generic_tol: Option<f64>) -> Result<Self> {
        system.validate_generic(generic_tol)?;
        let lines = system.bohr_lines();
        let entries = field.resolve(&lines)?;
        let n = system.len();
        let mut matrix = DMatrix::zeros(n, n);
        let mut rates = Vec::with_capacity(lines.len());
        for (line, entry) in lines.into_iter().zip(entries) {
            let down = rate_down(entry.intensity, entry.occupation, line.d);
            let up = rate_up(entry.intensity, entry.occupation, line.d);
            let (lo, hi) = (line.lower, line.upper);
            matrix[(lo, hi)] += down;
            matrix[(hi, hi)] -= down;
            matrix[(hi, lo)] += up;
            matrix[(lo, lo)] -= up;
            rates.push(LineRates {
                line,
                intensity: entry.intensity,
                occupation: entry.occupation,
                rate_down: down,
                rate_up: up,
            });
        }
        Ok(Self {
            energies: system.energies().to_vec(),
            matrix,
            lines: rates,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn lines(&self) -> &[LineRates] {
        &self.lines
    }

    /// `L rho`.
    pub fn apply(&self, rho: &[f64]) -> Vec<f64> {
        assert_eq!(rho.len(), self.dim(), "state dimension mismatch");
        let v = &self.matrix * DVector::from_column_slice(rho);
        v.iter().copied().collect()
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        self.matrix.diagonal().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_rate(&self) -> f64 {
        self.lines
            .iter()
            .fold(0.0, |m, l| m.max(l.rate_down).max(l.rate_up))
    }

    /// Smallest strictly positive line rate, if any.
    pub fn min_nonzero_rate(&self) -> Option<f64> {
        self.lines
            .iter()
            .flat_map(|l| [l.rate_down, l.rate_up])
            .filter(|&r| r > 0.0)
            .reduce(f64::min)
    }

    /// Largest step accepted by [`evolve`]; infinite for a zero generator.
    pub fn max_stable_dt(&self) -> f64 {
        let diag = self.max_abs_diagonal();
        if diag == 0.0 {
            f64::INFINITY
        } else {
            STABILITY_FACTOR / diag
        }
    }
}

/// Level populations.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    /// Accepts entries `>= -STATE_TOL` summing to 1 within `STATE_TOL`.
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::InvalidState("empty state".into()));
        }
        if let Some(v) = rho.iter().find(|v| !v.is_finite() || **v < -STATE_TOL) {
            return Err(Error::InvalidState(format!("entry {v} is negative or non-finite")));
        }
        let sum: f64 = rho.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("entries sum to {sum}, expected 1")));
        }
        Ok(Self(rho))
    }

    /// Clamps negative entries to zero and rescales to unit trace.
    pub fn normalized(mut rho: Vec<f64>) -> Result<Self> {
        for v in rho.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidState(format!("non-finite entry {v}")));
            }
            *v = v.max(0.0);
        }
        let sum: f64 = rho.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidState("state has no positive entry".into()));
        }
        rho.iter_mut().for_each(|v| *v /= sum);
        Ok(Self(rho))
    }

    /// All population in level `index` of an `n`-level system.
    pub fn pure(n: usize, index: usize) -> Self {
        let mut rho = vec![0.0; n];
        rho[index] = 1.0;
        Self(rho)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Sampled solution of the master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(t, rho(t))` at every integrator step, starting with `(0, rho0)`.
    pub samples: Vec<(f64, StateVector)>,
    /// Largest deviation of the raw integrator trace from its initial value.
    pub max_trace_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &StateVector {
        &self.samples.last().expect("trajectory is never empty").1
    }
}

/// Classical fourth-order Runge-Kutta with a fixed step.
///
/// The step actually used is `t_final / ceil(t_final / dt)`, so the last
/// sample lands on `t_final`. Output states are clamped and renormalized;
/// the integrator itself runs on the raw values.
pub fn evolve(gen: &Generator, rho0: &StateVector, t_final: f64, dt: f64) -> Result<Trajectory> {
    if rho0.len() != gen.dim() {
        return Err(Error::InvalidState(format!(
            "initial state has {} entries, generator has {} levels",
            rho0.len(),
            gen.dim()
        )));
    }
    if !(t_final >= 0.0) || t_final.is_infinite() {
        return Err(Error::InvalidParameter(format!(
            "t_final must be finite and >= 0, got {t_final}"
        )));
    }
    if !(dt > 0.0) || dt.is_infinite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let max = gen.max_stable_dt();
    if dt > max {
        return Err(Error::StepTooLarge { dt, max });
    }

    let mut samples = vec![(0.0, rho0.clone())];
    if t_final == 0.0 {
        return Ok(Trajectory {
            samples,
            max_trace_drift: 0.0,
        });
    }

    let steps = ((t_final / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let l = gen.matrix();
    let mut y = DVector::from_column_slice(rho0.as_slice());
    let trace0 = y.sum();
    let mut drift: f64 = 0.0;
    samples.reserve(steps);
    for k in 1..=steps {
        let k1 = l * &y;
        let k2 = l * (&y + &k1 * (0.5 * h));
        let k3 = l * (&y + &k2 * (0.5 * h));
        let k4 = l * (&y + &k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        drift = drift.max((y.sum() - trace0).abs());
        let t = if k == steps { t_final } else { k as f64 * h };
        samples.push((t, StateVector::normalized(y.iter().copied().collect())?));
    }
    Ok(Trajectory {
        samples,
        max_trace_drift: drift,
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Fails unless the level graph is connected and has a single closed class.
fn check_irreducible_kernel(gen: &Generator) -> Result<()> {
    let n = gen.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    for l in gen.lines() {
        if l.rate_down > 0.0 || l.rate_up > 0.0 {
            let a = find(&mut parent, l.line.lower);
            let b = find(&mut parent, l.line.upper);
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    if let Some(i) = (1..n).find(|&i| find(&mut parent, i) != root) {
        return Err(Error::ReducibleGenerator(format!(
            "level {i} is not coupled to level 0"
        )));
    }

    // A connected graph can still trap probability in several closed classes
    // when some upward rates vanish (vacuum field).
    let l = gen.matrix();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
        for j in 0..n {
            if i != j && l[(j, i)] > 0.0 {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let closed: Vec<usize> = (0..n)
        .filter(|&i| (0..n).all(|j| !reach[i][j] || reach[j][i]))
        .collect();
    if let Some(&other) = closed.iter().find(|&&j| !reach[closed[0]][j]) {
        return Err(Error::ReducibleGenerator(format!(
            "levels {} and {other} lie in different closed classes",
            closed[0]
        )));
    }
    Ok(())
}

/// Unique stationary state `L rho = 0`, `sum(rho) = 1`.
///
/// Solved directly: the last row of `L` is replaced by the normalization row
/// of ones and the system is solved against the last unit vector.
pub fn stationary_state(gen: &Generator) -> Result<StateVector> {
    check_irreducible_kernel(gen)?;
    let n = gen.dim();
    let mut a = gen.matrix().clone();
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let lu = a.clone().lu();
    let mut x = lu
        .solve(&b)
        .ok_or_else(|| Error::ReducibleGenerator("singular normalized generator".into()))?;
    // one step of iterative refinement
    let r = &b - &a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    StateVector::normalized(x.iter().copied().collect())
}

/// Per-line net downward probability current `rate_down * rho_upper - rate_up * rho_lower`.
pub fn detailed_balance_residuals(gen: &Generator, rho: &StateVector) -> Vec<(BohrLine, f64)> {
    gen.lines()
        .iter()
        .map(|l| {
            let r = l.rate_down * rho[l.line.upper] - l.rate_up * rho[l.line.lower];
            (l.line, r)
        })
        .collect()
}

/// Rate of change of the atomic energy, `sum_s eps_s (L rho)_s`.
pub fn system_energy_rate(gen: &Generator, rho: &StateVector) -> f64 {
    gen.apply(rho.as_slice())
        .iter()
        .zip(gen.energies())
        .map(|(drho, e)| drho * e)
        .sum()
}
