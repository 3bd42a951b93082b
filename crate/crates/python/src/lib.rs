//! Python bindings: `import nonequibath_py`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use nonequibath::closedform::{self, DEFAULT_REGIME_TOL};
use nonequibath::{field, flux, kinetics, ThreeLevelParams};

create_exception!(nonequibath_py, NonequibathError, PyValueError);

fn py_err(e: nonequibath::Error) -> PyErr {
    NonequibathError::new_err(e.to_string())
}

/// Atomic levels and their dipole strengths. Levels are sorted by energy.
#[pyclass(name = "LevelSystem", frozen)]
struct PyLevelSystem(nonequibath::LevelSystem);

#[pymethods]
impl PyLevelSystem {
    #[new]
    fn new(energies: Vec<f64>, dipole: Vec<Vec<f64>>) -> PyResult<Self> {
        nonequibath::LevelSystem::new(energies, dipole)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn energies(&self) -> Vec<f64> {
        self.0.energies().to_vec()
    }

    fn dipole(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.0.len();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("level index out of range for {n} levels")));
        }
        Ok(self.0.dipole(i, j))
    }

    /// `(lower, upper, omega, d)` for every coupled pair, sorted by omega.
    fn bohr_lines(&self) -> Vec<(usize, usize, f64, f64)> {
        self.0
            .bohr_lines()
            .iter()
            .map(|l| (l.lower, l.upper, l.omega, l.d))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("LevelSystem(energies={:?})", self.0.energies())
    }
}

/// Field intensity and occupation tabulated at the Bohr frequencies.
#[pyclass(name = "FieldSpec", frozen)]
struct PyFieldSpec(nonequibath::FieldSpec);

#[pymethods]
impl PyFieldSpec {
    /// Rows of `(omega, intensity, occupation)`.
    #[staticmethod]
    fn table_n(rows: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        nonequibath::FieldSpec::from_occupations(rows).map(Self).map_err(py_err)
    }

    /// Rows of `(omega, intensity, beta)`.
    #[staticmethod]
    fn table_beta(rows: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        nonequibath::FieldSpec::from_betas(rows).map(Self).map_err(py_err)
    }

    /// Equilibrium field at inverse temperature `beta0`; rows of `(omega, intensity)`.
    #[staticmethod]
    fn gibbs(beta0: f64, rows: Vec<(f64, f64)>) -> PyResult<Self> {
        nonequibath::FieldSpec::gibbs(beta0, rows).map(Self).map_err(py_err)
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.0.mode().name()
    }

    /// `(omega, intensity, occupation, beta)` per entry.
    fn entries(&self) -> Vec<(f64, f64, f64, Option<f64>)> {
        self.0
            .entries()
            .iter()
            .map(|e| (e.omega, e.intensity, e.occupation, e.beta()))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("FieldSpec(mode={:?}, entries={})", self.0.mode().name(), self.0.entries().len())
    }
}

/// Rate matrix of the population master equation.
#[pyclass(name = "Generator", frozen)]
struct PyGenerator(kinetics::Generator);

#[pymethods]
impl PyGenerator {
    #[new]
    #[pyo3(signature = (system, field, generic_tol=None))]
    fn new(system: &PyLevelSystem, field: &PyFieldSpec, generic_tol: Option<f64>) -> PyResult<Self> {
        kinetics::Generator::new(&system.0, &field.0, generic_tol)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Dense matrix as a list of rows.
    fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.0.matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }

    fn apply(&self, rho: Vec<f64>) -> PyResult<Vec<f64>> {
        if rho.len() != self.0.dim() {
            return Err(PyValueError::new_err(format!(
                "expected {} populations, got {}",
                self.0.dim(),
                rho.len()
            )));
        }
        Ok(self.0.apply(&rho))
    }

    fn max_stable_dt(&self) -> f64 {
        self.0.max_stable_dt()
    }

    /// `(lower, upper, omega, rate_down, rate_up)` per line.
    fn line_rates(&self) -> Vec<(usize, usize, f64, f64, f64)> {
        self.0
            .lines()
            .iter()
            .map(|l| (l.line.lower, l.line.upper, l.line.omega, l.rate_down, l.rate_up))
            .collect()
    }
}

fn state(rho: Vec<f64>) -> PyResult<kinetics::StateVector> {
    kinetics::StateVector::new(rho).map_err(py_err)
}

#[pyfunction]
fn stationary_state(generator: &PyGenerator) -> PyResult<Vec<f64>> {
    kinetics::stationary_state(&generator.0)
        .map(|s| s.into_inner())
        .map_err(py_err)
}

/// Returns `(times, states, max_trace_drift)`.
#[pyfunction]
fn evolve(
    generator: &PyGenerator,
    rho0: Vec<f64>,
    t_final: f64,
    dt: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>, f64)> {
    let traj = kinetics::evolve(&generator.0, &state(rho0)?, t_final, dt).map_err(py_err)?;
    let (times, states) = traj
        .samples
        .into_iter()
        .map(|(t, s)| (t, s.into_inner()))
        .unzip();
    Ok((times, states, traj.max_trace_drift))
}

/// `(omega, flux)` per line; positive flux is net emission.
#[pyfunction]
fn line_fluxes(system: &PyLevelSystem, field: &PyFieldSpec, rho: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let f = flux::line_fluxes(&system.0, &field.0, &state(rho)?).map_err(py_err)?;
    Ok(f.iter().collect())
}

#[pyfunction]
fn total_photon_rate(system: &PyLevelSystem, field: &PyFieldSpec, rho: Vec<f64>) -> PyResult<f64> {
    let f = flux::line_fluxes(&system.0, &field.0, &state(rho)?).map_err(py_err)?;
    Ok(flux::total_photon_rate(&f))
}

#[pyfunction]
fn field_energy_rate(system: &PyLevelSystem, field: &PyFieldSpec, rho: Vec<f64>) -> PyResult<f64> {
    let f = flux::line_fluxes(&system.0, &field.0, &state(rho)?).map_err(py_err)?;
    Ok(flux::field_energy_rate(&f))
}

fn three_level(system: &PyLevelSystem, field: &PyFieldSpec) -> PyResult<ThreeLevelParams> {
    ThreeLevelParams::from_system(&system.0, &field.0).map_err(py_err)
}

/// Analytic stationary populations of a three-level system, normalized.
#[pyfunction]
fn stationary_3level(system: &PyLevelSystem, field: &PyFieldSpec) -> PyResult<[f64; 3]> {
    closedform::stationary_3level_normalized(&three_level(system, field)?).map_err(py_err)
}

/// Analytic stationary fluxes at `(omega1, omega2, omega3)`.
#[pyfunction]
fn stationary_flux_3level(system: &PyLevelSystem, field: &PyFieldSpec) -> PyResult<[f64; 3]> {
    flux::stationary_flux_3level_closed(&three_level(system, field)?).map_err(py_err)
}

#[pyfunction]
fn occupation(beta: f64) -> PyResult<f64> {
    field::occupation(beta).map_err(py_err)
}

#[pyfunction]
fn local_beta(n: f64) -> PyResult<f64> {
    field::local_beta(n).map_err(py_err)
}

#[pyfunction]
fn double_einstein_quotient(beta2: f64, beta3: f64) -> f64 {
    closedform::double_einstein_quotient(beta2, beta3)
}

#[pyfunction]
fn inversion_condition(beta3: f64, beta2: f64) -> bool {
    closedform::inversion_condition(beta3, beta2)
}

#[pyfunction]
fn regime_gap(beta1: f64, beta2: f64, beta3: f64) -> f64 {
    closedform::regime_gap(beta1, beta2, beta3)
}

/// `"emission"`, `"absorption"` or `"equilibrium"`.
#[pyfunction]
#[pyo3(signature = (beta1, beta2, beta3, tol=DEFAULT_REGIME_TOL))]
fn regime_classifier(beta1: f64, beta2: f64, beta3: f64, tol: f64) -> &'static str {
    closedform::regime_classifier(beta1, beta2, beta3, tol).name()
}

#[pymodule]
fn nonequibath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NonequibathError", m.py().get_type::<NonequibathError>())?;
    m.add_class::<PyLevelSystem>()?;
    m.add_class::<PyFieldSpec>()?;
    m.add_class::<PyGenerator>()?;
    m.add_function(wrap_pyfunction!(stationary_state, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(line_fluxes, m)?)?;
    m.add_function(wrap_pyfunction!(total_photon_rate, m)?)?;
    m.add_function(wrap_pyfunction!(field_energy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_3level, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_flux_3level, m)?)?;
    m.add_function(wrap_pyfunction!(occupation, m)?)?;
    m.add_function(wrap_pyfunction!(local_beta, m)?)?;
    m.add_function(wrap_pyfunction!(double_einstein_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(inversion_condition, m)?)?;
    m.add_function(wrap_pyfunction!(regime_gap, m)?)?;
    m.add_function(wrap_pyfunction!(regime_classifier, m)?)?;
    Ok(())
}
