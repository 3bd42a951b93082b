//! Command-line front end: `nonequibath {stationary|evolve|flux|sweep}`.
//!
//! Every command turns a JSON config into CSV text on the data channel and a
//! short human-readable summary. Numbers are written with 17 significant
//! digits so identical configs give identical bytes.

pub mod config;

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::closedform::{
    double_einstein_quotient, regime_classifier, regime_gap, stationary_3level_normalized,
    ThreeLevelParams,
};
use crate::error::Error;
use crate::field::{einstein_quotient, FieldSpec};
use crate::flux::{field_energy_rate, line_fluxes, total_photon_rate};
use crate::kinetics::{detailed_balance_residuals, evolve, stationary_state, Generator};

pub use config::{Model, RunConfig};

/// Residuals below this fraction of the largest line rate count as detailed balance.
pub const DETAILED_BALANCE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Model,
    Numerics,
    Io,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Config,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    /// 2 config error, 3 model error, 4 numerics error, 1 I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Model => 3,
            ErrorKind::Numerics => 4,
            ErrorKind::Io => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::DegenerateBohrFrequency { .. }
            | Error::ReducibleGenerator(_)
            | Error::DisconnectedSystem(_)
            | Error::ZeroOccupation => ErrorKind::Model,
            Error::StepTooLarge { .. } => ErrorKind::Numerics,
            Error::InvalidSystem(_)
            | Error::InvalidField(_)
            | Error::MissingFieldEntry(_)
            | Error::NonPositiveBeta(_)
            | Error::NonPositiveOccupation(_)
            | Error::InvalidState(_)
            | Error::InvalidParameter(_) => ErrorKind::Config,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Stationary,
    Evolve,
    Flux,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stationary => "stationary",
            Command::Evolve => "evolve",
            Command::Flux => "flux",
            Command::Sweep => "sweep",
        }
    }
}

/// Result of a command: CSV data and a summary for standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub data: String,
    pub summary: String,
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn run(command: Command, config_text: &str) -> Result<Output, CliError> {
    let model = Model::parse(config_text)?;
    match command {
        Command::Stationary => cmd_stationary(&model),
        Command::Evolve => cmd_evolve(&model),
        Command::Flux => cmd_flux(&model),
        Command::Sweep => cmd_sweep(&model),
    }
}

fn header(out: &mut String, command: Command, model: &Model) {
    let _ = writeln!(out, "# nonequibath {}", command.name());
    let _ = writeln!(out, "# schema_version={}", model.config.schema_version);
    let _ = writeln!(out, "# levels={}", model.system.len());
    let _ = writeln!(out, "# field_mode={}", model.field.mode().name());
    if let crate::FieldMode::Gibbs { beta0 } = model.field.mode() {
        let _ = writeln!(out, "# beta0={}", fmt_num(beta0));
    }
    let _ = writeln!(out, "# generic_tol={}", fmt_num(model.generic_tol));
    let _ = writeln!(out, "# tol={}", fmt_num(model.regime_tol));
}

fn model_generator(model: &Model, field: &FieldSpec) -> Result<Generator, CliError> {
    Ok(Generator::new(&model.system, field, Some(model.generic_tol))?)
}

pub fn cmd_stationary(model: &Model) -> Result<Output, CliError> {
    let gen = model_generator(model, &model.field)?;
    let rho = stationary_state(&gen)?;
    let residuals = detailed_balance_residuals(&gen, &rho);
    let rate_scale = gen.max_rate();
    let max_residual = residuals.iter().fold(0.0f64, |m, (_, r)| m.max(r.abs()));
    let balanced = max_residual <= DETAILED_BALANCE_RTOL * rate_scale;

    let mut out = String::new();
    header(&mut out, Command::Stationary, model);
    let _ = writeln!(out, "# detailed_balance_rtol={}", fmt_num(DETAILED_BALANCE_RTOL));
    out.push_str("[levels]\nlevel,energy,rho\n");
    for (i, (e, r)) in model.system.energies().iter().zip(rho.as_slice()).enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_num(*e), fmt_num(*r));
    }

    out.push_str("[lines]\n");
    out.push_str(
        "lower,upper,omega,d,intensity,occupation,rate_down,rate_up,residual,\
         einstein_quotient,population_quotient\n",
    );
    for (l, (_, r)) in gen.lines().iter().zip(&residuals) {
        let eq = einstein_quotient(l.occupation).unwrap_or(f64::INFINITY);
        let pq = rho[l.line.lower] / rho[l.line.upper];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            l.line.lower,
            l.line.upper,
            fmt_num(l.line.omega),
            fmt_num(l.line.d),
            fmt_num(l.intensity),
            fmt_num(l.occupation),
            fmt_num(l.rate_down),
            fmt_num(l.rate_up),
            fmt_num(*r),
            fmt_num(eq),
            fmt_num(pq),
        );
    }

    out.push_str("[summary]\nkey,value\n");
    let db = if balanced { "satisfied" } else { "violated" };
    let _ = writeln!(out, "detailed_balance,{db}");
    let _ = writeln!(out, "max_abs_residual,{}", fmt_num(max_residual));
    let mut summary = format!(
        "stationary state of {} levels; detailed balance: {db} (max residual {max_residual:.3e})\n",
        model.system.len()
    );

    if model.system.len() == 3 {
        if let Some(betas) = model.three_level_betas(&model.field) {
            let s = regime_gap(betas[0], betas[1], betas[2]);
            let regime = regime_classifier(betas[0], betas[1], betas[2], model.regime_tol);
            let _ = writeln!(out, "regime,{}", regime.name());
            let _ = writeln!(out, "regime_gap,{}", fmt_num(s));
            if model.system.dipole(0, 1) == 0.0 {
                let _ = writeln!(
                    out,
                    "double_einstein_quotient,{}",
                    fmt_num(double_einstein_quotient(betas[1], betas[2]))
                );
                let _ = writeln!(out, "population_quotient_21,{}", fmt_num(rho[1] / rho[0]));
            }
        }
        match ThreeLevelParams::from_system(&model.system, &model.field)
            .and_then(|p| stationary_3level_normalized(&p))
        {
            Ok(closed) => {
                let dev = closed
                    .iter()
                    .zip(rho.as_slice())
                    .map(|(c, r)| if *r == 0.0 { c.abs() } else { ((c - r) / r).abs() })
                    .fold(0.0f64, f64::max);
                let _ = writeln!(out, "closed_form_max_rel_dev,{}", fmt_num(dev));
                let _ = writeln!(summary, "closed form vs kernel solve: max relative deviation {dev:.3e}");
            }
            Err(e) => {
                let _ = writeln!(summary, "closed form not evaluated: {e}");
            }
        }
    }
    Ok(Output { data: out, summary })
}

pub fn cmd_evolve(model: &Model) -> Result<Output, CliError> {
    let gen = model_generator(model, &model.field)?;
    let rho0 = model.initial_state()?;
    let (dt, t_final) = model.time_grid(&gen)?;
    let every = model.config.numerics.sample_every.unwrap_or(1);
    if every == 0 {
        return Err(CliError::config("numerics.sample_every: must be >= 1"));
    }
    let traj = evolve(&gen, &rho0, t_final, dt)?;

    let mut out = String::new();
    header(&mut out, Command::Evolve, model);
    let _ = writeln!(out, "# dt={}", fmt_num(dt));
    let _ = writeln!(out, "# t_final={}", fmt_num(t_final));
    let _ = writeln!(out, "# sample_every={every}");
    out.push('t');
    for i in 0..gen.dim() {
        let _ = write!(out, ",rho_{i}");
    }
    out.push('\n');
    let last = traj.samples.len() - 1;
    for (k, (t, rho)) in traj.samples.iter().enumerate() {
        if k % every != 0 && k != last {
            continue;
        }
        out.push_str(&fmt_num(*t));
        for r in rho.as_slice() {
            out.push(',');
            out.push_str(&fmt_num(*r));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "# max_trace_drift={}", fmt_num(traj.max_trace_drift));
    let summary = format!(
        "evolved {} steps to t = {t_final:.6e} (dt {dt:.3e}); trace drift {:.3e}\n",
        last, traj.max_trace_drift
    );
    Ok(Output { data: out, summary })
}

pub fn cmd_flux(model: &Model) -> Result<Output, CliError> {
    let gen = model_generator(model, &model.field)?;
    let rho = stationary_state(&gen)?;
    let fluxes = line_fluxes(&model.system, &model.field, &rho)?;
    let total = total_photon_rate(&fluxes);
    let energy = field_energy_rate(&fluxes);

    let mut out = String::new();
    header(&mut out, Command::Flux, model);
    out.push_str("omega,flux\n");
    for (w, f) in fluxes.iter() {
        let _ = writeln!(out, "{},{}", fmt_num(w), fmt_num(f));
    }
    let _ = writeln!(out, "# total_photon_rate={}", fmt_num(total));
    let _ = writeln!(out, "# field_energy_rate={}", fmt_num(energy));
    let mut summary = format!("total photon rate {total:.6e}, field energy rate {energy:.3e}\n");
    if let Some([b1, b2, b3]) = model.three_level_betas(&model.field) {
        let line = regime_line(b1, b2, b3, model.regime_tol);
        let _ = writeln!(out, "# regime: {line}");
        let _ = writeln!(summary, "regime: {line}");
    }
    Ok(Output { data: out, summary })
}

fn regime_line(b1: f64, b2: f64, b3: f64, tol: f64) -> String {
    let regime = regime_classifier(b1, b2, b3, tol);
    format!("{}, s={}", regime.name(), regime_gap(b1, b2, b3))
}

pub fn cmd_sweep(model: &Model) -> Result<Output, CliError> {
    let sweep = model
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep: section required for the sweep command"))?;
    let index = sweep.line_index()?;
    if model.system.len() != 3 {
        return Err(CliError::config(format!(
            "system: sweep needs a three-level system, got {} levels",
            model.system.len()
        )));
    }
    let base_betas = model.three_level_betas(&model.field).ok_or_else(|| {
        CliError::config("field: sweep needs a finite beta at all three Bohr frequencies")
    })?;
    let e = model.system.energies();
    let omegas = [e[1] - e[0], e[2] - e[0], e[2] - e[1]];
    let intensities = omegas.map(|w| model.field.entry(w).map(|f| f.intensity).unwrap_or(0.0));

    let rows: Vec<Result<String, CliError>> = sweep
        .points()
        .into_par_iter()
        .map(|value| {
            let mut betas = base_betas;
            betas[index] = value;
            let field = FieldSpec::from_betas((0..3).map(|k| (omegas[k], intensities[k], betas[k])))?;
            let gen = model_generator(model, &field)?;
            let rho = stationary_state(&gen)?;
            let total = total_photon_rate(&line_fluxes(&model.system, &field, &rho)?);
            let s = regime_gap(betas[0], betas[1], betas[2]);
            let regime = regime_classifier(betas[0], betas[1], betas[2], model.regime_tol);
            let mut row = format!(
                "{},{},{},{}",
                fmt_num(value),
                fmt_num(s),
                regime.name(),
                fmt_num(total)
            );
            for r in rho.as_slice() {
                row.push(',');
                row.push_str(&fmt_num(*r));
            }
            Ok(row)
        })
        .collect();

    let mut out = String::new();
    header(&mut out, Command::Sweep, model);
    let _ = writeln!(out, "# sweep_param={}", sweep.param);
    let _ = writeln!(out, "# sweep_from={}", fmt_num(sweep.from));
    let _ = writeln!(out, "# sweep_to={}", fmt_num(sweep.to));
    let _ = writeln!(out, "# sweep_steps={}", sweep.steps);
    let _ = writeln!(out, "{},s,regime,total_rate,rho_0,rho_1,rho_2", sweep.param);
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    let summary = format!("swept {} over {} points\n", sweep.param, sweep.steps);
    Ok(Output { data: out, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(fmt_num(2.0 / 3.0), "6.6666666666666663e-1");
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::MissingFieldEntry(1.0)).exit_code(), 2);
        assert_eq!(CliError::from(Error::ReducibleGenerator("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::StepTooLarge { dt: 1.0, max: 0.1 }).exit_code(), 4);
    }

    #[test]
    fn sweep_points() {
        let mut s = config::SweepConfig {
            param: "beta2".into(),
            from: 1.0,
            to: 2.0,
            steps: 3,
        };
        assert_eq!(s.points(), vec![1.0, 1.5, 2.0]);
        s.steps = 1;
        assert_eq!(s.points(), vec![1.0]);
        s.steps = 0;
        assert!(s.points().is_empty());
        s.param = "gamma".into();
        assert!(s.line_index().is_err());
    }
}
