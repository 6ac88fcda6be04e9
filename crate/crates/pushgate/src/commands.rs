//! Table builders behind the CLI subcommands.
//!
//! Points are evaluated on a rayon pool and collected in input order, so a
//! table never depends on the worker count.

use rayon::prelude::*;

use pushgate_core::figures::{FigurePreset, OMEGA_RANGE_HZ};
use pushgate_core::oracle::{OracleSample, OracleSetup};
use pushgate_core::scenario::{grid, sweetspot_row, Evaluation, Scenario, SweepParam, SweetSpotRow};

use crate::error::CliError;
use crate::table::{Cell, Table};

pub const EVALUATION_COLUMNS: [&str; 16] = [
    "epsilon",
    "a_m",
    "xi",
    "detuning_rad_s",
    "tau_s",
    "gate_time_s",
    "omega_tau",
    "kt_over_hw",
    "photons",
    "nonuniform",
    "nonuniform_full",
    "pulse_error",
    "total",
    "total_product",
    "displacement_over_d",
    "flags",
];

/// Worker pool; `None` or 0 uses rayon's default size.
pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build()?)
}

fn ordered_map<T: Sync, R: Send>(
    pool: &rayon::ThreadPool,
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    pool.install(|| items.par_iter().map(f).collect())
}

/// Cells for one evaluation and whether the row is flagged.
pub fn evaluation_cells(result: &Result<Evaluation, pushgate_core::Error>) -> (Vec<Cell>, bool) {
    match result {
        Ok(e) => {
            let values = [
                e.epsilon,
                e.a,
                e.xi,
                e.detuning,
                e.tau,
                e.gate_time,
                e.omega_tau,
                e.kt_over_hw,
                e.photons,
                e.nonuniform,
                e.nonuniform_full,
                e.pulse_error,
                e.total,
                e.total_product,
                e.displacement_over_d,
            ];
            let mut cells: Vec<Cell> = values.into_iter().map(Cell::Float).collect();
            cells.push(e.validity.label().into());
            (cells, !e.validity.is_valid())
        }
        Err(err) => {
            let mut cells = vec![Cell::Float(f64::NAN); EVALUATION_COLUMNS.len() - 1];
            cells.push(format!("error: {err}").into());
            (cells, true)
        }
    }
}

fn header(prefix: &[&'static str], suffix: &[&'static str]) -> Vec<&'static str> {
    prefix.iter().chain(suffix).copied().collect()
}

pub fn fidelity_table(scenario: &Scenario) -> Result<Table, CliError> {
    let e = scenario.evaluate()?;
    let mut table = Table::new(EVALUATION_COLUMNS.to_vec());
    let (cells, flagged) = evaluation_cells(&Ok(e));
    table.push(cells);
    table.flagged += flagged as usize;
    Ok(table)
}

pub fn sweep_values(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>, CliError> {
    grid(min, max, points, log).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn sweep_table(
    base: &Scenario,
    param: SweepParam,
    values: &[f64],
    pool: &rayon::ThreadPool,
) -> Result<Table, CliError> {
    let results = ordered_map(pool, values, |&v| param.apply(base, v).and_then(|s| s.evaluate()));
    let mut table = Table::new(header(&["param", "value"], &EVALUATION_COLUMNS));
    for (&v, r) in values.iter().zip(&results) {
        let (cells, flagged) = evaluation_cells(r);
        let mut row = vec![param.name().into(), v.into()];
        row.extend(cells);
        table.push(row);
        table.flagged += flagged as usize;
    }
    Ok(table)
}

pub fn sweetspot_table(
    base: &Scenario,
    separations_um: &[f64],
    relative_noise: f64,
    pool: &rayon::ThreadPool,
) -> Result<Table, CliError> {
    let rows: Vec<Result<SweetSpotRow, pushgate_core::Error>> =
        ordered_map(pool, separations_um, |&d| sweetspot_row(base, d * 1e-6, relative_noise));
    let mut table = Table::new(header(
        &["d_um", "offset_m", "omega_sweet_hz", "min_omega_tau", "speed_ok", "noise_on_spot", "noise_off_spot"],
        &EVALUATION_COLUMNS,
    ));
    for (&d, r) in separations_um.iter().zip(&rows) {
        let mut row: Vec<Cell> = vec![d.into()];
        let (cells, flagged) = match r {
            Ok(s) => {
                row.extend([
                    s.offset.into(),
                    (s.omega_sweet / (2.0 * std::f64::consts::PI)).into(),
                    s.min_omega_tau.into(),
                    s.speed_ok.into(),
                    s.noise_on_spot.into(),
                    s.noise_off_spot.into(),
                ]);
                evaluation_cells(&Ok(s.evaluation))
            }
            Err(e) => {
                row.extend([Cell::Float(f64::NAN), Cell::Float(f64::NAN), Cell::Float(f64::NAN), false.into()]);
                row.extend([Cell::Float(f64::NAN), Cell::Float(f64::NAN)]);
                evaluation_cells(&Err(e.clone()))
            }
        };
        row.extend(cells);
        table.push(row);
        table.flagged += flagged as usize;
    }
    Ok(table)
}

pub fn oracle_table(scenario: &Scenario, samples: usize, seed: u64, pool: &rayon::ThreadPool) -> Result<Table, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let setup = OracleSetup::from_scenario(scenario, seed)?;
    let indices: Vec<u64> = (0..samples as u64).collect();
    let drawn: Vec<OracleSample> = ordered_map(pool, &indices, |&i| setup.sample(i));
    let report = setup.report(&drawn);
    let mut table =
        Table::new(vec!["quantity", "closed", "mc_mean", "std_err", "z", "pinned", "samples", "sufficient"]);
    for c in &report.comparisons {
        table.push(vec![
            c.name.into(),
            c.closed.into(),
            c.estimate.mean.into(),
            c.estimate.std_err.into(),
            c.z.into(),
            c.pinned.into(),
            Cell::Int(report.samples as u64),
            report.sufficient.into(),
        ]);
    }
    Ok(table)
}

/// Each curve's grid rows are followed by one row at its sweet-spot
/// frequency, marked `sweet = true`.
pub fn figure_table(preset: FigurePreset, points: usize, pool: &rayon::ThreadPool) -> Result<Table, CliError> {
    let omegas = sweep_values(OMEGA_RANGE_HZ.0, OMEGA_RANGE_HZ.1, points, true)?;
    let mut jobs = Vec::new();
    for curve in preset.curves() {
        for &w in &omegas {
            jobs.push((curve, Ok(w), false));
        }
        jobs.push((curve, preset.sweet_omega_hz(curve.separation), true));
    }
    let results = ordered_map(pool, &jobs, |(curve, w, _)| match w {
        Ok(w) => preset.evaluate(curve, *w),
        Err(e) => Err(e.clone()),
    });
    let mut table = Table::new(header(&["preset", "d_um", "thermal", "omega_hz", "sweet"], &EVALUATION_COLUMNS));
    for ((curve, w, sweet), r) in jobs.iter().zip(&results) {
        let (cells, flagged) = evaluation_cells(r);
        let mut row = vec![
            preset.name().into(),
            ((curve.separation * 1e15).round() / 1e9).into(),
            curve.label().into(),
            w.clone().unwrap_or(f64::NAN).into(),
            (*sweet).into(),
        ];
        row.extend(cells);
        table.push(row);
        table.flagged += flagged as usize;
    }
    Ok(table)
}
