//! Experiment dispatch: each experiment writes its artifact to
//! `output_path` and yields an exit status.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use semiflight_core::evolution::{accumulate_q_telegraph_direct, accumulate_q_wave_repr};
use semiflight_core::fracops::verify_symbol;
use semiflight_core::levy::{sample_coupled_passage, BernsteinSpec, CoupledOptions};
use semiflight_core::semi_markov::{simulate_path, FiniteChain};
use semiflight_core::special_fn::{gamma, ml_eval};
use semiflight_core::stats::Moments;
use semiflight_core::transport::{sample_flight, sample_scaled_flight, FlightSample};
use semiflight_core::{Error as CoreError, StreamRng};

use crate::config::{ConfigError, Experiment, ExperimentConfig};
use crate::laws::{evaluate_all, LawRecord, LawSettings};
use crate::output::{fmt_f64, sample_header, sample_row, write_json_lines, CsvWriter};
use crate::parallel::run_workers;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] CoreError),
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(CoreError::NonConvergence { .. }) => 3,
            RunError::Numerical(_) => 2,
            RunError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// 0 on success, 1 when a verified law fails.
    pub exit_code: i32,
    pub lines: Vec<String>,
}

impl RunOutcome {
    fn ok(lines: Vec<String>) -> Self {
        RunOutcome {
            exit_code: 0,
            lines,
        }
    }
}

pub fn run(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    match c.experiment {
        Experiment::Flight | Experiment::Scaled | Experiment::Limit => run_samples(c),
        Experiment::Telegraph => run_telegraph(c),
        Experiment::WaveRepr => run_wave_repr(c),
        Experiment::SymbolCheck => run_symbol_check(c),
        Experiment::VerifyLaws => run_verify_laws(c),
    }
}

struct Row {
    x: Vec<f64>,
    n_jumps: u64,
    gamma: f64,
}

impl From<FlightSample> for Row {
    fn from(f: FlightSample) -> Self {
        Row {
            x: f.position,
            n_jumps: f.n_jumps,
            gamma: f.gamma,
        }
    }
}

fn draw_row(c: &ExperimentConfig, t: f64, rng: &mut StreamRng) -> Result<Row, CoreError> {
    let d = c.dimension;
    match c.experiment {
        Experiment::Flight => Ok(sample_flight(d, c.alpha, c.theta, t, &vec![0.0; d], rng)?.into()),
        Experiment::Scaled => {
            Ok(sample_scaled_flight(d, c.alpha, c.theta, t, c.scale, rng)?.into())
        }
        _ => {
            let opts = CoupledOptions {
                gaussian_correction: true,
                record_jumps: true,
            };
            let s = sample_coupled_passage(c.alpha, d, t, c.eps * t, opts, rng)?;
            let gamma = (t - s.passage.undershoot).max(0.0);
            let x = s
                .a_minus
                .iter()
                .zip(&s.passage_direction)
                .map(|(m, u)| m + gamma * u)
                .collect();
            let n_jumps = s.jump_log.map_or(0, |l| l.len() as u64);
            Ok(Row { x, n_jumps, gamma })
        }
    }
}

/// `flight`, `scaled` and `limit`: one CSV row per sample and time.
fn run_samples(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let per_worker = run_workers(c.seed, c.workers, c.n_paths, |rng, range| {
        let mut out: Vec<Vec<Row>> = Vec::with_capacity(c.t_grid.len());
        for &t in &c.t_grid {
            out.push(
                range
                    .clone()
                    .map(|_| draw_row(c, t, rng))
                    .collect::<Result<_, _>>()?,
            );
        }
        Ok::<_, CoreError>(out)
    })?;
    let mut w = CsvWriter::create(&c.output_path, &sample_header(c.dimension))?;
    let mut id = 0;
    for (k, &t) in c.t_grid.iter().enumerate() {
        for rows in &per_worker {
            for r in &rows[k] {
                w.row(&sample_row(id, t, &r.x, r.n_jumps, r.gamma))?;
                id += 1;
            }
        }
    }
    w.finish()?;
    Ok(RunOutcome::ok(vec![format!(
        "wrote {id} samples to {}",
        c.output_path.display()
    )]))
}

fn merge(parts: &[Moments]) -> Moments {
    parts.iter().fold(Moments::new(), |mut a, m| {
        a.merge(m);
        a
    })
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

/// `telegraph`: state probability and mean jump count against their laws.
fn run_telegraph(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let spec = BernsteinSpec::from_alpha(c.alpha)?;
    let chain = FiniteChain::telegraph(c.theta)?;
    let mut w = CsvWriter::create(
        &c.output_path,
        &header(&[
            "t",
            "p_initial",
            "p_initial_stderr",
            "p_initial_exact",
            "mean_jumps",
            "mean_jumps_stderr",
            "mean_jumps_exact",
        ]),
    )?;
    for &t in &c.t_grid {
        let parts = run_workers(c.seed, c.workers, c.n_paths, |rng, range| {
            let mut p = Moments::new();
            let mut n = Moments::new();
            for _ in range {
                let path = simulate_path(&chain, spec, 0, t, rng)?;
                p.push(f64::from(u8::from(*path.state_at(t)? == 0)));
                n.push(path.jump_count() as f64);
            }
            Ok::<_, CoreError>((p, n))
        })?;
        let p = merge(&parts.iter().map(|x| x.0).collect::<Vec<_>>());
        let n = merge(&parts.iter().map(|x| x.1).collect::<Vec<_>>());
        let p_exact = 0.5 * (1.0 + ml_eval(c.alpha, -2.0 * c.theta * t.powf(c.alpha))?);
        let n_exact = c.theta * t.powf(c.alpha) / gamma(1.0 + c.alpha);
        w.row(
            &[
                t,
                p.mean(),
                p.stderr(),
                p_exact,
                n.mean(),
                n.stderr(),
                n_exact,
            ]
            .map(fmt_f64),
        )?;
    }
    w.finish()?;
    Ok(RunOutcome::ok(vec![format!(
        "wrote {}",
        c.output_path.display()
    )]))
}

/// `wave-repr`: direct evolution and `E w(γ_t)` for `u(x) = exp(-x²)`.
fn run_wave_repr(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let spec = BernsteinSpec::from_alpha(c.alpha)?;
    let u = |y: f64| (-y * y).exp();
    let mut w = CsvWriter::create(
        &c.output_path,
        &header(&["t", "x", "direct", "direct_stderr", "wave", "wave_stderr"]),
    )?;
    for &t in &c.t_grid {
        let direct = merge(&run_workers(c.seed, c.workers, c.n_paths, |rng, r| {
            accumulate_q_telegraph_direct(spec, c.theta, t, c.x, u, r.len(), rng)
        })?);
        let wave = merge(&run_workers(c.seed ^ 1, c.workers, c.n_paths, |rng, r| {
            accumulate_q_wave_repr(spec, c.theta, t, c.x, u, r.len(), rng)
        })?);
        w.row(
            &[
                t,
                c.x,
                direct.mean(),
                direct.stderr(),
                wave.mean(),
                wave.stderr(),
            ]
            .map(fmt_f64),
        )?;
    }
    w.finish()?;
    Ok(RunOutcome::ok(vec![format!(
        "wrote {}",
        c.output_path.display()
    )]))
}

/// Residual bound of `symbol-check`.
pub const SYMBOL_TOLERANCE: f64 = 1e-8;

/// `symbol-check`: quadrature residuals of `(λ + iξv)^α` on a fixed grid.
fn run_symbol_check(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let mut w = CsvWriter::create(
        &c.output_path,
        &header(&["alpha", "lambda", "xi_v", "residual", "pass"]),
    )?;
    let mut failed = 0;
    for &lambda in &[0.25, 0.5, 1.0, 2.0, 5.0] {
        for &xi_v in &[0.0, 1.0, -1.0, 2.5, -6.0] {
            let r = verify_symbol(c.alpha, 1.0, xi_v, Complex64::new(lambda, 0.0))?;
            let pass = r < SYMBOL_TOLERANCE;
            failed += usize::from(!pass);
            w.row(&[
                fmt_f64(c.alpha),
                fmt_f64(lambda),
                fmt_f64(xi_v),
                fmt_f64(r),
                pass.to_string(),
            ])?;
        }
    }
    w.finish()?;
    Ok(RunOutcome {
        exit_code: i32::from(failed > 0),
        lines: vec![format!(
            "{failed} symbol residuals at or above {SYMBOL_TOLERANCE:e}"
        )],
    })
}

pub fn law_settings(c: &ExperimentConfig) -> LawSettings {
    LawSettings {
        alpha: c.alpha,
        theta: c.theta,
        dimension: c.dimension,
        n_paths: c.n_paths,
        seed: c.seed,
        workers: c.workers,
        t_grid: c.t_grid.clone(),
    }
}

pub fn write_report(path: &Path, records: &[LawRecord]) -> io::Result<()> {
    write_json_lines(path, records)
}

/// `verify-laws`: JSON-lines report, exit status 1 if any law fails.
fn run_verify_laws(c: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let records = evaluate_all(&law_settings(c))?;
    write_report(&c.output_path, &records)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    let mut lines: Vec<String> = records.iter().map(LawRecord::summary).collect();
    lines.push(format!(
        "{} of {} laws passed; report at {}",
        records.len() - failed,
        records.len(),
        c.output_path.display()
    ));
    Ok(RunOutcome {
        exit_code: i32::from(failed > 0),
        lines,
    })
}
