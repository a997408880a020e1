//! One-parameter sweeps evaluated on a bounded worker pool.

use std::str::FromStr;

use rayon::prelude::*;

use qtunnel::{Asymmetry, ModelParams};

use crate::error::{CliError, CliResult};
use crate::eval::{evaluate, EvalOptions, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Gamma,
    TauP,
    Sigma,
    Cutoff,
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gamma" => Ok(SweepParam::Gamma),
            "tau_p" | "tau-p" => Ok(SweepParam::TauP),
            "sigma" | "sigma_ratio" => Ok(SweepParam::Sigma),
            "cutoff" | "cutoff_w" => Ok(SweepParam::Cutoff),
            other => Err(format!(
                "unknown sweep parameter '{other}' (expected gamma, tau_p, sigma or cutoff)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(format!("unknown scale '{other}' (expected linear or log)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
    /// Holds `tau_p = ratio · gamma` while sweeping gamma.
    pub ratio: Option<f64>,
    pub base: ModelParams,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.from < self.to) || !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Usage("sweep needs finite from < to".into()));
        }
        if self.points < 2 {
            return Err(CliError::Usage("sweep needs at least 2 points".into()));
        }
        if self.scale == Scale::Log && !(self.from > 0.0) {
            return Err(CliError::Usage("log sweeps need from > 0".into()));
        }
        if self.ratio.is_some() && self.param != SweepParam::Gamma {
            return Err(CliError::Usage("a linked ratio is only valid when sweeping gamma".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        grid(self.from, self.to, self.points, self.scale)
    }

    pub fn params_at(&self, v: f64) -> qtunnel::Result<ModelParams> {
        let b = &self.base;
        match self.param {
            SweepParam::Gamma => {
                let t = self.ratio.map_or(b.tau_p(), |r| r * v);
                b.with_couplings(v, t)
            }
            SweepParam::TauP => b.with_couplings(b.gamma(), v),
            SweepParam::Sigma => b.with_sigma(Asymmetry::Finite(v)),
            SweepParam::Cutoff => b.with_cutoff(v),
        }
    }
}

pub fn grid(from: f64, to: f64, points: usize, scale: Scale) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            match scale {
                Scale::Linear => from + (to - from) * f,
                Scale::Log => from * (to / from).powf(f),
            }
        })
        .collect()
}

/// Evaluates `points` in parallel; the output keeps the input order.
pub fn evaluate_all(points: &[(f64, ModelParams)], opts: &EvalOptions, jobs: Option<usize>) -> Vec<Row> {
    let work = || {
        points
            .par_iter()
            .map(|(x, p)| evaluate(Some(*x), p, opts))
            .collect::<Vec<_>>()
    };
    run_in_pool(jobs, work)
}

/// Runs `f` on a pool of `jobs` threads (default: rayon's global pool).
pub fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

pub fn run_sweep(spec: &SweepSpec, opts: &EvalOptions, jobs: Option<usize>) -> CliResult<Vec<Row>> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.points);
    let mut bad = Vec::new();
    for v in spec.values() {
        match spec.params_at(v) {
            Ok(p) => points.push((v, p)),
            Err(e) => bad.push((v, e.to_string())),
        }
    }
    let mut rows = evaluate_all(&points, opts, jobs);
    for (v, e) in bad {
        rows.push(Row {
            x: Some(v),
            error: e,
            ..Row::default()
        });
    }
    rows.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite sweep values"));
    Ok(rows)
}
