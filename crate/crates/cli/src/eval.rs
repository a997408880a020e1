//! Single-point evaluation into a CSV row.

use qtunnel::bounce::enhancement;
use qtunnel::path::energy_loss;
use qtunnel::prefactor::prefactor_k;
use qtunnel::spectral::Method;
use qtunnel::{ModelParams, QuadratureConfig};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub x: Option<f64>,
    pub xi_b: Option<f64>,
    pub s_cl: Option<f64>,
    pub s_cl_bare: Option<f64>,
    pub enhancement: Option<f64>,
    pub x_esc: Option<f64>,
    pub delta_e: Option<f64>,
    pub ln_r: Option<f64>,
    pub lambda1: Option<f64>,
    pub k_ratio: Option<f64>,
    pub error: String,
    /// Advisories; reported on stderr, not in the CSV.
    pub warnings: Vec<String>,
}

impl Row {
    pub fn failed(&self) -> bool {
        !self.error.is_empty()
    }

    /// A row carrying only an analytic enhancement.
    pub fn analytic(x: f64, enhancement: f64) -> Row {
        Row {
            x: Some(x),
            enhancement: Some(enhancement),
            ..Row::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub quadrature: QuadratureConfig,
    pub method: Method,
    pub prefactor: bool,
}

/// Bounce, escape point and optionally the prefactor. Failures end up in
/// the `error` field; the first failing stage stops the row.
pub fn evaluate(x: Option<f64>, p: &ModelParams, opts: &EvalOptions) -> Row {
    let mut row = Row {
        x,
        ..Row::default()
    };
    let q = &opts.quadrature;
    let sol = match enhancement(p, q, opts.method) {
        Ok(s) => s,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    row.xi_b = Some(sol.xi_b);
    row.s_cl = Some(sol.s_cl);
    row.s_cl_bare = Some(sol.s_cl_bare);
    row.enhancement = Some(sol.enhancement);
    row.warnings = sol.warnings;
    if p.is_sharp() {
        if opts.prefactor {
            row.warnings.push("prefactor needs a finite asymmetry".into());
        }
        return row;
    }
    match energy_loss(p, q, opts.method) {
        Ok(l) => {
            row.x_esc = Some(l.x_esc);
            row.delta_e = Some(l.value);
            if l.clamped {
                row.warnings.push(format!("energy loss {} clamped to [0, sigma]", l.raw));
            }
        }
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    }
    if opts.prefactor {
        match prefactor_k(p, q, opts.method) {
            Ok(k) => {
                row.ln_r = Some(k.ln_r);
                row.lambda1 = Some(k.lambda1);
                row.k_ratio = Some(k.k_ratio);
                row.warnings.extend(k.warnings);
            }
            Err(e) => row.error = e.to_string(),
        }
    }
    row.warnings.sort();
    row.warnings.dedup();
    row
}
