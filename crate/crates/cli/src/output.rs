//! CSV emission: `#` metadata lines, a header row, `%.12g` fields.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qtunnel::spectral::Method;
use qtunnel::{ModelParams, QuadratureConfig};

use crate::error::{CliError, CliResult};
use crate::eval::Row;
use crate::format::{g12, opt};

const BASE_COLUMNS: [&str; 7] = ["x", "xi_b", "s_cl", "s_cl_bare", "enhancement", "x_esc", "delta_e"];
const PREFACTOR_COLUMNS: [&str; 3] = ["ln_r", "lambda1", "k_ratio"];

/// Parameter echo for the comment header.
pub fn metadata(command: &str, p: &ModelParams, q: &QuadratureConfig, method: Method) -> Vec<String> {
    vec![
        format!("qtunnel {}", env!("CARGO_PKG_VERSION")),
        format!("command: {command}"),
        format!(
            "v0={} sigma={} gamma={} tau_p={} cutoff={}",
            g12(p.barrier_b()),
            match p.sigma_ratio() {
                qtunnel::Asymmetry::Finite(v) => g12(v),
                qtunnel::Asymmetry::Infinite => "inf".into(),
            },
            g12(p.gamma()),
            g12(p.tau_p()),
            g12(p.cutoff_w())
        ),
        format!(
            "rel_tol={} abs_tol={} max_depth={} tail_mult={}",
            g12(q.rel_tol),
            g12(q.abs_tol),
            q.max_depth,
            g12(q.tail_mult)
        ),
        format!(
            "method={}",
            match method {
                Method::Expansion => "expansion",
                Method::Quadrature => "quadrature",
            }
        ),
    ]
}

pub fn write_csv<W: Write>(out: W, meta: &[String], rows: &[Row], prefactor: bool) -> io::Result<()> {
    let mut out = out;
    for line in meta {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = BASE_COLUMNS.to_vec();
    if prefactor {
        header.extend(PREFACTOR_COLUMNS);
    }
    header.push("error");
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            opt(r.x),
            opt(r.xi_b),
            opt(r.s_cl),
            opt(r.s_cl_bare),
            opt(r.enhancement),
            opt(r.x_esc),
            opt(r.delta_e),
        ];
        if prefactor {
            rec.extend([opt(r.ln_r), opt(r.lambda1), opt(r.k_ratio)]);
        }
        rec.push(r.error.clone());
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, meta: &[String], rows: &[Row], prefactor: bool) -> CliResult<()> {
    let unwritable = |e: io::Error, what: &str| CliError::Unwritable(format!("{what}: {e}"));
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| unwritable(e, &p.display().to_string()))?;
            write_csv(BufWriter::new(f), meta, rows, prefactor)
                .map_err(|e| unwritable(e, &p.display().to_string()))
        }
        None => write_csv(io::stdout().lock(), meta, rows, prefactor).map_err(|e| unwritable(e, "stdout")),
    }
}
