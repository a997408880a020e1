//! Fast closed-form checks of an installed build.

use std::f64::consts::PI;
use std::io::Write;

use qtunnel::bounce::{bare_bounce_time, enhancement};
use qtunnel::path::energy_loss;
use qtunnel::smooth::{matching_time, SmoothParams};
use qtunnel::spectral::Method;
use qtunnel::specfun::sin_integral;
use qtunnel::{Asymmetry, ModelParams, QuadratureConfig};

use crate::error::{CliError, CliResult};

struct Check {
    name: &'static str,
    run: fn(&QuadratureConfig) -> qtunnel::Result<(f64, f64)>,
}

/// Each check returns `(error, tolerance)`.
const CHECKS: [Check; 6] = [
    Check {
        name: "uncoupled enhancement is 1",
        run: |q| {
            let p = ModelParams::new(12.5, Asymmetry::Finite(1.0), 0.0, 0.0, 8000.0)?;
            Ok(((enhancement(&p, q, Method::Expansion)?.enhancement - 1.0).abs(), 1e-9))
        },
    },
    Check {
        name: "uncoupled bounce time at sigma=3",
        run: |q| {
            let p = ModelParams::new(12.5, Asymmetry::Finite(3.0), 0.0, 0.0, 8000.0)?;
            let xi = enhancement(&p, q, Method::Expansion)?.xi_b;
            Ok(((xi - bare_bounce_time(3.0)).abs(), 1e-9))
        },
    },
    Check {
        name: "sharp-wall bare action equals a^2",
        run: |q| {
            let p = ModelParams::new(12.5, Asymmetry::Infinite, 0.0, 0.0, 8000.0)?;
            Ok(((enhancement(&p, q, Method::Expansion)?.s_cl_bare - 25.0).abs(), 1e-9))
        },
    },
    Check {
        name: "expansion and quadrature kernels agree",
        run: |q| {
            let p = ModelParams::new(12.5, Asymmetry::Finite(2.0), 0.3, 0.1, 500.0)?;
            let a = enhancement(&p, q, Method::Expansion)?.s_cl;
            let b = enhancement(&p, q, Method::Quadrature)?.s_cl;
            Ok(((a - b).abs() / a.abs(), 1e-7))
        },
    },
    Check {
        name: "no energy loss without coupling",
        run: |q| {
            let p = ModelParams::new(12.5, Asymmetry::Finite(2.0), 0.0, 0.0, 8000.0)?;
            Ok((energy_loss(&p, q, Method::Expansion)?.value.abs(), 1e-8))
        },
    },
    Check {
        name: "special functions and smooth matching time",
        run: |_| {
            let si = (sin_integral(1.0) - 0.946_083_070_367_183).abs();
            let sp = SmoothParams::new(12.5, 1.0, 8000.0)?;
            let t = (matching_time(&sp)? - 0.75 * PI).abs();
            Ok((si.max(t), 1e-12))
        },
    },
];

/// Prints one line per check; fails with the number of failed checks.
pub fn run(out: &mut impl Write, q: &QuadratureConfig) -> CliResult<()> {
    let mut failed = 0;
    for c in &CHECKS {
        let line = match (c.run)(q) {
            Ok((err, tol)) if err <= tol => format!("ok   {} (error {err:.2e} <= {tol:.0e})", c.name),
            Ok((err, tol)) => {
                failed += 1;
                format!("FAIL {} (error {err:.2e} > {tol:.0e})", c.name)
            }
            Err(e) => {
                failed += 1;
                format!("FAIL {} ({e})", c.name)
            }
        };
        writeln!(out, "{line}").map_err(|e| CliError::Unwritable(e.to_string()))?;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::SelfTest(failed))
    }
}
