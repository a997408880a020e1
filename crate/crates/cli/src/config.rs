//! Flat `key=value` run configuration.

use std::path::Path;

use qtunnel::{Asymmetry, ModelParams, QuadratureConfig};

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 9] = [
    "v0", "sigma", "gamma", "tau_p", "cutoff", "rel_tol", "abs_tol", "max_depth", "tail_mult",
];

/// Raw values before validation; `None` falls back to the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub v0: Option<f64>,
    pub sigma: Option<Asymmetry>,
    pub gamma: Option<f64>,
    pub tau_p: Option<f64>,
    pub cutoff: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub tail_mult: Option<f64>,
}

impl Settings {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {lineno}: expected key=value")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("line {lineno}: malformed number '{value}' for {key}"))
                })
            };
            match key {
                "v0" => s.v0 = Some(num()?),
                "sigma" => {
                    let v: Asymmetry = value.parse().map_err(|e: qtunnel::Error| {
                        CliError::Usage(format!("line {lineno}: {e}"))
                    })?;
                    s.sigma = Some(v);
                }
                "gamma" => s.gamma = Some(num()?),
                "tau_p" => s.tau_p = Some(num()?),
                "cutoff" => s.cutoff = Some(num()?),
                "rel_tol" => s.rel_tol = Some(num()?),
                "abs_tol" => s.abs_tol = Some(num()?),
                "max_depth" => {
                    s.max_depth = Some(value.parse().map_err(|_| {
                        CliError::Usage(format!("line {lineno}: malformed integer '{value}' for max_depth"))
                    })?)
                }
                "tail_mult" => s.tail_mult = Some(num()?),
                other => return Err(CliError::Usage(format!("line {lineno}: unknown key '{other}'"))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: &Settings) -> Settings {
        Settings {
            v0: over.v0.or(self.v0),
            sigma: over.sigma.or(self.sigma),
            gamma: over.gamma.or(self.gamma),
            tau_p: over.tau_p.or(self.tau_p),
            cutoff: over.cutoff.or(self.cutoff),
            rel_tol: over.rel_tol.or(self.rel_tol),
            abs_tol: over.abs_tol.or(self.abs_tol),
            max_depth: over.max_depth.or(self.max_depth),
            tail_mult: over.tail_mult.or(self.tail_mult),
        }
    }

    pub fn model(&self) -> CliResult<ModelParams> {
        Ok(ModelParams::new(
            self.v0.unwrap_or(12.5),
            self.sigma.unwrap_or(Asymmetry::Finite(1.0)),
            self.gamma.unwrap_or(0.0),
            self.tau_p.unwrap_or(0.0),
            self.cutoff.unwrap_or(8000.0),
        )?)
    }

    pub fn quadrature(&self) -> CliResult<QuadratureConfig> {
        let d = QuadratureConfig::default();
        let q = QuadratureConfig {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_depth: self.max_depth.unwrap_or(d.max_depth),
            tail_mult: self.tail_mult.unwrap_or(d.tail_mult),
        };
        q.validate()?;
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let s = Settings::parse("").unwrap();
        let p = s.model().unwrap();
        assert_eq!(p.barrier_b(), 12.5);
        assert_eq!(p.sigma_ratio(), Asymmetry::Finite(1.0));
        assert_eq!((p.gamma(), p.tau_p(), p.cutoff_w()), (0.0, 0.0, 8000.0));
        assert_eq!(s.quadrature().unwrap(), QuadratureConfig::default());
    }

    #[test]
    fn sharp_wall_file() {
        let s = Settings::parse("v0=12.5\nsigma=inf\ncutoff=8000\n").unwrap();
        assert!(s.model().unwrap().is_sharp());
    }

    #[test]
    fn errors_name_the_problem() {
        let e = Settings::parse("v0=1\nfoo=2").unwrap_err();
        assert!(matches!(&e, CliError::Usage(m) if m.contains("foo")));
        let e = Settings::parse("# c\n\ngamma=abc").unwrap_err();
        assert!(matches!(&e, CliError::Usage(m) if m.contains("line 3")));
        let s = Settings::parse("sigma=-1");
        assert!(s.is_err() || s.unwrap().model().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::parse("gamma=0.3\ntau_p=0.1").unwrap();
        let flags = Settings {
            gamma: Some(0.7),
            ..Settings::default()
        };
        let s = file.overlay(&flags);
        assert_eq!(s.gamma, Some(0.7));
        assert_eq!(s.tau_p, Some(0.1));
    }
}
