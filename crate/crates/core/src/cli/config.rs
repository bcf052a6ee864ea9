//! `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Keys:
//!
//! | key              | meaning                                   | default                 |
//! |------------------|-------------------------------------------|-------------------------|
//! | `problem`        | `burgers_corner`, `burgers_smooth`, `rotating_wave` | required      |
//! | `algorithm`      | `none`, `constant`, `adaptive` (or 1, 2, 3) | `adaptive`            |
//! | `node_kind`      | `halton`, `grid`, `random`                | `halton`                |
//! | `h`              | node spacing                              | per problem             |
//! | `T`              | final time                                | per problem             |
//! | `v0`             | characteristic speed                      | per problem             |
//! | `dt`             | time step                                 | `0.2 h / v0`            |
//! | `mu`             | viscosity factor                          | `0.5 h v0`              |
//! | `n_min`, `n_max` | influence set sizes                       | 10, 100                 |
//! | `n_F`            | indicator stencil size                    | 10                      |
//! | `C1`, `C2`, `C3` | fault thresholds and viscosity ramp width | 1, 2, 5                 |
//! | `seed`           | seed for `random` nodes                   | 0                       |
//! | `output_dir`     | directory for all outputs                 | `out`                   |
//! | `reference`      | reference grid file for error reports     | none                    |
//! | `snapshot_every` | steps between solution snapshots, 0 = off | 0                       |
//!
//! Paths are used as written, relative to the working directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bench::{Problem, ProblemId};
use crate::error::{Error, Result};
use crate::geometry::NodeKind;
use crate::scheme::{steps_for, Algorithm, SchemeConfig};

/// A fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub algorithm: Algorithm,
    pub node_kind: NodeKind,
    pub h: f64,
    pub t_final: f64,
    pub v0: f64,
    pub dt: f64,
    pub mu: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub n_f: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub reference: Option<PathBuf>,
    pub snapshot_every: usize,
}

pub const KEYS: [&str; 18] = [
    "problem",
    "algorithm",
    "node_kind",
    "h",
    "T",
    "v0",
    "dt",
    "mu",
    "n_min",
    "n_max",
    "n_F",
    "C1",
    "C2",
    "C3",
    "seed",
    "output_dir",
    "reference",
    "snapshot_every",
];

/// Splits `key = value` text into pairs with their line numbers. Blank
/// lines and `#` comments are skipped; a repeated key is an error.
pub fn key_values(path: &Path, text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: ln + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if out.iter().any(|(_, key, _)| key == k) {
            return Err(Error::Parse { path: path.display().to_string(), line: ln + 1, msg: format!("duplicate key `{k}`") });
        }
        out.push((ln + 1, k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn bad(key: &str, msg: impl Into<String>) -> Error {
    Error::BadValue { key: key.to_string(), msg: msg.into() }
}

fn positive(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| bad(key, format!("`{v}` is not a number")))?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(bad(key, format!("must be positive and finite, got {v}")));
    }
    Ok(x)
}

fn nonnegative(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| bad(key, format!("`{v}` is not a number")))?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(bad(key, format!("must be nonnegative and finite, got {v}")));
    }
    Ok(x)
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| bad(key, format!("`{v}` is not a nonnegative integer")))
}

impl RunConfig {
    /// Resolves `key = value` text.
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let pairs = key_values(path, text)?;
        for (_, k, _) in &pairs {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::UnknownKey(k.clone()));
            }
        }
        let get = |key: &str| pairs.iter().find(|(_, k, _)| k == key).map(|(_, _, v)| v.as_str());

        let problem: ProblemId = get("problem").ok_or_else(|| Error::MissingRequired("problem".into()))?.parse()?;
        let p = Problem::new(problem);
        let algorithm = match get("algorithm") {
            Some(v) => v.parse()?,
            None => Algorithm::AdaptiveViscosity,
        };
        let node_kind = match get("node_kind") {
            Some(v) => v.parse().map_err(|e: String| bad("node_kind", e))?,
            None => NodeKind::Halton,
        };
        let h = get("h").map(|v| positive("h", v)).transpose()?.unwrap_or(p.default_h);
        let t_final = get("T").map(|v| positive("T", v)).transpose()?.unwrap_or(p.default_t);
        let v0 = get("v0").map(|v| positive("v0", v)).transpose()?.unwrap_or_else(|| p.v0());
        let dt = get("dt").map(|v| positive("dt", v)).transpose()?.unwrap_or(0.2 * h / v0);
        let mu = get("mu").map(|v| nonnegative("mu", v)).transpose()?.unwrap_or(0.5 * h * v0);
        let n_min = get("n_min").map(|v| count("n_min", v)).transpose()?.unwrap_or(10);
        let n_max = get("n_max").map(|v| count("n_max", v)).transpose()?.unwrap_or(100);
        let n_f = get("n_F").map(|v| count("n_F", v)).transpose()?.unwrap_or(10);
        let c1 = get("C1").map(|v| positive("C1", v)).transpose()?.unwrap_or(1.0);
        let c2 = get("C2").map(|v| positive("C2", v)).transpose()?.unwrap_or(2.0);
        let c3 = get("C3").map(|v| positive("C3", v)).transpose()?.unwrap_or(5.0);
        let seed = match get("seed") {
            Some(v) => v.parse().map_err(|_| bad("seed", format!("`{v}` is not a 64-bit unsigned integer")))?,
            None => 0,
        };
        let output_dir = PathBuf::from(get("output_dir").unwrap_or("out"));
        if output_dir.as_os_str().is_empty() {
            return Err(bad("output_dir", "must not be empty"));
        }
        let reference = get("reference").filter(|v| !v.is_empty()).map(PathBuf::from);
        let snapshot_every = get("snapshot_every").map(|v| count("snapshot_every", v)).transpose()?.unwrap_or(0);

        if n_min < 1 {
            return Err(bad("n_min", "must be at least 1"));
        }
        if n_max < n_min {
            return Err(bad("n_max", format!("must be at least n_min = {n_min}")));
        }
        if n_f < 1 || n_f > n_max {
            return Err(bad("n_F", format!("must lie in 1..={n_max}")));
        }
        steps_for(t_final, dt).map_err(|e| bad("dt", e.to_string()))?;
        if h >= p.domain.min_side() {
            return Err(bad("h", format!("must be smaller than the shortest domain side {}", p.domain.min_side())));
        }

        Ok(RunConfig {
            problem,
            algorithm,
            node_kind,
            h,
            t_final,
            v0,
            dt,
            mu,
            n_min,
            n_max,
            n_f,
            c1,
            c2,
            c3,
            seed,
            output_dir,
            reference,
            snapshot_every,
        })
    }

    /// Every key with its resolved value; parsing the result gives `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem = {}", self.problem.name());
        let _ = writeln!(s, "algorithm = {}", self.algorithm.name());
        let _ = writeln!(s, "node_kind = {}", self.node_kind.name());
        let _ = writeln!(s, "h = {}", self.h);
        let _ = writeln!(s, "T = {}", self.t_final);
        let _ = writeln!(s, "v0 = {}", self.v0);
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "mu = {}", self.mu);
        let _ = writeln!(s, "n_min = {}", self.n_min);
        let _ = writeln!(s, "n_max = {}", self.n_max);
        let _ = writeln!(s, "n_F = {}", self.n_f);
        let _ = writeln!(s, "C1 = {}", self.c1);
        let _ = writeln!(s, "C2 = {}", self.c2);
        let _ = writeln!(s, "C3 = {}", self.c3);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        if let Some(r) = &self.reference {
            let _ = writeln!(s, "reference = {}", r.display());
        }
        let _ = writeln!(s, "snapshot_every = {}", self.snapshot_every);
        s
    }

    pub fn steps(&self) -> usize {
        steps_for(self.t_final, self.dt).expect("validated when the configuration was resolved")
    }

    pub fn scheme_config(&self) -> SchemeConfig {
        SchemeConfig {
            algorithm: self.algorithm,
            dt: self.dt,
            steps: self.steps(),
            mu: self.mu,
            n_min: self.n_min,
            n_max: self.n_max,
            n_f: self.n_f,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
        }
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::parse(path, &text)
}
