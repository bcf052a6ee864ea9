//! Run orchestration and the file formats behind the `mclaw` binary.
//!
//! Files written by `run` into `output_dir`:
//! - `solution.csv`: `x1,x2,u`, the field at the final time.
//! - `diagnostics.csv`: one row per step,
//!   `step,t,min,max,fault_count,dropped_count,max_influence,center_bound_active,wall_ms`.
//! - `metadata.txt`: `key = value` lines, the resolved configuration followed
//!   by run statistics (`nodes`, `boundary_nodes`, `steps`, `wall_s`,
//!   `dropped_nodes`, `max_influence`, `viscosity_built`, `viscosity_disabled`).
//! - `errors.csv`: `e1,e2,n`, when a reference grid or an exact solution exists.
//! - `snapshots/u_NNNNNN.csv`: solution every `snapshot_every` steps.

mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{key_values, parse_config, RunConfig, KEYS};

use crate::bench::io::{self, write_solution};
use crate::bench::{errors, load_reference_grid, load_solution, ErrorReport, GridField, Problem, ProblemId};
use crate::error::{Error, Result};
use crate::fault::{detect_faults, viscosity_field, FaultSet, IndicatorCache};
use crate::geometry::{Domain, NodeCloud, NodeKind, NodeSet};
use crate::scheme::{BoundaryFn, RunResult, Solver, StepDiagnostics};

/// Neighbour lists cached per node; larger requests are answered by the index.
pub const TABLE_WIDTH: usize = 48;

pub fn build_cloud(cfg: &RunConfig) -> Result<(Problem, NodeCloud)> {
    let problem = Problem::new(cfg.problem);
    let nodes = problem.nodes(cfg.node_kind, cfg.h, Some(cfg.seed))?;
    let cloud = NodeCloud::new(nodes, TABLE_WIDTH)?;
    Ok((problem, cloud))
}

/// Statistics of a finished run, as written to the metadata file.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub nodes: usize,
    pub boundary_nodes: usize,
    pub steps: usize,
    pub wall_s: f64,
    pub dropped_nodes: usize,
    pub max_influence: usize,
    pub viscosity_built: usize,
    pub viscosity_disabled: usize,
    pub report: Option<ErrorReport>,
}

impl RunSummary {
    fn from_result(cloud: &NodeCloud, res: &RunResult, wall_s: f64, report: Option<ErrorReport>) -> Self {
        RunSummary {
            nodes: cloud.len(),
            boundary_nodes: cloud.nodes.boundary_ids().len(),
            steps: res.diagnostics.len(),
            wall_s,
            dropped_nodes: res.dropped_nodes.len(),
            max_influence: res.diagnostics.iter().map(|d| d.max_influence).max().unwrap_or(0),
            viscosity_built: res.viscosity_built,
            viscosity_disabled: res.viscosity_disabled,
            report,
        }
    }
}

pub fn metadata_text(cfg: &RunConfig, s: &RunSummary) -> String {
    let mut out = cfg.to_text();
    let _ = writeln!(out, "nodes = {}", s.nodes);
    let _ = writeln!(out, "boundary_nodes = {}", s.boundary_nodes);
    let _ = writeln!(out, "steps = {}", s.steps);
    let _ = writeln!(out, "wall_s = {}", s.wall_s);
    let _ = writeln!(out, "dropped_nodes = {}", s.dropped_nodes);
    let _ = writeln!(out, "max_influence = {}", s.max_influence);
    let _ = writeln!(out, "viscosity_built = {}", s.viscosity_built);
    let _ = writeln!(out, "viscosity_disabled = {}", s.viscosity_disabled);
    if let Some(r) = s.report {
        let _ = writeln!(out, "E1 = {:e}", r.e1);
        let _ = writeln!(out, "E2 = {:e}", r.e2);
    }
    out
}

/// Splits a metadata file into the run configuration and the remaining
/// statistics.
pub fn parse_metadata(path: &Path, text: &str) -> Result<(RunConfig, BTreeMap<String, String>)> {
    let mut cfg = String::new();
    let mut rest = BTreeMap::new();
    for (_, k, v) in key_values(path, text)? {
        if KEYS.contains(&k.as_str()) {
            let _ = writeln!(cfg, "{k} = {v}");
        } else {
            rest.insert(k, v);
        }
    }
    Ok((RunConfig::parse(path, &cfg)?, rest))
}

pub fn diagnostics_csv(diag: &[StepDiagnostics]) -> String {
    let mut out = String::from("step,t,min,max,fault_count,dropped_count,max_influence,center_bound_active,wall_ms\n");
    for d in diag {
        let _ = writeln!(
            out,
            "{},{:e},{:e},{:e},{},{},{},{},{:.3}",
            d.step, d.t, d.min, d.max, d.fault_count, d.dropped_count, d.max_influence, d.center_bound_active, d.wall_ms
        );
    }
    out
}

pub fn parse_diagnostics(path: &Path, text: &str) -> Result<Vec<StepDiagnostics>> {
    let err = |line: usize, msg: String| Error::Parse { path: path.display().to_string(), line, msg };
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 9 {
            return Err(err(ln + 1, format!("expected 9 fields, got {}", f.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| err(ln + 1, format!("bad integer `{s}`")));
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(ln + 1, format!("bad number `{s}`")));
        out.push(StepDiagnostics {
            step: int(f[0])?,
            t: num(f[1])?,
            min: num(f[2])?,
            max: num(f[3])?,
            fault_count: int(f[4])?,
            dropped_count: int(f[5])?,
            max_influence: int(f[6])?,
            center_bound_active: int(f[7])?,
            wall_ms: num(f[8])?,
        });
    }
    Ok(out)
}

pub fn error_report_csv(r: &ErrorReport) -> String {
    format!("e1,e2,n\n{:e},{:e},{}\n", r.e1, r.e2, r.n)
}

pub fn parse_error_report(path: &Path, text: &str) -> Result<ErrorReport> {
    let err = |msg: &str| Error::Parse { path: path.display().to_string(), line: 2, msg: msg.to_string() };
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("e1,e2,n") {
        return Err(Error::Parse { path: path.display().to_string(), line: 1, msg: "expected header `e1,e2,n`".into() });
    }
    let row: Vec<&str> = lines.next().ok_or_else(|| err("missing values"))?.split(',').map(str::trim).collect();
    if row.len() != 3 {
        return Err(err("expected 3 fields"));
    }
    Ok(ErrorReport {
        e1: row[0].parse().map_err(|_| err("bad e1"))?,
        e2: row[1].parse().map_err(|_| err("bad e2"))?,
        n: row[2].parse().map_err(|_| err("bad n"))?,
    })
}

/// Reference values at the nodes: the grid interpolant when `reference`
/// is set, otherwise the exact solution at `t` if the problem has one.
pub fn reference_at_nodes(problem: &Problem, reference: Option<&GridField>, nodes: &NodeSet, t: f64) -> Result<Option<Vec<f64>>> {
    if let Some(grid) = reference {
        return nodes.points().map(|p| grid.interp(p)).collect::<Result<Vec<_>>>().map(Some);
    }
    Ok(if problem.has_exact() {
        Some(nodes.points().map(|p| problem.exact(t, p).expect("problem has an exact solution")).collect())
    } else {
        None
    })
}

/// Runs the configured problem and writes all outputs.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunSummary> {
    let clock = Instant::now();
    let reference = cfg.reference.as_deref().map(load_reference_grid).transpose()?;
    let (problem, cloud) = build_cloud(cfg)?;
    let u0 = problem.initial_values(&cloud.nodes);
    log::info!(
        "{}: {} nodes ({} on the boundary), {} steps of dt = {}",
        problem.id.name(),
        cloud.len(),
        cloud.nodes.boundary_ids().len(),
        cfg.steps(),
        cfg.dt
    );

    let dir = &cfg.output_dir;
    let dim = cloud.nodes.dim();
    let exact = |t: f64, x: &[f64]| problem.exact(t, x).expect("inflow data comes from the exact solution");
    let boundary: Option<BoundaryFn<'_>> = match problem.boundary {
        crate::bench::BoundaryKind::InflowExact => Some(&exact),
        crate::bench::BoundaryKind::Periodic => None,
    };

    let mut solver = Solver::new(&cloud, problem.flux.clone(), cfg.scheme_config())?;
    let mut snapshot_err = None;
    if cfg.snapshot_every > 0 {
        write_solution(&snapshot_path(dir, 0), dim, cloud.nodes.coords(), &u0)?;
    }
    let res = solver.run_with(&u0, boundary, |view| {
        let step = view.diagnostics.step;
        if cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 && snapshot_err.is_none() {
            if let Err(e) = write_solution(&snapshot_path(dir, step), dim, cloud.nodes.coords(), view.new) {
                snapshot_err = Some(e);
            }
        }
    })?;
    if let Some(e) = snapshot_err {
        return Err(e);
    }

    write_solution(&dir.join("solution.csv"), dim, cloud.nodes.coords(), &res.values)?;
    io::write(&dir.join("diagnostics.csv"), &diagnostics_csv(&res.diagnostics))?;
    let report = match reference_at_nodes(&problem, reference.as_ref(), &cloud.nodes, res.t)? {
        Some(r) => {
            let report = errors(&res.values, &r)?;
            io::write(&dir.join("errors.csv"), &error_report_csv(&report))?;
            Some(report)
        }
        None => None,
    };
    let summary = RunSummary::from_result(&cloud, &res, clock.elapsed().as_secs_f64(), report);
    io::write(&dir.join("metadata.txt"), &metadata_text(cfg, &summary))?;
    Ok(summary)
}

fn snapshot_path(dir: &Path, step: usize) -> PathBuf {
    dir.join("snapshots").join(format!("u_{step:06}.csv"))
}

/// `x1,...,xd,boundary` with the boundary flag as 0 or 1.
pub fn nodes_csv(nodes: &NodeSet) -> String {
    let mut out = String::new();
    for k in 1..=nodes.dim() {
        let _ = write!(out, "x{k},");
    }
    out.push_str("boundary\n");
    for (i, p) in nodes.points().enumerate() {
        for x in p {
            let _ = write!(out, "{x:e},");
        }
        let _ = writeln!(out, "{}", u8::from(nodes.is_boundary(i)));
    }
    out
}

/// Coordinates and boundary flags of a nodes CSV.
pub fn parse_nodes_csv(path: &Path, text: &str) -> Result<(usize, Vec<f64>, Vec<bool>)> {
    let err = |line: usize, msg: String| Error::Parse { path: path.display().to_string(), line, msg };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let dim = cols.len().saturating_sub(1);
    let expected: Vec<String> = (1..=dim).map(|k| format!("x{k}")).chain(["boundary".to_string()]).collect();
    if dim == 0 || cols != expected {
        return Err(err(1, format!("expected header `{}`", expected.join(","))));
    }
    let (mut coords, mut flags) = (Vec::new(), Vec::new());
    for (ln, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != dim + 1 {
            return Err(err(ln + 1, format!("expected {} fields, got {}", dim + 1, f.len())));
        }
        for s in &f[..dim] {
            coords.push(s.parse().map_err(|_| err(ln + 1, format!("not a number: `{s}`")))?);
        }
        flags.push(match f[dim] {
            "0" => false,
            "1" => true,
            s => return Err(err(ln + 1, format!("boundary flag must be 0 or 1, got `{s}`"))),
        });
    }
    Ok((dim, coords, flags))
}

pub fn cmd_nodes(cfg: &RunConfig) -> Result<String> {
    let problem = Problem::new(cfg.problem);
    Ok(nodes_csv(&problem.nodes(cfg.node_kind, cfg.h, Some(cfg.seed))?))
}

/// Options of the standalone fault detection.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultOptions {
    pub h: f64,
    pub n_f: usize,
    pub n_max: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Viscosity factor for the `mu` field; `0.5 h` when unset.
    pub mu: Option<f64>,
    /// Domain of this benchmark instead of the bounding box of the nodes.
    pub problem: Option<ProblemId>,
}

impl FaultOptions {
    pub fn new(h: f64) -> Self {
        FaultOptions { h, n_f: 10, n_max: 100, c1: 1.0, c2: 2.0, c3: 5.0, mu: None, problem: None }
    }
}

fn bounding_box(dim: usize, coords: &[f64]) -> Result<Domain> {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in coords.chunks_exact(dim) {
        for k in 0..dim {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    Domain::boxed(lo, hi)
}

/// Fault set and viscosity field of a scattered dataset.
pub fn faults_of(sol: &crate::bench::Solution, opts: &FaultOptions) -> Result<(NodeCloud, FaultSet, Vec<f64>)> {
    if !(opts.h > 0.0) {
        return Err(Error::BadValue { key: "h".into(), msg: format!("must be positive, got {}", opts.h) });
    }
    if sol.is_empty() {
        return Err(Error::EmptyInput);
    }
    let domain = match opts.problem {
        Some(id) => {
            let d = Problem::new(id).domain;
            if d.dim() != sol.dim {
                return Err(Error::DimensionMismatch(format!("solution is {}-dimensional, {} is {}-dimensional", sol.dim, id.name(), d.dim())));
            }
            d
        }
        None => bounding_box(sol.dim, &sol.coords)?,
    };
    let nodes = NodeSet::from_coords(sol.coords.clone(), opts.h, domain, NodeKind::Random)?;
    let cloud = NodeCloud::new(nodes, TABLE_WIDTH.min(sol.len() - 1))?;
    let cache = IndicatorCache::new(&cloud, opts.n_f, opts.n_max)?;
    let faults = detect_faults(&sol.values, &cache, opts.c1, opts.c2)?;
    let mu = viscosity_field(&cloud, &faults.ids, opts.mu.unwrap_or(0.5 * opts.h), opts.c3, opts.h);
    Ok((cloud, faults, mu))
}

/// Writes `faults.csv` (`id,x1,..,xd,indicator,is_fault`) and `mu.csv`
/// (`id,x1,..,xd,mu`) into `out_dir`.
pub fn cmd_faults(solution: &Path, opts: &FaultOptions, out_dir: &Path) -> Result<FaultSet> {
    let sol = load_solution(solution)?;
    let (cloud, faults, mu) = faults_of(&sol, opts)?;
    let mut is_fault = vec![false; cloud.len()];
    for &i in &faults.ids {
        is_fault[i] = true;
    }
    let coord_header: String = (1..=sol.dim).map(|k| format!("x{k},")).collect();
    let mut f = format!("id,{coord_header}indicator,is_fault\n");
    let mut m = format!("id,{coord_header}mu\n");
    for i in 0..cloud.len() {
        let p: String = sol.point(i).iter().map(|x| format!("{x:e},")).collect();
        let _ = writeln!(f, "{i},{p}{:e},{}", faults.indicator[i], u8::from(is_fault[i]));
        let _ = writeln!(m, "{i},{p}{:e}", mu[i]);
    }
    io::write(&out_dir.join("faults.csv"), &f)?;
    io::write(&out_dir.join("mu.csv"), &m)?;
    Ok(faults)
}

/// What a solution is compared against.
#[derive(Clone, Debug, PartialEq)]
pub enum ErrorReference {
    Grid(PathBuf),
    Exact { problem: ProblemId, t: f64 },
}

pub fn cmd_errors(solution: &Path, reference: &ErrorReference) -> Result<ErrorReport> {
    let sol = load_solution(solution)?;
    let points = sol.coords.chunks_exact(sol.dim);
    let r: Vec<f64> = match reference {
        ErrorReference::Grid(path) => {
            let grid = load_reference_grid(path)?;
            if sol.dim != 2 {
                return Err(Error::DimensionMismatch(format!("reference grids are 2-dimensional, solution is {}-dimensional", sol.dim)));
            }
            points.map(|p| grid.interp(p)).collect::<Result<_>>()?
        }
        ErrorReference::Exact { problem, t } => {
            let p = Problem::new(*problem);
            if !p.has_exact() {
                return Err(Error::BadValue { key: "exact".into(), msg: format!("{} has no exact solution", problem.name()) });
            }
            if !(*t >= 0.0) {
                return Err(Error::BadValue { key: "t".into(), msg: format!("must be nonnegative, got {t}") });
            }
            points.map(|x| p.exact(*t, x).expect("checked above")).collect()
        }
    };
    errors(&sol.values, &r)
}
