//! Task execution: turns a validated configuration into an output table.

use anyhow::{bail, Result};
use envtheory::law::classify_bound_character;
use envtheory::solver::{solve, SolveOptions};
use envtheory::{critical, simplex, BoundCharacter, Error as EtError, SystemSpec};

use crate::config::{PotentialParams, RunConfig, TaskKind};
use crate::table::{Cell, Table};

/// Solver knobs exposed on the command line.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Relative tolerance of the stationary-radius refinement.
    pub tolerance: f64,
    /// Points of the stationarity scan grid.
    pub scan_grid: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance: 1e-12,
            scan_grid: 400,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// Human-readable diagnostics for rows that did not complete; meant for
    /// stderr so the emitted table stays deterministic.
    pub diagnostics: Vec<String>,
    pub any_unbound: bool,
    pub any_error: bool,
}

impl RunOutput {
    /// 0 full success, 2 when some states were unbound, 1 on row errors.
    pub fn exit_code(&self) -> i32 {
        if self.any_error {
            1
        } else if self.any_unbound {
            2
        } else {
            0
        }
    }
}

fn solve_options(opts: &RunOptions) -> SolveOptions {
    SolveOptions {
        rel_tol: opts.tolerance,
        scan_points: opts.scan_grid,
        ..SolveOptions::default()
    }
}

fn arity_list(config: &RunConfig) -> String {
    let arities: Vec<String> = config
        .potentials
        .iter()
        .filter(|p| p.arity >= 2)
        .map(|p| p.arity.to_string())
        .collect();
    if arities.is_empty() {
        "-".to_string()
    } else {
        arities.join(";")
    }
}

fn character_cell(spec: &SystemSpec) -> Cell {
    let character = classify_bound_character(spec).unwrap_or(BoundCharacter::Indeterminate);
    Cell::text(character.to_string())
}

/// Executes the task configured in `config` (the `[task]` section must be
/// present by the time this is called).
pub fn execute(config: &RunConfig, opts: &RunOptions) -> Result<RunOutput> {
    config.validate()?;
    let Some(task) = &config.task else {
        bail!("no task configured");
    };
    match task.kind {
        TaskKind::Solve | TaskKind::Spectrum => run_solve(config, opts),
        TaskKind::Scan => run_scan(config, opts),
        TaskKind::Critical => run_critical(config),
        TaskKind::SimplexCheck => run_simplex_check(config),
    }
}

const SOLVE_COLUMNS: [&str; 10] = [
    "n",
    "k",
    "d",
    "q",
    "r0",
    "p0",
    "energy",
    "character",
    "residual",
    "status",
];

fn solve_row(
    config: &RunConfig,
    spec: &SystemSpec,
    q: f64,
    opts: &SolveOptions,
    out: &mut RunOutput,
) -> Vec<Cell> {
    let n = Cell::Int(i64::from(config.system.particles));
    let k = Cell::text(arity_list(config));
    let d = Cell::Int(i64::from(config.system.dimension));
    match solve(spec, q, opts) {
        Ok(sol) => vec![
            n,
            k,
            d,
            Cell::Float(q),
            Cell::Float(sol.r0),
            Cell::Float(sol.p0),
            Cell::Float(sol.energy),
            Cell::text(sol.character.to_string()),
            Cell::Float(sol.diagnostics.residual),
            Cell::text("ok"),
        ],
        Err(EtError::NoStationaryPoint { .. }) | Err(EtError::NoBoundState) => {
            out.any_unbound = true;
            vec![
                n,
                k,
                d,
                Cell::Float(q),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                character_cell(spec),
                Cell::Empty,
                Cell::text("no-bound-state"),
            ]
        }
        Err(e) => {
            out.any_error = true;
            out.diagnostics.push(format!("state q = {q}: {e}"));
            vec![
                n,
                k,
                d,
                Cell::Float(q),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::text("error"),
            ]
        }
    }
}

fn run_solve(config: &RunConfig, opts: &RunOptions) -> Result<RunOutput> {
    let mut out = RunOutput {
        table: Table::new(SOLVE_COLUMNS.to_vec()),
        diagnostics: Vec::new(),
        any_unbound: false,
        any_error: false,
    };
    let spec = config.to_system_spec()?;
    let solve_opts = solve_options(opts);
    for q in config.resolved_q_values()? {
        let row = solve_row(config, &spec, q, &solve_opts, &mut out);
        out.table.push(row);
    }
    Ok(out)
}

fn run_scan(config: &RunConfig, opts: &RunOptions) -> Result<RunOutput> {
    let mut columns = vec!["parameter", "value"];
    columns.extend(SOLVE_COLUMNS);
    let mut out = RunOutput {
        table: Table::new(columns),
        diagnostics: Vec::new(),
        any_unbound: false,
        any_error: false,
    };
    let scan = config
        .task
        .as_ref()
        .and_then(|t| t.scan.as_ref())
        .expect("validated scan task");
    let solve_opts = solve_options(opts);
    let q_values = config.resolved_q_values()?;
    for i in 0..scan.steps {
        let value = if scan.steps == 1 {
            scan.start
        } else {
            scan.start + (scan.stop - scan.start) * f64::from(i) / f64::from(scan.steps - 1)
        };
        let mut point = config.clone();
        point.apply_parameter(&scan.parameter, value)?;
        let prefix = vec![Cell::text(scan.parameter.clone()), Cell::Float(value)];
        match point.validate().and_then(|_| point.to_system_spec()) {
            Ok(spec) => {
                for &q in &q_values {
                    let mut row = prefix.clone();
                    row.extend(solve_row(&point, &spec, q, &solve_opts, &mut out));
                    out.table.push(row);
                }
            }
            Err(e) => {
                out.any_error = true;
                out.diagnostics.push(format!("scan value {value}: {e}"));
                for &q in &q_values {
                    let mut row = prefix.clone();
                    row.extend(vec![
                        Cell::Int(i64::from(config.system.particles)),
                        Cell::text(arity_list(config)),
                        Cell::Int(i64::from(config.system.dimension)),
                        Cell::Float(q),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::text("error"),
                    ]);
                    out.table.push(row);
                }
            }
        }
    }
    Ok(out)
}

fn run_critical(config: &RunConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        table: Table::new(vec!["n", "k", "d", "q", "x0", "g_c", "character", "status"]),
        diagnostics: Vec::new(),
        any_unbound: false,
        any_error: false,
    };
    let term = config.critical_term()?;
    let (rate, shape_exp) = match term.params {
        PotentialParams::Well { rate, shape, .. } => (rate, shape),
        PotentialParams::Exponential { rate, shape, .. } => (rate, shape),
        PotentialParams::Power { .. } => unreachable!("validated critical term"),
    };
    let profile = crate::config::well_profile(rate, shape_exp);
    let n = config.system.particles;
    for q in config.resolved_q_values()? {
        let row_head = vec![
            Cell::Int(i64::from(n)),
            Cell::Int(i64::from(term.arity)),
            Cell::Int(i64::from(config.system.dimension)),
            Cell::Float(q),
        ];
        match critical::critical_coupling(
            n,
            term.arity,
            config.kinetic.coefficient,
            config.kinetic.exponent,
            &profile,
            q,
        ) {
            Ok(res) => {
                if res.has_multiple_critical_points() {
                    out.diagnostics.push(format!(
                        "state q = {q}: shape equation has {} roots; smallest coupling kept",
                        res.all_shape_roots.len()
                    ));
                }
                let mut row = row_head;
                row.extend(vec![
                    Cell::Float(res.shape_root),
                    Cell::Float(res.coupling),
                    Cell::text(res.character.to_string()),
                    Cell::text("ok"),
                ]);
                out.table.push(row);
            }
            Err(e) => {
                out.any_error = true;
                out.diagnostics.push(format!("state q = {q}: {e}"));
                let mut row = row_head;
                row.extend(vec![
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::text("error"),
                ]);
                out.table.push(row);
            }
        }
    }
    Ok(out)
}

fn run_simplex_check(config: &RunConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        table: Table::new(vec![
            "n",
            "k",
            "r0",
            "edge",
            "circumradius",
            "cos_alpha",
            "subset_radius",
            "max_deviation",
            "status",
        ]),
        diagnostics: Vec::new(),
        any_unbound: false,
        any_error: false,
    };
    let spec = config.to_system_spec()?;
    if spec.many_body().is_empty() {
        bail!("simplex-check needs at least one K-body potential term");
    }
    let r0 = config.task.as_ref().and_then(|t| t.radius).unwrap_or(1.0);
    let n = config.system.particles;
    let geometry = simplex::build_simplex(n, r0)?;
    match simplex::coordinate_check(&spec, r0) {
        Ok(checks) => {
            for check in checks {
                let deviation = check
                    .edge_deviation
                    .max(check.circumradius_deviation)
                    .max(check.centroid_deviation)
                    .max(check.subset_radius_deviation)
                    .max(check.cosine_deviation)
                    .max(check.radial_force_deviation)
                    .max(check.tangential_residual);
                out.table.push(vec![
                    Cell::Int(i64::from(n)),
                    Cell::Int(i64::from(check.arity)),
                    Cell::Float(r0),
                    Cell::Float(geometry.edge_length()),
                    Cell::Float(geometry.circumradius()),
                    Cell::Float(simplex::projection_cosine(n)?),
                    Cell::Float(simplex::subset_radius(n, check.arity, r0)?),
                    Cell::Float(deviation),
                    Cell::text("ok"),
                ]);
            }
        }
        Err(e) => {
            out.any_error = true;
            out.diagnostics.push(format!("coordinate check: {e}"));
            for term in spec.many_body() {
                out.table.push(vec![
                    Cell::Int(i64::from(n)),
                    Cell::Int(i64::from(term.arity)),
                    Cell::Float(r0),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::text("error"),
                ]);
            }
        }
    }
    Ok(out)
}
