//! Run configuration files.
//!
//! The format is line-oriented key-value text with bracketed sections, in
//! this order of appearance (see docs/config.md for the full schema):
//!
//! ```text
//! [system]            particles, dimension
//! [kinetic]           kind = power, coefficient, exponent
//! [potential.<name>]  arity, kind = power | exponential | well, parameters
//! [states]            repeated `state = n l, n l, ...` lines, or a Q range
//! [task]              kind, plus task-specific keys (optional section)
//! ```
//!
//! `#` starts a comment. Parsing reports the offending line; validation
//! reports the violated invariant by name.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use envtheory::law::WellShape;
use envtheory::{KineticLaw, ManyBodyTerm, PotentialLaw, QuantumState, SystemSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSection {
    pub particles: u32,
    pub dimension: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticSection {
    pub coefficient: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialParams {
    /// V(x) = strength * sign(exponent) * x^exponent
    Power { strength: f64, exponent: f64 },
    /// V(x) = -depth * exp(-rate * x^shape)
    Exponential { depth: f64, rate: f64, shape: f64 },
    /// V(x) = -coupling * exp(-rate * x^shape); the profile the critical
    /// task extracts, with `coupling` as the constant under study
    Well {
        coupling: f64,
        rate: f64,
        shape: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSection {
    pub name: String,
    /// 1 for the one-body term (argument: distance to the centre of mass),
    /// 2..=N for K-body terms.
    pub arity: u32,
    pub params: PotentialParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatesSection {
    /// One entry per state; each state lists the N-1 internal (n, l) modes.
    Explicit(Vec<Vec<(u32, u32)>>),
    /// Range over the global quantum number, endpoints inclusive.
    QRange { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Solve,
    Spectrum,
    Critical,
    Scan,
    SimplexCheck,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Solve => "solve",
            TaskKind::Spectrum => "spectrum",
            TaskKind::Critical => "critical",
            TaskKind::Scan => "scan",
            TaskKind::SimplexCheck => "simplex-check",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "solve" => TaskKind::Solve,
            "spectrum" => TaskKind::Spectrum,
            "critical" => TaskKind::Critical,
            "scan" => TaskKind::Scan,
            "simplex-check" => TaskKind::SimplexCheck,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSection {
    /// Dotted path of the swept parameter, e.g. `potential.well.coupling`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskSection {
    pub kind: TaskKind,
    pub scan: Option<ScanSection>,
    /// r0 used by the simplex-check task.
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSection,
    pub kinetic: KineticSection,
    pub potentials: Vec<PotentialSection>,
    pub states: StatesSection,
    pub task: Option<TaskSection>,
}

/// Loads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let config = parse_config(&text)
        .with_context(|| format!("cannot parse config file {}", path.display()))?;
    config.validate()?;
    Ok(config)
}

// ---------------------------------------------------------------------------
// parsing

struct RawSection {
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

fn split_sections(text: &str) -> Result<Vec<RawSection>> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                bail!("line {line_no}: unterminated section header `{line}`");
            }
            let name = line[1..line.len() - 1].trim();
            if name.is_empty() {
                bail!("line {line_no}: empty section name");
            }
            sections.push(RawSection {
                name: name.to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {line_no}: expected `key = value`, found `{line}`");
        };
        let Some(section) = sections.last_mut() else {
            bail!(
                "line {line_no}: key `{}` appears before any section",
                key.trim()
            );
        };
        section
            .entries
            .push((key.trim().to_string(), value.trim().to_string(), line_no));
    }
    Ok(sections)
}

struct EntryMap {
    section: String,
    entries: Vec<(String, String, usize)>,
    used: BTreeSet<usize>,
}

impl EntryMap {
    fn new(section: &RawSection) -> Self {
        EntryMap {
            section: section.name.clone(),
            entries: section.entries.clone(),
            used: BTreeSet::new(),
        }
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        for (i, (k, v, line)) in self.entries.iter().enumerate() {
            if k == key && !self.used.contains(&i) {
                self.used.insert(i);
                return Some((v.clone(), *line));
            }
        }
        None
    }

    fn require(&mut self, key: &str) -> Result<(String, usize)> {
        self.take(key)
            .ok_or_else(|| anyhow!("section [{}]: missing key `{key}`", self.section))
    }

    fn finish(self) -> Result<()> {
        for (i, (k, _, line)) in self.entries.iter().enumerate() {
            if !self.used.contains(&i) {
                bail!(
                    "line {line}: unknown key `{k}` in section [{}]",
                    self.section
                );
            }
        }
        Ok(())
    }
}

fn parse_u32(value: &str, line: usize, key: &str) -> Result<u32> {
    value.parse().map_err(|_| {
        anyhow!("line {line}: key `{key}` must be a nonnegative integer, got `{value}`")
    })
}

fn parse_f64(value: &str, line: usize, key: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| anyhow!("line {line}: key `{key}` must be a number, got `{value}`"))
}

fn parse_state_line(value: &str, line: usize) -> Result<Vec<(u32, u32)>> {
    let mut modes = Vec::new();
    for pair in value.split(',') {
        let mut it = pair.split_whitespace();
        let (Some(n), Some(l), None) = (it.next(), it.next(), it.next()) else {
            bail!("line {line}: each state entry must be `n l` pairs separated by commas");
        };
        modes.push((parse_u32(n, line, "state")?, parse_u32(l, line, "state")?));
    }
    if modes.is_empty() {
        bail!("line {line}: empty state entry");
    }
    Ok(modes)
}

/// Parses configuration text. Structural problems (unknown sections or keys,
/// malformed numbers) are reported with their line; cross-field invariants
/// are left to [`RunConfig::validate`].
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let sections = split_sections(text)?;
    let mut system = None;
    let mut kinetic = None;
    let mut potentials: Vec<PotentialSection> = Vec::new();
    let mut states = None;
    let mut task: Option<TaskSection> = None;

    for section in &sections {
        let mut map = EntryMap::new(section);
        match section.name.as_str() {
            "system" => {
                if system.is_some() {
                    bail!("line {}: duplicate [system] section", section.line);
                }
                let (v, l) = map.require("particles")?;
                let particles = parse_u32(&v, l, "particles")?;
                let (v, l) = map.require("dimension")?;
                let dimension = parse_u32(&v, l, "dimension")?;
                map.finish()?;
                system = Some(SystemSection {
                    particles,
                    dimension,
                });
            }
            "kinetic" => {
                if kinetic.is_some() {
                    bail!("line {}: duplicate [kinetic] section", section.line);
                }
                let (kind, kind_line) = map.require("kind")?;
                if kind != "power" {
                    bail!(
                        "line {kind_line}: unsupported kinetic kind `{kind}` (only `power` is file-expressible)"
                    );
                }
                let (v, l) = map.require("coefficient")?;
                let coefficient = parse_f64(&v, l, "coefficient")?;
                let (v, l) = map.require("exponent")?;
                let exponent = parse_f64(&v, l, "exponent")?;
                map.finish()?;
                kinetic = Some(KineticSection {
                    coefficient,
                    exponent,
                });
            }
            name if name == "potential" || name.starts_with("potential.") => {
                let term_name = name.strip_prefix("potential.").unwrap_or("").to_string();
                if term_name.is_empty() {
                    bail!(
                        "line {}: potential sections need a name: [potential.<name>]",
                        section.line
                    );
                }
                if potentials.iter().any(|p| p.name == term_name) {
                    bail!(
                        "line {}: duplicate potential section `{term_name}`",
                        section.line
                    );
                }
                let (v, l) = map.require("arity")?;
                let arity = parse_u32(&v, l, "arity")?;
                let (kind, kind_line) = map.require("kind")?;
                let params = match kind.as_str() {
                    "power" => {
                        let (v, l) = map.require("strength")?;
                        let strength = parse_f64(&v, l, "strength")?;
                        let (v, l) = map.require("exponent")?;
                        let exponent = parse_f64(&v, l, "exponent")?;
                        PotentialParams::Power { strength, exponent }
                    }
                    "exponential" => {
                        let (v, l) = map.require("depth")?;
                        let depth = parse_f64(&v, l, "depth")?;
                        let (v, l) = map.require("rate")?;
                        let rate = parse_f64(&v, l, "rate")?;
                        let (v, l) = map.require("shape")?;
                        let shape = parse_f64(&v, l, "shape")?;
                        PotentialParams::Exponential { depth, rate, shape }
                    }
                    "well" => {
                        let (v, l) = map.require("coupling")?;
                        let coupling = parse_f64(&v, l, "coupling")?;
                        let (v, l) = map.require("rate")?;
                        let rate = parse_f64(&v, l, "rate")?;
                        let (v, l) = map.require("shape")?;
                        let shape = parse_f64(&v, l, "shape")?;
                        PotentialParams::Well {
                            coupling,
                            rate,
                            shape,
                        }
                    }
                    other => bail!(
                        "line {kind_line}: unknown potential kind `{other}` (power, exponential, well)"
                    ),
                };
                map.finish()?;
                potentials.push(PotentialSection {
                    name: term_name,
                    arity,
                    params,
                });
            }
            "states" => {
                if states.is_some() {
                    bail!("line {}: duplicate [states] section", section.line);
                }
                let mut explicit = Vec::new();
                while let Some((v, l)) = map.take("state") {
                    explicit.push(parse_state_line(&v, l)?);
                }
                if explicit.is_empty() {
                    let (v, l) = map.require("q_start")?;
                    let start = parse_f64(&v, l, "q_start")?;
                    let (v, l) = map.require("q_stop")?;
                    let stop = parse_f64(&v, l, "q_stop")?;
                    let (v, l) = map.require("q_step")?;
                    let step = parse_f64(&v, l, "q_step")?;
                    map.finish()?;
                    states = Some(StatesSection::QRange { start, stop, step });
                } else {
                    map.finish()?;
                    states = Some(StatesSection::Explicit(explicit));
                }
            }
            "task" => {
                if task.is_some() {
                    bail!("line {}: duplicate [task] section", section.line);
                }
                let (kind_str, kind_line) = map.require("kind")?;
                let Some(kind) = TaskKind::parse(&kind_str) else {
                    bail!(
                        "line {kind_line}: unknown task kind `{kind_str}` (solve, spectrum, critical, scan, simplex-check)"
                    );
                };
                let scan = if let Some((parameter, _)) = map.take("parameter") {
                    let (v, l) = map.require("start")?;
                    let start = parse_f64(&v, l, "start")?;
                    let (v, l) = map.require("stop")?;
                    let stop = parse_f64(&v, l, "stop")?;
                    let (v, l) = map.require("steps")?;
                    let steps = parse_u32(&v, l, "steps")?;
                    Some(ScanSection {
                        parameter,
                        start,
                        stop,
                        steps,
                    })
                } else {
                    None
                };
                let radius = match map.take("radius") {
                    Some((v, l)) => Some(parse_f64(&v, l, "radius")?),
                    None => None,
                };
                map.finish()?;
                task = Some(TaskSection { kind, scan, radius });
            }
            other => bail!("line {}: unknown section [{other}]", section.line),
        }
    }

    Ok(RunConfig {
        system: system.ok_or_else(|| anyhow!("missing [system] section"))?,
        kinetic: kinetic.ok_or_else(|| anyhow!("missing [kinetic] section"))?,
        potentials,
        states: states.ok_or_else(|| anyhow!("missing [states] section"))?,
        task,
    })
}

// ---------------------------------------------------------------------------
// validation and conversion

impl RunConfig {
    /// Checks every cross-field invariant, naming the violated constraint.
    pub fn validate(&self) -> Result<()> {
        let n = self.system.particles;
        if n < 2 {
            bail!("[system] particles: need at least 2 particles, got {n}");
        }
        if n > 64 {
            bail!("[system] particles: at most 64 particles are supported, got {n}");
        }
        if self.system.dimension == 0 {
            bail!("[system] dimension: must be at least 1");
        }
        if !(self.kinetic.coefficient > 0.0) {
            bail!(
                "[kinetic] coefficient: must be positive, got {}",
                self.kinetic.coefficient
            );
        }
        if !(self.kinetic.exponent > 0.0) {
            bail!(
                "[kinetic] exponent: must be positive, got {}",
                self.kinetic.exponent
            );
        }
        if self.potentials.is_empty() {
            bail!("at least one [potential.*] section is required");
        }
        let mut one_body_seen = false;
        for p in &self.potentials {
            let loc = format!("[potential.{}]", p.name);
            if p.arity == 0 {
                bail!("{loc} arity: must be at least 1");
            }
            if p.arity == 1 {
                if one_body_seen {
                    bail!("{loc}: only one arity-1 (one-body) term is allowed");
                }
                one_body_seen = true;
            } else if p.arity > n {
                bail!(
                    "{loc} arity: K = {} exceeds the particle count N = {n} (need 2 <= K <= N)",
                    p.arity
                );
            }
            match &p.params {
                PotentialParams::Power { strength, exponent } => {
                    if !(*strength > 0.0) {
                        bail!("{loc} strength: must be positive, got {strength}");
                    }
                    if *exponent == 0.0 || !exponent.is_finite() {
                        bail!("{loc} exponent: must be nonzero and finite, got {exponent}");
                    }
                }
                PotentialParams::Exponential { depth, rate, shape } => {
                    for (name, v) in [("depth", depth), ("rate", rate), ("shape", shape)] {
                        if !(*v > 0.0) {
                            bail!("{loc} {name}: must be positive, got {v}");
                        }
                    }
                }
                PotentialParams::Well {
                    coupling,
                    rate,
                    shape,
                } => {
                    for (name, v) in [("coupling", coupling), ("rate", rate), ("shape", shape)] {
                        if !(*v > 0.0) {
                            bail!("{loc} {name}: must be positive, got {v}");
                        }
                    }
                }
            }
        }
        match &self.states {
            StatesSection::Explicit(states) => {
                for (i, modes) in states.iter().enumerate() {
                    if modes.len() != (n - 1) as usize {
                        bail!(
                            "[states] state #{}: expected {} internal (n l) modes for N = {n}, got {}",
                            i + 1,
                            n - 1,
                            modes.len()
                        );
                    }
                }
            }
            StatesSection::QRange { start, stop, step } => {
                if !(*start > 0.0) {
                    bail!("[states] q_start: must be positive, got {start}");
                }
                if stop < start {
                    bail!("[states] q_stop: must be at least q_start");
                }
                if !(*step > 0.0) {
                    bail!("[states] q_step: must be positive, got {step}");
                }
            }
        }
        if let Some(task) = &self.task {
            match task.kind {
                TaskKind::Scan => {
                    let Some(scan) = &task.scan else {
                        bail!("[task] scan task needs `parameter`, `start`, `stop`, `steps`");
                    };
                    if scan.steps == 0 {
                        bail!("[task] steps: must be at least 1");
                    }
                    // reject unknown parameter paths up front
                    let mut probe = self.clone();
                    probe.apply_parameter(&scan.parameter, scan.start)?;
                }
                _ => {
                    if task.scan.is_some() {
                        bail!(
                            "[task] scan keys are only meaningful for the scan task, not `{}`",
                            task.kind.name()
                        );
                    }
                }
            }
            if let Some(r) = task.radius {
                if task.kind != TaskKind::SimplexCheck {
                    bail!("[task] radius is only meaningful for the simplex-check task");
                }
                if !(r > 0.0) {
                    bail!("[task] radius: must be positive, got {r}");
                }
            }
            if task.kind == TaskKind::Solve && self.resolved_q_values()?.len() != 1 {
                bail!("[task] solve runs exactly one state; use spectrum for several");
            }
            if task.kind == TaskKind::Critical {
                self.critical_term()?;
            }
        }
        Ok(())
    }

    /// Global quantum numbers of every configured state, in file order.
    pub fn resolved_q_values(&self) -> Result<Vec<f64>> {
        let n = self.system.particles;
        let d = self.system.dimension;
        match &self.states {
            StatesSection::Explicit(states) => states
                .iter()
                .map(|modes| {
                    let modes = modes
                        .iter()
                        .map(|&(radial, orbital)| envtheory::Mode { radial, orbital })
                        .collect();
                    Ok(QuantumState::new(modes, d)
                        .map_err(|e| anyhow!("invalid state: {e}"))?
                        .global_quantum_number())
                })
                .collect(),
            StatesSection::QRange { start, stop, step } => {
                let mut out = Vec::new();
                let mut i = 0u32;
                loop {
                    let q = start + f64::from(i) * step;
                    if q > stop * (1.0 + 1e-12) {
                        break;
                    }
                    out.push(q);
                    i += 1;
                    if i > 100_000 {
                        bail!("[states] q range produces more than 100000 states");
                    }
                }
                if out.is_empty() {
                    bail!("[states] q range contains no states");
                }
                let _ = n;
                Ok(out)
            }
        }
    }

    /// The single K-body well the critical task works on.
    pub fn critical_term(&self) -> Result<&PotentialSection> {
        let wells: Vec<&PotentialSection> =
            self.potentials.iter().filter(|p| p.arity >= 2).collect();
        let [term] = wells.as_slice() else {
            bail!("critical task needs exactly one K-body potential term");
        };
        match term.params {
            PotentialParams::Well { .. } | PotentialParams::Exponential { .. } => Ok(term),
            PotentialParams::Power { .. } => {
                bail!(
                    "[potential.{}]: critical task needs an attractive well (kind well or exponential)",
                    term.name
                )
            }
        }
    }

    /// Sets the parameter addressed by a dotted path such as
    /// `kinetic.coefficient` or `potential.<name>.<field>`.
    pub fn apply_parameter(&mut self, path: &str, value: f64) -> Result<()> {
        let parts: Vec<&str> = path.split('.').collect();
        match parts.as_slice() {
            ["kinetic", "coefficient"] => self.kinetic.coefficient = value,
            ["kinetic", "exponent"] => self.kinetic.exponent = value,
            ["potential", name, field] => {
                let p = self
                    .potentials
                    .iter_mut()
                    .find(|p| p.name == *name)
                    .ok_or_else(|| anyhow!("scan parameter: no potential named `{name}`"))?;
                let slot = match (&mut p.params, *field) {
                    (PotentialParams::Power { strength, .. }, "strength") => strength,
                    (PotentialParams::Power { exponent, .. }, "exponent") => exponent,
                    (PotentialParams::Exponential { depth, .. }, "depth") => depth,
                    (PotentialParams::Exponential { rate, .. }, "rate") => rate,
                    (PotentialParams::Exponential { shape, .. }, "shape") => shape,
                    (PotentialParams::Well { coupling, .. }, "coupling") => coupling,
                    (PotentialParams::Well { rate, .. }, "rate") => rate,
                    (PotentialParams::Well { shape, .. }, "shape") => shape,
                    _ => bail!(
                        "scan parameter: potential `{name}` has no field `{field}` for its kind"
                    ),
                };
                *slot = value;
            }
            _ => bail!("scan parameter: cannot resolve path `{path}`"),
        }
        Ok(())
    }

    /// Builds the solver-side system definition.
    pub fn to_system_spec(&self) -> Result<SystemSpec> {
        let kinetic = KineticLaw::power(self.kinetic.coefficient, self.kinetic.exponent)
            .map_err(|e| anyhow!("[kinetic]: {e}"))?;
        let mut one_body = None;
        let mut many_body = Vec::new();
        for p in &self.potentials {
            let law = p.to_law()?;
            if p.arity == 1 {
                one_body = Some(law);
            } else {
                many_body.push(ManyBodyTerm::new(p.arity, law));
            }
        }
        SystemSpec::new(
            self.system.particles,
            self.system.dimension,
            kinetic,
            one_body,
            many_body,
        )
        .map_err(|e| anyhow!("invalid system: {e}"))
    }

    /// Canonical serialisation; `parse_config` of the output yields an equal
    /// `RunConfig`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[system]");
        let _ = writeln!(out, "particles = {}", self.system.particles);
        let _ = writeln!(out, "dimension = {}", self.system.dimension);
        let _ = writeln!(out);
        let _ = writeln!(out, "[kinetic]");
        let _ = writeln!(out, "kind = power");
        let _ = writeln!(out, "coefficient = {}", self.kinetic.coefficient);
        let _ = writeln!(out, "exponent = {}", self.kinetic.exponent);
        for p in &self.potentials {
            let _ = writeln!(out);
            let _ = writeln!(out, "[potential.{}]", p.name);
            let _ = writeln!(out, "arity = {}", p.arity);
            match &p.params {
                PotentialParams::Power { strength, exponent } => {
                    let _ = writeln!(out, "kind = power");
                    let _ = writeln!(out, "strength = {strength}");
                    let _ = writeln!(out, "exponent = {exponent}");
                }
                PotentialParams::Exponential { depth, rate, shape } => {
                    let _ = writeln!(out, "kind = exponential");
                    let _ = writeln!(out, "depth = {depth}");
                    let _ = writeln!(out, "rate = {rate}");
                    let _ = writeln!(out, "shape = {shape}");
                }
                PotentialParams::Well {
                    coupling,
                    rate,
                    shape,
                } => {
                    let _ = writeln!(out, "kind = well");
                    let _ = writeln!(out, "coupling = {coupling}");
                    let _ = writeln!(out, "rate = {rate}");
                    let _ = writeln!(out, "shape = {shape}");
                }
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "[states]");
        match &self.states {
            StatesSection::Explicit(states) => {
                for modes in states {
                    let body = modes
                        .iter()
                        .map(|(n, l)| format!("{n} {l}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    let _ = writeln!(out, "state = {body}");
                }
            }
            StatesSection::QRange { start, stop, step } => {
                let _ = writeln!(out, "q_start = {start}");
                let _ = writeln!(out, "q_stop = {stop}");
                let _ = writeln!(out, "q_step = {step}");
            }
        }
        if let Some(task) = &self.task {
            let _ = writeln!(out);
            let _ = writeln!(out, "[task]");
            let _ = writeln!(out, "kind = {}", task.kind.name());
            if let Some(scan) = &task.scan {
                let _ = writeln!(out, "parameter = {}", scan.parameter);
                let _ = writeln!(out, "start = {}", scan.start);
                let _ = writeln!(out, "stop = {}", scan.stop);
                let _ = writeln!(out, "steps = {}", scan.steps);
            }
            if let Some(radius) = task.radius {
                let _ = writeln!(out, "radius = {radius}");
            }
        }
        out
    }
}

impl PotentialSection {
    /// The evaluable law for this term. Wells become attractive-well laws
    /// with analytic profile derivatives, so classification works for them.
    pub fn to_law(&self) -> Result<PotentialLaw> {
        let loc = || format!("[potential.{}]", self.name);
        match self.params {
            PotentialParams::Power { strength, exponent } => {
                PotentialLaw::power(strength, exponent).map_err(|e| anyhow!("{}: {e}", loc()))
            }
            PotentialParams::Exponential { depth, rate, shape } => {
                PotentialLaw::exponential(depth, rate, shape).map_err(|e| anyhow!("{}: {e}", loc()))
            }
            PotentialParams::Well {
                coupling,
                rate,
                shape,
            } => PotentialLaw::attractive_well(coupling, well_profile(rate, shape))
                .map_err(|e| anyhow!("{}: {e}", loc())),
        }
    }
}

/// Exponential-family well profile v(x) = exp(-rate x^shape) with analytic
/// slope and curvature.
pub fn well_profile(rate: f64, shape: f64) -> WellShape {
    let value = move |x: f64| (-rate * x.powf(shape)).exp();
    WellShape {
        value: Arc::new(value),
        slope: Arc::new(move |x: f64| -rate * shape * x.powf(shape - 1.0) * value(x)),
        curvature: Some(Arc::new(move |x: f64| {
            let t = rate * shape * x.powf(shape - 1.0);
            (t * t - rate * shape * (shape - 1.0) * x.powf(shape - 2.0)) * value(x)
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[system]
particles = 2
dimension = 3

[kinetic]
kind = power
coefficient = 0.5
exponent = 2

[potential.coulomb]
arity = 2
kind = power
strength = 1
exponent = -1

[states]
state = 0 0

[task]
kind = solve
";

    #[test]
    fn parses_minimal_config() {
        let config = parse_config(MINIMAL).unwrap();
        config.validate().unwrap();
        assert_eq!(config.system.particles, 2);
        assert_eq!(config.potentials.len(), 1);
        assert_eq!(config.resolved_q_values().unwrap(), vec![1.5]);
        assert_eq!(config.task.as_ref().unwrap().kind, TaskKind::Solve);
    }

    #[test]
    fn round_trip_identity() {
        let config = parse_config(MINIMAL).unwrap();
        let text = config.serialize();
        let reparsed = parse_config(&text).unwrap();
        assert_eq!(config, reparsed);
        // and a second round trip is byte-stable
        assert_eq!(text, reparsed.serialize());
    }

    #[test]
    fn arity_above_particle_count_is_named() {
        let text = MINIMAL.replace("arity = 2", "arity = 5");
        let config = parse_config(&text).unwrap();
        let err = config.validate().unwrap_err().to_string();
        assert!(err.contains("K = 5"), "got: {err}");
        assert!(err.contains("2 <= K <= N"), "got: {err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config("[system]\nparticles == 2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "got: {err}");
        let err = parse_config("[system]\nbogus = 2\ndimension = 3\nparticles = 2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "got: {err}");
    }

    #[test]
    fn state_mode_count_is_checked() {
        let text = MINIMAL.replace("state = 0 0", "state = 0 0, 1 0");
        let config = parse_config(&text).unwrap();
        let err = config.validate().unwrap_err().to_string();
        assert!(err.contains("expected 1 internal"), "got: {err}");
    }

    #[test]
    fn q_range_resolution() {
        let text = MINIMAL
            .replace("state = 0 0", "q_start = 4.5\nq_stop = 8.5\nq_step = 2")
            .replace("kind = solve", "kind = spectrum");
        let config = parse_config(&text).unwrap();
        config.validate().unwrap();
        assert_eq!(config.resolved_q_values().unwrap(), vec![4.5, 6.5, 8.5]);
    }

    #[test]
    fn scan_parameter_paths() {
        let mut config = parse_config(MINIMAL).unwrap();
        config
            .apply_parameter("potential.coulomb.strength", 2.5)
            .unwrap();
        match config.potentials[0].params {
            PotentialParams::Power { strength, .. } => assert_eq!(strength, 2.5),
            _ => unreachable!(),
        }
        assert!(config
            .apply_parameter("potential.nope.strength", 1.0)
            .is_err());
        assert!(config
            .apply_parameter("potential.coulomb.rate", 1.0)
            .is_err());
        config.apply_parameter("kinetic.coefficient", 1.0).unwrap();
        assert_eq!(config.kinetic.coefficient, 1.0);
    }

    #[test]
    fn well_profile_derivatives_are_consistent() {
        let shape = well_profile(0.7, 1.3);
        for i in 1..=20 {
            let x = 0.2 * i as f64;
            let h = 1e-6 * x;
            let fd = (((shape.value)(x + h)) - ((shape.value)(x - h))) / (2.0 * h);
            assert!(((shape.slope)(x) - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
            let fd2 = (((shape.slope)(x + h)) - ((shape.slope)(x - h))) / (2.0 * h);
            let curv = shape.curvature.as_ref().unwrap();
            assert!((curv(x) - fd2).abs() <= 1e-5 * (1.0 + fd2.abs()));
        }
    }
}
