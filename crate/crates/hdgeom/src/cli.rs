//! Command-line interface: define curves inline or via config files, run
//! the membership checks and surface constructions, and emit OBJ/CSV/report
//! artifacts.
//!
//! Subcommands: `check`, `synthesize`, `inverse`, `developable`, `diff`,
//! `example`. Every command is deterministic — identical flags and specs
//! produce byte-identical outputs. Exit code 0 means all requested checks
//! passed; failures print a machine-readable `failure ...` line on stderr.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curve::{linspace, Curve3, CurveError, FrameField, FrameKind};
use crate::expr::parse as parse_expr;
use crate::mesh::{
    developability_report, sample_mesh, write_curve_csv, write_gamma_csv, write_obj, MeshError,
};
use crate::study::{
    decompose, inverse_pair, is_developable_dual, pair_from_unit_gamma, DualRuledSurface,
    RuledSurface3, StudyError,
};
use crate::vector::{on_hyperdual_sphere, on_unit_dual_sphere, on_unit_hyperdual_sphere, Vec3};
use crate::HyperDualCurve;

const DEFAULT_SAMPLES: usize = 200;
const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_NT: usize = 128;
const DEFAULT_NU: usize = 32;
const DEFAULT_T1: f64 = std::f64::consts::TAU;

#[derive(Debug)]
pub enum CliError {
    /// Malformed curve/gamma/config specification.
    Spec(String),
    Study(StudyError),
    Curve(CurveError),
    Mesh(MeshError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Spec(msg) => write!(f, "{msg}"),
            CliError::Study(e) => write!(f, "{e}"),
            CliError::Curve(e) => write!(f, "{e}"),
            CliError::Mesh(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<StudyError> for CliError {
    fn from(e: StudyError) -> Self {
        CliError::Study(e)
    }
}
impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::Curve(e)
    }
}
impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        CliError::Mesh(e)
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

// ---------------------------------------------------------------------------
// Curve and gamma specifications
// ---------------------------------------------------------------------------

/// A curve given as text:
///
/// ```text
/// helix(r,c) | circle(r) | line(px,py,pz, vx,vy,vz) | point(px,py,pz)
///           | expr(x-expr; y-expr; z-expr)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Helix { r: f64, c: f64 },
    Circle { r: f64 },
    Line { origin: Vec3, direction: Vec3 },
    Point { at: Vec3 },
    Exprs { x: String, y: String, z: String },
}

fn split_head(s: &str) -> Result<(&str, &str), CliError> {
    let s = s.trim();
    let open = s
        .find('(')
        .ok_or_else(|| CliError::Spec(format!("curve spec '{s}' is missing '('")))?;
    if !s.ends_with(')') {
        return Err(CliError::Spec(format!(
            "curve spec '{s}' is missing closing ')'"
        )));
    }
    Ok((s[..open].trim(), &s[open + 1..s.len() - 1]))
}

fn parse_numbers(args: &str, want: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(CliError::Spec(format!(
            "{what} expects {want} numeric arguments, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::Spec(format!("{what}: '{p}' is not a number")))
        })
        .collect()
}

impl CurveSpec {
    pub fn parse(s: &str) -> Result<CurveSpec, CliError> {
        let (name, args) = split_head(s)?;
        match name {
            "helix" => {
                let v = parse_numbers(args, 2, "helix(r,c)")?;
                Ok(CurveSpec::Helix { r: v[0], c: v[1] })
            }
            "circle" => {
                let v = parse_numbers(args, 1, "circle(r)")?;
                Ok(CurveSpec::Circle { r: v[0] })
            }
            "line" => {
                let v = parse_numbers(args, 6, "line(px,py,pz, vx,vy,vz)")?;
                Ok(CurveSpec::Line {
                    origin: Vec3::new(v[0], v[1], v[2]),
                    direction: Vec3::new(v[3], v[4], v[5]),
                })
            }
            "point" => {
                let v = parse_numbers(args, 3, "point(px,py,pz)")?;
                Ok(CurveSpec::Point {
                    at: Vec3::new(v[0], v[1], v[2]),
                })
            }
            "expr" => {
                let parts: Vec<&str> = args.split(';').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(CliError::Spec(
                        "expr(x; y; z) expects three ';'-separated expressions".into(),
                    ));
                }
                Ok(CurveSpec::Exprs {
                    x: parts[0].to_string(),
                    y: parts[1].to_string(),
                    z: parts[2].to_string(),
                })
            }
            other => Err(CliError::Spec(format!(
                "unknown curve kind '{other}' (expected helix, circle, line, point or expr)"
            ))),
        }
    }

    pub fn build(&self, domain: (f64, f64)) -> Result<Curve3, CliError> {
        if !(domain.0 < domain.1) {
            return Err(CliError::Spec(format!(
                "curve domain must satisfy t0 < t1, got [{}, {}]",
                domain.0, domain.1
            )));
        }
        match self {
            CurveSpec::Helix { r, c } => Ok(Curve3::helix(*r, *c, domain)),
            CurveSpec::Circle { r } => Ok(Curve3::circle(*r, domain)),
            CurveSpec::Line { origin, direction } => Ok(Curve3::line(*origin, *direction, domain)),
            CurveSpec::Point { at } => Ok(Curve3::constant(*at, domain)),
            CurveSpec::Exprs { x, y, z } => {
                let parse_component = |label: &str, src: &str| {
                    parse_expr(src)
                        .map_err(|e| CliError::Spec(format!("{label} component '{src}': {e}")))
                };
                Ok(Curve3::from_exprs(
                    parse_component("x", x)?,
                    parse_component("y", y)?,
                    parse_component("z", z)?,
                    domain,
                ))
            }
        }
    }
}

/// Lane source for a hyper-dual curve: fields of a moving frame along one
/// curve, or four explicit lane curves.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaSource {
    Frame {
        curve: CurveSpec,
        frame: FrameKind,
        lanes: [FrameField; 4],
    },
    Explicit {
        lanes: [CurveSpec; 4],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSpec {
    pub source: GammaSource,
    pub domain: (f64, f64),
}

impl GammaSpec {
    pub fn build(&self) -> Result<HyperDualCurve, CliError> {
        match &self.source {
            GammaSource::Frame {
                curve,
                frame,
                lanes,
            } => {
                let base = curve.build(self.domain)?;
                Ok(HyperDualCurve::from_frame_lanes(base, *frame, *lanes))
            }
            GammaSource::Explicit { lanes } => {
                let built = [
                    lanes[0].build(self.domain)?,
                    lanes[1].build(self.domain)?,
                    lanes[2].build(self.domain)?,
                    lanes[3].build(self.domain)?,
                ];
                HyperDualCurve::from_lanes(built).map_err(CliError::Curve)
            }
        }
    }
}

fn parse_frame_kind(s: &str) -> Result<FrameKind, CliError> {
    match s {
        "frenet" => Ok(FrameKind::Frenet),
        "adapted" => Ok(FrameKind::Adapted),
        other => Err(CliError::Spec(format!(
            "unknown frame '{other}' (expected 'frenet' or 'adapted')"
        ))),
    }
}

/// Parse a lane pattern like `t,n,b,n` (Frenet) or `n,c,w,c` (adapted).
pub fn parse_lane_pattern(s: &str, kind: FrameKind) -> Result<[FrameField; 4], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Spec(format!(
            "lane pattern '{s}' must name exactly 4 frame fields"
        )));
    }
    let mut fields = [FrameField::Normal; 4];
    for (i, p) in parts.iter().enumerate() {
        fields[i] = FrameField::parse(p, kind)
            .ok_or_else(|| CliError::Spec(format!("'{p}' is not a field of the {kind:?} frame")))?;
    }
    Ok(fields)
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

/// `key = value` pairs grouped into `[section]`s. Lines starting with `#`
/// are comments.
#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<(String, String), String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut values = HashMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(CliError::Spec(format!(
                        "config line {}: unterminated section header '{line}'",
                        lineno + 1
                    )));
                }
                section = line[1..line.len() - 1].trim().to_string();
                continue;
            }
            let Some(eq) = line.find('=') else {
                return Err(CliError::Spec(format!(
                    "config line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            values.insert((section.clone(), key), value);
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        Config::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(String::as_str)
    }

    fn get_f64(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| {
                CliError::Spec(format!("config [{section}] {key}: '{v}' is not a number"))
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Argument structures
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "hdgeom",
    version,
    about = "Hyper-dual curves, sphere memberships, and ruled-surface constructions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check sphere membership of a hyper-dual curve at sampled parameters
    Check(CheckArgs),
    /// Synthesize the ruled surface, its decomposition, and the surface pair
    Synthesize(SynthesizeArgs),
    /// Recover the two hyper-dual curves from base + two rulings
    Inverse(InverseArgs),
    /// Developability tests in dual space or for one ruled surface
    Developable(DevelopableArgs),
    /// Exact value, first and second derivative of an expression in t
    Diff(DiffArgs),
    /// Reproduce a named worked example end to end
    Example(ExampleArgs),
}

/// Flags that assemble a hyper-dual curve, mergeable with a config file.
#[derive(Args, Debug, Clone, Default)]
struct GammaArgs {
    /// Config file with [curve]/[gamma]/[laneN] sections
    #[arg(long)]
    config: Option<PathBuf>,
    /// Source curve spec, e.g. "helix(1,1)" or "expr(cos(t); sin(t); t)"
    #[arg(long)]
    curve: Option<String>,
    /// Moving frame for lane assembly: frenet | adapted
    #[arg(long)]
    frame: Option<String>,
    /// Lane pattern over the frame fields, e.g. "t,n,b,n" or "n,c,w,c"
    #[arg(long)]
    lanes: Option<String>,
    /// Explicit lane curve specs (all four required together)
    #[arg(long)]
    lane0: Option<String>,
    #[arg(long)]
    lane1: Option<String>,
    #[arg(long)]
    lane2: Option<String>,
    #[arg(long)]
    lane3: Option<String>,
    /// Domain start (default 0)
    #[arg(long)]
    t0: Option<f64>,
    /// Domain end (default 2π)
    #[arg(long)]
    t1: Option<f64>,
}

impl GammaArgs {
    fn resolve(&self) -> Result<GammaSpec, CliError> {
        let cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let t0 = match self.t0 {
            Some(v) => v,
            None => cfg.get_f64("curve", "t0")?.unwrap_or(0.0),
        };
        let t1 = match self.t1 {
            Some(v) => v,
            None => cfg.get_f64("curve", "t1")?.unwrap_or(DEFAULT_T1),
        };
        let domain = (t0, t1);

        let lane_spec = |flag: &Option<String>, key: &str| -> Option<String> {
            flag.clone()
                .or_else(|| cfg.get(key, "spec").map(str::to_string))
        };
        let explicit = [
            lane_spec(&self.lane0, "lane0"),
            lane_spec(&self.lane1, "lane1"),
            lane_spec(&self.lane2, "lane2"),
            lane_spec(&self.lane3, "lane3"),
        ];
        if explicit.iter().any(Option::is_some) {
            if explicit.iter().any(Option::is_none) {
                return Err(CliError::Spec(
                    "explicit gamma lanes need all of lane0..lane3".into(),
                ));
            }
            let mut lanes = Vec::with_capacity(4);
            for s in explicit.iter().flatten() {
                lanes.push(CurveSpec::parse(s)?);
            }
            return Ok(GammaSpec {
                source: GammaSource::Explicit {
                    lanes: [
                        lanes[0].clone(),
                        lanes[1].clone(),
                        lanes[2].clone(),
                        lanes[3].clone(),
                    ],
                },
                domain,
            });
        }

        let curve_text = self
            .curve
            .clone()
            .or_else(|| cfg.get("curve", "spec").map(str::to_string))
            .ok_or_else(|| {
                CliError::Spec("no source curve: pass --curve or [curve] spec in --config".into())
            })?;
        let frame_text = self
            .frame
            .clone()
            .or_else(|| cfg.get("gamma", "frame").map(str::to_string))
            .unwrap_or_else(|| "frenet".into());
        let frame = parse_frame_kind(&frame_text)?;
        let lanes_text = self
            .lanes
            .clone()
            .or_else(|| cfg.get("gamma", "lanes").map(str::to_string))
            .unwrap_or_else(|| {
                match frame {
                    FrameKind::Frenet => "t,n,b,n",
                    FrameKind::Adapted => "n,c,w,c",
                }
                .into()
            });
        Ok(GammaSpec {
            source: GammaSource::Frame {
                curve: CurveSpec::parse(&curve_text)?,
                frame,
                lanes: parse_lane_pattern(&lanes_text, frame)?,
            },
            domain,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereChoice {
    /// Unit dual sphere of the (a0, a1) lane
    Dual,
    /// Hyper-dual sphere
    Hyperdual,
    /// Unit hyper-dual sphere
    UnitHyperdual,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    gamma: GammaArgs,
    /// Which sphere's membership conditions to verify
    #[arg(long, value_enum, default_value = "unit-hyperdual")]
    sphere: SphereChoice,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Optional CSV of per-sample residuals
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    #[command(flatten)]
    gamma: GammaArgs,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NT)]
    nt: usize,
    #[arg(long, default_value_t = DEFAULT_NU)]
    nu: usize,
    #[arg(long, default_value_t = -1.0)]
    u_min: f64,
    #[arg(long, default_value_t = 1.0)]
    u_max: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct InverseArgs {
    /// Config file with [base]/[ruling1]/[ruling2] sections
    #[arg(long)]
    config: Option<PathBuf>,
    /// Common base curve spec
    #[arg(long)]
    base: Option<String>,
    /// First ruling direction curve (unit vectors)
    #[arg(long)]
    ruling1: Option<String>,
    /// Second ruling direction curve (unit, perpendicular to the first)
    #[arg(long)]
    ruling2: Option<String>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DevelopableArgs {
    #[command(flatten)]
    gamma: GammaArgs,
    /// Test a single ruled surface instead of a hyper-dual curve
    #[arg(long, default_value_t = false)]
    surface: bool,
    /// Surface mode: base curve spec (defaults to --curve)
    #[arg(long)]
    base: Option<String>,
    /// Surface mode: director as "frenet:t", "adapted:c", or a curve spec
    #[arg(long)]
    director: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct DiffArgs {
    /// Expression in t, e.g. "sin(t)*t^2"
    #[arg(long)]
    expr: String,
    /// Evaluation point
    #[arg(long)]
    at: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleName {
    /// Helix base curve with tangent and normal rulings, plus the inverse map
    Helix,
    /// Frenet-frame lanes (t,n,b,n) over a helix and their surface pair
    Frenet,
    /// Adapted-frame lanes (n,c,w,c) over a helix and their surface pair
    Adapted,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(value_enum)]
    name: ExampleName,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NT)]
    nt: usize,
    #[arg(long, default_value_t = DEFAULT_NU)]
    nu: usize,
    #[arg(long, default_value_t = -1.0)]
    u_min: f64,
    #[arg(long, default_value_t = 1.0)]
    u_max: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

/// Aggregated residuals of one membership condition over all samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSummary {
    pub name: &'static str,
    pub max_abs_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub conditions: Vec<ConditionSummary>,
    pub samples: usize,
    pub tol: f64,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.conditions
            .iter()
            .all(|c| c.max_abs_residual <= self.tol)
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22} {:>14}  verdict", "condition", "max |residual|")?;
        for c in &self.conditions {
            writeln!(
                f,
                "{:<22} {:>14.6e}  {}",
                c.name,
                c.max_abs_residual,
                if c.max_abs_residual <= self.tol {
                    "ok"
                } else {
                    "FAIL"
                }
            )?;
        }
        write!(
            f,
            "overall: {} ({} samples, tol {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.samples,
            self.tol
        )
    }
}

/// Membership check over sampled parameters; optionally writes per-sample
/// residuals as CSV.
pub fn cmd_check(
    gamma: &HyperDualCurve,
    sphere: SphereChoice,
    samples: usize,
    tol: f64,
    csv: Option<&Path>,
) -> Result<CheckSummary, CliError> {
    let (t0, t1) = gamma.domain();
    let ts = linspace(t0, t1, samples.max(2));
    let mut rows: Vec<(f64, Vec<(&'static str, f64)>)> = Vec::with_capacity(ts.len());
    for &t in &ts {
        let v = gamma.eval(t)?;
        let report = match sphere {
            SphereChoice::Dual => on_unit_dual_sphere(&v.dual_lanes().0, tol),
            SphereChoice::Hyperdual => on_hyperdual_sphere(&v, tol),
            SphereChoice::UnitHyperdual => on_unit_hyperdual_sphere(&v, tol),
        };
        rows.push((
            t,
            report
                .conditions
                .iter()
                .map(|c| (c.name, c.residual))
                .collect(),
        ));
    }
    let names: Vec<&'static str> = rows[0].1.iter().map(|(n, _)| *n).collect();
    let conditions = names
        .iter()
        .enumerate()
        .map(|(i, name)| ConditionSummary {
            name,
            max_abs_residual: rows.iter().map(|(_, cs)| cs[i].1.abs()).fold(0.0, f64::max),
        })
        .collect();
    if let Some(path) = csv {
        let mut out = String::new();
        out.push('t');
        for name in &names {
            out.push(',');
            out.push_str(&name.replace(' ', ""));
        }
        out.push('\n');
        for (t, cs) in &rows {
            out.push_str(&format!("{t}"));
            for (_, r) in cs {
                out.push_str(&format!(",{r}"));
            }
            out.push('\n');
        }
        fs::write(path, out)?;
    }
    Ok(CheckSummary {
        conditions,
        samples: ts.len(),
        tol,
    })
}

/// Everything `synthesize` writes, echoed for reporting.
pub struct SynthesisOutcome {
    pub membership_failures: usize,
    pub pair_built: bool,
    pub max_base_mismatch: f64,
    pub max_ruling_dot: f64,
    pub files: Vec<PathBuf>,
}

/// Synthesize the dual ruled surface of a hyper-dual curve, write the real
/// part `I.obj` and congruence base, and — for curves on the unit sphere —
/// the surface pair with its shared base curve and a text report.
pub fn cmd_synthesize(
    gamma: &HyperDualCurve,
    out_dir: &Path,
    nt: usize,
    nu: usize,
    u_range: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<SynthesisOutcome, CliError> {
    fs::create_dir_all(out_dir)?;
    let (t0, t1) = gamma.domain();
    let mut files = Vec::new();

    let surface = DualRuledSurface::from_gamma(gamma);
    let failures = surface.membership_failures(samples, tol)?;
    for (t, report) in failures.iter().take(5) {
        eprintln!("warning: off the hyper-dual sphere at t = {t}: {report}");
    }

    let (real_part, congruence) = decompose(&surface);
    let grid = sample_mesh(&real_part, (t0, t1), u_range, nt, nu)?;
    let path = out_dir.join("I.obj");
    write_obj(&grid, &path)?;
    files.push(path);
    let path = out_dir.join("congruence_base.csv");
    write_curve_csv(&congruence.base, (t0, t1), samples.max(2), &path)?;
    files.push(path);

    let mut report_text = String::new();
    report_text.push_str("synthesis report\n");
    report_text.push_str(&format!("domain: [{t0}, {t1}]\n"));
    report_text.push_str(&format!("samples: {}, tol: {tol:.1e}\n", samples.max(2)));
    report_text.push_str(&format!(
        "hyper-dual sphere membership: {}\n",
        if failures.is_empty() {
            "PASS".to_string()
        } else {
            format!(
                "{} of {} samples FAIL (first at t = {})",
                failures.len(),
                samples.max(2),
                failures[0].0
            )
        }
    ));

    // Developability residuals of the synthesized surface, in both forms.
    let mut max_real: f64 = 0.0;
    let mut max_eps: f64 = 0.0;
    for &t in &linspace(t0, t1, samples.max(2)) {
        let d = is_developable_dual(gamma, t, tol)?;
        max_real = max_real.max(d.residual_real.abs());
        max_eps = max_eps.max(d.residual_eps.abs());
    }
    report_text.push_str(&format!(
        "dual developability residuals: max |a0'.a2'| = {max_real:.6e}, max |a0'.a3' + a1'.a2'| = {max_eps:.6e}\n"
    ));
    let i_report = developability_report(&real_part, (t0, t1), samples.max(2), tol)?;
    report_text.push_str(&format!("real part I: {i_report}"));

    let mut pair_built = false;
    let mut max_base_mismatch = 0.0;
    let mut max_ruling_dot: f64 = 0.0;
    match pair_from_unit_gamma(gamma, samples.max(2), tol) {
        Ok(pair) => {
            pair_built = true;
            max_base_mismatch = pair.max_base_mismatch;
            let grid = sample_mesh(&pair.phi1, (t0, t1), u_range, nt, nu)?;
            let path = out_dir.join("pair_phi1.obj");
            write_obj(&grid, &path)?;
            files.push(path);
            let grid = sample_mesh(&pair.phi2, (t0, t1), u_range, nt, nu)?;
            let path = out_dir.join("pair_phi2.obj");
            write_obj(&grid, &path)?;
            files.push(path);
            let path = out_dir.join("base_k.csv");
            write_curve_csv(&pair.base_k, (t0, t1), samples.max(2), &path)?;
            files.push(path);

            report_text.push_str(&format!(
                "surface pair: built, max base mismatch = {max_base_mismatch:.6e}\n"
            ));
            report_text.push_str("f,g samples:\nt,f,g\n");
            for &t in &linspace(t0, t1, samples.max(2)) {
                let v = gamma.eval(t)?;
                max_ruling_dot = max_ruling_dot.max(v.a0.dot(v.a2).abs());
                report_text.push_str(&format!("{t},{},{}\n", pair.f_at(t)?, pair.g_at(t)?));
            }
            report_text.push_str(&format!(
                "rulings orthogonality: max |a0 . a2| = {max_ruling_dot:.6e}\n"
            ));
        }
        Err(StudyError::Membership { sphere, t, report }) => {
            report_text.push_str(&format!(
                "surface pair: skipped, not on the {sphere} at t = {t} ({report})\n"
            ));
        }
        Err(e) => return Err(e.into()),
    }

    let path = out_dir.join("report.txt");
    fs::write(&path, report_text)?;
    files.push(path);

    Ok(SynthesisOutcome {
        membership_failures: failures.len(),
        pair_built,
        max_base_mismatch,
        max_ruling_dot,
        files,
    })
}

/// Inverse construction: writes `gamma1.csv`/`gamma2.csv` (12 lane columns)
/// and returns the membership summaries of both curves.
pub fn cmd_inverse(
    base: &Curve3,
    ruling1: &Curve3,
    ruling2: &Curve3,
    out_dir: &Path,
    samples: usize,
    tol: f64,
) -> Result<(CheckSummary, CheckSummary), CliError> {
    fs::create_dir_all(out_dir)?;
    let (gamma1, gamma2) = inverse_pair(base, ruling1, ruling2, samples, tol)?;
    let (t0, t1) = base.domain();
    write_gamma_csv(
        &gamma1,
        (t0, t1),
        samples.max(2),
        &out_dir.join("gamma1.csv"),
    )?;
    write_gamma_csv(
        &gamma2,
        (t0, t1),
        samples.max(2),
        &out_dir.join("gamma2.csv"),
    )?;
    let s1 = cmd_check(&gamma1, SphereChoice::UnitHyperdual, samples, tol, None)?;
    let s2 = cmd_check(&gamma2, SphereChoice::UnitHyperdual, samples, tol, None)?;
    Ok((s1, s2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DevelopableSummary {
    /// `(max |a0'.a2'|, max |a0'.a3' + a1'.a2'|)` in gamma mode;
    /// `(max |det|, 0)` in surface mode.
    pub max_residuals: (f64, f64),
    pub developable: bool,
    pub samples: usize,
    pub tol: f64,
}

impl fmt::Display for DevelopableSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "developable: {} (max residuals {:.6e}, {:.6e}; {} samples, tol {:.1e})",
            if self.developable { "yes" } else { "no" },
            self.max_residuals.0,
            self.max_residuals.1,
            self.samples,
            self.tol
        )
    }
}

pub fn cmd_developable_gamma(
    gamma: &HyperDualCurve,
    samples: usize,
    tol: f64,
) -> Result<DevelopableSummary, CliError> {
    let (t0, t1) = gamma.domain();
    let mut max_real: f64 = 0.0;
    let mut max_eps: f64 = 0.0;
    for &t in &linspace(t0, t1, samples.max(2)) {
        let d = is_developable_dual(gamma, t, tol)?;
        max_real = max_real.max(d.residual_real.abs());
        max_eps = max_eps.max(d.residual_eps.abs());
    }
    Ok(DevelopableSummary {
        max_residuals: (max_real, max_eps),
        developable: max_real <= tol && max_eps <= tol,
        samples: samples.max(2),
        tol,
    })
}

pub fn cmd_developable_surface(
    surface: &RuledSurface3,
    samples: usize,
    tol: f64,
) -> Result<DevelopableSummary, CliError> {
    let report = developability_report(surface, surface.domain(), samples.max(2), tol)?;
    Ok(DevelopableSummary {
        max_residuals: (report.max_abs_residual, 0.0),
        developable: report.verdict,
        samples: samples.max(2),
        tol,
    })
}

/// `(f, f', f'')` of an expression at a point, read from one evaluation at
/// the second-derivative seed.
pub fn cmd_diff(expr_src: &str, at: f64) -> Result<(f64, f64, f64), CliError> {
    let expr = parse_expr(expr_src).map_err(|e| CliError::Spec(e.to_string()))?;
    let y = expr
        .eval(crate::scalar::HyperDualScalar::var(at))
        .map_err(|source| CliError::Curve(CurveError::Eval { t: at, source }))?;
    Ok((y.w, y.e1, y.e12))
}

/// Outcome of a worked example run, echoed by the binary and consumed by
/// the test suite.
pub struct ExampleOutcome {
    pub files: Vec<PathBuf>,
    pub checks_passed: bool,
    pub max_reference_delta: f64,
}

/// Reproduce one of the built-in worked examples into `out_dir`.
pub fn cmd_example(
    name: ExampleName,
    r: f64,
    c: f64,
    out_dir: &Path,
    nt: usize,
    nu: usize,
    u_range: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<ExampleOutcome, CliError> {
    match name {
        ExampleName::Helix => example_helix(r, c, out_dir, nt, nu, u_range, samples, tol),
        ExampleName::Frenet => example_frame(
            FrameKind::Frenet,
            r,
            c,
            out_dir,
            nt,
            nu,
            u_range,
            samples,
            tol,
        ),
        ExampleName::Adapted => example_frame(
            FrameKind::Adapted,
            r,
            c,
            out_dir,
            nt,
            nu,
            u_range,
            samples,
            tol,
        ),
    }
}

fn example_helix(
    r: f64,
    c: f64,
    out_dir: &Path,
    nt: usize,
    nu: usize,
    u_range: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<ExampleOutcome, CliError> {
    fs::create_dir_all(out_dir)?;
    let domain = (0.0, DEFAULT_T1);
    let helix = Curve3::helix(r, c, domain);
    let t_k = Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Tangent);
    let n_k = Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Normal);
    let mut files = Vec::new();

    // The two ruled surfaces K + u t_K, K + v n_K.
    let phi1 = RuledSurface3::new(helix.clone(), t_k.clone());
    let phi2 = RuledSurface3::new(helix.clone(), n_k.clone());
    for (surface, file) in [(&phi1, "phi1.obj"), (&phi2, "phi2.obj")] {
        let grid = sample_mesh(surface, domain, u_range, nt, nu)?;
        let path = out_dir.join(file);
        write_obj(&grid, &path)?;
        files.push(path);
    }
    let path = out_dir.join("base_curve.csv");
    write_curve_csv(&helix, domain, samples.max(2), &path)?;
    files.push(path);

    // Inverse construction and its membership checks.
    let (gamma1, gamma2) = inverse_pair(&helix, &t_k, &n_k, samples, tol)?;
    write_gamma_csv(&gamma1, domain, samples.max(2), &out_dir.join("gamma1.csv"))?;
    write_gamma_csv(&gamma2, domain, samples.max(2), &out_dir.join("gamma2.csv"))?;
    files.push(out_dir.join("gamma1.csv"));
    files.push(out_dir.join("gamma2.csv"));
    let check1 = cmd_check(&gamma1, SphereChoice::UnitHyperdual, samples, tol, None)?;
    let check2 = cmd_check(&gamma2, SphereChoice::UnitHyperdual, samples, tol, None)?;

    // Developability of the two surfaces: tangent developable vs det = c.
    let rep1 = developability_report(&phi1, domain, samples.max(2), tol)?;
    let rep2 = developability_report(&phi2, domain, samples.max(2), tol)?;

    // Delta against the reference closed forms for the moment lanes:
    //   A  = (-r sin, r cos, c)/(r²+c²) + ε (cr(sin - t cos), cr(cos + t sin), r²)/(r²+c²)
    //   A* = (-cos, -sin, 0) + ε ct(sin, -cos, 0)
    let rc2 = r * r + c * c;
    let mut max_a_real: f64 = 0.0;
    let mut max_a_moment: f64 = 0.0;
    let mut max_astar_real: f64 = 0.0;
    let mut max_astar_moment: f64 = 0.0;
    for &t in &linspace(domain.0, domain.1, samples.max(2)) {
        let v = gamma1.eval(t)?;
        let ref_a_real = Vec3::new(-r * t.sin(), r * t.cos(), c).scale(1.0 / rc2);
        let ref_a_moment = Vec3::new(
            c * r * (t.sin() - t * t.cos()),
            c * r * (t.cos() + t * t.sin()),
            r * r,
        )
        .scale(1.0 / rc2);
        let ref_astar_real = Vec3::new(-t.cos(), -t.sin(), 0.0);
        let ref_astar_moment = Vec3::new(t.sin(), -t.cos(), 0.0).scale(c * t);
        max_a_real = max_a_real.max(v.a0.max_abs_diff(&ref_a_real));
        max_a_moment = max_a_moment.max(v.a1.max_abs_diff(&ref_a_moment));
        max_astar_real = max_astar_real.max(v.a2.max_abs_diff(&ref_astar_real));
        max_astar_moment = max_astar_moment.max(v.a3.max_abs_diff(&ref_astar_moment));
    }
    let mut delta = String::new();
    delta.push_str(&format!(
        "reference closed-form deltas for r = {r}, c = {c}\n"
    ));
    delta.push_str("lane,component,max_abs_delta\n");
    delta.push_str(&format!("A,real,{max_a_real}\n"));
    delta.push_str(&format!("A,moment,{max_a_moment}\n"));
    delta.push_str(&format!("A*,real,{max_astar_real}\n"));
    delta.push_str(&format!("A*,moment,{max_astar_moment}\n"));
    delta.push_str(
        "note: the A lane is computed as the construction a + eps(K x a); deltas \
         against the reference prefactor and moment sign are recorded above\n",
    );
    let path = out_dir.join("reference_delta.txt");
    fs::write(&path, delta)?;
    files.push(path);

    let mut report = String::new();
    report.push_str(&format!("helix example, r = {r}, c = {c}\n"));
    report.push_str(&format!("gamma1 membership: {}\n", verdict(&check1)));
    report.push_str(&format!("gamma2 membership: {}\n", verdict(&check2)));
    report.push_str(&format!("phi1 (tangent ruling): {rep1}"));
    report.push_str(&format!("phi2 (normal ruling): {rep2}"));
    report.push_str(&format!(
        "phi2 max |det| - c = {:.6e}\n",
        (rep2.max_abs_residual - c.abs()).abs()
    ));
    let path = out_dir.join("report.txt");
    fs::write(&path, report)?;
    files.push(path);

    // The A* lane must match the reference exactly; the A real lane differs
    // by the reference prefactor unless r²+c² = 1.
    let checks_passed = check1.passed()
        && check2.passed()
        && rep1.verdict
        && max_astar_real <= 1e-9
        && max_astar_moment <= 1e-9;
    Ok(ExampleOutcome {
        files,
        checks_passed,
        max_reference_delta: max_astar_real.max(max_astar_moment),
    })
}

fn example_frame(
    kind: FrameKind,
    r: f64,
    c: f64,
    out_dir: &Path,
    nt: usize,
    nu: usize,
    u_range: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<ExampleOutcome, CliError> {
    fs::create_dir_all(out_dir)?;
    let domain = (0.0, DEFAULT_T1);
    let helix = Curve3::helix(r, c, domain);
    let lanes = match kind {
        FrameKind::Frenet => [
            FrameField::Tangent,
            FrameField::Normal,
            FrameField::Binormal,
            FrameField::Normal,
        ],
        FrameKind::Adapted => [
            FrameField::Normal,
            FrameField::NormalDerivative,
            FrameField::Darboux,
            FrameField::NormalDerivative,
        ],
    };
    let gamma = HyperDualCurve::from_frame_lanes(helix.clone(), kind, lanes);
    let check = cmd_check(&gamma, SphereChoice::UnitHyperdual, samples, tol, None)?;
    let pair = pair_from_unit_gamma(&gamma, samples.max(2), tol)?;

    let mut files = Vec::new();
    for (surface, file) in [(&pair.phi1, "pair_phi1.obj"), (&pair.phi2, "pair_phi2.obj")] {
        let grid = sample_mesh(surface, domain, u_range, nt, nu)?;
        let path = out_dir.join(file);
        write_obj(&grid, &path)?;
        files.push(path);
    }
    let path = out_dir.join("base_k.csv");
    write_curve_csv(&pair.base_k, domain, samples.max(2), &path)?;
    files.push(path);

    // Reference base curve: third frame field minus first (b - t for the
    // Frenet lanes, w - n for the adapted ones).
    let mut max_delta: f64 = 0.0;
    for &t in &linspace(domain.0, domain.1, samples.max(2)) {
        let frame = match kind {
            FrameKind::Frenet => crate::curve::frenet_frame(&helix, t)?,
            FrameKind::Adapted => crate::curve::adapted_frame(&helix, t)?,
        };
        let reference = frame.third - frame.first;
        let k = pair.base_k.position(t)?;
        max_delta = max_delta.max(k.max_abs_diff(&reference));
    }
    let mut delta = String::new();
    delta.push_str(&format!(
        "reference base-curve delta ({} lanes): k vs third - first\n",
        match kind {
            FrameKind::Frenet => "t,n,b,n",
            FrameKind::Adapted => "n,c,w,c",
        }
    ));
    delta.push_str(&format!("max_abs_delta,{max_delta}\n"));
    let path = out_dir.join("reference_delta.txt");
    fs::write(&path, delta)?;
    files.push(path);

    let dev = cmd_developable_gamma(&gamma, samples, tol)?;
    let mut report = String::new();
    report.push_str(&format!("frame example ({kind:?}), r = {r}, c = {c}\n"));
    report.push_str(&format!("membership: {}\n", verdict(&check)));
    report.push_str(&format!(
        "max base mismatch: {:.6e}\n",
        pair.max_base_mismatch
    ));
    report.push_str(&format!("base-curve reference delta: {max_delta:.6e}\n"));
    report.push_str(&format!("dual developability: {dev}\n"));
    let path = out_dir.join("report.txt");
    fs::write(&path, report)?;
    files.push(path);

    Ok(ExampleOutcome {
        files,
        checks_passed: check.passed() && max_delta <= tol,
        max_reference_delta: max_delta,
    })
}

fn verdict(summary: &CheckSummary) -> &'static str {
    if summary.passed() {
        "PASS"
    } else {
        "FAIL"
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Run the CLI against explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version through this path with code 0
            return match e.print() {
                Ok(()) => {
                    if e.use_stderr() {
                        ExitCode::from(1)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(_) => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    run(std::env::args_os())
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Check(args) => {
            let gamma = args.gamma.resolve()?.build()?;
            let summary = cmd_check(
                &gamma,
                args.sphere,
                args.samples,
                args.tol,
                args.csv.as_deref(),
            )?;
            println!("{summary}");
            if !summary.passed() {
                emit_check_failures(&summary);
            }
            Ok(summary.passed())
        }
        Command::Synthesize(args) => {
            let gamma = args.gamma.resolve()?.build()?;
            let outcome = cmd_synthesize(
                &gamma,
                &args.out_dir,
                args.nt,
                args.nu,
                (args.u_min, args.u_max),
                args.samples,
                args.tol,
            )?;
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.pair_built {
                println!(
                    "surface pair: max base mismatch {:.3e}, max ruling dot {:.3e}",
                    outcome.max_base_mismatch, outcome.max_ruling_dot
                );
            }
            if outcome.membership_failures > 0 {
                eprintln!(
                    "failure kind=membership command=synthesize count={}",
                    outcome.membership_failures
                );
                return Ok(false);
            }
            Ok(true)
        }
        Command::Inverse(args) => {
            let cfg = match &args.config {
                Some(p) => Config::load(p)?,
                None => Config::default(),
            };
            let spec_of = |flag: &Option<String>, section: &str| -> Result<CurveSpec, CliError> {
                let text = flag
                    .clone()
                    .or_else(|| cfg.get(section, "spec").map(str::to_string))
                    .ok_or_else(|| {
                        CliError::Spec(format!(
                            "missing --{section} (or [{section}] spec in --config)"
                        ))
                    })?;
                CurveSpec::parse(&text)
            };
            let t0 = match args.t0 {
                Some(v) => v,
                None => cfg.get_f64("base", "t0")?.unwrap_or(0.0),
            };
            let t1 = match args.t1 {
                Some(v) => v,
                None => cfg.get_f64("base", "t1")?.unwrap_or(DEFAULT_T1),
            };
            let domain = (t0, t1);
            let base = spec_of(&args.base, "base")?.build(domain)?;
            let ruling1 = spec_of(&args.ruling1, "ruling1")?.build(domain)?;
            let ruling2 = spec_of(&args.ruling2, "ruling2")?.build(domain)?;
            let (s1, s2) = cmd_inverse(
                &base,
                &ruling1,
                &ruling2,
                &args.out_dir,
                args.samples,
                args.tol,
            )?;
            println!("gamma1 membership:\n{s1}");
            println!("gamma2 membership:\n{s2}");
            let ok = s1.passed() && s2.passed();
            if !ok {
                emit_check_failures(if s1.passed() { &s2 } else { &s1 });
            }
            Ok(ok)
        }
        Command::Developable(args) => {
            if args.surface {
                let base_text = args
                    .base
                    .clone()
                    .or_else(|| args.gamma.curve.clone())
                    .ok_or_else(|| {
                        CliError::Spec("surface mode needs --base (or --curve)".into())
                    })?;
                let domain = (
                    args.gamma.t0.unwrap_or(0.0),
                    args.gamma.t1.unwrap_or(DEFAULT_T1),
                );
                let base = CurveSpec::parse(&base_text)?.build(domain)?;
                let director_text = args
                    .director
                    .clone()
                    .ok_or_else(|| CliError::Spec("surface mode needs --director".into()))?;
                let director = parse_director(&director_text, &base, domain)?;
                let surface = RuledSurface3::new(base, director);
                let summary = cmd_developable_surface(&surface, args.samples, args.tol)?;
                println!("{summary}");
                if !summary.developable {
                    eprintln!(
                        "failure kind=developability mode=surface max_residual={:.6e} tol={:.1e}",
                        summary.max_residuals.0, summary.tol
                    );
                }
                Ok(summary.developable)
            } else {
                let gamma = args.gamma.resolve()?.build()?;
                let summary = cmd_developable_gamma(&gamma, args.samples, args.tol)?;
                println!("{summary}");
                if !summary.developable {
                    eprintln!(
                        "failure kind=developability mode=gamma max_real={:.6e} max_eps={:.6e} tol={:.1e}",
                        summary.max_residuals.0, summary.max_residuals.1, summary.tol
                    );
                }
                Ok(summary.developable)
            }
        }
        Command::Diff(args) => {
            let (f, f1, f2) = cmd_diff(&args.expr, args.at)?;
            println!("{f} {f1} {f2}");
            Ok(true)
        }
        Command::Example(args) => {
            let outcome = cmd_example(
                args.name,
                args.r,
                args.c,
                &args.out_dir,
                args.nt,
                args.nu,
                (args.u_min, args.u_max),
                args.samples,
                args.tol,
            )?;
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!(
                "checks: {} (max reference delta {:.3e})",
                if outcome.checks_passed {
                    "PASS"
                } else {
                    "FAIL"
                },
                outcome.max_reference_delta
            );
            if !outcome.checks_passed {
                eprintln!(
                    "failure kind=example name={:?} max_reference_delta={:.6e}",
                    args.name, outcome.max_reference_delta
                );
            }
            Ok(outcome.checks_passed)
        }
    }
}

/// Director spec for surface mode: `frenet:t` / `adapted:c` style frame
/// fields of the base curve, or any ordinary curve spec.
fn parse_director(text: &str, base: &Curve3, domain: (f64, f64)) -> Result<Curve3, CliError> {
    if let Some((frame_text, field_text)) = text.split_once(':') {
        let kind = parse_frame_kind(frame_text.trim())?;
        let field = FrameField::parse(field_text.trim(), kind).ok_or_else(|| {
            CliError::Spec(format!(
                "'{field_text}' is not a field of the {kind:?} frame"
            ))
        })?;
        return Ok(Curve3::frame_field(base, kind, field));
    }
    CurveSpec::parse(text)?.build(domain)
}

fn emit_check_failures(summary: &CheckSummary) {
    for c in &summary.conditions {
        if c.max_abs_residual > summary.tol {
            eprintln!(
                "failure kind=membership condition=\"{}\" max_residual={:.6e} tol={:.1e}",
                c.name, c.max_abs_residual, summary.tol
            );
        }
    }
}
