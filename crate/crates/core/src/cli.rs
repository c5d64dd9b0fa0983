//! Command-line front end. Every report goes to `out` as JSON (default) or
//! CSV, with floats at 17 significant digits. Exit codes: 0 on success, 1 on
//! usage errors, 2 on domain errors and failed `--check` verifications.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{Error as _, Serialize, SerializeMap, SerializeSeq, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::group::{validate_spec, GroupSpec, Word};
use crate::kms::{HarmonicKind, HarmonicVector, KmsState, QBetaPoint, StateDescriptor};
use crate::linalg;
use crate::ninf::HMapCache;
use crate::numerics::{PartitionData, SolverConfig};
use crate::sphere;

#[derive(Parser, Debug)]
#[command(
    name = "kms-cayley",
    version,
    about = "KMS states of gauge actions on Cayley-graph algebras"
)]
struct Cli {
    /// Built-in group (heisenberg, dihedral_infinite, zn:<n>, cyclic:<m>) or a JSON file
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Re-verify the defining residual of the result; exit 2 if it is above tolerance
    #[arg(long, global = true)]
    check: bool,
    /// Override F(s), as `sym=value`; repeatable
    #[arg(long = "potential", global = true, value_name = "SYM=VALUE")]
    potential: Vec<String>,
    /// Root-finding tolerance (default 1e-12)
    #[arg(long, global = true)]
    eps_root: Option<f64>,
    /// Gradient and residual tolerance (default 1e-10)
    #[arg(long, global = true)]
    eps_grad: Option<f64>,
    /// Geometric tolerance for the fan (default 1e-9)
    #[arg(long, global = true)]
    eps_geom: Option<f64>,
    /// Tolerance for zero-temperature limits (default 1e-6)
    #[arg(long, global = true)]
    eps_limit: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the standing assumptions on (Y, F, c)
    Validate,
    /// The critical inverse temperature β₀
    CriticalBeta,
    /// β with Z(u, β) = 1
    BetaOfU {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<f64>,
    },
    /// Sample Q(β) on a sphere grid
    QBeta {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Number of grid directions
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// ω(V_t V_u*) for a KMS state
    KmsEval {
        #[command(flatten)]
        state: StateArgs,
        /// Word t as comma-separated generator symbols (empty for the empty word)
        #[arg(long)]
        t: String,
        /// Word u
        #[arg(long)]
        u: String,
    },
    /// Harmonic residual of the state's harmonic vectors on a ball
    HarmonicCheck {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Violation of the KMS condition over equal-endpoint word pairs
    KmsCheck {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// The cone fan M(Z)
    Fan,
    /// The zero-temperature map H on one direction or a grid
    Ninf {
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            conflicts_with = "grid"
        )]
        v: Option<Vec<f64>>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// The non-abelian harmonic family of the infinite dihedral group
    Dihedral {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long = "t-param")]
        t_param: f64,
        /// Largest n reported for x_n and y_n
        #[arg(long, default_value_t = 8)]
        n_max: i64,
    },
}

/// How a command picks its KMS state.
#[derive(Args, Debug)]
struct StateArgs {
    /// Inverse temperature β
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["beta_critical", "state"])]
    beta: Option<f64>,
    /// Use β = β₀
    #[arg(long, conflicts_with = "state")]
    beta_critical: bool,
    /// Explicit point u of Q(β)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    point: Option<Vec<f64>>,
    /// Unit direction v; the state is u(β) + t_β(v) v
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "point"
    )]
    direction: Option<Vec<f64>>,
    /// Parameter of the dihedral family
    #[arg(long, conflicts_with_all = ["point", "direction"])]
    dihedral_t: Option<f64>,
    /// State descriptor: a JSON file or inline JSON
    #[arg(long, conflicts_with_all = ["point", "direction", "dihedral_t"])]
    state: Option<String>,
}

/// A JSON value whose numbers are written with 17 significant digits.
#[derive(Debug, Clone)]
enum Out {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Arr(Vec<Out>),
    Obj(Vec<(String, Out)>),
}

impl Out {
    fn obj(fields: Vec<(&str, Out)>) -> Out {
        Out::Obj(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    fn nums(xs: &[f64]) -> Out {
        Out::Arr(xs.iter().map(|&x| Out::Num(x)).collect())
    }

    fn strs(xs: impl IntoIterator<Item = String>) -> Out {
        Out::Arr(xs.into_iter().map(Out::Str).collect())
    }

    fn csv_cell(&self) -> String {
        match self {
            Out::Num(x) => fmt17(*x),
            Out::Int(i) => i.to_string(),
            Out::Bool(b) => b.to_string(),
            Out::Str(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Out::Str(s) => s.clone(),
            Out::Arr(xs) => xs.iter().map(Out::csv_cell).collect::<Vec<_>>().join(";"),
            Out::Obj(_) => String::new(),
        }
    }
}

impl Serialize for Out {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Out::Num(x) if x.is_finite() => RawValue::from_string(fmt17(*x))
                .map_err(S::Error::custom)?
                .serialize(s),
            Out::Num(_) => s.serialize_none(),
            Out::Int(i) => s.serialize_i64(*i),
            Out::Bool(b) => s.serialize_bool(*b),
            Out::Str(t) => s.serialize_str(t),
            Out::Arr(xs) => {
                let mut seq = s.serialize_seq(Some(xs.len()))?;
                for x in xs {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
            Out::Obj(fields) => {
                let mut map = s.serialize_map(Some(fields.len()))?;
                for (k, v) in fields {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

/// `x` with 17 significant digits, positional when `1e-5 <= |x| < 1e16`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{x:.16e}");
    // exponent after rounding to 17 digits
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..16).contains(&exp) {
        let s = format!("{:.*}", (16 - exp) as usize, x);
        if s.contains('.') {
            s
        } else {
            format!("{s}.0")
        }
    } else {
        sci
    }
}

/// A finished command: the JSON payload, an optional CSV table, and whether
/// a requested `--check` failed.
struct Report {
    json: Out,
    table: Option<(Vec<String>, Vec<Vec<Out>>)>,
    check_failed: Option<String>,
}

impl Report {
    fn new(json: Out) -> Self {
        Report {
            json,
            table: None,
            check_failed: None,
        }
    }

    fn with_table(mut self, header: Vec<String>, rows: Vec<Vec<Out>>) -> Self {
        self.table = Some((header, rows));
        self
    }

    fn checked(mut self, ok: bool, what: impl FnOnce() -> String) -> Self {
        if !ok {
            self.check_failed = Some(what());
        }
        self
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let text =
                    serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                writeln!(out, "{text}")
            }
            Format::Csv => {
                let (header, rows) = match &self.table {
                    Some(t) => t.clone(),
                    None => match &self.json {
                        Out::Obj(fields) => (
                            fields.iter().map(|(k, _)| k.clone()).collect(),
                            vec![fields.iter().map(|(_, v)| v.clone()).collect()],
                        ),
                        other => (vec!["value".into()], vec![vec![other.clone()]]),
                    },
                };
                writeln!(out, "{}", header.join(","))?;
                for row in rows {
                    let cells: Vec<String> = row.iter().map(Out::csv_cell).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                Ok(())
            }
        }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(report) => {
            if let Err(e) = report.write(format, out) {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            match report.check_failed {
                Some(why) => {
                    let _ = writeln!(err, "check failed: {why}");
                    2
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
    }
}

fn config(cli: &Cli) -> Result<SolverConfig> {
    let mut cfg = SolverConfig::from_env()?;
    for (flag, slot) in [
        (cli.eps_root, &mut cfg.eps_root),
        (cli.eps_grad, &mut cfg.eps_grad),
        (cli.eps_geom, &mut cfg.eps_geom),
        (cli.eps_limit, &mut cfg.eps_limit),
    ] {
        if let Some(x) = flag {
            *slot = x;
        }
    }
    cfg.check()?;
    Ok(cfg)
}

fn load_group(cli: &Cli) -> Result<GroupSpec> {
    // the dihedral family only exists on one group, so it needs no --group
    let fallback = matches!(cli.cmd, Cmd::Dihedral { .. }).then_some("dihedral_infinite");
    let name = cli
        .group
        .as_deref()
        .or(fallback)
        .ok_or_else(|| Error::InvalidArgument("--group is required".into()))?;
    let spec = GroupSpec::resolve(name)?;
    let mut overrides = Vec::new();
    for item in &cli.potential {
        let (sym, val) = item.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("--potential expects sym=value, got `{item}`"))
        })?;
        let val: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("`{val}` is not a number")))?;
        overrides.push((spec.symbol_index(sym.trim())?, val));
    }
    Ok(if overrides.is_empty() {
        spec
    } else {
        spec.with_potential(&overrides)
    })
}

fn execute(cli: &Cli) -> Result<Report> {
    let cfg = config(cli)?;
    let spec = load_group(cli)?;
    let check = cli.check;
    match &cli.cmd {
        Cmd::Validate => {
            let report = validate_spec(&spec, &cfg);
            let json = Out::obj(vec![
                ("group", Out::Str(spec.name().to_string())),
                ("valid", Out::Bool(report.is_valid())),
                ("violations", Out::strs(report.violations.clone())),
                ("warnings", Out::strs(report.warnings.clone())),
            ]);
            if report.is_valid() {
                Ok(Report::new(json))
            } else {
                Ok(Report::new(json).checked(false, || report.violations.join("; ")))
            }
        }
        Cmd::CriticalBeta => {
            let data = PartitionData::new(&spec, &cfg)?;
            let beta0 = data.critical_beta(&cfg)?;
            let mut fields = vec![("beta0", Out::Num(beta0))];
            let mut report_ok = true;
            if check {
                let (l, _) = data.log_min_partition(beta0, &cfg)?;
                let residual = (l.exp() - 1.0).abs();
                report_ok = residual <= cfg.eps_root;
                fields.push(("residual", Out::Num(residual)));
            }
            Ok(Report::new(Out::obj(fields))
                .checked(report_ok, || "min_u Z(u, β₀) differs from 1".into()))
        }
        Cmd::BetaOfU { u } => {
            let data = PartitionData::new(&spec, &cfg)?;
            if u.len() != spec.rank() {
                return Err(Error::InvalidArgument(format!(
                    "--u needs {} components",
                    spec.rank()
                )));
            }
            let beta = data.beta_of_u(u, &cfg)?;
            let residual = (data.partition(u, beta) - 1.0).abs();
            let mut fields = vec![("beta", Out::Num(beta))];
            if check {
                fields.push(("residual", Out::Num(residual)));
            }
            Ok(
                Report::new(Out::obj(fields)).checked(!check || residual <= cfg.eps_root, || {
                    format!("|Z(u, β) - 1| = {residual:e}")
                }),
            )
        }
        Cmd::QBeta { beta, grid } => q_beta(&spec, *beta, *grid, check, &cfg),
        Cmd::KmsEval { state, t, u } => {
            let st = resolve_state(&spec, state, &cfg)?;
            let (tw, uw) = (spec.parse_word(t)?, spec.parse_word(u)?);
            let value = st.state_eval(&tw, &uw)?;
            let mut fields = vec![("beta", Out::Num(st.beta)), ("value", Out::Num(value))];
            let mut ok = true;
            if check {
                let res = max_component(&st, |h| h.harmonic_residual(tw.len().max(1), &cfg))?;
                ok = res <= cfg.eps_grad;
                fields.push(("harmonic_residual", Out::Num(res)));
            }
            Ok(Report::new(Out::obj(fields))
                .checked(ok, || "state is not harmonic to tolerance".into()))
        }
        Cmd::HarmonicCheck { state, radius } => {
            let st = resolve_state(&spec, state, &cfg)?;
            let res = max_component(&st, |h| h.harmonic_residual(*radius, &cfg))?;
            let json = Out::obj(vec![
                ("beta", Out::Num(st.beta)),
                ("radius", Out::Int(*radius as i64)),
                ("residual", Out::Num(res)),
            ]);
            Ok(
                Report::new(json).checked(!check || res <= cfg.eps_grad, || {
                    format!("harmonic residual {res:e} above {:e}", cfg.eps_grad)
                }),
            )
        }
        Cmd::KmsCheck { state, max_len } => {
            let st = resolve_state(&spec, state, &cfg)?;
            let v = max_component(&st, |h| h.kms_condition_check(*max_len))?;
            let json = Out::obj(vec![
                ("beta", Out::Num(st.beta)),
                ("max_len", Out::Int(*max_len as i64)),
                ("violation", Out::Num(v)),
            ]);
            Ok(Report::new(json).checked(!check || v <= cfg.eps_grad, || {
                format!("KMS condition violated by {v:e}")
            }))
        }
        Cmd::Fan => fan(&spec, check, &cfg),
        Cmd::Ninf { v, grid } => ninf(&spec, v.as_deref(), *grid, check, &cfg),
        Cmd::Dihedral {
            beta,
            t_param,
            n_max,
        } => dihedral(&spec, *beta, *t_param, *n_max, check, &cfg),
    }
}

fn max_component(st: &KmsState, f: impl Fn(&HarmonicVector) -> Result<f64>) -> Result<f64> {
    st.mixture
        .iter()
        .map(|(_, h)| f(h))
        .try_fold(0.0, |m, x| x.map(|x| f64::max(m, x)))
}

fn q_beta(
    spec: &GroupSpec,
    beta: f64,
    grid: usize,
    check: bool,
    cfg: &SolverConfig,
) -> Result<Report> {
    let data = PartitionData::new(spec, cfg)?;
    let beta0 = data.critical_beta(cfg)?;
    if beta < beta0 - cfg.eps_geom {
        return Err(Error::NoSphere { beta, beta0 });
    }
    let points = crate::kms::sample_q_beta(spec, beta, grid, cfg)?;
    let residuals: Vec<f64> = points.iter().map(|p| p.residual(spec)).collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let n = spec.rank();
    let mut header: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    if check {
        header.push("residual".into());
    }
    let rows = points
        .iter()
        .zip(&residuals)
        .map(|(p, r)| {
            let mut row: Vec<Out> = p.u.iter().map(|&x| Out::Num(x)).collect();
            if check {
                row.push(Out::Num(*r));
            }
            row
        })
        .collect();
    let pts = points
        .iter()
        .zip(&residuals)
        .map(|(p, r)| {
            let mut f = vec![("u", Out::nums(&p.u))];
            if check {
                f.push(("residual", Out::Num(*r)));
            }
            Out::obj(f)
        })
        .collect();
    let json = Out::obj(vec![
        ("beta", Out::Num(beta)),
        ("beta0", Out::Num(beta0)),
        ("points", Out::Arr(pts)),
    ]);
    Ok(Report::new(json)
        .with_table(header, rows)
        .checked(!check || worst <= cfg.eps_root, || {
            format!("Q(β) identity off by {worst:e}")
        }))
}

fn parse_descriptor(text: &str) -> Result<StateDescriptor> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text)?
    };
    Ok(serde_json::from_str(&body)?)
}

fn resolve_state(spec: &GroupSpec, a: &StateArgs, cfg: &SolverConfig) -> Result<KmsState> {
    if let Some(text) = &a.state {
        return KmsState::from_descriptor(spec, &parse_descriptor(text)?, cfg);
    }
    let data = PartitionData::new(spec, cfg)?;
    let beta0 = data.critical_beta(cfg)?;
    let beta = match (a.beta, a.beta_critical) {
        (Some(b), false) => b,
        (None, true) => beta0,
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --beta, --beta-critical or --state".into(),
            ))
        }
    };
    if let Some(t) = a.dihedral_t {
        let h = HarmonicVector::dihedral(spec, beta, t)?;
        return KmsState::new(
            spec,
            beta,
            vec![(1.0, crate::kms::Extreme::Harmonic(h))],
            cfg,
        );
    }
    if let Some(u) = &a.point {
        return KmsState::abelian(spec, QBetaPoint { u: u.clone(), beta }, cfg);
    }
    if beta < beta0 - cfg.eps_geom {
        return Err(Error::NoSphere { beta, beta0 });
    }
    let n = spec.rank();
    let critical = beta <= beta0 + cfg.eps_geom;
    let u = if n == 0 {
        if !critical {
            // the only abelian candidate is ψ ≡ 1, harmonic only at β₀
            return Err(Error::NoSphere { beta, beta0 });
        }
        Vec::new()
    } else if critical {
        data.u_of_beta(beta0, cfg)?
    } else {
        let v = a.direction.as_ref().ok_or_else(|| {
            Error::InvalidArgument(
                "above β₀ the state needs --direction, --point or --state".into(),
            )
        })?;
        if v.len() != n {
            return Err(Error::InvalidArgument(format!(
                "--direction needs {n} components"
            )));
        }
        let v = linalg::normalize(v)
            .ok_or_else(|| Error::InvalidArgument("--direction must be nonzero".into()))?;
        let u0 = data.u_of_beta(beta, cfg)?;
        let t = data.radial_root_from(&u0, beta, &v, cfg)?;
        linalg::add_scaled(&u0, t, &v)
    };
    // at β₀ the point is only as exact as β₀ itself
    let beta_used = if critical { beta0 } else { beta };
    let point = QBetaPoint { u, beta: beta_used };
    KmsState::abelian(spec, point, cfg)
}

fn fan(spec: &GroupSpec, check: bool, cfg: &SolverConfig) -> Result<Report> {
    crate::group::validate_spec(spec, cfg).into_result()?;
    let fan = Fan::build(spec, cfg)?;
    let names = |label: &[usize]| -> Vec<String> {
        label
            .iter()
            .map(|&s| spec.generators()[s].clone())
            .collect()
    };
    let cones = fan
        .cones()
        .iter()
        .map(|c| {
            Out::obj(vec![
                ("id", Out::Int(c.id as i64)),
                ("Z", Out::strs(names(&c.label))),
                ("dim", Out::Int(c.dim as i64)),
                (
                    "rays",
                    Out::Arr(c.rays.iter().map(|r| Out::nums(r)).collect()),
                ),
                ("center", Out::nums(&c.center)),
                (
                    "faces",
                    Out::Arr(c.face_ids.iter().map(|&f| Out::Int(f as i64)).collect()),
                ),
            ])
        })
        .collect();
    let n = spec.rank();
    let mut header: Vec<String> = vec!["id".into(), "dim".into(), "Z".into()];
    header.extend((1..=n).map(|i| format!("center{i}")));
    let rows = fan
        .cones()
        .iter()
        .map(|c| {
            let mut row = vec![
                Out::Int(c.id as i64),
                Out::Int(c.dim as i64),
                Out::strs(names(&c.label)),
            ];
            row.extend(c.center.iter().map(|&x| Out::Num(x)));
            row
        })
        .collect();
    let mut fields = vec![("rank", Out::Int(n as i64)), ("cones", Out::Arr(cones))];
    let mut failure = None;
    if check {
        let (uncovered, overclaimed) = covering_defects(&fan, 1000);
        fields.push(("uncovered", Out::Int(uncovered as i64)));
        fields.push(("overclaimed", Out::Int(overclaimed as i64)));
        if uncovered + overclaimed > 0 {
            failure = Some(format!(
                "{uncovered} directions outside their cone, {overclaimed} claimed twice"
            ));
        }
    }
    let report = Report::new(Out::obj(fields)).with_table(header, rows);
    Ok(match failure {
        Some(why) => report.checked(false, || why),
        None => report,
    })
}

/// Over `k` quasi-random directions: how many violate the constraints of their
/// membership cone, and how many sit strictly inside two maximal cones.
pub fn covering_defects(fan: &Fan, k: usize) -> (usize, usize) {
    let mut uncovered = 0;
    let mut overclaimed = 0;
    for v in sphere::quasi_random(fan.rank(), k) {
        match fan.membership(&v) {
            Ok(id) if fan.cone(id).contains(&v, fan.tolerance()) => {}
            _ => uncovered += 1,
        }
        if fan.interior_claims(&v).len() > 1 {
            overclaimed += 1;
        }
    }
    (uncovered, overclaimed)
}

fn ninf(
    spec: &GroupSpec,
    v: Option<&[f64]>,
    grid: Option<usize>,
    check: bool,
    cfg: &SolverConfig,
) -> Result<Report> {
    let cache = HMapCache::new(spec, cfg)?;
    let n = spec.rank();
    let dirs: Vec<Vec<f64>> = match (v, grid) {
        (Some(v), None) => {
            if v.len() != n {
                return Err(Error::InvalidArgument(format!("--v needs {n} components")));
            }
            vec![linalg::normalize(v)
                .ok_or_else(|| Error::InvalidArgument("--v must be nonzero".into()))?]
        }
        (None, Some(k)) => sphere::grid(n, k),
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --v or --grid".into(),
            ))
        }
    };
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut worst: f64 = 0.0;
    for d in &dirs {
        let t = cache.h_eval(d)?;
        let gap = if check {
            let o = cache.associated_limit(d)?;
            let g = t.sup_dist(&o.limit);
            worst = worst.max(g);
            Some(g)
        } else {
            None
        };
        let mut row: Vec<Out> = d.iter().map(|&x| Out::Num(x)).collect();
        row.extend(t.p.iter().map(|&x| Out::Num(x)));
        let p = Out::Obj(
            spec.generators()
                .iter()
                .cloned()
                .zip(t.p.iter().map(|&x| Out::Num(x)))
                .collect(),
        );
        let mut item = vec![
            ("v", Out::nums(d)),
            ("p", p),
            (
                "support",
                Out::strs(t.support.iter().map(|&s| spec.generators()[s].clone())),
            ),
        ];
        if let Some(g) = gap {
            row.push(Out::Num(g));
            item.push(("oracle_gap", Out::Num(g)));
        }
        rows.push(row);
        items.push(Out::obj(item));
    }
    let mut header: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    header.extend(spec.generators().iter().map(|s| format!("p_{s}")));
    if check {
        header.push("oracle_gap".into());
    }
    let json = if v.is_some() {
        items.pop().expect("one direction")
    } else {
        Out::obj(vec![("points", Out::Arr(items))])
    };
    Ok(Report::new(json)
        .with_table(header, rows)
        .checked(!check || worst <= cfg.eps_limit, || {
            format!("H differs from its limit oracle by {worst:e}")
        }))
}

fn dihedral(
    spec: &GroupSpec,
    beta: f64,
    t: f64,
    n_max: i64,
    check: bool,
    cfg: &SolverConfig,
) -> Result<Report> {
    let h = HarmonicVector::dihedral(spec, beta, t)?;
    let c_beta = match h.kind {
        HarmonicKind::DihedralFamily { c_beta, .. } => c_beta,
        _ => unreachable!("dihedral constructor"),
    };
    let a = spec.parse_word("a")?;
    let b = spec.parse_word("b")?;
    let mut rows = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for n in 0..=n_max.max(0) {
        let an = Word(a.0.repeat(n as usize));
        let x = h.psi_word(&an)?;
        let y = h.psi_word(&an.concat(&b))?;
        xs.push(x);
        ys.push(y);
        rows.push(vec![Out::Int(n), Out::Num(x), Out::Num(y)]);
    }
    let mut fields = vec![
        ("beta", Out::Num(beta)),
        ("t", Out::Num(t)),
        ("c_beta", Out::Num(c_beta)),
        ("x", Out::nums(&xs)),
        ("y", Out::nums(&ys)),
    ];
    let mut ok = true;
    if check {
        let res = h.harmonic_residual(8, cfg)?;
        let kms = h.kms_condition_check(5)?;
        ok = res <= cfg.eps_grad && kms <= cfg.eps_grad;
        fields.push(("harmonic_residual", Out::Num(res)));
        fields.push(("kms_violation", Out::Num(kms)));
    }
    Ok(Report::new(Out::obj(fields))
        .with_table(vec!["n".into(), "x".into(), "y".into()], rows)
        .checked(ok, || "dihedral family fails its residual checks".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["kms-cayley"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(6f64.ln()), "1.7917594692280550");
        assert_eq!(fmt17(1.0 / 36.0), "0.027777777777777776");
        assert_eq!(fmt17(0.0), "0.0");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000");
        assert_eq!(fmt17(1e-9), "1.0000000000000001e-9");
        assert_eq!(fmt17(123456.0), "123456.00000000000");
    }

    #[test]
    fn critical_beta_json() {
        let (code, out, _) = call(&["critical-beta", "--group", "heisenberg"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"beta0\": 1.79175946922805"), "{out}");
    }

    #[test]
    fn kms_eval_at_critical() {
        let (code, out, _) = call(&[
            "kms-eval",
            "--group",
            "heisenberg",
            "--beta-critical",
            "--t",
            "a,b",
            "--u",
            "a,b",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["value"].as_f64().unwrap() - 1.0 / 36.0).abs() < 1e-15);
        let (code, _, _) = call(&[
            "kms-eval",
            "--group",
            "heisenberg",
            "--beta-critical",
            "--t",
            "a,b",
            "--u",
            "b,a",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["q-beta", "--group", "heisenberg", "--beta", "1.0"]).0,
            2
        );
        assert_eq!(call(&["q-beta", "--group", "heisenberg"]).0, 1);
        assert_eq!(call(&["critical-beta", "--group", "nope"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(
            call(&[
                "kms-eval",
                "--group",
                "heisenberg",
                "--beta",
                "1.5",
                "--direction",
                "1,0",
                "--t",
                "a",
                "--u",
                "a"
            ])
            .0,
            2
        );
        assert_eq!(
            call(&[
                "kms-eval",
                "--group",
                "heisenberg",
                "--beta-critical",
                "--t",
                "a,x",
                "--u",
                "a"
            ])
            .0,
            1
        );
    }

    #[test]
    fn ninf_grid_on_integers() {
        let (code, out, _) = call(&["ninf", "--group", "zn:1", "--grid", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "v1,p_e1,p_e1_inv");
        assert_eq!(lines[1], "1.0000000000000000,1.0000000000000000,0.0");
        assert_eq!(lines[2], "-1.0000000000000000,0.0,1.0000000000000000");
    }

    #[test]
    fn ninf_check_passes() {
        let (code, out, err) = call(&["ninf", "--group", "heisenberg", "--v", "2,1", "--check"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("oracle_gap"));
    }

    #[test]
    fn potential_override() {
        let (code, out, _) = call(&[
            "critical-beta",
            "--group",
            "zn:1",
            "--potential",
            "e1_inv=2",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["beta0"].as_f64().unwrap() - 2.0 / 3.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn output_is_deterministic() {
        let args = [
            "q-beta",
            "--group",
            "heisenberg",
            "--beta",
            "2.5",
            "--grid",
            "8",
            "--check",
        ];
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn every_subcommand_checks() {
        for args in [
            vec!["validate", "--group", "heisenberg", "--check"],
            vec!["critical-beta", "--group", "dihedral_infinite", "--check"],
            vec!["beta-of-u", "--group", "zn:2", "--u", "0.5,-1", "--check"],
            vec![
                "harmonic-check",
                "--group",
                "heisenberg",
                "--beta",
                "2.5",
                "--direction",
                "0,1",
                "--check",
            ],
            vec![
                "kms-check",
                "--group",
                "dihedral_infinite",
                "--beta",
                "0.9162907318741551",
                "--dihedral-t",
                "0.25",
                "--check",
            ],
            vec!["fan", "--group", "zn:3", "--check"],
            vec![
                "dihedral",
                "--group",
                "dihedral_infinite",
                "--beta",
                "0.9162907318741551",
                "--t-param",
                "1",
                "--check",
            ],
        ] {
            let (code, _, err) = call(&args);
            assert_eq!(code, 0, "{args:?}: {err}");
        }
    }

    #[test]
    fn dihedral_values() {
        let (code, out, _) = call(&[
            "dihedral",
            "--group",
            "dihedral_infinite",
            "--beta",
            "0.9162907318741551",
            "--t-param",
            "1",
            "--n-max",
            "3",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let x: Vec<f64> = v["x"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert!((x[2] - 4.0).abs() < 1e-12);
        assert!((v["y"][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!((v["c_beta"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn state_descriptor_inline() {
        let desc = r#"{"beta": 0.9162907318741551, "mixture": [{"w": 0.5, "dihedral_t": 0.0}, {"w": 0.5, "dihedral_t": 1.0}]}"#;
        let (code, out, err) = call(&[
            "kms-eval",
            "--group",
            "dihedral_infinite",
            "--state",
            desc,
            "--t",
            "a",
            "--u",
            "a",
        ]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    }
}
