//! Command-line front end for `binforms`.
//!
//! [`run`] parses arguments, performs one computation and returns the text
//! to print together with the exit code, so the binary stays a thin shell.

mod verify;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use binforms::area::{self, AreaMethod, DEFAULT_TOL};
use binforms::autgroup::{verify_claimed_aut, MatrixGroup};
use binforms::count::{
    adaptive_count_with, cf_reference, convergence_sweep, count_represented_with, estimated_evaluations,
    CountOptions, CountReport,
};
use binforms::exact::format_rational;
use binforms::forms::{build, FormKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use verify::{run_verify, SuiteResult, VerifySummary};

/// Evaluations `count` performs without `--force`.
pub const EVALUATION_LIMIT: f64 = 1e10;
pub const MAX_N: u32 = 64;
pub const DEFAULT_M0: u64 = 64;
pub const DEFAULT_MAX_DOUBLINGS: u32 = 12;

#[derive(Parser, Debug)]
#[command(name = "binforms", version, about = "Binary forms R_n, I_n: automorphisms, areas, counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of R_n or I_n.
    Form(FormArgs),
    /// Area of the region |F(x, y)| <= 1.
    Area(AreaArgs),
    /// Automorphism groups and weight.
    Aut(FamilyArgs),
    /// The constant C_F = W_F A_F.
    Cf(CfArgs),
    /// Count represented integers.
    Count(CountArgs),
    /// Run the built-in identity suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Rn,
    In,
}

impl From<KindArg> for FormKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rn => FormKind::Rn,
            KindArg::In => FormKind::In,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Line,
    Polar,
    Closed,
}

impl From<MethodArg> for AreaMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Line => AreaMethod::LineIntegral,
            MethodArg::Polar => AreaMethod::PolarIntegral,
            MethodArg::Closed => AreaMethod::ClosedForm,
        }
    }
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug)]
struct FormArgs {
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args, Debug)]
struct AreaArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value = "line")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct CfArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    zmax: u64,
    /// Fixed box |x|, |y| <= M.
    #[arg(long = "box", conflicts_with = "adaptive")]
    box_size: Option<u64>,
    /// Double the box until the count is stable (the default).
    #[arg(long)]
    adaptive: bool,
    /// Starting box for adaptive runs.
    #[arg(long, default_value_t = DEFAULT_M0)]
    m0: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_DOUBLINGS)]
    max_doublings: u32,
    /// Also report every power of ten below zmax, sharing one enumeration.
    #[arg(long, conflicts_with = "box_size")]
    sweep: bool,
    #[arg(long)]
    include_zero: bool,
    /// Single-threaded enumeration.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Skip the evaluation budget check.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12)]
    nmax: u32,
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(value: &Value) -> Self {
        Self {
            code: 0,
            stdout: pretty(value),
            stderr: String::new(),
        }
    }

    fn failure(code: i32, message: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::failure(code, text)
            };
        }
    };
    let result = match cli.command {
        Command::Form(a) => form_cmd(&a.family),
        Command::Area(a) => area_cmd(&a),
        Command::Aut(a) => aut_cmd(&a),
        Command::Cf(a) => cf_cmd(&a),
        Command::Count(a) => count_cmd(&a),
        Command::Verify(a) => return verify_cmd(&a),
    };
    match result {
        Ok(v) => Outcome::ok(&v),
        Err(e) => Outcome::failure(1, format!("error: {e:#}\n")),
    }
}

fn check_n(n: u32, min: u32) -> anyhow::Result<()> {
    if n < min || n > MAX_N {
        bail!("n = {n} is out of range ({min} <= n <= {MAX_N})");
    }
    Ok(())
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        bail!("tolerance must be positive, got {tol}");
    }
    Ok(())
}

fn header(kind: FormKind, n: u32) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("kind".into(), json!(kind.label()));
    m.insert("n".into(), json!(n));
    m.insert("degree".into(), json!(n));
    m
}

fn form_cmd(a: &FamilyArgs) -> anyhow::Result<Value> {
    check_n(a.n, 1)?;
    let kind = a.kind.into();
    let form = build(kind, a.n)?;
    let mut out = header(kind, a.n);
    let coeffs: Vec<String> = form.coefficients().iter().map(ToString::to_string).collect();
    out.insert("coefficients".into(), json!(coeffs));
    out.insert("display".into(), json!(form.to_string()));
    Ok(Value::Object(out))
}

fn area_cmd(a: &AreaArgs) -> anyhow::Result<Value> {
    check_n(a.family.n, 3)?;
    check_tol(a.tol)?;
    let kind = a.family.kind.into();
    let r = area::area(kind, a.family.n, a.method.into(), a.tol)?;
    let mut out = header(kind, a.family.n);
    out.insert(
        "area".into(),
        json!({
            "value": r.value,
            "method": r.method.label(),
            "est_error": r.est_error,
            "tol": a.tol,
        }),
    );
    Ok(Value::Object(out))
}

fn group_json(g: &MatrixGroup) -> Vec<String> {
    g.elements().iter().map(ToString::to_string).collect()
}

fn aut_cmd(a: &FamilyArgs) -> anyhow::Result<Value> {
    check_n(a.n, 3)?;
    let kind = a.kind.into();
    let r = verify_claimed_aut(kind, a.n)?;
    let mut out = header(kind, a.n);
    out.insert(
        "aut".into(),
        json!({
            "order": r.aut_order,
            "type": r.aut_type.to_string(),
            "elements": group_json(&r.aut),
            "abs_order": r.aut_abs_order,
            "abs_type": r.aut_abs_type.to_string(),
            "abs_elements": group_json(&r.aut_abs),
            "weight": format_rational(&r.weight),
            "integral_entries": r.integral_entries,
            "expected_type": r.claimed_aut_type.to_string(),
            "expected_abs_type": r.claimed_abs_type.to_string(),
            "expected_types_agree": r.expected_types_agree(),
        }),
    );
    Ok(Value::Object(out))
}

fn cf_cmd(a: &CfArgs) -> anyhow::Result<Value> {
    check_n(a.family.n, 3)?;
    check_tol(a.tol)?;
    let kind = a.family.kind.into();
    let r = area::compute_cf(kind, a.family.n, a.tol)?;
    let mut out = header(kind, a.family.n);
    out.insert(
        "cf".into(),
        json!({
            "weight": format_rational(&r.weight),
            "area": r.area_quadrature,
            "area_est_error": r.area_quadrature_error,
            "area_polar": r.area_polar,
            "area_closed": r.area_closed,
            "cf": r.cf_computed,
            "cf_closed": r.cf_closed,
            "power_of_two_factor": format_rational(&r.nu2_factor),
            "tol": r.tol,
        }),
    );
    Ok(Value::Object(out))
}

/// One CSV row; field names are the column headers.
#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "Z")]
    z: u64,
    #[serde(rename = "M")]
    m: u64,
    count: u64,
    ratio: f64,
    cf_reference: Option<f64>,
    stable: bool,
}

impl From<&CountReport> for CsvRow {
    fn from(r: &CountReport) -> Self {
        Self {
            z: r.z,
            m: r.box_size,
            count: r.count,
            ratio: r.ratio,
            cf_reference: r.cf_reference,
            stable: r.stable,
        }
    }
}

/// Writes `Z,M,count,ratio,cf_reference,stable` rows.
pub fn write_csv(path: &Path, reports: &[CountReport]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    for r in reports {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_list(zmax: u64) -> Vec<u64> {
    let mut zs: Vec<u64> = std::iter::successors(Some(10u64), |z| z.checked_mul(10))
        .take_while(|&z| z < zmax)
        .collect();
    zs.push(zmax);
    zs
}

fn count_cmd(a: &CountArgs) -> anyhow::Result<Value> {
    check_n(a.family.n, 3)?;
    if a.zmax == 0 {
        bail!("--zmax must be at least 1");
    }
    let kind = a.family.kind.into();
    let form = build(kind, a.family.n)?;
    let opts = CountOptions {
        include_zero: a.include_zero,
        parallel: !a.serial,
    };
    let largest_box = match a.box_size {
        Some(m) if m.leading_zeros() <= 1 => bail!("--box must be below 2^62"),
        Some(m) => m,
        None => a
            .m0
            .max(1)
            .checked_shl(a.max_doublings)
            .filter(|m| m.leading_zeros() > 1)
            .context("--m0 and --max-doublings give a box beyond 2^62")?,
    };
    let estimate = estimated_evaluations(&form, a.zmax, largest_box);
    if estimate > EVALUATION_LIMIT && !a.force {
        bail!(
            "about {estimate:.3e} evaluations (box up to {largest_box}) exceeds {EVALUATION_LIMIT:e}; pass --force to run anyway"
        );
    }
    let reports = match (a.box_size, a.sweep) {
        (Some(m), _) => {
            let mut r = count_represented_with(&form, a.zmax, m, &opts);
            r.cf_reference = cf_reference(&form);
            vec![r]
        }
        (None, true) => convergence_sweep(&form, &sweep_list(a.zmax), a.m0, a.max_doublings, &opts)?,
        (None, false) => {
            let mut r = adaptive_count_with(&form, a.zmax, a.m0, a.max_doublings, &opts);
            r.cf_reference = cf_reference(&form);
            vec![r]
        }
    };
    if let Some(path) = &a.csv {
        write_csv(path, &reports)?;
    }
    let mut out = header(kind, a.family.n);
    let counts: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "Z": r.z.to_string(),
                "M": r.box_size,
                "count": r.count,
                "ratio": r.ratio,
                "cf_reference": r.cf_reference,
                "stable": r.stable,
            })
        })
        .collect();
    out.insert("counts".into(), json!(counts));
    out.insert(
        "options".into(),
        json!({
            "mode": if a.box_size.is_some() { "box" } else if a.sweep { "sweep" } else { "adaptive" },
            "m0": a.m0,
            "max_doublings": a.max_doublings,
            "include_zero": a.include_zero,
            "parallel": !a.serial,
        }),
    );
    Ok(Value::Object(out))
}

fn verify_cmd(a: &VerifyArgs) -> Outcome {
    if let Err(e) = check_n(a.nmax, 3) {
        return Outcome::failure(2, format!("error: {e}\n"));
    }
    let summary = run_verify(a.nmax);
    let value = serde_json::to_value(&summary).expect("serializable");
    let mut out = Outcome::ok(&json!({ "verify": value }));
    if !summary.passed {
        out.code = 1;
        let failed: Vec<&str> = summary
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.name.as_str())
            .collect();
        out.stderr = format!("verification failed: {}\n", failed.join(", "));
    }
    out
}
