//! Command-line front end: argument parsing, input resolution, JSON and
//! table rendering, exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use toric_cy::catalog::{catalog, lookup};
use toric_cy::chow::{chern_numbers_ci, monomial_intersection, rational_string};
use toric_cy::io::{parse_cy, parse_fan, CyFile, FanFile, CATALOG_PREFIX};
use toric_cy::lattice::Rational;
use toric_cy::pipeline::{Assumption, HodgeReport, SmoothnessCertificate};
use toric_cy::{
    class_group, cohomology_dims_with, hodge_report, is_fano, smoothness_certificate_with,
    CertPath, CertificateOptions, CompleteIntersection, Error, Fan, FanWarning, Method,
    TorusDivisor, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-cy",
    version,
    about = "Exact toric Calabi-Yau computations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fan operations.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Cohomology dimensions h^i(F, O(D)).
    Coh {
        /// Fan file or catalog:<name>.
        file: String,
        /// Divisor coefficients, one per ray, comma separated.
        #[arg(
            short = 'D',
            long = "divisor",
            required = true,
            allow_hyphen_values = true,
            value_delimiter = ','
        )]
        divisor: Vec<i64>,
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: Method,
    },
    /// Degree of a monomial in the ray variables.
    Intersect {
        /// Fan file or catalog:<name>.
        file: String,
        /// Exponent of each ray variable, comma separated.
        #[arg(short = 'm', required = true, value_delimiter = ',')]
        exponents: Vec<u32>,
    },
    /// Smoothness certificate for the forgetful morphism.
    Smooth {
        /// CY file or catalog:<name>.
        file: String,
        /// Record every successful path per ray.
        #[arg(long)]
        all_paths: bool,
        /// Only try this certificate path.
        #[arg(long, value_parser = parse_path)]
        path: Option<CertPath>,
    },
    /// Hodge numbers with cross-checks.
    Hodge {
        /// CY file or catalog:<name>.
        file: String,
        /// Include the oracle values behind the cross-checks.
        #[arg(long)]
        oracle: bool,
        /// Record every successful certificate path per ray.
        #[arg(long)]
        all_paths: bool,
    },
    /// Built-in fixtures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum FanAction {
    /// Validate a fan and report its basic properties.
    Check {
        /// Fan file or catalog:<name>.
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List the entries.
    List,
    /// Write an entry as a CY file.
    Emit {
        name: String,
        /// Write to this path instead of standard output.
        #[arg(short, long)]
        output: Option<String>,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_path(s: &str) -> Result<CertPath, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionEntry {
    pub id: Assumption,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_digest: Option<String>,
    pub result: Value,
    pub assumptions: Vec<AssumptionEntry>,
    pub error: Option<ErrorEntry>,
    pub exit_code: i32,
    #[serde(skip)]
    pub format: Format,
    /// Table rendering of the result.
    #[serde(skip)]
    pub table: String,
}

impl RunReport {
    fn new(command: Vec<String>, format: Format) -> Self {
        Self {
            command,
            input_digest: None,
            result: Value::Null,
            assumptions: Vec::new(),
            error: None,
            exit_code: EXIT_OK,
            format,
            table: String::new(),
        }
    }

    fn assume(&mut self, list: &[Assumption]) {
        let mut list = list.to_vec();
        list.sort();
        list.dedup();
        self.assumptions = list
            .into_iter()
            .map(|id| AssumptionEntry {
                id,
                description: id.describe().into(),
            })
            .collect();
    }

    fn fail(&mut self, err: &Error) {
        self.exit_code = exit_code_for(err);
        self.error = Some(ErrorEntry {
            kind: error_kind(err).into(),
            message: err.to_string(),
        });
    }

    /// What goes to standard output.
    pub fn stdout(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => self.table.clone(),
        }
    }

    /// What goes to standard error.
    pub fn stderr(&self) -> String {
        match (&self.error, self.format) {
            (Some(e), Format::Table) => format!("error ({}): {}\n", e.kind, e.message),
            _ => String::new(),
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::CrossCheckFailed(_)
        | Error::NonIntegerEuler(_)
        | Error::NonIntegerSignatureTerm(_) => EXIT_CROSS_CHECK,
        _ => EXIT_REJECTED,
    }
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::DimensionMismatch(_) => "dimension-mismatch",
        Error::InvalidInput(_) => "invalid-input",
        Error::UnboundedPolytope { .. } => "unbounded-polytope",
        Error::NotSimplicial { .. } => "not-simplicial",
        Error::TorusFactor { .. } => "torus-factor",
        Error::NotAFan { .. } => "not-a-fan",
        Error::NotComplete(_) => "not-complete",
        Error::WrongDegree { .. } => "wrong-degree",
        Error::AdjunctionFailed => "adjunction-failed",
        Error::NonIntegerEuler(_) => "non-integer-euler",
        Error::NonIntegerSignatureTerm(_) => "non-integer-signature-term",
        Error::IndeterminateChase { .. } => "indeterminate-chase",
        Error::NotCertified(_) => "not-certified",
        Error::CrossCheckFailed(_) => "cross-check-failed",
        Error::Rejected(_) => "rejected",
        Error::Unsupported(_) => "unsupported",
        Error::UnknownEntry(_) => "unknown-entry",
        Error::NonPrimitiveConfiguration(_) => "non-primitive-configuration",
    }
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Raw input text, or a usage error message for unreadable files.
fn read_input(path: &str) -> Result<String, String> {
    fs::read_to_string(Path::new(path)).map_err(|e| format!("cannot read `{path}`: {e}"))
}

enum Input<T> {
    Ok(T, String),
    Usage(String),
    Invalid(Error, String),
}

fn load_fan(reference: &str) -> Input<(String, Fan, Vec<FanWarning>)> {
    if let Some(name) = reference.strip_prefix(CATALOG_PREFIX) {
        return match lookup(name).and_then(|e| e.ambient.fan().map(|f| (e, f))) {
            Ok((e, fan)) => {
                let text = serde_json::to_string(&FanFile::from_fan(&fan, &e.name)).unwrap();
                Input::Ok((e.name, fan, Vec::new()), digest(text.as_bytes()))
            }
            Err(err) => Input::Invalid(err, String::new()),
        };
    }
    let text = match read_input(reference) {
        Ok(t) => t,
        Err(e) => return Input::Usage(e),
    };
    let d = digest(text.as_bytes());
    match parse_fan(&text) {
        Ok((file, fan, warnings)) => Input::Ok((file.name, fan, warnings), d),
        Err(err) => Input::Invalid(err, d),
    }
}

fn load_cy(reference: &str) -> Input<CompleteIntersection> {
    if let Some(name) = reference.strip_prefix(CATALOG_PREFIX) {
        return match lookup(name).and_then(|e| e.build()) {
            Ok(z) => {
                let text = serde_json::to_string(&CyFile::from_ci(&z)).unwrap();
                Input::Ok(z, digest(text.as_bytes()))
            }
            Err(err) => Input::Invalid(err, String::new()),
        };
    }
    let text = match read_input(reference) {
        Ok(t) => t,
        Err(e) => return Input::Usage(e),
    };
    let d = digest(text.as_bytes());
    match parse_cy(&text) {
        Ok((z, _)) => Input::Ok(z, d),
        Err(err) => Input::Invalid(err, d),
    }
}

/// Unwraps an [`Input`], recording failures on the report.
macro_rules! resolve {
    ($report:expr, $input:expr) => {
        match $input {
            Input::Ok(v, d) => {
                $report.input_digest = Some(d);
                v
            }
            Input::Usage(msg) => {
                $report.exit_code = EXIT_USAGE;
                $report.error = Some(ErrorEntry {
                    kind: "usage".into(),
                    message: msg,
                });
                return $report;
            }
            Input::Invalid(err, d) => {
                if !d.is_empty() {
                    $report.input_digest = Some(d);
                }
                $report.fail(&err);
                return $report;
            }
        }
    };
}

/// Run the CLI on `argv` (including the program name).
pub fn run<I, S>(argv: I) -> RunReport
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let command: Vec<String> = argv.iter().skip(1).cloned().collect();
    // usage errors are reported before clap has produced a format
    let format = if argv
        .windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
        || argv.iter().any(|a| a == "--format=json")
    {
        Format::Json
    } else {
        Format::Table
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let mut report = RunReport::new(command, format);
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                report.table = e.to_string();
                report.result = json!({ "help": e.to_string() });
                return report;
            }
            report.exit_code = EXIT_USAGE;
            report.error = Some(ErrorEntry {
                kind: "usage".into(),
                message: e.to_string().trim_end().to_string(),
            });
            return report;
        }
    };
    let report = RunReport::new(command, cli.format);
    match cli.command {
        Command::Fan {
            action: FanAction::Check { file },
        } => fan_check(report, &file),
        Command::Coh {
            file,
            divisor,
            method,
        } => coh(report, &file, divisor, method),
        Command::Intersect { file, exponents } => intersect(report, &file, &exponents),
        Command::Smooth {
            file,
            all_paths,
            path,
        } => smooth(
            report,
            &file,
            CertificateOptions {
                all_paths,
                only: path,
            },
        ),
        Command::Hodge {
            file,
            oracle,
            all_paths,
        } => hodge(report, &file, oracle, all_paths),
        Command::Catalog { action } => match action {
            CatalogAction::List => catalog_list(report),
            CatalogAction::Emit { name, output } => catalog_emit(report, &name, output.as_deref()),
        },
    }
}

fn big(x: &impl ToString) -> String {
    x.to_string()
}

fn fan_check(mut report: RunReport, file: &str) -> RunReport {
    let (name, fan, warnings) = resolve!(report, load_fan(file));
    let complete = fan.is_complete();
    let fano = if complete {
        match is_fano(&fan) {
            Ok(f) => Some(f),
            Err(e) => {
                report.fail(&e);
                return report;
            }
        }
    } else {
        None
    };
    let group = class_group(&fan);
    let singular: Vec<Value> = fan
        .singular_cones()
        .iter()
        .map(|c| json!({ "rays": c.rays(), "multiplicity": big(&fan.cone_multiplicity(c)) }))
        .collect();
    let normalizations: Vec<Value> = warnings
        .iter()
        .map(|w| match w {
            FanWarning::Primitivized { ray, factor } => json!({ "ray": ray, "divided_by": factor }),
        })
        .collect();
    let torsion: Vec<String> = group.torsion().iter().map(big).collect();
    report.result = json!({
        "name": name,
        "dim": fan.dim(),
        "rays": fan.num_rays(),
        "max_cones": fan.max_cones().len(),
        "simplicial": true,
        "complete": complete,
        "smooth": fan.is_smooth(),
        "fano": fano,
        "class_group": { "rank": group.rank(), "torsion": torsion },
        "singular_cones": singular,
        "normalized_rays": normalizations,
    });
    let mut t = String::new();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        t,
        "fan         {}",
        if name.is_empty() { "-" } else { &name }
    );
    let _ = writeln!(t, "dimension   {}", fan.dim());
    let _ = writeln!(t, "rays        {}", fan.num_rays());
    let _ = writeln!(t, "max cones   {}", fan.max_cones().len());
    let _ = writeln!(t, "simplicial  yes");
    let _ = writeln!(t, "complete    {}", yn(complete));
    let _ = writeln!(t, "smooth      {}", yn(fan.is_smooth()));
    let _ = writeln!(t, "fano        {}", fano.map_or("n/a", yn));
    let _ = writeln!(t, "class group Z^{} torsion {:?}", group.rank(), torsion);
    for w in &warnings {
        let FanWarning::Primitivized { ray, factor } = w;
        let _ = writeln!(t, "ray {ray} divided by {factor} to make it primitive");
    }
    report.table = t;
    report
}

fn coh(mut report: RunReport, file: &str, divisor: Vec<i64>, method: Method) -> RunReport {
    let (_, fan, _) = resolve!(report, load_fan(file));
    let d = TorusDivisor(divisor);
    match cohomology_dims_with(&fan, &d, method) {
        Ok((dims, used)) => {
            let dims = dims.dims().expect("ambient cohomology is exact").to_vec();
            report.result = json!({ "dims": dims, "method": used.to_string() });
            report.table = format!(
                "h^i = ({})  [{used}]\n",
                dims.iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        Err(e) => report.fail(&e),
    }
    report
}

fn intersect(mut report: RunReport, file: &str, exponents: &[u32]) -> RunReport {
    let (_, fan, _) = resolve!(report, load_fan(file));
    match monomial_intersection(&fan, exponents) {
        Ok(v) => {
            let s = rational_string(&v);
            report.result = json!({ "value": s });
            report.table = format!("{s}\n");
        }
        Err(e) => report.fail(&e),
    }
    report
}

fn certificate_json(cert: &SmoothnessCertificate) -> Value {
    json!({
        "verdict": cert.verdict.to_string(),
        "reason": cert.reason,
        "dim": cert.dim,
        "dimension_ok": cert.dimension_ok,
        "per_ray": cert.per_ray.iter().map(|r| json!({
            "ray": r.ray,
            "path": r.path.map(|p| p.to_string()),
            "attempts": r.attempts.iter().map(|a| json!({
                "path": a.path.to_string(),
                "success": a.success,
                "evidence": a.evidence,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn certificate_table(cert: &SmoothnessCertificate) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "verdict  {}", cert.verdict);
    if let Some(r) = &cert.reason {
        let _ = writeln!(t, "reason   {r}");
    }
    for r in &cert.per_ray {
        let _ = writeln!(
            t,
            "ray {:<3} {}",
            r.ray,
            r.path
                .map_or("not certified".to_string(), |p| p.to_string())
        );
    }
    t
}

fn smooth(mut report: RunReport, file: &str, opts: CertificateOptions) -> RunReport {
    let z = resolve!(report, load_cy(file));
    match smoothness_certificate_with(&z, opts) {
        Ok(cert) => {
            report.assume(&cert.assumptions);
            report.result = certificate_json(&cert);
            report.table = certificate_table(&cert);
            if cert.verdict == Verdict::Rejected {
                report.fail(&Error::Rejected(cert.reason.clone().unwrap_or_default()));
            }
        }
        Err(e) => report.fail(&e),
    }
    report
}

fn rational_value(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        rational_string(q)
    }
}

#[derive(Serialize)]
struct HodgeNumbers {
    m: usize,
    h11: u64,
    h21: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    h31: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h22: Option<u64>,
    h11_certified: bool,
    euler: i64,
    diamond: Vec<Vec<u64>>,
}

fn hodge_json(r: &HodgeReport, z: &CompleteIntersection, oracle: bool) -> Value {
    let d = &r.diamond;
    let m = d.m;
    let numbers = HodgeNumbers {
        m,
        h11: d.get(1, 1),
        h21: d.get(2, 1),
        h31: (m == 4).then(|| d.get(3, 1)),
        h22: (m == 4).then(|| d.get(2, 2)),
        h11_certified: r.h11.certified,
        euler: d.euler_characteristic(),
        diamond: d.h.clone(),
    };
    let cc = &d.cross_checks;
    let mut checks = json!({
        "euler": {
            "passed": cc.euler_oracle == cc.euler_from_hodge,
        },
    });
    if let Some(n) = cc.signature_numerator {
        checks["signature_integrality"] = json!({ "passed": n % 45 == 0 });
    }
    if oracle {
        checks["euler"]["from_hodge"] = json!(cc.euler_from_hodge);
        checks["euler"]["chern_top"] = json!(cc.euler_oracle);
        if let Some(n) = cc.signature_numerator {
            checks["signature_integrality"]["numerator"] = json!(n);
            checks["signature_integrality"]["c2_squared"] = json!(cc.c2_squared);
        }
        let ray_sum: u64 = r.middle.ray_sections.iter().sum();
        checks["middle"] = json!({
            "normal_sections": r.middle.normal_sections,
            "ray_sections": r.middle.ray_sections,
            "ray_sections_total": ray_sum,
            "t": r.middle.t,
        });
        if let Ok(n) = chern_numbers_ci(z) {
            checks["chern_numbers"] = json!({
                "top": rational_value(&n.top),
                "c2_squared": n.c2_squared.as_ref().map(rational_value),
            });
        }
    }
    let cert = certificate_json(&r.certificate);
    json!({
        "verdict": cert["verdict"],
        "per_ray": cert["per_ray"],
        "hodge": serde_json::to_value(numbers).unwrap(),
        "cross_checks": checks,
    })
}

fn hodge_table(r: &HodgeReport) -> String {
    let d = &r.diamond;
    let m = d.m;
    let mut t = String::new();
    let _ = writeln!(t, "verdict {}", r.certificate.verdict);
    // diamond rows by p + q, widest in the middle
    let width = 6;
    for s in (0..=2 * m).rev() {
        let cells: Vec<String> = (0..=m)
            .rev()
            .filter_map(|p| {
                s.checked_sub(p)
                    .filter(|&q| q <= m)
                    .map(|q| d.get(p, q).to_string())
            })
            .collect();
        let pad = (m + 1 - cells.len()) * width / 2;
        let line: String = cells.iter().map(|c| format!("{c:^width$}")).collect();
        let _ = writeln!(t, "{}{}", " ".repeat(pad), line.trim_end());
    }
    let _ = writeln!(
        t,
        "euler {} (chern {})",
        d.cross_checks.euler_from_hodge, d.cross_checks.euler_oracle
    );
    t
}

fn hodge(mut report: RunReport, file: &str, oracle: bool, all_paths: bool) -> RunReport {
    let z = resolve!(report, load_cy(file));
    let opts = CertificateOptions {
        all_paths,
        only: None,
    };
    match hodge_report(&z, opts) {
        Ok(r) => {
            report.assume(&r.certificate.assumptions);
            report.result = hodge_json(&r, &z, oracle);
            report.table = hodge_table(&r);
        }
        Err(e) => {
            // keep the certificate so a rejection still says why
            if let Ok(cert) = smoothness_certificate_with(&z, opts) {
                report.assume(&cert.assumptions);
                report.result = certificate_json(&cert);
            }
            report.fail(&e);
        }
    }
    report
}

fn catalog_list(mut report: RunReport) -> RunReport {
    let entries = catalog();
    report.result = json!({ "entries": entries });
    let mut t = String::new();
    for e in &entries {
        let degrees: Vec<String> = e
            .degrees
            .iter()
            .map(|d| d.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        let _ = writeln!(
            t,
            "{:<12} degrees ({})  {}",
            e.name,
            degrees.join(")("),
            e.provenance
        );
    }
    report.table = t;
    report
}

fn catalog_emit(mut report: RunReport, name: &str, output: Option<&str>) -> RunReport {
    let z = match lookup(name).and_then(|e| e.build()) {
        Ok(z) => z,
        Err(e) => {
            report.fail(&e);
            return report;
        }
    };
    let file = CyFile::from_ci(&z);
    let text = serde_json::to_string_pretty(&file).unwrap() + "\n";
    report.input_digest = Some(digest(text.as_bytes()));
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                report.exit_code = EXIT_USAGE;
                report.error = Some(ErrorEntry {
                    kind: "usage".into(),
                    message: format!("cannot write `{path}`: {e}"),
                });
                return report;
            }
            report.result = json!({ "written": path });
            report.table = format!("wrote {path}\n");
        }
        None => {
            report.result = serde_json::to_value(&file).unwrap();
            report.table = text;
        }
    }
    report
}
