//! Command-line front end for the kazhdan toolkit.
//!
//! Every command prints one JSON [`RunReport`] on standard output. Exit
//! codes: 0 affirmative result, 2 negative result, 3 invalid input, 4
//! resource cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use kazhdan::algebra::Rational;
use kazhdan::ball::{ball_to_bytes, enumerate_cached, BallError, DEFAULT_CAP};
use kazhdan::groups::{check_relation, parse_model, relation_instances, GroupModel, ModelVisitor, RelationId};
use kazhdan::phi::{
    audit_harmonicity_counts, figure1_report, harmonicity_closed_form, parse_vector_spec, phi_check,
    CanonMode, CoboundaryForm, Feasibility, InstanceConfig, PhiError,
};
use kazhdan::sos::{
    build_sos_problem, maximize_epsilon, round_and_certify, solve_feasibility, verify_certificate,
    CertifyOptions, GramCertificate, Method, SolveOptions, SolveStatus, SolverMetadata, SosError,
};

pub const REPORT_SCHEMA: &str = "kazhdan-run-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "kazhdan", version, about = "Property (T) certification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a Cayley ball, optionally through a cache directory.
    Ball(BallArgs),
    /// Maximize ε for Δ² - εΔ being a sum of squares.
    Sos(SosArgs),
    /// Solve, round and exactly verify; writes a certificate file.
    Certify(CertifyArgs),
    /// Re-check a certificate file in rational arithmetic.
    Verify(VerifyArgs),
    /// Count pairings of Δ_ab, Δ_cd by number of distinct places.
    AuditHarmonicity(AuditArgs),
    /// Exact Gram test of the five-point configuration.
    RefuteFigure1(Figure1Args),
    /// Random constraint systems for Φ and their consistency.
    PhiCheck(PhiCheckArgs),
    /// Coboundary form values from a vector on the points of (Z/2)^n.
    Witness(WitnessArgs),
    /// Check every instance of the defining relations of SAut(F_n).
    Relations(RelationsArgs),
}

#[derive(Args, Debug, Serialize)]
struct GroupArgs {
    /// Group descriptor: z5, z2xz2, zd:2, s3, free:2, sl:3, saut:3.
    #[arg(long)]
    group: String,
    /// Radius of the Gram support ball.
    #[arg(long)]
    radius: usize,
    /// Largest number of ball elements enumerated.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Serialize)]
struct BallArgs {
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    /// Directory of ball cache files.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Dr,
    Ap,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::Dr => Method::DouglasRachford,
            MethodArg::Ap => Method::AlternatingProjections,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SolverArgs {
    /// Average the Gram matrix over the model's symmetry group.
    #[arg(long)]
    symmetrize: bool,
    /// Max-norm residual accepted as feasible.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Dr)]
    method: MethodArg,
    /// Bits of the dyadic grid used when rounding.
    #[arg(long, default_value_t = 32)]
    denominator_bits: u32,
}

impl SolverArgs {
    fn options(&self) -> Result<SolveOptions, CliError> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(CliError::Invalid("tol and max-iter must be positive".into()));
        }
        Ok(SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            method: self.method.method(),
            symmetrize: self.symmetrize,
            ..Default::default()
        })
    }

    fn certify_options(&self) -> CertifyOptions {
        CertifyOptions { denominator_bits: self.denominator_bits, ..Default::default() }
    }
}

#[derive(Args, Debug, Serialize)]
struct SosArgs {
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
    /// Width of the final bisection bracket.
    #[arg(long, default_value_t = 1e-4)]
    eps_tol: f64,
    /// Skip exact rounding of the best Gram matrix.
    #[arg(long)]
    no_certify: bool,
}

#[derive(Args, Debug, Serialize)]
struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
    /// Target ε; bisection when omitted.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1e-4)]
    eps_tol: f64,
    /// Certificate output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    certificate: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct AuditArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct Figure1Args {
    /// Squared distance between E_ab and E_ac E_bc, as a fraction.
    #[arg(long, default_value = "2")]
    d34: String,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Automorphism,
    Syntactic,
}

#[derive(Args, Debug, Serialize)]
struct PhiCheckArgs {
    /// Longest word in the disjoint, cancellation and expansion instances.
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Automorphism)]
    mode: ModeArg,
    /// Writes the system with the five-point rules and its certificate.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct WitnessArgs {
    #[arg(long)]
    n: usize,
    /// zero, uniform, point:BITS, or 2^n comma-separated fractions.
    #[arg(long)]
    vector: String,
}

#[derive(Args, Debug, Serialize)]
struct RelationsArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<BallError> for CliError {
    fn from(e: BallError) -> Self {
        match e {
            BallError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<SosError> for CliError {
    fn from(e: SosError) -> Self {
        match e {
            SosError::Ball(b) => b.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<PhiError> for CliError {
    fn from(e: PhiError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub version: &'static str,
    pub parameters: Value,
    pub exit_code: i32,
    pub result: Value,
    /// SHA-256 of every file read, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// What a run produced: the exit code and the text for each stream.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

struct Ctx {
    inputs: BTreeMap<String, String>,
    timings: BTreeMap<String, f64>,
}

impl Ctx {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(name.to_string(), t.elapsed().as_secs_f64());
        out
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let data = fs::read(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&data));
        Ok(data)
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn fraction(q: &Rational) -> Value {
    json!({ "exact": q.to_string(), "approx": to_f64(q) })
}

/// Parses `argv` (program name first), runs the command and renders the
/// report. Never panics on bad input.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr, report: None };
        }
    };
    let (name, parameters) = describe(&cli.command);
    let mut ctx = Ctx { inputs: BTreeMap::new(), timings: BTreeMap::new() };
    let start = Instant::now();
    let result = dispatch(&cli.command, &mut ctx);
    ctx.timings.insert("total".into(), start.elapsed().as_secs_f64());
    let (code, result, stderr) = match result {
        Ok((code, value)) => (code, value, String::new()),
        Err(e) => (e.code(), json!({ "error": e.to_string() }), format!("kazhdan: {e}\n")),
    };
    let report = RunReport {
        schema: REPORT_SCHEMA,
        command: name.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        parameters,
        exit_code: code,
        result,
        inputs: ctx.inputs,
        timings: ctx.timings,
    };
    Outcome { code, stdout: report.to_json() + "\n", stderr, report: Some(report) }
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    let v = |x: Result<Value, serde_json::Error>| x.expect("arguments serialize");
    match cmd {
        Command::Ball(a) => ("ball", v(serde_json::to_value(a))),
        Command::Sos(a) => ("sos", v(serde_json::to_value(a))),
        Command::Certify(a) => ("certify", v(serde_json::to_value(a))),
        Command::Verify(a) => ("verify", v(serde_json::to_value(a))),
        Command::AuditHarmonicity(a) => ("audit-harmonicity", v(serde_json::to_value(a))),
        Command::RefuteFigure1(a) => ("refute-figure1", v(serde_json::to_value(a))),
        Command::PhiCheck(a) => ("phi-check", v(serde_json::to_value(a))),
        Command::Witness(a) => ("witness", v(serde_json::to_value(a))),
        Command::Relations(a) => ("relations", v(serde_json::to_value(a))),
    }
}

type CmdResult = Result<(i32, Value), CliError>;

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> CmdResult {
    match cmd {
        Command::Ball(a) => with_model(&a.group.group, BallCmd { args: a, ctx }),
        Command::Sos(a) => with_model(&a.group.group, SosCmd { args: a, ctx }),
        Command::Certify(a) => with_model(&a.group.group, CertifyCmd { args: a, ctx }),
        Command::Verify(a) => verify(a, ctx),
        Command::AuditHarmonicity(a) => audit(a),
        Command::RefuteFigure1(a) => refute_figure1(a),
        Command::PhiCheck(a) => run_phi_check(a, ctx),
        Command::Witness(a) => witness(a),
        Command::Relations(a) => relations(a),
    }
}

fn with_model<V: ModelVisitor<Output = CmdResult>>(descriptor: &str, visitor: V) -> CmdResult {
    let spec = parse_model(descriptor).map_err(|e| CliError::Invalid(e.to_string()))?;
    spec.visit(visitor)
}

struct BallCmd<'a> {
    args: &'a BallArgs,
    ctx: &'a mut Ctx,
}

impl ModelVisitor for BallCmd<'_> {
    type Output = CmdResult;
    fn visit<M: GroupModel>(self, model: &M) -> CmdResult {
        let g = &self.args.group;
        let cache = self.args.cache.as_deref();
        let (ball, hit) = self.ctx.time("enumerate", || enumerate_cached(model, g.radius, g.cap, cache))?;
        let mut sphere = vec![0usize; ball.radius() + 1];
        for &l in ball.lengths() {
            sphere[l] += 1;
        }
        Ok((
            EXIT_OK,
            json!({
                "model": model.descriptor(),
                "generators": model.generators().len(),
                "size": ball.len(),
                "sphere_sizes": sphere,
                "order": model.order(),
                "from_cache": hit,
                "sha256": sha256_hex(&ball_to_bytes(model, &ball)),
            }),
        ))
    }
}

struct SosCmd<'a> {
    args: &'a SosArgs,
    ctx: &'a mut Ctx,
}

impl ModelVisitor for SosCmd<'_> {
    type Output = CmdResult;
    fn visit<M: GroupModel>(self, model: &M) -> CmdResult {
        let a = self.args;
        let opts = a.solver.options()?;
        if !(a.eps_tol > 0.0) {
            return Err(CliError::Invalid("eps-tol must be positive".into()));
        }
        let problem = self.ctx.time("build", || build_sos_problem(model, a.group.radius, a.group.cap))?;
        let search = self.ctx.time("search", || maximize_epsilon(&problem, &opts, a.eps_tol));
        let steps: Vec<Value> = search
            .steps
            .iter()
            .map(|(e, s, it)| json!({ "epsilon": e, "status": s.name(), "iterations": it }))
            .collect();
        let mut certificate = json!({ "status": "none" });
        let mut code = EXIT_NEGATIVE;
        if let (false, Some(gram)) = (a.no_certify, &search.gram) {
            if search.eps_star > 0.0 {
                let meta = SolverMetadata {
                    method: opts.method.name().into(),
                    tol: opts.tol,
                    symmetrized: opts.symmetrize,
                    float_epsilon: search.eps_star,
                    ..Default::default()
                };
                let cert = self.ctx.time("certify", || {
                    round_and_certify(model, &problem, gram, search.eps_star, &a.solver.certify_options(), meta)
                });
                certificate = match cert {
                    Ok(c) => {
                        let v = verify_certificate(&c);
                        if v.valid {
                            code = EXIT_OK;
                        }
                        json!({
                            "status": if v.valid { "verified" } else { "rejected" },
                            "certified_epsilon": fraction(&c.certified_epsilon),
                            "failure": v.failure.map(|f| f.reason()),
                        })
                    }
                    Err(e) => json!({ "status": "none", "reason": e.to_string() }),
                };
            }
        } else if a.no_certify && search.eps_star > 0.0 {
            code = EXIT_OK;
            certificate = json!({ "status": "skipped" });
        }
        Ok((
            code,
            json!({
                "model": model.descriptor(),
                "dimension": problem.dim(),
                "rows": problem.row_count(),
                "eps_star": search.eps_star,
                "upper": search.upper,
                "steps": steps,
                "no_certificate": certificate["status"] != "verified",
                "certificate": certificate,
            }),
        ))
    }
}

struct CertifyCmd<'a> {
    args: &'a CertifyArgs,
    ctx: &'a mut Ctx,
}

impl ModelVisitor for CertifyCmd<'_> {
    type Output = CmdResult;
    fn visit<M: GroupModel>(self, model: &M) -> CmdResult {
        let a = self.args;
        let opts = a.solver.options()?;
        let problem = self.ctx.time("build", || build_sos_problem(model, a.group.radius, a.group.cap))?;
        let (eps, gram, iterations) = match a.epsilon {
            Some(e) if e > 0.0 && e.is_finite() => {
                let r = self.ctx.time("solve", || solve_feasibility(&problem, e, &opts, None));
                if r.status != SolveStatus::Feasible {
                    return Ok((
                        EXIT_NEGATIVE,
                        json!({ "model": model.descriptor(), "epsilon": e, "solver_status": r.status.name(), "certificate": { "status": "none" } }),
                    ));
                }
                (e, r.gram, r.iterations)
            }
            Some(_) => return Err(CliError::Invalid("epsilon must be positive".into())),
            None => {
                let s = self.ctx.time("search", || maximize_epsilon(&problem, &opts, a.eps_tol));
                match s.gram {
                    Some(g) if s.eps_star > 0.0 => (s.eps_star, g, s.steps.iter().map(|t| t.2).sum()),
                    _ => {
                        return Ok((
                            EXIT_NEGATIVE,
                            json!({ "model": model.descriptor(), "eps_star": s.eps_star, "certificate": { "status": "none" } }),
                        ))
                    }
                }
            }
        };
        let meta = SolverMetadata {
            method: opts.method.name().into(),
            tol: opts.tol,
            iterations,
            symmetrized: opts.symmetrize,
            float_epsilon: eps,
            ..Default::default()
        };
        let cert = self.ctx.time("certify", || {
            round_and_certify(model, &problem, &gram, eps, &a.solver.certify_options(), meta)
        });
        let cert = match cert {
            Ok(c) => c,
            Err(SosError::CertificationFailed { certified, residual_l1 }) => {
                return Ok((
                    EXIT_NEGATIVE,
                    json!({
                        "model": model.descriptor(),
                        "epsilon": eps,
                        "certificate": { "status": "none", "certified_epsilon": certified, "residual_l1": residual_l1 },
                    }),
                ))
            }
            Err(e) => return Err(e.into()),
        };
        let verdict = self.ctx.time("verify", || verify_certificate(&cert));
        fs::write(&a.out, cert.to_json())?;
        let code = if verdict.valid { EXIT_OK } else { EXIT_NEGATIVE };
        Ok((
            code,
            json!({
                "model": model.descriptor(),
                "epsilon": fraction(&cert.epsilon),
                "certified_epsilon": fraction(&cert.certified_epsilon),
                "residual_l1": fraction(&cert.residual_l1()),
                "boost": cert.metadata.boost,
                "dimension": cert.dimension,
                "verified": verdict.valid,
                "failure": verdict.failure.map(|f| f.reason()),
                "certificate_file": a.out.display().to_string(),
                "certificate_sha256": sha256_hex(cert.to_json().as_bytes()),
            }),
        ))
    }
}

fn verify(a: &VerifyArgs, ctx: &mut Ctx) -> CmdResult {
    let data = ctx.read(&a.certificate)?;
    let text = String::from_utf8(data).map_err(|_| CliError::Invalid("certificate is not UTF-8".into()))?;
    let cert = GramCertificate::from_json(&text)?;
    let v = ctx.time("verify", || verify_certificate(&cert));
    let code = if v.valid { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((
        code,
        json!({
            "model": cert.model,
            "radius": cert.radius,
            "valid": v.valid,
            "failure": v.failure.map(|f| f.reason()),
            "claimed_epsilon": fraction(&cert.certified_epsilon),
            "recomputed_epsilon": v.recomputed_epsilon.as_ref().map(fraction),
        }),
    ))
}

fn audit(a: &AuditArgs) -> CmdResult {
    let counts = audit_harmonicity_counts(a.n)?;
    let closed = harmonicity_closed_form(a.n);
    let code = if counts == closed { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((
        code,
        json!({
            "n": a.n,
            "four_distinct": counts.0,
            "three_distinct": counts.1,
            "two_distinct": counts.2,
            "closed_form": [closed.0, closed.1, closed.2],
            "matches": counts == closed,
        }),
    ))
}

fn refute_figure1(a: &Figure1Args) -> CmdResult {
    let d34: Rational =
        a.d34.trim().parse().map_err(|_| CliError::Invalid(format!("bad fraction `{}`", a.d34)))?;
    let r = figure1_report(&d34);
    let strings = |row: &[Rational]| row.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let code = if r.psd { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((
        code,
        json!({
            "d34": r.d34.to_string(),
            "points": ["E_ac", "E_bc", "E_ac E_bc", "E_ab"],
            "gram": r.gram.iter().map(|row| strings(row)).collect::<Vec<_>>(),
            "det": r.det.to_string(),
            "psd": r.psd,
            "rank": r.rank,
            "negative_direction": r.direction.as_deref().map(strings),
            "refuted": !r.psd,
        }),
    ))
}

fn run_phi_check(a: &PhiCheckArgs, ctx: &mut Ctx) -> CmdResult {
    let mode = match a.mode {
        ModeArg::Automorphism => CanonMode::Automorphism,
        ModeArg::Syntactic => CanonMode::Syntactic,
    };
    let cfg = InstanceConfig { max_len: a.max_len, count: a.instances, seed: a.seed, mode };
    let check = ctx.time("check", || phi_check(&cfg))?;
    let r = &check.report;
    if let Some(path) = &a.export {
        let certificate = match &check.figure1_result {
            Feasibility::Infeasible { certificate } => certificate.to_json(&check.with_figure1),
            Feasibility::Feasible { .. } => Value::Null,
        };
        let doc = json!({ "system": check.with_figure1.to_json(), "certificate": certificate });
        fs::write(path, serde_json::to_string_pretty(&doc).expect("export serializes"))?;
    }
    let ok = r.length_satisfied
        && r.length_conflicts == 0
        && r.base_feasible
        && r.base_solution_is_length
        && !r.figure1_feasible
        && r.figure1_certificate_verified
        && r.rewrite_violations == 0;
    let code = if ok { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((code, serde_json::to_value(r).expect("report serializes")))
}

fn witness(a: &WitnessArgs) -> CmdResult {
    if a.n > 12 {
        return Err(CliError::Cap(format!("n = {} exceeds 12", a.n)));
    }
    let v = parse_vector_spec(a.n, &a.vector)?;
    let report = CoboundaryForm::new(a.n, v)?.report()?;
    Ok((EXIT_OK, serde_json::to_value(report).expect("report serializes")))
}

fn relations(a: &RelationsArgs) -> CmdResult {
    if a.n < 2 {
        return Err(CliError::Invalid("n must be at least 2".into()));
    }
    if a.n > 10 {
        return Err(CliError::Cap(format!("n = {} exceeds 10", a.n)));
    }
    let mut rows = Vec::new();
    let mut all = true;
    let mut total = 0usize;
    for rel in RelationId::ALL {
        let instances = relation_instances(rel, a.n);
        let mut failures = Vec::new();
        for places in &instances {
            if !check_relation(rel, places, a.n).map_err(|e| CliError::Invalid(e.to_string()))? {
                failures.push(places.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
            }
        }
        all &= failures.is_empty();
        total += instances.len();
        rows.push(json!({
            "relation": rel.tag(),
            "instances": instances.len(),
            "all_hold": failures.is_empty(),
            "failures": failures,
        }));
    }
    let code = if all { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((code, json!({ "n": a.n, "relations": rows, "instances": total, "all_hold": all })))
}
