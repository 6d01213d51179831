//! Command-line front end.
//!
//! All expressions are read over the Gaussian rationals, which contain every
//! rational input unchanged. Exit codes: 0 for a true verdict or a finished
//! task, 1 for a false verdict, 2 for usage, parse, dimension and other input
//! errors, 3 when the requested degree exceeds the available truncation.

mod manifest;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::counterexample::{self, build_shift_sequence, membership_horizon, CurveMatch, Unmatched};
use crate::division::{formal_division, reduce_mod_ideal};
use crate::dynamics::{self, VectorFieldGerm};
use crate::equivalence::{self, EquivalenceChecker, GermFamily, MatchMode, Strategy};
use crate::error::Error;
use crate::expr::{ExprError, Variables};
use crate::ideal::{diagram, jet_ideal, jet_membership, IdealPresentation};
use crate::monomial::{chain_stabilization, monomials_up_to, Stabilization};
use crate::scalar::{Field, GaussianRational};
use crate::series::{FormalMap, FormalSeries};

type G = GaussianRational;
/// Member labels with the component tuples they name.
type LabeledTuples = (Vec<String>, Vec<Vec<FormalSeries<G>>>);

const DEFAULT_TRUNC: u32 = 10;
const DEFAULT_MAX_EXPONENT: u32 = 64;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_LEVELS: u32 = 13;
/// Widest integer window scanned when checking sequence invariants.
const INVARIANT_WINDOW_CAP: i128 = 1 << 16;
/// Most integers a single horizon scan accepts.
const HORIZON_RANGE_CAP: i128 = 1_000_001;

#[derive(Parser, Debug)]
#[command(name = "formal-germs", version, about = "Exact computations with truncated formal power series and germs")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working truncation K: series are known in degrees 0..=K (default 10).
    #[arg(long, global = true)]
    trunc: Option<u32>,
    /// Largest exponent or truncation accepted by the parser (default 64).
    #[arg(long, global = true)]
    max_exponent: Option<u32>,
    /// Variable names in order, e.g. `--vars z,w`; inferred when omitted.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Vec<String>,
    /// Read the command and its flags from a JSON or TOML manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Family,
    Set,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SearchStrategy {
    Indexed,
    Exhaustive,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divide a series by a list of divisors.
    Divide(DivideArgs),
    /// Diagram of initial exponents of an ideal, and its chain over degrees.
    Diagram(IdealArgs),
    /// Basis of the jet space of an ideal.
    Jet(IdealArgs),
    /// Normal form of a series modulo an ideal, with an optional membership verdict.
    Reduce(ReduceArgs),
    /// Verify a finite-order equivalence between two families or sets of ideals.
    CheckEquivalence(EquivalenceArgs),
    /// Verify a finite-order conjugacy between families of self-maps.
    CheckConjugacy(DynamicsArgs),
    /// Verify a finite-order equivalence between families of vector fields.
    CheckFieldEquivalence(DynamicsArgs),
    /// The two sets of plane curves with shifted tangent slopes.
    #[command(subcommand)]
    Counterexample(CounterexampleCommand),
}

#[derive(Args, Debug)]
struct DivideArgs {
    /// The dividend.
    #[arg(short = 'f', long)]
    series: String,
    /// A divisor; repeat for several.
    #[arg(short = 'g', long = "generator", visible_alias = "generators", required = true)]
    generators: Vec<String>,
}

#[derive(Args, Debug)]
struct IdealArgs {
    /// An ideal generator; repeat for several.
    #[arg(short = 'g', long = "generator", visible_alias = "generators")]
    generators: Vec<String>,
    /// Degree bound d (defaults to the truncation).
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(short = 'f', long)]
    series: String,
    #[arg(short = 'g', long = "generator", visible_alias = "generators")]
    generators: Vec<String>,
    /// Also decide membership in I + m^k.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Args, Debug)]
struct EquivalenceArgs {
    /// The map, as a tuple of components.
    #[arg(long)]
    map: String,
    /// A left member `[label:] g1; g2; ...`; repeat for several.
    #[arg(long, required = true)]
    left: Vec<String>,
    /// A right member, same syntax.
    #[arg(long, required = true)]
    right: Vec<String>,
    #[arg(long, value_enum, default_value = "family")]
    mode: Mode,
    /// Check order k.
    #[arg(long, conflicts_with = "horizon", required_unless_present = "horizon")]
    order: Option<u32>,
    /// Scan orders 1..=K.
    #[arg(long)]
    horizon: Option<u32>,
    /// Decide whether the (k-1)-jet of the map sends each right jet space onto the left one.
    #[arg(long, requires = "order", conflicts_with = "horizon")]
    coset: bool,
    #[arg(long, value_enum, default_value = "indexed")]
    strategy: SearchStrategy,
    /// Re-check the verdict after this many random perturbations of the map above the relevant jet.
    #[arg(long, default_value_t = 0)]
    probes: u32,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long)]
    map: String,
    /// A left member `[label:] (f1, ..., fn)`; repeat for several.
    #[arg(long, required = true)]
    left: Vec<String>,
    #[arg(long, required = true)]
    right: Vec<String>,
    #[arg(long)]
    order: u32,
    #[arg(long, default_value_t = 0)]
    probes: u32,
}

#[derive(Subcommand, Debug)]
enum CounterexampleCommand {
    /// The shift sequence c_1..c_M with its derived bounds.
    Sequence {
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
    /// Check the level-k shear on the windows m <= m_max, |n| <= n_max.
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        n_max: i64,
        /// Order to check (default k + 2). Truncation defaults to max(k + 3, order).
        #[arg(long)]
        order: Option<u32>,
        /// Compare the realified curves in four real variables.
        #[arg(long)]
        realify: bool,
        /// Include the full matching tables.
        #[arg(long)]
        details: bool,
    },
    /// Membership horizons of integers, `A..B` or `A..=B`.
    Horizon {
        #[arg(long, allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
    },
}

enum Failure {
    Usage(String),
    Expr(ExprError),
    Algebra(Error),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Algebra(e) | Failure::Expr(ExprError::Algebra(e)) if e.is_precision() => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Expr(ExprError::Algebra(e)) | Failure::Algebra(e) if e.is_precision() => "precision",
            Failure::Expr(ExprError::Algebra(_)) | Failure::Algebra(_) => "input",
            Failure::Expr(_) => "parse",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Expr(e) => e.to_string(),
            Failure::Algebra(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Algebra(e)
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure::Expr(e)
    }
}

/// A finished report: its data, and the verdict if the command decides one.
struct Report {
    body: Map<String, Value>,
    verdict: Option<bool>,
}

struct Session {
    trunc: Option<u32>,
    cap: u32,
    seed: u64,
    vars: Vec<String>,
}

impl Session {
    fn trunc(&self) -> u32 {
        self.trunc.unwrap_or(DEFAULT_TRUNC)
    }

    fn variables<'a>(&self, texts: impl IntoIterator<Item = &'a str>) -> Result<Variables, Failure> {
        if self.vars.is_empty() {
            let owned: Vec<String> = texts.into_iter().map(strip_member_syntax).collect();
            Ok(Variables::infer(owned.iter().map(String::as_str))?)
        } else {
            Ok(Variables::new(self.vars.iter().cloned()))
        }
    }
}

/// Drops the label and `;` separators so the remaining text tokenizes.
fn strip_member_syntax(text: &str) -> String {
    let body = text.split_once(':').map_or(text, |(_, b)| b);
    body.replace(';', " ")
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
    let argv = match expand_manifest(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let format = cli.format.unwrap_or(Format::Text);
    let session = Session {
        trunc: cli.trunc,
        cap: cli.max_exponent.unwrap_or(DEFAULT_MAX_EXPONENT),
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        vars: cli.vars.clone(),
    };
    let name = command_name(&cli.command);
    let result = dispatch(&session, cli.command);
    let (mut body, code) = match result {
        Ok(report) => {
            let code = match report.verdict {
                Some(false) => 1,
                _ => 0,
            };
            (report.body, code)
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            let mut body = Map::new();
            body.insert("error".into(), json!({"kind": f.kind(), "message": f.message()}));
            (body, f.exit_code())
        }
    };
    body.insert("exit_code".into(), json!(code));
    let mut doc = Map::new();
    doc.insert("command".into(), json!(name));
    doc.extend(body);
    let doc = Value::Object(doc);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n",
        Format::Text => render::text(&doc),
    };
    let _ = out.write_all(text.as_bytes());
    code
}

/// Replaces `--manifest FILE` by the command and flags it contains. The
/// manifest's flags come first so that explicit flags override them.
fn expand_manifest(args: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    let program = iter.next().unwrap_or_else(|| "formal-germs".into());
    while let Some(a) = iter.next() {
        if a == "--manifest" {
            path = Some(iter.next().ok_or("--manifest needs a file")?);
        } else if let Some(p) = a.strip_prefix("--manifest=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        let mut argv = vec![program];
        argv.extend(rest);
        return Ok(argv);
    };
    let m = manifest::load(std::path::Path::new(&path))?;
    let given = rest.iter().position(|a| is_command_word(a));
    let mut command = m.command;
    if let Some(pos) = given {
        let explicit: Vec<String> =
            rest[pos..].iter().take_while(|a| is_command_word(a) || is_nested_word(a)).cloned().collect();
        if !command.is_empty() && command != explicit {
            return Err(format!("manifest command {:?} conflicts with {:?}", command.join(" "), explicit.join(" ")));
        }
        rest.drain(pos..pos + explicit.len());
        command = explicit;
    }
    if command.is_empty() {
        return Err("no command given on the command line or in the manifest".into());
    }
    let mut argv = vec![program];
    argv.extend(command);
    argv.extend(m.flags);
    argv.extend(rest);
    Ok(argv)
}

fn is_command_word(a: &str) -> bool {
    matches!(
        a,
        "divide" | "diagram" | "jet" | "reduce" | "check-equivalence" | "check-conjugacy" | "check-field-equivalence" | "counterexample"
    )
}

fn is_nested_word(a: &str) -> bool {
    matches!(a, "sequence" | "verify" | "horizon")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Divide(_) => "divide",
        Command::Diagram(_) => "diagram",
        Command::Jet(_) => "jet",
        Command::Reduce(_) => "reduce",
        Command::CheckEquivalence(_) => "check-equivalence",
        Command::CheckConjugacy(_) => "check-conjugacy",
        Command::CheckFieldEquivalence(_) => "check-field-equivalence",
        Command::Counterexample(CounterexampleCommand::Sequence { .. }) => "counterexample sequence",
        Command::Counterexample(CounterexampleCommand::Verify { .. }) => "counterexample verify",
        Command::Counterexample(CounterexampleCommand::Horizon { .. }) => "counterexample horizon",
    }
}

fn dispatch(s: &Session, command: Command) -> Result<Report, Failure> {
    match command {
        Command::Divide(a) => divide(s, a),
        Command::Diagram(a) => diagram_cmd(s, a),
        Command::Jet(a) => jet_cmd(s, a),
        Command::Reduce(a) => reduce(s, a),
        Command::CheckEquivalence(a) => check_equivalence(s, a),
        Command::CheckConjugacy(a) => check_dynamics(s, a, false),
        Command::CheckFieldEquivalence(a) => check_dynamics(s, a, true),
        Command::Counterexample(c) => counterexample_cmd(s, c),
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn ideal_from(s: &Session, vars: &Variables, gens: &[String]) -> Result<IdealPresentation<G>, Failure> {
    let series = gens
        .iter()
        .map(|g| vars.parse_series::<G>(g, s.trunc(), s.cap))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdealPresentation::new(vars.len(), series)?)
}

fn divide(s: &Session, a: DivideArgs) -> Result<Report, Failure> {
    let vars = s.variables(std::iter::once(a.series.as_str()).chain(a.generators.iter().map(String::as_str)))?;
    let k = s.trunc();
    let f = vars.parse_series::<G>(&a.series, k, s.cap)?;
    let divisors = a.generators.iter().map(|g| vars.parse_series::<G>(g, k, s.cap)).collect::<Result<Vec<_>, _>>()?;
    let res = formal_division(&f, &divisors, k)?;
    let identity = res.residual(&f, &divisors)?.is_zero();
    Ok(Report {
        body: obj(vec![
            ("variables", json!(vars.names())),
            ("truncation", json!(k)),
            ("quotients", json!(res.quotients.iter().map(|q| vars.print_series(q)).collect::<Vec<_>>())),
            ("remainder", json!(vars.print_series(&res.remainder))),
            ("staircase", json!(res.staircase.to_string())),
            ("identity_holds", json!(identity)),
        ]),
        verdict: None,
    })
}

fn diagram_cmd(s: &Session, a: IdealArgs) -> Result<Report, Failure> {
    let vars = s.variables(a.generators.iter().map(String::as_str))?;
    let ideal = ideal_from(s, &vars, &a.generators)?;
    let d = a.degree.unwrap_or(s.trunc());
    let chain = (0..=d).map(|e| diagram(&ideal, e)).collect::<Result<Vec<_>, _>>()?;
    let stab = match chain_stabilization(&chain)? {
        Stabilization::At(i) => json!(i),
        Stabilization::NotWithinPrefix => json!("not within prefix"),
    };
    Ok(Report {
        body: obj(vec![
            ("variables", json!(vars.names())),
            ("degree", json!(d)),
            ("diagram", json!(chain[d as usize].to_string())),
            ("chain", json!(chain.iter().map(ToString::to_string).collect::<Vec<_>>())),
            ("stabilizes_at", stab),
        ]),
        verdict: None,
    })
}

fn jet_cmd(s: &Session, a: IdealArgs) -> Result<Report, Failure> {
    let vars = s.variables(a.generators.iter().map(String::as_str))?;
    let ideal = ideal_from(s, &vars, &a.generators)?;
    let d = a.degree.unwrap_or(s.trunc());
    let jet = jet_ideal(&ideal, d)?;
    let total = monomials_up_to(vars.len(), d).len();
    Ok(Report {
        body: obj(vec![
            ("variables", json!(vars.names())),
            ("degree", json!(d)),
            ("dimension", json!(jet.len())),
            ("codimension", json!(total - jet.len())),
            ("basis", json!(jet.basis().map(|b| vars.print_series(b)).collect::<Vec<_>>())),
        ]),
        verdict: None,
    })
}

fn reduce(s: &Session, a: ReduceArgs) -> Result<Report, Failure> {
    let vars = s.variables(std::iter::once(a.series.as_str()).chain(a.generators.iter().map(String::as_str)))?;
    let k = s.trunc();
    let f = vars.parse_series::<G>(&a.series, k, s.cap)?;
    let ideal = ideal_from(s, &vars, &a.generators)?;
    let nf = reduce_mod_ideal(&f, &ideal, k)?;
    let mut body = obj(vec![
        ("variables", json!(vars.names())),
        ("truncation", json!(k)),
        ("normal_form", json!(vars.print_series(&nf))),
    ]);
    let mut verdict = None;
    if let Some(order) = a.order {
        let member = jet_membership(&f, &ideal, order)?;
        body.insert("order".into(), json!(order));
        body.insert("member".into(), json!(member));
        verdict = Some(member);
    }
    Ok(Report { body, verdict })
}

/// `(label, body)` from `label: body`, labelling by position otherwise.
fn split_member(text: &str, index: usize) -> (String, &str) {
    match text.split_once(':') {
        Some((l, b)) => (l.trim().to_string(), b),
        None => (index.to_string(), text),
    }
}

fn germ_family(s: &Session, vars: &Variables, members: &[String], mode: MatchMode) -> Result<GermFamily<G>, Failure> {
    let parsed = members
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let (label, body) = split_member(text, i);
            let gens: Vec<String> = body.split(';').map(str::trim).filter(|g| !g.is_empty()).map(str::to_string).collect();
            Ok((label, ideal_from(s, vars, &gens)?))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(GermFamily::new(vars.len(), mode, parsed)?)
}

/// `phi` plus random terms of degrees `low..=K`, keeping the linear part when `low >= 2`.
fn perturb(phi: &FormalMap<G>, low: u32, rng: &mut ChaCha8Rng) -> Result<FormalMap<G>, Failure> {
    let n = phi.dim();
    let k = phi.truncation();
    let pool: Vec<_> = monomials_up_to(n, k).into_iter().filter(|m| m.degree() >= low.max(2)).collect();
    let mut comps = phi.components().to_vec();
    if pool.is_empty() {
        return Ok(phi.clone());
    }
    for c in comps.iter_mut() {
        for _ in 0..3 {
            let e = pool[rng.gen_range(0..pool.len())].clone();
            let v = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            *c = c.add(&FormalSeries::monomial(e, G::from_integer(v), k))?;
        }
    }
    Ok(FormalMap::new(comps)?)
}

fn probe_summary(count: u32, seed: u64, consistent: bool) -> Value {
    json!({"count": count, "seed": seed, "consistent": consistent})
}

fn check_equivalence(s: &Session, a: EquivalenceArgs) -> Result<Report, Failure> {
    let texts: Vec<&str> = std::iter::once(a.map.as_str()).chain(a.left.iter().map(String::as_str)).chain(a.right.iter().map(String::as_str)).collect();
    let vars = s.variables(texts)?;
    let k = s.trunc();
    let mode = match a.mode {
        Mode::Family => MatchMode::Family,
        Mode::Set => MatchMode::Set,
    };
    let phi = vars.parse_map::<G>(&a.map, k, s.cap)?;
    let left = germ_family(s, &vars, &a.left, mode)?;
    let right = germ_family(s, &vars, &a.right, mode)?;
    let strategy = match a.strategy {
        SearchStrategy::Indexed => Strategy::Indexed,
        SearchStrategy::Exhaustive => Strategy::Exhaustive,
    };
    let mut body = obj(vec![("variables", json!(vars.names())), ("truncation", json!(k)), ("map", json!(vars.print_map(&phi)))]);
    if let Some(max_order) = a.horizon {
        let h = equivalence::equivalence_horizon(&left, &right, &phi, max_order)?;
        body.insert("horizon".into(), serde_json::to_value(&h).expect("serializable"));
        return Ok(Report { body, verdict: Some(h.first_failure.is_none()) });
    }
    let order = a.order.expect("clap requires --order without --horizon");
    if a.coset {
        // order-k equivalence is decided by the (k-1)-jet
        let jet_degree = order.saturating_sub(1).max(1);
        let lambda = phi.truncate(jet_degree)?;
        let rep = equivalence::jet_coset_membership(&lambda, &left, &right)?;
        body.insert("coset".into(), serde_json::to_value(&rep).expect("serializable"));
        return Ok(Report { body, verdict: Some(rep.holds) });
    }
    let rep = EquivalenceChecker::new(&phi, &left, &right)?.check(order, strategy)?;
    let holds = rep.holds;
    let mut failing_series = Value::Null;
    if let Some(f) = &rep.failure {
        if let (Some(p), equivalence::FailureKind::PullBack { generator }) = (f.partner, &f.kind) {
            let g = &right.member(p).generators()[*generator];
            failing_series = json!(vars.print_series(&phi.pull_back(g)?.truncate(order.saturating_sub(1))?));
        }
        if let (Some(_), equivalence::FailureKind::PushForward { generator }) = (f.partner, &f.kind) {
            let g = &left.member(f.index).generators()[*generator];
            failing_series = json!(vars.print_series(&phi.invert()?.pull_back(g)?.truncate(order.saturating_sub(1))?));
        }
    }
    body.insert("report".into(), serde_json::to_value(&rep).expect("serializable"));
    body.insert("failing_jet".into(), failing_series);
    if a.probes > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let mut consistent = true;
        for _ in 0..a.probes {
            let psi = perturb(&phi, order, &mut rng)?;
            consistent &= EquivalenceChecker::new(&psi, &left, &right)?.check(order, strategy)?.holds == holds;
        }
        body.insert("probes".into(), probe_summary(a.probes, s.seed, consistent));
    }
    Ok(Report { body, verdict: Some(holds) })
}

fn check_dynamics(s: &Session, a: DynamicsArgs, fields: bool) -> Result<Report, Failure> {
    let texts: Vec<&str> = std::iter::once(a.map.as_str()).chain(a.left.iter().map(String::as_str)).chain(a.right.iter().map(String::as_str)).collect();
    let vars = s.variables(texts)?;
    let k = s.trunc();
    let phi = vars.parse_map::<G>(&a.map, k, s.cap)?;
    let parse_side = |members: &[String]| -> Result<LabeledTuples, Failure> {
        let mut labels = Vec::new();
        let mut comps = Vec::new();
        for (i, text) in members.iter().enumerate() {
            let (label, body) = split_member(text, i);
            let c = vars.parse_tuple::<G>(body, k, s.cap)?;
            crate::error::check_dim(vars.len(), c.len())?;
            labels.push(label);
            comps.push(c);
        }
        Ok((labels, comps))
    };
    let (left_labels, left) = parse_side(&a.left)?;
    let (_, right) = parse_side(&a.right)?;
    let check = |phi: &FormalMap<G>| -> Result<dynamics::ContactReport, Failure> {
        if fields {
            let l = left.iter().cloned().map(VectorFieldGerm::new).collect::<Result<Vec<_>, _>>()?;
            let r = right.iter().cloned().map(VectorFieldGerm::new).collect::<Result<Vec<_>, _>>()?;
            Ok(dynamics::is_order_k_field_equivalence(phi, &l, &r, a.order)?)
        } else {
            let l = left.iter().cloned().map(FormalMap::new).collect::<Result<Vec<_>, _>>()?;
            let r = right.iter().cloned().map(FormalMap::new).collect::<Result<Vec<_>, _>>()?;
            Ok(dynamics::is_order_k_conjugacy(phi, &l, &r, a.order)?)
        }
    };
    let rep = check(&phi)?;
    let transported = left
        .iter()
        .map(|c| -> Result<String, Failure> {
            Ok(if fields {
                vars.print_tuple(dynamics::pushforward_field(&VectorFieldGerm::new(c.clone())?, &phi)?.components())
            } else {
                vars.print_map(&dynamics::conjugate(&FormalMap::new(c.clone())?, &phi)?)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut body = obj(vec![
        ("variables", json!(vars.names())),
        ("truncation", json!(k)),
        ("map", json!(vars.print_map(&phi))),
        ("labels", json!(left_labels)),
        ("transported", json!(transported)),
        ("report", serde_json::to_value(&rep).expect("serializable")),
    ]);
    if a.probes > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let mut consistent = true;
        for _ in 0..a.probes {
            let psi = perturb(&phi, a.order, &mut rng)?;
            consistent &= check(&psi)?.holds == rep.holds;
        }
        body.insert("probes".into(), probe_summary(a.probes, s.seed, consistent));
    }
    Ok(Report { body, verdict: Some(rep.holds) })
}

fn curve_match(m: &CurveMatch) -> Value {
    json!({"curve": m.curve.to_string(), "partner": m.partner.to_string()})
}

fn unmatched(u: &Unmatched) -> Value {
    json!({"curve": u.curve.to_string(), "predicted": u.predicted.map(|p| p.to_string()), "confirmed": u.confirmed})
}

fn int(v: i128) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn counterexample_cmd(s: &Session, c: CounterexampleCommand) -> Result<Report, Failure> {
    match c {
        CounterexampleCommand::Sequence { levels } => {
            let seq = build_shift_sequence(levels)?;
            let window = (1i128 << (levels.min(62) + 2)).min(INVARIANT_WINDOW_CAP);
            let violations = seq.invariant_violations(window);
            let table: Vec<Value> = (1..=levels)
                .map(|m| json!({"m": m, "c": int(seq.c(m)), "a": int(seq.a(m)), "b": int(seq.b(m))}))
                .collect();
            Ok(Report {
                body: obj(vec![
                    ("levels", json!(levels)),
                    ("sequence", json!(seq.values().iter().map(|&v| int(v)).collect::<Vec<_>>())),
                    ("table", json!(table)),
                    ("window", int(window)),
                    ("violations", json!(violations)),
                ]),
                verdict: Some(violations.is_empty()),
            })
        }
        CounterexampleCommand::Verify { k, m_max, n_max, order, realify, details } => {
            let order = order.unwrap_or(k + 2);
            let trunc = s.trunc.unwrap_or((k + 3).max(order));
            let rep = counterexample::verify_at_order(k, m_max, n_max.into(), trunc, order, realify)?;
            let mut body = obj(vec![
                ("k", json!(rep.k)),
                ("order", json!(rep.order)),
                ("m_max", json!(rep.m_max)),
                ("n_max", int(rep.n_max)),
                ("truncation", json!(rep.truncation)),
                ("shift", int(rep.shift)),
                ("realified", json!(rep.realified)),
                ("curves_per_side", json!(rep.curves_per_side)),
                ("window_verdict", json!(rep.window_verdict)),
                ("matched_forward", json!(rep.forward.len())),
                ("matched_backward", json!(rep.backward.len())),
                ("boundary", json!(rep.boundary.len())),
                ("genuine", json!(rep.genuine.len())),
                ("first_genuine", rep.genuine.first().map_or(Value::Null, unmatched)),
                ("passes", json!(rep.passes)),
            ]);
            if details {
                body.insert("forward".into(), json!(rep.forward.iter().map(curve_match).collect::<Vec<_>>()));
                body.insert("backward".into(), json!(rep.backward.iter().map(curve_match).collect::<Vec<_>>()));
                body.insert("boundary_curves".into(), json!(rep.boundary.iter().map(unmatched).collect::<Vec<_>>()));
                body.insert("genuine_curves".into(), json!(rep.genuine.iter().map(unmatched).collect::<Vec<_>>()));
            }
            Ok(Report { body, verdict: Some(rep.passes) })
        }
        CounterexampleCommand::Horizon { t_range, levels } => {
            let (lo, hi) = parse_range(&t_range)?;
            let seq = build_shift_sequence(levels)?;
            let entries: Vec<(i128, Option<u32>)> = (lo..=hi).map(|t| (t, membership_horizon(t, &seq))).collect();
            let survivors: Vec<Value> = entries.iter().filter(|(_, h)| h.is_none()).map(|(t, _)| int(*t)).collect();
            let max = entries.iter().filter_map(|(_, h)| *h).max();
            let table: Vec<Value> = entries.iter().map(|(t, h)| json!({"t": int(*t), "horizon": h})).collect();
            let mut body = obj(vec![
                ("levels", json!(levels)),
                ("range", json!([int(lo), int(hi)])),
                ("max_horizon", json!(max)),
                ("survivors", json!(survivors)),
            ]);
            if entries.len() <= 64 {
                body.insert("horizons".into(), json!(table));
            }
            Ok(Report { body, verdict: Some(survivors.is_empty()) })
        }
    }
}

/// `A..B` (exclusive) or `A..=B` (inclusive) as an inclusive pair.
fn parse_range(text: &str) -> Result<(i128, i128), Failure> {
    let bad = || Failure::Usage(format!("invalid range {text:?}; expected A..B or A..=B"));
    let (a, b, inclusive) = match text.split_once("..=") {
        Some((a, b)) => (a, b, true),
        None => {
            let (a, b) = text.split_once("..").ok_or_else(bad)?;
            (a, b, false)
        }
    };
    let lo: i128 = a.trim().parse().map_err(|_| bad())?;
    let mut hi: i128 = b.trim().parse().map_err(|_| bad())?;
    if !inclusive {
        hi -= 1;
    }
    if hi < lo || hi - lo >= HORIZON_RANGE_CAP {
        return Err(Failure::Usage(format!("range {text:?} is empty or wider than {HORIZON_RANGE_CAP}")));
    }
    Ok((lo, hi))
}
