//! Command-line front end: argument parsing, subcommand dispatch, the audit
//! pipeline and report files.
//!
//! Exit codes: 0 when every check passes, 1 when a check ran and failed, 2 on
//! usage, parse or IO errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::finitegroup::{
    closure_report, diamond_conjugation_check, double_coset_count_detailed, enumerate_subgroup, gl_rank,
    hom_group, required_level, verify_product_identity, verify_rep_formula, verify_up_factorization,
    CongSubgroup, DiamondFunction, DiamondQuotient, GlOracle, Guards, SubgroupKind,
};
use crate::galdim::{
    audit_ledger, crystalline_ledger, leopoldt_h1, poitou_tate_consistency, smooth_case_tuple, DimLedger, LieDims,
};
use crate::heckecomb::{coset_count, coset_count_report, coset_representatives, product_identity_check, CosetOracle};
use crate::linalg::{Field, PrimeField, Rationals};
use crate::localalg::poly::{mono_from_exps, Poly};
use crate::localalg::{
    cohomology_degree_map, generation_verdict, graded_regularity_probe, is_part_of_regular_system,
    koszul_ext_dims, parse_generators, LocalSequence,
};
use crate::report::{render_markdown, AuditReport, Report, Verdict};
use crate::rootdata::{
    alpha_star, build_preset, deg_coweight, discriminant, dominant_coweights_in_box, is_dominant,
    is_strictly_dominant, is_strongly_regular, parse_preset, weyl_group, Coweight, RootDatum,
    UnramifiedCharacter, Weight,
};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "DHECKE_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "dhecke", version, about = "Exact checks for Hecke combinatorics, Koszul Ext modules and dimension ledgers")]
struct Cli {
    /// Directory for the JSON, Markdown and timing files (default: $DHECKE_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized sample (default 0, or the config's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a root datum: Weyl group, α*, discriminant, degrees, regularity.
    Rootdata(RootdataArgs),
    /// Double-coset counts p^{deg λ} and representatives.
    Hecke(HeckeArgs),
    /// Koszul Ext dimensions and generation over the bottom degree.
    Ext(ExtArgs),
    /// Audit a dimension ledger.
    Dims(DimsArgs),
    /// Exhaustive checks in GL_n(Z/p^N).
    Finite(FiniteArgs),
    /// Run every module on one configuration.
    Audit(AuditArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct DatumArgs {
    /// Preset name: GL2..GL8, SL2..SL8, Sp4 (also GL_3 style).
    #[arg(long)]
    preset: Option<String>,
    /// Root datum JSON, as a file path or inline.
    #[arg(long, conflicts_with = "preset")]
    datum: Option<String>,
}

#[derive(Args, Debug)]
struct RootdataArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Coweight to classify, e.g. `1,0`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Vec<String>,
    /// Integer values of an unramified character on the basis cocharacters.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
}

#[derive(Args, Debug)]
struct HeckeArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Dominant coweight, e.g. `2,0`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Residue characteristic.
    #[arg(long, visible_alias = "p")]
    prime: u64,
    /// Include the representative tuples in the report.
    #[arg(long)]
    emit_reps: bool,
    /// Cross-check against exhaustive enumeration in GL_n(Z/p^N).
    #[arg(long)]
    oracle: bool,
    /// Second coweight for the product identity.
    #[arg(long, allow_hyphen_values = true)]
    product_with: Option<String>,
}

#[derive(Args, Debug)]
struct ExtArgs {
    /// Number of variables r.
    #[arg(long)]
    vars: usize,
    /// `Q` or `Fp:<p>`.
    #[arg(long, default_value = "Q")]
    field: String,
    /// JSON list of generators, as a file path or inline.
    #[arg(long)]
    gens: String,
    /// Also map Ext degrees to cohomological degrees q0..q0+l0.
    #[arg(long)]
    l0: Option<usize>,
    /// Bottom cohomological degree for `--l0` (default 0).
    #[arg(long, allow_hyphen_values = true)]
    q0: Option<i64>,
    /// Also run the bounded regularity probe up to this degree.
    #[arg(long)]
    probe: Option<u32>,
}

#[derive(Args, Debug)]
struct DimsArgs {
    /// Ledger JSON, as a file path or inline.
    #[arg(long)]
    ledger: Option<String>,
    #[command(flatten)]
    datum: DatumArgs,
    /// Without a ledger: audit the crystalline ledger of the datum at this l0.
    #[arg(long)]
    l0: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FiniteCheck {
    Cosets,
    Reps,
    Upfact,
    Diamond,
    Homs,
    Product,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    Standard,
    Iwahori,
}

#[derive(Args, Debug)]
struct FiniteArgs {
    /// Matrix size, at most 3.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Residue characteristic.
    #[arg(long)]
    p: u64,
    /// Level N; defaults to the smallest level the check needs.
    #[arg(long = "N")]
    level: Option<u32>,
    /// Congruence depth b of I(b,c); for `diamond` and `homs`, the level of T_b.
    #[arg(long, default_value_t = 1)]
    b: u32,
    /// Congruence depth c of I(b,c).
    #[arg(long, default_value_t = 1)]
    c: u32,
    /// Dominant coweight; defaults to (1,0,..,0).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Identity to check.
    #[arg(long, value_enum)]
    check: FiniteCheck,
    /// `standard` for I(b,c), `iwahori` for the full Iwahori (Borel mod p).
    #[arg(long, value_enum, default_value = "standard")]
    kind: KindArg,
    /// Target Z/p^m of the diamond characters.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Second coweight for `--check product`.
    #[arg(long, allow_hyphen_values = true)]
    lambda2: Option<String>,
    /// For `--check diamond`: test the planted non-torus function instead.
    #[arg(long)]
    planted: bool,
    /// Size guard on enumerated group orders.
    #[arg(long)]
    max_order: Option<u64>,
    /// Size guard on enumerated orbits.
    #[arg(long)]
    max_orbit: Option<usize>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Config JSON, as a file path or inline; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    #[command(flatten)]
    datum: DatumArgs,
    /// Prime(s) to use; repeatable.
    #[arg(long = "p", visible_alias = "prime")]
    primes: Vec<u64>,
    /// Defect l0 for the sequences and ledger (default 0).
    #[arg(long)]
    l0: Option<u64>,
}

/// One sequence of polynomials in a config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceConfig {
    pub vars: usize,
    #[serde(default = "default_field")]
    pub field: String,
    pub gens: Value,
}

fn default_field() -> String {
    "Q".into()
}

/// Audit configuration; see `schema/config.schema.json`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub preset: Option<String>,
    pub datum: Option<Value>,
    pub primes: Option<Vec<u64>>,
    pub l0: Option<u64>,
    pub q0: Option<i64>,
    #[serde(default)]
    pub sequences: Vec<SequenceConfig>,
    pub random_sequences: Option<usize>,
    pub ledger: Option<Value>,
    pub guards: Option<Guards>,
    /// Largest `deg λ` enumerated by the Hecke and finite-group stages.
    pub max_degree: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

impl Config {
    pub fn from_json(text: &str) -> crate::error::Result<Self> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        if config.preset.is_some() && config.datum.is_some() {
            return Err(Error::Parse("config: give either preset or datum, not both".into()));
        }
        Ok(config)
    }
}

/// Parse the command line and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let (name, title, report, config_out) = match &cli.command {
        Command::Rootdata(a) => ("rootdata", "Root datum", cmd_rootdata(a)?, None),
        Command::Hecke(a) => ("hecke", "Hecke cosets", cmd_hecke(a)?, None),
        Command::Ext(a) => ("ext", "Ext computation", cmd_ext(a)?, None),
        Command::Dims(a) => ("dims", "Dimension audit", cmd_dims(a)?, None),
        Command::Finite(a) => ("finite", "Finite-level checks", cmd_finite(a, cli.seed.unwrap_or(0))?, None),
        Command::Audit(a) => {
            let (report, out) = cmd_audit(a, cli.seed)?;
            ("audit", "Audit", report, out)
        }
    };
    print!("{}", report.canonical_json());
    let out = cli
        .out
        .clone()
        .or(config_out)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from));
    if let Some(dir) = out {
        emit_report(&report, &dir.join(format!("{name}.json")), title)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write the canonical JSON to `path`, the Markdown rendering next to it and
/// the timings to a `.timings.json` sidecar.
pub fn emit_report(report: &AuditReport, path: &Path, title: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    std::fs::write(path, report.canonical_json()).map_err(io_err(path))?;
    let md = path.with_extension("md");
    std::fs::write(&md, render_markdown(title, &report.to_json())).map_err(io_err(&md))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let timings = path.with_file_name(format!("{stem}.timings.json"));
    std::fs::write(&timings, report.timings_json()).map_err(io_err(&timings))?;
    Ok(())
}

/// A file path if one exists, otherwise inline JSON.
fn read_json_arg(arg: &str) -> CliResult<Value> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(io_err(path))?
    } else {
        let t = arg.trim_start();
        if !(t.starts_with('[') || t.starts_with('{')) {
            return Err(CliError::Usage(format!("`{arg}` is neither a file nor inline JSON")));
        }
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| CliError::Lib(Error::Parse(format!("{arg}: {e}"))))
}

/// Integers separated by commas or spaces, optionally bracketed.
pub fn parse_int_list(s: &str) -> crate::error::Result<Vec<i64>> {
    let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("`{t}` in `{s}` is not an integer")))
        })
        .collect()
}

fn parse_coweight(s: &str) -> crate::error::Result<Coweight> {
    parse_int_list(s).map(Coweight)
}

fn load_datum(args: &DatumArgs) -> CliResult<RootDatum> {
    match (&args.preset, &args.datum) {
        (Some(name), _) => {
            let (kind, n) = parse_preset(name)?;
            Ok(build_preset(kind, n)?)
        }
        (None, Some(src)) => {
            let v = read_json_arg(src)?;
            Ok(RootDatum::from_json(&v.to_string())?)
        }
        (None, None) => Err(CliError::Usage("need --preset or --datum".into())),
    }
}

fn datum_label(d: &RootDatum) -> String {
    d.name().map(str::to_string).unwrap_or_else(|| "custom".into())
}

enum FieldChoice {
    Q,
    Fp(PrimeField),
}

fn parse_field(s: &str) -> crate::error::Result<FieldChoice> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Q);
    }
    let digits = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix("fp:"))
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| Error::Parse(format!("field `{s}`: expected Q or Fp:<p>")))?;
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("field `{s}`: bad characteristic")))?;
    Ok(FieldChoice::Fp(PrimeField::new(p)?))
}

/// Collects checks with their inputs and timings.
struct Recorder {
    entries: Vec<(Value, Report, f64)>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { entries: Vec::new() }
    }

    fn run(&mut self, inputs: Value, f: impl FnOnce() -> crate::error::Result<Report>) -> crate::error::Result<()> {
        let start = Instant::now();
        let report = f()?;
        self.entries.push((inputs, report, start.elapsed().as_secs_f64()));
        Ok(())
    }

    /// Like [`Recorder::run`], but a size-guard error becomes a skipped check.
    fn run_guarded(&mut self, name: &str, inputs: Value, f: impl FnOnce() -> crate::error::Result<Report>) -> crate::error::Result<()> {
        let start = Instant::now();
        let report = match f() {
            Err(Error::SizeGuard(msg)) => {
                let mut r = Report::pass(name).note(format!("skipped: {msg}"));
                r.verdict = Verdict::Skipped;
                r
            }
            other => other?,
        };
        self.entries.push((inputs, report, start.elapsed().as_secs_f64()));
        Ok(())
    }

    fn into_audit(self) -> AuditReport {
        let mut audit = AuditReport::new();
        for (inputs, report, t) in self.entries {
            audit.push(&inputs, report, t);
        }
        audit
    }
}

fn datum_summary(d: &RootDatum) -> crate::error::Result<Report> {
    let w = weyl_group(d)?;
    let stars: Vec<Value> = d
        .positive_roots()
        .iter()
        .map(|&i| {
            let a = alpha_star(d, &Weight(d.roots()[i].clone()))?;
            Ok(json!({ "root": d.roots()[i], "m": a.m, "alpha_star": a.coweight }))
        })
        .collect::<crate::error::Result<_>>()?;
    Ok(Report::pass("root_datum")
        .detail("name", datum_label(d))
        .detail("datum", d.to_json_value())
        .detail("rank", d.rank())
        .detail("torus_rank", d.torus_rank())
        .detail("roots", d.roots().len())
        .detail("positive_roots", d.positive_roots().len())
        .detail("weyl_order", w.len())
        .detail("dim_unipotent", d.dim_unipotent())
        .detail("two_rho_check", d.two_rho_check())
        .detail("alpha_star", stars))
}

fn discriminant_check(d: &RootDatum) -> crate::error::Result<Report> {
    let disc = discriminant(d);
    let w = weyl_group(d)?;
    let moved = w.iter().find(|x| disc.act(x) != disc);
    let r = Report::pass("discriminant_invariance")
        .detail("terms", disc.terms().len())
        .detail("weyl_order", w.len());
    Ok(match moved {
        Some(x) => r.fail(json!({ "weyl_word": x.word })),
        None => r,
    })
}

fn coweight_report(d: &RootDatum, lambda: &Coweight) -> crate::error::Result<Report> {
    let dominant = is_dominant(d, lambda)?;
    let mut r = Report::pass("coweight")
        .detail("lambda", lambda)
        .detail("dominant", dominant)
        .detail("strictly_dominant", is_strictly_dominant(d, lambda)?);
    if dominant {
        r = r.detail("degree", deg_coweight(d, lambda)?);
    }
    Ok(r)
}

fn regularity_report(d: &RootDatum, values: &[i64]) -> crate::error::Result<Report> {
    let chi = UnramifiedCharacter::from_integers(values)?;
    let s = is_strongly_regular(&chi, d)?;
    let r = Report::with_verdict("strong_regularity", s.agree)
        .detail("chi", values)
        .detail("strongly_regular", s.reflection_test && s.stabilizer_test)
        .detail("reflection_test", s.reflection_test)
        .detail("stabilizer_test", s.stabilizer_test)
        .detail("fixed_roots", &s.fixed_roots)
        .detail("stabilizer_words", &s.stabilizer_words);
    Ok(if s.agree { r } else { r.fail(json!({ "fixed_roots": s.fixed_roots, "stabilizer_words": s.stabilizer_words })) })
}

fn cmd_rootdata(a: &RootdataArgs) -> CliResult<AuditReport> {
    let d = load_datum(&a.datum)?;
    let label = datum_label(&d);
    let mut rec = Recorder::new();
    rec.run(json!({ "check": "root_datum", "datum": d.to_json_value() }), || datum_summary(&d))?;
    rec.run(json!({ "check": "discriminant", "datum": label }), || discriminant_check(&d))?;
    for s in &a.lambda {
        let lambda = parse_coweight(s)?;
        rec.run(json!({ "check": "coweight", "datum": label, "lambda": lambda }), || {
            coweight_report(&d, &lambda)
        })?;
    }
    if let Some(s) = &a.chi {
        let values = parse_int_list(s)?;
        rec.run(json!({ "check": "strong_regularity", "datum": label, "chi": values }), || {
            regularity_report(&d, &values)
        })?;
    }
    Ok(rec.into_audit())
}

fn cmd_hecke(a: &HeckeArgs) -> CliResult<AuditReport> {
    let d = load_datum(&a.datum)?;
    let label = datum_label(&d);
    let lambda = parse_coweight(&a.lambda)?;
    let oracle = GlOracle::default();
    let oracle_ref: Option<&dyn CosetOracle> = if a.oracle { Some(&oracle) } else { None };
    let mut rec = Recorder::new();
    let inputs = json!({ "check": "coset_count", "datum": label, "lambda": lambda, "prime": a.prime, "oracle": a.oracle });
    rec.run(inputs, || {
        let mut r = coset_count_report(&d, &lambda, a.prime, oracle_ref)?.to_report();
        if a.emit_reps {
            let reps = coset_representatives(&d, &lambda, a.prime)?;
            r = r.detail("slots", &reps.slots).detail("representatives", &reps.reps);
        }
        Ok(r)
    })?;
    if let Some(s) = &a.product_with {
        let mu = parse_coweight(s)?;
        let inputs = json!({ "check": "product_identity", "datum": label, "lambda": lambda, "mu": mu, "prime": a.prime, "oracle": a.oracle });
        rec.run(inputs, || product_identity_check(&d, &lambda, &mu, a.prime, oracle_ref))?;
    }
    Ok(rec.into_audit())
}

/// Which Ext checks to run on one sequence.
#[derive(Clone, Copy)]
struct ExtOptions {
    l0: Option<usize>,
    q0: Option<i64>,
    probe: Option<u32>,
    /// Fail unless the Ext algebra is generated over the bottom degree;
    /// otherwise only require the verdict to match the linear-part criterion.
    require_generation: bool,
}

fn ext_checks<F: Field>(rec: &mut Recorder, seq: &LocalSequence<F>, opts: ExtOptions) -> crate::error::Result<()> {
    let ExtOptions {
        l0,
        q0,
        probe,
        require_generation,
    } = opts;
    let inputs = |check: &str| {
        json!({ "check": check, "field": seq.field().name(), "vars": seq.num_vars(), "gens": seq.formatted() })
    };
    rec.run(inputs("koszul_ext_dims"), || {
        let dims = koszul_ext_dims(seq)?;
        let n = seq.len();
        let expected: Vec<usize> = (0..=n).map(|i| crate::arith::binomial(n, i)).collect();
        let r = Report::with_verdict("koszul_ext_dims", dims == expected)
            .detail("dims", &dims)
            .detail("expected", &expected);
        Ok(if dims == expected { r } else { r.fail(json!({ "dims": dims })) })
    })?;
    let name = if require_generation { "generation_verdict" } else { "generation_criterion" };
    rec.run(inputs(name), || {
        let ext = generation_verdict(seq)?;
        let regular_system = is_part_of_regular_system(seq)?;
        let agree = regular_system == ext.generated_over_bottom;
        let ok = agree && (ext.generated_over_bottom || !require_generation);
        let mut r = Report::with_verdict(name, ok);
        if let Value::Object(map) = ext.to_json() {
            for (k, v) in map {
                r = r.detail(&k, v);
            }
        }
        r = r
            .detail("part_of_regular_system", regular_system)
            .detail("criterion_agrees", agree)
            .detail(
                "verdict_text",
                if ext.generated_over_bottom {
                    "generated over bottom degree"
                } else {
                    "not generated over bottom degree"
                },
            );
        Ok(if ok {
            r
        } else {
            r.fail(json!({
                "failing_degree": ext.failing_degree,
                "action_ranks": ext.action_ranks,
                "part_of_regular_system": regular_system,
            }))
        })
    })?;
    if let Some(l0) = l0 {
        let mut inp = inputs("cohomology_degree_map");
        inp["l0"] = json!(l0);
        inp["q0"] = json!(q0);
        rec.run(inp, || {
            let dims = koszul_ext_dims(seq)?;
            let t = cohomology_degree_map(l0, q0.unwrap_or(0), &dims)?;
            let r = Report::with_verdict("cohomology_degree_map", t.binomial_pattern)
                .detail("table", &t.entries)
                .detail("multiplicity", t.multiplicity)
                .detail("flags", &t.flags);
            Ok(if t.binomial_pattern { r } else { r.fail(json!({ "dims": dims })) })
        })?;
    }
    if let Some(bound) = probe {
        rec.run(inputs("graded_regularity_probe"), || graded_regularity_probe(seq, bound))?;
    }
    Ok(())
}

fn build_sequence_and_check(
    rec: &mut Recorder,
    field: &str,
    vars: usize,
    gens: &Value,
    opts: ExtOptions,
) -> crate::error::Result<()> {
    let polys = parse_generators(gens, vars)?;
    match parse_field(field)? {
        FieldChoice::Q => {
            let seq = LocalSequence::from_rational(Rationals, vars, &polys)?;
            ext_checks(rec, &seq, opts)
        }
        FieldChoice::Fp(f) => {
            let seq = LocalSequence::from_rational(f, vars, &polys)?;
            ext_checks(rec, &seq, opts)
        }
    }
}

fn cmd_ext(a: &ExtArgs) -> CliResult<AuditReport> {
    let gens = read_json_arg(&a.gens)?;
    let mut rec = Recorder::new();
    let opts = ExtOptions {
        l0: a.l0,
        q0: a.q0,
        probe: a.probe,
        require_generation: true,
    };
    build_sequence_and_check(&mut rec, &a.field, a.vars, &gens, opts)?;
    Ok(rec.into_audit())
}

fn ledger_checks(rec: &mut Recorder, ledger: &DimLedger, datum: Option<&RootDatum>) -> crate::error::Result<()> {
    let start = Instant::now();
    let reports = audit_ledger(ledger, datum)?;
    let share = start.elapsed().as_secs_f64() / reports.len().max(1) as f64;
    let base = serde_json::to_value(ledger).expect("serializable");
    for r in reports {
        let inputs = json!({ "check": r.name, "ledger": base, "datum": datum.map(datum_label) });
        rec.entries.push((inputs, r, share));
    }
    Ok(())
}

fn cmd_dims(a: &DimsArgs) -> CliResult<AuditReport> {
    let datum = if a.datum.preset.is_some() || a.datum.datum.is_some() {
        Some(load_datum(&a.datum)?)
    } else {
        None
    };
    let ledger = match (&a.ledger, &datum, a.l0) {
        (Some(src), _, l0) => {
            let v = read_json_arg(src)?;
            let mut ledger = DimLedger::from_json(&v.to_string())?;
            if l0.is_some() {
                ledger.l0 = l0;
            }
            ledger
        }
        (None, Some(d), Some(l0)) => crystalline_ledger(d, l0)?,
        _ => return Err(CliError::Usage("need --ledger, or --preset/--datum with --l0".into())),
    };
    let mut rec = Recorder::new();
    ledger_checks(&mut rec, &ledger, datum.as_ref())?;
    if rec.entries.is_empty() {
        return Err(CliError::Usage("the ledger has no entries that determine an identity".into()));
    }
    Ok(rec.into_audit())
}

fn default_lambda(n: usize) -> Coweight {
    let mut v = vec![0; n];
    v[0] = 1;
    Coweight(v)
}

fn cmd_finite(a: &FiniteArgs, seed: u64) -> CliResult<AuditReport> {
    let mut guards = Guards::default();
    if let Some(m) = a.max_order {
        guards.max_order = m;
    }
    if let Some(m) = a.max_orbit {
        guards.max_orbit = m;
    }
    if a.n > guards.max_n {
        return Err(Error::SizeGuard(format!("n = {} exceeds {}", a.n, guards.max_n)).into());
    }
    let kind = match a.kind {
        KindArg::Standard => SubgroupKind::Standard,
        KindArg::Iwahori => SubgroupKind::Iwahori,
    };
    let lambda = match &a.lambda {
        Some(s) => parse_coweight(s)?,
        None => default_lambda(a.n),
    };
    let base = || CongSubgroup::with_kind(a.n, a.p, a.b, a.c, a.level.unwrap_or(a.c).max(a.c), kind);
    let inputs = |check: &str| {
        json!({ "check": check, "n": a.n, "p": a.p, "N": a.level, "b": a.b, "c": a.c, "kind": kind, "lambda": lambda, "m": a.m, "seed": seed })
    };
    let auto_level = |g: &CongSubgroup| -> crate::error::Result<CongSubgroup> {
        match a.level {
            Some(level) => g.at_level(level),
            None => g.at_level(required_level(g, &lambda)?),
        }
    };
    let mut rec = Recorder::new();
    match a.check {
        FiniteCheck::Cosets => {
            let group = auto_level(&base()?)?;
            rec.run(inputs("double_coset_count"), || {
                let datum = build_preset(crate::rootdata::PresetKind::GL, a.n)?;
                let predicted = coset_count(&datum, &lambda, a.p)?;
                let got = double_coset_count_detailed(&group, &lambda, &guards)?;
                let ok = predicted == got.count.into();
                let r = Report::with_verdict("double_coset_count", ok)
                    .detail("group", group.label())
                    .detail("lambda", &lambda)
                    .detail("count", got.count)
                    .detail("predicted", predicted.to_string())
                    .detail("group_order", got.group_order)
                    .detail("stabilizer_order", got.stabilizer_order)
                    .detail("level", got.level);
                Ok(if ok { r } else { r.fail(json!({ "count": got.count })) })
            })?;
            rec.run(inputs("subgroup_closure"), || {
                let elements = enumerate_subgroup(&group, &guards)?;
                closure_report(&group, &elements, seed, 1000)
            })?;
        }
        FiniteCheck::Reps => {
            let group = auto_level(&base()?)?;
            rec.run(inputs("verify_rep_formula"), || verify_rep_formula(&group, &lambda, &guards))?;
        }
        FiniteCheck::Upfact => {
            rec.run(inputs("verify_up_factorization"), || verify_up_factorization(&base()?, &lambda, &guards))?;
        }
        FiniteCheck::Product => {
            let mu = match &a.lambda2 {
                Some(s) => parse_coweight(s)?,
                None => return Err(CliError::Usage("--check product needs --lambda2".into())),
            };
            rec.run(inputs("product_identity_sets"), || verify_product_identity(&base()?, &lambda, &mu, &guards))?;
        }
        FiniteCheck::Homs => {
            rec.run(inputs("hom_group"), || hom_report(a.n, a.p, a.b, a.m, &guards))?;
        }
        FiniteCheck::Diamond => {
            if a.b > a.c {
                return Err(CliError::Usage("diamond characters need b ≤ c".into()));
            }
            let group = CongSubgroup::new(a.n, a.p, 1, a.c, a.level.unwrap_or(a.c).max(a.c))?;
            if a.planted {
                rec.run(inputs("diamond_conjugation_check"), || {
                    diamond_conjugation_check(&group, &lambda, &DiamondFunction::UnipotentCoordinate, &guards)
                })?;
            } else {
                let q = DiamondQuotient::new(a.n, a.p, a.b, &guards)?;
                for h in hom_group(&q, a.m, &guards)?.homs {
                    let mut inp = inputs("diamond_conjugation_check");
                    inp["character"] = json!(h.values);
                    rec.run(inp, || {
                        diamond_conjugation_check(&group, &lambda, &DiamondFunction::Torus(h.clone()), &guards)
                    })?;
                }
            }
        }
    }
    Ok(rec.into_audit())
}

fn hom_report(n: usize, p: u64, b: u32, m: u32, guards: &Guards) -> crate::error::Result<Report> {
    let q = DiamondQuotient::new(n, p, b, guards)?;
    let hg = hom_group(&q, m, guards)?;
    let els = q.elements();
    let mut r = Report::pass("hom_group")
        .detail("n", n)
        .detail("prime", p)
        .detail("b", b)
        .detail("m", m)
        .detail("quotient_order", q.order())
        .detail("invariant_factors", q.invariant_factors())
        .detail("hom_factors", &hg.factors)
        .detail("count", hg.order)
        .detail("generators", q.generators())
        .detail("homs", hg.homs.iter().map(|h| &h.values).collect::<Vec<_>>());
    if (els.len() as u128).pow(2) * hg.homs.len() as u128 <= 10_000_000 {
        for h in &hg.homs {
            for x in &els {
                for y in &els {
                    let lhs = h.eval(&q.mul(x, y))?;
                    let rhs = (h.eval(x)? + h.eval(y)?) % h.modulus;
                    if lhs != rhs {
                        return Ok(r.fail(json!({ "hom": h.values, "x": x, "y": y })));
                    }
                }
            }
        }
        r = r.detail("homomorphism_property", "checked exhaustively");
    }
    Ok(r)
}

struct AuditPlan {
    datum: RootDatum,
    primes: Vec<u64>,
    l0: u64,
    q0: i64,
    sequences: Vec<SequenceConfig>,
    random_sequences: usize,
    ledger: Option<DimLedger>,
    guards: Guards,
    max_degree: u64,
    seed: u64,
}

fn cmd_audit(a: &AuditArgs, seed_flag: Option<u64>) -> CliResult<(AuditReport, Option<PathBuf>)> {
    let config = match &a.config {
        Some(src) => Config::from_json(&read_json_arg(src)?.to_string())?,
        None => Config::default(),
    };
    let datum = if a.datum.preset.is_some() || a.datum.datum.is_some() {
        load_datum(&a.datum)?
    } else if let Some(p) = &config.preset {
        load_datum(&DatumArgs {
            preset: Some(p.clone()),
            datum: None,
        })?
    } else if let Some(v) = &config.datum {
        RootDatum::from_json(&v.to_string())?
    } else {
        return Err(CliError::Usage("audit needs a preset or datum".into()));
    };
    let primes = if !a.primes.is_empty() {
        a.primes.clone()
    } else {
        config.primes.clone().unwrap_or_else(|| vec![3])
    };
    let ledger = config
        .ledger
        .as_ref()
        .map(|v| DimLedger::from_json(&v.to_string()))
        .transpose()?;
    let plan = AuditPlan {
        primes,
        l0: a.l0.or(config.l0).unwrap_or(0),
        q0: config.q0.unwrap_or(0),
        sequences: config.sequences.clone(),
        random_sequences: config.random_sequences.unwrap_or(4),
        ledger,
        guards: config.guards.unwrap_or_default(),
        max_degree: config.max_degree.unwrap_or(2),
        seed: seed_flag.or(config.seed).unwrap_or(0),
        datum,
    };
    let out = config.out.map(PathBuf::from);
    Ok((run_audit(&plan)?, out))
}

type Stage = fn(&AuditPlan) -> crate::error::Result<Recorder>;

/// Stages run on separate threads; their checks are concatenated in stage
/// order, so the report does not depend on scheduling.
fn run_audit(plan: &AuditPlan) -> crate::error::Result<AuditReport> {
    let stages: [Stage; 5] = [stage_rootdata, stage_hecke, stage_finite, stage_localalg, stage_galdim];
    let results: Vec<crate::error::Result<Recorder>> = std::thread::scope(|s| {
        let handles: Vec<_> = stages.iter().map(|st| s.spawn(move || st(plan))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("audit stage panicked".into()))))
            .collect()
    });
    let mut all = Recorder::new();
    for r in results {
        all.entries.extend(r?.entries);
    }
    Ok(all.into_audit())
}

fn stage_rng(plan: &AuditPlan, stage: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(plan.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stage))
}

fn stage_rootdata(plan: &AuditPlan) -> crate::error::Result<Recorder> {
    let d = &plan.datum;
    let label = datum_label(d);
    let mut rec = Recorder::new();
    rec.run(json!({ "check": "root_datum", "datum": d.to_json_value() }), || datum_summary(d))?;
    rec.run(json!({ "check": "discriminant", "datum": label }), || discriminant_check(d))?;
    let mut rng = stage_rng(plan, 1);
    for _ in 0..3 {
        let values: Vec<i64> = (0..d.rank()).map(|_| rng.gen_range(1..=4)).collect();
        rec.run(json!({ "check": "strong_regularity", "datum": label, "chi": values }), || {
            regularity_report(d, &values)
        })?;
    }
    Ok(rec)
}

/// Dominant coweights with entries in `[-1, 1]` (last entry 0 for `GL_n`)
/// and degree at most `max_degree`.
fn small_coweights(plan: &AuditPlan) -> crate::error::Result<Vec<Coweight>> {
    let d = &plan.datum;
    let gl = gl_rank(d).is_ok();
    let mut out = Vec::new();
    for c in dominant_coweights_in_box(d, 1) {
        if gl && c.0.last() != Some(&0) {
            continue;
        }
        if deg_coweight(d, &c)? <= plan.max_degree {
            out.push(c);
        }
    }
    Ok(out)
}

fn oracle_for(plan: &AuditPlan) -> Option<GlOracle> {
    gl_rank(&plan.datum).ok().filter(|&n| n <= plan.guards.max_n).map(|_| GlOracle {
        guards: plan.guards,
        ..GlOracle::default()
    })
}

fn stage_hecke(plan: &AuditPlan) -> crate::error::Result<Recorder> {
    let d = &plan.datum;
    let label = datum_label(d);
    let oracle = oracle_for(plan);
    let oracle_ref: Option<&dyn CosetOracle> = oracle.as_ref().map(|o| o as &dyn CosetOracle);
    let lambdas = small_coweights(plan)?;
    let mut rec = Recorder::new();
    for &p in &plan.primes {
        for l in &lambdas {
            let inputs = json!({ "check": "coset_count", "datum": label, "lambda": l, "prime": p });
            rec.run_guarded("coset_count", inputs, || Ok(coset_count_report(d, l, p, oracle_ref)?.to_report()))?;
        }
        for (i, a) in lambdas.iter().enumerate() {
            for b in &lambdas[i..] {
                if deg_coweight(d, a)? + deg_coweight(d, b)? > plan.max_degree {
                    continue;
                }
                let inputs = json!({ "check": "product_identity", "datum": label, "lambda": a, "mu": b, "prime": p });
                rec.run_guarded("product_identity", inputs, || product_identity_check(d, a, b, p, oracle_ref))?;
            }
        }
    }
    Ok(rec)
}

fn stage_finite(plan: &AuditPlan) -> crate::error::Result<Recorder> {
    let mut rec = Recorder::new();
    let Some(n) = gl_rank(&plan.datum).ok().filter(|&n| n <= plan.guards.max_n) else {
        let mut r = Report::pass("finite_model").note("no matrix model for this datum; finite-level checks skipped");
        r.verdict = Verdict::Skipped;
        rec.entries.push((json!({ "check": "finite_model", "datum": datum_label(&plan.datum) }), r, 0.0));
        return Ok(rec);
    };
    let g = plan.guards;
    let lambdas = small_coweights(plan)?;
    for &p in &plan.primes {
        let base = CongSubgroup::new(n, p, 1, 1, 1)?;
        let inputs = json!({ "check": "subgroup_closure", "n": n, "p": p, "seed": plan.seed });
        rec.run_guarded("subgroup_closure", inputs, || {
            let group = base.at_level(2)?;
            let els = enumerate_subgroup(&group, &g)?;
            closure_report(&group, &els, plan.seed, 1000)
        })?;
        for l in &lambdas {
            let inputs = json!({ "check": "verify_rep_formula", "n": n, "p": p, "lambda": l });
            rec.run_guarded("verify_rep_formula", inputs, || {
                let group = base.at_level(required_level(&base, l)?)?;
                verify_rep_formula(&group, l, &g)
            })?;
        }
        let rho = Coweight((0..n).rev().map(|i| i as i64).collect());
        let inputs = json!({ "check": "verify_up_factorization", "n": n, "p": p, "b": 1, "c": 2, "lambda": rho });
        rec.run_guarded("verify_up_factorization", inputs, || {
            verify_up_factorization(&CongSubgroup::new(n, p, 1, 2, 2)?, &rho, &g)
        })?;
        let lam = default_lambda(n);
        let inputs = json!({ "check": "diamond_conjugation", "n": n, "p": p, "b": 2, "c": 2, "m": 1, "lambda": lam });
        rec.run_guarded("diamond_conjugation", inputs, || {
            let group = CongSubgroup::new(n, p, 1, 2, 2)?;
            let q = DiamondQuotient::new(n, p, 2, &g)?;
            let homs = hom_group(&q, 1, &g)?.homs;
            let mut failures = Vec::new();
            for h in &homs {
                let r = diamond_conjugation_check(&group, &lam, &DiamondFunction::Torus(h.clone()), &g)?;
                if !r.passed() {
                    failures.push(json!({ "character": h.values, "witness": r.witness }));
                }
            }
            let r = Report::with_verdict("diamond_conjugation", failures.is_empty())
                .detail("characters", homs.len())
                .detail("group", group.label());
            Ok(if failures.is_empty() { r } else { r.fail(failures) })
        })?;
    }
    Ok(rec)
}

/// A random sequence over Q: `l0` generators in `vars` variables, each a sum
/// of at most three terms of degree one or two with coefficients in [-2, 2].
fn random_gens(rng: &mut ChaCha8Rng, l0: usize, vars: usize) -> crate::error::Result<Vec<Poly<Rationals>>> {
    let q = Rationals;
    let mut out = Vec::with_capacity(l0);
    for _ in 0..l0 {
        let mut g = Poly::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let mut exps = vec![0u32; vars];
            exps[rng.gen_range(0..vars)] += 1;
            if rng.gen_bool(0.5) {
                exps[rng.gen_range(0..vars)] += 1;
            }
            let c = rng.gen_range(-2..=2);
            g = g.add(&q, &Poly::monomial(&q, mono_from_exps(&exps)?, q.from_i64(c)));
        }
        out.push(g);
    }
    Ok(out)
}

fn stage_localalg(plan: &AuditPlan) -> crate::error::Result<Recorder> {
    let mut rec = Recorder::new();
    let l0 = plan.l0 as usize;
    for s in &plan.sequences {
        let l0_here = (s.gens.as_array().map(Vec::len) == Some(l0)).then_some(l0);
        build_sequence_and_check(&mut rec, &s.field, s.vars, &s.gens, ExtOptions {
            l0: l0_here,
            q0: Some(plan.q0),
            probe: None,
            require_generation: false,
        })?;
    }
    if l0 == 0 {
        return Ok(rec);
    }
    if l0 > crate::localalg::MAX_VARS {
        return Err(Error::InvalidInput(format!("l0 = {l0} exceeds the variable limit")));
    }
    let mut rng = stage_rng(plan, 4);
    for _ in 0..plan.random_sequences {
        let vars = (l0 + rng.gen_range(0..=1)).min(crate::localalg::MAX_VARS);
        let gens = random_gens(&mut rng, l0, vars)?;
        let seq = LocalSequence::new(Rationals, vars, gens)?;
        ext_checks(
            &mut rec,
            &seq,
            ExtOptions {
                l0: Some(l0),
                q0: Some(plan.q0),
                probe: None,
                require_generation: false,
            },
        )?;
    }
    Ok(rec)
}

fn stage_galdim(plan: &AuditPlan) -> crate::error::Result<Recorder> {
    let d = &plan.datum;
    let mut rec = Recorder::new();
    let ledger = match &plan.ledger {
        Some(l) => l.clone(),
        None => crystalline_ledger(d, plan.l0)?,
    };
    ledger_checks(&mut rec, &ledger, Some(d))?;
    let r = LieDims::of(d).r;
    if plan.l0 <= r {
        let tuple = smooth_case_tuple(plan.l0, r)?;
        rec.run(json!({ "check": "poitou_tate_consistency", "dims": tuple }), || {
            Ok(poitou_tate_consistency(tuple))
        })?;
    }
    rec.run(json!({ "check": "leopoldt_h1", "r2": 0, "defect": 0 }), || {
        let v = leopoldt_h1(0, 0);
        let r = Report::with_verdict("leopoldt_h1_rationals", v == 1).detail("h1", v);
        Ok(if v == 1 { r } else { r.fail(json!({ "h1": v })) })
    })?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1,0").unwrap(), vec![1, 0]);
        assert_eq!(parse_int_list("(0,-1)").unwrap(), vec![0, -1]);
        assert_eq!(parse_int_list("[2, 1, 0]").unwrap(), vec![2, 1, 0]);
        assert!(parse_int_list("1,x").is_err());
    }

    #[test]
    fn fields() {
        assert!(matches!(parse_field("Q").unwrap(), FieldChoice::Q));
        assert!(matches!(parse_field("Fp:5").unwrap(), FieldChoice::Fp(_)));
        assert!(parse_field("Fp:6").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(Config::from_json(r#"{"preset": "GL2", "l0": 1}"#).is_ok());
        assert!(Config::from_json(r#"{"preset": "GL2", "bogus": 1}"#).is_err());
        assert!(Config::from_json(r#"{"preset": "GL2", "datum": {}}"#).is_err());
    }
}
