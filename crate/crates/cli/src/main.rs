//! `secant3`: catalecticant ranks, secant membership, conormal spaces and the
//! singular-locus table for third secant varieties of Veronese varieties.

mod report;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use secant_core::table::{verify_table, CellResult};
use secant_core::tangent::DEFAULT_CLASSIFY_SEED;
use secant_core::{
    border_rank_lower_bound, build_flattening, canonical_form, classify_orbit_seeded,
    conormal_space, expected_codim, hilbert_function, membership, parse_dual_form, parse_form,
    smoothness_at, span_of, Error, Form, OrbitClass, Scalar,
};

use report::{render, Memberships, Report};

const D_GUARD: RangeInclusive<u32> = 3..=10;
const N_GUARD: RangeInclusive<u32> = 2..=5;
const HILBERT_GUARD: RangeInclusive<u32> = 2..=12;

#[derive(Parser, Debug)]
#[command(name = "secant3", version, about = "Catalecticants and the third secant of Veronese varieties")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized steps of orbit classification.
    #[arg(long, global = true, default_value_t = DEFAULT_CLASSIFY_SEED)]
    seed: u64,
    /// Worker threads for verify-table (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Lift the resource guards on degree and dimension ranges.
    #[arg(long, global = true)]
    force: bool,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FormInput {
    /// Form text, e.g. "x0^4 + 3/2*x1^2*x2^2".
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    form: Option<String>,
    /// File with one form per line; '#' starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Number of variables; inferred from the highest index if omitted.
    #[arg(long)]
    nvars: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Catalecticant matrix φ_{d−k,k}: shape, rank, optionally entries.
    Flatten {
        #[command(flatten)]
        input: FormInput,
        #[arg(long)]
        k: u32,
        /// Print the matrix entries.
        #[arg(long)]
        entries: bool,
    },
    /// Ranks, memberships, orbit class, conormal dimension and smoothness verdict.
    Analyze {
        #[command(flatten)]
        input: FormInput,
    },
    /// Orbit type inside σ₃.
    Classify {
        #[command(flatten)]
        input: FormInput,
    },
    /// Conormal space of σ₃ at a point of σ₃ ∖ σ₂.
    Conormal {
        #[command(flatten)]
        input: FormInput,
    },
    /// Membership in σ₁, σ₂, σ₃ and the degenerate locus.
    Membership {
        #[command(flatten)]
        input: FormInput,
    },
    /// Hilbert function of the squared net against its closed form.
    Hilbert {
        #[arg(long, value_enum)]
        net: Net,
        #[arg(long)]
        d: u32,
    },
    /// Canonical representative of an orbit type.
    Canonical {
        /// Fermat, Unmixed, Mixed or DegenerateBinary.
        kind: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        /// Weight of x1^d in the degenerate normal form.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        /// Weight of (x0+x1)^d in the degenerate normal form.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        beta: String,
    },
    /// Sweep canonical forms over (d, n) and compare with the predicted singular locus.
    VerifyTable {
        #[arg(long, default_value = "3..7")]
        d_range: String,
        #[arg(long, default_value = "2..4")]
        n_range: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Net {
    Unmixed,
    Mixed,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    fn precondition(msg: impl Into<String>) -> Self {
        Failure { code: 3, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() { 2 } else { 3 },
            msg: e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (reports, as_array, mut code) = run(&cli);
    print!("{}", render(&reports, cli.json, as_array));
    if code == 0 && reports.iter().any(is_mismatch) {
        code = 1;
    }
    ExitCode::from(code)
}

fn is_mismatch(r: &Report) -> bool {
    matches!(r.verdict.as_deref(), Some("mismatch") | Some("disagree"))
}

/// Runs the command; returns the successful reports, whether the JSON output
/// is an array, and the exit code of the first failure.
fn run(cli: &Cli) -> (Vec<Report>, bool, u8) {
    match &cli.command {
        Command::Flatten { input, k, entries } => {
            per_form(cli, input, |f| cmd_flatten(f, *k, *entries))
        }
        Command::Analyze { input } => per_form(cli, input, |f| cmd_analyze(f, cli.seed)),
        Command::Classify { input } => per_form(cli, input, |f| cmd_classify(f, cli.seed)),
        Command::Conormal { input } => per_form(cli, input, cmd_conormal),
        Command::Membership { input } => per_form(cli, input, cmd_membership),
        Command::Hilbert { net, d } => single(cli, || cmd_hilbert(*net, *d, cli.force)),
        Command::Canonical {
            kind,
            d,
            n,
            alpha,
            beta,
        } => single(cli, || cmd_canonical(kind, *d, *n, alpha, beta)),
        Command::VerifyTable { d_range, n_range } => {
            single(cli, || cmd_verify_table(d_range, n_range, jobs(cli), cli.force))
        }
    }
}

fn jobs(cli: &Cli) -> usize {
    cli.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn timed(cli: &Cli, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut r = f()?;
    if cli.timing {
        r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(r)
}

fn single(cli: &Cli, f: impl FnOnce() -> Outcome) -> (Vec<Report>, bool, u8) {
    match timed(cli, f) {
        Ok(r) => (vec![r], false, 0),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            (Vec::new(), false, e.code)
        }
    }
}

fn per_form(
    cli: &Cli,
    input: &FormInput,
    f: impl Fn(&Form) -> Outcome,
) -> (Vec<Report>, bool, u8) {
    let (sources, as_array) = match read_sources(input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            return (Vec::new(), input.file.is_some(), e.code);
        }
    };
    let mut reports = Vec::new();
    let mut code = 0;
    for (label, text) in sources {
        let outcome = timed(cli, || {
            let nvars = input.nvars.unwrap_or_else(|| infer_nvars(&text));
            let form = parse_form(&text, nvars)?;
            let mut r = f(&form)?;
            r.input = Some(form.to_string());
            r.parameters.insert("d".into(), json!(form.degree()));
            r.parameters.insert("nvars".into(), json!(form.nvars()));
            Ok(r)
        });
        match outcome {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("error: {label}: {}", e.msg);
                if code == 0 {
                    code = e.code;
                }
            }
        }
    }
    (reports, as_array, code)
}

/// `(label, text)` pairs, and whether the input came from a file.
fn read_sources(input: &FormInput) -> Result<(Vec<(String, String)>, bool), Failure> {
    if let Some(text) = &input.form {
        return Ok((vec![("--form".into(), text.clone())], false));
    }
    let path = input.file.as_ref().expect("clap enforces --form or --file");
    let content = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let forms = content
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (format!("{}:{}", path.display(), i + 1), body.to_string()))
        })
        .collect();
    Ok((forms, true))
}

/// One more than the largest variable index in the text, at least 1.
fn infer_nvars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = text[start..j].parse::<usize>() {
                best = best.max(v + 1);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best.max(1)
}

fn n_of(f: &Form) -> u32 {
    f.nvars().saturating_sub(1) as u32
}

fn cmd_flatten(f: &Form, k: u32, entries: bool) -> Outcome {
    let m = build_flattening(f, k)?;
    let (rows, cols) = m.shape();
    let rank = m.rank();
    let mut r = Report::new("flatten");
    r.param("k", k);
    r.ranks.insert(k, rank);
    r.detail("rows", rows);
    r.detail("cols", cols);
    r.text_lines.push(format!("matrix: {rows} x {cols}"));
    if entries {
        let table: Vec<Vec<String>> = m
            .matrix
            .to_rows()
            .iter()
            .map(|row| row.iter().map(Scalar::to_string).collect())
            .collect();
        for row in &table {
            r.text_lines.push(format!("  [{}]", row.join(", ")));
        }
        r.detail("entries", json!(table));
    }
    Ok(r)
}

fn fill_membership(r: &mut Report, f: &Form) -> Result<(), Failure> {
    let v = membership(f)?;
    r.ranks = v.witness_ranks.clone();
    r.memberships = Some(Memberships::from(&v));
    r.caveat(v.caveat.as_deref());
    Ok(())
}

fn cmd_analyze(f: &Form, seed: u64) -> Outcome {
    let n = n_of(f);
    if f.degree() < 3 || n < 2 {
        return Err(Failure::precondition(format!(
            "analyze needs d >= 3 and n >= 2, got d={}, n={n}",
            f.degree()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroForm.into());
    }
    let mut r = Report::new("analyze");
    r.param("n", n);
    r.param("seed", seed);
    fill_membership(&mut r, f)?;
    let span = span_of(f)?;
    let bound = border_rank_lower_bound(f)?;
    r.detail("span_dim", span.dim);
    r.detail("border_rank_lower_bound", bound);
    r.text_lines.push(format!("span dim: {}", span.dim));
    r.text_lines.push(format!("border rank lower bound: {bound}"));
    r.orbit_class = Some(classify_orbit_seeded(f, seed)?.to_string());
    let s = smoothness_at(f)?;
    r.conormal_dim = s.conormal_dim;
    r.expected_codim = Some(s.expected_codim);
    if let Some(formula) = s.formula_used {
        r.detail("conormal_formula", formula.as_str());
        r.text_lines.push(format!("conormal formula: {}", formula.as_str()));
    }
    r.verdict = Some(s.verdict.as_str().to_string());
    r.caveat(s.caveat.as_deref());
    Ok(r)
}

fn cmd_classify(f: &Form, seed: u64) -> Outcome {
    let mut r = Report::new("classify");
    r.param("n", n_of(f));
    r.param("seed", seed);
    if f.is_zero() {
        return Err(Error::ZeroForm.into());
    }
    let class = classify_orbit_seeded(f, seed)?;
    let span = span_of(f)?;
    r.detail("span_dim", span.dim);
    r.text_lines.push(format!("span dim: {}", span.dim));
    r.orbit_class = Some(class.to_string());
    if f.degree() == 3 {
        r.caveat(Some(secant_core::secant::D3_CAVEAT));
    }
    Ok(r)
}

fn cmd_conormal(f: &Form) -> Outcome {
    let c = conormal_space(f)?;
    let codim = expected_codim(f.degree(), n_of(f))?;
    let mut r = Report::new("conormal");
    r.param("n", n_of(f));
    r.conormal_dim = Some(c.dim());
    r.expected_codim = Some(codim);
    r.detail("conormal_formula", c.formula.as_str());
    r.text_lines.push(format!("conormal formula: {}", c.formula.as_str()));
    r.verdict = Some(if c.dim() == codim { "smooth" } else { "singular" }.into());
    Ok(r)
}

fn cmd_membership(f: &Form) -> Outcome {
    let mut r = Report::new("membership");
    r.param("n", n_of(f));
    fill_membership(&mut r, f)?;
    Ok(r)
}

/// `H_T(s) = C(s+2, 2)` for the polynomial ring in three variables.
fn h_t(s: i64) -> i64 {
    if s < 0 {
        0
    } else {
        (s + 2) * (s + 1) / 2
    }
}

fn net_generators(net: Net, d: u32) -> Vec<String> {
    match net {
        Net::Unmixed => vec!["y0*y2".into(), "y1^2".into(), "y1*y2".into()],
        Net::Mixed => vec![
            format!("y0*y2 - {}*y1^2", Scalar::new((i64::from(d) - 1).into(), 2.into())),
            "y1*y2".into(),
            "y2^2".into(),
        ],
    }
}

fn cmd_hilbert(net: Net, d: u32, force: bool) -> Outcome {
    if !force && !HILBERT_GUARD.contains(&d) {
        return Err(Failure::precondition(format!(
            "d={d} outside {}..{} (use --force)",
            HILBERT_GUARD.start(),
            HILBERT_GUARD.end()
        )));
    }
    let gens = net_generators(net, d);
    let qs = gens
        .iter()
        .map(|g| parse_dual_form(g, 3))
        .collect::<Result<Vec<_>, _>>()?;
    let mut squares = Vec::new();
    for i in 0..qs.len() {
        for j in i..qs.len() {
            squares.push(&qs[i] * &qs[j]);
        }
    }
    let brute = hilbert_function(&squares, d)? as i64;
    let s = i64::from(d);
    let closed = 6 * h_t(s - 4) - 6 * h_t(s - 5) + h_t(s - 6);
    let mut r = Report::new("hilbert");
    r.param("net", format!("{net:?}").to_lowercase());
    r.param("d", d);
    r.detail("generators", json!(gens));
    r.detail("brute_force", brute);
    r.detail("closed_form", closed);
    r.text_lines.push(format!("net: {}", gens.join(", ")));
    r.text_lines.push(format!("brute force: {brute}"));
    r.text_lines.push(format!("closed form: {closed}"));
    r.verdict = Some(if brute == closed { "agree" } else { "disagree" }.into());
    Ok(r)
}

fn cmd_canonical(kind: &str, d: u32, n: u32, alpha: &str, beta: &str) -> Outcome {
    let class = OrbitClass::parse(kind)
        .ok_or_else(|| Failure::input(format!("unknown orbit type '{kind}'")))?;
    let parse_q = |name: &str, s: &str| {
        s.trim()
            .parse::<Scalar>()
            .map_err(|_| Failure::input(format!("--{name}: not a rational number: '{s}'")))
    };
    let (a, b) = (parse_q("alpha", alpha)?, parse_q("beta", beta)?);
    let mut r = Report::new("canonical");
    r.param("kind", class.as_str());
    r.param("d", d);
    r.param("n", n);
    if class == OrbitClass::DegenerateBinary {
        r.param("alpha", a.to_string());
        r.param("beta", b.to_string());
    }
    let f = canonical_form(class, d, n, Some((a, b)))?;
    r.input = Some(f.to_string());
    Ok(r)
}

/// Accepts `a..b`, `a..=b` (both inclusive) or a single value.
fn parse_range(s: &str) -> Result<RangeInclusive<u32>, Failure> {
    let bad = || Failure::input(format!("bad range '{s}', expected a..b"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let v = num(s)?;
            v..=v
        }
    };
    if r.is_empty() {
        return Err(bad());
    }
    Ok(r)
}

fn check_guard(name: &str, r: &RangeInclusive<u32>, guard: &RangeInclusive<u32>) -> Result<(), Failure> {
    if guard.contains(r.start()) && guard.contains(r.end()) {
        return Ok(());
    }
    Err(Failure::precondition(format!(
        "{name} range {}..{} outside {}..{} (use --force)",
        r.start(),
        r.end(),
        guard.start(),
        guard.end()
    )))
}

fn cell_line(c: &CellResult) -> String {
    let conormal = match c.conormal_dim {
        Some(dim) => format!("conormal {dim} of {}", c.expected_codim),
        None => format!("conormal - of {}", c.expected_codim),
    };
    format!(
        "d={} n={} {:<16} classified {:<16} {:<24} {:<13} predicted {:<8} {}",
        c.d,
        c.n,
        c.kind.as_str(),
        c.classified_as.as_str(),
        conormal,
        c.verdict.as_str(),
        if c.predicted_singular { "singular" } else { "smooth" },
        if c.matches { "ok" } else { "MISMATCH" },
    )
}

fn cmd_verify_table(d_range: &str, n_range: &str, jobs: usize, force: bool) -> Outcome {
    let dr = parse_range(d_range)?;
    let nr = parse_range(n_range)?;
    if !force {
        check_guard("d", &dr, &D_GUARD)?;
        check_guard("n", &nr, &N_GUARD)?;
    }
    if *dr.start() < 3 || *nr.start() < 2 {
        return Err(Failure::precondition("the table needs d >= 3 and n >= 2"));
    }
    let keys = secant_core::table::cells(dr.clone(), nr.clone());
    let results = verify_table(dr.clone(), nr.clone(), jobs);
    let mut r = Report::new("verify-table");
    r.param("d_range", format!("{}..{}", dr.start(), dr.end()));
    r.param("n_range", format!("{}..{}", nr.start(), nr.end()));
    let mut cells = Vec::new();
    let mut matched = 0usize;
    for (key, res) in keys.iter().zip(results) {
        match res {
            Ok(c) => {
                matched += usize::from(c.matches);
                r.text_lines.push(cell_line(&c));
                cells.push(serde_json::to_value(&c).expect("cell"));
            }
            Err(e) => {
                r.text_lines.push(format!(
                    "d={} n={} {:<16} error: {e} MISMATCH",
                    key.d,
                    key.n,
                    key.kind.as_str()
                ));
                cells.push(json!({
                    "d": key.d, "n": key.n, "kind": key.kind, "error": e.to_string(), "matches": false
                }));
            }
        }
    }
    let total = cells.len();
    r.text_lines.push(format!("cells: {total} matched: {matched}"));
    r.detail("cells", Value::Array(cells));
    r.detail("total", total);
    r.detail("matched", matched);
    r.verdict = Some(if matched == total { "verified" } else { "mismatch" }.into());
    Ok(r)
}
