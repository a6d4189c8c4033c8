use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bernoulli_spectra::arith::{AlgebraicNumber, Rational};
use bernoulli_spectra::diagnostics::{
    alpha_bound, classify, contraction_constant, default_grid, q_deficit_scan, Verdict,
};
use bernoulli_spectra::measure::MeasureSpec;
use bernoulli_spectra::spectra::{
    bizero_failures, brute_force_maximal_dsets, canonical_spectrum, dset_verify, dset_window_maximality,
    maximal_bizero_set, BiZeroSet, SelectionMap,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_WRITE: u8 = 3;
const EXIT_NOT_SPECTRAL: u8 = 10;
const EXIT_NOT_DIVISIBLE: u8 = 11;
const EXIT_BUDGET: u8 = 12;

#[derive(Parser)]
#[command(name = "bspec", version, about = "Spectra and bi-zero sets of N-Bernoulli measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide spectrality of μ_{ρ,N}.
    Classify {
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Emit the elements of a canonical spectrum or selection-map image.
    Spectrum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        map: MapArgs,
        /// Numerator p of ρ = p/q.
        #[arg(long, default_value_t = 1)]
        p: u64,
    },
    /// Write Q(ξ) over a grid as CSV.
    Qcurve {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        map: MapArgs,
        /// Read Λ from a file instead of building it.
        #[arg(long)]
        elements: Option<PathBuf>,
        /// `default`, `uniform:K` or `list:x1,x2,...`.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 0)]
        grid_seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check pairwise orthogonality of a list of frequencies.
    Verify {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        elements: PathBuf,
    },
    /// Enumerate or check D-sets on a window.
    Dset {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        window: i64,
        mode: DsetMode,
        /// Comma-separated set for `check`.
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
        /// Only elements with |ℓ| <= witness may block window points.
        #[arg(long)]
        witness: Option<i64>,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Print the contraction constant c and the bound α.
    Constants {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: Option<u64>,
        /// Integer coefficients, leading first.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
}

#[derive(clap::Args)]
struct MapArgs {
    /// `canonical`, `random`, or a path to a selection-map table.
    #[arg(long, default_value = "canonical")]
    map: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    m0: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum DsetMode {
    Enumerate,
    Check,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bspec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Classify { rho, n } => cmd_classify(&rho, n, json),
        Command::Spectrum { q, n, depth, map, p } => cmd_spectrum(q, n, depth, &map, p, json),
        Command::Qcurve { rho, n, depth, map, elements, grid, grid_seed, tol, out } => {
            cmd_qcurve(&rho, n, depth, &map, elements.as_deref(), &grid, grid_seed, tol, &out, json)
        }
        Command::Verify { rho, n, elements } => cmd_verify(&rho, n, &elements, json),
        Command::Dset { q, n, window, mode, set, witness, budget } => {
            cmd_dset(q, n, window, mode, set.as_deref(), witness, budget, json)
        }
        Command::Constants { n, q, poly } => cmd_constants(n, q, poly.as_deref(), json),
    }
}

fn input<T, E: ToString>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::new(EXIT_INPUT, e))
}

fn parse_rho(s: &str) -> Result<AlgebraicNumber, Failure> {
    input(s.parse::<AlgebraicNumber>())
}

fn rational_spec(rho: &str, n: u32) -> Result<MeasureSpec, Failure> {
    let rho = parse_rho(rho)?;
    let Some(r) = rho.as_rational() else {
        return Err(Failure::new(EXIT_INPUT, format!("ρ = {rho} must be rational here")));
    };
    input(MeasureSpec::rational(r.clone(), n))
}

fn emit(json: bool, value: serde_json::Value, text: String) -> Outcome {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        print!("{text}");
    }
    Ok(0)
}

fn cmd_classify(rho: &str, n: u32, json: bool) -> Outcome {
    let rho = parse_rho(rho)?;
    let v = input(classify(&rho, n))?;
    let text = format!("verdict: {:?}\ncase: {}\nexplanation: {}\n", v.verdict, v.case, v.explanation);
    let value = json!({
        "rho": rho.to_string(),
        "n": n,
        "verdict": v.verdict,
        "case": v.case.to_string(),
        "explanation": v.explanation,
    });
    emit(json, value, text)?;
    Ok(if v.verdict == Verdict::Spectral { 0 } else { EXIT_NOT_SPECTRAL })
}

fn load_map(args: &MapArgs, n: u32, q: u64, depth: usize) -> Result<SelectionMap, Failure> {
    match args.map.as_str() {
        "canonical" => input(SelectionMap::canonical(n, q, depth)),
        "random" => input(SelectionMap::random(n, q, depth, args.seed)),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{path}: {e}")))?;
            let map = input(SelectionMap::from_text(&text))?;
            if map.n() != n || map.q() != q || map.depth() < depth {
                return Err(Failure::new(
                    EXIT_INPUT,
                    format!("{path}: table is N={} q={} L={}, need N={n} q={q} L>={depth}", map.n(), map.q(), map.depth()),
                ));
            }
            Ok(map)
        }
    }
}

fn build_set(spec: &MeasureSpec, q: u64, depth: usize, args: &MapArgs) -> Result<BiZeroSet, Failure> {
    let n = spec.n();
    let unit = spec.rho_rational().is_some_and(|r| r.numer() == &1.into());
    if args.map == "canonical" && args.m0 == 1 && unit {
        return input(canonical_spectrum(q, n, depth));
    }
    let map = load_map(args, n, q, depth)?;
    input(maximal_bizero_set(spec, &map, args.m0, depth))
}

fn cmd_spectrum(q: u64, n: u32, depth: usize, map: &MapArgs, p: u64, json: bool) -> Outcome {
    if n < 2 || q < 2 || q % u64::from(n) != 0 {
        return Err(Failure::new(EXIT_NOT_DIVISIBLE, format!("N={n} does not divide q={q}")));
    }
    let rho = input(Rational::new(p, q))?;
    let spec = input(MeasureSpec::rational(rho, n))?;
    let set = build_set(&spec, q, depth, map)?;
    let elements: Vec<String> = set.elements.iter().map(ToString::to_string).collect();
    let mut text = String::new();
    for e in &elements {
        writeln!(text, "{e}").unwrap();
    }
    writeln!(text, "# count: {}", elements.len()).unwrap();
    let value = json!({
        "rho": spec.rho().to_string(),
        "n": n,
        "provenance": set.provenance,
        "depth": set.depth,
        "count": elements.len(),
        "elements": elements,
    });
    emit(json, value, text)
}

fn read_elements(path: &Path) -> Result<Vec<Rational>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value = content.parse::<Rational>().map_err(|e| {
            Failure::new(EXIT_INPUT, format!("{}:{}: {e}", path.display(), i + 1))
        })?;
        out.push(value);
    }
    Ok(out)
}

fn parse_grid(spec: &str, seed: u64) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::new(EXIT_INPUT, format!("bad grid {spec:?}"));
    if spec == "default" {
        return Ok(default_grid(seed));
    }
    if let Some(k) = spec.strip_prefix("uniform:") {
        let k: u32 = k.parse().map_err(|_| bad())?;
        return Ok((0..k).map(|i| f64::from(i) / f64::from(k)).collect());
    }
    if let Some(list) = spec.strip_prefix("list:") {
        return list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect();
    }
    Err(bad())
}

#[allow(clippy::too_many_arguments)]
fn cmd_qcurve(
    rho: &str,
    n: u32,
    depth: usize,
    map: &MapArgs,
    elements: Option<&Path>,
    grid: &str,
    grid_seed: u64,
    tol: f64,
    out: &Path,
    json: bool,
) -> Outcome {
    let spec = rational_spec(rho, n)?;
    let grid = parse_grid(grid, grid_seed)?;
    let set = match elements {
        Some(path) => BiZeroSet::ad_hoc(spec.clone(), read_elements(path)?),
        None => {
            let q = spec.rho_rational().and_then(|r| r.denom().try_into().ok()).unwrap_or(0u64);
            if q % u64::from(n) != 0 {
                return Err(Failure::new(
                    EXIT_INPUT,
                    format!("N={n} does not divide q={q}; pass Λ with --elements"),
                ));
            }
            build_set(&spec, q, depth, map)?
        }
    };
    let scan = input(q_deficit_scan(&set, &grid, tol))?;
    fs::write(out, scan.to_csv())
        .map_err(|e| Failure::new(EXIT_WRITE, format!("{}: {e}", out.display())))?;
    let min = scan.min();
    let text = match min {
        Some((x, q)) => format!(
            "lambda: {}\nmin_q: {q:.16e}\nargmin: {x:.16e}\nerror_bound: {:.16e}\n",
            scan.lambda_size,
            scan.max_error_bound()
        ),
        None => format!("lambda: {}\nempty grid\n", scan.lambda_size),
    };
    let value = json!({
        "lambda": scan.lambda_size,
        "depth": scan.depth,
        "tolerance": tol,
        "points": scan.xi.len(),
        "min_q": min.map(|m| m.1),
        "argmin": min.map(|m| m.0),
        "error_bound": scan.max_error_bound(),
        "csv": out.display().to_string(),
    });
    emit(json, value, text)
}

fn cmd_verify(rho: &str, n: u32, path: &Path, json: bool) -> Outcome {
    let spec = rational_spec(rho, n)?;
    let elements = read_elements(path)?;
    let failures = input(bizero_failures(&spec, &elements))?;
    let pairs = elements.len() * elements.len().saturating_sub(1) / 2;
    let mut text = String::new();
    for (a, b) in &failures {
        writeln!(text, "fail: {a} {b}").unwrap();
    }
    let status = if failures.is_empty() { "pass" } else { "fail" };
    writeln!(text, "{status}: {} elements, {pairs} pairs, {} failing", elements.len(), failures.len()).unwrap();
    let value = json!({
        "pass": failures.is_empty(),
        "elements": elements.len(),
        "pairs": pairs,
        "failures": failures.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>(),
    });
    emit(json, value, text)?;
    Ok(if failures.is_empty() { 0 } else { EXIT_FAIL })
}

fn join(set: &[i64]) -> String {
    set.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[allow(clippy::too_many_arguments)]
fn cmd_dset(
    q: u64,
    n: u32,
    window: i64,
    mode: DsetMode,
    set: Option<&str>,
    witness: Option<i64>,
    budget: u64,
    json: bool,
) -> Outcome {
    match mode {
        DsetMode::Enumerate => {
            let outcome = input(brute_force_maximal_dsets(q, n, window, budget))?;
            let mut text = String::new();
            if !outcome.complete {
                writeln!(text, "# PARTIAL: search budget of {budget} nodes exceeded").unwrap();
            }
            for s in &outcome.value {
                writeln!(text, "{}", join(s)).unwrap();
            }
            writeln!(text, "# count: {}", outcome.value.len()).unwrap();
            let value = json!({
                "complete": outcome.complete,
                "nodes": outcome.nodes,
                "count": outcome.value.len(),
                "sets": outcome.value,
            });
            emit(json, value, text)?;
            Ok(if outcome.complete { 0 } else { EXIT_BUDGET })
        }
        DsetMode::Check => {
            let raw = set.ok_or_else(|| Failure::new(EXIT_INPUT, "check needs --set"))?;
            let members: Vec<i64> = raw
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| Failure::new(EXIT_INPUT, format!("bad element {s:?}"))))
                .collect::<Result<_, _>>()?;
            let is_dset = input(dset_verify(&members, q, n))?;
            let witness = witness.unwrap_or_else(|| members.iter().map(|x| x.abs()).max().unwrap_or(0));
            let report = input(dset_window_maximality(&members, q, n, window, witness))?;
            let text = format!(
                "dset: {is_dset}\nwindow_maximal: {}\naddable: {}\n",
                report.is_maximal(),
                join(&report.violations)
            );
            let value = json!({ "dset": is_dset, "window_maximal": report.is_maximal(), "report": report });
            emit(json, value, text)?;
            Ok(if is_dset { 0 } else { EXIT_FAIL })
        }
    }
}

fn cmd_constants(n: u32, q: Option<u64>, poly: Option<&str>, json: bool) -> Outcome {
    let mut text = String::new();
    let mut value = json!({ "n": n });
    if let Some(q) = q {
        let c = input(contraction_constant(n, q))?;
        writeln!(text, "c: {c:.16e}").unwrap();
        value["q"] = json!(q);
        value["c"] = json!(c);
    }
    if let Some(poly) = poly {
        let coeffs = poly
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Failure::new(EXIT_INPUT, format!("bad coefficient {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let alpha = input(alpha_bound(&coeffs, n))?;
        writeln!(text, "alpha: {}", alpha.alpha).unwrap();
        if let Some(w) = &alpha.warning {
            writeln!(text, "warning: {w}").unwrap();
        }
        value["alpha"] = json!(alpha.alpha);
        value["warning"] = json!(alpha.warning);
    }
    if q.is_none() && poly.is_none() {
        return Err(Failure::new(EXIT_INPUT, "give --q and/or --poly"));
    }
    emit(json, value, text)
}
