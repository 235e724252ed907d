//! Command-line front end: instance generation, analysis, exact orbit
//! computation, growth tables, and per-instance verification.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed input or
//! arguments, 3 instance above the brute-force cap.

mod input;
mod verify;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitlab::lemmas::{
    build_an, build_jn, check_nonsingleton_bound, growth_report, stab_bound_report, BoundParams,
    GROWTH_CSV_HEADER,
};
use orbitlab::preorder::{classify, CaseThresholds, Family};
use orbitlab::{factorial, Error, OrderedPartition, SymEngine, DEFAULT_CAP};
use serde_json::json;

/// Caps above this need `--unsafe-cap`.
const SAFE_CAP: usize = DEFAULT_CAP;

#[derive(Parser, Debug)]
#[command(name = "orbitlab", version, about = "Orbits and stabilizers of hypercube preorders")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for permutation enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest n for exhaustive enumeration of Sym_n.
    #[arg(long, env = "ORBITLAB_CAP", default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,

    /// Allow caps above the safe default.
    #[arg(long, global = true)]
    unsafe_cap: bool,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance of a named family.
    Gen(GenArgs),
    /// Case report, constructions, and bounds for an instance file.
    Analyze(FileArgs),
    /// Exact stabilizer and orbit size of an instance file.
    Orbit(FileArgs),
    /// Exact orbits against bounds and 2^{kn} over a range of n.
    Report(ReportArgs),
    /// Check every exact property on an instance file.
    Verify(FileArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Class size constant: blocks have c·n strings.
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FileArgs {
    /// Instance file (text or JSON), or `-` for stdin.
    file: PathBuf,
    /// Class size constant; measured from the instance when omitted.
    #[arg(long)]
    c: Option<u64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    family: Family,
    /// A single n or an inclusive range such as `3..6`.
    #[arg(long, value_parser = parse_range)]
    n: (usize, usize),
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Compare orbits against 2^{kn}.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("empty or invalid range {s:?}"));
    }
    Ok((lo, hi))
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    pub fn from_core(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => 3,
            Error::Postcondition { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }

    pub fn context(mut self, ctx: impl AsRef<str>) -> Self {
        self.msg = format!("{}: {}", ctx.as_ref(), self.msg);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from_core(e)
    }
}


fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_gen(args: &GenArgs, format: Format) -> Result<String, Failure> {
    let p = args.family.generate(args.n, args.c, args.seed)?;
    Ok(match format {
        Format::Text => p.to_string(),
        Format::Json => to_json(&p.to_json()),
        Format::Csv => {
            let mut s = String::from("class,string\n");
            for (i, c) in p.classes().iter().enumerate() {
                for v in c {
                    writeln!(s, "{},{v}", i + 1).unwrap();
                }
            }
            s
        }
    })
}

fn cmd_analyze(engine: &SymEngine, p: &OrderedPartition, c: Option<u64>, format: Format) -> Result<String, Failure> {
    engine.check(p.dim())?;
    let params = BoundParams {
        c,
        thresholds: CaseThresholds::default(),
    };
    let bounds = stab_bound_report(engine, p, params)?;
    let case = classify(p, params.thresholds)?;
    let selection = build_jn(p)?;
    let nonsingleton = check_nonsingleton_bound(p, bounds.c)?;
    let subset = build_an(&p.classes()[case.b_class_index])?;
    let validation = p.validate(bounds.c);
    Ok(match format {
        Format::Json => to_json(&json!({
            "n": p.dim(),
            "classes": p.len(),
            "validation": validation,
            "case": case,
            "selection": selection,
            "nonsingleton": nonsingleton,
            "subset": subset,
            "bounds": bounds,
        })),
        Format::Csv => {
            let mut s = String::from("bound,quantity,bound_value,exact,hypotheses_ok,holds\n");
            for e in &bounds.entries {
                let opt = |v: &Option<num_bigint::BigUint>| v.as_ref().map(|x| x.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},\"{}\",{},{},{},{}",
                    e.id,
                    e.quantity,
                    opt(&e.bound),
                    opt(&e.exact),
                    e.hypotheses_ok,
                    e.holds().map(|h| h.to_string()).unwrap_or_default()
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "n = {}, {} classes, max class size {}", p.dim(), p.len(), case.max_class_size).unwrap();
            writeln!(
                s,
                "cover {} disjoint {} size<=c*n (c={}) {}",
                validation.cover_ok,
                validation.disjoint_ok,
                bounds.c,
                validation.size_ok.unwrap_or(true)
            )
            .unwrap();
            writeln!(
                s,
                "B = class {} with |SP(B)| = {}; singletons in SP(B): {}; global singletons: {}",
                case.b_class_index + 1,
                case.sp_size,
                case.singleton_count_b,
                case.singleton_count_global
            )
            .unwrap();
            writeln!(s, "case: {:?}", case.case_tag).unwrap();
            writeln!(
                s,
                "selected classes: {:?} (part-count increases {:?})",
                selection.chosen.iter().map(|i| i + 1).collect::<Vec<_>>(),
                selection.increases
            )
            .unwrap();
            writeln!(
                s,
                "non-singleton positions: {} (8 log2 n = {:.3}, holds {})",
                nonsingleton.nonsingleton_positions, nonsingleton.threshold, nonsingleton.holds
            )
            .unwrap();
            let chosen: Vec<String> = subset.chosen.iter().map(|a| a.to_string()).collect();
            writeln!(s, "subset of B: [{}], potentials {:?}", chosen.join(", "), subset.potentials).unwrap();
            for e in &bounds.entries {
                writeln!(
                    s,
                    "{:<20} exact {:>12} bound {} hypotheses {}",
                    e.id.name(),
                    e.exact.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into()),
                    e.bound.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "undefined".into()),
                    if e.hypotheses_ok { "ok" } else { "fail" }
                )
                .unwrap();
            }
            s
        }
    })
}

fn cmd_orbit(engine: &SymEngine, p: &OrderedPartition, format: Format) -> Result<String, Failure> {
    let n = p.dim();
    let stab = engine.stabilizer_order_ordered_partition(p)?;
    let orbit = factorial(n) / stab;
    let direct = if n <= verify::DIRECT_ORBIT_MAX_N {
        Some(engine.direct_orbit_ordered_partition(p)?)
    } else {
        None
    };
    let agree = direct.map(|d| d == orbit);
    Ok(match format {
        Format::Json => to_json(&json!({
            "n": n,
            "stabilizer": stab,
            "orbit": orbit,
            "direct_orbit": direct,
            "cross_check": agree,
        })),
        Format::Csv => format!(
            "n,stabilizer,orbit,direct_orbit,cross_check\n{n},{stab},{orbit},{},{}\n",
            direct.map(|d| d.to_string()).unwrap_or_default(),
            agree.map(|a| a.to_string()).unwrap_or_default()
        ),
        Format::Text => {
            let mut s = format!("n = {n}\nstabilizer {stab}\norbit {orbit}\n");
            match (direct, agree) {
                (Some(d), Some(a)) => writeln!(s, "direct orbit {d} (agrees: {a})").unwrap(),
                _ => s.push_str("direct orbit skipped\n"),
            }
            s
        }
    })
}

fn cmd_report(engine: &SymEngine, args: &ReportArgs, format: Format) -> Result<String, Failure> {
    let rows = growth_report(engine, args.family, args.n.0..=args.n.1, args.c, args.seed, args.k)?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = format!("{GROWTH_CSV_HEADER}\n");
            for r in &rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{:>3} {:<13} {:>12} {:>14} {:>12} {:>24}  hyp\n",
                "n", "family", "orbit", "2^kn", "ratio", "orbit lower bound"
            );
            for r in &rows {
                writeln!(
                    s,
                    "{:>3} {:<13} {:>12} {:>14} {:>12} {:>24}  {}",
                    r.n,
                    r.family,
                    r.exact_orbit.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    r.poly,
                    r.orbit_ratio.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into()),
                    r.best_orbit_lower_bound.clone().unwrap_or_else(|| "-".into()),
                    r.hypotheses_ok
                )
                .unwrap();
            }
            s
        }
    })
}

fn cmd_verify(engine: &SymEngine, p: &OrderedPartition, c: Option<u64>, format: Format) -> Result<(String, bool), Failure> {
    let checks = verify::run(engine, p, c)?;
    let ok = checks.iter().all(|c| c.passed);
    let out = match format {
        Format::Json => to_json(&json!({ "n": p.dim(), "passed": ok, "checks": checks })),
        Format::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &checks {
                writeln!(s, "{},{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'")).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                writeln!(s, "[{}] {} {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail).unwrap();
            }
            writeln!(s, "{}", if ok { "all checks passed" } else { "some checks failed" }).unwrap();
            s
        }
    };
    Ok((out, ok))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.cap > SAFE_CAP && !cli.unsafe_cap {
        return Err(Failure::input(format!(
            "cap {} exceeds the safe limit {SAFE_CAP}; pass --unsafe-cap to allow it",
            cli.cap
        )));
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::input(e.to_string()))?;
    }
    let engine = SymEngine::with_cap(cli.cap);
    let (out, ok) = match &cli.command {
        Command::Gen(a) => (cmd_gen(a, cli.format)?, true),
        Command::Analyze(a) => {
            let p = input::load_instance(&a.file)?;
            (cmd_analyze(&engine, &p, a.c, cli.format)?, true)
        }
        Command::Orbit(a) => {
            let p = input::load_instance(&a.file)?;
            (cmd_orbit(&engine, &p, cli.format)?, true)
        }
        Command::Report(a) => (cmd_report(&engine, a, cli.format)?, true),
        Command::Verify(a) => {
            let p = input::load_instance(&a.file)?;
            cmd_verify(&engine, &p, a.c, cli.format)?
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, out)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::input(format!("stdout: {e}")))?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
