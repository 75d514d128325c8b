//! `varcount`: count points on staircase diagonal systems, check them against
//! brute force, and print Smith-form diagnostics.

use std::fmt::Display;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use varcount_core::counting::{gcd_factors, level_snf, total_u64};
use varcount_core::intlinalg::{smith_normal_form, verify_snf, IntMatrix};
use varcount_core::oracle::{OracleError, DEFAULT_ORACLE_CAP};
use varcount_core::report::report_to_json;
use varcount_core::{
    brute_count, count_points, partition_profile, with_threads, CountError, CountOptions,
    CountReport, FilterStrategy, ParseOptions, VarietySpec,
};

#[derive(Parser)]
#[command(
    name = "varcount",
    version,
    about = "Exact point counts for staircase diagonal systems over finite fields"
)]
struct Cli {
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Accept characteristic 2. Results are unproven there, so `count`
    /// also runs the brute-force comparison.
    #[arg(long, global = true)]
    force_even: bool,

    /// Largest q^{n_t} the brute-force oracle will enumerate.
    #[arg(long, global = true, env = "VARCOUNT_CAP", default_value_t = DEFAULT_ORACLE_CAP)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Grouped,
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Count points with the Smith-form formula.
    Count {
        file: PathBuf,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Primitive element for the index tables, e.g. `3` or `[1,1]`.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "grouped")]
        strategy: Strategy,
        /// Always enumerate, even where the closed form applies.
        #[arg(long)]
        no_closed_form: bool,
        /// Enumerate closed-form levels too and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Count points by evaluating every point of F_q^{n_t}.
    Brute {
        file: PathBuf,
        /// Also print the solution counts grouped by nonzero monomials.
        #[arg(long)]
        profile: bool,
    },
    /// Compare the formula against brute force, including the per-level
    /// partition of the solutions.
    Verify { file: PathBuf },
    /// Print Smith normal forms: per level for a system, or for a bare
    /// integer matrix (`.mat` files or `--matrix`).
    Snf {
        file: PathBuf,
        #[arg(long)]
        matrix: bool,
    },
    /// Time the formula against brute force.
    Bench {
        /// Systems to time; the two bundled examples when empty.
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        /// Write `case,path,runs,median_ns` rows to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// A failure with its exit code: 1 internal or mismatch, 2 input, 3 resource.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Display) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }

    fn internal(msg: impl Display) -> Self {
        Failure {
            code: 1,
            msg: msg.to_string(),
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        let code = match e {
            CountError::ResourceLimit { .. } => 3,
            CountError::Variety(_) | CountError::Field(_) => 2,
            CountError::Linalg(_) | CountError::InvariantViolation(_) => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::CapExceeded { .. } => 3,
            OracleError::StructureViolation { .. } => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

const BUNDLED: [(&str, &str); 2] = [
    (
        "sys11",
        include_str!("../../../systems/f11_two_levels.vsys"),
    ),
    (
        "sys7",
        include_str!("../../../systems/f7_three_levels.vsys"),
    ),
];

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, cli: &Cli) -> Result<VarietySpec, Failure> {
    let text = read(path)?;
    parse_spec(&text, cli).map_err(|f| Failure::input(format!("{}: {}", path.display(), f.msg)))
}

fn parse_spec(text: &str, cli: &Cli) -> Result<VarietySpec, Failure> {
    let opts = ParseOptions {
        allow_even: cli.force_even,
    };
    let spec = varcount_core::parse_system(text, opts).map_err(Failure::input)?;
    if spec.field().characteristic() == 2 {
        eprintln!("warning: characteristic 2 is outside the proven range of the formula; `count` checks it by brute force");
    }
    Ok(spec)
}

fn tuple<T: Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn print_report(report: &CountReport) {
    let f = &report.field;
    let name = if f.degree() == 1 {
        format!("F_{}", f.order())
    } else {
        format!(
            "F_{} = F_{}[x]/({})",
            f.order(),
            f.characteristic(),
            f.format_modulus()
        )
    };
    println!("field {name}");
    println!(
        "structure m={} t={} r={} n={}",
        report.equations,
        report.levels.len(),
        tuple(&report.r),
        tuple(&report.n)
    );
    if let Some(alpha) = report.alpha {
        println!("primitive element {}", f.format_element(alpha));
    }
    for lv in &report.levels {
        println!(
            "level {}: s={} d={} gcd={} |S_k|={} N={} term={} [{}]",
            lv.l,
            lv.rank(),
            tuple(&lv.snf.d),
            tuple(&lv.gcds),
            tuple(&lv.set_sizes),
            lv.n_l,
            lv.term,
            lv.path.as_str()
        );
    }
    if let Some(z) = &report.zero_term {
        println!("zero term {z}");
    }
    println!("total = {}", report.total);
}

fn cmd_count(
    cli: &Cli,
    file: &Path,
    json: bool,
    alpha: Option<&str>,
    strategy: Strategy,
    no_closed_form: bool,
    cross_check: bool,
) -> Outcome {
    let spec = load(file, cli)?;
    let alpha = alpha
        .map(|text| {
            let f = spec.field();
            let a = f
                .parse_element(text)
                .map_err(|e| Failure::input(format!("--alpha {text}: {e}")))?;
            if !f.is_primitive(a) {
                return Err(Failure::input(format!(
                    "--alpha {text}: not a primitive element of F_{}",
                    f.order()
                )));
            }
            Ok(a)
        })
        .transpose()?;
    let opts = CountOptions {
        strategy: match strategy {
            Strategy::Grouped => FilterStrategy::Grouped,
            Strategy::Direct => FilterStrategy::Direct,
        },
        alpha,
        closed_form: !no_closed_form,
        cross_check,
        ..Default::default()
    };
    let report = count_points(&spec, &opts)?;
    if json {
        print!("{}", report_to_json(&report));
    } else {
        print_report(&report);
    }
    if spec.field().characteristic() == 2 {
        let brute = brute_count(&spec, cli.cap)?;
        if total_u64(&report) != Some(brute) {
            return Err(Failure::internal(format!(
                "formula {} != oracle {brute} in characteristic 2",
                report.total
            )));
        }
        eprintln!("checked: formula {} == oracle {brute}", report.total);
    }
    Ok(())
}

fn cmd_brute(cli: &Cli, file: &Path, profile: bool) -> Outcome {
    let spec = load(file, cli)?;
    println!("total = {}", brute_count(&spec, cli.cap)?);
    if profile {
        for (n, m) in partition_profile(&spec, cli.cap)? {
            println!("M_{n} = {m}");
        }
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, file: &Path) -> Outcome {
    let spec = load(file, cli)?;
    let opts = CountOptions {
        cross_check: true,
        ..Default::default()
    };
    let report = count_points(&spec, &opts)?;
    let brute = brute_count(&spec, cli.cap)?;
    let profile = partition_profile(&spec, cli.cap)?;

    // (label, formula, oracle)
    let mut rows: Vec<(String, String, String)> =
        vec![("total".into(), report.total.to_string(), brute.to_string())];
    for (&n, &m) in &profile {
        let expected = if n == 0 {
            report.zero_term.clone().unwrap_or_default()
        } else {
            match report.r.iter().position(|&r| r == n) {
                Some(l) => report.levels[l].term.clone(),
                None => Default::default(),
            }
        };
        rows.push((format!("M_{n}"), expected.to_string(), m.to_string()));
    }
    let bad: Vec<_> = rows.iter().filter(|(_, a, b)| a != b).collect();
    if bad.is_empty() {
        println!("formula {} == oracle {brute}", report.total);
        println!(
            "partition M_n matches level terms for n in 0..={}",
            spec.monomials()
        );
        return Ok(());
    }
    println!("{:<10} {:>20} {:>20}", "quantity", "formula", "oracle");
    for (label, a, b) in &rows {
        let mark = if a == b { "" } else { "  <-- differs" };
        println!("{label:<10} {a:>20} {b:>20}{mark}");
    }
    Err(Failure::internal(format!(
        "{} of {} cross-checks differ",
        bad.len(),
        rows.len()
    )))
}

fn print_matrix(name: &str, m: &IntMatrix) {
    println!("{name} =");
    for line in m.to_string().lines() {
        println!("  {line}");
    }
}

fn cmd_snf(cli: &Cli, file: &Path, matrix: bool) -> Outcome {
    if matrix || file.extension().is_some_and(|e| e == "mat") {
        let a = IntMatrix::parse_text(&read(file)?).map_err(Failure::input)?;
        let s = smith_normal_form(&a).map_err(Failure::input)?;
        if !verify_snf(&a, &s).map_err(Failure::internal)? {
            return Err(Failure::internal("Smith form failed verification"));
        }
        println!("d = {}", tuple(&s.d));
        println!("rank = {}", s.rank());
        print_matrix("U", &s.u);
        print_matrix("V", &s.v);
        return Ok(());
    }
    let spec = load(file, cli)?;
    let q = spec.field().order() as u64;
    for l in 1..=spec.blocks() {
        // level_snf re-verifies U, V and U·E·V before returning.
        let (_, s) = level_snf(&spec, l)?;
        println!(
            "level {l}: {}x{} s={} d={} gcd(q-1,d)={}",
            spec.equations() * spec.r_at(l),
            spec.n_at(l),
            s.rank(),
            tuple(&s.d),
            tuple(&gcd_factors(&s, q))
        );
    }
    Ok(())
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn time<T>(repeat: usize, mut f: impl FnMut() -> Result<T, Failure>) -> Result<Duration, Failure> {
    let mut runs = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let start = Instant::now();
        f()?;
        runs.push(start.elapsed());
    }
    Ok(median(runs))
}

fn cmd_bench(cli: &Cli, files: &[PathBuf], repeat: usize, csv: Option<&Path>) -> Outcome {
    if repeat == 0 {
        return Err(Failure::input("--repeat must be at least 1"));
    }
    let cases: Vec<(String, VarietySpec)> = if files.is_empty() {
        BUNDLED
            .iter()
            .map(|(name, text)| Ok((name.to_string(), parse_spec(text, cli)?)))
            .collect::<Result<_, Failure>>()?
    } else {
        files
            .iter()
            .map(|p| Ok((p.display().to_string(), load(p, cli)?)))
            .collect::<Result<_, Failure>>()?
    };
    let mut rows = Vec::new();
    for (name, spec) in &cases {
        let formula = time(repeat, || Ok(count_points(spec, &CountOptions::default())?))?;
        let oracle = time(repeat, || Ok(brute_count(spec, cli.cap)?))?;
        rows.push((name.clone(), "formula", formula));
        rows.push((name.clone(), "oracle", oracle));
    }
    println!(
        "{:<24} {:<8} {:>5} {:>16}",
        "case", "path", "runs", "median"
    );
    for (name, path, d) in &rows {
        println!(
            "{name:<24} {path:<8} {repeat:>5} {:>16}",
            format!("{d:.3?}")
        );
    }
    if let Some(out) = csv {
        let mut text = String::from("case,path,runs,median_ns\n");
        for (name, path, d) in &rows {
            text.push_str(&format!("{name},{path},{repeat},{}\n", d.as_nanos()));
        }
        fs::write(out, text).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Count {
            file,
            json,
            alpha,
            strategy,
            no_closed_form,
            cross_check,
        } => cmd_count(
            cli,
            file,
            *json,
            alpha.as_deref(),
            *strategy,
            *no_closed_form,
            *cross_check,
        ),
        Command::Brute { file, profile } => cmd_brute(cli, file, *profile),
        Command::Verify { file } => cmd_verify(cli, file),
        Command::Snf { file, matrix } => cmd_snf(cli, file, *matrix),
        Command::Bench { files, repeat, csv } => cmd_bench(cli, files, *repeat, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(cli.threads, || run(&cli)) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
