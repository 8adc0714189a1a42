//! `primpow`: primitive elements whose image under a quadratic is a k-th power.
//!
//! Exit codes: 0 success, 1 usage or input error, 3 internal consistency
//! failure, 4 no witness.

mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use primpow::bounds;
use primpow::charsum::{CharSumError, CharacterGroup};
use primpow::counting::{self, CountQuery, ScanConfig, ScanReport, ScanRow};
use primpow::invariants::{self, Fault, Level};

use output::{sig6, Format};

const F_HELP: &str = "Coefficients a,b,c of f = a x^2 + b x + c. Over a prime field: \
integers reduced mod p, e.g. 1,0,1. Over F_(p^n), n > 1: one coefficient list per \
coefficient (constant term first), separated by ';', e.g. '1,0;0,1;1,0'";

const MODULUS_HELP: &str = "Full monic modulus, constant term first (e.g. 2,1,1 for \
T^2 + T + 2). Default: the lexicographically smallest irreducible";

#[derive(Parser, Debug)]
#[command(name = "primpow", version, about = "Primitive elements g of F_q with f(g) a k-th power")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Report all timings as 0 so repeated runs produce identical output.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a primitive g with f(g) a nonzero k-th power (exit 4 if none).
    Verify {
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        n: u32,
        #[arg(short)]
        k: u64,
        #[arg(short, allow_hyphen_values = true, help = F_HELP)]
        f: String,
        #[arg(long, help = MODULUS_HELP)]
        modulus: Option<String>,
    },
    /// Exhaustively search a range of q for quadratics without a witness.
    ///
    /// CSV columns: q, exceptional, witnessless_count, millis. The scan is
    /// limited to q <= 2^20 unless PRIMPOW_QCAP is set.
    Scan {
        #[arg(short)]
        k: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Worker threads (0: available parallelism).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Witnessless polynomials listed per field.
        #[arg(long, default_value_t = counting::DEFAULT_SAMPLE_CAP)]
        cap: usize,
    },
    /// N(t, k): the number of t-free x with f(x) a nonzero k-th power.
    Count {
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        n: u32,
        #[arg(short)]
        t: u64,
        #[arg(short)]
        k: u64,
        #[arg(short, allow_hyphen_values = true, help = F_HELP)]
        f: String,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(long, help = MODULUS_HELP)]
        modulus: Option<String>,
    },
    /// Explicit thresholds and the primorial table.
    #[command(group(ArgGroup::new("mode").required(true).args(["table1", "theorem_a", "theorem_b"])))]
    Bounds {
        /// Worst-case sieve thresholds by number of prime factors.
        #[arg(long)]
        table1: bool,
        /// max(e^(e^3), (2k)^6).
        #[arg(long)]
        theorem_a: bool,
        /// 4 k^2 W(t)^2 (2 + (s - 1)/delta)^2.
        #[arg(long, requires_all = ["wt", "s", "delta"])]
        theorem_b: bool,
        #[arg(short)]
        k: u64,
        #[arg(long)]
        wt: Option<u64>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
    },
    /// Run the invariant checks (exit 3 on the first violation).
    Selftest {
        #[arg(value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
        /// Run a single check by name.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = invariants::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Character,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

enum Failure {
    Usage(String),
    Inconsistent(String),
    NoWitness,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Inconsistent(_) => 3,
            Failure::NoWitness => 4,
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

struct Ctx {
    format: Format,
    no_timing: bool,
    started: Instant,
}

impl Ctx {
    fn millis(&self, m: u64) -> u64 {
        if self.no_timing {
            0
        } else {
            m
        }
    }

    fn elapsed_ms(&self) -> u64 {
        self.millis(self.started.elapsed().as_millis() as u64)
    }

    fn json(&self, command: &str, params: Value, results: Value) {
        let doc = json!({
            "command": command,
            "params": params,
            "results": results,
            "timing_ms": self.elapsed_ms(),
            "version": env!("CARGO_PKG_VERSION"),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Ctx {
        format: cli.format,
        no_timing: cli.no_timing,
        started: Instant::now(),
    };
    let result = match cli.command {
        Command::Verify { p, n, k, f, modulus } => verify(&ctx, p, n, k, &f, modulus.as_deref()),
        Command::Scan {
            k,
            from,
            to,
            workers,
            cap,
        } => scan(&ctx, k, from, to, workers, cap),
        Command::Count {
            p,
            n,
            t,
            k,
            f,
            method,
            modulus,
        } => count(&ctx, p, n, t, k, &f, method, modulus.as_deref()),
        Command::Bounds {
            table1,
            theorem_a,
            k,
            wt,
            s,
            delta,
            ..
        } => {
            if table1 {
                bounds_table1(&ctx, k)
            } else if theorem_a {
                bounds_theorem_a(&ctx, k)
            } else {
                bounds_theorem_b(&ctx, k, wt.unwrap(), s.unwrap(), delta.unwrap())
            }
        }
        Command::Selftest {
            level,
            only,
            seed,
            inject_fault,
        } => selftest(&ctx, level, only.as_deref(), seed, inject_fault),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Inconsistent(msg) => eprintln!("consistency failure: {msg}"),
                Failure::NoWitness => {}
            }
            ExitCode::from(failure.code())
        }
    }
}

fn verify(ctx: &Ctx, p: u64, n: u32, k: u64, f: &str, modulus: Option<&str>) -> Result<(), Failure> {
    let field = input::field(p, n, modulus).map_err(usage)?;
    let poly = input::quadratic(&field, f).map_err(usage)?;
    let witness = counting::find_witness(&field, k, &poly).map_err(usage)?;
    let found = witness.map(|g| {
        let value = poly.eval(&field, g);
        let root = field
            .units()
            .find(|&r| field.pow(r, k) == value)
            .expect("witness value is a k-th power");
        (g, value, root)
    });
    match ctx.format {
        Format::Json => {
            let results = match found {
                Some((g, value, root)) => json!({
                    "witness": field.coeffs(g),
                    "value": field.coeffs(value),
                    "root": field.coeffs(root),
                }),
                None => json!({ "witness": null }),
            };
            ctx.json(
                "verify",
                json!({ "p": p, "n": n, "k": k, "field": field.to_string(), "f": output::poly_json(&field, &poly) }),
                results,
            );
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["q", "k", "witness", "value", "root"]).map_err(usage)?;
            let cells = match found {
                Some((g, value, root)) => [g, value, root].map(|x| field.format_element(x)),
                None => [String::new(), String::new(), String::new()],
            };
            let mut record = vec![field.order().to_string(), k.to_string()];
            record.extend(cells);
            w.write_record(&record).map_err(usage)?;
            w.flush().map_err(usage)?;
        }
        Format::Text => {
            println!("field F_{} ({})", field.order(), field);
            println!("f = {}", poly.format(&field));
            match found {
                Some((g, value, root)) => {
                    println!("witness g = {}", field.format_element(g));
                    println!(
                        "f(g) = {} = ({})^{k}",
                        field.format_element(value),
                        field.format_element(root)
                    );
                }
                None => println!("no witness"),
            }
        }
    }
    if found.is_some() {
        Ok(())
    } else {
        Err(Failure::NoWitness)
    }
}

fn q_cap() -> Result<u64, Failure> {
    match std::env::var("PRIMPOW_QCAP") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("PRIMPOW_QCAP must be a positive integer, got {v:?}"))),
        Err(_) => Ok(counting::DEFAULT_SCAN_CAP),
    }
}

fn scan(ctx: &Ctx, k: u64, from: u64, to: u64, workers: usize, cap: usize) -> Result<(), Failure> {
    let mut config = ScanConfig::new(k, from, to);
    config.workers = workers;
    config.sample_cap = cap;
    config.q_cap = q_cap()?;

    let stdout = std::io::stdout();
    let mut csv_writer = (ctx.format == Format::Csv).then(|| csv::Writer::from_writer(stdout.lock()));
    if let Some(w) = csv_writer.as_mut() {
        w.write_record(["q", "exceptional", "witnessless_count", "millis"])
            .map_err(usage)?;
        w.flush().map_err(usage)?;
    }
    let mut write_error = None;
    let report = counting::scan_exceptional_streaming(&config, |row| {
        let res = match (ctx.format, csv_writer.as_mut()) {
            (Format::Csv, Some(w)) => w
                .write_record([
                    row.q.to_string(),
                    row.exceptional.to_string(),
                    row.witnessless_count.to_string(),
                    ctx.millis(row.millis).to_string(),
                ])
                .and_then(|_| w.flush().map_err(csv::Error::from))
                .map_err(|e| e.to_string()),
            (Format::Text, _) => {
                let mut out = std::io::stdout().lock();
                writeln!(out, "{}", output::scan_row_text(row, ctx.millis(row.millis)))
                    .and_then(|_| out.flush())
                    .map_err(|e| e.to_string())
            }
            _ => Ok(()),
        };
        if let Err(e) = res {
            write_error.get_or_insert(e);
        }
    });
    drop(csv_writer);
    let mut report = report.map_err(usage)?;
    if let Some(e) = write_error {
        return Err(usage(e));
    }
    for row in &mut report.rows {
        row.millis = ctx.millis(row.millis);
    }
    match ctx.format {
        Format::Json => ctx.json(
            "scan",
            json!({ "k": k, "from": from, "to": to, "cap": cap }),
            scan_results(&report),
        ),
        Format::Text => {
            println!(
                "k = {k}, q in [{from}, {to}]: {} fields scanned, exceptional q: {:?}",
                report.fields_scanned(),
                report.exceptional()
            );
            for row in report.rows.iter().filter(|r| r.exceptional) {
                println!("q = {} ({}): {} witnessless", row.q, row.field, row.witnessless_count);
                for f in &row.witnessless_sample {
                    println!("  a = {:?}, b = {:?}, c = {:?}", f.a, f.b, f.c);
                }
            }
        }
        Format::Csv => {}
    }
    Ok(())
}

fn scan_results(report: &ScanReport) -> Value {
    let rows: Vec<Value> = report.rows.iter().map(scan_row_json).collect();
    json!({
        "k": report.k,
        "q_lo": report.q_lo,
        "q_hi": report.q_hi,
        "fields_scanned": report.fields_scanned(),
        "exceptional": report.exceptional(),
        "rows": rows,
    })
}

fn scan_row_json(row: &ScanRow) -> Value {
    json!({
        "q": row.q,
        "p": row.p,
        "n": row.n,
        "field": row.field,
        "exceptional": row.exceptional,
        "polynomials": row.polynomials,
        "witnessless_count": row.witnessless_count,
        "witnessless_sample": row.witnessless_sample,
        "millis": row.millis,
    })
}

#[allow(clippy::too_many_arguments)]
fn count(
    ctx: &Ctx,
    p: u64,
    n: u32,
    t: u64,
    k: u64,
    f: &str,
    method: Method,
    modulus: Option<&str>,
) -> Result<(), Failure> {
    let field = input::field(p, n, modulus).map_err(usage)?;
    let poly = input::quadratic(&field, f).map_err(usage)?;
    let query = CountQuery::new(&field, t, k, poly).map_err(usage)?;
    let direct = matches!(method, Method::Direct | Method::Both).then(|| counting::count_n(&query));
    let character = if matches!(method, Method::Character | Method::Both) {
        let group = CharacterGroup::new(&field).map_err(usage)?;
        match group.n_via_characters(&query) {
            Ok(v) => Some(v),
            Err(e @ CharSumError::NumericConsistency { .. }) => {
                return Err(Failure::Inconsistent(e.to_string()))
            }
            Err(e) => return Err(usage(e)),
        }
    } else {
        None
    };
    match ctx.format {
        Format::Json => ctx.json(
            "count",
            json!({
                "p": p, "n": n, "t": t, "k": k,
                "field": field.to_string(),
                "f": output::poly_json(&field, &poly),
                "method": format!("{method:?}").to_lowercase(),
            }),
            json!({ "direct": direct, "character": character }),
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["q", "t", "k", "direct", "character"]).map_err(usage)?;
            let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                field.order().to_string(),
                t.to_string(),
                k.to_string(),
                opt(direct),
                opt(character),
            ])
            .map_err(usage)?;
            w.flush().map_err(usage)?;
        }
        Format::Text => {
            if let Some(v) = direct {
                println!("direct: {v}");
            }
            if let Some(v) = character {
                println!("character: {v}");
            }
        }
    }
    match (direct, character) {
        (Some(a), Some(b)) if a != b => Err(Failure::Inconsistent(format!(
            "direct count {a} differs from character expansion {b}"
        ))),
        _ => Ok(()),
    }
}

fn bounds_theorem_a(ctx: &Ctx, k: u64) -> Result<(), Failure> {
    let threshold = bounds::theorem_a_threshold(k).map_err(usage)?;
    match ctx.format {
        Format::Json => ctx.json(
            "bounds",
            json!({ "mode": "theorem-a", "k": k }),
            json!({ "threshold": threshold, "display": sig6(threshold) }),
        ),
        Format::Csv => println!("mode,k,threshold\ntheorem-a,{k},{}", sig6(threshold)),
        Format::Text => println!("{}", sig6(threshold)),
    }
    Ok(())
}

fn bounds_theorem_b(ctx: &Ctx, k: u64, wt: u64, s: usize, delta: f64) -> Result<(), Failure> {
    let bound = bounds::theorem_b_bound(k, wt, s, delta).map_err(usage)?;
    match ctx.format {
        Format::Json => ctx.json(
            "bounds",
            json!({ "mode": "theorem-b", "k": k, "wt": wt, "s": s, "delta": delta }),
            json!({ "threshold": bound, "display": sig6(bound) }),
        ),
        Format::Csv => println!("mode,k,wt,s,delta,threshold\ntheorem-b,{k},{wt},{s},{delta},{}", sig6(bound)),
        Format::Text => println!("{}", sig6(bound)),
    }
    Ok(())
}

fn bounds_table1(ctx: &Ctx, k: u64) -> Result<(), Failure> {
    let report = bounds::table1_report(k).map_err(usage)?;
    match ctx.format {
        Format::Json => ctx.json(
            "bounds",
            json!({ "mode": "table1", "k": k }),
            serde_json::to_value(&report).expect("serializable"),
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(output::table1_header()).map_err(usage)?;
            for row in &report.rows {
                w.write_record(output::table1_record(row)).map_err(usage)?;
            }
            w.flush().map_err(usage)?;
        }
        Format::Text => print!("{}", output::table1_text(&report)),
    }
    Ok(())
}

fn selftest(
    ctx: &Ctx,
    level: SelftestLevel,
    only: Option<&str>,
    seed: u64,
    inject_fault: bool,
) -> Result<(), Failure> {
    let names: Vec<&str> = match only {
        Some(name) if invariants::CHECK_NAMES.contains(&name) => vec![name],
        Some(name) => {
            return Err(usage(format!(
                "unknown check {name:?}; available: {}",
                invariants::CHECK_NAMES.join(", ")
            )))
        }
        None => invariants::CHECK_NAMES.to_vec(),
    };
    let level = match level {
        SelftestLevel::Quick => Level::Quick,
        SelftestLevel::Full => Level::Full,
    };
    let fault = inject_fault.then_some(Fault::FlipCharacterExponent);
    let mut passed = Vec::new();
    let mut violation = None;
    for name in names {
        let started = Instant::now();
        match invariants::run_one(name, level, seed, fault).expect("known check") {
            Ok(summary) => {
                let ms = ctx.millis(started.elapsed().as_millis() as u64);
                if ctx.format == Format::Text {
                    println!("PASS {:<26} {:>10} cases {:>7} ms", summary.name, summary.cases, ms);
                }
                passed.push(json!({ "name": summary.name, "cases": summary.cases, "millis": ms }));
            }
            Err(v) => {
                violation = Some(v);
                break;
            }
        }
    }
    match ctx.format {
        Format::Json => ctx.json(
            "selftest",
            json!({ "level": format!("{level:?}").to_lowercase(), "seed": seed, "only": only }),
            json!({
                "passed": passed,
                "violation": violation.as_ref().map(|v| json!({
                    "invariant": v.invariant, "detail": v.detail, "repro": v.repro,
                })),
            }),
        ),
        Format::Csv => {
            println!("name,cases");
            for p in &passed {
                println!("{},{}", p["name"].as_str().unwrap_or_default(), p["cases"]);
            }
        }
        Format::Text => {}
    }
    match violation {
        Some(v) => {
            if ctx.format == Format::Text {
                println!("FAIL {}", v.invariant);
            }
            Err(Failure::Inconsistent(v.to_string()))
        }
        None => Ok(()),
    }
}
