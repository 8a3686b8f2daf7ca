//! `cyclorb`: sectors, Euler invariants and the nonvanishing decision for
//! cyclic orbifold complexes stored as JSON.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal consistency violation.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cyclorb::builders::{self, BuilderSpec, RandomProfile, FIXTURE_NAMES};
use cyclorb::format;
use cyclorb::report::{build_report, digest, Command};
use cyclorb::{OrbifoldComplex, ValidationMode};

/// Optional default for `--out`.
const OUT_DIR_ENV: &str = "CYCLORB_OUT_DIR";

const EXIT_INVALID: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "cyclorb", version, about = "Inertia sectors and Euler invariants of cyclic orbifold complexes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Analysis {
    /// Orbifold files (format version 1). Several files are processed concurrently.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Print the machine-readable report instead of text.
    #[arg(long)]
    json: bool,
    /// Also require a closed pseudomanifold.
    #[arg(long)]
    strict: bool,
    /// Write one `<stem>.report.json` (or `.txt`) per input into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the label axioms.
    Validate(Analysis),
    /// List the sector components and their invariants.
    Sectors(Analysis),
    /// Euler characteristic and Euler–Satake characteristic.
    Euler(Analysis),
    /// Decide whether a nonvanishing vector field exists.
    Decide(Analysis),
    /// Run every verifier.
    Verify(Analysis),
    /// Write a builder output as an orbifold file.
    Gen {
        #[command(subcommand)]
        what: Gen,
        /// Output file or directory; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Write a random valid orbifold file.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 2 or 4.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 64)]
        max_vertices: u32,
        #[arg(long, default_value_t = 6)]
        max_order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// A named fixture, or `all` to write the whole corpus into a directory.
    Fixture { name: String },
    /// Closed surface of the given genus with cone points.
    Surface {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Comma-separated cone orders, each at least 2.
        #[arg(long, value_delimiter = ',')]
        cones: Vec<u32>,
    },
    /// Triangulated circle with one monodromy unit.
    Circle {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        unit: u32,
    },
    /// A JSON builder recipe, e.g. `{"kind":"product_with_manifold", ...}`.
    Spec {
        /// Path to a recipe file, or the recipe itself.
        recipe: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Cmd::Validate(a) => analyze_files(Command::Validate, a),
        Cmd::Sectors(a) => analyze_files(Command::Sectors, a),
        Cmd::Euler(a) => analyze_files(Command::Euler, a),
        Cmd::Decide(a) => analyze_files(Command::Decide, a),
        Cmd::Verify(a) => analyze_files(Command::Verify, a),
        Cmd::Gen { what, out } => generate(what, out_dir(out)),
        Cmd::Random { seed, dim, max_vertices, max_order, out } => {
            let profile = RandomProfile { dim, max_vertices, max_order };
            let name = format!("random_d{dim}_s{seed}");
            emit(&name, builders::random_orbifold(seed, &profile), out_dir(out).as_deref())
        }
    }
}

fn out_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

/// What one input produced: text for stdout, diagnostics for stderr.
struct Outcome {
    stdout: String,
    stderr: String,
    code: u8,
}

fn analyze_one(command: Command, path: &Path, json: bool, mode: ValidationMode) -> Outcome {
    let fail = |msg: String| Outcome { stdout: String::new(), stderr: msg, code: EXIT_INVALID };
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return fail(format!("error: {}: {e}\n", path.display())),
    };
    let text = match std::str::from_utf8(&bytes) {
        Ok(t) => t,
        Err(e) => return fail(format!("error: {}: not UTF-8: {e}\n", path.display())),
    };
    let oc = match format::parse_str(text) {
        Ok(oc) => oc,
        Err(e) => return fail(format!("error: {}: {e}\n", path.display())),
    };
    match build_report(command, digest(&bytes), &oc, mode) {
        Ok(report) => {
            let code = report.exit_code() as u8;
            let stdout = if json { report.to_json() } else { render::text(&report) };
            Outcome { stdout, stderr: render::diagnostics(path, &report), code }
        }
        Err(e) => fail(format!("error: {}: {e}\n", path.display())),
    }
}

fn analyze_files(command: Command, args: Analysis) -> u8 {
    let mode = if args.strict { ValidationMode::Strict } else { ValidationMode::Lax };
    let outcomes: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .files
            .iter()
            .map(|path| scope.spawn(move || analyze_one(command, path, args.json, mode)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let out = out_dir(args.out);
    let many = args.files.len() > 1;
    let mut code = 0;
    for (path, outcome) in args.files.iter().zip(outcomes) {
        eprint!("{}", outcome.stderr);
        code = code.max(outcome.code);
        if outcome.stdout.is_empty() {
            continue;
        }
        match &out {
            Some(dir) => {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let ext = if args.json { "report.json" } else { "report.txt" };
                let target = dir.join(format!("{stem}.{ext}"));
                if let Err(e) = std::fs::create_dir_all(dir).and_then(|()| std::fs::write(&target, &outcome.stdout)) {
                    eprintln!("error: {}: {e}", target.display());
                    code = code.max(EXIT_INVALID);
                }
            }
            None if many && args.json => {
                // one report per line
                let value: serde_json::Value = serde_json::from_str(&outcome.stdout).expect("report is JSON");
                println!("{value}");
            }
            None if many => print!("== {}\n{}", path.display(), outcome.stdout),
            None => print!("{}", outcome.stdout),
        }
    }
    code
}

fn emit(name: &str, built: cyclorb::Result<OrbifoldComplex>, out: Option<&Path>) -> u8 {
    let oc = match built {
        Ok(oc) => oc,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let text = format::to_json(&oc);
    let Some(out) = out else {
        print!("{text}");
        return 0;
    };
    let target = if out.is_dir() || out.extension().is_none() {
        out.join(format!("{name}.json"))
    } else {
        out.to_path_buf()
    };
    let written = target
        .parent()
        .map_or(Ok(()), |p| if p.as_os_str().is_empty() { Ok(()) } else { std::fs::create_dir_all(p) })
        .and_then(|()| std::fs::write(&target, text));
    match written {
        Ok(()) => {
            eprintln!("wrote {}", target.display());
            0
        }
        Err(e) => {
            eprintln!("error: {}: {e}", target.display());
            EXIT_INVALID
        }
    }
}

fn generate(what: Gen, out: Option<PathBuf>) -> u8 {
    match what {
        Gen::Fixture { name } if name == "all" => {
            let Some(dir) = out else {
                eprintln!("error: `gen fixture all` needs --out DIR");
                return EXIT_INVALID;
            };
            FIXTURE_NAMES.iter().map(|n| emit(n, builders::fixture(n), Some(&dir))).max().unwrap_or(0)
        }
        Gen::Fixture { name } => emit(&name, builders::fixture(&name), out.as_deref()),
        Gen::Surface { genus, cones } => {
            let name = format!("surface_g{genus}");
            emit(&name, builders::surface_orbifold(genus, &cones), out.as_deref())
        }
        Gen::Circle { order, unit } => {
            emit(&format!("circle_{order}_{unit}"), builders::circle_with_monodromy(order, unit), out.as_deref())
        }
        Gen::Spec { recipe } => {
            let text = if Path::new(&recipe).is_file() {
                match std::fs::read_to_string(&recipe) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {recipe}: {e}");
                        return EXIT_INVALID;
                    }
                }
            } else {
                recipe
            };
            let built = serde_json::from_str::<BuilderSpec>(&text).map_err(cyclorb::Error::from).and_then(|s| s.build());
            emit("spec", built, out.as_deref())
        }
    }
}
