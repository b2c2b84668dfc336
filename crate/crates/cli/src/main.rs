//! `nsys`: validate, analyze and draw n-systems from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails,
//! and 2 for usage, input or parse errors.

#![allow(clippy::result_large_err)]

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nsystems::cex_min::{self, build_min_instance};
use nsystems::cex_nsa::{self, build_nsa_instance};
use nsystems::hull::{extreme_points, hull_contains, normalize, SimplexPoint};
use nsystems::io::{emit_linear_map, emit_spectrum_point, emit_system, parse_class, parse_linear_map, parse_system};
use nsystems::rational::{parse_rational, Rational};
use nsystems::render::{render_combined_graph, RenderSpec};
use nsystems::sim::{sample_spectrum, GenerationPolicy, SystemKind};
use nsystems::spectrum::{mu_estimate, mu_exact};
use nsystems::validate::{division_numbers, switch_numbers, validate, SystemClass};
use nsystems::{LinearMap, Report, System};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nsys", version, about = "Exact n-systems, spectra and counter-examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system file against the axioms of a system class.
    Validate {
        system: PathBuf,
        /// exact, generalized or rigid:<mesh>; defaults to the class stored
        /// with a self-similar system, else generalized.
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Spectrum value of a system under a linear map: exact for self-similar
    /// systems, a windowed estimate otherwise.
    Mu {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "1/2")]
        tail: String,
    },
    /// Extreme points of normalized vectors, with optional membership queries.
    Hull {
        /// JSON list of nonnegative ascending vectors of rational strings.
        points: PathBuf,
        /// Comma-separated vector to test for membership; repeatable.
        #[arg(long)]
        query: Vec<String>,
    },
    /// Verify the coordinate-wise minimum counter-example.
    VerifyMin {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        json: bool,
    },
    /// Verify the family f_m and the isolated spectrum values.
    VerifyNsa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
        #[arg(long)]
        json: bool,
    },
    /// List (1 + alpha^m beta)^-1 for m = 1..m_max with their exact check.
    #[command(name = "enumerate-E")]
    EnumerateE {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
    },
    /// Estimate spectrum points of random systems; one JSON line per point.
    Sample {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "1/2")]
        tail: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 3.0)]
        mean_move: f64,
        #[arg(long, value_enum, default_value_t = Kind::Rigid)]
        kind: Kind,
    },
    /// Draw the combined graph of a system as SVG.
    Render {
        #[command(flatten)]
        source: Source,
        /// Start of the drawn range; defaults to q_0.
        #[arg(long)]
        from: Option<String>,
        /// End of the drawn range; defaults to the end of the stored path.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 500)]
        height: u32,
        #[arg(long)]
        no_labels: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the document of a built-in system or map.
    Emit {
        /// r:<alpha>, s:<beta>, f:<n>,<alpha>,<m>, f-switch:<n>,<alpha>,<m>,
        /// min-map:<alpha>,<beta>, nsa-map:<n>,<alpha> or sum:<n>
        preset: String,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    system: Option<PathBuf>,
    /// A built-in system, as accepted by `emit`.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rigid,
    Generalized,
}

fn input<T>(r: nsystems::Result<T>, what: &str) -> Result<T> {
    r.with_context(|| what.to_string())
}

fn rational(s: &str, name: &str) -> Result<Rational> {
    input(parse_rational(s), &format!("--{name}"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_system(path: &Path) -> Result<System> {
    let text = read(path)?;
    input(parse_system(&text), &path.display().to_string())
}

fn load_map(path: &Path) -> Result<LinearMap> {
    let text = read(path)?;
    input(parse_linear_map(&text), &path.display().to_string())
}

enum Preset {
    System(System),
    Map(LinearMap),
}

fn preset(spec: &str) -> Result<Preset> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("preset {spec:?} has no ':'"))?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(anyhow!("preset {kind} takes {k} argument(s)"))
        }
    };
    let count = |s: &str| -> Result<usize> {
        s.parse::<usize>().with_context(|| format!("{s:?} is not a count"))
    };
    Ok(match kind {
        "r" => {
            arity(1)?;
            Preset::System(input(cex_min::system_r(&rational(args[0], "alpha")?), "R")?.into())
        }
        "s" => {
            arity(1)?;
            Preset::System(input(cex_min::system_s(&rational(args[0], "beta")?), "S")?.into())
        }
        "f" | "f-switch" => {
            arity(3)?;
            let inst = input(build_nsa_instance(count(args[0])?, &rational(args[1], "alpha")?), "f")?;
            let m = u32::try_from(count(args[2])?)?;
            let sys = if kind == "f" {
                cex_nsa::build_f(&inst, m)
            } else {
                cex_nsa::build_f_from_switch(&inst, m)
            };
            Preset::System(input(sys, "f")?.into())
        }
        "min-map" => {
            arity(2)?;
            let inst = input(
                build_min_instance(&rational(args[0], "alpha")?, &rational(args[1], "beta")?),
                "min-map",
            )?;
            Preset::Map(inst.t)
        }
        "nsa-map" => {
            arity(2)?;
            let inst = input(build_nsa_instance(count(args[0])?, &rational(args[1], "alpha")?), "nsa-map")?;
            Preset::Map(inst.t)
        }
        "sum" => {
            arity(1)?;
            Preset::Map(LinearMap::coordinate_sum(count(args[0])?))
        }
        other => bail!("unknown preset {other:?}"),
    })
}

fn preset_system(spec: &str) -> Result<System> {
    match preset(spec)? {
        Preset::System(s) => Ok(s),
        Preset::Map(_) => bail!("preset {spec:?} is a map, not a system"),
    }
}

fn print_report(report: &Report, json: bool) -> bool {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        println!("{report}");
    }
    report.passed()
}

fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| rational(t, "query"))
        .collect()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate { system, class, json } => {
            let sys = load_system(&system)?;
            let class = match (class, &sys) {
                (Some(c), _) => input(parse_class(&c), "--class")?,
                (None, System::SelfSimilar(s)) => s.class().clone(),
                (None, System::Path(_)) => SystemClass::GeneralizedNSystem,
            };
            let path = match &sys {
                System::Path(p) => p.clone(),
                System::SelfSimilar(s) => s.unroll(2),
            };
            let report = input(validate(&path, &class), "validation")?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("class: {class}");
                print!("{report}");
                if report.valid() || class != SystemClass::GeneralizedNSystem {
                    if let (Ok(div), Ok(sw)) = (division_numbers(&path), switch_numbers(&path)) {
                        let show = |v: Vec<Rational>| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                        println!("division numbers: {}", show(div));
                        println!("switch numbers: {}", show(sw));
                    }
                }
            }
            Ok(report.valid())
        }
        Command::Mu { map, system, tail } => {
            let t = load_map(&map)?;
            let sys = load_system(&system)?;
            let point = match &sys {
                System::SelfSimilar(s) => input(mu_exact(&t, s), "mu")?,
                System::Path(p) => input(mu_estimate(&t, p, &rational(&tail, "tail")?), "mu")?,
            };
            println!("{}", emit_spectrum_point(&point));
            Ok(true)
        }
        Command::Hull { points, query } => {
            let text = read(&points)?;
            let raw: Vec<Vec<String>> = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", points.display()))?;
            let pts = raw
                .iter()
                .map(|v| {
                    let v = v.iter().map(|s| rational(s, "points")).collect::<Result<Vec<_>>>()?;
                    input(normalize(&v), "points")
                })
                .collect::<Result<Vec<SimplexPoint>>>()?;
            if pts.is_empty() {
                bail!("no points given");
            }
            let ext = extreme_points(&pts);
            println!("extreme points ({} of {}):", ext.len(), pts.len());
            for p in &ext {
                println!("  {p}");
            }
            for q in query {
                let x = input(normalize(&parse_vector(&q)?), "--query")?;
                println!("{x} in hull: {}", hull_contains(&ext, &x));
            }
            Ok(true)
        }
        Command::VerifyMin { alpha, beta, json } => {
            let inst = input(
                build_min_instance(&rational(&alpha, "alpha")?, &rational(&beta, "beta")?),
                "instance",
            )?;
            let mut report = Report::new(format!("coordinate-wise minimum counter-example (alpha = {alpha}, beta = {beta})"));
            report.merge(input(cex_min::verify_corollary_values(&inst), "values")?);
            report.merge(cex_min::verify_halfspace_rep(&inst));
            report.merge(cex_min::check_kappa_generator_bounds(&inst));
            Ok(print_report(&report, json))
        }
        Command::VerifyNsa { n, alpha, m_max, json } => {
            let inst = input(build_nsa_instance(n, &rational(&alpha, "alpha")?), "instance")?;
            let report = input(cex_nsa::verify_nsa(&inst, m_max), "verification")?;
            Ok(print_report(&report, json))
        }
        Command::EnumerateE { n, alpha, m_max } => {
            let inst = input(build_nsa_instance(n, &rational(&alpha, "alpha")?), "instance")?;
            let values = input(cex_nsa::enumerate_e(&inst, m_max), "enumerate")?;
            let check = input(cex_nsa::verify_spectrum_values(&inst, m_max), "spectrum")?;
            for (m, (v, c)) in values.iter().zip(&check.checks).enumerate() {
                println!(
                    "{{\"m\": {}, \"value\": \"{v}\", \"matches_spectrum\": {}}}",
                    m + 1,
                    c.passed
                );
            }
            println!("{{\"limit\": \"0\"}}");
            let isolation = cex_nsa::check_isolation(&values);
            Ok(check.passed() && isolation.passed())
        }
        Command::Sample { map, n, delta, count, seed, tail, steps, mean_move, kind } => {
            let t = load_map(&map)?;
            let policy = input(
                GenerationPolicy::new(n, rational(&delta, "delta")?, steps, seed)
                    .and_then(|p| p.with_mean_move(mean_move)),
                "policy",
            )?;
            let kind = match kind {
                Kind::Rigid => SystemKind::Rigid,
                Kind::Generalized => SystemKind::Generalized,
            };
            let points = input(
                sample_spectrum(&t, &policy, kind, count, &rational(&tail, "tail")?),
                "sampling",
            )?;
            let mut out = String::new();
            for p in &points {
                out.push_str(&emit_spectrum_point(p));
                out.push('\n');
            }
            print!("{out}");
            Ok(true)
        }
        Command::Render { source, from, to, width, height, no_labels, out } => {
            let sys = match (source.system, source.preset) {
                (Some(path), _) => load_system(&path)?,
                (None, Some(p)) => preset_system(&p)?,
                (None, None) => unreachable!("clap enforces one source"),
            };
            let lo = match from {
                Some(s) => rational(&s, "from")?,
                None => sys.path().start().clone(),
            };
            let hi = match to {
                Some(s) => rational(&s, "to")?,
                None => sys.path().end().clone(),
            };
            let mut spec = RenderSpec::new(lo, hi);
            spec.width = width;
            spec.height = height;
            spec.label_division = !no_labels;
            spec.label_switch = !no_labels;
            let svg = input(render_combined_graph(&sys, &spec), "render")?;
            match out {
                Some(path) => std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{svg}"),
            }
            Ok(true)
        }
        Command::Emit { preset: spec } => {
            match preset(&spec)? {
                Preset::System(s) => print!("{}", emit_system(&s)),
                Preset::Map(t) => print!("{}", emit_linear_map(&t)),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
