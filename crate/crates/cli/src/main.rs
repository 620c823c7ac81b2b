use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ehrhard::catalog::{self, CatalogReport};
use ehrhard::connectedness::{brute_force_disconnects, essentially_disconnects, PartitionCertificate};
use ehrhard::rigidity::{self, exhaustive_search, rigidity_verdict, rigidity_verdict_planar, DEFAULT_MAX_CELLS};
use ehrhard::{random, render, sweep, CellId, ColumnarSet, Execution, ExtReal, Profile, Scene};

#[derive(Parser)]
#[command(name = "ehrhard", version, about = "Gaussian symmetrization, perimeter and rigidity of equality cases")]
struct Cli {
    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (or file for single-document commands).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Gauss,
    Lebesgue,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ehrhard,
    Steiner,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Theorem,
    Planar,
    Search,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian tail Φ(x).
    Phi {
        #[arg(allow_hyphen_values = true)]
        x: f64,
    },
    /// Inverse tail Ψ(p).
    Psi {
        #[arg(allow_hyphen_values = true)]
        p: f64,
    },
    /// Perimeter of a columnar set.
    Perimeter {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum, default_value = "gauss")]
        measure: Measure,
        #[arg(long)]
        breakdown: bool,
    },
    /// Ehrhard or Steiner symmetral of a columnar set.
    Symmetrize {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum, default_value = "ehrhard")]
        mode: Mode,
    },
    /// Rigidity verdict of a profile.
    Rigidity {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "theorem")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: usize,
    },
    /// Reflect a profile over one side of a partition and verify the result.
    Counterexample {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Essential connectedness of a scene or of the scene of a profile.
    Connectedness {
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        scene: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        brute_force: bool,
    },
    /// Run a catalog entry (or `all`) and write JSON, CSV and SVG.
    Catalog {
        name: String,
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Resolution sweep of a catalog family as CSV.
    Sweep {
        family: String,
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<f64>>,
    },
    /// SVG of a set or of a profile's base scene.
    Render {
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        set: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, requires = "profile")]
        partition: Option<PathBuf>,
    },
    /// Randomized cross-check of the rigidity theorem against exhaustive search.
    Suite {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        max_g: usize,
    },
}

enum Failure {
    Usage(String),
    Assertion,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, value: &impl serde::Serialize) -> Outcome {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn parse_partition(p: &Profile, value: &Value) -> Result<PartitionCertificate, Failure> {
    let ids = |key: &str| -> Result<Option<Vec<CellId>>, Failure> {
        match value.get(key) {
            None => Ok(None),
            Some(v) => Ok(Some(serde_json::from_value(v.clone())?)),
        }
    };
    let minus = ids("minus")?.ok_or_else(|| Failure::Usage("partition needs a `minus` list".into()))?;
    let plus = match ids("plus")? {
        Some(plus) => plus,
        None => p.g_cells().into_iter().filter(|c| !minus.contains(c)).collect(),
    };
    Ok(PartitionCertificate::evaluate(&p.scene(), &plus, &minus)?)
}

fn catalog_files(dir: &Path, report: &CatalogReport) -> Outcome {
    fs::create_dir_all(dir)?;
    let base = dir.join(&report.name);
    fs::write(base.with_extension("json"), serde_json::to_string_pretty(report)? + "\n")?;
    let rows = if report.sweep.is_empty() {
        sweep::sweep(&report.name, &[report.resolution])?
    } else {
        report.sweep.clone()
    };
    fs::write(base.with_extension("csv"), sweep::to_csv(&rows))?;
    let cert = report.report.counterexample.as_deref().map(|c| &c.certificate);
    fs::write(base.with_extension("svg"), render::render_scene(&report.profile, cert))?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = &cli.out;
    match cli.command {
        Command::Phi { x } => emit(out, &format!("{:e}\n", ehrhard::phi(ExtReal::new(x)?))),
        Command::Psi { p } => emit(out, &format!("{:e}\n", ehrhard::psi(p)?.value())),
        Command::Perimeter { set, measure, breakdown } => {
            let e: ColumnarSet = read(&set)?;
            let (name, total) = match measure {
                Measure::Gauss => ("gauss", e.gauss_perimeter()),
                Measure::Lebesgue => ("lebesgue", e.lebesgue_perimeter()),
            };
            let mut v = json!({ "measure": name, "perimeter": total });
            if breakdown {
                v["breakdown"] = serde_json::to_value(e.perimeter())?;
            }
            emit_json(out, &v)
        }
        Command::Symmetrize { set, mode } => {
            let e: ColumnarSet = read(&set)?;
            let s = match mode {
                Mode::Ehrhard => e.ehrhard_symmetral(),
                Mode::Steiner => e.steiner_symmetral(),
            };
            emit_json(out, &s)
        }
        Command::Rigidity { profile, method, max_cells } => {
            let p: Profile = read(&profile)?;
            let report = match method {
                Method::Theorem => rigidity_verdict(&p),
                Method::Planar => rigidity_verdict_planar(&p)?,
                Method::Search => exhaustive_search(
                    &p,
                    max_cells,
                    cli.tolerance.unwrap_or(rigidity::SEARCH_TOLERANCE),
                    Execution::default(),
                )?,
            };
            emit_json(out, &report)
        }
        Command::Counterexample { profile, partition } => {
            let p: Profile = read(&profile)?;
            let cert = parse_partition(&p, &read::<Value>(&partition)?)?;
            let ce = rigidity::counterexample(&p, cert)?;
            let tol = cli.tolerance.unwrap_or(rigidity::VERIFY_TOLERANCE);
            let verification = rigidity::verify_equality_case(&ce.set, &p, tol)?;
            let pass = ce.perimeter.difference.abs() <= tol && ce.symdiff.nontrivial();
            emit_json(out, &json!({ "equality": pass, "counterexample": ce, "verification": verification }))?;
            if pass {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
        Command::Connectedness { scene, profile, brute_force } => {
            let scene = match (scene, profile) {
                (Some(s), _) => Scene::from_json(&fs::read_to_string(&s)?)?,
                (None, Some(p)) => read::<Profile>(&p)?.scene(),
                (None, None) => unreachable!("clap requires one of the inputs"),
            };
            let d = essentially_disconnects(&scene);
            let mut v = serde_json::to_value(&d)?;
            if brute_force {
                let bf = brute_force_disconnects(&scene)?;
                v["brute_force"] = json!({ "disconnects": bf.is_some(), "agrees": bf.is_some() == d.disconnects, "witness": bf });
            }
            emit_json(out, &v)
        }
        Command::Catalog { name, resolution } => {
            let names: Vec<&str> = if name == "all" {
                if resolution.is_some() {
                    return Err(Failure::Usage("--resolution applies to a single entry".into()));
                }
                catalog::NAMES.to_vec()
            } else {
                vec![name.as_str()]
            };
            let dir = out.clone().unwrap_or_else(|| PathBuf::from("."));
            let mut all_pass = true;
            for n in names {
                let report = catalog::run(n, resolution)?;
                catalog_files(&dir, &report)?;
                for c in &report.checks {
                    println!("{} {}:{} {}", if c.pass { "PASS" } else { "FAIL" }, report.name, c.name, c.detail);
                }
                all_pass &= report.passed();
            }
            if all_pass {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
        Command::Sweep { family, resolutions } => {
            let hs = match resolutions {
                Some(hs) => hs,
                None => sweep::default_resolutions(&family)?,
            };
            emit(out, &sweep::to_csv(&sweep::sweep(&family, &hs)?))
        }
        Command::Render { set, profile, partition } => {
            let svg = match (set, profile) {
                (Some(s), _) => render::render_set(&read::<ColumnarSet>(&s)?),
                (None, Some(p)) => {
                    let p: Profile = read(&p)?;
                    let cert = match partition {
                        Some(path) => Some(parse_partition(&p, &read::<Value>(&path)?)?),
                        None => None,
                    };
                    render::render_scene(&p, cert.as_ref())
                }
                (None, None) => unreachable!("clap requires one of the inputs"),
            };
            emit(out, &svg)
        }
        Command::Suite { count, max_g } => {
            let tol = cli.tolerance.unwrap_or(rigidity::SEARCH_TOLERANCE);
            let mut rng = random::rng(cli.seed);
            let mut mismatches = 0usize;
            for k in 0..count {
                let p = random::profile_1d(&mut rng, 12, max_g, 0.2);
                let theorem = rigidity_verdict(&p);
                let search = exhaustive_search(&p, max_g, tol, Execution::default())?;
                if theorem.verdict != search.verdict {
                    mismatches += 1;
                    eprintln!("mismatch at #{k}: {}", serde_json::to_string(&p)?);
                }
            }
            println!("{} {count} profiles, {mismatches} mismatches (seed {})", if mismatches == 0 { "PASS" } else { "FAIL" }, cli.seed);
            if mismatches == 0 {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
