use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cocycle::cohomology::GammaGroup;
use cocycle::etale::{classify_etale, realize_over_fq};
use cocycle::field::FqTower;
use cocycle::galois_linear::{classify_forms, hilbert90_verify, sl_h1_verify};
use cocycle::io::{self, ActionSpec, GroupSpec, TensorSpec};
use cocycle::limits::{set_limits, Limits};
use cocycle::quad::{verify_units_iso, QuadRing};
use cocycle::verify::run_suite;
use cocycle::Error;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cocycle",
    version,
    about = "Non-abelian group cohomology of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_group_order: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..))]
    max_field: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H^1 of a Γ-group, and H^2 when a central subgroup is given.
    H1 {
        #[arg(long)]
        input: PathBuf,
    },
    /// Étale algebras of dimension m with Galois group Γ.
    Etale {
        /// Group file; alternatively use --group.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Named family, e.g. `cyclic:4`.
        #[arg(long, conflicts_with = "input")]
        group: Option<String>,
        #[arg(long)]
        m: usize,
        /// `p,d,n` for realizations over F_(p^(dn)) / F_(p^d).
        #[arg(long)]
        tower: Option<String>,
    },
    /// Hilbert 90 for GL_m (or SL_m) over F_(p^(dn)) / F_(p^d).
    Hilbert90 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        special: bool,
    },
    /// K/k-forms of a tensor.
    Forms {
        #[arg(long)]
        input: PathBuf,
    },
    /// Units isomorphism for Q(sqrt(-d)).
    Quad {
        #[arg(long)]
        d: u64,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Input(String),
    Limit(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => Failure::Limit(e.to_string()),
            Error::BijectionFailure(_)
            | Error::ExactnessFailure { .. }
            | Error::DimensionFailure { .. }
            | Error::CounterexampleFound(_)
            | Error::MatchFailure(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A report: a JSON object for `--format json` and its row list for TSV.
struct Report {
    body: Value,
    rows: Vec<Value>,
    passed: bool,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_tower(text: &str) -> Result<FqTower, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Result<Vec<u64>, _> = parts.iter().map(|s| s.parse::<u64>()).collect();
    match nums.as_deref() {
        Ok([p, d, n]) => Ok(FqTower::new(*p, *d as usize, *n as usize)?),
        _ => Err(Failure::Input(format!("tower must be p,d,n; got {text:?}"))),
    }
}

fn parse_family(text: &str) -> Result<GroupSpec, Failure> {
    let (family, n) = text
        .split_once(':')
        .ok_or_else(|| Failure::Input(format!("group must be family:n; got {text:?}")))?;
    let n = n
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("bad group parameter in {text:?}")))?;
    Ok(GroupSpec::Family {
        family: family.trim().to_string(),
        n,
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::H1 { input } => {
            let spec: ActionSpec = io::parse(&read(input)?)?;
            let g: GammaGroup = spec.build()?;
            let h1 = g.h1()?;
            let mut body = io::h1_json(&h1);
            if let Some(ext) = spec.build_extension()? {
                let delta = ext.exactness_check(cli.seed)?;
                body["h2"] = io::h2_json(&ext, &delta);
            }
            let rows = h1
                .representatives()
                .iter()
                .enumerate()
                .map(|(i, r)| json!({"class": i, "representative": r, "distinguished": i == h1.distinguished()}))
                .collect();
            Ok(Report {
                body,
                rows,
                passed: true,
            })
        }
        Command::Etale {
            input,
            group,
            m,
            tower,
        } => {
            let spec: GroupSpec = match (input, group) {
                (Some(path), _) => io::parse(&read(path)?)?,
                (None, Some(text)) => parse_family(text)?,
                (None, None) => return Err(Failure::Input("give --input or --group".into())),
            };
            let gamma = spec.build()?;
            let tower = tower.as_deref().map(parse_tower).transpose()?;
            let classes = classify_etale(&gamma, *m)?;
            let mut rows = Vec::with_capacity(classes.len());
            for class in &classes {
                let algebra = match &tower {
                    Some(t) => Some(realize_over_fq(t, class)?),
                    None => None,
                };
                rows.push(io::etale_json(class, algebra.as_ref())?);
            }
            Ok(Report {
                body: json!({"m": m, "classes": rows}),
                rows,
                passed: true,
            })
        }
        Command::Hilbert90 {
            p,
            d,
            n,
            m,
            special,
        } => {
            let tower = FqTower::new(*p, *d, *n)?;
            let r = if *special {
                sl_h1_verify(&tower, *m)?
            } else {
                hilbert90_verify(&tower, *m)?
            };
            let body = io::hilbert90_json(&tower, &r);
            Ok(Report {
                rows: vec![body.clone()],
                body,
                passed: r.passed(),
            })
        }
        Command::Forms { input } => {
            let spec: TensorSpec = io::parse(&read(input)?)?;
            let (tower, tau) = spec.build()?;
            let r = classify_forms(&tower, &tau)?;
            let body = io::forms_json(&tower, &r);
            let rows = body["classes"].as_array().cloned().unwrap_or_default();
            Ok(Report {
                body,
                rows,
                passed: r.direct_count() == r.cohomological_count(),
            })
        }
        Command::Quad { d } => {
            let r = verify_units_iso(&QuadRing::new(*d)?)?;
            let body = io::units_json(&r);
            let rows = body["witnesses"].as_array().cloned().unwrap_or_default();
            Ok(Report {
                body,
                rows,
                passed: r.matched,
            })
        }
        Command::Verify { suite } => {
            let cases = run_suite(suite, cli.seed)?;
            for c in &cases {
                eprintln!(
                    "{}\t{}\t{:.3} ms",
                    c.suite,
                    c.case,
                    c.elapsed.as_secs_f64() * 1e3
                );
            }
            for c in cases.iter().filter(|c| !c.passed) {
                eprintln!(
                    "FAILED {} / {}: {}",
                    c.suite,
                    c.case,
                    c.error.as_deref().unwrap_or("counts disagree")
                );
            }
            let rows: Vec<Value> = cases.iter().map(|c| c.to_json()).collect();
            let passed = cases.iter().all(|c| c.passed);
            let failed = cases.iter().filter(|c| !c.passed).count();
            let body = json!({"suite": suite, "cases": rows, "total": cases.len(), "failed": failed, "passed": passed});
            Ok(Report { body, rows, passed })
        }
    }
}

fn render(cli: &Cli, report: &Report) -> String {
    match cli.format {
        Format::Json => {
            let mut body = report.body.clone();
            body["seed"] = json!(cli.seed);
            let mut text = serde_json::to_string_pretty(&body).expect("serializable");
            text.push('\n');
            text
        }
        Format::Tsv => format!("# seed\t{}\n{}", cli.seed, io::to_tsv(&report.rows)),
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
    let mut limits = Limits::default();
    if let Some(n) = cli.max_group_order {
        limits.max_group_order = usize::try_from(n).unwrap_or(usize::MAX);
    }
    if let Some(n) = cli.max_field {
        limits.max_field = n;
    }
    limits.seed = cli.seed;
    set_limits(limits.with_env());
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            return ExitCode::from(3);
        }
    };
    let text = render(&cli, &report);
    let written = match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
