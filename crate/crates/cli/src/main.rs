use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qrigid::bending::{bent_rep, hull_classify, Lamination};
use qrigid::cohomology::{cup_gram, AdjointCohomology, CochainComplex, Cocycle, ModuleBlock};
use qrigid::config::Config;
use qrigid::isometry::classify;
use qrigid::json::{parse_hmatrix, parse_json};
use qrigid::qcore::Arith;
use qrigid::surfrep::{fuchsian_so21_rep, fuchsian_su11_rep, SurfaceRep};
use qrigid::verify::run_suite;
use qrigid::weights::{weights_report, weights_report_json};
use qrigid::{sample, Error, Result};

#[derive(Parser)]
#[command(name = "qrigid", version, about = "Sp(2,1) surface-group deformation toolkit")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// `exact` or `float`.
    #[arg(long, global = true, value_parser = parse_arith)]
    arith: Option<Arith>,
    /// JSON file with `arith`, `tol`, `seed`; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite (`all` runs every suite).
    Verify { suite: String },
    /// Classify each generator image of a representation, or a single matrix.
    Classify { file: PathBuf },
    /// Cohomology dimensions with coefficients in a block of sp(2,1).
    Cohomology {
        rep: PathBuf,
        /// all, sp1, sp11, h2, w or trivial.
        #[arg(long, default_value = "all")]
        block: String,
    },
    /// Correct a random ℍ²-block class to an unobstructed one.
    Flex { rep: PathBuf },
    /// Closure dimension and hull kind of a representation.
    Hull { rep: PathBuf },
    /// Bend a representation along a lamination and report the hull.
    Bend {
        rep: PathBuf,
        lamination: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact weight computation for sp(4,ℂ) → so(5,ℂ).
    Weights,
    /// Write a built-in Fuchsian representation.
    Rep {
        /// su11 or so21.
        #[arg(long, default_value = "su11")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        genus: usize,
    },
}

fn parse_arith(s: &str) -> std::result::Result<Arith, String> {
    match s {
        "exact" => Ok(Arith::Exact),
        "float" => Ok(Arith::Float),
        _ => Err(format!("expected 'exact' or 'float', got '{s}'")),
    }
}

/// Result of a subcommand: a report plus whether every check in it passed.
struct Outcome {
    report: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn data(report: Value) -> Outcome {
        let text = serde_json::to_string_pretty(&report).expect("serializable");
        Outcome { report, text, ok: true }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

fn read_rep(path: &Path) -> Result<SurfaceRep> {
    SurfaceRep::from_json(&read_json(path)?)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let base = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let cfg = base.with_overrides(cli.arith, cli.tol, cli.seed)?;
    match &cli.command {
        Command::Verify { suite } => {
            let r = run_suite(suite, &cfg)?;
            Ok(Outcome { report: r.to_json(), text: r.to_text(), ok: r.passed() })
        }
        Command::Classify { file } => {
            let v = read_json(file)?;
            if v.get("images").is_some() {
                let rep = SurfaceRep::from_json(&v)?;
                let mut out = serde_json::Map::new();
                for (k, m) in rep.images.iter().enumerate() {
                    out.insert(qrigid::surfrep::gen_name(k), serde_json::to_value(classify(m)?).expect("serializable"));
                }
                Ok(Outcome::data(json!({ "classes": out })))
            } else {
                let m = parse_hmatrix(&v)?;
                Ok(Outcome::data(serde_json::to_value(classify(&m)?).expect("serializable")))
            }
        }
        Command::Cohomology { rep, block } => {
            let rep = read_rep(rep)?;
            let block = ModuleBlock::parse(block)?;
            let cc = CochainComplex::for_rep(&rep, block)?;
            let (h0, h1, h2) = cc.dims();
            let gram = cup_gram(&cc);
            Ok(Outcome::data(json!({
                "block": block.name(),
                "coefficient_dim": cc.dim(),
                "h0": h0, "h1": h1, "h2": h2,
                "euler": cc.euler(),
                "d1_d0_residual": cc.d1_d0_residual(),
                "cup_gram": gram.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
            })))
        }
        Command::Flex { rep } => {
            let rep = read_rep(rep)?;
            let coh = AdjointCohomology::new(&rep)?;
            let basis = CochainComplex::for_rep(&rep, ModuleBlock::H2)?.h1_basis();
            let mut r = sample::rng(cfg.seed);
            let u = basis.iter().fold(Cocycle::zeros(8, rep.num_generators()), |acc, b| acc.add(&b.scale(sample::sym(&mut r))));
            let res = coh.flex_deform(&u)?;
            let ok = res.cup_x.norm() < 1e-8 && res.h2_component > 1e-6;
            let report = json!({
                "cup_u_norm": res.cup_u.norm(),
                "cup_x_norm": res.cup_x.norm(),
                "h2_component": res.h2_component,
                "x": res.x.data.iter().copied().collect::<Vec<f64>>(),
                "pass": ok,
            });
            Ok(Outcome { ok, ..Outcome::data(report) })
        }
        Command::Hull { rep } => Ok(Outcome::data(hull_classify(&read_rep(rep)?)?.to_json())),
        Command::Bend { rep, lamination, out } => {
            let rep = read_rep(rep)?;
            let lam = Lamination::from_json(&read_json(lamination)?)?;
            let bent = bent_rep(&rep, &lam)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&bent.to_json()).expect("serializable");
                std::fs::write(path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            Ok(Outcome::data(json!({
                "relator_residual": bent.relator_residual(),
                "hull": hull_classify(&bent)?.to_json(),
                "rep": if out.is_none() { bent.to_json() } else { Value::Null },
            })))
        }
        Command::Weights => {
            let r = weights_report()?;
            Ok(Outcome { ok: r.non_proportional, ..Outcome::data(weights_report_json(&r)) })
        }
        Command::Rep { kind, genus } => {
            let rep = match kind.as_str() {
                "su11" => fuchsian_su11_rep(*genus)?,
                "so21" => fuchsian_so21_rep(*genus)?,
                other => return Err(Error::DomainError(format!("unknown rep kind '{other}' (su11 or so21)"))),
            };
            Ok(Outcome::data(rep.to_json()))
        }
    }
}

fn emit(to_stderr: bool, text: &str) {
    use std::io::Write;
    let line = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    let _ = if to_stderr { std::io::stderr().write_all(line.as_bytes()) } else { std::io::stdout().write_all(line.as_bytes()) };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            if cli.json {
                emit(false, &serde_json::to_string_pretty(&o.report).expect("serializable"));
            } else {
                emit(false, &o.text);
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let obj = e.to_json();
            if cli.json {
                emit(false, &serde_json::to_string_pretty(&obj).expect("serializable"));
            } else {
                emit(true, &serde_json::to_string(&obj).expect("serializable"));
            }
            ExitCode::from(2)
        }
    }
}
