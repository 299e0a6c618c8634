//! `su2tqft`: JSON front end for the TQFT library.
//!
//! Exit codes: 0 ok, 2 parse errors, 3 domain errors, 4 internal failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use su2tqft::braids::{self, DetectMode};
use su2tqft::mcg::{self, parse_word, Surface, SurfaceModel};
use su2tqft::recoupling;
use su2tqft::skein::moves::apply_move;
use su2tqft::skein::pd::{link_from_json, LinkJson};
use su2tqft::skein::{self, evaluate, random_move_case, Move, SurgeryPresentation};
use su2tqft::tl::{jones_wenzl, SectorBasis};
use su2tqft::tqft::{self, Spine};
use su2tqft::{Error, QuantumParams, Ring};

#[derive(Parser)]
#[command(name = "su2tqft", version, about = "Exact SU(2) TQFT computations at roots of unity")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write JSON here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Level {
    #[arg(long)]
    r: u32,
    /// `A = exp(2 pi i s / 4r)`, `gcd(s, 4r) = 1`.
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Projective,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a labeled link or ribbon graph given as PD JSON.
    EvalLink {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        link: PathBuf,
        /// Also report Z(M, n) and Z / C^n, treating the link as a surgery presentation.
        #[arg(long)]
        surgery: bool,
    },
    /// Jones-Wenzl projector on k strands.
    Projector {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        k: usize,
    },
    /// Loop values, twists, thetas and 6j symbols.
    DumpRecoupling {
        #[command(flatten)]
        level: Level,
    },
    /// Dimension and basis of the space of a spine (file, or a builtin name:
    /// torus, punctured-torus, sphere4, theta, handcuff).
    Dims {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        spine: String,
        #[arg(long, num_args = 0..)]
        labels: Vec<u32>,
    },
    /// Matrix of a mapping class word.
    RepMatrix {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        surface: Surface,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Matrix of a curve operator.
    CurveOp {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        surface: Surface,
        #[arg(long)]
        curve: String,
    },
    /// Trace of a mapping class word on a closed surface.
    Trace {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        surface: Surface,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Least level at which a word acts projectively nontrivially.
    Detect {
        #[arg(long)]
        surface: Surface,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 3)]
        rmin: u32,
        #[arg(long)]
        rmax: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Sector matrices of a braid in the Jones representation.
    BraidRep {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        word: String,
        /// Only this sector.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Search levels, cablings and sectors for a nontrivial action.
    BraidDetect {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 3)]
        rmin: u32,
        #[arg(long)]
        rmax: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        cable_max: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Check that moves preserve the evaluation: one given move, or random cases.
    VerifyMoves {
        #[command(flatten)]
        level: Level,
        /// PD JSON link; requires --move.
        #[arg(long)]
        link: Option<PathBuf>,
        /// Move as JSON, e.g. '{"kind":"balanced_stabilization"}'.
        #[arg(long = "move")]
        mv: Option<String>,
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Out = std::result::Result<serde_json::Value, Failure>;

fn ring(level: Level) -> std::result::Result<Arc<Ring>, Failure> {
    Ok(QuantumParams::new(level.r, level.s)?.ring())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Out {
    serde_json::to_value(x).map_err(|e| Failure::Internal(e.to_string()))
}

fn level_json(level: Level) -> serde_json::Value {
    json!({"r": level.r, "s": level.s})
}

fn builtin_spine(name: &str) -> Option<Spine> {
    match name {
        "torus" => Some(Spine::torus()),
        "punctured-torus" => Some(Spine::punctured_torus()),
        "sphere4" => Some(Spine::four_punctured_sphere()),
        "theta" => Some(Spine::theta()),
        "handcuff" => Some(Spine::handcuff()),
        _ => None,
    }
}

fn model(level: Level, surface: &Surface) -> std::result::Result<SurfaceModel, Failure> {
    Ok(SurfaceModel::new(&ring(level)?, surface)?)
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::EvalLink { level, link, surgery } => {
            let ring = ring(level)?;
            let j: LinkJson = read_json(&link)?;
            let link = link_from_json(&j)?;
            let value = evaluate(&ring, &link)?;
            let mut out = json!({
                "level": level_json(level),
                "components": link.components(),
                "linking_matrix": link.linking_matrix(),
                "value": value.to_json(),
            });
            if surgery {
                let p = SurgeryPresentation::from_link(link);
                out["signature"] = json!(p.signature);
                out["z"] = to_value(&skein::z_invariant(&ring, &p)?.to_json())?;
                out["z_normalized"] = to_value(&skein::normalized_z(&ring, &p)?.to_json())?;
            }
            Ok(out)
        }
        Command::Projector { level, k } => {
            let ring = ring(level)?;
            let p = jones_wenzl(&ring, k)?;
            Ok(json!({"level": level_json(level), "k": k, "projector": to_value(&p.to_json())?}))
        }
        Command::DumpRecoupling { level } => to_value(&recoupling::tables(&ring(level)?)),
        Command::Dims { level, spine, labels } => {
            let s = match builtin_spine(&spine) {
                Some(s) if !Path::new(&spine).exists() => s,
                _ => read_json(Path::new(&spine))?,
            };
            let basis = tqft::basis(level.r, &s, &labels)?;
            Ok(json!({"dim": basis.len(), "labelings": basis}))
        }
        Command::RepMatrix { level, surface, word } => {
            let m = model(level, &surface)?;
            let w = parse_word(&word)?;
            let mat = m.represent(&w)?;
            Ok(json!({
                "level": level_json(level),
                "surface": surface.to_string(),
                "word": mcg::word_to_string(&w),
                "dim": m.dim(),
                "basis": m.basis,
                "curves": to_value(&m.curves())?,
                "matrix": to_value(&mat.to_json())?,
                "projectively_identity": mcg::is_projectively_identity(&mat),
            }))
        }
        Command::CurveOp { level, surface, curve } => {
            let m = model(level, &surface)?;
            let mat = m.curve_operator(&curve)?;
            Ok(json!({
                "level": level_json(level),
                "surface": surface.to_string(),
                "curve": curve,
                "dim": m.dim(),
                "basis": m.basis,
                "matrix": to_value(&mat.to_json())?,
            }))
        }
        Command::Trace { level, surface, word } => {
            let m = model(level, &surface)?;
            let w = parse_word(&word)?;
            let rep = mcg::trace_report(&m, &w)?;
            Ok(json!({
                "level": level_json(level),
                "surface": surface.to_string(),
                "word": mcg::word_to_string(&w),
                "report": to_value(&rep)?,
            }))
        }
        Command::Detect { surface, word, rmin, rmax, s } => {
            let w = parse_word(&word)?;
            to_value(&mcg::detect(&surface, &w, rmin..=rmax, s)?)
        }
        Command::BraidRep { level, n, word, m } => {
            let ring = ring(level)?;
            let w = braids::parse_braid_word(&word)?;
            let sectors = match m {
                Some(m) => vec![m],
                None => braids::sector_labels(level.r, n),
            };
            let mut out = Vec::new();
            for m in sectors {
                let rep = braids::jones_sector_rep(&ring, n, &w, m)?;
                let paths = SectorBasis::new(&ring, n, m)?.paths;
                out.push(json!({
                    "m": m,
                    "dim": rep.nrows(),
                    "paths": paths,
                    "matrix": to_value(&rep.to_json())?,
                }));
            }
            Ok(json!({"level": level_json(level), "strands": n, "word": w, "sectors": out}))
        }
        Command::BraidDetect { n, word, rmin, rmax, s, cable_max, mode } => {
            let w = braids::parse_braid_word(&word)?;
            let mode = match mode {
                ModeArg::Exact => DetectMode::Exact,
                ModeArg::Projective => DetectMode::Projective,
            };
            to_value(&braids::braid_detect(n, &w, rmin..=rmax, s, cable_max, mode)?)
        }
        Command::VerifyMoves { level, link, mv, random, seed } => {
            let ring = ring(level)?;
            let mut cases = Vec::new();
            match (link, mv) {
                (Some(path), Some(mv)) => {
                    let j: LinkJson = read_json(&path)?;
                    let mv: Move = serde_json::from_str(&mv).map_err(|e| Failure::Parse(format!("move: {e}")))?;
                    cases.push((link_from_json(&j)?, mv));
                }
                (None, None) => {}
                _ => return Err(Failure::Parse("--link and --move go together".into())),
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..random {
                cases.push(random_move_case(&mut rng, level.r));
            }
            let mut results = Vec::new();
            for (link, mv) in cases {
                let before = evaluate(&ring, &link)?;
                let after = evaluate(&ring, &apply_move(&link, &mv)?)?;
                results.push(json!({
                    "move": to_value(&mv)?,
                    "before": before.to_json(),
                    "after": after.to_json(),
                    "preserved": before == after,
                }));
            }
            let all = results.iter().all(|r| r["preserved"] == json!(true));
            Ok(json!({"level": level_json(level), "cases": results, "all_preserved": all}))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("{}", json!({"error": "internal", "message": "could not size the thread pool"}));
            return ExitCode::from(4);
        }
    }
    let (kind, code, message) = match run(cli.command) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("values serialize") + "\n";
            match &cli.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("{}", json!({"error": "io", "message": e.to_string()}));
                        return ExitCode::from(4);
                    }
                }
                None => print!("{text}"),
            }
            return ExitCode::SUCCESS;
        }
        Err(Failure::Parse(m)) => ("parse", 2, m),
        Err(Failure::Domain(m)) => ("domain", 3, m),
        Err(Failure::Internal(m)) => ("internal", 4, m),
    };
    eprintln!("{}", json!({"error": kind, "message": message}));
    ExitCode::from(code)
}
