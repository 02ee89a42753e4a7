use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polytol::intersection::{capped_intersection, Margin};
use polytol::io::{
    polytope_from_json, polytope_to_json, polytope_to_off, polytope_to_text, report_to_json, report_to_text,
};
use polytol::mechanism::{build_operand_document, evaluate, load_mechanism_str, CapStrategy, EvalOptions};
use polytol::minkowski::minkowski_sum;
use polytol::scalar::parse_scalar;
use polytol::{Error, Polytope};

#[derive(Parser)]
#[command(name = "polytol", version, about = "Exact polytope toolkit for worst-case tolerance analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap offset C: a positive rational or `auto`.
    #[arg(long, global = true)]
    cap_c: Option<String>,
    /// Bounding-box margin for intersections: a positive rational or `auto`.
    #[arg(long, global = true)]
    margin: Option<String>,
    /// Rerun the analysis with C x 10 and margin x 3 and fail on any non-cap change.
    #[arg(long, global = true)]
    check_c_invariance: bool,
    /// Expected ambient dimension of input polytopes.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Output file (stdout when absent; required for OFF).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mechanism and check its functional condition.
    Analyze { mechanism: PathBuf },
    /// Like `analyze`, with every intermediate polytope in the JSON output.
    Report { mechanism: PathBuf },
    /// Minkowski sum of polytope files.
    Sum {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
    },
    /// Cap-aware intersection of polytope files.
    Intersect {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
    },
    /// Polytope of a single surface or joint description.
    Build { operand: PathBuf },
    /// Re-emit a polytope file in another format.
    Export { input: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Off,
    Text,
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

fn located(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        Failure::Invariant(m) => Failure::Invariant(format!("{}: {m}", path.display())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_auto(text: &str, what: &str) -> Result<Option<polytol::Scalar>, Failure> {
    if text == "auto" {
        return Ok(None);
    }
    let v = parse_scalar(text).map_err(|e| Failure::Input(format!("--{what}: {e}")))?;
    Ok(Some(v))
}

impl Cli {
    fn caps(&self) -> Result<Option<CapStrategy>, Failure> {
        Ok(match &self.cap_c {
            None => None,
            Some(t) => Some(parse_auto(t, "cap-c")?.map_or(CapStrategy::Auto, CapStrategy::Fixed)),
        })
    }

    fn margin_flag(&self) -> Result<Option<Margin>, Failure> {
        Ok(match &self.margin {
            None => None,
            Some(t) => Some(parse_auto(t, "margin")?.map_or(Margin::Auto, Margin::Fixed)),
        })
    }

    fn load_polytope(&self, path: &Path) -> Result<Polytope, Failure> {
        let p = polytope_from_json(&read(path)?).map_err(|e| located(path, e))?;
        if let Some(d) = self.dim {
            if p.ambient_dim() != d {
                return Err(Failure::Input(format!(
                    "{}: polytope lives in R^{}, --dim {d} requested",
                    path.display(),
                    p.ambient_dim()
                )));
            }
        }
        Ok(p)
    }

    fn write_polytope(&self, p: &Polytope) -> Result<(), Failure> {
        match self.format.unwrap_or(Format::Json) {
            Format::Json => emit(self.out.as_deref(), &polytope_to_json(p)),
            Format::Text => emit(self.out.as_deref(), &polytope_to_text(p)),
            Format::Off => {
                let Some(out) = &self.out else {
                    return Err(Failure::Input("OFF output needs --out".into()));
                };
                let name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let export = polytope_to_off(p, 6, &name)?;
                let stem = out.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                write(out, &export.off)?;
                write(&out.with_file_name(format!("{stem}.caps.json")), &export.sidecar)
            }
        }
    }

    fn analyze(&self, path: &Path, snapshots: bool) -> Result<ExitCode, Failure> {
        let model = load_mechanism_str(&read(path)?).map_err(|e| located(path, e))?;
        let options = EvalOptions {
            caps: self.caps()?,
            margin: self.margin_flag()?,
            check_c_invariance: self.check_c_invariance,
        };
        let report = evaluate(&model, &options)?;
        let default = if snapshots { Format::Json } else { Format::Text };
        match self.format.unwrap_or(default) {
            Format::Json => emit(self.out.as_deref(), &report_to_json(&report, snapshots))?,
            Format::Text => emit(self.out.as_deref(), &report_to_text(&report))?,
            Format::Off => {
                if snapshots {
                    return Err(Failure::Input("report supports --format json or text".into()));
                }
                self.write_polytope(report.calculated())?;
            }
        }
        if let Some(inv) = &report.invariance {
            if !inv.holds() {
                return Err(Failure::Invariant(format!(
                    "non-cap content changed with C x 10 at {}",
                    inv.drift.join(", ")
                )));
            }
        }
        Ok(match report.compliant() {
            Some(false) => ExitCode::from(1),
            _ => ExitCode::SUCCESS,
        })
    }

    fn run(&self) -> Result<ExitCode, Failure> {
        match &self.command {
            Command::Analyze { mechanism } => self.analyze(mechanism, false),
            Command::Report { mechanism } => self.analyze(mechanism, true),
            Command::Sum { inputs } => {
                let ops = inputs.iter().map(|p| self.load_polytope(p)).collect::<Result<Vec<_>, _>>()?;
                let mut acc = ops[0].clone();
                for p in &ops[1..] {
                    let (s, cert) = minkowski_sum(&acc, p)?;
                    for d in &cert.diagnostics {
                        eprintln!("note: {d}");
                    }
                    acc = s;
                }
                self.write_polytope(&acc)?;
                Ok(ExitCode::SUCCESS)
            }
            Command::Intersect { inputs } => {
                let ops = inputs.iter().map(|p| self.load_polytope(p)).collect::<Result<Vec<_>, _>>()?;
                let margin = self.margin_flag()?.unwrap_or(Margin::Auto);
                let r = capped_intersection(&ops, &margin)?;
                self.write_polytope(&r.result)?;
                Ok(ExitCode::SUCCESS)
            }
            Command::Build { operand } => {
                let mut doc: serde_json::Value = serde_json::from_str(&read(operand)?).map_err(|e| {
                    Failure::Input(format!(
                        "{}: schema error at $ (line {}, column {}): {e}",
                        operand.display(),
                        e.line(),
                        e.column()
                    ))
                })?;
                if let (Some(c), Some(obj)) = (&self.cap_c, doc.as_object_mut()) {
                    obj.insert("caps".into(), serde_json::json!({ "C": c }));
                }
                let (p, _) =
                    build_operand_document(&doc).map_err(|e| located(operand, e))?;
                if let Some(d) = self.dim {
                    if p.ambient_dim() != d {
                        return Err(Failure::Input(format!("operand lives in R^{}, --dim {d} requested", p.ambient_dim())));
                    }
                }
                self.write_polytope(&p)?;
                Ok(ExitCode::SUCCESS)
            }
            Command::Export { input } => {
                let p = self.load_polytope(input)?;
                self.write_polytope(&p)?;
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
