mod config;
mod svg;
mod table;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use affine_elastica::curvature::Grid;
use affine_elastica::elliptic::{invariants_from_Ptau, invariants_from_qQ};
use affine_elastica::synthesis::{
    default_grid, euclidean_display_transform, solve_closure, synthesize, synthesize_closure,
    synthesize_length_constrained,
};
use affine_elastica::{
    classify, Branch, CaseTag, ComplexPoint, CurveSamples, Error, Invariants, Weierstrass,
};

use config::JobConfig;
use verify::Suite;

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SYNTH: u8 = 3;

/// A failed command: exit code and one-line message.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(EXIT_INPUT, msg.into())
    }

    /// Domain errors are the caller's fault (2); anything else failed
    /// during synthesis (3) and is reported by name.
    fn from_lib(e: Error) -> Self {
        if e.is_domain_error() {
            Failure(EXIT_INPUT, format!("{}: {e}", e.name()))
        } else {
            Failure(EXIT_SYNTH, format!("{}: {e}", e.name()))
        }
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Parser)]
#[command(
    name = "affine-elastica",
    version,
    about = "Critical curves of equi-affine curvature functionals"
)]
struct Cli {
    /// key = value file overriding tolerances and defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Closed,
    Open,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Closed => Branch::Closed,
            BranchArg::Open => Branch::Open,
        }
    }
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[arg(long, allow_hyphen_values = true)]
    g2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g3: Option<f64>,
    /// Middle κ-root; use with --Q instead of --g2/--g3.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long = "Q", allow_hyphen_values = true)]
    big_q: Option<f64>,
}

impl InvariantArgs {
    fn given(&self) -> bool {
        self.g2.is_some() || self.g3.is_some() || self.q.is_some() || self.big_q.is_some()
    }

    fn resolve(&self) -> Result<Invariants, Failure> {
        match (self.g2, self.g3, self.q, self.big_q) {
            (Some(g2), Some(g3), None, None) => Ok(Invariants::new(g2, g3)),
            (None, None, Some(q), Some(big_q)) => Ok(invariants_from_qQ(q, big_q)),
            _ => Err(Failure::input("give either --g2 and --g3, or --q and --Q")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify invariants into the case taxonomy; prints the label as JSON.
    Classify {
        #[command(flatten)]
        inv: InvariantArgs,
        #[arg(long, value_enum, default_value = "open")]
        branch: BranchArg,
    },
    /// Closed curves of the oval branch: the published rows plus any pairs
    /// given as M:N.
    Table { pairs: Vec<String> },
    /// Synthesize a curve and write it as CSV and/or SVG.
    Synth(SynthArgs),
    /// Run residual suites on a CSV of samples; prints a JSON report.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "el")]
        suite: Suite,
        /// Overrides the residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The closure quantity over a log-spaced Q range, as CSV (Q, lhs, d).
    ScanClosure {
        q_min: f64,
        q_max: f64,
        steps: usize,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Case tag (A1 … G, Ellipse); representative invariants unless given.
    #[arg(long, group = "source")]
    case: Option<String>,
    /// Closed curve with rotation number N/M.
    #[arg(long, num_args = 2, value_names = ["M", "N"], group = "source")]
    closure: Option<Vec<u32>>,
    /// Critical curve under both area and length constraints.
    #[arg(long, group = "source")]
    length_constrained: bool,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<f64>,
    /// Shift c₀: "w2" for the oval branch or "0".
    #[arg(long)]
    c0: Option<String>,
    #[command(flatten)]
    inv: InvariantArgs,
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Sample index that gets the osculating overlays in the SVG.
    #[arg(long)]
    mark: Option<usize>,
    /// Map the closed curve so that its symmetry ellipse becomes a circle.
    #[arg(long)]
    euclidean_display: bool,
    /// Verify the output before writing it.
    #[arg(long)]
    self_check: bool,
}

/// Representative invariants and branch of every case.
fn representative(tag: CaseTag) -> (Invariants, Branch) {
    use Branch::{Closed, Open};
    match tag {
        CaseTag::A1 => (invariants_from_qQ(1.0, 3.940854279), Closed),
        CaseTag::A2 => (invariants_from_qQ(0.0, 2.0), Closed),
        CaseTag::A3 => (invariants_from_qQ(-1.0, 6.0), Closed),
        CaseTag::B1 => (invariants_from_qQ(0.2, 0.8), Open),
        CaseTag::B2 => (invariants_from_qQ(0.0, 1.0), Open),
        CaseTag::B3 => (invariants_from_qQ(-0.5, 1.5), Open),
        CaseTag::C1 => (invariants_from_Ptau(1.0, 2.0), Open),
        CaseTag::C2 => (invariants_from_Ptau(1.0, 0.5), Open),
        CaseTag::C3 => (invariants_from_Ptau(0.0, 1.0), Open),
        CaseTag::C4 => (invariants_from_Ptau(-1.0, 2.0), Open),
        CaseTag::C5 => (invariants_from_Ptau(-1.0, 0.5), Open),
        CaseTag::Da => (Invariants::new(0.75, -0.125), Open),
        CaseTag::Dc => (Invariants::new(0.75, -0.125), Closed),
        CaseTag::ECase => (Invariants::new(0.75, 0.125), Open),
        CaseTag::Ellipse => (Invariants::new(0.75, 0.125), Closed),
        CaseTag::F => (Invariants::new(0.0, -1.0), Open),
        CaseTag::G => (Invariants::new(0.0, 0.0), Open),
    }
}

fn cmd_classify(inv: &InvariantArgs, branch: BranchArg) -> CmdResult {
    let label = classify(inv.resolve()?, branch.into()).map_err(Failure::from_lib)?;
    println!(
        "{}",
        serde_json::to_string(&label).expect("label serializes")
    );
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn synth_curve(a: &SynthArgs, cfg: &JobConfig) -> Result<CurveSamples, Failure> {
    let n = a.samples.unwrap_or(cfg.samples);
    if n < 64 {
        return Err(Failure::input("need at least 64 samples"));
    }
    if let Some(mn) = &a.closure {
        let sol = solve_closure(mn[0], mn[1]).map_err(Failure::from_lib)?;
        // Keep the step near 0.02 on long periods.
        let n = if a.samples.is_some() {
            n
        } else {
            n.max((sol.period() / 0.02).ceil() as usize)
        };
        let c = synthesize_closure(&sol, n).map_err(Failure::from_lib)?;
        if a.euclidean_display {
            return euclidean_display_transform(&c, &sol).map_err(Failure::from_lib);
        }
        return Ok(c);
    }
    if a.euclidean_display {
        return Err(Failure::input("--euclidean-display needs --closure"));
    }
    if a.length_constrained {
        let big_a =
            a.a.ok_or_else(|| Failure::input("--length-constrained needs --A"))?;
        let g3 = a
            .inv
            .g3
            .ok_or_else(|| Failure::input("--length-constrained needs --g3"))?;
        let wf = Weierstrass::new(Invariants::new(big_a * big_a / 12.0, g3))
            .map_err(Failure::from_lib)?;
        let lat = *wf.lattice();
        let (c0, grid) = match a.c0.as_deref().unwrap_or("w2") {
            "w2" => (lat.w2(), Grid::open(-0.8 * lat.w1, 0.8 * lat.w1, n)),
            "0" => (
                ComplexPoint::new(0.0, 0.0),
                Grid::open(0.3 * lat.w1, 1.7 * lat.w1, n),
            ),
            other => return Err(Failure::input(format!("--c0 must be w2 or 0, got {other}"))),
        };
        return synthesize_length_constrained(big_a, g3, c0, &grid).map_err(Failure::from_lib);
    }
    let label = match (&a.case, a.inv.given()) {
        (Some(tag), given) => {
            let tag = CaseTag::parse(tag)
                .ok_or_else(|| Failure::input(format!("unknown case tag '{tag}'")))?;
            let (rep, rep_branch) = representative(tag);
            let inv = if given { a.inv.resolve()? } else { rep };
            let branch = a.branch.map(Branch::from).unwrap_or(rep_branch);
            let label = classify(inv, branch).map_err(Failure::from_lib)?;
            if label.tag != tag {
                return Err(Failure::input(format!(
                    "invariants belong to case {}, not {}",
                    label.tag.name(),
                    tag.name()
                )));
            }
            label
        }
        (None, true) => {
            let branch = a.branch.map(Branch::from).unwrap_or(Branch::Open);
            classify(a.inv.resolve()?, branch).map_err(Failure::from_lib)?
        }
        (None, false) => {
            return Err(Failure::input(
                "give --case, --closure M N, --length-constrained or invariants",
            ))
        }
    };
    let grid = default_grid(&label, n).map_err(Failure::from_lib)?;
    synthesize(&label, &grid).map_err(Failure::from_lib)
}

fn cmd_synth(a: &SynthArgs, cfg: &JobConfig) -> CmdResult {
    let c = synth_curve(a, cfg)?;
    let mut code = 0;
    if a.self_check {
        let mut suites = vec![Suite::El];
        if c.closed {
            suites.push(Suite::Closure);
        }
        for suite in suites {
            let r = verify::run(&c, suite, cfg).map_err(Failure::from_lib)?;
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&r.json).expect("report serializes")
            );
            if !r.pass {
                code = EXIT_VERIFY;
            }
        }
    }
    if let Some(p) = &a.csv {
        write_file(p, &c.to_csv())?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &svg::render(&c, a.mark))?;
    }
    if a.csv.is_none() && a.svg.is_none() {
        print!("{}", c.to_csv());
    } else {
        let summary = json!({
            "tag": c.meta.get("tag"),
            "samples": c.len(),
            "closed": c.closed,
            "display_normalized": c.display_normalized,
            "csv": a.csv,
            "svg": a.svg,
        });
        println!("{summary}");
    }
    Ok(code)
}

fn cmd_verify(file: &Path, suite: Suite, tol: Option<f64>, cfg: &JobConfig) -> CmdResult {
    let mut cfg = cfg.clone();
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::input("--tol must be positive"));
        }
        cfg.tol = t;
    }
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", file.display())))?;
    let c = CurveSamples::from_csv(&text).map_err(Failure::from_lib)?;
    let mut r = verify::run(&c, suite, &cfg).map_err(Failure::from_lib)?;
    r.json["file"] = json!(file);
    println!(
        "{}",
        serde_json::to_string_pretty(&r.json).expect("report serializes")
    );
    Ok(if r.pass { 0 } else { EXIT_VERIFY })
}

fn run(cli: Cli) -> CmdResult {
    let cfg = JobConfig::load(cli.config.as_deref()).map_err(Failure::input)?;
    match cli.cmd {
        Command::Classify { inv, branch } => cmd_classify(&inv, branch),
        Command::Table { pairs } => table::cmd_table(&pairs),
        Command::Synth(a) => cmd_synth(&a, &cfg),
        Command::Verify { file, suite, tol } => cmd_verify(&file, suite, tol, &cfg),
        Command::ScanClosure {
            q_min,
            q_max,
            steps,
        } => table::cmd_scan_closure(q_min, q_max, steps),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representatives_classify_to_their_tags() {
        for name in [
            "A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3", "C4", "C5", "Da", "Dc", "E",
            "Ellipse", "F", "G",
        ] {
            let tag = CaseTag::parse(name).unwrap();
            let (inv, b) = representative(tag);
            assert_eq!(classify(inv, b).unwrap().tag, tag, "{name}");
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
