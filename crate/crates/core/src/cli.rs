//! The `nchull` command line.
//!
//! Exit codes: 0 when everything checked holds, 1 when a verification finds
//! a counterexample, 2 for usage, parse and budget errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::check;
use crate::configuration::HullConfig;
use crate::error::{Error, Result};
use crate::hullposet::HullPoset;
use crate::lattice::{build_lattice_with, Budget, Enumeration, NCLattice, Partition};
use crate::scd::{scd_with, to_json as scd_json, verify_scd};
use crate::trees::{self, boolean_union_check, maximal_boolean_atom_sets, Forest, TreeContext};

#[derive(Debug, Parser)]
#[command(
    name = "nchull",
    version,
    about = "Noncrossing partition lattices of hull configurations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size, rank vector, gradedness and symmetry of NC(P).
    Stats(StatsArgs),
    /// Symmetric chain decomposition of NC(P).
    Scd(ScdArgs),
    /// Noncrossing trees with convex geodesics.
    Trees(TreesArgs),
    /// The poset H(n) of hull configuration classes.
    Hullposet(HullposetArgs),
    /// Run the verification suite up to a point count.
    Check(CheckArgs),
    /// Draw a partition or tree as SVG, or the Hasse diagram as DOT.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Emit a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Refuse configurations with more points than this.
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    /// Refuse lattices with more elements than this.
    #[arg(long, default_value_t = 250_000)]
    pub max_partitions: usize,
}

impl Common {
    fn budget(&self) -> Budget {
        Budget {
            max_n: self.max_n,
            max_elements: self.max_partitions,
        }
    }
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub shape: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScdArgs {
    #[arg(long)]
    pub shape: String,
    /// Check the decomposition independently.
    #[arg(long)]
    pub verify: bool,
    /// 1-based blank side to rotate to (default: the first one).
    #[arg(long, value_name = "I")]
    pub blank_side: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TreesArgs {
    #[arg(long)]
    pub shape: String,
    #[arg(long)]
    pub count: bool,
    #[arg(long)]
    pub list: bool,
    /// Check that every element lies in some Bool(tau).
    #[arg(long)]
    pub check_union: bool,
    /// Check that maximal Boolean atom sets match the trees one to one.
    #[arg(long)]
    pub check_bijection: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HullposetArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub counts: bool,
    #[arg(long)]
    pub dot: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub shape: String,
    /// A partition (`0,1|2`), a tree (`0-1;1-2`) or `hasse`.
    pub object: String,
    #[command(flatten)]
    pub common: Common,
}

/// What a command reports; serialized with sorted keys.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub shapes: Vec<String>,
    pub results: Value,
    pub budget: BudgetReport,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub max_n: usize,
    pub max_partitions: usize,
}

/// A finished command: the text to print and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out = common(&cli.command).out.clone();
    match run(&cli.command) {
        Ok(o) => {
            let written = match out {
                Some(path) => {
                    std::fs::write(&path, &o.output).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{}", o.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Stats(a) => &a.common,
        Command::Scd(a) => &a.common,
        Command::Trees(a) => &a.common,
        Command::Hullposet(a) => &a.common,
        Command::Check(a) => &a.common,
        Command::Render(a) => &a.common,
    }
}

pub fn run(c: &Command) -> Result<Outcome> {
    match c {
        Command::Stats(a) => cmd_stats(a),
        Command::Scd(a) => cmd_scd(a),
        Command::Trees(a) => cmd_trees(a),
        Command::Hullposet(a) => cmd_hullposet(a),
        Command::Check(a) => cmd_check(a),
        Command::Render(a) => cmd_render(a),
    }
}

fn lattice(shape: &str, common: &Common) -> Result<NCLattice> {
    let config: HullConfig = shape.parse()?;
    build_lattice_with(&config, Enumeration::Auto, common.budget())
}

fn finish(
    command: &str,
    shapes: Vec<String>,
    results: Value,
    passed: bool,
    common: &Common,
    text: String,
) -> Outcome {
    let output = if common.json {
        let report = RunReport {
            command: command.into(),
            shapes,
            results,
            budget: BudgetReport {
                max_n: common.max_n,
                max_partitions: common.max_partitions,
            },
            passed,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        text
    };
    Outcome {
        output,
        code: if passed { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn cmd_stats(a: &StatsArgs) -> Result<Outcome> {
    let l = lattice(&a.shape, &a.common)?;
    let ranks = l.rank_polynomial();
    let graded = l.is_graded();
    let symmetric = l.is_rank_symmetric();
    let (atoms, coatoms) = (l.atoms().len(), l.coatoms().len());
    let text = format!(
        "shape: {}\nelements: {}\nranks: {}\ngraded: {graded}\nrank-symmetric: {symmetric}\natoms: {atoms}\ncoatoms: {coatoms}\n",
        l.config(),
        l.len(),
        join(&ranks),
    );
    let results = json!({
        "elements": l.len(),
        "ranks": ranks,
        "graded": graded,
        "rank_symmetric": symmetric,
        "atoms": atoms,
        "coatoms": coatoms,
        "lattice": l.to_json(),
    });
    Ok(finish(
        "stats",
        vec![l.config().to_string()],
        results,
        true,
        &a.common,
        text,
    ))
}

pub fn cmd_scd(a: &ScdArgs) -> Result<Outcome> {
    let l = lattice(&a.shape, &a.common)?;
    let d = scd_with(&l, a.blank_side)?;
    let mut text = format!(
        "shape: {}\nchains: {}\nsizes: {}\n",
        l.config(),
        d.len(),
        join(&d.sizes())
    );
    let mut results = json!({ "decomposition": scd_json(&l, &d), "sizes": d.sizes() });
    let mut passed = true;
    if a.verify {
        let r = verify_scd(&l, &d);
        passed = r.passed();
        let _ = write!(
            text,
            "disjoint: {}\ncovering: {}\nsaturated: {}\ncentered: {}\n",
            r.disjoint, r.covering, r.saturated, r.centered
        );
        if let Some(w) = &r.witness {
            let _ = writeln!(text, "counterexample: {w}");
        }
        results["verify"] = serde_json::to_value(&r).expect("report serializes");
    }
    Ok(finish(
        "scd",
        vec![l.config().to_string()],
        results,
        passed,
        &a.common,
        text,
    ))
}

pub fn cmd_trees(a: &TreesArgs) -> Result<Outcome> {
    let config: HullConfig = a.shape.parse()?;
    if config.n() > a.common.max_n {
        return Err(Error::BudgetExceeded(format!(
            "n = {} exceeds max_n = {}",
            config.n(),
            a.common.max_n
        )));
    }
    let ts = TreeContext::new(&config).enumerate_cg_trees(trees::DEFAULT_MAX_TREES)?;
    let mut text = format!("shape: {config}\ntrees: {}\n", ts.len());
    let mut results = json!({ "count": ts.len() });
    let mut passed = true;
    if a.list {
        for t in &ts {
            let _ = writeln!(text, "{t}");
        }
        results["trees"] = json!(ts.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    if a.check_union || a.check_bijection {
        let l = build_lattice_with(&config, Enumeration::Auto, a.common.budget())?;
        if a.check_union {
            let u = boolean_union_check(&l, &ts);
            passed &= u.covered;
            let _ = writeln!(text, "union covers NC(P): {}", u.covered);
            let missing = u.missing.map(|m| l.elements()[m].to_string());
            if let Some(m) = &missing {
                let _ = writeln!(text, "counterexample: {m}");
            }
            results["union"] = json!({ "covered": u.covered, "missing": missing });
        }
        if a.check_bijection {
            let sets = maximal_boolean_atom_sets(&l, a.common.max_partitions)?;
            let mut images: Vec<Forest> = sets
                .iter()
                .filter_map(|s| trees::atoms_to_forest(&l, s).ok())
                .collect();
            images.sort();
            images.dedup();
            let mut sorted = ts.clone();
            sorted.sort();
            let ok = images.len() == sets.len() && images == sorted;
            passed &= ok;
            let _ = writeln!(text, "atom sets: {}\nbijection: {ok}", sets.len());
            results["bijection"] = json!({ "atom_sets": sets.len(), "holds": ok });
        }
    }
    Ok(finish(
        "trees",
        vec![config.to_string()],
        results,
        passed,
        &a.common,
        text,
    ))
}

pub fn cmd_hullposet(a: &HullposetArgs) -> Result<Outcome> {
    if a.n > a.common.max_n {
        return Err(Error::BudgetExceeded(format!(
            "n = {} exceeds max_n = {}",
            a.n, a.common.max_n
        )));
    }
    let h = HullPoset::build(a.n)?;
    if a.dot {
        return Ok(Outcome {
            output: h.to_dot(),
            code: EXIT_OK,
        });
    }
    let counts = h.rank_counts();
    let mut text = format!("n: {}\nelements: {}\n", a.n, h.elements().len());
    for (k, c) in counts.iter().enumerate().skip(2) {
        let _ = writeln!(text, "rank {k}: {c}");
    }
    let mut results = json!({ "rank_counts": counts, "elements": h.elements().len() });
    if a.common.json && !a.counts {
        results["hasse"] = h.to_json();
    }
    Ok(finish(
        "hullposet",
        Vec::new(),
        results,
        true,
        &a.common,
        text,
    ))
}

pub fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    let outcomes = check::run_suite(a.common.max_n);
    let passed = outcomes.iter().all(|o| o.passed);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(
            text,
            "{} {}: {}",
            if o.passed { "ok  " } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    if let Some(c) = outcomes.iter().find_map(|o| o.counterexample.as_ref()) {
        let _ = writeln!(text, "counterexample: {c}");
    }
    let results = serde_json::to_value(&outcomes).expect("outcomes serialize");
    Ok(finish(
        "check",
        Vec::new(),
        results,
        passed,
        &a.common,
        text,
    ))
}

pub fn cmd_render(a: &RenderArgs) -> Result<Outcome> {
    let config: HullConfig = a.shape.parse()?;
    let output = if a.object == "hasse" {
        build_lattice_with(&config, Enumeration::Auto, a.common.budget())?.to_dot()
    } else if a.object.contains('-') {
        let f = Forest::parse(config.n(), &a.object)?;
        render_svg(&config, &[], f.edges())
    } else {
        let p = Partition::parse(config.n(), &a.object)?;
        render_svg(&config, &p.blocks(), &[])
    };
    Ok(Outcome {
        output,
        code: EXIT_OK,
    })
}

const CANVAS: f64 = 400.0;
const MARGIN: f64 = 30.0;

/// SVG of the canonical realization with block hulls shaded and tree edges
/// drawn. Coordinates are printed with six decimals.
pub fn render_svg(config: &HullConfig, blocks: &[Vec<usize>], edges: &[(usize, usize)]) -> String {
    let pts: Vec<(f64, f64)> = config.realize().iter().map(|p| p.to_f64()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (CANVAS - 2.0 * MARGIN) / span;
    let xy: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(x, y)| {
            (
                MARGIN + (x - x0) * scale,
                CANVAS - MARGIN - (y - y0) * scale,
            )
        })
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    for block in blocks.iter().filter(|b| b.len() > 1) {
        if block.len() == 2 || config.is_segment() {
            let (a, b) = (xy[block[0]], xy[*block.last().expect("nonempty")]);
            let _ = writeln!(
                s,
                "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#4a7bd0\" stroke-width=\"8\" stroke-linecap=\"round\" opacity=\"0.5\"/>",
                a.0, a.1, b.0, b.1
            );
        } else {
            // indices run counterclockwise around the hull
            let poly: Vec<String> = block
                .iter()
                .map(|&i| format!("{:.6},{:.6}", xy[i].0, xy[i].1))
                .collect();
            let _ = writeln!(
                s,
                "  <polygon points=\"{}\" fill=\"#4a7bd0\" fill-opacity=\"0.35\" stroke=\"#4a7bd0\"/>",
                poly.join(" ")
            );
        }
    }
    for &(a, b) in edges {
        let _ = writeln!(
            s,
            "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"black\" stroke-width=\"2\"/>",
            xy[a].0, xy[a].1, xy[b].0, xy[b].1
        );
    }
    for (i, &(x, y)) in xy.iter().enumerate() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"4\" fill=\"black\"/>"
        );
        let _ = writeln!(
            s,
            "  <text x=\"{:.6}\" y=\"{:.6}\" font-size=\"12\" font-family=\"monospace\">{i}</text>",
            x + 6.0,
            y - 6.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        let cli =
            Cli::try_parse_from(std::iter::once("nchull").chain(args.iter().copied())).unwrap();
        run(&cli.command).unwrap()
    }

    #[test]
    fn stats_text() {
        let o = go(&["stats", "--shape", "segment:5"]);
        assert!(o.output.contains("elements: 16\n"));
        let o = go(&["stats", "--shape", "[0;0;0;0;0]"]);
        assert!(o.output.contains("elements: 42\n"));
    }

    #[test]
    fn json_is_stable() {
        let a = go(&["stats", "--shape", "[0;1;1]", "--json"]);
        let b = go(&["stats", "--shape", "[0;1;1]", "--json"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.output).unwrap();
        assert_eq!(v["command"], "stats");
        assert_eq!(
            v["results"]["elements"],
            v["results"]["lattice"]["elements"]
                .as_array()
                .unwrap()
                .len()
        );
    }

    #[test]
    fn scd_verify_and_trees() {
        let o = go(&["scd", "--shape", "[0;1;1]", "--verify"]);
        assert_eq!(o.code, EXIT_OK);
        for key in ["disjoint", "covering", "saturated", "centered"] {
            assert!(o.output.contains(&format!("{key}: true")), "{}", o.output);
        }
        let o = go(&["trees", "--shape", "[0;0;0;0]", "--count"]);
        assert!(o.output.contains("trees: 12\n"));
        let o = go(&[
            "trees",
            "--shape",
            "[1;0;1]",
            "--check-union",
            "--check-bijection",
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.output);
    }

    #[test]
    fn scd_needs_blank_side() {
        let cli = Cli::try_parse_from(["nchull", "scd", "--shape", "[1;1;1]"]).unwrap();
        assert_eq!(run(&cli.command), Err(Error::NoBlankSide));
    }

    #[test]
    fn hullposet_counts() {
        let o = go(&["hullposet", "--n", "4", "--counts"]);
        assert!(
            o.output.contains("rank 2: 12\nrank 3: 24\nrank 4: 6\n"),
            "{}",
            o.output
        );
    }

    #[test]
    fn render_objects() {
        let o = go(&["render", "--shape", "[1;1;1]", "0|1|2|3|4|5"]);
        assert_eq!(o.output.matches("<circle").count(), 6);
        assert!(!o.output.contains("<line") && !o.output.contains("<polygon"));
        let o = go(&["render", "--shape", "[1;1;1]", "0-1;1-2;2-3;3-4;0-5"]);
        assert_eq!(o.output.matches("stroke=\"black\"").count(), 5);
        let o = go(&[
            "render",
            "--shape",
            "[0;3;2;1;2]",
            "0,5|1,2,3,4|6,7,8|9,10,11,12",
        ]);
        assert_eq!(o.output.matches("<polygon").count(), 3);
        let o = go(&["render", "--shape", "[0;0;0]", "hasse"]);
        assert!(o.output.starts_with("digraph"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with(["nchull", "stats"]), EXIT_USAGE);
        assert_eq!(
            main_with(["nchull", "stats", "--shape", "[1;1"]),
            EXIT_USAGE
        );
        assert_eq!(
            main_with(["nchull", "stats", "--shape", "segment:9", "--max-n", "8"]),
            EXIT_USAGE
        );
    }
}
