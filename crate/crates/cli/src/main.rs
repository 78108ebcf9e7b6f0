//! `tin-gdof` command-line front end.
//!
//! Exit codes: 0 success or inside, 1 input error, 2 TIN-optimality unknown,
//! 3 outside the region or verification failure.

mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tin_gdof::region::{export_region, HalfSpaceRegion, Row};
use tin_gdof::verify::{duality_sweep, DEFAULT_SEED};
use tin_gdof::{
    check_tin_optimality, contains, parse_profile, profile_hash, random_profile, serialize_profile,
    tin_optimal_region, GdofTuple, Interval, NetworkProfile, Verdict, TOL,
};

const EXIT_INPUT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_OUTSIDE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tin-gdof",
    version,
    about = "TIN GDoF regions of two-user-per-cell networks"
)]
struct Cli {
    /// Output style on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random profile document.
    Gen {
        #[arg(long)]
        cells: usize,
        /// Range of in-cell strengths, `lo:hi`.
        #[arg(long, default_value = "1:3", value_parser = parse_interval)]
        direct: Interval,
        /// Range of cross-cell strengths, `lo:hi`.
        #[arg(long, default_value = "0:1", value_parser = parse_interval)]
        cross: Interval,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the TIN-optimality conditions and export the polyhedral region.
    Region {
        profile: PathBuf,
        /// Write the region document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a GDoF tuple lies in the region.
    Check {
        profile: PathBuf,
        /// `2K` values `d_1^1 d_1^2 d_2^1 ...`.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        point: Vec<f64>,
    },
    /// Run downlink/uplink duality certificates on random schemes.
    Duality {
        profile: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Largest accepted deficit.
        #[arg(long, default_value_t = TOL)]
        tol: f64,
        /// Write the full report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a 2D slice of the region for plotting.
    Plotdata {
        profile: PathBuf,
        /// Horizontal axis as `cell:user` (1-based).
        #[arg(long, value_parser = parse_axis)]
        x: (usize, usize),
        /// Vertical axis as `cell:user` (1-based).
        #[arg(long, value_parser = parse_axis)]
        y: (usize, usize),
        /// Values of the remaining coordinates in index order; default 0.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        fixed: Vec<f64>,
        /// Raster points per axis.
        #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u64).range(2..=2000))]
        resolution: u64,
        /// Write the plot document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Interval::new(num(lo)?, num(hi)?).map_err(|e| e.to_string())
}

fn parse_axis(s: &str) -> Result<(usize, usize), String> {
    let (cell, user) = s
        .split_once(':')
        .ok_or_else(|| format!("expected cell:user, got `{s}`"))?;
    let cell: usize = cell
        .trim()
        .parse()
        .map_err(|e| format!("cell `{cell}`: {e}"))?;
    let user: usize = user
        .trim()
        .parse()
        .map_err(|e| format!("user `{user}`: {e}"))?;
    if cell == 0 || !(1..=2).contains(&user) {
        return Err(format!("cell is 1-based and user is 1 or 2, got `{s}`"));
    }
    Ok((cell - 1, user - 1))
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<tin_gdof::Error> for Failure {
    fn from(e: tin_gdof::Error) -> Self {
        input_error(e.to_string())
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Gen {
            cells,
            direct,
            cross,
            seed,
            out,
        } => cmd_gen(format, cells, direct, cross, seed, out.as_deref()),
        Command::Region { profile, out } => cmd_region(format, &profile, out.as_deref()),
        Command::Check { profile, point } => cmd_check(format, &profile, point),
        Command::Duality {
            profile,
            samples,
            seed,
            tol,
            out,
        } => cmd_duality(format, &profile, samples, seed, tol, out.as_deref()),
        Command::Plotdata {
            profile,
            x,
            y,
            fixed,
            resolution,
            out,
        } => cmd_plotdata(
            format,
            &profile,
            [x, y],
            &fixed,
            resolution as usize,
            out.as_deref(),
        ),
    }
}

fn load_profile(path: &Path) -> Result<NetworkProfile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let profile =
        parse_profile(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let (profile, swapped) = profile.normalize();
    let cells: Vec<String> = (0..swapped.len())
        .filter(|&k| swapped[k])
        .map(|k| (k + 1).to_string())
        .collect();
    if !cells.is_empty() {
        eprintln!(
            "warning: relabeled UEs in cell(s) {} so that UE 2 has the stronger direct link",
            cells.join(", ")
        );
    }
    Ok(profile)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report values serialize");
    text.push('\n');
    text
}

fn cmd_gen(
    format: Format,
    cells: usize,
    direct: Interval,
    cross: Interval,
    seed: u64,
    out: Option<&Path>,
) -> CmdResult {
    if cells == 0 {
        return Err(input_error("--cells must be at least 1"));
    }
    let profile = random_profile(cells, direct, cross, seed)?;
    let text = serialize_profile(&profile);
    let hash = profile_hash(&profile);
    match out {
        Some(path) => {
            write_file(path, &text)?;
            match format {
                Format::Text => println!("profile hash: {hash}"),
                Format::Structured => print!(
                    "{}",
                    pretty(
                        &json!({ "path": path.display().to_string(), "profile_hash": hash, "seed": seed })
                    )
                ),
            }
        }
        None => {
            print!("{text}");
            eprintln!("profile hash: {hash}");
        }
    }
    Ok(0)
}

fn cmd_region(format: Format, path: &Path, out: Option<&Path>) -> CmdResult {
    let profile = load_profile(path)?;
    let optimality = check_tin_optimality(&profile);
    let region = tin_optimal_region(&profile);
    let export = export_region(&profile, &region, &optimality);
    let optimal = optimality.verdict == Verdict::Optimal;
    match format {
        Format::Text => {
            println!("verdict: {}", if optimal { "optimal" } else { "unknown" });
            for v in &optimality.violations {
                println!("  violated: {v}");
            }
            if !optimal {
                println!("note: outer structure only under TIN-optimality conditions");
            }
            println!("rows: {}", region.rows().len());
            if out.is_none() {
                print!("{export}");
            }
        }
        Format::Structured => {
            let region_doc: Value = serde_json::from_str(&export).expect("export is valid JSON");
            print!(
                "{}",
                pretty(&json!({
                    "verdict": optimality.verdict,
                    "violations": optimality.violations,
                    "profile_hash": profile_hash(&profile),
                    "region": region_doc,
                }))
            );
        }
    }
    if let Some(out) = out {
        write_file(out, &export)?;
    }
    Ok(if optimal { 0 } else { EXIT_UNKNOWN })
}

fn row_json(index: usize, row: &Row, excess: f64) -> Value {
    json!({
        "row": index,
        "tag": row.tag.to_string(),
        "inequality": row.render(),
        "excess": excess,
    })
}

fn cmd_check(format: Format, path: &Path, point: Vec<f64>) -> CmdResult {
    let profile = load_profile(path)?;
    if point.len() != profile.dim() {
        return Err(input_error(format!(
            "expected {} coordinates for K = {}, got {}",
            profile.dim(),
            profile.cells(),
            point.len()
        )));
    }
    let point = GdofTuple::new(point)?;
    let region = tin_optimal_region(&profile);
    let membership = contains(&region, &point, TOL)?;
    let rows = region.rows();
    match format {
        Format::Text => {
            println!(
                "{}",
                if membership.inside {
                    "inside"
                } else {
                    "outside"
                }
            );
            for &(i, excess) in &membership.violations {
                println!(
                    "  row {i} {}: {} (excess {excess})",
                    rows[i].tag,
                    rows[i].render()
                );
            }
        }
        Format::Structured => {
            let violations: Vec<Value> = membership
                .violations
                .iter()
                .map(|&(i, e)| row_json(i, &rows[i], e))
                .collect();
            print!(
                "{}",
                pretty(&json!({
                    "inside": membership.inside,
                    "point": point,
                    "violations": violations,
                    "profile_hash": profile_hash(&profile),
                }))
            );
        }
    }
    Ok(if membership.inside { 0 } else { EXIT_OUTSIDE })
}

fn cmd_duality(
    format: Format,
    path: &Path,
    samples: usize,
    seed: u64,
    tol: f64,
    out: Option<&Path>,
) -> CmdResult {
    let profile = load_profile(path)?;
    let summary = duality_sweep(&profile, samples, seed, tol)?;
    let report = serde_json::to_value(&summary).expect("report serializes");
    if let Some(out) = out {
        write_file(out, &pretty(&report))?;
    }
    match format {
        Format::Text => {
            println!("profile hash: {}", summary.profile_hash);
            println!(
                "seed: {}, samples: {}, tolerance: {:e}",
                summary.seed, summary.samples, summary.tolerance
            );
            println!(
                "worst deficit downlink->uplink: {:e}",
                summary.ibc_to_imac_worst
            );
            println!(
                "worst deficit uplink->downlink: {:e}",
                summary.imac_to_ibc_worst
            );
            println!("uplink inputs reordered: {}", summary.normalized);
            println!(
                "{}: {} failing certificates",
                if summary.passed { "pass" } else { "FAIL" },
                summary.failures
            );
        }
        Format::Structured => print!("{}", pretty(&report)),
    }
    Ok(if summary.passed { 0 } else { EXIT_OUTSIDE })
}

fn cmd_plotdata(
    format: Format,
    path: &Path,
    axes: [(usize, usize); 2],
    fixed: &[f64],
    resolution: usize,
    out: Option<&Path>,
) -> CmdResult {
    let profile = load_profile(path)?;
    let cells = profile.cells();
    if axes.iter().any(|&(k, _)| k >= cells) {
        return Err(input_error(format!("axis cell out of range 1..={cells}")));
    }
    let idx = axes.map(|(k, l)| 2 * k + l);
    if idx[0] == idx[1] {
        return Err(input_error("--x and --y must differ"));
    }
    let others = profile.dim() - 2;
    if !fixed.is_empty() && fixed.len() != others {
        return Err(input_error(format!(
            "--fixed needs {others} values (one per remaining coordinate), got {}",
            fixed.len()
        )));
    }
    let mut full = vec![0.0; profile.dim()];
    let mut rest = fixed.iter();
    for (i, slot) in full.iter_mut().enumerate() {
        if !idx.contains(&i) {
            *slot = rest.next().copied().unwrap_or(0.0);
        }
    }
    let region: HalfSpaceRegion = tin_optimal_region(&profile);
    let slice = region.slice2(idx, &full)?;
    let data = plot::slice_data(&slice, resolution)?;
    let warning = data
        .empty
        .then_some("the fixed coordinates lie outside the region; the slice is empty");
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    let label = |(k, l): (usize, usize)| format!("d_{}^{}", k + 1, l + 1);
    let doc = json!({
        "profile_hash": profile_hash(&profile),
        "x_axis": label(axes[0]),
        "y_axis": label(axes[1]),
        "fixed": full,
        "polygon": data.polygon,
        "frontier": data.frontier,
        "raster": data.raster,
        "warning": warning,
    });
    if let Some(out) = out {
        write_file(out, &pretty(&doc))?;
    }
    match format {
        Format::Structured => print!("{}", pretty(&doc)),
        Format::Text => {
            println!("x: {}  y: {}", label(axes[0]), label(axes[1]));
            println!("frontier:");
            for p in &data.frontier {
                println!("  {} {}", p[0], p[1]);
            }
            println!("raster (# inside, . outside; y decreasing):");
            for row in data.raster.inside.iter().rev() {
                let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
                println!("  {line}");
            }
        }
    }
    Ok(0)
}
