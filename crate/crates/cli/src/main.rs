//! `maskit`: construct, inspect, check, reduce and render marked genus-2 orbifolds.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maskit_core::hyperbolic::Point;
use maskit_core::hyperbolic::METRIC_TOL;
use maskit_core::maskit::{check_with_tol, MinimalityReport};
use maskit_core::orbifold::{build_unwrapped, OrbifoldFile};
use maskit_core::verify::{run_samples, sample_params, SampleConfig, SampleRegion};
use maskit_core::{
    exceptional, oct, reduce, verify_minimality, ArcLabel, Bounds, Error, Holonomy, Side, Tiling,
};

#[derive(Parser)]
#[command(
    name = "maskit",
    version,
    about = "Maskit domain tools for genus-2 orbifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the octahedral orbifold.
    Oct(OutArgs),
    /// Write the exceptional orbifold.
    Exceptional(OutArgs),
    /// Write a randomly sampled orbifold.
    Random(RandomArgs),
    /// Print the lengths of the 27 arcs in the domain inequalities.
    Lengths(LengthArgs),
    /// Evaluate the domain inequalities; exit 0 iff the marking is in the domain.
    Check(CheckArgs),
    /// Verify chain minimality by bounded search; exit 0 iff verified.
    Minimality(BoundedArgs),
    /// Remark into the domain and write the result.
    Reduce(ReduceArgs),
    /// Run the sampled bracelet checks; exit 0 iff there are no violations.
    VerifyLemmas(LemmaArgs),
    /// Draw the base tiles, necklace and chosen arcs in the Klein disk as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InArgs {
    /// Orbifold file to read.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = Bounds::default().max_word)]
    max_word: usize,
    #[arg(long, default_value_t = Bounds::default().max_cross)]
    max_cross: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds::new(self.max_word, self.max_cross)
    }
}

#[derive(Args)]
struct RandomArgs {
    #[command(flatten)]
    out: OutArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the raw twists, giving a marking that is usually far from the domain.
    #[arg(long)]
    scrambled: bool,
}

#[derive(Args)]
struct LengthArgs {
    #[command(flatten)]
    input: InArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Tolerance on each inequality.
    #[arg(long, default_value_t = METRIC_TOL)]
    tol: f64,
}

#[derive(Args)]
struct BoundedArgs {
    #[command(flatten)]
    input: InArgs,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: InArgs,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    bounds: BoundArgs,
    /// Maximum number of remarking steps.
    #[arg(long, default_value_t = 30)]
    max_iter: usize,
}

#[derive(Args)]
struct LemmaArgs {
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    bounds: BoundArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    count: usize,
    /// Sample within this distance of the octahedral orbifold instead of uniformly.
    #[arg(long)]
    near_oct: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Comma-separated arc labels to draw, e.g. `beta24,betabar15^6`.
    #[arg(long, value_delimiter = ',')]
    arcs: Vec<ArcLabel>,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ParseError { .. } | Error::InvalidQuery(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Check(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Numeric(m) => (3, m),
            };
            eprintln!("maskit: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Oct(o) => {
            let (p, _) = oct()?;
            emit(&o, &OrbifoldFile::Params(p).serialize())
        }
        Command::Exceptional(o) => {
            let (p, _) = exceptional()?;
            emit(&o, &OrbifoldFile::Params(p).serialize())
        }
        Command::Random(a) => {
            let region = SampleConfig::default().region;
            let p = sample_params(a.seed, 0, &region);
            let file = if a.scrambled {
                OrbifoldFile::from_holonomy(&build_unwrapped(&p)?)
            } else {
                OrbifoldFile::Params(p.wrapped())
            };
            file.to_holonomy()?;
            emit(&a.out, &file.serialize())
        }
        Command::Lengths(a) => {
            let h = load(&a.input)?;
            let report = check_with_tol(&h, METRIC_TOL)?;
            let mut out = String::from("label,length\n");
            for e in &report.entries {
                let _ = writeln!(out, "{},{}", e.inequality.rhs, sig12(e.rhs_len));
            }
            emit(&a.out, &out)
        }
        Command::Check(a) => {
            if !(a.tol >= 0.0 && a.tol.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--tol must be non-negative, got {}",
                    a.tol
                )));
            }
            let h = load(&a.input)?;
            let report = check_with_tol(&h, a.tol)?;
            emit(&a.out, &report.to_csv())?;
            if report.in_domain {
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "not in the domain (worst margin {})",
                    sig12(report.worst_margin())
                )))
            }
        }
        Command::Minimality(a) => {
            let h = load(&a.input)?;
            let report: MinimalityReport = verify_minimality(&h, &a.bounds.bounds())?;
            emit(&a.out, &report.to_csv())?;
            if report.verified {
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "chain not minimal (worst margin {})",
                    sig12(report.worst_margin())
                )))
            }
        }
        Command::Reduce(a) => {
            let h = load(&a.input)?;
            match reduce(&h, &a.bounds.bounds(), a.max_iter) {
                Ok(r) => emit(&a.out, &OrbifoldFile::from_holonomy(&r).serialize()),
                Err(e @ Error::ReductionFailure { .. }) => Err(Failure::Check(e.to_string())),
                Err(e) => Err(e.into()),
            }
        }
        Command::VerifyLemmas(a) => {
            let mut cfg = SampleConfig {
                count: a.count,
                seed: a.seed,
                bounds: a.bounds.bounds(),
                ..SampleConfig::default()
            };
            if let Some(radius) = a.near_oct {
                cfg.region = SampleRegion::Around {
                    center: oct()?.0,
                    radius,
                };
            }
            if let Err(e) = cfg.validate() {
                return Err(Failure::Usage(e.to_string()));
            }
            let summary = run_samples(&cfg)?;
            emit(&a.out, &summary.to_csv())?;
            eprintln!(
                "samples {}, skipped {}, in domain {}, violations {}",
                summary.rows.len(),
                summary.skipped(),
                summary.in_domain(),
                summary.violations()
            );
            if summary.violations() == 0 {
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "{} violations",
                    summary.violations()
                )))
            }
        }
        Command::Render(a) => {
            let h = load(&a.input)?;
            let svg = render(&h, &a.arcs)?;
            emit(&a.out, &svg)
        }
    }
}

fn load(a: &InArgs) -> std::result::Result<Holonomy, Failure> {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.input.display())))?;
    let file = OrbifoldFile::parse(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?;
    Ok(file.to_holonomy()?)
}

fn emit(o: &OutArgs, text: &str) -> Outcome {
    match &o.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text)
        .map_err(|e| Failure::Numeric(format!("cannot write {}: {e}", path.display())))
}

/// Twelve significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        format!("{x:.*}", (11 - exp) as usize)
    } else {
        format!("{x:.11e}")
    }
}

const SCALE: f64 = 400.0;

fn klein_xy(p: &Point) -> (f64, f64) {
    let [x, y] = p.klein();
    (x * SCALE, -y * SCALE)
}

fn render(h: &Holonomy, arcs: &[ArcLabel]) -> std::result::Result<String, Failure> {
    let tiling = Tiling::new(h)?;
    let size = 1.05 * SCALE;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.1} {:.1} {:.1} {:.1}">"#,
        -size,
        -size,
        2.0 * size,
        2.0 * size
    );
    let _ = writeln!(
        svg,
        r#"<circle cx="0" cy="0" r="{SCALE:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for tile in tiling.tiles_within(1)? {
        let pts: Vec<String> = tile
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = klein_xy(v);
                format!("{x:.6},{y:.6}")
            })
            .collect();
        let fill = match tile.parity {
            Side::H => "#f4f4f4",
            Side::HBar => "#ffffff",
        };
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
            pts.join(" ")
        );
    }
    for i in 0..6 {
        let (x1, y1) = klein_xy(h.lift(i + 1));
        let (x2, y2) = klein_xy(h.lift((i + 1) % 6 + 1));
        let _ = writeln!(
            svg,
            r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}" stroke="black" stroke-width="4"/>"#
        );
    }
    for label in arcs {
        let arc = tiling
            .develop_label(label)
            .map_err(|e| Failure::Numeric(format!("{label}: {e}")))?;
        let (x1, y1) = klein_xy(h.lift(label.j()));
        let (x2, y2) = klein_xy(&arc.endpoint_lift);
        let _ = writeln!(
            svg,
            r##"<path d="M {x1:.6} {y1:.6} L {x2:.6} {y2:.6}" fill="none" stroke="#808080" stroke-width="4"><title>{label}</title></path>"##
        );
    }
    for i in 1..=6 {
        let (x, y) = klein_xy(h.lift(i));
        let _ = writeln!(
            svg,
            r#"<text x="{:.6}" y="{:.6}" font-size="14">{i}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
