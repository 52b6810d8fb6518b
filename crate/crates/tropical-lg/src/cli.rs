//! Command-line front end: configuration ingestion, command dispatch,
//! structured JSON output, and SVG rendering.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` non-generic
//! geometry, `3` verification failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    brute_force_potential, enumerate_families_parallel, potential_at, FamilySet,
};
use crate::geom2d::{Point, Scalar};
use crate::ringalg::Fan;
use crate::scattering::{
    build_diagram, check_joint_consistency, check_wall_crossing_with, Diagram,
};
use crate::svg;

/// A run configuration, read from a JSON file. All numbers are exact
/// strings (`"3"` or `"-1/2"`); fan rays are integer pairs and must be
/// primitive and listed counterclockwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub fan: Fan,
    #[serde(default)]
    pub points: Vec<Point>,
    /// Optional query points, used by `potential` (first entry), by
    /// `verify` (consecutive pairs), and by `oracle-compare`.
    #[serde(default)]
    pub queries: Vec<Point>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Config = serde_json::from_str(&text)?;
        Ok(cfg)
    }
}

#[derive(Parser)]
#[command(
    name = "tropical-lg",
    version,
    about = "Exact tropical disk enumeration, pointed potentials, and \
             scattering diagram verification on complete toric surfaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Write the primary JSON output here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Seed for random query generation (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Query point as "x,y" with exact rational coordinates, e.g.
    /// "-1/2,3" (overrides the config's queries).
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate disk families and emit the scattering diagram.
    Diagram(Common),
    /// Evaluate the pointed potential at a query point.
    Potential(Common),
    /// Run joint-consistency, wall-crossing, and oracle checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Test hook: drop wall K from the diagram before verifying.
        #[arg(long)]
        drop_wall: Option<usize>,
    },
    /// Compare the enumerated potential with the brute-force oracle.
    OracleCompare(Common),
    /// Render the diagram to SVG only.
    Render(Common),
}

/// Parses "x,y" with exact rational coordinates.
fn parse_query(s: &str) -> Result<Point> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("query must be \"x,y\", got {s:?}")))?;
    Ok(Point::new(x.trim().parse()?, y.trim().parse()?))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn build(common: &Common) -> Result<(Config, FamilySet, Diagram)> {
    let cfg = Config::load(&common.config)?;
    let fs = enumerate_families_parallel(&cfg.fan, &cfg.points)?;
    let d = build_diagram(&fs);
    Ok((cfg, fs, d))
}

fn svg_path(common: &Common, cfg: &Config) -> Option<PathBuf> {
    common.svg.clone().or_else(|| cfg.svg.clone())
}

fn json_path(common: &Common, cfg: &Config) -> Option<PathBuf> {
    common.json.clone().or_else(|| cfg.json.clone())
}

fn seed_of(common: &Common, cfg: &Config) -> u64 {
    common.seed.or(cfg.seed).unwrap_or(1)
}

fn cmd_diagram(common: &Common) -> Result<i32> {
    let (cfg, _fs, d) = build(common)?;
    write_output(json_path(common, &cfg).as_deref(), &to_pretty_json(&d)?)?;
    if let Some(p) = svg_path(common, &cfg) {
        std::fs::write(p, svg::render(&d))?;
    }
    Ok(0)
}

fn cmd_render(common: &Common) -> Result<i32> {
    let (cfg, _fs, d) = build(common)?;
    let path = svg_path(common, &cfg).ok_or_else(|| {
        Error::InvalidInput("render needs --svg or an svg path in the config".into())
    })?;
    std::fs::write(path, svg::render(&d))?;
    Ok(0)
}

#[derive(Serialize)]
struct PotentialDoc {
    q: Point,
    potential: crate::ringalg::PotentialElement,
}

fn cmd_potential(common: &Common) -> Result<i32> {
    let (cfg, fs, _d) = build(common)?;
    let q = match &common.q {
        Some(s) => parse_query(s)?,
        None => cfg
            .queries
            .first()
            .cloned()
            .ok_or_else(|| {
                Error::InvalidInput("potential needs --q or a queries entry".into())
            })?,
    };
    let potential = potential_at(&fs, &q)?;
    let doc = PotentialDoc { q, potential };
    write_output(json_path(common, &cfg).as_deref(), &to_pretty_json(&doc)?)?;
    Ok(0)
}

/// Draws points with denominator-997 coordinates inside the diagram's
/// clipping box until one is generic for the potential, giving up after a
/// hundred tries.
fn random_generic_point(
    d: &Diagram,
    fs: &FamilySet,
    rng: &mut ChaCha8Rng,
) -> Result<Point> {
    let (xmin, xmax, ymin, ymax) = svg::clip_box(d);
    let range = |lo: &Scalar, hi: &Scalar, rng: &mut ChaCha8Rng| {
        let lo = (lo.to_f64() * 997.0).ceil() as i64;
        let hi = (hi.to_f64() * 997.0).floor() as i64;
        Scalar::ratio(rng.gen_range(lo..=hi), 997)
    };
    for _ in 0..100 {
        let p = Point::new(range(&xmin, &xmax, rng), range(&ymin, &ymax, rng));
        if potential_at(fs, &p).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::NonGenericConfiguration(
        "could not draw a generic query point in 100 tries".into(),
    ))
}

#[derive(Serialize)]
struct VerifyReport {
    joints_checked: usize,
    failed_joints: Vec<usize>,
    wall_crossing_pairs: usize,
    failed_pairs: Vec<(Point, Point)>,
    oracle_points: usize,
    failed_oracle: Vec<Point>,
    pass: bool,
}

fn cmd_verify(common: &Common, drop_wall: Option<usize>) -> Result<i32> {
    let (cfg, fs, mut d) = build(common)?;
    if let Some(k) = drop_wall {
        d = d.drop_wall(k)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(common, &cfg));

    let failed_joints: Vec<usize> = (0..d.joints().len())
        .filter(|&j| !check_joint_consistency(&d, j))
        .collect();

    let pairs: Vec<(Point, Point)> = if cfg.queries.len() >= 2 {
        cfg.queries.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())).collect()
    } else {
        (0..5)
            .map(|_| {
                Ok((
                    random_generic_point(&d, &fs, &mut rng)?,
                    random_generic_point(&d, &fs, &mut rng)?,
                ))
            })
            .collect::<Result<_>>()?
    };
    let mut failed_pairs = vec![];
    for (q, q2) in &pairs {
        if !check_wall_crossing_with(&d, &fs, q, q2)? {
            failed_pairs.push((q.clone(), q2.clone()));
        }
    }

    let mut oracle_points = 0;
    let mut failed_oracle = vec![];
    if cfg.points.len() <= 2 {
        let qs: Vec<Point> = if cfg.queries.is_empty() {
            (0..3)
                .map(|_| random_generic_point(&d, &fs, &mut rng))
                .collect::<Result<_>>()?
        } else {
            cfg.queries.clone()
        };
        for q in qs {
            match brute_force_potential(&fs.fan().clone(), fs.points(), &q) {
                Ok(w) => {
                    oracle_points += 1;
                    if w != potential_at(&fs, &q)? {
                        failed_oracle.push(q);
                    }
                }
                Err(e) if e.is_non_generic() && cfg.queries.is_empty() => {
                    // A randomly drawn point can be non-generic for the
                    // oracle's finer stratification; skip it.
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
    }

    let pass = failed_joints.is_empty() && failed_pairs.is_empty() && failed_oracle.is_empty();
    let report = VerifyReport {
        joints_checked: d.joints().len(),
        failed_joints,
        wall_crossing_pairs: pairs.len(),
        failed_pairs,
        oracle_points,
        failed_oracle,
        pass,
    };
    write_output(json_path(common, &cfg).as_deref(), &to_pretty_json(&report)?)?;
    Ok(if pass { 0 } else { 3 })
}

#[derive(Serialize)]
struct OracleDoc {
    q: Point,
    matches: bool,
}

fn cmd_oracle_compare(common: &Common) -> Result<i32> {
    let (cfg, fs, d) = build(common)?;
    let qs: Vec<Point> = match &common.q {
        Some(s) => vec![parse_query(s)?],
        None if !cfg.queries.is_empty() => cfg.queries.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed_of(common, &cfg));
            (0..5)
                .map(|_| random_generic_point(&d, &fs, &mut rng))
                .collect::<Result<_>>()?
        }
    };
    let mut docs = vec![];
    let mut all = true;
    for q in qs {
        let lhs = potential_at(&fs, &q)?;
        let rhs = brute_force_potential(&fs.fan().clone(), fs.points(), &q)?;
        let matches = lhs == rhs;
        all &= matches;
        docs.push(OracleDoc { q, matches });
    }
    write_output(json_path(common, &cfg).as_deref(), &to_pretty_json(&docs)?)?;
    Ok(if all { 0 } else { 3 })
}

/// Parses the process arguments, dispatches, and maps errors to exit
/// codes. Errors are reported as one-line JSON on stderr.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders --help/--version through the error path too.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    let result = match &cli.cmd {
        Cmd::Diagram(c) => cmd_diagram(c),
        Cmd::Potential(c) => cmd_potential(c),
        Cmd::Verify { common, drop_wall } => cmd_verify(common, *drop_wall),
        Cmd::OracleCompare(c) => cmd_oracle_compare(c),
        Cmd::Render(c) => cmd_render(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let non_generic = e.is_non_generic();
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "non_generic": non_generic })
            );
            if non_generic {
                2
            } else {
                1
            }
        }
    }
}
