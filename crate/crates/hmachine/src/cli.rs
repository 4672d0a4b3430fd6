//! Command-line surface. `run` writes everything through the given sinks so
//! tests can drive it without a process.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmachine_core::algebra::parse_ratfunc;
use hmachine_core::arith::{naive_height_q, CurveData};
use hmachine_core::geom::{geom_canonical_height, geom_naive_height};
use hmachine_core::moriwaki::{moriwaki_height, MoriwakiConfig, PolyPoint};
use hmachine_core::real::Precision;
use hmachine_core::Error;

use crate::curvefile::{CurveFile, Field, Model};
use crate::error::{AppError, AppResult};
use crate::fixtures;
use crate::report::{curve_info_q, curve_info_surface, fmt_g, NORMALIZATION};
use crate::scan::{run_scan, ScanOptions};
use crate::verify::{format_checks, run_suite};

/// Tag on Moriwaki output lines.
const FS_NORMALIZATION: &str = "[Fubini-Study O(1) on P^1_Z, section at u = inf]";

#[derive(Debug, Parser)]
#[command(name = "hmachine", version, about = "Heights on elliptic curves and elliptic surfaces over P^1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Curve file (TOML with [curve] and [[section]] tables).
    #[arg(long, conflicts_with = "fixture")]
    pub curve: Option<PathBuf>,
    /// Built-in curve file; see `hmachine fixtures`.
    #[arg(long)]
    pub fixture: Option<String>,
}

impl Input {
    fn load(&self) -> AppResult<CurveFile> {
        match (&self.curve, &self.fixture) {
            (Some(p), None) => CurveFile::load(p),
            (None, Some(name)) => fixtures::load(name),
            _ => Err(AppError::Usage("give exactly one of --curve FILE or --fixture NAME".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Naive,
    Canonical,
    Geometric,
    Moriwaki,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant, j-invariant, bad places and isotriviality.
    CurveInfo {
        #[command(flatten)]
        input: Input,
    },
    /// One height of one section or point.
    Height {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Section name; defaults to the first one in the file.
        #[arg(long)]
        section: Option<String>,
        /// With --x, a point given inline instead of a file; only Q(u).
        #[arg(long)]
        field: Option<String>,
        #[arg(long, requires = "field")]
        x: Option<String>,
        #[arg(long, env = "HMACHINE_PRECISION", default_value_t = Precision::DEFAULT_BITS)]
        precision: usize,
        /// Quadrature tolerance for --kind moriwaki.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Specialization scan over t; writes CSV.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        theorem: u8,
        /// Section expression (`P`, `2P`, `P - Q`); repeat for a rank scan.
        #[arg(long)]
        section: Vec<String>,
        /// Parameter bound max(|p|, |q|) for theorems 2 to 4.
        #[arg(long)]
        tmax: Option<u64>,
        /// Parameter bound for theorem 1.
        #[arg(long)]
        hbound: Option<u64>,
        /// Theorem 4 only: this many log-spaced samples up to --tmax.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, env = "HMACHINE_PRECISION", default_value_t = Precision::DEFAULT_BITS)]
        precision: usize,
        /// Rank-drop threshold for theorem 1.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// CSV destination; stdout when absent (the summary then goes to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a property suite and prints a pass/fail table.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Lists the built-in curve files.
    Fixtures,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> AppResult<()> {
    let io = |e| AppError::io("<stdout>", e);
    match cli.command {
        Command::CurveInfo { input } => {
            let f = input.load()?;
            let text = match &f.model {
                Model::Rational { curve, .. } => curve_info_q(curve)?,
                Model::Surface(s) => curve_info_surface(s)?,
                Model::ProjectiveLine { points, .. } => {
                    let mut t = String::from("field: Q(u)\n");
                    for (name, x) in points {
                        t.push_str(&format!("point {}: [{} : 1]\n", name, x.display_with("u")));
                    }
                    t
                }
            };
            out.write_all(text.as_bytes()).map_err(io)?;
        }
        Command::Height { input, kind, section, field, x, precision, tol } => {
            let line = height(&input, kind, section.as_deref(), field.as_deref(), x.as_deref(), precision, tol)?;
            out.write_all(line.as_bytes()).map_err(io)?;
        }
        Command::Scan { input, theorem, section, tmax, hbound, samples, precision, tol, jobs, out: dest } => {
            let f = input.load()?;
            let Model::Surface(surface) = &f.model else {
                return Err(Error::Unsupported(format!("scans need a Q(T) surface, {} is over {}", f.path.display(), f.field))
                    .into());
            };
            let mut opts = ScanOptions {
                theorem,
                sections: section,
                samples,
                jobs,
                precision: Precision::bits(precision),
                ..ScanOptions::default()
            };
            opts.tmax = tmax.or(f.scan.tmax).unwrap_or(opts.tmax);
            opts.hbound = hbound.or(f.scan.hbound).unwrap_or(opts.hbound);
            opts.tol = tol.or(f.scan.tol).unwrap_or(opts.tol);
            let summary = match &dest {
                Some(path) => {
                    let mut file = File::create(path).map_err(|e| AppError::io(path, e))?;
                    run_scan(surface, &opts, &mut file)?.summary
                }
                None => run_scan(surface, &opts, out)?.summary,
            };
            let sink: &mut dyn Write = if dest.is_some() { out } else { err };
            for l in summary {
                writeln!(sink, "{}", l).map_err(io)?;
            }
        }
        Command::Verify { suite } => {
            let checks = run_suite(&suite)?;
            out.write_all(format_checks(&checks).as_bytes()).map_err(io)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(AppError::Failed(failed));
            }
        }
        Command::Fixtures => {
            for name in fixtures::names() {
                writeln!(out, "{}", name).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn pick<'a, T>(points: &'a [(String, T)], name: Option<&str>) -> AppResult<(&'a str, &'a T)> {
    let found = match name {
        Some(n) => points.iter().find(|p| p.0 == n),
        None => points.first(),
    };
    found.map(|p| (p.0.as_str(), &p.1)).ok_or_else(|| match name {
        Some(n) => AppError::Usage(format!("no section named {:?}", n)),
        None => AppError::Usage("the file has no sections".into()),
    })
}

fn incompatible(kind: Kind, field: Field) -> AppError {
    AppError::Usage(format!("--kind {} does not apply to curves over {}", format!("{:?}", kind).to_lowercase(), field))
}

fn height(
    input: &Input,
    kind: Kind,
    section: Option<&str>,
    field: Option<&str>,
    x: Option<&str>,
    precision: usize,
    tol: Option<f64>,
) -> AppResult<String> {
    let cfg = MoriwakiConfig { tol: tol.unwrap_or(MoriwakiConfig::default().tol), ..MoriwakiConfig::default() };
    let moriwaki_line = |name: &str, p: &PolyPoint| -> AppResult<String> {
        let h = moriwaki_height(p, &cfg)?;
        Ok(format!(
            "moriwaki {} = {} (finite {}, arch {}, quadrature error {}) {}\n",
            name,
            fmt_g(h.total()),
            fmt_g(h.finite),
            fmt_g(h.arch),
            fmt_g(h.error),
            FS_NORMALIZATION
        ))
    };
    if let Some(x) = x {
        if input.curve.is_some() || input.fixture.is_some() {
            return Err(AppError::Usage("--x replaces --curve/--fixture".into()));
        }
        let field = field.and_then(Field::parse).ok_or_else(|| AppError::Usage("--x needs --field Q(u)".into()))?;
        if field != Field::Qu || kind != Kind::Moriwaki {
            return Err(incompatible(kind, field));
        }
        let x = parse_ratfunc(x, "u")?;
        return moriwaki_line("x", &PolyPoint::from_ratfunc(&x));
    }
    let f = input.load()?;
    if let Some(fl) = field {
        if Field::parse(fl) != Some(f.field) {
            return Err(AppError::Usage(format!("--field {} does not match the file's field {}", fl, f.field)));
        }
    }
    let prec = Precision::bits(precision);
    match (&f.model, kind) {
        (Model::Rational { curve, points }, Kind::Naive) => {
            let (name, p) = pick(points, section)?;
            Ok(format!("naive {} = {} (log H(x)) {}\n", name, fmt_g(naive_height_q(curve, p)), NORMALIZATION))
        }
        (Model::Rational { curve, points }, Kind::Canonical) => {
            let (name, p) = pick(points, section)?;
            let r = CurveData::new(curve)?.canonical_height(p, prec)?;
            let mut s = format!("canonical {} = {} {}\n", name, fmt_g(r.canonical), NORMALIZATION);
            for (place, v) in &r.local_terms {
                s.push_str(&format!("  local {} = {} {}\n", place, fmt_g(*v), NORMALIZATION));
            }
            Ok(s)
        }
        (Model::Surface(surface), Kind::Naive) => {
            let (name, p) = pick(surface.sections(), section)?;
            Ok(format!("naive {} = {} (deg x) {}\n", name, geom_naive_height(surface, p), NORMALIZATION))
        }
        (Model::Surface(surface), Kind::Geometric) => {
            let (name, p) = pick(surface.sections(), section)?;
            let r = geom_canonical_height(surface, name, p)?;
            Ok(format!(
                "geometric {} = {} ({}, depth {}, {}) {}\n",
                name,
                r.canonical,
                fmt_g(r.approx),
                r.depth,
                if r.exact { "exact" } else { "isotrivial, not certified" },
                NORMALIZATION
            ))
        }
        (Model::ProjectiveLine { points, .. }, Kind::Moriwaki) => {
            let (name, x) = pick(points, section)?;
            moriwaki_line(name, &PolyPoint::from_ratfunc(x))
        }
        _ => Err(incompatible(kind, f.field)),
    }
}
