//! Parallel scan driver. Rows are computed in fixed-size chunks on a rayon
//! pool and written in input order, so the output does not depend on the
//! number of workers and a killed scan leaves whole rows behind.

use std::io::Write;

use hmachine_core::algebra::{Integer, Rational, RationalFunction};
use hmachine_core::geom::EllipticSurface;
use hmachine_core::real::Precision;
use hmachine_core::specialize::{
    linear_envelope, loglog_slope, scan_parameters, sqrt_envelope, sup_residual, theorem2_points, ScanContext,
    ScanRecord, DEFAULT_RANK_TOL,
};
use hmachine_core::weil::{height_samples, ProjPointQ};
use hmachine_core::{CurvePoint, Error};
use rayon::prelude::*;

use crate::error::{AppError, AppResult};
use crate::report::{csv_row, fmt_g, CSV_HEADER, NORMALIZATION};

const CHUNK: usize = 256;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub theorem: u8,
    /// Section expressions such as `P`, `2P`, `P - Q`; the first one drives
    /// the ratio columns.
    pub sections: Vec<String>,
    pub tmax: u64,
    pub hbound: u64,
    /// Use this many log-spaced height samples up to `tmax` instead of every
    /// parameter (theorem 4).
    pub samples: Option<usize>,
    pub tol: f64,
    pub jobs: usize,
    pub precision: Precision,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            theorem: 3,
            sections: Vec::new(),
            tmax: 50,
            hbound: 20,
            samples: None,
            tol: DEFAULT_RANK_TOL,
            jobs: 1,
            precision: Precision::default(),
        }
    }
}

pub struct ScanOutcome {
    pub rows: Vec<ScanRecord>,
    pub summary: Vec<String>,
}

/// Resolves `[k]NAME (± [k]NAME)*` against the surface's sections.
pub fn section_expr(surface: &EllipticSurface, expr: &str) -> AppResult<CurvePoint<RationalFunction>> {
    let bad = |m: &str| AppError::Usage(format!("section expression {:?}: {}", expr, m));
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let curve = surface.curve();
    let mut acc = CurvePoint::Infinity;
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if !first {
            return Err(bad("expected + or -"));
        }
        first = false;
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let k: i64 = if digits == 0 { 1 } else { rest[..digits].parse().map_err(|_| bad("coefficient too large"))? };
        rest = &rest[digits..];
        rest = rest.strip_prefix('*').unwrap_or(rest);
        let len = rest.find(['+', '-']).unwrap_or(rest.len());
        let name = &rest[..len];
        rest = &rest[len..];
        let p = surface.section(name).ok_or_else(|| bad(&format!("no section named {:?}", name)))?;
        acc = curve.add(&acc, &curve.mul_scalar(sign * k, p)?)?;
    }
    Ok(acc)
}

/// `ceil(n/10)` heights spread geometrically over `[10, hmax]`, ten
/// parameters of exact height each.
pub fn log_spaced_samples(hmax: u64, n: usize) -> Vec<ProjPointQ> {
    let heights = n.div_ceil(10).max(1);
    let lo = 10f64.min(hmax as f64).ln();
    let hi = (hmax.max(2) as f64).ln();
    let mut out: Vec<ProjPointQ> = Vec::with_capacity(n);
    let mut last = 0;
    for k in 0..heights {
        let f = if heights == 1 { 1.0 } else { k as f64 / (heights - 1) as f64 };
        let h = ((lo + (hi - lo) * f).exp().round() as u64).max(2);
        if h == last {
            continue;
        }
        last = h;
        let mut grid = 5;
        let mut pts = height_samples(h, grid);
        while pts.len() < 10 && grid < h {
            grid *= 2;
            pts = height_samples(h, grid);
        }
        out.extend(pts.into_iter().take(10));
    }
    out.truncate(n);
    out
}

pub fn parameters(opts: &ScanOptions) -> AppResult<Vec<ProjPointQ>> {
    Ok(match (opts.theorem, opts.samples) {
        (1, _) => scan_parameters(opts.hbound)?,
        (4, Some(n)) => log_spaced_samples(opts.tmax, n),
        _ => scan_parameters(opts.tmax)?,
    })
}

fn pool(jobs: usize) -> AppResult<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(AppError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start {} workers: {}", jobs, e)))
}

/// Runs the scan, streaming the CSV to `csv`.
pub fn run_scan(surface: &EllipticSurface, opts: &ScanOptions, csv: &mut dyn Write) -> AppResult<ScanOutcome> {
    if !(1..=4).contains(&opts.theorem) {
        return Err(AppError::Usage(format!("unknown theorem {}; expected 1, 2, 3 or 4", opts.theorem)));
    }
    let names: Vec<String> = if opts.sections.is_empty() {
        let first = surface.sections().first().ok_or_else(|| Error::Precondition("the surface has no sections".into()))?;
        vec![first.0.clone()]
    } else {
        opts.sections.clone()
    };
    let sections: Vec<_> = names.iter().map(|n| section_expr(surface, n)).collect::<AppResult<_>>()?;
    let ctx = if opts.theorem == 1 {
        ScanContext::for_rank(surface, &sections, opts.precision, opts.tol)?
    } else {
        ScanContext::new(surface, &sections, opts.precision)?
    };
    let ts = parameters(opts)?;
    let pool = pool(opts.jobs)?;
    let io = |e| AppError::io("<csv>", e);
    writeln!(csv, "{}", CSV_HEADER).map_err(io)?;
    let rank = opts.theorem == 1;
    let mut rows = Vec::with_capacity(ts.len());
    for chunk in ts.chunks(CHUNK) {
        let results: Vec<Result<ScanRecord, Error>> =
            pool.install(|| chunk.par_iter().map(|t| ctx.record(t, rank)).collect());
        let mut text = String::new();
        let mut failure = None;
        for r in results {
            match r {
                Ok(rec) => {
                    text.push_str(&csv_row(&rec));
                    text.push('\n');
                    rows.push(rec);
                }
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        csv.write_all(text.as_bytes()).map_err(io)?;
        csv.flush().map_err(io)?;
        if let Some(e) = failure {
            return Err(e.into());
        }
    }
    let summary = match opts.theorem {
        1 => summary_theorem1(&rows, opts),
        2 => summary_theorem2(&ctx, &ts, &pool)?,
        3 => summary_theorem3(&rows),
        _ => summary_theorem4(&rows),
    };
    Ok(ScanOutcome { rows, summary })
}

fn geom_f64(q: &Rational) -> f64 {
    hmachine_core::real::float_to_f64(&hmachine_core::real::rational_to_float(q, 64))
}

fn good(rows: &[ScanRecord]) -> Vec<&ScanRecord> {
    rows.iter().filter(|r| !r.flags.bad_fiber && r.ratio.is_finite()).collect()
}

/// Largest `|ratio − ĥ_geom|` over the lowest and highest tenth by `h(t)`.
pub fn decile_deviations(rows: &[ScanRecord]) -> Option<(f64, f64)> {
    let mut g = good(rows);
    if g.len() < 10 {
        return None;
    }
    g.sort_by(|a, b| a.h_t.total_cmp(&b.h_t));
    let geom = geom_f64(&g[0].hhat_geom);
    let k = g.len() / 10;
    let dev = |rs: &[&ScanRecord]| rs.iter().map(|r| (r.ratio - geom).abs()).fold(0.0, f64::max);
    Some((dev(&g[..k]), dev(&g[g.len() - k..])))
}

/// `C` fitted on the lower half of the rows by `h(t)` and the largest
/// `|ratio − ĥ_geom|·√h(t)` on the upper half.
pub fn sqrt_envelope_split(rows: &[ScanRecord]) -> Option<(f64, f64)> {
    let mut g: Vec<ScanRecord> = good(rows).into_iter().cloned().collect();
    if g.len() < 2 {
        return None;
    }
    g.sort_by(|a, b| a.h_t.total_cmp(&b.h_t));
    let upper = g.split_off(g.len() / 2);
    Some((sqrt_envelope(&g), sqrt_envelope(&upper)))
}

fn summary_theorem3(rows: &[ScanRecord]) -> Vec<String> {
    let g = good(rows);
    let geom = rows.first().map(|r| r.hhat_geom.to_string()).unwrap_or_default();
    let mut out = vec![format!(
        "theorem 3: rows {} good {} hhat_geom {} {}",
        rows.len(),
        g.len(),
        geom,
        NORMALIZATION
    )];
    if let Some((bottom, top)) = decile_deviations(rows) {
        out.push(format!(
            "theorem 3: max |ratio - hhat_geom| bottom decile {} top decile {} {}",
            fmt_g(bottom),
            fmt_g(top),
            NORMALIZATION
        ));
    }
    out.push(format!("theorem 3: sqrt envelope C {} {}", fmt_g(sqrt_envelope(rows)), NORMALIZATION));
    if let Some((fit, held)) = sqrt_envelope_split(rows) {
        out.push(format!(
            "theorem 3: C fitted on lower half {} upper half needs {} ({}) {}",
            fmt_g(fit),
            fmt_g(held),
            if held <= fit { "validated" } else { "not validated" },
            NORMALIZATION
        ));
    }
    out
}

/// `(h(t), |ĥ(P_t) − ĥ_geom·h(t)|)` over the good rows.
pub fn residual_points(rows: &[ScanRecord]) -> Vec<(f64, f64)> {
    good(rows)
        .iter()
        .map(|r| (r.h_t, (r.hhat_spec - geom_f64(&r.hhat_geom) * r.h_t).abs()))
        .collect()
}

fn summary_theorem4(rows: &[ScanRecord]) -> Vec<String> {
    let slope = loglog_slope(&residual_points(rows));
    vec![
        format!("theorem 4: rows {} good {} {}", rows.len(), good(rows).len(), NORMALIZATION),
        format!(
            "theorem 4: sup |residual_t4| {} log-log slope {} {}",
            fmt_g(sup_residual(rows)),
            slope.map(fmt_g).unwrap_or_else(|| "nan".into()),
            NORMALIZATION
        ),
    ]
}

fn summary_theorem2(ctx: &ScanContext, ts: &[ProjPointQ], pool: &rayon::ThreadPool) -> AppResult<Vec<String>> {
    let per_t: Vec<Result<Vec<(f64, f64)>, Error>> =
        pool.install(|| ts.par_iter().map(|t| theorem2_points(ctx, std::slice::from_ref(t))).collect());
    let mut pts = Vec::new();
    for p in per_t {
        pts.extend(p?);
    }
    let env = linear_envelope(&pts)?;
    let fit: Vec<(f64, f64)> = pts.iter().step_by(2).copied().collect();
    let held: Vec<(f64, f64)> = pts.iter().skip(1).step_by(2).copied().collect();
    let mut out = vec![format!(
        "theorem 2: |hhat - h_naive| <= c*h(t) + c' with c {} c' {} over {} fibers {}",
        fmt_g(env.c),
        fmt_g(env.c_prime),
        pts.len(),
        NORMALIZATION
    )];
    if !fit.is_empty() && !held.is_empty() {
        let half = linear_envelope(&fit)?;
        let excess = held.iter().map(|(x, y)| y - half.c * x - half.c_prime).fold(f64::NEG_INFINITY, f64::max);
        let over = held.iter().filter(|(x, y)| !half.holds(*x, *y, 0.0)).count();
        out.push(format!(
            "theorem 2: even-row fit c {} c' {}; {} of {} odd rows above it, max excess {} {}",
            fmt_g(half.c),
            fmt_g(half.c_prime),
            over,
            held.len(),
            fmt_g(excess.max(0.0)),
            NORMALIZATION
        ));
    }
    Ok(out)
}

fn summary_theorem1(rows: &[ScanRecord], opts: &ScanOptions) -> Vec<String> {
    let mut flagged: Vec<&ScanRecord> = rows.iter().filter(|r| r.flags.rank_drop).collect();
    flagged.sort_by_key(|r| r.t.naive_size());
    let confirmed = flagged.iter().filter(|r| r.flags.confirmed).count();
    let max_h = flagged.iter().map(|r| r.t.naive_size()).max().unwrap_or_else(|| Integer::from(0));
    let list: Vec<String> = flagged.iter().map(|r| r.t.to_string()).collect();
    vec![
        format!(
            "theorem 1: {} of {} fibers flagged (tol {}), {} confirmed, largest H(t) {} {}",
            flagged.len(),
            rows.len(),
            fmt_g(opts.tol),
            confirmed,
            max_h,
            NORMALIZATION
        ),
        format!("theorem 1: exceptional set {{{}}}", list.join(", ")),
    ]
}

/// Flagged parameters of a rank scan, sorted by height.
pub fn exceptional_set(rows: &[ScanRecord]) -> Vec<ProjPointQ> {
    let mut v: Vec<&ScanRecord> = rows.iter().filter(|r| r.flags.rank_drop).collect();
    v.sort_by_key(|r| r.t.naive_size());
    v.into_iter().map(|r| r.t.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvefile::Model;
    use crate::fixtures;

    fn tt() -> EllipticSurface {
        match fixtures::load("tt").unwrap().model {
            Model::Surface(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn section_expressions() {
        let s = tt();
        let p = s.section("P").unwrap().clone();
        let c = s.curve();
        assert_eq!(section_expr(&s, "P").unwrap(), p);
        assert_eq!(section_expr(&s, "2P").unwrap(), c.double(&p).unwrap());
        assert_eq!(section_expr(&s, "P - P").unwrap(), CurvePoint::Infinity);
        let q = s.section("Q").unwrap();
        assert_eq!(section_expr(&s, "-P+2*Q").unwrap(), c.add(&c.neg(&p).unwrap(), &c.double(q).unwrap()).unwrap());
        assert!(section_expr(&s, "R").is_err());
        assert!(section_expr(&s, "P Q").is_err());
    }

    #[test]
    fn samples_have_the_requested_size() {
        let v = log_spaced_samples(1_000_000, 500);
        assert_eq!(v.len(), 500);
        assert!(v.iter().all(|t| t.naive_size() >= Integer::from(10)));
    }

    #[test]
    fn output_does_not_depend_on_workers() {
        let s = tt();
        let mut outs = Vec::new();
        for jobs in [1, 3] {
            let opts = ScanOptions { theorem: 3, tmax: 8, jobs, ..ScanOptions::default() };
            let mut buf = Vec::new();
            run_scan(&s, &opts, &mut buf).unwrap();
            outs.push(buf);
        }
        assert_eq!(outs[0], outs[1]);
        let text = String::from_utf8(outs.remove(0)).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.lines().skip(1).all(|l| l.split(',').count() == 9));
    }
}
