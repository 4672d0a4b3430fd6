//! Plain-text curve files.
//!
//! ```toml
//! [curve]
//! field = "Q(T)"
//! a4 = "-T^2"
//! a6 = "T^2"
//!
//! [[section]]
//! name = "P"
//! x = "T"
//! y = "T"
//!
//! [scan]
//! tmax = 200
//! ```
//!
//! Missing coefficients are 0. Over `Q(u)` a section may omit `y`; it is
//! then the point `[x : 1]` of the projective line.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use hmachine_core::algebra::{parse_ratfunc, parse_rational, Rational, RationalFunction};
use hmachine_core::geom::EllipticSurface;
use hmachine_core::{CurvePoint, Error, WeierstrassCurve};
use serde::Deserialize;
use toml::Spanned;

use crate::error::{AppError, AppResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Q,
    QT,
    Qu,
}

impl Field {
    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "Q" => Some(Field::Q),
            "Q(T)" => Some(Field::QT),
            "Q(u)" => Some(Field::Qu),
            _ => None,
        }
    }

    /// Name of the function-field variable.
    pub fn var(self) -> Option<&'static str> {
        match self {
            Field::Q => None,
            Field::QT => Some("T"),
            Field::Qu => Some("u"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Q => "Q",
            Field::QT => "Q(T)",
            Field::Qu => "Q(u)",
        })
    }
}

/// Defaults for `scan` read from the file; command-line flags win.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    pub tmax: Option<u64>,
    pub hbound: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    curve: Spanned<RawCurve>,
    #[serde(default)]
    section: Vec<RawSection>,
    #[serde(default)]
    scan: ScanParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    field: Spanned<String>,
    a1: Option<Spanned<String>>,
    a2: Option<Spanned<String>>,
    a3: Option<Spanned<String>>,
    a4: Option<Spanned<String>>,
    a6: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    name: Spanned<String>,
    x: Spanned<String>,
    y: Option<Spanned<String>>,
}

#[derive(Clone, Debug)]
pub enum Model {
    Rational { curve: WeierstrassCurve<Rational>, points: Vec<(String, CurvePoint<Rational>)> },
    Surface(EllipticSurface),
    /// Points of P¹ over ℚ(u), as `x` with `[x : 1]`. The curve, if any
    /// coefficient was given, is only used to validate full points.
    ProjectiveLine { curve: Option<WeierstrassCurve<RationalFunction>>, points: Vec<(String, RationalFunction)> },
}

#[derive(Clone, Debug)]
pub struct CurveFile {
    pub path: PathBuf,
    pub field: Field,
    pub model: Model,
    pub scan: ScanParams,
}

impl CurveFile {
    pub fn load(path: &Path) -> AppResult<CurveFile> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        CurveFile::parse(&text, path)
    }

    /// `path` is only used in error messages.
    pub fn parse(text: &str, path: &Path) -> AppResult<CurveFile> {
        let loc = Locator { text, path };
        let raw: RawFile = toml::from_str(text).map_err(|e| {
            let start = e.span().map(|s| s.start).unwrap_or(0);
            loc.error(start, e.message().to_string())
        })?;
        let span = raw.curve.span();
        let rc = raw.curve.into_inner();
        let field = Field::parse(rc.field.get_ref())
            .ok_or_else(|| loc.error(rc.field.span().start, format!("unknown field {:?}; expected Q, Q(T) or Q(u)", rc.field.get_ref())))?;
        let coeffs = [&rc.a1, &rc.a2, &rc.a3, &rc.a4, &rc.a6];
        let mut names = BTreeSet::new();
        for s in &raw.section {
            if !names.insert(s.name.get_ref().clone()) {
                return Err(loc.error(s.name.span().start, format!("duplicate section name {:?}", s.name.get_ref())));
            }
        }
        let model = match field {
            Field::Q => {
                let a = coeffs.map(|c| loc.value(c.as_ref(), parse_rational));
                let [a1, a2, a3, a4, a6] = collect5(a)?;
                let curve = WeierstrassCurve::new(a1, a2, a3, a4, a6).map_err(|e| loc.core(span.start, e))?;
                let mut points = Vec::new();
                for s in &raw.section {
                    let p = match &s.y {
                        Some(y) => CurvePoint::affine(
                            loc.value(Some(&s.x), parse_rational)?,
                            loc.value(Some(y), parse_rational)?,
                        ),
                        None => return Err(loc.error(s.name.span().start, "a point over Q needs both x and y".into())),
                    };
                    if !curve.contains(&p) {
                        return Err(loc.off_curve(s));
                    }
                    points.push((s.name.get_ref().clone(), p));
                }
                Model::Rational { curve, points }
            }
            Field::QT | Field::Qu => {
                let var = field.var().expect("function field");
                let parse = |s: &str| parse_ratfunc(s, var);
                let a = coeffs.map(|c| loc.value(c.as_ref(), parse));
                let [a1, a2, a3, a4, a6] = collect5(a)?;
                let any_coeff = coeffs.iter().any(|c| c.is_some());
                let curve = if field == Field::QT || any_coeff {
                    Some(WeierstrassCurve::new(a1, a2, a3, a4, a6).map_err(|e| loc.core(span.start, e))?)
                } else {
                    None
                };
                if field == Field::QT {
                    let curve = curve.expect("built above");
                    let mut sections = Vec::new();
                    for s in &raw.section {
                        let Some(y) = &s.y else {
                            return Err(loc.error(s.name.span().start, "a section over Q(T) needs both x and y".into()));
                        };
                        let p = CurvePoint::affine(loc.value(Some(&s.x), parse)?, loc.value(Some(y), parse)?);
                        if !curve.contains(&p) {
                            return Err(loc.off_curve(s));
                        }
                        sections.push((s.name.get_ref().clone(), p));
                    }
                    Model::Surface(EllipticSurface::new(curve, sections).map_err(|e| loc.core(span.start, e))?)
                } else {
                    let mut points = Vec::new();
                    for s in &raw.section {
                        let x = loc.value(Some(&s.x), parse)?;
                        if let (Some(c), Some(y)) = (&curve, &s.y) {
                            if !c.contains(&CurvePoint::affine(x.clone(), loc.value(Some(y), parse)?)) {
                                return Err(loc.off_curve(s));
                            }
                        }
                        points.push((s.name.get_ref().clone(), x));
                    }
                    Model::ProjectiveLine { curve, points }
                }
            }
        };
        Ok(CurveFile { path: path.to_path_buf(), field, model, scan: raw.scan })
    }

    pub fn section_names(&self) -> Vec<String> {
        match &self.model {
            Model::Rational { points, .. } => points.iter().map(|p| p.0.clone()).collect(),
            Model::Surface(s) => s.sections().iter().map(|p| p.0.clone()).collect(),
            Model::ProjectiveLine { points, .. } => points.iter().map(|p| p.0.clone()).collect(),
        }
    }
}

fn collect5<T>(a: [AppResult<T>; 5]) -> AppResult<[T; 5]> {
    let [a1, a2, a3, a4, a6] = a;
    Ok([a1?, a2?, a3?, a4?, a6?])
}

struct Locator<'a> {
    text: &'a str,
    path: &'a Path,
}

impl Locator<'_> {
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
        (line, column)
    }

    fn error(&self, offset: usize, message: String) -> AppError {
        let (line, column) = self.line_col(offset);
        AppError::CurveFile { path: self.path.to_path_buf(), line, column, message }
    }

    fn core(&self, offset: usize, e: Error) -> AppError {
        self.error(offset, e.to_string())
    }

    fn off_curve(&self, s: &RawSection) -> AppError {
        self.error(s.name.span().start, format!("section {} is not on the curve", s.name.get_ref()))
    }

    /// Parses a string value; grammar errors point into the string.
    fn value<T>(&self, v: Option<&Spanned<String>>, parse: impl Fn(&str) -> hmachine_core::Result<T>) -> AppResult<T> {
        let Some(v) = v else { return parse("0").map_err(|e| self.core(0, e)) };
        parse(v.get_ref()).map_err(|e| match e {
            Error::Parse { column, message } => {
                let span: Range<usize> = v.span();
                // skip the opening quote, then `column - 1` characters
                let inner = &self.text[span.start + 1..span.end.max(span.start + 1)];
                let skip: usize = inner.chars().take(column.saturating_sub(1)).map(char::len_utf8).sum();
                self.error(span.start + 1 + skip, message)
            }
            other => self.core(v.span().start, other),
        })
    }
}
