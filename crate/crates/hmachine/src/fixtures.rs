//! Built-in curve files, addressed on the command line as `--fixture NAME`.

use std::path::Path;

use crate::curvefile::CurveFile;
use crate::error::{AppError, AppResult};

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "37a",
        r#"# y^2 + y = x^3 - x, rank 1
[curve]
field = "Q"
a3 = "1"
a4 = "-1"

[[section]]
name = "P"
x = "0"
y = "0"
"#,
    ),
    (
        "389a",
        r#"# y^2 + y = x^3 + x^2 - 2x, rank 2
[curve]
field = "Q"
a2 = "1"
a3 = "1"
a4 = "-2"

[[section]]
name = "P"
x = "-1"
y = "1"

[[section]]
name = "Q"
x = "0"
y = "0"
"#,
    ),
    (
        "tt",
        r#"# y^2 = x^3 - T^2 x + T^2
[curve]
field = "Q(T)"
a4 = "-T^2"
a6 = "T^2"

[[section]]
name = "P"
x = "T"
y = "T"

[[section]]
name = "Q"
x = "0"
y = "T"

[scan]
tmax = 200
hbound = 50
"#,
    ),
    (
        "linear",
        r#"# y^2 = x^3 + T x + 1
[curve]
field = "Q(T)"
a4 = "T"
a6 = "1"

[[section]]
name = "P"
x = "0"
y = "1"
"#,
    ),
    (
        "two-torsion",
        r#"# y^2 = x^3 - T x^2 + x - T, with (T, 0) of order 2
[curve]
field = "Q(T)"
a2 = "-T"
a4 = "1"
a6 = "-T"

[[section]]
name = "P"
x = "T"
y = "0"
"#,
    ),
    (
        "three-torsion",
        r#"# y^2 = x^3 + T^2 x^2 + 2T x + 1, with (0, 1) of order 3
[curve]
field = "Q(T)"
a2 = "T^2"
a4 = "2*T"
a6 = "1"

[[section]]
name = "P"
x = "0"
y = "1"
"#,
    ),
    (
        "cusp",
        r#"# y^2 = x^3 + T^2, isotrivial (j = 0)
[curve]
field = "Q(T)"
a6 = "T^2"

[[section]]
name = "P"
x = "0"
y = "T"
"#,
    ),
    (
        "constant",
        r#"# y^2 = x^3 - 2 read over Q(T)
[curve]
field = "Q(T)"
a6 = "-2"

[[section]]
name = "P"
x = "3"
y = "5"
"#,
    ),
    (
        "line",
        r#"# points [x : 1] of the projective line over Q(u)
[curve]
field = "Q(u)"

[[section]]
name = "id"
x = "u"

[[section]]
name = "square"
x = "u^2"

[[section]]
name = "two"
x = "2"

[[section]]
name = "mobius"
x = "(u^2 + 1)/(u - 3)"
"#,
    ),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|f| f.0)
}

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|f| f.0 == name).map(|f| f.1)
}

pub fn load(name: &str) -> AppResult<CurveFile> {
    let text = source(name).ok_or_else(|| {
        AppError::Usage(format!("unknown fixture {:?}; known: {}", name, names().collect::<Vec<_>>().join(", ")))
    })?;
    CurveFile::parse(text, Path::new(&format!("fixture:{}", name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for name in names() {
            load(name).unwrap_or_else(|e| panic!("{}: {}", name, e));
        }
        assert!(load("nope").is_err());
    }
}
