//! Plain-text manifold spec files.
//!
//! ```text
//! dim 3
//! coords A B C
//! X = (0, 0, 1)
//! theta = (1, 0, 0)
//! K1 = [[0, 1, 0],
//!       [0, 0, 1],
//!       [1, 0, 0]]
//! g = [[0,0,1],[0,1,0],[1,0,0]]
//! F = A^2*B/2
//! ```
//!
//! `#` starts a comment. A statement may span lines while brackets are open.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::expr::{ExprError, RationalExpr};
use crate::geom::{Chart, GeomError, Metric, OneForm, Tensor11, VectorField};
use crate::hverify::{ManifoldSpec, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecErrorKind {
    #[error("cannot read file: {0}")]
    Io(String),
    #[error("missing section `{0}`")]
    MissingSection(String),
    #[error("section `{section}`: expected {expected} entries, got {got}")]
    Dimension {
        section: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate section `{0}`")]
    Duplicate(String),
    #[error("unknown section `{0}`")]
    UnknownSection(String),
    #[error("{0}")]
    Malformed(String),
    #[error("unbalanced brackets")]
    Unbalanced,
    #[error(transparent)]
    Expr(ExprError),
    #[error("section `{section}`: {source}")]
    Geom { section: String, source: GeomError },
}

/// Error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub kind: SpecErrorKind,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.kind
        )
    }
}

impl std::error::Error for SpecError {}

/// Parsed file contents. Sections that were absent are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub path: Option<PathBuf>,
    pub chart: Chart,
    pub manifold: Option<ManifoldSpec>,
    pub potential: Option<RationalExpr>,
}

impl SpecFile {
    pub fn metric(&self) -> Option<&Metric> {
        self.manifold.as_ref().and_then(ManifoldSpec::metric)
    }
}

/// Text with a source position for every byte.
struct Located {
    text: String,
    pos: Vec<(usize, usize)>,
}

impl Located {
    fn at(&self, offset: usize) -> (usize, usize) {
        self.pos
            .get(offset)
            .or_else(|| self.pos.last())
            .copied()
            .unwrap_or((1, 1))
    }

    fn slice(&self, start: usize, end: usize) -> Located {
        Located {
            text: self.text[start..end].to_string(),
            pos: self.pos[start..end].to_vec(),
        }
    }

    fn trimmed(&self) -> Located {
        let start = self.text.len() - self.text.trim_start().len();
        let end = self.text.trim_end().len().max(start);
        self.slice(start, end)
    }

    fn err(&self, offset: usize, kind: SpecErrorKind) -> SpecError {
        let (line, column) = self.at(offset);
        SpecError { line, column, kind }
    }
}

/// Joins physical lines into statements, dropping comments and blank lines.
fn statements(source: &str) -> Result<Vec<Located>, SpecError> {
    let mut out = Vec::new();
    let mut cur = Located {
        text: String::new(),
        pos: Vec::new(),
    };
    let mut depth: i64 = 0;
    let mut open_at = (1, 1);
    for (ln, line) in source.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        for (col, ch) in code.char_indices() {
            match ch {
                '(' | '[' => {
                    if depth == 0 {
                        open_at = (ln + 1, col + 1);
                    }
                    depth += 1;
                }
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return Err(SpecError {
                    line: ln + 1,
                    column: col + 1,
                    kind: SpecErrorKind::Unbalanced,
                });
            }
            let mut buf = [0u8; 4];
            for _ in 0..ch.encode_utf8(&mut buf).len() {
                cur.pos.push((ln + 1, col + 1));
            }
            cur.text.push(ch);
        }
        if depth == 0 {
            let stmt = std::mem::replace(
                &mut cur,
                Located {
                    text: String::new(),
                    pos: Vec::new(),
                },
            );
            let stmt = stmt.trimmed();
            if !stmt.text.is_empty() {
                out.push(stmt);
            }
        } else {
            cur.text.push(' ');
            cur.pos.push((ln + 1, code.len() + 1));
        }
    }
    if depth != 0 {
        return Err(SpecError {
            line: open_at.0,
            column: open_at.1,
            kind: SpecErrorKind::Unbalanced,
        });
    }
    Ok(out)
}

/// Splits the inside of one bracket pair at top-level commas.
fn split_group(v: &Located, open: char, close: char) -> Result<Vec<Located>, SpecError> {
    let t = &v.text;
    if !(t.starts_with(open) && t.ends_with(close)) || t.len() < 2 {
        return Err(v.err(
            0,
            SpecErrorKind::Malformed(format!("expected a list in `{open}{close}`")),
        ));
    }
    let inner = v.slice(1, t.len() - 1);
    let mut parts = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (i, ch) in inner.text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(inner.slice(start, i).trimmed());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(inner.slice(start, inner.text.len()).trimmed());
    if parts.len() == 1 && parts[0].text.is_empty() {
        parts.clear();
    }
    Ok(parts)
}

struct Parser {
    chart: Chart,
}

impl Parser {
    fn expr(&self, v: &Located) -> Result<RationalExpr, SpecError> {
        if v.text.is_empty() {
            return Err(v.err(0, SpecErrorKind::Malformed("empty expression".into())));
        }
        self.chart.parse(&v.text).map_err(|e| {
            let offset = match &e {
                ExprError::Syntax { pos, .. }
                | ExprError::UnknownIdentifier { pos, .. }
                | ExprError::ExponentOverflow { pos } => *pos,
                _ => 0,
            };
            v.err(offset, SpecErrorKind::Expr(e))
        })
    }

    fn vector(&self, name: &str, v: &Located) -> Result<Vec<RationalExpr>, SpecError> {
        let parts = split_group(v, '(', ')')?;
        let n = self.chart.dim();
        if parts.len() != n {
            return Err(v.err(0, dimension(name, n, parts.len())));
        }
        parts.iter().map(|p| self.expr(p)).collect()
    }

    fn matrix(&self, name: &str, v: &Located) -> Result<Vec<Vec<RationalExpr>>, SpecError> {
        let rows = split_group(v, '[', ']')?;
        let n = self.chart.dim();
        if rows.len() != n {
            return Err(v.err(0, dimension(name, n, rows.len())));
        }
        rows.iter()
            .map(|row| {
                let cells = split_group(row, '[', ']')?;
                if cells.len() != n {
                    return Err(row.err(0, dimension(name, n, cells.len())));
                }
                cells.iter().map(|c| self.expr(c)).collect()
            })
            .collect()
    }
}

fn dimension(section: &str, expected: usize, got: usize) -> SpecErrorKind {
    SpecErrorKind::Dimension {
        section: section.to_string(),
        expected,
        got,
    }
}

fn missing(name: &str) -> SpecError {
    SpecError {
        line: 1,
        column: 1,
        kind: SpecErrorKind::MissingSection(name.to_string()),
    }
}

fn geom_err(v: &Located, section: &str, e: GeomError) -> SpecError {
    v.err(
        0,
        SpecErrorKind::Geom {
            section: section.to_string(),
            source: e,
        },
    )
}

fn is_operator_name(key: &str) -> Option<usize> {
    let digits = key.strip_prefix('K')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

/// Parses spec text; `path` is only recorded.
pub fn parse_spec(source: &str, path: Option<&Path>) -> Result<SpecFile, SpecError> {
    let stmts = statements(source)?;
    let mut dim: Option<(usize, Located)> = None;
    let mut coords: Option<(Vec<String>, Located)> = None;
    let mut sections: BTreeMap<String, (Located, Located)> = BTreeMap::new();
    for s in stmts {
        let t = s.text.as_str();
        if let Some(rest) = t
            .strip_prefix("dim")
            .filter(|r| r.starts_with(char::is_whitespace))
        {
            if dim.is_some() {
                return Err(s.err(0, SpecErrorKind::Duplicate("dim".into())));
            }
            let n: usize = rest.trim().parse().map_err(|_| {
                s.err(
                    4,
                    SpecErrorKind::Malformed("dim expects a positive integer".into()),
                )
            })?;
            if n == 0 {
                return Err(s.err(
                    4,
                    SpecErrorKind::Malformed("dim expects a positive integer".into()),
                ));
            }
            dim = Some((n, s));
        } else if let Some(rest) = t
            .strip_prefix("coords")
            .filter(|r| r.starts_with(char::is_whitespace))
        {
            if coords.is_some() {
                return Err(s.err(0, SpecErrorKind::Duplicate("coords".into())));
            }
            let names = rest.split_whitespace().map(str::to_string).collect();
            coords = Some((names, s));
        } else if let Some(eq) = t.find('=') {
            let key = t[..eq].trim().to_string();
            let known = matches!(key.as_str(), "X" | "theta" | "g" | "F")
                || is_operator_name(&key).is_some();
            if !known {
                return Err(s.err(0, SpecErrorKind::UnknownSection(key)));
            }
            if sections.contains_key(&key) {
                return Err(s.err(0, SpecErrorKind::Duplicate(key)));
            }
            let value = s.slice(eq + 1, t.len()).trimmed();
            sections.insert(key, (s, value));
        } else {
            let word = t.split_whitespace().next().unwrap_or("").to_string();
            return Err(s.err(0, SpecErrorKind::UnknownSection(word)));
        }
    }

    let (n, _) = dim.ok_or_else(|| missing("dim"))?;
    let (names, coords_stmt) = coords.ok_or_else(|| missing("coords"))?;
    if names.len() != n {
        return Err(coords_stmt.err(0, dimension("coords", n, names.len())));
    }
    let chart = Chart::new(&names).map_err(|e| geom_err(&coords_stmt, "coords", e))?;
    let p = Parser {
        chart: chart.clone(),
    };

    let potential = match sections.get("F") {
        Some((_, v)) => Some(p.expr(v)?),
        None => None,
    };

    let mut ks = Vec::new();
    let max_k = sections
        .keys()
        .filter_map(|k| is_operator_name(k))
        .max()
        .unwrap_or(0);
    for j in 1..=max_k {
        let name = format!("K{j}");
        let (_, v) = sections.get(&name).ok_or_else(|| missing(&name))?;
        let rows = p.matrix(&name, v)?;
        ks.push(Tensor11::new(&chart, rows).map_err(|e| geom_err(v, &name, e))?);
    }

    let has_structure = ["X", "theta"].iter().any(|k| sections.contains_key(*k)) || !ks.is_empty();
    let manifold = if has_structure {
        let (_, xv) = sections.get("X").ok_or_else(|| missing("X"))?;
        let (_, tv) = sections.get("theta").ok_or_else(|| missing("theta"))?;
        if ks.is_empty() {
            return Err(missing("K1"));
        }
        let x = VectorField::new(&chart, p.vector("X", xv)?).map_err(|e| geom_err(xv, "X", e))?;
        let theta =
            OneForm::new(&chart, p.vector("theta", tv)?).map_err(|e| geom_err(tv, "theta", e))?;
        let mut spec = ManifoldSpec::new(x, theta, ks).map_err(|e| match e {
            VerifyError::Geom(g) => geom_err(xv, "X", g),
            other => xv.err(0, SpecErrorKind::Malformed(other.to_string())),
        })?;
        if let Some((_, gv)) = sections.get("g") {
            let g = Metric::new(&chart, p.matrix("g", gv)?).map_err(|e| geom_err(gv, "g", e))?;
            spec = spec.with_metric(g).expect("same chart");
        }
        if let Some(f) = &potential {
            spec = spec.with_potential(f.clone()).expect("same chart");
        }
        Some(spec)
    } else {
        if let Some((_, gv)) = sections.get("g") {
            return Err(gv.err(
                0,
                SpecErrorKind::Malformed("a metric needs X, theta and K1".into()),
            ));
        }
        None
    };

    if manifold.is_none() && potential.is_none() {
        return Err(missing("K1"));
    }

    Ok(SpecFile {
        path: path.map(Path::to_path_buf),
        chart,
        manifold,
        potential,
    })
}

pub fn load_spec(path: &Path) -> Result<SpecFile, SpecError> {
    let source = std::fs::read_to_string(path).map_err(|e| SpecError {
        line: 0,
        column: 0,
        kind: SpecErrorKind::Io(e.to_string()),
    })?;
    parse_spec(&source, Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z3: &str = "\
# cyclic example
dim 3
coords A B C
X = (0, 0, 1)
theta = (1, 0, 0)
K1 = [[0, 1, 0],
      [0, 0, 1],   # second row
      [1, 0, 0]]
K2 = [[0,0,1],[1,0,0],[0,1,0]]
";

    #[test]
    fn reads_back_operators() {
        let s = parse_spec(Z3, None).unwrap();
        let m = s.manifold.unwrap();
        assert_eq!(m.m(), 2);
        assert_eq!(m.ks()[0].pow(2), m.ks()[1]);
        assert_eq!(m.x(), &VectorField::coordinate(&s.chart, 2));
        assert!(s.potential.is_none());
    }

    #[test]
    fn potential_only() {
        let s = parse_spec("dim 3\ncoords A B C\nF = A^2*B/2\n", None).unwrap();
        assert!(s.manifold.is_none());
        assert_eq!(s.potential.unwrap(), s.chart.parse("A^2*B/2").unwrap());
    }

    #[test]
    fn dimension_mismatch_names_section() {
        let src = "dim 3\ncoords A B C\nX = (0,0,1)\ntheta = (1,0,0)\nK1 = [[0,1,0],[0,0,1]]\n";
        let e = parse_spec(src, None).unwrap_err();
        assert_eq!(e.line, 5);
        assert_eq!(
            e.kind,
            SpecErrorKind::Dimension {
                section: "K1".into(),
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn positions_of_errors() {
        let src = "dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, Z)\nK1 = [[1,0],[0,1]]\n";
        let e = parse_spec(src, None).unwrap_err();
        assert_eq!((e.line, e.column), (4, 13));
        assert!(matches!(
            e.kind,
            SpecErrorKind::Expr(ExprError::UnknownIdentifier { .. })
        ));

        let src = "dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, 0)\nK1 = [[1, 0],\n [0, A +* 1]]\n";
        let e = parse_spec(src, None).unwrap_err();
        assert_eq!(e.line, 6);
        assert_eq!(e.column, 9);

        let e = parse_spec("dim 2\ncoords A B\nX = (1, 0)\n", None).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::MissingSection("theta".into()));
        let e = parse_spec("coords A B\n", None).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::MissingSection("dim".into()));
        let e = parse_spec(
            "dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, 0)\nK2 = [[1,0],[0,1]]\n",
            None,
        )
        .unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::MissingSection("K1".into()));
        let e = parse_spec("dim 2\ncoords A B\nX = (1, 0\n", None).unwrap_err();
        assert_eq!(
            (e.line, e.column, e.kind),
            (3, 5, SpecErrorKind::Unbalanced)
        );
        let e = parse_spec("dim 2\ncoords A B C\n", None).unwrap_err();
        assert!(matches!(e.kind, SpecErrorKind::Dimension { .. }));
        let e = parse_spec("dim 2\ncoords A B\nY = (1, 0)\n", None).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::UnknownSection("Y".into()));
    }

    #[test]
    fn metric_is_validated() {
        let src = "dim 2\ncoords A B\nX = (1, 0)\ntheta = (1, 0)\nK1 = [[1,0],[0,1]]\ng = [[1, 1], [1, 1]]\n";
        let e = parse_spec(src, None).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(matches!(e.kind, SpecErrorKind::Geom { .. }));
    }
}
