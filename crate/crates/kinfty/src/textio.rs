//! Plain-text formats.
//!
//! Complexes: one simplex per line, `dim name : face0 face1 ... faceK`,
//! where face i is the i-th face (faces listed `d0 d1 ... dK`), written
//! either as a simplex name or as a degeneracy expression like `s1(s0(v))`.
//! `#` starts a comment. Vertices may omit the colon.
//!
//! Domains extend the complex format with `order x <= y` and `bottom x`
//! lines; the order is closed reflexively and transitively on load.
//!
//! Tower configuration files are `key = value` lines with keys `K0`
//! (`builtin:nplus(d)` or a file path), `N`, and `rep`
//! (`identity` or `example41`).

use crate::hpo::{DomainError, WeakDomain};
use crate::simplicial::{ComplexBuilder, ComplexError, FiniteComplex, SimplexId, Term};
use crate::tower::RepMode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Complex {
        line: usize,
        source: ComplexError,
    },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Build(#[from] ComplexError),
}

fn syntax(line: usize, message: impl Into<String>) -> TextError {
    TextError::Syntax {
        line,
        message: message.into(),
    }
}

struct RawSimplex {
    line: usize,
    dim: usize,
    name: String,
    faces: Vec<String>,
}

struct RawFile {
    simplexes: Vec<RawSimplex>,
    orders: Vec<(usize, String, String)>,
    bottom: Option<(usize, String)>,
}

fn parse_raw(text: &str) -> Result<RawFile, TextError> {
    let mut out = RawFile {
        simplexes: Vec::new(),
        orders: Vec::new(),
        bottom: None,
    };
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "order" => {
                // order x <= y
                if tokens.len() != 4 || tokens[2] != "<=" {
                    return Err(syntax(line_no, "expected `order x <= y`"));
                }
                out.orders
                    .push((line_no, tokens[1].to_string(), tokens[3].to_string()));
            }
            "bottom" => {
                if tokens.len() != 2 {
                    return Err(syntax(line_no, "expected `bottom x`"));
                }
                if out.bottom.is_some() {
                    return Err(syntax(line_no, "bottom declared twice"));
                }
                out.bottom = Some((line_no, tokens[1].to_string()));
            }
            first => {
                let dim: usize = first
                    .parse()
                    .map_err(|_| syntax(line_no, format!("expected a dimension, got `{first}`")))?;
                if tokens.len() < 2 {
                    return Err(syntax(line_no, "expected a simplex name"));
                }
                let name = tokens[1].to_string();
                let mut faces = Vec::new();
                match tokens.get(2) {
                    None => {
                        if dim != 0 {
                            return Err(syntax(line_no, "positive-dimensional simplexes need faces"));
                        }
                    }
                    Some(&":") => {
                        faces = tokens[3..].iter().map(|s| s.to_string()).collect();
                    }
                    Some(other) => {
                        return Err(syntax(line_no, format!("expected `:`, got `{other}`")));
                    }
                }
                if dim > 0 && faces.len() != dim + 1 {
                    return Err(syntax(
                        line_no,
                        format!("a {dim}-simplex needs {} faces, got {}", dim + 1, faces.len()),
                    ));
                }
                out.simplexes.push(RawSimplex {
                    line: line_no,
                    dim,
                    name,
                    faces,
                });
            }
        }
    }
    Ok(out)
}

/// Parses a face expression: a plain name or nested degeneracies `s0(...)`.
fn parse_face(
    b: &ComplexBuilder,
    line: usize,
    src: &str,
) -> Result<Term, TextError> {
    let s = src.trim();
    if let Some(rest) = s.strip_prefix('s') {
        if let Some(open) = rest.find('(') {
            if rest[..open].chars().all(|c| c.is_ascii_digit()) && !rest[..open].is_empty() {
                if !rest.ends_with(')') {
                    return Err(syntax(line, format!("unbalanced parentheses in `{src}`")));
                }
                let idx: usize = rest[..open].parse().unwrap();
                let inner = parse_face(b, line, &rest[open + 1..rest.len() - 1])?;
                return Ok(inner.degeneracy(idx));
            }
        }
    }
    let id = b
        .lookup(s)
        .map_err(|e| TextError::Complex { line, source: e })?;
    Ok(Term::nondeg(id))
}

fn build_complex(raw: &RawFile) -> Result<FiniteComplex, TextError> {
    let max_dim = raw.simplexes.iter().map(|s| s.dim).max().unwrap_or(0);
    let mut b = ComplexBuilder::new(max_dim);
    let mut by_dim: Vec<&RawSimplex> = raw.simplexes.iter().collect();
    by_dim.sort_by_key(|s| s.dim);
    for s in by_dim {
        if s.dim == 0 {
            b.vertex(&s.name)
                .map_err(|e| TextError::Complex { line: s.line, source: e })?;
        } else {
            let faces = s
                .faces
                .iter()
                .map(|f| parse_face(&b, s.line, f))
                .collect::<Result<Vec<_>, _>>()?;
            b.simplex(&s.name, faces)
                .map_err(|e| TextError::Complex { line: s.line, source: e })?;
        }
    }
    Ok(b.build()?)
}

/// Parses the complex format.
pub fn parse_complex(text: &str) -> Result<FiniteComplex, TextError> {
    let raw = parse_raw(text)?;
    if let Some((line, _)) = raw.bottom {
        return Err(syntax(line, "`bottom` belongs to the domain format"));
    }
    if let Some((line, ..)) = raw.orders.first() {
        return Err(syntax(*line, "`order` belongs to the domain format"));
    }
    build_complex(&raw)
}

/// Parses the domain format: a complex plus order generators and a bottom.
pub fn parse_domain(text: &str) -> Result<WeakDomain, TextError> {
    let raw = parse_raw(text)?;
    let cx = build_complex(&raw)?;
    let resolve = |line: usize, name: &str| -> Result<usize, TextError> {
        let id = cx
            .id_of(name)
            .map_err(|e| TextError::Complex { line, source: e })?;
        if id.dim != 0 {
            return Err(syntax(line, format!("`{name}` is not a vertex")));
        }
        Ok(id.idx)
    };
    let mut gens = Vec::new();
    for (line, x, y) in &raw.orders {
        gens.push((resolve(*line, x)?, resolve(*line, y)?));
    }
    let bottom = match &raw.bottom {
        Some((line, name)) => Some(resolve(*line, name)?),
        None => None,
    };
    Ok(WeakDomain::new(cx, &gens, bottom)?)
}

/// Renders a complex in the text format.
pub fn render_complex(cx: &FiniteComplex) -> String {
    let mut out = String::new();
    let max = cx.max_dim().unwrap_or(0);
    for d in 0..=max {
        for id in cx.ids(d) {
            if d == 0 {
                out.push_str(&format!("0 {} :\n", cx.name(id)));
            } else {
                let faces: Vec<String> = (0..=d)
                    .map(|i| cx.render_term(cx.stored_face(id, i)))
                    .collect();
                out.push_str(&format!("{d} {} : {}\n", cx.name(id), faces.join(" ")));
            }
        }
    }
    out
}

/// Renders a domain: its carrier plus bottom and the non-reflexive order
/// pairs.
pub fn render_domain(dom: &WeakDomain) -> String {
    let mut out = render_complex(dom.carrier());
    if let Some(b) = dom.bottom() {
        out.push_str(&format!("bottom {}\n", dom.vertex_name(b)));
    }
    for x in 0..dom.vertex_count() {
        for y in 0..dom.vertex_count() {
            if x != y && dom.leq(x, y) {
                out.push_str(&format!(
                    "order {} <= {}\n",
                    dom.vertex_name(x),
                    dom.vertex_name(y)
                ));
            }
        }
    }
    out
}

/// Where the base domain of a tower comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Spec {
    NPlus(usize),
    Path(String),
}

/// Parsed tower configuration file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerConfigSpec {
    pub k0: K0Spec,
    pub n: usize,
    pub rep: RepMode,
}

impl Default for TowerConfigSpec {
    fn default() -> Self {
        TowerConfigSpec {
            k0: K0Spec::NPlus(2),
            n: 3,
            rep: RepMode::Identity,
        }
    }
}

/// Parses `key = value` configuration lines.
pub fn parse_tower_config(text: &str) -> Result<TowerConfigSpec, TextError> {
    let mut spec = TowerConfigSpec::default();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(syntax(line_no, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "K0" | "k0" => {
                spec.k0 = parse_k0_spec(line_no, value)?;
            }
            "N" | "n" => {
                spec.n = value
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad level count `{value}`")))?;
            }
            "rep" => {
                spec.rep = match value {
                    "identity" => RepMode::Identity,
                    "example41" => RepMode::Example41,
                    other => {
                        return Err(syntax(
                            line_no,
                            format!("rep must be `identity` or `example41`, got `{other}`"),
                        ))
                    }
                };
            }
            other => {
                return Err(syntax(line_no, format!("unknown key `{other}`")));
            }
        }
    }
    Ok(spec)
}

pub fn parse_k0_spec(line_no: usize, value: &str) -> Result<K0Spec, TextError> {
    if let Some(rest) = value.strip_prefix("builtin:") {
        let rest = rest.trim();
        if let Some(arg) = rest
            .strip_prefix("nplus(")
            .and_then(|s| s.strip_suffix(')'))
        {
            let d: usize = arg
                .parse()
                .map_err(|_| syntax(line_no, format!("bad sphere bound `{arg}`")))?;
            return Ok(K0Spec::NPlus(d));
        }
        return Err(syntax(
            line_no,
            format!("unknown builtin `{rest}`; try `builtin:nplus(d)`"),
        ));
    }
    Ok(K0Spec::Path(value.to_string()))
}

/// Reconstructs the vertex name table after parsing; convenience for tests.
pub fn vertex_names(cx: &FiniteComplex) -> Vec<String> {
    cx.ids(0).map(|id| cx.name(id).to_string()).collect()
}

#[allow(unused)]
fn id_name(cx: &FiniteComplex, id: SimplexId) -> String {
    cx.name(id).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{boundary_complex, isomorphic_by_vertex_order, standard_simplex};

    #[test]
    fn complex_round_trip() {
        for cx in [
            standard_simplex(2).unwrap(),
            boundary_complex(3).unwrap(),
            crate::simplicial::horn_complex(2, 1).unwrap(),
        ] {
            let text = render_complex(&cx);
            let back = parse_complex(&text).unwrap();
            assert!(isomorphic_by_vertex_order(&cx, &back));
        }
    }

    #[test]
    fn degenerate_faces_round_trip() {
        // a cylinder-like square: degenerate faces appear in products
        let d1 = standard_simplex(1).unwrap();
        let p = crate::simplicial::product(&d1, &d1, 3).unwrap();
        let text = render_complex(&p.complex);
        let back = parse_complex(&text).unwrap();
        assert_eq!(back.f_vector(), p.complex.f_vector());
        back.validate().unwrap();
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "0 a :\n1 e : a\n";
        match parse_complex(bad) {
            Err(TextError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
        let unknown = "0 a :\n1 e : a b\n";
        match parse_complex(unknown) {
            Err(TextError::Complex { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected an unknown-name error, got {other:?}"),
        }
    }

    #[test]
    fn domain_round_trip() {
        let dom = crate::hpo::build_n_plus(1).unwrap();
        let text = render_domain(&dom);
        let back = parse_domain(&text).unwrap();
        assert_eq!(back.vertex_count(), dom.vertex_count());
        assert_eq!(back.bottom(), dom.bottom());
        for x in 0..dom.vertex_count() {
            for y in 0..dom.vertex_count() {
                assert_eq!(dom.leq(x, y), back.leq(x, y));
            }
        }
    }

    #[test]
    fn domain_format_keywords() {
        let text = "0 a :\n0 b :\nbottom a\norder a <= b\n";
        let dom = parse_domain(text).unwrap();
        assert_eq!(dom.bottom(), Some(0));
        assert!(dom.leq(0, 1));
        assert!(parse_complex(text).is_err());
    }

    #[test]
    fn tower_config() {
        let spec = parse_tower_config(
            "# comment\nK0 = builtin:nplus(1)\nN = 3\nrep = example41\n",
        )
        .unwrap();
        assert_eq!(spec.k0, K0Spec::NPlus(1));
        assert_eq!(spec.n, 3);
        assert_eq!(spec.rep, RepMode::Example41);
        let dflt = parse_tower_config("").unwrap();
        assert_eq!(dflt.k0, K0Spec::NPlus(2));
        assert!(parse_tower_config("rep = sideways").is_err());
        let path = parse_tower_config("K0 = my/domain.dom").unwrap();
        assert_eq!(path.k0, K0Spec::Path("my/domain.dom".to_string()));
    }
}
