//! Untyped lambda-terms and their interpretation into the tower.
//!
//! Variables denote tower elements through an environment; application is
//! tower application; an abstraction realises its body functor through the
//! tower's `h` map, tabulated over the compact basis at the lowest adequate
//! level and validated on a probe family one level up.
//!
//! Beta and eta conversions are interpreted as edges, not equations: the model
//! connects the two sides of a contraction by a path whose level-0 class is
//! remembered, and two conversions are compared by closing one against the
//! reverse of the other and asking whether the loop abelianises away. The
//! non-equality direction of that test is sound; the equality direction is
//! only claimed when the loop word cancels freely.

use crate::simplicial::{pi1_class, Pi1Basis};
use crate::tower::{EdgeClass, Payload, Tower, TowerEdge, TowerElement, TowerError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

// ---------------------------------------------------------------------------
// terms and parsing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(Box<Term>, Box<Term>),
    Lam(String, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.to_string(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Term::Var(x) => BTreeSet::from([x.clone()]),
            Term::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            Term::Lam(x, b) => {
                let mut s = b.free_vars();
                s.remove(x);
                s
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, b) => 1 + b.size(),
        }
    }

    /// Capture-avoiding substitution of `val` for the free variable `x`.
    pub fn subst(&self, x: &str, val: &Term) -> Term {
        match self {
            Term::Var(y) => {
                if y == x {
                    val.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, a) => Term::app(f.subst(x, val), a.subst(x, val)),
            Term::Lam(y, b) => {
                if y == x {
                    self.clone()
                } else if val.free_vars().contains(y) {
                    let fresh = fresh_name(y, &val.free_vars(), &b.free_vars());
                    let renamed = b.subst(y, &Term::var(&fresh));
                    Term::lam(&fresh, renamed.subst(x, val))
                } else {
                    Term::lam(y, b.subst(x, val))
                }
            }
        }
    }

    /// Canonical bound-variable names, so alpha-equivalent terms become
    /// identical. Free variables are untouched; canonical binder names use a
    /// leading underscore, which the surface grammar cannot produce.
    pub fn alpha_canonical(&self) -> Term {
        fn go(t: &Term, depth: usize, bound: &BTreeMap<String, String>) -> Term {
            match t {
                Term::Var(x) => match bound.get(x) {
                    Some(c) => Term::var(c),
                    None => t.clone(),
                },
                Term::App(f, a) => Term::app(go(f, depth, bound), go(a, depth, bound)),
                Term::Lam(x, b) => {
                    let c = format!("_b{depth}");
                    let mut inner = bound.clone();
                    inner.insert(x.clone(), c.clone());
                    Term::Lam(c, Box::new(go(b, depth + 1, &inner)))
                }
            }
        }
        go(self, 0, &BTreeMap::new())
    }
}

fn fresh_name(base: &str, avoid1: &BTreeSet<String>, avoid2: &BTreeSet<String>) -> String {
    let mut k = 0usize;
    loop {
        let cand = format!("{base}_{k}");
        if !avoid1.contains(&cand) && !avoid2.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Lam(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(g, a) => {
                match g.as_ref() {
                    Term::Lam(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match a.as_ref() {
                    Term::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

#[derive(Debug, Error)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '\\' | 'λ' => {
                out.push((Tok::Lambda, i));
                i += 1;
            }
            '.' => {
                out.push((Tok::Dot, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                let mut name = String::new();
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_')
                {
                    name.push(bytes[i]);
                    i += 1;
                }
                out.push((Tok::Ident(name), start));
            }
            other => {
                let (line, col) = line_col(src, i);
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.chars().enumerate() {
        if i == pos {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        let pos = self
            .toks
            .get(self.at)
            .map(|(_, p)| *p)
            .unwrap_or(self.src.chars().count());
        let (line, col) = line_col(self.src, pos);
        ParseError {
            line,
            col,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek(), Some(Tok::Lambda)) {
            self.next();
            let Some(Tok::Ident(x)) = self.next() else {
                return Err(self.err("expected a binder name after the lambda"));
            };
            if !matches!(self.next(), Some(Tok::Dot)) {
                return Err(self.err("expected `.` after the binder"));
            }
            let body = self.term()?;
            return Ok(Term::lam(&x, body));
        }
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let a = self.atom()?;
                    acc = Term::app(acc, a);
                }
                Some(Tok::Lambda) => {
                    return Err(self.err(
                        "a lambda in application position must be parenthesised",
                    ));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Ident(x)) => Ok(Term::var(&x)),
            Some(Tok::LParen) => {
                let t = self.term()?;
                if !matches!(self.next(), Some(Tok::RParen)) {
                    self.at -= 1;
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(self.err("expected a variable, `(`, or a lambda"))
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, at: 0 };
    let t = p.term()?;
    if p.at != p.toks.len() {
        return Err(p.err("trailing input after the term"));
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// conversion steps
// ---------------------------------------------------------------------------

/// A step into a term: function part, argument part, or under a binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Fun,
    Arg,
    Body,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConversionKind {
    Beta,
    Eta,
}

/// A one-step conversion: the redex position, the whole source term, and the
/// whole target term obtained by contracting there.
#[derive(Clone, Debug)]
pub struct ConversionStep {
    pub kind: ConversionKind,
    pub position: Vec<Dir>,
    pub source: Term,
    pub target: Term,
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("position does not exist in the term")]
    BadPosition,
    #[error("no beta redex at the position: expected an applied abstraction")]
    NotBetaRedex,
    #[error("no eta redex at the position: expected \\x. M x with x not free in M")]
    NotEtaRedex,
}

fn subterm_at<'t>(t: &'t Term, pos: &[Dir]) -> Result<&'t Term, StepError> {
    match (t, pos.split_first()) {
        (_, None) => Ok(t),
        (Term::App(f, _), Some((Dir::Fun, rest))) => subterm_at(f, rest),
        (Term::App(_, a), Some((Dir::Arg, rest))) => subterm_at(a, rest),
        (Term::Lam(_, b), Some((Dir::Body, rest))) => subterm_at(b, rest),
        _ => Err(StepError::BadPosition),
    }
}

fn replace_at(t: &Term, pos: &[Dir], with: &Term) -> Result<Term, StepError> {
    match (t, pos.split_first()) {
        (_, None) => Ok(with.clone()),
        (Term::App(f, a), Some((Dir::Fun, rest))) => {
            Ok(Term::app(replace_at(f, rest, with)?, a.as_ref().clone()))
        }
        (Term::App(f, a), Some((Dir::Arg, rest))) => {
            Ok(Term::app(f.as_ref().clone(), replace_at(a, rest, with)?))
        }
        (Term::Lam(x, b), Some((Dir::Body, rest))) => {
            Ok(Term::Lam(x.clone(), Box::new(replace_at(b, rest, with)?)))
        }
        _ => Err(StepError::BadPosition),
    }
}

/// One-step beta contraction at a position.
pub fn beta_step(t: &Term, pos: &[Dir]) -> Result<ConversionStep, StepError> {
    let redex = subterm_at(t, pos)?;
    let Term::App(f, a) = redex else {
        return Err(StepError::NotBetaRedex);
    };
    let Term::Lam(x, body) = f.as_ref() else {
        return Err(StepError::NotBetaRedex);
    };
    let contractum = body.subst(x, a);
    Ok(ConversionStep {
        kind: ConversionKind::Beta,
        position: pos.to_vec(),
        source: t.clone(),
        target: replace_at(t, pos, &contractum)?,
    })
}

/// One-step eta contraction at a position.
pub fn eta_step(t: &Term, pos: &[Dir]) -> Result<ConversionStep, StepError> {
    let redex = subterm_at(t, pos)?;
    let Term::Lam(x, body) = redex else {
        return Err(StepError::NotEtaRedex);
    };
    let Term::App(f, a) = body.as_ref() else {
        return Err(StepError::NotEtaRedex);
    };
    let ok = matches!(a.as_ref(), Term::Var(y) if y == x) && !f.free_vars().contains(x);
    if !ok {
        return Err(StepError::NotEtaRedex);
    }
    Ok(ConversionStep {
        kind: ConversionKind::Eta,
        position: pos.to_vec(),
        source: t.clone(),
        target: replace_at(t, pos, f)?,
    })
}

// ---------------------------------------------------------------------------
// interpretation
// ---------------------------------------------------------------------------

/// Environment: free variables to tower elements.
#[derive(Clone, Debug, Default)]
pub struct Env {
    map: BTreeMap<String, TowerElement>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(&mut self, name: &str, value: TowerElement) {
        self.map.insert(name.to_string(), value);
    }

    pub fn with(&self, name: &str, value: TowerElement) -> Env {
        let mut e = self.clone();
        e.bind(name, value);
        e
    }

    pub fn get(&self, name: &str) -> Option<&TowerElement> {
        self.map.get(name)
    }

    pub fn covers(&self, t: &Term) -> Result<(), SemError> {
        for v in t.free_vars() {
            if !self.map.contains_key(&v) {
                return Err(SemError::Unbound(v));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SemError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(
        "the body functor of `{0}` is not representable within the truncation: \
         its level-0 tabulation fails validation and no enumerable level remains"
    )]
    NotRepresentable(String),
    #[error("conversion edges do not share endpoints up to equivalence")]
    EndpointMismatch,
    #[error(transparent)]
    Complex(#[from] crate::simplicial::ComplexError),
}

/// Largest base-domain size for which the full level-1 basis is enumerated
/// when an abstraction's level-0 tabulation fails validation.
const LEVEL1_ENUMERATION_CUTOFF: usize = 7;

/// Interprets a term: variables through the environment, applications by
/// tower application, abstractions by realising the body functor.
pub fn interpret(tower: &Tower, t: &Term, env: &Env) -> Result<TowerElement, SemError> {
    env.covers(t)?;
    interp(tower, &t.alpha_canonical(), env)
}

fn interp(tower: &Tower, t: &Term, env: &Env) -> Result<TowerElement, SemError> {
    match t {
        Term::Var(x) => env
            .get(x)
            .cloned()
            .ok_or_else(|| SemError::Unbound(x.clone())),
        Term::App(f, a) => {
            let vf = interp(tower, f, env)?;
            let va = interp(tower, a, env)?;
            Ok(tower.app(&vf, &va)?)
        }
        Term::Lam(x, body) => interp_abstraction(tower, x, body, env, t),
    }
}

fn interp_abstraction(
    tower: &Tower,
    x: &str,
    body: &Term,
    env: &Env,
    whole: &Term,
) -> Result<TowerElement, SemError> {
    // tabulate the body functor over the level-0 basis
    let mut basis0: Vec<(TowerElement, TowerElement)> = Vec::new();
    for p in tower.level0_payloads() {
        let e = tower.normalize(&TowerElement {
            level: 0,
            payload: p,
        })?;
        let img = interp(tower, body, &env.with(x, e.clone()))?;
        basis0.push((e, img));
    }
    let h0 = tower.h_map(&basis0)?;
    // validate on the level-1 probe family
    if validates(tower, &h0, x, body, env, &tower.sample1_payloads()?, 1)? {
        return Ok(h0);
    }
    // escalate to the full level-1 tabulation when the base is small enough
    if tower.k0().vertex_count() <= LEVEL1_ENUMERATION_CUTOFF {
        let mut basis1: Vec<(TowerElement, TowerElement)> = Vec::new();
        for p in tower.level1_payloads()? {
            let e = tower.normalize(&TowerElement {
                level: 1,
                payload: p,
            })?;
            let img = interp(tower, body, &env.with(x, e.clone()))?;
            if !basis1.contains(&(e.clone(), img.clone())) {
                basis1.push((e, img));
            }
        }
        // a constant functor collapses to one step at bottom
        if let Some((_, first)) = basis1.first() {
            let first = first.clone();
            let mut constant = true;
            for (_, img) in &basis1 {
                if !tower.elem_equiv(img, &first)? {
                    constant = false;
                    break;
                }
            }
            if constant {
                basis1 = vec![(tower.bottom_element(), first)];
            }
        }
        match tower.h_map(&basis1) {
            Ok(h1) => {
                let probes2 = tower.generated_payloads(2, &tower.sample1_payloads()?, 12)?;
                if validates(tower, &h1, x, body, env, &probes2, 2)? {
                    return Ok(h1);
                }
            }
            // a basis too wide for the consistency scan cannot be compact
            Err(TowerError::Func(crate::funcspace::FuncError::TooLarge(_))) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Err(SemError::NotRepresentable(whole.to_string()))
}

/// Does applying the candidate reproduce the body on every probe?
fn validates(
    tower: &Tower,
    cand: &TowerElement,
    x: &str,
    body: &Term,
    env: &Env,
    probes: &[Payload],
    level: usize,
) -> Result<bool, SemError> {
    for p in probes {
        let e = tower.normalize(&TowerElement {
            level,
            payload: p.clone(),
        })?;
        let want = interp(tower, body, &env.with(x, e.clone()))?;
        let got = tower.app(cand, &e)?;
        if !tower.elem_equiv(&want, &got)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// conversion edges
// ---------------------------------------------------------------------------

/// Interprets a one-step conversion as a tower edge.
///
/// For a beta step on an eta-shaped redex `(\x. H x) N` the edge is the
/// counit of the round trip at `H`'s interpretation, whose level-0 class is
/// the return arc of the representative map; the edge runs from the redex
/// interpretation to the contractum interpretation. An eta step is modelled
/// by the unit direction: the edge runs from the contractum side to the redex
/// side carrying the forward arc. Redexes under a binder are interpreted with
/// an untracked class; redexes in argument position degenerate to a trivial
/// class because step bases send edges to canonical witnesses.
pub fn interpret_conversion(
    tower: &Tower,
    step: &ConversionStep,
    env: &Env,
) -> Result<TowerEdge, SemError> {
    let s = interpret(tower, &step.source, env)?;
    let t = interpret(tower, &step.target, env)?;
    let base = redex_class(tower, step, env)?;
    let mut class = base;
    for d in &step.position {
        class = match (d, class) {
            (Dir::Body, _) => EdgeClass::Untracked,
            (_, EdgeClass::Untracked) => EdgeClass::Untracked,
            (Dir::Arg, _) => EdgeClass::Trivial,
            (Dir::Fun, c) => c,
        };
    }
    Ok(match step.kind {
        ConversionKind::Beta => TowerEdge {
            source: s,
            target: t,
            class,
        },
        ConversionKind::Eta => TowerEdge {
            source: t,
            target: s,
            class,
        },
    })
}

/// The level-0 class created at the redex itself.
fn redex_class(tower: &Tower, step: &ConversionStep, env: &Env) -> Result<EdgeClass, SemError> {
    // positions under binders cannot anchor an environment for the redex
    if step.position.contains(&Dir::Body) {
        return Ok(EdgeClass::Untracked);
    }
    let redex = subterm_at(&step.source, &step.position)?;
    match step.kind {
        ConversionKind::Beta => {
            let Term::App(f, _) = redex else {
                return Err(StepError::NotBetaRedex.into());
            };
            let Term::Lam(x, body) = f.as_ref() else {
                return Err(StepError::NotBetaRedex.into());
            };
            // eta-shaped body: the round trip passes through the head's
            // representative
            if let Term::App(h, a) = body.as_ref() {
                if matches!(a.as_ref(), Term::Var(y) if y == x) && !h.free_vars().contains(x) {
                    let z = interpret(tower, h, env)?;
                    if z.level == 0 {
                        let Payload::Base(v) = z.payload else {
                            unreachable!()
                        };
                        return Ok(match tower.rep_down_path(v) {
                            Some(p) => EdgeClass::Tracked(p.clone()),
                            None => EdgeClass::Trivial,
                        });
                    }
                    return Ok(EdgeClass::Trivial);
                }
            }
            // tabulated bodies round-trip exactly
            Ok(EdgeClass::Trivial)
        }
        ConversionKind::Eta => {
            let Term::Lam(x, body) = redex else {
                return Err(StepError::NotEtaRedex.into());
            };
            let Term::App(h, _) = body.as_ref() else {
                return Err(StepError::NotEtaRedex.into());
            };
            if h.free_vars().contains(x) {
                return Err(StepError::NotEtaRedex.into());
            }
            let z = interpret(tower, h, env)?;
            if z.level == 0 {
                let Payload::Base(v) = z.payload else {
                    unreachable!()
                };
                return Ok(match tower.rep_up_path(v) {
                    Some(p) => EdgeClass::Tracked(p.clone()),
                    None => EdgeClass::Trivial,
                });
            }
            Ok(EdgeClass::Trivial)
        }
    }
}

/// Verdict of comparing two conversion edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// Certified by a nonzero abelianised class of the comparison loop.
    NonEquivalent(Vec<i64>),
    Unknown,
}

/// Orients the edges to share endpoints, composes the first with the reverse
/// of the second, and decides the loop: a nonzero abelianised class certifies
/// non-equivalence; a freely cancelling word certifies equivalence; anything
/// else is unknown.
pub fn equivalent_conversions(
    tower: &Tower,
    e1: &TowerEdge,
    e2: &TowerEdge,
) -> Result<Verdict, SemError> {
    let same = tower.elem_equiv(&e1.source, &e2.source)?
        && tower.elem_equiv(&e1.target, &e2.target)?;
    let flipped = tower.elem_equiv(&e1.source, &e2.target)?
        && tower.elem_equiv(&e1.target, &e2.source)?;
    if !same && !flipped {
        return Err(SemError::EndpointMismatch);
    }
    if matches!(e1.class, EdgeClass::Untracked) || matches!(e2.class, EdgeClass::Untracked) {
        return Ok(Verdict::Unknown);
    }
    let carrier = tower.k0().carrier();
    let w1 = match &e1.class {
        EdgeClass::Tracked(p) => Some(p.clone()),
        _ => None,
    };
    let w2 = match &e2.class {
        EdgeClass::Tracked(p) => Some(p.clone()),
        _ => None,
    };
    let loop_word = match (w1, w2) {
        (None, None) => return Ok(Verdict::Equivalent),
        (Some(p), None) | (None, Some(p)) => {
            if p.start() != p.end(carrier) {
                return Ok(Verdict::Unknown);
            }
            p
        }
        (Some(p), Some(q)) => {
            // try both orientations of the second word, composing the first
            // with the reverse of the oriented second
            let mut candidate = None;
            for oriented in [
                if same { Some(q.clone()) } else { None },
                if flipped {
                    Some(q.reverse(carrier))
                } else {
                    None
                },
            ]
            .into_iter()
            .flatten()
            {
                let rev = oriented.reverse(carrier);
                if p.end(carrier) == rev.start() {
                    if let Ok(lp) = p.compose(carrier, &rev) {
                        if lp.start() == lp.end(carrier) {
                            candidate = Some(lp);
                            break;
                        }
                    }
                }
            }
            match candidate {
                Some(lp) => lp,
                None => return Ok(Verdict::Unknown),
            }
        }
    };
    let basis = Pi1Basis::new(carrier);
    let vec = pi1_class(carrier, &basis, &loop_word)?;
    if vec.iter().any(|&c| c != 0) {
        return Ok(Verdict::NonEquivalent(vec));
    }
    if loop_word.freely_reduced().is_empty() {
        return Ok(Verdict::Equivalent);
    }
    Ok(Verdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpo::build_n_plus;
    use crate::tower::{RepMode, TowerConfig};

    fn tower(mode: RepMode) -> Tower {
        Tower::new(TowerConfig {
            k0: build_n_plus(1).unwrap(),
            n: 3,
            rep: mode,
        })
        .unwrap()
    }

    fn example_env(t: &Tower) -> Env {
        let mut env = Env::new();
        env.bind(
            "x",
            t.from_vertex(t.k0().vertex("s1_0").unwrap()).unwrap(),
        );
        env.bind(
            "y",
            t.from_vertex(t.k0().vertex("s1_1").unwrap()).unwrap(),
        );
        env
    }

    #[test]
    fn parsing() {
        let t = parse(r"(\z. x z) y").unwrap();
        assert_eq!(
            t,
            Term::app(
                Term::lam("z", Term::app(Term::var("x"), Term::var("z"))),
                Term::var("y")
            )
        );
        assert_eq!(parse("x").unwrap(), Term::var("x"));
        assert_eq!(
            parse(r"\x.\y.x y").unwrap(),
            Term::lam("x", Term::lam("y", Term::app(Term::var("x"), Term::var("y"))))
        );
        // unicode binder
        assert_eq!(parse("λx. x x").unwrap(), parse(r"\x. x x").unwrap());
        // left associativity
        assert_eq!(
            parse("a b c").unwrap(),
            Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
        );
        let err = parse("x )").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(parse("").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("\\x x").is_err());
    }

    #[test]
    fn display_round_trip() {
        for src in [r"(\z. x z) y", "x y", r"\x. \y. x y", "a (b c)"] {
            let t = parse(src).unwrap();
            let again = parse(&t.to_string()).unwrap();
            assert_eq!(t, again);
        }
    }

    #[test]
    fn alpha_canonical_identifies_renamings() {
        let a = parse(r"\u. x u").unwrap();
        let b = parse(r"\w. x w").unwrap();
        assert_eq!(a.alpha_canonical(), b.alpha_canonical());
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\y. x y)[x := y] must not capture the free y
        let t = parse(r"\y. x y").unwrap();
        let s = t.subst("x", &Term::var("y"));
        let Term::Lam(b, body) = &s else { panic!() };
        assert_ne!(b, "y");
        assert_eq!(**body, Term::app(Term::var("y"), Term::var(b)));
    }

    #[test]
    fn steps_on_the_running_example() {
        let t = parse(r"(\z. x z) y").unwrap();
        let b = beta_step(&t, &[]).unwrap();
        assert_eq!(b.target, parse("x y").unwrap());
        let e = eta_step(&t, &[Dir::Fun]).unwrap();
        assert_eq!(e.target, parse("x y").unwrap());
        assert!(beta_step(&parse("x y").unwrap(), &[]).is_err());
        assert!(eta_step(&parse(r"\z. z z").unwrap(), &[]).is_err());
    }

    #[test]
    fn interpretation_of_variables_and_applications() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let x = interpret(&tw, &parse("x").unwrap(), &env).unwrap();
        assert!(tw
            .elem_equiv(&x, env.get("x").unwrap())
            .unwrap());
        let xy = interpret(&tw, &parse("x y").unwrap(), &env).unwrap();
        let b = env.get("y").unwrap().clone();
        assert!(tw.elem_equiv(&xy, &b).unwrap());
        assert!(matches!(
            interpret(&tw, &parse("w").unwrap(), &env),
            Err(SemError::Unbound(_))
        ));
    }

    #[test]
    fn interpretation_of_the_example_term() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let t = parse(r"(\z. x z) y").unwrap();
        let v = interpret(&tw, &t, &env).unwrap();
        let b = env.get("y").unwrap().clone();
        assert!(tw.elem_equiv(&v, &b).unwrap());
    }

    #[test]
    fn alpha_equivalent_terms_interpret_identically() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let a = interpret(&tw, &parse(r"(\z. x z) y").unwrap(), &env).unwrap();
        let b = interpret(&tw, &parse(r"(\w. x w) y").unwrap(), &env).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn conversion_edges_of_the_example() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let t = parse(r"(\z. x z) y").unwrap();
        let beta = interpret_conversion(&tw, &beta_step(&t, &[]).unwrap(), &env).unwrap();
        let eta = interpret_conversion(&tw, &eta_step(&t, &[Dir::Fun]).unwrap(), &env).unwrap();
        // both edges connect the two interpretations
        assert!(tw.elem_equiv(&beta.source, &eta.target).unwrap());
        assert!(tw.elem_equiv(&beta.target, &eta.source).unwrap());
        let EdgeClass::Tracked(pb) = &beta.class else {
            panic!("beta class should be tracked")
        };
        let EdgeClass::Tracked(pe) = &eta.class else {
            panic!("eta class should be tracked")
        };
        // the return arc (two edges) against the forward arc (one edge)
        assert_eq!(pb.word().len(), 2);
        assert_eq!(pe.word().len(), 1);
        let verdict = equivalent_conversions(&tw, &beta, &eta).unwrap();
        assert!(matches!(verdict, Verdict::NonEquivalent(_)));
    }

    #[test]
    fn identity_rep_makes_the_conversions_equivalent() {
        let tw = tower(RepMode::Identity);
        let env = example_env(&tw);
        let t = parse(r"(\z. x z) y").unwrap();
        let beta = interpret_conversion(&tw, &beta_step(&t, &[]).unwrap(), &env).unwrap();
        let eta = interpret_conversion(&tw, &eta_step(&t, &[Dir::Fun]).unwrap(), &env).unwrap();
        assert_eq!(beta.class, EdgeClass::Trivial);
        assert_eq!(eta.class, EdgeClass::Trivial);
        assert_eq!(
            equivalent_conversions(&tw, &beta, &eta).unwrap(),
            Verdict::Equivalent
        );
    }

    #[test]
    fn verdicts_are_reflexive_and_symmetric() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let t = parse(r"(\z. x z) y").unwrap();
        let beta = interpret_conversion(&tw, &beta_step(&t, &[]).unwrap(), &env).unwrap();
        let eta = interpret_conversion(&tw, &eta_step(&t, &[Dir::Fun]).unwrap(), &env).unwrap();
        assert_eq!(
            equivalent_conversions(&tw, &beta, &beta).unwrap(),
            Verdict::Equivalent
        );
        let v1 = equivalent_conversions(&tw, &beta, &eta).unwrap();
        let v2 = equivalent_conversions(&tw, &eta, &beta).unwrap();
        assert_eq!(
            matches!(v1, Verdict::NonEquivalent(_)),
            matches!(v2, Verdict::NonEquivalent(_))
        );
    }

    #[test]
    fn degenerate_edge_is_equivalent_to_itself() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let b = env.get("y").unwrap().clone();
        let e = TowerEdge::degenerate(b);
        assert_eq!(
            equivalent_conversions(&tw, &e, &e.clone()).unwrap(),
            Verdict::Equivalent
        );
        let _ = env;
    }

    #[test]
    fn transported_copies_of_one_edge_are_equivalent() {
        let tw = tower(RepMode::Example41);
        let carrier = tw.k0().carrier();
        let e01 = carrier.id_of("s1_01").unwrap().idx;
        let p = PathClass::new(carrier, tw.k0().vertex("s1_0").unwrap(), vec![(e01, true)])
            .unwrap();
        let edge = tw.embed_edge(p).unwrap();
        let b = tw
            .from_vertex(tw.k0().vertex("s1_1").unwrap())
            .unwrap();
        let t1 = tw.k_transport(&edge, &b).unwrap();
        let t2 = tw.k_transport(&edge, &b).unwrap();
        assert_eq!(
            equivalent_conversions(&tw, &t1, &t2).unwrap(),
            Verdict::Equivalent
        );
    }

    #[test]
    fn beta_edges_connect_endpoints() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        for src in [r"(\z. x z) y", r"(\z. y) x", r"(\z. x (y z)) y"] {
            let t = parse(src).unwrap();
            let step = beta_step(&t, &[]).unwrap();
            let edge = interpret_conversion(&tw, &step, &env).unwrap();
            let s = interpret(&tw, &step.source, &env).unwrap();
            let tt = interpret(&tw, &step.target, &env).unwrap();
            assert!(tw.elem_equiv(&edge.source, &s).unwrap());
            assert!(tw.elem_equiv(&edge.target, &tt).unwrap());
        }
    }

    #[test]
    fn argument_position_trivialises_and_binders_untrack() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        // redex in argument position
        let t = parse(r"x ((\z. x z) y)").unwrap();
        let step = beta_step(&t, &[Dir::Arg]).unwrap();
        let edge = interpret_conversion(&tw, &step, &env).unwrap();
        assert_eq!(edge.class, EdgeClass::Trivial);
        // redex under a binder: the contraction of the inner beta redex
        let u = parse(r"(\w. (\z. x z) w) y").unwrap();
        let step = beta_step(&u, &[Dir::Fun, Dir::Body]).unwrap();
        let edge = interpret_conversion(&tw, &step, &env).unwrap();
        assert_eq!(edge.class, EdgeClass::Untracked);
        let t2 = parse(r"(\z. x z) y").unwrap();
        let tracked =
            interpret_conversion(&tw, &beta_step(&t2, &[]).unwrap(), &env).unwrap();
        assert_eq!(
            equivalent_conversions(&tw, &edge, &tracked).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn substitution_lemma_on_the_closed_corpus() {
        // interpreting M[x := N] agrees with interpreting M where x is bound
        // to the interpretation of N, over the two-point environment pool
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let terms = [
            "x",
            "y",
            "x y",
            "y x",
            "x (x y)",
            r"\z. x z",
            r"\z. y z",
            r"(\z. x z) y",
        ];
        let values = ["x y", "y", "x"];
        for m in terms {
            let m = parse(m).unwrap();
            for n in values {
                let n = parse(n).unwrap();
                let substituted = m.subst("q", &n);
                assert!(m.size() <= 7 && substituted.size() <= 12);
                // bind q in a widened term so the lemma is non-vacuous
                let widened = Term::app(Term::var("q"), m.clone());
                let direct = interpret(&tw, &widened.subst("q", &n), &env).unwrap();
                let vn = interpret(&tw, &n, &env).unwrap();
                let indirect = interpret(&tw, &widened, &env.with("q", vn)).unwrap();
                assert!(tw.elem_equiv(&direct, &indirect).unwrap());
            }
        }
    }

    #[test]
    fn endpoint_mismatch_is_an_error() {
        let tw = tower(RepMode::Example41);
        let env = example_env(&tw);
        let t = parse(r"(\z. x z) y").unwrap();
        let beta = interpret_conversion(&tw, &beta_step(&t, &[]).unwrap(), &env).unwrap();
        let elsewhere = tw
            .from_vertex(tw.k0().vertex("s0_0").unwrap())
            .unwrap();
        let stray = TowerEdge::degenerate(elsewhere);
        assert!(matches!(
            equivalent_conversions(&tw, &beta, &stray),
            Err(SemError::EndpointMismatch)
        ));
    }

    #[test]
    fn unrepresentable_bodies_fail_loudly() {
        let tw = tower(RepMode::Identity);
        let env = Env::new();
        // the identity functor has no compactly supported basis below the
        // truncation
        let t = parse(r"\z. z").unwrap();
        match interpret(&tw, &t, &env) {
            Err(SemError::NotRepresentable(_)) => {}
            other => panic!("expected a representability failure, got {other:?}"),
        }
    }

    use crate::simplicial::PathClass;
}
