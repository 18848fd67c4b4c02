//! Finitely presented simplicial sets.
//!
//! A [`FiniteComplex`] stores, per dimension, a finite set of named
//! nondegenerate simplexes together with the ordered faces of each. Degenerate
//! simplexes are never materialised: they appear only symbolically, as a
//! [`Term`] pairing a stored simplex with a degeneracy word in Eilenberg-Zilber
//! normal form. All face/degeneracy arithmetic is done on terms, so the
//! simplicial identities can be checked exhaustively on everything we build.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// Default dimension budget for constructions that can blow up (products,
/// joins, standard simplexes built on demand).
pub const DEFAULT_DIM_BOUND: usize = 3;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("duplicate simplex name `{0}`")]
    DuplicateName(String),
    #[error("unknown simplex `{0}`")]
    UnknownName(String),
    #[error("simplex `{name}` of dimension {dim} must list {expected} faces, got {got}")]
    FaceCount {
        name: String,
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("face {index} of `{name}` has dimension {got}, expected {expected}")]
    FaceDim {
        name: String,
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("simplicial identity d{i} d{j} = d{jm1} d{i} fails on `{name}`")]
    Identity {
        name: String,
        i: usize,
        j: usize,
        jm1: usize,
    },
    #[error("dimension {dim} exceeds the bound {bound}")]
    DimBound { dim: usize, bound: usize },
    #[error("boundary of the 0-simplex is empty; need n >= 1")]
    EmptyBoundary,
    #[error("horn index {i} out of range for dimension {n}")]
    HornIndex { n: usize, i: usize },
    #[error("horn face at index {0} has the wrong dimension")]
    HornFaceDim(usize),
    #[error("horn faces at indexes {j} and {k} disagree on their shared sub-face")]
    HornMismatch { j: usize, k: usize },
    #[error("a face of a vertex was requested")]
    VertexFace,
    #[error(
        "horn instance budget exceeded: about {estimate} instances, cap is {cap}; \
         raise the cap to continue"
    )]
    InstanceCap { estimate: u64, cap: u64 },
    #[error("path word is not composable at step {0}")]
    PathNotComposable(usize),
    #[error("path is not a loop: starts at `{start}`, ends at `{end}`")]
    PathNotClosed { start: String, end: String },
    #[error("standard simplexes with more than 10 vertices are not supported")]
    TooLarge,
}

/// Identifier of a stored nondegenerate simplex: dimension plus index within
/// that dimension's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexId {
    pub dim: usize,
    pub idx: usize,
}

/// A possibly degenerate simplex: a degeneracy word applied to a stored
/// simplex. `degs` is strictly decreasing, which makes the representation
/// unique (Eilenberg-Zilber normal form).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    degs: Vec<usize>,
    base: SimplexId,
}

impl Term {
    pub fn nondeg(base: SimplexId) -> Term {
        Term {
            degs: Vec::new(),
            base,
        }
    }

    pub fn base(&self) -> SimplexId {
        self.base
    }

    pub fn degs(&self) -> &[usize] {
        &self.degs
    }

    pub fn dim(&self) -> usize {
        self.base.dim + self.degs.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degs.is_empty()
    }

    /// Applies the degeneracy `s_i`, renormalising with `s_i s_j = s_{j+1} s_i`
    /// for `i <= j`. The walk stops as soon as `i` exceeds the next index, so
    /// the word stays strictly decreasing.
    pub fn degeneracy(&self, i: usize) -> Term {
        debug_assert!(i <= self.dim());
        let mut out = Vec::with_capacity(self.degs.len() + 1);
        let mut rest = self.degs.iter().peekable();
        while let Some(&&j) = rest.peek() {
            if i <= j {
                out.push(j + 1);
                rest.next();
            } else {
                break;
            }
        }
        out.push(i);
        out.extend(rest.copied());
        Term {
            degs: out,
            base: self.base,
        }
    }

    /// Splits off the degeneracy direction `i`, returning the term `t` with
    /// `self = s_i t`. Only valid when `i` is one of the term's degeneracy
    /// directions.
    fn strip_degeneracy(&self, i: usize) -> Term {
        let pos = self
            .degs
            .iter()
            .position(|&j| j == i)
            .expect("strip_degeneracy: direction not present");
        let mut degs: Vec<usize> = Vec::with_capacity(self.degs.len() - 1);
        for (k, &j) in self.degs.iter().enumerate() {
            if k < pos {
                degs.push(j - 1);
            } else if k > pos {
                degs.push(j);
            }
        }
        Term {
            degs,
            base: self.base,
        }
    }
}

/// A finitely presented simplicial set at bounded dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    dim_bound: usize,
    /// names[d] lists the nondegenerate d-simplexes in storage order.
    names: Vec<Vec<String>>,
    index: BTreeMap<String, SimplexId>,
    /// faces[d][idx] holds the d+1 ordered faces (d >= 1).
    faces: Vec<Vec<Vec<Term>>>,
}

impl FiniteComplex {
    pub fn empty(dim_bound: usize) -> FiniteComplex {
        FiniteComplex {
            dim_bound,
            names: vec![Vec::new(); dim_bound + 1],
            index: BTreeMap::new(),
            faces: vec![Vec::new(); dim_bound + 1],
        }
    }

    pub fn dim_bound(&self) -> usize {
        self.dim_bound
    }

    /// Largest dimension with a stored simplex; None when empty.
    pub fn max_dim(&self) -> Option<usize> {
        (0..=self.dim_bound).rev().find(|&d| !self.names[d].is_empty())
    }

    pub fn count(&self, dim: usize) -> usize {
        if dim <= self.dim_bound {
            self.names[dim].len()
        } else {
            0
        }
    }

    /// f-vector over dimensions 0..=max_dim.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.max_dim() {
            None => Vec::new(),
            Some(m) => (0..=m).map(|d| self.count(d)).collect(),
        }
    }

    pub fn ids(&self, dim: usize) -> impl Iterator<Item = SimplexId> + '_ {
        (0..self.count(dim)).map(move |idx| SimplexId { dim, idx })
    }

    pub fn name(&self, id: SimplexId) -> &str {
        &self.names[id.dim][id.idx]
    }

    pub fn id_of(&self, name: &str) -> Result<SimplexId, ComplexError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ComplexError::UnknownName(name.to_string()))
    }

    pub fn stored_face(&self, id: SimplexId, i: usize) -> &Term {
        &self.faces[id.dim][id.idx][i]
    }

    /// `d_i` on a term, pushed through the degeneracy word with the simplicial
    /// identities and resolved against stored faces at the bottom.
    pub fn face(&self, t: &Term, i: usize) -> Result<Term, ComplexError> {
        match t.degs.split_first() {
            None => {
                if t.base.dim == 0 {
                    return Err(ComplexError::VertexFace);
                }
                Ok(self.stored_face(t.base, i).clone())
            }
            Some((&j, rest)) => {
                let inner = Term {
                    degs: rest.to_vec(),
                    base: t.base,
                };
                if i < j {
                    Ok(self.face(&inner, i)?.degeneracy(j - 1))
                } else if i == j || i == j + 1 {
                    Ok(inner)
                } else {
                    Ok(self.face(&inner, i - 1)?.degeneracy(j))
                }
            }
        }
    }

    /// Ordered vertex list of a term (with repeats when degenerate).
    pub fn vertex_list(&self, t: &Term) -> Result<Vec<usize>, ComplexError> {
        let n = t.dim();
        let mut out = Vec::with_capacity(n + 1);
        for v in 0..=n {
            let mut cur = t.clone();
            for k in (v + 1..=n).rev() {
                cur = self.face(&cur, k)?;
            }
            for _ in 0..v {
                cur = self.face(&cur, 0)?;
            }
            debug_assert_eq!(cur.dim(), 0);
            out.push(cur.base.idx);
        }
        Ok(out)
    }

    /// All terms of dimension `m`: stored simplexes first, then degeneracies of
    /// lower stored simplexes, in a fixed order.
    pub fn terms_of_dim(&self, m: usize) -> Vec<Term> {
        let mut out: Vec<Term> = self.ids(m).map(Term::nondeg).collect();
        let mut degenerate = Vec::new();
        for d in (0..m).rev() {
            for id in self.ids(d) {
                let k = m - d;
                let mut words = Vec::new();
                descending_words(m, d, k, &mut Vec::new(), &mut words);
                for w in words {
                    degenerate.push(Term {
                        degs: w,
                        base: id,
                    });
                }
            }
        }
        degenerate.sort();
        out.extend(degenerate);
        out
    }

    /// Checks every stored simplex against `d_i d_j = d_{j-1} d_i` (i < j) and
    /// face dimension bookkeeping.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for d in 1..=self.dim_bound {
            for idx in 0..self.count(d) {
                let id = SimplexId { dim: d, idx };
                let fs = &self.faces[d][idx];
                if fs.len() != d + 1 {
                    return Err(ComplexError::FaceCount {
                        name: self.name(id).to_string(),
                        dim: d,
                        expected: d + 1,
                        got: fs.len(),
                    });
                }
                for (i, f) in fs.iter().enumerate() {
                    if f.dim() + 1 != d {
                        return Err(ComplexError::FaceDim {
                            name: self.name(id).to_string(),
                            index: i,
                            got: f.dim(),
                            expected: d - 1,
                        });
                    }
                }
                if d >= 2 {
                    let t = Term::nondeg(id);
                    for j in 1..=d {
                        for i in 0..j {
                            let lhs = self.face(&self.face(&t, j)?, i)?;
                            let rhs = self.face(&self.face(&t, i)?, j - 1)?;
                            if lhs != rhs {
                                return Err(ComplexError::Identity {
                                    name: self.name(id).to_string(),
                                    i,
                                    j,
                                    jm1: j - 1,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Source and target vertex of a stored edge (`d_1`, `d_0`).
    pub fn edge_endpoints(&self, idx: usize) -> (usize, usize) {
        let id = SimplexId { dim: 1, idx };
        let tgt = self.stored_face(id, 0).base.idx;
        let src = self.stored_face(id, 1).base.idx;
        (src, tgt)
    }

    /// Renders a term in the text-format syntax, e.g. `s1(s0(a))`.
    pub fn render_term(&self, t: &Term) -> String {
        let mut s = self.name(t.base).to_string();
        for &j in t.degs.iter().rev() {
            s = format!("s{j}({s})");
        }
        s
    }
}

/// Strictly decreasing degeneracy words of length `k` whose indexes are valid
/// on a base of dimension `d` inside an `m`-dimensional term.
fn descending_words(m: usize, d: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    // position from the right: the t-th degeneracy applied (innermost first)
    // must have index <= d + t - 1; equivalently the ascending list a_1<..<a_k
    // satisfies a_t < d + t.
    let upper = if acc.is_empty() { m } else { acc[acc.len() - 1] };
    let remaining = k - acc.len();
    for j in (0..upper).rev() {
        // after choosing j here, the `remaining - 1` entries below j must be
        // distinct values < j, and the smallest entry overall must be <= d +
        // (its position). A simple sufficient pruning: j must leave room for
        // remaining-1 smaller values.
        if j + 1 < remaining {
            continue;
        }
        acc.push(j);
        if word_valid_so_far(d, k, acc) {
            descending_words(m, d, k, acc, out);
        }
        acc.pop();
    }
}

fn word_valid_so_far(d: usize, k: usize, acc: &[usize]) -> bool {
    // acc is descending; the entry at ascending position t (1-based from the
    // smallest) must satisfy a_t < d + t, and acc[i] lands at position k - i.
    acc.iter()
        .enumerate()
        .all(|(i, &j)| j < d + (k - i))
}

/// Incremental construction of a [`FiniteComplex`].
pub struct ComplexBuilder {
    cx: FiniteComplex,
}

impl ComplexBuilder {
    pub fn new(dim_bound: usize) -> ComplexBuilder {
        ComplexBuilder {
            cx: FiniteComplex::empty(dim_bound),
        }
    }

    pub fn vertex(&mut self, name: &str) -> Result<SimplexId, ComplexError> {
        self.insert(name, 0, Vec::new())
    }

    pub fn simplex(&mut self, name: &str, faces: Vec<Term>) -> Result<SimplexId, ComplexError> {
        let dim = faces
            .first()
            .map(|f| f.dim() + 1)
            .ok_or(ComplexError::FaceCount {
                name: name.to_string(),
                dim: 0,
                expected: 1,
                got: 0,
            })?;
        self.insert(name, dim, faces)
    }

    fn insert(
        &mut self,
        name: &str,
        dim: usize,
        faces: Vec<Term>,
    ) -> Result<SimplexId, ComplexError> {
        if dim > self.cx.dim_bound {
            return Err(ComplexError::DimBound {
                dim,
                bound: self.cx.dim_bound,
            });
        }
        if self.cx.index.contains_key(name) {
            return Err(ComplexError::DuplicateName(name.to_string()));
        }
        let id = SimplexId {
            dim,
            idx: self.cx.names[dim].len(),
        };
        self.cx.names[dim].push(name.to_string());
        self.cx.index.insert(name.to_string(), id);
        self.cx.faces[dim].push(faces);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<SimplexId, ComplexError> {
        self.cx.id_of(name)
    }

    pub fn build(self) -> Result<FiniteComplex, ComplexError> {
        self.cx.validate()?;
        Ok(self.cx)
    }
}

fn subset_name(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// Builds a complex whose simplexes are a downward-closed family of vertex
/// subsets of `{0..=n}`, named by digit strings.
fn subset_complex(n: usize, keep: impl Fn(&[usize]) -> bool) -> Result<FiniteComplex, ComplexError> {
    if n > 9 {
        return Err(ComplexError::TooLarge);
    }
    let mut b = ComplexBuilder::new(n);
    let verts: Vec<usize> = (0..=n).collect();
    for d in 0..=n {
        for s in k_subsets(&verts, d + 1) {
            if !keep(&s) {
                continue;
            }
            if d == 0 {
                b.vertex(&subset_name(&s))?;
            } else {
                let mut faces = Vec::with_capacity(d + 1);
                for i in 0..=d {
                    let mut f = s.clone();
                    f.remove(i);
                    faces.push(Term::nondeg(b.lookup(&subset_name(&f))?));
                }
                b.simplex(&subset_name(&s), faces)?;
            }
        }
    }
    b.build()
}

fn k_subsets(base: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn rec(base: &[usize], k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in from..base.len() {
            acc.push(base[i]);
            rec(base, k, i + 1, acc, out);
            acc.pop();
        }
    }
    rec(base, k, 0, &mut acc, &mut out);
    out
}

/// The standard n-simplex with all nondegenerate faces enumerated.
pub fn standard_simplex(n: usize) -> Result<FiniteComplex, ComplexError> {
    subset_complex(n, |_| true)
}

/// The boundary of the n-simplex (the finite combinatorial model used in
/// place of the sphere of dimension n-1).
pub fn boundary_complex(n: usize) -> Result<FiniteComplex, ComplexError> {
    if n == 0 {
        return Err(ComplexError::EmptyBoundary);
    }
    subset_complex(n, |s| s.len() != n + 1)
}

/// The horn obtained from the n-simplex by dropping the top cell and the face
/// opposite vertex `i`.
pub fn horn_complex(n: usize, i: usize) -> Result<FiniteComplex, ComplexError> {
    if n == 0 || i > n {
        return Err(ComplexError::HornIndex { n, i });
    }
    subset_complex(n, move |s| {
        s.len() != n + 1 && !(s.len() == n && !s.contains(&i))
    })
}

/// Disjoint union with a prefix per part (names become `prefix` + old name).
pub fn disjoint_union(
    parts: &[(&str, &FiniteComplex)],
    dim_bound: usize,
) -> Result<FiniteComplex, ComplexError> {
    let mut b = ComplexBuilder::new(dim_bound);
    for (prefix, cx) in parts {
        for d in 0..=cx.dim_bound.min(dim_bound) {
            for id in cx.ids(d) {
                let name = format!("{prefix}{}", cx.name(id));
                if d == 0 {
                    b.vertex(&name)?;
                } else {
                    let faces = (0..=d)
                        .map(|i| {
                            let f = cx.stored_face(id, i);
                            let base = b.lookup(&format!("{prefix}{}", cx.name(f.base)))?;
                            Ok(Term {
                                degs: f.degs.clone(),
                                base,
                            })
                        })
                        .collect::<Result<Vec<_>, ComplexError>>()?;
                    b.simplex(&name, faces)?;
                }
            }
        }
    }
    b.build()
}

/// A product complex together with its truncation flag and projections.
pub struct Product {
    pub complex: FiniteComplex,
    /// Set when jointly nondegenerate pairs exist above the budget.
    pub truncated: bool,
    proj: Vec<Vec<(Term, Term)>>,
}

impl Product {
    pub fn projections(&self, id: SimplexId) -> (&Term, &Term) {
        let (l, r) = &self.proj[id.dim][id.idx];
        (l, r)
    }
}

/// Cartesian product, enumerated via jointly nondegenerate pairs of terms up
/// to the dimension budget.
pub fn product(
    x: &FiniteComplex,
    y: &FiniteComplex,
    budget: usize,
) -> Result<Product, ComplexError> {
    let mut b = ComplexBuilder::new(budget);
    let mut proj: Vec<Vec<(Term, Term)>> = vec![Vec::new(); budget + 1];
    let mut pair_index: BTreeMap<(Term, Term), SimplexId> = BTreeMap::new();

    let pair_name = |x: &FiniteComplex, y: &FiniteComplex, l: &Term, r: &Term| {
        format!("({},{})", x.render_term(l), y.render_term(r))
    };

    for m in 0..=budget {
        let lterms = x.terms_of_dim(m);
        let rterms = y.terms_of_dim(m);
        for l in &lterms {
            for r in &rterms {
                if l.degs.iter().any(|j| r.degs.contains(j)) {
                    continue;
                }
                let name = pair_name(x, y, l, r);
                let id = if m == 0 {
                    b.vertex(&name)?
                } else {
                    let mut faces = Vec::with_capacity(m + 1);
                    for i in 0..=m {
                        let fl = x.face(l, i)?;
                        let fr = y.face(r, i)?;
                        faces.push(resolve_pair(&pair_index, fl, fr));
                    }
                    b.simplex(&name, faces)?
                };
                pair_index.insert((l.clone(), r.clone()), id);
                proj[m].push((l.clone(), r.clone()));
            }
        }
    }

    // Truncation probe one dimension above the budget.
    let mut truncated = false;
    if x.max_dim().is_some() && y.max_dim().is_some() {
        let m = budget + 1;
        'probe: for l in x.terms_of_dim_unbounded(m) {
            for r in y.terms_of_dim_unbounded(m) {
                if !l.degs.iter().any(|j| r.degs.contains(j)) {
                    truncated = true;
                    break 'probe;
                }
            }
        }
    }

    Ok(Product {
        complex: b.build()?,
        truncated,
        proj,
    })
}

impl FiniteComplex {
    /// Like [`terms_of_dim`](Self::terms_of_dim) but does not require `m` to be
    /// within the dimension bound (used for truncation probes).
    fn terms_of_dim_unbounded(&self, m: usize) -> Vec<Term> {
        let mut out: Vec<Term> = if m <= self.dim_bound {
            self.ids(m).map(Term::nondeg).collect()
        } else {
            Vec::new()
        };
        for d in (0..m.min(self.dim_bound + 1)).rev() {
            for id in self.ids(d) {
                let k = m - d;
                let mut words = Vec::new();
                descending_words(m, d, k, &mut Vec::new(), &mut words);
                for w in words {
                    out.push(Term {
                        degs: w,
                        base: id,
                    });
                }
            }
        }
        out
    }
}

/// Strips the common degeneracy directions of a face pair and resolves the
/// jointly nondegenerate core against the product's stored simplexes.
fn resolve_pair(pair_index: &BTreeMap<(Term, Term), SimplexId>, mut l: Term, mut r: Term) -> Term {
    let mut word: Vec<usize> = Vec::new();
    loop {
        let common = l
            .degs
            .iter()
            .copied()
            .filter(|j| r.degs.contains(j))
            .max();
        match common {
            None => break,
            Some(j) => {
                l = l.strip_degeneracy(j);
                r = r.strip_degeneracy(j);
                word.push(j);
            }
        }
    }
    let base = *pair_index
        .get(&(l, r))
        .expect("face pair must already be stored at a lower dimension");
    let mut t = Term::nondeg(base);
    for &j in word.iter().rev() {
        t = t.degeneracy(j);
    }
    t
}

/// The join of two complexes. Vertices are ordered left part first, so the
/// canonical comparison against a standard simplex is by vertex order.
pub fn join(
    x: &FiniteComplex,
    y: &FiniteComplex,
    budget: usize,
) -> Result<FiniteComplex, ComplexError> {
    let xmax = x.max_dim();
    let ymax = y.max_dim();
    if let (Some(a), Some(b)) = (xmax, ymax) {
        if a + b + 1 > budget {
            return Err(ComplexError::DimBound {
                dim: a + b + 1,
                bound: budget,
            });
        }
    }
    let mut b = ComplexBuilder::new(budget);
    // vertices first: all of X then all of Y
    for id in x.ids(0) {
        b.vertex(&format!("l_{}", x.name(id)))?;
    }
    for id in y.ids(0) {
        b.vertex(&format!("r_{}", y.name(id)))?;
    }
    let remap = |b: &ComplexBuilder,
                 side: char,
                 cx: &FiniteComplex,
                 t: &Term|
     -> Result<Term, ComplexError> {
        let base = b.lookup(&format!("{side}_{}", cx.name(t.base)))?;
        Ok(Term {
            degs: t.degs.clone(),
            base,
        })
    };
    // pure simplexes of each side, dimension by dimension
    for d in 1..=budget {
        for id in x.ids(d) {
            let faces = (0..=d)
                .map(|i| remap(&b, 'l', x, x.stored_face(id, i)))
                .collect::<Result<Vec<_>, _>>()?;
            b.simplex(&format!("l_{}", x.name(id)), faces)?;
        }
        for id in y.ids(d) {
            let faces = (0..=d)
                .map(|i| remap(&b, 'r', y, y.stored_face(id, i)))
                .collect::<Result<Vec<_>, _>>()?;
            b.simplex(&format!("r_{}", y.name(id)), faces)?;
        }
    }
    // mixed pairs in order of total dimension
    let pair_name =
        |x: &FiniteComplex, y: &FiniteComplex, l: SimplexId, r: SimplexId| -> String {
            format!("l_{}*r_{}", x.name(l), y.name(r))
        };
    for n in 1..=budget {
        for i in 0..n {
            let j = n - 1 - i;
            for l in x.ids(i) {
                for r in y.ids(j) {
                    let mut faces: Vec<Term> = Vec::with_capacity(n + 1);
                    for k in 0..=n {
                        if k <= i {
                            if i == 0 {
                                faces.push(remap(&b, 'r', y, &Term::nondeg(r))?);
                            } else {
                                let fl = x.face(&Term::nondeg(l), k)?;
                                faces.push(join_pair_term(&b, x, y, &fl, &Term::nondeg(r))?);
                            }
                        } else if j == 0 {
                            faces.push(remap(&b, 'l', x, &Term::nondeg(l))?);
                        } else {
                            let fr = y.face(&Term::nondeg(r), k - i - 1)?;
                            faces.push(join_pair_term(&b, x, y, &Term::nondeg(l), &fr)?);
                        }
                    }
                    b.simplex(&pair_name(x, y, l, r), faces)?;
                }
            }
        }
    }
    b.build()
}

/// Builds the join term for a (possibly degenerate) left part paired with a
/// (possibly degenerate) right part. Degeneracies are rebuilt over the stored
/// base pair: right-side indexes shift past the left base block (its
/// dimension plus one), and they are applied before the left-side ones, while
/// the left block still has its base size.
fn join_pair_term(
    b: &ComplexBuilder,
    x: &FiniteComplex,
    y: &FiniteComplex,
    l: &Term,
    r: &Term,
) -> Result<Term, ComplexError> {
    let base = b.lookup(&format!("l_{}*r_{}", x.name(l.base), y.name(r.base)))?;
    let shift = l.base.dim + 1;
    let mut t = Term::nondeg(base);
    for &j in r.degs.iter().rev() {
        t = t.degeneracy(j + shift);
    }
    for &j in l.degs.iter().rev() {
        t = t.degeneracy(j);
    }
    Ok(t)
}

/// Dimension-preserving comparison along the canonical vertex order (vertex k
/// of `x` maps to vertex k of `y`). Sufficient for complexes whose simplexes
/// are determined by their vertex lists.
pub fn isomorphic_by_vertex_order(x: &FiniteComplex, y: &FiniteComplex) -> bool {
    if x.count(0) != y.count(0) {
        return false;
    }
    let maxd = x.max_dim().max(y.max_dim());
    let Some(maxd) = maxd else { return true };
    for d in 0..=maxd {
        if x.count(d) != y.count(d) {
            return false;
        }
        let mut xs: Vec<Vec<usize>> = Vec::new();
        let mut ys: Vec<Vec<usize>> = Vec::new();
        for id in x.ids(d) {
            match x.vertex_list(&Term::nondeg(id)) {
                Ok(v) => xs.push(v),
                Err(_) => return false,
            }
        }
        for id in y.ids(d) {
            match y.vertex_list(&Term::nondeg(id)) {
                Ok(v) => ys.push(v),
                Err(_) => return false,
            }
        }
        xs.sort();
        ys.sort();
        if xs != ys {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Horns, fillers, bounded Kan reports
// ---------------------------------------------------------------------------

/// A horn assignment: images for every face of the horn except the one
/// opposite vertex `i`, compatible on shared sub-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornInstance {
    pub n: usize,
    pub i: usize,
    /// faces[j] for j != i, each of dimension n-1.
    pub faces: BTreeMap<usize, Term>,
}

impl HornInstance {
    pub fn new(
        cx: &FiniteComplex,
        n: usize,
        i: usize,
        faces: BTreeMap<usize, Term>,
    ) -> Result<HornInstance, ComplexError> {
        if n == 0 || i > n {
            return Err(ComplexError::HornIndex { n, i });
        }
        for (&j, f) in &faces {
            if j == i || j > n || f.dim() + 1 != n {
                return Err(ComplexError::HornFaceDim(j));
            }
        }
        for &j in faces.keys() {
            for &k in faces.keys() {
                if j < k && cx.face(&faces[&k], j)? != cx.face(&faces[&j], k - 1)? {
                    return Err(ComplexError::HornMismatch { j, k });
                }
            }
        }
        Ok(HornInstance { n, i, faces })
    }
}

/// Checks that a candidate n-term matches a horn assignment on every assigned
/// face. This is the post-hoc soundness check for fillers.
pub fn is_filler(cx: &FiniteComplex, h: &HornInstance, cand: &Term) -> bool {
    if cand.dim() != h.n {
        return false;
    }
    h.faces
        .iter()
        .all(|(&j, f)| cx.face(cand, j).map(|g| &g == f).unwrap_or(false))
}

/// Exhaustive filler search over stored simplexes and degeneracies of lower
/// ones, in a fixed candidate order. Absence is a result, not an error.
/// Horns above the stored dimension bound are searched too: only degenerate
/// candidates exist there.
pub fn find_filler(cx: &FiniteComplex, h: &HornInstance) -> Option<Term> {
    cx.terms_of_dim(h.n)
        .into_iter()
        .find(|cand| is_filler(cx, h, cand))
}

/// Outcome of a bounded-dimension horn-filling scan. This is not a Kan
/// certificate: only horns up to the stated dimension are checked, and only
/// assignments that extend to a full simplex boundary within the complex are
/// enumerated (an assignment whose opposite face cannot even be chosen
/// consistently is counted in `skipped_unclosable` instead).
#[derive(Clone, Debug)]
pub struct KanReport {
    pub up_to: usize,
    pub pass: bool,
    pub witness: Option<HornInstance>,
    pub instances_checked: u64,
    pub skipped_unclosable: u64,
    pub label: &'static str,
}

pub const DEFAULT_INSTANCE_CAP: u64 = 1_000_000;

/// Enumerates boundary-closable horn assignments of dimension `1..=up_to` and
/// searches fillers for each. Inner horns are scanned before outer ones, so a
/// complex failing both reports an inner witness. Aborts with a count estimate
/// when the instance budget would be exceeded.
pub fn kan_check(
    cx: &FiniteComplex,
    up_to: usize,
    cap: u64,
) -> Result<KanReport, ComplexError> {
    let mut estimate: u64 = 0;
    for n in 1..=up_to {
        let t = cx.terms_of_dim(n - 1).len() as u64;
        let per = t.saturating_pow(n as u32);
        estimate = estimate.saturating_add(per.saturating_mul(n as u64 + 1));
    }
    if estimate > cap {
        return Err(ComplexError::InstanceCap { estimate, cap });
    }

    let mut checked: u64 = 0;
    let mut skipped: u64 = 0;
    for n in 1..=up_to {
        let terms = cx.terms_of_dim(n - 1);
        let mut order: Vec<usize> = (1..n).collect();
        order.push(0);
        order.push(n);
        for i in order {
            let slots: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
            let mut assignment: BTreeMap<usize, Term> = BTreeMap::new();
            if let Some(witness) = scan_slot(
                cx,
                n,
                i,
                &slots,
                0,
                &terms,
                &mut assignment,
                &mut checked,
                &mut skipped,
            )? {
                return Ok(KanReport {
                    up_to,
                    pass: false,
                    witness: Some(witness),
                    instances_checked: checked,
                    skipped_unclosable: skipped,
                    label: "bounded-dimension check",
                });
            }
        }
    }
    Ok(KanReport {
        up_to,
        pass: true,
        witness: None,
        instances_checked: checked,
        skipped_unclosable: skipped,
        label: "bounded-dimension check",
    })
}

#[allow(clippy::too_many_arguments)]
fn scan_slot(
    cx: &FiniteComplex,
    n: usize,
    i: usize,
    slots: &[usize],
    at: usize,
    terms: &[Term],
    assignment: &mut BTreeMap<usize, Term>,
    checked: &mut u64,
    skipped: &mut u64,
) -> Result<Option<HornInstance>, ComplexError> {
    if at == slots.len() {
        // Is the assignment boundary-closable? The face opposite vertex i must
        // admit some compatible image.
        let closable = terms.iter().any(|g| {
            assignment.iter().all(|(&j, f)| {
                if j < i {
                    matches!((cx.face(g, j), cx.face(f, i - 1)), (Ok(a), Ok(b)) if a == b)
                } else {
                    matches!((cx.face(f, i), cx.face(g, j - 1)), (Ok(a), Ok(b)) if a == b)
                }
            })
        });
        if !closable {
            *skipped += 1;
            return Ok(None);
        }
        *checked += 1;
        let inst = HornInstance {
            n,
            i,
            faces: assignment.clone(),
        };
        if find_filler(cx, &inst).is_none() {
            return Ok(Some(inst));
        }
        return Ok(None);
    }
    let j = slots[at];
    'cand: for t in terms {
        for (&k, f) in assignment.iter() {
            // compatibility between slot k (already set) and slot j
            let (lo, lof, hi, hif) = if k < j { (k, f, j, t) } else { (j, t, k, f) };
            if cx.face(hif, lo)? != cx.face(lof, hi - 1)? {
                continue 'cand;
            }
        }
        assignment.insert(j, t.clone());
        let r = scan_slot(cx, n, i, slots, at + 1, terms, assignment, checked, skipped)?;
        assignment.remove(&j);
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// pi0 and abelianised pi1
// ---------------------------------------------------------------------------

/// Connected components of the 1-skeleton, as sorted vertex index sets.
pub fn pi0(cx: &FiniteComplex) -> Vec<BTreeSet<usize>> {
    let nv = cx.count(0);
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in 0..cx.count(1) {
        let (s, t) = cx.edge_endpoints(e);
        let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
        if rs != rt {
            parent[rs.max(rt)] = rs.min(rt);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for v in 0..nv {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().insert(v);
    }
    groups.into_values().collect()
}

/// An edge-path: a basepoint plus a composable word of signed stored edges.
/// The sign records traversal direction (edges of a Kan-side complex are
/// formally invertible).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathClass {
    base: usize,
    word: Vec<(usize, bool)>,
}

impl PathClass {
    /// The constant path at a vertex.
    pub fn trivial(base: usize) -> PathClass {
        PathClass {
            base,
            word: Vec::new(),
        }
    }

    pub fn new(
        cx: &FiniteComplex,
        base: usize,
        word: Vec<(usize, bool)>,
    ) -> Result<PathClass, ComplexError> {
        let p = PathClass { base, word };
        p.check(cx)?;
        Ok(p)
    }

    fn check(&self, cx: &FiniteComplex) -> Result<(), ComplexError> {
        let mut at = self.base;
        for (step, &(e, fwd)) in self.word.iter().enumerate() {
            let (s, t) = cx.edge_endpoints(e);
            let (from, to) = if fwd { (s, t) } else { (t, s) };
            if from != at {
                return Err(ComplexError::PathNotComposable(step));
            }
            at = to;
        }
        Ok(())
    }

    pub fn start(&self) -> usize {
        self.base
    }

    pub fn end(&self, cx: &FiniteComplex) -> usize {
        let mut at = self.base;
        for &(e, fwd) in &self.word {
            let (s, t) = cx.edge_endpoints(e);
            at = if fwd { t } else { s };
        }
        at
    }

    pub fn word(&self) -> &[(usize, bool)] {
        &self.word
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn reverse(&self, cx: &FiniteComplex) -> PathClass {
        let base = self.end(cx);
        let word = self
            .word
            .iter()
            .rev()
            .map(|&(e, fwd)| (e, !fwd))
            .collect();
        PathClass { base, word }
    }

    pub fn compose(&self, cx: &FiniteComplex, other: &PathClass) -> Result<PathClass, ComplexError> {
        if self.end(cx) != other.base {
            return Err(ComplexError::PathNotComposable(self.word.len()));
        }
        let mut word = self.word.clone();
        word.extend(other.word.iter().copied());
        PathClass::new(cx, self.base, word)
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn freely_reduced(&self) -> PathClass {
        let mut out: Vec<(usize, bool)> = Vec::with_capacity(self.word.len());
        for &(e, fwd) in &self.word {
            if let Some(&(pe, pf)) = out.last() {
                if pe == e && pf != fwd {
                    out.pop();
                    continue;
                }
            }
            out.push((e, fwd));
        }
        PathClass {
            base: self.base,
            word: out,
        }
    }
}

/// Cycle-space bookkeeping for a complex: a spanning forest of the 1-skeleton,
/// the independent (non-tree) edges, and the relation lattice generated by
/// boundaries of stored 2-simplexes, kept in row-echelon form over the
/// integers.
pub struct Pi1Basis {
    /// indexes of non-tree edges, in storage order.
    pub cycle_edges: Vec<usize>,
    coord_of_edge: BTreeMap<usize, usize>,
    relations: Vec<Vec<i64>>,
}

impl Pi1Basis {
    pub fn new(cx: &FiniteComplex) -> Pi1Basis {
        let nv = cx.count(0);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv]; // (edge, other)
        for e in 0..cx.count(1) {
            let (s, t) = cx.edge_endpoints(e);
            adj[s].push((e, t));
            adj[t].push((e, s));
        }
        let mut tree_edge: Vec<bool> = vec![false; cx.count(1)];
        let mut seen = vec![false; nv];
        for root in 0..nv {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(v) = q.pop_front() {
                for &(e, w) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        tree_edge[e] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let cycle_edges: Vec<usize> = (0..cx.count(1)).filter(|&e| !tree_edge[e]).collect();
        let coord_of_edge: BTreeMap<usize, usize> = cycle_edges
            .iter()
            .enumerate()
            .map(|(c, &e)| (e, c))
            .collect();
        let dim = cycle_edges.len();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for idx in 0..cx.count(2) {
            let id = SimplexId { dim: 2, idx };
            let mut row = vec![0i64; dim];
            // boundary loop of a 2-simplex: +d2 +d0 -d1
            for (i, sign) in [(2usize, 1i64), (0, 1), (1, -1)] {
                let f = cx.stored_face(id, i);
                if !f.is_degenerate() {
                    if let Some(&c) = coord_of_edge.get(&f.base.idx) {
                        row[c] += sign;
                    }
                }
            }
            if row.iter().any(|&x| x != 0) {
                relations.push(row);
            }
        }
        let relations = hermite_rows(relations, dim);
        Pi1Basis {
            cycle_edges,
            coord_of_edge,
            relations,
        }
    }

    fn coords(&self, p: &PathClass) -> Vec<i64> {
        let mut v = vec![0i64; self.cycle_edges.len()];
        for &(e, fwd) in p.word() {
            if let Some(&c) = self.coord_of_edge.get(&e) {
                v[c] += if fwd { 1 } else { -1 };
            }
        }
        v
    }

    /// Canonical residue of a loop's abelianised class modulo the 2-simplex
    /// relation lattice. A nonzero result certifies a non-trivial class;
    /// zero decides nothing beyond the abelianised quotient.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for row in &self.relations {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            let p = row[pivot];
            let q = v[pivot].div_euclid(p);
            if q != 0 {
                for (a, b) in v.iter_mut().zip(row.iter()) {
                    *a -= q * b;
                }
            }
        }
        v
    }
}

/// Integer row echelon form (Hermite-style): pivots positive, rows sorted by
/// pivot column, entries above pivots reduced.
fn hermite_rows(mut rows: Vec<Vec<i64>>, dim: usize) -> Vec<Vec<i64>> {
    let mut r = 0;
    for c in 0..dim {
        loop {
            let mut best: Option<usize> = None;
            for k in r..rows.len() {
                if rows[k][c] != 0 {
                    best = match best {
                        None => Some(k),
                        Some(b) if rows[k][c].abs() < rows[b][c].abs() => Some(k),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for k in r + 1..rows.len() {
                if rows[k][c] != 0 {
                    let q = rows[k][c] / rows[r][c];
                    for j in 0..dim {
                        rows[k][j] -= q * rows[r][j];
                    }
                    if rows[k][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if rows[r][c] < 0 {
                    for j in 0..dim {
                        rows[r][j] = -rows[r][j];
                    }
                }
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    // reduce entries above each pivot for a canonical form
    for k in (0..rows.len()).rev() {
        let pivot = rows[k].iter().position(|&x| x != 0).unwrap();
        let p = rows[k][pivot];
        for up in 0..k {
            let q = rows[up][pivot].div_euclid(p);
            if q != 0 {
                for j in 0..dim {
                    rows[up][j] -= q * rows[k][j];
                }
            }
        }
    }
    rows
}

/// Abelianised class vector of a loop, reduced modulo the relation lattice of
/// the stored 2-simplexes. Nonzero certifies a non-trivial pi1 class.
pub fn pi1_class(cx: &FiniteComplex, basis: &Pi1Basis, p: &PathClass) -> Result<Vec<i64>, ComplexError> {
    p.check(cx)?;
    if p.end(cx) != p.start() {
        return Err(ComplexError::PathNotClosed {
            start: cx.names[0][p.start()].clone(),
            end: cx.names[0][p.end(cx)].clone(),
        });
    }
    Ok(basis.reduce(&basis.coords(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(cx: &FiniteComplex, name: &str) -> Term {
        Term::nondeg(cx.id_of(name).unwrap())
    }

    #[test]
    fn standard_simplex_counts() {
        let d0 = standard_simplex(0).unwrap();
        assert_eq!(d0.f_vector(), vec![1]);
        let d2 = standard_simplex(2).unwrap();
        assert_eq!(d2.f_vector(), vec![3, 3, 1]);
        // oracle: binomial counts, cross-checked by enumerating injective
        // order maps [k] -> [3]
        let d3 = standard_simplex(3).unwrap();
        let mut by_enum = Vec::new();
        for k in 0..=3usize {
            by_enum.push(k_subsets(&[0, 1, 2, 3], k + 1).len());
        }
        assert_eq!(d3.f_vector(), by_enum);
        assert_eq!(by_enum, vec![4, 6, 4, 1]);
    }

    #[test]
    fn boundary_counts_and_errors() {
        assert!(matches!(boundary_complex(0), Err(ComplexError::EmptyBoundary)));
        let s0 = boundary_complex(1).unwrap();
        assert_eq!(s0.f_vector(), vec![2]);
        let s1 = boundary_complex(2).unwrap();
        assert_eq!(s1.f_vector(), vec![3, 3]);
        let s2 = boundary_complex(3).unwrap();
        assert_eq!(s2.f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn horn_shapes() {
        let h10 = horn_complex(1, 0).unwrap();
        assert_eq!(h10.f_vector(), vec![1]);
        assert_eq!(h10.name(SimplexId { dim: 0, idx: 0 }), "0");
        let h21 = horn_complex(2, 1).unwrap();
        assert_eq!(h21.f_vector(), vec![3, 2]);
        assert!(h21.id_of("01").is_ok());
        assert!(h21.id_of("12").is_ok());
        assert!(h21.id_of("02").is_err());
        let h20 = horn_complex(2, 0).unwrap();
        assert!(h20.id_of("01").is_ok());
        assert!(h20.id_of("02").is_ok());
        assert!(h20.id_of("12").is_err());
        assert!(horn_complex(2, 3).is_err());
    }

    #[test]
    fn degeneracy_normal_form() {
        let d1 = standard_simplex(1).unwrap();
        let e = term(&d1, "01");
        // s0 s0 = s1 s0
        let a = e.degeneracy(0).degeneracy(0);
        let b = e.degeneracy(0).degeneracy(1);
        assert_eq!(a, b);
        assert_eq!(a.degs(), &[1, 0]);
        // faces cancel degeneracies
        let cx = &d1;
        let s0e = e.degeneracy(0);
        assert_eq!(cx.face(&s0e, 0).unwrap(), e);
        assert_eq!(cx.face(&s0e, 1).unwrap(), e);
        let d2s0 = cx.face(&s0e, 2).unwrap();
        assert_eq!(d2s0, term(&d1, "0").degeneracy(0));
    }

    #[test]
    fn vertex_lists() {
        let d2 = standard_simplex(2).unwrap();
        let top = term(&d2, "012");
        assert_eq!(d2.vertex_list(&top).unwrap(), vec![0, 1, 2]);
        let s1 = top.degeneracy(1);
        assert_eq!(d2.vertex_list(&s1).unwrap(), vec![0, 1, 1, 2]);
    }

    #[test]
    fn product_square() {
        let d1 = standard_simplex(1).unwrap();
        let p = product(&d1, &d1, DEFAULT_DIM_BOUND).unwrap();
        // shuffle-product oracle: count jointly nondegenerate pairs per dim
        assert_eq!(p.complex.f_vector(), vec![4, 5, 2]);
        assert!(!p.truncated);
        p.complex.validate().unwrap();
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let pt = standard_simplex(0).unwrap();
        let d2 = standard_simplex(2).unwrap();
        let p = product(&pt, &d2, DEFAULT_DIM_BOUND).unwrap();
        assert_eq!(p.complex.f_vector(), d2.f_vector());
        // right projection restricted to stored simplexes is a bijection
        // commuting with faces
        for d in 0..=2 {
            for id in p.complex.ids(d) {
                let (_, r) = p.projections(id);
                assert!(!r.is_degenerate());
            }
        }
        assert_eq!(pi0(&p.complex).len(), pi0(&d2).len());
    }

    #[test]
    fn product_vertices_are_pairs() {
        let d1 = standard_simplex(1).unwrap();
        let s1 = boundary_complex(2).unwrap();
        let p = product(&d1, &s1, DEFAULT_DIM_BOUND).unwrap();
        assert_eq!(p.complex.count(0), d1.count(0) * s1.count(0));
    }

    #[test]
    fn product_truncation_flag() {
        let d2 = standard_simplex(2).unwrap();
        let p = product(&d2, &d2, 3).unwrap();
        assert!(p.truncated);
    }

    #[test]
    fn join_standard_simplexes() {
        for (i, j) in [(0usize, 0usize), (0, 1), (1, 1), (1, 0), (2, 0)] {
            let x = standard_simplex(i).unwrap();
            let y = standard_simplex(j).unwrap();
            let jn = join(&x, &y, DEFAULT_DIM_BOUND).unwrap();
            jn.validate().unwrap();
            let target = standard_simplex(i + 1 + j).unwrap();
            assert!(
                isomorphic_by_vertex_order(&jn, &target),
                "join of simplexes {i},{j} should be the standard {}-simplex",
                i + 1 + j
            );
        }
    }

    #[test]
    fn join_rejects_budget_overflow() {
        let d2 = standard_simplex(2).unwrap();
        assert!(matches!(
            join(&d2, &d2, 3),
            Err(ComplexError::DimBound { dim: 5, bound: 3 })
        ));
    }

    #[test]
    fn join_with_empty_is_identity() {
        let s1 = boundary_complex(2).unwrap();
        let e = FiniteComplex::empty(DEFAULT_DIM_BOUND);
        let jn = join(&s1, &e, DEFAULT_DIM_BOUND).unwrap();
        assert!(isomorphic_by_vertex_order(&jn, &s1));
        let jn2 = join(&e, &s1, DEFAULT_DIM_BOUND).unwrap();
        assert!(isomorphic_by_vertex_order(&jn2, &s1));
    }

    #[test]
    fn cone_on_outer_horn_is_square_sized() {
        let h = horn_complex(2, 0).unwrap();
        let pt = standard_simplex(0).unwrap();
        let cone = join(&h, &pt, DEFAULT_DIM_BOUND).unwrap();
        assert_eq!(cone.count(0), 4);
    }

    #[test]
    fn join_handles_degenerate_stored_faces() {
        // a collapsed triangle: one vertex, a loop edge, and a 2-cell with a
        // degenerate face
        let mut b = ComplexBuilder::new(2);
        b.vertex("v").unwrap();
        let v = Term::nondeg(b.lookup("v").unwrap());
        b.simplex("e", vec![v.clone(), v.clone()]).unwrap();
        let e = Term::nondeg(b.lookup("e").unwrap());
        b.simplex("t", vec![e.clone(), e.clone(), v.degeneracy(0)])
            .unwrap();
        let collapsed = b.build().unwrap();
        let pt = standard_simplex(0).unwrap();
        let cone = join(&collapsed, &pt, DEFAULT_DIM_BOUND).unwrap();
        cone.validate().unwrap();
        assert_eq!(cone.f_vector(), vec![2, 2, 2, 1]);
        let dual = join(&pt, &collapsed, DEFAULT_DIM_BOUND).unwrap();
        dual.validate().unwrap();
        assert_eq!(dual.f_vector(), vec![2, 2, 2, 1]);
    }

    #[test]
    fn filler_in_standard_simplex() {
        let d2 = standard_simplex(2).unwrap();
        let inst = HornInstance::new(
            &d2,
            2,
            1,
            BTreeMap::from([(0, term(&d2, "12")), (2, term(&d2, "01"))]),
        )
        .unwrap();
        let f = find_filler(&d2, &inst).unwrap();
        assert_eq!(f, term(&d2, "012"));
        assert!(is_filler(&d2, &inst, &f));
    }

    #[test]
    fn no_filler_in_boundary() {
        // oracle for the kan_check witness: exhaustive search over the
        // boundary of the 2-simplex finds no cell
        let s1 = boundary_complex(2).unwrap();
        let inst = HornInstance::new(
            &s1,
            2,
            1,
            BTreeMap::from([(0, term(&s1, "12")), (2, term(&s1, "01"))]),
        )
        .unwrap();
        assert!(find_filler(&s1, &inst).is_none());
    }

    #[test]
    fn degenerate_edge_fills_one_horns() {
        // with no stored edges at all, only the degenerate edge can fill
        let s0 = boundary_complex(1).unwrap();
        for i in 0..=1usize {
            let inst = HornInstance::new(
                &s0,
                1,
                i,
                BTreeMap::from([(1 - i, term(&s0, "0"))]),
            )
            .unwrap();
            let f = find_filler(&s0, &inst).unwrap();
            assert!(f.is_degenerate());
            assert!(is_filler(&s0, &inst, &f));
        }
        // in a complex with edges any filler is accepted, sound either way
        let s1 = boundary_complex(2).unwrap();
        let inst = HornInstance::new(&s1, 1, 0, BTreeMap::from([(1, term(&s1, "0"))])).unwrap();
        let f = find_filler(&s1, &inst).unwrap();
        assert!(is_filler(&s1, &inst, &f));
    }

    #[test]
    fn kan_check_verdicts() {
        let cap = DEFAULT_INSTANCE_CAP;
        let d0 = standard_simplex(0).unwrap();
        assert!(kan_check(&d0, 2, cap).unwrap().pass);
        for n in 1..=3usize {
            let dn = standard_simplex(n).unwrap();
            let r = kan_check(&dn, 2, cap).unwrap();
            assert!(r.pass, "standard {n}-simplex at horn dimension <= 2");
        }
        let s1 = boundary_complex(2).unwrap();
        let r = kan_check(&s1, 2, cap).unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!((w.n, w.i), (2, 1));
    }

    #[test]
    fn kan_check_cap() {
        let d3 = standard_simplex(3).unwrap();
        assert!(matches!(
            kan_check(&d3, 3, 10),
            Err(ComplexError::InstanceCap { .. })
        ));
    }

    #[test]
    fn pi0_counts() {
        let s0 = boundary_complex(1).unwrap();
        assert_eq!(pi0(&s0).len(), 2);
        let s1 = boundary_complex(2).unwrap();
        assert_eq!(pi0(&s1).len(), 1);
    }

    #[test]
    fn pi0_of_product_multiplies() {
        let s0 = boundary_complex(1).unwrap();
        let s1 = boundary_complex(2).unwrap();
        let p = product(&s0, &s1, DEFAULT_DIM_BOUND).unwrap();
        assert_eq!(pi0(&p.complex).len(), pi0(&s0).len() * pi0(&s1).len());
    }

    #[test]
    fn pi1_generator_of_circle() {
        let s1 = boundary_complex(2).unwrap();
        let basis = Pi1Basis::new(&s1);
        let e01 = s1.id_of("01").unwrap().idx;
        let e02 = s1.id_of("02").unwrap().idx;
        let e12 = s1.id_of("12").unwrap().idx;
        let generator =
            PathClass::new(&s1, 0, vec![(e01, true), (e12, true), (e02, false)]).unwrap();
        assert_eq!(pi1_class(&s1, &basis, &generator).unwrap(), vec![1]);
        let constant = PathClass::trivial(0);
        assert_eq!(pi1_class(&s1, &basis, &constant).unwrap(), vec![0]);
    }

    #[test]
    fn pi1_dies_on_filled_sphere() {
        // the hollow tetrahedron has trivial pi1: its 2-cells relate every
        // cycle away
        let s2 = boundary_complex(3).unwrap();
        let basis = Pi1Basis::new(&s2);
        let e01 = s2.id_of("01").unwrap().idx;
        let e12 = s2.id_of("12").unwrap().idx;
        let e02 = s2.id_of("02").unwrap().idx;
        let lp = PathClass::new(&s2, 0, vec![(e01, true), (e12, true), (e02, false)]).unwrap();
        let v = pi1_class(&s2, &basis, &lp).unwrap();
        assert!(v.iter().all(|&x| x == 0));
    }

    #[test]
    fn pi1_rejects_open_words() {
        let s1 = boundary_complex(2).unwrap();
        let basis = Pi1Basis::new(&s1);
        let e01 = s1.id_of("01").unwrap().idx;
        let p = PathClass::new(&s1, 0, vec![(e01, true)]).unwrap();
        assert!(matches!(
            pi1_class(&s1, &basis, &p),
            Err(ComplexError::PathNotClosed { .. })
        ));
        assert!(PathClass::new(&s1, 1, vec![(e01, true)]).is_err());
    }

    #[test]
    fn validation_catches_bad_faces() {
        let d1 = standard_simplex(1).unwrap();
        let mut b = ComplexBuilder::new(2);
        b.vertex("a").unwrap();
        b.vertex("b").unwrap();
        b.vertex("c").unwrap();
        let ab = b.lookup("a").unwrap();
        let _ = ab;
        let ea = Term::nondeg(b.lookup("a").unwrap());
        let eb = Term::nondeg(b.lookup("b").unwrap());
        let ec = Term::nondeg(b.lookup("c").unwrap());
        b.simplex("ab", vec![eb.clone(), ea.clone()]).unwrap();
        b.simplex("bc", vec![ec.clone(), eb.clone()]).unwrap();
        b.simplex("ac", vec![ec.clone(), ea.clone()]).unwrap();
        // deliberately inconsistent triangle: face 0 should be bc
        let t_ab = Term::nondeg(b.lookup("ab").unwrap());
        let t_ac = Term::nondeg(b.lookup("ac").unwrap());
        b.simplex("bad", vec![t_ab.clone(), t_ac, t_ab]).unwrap();
        assert!(matches!(b.build(), Err(ComplexError::Identity { .. })));
        let _ = d1;
    }
}
