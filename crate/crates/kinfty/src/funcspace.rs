//! Continuous function spaces represented by step-function bases.
//!
//! The canonical representation of a function-space element is a finite join
//! of steps `a => b`: the function sending `x` to `b` when `a` is below `x`
//! and to bottom otherwise. Full tables exist only as brute-force oracles.
//!
//! The operations are generic over a small [`Domain`] trait so the same code
//! drives both concrete weak domains and the levels of the reflexive tower,
//! where elements of one level are themselves step bases over the level
//! below. Domain and codomain share an element type; they may differ in
//! order structure.

use crate::hpo::WeakDomain;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FuncError {
    #[error("supremum failed: {0}")]
    Sup(String),
    #[error("inconsistent step basis at input `{input}`: outputs {outputs:?} are unbounded")]
    Inconsistent { input: String, outputs: Vec<String> },
    #[error("table is not monotone: `{x}` <= `{y}` but images are unrelated")]
    NotMonotone { x: String, y: String },
    #[error("functor family is not directed (no internal bound for members {0} and {1})")]
    NotDirected(usize, usize),
    #[error("vertex index {0} out of range")]
    VertexRange(usize),
    #[error("table is not total: missing entry for `{0}`")]
    MissingEntry(String),
    #[error("slice at `{0}` is not monotone")]
    BadSlice(String),
    #[error("domain too large for exhaustive search ({0} elements)")]
    TooLarge(usize),
}

/// The order-and-sup interface the step machinery needs. Implementations are
/// expected to be pointed; `bottom` on an unpointed carrier is a caller bug.
pub trait Domain {
    type Elem: Clone + Ord + std::fmt::Debug;
    fn bottom(&self) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn equiv(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }
    /// Least upper bound of a finite set; empty set gives bottom.
    fn sup(&self, xs: &[Self::Elem]) -> Result<Self::Elem, FuncError>;
    /// Canonical representative of the equivalence class.
    fn canonical(&self, x: &Self::Elem) -> Self::Elem;
    fn render(&self, x: &Self::Elem) -> String;
}

/// A domain whose elements can be exhaustively listed.
pub trait FiniteDomain: Domain {
    fn elements(&self) -> Vec<Self::Elem>;
}

impl Domain for WeakDomain {
    type Elem = usize;

    fn bottom(&self) -> usize {
        WeakDomain::bottom(self).expect("function-space operations need a pointed domain")
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        WeakDomain::leq(self, *a, *b)
    }

    fn sup(&self, xs: &[usize]) -> Result<usize, FuncError> {
        if xs.is_empty() {
            return Ok(Domain::bottom(self));
        }
        let set = xs.iter().copied().collect();
        WeakDomain::sup(self, &set).map_err(|e| FuncError::Sup(e.to_string()))
    }

    fn canonical(&self, x: &usize) -> usize {
        WeakDomain::canonical(self, *x)
    }

    fn render(&self, x: &usize) -> String {
        self.vertex_name(*x).to_string()
    }
}

impl FiniteDomain for WeakDomain {
    fn elements(&self) -> Vec<usize> {
        (0..self.vertex_count()).collect()
    }
}

/// A finite join of steps, kept sorted and in normal form by the constructors
/// in this module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepFunctor<E: Ord> {
    pairs: Vec<(E, E)>,
}

impl<E: Ord + Clone> StepFunctor<E> {
    pub fn empty() -> StepFunctor<E> {
        StepFunctor { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(E, E)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The single-step functor `a => b` over a weak domain pair, with carrier
/// bounds checked.
pub fn step_on(
    dom: &WeakDomain,
    cod: &WeakDomain,
    a: usize,
    b: usize,
) -> Result<StepFunctor<usize>, FuncError> {
    if a >= dom.vertex_count() {
        return Err(FuncError::VertexRange(a));
    }
    if b >= cod.vertex_count() {
        return Err(FuncError::VertexRange(b));
    }
    make_steps(dom, cod, vec![(a, b)])
}

/// The single-step functor `a => b`, normalised (drops the pair when `b` is
/// bottom).
pub fn single_step<D, C>(
    dom: &D,
    cod: &C,
    a: &D::Elem,
    b: &D::Elem,
) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    make_steps(dom, cod, vec![(a.clone(), b.clone())])
}

/// Sup of the outputs fired at `x`.
pub fn apply<D, C>(
    dom: &D,
    cod: &C,
    f: &StepFunctor<D::Elem>,
    x: &D::Elem,
) -> Result<D::Elem, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    let fired: Vec<D::Elem> = f
        .pairs
        .iter()
        .filter(|(a, _)| dom.leq(a, x))
        .map(|(_, b)| b.clone())
        .collect();
    match cod.sup(&fired) {
        Ok(v) => Ok(cod.canonical(&v)),
        Err(_) => Err(FuncError::Inconsistent {
            input: dom.render(x),
            outputs: fired.iter().map(|b| cod.render(b)).collect(),
        }),
    }
}

/// Checks that every reachable fired set has a bounded output family. Fired
/// sets are probed at the sup of every bounded guard subset, which covers all
/// of them on a bounded-complete domain.
pub fn consistent<D, C>(dom: &D, cod: &C, pairs: &[(D::Elem, D::Elem)]) -> Result<(), FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    let k = pairs.len();
    if k > 16 {
        return Err(FuncError::TooLarge(k));
    }
    for mask in 1u32..(1 << k) {
        let guards: Vec<D::Elem> = (0..k)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| pairs[i].0.clone())
            .collect();
        let Ok(u) = dom.sup(&guards) else { continue };
        let fired: Vec<D::Elem> = pairs
            .iter()
            .filter(|(a, _)| dom.leq(a, &u))
            .map(|(_, b)| b.clone())
            .collect();
        if cod.sup(&fired).is_err() {
            return Err(FuncError::Inconsistent {
                input: dom.render(&u),
                outputs: fired.iter().map(|b| cod.render(b)).collect(),
            });
        }
    }
    Ok(())
}

/// Builds the normal form of a step basis: components canonicalised,
/// equivalent guards merged by output sup, redundant pairs pruned in
/// lexicographic order.
pub fn make_steps<D, C>(
    dom: &D,
    cod: &C,
    pairs: Vec<(D::Elem, D::Elem)>,
) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    consistent(dom, cod, &pairs)?;
    let mut grouped: Vec<(D::Elem, Vec<D::Elem>)> = Vec::new();
    'outer: for (a, b) in pairs {
        let a = dom.canonical(&a);
        let b = cod.canonical(&b);
        for (g, outs) in grouped.iter_mut() {
            if dom.equiv(g, &a) {
                outs.push(b);
                continue 'outer;
            }
        }
        grouped.push((a, vec![b]));
    }
    let mut merged: Vec<(D::Elem, D::Elem)> = Vec::new();
    for (g, outs) in grouped {
        let s = cod.sup(&outs).map_err(|_| FuncError::Inconsistent {
            input: dom.render(&g),
            outputs: outs.iter().map(|b| cod.render(b)).collect(),
        })?;
        merged.push((g, cod.canonical(&s)));
    }
    merged.sort();
    loop {
        let mut removed = None;
        for i in 0..merged.len() {
            let rest = StepFunctor {
                pairs: merged
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect(),
            };
            let (a, b) = &merged[i];
            if cod.leq(b, &apply(dom, cod, &rest, a)?) {
                removed = Some(i);
                break;
            }
        }
        match removed {
            Some(i) => {
                merged.remove(i);
            }
            None => break,
        }
    }
    Ok(StepFunctor { pairs: merged })
}

/// Pointwise order on step bases: every step of `f` is honoured by `g`.
pub fn pointwise_leq<D, C>(
    dom: &D,
    cod: &C,
    f: &StepFunctor<D::Elem>,
    g: &StepFunctor<D::Elem>,
) -> Result<bool, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    for (a, b) in &f.pairs {
        if !cod.leq(b, &apply(dom, cod, g, a)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn fn_equiv<D, C>(
    dom: &D,
    cod: &C,
    f: &StepFunctor<D::Elem>,
    g: &StepFunctor<D::Elem>,
) -> Result<bool, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    Ok(pointwise_leq(dom, cod, f, g)? && pointwise_leq(dom, cod, g, f)?)
}

/// Join of two bases: union of pairs, renormalised; the induced function is
/// the pointwise sup. Rejects inconsistent unions with the clashing input.
pub fn join_steps<D, C>(
    dom: &D,
    cod: &C,
    f: &StepFunctor<D::Elem>,
    g: &StepFunctor<D::Elem>,
) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    let mut pairs = f.pairs.clone();
    pairs.extend(g.pairs.iter().cloned());
    make_steps(dom, cod, pairs)
}

/// Sup of a family directed under the pointwise order.
pub fn sup_directed_functors<D, C>(
    dom: &D,
    cod: &C,
    fs: &[StepFunctor<D::Elem>],
) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    for i in 0..fs.len() {
        for j in 0..fs.len() {
            let bounded = fs.iter().any(|h| {
                matches!(pointwise_leq(dom, cod, &fs[i], h), Ok(true))
                    && matches!(pointwise_leq(dom, cod, &fs[j], h), Ok(true))
            });
            if !bounded {
                return Err(FuncError::NotDirected(i, j));
            }
        }
    }
    let mut acc = StepFunctor::empty();
    for f in fs {
        acc = join_steps(dom, cod, &acc, f)?;
    }
    Ok(acc)
}

/// The canonical order-witness a step basis induces between the images of a
/// related pair. Step functors create no homotopy content: the witness is
/// degenerate when the images coincide.
pub fn edge_action<D, C>(
    dom: &D,
    cod: &C,
    f: &StepFunctor<D::Elem>,
    x: &D::Elem,
    y: &D::Elem,
) -> Result<(D::Elem, D::Elem), FuncError>
where
    D: Domain,
    C: Domain<Elem = D::Elem>,
{
    debug_assert!(dom.leq(x, y));
    Ok((apply(dom, cod, f, x)?, apply(dom, cod, f, y)?))
}

/// An explicit, total map on a finite domain. Used as the brute-force oracle
/// against the step representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable<E: Ord> {
    entries: BTreeMap<E, E>,
}

impl<E: Ord + Clone> FunctionTable<E> {
    pub fn new(entries: BTreeMap<E, E>) -> FunctionTable<E> {
        FunctionTable { entries }
    }

    pub fn get(&self, x: &E) -> Option<&E> {
        self.entries.get(x)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&E, &E)> {
        self.entries.iter()
    }
}

/// Tabulates a closure over the whole domain.
pub fn table_of<D>(dom: &D, f: impl Fn(&D::Elem) -> D::Elem) -> FunctionTable<D::Elem>
where
    D: FiniteDomain,
{
    let entries = dom
        .elements()
        .into_iter()
        .map(|e| {
            let v = f(&e);
            (e, v)
        })
        .collect();
    FunctionTable { entries }
}

/// Monotonicity of a table whose codomain may carry a different order.
pub fn check_monotone_into<D, C>(
    dom: &D,
    cod: &C,
    t: &FunctionTable<D::Elem>,
) -> Result<(), FuncError>
where
    D: FiniteDomain,
    C: Domain<Elem = D::Elem>,
{
    let elems = dom.elements();
    for x in &elems {
        let fx = t
            .get(x)
            .ok_or_else(|| FuncError::MissingEntry(dom.render(x)))?;
        for y in &elems {
            if dom.leq(x, y) {
                let fy = t
                    .get(y)
                    .ok_or_else(|| FuncError::MissingEntry(dom.render(y)))?;
                if !cod.leq(fx, fy) {
                    return Err(FuncError::NotMonotone {
                        x: dom.render(x),
                        y: dom.render(y),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn check_monotone<D>(dom: &D, t: &FunctionTable<D::Elem>) -> Result<(), FuncError>
where
    D: FiniteDomain,
{
    check_monotone_into(dom, dom, t)
}

/// Step normal form of a monotone table over a domain/codomain pair.
pub fn to_steps_into<D, C>(
    dom: &D,
    cod: &C,
    t: &FunctionTable<D::Elem>,
) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: FiniteDomain,
    C: Domain<Elem = D::Elem>,
{
    check_monotone_into(dom, cod, t)?;
    let pairs = t
        .entries
        .iter()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    make_steps(dom, cod, pairs)
}

/// Step normal form of a monotone endo-table: one step per element, pruned.
/// On a finite domain every element is compact, so this is exact.
pub fn to_steps<D>(dom: &D, t: &FunctionTable<D::Elem>) -> Result<StepFunctor<D::Elem>, FuncError>
where
    D: FiniteDomain,
{
    to_steps_into(dom, dom, t)
}

/// Tabulates a step basis back into an explicit table.
pub fn tabulate<D>(dom: &D, f: &StepFunctor<D::Elem>) -> Result<FunctionTable<D::Elem>, FuncError>
where
    D: FiniteDomain,
{
    let mut entries = BTreeMap::new();
    for e in dom.elements() {
        let v = apply(dom, dom, f, &e)?;
        entries.insert(e, v);
    }
    Ok(FunctionTable { entries })
}

/// Brute-force continuity: sup preservation over every directed subset.
pub fn continuity_oracle<D>(dom: &D, t: &FunctionTable<D::Elem>) -> Result<bool, FuncError>
where
    D: FiniteDomain,
{
    let elems = dom.elements();
    let n = elems.len();
    if n > 16 {
        return Err(FuncError::TooLarge(n));
    }
    for mask in 1u32..(1 << n) {
        let xs: Vec<D::Elem> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| elems[i].clone())
            .collect();
        let directed = xs.iter().all(|x| {
            xs.iter()
                .all(|y| xs.iter().any(|z| dom.leq(x, z) && dom.leq(y, z)))
        });
        if !directed {
            continue;
        }
        let Ok(s) = dom.sup(&xs) else { continue };
        let fs = match t.get(&s) {
            Some(v) => v.clone(),
            None => return Err(FuncError::MissingEntry(dom.render(&s))),
        };
        let images: Vec<D::Elem> = xs
            .iter()
            .map(|x| {
                t.get(x)
                    .cloned()
                    .ok_or_else(|| FuncError::MissingEntry(dom.render(x)))
            })
            .collect::<Result<_, _>>()?;
        let Ok(si) = dom.sup(&images) else {
            return Ok(false);
        };
        if !dom.equiv(&fs, &si) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Currying of a table over a product domain: for each left vertex the slice
/// over the right factor is tabulated and converted to step normal form.
/// Rejects non-monotone slices with the offending left vertex.
pub fn curry(
    prod: &crate::hpo::ProductDomain,
    left: &WeakDomain,
    right: &WeakDomain,
    cod: &WeakDomain,
    t: &FunctionTable<usize>,
) -> Result<BTreeMap<usize, StepFunctor<usize>>, FuncError> {
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (v, &(x, y)) in prod.pairs.iter().enumerate() {
        index.insert((x, y), v);
    }
    let mut out = BTreeMap::new();
    for x in 0..left.vertex_count() {
        let mut entries = BTreeMap::new();
        for y in 0..right.vertex_count() {
            let v = index[&(x, y)];
            let img = t
                .get(&v)
                .ok_or_else(|| FuncError::MissingEntry(prod.domain.vertex_name(v).to_string()))?;
            entries.insert(y, *img);
        }
        let slice = FunctionTable { entries };
        let steps = to_steps_into(right, cod, &slice)
            .map_err(|_| FuncError::BadSlice(left.vertex_name(x).to_string()))?;
        out.insert(x, steps);
    }
    Ok(out)
}

/// Reproduces the uncurried table from a curried family.
pub fn uncurry(
    prod: &crate::hpo::ProductDomain,
    right: &WeakDomain,
    cod: &WeakDomain,
    curried: &BTreeMap<usize, StepFunctor<usize>>,
) -> Result<FunctionTable<usize>, FuncError> {
    let mut entries = BTreeMap::new();
    for (v, &(x, y)) in prod.pairs.iter().enumerate() {
        let f = &curried[&x];
        let img = apply(right, cod, f, &y)?;
        entries.insert(v, img);
    }
    Ok(FunctionTable { entries })
}

/// Enumerates every monotone endo-table of a finite pointed domain.
pub fn monotone_tables(dom: &WeakDomain) -> Vec<FunctionTable<usize>> {
    let n = dom.vertex_count();
    let mut out = Vec::new();
    let mut img: Vec<usize> = Vec::with_capacity(n);
    fn rec(dom: &WeakDomain, n: usize, img: &mut Vec<usize>, out: &mut Vec<FunctionTable<usize>>) {
        if img.len() == n {
            out.push(FunctionTable {
                entries: img.iter().copied().enumerate().collect(),
            });
            return;
        }
        let v = img.len();
        'cand: for c in 0..n {
            for (w, &iw) in img.iter().enumerate() {
                if WeakDomain::leq(dom, w, v) && !WeakDomain::leq(dom, iw, c) {
                    continue 'cand;
                }
                if WeakDomain::leq(dom, v, w) && !WeakDomain::leq(dom, c, iw) {
                    continue 'cand;
                }
            }
            img.push(c);
            rec(dom, n, img, out);
            img.pop();
        }
    }
    rec(dom, n, &mut img, &mut out);
    out
}

/// Materialises `[K -> K]` as a weak domain: one vertex per monotone map,
/// pointwise order, bottom at the empty basis. Desk scale only.
pub fn function_domain(
    dom: &WeakDomain,
) -> Result<(WeakDomain, Vec<StepFunctor<usize>>), FuncError> {
    let tables = monotone_tables(dom);
    let mut uniq: Vec<StepFunctor<usize>> = Vec::new();
    for t in &tables {
        let s = to_steps(dom, t)?;
        if !uniq.contains(&s) {
            uniq.push(s);
        }
    }
    uniq.sort();
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    for (i, s) in uniq.iter().enumerate() {
        let label: Vec<String> = s
            .pairs()
            .iter()
            .map(|(a, c)| format!("{}=>{}", dom.vertex_name(*a), dom.vertex_name(*c)))
            .collect();
        let name = if label.is_empty() {
            format!("f{i}.const_bot")
        } else {
            format!("f{i}.{}", label.join("."))
        };
        b.vertex(&name).map_err(|e| FuncError::Sup(e.to_string()))?;
    }
    let carrier = b.build().map_err(|e| FuncError::Sup(e.to_string()))?;
    let mut gens = Vec::new();
    let mut bottom = None;
    for (i, f) in uniq.iter().enumerate() {
        if f.is_empty() {
            bottom = Some(i);
        }
        for (j, g) in uniq.iter().enumerate() {
            if i != j && pointwise_leq(dom, dom, f, g)? {
                gens.push((i, j));
            }
        }
    }
    let domain =
        WeakDomain::new(carrier, &gens, bottom).map_err(|e| FuncError::Sup(e.to_string()))?;
    Ok((domain, uniq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpo::{build_n_plus, chain, product_domain};

    fn nplus1() -> WeakDomain {
        build_n_plus(1).unwrap()
    }

    #[test]
    fn single_steps() {
        let d = nplus1();
        let bot = Domain::bottom(&d);
        let a = d.vertex("s1_0").unwrap();
        let b = d.vertex("s1_1").unwrap();
        let f = step_on(&d, &d, bot, b).unwrap();
        for x in 0..d.vertex_count() {
            assert_eq!(apply(&d, &d, &f, &x).unwrap(), b);
        }
        let g = step_on(&d, &d, a, b).unwrap();
        assert_eq!(apply(&d, &d, &g, &bot).unwrap(), bot);
        assert_eq!(apply(&d, &d, &g, &a).unwrap(), b);
        let empty: StepFunctor<usize> = StepFunctor::empty();
        assert_eq!(apply(&d, &d, &empty, &a).unwrap(), bot);
        assert!(step_on(&d, &d, 99, b).is_err());
    }

    #[test]
    fn join_behaviour() {
        let c = chain(3).unwrap();
        let f = step_on(&c, &c, 1, 1).unwrap();
        let g = step_on(&c, &c, 1, 2).unwrap();
        let j = join_steps(&c, &c, &f, &g).unwrap();
        // tabulation oracle: fired outputs {1,2} collapse to the sup 2
        assert_eq!(apply(&c, &c, &j, &1).unwrap(), 2);
        assert_eq!(apply(&c, &c, &j, &0).unwrap(), 0);
        let jj = join_steps(&c, &c, &f, &f).unwrap();
        assert_eq!(jj, f);
        let e = join_steps(&c, &c, &f, &StepFunctor::empty()).unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn join_rejects_unbounded_union() {
        let d = nplus1();
        let bot = Domain::bottom(&d);
        let a = d.vertex("s1_0").unwrap();
        let b = d.vertex("s1_1").unwrap();
        let f = step_on(&d, &d, bot, a).unwrap();
        let g = step_on(&d, &d, bot, b).unwrap();
        assert!(matches!(
            join_steps(&d, &d, &f, &g),
            Err(FuncError::Inconsistent { .. })
        ));
    }

    #[test]
    fn pointwise_order() {
        let c = chain(3).unwrap();
        let f = step_on(&c, &c, 1, 1).unwrap();
        let g = step_on(&c, &c, 1, 2).unwrap();
        let empty: StepFunctor<usize> = StepFunctor::empty();
        assert!(pointwise_leq(&c, &c, &empty, &f).unwrap());
        assert!(pointwise_leq(&c, &c, &f, &g).unwrap());
        assert!(!pointwise_leq(&c, &c, &g, &f).unwrap());
        let j = join_steps(&c, &c, &f, &g).unwrap();
        assert!(pointwise_leq(&c, &c, &f, &j).unwrap());
        // weaker guard fires more often
        let s_tight = step_on(&c, &c, 2, 1).unwrap();
        let s_loose = step_on(&c, &c, 1, 1).unwrap();
        assert!(pointwise_leq(&c, &c, &s_tight, &s_loose).unwrap());
    }

    #[test]
    fn directed_sup_of_functors() {
        let c = chain(3).unwrap();
        let f = step_on(&c, &c, 1, 1).unwrap();
        let g = step_on(&c, &c, 1, 2).unwrap();
        assert_eq!(sup_directed_functors(&c, &c, std::slice::from_ref(&f)).unwrap(), f);
        let s = sup_directed_functors(&c, &c, &[f.clone(), g.clone()]).unwrap();
        assert_eq!(s, g);
        for x in 0..c.vertex_count() {
            let lhs = apply(&c, &c, &s, &x).unwrap();
            let rhs = Domain::sup(
                &c,
                &[
                    apply(&c, &c, &f, &x).unwrap(),
                    apply(&c, &c, &g, &x).unwrap(),
                ],
            )
            .unwrap();
            assert!(Domain::equiv(&c, &lhs, &rhs));
        }
        let d = nplus1();
        let bot = Domain::bottom(&d);
        let a = d.vertex("s1_0").unwrap();
        let b = d.vertex("s1_1").unwrap();
        let fa = step_on(&d, &d, bot, a).unwrap();
        let fb = step_on(&d, &d, bot, b).unwrap();
        assert!(matches!(
            sup_directed_functors(&d, &d, &[fa, fb]),
            Err(FuncError::NotDirected(..))
        ));
    }

    #[test]
    fn to_steps_normal_forms() {
        let c = chain(3).unwrap();
        let id = table_of(&c, |x| *x);
        let s = to_steps(&c, &id).unwrap();
        assert_eq!(s.pairs(), &[(1, 1), (2, 2)]);
        let const2 = table_of(&c, |_| 2usize);
        let s2 = to_steps(&c, &const2).unwrap();
        assert_eq!(s2.pairs(), &[(0, 2)]);
        // normal-form fixpoint
        let d = nplus1();
        let a = d.vertex("s1_0").unwrap();
        let b = d.vertex("s1_1").unwrap();
        let g = step_on(&d, &d, a, b).unwrap();
        let tg = tabulate(&d, &g).unwrap();
        assert_eq!(to_steps(&d, &tg).unwrap(), g);
    }

    #[test]
    fn oracle_equivalence_on_small_domains() {
        let c = chain(3).unwrap();
        for t in monotone_tables(&c) {
            let s = to_steps(&c, &t).unwrap();
            for x in 0..c.vertex_count() {
                assert!(Domain::equiv(
                    &c,
                    &apply(&c, &c, &s, &x).unwrap(),
                    t.get(&x).unwrap()
                ));
            }
            assert!(continuity_oracle(&c, &t).unwrap());
        }
    }

    #[test]
    fn non_monotone_rejected() {
        let c = chain(2).unwrap();
        let t = FunctionTable::new(BTreeMap::from([(0usize, 1usize), (1, 0)]));
        assert!(matches!(
            check_monotone(&c, &t),
            Err(FuncError::NotMonotone { .. })
        ));
        assert!(!continuity_oracle(&c, &t).unwrap());
    }

    #[test]
    fn composition_stays_continuous() {
        let c = chain(3).unwrap();
        let f = table_of(&c, |x| (*x).min(1));
        let g = table_of(&c, |x| if *x == 0 { 0 } else { 2 });
        let comp = table_of(&c, |x| *g.get(f.get(x).unwrap()).unwrap());
        assert!(continuity_oracle(&c, &comp).unwrap());
    }

    #[test]
    fn apply_is_continuous_in_each_argument() {
        // for a directed family F and fixed x: (sup F)(x) = sup of the f(x)
        let c = chain(3).unwrap();
        let fam = [
            StepFunctor::empty(),
            step_on(&c, &c, 1, 1).unwrap(),
            step_on(&c, &c, 1, 2).unwrap(),
        ];
        let s = sup_directed_functors(&c, &c, &fam).unwrap();
        for x in 0..c.vertex_count() {
            let pointwise: Vec<usize> = fam
                .iter()
                .map(|f| apply(&c, &c, f, &x).unwrap())
                .collect();
            let rhs = Domain::sup(&c, &pointwise).unwrap();
            assert!(Domain::equiv(&c, &apply(&c, &c, &s, &x).unwrap(), &rhs));
        }
    }

    #[test]
    fn curry_round_trip() {
        let c = chain(2).unwrap();
        let p = product_domain(&c, &c).unwrap();
        // second projection: slices are the identity
        let proj2 = FunctionTable::new(
            (0..p.domain.vertex_count())
                .map(|v| (v, p.pairs[v].1))
                .collect(),
        );
        let curried = curry(&p, &c, &c, &c, &proj2).unwrap();
        let id = to_steps(&c, &table_of(&c, |x| *x)).unwrap();
        for s in curried.values() {
            assert_eq!(s, &id);
        }
        // constant bottom: slices are empty bases
        let cbot = FunctionTable::new(
            (0..p.domain.vertex_count()).map(|v| (v, 0usize)).collect(),
        );
        let curried_bot = curry(&p, &c, &c, &c, &cbot).unwrap();
        for s in curried_bot.values() {
            assert!(s.is_empty());
        }
        // meet map: curry then uncurry reproduces the table
        let meet = FunctionTable::new(
            (0..p.domain.vertex_count())
                .map(|v| {
                    let (x, y) = p.pairs[v];
                    (v, x.min(y))
                })
                .collect(),
        );
        let curried_meet = curry(&p, &c, &c, &c, &meet).unwrap();
        let back = uncurry(&p, &c, &c, &curried_meet).unwrap();
        for v in 0..p.domain.vertex_count() {
            assert!(Domain::equiv(&c, back.get(&v).unwrap(), meet.get(&v).unwrap()));
        }
    }

    #[test]
    fn curry_rejects_non_monotone_slice() {
        let c = chain(2).unwrap();
        let p = product_domain(&c, &c).unwrap();
        let bad = FunctionTable::new(
            (0..p.domain.vertex_count())
                .map(|v| {
                    let (_, y) = p.pairs[v];
                    (v, 1 - y)
                })
                .collect(),
        );
        assert!(matches!(
            curry(&p, &c, &c, &c, &bad),
            Err(FuncError::BadSlice(_))
        ));
    }

    #[test]
    fn function_domain_materialises() {
        let c = chain(3).unwrap();
        let (fd, elems) = function_domain(&c).unwrap();
        // order-preserving maps of a 3-chain into itself
        assert_eq!(elems.len(), 10);
        assert!(fd.bottom().is_some());
        assert!(fd.is_algebraic().unwrap().pass);
        assert!(fd.is_bounded_complete().unwrap().pass);
    }

    #[test]
    fn every_step_basis_passes_the_continuity_oracle() {
        let c = chain(3).unwrap();
        let steps = [
            StepFunctor::empty(),
            step_on(&c, &c, 1, 2).unwrap(),
            join_steps(
                &c,
                &c,
                &step_on(&c, &c, 1, 1).unwrap(),
                &step_on(&c, &c, 2, 2).unwrap(),
            )
            .unwrap(),
        ];
        for s in &steps {
            let t = tabulate(&c, s).unwrap();
            assert!(continuity_oracle(&c, &t).unwrap());
        }
    }

    #[test]
    fn edge_action_is_degenerate_on_constant_steps() {
        let c = chain(3).unwrap();
        let f = step_on(&c, &c, 0, 2).unwrap();
        let (u, v) = edge_action(&c, &c, &f, &0, &1).unwrap();
        assert_eq!(u, v);
    }
}
