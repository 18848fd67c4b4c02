//! Weakly ordered complexes: finite stand-ins for homotopy partial orders.
//!
//! A [`WeakDomain`] pairs a carrier [`FiniteComplex`] with a preorder on its
//! vertices. The order is the decidable shadow of "hom-space nonempty": one
//! bit per vertex pair, each related pair carrying a single witness. Element
//! equality is always mutual relatedness, and operations return the
//! lexicographically least name in the class so results are reproducible.
//!
//! The carrier keeps its own homotopy content (sphere edges, 2-cells); the
//! order does not look at it. In particular the pointed sphere union built by
//! [`build_n_plus`] is flat above bottom even though its carrier is not
//! simply connected.

use crate::simplicial::{
    boundary_complex, disjoint_union, product, ComplexError, FiniteComplex, Product,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexRange(usize),
    #[error("order relates `{x}` <= `{y}` but transitivity closure failed")]
    Closure { x: String, y: String },
    #[error("bottom `{bottom}` is not below `{witness}`")]
    BottomNotLeast { bottom: String, witness: String },
    #[error("set {0:?} is not directed")]
    NotDirected(Vec<String>),
    #[error("no upper bound for {0:?}")]
    NoUpperBound(Vec<String>),
    #[error("upper bounds {bounds:?} of {members:?} have no least element")]
    NoLeastUpperBound {
        members: Vec<String>,
        bounds: Vec<String>,
    },
    #[error("domain too large for exhaustive subset search ({0} vertices)")]
    TooLarge(usize),
    #[error("domain has no bottom element")]
    NoBottom,
}

/// How a related pair is justified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderWitness {
    /// A degenerate edge: reflexivity.
    Refl,
    /// A stored carrier edge from x to y.
    Edge(usize),
    /// A formal composite through the listed intermediate vertices.
    Chain(Vec<usize>),
    /// Declared without carrier support (e.g. a fresh bottom).
    Formal,
}

/// A carrier complex plus a weak order on its vertices.
#[derive(Clone, Debug)]
pub struct WeakDomain {
    carrier: FiniteComplex,
    /// dense relation matrix; order[x][y] means x is below y
    order: Vec<Vec<bool>>,
    witness: BTreeMap<(usize, usize), OrderWitness>,
    bottom: Option<usize>,
    /// canonical representative (lexicographically least name) per vertex
    canon: Vec<usize>,
}

impl WeakDomain {
    /// Builds a domain from order generators, closing under reflexivity and
    /// transitivity. Composite witnesses are synthesised for pairs reached
    /// through intermediates. When a bottom is given it must end up below
    /// every vertex.
    pub fn new(
        carrier: FiniteComplex,
        generators: &[(usize, usize)],
        bottom: Option<usize>,
    ) -> Result<WeakDomain, DomainError> {
        let n = carrier.count(0);
        for &(x, y) in generators {
            if x >= n {
                return Err(DomainError::VertexRange(x));
            }
            if y >= n {
                return Err(DomainError::VertexRange(y));
            }
        }
        if let Some(b) = bottom {
            if b >= n {
                return Err(DomainError::VertexRange(b));
            }
        }
        let mut order = vec![vec![false; n]; n];
        let mut witness: BTreeMap<(usize, usize), OrderWitness> = BTreeMap::new();
        for v in 0..n {
            order[v][v] = true;
        }
        let mut edge_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in 0..carrier.count(1) {
            let (s, t) = carrier.edge_endpoints(e);
            edge_of.entry((s, t)).or_insert(e);
        }
        for &(x, y) in generators {
            if x == y || order[x][y] {
                continue;
            }
            order[x][y] = true;
            let w = match edge_of.get(&(x, y)) {
                Some(&e) => OrderWitness::Edge(e),
                None => OrderWitness::Formal,
            };
            witness.insert((x, y), w);
        }
        if let Some(b) = bottom {
            for v in 0..n {
                if v != b && !order[b][v] {
                    order[b][v] = true;
                    witness.insert((b, v), OrderWitness::Formal);
                }
            }
        }
        // Warshall closure with composite witnesses
        for k in 0..n {
            for x in 0..n {
                if !order[x][k] {
                    continue;
                }
                for y in 0..n {
                    if order[k][y] && !order[x][y] {
                        order[x][y] = true;
                        witness.insert((x, y), OrderWitness::Chain(vec![x, k, y]));
                    }
                }
            }
        }
        let mut dom = WeakDomain {
            carrier,
            order,
            witness,
            bottom,
            canon: (0..n).collect(),
        };
        dom.recompute_canon();
        dom.check()?;
        Ok(dom)
    }

    fn recompute_canon(&mut self) {
        let n = self.vertex_count();
        for v in 0..n {
            let mut best = v;
            for w in 0..n {
                if self.order[v][w]
                    && self.order[w][v]
                    && self.carrier.name(crate::simplicial::SimplexId { dim: 0, idx: w })
                        < self.carrier.name(crate::simplicial::SimplexId { dim: 0, idx: best })
                {
                    best = w;
                }
            }
            self.canon[v] = best;
        }
    }

    /// Exhaustive preorder and bottom checks.
    pub fn check(&self) -> Result<(), DomainError> {
        let n = self.vertex_count();
        for x in 0..n {
            if !self.order[x][x] {
                return Err(DomainError::Closure {
                    x: self.vertex_name(x).to_string(),
                    y: self.vertex_name(x).to_string(),
                });
            }
            for y in 0..n {
                for z in 0..n {
                    if self.order[x][y] && self.order[y][z] && !self.order[x][z] {
                        return Err(DomainError::Closure {
                            x: self.vertex_name(x).to_string(),
                            y: self.vertex_name(z).to_string(),
                        });
                    }
                }
            }
        }
        if let Some(b) = self.bottom {
            for v in 0..n {
                if !self.order[b][v] {
                    return Err(DomainError::BottomNotLeast {
                        bottom: self.vertex_name(b).to_string(),
                        witness: self.vertex_name(v).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn carrier(&self) -> &FiniteComplex {
        &self.carrier
    }

    pub fn vertex_count(&self) -> usize {
        self.carrier.count(0)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        self.carrier.name(crate::simplicial::SimplexId { dim: 0, idx: v })
    }

    pub fn vertex(&self, name: &str) -> Result<usize, DomainError> {
        let id = self
            .carrier
            .id_of(name)
            .map_err(|_| DomainError::UnknownVertex(name.to_string()))?;
        if id.dim != 0 {
            return Err(DomainError::UnknownVertex(name.to_string()));
        }
        Ok(id.idx)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    /// The weak order: true iff x is related below y.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order[x][y]
    }

    /// Mutual relatedness.
    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.order[x][y] && self.order[y][x]
    }

    /// Lexicographically least name in the equivalence class.
    pub fn canonical(&self, x: usize) -> usize {
        self.canon[x]
    }

    pub fn witness(&self, x: usize, y: usize) -> Option<&OrderWitness> {
        if x == y {
            return Some(&OrderWitness::Refl);
        }
        self.witness.get(&(x, y))
    }

    /// Partition of vertices by mutual relatedness.
    pub fn equiv_classes(&self) -> Vec<BTreeSet<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).filter(|&w| self.equiv(v, w)).collect();
            for &w in &class {
                seen[w] = true;
            }
            out.push(class);
        }
        out
    }

    fn names(&self, xs: &BTreeSet<usize>) -> Vec<String> {
        xs.iter().map(|&v| self.vertex_name(v).to_string()).collect()
    }

    /// Nonempty and pairwise upper-bounded within the set.
    pub fn is_directed(&self, xs: &BTreeSet<usize>) -> bool {
        if xs.is_empty() {
            return false;
        }
        xs.iter().all(|&x| {
            xs.iter()
                .all(|&y| xs.iter().any(|&z| self.leq(x, z) && self.leq(y, z)))
        })
    }

    /// Least upper bound of a set, as a canonical class representative.
    pub fn sup(&self, xs: &BTreeSet<usize>) -> Result<usize, DomainError> {
        let n = self.vertex_count();
        let bounds: Vec<usize> = (0..n)
            .filter(|&u| xs.iter().all(|&x| self.leq(x, u)))
            .collect();
        if bounds.is_empty() {
            return Err(DomainError::NoUpperBound(self.names(xs)));
        }
        for &u in &bounds {
            if bounds.iter().all(|&v| self.leq(u, v)) {
                return Ok(self.canonical(u));
            }
        }
        Err(DomainError::NoLeastUpperBound {
            members: self.names(xs),
            bounds: bounds
                .iter()
                .map(|&v| self.vertex_name(v).to_string())
                .collect(),
        })
    }

    /// Sup of a directed set; rejects non-directed input.
    pub fn sup_directed(&self, xs: &DirectedSet) -> Result<usize, DomainError> {
        self.sup(&xs.members)
    }

    /// Brute-force compactness oracle: every directed set whose sup dominates
    /// x must contain a member dominating x.
    pub fn is_compact(&self, x: usize) -> Result<bool, DomainError> {
        let n = self.vertex_count();
        if n > 16 {
            return Err(DomainError::TooLarge(n));
        }
        for mask in 1u32..(1 << n) {
            let xs: BTreeSet<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if !self.is_directed(&xs) {
                continue;
            }
            let Ok(s) = self.sup(&xs) else { continue };
            if self.leq(x, s) && !xs.iter().any(|&m| self.leq(x, m)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that every element is the sup of its compacts-below set.
    pub fn is_algebraic(&self) -> Result<Report, DomainError> {
        let n = self.vertex_count();
        if self.bottom.is_none() {
            return Err(DomainError::NoBottom);
        }
        if n > 16 {
            return Err(DomainError::TooLarge(n));
        }
        let compact: Vec<bool> = (0..n)
            .map(|v| self.is_compact(v))
            .collect::<Result<_, _>>()?;
        let mut failures = Vec::new();
        for x in 0..n {
            let down: BTreeSet<usize> =
                (0..n).filter(|&e| compact[e] && self.leq(e, x)).collect();
            if !self.is_directed(&down) {
                failures.push(format!(
                    "compacts below `{}` are not directed",
                    self.vertex_name(x)
                ));
                continue;
            }
            match self.sup(&down) {
                Ok(s) if self.equiv(s, x) => {}
                Ok(s) => failures.push(format!(
                    "sup of compacts below `{}` is `{}`",
                    self.vertex_name(x),
                    self.vertex_name(s)
                )),
                Err(e) => failures.push(format!(
                    "sup of compacts below `{}` failed: {e}",
                    self.vertex_name(x)
                )),
            }
        }
        Ok(Report {
            pass: failures.is_empty(),
            failures,
        })
    }

    /// Checks that every subset with an upper bound has a least upper bound.
    pub fn is_bounded_complete(&self) -> Result<Report, DomainError> {
        let n = self.vertex_count();
        if n > 16 {
            return Err(DomainError::TooLarge(n));
        }
        let mut failures = Vec::new();
        for mask in 1u32..(1 << n) {
            let xs: BTreeSet<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            let has_bound = (0..n).any(|u| xs.iter().all(|&x| self.leq(x, u)));
            if has_bound {
                if let Err(DomainError::NoLeastUpperBound { members, bounds }) = self.sup(&xs) {
                    failures.push(format!(
                        "bounded set {members:?} has incomparable upper bounds {bounds:?}"
                    ));
                    break;
                }
            }
        }
        Ok(Report {
            pass: failures.is_empty(),
            failures,
        })
    }
}

/// A validated directed subset of a domain.
#[derive(Clone, Debug)]
pub struct DirectedSet {
    members: BTreeSet<usize>,
}

impl DirectedSet {
    pub fn new(dom: &WeakDomain, members: BTreeSet<usize>) -> Result<DirectedSet, DomainError> {
        if !dom.is_directed(&members) {
            return Err(DomainError::NotDirected(dom.names(&members)));
        }
        Ok(DirectedSet { members })
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }
}

/// Verdict of an exhaustive property check.
#[derive(Clone, Debug)]
pub struct Report {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Product domain: carrier is the product complex, order is componentwise,
/// bottom is the pair of bottoms. Also returns the vertex pairing.
pub struct ProductDomain {
    pub domain: WeakDomain,
    /// product vertex -> (left vertex, right vertex)
    pub pairs: Vec<(usize, usize)>,
}

pub fn product_domain(k: &WeakDomain, k2: &WeakDomain) -> Result<ProductDomain, DomainError> {
    let b1 = k.bottom().ok_or(DomainError::NoBottom)?;
    let b2 = k2.bottom().ok_or(DomainError::NoBottom)?;
    let prod: Product = product(
        k.carrier(),
        k2.carrier(),
        k.carrier().dim_bound().min(k2.carrier().dim_bound()),
    )?;
    let nv = prod.complex.count(0);
    let mut pairs = Vec::with_capacity(nv);
    for idx in 0..nv {
        let (l, r) = prod.projections(crate::simplicial::SimplexId { dim: 0, idx });
        pairs.push((l.base().idx, r.base().idx));
    }
    let mut generators = Vec::new();
    let mut bottom = None;
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if x == b1 && y == b2 {
            bottom = Some(i);
        }
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            if i != j && k.leq(x, x2) && k2.leq(y, y2) {
                generators.push((i, j));
            }
        }
    }
    let domain = WeakDomain::new(prod.complex, &generators, bottom)?;
    Ok(ProductDomain { domain, pairs })
}

/// The pointed disjoint union of sphere models of dimension
/// `0..=max_sphere_dim`, with a fresh bottom below everything and no other
/// relations. Sphere vertices keep their subset names behind an `s{n}_`
/// prefix; the bottom is named `bot`.
pub fn build_n_plus(max_sphere_dim: usize) -> Result<WeakDomain, DomainError> {
    let mut parts: Vec<(String, FiniteComplex)> = Vec::new();
    for n in 0..=max_sphere_dim {
        parts.push((format!("s{n}_"), boundary_complex(n + 1)?));
    }
    let bot = {
        let mut b = crate::simplicial::ComplexBuilder::new(0);
        b.vertex("bot").map_err(DomainError::from)?;
        b.build()?
    };
    let mut refs: Vec<(&str, &FiniteComplex)> =
        parts.iter().map(|(p, c)| (p.as_str(), c)).collect();
    refs.push(("", &bot));
    let dim_bound = max_sphere_dim.max(1);
    let carrier = disjoint_union(&refs, dim_bound)?;
    let bottom = carrier.id_of("bot")?.idx;
    WeakDomain::new(carrier, &[], Some(bottom))
}

/// A chain bottom = v0 <= v1 <= ... <= v{n-1}, carrier vertices only.
pub fn chain(n: usize) -> Result<WeakDomain, DomainError> {
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    for i in 0..n {
        b.vertex(&format!("v{i}")).map_err(DomainError::from)?;
    }
    let carrier = b.build()?;
    let gens: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    WeakDomain::new(carrier, &gens, if n > 0 { Some(0) } else { None })
}

/// Flat domain: a bottom below `tops` incomparable elements.
pub fn flat(tops: usize) -> Result<WeakDomain, DomainError> {
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    b.vertex("bot").map_err(DomainError::from)?;
    for i in 0..tops {
        b.vertex(&format!("t{i}")).map_err(DomainError::from)?;
    }
    let carrier = b.build()?;
    WeakDomain::new(carrier, &[], Some(0))
}

/// The diamond lattice: bottom <= a,b <= top.
pub fn diamond() -> Result<WeakDomain, DomainError> {
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    for name in ["bot", "a", "b", "top"] {
        b.vertex(name).map_err(DomainError::from)?;
    }
    let carrier = b.build()?;
    WeakDomain::new(carrier, &[(0, 1), (0, 2), (1, 3), (2, 3)], Some(0))
}

/// Two incomparable elements with two incomparable upper bounds. The standard
/// bounded-completeness counterexample.
pub fn butterfly() -> Result<WeakDomain, DomainError> {
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    for name in ["a", "b", "c", "d"] {
        b.vertex(name).map_err(DomainError::from)?;
    }
    let carrier = b.build()?;
    WeakDomain::new(carrier, &[(0, 2), (0, 3), (1, 2), (1, 3)], None)
}

/// Butterfly over a fresh bottom; pointed but still not bounded complete.
pub fn pointed_butterfly() -> Result<WeakDomain, DomainError> {
    let mut b = crate::simplicial::ComplexBuilder::new(0);
    for name in ["bot", "a", "b", "c", "d"] {
        b.vertex(name).map_err(DomainError::from)?;
    }
    let carrier = b.build()?;
    WeakDomain::new(carrier, &[(1, 3), (1, 4), (2, 3), (2, 4)], Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_plus_shape() {
        let d = build_n_plus(1).unwrap();
        assert_eq!(d.vertex_count(), 6);
        let bot = d.bottom().unwrap();
        for v in 0..d.vertex_count() {
            assert!(d.leq(bot, v));
        }
        // no order edges between distinct sphere vertices: exhaustive scan
        for x in 0..d.vertex_count() {
            for y in 0..d.vertex_count() {
                if x != y && x != bot {
                    assert!(!d.leq(x, y), "{} <= {}", d.vertex_name(x), d.vertex_name(y));
                }
            }
        }
        // reflexivity
        let x = d.vertex("s1_0").unwrap();
        assert!(d.leq(x, x));
    }

    #[test]
    fn n_plus_components() {
        // the carrier of nplus(d) splits into the sphere components plus the
        // isolated bottom; the 0-sphere alone contributes two components
        for d in 0..=2usize {
            let dom = build_n_plus(d).unwrap();
            let comps = crate::simplicial::pi0(dom.carrier());
            assert_eq!(comps.len(), d + 3, "bottom + (d+2) sphere components");
        }
    }

    #[test]
    fn directedness() {
        let d = build_n_plus(1).unwrap();
        let bot = d.bottom().unwrap();
        let x = d.vertex("s1_0").unwrap();
        let y = d.vertex("s1_1").unwrap();
        assert!(d.is_directed(&BTreeSet::from([x])));
        assert!(d.is_directed(&BTreeSet::from([bot, x])));
        assert!(!d.is_directed(&BTreeSet::from([x, y])));
        assert!(DirectedSet::new(&d, BTreeSet::from([x, y])).is_err());
    }

    #[test]
    fn sups() {
        let c = chain(3).unwrap();
        assert_eq!(c.sup(&BTreeSet::from([1])).unwrap(), 1);
        assert_eq!(c.sup(&BTreeSet::from([0, 1])).unwrap(), 1);
        assert_eq!(c.sup(&BTreeSet::from([0, 1, 2])).unwrap(), 2);
        let b = butterfly().unwrap();
        assert!(matches!(
            b.sup(&BTreeSet::from([0, 1])),
            Err(DomainError::NoLeastUpperBound { .. })
        ));
    }

    #[test]
    fn sup_is_monotone_in_its_argument() {
        let doms = [chain(4).unwrap(), diamond().unwrap(), flat(3).unwrap()];
        for d in &doms {
            let n = d.vertex_count();
            for m1 in 1u32..(1 << n) {
                for m2 in 1u32..(1 << n) {
                    if m1 & m2 != m1 {
                        continue;
                    }
                    let xs: BTreeSet<usize> = (0..n).filter(|&v| m1 & (1 << v) != 0).collect();
                    let ys: BTreeSet<usize> = (0..n).filter(|&v| m2 & (1 << v) != 0).collect();
                    if !d.is_directed(&xs) || !d.is_directed(&ys) {
                        continue;
                    }
                    if let (Ok(a), Ok(b)) = (d.sup(&xs), d.sup(&ys)) {
                        assert!(d.leq(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn compactness_on_finite_domains() {
        let d = build_n_plus(1).unwrap();
        for v in 0..d.vertex_count() {
            assert!(d.is_compact(v).unwrap());
        }
        let c = chain(3).unwrap();
        assert!(c.is_compact(2).unwrap());
    }

    #[test]
    fn algebraicity() {
        for dom in [build_n_plus(1).unwrap(), chain(3).unwrap(), diamond().unwrap()] {
            assert!(dom.is_algebraic().unwrap().pass);
        }
        assert!(matches!(
            butterfly().unwrap().is_algebraic(),
            Err(DomainError::NoBottom)
        ));
    }

    #[test]
    fn bounded_completeness() {
        assert!(chain(3).unwrap().is_bounded_complete().unwrap().pass);
        assert!(build_n_plus(1).unwrap().is_bounded_complete().unwrap().pass);
        let bf = butterfly().unwrap().is_bounded_complete().unwrap();
        assert!(!bf.pass);
        assert!(!pointed_butterfly().unwrap().is_bounded_complete().unwrap().pass);
    }

    #[test]
    fn product_domain_structure() {
        let c = chain(2).unwrap();
        let p = product_domain(&c, &c).unwrap();
        assert_eq!(p.domain.vertex_count(), 4);
        let bot = p.domain.bottom().unwrap();
        assert_eq!(p.pairs[bot], (0, 0));
        // componentwise sup identity, brute force over all directed subsets
        let n = p.domain.vertex_count();
        for mask in 1u32..(1 << n) {
            let xs: BTreeSet<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if !p.domain.is_directed(&xs) {
                continue;
            }
            let s = p.domain.sup(&xs).unwrap();
            let left: BTreeSet<usize> = xs.iter().map(|&v| p.pairs[v].0).collect();
            let right: BTreeSet<usize> = xs.iter().map(|&v| p.pairs[v].1).collect();
            let sl = c.sup(&left).unwrap();
            let sr = c.sup(&right).unwrap();
            assert_eq!(p.pairs[s], (sl, sr));
        }
    }

    #[test]
    fn product_with_one_point_domain() {
        let one = chain(1).unwrap();
        let k = diamond().unwrap();
        let p = product_domain(&k, &one).unwrap();
        assert_eq!(p.domain.vertex_count(), k.vertex_count());
        for (i, &(x, _)) in p.pairs.iter().enumerate() {
            for (j, &(y, _)) in p.pairs.iter().enumerate() {
                assert_eq!(p.domain.leq(i, j), k.leq(x, y));
            }
        }
    }

    #[test]
    fn witnesses_and_classes() {
        let d = build_n_plus(0).unwrap();
        let bot = d.bottom().unwrap();
        assert!(matches!(d.witness(bot, bot), Some(OrderWitness::Refl)));
        assert!(matches!(d.witness(bot, 0), Some(OrderWitness::Formal)));
        assert_eq!(d.equiv_classes().len(), d.vertex_count());
    }
}
