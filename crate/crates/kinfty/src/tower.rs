//! The reflexive tower: level 0 is a pointed weak domain, level n+1 is the
//! function space over level n represented by step bases over level-n
//! elements. A [`TowerElement`] is a level together with a payload and stands
//! for the compact limit element whose components are its embeddings and
//! projections; the infinite sup of the limit construction is replaced by
//! stabilisation detection, which is exact on compacts and loud on overflow.
//!
//! Embeddings rewrite step pairs with the lower embedding. Projections follow
//! the composite `f- . h . f+` faithfully: the guard of a projected step is
//! the set of minimal elements whose embedding dominates the original guard.
//! The symmetric pair rewrite is not used for projections because it
//! over-fires and breaks `f+ . f- <= id` on non-embedded elements.
//!
//! Homotopy bookkeeping rides along as edge-path classes in the level-0
//! carrier: embeddings transport a class verbatim, step bases send edges to
//! degenerate witnesses, and the representative map of the example preset
//! carries the forward and return arcs of the circle it collapses.

use crate::funcspace::{self, Domain, FuncError};
use crate::hpo::WeakDomain;
use crate::simplicial::PathClass;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("level {needed} exceeds the truncation level {max}; raise N")]
    Overflow { needed: usize, max: usize },
    #[error("payload is malformed at level {0}")]
    Malformed(usize),
    #[error("result did not stabilise below the truncation level; raise N")]
    NotStabilized,
    #[error("the example preset needs the circle vertices s1_0, s1_1, s1_2 and their edges")]
    PresetUnavailable,
    #[error(transparent)]
    Order(#[from] crate::hpo::DomainError),
    #[error(transparent)]
    Complex(#[from] crate::simplicial::ComplexError),
}

/// Choice of representative map used by the initial embedding `x => const x'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepMode {
    /// x' = x; the laws hold on the nose.
    Identity,
    /// Collapses the circle's two marked vertices onto one, recording the
    /// forward arc and the complementary return arc of the circle.
    Example41,
}

/// An element of some tower level. Level 0 is a carrier vertex; level n+1 is
/// a step basis over level-n payloads, kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Base(usize),
    Func(Vec<(Payload, Payload)>),
}

impl Payload {
    pub fn pairs(&self) -> Option<&[(Payload, Payload)]> {
        match self {
            Payload::Base(_) => None,
            Payload::Func(ps) => Some(ps),
        }
    }
}

/// A tower element: the compact whose component at every displayed level is
/// determined by `payload` at `level`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerElement {
    pub level: usize,
    pub payload: Payload,
}

/// Homotopy class attached to a tower edge. `Trivial` is a degenerate or
/// order witness (zero class); `Untracked` means the construction could not
/// anchor the class in the level-0 carrier, which is weaker than trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Tracked(PathClass),
    Trivial,
    Untracked,
}

/// An edge between tower elements carrying its transported level-0 class.
#[derive(Clone, Debug)]
pub struct TowerEdge {
    pub source: TowerElement,
    pub target: TowerElement,
    pub class: EdgeClass,
}

impl TowerEdge {
    /// The degenerate edge at an element: endpoints equal, zero class.
    pub fn degenerate(x: TowerElement) -> TowerEdge {
        TowerEdge {
            source: x.clone(),
            target: x,
            class: EdgeClass::Trivial,
        }
    }
}

/// Tower configuration: base domain, truncation level, representative mode.
pub struct TowerConfig {
    pub k0: WeakDomain,
    pub n: usize,
    pub rep: RepMode,
}

struct RepData {
    map: Vec<usize>,
    up: Vec<Option<PathClass>>,
    down: Vec<Option<PathClass>>,
}

/// The tower over a pointed base domain, truncated at level `n_max`.
pub struct Tower {
    k0: WeakDomain,
    n_max: usize,
    mode: RepMode,
    rep: RepData,
}

/// One tower level viewed through the function-space machinery.
pub struct LevelDomain<'a> {
    tower: &'a Tower,
    level: usize,
}

impl Domain for LevelDomain<'_> {
    type Elem = Payload;

    fn bottom(&self) -> Payload {
        self.tower.bottom_at(self.level)
    }

    fn leq(&self, a: &Payload, b: &Payload) -> bool {
        self.tower.leq_at(self.level, a, b)
    }

    fn sup(&self, xs: &[Payload]) -> Result<Payload, FuncError> {
        self.tower.sup_at(self.level, xs)
    }

    fn canonical(&self, x: &Payload) -> Payload {
        self.tower
            .canonical_at(self.level, x)
            .expect("canonicalising a well-formed payload")
    }

    fn render(&self, x: &Payload) -> String {
        self.tower.render_payload(x)
    }
}

impl Tower {
    pub fn new(config: TowerConfig) -> Result<Tower, TowerError> {
        let TowerConfig { k0, n, rep } = config;
        if k0.bottom().is_none() {
            return Err(TowerError::Order(crate::hpo::DomainError::NoBottom));
        }
        let nv = k0.vertex_count();
        let mut data = RepData {
            map: (0..nv).collect(),
            up: vec![None; nv],
            down: vec![None; nv],
        };
        if rep == RepMode::Example41 {
            let v0 = k0
                .vertex("s1_0")
                .map_err(|_| TowerError::PresetUnavailable)?;
            let v1 = k0
                .vertex("s1_1")
                .map_err(|_| TowerError::PresetUnavailable)?;
            let carrier = k0.carrier();
            let e01 = carrier
                .id_of("s1_01")
                .map_err(|_| TowerError::PresetUnavailable)?
                .idx;
            let e02 = carrier
                .id_of("s1_02")
                .map_err(|_| TowerError::PresetUnavailable)?
                .idx;
            let e12 = carrier
                .id_of("s1_12")
                .map_err(|_| TowerError::PresetUnavailable)?
                .idx;
            data.map[v0] = v1;
            // forward arc 0 -> 1 and the complementary return arc 1 -> 2 -> 0
            data.up[v0] = Some(PathClass::new(carrier, v0, vec![(e01, true)])?);
            data.down[v0] = Some(PathClass::new(
                carrier,
                v1,
                vec![(e12, true), (e02, false)],
            )?);
        }
        Ok(Tower {
            k0,
            n_max: n,
            mode: rep,
            rep: data,
        })
    }

    pub fn k0(&self) -> &WeakDomain {
        &self.k0
    }

    pub fn max_level(&self) -> usize {
        self.n_max
    }

    pub fn rep_mode(&self) -> RepMode {
        self.mode
    }

    pub fn rep_of(&self, v: usize) -> usize {
        self.rep.map[v]
    }

    /// Witness path from v to its representative, when the preset tracks one.
    pub fn rep_up_path(&self, v: usize) -> Option<&PathClass> {
        self.rep.up[v].as_ref()
    }

    /// Return path from the representative back to v.
    pub fn rep_down_path(&self, v: usize) -> Option<&PathClass> {
        self.rep.down[v].as_ref()
    }

    pub fn level(&self, l: usize) -> LevelDomain<'_> {
        LevelDomain { tower: self, level: l }
    }

    pub fn bottom_at(&self, level: usize) -> Payload {
        if level == 0 {
            Payload::Base(self.k0.bottom().expect("tower base is pointed"))
        } else {
            Payload::Func(Vec::new())
        }
    }

    pub fn bottom_element(&self) -> TowerElement {
        TowerElement {
            level: 0,
            payload: self.bottom_at(0),
        }
    }

    /// Shape check: bases at level 0, step pairs all the way down.
    pub fn well_formed(&self, level: usize, p: &Payload) -> bool {
        match (level, p) {
            (0, Payload::Base(v)) => *v < self.k0.vertex_count(),
            (l, Payload::Func(ps)) if l >= 1 => ps
                .iter()
                .all(|(a, b)| self.well_formed(l - 1, a) && self.well_formed(l - 1, b)),
            _ => false,
        }
    }

    pub fn leq_at(&self, level: usize, a: &Payload, b: &Payload) -> bool {
        match (level, a, b) {
            (0, Payload::Base(x), Payload::Base(y)) => self.k0.leq(*x, *y),
            (l, Payload::Func(fa), Payload::Func(_)) if l >= 1 => fa.iter().all(|(g, h)| {
                let img = self
                    .apply_at(l, b, g)
                    .expect("applying a normalised payload");
                self.leq_at(l - 1, h, &img)
            }),
            _ => panic!("payload shape mismatch at level {level}"),
        }
    }

    pub fn payload_equiv(&self, level: usize, a: &Payload, b: &Payload) -> bool {
        self.leq_at(level, a, b) && self.leq_at(level, b, a)
    }

    /// Applies a level-`level` payload to a level-`level - 1` argument.
    pub fn apply_at(&self, level: usize, f: &Payload, x: &Payload) -> Result<Payload, FuncError> {
        debug_assert!(level >= 1);
        let Payload::Func(pairs) = f else {
            panic!("applying a base payload");
        };
        let fired: Vec<Payload> = pairs
            .iter()
            .filter(|(a, _)| self.leq_at(level - 1, a, x))
            .map(|(_, b)| b.clone())
            .collect();
        self.sup_at(level - 1, &fired)
    }

    pub fn sup_at(&self, level: usize, xs: &[Payload]) -> Result<Payload, FuncError> {
        if level == 0 {
            if xs.is_empty() {
                return Ok(self.bottom_at(0));
            }
            let set: BTreeSet<usize> = xs
                .iter()
                .map(|p| match p {
                    Payload::Base(v) => *v,
                    _ => panic!("base payload expected"),
                })
                .collect();
            let v = WeakDomain::sup(&self.k0, &set).map_err(|e| FuncError::Sup(e.to_string()))?;
            Ok(Payload::Base(v))
        } else {
            let mut raw = Vec::new();
            for x in xs {
                match x {
                    Payload::Func(ps) => raw.extend(ps.iter().cloned()),
                    _ => panic!("function payload expected"),
                }
            }
            self.make_at(level, raw)
        }
    }

    /// Normal form of a raw pair list at a function level.
    pub fn make_at(&self, level: usize, raw: Vec<(Payload, Payload)>) -> Result<Payload, FuncError> {
        debug_assert!(level >= 1);
        let below = self.level(level - 1);
        let sf = funcspace::make_steps(&below, &below, raw)?;
        Ok(Payload::Func(sf.pairs().to_vec()))
    }

    pub fn canonical_at(&self, level: usize, p: &Payload) -> Result<Payload, FuncError> {
        match (level, p) {
            (0, Payload::Base(v)) => Ok(Payload::Base(self.k0.canonical(*v))),
            (l, Payload::Func(ps)) if l >= 1 => self.make_at(l, ps.clone()),
            _ => panic!("payload shape mismatch at level {level}"),
        }
    }

    /// Embedding one level up. Level 0 sends a vertex to the constant basis
    /// at its representative; function levels rewrite pairs with the lower
    /// embedding.
    pub fn fplus_at(&self, level_from: usize, p: &Payload) -> Result<Payload, FuncError> {
        match (level_from, p) {
            (0, Payload::Base(v)) => {
                let bot = self.k0.bottom().expect("pointed");
                self.make_at(
                    1,
                    vec![(Payload::Base(bot), Payload::Base(self.rep.map[*v]))],
                )
            }
            (l, Payload::Func(ps)) if l >= 1 => {
                let mut raw = Vec::with_capacity(ps.len());
                for (a, b) in ps {
                    raw.push((self.fplus_at(l - 1, a)?, self.fplus_at(l - 1, b)?));
                }
                self.make_at(l + 1, raw)
            }
            _ => panic!("payload shape mismatch at level {level_from}"),
        }
    }

    /// Projection one level down, following `f- . h . f+`. The projected
    /// guard of a pair (a, b) is the set of minimal elements one level below
    /// whose embedding dominates `a`.
    pub fn fminus_at(&self, level_from: usize, p: &Payload) -> Result<Payload, FuncError> {
        debug_assert!(level_from >= 1);
        let Payload::Func(pairs) = p else {
            panic!("projecting a base payload");
        };
        if level_from == 1 {
            // g(bottom)
            return self.apply_at(1, p, &self.bottom_at(0));
        }
        let mut raw = Vec::new();
        for (a, b) in pairs {
            let guards = self.minimal_preimages(level_from - 1, a)?;
            let out = self.fminus_at(level_from - 1, b)?;
            for g in guards {
                raw.push((g, out.clone()));
            }
        }
        self.make_at(level_from - 1, raw)
    }

    /// Minimal elements `w` one level below `level` with `a <= fplus(w)`.
    /// Empty when the guard is unreachable through the embedding.
    ///
    /// At level 1 this is an exact scan of the base domain, valid for any
    /// representative map. At higher levels the guard set is assembled
    /// structurally, which matches the composite projection whenever the
    /// projection laws hold one level down (always, under the identity map).
    fn minimal_preimages(&self, level: usize, a: &Payload) -> Result<Vec<Payload>, FuncError> {
        debug_assert!(level >= 1);
        if level == 1 {
            let mut mins: Vec<usize> = Vec::new();
            for w in 0..self.k0.vertex_count() {
                let fw = self.fplus_at(0, &Payload::Base(w))?;
                if self.leq_at(1, a, &fw) {
                    mins.push(w);
                }
            }
            let minimal: Vec<Payload> = mins
                .iter()
                .filter(|&&w| !mins.iter().any(|&u| u != w && self.k0.leq(u, w) && !self.k0.leq(w, u)))
                .map(|&w| Payload::Base(self.k0.canonical(w)))
                .collect();
            let mut uniq = Vec::new();
            for m in minimal {
                if !uniq.contains(&m) {
                    uniq.push(m);
                }
            }
            return Ok(uniq);
        }
        let Payload::Func(pairs) = a else {
            panic!("function payload expected");
        };
        // Each pair (p, q) constrains w at the point f-(p): w(f-(p)) must
        // dominate some minimal preimage of q. Enumerate the choices.
        let mut constraint_sets: Vec<(Payload, Vec<Payload>)> = Vec::new();
        for (p, q) in pairs {
            let at = self.fminus_at(level - 1, p)?;
            let choices = self.minimal_preimages(level - 1, q)?;
            if choices.is_empty() {
                return Ok(Vec::new());
            }
            constraint_sets.push((at, choices));
        }
        let mut candidates: Vec<Payload> = vec![self.bottom_at(level - 1)];
        for (at, choices) in &constraint_sets {
            let mut next = Vec::new();
            for cand in &candidates {
                for m in choices {
                    let step = match self.make_at(level - 1, vec![(at.clone(), m.clone())]) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    match self.sup_at(level - 1, &[cand.clone(), step]) {
                        Ok(j) => next.push(j),
                        Err(_) => continue,
                    }
                }
            }
            candidates = next;
        }
        // keep candidates that genuinely satisfy the guard, then minimise
        let mut sat = Vec::new();
        for cand in candidates {
            let fw = self.fplus_at(level - 1, &cand)?;
            if self.leq_at(level, a, &fw) && !sat.contains(&cand) {
                sat.push(cand);
            }
        }
        let minimal: Vec<Payload> = sat
            .iter()
            .filter(|w| {
                !sat.iter().any(|u| {
                    *u != **w
                        && self.leq_at(level - 1, u, w)
                        && !self.leq_at(level - 1, w, u)
                })
            })
            .cloned()
            .collect();
        Ok(minimal)
    }

    /// Composite of embeddings or projections between two levels.
    pub fn f_nm(&self, from: usize, to: usize, p: &Payload) -> Result<Payload, FuncError> {
        let mut cur = p.clone();
        let mut l = from;
        while l < to {
            cur = self.fplus_at(l, &cur)?;
            l += 1;
        }
        while l > to {
            cur = self.fminus_at(l, &cur)?;
            l -= 1;
        }
        Ok(cur)
    }

    pub fn element(&self, level: usize, payload: Payload) -> Result<TowerElement, TowerError> {
        if level > self.n_max {
            return Err(TowerError::Overflow {
                needed: level,
                max: self.n_max,
            });
        }
        if !self.well_formed(level, &payload) {
            return Err(TowerError::Malformed(level));
        }
        self.normalize(&TowerElement { level, payload })
    }

    /// Embedded level-0 element for a carrier vertex.
    pub fn from_vertex(&self, v: usize) -> Result<TowerElement, TowerError> {
        self.element(0, Payload::Base(v))
    }

    /// Minimal-level canonical representative: the level drops while a
    /// projection/re-embedding round trip fixes the payload.
    pub fn normalize(&self, t: &TowerElement) -> Result<TowerElement, TowerError> {
        if !self.well_formed(t.level, &t.payload) {
            return Err(TowerError::Malformed(t.level));
        }
        let mut level = t.level;
        let mut payload = self.canonical_at(level, &t.payload)?;
        while level > 0 {
            let down = self.fminus_at(level, &payload)?;
            let up = self.fplus_at(level - 1, &down)?;
            if self.payload_equiv(level, &up, &payload) {
                level -= 1;
                payload = down;
            } else {
                break;
            }
        }
        Ok(TowerElement { level, payload })
    }

    /// Payload of an element displayed at an arbitrary level within bounds.
    pub fn component(&self, t: &TowerElement, at: usize) -> Result<Payload, TowerError> {
        if at > self.n_max {
            return Err(TowerError::Overflow {
                needed: at,
                max: self.n_max,
            });
        }
        Ok(self.f_nm(t.level, at, &t.payload)?)
    }

    /// The limit order: lift both elements to the larger base level and
    /// compare there.
    pub fn tower_leq(&self, s: &TowerElement, t: &TowerElement) -> Result<bool, TowerError> {
        let l = s.level.max(t.level);
        let sp = self.component(s, l)?;
        let tp = self.component(t, l)?;
        Ok(self.leq_at(l, &sp, &tp))
    }

    pub fn elem_equiv(&self, s: &TowerElement, t: &TowerElement) -> Result<bool, TowerError> {
        Ok(self.tower_leq(s, t)? && self.tower_leq(t, s)?)
    }

    /// Application in the limit: apply the function component one level above
    /// the argument component, at successive levels until two consecutive
    /// results agree. Errors when the truncation level is reached first.
    pub fn app(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement, TowerError> {
        let x = self.normalize(x)?;
        let y = self.normalize(y)?;
        let k0 = x.level.saturating_sub(1).max(y.level);
        let mut prev: Option<TowerElement> = None;
        for k in k0..=self.n_max {
            if k + 1 > self.n_max {
                return Err(TowerError::Overflow {
                    needed: k + 1,
                    max: self.n_max,
                });
            }
            let xf = self.component(&x, k + 1)?;
            let ya = self.component(&y, k)?;
            let rp = self.apply_at(k + 1, &xf, &ya)?;
            let r = self.normalize(&TowerElement {
                level: k,
                payload: rp,
            })?;
            if let Some(p) = prev {
                if self.elem_equiv(&p, &r)? {
                    return Ok(p);
                }
            }
            prev = Some(r);
        }
        Err(TowerError::NotStabilized)
    }

    /// Realises a compactly supported functor (a step basis over tower
    /// elements) as a tower element, at the support level, with the
    /// stabilisation check one level up.
    pub fn h_map(&self, basis: &[(TowerElement, TowerElement)]) -> Result<TowerElement, TowerError> {
        let mut norm: Vec<(TowerElement, TowerElement)> = Vec::with_capacity(basis.len());
        let mut support = 0usize;
        for (a, b) in basis {
            let a = self.normalize(a)?;
            let b = self.normalize(b)?;
            support = support.max(a.level).max(b.level);
            norm.push((a, b));
        }
        let mut prev: Option<TowerElement> = None;
        for n in support..=self.n_max {
            if n + 1 > self.n_max {
                return Err(TowerError::Overflow {
                    needed: n + 1,
                    max: self.n_max,
                });
            }
            let mut raw = Vec::with_capacity(norm.len());
            for (a, b) in &norm {
                raw.push((self.component(a, n)?, self.component(b, n)?));
            }
            let payload = self.make_at(n + 1, raw)?;
            let r = self.normalize(&TowerElement {
                level: n + 1,
                payload,
            })?;
            if let Some(p) = prev {
                if self.elem_equiv(&p, &r)? {
                    return Ok(p);
                }
            }
            prev = Some(r);
        }
        Err(TowerError::NotStabilized)
    }

    /// The functor a tower element represents, as a step basis over tower
    /// elements (its component one level up, read as element pairs).
    pub fn k_basis(&self, x: &TowerElement) -> Result<Vec<(TowerElement, TowerElement)>, TowerError> {
        let x = self.normalize(x)?;
        let l = x.level.max(1);
        if l > self.n_max {
            return Err(TowerError::Overflow {
                needed: l,
                max: self.n_max,
            });
        }
        let up = self.component(&x, l)?;
        let Payload::Func(pairs) = up else {
            unreachable!("components at level >= 1 are bases");
        };
        let mut out = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            out.push((
                self.normalize(&TowerElement {
                    level: l - 1,
                    payload: a,
                })?,
                self.normalize(&TowerElement {
                    level: l - 1,
                    payload: b,
                })?,
            ));
        }
        Ok(out)
    }

    /// Evaluates the functor representing `x` on an argument: definitionally
    /// the tower application.
    pub fn k_apply(&self, x: &TowerElement, y: &TowerElement) -> Result<TowerElement, TowerError> {
        self.app(x, y)
    }

    /// Transports an edge through `k` and evaluates at an argument: the class
    /// is carried verbatim (the transport is an embedding on the tracked
    /// component).
    pub fn k_transport(&self, e: &TowerEdge, at: &TowerElement) -> Result<TowerEdge, TowerError> {
        Ok(TowerEdge {
            source: self.app(&e.source, at)?,
            target: self.app(&e.target, at)?,
            class: e.class.clone(),
        })
    }

    /// The functor of `x` applied to an edge of its domain: step bases send
    /// edges to the canonical witness between images, so the class
    /// degenerates.
    pub fn functor_edge_action(
        &self,
        x: &TowerElement,
        e: &TowerEdge,
    ) -> Result<TowerEdge, TowerError> {
        Ok(TowerEdge {
            source: self.app(x, &e.source)?,
            target: self.app(x, &e.target)?,
            class: EdgeClass::Trivial,
        })
    }

    /// Embeds a level-0 edge path as a tower edge with its class tracked.
    pub fn embed_edge(&self, p: PathClass) -> Result<TowerEdge, TowerError> {
        let source = self.from_vertex(p.start())?;
        let target = self.from_vertex(p.end(self.k0.carrier()))?;
        Ok(TowerEdge {
            source,
            target,
            class: EdgeClass::Tracked(p),
        })
    }

    /// Both projection-pair laws on explicit bases: `f- . f+` fixes every
    /// level-n basis element up to equivalence, and `f+ . f-` deflates every
    /// level-(n+1) element.
    pub fn check_projection_laws(
        &self,
        n: usize,
        basis_n: &[Payload],
        basis_n1: &[Payload],
    ) -> Result<LawReport, TowerError> {
        let mut report = LawReport {
            level: n,
            checked_a: 0,
            checked_b: 0,
            failures_a: Vec::new(),
            failures_b: Vec::new(),
        };
        for h in basis_n {
            report.checked_a += 1;
            let up = self.fplus_at(n, h)?;
            let back = self.fminus_at(n + 1, &up)?;
            if !self.payload_equiv(n, &back, h) {
                report.failures_a.push(self.render_payload(h));
            }
        }
        for g in basis_n1 {
            report.checked_b += 1;
            let down = self.fminus_at(n + 1, g)?;
            let up = self.fplus_at(n, &down)?;
            if !self.leq_at(n + 1, &up, g) {
                report.failures_b.push(self.render_payload(g));
            }
        }
        Ok(report)
    }

    /// Recomputes the sup of level-wise re-embeddings of an element's
    /// components and compares with the element.
    pub fn check_limit_expansion(&self, x: &TowerElement) -> Result<bool, TowerError> {
        let x = self.normalize(x)?;
        let l = x.level;
        let mut parts = Vec::new();
        for n in 0..=l {
            let comp = self.component(&x, n)?;
            parts.push(self.f_nm(n, l, &comp)?);
        }
        let s = self.sup_at(l, &parts)?;
        Ok(self.payload_equiv(l, &s, &x.payload))
    }

    // -- enumeration helpers ------------------------------------------------

    /// Every vertex as a level-0 payload.
    pub fn level0_payloads(&self) -> Vec<Payload> {
        (0..self.k0.vertex_count()).map(Payload::Base).collect()
    }

    /// Every monotone endo-map of the base, as a normalised level-1 payload.
    pub fn level1_payloads(&self) -> Result<Vec<Payload>, TowerError> {
        let mut out: Vec<Payload> = Vec::new();
        for t in funcspace::monotone_tables(&self.k0) {
            let s = funcspace::to_steps(&self.k0, &t)?;
            let p = Payload::Func(
                s.pairs()
                    .iter()
                    .map(|(a, b)| (Payload::Base(*a), Payload::Base(*b)))
                    .collect(),
            );
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Small generating family at level 1: bottom, embedded vertices, single
    /// steps between vertices.
    pub fn sample1_payloads(&self) -> Result<Vec<Payload>, TowerError> {
        let mut out = vec![self.bottom_at(1)];
        for v in 0..self.k0.vertex_count() {
            let e = self.fplus_at(0, &Payload::Base(v))?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        for a in 0..self.k0.vertex_count() {
            for b in 0..self.k0.vertex_count() {
                let s = self.make_at(1, vec![(Payload::Base(a), Payload::Base(b))])?;
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    /// Generated family one level above `from`: bottom, embeddings of the
    /// generators, all consistent single steps between them, and joins of
    /// single-step pairs drawn from the first `join_cap` steps.
    pub fn generated_payloads(
        &self,
        level: usize,
        from: &[Payload],
        join_cap: usize,
    ) -> Result<Vec<Payload>, TowerError> {
        debug_assert!(level >= 1);
        let mut out = vec![self.bottom_at(level)];
        for g in from {
            let e = self.fplus_at(level - 1, g)?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        let mut singles = Vec::new();
        for a in from {
            for b in from {
                if let Ok(s) = self.make_at(level, vec![(a.clone(), b.clone())]) {
                    if !singles.contains(&s) {
                        singles.push(s);
                    }
                }
            }
        }
        for s in &singles {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        let upto = singles.len().min(join_cap);
        for i in 0..upto {
            for j in (i + 1)..upto {
                if let Ok(joined) = self.sup_at(level, &[singles[i].clone(), singles[j].clone()]) {
                    if !out.contains(&joined) {
                        out.push(joined);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn render_payload(&self, p: &Payload) -> String {
        match p {
            Payload::Base(v) => self.k0.vertex_name(*v).to_string(),
            Payload::Func(ps) if ps.is_empty() => "0".to_string(),
            Payload::Func(ps) => {
                let inner: Vec<String> = ps
                    .iter()
                    .map(|(a, b)| {
                        format!("{}=>{}", self.render_payload(a), self.render_payload(b))
                    })
                    .collect();
                format!("[{}]", inner.join("; "))
            }
        }
    }

    pub fn render_element(&self, t: &TowerElement) -> String {
        format!("(level {}, {})", t.level, self.render_payload(&t.payload))
    }
}

/// Outcome of a projection-law sweep at one level.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub level: usize,
    pub checked_a: usize,
    pub checked_b: usize,
    pub failures_a: Vec<String>,
    pub failures_b: Vec<String>,
}

impl LawReport {
    pub fn pass(&self) -> bool {
        self.failures_a.is_empty() && self.failures_b.is_empty()
    }
}

/// Pointwise comparison of two functors given by step bases over tower
/// elements: every step of `f` is honoured by `g`'s application.
pub fn basis_leq(
    tower: &Tower,
    f: &[(TowerElement, TowerElement)],
    g: &[(TowerElement, TowerElement)],
) -> Result<bool, TowerError> {
    for (a, b) in f {
        let img = basis_apply(tower, g, a)?;
        if !tower.tower_leq(b, &img)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies a step basis over tower elements to a tower element.
pub fn basis_apply(
    tower: &Tower,
    f: &[(TowerElement, TowerElement)],
    x: &TowerElement,
) -> Result<TowerElement, TowerError> {
    let mut fired: Vec<TowerElement> = Vec::new();
    for (a, b) in f {
        if tower.tower_leq(a, x)? {
            fired.push(b.clone());
        }
    }
    if fired.is_empty() {
        return Ok(tower.bottom_element());
    }
    let l = fired.iter().map(|t| t.level).max().unwrap();
    let mut parts = Vec::new();
    for t in &fired {
        parts.push(tower.component(t, l)?);
    }
    let s = tower.sup_at(l, &parts)?;
    tower.normalize(&TowerElement { level: l, payload: s })
}
