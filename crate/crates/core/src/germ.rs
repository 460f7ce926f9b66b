//! Germs: precategories with a partial product.
//!
//! Elements live in a finite window. For infinite germs the window is larger
//! than the checking domain (`in_domain`), so that existential searches
//! (divisors, absorptions) see past the domain edge. Products that leave
//! the window are reported as `Beyond`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::paths::{EdgeId, Graph, ObjId, PathWord};
use crate::presentation::{registry_closure, InvertibleRegistry, DEFAULT_REGISTRY_BOUND};
use crate::rewrite::{Ambiguity, AmbiguityKind, Congruence, ReductionSystem, ResolutionStatus, Strategy, TermOrder};

pub type ElemId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("{line}: {message}")]
    Parse { line: usize, message: String },
    #[error("object {0} has no identity element")]
    IdentityMissing(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("word {0} is not irreducible")]
    FamilyNotIrreducible(String),
    #[error("entries {0} and {1} are not composable")]
    NotComposable(String, String),
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(usize),
    #[error("product leaves the element window at ({0}, {1})")]
    DomainBoundExceeded(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
    pub is_identity: bool,
    pub inverse: Option<ElemId>,
    pub in_domain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Defined(ElemId),
    /// Defined in the infinite germ but outside the materialized window.
    Beyond,
    Undefined,
}

/// A reduction `(x, y) -> (x•y1, y2)` with `y = y1•y2` and `x ⪆ x•y1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GermReduction {
    pub lhs: (ElemId, ElemId),
    pub split: (ElemId, ElemId),
    pub rhs: (ElemId, ElemId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub identity: Option<Vec<ElemId>>,
    pub endpoint: Option<Vec<ElemId>>,
    pub inverses: Option<Vec<ElemId>>,
    pub interchange: Option<Vec<ElemId>>,
    pub left_associative: Option<Vec<ElemId>>,
    pub right_associative: Option<Vec<ElemId>>,
    pub left_cancellative: Option<Vec<ElemId>>,
    /// Products that left the window while checking.
    pub beyond_window: usize,
}

impl AxiomReport {
    /// Identity, endpoint, inverse and interchange axioms.
    pub fn is_germ(&self) -> bool {
        self.identity.is_none() && self.endpoint.is_none() && self.inverses.is_none() && self.interchange.is_none()
    }

    /// Hypotheses of the Garside recognition results.
    pub fn hypotheses_hold(&self) -> bool {
        self.is_germ() && self.left_associative.is_none() && self.left_cancellative.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Resolved,
    ResolvedUpToDeformation,
    Unresolved,
    FuelExhausted,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Resolved => "resolved",
            Outcome::ResolvedUpToDeformation => "resolved-up-to-deformation",
            Outcome::Unresolved => "unresolved",
            Outcome::FuelExhausted => "fuel-exhausted",
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self, Outcome::Resolved | Outcome::ResolvedUpToDeformation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityOutcome {
    /// The shared germ word (three entries for overlaps).
    pub word: Vec<ElemId>,
    pub kind: AmbiguityKind,
    pub outcome: Outcome,
    pub left: Vec<ElemId>,
    pub right: Vec<ElemId>,
    /// Invertibles `eps_0..eps_l` witnessing deformation.
    pub chain: Vec<ElemId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Garside,
    NotGarside(String),
    Inconclusive(String),
    OracleDisagreement(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarsideVerdict {
    pub axioms: AxiomReport,
    pub strict: bool,
    pub reductions: usize,
    pub reductions_bar: usize,
    pub presentation_sweep: Vec<AmbiguityOutcome>,
    pub reduction_sweep: Vec<AmbiguityOutcome>,
    pub greatest_i_missing: Option<(ElemId, ElemId)>,
    pub verdict: Verdict,
}

impl GarsideVerdict {
    pub fn is_garside(&self) -> bool {
        self.verdict == Verdict::Garside
    }

    pub fn reduction_sweep_ok(&self) -> bool {
        self.reduction_sweep.iter().all(|a| a.outcome.is_resolved())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ILawReport {
    pub sharp: bool,
    pub up_to_invertibles: bool,
    /// First triple violating the law up to invertibles (or sharply, when
    /// only the sharp form fails).
    pub witness: Option<(ElemId, ElemId, ElemId)>,
    pub undefined_at: Option<(ElemId, ElemId)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SystemKind {
    Bar,
    WithProducts,
}

pub struct Germ {
    pub label: String,
    objects: Vec<String>,
    elements: Vec<Element>,
    table: Vec<Product>,
    div: Arc<Vec<bool>>,
    quot: HashMap<(ElemId, ElemId), Vec<ElemId>>,
    index: HashMap<String, ElemId>,
    identities: Vec<ElemId>,
    bound: Option<usize>,
    graph: Graph,
    edge_of: Vec<Option<EdgeId>>,
    elem_of: Arc<Vec<ElemId>>,
    sbar: OnceLock<Vec<GermReduction>>,
    normalizer: OnceLock<ReductionSystem>,
}

impl std::fmt::Debug for Germ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Germ").field("label", &self.label).field("elements", &self.elements.len()).finish()
    }
}

impl Germ {
    /// Builds a germ from a product oracle over the element window.
    /// `divides` overrides the scan-based divisibility (for infinite germs
    /// whose quotients may fall outside the window).
    pub fn new(
        label: &str,
        objects: Vec<String>,
        elements: Vec<Element>,
        product: &dyn Fn(ElemId, ElemId) -> Product,
        divides: Option<&dyn Fn(ElemId, ElemId) -> bool>,
        bound: Option<usize>,
    ) -> Result<Germ, GermError> {
        let n = elements.len();
        let mut identities = vec![usize::MAX; objects.len()];
        for (i, e) in elements.iter().enumerate() {
            if e.is_identity {
                identities[e.source] = i;
            }
        }
        if let Some(o) = identities.iter().position(|&i| i == usize::MAX) {
            return Err(GermError::IdentityMissing(objects[o].clone()));
        }
        let mut table = vec![Product::Undefined; n * n];
        let mut quot: HashMap<(ElemId, ElemId), Vec<ElemId>> = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                if elements[x].target != elements[y].source {
                    continue;
                }
                let p = product(x, y);
                table[x * n + y] = p;
                if let Product::Defined(z) = p {
                    quot.entry((x, z)).or_default().push(y);
                }
            }
        }
        let mut div = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                div[x * n + y] = match divides {
                    Some(f) => f(x, y),
                    None => quot.contains_key(&(x, y)),
                };
            }
        }
        let mut graph = Graph::new();
        for o in &objects {
            graph.add_object(o).expect("distinct object names");
        }
        let mut edge_of = vec![None; n];
        let mut elem_of = Vec::new();
        for (i, e) in elements.iter().enumerate() {
            if !e.is_identity {
                edge_of[i] = Some(
                    graph
                        .add_edge(&e.name, e.source, e.target)
                        .map_err(|_| GermError::UnknownElement(e.name.clone()))?,
                );
                elem_of.push(i);
            }
        }
        let index = elements.iter().enumerate().map(|(i, e)| (e.name.clone(), i)).collect();
        Ok(Germ {
            label: label.to_string(),
            objects,
            elements,
            table,
            div: Arc::new(div),
            quot,
            index,
            identities,
            bound,
            graph,
            edge_of,
            elem_of: Arc::new(elem_of),
            sbar: OnceLock::new(),
            normalizer: OnceLock::new(),
        })
    }

    /// Germ from an explicit product table; identity products are added
    /// wherever the table is silent.
    pub fn from_table(
        label: &str,
        objects: Vec<String>,
        elements: Vec<(String, ObjId, ObjId, bool)>,
        products: &[(ElemId, ElemId, ElemId)],
        inverses: &[(ElemId, ElemId)],
    ) -> Result<Germ, GermError> {
        let mut elems: Vec<Element> = elements
            .into_iter()
            .map(|(name, source, target, is_identity)| Element {
                name,
                source,
                target,
                is_identity,
                inverse: None,
                in_domain: true,
            })
            .collect();
        for (i, e) in elems.iter_mut().enumerate() {
            if e.is_identity {
                e.inverse = Some(i);
            }
        }
        for &(a, b) in inverses {
            elems[a].inverse = Some(b);
            elems[b].inverse = Some(a);
        }
        let explicit: HashMap<(ElemId, ElemId), ElemId> = products.iter().map(|&(a, b, c)| ((a, b), c)).collect();
        let snapshot = elems.clone();
        let product = |x: ElemId, y: ElemId| -> Product {
            if let Some(&z) = explicit.get(&(x, y)) {
                return Product::Defined(z);
            }
            if snapshot[x].is_identity {
                return Product::Defined(y);
            }
            if snapshot[y].is_identity {
                return Product::Defined(x);
            }
            Product::Undefined
        };
        Germ::new(label, objects, elems, &product, None, None)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, x: ElemId) -> &Element {
        &self.elements[x]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn name(&self, x: ElemId) -> &str {
        &self.elements[x].name
    }

    pub fn id(&self, name: &str) -> Option<ElemId> {
        self.index.get(name).copied()
    }

    pub fn identity(&self, obj: ObjId) -> ElemId {
        self.identities[obj]
    }

    pub fn is_identity(&self, x: ElemId) -> bool {
        self.elements[x].is_identity
    }

    pub fn is_invertible(&self, x: ElemId) -> bool {
        self.elements[x].inverse.is_some()
    }

    pub fn invertibles(&self) -> Vec<ElemId> {
        (0..self.len()).filter(|&x| self.is_invertible(x)).collect()
    }

    /// Elements the exhaustive checks quantify over.
    pub fn domain(&self) -> Vec<ElemId> {
        (0..self.len()).filter(|&x| self.elements[x].in_domain).collect()
    }

    pub fn composable(&self, x: ElemId, y: ElemId) -> bool {
        self.elements[x].target == self.elements[y].source
    }

    pub fn product(&self, x: ElemId, y: ElemId) -> Product {
        self.table[x * self.len() + y]
    }

    pub fn prod(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        match self.product(x, y) {
            Product::Defined(z) => Some(z),
            _ => None,
        }
    }

    /// `x ≼ y`: some z has `x•z = y`.
    pub fn divides(&self, x: ElemId, y: ElemId) -> bool {
        self.div[x * self.len() + y]
    }

    /// Strict `x ⪆ y`: x divides y but not conversely.
    pub fn preorder_ge(&self, x: ElemId, y: ElemId) -> bool {
        self.divides(x, y) && !self.divides(y, x)
    }

    /// Reflexive companion of `⪆`.
    pub fn preorder_geq(&self, x: ElemId, y: ElemId) -> bool {
        self.divides(x, y)
    }

    /// All z in the window with `x•z = y`.
    pub fn quotients(&self, x: ElemId, y: ElemId) -> &[ElemId] {
        self.quot.get(&(x, y)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `x =^× y`: `x = y•e` for an invertible e.
    pub fn eq_up_to_invertible(&self, x: ElemId, y: ElemId) -> bool {
        x == y || self.quotients(y, x).iter().any(|&e| self.is_invertible(e))
    }

    pub fn render(&self, w: &[ElemId]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&x| self.name(x)).collect::<Vec<_>>().join("·")
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<ElemId>, GermError> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '·').filter(|t| !t.is_empty()) {
            let x = self.id(tok).ok_or_else(|| GermError::UnknownElement(tok.to_string()))?;
            if let Some(&prev) = out.last() {
                if !self.composable(prev, x) {
                    return Err(GermError::NotComposable(self.name(prev).into(), tok.into()));
                }
            }
            out.push(x);
        }
        Ok(out.into_iter().filter(|&x| !self.is_identity(x)).collect())
    }

    // ---- axioms ----

    pub fn check_axioms(&self) -> AxiomReport {
        let mut r = AxiomReport::default();
        let dom = self.domain();
        let first = |slot: &mut Option<Vec<ElemId>>, w: Vec<ElemId>| {
            if slot.is_none() {
                *slot = Some(w);
            }
        };
        for &a in &dom {
            let e = &self.elements[a];
            let (ix, iy) = (self.identity(e.source), self.identity(e.target));
            if self.prod(ix, a) != Some(a) || self.prod(a, iy) != Some(a) {
                first(&mut r.identity, vec![a]);
            }
            if let Some(b) = e.inverse {
                if self.prod(a, b) != Some(ix) || self.prod(b, a) != Some(iy) {
                    first(&mut r.inverses, vec![a, b]);
                }
            }
        }
        for &a in &dom {
            for &b in &dom {
                if !self.composable(a, b) {
                    continue;
                }
                match self.product(a, b) {
                    Product::Defined(c) => {
                        let (ec, ea, eb) = (&self.elements[c], &self.elements[a], &self.elements[b]);
                        if ec.source != ea.source || ec.target != eb.target {
                            first(&mut r.endpoint, vec![a, b]);
                        }
                    }
                    Product::Beyond => r.beyond_window += 1,
                    Product::Undefined => {}
                }
                for &g in &dom {
                    if !self.composable(b, g) {
                        continue;
                    }
                    let ab = self.product(a, b);
                    let bg = self.product(b, g);
                    let abg = match ab {
                        Product::Defined(x) => self.product(x, g),
                        other => other,
                    };
                    let a_bg = match bg {
                        Product::Defined(x) => self.product(a, x),
                        other => other,
                    };
                    if matches!(abg, Product::Beyond) || matches!(a_bg, Product::Beyond) {
                        r.beyond_window += 1;
                        continue;
                    }
                    let (ab_d, bg_d) = (matches!(ab, Product::Defined(_)), matches!(bg, Product::Defined(_)));
                    if ab_d && bg_d && abg != a_bg {
                        first(&mut r.interchange, vec![a, b, g]);
                    }
                    if ab_d && matches!(abg, Product::Defined(_)) && !bg_d {
                        first(&mut r.left_associative, vec![a, b, g]);
                    }
                    if bg_d && matches!(a_bg, Product::Defined(_)) && !ab_d {
                        first(&mut r.right_associative, vec![a, b, g]);
                    }
                    if b != g && ab_d && self.composable(a, g) {
                        if let (Product::Defined(x), Product::Defined(y)) = (ab, self.product(a, g)) {
                            if x == y {
                                first(&mut r.left_cancellative, vec![a, b, g]);
                            }
                        }
                    }
                }
            }
        }
        r
    }

    // ---- I and J sets ----

    /// `I(a,b) = {a•g : g ≼ b, a•g defined}` over the window.
    pub fn i_set(&self, a: ElemId, b: ElemId) -> BTreeSet<ElemId> {
        (0..self.len()).filter(|&g| self.divides(g, b)).filter_map(|g| self.prod(a, g)).collect()
    }

    /// `J(a,b) = {g : a•g defined, g ≼ b}`.
    pub fn j_set(&self, a: ElemId, b: ElemId) -> BTreeSet<ElemId> {
        (0..self.len()).filter(|&g| self.divides(g, b) && self.prod(a, g).is_some()).collect()
    }

    /// The ≼-maximum of `I(a,b)`, if any.
    pub fn greatest_i(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        let i = self.i_set(a, b);
        i.iter().copied().find(|&m| i.iter().all(|&e| self.divides(e, m)))
    }

    /// Greatest absorption with its split: `(a•t, t, r)` where `b = t•r`.
    pub fn greatest_i_split(&self, a: ElemId, b: ElemId) -> Option<(ElemId, ElemId, ElemId)> {
        let m = self.greatest_i(a, b)?;
        for t in self.quotients(a, m) {
            if self.divides(*t, b) {
                if let Some(&r) = self.quotients(*t, b).first() {
                    return Some((m, *t, r));
                }
            }
        }
        None
    }

    pub fn i_set_totally_preordered(&self, a: ElemId, b: ElemId) -> bool {
        let i = self.i_set(a, b);
        i.iter().all(|&x| i.iter().all(|&y| self.divides(x, y) || self.divides(y, x)))
    }

    // ---- reductions ----

    /// All reductions of the pair `(x, y)`.
    pub fn reductions_of(&self, x: ElemId, y: ElemId) -> Vec<GermReduction> {
        let mut out = Vec::new();
        if self.is_identity(x) || self.is_identity(y) || !self.composable(x, y) {
            return out;
        }
        for y1 in 0..self.len() {
            if !self.divides(y1, y) {
                continue;
            }
            let Some(xy1) = self.prod(x, y1) else { continue };
            if !self.preorder_ge(x, xy1) {
                continue;
            }
            for &y2 in self.quotients(y1, y) {
                out.push(GermReduction { lhs: (x, y), split: (y1, y2), rhs: (xy1, y2) });
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_reducible(&self, x: ElemId, y: ElemId) -> bool {
        !self.reductions_of(x, y).is_empty()
    }

    fn rhs_irreducible(&self, r: &GermReduction) -> bool {
        let (u, v) = r.rhs;
        self.is_identity(v) || self.is_identity(u) || !self.is_reducible(u, v)
    }

    /// `(S, S̄)` over domain pairs.
    pub fn build_reductions(&self) -> (Vec<GermReduction>, Vec<GermReduction>) {
        let dom = self.domain();
        let mut all = Vec::new();
        for &x in &dom {
            for &y in &dom {
                all.extend(self.reductions_of(x, y));
            }
        }
        let bar = all.iter().filter(|r| self.rhs_irreducible(r)).cloned().collect();
        (all, bar)
    }

    /// S̄ over every window pair; used for normalization.
    fn sbar_window(&self) -> &[GermReduction] {
        self.sbar.get_or_init(|| {
            let mut out = Vec::new();
            for x in 0..self.len() {
                for y in 0..self.len() {
                    out.extend(self.reductions_of(x, y).into_iter().filter(|r| self.rhs_irreducible(r)));
                }
            }
            out
        })
    }

    // ---- germ words as paths ----

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn to_path(&self, base: ObjId, w: &[ElemId]) -> PathWord {
        let letters: Vec<EdgeId> = w.iter().filter_map(|&x| self.edge_of[x]).collect();
        PathWord { base, letters }
    }

    pub fn from_path(&self, w: &PathWord) -> Vec<ElemId> {
        w.letters.iter().map(|&e| self.elem_of[e]).collect()
    }

    fn base_of(&self, w: &[ElemId]) -> ObjId {
        w.first().map(|&x| self.elements[x].source).unwrap_or(0)
    }

    /// Shorter first; at equal length the first differing entry decides,
    /// the word whose entry is a strict multiple being smaller.
    pub fn term_order(&self) -> TermOrder {
        let div = Arc::clone(&self.div);
        let elem_of = Arc::clone(&self.elem_of);
        let n = self.len();
        let cmp = move |u: &PathWord, v: &PathWord| -> Option<Ordering> {
            if u.len() != v.len() {
                return Some(u.len().cmp(&v.len()));
            }
            for (&a, &b) in u.letters.iter().zip(&v.letters) {
                if a == b {
                    continue;
                }
                let (x, y) = (elem_of[a], elem_of[b]);
                let (xy, yx) = (div[x * n + y], div[y * n + x]);
                return match (xy, yx) {
                    (true, false) => Some(Ordering::Greater),
                    (false, true) => Some(Ordering::Less),
                    _ => None,
                };
            }
            Some(Ordering::Equal)
        };
        TermOrder::Custom { name: "germ-divisibility".into(), cmp: Arc::new(cmp) }
    }

    /// Invertibles as one-letter words, closed under the partial product.
    pub fn registry(&self) -> InvertibleRegistry {
        let pairs: Vec<(PathWord, PathWord)> = (0..self.len())
            .filter(|&x| !self.is_identity(x))
            .filter_map(|x| {
                self.elements[x].inverse.map(|y| {
                    let (e, f) = (&self.elements[x], &self.elements[y]);
                    (self.to_path(e.source, &[x]), self.to_path(f.source, &[y]))
                })
            })
            .collect();
        let product = |u: &PathWord, v: &PathWord| -> Option<PathWord> {
            let (x, y) = (self.eval(u)?, self.eval(v)?);
            let z = self.prod(x, y)?;
            Some(self.to_path(self.elements[z].source, &[z]))
        };
        registry_closure(&self.graph, &pairs, DEFAULT_REGISTRY_BOUND, &product).expect("finite invertibles")
    }

    /// Product of all entries of a path, when defined.
    pub fn eval(&self, w: &PathWord) -> Option<ElemId> {
        let mut acc = self.identity(w.base);
        for x in self.from_path(w) {
            acc = self.prod(acc, x)?;
        }
        Some(acc)
    }

    fn eq_oracle(self: &Arc<Self>) -> crate::rewrite::EqOracle {
        let g = Arc::clone(self);
        Arc::new(move |u: &PathWord, v: &PathWord| {
            if u == v {
                return Some(true);
            }
            match (g.eval(u), g.eval(v)) {
                (Some(a), Some(b)) => Some(a == b),
                _ => Some(false),
            }
        })
    }

    fn rules_system(&self, kind: SystemKind) -> ReductionSystem {
        let mut s = ReductionSystem::new(self.graph.clone(), self.term_order());
        let mut seen = BTreeSet::new();
        let mut add = |s: &mut ReductionSystem, lhs: Vec<ElemId>, rhs: Vec<ElemId>| {
            let base = self.base_of(&lhs);
            let rhs: Vec<ElemId> = rhs.into_iter().filter(|&x| !self.is_identity(x)).collect();
            if seen.insert((lhs.clone(), rhs.clone())) {
                let _ = s.add_rule(self.to_path(base, &lhs), self.to_path(base, &rhs));
            }
        };
        if kind == SystemKind::WithProducts {
            for x in 0..self.len() {
                for y in 0..self.len() {
                    if self.is_identity(x) || self.is_identity(y) {
                        continue;
                    }
                    if let Some(z) = self.prod(x, y) {
                        add(&mut s, vec![x, y], vec![z]);
                    }
                }
            }
        }
        for r in self.sbar_window() {
            add(&mut s, vec![r.lhs.0, r.lhs.1], vec![r.rhs.0, r.rhs.1]);
        }
        s.with_registry(self.registry())
    }

    fn system(self: &Arc<Self>, kind: SystemKind, strict: bool) -> ReductionSystem {
        let congruence =
            if strict { Congruence::Equality } else { Congruence::Deformation { eq: Some(self.eq_oracle()) } };
        self.rules_system(kind).with_congruence(congruence)
    }

    fn outcome_of(self: &Arc<Self>, sys: &ReductionSystem, amb: &Ambiguity, fuel: usize) -> AmbiguityOutcome {
        let rep = sys.resolve(amb, fuel);
        let word = self.from_path(&sys.ambiguity_word(amb));
        let (outcome, left, right, chain) = match &rep.status {
            ResolutionStatus::Resolved { left, right, chain } => {
                let l = self.from_path(left.last().unwrap());
                let r = self.from_path(right.last().unwrap());
                let strict = l == r && chain.iter().all(|e| e.is_empty());
                // witness read from the right reduct towards the left one
                let chain = if strict {
                    chain.iter().map(|e| self.identity(e.base)).collect()
                } else {
                    self.deformation_chain(&r, &l).unwrap_or_default()
                };
                (if strict { Outcome::Resolved } else { Outcome::ResolvedUpToDeformation }, l, r, chain)
            }
            ResolutionStatus::Unresolved { left, right } => {
                (Outcome::Unresolved, self.from_path(left), self.from_path(right), Vec::new())
            }
            ResolutionStatus::FuelExhausted => (Outcome::FuelExhausted, Vec::new(), Vec::new(), Vec::new()),
        };
        AmbiguityOutcome { word, kind: amb.kind, outcome, left, right, chain }
    }

    /// Ambiguities `(a, b, c)` of the product presentation `ab -> a•b`,
    /// resolved with product and S̄ reductions.
    pub fn presentation_sweep(self: &Arc<Self>, strict: bool, fuel: usize) -> Vec<AmbiguityOutcome> {
        let sys = self.system(SystemKind::WithProducts, strict);
        let by_lhs: HashMap<(EdgeId, EdgeId), usize> = sys
            .rules()
            .iter()
            .filter(|r| r.rhs.len() <= 1)
            .map(|r| ((r.lhs.letters[0], r.lhs.letters[1]), r.id))
            .collect();
        let rule_for =
            |x: ElemId, y: ElemId| -> Option<usize> { by_lhs.get(&(self.edge_of[x]?, self.edge_of[y]?)).copied() };
        let dom: Vec<ElemId> = self.domain().into_iter().filter(|&x| !self.is_identity(x)).collect();
        let mut out = Vec::new();
        for &a in &dom {
            for &b in &dom {
                if self.prod(a, b).is_none() {
                    continue;
                }
                for &c in &dom {
                    if self.prod(b, c).is_none() {
                        continue;
                    }
                    let (Some(sigma), Some(tau)) = (rule_for(a, b), rule_for(b, c)) else { continue };
                    let src = |x: ElemId| self.elements[x].source;
                    let amb = Ambiguity {
                        kind: AmbiguityKind::Overlap,
                        sigma,
                        tau,
                        a: self.to_path(src(a), &[a]),
                        b: self.to_path(src(b), &[b]),
                        c: self.to_path(src(c), &[c]),
                    };
                    out.push(self.outcome_of(&sys, &amb, fuel));
                }
            }
        }
        out
    }

    /// Ambiguities of S̄ whose entries lie in the domain.
    pub fn reduction_sweep(self: &Arc<Self>, strict: bool, fuel: usize) -> Vec<AmbiguityOutcome> {
        let sys = self.system(SystemKind::Bar, strict);
        let dom: BTreeSet<ElemId> = self.domain().into_iter().collect();
        sys.ambiguities()
            .iter()
            .filter(|amb| self.from_path(&sys.ambiguity_word(amb)).iter().all(|x| dom.contains(x)))
            .map(|amb| self.outcome_of(&sys, amb, fuel))
            .collect()
    }

    /// Runs both ambiguity sweeps and the greatest-I oracle.
    pub fn garside_check(self: &Arc<Self>, strict: bool, fuel: usize) -> GarsideVerdict {
        let axioms = self.check_axioms();
        let (all, bar) = self.build_reductions();
        let presentation_sweep = self.presentation_sweep(strict, fuel);
        let reduction_sweep = self.reduction_sweep(strict, fuel);
        let dom = self.domain();
        let mut greatest_i_missing = None;
        'outer: for &a in &dom {
            for &b in &dom {
                if self.composable(a, b) && self.greatest_i(a, b).is_none() {
                    greatest_i_missing = Some((a, b));
                    break 'outer;
                }
            }
        }
        let first_bad = |sweep: &[AmbiguityOutcome], o: Outcome| {
            sweep.iter().find(|a| a.outcome == o).map(|a| self.render(&a.word))
        };
        let verdict = if !axioms.is_germ() {
            Verdict::NotGarside("germ axioms fail".into())
        } else if let Some(w) = first_bad(&reduction_sweep, Outcome::FuelExhausted)
            .or_else(|| first_bad(&presentation_sweep, Outcome::FuelExhausted))
        {
            Verdict::Inconclusive(format!("fuel exhausted at {w}"))
        } else {
            let main = reduction_sweep.iter().all(|a| a.outcome.is_resolved());
            let gi = greatest_i_missing.is_none();
            if main != gi && !strict {
                Verdict::OracleDisagreement(format!(
                    "reduction sweep {} but greatest-I {}",
                    if main { "resolves" } else { "fails" },
                    if gi { "exists" } else { "is missing" }
                ))
            } else if let Some(w) = first_bad(&reduction_sweep, Outcome::Unresolved) {
                Verdict::NotGarside(format!("unresolved ambiguity {w}"))
            } else if let Some((a, b)) = greatest_i_missing {
                Verdict::NotGarside(format!("no greatest I at ({}, {})", self.name(a), self.name(b)))
            } else if let Some(w) = first_bad(&presentation_sweep, Outcome::Unresolved) {
                Verdict::NotGarside(format!("unresolved ambiguity {w}"))
            } else {
                Verdict::Garside
            }
        };
        GarsideVerdict {
            axioms,
            strict,
            reductions: all.len(),
            reductions_bar: bar.len(),
            presentation_sweep,
            reduction_sweep,
            greatest_i_missing,
            verdict,
        }
    }

    /// Greedy normal form by S̄ reductions.
    pub fn upsilon_normalize(self: &Arc<Self>, w: &[ElemId], fuel: usize) -> Result<Vec<ElemId>, GermError> {
        self.upsilon_normalize_with(w, fuel, Strategy::Leftmost)
    }

    pub fn upsilon_normalize_with(
        self: &Arc<Self>,
        w: &[ElemId],
        fuel: usize,
        strategy: Strategy,
    ) -> Result<Vec<ElemId>, GermError> {
        let w: Vec<ElemId> = w.iter().copied().filter(|&x| !self.is_identity(x)).collect();
        let sys = self.normalizer();
        let p = self.to_path(self.base_of(&w), &w);
        let nf = sys.normalize_with(&p, fuel, strategy).map_err(|_| GermError::FuelExhausted(fuel))?;
        Ok(self.from_path(&nf))
    }

    fn normalizer(&self) -> &ReductionSystem {
        self.normalizer.get_or_init(|| self.rules_system(SystemKind::Bar))
    }

    /// Adjacent pairs all irreducible.
    pub fn is_upsilon_normal(&self, w: &[ElemId]) -> bool {
        w.windows(2).all(|p| !self.is_reducible(p[0], p[1]))
    }

    /// Deformation chain between two germ words, if any.
    pub fn deformation_chain(self: &Arc<Self>, a: &[ElemId], b: &[ElemId]) -> Option<Vec<ElemId>> {
        let sys = self.normalizer();
        let eq = self.eq_oracle();
        let entries = |w: &[ElemId]| -> Vec<PathWord> {
            w.iter().map(|&x| self.to_path(self.elements[x].source, &[x])).collect()
        };
        let chain =
            crate::rewrite::deformation_equal(&self.graph, sys.registry(), eq.as_ref(), &entries(a), &entries(b))
                .ok()??;
        Some(chain.iter().map(|e| self.eval(e).unwrap_or_else(|| self.identity(e.base))).collect())
    }

    /// Checks the I-law for `f` over domain triples with `a•b` defined.
    pub fn i_law_check(&self, f: &dyn Fn(ElemId, ElemId) -> Option<ElemId>) -> ILawReport {
        let dom = self.domain();
        let mut report = ILawReport { sharp: true, up_to_invertibles: true, witness: None, undefined_at: None };
        for &a in &dom {
            for &b in &dom {
                let Some(ab) = self.prod(a, b) else { continue };
                for &c in &dom {
                    if !self.composable(b, c) {
                        continue;
                    }
                    let lhs = f(b, c).and_then(|bc| f(a, bc));
                    let rhs = f(ab, c);
                    let (Some(l), Some(r)) = (lhs, rhs) else {
                        report.sharp = false;
                        report.up_to_invertibles = false;
                        report.undefined_at.get_or_insert((b, c));
                        continue;
                    };
                    if l != r {
                        report.sharp = false;
                        if !(self.eq_up_to_invertible(l, r) && self.eq_up_to_invertible(r, l)) {
                            report.up_to_invertibles = false;
                            report.witness.get_or_insert((a, b, c));
                        }
                    }
                    if !report.sharp && report.witness.is_none() {
                        report.witness = None;
                    }
                }
            }
        }
        report
    }

    /// Irreducible under S ⇔ every J-set member invertible; first
    /// counterexample pair.
    pub fn j_invert_counterexample(&self) -> Option<(ElemId, ElemId)> {
        let dom = self.domain();
        for &a in &dom {
            for &b in &dom {
                if !self.composable(a, b) || self.is_identity(a) || self.is_identity(b) {
                    continue;
                }
                let irreducible = !self.is_reducible(a, b);
                let j_invertible = self.j_set(a, b).iter().all(|&g| self.is_invertible(g));
                if irreducible != j_invertible {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every domain I-set totally preordered by ≼.
    pub fn all_i_sets_totally_preordered(&self) -> bool {
        let dom = self.domain();
        dom.iter().all(|&a| dom.iter().all(|&b| !self.composable(a, b) || self.i_set_totally_preordered(a, b)))
    }

    /// Germ file text for finite germs.
    pub fn to_text(&self) -> String {
        let mut s = format!("germ {}\n", self.label);
        let names: Vec<&str> = self.elements.iter().map(|e| e.name.as_str()).collect();
        let _ = writeln!(s, "elements: {}", names.join(" "));
        let _ = writeln!(s, "identity: {}", self.name(self.identity(0)));
        for (i, e) in self.elements.iter().enumerate() {
            if let Some(j) = e.inverse {
                if i < j {
                    let _ = writeln!(s, "inv {} : {}", e.name, self.name(j));
                }
            }
        }
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.is_identity(x) || self.is_identity(y) {
                    continue;
                }
                if let Some(z) = self.prod(x, y) {
                    let _ = writeln!(s, "prod {} {} = {}", self.name(x), self.name(y), self.name(z));
                }
            }
        }
        s
    }
}

/// Parses the single-object germ file format.
pub fn parse_germ(text: &str) -> Result<Germ, GermError> {
    let err = |line: usize, message: &str| GermError::Parse { line, message: message.to_string() };
    let mut label = String::from("germ");
    let mut names: Vec<String> = Vec::new();
    let mut identity: Option<(usize, String)> = None;
    let mut invs: Vec<(usize, String, String)> = Vec::new();
    let mut prods: Vec<(usize, String, String, String)> = Vec::new();
    let mut header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "germ" => {
                header = true;
                if toks.len() > 1 {
                    label = toks[1..].join(" ");
                }
            }
            "elements:" => names = toks[1..].iter().map(|s| s.to_string()).collect(),
            "identity:" if toks.len() == 2 => identity = Some((line_no, toks[1].to_string())),
            "inv" => {
                let rest: Vec<&str> = toks[1..].iter().copied().filter(|t| *t != ":").collect();
                if rest.len() != 2 {
                    return Err(err(line_no, "expected `inv X : Y`"));
                }
                invs.push((line_no, rest[0].to_string(), rest[1].to_string()));
            }
            "prod" => {
                if toks.len() != 5 || toks[3] != "=" {
                    return Err(err(line_no, "expected `prod X Y = Z`"));
                }
                prods.push((line_no, toks[1].into(), toks[2].into(), toks[4].into()));
            }
            other => return Err(err(line_no, &format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(err(1, "missing `germ` header"));
    }
    let (id_line, id_name) = identity.ok_or_else(|| err(1, "missing `identity:` line"))?;
    let find = |line: usize, n: &str| {
        names.iter().position(|x| x == n).ok_or_else(|| err(line, &format!("unknown element `{n}`")))
    };
    let id = find(id_line, &id_name)?;
    let elements = names.iter().enumerate().map(|(i, n)| (n.clone(), 0, 0, i == id)).collect();
    let mut products = Vec::new();
    for (line, a, b, c) in &prods {
        products.push((find(*line, a)?, find(*line, b)?, find(*line, c)?));
    }
    let mut inverses = Vec::new();
    for (line, a, b) in &invs {
        inverses.push((find(*line, a)?, find(*line, b)?));
    }
    Germ::from_table(&label, vec!["*".into()], elements, &products, &inverses)
}

/// How products are decided when building a germ from a family of words.
pub enum Definedness<'a> {
    /// `NF(ab)` in the family and lengths add.
    InFamilyTight,
    /// `NF(ab)` in the family.
    InFamily,
    Hook(&'a dyn Fn(&PathWord, &PathWord, &PathWord) -> bool),
}

/// Germ on a family of irreducible words with `a•b := NF(ab)` when the
/// definedness predicate accepts.
pub fn build_upsilon(
    label: &str,
    base: &ReductionSystem,
    family: &[PathWord],
    definedness: Definedness<'_>,
    fuel: usize,
) -> Result<Germ, GermError> {
    let g = base.graph();
    for o in 0..g.objects().len() {
        if !family.contains(&PathWord::identity(o)) {
            return Err(GermError::IdentityMissing(g.objects()[o].clone()));
        }
    }
    for w in family {
        if !base.is_irreducible(w) {
            return Err(GermError::FamilyNotIrreducible(g.render(w)));
        }
    }
    let index: HashMap<&PathWord, ElemId> = family.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let elements: Vec<Element> = family
        .iter()
        .map(|w| Element {
            name: g.render(w),
            source: g.source(w),
            target: g.target(w),
            is_identity: w.is_empty(),
            inverse: w.is_empty().then_some(index[w]),
            in_domain: true,
        })
        .collect();
    let mut table: HashMap<(ElemId, ElemId), ElemId> = HashMap::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            let Ok(ab) = g.compose(a, b) else { continue };
            let nf = base.normalize(&ab, fuel).map_err(|_| GermError::FuelExhausted(fuel))?;
            let Some(&k) = index.get(&nf) else { continue };
            let ok = a.is_empty()
                || b.is_empty()
                || match &definedness {
                    Definedness::InFamilyTight => nf.len() == a.len() + b.len(),
                    Definedness::InFamily => true,
                    Definedness::Hook(f) => f(a, b, &nf),
                };
            if ok {
                table.insert((i, j), k);
            }
        }
    }
    let product = |x: ElemId, y: ElemId| table.get(&(x, y)).map_or(Product::Undefined, |&z| Product::Defined(z));
    Germ::new(label, g.objects().to_vec(), elements, &product, None, None)
}
