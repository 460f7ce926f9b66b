//! Reduction systems on path words, deformation by invertibles, ambiguity
//! analysis and completion.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::paths::{find_factors, EdgeId, FactorOccurrence, Graph, PathWord};
use crate::presentation::{InvertibleRegistry, OrderSpec, Presentation};

pub const DEFAULT_FUEL: usize = 100_000;
pub const DEFAULT_BFS_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(usize),
    #[error("rule {lhs} -> {rhs} is not decreasing under the term order")]
    NotDecreasing { lhs: String, rhs: String },
    #[error("empty left-hand side")]
    EmptyLhs,
    #[error("rule sides have different endpoints")]
    EndpointMismatch,
    #[error("cannot orient {0} = {1}")]
    Unorientable(String, String),
    #[error("equality oracle undecided")]
    EqualityOracleUndecided,
    #[error("congruence not admissible: {0} is a deformation of a left-hand side but irreducible")]
    NotAdmissible(String),
}

pub type Comparator = Arc<dyn Fn(&PathWord, &PathWord) -> Option<Ordering> + Send + Sync>;
pub type EqOracle = Arc<dyn Fn(&PathWord, &PathWord) -> Option<bool> + Send + Sync>;

#[derive(Clone)]
pub enum TermOrder {
    /// Length first, then lexicographic; `rank[e]` is the position of edge `e`.
    DegLex {
        rank: Vec<usize>,
    },
    Custom {
        name: String,
        cmp: Comparator,
    },
}

impl fmt::Debug for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermOrder::DegLex { rank } => write!(f, "DegLex({rank:?})"),
            TermOrder::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl TermOrder {
    /// `ranking` lists edges from smallest to largest.
    pub fn deglex(ranking: &[EdgeId]) -> Self {
        let mut rank = vec![0; ranking.len()];
        for (pos, &e) in ranking.iter().enumerate() {
            rank[e] = pos;
        }
        TermOrder::DegLex { rank }
    }

    pub fn from_spec(spec: &OrderSpec) -> Self {
        match spec {
            OrderSpec::DegLex(r) => TermOrder::deglex(r),
        }
    }

    pub fn compare(&self, u: &PathWord, v: &PathWord) -> Option<Ordering> {
        match self {
            TermOrder::DegLex { rank } => {
                let by_len = u.len().cmp(&v.len());
                if by_len != Ordering::Equal {
                    return Some(by_len);
                }
                for (&x, &y) in u.letters.iter().zip(&v.letters) {
                    if x != y {
                        return Some(rank[x].cmp(&rank[y]));
                    }
                }
                if u.base != v.base {
                    return None;
                }
                Some(Ordering::Equal)
            }
            TermOrder::Custom { cmp, .. } => cmp(u, v),
        }
    }

    pub fn less(&self, u: &PathWord, v: &PathWord) -> bool {
        self.compare(u, v) == Some(Ordering::Less)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: usize,
    pub lhs: PathWord,
    pub rhs: PathWord,
}

#[derive(Clone)]
pub enum Congruence {
    /// Plain equality of words.
    Equality,
    /// Deformation by registry invertibles; `eq` decides equality of short
    /// words in the quotient (defaults to normal forms of the system).
    Deformation { eq: Option<EqOracle> },
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Congruence::Equality => write!(f, "Equality"),
            Congruence::Deformation { .. } => write!(f, "Deformation"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// Overlap: `W_sigma = AB`, `W_tau = BC`. Inclusion: `W_sigma = B`, `W_tau = ABC`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub sigma: usize,
    pub tau: usize,
    pub a: PathWord,
    pub b: PathWord,
    pub c: PathWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionStatus {
    /// Both reducts reach deformation-equal words; `chain` is the witnessing
    /// sequence of invertibles (empty when justified by a recorded fact).
    Resolved {
        left: Vec<PathWord>,
        right: Vec<PathWord>,
        chain: Vec<PathWord>,
    },
    Unresolved {
        left: PathWord,
        right: PathWord,
    },
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub ambiguity: Ambiguity,
    pub status: ResolutionStatus,
}

impl ResolutionReport {
    pub fn is_resolved(&self) -> bool {
        matches!(self.status, ResolutionStatus::Resolved { .. })
    }

    /// Resolved with identical endpoints, no invertibles needed.
    pub fn is_strict(&self) -> bool {
        match &self.status {
            ResolutionStatus::Resolved { left, right, chain } => {
                left.last() == right.last() && chain.iter().all(|e| e.is_empty())
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionFailure {
    #[error("cannot orient {0} = {1}")]
    Unorientable(String, String),
    #[error("rule budget exhausted")]
    RuleBudget,
    #[error("fuel exhausted")]
    Fuel,
}

#[derive(Clone)]
pub struct ReductionSystem {
    graph: Graph,
    rules: Vec<Rule>,
    order: TermOrder,
    registry: InvertibleRegistry,
    congruence: Congruence,
    facts: Vec<(PathWord, PathWord)>,
    next_id: usize,
    by_first: HashMap<EdgeId, Vec<usize>>,
    bfs_cap: usize,
}

impl fmt::Debug for ReductionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionSystem").field("rules", &self.rules).field("order", &self.order).finish()
    }
}

impl ReductionSystem {
    pub fn new(graph: Graph, order: TermOrder) -> Self {
        let registry = InvertibleRegistry::trivial(graph.objects().len());
        ReductionSystem {
            graph,
            rules: Vec::new(),
            order,
            registry,
            congruence: Congruence::Deformation { eq: None },
            facts: Vec::new(),
            next_id: 0,
            by_first: HashMap::new(),
            bfs_cap: DEFAULT_BFS_CAP,
        }
    }

    /// Orients every relation of `p` by its declared order.
    pub fn from_presentation(p: &Presentation) -> Result<Self, RewriteError> {
        let mut s = ReductionSystem::new(p.graph.clone(), TermOrder::from_spec(&p.order));
        for (l, r) in &p.relations {
            match s.order.compare(l, r) {
                Some(Ordering::Greater) => s.add_rule(l.clone(), r.clone())?,
                Some(Ordering::Less) => s.add_rule(r.clone(), l.clone())?,
                _ => return Err(RewriteError::Unorientable(s.render(l), s.render(r))),
            };
        }
        Ok(s)
    }

    pub fn with_registry(mut self, registry: InvertibleRegistry) -> Self {
        self.registry = registry;
        self
    }

    pub fn with_congruence(mut self, congruence: Congruence) -> Self {
        self.congruence = congruence;
        self
    }

    pub fn with_bfs_cap(mut self, cap: usize) -> Self {
        self.bfs_cap = cap;
        self
    }

    pub fn set_congruence(&mut self, congruence: Congruence) {
        self.congruence = congruence;
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn registry(&self) -> &InvertibleRegistry {
        &self.registry
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn facts(&self) -> &[(PathWord, PathWord)] {
        &self.facts
    }

    pub fn rule(&self, id: usize) -> Option<&Rule> {
        // rules stay sorted by id
        self.rules.binary_search_by_key(&id, |r| r.id).ok().map(|i| &self.rules[i])
    }

    pub fn render(&self, w: &PathWord) -> String {
        self.graph.render(w)
    }

    pub fn render_rule(&self, r: &Rule) -> String {
        format!("{} -> {}", self.render(&r.lhs), self.render(&r.rhs))
    }

    pub fn add_rule(&mut self, lhs: PathWord, rhs: PathWord) -> Result<usize, RewriteError> {
        if lhs.is_empty() {
            return Err(RewriteError::EmptyLhs);
        }
        if self.graph.source(&lhs) != self.graph.source(&rhs) || self.graph.target(&lhs) != self.graph.target(&rhs) {
            return Err(RewriteError::EndpointMismatch);
        }
        if !self.order.less(&rhs, &lhs) {
            return Err(RewriteError::NotDecreasing { lhs: self.render(&lhs), rhs: self.render(&rhs) });
        }
        let id = self.next_id;
        self.next_id += 1;
        self.by_first.entry(lhs.letters[0]).or_default().push(self.rules.len());
        self.rules.push(Rule { id, lhs, rhs });
        Ok(id)
    }

    fn remove_rule(&mut self, id: usize) -> Rule {
        let pos = self.rules.iter().position(|r| r.id == id).expect("rule id");
        let r = self.rules.remove(pos);
        self.reindex();
        r
    }

    fn reindex(&mut self) {
        self.by_first.clear();
        for (i, r) in self.rules.iter().enumerate() {
            self.by_first.entry(r.lhs.letters[0]).or_default().push(i);
        }
    }

    fn matches_at<'a>(&'a self, w: &'a PathWord, pos: usize) -> impl Iterator<Item = usize> + 'a {
        let letters = &w.letters;
        let first = letters.get(pos).copied();
        let idx: &[usize] = match first.and_then(|f| self.by_first.get(&f)) {
            Some(v) => v,
            None => &[],
        };
        let tail = &letters[pos..];
        idx.iter().copied().filter(move |&i| tail.starts_with(&self.rules[i].lhs.letters))
    }

    fn apply(&self, w: &PathWord, rule_idx: usize, pos: usize) -> PathWord {
        let r = &self.rules[rule_idx];
        w.splice(FactorOccurrence { position: pos, length: r.lhs.len() }, &r.rhs)
    }

    /// All one-step rewrites, ordered by position then rule id.
    pub fn rewrite_once(&self, w: &PathWord) -> Vec<(usize, FactorOccurrence, PathWord)> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            for i in self.matches_at(w, pos) {
                let r = &self.rules[i];
                out.push((r.id, FactorOccurrence { position: pos, length: r.lhs.len() }, self.apply(w, i, pos)));
            }
        }
        out
    }

    fn step(&self, w: &PathWord, strategy: Strategy) -> Option<PathWord> {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..w.len()),
            Strategy::Rightmost => Box::new((0..w.len()).rev()),
        };
        for pos in positions {
            if let Some(i) = self.matches_at(w, pos).min_by_key(|&i| self.rules[i].id) {
                return Some(self.apply(w, i, pos));
            }
        }
        None
    }

    pub fn is_irreducible(&self, w: &PathWord) -> bool {
        (0..w.len()).all(|pos| self.matches_at(w, pos).next().is_none())
    }

    pub fn normalize(&self, w: &PathWord, fuel: usize) -> Result<PathWord, RewriteError> {
        self.normalize_with(w, fuel, Strategy::Leftmost)
    }

    pub fn normalize_with(&self, w: &PathWord, fuel: usize, strategy: Strategy) -> Result<PathWord, RewriteError> {
        let mut cur = w.clone();
        for _ in 0..fuel {
            match self.step(&cur, strategy) {
                Some(next) => cur = next,
                None => return Ok(cur),
            }
        }
        if self.is_irreducible(&cur) {
            Ok(cur)
        } else {
            Err(RewriteError::FuelExhausted(fuel))
        }
    }

    /// The sequence of words visited by the leftmost strategy, `w` first.
    pub fn normalize_traced(&self, w: &PathWord, fuel: usize) -> Result<Vec<PathWord>, RewriteError> {
        let mut trace = vec![w.clone()];
        for _ in 0..fuel {
            match self.step(trace.last().unwrap(), Strategy::Leftmost) {
                Some(next) => trace.push(next),
                None => return Ok(trace),
            }
        }
        if self.is_irreducible(trace.last().unwrap()) {
            Ok(trace)
        } else {
            Err(RewriteError::FuelExhausted(fuel))
        }
    }

    /// Every irreducible word of the given maximal length, in enumeration
    /// order. Irreducibles are closed under factors, so only irreducible
    /// prefixes are extended.
    pub fn irr_up_to(&self, max_len: usize) -> Vec<PathWord> {
        let g = &self.graph;
        let mut out: Vec<PathWord> = (0..g.objects().len()).map(PathWord::identity).collect();
        let mut layer: Vec<PathWord> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| PathWord { base: edge.source, letters: vec![e] })
            .filter(|w| self.is_irreducible(w))
            .collect();
        let mut len = 1;
        while len <= max_len && !layer.is_empty() {
            out.extend(layer.iter().cloned());
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &layer {
                let t = g.target(w);
                for (e, edge) in g.edges().iter().enumerate() {
                    if edge.source != t {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(e);
                    let cand = PathWord { base: w.base, letters };
                    // Only factors ending at the new letter can be new redexes.
                    let n = cand.len();
                    let fresh =
                        (0..n).all(|pos| self.matches_at(&cand, pos).all(|i| pos + self.rules[i].lhs.len() != n));
                    if fresh {
                        next.push(cand);
                    }
                }
            }
            layer = next;
            len += 1;
        }
        out
    }

    /// Every overlap and inclusion ambiguity, sorted and deduplicated.
    pub fn ambiguities(&self) -> Vec<Ambiguity> {
        let g = &self.graph;
        let mut out = Vec::new();
        let bucket = |e: EdgeId| self.by_first.get(&e).map(|v| v.as_slice()).unwrap_or(&[]);
        for s in &self.rules {
            let ls = &s.lhs.letters;
            for k in 1..ls.len() {
                for &ti in bucket(ls[ls.len() - k]) {
                    let t = &self.rules[ti];
                    let lt = &t.lhs.letters;
                    if k < lt.len() && ls[ls.len() - k..] == lt[..k] {
                        out.push(Ambiguity {
                            kind: AmbiguityKind::Overlap,
                            sigma: s.id,
                            tau: t.id,
                            a: s.lhs.slice(g, 0, ls.len() - k),
                            b: t.lhs.slice(g, 0, k),
                            c: t.lhs.slice(g, k, lt.len() - k),
                        });
                    }
                }
            }
        }
        for t in &self.rules {
            let lt = &t.lhs.letters;
            for pos in 0..lt.len() {
                for &si in bucket(lt[pos]) {
                    let s = &self.rules[si];
                    let ls = &s.lhs.letters;
                    if s.id == t.id || ls.len() > lt.len() - pos || lt[pos..pos + ls.len()] != ls[..] {
                        continue;
                    }
                    if ls.len() == lt.len() && s.id > t.id {
                        continue;
                    }
                    out.push(Ambiguity {
                        kind: AmbiguityKind::Inclusion,
                        sigma: s.id,
                        tau: t.id,
                        a: t.lhs.slice(g, 0, pos),
                        b: s.lhs.clone(),
                        c: t.lhs.slice(g, pos + ls.len(), lt.len() - pos - ls.len()),
                    });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// The shared word `ABC` of an ambiguity.
    pub fn ambiguity_word(&self, amb: &Ambiguity) -> PathWord {
        let ab = self.graph.compose(&amb.a, &amb.b).expect("ambiguity factors compose");
        self.graph.compose(&ab, &amb.c).expect("ambiguity factors compose")
    }

    /// The two one-step reducts of the shared word.
    pub fn reducts(&self, amb: &Ambiguity) -> (PathWord, PathWord) {
        let g = &self.graph;
        let s = self.rule(amb.sigma).expect("sigma");
        let t = self.rule(amb.tau).expect("tau");
        match amb.kind {
            AmbiguityKind::Overlap => {
                let left = g.compose(&s.rhs, &amb.c).unwrap();
                let right = g.compose(&amb.a, &t.rhs).unwrap();
                (left, right)
            }
            AmbiguityKind::Inclusion => {
                let left = g.compose(&g.compose(&amb.a, &s.rhs).unwrap(), &amb.c).unwrap();
                (left, t.rhs.clone())
            }
        }
    }

    fn entries(&self, w: &PathWord) -> Vec<PathWord> {
        (0..w.len()).map(|i| w.slice(&self.graph, i, 1)).collect()
    }

    fn default_eq(&self, u: &PathWord, v: &PathWord) -> Option<bool> {
        let pairs: Vec<(PathWord, PathWord)> = self
            .registry
            .elements()
            .iter()
            .filter_map(|e| self.registry.inverse_of(e).map(|i| (e.clone(), i.clone())))
            .filter(|(e, _)| !e.is_empty())
            .collect();
        let canon = |w: &PathWord| -> Option<PathWord> {
            let mut cur = w.clone();
            loop {
                let next = self.normalize(&crate::presentation::cancel_inverses(&cur, &pairs), DEFAULT_FUEL).ok()?;
                if next == cur {
                    return Some(cur);
                }
                cur = next;
            }
        };
        Some(canon(u)? == canon(v)?)
    }

    /// `u ≈ v` under the system's congruence, with the witnessing chain.
    pub fn approx_equal(&self, u: &PathWord, v: &PathWord) -> Result<Option<Vec<PathWord>>, RewriteError> {
        if u == v {
            let t = self.graph.target(u);
            return Ok(Some(
                vec![PathWord::identity(u.base); u.len()].into_iter().chain([PathWord::identity(t)]).collect(),
            ));
        }
        if self.facts.iter().any(|(a, b)| (a == u && b == v) || (a == v && b == u)) {
            return Ok(Some(Vec::new()));
        }
        match &self.congruence {
            Congruence::Equality => Ok(None),
            Congruence::Deformation { .. } if self.registry.is_trivial() => Ok(None),
            Congruence::Deformation { eq } => {
                let a = self.entries(u);
                let b = self.entries(v);
                match eq {
                    Some(eq) => deformation_equal(&self.graph, &self.registry, eq.as_ref(), &a, &b),
                    None => deformation_equal(&self.graph, &self.registry, &|x, y| self.default_eq(x, y), &a, &b),
                }
            }
        }
    }

    fn descendants(&self, start: &PathWord) -> (Vec<PathWord>, HashMap<PathWord, PathWord>, bool) {
        let mut seen: HashMap<PathWord, PathWord> = HashMap::new();
        let mut order = vec![start.clone()];
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone(), start.clone());
        let mut complete = true;
        while let Some(w) = queue.pop_front() {
            for (_, _, next) in self.rewrite_once(&w) {
                if seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= self.bfs_cap {
                    complete = false;
                    break;
                }
                seen.insert(next.clone(), w.clone());
                order.push(next.clone());
                queue.push_back(next);
            }
        }
        (order, seen, complete)
    }

    fn path_to(parents: &HashMap<PathWord, PathWord>, w: &PathWord) -> Vec<PathWord> {
        let mut out = vec![w.clone()];
        let mut cur = w.clone();
        while let Some(p) = parents.get(&cur) {
            if *p == cur {
                break;
            }
            out.push(p.clone());
            cur = p.clone();
        }
        out.reverse();
        out
    }

    /// Decides whether an ambiguity is resolvable up to the congruence:
    /// deterministic normal forms first, then a capped search over all
    /// reduction sequences from both reducts.
    pub fn resolve(&self, amb: &Ambiguity, fuel: usize) -> ResolutionReport {
        let (r1, r2) = self.reducts(amb);
        let report = |status| ResolutionReport { ambiguity: amb.clone(), status };
        let (t1, t2) = match (self.normalize_traced(&r1, fuel), self.normalize_traced(&r2, fuel)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return report(ResolutionStatus::FuelExhausted),
        };
        let (n1, n2) = (t1.last().unwrap().clone(), t2.last().unwrap().clone());
        match self.approx_equal(&n1, &n2) {
            Ok(Some(chain)) => return report(ResolutionStatus::Resolved { left: t1, right: t2, chain }),
            Ok(None) => {}
            Err(_) => return report(ResolutionStatus::FuelExhausted),
        }
        let (d1, p1, c1) = self.descendants(&r1);
        let (d2, p2, c2) = self.descendants(&r2);
        let set2: HashSet<&PathWord> = d2.iter().collect();
        if let Some(w) = d1.iter().find(|w| set2.contains(w)) {
            let chain = vec![PathWord::identity(w.base); w.len()]
                .into_iter()
                .chain([PathWord::identity(self.graph.target(w))])
                .collect();
            return report(ResolutionStatus::Resolved {
                left: Self::path_to(&p1, w),
                right: Self::path_to(&p2, w),
                chain,
            });
        }
        if matches!(self.congruence, Congruence::Deformation { .. })
            && (!self.registry.is_trivial() || !self.facts.is_empty())
        {
            let irr1: Vec<&PathWord> = d1.iter().filter(|w| self.is_irreducible(w)).collect();
            let irr2: Vec<&PathWord> = d2.iter().filter(|w| self.is_irreducible(w)).collect();
            for u in &irr1 {
                for v in &irr2 {
                    if let Ok(Some(chain)) = self.approx_equal(u, v) {
                        return report(ResolutionStatus::Resolved {
                            left: Self::path_to(&p1, u),
                            right: Self::path_to(&p2, v),
                            chain,
                        });
                    }
                }
            }
        }
        if !(c1 && c2) {
            return report(ResolutionStatus::FuelExhausted);
        }
        report(ResolutionStatus::Unresolved { left: n1, right: n2 })
    }

    pub fn resolve_all(&self, fuel: usize) -> Vec<ResolutionReport> {
        self.ambiguities().iter().map(|a| self.resolve(a, fuel)).collect()
    }

    pub fn is_confluent(&self, fuel: usize) -> bool {
        self.resolve_all(fuel).iter().all(ResolutionReport::is_resolved)
    }

    /// Checks that length-preserving deformations of each left-hand side
    /// stay reducible. Candidate entries are single edges.
    pub fn verify_admissible(&self) -> Result<(), RewriteError> {
        if self.registry.is_trivial() {
            return Ok(());
        }
        let g = &self.graph;
        for r in &self.rules {
            let entries = self.entries(&r.lhs);
            let mut stack: Vec<(Vec<EdgeId>, PathWord)> = vec![(Vec::new(), PathWord::identity(r.lhs.base))];
            while let Some((built, eps)) = stack.pop() {
                let i = built.len();
                if i == entries.len() {
                    if !eps.is_empty() {
                        continue;
                    }
                    let w = g.path_from(r.lhs.base, &built).expect("deformation composes");
                    if self.is_irreducible(&w) {
                        return Err(RewriteError::NotAdmissible(self.render(&w)));
                    }
                    continue;
                }
                for (e, edge) in g.edges().iter().enumerate() {
                    if edge.source != g.target(&eps) {
                        continue;
                    }
                    let b = PathWord { base: edge.source, letters: vec![e] };
                    for next in self.registry.elements() {
                        if g.source(next) != g.target(&entries[i]) || g.target(next) != edge.target {
                            continue;
                        }
                        let lhs = g.compose(&eps, &b).unwrap();
                        let rhs = g.compose(&entries[i], next).unwrap();
                        if self.default_eq(&lhs, &rhs) == Some(true) {
                            let mut nb = built.clone();
                            nb.push(e);
                            stack.push((nb, next.clone()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Knuth–Bendix style completion: unresolved critical pairs are recorded
    /// as congruence facts when deformation-equal, otherwise oriented into
    /// new rules; rules are interreduced after every addition.
    pub fn complete(&self, max_rules: usize, fuel: usize) -> Result<ReductionSystem, CompletionFailure> {
        let mut s = self.clone();
        let mut budget = fuel;
        s.interreduce(fuel)?;
        loop {
            if budget == 0 {
                return Err(CompletionFailure::Fuel);
            }
            budget -= 1;
            let mut new_pair = None;
            for amb in s.ambiguities() {
                let (r1, r2) = s.reducts(&amb);
                let n1 = s.normalize(&r1, fuel).map_err(|_| CompletionFailure::Fuel)?;
                let n2 = s.normalize(&r2, fuel).map_err(|_| CompletionFailure::Fuel)?;
                if n1 == n2 {
                    continue;
                }
                match s.approx_equal(&n1, &n2) {
                    Ok(Some(_)) => {
                        if !s.facts.iter().any(|(a, b)| (a == &n1 && b == &n2) || (a == &n2 && b == &n1)) {
                            s.facts.push((n1, n2));
                        }
                        continue;
                    }
                    Ok(None) => {}
                    Err(_) => return Err(CompletionFailure::Fuel),
                }
                new_pair = Some((n1, n2));
                break;
            }
            let Some((u, v)) = new_pair else { break };
            s.orient_and_add(u, v)?;
            if s.rules.len() > max_rules {
                return Err(CompletionFailure::RuleBudget);
            }
            s.interreduce(fuel)?;
        }
        if s.resolve_all(fuel).iter().all(ResolutionReport::is_resolved) {
            Ok(s)
        } else {
            Err(CompletionFailure::Fuel)
        }
    }

    fn orient_and_add(&mut self, u: PathWord, v: PathWord) -> Result<(), CompletionFailure> {
        let (l, r) = match self.order.compare(&u, &v) {
            Some(Ordering::Greater) => (u, v),
            Some(Ordering::Less) => (v, u),
            _ => return Err(CompletionFailure::Unorientable(self.render(&u), self.render(&v))),
        };
        self.add_rule(l, r).map_err(|_| CompletionFailure::Unorientable(String::new(), String::new()))?;
        Ok(())
    }

    fn interreduce(&mut self, fuel: usize) -> Result<(), CompletionFailure> {
        loop {
            let mut changed = false;
            let ids: Vec<usize> = self.rules.iter().map(|r| r.id).collect();
            for id in ids {
                let Some(rule) = self.rule(id).cloned() else { continue };
                let removed = self.remove_rule(id);
                if !self.is_irreducible(&rule.lhs) {
                    let l = self.normalize(&removed.lhs, fuel).map_err(|_| CompletionFailure::Fuel)?;
                    let r = self.normalize(&removed.rhs, fuel).map_err(|_| CompletionFailure::Fuel)?;
                    if l != r && self.approx_equal(&l, &r).ok().flatten().is_none() {
                        self.orient_and_add(l, r)?;
                    }
                    changed = true;
                    break;
                }
                // Restore with a normalized right-hand side and the same id.
                let rhs = self.normalize(&removed.rhs, fuel).map_err(|_| CompletionFailure::Fuel)?;
                let pos = self.rules.iter().position(|r| r.id > id).unwrap_or(self.rules.len());
                if rhs != removed.rhs {
                    changed = true;
                }
                self.rules.insert(pos, Rule { id, lhs: removed.lhs, rhs });
                self.reindex();
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Searches invertibles `eps_0..eps_l` with `eps_0`, `eps_l` identities and
/// `eps_{i-1} b_i = a_i eps_i`, padding the shorter sequence with identities.
pub fn deformation_equal(
    graph: &Graph,
    reg: &InvertibleRegistry,
    eq: &dyn Fn(&PathWord, &PathWord) -> Option<bool>,
    a: &[PathWord],
    b: &[PathWord],
) -> Result<Option<Vec<PathWord>>, RewriteError> {
    let src = |s: &[PathWord]| s.first().map(|w| w.base);
    if let (Some(x), Some(y)) = (src(a), src(b)) {
        if x != y {
            return Ok(None);
        }
    }
    let end = |s: &[PathWord]| s.last().map(|w| graph.target(w));
    let len = a.len().max(b.len());
    let pad = |s: &[PathWord], other: &[PathWord]| -> Vec<PathWord> {
        let mut v = s.to_vec();
        let t = end(s).or_else(|| other.first().map(|w| w.base)).unwrap_or(0);
        v.resize(len, PathWord::identity(t));
        v
    };
    let (a, b) = (pad(a, b), pad(b, a));
    if len == 0 {
        return Ok(Some(vec![PathWord::identity(0)]));
    }
    let start = PathWord::identity(a[0].base);
    let mut undecided = false;
    let mut chain = vec![start];
    fn go(
        graph: &Graph,
        reg: &InvertibleRegistry,
        eq: &dyn Fn(&PathWord, &PathWord) -> Option<bool>,
        a: &[PathWord],
        b: &[PathWord],
        chain: &mut Vec<PathWord>,
        undecided: &mut bool,
    ) -> bool {
        let i = chain.len() - 1;
        if i == a.len() {
            return chain.last().unwrap().is_empty();
        }
        let prev = chain.last().unwrap().clone();
        let (ai, bi) = (&a[i], &b[i]);
        if graph.target(&prev) != bi.base {
            return false;
        }
        let last = i + 1 == a.len();
        for eps in reg.elements() {
            if graph.source(eps) != graph.target(ai) || graph.target(eps) != graph.target(bi) {
                continue;
            }
            if last && !eps.is_empty() {
                continue;
            }
            let lhs = graph.compose(&prev, bi).unwrap();
            let rhs = graph.compose(ai, eps).unwrap();
            let ok = if lhs == rhs { Some(true) } else { eq(&lhs, &rhs) };
            match ok {
                Some(true) => {
                    chain.push(eps.clone());
                    if go(graph, reg, eq, a, b, chain, undecided) {
                        return true;
                    }
                    chain.pop();
                }
                Some(false) => {}
                None => *undecided = true,
            }
        }
        false
    }
    if go(graph, reg, eq, &a, &b, &mut chain, &mut undecided) {
        Ok(Some(chain))
    } else if undecided {
        Err(RewriteError::EqualityOracleUndecided)
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleAnswer {
    Equal,
    Distinct,
    Undecided,
}

fn neighbours(g: &Graph, rels: &[(PathWord, PathWord)], w: &PathWord) -> Vec<PathWord> {
    let mut out = Vec::new();
    for (l, r) in rels {
        for (from, to) in [(l, r), (r, l)] {
            if from.is_empty() {
                // Insert `to` wherever the object matches.
                for pos in 0..=w.len() {
                    let at = if pos == 0 { w.base } else { g.edge(w.letters[pos - 1]).target };
                    if at == from.base {
                        out.push(w.splice(FactorOccurrence { position: pos, length: 0 }, to));
                    }
                }
            } else {
                for occ in find_factors(w, from) {
                    out.push(w.splice(occ, to));
                }
            }
        }
    }
    out
}

/// Bidirectional search over the relation graph. `Distinct` only when the
/// whole class of one side was exhausted without meeting the other.
pub fn word_problem_oracle(p: &Presentation, u: &PathWord, v: &PathWord, cap: usize) -> OracleAnswer {
    let g = &p.graph;
    if g.source(u) != g.source(v) || g.target(u) != g.target(v) {
        return OracleAnswer::Distinct;
    }
    if u == v {
        return OracleAnswer::Equal;
    }
    let mut rels = p.relations.clone();
    for (x, y) in &p.inverse_pairs {
        rels.push((g.compose(x, y).unwrap(), PathWord::identity(x.base)));
        rels.push((g.compose(y, x).unwrap(), PathWord::identity(y.base)));
    }
    let mut seen = [HashSet::from([u.clone()]), HashSet::from([v.clone()])];
    let mut frontier = [vec![u.clone()], vec![v.clone()]];
    loop {
        let side = if frontier[0].is_empty() || frontier[1].is_empty() {
            return OracleAnswer::Distinct;
        } else if seen[0].len() <= seen[1].len() {
            0
        } else {
            1
        };
        let other = 1 - side;
        let mut next = Vec::new();
        for w in std::mem::take(&mut frontier[side]) {
            for n in neighbours(g, &rels, &w) {
                if seen[other].contains(&n) {
                    return OracleAnswer::Equal;
                }
                if seen[side].insert(n.clone()) {
                    if seen[0].len() + seen[1].len() > cap {
                        return OracleAnswer::Undecided;
                    }
                    next.push(n);
                }
            }
        }
        frontier[side] = next;
    }
}
