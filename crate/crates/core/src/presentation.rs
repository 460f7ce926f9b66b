//! Presentations `Cat<G | R>` and their text format, plus declared invertibles.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::paths::{find_factors, EdgeId, Graph, ObjId, PathError, PathWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("relation {0}: endpoints differ")]
    EndpointMismatch(usize),
    #[error("{0}")]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn perr(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Term order declaration. `ranking[i]` lists edges from smallest to largest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    DegLex(Vec<EdgeId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub graph: Graph,
    pub relations: Vec<(PathWord, PathWord)>,
    pub order: OrderSpec,
    pub inverse_pairs: Vec<(PathWord, PathWord)>,
}

impl Presentation {
    pub fn new(graph: Graph) -> Self {
        let ranking = (0..graph.edges().len()).collect();
        Presentation { graph, relations: Vec::new(), order: OrderSpec::DegLex(ranking), inverse_pairs: Vec::new() }
    }

    pub fn add_relation(&mut self, lhs: PathWord, rhs: PathWord) -> Result<(), ParseErrorKind> {
        let g = &self.graph;
        if g.source(&lhs) != g.source(&rhs) || g.target(&lhs) != g.target(&rhs) {
            return Err(ParseErrorKind::EndpointMismatch(self.relations.len()));
        }
        self.relations.push((lhs, rhs));
        Ok(())
    }

    /// Parses a word: whitespace-separated names, or a bare string split
    /// greedily by longest edge name. `1` / `1_x` denote identities.
    pub fn parse_word(&self, text: &str) -> Result<PathWord, ParseErrorKind> {
        parse_word(&self.graph, text)
    }

    pub fn render(&self, w: &PathWord) -> String {
        self.graph.render(w)
    }

    /// Serializes to the text format; `parse_presentation` inverts this.
    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut s = String::new();
        let single = g.objects().len() == 1 && g.objects()[0] == "*";
        if !single {
            let _ = writeln!(s, "objects: {}", g.objects().join(" "));
        }
        for e in g.edges() {
            if single {
                let _ = writeln!(s, "edge {}", e.name);
            } else {
                let _ = writeln!(s, "edge {} : {} -> {}", e.name, g.objects()[e.source], g.objects()[e.target]);
            }
        }
        for (l, r) in &self.relations {
            let _ = writeln!(s, "rel {} = {}", g.render_with(l, " "), g.render_with(r, " "));
        }
        for (u, v) in &self.inverse_pairs {
            let _ = writeln!(s, "inv {} {}", g.render_with(u, " "), g.render_with(v, " "));
        }
        let OrderSpec::DegLex(rank) = &self.order;
        let names: Vec<&str> = rank.iter().map(|&e| g.edge(e).name.as_str()).collect();
        let _ = writeln!(s, "order deglex {}", names.join(" < "));
        s
    }
}

pub fn parse_word(g: &Graph, text: &str) -> Result<PathWord, ParseErrorKind> {
    let text = text.trim();
    let tokens: Vec<String> = if text.contains(char::is_whitespace) || text.contains('·') {
        text.split(|c: char| c.is_whitespace() || c == '·').filter(|t| !t.is_empty()).map(str::to_string).collect()
    } else if text.is_empty() {
        Vec::new()
    } else if g.edge_id(text).is_some() || text == "1" || text.starts_with("1_") {
        vec![text.to_string()]
    } else {
        split_greedy(g, text)?
    };
    if tokens.len() == 1 {
        let t = &tokens[0];
        if t == "1" {
            if g.objects().len() != 1 {
                return Err(ParseErrorKind::Syntax("`1` is ambiguous with several objects; use 1_x".into()));
            }
            return Ok(PathWord::identity(0));
        }
        if let Some(obj) = t.strip_prefix("1_") {
            if g.edge_id(t).is_none() {
                let o =
                    g.object_id(obj).ok_or_else(|| ParseErrorKind::Path(PathError::UnknownObject(obj.to_string())))?;
                return Ok(PathWord::identity(o));
            }
        }
    }
    if tokens.is_empty() {
        return Err(ParseErrorKind::Syntax("empty word".into()));
    }
    let mut ids = Vec::with_capacity(tokens.len());
    for t in &tokens {
        ids.push(g.edge_id(t).ok_or_else(|| ParseErrorKind::UnknownEdge(t.clone()))?);
    }
    Ok(g.path(&ids)?)
}

fn split_greedy(g: &Graph, text: &str) -> Result<Vec<String>, ParseErrorKind> {
    let mut names: Vec<&str> = g.edges().iter().map(|e| e.name.as_str()).collect();
    names.sort_by_key(|n| std::cmp::Reverse(n.len()));
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        match names.iter().find(|n| rest.starts_with(**n)) {
            Some(n) => {
                out.push(n.to_string());
                rest = &rest[n.len()..];
            }
            None => return Err(ParseErrorKind::UnknownEdge(rest.chars().next().unwrap().to_string())),
        }
    }
    Ok(out)
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut graph = Graph::new();
    let mut objects_declared = false;
    let mut pending_rels: Vec<(usize, String, String)> = Vec::new();
    let mut pending_inv: Vec<(usize, String, String)> = Vec::new();
    let mut order: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("objects:") {
            if objects_declared || !graph.edges().is_empty() {
                return Err(perr(
                    line_no,
                    ParseErrorKind::Syntax("objects must be declared once, before edges".into()),
                ));
            }
            for name in rest.split_whitespace() {
                graph.add_object(name).map_err(|e| perr(line_no, e.into()))?;
            }
            objects_declared = true;
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "edge" => {
                if !objects_declared && graph.objects().is_empty() {
                    graph.add_object("*").unwrap();
                }
                let (name, endpoints) = match rest.split_once(':') {
                    Some((n, e)) => (n.trim(), Some(e.trim())),
                    None => (rest, None),
                };
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(perr(line_no, ParseErrorKind::Syntax("expected `edge NAME [: SRC -> TGT]`".into())));
                }
                let (s, t) = match endpoints {
                    None if !objects_declared => (0, 0),
                    None => return Err(perr(line_no, ParseErrorKind::Syntax("edge needs `: SRC -> TGT`".into()))),
                    Some(e) => {
                        let (s, t) = e
                            .split_once("->")
                            .ok_or_else(|| perr(line_no, ParseErrorKind::Syntax("expected `SRC -> TGT`".into())))?;
                        let look = |o: &str| {
                            graph
                                .object_id(o.trim())
                                .ok_or_else(|| perr(line_no, PathError::UnknownObject(o.trim().to_string()).into()))
                        };
                        (look(s)?, look(t)?)
                    }
                };
                graph.add_edge(name, s, t).map_err(|e| perr(line_no, e.into()))?;
            }
            "rel" => {
                let (l, r) = rest
                    .split_once('=')
                    .ok_or_else(|| perr(line_no, ParseErrorKind::Syntax("expected `rel LHS = RHS`".into())))?;
                pending_rels.push((line_no, l.trim().to_string(), r.trim().to_string()));
            }
            "inv" => {
                let cleaned = rest.replace(':', " ");
                let toks: Vec<&str> = cleaned.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(perr(line_no, ParseErrorKind::Syntax("expected `inv U V`".into())));
                }
                pending_inv.push((line_no, toks[0].to_string(), toks[1].to_string()));
            }
            "order" => {
                let body = rest
                    .strip_prefix("deglex")
                    .ok_or_else(|| perr(line_no, ParseErrorKind::Syntax("only `order deglex` is supported".into())))?;
                let names: Vec<String> =
                    body.split('<').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                order = Some((line_no, names));
            }
            _ => return Err(perr(line_no, ParseErrorKind::Syntax(format!("unknown directive `{keyword}`")))),
        }
    }
    if graph.objects().is_empty() {
        graph.add_object("*").unwrap();
    }
    let mut p = Presentation::new(graph);
    for (line_no, l, r) in pending_rels {
        let lw = parse_word(&p.graph, &l).map_err(|k| perr(line_no, k))?;
        let rw = parse_word(&p.graph, &r).map_err(|k| perr(line_no, k))?;
        if lw.is_empty() && rw.is_empty() {
            return Err(perr(line_no, ParseErrorKind::Syntax("trivial relation".into())));
        }
        p.add_relation(lw, rw).map_err(|k| perr(line_no, k))?;
    }
    for (line_no, u, v) in pending_inv {
        let uw = parse_word(&p.graph, &u).map_err(|k| perr(line_no, k))?;
        let vw = parse_word(&p.graph, &v).map_err(|k| perr(line_no, k))?;
        let g = &p.graph;
        if g.source(&uw) != g.target(&vw) || g.target(&uw) != g.source(&vw) {
            return Err(perr(line_no, ParseErrorKind::Syntax("inverse pair endpoints do not match".into())));
        }
        p.inverse_pairs.push((uw, vw));
    }
    if let Some((line_no, names)) = order {
        let mut rank = Vec::new();
        let mut seen = BTreeSet::new();
        for n in &names {
            let e = p.graph.edge_id(n).ok_or_else(|| perr(line_no, ParseErrorKind::UnknownEdge(n.clone())))?;
            if !seen.insert(e) {
                return Err(perr(line_no, ParseErrorKind::Syntax(format!("edge `{n}` ranked twice"))));
            }
            rank.push(e);
        }
        for e in 0..p.graph.edges().len() {
            if !seen.contains(&e) {
                rank.push(e);
            }
        }
        p.order = OrderSpec::DegLex(rank);
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("invertible closure exceeds bound {0}")]
    ClosureBoundExceeded(usize),
    #[error("inverse pair endpoints do not match")]
    BadPair,
}

pub const DEFAULT_REGISTRY_BOUND: usize = 4096;

/// A finite set of invertible elements (as canonical words) closed under
/// inversion, identities included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleRegistry {
    elements: Vec<PathWord>,
    inverse: Vec<usize>,
    index: HashMap<PathWord, usize>,
}

impl InvertibleRegistry {
    /// Only the identities.
    pub fn trivial(objects: usize) -> Self {
        let elements: Vec<PathWord> = (0..objects).map(PathWord::identity).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        InvertibleRegistry { inverse: (0..objects).collect(), elements, index }
    }

    pub fn elements(&self) -> &[PathWord] {
        &self.elements
    }

    pub fn contains(&self, w: &PathWord) -> bool {
        self.index.contains_key(w)
    }

    pub fn inverse_of(&self, w: &PathWord) -> Option<&PathWord> {
        self.index.get(w).map(|&i| &self.elements[self.inverse[i]])
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.iter().all(|w| w.is_empty())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Cancels adjacent declared inverse factors until none remain.
pub fn cancel_inverses(w: &PathWord, pairs: &[(PathWord, PathWord)]) -> PathWord {
    let mut cur = w.clone();
    'outer: loop {
        for (u, v) in pairs {
            for (x, y) in [(u, v), (v, u)] {
                let mut pat = x.letters.clone();
                pat.extend_from_slice(&y.letters);
                if pat.is_empty() {
                    continue;
                }
                let pw = PathWord { base: 0, letters: pat };
                if let Some(occ) = find_factors(&cur, &pw).first() {
                    let base_after = cur.base;
                    let mut letters = cur.letters[..occ.position].to_vec();
                    letters.extend_from_slice(&cur.letters[occ.position + occ.length..]);
                    cur = PathWord { base: base_after, letters };
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Closes declared pairs under composition. `product` returns the canonical
/// representative of `uv`, or `None` when the composite is not available
/// (for germs, an undefined partial product). Identities are always members.
pub fn registry_closure(
    graph: &Graph,
    pairs: &[(PathWord, PathWord)],
    bound: usize,
    product: &dyn Fn(&PathWord, &PathWord) -> Option<PathWord>,
) -> Result<InvertibleRegistry, RegistryError> {
    let mut elements: Vec<PathWord> = (0..graph.objects().len()).map(PathWord::identity).collect();
    let mut index: HashMap<PathWord, usize> = elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut inverse: Vec<Option<usize>> = (0..elements.len()).map(Some).collect();
    let mut push =
        |w: PathWord, elements: &mut Vec<PathWord>, inverse: &mut Vec<Option<usize>>| -> Result<usize, RegistryError> {
            if let Some(&i) = index.get(&w) {
                return Ok(i);
            }
            if elements.len() >= bound {
                return Err(RegistryError::ClosureBoundExceeded(bound));
            }
            index.insert(w.clone(), elements.len());
            elements.push(w);
            inverse.push(None);
            Ok(elements.len() - 1)
        };
    for (u, v) in pairs {
        if graph.source(u) != graph.target(v) || graph.target(u) != graph.source(v) {
            return Err(RegistryError::BadPair);
        }
        let iu = push(u.clone(), &mut elements, &mut inverse)?;
        let iv = push(v.clone(), &mut elements, &mut inverse)?;
        inverse[iu] = Some(iv);
        inverse[iv] = Some(iu);
    }
    // Products of invertibles are invertible with inverse v^-1 u^-1.
    let mut i = 0;
    while i < elements.len() {
        for j in 0..=i {
            for (x, y) in [(i, j), (j, i)] {
                let (u, v) = (elements[x].clone(), elements[y].clone());
                if graph.target(&u) != graph.source(&v) || u.is_empty() || v.is_empty() {
                    continue;
                }
                let Some(uv) = product(&u, &v) else { continue };
                let k = push(uv, &mut elements, &mut inverse)?;
                if inverse[k].is_none() {
                    let (ux, vy) = (inverse[x], inverse[y]);
                    if let (Some(ui), Some(vi)) = (ux, vy) {
                        let (a, b) = (elements[vi].clone(), elements[ui].clone());
                        let inv = if a.is_empty() {
                            Some(b)
                        } else if b.is_empty() {
                            Some(a)
                        } else {
                            product(&a, &b)
                        };
                        if let Some(inv) = inv {
                            let ki = push(inv, &mut elements, &mut inverse)?;
                            inverse[k] = Some(ki);
                            inverse[ki] = Some(k);
                        }
                    }
                }
            }
        }
        i += 1;
    }
    let inverse = inverse.into_iter().enumerate().map(|(i, v)| v.unwrap_or(i)).collect();
    Ok(InvertibleRegistry { elements, inverse, index })
}

/// Registry for a presentation: composites canonicalized by cancelling
/// declared inverse factors and then applying `canon`.
pub fn presentation_registry(
    p: &Presentation,
    bound: usize,
    canon: &dyn Fn(&PathWord) -> PathWord,
) -> Result<InvertibleRegistry, RegistryError> {
    let pairs = p.inverse_pairs.clone();
    let product = |u: &PathWord, v: &PathWord| -> Option<PathWord> {
        let mut cur = p.graph.compose(u, v).ok()?;
        loop {
            let next = canon(&cancel_inverses(&cur, &pairs));
            if next == cur {
                return Some(cur);
            }
            cur = next;
        }
    };
    registry_closure(&p.graph, &p.inverse_pairs, bound, &product)
}

/// Object id of a name, for callers assembling presentations by hand.
pub fn object(p: &Presentation, name: &str) -> Option<ObjId> {
    p.graph.object_id(name)
}
