//! Directed multigraphs and path words, i.e. morphisms of the free category.
//!
//! Paths compose left to right: for `a: x -> y` and `b: y -> z` the word `ab`
//! is a path `x -> z`. Empty paths carry their base object explicitly.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub type ObjId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("cannot compose: target {left} differs from source {right}")]
    CompositionMismatch { left: String, right: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("letters {0} and {1} are not composable")]
    NotComposable(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// A finite directed multigraph. Edge order is declaration order and drives
/// every lexicographic tie-break in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    objects: Vec<String>,
    edges: Vec<Edge>,
    object_index: HashMap<String, ObjId>,
    edge_index: HashMap<String, EdgeId>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Single-object graph with object `*` and the given loops.
    pub fn monoid<S: AsRef<str>>(letters: &[S]) -> Result<Self, PathError> {
        let mut g = Graph::new();
        g.add_object("*")?;
        for l in letters {
            g.add_edge(l.as_ref(), 0, 0)?;
        }
        Ok(g)
    }

    pub fn add_object(&mut self, name: &str) -> Result<ObjId, PathError> {
        if self.object_index.contains_key(name) {
            return Err(PathError::Duplicate { kind: "object", name: name.to_string() });
        }
        let id = self.objects.len();
        self.objects.push(name.to_string());
        self.object_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, name: &str, source: ObjId, target: ObjId) -> Result<EdgeId, PathError> {
        if self.edge_index.contains_key(name) {
            return Err(PathError::Duplicate { kind: "edge", name: name.to_string() });
        }
        if source >= self.objects.len() || target >= self.objects.len() {
            return Err(PathError::UnknownObject(format!("#{}", source.max(target))));
        }
        let id = self.edges.len();
        self.edges.push(Edge { name: name.to_string(), source, target });
        self.edge_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn is_single_object(&self) -> bool {
        self.objects.len() == 1
    }

    pub fn identity(&self, obj: ObjId) -> PathWord {
        PathWord::identity(obj)
    }

    /// Builds a path from edge ids, checking composability.
    pub fn path(&self, letters: &[EdgeId]) -> Result<PathWord, PathError> {
        let base = match letters.first() {
            Some(&e) => self.edges[e].source,
            None => 0,
        };
        self.path_from(base, letters)
    }

    pub fn path_from(&self, base: ObjId, letters: &[EdgeId]) -> Result<PathWord, PathError> {
        let mut at = base;
        for (i, &e) in letters.iter().enumerate() {
            let edge = &self.edges[e];
            if edge.source != at {
                let prev =
                    if i == 0 { format!("1_{}", self.objects[base]) } else { self.edges[letters[i - 1]].name.clone() };
                return Err(PathError::NotComposable(prev, edge.name.clone()));
            }
            at = edge.target;
        }
        Ok(PathWord { base, letters: letters.to_vec() })
    }

    /// Path from edge names.
    pub fn path_named<S: AsRef<str>>(&self, names: &[S]) -> Result<PathWord, PathError> {
        let ids = names
            .iter()
            .map(|n| self.edge_id(n.as_ref()).ok_or_else(|| PathError::UnknownEdge(n.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.path(&ids)
    }

    pub fn source(&self, w: &PathWord) -> ObjId {
        w.base
    }

    pub fn target(&self, w: &PathWord) -> ObjId {
        match w.letters.last() {
            Some(&e) => self.edges[e].target,
            None => w.base,
        }
    }

    pub fn compose(&self, u: &PathWord, v: &PathWord) -> Result<PathWord, PathError> {
        let t = self.target(u);
        if t != v.base {
            return Err(PathError::CompositionMismatch {
                left: self.objects[t].clone(),
                right: self.objects[v.base].clone(),
            });
        }
        let mut letters = u.letters.clone();
        letters.extend_from_slice(&v.letters);
        Ok(PathWord { base: u.base, letters })
    }

    /// Renders a word by concatenating edge names, or with `sep` between
    /// letters. Identities print as `1` (single object) or `1_x`.
    pub fn render_with(&self, w: &PathWord, sep: &str) -> String {
        if w.letters.is_empty() {
            return if self.is_single_object() { "1".to_string() } else { format!("1_{}", self.objects[w.base]) };
        }
        w.letters.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn render(&self, w: &PathWord) -> String {
        let sep = if self.edges.iter().all(|e| e.name.chars().count() == 1) { "" } else { " " };
        self.render_with(w, sep)
    }

    /// Every composable path of length at most `max_len`, ordered by length
    /// and then lexicographically by edge declaration order.
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<PathWord> {
        let mut out: Vec<PathWord> = (0..self.objects.len()).map(PathWord::identity).collect();
        let mut layer: Vec<PathWord> = Vec::new();
        for e in 0..self.edges.len() {
            if max_len >= 1 {
                layer.push(PathWord { base: self.edges[e].source, letters: vec![e] });
            }
        }
        let mut len = 1;
        while len <= max_len && !layer.is_empty() {
            out.extend(layer.iter().cloned());
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &layer {
                let t = self.target(w);
                for (e, edge) in self.edges.iter().enumerate() {
                    if edge.source == t {
                        let mut letters = w.letters.clone();
                        letters.push(e);
                        next.push(PathWord { base: w.base, letters });
                    }
                }
            }
            layer = next;
            len += 1;
        }
        out
    }
}

/// A path in the free category: a base object and a composable letter list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub base: ObjId,
    pub letters: Vec<EdgeId>,
}

impl PathWord {
    pub fn identity(base: ObjId) -> Self {
        PathWord { base, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Subword `[start, start+len)`; an empty slice is the identity at the
    /// object reached after `start` letters.
    pub fn slice(&self, g: &Graph, start: usize, len: usize) -> PathWord {
        let base = if start == 0 { self.base } else { g.edge(self.letters[start - 1]).target };
        PathWord { base, letters: self.letters[start..start + len].to_vec() }
    }

    /// Replaces the factor at `occ` by `replacement`. The caller guarantees
    /// matching endpoints.
    pub fn splice(&self, occ: FactorOccurrence, replacement: &PathWord) -> PathWord {
        let mut letters = Vec::with_capacity(self.letters.len() - occ.length + replacement.letters.len());
        letters.extend_from_slice(&self.letters[..occ.position]);
        letters.extend_from_slice(&replacement.letters);
        letters.extend_from_slice(&self.letters[occ.position + occ.length..]);
        PathWord { base: self.base, letters }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorOccurrence {
    pub position: usize,
    pub length: usize,
}

/// All occurrences of a nonempty pattern in `w`, overlapping ones included.
pub fn find_factors(w: &PathWord, pattern: &PathWord) -> Vec<FactorOccurrence> {
    let (hay, pat) = (&w.letters, &pattern.letters);
    if pat.is_empty() || pat.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - pat.len())
        .filter(|&i| hay[i..i + pat.len()] == pat[..])
        .map(|position| FactorOccurrence { position, length: pat.len() })
        .collect()
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "1@{}", self.base)
        } else {
            let parts: Vec<String> = self.letters.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_objects() -> Graph {
        let mut g = Graph::new();
        let x = g.add_object("x").unwrap();
        let y = g.add_object("y").unwrap();
        g.add_edge("a", x, y).unwrap();
        g.add_edge("b", y, x).unwrap();
        g
    }

    #[test]
    fn compose_identity_and_letters() {
        let g = two_objects();
        let one = PathWord::identity(0);
        assert_eq!(g.compose(&one, &one).unwrap(), one);
        let a = g.path_named(&["a"]).unwrap();
        let b = g.path_named(&["b"]).unwrap();
        let ab = g.compose(&a, &b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!((g.source(&ab), g.target(&ab)), (0, 0));
        assert!(matches!(g.compose(&a, &a), Err(PathError::CompositionMismatch { .. })));
    }

    #[test]
    fn free_monoid_concatenation() {
        let g = Graph::monoid(&["e1", "e2"]).unwrap();
        let u = g.path_named(&["e1", "e2"]).unwrap();
        let v = g.path_named(&["e2"]).unwrap();
        assert_eq!(g.compose(&u, &v).unwrap(), g.path_named(&["e1", "e2", "e2"]).unwrap());
    }

    #[test]
    fn factors_overlap() {
        let g = Graph::monoid(&["a", "b", "d"]).unwrap();
        let w = g.path_named(&["d", "a", "b", "d", "a", "b"]).unwrap();
        let p = g.path_named(&["d", "a", "b"]).unwrap();
        let pos: Vec<usize> = find_factors(&w, &p).iter().map(|o| o.position).collect();
        assert_eq!(pos, vec![0, 3]);
        let ddd = g.path_named(&["d", "d", "d"]).unwrap();
        let dd = g.path_named(&["d", "d"]).unwrap();
        assert_eq!(find_factors(&ddd, &dd).len(), 2);
        let abab = g.path_named(&["a", "b", "a", "b"]).unwrap();
        let ba = g.path_named(&["b", "a"]).unwrap();
        assert_eq!(find_factors(&abab, &ba), vec![FactorOccurrence { position: 1, length: 2 }]);
    }

    #[test]
    fn enumeration_order() {
        let g = Graph::monoid(&["a", "b"]).unwrap();
        let words: Vec<String> = g.enumerate_paths(1).iter().map(|w| g.render(w)).collect();
        assert_eq!(words, ["1", "a", "b"]);
        let g = Graph::monoid(&["a"]).unwrap();
        let words: Vec<String> = g.enumerate_paths(3).iter().map(|w| g.render(w)).collect();
        assert_eq!(words, ["1", "a", "aa", "aaa"]);
        let mut g = Graph::new();
        g.add_object("x").unwrap();
        g.add_object("y").unwrap();
        g.add_edge("a", 0, 1).unwrap();
        let words: Vec<String> = g.enumerate_paths(2).iter().map(|w| g.render(w)).collect();
        assert_eq!(words, ["1_x", "1_y", "a"]);
    }

    #[test]
    fn path_rejects_noncomposable() {
        let g = two_objects();
        assert!(g.path_named(&["a", "a"]).is_err());
        assert!(matches!(g.path_named(&["z"]), Err(PathError::UnknownEdge(_))));
    }
}
