//! Coxeter systems and the number game.
//!
//! A position assigns a number to every generator. Firing `s` adds
//! `kappa(t,s) * p_s` to each neighbour `t` and then negates `p_s`. Playing
//! the reversed word from the unit position and firing the minimal negative
//! node until no negative entry remains records a reduced normal form.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::paths::PathWord;
use crate::presentation::{parse_presentation, Presentation};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoxeterError {
    #[error("{line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid kappa on {0}-{1}: {2}")]
    InvalidKappa(String, String, String),
    #[error("invalid Coxeter matrix entry for {0}-{1}")]
    InvalidM(String, String),
    #[error("fuel exhausted after {0} firings")]
    FuelExhausted(usize),
    #[error("group has more than {0} elements")]
    GroupCapExceeded(usize),
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("unsupported rank {0}")]
    UnsupportedRank(usize),
}

/// `None` is m = infinity.
pub type MEntry = Option<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterSystem {
    names: Vec<String>,
    m: Vec<Vec<MEntry>>,
    kappa: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Position {
    Exact(Vec<i64>),
    Real(Vec<f64>),
}

impl Position {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Position::Exact(v) => v.iter().map(|&x| x as f64).collect(),
            Position::Real(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[i64]> {
        match self {
            Position::Exact(v) => Some(v),
            Position::Real(_) => None,
        }
    }

    fn negative_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.values()
            .into_iter()
            .enumerate()
            .filter(|(_, v)| *v < -TOLERANCE)
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
            .into_iter()
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Position::Exact(v) => v.iter().all(|&x| x == 1),
            Position::Real(v) => v.iter().all(|x| (x - 1.0).abs() <= TOLERANCE),
        }
    }

    /// Hash key: exact entries, or reals rounded to 12 significant digits.
    pub fn key(&self) -> String {
        match self {
            Position::Exact(v) => format!("{v:?}"),
            Position::Real(v) => v
                .iter()
                .map(|x| if x.abs() < TOLERANCE { "0".to_string() } else { format!("{x:.11e}") })
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Exact(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Position::Real(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

fn default_kappa(m: MEntry) -> f64 {
    match m {
        None => 2.0,
        Some(2) => 0.0,
        Some(k) => 2.0 * (PI / k as f64).cos(),
    }
}

/// Integer split of `4cos^2(pi/m)` for crystallographic m, smaller factor
/// on the first-declared side.
fn integer_split(m: MEntry) -> Option<(i64, i64)> {
    match m {
        None => Some((2, 2)),
        Some(2) => Some((0, 0)),
        Some(3) => Some((1, 1)),
        Some(4) => Some((1, 2)),
        Some(6) => Some((1, 3)),
        _ => None,
    }
}

impl CoxeterSystem {
    /// Builds a system from the upper-triangular entries; unspecified pairs
    /// default to m = 2.
    pub fn new<S: AsRef<str>>(names: &[S], entries: &[(usize, usize, MEntry)]) -> Result<Self, CoxeterError> {
        let n = names.len();
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut m = vec![vec![Some(2); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        for &(a, b, v) in entries {
            if a == b || v == Some(1) || v == Some(0) {
                return Err(CoxeterError::InvalidM(names[a].clone(), names[b].clone()));
            }
            m[a][b] = v;
            m[b][a] = v;
        }
        let mut sys = CoxeterSystem { names, m, kappa: vec![vec![0.0; n]; n], exact: None };
        sys.assign_default_kappa();
        Ok(sys)
    }

    fn assign_default_kappa(&mut self) {
        let n = self.rank();
        let crystallographic = (0..n).all(|a| (0..n).all(|b| a == b || integer_split(self.m[a][b]).is_some()));
        let mut exact = vec![vec![0i64; n]; n];
        for a in 0..n {
            self.kappa[a][a] = -2.0;
            exact[a][a] = -2;
            for b in a + 1..n {
                if crystallographic {
                    let (x, y) = integer_split(self.m[a][b]).unwrap();
                    exact[a][b] = x;
                    exact[b][a] = y;
                    self.kappa[a][b] = x as f64;
                    self.kappa[b][a] = y as f64;
                } else {
                    let k = default_kappa(self.m[a][b]);
                    self.kappa[a][b] = k;
                    self.kappa[b][a] = k;
                }
            }
        }
        self.exact = crystallographic.then_some(exact);
    }

    /// Symmetric group on n letters: generators s1..s_{n-1}.
    pub fn symmetric_group(n: usize) -> Self {
        let names: Vec<String> = (1..n).map(|i| format!("s{i}")).collect();
        let entries: Vec<(usize, usize, MEntry)> = (0..n.saturating_sub(2)).map(|i| (i, i + 1, Some(3))).collect();
        CoxeterSystem::new(&names, &entries).expect("valid type A matrix")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn m(&self, a: usize, b: usize) -> MEntry {
        self.m[a][b]
    }

    pub fn kappa(&self, a: usize, b: usize) -> f64 {
        self.kappa[a][b]
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn is_finite_type_hint(&self) -> bool {
        (0..self.rank()).all(|a| (0..self.rank()).all(|b| self.m[a][b].is_some()))
    }

    /// Overrides kappa on an edge; both values must satisfy the constraints.
    pub fn set_kappa(&mut self, a: usize, b: usize, kab: f64, kba: f64) -> Result<(), CoxeterError> {
        let bad = |why: &str| CoxeterError::InvalidKappa(self.names[a].clone(), self.names[b].clone(), why.to_string());
        let m = self.m[a][b];
        match m {
            Some(1) => return Err(bad("diagonal")),
            Some(2) => {
                if kab != 0.0 || kba != 0.0 {
                    return Err(bad("must be 0 for m = 2"));
                }
            }
            Some(k) => {
                let want = 4.0 * (PI / k as f64).cos().powi(2);
                if kab <= 0.0 || kba <= 0.0 || (kab * kba - want).abs() > TOLERANCE {
                    return Err(bad(&format!("product must be {want}")));
                }
            }
            None => {
                if kab <= 0.0 || kba <= 0.0 || kab * kba < 4.0 - TOLERANCE {
                    return Err(bad("product must be at least 4"));
                }
            }
        }
        self.kappa[a][b] = kab;
        self.kappa[b][a] = kba;
        let is_int = |x: f64| x.fract() == 0.0;
        match (&mut self.exact, is_int(kab) && is_int(kba)) {
            (Some(e), true) => {
                e[a][b] = kab as i64;
                e[b][a] = kba as i64;
            }
            (ex, _) => *ex = None,
        }
        Ok(())
    }

    /// Checks every kappa constraint within tolerance.
    pub fn kappa_valid(&self) -> bool {
        let n = self.rank();
        (0..n).all(|a| {
            (self.kappa[a][a] + 2.0).abs() <= TOLERANCE
                && (0..n).filter(|&b| b != a).all(|b| {
                    let (x, y) = (self.kappa[a][b], self.kappa[b][a]);
                    match self.m[a][b] {
                        Some(2) => x == 0.0 && y == 0.0,
                        Some(k) => {
                            x > 0.0 && y > 0.0 && (x * y - 4.0 * (PI / k as f64).cos().powi(2)).abs() <= TOLERANCE
                        }
                        None => x > 0.0 && y > 0.0 && x * y >= 4.0 - TOLERANCE,
                    }
                })
        })
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Words: whitespace-separated names, or a bare string split greedily
    /// by longest generator name.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, CoxeterError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text
                .split_whitespace()
                .map(|t| self.generator(t).ok_or_else(|| CoxeterError::UnknownGenerator(t.to_string())))
                .collect();
        }
        let mut names: Vec<(usize, &str)> = self.names.iter().map(|s| s.as_str()).enumerate().collect();
        names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let (i, n) = names
                .iter()
                .find(|(_, n)| rest.starts_with(*n))
                .ok_or_else(|| CoxeterError::UnknownGenerator(rest.to_string()))?;
            out.push(*i);
            rest = &rest[n.len()..];
        }
        Ok(out)
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn unit(&self) -> Position {
        match self.exact {
            Some(_) => Position::Exact(vec![1; self.rank()]),
            None => Position::Real(vec![1.0; self.rank()]),
        }
    }

    pub fn fire(&self, p: &Position, s: usize) -> Position {
        match (p, &self.exact) {
            (Position::Exact(v), Some(k)) => {
                let old = v[s];
                let mut out = v.clone();
                for t in 0..v.len() {
                    if t != s {
                        out[t] += k[t][s] * old;
                    }
                }
                out[s] = -old;
                Position::Exact(out)
            }
            _ => {
                let v = p.values();
                let old = v[s];
                let mut out = v.clone();
                for t in 0..v.len() {
                    if t != s {
                        out[t] += self.kappa[t][s] * old;
                    }
                }
                out[s] = -old;
                Position::Real(out)
            }
        }
    }

    pub fn play(&self, start: &Position, word: &[usize]) -> Position {
        word.iter().fold(start.clone(), |p, &s| self.fire(&p, s))
    }

    /// Position reached from the unit by playing the reversed word.
    pub fn start_position(&self, word: &[usize]) -> Position {
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        self.play(&self.unit(), &rev)
    }

    /// Normal form with the full list of intermediate positions.
    pub fn normal_form_traced(&self, word: &[usize], fuel: usize) -> Result<(Vec<usize>, Vec<Position>), CoxeterError> {
        let mut p = self.start_position(word);
        let mut trace = vec![p.clone()];
        let mut nf = Vec::new();
        for _ in 0..=fuel {
            let Some(s) = p.negative_nodes().next() else {
                return if p.is_unit() { Ok((nf, trace)) } else { Err(CoxeterError::FuelExhausted(fuel)) };
            };
            if nf.len() == fuel {
                break;
            }
            p = self.fire(&p, s);
            nf.push(s);
            trace.push(p.clone());
        }
        Err(CoxeterError::FuelExhausted(fuel))
    }

    pub fn normal_form(&self, word: &[usize], fuel: usize) -> Result<Vec<usize>, CoxeterError> {
        self.normal_form_traced(word, fuel).map(|(nf, _)| nf)
    }

    fn fuel_for(word: &[usize]) -> usize {
        word.len() + 1
    }

    pub fn length(&self, word: &[usize]) -> usize {
        self.normal_form(word, Self::fuel_for(word))
            .map(|w| w.len())
            .expect("number game terminates within word length")
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(word) == word.len()
    }

    pub fn perp(&self, u: &[usize], v: &[usize]) -> bool {
        let uv: Vec<usize> = u.iter().chain(v).copied().collect();
        self.length(&uv) == self.length(u) + self.length(v)
    }

    /// `u ∠ v`: every left descent of v is a right descent of u, so no
    /// nontrivial prefix of v can be absorbed length-additively into u.
    pub fn angle(&self, u: &[usize], v: &[usize]) -> bool {
        let lv = self.length(v);
        let lu = self.length(u);
        (0..self.rank()).all(|s| {
            let sv: Vec<usize> = std::iter::once(s).chain(v.iter().copied()).collect();
            if self.length(&sv) >= lv {
                return true;
            }
            let us: Vec<usize> = u.iter().copied().chain(std::iter::once(s)).collect();
            self.length(&us) < lu
        })
    }

    /// BFS over positive firings from the unit; one entry per element.
    pub fn enumerate_group(&self, cap: usize) -> Result<Vec<(Position, Vec<usize>)>, CoxeterError> {
        let unit = self.unit();
        let mut seen: HashMap<String, usize> = HashMap::from([(unit.key(), 0)]);
        let mut out: Vec<(Position, Vec<usize>)> = vec![(unit.clone(), Vec::new())];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (p, w) = out[i].clone();
            let vals = p.values();
            for s in 0..self.rank() {
                if vals[s] <= TOLERANCE {
                    continue;
                }
                let q = self.fire(&p, s);
                let key = q.key();
                if seen.contains_key(&key) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(CoxeterError::GroupCapExceeded(cap));
                }
                let mut w2 = w.clone();
                w2.push(s);
                seen.insert(key, out.len());
                out.push((q, w2));
                queue.push_back(out.len() - 1);
            }
        }
        // Replace play sequences by normal forms of the elements they reach.
        // The play sequence from the unit is the reverse of the element word.
        for (_, w) in out.iter_mut() {
            let elem: Vec<usize> = w.iter().rev().copied().collect();
            *w = self.normal_form(&elem, elem.len() + 1)?;
        }
        Ok(out)
    }

    /// Coxeter presentation (involutions and braid relations) as a monoid
    /// presentation with every generator self-inverse.
    pub fn presentation(&self) -> Presentation {
        let mut text = String::new();
        for n in &self.names {
            text.push_str(&format!("edge {n}\n"));
        }
        for (i, n) in self.names.iter().enumerate() {
            text.push_str(&format!("rel {n} {n} = 1\ninv {n} {n}\n"));
            for j in i + 1..self.rank() {
                if let Some(k) = self.m[i][j] {
                    let alt = |a: usize, b: usize| -> String {
                        (0..k)
                            .map(|t| self.names[if t % 2 == 0 { a } else { b }].as_str())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    text.push_str(&format!("rel {} = {}\n", alt(j, i), alt(i, j)));
                }
            }
        }
        parse_presentation(&text).expect("generated presentation parses")
    }

    /// Positive Artin presentation (braid relations only).
    pub fn artin_presentation(&self) -> Presentation {
        let mut text = String::new();
        for n in &self.names {
            text.push_str(&format!("edge {n}\n"));
        }
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if let Some(k) = self.m[i][j] {
                    let alt = |a: usize, b: usize| -> String {
                        (0..k)
                            .map(|t| self.names[if t % 2 == 0 { a } else { b }].as_str())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    text.push_str(&format!("rel {} = {}\n", alt(j, i), alt(i, j)));
                }
            }
        }
        parse_presentation(&text).expect("generated presentation parses")
    }

    pub fn word_to_path(&self, p: &Presentation, w: &[usize]) -> PathWord {
        let ids: Vec<usize> = w.iter().map(|&i| p.graph.edge_id(&self.names[i]).expect("generator edge")).collect();
        p.graph.path(&ids).expect("monoid path")
    }
}

pub fn parse_coxeter(text: &str) -> Result<CoxeterSystem, CoxeterError> {
    let err = |line: usize, message: &str| CoxeterError::Parse { line, message: message.to_string() };
    let mut names: Option<Vec<String>> = None;
    let mut entries: Vec<(usize, String, String, MEntry)> = Vec::new();
    let mut kappas: Vec<(usize, String, String, f64, f64)> = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "coxeter" => saw_header = true,
            "generators:" => names = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
            "m" => {
                if toks.len() != 5 || toks[3] != "=" {
                    return Err(err(line_no, "expected `m A B = VALUE`"));
                }
                let v = match toks[4] {
                    "inf" | "∞" => None,
                    s => Some(s.parse::<u32>().map_err(|_| err(line_no, "m must be an integer >= 2 or inf"))?),
                };
                if matches!(v, Some(0) | Some(1)) {
                    return Err(err(line_no, "m must be an integer >= 2 or inf"));
                }
                entries.push((line_no, toks[1].to_string(), toks[2].to_string(), v));
            }
            "kappa" => {
                if toks.len() != 6 || toks[3] != "=" {
                    return Err(err(line_no, "expected `kappa A B = K_AB K_BA`"));
                }
                let parse = |s: &str| s.parse::<f64>().map_err(|_| err(line_no, "kappa must be a number"));
                kappas.push((line_no, toks[1].to_string(), toks[2].to_string(), parse(toks[4])?, parse(toks[5])?));
            }
            other => return Err(err(line_no, &format!("unknown directive `{other}`"))),
        }
    }
    if !saw_header {
        return Err(err(1, "missing `coxeter` header"));
    }
    let names = names.ok_or_else(|| err(1, "missing `generators:` line"))?;
    let find = |line: usize, n: &str| {
        names.iter().position(|x| x == n).ok_or_else(|| err(line, &format!("unknown generator `{n}`")))
    };
    let mut resolved = Vec::new();
    for (line, a, b, v) in &entries {
        let (i, j) = (find(*line, a)?, find(*line, b)?);
        if i == j {
            return Err(err(*line, "m on the diagonal is fixed to 1"));
        }
        resolved.push((i, j, *v));
    }
    let mut sys = CoxeterSystem::new(&names, &resolved)?;
    for (line, a, b, x, y) in kappas {
        let (i, j) = (find(line, &a)?, find(line, &b)?);
        sys.set_kappa(i, j, x, y).map_err(|e| err(line, &e.to_string()))?;
    }
    Ok(sys)
}

/// Permutation of {0..n-1} as the array obtained by applying the swaps of a
/// word to the identity arrangement, left to right (`s_i` swaps slots i-1, i).
pub fn perm_of_word(n: usize, w: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for &s in w {
        p.swap(s, s + 1);
    }
    p
}

/// Row normal form in S_n: rows `s_k s_{k-1} ... s_{i_k}` for k = 1..n-1
/// with `i_k <= k+1` (empty when `i_k = k+1`). Generator indices are 0-based
/// in the returned word. Returns the word and the row start indices i_k.
pub fn sn_row_normal_form(n: usize, perm: &[usize]) -> Result<(Vec<usize>, Vec<usize>), CoxeterError> {
    if !(2..=8).contains(&n) {
        return Err(CoxeterError::UnsupportedRank(n));
    }
    let mut check = perm.to_vec();
    check.sort_unstable();
    if perm.len() != n || check.iter().enumerate().any(|(i, &x)| i != x) {
        return Err(CoxeterError::InvalidPermutation);
    }
    let mut p = perm.to_vec();
    let mut starts = vec![0; n - 1];
    for k in (1..n).rev() {
        let pos = p[..=k].iter().position(|&x| x == k).expect("value k in prefix");
        starts[k - 1] = pos + 1;
        let v = p.remove(pos);
        p.insert(k, v);
    }
    let mut word = Vec::new();
    for k in 1..n {
        let i = starts[k - 1];
        // s_k ... s_i, 1-based; 0-based generator index is one less.
        for j in (i..=k).rev() {
            word.push(j - 1);
        }
    }
    Ok((word, starts))
}

/// Bokut–Shiao rules for S_n under deglex with s_i > s_j for i > j, in
/// presentation form (monoid on s1..s_{n-1}).
pub fn bokut_shiao_presentation(n: usize) -> Presentation {
    let mut text = String::new();
    for i in 1..n {
        text.push_str(&format!("edge s{i}\n"));
    }
    let s = |i: usize| format!("s{i}");
    for i in 1..n {
        text.push_str(&format!("rel {0} {0} = 1\n", s(i)));
    }
    for i in 1..n {
        for j in 1..i.saturating_sub(1) {
            text.push_str(&format!("rel {} {} = {} {}\n", s(i), s(j), s(j), s(i)));
        }
    }
    for i in 1..n.saturating_sub(1) {
        for j in 1..=i {
            // s_{i+1} s_i ... s_j s_{i+1} = s_i s_{i+1} s_i ... s_j
            let desc: Vec<String> = (j..=i).rev().map(s).collect();
            let lhs = format!("{} {} {}", s(i + 1), desc.join(" "), s(i + 1));
            let rhs = format!("{} {} {}", s(i), s(i + 1), desc.join(" "));
            text.push_str(&format!("rel {lhs} = {rhs}\n"));
        }
    }
    parse_presentation(&text).expect("generated presentation parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    const APPENDIX: &str =
        "coxeter\ngenerators: a b c d\nm a b = 3\nm a c = 3\nm b c = 3\nm c d = inf\nkappa c d = 2 2\n";

    fn rank4() -> CoxeterSystem {
        parse_coxeter(APPENDIX).unwrap()
    }

    #[test]
    fn firing_matches_figures() {
        let sys = rank4();
        assert!(sys.is_exact());
        let p = sys.fire(&sys.unit(), 1);
        assert_eq!(p, Position::Exact(vec![2, -1, 2, 1]));
        let p = sys.fire(&p, 3);
        assert_eq!(p, Position::Exact(vec![2, -1, 4, -1]));
    }

    #[test]
    fn firing_is_involution() {
        let sys = rank4();
        let p = Position::Exact(vec![3, -2, 5, 7]);
        for s in 0..4 {
            assert_eq!(sys.fire(&sys.fire(&p, s), s), p);
        }
        let w = sys.parse_word("aa").unwrap();
        assert!(sys.play(&sys.unit(), &w).is_unit());
    }

    #[test]
    fn rank4_normal_form() {
        let sys = rank4();
        let w = sys.parse_word("babcdb").unwrap();
        assert_eq!(sys.start_position(&w), Position::Exact(vec![-3, -6, 14, 7]));
        let nf = sys.normal_form(&w, 100).unwrap();
        assert_eq!(sys.render_word(&nf), "abacbd");
        assert!(sys.normal_form(&sys.parse_word("aa").unwrap(), 10).unwrap().is_empty());
    }

    #[test]
    fn s3_lengths_and_perp() {
        let sys = CoxeterSystem::symmetric_group(3);
        let w = sys.parse_word("s1 s2 s1").unwrap();
        let v = sys.parse_word("s2 s1 s2").unwrap();
        assert_eq!(sys.normal_form(&w, 10).unwrap(), sys.normal_form(&v, 10).unwrap());
        assert_eq!(sys.length(&w), 3);
        assert!(sys.is_reduced(&w));
        assert_eq!(sys.length(&[0, 0]), 0);
        assert!(sys.perp(&[0], &[1]));
        assert!(!sys.perp(&[0], &[0]));
    }

    #[test]
    fn group_enumeration() {
        assert_eq!(CoxeterSystem::symmetric_group(3).enumerate_group(100).unwrap().len(), 6);
        assert_eq!(CoxeterSystem::symmetric_group(2).enumerate_group(100).unwrap().len(), 2);
        assert_eq!(CoxeterSystem::symmetric_group(4).enumerate_group(100).unwrap().len(), 24);
        assert_eq!(rank4().enumerate_group(100).unwrap_err(), CoxeterError::GroupCapExceeded(100));
    }

    #[test]
    fn h3_real_arithmetic() {
        // H3 has order 120 and needs irrational kappa.
        let sys = CoxeterSystem::new(&["a", "b", "c"], &[(0, 1, Some(5)), (1, 2, Some(3))]).unwrap();
        assert!(!sys.is_exact());
        assert!(sys.kappa_valid());
        let g = sys.enumerate_group(1000).unwrap();
        assert_eq!(g.len(), 120);
        assert_eq!(g.iter().map(|(_, w)| w.len()).max(), Some(15));
    }

    #[test]
    fn b3_exact_asymmetric() {
        let sys = CoxeterSystem::new(&["a", "b", "c"], &[(0, 1, Some(4)), (1, 2, Some(3))]).unwrap();
        assert!(sys.is_exact());
        assert!(sys.kappa_valid());
        assert_eq!(sys.enumerate_group(1000).unwrap().len(), 48);
        let g2 = CoxeterSystem::new(&["a", "b"], &[(0, 1, Some(6))]).unwrap();
        assert_eq!(g2.enumerate_group(100).unwrap().len(), 12);
    }

    #[test]
    fn kappa_validation() {
        let mut sys = rank4();
        assert!(sys.kappa_valid());
        assert!(sys.set_kappa(0, 1, 1.0, 2.0).is_err());
        assert!(sys.set_kappa(2, 3, 1.0, 4.0).is_ok());
        assert!(sys.set_kappa(2, 3, 1.0, 3.0).is_err());
        assert!(sys.set_kappa(0, 3, 1.0, 1.0).is_err());
    }

    #[test]
    fn asymmetric_kappa_keeps_normal_form() {
        let mut sys = rank4();
        let w = sys.parse_word("babcdb").unwrap();
        let before = sys.normal_form(&w, 100).unwrap();
        sys.set_kappa(2, 3, 1.0, 4.0).unwrap();
        assert_eq!(sys.normal_form(&w, 100).unwrap(), before);
    }

    #[test]
    fn row_forms_s3_s4() {
        let (w, _) = sn_row_normal_form(3, &perm_of_word(3, &[1, 0, 1])).unwrap();
        assert_eq!(w, vec![0, 1, 0]);
        let (w, starts) = sn_row_normal_form(4, &[0, 1, 2, 3]).unwrap();
        assert!(w.is_empty());
        assert_eq!(starts, vec![2, 3, 4]);
        let sys = CoxeterSystem::symmetric_group(4);
        for (_, nf) in sys.enumerate_group(100).unwrap() {
            let (row, _) = sn_row_normal_form(4, &perm_of_word(4, &nf)).unwrap();
            assert_eq!(row, nf);
        }
        assert_eq!(sn_row_normal_form(9, &[0; 9]), Err(CoxeterError::UnsupportedRank(9)));
        assert_eq!(sn_row_normal_form(3, &[0, 0, 1]), Err(CoxeterError::InvalidPermutation));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_coxeter("coxeter\ngenerators: a b\nm a z = 3\n"),
            Err(CoxeterError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_coxeter("generators: a\n"), Err(CoxeterError::Parse { .. })));
        assert!(matches!(
            parse_coxeter("coxeter\ngenerators: a b\nm a b = 1\n"),
            Err(CoxeterError::Parse { line: 3, .. })
        ));
    }
}
