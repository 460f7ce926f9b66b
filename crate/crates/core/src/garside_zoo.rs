//! Built-in monoids and germs: braid and Artin simples, Klein bottle,
//! free abelian, a hand-made B3 table, an example with invertibles, and a
//! two-object category.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::coxeter::{parse_coxeter, perm_of_word, sn_row_normal_form, CoxeterError, CoxeterSystem};
use crate::germ::{build_upsilon, parse_germ, Definedness, ElemId, Element, Germ, GermError, Product};
use crate::presentation::{parse_presentation, Presentation};
use crate::rewrite::{ReductionSystem, DEFAULT_FUEL};

pub const DEFAULT_KLEIN_BOUND: usize = 8;
pub const MAX_KLEIN_BOUND: usize = 16;
const ARTIN_GROUP_CAP: usize = 2000;

pub const KLEIN_PRESENTATION: &str = "edge a\nedge b\nrel b a b = a\norder deglex a < b\n";
pub const DCAT_PRESENTATION: &str =
    "objects: x y\nedge a : x -> y\nedge b : y -> x\nedge c : y -> y\nedge d : x -> x\nrel d d = a b\nrel c c = b a\norder deglex a < b < c < d\n";
pub const PRPINV_PRESENTATION: &str = "edge p\nedge p'\nedge r\nedge q\nrel p r p' = p\ninv r : p'\n";

pub const B3_TABLE: &str = "germ b3table\nelements: 1 s1 s2 s12 s21 D\nidentity: 1\n\
prod s1 s2 = s12\nprod s1 s21 = D\nprod s2 s1 = s21\nprod s2 s12 = D\nprod s12 s1 = D\nprod s21 s2 = D\n";

pub const PRPINV_TABLE: &str = "germ prpinv\nelements: 1 p r p' q pr rq\nidentity: 1\ninv r : p'\n\
prod p r = pr\nprod r q = rq\nprod pr p' = p\nprod r p' = 1\nprod p' r = 1\nprod p' rq = q\n";

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("unsupported builtin parameter: {0}")]
    UnsupportedParameter(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid letter `{0}`")]
    InvalidLetter(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinSpec {
    Braid(usize),
    /// Coxeter file contents.
    Artin(String),
    Klein(usize),
    FreeAbelian(usize),
    B3Table,
    PrpInv,
    DCat,
}

/// Parses `braid:n=4`, `klein:m=2`, `freeabelian:n=3`, `b3table`, `prpinv`,
/// `dcat` and `artin:<coxfile>` (the file is read here).
pub fn parse_builtin(spec: &str) -> Result<BuiltinSpec, ZooError> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let param = |key: &str| -> Result<usize, ZooError> {
        let v = arg.strip_prefix(key).and_then(|r| r.strip_prefix('=')).unwrap_or(arg);
        v.parse().map_err(|_| ZooError::UnsupportedParameter(spec.to_string()))
    };
    let range = |v: usize, lo: usize, hi: usize| {
        if (lo..=hi).contains(&v) {
            Ok(v)
        } else {
            Err(ZooError::UnsupportedParameter(spec.to_string()))
        }
    };
    match name {
        "braid" => Ok(BuiltinSpec::Braid(range(param("n")?, 2, 6)?)),
        "klein" => Ok(BuiltinSpec::Klein(range(param("m")?, 0, 4)?)),
        "freeabelian" => Ok(BuiltinSpec::FreeAbelian(range(param("n")?, 1, 6)?)),
        "artin" => {
            std::fs::read_to_string(arg).map(BuiltinSpec::Artin).map_err(|e| ZooError::Other(format!("{arg}: {e}")))
        }
        "b3table" => Ok(BuiltinSpec::B3Table),
        "prpinv" => Ok(BuiltinSpec::PrpInv),
        "dcat" => Ok(BuiltinSpec::DCat),
        _ => Err(ZooError::UnknownBuiltin(spec.to_string())),
    }
}

/// Presentation and germ for a builtin; `bound` applies to Klein.
pub fn load_builtin(spec: &BuiltinSpec, bound: usize) -> Result<(Presentation, Germ), ZooError> {
    Ok(match spec {
        BuiltinSpec::Braid(n) => (CoxeterSystem::symmetric_group(*n).artin_presentation(), braid_germ(*n)?),
        BuiltinSpec::Artin(text) => {
            let sys = parse_coxeter(text)?;
            (sys.artin_presentation(), artin_germ(&sys)?)
        }
        BuiltinSpec::Klein(m) => {
            if bound > MAX_KLEIN_BOUND {
                return Err(ZooError::UnsupportedParameter(format!("bound={bound}")));
            }
            (presentation(KLEIN_PRESENTATION), klein_germ(*m, bound)?)
        }
        BuiltinSpec::FreeAbelian(n) => (freeabelian_presentation(*n), freeabelian_germ(*n)?),
        BuiltinSpec::B3Table => (CoxeterSystem::symmetric_group(3).artin_presentation(), parse_germ(B3_TABLE)?),
        BuiltinSpec::PrpInv => (presentation(PRPINV_PRESENTATION), parse_germ(PRPINV_TABLE)?),
        BuiltinSpec::DCat => {
            let p = presentation(DCAT_PRESENTATION);
            let g = dcat_germ(&p)?;
            (p, g)
        }
    })
}

fn presentation(text: &str) -> Presentation {
    parse_presentation(text).expect("builtin presentation parses")
}

// ---- braid simples ----

/// A simple braid: a permutation with its cached row-form word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleElement {
    pub perm: Vec<usize>,
    /// 0-based generator indices.
    pub word: Vec<usize>,
}

impl SimpleElement {
    pub fn from_perm(perm: Vec<usize>) -> Self {
        let n = perm.len();
        let word = if n < 2 { Vec::new() } else { sn_row_normal_form(n, &perm).expect("valid permutation").0 };
        SimpleElement { perm, word }
    }

    pub fn from_word(n: usize, w: &[usize]) -> Self {
        SimpleElement::from_perm(perm_of_word(n, w))
    }

    pub fn identity(n: usize) -> Self {
        SimpleElement { perm: (0..n).collect(), word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn delta(n: usize) -> Self {
        SimpleElement::from_perm((0..n).rev().collect())
    }

    pub fn render(&self) -> String {
        render_sigma(&self.word)
    }
}

pub fn render_sigma(w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// Accepts `s1 s2`, `s1s2`, `σ1σ2` or a digit string such as `121`.
pub fn parse_sigma_word(n: usize, text: &str) -> Result<Vec<usize>, ZooError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '·').collect();
    let mut out = Vec::new();
    if t.is_empty() || t == "1" {
        return Ok(out);
    }
    let push = |k: usize, out: &mut Vec<usize>| {
        if k == 0 || k >= n {
            Err(ZooError::InvalidLetter(format!("s{k}")))
        } else {
            out.push(k - 1);
            Ok(())
        }
    };
    if t.chars().all(|c| c.is_ascii_digit()) {
        for c in t.chars() {
            push(c.to_digit(10).unwrap() as usize, &mut out)?;
        }
        return Ok(out);
    }
    let chars: Vec<char> = t.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != 's' && chars[i] != 'σ' {
            return Err(ZooError::InvalidLetter(chars[i].to_string()));
        }
        let start = i + 1;
        let mut j = start;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        let digits: String = chars[start..j].iter().collect();
        let k: usize = digits.parse().map_err(|_| ZooError::InvalidLetter(chars[i].to_string()))?;
        push(k, &mut out)?;
        i = j;
    }
    Ok(out)
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

/// `u•v = uv` when lengths add.
pub fn simple_product(u: &SimpleElement, v: &SimpleElement) -> Option<SimpleElement> {
    let p = compose(&u.perm, &v.perm);
    (inversions(&p) == u.len() + v.len()).then(|| SimpleElement::from_perm(p))
}

/// `u ≼ v` among simples.
pub fn simple_divides(u: &SimpleElement, v: &SimpleElement) -> bool {
    let q = compose(&inverse(&u.perm), &v.perm);
    u.len() + inversions(&q) == v.len()
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

/// All simples of the n-strand braid monoid, shortest first.
pub fn simples(n: usize) -> Vec<SimpleElement> {
    let mut v: Vec<SimpleElement> = all_perms(n).into_iter().map(SimpleElement::from_perm).collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.word.cmp(&b.word)));
    v
}

/// Germ of permutation simples with length-additive products.
pub fn braid_germ(n: usize) -> Result<Germ, ZooError> {
    if !(2..=6).contains(&n) {
        return Err(ZooError::UnsupportedParameter(format!("braid:n={n}")));
    }
    let simples = simples(n);
    let index: HashMap<Vec<usize>, ElemId> = simples.iter().enumerate().map(|(i, s)| (s.perm.clone(), i)).collect();
    let elements = simples
        .iter()
        .enumerate()
        .map(|(i, s)| Element {
            name: s.render(),
            source: 0,
            target: 0,
            is_identity: i == 0,
            inverse: (i == 0).then_some(0),
            in_domain: true,
        })
        .collect();
    let product = |x: ElemId, y: ElemId| match simple_product(&simples[x], &simples[y]) {
        Some(z) => Product::Defined(index[&z.perm]),
        None => Product::Undefined,
    };
    let divides = |x: ElemId, y: ElemId| simple_divides(&simples[x], &simples[y]);
    Ok(Germ::new(&format!("braid:n={n}"), vec!["*".into()], elements, &product, Some(&divides), None)?)
}

/// Germ of a finite Coxeter group with length-additive products.
pub fn artin_germ(sys: &CoxeterSystem) -> Result<Germ, ZooError> {
    let group = sys.enumerate_group(ARTIN_GROUP_CAP)?;
    let mut order: Vec<usize> = (0..group.len()).collect();
    order.sort_by(|&a, &b| group[a].1.len().cmp(&group[b].1.len()).then_with(|| group[a].1.cmp(&group[b].1)));
    let words: Vec<Vec<usize>> = order.iter().map(|&i| group[i].1.clone()).collect();
    let index: HashMap<String, ElemId> =
        words.iter().enumerate().map(|(i, w)| (sys.start_position(w).key(), i)).collect();
    let elements = words
        .iter()
        .enumerate()
        .map(|(i, w)| Element {
            name: if w.is_empty() { "1".into() } else { w.iter().map(|&i| sys.names()[i].as_str()).collect() },
            source: 0,
            target: 0,
            is_identity: i == 0,
            inverse: (i == 0).then_some(0),
            in_domain: true,
        })
        .collect();
    let product = |x: ElemId, y: ElemId| {
        let uv: Vec<usize> = words[x].iter().chain(&words[y]).copied().collect();
        let z = index[&sys.start_position(&uv).key()];
        if words[z].len() == uv.len() {
            Product::Defined(z)
        } else {
            Product::Undefined
        }
    };
    Ok(Germ::new("artin", vec!["*".into()], elements, &product, None, None)?)
}

/// Greedy normal form of a positive braid word via the germ engine.
pub fn braid_greedy(n: usize, word: &[usize], fuel: usize) -> Result<Vec<SimpleElement>, ZooError> {
    let germ = Arc::new(braid_germ(n)?);
    braid_greedy_with(&germ, n, word, fuel)
}

/// As [`braid_greedy`], reusing a prebuilt braid germ.
pub fn braid_greedy_with(
    germ: &Arc<Germ>,
    n: usize,
    word: &[usize],
    fuel: usize,
) -> Result<Vec<SimpleElement>, ZooError> {
    let mut entries = Vec::new();
    for &s in word {
        if s + 1 >= n {
            return Err(ZooError::InvalidLetter(format!("s{}", s + 1)));
        }
        entries.push(germ.id(&render_sigma(&[s])).expect("generator simple"));
    }
    let nf = germ.upsilon_normalize(&entries, fuel)?;
    Ok(nf
        .iter()
        .map(|&x| SimpleElement::from_word(n, &parse_sigma_word(n, germ.name(x)).expect("simple name")))
        .collect())
}

fn right_descent(p: &SimpleElement, s: usize) -> bool {
    p.perm[s] > p.perm[s + 1]
}

fn left_descent(p: &SimpleElement, s: usize) -> bool {
    let inv = inverse(&p.perm);
    inv[s] > inv[s + 1]
}

/// Left-weighted factorization by descent sets: adjacent simples (A, B) are
/// adjusted until every left descent of B is a right descent of A.
pub fn braid_greedy_descent(n: usize, word: &[usize]) -> Vec<SimpleElement> {
    let mut f: Vec<SimpleElement> = word.iter().map(|&s| SimpleElement::from_word(n, &[s])).collect();
    let swap = |s: usize| SimpleElement::from_word(n, &[s]);
    loop {
        let mut changed = false;
        for i in 0..f.len().saturating_sub(1) {
            while let Some(s) = (0..n - 1).find(|&s| left_descent(&f[i + 1], s) && !right_descent(&f[i], s)) {
                let t = swap(s);
                f[i] = simple_product(&f[i], &t).expect("s not a right descent");
                f[i + 1] = SimpleElement::from_perm(compose(&t.perm, &f[i + 1].perm));
                changed = true;
            }
        }
        f.retain(|x| !x.is_empty());
        if !changed {
            return f;
        }
    }
}

/// Head and tail of `ab` by a scan over divisors of b.
pub fn head_tail(a: &SimpleElement, b: &SimpleElement) -> (SimpleElement, SimpleElement) {
    let n = a.perm.len();
    let mut best: Option<(SimpleElement, SimpleElement)> = None;
    for t in simples(n) {
        if !simple_divides(&t, b) {
            continue;
        }
        let Some(h) = simple_product(a, &t) else { continue };
        if best.as_ref().is_none_or(|(bh, _)| h.len() > bh.len()) {
            let rest = SimpleElement::from_perm(compose(&inverse(&t.perm), &b.perm));
            best = Some((h, rest));
        }
    }
    best.expect("the identity always divides")
}

/// Head and tail by absorbing one letter at a time.
pub fn head_tail_incremental(a: &SimpleElement, b: &SimpleElement) -> (SimpleElement, SimpleElement) {
    let n = a.perm.len();
    let (mut h, mut t) = (a.clone(), b.clone());
    while let Some(s) = (0..n - 1).find(|&s| left_descent(&t, s) && !right_descent(&h, s)) {
        let g = SimpleElement::from_word(n, &[s]);
        h = simple_product(&h, &g).expect("length adds");
        t = SimpleElement::from_perm(compose(&g.perm, &t.perm));
    }
    (h, t)
}

// ---- Klein bottle ----

/// `a^i b^j` in the Klein bottle group.
pub type KleinCoord = (i64, i64);

pub fn klein_mul(x: KleinCoord, y: KleinCoord) -> KleinCoord {
    let ((i, j), (k, l)) = (x, y);
    (i + k, if k % 2 == 0 { j } else { -j } + l)
}

pub fn klein_inv(x: KleinCoord) -> KleinCoord {
    let (i, j) = x;
    (-i, if i % 2 == 0 { -j } else { j })
}

/// Membership in the left divisors of `ab^m a`.
pub fn klein_in_family(x: KleinCoord, m: usize) -> bool {
    match x {
        (0, j) => j >= 0,
        (1, _) => true,
        (2, j) => j <= -(m as i64),
        _ => false,
    }
}

pub fn klein_name(x: KleinCoord) -> String {
    let pw = |k: i64| match k {
        0 => String::new(),
        1 => "b".into(),
        k => format!("b^{k}"),
    };
    match x {
        (0, 0) => "1".into(),
        (0, j) => pw(j),
        (1, j) if j >= 0 => format!("a{}", pw(j)),
        (1, j) => format!("{}a", pw(-j)),
        (2, 0) => "aa".into(),
        (2, j) => format!("a{}a", pw(-j)),
        _ => format!("({},{})", x.0, x.1),
    }
}

/// Coordinates of a word over {a, b}.
pub fn klein_coord(word: &str) -> Option<KleinCoord> {
    word.chars().try_fold((0, 0), |acc, c| match c {
        'a' => Some(klein_mul(acc, (1, 0))),
        'b' => Some(klein_mul(acc, (0, 1))),
        _ => None,
    })
}

/// Klein bottle germ on the left divisors of `ab^m a`. Checks range over
/// b-exponents up to `bound`; the window extends to `3*bound + 2m + 2`.
pub fn klein_germ(m: usize, bound: usize) -> Result<Germ, ZooError> {
    let w = (3 * bound + 2 * m + 2) as i64;
    let mut coords: Vec<KleinCoord> = (0..=w).map(|k| (0, k)).collect();
    coords.extend((-w..=w).map(|j| (1, j)));
    coords.extend((-w..=-(m as i64)).rev().map(|j| (2, j)));
    let index: HashMap<KleinCoord, ElemId> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let elements = coords
        .iter()
        .enumerate()
        .map(|(i, &c)| Element {
            name: klein_name(c),
            source: 0,
            target: 0,
            is_identity: i == 0,
            inverse: (i == 0).then_some(0),
            in_domain: c.1.unsigned_abs() as usize <= bound,
        })
        .collect();
    let product = |x: ElemId, y: ElemId| {
        let z = klein_mul(coords[x], coords[y]);
        if !klein_in_family(z, m) {
            Product::Undefined
        } else if let Some(&k) = index.get(&z) {
            Product::Defined(k)
        } else {
            Product::Beyond
        }
    };
    let divides = |x: ElemId, y: ElemId| klein_in_family(klein_mul(klein_inv(coords[x]), coords[y]), m);
    Ok(Germ::new(&format!("klein:m={m}"), vec!["*".into()], elements, &product, Some(&divides), Some(bound))?)
}

/// One instance of a listed Klein product rule: `left • right = result`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleinRuleInstance {
    pub rule: &'static str,
    pub left: KleinCoord,
    pub right: KleinCoord,
    pub result: KleinCoord,
}

/// Instances of the explicit case list for the Klein germ with all
/// exponents in `0..=max`.
pub fn klein_listed_products(m: usize, max: i64) -> Vec<KleinRuleInstance> {
    let m = m as i64;
    let b = |k: i64| (0, k);
    let ab = |k: i64| (1, k);
    let ba = |k: i64| (1, -k);
    let aba = |k: i64| (2, -k);
    let a = (1, 0);
    let mut out = Vec::new();
    let mut push = |rule: &'static str, left, right, result| out.push(KleinRuleInstance { rule, left, right, result });
    for x in 0..=max {
        push("1*x", (0, 0), b(x), b(x));
        push("b^r*a", b(x), a, ba(x));
        if x >= m {
            push("a*b^k", a, b(x), ab(x));
            push("a*b^na", a, ba(x), aba(x));
        }
        for y in 0..=max {
            push("b^r*b^k", b(x), b(y), b(x + y));
            push("b^r*b^na", b(x), ba(y), ba(x + y));
            push("ab^(m+t)*b^k", ab(m + x), b(y), ab(m + x + y));
            push("ab^(m+t)*b^na", ab(m + x), ba(y), aba(m + x + y));
            let (r, p) = (x, y);
            if r == m + p {
                push("b^r*ab^(m+p)", b(r), ab(m + p), a);
            } else if r > m + p && r - p >= 2 * m {
                push("b^r*ab^(m+p)", b(r), ab(m + p), ba(r - m - p));
            } else if r < m + p && p >= r {
                push("b^r*ab^(m+p)", b(r), ab(m + p), ab(m + p - r));
            }
            let q = y;
            if r < q + m && q >= r {
                push("b^r*ab^(m+q)a", b(r), aba(m + q), aba(q + m - r));
            }
            let (s, k) = (x, y);
            if s == k {
                push("b^sa*b^k", ba(s), b(k), a);
            } else if s > k && s - k >= m {
                push("b^sa*b^k", ba(s), b(k), ba(s - k));
            } else if s < k && k - s >= m {
                push("b^sa*b^k", ba(s), b(k), ab(k - s));
            }
            let (t, p) = (x, y);
            if t - p >= m {
                push("ab^(m+t)*ab^(m+p)", ab(m + t), ab(m + p), aba(t - p));
            }
            let (p, k) = (x, y);
            if m + p > k && p >= k {
                push("ab^(m+p)*ab^k", ab(m + p), ab(k), aba(m + p - k));
            }
        }
    }
    out
}

// ---- free abelian ----

fn support_name(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| format!("a{}", i + 1)).collect()
}

/// Germ of 0/1-vectors with products on disjoint supports.
pub fn freeabelian_germ(n: usize) -> Result<Germ, ZooError> {
    if !(1..=6).contains(&n) {
        return Err(ZooError::UnsupportedParameter(format!("freeabelian:n={n}")));
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    let index: HashMap<u32, ElemId> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let elements = masks
        .iter()
        .enumerate()
        .map(|(i, &m)| Element {
            name: support_name(m, n),
            source: 0,
            target: 0,
            is_identity: i == 0,
            inverse: (i == 0).then_some(0),
            in_domain: true,
        })
        .collect();
    let product = |x: ElemId, y: ElemId| {
        let (u, v) = (masks[x], masks[y]);
        if u & v == 0 {
            Product::Defined(index[&(u | v)])
        } else {
            Product::Undefined
        }
    };
    Ok(Germ::new(&format!("freeabelian:n={n}"), vec!["*".into()], elements, &product, None, None)?)
}

pub fn freeabelian_presentation(n: usize) -> Presentation {
    let mut text = String::new();
    for i in 1..=n {
        text.push_str(&format!("edge a{i}\n"));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            text.push_str(&format!("rel a{j} a{i} = a{i} a{j}\n"));
        }
    }
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    text.push_str(&format!("order deglex {}\n", names.join(" < ")));
    presentation(&text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAbelianNf {
    /// Power of the all-ones vector.
    pub delta_power: u64,
    pub blocks: Vec<Vec<u8>>,
}

impl FreeAbelianNf {
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.delta_power {
            0 => {}
            1 => parts.push("Δ".to_string()),
            d => parts.push(format!("Δ^{d}")),
        }
        for b in &self.blocks {
            let s: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            parts.push(format!("({})", s.join(",")));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

/// `Δ^d η_1 ⋯ η_p` with strictly shrinking supports.
pub fn freeabelian_nf(counts: &[u64]) -> FreeAbelianNf {
    let d = counts.iter().copied().min().unwrap_or(0);
    let top = counts.iter().copied().max().unwrap_or(0);
    let blocks = (d + 1..=top).map(|k| counts.iter().map(|&c| u8::from(c >= k)).collect()).collect();
    FreeAbelianNf { delta_power: d, blocks }
}

// ---- squarefree words ----

/// No factor `xx` for a letter x.
pub fn is_squarefree<T: PartialEq>(w: &[T]) -> bool {
    w.windows(2).all(|p| p[0] != p[1])
}

/// Splits off longest squarefree prefixes.
pub fn squarefree_normalize<T: PartialEq + Clone>(w: &[T]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut rest = w;
    while !rest.is_empty() {
        let k = (1..=rest.len()).rev().find(|&k| is_squarefree(&rest[..k])).unwrap();
        out.push(rest[..k].to_vec());
        rest = &rest[k..];
    }
    out
}

// ---- the two-object category ----

/// Germ on irreducible paths of length at most two, with tight products.
pub fn dcat_germ(p: &Presentation) -> Result<Germ, ZooError> {
    let sys = ReductionSystem::from_presentation(p).map_err(|e| ZooError::Other(e.to_string()))?;
    let done = sys.complete(64, DEFAULT_FUEL).map_err(|e| ZooError::Other(format!("{e:?}")))?;
    let family = done.irr_up_to(2);
    Ok(build_upsilon("dcat", &done, &family, Definedness::InFamilyTight, DEFAULT_FUEL)?)
}
