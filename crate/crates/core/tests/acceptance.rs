//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances: all checks are exact (integer or symbolic); the Coxeter
//! real-arithmetic path is not exercised here. Seeds are fixed.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use garside_kit::cli::run;
use garside_kit::coxeter::{parse_coxeter, perm_of_word, sn_row_normal_form, CoxeterSystem, Position};
use garside_kit::garside_zoo::{
    artin_germ, braid_germ, braid_greedy_descent, braid_greedy_with, freeabelian_nf, load_builtin, parse_builtin,
    squarefree_normalize, SimpleElement,
};
use garside_kit::germ::{Germ, Outcome, Verdict};
use garside_kit::paths::{find_factors, PathWord};
use garside_kit::presentation::{parse_presentation, Presentation};
use garside_kit::rewrite::{word_problem_oracle, OracleAnswer, ReductionSystem, ResolutionStatus, Strategy};

const FUEL: usize = 100_000;
const SEED: u64 = 0x5eed_2024;

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).expect("data file")
}

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// 1
fn number_game() -> Check {
    let sys = parse_coxeter(&data("rank4.cox")).map_err(|e| e.to_string())?;
    ensure(sys.is_exact(), "rank-4 system should use integer arithmetic")?;
    let w = sys.parse_word("babcdb").map_err(|e| e.to_string())?;
    let start = sys.start_position(&w);
    ensure(start == Position::Exact(vec![-3, -6, 14, 7]), format!("start position {start}"))?;
    let nf = sys.render_word(&sys.normal_form(&w, FUEL).map_err(|e| e.to_string())?);
    ensure(nf == "abacbd", format!("NF {nf}"))?;
    Ok(format!("start {start}, NF {nf}"))
}

fn rule_set(sys: &ReductionSystem) -> BTreeSet<String> {
    sys.rules().iter().map(|r| sys.render_rule(r)).collect()
}

fn complete(text: &str) -> Result<ReductionSystem, String> {
    let p = parse_presentation(text).map_err(|e| e.to_string())?;
    let s = ReductionSystem::from_presentation(&p).map_err(|e| e.to_string())?;
    s.complete(64, FUEL).map_err(|e| e.to_string())
}

// 2
fn completion() -> Check {
    let klein = complete(&data("klein.pres"))?;
    let want: BTreeSet<String> = ["bab -> a", "baa -> aab"].iter().map(|s| s.to_string()).collect();
    ensure(rule_set(&klein) == want, format!("klein {:?}", rule_set(&klein)))?;
    let dcat = complete(&data("dcat.pres"))?;
    let want: BTreeSet<String> =
        ["dd -> ab", "cc -> ba", "dab -> abd", "cba -> bac"].iter().map(|s| s.to_string()).collect();
    ensure(rule_set(&dcat) == want, format!("dcat {:?}", rule_set(&dcat)))?;
    // b: y -> x cannot be followed by c: y -> y
    let p = parse_presentation(&data("dcat.pres")).unwrap();
    ensure(p.parse_word("bca").is_err(), "bca should not be a path")?;
    Ok("klein 2 rules, dcat 4 rules (cba -> bac)".into())
}

// 3
fn irr_enumeration() -> Check {
    let klein = complete(&data("klein.pres"))?;
    let got: BTreeSet<String> = klein.irr_up_to(6).iter().map(|w| klein.render(w)).collect();
    let mut want = BTreeSet::from(["1".to_string()]);
    let (a, b) = (|n: usize| "a".repeat(n), |n: usize| "b".repeat(n));
    for n in 1..=6 {
        for m in 1..=6 {
            for w in [a(n), b(m), a(n) + &b(m), b(m) + "a", a(n) + &b(m) + "a"] {
                if w.len() <= 6 {
                    want.insert(w);
                }
            }
        }
    }
    ensure(got == want, format!("{} vs {} words", got.len(), want.len()))?;
    Ok(format!("{} irreducible words up to length 6", got.len()))
}

// 4
fn germ_verdicts() -> Check {
    let specs = [
        "b3table",
        "klein:m=0",
        "klein:m=1",
        "klein:m=2",
        "freeabelian:n=2",
        "freeabelian:n=3",
        "braid:n=3",
        "braid:n=4",
    ];
    for s in specs {
        let (_, g) = load_builtin(&parse_builtin(s).unwrap(), 8).map_err(|e| e.to_string())?;
        let g = Arc::new(g);
        let v = g.garside_check(false, FUEL);
        ensure(v.reduction_sweep_ok() && v.greatest_i_missing.is_none(), format!("{s}: oracles {:?}", v.verdict))?;
        ensure(v.verdict == Verdict::Garside, format!("{s}: {:?}", v.verdict))?;
    }
    Ok(format!("{} instances Garside, both oracles positive", specs.len()))
}

// 5
fn prpinv() -> Check {
    let (_, g) = load_builtin(&parse_builtin("prpinv").unwrap(), 8).map_err(|e| e.to_string())?;
    let g = Arc::new(g);
    let id = |n: &str| g.id(n).unwrap();
    let word = vec![id("p"), id("r"), id("q")];
    let find = |strict: bool| {
        g.garside_check(strict, FUEL)
            .presentation_sweep
            .into_iter()
            .find(|a| a.word == word)
            .ok_or("ambiguity (p, r, q) missing")
    };
    let strict = find(true)?;
    ensure(strict.outcome == Outcome::Unresolved, format!("strict: {:?}", strict.outcome))?;
    let loose = find(false)?;
    ensure(loose.outcome == Outcome::ResolvedUpToDeformation, format!("deformation: {:?}", loose.outcome))?;
    ensure(loose.chain == vec![id("1"), id("r"), id("1")], format!("witness {}", g.render(&loose.chain)))?;
    let r = run(["garside-kit", "germ-check", "--builtin", "prpinv", "--strict"]);
    ensure(r.code == 1 && r.stdout.contains("ambiguity (p, r, q): unresolved"), "cli --strict")?;
    let r = run(["garside-kit", "germ-check", "--builtin", "prpinv"]);
    ensure(r.code == 0 && r.stdout.contains("ambiguity (p, r, q): resolved-up-to-deformation"), "cli")?;
    Ok("strict: unresolved; up to deformation: resolved with eps = r".into())
}

fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

struct BraidCtx {
    n: usize,
    germ: Arc<Germ>,
    artin: Arc<Germ>,
    cox: CoxeterSystem,
    pres: Presentation,
}

fn braid_case(ctx: &BraidCtx, w: &[usize]) -> Result<(), String> {
    let nf = braid_greedy_with(&ctx.germ, ctx.n, w, FUEL).map_err(|e| e.to_string())?;
    // (a) adjacent pairs are greedy
    for p in nf.windows(2) {
        ensure(ctx.cox.angle(&p[0].word, &p[1].word), format!("{w:?}: not greedy"))?;
    }
    // (b) same element
    let flat: Vec<usize> = nf.iter().flat_map(|s| s.word.clone()).collect();
    let (u, v) = (ctx.cox.word_to_path(&ctx.pres, w), ctx.cox.word_to_path(&ctx.pres, &flat));
    ensure(word_problem_oracle(&ctx.pres, &u, &v, 1_000_000) == OracleAnswer::Equal, format!("{w:?}: oracle"))?;
    // (c) generic engine on the Coxeter-built germ, and the descent algorithm
    let entries: Vec<usize> = w.iter().map(|&s| ctx.artin.id(&ctx.cox.names()[s]).unwrap()).collect();
    let generic = ctx.artin.upsilon_normalize(&entries, FUEL).map_err(|e| e.to_string())?;
    let generic: Vec<SimpleElement> = generic
        .iter()
        .map(|&x| {
            let word = ctx.cox.parse_word(ctx.artin.name(x)).unwrap();
            SimpleElement::from_word(ctx.n, &word)
        })
        .collect();
    ensure(generic == nf, format!("{w:?}: generic engine differs"))?;
    ensure(braid_greedy_descent(ctx.n, w) == nf, format!("{w:?}: descent algorithm differs"))?;
    // (d) strategies
    let entries: Vec<usize> = w.iter().map(|&s| ctx.germ.id(&format!("s{}", s + 1)).unwrap()).collect();
    let right = ctx.germ.upsilon_normalize_with(&entries, FUEL, Strategy::Rightmost).map_err(|e| e.to_string())?;
    let left = ctx.germ.upsilon_normalize_with(&entries, FUEL, Strategy::Leftmost).map_err(|e| e.to_string())?;
    ensure(left == right, format!("{w:?}: strategies differ"))?;
    Ok(())
}

// 6
fn braid_greedy_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    for n in [3, 4] {
        let cox = CoxeterSystem::symmetric_group(n);
        let ctx = BraidCtx {
            n,
            germ: Arc::new(braid_germ(n).map_err(|e| e.to_string())?),
            artin: Arc::new(artin_germ(&cox).map_err(|e| e.to_string())?),
            pres: cox.artin_presentation(),
            cox,
        };
        for w in all_words(n - 1, 6) {
            braid_case(&ctx, &w)?;
            total += 1;
        }
        for _ in 0..1000 {
            let len = rng.gen_range(0..=10);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n - 1)).collect();
            braid_case(&ctx, &w)?;
            total += 1;
        }
    }
    Ok(format!("{total} words checked"))
}

// 7
fn row_forms() -> Check {
    let n = 4;
    let sys = CoxeterSystem::symmetric_group(n);
    let mut seen = HashSet::new();
    for w in all_words(n - 1, 6) {
        let perm = perm_of_word(n, &w);
        if !seen.insert(perm.clone()) {
            continue;
        }
        let (row, starts) = sn_row_normal_form(n, &perm).map_err(|e| e.to_string())?;
        // rows s_k s_{k-1} .. s_{i_k}, 1-based with i_k <= k+1
        let mut expect = Vec::new();
        for (k0, &i) in starts.iter().enumerate() {
            let k = k0 + 1;
            ensure(i >= 1 && i <= k + 1, format!("start {i} in row {k}"))?;
            expect.extend((i..=k).rev().map(|j| j - 1));
        }
        ensure(expect == row, format!("{perm:?}: row pattern"))?;
        ensure(perm_of_word(n, &row) == perm, format!("{perm:?}: row form is another element"))?;
        let nf = sys.normal_form(&row, FUEL).map_err(|e| e.to_string())?;
        ensure(nf == row, format!("{perm:?}: number game gives {nf:?}, rows give {row:?}"))?;
    }
    ensure(seen.len() == 24, format!("{} permutations", seen.len()))?;
    let forms: HashSet<Vec<usize>> = seen.iter().map(|p| sn_row_normal_form(n, p).unwrap().0).collect();
    ensure(forms.len() == 24, "row forms not distinct")?;
    Ok("24 distinct row forms equal the number-game normal forms".into())
}

// 8
fn small_examples() -> Check {
    let blocks = |w: &str| -> Vec<String> {
        let v: Vec<char> = w.chars().collect();
        squarefree_normalize(&v).iter().map(|b| b.iter().collect()).collect()
    };
    let stated = "abbcabccbabca";
    let got = blocks(stated);
    ensure(got.concat() == stated, "blocks do not concatenate back")?;
    ensure(got == ["ab", "bcabc", "cbabca"], format!("{got:?}"))?;
    // the displayed blocks concatenate to this word
    let displayed = blocks("abbcaccbabca");
    ensure(displayed == ["ab", "bcac", "cbabca"], format!("{displayed:?}"))?;
    let nf = freeabelian_nf(&[5, 4, 3]);
    ensure(nf.render() == "Δ^3·(1,1,0)·(1,0,0)", nf.render())?;
    Ok(format!("{} ; ab·bcac·cbabca for ab²cac²babca ; {}", got.join("·"), nf.render()))
}

fn random_system(rng: &mut ChaCha8Rng) -> Option<Presentation> {
    let k = rng.gen_range(2..=3);
    let names = ["a", "b", "c"];
    let mut text = String::new();
    for n in &names[..k] {
        text.push_str(&format!("edge {n}\n"));
    }
    let rules = rng.gen_range(1..=3);
    for _ in 0..rules {
        let len = rng.gen_range(1..=3);
        let w = |rng: &mut ChaCha8Rng| -> String {
            (0..len).map(|_| names[rng.gen_range(0..k)]).collect::<Vec<_>>().join(" ")
        };
        let (l, r) = (w(rng), w(rng));
        if l == r {
            continue;
        }
        text.push_str(&format!("rel {l} = {r}\n"));
    }
    text.push_str(&format!("order deglex {}\n", names[..k].join(" < ")));
    parse_presentation(&text).ok()
}

fn random_normal_form(sys: &ReductionSystem, w: &PathWord, rng: &mut ChaCha8Rng) -> PathWord {
    let mut cur = w.clone();
    loop {
        let next = sys.rewrite_once(&cur);
        if next.is_empty() {
            return cur;
        }
        cur = next[rng.gen_range(0..next.len())].2.clone();
    }
}

/// Equivalence class of `u` under the relations read both ways.
fn class_of(p: &Presentation, u: &PathWord) -> HashSet<PathWord> {
    let mut seen = HashSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(w) = queue.pop_front() {
        for (l, r) in &p.relations {
            for (from, to) in [(l, r), (r, l)] {
                for occ in find_factors(&w, from) {
                    let v = w.splice(occ, to);
                    if seen.insert(v.clone()) {
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    seen
}

// 9
fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut confluent, mut witnessed, mut systems) = (0, 0, 0);
    while systems < 200 {
        let Some(p) = random_system(&mut rng) else { continue };
        let Ok(sys) = ReductionSystem::from_presentation(&p) else { continue };
        systems += 1;
        let reports = sys.resolve_all(FUEL);
        let unresolved: Vec<_> = reports.iter().filter(|r| !r.is_resolved()).collect();
        if unresolved.is_empty() {
            confluent += 1;
            let words = sys.graph().enumerate_paths(6);
            for w in &words {
                let l = sys.normalize_with(w, FUEL, Strategy::Leftmost).map_err(|e| e.to_string())?;
                let r = sys.normalize_with(w, FUEL, Strategy::Rightmost).map_err(|e| e.to_string())?;
                let x = random_normal_form(&sys, w, &mut rng);
                ensure(l == r && r == x, format!("strategies differ on {} in {}", sys.render(w), p.to_text()))?;
            }
            let irr: HashSet<PathWord> = words.iter().filter(|w| sys.is_irreducible(w)).cloned().collect();
            for u in &irr {
                let c = class_of(&p, u);
                ensure(c.iter().all(|v| v == u || !irr.contains(v)), format!("{} shares a class", sys.render(u)))?;
            }
            let list: Vec<&PathWord> = irr.iter().collect();
            for _ in 0..10.min(list.len() * list.len()) {
                let (u, v) = (list[rng.gen_range(0..list.len())], list[rng.gen_range(0..list.len())]);
                if u != v {
                    ensure(word_problem_oracle(&p, u, v, 100_000) == OracleAnswer::Distinct, "oracle not Distinct")?;
                }
            }
        } else {
            let rep = unresolved[0];
            let ResolutionStatus::Unresolved { left, right } = &rep.status else {
                return Err(format!("fuel exhausted in {}", p.to_text()));
            };
            let w = sys.ambiguity_word(&rep.ambiguity);
            let (r1, r2) = sys.reducts(&rep.ambiguity);
            let reach = |from: &PathWord, to: &PathWord| sys.normalize(from, FUEL).map(|n| &n == to).unwrap_or(false);
            ensure(
                sys.rewrite_once(&w).iter().any(|x| x.2 == r1) && sys.rewrite_once(&w).iter().any(|x| x.2 == r2),
                "reducts",
            )?;
            ensure(reach(&r1, left) && reach(&r2, right), "witness normal forms not reached")?;
            ensure(left != right && sys.is_irreducible(left) && sys.is_irreducible(right), "witness")?;
            witnessed += 1;
        }
    }
    Ok(format!("{systems} systems: {confluent} confluent checked, {witnessed} with witness words"))
}

// 10
fn germ_laws() -> Check {
    let specs = [
        "b3table",
        "prpinv",
        "dcat",
        "klein:m=0",
        "klein:m=1",
        "klein:m=2",
        "klein:m=3",
        "klein:m=4",
        "freeabelian:n=1",
        "freeabelian:n=2",
        "freeabelian:n=3",
        "freeabelian:n=4",
        "braid:n=2",
        "braid:n=3",
        "braid:n=4",
    ];
    let mut lemma_failures = Vec::new();
    for s in specs {
        let (_, g) = load_builtin(&parse_builtin(s).unwrap(), 8).map_err(|e| e.to_string())?;
        let g = Arc::new(g);
        if let Some((a, b)) = g.j_invert_counterexample() {
            return Err(format!("{s}: J=invert fails at ({}, {})", g.name(a), g.name(b)));
        }
        let garside = g.garside_check(false, FUEL).is_garside();
        let total = g.all_i_sets_totally_preordered();
        if garside != total {
            let dom = g.domain();
            let pair = dom
                .iter()
                .flat_map(|&a| dom.iter().map(move |&b| (a, b)))
                .find(|&(a, b)| !g.is_identity(a) && g.composable(a, b) && !g.i_set_totally_preordered(a, b))
                .or_else(|| {
                    dom.iter()
                        .flat_map(|&a| dom.iter().map(move |&b| (a, b)))
                        .find(|&(a, b)| !g.i_set_totally_preordered(a, b))
                });
            let at = pair.map(|(a, b)| format!(" I({}, {})", g.name(a), g.name(b))).unwrap_or_default();
            lemma_failures.push(format!("{s} garside={garside} total={total}{at}"));
        }
    }
    if lemma_failures.is_empty() {
        Ok(format!("J=invert and total-preorder lemma hold on {} germs", specs.len()))
    } else {
        Err(format!("J=invert holds on all {}; total-preorder lemma fails: {}", specs.len(), lemma_failures.join("; ")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("number game start position and normal form", Duration::from_secs(1), number_game),
        ("completion of klein and dcat", Duration::from_secs(1), completion),
        ("klein irreducibles up to length 6", Duration::from_secs(1), irr_enumeration),
        ("germ verdicts", Duration::from_secs(30), germ_verdicts),
        ("prpinv strict vs deformation", Duration::from_secs(1), prpinv),
        ("braid greedy soundness", Duration::from_secs(60), braid_greedy_soundness),
        ("S_4 row forms", Duration::from_secs(5), row_forms),
        ("squarefree and free abelian examples", Duration::from_secs(1), small_examples),
        ("random systems property suite", Duration::from_secs(120), property_suites),
        ("germ law cross-checks", Duration::from_secs(30), germ_laws),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = f();
        let dt = t.elapsed();
        let (status, detail) = match result {
            Ok(d) if dt <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status}: {name} [{} ms / {} ms] {detail}",
            i + 1,
            dt.as_millis(),
            budget.as_millis()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
