//! Command-line front end. [`run`] is pure so it can be tested directly.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::coxeter::parse_coxeter;
use crate::garside_zoo::{
    braid_germ, braid_greedy_with, load_builtin, parse_builtin, parse_sigma_word, BuiltinSpec, DEFAULT_KLEIN_BOUND,
};
use crate::germ::{parse_germ, AmbiguityOutcome, Germ, Outcome, Verdict};
use crate::presentation::{parse_presentation, presentation_registry, Presentation, DEFAULT_REGISTRY_BOUND};
use crate::rewrite::{word_problem_oracle, Congruence, OracleAnswer, ReductionSystem, Strategy, DEFAULT_FUEL};

pub const FUEL_ENV: &str = "GARSIDE_FUEL";

#[derive(Parser, Debug)]
#[command(name = "garside-kit", version, about = "Rewriting up to invertibles, Garside germs and greedy normal forms")]
struct Cli {
    /// Rewriting step budget (defaults to $GARSIDE_FUEL, then 100000).
    #[arg(long, global = true)]
    fuel: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Leftmost => Strategy::Leftmost,
            StrategyArg::Rightmost => Strategy::Rightmost,
        }
    }
}

#[derive(Args, Debug)]
struct GermSource {
    /// Germ file.
    file: Option<String>,
    /// Builtin instance, e.g. braid:n=4, klein:m=2, b3table, prpinv.
    #[arg(long)]
    builtin: Option<String>,
    /// Element bound for infinite germs.
    #[arg(long, default_value_t = DEFAULT_KLEIN_BOUND)]
    bound: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete a presentation and print the rules.
    Complete {
        file: String,
        #[arg(long, default_value_t = 64)]
        max_rules: usize,
    },
    /// Normal form of a word.
    Normalize {
        file: String,
        word: String,
        /// Use the oriented relations without completing.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 64)]
        max_rules: usize,
    },
    /// Irreducible words up to a length.
    Irr {
        file: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = 64)]
        max_rules: usize,
    },
    /// Check whether a germ is Garside.
    GermCheck {
        #[command(flatten)]
        source: GermSource,
        /// Require literal equality instead of deformation by invertibles.
        #[arg(long)]
        strict: bool,
    },
    /// Greedy normal form of a germ word.
    GermNormalize {
        /// Entries separated by spaces or `·`.
        word: String,
        #[arg(long)]
        germ: Option<String>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, default_value_t = DEFAULT_KLEIN_BOUND)]
        bound: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
    },
    /// Coxeter normal form by the number game.
    CoxeterNf {
        file: String,
        word: String,
        /// Print every position visited.
        #[arg(long)]
        trace: bool,
    },
    /// Greedy normal form of a positive braid word.
    BraidGreedy {
        word: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        builtin: Option<String>,
    },
    /// Decide u = v by breadth-first search over relations.
    OracleEq {
        file: String,
        u: String,
        v: String,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
}

/// Exit status, standard output and diagnostic output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(String),
    Usage(String),
}

struct Out {
    format: Format,
    lines: Vec<(Option<String>, String)>,
}

impl Out {
    fn kv(&mut self, k: &str, v: impl Into<String>) {
        self.lines.push((Some(k.to_string()), v.into()));
    }

    fn line(&mut self, v: impl Into<String>) {
        self.lines.push((None, v.into()));
    }

    fn render(&self, verb: &str) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            match self.format {
                Format::Text => match k {
                    Some(k) => s.push_str(&format!("{k}: {v}\n")),
                    None => s.push_str(&format!("{v}\n")),
                },
                Format::JsonLines => {
                    let key = k.clone().unwrap_or_else(|| verb.to_string());
                    s.push_str(&json!({ "key": key, "value": v }).to_string());
                    s.push('\n');
                }
            }
        }
        s
    }
}

/// Runs the command line `argv` (program name first).
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let fuel = cli.fuel.or_else(|| std::env::var(FUEL_ENV).ok().and_then(|v| v.parse().ok())).unwrap_or(DEFAULT_FUEL);
    let mut out = Out { format: cli.format, lines: Vec::new() };
    let verb = verb_name(&cli.command);
    let result = dispatch(cli.command, fuel, &mut out);
    let stdout = out.render(verb);
    match result {
        Ok(()) => RunOutput { code: 0, stdout, stderr: String::new() },
        Err(Failure::Domain(m)) => RunOutput { code: 1, stdout, stderr: format!("error: {m}\n") },
        Err(Failure::Usage(m)) => RunOutput { code: 2, stdout, stderr: format!("error: {m}\n") },
    }
}

fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Complete { .. } => "complete",
        Command::Normalize { .. } => "normalize",
        Command::Irr { .. } => "irr",
        Command::GermCheck { .. } => "germ-check",
        Command::GermNormalize { .. } => "germ-normalize",
        Command::CoxeterNf { .. } => "coxeter-nf",
        Command::BraidGreedy { .. } => "braid-greedy",
        Command::OracleEq { .. } => "oracle-eq",
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn load_presentation(path: &str) -> Result<Presentation, Failure> {
    parse_presentation(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))
}

fn base_system(p: &Presentation, fuel: usize) -> Result<ReductionSystem, Failure> {
    let sys = ReductionSystem::from_presentation(p).map_err(|e| Failure::Domain(e.to_string()))?;
    if p.inverse_pairs.is_empty() {
        return Ok(sys);
    }
    let canon = |w: &crate::paths::PathWord| sys.normalize(w, fuel).unwrap_or_else(|_| w.clone());
    let reg = presentation_registry(p, DEFAULT_REGISTRY_BOUND, &canon).map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(sys.clone().with_registry(reg).with_congruence(Congruence::Deformation { eq: None }))
}

fn completed(p: &Presentation, max_rules: usize, fuel: usize) -> Result<ReductionSystem, Failure> {
    base_system(p, fuel)?.complete(max_rules, fuel).map_err(|e| Failure::Domain(format!("completion failed: {e}")))
}

fn word(p: &Presentation, text: &str) -> Result<crate::paths::PathWord, Failure> {
    p.parse_word(text).map_err(|e| Failure::Usage(format!("{text}: {e}")))
}

fn load_germ(file: Option<&str>, builtin: Option<&str>, bound: usize) -> Result<Germ, Failure> {
    match (file, builtin) {
        (Some(f), None) => parse_germ(&read(f)?).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(b)) => {
            let spec = parse_builtin(b).map_err(|e| Failure::Usage(e.to_string()))?;
            load_builtin(&spec, bound).map(|(_, g)| g).map_err(|e| Failure::Usage(e.to_string()))
        }
        _ => Err(Failure::Usage("give exactly one of a germ file or --builtin".into())),
    }
}

fn dispatch(cmd: Command, fuel: usize, out: &mut Out) -> Result<(), Failure> {
    match cmd {
        Command::Complete { file, max_rules } => {
            let p = load_presentation(&file)?;
            let done = completed(&p, max_rules, fuel)?;
            for r in done.rules() {
                out.line(done.render_rule(r));
            }
            for (u, v) in done.facts() {
                out.kv("congruence", format!("{} ~ {}", done.render(u), done.render(v)));
            }
        }
        Command::Normalize { file, word: w, raw, strategy, max_rules } => {
            let p = load_presentation(&file)?;
            let sys = if raw { base_system(&p, fuel)? } else { completed(&p, max_rules, fuel)? };
            let w = word(&p, &w)?;
            let nf = sys.normalize_with(&w, fuel, strategy.into()).map_err(|e| Failure::Domain(e.to_string()))?;
            out.line(sys.render(&nf));
        }
        Command::Irr { file, max_len, raw, max_rules } => {
            let p = load_presentation(&file)?;
            let sys = if raw { base_system(&p, fuel)? } else { completed(&p, max_rules, fuel)? };
            for w in sys.irr_up_to(max_len) {
                out.line(sys.render(&w));
            }
        }
        Command::GermCheck { source, strict } => {
            let g = Arc::new(load_germ(source.file.as_deref(), source.builtin.as_deref(), source.bound)?);
            return germ_check(&g, strict, fuel, out);
        }
        Command::GermNormalize { word: w, germ, builtin, bound, strategy } => {
            let g = Arc::new(load_germ(germ.as_deref(), builtin.as_deref(), bound)?);
            let entries = g.parse_word(&w).map_err(|e| Failure::Usage(e.to_string()))?;
            let nf = g
                .upsilon_normalize_with(&entries, fuel, strategy.into())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            out.line(g.render(&nf));
        }
        Command::CoxeterNf { file, word: w, trace } => {
            let sys = parse_coxeter(&read(&file)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let w = sys.parse_word(&w).map_err(|e| Failure::Usage(e.to_string()))?;
            let (nf, positions) = sys.normal_form_traced(&w, fuel).map_err(|e| Failure::Domain(e.to_string()))?;
            if trace {
                for p in &positions {
                    out.kv("position", p.to_string());
                }
            }
            out.line(sys.render_word(&nf));
        }
        Command::BraidGreedy { word: w, n, builtin } => {
            let n = match (n, builtin) {
                (Some(n), None) => n,
                (None, Some(b)) => match parse_builtin(&b).map_err(|e| Failure::Usage(e.to_string()))? {
                    BuiltinSpec::Braid(n) => n,
                    _ => return Err(Failure::Usage(format!("{b} is not a braid builtin"))),
                },
                _ => return Err(Failure::Usage("give exactly one of --n or --builtin".into())),
            };
            let g = Arc::new(braid_germ(n).map_err(|e| Failure::Usage(e.to_string()))?);
            let letters = parse_sigma_word(n, &w).map_err(|e| Failure::Usage(e.to_string()))?;
            let nf = braid_greedy_with(&g, n, &letters, fuel).map_err(|e| Failure::Domain(e.to_string()))?;
            let blocks: Vec<String> = nf.iter().map(|s| s.render()).collect();
            out.line(if blocks.is_empty() { "1".to_string() } else { blocks.join("·") });
        }
        Command::OracleEq { file, u, v, cap } => {
            let p = load_presentation(&file)?;
            let (u, v) = (word(&p, &u)?, word(&p, &v)?);
            match word_problem_oracle(&p, &u, &v, cap) {
                OracleAnswer::Equal => out.line("equal"),
                OracleAnswer::Distinct => out.line("distinct"),
                OracleAnswer::Undecided => {
                    out.line("undecided");
                    return Err(Failure::Domain(format!("search cap {cap} reached")));
                }
            }
        }
    }
    Ok(())
}

fn triple(g: &Germ, a: &AmbiguityOutcome) -> String {
    let names: Vec<&str> = a.word.iter().map(|&x| g.name(x)).collect();
    format!("({})", names.join(", "))
}

fn witness(g: &Germ, w: &Option<Vec<usize>>) -> String {
    match w {
        None => "ok".into(),
        Some(v) => format!("fails at ({})", v.iter().map(|&x| g.name(x)).collect::<Vec<_>>().join(", ")),
    }
}

fn sweep_summary(s: &[AmbiguityOutcome]) -> String {
    let count = |o: Outcome| s.iter().filter(|a| a.outcome == o).count();
    format!(
        "{} total, {} resolved, {} up to deformation, {} unresolved, {} out of fuel",
        s.len(),
        count(Outcome::Resolved),
        count(Outcome::ResolvedUpToDeformation),
        count(Outcome::Unresolved),
        count(Outcome::FuelExhausted)
    )
}

fn germ_check(g: &Arc<Germ>, strict: bool, fuel: usize, out: &mut Out) -> Result<(), Failure> {
    let v = g.garside_check(strict, fuel);
    out.kv("germ", g.label.clone());
    out.kv("elements", g.len().to_string());
    match g.bound() {
        Some(b) => out.kv("domain", format!("{} (verified up to bound {b})", g.domain().len())),
        None => out.kv("domain", format!("{} (exhaustive)", g.domain().len())),
    }
    out.kv("congruence", if strict { "equality" } else { "deformation" });
    let ax = &v.axioms;
    out.kv("axiom identity", witness(g, &ax.identity));
    out.kv("axiom endpoint", witness(g, &ax.endpoint));
    out.kv("axiom inverses", witness(g, &ax.inverses));
    out.kv("axiom interchange", witness(g, &ax.interchange));
    out.kv("axiom left-associativity", witness(g, &ax.left_associative));
    out.kv("axiom right-associativity", witness(g, &ax.right_associative));
    out.kv("axiom left-cancellativity", witness(g, &ax.left_cancellative));
    out.kv("reductions", v.reductions.to_string());
    out.kv("reductions-bar", v.reductions_bar.to_string());
    out.kv("product-ambiguities", sweep_summary(&v.presentation_sweep));
    out.kv("reduction-ambiguities", sweep_summary(&v.reduction_sweep));
    for a in v.presentation_sweep.iter().chain(&v.reduction_sweep) {
        if a.outcome != Outcome::Resolved {
            out.kv(&format!("ambiguity {}", triple(g, a)), a.outcome.as_str());
        }
    }
    match v.greatest_i_missing {
        None => out.kv("greatest-i", "ok"),
        Some((a, b)) => out.kv("greatest-i", format!("missing at ({}, {})", g.name(a), g.name(b))),
    }
    match &v.verdict {
        Verdict::Garside => {
            out.kv("verdict", "garside");
            Ok(())
        }
        Verdict::NotGarside(r) => {
            out.kv("verdict", format!("not-garside: {r}"));
            Err(Failure::Domain(format!("not garside: {r}")))
        }
        Verdict::Inconclusive(r) => {
            out.kv("verdict", format!("inconclusive: {r}"));
            Err(Failure::Domain(format!("inconclusive: {r}")))
        }
        Verdict::OracleDisagreement(r) => {
            out.kv("verdict", format!("oracle-disagreement: {r}"));
            Err(Failure::Domain(format!("internal inconsistency: {r}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(name: &str) -> String {
        format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn coxeter_nf_verb() {
        let r = run(["garside-kit", "coxeter-nf", &data("rank4.cox"), "babcdb"]);
        assert_eq!((r.code, r.stdout.as_str()), (0, "abacbd\n"));
    }

    #[test]
    fn complete_verb() {
        let r = run(["garside-kit", "complete", &data("klein.pres")]);
        assert_eq!((r.code, r.stdout.as_str()), (0, "bab -> a\nbaa -> aab\n"));
    }

    #[test]
    fn prpinv_exit_codes() {
        let r = run(["garside-kit", "germ-check", "--builtin", "prpinv", "--strict"]);
        assert_eq!(r.code, 1);
        assert!(r.stdout.contains("ambiguity (p, r, q): unresolved"));
        let r = run(["garside-kit", "germ-check", "--builtin", "prpinv"]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert!(r.stdout.contains("ambiguity (p, r, q): resolved-up-to-deformation"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["garside-kit", "frobnicate"]).code, 2);
        let r = run(["garside-kit", "coxeter-nf", "/nonexistent.cox", "a"]);
        assert_eq!(r.code, 2);
        assert!(r.stderr.starts_with("error: "));
    }

    #[test]
    fn json_lines() {
        let r = run(["garside-kit", "--format", "json-lines", "braid-greedy", "--n", "3", "s1s2s1"]);
        assert_eq!(r.stdout, "{\"key\":\"braid-greedy\",\"value\":\"s1s2s1\"}\n");
    }
}
