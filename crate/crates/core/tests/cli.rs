use garside_kit::cli::{run, RunOutput};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn kit(args: &[&str]) -> RunOutput {
    run(std::iter::once("garside-kit").chain(args.iter().copied()))
}

#[test]
fn completes_dcat() {
    let out = kit(&["complete", &data("dcat.pres")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut rules: Vec<&str> = out.stdout.lines().collect();
    rules.sort();
    assert_eq!(rules, ["cba -> bac", "cc -> ba", "dab -> abd", "dd -> ab"]);
}

#[test]
fn normalizes_against_completed_klein() {
    let out = kit(&["normalize", &data("klein.pres"), "b a a"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "aab");
}

#[test]
fn lists_irreducibles() {
    let out = kit(&["irr", &data("klein.pres"), "--max-len", "2"]);
    assert_eq!(out.stdout.lines().collect::<Vec<_>>(), ["1", "a", "b", "aa", "ab", "ba", "bb"]);
}

#[test]
fn b3_germ_is_garside() {
    let out = kit(&["germ-check", "--builtin", "b3table"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("domain: 6 (exhaustive)"));
    assert!(out.stdout.ends_with("verdict: garside\n"));
}

#[test]
fn germ_file_matches_builtin() {
    let out = kit(&["germ-check", &data("b3.germ")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("verdict: garside"));
}

#[test]
fn dcat_germ_is_rejected() {
    let out = kit(&["germ-check", "--builtin", "dcat"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("greatest-i: missing"));
    assert!(out.stdout.contains("verdict: not-garside"));
}

#[test]
fn klein_reports_bound() {
    let out = kit(&["germ-check", "--builtin", "klein:m=1", "--bound", "4"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("verified up to bound 4"));
}

#[test]
fn germ_normalize_braid() {
    let out = kit(&["germ-normalize", "s1 s2 s1 s1", "--builtin", "braid:3"]);
    assert_eq!(out.stdout.trim(), "s1s2s1·s1");
    let right = kit(&["germ-normalize", "s1 s2 s1 s1", "--builtin", "braid:3", "--strategy", "rightmost"]);
    assert_eq!(right.stdout, out.stdout);
}

#[test]
fn coxeter_trace_in_json_lines() {
    let out = kit(&["--format", "json-lines", "coxeter-nf", &data("rank4.cox"), "babcdb", "--trace"]);
    let lines: Vec<serde_json::Value> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0]["value"], "(-3,-6,14,7)");
    assert_eq!(lines[6]["value"], "(1,1,1,1)");
    assert_eq!(lines[7]["key"], "coxeter-nf");
    assert_eq!(lines[7]["value"], "abacbd");
}

#[test]
fn oracle_answers() {
    assert_eq!(kit(&["oracle-eq", &data("klein.pres"), "b a b", "a"]).stdout.trim(), "equal");
    assert_eq!(kit(&["oracle-eq", &data("klein.pres"), "b", "a"]).stdout.trim(), "distinct");
}

#[test]
fn fuel_flag_limits_work() {
    let out = kit(&["--fuel", "1", "normalize", &data("klein.pres"), "b a b a b a b a"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn usage_errors() {
    assert_eq!(kit(&["normalize", &data("klein.pres"), "zz"]).code, 2);
    assert_eq!(kit(&["germ-check", "--builtin", "klein:m=9"]).code, 2);
    assert_eq!(kit(&["no-such-verb"]).code, 2);
    assert_eq!(kit(&["complete", "/nonexistent/file.pres"]).code, 2);
}
