//! wasm-bindgen wrappers for the static demo page in `www/`.
//!
//! Each exported function takes plain text and returns plain text, so the
//! page stays a few lines of JavaScript. The `*_text` functions carry the
//! logic and are what the native tests exercise.

use wasm_bindgen::prelude::*;

use garside_kit::coxeter::parse_coxeter;
use garside_kit::garside_zoo::{braid_greedy, parse_sigma_word};
use garside_kit::presentation::parse_presentation;
use garside_kit::rewrite::{ReductionSystem, DEFAULT_FUEL};

pub const MAX_BRAID_STRANDS: usize = 5;
pub const MAX_RULES: usize = 64;

pub const SAMPLE_COXETER: &str = include_str!("../../core/data/rank4.cox");
pub const SAMPLE_PRESENTATION: &str = include_str!("../../core/data/dcat.pres");

/// Number-game normal form, one position per line, NF on the last line.
pub fn coxeter_trace_text(system: &str, word: &str) -> Result<String, String> {
    let sys = parse_coxeter(system).map_err(|e| e.to_string())?;
    let w = sys.parse_word(word).map_err(|e| e.to_string())?;
    let (nf, trace) = sys.normal_form_traced(&w, DEFAULT_FUEL).map_err(|e| e.to_string())?;
    let mut out = format!("start {}\n", sys.start_position(&w));
    for p in &trace {
        out.push_str(&format!("{p}\n"));
    }
    out.push_str(&format!("NF {}", sys.render_word(&nf)));
    Ok(out)
}

/// Left-greedy normal form of a positive braid word on `n` strands.
pub fn braid_greedy_text(n: usize, word: &str) -> Result<String, String> {
    if !(2..=MAX_BRAID_STRANDS).contains(&n) {
        return Err(format!("strand count must be between 2 and {MAX_BRAID_STRANDS}"));
    }
    let w = parse_sigma_word(n, word).map_err(|e| e.to_string())?;
    let nf = braid_greedy(n, &w, DEFAULT_FUEL).map_err(|e| e.to_string())?;
    if nf.is_empty() {
        return Ok("1".into());
    }
    Ok(nf.iter().map(|s| s.render()).collect::<Vec<_>>().join(" · "))
}

/// Completed rule set, one rule per line.
pub fn complete_text(presentation: &str) -> Result<String, String> {
    let p = parse_presentation(presentation).map_err(|e| e.to_string())?;
    let sys = ReductionSystem::from_presentation(&p).map_err(|e| e.to_string())?;
    let done = sys.complete(MAX_RULES, DEFAULT_FUEL).map_err(|e| e.to_string())?;
    Ok(done.rules().iter().map(|r| done.render_rule(r)).collect::<Vec<_>>().join("\n"))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coxeter_trace(system: &str, word: &str) -> Result<String, JsError> {
    js(coxeter_trace_text(system, word))
}

#[wasm_bindgen]
pub fn braid_normal_form(n: usize, word: &str) -> Result<String, JsError> {
    js(braid_greedy_text(n, word))
}

#[wasm_bindgen]
pub fn complete(presentation: &str) -> Result<String, JsError> {
    js(complete_text(presentation))
}

#[wasm_bindgen]
pub fn sample_coxeter() -> String {
    SAMPLE_COXETER.into()
}

#[wasm_bindgen]
pub fn sample_presentation() -> String {
    SAMPLE_PRESENTATION.into()
}
