//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions return `Result<String, String>` so they can be
//! tested natively; the `#[wasm_bindgen]` wrappers turn errors into JS
//! exceptions.

use fracmono::monodromy::{analyze, AnalyzeOptions, LoopSpec};
use fracmono::plot::{default_window, Diagram};
use fracmono::systems::{catalog_system, critical_scan, ScanOptions, Window};
use fracmono::{Cycle, Rational, SeifertData, Transport};
use wasm_bindgen::prelude::*;

/// Largest scan grid accepted from the page; the browser runs single-threaded.
pub const MAX_GRID: u32 = 10;

fn parse_loop(spec: &str) -> Result<Option<LoopSpec>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(None);
    }
    spec.parse::<LoopSpec>().map(Some).map_err(|e| e.to_string())
}

/// SVG bifurcation diagram. `window` may be empty for the system default,
/// `loop_spec` may be empty for no loop.
pub fn bifurcation_svg(system: &str, window: &str, grid: u32, loop_spec: &str) -> Result<String, String> {
    let sys = catalog_system(system, &[]).map_err(|e| e.to_string())?;
    let window = if window.trim().is_empty() {
        default_window(&*sys)
    } else {
        window.parse::<Window>().map_err(|e| e.to_string())?
    };
    if grid == 0 || grid > MAX_GRID {
        return Err(format!("grid must be between 1 and {MAX_GRID}"));
    }
    let lp = parse_loop(loop_spec)?;
    let scan = critical_scan(
        &*sys,
        &window,
        &ScanOptions {
            grid: grid as usize,
            ..Default::default()
        },
    );
    Ok(Diagram::new(&*sys, window, Some(&scan), lp.as_ref()).to_svg())
}

/// Monodromy certificate of a loop as pretty-printed JSON.
pub fn analyze_loop(system: &str, loop_spec: &str) -> Result<String, String> {
    let sys = catalog_system(system, &[]).map_err(|e| e.to_string())?;
    let lp = parse_loop(loop_spec)?.ok_or("a loop is required")?;
    let cert = analyze(&*sys, &lp, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())
}

/// Image of the cycle `p,q` under parallel transport, or `NOT_TRANSPORTABLE`.
pub fn transport_cycle(euler: &str, orders: &str, cycle: &str) -> Result<String, String> {
    let e: Rational = euler
        .trim()
        .parse()
        .map_err(|e: fracmono::qalgebra::QError| e.to_string())?;
    let orders = orders
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| format!("order {t:?} is not a positive integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let c: Cycle = cycle.parse().map_err(|e: fracmono::qalgebra::QError| e.to_string())?;
    let data = SeifertData::new(e, orders, "web").map_err(|e| e.to_string())?;
    Ok(match data.transport(c) {
        Transport::Image(img) => img.to_string(),
        Transport::NotTransportable => "NOT_TRANSPORTABLE".to_string(),
    })
}

#[wasm_bindgen(js_name = bifurcationSvg)]
pub fn bifurcation_svg_js(system: &str, window: &str, grid: u32, loop_spec: &str) -> Result<String, JsError> {
    bifurcation_svg(system, window, grid, loop_spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyzeLoop)]
pub fn analyze_loop_js(system: &str, loop_spec: &str) -> Result<String, JsError> {
    analyze_loop(system, loop_spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = transportCycle)]
pub fn transport_cycle_js(euler: &str, orders: &str, cycle: &str) -> Result<String, JsError> {
    transport_cycle(euler, orders, cycle).map_err(|e| JsError::new(&e))
}
