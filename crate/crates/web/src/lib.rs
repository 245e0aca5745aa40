//! Browser bindings. Each entry point takes plain strings from the page and
//! returns a JSON document (or an error message) so the JavaScript side only
//! has to draw.
//!
//! Factors are catalog descriptors: `sphere:n`, `rp:n`, or with an explicit
//! eigenvalue count `sphere:n:count`. Without a count, just enough eigenvalues
//! are listed to cover the requested window.

use num_traits::Signed;
use serde::Serialize;
use wasm_bindgen::prelude::*;
use yamabif::bifurcation::{enumerate_instants, Classification};
use yamabif::family::ProductFamily;
use yamabif::rational::{format_rational, parse_rational, to_f64, BigRational};
use yamabif::report::analyze;
use yamabif::spectra::Catalog;
use yamabif::sphere_case::yamabe_obstruction;
use yamabif::Error;

type Out<T> = std::result::Result<T, String>;

struct Descriptor {
    catalog: Catalog,
    n: u32,
    count: Option<usize>,
}

fn parse_descriptor(s: &str) -> Out<Descriptor> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let bad = || format!("expected sphere:n, rp:n or sphere:n:count, got {s:?}");
    let (name, n, count) = match parts[..] {
        [name, n] => (name, n, None),
        [name, n, count] => (name, n, Some(count.parse::<usize>().map_err(|_| bad())?)),
        _ => return Err(bad()),
    };
    let catalog = Catalog::parse(name).ok_or_else(bad)?;
    let n = n.parse::<u32>().map_err(|_| bad())?;
    Ok(Descriptor { catalog, n, count })
}

/// Builds the family, growing automatically sized factors until `window` is
/// covered. Explicit counts are left alone so their truncation errors surface.
fn load_pair(
    d0: &str,
    d1: &str,
    window: Option<(&BigRational, &BigRational)>,
) -> Out<ProductFamily> {
    let ds = [parse_descriptor(d0)?, parse_descriptor(d1)?];
    let mut counts = [ds[0].count.unwrap_or(2), ds[1].count.unwrap_or(2)];
    loop {
        let f0 = ds[0]
            .catalog
            .spectrum(ds[0].n, counts[0])
            .map_err(|e| e.to_string())?;
        let f1 = ds[1]
            .catalog
            .spectrum(ds[1].n, counts[1])
            .map_err(|e| e.to_string())?;
        let fam = ProductFamily::new(f0, f1).map_err(|e| e.to_string())?;
        if let Some((lo, hi)) = window {
            if let Err(Error::InsufficientTruncation {
                factor,
                needed_eigenvalue,
                ..
            }) = fam.check_window_truncation(lo, hi)
            {
                let d = &ds[factor];
                if d.count.is_none() {
                    counts[factor] = d.catalog.count_reaching(d.n, &needed_eigenvalue);
                    continue;
                }
            }
        }
        return Ok(fam);
    }
}

fn window(lo: &str, hi: &str) -> Out<(BigRational, BigRational)> {
    let lo = parse_rational(lo).map_err(|e| e.to_string())?;
    let hi = parse_rational(hi).map_err(|e| e.to_string())?;
    if !lo.is_positive() || lo >= hi {
        return Err(format!(
            "window must satisfy 0 < lo < hi, got [{}, {}]",
            format_rational(&lo),
            format_rational(&hi)
        ));
    }
    Ok((lo, hi))
}

/// `samples` points spread evenly in `log λ` over `[lo, hi]`.
fn log_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let samples = samples.clamp(2, 4000);
    let (a, b) = (lo.ln(), hi.ln());
    (0..samples)
        .map(|k| (a + (b - a) * k as f64 / (samples - 1) as f64).exp())
        .collect()
}

#[derive(Serialize)]
struct InstantView {
    lambda: String,
    value: f64,
    delta_n: i64,
    classification: Classification,
    contributors: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct BranchView {
    i: usize,
    j: usize,
    multiplicity: u64,
    sigma: Vec<f64>,
}

#[derive(Serialize)]
struct DiagramView {
    factors: [String; 2],
    counts: [usize; 2],
    lambdas: Vec<f64>,
    branches: Vec<BranchView>,
    instants: Vec<InstantView>,
}

/// Branch curves `σ_{i,j}(λ) = A_i + B_j/λ` with `i, j ≤ max_index` sampled
/// on a log grid, plus every instant in the window.
pub fn branch_diagram(
    d0: &str,
    d1: &str,
    lo: &str,
    hi: &str,
    samples: usize,
    max_index: usize,
) -> Out<String> {
    let (lo, hi) = window(lo, hi)?;
    let fam = load_pair(d0, d1, Some((&lo, &hi)))?;
    let instants = enumerate_instants(&fam, &lo, &hi).map_err(|e| e.to_string())?;
    let lambdas = log_grid(to_f64(&lo), to_f64(&hi), samples);
    let branches = fam
        .branches()
        .filter(|&(i, j)| i <= max_index && j <= max_index)
        .map(|(i, j)| {
            let a = to_f64(&fam.coefficients_a()[i]);
            let b = to_f64(&fam.coefficients_b()[j]);
            BranchView {
                i,
                j,
                multiplicity: fam.multiplicity(i, j).unwrap_or_default(),
                sigma: lambdas.iter().map(|l| a + b / l).collect(),
            }
        })
        .collect();
    let view = DiagramView {
        factors: [
            fam.factor(0).name().to_string(),
            fam.factor(1).name().to_string(),
        ],
        counts: [
            fam.factor(0).truncation_count(),
            fam.factor(1).truncation_count(),
        ],
        lambdas,
        branches,
        instants: instants
            .into_iter()
            .map(|inst| InstantView {
                value: to_f64(&inst.lambda),
                lambda: format_rational(&inst.lambda),
                delta_n: inst.delta_n,
                classification: inst.classification,
                contributors: inst.contributors.iter().map(|c| (c.i, c.j)).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// The full analysis report (instants, rigidity intervals, index samples and
/// obstruction certificates) as the CLI would write it.
pub fn analysis_report(d0: &str, d1: &str, lo: &str, hi: &str) -> Out<String> {
    let (lo, hi) = window(lo, hi)?;
    let fam = load_pair(d0, d1, Some((&lo, &hi)))?;
    let report = analyze(&fam, &lo, &hi, true).map_err(|e| e.to_string())?;
    report.to_json().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ObstructionView {
    lambdas: Vec<f64>,
    normalized_scalar: Vec<f64>,
    sphere_yamabe: f64,
    certified: Vec<bool>,
}

/// Volume-normalized scalar curvature of `g_λ` on a log grid against the
/// round-sphere Yamabe constant of the same dimension.
pub fn obstruction_curve(d0: &str, d1: &str, lo: &str, hi: &str, samples: usize) -> Out<String> {
    let (lo, hi) = window(lo, hi)?;
    // only κ and volumes matter here, so the default listing is enough
    let fam = load_pair(d0, d1, None)?;
    let lambdas = log_grid(to_f64(&lo), to_f64(&hi), samples);
    let mut view = ObstructionView {
        lambdas: Vec::with_capacity(lambdas.len()),
        normalized_scalar: Vec::with_capacity(lambdas.len()),
        sphere_yamabe: 0.0,
        certified: Vec::with_capacity(lambdas.len()),
    };
    for l in lambdas {
        let exact = BigRational::from_float(l).ok_or("non-finite sample")?;
        let r = yamabe_obstruction(&fam, &exact).map_err(|e| e.to_string())?;
        view.sphere_yamabe = r.sphere_yamabe;
        view.lambdas.push(l);
        view.normalized_scalar.push(r.normalized_scalar);
        view.certified.push(r.certified_not_yamabe);
    }
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = branchDiagram)]
pub fn branch_diagram_js(
    d0: &str,
    d1: &str,
    lo: &str,
    hi: &str,
    samples: usize,
    max_index: usize,
) -> Result<String, JsValue> {
    branch_diagram(d0, d1, lo, hi, samples, max_index).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = analysisReport)]
pub fn analysis_report_js(d0: &str, d1: &str, lo: &str, hi: &str) -> Result<String, JsValue> {
    analysis_report(d0, d1, lo, hi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = obstructionCurve)]
pub fn obstruction_curve_js(
    d0: &str,
    d1: &str,
    lo: &str,
    hi: &str,
    samples: usize,
) -> Result<String, JsValue> {
    obstruction_curve(d0, d1, lo, hi, samples).map_err(|e| JsValue::from_str(&e))
}
