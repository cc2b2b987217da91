//! Sweep over `(d, n)` checking the singular-locus table of `σ₃(v_d(ℙⁿ))` at
//! the canonical orbit representatives.
//!
//! Expected outcome at points of `σ₃ ∖ σ₂`: smooth everywhere, except on the
//! degenerate (essentially binary) locus when `d = 4` and `n ≥ 3`.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::Result;
use crate::par;
use crate::tangent::{canonical_form, classify_orbit, smoothness_at, OrbitClass, Verdict};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CellKey {
    pub d: u32,
    pub n: u32,
    pub kind: OrbitClass,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CellResult {
    pub d: u32,
    pub n: u32,
    pub kind: OrbitClass,
    pub classified_as: OrbitClass,
    pub verdict: Verdict,
    pub conormal_dim: Option<usize>,
    pub expected_codim: usize,
    pub predicted_singular: bool,
    pub matches: bool,
}

/// Whether the canonical point of `σ₃ ∖ σ₂` of this kind is expected to be singular.
pub fn predicted_singular(d: u32, n: u32, kind: OrbitClass) -> bool {
    kind == OrbitClass::DegenerateBinary && d == 4 && n >= 3
}

/// Cells in `(d, n, kind)` order. The degenerate kind only exists from `d = 4` on.
pub fn cells(d_range: RangeInclusive<u32>, n_range: RangeInclusive<u32>) -> Vec<CellKey> {
    let mut out = Vec::new();
    for d in d_range {
        for n in n_range.clone() {
            for kind in OrbitClass::CANONICAL {
                if kind == OrbitClass::DegenerateBinary && d < 4 {
                    continue;
                }
                out.push(CellKey { d, n, kind });
            }
        }
    }
    out
}

pub fn evaluate_cell(key: CellKey) -> Result<CellResult> {
    let f = canonical_form(key.kind, key.d, key.n, None)?;
    let report = smoothness_at(&f)?;
    let classified_as = classify_orbit(&f)?;
    let predicted = predicted_singular(key.d, key.n, key.kind);
    let in_locus = matches!(
        report.verdict,
        Verdict::Smooth | Verdict::Singular | Verdict::D3Classified
    );
    let matches = in_locus && classified_as == key.kind && report.verdict.is_smooth() != predicted;
    Ok(CellResult {
        d: key.d,
        n: key.n,
        kind: key.kind,
        classified_as,
        verdict: report.verdict,
        conormal_dim: report.conormal_dim,
        expected_codim: report.expected_codim,
        predicted_singular: predicted,
        matches,
    })
}

/// Evaluates every cell; `jobs == 1` runs sequentially. Output order is the
/// cell order regardless of `jobs`.
pub fn verify_table(
    d_range: RangeInclusive<u32>,
    n_range: RangeInclusive<u32>,
    jobs: usize,
) -> Vec<Result<CellResult>> {
    let keys = cells(d_range, n_range);
    par::map_with_jobs(&keys, jobs, |&k| evaluate_cell(k))
}
