//! JSON encodings of core values, matching the input conventions.

use fqg_core::fqg::{AxiomReport, FqgData, HopfStructure, Invariants, Tensor3};
use fqg_core::linalg::{CMatrix, CVector, SubspaceBasis, C64};
use serde_json::{json, Value};

pub fn scalar(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn vector(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| scalar(z)).collect())
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| scalar(m[(i, j)])).collect())).collect())
}

fn tensor(t: &Tensor3) -> Value {
    let [d0, d1, d2] = t.dims();
    Value::Array(
        (0..d0)
            .map(|i| {
                Value::Array((0..d1).map(|j| Value::Array((0..d2).map(|k| scalar(t.get(i, j, k))).collect())).collect())
            })
            .collect(),
    )
}

/// A quantum group as a `raw_structure` spec, readable back by the CLI.
pub fn structure(a: &FqgData) -> Value {
    let s: &HopfStructure = a.structure();
    json!({
        "kind": "raw_structure",
        "name": a.name(),
        "mult": tensor(&s.mult),
        "unit": vector(&s.unit),
        "star": matrix(&s.star),
        "coproduct": tensor(&s.coproduct),
        "counit": vector(&s.counit),
        "antipode": matrix(&s.antipode),
        "haar": vector(a.haar()),
    })
}

pub fn invariants(inv: &Invariants) -> Value {
    json!({
        "dim": inv.dim,
        "commutative": inv.commutative,
        "cocommutative": inv.cocommutative,
        "blocks": inv.blocks.iter().map(|b| json!({"size": b.size, "haar_weight": b.haar_weight})).collect::<Vec<_>>(),
        "character_orders": inv.character_orders,
    })
}

pub fn axioms(report: &AxiomReport) -> Value {
    json!({
        "passed": report.passed(),
        "max_residual": report.max_residual(),
        "checks": report
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "residual": c.residual, "passed": c.passed}))
            .collect::<Vec<_>>(),
    })
}

/// Basis elements of a subspace of matrices.
pub fn basis(b: &SubspaceBasis) -> Value {
    Value::Array(b.as_matrices().iter().map(matrix).collect())
}

/// Block sizes in text form, e.g. `1×1, 1×1, 2×2`.
pub fn blocks_text(inv: &Invariants) -> String {
    inv.blocks.iter().map(|b| format!("{0}×{0}", b.size)).collect::<Vec<_>>().join(", ")
}
