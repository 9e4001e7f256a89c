//! The dual finite quantum group on the linear dual `Â = A*`.
//!
//! Elements of `Â` are written in the dual basis `e^i`. The structure is the
//! transpose of that of `A`: `(e^i e^j)(x) = (e^i⊗e^j)Δ(x)`,
//! `Δ̂(e^i)(x⊗y) = e^i(xy)`, unit `ε`, counit evaluation at `1`, antipode
//! `f ↦ f∘S` and star `⟨f*, x⟩ = conj⟨f, S(x)*⟩`.

use super::{FqgData, FqgError, HopfStructure, Tensor3};
use crate::linalg::{tolerance, CMatrix};

pub(crate) fn dual_structure(a: &FqgData) -> HopfStructure {
    let n = a.dim();
    let mut mult = Tensor3::zeros(n, n, n);
    let mut coproduct = Tensor3::zeros(n, n, n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                mult.set(i, j, k, a.coproduct().get(k, i, j));
                coproduct.set(i, j, k, a.mult().get(j, k, i));
            }
        }
    }
    let s = a.antipode_matrix();
    let star = (s * a.star_matrix().map(|z| z.conj())).transpose();
    HopfStructure {
        mult,
        unit: a.counit().clone(),
        star,
        coproduct,
        counit: a.unit().clone(),
        antipode: s.transpose(),
    }
}

pub(crate) fn dual_unchecked(a: &FqgData) -> Result<FqgData, FqgError> {
    FqgData::from_structure(dual_structure(a), format!("dual({})", a.name()))
}

/// The dual quantum group, with the biduality postcondition checked.
pub fn dual(a: &FqgData) -> Result<FqgData, FqgError> {
    let d = dual_unchecked(a)?;
    let residual = structure_distance(&dual_structure(&d), a.structure());
    if residual > tolerance() {
        return Err(FqgError::Postcondition { name: "biduality".into(), residual });
    }
    Ok(d)
}

fn structure_distance(x: &HopfStructure, y: &HopfStructure) -> f64 {
    let md = |a: &CMatrix, b: &CMatrix| crate::linalg::max_diff(a, b);
    let vd = |a: &crate::linalg::CVector, b: &crate::linalg::CVector| {
        a.iter().zip(b.iter()).fold(0.0f64, |acc, (p, q)| acc.max((p - q).norm()))
    };
    x.mult
        .max_diff(&y.mult)
        .max(x.coproduct.max_diff(&y.coproduct))
        .max(md(&x.star, &y.star))
        .max(md(&x.antipode, &y.antipode))
        .max(vd(&x.unit, &y.unit))
        .max(vd(&x.counit, &y.counit))
}

/// Distance between `dual(dual(a))` and `a` under the canonical evaluation
/// map, which is the identity on coordinates.
pub fn biduality_residual(a: &FqgData) -> f64 {
    let d = a.dual();
    let dd = d.dual();
    let haar = a
        .haar()
        .iter()
        .zip(dd.haar().iter())
        .fold(0.0f64, |acc, (p, q)| acc.max((p - q).norm()));
    structure_distance(dd.structure(), a.structure()).max(haar)
}
