//! Standard finite quantum groups.

use super::{FqgData, FqgError, HopfStructure, Tensor3};
use crate::catalog::GroupTable;
use crate::linalg::{c, cr, kron, CMatrix, CVector, C64};

/// `C(G)`: functions on a finite group, basis the point masses `δ_g`.
pub fn function_algebra(g: &GroupTable) -> Result<FqgData, FqgError> {
    let n = g.order();
    let one = cr(1.0);
    let mut mult = Tensor3::zeros(n, n, n);
    let mut coproduct = Tensor3::zeros(n, n, n);
    let mut antipode = CMatrix::zeros(n, n);
    for a in 0..n {
        mult.set(a, a, a, one);
        antipode[(a, g.inverse(a))] = one;
        // Δ(δ_a) = Σ_{st=a} δ_s⊗δ_t.
        for s in 0..n {
            coproduct.set(a, s, g.mul(g.inverse(s), a), one);
        }
    }
    let mut counit = CVector::zeros(n);
    counit[0] = one;
    let structure = HopfStructure {
        mult,
        unit: CVector::from_element(n, one),
        star: CMatrix::identity(n, n),
        coproduct,
        counit,
        antipode,
    };
    let haar = CVector::from_element(n, cr(1.0 / n as f64));
    FqgData::new(structure, haar, "C(G)")
}

/// `ℂ[G]`: the group algebra, basis `λ_g`.
pub fn group_algebra(g: &GroupTable) -> Result<FqgData, FqgError> {
    let n = g.order();
    let one = cr(1.0);
    let mut mult = Tensor3::zeros(n, n, n);
    let mut coproduct = Tensor3::zeros(n, n, n);
    let mut antipode = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            mult.set(a, b, g.mul(a, b), one);
        }
        coproduct.set(a, a, a, one);
        antipode[(a, g.inverse(a))] = one;
    }
    let mut unit = CVector::zeros(n);
    unit[0] = one;
    let structure = HopfStructure {
        mult,
        unit: unit.clone(),
        star: antipode.clone(),
        coproduct,
        counit: CVector::from_element(n, one),
        antipode,
    };
    FqgData::new(structure, unit, "C[G]")
}

/// Basis order of [`kac_paljutkin`]: `e1, e2, e3, e4, a11, a12, a21, a22`.
pub const KP_LABELS: [&str; 8] = ["e1", "e2", "e3", "e4", "a11", "a12", "a21", "a22"];

/// The eight-dimensional Kac–Paljutkin quantum group on `ℂ⁴ ⊕ M₂(ℂ)`.
pub fn kac_paljutkin() -> Result<FqgData, FqgError> {
    const N: usize = 8;
    let (e1, e2, e3, e4, a11, a12, a21, a22) = (0, 1, 2, 3, 4, 5, 6, 7);
    let mat = |i: usize, j: usize| 4 + 2 * i + j;
    let mut mult = Tensor3::zeros(N, N, N);
    for e in [e1, e2, e3, e4] {
        mult.set(e, e, e, cr(1.0));
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                mult.set(mat(i, j), mat(j, k), mat(i, k), cr(1.0));
            }
        }
    }
    let mut unit = CVector::zeros(N);
    for x in [e1, e2, e3, e4, a11, a22] {
        unit[x] = cr(1.0);
    }
    // Matrix units: a_ij* = a_ji; the transpose gives the antipode.
    let mut star = CMatrix::zeros(N, N);
    for x in [e1, e2, e3, e4, a11, a22] {
        star[(x, x)] = cr(1.0);
    }
    star[(a12, a21)] = cr(1.0);
    star[(a21, a12)] = cr(1.0);
    let antipode = star.clone();

    let h = cr(0.5);
    let ih = c(0.0, 0.5);
    let i1 = c(0.0, 1.0);
    let mut coproduct = Tensor3::zeros(N, N, N);
    let mut put = |x: usize, terms: &[(usize, usize, C64)]| {
        for &(j, k, v) in terms {
            coproduct.add(x, j, k, v);
        }
    };
    let o = cr(1.0);
    let m = cr(-1.0);
    put(e1, &[
        (e1, e1, o), (e2, e2, o), (e3, e3, o), (e4, e4, o),
        (a11, a11, h), (a12, a12, h), (a21, a21, h), (a22, a22, h),
    ]);
    put(e2, &[
        (e1, e2, o), (e2, e1, o), (e3, e4, o), (e4, e3, o),
        (a11, a22, h), (a22, a11, h), (a21, a12, ih), (a12, a21, -ih),
    ]);
    put(e3, &[
        (e1, e3, o), (e3, e1, o), (e2, e4, o), (e4, e2, o),
        (a11, a22, h), (a22, a11, h), (a21, a12, -ih), (a12, a21, ih),
    ]);
    put(e4, &[
        (e1, e4, o), (e4, e1, o), (e2, e3, o), (e3, e2, o),
        (a11, a11, h), (a22, a22, h), (a12, a12, -h), (a21, a21, -h),
    ]);
    put(a11, &[
        (e1, a11, o), (a11, e1, o), (e2, a22, o), (a22, e2, o),
        (e3, a22, o), (a22, e3, o), (e4, a11, o), (a11, e4, o),
    ]);
    put(a12, &[
        (e1, a12, o), (a12, e1, o), (e2, a21, i1), (a21, e2, -i1),
        (e3, a21, -i1), (a21, e3, i1), (e4, a12, m), (a12, e4, m),
    ]);
    put(a21, &[
        (e1, a21, o), (a21, e1, o), (e2, a12, -i1), (a12, e2, i1),
        (e3, a12, i1), (a12, e3, -i1), (e4, a21, m), (a21, e4, m),
    ]);
    put(a22, &[
        (e1, a22, o), (a22, e1, o), (e2, a11, o), (a11, e2, o),
        (e3, a11, o), (a11, e3, o), (e4, a22, o), (a22, e4, o),
    ]);
    let mut counit = CVector::zeros(N);
    counit[e1] = o;
    let mut haar = CVector::zeros(N);
    for e in [e1, e2, e3, e4] {
        haar[e] = cr(0.125);
    }
    haar[a11] = cr(0.25);
    haar[a22] = cr(0.25);
    let structure = HopfStructure { mult, unit, star, coproduct, counit, antipode };
    FqgData::new(structure, haar, "KP8")?.checked()
}

/// The double group built over `K`, with its two quotient maps onto `K` and
/// `K̂` (closed quantum subgroups).
#[derive(Debug, Clone)]
pub struct Codouble {
    pub data: FqgData,
    /// `id⊗ε̂ : C(K)⊗C(K̂) → C(K)`, an `n × n²` matrix.
    pub to_k: CMatrix,
    /// `ε⊗id : C(K)⊗C(K̂) → C(K̂)`, an `n × n²` matrix.
    pub to_khat: CMatrix,
}

/// `C(K)⊗C(K̂)` with `Δ(a⊗b) = W₂₃ Δ(a)₁₃ Δ̂(b)₂₄ W₂₃*`, where
/// `W = Σ e^i⊗e_i ∈ K̂⊗K`. Basis element `e_a⊗e^b` has index `a·n + b`.
pub fn codouble(k: &FqgData) -> Result<Codouble, FqgError> {
    let kd = k.dual();
    let n = k.dim();
    let nn = n * n;
    let idx = |a: usize, b: usize| a * n + b;
    let zero = C64::new(0.0, 0.0);

    let mut mult = Tensor3::zeros(nn, nn, nn);
    for a in 0..n {
        for b in 0..n {
            for c2 in 0..n {
                for d in 0..n {
                    for &(p, u) in k.mul_basis(a, c2) {
                        for &(q, v) in kd.mul_basis(b, d) {
                            mult.add(idx(a, b), idx(c2, d), idx(p, q), u * v);
                        }
                    }
                }
            }
        }
    }

    // cross[(y, x)] = W(e^y⊗e_x)W* as a flat element of K̂⊗K.
    let w_star: Vec<(CVector, CVector)> =
        (0..n).map(|j| (kd.star(&kd.basis(j)), k.star(&k.basis(j)))).collect();
    let mut cross = vec![vec![zero; nn]; nn];
    for y in 0..n {
        for x in 0..n {
            let out = &mut cross[y * n + x];
            for i in 0..n {
                let left_hat = kd.mul(&kd.basis(i), &kd.basis(y));
                let left = k.mul(&k.basis(i), &k.basis(x));
                for (sh, s) in &w_star {
                    let fh = kd.mul(&left_hat, sh);
                    let f = k.mul(&left, s);
                    for (p, &u) in fh.iter().enumerate() {
                        if u == zero {
                            continue;
                        }
                        for (q, &v) in f.iter().enumerate() {
                            out[p * n + q] += u * v;
                        }
                    }
                }
            }
        }
    }

    let mut coproduct = Tensor3::zeros(nn, nn, nn);
    for a in 0..n {
        for b in 0..n {
            for &(a1, a2, da) in k.coproduct_basis(a) {
                for &(b1, b2, db) in kd.coproduct_basis(b) {
                    let s = da * db;
                    for (pq, &v) in cross[b1 * n + a2].iter().enumerate() {
                        if v == zero {
                            continue;
                        }
                        let (p, q) = (pq / n, pq % n);
                        coproduct.add(idx(a, b), idx(a1, p), idx(q, b2), s * v);
                    }
                }
            }
        }
    }

    let unit = kron_vec(k.unit(), kd.unit());
    let counit = kron_vec(k.counit(), kd.counit());
    let star = kron(k.star_matrix(), kd.star_matrix());
    let mut structure = HopfStructure {
        mult,
        unit,
        star,
        coproduct,
        counit,
        antipode: CMatrix::identity(nn, nn),
    };
    let haar = super::solve_haar(&structure)?;
    structure.antipode = antipode_from_haar(&structure, &haar)?;
    let data = FqgData::new(structure, haar, format!("D({})", k.name()))?.checked()?;

    let mut to_k = CMatrix::zeros(n, nn);
    let mut to_khat = CMatrix::zeros(n, nn);
    for a in 0..n {
        for b in 0..n {
            to_k[(a, idx(a, b))] = kd.counit()[b];
            to_khat[(b, idx(a, b))] = k.counit()[a];
        }
    }
    Ok(Codouble { data, to_k, to_khat })
}

fn kron_vec(x: &CVector, y: &CVector) -> CVector {
    CVector::from_fn(x.len() * y.len(), |ix, _| x[ix / y.len()] * y[ix % y.len()])
}

/// Recover the antipode from the Haar state through
/// `S((id⊗h)(Δ(y)(1⊗x))) = (id⊗h)((1⊗y)Δ(x))`, solved in least squares.
fn antipode_from_haar(s: &HopfStructure, haar: &CVector) -> Result<CMatrix, FqgError> {
    let n = s.dim();
    // hp[k][x] = h(e_k e_x).
    let hp = CMatrix::from_fn(n, n, |k, x| (0..n).map(|l| s.mult.get(k, x, l) * haar[l]).sum());
    let cop = |y: usize| CMatrix::from_fn(n, n, |j, k| s.coproduct.get(y, j, k));
    let mut p = CMatrix::zeros(n, n * n);
    let mut q = CMatrix::zeros(n, n * n);
    for y in 0..n {
        let dy = cop(y);
        let py = &dy * &hp;
        for x in 0..n {
            p.set_column(y * n + x, &py.column(x));
        }
    }
    for x in 0..n {
        let dx = cop(x);
        let qx = &dx * hp.transpose();
        for y in 0..n {
            q.set_column(y * n + x, &qx.column(y));
        }
    }
    // S·P = Q with S acting on coefficient columns; the stored antipode
    // matrix is the transpose (row i holds S(e_i)).
    let pp = &p * p.adjoint();
    let inv = pp.try_inverse().ok_or(FqgError::Postcondition {
        name: "antipode_solve".into(),
        residual: f64::INFINITY,
    })?;
    let s_cols = &q * p.adjoint() * inv;
    let residual = crate::linalg::max_diff(&(&s_cols * &p), &q);
    if residual > crate::linalg::tolerance() * 10.0 {
        return Err(FqgError::Postcondition { name: "antipode_solve".into(), residual });
    }
    Ok(s_cols.transpose())
}

#[cfg(test)]
pub(super) fn antipode_from_haar_for_tests(a: &FqgData) -> Result<CMatrix, FqgError> {
    antipode_from_haar(a.structure(), a.haar())
}
