//! GNS space of the Haar state and the multiplicative unitary.

use super::{FqgData, FqgError};
use crate::linalg::{
    apply_on_legs, matmul, max_diff, probes, tolerance, CMatrix, CVector, LegOp, LegSpace, C64,
};

/// `L²(A, h)` in an orthonormal basis.
///
/// With `G = R†R` the Cholesky factorization of the Gram matrix, the vector
/// `Λ(x)` has orthonormal coordinates `R·x`, and an operator `T` written in
/// algebra coordinates becomes `R T R⁻¹`.
#[derive(Debug, Clone)]
pub struct GnsRep {
    n: usize,
    gram: CMatrix,
    unit_vector: CVector,
    onb_change: CMatrix,
    onb_change_inv: CMatrix,
    left: Vec<CMatrix>,
    lambda: Vec<CMatrix>,
    left_pinv: CMatrix,
    lambda_pinv: CMatrix,
}

/// Left pseudo-inverse of the `n²×k` matrix whose columns are the flattened
/// operators; maps a flattened operator to its coefficients.
fn coefficient_solver(ops: &[CMatrix]) -> CMatrix {
    let n = ops.first().map(|m| m.nrows()).unwrap_or(0);
    let k = ops.len();
    let mut stacked = CMatrix::zeros(n * n, k);
    for (j, m) in ops.iter().enumerate() {
        stacked.set_column(j, &crate::linalg::flatten(m));
    }
    let g = stacked.adjoint() * &stacked;
    let inv = g.try_inverse().expect("operators are linearly independent");
    inv * stacked.adjoint()
}

impl GnsRep {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// The matrix `R` with `G = R†R`.
    pub fn onb_change(&self) -> &CMatrix {
        &self.onb_change
    }

    pub fn onb_change_inv(&self) -> &CMatrix {
        &self.onb_change_inv
    }

    /// Operator in algebra coordinates to orthonormal coordinates.
    pub fn to_onb(&self, t: &CMatrix) -> CMatrix {
        &self.onb_change * t * &self.onb_change_inv
    }

    /// `Λ(x)` in orthonormal coordinates.
    pub fn vector_of(&self, x: &CVector) -> CVector {
        &self.onb_change * x
    }

    /// `Λ(1)`.
    pub fn cyclic_vector(&self) -> CVector {
        self.unit_vector.clone()
    }

    pub fn left_basis(&self, i: usize) -> &CMatrix {
        &self.left[i]
    }

    /// `L(x)` for an element of `A`.
    pub fn left(&self, x: &CVector) -> CMatrix {
        combine(&self.left, x)
    }

    /// `λ(e^i)`, the regular representation of the dual basis element.
    pub fn lambda_basis(&self, i: usize) -> &CMatrix {
        &self.lambda[i]
    }

    pub fn lambda_all(&self) -> &[CMatrix] {
        &self.lambda
    }

    pub fn left_all(&self) -> &[CMatrix] {
        &self.left
    }

    /// `λ(f)` for an element of the dual given in the dual basis.
    pub fn lambda(&self, f: &CVector) -> CMatrix {
        combine(&self.lambda, f)
    }

    /// Coefficients `x` with `L(x)` closest to `m`.
    pub fn left_coeffs(&self, m: &CMatrix) -> CVector {
        &self.left_pinv * crate::linalg::flatten(m)
    }

    /// Coefficients `f` with `λ(f)` closest to `m`.
    pub fn lambda_coeffs(&self, m: &CMatrix) -> CVector {
        &self.lambda_pinv * crate::linalg::flatten(m)
    }
}

pub(crate) fn combine(ops: &[CMatrix], coeffs: &CVector) -> CMatrix {
    let n = ops.first().map(|m| m.nrows()).unwrap_or(0);
    let mut out = CMatrix::zeros(n, n);
    for (op, &c) in ops.iter().zip(coeffs.iter()) {
        if c != C64::new(0.0, 0.0) {
            out += op * c;
        }
    }
    out
}

pub(crate) fn gns_unchecked(a: &FqgData) -> Result<GnsRep, FqgError> {
    let n = a.dim();
    let gram = a.gram();
    let herm = (&gram + gram.adjoint()).scale(0.5);
    let chol = herm.clone().cholesky().ok_or_else(|| {
        FqgError::HaarNotPositive(herm.clone().symmetric_eigen().eigenvalues.min())
    })?;
    let r = chol.l().adjoint();
    let r_inv = r
        .clone()
        .solve_upper_triangular(&CMatrix::identity(n, n))
        .ok_or(FqgError::HaarNotPositive(0.0))?;
    let to_onb = |t: &CMatrix| &r * t * &r_inv;
    let left: Vec<CMatrix> = (0..n).map(|i| to_onb(&a.left_mult_alg(&a.basis(i)))).collect();
    // λ(e^i) = (id⊗e^i)∘Δ acting on Λ(A): e_x ↦ Σ_j d[x][j][i] e_j.
    let mut lambda_alg = vec![CMatrix::zeros(n, n); n];
    for x in 0..n {
        for &(j, i, d) in a.coproduct_basis(x) {
            lambda_alg[i][(j, x)] += d;
        }
    }
    let lambda: Vec<CMatrix> = lambda_alg.iter().map(to_onb).collect();
    let left_pinv = coefficient_solver(&left);
    let lambda_pinv = coefficient_solver(&lambda);
    Ok(GnsRep {
        n,
        gram,
        unit_vector: &r * a.unit(),
        onb_change: r,
        onb_change_inv: r_inv,
        left,
        lambda,
        left_pinv,
        lambda_pinv,
    })
}

/// GNS representation with its postconditions: `L` is a unital
/// *-homomorphism in the orthonormal basis.
pub fn gns(a: &FqgData) -> Result<GnsRep, FqgError> {
    let g = gns_unchecked(a)?;
    let n = a.dim();
    let tol = tolerance();
    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let prod = &g.left[i] * &g.left[j];
            let lhs = g.left(&a.mul(&a.basis(i), &a.basis(j)));
            mult = mult.max(max_diff(&prod, &lhs));
        }
        star = star.max(max_diff(&g.left[i].adjoint(), &g.left(&a.star(&a.basis(i)))));
    }
    let unital = max_diff(&g.left(a.unit()), &CMatrix::identity(n, n));
    for (name, residual) in [("gns_multiplicative", mult), ("gns_star", star), ("gns_unital", unital)] {
        if residual > tol * 10.0 {
            return Err(FqgError::Postcondition { name: name.into(), residual });
        }
    }
    Ok(g)
}

/// The multiplicative unitary on `L²⊗L²`.
#[derive(Debug, Clone)]
pub struct MultUnitary {
    n: usize,
    w: LegOp,
}

/// Residuals of the three defining identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WResiduals {
    pub unitarity: f64,
    pub pentagon: f64,
    pub coproduct: f64,
}

impl WResiduals {
    pub fn max(&self) -> f64 {
        self.unitarity.max(self.pentagon).max(self.coproduct)
    }
}

pub(crate) fn w_unchecked(a: &FqgData) -> MultUnitary {
    let n = a.dim();
    let g = a.gns();
    // W(Λx⊗Λy) = (Λ⊗Λ)(Δ(x)(1⊗y)) in algebra coordinates:
    // W[(j,l),(x,y)] = Σ_k d[x][j][k] m[k][y][l].
    let nn = n * n;
    let mut w_alg = CMatrix::zeros(nn, nn);
    for x in 0..n {
        for &(j, k, d) in a.coproduct_basis(x) {
            for y in 0..n {
                for &(l, v) in a.mul_basis(k, y) {
                    w_alg[(j * n + l, x * n + y)] += d * v;
                }
            }
        }
    }
    // Conjugate by R⊗R one leg at a time.
    let space = LegSpace::new(&[n, n]).expect("positive dims");
    let r = g.onb_change();
    let r_inv_t = g.onb_change_inv().transpose();
    let left = apply_on_legs(r, &[1], &space, &w_alg).expect("shape");
    let left = apply_on_legs(r, &[2], &space, &left).expect("shape");
    let t = left.transpose();
    let t = apply_on_legs(&r_inv_t, &[1], &space, &t).expect("shape");
    let t = apply_on_legs(&r_inv_t, &[2], &space, &t).expect("shape");
    MultUnitary { n, w: LegOp::new(space, t.transpose()).expect("square") }
}

/// Build `W` and check unitarity, the pentagon identity and the
/// implementation of the coproduct.
pub fn build_w(a: &FqgData) -> Result<MultUnitary, FqgError> {
    let w = w_unchecked(a);
    let res = w.residuals(a);
    let tol = tolerance();
    for (name, residual) in [
        ("w_unitarity", res.unitarity),
        ("w_pentagon", res.pentagon),
        ("w_coproduct", res.coproduct),
    ] {
        if residual > tol {
            return Err(FqgError::Postcondition { name: name.into(), residual });
        }
    }
    Ok(w)
}

/// `(L⊗L)(z)·Y` for `z ∈ A⊗A` given as a flat vector and `Y` a block of
/// column vectors in `L²⊗L²`, without forming the `n²×n²` operator.
pub(crate) fn apply_ll(a: &FqgData, z: &[C64], y: &CMatrix) -> CMatrix {
    let n = a.dim();
    let g = a.gns();
    let mut out = CMatrix::zeros(n * n, y.ncols());
    // Σ_{p,q} z_pq L_p Y L_qᵀ = Σ_p L_p Y M_pᵀ with M_p = Σ_q z_pq L_q.
    let mut ms: Vec<(usize, CMatrix)> = Vec::new();
    for p in 0..n {
        let row: CVector = CVector::from_fn(n, |q, _| z[p * n + q]);
        if row.iter().all(|c| *c == C64::new(0.0, 0.0)) {
            continue;
        }
        ms.push((p, g.left(&row).transpose()));
    }
    for col in 0..y.ncols() {
        let ymat = crate::linalg::unflatten(y.column(col).as_slice(), n, n);
        let mut acc = CMatrix::zeros(n, n);
        for (p, mt) in &ms {
            acc += g.left_basis(*p) * (&ymat * mt);
        }
        out.set_column(col, &crate::linalg::flatten(&acc));
    }
    out
}

impl MultUnitary {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn op(&self) -> &LegOp {
        &self.w
    }

    pub fn matrix(&self) -> &CMatrix {
        self.w.matrix()
    }

    pub fn residuals(&self, a: &FqgData) -> WResiduals {
        let n = self.n;
        let w = self.matrix();
        let wa = w.adjoint();
        let p2 = probes(n * n, 0x3b1);
        let wp = matmul(w, &p2);
        let unitarity = max_diff(&matmul(&wa, &wp), &p2).max(max_diff(&matmul(w, &matmul(&wa, &p2)), &p2));

        // W₂₃W₁₂ = W₁₂W₁₃W₂₃ on three legs.
        let space3 = LegSpace::new(&[n, n, n]).expect("positive dims");
        let p3 = probes(n * n * n, 0x3b2);
        let on = |legs: &[usize], v: &CMatrix| apply_on_legs(w, legs, &space3, v).expect("shape");
        let lhs = on(&[2, 3], &on(&[1, 2], &p3));
        let rhs = on(&[1, 2], &on(&[1, 3], &on(&[2, 3], &p3)));
        let pentagon = max_diff(&lhs, &rhs);

        // W(L(e_i)⊗1)W* = (L⊗L)Δ(e_i), checked as W(L(e_i)⊗1) = (L⊗L)Δ(e_i)·W.
        let space2 = LegSpace::new(&[n, n]).expect("positive dims");
        let g = a.gns();
        let mut coproduct: f64 = 0.0;
        for i in 0..n {
            let li = apply_on_legs(g.left_basis(i), &[1], &space2, &p2).expect("shape");
            let lhs = matmul(w, &li);
            let rhs = apply_ll(a, &a.coproduct_of(&a.basis(i)), &wp);
            coproduct = coproduct.max(max_diff(&lhs, &rhs));
        }
        WResiduals { unitarity, pentagon, coproduct }
    }
}
