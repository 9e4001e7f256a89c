//! The unitary `X = (id⊗β)W`, the partial action `θ(a) = X(a⊗1)X*`, the
//! slice algebra `M₁` and β-restrictions of corepresentations.

use super::morphism::{check_morphism, same_source, QMorphism};
use super::{require, HopfError};
use crate::fqg::{Corep, FqgData};
use crate::linalg::{
    algebra_closure, apply_on_legs, star_commutant, flatten, generated_unital_star_algebra, kron, matmul,
    max_abs_slice, max_diff, nullspace, probes, tolerance, unitarity_residual, CMatrix, CVector, LegSpace,
    SubspaceBasis, C64,
};
use std::sync::{Arc, OnceLock};

/// A quantum subset: a morphism `β` together with its unitary `X`.
#[derive(Debug, Clone)]
pub struct SubsetData {
    beta: QMorphism,
    /// `Σ_i λ(e^i)⊗β(e_i)` on `L²⊗ℂ^m`.
    x: CMatrix,
    unitarity_residual: f64,
    antirepresentation_residual: f64,
    theta: OnceLock<Arc<Theta>>,
}

impl SubsetData {
    pub fn beta(&self) -> &QMorphism {
        &self.beta
    }

    pub fn parent(&self) -> &Arc<FqgData> {
        self.beta.source()
    }

    /// The GNS realization of `X`, indexed `(x·m + p, y·m + q)`.
    pub fn x_matrix(&self) -> &CMatrix {
        &self.x
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    pub fn antirepresentation_residual(&self) -> f64 {
        self.antirepresentation_residual
    }

    /// `θ`, built on first use and cached.
    pub fn theta(&self) -> Result<Arc<Theta>, HopfError> {
        if let Some(t) = self.theta.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(build_theta(self)?);
        Ok(self.theta.get_or_init(|| t).clone())
    }
}

/// `X = Σ_i e^i⊗β(e_i)`, realized on `L²⊗ℂ^m` as `Σ_i λ(e^i)⊗β(e_i)`.
/// Checks that `X` is unitary and that, for the dual coproduct
/// `Δ̂(y) = σ(W*(1⊗y)W)`, one has `(Δ̂⊗id)X = X₂₃X₁₃`.
pub fn build_x(beta: &QMorphism) -> Result<SubsetData, HopfError> {
    let report = check_morphism(beta);
    if let Some((name, residual)) = report.first_failure() {
        return Err(HopfError::NotAMorphism { name: name.into(), residual });
    }
    let a = beta.source();
    let n = a.dim();
    let m = beta.target_dim();
    let g = a.gns();
    let mut x = CMatrix::zeros(n * m, n * m);
    for (lam, img) in g.lambda_all().iter().zip(beta.images()) {
        x += kron(lam, img);
    }
    let unitarity = unitarity_residual(&x);
    let antirep = antirepresentation_residual(a, &x, m)?;
    let tol = tolerance();
    require("x_unitary", unitarity, tol)?;
    require("x_antirepresentation", antirep, tol)?;
    Ok(SubsetData {
        beta: beta.clone(),
        x,
        unitarity_residual: unitarity,
        antirepresentation_residual: antirep,
        theta: OnceLock::new(),
    })
}

/// `σ₁₂W₁₂*X₂₃W₁₂σ₁₂` against `X₂₃X₁₃` on `L²⊗L²⊗ℂ^m`. Conjugating by the
/// flip turns the left side into `W'₁₂*X₁₃W'₁₂` with `W' = σWσ`, which
/// avoids forming the flip on three legs.
fn antirepresentation_residual(a: &FqgData, x: &CMatrix, m: usize) -> Result<f64, HopfError> {
    let n = a.dim();
    let w = a.w();
    let w_flipped = flip_conjugate(w.matrix(), n);
    let space = LegSpace::new(&[n, n, m])?;
    let p = probes(space.total(), 0x7a11);
    let on = |op: &CMatrix, legs: &[usize], v: &CMatrix| apply_on_legs(op, legs, &space, v);
    let lhs = on(&w_flipped.adjoint(), &[1, 2], &on(x, &[1, 3], &on(&w_flipped, &[1, 2], &p)?)?)?;
    let rhs = on(x, &[2, 3], &on(x, &[1, 3], &p)?)?;
    Ok(max_diff(&lhs, &rhs))
}

/// `σTσ` for an operator `T` on `ℂ^n⊗ℂ^n`, by permuting indices.
pub(crate) fn flip_conjugate(t: &CMatrix, n: usize) -> CMatrix {
    let swap = |r: usize| (r % n) * n + r / n;
    CMatrix::from_fn(n * n, n * n, |r, c| t[(swap(r), swap(c))])
}

/// `θ: A → A⊗M_m` in coordinates: `θ(e_i) = Σ_j e_j⊗T_ij`.
#[derive(Debug, Clone)]
pub struct Theta {
    n: usize,
    m: usize,
    /// `T_ij` at index `i·n + j`.
    comps: Vec<CMatrix>,
    report: ThetaReport,
}

/// Residuals recorded by [`build_theta`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThetaReport {
    /// Distance between the GNS-extracted `θ` and `(id⊗β)Δ`.
    pub oracle: f64,
    /// `(Δ⊗id)∘θ = (id⊗θ)∘Δ`.
    pub partial_action: f64,
    /// `(id⊗θ)(W) = W₁₂X₁₃`.
    pub w_identity: f64,
}

impl ThetaReport {
    pub fn max(&self) -> f64 {
        self.oracle.max(self.partial_action).max(self.w_identity)
    }
}

impl Theta {
    /// Wrap raw components `T_ij` (index `i·n + j`). No law is checked.
    pub fn from_components(n: usize, m: usize, comps: Vec<CMatrix>) -> Result<Self, HopfError> {
        if comps.len() != n * n {
            return Err(HopfError::Shape { what: "theta components", expected: n * n, found: comps.len() });
        }
        if comps.iter().any(|c| c.nrows() != m || c.ncols() != m) {
            return Err(HopfError::Shape { what: "theta component side", expected: m, found: 0 });
        }
        Ok(Self { n, m, comps, report: ThetaReport::default() })
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn component(&self, i: usize, j: usize) -> &CMatrix {
        &self.comps[i * self.n + j]
    }

    pub fn report(&self) -> ThetaReport {
        self.report
    }

    /// `θ(x)` as the list of `M_m` components along `e_j`.
    pub fn apply(&self, x: &CVector) -> Vec<CMatrix> {
        let mut out = vec![CMatrix::zeros(self.m, self.m); self.n];
        for (i, &c) in x.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.component(i, j) * c;
            }
        }
        out
    }

    /// `(ε⊗id)θ(e_i)` for every `i`.
    fn counit_collapse(&self, a: &FqgData) -> Vec<CMatrix> {
        let eps = a.counit();
        (0..self.n)
            .map(|i| {
                let mut acc = CMatrix::zeros(self.m, self.m);
                for j in 0..self.n {
                    acc += self.component(i, j) * eps[j];
                }
                acc
            })
            .collect()
    }

    /// `max ‖(Δ⊗id)θ(e_i) − (id⊗θ)Δ(e_i)‖` over basis elements.
    pub fn partial_action_residual(&self, a: &FqgData) -> f64 {
        let n = self.n;
        let m = self.m;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            // Both sides as n² lists of m×m blocks indexed (a, b).
            let mut lhs = vec![CMatrix::zeros(m, m); n * n];
            for j in 0..n {
                let t = self.component(i, j);
                for &(p, q, d) in a.coproduct_basis(j) {
                    lhs[p * n + q] += t * d;
                }
            }
            let mut rhs = vec![CMatrix::zeros(m, m); n * n];
            for &(p, c, d) in a.coproduct_basis(i) {
                for q in 0..n {
                    rhs[p * n + q] += self.component(c, q) * d;
                }
            }
            for (l, r) in lhs.iter().zip(&rhs) {
                worst = worst.max(max_diff(l, r));
            }
        }
        worst
    }
}

/// Build `θ(e_i) = X(L(e_i)⊗1)X*` on the GNS space and read it back in
/// algebra coordinates. The result is checked against `(id⊗β)Δ`, the
/// partial-action law and `(id⊗θ)(W) = W₁₂X₁₃`.
pub fn build_theta(subset: &SubsetData) -> Result<Theta, HopfError> {
    let a = subset.parent();
    let beta = subset.beta();
    let n = a.dim();
    let m = beta.target_dim();
    let g = a.gns();
    let ls = g.left_all();
    let x = subset.x_matrix();
    let xa = x.adjoint();
    let id_m = CMatrix::identity(m, m);

    // Hilbert–Schmidt extraction of the A-leg: with M = Σ_k L_k⊗T_k,
    // b_l = (tr⊗id)((L_l†⊗1)M) = Σ_k tr(L_l†L_k) T_k.
    let mut hs = CMatrix::zeros(n, n);
    for l in 0..n {
        for k in 0..n {
            hs[(l, k)] = ls[l].iter().zip(ls[k].iter()).map(|(x, y)| x.conj() * y).sum();
        }
    }
    let hs_inv = hs.try_inverse().ok_or(HopfError::Postcondition { name: "hs_gram_invertible".into(), residual: 0.0 })?;
    let lconj = CMatrix::from_fn(n, n * n, |l, yx| ls[l][(yx / n, yx % n)].conj());

    let mut comps = Vec::with_capacity(n * n);
    for li in ls {
        let big = matmul(&matmul(x, &kron(li, &id_m)), &xa);
        let blocks = CMatrix::from_fn(n * n, m * m, |yx, pq| {
            let (y, xx) = (yx / n, yx % n);
            big[(y * m + pq / m, xx * m + pq % m)]
        });
        let b = &hs_inv * (&lconj * blocks);
        for k in 0..n {
            comps.push(CMatrix::from_fn(m, m, |p, q| b[(k, p * m + q)]));
        }
    }
    let mut theta = Theta::from_components(n, m, comps)?;

    let mut oracle: f64 = 0.0;
    for i in 0..n {
        let mut expect = vec![CMatrix::zeros(m, m); n];
        for &(j, k, d) in a.coproduct_basis(i) {
            expect[j] += &beta.images()[k] * d;
        }
        for (j, e) in expect.iter().enumerate() {
            oracle = oracle.max(max_diff(theta.component(i, j), e));
        }
    }
    let partial_action = theta.partial_action_residual(a);
    let w_identity = w_identity_residual(a, beta, &theta);
    theta.report = ThetaReport { oracle, partial_action, w_identity };
    let tol = tolerance();
    require("theta_matches_coproduct", oracle, tol)?;
    require("theta_partial_action", partial_action, tol)?;
    require("theta_w_identity", w_identity, tol)?;
    Ok(theta)
}

/// `(id⊗θ)(W) = Σ_i e^i⊗θ(e_i)` against `W₁₂X₁₃ = Σ_{i,k} e^ie^k⊗e_i⊗β(e_k)`,
/// compared coefficientwise in `Â⊗A⊗M_m` using the dual product.
fn w_identity_residual(a: &FqgData, beta: &QMorphism, theta: &Theta) -> f64 {
    let n = a.dim();
    let m = beta.target_dim();
    let dual = a.dual();
    let mut rhs = vec![CMatrix::zeros(m, m); n * n];
    for i in 0..n {
        for k in 0..n {
            for &(l, v) in dual.mul_basis(i, k) {
                rhs[l * n + i] += &beta.images()[k] * v;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for l in 0..n {
        for j in 0..n {
            worst = worst.max(max_diff(theta.component(l, j), &rhs[l * n + j]));
        }
    }
    worst
}

/// The output of [`recover_x_from_theta`].
#[derive(Debug, Clone)]
pub struct RecoveredX {
    /// `β(e_i)` read off the collapsed unitary.
    pub images: Vec<CMatrix>,
    /// `Σ_i λ(e^i)⊗β(e_i)` rebuilt from `images`.
    pub x_matrix: CMatrix,
    /// Distance of `W₁₂*(id⊗θ)(W)` from an element of the form `1⊗Y`.
    pub collapse_residual: f64,
    /// Partial-action law residual of the input.
    pub partial_action_residual: f64,
}

/// Reconstruct `X` from `θ` alone. With `W* = (id⊗S)W`, the `e^l` component
/// of `W₁₂*(id⊗θ)(W)` is `R_l = Σ d[l][i][j]·(S(e_i)⊗1)θ(e_j)`; for a
/// genuine partial action this is `1⊗β(e_l)`, and applying `ε` to the middle
/// leg collapses it. Fails when either residual is above tolerance.
pub fn recover_x_from_theta(theta: &Theta, parent: &Arc<FqgData>) -> Result<RecoveredX, HopfError> {
    let a = parent;
    let n = a.dim();
    if theta.n != n {
        return Err(HopfError::Shape { what: "theta source dimension", expected: n, found: theta.n });
    }
    let m = theta.m;
    let partial_action = theta.partial_action_residual(a);
    let eps = a.counit();
    let unit = a.unit();
    let antipodes: Vec<CVector> = (0..n).map(|i| a.antipode(&a.basis(i))).collect();
    let mut images = Vec::with_capacity(n);
    let mut collapse: f64 = 0.0;
    for l in 0..n {
        let mut r = vec![CMatrix::zeros(m, m); n];
        for &(i, j, d) in a.coproduct_basis(l) {
            let si = &antipodes[i];
            for k in 0..n {
                let t = theta.component(j, k);
                if max_abs_slice(t.as_slice()) == 0.0 {
                    continue;
                }
                let prod = a.mul(si, &a.basis(k));
                for (s, &c) in prod.iter().enumerate() {
                    if c != C64::new(0.0, 0.0) {
                        r[s] += t * (c * d);
                    }
                }
            }
        }
        let mut y = CMatrix::zeros(m, m);
        for (s, rs) in r.iter().enumerate() {
            y += rs * eps[s];
        }
        for (s, rs) in r.iter().enumerate() {
            collapse = collapse.max(max_diff(rs, &(&y * unit[s])));
        }
        images.push(y);
    }
    let g = a.gns();
    let mut x = CMatrix::zeros(n * m, n * m);
    for (lam, img) in g.lambda_all().iter().zip(&images) {
        x += kron(lam, img);
    }
    let tol = tolerance();
    require("recover_partial_action", partial_action, tol)?;
    require("recover_leg_collapse", collapse, tol)?;
    Ok(RecoveredX { images, x_matrix: x, collapse_residual: collapse, partial_action_residual: partial_action })
}

/// `{x ∈ A : θ(x) = x⊗1}` as the nullspace of `x ↦ θ(x) − x⊗1`.
pub fn fixed_points(theta: &Theta) -> SubspaceBasis {
    let n = theta.n;
    let m = theta.m;
    let mut sys = CMatrix::zeros(n * m * m, n);
    for i in 0..n {
        for j in 0..n {
            let t = theta.component(i, j);
            for p in 0..m {
                for q in 0..m {
                    let mut v = t[(p, q)];
                    if i == j && p == q {
                        v -= C64::new(1.0, 0.0);
                    }
                    sys[((j * m + p) * m + q, i)] = v;
                }
            }
        }
    }
    nullspace(&sys)
}

/// `M₁` in both pictures.
#[derive(Debug, Clone)]
pub struct SliceAlgebra {
    /// Unital *-subalgebra of the dual generated by the slices, in dual
    /// coordinates.
    pub dual_basis: SubspaceBasis,
    /// The same algebra computed on `L²` from the regular representation of
    /// the slices, as flattened `n×n` operators.
    pub operator_basis: SubspaceBasis,
    /// How far the regular representation of `dual_basis` lies outside
    /// `operator_basis`.
    pub picture_defect: f64,
}

impl SliceAlgebra {
    pub fn dim(&self) -> usize {
        self.dual_basis.dim()
    }
}

/// Largest `n` for which the operator picture is computed as a bicommutant
/// rather than as a generated algebra.
const BICOMMUTANT_LIMIT: usize = 12;

/// The unital *-algebra of the dual generated by `{(id⊗ω)X}`, which is the
/// span of the columns of the slice matrix. It is closed under the dual
/// product and star; the operator picture is the bicommutant of the slices
/// in the regular representation, and the two must agree.
pub fn slice_algebra(subset: &SubsetData) -> Result<SliceAlgebra, HopfError> {
    let a = subset.parent();
    let n = a.dim();
    let slices = SubspaceBasis::column_span(&subset.beta().slice_matrix());
    let dual = a.dual();
    let dual_basis = dual_closure(&dual, &slices.vectors());

    let g = a.gns();
    // Both routes below close under adjoints themselves.
    let gens: Vec<CMatrix> = slices.vectors().iter().map(|v| g.lambda(v)).collect();
    let operator_basis = if n <= BICOMMUTANT_LIMIT {
        let comm = star_commutant(&gens, n)?;
        star_commutant(&comm.as_matrices(), n)?
    } else {
        generated_unital_star_algebra(&gens, n)?
    };
    let images: Vec<CVector> = dual_basis.vectors().iter().map(|v| flatten(&g.lambda(v))).collect();
    let mapped = SubspaceBasis::span_of(n * n, images.iter());
    let defect = operator_basis.containment_defect(&mapped).max(mapped.containment_defect(&operator_basis));
    if mapped.dim() != operator_basis.dim() || defect > tolerance() * 10.0 {
        return Err(HopfError::PictureMismatch {
            algebraic: dual_basis.dim(),
            operator: operator_basis.dim(),
            defect,
        });
    }
    Ok(SliceAlgebra { dual_basis, operator_basis, picture_defect: defect })
}

/// Unital *-subalgebra of a quantum group's algebra generated by `seeds`.
pub(crate) fn dual_closure(alg: &FqgData, seeds: &[CVector]) -> SubspaceBasis {
    let mut gens: Vec<CVector> = Vec::with_capacity(2 * seeds.len());
    for s in seeds {
        gens.push(s.clone());
        gens.push(alg.star(s));
    }
    let mut start = vec![alg.unit().clone()];
    start.extend(gens.iter().cloned());
    algebra_closure(alg.dim(), &start, |q| gens.iter().map(|g| alg.mul(g, q)).collect())
}

/// The β-restriction `Y` of a corepresentation.
#[derive(Debug, Clone)]
pub struct BetaRestriction {
    /// `Y ∈ M_d⊗M_m`, indexed `(a·m + p, b·m + q)`.
    pub y: CMatrix,
    pub collapse_residual: f64,
    pub unitarity_residual: f64,
}

impl BetaRestriction {
    /// The `d×d` slice `(id⊗ω_pq)Y`.
    pub fn slice(&self, d: usize, m: usize, p: usize, q: usize) -> CMatrix {
        CMatrix::from_fn(d, d, |a, b| self.y[(a * m + p, b * m + q)])
    }
}

/// `Y` with `(id⊗θ)u = u₁₂Y₁₃`: the counit collapse of `u₁₂*(id⊗θ)(u)`,
/// `Y_ab = Σ_c conj(ε(u_ca))·(ε⊗id)θ(u_cb)`. The collapse is certified by
/// the operator identity `Y₁₃ = U₁₂*X₂₃U₁₂X₂₃*` on `ℂ^d⊗L²⊗ℂ^m`.
pub fn beta_restriction(u: &Corep, subset: &SubsetData) -> Result<BetaRestriction, HopfError> {
    let a = subset.parent();
    if !same_source(u.parent(), a) {
        return Err(HopfError::ParentMismatch);
    }
    let theta = subset.theta()?;
    let n = a.dim();
    let m = subset.beta().target_dim();
    let d = u.carrier_dim();
    let collapsed = theta.counit_collapse(a);
    let eps_of = |x: &CVector| a.counit_of(x);
    let theta_eps = |x: &CVector| {
        let mut acc = CMatrix::zeros(m, m);
        for (i, &c) in x.iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                acc += &collapsed[i] * c;
            }
        }
        acc
    };
    let entries: Vec<CVector> = (0..d * d).map(|pq| u.entry(pq / d, pq % d)).collect();
    let eps_u: Vec<C64> = entries.iter().map(eps_of).collect();
    let th: Vec<CMatrix> = entries.iter().map(theta_eps).collect();
    let mut y = CMatrix::zeros(d * m, d * m);
    for ai in 0..d {
        for bi in 0..d {
            let mut blk = CMatrix::zeros(m, m);
            for c in 0..d {
                blk += &th[c * d + bi] * eps_u[c * d + ai].conj();
            }
            y.view_mut((ai * m, bi * m), (m, m)).copy_from(&blk);
        }
    }

    let space = LegSpace::new(&[d, n, m])?;
    let p = probes(space.total(), 0xbe7a);
    let uop = u.operator();
    let x = subset.x_matrix();
    let on = |op: &CMatrix, legs: &[usize], v: &CMatrix| apply_on_legs(op, legs, &space, v);
    let rhs = on(&uop.adjoint(), &[1, 2], &on(x, &[2, 3], &on(&uop, &[1, 2], &on(&x.adjoint(), &[2, 3], &p)?)?)?)?;
    let lhs = on(&y, &[1, 3], &p)?;
    let collapse = max_diff(&lhs, &rhs);
    let unitarity = unitarity_residual(&y);
    let tol = tolerance();
    require("beta_restriction_collapse", collapse, tol)?;
    require("beta_restriction_unitary", unitarity, tol)?;
    Ok(BetaRestriction { y, collapse_residual: collapse, unitarity_residual: unitarity })
}
