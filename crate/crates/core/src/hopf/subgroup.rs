//! Closed quantum subgroups given by Hopf surjections, the subgroup a family
//! generates, composition with homomorphisms and separation.

use super::image::{hopf_image, hopf_image_of, is_generating, HopfImageResult};
use super::morphism::{same_source, HopfMap, QMorphism};
use super::subset::{build_x, dual_closure, flip_conjugate, SliceAlgebra, SubsetData};
use super::{require, HopfError};
use crate::fqg::FqgData;
use crate::linalg::{
    apply_on_legs, kron, matmul, max_abs_slice, max_diff, probes, rank, tolerance, unitarity_residual, CMatrix,
    CVector, LegSpace, SpanBuilder, SubspaceBasis,
};
use std::sync::Arc;

/// A closed quantum subgroup `ℍ ⊆ 𝔾` presented by a Hopf surjection
/// `π: C(𝔾) → C(ℍ)`, with its dual embedding `γ` and bicharacter `V`.
#[derive(Debug, Clone)]
pub struct SubgroupEmbedding {
    pi: HopfMap,
    /// `n×r`: column `a` is `γ(f^a)` in the dual basis of the parent.
    gamma: CMatrix,
    /// `V = (id⊗π)W = Σ_i λ(e^i)⊗L_H(π(e_i))` on `L²(𝔾)⊗L²(ℍ)`.
    v: CMatrix,
    /// Residuals of the two bicharacter laws.
    pub bicharacter_residuals: (f64, f64),
    /// Distance between `γ` read off `V` and the transpose of `π`.
    pub gamma_residual: f64,
}

impl SubgroupEmbedding {
    pub fn pi(&self) -> &HopfMap {
        &self.pi
    }

    pub fn parent(&self) -> &Arc<FqgData> {
        self.pi.source()
    }

    pub fn subgroup(&self) -> &Arc<FqgData> {
        self.pi.target()
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn v_matrix(&self) -> &CMatrix {
        &self.v
    }

    /// `γ(Ĥ)` as a subspace of the parent's dual.
    pub fn gamma_image(&self) -> SubspaceBasis {
        SubspaceBasis::column_span(&self.gamma)
    }

    /// `L_H∘π`, the subgroup seen as a morphism out of the parent.
    pub fn as_morphism(&self) -> QMorphism {
        self.pi.to_qmorphism()
    }

    /// The `n×n` slices `(id⊗ω_pq)V` over matrix units of `L²(ℍ)`.
    pub fn v_slices(&self) -> Vec<CMatrix> {
        let n = self.parent().dim();
        let r = self.subgroup().dim();
        let mut out = Vec::with_capacity(r * r);
        for p in 0..r {
            for q in 0..r {
                out.push(CMatrix::from_fn(n, n, |x, y| self.v[(x * r + p, y * r + q)]));
            }
        }
        out
    }
}

/// Build the subgroup data of a Hopf surjection. `γ` is obtained from
/// `V = Σ_a λ(γ(f^a))⊗L_H(f_a)` by Hilbert–Schmidt extraction of the second
/// leg, and compared with `πᵀ`; both bicharacter laws
/// `σ₁₂W₁₂*V₂₃W₁₂σ₁₂ = V₂₃V₁₃` and `W^ℍ₂₃V₁₂W^ℍ₂₃* = V₁₂V₁₃` are checked.
pub fn subgroup_from_quotient(pi: &HopfMap) -> Result<SubgroupEmbedding, HopfError> {
    let report = pi.check();
    let tol = tolerance();
    require("pi_hopf_map", report.max(), tol)?;
    let a = pi.source();
    let h = pi.target();
    let n = a.dim();
    let r = h.dim();
    let ga = a.gns();
    let gh = h.gns();
    let mut v = CMatrix::zeros(n * r, n * r);
    for i in 0..n {
        v += kron(ga.lambda_basis(i), &gh.left(&pi.matrix().column(i).into_owned()));
    }
    require("v_unitary", unitarity_residual(&v), tol)?;

    // Second-leg extraction: V = Σ_a Λ_a⊗L_a with L_a = L_H(f_a); then
    // Σ_a tr(L_b†L_a)Λ_a = (id⊗tr)((1⊗L_b†)V).
    let lh = gh.left_all();
    let mut hs = CMatrix::zeros(r, r);
    for b in 0..r {
        for c in 0..r {
            hs[(b, c)] = lh[b].iter().zip(lh[c].iter()).map(|(x, y)| x.conj() * y).sum();
        }
    }
    let hs_inv = hs.try_inverse().ok_or(HopfError::Postcondition { name: "hs_gram_invertible".into(), residual: 0.0 })?;
    let mut partial: Vec<CMatrix> = vec![CMatrix::zeros(n, n); r];
    for (b, pb) in partial.iter_mut().enumerate() {
        for x in 0..n {
            for y in 0..n {
                let mut acc = crate::linalg::C64::new(0.0, 0.0);
                for p in 0..r {
                    for q in 0..r {
                        acc += lh[b][(q, p)].conj() * v[(x * r + q, y * r + p)];
                    }
                }
                pb[(x, y)] = acc;
            }
        }
    }
    let mut gamma = CMatrix::zeros(n, r);
    for c in 0..r {
        let mut op = CMatrix::zeros(n, n);
        for (b, pb) in partial.iter().enumerate() {
            op += pb * hs_inv[(c, b)];
        }
        gamma.set_column(c, &ga.lambda_coeffs(&op));
    }
    let gamma_residual = max_diff(&gamma, &pi.matrix().transpose());
    require("gamma_from_v", gamma_residual, tol)?;
    check_gamma(a, h, &gamma)?;
    let laws = bicharacter_residuals(a, h, &v)?;
    require("bicharacter_first_leg", laws.0, tol)?;
    require("bicharacter_second_leg", laws.1, tol)?;
    Ok(SubgroupEmbedding { pi: pi.clone(), gamma, v, bicharacter_residuals: laws, gamma_residual })
}

/// `γ` is an injective unital *-homomorphism `Ĥ → Â`.
fn check_gamma(a: &FqgData, h: &FqgData, gamma: &CMatrix) -> Result<(), HopfError> {
    let tol = tolerance();
    let r = h.dim();
    if rank(gamma) != r {
        return Err(HopfError::Postcondition { name: "gamma_injective".into(), residual: (r - rank(gamma)) as f64 });
    }
    let ad = a.dual();
    let hd = h.dual();
    let g = |x: &CVector| gamma * x;
    let vd = |x: &CVector, y: &CVector| max_abs_slice((x - y).as_slice());
    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    for b in 0..r {
        let fb = hd.basis(b);
        for c in 0..r {
            let fc = hd.basis(c);
            mult = mult.max(vd(&g(&hd.mul(&fb, &fc)), &ad.mul(&g(&fb), &g(&fc))));
        }
        star = star.max(vd(&g(&hd.star(&fb)), &ad.star(&g(&fb))));
    }
    require("gamma_multiplicative", mult, tol)?;
    require("gamma_star", star, tol)?;
    require("gamma_unital", vd(&g(hd.unit()), ad.unit()), tol)
}

fn bicharacter_residuals(a: &FqgData, h: &FqgData, v: &CMatrix) -> Result<(f64, f64), HopfError> {
    let n = a.dim();
    let r = h.dim();
    let w = a.w();
    let w_flipped = flip_conjugate(w.matrix(), n);
    // σ₁₂W₁₂*V₂₃W₁₂σ₁₂ = W'₁₂*V₁₃W'₁₂ with W' = σWσ.
    let space = LegSpace::new(&[n, n, r])?;
    let p = probes(space.total(), 0xb1c1);
    let on = |op: &CMatrix, legs: &[usize], x: &CMatrix| apply_on_legs(op, legs, &space, x);
    let lhs = on(&w_flipped.adjoint(), &[1, 2], &on(v, &[1, 3], &on(&w_flipped, &[1, 2], &p)?)?)?;
    let rhs = on(v, &[2, 3], &on(v, &[1, 3], &p)?)?;
    let first = max_diff(&lhs, &rhs);

    let wh = h.w();
    let whm = wh.matrix();
    let space = LegSpace::new(&[n, r, r])?;
    let p = probes(space.total(), 0xb1c2);
    let on = |op: &CMatrix, legs: &[usize], x: &CMatrix| apply_on_legs(op, legs, &space, x);
    let lhs = on(whm, &[2, 3], &on(v, &[1, 2], &on(&whm.adjoint(), &[2, 3], &p)?)?)?;
    let rhs = on(v, &[1, 2], &on(v, &[1, 3], &p)?)?;
    Ok((first, max_diff(&lhs, &rhs)))
}

/// Dimensions of the four descriptions of the algebra generated by two
/// subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourAlgebraDims {
    /// The algebra generated by `γ₁(Ĥ₁) ∪ γ₂(Ĥ₂)`.
    pub join: usize,
    /// `M₁` of `(L₁π₁⊗L₂π₂)∘Δ`.
    pub product: usize,
    /// `M₁` of `L₁π₁ ⊕ L₂π₂`.
    pub union: usize,
    /// The algebra generated by the slices of `V¹₁₂V²₁₃`.
    pub v_slices: usize,
}

impl FourAlgebraDims {
    pub fn agree(&self) -> bool {
        self.join == self.product && self.product == self.union && self.union == self.v_slices
    }

    fn as_vec(&self) -> Vec<usize> {
        vec![self.join, self.product, self.union, self.v_slices]
    }
}

/// The subgroup generated by a family of subgroups.
#[derive(Debug, Clone)]
pub struct GeneratedSubgroup {
    pub image: HopfImageResult,
    /// One entry per pairwise join step.
    pub steps: Vec<FourAlgebraDims>,
}

impl GeneratedSubgroup {
    pub fn dim(&self) -> usize {
        self.image.dim()
    }

    pub fn is_full(&self) -> bool {
        self.image.is_full()
    }
}

/// The four algebras for a pair of subgroups, with their spans compared.
fn four_algebras(
    e1: &SubgroupEmbedding,
    e2: &SubgroupEmbedding,
) -> Result<(FourAlgebraDims, SubsetData, SliceAlgebra), HopfError> {
    let a = e1.parent().clone();
    let n = a.dim();
    let dual = a.dual();
    let g = a.gns();

    let mut seeds = e1.gamma_image().vectors();
    seeds.extend(e2.gamma_image().vectors());
    let join = dual_closure(&dual, &seeds);

    // Slices of (β₁⊗β₂)Δ span the range of D(G₁⊗G₂)D† with G_k the
    // Hilbert–Schmidt Gram matrix of the images of β_k.
    let b1 = e1.as_morphism();
    let b2 = e2.as_morphism();
    let g1 = hs_gram(&b1);
    let g2 = hs_gram(&b2);
    let mut dmat = CMatrix::zeros(n, n * n);
    for i in 0..n {
        for &(j, k, d) in a.coproduct_basis(i) {
            dmat[(i, j * n + k)] += d;
        }
    }
    let range = matmul(&matmul(&dmat, &kron(&g1, &g2)), &dmat.adjoint());
    let product = dual_closure(&dual, &SubspaceBasis::column_span(&range).vectors());

    let union_beta = b1.direct_sum(&b2)?;
    let union_subset = build_x(&union_beta)?;
    let union_m1 = super::subset::slice_algebra(&union_subset)?;
    let union = union_m1.dual_basis.clone();

    // The products of the slices span the product of the two slice spans,
    // so bases of the spans suffice.
    let mut builder = SpanBuilder::new(n);
    let s1 = SubspaceBasis::span_of_matrices(n, n, &e1.v_slices()).as_matrices();
    let s2 = SubspaceBasis::span_of_matrices(n, n, &e2.v_slices()).as_matrices();
    for x in &s1 {
        for y in &s2 {
            builder.push(&g.lambda_coeffs(&matmul(x, y)));
        }
    }
    let v_slices = dual_closure(&dual, &builder.finish().vectors());

    let dims = FourAlgebraDims { join: join.dim(), product: product.dim(), union: union.dim(), v_slices: v_slices.dim() };
    let spans_agree = join.same_span(&product) && join.same_span(&union) && join.same_span(&v_slices);
    if !dims.agree() || !spans_agree {
        return Err(HopfError::FourAlgebraMismatch(dims.as_vec()));
    }
    Ok((dims, union_subset, union_m1))
}

fn hs_gram(beta: &QMorphism) -> CMatrix {
    let imgs = beta.images();
    let n = imgs.len();
    CMatrix::from_fn(n, n, |j, k| imgs[j].iter().zip(imgs[k].iter()).map(|(x, y)| x * y.conj()).sum())
}

/// The closed quantum subgroup generated by a family. Pairs are joined one
/// at a time; at each step the four algebras must coincide, and the result
/// is the Hopf image of the direct sum of the two subgroup morphisms.
pub fn generated_subgroup(embeddings: &[SubgroupEmbedding]) -> Result<GeneratedSubgroup, HopfError> {
    let first = embeddings.first().ok_or(HopfError::EmptyFamily)?;
    for e in embeddings {
        if !same_source(e.parent(), first.parent()) {
            return Err(HopfError::ParentMismatch);
        }
    }
    if embeddings.len() == 1 {
        return Ok(GeneratedSubgroup { image: hopf_image(&first.as_morphism())?, steps: Vec::new() });
    }
    let mut current = first.clone();
    let mut steps = Vec::new();
    let mut last = None;
    for next in &embeddings[1..] {
        let (dims, union_subset, union_m1) = four_algebras(&current, next)?;
        steps.push(dims);
        let image = hopf_image_of(&union_subset, union_m1)?;
        current = subgroup_from_quotient(&image.pi)?;
        last = Some(image);
    }
    Ok(GeneratedSubgroup { image: last.expect("at least two members"), steps })
}

/// `β∘φ` and its unitary `Y`, with the identity `Y₁₃ = V₁₂*X₂₃V₁₂X₂₃*`.
#[derive(Debug, Clone)]
pub struct ComposeResult {
    pub composed: QMorphism,
    /// `Y = Σ_i λ_K(e^i)⊗β(φ(e_i))` on `L²(K)⊗ℂ^m`.
    pub y: CMatrix,
    pub identity_residual: f64,
}

/// Compose `β` on `C(G)` with a Hopf map `φ: C(K) → C(G)`.
pub fn compose_with_hom(beta: &QMorphism, phi: &HopfMap) -> Result<ComposeResult, HopfError> {
    let tol = tolerance();
    require("phi_hopf_map", phi.check().max(), tol)?;
    let composed = beta.compose(phi)?;
    let xk = build_x(&composed)?;
    let xg = build_x(beta)?;
    let k = phi.source();
    let nk = k.dim();
    let ng = phi.target().dim();
    let m = beta.target_dim();
    let gk = k.gns();
    let gg = phi.target().gns();
    let mut v = CMatrix::zeros(nk * ng, nk * ng);
    for i in 0..nk {
        v += kron(gk.lambda_basis(i), &gg.left(&phi.matrix().column(i).into_owned()));
    }
    let space = LegSpace::new(&[nk, ng, m])?;
    let p = probes(space.total(), 0xc0e9);
    let x = xg.x_matrix();
    let on = |op: &CMatrix, legs: &[usize], z: &CMatrix| apply_on_legs(op, legs, &space, z);
    let rhs = on(&v.adjoint(), &[1, 2], &on(x, &[2, 3], &on(&v, &[1, 2], &on(&x.adjoint(), &[2, 3], &p)?)?)?)?;
    let y = xk.x_matrix().clone();
    let lhs = on(&y, &[1, 3], &p)?;
    let residual = max_diff(&lhs, &rhs);
    require("composition_identity", residual, tol)?;
    Ok(ComposeResult { composed, y, identity_residual: residual })
}

/// Outcome of [`separation_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub generating: bool,
    /// `max ‖β∘φ − β∘ψ‖`.
    pub beta_distance: f64,
    /// `max ‖φ − ψ‖`.
    pub hom_distance: f64,
    /// For generating `β`: `β∘φ = β∘ψ` implies `φ = ψ`. Vacuous otherwise.
    pub consistent: bool,
}

impl SeparationReport {
    /// `φ ≠ ψ` although `β∘φ = β∘ψ`.
    pub fn witnesses_non_separation(&self) -> bool {
        let tol = tolerance();
        self.beta_distance <= tol && self.hom_distance > tol
    }
}

/// Whether `β` separates the two homomorphisms.
pub fn separation_check(beta: &QMorphism, phi: &HopfMap, psi: &HopfMap) -> Result<SeparationReport, HopfError> {
    let generating = is_generating(beta)?.generating;
    let bp = compose_with_hom(beta, phi)?.composed;
    let bq = compose_with_hom(beta, psi)?.composed;
    let beta_distance = bp.distance(&bq);
    let hom_distance = phi.distance(psi);
    let tol = tolerance();
    let consistent = !generating || beta_distance > tol || hom_distance <= tol;
    Ok(SeparationReport { generating, beta_distance, hom_distance, consistent })
}
