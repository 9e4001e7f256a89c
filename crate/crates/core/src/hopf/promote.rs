//! Restriction of corepresentations to subgroups and promotion of
//! intertwiners from a generating family to the whole group.

use super::morphism::same_source;
use super::subgroup::SubgroupEmbedding;
use super::subset::dual_closure;
use super::{require, HopfError};
use crate::fqg::{intertwiners, Corep};
use crate::linalg::{
    apply_on_legs, kron, star_commutant, max_diff, probes, tolerance, CMatrix, LegSpace, SpanBuilder,
    SubspaceBasis,
};

/// A corepresentation of the subgroup with the residual of
/// `U^π₁₃ = U₁₂*V₂₃U₁₂V₂₃*`.
#[derive(Debug, Clone)]
pub struct RestrictedCorep {
    pub corep: Corep,
    pub identity_residual: f64,
}

/// `(id⊗π)u`. Direct sums restrict blockwise, so the block structure is kept.
pub fn restrict_corep(u: &Corep, emb: &SubgroupEmbedding) -> Result<RestrictedCorep, HopfError> {
    if !same_source(u.parent(), emb.parent()) {
        return Err(HopfError::ParentMismatch);
    }
    let pi = emb.pi().matrix();
    let coeffs = u.coeffs() * pi.transpose();
    let d = u.carrier_dim();
    let restricted = restrict_blocks(u, emb, coeffs)?;
    let n = u.parent().dim();
    let r = emb.subgroup().dim();
    let space = LegSpace::new(&[d, n, r])?;
    let p = probes(space.total(), 0x2e57);
    let uop = u.operator();
    let v = emb.v_matrix();
    let on = |op: &CMatrix, legs: &[usize], x: &CMatrix| apply_on_legs(op, legs, &space, x);
    let rhs = on(&uop.adjoint(), &[1, 2], &on(v, &[2, 3], &on(&uop, &[1, 2], &on(&v.adjoint(), &[2, 3], &p)?)?)?)?;
    let lhs = on(&restricted.operator(), &[1, 3], &p)?;
    let residual = max_diff(&lhs, &rhs);
    require("restriction_identity", residual, tolerance())?;
    Ok(RestrictedCorep { corep: restricted, identity_residual: residual })
}

fn restrict_blocks(u: &Corep, emb: &SubgroupEmbedding, coeffs: CMatrix) -> Result<Corep, HopfError> {
    let h = emb.subgroup().clone();
    if u.blocks().len() <= 1 {
        return Ok(Corep::from_coeffs(h, u.carrier_dim(), coeffs)?);
    }
    let pi_t = emb.pi().matrix().transpose();
    let mut start = 0;
    let mut acc: Option<Corep> = None;
    for &size in u.blocks() {
        let block = u.block(start, size);
        let rb = Corep::from_coeffs(h.clone(), size, block.coeffs() * &pi_t)?;
        acc = Some(match acc {
            None => rb,
            Some(prev) => crate::fqg::direct_sum(&prev, &rb)?,
        });
        start += size;
    }
    Ok(acc.expect("at least one block"))
}

/// Outcome of [`promote_intertwiners_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PromotionReport {
    pub hom_g_dim: usize,
    pub intersection_dim: usize,
    /// `Hom_𝔾(u,v) = ∩ᵢ Hom_ℍᵢ(u|ᵢ, v|ᵢ)` as subspaces.
    pub equal: bool,
    /// `Hom_𝔾` lies inside the intersection, as it always must.
    pub contained: bool,
    /// Dimension of the algebra generated by all `γᵢ(Ĥᵢ)`.
    pub join_dim: usize,
    pub parent_dim: usize,
    /// For a two-member family: whether the slices of `V¹₁₂V²₁₃` generate
    /// the whole dual.
    pub slice_condition: Option<bool>,
    /// For the regular corep: whether the intersection equals the commutant
    /// of the join algebra in the regular representation.
    pub commutant_matches: Option<bool>,
}

impl PromotionReport {
    pub fn family_generates(&self) -> bool {
        self.join_dim == self.parent_dim
    }
}

fn is_regular(u: &Corep) -> bool {
    let a = u.parent();
    if u.carrier_dim() != a.dim() {
        return false;
    }
    let reg = crate::fqg::regular_corep(a);
    max_diff(reg.coeffs(), u.coeffs()) <= tolerance()
}

/// Compute `Hom_𝔾(u,v)` and `∩ᵢ Hom_ℍᵢ(u|ᵢ,v|ᵢ)` and compare them.
pub fn promote_intertwiners_check(
    embeddings: &[SubgroupEmbedding],
    u: &Corep,
    v: &Corep,
) -> Result<PromotionReport, HopfError> {
    let first = embeddings.first().ok_or(HopfError::EmptyFamily)?;
    let a = first.parent().clone();
    for e in embeddings {
        if !same_source(e.parent(), &a) {
            return Err(HopfError::ParentMismatch);
        }
    }
    if !same_source(u.parent(), &a) || !same_source(v.parent(), &a) {
        return Err(HopfError::ParentMismatch);
    }
    let hom_g = intertwiners(u, v)?;
    let mut inter: Option<SubspaceBasis> = None;
    for e in embeddings {
        let ur = restrict_corep(u, e)?.corep;
        let h = if std::ptr::eq(u, v) {
            intertwiners(&ur, &ur)?
        } else {
            intertwiners(&ur, &restrict_corep(v, e)?.corep)?
        };
        inter = Some(match inter {
            None => h,
            Some(prev) => prev.intersection(&h),
        });
    }
    let inter = inter.expect("nonempty family");
    let contained = inter.contains_subspace(&hom_g);
    let equal = contained && hom_g.dim() == inter.dim();

    let n = a.dim();
    let dual = a.dual();
    let mut seeds = Vec::new();
    for e in embeddings {
        seeds.extend(e.gamma_image().vectors());
    }
    let join = dual_closure(&dual, &seeds);

    let slice_condition = if embeddings.len() == 2 {
        let g = a.gns();
        let mut builder = SpanBuilder::new(n);
        for x in &embeddings[0].v_slices() {
            for y in &embeddings[1].v_slices() {
                builder.push(&g.lambda_coeffs(&(x * y)));
            }
        }
        Some(dual_closure(&dual, &builder.finish().vectors()).dim() == n)
    } else {
        None
    };

    let commutant_matches = if is_regular(u) && is_regular(v) {
        let g = a.gns();
        // The commutant of the join is that of its generators.
        let ops: Vec<CMatrix> = seeds.iter().map(|x| g.lambda(x)).collect();
        let comm = star_commutant(&ops, n)?;
        Some(comm.same_span(&inter))
    } else {
        None
    };

    Ok(PromotionReport {
        hom_g_dim: hom_g.dim(),
        intersection_dim: inter.dim(),
        equal,
        contained,
        join_dim: join.dim(),
        parent_dim: n,
        slice_condition,
        commutant_matches,
    })
}

/// Outcome of [`invariant_subspace_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSubspaceReport {
    pub family_generates: bool,
    /// Whether the projection intertwines `u|ᵢ` with itself, per member.
    pub preserved_by_members: Vec<bool>,
    pub preserved_by_group: bool,
    /// False only if the family generates, every member preserves the
    /// projection, and the whole group does not.
    pub consistent: bool,
}

/// Whether a projection preserved by each member of a family is preserved
/// by the whole group.
pub fn invariant_subspace_check(
    embeddings: &[SubgroupEmbedding],
    u: &Corep,
    projector: &CMatrix,
) -> Result<InvariantSubspaceReport, HopfError> {
    let first = embeddings.first().ok_or(HopfError::EmptyFamily)?;
    let a = first.parent().clone();
    let d = u.carrier_dim();
    if projector.nrows() != d || projector.ncols() != d {
        return Err(HopfError::Shape { what: "projector side", expected: d, found: projector.nrows() });
    }
    let tol = tolerance();
    require("projector_idempotent", max_diff(&(projector * projector), projector), tol * 10.0)?;
    require("projector_selfadjoint", max_diff(&projector.adjoint(), projector), tol * 10.0)?;

    let commutes = |c: &Corep| {
        let p = kron(projector, &CMatrix::identity(c.parent().dim(), c.parent().dim()));
        let op = c.operator();
        max_diff(&(&p * &op), &(&op * &p)) <= tol * 10.0
    };
    let mut preserved_by_members = Vec::with_capacity(embeddings.len());
    for e in embeddings {
        preserved_by_members.push(commutes(&restrict_corep(u, e)?.corep));
    }
    let preserved_by_group = commutes(u);
    let dual = a.dual();
    let mut seeds = Vec::new();
    for e in embeddings {
        seeds.extend(e.gamma_image().vectors());
    }
    let family_generates = dual_closure(&dual, &seeds).dim() == a.dim();
    let all_members = preserved_by_members.iter().all(|&b| b);
    let consistent = !(family_generates && all_members) || preserved_by_group;
    Ok(InvariantSubspaceReport { family_generates, preserved_by_members, preserved_by_group, consistent })
}
