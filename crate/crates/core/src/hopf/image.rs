//! Hopf images and the generation certificate.

use super::morphism::{HopfMap, QMorphism};
use super::subset::{beta_restriction, build_x, fixed_points, slice_algebra, SliceAlgebra, SubsetData};
use super::{require, HopfError};
use crate::fqg::{random_corep, Corep, FqgData, HopfStructure, Tensor3};
use crate::linalg::{
    star_commutant, gaussian_matrix, max_abs_slice, max_diff, seeded_rng, tolerance, CMatrix, CVector, SubspaceBasis,
    C64,
};
use std::sync::Arc;

/// Projection defects of `Δ̂(M₁)` into `M₁⊗M₁` and of `Ŝ(M₁)` into `M₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaajVaesReport {
    pub coproduct_defect: f64,
    pub antipode_defect: f64,
}

impl BaajVaesReport {
    pub fn passed(&self) -> bool {
        self.coproduct_defect <= tolerance() && self.antipode_defect <= tolerance()
    }
}

/// Invariance of a subspace of `parent_dual` under its coproduct and
/// antipode, measured through the orthogonal projection `P = QQ†`.
pub fn check_baaj_vaes(m1: &SubspaceBasis, parent_dual: &FqgData) -> BaajVaesReport {
    let q = m1.matrix();
    let n = parent_dual.dim();
    let proj = q * q.adjoint();
    let mut cop: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for a in 0..q.ncols() {
        let qa = q.column(a).into_owned();
        let d = CMatrix::from_row_slice(n, n, &parent_dual.coproduct_of(&qa));
        // (P⊗P)·vec(D) = P D Pᵀ for row-major coefficient arrays.
        let projected = &proj * &d * proj.transpose();
        cop = cop.max(max_diff(&d, &projected));
        let s = parent_dual.antipode(&qa);
        anti = anti.max(max_abs_slice((&s - &proj * &s).as_slice()));
    }
    BaajVaesReport { coproduct_defect: cop, antipode_defect: anti }
}

/// The Hopf image of a morphism.
#[derive(Debug, Clone)]
pub struct HopfImageResult {
    /// `C(ℍ)`.
    pub image_group: Arc<FqgData>,
    /// The dual of the image, with basis the orthonormal basis of `M₁`.
    pub image_dual: Arc<FqgData>,
    /// The Hopf surjection `π: A → C(ℍ)`.
    pub pi: HopfMap,
    /// `β̃` with `β = β̃∘π`.
    pub beta_tilde: QMorphism,
    pub m1: SliceAlgebra,
    pub baaj_vaes: BaajVaesReport,
    pub factorization_residual: f64,
    /// `dim` of the slice algebra of `β̃`, which equals `dim C(ℍ)`.
    pub fullness_dim: usize,
}

impl HopfImageResult {
    pub fn dim(&self) -> usize {
        self.image_group.dim()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.pi.source().dim()
    }

    /// Orthonormal basis of `M₁` in dual coordinates.
    pub fn m1_basis(&self) -> &SubspaceBasis {
        &self.m1.dual_basis
    }
}

/// Restrict the dual structure to the subalgebra spanned by the orthonormal
/// columns of `q`.
fn restrict_structure(dual: &FqgData, q: &CMatrix) -> HopfStructure {
    let n = dual.dim();
    let r = q.ncols();
    let qa = q.adjoint();
    let qc = q.map(|z| z.conj());
    let cols: Vec<CVector> = (0..r).map(|a| q.column(a).into_owned()).collect();
    let coords = |v: &CVector| &qa * v;
    let mut mult = Tensor3::zeros(r, r, r);
    let mut coproduct = Tensor3::zeros(r, r, r);
    let mut star = CMatrix::zeros(r, r);
    let mut antipode = CMatrix::zeros(r, r);
    let mut counit = CVector::zeros(r);
    for a in 0..r {
        for b in 0..r {
            let c = coords(&dual.mul(&cols[a], &cols[b]));
            for k in 0..r {
                mult.set(a, b, k, c[k]);
            }
        }
        let s = coords(&dual.star(&cols[a]));
        let t = coords(&dual.antipode(&cols[a]));
        for k in 0..r {
            star[(a, k)] = s[k];
            antipode[(a, k)] = t[k];
        }
        let d = CMatrix::from_row_slice(n, n, &dual.coproduct_of(&cols[a]));
        let c = &qa * d * &qc;
        for j in 0..r {
            for k in 0..r {
                coproduct.set(a, j, k, c[(j, k)]);
            }
        }
        counit[a] = dual.counit_of(&cols[a]);
    }
    HopfStructure { mult, unit: coords(dual.unit()), star, coproduct, counit, antipode }
}

/// The Hopf image `ℍ` of `β`: `M₁` with the restricted dual structure is
/// the dual of `ℍ`, `π` is the transpose of `M₁ ↪ Â` and `β̃` solves
/// `β = β̃∘π`. Checks that `π` is a Hopf surjection, that the factorization
/// holds and that `β̃` is generating for `ℍ`.
pub fn hopf_image(beta: &QMorphism) -> Result<HopfImageResult, HopfError> {
    let subset = build_x(beta)?;
    let m1 = slice_algebra(&subset)?;
    hopf_image_of(&subset, m1)
}

pub(crate) fn hopf_image_of(subset: &SubsetData, m1: SliceAlgebra) -> Result<HopfImageResult, HopfError> {
    let beta = subset.beta();
    let a = subset.parent();
    let dual = a.dual();
    let bv = check_baaj_vaes(&m1.dual_basis, &dual);
    if !bv.passed() {
        return Err(HopfError::NotInvariant { coproduct: bv.coproduct_defect, antipode: bv.antipode_defect });
    }
    let q = m1.dual_basis.matrix().clone();
    let r = q.ncols();
    let structure = restrict_structure(&dual, &q);
    let image_dual = FqgData::from_structure(structure, format!("M1({})", a.name()))?.checked()?;
    let image_group = Arc::new(crate::fqg::dual(&image_dual)?.with_name(format!("image({})", a.name())));
    let image_dual = Arc::new(image_dual);

    let pi = HopfMap::new(a.clone(), image_group.clone(), q.transpose())?;
    let report = pi.check();
    let tol = tolerance();
    for (name, residual) in [
        ("pi_multiplicative", report.multiplicativity),
        ("pi_unital", report.unitality),
        ("pi_star", report.star),
        ("pi_coproduct", report.coproduct),
        ("pi_counit", report.counit),
        ("pi_antipode", report.antipode),
    ] {
        require(name, residual, tol)?;
    }
    if report.rank != r {
        return Err(HopfError::Postcondition { name: "pi_surjective".into(), residual: (r - report.rank) as f64 });
    }

    // β̃(f_a) = Σ_i conj(Q_ia)·β(e_i); the residual is ‖(1 − QQ†)B‖.
    let m = beta.target_dim();
    let tilde_images: Vec<CMatrix> = (0..r)
        .map(|col| {
            let mut acc = CMatrix::zeros(m, m);
            for (i, img) in beta.images().iter().enumerate() {
                acc += img * q[(i, col)].conj();
            }
            acc
        })
        .collect();
    let beta_tilde = QMorphism::new(image_group.clone(), tilde_images)?;
    let recomposed = beta_tilde.compose(&pi)?;
    let factorization = recomposed.distance(beta);
    require("factorization", factorization, tol)?;
    let beta_tilde = beta_tilde.checked()?;

    let fullness = slice_algebra(&build_x(&beta_tilde)?)?.dim();
    if fullness != r {
        return Err(HopfError::Postcondition { name: "fullness".into(), residual: (r as f64 - fullness as f64).abs() });
    }
    Ok(HopfImageResult {
        image_group,
        image_dual,
        pi,
        beta_tilde,
        m1,
        baaj_vaes: bv,
        factorization_residual: factorization,
        fullness_dim: fullness,
    })
}

/// Evidence for or against `β` being generating.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationCertificate {
    pub generating: bool,
    pub source_dim: usize,
    /// Condition (ii): `dim M₁`.
    pub m1_dim: usize,
    /// Condition (iii): dimension of `{x : θ(x) = x⊗1}`.
    pub fixed_point_dim: usize,
    /// Condition (iv): number of corepresentation pairs sampled.
    pub samples: usize,
    /// Pairs `u ≠ v` with equal β-restrictions. Any collision certifies that
    /// `β` is not generating.
    pub collisions: usize,
    /// Collisions found although (ii) holds.
    pub contradictions: usize,
}

/// Default number of sampled pairs for condition (iv).
pub const DEFAULT_SAMPLES: usize = 20;

/// Largest carrier dimension of the sampled corepresentations.
const SAMPLE_COREP_DIM: usize = 3;

/// [`is_generating_with`] with the default sample count and seed.
pub fn is_generating(beta: &QMorphism) -> Result<GenerationCertificate, HopfError> {
    is_generating_with(beta, DEFAULT_SAMPLES, 0)
}

/// Decide generation by `dim M₁ = dim A`, cross-checked against ergodicity
/// of `θ`, and probe the injectivity of β-restriction on `samples` pairs.
pub fn is_generating_with(beta: &QMorphism, samples: usize, seed: u64) -> Result<GenerationCertificate, HopfError> {
    let subset = build_x(beta)?;
    let a = subset.parent().clone();
    let n = a.dim();
    let m1_dim = slice_algebra(&subset)?.dim();
    let theta = subset.theta()?;
    let fixed_point_dim = fixed_points(&theta).dim();
    let ii = m1_dim == n;
    let iii = fixed_point_dim == 1;
    if ii != iii {
        return Err(HopfError::CharacterisationMismatch { m1_dim, dim: n, fixed_dim: fixed_point_dim });
    }
    let mut rng = seeded_rng(seed ^ 0x9e3779b97f4a7c15);
    let mut collisions = 0;
    for k in 0..samples {
        let (u, v) = if k % 2 == 0 {
            conjugation_pair(&a, &subset, &mut rng)?
        } else {
            (random_corep(&a, SAMPLE_COREP_DIM, &mut rng), random_corep(&a, SAMPLE_COREP_DIM, &mut rng))
        };
        if collide(&u, &v, &subset)? {
            collisions += 1;
        }
    }
    Ok(GenerationCertificate {
        generating: ii,
        source_dim: n,
        m1_dim,
        fixed_point_dim,
        samples,
        collisions,
        contradictions: if ii { collisions } else { 0 },
    })
}

/// Threshold above which two corepresentations count as different.
const DISTINCT: f64 = 1e-6;

fn collide(u: &Corep, v: &Corep, subset: &SubsetData) -> Result<bool, HopfError> {
    if u.carrier_dim() != v.carrier_dim() {
        return Ok(false);
    }
    let distinct = max_diff(u.coeffs(), v.coeffs()) > DISTINCT;
    if !distinct {
        return Ok(false);
    }
    let yu = beta_restriction(u, subset)?;
    let yv = beta_restriction(v, subset)?;
    Ok(max_diff(&yu.y, &yv.y) <= tolerance() * 100.0)
}

/// A random corep `u` and `v = (t⊗1)u(t*⊗1)` with `t = exp(iH)` for a random
/// self-adjoint `H` commuting with the slices of the β-restriction of `u`.
/// Then `v` has the same β-restriction, and `v ≠ u` exactly when `t` fails
/// to commute with `u`, which requires `M₁` to be proper.
fn conjugation_pair<R: rand::Rng + ?Sized>(
    a: &Arc<FqgData>,
    subset: &SubsetData,
    rng: &mut R,
) -> Result<(Corep, Corep), HopfError> {
    let u = random_corep(a, SAMPLE_COREP_DIM, rng);
    let d = u.carrier_dim();
    let m = subset.beta().target_dim();
    let yu = beta_restriction(&u, subset)?;
    let mut gens = Vec::with_capacity(2 * m * m);
    for p in 0..m {
        for q in 0..m {
            let s = yu.slice(d, m, p, q);
            gens.push(s.adjoint());
            gens.push(s);
        }
    }
    let comm = star_commutant(&gens, d)?;
    let coeffs = gaussian_matrix(rng, comm.dim(), 1);
    let mut h = CMatrix::zeros(d, d);
    for (k, mat) in comm.as_matrices().iter().enumerate() {
        h += mat * coeffs[(k, 0)];
    }
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::new(0.0, x).exp()));
    let t = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let v = u.conjugated(&t);
    Ok((u, v))
}
