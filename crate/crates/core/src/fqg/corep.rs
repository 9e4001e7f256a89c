//! Finite-dimensional unitary corepresentations `U ∈ M_d⊗A`.

use super::{FqgData, FqgError};
use crate::linalg::{
    gaussian_matrix, hermitian_eigenspaces, max_abs_slice, nullspace, random_unitary, CMatrix, CVector,
    SpanBuilder, SubspaceBasis, C64,
};
use rand::Rng;
use std::sync::Arc;

/// A corepresentation with `(id⊗Δ)U = U₁₂U₁₃`, stored as the coefficient
/// vectors of its matrix entries `u_pq`.
#[derive(Debug, Clone)]
pub struct Corep {
    parent: Arc<FqgData>,
    d: usize,
    /// Row `p·d + q` is the coefficient vector of `u_pq`.
    coeffs: CMatrix,
    /// Sizes of the diagonal blocks when built as a direct sum.
    blocks: Vec<usize>,
}

fn same_parent(a: &Arc<FqgData>, b: &Arc<FqgData>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Corep {
    /// Wrap coefficients without checks.
    pub fn from_coeffs(parent: Arc<FqgData>, d: usize, coeffs: CMatrix) -> Result<Self, FqgError> {
        let n = parent.dim();
        if coeffs.nrows() != d * d || coeffs.ncols() != n {
            return Err(FqgError::Dimension { what: "corep coefficients", expected: d * d * n, found: coeffs.len() });
        }
        Ok(Self { parent, d, coeffs, blocks: vec![d] })
    }

    /// The corep `u = Σ_i ρ(e^i)⊗e_i` of a representation `ρ` of the dual,
    /// given on the dual basis.
    pub fn from_dual_rep(parent: Arc<FqgData>, rho: &[CMatrix]) -> Result<Self, FqgError> {
        let n = parent.dim();
        if rho.len() != n {
            return Err(FqgError::Dimension { what: "dual representation", expected: n, found: rho.len() });
        }
        let d = rho[0].nrows();
        let coeffs = CMatrix::from_fn(d * d, n, |pq, i| rho[i][(pq / d, pq % d)]);
        Self::from_coeffs(parent, d, coeffs)
    }

    pub fn parent(&self) -> &Arc<FqgData> {
        &self.parent
    }

    pub fn carrier_dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// The entry `u_pq` as an element of `A`.
    pub fn entry(&self, p: usize, q: usize) -> CVector {
        self.coeffs.row(p * self.d + q).transpose()
    }

    /// `U` as a `d×d` matrix of `x`-coefficients, `U = Σ_x U^x ⊗ e_x`.
    pub fn coefficient_matrix(&self, x: usize) -> CMatrix {
        let d = self.d;
        CMatrix::from_fn(d, d, |p, q| self.coeffs[(p * d + q, x)])
    }

    /// `(id⊗L)U` on `ℂ^d⊗L²`.
    pub fn operator(&self) -> CMatrix {
        let g = self.parent.gns();
        let n = self.parent.dim();
        let mut out = CMatrix::zeros(self.d * n, self.d * n);
        for x in 0..n {
            out += crate::linalg::kron(&self.coefficient_matrix(x), g.left_basis(x));
        }
        out
    }

    /// The representation `f ↦ (id⊗f)U` of the dual, on the dual basis.
    pub fn dual_rep(&self) -> Vec<CMatrix> {
        (0..self.parent.dim()).map(|x| self.coefficient_matrix(x)).collect()
    }

    /// Slice `(ω⊗id)U = Σ ω_pq u_pq`.
    pub fn slice(&self, omega: &CMatrix) -> CVector {
        let d = self.d;
        let mut out = CVector::zeros(self.parent.dim());
        for p in 0..d {
            for q in 0..d {
                if omega[(p, q)] != C64::new(0.0, 0.0) {
                    out += self.entry(p, q) * omega[(p, q)];
                }
            }
        }
        out
    }

    /// The sub-corep on the diagonal block `[start, start + size)`.
    pub fn block(&self, start: usize, size: usize) -> Corep {
        let n = self.parent.dim();
        let coeffs = CMatrix::from_fn(size * size, n, |pq, x| {
            self.coeffs[((start + pq / size) * self.d + start + pq % size, x)]
        });
        Corep { parent: self.parent.clone(), d: size, coeffs, blocks: vec![size] }
    }

    /// `max ‖Δ(u_pq) − Σ_r u_pr⊗u_rq‖`.
    pub fn comultiplicativity_residual(&self) -> f64 {
        let a = &self.parent;
        let n = a.dim();
        let d = self.d;
        let entries: Vec<CVector> = (0..d * d).map(|pq| self.coeffs.row(pq).transpose()).collect();
        let mut worst: f64 = 0.0;
        for p in 0..d {
            for q in 0..d {
                let lhs = a.coproduct_of(&entries[p * d + q]);
                let mut rhs = vec![C64::new(0.0, 0.0); n * n];
                for r in 0..d {
                    let (x, y) = (&entries[p * d + r], &entries[r * d + q]);
                    for (j, &xj) in x.iter().enumerate() {
                        if xj == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for (k, &yk) in y.iter().enumerate() {
                            rhs[j * n + k] += xj * yk;
                        }
                    }
                }
                let diff = lhs.iter().zip(&rhs).fold(0.0f64, |acc, (u, v)| acc.max((u - v).norm()));
                worst = worst.max(diff);
            }
        }
        worst
    }

    /// `max(‖U*U − 1‖, ‖UU* − 1‖)` computed in `M_d⊗A`.
    pub fn unitarity_residual(&self) -> f64 {
        let a = &self.parent;
        let d = self.d;
        let entries: Vec<CVector> = (0..d * d).map(|pq| self.coeffs.row(pq).transpose()).collect();
        let stars: Vec<CVector> = entries.iter().map(|x| a.star(x)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut left = CVector::zeros(a.dim());
                let mut right = CVector::zeros(a.dim());
                for k in 0..d {
                    left += a.mul(&stars[k * d + i], &entries[k * d + j]);
                    right += a.mul(&entries[i * d + k], &stars[j * d + k]);
                }
                let target = if i == j { a.unit().clone() } else { CVector::zeros(a.dim()) };
                worst = worst
                    .max(max_abs_slice((left - &target).as_slice()))
                    .max(max_abs_slice((right - &target).as_slice()));
            }
        }
        worst
    }

    /// Conjugate the carrier: `(t⊗1)U(t*⊗1)` for a unitary `t`.
    pub fn conjugated(&self, t: &CMatrix) -> Corep {
        let rho: Vec<CMatrix> = self.dual_rep().iter().map(|m| t * m * t.adjoint()).collect();
        let mut c = Corep::from_dual_rep(self.parent.clone(), &rho).expect("shapes preserved");
        c.blocks = vec![self.d];
        c
    }
}

/// `W` read as a corepresentation on `L²`.
pub fn regular_corep(a: &Arc<FqgData>) -> Corep {
    let g = a.gns();
    Corep::from_dual_rep(a.clone(), g.lambda_all()).expect("n operators")
}

/// The one-dimensional corep `1`.
pub fn trivial_corep(a: &Arc<FqgData>) -> Corep {
    let coeffs = CMatrix::from_fn(1, a.dim(), |_, x| a.unit()[x]);
    Corep::from_coeffs(a.clone(), 1, coeffs).expect("shape")
}

/// Block-diagonal sum `u ⊕ v`.
pub fn direct_sum(u: &Corep, v: &Corep) -> Result<Corep, FqgError> {
    if !same_parent(&u.parent, &v.parent) {
        return Err(FqgError::ParentMismatch);
    }
    let n = u.parent.dim();
    let d = u.d + v.d;
    let mut coeffs = CMatrix::zeros(d * d, n);
    for p in 0..u.d {
        for q in 0..u.d {
            coeffs.set_row(p * d + q, &u.coeffs.row(p * u.d + q));
        }
    }
    for p in 0..v.d {
        for q in 0..v.d {
            coeffs.set_row((u.d + p) * d + u.d + q, &v.coeffs.row(p * v.d + q));
        }
    }
    let mut blocks = u.blocks.clone();
    blocks.extend_from_slice(&v.blocks);
    Ok(Corep { parent: u.parent.clone(), d, coeffs, blocks })
}

/// How to compute intertwiner spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntertwinerMethod {
    /// Joint nullspace of `t ↦ tU^x − V^x t` over all coefficients `x`.
    Nullspace,
    /// Range of the averaging projection `t ↦ (id⊗h)(v(t⊗1)u*)`.
    Haar,
    /// Nullspace for small problems, Haar otherwise.
    Auto,
}

const NULLSPACE_WORK_LIMIT: f64 = 5e8;

/// `Hom(u, v) = {t : (t⊗1)u = v(t⊗1)}` as `d_v×d_u` matrices.
pub fn intertwiners(u: &Corep, v: &Corep) -> Result<SubspaceBasis, FqgError> {
    intertwiners_with(u, v, IntertwinerMethod::Auto)
}

pub fn intertwiners_with(u: &Corep, v: &Corep, method: IntertwinerMethod) -> Result<SubspaceBasis, FqgError> {
    if !same_parent(&u.parent, &v.parent) {
        return Err(FqgError::ParentMismatch);
    }
    if u.blocks.len() > 1 || v.blocks.len() > 1 {
        return Ok(blockwise(u, v, method));
    }
    Ok(single(u, v, method))
}

fn block_starts(blocks: &[usize]) -> Vec<usize> {
    blocks
        .iter()
        .scan(0, |acc, &b| {
            let s = *acc;
            *acc += b;
            Some(s)
        })
        .collect()
}

fn blockwise(u: &Corep, v: &Corep, method: IntertwinerMethod) -> SubspaceBasis {
    let (du, dv) = (u.d, v.d);
    let mut vectors = Vec::new();
    let us = block_starts(&u.blocks);
    let vs = block_starts(&v.blocks);
    for (&su, &bu) in us.iter().zip(&u.blocks) {
        for (&sv, &bv) in vs.iter().zip(&v.blocks) {
            let part = single(&u.block(su, bu), &v.block(sv, bv), method);
            for t in part.as_matrices() {
                let mut full = CMatrix::zeros(dv, du);
                full.view_mut((sv, su), (bv, bu)).copy_from(&t);
                vectors.push(crate::linalg::flatten(&full));
            }
        }
    }
    // Blocks of different pairs are orthogonal, so the union is orthonormal.
    let mut m = CMatrix::zeros(dv * du, vectors.len());
    for (k, x) in vectors.iter().enumerate() {
        m.set_column(k, x);
    }
    SubspaceBasis::from_orthonormal(m).with_shape(dv, du)
}

fn single(u: &Corep, v: &Corep, method: IntertwinerMethod) -> SubspaceBasis {
    let n = u.parent.dim();
    let (du, dv) = (u.d, v.d);
    let method = match method {
        IntertwinerMethod::Auto => {
            let m = (du * dv) as f64;
            if n as f64 * m * m * m <= NULLSPACE_WORK_LIMIT {
                IntertwinerMethod::Nullspace
            } else {
                IntertwinerMethod::Haar
            }
        }
        m => m,
    };
    match method {
        IntertwinerMethod::Haar => by_haar(u, v),
        _ => by_nullspace(u, v),
    }
    .with_shape(dv, du)
}

fn by_nullspace(u: &Corep, v: &Corep) -> SubspaceBasis {
    let n = u.parent.dim();
    let (du, dv) = (u.d, v.d);
    let m = dv * du;
    let mut rows: Vec<CMatrix> = Vec::new();
    for x in 0..n {
        let ux = u.coefficient_matrix(x);
        let vx = v.coefficient_matrix(x);
        if ux.iter().chain(vx.iter()).all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        // (tU^x − V^x t)_{ij} = Σ_k t_ik U^x_kj − V^x_ik t_kj.
        let mut block = CMatrix::zeros(m, m);
        for i in 0..dv {
            for j in 0..du {
                let row = i * du + j;
                for k in 0..du {
                    block[(row, i * du + k)] += ux[(k, j)];
                }
                for k in 0..dv {
                    block[(row, k * du + j)] -= vx[(i, k)];
                }
            }
        }
        rows.push(block);
    }
    let mut stacked = CMatrix::zeros(rows.len() * m, m);
    for (b, block) in rows.iter().enumerate() {
        stacked.rows_mut(b * m, m).copy_from(block);
    }
    nullspace(&stacked)
}

fn by_haar(u: &Corep, v: &Corep) -> SubspaceBasis {
    let a = &u.parent;
    let n = a.dim();
    let (du, dv) = (u.d, v.d);
    // K[i][j] = h(e_i e_j*) and Gm[(a,c),(b,d)] = h(v_ac u_bd*).
    let k = a.haar_pairing() * a.star_matrix().transpose();
    let gm = crate::linalg::matmul(&crate::linalg::matmul(&v.coeffs, &k), &u.coeffs.adjoint());
    let m = dv * du;
    let mut e = CMatrix::zeros(m, m);
    for p in 0..dv {
        for q in 0..du {
            for r in 0..dv {
                for s in 0..du {
                    e[(p * du + q, r * du + s)] = gm[(p * dv + r, q * du + s)];
                }
            }
        }
    }
    let rank = e.trace().re.round().max(0.0) as usize;
    if rank == 0 {
        return SubspaceBasis::zero(m);
    }
    let mut rng = crate::linalg::seeded_rng(0x1_7e2 ^ (n as u64) << 8);
    let sample = crate::linalg::matmul(&e, &gaussian_matrix(&mut rng, m, (rank + 5).min(m)));
    let svd = sample.svd(true, false);
    let uu = svd.u.expect("left vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let mut basis = CMatrix::zeros(m, rank);
    for (c, &ix) in order.iter().take(rank).enumerate() {
        basis.set_column(c, &uu.column(ix));
    }
    SubspaceBasis::from_orthonormal(basis)
}

/// `‖S((ω⊗id)u) − (ω⊗id)(u*)‖` for a functional `ω` on `M_d` given by its
/// values on matrix units.
pub fn antipode_slice_check(u: &Corep, omega: &CMatrix) -> f64 {
    let a = &u.parent;
    let d = u.d;
    let lhs = a.antipode(&u.slice(omega));
    let mut rhs = CVector::zeros(a.dim());
    for p in 0..d {
        for q in 0..d {
            if omega[(p, q)] != C64::new(0.0, 0.0) {
                rhs += a.star(&u.entry(q, p)) * omega[(p, q)];
            }
        }
    }
    max_abs_slice((lhs - rhs).as_slice())
}

/// A random *-representation of `A` of dimension at most `max_dim`, given
/// by the images of the basis. Built from irreducible subspaces of `L²`
/// cut out by right multiplication with a random self-adjoint element, then
/// conjugated by a random unitary.
pub fn random_representation<R: Rng + ?Sized>(a: &FqgData, max_dim: usize, rng: &mut R) -> Vec<CMatrix> {
    let n = a.dim();
    let g = a.gns();
    let b = gaussian_matrix(rng, n, 1).column(0).into_owned();
    let b = (&b + a.star(&b)) * C64::new(0.5, 0.0);
    let rb = g.to_onb(&a.right_mult_alg(&b));
    let rb = (&rb + rb.adjoint()) * C64::new(0.5, 0.0);
    let spaces = hermitian_eigenspaces(&rb, 1e-6 * crate::linalg::max_abs(&rb).max(1.0));
    let fitting: Vec<&CMatrix> = spaces.iter().map(|(_, v)| v).filter(|v| v.ncols() <= max_dim.max(1)).collect();
    let mut chosen: Vec<&CMatrix> = Vec::new();
    let mut total = 0;
    for v in &fitting {
        if total + v.ncols() <= max_dim && rng.random_bool(0.5) {
            total += v.ncols();
            chosen.push(v);
        }
    }
    if chosen.is_empty() {
        let smallest = fitting.iter().min_by_key(|v| v.ncols()).copied().or_else(|| {
            spaces.iter().map(|(_, v)| v).min_by_key(|v| v.ncols())
        });
        chosen.push(smallest.expect("L² is nonzero"));
    }
    let mut span = SpanBuilder::new(n);
    for v in &chosen {
        for c in 0..v.ncols() {
            span.push(&v.column(c).into_owned());
        }
    }
    let q = span.finish().matrix().clone();
    let t = random_unitary(rng, q.ncols());
    (0..n).map(|i| &t * q.adjoint() * g.left_basis(i) * &q * t.adjoint()).collect()
}

/// A random corepresentation of carrier dimension at most `max_dim`, built
/// from a random representation of the dual.
pub fn random_corep<R: Rng + ?Sized>(a: &Arc<FqgData>, max_dim: usize, rng: &mut R) -> Corep {
    let rho = random_representation(&a.dual(), max_dim, rng);
    Corep::from_dual_rep(a.clone(), &rho).expect("n operators")
}
