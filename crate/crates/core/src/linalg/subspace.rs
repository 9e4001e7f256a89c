//! Subspaces, kernels, commutants and generated algebras.

use super::{
    flatten, gaussian_matrix, hermitian_eigenspaces, kron, max_abs, seeded_rng, singular_values, tolerance,
    unflatten, CMatrix, CVector, LinalgError, C64,
};

/// An orthonormal basis of a subspace of `ℂ^ambient`, stored as the columns
/// of a matrix. When the ambient space is a matrix space the row-major shape
/// is recorded so that basis vectors can be read back as matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient: usize,
    shape: Option<(usize, usize)>,
    basis: CMatrix,
}

impl SubspaceBasis {
    /// Wrap a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        Self { ambient: basis.nrows(), shape: None, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, shape: None, basis: CMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, shape: None, basis: CMatrix::identity(ambient, ambient) }
    }

    /// Orthonormalize the given vectors in order, dropping dependent ones.
    pub fn span_of<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a CVector>) -> Self {
        let mut b = SpanBuilder::new(ambient);
        for v in vectors {
            b.push(v);
        }
        b.finish()
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &CMatrix) -> Self {
        let mut b = SpanBuilder::new(m.nrows());
        for j in 0..m.ncols() {
            b.push(&m.column(j).into_owned());
        }
        b.finish()
    }

    /// Span of flattened matrices of a common shape.
    pub fn span_of_matrices(rows: usize, cols: usize, mats: &[CMatrix]) -> Self {
        let flat: Vec<CVector> = mats.iter().map(flatten).collect();
        Self::span_of(rows * cols, flat.iter()).with_shape(rows, cols)
    }

    pub fn with_shape(mut self, rows: usize, cols: usize) -> Self {
        assert_eq!(rows * cols, self.ambient, "shape does not match ambient dimension");
        self.shape = Some((rows, cols));
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    /// Columns form an orthonormal basis; this holds for every constructor.
    pub fn is_orthonormal(&self) -> bool {
        let g = self.basis.adjoint() * &self.basis;
        let id = CMatrix::identity(self.dim(), self.dim());
        self.dim() == 0 || super::max_diff(&g, &id) <= tolerance().max(1e-12) * 10.0
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.basis
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.basis.column(k).into_owned()
    }

    pub fn vectors(&self) -> Vec<CVector> {
        (0..self.dim()).map(|k| self.vector(k)).collect()
    }

    /// Basis vectors read back as matrices of the recorded shape.
    pub fn as_matrices(&self) -> Vec<CMatrix> {
        let (r, c) = self.shape.expect("subspace has no matrix shape");
        (0..self.dim())
            .map(|k| unflatten(self.basis.column(k).as_slice(), r, c))
            .collect()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn contains(&self, v: &CVector) -> bool {
        self.distance(v) <= tolerance() * v.norm().max(1.0) * 10.0
    }

    pub fn contains_matrix(&self, m: &CMatrix) -> bool {
        self.contains(&flatten(m))
    }

    /// Largest distance from a basis vector of `other` to `self`.
    pub fn containment_defect(&self, other: &SubspaceBasis) -> f64 {
        assert_eq!(self.ambient, other.ambient);
        if other.dim() == 0 {
            return 0.0;
        }
        let resid = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        max_abs(&resid)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        self.containment_defect(other) <= tolerance() * 10.0
    }

    pub fn same_span(&self, other: &SubspaceBasis) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other) && other.contains_subspace(self)
    }

    /// Intersection of two subspaces, via the kernel of `[Q₁, −Q₂]`.
    pub fn intersection(&self, other: &SubspaceBasis) -> SubspaceBasis {
        assert_eq!(self.ambient, other.ambient);
        let (k1, k2) = (self.dim(), other.dim());
        if k1 == 0 || k2 == 0 {
            return Self { ambient: self.ambient, shape: self.shape, basis: CMatrix::zeros(self.ambient, 0) };
        }
        let mut stacked = CMatrix::zeros(self.ambient, k1 + k2);
        stacked.columns_mut(0, k1).copy_from(&self.basis);
        stacked.columns_mut(k1, k2).copy_from(&(-&other.basis));
        let kernel = nullspace(&stacked);
        let coeffs = kernel.basis.rows(0, k1).into_owned();
        let mut out = Self::column_span(&(&self.basis * coeffs));
        out.shape = self.shape;
        out
    }

    /// Smallest subspace containing both.
    pub fn join(&self, other: &SubspaceBasis) -> SubspaceBasis {
        assert_eq!(self.ambient, other.ambient);
        let mut b = SpanBuilder::new(self.ambient);
        for k in 0..self.dim() {
            b.push(&self.vector(k));
        }
        for k in 0..other.dim() {
            b.push(&other.vector(k));
        }
        let mut out = b.finish();
        out.shape = self.shape;
        out
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &CMatrix) -> SubspaceBasis {
        Self::column_span(&(m * &self.basis))
    }
}

/// Incremental Gram-Schmidt with one reorthogonalization pass.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    ambient: usize,
    cols: Vec<CVector>,
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> Self {
        Self { ambient, cols: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Residual of `v` after removing its component in the current span.
    fn residual(&self, v: &CVector) -> CVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.cols {
                let coef = q.dotc(&r);
                r.axpy(-coef, q, C64::new(1.0, 0.0));
            }
        }
        r
    }

    /// Add `v` if it is independent of the current span. Returns the new
    /// orthonormal vector when one was added.
    pub fn push(&mut self, v: &CVector) -> Option<CVector> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        if self.cols.len() == self.ambient {
            return None;
        }
        let r = self.residual(v);
        let norm = r.norm();
        if norm <= tolerance() * v.norm().max(1.0) {
            return None;
        }
        let q = r / C64::new(norm, 0.0);
        self.cols.push(q.clone());
        Some(q)
    }

    pub fn finish(self) -> SubspaceBasis {
        let mut basis = CMatrix::zeros(self.ambient, self.cols.len());
        for (j, q) in self.cols.iter().enumerate() {
            basis.set_column(j, q);
        }
        SubspaceBasis { ambient: self.ambient, shape: None, basis }
    }
}

/// Kernel of a matrix at the global tolerance: singular values at most
/// `tolerance · max(1, σ_max)` count as zero.
pub fn nullspace(m: &CMatrix) -> SubspaceBasis {
    let cols = m.ncols();
    if cols == 0 {
        return SubspaceBasis::zero(0);
    }
    // Tall systems are first reduced to their square R factor, which has
    // the same kernel; wide ones are padded with zero rows so that the SVD
    // produces a full set of right singular vectors.
    let square = if m.nrows() > cols {
        m.clone().qr().r()
    } else if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = tolerance() * smax.max(1.0);
    let mut null: Vec<CVector> = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            null.push(v_t.row(k).adjoint());
        }
    }
    SubspaceBasis::span_of(cols, null.iter())
}

/// `{T : Tg = gT for every g}` as a subspace of flattened `n×n` matrices.
pub fn commutant(gens: &[CMatrix], n: usize) -> Result<SubspaceBasis, LinalgError> {
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(LinalgError::ShapeMismatch(n));
        }
    }
    if gens.is_empty() {
        return Ok(SubspaceBasis::full(n * n).with_shape(n, n));
    }
    let id = CMatrix::identity(n, n);
    let nn = n * n;
    let mut stacked = CMatrix::zeros(nn * gens.len(), nn);
    for (k, g) in gens.iter().enumerate() {
        // Row-major vec(Tg − gT) = (1⊗gᵀ − g⊗1) vec(T).
        let block = kron(&id, &g.transpose()) - kron(g, &id);
        stacked.rows_mut(k * nn, nn).copy_from(&block);
    }
    Ok(nullspace(&stacked).with_shape(n, n))
}

/// Commutant of the *-algebra generated by `gens`. A generic Hermitian
/// element `h` of that algebra is diagonalised first; every element of the
/// commutant is block diagonal in the eigenspaces of `h`, so the remaining
/// linear conditions are solved on that much smaller space.
pub fn star_commutant(gens: &[CMatrix], n: usize) -> Result<SubspaceBasis, LinalgError> {
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(LinalgError::ShapeMismatch(n));
        }
    }
    if gens.is_empty() {
        return Ok(SubspaceBasis::full(n * n).with_shape(n, n));
    }
    let mut rng = seeded_rng(0xc0c0);
    let coeffs = gaussian_matrix(&mut rng, gens.len(), 1);
    let mut h = CMatrix::zeros(n, n);
    for (k, g) in gens.iter().enumerate() {
        let cpl = coeffs[(k, 0)];
        h += g * cpl + g.adjoint() * cpl.conj();
    }
    let scale = max_abs(&h).max(1.0);
    let blocks = hermitian_eigenspaces(&h, 1e-7 * scale);
    // Work in the eigenbasis: candidates are the units E_ab with a, b in
    // the same eigenspace, and [E_ab, g] only touches row a and column b.
    let mut basis = CMatrix::zeros(n, n);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0;
    for (_, v) in &blocks {
        let m = v.ncols();
        basis.view_mut((0, offset), (n, m)).copy_from(v);
        for a in offset..offset + m {
            for b in offset..offset + m {
                pairs.push((a, b));
            }
        }
        offset += m;
    }
    let k = pairs.len();
    let nn = n * n;
    let mut reduced = CMatrix::zeros(0, k);
    for g in gens {
        let gp = basis.adjoint() * g * &basis;
        for op in [gp.clone(), gp.adjoint()] {
            let mut block = CMatrix::zeros(nn, k);
            for (col, &(a, b)) in pairs.iter().enumerate() {
                // (E_ab g − g E_ab)[r, c] = δ_ra g[b, c] − g[r, a] δ_cb.
                for c in 0..n {
                    block[(a * n + c, col)] += op[(b, c)];
                }
                for r in 0..n {
                    block[(r * n + b, col)] -= op[(r, a)];
                }
            }
            let mut stacked = CMatrix::zeros(reduced.nrows() + nn, k);
            stacked.rows_mut(0, reduced.nrows()).copy_from(&reduced);
            stacked.rows_mut(reduced.nrows(), nn).copy_from(&block);
            reduced = if stacked.nrows() > k { stacked.qr().r() } else { stacked };
        }
    }
    let kernel = nullspace(&reduced);
    let vectors: Vec<CVector> = kernel
        .vectors()
        .iter()
        .map(|x| {
            let mut t = CMatrix::zeros(n, n);
            for (coef, &(a, b)) in x.iter().zip(&pairs) {
                t[(a, b)] += *coef;
            }
            flatten(&(&basis * t * basis.adjoint()))
        })
        .collect();
    Ok(SubspaceBasis::span_of(nn, vectors.iter()).with_shape(n, n))
}

/// Closure of `seeds` under the linear maps produced by `step`: every new
/// basis vector `q` contributes `step(q)` to the search. The result is the
/// smallest subspace containing the seeds that is invariant under those maps.
pub fn algebra_closure<F>(ambient: usize, seeds: &[CVector], mut step: F) -> SubspaceBasis
where
    F: FnMut(&CVector) -> Vec<CVector>,
{
    let mut builder = SpanBuilder::new(ambient);
    let mut queue: std::collections::VecDeque<CVector> = std::collections::VecDeque::new();
    for s in seeds {
        if let Some(q) = builder.push(s) {
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        if builder.dim() == ambient {
            break;
        }
        for w in step(&q) {
            if let Some(nq) = builder.push(&w) {
                queue.push_back(nq);
            }
        }
    }
    builder.finish()
}

/// The unital *-algebra generated by square matrices of a common side, as a
/// subspace of flattened matrices.
pub fn generated_unital_star_algebra(gens: &[CMatrix], n: usize) -> Result<SubspaceBasis, LinalgError> {
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(LinalgError::ShapeMismatch(n));
        }
    }
    let mut all: Vec<CMatrix> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        all.push(g.clone());
        all.push(g.adjoint());
    }
    let seeds = [flatten(&CMatrix::identity(n, n))];
    let basis = algebra_closure(n * n, &seeds, |q| {
        let qm = unflatten(q.as_slice(), n, n);
        all.iter().map(|g| flatten(&super::matmul(g, &qm))).collect()
    });
    Ok(basis.with_shape(n, n))
}

/// Singular values of the coefficient map from a basis to `ℂ^ambient`.
#[allow(dead_code)]
pub(crate) fn conditioning(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(a), Some(b)) if *b > 0.0 => a / b,
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr, gaussian_matrix, random_hermitian, seeded_rng};

    #[test]
    fn nullspace_trivial_cases() {
        assert_eq!(nullspace(&CMatrix::identity(3, 3)).dim(), 0);
        assert_eq!(nullspace(&CMatrix::zeros(3, 3)).dim(), 3);
    }

    #[test]
    fn nullspace_of_all_ones() {
        let m = CMatrix::from_element(2, 2, cr(1.0));
        let k = nullspace(&m);
        assert_eq!(k.dim(), 1);
        let v = k.vector(0);
        let expected = CVector::from_vec(vec![cr(1.0), cr(-1.0)]) / cr(2f64.sqrt());
        // Equal up to a phase.
        let overlap = expected.dotc(&v).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_tall_and_wide() {
        let mut rng = seeded_rng(11);
        let a = gaussian_matrix(&mut rng, 7, 3);
        let b = gaussian_matrix(&mut rng, 3, 5);
        let tall = &a * &b; // 7×5, rank 3
        assert_eq!(nullspace(&tall).dim(), 2);
        assert_eq!(nullspace(&b).dim(), 2);
        for v in nullspace(&tall).vectors() {
            assert!((&tall * v).norm() < 1e-10);
        }
    }

    #[test]
    fn commutant_extremes() {
        assert_eq!(commutant(&[], 3).unwrap().dim(), 9);
        let mut units = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = CMatrix::zeros(3, 3);
                e[(i, j)] = cr(1.0);
                units.push(e);
            }
        }
        assert_eq!(commutant(&units, 3).unwrap().dim(), 1);
    }

    #[test]
    fn commutant_of_cyclic_shift() {
        let mut shift = CMatrix::zeros(3, 3);
        for i in 0..3 {
            shift[((i + 1) % 3, i)] = cr(1.0);
        }
        let comm = commutant(&[shift.clone()], 3).unwrap();
        assert_eq!(comm.dim(), 3);
        // The commutant is the span of the powers of the shift.
        let powers = SubspaceBasis::span_of_matrices(3, 3, &[CMatrix::identity(3, 3), shift.clone(), &shift * &shift]);
        assert!(comm.same_span(&powers));
    }

    #[test]
    fn generated_algebra_cases() {
        assert_eq!(generated_unital_star_algebra(&[CMatrix::identity(3, 3)], 3).unwrap().dim(), 1);
        let w = c(-0.5, 3f64.sqrt() / 2.0);
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), w, w * w]));
        let alg = generated_unital_star_algebra(&[d], 3).unwrap();
        assert_eq!(alg.dim(), 3);
        for m in alg.as_matrices() {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(m[(i, j)].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn star_commutant_matches_commutant() {
        let mut rng = super::super::seeded_rng(5);
        let a = super::super::random_hermitian(&mut rng, 2);
        let b = super::super::random_hermitian(&mut rng, 3);
        let z1 = CMatrix::zeros(2, 3);
        let z2 = CMatrix::zeros(3, 2);
        let mut g = CMatrix::zeros(5, 5);
        g.view_mut((0, 0), (2, 2)).copy_from(&a);
        g.view_mut((2, 2), (3, 3)).copy_from(&b);
        g.view_mut((0, 2), (2, 3)).copy_from(&z1);
        g.view_mut((2, 0), (3, 2)).copy_from(&z2);
        let gens = vec![g.clone(), CMatrix::identity(5, 5)];
        let plain = commutant(&gens, 5).unwrap();
        let fast = star_commutant(&gens, 5).unwrap();
        assert!(plain.same_span(&fast));
        assert_eq!(fast.dim(), 5);
        let amp = kron(&CMatrix::identity(2, 2), &a);
        let fast = star_commutant(std::slice::from_ref(&amp), 4).unwrap();
        assert!(commutant(&[amp], 4).unwrap().same_span(&fast));
        assert_eq!(fast.dim(), 8);
    }

    #[test]
    fn bicommutant_matches_generated_algebra() {
        let mut rng = seeded_rng(12);
        // A generator living in M₂ ⊕ M₁ ⊕ M₁ so the answer is a proper subalgebra.
        let mut g = CMatrix::zeros(4, 4);
        g.view_mut((0, 0), (2, 2)).copy_from(&random_hermitian(&mut rng, 2));
        g[(2, 2)] = cr(0.3);
        g[(3, 3)] = cr(-1.1);
        let h = {
            let mut h = CMatrix::zeros(4, 4);
            h.view_mut((0, 0), (2, 2)).copy_from(&gaussian_matrix(&mut rng, 2, 2));
            h
        };
        let alg = generated_unital_star_algebra(&[g.clone(), h.clone()], 4).unwrap();
        let gens = vec![g.clone(), g.adjoint(), h.clone(), h.adjoint()];
        let comm = commutant(&gens, 4).unwrap();
        let bicomm = commutant(&comm.as_matrices(), 4).unwrap();
        assert!(alg.same_span(&bicomm));
        assert_eq!(alg.dim(), 6);
    }

    #[test]
    fn intersection_and_join() {
        let e = |k: usize| {
            let mut v = CVector::zeros(4);
            v[k] = cr(1.0);
            v
        };
        let a = SubspaceBasis::span_of(4, [e(0), e(1), e(2)].iter());
        let b = SubspaceBasis::span_of(4, [e(1) + e(3), e(2)].iter());
        assert_eq!(a.intersection(&b).dim(), 1);
        assert!(a.intersection(&b).contains(&e(2)));
        assert_eq!(a.join(&b).dim(), 4);
    }
}
