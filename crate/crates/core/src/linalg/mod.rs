//! Dense complex linear algebra with tensor-leg bookkeeping.
//!
//! Everything here works on `nalgebra` matrices of `Complex64`. Rank and
//! zero decisions go through [`tolerance`], a single process-wide threshold
//! (default `1e-9`) that the command-line front end may override.

mod legs;
mod subspace;

pub use legs::{apply_on_legs, flip, place_on_legs, LegOp, LegSpace};
pub use subspace::{
    algebra_closure, commutant, star_commutant, generated_unital_star_algebra, nullspace, SpanBuilder,
    SubspaceBasis,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::atomic::{AtomicU64, Ordering};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default threshold for rank and zero decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3e11_2e0b_e826_d695); // 1e-9

/// Current global tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Override the global tolerance. Intended to be called once at start-up.
pub fn set_tolerance(tol: f64) {
    assert!(tol > 0.0 && tol.is_finite(), "tolerance must be positive");
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("leg index {leg} out of range for a space with {legs} legs")]
    LegOutOfRange { leg: usize, legs: usize },
    #[error("leg {0} listed twice")]
    RepeatedLeg(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generators must be square matrices of side {0}")]
    ShapeMismatch(usize),
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Kronecker product, `(a⊗b)[(i,k),(j,l)] = a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Matrix product. Large products are split into four real products, which
/// go through the blocked `f64` kernel and are roughly ten times faster than
/// the generic complex path.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    let work = a.nrows() * a.ncols() * b.ncols();
    if work < 48 * 48 * 48 {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    CMatrix::from_fn(re.nrows(), re.ncols(), |i, j| c(re[(i, j)], im[(i, j)]))
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_slice(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `max(‖u†u − 1‖, ‖uu† − 1‖)` in the entrywise max norm, evaluated on
/// [`probes`] so that large operators avoid two dense products.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    if u.ncols() != n {
        return f64::INFINITY;
    }
    let p = probes(n, 0x0417);
    let ua = u.adjoint();
    let a = matmul(&ua, &matmul(u, &p));
    let b = matmul(u, &matmul(&ua, &p));
    max_diff(&a, &p).max(max_diff(&b, &p))
}

/// Entrywise standard complex Gaussian matrix.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-ish random unitary: QR of a Gaussian matrix with the phases of `R`
/// divided out.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cr(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * cr(0.5)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank at the global tolerance, relative to `max(1, σ_max)`.
pub fn rank(m: &CMatrix) -> usize {
    let s = singular_values(m);
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > tolerance() * scale).count()
}

/// Flatten a matrix row-major into a column vector.
pub fn flatten(m: &CMatrix) -> CVector {
    let (r, cc) = m.shape();
    CVector::from_fn(r * cc, |k, _| m[(k / cc, k % cc)])
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &[C64], rows: usize, cols: usize) -> CMatrix {
    assert_eq!(v.len(), rows * cols);
    CMatrix::from_row_slice(rows, cols, v)
}

/// Block-diagonal sum of square matrices.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

/// Group the eigenvalues of a Hermitian matrix into clusters and return the
/// orthonormal eigenvectors of each cluster, in ascending eigenvalue order.
pub fn hermitian_eigenspaces(h: &CMatrix, gap: f64) -> Vec<(f64, CMatrix)> {
    let n = h.nrows();
    if n == 0 {
        return Vec::new();
    }
    let sym = (h + h.adjoint()) * cr(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for &k in &order {
        let val = eig.eigenvalues[k];
        match clusters.last_mut() {
            Some((last, members)) if (val - *last).abs() <= gap => {
                members.push(k);
                *last = val;
            }
            _ => clusters.push((val, vec![k])),
        }
    }
    clusters
        .into_iter()
        .map(|(_, members)| {
            let mean = members.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / members.len() as f64;
            let mut v = CMatrix::zeros(n, members.len());
            for (col, &k) in members.iter().enumerate() {
                v.set_column(col, &eig.eigenvectors.column(k));
            }
            (mean, v)
        })
        .collect()
}

/// Largest total dimension for which identities are checked on the full
/// standard basis rather than on random probe vectors.
pub const DENSE_PROBE_LIMIT: usize = 512;

/// Test vectors for operator identities on a space of dimension `dim`: the
/// standard basis when that is small, otherwise a few seeded random unit
/// vectors. An identity between operators that holds on the probes holds
/// everywhere with probability one in the random case.
pub fn probes(dim: usize, seed: u64) -> CMatrix {
    if dim <= DENSE_PROBE_LIMIT {
        return CMatrix::identity(dim, dim);
    }
    let mut rng = seeded_rng(seed);
    let mut p = gaussian_matrix(&mut rng, dim, 6);
    for mut col in p.column_iter_mut() {
        let norm = col.norm();
        col /= cr(norm);
    }
    p
}

/// Seeded generator used everywhere randomness is needed.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_default_bits() {
        assert_eq!(f64::from_bits(0x3e11_2e0b_e826_d695), 1e-9);
    }

    #[test]
    fn split_matmul_matches_generic() {
        let mut rng = seeded_rng(1);
        let a = gaussian_matrix(&mut rng, 70, 60);
        let b = gaussian_matrix(&mut rng, 60, 50);
        assert!(max_diff(&matmul(&a, &b), &(&a * &b)) < 1e-11);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(2);
        let u = random_unitary(&mut rng, 7);
        assert!(unitarity_residual(&u) < 1e-12);
    }

    #[test]
    fn eigenspaces_cluster_degenerate_values() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(3.0), cr(1.0), cr(2.0)]));
        let spaces = hermitian_eigenspaces(&h, 1e-8);
        let dims: Vec<usize> = spaces.iter().map(|(_, v)| v.ncols()).collect();
        assert_eq!(dims, vec![2, 1, 1]);
    }

    #[test]
    fn rank_of_outer_product() {
        let v = CMatrix::from_fn(4, 1, |i, _| cr(i as f64 + 1.0));
        assert_eq!(rank(&(&v * v.adjoint())), 1);
    }
}
