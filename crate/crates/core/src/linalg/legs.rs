//! Operators on tensor products of finite-dimensional Hilbert spaces.
//!
//! Legs are numbered from 1, so `place_on_legs(t, &[1, 3], space)` is the
//! operator usually written `T₁₃`. Basis vectors are ordered row-major with
//! leg 1 most significant, which matches [`kron`](super::kron).

use super::{matmul, CMatrix, LinalgError, C64};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LegSpace {
    dims: Vec<usize>,
}

impl LegSpace {
    pub fn new(dims: &[usize]) -> Result<Self, LinalgError> {
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(LinalgError::DimensionMismatch { expected: 1, found: dims[pos] });
        }
        Ok(Self { dims: dims.to_vec() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_legs(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Stride of each leg in the flattened index.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for l in (0..self.dims.len().saturating_sub(1)).rev() {
            s[l] = s[l + 1] * self.dims[l + 1];
        }
        s
    }

    /// The space with legs `i` and `j` (1-based) exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Result<Self, LinalgError> {
        self.check_leg(i)?;
        self.check_leg(j)?;
        let mut dims = self.dims.clone();
        dims.swap(i - 1, j - 1);
        Ok(Self { dims })
    }

    fn check_leg(&self, leg: usize) -> Result<(), LinalgError> {
        if leg == 0 || leg > self.dims.len() {
            Err(LinalgError::LegOutOfRange { leg, legs: self.dims.len() })
        } else {
            Ok(())
        }
    }
}

/// Offsets of the named legs (in listed order) and of the remaining legs
/// (in natural order) inside the flattened index.
struct LegSplit {
    target: Vec<usize>,
    rest: Vec<usize>,
}

impl LegSplit {
    fn new(legs: &[usize], space: &LegSpace) -> Result<Self, LinalgError> {
        let mut seen = vec![false; space.num_legs()];
        for &l in legs {
            space.check_leg(l)?;
            if seen[l - 1] {
                return Err(LinalgError::RepeatedLeg(l));
            }
            seen[l - 1] = true;
        }
        let strides = space.strides();
        let offsets = |ls: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &l in ls {
                let d = space.dims[l - 1];
                let st = strides[l - 1];
                out = out
                    .iter()
                    .flat_map(|&o| (0..d).map(move |x| o + x * st))
                    .collect();
            }
            out
        };
        let rest_legs: Vec<usize> = (1..=space.num_legs()).filter(|l| !seen[l - 1]).collect();
        Ok(Self { target: offsets(legs), rest: offsets(&rest_legs) })
    }
}

/// A square operator on a [`LegSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct LegOp {
    space: LegSpace,
    matrix: CMatrix,
}

impl LegOp {
    pub fn new(space: LegSpace, matrix: CMatrix) -> Result<Self, LinalgError> {
        let n = space.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: matrix.nrows() });
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: LegSpace) -> Self {
        let n = space.total();
        Self { space, matrix: CMatrix::identity(n, n) }
    }

    pub fn space(&self) -> &LegSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    /// Operator product `self · other`; both must live on the same space.
    pub fn compose(&self, other: &LegOp) -> Result<Self, LinalgError> {
        if self.space != other.space {
            return Err(LinalgError::DimensionMismatch {
                expected: self.space.total(),
                found: other.space.total(),
            });
        }
        Ok(Self { space: self.space.clone(), matrix: matmul(&self.matrix, &other.matrix) })
    }
}

/// `op` acting on the listed legs (in that order) and as the identity on the
/// others.
pub fn place_on_legs(op: &CMatrix, legs: &[usize], space: &LegSpace) -> Result<LegOp, LinalgError> {
    let split = LegSplit::new(legs, space)?;
    let dt = split.target.len();
    if op.nrows() != dt || op.ncols() != dt {
        return Err(LinalgError::DimensionMismatch { expected: dt, found: op.nrows() });
    }
    let n = space.total();
    let mut m = CMatrix::zeros(n, n);
    for &r in &split.rest {
        for (i, &ti) in split.target.iter().enumerate() {
            for (j, &tj) in split.target.iter().enumerate() {
                let z = op[(i, j)];
                if z != C64::new(0.0, 0.0) {
                    m[(r + ti, r + tj)] = z;
                }
            }
        }
    }
    LegOp::new(space.clone(), m)
}

/// The permutation unitary exchanging legs `i` and `j`. When the two legs
/// have different dimensions the result maps `space` onto
/// `space.swapped(i, j)`; the returned operator records the domain.
pub fn flip(space: &LegSpace, i: usize, j: usize) -> Result<LegOp, LinalgError> {
    let target = space.swapped(i, j)?;
    let n = space.total();
    let src_strides = space.strides();
    let dst_strides = target.strides();
    let mut m = CMatrix::zeros(n, n);
    let legs = space.num_legs();
    let mut idx = vec![0usize; legs];
    for src in 0..n {
        let mut rem = src;
        for l in 0..legs {
            idx[l] = rem / src_strides[l];
            rem %= src_strides[l];
        }
        idx.swap(i - 1, j - 1);
        let dst: usize = idx.iter().zip(&dst_strides).map(|(x, s)| x * s).sum();
        m[(dst, src)] = C64::new(1.0, 0.0);
    }
    Ok(LegOp { space: space.clone(), matrix: m })
}

/// Apply `op` on the listed legs to every column of `vectors` without forming
/// the full operator. This is what makes three-leg identities affordable when
/// the total dimension runs into the tens of thousands.
pub fn apply_on_legs(
    op: &CMatrix,
    legs: &[usize],
    space: &LegSpace,
    vectors: &CMatrix,
) -> Result<CMatrix, LinalgError> {
    let split = LegSplit::new(legs, space)?;
    let dt = split.target.len();
    if op.nrows() != dt || op.ncols() != dt {
        return Err(LinalgError::DimensionMismatch { expected: dt, found: op.nrows() });
    }
    if vectors.nrows() != space.total() {
        return Err(LinalgError::DimensionMismatch { expected: space.total(), found: vectors.nrows() });
    }
    let cols = vectors.ncols();
    let nr = split.rest.len();
    let mut gathered = CMatrix::zeros(dt, nr * cols);
    for col in 0..cols {
        for (ri, &r) in split.rest.iter().enumerate() {
            for (t, &to) in split.target.iter().enumerate() {
                gathered[(t, col * nr + ri)] = vectors[(r + to, col)];
            }
        }
    }
    let applied = matmul(op, &gathered);
    let mut out = CMatrix::zeros(vectors.nrows(), cols);
    for col in 0..cols {
        for (ri, &r) in split.rest.iter().enumerate() {
            for (t, &to) in split.target.iter().enumerate() {
                out[(r + to, col)] = applied[(t, col * nr + ri)];
            }
        }
    }
    Ok(out)
}
