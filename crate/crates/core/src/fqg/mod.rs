//! Finite quantum groups given by structure constants.
//!
//! An [`FqgData`] is a finite-dimensional Hopf *-algebra `A = C(𝔾)` with a
//! faithful Haar state, written in a fixed basis `e_0 … e_{n-1}`. Elements are
//! coefficient vectors; elements of `A⊗A` are flat vectors indexed `j·n + k`.

mod constructors;
mod corep;
mod dual;
mod gns;

pub use constructors::{codouble, function_algebra, group_algebra, kac_paljutkin, Codouble, KP_LABELS};
pub use corep::{
    antipode_slice_check, direct_sum, intertwiners, intertwiners_with, random_corep,
    random_representation, regular_corep, trivial_corep, Corep, IntertwinerMethod,
};
pub use dual::{biduality_residual, dual};
pub use gns::{build_w, gns, GnsRep, MultUnitary, WResiduals};

use crate::linalg::{
    hermitian_eigenspaces, nullspace, seeded_rng, tolerance, CMatrix, CVector, LinalgError, C64,
};
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FqgError {
    #[error("{what}: expected length {expected}, found {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("not a group table: {0}")]
    NotAGroup(String),
    #[error("the invariance equations have no normalizable solution")]
    NoHaar,
    #[error("the invariance equations have a {0}-dimensional solution space")]
    HaarNotUnique(usize),
    #[error("Haar functional is not right invariant (residual {0:.3e})")]
    HaarNotRightInvariant(f64),
    #[error("Gram matrix of the Haar functional is not positive definite (smallest eigenvalue {0:.3e})")]
    HaarNotPositive(f64),
    #[error("axiom `{name}` fails with residual {residual:.3e}")]
    Axiom { name: String, residual: f64 },
    #[error("postcondition `{name}` fails with residual {residual:.3e}")]
    Postcondition { name: String, residual: f64 },
    #[error("objects belong to different quantum groups")]
    ParentMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Dense rank-3 tensor with index `(i·n1 + j)·n2 + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(d0: usize, d1: usize, d2: usize) -> Self {
        Self { dims: [d0, d1, d2], data: vec![C64::new(0.0, 0.0); d0 * d1 * d2] }
    }

    pub fn from_vec(d0: usize, d1: usize, d2: usize, data: Vec<C64>) -> Result<Self, FqgError> {
        if data.len() != d0 * d1 * d2 {
            return Err(FqgError::Dimension { what: "tensor", expected: d0 * d1 * d2, found: data.len() });
        }
        Ok(Self { dims: [d0, d1, d2], data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let ix = self.idx(i, j, k);
        self.data[ix] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let ix = self.idx(i, j, k);
        self.data[ix] += v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn max_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

/// The Hopf *-algebra part of a finite quantum group, without a Haar state.
///
/// Conventions: `e_i·e_j = Σ_k mult[i][j][k] e_k`,
/// `Δ(e_i) = Σ_{j,k} coproduct[i][j][k] e_j⊗e_k`,
/// `(Σ aᵢeᵢ)* = Σ conj(aᵢ)·star[i][j]·e_j` and `S(e_i) = Σ_j antipode[i][j] e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfStructure {
    pub mult: Tensor3,
    pub unit: CVector,
    pub star: CMatrix,
    pub coproduct: Tensor3,
    pub counit: CVector,
    pub antipode: CMatrix,
}

impl HopfStructure {
    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    fn validate(&self) -> Result<(), FqgError> {
        let n = self.dim();
        let check = |what, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(FqgError::Dimension { what, expected, found })
            }
        };
        check("multiplication tensor", n * n * n, self.mult.data.len())?;
        check("multiplication tensor", n, self.mult.dims[0])?;
        check("coproduct tensor", n * n * n, self.coproduct.data.len())?;
        check("coproduct tensor", n, self.coproduct.dims[0])?;
        check("counit", n, self.counit.len())?;
        check("star matrix", n, self.star.nrows())?;
        check("star matrix", n, self.star.ncols())?;
        check("antipode matrix", n, self.antipode.nrows())?;
        check("antipode matrix", n, self.antipode.ncols())?;
        Ok(())
    }
}

type Sparse2 = Vec<(usize, C64)>;

/// Sparse views of the structure tensors.
#[derive(Debug, Clone)]
struct Tables {
    /// `mult_pairs[i·n + j]` lists the nonzero `(k, m[i][j][k])`.
    mult_pairs: Vec<Sparse2>,
    /// `cop_rows[i]` lists the nonzero `(j, k, d[i][j][k])`.
    cop_rows: Vec<Vec<(usize, usize, C64)>>,
    /// Sparse rows of the star and antipode matrices.
    star_rows: Vec<Sparse2>,
    antipode_rows: Vec<Sparse2>,
}

fn sparse_rows(m: &CMatrix) -> Vec<Sparse2> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .filter(|&j| m[(i, j)] != C64::new(0.0, 0.0))
                .map(|j| (j, m[(i, j)]))
                .collect()
        })
        .collect()
}

impl Tables {
    fn new(s: &HopfStructure) -> Self {
        let n = s.dim();
        let zero = C64::new(0.0, 0.0);
        let mut mult_pairs = vec![Vec::new(); n * n];
        let mut cop_rows = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = s.mult.get(i, j, k);
                    if v != zero {
                        mult_pairs[i * n + j].push((k, v));
                    }
                    let d = s.coproduct.get(i, j, k);
                    if d != zero {
                        cop_rows[i].push((j, k, d));
                    }
                }
            }
        }
        Self {
            mult_pairs,
            cop_rows,
            star_rows: sparse_rows(&s.star),
            antipode_rows: sparse_rows(&s.antipode),
        }
    }
}

/// A finite quantum group: Hopf *-algebra plus Haar state.
#[derive(Debug, Clone)]
pub struct FqgData {
    structure: HopfStructure,
    haar: CVector,
    name: String,
    tables: OnceLock<Arc<Tables>>,
    gns: OnceLock<Arc<GnsRep>>,
    w: OnceLock<Arc<MultUnitary>>,
    dual: OnceLock<Arc<FqgData>>,
}

impl PartialEq for FqgData {
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure && self.haar == other.haar
    }
}

/// One named residual of [`FqgData::verify_hopf_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// A Wedderburn block: matrix size and Haar weight of its central projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub size: usize,
    pub haar_weight: f64,
}

/// Isomorphism invariants used to compare quantum groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariants {
    pub dim: usize,
    pub commutative: bool,
    pub cocommutative: bool,
    pub blocks: Vec<Block>,
    /// For commutative algebras: orders of the characters in the group of
    /// characters, sorted.
    pub character_orders: Option<Vec<usize>>,
}

impl Invariants {
    pub fn matches(&self, other: &Invariants) -> bool {
        self.dim == other.dim
            && self.commutative == other.commutative
            && self.cocommutative == other.cocommutative
            && self.character_orders == other.character_orders
            && self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.size == b.size && (a.haar_weight - b.haar_weight).abs() < 1e-7)
    }
}

fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

fn max_diff_vec(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

impl FqgData {
    /// Bundle structure constants with a given Haar functional. Only shapes
    /// are checked; see [`FqgData::verify_hopf_axioms`].
    pub fn new(structure: HopfStructure, haar: CVector, name: impl Into<String>) -> Result<Self, FqgError> {
        structure.validate()?;
        if haar.len() != structure.dim() {
            return Err(FqgError::Dimension { what: "haar", expected: structure.dim(), found: haar.len() });
        }
        Ok(Self {
            structure,
            haar,
            name: name.into(),
            tables: OnceLock::new(),
            gns: OnceLock::new(),
            w: OnceLock::new(),
            dual: OnceLock::new(),
        })
    }

    /// Solve for the Haar state and bundle.
    pub fn from_structure(structure: HopfStructure, name: impl Into<String>) -> Result<Self, FqgError> {
        structure.validate()?;
        let haar = solve_haar(&structure)?;
        Self::new(structure, haar, name)
    }

    /// Run the axiom verifier and fail on the first violated axiom.
    pub fn checked(self) -> Result<Self, FqgError> {
        let report = self.verify_hopf_axioms();
        if let Some(bad) = report.first_failure() {
            return Err(FqgError::Axiom { name: bad.name.to_string(), residual: bad.residual });
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn structure(&self) -> &HopfStructure {
        &self.structure
    }

    pub fn mult(&self) -> &Tensor3 {
        &self.structure.mult
    }

    pub fn coproduct(&self) -> &Tensor3 {
        &self.structure.coproduct
    }

    pub fn unit(&self) -> &CVector {
        &self.structure.unit
    }

    pub fn counit(&self) -> &CVector {
        &self.structure.counit
    }

    pub fn star_matrix(&self) -> &CMatrix {
        &self.structure.star
    }

    pub fn antipode_matrix(&self) -> &CMatrix {
        &self.structure.antipode
    }

    pub fn haar(&self) -> &CVector {
        &self.haar
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| Arc::new(Tables::new(&self.structure)))
    }

    pub fn basis(&self, i: usize) -> CVector {
        basis_vector(self.dim(), i)
    }

    /// Product of two elements.
    pub fn mul(&self, x: &CVector, y: &CVector) -> CVector {
        let n = self.dim();
        let t = self.tables();
        let mut out = CVector::zeros(n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == C64::new(0.0, 0.0) {
                    continue;
                }
                let s = xi * yj;
                for &(k, v) in &t.mult_pairs[i * n + j] {
                    out[k] += s * v;
                }
            }
        }
        out
    }

    /// Nonzero `(k, m[i][j][k])` for the product of two basis elements.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.tables().mult_pairs[i * self.dim() + j]
    }

    pub fn star(&self, x: &CVector) -> CVector {
        let n = self.dim();
        let mut out = CVector::zeros(n);
        for (i, row) in self.tables().star_rows.iter().enumerate() {
            let xi = x[i].conj();
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for &(j, v) in row {
                out[j] += xi * v;
            }
        }
        out
    }

    pub fn antipode(&self, x: &CVector) -> CVector {
        let n = self.dim();
        let mut out = CVector::zeros(n);
        for (i, row) in self.tables().antipode_rows.iter().enumerate() {
            if x[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for &(j, v) in row {
                out[j] += x[i] * v;
            }
        }
        out
    }

    /// `Δ(x)` as a flat vector indexed `j·n + k`.
    pub fn coproduct_of(&self, x: &CVector) -> Vec<C64> {
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for (i, row) in self.tables().cop_rows.iter().enumerate() {
            if x[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for &(j, k, d) in row {
                out[j * n + k] += x[i] * d;
            }
        }
        out
    }

    /// Nonzero `(j, k, d[i][j][k])`.
    pub fn coproduct_basis(&self, i: usize) -> &[(usize, usize, C64)] {
        &self.tables().cop_rows[i]
    }

    pub fn counit_of(&self, x: &CVector) -> C64 {
        self.structure.counit.dot(x)
    }

    pub fn haar_of(&self, x: &CVector) -> C64 {
        self.haar.dot(x)
    }

    /// Product in `A⊗A` of flat vectors.
    pub fn mul2(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let t = self.tables();
        let zero = C64::new(0.0, 0.0);
        let nz = |v: &[C64]| -> Vec<(usize, usize, C64)> {
            v.iter()
                .enumerate()
                .filter(|(_, z)| **z != zero)
                .map(|(ix, z)| (ix / n, ix % n, *z))
                .collect()
        };
        let (xs, ys) = (nz(x), nz(y));
        let mut out = vec![zero; n * n];
        for &(a, b, xv) in &xs {
            for &(c, d, yv) in &ys {
                let left = &t.mult_pairs[a * n + c];
                let right = &t.mult_pairs[b * n + d];
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let s = xv * yv;
                for &(p, u) in left {
                    let su = s * u;
                    for &(q, w) in right {
                        out[p * n + q] += su * w;
                    }
                }
            }
        }
        out
    }

    /// Left multiplication by `x` as a matrix on coefficient vectors.
    pub fn left_mult_alg(&self, x: &CVector) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                for &(k, v) in self.mul_basis(i, j) {
                    m[(k, j)] += xi * v;
                }
            }
        }
        m
    }

    /// Right multiplication by `x` as a matrix on coefficient vectors.
    pub fn right_mult_alg(&self, x: &CVector) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                for &(k, v) in self.mul_basis(j, i) {
                    m[(k, j)] += xi * v;
                }
            }
        }
        m
    }

    /// `H[i][j] = h(e_i e_j)`.
    pub fn haar_pairing(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| {
            self.mul_basis(i, j).iter().map(|&(k, v)| v * self.haar[k]).sum()
        })
    }

    /// `G[i][j] = h(e_i* e_j)`, the Gram matrix of the GNS inner product.
    pub fn gram(&self) -> CMatrix {
        gram_of(&self.structure, &self.haar)
    }

    pub fn gns(&self) -> Arc<GnsRep> {
        self.gns
            .get_or_init(|| Arc::new(gns::gns_unchecked(self).expect("Haar state is not faithful")))
            .clone()
    }

    pub fn w(&self) -> Arc<MultUnitary> {
        self.w.get_or_init(|| Arc::new(gns::w_unchecked(self))).clone()
    }

    pub fn dual(&self) -> Arc<FqgData> {
        self.dual
            .get_or_init(|| Arc::new(dual::dual_unchecked(self).expect("dual Haar state")))
            .clone()
    }

    pub fn commutativity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = self.mul(&self.basis(i), &self.basis(j));
                let b = self.mul(&self.basis(j), &self.basis(i));
                worst = worst.max(max_diff_vec(a.as_slice(), b.as_slice()));
            }
        }
        worst
    }

    pub fn cocommutativity_defect(&self) -> f64 {
        let n = self.dim();
        let d = &self.structure.coproduct;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((d.get(i, j, k) - d.get(i, k, j)).norm());
                }
            }
        }
        worst
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_defect() <= tolerance()
    }

    pub fn is_cocommutative(&self) -> bool {
        self.cocommutativity_defect() <= tolerance()
    }

    /// Basis of the center as coefficient vectors.
    pub fn center(&self) -> crate::linalg::SubspaceBasis {
        let n = self.dim();
        let mut stacked = CMatrix::zeros(n * n, n);
        for i in 0..n {
            let e = self.basis(i);
            let block = self.right_mult_alg(&e) - self.left_mult_alg(&e);
            stacked.rows_mut(i * n, n).copy_from(&block);
        }
        nullspace(&stacked)
    }

    /// Wedderburn blocks sorted by size then Haar weight. Found from the
    /// eigenspaces of left multiplication by a random self-adjoint central
    /// element: a block `M_d` contributes a `d²`-dimensional eigenspace.
    pub fn block_structure(&self) -> Vec<Block> {
        let center = self.center();
        let gns = self.gns();
        let mut rng = seeded_rng(0x5eed_b10c);
        let mut z = CVector::zeros(self.dim());
        for k in 0..center.dim() {
            let re: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
            let im: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
            z += center.vector(k) * C64::new(re, im);
        }
        let z = (&z + self.star(&z)) * C64::new(0.5, 0.0);
        let lz = gns.left(&z);
        let one = gns.cyclic_vector();
        let spaces = hermitian_eigenspaces(&lz, 1e-7 * crate::linalg::max_abs(&lz).max(1.0));
        let mut blocks: Vec<Block> = spaces
            .iter()
            .map(|(_, v)| {
                let d2 = v.ncols();
                let size = (d2 as f64).sqrt().round() as usize;
                let weight = (v.adjoint() * &one).norm_squared();
                Block { size, haar_weight: weight }
            })
            .collect();
        blocks.sort_by(|a, b| a.size.cmp(&b.size).then(a.haar_weight.partial_cmp(&b.haar_weight).unwrap()));
        blocks
    }

    /// Characters of a commutative algebra, as vectors of values on the basis.
    pub fn characters(&self) -> Option<Vec<CVector>> {
        if !self.is_commutative() {
            return None;
        }
        let n = self.dim();
        let gns = self.gns();
        let mut rng = seeded_rng(0xc4a2);
        // A random self-adjoint element separates the one-dimensional blocks.
        // Complex coefficients matter: with real ones, χ and its conjugate
        // can take equal values.
        let mut x = CVector::zeros(n);
        for i in 0..n {
            let re: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
            let im: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
            x[i] = C64::new(re, im);
        }
        let x = (&x + self.star(&x)) * C64::new(0.5, 0.0);
        let lx = gns.left(&x);
        let spaces = hermitian_eigenspaces(&lx, 1e-7);
        let mut chars = Vec::with_capacity(n);
        for (_, v) in spaces {
            for col in 0..v.ncols() {
                let vec = v.column(col).into_owned();
                let chi = CVector::from_fn(n, |i, _| vec.dotc(&(gns.left_basis(i) * &vec)));
                chars.push(chi);
            }
        }
        Some(chars)
    }

    /// Convolution `(χ⊗ψ)∘Δ` of two functionals.
    pub fn convolve(&self, chi: &CVector, psi: &CVector) -> CVector {
        let n = self.dim();
        CVector::from_fn(n, |i, _| {
            self.coproduct_basis(i).iter().map(|&(j, k, d)| d * chi[j] * psi[k]).sum()
        })
    }

    pub fn invariants(&self) -> Invariants {
        let character_orders = self.characters().map(|chars| {
            let eps = self.counit().clone();
            let mut orders: Vec<usize> = chars
                .iter()
                .map(|chi| {
                    let mut p = chi.clone();
                    let mut k = 1;
                    while max_diff_vec(p.as_slice(), eps.as_slice()) > 1e-6 && k <= self.dim() {
                        p = self.convolve(&p, chi);
                        k += 1;
                    }
                    k
                })
                .collect();
            orders.sort_unstable();
            orders
        });
        Invariants {
            dim: self.dim(),
            commutative: self.is_commutative(),
            cocommutative: self.is_cocommutative(),
            blocks: self.block_structure(),
            character_orders,
        }
    }

    /// Evaluate every Hopf *-algebra and Haar axiom.
    pub fn verify_hopf_axioms(&self) -> AxiomReport {
        verify(self)
    }
}

fn gram_of(s: &HopfStructure, haar: &CVector) -> CMatrix {
    let n = s.dim();
    // h(e_l e_j) first, then contract with the star matrix.
    let mut hp = CMatrix::zeros(n, n);
    for l in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += s.mult.get(l, j, k) * haar[k];
            }
            hp[(l, j)] = acc;
        }
    }
    &s.star * hp
}

/// Dimension of the solution space of the left-invariance equations
/// `(h⊗id)Δ(x) = h(x)·1` before normalization.
pub fn haar_solution_dim(s: &HopfStructure) -> usize {
    nullspace(&invariance_system(s)).dim()
}

fn invariance_system(s: &HopfStructure) -> CMatrix {
    let n = s.dim();
    let mut m = CMatrix::zeros(n * n, n);
    for x in 0..n {
        for k in 0..n {
            let row = x * n + k;
            for i in 0..n {
                m[(row, i)] = s.coproduct.get(x, i, k);
            }
            m[(row, x)] -= s.unit[k];
        }
    }
    m
}

/// The unique left-invariant functional with `h(1) = 1`, checked for right
/// invariance and positivity of its Gram matrix.
pub fn solve_haar(s: &HopfStructure) -> Result<CVector, FqgError> {
    s.validate()?;
    let n = s.dim();
    let kernel = nullspace(&invariance_system(s));
    match kernel.dim() {
        0 => return Err(FqgError::NoHaar),
        1 => {}
        d => return Err(FqgError::HaarNotUnique(d)),
    }
    let v = kernel.vector(0);
    let h1 = v.dot(&s.unit);
    if h1.norm() <= tolerance() {
        return Err(FqgError::NoHaar);
    }
    let h = v / h1;
    // Right invariance: (id⊗h)Δ(x) = h(x)·1.
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += s.coproduct.get(x, j, k) * h[k];
            }
            worst = worst.max((acc - h[x] * s.unit[j]).norm());
        }
    }
    if worst > tolerance() * 10.0 {
        return Err(FqgError::HaarNotRightInvariant(worst));
    }
    let g = gram_of(s, &h);
    let herm = crate::linalg::max_diff(&g, &g.adjoint());
    let min_eig = (&g + g.adjoint()).scale(0.5).symmetric_eigen().eigenvalues.min();
    if herm > tolerance() * 10.0 || min_eig <= tolerance() {
        return Err(FqgError::HaarNotPositive(min_eig.min(-herm)));
    }
    Ok(h)
}

/// Work estimate above which exhaustive pairwise checks of
/// multiplicativity of Δ are replaced by random elements.
const PAIRWISE_WORK_LIMIT: f64 = 3e8;

fn verify(a: &FqgData) -> AxiomReport {
    let n = a.dim();
    let tol = tolerance();
    let s = &a.structure;
    let e = |i: usize| a.basis(i);
    let mut checks = Vec::new();
    let mut push = |name: &'static str, residual: f64| {
        checks.push(AxiomCheck { name, residual, passed: residual <= tol });
    };

    // Associativity and unit.
    let mut assoc: f64 = 0.0;
    let mut unit: f64 = 0.0;
    let products: Vec<Vec<CVector>> =
        (0..n).map(|i| (0..n).map(|j| a.mul(&e(i), &e(j))).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let left = a.mul(&products[i][j], &e(k));
                let right = a.mul(&e(i), &products[j][k]);
                assoc = assoc.max(max_diff_vec(left.as_slice(), right.as_slice()));
            }
        }
        let ei = e(i);
        unit = unit
            .max(max_diff_vec(a.mul(&s.unit, &ei).as_slice(), ei.as_slice()))
            .max(max_diff_vec(a.mul(&ei, &s.unit).as_slice(), ei.as_slice()));
    }
    push("associativity", assoc);
    push("unit", unit);

    // Coassociativity and counit.
    let mut coassoc: f64 = 0.0;
    let mut counit: f64 = 0.0;
    for i in 0..n {
        let mut left = vec![C64::new(0.0, 0.0); n * n * n];
        let mut right = vec![C64::new(0.0, 0.0); n * n * n];
        let mut eps_left = CVector::zeros(n);
        let mut eps_right = CVector::zeros(n);
        for &(j, k, d) in a.coproduct_basis(i) {
            for &(p, q, d2) in a.coproduct_basis(j) {
                left[(p * n + q) * n + k] += d * d2;
            }
            for &(p, q, d2) in a.coproduct_basis(k) {
                right[(j * n + p) * n + q] += d * d2;
            }
            eps_left[k] += s.counit[j] * d;
            eps_right[j] += d * s.counit[k];
        }
        coassoc = coassoc.max(max_diff_vec(&left, &right));
        let ei = e(i);
        counit = counit
            .max(max_diff_vec(eps_left.as_slice(), ei.as_slice()))
            .max(max_diff_vec(eps_right.as_slice(), ei.as_slice()));
    }
    push("coassociativity", coassoc);
    push("counit", counit);

    // Δ is a unital *-homomorphism.
    let unit_unit: Vec<C64> = (0..n * n).map(|ix| s.unit[ix / n] * s.unit[ix % n]).collect();
    push("coproduct_unital", max_diff_vec(&a.coproduct_of(&s.unit), &unit_unit));
    push("coproduct_multiplicative", coproduct_multiplicativity(a));
    let mut cop_star: f64 = 0.0;
    for i in 0..n {
        let lhs = a.coproduct_of(&a.star(&e(i)));
        let rhs = star2(a, &a.coproduct_of(&e(i)));
        cop_star = cop_star.max(max_diff_vec(&lhs, &rhs));
    }
    push("coproduct_star", cop_star);

    // Antipode law m(S⊗id)Δ = ε(·)1 = m(id⊗S)Δ.
    let mut anti: f64 = 0.0;
    for i in 0..n {
        let mut left = CVector::zeros(n);
        let mut right = CVector::zeros(n);
        for &(j, k, d) in a.coproduct_basis(i) {
            left += a.mul(&a.antipode(&e(j)), &e(k)) * d;
            right += a.mul(&e(j), &a.antipode(&e(k))) * d;
        }
        let target = &s.unit * s.counit[i];
        anti = anti
            .max(max_diff_vec(left.as_slice(), target.as_slice()))
            .max(max_diff_vec(right.as_slice(), target.as_slice()));
    }
    push("antipode", anti);

    // Star: involutive and anti-multiplicative.
    let mut invol: f64 = 0.0;
    let mut anti_mult: f64 = 0.0;
    for i in 0..n {
        invol = invol.max(max_diff_vec(a.star(&a.star(&e(i))).as_slice(), e(i).as_slice()));
        for j in 0..n {
            let lhs = a.star(&products[i][j]);
            let rhs = a.mul(&a.star(&e(j)), &a.star(&e(i)));
            anti_mult = anti_mult.max(max_diff_vec(lhs.as_slice(), rhs.as_slice()));
        }
    }
    push("star_involution", invol);
    push("star_antimultiplicative", anti_mult);

    // Kac conditions.
    let s2 = &s.antipode * &s.antipode;
    push("antipode_involutive", crate::linalg::max_diff(&s2, &CMatrix::identity(n, n)));
    let hp = a.haar_pairing();
    push("haar_tracial", crate::linalg::max_diff(&hp, &hp.transpose()));

    // Haar state.
    push("haar_normalized", (a.haar.dot(&s.unit) - C64::new(1.0, 0.0)).norm());
    let mut left_inv: f64 = 0.0;
    let mut right_inv: f64 = 0.0;
    for x in 0..n {
        let mut l = CVector::zeros(n);
        let mut r = CVector::zeros(n);
        for &(j, k, d) in a.coproduct_basis(x) {
            l[k] += a.haar[j] * d;
            r[j] += d * a.haar[k];
        }
        let target = &s.unit * a.haar[x];
        left_inv = left_inv.max(max_diff_vec(l.as_slice(), target.as_slice()));
        right_inv = right_inv.max(max_diff_vec(r.as_slice(), target.as_slice()));
    }
    push("haar_left_invariance", left_inv);
    push("haar_right_invariance", right_inv);
    let g = a.gram();
    let herm = crate::linalg::max_diff(&g, &g.adjoint());
    let min_eig = (&g + g.adjoint()).scale(0.5).symmetric_eigen().eigenvalues.min();
    checks.push(AxiomCheck {
        name: "haar_faithful",
        residual: herm.max((-min_eig).max(0.0)),
        passed: herm <= tol && min_eig > tol,
    });
    AxiomReport { checks }
}

/// `(*⊗*)` on a flat element of `A⊗A`.
fn star2(a: &FqgData, x: &[C64]) -> Vec<C64> {
    let n = a.dim();
    let rows = &a.tables().star_rows;
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for (ix, &v) in x.iter().enumerate() {
        if v == C64::new(0.0, 0.0) {
            continue;
        }
        let (j, k) = (ix / n, ix % n);
        let cv = v.conj();
        for &(p, s1) in &rows[j] {
            for &(q, s2) in &rows[k] {
                out[p * n + q] += cv * s1 * s2;
            }
        }
    }
    out
}

/// `max ‖Δ(xy) − Δ(x)Δ(y)‖` over basis pairs, or over random pairs when the
/// exhaustive check would be too expensive.
fn coproduct_multiplicativity(a: &FqgData) -> f64 {
    let n = a.dim();
    let total_nnz: usize = (0..n).map(|i| a.coproduct_basis(i).len()).sum();
    let fan: f64 = {
        let nnz: usize = (0..n * n).map(|p| a.tables().mult_pairs[p].len()).sum();
        (nnz as f64 / (n * n) as f64).max(1.0)
    };
    let work = (total_nnz as f64).powi(2) * fan * fan;
    let mut worst: f64 = 0.0;
    if work <= PAIRWISE_WORK_LIMIT {
        let deltas: Vec<Vec<C64>> = (0..n).map(|i| a.coproduct_of(&a.basis(i))).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = a.coproduct_of(&a.mul(&a.basis(i), &a.basis(j)));
                let rhs = a.mul2(&deltas[i], &deltas[j]);
                worst = worst.max(max_diff_vec(&lhs, &rhs));
            }
        }
    } else {
        let mut rng = seeded_rng(0xc0_9e0d);
        for _ in 0..3 {
            let x = crate::linalg::gaussian_matrix(&mut rng, n, 1).column(0).into_owned();
            let y = crate::linalg::gaussian_matrix(&mut rng, n, 1).column(0).into_owned();
            let lhs = a.coproduct_of(&a.mul(&x, &y));
            let rhs = a.mul2(&a.coproduct_of(&x), &a.coproduct_of(&y));
            worst = worst.max(max_diff_vec(&lhs, &rhs));
        }
    }
    worst
}

#[cfg(test)]
mod tests;
