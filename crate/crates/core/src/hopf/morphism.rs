//! Morphisms `β: A → M_m` and Hopf *-algebra maps between quantum groups.

use super::HopfError;
use crate::catalog::GroupTable;
use crate::fqg::FqgData;
use crate::linalg::{
    block_diag, cr, generated_unital_star_algebra, max_abs_slice, max_diff, rank, tolerance, CMatrix, CVector,
    SubspaceBasis, C64,
};
use std::sync::Arc;

/// A unital *-homomorphism `β: A → M_m`, stored as the images `β(e_i)` of
/// the basis. The target algebra is the identity inclusion into `M_m`.
#[derive(Debug, Clone)]
pub struct QMorphism {
    source: Arc<FqgData>,
    m: usize,
    images: Vec<CMatrix>,
}

/// Residuals of [`check_morphism`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorphismReport {
    pub multiplicativity: f64,
    pub unitality: f64,
    pub star: f64,
}

impl MorphismReport {
    pub fn max(&self) -> f64 {
        self.multiplicativity.max(self.unitality).max(self.star)
    }

    pub fn passed(&self) -> bool {
        self.max() <= tolerance()
    }

    /// The first failing residual by name.
    pub fn first_failure(&self) -> Option<(&'static str, f64)> {
        let tol = tolerance();
        [("multiplicativity", self.multiplicativity), ("unitality", self.unitality), ("star", self.star)]
            .into_iter()
            .find(|(_, r)| r.is_nan() || *r > tol)
    }
}

impl QMorphism {
    /// Wrap basis images. Only shapes are checked here.
    pub fn new(source: Arc<FqgData>, images: Vec<CMatrix>) -> Result<Self, HopfError> {
        let n = source.dim();
        if images.len() != n {
            return Err(HopfError::Shape { what: "number of basis images", expected: n, found: images.len() });
        }
        let m = images[0].nrows();
        for img in &images {
            if img.nrows() != m || img.ncols() != m {
                return Err(HopfError::Shape { what: "image matrix side", expected: m, found: img.ncols() });
            }
        }
        if m == 0 {
            return Err(HopfError::Shape { what: "target dimension", expected: 1, found: 0 });
        }
        Ok(Self { source, m, images })
    }

    /// `β = ε` with scalar target.
    pub fn counit(source: Arc<FqgData>) -> Self {
        let images = source.counit().iter().map(|&c| CMatrix::from_element(1, 1, c)).collect();
        Self::new(source, images).expect("one scalar per basis element")
    }

    /// `β = L`, the GNS representation, which is faithful.
    pub fn identity(source: Arc<FqgData>) -> Self {
        let images = source.gns().left_all().to_vec();
        Self::new(source, images).expect("one operator per basis element")
    }

    /// Evaluation of `C(G)` at a list of points, as diagonal `|P|×|P|`
    /// matrices. The source basis must be the point masses.
    pub fn evaluation(source: Arc<FqgData>, points: &[usize]) -> Result<Self, HopfError> {
        let n = source.dim();
        if points.is_empty() {
            return Err(HopfError::Shape { what: "number of evaluation points", expected: 1, found: 0 });
        }
        if let Some(&bad) = points.iter().find(|&&p| p >= n) {
            return Err(HopfError::Shape { what: "evaluation point", expected: n, found: bad });
        }
        let m = points.len();
        let images = (0..n)
            .map(|i| {
                let mut d = CMatrix::zeros(m, m);
                for (k, &p) in points.iter().enumerate() {
                    if p == i {
                        d[(k, k)] = cr(1.0);
                    }
                }
                d
            })
            .collect();
        Self::new(source, images)
    }

    pub fn source(&self) -> &Arc<FqgData> {
        &self.source
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    /// `β(x)` for an element given in coordinates.
    pub fn image_of(&self, x: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.m, self.m);
        for (img, &c) in self.images.iter().zip(x.iter()) {
            if c != C64::new(0.0, 0.0) {
                out += img * c;
            }
        }
        out
    }

    /// The unital *-algebra generated by the images.
    pub fn target_algebra(&self) -> SubspaceBasis {
        generated_unital_star_algebra(&self.images, self.m).expect("square images")
    }

    /// The `n×m²` matrix with `B[i][(p,q)] = β(e_i)[p][q]`. Its column space
    /// is the set of slices `(id⊗ω)X` in dual coordinates.
    pub fn slice_matrix(&self) -> CMatrix {
        let m2 = self.m * self.m;
        CMatrix::from_fn(self.images.len(), m2, |i, pq| self.images[i][(pq / self.m, pq % self.m)])
    }

    /// `β₁ ⊕ β₂` on the block-diagonal target.
    pub fn direct_sum(&self, other: &QMorphism) -> Result<Self, HopfError> {
        if !same_source(&self.source, &other.source) {
            return Err(HopfError::ParentMismatch);
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| block_diag(&[a, b])).collect();
        Self::new(self.source.clone(), images)
    }

    /// `β∘φ` for a Hopf map `φ` into the source of `β`.
    pub fn compose(&self, phi: &HopfMap) -> Result<Self, HopfError> {
        if !same_source(phi.target(), &self.source) {
            return Err(HopfError::ParentMismatch);
        }
        let images = (0..phi.source().dim()).map(|i| self.image_of(&phi.matrix().column(i).into_owned())).collect();
        Self::new(phi.source().clone(), images)
    }

    /// `max_i ‖β(e_i) − β'(e_i)‖`.
    pub fn distance(&self, other: &QMorphism) -> f64 {
        if self.m != other.m || self.images.len() != other.images.len() {
            return f64::INFINITY;
        }
        self.images.iter().zip(&other.images).fold(0.0, |acc, (a, b)| acc.max(max_diff(a, b)))
    }

    /// Least-squares distance from `β` to the maps of the form `β'∘π`:
    /// zero exactly when `β` factors through the surjection `π`.
    pub fn factorization_residual(&self, pi: &HopfMap) -> Result<f64, HopfError> {
        if !same_source(&self.source, pi.source()) {
            return Err(HopfError::ParentMismatch);
        }
        let n = self.source.dim();
        let mm = self.m * self.m;
        let imgs = CMatrix::from_fn(n, mm, |i, k| self.images[i][(k / self.m, k % self.m)]);
        let pt = pi.matrix().transpose();
        let svd = pt.clone().svd(true, true);
        let sol = svd.solve(&imgs, tolerance()).map_err(|_| HopfError::Shape {
            what: "factorization system",
            expected: n,
            found: pt.nrows(),
        })?;
        Ok(max_diff(&(&pt * sol), &imgs))
    }

    /// Fail with a named residual unless `β` is a unital *-homomorphism.
    pub fn checked(self) -> Result<Self, HopfError> {
        let report = check_morphism(&self);
        if let Some((name, residual)) = report.first_failure() {
            return Err(HopfError::NotAMorphism { name: name.into(), residual });
        }
        Ok(self)
    }
}

pub(crate) fn same_source(a: &Arc<FqgData>, b: &Arc<FqgData>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Residuals for `β(e_i)β(e_j) = β(e_ie_j)`, `β(1) = 1` and `β(x*) = β(x)†`.
pub fn check_morphism(beta: &QMorphism) -> MorphismReport {
    let a = &beta.source;
    let n = a.dim();
    let mut mult: f64 = 0.0;
    let mut star: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = &beta.images[i] * &beta.images[j];
            let mut rhs = CMatrix::zeros(beta.m, beta.m);
            for &(k, v) in a.mul_basis(i, j) {
                rhs += &beta.images[k] * v;
            }
            mult = mult.max(max_diff(&lhs, &rhs));
        }
        let s = beta.image_of(&a.star(&a.basis(i)));
        star = star.max(max_diff(&s, &beta.images[i].adjoint()));
    }
    let unit = max_diff(&beta.image_of(a.unit()), &CMatrix::identity(beta.m, beta.m));
    MorphismReport { multiplicativity: mult, unitality: unit, star }
}

/// A unital *-homomorphism `φ: A → B` between quantum groups intertwining
/// the coproducts. Column `i` of `matrix` holds the coordinates of `φ(e_i)`.
#[derive(Debug, Clone)]
pub struct HopfMap {
    source: Arc<FqgData>,
    target: Arc<FqgData>,
    matrix: CMatrix,
}

/// Residuals of [`HopfMap::check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfMapReport {
    pub multiplicativity: f64,
    pub unitality: f64,
    pub star: f64,
    pub coproduct: f64,
    pub counit: f64,
    pub antipode: f64,
    pub rank: usize,
    pub target_dim: usize,
}

impl HopfMapReport {
    pub fn max(&self) -> f64 {
        [self.multiplicativity, self.unitality, self.star, self.coproduct, self.counit, self.antipode]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn is_hopf_map(&self) -> bool {
        self.max() <= tolerance()
    }

    pub fn is_surjection(&self) -> bool {
        self.is_hopf_map() && self.rank == self.target_dim
    }
}

impl HopfMap {
    pub fn new(source: Arc<FqgData>, target: Arc<FqgData>, matrix: CMatrix) -> Result<Self, HopfError> {
        if matrix.nrows() != target.dim() || matrix.ncols() != source.dim() {
            return Err(HopfError::Shape {
                what: "Hopf map matrix entries",
                expected: target.dim() * source.dim(),
                found: matrix.len(),
            });
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(a: Arc<FqgData>) -> Self {
        let n = a.dim();
        Self { source: a.clone(), target: a, matrix: CMatrix::identity(n, n) }
    }

    /// `φ(δ_k) = Σ_{f(g)=k} δ_g`: the map `C(K) → C(G)` dual to a group
    /// homomorphism `f: G → K`. Both algebras must use point-mass bases.
    pub fn pullback(c_k: Arc<FqgData>, c_g: Arc<FqgData>, f: &[usize]) -> Result<Self, HopfError> {
        if f.len() != c_g.dim() {
            return Err(HopfError::Shape { what: "homomorphism length", expected: c_g.dim(), found: f.len() });
        }
        let mut matrix = CMatrix::zeros(c_g.dim(), c_k.dim());
        for (g, &k) in f.iter().enumerate() {
            if k >= c_k.dim() {
                return Err(HopfError::Shape { what: "homomorphism image", expected: c_k.dim(), found: k });
            }
            matrix[(g, k)] = cr(1.0);
        }
        Self::new(c_k, c_g, matrix)
    }

    /// `π(δ_g) = δ_h` if `g` is the image of `h` under the inclusion, else
    /// zero: restriction of functions from `G` to a subgroup `H`.
    pub fn restriction(c_g: Arc<FqgData>, c_h: Arc<FqgData>, inclusion: &[usize]) -> Result<Self, HopfError> {
        if inclusion.len() != c_h.dim() {
            return Err(HopfError::Shape { what: "inclusion length", expected: c_h.dim(), found: inclusion.len() });
        }
        let mut matrix = CMatrix::zeros(c_h.dim(), c_g.dim());
        for (h, &g) in inclusion.iter().enumerate() {
            if g >= c_g.dim() {
                return Err(HopfError::Shape { what: "inclusion image", expected: c_g.dim(), found: g });
            }
            matrix[(h, g)] = cr(1.0);
        }
        Self::new(c_g, c_h, matrix)
    }

    /// Restriction `C(G) → C(H)` to a subgroup given by its elements, with
    /// `C(H)` built from the induced table.
    pub fn restriction_to_subgroup(
        c_g: Arc<FqgData>,
        g: &GroupTable,
        elems: &[usize],
    ) -> Result<(Self, GroupTable), HopfError> {
        let (h, inclusion) = g.subgroup_table(elems)?;
        let c_h = Arc::new(crate::fqg::function_algebra(&h)?);
        Ok((Self::restriction(c_g, c_h, &inclusion)?, h))
    }

    pub fn source(&self) -> &Arc<FqgData> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FqgData> {
        &self.target
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.matrix * x
    }

    /// `ψ∘φ`.
    pub fn then(&self, psi: &HopfMap) -> Result<Self, HopfError> {
        if !same_source(&self.target, &psi.source) {
            return Err(HopfError::ParentMismatch);
        }
        Self::new(self.source.clone(), psi.target.clone(), &psi.matrix * &self.matrix)
    }

    /// `L_B∘φ` as a morphism into `B(L²(B))`.
    pub fn to_qmorphism(&self) -> QMorphism {
        let g = self.target.gns();
        let images = (0..self.source.dim()).map(|i| g.left(&self.matrix.column(i).into_owned())).collect();
        QMorphism::new(self.source.clone(), images).expect("one operator per basis element")
    }

    /// Residuals of all Hopf *-algebra map identities.
    pub fn check(&self) -> HopfMapReport {
        let a = &self.source;
        let b = &self.target;
        let n = a.dim();
        let r = b.dim();
        let phi = |x: &CVector| &self.matrix * x;
        let images: Vec<CVector> = (0..n).map(|i| self.matrix.column(i).into_owned()).collect();
        let vd = |x: &CVector, y: &CVector| max_abs_slice((x - y).as_slice());
        let mut mult: f64 = 0.0;
        let mut star: f64 = 0.0;
        let mut cop: f64 = 0.0;
        let mut counit: f64 = 0.0;
        let mut anti: f64 = 0.0;
        for i in 0..n {
            let ei = a.basis(i);
            for j in 0..n {
                let lhs = phi(&a.mul(&ei, &a.basis(j)));
                mult = mult.max(vd(&lhs, &b.mul(&images[i], &images[j])));
            }
            star = star.max(vd(&phi(&a.star(&ei)), &b.star(&images[i])));
            anti = anti.max(vd(&phi(&a.antipode(&ei)), &b.antipode(&images[i])));
            counit = counit.max((b.counit_of(&images[i]) - a.counit()[i]).norm());
            // (φ⊗φ)Δ(e_i) against Δ(φ(e_i)), both as r×r coefficient arrays.
            let mut lhs = CMatrix::zeros(r, r);
            for &(j, k, d) in a.coproduct_basis(i) {
                lhs += (&images[j] * images[k].transpose()) * d;
            }
            let rhs = CMatrix::from_row_slice(r, r, &b.coproduct_of(&images[i]));
            cop = cop.max(max_diff(&lhs, &rhs));
        }
        let unit = vd(&phi(a.unit()), b.unit());
        HopfMapReport {
            multiplicativity: mult,
            unitality: unit,
            star,
            coproduct: cop,
            counit,
            antipode: anti,
            rank: rank(&self.matrix),
            target_dim: r,
        }
    }

    /// Fail unless all identities hold.
    pub fn checked(self) -> Result<Self, HopfError> {
        let rep = self.check();
        let tol = tolerance();
        for (name, residual) in [
            ("hopf_map_multiplicative", rep.multiplicativity),
            ("hopf_map_unital", rep.unitality),
            ("hopf_map_star", rep.star),
            ("hopf_map_coproduct", rep.coproduct),
            ("hopf_map_counit", rep.counit),
            ("hopf_map_antipode", rep.antipode),
        ] {
            super::require(name, residual, tol)?;
        }
        Ok(self)
    }

    /// `max ‖φ(e_i) − ψ(e_i)‖`.
    pub fn distance(&self, other: &HopfMap) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        max_diff(&self.matrix, &other.matrix)
    }
}
