//! JSON input files: quantum groups, morphisms, subgroups and coreps.
//!
//! Complex scalars are `[re, im]` pairs (a bare number is read as real).
//! Group tables are 0-based with the identity at index 0. Structure tensors
//! are nested arrays indexed `[i][j][k]` exactly as in the core types:
//! `mult[i][j][k]` is the coefficient of `e_k` in `e_i e_j`, and
//! `coproduct[i][j][k]` that of `e_j⊗e_k` in `Δ(e_i)`.

use crate::CliError;
use fqg_core::catalog::{builtin, builtin_group, GroupTable};
use fqg_core::fqg::{
    codouble, direct_sum, dual, function_algebra, group_algebra, kac_paljutkin, random_corep, regular_corep,
    trivial_corep, Corep, FqgData, HopfStructure, Tensor3,
};
use fqg_core::hopf::{subgroup_from_quotient, HopfMap, QMorphism, SubgroupEmbedding};
use fqg_core::linalg::{CMatrix, CVector, C64};
use rand::Rng;
use serde::Deserialize;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Pair([f64; 2]),
    Real(f64),
}

impl Scalar {
    fn value(self) -> C64 {
        match self {
            Scalar::Pair([re, im]) => C64::new(re, im),
            Scalar::Real(re) => C64::new(re, 0.0),
        }
    }
}

type Matrix = Vec<Vec<Scalar>>;
type Tensor = Vec<Vec<Vec<Scalar>>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Table { table: Vec<Vec<usize>>, labels: Option<Vec<String>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecFile {
    FunctionAlgebra {
        group: GroupSpec,
    },
    GroupAlgebra {
        group: GroupSpec,
    },
    Dual {
        of: Box<SpecFile>,
    },
    KacPaljutkin,
    Codouble {
        of: Box<SpecFile>,
    },
    RawStructure {
        name: Option<String>,
        mult: Tensor,
        unit: Vec<Scalar>,
        star: Matrix,
        coproduct: Tensor,
        counit: Vec<Scalar>,
        antipode: Matrix,
        haar: Option<Vec<Scalar>>,
    },
    /// Any catalog name, e.g. `S3`, `C[Q8]`, `KP8`, `codouble(C(S3))`.
    Builtin {
        name: String,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorphismFile {
    Evaluation { points: Vec<Point> },
    /// A unitary representation of `G`, one matrix per group element, on `ℂ[G]`.
    Representation { matrices: Vec<Matrix> },
    /// Images of the basis elements.
    Matrix { images: Vec<Matrix> },
    Counit,
    Identity,
    SubgroupRestriction { points: Vec<Point> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupFile {
    /// The subgroup of a classical group generated by the points.
    Points { points: Vec<Point> },
    /// A Hopf surjection onto `target`, as its matrix in the two bases.
    Quotient { target: SpecFile, matrix: Matrix },
    /// One of the two legs `K` or `Khat` of a codouble.
    CodoubleLeg { leg: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorepFile {
    Regular,
    Trivial,
    Random { max_dim: usize },
    /// A representation of the dual, one matrix per dual basis element.
    DualRep { matrices: Vec<Matrix> },
    /// Row `p·d + q` holds the coefficient vector of `u_pq`.
    Coefficients { dim: usize, coeffs: Matrix },
    Sum { of: Vec<CorepFile> },
}

/// How a loaded quantum group relates to a classical group, if at all.
#[derive(Debug, Clone)]
pub enum Classical {
    Functions(GroupTable),
    GroupAlgebra(GroupTable),
}

/// A codouble together with its two quotient maps.
#[derive(Debug, Clone)]
pub struct CodoubleLegs {
    pub k: Arc<FqgData>,
    pub to_k: CMatrix,
    pub to_khat: CMatrix,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub data: Arc<FqgData>,
    pub classical: Option<Classical>,
    pub legs: Option<CodoubleLegs>,
}

impl Loaded {
    fn plain(data: FqgData) -> Self {
        Self { data: Arc::new(data), classical: None, legs: None }
    }

    fn function_group(&self) -> Result<&GroupTable, CliError> {
        match &self.classical {
            Some(Classical::Functions(g)) => Ok(g),
            _ => Err(CliError::Input("point sets need a function_algebra spec".into())),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn matrix(rows: &Matrix) -> Result<CMatrix, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(CliError::Input("ragged matrix".into()));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| rows[i][j].value()))
}

fn vector(v: &[Scalar]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|s| s.value()))
}

fn tensor(t: &Tensor, what: &str) -> Result<Tensor3, CliError> {
    let d0 = t.len();
    let d1 = t.first().map_or(0, Vec::len);
    let d2 = t.first().and_then(|r| r.first()).map_or(0, Vec::len);
    let mut data = Vec::with_capacity(d0 * d1 * d2);
    for plane in t {
        if plane.len() != d1 {
            return Err(CliError::Input(format!("ragged {what} tensor")));
        }
        for row in plane {
            if row.len() != d2 {
                return Err(CliError::Input(format!("ragged {what} tensor")));
            }
            data.extend(row.iter().map(|s| s.value()));
        }
    }
    Tensor3::from_vec(d0, d1, d2, data).map_err(input)
}

fn group(spec: &GroupSpec) -> Result<GroupTable, CliError> {
    match spec {
        GroupSpec::Name(name) => builtin_group(name).map_err(input),
        GroupSpec::Table { table, labels } => GroupTable::new(table.clone(), labels.clone()).map_err(input),
    }
}

/// Build the quantum group described by a spec. Axioms are not verified
/// here; callers decide whether a failure is reportable or fatal.
pub fn load_spec(spec: &SpecFile) -> Result<Loaded, CliError> {
    Ok(match spec {
        SpecFile::FunctionAlgebra { group: gs } => {
            let g = group(gs)?;
            let a = function_algebra(&g).map_err(input)?;
            Loaded { data: Arc::new(a), classical: Some(Classical::Functions(g)), legs: None }
        }
        SpecFile::GroupAlgebra { group: gs } => {
            let g = group(gs)?;
            let a = group_algebra(&g).map_err(input)?;
            Loaded { data: Arc::new(a), classical: Some(Classical::GroupAlgebra(g)), legs: None }
        }
        SpecFile::Dual { of } => {
            let inner = load_spec(of)?;
            let classical = match inner.classical {
                Some(Classical::Functions(g)) => Some(Classical::GroupAlgebra(g)),
                Some(Classical::GroupAlgebra(g)) => Some(Classical::Functions(g)),
                None => None,
            };
            let d = dual(&inner.data).map_err(input)?;
            Loaded { data: Arc::new(d), classical, legs: None }
        }
        SpecFile::KacPaljutkin => Loaded::plain(kac_paljutkin().map_err(input)?.with_name("KP8")),
        SpecFile::Codouble { of } => {
            let inner = load_spec(of)?;
            let cd = codouble(&inner.data).map_err(input)?;
            let name = format!("codouble({})", inner.data.name());
            Loaded {
                data: Arc::new(cd.data.with_name(name)),
                classical: None,
                legs: Some(CodoubleLegs { k: inner.data, to_k: cd.to_k, to_khat: cd.to_khat }),
            }
        }
        SpecFile::RawStructure { name, mult, unit, star, coproduct, counit, antipode, haar } => {
            let structure = HopfStructure {
                mult: tensor(mult, "multiplication")?,
                unit: vector(unit),
                star: matrix(star)?,
                coproduct: tensor(coproduct, "coproduct")?,
                counit: vector(counit),
                antipode: matrix(antipode)?,
            };
            let name = name.clone().unwrap_or_else(|| "raw".into());
            let data = match haar {
                Some(h) => FqgData::new(structure, vector(h), name),
                None => FqgData::from_structure(structure, name),
            };
            Loaded::plain(data.map_err(|e| CliError::Failure(e.to_string()))?)
        }
        SpecFile::Builtin { name } => {
            let trimmed = name.trim();
            if let Some(inner) = trimmed.strip_prefix("codouble(").and_then(|s| s.strip_suffix(')')) {
                let of = Box::new(SpecFile::Builtin { name: inner.into() });
                return load_spec(&SpecFile::Codouble { of });
            }
            let entry = builtin(trimmed).map_err(input)?;
            let classical = entry.as_group().cloned().map(Classical::Functions);
            let data = entry.into_quantum().map_err(input)?.with_name(trimmed);
            Loaded { data: Arc::new(data), classical, legs: None }
        }
    })
}

fn resolve_points(g: &GroupTable, points: &[Point]) -> Result<Vec<usize>, CliError> {
    points
        .iter()
        .map(|p| match p {
            Point::Index(i) if *i < g.order() => Ok(*i),
            Point::Index(i) => Err(CliError::Input(format!("point {i} out of range for a group of order {}", g.order()))),
            Point::Label(l) => g.find(l).ok_or_else(|| CliError::Input(format!("unknown group element `{l}`"))),
        })
        .collect()
}

pub fn load_morphism(file: &MorphismFile, a: &Loaded) -> Result<QMorphism, CliError> {
    let src = a.data.clone();
    let beta = match file {
        MorphismFile::Evaluation { points } => {
            let pts = resolve_points(a.function_group()?, points)?;
            QMorphism::evaluation(src, &pts).map_err(input)?
        }
        MorphismFile::Representation { matrices } => {
            if !matches!(a.classical, Some(Classical::GroupAlgebra(_))) {
                return Err(CliError::Input("representation morphisms need a group_algebra spec".into()));
            }
            let mats = matrices.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
            QMorphism::new(src, mats).map_err(input)?
        }
        MorphismFile::Matrix { images } => {
            let mats = images.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
            QMorphism::new(src, mats).map_err(input)?
        }
        MorphismFile::Counit => QMorphism::counit(src),
        MorphismFile::Identity => QMorphism::identity(src),
        MorphismFile::SubgroupRestriction { points } => {
            let g = a.function_group()?;
            let pts = g.generated(&resolve_points(g, points)?);
            let (pi, _) = HopfMap::restriction_to_subgroup(src, g, &pts).map_err(input)?;
            pi.to_qmorphism()
        }
    };
    beta.checked().map_err(|e| CliError::Failure(e.to_string()))
}

/// A subgroup argument: a JSON file, a codouble leg name (`K`, `Khat`), or a
/// comma-separated list of generating points (indices or element labels).
pub fn load_subgroup(arg: &str, a: &Loaded) -> Result<SubgroupEmbedding, CliError> {
    let file = if Path::new(arg).is_file() {
        read_json::<SubgroupFile>(Path::new(arg))?
    } else if arg == "K" || arg == "Khat" {
        SubgroupFile::CodoubleLeg { leg: arg.into() }
    } else {
        let points = arg
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map(Point::Index).unwrap_or_else(|_| Point::Label(s.into())))
            .collect();
        SubgroupFile::Points { points }
    };
    let pi = match file {
        SubgroupFile::Points { points } => {
            let g = a.function_group()?;
            let elems = g.generated(&resolve_points(g, &points)?);
            HopfMap::restriction_to_subgroup(a.data.clone(), g, &elems).map_err(input)?.0
        }
        SubgroupFile::Quotient { target, matrix: m } => {
            let target = load_spec(&target)?;
            HopfMap::new(a.data.clone(), target.data, matrix(&m)?).map_err(input)?
        }
        SubgroupFile::CodoubleLeg { leg } => {
            let legs = a.legs.as_ref().ok_or_else(|| CliError::Input("codouble legs need a codouble spec".into()))?;
            match leg.as_str() {
                "K" => HopfMap::new(a.data.clone(), legs.k.clone(), legs.to_k.clone()),
                "Khat" => HopfMap::new(a.data.clone(), legs.k.dual(), legs.to_khat.clone()),
                other => return Err(CliError::Input(format!("unknown codouble leg `{other}`"))),
            }
            .map_err(input)?
        }
    };
    subgroup_from_quotient(&pi).map_err(|e| CliError::Failure(e.to_string()))
}

/// A corep argument: a JSON file or one of the keywords `regular`, `trivial`.
pub fn load_corep<R: Rng>(arg: &str, a: &Loaded, rng: &mut R) -> Result<Corep, CliError> {
    let file = match arg {
        "regular" => CorepFile::Regular,
        "trivial" => CorepFile::Trivial,
        path => read_json(Path::new(path))?,
    };
    build_corep(&file, &a.data, rng)
}

fn build_corep<R: Rng>(file: &CorepFile, a: &Arc<FqgData>, rng: &mut R) -> Result<Corep, CliError> {
    let u = match file {
        CorepFile::Regular => regular_corep(a),
        CorepFile::Trivial => trivial_corep(a),
        CorepFile::Random { max_dim } => random_corep(a, (*max_dim).max(1), rng),
        CorepFile::DualRep { matrices } => {
            let mats = matrices.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
            Corep::from_dual_rep(a.clone(), &mats).map_err(input)?
        }
        CorepFile::Coefficients { dim, coeffs } => Corep::from_coeffs(a.clone(), *dim, matrix(coeffs)?).map_err(input)?,
        CorepFile::Sum { of } => {
            let mut parts = of.iter().map(|f| build_corep(f, a, rng));
            let first = parts.next().ok_or_else(|| CliError::Input("empty corep sum".into()))??;
            parts.try_fold(first, |acc, next| direct_sum(&acc, &next?).map_err(input))?
        }
    };
    let residual = u.unitarity_residual().max(u.comultiplicativity_residual());
    if residual > fqg_core::linalg::tolerance() * 10.0 {
        return Err(CliError::Failure(format!("not a unitary corepresentation (residual {residual:.3e})")));
    }
    Ok(u)
}
