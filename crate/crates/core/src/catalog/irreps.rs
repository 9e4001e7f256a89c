//! Unitary representations of the permutation groups in the catalog.
//!
//! A representation is a list of matrices indexed by group element, which is
//! exactly the image list of a morphism out of the group algebra.

use super::GroupTable;
use crate::fqg::FqgError;
use crate::linalg::{cr, kron, CMatrix};

fn permutations_of(g: &GroupTable) -> Result<&[Vec<usize>], FqgError> {
    g.permutations()
        .ok_or_else(|| FqgError::NotAGroup("group is not given as a permutation group".into()))
}

/// `P(σ)` with `P(σ)e_i = e_{σ(i)}`.
pub fn permutation_matrix(p: &[usize]) -> CMatrix {
    let d = p.len();
    let mut m = CMatrix::zeros(d, d);
    for (i, &j) in p.iter().enumerate() {
        m[(j, i)] = cr(1.0);
    }
    m
}

/// The defining permutation representation.
pub fn permutation_representation(g: &GroupTable) -> Result<Vec<CMatrix>, FqgError> {
    Ok(permutations_of(g)?.iter().map(|p| permutation_matrix(p)).collect())
}

/// The trivial one-dimensional representation.
pub fn trivial_representation(g: &GroupTable) -> Vec<CMatrix> {
    vec![CMatrix::identity(1, 1); g.order()]
}

fn parity(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// The sign character. Panics unless `g` carries permutations.
pub fn sign_representation(g: &GroupTable) -> Vec<CMatrix> {
    let perms = permutations_of(g).expect("sign representation needs permutations");
    perms.iter().map(|p| CMatrix::from_element(1, 1, cr(parity(p)))).collect()
}

/// Orthonormal basis of the sum-zero vectors in `ℂ^d`, as the columns of a
/// `d×(d-1)` matrix.
fn helmert(d: usize) -> CMatrix {
    let mut h = CMatrix::zeros(d, d - 1);
    for k in 1..d {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            h[(i, k - 1)] = cr(1.0 / norm);
        }
        h[(k, k - 1)] = cr(-(k as f64) / norm);
    }
    h
}

/// The standard representation: the permutation representation restricted
/// to the sum-zero subspace.
pub fn standard_representation(g: &GroupTable) -> Result<Vec<CMatrix>, FqgError> {
    let perm = permutation_representation(g)?;
    let d = perm[0].nrows();
    let h = helmert(d);
    Ok(perm.iter().map(|p| h.adjoint() * p * &h).collect())
}

/// Pointwise tensor product of two representations.
pub fn tensor_representations(a: &[CMatrix], b: &[CMatrix]) -> Vec<CMatrix> {
    a.iter().zip(b).map(|(x, y)| kron(x, y)).collect()
}

/// Block-diagonal direct sum of representations.
pub fn sum_representations(reps: &[&[CMatrix]]) -> Vec<CMatrix> {
    let order = reps[0].len();
    (0..order)
        .map(|g| {
            let blocks: Vec<&CMatrix> = reps.iter().map(|r| &r[g]).collect();
            crate::linalg::block_diag(&blocks)
        })
        .collect()
}

/// A named irreducible representation.
#[derive(Debug, Clone)]
pub struct NamedRep {
    pub name: String,
    pub matrices: Vec<CMatrix>,
}

/// All irreducible representations of `S₃` or `S₄`, up to equivalence.
pub fn symmetric_irreps(g: &GroupTable) -> Result<Vec<NamedRep>, FqgError> {
    let perms = permutations_of(g)?;
    let degree = perms[0].len();
    let named = |name: &str, matrices: Vec<CMatrix>| NamedRep { name: name.into(), matrices };
    let sign = sign_representation(g);
    let standard = standard_representation(g)?;
    let mut out = vec![named("trivial", trivial_representation(g)), named("sign", sign.clone())];
    match (degree, g.order()) {
        (3, 6) => out.push(named("standard", standard)),
        (4, 24) => {
            out.push(named("standard", standard.clone()));
            out.push(named("standard⊗sign", tensor_representations(&standard, &sign)));
            out.push(named("two-dimensional", s4_two_dimensional(g)?));
        }
        _ => return Err(FqgError::NotAGroup("irreps are tabulated for S3 and S4 only".into())),
    }
    Ok(out)
}

/// The two-dimensional irrep of `S₄`, pulled back from the standard
/// representation of `S₃` along a surjection `S₄ → S₃`.
fn s4_two_dimensional(g: &GroupTable) -> Result<Vec<CMatrix>, FqgError> {
    let s3 = GroupTable::symmetric(3);
    let onto = g
        .homomorphisms(&s3)?
        .into_iter()
        .find(|f| {
            let mut img = f.clone();
            img.sort_unstable();
            img.dedup();
            img.len() == 6
        })
        .ok_or_else(|| FqgError::NotAGroup("no surjection onto S3".into()))?;
    let std3 = standard_representation(&s3)?;
    Ok(onto.iter().map(|&k| std3[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_diff, tolerance, unitarity_residual};

    fn is_rep(g: &GroupTable, rep: &[CMatrix]) -> bool {
        (0..g.order()).all(|a| {
            unitarity_residual(&rep[a]) < tolerance()
                && (0..g.order()).all(|b| max_diff(&(&rep[a] * &rep[b]), &rep[g.mul(a, b)]) < tolerance())
        })
    }

    /// Character inner product `⟨χ,χ⟩ = 1` certifies irreducibility.
    fn norm_sq_character(rep: &[CMatrix]) -> f64 {
        rep.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / rep.len() as f64
    }

    #[test]
    fn irreps_are_irreducible_and_complete() {
        for g in [GroupTable::symmetric(3), GroupTable::symmetric(4)] {
            let irreps = symmetric_irreps(&g).unwrap();
            let mut dim_sq = 0;
            for r in &irreps {
                assert!(is_rep(&g, &r.matrices), "{}", r.name);
                assert!((norm_sq_character(&r.matrices) - 1.0).abs() < 1e-9, "{}", r.name);
                dim_sq += r.matrices[0].nrows().pow(2);
            }
            assert_eq!(dim_sq, g.order());
        }
    }

    #[test]
    fn permutation_rep_is_a_rep() {
        let s4 = GroupTable::symmetric(4);
        let p = permutation_representation(&s4).unwrap();
        assert!(is_rep(&s4, &p));
        let sum = sum_representations(&[&p, &sign_representation(&s4)]);
        assert!(is_rep(&s4, &sum));
        assert_eq!(sum[0].nrows(), 5);
    }
}
