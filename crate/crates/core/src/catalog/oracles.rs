//! Brute-force classical oracles. Each result is re-verified against its
//! defining property before it is returned.

use super::GroupTable;
use crate::fqg::FqgError;
use crate::linalg::{max_diff, CMatrix};
use std::collections::BTreeSet;

/// Tagged oracle output.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleResult {
    GeneratedSubgroup(Vec<usize>),
    RepresentationKernel(Vec<usize>),
    /// The partition of the group into cosets `g·H`.
    CosetFunctions(Vec<Vec<usize>>),
    HomomorphismList(Vec<Vec<usize>>),
}

/// Closure of `points` and their inverses under products, by iterating
/// `S ← S ∪ S·S` until nothing changes.
pub fn oracle_generated_subgroup(g: &GroupTable, points: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    for &p in points {
        set.insert(p);
        set.insert(g.inverse(p));
    }
    loop {
        let current: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &a in &current {
            for &b in &current {
                set.insert(g.mul(a, b));
            }
        }
        if set.len() == before {
            break;
        }
    }
    let out: Vec<usize> = set.into_iter().collect();
    verify_subgroup(g, &out);
    for p in points {
        assert!(out.contains(p), "generated subgroup misses a generator");
    }
    out
}

fn verify_subgroup(g: &GroupTable, elems: &[usize]) {
    let set: BTreeSet<usize> = elems.iter().copied().collect();
    assert!(set.contains(&0), "subgroup misses the identity");
    for &a in elems {
        assert!(set.contains(&g.inverse(a)), "subgroup not closed under inverses");
        for &b in elems {
            assert!(set.contains(&g.mul(a, b)), "subgroup not closed under products");
        }
    }
}

/// `{g : ρ(g) = 1}` for a representation given by one matrix per element.
pub fn oracle_representation_kernel(g: &GroupTable, rep: &[CMatrix]) -> Result<Vec<usize>, FqgError> {
    if rep.len() != g.order() {
        return Err(FqgError::Dimension { what: "representation", expected: g.order(), found: rep.len() });
    }
    let tol = crate::linalg::tolerance() * 10.0;
    for a in 0..g.order() {
        for b in 0..g.order() {
            let defect = max_diff(&(&rep[a] * &rep[b]), &rep[g.mul(a, b)]);
            if defect > tol {
                return Err(FqgError::Postcondition { name: "representation_multiplicative".into(), residual: defect });
            }
        }
    }
    let d = rep[0].nrows();
    let id = CMatrix::identity(d, d);
    let kernel: Vec<usize> = (0..g.order()).filter(|&a| max_diff(&rep[a], &id) <= tol).collect();
    verify_subgroup(g, &kernel);
    Ok(kernel)
}

/// All homomorphisms `g → k` as image lists, each checked on every pair.
pub fn oracle_homomorphisms(g: &GroupTable, k: &GroupTable) -> Result<Vec<Vec<usize>>, FqgError> {
    if g.order() > 24 || k.order() > 24 {
        return Err(FqgError::NotAGroup("homomorphism oracle supports orders ≤ 24".into()));
    }
    let homs = g.homomorphisms(k)?;
    for f in &homs {
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(f[g.mul(a, b)], k.mul(f[a], f[b]), "not a homomorphism");
            }
        }
    }
    let distinct: BTreeSet<&Vec<usize>> = homs.iter().collect();
    assert_eq!(distinct.len(), homs.len(), "duplicate homomorphisms");
    Ok(homs)
}

/// The cosets `a·H` of a subgroup, sorted by smallest element. Functions
/// constant on these are exactly the functions with `f(a·h) = f(a)`.
pub fn oracle_coset_functions(g: &GroupTable, h: &[usize]) -> Vec<Vec<usize>> {
    verify_subgroup(g, h);
    let mut seen = vec![false; g.order()];
    let mut cosets = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        let mut coset: Vec<usize> = h.iter().map(|&x| g.mul(a, x)).collect();
        coset.sort_unstable();
        for &x in &coset {
            seen[x] = true;
        }
        cosets.push(coset);
    }
    assert_eq!(cosets.iter().map(Vec::len).sum::<usize>(), g.order());
    cosets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::irreps::sign_representation;

    #[test]
    fn generated_subgroups_in_s3() {
        let s3 = GroupTable::symmetric(3);
        let t = s3.find("(12)").unwrap();
        let r = s3.find("(123)").unwrap();
        assert_eq!(oracle_generated_subgroup(&s3, &[t]), vec![0, t].into_iter().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>());
        assert_eq!(oracle_generated_subgroup(&s3, &[t, r]).len(), 6);
        assert_eq!(oracle_generated_subgroup(&s3, &[]), vec![0]);
        for sub in s3.subgroups() {
            assert_eq!(oracle_generated_subgroup(&s3, &sub), sub);
        }
    }

    #[test]
    fn kernels() {
        let s3 = GroupTable::symmetric(3);
        let sign = sign_representation(&s3);
        let mut k = oracle_representation_kernel(&s3, &sign).unwrap();
        k.sort_unstable();
        let labels: BTreeSet<&str> = k.iter().map(|&a| s3.label(a)).collect();
        assert_eq!(labels, BTreeSet::from(["e", "(123)", "(132)"]));
        let trivial = vec![CMatrix::identity(1, 1); 6];
        assert_eq!(oracle_representation_kernel(&s3, &trivial).unwrap().len(), 6);
        let perm = crate::catalog::irreps::permutation_representation(&s3).unwrap();
        assert_eq!(oracle_representation_kernel(&s3, &perm).unwrap(), vec![0]);
        let mut bad = perm.clone();
        bad[1] = CMatrix::identity(3, 3);
        assert!(oracle_representation_kernel(&s3, &bad).is_err());
    }

    #[test]
    fn homomorphism_lists() {
        let z2 = GroupTable::cyclic(2);
        assert_eq!(oracle_homomorphisms(&z2, &z2).unwrap().len(), 2);
        assert_eq!(oracle_homomorphisms(&GroupTable::symmetric(3), &z2).unwrap().len(), 2);
        assert_eq!(oracle_homomorphisms(&GroupTable::cyclic(3), &z2).unwrap().len(), 1);
    }

    #[test]
    fn cosets_of_rotations() {
        let s3 = GroupTable::symmetric(3);
        let h = oracle_generated_subgroup(&s3, &[s3.find("(123)").unwrap()]);
        let cosets = oracle_coset_functions(&s3, &h);
        assert_eq!(cosets.len(), 2);
    }
}
