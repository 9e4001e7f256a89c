use super::*;
use crate::catalog::irreps::symmetric_irreps;
use crate::catalog::GroupTable;
use crate::linalg::{flip, gaussian_matrix, kron, max_diff, rank, seeded_rng, LegSpace};
use proptest::prelude::*;
use std::sync::Arc;

fn small_catalog() -> Vec<FqgData> {
    let mut out = Vec::new();
    for g in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::symmetric(3), GroupTable::quaternion()] {
        out.push(function_algebra(&g).unwrap());
        out.push(group_algebra(&g).unwrap());
    }
    out.push(kac_paljutkin().unwrap());
    out.push(codouble(&function_algebra(&GroupTable::cyclic(2)).unwrap()).unwrap().data);
    out
}

fn cs3() -> Arc<FqgData> {
    Arc::new(function_algebra(&GroupTable::symmetric(3)).unwrap())
}

#[test]
fn z2_axioms_hold_exactly() {
    let a = function_algebra(&GroupTable::cyclic(2)).unwrap();
    let report = a.verify_hopf_axioms();
    assert_eq!(report.max_residual(), 0.0, "{report:?}");
    assert!(a.is_commutative() && a.is_cocommutative());
}

#[test]
fn kac_paljutkin_is_a_genuine_kac_quantum_group() {
    let kp = kac_paljutkin().unwrap();
    let report = kp.verify_hopf_axioms();
    assert!(report.max_residual() <= 1e-12, "{report:?}");
    assert_eq!(kp.dim(), 8);
    let mut sizes: Vec<usize> = kp.block_structure().iter().map(|b| b.size).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 1, 1, 2]);
    assert!(kp.commutativity_defect() > 1e-3);
    assert!(kp.cocommutativity_defect() > 1e-3);
    assert!(report.get("antipode_involutive").unwrap().passed);
    assert!(report.get("haar_tracial").unwrap().passed);
}

#[test]
fn corrupted_antipode_is_detected() {
    let a = function_algebra(&GroupTable::symmetric(3)).unwrap();
    let mut s = a.structure().clone();
    s.antipode[(1, 1)] += C64::new(0.5, 0.0);
    let bad = FqgData::new(s, a.haar().clone(), "bad").unwrap();
    let report = bad.verify_hopf_axioms();
    let check = report.get("antipode").unwrap();
    assert!(!check.passed && check.residual > 1e-3);
    assert!(bad.checked().is_err());
}

#[test]
fn classical_haar_states() {
    for g in [GroupTable::cyclic(5), GroupTable::symmetric(3), GroupTable::dihedral(4)] {
        let n = g.order() as f64;
        let c = function_algebra(&g).unwrap();
        for v in c.haar().iter() {
            assert!((v - C64::new(1.0 / n, 0.0)).norm() < 1e-12);
        }
        let l = group_algebra(&g).unwrap();
        for (i, v) in l.haar().iter().enumerate() {
            let expected = if i == 0 { 1.0 } else { 0.0 };
            assert!((v - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn kac_paljutkin_haar_is_invariant() {
    let kp = kac_paljutkin().unwrap();
    let h = solve_haar(kp.structure()).unwrap();
    assert!((&h - kp.haar()).norm() < 1e-10);
    let report = kp.verify_hopf_axioms();
    assert!(report.get("haar_left_invariance").unwrap().residual <= 1e-10);
    assert!(report.get("haar_right_invariance").unwrap().residual <= 1e-10);
}

#[test]
fn haar_is_unique_for_catalog() {
    for a in small_catalog() {
        assert_eq!(haar_solution_dim(a.structure()), 1, "{}", a.name());
    }
}

#[test]
fn antipode_is_determined_by_haar() {
    for a in small_catalog() {
        let s = super::constructors::antipode_from_haar_for_tests(&a).unwrap();
        assert!(max_diff(&s, a.antipode_matrix()) < 1e-9, "{}", a.name());
    }
}

#[test]
fn gns_of_z2() {
    let c = function_algebra(&GroupTable::cyclic(2)).unwrap();
    let g = c.gns();
    assert_eq!(g.dim(), 2);
    for i in 0..2 {
        let l = g.left_basis(i);
        assert!(max_diff(&(l * l), l) < 1e-12);
        assert!(max_diff(l, &l.adjoint()) < 1e-12);
        assert!(rank(l) == 1);
    }
    assert!(max_diff(&(g.left_basis(0) + g.left_basis(1)), &CMatrix::identity(2, 2)) < 1e-12);

    let l = group_algebra(&GroupTable::cyclic(2)).unwrap();
    let g = l.gns();
    let flip_op = g.left_basis(1);
    assert!(max_diff(g.left_basis(0), &CMatrix::identity(2, 2)) < 1e-12);
    assert!(max_diff(&(flip_op * flip_op), &CMatrix::identity(2, 2)) < 1e-12);
    assert!(flip_op.trace().norm() < 1e-12);
}

#[test]
fn gns_is_a_faithful_star_representation() {
    for a in small_catalog() {
        let g = a.gns();
        let n = a.dim();
        assert_eq!(g.dim(), n);
        for i in 0..n {
            let li = g.left_basis(i);
            let star = g.left(&a.star(&a.basis(i)));
            assert!(max_diff(&li.adjoint(), &star) < 1e-9, "{}", a.name());
            for j in 0..n {
                let prod = g.left(&a.mul(&a.basis(i), &a.basis(j)));
                assert!(max_diff(&(li * g.left_basis(j)), &prod) < 1e-9);
            }
        }
        let mut stacked = CMatrix::zeros(n * n, n);
        for i in 0..n {
            stacked.set_column(i, &crate::linalg::flatten(g.left_basis(i)));
        }
        assert_eq!(rank(&stacked), n);
    }
}

#[test]
fn w_for_function_algebra_permutes_pairs() {
    let g = GroupTable::symmetric(3);
    let c = function_algebra(&g).unwrap();
    let w = c.w();
    let n = g.order();
    let m = w.matrix();
    for x in 0..n {
        for y in 0..n {
            let target = g.mul(x, g.inverse(y)) * n + y;
            assert!((m[(target, x * n + y)].norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn w_of_trivial_group_is_one() {
    let t = function_algebra(&GroupTable::cyclic(1)).unwrap();
    let w = t.w();
    assert!((w.matrix()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn w_residuals_for_catalog() {
    for a in small_catalog() {
        let r = build_w(&a).unwrap().residuals(&a);
        assert!(r.max() <= 1e-9, "{} {r:?}", a.name());
    }
}

#[test]
fn dual_of_function_algebra_is_group_algebra() {
    for g in [GroupTable::cyclic(2), GroupTable::symmetric(3)] {
        let d = dual(&function_algebra(&g).unwrap()).unwrap();
        let l = group_algebra(&g).unwrap();
        assert!(d.mult().max_diff(l.mult()) < 1e-12);
        assert!(d.coproduct().max_diff(l.coproduct()) < 1e-12);
        assert!(max_diff(d.star_matrix(), l.star_matrix()) < 1e-12);
        assert!(max_diff(d.antipode_matrix(), l.antipode_matrix()) < 1e-12);
        assert!((d.haar() - l.haar()).norm() < 1e-12);
    }
}

#[test]
fn pontryagin_and_kac_paljutkin_self_duality() {
    for n in 2..=6 {
        let c = function_algebra(&GroupTable::cyclic(n)).unwrap();
        let d = dual(&c).unwrap();
        assert!(d.invariants().matches(&c.invariants()), "Z{n} {:?} {:?}", d.invariants(), c.invariants());
    }
    let kp = kac_paljutkin().unwrap();
    assert!(dual(&kp).unwrap().invariants().matches(&kp.invariants()));
}

#[test]
fn biduality_is_exact() {
    for a in small_catalog() {
        assert!(biduality_residual(&a) < 1e-12, "{}", a.name());
    }
}

/// `σ(W*(1⊗λ(f))W)` is the coproduct of the dual with its legs swapped.
#[test]
fn dual_coproduct_from_w_is_flipped() {
    for a in [function_algebra(&GroupTable::symmetric(3)).unwrap(), kac_paljutkin().unwrap()] {
        let n = a.dim();
        let g = a.gns();
        let w = a.w();
        let d = a.dual();
        let sigma = flip(&LegSpace::new(&[n, n]).unwrap(), 1, 2).unwrap();
        let sigma = sigma.matrix();
        let one = CMatrix::identity(n, n);
        let (mut flipped, mut straight) = (0.0f64, 0.0f64);
        for i in 0..n {
            let x = kron(&one, g.lambda_basis(i));
            let lhs = sigma * (w.matrix().adjoint() * x * w.matrix()) * sigma;
            let mut same = CMatrix::zeros(n * n, n * n);
            let mut swapped = CMatrix::zeros(n * n, n * n);
            for &(j, k, c) in d.coproduct_basis(i) {
                same += kron(g.lambda_basis(j), g.lambda_basis(k)) * c;
                swapped += kron(g.lambda_basis(k), g.lambda_basis(j)) * c;
            }
            flipped = flipped.max(max_diff(&lhs, &swapped));
            straight = straight.max(max_diff(&lhs, &same));
        }
        assert!(flipped < 1e-9, "{} {flipped}", a.name());
        if !d.is_cocommutative() {
            assert!(straight > 1e-3, "{} {straight}", a.name());
        }
    }
}

#[test]
fn function_algebra_shapes() {
    let z2 = function_algebra(&GroupTable::cyclic(2)).unwrap();
    assert_eq!(z2.dim(), 2);
    let s3 = function_algebra(&GroupTable::symmetric(3)).unwrap();
    assert_eq!(s3.dim(), 6);
    assert!(s3.is_commutative() && s3.cocommutativity_defect() > 1e-3);
    let l = group_algebra(&GroupTable::symmetric(3)).unwrap();
    assert!(l.is_cocommutative() && l.commutativity_defect() > 1e-3);
    let bad = GroupTable::new(vec![vec![0, 1], vec![0, 1]], None);
    assert!(bad.is_err());
}

#[test]
fn codouble_of_z2_is_klein_four() {
    let cd = codouble(&function_algebra(&GroupTable::cyclic(2)).unwrap()).unwrap();
    assert_eq!(cd.data.dim(), 4);
    assert!(cd.data.verify_hopf_axioms().passed());
    let klein = function_algebra(&GroupTable::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4)).unwrap();
    assert!(klein.is_commutative() && klein.is_cocommutative());
    assert!(cd.data.invariants().matches(&klein.invariants()));
    assert_eq!(cd.data.invariants().character_orders, Some(vec![1, 2, 2, 2]));
}

#[test]
fn regular_corep_basics() {
    let t = Arc::new(function_algebra(&GroupTable::cyclic(1)).unwrap());
    let u = regular_corep(&t);
    assert_eq!(u.carrier_dim(), 1);
    assert!((u.entry(0, 0)[0] - C64::new(1.0, 0.0)).norm() < 1e-14);

    let z2 = Arc::new(function_algebra(&GroupTable::cyclic(2)).unwrap());
    assert_eq!(regular_corep(&z2).comultiplicativity_residual(), 0.0);

    for a in small_catalog() {
        let a = Arc::new(a);
        let n = a.dim();
        let u = regular_corep(&a);
        let mut span = CMatrix::zeros(n, n * n);
        let mut col = 0;
        for p in 0..n {
            for q in 0..n {
                let mut om = CMatrix::zeros(n, n);
                om[(p, q)] = C64::new(1.0, 0.0);
                span.set_column(col, &u.slice(&om));
                col += 1;
            }
        }
        assert_eq!(rank(&span), n, "{}", a.name());
        let mut dual_span = CMatrix::zeros(n * n, n);
        for (i, m) in u.dual_rep().iter().enumerate() {
            dual_span.set_column(i, &crate::linalg::flatten(m));
        }
        assert_eq!(rank(&dual_span), n, "{}", a.name());
    }
}

#[test]
fn regular_corep_intertwiners_match_character_theory() {
    let a = cs3();
    let reg = regular_corep(&a);
    assert_eq!(intertwiners(&reg, &reg).unwrap().dim(), 6);
    let irreps = symmetric_irreps(&GroupTable::symmetric(3)).unwrap();
    let coreps: Vec<Corep> = irreps.iter().map(|r| Corep::from_dual_rep(a.clone(), &r.matrices).unwrap()).collect();
    for (i, u) in coreps.iter().enumerate() {
        for (j, v) in coreps.iter().enumerate() {
            let expected = usize::from(i == j);
            assert_eq!(intertwiners(u, v).unwrap().dim(), expected, "{} {}", irreps[i].name, irreps[j].name);
        }
        let uu = direct_sum(u, u).unwrap();
        assert_eq!(intertwiners(&uu, &uu).unwrap().dim(), 4);
    }
}

#[test]
fn direct_sum_with_trivial() {
    let a = cs3();
    let reg = regular_corep(&a);
    let s = direct_sum(&reg, &trivial_corep(&a)).unwrap();
    assert_eq!(s.carrier_dim(), 7);
    assert!((s.entry(6, 6) - a.unit()).norm() < 1e-14);
    assert!(s.comultiplicativity_residual() <= reg.comultiplicativity_residual() + 1e-9);
    let other = Arc::new(kac_paljutkin().unwrap());
    assert!(direct_sum(&reg, &trivial_corep(&other)).is_err());
}

#[test]
fn intertwiner_methods_agree() {
    let a = Arc::new(kac_paljutkin().unwrap());
    let mut rng = seeded_rng(11);
    let u = random_corep(&a, 3, &mut rng);
    let v = direct_sum(&u, &random_corep(&a, 2, &mut rng)).unwrap();
    let by_null = intertwiners_with(&u, &v, IntertwinerMethod::Nullspace).unwrap();
    let by_haar = intertwiners_with(&u, &v, IntertwinerMethod::Haar).unwrap();
    assert!(by_null.same_span(&by_haar));
}

#[test]
fn antipode_slice_examples() {
    let mut rng = seeded_rng(2);
    for a in [cs3(), Arc::new(kac_paljutkin().unwrap())] {
        assert_eq!(antipode_slice_check(&trivial_corep(&a), &CMatrix::identity(1, 1)), 0.0);
        let u = regular_corep(&a);
        let n = a.dim();
        for _ in 0..20 {
            let omega = gaussian_matrix(&mut rng, n, n);
            assert!(antipode_slice_check(&u, &omega) <= 1e-9);
        }
    }
}

fn catalog_strategy() -> impl Strategy<Value = usize> {
    0..small_catalog().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn catalog_axioms_hold(idx in catalog_strategy()) {
        let a = &small_catalog()[idx];
        let report = a.verify_hopf_axioms();
        prop_assert!(report.passed(), "{} {:?}", a.name(), report.first_failure());
    }

    #[test]
    fn random_coreps_are_unitary_comultiplicative(idx in catalog_strategy(), seed in 0u64..1000) {
        let a = Arc::new(small_catalog().swap_remove(idx));
        let mut rng = seeded_rng(seed);
        let u = random_corep(&a, 3, &mut rng);
        prop_assert!(u.unitarity_residual() <= 1e-9);
        prop_assert!(u.comultiplicativity_residual() <= 1e-9);
        let hom = intertwiners(&u, &u).unwrap();
        let id = crate::linalg::flatten(&CMatrix::identity(u.carrier_dim(), u.carrier_dim()));
        prop_assert!(hom.contains_subspace(&crate::linalg::SubspaceBasis::span_of(id.len(), [id].iter())));
    }

    #[test]
    fn conjugated_coreps_are_equivalent(seed in 0u64..1000) {
        let a = cs3();
        let mut rng = seeded_rng(seed);
        let u = random_corep(&a, 3, &mut rng);
        let t = crate::linalg::random_unitary(&mut rng, u.carrier_dim());
        let v = u.conjugated(&t);
        prop_assert!(v.comultiplicativity_residual() <= 1e-9);
        prop_assert_eq!(intertwiners(&u, &v).unwrap().dim(), intertwiners(&u, &u).unwrap().dim());
    }

    #[test]
    fn coproduct_is_multiplicative_on_random_elements(seed in 0u64..1000) {
        let kp = kac_paljutkin().unwrap();
        let mut rng = seeded_rng(seed);
        let x = gaussian_matrix(&mut rng, 8, 1).column(0).into_owned();
        let y = gaussian_matrix(&mut rng, 8, 1).column(0).into_owned();
        let lhs = kp.coproduct_of(&kp.mul(&x, &y));
        let dx = kp.coproduct_of(&x);
        let dy = kp.coproduct_of(&y);
        let rhs = kp.mul2(&dx, &dy);
        let diff = lhs.iter().zip(&rhs).fold(0.0f64, |m, (p, q)| m.max((p - q).norm()));
        prop_assert!(diff <= 1e-9);
        let s_star = kp.antipode(&kp.star(&kp.antipode(&kp.star(&x))));
        prop_assert!((s_star - &x).norm() <= 1e-9);
    }
}
