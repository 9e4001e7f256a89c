//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use fqg_core::catalog::irreps::{sum_representations, symmetric_irreps};
use fqg_core::catalog::{
    builtin_group, builtin_quantum, oracle_generated_subgroup, oracle_homomorphisms, oracle_representation_kernel,
    GroupTable,
};
use fqg_core::fqg::{
    codouble, direct_sum, function_algebra, random_corep, random_representation, regular_corep,
    solve_haar, Corep, FqgData,
};
use fqg_core::hopf::{
    beta_restriction, build_x, compose_with_hom, generated_subgroup, hopf_image, is_generating,
    promote_intertwiners_check, recover_x_from_theta, separation_check, subgroup_from_quotient, HopfMap, QMorphism,
    SubgroupEmbedding,
};
use fqg_core::linalg::{max_diff, random_unitary, seeded_rng, CMatrix};
use rand::Rng;
use std::sync::Arc;
use std::time::Instant;

/// Residual tolerance for every numerical criterion.
const TOL: f64 = 1e-9;
/// Wall-clock limit for the axiom suite.
const AXIOM_SUITE_SECONDS: f64 = 60.0;
/// Classical groups of the catalog.
const GROUPS: [&str; 9] = ["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "S4", "D4", "Q8"];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Criterion = fn() -> Outcome;

fn group(name: &str) -> GroupTable {
    builtin_group(name).expect("catalog group")
}

fn quantum(name: &str) -> Arc<FqgData> {
    Arc::new(builtin_quantum(name).expect("catalog object"))
}

/// Every catalog quantum group, in construction order.
fn catalog() -> Vec<Arc<FqgData>> {
    let mut out = Vec::new();
    for g in GROUPS {
        out.push(quantum(&format!("C({g})")));
        out.push(quantum(&format!("C[{g}]")));
    }
    out.push(quantum("KP8"));
    out.push(quantum("codouble(C(Z2))"));
    out.push(quantum("codouble(C(S3))"));
    out
}

fn random_subset<R: Rng>(rng: &mut R, order: usize) -> Vec<usize> {
    let size = rng.random_range(1..=3.min(order));
    (0..size).map(|_| rng.random_range(0..order)).collect()
}

fn embedding_of(a: &Arc<FqgData>, g: &GroupTable, elems: &[usize]) -> SubgroupEmbedding {
    let (pi, _) = HopfMap::restriction_to_subgroup(a.clone(), g, elems).expect("subgroup");
    subgroup_from_quotient(&pi).expect("embedding")
}

fn c1_axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let objects = catalog();
    for a in &objects {
        let report = a.verify_hopf_axioms();
        let haar = solve_haar(a.structure()).map(|h| (&h - a.haar()).norm());
        let residual = report.max_residual().max(*haar.as_ref().unwrap_or(&f64::INFINITY));
        worst = worst.max(residual);
        if residual > TOL || !report.passed() {
            failures.push(a.name().to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        failures.is_empty() && secs <= AXIOM_SUITE_SECONDS,
        format!(
            "{} objects, max residual {worst:.1e}, {secs:.1} s (limit {AXIOM_SUITE_SECONDS} s){}",
            objects.len(),
            if failures.is_empty() { String::new() } else { format!(", failing: {failures:?}") }
        ),
    )
}

fn c2_multiplicative_unitary_suite() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let objects = catalog();
    for a in &objects {
        let r = a.w().residuals(a);
        worst = worst.max(r.max());
        if r.max() > TOL {
            failures.push(format!("{} {r:?}", a.name()));
        }
    }
    Outcome::new(failures.is_empty(), format!("{} objects, max residual {worst:.1e} {failures:?}", objects.len()))
}

fn c3_classical_soundness() -> Outcome {
    let mut rng = seeded_rng(3);
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for name in GROUPS {
        let g = group(name);
        let a = quantum(&format!("C({name})"));
        let mut subsets: Vec<Vec<usize>> = (0..g.order()).map(|x| vec![x]).collect();
        subsets.extend((0..50).map(|_| random_subset(&mut rng, g.order())));
        for p in subsets {
            runs += 1;
            let beta = QMorphism::evaluation(a.clone(), &p).expect("evaluation");
            let expected = oracle_generated_subgroup(&g, &p);
            let (h, _) = g.subgroup_table(&expected).expect("subgroup");
            let reference = function_algebra(&h).expect("C(H)").invariants();
            match hopf_image(&beta) {
                Ok(img) if img.dim() == expected.len() && img.image_group.invariants().matches(&reference) => {}
                Ok(img) => mismatches.push(format!("{name} {p:?}: dim {} vs {}", img.dim(), expected.len())),
                Err(e) => mismatches.push(format!("{name} {p:?}: {e}")),
            }
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{runs} evaluations, {} mismatches {mismatches:?}", mismatches.len()))
}

fn c4_dual_classical_soundness() -> Outcome {
    let mut rng = seeded_rng(4);
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for name in ["S3", "S4"] {
        let g = group(name);
        let a = quantum(&format!("C[{name}]"));
        let irreps = symmetric_irreps(&g).expect("irreps");
        let mut reps: Vec<(String, Vec<CMatrix>)> =
            irreps.iter().map(|r| (r.name.clone(), r.matrices.clone())).collect();
        for _ in 0..20 {
            let count = rng.random_range(2..=3);
            let picks: Vec<usize> = (0..count).map(|_| rng.random_range(0..irreps.len())).collect();
            let parts: Vec<&[CMatrix]> = picks.iter().map(|&k| irreps[k].matrices.as_slice()).collect();
            let sum = sum_representations(&parts);
            let t = random_unitary(&mut rng, sum[0].nrows());
            let sum: Vec<CMatrix> = sum.iter().map(|m| &t * m * t.adjoint()).collect();
            let label = picks.iter().map(|&k| irreps[k].name.as_str()).collect::<Vec<_>>().join("+");
            reps.push((label, sum));
        }
        for (label, rho) in reps {
            runs += 1;
            let kernel = oracle_representation_kernel(&g, &rho).expect("representation");
            let faithful = kernel.len() == 1;
            let beta = QMorphism::new(a.clone(), rho).expect("morphism");
            let verdict = is_generating(&beta).map(|c| c.generating);
            let dim = hopf_image(&beta).map(|i| i.dim());
            match (verdict, dim) {
                (Ok(gen), Ok(d)) if gen == faithful && d == g.order() / kernel.len() => {}
                (v, d) => mismatches.push(format!("{name} {label}: {v:?} {d:?} kernel {}", kernel.len())),
            }
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{runs} representations, {} mismatches {mismatches:?}", mismatches.len()))
}

/// Small catalog objects used for randomized morphism tests.
fn morphism_sources() -> Vec<Arc<FqgData>> {
    ["C(S3)", "C[S3]", "KP8", "C(Z4)", "C[Z4]", "C(D4)", "C[Q8]", "codouble(C(Z2))", "C(Z6)", "C[D4]"]
        .iter()
        .map(|n| quantum(n))
        .collect()
}

fn random_morphism<R: Rng>(sources: &[Arc<FqgData>], rng: &mut R) -> QMorphism {
    let a = &sources[rng.random_range(0..sources.len())];
    let beta = QMorphism::new(a.clone(), random_representation(a, 3, rng)).expect("morphism");
    if rng.random_bool(0.4) {
        let other = QMorphism::new(a.clone(), random_representation(a, 2, rng)).expect("morphism");
        beta.direct_sum(&other).expect("same source")
    } else {
        beta
    }
}

fn c5_characterisation_coherence() -> Outcome {
    let sources = morphism_sources();
    let mut rng = seeded_rng(5);
    let (mut disagreements, mut contradictions, mut generating) = (0, 0, 0);
    let mut errors = Vec::new();
    for _ in 0..200 {
        let beta = random_morphism(&sources, &mut rng);
        match is_generating(&beta) {
            Ok(cert) => {
                let ii = cert.m1_dim == cert.source_dim;
                let iii = cert.fixed_point_dim == 1;
                disagreements += usize::from(ii != iii || cert.generating != ii);
                contradictions += cert.contradictions;
                generating += usize::from(cert.generating);
            }
            Err(e) => errors.push(format!("{}: {e}", beta.source().name())),
        }
    }
    Outcome::new(
        disagreements == 0 && contradictions == 0 && errors.is_empty(),
        format!(
            "200 morphisms ({generating} generating), (ii)/(iii) disagreements {disagreements}, \
             (iv) contradictions {contradictions} {errors:?}"
        ),
    )
}

fn c6_four_algebras() -> Outcome {
    let mut pairs = 0;
    let mut failures = Vec::new();
    for name in ["S3", "S4", "D4", "Q8"] {
        let g = group(name);
        let a = quantum(&format!("C({name})"));
        let subs = g.subgroups();
        let embs: Vec<SubgroupEmbedding> = subs.iter().map(|h| embedding_of(&a, &g, h)).collect();
        for i in 0..subs.len() {
            for j in i..subs.len() {
                pairs += 1;
                let mut union = subs[i].clone();
                union.extend(&subs[j]);
                let expected = oracle_generated_subgroup(&g, &union).len();
                match generated_subgroup(&[embs[i].clone(), embs[j].clone()]) {
                    Ok(gs) if gs.dim() == expected && gs.steps.iter().all(|s| s.agree()) => {}
                    Ok(gs) => failures.push(format!("{name} {i},{j}: {} vs {expected} {:?}", gs.dim(), gs.steps)),
                    Err(e) => failures.push(format!("{name} {i},{j}: {e}")),
                }
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("{pairs} subgroup pairs, {} failures {failures:?}", failures.len()))
}

/// Hopf maps `φ: C(K) → C(G)` with a random morphism out of `C(G)`.
fn c7_composition_identity() -> Outcome {
    let mut rng = seeded_rng(7);
    let mut maps: Vec<HopfMap> = Vec::new();
    for (gn, kn) in [("S3", "Z2"), ("S4", "S3"), ("Z6", "Z3"), ("D4", "Z2"), ("S3", "S3"), ("Q8", "Z2")] {
        let (g, k) = (group(gn), group(kn));
        let (cg, ck) = (quantum(&format!("C({gn})")), quantum(&format!("C({kn})")));
        for f in oracle_homomorphisms(&g, &k).expect("homomorphisms").iter().take(6) {
            maps.push(HopfMap::pullback(ck.clone(), cg.clone(), f).expect("pullback"));
        }
    }
    let s3 = Arc::new(function_algebra(&group("S3")).expect("C(S3)"));
    let cd = codouble(&s3).expect("codouble");
    let double = Arc::new(cd.data);
    maps.push(HopfMap::new(double, s3, cd.to_k).expect("projection"));
    let kp = quantum("KP8");
    maps.push(HopfMap::identity(kp));

    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for k in 0..50 {
        let phi = &maps[k % maps.len()];
        let target = phi.target().clone();
        let beta = QMorphism::new(target.clone(), random_representation(&target, 3, &mut rng)).expect("morphism");
        match compose_with_hom(&beta, phi) {
            Ok(r) => worst = worst.max(r.identity_residual),
            Err(e) => errors.push(e.to_string()),
        }
    }
    Outcome::new(worst <= TOL && errors.is_empty(), format!("50 pairs, max residual {worst:.1e} {errors:?}"))
}

fn c8_separation() -> Outcome {
    let mut checked = 0;
    let mut inconsistent = Vec::new();
    let mut witnessed = false;
    for (gn, kn) in [("S3", "Z2"), ("Z4", "Z2"), ("S4", "S3")] {
        let (g, k) = (group(gn), group(kn));
        let (cg, ck) = (quantum(&format!("C({gn})")), quantum(&format!("C({kn})")));
        let homs = oracle_homomorphisms(&g, &k).expect("homomorphisms");
        let maps: Vec<HopfMap> = homs.iter().map(|f| HopfMap::pullback(ck.clone(), cg.clone(), f).unwrap()).collect();
        let gens = g.generators();
        let betas = [
            QMorphism::evaluation(cg.clone(), &gens).expect("generating evaluation"),
            QMorphism::evaluation(cg.clone(), &[0]).expect("evaluation at e"),
        ];
        for beta in &betas {
            for i in 0..maps.len() {
                for j in i..maps.len() {
                    checked += 1;
                    match separation_check(beta, &maps[i], &maps[j]) {
                        Ok(r) => {
                            if !r.consistent {
                                inconsistent.push(format!("{gn}->{kn} {i},{j}"));
                            }
                            witnessed |= !r.generating && r.witnesses_non_separation();
                        }
                        Err(e) => inconsistent.push(format!("{gn}->{kn} {i},{j}: {e}")),
                    }
                }
            }
        }
    }
    Outcome::new(
        inconsistent.is_empty() && witnessed,
        format!("{checked} pairs, violations {inconsistent:?}, non-generating witness found: {witnessed}"),
    )
}

fn promotion_family(
    label: &str,
    a: &Arc<FqgData>,
    family: &[SubgroupEmbedding],
    seed: u64,
    failures: &mut Vec<String>,
) -> usize {
    let mut rng = seeded_rng(seed);
    let reg = regular_corep(a);
    let reg2 = direct_sum(&reg, &reg).expect("sum");
    let mut cases: Vec<(String, Corep, Corep)> =
        vec![("reg".into(), reg.clone(), reg.clone()), ("reg+reg".into(), reg2.clone(), reg2)];
    for k in 0..10 {
        cases.push((format!("random {k}"), random_corep(a, 4, &mut rng), random_corep(a, 4, &mut rng)));
    }
    for (name, u, v) in &cases {
        match promote_intertwiners_check(family, u, v) {
            Ok(r) if r.equal && r.family_generates() => {}
            Ok(r) => failures.push(format!("{label} {name}: {} vs {}", r.hom_g_dim, r.intersection_dim)),
            Err(e) => failures.push(format!("{label} {name}: {e}")),
        }
    }
    cases.len()
}

fn c9_promotion() -> Outcome {
    let mut failures = Vec::new();
    let g = group("S3");
    let a = quantum("C(S3)");
    let e12 = embedding_of(&a, &g, &g.generated(&[g.find("(12)").unwrap()]));
    let e123 = embedding_of(&a, &g, &g.generated(&[g.find("(123)").unwrap()]));
    let mut cases = promotion_family("S3", &a, &[e12.clone(), e123], 9, &mut failures);

    let k = Arc::new(function_algebra(&g).expect("C(S3)"));
    let cd = codouble(&k).expect("codouble");
    let double = Arc::new(cd.data);
    let kk = HopfMap::new(double.clone(), k.clone(), cd.to_k).expect("K");
    let khat = HopfMap::new(double.clone(), k.dual(), cd.to_khat).expect("K hat");
    let family = [subgroup_from_quotient(&kk).expect("K"), subgroup_from_quotient(&khat).expect("K hat")];
    cases += promotion_family("codouble", &double, &family, 10, &mut failures);

    let reg = regular_corep(&a);
    let strict = match promote_intertwiners_check(&[e12], &reg, &reg) {
        Ok(r) => !r.equal && r.contained && r.intersection_dim > r.hom_g_dim,
        Err(_) => false,
    };
    Outcome::new(
        failures.is_empty() && strict,
        format!("{cases} (u,v) cases, failures {failures:?}, strict inclusion for <(12)>: {strict}"),
    )
}

fn c10_round_trip() -> Outcome {
    let sources = morphism_sources();
    let mut rng = seeded_rng(10);
    let (mut round, mut restriction) = (0.0f64, 0.0f64);
    let mut errors = Vec::new();
    for _ in 0..20 {
        let beta = random_morphism(&sources, &mut rng);
        let run = || -> Result<(f64, f64), fqg_core::hopf::HopfError> {
            let sub = build_x(&beta)?;
            let theta = sub.theta()?;
            let rec = recover_x_from_theta(&theta, beta.source())?;
            let y = beta_restriction(&regular_corep(beta.source()), &sub)?;
            Ok((max_diff(&rec.x_matrix, sub.x_matrix()), max_diff(&y.y, sub.x_matrix())))
        };
        match run() {
            Ok((r, y)) => {
                round = round.max(r);
                restriction = restriction.max(y);
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    Outcome::new(
        round <= TOL && restriction <= TOL && errors.is_empty(),
        format!("20 morphisms, round-trip {round:.1e}, regular restriction vs X {restriction:.1e} {errors:?}"),
    )
}

fn c11_universal_property() -> Outcome {
    let mut rng = seeded_rng(11);
    let (mut checks, mut failures) = (0, Vec::new());
    for name in GROUPS {
        let g = group(name);
        if g.order() > 12 {
            continue;
        }
        let a = quantum(&format!("C({name})"));
        let subs = g.subgroups();
        let embs: Vec<(HopfMap, SubgroupEmbedding)> = subs
            .iter()
            .map(|h| {
                let (pi, _) = HopfMap::restriction_to_subgroup(a.clone(), &g, h).expect("subgroup");
                let emb = subgroup_from_quotient(&pi).expect("embedding");
                (pi, emb)
            })
            .collect();
        let mut subsets: Vec<Vec<usize>> = (0..g.order()).map(|x| vec![x]).collect();
        subsets.extend((0..10).map(|_| random_subset(&mut rng, g.order())));
        for p in subsets {
            let beta = QMorphism::evaluation(a.clone(), &p).expect("evaluation");
            let img = match hopf_image(&beta) {
                Ok(img) => img,
                Err(e) => {
                    failures.push(format!("{name} {p:?}: {e}"));
                    continue;
                }
            };
            let generated = oracle_generated_subgroup(&g, &p);
            let mut least: Option<usize> = None;
            for (h, (pi, emb)) in subs.iter().zip(&embs) {
                checks += 1;
                let factors = beta.factorization_residual(pi).map(|r| r <= TOL).unwrap_or(false);
                let contains = emb.gamma_image().contains_subspace(img.m1_basis());
                let classical = generated.iter().all(|x| h.contains(x));
                if factors != contains || contains != classical {
                    failures.push(format!("{name} {p:?} in {h:?}: {factors} {contains} {classical}"));
                }
                if factors {
                    least = Some(least.map_or(h.len(), |l| l.min(h.len())));
                }
            }
            if least != Some(img.dim()) {
                failures.push(format!("{name} {p:?}: least subgroup {least:?} vs image {}", img.dim()));
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("{checks} (P, K) checks, {} failures {failures:?}", failures.len()))
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("axiom suite", c1_axiom_suite),
        ("multiplicative-unitary suite", c2_multiplicative_unitary_suite),
        ("classical Hopf-image soundness", c3_classical_soundness),
        ("dual-classical soundness", c4_dual_classical_soundness),
        ("characterisation coherence", c5_characterisation_coherence),
        ("four-algebra equality", c6_four_algebras),
        ("composition identity", c7_composition_identity),
        ("homomorphism separation", c8_separation),
        ("intertwiner promotion", c9_promotion),
        ("round trip beta <-> X <-> theta", c10_round_trip),
        ("universal property", c11_universal_property),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| f == &id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.pass);
        println!("[{verdict}] criterion {id:>2} {name}: {} ({:.1} s)", outcome.detail, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
