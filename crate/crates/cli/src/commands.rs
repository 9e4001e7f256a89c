//! Command implementations. Each returns a text and a JSON rendering of the
//! same report together with the exit code.

use crate::input::{load_corep, load_morphism, load_spec, load_subgroup, read_json, Loaded, MorphismFile, SpecFile};
use crate::output;
use crate::{Cli, CliError, Command};
use fqg_core::fqg::{haar_solution_dim, intertwiners, solve_haar};
use fqg_core::hopf::{generated_subgroup, hopf_image, is_generating_with, promote_intertwiners_check, QMorphism};
use fqg_core::linalg::seeded_rng;
use serde_json::{json, Value};
use std::fmt::Write;
use std::path::Path;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, exit: 0 }
    }
}

fn failure<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Failure(e.to_string())
}

fn spec(path: &Path) -> Result<Loaded, CliError> {
    load_spec(&read_json::<SpecFile>(path)?)
}

/// Load a spec and insist that it passes every axiom.
fn verified_spec(path: &Path) -> Result<Loaded, CliError> {
    let a = spec(path)?;
    if let Some(bad) = a.data.verify_hopf_axioms().first_failure() {
        return Err(CliError::Failure(format!(
            "{}: axiom `{}` fails with residual {:.3e}",
            path.display(),
            bad.name,
            bad.residual
        )));
    }
    Ok(a)
}

fn morphism(path: &Path, a: &Loaded) -> Result<QMorphism, CliError> {
    load_morphism(&read_json::<MorphismFile>(path)?, a)
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check { spec } => check(spec),
        Command::Haar { spec } => haar(spec),
        Command::HopfImage { spec, morphism } => image(spec, morphism),
        Command::IsGenerating { spec, morphism, samples } => generating(spec, morphism, *samples, cli.seed),
        Command::GeneratedSubgroup { spec, subgroups } => generated(spec, subgroups),
        Command::Intertwiners { spec, u, v, restrict } => homs(spec, u, v, restrict, cli.seed),
        Command::Report { spec, morphism } => report(spec, morphism.as_deref(), cli.seed),
    }
}

fn check(path: &Path) -> Result<Report, CliError> {
    let a = spec(path)?;
    let axioms = a.data.verify_hopf_axioms();
    let mut text = format!("{} (dim {})\n", a.data.name(), a.data.dim());
    for c in &axioms.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        writeln!(text, "  {mark} {:<24} {:.3e}", c.name, c.residual).unwrap();
    }
    match axioms.first_failure() {
        None => writeln!(text, "all axioms hold").unwrap(),
        Some(bad) => {
            writeln!(text, "axiom `{}` fails with residual {:.3e}", bad.name, bad.residual).unwrap();
            eprintln!("axiom `{}` fails with residual {:.3e}", bad.name, bad.residual);
        }
    }
    let json = json!({
        "command": "check",
        "name": a.data.name(),
        "dim": a.data.dim(),
        "axioms": output::axioms(&axioms),
    });
    Ok(Report { text, json, exit: if axioms.passed() { 0 } else { 1 } })
}

fn haar(path: &Path) -> Result<Report, CliError> {
    let a = spec(path)?;
    let s = a.data.structure();
    let solution_dim = haar_solution_dim(s);
    let h = solve_haar(s).map_err(failure)?;
    let stored_difference = (&h - a.data.haar()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut text = format!("{}: Haar state (invariant functionals: {solution_dim})\n", a.data.name());
    for (i, z) in h.iter().enumerate() {
        writeln!(text, "  h(e_{i}) = {:.12} {:+.12}i", z.re, z.im).unwrap();
    }
    writeln!(text, "difference from the stored state: {stored_difference:.3e}").unwrap();
    let json = json!({
        "command": "haar",
        "name": a.data.name(),
        "dim": a.data.dim(),
        "solution_dim": solution_dim,
        "haar": output::vector(&h),
        "stored_difference": stored_difference,
    });
    Ok(Report::ok(text, json))
}

fn image(spec: &Path, morph: &Path) -> Result<Report, CliError> {
    let a = verified_spec(spec)?;
    let beta = morphism(morph, &a)?;
    let img = hopf_image(&beta).map_err(failure)?;
    let inv = img.image_group.invariants();
    let mut text = format!("image dim {}, generating: {}\n", img.dim(), img.is_full());
    writeln!(text, "blocks: {}", output::blocks_text(&inv)).unwrap();
    writeln!(text, "M₁ basis size: {}", img.m1_basis().dim()).unwrap();
    writeln!(text, "factorization residual: {:.3e}", img.factorization_residual).unwrap();
    let json = json!({
        "command": "hopf-image",
        "source": a.data.name(),
        "source_dim": a.data.dim(),
        "image_dim": img.dim(),
        "generating": img.is_full(),
        "m1_dim": img.m1_basis().dim(),
        "m1_picture_defect": img.m1.picture_defect,
        "factorization_residual": img.factorization_residual,
        "fullness_dim": img.fullness_dim,
        "baaj_vaes": {
            "passed": img.baaj_vaes.passed(),
            "coproduct_defect": img.baaj_vaes.coproduct_defect,
            "antipode_defect": img.baaj_vaes.antipode_defect,
        },
        "invariants": output::invariants(&inv),
        "pi": output::matrix(img.pi.matrix()),
        "image_structure": output::structure(&img.image_group),
    });
    Ok(Report::ok(text, json))
}

fn generating(spec: &Path, morph: &Path, samples: usize, seed: u64) -> Result<Report, CliError> {
    let a = verified_spec(spec)?;
    let beta = morphism(morph, &a)?;
    let cert = is_generating_with(&beta, samples, seed).map_err(failure)?;
    let mut text = format!("generating: {}\n", cert.generating);
    writeln!(text, "(ii)  dim M₁ = {} of {}", cert.m1_dim, cert.source_dim).unwrap();
    writeln!(text, "(iii) fixed points of θ: {}", cert.fixed_point_dim).unwrap();
    writeln!(
        text,
        "(iv)  {} sampled corep pairs, {} collisions, {} contradictions",
        cert.samples, cert.collisions, cert.contradictions
    )
    .unwrap();
    let json = json!({
        "command": "is-generating",
        "source": a.data.name(),
        "generating": cert.generating,
        "source_dim": cert.source_dim,
        "m1_dim": cert.m1_dim,
        "fixed_point_dim": cert.fixed_point_dim,
        "samples": cert.samples,
        "seed": seed,
        "collisions": cert.collisions,
        "contradictions": cert.contradictions,
    });
    Ok(Report { text, json, exit: if cert.generating { 0 } else { 3 } })
}

fn generated(spec: &Path, subgroups: &[String]) -> Result<Report, CliError> {
    let a = verified_spec(spec)?;
    let embs = subgroups.iter().map(|s| load_subgroup(s, &a)).collect::<Result<Vec<_>, _>>()?;
    let gs = generated_subgroup(&embs).map_err(failure)?;
    let dims: Vec<usize> = embs.iter().map(|e| e.subgroup().dim()).collect();
    let inv = gs.image.image_group.invariants();
    let mut text = format!(
        "subgroup dims: {}\n",
        dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    );
    for (k, s) in gs.steps.iter().enumerate() {
        writeln!(
            text,
            "step {}: M_{{1,2}} {}, M_• {}, M_∪ {}, M_{{V,1,2}} {}",
            k + 1,
            s.join,
            s.product,
            s.union,
            s.v_slices
        )
        .unwrap();
    }
    let full = if gs.is_full() { "full" } else { "proper" };
    writeln!(text, "generated subgroup: dim {} ({full})", gs.dim()).unwrap();
    writeln!(text, "blocks: {}", output::blocks_text(&inv)).unwrap();
    let json = json!({
        "command": "generated-subgroup",
        "parent": a.data.name(),
        "parent_dim": a.data.dim(),
        "subgroup_dims": dims,
        "steps": gs.steps.iter().map(|s| json!({
            "join": s.join, "product": s.product, "union": s.union, "v_slices": s.v_slices, "agree": s.agree(),
        })).collect::<Vec<_>>(),
        "dim": gs.dim(),
        "full": gs.is_full(),
        "invariants": output::invariants(&inv),
        "image_structure": output::structure(&gs.image.image_group),
    });
    Ok(Report::ok(text, json))
}

fn homs(spec: &Path, u: &str, v: &str, restrict: &[String], seed: u64) -> Result<Report, CliError> {
    let a = verified_spec(spec)?;
    let mut rng = seeded_rng(seed);
    let u = load_corep(u, &a, &mut rng)?;
    let v = load_corep(v, &a, &mut rng)?;
    let hom = intertwiners(&u, &v).map_err(failure)?;
    let mut text = format!("Hom(u, v): dim {}\n", hom.dim());
    let mut json = json!({
        "command": "intertwiners",
        "parent": a.data.name(),
        "u_dim": u.carrier_dim(),
        "v_dim": v.carrier_dim(),
        "hom_dim": hom.dim(),
        "basis": output::basis(&hom),
    });
    if !restrict.is_empty() {
        let embs = restrict.iter().map(|s| load_subgroup(s, &a)).collect::<Result<Vec<_>, _>>()?;
        let r = promote_intertwiners_check(&embs, &u, &v).map_err(failure)?;
        writeln!(text, "intersection over {} subgroups: dim {}", embs.len(), r.intersection_dim).unwrap();
        writeln!(text, "equal: {}, family generates: {}", r.equal, r.family_generates()).unwrap();
        json["restricted"] = json!({
            "subgroups": embs.len(),
            "intersection_dim": r.intersection_dim,
            "equal": r.equal,
            "contained": r.contained,
            "join_dim": r.join_dim,
            "family_generates": r.family_generates(),
            "slice_condition": r.slice_condition,
            "commutant_matches": r.commutant_matches,
        });
    }
    Ok(Report::ok(text, json))
}

fn report(spec: &Path, morph: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let a = verified_spec(spec)?;
    let d = &a.data;
    let axioms = d.verify_hopf_axioms();
    let w = d.w().residuals(d);
    let inv = d.invariants();
    let mut text = format!("{} (dim {})\n", d.name(), d.dim());
    writeln!(text, "axioms: all hold, max residual {:.3e}", axioms.max_residual()).unwrap();
    writeln!(
        text,
        "W: unitarity {:.3e}, pentagon {:.3e}, coproduct {:.3e}",
        w.unitarity, w.pentagon, w.coproduct
    )
    .unwrap();
    writeln!(text, "commutative: {}, cocommutative: {}", inv.commutative, inv.cocommutative).unwrap();
    writeln!(text, "blocks: {}", output::blocks_text(&inv)).unwrap();
    let mut json = json!({
        "command": "report",
        "name": d.name(),
        "dim": d.dim(),
        "axioms": output::axioms(&axioms),
        "w_residuals": {"unitarity": w.unitarity, "pentagon": w.pentagon, "coproduct": w.coproduct},
        "invariants": output::invariants(&inv),
    });
    if let Some(path) = morph {
        let beta = morphism(path, &a)?;
        let img = hopf_image(&beta).map_err(failure)?;
        let cert = is_generating_with(&beta, fqg_core::hopf::DEFAULT_SAMPLES, seed).map_err(failure)?;
        writeln!(text, "morphism: target dim {}", beta.target_dim()).unwrap();
        writeln!(text, "image dim {}, generating: {}", img.dim(), cert.generating).unwrap();
        json["morphism"] = json!({
            "target_dim": beta.target_dim(),
            "image_dim": img.dim(),
            "generating": cert.generating,
            "m1_dim": cert.m1_dim,
            "fixed_point_dim": cert.fixed_point_dim,
            "collisions": cert.collisions,
            "contradictions": cert.contradictions,
        });
    }
    Ok(Report::ok(text, json))
}
