use std::sync::Arc;

use serde_json::{json, Value};

use slc_core::clifford::{lemma4_scan, moment_report};
use slc_core::lie::{AlgebraJson, LieSuperAlgebra, ModuleAction};
use slc_core::poisson::{calibration, r_k_family, symbol_table, PoissonAlgebra};
use slc_core::solver::{
    check_invariant, conjecture6_report, exceptional_invariant, invariants, literal_radial_target,
    po_torus_coordinates, radial_image, span_membership, twisted_radial_target, SolverOptions,
};
use slc_core::zoo::{build, po_algebra, AlgebraName};
use slc_core::SuperPoly;

use crate::config::{ModuleArg, RunConfig, Switch};
use crate::report::{Report, Status};
use crate::CliError;

fn need<T: Copy>(v: Option<T>, flag: &str, command: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("{command} needs --{flag}")))
}

fn solver_opts(c: &RunConfig) -> SolverOptions {
    SolverOptions {
        weight_filter: c.weight_filter == Switch::On,
        budget: c.budget,
    }
}

fn texts(ps: &[SuperPoly]) -> Vec<String> {
    ps.iter().map(SuperPoly::to_text).collect()
}

pub fn execute(c: &RunConfig) -> Result<Report, CliError> {
    match c.command.as_str() {
        "verify-lemma4" => verify_lemma4(c),
        "verify-star3" => verify_star3(c),
        "invariants" => cmd_invariants(c),
        "conjecture6" => cmd_conjecture6(c),
        "radial" => cmd_radial(c),
        "membership" => cmd_membership(c),
        "zoo-export" => zoo_export(c),
        "zoo-import" => zoo_import(c),
        "selftest" => selftest(c),
        other => Err(CliError::Invalid(format!("unknown command {other}"))),
    }
}

fn verify_lemma4(c: &RunConfig) -> Result<Report, CliError> {
    let m = need(c.m, "m", "verify-lemma4")?;
    if m > 8 {
        return Err(CliError::Invalid(format!("verify-lemma4 supports m <= 8, got {m}")));
    }
    if m == 0 {
        let items = json!({"m": 0, "pairs": 1, "min_valuation": null, "required": 2});
        return Ok(Report::new(c.clone(), Status::Ok, items, vec!["po(0|0) is one-dimensional and abelian".into()]));
    }
    let po = PoissonAlgebra::new(m);
    let (min, pairs) = lemma4_scan(&po)?;
    let ok = min.is_none_or(|v| v >= 2);
    let items = json!({
        "m": m,
        "route": if m % 2 == 0 { "xi-eta" } else { "theta" },
        "pairs": pairs,
        "min_valuation": min,
        "required": 2,
    });
    Ok(Report::new(c.clone(), if ok { Status::Ok } else { Status::Mismatch }, items, Vec::new()))
}

fn verify_star3(c: &RunConfig) -> Result<Report, CliError> {
    let m = match (c.n, c.m) {
        (Some(n), None) => 2 * n,
        (None, Some(m)) => m,
        (Some(n), Some(m)) if m == 2 * n => m,
        (Some(_), Some(_)) => return Err(CliError::Invalid("--m and --n disagree".into())),
        (None, None) => return Err(CliError::Invalid("verify-star3 needs --n (or --m)".into())),
    };
    if m == 0 {
        return Err(CliError::Invalid("verify-star3 needs m >= 1".into()));
    }
    let kmax = c.k.unwrap_or(4);
    if kmax == 0 {
        return Err(CliError::Invalid("verify-star3 needs --k >= 1".into()));
    }
    let mut status = Status::Ok;
    let mut flags = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let r = moment_report(m, k)?;
        if !r.proportional {
            status = status.combine(Status::Mismatch);
            flags.push(format!("k = {k}: lowest component is not proportional to (1/k) int f^k"));
        }
        if r.exponent_matches_claim == Some(false) {
            status = status.combine(Status::Mismatch);
            flags.push(format!(
                "k = {k}: lowest component at h^{:?}, claimed h^{}",
                r.valuation,
                r.claimed_exponent.unwrap_or_default()
            ));
        }
        if let Some(ct) = r.constant.as_deref() {
            if ct != "1/1" {
                flags.push(format!("k = {k}: constant {ct} relative to (1/k) int f^k, printed normalisation 1"));
            }
        }
        if r.vacuous {
            flags.push(format!("k = {k}: both sides vanish"));
        }
        rows.push(serde_json::to_value(&r)?);
    }
    if m % 2 == 1 {
        flags.push("odd m: qtr route, no exponent is claimed".into());
    }
    Ok(Report::new(c.clone(), status, json!({ "m": m, "moments": rows }), flags))
}

fn resolve_algebra(c: &RunConfig, command: &str) -> Result<(AlgebraName, usize, LieSuperAlgebra), CliError> {
    let name = need(c.algebra, "algebra", command)?;
    let size = if name.uses_m() {
        need(c.m, "m", command)?
    } else {
        need(c.n, "n", command)?
    };
    Ok((name, size, build(name, size, c.deform())?))
}

fn module_of(g: LieSuperAlgebra, module: ModuleArg) -> ModuleAction {
    let g = Arc::new(g);
    match module {
        ModuleArg::Adjoint => ModuleAction::adjoint(&g),
        ModuleArg::Coadjoint => ModuleAction::coadjoint(&g),
    }
}

fn cmd_invariants(c: &RunConfig) -> Result<Report, CliError> {
    let (name, size, g) = resolve_algebra(c, "invariants")?;
    let dmax = need(c.degree, "degree", "invariants")?;
    let module = c.module.unwrap_or(crate::config::default_module(name));
    let action = module_of(g, module);
    let radial = name == AlgebraName::Po && size % 2 == 0 && size > 0 && module == ModuleArg::Coadjoint;
    let torus = po_torus_coordinates(size / 2);
    let mut status = Status::Ok;
    let mut flags = Vec::new();
    let mut rows = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=dmax {
        let run = invariants(&action, d, solver_opts(c))?;
        if run.aborted {
            status = status.combine(Status::Aborted);
        }
        dims.push((!run.aborted).then(|| run.basis.dim()));
        let mut row = json!({
            "degree": d,
            "aborted": run.aborted,
            "space_dim": run.space_dim,
            "blocks": run.blocks.len(),
            "largest_block_processed": run.largest_block_processed,
            "invariants": run.basis.to_json(),
        });
        if let Some(r) = &run.reason {
            row["reason"] = json!(r);
        }
        if radial && !run.aborted {
            row["radial_image"] = json!(texts(&radial_image(&run.basis.basis, &torus)?));
        }
        rows.push(row);
    }
    let positive: Vec<u32> = dims
        .iter()
        .enumerate()
        .filter(|(d, k)| *d > 0 && k.is_some_and(|k| k > 0))
        .map(|(d, _)| d as u32)
        .collect();
    match (name, module) {
        (AlgebraName::Vect, ModuleArg::Adjoint) if size > 2 => {
            if !positive.is_empty() {
                status = status.combine(Status::Mismatch);
                flags.push(format!("vect(0|{size}) has invariants beyond constants in degrees {positive:?}"));
            }
        }
        (AlgebraName::Svect | AlgebraName::SvectTilde, ModuleArg::Adjoint) => {
            status = status.combine(Status::ReportOnly);
            flags.push(if positive.is_empty() {
                "conjecture-consistent: no invariants beyond constants".into()
            } else {
                format!("conjecture-violating: invariants in degrees {positive:?}")
            });
        }
        _ => {}
    }
    let items = json!({
        "algebra": action.algebra.name,
        "module": module,
        "dims": dims,
        "degrees": rows,
    });
    Ok(Report::new(c.clone(), status, items, flags))
}

fn cmd_conjecture6(c: &RunConfig) -> Result<Report, CliError> {
    let m = need(c.m, "m", "conjecture6")?;
    let dmax = c.degree.unwrap_or(6);
    let rep = conjecture6_report(m, dmax, solver_opts(c))?;
    let mut status = if rep.asserted { Status::Ok } else { Status::ReportOnly };
    let mut flags = Vec::new();
    for d in &rep.degrees {
        if !d.lowest_components_invariant {
            status = status.combine(Status::Mismatch);
            flags.push(format!("degree {}: a lowest component is not invariant", d.degree));
        }
        if d.aborted {
            status = status.combine(Status::Aborted);
        } else if d.dims_agree == Some(false) {
            if rep.asserted {
                status = status.combine(Status::Mismatch);
            }
            flags.push(format!(
                "degree {}: {} invariants, lowest span {}",
                d.degree,
                d.invariants_dim.unwrap_or_default(),
                d.lowest_span_dim.unwrap_or_default()
            ));
        }
    }
    Ok(Report::new(c.clone(), status, serde_json::to_value(&rep)?, flags))
}

fn po_coadjoint(m: usize) -> ModuleAction {
    ModuleAction::coadjoint(&Arc::new(po_algebra(m)))
}

fn cmd_radial(c: &RunConfig) -> Result<Report, CliError> {
    let m = c.m.unwrap_or(4);
    let d = c.degree.unwrap_or(6);
    if m == 0 || m % 2 == 1 {
        return Err(CliError::Invalid("radial parts need po(0|m) with m even and positive".into()));
    }
    let action = po_coadjoint(m);
    let run = invariants(&action, d, solver_opts(c))?;
    if run.aborted {
        let items = json!({"m": m, "degree": d, "reason": run.reason});
        return Ok(Report::new(c.clone(), Status::Aborted, items, Vec::new()));
    }
    let torus = po_torus_coordinates(m / 2);
    let image = radial_image(&run.basis.basis, &torus)?;
    let mut items = json!({
        "m": m,
        "degree": d,
        "invariants_dim": run.basis.dim(),
        "radial_image": texts(&image),
    });
    if m != 4 || d != 6 {
        return Ok(Report::new(c.clone(), Status::ReportOnly, items, Vec::new()));
    }
    let r = r_k_family(4, 6)?;
    let literal = exceptional_invariant(&action, &r, &literal_radial_target(), solver_opts(c))?;
    let twisted = exceptional_invariant(&action, &r, &twisted_radial_target(), solver_opts(c))?;
    let mut flags = Vec::new();
    items["literal_target"] = json!(literal_radial_target().to_text());
    items["literal_found"] = json!(literal.is_some());
    items["twisted_target"] = json!(twisted_radial_target().to_text());
    items["twisted_found"] = json!(twisted.is_some());
    if let Some(e) = twisted.as_ref().or(literal.as_ref()) {
        items["exceptional"] = json!({
            "invariant": e.invariant.to_text(),
            "radial": e.radial.to_text(),
            "member_of_r_span": e.membership.member,
            "products": e.membership.products,
        });
    }
    let status = if literal.is_some() {
        Status::Ok
    } else {
        flags.push(
            "no invariant has radial part x1^2 x2^2 (x1^2 - x2^2); radial parts are symmetric under the Weyl swap x1 <-> x2"
                .into(),
        );
        Status::Mismatch
    };
    Ok(Report::new(c.clone(), status, items, flags))
}

fn r_indices(text: &str) -> Result<Vec<u32>, CliError> {
    text.split([',', '*'])
        .map(|t| t.trim().trim_start_matches('r'))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().ok().filter(|&k| k > 0).ok_or_else(|| CliError::Invalid(format!("bad r index {t:?}"))))
        .collect()
}

fn cmd_membership(c: &RunConfig) -> Result<Report, CliError> {
    let m = c.m.unwrap_or(4);
    let d = need(c.degree, "degree", "membership")?;
    if m == 0 {
        return Err(CliError::Invalid("membership needs m >= 1".into()));
    }
    let gens: Vec<u32> = match &c.generators {
        Some(g) => r_indices(g)?,
        None => (1..=d).collect(),
    };
    let candidate_text = c.candidate.clone().unwrap_or_default();
    let is_product = candidate_text.trim_start().starts_with('r');
    let factors = if is_product { r_indices(&candidate_text)? } else { Vec::new() };
    let kmax = gens.iter().chain(&factors).copied().max().unwrap_or(1);
    let r = r_k_family(m, kmax)?;
    let generators: Vec<SuperPoly> = gens.iter().map(|&k| r[k as usize - 1].clone()).collect();
    let mut flags = Vec::new();
    let (candidate, expected) = if candidate_text == "exceptional" {
        if m != 4 || d != 6 {
            return Err(CliError::Invalid("the exceptional candidate lives in po(0|4), degree 6".into()));
        }
        let action = po_coadjoint(4);
        let found = exceptional_invariant(&action, &r, &literal_radial_target(), solver_opts(c))?;
        let e = match found {
            Some(e) => e,
            None => {
                flags.push("using the invariant with radial part x1^2 x2^2 (x1^2 + x2^2)".into());
                exceptional_invariant(&action, &r, &twisted_radial_target(), solver_opts(c))?
                    .ok_or_else(|| CliError::Invalid("no exceptional invariant found".into()))?
            }
        };
        (e.invariant, Some(false))
    } else if is_product {
        let mut p = SuperPoly::one(r[0].table());
        for &k in &factors {
            p = p.mul(&r[k as usize - 1])?;
        }
        let all_in = factors.iter().all(|k| gens.contains(k));
        (p, all_in.then_some(true))
    } else {
        (SuperPoly::parse(&symbol_table(m), &candidate_text)?, None)
    };
    let result = span_membership(&candidate, &generators, d)?;
    let status = match expected {
        Some(e) if e == result.member => Status::Ok,
        Some(_) => Status::Mismatch,
        None => Status::ReportOnly,
    };
    let items = json!({
        "m": m,
        "degree": d,
        "generators": gens.iter().map(|k| format!("r{k}")).collect::<Vec<_>>(),
        "candidate": candidate.to_text(),
        "expected": expected,
        "membership": result,
    });
    Ok(Report::new(c.clone(), status, items, flags))
}

fn zoo_export(c: &RunConfig) -> Result<Report, CliError> {
    let (_, _, g) = resolve_algebra(c, "zoo export")?;
    Ok(Report::new(c.clone(), Status::Ok, serde_json::to_value(g.to_json())?, Vec::new()))
}

fn zoo_import(c: &RunConfig) -> Result<Report, CliError> {
    let path = c.file.clone().ok_or_else(|| CliError::Invalid("zoo import needs --file".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let j: AlgebraJson = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
    let g = LieSuperAlgebra::from_json(&j)?;
    g.validate()?;
    let (even, odd) = g.dims_by_parity();
    let form_invariant = g.form.as_ref().map(|_| g.check_form_invariance().is_ok());
    let items = json!({
        "name": g.name,
        "dim": g.dim(),
        "even": even,
        "odd": odd,
        "valid": true,
        "form_invariant": form_invariant,
    });
    Ok(Report::new(c.clone(), Status::Ok, items, Vec::new()))
}

fn selftest(c: &RunConfig) -> Result<Report, CliError> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    checks.push(("bracket calibration is unique".into(), calibration().passing.len() == 1));
    for m in 2..=3 {
        let laws = PoissonAlgebra::new(m).check_laws(20, c.seed)?;
        checks.push((format!("bracket laws, m = {m}"), laws.all_hold()));
        let (min, _) = lemma4_scan(&PoissonAlgebra::new(m))?;
        checks.push((format!("quantization defect valuation, m = {m}"), min.is_none_or(|v| v >= 2)));
    }
    let r = moment_report(2, 1)?;
    checks.push((
        "moment m = 2, k = 1".into(),
        r.valuation == Some(1) && r.constant.as_deref() == Some("-1/1"),
    ));
    let (gl, _) = slc_core::zoo::gl_natural("gl(1|1)", &[0, 1]);
    let a = ModuleAction::coadjoint(&Arc::new(gl));
    let run = invariants(&a, 1, solver_opts(c))?;
    checks.push(("gl(1|1) linear invariants".into(), !run.aborted && run.basis.dim() == 1));
    let po = po_coadjoint(2);
    let r2 = r_k_family(2, 2)?;
    checks.push(("r_2 is invariant on po(0|2)".into(), check_invariant(&r2[1], &po)?));
    let all = checks.iter().all(|(_, ok)| *ok);
    let items: Vec<Value> = checks.iter().map(|(n, ok)| json!({"check": n, "passed": ok})).collect();
    Ok(Report::new(
        c.clone(),
        if all { Status::Ok } else { Status::Mismatch },
        json!(items),
        Vec::new(),
    ))
}
