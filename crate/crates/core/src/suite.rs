//! The acceptance checks, grouped into named suites.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::chains::{
    antisymmetrization_compare, build_cubical_complex, build_simplicial_complex, conj_rack_complex, homology,
    les_gamma, les_l_relative, long_exact_sequence, mapping_cone, s_map, s_terms_rack, tensor_complex,
    verify_chain_map, ChainComplex, Flavor, SMode,
};
use crate::coalgebra::{
    chain_coalgebra, check_laws, coproduct_report, delta_halves, half_shuffle_model, homology_coalgebra,
    primitive_analysis, Law,
};
use crate::cubical::{l_functor, standard_model, validate_cubical, verify_isomorphism, CubSet, ModelKind};
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::glstable::{
    conjugation_invariance, group_pontryagin, interleave_product_check, verify_matrix_lemmas, RingTag,
};
use crate::nerves::{bar_nerve, group_cubical_nerve, lnerve_to_rack_nerve, rack_nerve, validate_simplicial};
use crate::racks::{
    conj_rack, cyclic_group, group_preset, product_group, standard_group_presets, symmetric_group, trivial_rack,
    FiniteGroup, PointedRack,
};
use crate::shuffles::{enumerate_shuffles, shuffle_bijection, BijectionInput, ShuffleKind};

const Q: FieldTag = FieldTag::Rationals;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    All,
    Laws,
    Les,
    Gl,
    Nerves,
}

impl SuiteName {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SuiteName::All),
            "laws" => Ok(SuiteName::Laws),
            "les" => Ok(SuiteName::Les),
            "gl" => Ok(SuiteName::Gl),
            "nerves" => Ok(SuiteName::Nerves),
            _ => Err(Error::BadInput(format!("unknown suite '{s}' (all, laws, les, gl, nerves)"))),
        }
    }

    pub fn criteria(self) -> Vec<usize> {
        match self {
            SuiteName::All => (1..=11).collect(),
            SuiteName::Nerves => vec![1, 2, 3, 4, 5],
            SuiteName::Les => vec![6, 7],
            SuiteName::Laws => vec![8, 9, 10],
            SuiteName::Gl => vec![11],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub budget: u128,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 20240601, trials: 50, budget: crate::nerves::DEFAULT_CELL_BUDGET, timing: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub ok: bool,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub ok: bool,
    pub criteria: Vec<CriterionResult>,
}

pub fn criterion_title(id: usize) -> &'static str {
    match id {
        1 => "cubical and simplicial identities",
        2 => "d∘d = 0 on every constructed complex",
        3 => "homology of the L^n models",
        4 => "L(N□G) ≅ rack nerve",
        5 => "abelian rack homology dimensions",
        6 => "S is a chain map",
        7 => "long exact sequences",
        8 => "coproduct halves and homology laws",
        9 => "abelian bialgebra laws and primitives",
        10 => "tensor model and shuffle bijections",
        11 => "matrix lemmas and conjugation homotopy",
        _ => "unknown",
    }
}

/// Runs one criterion; errors are reported as failures.
pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let out = match id {
        1 => c1_identities(cfg),
        2 => c2_d_squared(cfg),
        3 => c3_l_models(),
        4 => c4_l_iso(cfg),
        5 => c5_abelian_dims(cfg),
        6 => c6_s_map(cfg),
        7 => c7_les(cfg),
        8 => c8_coproducts(cfg),
        9 => c9_abelian_bialgebra(cfg),
        10 => c10_tensor_model(),
        11 => c11_matrices(cfg),
        _ => Err(Error::BadInput(format!("no criterion {id}"))),
    };
    let (ok, details) = match out {
        Ok((ok, details)) => (ok, details),
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    let seconds = cfg.timing.then(|| start.elapsed().as_secs_f64());
    CriterionResult { id, title: criterion_title(id).to_string(), ok, details, seconds }
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionResult> = std::thread::scope(|s| {
        let handles: Vec<_> = name.criteria().into_iter().map(|id| s.spawn(move || run_criterion(id, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    SuiteReport { suite: name, seed: cfg.seed, ok: criteria.iter().all(|c| c.ok), criteria }
}

type Outcome = Result<(bool, Value)>;

fn preset_racks() -> Result<Vec<PointedRack>> {
    let mut racks: Vec<PointedRack> =
        standard_group_presets().into_iter().map(|p| group_preset(p).map(|g| conj_rack(&g))).collect::<Result<_>>()?;
    racks.push(trivial_rack(3)?);
    Ok(racks)
}

fn preset_groups() -> Result<Vec<FiniteGroup>> {
    standard_group_presets().into_iter().map(group_preset).collect()
}

fn cubical_sets(cfg: &SuiteConfig) -> Result<Vec<CubSet>> {
    let mut sets = Vec::new();
    for n in 0..=3 {
        sets.push(standard_model(ModelKind::Cube, n, None)?);
    }
    for n in 1..=3 {
        sets.push(standard_model(ModelKind::LCube, n, None)?);
    }
    for r in preset_racks()? {
        sets.push(rack_nerve(&r, 4, cfg.budget)?);
    }
    Ok(sets)
}

fn c1_identities(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for x in cubical_sets(cfg)? {
        let r = validate_cubical(&x);
        ok &= r.ok();
        rows.push(json!({ "set": x.name, "kind": "cubical", "checked": r.checked, "violations": r.violations.len() }));
    }
    for g in preset_groups()? {
        let b = bar_nerve(&g, 4, cfg.budget)?;
        let v = validate_simplicial(&b);
        ok &= v.is_empty();
        rows.push(json!({ "set": format!("bar:{}", g.name), "kind": "simplicial", "violations": v.len() }));
    }
    Ok((ok, json!({ "sets": rows })))
}

fn c2_d_squared(cfg: &SuiteConfig) -> Outcome {
    let mut complexes: Vec<ChainComplex> = Vec::new();
    for x in cubical_sets(cfg)? {
        let x = Arc::new(x);
        complexes.push(build_cubical_complex(x.clone(), Q, Flavor::Normalized)?);
        complexes.push(build_cubical_complex(x, Q, Flavor::Unnormalized)?);
    }
    for g in preset_groups()? {
        let b = Arc::new(bar_nerve(&g, 4, cfg.budget)?);
        complexes.push(build_simplicial_complex(b.clone(), Q, Flavor::Normalized)?);
        complexes.push(build_simplicial_complex(b, Q, Flavor::Unnormalized)?);
    }
    let s3 = symmetric_group(3)?;
    let c = conj_rack_complex(&s3, Q, 3, cfg.budget)?;
    complexes.push(tensor_complex(&c, &c, 3)?.0);
    let s = s_map(SMode::RackFormula, &s3, Q, 3, cfg.budget)?;
    complexes.push(mapping_cone(&s.map, &s.source, &s.target)?.total);
    let mut failures = Vec::new();
    for c in &complexes {
        if let Err(e) = c.check_d_squared() {
            failures.push(e.to_string());
        }
    }
    Ok((failures.is_empty(), json!({ "complexes": complexes.len(), "failures": failures })))
}

fn c3_l_models() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let l = Arc::new(standard_model(ModelKind::LCube, n, Some(n + 2))?);
        let h = homology(&build_cubical_complex(l, Q, Flavor::Normalized)?, n + 1)?;
        let good = h.dims[0] == 1 && h.dims[1] == n && h.dims[2..].iter().all(|&d| d == 0);
        ok &= good;
        rows.push(json!({ "n": n, "dims": h.dims, "ok": good }));
    }
    Ok((ok, json!({ "models": rows, "note": "H_0 = ℚ is the unreduced value; reduced H_0 vanishes" })))
}

fn c4_l_iso(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (g, deg) in [(cyclic_group(2)?, 3), (cyclic_group(3)?, 3), (symmetric_group(3)?, 2)] {
        let nerve = group_cubical_nerve(&g, deg, cfg.budget)?;
        let l = l_functor(&nerve)?;
        let rn = rack_nerve(&conj_rack(&g), deg, cfg.budget)?;
        let f = lnerve_to_rack_nerve(&g, &l.inclusion);
        let v = verify_isomorphism(&l.set, &rn, &f);
        ok &= v.is_empty();
        rows.push(json!({ "group": g.name, "max_degree": deg, "cells": l.set.counts, "violations": v.len() }));
    }
    Ok((ok, json!({ "groups": rows })))
}

fn c5_abelian_dims(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for g in [cyclic_group(2)?, cyclic_group(3)?, product_group(&[2, 2])?] {
        for field in [Q, FieldTag::prime(2)?, FieldTag::prime(3)?] {
            let c = conj_rack_complex(&g, field, 5, cfg.budget)?;
            let zero = c.boundary.iter().all(|m| m.is_zero());
            let h = homology(&c, 4)?;
            let expect: Vec<usize> = (0..=4u32).map(|n| (g.order() - 1).pow(n)).collect();
            let good = zero && h.dims == expect;
            ok &= good;
            rows.push(json!({ "group": g.name, "field": field.to_string(), "dims": h.dims, "zero_boundary": zero, "ok": good }));
        }
    }
    Ok((ok, json!({ "cases": rows })))
}

fn c6_s_map(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for g in [cyclic_group(2)?, cyclic_group(3)?, symmetric_group(3)?] {
        let s = s_map(SMode::RackFormula, &g, Q, 4, cfg.budget)?;
        let r = verify_chain_map(&s.map, &s.source, &s.target);
        ok &= r.ok;
        let mut s2_ok = true;
        for a in 0..g.order() {
            for b in 0..g.order() {
                let mut got = s_terms_rack(&g, &[a, b]);
                let mut expect = vec![(vec![a, b], 1), (vec![b, g.conj(a, b)], -1)];
                got.sort();
                expect.sort();
                s2_ok &= got == expect;
            }
        }
        ok &= s2_ok;
        let anti = if g.is_abelian() {
            let a = antisymmetrization_compare(&g, Q, 4)?;
            ok &= a.ok;
            Some(a.ok)
        } else {
            None
        };
        rows.push(json!({ "group": g.name, "chain_map": r.ok, "degrees": r.checked_degrees, "s2_formula": s2_ok, "antisymmetrization": anti }));
    }
    Ok((ok, json!({ "groups": rows })))
}

fn les_row(kind: &str, group: &str, r: &crate::chains::LesReport) -> Value {
    json!({
        "kind": kind,
        "group": group,
        "sub": r.sub_dims,
        "total": r.total_dims,
        "quotient": r.quotient_dims,
        "nodes": r.nodes.len(),
        "unchecked": r.unchecked,
        "ok": r.ok,
    })
}

fn c7_les(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    let z2 = cyclic_group(2)?;
    let x = Arc::new(group_cubical_nerve(&z2, 4, cfg.budget)?);
    let (ses, _) = les_l_relative(x.clone(), Q)?;
    let r = long_exact_sequence(&ses, 3)?;
    ok &= r.ok;
    rows.push(les_row("l_relative", &z2.name, &r));
    // the cone of S carries the same sequence and stays within budget for larger G
    for g in [z2.clone(), cyclic_group(3)?, symmetric_group(3)?] {
        let s = s_map(SMode::RackFormula, &g, Q, 5, cfg.budget)?;
        let ses = mapping_cone(&s.map, &s.source, &s.target)?;
        let r = long_exact_sequence(&ses, 4)?;
        ok &= r.ok;
        rows.push(les_row("cone_of_s", &g.name, &r));
    }
    // degree 5 of the ℤ/2 cubical nerve has 2^31 cells, so Γ stops at degree 4
    let ses = les_gamma(x, Q)?;
    let r = long_exact_sequence(&ses, 2)?;
    ok &= r.ok;
    rows.push(les_row("gamma", &z2.name, &r));
    Ok((ok, json!({ "sequences": rows })))
}

fn c8_coproducts(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (g, top) in [(cyclic_group(2)?, 4), (cyclic_group(3)?, 4), (symmetric_group(3)?, 3)] {
        let c = conj_rack_complex(&g, Q, top + 1, cfg.budget)?;
        let chains = coproduct_report(&c, top)?;
        let h = homology(&c, top)?;
        let halves = delta_halves(&c, top)?;
        let hc = homology_coalgebra(&c, &h, &halves, None)?;
        let laws = check_laws(&hc, &[Law::CoZinbiel, Law::CocommutativeOfSum], top)?;
        ok &= chains.ok && laws.ok;
        rows.push(json!({
            "group": g.name,
            "top": top,
            "delta": chains.delta.ok,
            "lt": chains.lt.ok,
            "gt": chains.gt.ok,
            "halves_sum_to_reduced": chains.halves_sum_to_reduced,
            "degree_two_homotopy": chains.homotopy.as_ref().map(|h| h.ok),
            "homology_laws": laws.laws.iter().map(|l| json!({ "law": l.law, "ok": l.ok })).collect::<Vec<_>>(),
        }));
    }
    Ok((ok, json!({ "racks": rows })))
}

fn c9_abelian_bialgebra(cfg: &SuiteConfig) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for g in [cyclic_group(2)?, cyclic_group(3)?] {
        let c = conj_rack_complex(&g, Q, 4, cfg.budget)?;
        let halves = delta_halves(&c, 4)?;
        let prod = group_pontryagin(&g, &c, &halves.layout)?;
        let b = chain_coalgebra(&c, &halves, Some(&prod), 4)?;
        let laws = check_laws(&b, &[Law::CoZinbiel, Law::SemiHopf, Law::AssociativeProduct], 4)?;
        let p = primitive_analysis(&b, 4)?;
        let good = laws.ok && p.connected && p.cofree_dims_match;
        ok &= good;
        rows.push(json!({
            "group": g.name,
            "laws": laws.laws.iter().map(|l| json!({ "law": l.law, "ok": l.ok })).collect::<Vec<_>>(),
            "prim_dims": p.prim_dims,
            "cofree_dims": p.cofree_dims,
            "dims": p.dims,
            "connected": p.connected,
        }));
    }
    Ok((ok, json!({ "groups": rows })))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c10_tensor_model() -> Outcome {
    let mut ok = true;
    let mut models = Vec::new();
    for degs in [vec![1], vec![2], vec![1, 1], vec![1, 2]] {
        let g = half_shuffle_model(&degs, 5)?.coalgebra(Q);
        let r = check_laws(&g, &[Law::CoZinbiel, Law::SemiHopf], 5)?;
        ok &= r.ok;
        models.push(json!({ "generator_degrees": degs, "ok": r.ok }));
    }
    let mut shuffle_failures = Vec::new();
    let mut checked = 0;
    for p in 1..7 {
        for q in 1..=7 - p {
            let all = enumerate_shuffles(ShuffleKind::All(p, q))?;
            let first = enumerate_shuffles(ShuffleKind::FirstFixed(p, q))?;
            let pp1 = enumerate_shuffles(ShuffleKind::FirstIsPPlus1(p, q))?;
            if all.len() != binomial(p + q, p)
                || first.len() != binomial(p + q - 1, q)
                || pp1.len() != binomial(p + q - 1, p)
                || first.len() + pp1.len() != all.len()
            {
                shuffle_failures.push(format!("counts ({p},{q})"));
            }
            let image: HashSet<_> = all
                .iter()
                .map(|(s, _)| shuffle_bijection(&BijectionInput::Iota { p, q, sigma: s.clone() }).map(|t| t.images))
                .collect::<Result<_>>()?;
            let target: HashSet<_> =
                enumerate_shuffles(ShuffleKind::All(q, p))?.into_iter().map(|(s, _)| s.images).collect();
            if image != target {
                shuffle_failures.push(format!("iota ({p},{q})"));
            }
            checked += 1;
            for r in 1..=7usize.saturating_sub(p + q) {
                let triples: HashSet<_> =
                    enumerate_shuffles(ShuffleKind::Triple(p, q, r))?.into_iter().map(|(s, _)| s.images).collect();
                let multinomial = binomial(p + q + r, r) * binomial(p + q, p);
                let mut alpha = HashSet::new();
                for (sigma, _) in enumerate_shuffles(ShuffleKind::All(p + q, r))? {
                    for (gamma, _) in enumerate_shuffles(ShuffleKind::All(p, q))? {
                        alpha.insert(
                            shuffle_bijection(&BijectionInput::Alpha { p, q, r, sigma: sigma.clone(), gamma })?.images,
                        );
                    }
                }
                let mut beta = HashSet::new();
                for (sigma, _) in enumerate_shuffles(ShuffleKind::All(p, q + r))? {
                    for (gamma, _) in enumerate_shuffles(ShuffleKind::All(q, r))? {
                        beta.insert(
                            shuffle_bijection(&BijectionInput::Beta { p, q, r, sigma: sigma.clone(), gamma })?.images,
                        );
                    }
                }
                if triples.len() != multinomial || alpha != triples || beta != triples {
                    shuffle_failures.push(format!("alpha/beta ({p},{q},{r})"));
                }
                checked += 1;
            }
        }
    }
    ok &= shuffle_failures.is_empty();
    Ok((ok, json!({ "models": models, "shuffle_cases": checked, "shuffle_failures": shuffle_failures })))
}

fn c11_matrices(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut lemmas = Vec::new();
    for ring in [RingTag::ZMod(4), RingTag::PrimeField(2)] {
        let r = verify_matrix_lemmas(ring, 3, cfg.trials, cfg.seed)?;
        ok &= r.ok;
        lemmas.push(json!({
            "ring": ring.to_string(),
            "ok": r.ok,
            "checks": r.checks.len(),
            "failed": r.checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect::<Vec<_>>(),
            "transposition_product_holds": r.literal.iter().map(|l| l.holds).collect::<Vec<_>>(),
        }));
    }
    let product = interleave_product_check(RingTag::PrimeField(2), 2, Q, 3, cfg.budget)?;
    ok &= product.ok;
    let s3 = symmetric_group(3)?;
    let a = (0..s3.order())
        .find(|&a| a != s3.unit && s3.m(a, a) == s3.unit)
        .ok_or_else(|| Error::InternalInvariantViolation("S_3 has no transposition".into()))?;
    let h = conjugation_invariance(&conj_rack(&s3), a, Q, 3, cfg.budget)?;
    ok &= h.ok;
    Ok((
        ok,
        json!({
            "lemmas": lemmas,
            "interleave_product_chain_map": product.ok,
            "conjugation_homotopy": {
                "a": h.a,
                "signed_append": h.signed_append.ok,
                "degrees": h.signed_append.checked_degrees,
                "prepend_to_id": h.prepend_to_id.ok,
                "prepend_from_id": h.prepend_from_id.ok,
            },
        }),
    ))
}
