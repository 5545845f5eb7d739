use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rackhom_core::chains::{
    bar_complex, build_cubical_complex, homology, les_gamma, les_l_relative, long_exact_sequence, mapping_cone, s_map,
    verify_chain_map, ChainComplex, Flavor, SMode,
};
use rackhom_core::coalgebra::{
    chain_coalgebra, check_laws, delta_halves, half_shuffle_model, homology_coalgebra, primitive_analysis, Law,
};
use rackhom_core::cubical::{l_functor, validate_cubical, verify_isomorphism};
use rackhom_core::glstable::{group_pontryagin, verify_matrix_lemmas, RingTag};
use rackhom_core::nerves::{
    bar_nerve, group_cubical_nerve, lnerve_to_rack_nerve, rack_nerve, validate_simplicial, DEFAULT_CELL_BUDGET,
};
use rackhom_core::racks::{conj_rack, group_preset, rack_preset, FiniteGroup, PointedRack, Preset, RackJson};
use rackhom_core::suite::{run_suite, SuiteConfig, SuiteName};
use rackhom_core::{Error, FieldTag};

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(name = "rackhom", version, about = "Rack homology, cubical nerves and coalgebra law checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Coefficient field: q or f<p>.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    #[arg(long, global = true, default_value_t = 3)]
    max_degree: usize,
    /// Maximum number of cells per degree.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_BUDGET)]
    budget: u128,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print dimension tables as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock seconds to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Rack files.
    Rack {
        #[command(subcommand)]
        action: RackAction,
    },
    /// Normalized rack homology HR_•.
    RackHomology(Source),
    /// Group homology from the normalized bar complex.
    GroupHomology(Source),
    /// Nerves as JSON.
    Nerve {
        #[command(subcommand)]
        action: NerveAction,
    },
    /// Comparison maps.
    Map {
        #[command(subcommand)]
        action: MapAction,
    },
    /// Long exact sequence with rank-based exactness.
    Les {
        #[arg(long)]
        preset: String,
        #[arg(long, value_enum, default_value = "l-relative")]
        kind: LesKind,
    },
    /// Coalgebra law checks.
    Coalgebra {
        #[command(subcommand)]
        action: CoalgebraAction,
    },
    /// Matrix lemmas over ℤ/m or 𝔽_p.
    Gl {
        #[command(subcommand)]
        action: GlAction,
    },
    /// Acceptance suites: all, laws, les, gl, nerves.
    Suite {
        name: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Structural verifications.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// JSON input (rack: elements/op/basepoint, group: elements/mul/unit).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RackAction {
    /// Validates the rack axioms of a JSON rack.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum NerveKind {
    Rack,
    Cubical,
    Bar,
}

#[derive(Subcommand)]
enum NerveAction {
    Export {
        #[arg(long)]
        preset: String,
        #[arg(long, value_enum, default_value = "rack")]
        kind: NerveKind,
        #[arg(long)]
        labels: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SKind {
    Rack,
    Cubical,
}

#[derive(Subcommand)]
enum MapAction {
    /// Certifies S as a chain map.
    S {
        #[arg(long)]
        preset: String,
        #[arg(long, value_enum, default_value = "rack")]
        mode: SKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LesKind {
    LRelative,
    Gamma,
    Cone,
}

#[derive(Subcommand)]
enum CoalgebraAction {
    Verify {
        /// Rack or group preset.
        #[arg(long, conflicts_with = "model")]
        preset: Option<String>,
        /// Tensor model generator degrees, e.g. 1,1.
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated laws; defaults depend on the structure.
        #[arg(long)]
        laws: Option<String>,
        /// Check on chains instead of homology.
        #[arg(long)]
        chains: bool,
    },
}

#[derive(Subcommand)]
enum GlAction {
    Verify {
        #[arg(long, default_value = "zmod:4")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum VerifyAction {
    /// Checks the explicit isomorphism L(N□G) ≅ N^R G.
    LsetIso {
        #[arg(long)]
        group: String,
    },
}

/// A finished command: report body and whether every check passed.
struct Outcome {
    ok: bool,
    body: Value,
    csv: Option<String>,
}

fn pass(ok: bool, body: Value) -> Outcome {
    Outcome { ok, body, csv: None }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::ConstructionBug(_) | Error::InternalInvariantViolation(_) | Error::NoSolution => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let result = run(&cli);
    let (code, mut report, csv) = match result {
        Ok(o) => (if o.ok { 0 } else { 1 }, json!({ "command": echo, "ok": o.ok, "result": o.body }), o.csv),
        Err(e) => {
            eprintln!("error: {e}");
            (exit_code_for(&e), json!({ "command": echo, "ok": false, "error": e.to_string() }), None)
        }
    };
    if cli.global.timing {
        report["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    let text = match (cli.global.csv, csv) {
        (true, Some(c)) => c,
        _ => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> rackhom_core::Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn source_rack(s: &Source) -> rackhom_core::Result<PointedRack> {
    match (&s.preset, &s.file) {
        (Some(p), _) => rack_preset(p),
        (None, Some(f)) => PointedRack::from_json(read_json(f)?)
            .map_err(|r| Error::InvalidRack(serde_json::to_string(&r.violations).unwrap_or_default())),
        (None, None) => Err(Error::BadInput("give --preset or --file".into())),
    }
}

fn source_group(s: &Source) -> rackhom_core::Result<FiniteGroup> {
    match (&s.preset, &s.file) {
        (Some(p), _) => group_preset(p),
        (None, Some(f)) => FiniteGroup::from_json(read_json(f)?),
        (None, None) => Err(Error::BadInput("give --preset or --file".into())),
    }
}

fn rack_complex(r: &PointedRack, field: FieldTag, top: usize, budget: u128) -> rackhom_core::Result<ChainComplex> {
    build_cubical_complex(Arc::new(rack_nerve(r, top, budget)?), field, Flavor::Normalized)
}

fn homology_outcome(c: &ChainComplex, top: usize) -> rackhom_core::Result<Outcome> {
    let h = homology(c, top)?;
    let body = json!({ "complex": c.name, "chain_dims": h.chain_dims, "homology": h.to_json(c, 8) });
    Ok(Outcome { ok: true, body, csv: Some(h.to_csv()) })
}

fn run(cli: &Cli) -> rackhom_core::Result<Outcome> {
    let g = &cli.global;
    let field = FieldTag::parse(&g.field)?;
    let top = g.max_degree;
    match &cli.command {
        Command::Rack { action: RackAction::Check { file } } => {
            let j: RackJson = read_json(file)?;
            match PointedRack::from_json(j) {
                Ok(r) => Ok(pass(true, json!({ "valid": true, "size": r.size(), "trivial": r.is_trivial() }))),
                Err(report) => Ok(pass(false, serde_json::to_value(report)?)),
            }
        }
        Command::RackHomology(s) => homology_outcome(&rack_complex(&source_rack(s)?, field, top + 1, g.budget)?, top),
        Command::GroupHomology(s) => homology_outcome(&bar_complex(&source_group(s)?, field, top + 1, g.budget)?, top),
        Command::Nerve { action: NerveAction::Export { preset, kind, labels } } => {
            let body = match kind {
                NerveKind::Rack => {
                    let x = rack_nerve(&rack_preset(preset)?, top, g.budget)?;
                    json!({ "violations": validate_cubical(&x).violations.len(), "nerve": x.to_json(*labels) })
                }
                NerveKind::Cubical => {
                    let x = group_cubical_nerve(&group_preset(preset)?, top, g.budget)?;
                    json!({ "violations": validate_cubical(&x).violations.len(), "nerve": x.to_json(*labels) })
                }
                NerveKind::Bar => {
                    let x = bar_nerve(&group_preset(preset)?, top, g.budget)?;
                    let mut nerve = json!({
                        "max_degree": x.max_degree,
                        "counts": x.counts,
                        "faces": x.faces,
                        "degeneracies": x.degeneracies,
                    });
                    if *labels {
                        nerve["labels"] = json!(x.labels);
                    }
                    json!({ "violations": validate_simplicial(&x).len(), "nerve": nerve })
                }
            };
            let ok = body["violations"] == json!(0);
            Ok(pass(ok, body))
        }
        Command::Map { action: MapAction::S { preset, mode } } => {
            let mode = match mode {
                SKind::Rack => SMode::RackFormula,
                SKind::Cubical => SMode::CubicalToSimplicial,
            };
            let s = s_map(mode, &group_preset(preset)?, field, top, g.budget)?;
            let r = verify_chain_map(&s.map, &s.source, &s.target);
            Ok(pass(
                r.ok,
                json!({ "mode": s.mode, "source_dims": s.source.dims(), "target_dims": s.target.dims(), "chain_map": r }),
            ))
        }
        Command::Les { preset, kind } => {
            let grp = group_preset(preset)?;
            let ses = match kind {
                LesKind::LRelative => les_l_relative(Arc::new(group_cubical_nerve(&grp, top + 1, g.budget)?), field)?.0,
                LesKind::Gamma => les_gamma(Arc::new(group_cubical_nerve(&grp, top + 1, g.budget)?), field)?,
                LesKind::Cone => {
                    let s = s_map(SMode::RackFormula, &grp, field, top + 1, g.budget)?;
                    mapping_cone(&s.map, &s.source, &s.target)?
                }
            };
            let r = long_exact_sequence(&ses, top)?;
            let csv = r.nodes.iter().fold(String::from("node,degree,dim,rank_in,rank_out,exact\n"), |acc, n| {
                acc + &format!("{},{},{},{},{},{}\n", n.node, n.degree, n.dim, n.rank_in, n.rank_out, n.exact)
            });
            Ok(Outcome { ok: r.ok, body: serde_json::to_value(&r)?, csv: Some(csv) })
        }
        Command::Coalgebra { action: CoalgebraAction::Verify { preset, model, laws, chains } } => {
            let requested = laws
                .as_deref()
                .map(|l| l.split(',').map(Law::parse).collect::<rackhom_core::Result<Vec<_>>>())
                .transpose()?;
            if let Some(m) = model {
                let degs = m
                    .split(',')
                    .map(|d| d.trim().parse().map_err(|_| Error::BadInput(format!("bad degree list '{m}'"))))
                    .collect::<rackhom_core::Result<Vec<usize>>>()?;
                let b = half_shuffle_model(&degs, top)?.coalgebra(field);
                let r = check_laws(&b, &requested.unwrap_or(vec![Law::CoZinbiel, Law::SemiHopf]), top)?;
                return Ok(pass(r.ok, serde_json::to_value(&r)?));
            }
            let name = preset.as_deref().ok_or_else(|| Error::BadInput("give --preset or --model".into()))?;
            let (rack, group) = match rackhom_core::racks::preset(name)? {
                Preset::Group(grp) => (conj_rack(&grp), Some(grp)),
                Preset::Rack(r) => (r, None),
            };
            let c = rack_complex(&rack, field, top + 1, g.budget)?;
            let halves = delta_halves(&c, top)?;
            let product = match &group {
                Some(grp) if grp.is_abelian() => Some(group_pontryagin(grp, &c, &halves.layout)?),
                _ => None,
            };
            let b = if *chains {
                chain_coalgebra(&c, &halves, product.as_ref(), top)?
            } else {
                homology_coalgebra(&c, &homology(&c, top)?, &halves, product.as_ref())?
            };
            let default_laws = if product.is_some() {
                vec![Law::CoZinbiel, Law::CocommutativeOfSum, Law::SemiHopf]
            } else {
                vec![Law::CoZinbiel, Law::CocommutativeOfSum]
            };
            let r = check_laws(&b, &requested.unwrap_or(default_laws), top)?;
            let prim = primitive_analysis(&b, top)?;
            Ok(pass(r.ok, json!({ "laws": r, "primitives": prim })))
        }
        Command::Gl { action: GlAction::Verify { ring, nmax, trials } } => {
            let r = verify_matrix_lemmas(RingTag::parse(ring)?, *nmax, *trials, g.seed)?;
            Ok(pass(r.ok, serde_json::to_value(&r)?))
        }
        Command::Suite { name, trials } => {
            let cfg = SuiteConfig { seed: g.seed, trials: *trials, budget: g.budget, timing: g.timing };
            let r = run_suite(SuiteName::parse(name)?, &cfg);
            let csv = r
                .criteria
                .iter()
                .fold(String::from("criterion,title,ok\n"), |acc, c| acc + &format!("{},{},{}\n", c.id, c.title, c.ok));
            Ok(Outcome { ok: r.ok, body: serde_json::to_value(&r)?, csv: Some(csv) })
        }
        Command::Verify { action: VerifyAction::LsetIso { group } } => {
            let grp = group_preset(group)?;
            let nerve = group_cubical_nerve(&grp, top, g.budget)?;
            let l = l_functor(&nerve)?;
            let rn = rack_nerve(&conj_rack(&grp), top, g.budget)?;
            let f = lnerve_to_rack_nerve(&grp, &l.inclusion);
            let v = verify_isomorphism(&l.set, &rn, &f);
            let body = json!({
                "group": grp.name,
                "max_degree": top,
                "l_cells": l.set.counts,
                "rack_cells": rn.counts,
                "violations": v.iter().take(10).map(|x| format!("degree {} cell {}: {}", x.degree, x.cell, x.identity)).collect::<Vec<_>>(),
            });
            Ok(pass(v.is_empty(), body))
        }
    }
}
