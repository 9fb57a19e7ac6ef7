use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use cubechains::cubical::{Cube, CubicalComplex, LabelSet};
use cubechains::error::Error;
use cubechains::euclid::{enumerate_critical_routes, routes_by_dim};
use cubechains::homology::{betti, homology_report};
use cubechains::input::{AnyComplex, ComplexSpec};
use cubechains::morse::is_gradient;
use cubechains::partitions::{build_pk, partition_poset, OrderedPartition};
use cubechains::random::random_subcomplex;
use cubechains::wk::{build_wk, critical_inductive, enumerate_critical_sequences, sigma};

/// Analyze directed path spaces of cubical complexes.
#[derive(Parser)]
#[command(name = "cubechains", version, about)]
struct Args {
    /// Analysis to run.
    #[arg(long)]
    command: Command,
    /// Input JSON file; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Override the label order (comma-separated permutation of the input
    /// labels; for Euclidean inputs, of the embedded axis-level labels).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Simplex cap for the homology oracle.
    #[arg(long, default_value_t = 10_000)]
    max_simplices: usize,
    /// Dimension cap for order-complex enumeration.
    #[arg(long)]
    dim_cap: Option<usize>,
    /// Seed for random test-complex generation.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    /// Face-closure check and size statistics.
    Validate,
    /// Size and dimension profile of the chain poset.
    Pk,
    /// Gradient field: vector count and acyclicity verdict.
    Field,
    /// Critical cells via all three enumerations, with agreement verdict.
    Critical,
    /// Critical routes of a Euclidean complex.
    Routes,
    /// Oracle homology of the order complex of the chain poset.
    Betti,
    /// Homology report: dimension-gap argument or Morse bounds plus oracle.
    Report,
    /// Emit a seeded random sub-complex of the cube on the given labels.
    Random,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(Outcome { value, exit }) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("valid json"));
            ExitCode::from(exit)
        }
        Err(e) => {
            let code = match &e {
                Error::ResourceCap(_) => 3,
                _ => 2,
            };
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(code)
        }
    }
}

struct Outcome {
    value: Value,
    exit: u8,
}

impl Outcome {
    fn ok(value: Value) -> Result<Self, Error> {
        Ok(Outcome { value, exit: 0 })
    }
}

fn run(args: &Args) -> Result<Outcome, Error> {
    if let Command::Random = args.command {
        return random_report(args);
    }
    let text = read_input(args)?;
    let spec = ComplexSpec::from_json(&text)?;
    let complex = spec.build()?;
    match args.command {
        Command::Validate => validate_report(args, &complex),
        Command::Pk => pk_report(args, &complex),
        Command::Field => field_report(args, &complex),
        Command::Critical => critical_report(args, &complex),
        Command::Routes => routes_report(args, &complex),
        Command::Betti => betti_report(args, &complex),
        Command::Report => report_report(args, &complex),
        Command::Random => unreachable!("handled above"),
    }
}

fn read_input(args: &Args) -> Result<String, Error> {
    match &args.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

/// The combinatorial complex the analysis runs on, with any order override
/// applied.
fn working_complex(args: &Args, complex: &AnyComplex) -> Result<CubicalComplex, Error> {
    let k = complex.as_cubical()?;
    match &args.order {
        None => Ok(k),
        Some(names) => reorder(&k, names),
    }
}

fn reorder(k: &CubicalComplex, names: &[String]) -> Result<CubicalComplex, Error> {
    let mut seen: Vec<&String> = names.iter().collect();
    seen.sort();
    let mut expected: Vec<&String> = k.labels().names().iter().collect();
    expected.sort();
    if seen != expected {
        return Err(Error::InvalidArgument(
            "--order must be a permutation of the input labels".into(),
        ));
    }
    let positions: Vec<usize> = names
        .iter()
        .map(|n| k.labels().position(n).expect("checked permutation"))
        .collect();
    let labels = LabelSet::new(names.to_vec())?;
    let cubes: Vec<Cube> = k
        .cubes()
        .map(|c| Cube::from_word(positions.iter().map(|&p| c.entry(p)).collect()))
        .collect();
    CubicalComplex::new(labels, cubes)
}

fn dim_profile(counts: &BTreeMap<usize, usize>) -> Vec<Value> {
    counts
        .iter()
        .map(|(d, c)| json!({ "dim": d, "count": c }))
        .collect()
}

fn validate_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    // ingest already guarantees closure; this double-checks and reports
    if !k.validate() {
        return Err(Error::NotFaceClosed("complex is not face-closed".into()));
    }
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for c in k.cubes() {
        *by_dim.entry(c.dim()).or_insert(0) += 1;
    }
    Outcome::ok(json!({
        "order": k.labels().names(),
        "valid": true,
        "cubes": k.cube_count(),
        "by_dim": dim_profile(&by_dim),
    }))
}

fn pk_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    let pk = build_pk(&k);
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for p in &pk {
        *by_dim.entry(p.dim()).or_insert(0) += 1;
    }
    Outcome::ok(json!({
        "order": k.labels().names(),
        "cells": pk.len(),
        "by_dim": dim_profile(&by_dim),
    }))
}

fn field_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    let wk = build_wk(&k);
    let poset = partition_poset(wk.pk.clone());
    let verdict = is_gradient(&poset, &wk.field())?;
    let crit = wk.critical();
    let by_dim: BTreeMap<usize, usize> =
        crit.iter().map(|(d, cells)| (*d, cells.len())).collect();
    Outcome::ok(json!({
        "order": k.labels().names(),
        "pk_cells": wk.pk.len(),
        "vectors": wk.vector_count(),
        "gradient": verdict.is_gradient(),
        "critical": dim_profile(&by_dim),
    }))
}

fn critical_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    let wk = build_wk(&k);
    let from_field = wk.critical();
    let inductive = critical_inductive(&k);
    let mut from_sequences: BTreeMap<usize, Vec<OrderedPartition>> = BTreeMap::new();
    for cs in enumerate_critical_sequences(&k) {
        from_sequences.entry(cs.dim()).or_default().push(sigma(&cs));
    }
    for v in from_sequences.values_mut() {
        v.sort();
    }
    let agreement = from_field == inductive && inductive == from_sequences;
    let critical: Vec<Value> = from_field
        .iter()
        .map(|(d, cells)| {
            json!({
                "dim": d,
                "count": cells.len(),
                "cells": cells
                    .iter()
                    .map(|c| c.canonical_string(k.labels()))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let value = json!({
        "order": k.labels().names(),
        "critical": critical,
        "agreement": agreement,
    });
    // the three enumerations must coincide; a mismatch is a bug
    Ok(Outcome {
        value,
        exit: if agreement { 0 } else { 1 },
    })
}

fn routes_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    if args.order.is_some() {
        return Err(Error::InvalidArgument(
            "--order does not apply to critical routes".into(),
        ));
    }
    let AnyComplex::Euclidean(k) = complex else {
        return Err(Error::InvalidArgument(
            "routes need a Euclidean input".into(),
        ));
    };
    let routes = enumerate_critical_routes(k);
    let by_dim = routes_by_dim(&routes);
    let labels = cubechains::euclid::box_label_set(k.corner());
    Outcome::ok(json!({
        "order": labels.names(),
        "k": k.corner(),
        "routes": routes.iter().map(|r| json!({
            "a": r.a_points(),
            "b": r.b_points(),
            "dim": r.dim(),
        })).collect::<Vec<_>>(),
        "by_dim": by_dim.iter().map(|(d, c)| json!({"dim": d, "count": c})).collect::<Vec<_>>(),
    }))
}

fn betti_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    let pk = build_pk(&k);
    let poset = partition_poset(pk);
    let oc = poset.order_complex(args.dim_cap);
    let report = betti(&oc, args.max_simplices)?;
    Outcome::ok(json!({
        "order": k.labels().names(),
        "betti": report.betti,
        "torsion": report.torsion,
        "method": "oracle",
    }))
}

fn report_report(args: &Args, complex: &AnyComplex) -> Result<Outcome, Error> {
    let k = working_complex(args, complex)?;
    let report = homology_report(&k, args.max_simplices)?;
    Outcome::ok(json!({
        "order": k.labels().names(),
        "critical_by_dim": report.critical_by_dim,
        "method": report.method.as_str(),
        "betti": report.betti,
        "torsion": report.torsion,
        "notes": report.notes,
    }))
}

fn random_report(args: &Args) -> Result<Outcome, Error> {
    let names = args.order.clone().ok_or_else(|| {
        Error::InvalidArgument("random generation needs --order for the label set".into())
    })?;
    let seed = args
        .seed
        .ok_or_else(|| Error::InvalidArgument("random generation needs --seed".into()))?;
    let labels = LabelSet::new(names)?;
    let k = random_subcomplex(&labels, seed, 0.5);
    let spec = ComplexSpec::of_cubical(&k);
    let value = serde_json::to_value(&spec).map_err(|e| Error::Parse(e.to_string()))?;
    Outcome::ok(value)
}
