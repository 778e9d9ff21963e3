mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fotheory::axioms::{check_beck_chevalley, check_model, check_theory, check_vibrant, ModelMode};
use fotheory::cohomology::{build_complex, build_complex_over, cohomology};
use fotheory::search::SimplexSpace;
use fotheory::stability::{divides_at_level, indiscernible_gap, order_property, IndiscernibleWitness, OrderWitness};
use fotheory::structures::{definable_quotient, DefinableSet};
use fotheory::{decalage, Report, SimplicialMapHandle};
use serde_json::json;

use output::{emit_report, emit_value, Format};
use source::{read_map, Loaded, SourceArgs};

#[derive(Parser, Debug)]
#[command(name = "fotheory", version, about = "Type-space functors of first-order theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the checkers.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Largest level a check looks at; defaults to min(truncation, 4).
    #[arg(long)]
    bound: Option<usize>,
}

impl BoundArgs {
    fn bound(&self, loaded: &Loaded) -> Result<usize> {
        let d = loaded.max_dim();
        let b = self.bound.unwrap_or(d.min(4));
        if b == 0 || b > d {
            bail!("--bound must lie between 1 and the truncation {d}, got {b}");
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapKind {
    /// The projection of the first decalage forgetting its head coordinate.
    Decalage,
    Identity,
    /// The projection from tuples onto orbits of a structure.
    Orbit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Saturated,
    Tv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a functor and print it as JSON.
    Build {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Level sizes and the functor validation summary.
    Info {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Amalgamation of types over shared variables.
    CheckTheory(BoundArgs),
    /// The Beck-Chevalley form of amalgamation.
    CheckBc(BoundArgs),
    /// Vibrancy of a map into the theory.
    CheckVibrant {
        #[command(flatten)]
        args: BoundArgs,
        #[arg(long, value_enum, default_value_t = MapKind::Decalage)]
        map: MapKind,
        #[arg(long = "map-file", conflicts_with = "map")]
        map_file: Option<PathBuf>,
    },
    /// Model conditions for a structure, or for a map from a representable functor.
    CheckModel {
        #[command(flatten)]
        args: BoundArgs,
        #[arg(long, value_enum, default_value_t = Mode::Saturated)]
        mode: Mode,
        #[arg(long = "map-file")]
        map_file: Option<PathBuf>,
    },
    /// Bounded stability tests.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Decalage cohomology with integer coefficients.
    Cohomology {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "max-degree", default_value_t = 2)]
        max_degree: usize,
        /// Map into the first decalage whose source carries the complex.
        #[arg(long = "base-map")]
        base_map: Option<PathBuf>,
    },
    /// Quotient of a structure by a definable equivalence relation.
    Quotient {
        #[command(flatten)]
        source: SourceArgs,
        /// Pair type in the equivalence relation (repeatable).
        #[arg(long = "type", required = true)]
        types: Vec<String>,
    },
    /// Restriction maps from one level to the level below, as a DOT graph.
    ExportDot {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
}

#[derive(Subcommand, Debug)]
enum StabilityCommand {
    /// Search for a sequence witnessing the order property of a formula.
    OrderProperty {
        #[command(flatten)]
        source: SourceArgs,
        /// Type in the formula, by label or alias (repeatable).
        #[arg(long, required = true)]
        phi: Vec<String>,
        #[arg(long = "N", default_value_t = 3)]
        length: usize,
    },
    /// Search for an order-indiscernible sequence that is not set-indiscernible.
    Indiscernible {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "n", default_value_t = 1)]
        width: usize,
        #[arg(long = "L", default_value_t = 3)]
        length: usize,
    },
    /// Whether a type divides along order-indiscernible parameter sequences.
    Divides {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        p: String,
        /// Size of the parameter block at the end of p.
        #[arg(long = "n", default_value_t = 1)]
        width: usize,
        #[arg(long = "L", default_value_t = 2)]
        length: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

/// Finds a type by alias or by label, searching levels from the bottom.
fn resolve<S: SimplexSpace>(space: &S, loaded: &Loaded, text: &str) -> Result<(usize, S::Elem)> {
    if let Some((level, label)) = loaded.oracle().and_then(|o| o.alias(text)) {
        if level <= space.max_dim() {
            return Ok((level, space.parse(level, &label)?));
        }
    }
    for level in 1..=space.max_dim() {
        if let Ok(e) = space.parse(level, text) {
            return Ok((level, e));
        }
    }
    bail!("no type named `{text}`")
}

fn stability<S: SimplexSpace>(space: &S, loaded: &Loaded, command: &StabilityCommand) -> Result<Report> {
    Ok(match command {
        StabilityCommand::OrderProperty { phi, length, .. } => {
            let mut level = None;
            let mut elems = Vec::new();
            for text in phi {
                let (l, e) = resolve(space, loaded, text)?;
                if level.is_some_and(|prev| prev != l) {
                    bail!("all --phi types must live on one level");
                }
                level = Some(l);
                elems.push(e);
            }
            let w = order_property(space, level.expect("phi is required"), &elems, *length)?;
            OrderWitness::to_report(w.as_ref(), *length)
        }
        StabilityCommand::Indiscernible { width, length, .. } => {
            let w = indiscernible_gap(space, *width, *length)?;
            IndiscernibleWitness::to_report(w.as_ref(), *width, *length)
        }
        StabilityCommand::Divides { p, width, length, k, .. } => {
            let (level, elem) = resolve(space, loaded, p)?;
            if level <= *width {
                bail!("p lives on level {level}, which leaves no variables beside a parameter block of {width}");
            }
            let m = level - width;
            let result = divides_at_level(space, &elem, m, *width, *length, *k)?;
            result.to_report(&space.label(level, &elem), m, *width)
        }
    })
}

fn stability_source(command: &StabilityCommand) -> &SourceArgs {
    match command {
        StabilityCommand::OrderProperty { source, .. }
        | StabilityCommand::Indiscernible { source, .. }
        | StabilityCommand::Divides { source, .. } => source,
    }
}

fn model_mode(mode: Mode) -> ModelMode {
    match mode {
        Mode::Saturated => ModelMode::Saturated,
        Mode::Tv => ModelMode::TarskiVaught,
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let format = cli.format;
    let verdict = |report: &Report| -> Result<ExitCode> {
        emit_report(report, format)?;
        Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
    };
    match &cli.command {
        Command::Build { source, output } => {
            let loaded = source.load()?;
            let text = loaded.tables()?.to_json();
            match output {
                Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { source } => {
            let loaded = source.load()?;
            let value = match &loaded {
                Loaded::Tables { theory, .. } => {
                    let report = theory.validate_functor();
                    json!({
                        "schema": "fotheory.info.v1",
                        "name": theory.name(),
                        "backend": "materialized",
                        "max_dim": theory.max_dim(),
                        "level_sizes": theory.level_sizes(),
                        "validation": {
                            "verdict": report.verdict,
                            "witnesses": report.witnesses.len(),
                        },
                    })
                }
                Loaded::Lazy { theory: lazy, .. } => json!({
                    "schema": "fotheory.info.v1",
                    "name": lazy.oracle().name(),
                    "backend": "lazy",
                    "max_dim": lazy.max_dim(),
                    "level_sizes": (1..=lazy.max_dim()).map(|n| lazy.level_size(n)).collect::<Vec<_>>(),
                }),
            };
            emit_value(&value, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckTheory(args) => {
            let loaded = args.source.load()?;
            verdict(&check_theory(loaded.tables()?, args.bound(&loaded)?)?)
        }
        Command::CheckBc(args) => {
            let loaded = args.source.load()?;
            verdict(&check_beck_chevalley(loaded.tables()?, args.bound(&loaded)?)?)
        }
        Command::CheckVibrant { args, map, map_file } => {
            let loaded = args.source.load()?;
            let theory = loaded.tables()?;
            let bound = args.bound(&loaded)?;
            let f = match (map_file, map) {
                (Some(path), _) => read_map(path, theory)?,
                (None, MapKind::Identity) => SimplicialMapHandle::identity(theory.clone()),
                (None, MapKind::Decalage) => decalage(theory, 1)?.head_projections[0].clone(),
                (None, MapKind::Orbit) => match &loaded {
                    Loaded::Tables { orbits: Some(o), .. } => o.projection.clone(),
                    _ => bail!("--map orbit needs --structure"),
                },
            };
            if bound > f.levels() {
                bail!("--bound {bound} exceeds the {} levels of the map", f.levels());
            }
            verdict(&check_vibrant(&f, bound)?)
        }
        Command::CheckModel { args, mode, map_file } => {
            let loaded = args.source.load()?;
            let theory = loaded.tables()?;
            let f = match (map_file, &loaded) {
                (Some(path), _) => read_map(path, theory)?,
                (None, Loaded::Tables { orbits: Some(o), .. }) => o.projection.clone(),
                _ => bail!("check-model needs --structure or --map-file"),
            };
            verdict(&check_model(&f, args.bound(&loaded)?, model_mode(*mode))?)
        }
        Command::Stability(command) => {
            let loaded = stability_source(command).load()?;
            let report = match &loaded {
                Loaded::Tables { theory, .. } => stability(theory.as_ref(), &loaded, command)?,
                Loaded::Lazy { theory, .. } => stability(theory.as_ref(), &loaded, command)?,
            };
            verdict(&report)
        }
        Command::Cohomology {
            source,
            max_degree,
            base_map,
        } => {
            let mut source = source.clone();
            if source.structure.is_some() && source.max_dim.is_none() {
                source.max_dim = Some(max_degree + 3);
            }
            let loaded = source.load()?;
            let theory = loaded.tables()?;
            let complex = match base_map {
                Some(path) => {
                    let shifted = Arc::new(theory.shifted(1)?);
                    build_complex_over(&read_map(path, &shifted)?, *max_degree)?
                }
                None => build_complex(theory, *max_degree)?,
            };
            let groups = cohomology(&complex)?;
            let value = json!({
                "schema": "fotheory.cohomology.v1",
                "theory": theory.name(),
                "truncation": complex.truncation,
                "max_degree": max_degree,
                "cochain_ranks": (0..=max_degree + 1).map(|d| complex.rank(d)).collect::<Vec<_>>(),
                "degrees": groups,
            });
            emit_value(&value, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient { source, types } => {
            let Some(path) = &source.structure else {
                bail!("quotient needs --structure");
            };
            let loaded = source.load()?;
            let Loaded::Tables { theory, orbits: Some(orbits), .. } = &loaded else {
                bail!("quotient needs --structure");
            };
            let labels: Vec<&str> = types.iter().map(String::as_str).collect();
            let set = DefinableSet::from_labels(theory, 2, &labels)?;
            let m = source::read_structure(path)?;
            let q = definable_quotient(&m, orbits, &set)?;
            let structure: serde_json::Value = serde_json::from_str(&q.structure.to_json())?;
            let value = json!({
                "schema": "fotheory.quotient.v1",
                "structure": structure,
                "map": q.map.iter().map(|&c| q.structure.domain[c].clone()).collect::<Vec<_>>(),
            });
            emit_value(&value, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { source, level } => {
            let loaded = source.load()?;
            println!("{}", output::dot(loaded.tables()?, *level)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
