//! Loading theories, structures and maps from the command line.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::Args;
use fotheory::builtin::{default_max_dim, oracle};
use fotheory::oracle::{LazyTheory, Theory, TheoryOracle};
use fotheory::structures::{orbit_theory_with_cap, FinStructure, OrbitTheory};
use fotheory::{SimplicialMapHandle, TruncatedSymSS};
use serde::Deserialize;

pub const CACHE_ENV: &str = "SYMSS_CACHE_DIR";
const STRUCTURE_MAX_DIM: usize = 4;

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Built-in theory: equality, dlo, random_graph, vect_f2 or point.
    #[arg(long, group = "source")]
    pub builtin: Option<String>,
    /// Built-in theory name, or a functor JSON file.
    #[arg(long, group = "source")]
    pub theory: Option<String>,
    /// Finite structure JSON file; its theory is computed from automorphism orbits.
    #[arg(long, group = "source")]
    pub structure: Option<PathBuf>,
    /// Serialized functor JSON file.
    #[arg(long, group = "source")]
    pub functor: Option<PathBuf>,
    /// Truncation level; structures default to 4, or to the max degree plus 3 for cohomology.
    #[arg(long = "max-dim")]
    pub max_dim: Option<usize>,
    /// Largest level size to materialize.
    #[arg(long, default_value_t = fotheory::oracle::DEFAULT_CAP)]
    pub cap: usize,
}

pub enum Loaded {
    Tables {
        theory: Arc<TruncatedSymSS>,
        oracle: Option<Arc<dyn TheoryOracle>>,
        orbits: Option<OrbitTheory>,
    },
    Lazy { theory: Arc<LazyTheory>, cap: usize },
}

impl Loaded {
    pub fn tables(&self) -> Result<&Arc<TruncatedSymSS>> {
        match self {
            Loaded::Tables { theory, .. } => Ok(theory),
            Loaded::Lazy { theory, cap } => {
                let (level, size) = (1..=theory.max_dim())
                    .map(|n| (n, theory.level_size(n)))
                    .find(|&(_, size)| size > *cap)
                    .unwrap_or((theory.max_dim(), 0));
                bail!(
                    "{}: level {level} has {size} elements, above the cap {cap}; this command needs every level materialized",
                    theory.oracle().name()
                )
            }
        }
    }

    pub fn oracle(&self) -> Option<&Arc<dyn TheoryOracle>> {
        match self {
            Loaded::Tables { oracle, .. } => oracle.as_ref(),
            Loaded::Lazy { theory, .. } => Some(theory.oracle()),
        }
    }

    pub fn max_dim(&self) -> usize {
        match self {
            Loaded::Tables { theory, .. } => theory.max_dim(),
            Loaded::Lazy { theory, .. } => theory.max_dim(),
        }
    }
}

fn cache_path(name: &str, max_dim: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| PathBuf::from(dir).join(format!("{name}-d{max_dim}.json")))
}

fn load_builtin(name: &str, max_dim: Option<usize>, cap: usize) -> Result<Loaded> {
    let o = oracle(name)?;
    let max_dim = match max_dim {
        Some(d) => d,
        None => default_max_dim(name)?,
    };
    if max_dim == 0 {
        bail!("--max-dim must be positive");
    }
    if let Some(path) = cache_path(name, max_dim) {
        if path.exists() {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let theory = TruncatedSymSS::from_json(&text)
                .with_context(|| format!("cached functor {}", path.display()))?
                .with_name(name);
            return Ok(Loaded::Tables {
                theory: Arc::new(theory),
                oracle: Some(o),
                orbits: None,
            });
        }
    }
    match Theory::build(o.clone(), max_dim, cap)? {
        Theory::Materialized(theory) => {
            if let Some(path) = cache_path(name, max_dim) {
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                }
                std::fs::write(&path, theory.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Loaded::Tables {
                theory,
                oracle: Some(o),
                orbits: None,
            })
        }
        Theory::Lazy(theory) => Ok(Loaded::Lazy { theory, cap }),
    }
}

pub fn read_structure(path: &Path) -> Result<FinStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FinStructure::from_json(&text).with_context(|| format!("structure file {}", path.display()))
}

fn read_functor(path: &Path, max_dim: Option<usize>) -> Result<TruncatedSymSS> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let t = TruncatedSymSS::from_json(&text).with_context(|| format!("functor file {}", path.display()))?;
    if let Some(d) = max_dim {
        if d != t.max_dim() {
            bail!("{} is truncated at {}, not {d}", path.display(), t.max_dim());
        }
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(t.with_name(name))
}

impl SourceArgs {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(name) = &self.builtin {
            return load_builtin(name, self.max_dim, self.cap);
        }
        if let Some(text) = &self.theory {
            if Path::new(text).is_file() {
                let t = read_functor(Path::new(text), self.max_dim)?;
                return Ok(Loaded::Tables {
                    theory: Arc::new(t),
                    oracle: None,
                    orbits: None,
                });
            }
            return load_builtin(text, self.max_dim, self.cap);
        }
        if let Some(path) = &self.structure {
            let m = read_structure(path)?;
            let o = orbit_theory_with_cap(&m, self.max_dim.unwrap_or(STRUCTURE_MAX_DIM), self.cap)?;
            return Ok(Loaded::Tables {
                theory: o.theory.clone(),
                oracle: None,
                orbits: Some(o),
            });
        }
        if let Some(path) = &self.functor {
            return Ok(Loaded::Tables {
                theory: Arc::new(read_functor(path, self.max_dim)?),
                oracle: None,
                orbits: None,
            });
        }
        bail!("give a theory with --builtin, --theory, --structure or --functor")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    source: serde_json::Value,
    #[serde(default)]
    target: Option<serde_json::Value>,
    components: Vec<Vec<u32>>,
}

/// Reads `{"source": functor, "target": functor (optional), "components": [[..], ..]}`.
pub fn read_map(path: &Path, default_target: &Arc<TruncatedSymSS>) -> Result<SimplicialMapHandle> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: MapDoc = serde_json::from_str(&text).with_context(|| format!("map file {}", path.display()))?;
    let source = TruncatedSymSS::from_json(&doc.source.to_string()).context("map source")?;
    let target = match doc.target {
        Some(t) => Arc::new(TruncatedSymSS::from_json(&t.to_string()).context("map target")?),
        None => default_target.clone(),
    };
    Ok(SimplicialMapHandle::new(Arc::new(source), target, doc.components)?)
}
