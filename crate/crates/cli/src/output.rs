use std::io::Write;
use std::path::Path;

use gauge_core::harness::{default_corpus_doc, float_corpus_doc, CorpusDoc, CorpusEntry};
use gauge_core::{Backend, Scalar};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// File-name-safe form of an id or a scalar literal.
pub fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Loads the corpus file, or the built-in corpus for the backend, and
/// applies the id filter.
pub fn load_corpus<S: Scalar>(path: Option<&Path>, filter: &[String]) -> CliResult<Vec<CorpusEntry<S>>> {
    let all = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            let doc: CorpusDoc =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let mut seen = std::collections::BTreeSet::new();
            if let Some(dup) = doc.functions.iter().find(|f| !seen.insert(f.id.clone())) {
                return Err(CliError::Config(format!("{}: duplicate id `{}`", p.display(), dup.id)));
            }
            let mut entries = Vec::with_capacity(doc.functions.len());
            for item in &doc.functions {
                let function =
                    item.function.build::<S>().map_err(|e| CliError::from_core(&item.id, e))?;
                entries.push(CorpusEntry { id: item.id.clone(), function });
            }
            entries
        }
        None => builtin::<S>(),
    };
    if let Some(missing) = filter.iter().find(|id| !all.iter().any(|e| &e.id == *id)) {
        return Err(CliError::Config(format!("unknown function id `{missing}`")));
    }
    Ok(all.into_iter().filter(|e| filter.is_empty() || filter.contains(&e.id)).collect())
}

fn builtin<S: Scalar>() -> Vec<CorpusEntry<S>> {
    let mut doc = default_corpus_doc();
    if S::BACKEND == Backend::Float {
        // Transcendental members need the float backend.
        doc.functions.extend(float_corpus_doc().functions);
    }
    doc.build::<S>().expect("built-in corpus builds")
}
