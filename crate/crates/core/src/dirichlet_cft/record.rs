//! JSONL extension records and the on-disk enumeration cache.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{enumerate, GExtension};
use crate::abelian_group::{Element, FinAbGroup};
use crate::error::{Error, Result};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSymbolRecord {
    pub p: u64,
    pub inertia_basis: Vec<Vec<u64>>,
    pub frobenius: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionRecord {
    pub group: String,
    pub modulus: u64,
    pub generator_orders: Vec<u64>,
    pub images: Vec<Vec<u64>>,
    pub conductor: u64,
    pub discriminant: String,
    pub conjugation: Vec<u64>,
    pub local_symbols: Vec<LocalSymbolRecord>,
}

impl ExtensionRecord {
    pub fn from_extension(ext: &GExtension) -> ExtensionRecord {
        ExtensionRecord {
            group: ext.group().spec_string(),
            modulus: ext.modulus,
            generator_orders: ext.generator_orders(),
            images: ext.images().into_iter().map(Element::into_exps).collect(),
            conductor: ext.conductor(),
            discriminant: ext.discriminant().to_string(),
            conjugation: ext.conjugation().into_exps(),
            local_symbols: ext
                .ramified_symbols()
                .into_iter()
                .map(|s| LocalSymbolRecord {
                    p: match s.place {
                        super::Place::Finite(p) => p,
                        super::Place::Real => 0,
                    },
                    inertia_basis: s.inertia.generators().into_iter().map(Element::into_exps).collect(),
                    frobenius: s.frobenius.into_exps(),
                })
                .collect(),
        }
    }

    pub fn to_extension(&self, target: &Arc<FinAbGroup>) -> Result<GExtension> {
        if target.spec_string() != self.group {
            return Err(Error::Argument(format!(
                "record for {} read as {}",
                self.group,
                target.spec_string()
            )));
        }
        let images: Vec<Element> = self.images.iter().map(|v| Element::new(v.clone())).collect();
        GExtension::from_images(target.clone(), self.modulus, &images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub group: String,
    pub bound: String,
}

/// Writes one JSON value per line to `path` through a temporary file in the
/// same directory, renamed into place on success.
pub fn write_jsonl_atomic<H: Serialize, T: Serialize>(path: &Path, header: Option<&H>, rows: &[T]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        if let Some(h) = header {
            serde_json::to_writer(&mut w, h)?;
            w.write_all(b"\n")?;
        }
        for r in rows {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Reads extension records, skipping a leading cache header if present.
pub fn read_jsonl(path: &Path) -> Result<(Option<CacheHeader>, Vec<ExtensionRecord>)> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = None;
    let mut rows = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if n == 0 {
            if let Ok(h) = serde_json::from_str::<CacheHeader>(&line) {
                header = Some(h);
                continue;
            }
        }
        rows.push(serde_json::from_str(&line)?);
    }
    Ok((header, rows))
}

pub fn cache_path(dir: &Path, group: &FinAbGroup, bound: u128) -> PathBuf {
    dir.join(format!(
        "ext_{}_{}_v{}.jsonl",
        group.spec_string(),
        bound,
        CACHE_FORMAT_VERSION
    ))
}

/// Loads the enumeration for `(group, bound)` from `dir`, regenerating it when
/// the cache is absent, unreadable or written by another format version.
/// Returns the extensions and whether the cache was used.
pub fn load_or_enumerate(group: &FinAbGroup, bound: u128, dir: &Path) -> Result<(Vec<GExtension>, bool)> {
    let path = cache_path(dir, group, bound);
    let want = CacheHeader {
        format_version: CACHE_FORMAT_VERSION,
        group: group.spec_string(),
        bound: bound.to_string(),
    };
    let target = Arc::new(group.clone());
    if path.exists() {
        if let Ok((Some(h), rows)) = read_jsonl(&path) {
            if h == want {
                let exts: Result<Vec<GExtension>> = rows.iter().map(|r| r.to_extension(&target)).collect();
                if let Ok(exts) = exts {
                    return Ok((exts, true));
                }
            }
        }
    }
    let exts = enumerate(group, bound)?;
    let rows: Vec<ExtensionRecord> = exts.iter().map(ExtensionRecord::from_extension).collect();
    write_jsonl_atomic(&path, Some(&want), &rows)?;
    Ok((exts, false))
}
