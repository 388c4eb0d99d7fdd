//! Source discovery: walk a directory tree and load C++ files.

use std::fs;
use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use walkdir::WalkDir;

use crate::error::CorpusError;

pub const DEFAULT_INCLUDE: &[&str] = &["*.cc", "*.cpp", "*.cxx", "*.h", "*.hpp"];
pub const DEFAULT_MAX_FILE_BYTES: u64 = 8 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Path relative to the corpus root, `/`-separated.
    pub path: String,
    pub component: String,
    pub content: String,
}

impl SourceFile {
    /// A file whose component is taken from its first path segment.
    pub fn new(path: impl Into<String>, content: impl Into<String>) -> Self {
        let path = path.into();
        SourceFile {
            component: default_component(&path).to_string(),
            path,
            content: content.into(),
        }
    }
}

/// First path segment, or `root` for files directly under the corpus root.
pub fn default_component(path: &str) -> &str {
    match path.split_once('/') {
        Some((first, _)) if !first.is_empty() => first,
        _ => "root",
    }
}

/// User-supplied `prefix<TAB>component` overrides; the longest matching
/// prefix wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentMap {
    entries: Vec<(String, String)>,
}

impl ComponentMap {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((prefix, component)) = line.split_once('\t') else {
                return Err(CorpusError::ComponentMap {
                    line: n + 1,
                    message: "expected `prefix<TAB>component`".into(),
                });
            };
            let component = component.trim();
            if component.is_empty() {
                return Err(CorpusError::ComponentMap {
                    line: n + 1,
                    message: "empty component name".into(),
                });
            }
            entries.push((prefix.trim().to_string(), component.to_string()));
        }
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Ok(ComponentMap { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn component_for<'a>(&'a self, path: &'a str) -> &'a str {
        self.entries
            .iter()
            .find(|(prefix, _)| path.starts_with(prefix.as_str()))
            .map_or_else(|| default_component(path), |(_, c)| c.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct DiscoverOptions {
    pub include: Vec<String>,
    pub exclude: Vec<String>,
    pub component_map: Option<ComponentMap>,
    pub max_file_bytes: u64,
}

impl Default for DiscoverOptions {
    fn default() -> Self {
        DiscoverOptions {
            include: DEFAULT_INCLUDE.iter().map(|s| s.to_string()).collect(),
            exclude: Vec::new(),
            component_map: None,
            max_file_bytes: DEFAULT_MAX_FILE_BYTES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Discovery {
    /// Sorted by path.
    pub files: Vec<SourceFile>,
    pub skipped: Vec<SkippedFile>,
}

fn glob_set(patterns: &[String]) -> Result<GlobSet, CorpusError> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        let glob = Glob::new(p).map_err(|e| CorpusError::Glob {
            pattern: p.clone(),
            message: e.to_string(),
        })?;
        builder.add(glob);
    }
    builder.build().map_err(|e| CorpusError::Glob {
        pattern: patterns.join(","),
        message: e.to_string(),
    })
}

/// Find and load every source file under `root` that matches an include
/// pattern and no exclude pattern. Unreadable or oversized files are
/// skipped and listed in [`Discovery::skipped`].
pub fn discover_sources(root: &Path, options: &DiscoverOptions) -> Result<Discovery, CorpusError> {
    let meta = fs::metadata(root).map_err(|source| CorpusError::Root {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(CorpusError::Root {
            path: root.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        });
    }
    fs::read_dir(root).map_err(|source| CorpusError::Root {
        path: root.to_path_buf(),
        source,
    })?;

    let include = glob_set(&options.include)?;
    let exclude = glob_set(&options.exclude)?;

    let mut candidates: Vec<(String, PathBuf)> = Vec::new();
    let mut skipped = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                let path = err
                    .path()
                    .and_then(|p| p.strip_prefix(root).ok())
                    .map(relative_string)
                    .unwrap_or_default();
                skipped.push(SkippedFile {
                    path,
                    reason: err.to_string(),
                });
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let Ok(rel) = entry.path().strip_prefix(root) else {
            continue;
        };
        let rel = relative_string(rel);
        if include.is_match(&rel) && !exclude.is_match(&rel) {
            candidates.push((rel, entry.into_path()));
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0));

    let loaded = load_all(&candidates, options.max_file_bytes);
    let mut files = Vec::with_capacity(loaded.len());
    for ((rel, _), result) in candidates.into_iter().zip(loaded) {
        match result {
            Ok(content) => {
                let component = match &options.component_map {
                    Some(map) => map.component_for(&rel).to_string(),
                    None => default_component(&rel).to_string(),
                };
                files.push(SourceFile {
                    path: rel,
                    component,
                    content,
                });
            }
            Err(reason) => skipped.push(SkippedFile { path: rel, reason }),
        }
    }
    skipped.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(Discovery { files, skipped })
}

fn relative_string(path: &Path) -> String {
    path.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn load_one(path: &Path, max_bytes: u64) -> Result<String, String> {
    let len = fs::metadata(path).map_err(|e| e.to_string())?.len();
    if len > max_bytes {
        return Err(format!("file is {len} bytes, over the {max_bytes}-byte cap"));
    }
    let bytes = fs::read(path).map_err(|e| e.to_string())?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

#[cfg(feature = "parallel")]
fn load_all(candidates: &[(String, PathBuf)], max_bytes: u64) -> Vec<Result<String, String>> {
    use rayon::prelude::*;
    candidates.par_iter().map(|(_, p)| load_one(p, max_bytes)).collect()
}

#[cfg(not(feature = "parallel"))]
fn load_all(candidates: &[(String, PathBuf)], max_bytes: u64) -> Vec<Result<String, String>> {
    candidates.iter().map(|(_, p)| load_one(p, max_bytes)).collect()
}
