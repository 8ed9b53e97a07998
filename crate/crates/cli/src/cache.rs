//! On-disk character-table cache: one JSON file per group fingerprint.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use isoprod_core::characters::{
    character_table, seed_character_table, CharacterTable, TableExport,
};
use isoprod_core::group::GroupTable;
use isoprod_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Bumped whenever the table layout or character ordering changes.
pub const CACHE_VERSION: &str = concat!("isoprod-chartab/1/", env!("CARGO_PKG_VERSION"));

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    fingerprint: String,
    table: TableExport,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Disk,
    Computed,
}

impl DiskCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        DiskCache { dir }
    }

    pub fn disabled() -> Self {
        DiskCache { dir: None }
    }

    pub fn path_for(&self, group: &GroupTable) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", group.fingerprint())))
    }

    /// The table of `group`, read from disk when a valid entry exists and
    /// written back after computing otherwise. Either way the table is also
    /// memoized in-process. Unreadable or stale entries are recomputed.
    pub fn table(&self, group: &Arc<GroupTable>) -> Result<(CharacterTable, Source)> {
        let Some(path) = self.path_for(group) else {
            return Ok((character_table(group)?, Source::Computed));
        };
        if let Some(table) = load(&path, group) {
            seed_character_table(&table);
            return Ok((character_table(group)?, Source::Disk));
        }
        let table = character_table(group)?;
        store(&path, group, &table)?;
        Ok((table, Source::Computed))
    }
}

fn load(path: &Path, group: &Arc<GroupTable>) -> Option<CharacterTable> {
    let text = fs::read_to_string(path).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    if entry.version != CACHE_VERSION || entry.fingerprint != group.fingerprint() {
        return None;
    }
    CharacterTable::from_export(group.clone(), entry.table).ok()
}

fn store(path: &Path, group: &GroupTable, table: &CharacterTable) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let entry = Entry {
        version: CACHE_VERSION.to_string(),
        fingerprint: group.fingerprint(),
        table: table.export(),
    };
    // Write then rename so concurrent readers never see a partial file.
    let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&entry)?).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}
