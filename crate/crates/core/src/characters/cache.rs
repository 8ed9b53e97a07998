//! Process-wide memo of character tables, keyed by group fingerprint.
//!
//! Each key has its own slot lock, so concurrent requests for the same group
//! compute the table once while different groups proceed in parallel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{CharacterTable, TableData};
use crate::error::Result;
use crate::group::GroupTable;

type Slot = Arc<Mutex<Option<Arc<TableData>>>>;

fn slots() -> &'static Mutex<HashMap<String, Slot>> {
    static SLOTS: OnceLock<Mutex<HashMap<String, Slot>>> = OnceLock::new();
    SLOTS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The character table of `group`, computed at most once per process for
/// each distinct labelled table.
pub fn character_table(group: &Arc<GroupTable>) -> Result<CharacterTable> {
    let slot = slots()
        .lock()
        .unwrap()
        .entry(group.fingerprint())
        .or_default()
        .clone();
    let mut guard = slot.lock().unwrap();
    if let Some(data) = guard.as_ref() {
        return Ok(CharacterTable {
            group: group.clone(),
            data: data.clone(),
        });
    }
    let table = CharacterTable::compute(group.clone())?;
    *guard = Some(table.data.clone());
    Ok(table)
}

/// Memoizes a table obtained elsewhere (for example, loaded from disk).
/// Returns false, leaving the memo untouched, if one is already present.
pub fn seed_character_table(table: &CharacterTable) -> bool {
    let slot = slots()
        .lock()
        .unwrap()
        .entry(table.group.fingerprint())
        .or_default()
        .clone();
    let mut guard = slot.lock().unwrap();
    if guard.is_some() {
        return false;
    }
    *guard = Some(table.data.clone());
    true
}

/// Number of tables currently memoized.
pub fn cached_table_count() -> usize {
    slots()
        .lock()
        .unwrap()
        .values()
        .filter(|s| s.lock().unwrap().is_some())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_requests_share_data() {
        let g = Arc::new(GroupTable::parse("dih:6").unwrap());
        let a = character_table(&g).unwrap();
        let b = character_table(&Arc::new(GroupTable::parse("dih:6").unwrap())).unwrap();
        assert!(Arc::ptr_eq(&a.data, &b.data));
        assert!(cached_table_count() >= 1);
    }

    #[test]
    fn seeded_tables_are_reused() {
        let g = Arc::new(GroupTable::parse("ab:3,9").unwrap());
        let t = CharacterTable::compute(g.clone()).unwrap();
        assert!(seed_character_table(&t));
        assert!(!seed_character_table(&t));
        assert!(Arc::ptr_eq(&character_table(&g).unwrap().data, &t.data));
    }
}
