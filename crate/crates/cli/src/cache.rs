//! Write-once on-disk cache of character tables, keyed by a hash of the
//! group's multiplication.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use xichar::character::{CharacterTable, TableJson};
use xichar::group::FiniteGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Disabled,
}

#[derive(Clone, Debug)]
pub struct TableCache {
    dir: Option<PathBuf>,
}

/// Hex SHA-256 of the multiplication table. Groups too large for a dense
/// table are keyed by their ambient, element labels and generators, which
/// determine the multiplication just as well.
pub fn group_key(g: &FiniteGroup) -> String {
    let mut h = Sha256::new();
    h.update(b"xichar-table-v1\n");
    h.update((g.order() as u64).to_le_bytes());
    match g.table() {
        Some(t) => {
            h.update(b"dense");
            for &x in t {
                h.update(x.to_le_bytes());
            }
        }
        None => {
            h.update(b"labels");
            h.update(g.ambient().describe().as_bytes());
            for l in g.labels() {
                for &x in l {
                    h.update(x.to_le_bytes());
                }
            }
            for &s in g.generators() {
                h.update((s as u64).to_le_bytes());
            }
        }
    }
    hex::encode(h.finalize())
}

impl TableCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        TableCache { dir }
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join("tables").join(format!("{key}.json"))
    }

    fn load(path: &Path, g: &FiniteGroup) -> Option<CharacterTable> {
        let text = fs::read_to_string(path).ok()?;
        let json: TableJson = serde_json::from_str(&text).ok()?;
        CharacterTable::from_json(g, &json).ok()
    }

    fn store(path: &Path, g: &FiniteGroup, table: &CharacterTable) -> std::io::Result<()> {
        if path.exists() {
            return Ok(());
        }
        let parent = path.parent().expect("cache path has a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(
            ".{}.{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id()
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(&table.to_json(g)).unwrap().as_bytes())?;
        f.sync_all()?;
        // A concurrent writer may have won; its file is equally valid.
        if path.exists() {
            fs::remove_file(&tmp)
        } else {
            fs::rename(&tmp, path)
        }
    }

    /// The table of `g`, from the cache when a valid entry exists.
    pub fn get(&self, g: &FiniteGroup) -> xichar::Result<(CharacterTable, Lookup)> {
        let Some(dir) = &self.dir else {
            return Ok((CharacterTable::compute(g)?, Lookup::Disabled));
        };
        let path = Self::path(dir, &group_key(g));
        if let Some(t) = Self::load(&path, g) {
            return Ok((t, Lookup::Hit));
        }
        let table = CharacterTable::compute(g)?;
        // Unreadable entries are left alone; the cache never rewrites a key.
        if !path.exists() {
            let _ = Self::store(&path, g, &table);
        }
        Ok((table, Lookup::Miss))
    }
}
