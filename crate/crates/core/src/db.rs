//! Classification database: one JSON object per line, one line per
//! classified group, plus a trailer line carrying `complete_through`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::GroupId;
use crate::signature::Signature;

#[derive(Debug, Error)]
pub enum DbError {
    #[error("line {line}: {msg}")]
    Corrupt { line: usize, msg: String },
    #[error("group {id} already recorded at genus {existing}, cannot add at genus {new}")]
    DuplicateGroup {
        id: GroupId,
        existing: u64,
        new: u64,
    },
    #[error("missing trailer line")]
    MissingTrailer,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Stored witness: generator images as canonical cycle strings. The
/// hyperbolic images come in pairs (a_1,b_1,...), the elliptic images
/// align with the search's descending period order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredWitness {
    pub hyperbolic: Vec<String>,
    pub elliptic: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbRecord {
    pub genus: u64,
    pub order: u64,
    pub index: u64,
    pub name: String,
    pub orbit_genus: u32,
    pub periods: Vec<u64>,
    pub degree: usize,
    pub witness: StoredWitness,
}

impl DbRecord {
    pub fn id(&self) -> GroupId {
        GroupId {
            order: self.order,
            index: self.index,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.orbit_genus, self.periods.clone()).expect("stored periods valid")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Trailer {
    complete_through: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassificationDb {
    records: Vec<DbRecord>,
    by_id: BTreeMap<GroupId, usize>,
    complete_through: u64,
}

impl ClassificationDb {
    /// Empty database; `complete_through` 1 means "nothing above the
    /// torus has been run" — genus 2 may start immediately.
    pub fn new() -> ClassificationDb {
        ClassificationDb {
            records: Vec::new(),
            by_id: BTreeMap::new(),
            complete_through: 1,
        }
    }

    pub fn complete_through(&self) -> u64 {
        self.complete_through
    }

    pub fn set_complete_through(&mut self, g: u64) {
        self.complete_through = g;
    }

    pub fn records(&self) -> &[DbRecord] {
        &self.records
    }

    pub fn records_for_genus(&self, g: u64) -> Vec<&DbRecord> {
        self.records.iter().filter(|r| r.genus == g).collect()
    }

    /// ν(g): number of groups recorded at genus g.
    pub fn nu(&self, g: u64) -> usize {
        self.records.iter().filter(|r| r.genus == g).count()
    }

    pub fn lookup(&self, id: GroupId) -> Option<u64> {
        self.by_id.get(&id).map(|&i| self.records[i].genus)
    }

    pub fn insert(&mut self, rec: DbRecord) -> Result<(), DbError> {
        let id = rec.id();
        if let Some(&i) = self.by_id.get(&id) {
            return Err(DbError::DuplicateGroup {
                id,
                existing: self.records[i].genus,
                new: rec.genus,
            });
        }
        self.by_id.insert(id, self.records.len());
        self.records.push(rec);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::to_string(&Trailer {
                complete_through: self.complete_through,
            })
            .expect("trailer serializes"),
        );
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<ClassificationDb, DbError> {
        let mut db = ClassificationDb::new();
        let mut trailer: Option<u64> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            if trailer.is_some() {
                return Err(DbError::Corrupt {
                    line,
                    msg: "content after trailer".into(),
                });
            }
            if let Ok(t) = serde_json::from_str::<Trailer>(raw) {
                trailer = Some(t.complete_through);
                continue;
            }
            let rec: DbRecord = serde_json::from_str(raw).map_err(|e| DbError::Corrupt {
                line,
                msg: e.to_string(),
            })?;
            if rec.genus < 2 {
                return Err(DbError::Corrupt {
                    line,
                    msg: format!("record genus {} below 2", rec.genus),
                });
            }
            db.insert(rec)?;
        }
        db.complete_through = trailer.ok_or(DbError::MissingTrailer)?;
        Ok(db)
    }

    pub fn load(path: &Path) -> Result<ClassificationDb, DbError> {
        if !path.exists() {
            return Ok(ClassificationDb::new());
        }
        let text = std::fs::read_to_string(path)?;
        if text.trim().is_empty() {
            return Ok(ClassificationDb::new());
        }
        ClassificationDb::from_text(&text)
    }

    /// Atomic store: write to a sibling temp file, then rename over.
    pub fn store(&self, path: &Path) -> Result<(), DbError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}
