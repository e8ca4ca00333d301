use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArrayKind, ArrayParams, CacheArray, Cell, Rmapda, SlotGroupStructure};
use crate::error::{Error, Result};

/// A cell on disk: the string `"*"` or a positive slot id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonCell {
    Slot(usize),
    Text(String),
}

/// JSON form of an array, optionally with the per-slot group structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayFile {
    pub kind: ArrayKind,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    pub real_users: usize,
    pub params: ArrayParams,
    cells: Vec<Vec<JsonCell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot_groups: Option<Vec<SlotGroupStructure>>,
}

impl ArrayFile {
    pub fn from_array(arr: &CacheArray) -> Self {
        let cells = (0..arr.rows())
            .map(|f| {
                arr.row(f)
                    .iter()
                    .map(|c| match *c {
                        Cell::Star => JsonCell::Text("*".into()),
                        Cell::Slot(s) => JsonCell::Slot(s),
                    })
                    .collect()
            })
            .collect();
        Self {
            kind: arr.kind(),
            k: arr.cols(),
            f: arr.rows(),
            s: arr.num_slots(),
            z: arr.z(),
            real_users: arr.real_users(),
            params: arr.params(),
            cells,
            slot_groups: None,
        }
    }

    pub fn from_rmapda(rm: &Rmapda) -> Self {
        Self {
            slot_groups: Some(rm.groups.clone()),
            ..Self::from_array(&rm.array)
        }
    }

    pub fn to_array(&self) -> Result<CacheArray> {
        if self.cells.len() != self.f {
            return Err(Error::Parse(format!("F = {} but {} rows present", self.f, self.cells.len())));
        }
        let mut cells = Vec::with_capacity(self.f * self.k);
        for (row, entries) in self.cells.iter().enumerate() {
            if entries.len() != self.k {
                return Err(Error::Parse(format!("row {row} has {} cells, expected K = {}", entries.len(), self.k)));
            }
            for (col, entry) in entries.iter().enumerate() {
                cells.push(match entry {
                    JsonCell::Text(t) if t == "*" => Cell::Star,
                    JsonCell::Slot(s) if *s >= 1 => Cell::Slot(*s),
                    other => {
                        return Err(Error::Parse(format!("row {row}, column {col}: bad cell {other:?}")));
                    }
                });
            }
        }
        CacheArray::new(self.kind, self.params, self.f, self.k, cells, self.s, self.z)?.with_real_users(self.real_users)
    }

    /// Rebuilds an RMAPDA; fails when no group structure was stored.
    pub fn to_rmapda(&self) -> Result<Rmapda> {
        let groups = self
            .slot_groups
            .clone()
            .ok_or_else(|| Error::Parse("file has no slot_groups".into()))?;
        Ok(Rmapda {
            array: self.to_array()?,
            groups,
            counts: None,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
