//! Placement delivery arrays.
//!
//! An `F × K` array over `{*, 1, …, S}` encodes a coded caching scheme:
//! a star at `(f, k)` means user `k` caches packet `f` of every file, and
//! slot id `s` at `(f, k)` means packet `f` of user `k`'s requested file is
//! delivered in time slot `s`.
//!
//! Three families are built here: the MN PDA (single antenna), the MS MAPDA
//! (a multi-antenna array whose slots serve `t + L1` users), and the RMAPDA,
//! which stacks replicas of both and merges one MS slot with `r − 1` MN
//! slots into every combined slot so that each slot serves `r` disjoint
//! user groups.

mod combinatorics;
mod construct;
mod json;
mod matching;
mod rmapda;
mod validate;

pub use combinatorics::{binomial, block_partitions, disjoint_block_collections, k_subsets, subset_rank};
pub use construct::{mn_pda, ms_mapda};
pub use json::ArrayFile;
pub use matching::max_flow_assignment;
pub use rmapda::{build_rmapda, degree_identity, replication_counts, DegreeIdentity, ReplicationCounts, Rmapda};
pub use validate::{validate_mapda, validate_pda, validate_rmapda, ValidationReport, Violation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Star,
    Slot(usize),
}

impl Cell {
    pub fn is_star(self) -> bool {
        matches!(self, Cell::Star)
    }

    pub fn slot(self) -> Option<usize> {
        match self {
            Cell::Star => None,
            Cell::Slot(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ArrayKind {
    Pda,
    Mapda,
    Rmapda,
}

/// Construction parameters. For a PDA `l0 = l1 = r = 1`; for a MAPDA with
/// `L` antennas `l0 = l1 = L`, `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayParams {
    pub t: usize,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub r: usize,
    #[serde(rename = "L1")]
    pub l1: usize,
}

impl ArrayParams {
    /// Users served per slot, `L0 + t·r`.
    pub fn sum_dof(&self) -> usize {
        self.l0 + self.t * self.r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheArray {
    kind: ArrayKind,
    params: ArrayParams,
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    num_slots: usize,
    stars_per_column: usize,
    real_users: usize,
}

impl CacheArray {
    /// `cells` is row-major with `rows·cols` entries; `stars_per_column` is
    /// the declared `Z` that validation checks against.
    pub fn new(
        kind: ArrayKind,
        params: ArrayParams,
        rows: usize,
        cols: usize,
        cells: Vec<Cell>,
        num_slots: usize,
        stars_per_column: usize,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("array dimensions must be positive".into()));
        }
        if cells.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: cells.len(),
            });
        }
        if let Some(pos) = cells.iter().position(|c| *c == Cell::Slot(0)) {
            return Err(Error::InvalidParameter(format!(
                "slot ids start at 1 (row {}, column {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self {
            kind,
            params,
            rows,
            cols,
            cells,
            num_slots,
            stars_per_column,
            real_users: cols,
        })
    }

    /// Marks columns `real_users..` as virtual (padding) users.
    pub fn with_real_users(mut self, real_users: usize) -> Result<Self> {
        if real_users == 0 || real_users > self.cols {
            return Err(Error::InvalidParameter(format!(
                "real user count {real_users} must lie in [1, {}]",
                self.cols
            )));
        }
        self.real_users = real_users;
        Ok(self)
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn params(&self) -> ArrayParams {
        self.params
    }

    /// Number of packets per file, `F`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of users `K`, including virtual ones.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn real_users(&self) -> usize {
        self.real_users
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    /// Declared number of stars per column, `Z`.
    pub fn z(&self) -> usize {
        self.stars_per_column
    }

    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, cell: Cell) {
        self.cells[row * self.cols + col] = cell;
    }

    pub fn set_num_slots(&mut self, num_slots: usize) {
        self.num_slots = num_slots;
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn stars_in_column(&self, col: usize) -> usize {
        (0..self.rows).filter(|&f| self.get(f, col).is_star()).count()
    }

    /// `(row, column)` positions of every slot id; index `s − 1` holds slot `s`.
    /// Ids above the declared `S` are ignored.
    pub fn slot_occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.num_slots];
        for (pos, cell) in self.cells.iter().enumerate() {
            if let Cell::Slot(s) = *cell {
                if s <= self.num_slots {
                    occ[s - 1].push((pos / self.cols, pos % self.cols));
                }
            }
        }
        occ
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserGroup {
    pub users: Vec<usize>,
    pub antennas: Vec<usize>,
}

/// Who is served in one slot: a large group of `t + L1` users on antennas
/// `0..L1`, and `r − 1` groups of `t + 1` users on one antenna each
/// (`L1 + i` for the `i`-th small group).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotGroupStructure {
    pub slot: usize,
    pub big_group: UserGroup,
    pub small_groups: Vec<UserGroup>,
}

impl SlotGroupStructure {
    pub fn groups(&self) -> impl Iterator<Item = &UserGroup> {
        std::iter::once(&self.big_group).chain(self.small_groups.iter())
    }

    pub fn num_groups(&self) -> usize {
        1 + self.small_groups.len()
    }

    pub fn all_users(&self) -> Vec<usize> {
        let mut users: Vec<usize> = self.groups().flat_map(|g| g.users.iter().copied()).collect();
        users.sort_unstable();
        users
    }

    /// Index of the group serving `user`, if any.
    pub fn group_of(&self, user: usize) -> Option<usize> {
        self.groups().position(|g| g.users.contains(&user))
    }
}
