use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::{CacheArray, Cell, SlotGroupStructure};

/// One failed array condition, with enough coordinates to locate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Violation {
    /// C1: wrong number of stars in a column.
    StarCount { column: usize, found: usize, expected: usize },
    /// C2: a slot id in `[S]` never appears.
    MissingSlot { slot: usize },
    SlotOutOfRange { row: usize, column: usize, slot: usize },
    /// C3: a slot id appears more than once in a column.
    RepeatedInColumn { slot: usize, column: usize, rows: Vec<usize> },
    /// C4 (MAPDA): too many integer entries in a row of the slot's subarray.
    RowOverload { slot: usize, row: usize, integers: usize, limit: usize },
    /// C4 (RMAPDA): no group structure recorded for the slot.
    MissingGroups { slot: usize },
    GroupCount { slot: usize, found: usize, expected: usize },
    OverlappingGroups { slot: usize, user: usize },
    /// The columns holding the slot differ from the users of its groups.
    ColumnMismatch { slot: usize, columns: Vec<usize>, users: Vec<usize> },
    GroupRowOverload { slot: usize, group: usize, row: usize, integers: usize, limit: usize },
}

impl Violation {
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::StarCount { .. } => "C1",
            Violation::MissingSlot { .. } | Violation::SlotOutOfRange { .. } => "C2",
            Violation::RepeatedInColumn { .. } => "C3",
            _ => "C4",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.condition(), self)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, condition: &str) -> usize {
        self.violations.iter().filter(|v| v.condition() == condition).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// C1–C3, shared by every array family.
fn check_basic(arr: &CacheArray, out: &mut Vec<Violation>) {
    for column in 0..arr.cols() {
        let found = arr.stars_in_column(column);
        if found != arr.z() {
            out.push(Violation::StarCount {
                column,
                found,
                expected: arr.z(),
            });
        }
    }
    for row in 0..arr.rows() {
        for column in 0..arr.cols() {
            if let Cell::Slot(slot) = arr.get(row, column) {
                if slot > arr.num_slots() {
                    out.push(Violation::SlotOutOfRange { row, column, slot });
                }
            }
        }
    }
    for (idx, occ) in arr.slot_occurrences().iter().enumerate() {
        let slot = idx + 1;
        if occ.is_empty() {
            out.push(Violation::MissingSlot { slot });
            continue;
        }
        let mut by_column: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(row, column) in occ {
            by_column.entry(column).or_default().push(row);
        }
        let mut repeated: Vec<_> = by_column.into_iter().filter(|(_, rows)| rows.len() > 1).collect();
        repeated.sort();
        for (column, rows) in repeated {
            out.push(Violation::RepeatedInColumn { slot, column, rows });
        }
    }
}

fn integers_in_row(arr: &CacheArray, row: usize, columns: &BTreeSet<usize>) -> usize {
    columns.iter().filter(|&&c| !arr.get(row, c).is_star()).count()
}

/// C1–C4 for a MAPDA with `antennas` transmit antennas.
pub fn validate_mapda(arr: &CacheArray, antennas: usize) -> ValidationReport {
    let mut violations = Vec::new();
    check_basic(arr, &mut violations);
    let limit = antennas.min(arr.cols());
    for (idx, occ) in arr.slot_occurrences().iter().enumerate() {
        let columns: BTreeSet<usize> = occ.iter().map(|&(_, c)| c).collect();
        let rows: BTreeSet<usize> = occ.iter().map(|&(r, _)| r).collect();
        for row in rows {
            let integers = integers_in_row(arr, row, &columns);
            if integers > limit {
                violations.push(Violation::RowOverload {
                    slot: idx + 1,
                    row,
                    integers,
                    limit,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// A PDA is a MAPDA with one antenna.
pub fn validate_pda(arr: &CacheArray) -> ValidationReport {
    validate_mapda(arr, 1)
}

/// C1–C3 plus the grouped C4: the columns of each slot split into `r`
/// column-disjoint groups as recorded in `groups`; the large group may have
/// up to `L0 − r + 1` integers per row, every other group at most one.
pub fn validate_rmapda(arr: &CacheArray, groups: &[SlotGroupStructure], l0: usize, r: usize) -> ValidationReport {
    let mut violations = Vec::new();
    check_basic(arr, &mut violations);
    let big_limit = (l0 + 1).saturating_sub(r);
    let by_slot: HashMap<usize, &SlotGroupStructure> = groups.iter().map(|g| (g.slot, g)).collect();

    for (idx, occ) in arr.slot_occurrences().iter().enumerate() {
        let slot = idx + 1;
        if occ.is_empty() {
            continue;
        }
        let Some(structure) = by_slot.get(&slot) else {
            violations.push(Violation::MissingGroups { slot });
            continue;
        };
        if structure.num_groups() != r {
            violations.push(Violation::GroupCount {
                slot,
                found: structure.num_groups(),
                expected: r,
            });
        }
        let mut seen = BTreeSet::new();
        for user in structure.groups().flat_map(|g| g.users.iter().copied()) {
            if !seen.insert(user) {
                violations.push(Violation::OverlappingGroups { slot, user });
            }
        }
        let columns: BTreeSet<usize> = occ.iter().map(|&(_, c)| c).collect();
        if columns != seen {
            violations.push(Violation::ColumnMismatch {
                slot,
                columns: columns.iter().copied().collect(),
                users: seen.iter().copied().collect(),
            });
        }
        for (group, members) in structure.groups().enumerate() {
            let limit = if group == 0 { big_limit } else { 1 };
            let group_columns: BTreeSet<usize> = members.users.iter().copied().filter(|&u| u < arr.cols()).collect();
            let rows: BTreeSet<usize> = occ
                .iter()
                .filter(|(_, c)| group_columns.contains(c))
                .map(|&(row, _)| row)
                .collect();
            for row in rows {
                let integers = integers_in_row(arr, row, &group_columns);
                if integers > limit {
                    violations.push(Violation::GroupRowOverload {
                        slot,
                        group,
                        row,
                        integers,
                        limit,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}
