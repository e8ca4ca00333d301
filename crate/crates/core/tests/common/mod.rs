#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ris_caching::pda::{CacheArray, Cell};

/// Table of the (2, 7, 35, 5, 70) MS MAPDA, with each slot written as the
/// user set it serves (digits are 1-based users).
pub const MS_TABLE: [&str; 35] = [
    "* 123 123 124 125 126 127",
    "123 * 123 124 125 126 127",
    "123 123 * 134 135 136 137",
    "124 124 134 * 145 146 147",
    "125 125 135 145 * 156 157",
    "126 126 136 146 156 * 167",
    "127 127 137 147 157 167 *",
    "* 124 134 134 135 136 137",
    "124 * 234 234 235 236 237",
    "134 234 * 234 235 236 237",
    "134 234 234 * 245 246 247",
    "135 235 235 245 * 256 257",
    "136 236 236 246 256 * 267",
    "137 237 237 247 257 267 *",
    "* 125 135 145 145 146 147",
    "125 * 235 245 245 246 247",
    "135 235 * 345 345 346 347",
    "145 245 345 * 345 346 347",
    "145 245 345 345 * 356 357",
    "146 246 346 346 356 * 367",
    "147 247 347 347 357 367 *",
    "* 126 136 146 156 156 157",
    "126 * 236 246 256 256 257",
    "136 236 * 346 356 356 357",
    "146 246 346 * 456 456 457",
    "156 256 356 456 * 456 457",
    "156 256 356 456 456 * 467",
    "157 257 357 457 457 467 *",
    "* 127 137 147 157 167 167",
    "127 * 237 247 257 267 267",
    "137 237 * 347 357 367 367",
    "147 247 347 * 457 467 467",
    "157 257 357 457 * 567 567",
    "167 267 367 467 567 * 567",
    "167 267 367 467 567 567 *",
];

pub type Label = Option<BTreeSet<usize>>;

pub fn parse_table(rows: &[&str]) -> Vec<Vec<Label>> {
    rows.iter()
        .map(|row| {
            row.split_whitespace()
                .map(|cell| match cell {
                    "*" => None,
                    digits => Some(digits.bytes().map(|b| (b - b'1') as usize).collect()),
                })
                .collect()
        })
        .collect()
}

/// Checks that `arr` equals `labels` up to a relabeling that maps every
/// integer slot id to a single set label. Returns that map.
pub fn match_up_to_relabeling(
    arr: &CacheArray,
    labels: &[Vec<Label>],
) -> Result<HashMap<usize, BTreeSet<usize>>, String> {
    if arr.rows() != labels.len() {
        return Err(format!("{} rows vs {} labelled rows", arr.rows(), labels.len()));
    }
    let mut map: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (f, row) in labels.iter().enumerate() {
        if row.len() != arr.cols() {
            return Err(format!("row {f} has {} labels", row.len()));
        }
        for (k, label) in row.iter().enumerate() {
            match (arr.get(f, k), label) {
                (Cell::Star, None) => {}
                (Cell::Slot(s), Some(set)) => {
                    let prev = map.entry(s).or_insert_with(|| set.clone());
                    if prev != set {
                        return Err(format!("slot {s} carries labels {prev:?} and {set:?}"));
                    }
                }
                (cell, label) => return Err(format!("row {f}, column {k}: {cell:?} vs {label:?}")),
            }
        }
    }
    Ok(map)
}

/// Row `i`, column `k`: star on the diagonal, else the pair `{i, k}`.
pub fn pair_table(users: usize) -> Vec<Vec<Label>> {
    (0..users)
        .map(|i| (0..users).map(|k| (i != k).then(|| BTreeSet::from([i, k]))).collect())
        .collect()
}

