use super::combinatorics::{binomial, k_subsets, subset_rank};
use super::{ArrayKind, ArrayParams, CacheArray, Cell};
use crate::error::{Error, Result};

fn to_usize(x: u128, what: &'static str) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Overflow(what))
}

/// MN PDA for `K` users and `t = KM/N`.
///
/// Rows are the `t`-subsets `T` of the users in lexicographic order. Cell
/// `(T, k)` is a star when `k ∈ T`, otherwise the slot of the
/// `(t + 1)`-subset `T ∪ {k}`, numbered by its lexicographic rank plus one.
pub fn mn_pda(num_users: usize, t: usize) -> Result<CacheArray> {
    if t == 0 || t >= num_users {
        return Err(Error::InvalidParameter(format!(
            "MN PDA needs 1 ≤ t < K (t = {t}, K = {num_users})"
        )));
    }
    let rows = k_subsets(num_users, t);
    let mut cells = Vec::with_capacity(rows.len() * num_users);
    let mut union = Vec::with_capacity(t + 1);
    for subset in &rows {
        for k in 0..num_users {
            if subset.contains(&k) {
                cells.push(Cell::Star);
            } else {
                union.clear();
                union.extend_from_slice(subset);
                union.push(k);
                union.sort_unstable();
                cells.push(Cell::Slot(subset_rank(&union, num_users) + 1));
            }
        }
    }
    let (k, t64) = (num_users as u64, t as u64);
    let params = ArrayParams { t, l0: 1, r: 1, l1: 1 };
    CacheArray::new(
        ArrayKind::Pda,
        params,
        rows.len(),
        num_users,
        cells,
        to_usize(binomial(k, t64 + 1)?, "slot count")?,
        to_usize(binomial(k - 1, t64 - 1)?, "star count")?,
    )
}

/// MS MAPDA with `L1` antennas.
///
/// Rows are pairs `(ℒ, T)` with `ℒ` an `(L1 − 1)`-subset of `[K − t − 1]`
/// (outer) and `T` a `t`-subset of the users (inner). For `k ∉ T` the cell
/// belongs to the `(t + L1)`-set `T ∪ {k} ∪ R[ℒ]`, where `R` lists the users
/// outside `T ∪ {k}` in increasing order. Each such set shows up
/// `C(t + L1 − 1, t)` times in every one of its columns; its `o`-th
/// appearance (top to bottom) in a column carries slot id
/// `rank(set)·C(t + L1 − 1, t) + o + 1`.
pub fn ms_mapda(num_users: usize, t: usize, l1: usize) -> Result<CacheArray> {
    if t == 0 || l1 == 0 || t + l1 > num_users {
        return Err(Error::InvalidParameter(format!(
            "MS MAPDA needs t ≥ 1, L1 ≥ 1 and t + L1 ≤ K (t = {t}, L1 = {l1}, K = {num_users})"
        )));
    }
    let (k64, t64, l64) = (num_users as u64, t as u64, l1 as u64);
    let per_set = to_usize(binomial(t64 + l64 - 1, t64)?, "slot multiplicity")?;
    let num_sets = to_usize(binomial(k64, t64 + l64)?, "set count")?;

    let selectors = k_subsets(num_users - t - 1, l1 - 1);
    let subsets = k_subsets(num_users, t);
    let num_rows = selectors.len() * subsets.len();
    let mut cells = Vec::with_capacity(num_rows * num_users);
    // appearances so far of (set rank, column)
    let mut seen = vec![0usize; num_sets * num_users];
    let mut set = Vec::with_capacity(t + l1);
    for sel in &selectors {
        for subset in &subsets {
            for k in 0..num_users {
                if subset.contains(&k) {
                    cells.push(Cell::Star);
                    continue;
                }
                let rest: Vec<usize> = (0..num_users).filter(|u| *u != k && !subset.contains(u)).collect();
                set.clear();
                set.extend_from_slice(subset);
                set.push(k);
                set.extend(sel.iter().map(|&i| rest[i]));
                set.sort_unstable();
                let rank = subset_rank(&set, num_users);
                let order = &mut seen[rank * num_users + k];
                cells.push(Cell::Slot(rank * per_set + *order + 1));
                *order += 1;
            }
        }
    }
    let stars = to_usize(
        binomial(k64 - 1, t64 - 1)? * binomial(k64 - t64 - 1, l64 - 1)?,
        "star count",
    )?;
    let params = ArrayParams { t, l0: l1, r: 1, l1 };
    CacheArray::new(
        ArrayKind::Mapda,
        params,
        num_rows,
        num_users,
        cells,
        num_sets * per_set,
        stars,
    )
}
