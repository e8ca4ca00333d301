//! RMAPDA assembly.
//!
//! The MS MAPDA supplies the large group of every slot and the MN PDA the
//! `r − 1` single-antenna groups. Their slot counts differ, so the MN PDA is
//! stacked `n1·n2` times and the MS MAPDA `m` times until both sides offer
//! the same number of slots. Pairing is a degree-constrained matching in
//! the bipartite graph between `(t + L1)`-user sets (each offering
//! `m·C(t + L1 − 1, t)` MS slot replicas) and collections of `r − 1`
//! disjoint `(t + 1)`-user sets (each to be used `n2` times), with an edge
//! whenever the two sides share no user.
//!
//! The graph is biregular, so spreading every set's replicas evenly over its
//! neighbours is a feasible fractional assignment; the integral one is
//! obtained by max-flow with each edge capped at the ceiling of that even
//! share. Slots are then numbered in lexicographic order of
//! (large set, collection, replica).

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::combinatorics::{binomial, disjoint_block_collections, factorial, k_subsets, subset_rank};
use super::construct::{mn_pda, ms_mapda};
use super::matching::max_flow_assignment;
use super::validate::{validate_rmapda, ValidationReport};
use super::{ArrayKind, ArrayParams, CacheArray, Cell, SlotGroupStructure, UserGroup};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicationCounts {
    /// Times each `(t + 1)`-set must be offered so that every collection of
    /// `r − 1` disjoint sets can be formed once.
    pub n1: u128,
    /// Extra stacking of the MN side to balance slot counts.
    pub n2: u128,
    /// Stacking of the MS MAPDA.
    pub m: u128,
    /// Total rows `F` of the assembled array.
    pub f_total: u128,
    /// Combined slots `S`.
    pub num_slots: u128,
    /// MS slots per `(t + L1)`-set, `C(t + L1 − 1, t)`.
    pub slots_per_big_set: u128,
    /// `|X1| = C(K, t + L1)`.
    pub big_sets: u128,
    /// `|Y1|`, the number of collections of `r − 1` disjoint `(t + 1)`-sets.
    pub collections: u128,
}

impl ReplicationCounts {
    /// Both sides of the replica balance
    /// `m·C(t + L1 − 1, t)·C(K, t + L1) = n2·|Y1|`.
    pub fn balance(&self) -> (u128, u128) {
        (
            self.m * self.slots_per_big_set * self.big_sets,
            self.n2 * self.collections,
        )
    }
}

fn checked_product(mut factors: impl Iterator<Item = Result<u128>>, what: &'static str) -> Result<u128> {
    factors.try_fold(1u128, |acc, f| acc.checked_mul(f?).ok_or(Error::Overflow(what)))
}

fn check_shape(num_users: u64, t: u64, l1: u64, r: u64) -> Result<()> {
    if t == 0 || l1 == 0 {
        return Err(Error::InvalidParameter(format!("need t ≥ 1 and L1 ≥ 1 (t = {t}, L1 = {l1})")));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(format!("replication needs r ≥ 2 groups (r = {r})")));
    }
    let g = (t + l1) + (r - 1) * (t + 1);
    if num_users < g {
        return Err(Error::Infeasible(format!(
            "K = {num_users} users cannot fill {g} disjoint group slots; pad with {} virtual users",
            g - num_users
        )));
    }
    Ok(())
}

/// `Π_{i=from}^{r−2} C(K − i(t + 1), t + 1)` (optionally offset by `skip` users).
fn block_product(num_users: u64, skip: u64, t: u64, from: u64, r: u64) -> Result<u128> {
    checked_product(
        (from..r - 1).map(|i| binomial(num_users - skip - i * (t + 1), t + 1)),
        "block product",
    )
}

pub fn replication_counts(num_users: u64, t: u64, l1: u64, r: u64) -> Result<ReplicationCounts> {
    check_shape(num_users, t, l1, r)?;
    let k = num_users;
    let slots_per_big_set = binomial(t + l1 - 1, t)?;
    let big_sets = binomial(k, t + l1)?;
    let x_side = slots_per_big_set
        .checked_mul(big_sets)
        .ok_or(Error::Overflow("MS slot count"))?;
    let collections = block_product(k, 0, t, 0, r)? / factorial(r - 1)?;
    let n1 = block_product(k, 0, t, 1, r)? / factorial(r - 2)?;
    let lcm = x_side.lcm(&collections);
    let m = lcm / x_side;
    let n2 = lcm / collections;
    let mn_rows = binomial(k, t)?;
    let ms_rows = binomial(k - t - 1, l1 - 1)?
        .checked_mul(mn_rows)
        .ok_or(Error::Overflow("MS row count"))?;
    let f_total = m
        .checked_mul(ms_rows)
        .and_then(|a| n1.checked_mul(n2)?.checked_mul(mn_rows)?.checked_add(a))
        .ok_or(Error::Overflow("subpacketization"))?;
    Ok(ReplicationCounts {
        n1,
        n2,
        m,
        f_total,
        num_slots: lcm,
        slots_per_big_set,
        big_sets,
        collections,
    })
}

/// Vertex degrees of the pairing graph before and after replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeIdentity {
    /// Collections disjoint from a given `(t + L1)`-set.
    pub d_x1: u128,
    /// `(t + L1)`-sets disjoint from a given collection.
    pub d_y1: u128,
    /// `n2·d_x1`.
    pub d_x: u128,
    /// `m·C(t + L1 − 1, t)·d_y1`.
    pub d_y: u128,
    pub x_vertices: u128,
    pub y_vertices: u128,
}

impl DegreeIdentity {
    pub fn holds(&self) -> bool {
        self.d_x == self.d_y && self.x_vertices == self.y_vertices
    }
}

pub fn degree_identity(num_users: u64, t: u64, l1: u64, r: u64) -> Result<DegreeIdentity> {
    let counts = replication_counts(num_users, t, l1, r)?;
    let d_x1 = block_product(num_users, t + l1, t, 0, r)? / factorial(r - 1)?;
    let d_y1 = binomial(num_users - (r - 1) * (t + 1), t + l1)?;
    let (x_vertices, y_vertices) = counts.balance();
    Ok(DegreeIdentity {
        d_x1,
        d_y1,
        d_x: counts.n2 * d_x1,
        d_y: counts.m * counts.slots_per_big_set * d_y1,
        x_vertices,
        y_vertices,
    })
}

/// An assembled RMAPDA with the group structure of every slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rmapda {
    pub array: CacheArray,
    /// Entry `s − 1` describes slot `s`.
    pub groups: Vec<SlotGroupStructure>,
    /// `None` for a single group, where no replication happens.
    pub counts: Option<ReplicationCounts>,
}

impl Rmapda {
    pub fn slot_groups(&self, slot: usize) -> Result<&SlotGroupStructure> {
        slot.checked_sub(1)
            .and_then(|i| self.groups.get(i))
            .filter(|g| g.slot == slot)
            .or_else(|| self.groups.iter().find(|g| g.slot == slot))
            .ok_or(Error::UnknownSlot(slot))
    }

    pub fn validate(&self) -> ValidationReport {
        let p = self.array.params();
        validate_rmapda(&self.array, &self.groups, p.l0, p.r)
    }

    /// Users per slot, `L0 + t·r` (virtual users included).
    pub fn sum_dof(&self) -> usize {
        self.array.params().sum_dof()
    }
}

fn to_usize(x: u128, what: &'static str) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Overflow(what))
}

/// Builds the RMAPDA for `K` users, `t = KM/N`, `L0` active antennas in `r`
/// groups. When `L0 + t·r > K` the array is built for `L0 + t·r` users and
/// the extra columns are marked virtual.
pub fn build_rmapda(num_users: usize, t: usize, l0: usize, r: usize) -> Result<Rmapda> {
    if t == 0 || r == 0 || l0 < r {
        return Err(Error::InvalidParameter(format!(
            "need t ≥ 1 and 1 ≤ r ≤ L0 (t = {t}, L0 = {l0}, r = {r})"
        )));
    }
    if num_users == 0 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    let l1 = l0 - r + 1;
    let g = l0 + t * r;
    let k = num_users.max(g);
    let params = ArrayParams { t, l0, r, l1 };

    if r == 1 {
        let ms = ms_mapda(k, t, l1)?;
        let groups = ms
            .slot_occurrences()
            .iter()
            .enumerate()
            .map(|(i, occ)| {
                let mut users: Vec<usize> = occ.iter().map(|&(_, c)| c).collect();
                users.sort_unstable();
                SlotGroupStructure {
                    slot: i + 1,
                    big_group: UserGroup {
                        users,
                        antennas: (0..l1).collect(),
                    },
                    small_groups: Vec::new(),
                }
            })
            .collect();
        let array = CacheArray::new(
            ArrayKind::Rmapda,
            params,
            ms.rows(),
            k,
            ms.cells().to_vec(),
            ms.num_slots(),
            ms.z(),
        )?
        .with_real_users(num_users)?;
        return Ok(Rmapda {
            array,
            groups,
            counts: None,
        });
    }

    let counts = replication_counts(k as u64, t as u64, l1 as u64, r as u64)?;
    let mn = mn_pda(k, t)?;
    let ms = ms_mapda(k, t, l1)?;
    let per_set = to_usize(counts.slots_per_big_set, "slots per set")?;
    let m = to_usize(counts.m, "MS replication")?;
    let mn_copies = to_usize(counts.n1 * counts.n2, "MN replication")?;
    let n2 = counts.n2 as u64;

    let big_sets = k_subsets(k, t + l1);
    let all_users: Vec<usize> = (0..k).collect();
    let collections = disjoint_block_collections(&all_users, t + 1, r - 1);
    let collection_index: HashMap<&Vec<Vec<usize>>, usize> =
        collections.iter().enumerate().map(|(i, c)| (c, i)).collect();

    let mut edges = Vec::new();
    let mut neighbours = None;
    for (a, set) in big_sets.iter().enumerate() {
        let pool: Vec<usize> = all_users.iter().copied().filter(|u| !set.contains(u)).collect();
        let adjacent = disjoint_block_collections(&pool, t + 1, r - 1);
        neighbours.get_or_insert(adjacent.len());
        for c in &adjacent {
            edges.push((a, collection_index[c]));
        }
    }
    let degree = neighbours.unwrap_or(0) as u64;
    let offered = (m * per_set) as u64;
    if degree == 0 {
        return Err(Error::ReplicaExhaustion("no collection is disjoint from a large set".into()));
    }
    let (flows, total) = max_flow_assignment(
        &vec![offered; big_sets.len()],
        &vec![n2; collections.len()],
        &edges,
        offered.div_ceil(degree),
    );
    let needed = offered * big_sets.len() as u64;
    if total != needed {
        return Err(Error::ReplicaExhaustion(format!(
            "matching covered {total} of {needed} MS slot replicas"
        )));
    }

    // combined slot id for (copy, original slot id − 1)
    let mut ms_slot = vec![vec![0usize; ms.num_slots()]; m];
    let mut mn_slot = vec![vec![0usize; mn.num_slots()]; mn_copies];
    let mut ms_used = vec![0usize; big_sets.len()];
    let mut mn_used = vec![0usize; mn.num_slots()];
    let mut groups = Vec::with_capacity(needed as usize);
    for (&(a, c), &flow) in edges.iter().zip(&flows) {
        for _ in 0..flow {
            let slot = groups.len() + 1;
            let replica = ms_used[a];
            ms_used[a] += 1;
            let (copy, order) = (replica / per_set, replica % per_set);
            if copy >= m {
                return Err(Error::ReplicaExhaustion(format!("large set {:?} over-used", big_sets[a])));
            }
            ms_slot[copy][a * per_set + order] = slot;
            let mut small_groups = Vec::with_capacity(r - 1);
            for (i, block) in collections[c].iter().enumerate() {
                let b = subset_rank(block, k);
                let copy = mn_used[b];
                mn_used[b] += 1;
                if copy >= mn_copies {
                    return Err(Error::ReplicaExhaustion(format!("small set {block:?} over-used")));
                }
                mn_slot[copy][b] = slot;
                small_groups.push(UserGroup {
                    users: block.clone(),
                    antennas: vec![l1 + i],
                });
            }
            groups.push(SlotGroupStructure {
                slot,
                big_group: UserGroup {
                    users: big_sets[a].clone(),
                    antennas: (0..l1).collect(),
                },
                small_groups,
            });
        }
    }
    if let Some(b) = mn_used.iter().position(|&u| u != mn_copies) {
        return Err(Error::ReplicaExhaustion(format!(
            "MN slot {} used {} times, expected {mn_copies}",
            b + 1,
            mn_used[b]
        )));
    }

    let relabel = |cells: &[Cell], map: &[usize]| -> Vec<Cell> {
        cells
            .iter()
            .map(|cell| match *cell {
                Cell::Star => Cell::Star,
                Cell::Slot(s) => Cell::Slot(map[s - 1]),
            })
            .collect()
    };
    let mut cells = Vec::with_capacity(to_usize(counts.f_total, "rows")? * k);
    for map in &mn_slot {
        cells.extend(relabel(mn.cells(), map));
    }
    for map in &ms_slot {
        cells.extend(relabel(ms.cells(), map));
    }
    let rows = mn_copies * mn.rows() + m * ms.rows();
    let stars = mn_copies * mn.z() + m * ms.z();
    let array = CacheArray::new(ArrayKind::Rmapda, params, rows, k, cells, groups.len(), stars)?
        .with_real_users(num_users)?;
    Ok(Rmapda {
        array,
        groups,
        counts: Some(counts),
    })
}
