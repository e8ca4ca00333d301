//! One-shot delivery over an RMAPDA with RIS-isolated antenna groups.
//!
//! Packets are unit basis symbols `W_{n,f}`. In slot `s` every real user `k`
//! in the slot's groups is owed the packet `W_{d_k, f_k}` with
//! `P(f_k, k) = s`. The RIS is configured to null every path from an antenna
//! of one group to a user of another; within a group the transmitter sends
//! `Σ_k u_k W_{d_k, f_k}` where `u_k` zero-forces the users of the group
//! that do not cache packet `f_k`. A user decodes when, after removing the
//! symbols it caches, only its own symbol is left with a non-negligible
//! coefficient.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, C64};
use crate::error::{Error, Result};
use crate::nulling::{
    build_path_matrix, improved_alternating_projection, interference_power, ris_units_for, to_db, PathSet,
    PhaseShiftVector,
};
use crate::pda::{CacheArray, Rmapda, SlotGroupStructure};

/// Smallest admissible desired-signal magnitude.
pub const DECODE_FLOOR: f64 = 1e-6;
/// Largest admissible residual relative to the desired coefficient.
pub const DECODE_RELATIVE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandVector {
    files: Vec<usize>,
    num_files: usize,
}

impl DemandVector {
    pub fn new(files: Vec<usize>, num_files: usize) -> Result<Self> {
        if let Some((k, &n)) = files.iter().enumerate().find(|(_, &n)| n >= num_files) {
            return Err(Error::InvalidParameter(format!(
                "user {k} requests file {n} but only {num_files} files exist"
            )));
        }
        Ok(Self { files, num_files })
    }

    /// User `k` requests file `k`; needs `N ≥ K`.
    pub fn all_distinct(num_users: usize, num_files: usize) -> Result<Self> {
        Self::new((0..num_users).collect(), num_files)
    }

    pub fn uniform(num_users: usize, file: usize, num_files: usize) -> Result<Self> {
        Self::new(vec![file; num_users], num_files)
    }

    pub fn file_of(&self, user: usize) -> usize {
        self.files[user]
    }

    pub fn num_users(&self) -> usize {
        self.files.len()
    }

    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.files
    }
}

/// Cache contents: user `k` stores packet `f` of every file iff `P(f, k) = *`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementMap {
    num_files: usize,
    num_packets: usize,
    cached_rows: Vec<Vec<usize>>,
    #[serde(skip)]
    is_cached: Vec<Vec<bool>>,
}

impl PlacementMap {
    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn num_packets(&self) -> usize {
        self.num_packets
    }

    pub fn num_users(&self) -> usize {
        self.cached_rows.len()
    }

    /// Packet indices cached by `user` (for every file).
    pub fn cached_rows(&self, user: usize) -> &[usize] {
        &self.cached_rows[user]
    }

    pub fn caches(&self, user: usize, _file: usize, row: usize) -> bool {
        self.is_cached[user][row]
    }

    /// Number of `(file, packet)` pairs in the cache, `Z·N`.
    pub fn cache_size(&self, user: usize) -> usize {
        self.cached_rows[user].len() * self.num_files
    }

    /// `M/N = Z/F`.
    pub fn cache_ratio(&self, user: usize) -> Ratio<usize> {
        Ratio::new(self.cached_rows[user].len(), self.num_packets)
    }
}

pub fn place(arr: &CacheArray, num_files: usize) -> PlacementMap {
    let is_cached: Vec<Vec<bool>> = (0..arr.cols())
        .map(|k| (0..arr.rows()).map(|f| arr.get(f, k).is_star()).collect())
        .collect();
    let cached_rows = is_cached
        .iter()
        .map(|col| col.iter().enumerate().filter(|(_, &c)| c).map(|(f, _)| f).collect())
        .collect();
    PlacementMap {
        num_files,
        num_packets: arr.rows(),
        cached_rows,
        is_cached,
    }
}

/// Every `(user, antenna)` pair with the user and the antenna in different
/// groups. Users at or beyond `real_users` are virtual and ignored.
pub fn nulling_targets_for_slot(sg: &SlotGroupStructure, real_users: usize) -> PathSet {
    let groups: Vec<_> = sg.groups().collect();
    let mut paths = Vec::new();
    for (i, group) in groups.iter().enumerate() {
        for &user in group.users.iter().filter(|&&u| u < real_users) {
            for (j, other) in groups.iter().enumerate() {
                if i != j {
                    paths.extend(other.antennas.iter().map(|&a| (user, a)));
                }
            }
        }
    }
    PathSet::new(paths).expect("groups are disjoint, so paths are distinct")
}

/// RIS units needed for the busiest slot, `⌈2·p·margin⌉`.
pub fn required_units(rm: &Rmapda, margin: f64) -> usize {
    let real = rm.array.real_users();
    let paths = rm
        .groups
        .iter()
        .map(|sg| nulling_targets_for_slot(sg, real).len())
        .max()
        .unwrap_or(0);
    ris_units_for(paths, margin)
}

/// Zero-forcing precoders for one group.
///
/// `h` is the group's effective channel (served users × group antennas) and
/// `nulled[i]` lists the rows that user `i`'s stream must not reach. Column
/// `i` of the result is the unit-norm projection of `h[i, :]ᴴ` onto the
/// null space of those rows.
pub fn zf_precoder(h: &DMatrix<C64>, nulled: &[Vec<usize>], group: usize) -> Result<DMatrix<C64>> {
    let (users, antennas) = h.shape();
    if nulled.len() != users {
        return Err(Error::LengthMismatch {
            expected: users,
            got: nulled.len(),
        });
    }
    let mut out = DMatrix::zeros(antennas, users);
    for (i, rows) in nulled.iter().enumerate() {
        let target: DVector<C64> = h.row(i).adjoint();
        let mut u = target.clone();
        if !rows.is_empty() {
            if rows.len() >= antennas {
                return Err(Error::SingularChannel { group });
            }
            let hn = DMatrix::from_fn(rows.len(), antennas, |r, c| h[(rows[r], c)]);
            let svd = hn.svd(false, true);
            let v_t = svd.v_t.expect("requested");
            let top = svd.singular_values.max();
            let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * top).count();
            if rank < rows.len() {
                return Err(Error::SingularChannel { group });
            }
            for r in 0..rank {
                let basis: DVector<C64> = v_t.row(r).adjoint();
                let coeff = basis.dotc(&u);
                u.axpy(-coeff, &basis, C64::new(1.0, 0.0));
            }
        }
        let norm = u.norm();
        if norm <= 1e-12 * target.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::SingularChannel { group });
        }
        out.set_column(i, &(u / C64::new(norm, 0.0)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Optional SNR for the reported SINR; decoding itself is noiseless.
    pub snr_db: Option<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Random restarts of the nulling algorithm per slot.
    pub restarts: usize,
    /// RIS units per path, as a multiple of 2.
    pub margin: f64,
    pub seed: u64,
    /// Start each slot's nulling from the previous slot's solution. Forces
    /// sequential slot processing.
    pub warm_start: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            snr_db: None,
            tolerance: 1e-16,
            max_iterations: 20_000,
            restarts: 20,
            margin: 1.1,
            seed: 0,
            warm_start: false,
        }
    }
}

/// One scheduled packet: user `user` receives `W_{file, row}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packet {
    pub user: usize,
    pub file: usize,
    pub row: usize,
    pub group: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotTransmission {
    pub slot: usize,
    pub packets: Vec<Packet>,
    pub paths: PathSet,
    pub phase: PhaseShiftVector,
    /// Antenna-domain coefficient vector of every transmitted symbol
    /// `(file, row)`, summed over the streams that carry it.
    pub symbols: BTreeMap<(usize, usize), DVector<C64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserOutcome {
    pub user: usize,
    pub desired: f64,
    /// Largest coefficient of a symbol the user neither wants nor caches.
    pub residual: f64,
    pub decoded: bool,
    pub sinr_db: Option<f64>,
}

/// Received coefficients at every scheduled user.
pub fn decode_slot(
    tx: &SlotTransmission,
    h_eff: &DMatrix<C64>,
    placement: &PlacementMap,
    snr_db: Option<f64>,
) -> Vec<UserOutcome> {
    tx.packets
        .iter()
        .map(|p| {
            let mut desired = 0.0;
            let mut residual: f64 = 0.0;
            let mut interference = 0.0;
            for (&(file, row), coeffs) in &tx.symbols {
                let gain = (h_eff.row(p.user) * coeffs)[(0, 0)].norm();
                if (file, row) == (p.file, p.row) {
                    desired = gain;
                } else if !placement.caches(p.user, file, row) {
                    residual = residual.max(gain);
                    interference += gain * gain;
                }
            }
            let decoded = desired >= DECODE_FLOOR && residual <= DECODE_RELATIVE * desired;
            let sinr_db = snr_db.map(|snr| {
                let noise = 10f64.powf(-snr / 10.0);
                to_db(desired * desired / (interference + noise))
            });
            UserOutcome {
                user: p.user,
                desired,
                residual,
                decoded,
                sinr_db,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotReport {
    pub s: usize,
    pub served: Vec<usize>,
    pub paths: usize,
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
    /// Total power on the nulled paths.
    pub residual_db: f64,
    /// Largest cross-group gain over the median in-group gain.
    pub isolation_ratio: f64,
    pub decoded: Vec<bool>,
    pub min_sinr_db: Option<f64>,
    pub error: Option<String>,
}

impl SlotReport {
    pub fn all_decoded(&self) -> bool {
        self.error.is_none() && self.decoded.iter().all(|&d| d)
    }

    pub fn num_decoded(&self) -> usize {
        self.decoded.iter().filter(|&&d| d).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    #[serde(rename = "S")]
    pub num_slots: usize,
    pub g: usize,
    #[serde(rename = "G")]
    pub units: usize,
    pub real_users: usize,
    pub channel_seed: u64,
    pub measured_dof: f64,
    /// `measured_dof` as an exact fraction `"num/den"`.
    pub measured_dof_exact: String,
    pub slots_decoded: usize,
    pub slots_converged: usize,
    pub per_slot: Vec<SlotReport>,
    pub config: SimulationConfig,
}

impl SimulationReport {
    pub fn all_decoded(&self) -> bool {
        self.slots_decoded == self.num_slots
    }

    pub fn success_rate(&self) -> f64 {
        self.slots_decoded as f64 / self.num_slots.max(1) as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Users decoded per slot, averaged over all slots.
pub fn measured_dof(report: &SimulationReport) -> Ratio<usize> {
    let served: usize = report.per_slot.iter().map(SlotReport::num_decoded).sum();
    Ratio::new(served, report.num_slots.max(1))
}

fn restart_seed(seed: u64, slot: usize, restart: usize) -> u64 {
    seed ^ (slot as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (restart as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

struct NullingOutcome {
    phase: PhaseShiftVector,
    converged: bool,
    iterations: usize,
    restarts_used: usize,
}

fn null_paths(
    ch: &ChannelRealization,
    paths: &PathSet,
    slot: usize,
    warm: Option<&PhaseShiftVector>,
    cfg: &SimulationConfig,
) -> Result<NullingOutcome> {
    let units = ch.num_units();
    if paths.is_empty() {
        return Ok(NullingOutcome {
            phase: PhaseShiftVector::ones(units),
            converged: true,
            iterations: 0,
            restarts_used: 0,
        });
    }
    let prob = build_path_matrix(ch, paths)?
        .with_tolerance(cfg.tolerance)
        .with_max_iterations(cfg.max_iterations);
    let mut best: Option<NullingOutcome> = None;
    let mut best_power = f64::INFINITY;
    let mut iterations = 0;
    for restart in 0..cfg.restarts.max(1) {
        let v0 = match (restart, warm) {
            (0, Some(v)) => v.clone(),
            _ => PhaseShiftVector::random(units, restart_seed(cfg.seed, slot, restart)),
        };
        let (v, trace) = improved_alternating_projection(&prob, &v0)?;
        iterations += trace.iterations;
        if trace.final_linear() < best_power {
            best_power = trace.final_linear();
            best = Some(NullingOutcome {
                phase: v,
                converged: trace.converged,
                iterations: 0,
                restarts_used: restart,
            });
        }
        if trace.converged {
            break;
        }
    }
    let mut out = best.expect("at least one attempt");
    out.iterations = iterations;
    Ok(out)
}

struct SlotContext<'a> {
    arr: &'a CacheArray,
    occurrences: &'a [Vec<(usize, usize)>],
    ch: &'a ChannelRealization,
    demand: &'a DemandVector,
    placement: &'a PlacementMap,
    cfg: &'a SimulationConfig,
}

/// Builds the transmission of one slot: RIS configuration plus precoders.
fn plan_slot(
    ctx: &SlotContext<'_>,
    sg: &SlotGroupStructure,
    warm: Option<&PhaseShiftVector>,
) -> Result<(SlotTransmission, NullingOutcome, DMatrix<C64>)> {
    let real = ctx.arr.real_users();
    let slot = sg.slot;
    let occ = ctx
        .occurrences
        .get(slot.wrapping_sub(1))
        .ok_or(Error::UnknownSlot(slot))?;
    let row_of = |user: usize| occ.iter().find(|&&(_, c)| c == user).map(|&(f, _)| f);

    let mut packets = Vec::new();
    for (gi, group) in sg.groups().enumerate() {
        for &user in group.users.iter().filter(|&&u| u < real) {
            let row = row_of(user).ok_or_else(|| {
                Error::Infeasible(format!("slot {slot} lists user {user} but its column lacks the slot"))
            })?;
            packets.push(Packet {
                user,
                file: ctx.demand.file_of(user),
                row,
                group: gi,
            });
        }
    }

    let paths = nulling_targets_for_slot(sg, real);
    let nulling = null_paths(ctx.ch, &paths, slot, warm, ctx.cfg)?;
    let h_eff = ctx.ch.effective_channel(&nulling.phase)?;

    let mut symbols: BTreeMap<(usize, usize), DVector<C64>> = BTreeMap::new();
    let num_antennas = ctx.ch.num_antennas();
    for (gi, group) in sg.groups().enumerate() {
        let members: Vec<&Packet> = packets.iter().filter(|p| p.group == gi).collect();
        if members.is_empty() {
            continue;
        }
        let h = DMatrix::from_fn(members.len(), group.antennas.len(), |i, j| {
            h_eff[(members[i].user, group.antennas[j])]
        });
        let nulled: Vec<Vec<usize>> = members
            .iter()
            .map(|p| {
                (0..members.len())
                    .filter(|&i| members[i].user != p.user && !ctx.arr.get(p.row, members[i].user).is_star())
                    .collect()
            })
            .collect();
        let precoders = zf_precoder(&h, &nulled, gi)?;
        for (i, p) in members.iter().enumerate() {
            let entry = symbols
                .entry((p.file, p.row))
                .or_insert_with(|| DVector::zeros(num_antennas));
            for (j, &a) in group.antennas.iter().enumerate() {
                entry[a] += precoders[(j, i)];
            }
        }
    }
    let tx = SlotTransmission {
        slot,
        packets,
        paths,
        phase: nulling.phase.clone(),
        symbols,
    };
    Ok((tx, nulling, h_eff))
}

fn isolation_ratio(sg: &SlotGroupStructure, h_eff: &DMatrix<C64>, real: usize) -> f64 {
    let mut cross: f64 = 0.0;
    let mut inner = Vec::new();
    let groups: Vec<_> = sg.groups().collect();
    for (i, group) in groups.iter().enumerate() {
        for &user in group.users.iter().filter(|&&u| u < real) {
            for (j, other) in groups.iter().enumerate() {
                for &a in &other.antennas {
                    let gain = h_eff[(user, a)].norm();
                    if i == j {
                        inner.push(gain);
                    } else {
                        cross = cross.max(gain);
                    }
                }
            }
        }
    }
    if inner.is_empty() {
        return 0.0;
    }
    inner.sort_by(f64::total_cmp);
    cross / inner[inner.len() / 2]
}

fn simulate_slot(ctx: &SlotContext<'_>, sg: &SlotGroupStructure, warm: Option<&PhaseShiftVector>) -> (SlotReport, Option<PhaseShiftVector>) {
    let real = ctx.arr.real_users();
    let served: Vec<usize> = sg.all_users().into_iter().filter(|&u| u < real).collect();
    match plan_slot(ctx, sg, warm) {
        Ok((tx, nulling, h_eff)) => {
            let outcomes = decode_slot(&tx, &h_eff, ctx.placement, ctx.cfg.snr_db);
            let residual_db = interference_power(ctx.ch, &tx.phase, &tx.paths)
                .map(|p| p.db)
                .unwrap_or(f64::NAN);
            let min_sinr_db = ctx
                .cfg
                .snr_db
                .map(|_| outcomes.iter().filter_map(|o| o.sinr_db).fold(f64::INFINITY, f64::min));
            let report = SlotReport {
                s: sg.slot,
                served: tx.packets.iter().map(|p| p.user).collect(),
                paths: tx.paths.len(),
                converged: nulling.converged,
                iterations: nulling.iterations,
                restarts_used: nulling.restarts_used,
                residual_db,
                isolation_ratio: isolation_ratio(sg, &h_eff, real),
                decoded: outcomes.iter().map(|o| o.decoded).collect(),
                min_sinr_db,
                error: None,
            };
            (report, Some(tx.phase))
        }
        Err(e) => {
            let report = SlotReport {
                s: sg.slot,
                decoded: vec![false; served.len()],
                served,
                paths: nulling_targets_for_slot(sg, real).len(),
                converged: false,
                iterations: 0,
                restarts_used: 0,
                residual_db: f64::NAN,
                isolation_ratio: f64::NAN,
                min_sinr_db: None,
                error: Some(e.to_string()),
            };
            (report, None)
        }
    }
}

/// Runs every slot of `rm` over channel `ch` for the given demand.
///
/// The channel must cover the real users of the array and at least `L0`
/// antennas. Failures inside a slot (no convergence, singular channel) are
/// recorded in that slot's report.
pub fn simulate_delivery(
    rm: &Rmapda,
    ch: &ChannelRealization,
    demand: &DemandVector,
    cfg: &SimulationConfig,
) -> Result<SimulationReport> {
    let arr = &rm.array;
    let params = arr.params();
    if ch.num_users() != arr.real_users() {
        return Err(Error::LengthMismatch {
            expected: arr.real_users(),
            got: ch.num_users(),
        });
    }
    if demand.num_users() != arr.real_users() {
        return Err(Error::LengthMismatch {
            expected: arr.real_users(),
            got: demand.num_users(),
        });
    }
    if ch.num_antennas() < params.l0 {
        return Err(Error::InvalidParameter(format!(
            "channel has {} antennas, array needs L0 = {}",
            ch.num_antennas(),
            params.l0
        )));
    }
    if rm.groups.is_empty() {
        return Err(Error::InvalidParameter("array has no slots".into()));
    }
    let occurrences = arr.slot_occurrences();
    let placement = place(arr, demand.num_files());
    let ctx = SlotContext {
        arr,
        occurrences: &occurrences,
        ch,
        demand,
        placement: &placement,
        cfg,
    };

    let per_slot: Vec<SlotReport> = if cfg.warm_start {
        let mut previous: Option<PhaseShiftVector> = None;
        rm.groups
            .iter()
            .map(|sg| {
                let (report, phase) = simulate_slot(&ctx, sg, previous.as_ref());
                if phase.is_some() {
                    previous = phase;
                }
                report
            })
            .collect()
    } else {
        rm.groups.par_iter().map(|sg| simulate_slot(&ctx, sg, None).0).collect()
    };

    let mut report = SimulationReport {
        num_slots: per_slot.len(),
        g: params.sum_dof(),
        units: ch.num_units(),
        real_users: arr.real_users(),
        channel_seed: ch.seed(),
        measured_dof: 0.0,
        measured_dof_exact: String::new(),
        slots_decoded: per_slot.iter().filter(|s| s.all_decoded()).count(),
        slots_converged: per_slot.iter().filter(|s| s.converged).count(),
        per_slot,
        config: cfg.clone(),
    };
    let dof = measured_dof(&report);
    report.measured_dof = *dof.numer() as f64 / *dof.denom() as f64;
    report.measured_dof_exact = format!("{}/{}", dof.numer(), dof.denom());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channel;
    use crate::pda::{build_rmapda, mn_pda};

    #[test]
    fn placement_follows_stars() {
        let arr = mn_pda(7, 1).unwrap();
        let pm = place(&arr, 7);
        for k in 0..7 {
            assert_eq!(pm.cached_rows(k), &[k]);
            assert_eq!(pm.cache_size(k), 7);
            assert_eq!(pm.cache_ratio(k), Ratio::new(1, 7));
        }
    }

    #[test]
    fn k7_l4_r3_slot_has_eighteen_paths() {
        let rm = build_rmapda(7, 1, 4, 3).unwrap();
        for sg in &rm.groups {
            let ps = nulling_targets_for_slot(sg, 7);
            assert_eq!(ps.len(), 18);
            for &(k, a) in ps.iter() {
                assert_ne!(sg.group_of(k), sg.groups().position(|g| g.antennas.contains(&a)));
            }
        }
        assert_eq!(required_units(&rm, 1.1), 40);
    }

    #[test]
    fn single_group_needs_no_paths() {
        let rm = build_rmapda(6, 1, 3, 1).unwrap();
        assert!(rm.groups.iter().all(|sg| nulling_targets_for_slot(sg, 6).is_empty()));
    }

    #[test]
    fn zf_two_antennas_matches_linear_solve() {
        let ch = draw_channel(2, 3, 8, 5).unwrap();
        let h = ch.effective_channel(&PhaseShiftVector::ones(8)).unwrap();
        // user 0 must avoid user 1 only
        let u = zf_precoder(&h, &[vec![1], vec![0], vec![]], 0).unwrap();
        let leak = (h.row(1) * u.column(0))[(0, 0)].norm();
        let want = (h.row(0) * u.column(0))[(0, 0)].norm();
        assert!(leak <= 1e-12 * want, "{leak} vs {want}");
        // independent oracle: u ∝ [h10, -h11]ᴴ rotated, i.e. orthogonal to h1ᵀ
        let orth = DVector::from_vec(vec![h[(1, 1)], -h[(1, 0)]]);
        let cos = orth.dotc(&u.column(0).into_owned()).norm() / orth.norm();
        assert!((cos - 1.0).abs() < 1e-12);
        for c in 0..3 {
            assert!((u.column(c).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zf_rejects_too_many_constraints() {
        let h = DMatrix::from_element(2, 1, C64::new(1.0, 0.0));
        assert!(matches!(zf_precoder(&h, &[vec![1], vec![]], 3), Err(Error::SingularChannel { group: 3 })));
    }

    #[test]
    fn single_antenna_multicast_decodes() {
        let rm = build_rmapda(4, 1, 1, 1).unwrap();
        let ch = draw_channel(1, 4, 4, 1).unwrap();
        let demand = DemandVector::all_distinct(4, 4).unwrap();
        let report = simulate_delivery(&rm, &ch, &demand, &SimulationConfig::default()).unwrap();
        assert!(report.all_decoded());
        assert_eq!(measured_dof(&report), Ratio::from_integer(2));
    }

    #[test]
    fn demand_range_is_checked() {
        assert!(DemandVector::new(vec![0, 3], 3).is_err());
        assert!(DemandVector::uniform(3, 2, 3).is_ok());
    }
}
