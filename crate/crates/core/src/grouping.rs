//! Antenna grouping: how many antennas to activate and how to split them so
//! that a target sum-DoF is reached with as few RIS units as possible.
//!
//! A plan splits `L0` active antennas into `r` groups of sizes `L_i`. With
//! `t = KM/N`, group `i` serves `L_i + t` users, so the plan reaches
//! `g = L0 + t·r`, and isolating the groups from each other costs
//! `2·Σ (L_i + t)(L0 − L_i)` RIS units (two units per nulled path).
//!
//! For fixed `(L0, r)` the cheapest split is the star `[L0 − r + 1, 1, …, 1]`
//! with cost `2(r − 1)[(t + 2)L0 − r]`. Trading `t` antennas for one extra
//! group keeps `g` fixed and changes the cost by
//! `f(λ) = 2λ(−(t + 1)²λ + c)`, a concave parabola in the number of trades
//! `λ`, so only the endpoints of the admissible `λ` range need comparing.
//!
//! Everything here is exact integer / rational arithmetic.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest antenna count accepted by the exhaustive search.
pub const BRUTE_FORCE_MAX_ANTENNAS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingPlan {
    t: u64,
    group_sizes: Vec<u64>,
}

impl GroupingPlan {
    pub fn new(t: u64, group_sizes: Vec<u64>) -> Result<Self> {
        if group_sizes.is_empty() {
            return Err(Error::InvalidParameter("a plan needs at least one group".into()));
        }
        if group_sizes.contains(&0) {
            return Err(Error::InvalidParameter("group sizes must be positive".into()));
        }
        Ok(Self { t, group_sizes })
    }

    /// `[L0 − r + 1, 1, …, 1]`.
    pub fn star(l0: u64, r: u64, t: u64) -> Result<Self> {
        if r == 0 || r > l0 {
            return Err(Error::Infeasible(format!("cannot split {l0} antennas into {r} groups")));
        }
        let mut sizes = vec![1; r as usize];
        sizes[0] = l0 - r + 1;
        Self::new(t, sizes)
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn group_sizes(&self) -> &[u64] {
        &self.group_sizes
    }

    pub fn active_antennas(&self) -> u64 {
        self.group_sizes.iter().sum()
    }

    pub fn num_groups(&self) -> u64 {
        self.group_sizes.len() as u64
    }

    pub fn is_star(&self) -> bool {
        self.group_sizes.iter().filter(|&&s| s != 1).count() <= 1
    }
}

/// Sum-DoF `Σ (L_i + t) = L0 + t·r`.
pub fn dof_of_plan(plan: &GroupingPlan) -> u64 {
    plan.group_sizes.iter().map(|l| l + plan.t).sum()
}

/// RIS units needed to isolate every group: `2·Σ (L_i + t)(L0 − L_i)`.
pub fn ris_cost(plan: &GroupingPlan) -> u64 {
    let l0 = plan.active_antennas();
    2 * plan
        .group_sizes
        .iter()
        .map(|&l| (l + plan.t) * (l0 - l))
        .sum::<u64>()
}

/// Closed-form cost of the star plan, `2(r − 1)[(t + 2)L0 − r]`.
pub fn star_plan_cost(l0: u64, r: u64, t: u64) -> Result<u64> {
    if r == 0 || r > l0 {
        return Err(Error::Infeasible(format!("r = {r} must lie in [1, L0 = {l0}]")));
    }
    Ok(2 * (r - 1) * ((t + 2) * l0 - r))
}

fn linear_coefficient(l0: i64, r: i64, t: i64) -> i64 {
    (t + 2) * l0 - 2 * r + (1 - r) * t * t - 2 * t * r + 2 * t + 1
}

/// Change in RIS cost from `(L0, r)` to `(L0 − λt, r + λ)`, both star plans.
pub fn cost_change(l0: u64, r: u64, t: u64, lambda: u64) -> i64 {
    let (l0, r, t, lambda) = (l0 as i64, r as i64, t as i64, lambda as i64);
    2 * lambda * (-(t + 1) * (t + 1) * lambda + linear_coefficient(l0, r, t))
}

/// Non-zero root of [`cost_change`] viewed as a polynomial in `λ`.
pub fn lambda_root(l0: u64, r: u64, t: u64) -> Ratio<i64> {
    let t = t as i64;
    Ratio::new(linear_coefficient(l0 as i64, r as i64, t), (t + 1) * (t + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingSolution {
    #[serde(rename = "L_opt")]
    pub l_opt: u64,
    pub r_opt: u64,
    #[serde(rename = "G_opt")]
    pub g_opt: u64,
    pub t: u64,
    pub g_target: u64,
    pub g_achieved: u64,
    pub star_sizes: Vec<u64>,
}

impl GroupingSolution {
    fn from_star(l0: u64, r: u64, t: u64, g_target: u64) -> Result<Self> {
        let plan = GroupingPlan::star(l0, r, t)?;
        Ok(Self {
            l_opt: l0,
            r_opt: r,
            g_opt: star_plan_cost(l0, r, t)?,
            t,
            g_target,
            g_achieved: dof_of_plan(&plan),
            star_sizes: plan.group_sizes,
        })
    }

    pub fn plan(&self) -> GroupingPlan {
        GroupingPlan {
            t: self.t,
            group_sizes: self.star_sizes.clone(),
        }
    }

    /// Antennas in the large group, `L0 − r + 1`.
    pub fn big_group_antennas(&self) -> u64 {
        self.l_opt - self.r_opt + 1
    }
}

fn check_inputs(num_antennas: u64, t: u64, g_target: u64) -> Result<()> {
    if num_antennas == 0 {
        return Err(Error::InvalidParameter("at least one antenna is required".into()));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t = KM/N must be at least 1".into()));
    }
    if g_target < t + 1 {
        return Err(Error::InvalidParameter(format!(
            "target sum-DoF {g_target} is below the single-antenna minimum t + 1 = {}",
            t + 1
        )));
    }
    if g_target > num_antennas * (t + 1) {
        return Err(Error::Infeasible(format!(
            "target sum-DoF {g_target} exceeds the maximum L(t + 1) = {}",
            num_antennas * (t + 1)
        )));
    }
    Ok(())
}

/// Cheapest star grouping reaching at least `g_target`.
///
/// Finds the smallest reachable `g ≥ g_target` together with the largest
/// active-antenna count `L0` that reaches it, then moves to
/// `(L0 − λ_max·t, r + λ_max)` when that strictly lowers the cost. At equal
/// cost the larger `L0` (fewer groups) is kept.
pub fn optimal_grouping(num_antennas: u64, t: u64, g_target: u64) -> Result<GroupingSolution> {
    check_inputs(num_antennas, t, g_target)?;
    let mut g = g_target;
    let (l_max, r) = loop {
        if g > num_antennas * (t + 1) {
            // unreachable: g = L(t + 1) is always reachable with r = L0 = L
            return Err(Error::Infeasible(format!("no grouping reaches sum-DoF {g_target}")));
        }
        let l_min = g.div_ceil(t + 1);
        let l_top = num_antennas.min(g - t);
        let found = (l_min..=l_top)
            .rev()
            .find(|l0| (g - l0) % t == 0 && g > *l0)
            .map(|l0| (l0, (g - l0) / t));
        match found {
            Some(hit) => break hit,
            None => g += 1,
        }
    };

    let lambda_max = (l_max - r) / (t + 1);
    if lambda_max > 0 && cost_change(l_max, r, t, lambda_max) < 0 {
        GroupingSolution::from_star(l_max - lambda_max * t, r + lambda_max, t, g_target)
    } else {
        GroupingSolution::from_star(l_max, r, t, g_target)
    }
}

/// All partitions of `n` into positive parts, each in non-increasing order.
pub fn integer_partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Every plan over every `L0 ≤ L` and every partition of `L0` reaching the
/// smallest achievable sum-DoF `≥ g_target` at minimum RIS cost.
pub fn brute_force_minimizers(num_antennas: u64, t: u64, g_target: u64) -> Result<Vec<GroupingPlan>> {
    if num_antennas as usize > BRUTE_FORCE_MAX_ANTENNAS {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search is limited to {BRUTE_FORCE_MAX_ANTENNAS} antennas, got {num_antennas}"
        )));
    }
    check_inputs(num_antennas, t, g_target)?;
    let plans: Vec<GroupingPlan> = (1..=num_antennas)
        .flat_map(integer_partitions)
        .map(|sizes| GroupingPlan { t, group_sizes: sizes })
        .filter(|p| dof_of_plan(p) >= g_target)
        .collect();
    let g_achieved = plans
        .iter()
        .map(dof_of_plan)
        .min()
        .ok_or_else(|| Error::Infeasible(format!("no grouping reaches sum-DoF {g_target}")))?;
    let at_g: Vec<GroupingPlan> = plans.into_iter().filter(|p| dof_of_plan(p) == g_achieved).collect();
    let best = at_g.iter().map(ris_cost).min().expect("non-empty");
    Ok(at_g.into_iter().filter(|p| ris_cost(p) == best).collect())
}

/// Exhaustive-search counterpart of [`optimal_grouping`]; among equal-cost
/// minimizers the one with the most active antennas is reported.
pub fn brute_force_grouping(num_antennas: u64, t: u64, g_target: u64) -> Result<GroupingSolution> {
    let best = brute_force_minimizers(num_antennas, t, g_target)?
        .into_iter()
        .max_by_key(|p| (p.active_antennas(), p.is_star()))
        .expect("non-empty");
    Ok(GroupingSolution {
        l_opt: best.active_antennas(),
        r_opt: best.num_groups(),
        g_opt: ris_cost(&best),
        t,
        g_target,
        g_achieved: dof_of_plan(&best),
        star_sizes: best.group_sizes,
    })
}
