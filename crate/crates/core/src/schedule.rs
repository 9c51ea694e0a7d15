//! Rate-allocation vectors: feasibility checking and exact enumeration of
//! maximal schedules.
//!
//! A schedule for state `j` serves each link at either zero or its state-`j`
//! rate, activates no two interfering links, and is maximal: no inactive link
//! with a positive rate is conflict-free with respect to the active set.
//! Zero-rate links are canonically inactive; activating one is
//! observationally void and maximality is judged only over links that could
//! actually carry traffic.

use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::scalar::Real;

/// Default cap on the link-subset size fed to exact enumeration.
pub const DEFAULT_ENUM_CAP: usize = 16;

/// One feasible per-state schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct RateAllocation<R> {
    /// Channel state the schedule was built for.
    pub state: usize,
    /// Per-link service rate, aligned with the graph's link order.
    pub rates: Vec<R>,
}

impl<R: Real> RateAllocation<R> {
    pub fn active_links(&self) -> Vec<usize> {
        self.rates
            .iter()
            .enumerate()
            .filter(|(_, r)| **r > R::zero())
            .map(|(l, _)| l)
            .collect()
    }

    pub fn total_rate(&self) -> R {
        self.rates.iter().copied().sum()
    }
}

/// Which feasibility property a vector violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Two interfering links are simultaneously active.
    Interference,
    /// Some conflict-free link with a positive rate was left unscheduled.
    Maximality,
    /// An entry is neither zero nor the link's rate in this state.
    RateMismatch,
}

/// Checks feasibility over the whole link set. `None` means feasible.
pub fn check_feasible<R: Real>(
    alloc: &RateAllocation<R>,
    rates_j: &[R],
    graph: &NetworkGraph,
) -> Option<Violation> {
    let all: Vec<usize> = (0..graph.link_count()).collect();
    check_feasible_within(&all, alloc, rates_j, graph)
}

/// Checks feasibility restricted to a link subset: activity outside the
/// subset is ignored and maximality is judged over subset members only.
pub fn check_feasible_within<R: Real>(
    links: &[usize],
    alloc: &RateAllocation<R>,
    rates_j: &[R],
    graph: &NetworkGraph,
) -> Option<Violation> {
    assert_eq!(alloc.rates.len(), graph.link_count(), "vector dimension");
    assert_eq!(rates_j.len(), graph.link_count(), "rate dimension");

    for &l in links {
        let r = alloc.rates[l];
        if r != R::zero() && r != rates_j[l] {
            return Some(Violation::RateMismatch);
        }
    }
    let active: Vec<usize> = links
        .iter()
        .copied()
        .filter(|&l| alloc.rates[l] > R::zero())
        .collect();
    for (i, &a) in active.iter().enumerate() {
        for &b in &active[i + 1..] {
            if graph.interferes(a, b) {
                return Some(Violation::Interference);
            }
        }
    }
    for &k in links {
        // r_k != c_k only happens for r_k = 0 < c_k here, so zero-rate links
        // are exempt automatically.
        if alloc.rates[k] == rates_j[k] {
            continue;
        }
        if active.iter().all(|&l| !graph.interferes(k, l)) {
            return Some(Violation::Maximality);
        }
    }
    None
}

/// Enumerates every maximal schedule on the given link subset, in
/// lexicographic order of the active-link index set.
pub fn enumerate_maximal_schedules<R: Real>(
    graph: &NetworkGraph,
    links: &[usize],
    rates_j: &[R],
    state: usize,
) -> Result<Vec<RateAllocation<R>>> {
    enumerate_maximal_schedules_with_cap(graph, links, rates_j, state, DEFAULT_ENUM_CAP)
}

pub fn enumerate_maximal_schedules_with_cap<R: Real>(
    graph: &NetworkGraph,
    links: &[usize],
    rates_j: &[R],
    state: usize,
    cap: usize,
) -> Result<Vec<RateAllocation<R>>> {
    let n = graph.link_count();
    assert_eq!(rates_j.len(), n, "rate dimension");
    if links.len() > cap {
        return Err(Error::CapacityExceeded {
            what: "schedule enumeration subset",
            got: links.len(),
            cap,
        });
    }
    let mut subset: Vec<usize> = links.to_vec();
    subset.sort_unstable();
    subset.dedup();
    for &l in &subset {
        if l >= n {
            return Err(Error::Graph(format!("unknown link index {l} in subset")));
        }
        if !rates_j[l].is_finite() || rates_j[l] < R::zero() {
            return Err(Error::Model(format!(
                "rate of link index {l} must be finite and non-negative"
            )));
        }
    }

    // Only positive-rate links participate; zero-rate links are canonically
    // inactive in every schedule.
    let pos: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&l| rates_j[l] > R::zero())
        .collect();
    let m = pos.len();
    let conflict: Vec<u32> = pos
        .iter()
        .map(|&a| {
            let mut mask = 0u32;
            for (bi, &b) in pos.iter().enumerate() {
                if b != a && graph.interferes(a, b) {
                    mask |= 1 << bi;
                }
            }
            mask
        })
        .collect();

    let mut active_sets: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let independent = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| conflict[i] & mask == 0);
        if !independent {
            continue;
        }
        let maximal = (0..m)
            .filter(|&i| mask >> i & 1 == 0)
            .all(|i| conflict[i] & mask != 0);
        if !maximal {
            continue;
        }
        active_sets.push(
            (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pos[i])
                .collect(),
        );
    }
    active_sets.sort();

    Ok(active_sets
        .into_iter()
        .map(|set| {
            let mut rates = vec![R::zero(); n];
            for l in set {
                rates[l] = rates_j[l];
            }
            RateAllocation { state, rates }
        })
        .collect())
}
