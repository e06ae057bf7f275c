//! Search engines over the grid: A*, a Dijkstra truth-table oracle, jump
//! point search driven by block scanning, and its constrained variant that
//! derives dynamic jump limits from previously visited jump points.

mod astar;
mod engine;

pub use astar::{dijkstra_table, DistanceTable};
pub use engine::{astar, cjps, jps, Algorithm, Engine};

use thiserror::Error;

use crate::grid::{Coord, Cost, Direction, GridMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("endpoint {0} is not traversable")]
    UntraversableEndpoint(Coord),
    #[error("jump points {from} -> {to} are not connected by a canonical segment")]
    NonCanonicalSegment { from: Coord, to: Coord },
}

/// Optional engine behaviors, all off by default. With every flag off the
/// engines run their base algorithm unchanged.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct SearchOpts {
    /// Cache a g-value on every corner point stepped on during diagonal
    /// recursion ("-g").
    pub diagonal_caching: bool,
    /// After a scan finds a jump point, scan backwards from it labelling up
    /// to two passed corner points ("-b").
    pub backwards_scanning: bool,
    /// Expand nodes re-reached by several equal-cost arrivals with the
    /// intersection of their successor sets.
    pub intersection_pruning: bool,
    /// Record an expansion log for suboptimality accounting.
    pub record_log: bool,
}

/// One expanded node, in expansion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub coord: Coord,
    pub g: Cost,
    pub parent: Option<Coord>,
}

/// Per-query counters. The suboptimality fields stay zero until filled in
/// by the benchmark harness from an expansion log and a Dijkstra table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryMetrics {
    pub expansions: u64,
    pub insertions: u64,
    pub subopt_expansions: u64,
    pub propagated_subopt: u64,
    /// Total cells traversed by cardinal scans and diagonal recursion steps.
    pub scan_steps: u64,
    pub time_ns: u64,
    pub length: Cost,
    pub found: bool,
}

impl Default for QueryMetrics {
    fn default() -> Self {
        QueryMetrics {
            expansions: 0,
            insertions: 0,
            subopt_expansions: 0,
            propagated_subopt: 0,
            scan_steps: 0,
            time_ns: 0,
            length: Cost::INFINITY,
            found: false,
        }
    }
}

impl QueryMetrics {
    /// Heap operations: expansions plus insertions.
    pub fn hp_opt(&self) -> u64 {
        self.expansions + self.insertions
    }
}

/// A solved query: the jump-point chain the search actually touched and the
/// interpolated cell-by-cell path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub found: bool,
    pub length: Cost,
    pub jump_points: Vec<Coord>,
    pub full_path: Vec<Coord>,
}

impl PathResult {
    pub(crate) fn not_found() -> PathResult {
        PathResult {
            found: false,
            length: Cost::INFINITY,
            jump_points: Vec::new(),
            full_path: Vec::new(),
        }
    }
}

/// Maximum number of applicable diagonal steps for a constraint anchored at
/// `a` given a previously visited jump point `v` at cardinal distance
/// `dist_av`:
///
/// - if `g_a + dist_av <= g_v`, every crossing is at least as good from `a`
///   and no constraint applies (0);
/// - if `g_a + sqrt(2) * dist_av > g_v + dist_av`, the far side wins even at
///   the last step (`dist_av`);
/// - otherwise the minimum `L` with
///   `g_a + sqrt(2) * L + (dist_av - L) < g_v + L`, found by binary search
///   over the monotone predicate. An exact tie at the last step counts as
///   better reached from `v`.
///
/// All comparisons use exact [`Cost`] arithmetic.
pub fn compute_l(g_a: Cost, g_v: Cost, dist_av: u32) -> u32 {
    debug_assert!(dist_av >= 1);
    debug_assert!(g_a.is_finite() && g_v.is_finite());
    if g_a + Cost::cardinal(dist_av) <= g_v {
        return 0;
    }
    if g_a + Cost::diagonal(dist_av) > g_v + Cost::cardinal(dist_av) {
        return dist_av;
    }
    let holds = |l: u32| g_a + Cost::new(dist_av - l, l) < g_v + Cost::cardinal(l);
    if !holds(dist_av) {
        return dist_av;
    }
    // holds(dist_av) and not holds(0) (that would be case one)
    let (mut lo, mut hi) = (0, dist_av);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Tight upper bound for a scan stop's g-value: the smaller of its stored
/// g and `via_bound` plus the one cardinal step from the adjacent
/// previously-scanned cell.
pub fn estimate_gbar(stored_g: Cost, via_bound: Cost) -> Cost {
    stored_g.min(via_bound + Cost::cardinal(1))
}

/// Interpolates a jump-point chain into a cell-by-cell path. Consecutive
/// jump points must be connected by one diagonal-then-straight canonical
/// segment; anything else is a search bug and comes back as an error.
pub fn expand_path(map: &GridMap, jump_points: &[Coord]) -> Result<Vec<Coord>, SearchError> {
    let Some((&first, rest)) = jump_points.split_first() else {
        return Ok(Vec::new());
    };
    let mut path = vec![first];
    let mut cur = first;
    for &jp in rest {
        let err = || SearchError::NonCanonicalSegment { from: cur, to: jp };
        let (dx, dy) = (jp.x - cur.x, jp.y - cur.y);
        let diag_steps = dx.abs().min(dy.abs());
        let mut walk = cur;
        if diag_steps > 0 {
            let d = Direction::from_offset(dx.signum(), dy.signum()).ok_or_else(err)?;
            for _ in 0..diag_steps {
                if !map.can_step(walk, d) {
                    return Err(err());
                }
                walk = walk.step(d);
                path.push(walk);
            }
        }
        let (rx, ry) = (jp.x - walk.x, jp.y - walk.y);
        if rx != 0 && ry != 0 {
            return Err(err());
        }
        if rx != 0 || ry != 0 {
            let d = Direction::from_offset(rx.signum(), ry.signum()).ok_or_else(err)?;
            for _ in 0..rx.abs().max(ry.abs()) {
                if !map.can_step(walk, d) {
                    return Err(err());
                }
                walk = walk.step(d);
                path.push(walk);
            }
        }
        cur = jp;
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;

    #[test]
    fn compute_l_worked_examples() {
        assert_eq!(compute_l(Cost::ZERO, Cost::cardinal(10), 5), 0);
        assert_eq!(compute_l(Cost::ZERO, Cost::ZERO, 5), 5);
        assert_eq!(compute_l(Cost::ZERO, Cost::cardinal(5), 10), 9);
    }

    #[test]
    fn compute_l_case_three_boundary() {
        // inequality false at L-1, true at L
        let check = |g_a: Cost, g_v: Cost, dist: u32| {
            let l = compute_l(g_a, g_v, dist);
            let holds = |l: u32| g_a + Cost::new(dist - l, l) < g_v + Cost::cardinal(l);
            if l > 0 && l < dist {
                assert!(holds(l), "{g_a:?} {g_v:?} {dist}");
                assert!(!holds(l - 1), "{g_a:?} {g_v:?} {dist}");
            }
        };
        check(Cost::ZERO, Cost::cardinal(5), 10);
        check(Cost::new(3, 2), Cost::new(6, 1), 7);
        check(Cost::new(10, 0), Cost::new(11, 2), 20);
    }

    #[test]
    fn estimate_gbar_examples() {
        assert_eq!(
            estimate_gbar(Cost::INFINITY, Cost::cardinal(4)),
            Cost::cardinal(5)
        );
        assert_eq!(
            estimate_gbar(Cost::cardinal(3), Cost::cardinal(4)),
            Cost::cardinal(3)
        );
        // stored (0,4) = 5.657 loses to 4 + 1 = 5 exactly
        assert_eq!(
            estimate_gbar(Cost::diagonal(4), Cost::cardinal(4)),
            Cost::cardinal(5)
        );
    }

    #[test]
    fn expand_path_canonical_segments() {
        let map = GridMap::new_open(8, 8);
        let p = expand_path(&map, &[Coord::new(0, 0), Coord::new(3, 3)]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.last(), Some(&Coord::new(3, 3)));

        let p = expand_path(&map, &[Coord::new(0, 0), Coord::new(3, 5)]).unwrap();
        // 3 diagonal then 2 straight cells after the start
        assert_eq!(p.len(), 6);
        assert_eq!(p[3], Coord::new(3, 3));
        assert_eq!(p.last(), Some(&Coord::new(3, 5)));
    }

    #[test]
    fn expand_path_rejects_blocked_segments() {
        let mut map = GridMap::new_open(8, 8);
        map.set_obstacle(Coord::new(1, 1)).unwrap();
        assert_eq!(
            expand_path(&map, &[Coord::new(0, 0), Coord::new(3, 3)]),
            Err(SearchError::NonCanonicalSegment {
                from: Coord::new(0, 0),
                to: Coord::new(3, 3)
            })
        );
    }
}
