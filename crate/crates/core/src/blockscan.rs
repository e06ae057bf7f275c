//! Branch-less cardinal scanning. A scan walks a row or column looking for
//! the first cell that stops straight travel, consuming the blocked bitmaps
//! a 64-cell block at a time: one window for the scanned lane and one for
//! each neighbor lane, three bitwise operations to expose the stop bits, and
//! a count-trailing-zeros to locate the first. No per-cell branching happens
//! inside a block.

use crate::grid::{Coord, Direction, GridMap};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScanKind {
    /// Stopped on a cell the search must process: a forced turn exists.
    JumpPoint,
    /// Straight travel ran into a blocked cell (or the jump limit).
    DeadEnd,
    /// The target lies on the scanned segment.
    Target,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ScanResult {
    pub kind: ScanKind,
    /// For `JumpPoint`/`Target`: the stop cell. For `DeadEnd`: the last
    /// standable cell.
    pub stop: Coord,
    /// Cells traversed from the start cell.
    pub steps: u32,
    /// True iff a `DeadEnd` was caused by the artificial obstacle of a
    /// limited scan rather than real map geometry.
    pub limit_hit: bool,
}

/// How a cardinal direction maps onto the bit lanes.
struct LaneView {
    /// Lane index (row y for horizontal scans, column x for vertical).
    lane: i32,
    /// Position along the lane (x for horizontal, y for vertical).
    pos: i32,
    forward: bool,
    vertical: bool,
}

impl LaneView {
    fn new(start: Coord, dir: Direction) -> LaneView {
        match dir {
            Direction::East => LaneView {
                lane: start.y,
                pos: start.x,
                forward: true,
                vertical: false,
            },
            Direction::West => LaneView {
                lane: start.y,
                pos: start.x,
                forward: false,
                vertical: false,
            },
            Direction::South => LaneView {
                lane: start.x,
                pos: start.y,
                forward: true,
                vertical: true,
            },
            Direction::North => LaneView {
                lane: start.x,
                pos: start.y,
                forward: false,
                vertical: true,
            },
            _ => panic!("scan requires a cardinal direction"),
        }
    }

    fn window(&self, map: &GridMap, lane: i32, pos: i32) -> u64 {
        if self.vertical {
            map.col_window(lane, pos, self.forward)
        } else {
            map.row_window(lane, pos, self.forward)
        }
    }

    fn cell_at(&self, dist: i32) -> i32 {
        if self.forward {
            self.pos + dist
        } else {
            self.pos - dist
        }
    }

    fn coord_at(&self, dist: i32) -> Coord {
        let p = self.cell_at(dist);
        if self.vertical {
            Coord::new(self.lane, p)
        } else {
            Coord::new(p, self.lane)
        }
    }

    /// Distance from the scan start to `target` measured along the travel
    /// direction, if the target lies ahead on the scanned lane.
    fn target_distance(&self, target: Coord) -> Option<u32> {
        let (t_lane, t_pos) = if self.vertical {
            (target.x, target.y)
        } else {
            (target.y, target.x)
        };
        if t_lane != self.lane {
            return None;
        }
        let d = if self.forward {
            t_pos - self.pos
        } else {
            self.pos - t_pos
        };
        (d >= 1).then_some(d as u32)
    }
}

/// Scans from `start` in cardinal `dir` until the first jump point, the
/// target, or a blocked forward cell, whichever comes first. Equivalent to
/// stepping cell by cell but runs over whole bit blocks.
pub fn scan(map: &GridMap, start: Coord, dir: Direction, target: Coord) -> ScanResult {
    debug_assert!(map.is_traversable(start));
    let view = LaneView::new(start, dir);

    let mut travelled = 0u32;
    let (kind, steps) = loop {
        let pos = view.cell_at(travelled as i32);
        let travel = view.window(map, view.lane, pos);
        let side_a = view.window(map, view.lane - 1, pos);
        let side_b = view.window(map, view.lane + 1, pos);
        // bit i: the cell i steps ahead has a neighbor pattern blocked at
        // i-1, open at i in either side lane (a forced turn), or is itself
        // blocked (travel stops). Bit 0 is the current cell; ignore it.
        let forced = ((side_a << 1) & !side_a) | ((side_b << 1) & !side_b);
        let stops = (forced | travel) & !1;
        if stops == 0 {
            // the window proves 63 more open, unforced cells
            travelled += 63;
            continue;
        }
        let s = stops.trailing_zeros();
        if travel >> s & 1 == 1 {
            break (ScanKind::DeadEnd, travelled + s - 1);
        }
        break (ScanKind::JumpPoint, travelled + s);
    };

    // the target intercepts the scan anywhere on the traversed segment
    if let Some(t) = view.target_distance(target) {
        if t <= steps {
            return ScanResult {
                kind: ScanKind::Target,
                stop: target,
                steps: t,
                limit_hit: false,
            };
        }
    }
    ScanResult {
        kind,
        stop: view.coord_at(steps as i32),
        steps,
        limit_hit: false,
    }
}

/// [`scan`] restricted to at most `limit` steps. The limit is imposed by
/// temporarily blocking the cell at distance `limit + 1`, running the
/// unmodified branch-less scan, and restoring the cell, so a jump point at
/// distance exactly `limit` is still reported. A stop caused by the
/// artificial obstacle comes back as a `DeadEnd` with `steps == limit` and
/// `limit_hit` set.
///
/// Requires exclusive access to the map for its whole duration; the map is
/// bit-identical afterwards.
pub fn scan_limited(
    map: &mut GridMap,
    start: Coord,
    dir: Direction,
    target: Coord,
    limit: u32,
) -> ScanResult {
    let wall = start.step_n(dir, limit as i32 + 1);
    let placed = map.in_bounds(wall) && map.set_obstacle(wall).unwrap();
    let mut result = scan(map, start, dir, target);
    if placed {
        map.unset_obstacle(wall).unwrap();
        if result.kind == ScanKind::DeadEnd && result.steps == limit {
            result.limit_hit = true;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gen_synthetic, SplitMix64};
    use crate::oracle;
    use Direction::*;

    const NO_TARGET: Coord = Coord::new(-10, -10);

    /// The 3x3 block worked through in the scanning description: top row
    /// bits 100, other rows 000, travelling left to right finds the center
    /// to be a jump point.
    #[test]
    fn three_by_three_block_example() {
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(0, 0)).unwrap();
        let r = scan(&map, Coord::new(0, 1), East, NO_TARGET);
        assert_eq!(r.kind, ScanKind::JumpPoint);
        assert_eq!(r.stop, Coord::new(1, 1));
        assert_eq!(r.steps, 1);
    }

    #[test]
    fn empty_row_dead_ends_at_border() {
        let map = GridMap::new_open(40, 5);
        let r = scan(&map, Coord::new(3, 2), East, NO_TARGET);
        assert_eq!(r.kind, ScanKind::DeadEnd);
        assert_eq!(r.steps, 36);
        assert_eq!(r.stop, Coord::new(39, 2));
        let r = scan(&map, Coord::new(3, 2), West, NO_TARGET);
        assert_eq!(r.steps, 3);
        assert_eq!(r.stop, Coord::new(0, 2));
    }

    #[test]
    fn target_intercepts_before_jump_point() {
        let mut map = GridMap::new_open(20, 5);
        map.set_obstacle(Coord::new(9, 1)).unwrap(); // jump point at (10, 2)
        let r = scan(&map, Coord::new(2, 2), East, Coord::new(7, 2));
        assert_eq!(r.kind, ScanKind::Target);
        assert_eq!(r.steps, 5);
        let r = scan(&map, Coord::new(2, 2), East, NO_TARGET);
        assert_eq!(r.kind, ScanKind::JumpPoint);
        assert_eq!(r.stop, Coord::new(10, 2));
    }

    #[test]
    fn limited_scan_examples() {
        let mut map = GridMap::new_open(30, 5);
        let sig = map.bit_signature();
        // limit beyond the natural stop: identical to scan()
        let free = scan(&map, Coord::new(2, 2), East, NO_TARGET);
        let r = scan_limited(&mut map, Coord::new(2, 2), East, NO_TARGET, 50);
        assert_eq!(r, free);
        assert!(!r.limit_hit);
        // open corridor with a real limit
        let r = scan_limited(&mut map, Coord::new(2, 2), East, NO_TARGET, 5);
        assert_eq!(r.kind, ScanKind::DeadEnd);
        assert_eq!(r.steps, 5);
        assert!(r.limit_hit);
        assert_eq!(r.stop, Coord::new(7, 2));
        // degenerate limit stops immediately
        let r = scan_limited(&mut map, Coord::new(2, 2), East, NO_TARGET, 0);
        assert_eq!((r.kind, r.steps, r.limit_hit), (ScanKind::DeadEnd, 0, true));
        assert_eq!(map.bit_signature(), sig);
    }

    #[test]
    fn jump_point_at_exactly_the_limit_is_reported() {
        let mut map = GridMap::new_open(30, 5);
        map.set_obstacle(Coord::new(6, 1)).unwrap(); // forces (7, 2) east travel
        let r = scan_limited(&mut map, Coord::new(2, 2), East, NO_TARGET, 5);
        assert_eq!(r.kind, ScanKind::JumpPoint);
        assert_eq!(r.stop, Coord::new(7, 2));
        assert!(!r.limit_hit);
    }

    #[test]
    fn limit_obstacle_on_already_blocked_cell_is_a_real_dead_end() {
        let mut map = GridMap::new_open(30, 5);
        map.set_obstacle(Coord::new(8, 2)).unwrap();
        let r = scan_limited(&mut map, Coord::new(2, 2), East, NO_TARGET, 5);
        assert_eq!(
            (r.kind, r.steps, r.limit_hit),
            (ScanKind::DeadEnd, 5, false)
        );
        assert!(!map.is_traversable(Coord::new(8, 2)));
    }

    fn random_map(side: i32, density: f64, seed: u64) -> GridMap {
        let mut rng = SplitMix64::new(seed);
        let mut map = GridMap::new_open(side, side);
        for y in 0..side {
            for x in 0..side {
                if (rng.next_u64() as f64 / u64::MAX as f64) < density {
                    map.set_obstacle(Coord::new(x, y)).unwrap();
                }
            }
        }
        map
    }

    /// Block scanning must agree with the cell-by-cell reference in kind,
    /// stop and steps, across random maps and all four cardinals.
    #[test]
    fn matches_naive_scanner_on_random_maps() {
        let mut rng = SplitMix64::new(0xb10c);
        for trial in 0..60 {
            let density = (trial % 5) as f64 * 0.1;
            let map = random_map(48, density, trial);
            for _ in 0..400 {
                let c = Coord::new(rng.gen_range(48) as i32, rng.gen_range(48) as i32);
                if !map.is_traversable(c) {
                    continue;
                }
                let target = Coord::new(rng.gen_range(48) as i32, rng.gen_range(48) as i32);
                for dir in Direction::CARDINALS {
                    assert_eq!(
                        scan(&map, c, dir, target),
                        oracle::naive_scan(&map, c, dir, target),
                        "map seed {trial}, start {c}, dir {dir:?}"
                    );
                }
            }
        }
    }

    /// Distances that cross one, two and three word boundaries.
    #[test]
    fn word_boundary_distances() {
        for stop_x in [62, 63, 64, 65, 126, 127, 128, 129, 190, 191, 192] {
            let mut map = GridMap::new_open(200, 3);
            map.set_obstacle(Coord::new(stop_x, 1)).unwrap();
            let r = scan(&map, Coord::new(0, 1), East, NO_TARGET);
            assert_eq!(r.kind, ScanKind::DeadEnd);
            assert_eq!(r.steps as i32, stop_x - 1, "wall at {stop_x}");
            // and with a forced stop one lane over
            let mut map = GridMap::new_open(200, 3);
            map.set_obstacle(Coord::new(stop_x, 0)).unwrap();
            let r = scan(&map, Coord::new(0, 1), East, NO_TARGET);
            assert_eq!(r.kind, ScanKind::JumpPoint);
            assert_eq!(r.stop, Coord::new(stop_x + 1, 1), "corner at {stop_x}");
        }
    }

    /// Limited scans restore the map bit-identically on every probe.
    #[test]
    fn limited_scan_restores_map() {
        let map = gen_synthetic(64, 0.5, 0.1, 3).unwrap();
        let mut map = map;
        let sig = map.bit_signature();
        let mut rng = SplitMix64::new(9);
        for _ in 0..5_000 {
            let c = Coord::new(rng.gen_range(64) as i32, rng.gen_range(64) as i32);
            if !map.is_traversable(c) {
                continue;
            }
            let dir = Direction::CARDINALS[rng.gen_range(4) as usize];
            let limit = rng.gen_range(70) as u32;
            let got = scan_limited(&mut map, c, dir, NO_TARGET, limit);
            let want = oracle::naive_scan_limited(&map, c, dir, NO_TARGET, limit);
            assert_eq!(got, want);
            assert_eq!(map.bit_signature(), sig);
        }
    }
}
