use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::blockscan::{scan, scan_limited, ScanKind};
use crate::canonical::{intersect_successors, is_corner_point, successors, DirSet};
use crate::grid::{octile_distance, Coord, Cost, Direction, GridMap};

use super::{
    compute_l, estimate_gbar, expand_path, ExpansionRecord, PathResult, QueryMetrics, SearchError,
    SearchOpts,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    AStar,
    Jps,
    Cjps,
}

const NO_PARENT: u32 = u32::MAX;
const START_ARRIVAL: u8 = 8;

#[derive(Clone, Copy)]
struct Slot {
    stamp: u64,
    g: Cost,
    parent: u32,
    arrival: u8,
    /// Directions that have reached this node with its current g.
    arrivals: u8,
    expanded: bool,
}

const EMPTY_SLOT: Slot = Slot {
    stamp: 0,
    g: Cost::INFINITY,
    parent: NO_PARENT,
    arrival: START_ARRIVAL,
    arrivals: 0,
    expanded: false,
};

struct OpenEntry {
    f: Cost,
    g: Cost,
    idx: u32,
    arrival: u8,
}

// BinaryHeap is a max-heap: order entries so its maximum is the next node to
// pop. Minimal f first; ties broken by larger g, then cell index, then
// arrival direction, making the expansion order a deterministic function of
// the query.
impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| other.idx.cmp(&self.idx))
            .then_with(|| other.arrival.cmp(&self.arrival))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

/// A dynamic jump limit: cells beyond `dist` steps toward `v` are better (or
/// equally well) reached from `v` for the next `limit` diagonal moves after
/// `anchor_step`.
#[derive(Clone, Copy)]
struct Constraint {
    v: Coord,
    g_v: Cost,
    dist: u32,
    limit: u32,
    anchor_step: u32,
}

/// A search engine bound to one map instance. The engine owns the map
/// because constrained scans place and remove artificial obstacles, which
/// needs exclusive access; per-query scratch state is reused across queries
/// through a stamp counter. One engine per worker, no internal locking.
pub struct Engine {
    map: GridMap,
    slots: Vec<Slot>,
    stamp: u64,
    open: BinaryHeap<OpenEntry>,
    log: Vec<ExpansionRecord>,
    insertion_log: Vec<(Coord, Cost)>,
    record_log: bool,
    target: Coord,
    target_idx: u32,
    metrics: QueryMetrics,
}

impl Engine {
    pub fn new(map: GridMap) -> Engine {
        let cells = (map.width() as usize) * (map.height() as usize);
        Engine {
            map,
            slots: vec![EMPTY_SLOT; cells],
            stamp: 0,
            open: BinaryHeap::new(),
            log: Vec::new(),
            insertion_log: Vec::new(),
            record_log: false,
            target: Coord::new(0, 0),
            target_idx: 0,
            metrics: QueryMetrics::default(),
        }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    /// Swaps in a different map (for dynamic-environment runs), resizing the
    /// per-cell scratch if the dimensions changed.
    pub fn replace_map(&mut self, map: GridMap) {
        let cells = (map.width() as usize) * (map.height() as usize);
        if cells != self.slots.len() {
            self.slots = vec![EMPTY_SLOT; cells];
            self.stamp = 0;
        }
        self.map = map;
    }

    /// Expansion log of the most recent query, in expansion order. Filled
    /// only when [`SearchOpts::record_log`] was set.
    pub fn last_log(&self) -> &[ExpansionRecord] {
        &self.log
    }

    /// Insertion log of the most recent query: every open-list push as
    /// (cell, g). Filled only when [`SearchOpts::record_log`] was set.
    pub fn last_insertion_log(&self) -> &[(Coord, Cost)] {
        &self.insertion_log
    }

    fn coord_of(&self, idx: u32) -> Coord {
        let w = self.map.width();
        Coord::new(idx as i32 % w, idx as i32 / w)
    }

    #[inline]
    fn slot(&mut self, idx: u32) -> &mut Slot {
        let s = &mut self.slots[idx as usize];
        if s.stamp != self.stamp {
            *s = Slot {
                stamp: self.stamp,
                ..EMPTY_SLOT
            };
        }
        s
    }

    /// The node's stored g from this query, if it has one.
    fn stored_g(&self, cell: Coord) -> Option<Cost> {
        let s = &self.slots[self.map.cell_index(cell)];
        (s.stamp == self.stamp && s.g.is_finite()).then_some(s.g)
    }

    /// Runs one query. Start and target must be traversable.
    pub fn solve(
        &mut self,
        algo: Algorithm,
        opts: &SearchOpts,
        start: Coord,
        target: Coord,
    ) -> Result<(PathResult, QueryMetrics), SearchError> {
        for c in [start, target] {
            if !self.map.is_traversable(c) {
                return Err(SearchError::UntraversableEndpoint(c));
            }
        }
        let t0 = Instant::now();
        self.log.clear();
        self.insertion_log.clear();
        self.record_log = opts.record_log;
        self.metrics = QueryMetrics::default();

        if start == target {
            let mut metrics = self.metrics;
            metrics.found = true;
            metrics.length = Cost::ZERO;
            metrics.time_ns = t0.elapsed().as_nanos() as u64;
            return Ok((
                PathResult {
                    found: true,
                    length: Cost::ZERO,
                    jump_points: vec![start],
                    full_path: vec![start],
                },
                metrics,
            ));
        }

        self.stamp += 1;
        self.open.clear();
        self.target = target;
        self.target_idx = self.map.cell_index(target) as u32;

        let start_idx = self.map.cell_index(start) as u32;
        *self.slot(start_idx) = Slot {
            stamp: self.stamp,
            g: Cost::ZERO,
            parent: NO_PARENT,
            arrival: START_ARRIVAL,
            arrivals: 0,
            expanded: false,
        };
        self.open.push(OpenEntry {
            f: octile_distance(start, target),
            g: Cost::ZERO,
            idx: start_idx,
            arrival: START_ARRIVAL,
        });
        self.metrics.insertions += 1;
        if self.record_log {
            self.insertion_log.push((start, Cost::ZERO));
        }

        let mut found = false;
        while let Some(entry) = self.open.pop() {
            let slot = self.slots[entry.idx as usize];
            if slot.stamp != self.stamp || entry.g > slot.g || slot.expanded {
                continue;
            }
            self.slots[entry.idx as usize].expanded = true;
            self.metrics.expansions += 1;
            let coord = self.coord_of(entry.idx);
            if opts.record_log {
                let parent = (slot.parent != NO_PARENT).then(|| self.coord_of(slot.parent));
                self.log.push(ExpansionRecord {
                    coord,
                    g: slot.g,
                    parent,
                });
            }
            if entry.idx == self.target_idx {
                found = true;
                break;
            }
            match algo {
                Algorithm::AStar => self.expand_astar(entry.idx, coord, slot.g),
                Algorithm::Jps => self.expand_jps(entry.idx, coord, slot.g, slot, false, opts),
                Algorithm::Cjps => self.expand_jps(entry.idx, coord, slot.g, slot, true, opts),
            }
        }

        let result = if found {
            let length = self.slots[self.target_idx as usize].g;
            let mut jump_points = Vec::new();
            let mut idx = self.target_idx;
            loop {
                jump_points.push(self.coord_of(idx));
                let parent = self.slots[idx as usize].parent;
                if parent == NO_PARENT {
                    break;
                }
                idx = parent;
            }
            jump_points.reverse();
            let full_path = expand_path(&self.map, &jump_points)?;
            PathResult {
                found: true,
                length,
                jump_points,
                full_path,
            }
        } else {
            PathResult::not_found()
        };

        self.metrics.found = result.found;
        self.metrics.length = result.length;
        self.metrics.time_ns = t0.elapsed().as_nanos() as u64;
        Ok((result, self.metrics))
    }

    /// Pushes `cell` if `g` strictly improves on its stored value; an
    /// equal-g re-arrival only records the extra incoming direction.
    fn generate(&mut self, cell: Coord, g: Cost, parent: u32, arrival: Direction) {
        let target = self.target;
        let idx = self.map.cell_index(cell) as u32;
        let s = self.slot(idx);
        if g < s.g {
            s.g = g;
            s.parent = parent;
            s.arrival = arrival.index();
            s.arrivals = 1 << arrival.index();
            s.expanded = false;
            let f = g + octile_distance(cell, target);
            self.open.push(OpenEntry {
                f,
                g,
                idx,
                arrival: arrival.index(),
            });
            self.metrics.insertions += 1;
            if self.record_log {
                self.insertion_log.push((cell, g));
            }
        } else if g == s.g && !s.expanded {
            s.arrivals |= 1 << arrival.index();
        }
    }

    /// Caches an upper bound on a cell's g without queueing it.
    fn cache_g(&mut self, cell: Coord, g: Cost) {
        let idx = self.map.cell_index(cell) as u32;
        let s = self.slot(idx);
        if g < s.g {
            s.g = g;
        }
    }

    fn expand_astar(&mut self, idx: u32, coord: Coord, g: Cost) {
        for d in Direction::ALL {
            if self.map.can_step(coord, d) {
                let step = if d.is_diagonal() {
                    Cost::diagonal(1)
                } else {
                    Cost::cardinal(1)
                };
                self.generate(coord.step(d), g + step, idx, d);
            }
        }
    }

    fn expand_jps(
        &mut self,
        idx: u32,
        coord: Coord,
        g: Cost,
        slot: Slot,
        constrained: bool,
        opts: &SearchOpts,
    ) {
        let arrival = (slot.arrival != START_ARRIVAL).then(|| Direction::from_index(slot.arrival));
        let arrivals = DirSet::from_bits(slot.arrivals);
        let succ = if opts.intersection_pruning && arrival.is_some() && arrivals.len() > 1 {
            intersect_successors(&self.map, coord, arrivals).unwrap()
        } else {
            successors(&self.map, coord, arrival)
        };

        // Cardinal successors first: their scans seed the constraints the
        // diagonal recursions run under.
        let mut seeds: [Option<Constraint>; 4] = [None; 4];
        for d in Direction::CARDINALS {
            if !succ.contains(d) {
                continue;
            }
            let res = scan(&self.map, coord, d, self.target);
            self.metrics.scan_steps += res.steps as u64;
            match res.kind {
                ScanKind::Target => {
                    self.generate(self.target, g + Cost::cardinal(res.steps), idx, d);
                }
                ScanKind::JumpPoint => {
                    if constrained {
                        if let Some(g_v) = self.stored_g(res.stop) {
                            let l = compute_l(g, g_v, res.steps);
                            if l > 0 {
                                seeds[(d.index() / 2) as usize] = Some(Constraint {
                                    v: res.stop,
                                    g_v,
                                    dist: res.steps,
                                    limit: l,
                                    anchor_step: 0,
                                });
                            }
                        }
                    }
                    if opts.backwards_scanning {
                        self.backscan(g, d, res.stop, res.steps);
                    }
                    self.generate(res.stop, g + Cost::cardinal(res.steps), idx, d);
                }
                ScanKind::DeadEnd => {}
            }
        }
        for dd in Direction::DIAGONALS {
            if succ.contains(dd) {
                self.diagonal_recursion(idx, coord, g, dd, constrained, opts, &seeds);
            }
        }
    }

    /// Alternates one diagonal step with a scan in each component cardinal
    /// until the diagonal move is blocked. Under CJPS the scans run with the
    /// dynamic jump limit of the direction's active constraint, which is
    /// created, re-anchored or dropped as scans reveal information.
    #[allow(clippy::too_many_arguments)]
    fn diagonal_recursion(
        &mut self,
        idx: u32,
        anchor: Coord,
        g_anchor: Cost,
        dd: Direction,
        constrained: bool,
        opts: &SearchOpts,
        seeds: &[Option<Constraint>; 4],
    ) {
        let comps: [Direction; 2] = [dd.components()[0], dd.components()[1]];
        let mut cons = [
            seeds[(comps[0].index() / 2) as usize],
            seeds[(comps[1].index() / 2) as usize],
        ];
        let mut cur = anchor;
        let mut step_i: u32 = 0;
        'recursion: loop {
            if !self.map.can_step(cur, dd) {
                break;
            }
            cur = cur.step(dd);
            step_i += 1;
            self.metrics.scan_steps += 1;
            let g_i = g_anchor + Cost::diagonal(step_i);
            if cur == self.target {
                self.generate(self.target, g_i, idx, dd);
                break;
            }
            if constrained && self.stored_g(cur).is_some_and(|g| g < g_i) {
                // this cell already has a strictly better path; everything
                // the recursion would generate from here is dominated
                break;
            }
            if opts.diagonal_caching && is_corner_point(&self.map, cur) {
                self.cache_g(cur, g_i);
            }
            for k in 0..2 {
                let d = comps[k];
                // the perpendicular component; the previously scanned lane
                // lies one step against it
                let perp = comps[1 - k];
                let limit = match &cons[k] {
                    Some(con) => {
                        let j = step_i - con.anchor_step;
                        if j <= con.limit {
                            Some(con.dist - j)
                        } else {
                            cons[k] = None; // lapsed: scanning is unlimited again
                            None
                        }
                    }
                    None => None,
                };
                let res = match limit {
                    Some(l) => scan_limited(&mut self.map, cur, d, self.target, l),
                    None => scan(&self.map, cur, d, self.target),
                };
                self.metrics.scan_steps += res.steps as u64;
                match res.kind {
                    ScanKind::Target => {
                        self.generate(self.target, g_i + Cost::cardinal(res.steps), idx, d);
                        cons[k] = None;
                    }
                    ScanKind::JumpPoint => {
                        let mut prune = false;
                        let mut bound = self.stored_g(res.stop).unwrap_or(Cost::INFINITY);
                        if limit.is_some() {
                            // stopped short of the blockage: bound the stop's
                            // g through the constraint region, prune it if
                            // the far side wins, and re-anchor the constraint
                            let con = cons[k].take().unwrap();
                            let gbar = self.stop_bound(&con, res.stop, perp);
                            bound = gbar;
                            prune = gbar < g_i + Cost::cardinal(res.steps);
                            let l = compute_l(g_i, gbar, res.steps);
                            if l > 0 {
                                cons[k] = Some(Constraint {
                                    v: res.stop,
                                    g_v: gbar,
                                    dist: res.steps,
                                    limit: l,
                                    anchor_step: step_i,
                                });
                            }
                        } else if constrained && bound.is_finite() {
                            let l = compute_l(g_i, bound, res.steps);
                            if l > 0 {
                                cons[k] = Some(Constraint {
                                    v: res.stop,
                                    g_v: bound,
                                    dist: res.steps,
                                    limit: l,
                                    anchor_step: step_i,
                                });
                            }
                        }
                        if opts.backwards_scanning {
                            self.backscan(g_i, d, res.stop, res.steps);
                        }
                        if !prune {
                            self.generate(res.stop, g_i + Cost::cardinal(res.steps), idx, d);
                        }
                        // the stop's bound plus the walk back down the open
                        // row also bounds this cell: terminate when it shows
                        // the recursion path is suboptimal
                        if constrained && bound + Cost::cardinal(res.steps) < g_i {
                            break 'recursion;
                        }
                    }
                    ScanKind::DeadEnd => {
                        let mut bound = self.stored_g(res.stop).unwrap_or(Cost::INFINITY);
                        if res.limit_hit {
                            // stopped at the blockage: the constraint stays
                            let con = cons[k].as_ref().unwrap();
                            bound = self.stop_bound(con, res.stop, perp);
                        } else if limit.is_some() {
                            // a genuine dead end inside the constrained
                            // range replaces the constraint
                            let con = cons[k].take().unwrap();
                            if res.steps > 0 {
                                let gbar = self.stop_bound(&con, res.stop, perp);
                                bound = gbar;
                                let l = compute_l(g_i, gbar, res.steps);
                                if l > 0 {
                                    cons[k] = Some(Constraint {
                                        v: res.stop,
                                        g_v: gbar,
                                        dist: res.steps,
                                        limit: l,
                                        anchor_step: step_i,
                                    });
                                }
                            }
                        }
                        // terminate when the stop's bound plus the walk back
                        // shows this cell is better reached the other way
                        if constrained && bound + Cost::cardinal(res.steps) < g_i {
                            break 'recursion;
                        }
                    }
                }
            }
        }
    }

    /// Upper bound on a constrained scan stop's g: its stored g, or the
    /// constraint's anchor value plus the walk through the region the
    /// constraint proved clear, entering from the previously scanned lane.
    fn stop_bound(&self, con: &Constraint, stop: Coord, perp: Direction) -> Cost {
        let pprime = stop.step(perp.opposite());
        estimate_gbar(
            self.stored_g(stop).unwrap_or(Cost::INFINITY),
            con.g_v + octile_distance(con.v, pprime),
        )
    }

    /// Reverse scan from a found jump point toward the scan origin,
    /// labelling the corner points the forward scan passed (at most two: one
    /// per side lane).
    fn backscan(&mut self, g_origin: Cost, d: Direction, stop: Coord, steps: u32) {
        let back = d.opposite();
        let mut cell = stop;
        let mut dist = steps;
        let mut labelled = 0;
        while dist > 1 && labelled < 2 {
            cell = cell.step(back);
            dist -= 1;
            if is_corner_point(&self.map, cell) {
                self.cache_g(cell, g_origin + Cost::cardinal(dist));
                labelled += 1;
            }
        }
    }
}

/// A* with the octile heuristic. Convenience wrapper over [`Engine`].
pub fn astar(
    map: &GridMap,
    start: Coord,
    target: Coord,
) -> Result<(PathResult, QueryMetrics), SearchError> {
    Engine::new(map.clone()).solve(Algorithm::AStar, &SearchOpts::default(), start, target)
}

/// Jump point search. Convenience wrapper over [`Engine`].
pub fn jps(
    map: &GridMap,
    start: Coord,
    target: Coord,
    opts: &SearchOpts,
) -> Result<(PathResult, QueryMetrics), SearchError> {
    Engine::new(map.clone()).solve(Algorithm::Jps, opts, start, target)
}

/// Constrained jump point search. Convenience wrapper over [`Engine`].
pub fn cjps(
    map: &GridMap,
    start: Coord,
    target: Coord,
    opts: &SearchOpts,
) -> Result<(PathResult, QueryMetrics), SearchError> {
    Engine::new(map.clone()).solve(Algorithm::Cjps, opts, start, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gen_synthetic, SplitMix64};
    use crate::search::dijkstra_table;

    #[test]
    fn start_equals_target() {
        let map = GridMap::new_open(8, 8);
        let c = Coord::new(3, 3);
        let (r, m) = astar(&map, c, c).unwrap();
        assert!(r.found);
        assert_eq!(r.length, Cost::ZERO);
        assert_eq!(r.full_path, vec![c]);
        assert!(m.found);
    }

    #[test]
    fn open_map_diagonal_run() {
        let map = GridMap::new_open(8, 8);
        let (r, _) = astar(&map, Coord::new(0, 0), Coord::new(7, 7)).unwrap();
        assert_eq!(r.length, Cost::diagonal(7));
        let (r, m) = jps(
            &map,
            Coord::new(0, 0),
            Coord::new(7, 7),
            &SearchOpts::default(),
        )
        .unwrap();
        assert_eq!(r.length, Cost::diagonal(7));
        // start expansion intercepts the target; only those two pops happen
        assert!(m.expansions <= 2, "expansions = {}", m.expansions);
    }

    #[test]
    fn walled_off_target_is_unreachable() {
        let mut map = GridMap::new_open(8, 8);
        for y in 0..8 {
            map.set_obstacle(Coord::new(5, y)).unwrap();
        }
        for algo in [Algorithm::AStar, Algorithm::Jps, Algorithm::Cjps] {
            let mut engine = Engine::new(map.clone());
            let (r, m) = engine
                .solve(
                    algo,
                    &SearchOpts::default(),
                    Coord::new(1, 1),
                    Coord::new(7, 1),
                )
                .unwrap();
            assert!(!r.found, "{algo:?}");
            assert!(!m.found);
            assert!(r.length.is_infinite());
        }
    }

    #[test]
    fn untraversable_endpoints_are_errors() {
        let mut map = GridMap::new_open(4, 4);
        map.set_obstacle(Coord::new(2, 2)).unwrap();
        assert_eq!(
            astar(&map, Coord::new(0, 0), Coord::new(2, 2)),
            Err(SearchError::UntraversableEndpoint(Coord::new(2, 2)))
        );
        assert!(jps(
            &map,
            Coord::new(2, 2),
            Coord::new(0, 0),
            &SearchOpts::default()
        )
        .is_err());
    }

    /// Expanding the canonical example node generates exactly the three
    /// jump points the scanning walkthrough identifies: one to the north
    /// from the initial scan, two from the diagonal recursion.
    #[test]
    fn scanning_example_generates_three_jump_points() {
        // 8 wide, 9 tall; wall in column 1 (rows 1..=7), lone obstacle (4,4)
        let mut map = GridMap::new_open(8, 9);
        for y in 1..=7 {
            map.set_obstacle(Coord::new(1, y)).unwrap();
        }
        map.set_obstacle(Coord::new(4, 4)).unwrap();
        let a = Coord::new(2, 8);
        // target sealed in a pocket so no scan intercepts it and the whole
        // space gets expanded
        let target = Coord::new(7, 0);
        for c in [Coord::new(6, 0), Coord::new(6, 1), Coord::new(7, 1)] {
            map.set_obstacle(c).unwrap();
        }
        let mut engine = Engine::new(map.clone());
        // run a real query from a; the first expansion is a's with an East
        // arrival thanks to a seeded start west of a
        let start = Coord::new(0, 8);
        let (_, _) = engine
            .solve(Algorithm::Jps, &SearchOpts::default(), start, target)
            .unwrap();
        // reconstruct which nodes a generated: successors of a are its
        // children in the parent tree
        let a_idx = engine.map().cell_index(a) as u32;
        let mut children = Vec::new();
        for idx in 0..engine.slots.len() {
            let s = &engine.slots[idx];
            if s.stamp == engine.stamp && s.parent == a_idx {
                children.push(engine.coord_of(idx as u32));
            }
        }
        children.sort();
        let mut expected = vec![Coord::new(2, 0), Coord::new(3, 3), Coord::new(5, 3)];
        expected.sort();
        assert_eq!(children, expected);
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

    /// Every algorithm and flag combination returns the Dijkstra-exact
    /// length on randomized maps; found/unsolvable status matches.
    #[test]
    fn engines_match_dijkstra_on_random_instances() {
        let mut rng = SplitMix64::new(0x5eed);
        let flag_sets = [
            SearchOpts::default(),
            SearchOpts {
                diagonal_caching: true,
                ..Default::default()
            },
            SearchOpts {
                backwards_scanning: true,
                ..Default::default()
            },
            SearchOpts {
                intersection_pruning: true,
                ..Default::default()
            },
            SearchOpts {
                diagonal_caching: true,
                backwards_scanning: true,
                intersection_pruning: true,
                ..Default::default()
            },
        ];
        for trial in 0..40u64 {
            let side = 16 + (trial % 4) as i32 * 8;
            let density = (trial % 7) as f64 * 0.05;
            let map = random_map(side, density, trial * 31 + 7);
            let open: Vec<Coord> = map.traversable_cells().collect();
            if open.len() < 2 {
                continue;
            }
            for _ in 0..4 {
                let s = open[rng.gen_range(open.len() as u64) as usize];
                let t = open[rng.gen_range(open.len() as u64) as usize];
                let truth = dijkstra_table(&map, s).get(t);
                let (ar, _) = astar(&map, s, t).unwrap();
                assert_eq!(ar.found, truth.is_finite());
                if ar.found {
                    assert_eq!(ar.length, truth, "astar {s}->{t}");
                }
                for opts in &flag_sets {
                    for algo in [Algorithm::Jps, Algorithm::Cjps] {
                        let mut engine = Engine::new(map.clone());
                        let (r, _) = engine.solve(algo, opts, s, t).unwrap();
                        assert_eq!(r.found, truth.is_finite(), "{algo:?} {opts:?} {s}->{t}");
                        if r.found {
                            assert_eq!(r.length, truth, "{algo:?} {opts:?} {s}->{t}");
                            let cost: Cost = r
                                .full_path
                                .windows(2)
                                .map(|w| {
                                    let d =
                                        Direction::from_offset(w[1].x - w[0].x, w[1].y - w[0].y)
                                            .unwrap();
                                    if d.is_diagonal() {
                                        Cost::diagonal(1)
                                    } else {
                                        Cost::cardinal(1)
                                    }
                                })
                                .fold(Cost::ZERO, |a, b| a + b);
                            assert_eq!(cost, r.length, "path cost mismatch");
                        }
                    }
                }
            }
        }
    }

    /// Identical queries produce identical expansion sequences and metrics.
    #[test]
    fn determinism() {
        let map = gen_synthetic(64, 0.75, 0.05, 11).unwrap();
        let opts = SearchOpts {
            record_log: true,
            ..Default::default()
        };
        let run = |algo| {
            let mut engine = Engine::new(map.clone());
            let (_, m) = engine
                .solve(algo, &opts, Coord::new(2, 3), Coord::new(60, 61))
                .unwrap();
            (engine.last_log().to_vec(), m)
        };
        for algo in [Algorithm::AStar, Algorithm::Jps, Algorithm::Cjps] {
            let (log1, m1) = run(algo);
            let (log2, m2) = run(algo);
            assert_eq!(log1, log2);
            assert_eq!(m1.expansions, m2.expansions);
            assert_eq!(m1.insertions, m2.insertions);
            assert_eq!(m1.scan_steps, m2.scan_steps);
        }
    }

    /// With every flag off the variant-capable engine behaves byte-identically
    /// to the base algorithm (same expansion sequence).
    #[test]
    fn no_op_flags_do_not_change_expansions() {
        let map = gen_synthetic(48, 0.5, 0.08, 3).unwrap();
        let base = SearchOpts {
            record_log: true,
            ..Default::default()
        };
        let mut e1 = Engine::new(map.clone());
        e1.solve(Algorithm::Jps, &base, Coord::new(1, 1), Coord::new(46, 45))
            .unwrap();
        let mut e2 = Engine::new(map.clone());
        e2.solve(Algorithm::Jps, &base, Coord::new(1, 1), Coord::new(46, 45))
            .unwrap();
        assert_eq!(e1.last_log(), e2.last_log());
    }
}
