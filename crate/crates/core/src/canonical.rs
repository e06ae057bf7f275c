//! Diagonal-first successor pruning: the constant-time local rules that
//! decide which neighbors survive when a cell is entered from a given
//! direction, plus the jump-point and corner-point predicates built on them
//! and successor-set intersection for equal-cost re-arrivals.
//!
//! The rules are baked into 256-entry lookup tables (neighborhood blocked
//! mask -> successor mask), one table per incoming direction plus one for
//! the search start. `oracle::definition1_successors` provides the
//! from-first-principles evaluator the tables are validated against.

use std::sync::LazyLock;

use thiserror::Error;

use crate::grid::{Coord, Direction, GridMap};

/// A set of move directions, stored as a bitmask over [`Direction::index`].
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct DirSet(u8);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);

    pub const fn from_bits(bits: u8) -> DirSet {
        DirSet(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, d: Direction) {
        self.0 |= 1 << d.index();
    }

    pub fn contains(self, d: Direction) -> bool {
        self.0 >> d.index() & 1 == 1
    }

    pub fn remove(self, d: Direction) -> DirSet {
        DirSet(self.0 & !(1 << d.index()))
    }

    pub fn intersect(self, other: DirSet) -> DirSet {
        DirSet(self.0 & other.0)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Direction> {
        Direction::ALL
            .into_iter()
            .filter(move |d| self.contains(*d))
    }
}

impl FromIterator<Direction> for DirSet {
    fn from_iter<I: IntoIterator<Item = Direction>>(iter: I) -> Self {
        let mut s = DirSet::EMPTY;
        for d in iter {
            s.insert(d);
        }
        s
    }
}

impl std::fmt::Debug for DirSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("intersection over an empty set of incoming directions")]
    EmptyIncomings,
}

/// Cells that must be traversable for an arrival at the center from
/// `incoming` to be legal: the parent cell and, for diagonal arrivals, the
/// two corner-rule cells of the arriving move.
pub(crate) fn arrival_support(incoming: Direction) -> DirSet {
    let opp = incoming.opposite();
    let mut s = DirSet::EMPTY;
    s.insert(opp);
    if incoming.is_diagonal() {
        for &c in opp.components() {
            s.insert(c);
        }
    }
    s
}

/// Clears the blocked bits of cells an arrival from `incoming` proves open.
pub(crate) fn normalize_mask(mask: u8, incoming: Option<Direction>) -> u8 {
    match incoming {
        Some(d) => mask & !arrival_support(d).bits(),
        None => mask,
    }
}

/// The direction midway between a cardinal and an adjacent cardinal, i.e.
/// their diagonal sum.
fn between(a: Direction, b: Direction) -> Direction {
    let (ax, ay) = a.offset();
    let (bx, by) = b.offset();
    Direction::from_offset(ax + bx, ay + by).expect("cardinals must be perpendicular")
}

/// Successor mask for one (incoming, blocked-mask) pair, from the local
/// rules. `mask` must already be normalized.
fn rule_successors(mask: u8, incoming: Option<Direction>) -> u8 {
    let blocked = |d: Direction| mask >> d.index() & 1 == 1;
    let open = |d: Direction| !blocked(d);
    let mut out = DirSet::EMPTY;
    let legal_move =
        |d: Direction| open(d) && (!d.is_diagonal() || d.components().iter().all(|&c| open(c)));

    let Some(d) = incoming else {
        // search start: every legal single move
        for d in Direction::ALL {
            if legal_move(d) {
                out.insert(d);
            }
        }
        return out.bits();
    };

    if d.is_diagonal() {
        // natural set only: diagonal travel has no forced neighbors under
        // the corner-cut rule
        for &c in d.components() {
            if open(c) {
                out.insert(c);
            }
        }
        if legal_move(d) {
            out.insert(d);
        }
    } else {
        if open(d) {
            out.insert(d);
        }
        // a blocked diagonal behind either flank forces that flank
        let opp = d.opposite();
        for side in [
            Direction::from_index(d.index() + 2),
            Direction::from_index(d.index() + 6),
        ] {
            let back = between(opp, side);
            if blocked(back) && open(side) {
                out.insert(side);
                let front = between(d, side);
                if open(d) && open(front) {
                    out.insert(front);
                }
            }
        }
    }
    out.bits()
}

struct SuccessorTables {
    // indexed by incoming direction, 8 = start
    by_incoming: [[u8; 256]; 9],
}

static TABLES: LazyLock<SuccessorTables> = LazyLock::new(|| {
    let mut by_incoming = [[0u8; 256]; 9];
    for inc in 0..9 {
        let incoming = (inc < 8).then(|| Direction::from_index(inc));
        for mask in 0..256 {
            by_incoming[inc as usize][mask as usize] =
                rule_successors(normalize_mask(mask as u8, incoming), incoming);
        }
    }
    SuccessorTables { by_incoming }
});

/// The diagonal-first successor set of `coord` when entered from `incoming`
/// (`None` = search start, which yields every legal move). Constant time:
/// one neighborhood probe and one table lookup.
pub fn successors(map: &GridMap, coord: Coord, incoming: Option<Direction>) -> DirSet {
    let table = &TABLES.by_incoming[incoming.map_or(8, |d| d.index() as usize)];
    DirSet::from_bits(table[map.neighborhood_mask(coord) as usize])
}

/// True iff straight travel through `coord` in `incoming` cannot simply
/// continue: some successor other than the straight continuation exists.
/// This is where a cardinal scan must stop and hand the cell to the search.
pub fn is_jump_point(map: &GridMap, coord: Coord, incoming: Direction) -> bool {
    debug_assert!(!incoming.is_diagonal());
    !successors(map, coord, Some(incoming))
        .remove(incoming)
        .is_empty()
}

/// True iff `coord` is a jump point for at least one cardinal arrival.
pub fn is_corner_point(map: &GridMap, coord: Coord) -> bool {
    Direction::CARDINALS
        .into_iter()
        .any(|d| is_jump_point(map, coord, d))
}

/// Intersection of the successor sets over several equal-cost incoming
/// directions. Sound only when every arrival reaches `coord` with the same
/// g-value, which the caller asserts.
pub fn intersect_successors(
    map: &GridMap,
    coord: Coord,
    incomings: DirSet,
) -> Result<DirSet, CanonicalError> {
    if incomings.is_empty() {
        return Err(CanonicalError::EmptyIncomings);
    }
    let mask = map.neighborhood_mask(coord);
    let mut out = DirSet::from_bits(0xff);
    for d in incomings.iter() {
        out = out.intersect(DirSet::from_bits(
            TABLES.by_incoming[d.index() as usize][mask as usize],
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use Direction::*;

    fn dirs(list: &[Direction]) -> DirSet {
        list.iter().copied().collect()
    }

    #[test]
    fn open_cardinal_travel_continues_straight() {
        let map = GridMap::new_open(5, 5);
        let c = Coord::new(2, 2);
        assert_eq!(successors(&map, c, Some(East)), dirs(&[East]));
        assert_eq!(successors(&map, c, Some(North)), dirs(&[North]));
        assert!(!is_jump_point(&map, c, East));
        assert!(!is_corner_point(&map, c));
    }

    #[test]
    fn blocked_back_diagonal_forces_the_flank() {
        // Moving east into the center with the north-west neighbor blocked:
        // the flank opens N plus NE, alongside the natural E.
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(0, 0)).unwrap();
        let c = Coord::new(1, 1);
        assert_eq!(
            successors(&map, c, Some(East)),
            dirs(&[North, NorthEast, East])
        );
        assert!(is_jump_point(&map, c, East));
        assert!(is_corner_point(&map, c));
    }

    #[test]
    fn open_diagonal_travel_keeps_components() {
        let map = GridMap::new_open(5, 5);
        let c = Coord::new(2, 2);
        assert_eq!(
            successors(&map, c, Some(NorthEast)),
            dirs(&[North, East, NorthEast])
        );
    }

    #[test]
    fn start_yields_all_legal_moves() {
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(1, 0)).unwrap(); // north of center
        let c = Coord::new(1, 1);
        let s = successors(&map, c, None);
        // N blocked; NE and NW lose their corner support
        assert_eq!(s, dirs(&[East, SouthEast, South, SouthWest, West]));
        for d in Direction::ALL {
            assert_eq!(s.contains(d), map.can_step(c, d));
        }
    }

    #[test]
    fn dead_end_is_not_a_jump_point() {
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(2, 1)).unwrap(); // forward blocked, no forced
        assert!(!is_jump_point(&map, Coord::new(1, 1), East));
    }

    #[test]
    fn turn_cell_stops_the_scan() {
        // Forward blocked but the north flank is forced: travel cannot
        // continue straight, so the cell must stop a scan.
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(0, 0)).unwrap(); // NW of center
        map.set_obstacle(Coord::new(2, 1)).unwrap(); // E of center
        let c = Coord::new(1, 1);
        assert_eq!(successors(&map, c, Some(East)), dirs(&[North]));
        assert!(is_jump_point(&map, c, East));
    }

    #[test]
    fn intersection_examples() {
        let map = GridMap::new_open(5, 5);
        let c = Coord::new(2, 2);
        // singleton intersection is just the successor set
        assert_eq!(
            intersect_successors(&map, c, dirs(&[East])).unwrap(),
            successors(&map, c, Some(East))
        );
        // disjoint natural sets intersect to nothing
        assert_eq!(
            intersect_successors(&map, c, dirs(&[North, East])).unwrap(),
            DirSet::EMPTY
        );
        assert_eq!(
            intersect_successors(&map, c, DirSet::EMPTY),
            Err(CanonicalError::EmptyIncomings)
        );
    }

    #[test]
    fn intersection_is_monotone() {
        let mut map = GridMap::new_open(5, 5);
        map.set_obstacle(Coord::new(1, 1)).unwrap();
        map.set_obstacle(Coord::new(3, 2)).unwrap();
        let c = Coord::new(2, 2);
        for d1 in Direction::ALL {
            for d2 in Direction::ALL {
                let small = intersect_successors(&map, c, dirs(&[d1])).unwrap();
                let both = intersect_successors(&map, c, dirs(&[d1, d2])).unwrap();
                assert_eq!(both.intersect(small), both);
            }
        }
    }
}
