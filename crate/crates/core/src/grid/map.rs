use thiserror::Error;

use super::{Coord, Direction};

/// Width of a scanning block. Blocked/traversable bits are packed into words
/// of this size and consumed a whole word at a time.
pub const WORD_BITS: u32 = u64::BITS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("coordinate {0} is outside the {1}x{2} map")]
    OutOfBounds(Coord, i32, i32),
}

/// Bit lanes: one bit array per row (or per column), each padded with fully
/// blocked guard words on both ends plus a fully blocked guard lane on each
/// side, so every out-of-bounds read resolves to "blocked" without branching.
///
/// Bit convention: 1 = blocked, matching "find the first obstacle" being a
/// find-first-set operation.
#[derive(Clone, PartialEq, Eq)]
struct BitLanes {
    lane_len: i32,
    words_per_lane: usize,
    words: Vec<u64>,
}

impl BitLanes {
    /// All-blocked array of `lanes` lanes of `lane_len` cells each.
    fn new_blocked(lanes: i32, lane_len: i32) -> Self {
        let words_per_lane = 2 + (lane_len as usize).div_ceil(WORD_BITS as usize);
        let words = vec![!0u64; words_per_lane * (lanes as usize + 2)];
        BitLanes {
            lane_len,
            words_per_lane,
            words,
        }
    }

    #[inline(always)]
    fn word_index(&self, lane: i32, cell: i32) -> (usize, u32) {
        debug_assert!(cell >= 0 && cell < self.lane_len);
        let base = (lane + 1) as usize * self.words_per_lane;
        (
            base + 1 + cell as usize / WORD_BITS as usize,
            cell as u32 % WORD_BITS,
        )
    }

    #[inline(always)]
    fn set(&mut self, lane: i32, cell: i32, blocked: bool) {
        let (w, b) = self.word_index(lane, cell);
        self.words[w] = self.words[w] & !(1 << b) | (blocked as u64) << b;
    }

    #[inline(always)]
    fn get(&self, lane: i32, cell: i32) -> bool {
        let (w, b) = self.word_index(lane, cell);
        self.words[w] >> b & 1 == 1
    }

    /// 64 blocked-bits in travel order starting at `cell`: bit i corresponds
    /// to the cell i steps ahead. `lane` may be -1 or `lanes` (a guard lane).
    /// `cell` must be in `[0, lane_len)`.
    #[inline(always)]
    fn window(&self, lane: i32, cell: i32, forward: bool) -> u64 {
        let base = (lane + 1) as usize * self.words_per_lane;
        if forward {
            let bit = WORD_BITS as usize + cell as usize;
            let w = base + bit / WORD_BITS as usize;
            let sh = bit as u32 % WORD_BITS;
            if sh == 0 {
                self.words[w]
            } else {
                self.words[w] >> sh | self.words[w + 1] << (WORD_BITS - sh)
            }
        } else {
            // window ending at `cell`, then reversed so bit i = cell - i
            let bit = WORD_BITS as usize + cell as usize - (WORD_BITS as usize - 1);
            let w = base + bit / WORD_BITS as usize;
            let sh = bit as u32 % WORD_BITS;
            let raw = if sh == 0 {
                self.words[w]
            } else {
                self.words[w] >> sh | self.words[w + 1] << (WORD_BITS - sh)
            };
            raw.reverse_bits()
        }
    }
}

/// An 8-connected uniform-cost grid map.
///
/// Traversability is held three ways, kept in sync by every mutation: a flat
/// cell-flag array, a row-major blocked bitmap and a column-major blocked
/// bitmap. The bitmaps carry blocked border padding so scans never need
/// bounds checks. Safe for concurrent reads; mutation requires exclusive
/// access.
#[derive(Clone, PartialEq, Eq)]
pub struct GridMap {
    width: i32,
    height: i32,
    cells: Vec<bool>, // true = traversable
    row_bits: BitLanes,
    col_bits: BitLanes,
}

impl GridMap {
    /// A fully traversable `width` x `height` map.
    pub fn new_open(width: i32, height: i32) -> GridMap {
        assert!(width > 0 && height > 0, "map dimensions must be positive");
        let mut map = GridMap {
            width,
            height,
            cells: vec![false; (width as usize) * (height as usize)],
            row_bits: BitLanes::new_blocked(height, width),
            col_bits: BitLanes::new_blocked(width, height),
        };
        for y in 0..height {
            for x in 0..width {
                map.set_cell(Coord::new(x, y), true);
            }
        }
        map
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.x >= 0 && c.y >= 0 && c.x < self.width && c.y < self.height
    }

    #[inline(always)]
    pub fn cell_index(&self, c: Coord) -> usize {
        debug_assert!(self.in_bounds(c));
        c.y as usize * self.width as usize + c.x as usize
    }

    /// True iff `c` is in bounds and traversable. Everything outside the map
    /// reads as blocked.
    #[inline(always)]
    pub fn is_traversable(&self, c: Coord) -> bool {
        self.in_bounds(c) && self.cells[self.cell_index(c)]
    }

    /// Writes a cell's traversability into the flags and both bitmaps.
    fn set_cell(&mut self, c: Coord, traversable: bool) {
        let idx = self.cell_index(c);
        self.cells[idx] = traversable;
        self.row_bits.set(c.y, c.x, !traversable);
        self.col_bits.set(c.x, c.y, !traversable);
    }

    /// Blocks a cell. Returns whether the cell actually changed, so a
    /// matching [`GridMap::unset_obstacle`] can be skipped for cells that
    /// were already blocked and the original bit patterns restored exactly.
    pub fn set_obstacle(&mut self, c: Coord) -> Result<bool, GridError> {
        if !self.in_bounds(c) {
            return Err(GridError::OutOfBounds(c, self.width, self.height));
        }
        if !self.cells[self.cell_index(c)] {
            return Ok(false);
        }
        self.set_cell(c, false);
        Ok(true)
    }

    /// Reverts a cell to traversable. The cell must have been traversable
    /// before the matching [`GridMap::set_obstacle`].
    pub fn unset_obstacle(&mut self, c: Coord) -> Result<(), GridError> {
        if !self.in_bounds(c) {
            return Err(GridError::OutOfBounds(c, self.width, self.height));
        }
        self.set_cell(c, true);
        Ok(())
    }

    /// True iff the single move from `c` in `dir` is legal: the destination
    /// is traversable and, for a diagonal move, both cardinal-component
    /// neighbor cells are traversable too (no corner cutting).
    pub fn can_step(&self, c: Coord, dir: Direction) -> bool {
        if !self.is_traversable(c.step(dir)) {
            return false;
        }
        !dir.is_diagonal()
            || dir
                .components()
                .iter()
                .all(|&comp| self.is_traversable(c.step(comp)))
    }

    /// 8-bit blocked mask of the cells around `c`, indexed by
    /// [`Direction::index`]. Out-of-bounds neighbors read as blocked.
    #[inline]
    pub fn neighborhood_mask(&self, c: Coord) -> u8 {
        let mut mask = 0u8;
        for d in Direction::ALL {
            if !self.is_traversable(c.step(d)) {
                mask |= 1 << d.index();
            }
        }
        mask
    }

    /// Count of traversable cells.
    pub fn traversable_count(&self) -> usize {
        self.cells.iter().filter(|&&t| t).count()
    }

    /// Iterator over all traversable cells in row-major order.
    pub fn traversable_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        let w = self.width;
        self.cells
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t)
            .map(move |(i, _)| Coord::new(i as i32 % w, i as i32 / w))
    }

    /// Blocked-bit window of 64 cells along a row, starting at `start` and
    /// reading in travel order (east when `forward`, west otherwise). `row`
    /// may be -1 or `height` (border padding, fully blocked).
    #[inline(always)]
    pub(crate) fn row_window(&self, row: i32, start: i32, forward: bool) -> u64 {
        self.row_bits.window(row, start, forward)
    }

    /// Column counterpart of [`GridMap::row_window`] (south when `forward`).
    #[inline(always)]
    pub(crate) fn col_window(&self, col: i32, start: i32, forward: bool) -> u64 {
        self.col_bits.window(col, start, forward)
    }

    /// Checks the row/column/flag representations against each other.
    /// Intended for tests and debug assertions.
    pub fn check_consistency(&self) -> bool {
        for y in 0..self.height {
            for x in 0..self.width {
                let t = self.cells[(y * self.width + x) as usize];
                if self.row_bits.get(y, x) != !t || self.col_bits.get(x, y) != !t {
                    return false;
                }
            }
        }
        true
    }

    /// Order-insensitive fingerprint of both bit arrays; used to verify that
    /// temporary mutations restore the map exactly.
    pub fn bit_signature(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64;
        for &w in self.row_bits.words.iter().chain(&self.col_bits.words) {
            h = (h ^ w).wrapping_mul(0x100000001b3);
        }
        h
    }
}

impl std::fmt::Debug for GridMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GridMap {}x{}", self.width, self.height)?;
        for y in 0..self.height {
            for x in 0..self.width {
                let c = if self.is_traversable(Coord::new(x, y)) {
                    '.'
                } else {
                    '@'
                };
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SplitMix64;

    #[test]
    fn set_unset_is_involution() {
        let mut map = GridMap::new_open(10, 7);
        let sig = map.bit_signature();
        let c = Coord::new(3, 3);
        assert!(map.set_obstacle(c).unwrap());
        assert!(!map.is_traversable(c));
        assert!(map.row_bits.get(3, 3));
        assert!(map.col_bits.get(3, 3));
        map.unset_obstacle(c).unwrap();
        assert_eq!(map.bit_signature(), sig);
        assert!(map.check_consistency());
    }

    #[test]
    fn set_on_blocked_is_noop() {
        let mut map = GridMap::new_open(5, 5);
        let c = Coord::new(2, 2);
        assert!(map.set_obstacle(c).unwrap());
        // second set reports no change; caller skips the unset and the cell
        // stays blocked
        assert!(!map.set_obstacle(c).unwrap());
        assert!(!map.is_traversable(c));
    }

    #[test]
    fn out_of_bounds_mutation_is_an_error() {
        let mut map = GridMap::new_open(4, 4);
        assert!(map.set_obstacle(Coord::new(4, 0)).is_err());
        assert!(map.unset_obstacle(Coord::new(-1, 2)).is_err());
    }

    #[test]
    fn corner_cut_is_illegal() {
        // Agent at (0,1) moving NE to (1,0); the north cell (0,0) is blocked.
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(0, 0)).unwrap();
        assert!(!map.can_step(Coord::new(0, 1), Direction::NorthEast));
        // both components open again
        map.unset_obstacle(Coord::new(0, 0)).unwrap();
        assert!(map.can_step(Coord::new(0, 1), Direction::NorthEast));
    }

    #[test]
    fn cardinal_step_into_blocked_is_illegal() {
        let mut map = GridMap::new_open(3, 3);
        map.set_obstacle(Coord::new(2, 1)).unwrap();
        assert!(!map.can_step(Coord::new(1, 1), Direction::East));
        assert!(map.can_step(Coord::new(1, 1), Direction::West));
    }

    #[test]
    fn border_reads_as_blocked() {
        let map = GridMap::new_open(4, 4);
        assert!(!map.is_traversable(Coord::new(-1, 0)));
        assert!(!map.is_traversable(Coord::new(0, 4)));
        assert!(!map.can_step(Coord::new(3, 3), Direction::East));
        // guard lanes and tail padding read blocked in the windows too
        assert_eq!(map.row_window(-1, 0, true), !0);
        assert_eq!(map.row_window(4, 0, true), !0);
        assert_eq!(map.row_window(0, 0, true) & 0xf, 0);
        assert_eq!(map.row_window(0, 0, true) >> 4, !0 >> 4);
    }

    #[test]
    fn windows_read_travel_order() {
        let mut map = GridMap::new_open(70, 3);
        map.set_obstacle(Coord::new(66, 1)).unwrap();
        // forward from x=10: obstacle is 56 steps ahead
        let w = map.row_window(1, 10, true);
        assert_eq!(w & (1 << 56), 1 << 56);
        assert_eq!(w & ((1 << 56) - 1), 0);
        // backward from x=67: obstacle is 1 step "ahead"
        let w = map.row_window(1, 67, false);
        assert_eq!(w & 0b10, 0b10);
        // column windows
        let mut map = GridMap::new_open(3, 70);
        map.set_obstacle(Coord::new(1, 66)).unwrap();
        let w = map.col_window(1, 10, true);
        assert_eq!(w & (1 << 56), 1 << 56);
    }

    /// Randomized mutation fuzz against a shadow boolean grid.
    #[test]
    fn mutation_fuzz_matches_shadow_grid() {
        let mut rng = SplitMix64::new(77);
        let (w, h) = (37, 23);
        let mut map = GridMap::new_open(w, h);
        let mut shadow = vec![true; (w * h) as usize];
        for _ in 0..20_000 {
            let x = rng.gen_range(w as u64) as i32;
            let y = rng.gen_range(h as u64) as i32;
            let c = Coord::new(x, y);
            let idx = (y * w + x) as usize;
            if rng.gen_range(2) == 0 {
                let changed = map.set_obstacle(c).unwrap();
                assert_eq!(changed, shadow[idx]);
                shadow[idx] = false;
            } else {
                map.unset_obstacle(c).unwrap();
                shadow[idx] = true;
            }
        }
        assert!(map.check_consistency());
        for y in 0..h {
            for x in 0..w {
                assert_eq!(
                    map.is_traversable(Coord::new(x, y)),
                    shadow[(y * w + x) as usize]
                );
            }
        }
    }
}
