//! Grid world primitives: coordinates, move directions, exact octile costs,
//! the dual-bitmap traversability map, map I/O and synthetic map generators.

mod cost;
mod gen;
mod io;
mod map;

pub use cost::Cost;
pub use gen::{gen_clustered_queries, gen_maze, gen_synthetic, GenError, SplitMix64};
pub use io::{load_map, MapParseError};
pub use map::{GridError, GridMap, WORD_BITS};

/// A cell position: `x` is the column (increases east), `y` the row
/// (increases south). Matches the MovingAI `.scen` coordinate layout.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    /// The adjacent cell one move away in `dir`. Performs no bounds check.
    pub fn step(self, dir: Direction) -> Coord {
        let (dx, dy) = dir.offset();
        Coord::new(self.x + dx, self.y + dy)
    }

    /// `step` repeated `n` times.
    pub fn step_n(self, dir: Direction, n: i32) -> Coord {
        let (dx, dy) = dir.offset();
        Coord::new(self.x + dx * n, self.y + dy * n)
    }
}

impl std::fmt::Debug for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The eight move directions, clockwise from north.
///
/// Cardinal moves cost 1, diagonal moves cost sqrt(2). The discriminants are
/// stable: diagonals have odd indices and `opposite` is index + 4 (mod 8).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
#[repr(u8)]
pub enum Direction {
    North = 0,
    NorthEast = 1,
    East = 2,
    SouthEast = 3,
    South = 4,
    SouthWest = 5,
    West = 6,
    NorthWest = 7,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::North,
        Direction::NorthEast,
        Direction::East,
        Direction::SouthEast,
        Direction::South,
        Direction::SouthWest,
        Direction::West,
        Direction::NorthWest,
    ];
    pub const CARDINALS: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];
    pub const DIAGONALS: [Direction; 4] = [
        Direction::NorthEast,
        Direction::SouthEast,
        Direction::SouthWest,
        Direction::NorthWest,
    ];

    pub const fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Direction {
        Self::ALL[(i & 7) as usize]
    }

    pub const fn offset(self) -> (i32, i32) {
        match self {
            Direction::North => (0, -1),
            Direction::NorthEast => (1, -1),
            Direction::East => (1, 0),
            Direction::SouthEast => (1, 1),
            Direction::South => (0, 1),
            Direction::SouthWest => (-1, 1),
            Direction::West => (-1, 0),
            Direction::NorthWest => (-1, -1),
        }
    }

    pub const fn is_diagonal(self) -> bool {
        self as u8 & 1 == 1
    }

    pub fn opposite(self) -> Direction {
        Self::from_index(self as u8 + 4)
    }

    /// The constituent cardinal moves: a diagonal decomposes into exactly
    /// two cardinals, a cardinal into itself.
    pub fn components(self) -> &'static [Direction] {
        const COMP: [[Direction; 2]; 4] = [
            [Direction::North, Direction::East], // NE
            [Direction::South, Direction::East], // SE
            [Direction::South, Direction::West], // SW
            [Direction::North, Direction::West], // NW
        ];
        if self.is_diagonal() {
            &COMP[(self as u8 >> 1) as usize]
        } else {
            match self {
                Direction::North => &COMP[0][..1],
                Direction::East => &COMP[1][1..],
                Direction::South => &COMP[1][..1],
                Direction::West => &COMP[2][1..],
                _ => unreachable!(),
            }
        }
    }

    /// The direction of a unit offset, if it is one.
    pub fn from_offset(dx: i32, dy: i32) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.offset() == (dx, dy))
    }
}

/// Octile distance between two cells as an exact [`Cost`]:
/// `min(|dx|,|dy|)` diagonal steps plus `||dx|-|dy||` cardinal steps.
pub fn octile_distance(a: Coord, b: Coord) -> Cost {
    let dx = (a.x - b.x).unsigned_abs();
    let dy = (a.y - b.y).unsigned_abs();
    Cost::new(dx.abs_diff(dy), dx.min(dy))
}
