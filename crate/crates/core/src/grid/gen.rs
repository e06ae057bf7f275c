use thiserror::Error;

use super::{Coord, GridMap};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("side length {0} is too small (minimum {1})")]
    SideTooSmall(i32, i32),
    #[error("{name} = {value} is outside [0, 1]")]
    ProportionOutOfRange { name: &'static str, value: f64 },
    #[error("maze side must be odd, got {0}")]
    EvenMazeSide(i32),
    #[error("quadrant has only {have} traversable cells, {want} requested")]
    InsufficientCells { have: usize, want: usize },
}

/// SplitMix64: a tiny seedable generator with bit-stable output, so every
/// generated map and query set is reproducible from its seed alone.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, n)` via the multiply-shift reduction.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Deterministic partial Fisher-Yates: moves a uniform sample of `k`
    /// items to the front of `items`.
    pub fn sample_prefix<T>(&mut self, items: &mut [T], k: usize) {
        let k = k.min(items.len());
        for i in 0..k {
            let j = i + self.gen_range((items.len() - i) as u64) as usize;
            items.swap(i, j);
        }
    }
}

fn check_proportion(name: &'static str, value: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(GenError::ProportionOutOfRange { name, value })
    }
}

/// Generates an `s` x `s` pathological map: a one-cell-thick wall along the
/// central fraction `b` of the main anti-diagonal (the remaining gap split
/// between the two ends), then `floor(r * traversable)` uniformly chosen
/// traversable cells blocked with the seeded generator.
///
/// Deterministic for fixed `(s, b, r, seed)`.
pub fn gen_synthetic(s: i32, b: f64, r: f64, seed: u64) -> Result<GridMap, GenError> {
    if s < 8 {
        return Err(GenError::SideTooSmall(s, 8));
    }
    check_proportion("b", b)?;
    check_proportion("r", r)?;

    let mut map = GridMap::new_open(s, s);
    let wall_len = ((b * s as f64).round() as i32).clamp(0, s);
    let first = (s - wall_len) / 2;
    for i in first..first + wall_len {
        // anti-diagonal cell (s-1-i, i); one wall cell per diagonal index is
        // impermeable under the corner-cut rule
        map.set_obstacle(Coord::new(s - 1 - i, i)).unwrap();
    }

    let mut rng = SplitMix64::new(seed);
    let mut open: Vec<Coord> = map.traversable_cells().collect();
    let obstacles = (r * open.len() as f64).floor() as usize;
    rng.sample_prefix(&mut open, obstacles);
    for &c in &open[..obstacles] {
        map.set_obstacle(c).unwrap();
    }
    Ok(map)
}

/// Samples `n` query pairs: starts from the traversable cells of the
/// top-left corner quadrant, targets from the bottom-right one (quadrant =
/// width/4 x height/4 corner block). Sampling is without replacement and
/// deterministic per seed.
pub fn gen_clustered_queries(
    map: &GridMap,
    n: usize,
    seed: u64,
) -> Result<Vec<(Coord, Coord)>, GenError> {
    let qw = map.width() / 4;
    let qh = map.height() / 4;
    let in_quadrant =
        |c: Coord, x0: i32, y0: i32| c.x >= x0 && c.x < x0 + qw && c.y >= y0 && c.y < y0 + qh;
    let mut starts: Vec<Coord> = map
        .traversable_cells()
        .filter(|&c| in_quadrant(c, 0, 0))
        .collect();
    let mut targets: Vec<Coord> = map
        .traversable_cells()
        .filter(|&c| in_quadrant(c, map.width() - qw, map.height() - qh))
        .collect();
    for cells in [&starts, &targets] {
        if cells.len() < n {
            return Err(GenError::InsufficientCells {
                have: cells.len(),
                want: n,
            });
        }
    }
    let mut rng = SplitMix64::new(seed);
    rng.sample_prefix(&mut starts, n);
    rng.sample_prefix(&mut targets, n);
    Ok(starts[..n]
        .iter()
        .copied()
        .zip(targets[..n].iter().copied())
        .collect())
}

/// Generates a perfect maze (tree-structured corridors of width 1) with a
/// recursive backtracker over the odd-coordinate room lattice. `side` must
/// be odd and at least 5. Unique shortest paths by construction.
pub fn gen_maze(side: i32, seed: u64) -> Result<GridMap, GenError> {
    if side < 5 {
        return Err(GenError::SideTooSmall(side, 5));
    }
    if side % 2 == 0 {
        return Err(GenError::EvenMazeSide(side));
    }
    let rooms = (side - 1) / 2; // room (i, j) lives at cell (2i+1, 2j+1)
    let mut map = GridMap::new_open(side, side);
    for y in 0..side {
        for x in 0..side {
            if x % 2 == 0 || y % 2 == 0 {
                map.set_obstacle(Coord::new(x, y)).unwrap();
            }
        }
    }

    let mut rng = SplitMix64::new(seed);
    let mut visited = vec![false; (rooms * rooms) as usize];
    let mut stack = vec![(0i32, 0i32)];
    visited[0] = true;
    while let Some(&(i, j)) = stack.last() {
        let mut neighbors = [(0i32, 0i32); 4];
        let mut count = 0;
        for (di, dj) in [(0, -1), (1, 0), (0, 1), (-1, 0)] {
            let (ni, nj) = (i + di, j + dj);
            if ni >= 0
                && nj >= 0
                && ni < rooms
                && nj < rooms
                && !visited[(nj * rooms + ni) as usize]
            {
                neighbors[count] = (ni, nj);
                count += 1;
            }
        }
        if count == 0 {
            stack.pop();
            continue;
        }
        let (ni, nj) = neighbors[rng.gen_range(count as u64) as usize];
        visited[(nj * rooms + ni) as usize] = true;
        // carve the wall cell between the two rooms
        let wall = Coord::new(i + ni + 1, j + nj + 1);
        map.unset_obstacle(wall).unwrap();
        stack.push((ni, nj));
    }
    Ok(map)
}
