use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::grid::{Coord, Cost, Direction, GridMap};

/// Exact shortest distances from one source to every reachable cell.
/// Unreachable cells read as [`Cost::INFINITY`].
pub struct DistanceTable {
    width: i32,
    height: i32,
    dist: Vec<Cost>,
}

impl DistanceTable {
    pub fn get(&self, c: Coord) -> Cost {
        if c.x < 0 || c.y < 0 || c.x >= self.width || c.y >= self.height {
            return Cost::INFINITY;
        }
        self.dist[(c.y * self.width + c.x) as usize]
    }
}

/// Plain Dijkstra over the whole map. This is the truth oracle every search
/// algorithm is checked against; it shares nothing with the jump-point
/// machinery beyond the move rules.
pub fn dijkstra_table(map: &GridMap, source: Coord) -> DistanceTable {
    let (w, h) = (map.width(), map.height());
    let mut dist = vec![Cost::INFINITY; (w as usize) * (h as usize)];
    let mut heap: BinaryHeap<(Reverse<Cost>, i32)> = BinaryHeap::new();
    let src = source.y * w + source.x;
    dist[src as usize] = Cost::ZERO;
    heap.push((Reverse(Cost::ZERO), src));
    while let Some((Reverse(g), idx)) = heap.pop() {
        if g > dist[idx as usize] {
            continue;
        }
        let c = Coord::new(idx % w, idx / w);
        for d in Direction::ALL {
            if !map.can_step(c, d) {
                continue;
            }
            let step = if d.is_diagonal() {
                Cost::diagonal(1)
            } else {
                Cost::cardinal(1)
            };
            let n = c.step(d);
            let nidx = (n.y * w + n.x) as usize;
            let ng = g + step;
            if ng < dist[nidx] {
                dist[nidx] = ng;
                heap.push((Reverse(ng), n.y * w + n.x));
            }
        }
    }
    DistanceTable {
        width: w,
        height: h,
        dist,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::octile_distance;

    #[test]
    fn open_map_distances_are_octile() {
        let map = GridMap::new_open(12, 9);
        let src = Coord::new(2, 3);
        let table = dijkstra_table(&map, src);
        assert_eq!(table.get(src), Cost::ZERO);
        for c in map.traversable_cells() {
            assert_eq!(table.get(c), octile_distance(src, c), "{c}");
        }
    }

    #[test]
    fn unreachable_cells_are_infinite() {
        let mut map = GridMap::new_open(6, 3);
        for y in 0..3 {
            map.set_obstacle(Coord::new(3, y)).unwrap();
        }
        let table = dijkstra_table(&map, Coord::new(0, 1));
        assert!(table.get(Coord::new(5, 1)).is_infinite());
        assert!(table.get(Coord::new(2, 1)).is_finite());
        assert!(table.get(Coord::new(-3, 0)).is_infinite());
    }
}
