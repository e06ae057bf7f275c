use thiserror::Error;

use super::{Coord, GridMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapParseError {
    #[error("line {line}: expected `{expected}`")]
    BadHeader { line: usize, expected: &'static str },
    #[error("line {line}: expected `{field} <n>`, got `{got}`")]
    BadDimension {
        line: usize,
        field: &'static str,
        got: String,
    },
    #[error("line {line}: unknown terrain character `{ch}`")]
    UnknownTerrain { line: usize, ch: char },
    #[error("line {line}: row has {got} cells, map width is {want}")]
    RowWidth {
        line: usize,
        got: usize,
        want: usize,
    },
    #[error("line {line}: map body has {got} rows, header says {want}")]
    RowCount {
        line: usize,
        got: usize,
        want: usize,
    },
}

/// Parses MovingAI `.map` text:
///
/// ```text
/// type octile
/// height H
/// width W
/// map
/// <H rows of exactly W terrain characters>
/// ```
///
/// Passable terrain is `.`, `G` and `S`; every other terrain character
/// (`@`, `O`, `T`, `W`) is blocked.
pub fn load_map(text: &str) -> Result<GridMap, MapParseError> {
    let mut lines = text.lines().map(str::trim_end).enumerate();

    let mut header = |expected: &'static str, field: &'static str| -> Result<i32, MapParseError> {
        let (i, line) = lines
            .next()
            .ok_or(MapParseError::BadHeader { line: 0, expected })?;
        let lineno = i + 1;
        if field.is_empty() {
            if line.trim() == expected {
                return Ok(0);
            }
            return Err(MapParseError::BadHeader {
                line: lineno,
                expected,
            });
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next().and_then(|v| v.parse().ok())) {
            (Some(k), Some(v)) if k == field && v > 0 => Ok(v),
            _ => Err(MapParseError::BadDimension {
                line: lineno,
                field,
                got: line.to_string(),
            }),
        }
    };

    header("type octile", "")?;
    let height = header("", "height")?;
    let width = header("", "width")?;
    header("map", "")?;

    let mut map = GridMap::new_open(width, height);
    let mut rows = 0;
    for (i, line) in lines.by_ref() {
        let lineno = i + 1;
        if rows == height {
            // trailing blank lines are tolerated, anything else is a
            // dimension mismatch
            if line.trim().is_empty() {
                continue;
            }
            return Err(MapParseError::RowCount {
                line: lineno,
                got: rows as usize + 1,
                want: height as usize,
            });
        }
        if line.chars().count() != width as usize {
            return Err(MapParseError::RowWidth {
                line: lineno,
                got: line.chars().count(),
                want: width as usize,
            });
        }
        for (x, ch) in line.chars().enumerate() {
            let passable = match ch {
                '.' | 'G' | 'S' => true,
                '@' | 'O' | 'T' | 'W' => false,
                _ => return Err(MapParseError::UnknownTerrain { line: lineno, ch }),
            };
            if !passable {
                map.set_obstacle(Coord::new(x as i32, rows)).unwrap();
            }
        }
        rows += 1;
    }
    if rows != height {
        return Err(MapParseError::RowCount {
            line: 0,
            got: rows as usize,
            want: height as usize,
        });
    }
    Ok(map)
}

impl GridMap {
    /// Renders the map back to MovingAI `.map` text (`.`/`@` terrain only),
    /// so generated maps stay inspectable by third-party tools.
    pub fn to_movingai(&self) -> String {
        let mut out =
            String::with_capacity((self.width() as usize + 1) * self.height() as usize + 40);
        out.push_str("type octile\n");
        out.push_str(&format!("height {}\n", self.height()));
        out.push_str(&format!("width {}\n", self.width()));
        out.push_str("map\n");
        for y in 0..self.height() {
            for x in 0..self.width() {
                out.push(if self.is_traversable(Coord::new(x, y)) {
                    '.'
                } else {
                    '@'
                });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_checkerboard() {
        let map = load_map("type octile\nheight 2\nwidth 2\nmap\n.@\n@.\n").unwrap();
        assert!(map.is_traversable(Coord::new(0, 0)));
        assert!(map.is_traversable(Coord::new(1, 1)));
        assert!(!map.is_traversable(Coord::new(1, 0)));
        assert!(!map.is_traversable(Coord::new(0, 1)));
    }

    #[test]
    fn uniform_open_map() {
        let body = ".".repeat(8);
        let text = format!(
            "type octile\nheight 8\nwidth 8\nmap\n{}\n",
            vec![body; 8].join("\n")
        );
        let map = load_map(&text).unwrap();
        assert_eq!(map.traversable_count(), 64);
        assert!(!map.is_traversable(Coord::new(-1, -1)));
        assert!(map.check_consistency());
    }

    #[test]
    fn terrain_classes() {
        // known composition: 4 passable (., G, S, .), 4 blocked (T, W, @, O)
        let map = load_map("type octile\nheight 2\nwidth 4\nmap\n.GST\nW@O.\n").unwrap();
        assert_eq!(map.traversable_count(), 4);
        assert!(!map.is_traversable(Coord::new(3, 0))); // T
        assert!(!map.is_traversable(Coord::new(0, 1))); // W
        assert!(map.is_traversable(Coord::new(1, 0))); // G
        assert!(map.is_traversable(Coord::new(2, 0))); // S
    }

    #[test]
    fn errors_name_lines() {
        assert_eq!(
            load_map("type quad\nheight 2\nwidth 2\nmap\n..\n..\n"),
            Err(MapParseError::BadHeader {
                line: 1,
                expected: "type octile"
            })
        );
        assert!(matches!(
            load_map("type octile\nheight x\nwidth 2\nmap\n..\n..\n"),
            Err(MapParseError::BadDimension { line: 2, .. })
        ));
        assert_eq!(
            load_map("type octile\nheight 2\nwidth 2\nmap\n.z\n..\n"),
            Err(MapParseError::UnknownTerrain { line: 5, ch: 'z' })
        );
        assert!(matches!(
            load_map("type octile\nheight 2\nwidth 2\nmap\n...\n..\n"),
            Err(MapParseError::RowWidth {
                line: 5,
                got: 3,
                want: 2
            })
        ));
        assert!(matches!(
            load_map("type octile\nheight 3\nwidth 2\nmap\n..\n..\n"),
            Err(MapParseError::RowCount { .. })
        ));
    }

    #[test]
    fn movingai_round_trip() {
        let text = "type octile\nheight 3\nwidth 4\nmap\n..@.\n.@..\n....\n";
        let map = load_map(text).unwrap();
        assert_eq!(map.to_movingai(), text);
    }
}
