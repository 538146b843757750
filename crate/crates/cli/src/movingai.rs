//! MovingAI `.map` and `.scen` files.

use std::fmt::Write as _;

use cgamapf_core::{GridGraph, GridMap, Instance, InstanceError, MapError, Vertex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapParseError {
    #[error("line {line}: expected `{expected}`")]
    Header { line: usize, expected: &'static str },
    #[error("line {line}: invalid {field} `{value}`")]
    BadNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: row {row} has {found} cells, expected {width}")]
    RowLength {
        line: usize,
        row: usize,
        found: usize,
        width: usize,
    },
    #[error("line {line}: unknown cell character {ch:?}")]
    UnknownCell { line: usize, ch: char },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

fn cell(ch: char) -> Option<bool> {
    match ch {
        '.' | 'G' | 'S' => Some(true),
        '@' | 'O' | 'T' | 'W' => Some(false),
        _ => None,
    }
}

/// Parses a MovingAI map. Lines are numbered from 1.
pub fn parse_map(text: &str) -> Result<GridMap, MapParseError> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate();
    let mut next = |expected: &'static str| {
        lines
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or(MapParseError::Header { line: 0, expected })
    };

    let (line, l) = next("type octile")?;
    if !l.trim().starts_with("type") {
        return Err(MapParseError::Header {
            line,
            expected: "type octile",
        });
    }
    let mut dim = |key: &'static str| -> Result<usize, MapParseError> {
        let (line, l) = next(key)?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(MapParseError::Header { line, expected: key });
        }
        let value = parts.next().unwrap_or_default();
        value.parse().map_err(|_| MapParseError::BadNumber {
            line,
            field: key,
            value: value.to_owned(),
        })
    };
    let height = dim("height")?;
    let width = dim("width")?;
    let (line, l) = next("map")?;
    if l.trim() != "map" {
        return Err(MapParseError::Header { line, expected: "map" });
    }

    let mut cells = Vec::with_capacity(width * height);
    let mut rows = 0;
    for (i, l) in lines {
        if rows == height {
            if l.trim().is_empty() {
                continue;
            }
            return Err(MapParseError::RowCount {
                expected: height,
                found: rows + 1,
            });
        }
        let found = l.chars().count();
        if found != width {
            return Err(MapParseError::RowLength {
                line: i + 1,
                row: rows,
                found,
                width,
            });
        }
        for ch in l.chars() {
            cells.push(cell(ch).ok_or(MapParseError::UnknownCell { line: i + 1, ch })?);
        }
        rows += 1;
    }
    if rows != height {
        return Err(MapParseError::RowCount {
            expected: height,
            found: rows,
        });
    }
    Ok(GridMap::new(width, height, cells)?)
}

/// Writes a map with `.` for passable and `@` for blocked cells.
pub fn serialize_map(map: &GridMap) -> String {
    let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", map.height(), map.width());
    for row in map.cells().chunks(map.width()) {
        out.extend(row.iter().map(|&p| if p { '.' } else { '@' }));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenParseError {
    #[error("line {line}: expected `version 1`")]
    Version { line: usize },
    #[error("line {line}: expected 9 tab-separated fields, found {found}")]
    Fields { line: usize, found: usize },
    #[error("line {line}: invalid {field} `{value}`")]
    BadNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: ({x}, {y}) is outside the map")]
    OutOfBounds { line: usize, x: usize, y: usize },
    #[error("line {line}: ({x}, {y}) is a blocked cell")]
    Blocked { line: usize, x: usize, y: usize },
    #[error("{requested} agents requested but the scenario has {available}")]
    TooFewRecords { requested: usize, available: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Builds an instance from the first `n` records of a scenario. Bucket,
/// map name, map size and optimal length are read but not used.
pub fn parse_scen(text: &str, map: &GridMap, n: usize) -> Result<Instance, ScenParseError> {
    if n == 0 {
        return Err(InstanceError::NoAgents.into());
    }
    let graph = GridGraph::new(map.clone());
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate();
    match lines.next() {
        Some((_, l)) if matches!(l.split_whitespace().collect::<Vec<_>>()[..], ["version", "1" | "1.0"]) => {}
        other => {
            return Err(ScenParseError::Version {
                line: other.map_or(1, |(i, _)| i + 1),
            })
        }
    }

    let (mut starts, mut goals) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (i, l) in lines {
        if starts.len() == n {
            break;
        }
        if l.trim().is_empty() {
            continue;
        }
        let line = i + 1;
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 9 {
            return Err(ScenParseError::Fields {
                line,
                found: fields.len(),
            });
        }
        let num = |k: usize, field: &'static str| -> Result<usize, ScenParseError> {
            fields[k].trim().parse().map_err(|_| ScenParseError::BadNumber {
                line,
                field,
                value: fields[k].to_owned(),
            })
        };
        let vertex = |x: usize, y: usize| -> Result<Vertex, ScenParseError> {
            if x >= map.width() || y >= map.height() {
                return Err(ScenParseError::OutOfBounds { line, x, y });
            }
            graph.vertex_at(y, x).ok_or(ScenParseError::Blocked { line, x, y })
        };
        starts.push(vertex(num(4, "start x")?, num(5, "start y")?)?);
        goals.push(vertex(num(6, "goal x")?, num(7, "goal y")?)?);
    }
    if starts.len() < n {
        return Err(ScenParseError::TooFewRecords {
            requested: n,
            available: starts.len(),
        });
    }
    Ok(Instance::new(graph, starts, goals)?)
}

/// Writes a scenario for `instance`; the optimal-length column holds the
/// static shortest-path length.
pub fn serialize_scen(instance: &Instance, map_name: &str) -> String {
    let graph = instance.graph();
    let mut out = String::from("version 1\n");
    for (&s, &g) in instance.starts().iter().zip(instance.goals()) {
        let (sr, sc) = graph.coords(s);
        let (gr, gc) = graph.coords(g);
        let len = cgamapf_core::search::shortest_path(graph, s, g).map_or(0, |p| p.len() - 1);
        let _ = writeln!(
            out,
            "0\t{map_name}.map\t{}\t{}\t{sc}\t{sr}\t{gc}\t{gr}\t{len}",
            graph.map().width(),
            graph.map().height()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_mixed_map() {
        let m = parse_map("type octile\nheight 2\nwidth 2\nmap\n..\n.@\n").unwrap();
        assert_eq!((m.width(), m.height(), m.passable_count()), (2, 2, 3));
    }

    #[test]
    fn alternative_cell_characters() {
        let m = parse_map("type octile\nheight 1\nwidth 7\nmap\n.GS@OTW\n").unwrap();
        assert_eq!(m.cells(), &[true, true, true, false, false, false, false]);
    }

    #[test]
    fn short_row_reports_line_and_row() {
        let err = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n..\n").unwrap_err();
        assert_eq!(
            err,
            MapParseError::RowLength {
                line: 6,
                row: 1,
                found: 2,
                width: 3
            }
        );
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_map("type octile\nheight x\nwidth 3\nmap\n"),
            Err(MapParseError::BadNumber { line: 2, .. })
        ));
        assert!(matches!(
            parse_map("type octile\nwidth 3\nheight 2\nmap\n"),
            Err(MapParseError::Header { line: 2, .. })
        ));
        assert!(matches!(
            parse_map("type octile\nheight 1\nwidth 2\nmap\n.x\n"),
            Err(MapParseError::UnknownCell { line: 5, ch: 'x' })
        ));
        assert!(matches!(
            parse_map("type octile\nheight 3\nwidth 2\nmap\n..\n"),
            Err(MapParseError::RowCount { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn map_round_trip() {
        let text = "type octile\nheight 2\nwidth 3\nmap\n.@.\n...\n";
        assert_eq!(serialize_map(&parse_map(text).unwrap()), text);
    }

    fn row_map() -> GridMap {
        GridMap::open(2, 1).unwrap()
    }

    #[test]
    fn one_record() {
        let scen = "version 1\n0\trow.map\t2\t1\t0\t0\t1\t0\t1\n";
        let inst = parse_scen(scen, &row_map(), 1).unwrap();
        assert_eq!(inst.starts(), &[Vertex(0)]);
        assert_eq!(inst.goals(), &[Vertex(1)]);
    }

    #[test]
    fn zero_agents_is_an_error() {
        let err = parse_scen("version 1\n", &row_map(), 0).unwrap_err();
        assert_eq!(err.to_string(), "no agents requested");
    }

    #[test]
    fn scen_errors() {
        let m = row_map();
        assert!(matches!(
            parse_scen("version 2\n", &m, 1),
            Err(ScenParseError::Version { line: 1 })
        ));
        assert!(matches!(
            parse_scen("version 1.0\n0\trow.map\t2\t1\t0\t0\t5\t0\t1\n", &m, 1),
            Err(ScenParseError::OutOfBounds { line: 2, x: 5, y: 0 })
        ));
        assert!(matches!(
            parse_scen("version 1\n0\trow.map\t2\t1\t0\t0\n", &m, 1),
            Err(ScenParseError::Fields { line: 2, found: 6 })
        ));
        assert!(matches!(
            parse_scen("version 1\n0\trow.map\t2\t1\t0\t0\t1\t0\t1\n", &m, 2),
            Err(ScenParseError::TooFewRecords {
                requested: 2,
                available: 1
            })
        ));
        let blocked = GridMap::new(2, 1, vec![true, false]).unwrap();
        assert!(matches!(
            parse_scen("version 1\n0\tb.map\t2\t1\t0\t0\t1\t0\t1\n", &blocked, 1),
            Err(ScenParseError::Blocked { line: 2, x: 1, y: 0 })
        ));
    }

    #[test]
    fn scen_round_trip() {
        let map = GridMap::open(4, 3).unwrap();
        let inst = cgamapf_core::instance::generate_instance(&map, 5, 3).unwrap();
        let back = parse_scen(&serialize_scen(&inst, "open"), &map, 5).unwrap();
        assert_eq!(back.starts(), inst.starts());
        assert_eq!(back.goals(), inst.goals());
    }
}
