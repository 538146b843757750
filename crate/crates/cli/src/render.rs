//! One SVG frame per time step of a solution.

use std::fmt::Write as _;

use cgamapf_core::solution::validate;
use cgamapf_core::{GridGraph, SeparatingVertexSet, Solution, StructuralError, Vertex};
use thiserror::Error;

const CELL: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("solution does not fit the map: {0:?}")]
    Mismatch(StructuralError),
    #[error("{goals} goals for {agents} agents")]
    GoalCount { goals: usize, agents: usize },
}

/// Distinct, stable colour per agent.
fn color(agent: usize) -> String {
    format!("hsl({},70%,45%)", (agent * 137) % 360)
}

/// Renders frames `0..=makespan`. `goals` defaults to each path's last
/// vertex when empty. Structural defects (unknown vertices, illegal moves)
/// are rejected; conflicts are drawn as they are.
pub fn render_frames(
    graph: &GridGraph,
    svs: &SeparatingVertexSet,
    solution: &Solution,
    goals: &[Vertex],
) -> Result<Vec<String>, RenderError> {
    let report = validate(solution, graph);
    if let Some(&e) = report
        .structural
        .iter()
        .find(|e| !matches!(e, StructuralError::UnequalLength { .. }))
    {
        return Err(RenderError::Mismatch(e));
    }
    let n = solution.num_agents();
    let goals: Vec<Vertex> = if goals.is_empty() {
        solution
            .paths
            .iter()
            .map(|p| *p.last().expect("paths are non-empty"))
            .collect()
    } else if goals.len() == n {
        goals.to_vec()
    } else {
        return Err(RenderError::GoalCount {
            goals: goals.len(),
            agents: n,
        });
    };

    let map = graph.map();
    let (w, h) = (map.width() * CELL, map.height() * CELL);
    let mut background = String::new();
    for r in 0..map.height() {
        for c in 0..map.width() {
            let fill = match graph.vertex_at(r, c) {
                None => "#404040",
                Some(v) if svs.is_separating(v) => "#f3d9a4",
                Some(_) => "#ffffff",
            };
            let _ = writeln!(
                background,
                r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#c0c0c0" stroke-width="1"/>"##,
                c * CELL,
                r * CELL
            );
        }
    }
    for (a, &g) in goals.iter().enumerate() {
        let (r, c) = graph.coords(g);
        let _ = writeln!(
            background,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            c * CELL + 3,
            r * CELL + 3,
            CELL - 6,
            CELL - 6,
            color(a)
        );
    }

    let frames = (0..=solution.makespan())
        .map(|t| {
            let mut svg = format!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{}\" viewBox=\"0 0 {w} {}\">\n",
                h + CELL,
                h + CELL
            );
            svg.push_str(&background);
            for (a, path) in solution.paths.iter().enumerate() {
                let v = path[t.min(path.len() - 1)];
                let (r, c) = graph.coords(v);
                let (cx, cy) = (c * CELL + CELL / 2, r * CELL + CELL / 2);
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{cx}" cy="{cy}" r="{}" fill="{}"/>"#,
                    CELL / 2 - 3,
                    color(a)
                );
                let _ = writeln!(
                    svg,
                    r##"<text x="{cx}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle" fill="#ffffff">{a}</text>"##,
                    cy + 4
                );
            }
            let _ = writeln!(
                svg,
                r##"<text x="4" y="{}" font-family="sans-serif" font-size="14" fill="#000000">t = {t}</text>"##,
                h + CELL - 6
            );
            svg.push_str("</svg>\n");
            svg
        })
        .collect();
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cgamapf_core::svs::compute_svs;
    use cgamapf_core::GridMap;

    #[test]
    fn one_agent_two_steps_gives_three_frames() {
        let g = GridGraph::new(GridMap::open(3, 1).unwrap());
        let sol = Solution::from_paths(vec![vec![Vertex(0), Vertex(1), Vertex(2)]], "cga");
        let frames = render_frames(&g, &compute_svs(&g), &sol, &[]).unwrap();
        assert_eq!(frames.len(), 3);
        assert!(frames[2].contains("t = 2"));
    }

    #[test]
    fn path_off_the_map_is_rejected() {
        let g = GridGraph::new(GridMap::open(2, 1).unwrap());
        let sol = Solution::from_paths(vec![vec![Vertex(0), Vertex(5)]], "cga");
        assert!(matches!(
            render_frames(&g, &compute_svs(&g), &sol, &[]),
            Err(RenderError::Mismatch(_))
        ));
    }
}
