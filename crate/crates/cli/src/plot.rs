//! SVG charts from a bench CSV: success rate and mean runtime against the
//! agent count, and solved makespans sorted from lowest to highest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cgamapf_core::metrics::{aggregate, GroupSummary, RunRecord};
use plotters::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("no records to plot")]
    Empty,
    #[error("{path}: {message}")]
    Draw { path: PathBuf, message: String },
}

const PALETTE: [RGBColor; 6] = [
    RGBColor(0x1f, 0x77, 0xb4),
    RGBColor(0xd6, 0x27, 0x28),
    RGBColor(0x2c, 0xa0, 0x2c),
    RGBColor(0xff, 0x7f, 0x0e),
    RGBColor(0x94, 0x67, 0xbd),
    RGBColor(0x8c, 0x56, 0x4b),
];

/// One named series of `(x, y)` points.
type Series = (String, Vec<(f64, f64)>);

struct Chart<'a> {
    title: String,
    x_label: &'a str,
    y_label: &'a str,
    series: Vec<Series>,
}

/// Writes three charts per map into `out_dir` and returns their paths.
pub fn plot_records(records: &[RunRecord], out_dir: &Path) -> Result<Vec<PathBuf>, PlotError> {
    if records.is_empty() {
        return Err(PlotError::Empty);
    }
    let mut by_map: BTreeMap<String, Vec<GroupSummary>> = BTreeMap::new();
    for g in aggregate(records) {
        by_map.entry(g.map.clone()).or_default().push(g);
    }

    let mut written = Vec::new();
    for (map, groups) in by_map {
        let per_algo = |f: &dyn Fn(&GroupSummary) -> Option<f64>| -> Vec<Series> {
            let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
            for g in &groups {
                let points = series.entry(&g.algo).or_default();
                if let Some(y) = f(g) {
                    points.push((g.n as f64, y));
                }
            }
            series.into_iter().map(|(a, p)| (a.to_owned(), p)).collect()
        };
        let mut makespans: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for g in &groups {
            makespans.entry(&g.algo).or_default().extend(&g.makespans);
        }
        let sorted: Vec<Series> = makespans
            .into_iter()
            .map(|(a, mut m)| {
                m.sort_unstable();
                let points = m.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v as f64)).collect();
                (a.to_owned(), points)
            })
            .collect();

        let charts = [
            (
                "success_rate",
                Chart {
                    title: format!("{map}: success rate"),
                    x_label: "agents",
                    y_label: "success rate",
                    series: per_algo(&|g| Some(g.success_rate)),
                },
            ),
            (
                "runtime",
                Chart {
                    title: format!("{map}: mean runtime of solved runs"),
                    x_label: "agents",
                    y_label: "runtime (s)",
                    series: per_algo(&|g| g.mean_runtime_s),
                },
            ),
            (
                "makespan",
                Chart {
                    title: format!("{map}: makespan, sorted"),
                    x_label: "solved instances",
                    y_label: "makespan",
                    series: sorted,
                },
            ),
        ];
        for (metric, chart) in charts {
            let path = out_dir.join(format!("{map}_{metric}.svg"));
            draw(&chart, &path).map_err(|message| PlotError::Draw {
                path: path.clone(),
                message,
            })?;
            written.push(path);
        }
    }
    Ok(written)
}

fn bounds(series: &[Series]) -> ((f64, f64), (f64, f64)) {
    let points = series.iter().flat_map(|(_, p)| p);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        return ((0.0, 1.0), (0.0, 1.0));
    }
    // Pad so single points sit inside the frame.
    let pad = |lo: f64, hi: f64| {
        let d = if hi > lo {
            (hi - lo) * 0.05
        } else {
            lo.abs().max(1.0) * 0.5
        };
        (lo - d, hi + d)
    };
    (pad(x0, x1), pad(y0, y1.max(y0)))
}

fn draw(chart: &Chart<'_>, path: &Path) -> Result<(), String> {
    let root = SVGBackend::new(path, (640, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| e.to_string())?;
    let ((x0, x1), (y0, y1)) = bounds(&chart.series);
    let mut ctx = ChartBuilder::on(&root)
        .caption(&chart.title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(56)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| e.to_string())?;
    ctx.configure_mesh()
        .x_desc(chart.x_label)
        .y_desc(chart.y_label)
        .draw()
        .map_err(|e| e.to_string())?;
    for (i, (name, points)) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        ctx.draw_series(LineSeries::new(points.iter().copied(), color.stroke_width(2)))
            .map_err(|e| e.to_string())?
            .label(name)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2)));
        ctx.draw_series(points.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(|e| e.to_string())?;
    }
    ctx.configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| e.to_string())?;
    root.present().map_err(|e| e.to_string())
}
