//! Per-run records and their aggregation into success rate / runtime /
//! makespan summaries.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub map: String,
    pub algo: String,
    pub n: usize,
    pub instance: usize,
    pub seed: u64,
    pub solved: bool,
    pub runtime_s: f64,
    /// Present iff `solved`.
    pub soc: Option<usize>,
    /// Present iff `solved`.
    pub makespan: Option<usize>,
}

/// Summary of one `(map, algorithm, agent count)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub map: String,
    pub algo: String,
    pub n: usize,
    pub runs: usize,
    pub solved: usize,
    pub success_rate: f64,
    /// Mean runtime over solved runs; `None` when nothing was solved.
    pub mean_runtime_s: Option<f64>,
    pub median_runtime_s: Option<f64>,
    /// Makespans of solved runs, ascending.
    pub makespans: Vec<usize>,
}

pub fn aggregate(records: &[RunRecord]) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<(&str, &str, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.map, &r.algo, r.n)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((map, algo, n), rs)| {
            let solved: Vec<&RunRecord> = rs.iter().copied().filter(|r| r.solved).collect();
            let mut runtimes: Vec<f64> = solved.iter().map(|r| r.runtime_s).collect();
            runtimes.sort_by(f64::total_cmp);
            let mut makespans: Vec<usize> = solved.iter().filter_map(|r| r.makespan).collect();
            makespans.sort_unstable();
            GroupSummary {
                map: map.into(),
                algo: algo.into(),
                n,
                runs: rs.len(),
                solved: solved.len(),
                success_rate: solved.len() as f64 / rs.len() as f64,
                mean_runtime_s: mean(&runtimes),
                median_runtime_s: median(&runtimes),
                makespans,
            }
        })
        .collect()
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn median(sorted: &[f64]) -> Option<f64> {
    match sorted.len() {
        0 => None,
        n if n % 2 == 1 => Some(sorted[n / 2]),
        n => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}
