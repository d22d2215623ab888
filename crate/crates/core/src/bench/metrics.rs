//! Success rate, reward over successes, and inference time, with per-seed spread.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::run::{Baseline, EpisodeResult};
use super::BenchError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub episodes: usize,
    pub sr: f64,
    /// Mean reward over successful episodes; absent when none succeeded.
    pub rwd: Option<f64>,
    pub inf_time: f64,
    /// Sample standard deviations of the per-seed means.
    pub sr_std: f64,
    pub rwd_std: Option<f64>,
    pub inf_time_std: f64,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

pub fn compute_metrics(results: &[EpisodeResult]) -> Result<MetricRow, BenchError> {
    if results.is_empty() {
        return Err(BenchError::Empty);
    }
    let wins: Vec<f64> = results.iter().filter(|r| r.success).map(|r| r.reward).collect();
    let mut by_seed: BTreeMap<usize, Vec<&EpisodeResult>> = BTreeMap::new();
    for r in results {
        by_seed.entry(r.seed).or_default().push(r);
    }
    let (mut sr_s, mut rwd_s, mut inf_s) = (Vec::new(), Vec::new(), Vec::new());
    for eps in by_seed.values() {
        let n = eps.len() as f64;
        sr_s.push(eps.iter().filter(|r| r.success).count() as f64 / n);
        inf_s.push(eps.iter().map(|r| r.inf_time_s).sum::<f64>() / n);
        let w: Vec<f64> = eps.iter().filter(|r| r.success).map(|r| r.reward).collect();
        if !w.is_empty() {
            rwd_s.push(mean(&w));
        }
    }
    let inf: Vec<f64> = results.iter().map(|r| r.inf_time_s).collect();
    Ok(MetricRow {
        episodes: results.len(),
        sr: wins.len() as f64 / results.len() as f64,
        rwd: (!wins.is_empty()).then(|| mean(&wins)),
        inf_time: mean(&inf),
        sr_std: sample_std(&sr_s),
        rwd_std: (!rwd_s.is_empty()).then(|| sample_std(&rwd_s)),
        inf_time_std: sample_std(&inf_s),
    })
}

/// One metric row per (baseline, variant), in first-appearance order.
pub fn summarize(results: &[EpisodeResult]) -> Vec<(Baseline, String, MetricRow)> {
    let mut keys: Vec<(Baseline, String)> = Vec::new();
    for r in results {
        let k = (r.baseline, r.variant.clone());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(b, v)| {
            let group: Vec<EpisodeResult> =
                results.iter().filter(|r| r.baseline == b && r.variant == v).cloned().collect();
            let m = compute_metrics(&group).expect("group is non-empty");
            (b, v, m)
        })
        .collect()
}

pub fn format_rwd(r: Option<f64>) -> String {
    r.map_or_else(|| "--".to_string(), |x| format!("{x:.1}"))
}

/// Variants down, baselines across, with SR / Rwd / Inf-Time under each baseline.
pub fn render_table(rows: &[(Baseline, String, MetricRow)]) -> String {
    let mut baselines: Vec<Baseline> = Vec::new();
    let mut variants: Vec<&str> = Vec::new();
    for (b, v, _) in rows {
        if !baselines.contains(b) {
            baselines.push(*b);
        }
        if !variants.contains(&v.as_str()) {
            variants.push(v);
        }
    }
    let mut head = vec!["Variant".to_string()];
    for b in &baselines {
        for m in ["SR", "Rwd", "Inf-Time"] {
            head.push(format!("{} {m}", b.label()));
        }
    }
    let mut grid = vec![head];
    for v in &variants {
        let mut line = vec![v.to_string()];
        for b in &baselines {
            match rows.iter().find(|(rb, rv, _)| rb == b && rv == v) {
                Some((_, _, m)) => {
                    line.push(format!("{:.2}", m.sr));
                    line.push(format_rwd(m.rwd));
                    line.push(format!("{:.2}", m.inf_time));
                }
                None => line.extend(["".to_string(), "".to_string(), "".to_string()]),
            }
        }
        grid.push(line);
    }
    let widths: Vec<usize> = (0..grid[0].len()).map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
        }
    }
    out
}
