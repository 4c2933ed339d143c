//! Scaling and survival summaries of run records, written as a data file
//! plus an SVG rendering.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Result};
use plotters::prelude::*;

use crate::record::RunRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Median conflicts with quartiles against a numeric parameter.
    Scaling,
    /// Fraction of runs still unfinished at a given conflict budget.
    Survival,
}

impl PlotKind {
    pub fn parse(s: &str) -> Option<PlotKind> {
        match s {
            "scaling" => Some(PlotKind::Scaling),
            "survival" => Some(PlotKind::Survival),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub config: String,
    pub x: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub solved: usize,
    pub runs: usize,
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.5)
}

/// Censored runs count at their conflict total, which is a lower bound.
pub fn scaling(records: &[RunRecord], x_key: &str) -> Result<Vec<ScalingPoint>> {
    let mut groups: BTreeMap<(String, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let x: f64 = r
            .param_map()
            .get(x_key)
            .ok_or_else(|| anyhow!("record has no parameter `{x_key}`"))?
            .parse()?;
        groups.entry((r.config.clone(), x.to_bits())).or_default().push(r);
    }
    let mut points: Vec<ScalingPoint> = groups
        .into_iter()
        .map(|((config, xb), rs)| {
            let mut c: Vec<f64> = rs.iter().map(|r| r.conflicts as f64).collect();
            c.sort_by(f64::total_cmp);
            ScalingPoint {
                config,
                x: f64::from_bits(xb),
                q1: quantile(&c, 0.25),
                median: quantile(&c, 0.5),
                q3: quantile(&c, 0.75),
                solved: rs.iter().filter(|r| r.solved()).count(),
                runs: rs.len(),
            }
        })
        .collect();
    points.sort_by(|a, b| a.config.cmp(&b.config).then(a.x.total_cmp(&b.x)));
    Ok(points)
}

/// Step curve per configuration: `(conflict budget, fraction unfinished)`.
/// Starts at `(0, 1)` and drops at each solved run's conflict count.
pub fn survival(records: &[RunRecord]) -> BTreeMap<String, Vec<(f64, f64)>> {
    let mut by: BTreeMap<String, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        by.entry(r.config.clone()).or_default().push(r);
    }
    by.into_iter()
        .map(|(config, rs)| {
            let total = rs.len() as f64;
            let mut solved: Vec<f64> = rs.iter().filter(|r| r.solved()).map(|r| r.conflicts as f64).collect();
            solved.sort_by(f64::total_cmp);
            let mut curve = vec![(0.0, 1.0)];
            curve.extend(solved.iter().enumerate().map(|(i, &c)| (c, 1.0 - (i + 1) as f64 / total)));
            (config, curve)
        })
        .collect()
}

/// Writes `<stem>.dat` and `<stem>.svg`. An empty selection is an error.
pub fn emit_plot_data(records: &[RunRecord], kind: PlotKind, x_key: &str, stem: &Path) -> Result<()> {
    if records.is_empty() {
        bail!("no records selected");
    }
    let dat = stem.with_extension("dat");
    let svg = stem.with_extension("svg");
    match kind {
        PlotKind::Scaling => {
            let pts = scaling(records, x_key)?;
            let mut text = format!("# config {x_key} q1 median q3 solved runs\n");
            for p in &pts {
                text.push_str(&format!(
                    "{} {} {} {} {} {} {}\n",
                    p.config, p.x, p.q1, p.median, p.q3, p.solved, p.runs
                ));
            }
            std::fs::write(&dat, text)?;
            let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
            for p in &pts {
                series.entry(&p.config).or_default().push((p.x, p.median.max(1.0)));
            }
            draw(&svg, &format!("median conflicts vs {x_key}"), x_key, "conflicts", &series, true)?;
        }
        PlotKind::Survival => {
            let curves = survival(records);
            let mut text = String::from("# config budget fraction_unfinished\n");
            for (c, pts) in &curves {
                for (x, y) in pts {
                    text.push_str(&format!("{c} {x} {y}\n"));
                }
            }
            std::fs::write(&dat, text)?;
            let series: BTreeMap<&str, Vec<(f64, f64)>> =
                curves.iter().map(|(c, p)| (c.as_str(), p.iter().map(|&(x, y)| (x.max(1.0), y)).collect())).collect();
            draw(&svg, "fraction unfinished", "conflict budget", "unfinished", &series, false)?;
        }
    }
    Ok(())
}

fn draw(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &BTreeMap<&str, Vec<(f64, f64)>>,
    log_y: bool,
) -> Result<()> {
    let all = series.values().flatten();
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 1.0f64);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if x0 >= x1 {
        x1 = x0 + 1.0;
    }
    let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut builder = ChartBuilder::on(&root);
    builder.caption(title, ("sans-serif", 18)).margin(12).x_label_area_size(36).y_label_area_size(56);
    let palette = [RED, BLUE, GREEN, MAGENTA, CYAN, BLACK];
    macro_rules! plot {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart.configure_mesh().x_desc(x_label).y_desc(y_label).draw().map_err(|e| anyhow!("{e}"))?;
            for (i, (name, pts)) in series.iter().enumerate() {
                let color = palette[i % palette.len()];
                chart
                    .draw_series(LineSeries::new(pts.iter().copied(), color))
                    .map_err(|e| anyhow!("{e}"))?
                    .label(*name)
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
                chart
                    .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
                    .map_err(|e| anyhow!("{e}"))?;
            }
            chart.configure_series_labels().border_style(BLACK).draw().map_err(|e| anyhow!("{e}"))?;
        }};
    }
    if log_y {
        plot!(builder.build_cartesian_2d(x0..x1, (1.0..y1 * 2.0).log_scale()).map_err(|e| anyhow!("{e}"))?);
    } else {
        plot!(builder.build_cartesian_2d(x0..x1, 0.0..1.05).map_err(|e| anyhow!("{e}"))?);
    }
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(config: &str, n: u32, conflicts: u64, status: &str) -> RunRecord {
        RunRecord {
            config: config.into(),
            family: "ladder".into(),
            params: format!("n={n}"),
            seed: 0,
            status: status.into(),
            decisions: 0,
            propagations: 0,
            conflicts,
            restarts: 0,
            learned: 0,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn quantiles() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(median(&[5.0, 1.0, 3.0]), 3.0);
    }

    #[test]
    fn scaling_groups_by_config_and_x() {
        let rs = vec![rec("A", 8, 1, "SAT"), rec("A", 8, 3, "SAT"), rec("A", 16, 10, "budget-exhausted")];
        let pts = scaling(&rs, "n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].median, 2.0);
        assert_eq!(pts[1].solved, 0);
        assert!(scaling(&rs, "k").is_err());
    }

    #[test]
    fn survival_counts_censored_runs_as_unfinished() {
        let rs = vec![rec("A", 8, 4, "SAT"), rec("A", 8, 2, "SAT"), rec("A", 8, 9, "budget-exhausted")];
        let s = survival(&rs);
        let want = [(0.0, 1.0), (2.0, 2.0 / 3.0), (4.0, 1.0 / 3.0)];
        assert_eq!(s["A"].len(), want.len());
        for (&(x, y), &(wx, wy)) in s["A"].iter().zip(&want) {
            assert_eq!(x, wx);
            assert!((y - wy).abs() < 1e-12);
        }
    }

    #[test]
    fn writes_files_and_rejects_empty() {
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("out");
        let rs = vec![rec("A", 8, 4, "SAT"), rec("A", 16, 40, "SAT"), rec("B", 8, 2, "SAT")];
        emit_plot_data(&rs, PlotKind::Scaling, "n", &stem).unwrap();
        assert!(std::fs::read_to_string(stem.with_extension("svg")).unwrap().contains("<svg"));
        emit_plot_data(&rs, PlotKind::Survival, "n", &stem).unwrap();
        assert!(std::fs::read_to_string(stem.with_extension("dat")).unwrap().starts_with("# config"));
        assert!(emit_plot_data(&[], PlotKind::Scaling, "n", &stem).is_err());
    }
}
