//! Report assembly. Rationals are written as `p/q`, with a 20-digit decimal
//! column next to them for plotting only.

use std::io::Write;
use std::path::{Path, PathBuf};

use cantor_core::cantor::{CantorStage, GapRecord};
use cantor_core::difference::steinhaus_suite;
use cantor_core::Rational;
use serde::Serialize;
use serde_json::json;

use crate::config::{CliError, Format, RunConfig};
use crate::verify::VerifyReport;
use crate::brackets;

/// A gnuplot-style series: one `n value` line per stage.
#[derive(Debug, Clone)]
pub struct Plot {
    pub name: String,
    pub label: String,
    pub points: Vec<(usize, Rational)>,
}

impl Plot {
    fn new(name: &str, label: &str, points: Vec<(usize, Rational)>) -> Self {
        Plot {
            name: name.to_string(),
            label: label.to_string(),
            points,
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("# n {}\n", self.label);
        for (n, v) in &self.points {
            s.push_str(&format!("{n} {}\n", decimal(v)));
        }
        s
    }
}

/// One command's output: the main document in both formats, files that only make
/// sense in a directory, and plot series.
#[derive(Debug, Clone)]
pub struct Report {
    pub stem: String,
    pub json: String,
    pub csv: String,
    pub per_stage: Vec<(String, String)>,
    pub plots: Vec<Plot>,
}

fn decimal(x: &Rational) -> String {
    x.to_decimal(20)
}

fn pretty(value: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    let bytes = w.into_inner().expect("flushed in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

impl Report {
    pub fn main_text(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        }
    }

    /// Writes to `--out` if given, otherwise the main document goes to `stdout`.
    pub fn deliver(&self, config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
        match &config.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                let main = dir.join(format!("{}.{}", self.stem, config.format.extension()));
                write_file(&main, self.main_text(config.format))?;
                for (name, text) in &self.per_stage {
                    write_file(&dir.join(name), text)?;
                }
            }
            None => {
                let path = PathBuf::from("<stdout>");
                stdout
                    .write_all(self.main_text(config.format).as_bytes())
                    .map_err(|e| CliError::io(&path, e))?;
            }
        }
        if config.emit_plot_data {
            let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for p in &self.plots {
                write_file(&dir.join(format!("{}.dat", p.name)), &p.render())?;
            }
        }
        Ok(())
    }
}

const GAP_HEADER: [&str; 7] = ["n", "address", "l", "r", "stage_created", "l_decimal", "r_decimal"];

fn gap_row(n: usize, g: &GapRecord) -> Vec<String> {
    let (l, r) = (g.interval.lo(), g.interval.hi());
    vec![
        n.to_string(),
        g.address.as_ref().map_or("-".to_string(), |a| a.to_string()),
        l.to_string(),
        r.to_string(),
        g.stage_created.to_string(),
        decimal(l),
        decimal(r),
    ]
}

fn gap_rows(s: &CantorStage) -> impl Iterator<Item = Vec<String>> + '_ {
    s.gaps().iter().map(|g| gap_row(s.n(), g))
}

pub fn construct(config: &RunConfig) -> Result<Report, CliError> {
    let stages = config.spec.stages(config.max_stage, config.budget)?;
    let mut per_stage = Vec::new();
    for s in &stages {
        per_stage.push((format!("stage_{}.json", s.n()), pretty(s)?));
        per_stage.push((format!("gaps_{}.csv", s.n()), csv_text(&GAP_HEADER, gap_rows(s))?));
    }
    let measure = stages.iter().map(|s| (s.n(), s.components().measure())).collect();
    let count = stages
        .iter()
        .map(|s| (s.n(), Rational::from(s.component_count() as i64)))
        .collect();
    Ok(Report {
        stem: "construct".to_string(),
        json: pretty(&json!({ "spec": config.spec, "stages": stages }))?,
        csv: csv_text(&GAP_HEADER, stages.iter().flat_map(gap_rows))?,
        per_stage,
        plots: vec![
            Plot::new("construct_measure", "m(C_n)", measure),
            Plot::new("construct_components", "components", count),
        ],
    })
}

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    m_inner: Rational,
    m_outer: Rational,
    m_missing_outer: Rational,
    point_parts: usize,
}

pub fn diff_bounds(config: &RunConfig) -> Result<Report, CliError> {
    let stages = config.spec.stages(config.max_stage, config.budget)?;
    let brackets = brackets(&stages);
    let rows: Vec<BoundsRow> = brackets
        .iter()
        .map(|b| BoundsRow {
            n: b.n,
            m_inner: b.inner.measure(),
            m_outer: b.outer.measure(),
            m_missing_outer: b.missing_outer.measure(),
            point_parts: b.missing_outer.point_parts().count(),
        })
        .collect();
    let csv = csv_text(
        &[
            "n",
            "m_inner",
            "m_outer",
            "m_missing_outer",
            "point_parts",
            "m_inner_decimal",
            "m_outer_decimal",
            "m_missing_outer_decimal",
        ],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.m_inner.to_string(),
                r.m_outer.to_string(),
                r.m_missing_outer.to_string(),
                r.point_parts.to_string(),
                decimal(&r.m_inner),
                decimal(&r.m_outer),
                decimal(&r.m_missing_outer),
            ]
        }),
    )?;
    let series = |f: fn(&BoundsRow) -> &Rational| rows.iter().map(|r| (r.n, f(r).clone())).collect();
    let plots = vec![
        Plot::new("diff_bounds_inner", "m(inner)", series(|r| &r.m_inner)),
        Plot::new("diff_bounds_outer", "m(outer)", series(|r| &r.m_outer)),
        Plot::new("diff_bounds_missing_outer", "m(missing_outer)", series(|r| &r.m_missing_outer)),
    ];
    Ok(Report {
        stem: "diff_bounds".to_string(),
        json: pretty(&json!({ "spec": config.spec, "rows": rows, "brackets": brackets }))?,
        csv,
        per_stage: Vec::new(),
        plots,
    })
}

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    stage_measure: Rational,
    components: usize,
    max_component: Rational,
    center: Rational,
    center_points: usize,
    quarters: [Rational; 4],
    total: Rational,
    outer: Rational,
}

pub fn measure_scan(config: &RunConfig) -> Result<Report, CliError> {
    let stages = config.spec.stages(config.max_stage, config.budget)?;
    let report = steinhaus_suite(&brackets(&stages));
    let rows: Vec<ScanRow> = stages
        .iter()
        .zip(report.rows)
        .map(|(s, r)| ScanRow {
            n: r.n,
            stage_measure: s.components().measure(),
            components: s.component_count(),
            max_component: s.max_component_length(),
            center: r.center,
            center_points: r.center_points,
            quarters: r.quarters,
            total: r.total,
            outer: r.outer,
        })
        .collect();
    let csv = csv_text(
        &[
            "n",
            "stage_measure",
            "components",
            "max_component",
            "center",
            "center_points",
            "q_-1_-3/4",
            "q_-3/4_-1/2",
            "q_1/2_3/4",
            "q_3/4_1",
            "total",
            "outer",
            "stage_measure_decimal",
            "center_decimal",
            "total_decimal",
        ],
        rows.iter().map(|r| {
            let mut row = vec![
                r.n.to_string(),
                r.stage_measure.to_string(),
                r.components.to_string(),
                r.max_component.to_string(),
                r.center.to_string(),
                r.center_points.to_string(),
            ];
            row.extend(r.quarters.iter().map(|x| x.to_string()));
            row.extend([
                r.total.to_string(),
                r.outer.to_string(),
                decimal(&r.stage_measure),
                decimal(&r.center),
                decimal(&r.total),
            ]);
            row
        }),
    )?;
    let series = |f: fn(&ScanRow) -> &Rational| rows.iter().map(|r| (r.n, f(r).clone())).collect();
    let plots = vec![
        Plot::new("measure_scan_center", "m(missing_outer ∩ [-1/2,1/2])", series(|r| &r.center)),
        Plot::new("measure_scan_total", "m(missing_outer)", series(|r| &r.total)),
        Plot::new("measure_scan_stage", "m(C_n)", series(|r| &r.stage_measure)),
    ];
    Ok(Report {
        stem: "measure_scan".to_string(),
        json: pretty(&json!({ "spec": config.spec, "rows": rows }))?,
        csv,
        per_stage: Vec::new(),
        plots,
    })
}

pub fn verify_report(v: &VerifyReport) -> Result<Report, CliError> {
    let csv = csv_text(
        &["assertion", "status", "detail", "witness"],
        v.assertions.iter().map(|a| {
            vec![
                a.name.clone(),
                a.status.label().to_string(),
                a.detail.clone(),
                a.witness.clone().unwrap_or_default(),
            ]
        }),
    )?;
    Ok(Report {
        stem: format!("verify_{}", v.theorem.name()),
        json: pretty(v)?,
        csv,
        per_stage: Vec::new(),
        plots: Vec::new(),
    })
}
