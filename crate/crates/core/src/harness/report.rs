//! CSV tables, SVG plots and a plain-text summary for a set of results.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::calibrate::{calibrate, CalibrationResult};
use super::config::Config;
use super::pull::ForceTrace;
use super::scenario::{run_table, CaseRun};
use super::sweep::{run_pressure_sweep, SweepTable};
use crate::error::{Error, Result};
use crate::model::{CaseKind, PaperDataset, Target, Timing};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub target: Target,
    pub case: CaseKind,
    pub fa_sim: f64,
    pub fa_paper: f64,
    pub fp_sim: f64,
    pub fp_paper: f64,
}

impl Comparison {
    /// Simulated minus measured average force, N.
    pub fn dev(&self) -> f64 {
        self.fa_sim - self.fa_paper
    }
}

/// Pair each run with its dataset row. Runs without a row are skipped.
pub fn compare(runs: &[CaseRun], dataset: &PaperDataset) -> Vec<Comparison> {
    runs.iter()
        .filter_map(|r| {
            let row = dataset.row(r.target, r.case.kind())?;
            Some(Comparison {
                target: r.target,
                case: r.case.kind(),
                fa_sim: r.summary.fa,
                fa_paper: row.fa_n,
                fp_sim: r.summary.fp,
                fp_paper: row.fp_n,
            })
        })
        .collect()
}

pub fn write_compare_csv<W: Write>(rows: &[Comparison], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["target", "case", "fa_sim", "fa_paper", "dev"])?;
    for c in rows {
        w.write_record([
            c.target.to_string(),
            c.case.label().to_string(),
            format!("{:.6}", c.fa_sim),
            format!("{:.2}", c.fa_paper),
            format!("{:.6}", c.dev()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Line plot with markers. `None` when there is nothing to draw.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Option<String> {
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    if all.is_empty() {
        return None;
    }
    let (w, h, ml, mr, mt, mb) = (640.0, 420.0, 70.0, 130.0, 40.0, 55.0);
    let span = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
        if hi - lo < 1e-9 {
            (lo - 1.0, hi + 1.0)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = span(&mut all.iter().map(|p| p.0));
    let (y0, y1) = span(&mut all.iter().map(|p| p.1).chain(std::iter::once(0.0)));
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - ml - mr,
        h - mt - mb
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, px(fx), h - mb + 16.0, tick(fx));
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, ml - 6.0, py(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        ml + (w - ml - mr) / 2.0,
        h - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        mt + (h - mt - mb) / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(s, r#"<g class="series" data-label="{}">"#, escape(&ser.label));
        if ser.points.len() > 1 {
            let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        if ser.points.len() <= 50 {
            for &(x, y) in &ser.points {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
            }
        }
        let ly = mt + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            w - mr + 10.0,
            w - mr + 30.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, w - mr + 36.0, ly + 4.0, escape(&ser.label));
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn tick(v: f64) -> String {
    let t = format!("{v:.2}");
    if t == "-0.00" {
        "0.00".into()
    } else {
        t
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn trace_plot(trace: &ForceTrace, title: &str) -> Option<String> {
    let points = trace.samples.iter().map(|s| (s.disp, s.force)).collect();
    svg_plot(title, "gauge displacement (mm)", "shear force (N)", &[Series { label: "force".into(), points }])
}

/// Average force against set pressure, one series per actuation case.
pub fn sweep_plot(sweep: &SweepTable) -> Option<String> {
    let series: Vec<Series> = CaseKind::ALL
        .iter()
        .map(|&k| Series {
            label: k.label().to_string(),
            points: sweep.rows.iter().filter(|r| r.case == k).map(|r| (r.pressure_kpa, r.fa_n)).collect(),
        })
        .collect();
    svg_plot(&format!("average shear force vs pressure ({})", sweep.target), "set pressure (kPa)", "Fa (N)", &series)
}

/// Everything a report can contain. Missing parts give header-only CSVs.
#[derive(Debug, Clone, Default)]
pub struct ReportInputs {
    pub runs: Vec<CaseRun>,
    pub sweep: Option<SweepTable>,
    pub calibration: Option<CalibrationResult>,
}

/// Table runs and the configured sweep, optionally after calibrating the
/// config against `dataset` with `seed`.
pub fn run_pipeline(cfg: &Config, dataset: &PaperDataset, calibrate_seed: Option<u64>) -> Result<ReportInputs> {
    let calibration = match calibrate_seed {
        Some(seed) => Some(calibrate(cfg, dataset, seed)?),
        None => None,
    };
    let cfg = calibration.as_ref().map_or(cfg, |c| &c.config);
    let runs = run_table(cfg)?;
    let sweep = run_pressure_sweep(cfg, &cfg.sweep.pressures, &[Timing::Live, Timing::Prior], cfg.sweep.target)?;
    Ok(ReportInputs { runs, sweep: Some(sweep), calibration })
}

pub fn summary_text(inputs: &ReportInputs, dataset: &PaperDataset) -> String {
    let mut s = String::new();
    let rows = compare(&inputs.runs, dataset);
    if !rows.is_empty() {
        let _ = writeln!(s, "target   case  Fa sim  Fa meas    dev   Fp sim  Fp meas");
        for c in &rows {
            let _ = writeln!(
                s,
                "{:<8} {:<4} {:>7.3} {:>8.2} {:>+6.3} {:>8.3} {:>8.2}",
                c.target.to_string(),
                c.case.label(),
                c.fa_sim,
                c.fa_paper,
                c.dev(),
                c.fp_sim,
                c.fp_paper
            );
        }
        let rms = (rows.iter().map(|c| (c.fa_sim - c.fa_paper).powi(2) + (c.fp_sim - c.fp_paper).powi(2)).sum::<f64>()
            / (2 * rows.len()) as f64)
            .sqrt();
        let _ = writeln!(s, "RMS over Fa and Fp: {rms:.3} N");
    }
    if let Some(sw) = &inputs.sweep {
        let _ = writeln!(s, "\nsweep on {}:", sw.target);
        for d in sw.differences() {
            let _ = writeln!(s, "  {:>6.1} kPa  {}  {:+.3} N", d.pressure_kpa, d.label, d.value);
        }
    }
    if let Some(c) = &inputs.calibration {
        let _ = writeln!(
            s,
            "\ncalibration: objective {:.4} -> {:.4}, RMS {:.3} N, {} evaluations",
            c.initial_objective, c.objective, c.residual, c.iterations
        );
        for p in &c.params {
            let _ = writeln!(s, "  {:<28} {:>10.5}  [{}, {}]", p.name, p.value, p.lo, p.hi);
        }
    }
    if s.is_empty() {
        s.push_str("no results\n");
    }
    s
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    create(path)?.write_all(text.as_bytes())?;
    Ok(())
}

/// Write all tables, plots and `summary.txt` into `out`. Returns the paths
/// written, in a fixed order.
pub fn emit_report(out: &Path, inputs: &ReportInputs, dataset: &PaperDataset) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", out.display()))))?;
    let mut written = Vec::new();

    let path = out.join("trace.csv");
    match inputs.runs.first() {
        Some(r) => r.trace.write_csv(create(&path)?)?,
        None => write_text(&path, "t_s,disp_mm,force_n,state\n")?,
    }
    written.push(path);
    for r in &inputs.runs {
        let stem = format!("trace_{}_{}", r.target, r.case.kind().label());
        let path = out.join(format!("{stem}.csv"));
        r.trace.write_csv(create(&path)?)?;
        written.push(path);
        let title = format!("{} {} at {:+.0} kPa", r.target, r.case.kind().label(), r.case.set_pressure());
        if let Some(svg) = trace_plot(&r.trace, &title) {
            let path = out.join(format!("{stem}.svg"));
            write_text(&path, &svg)?;
            written.push(path);
        }
    }

    let path = out.join("sweep.csv");
    match &inputs.sweep {
        Some(sw) => sw.write_csv(create(&path)?)?,
        None => write_text(&path, "pressure_kpa,case,fa_n\n")?,
    }
    written.push(path);
    if let Some(svg) = inputs.sweep.as_ref().and_then(sweep_plot) {
        let path = out.join("sweep.svg");
        write_text(&path, &svg)?;
        written.push(path);
    }

    let path = out.join("calib.csv");
    match &inputs.calibration {
        Some(c) => c.write_csv(create(&path)?)?,
        None => write_text(&path, "param,value,lo,hi\n")?,
    }
    written.push(path);

    let path = out.join("compare.csv");
    write_compare_csv(&compare(&inputs.runs, dataset), create(&path)?)?;
    written.push(path);

    let path = out.join("summary.txt");
    write_text(&path, &summary_text(inputs, dataset))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::scenario::{run_pull_test, table_case};
    use crate::model::load_paper_dataset;

    #[test]
    fn empty_inputs_give_header_only_tables_and_no_plots() {
        let dir = tempfile::tempdir().unwrap();
        let ds = load_paper_dataset().unwrap();
        let files = emit_report(dir.path(), &ReportInputs::default(), &ds).unwrap();
        assert!(files.iter().all(|f| f.extension().unwrap() != "svg"));
        let compare = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
        assert_eq!(compare, "target,case,fa_sim,fa_paper,dev\n");
        let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
        assert_eq!(trace, "t_s,disp_mm,force_n,state\n");
    }

    #[test]
    fn deviation_is_sim_minus_measured() {
        let cfg = Config::default();
        let ds = load_paper_dataset().unwrap();
        let run = run_pull_test(&cfg, Target::Plywood, &table_case(CaseKind::N)).unwrap();
        let fa = run.summary.fa;
        let rows = compare(&[run], &ds);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].dev(), fa - 6.1);
    }

    #[test]
    fn sweep_plot_has_five_series() {
        let table = SweepTable {
            target: Target::Ptfe,
            rows: CaseKind::ALL
                .iter()
                .map(|&case| crate::harness::sweep::SweepRow { pressure_kpa: 0.0, case, fa_n: 1.0 })
                .collect(),
        };
        let svg = sweep_plot(&table).unwrap();
        assert_eq!(svg.matches(r#"class="series""#).count(), 5);
        for k in CaseKind::ALL {
            assert!(svg.contains(&format!(r#"data-label="{}""#, k.label())));
        }
    }

    #[test]
    fn empty_series_draws_nothing() {
        assert!(svg_plot("t", "x", "y", &[Series { label: "a".into(), points: vec![] }]).is_none());
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain_file");
        fs::write(&file, "x").unwrap();
        let ds = load_paper_dataset().unwrap();
        assert!(emit_report(&file.join("sub"), &ReportInputs::default(), &ds).is_err());
    }
}
