//! Self-contained SVG plots: tracked sweep quantities as polylines,
//! with the unperturbed diagonal curves as dashed reference overlays
//! where they are meaningful.
//!
//! Structural conventions (stable, used by tests and tooling):
//! series polylines carry `class="series"`, dashed reference curves
//! `class="overlay"`, isolated data points `class="pt"`, and
//! cap-sentinel markers pinned to the frame top `class="cap"`.

use crate::eigen::NORMALIZATION_CAP;
use crate::output::OutputError;
use crate::sweep::{Linear, SweepRecord, SweepScenario};
use std::fmt::Write as _;

/// Plottable per-record quantity groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Energies,
    Widths,
    Rigidity,
    OneMinusRigidity,
    Mixing,
    Alignment,
    SourceTerm,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Energies,
        Quantity::Widths,
        Quantity::Rigidity,
        Quantity::OneMinusRigidity,
        Quantity::Mixing,
        Quantity::Alignment,
        Quantity::SourceTerm,
    ];

    /// Stable identifier, used in file names and on the command line.
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Energies => "energies",
            Quantity::Widths => "widths",
            Quantity::Rigidity => "rigidity",
            Quantity::OneMinusRigidity => "one_minus_rigidity",
            Quantity::Mixing => "mixing",
            Quantity::Alignment => "alignment",
            Quantity::SourceTerm => "source_term",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Quantity::ALL.iter().copied().find(|q| q.as_str() == s)
    }

    fn title(&self) -> &'static str {
        match self {
            Quantity::Energies => "Energies",
            Quantity::Widths => "Half-widths",
            Quantity::Rigidity => "Phase rigidity",
            Quantity::OneMinusRigidity => "Rigidity deficit",
            Quantity::Mixing => "Mixing magnitudes",
            Quantity::Alignment => "Coalescence alignment",
            Quantity::SourceTerm => "Source-term magnitude",
        }
    }

    fn axis_label(&self) -> &'static str {
        match self {
            Quantity::Energies => "E",
            Quantity::Widths => "Gamma/2",
            Quantity::Rigidity => "r",
            Quantity::OneMinusRigidity => "log10(1 - r)",
            Quantity::Mixing => "|b_ij|",
            Quantity::Alignment => "alignment",
            Quantity::SourceTerm => "|N|",
        }
    }
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const OVERLAY_COLOR: &str = "#888888";
const LOG_FLOOR: f64 = 1e-16;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;
const PLOT_W: f64 = 710.0;
const PLOT_H: f64 = 390.0;

struct SeriesPoint {
    a: f64,
    /// `None` marks a cap sentinel (or non-finite value): excluded
    /// from the y-range and drawn as a marker at the frame top.
    value: Option<f64>,
}

struct Series {
    label: &'static str,
    color: &'static str,
    points: Vec<SeriesPoint>,
}

fn plottable(v: f64) -> Option<f64> {
    if v.is_finite() && v < NORMALIZATION_CAP {
        Some(v)
    } else {
        None
    }
}

fn series_for(quantity: Quantity, records: &[SweepRecord]) -> Vec<Series> {
    let build = |label: &'static str, color: &'static str, f: &dyn Fn(&SweepRecord) -> Option<f64>| Series {
        label,
        color,
        points: records
            .iter()
            .map(|r| SeriesPoint { a: r.a, value: f(r) })
            .collect(),
    };
    let log_deficit = |v: f64| (v.max(LOG_FLOOR)).log10();
    match quantity {
        Quantity::Energies => vec![
            build("E1", PALETTE[0], &|r| plottable(r.e1)),
            build("E2", PALETTE[1], &|r| plottable(r.e2)),
        ],
        Quantity::Widths => vec![
            build("Gamma1/2", PALETTE[0], &|r| plottable(r.g1_half)),
            build("Gamma2/2", PALETTE[1], &|r| plottable(r.g2_half)),
        ],
        Quantity::Rigidity => vec![
            build("r1", PALETTE[0], &|r| plottable(r.r1)),
            build("r2", PALETTE[1], &|r| plottable(r.r2)),
        ],
        Quantity::OneMinusRigidity => vec![
            build("1-r1", PALETTE[0], &|r| plottable(r.one_minus_r1).map(log_deficit)),
            build("1-r2", PALETTE[1], &|r| plottable(r.one_minus_r2).map(log_deficit)),
        ],
        Quantity::Mixing => vec![
            build("|b11|", PALETTE[0], &|r| plottable(r.abs_b11)),
            build("|b12|", PALETTE[1], &|r| plottable(r.abs_b12)),
            build("|b21|", PALETTE[2], &|r| plottable(r.abs_b21)),
            build("|b22|", PALETTE[3], &|r| plottable(r.abs_b22)),
        ],
        Quantity::Alignment => vec![build("alignment", PALETTE[0], &|r| {
            plottable(r.ep_alignment)
        })],
        Quantity::SourceTerm => vec![
            build("|N1|", PALETTE[0], &|r| plottable(r.nl_mag1)),
            build("|N2|", PALETTE[1], &|r| plottable(r.nl_mag2)),
        ],
    }
}

/// Dashed reference curves: the unperturbed diagonal energies or
/// half-widths. Identical forms are deduplicated into one curve (a
/// shared width line is drawn once).
fn overlays_for(quantity: Quantity, scenario: &SweepScenario) -> Vec<(String, Linear)> {
    let halved = |l: Linear| Linear::new(0.5 * l.c0, 0.5 * l.c1);
    match quantity {
        Quantity::Energies => {
            if scenario.e1 == scenario.e2 {
                vec![("e1(a) = e2(a)".to_string(), scenario.e1)]
            } else {
                vec![
                    ("e1(a)".to_string(), scenario.e1),
                    ("e2(a)".to_string(), scenario.e2),
                ]
            }
        }
        Quantity::Widths => {
            if scenario.gamma1 == scenario.gamma2 {
                vec![("gamma(a)/2".to_string(), halved(scenario.gamma1))]
            } else {
                vec![
                    ("gamma1(a)/2".to_string(), halved(scenario.gamma1)),
                    ("gamma2(a)/2".to_string(), halved(scenario.gamma2)),
                ]
            }
        }
        _ => Vec::new(),
    }
}

fn nice_step(span: f64) -> (f64, i32) {
    let raw = span / 5.0;
    let e = raw.log10().floor() as i32;
    let base = 10f64.powi(e);
    let r = raw / base;
    if r < 1.5 {
        (base, e)
    } else if r < 3.5 {
        (2.0 * base, e)
    } else if r < 7.5 {
        (5.0 * base, e)
    } else {
        (10.0 * base, e + 1)
    }
}

fn tick_label(v: f64, e: i32) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !(-7..7).contains(&e) {
        return format!("{v:e}");
    }
    let decimals = (-e).max(0) as usize;
    format!("{v:.decimals$}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Widens a degenerate range and then pads it.
fn padded_range(min: f64, max: f64) -> (f64, f64) {
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if max > min {
        let pad = 0.05 * (max - min);
        (min - pad, max + pad)
    } else {
        let pad = (min.abs() * 1e-3).max(0.5);
        (min - pad, max + pad)
    }
}

/// Renders one quantity of a sweep as a standalone SVG document.
pub fn to_svg(
    scenario: &SweepScenario,
    records: &[SweepRecord],
    quantity: Quantity,
) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::EmptyInput);
    }
    let series = series_for(quantity, records);
    let overlays = if records.len() >= 2 {
        overlays_for(quantity, scenario)
    } else {
        Vec::new()
    };

    let xmin_raw = records.iter().map(|r| r.a).fold(f64::INFINITY, f64::min);
    let xmax_raw = records.iter().map(|r| r.a).fold(f64::NEG_INFINITY, f64::max);
    let (xmin, xmax) = if xmax_raw > xmin_raw {
        (xmin_raw, xmax_raw)
    } else {
        padded_range(xmin_raw, xmax_raw)
    };

    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in &series {
        for p in &s.points {
            if let Some(v) = p.value {
                ymin = ymin.min(v);
                ymax = ymax.max(v);
            }
        }
    }
    for (_, form) in &overlays {
        for r in records {
            let v = form.eval(r.a);
            if v.is_finite() {
                ymin = ymin.min(v);
                ymax = ymax.max(v);
            }
        }
    }
    let (ymin, ymax) = padded_range(ymin, ymax);

    let sx = move |a: f64| LEFT + (a - xmin) / (xmax - xmin) * PLOT_W;
    let sy = move |v: f64| TOP + (ymax - v) / (ymax - ymin) * PLOT_H;

    let mut out = String::with_capacity(16 * 1024);
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"Helvetica, Arial, sans-serif\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n"
    );
    let _ = write!(
        out,
        "<text class=\"title\" x=\"{:.3}\" y=\"24\" font-size=\"16\" fill=\"#111\" \
         text-anchor=\"middle\">{}: {}</text>\n",
        LEFT + PLOT_W / 2.0,
        esc(&scenario.name),
        quantity.title()
    );

    // Gridlines and ticks.
    let (xstep, xe) = nice_step(xmax - xmin);
    let mut k = (xmin / xstep).ceil() as i64;
    while (k as f64) * xstep <= xmax + 1e-9 * xstep {
        let v = (k as f64) * xstep;
        let x = sx(v);
        let _ = write!(
            out,
            "<line x1=\"{x:.3}\" y1=\"{TOP}\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#e0e0e0\"/>\n\
             <text x=\"{x:.3}\" y=\"{:.3}\" font-size=\"11\" fill=\"#333\" \
             text-anchor=\"middle\">{}</text>\n",
            TOP + PLOT_H,
            TOP + PLOT_H + 16.0,
            tick_label(v, xe)
        );
        k += 1;
    }
    let (ystep, ye) = nice_step(ymax - ymin);
    let mut k = (ymin / ystep).ceil() as i64;
    while (k as f64) * ystep <= ymax + 1e-9 * ystep {
        let v = (k as f64) * ystep;
        let y = sy(v);
        let _ = write!(
            out,
            "<line x1=\"{LEFT}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\" stroke=\"#e0e0e0\"/>\n\
             <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" fill=\"#333\" \
             text-anchor=\"end\">{}</text>\n",
            LEFT + PLOT_W,
            LEFT - 6.0,
            y + 4.0,
            tick_label(v, ye)
        );
        k += 1;
    }

    // Frame and axis labels.
    let _ = write!(
        out,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" \
         fill=\"none\" stroke=\"#333333\"/>\n\
         <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"13\" fill=\"#111\" \
         text-anchor=\"middle\">a</text>\n\
         <text x=\"8\" y=\"{:.3}\" font-size=\"13\" fill=\"#111\">{}</text>\n",
        LEFT + PLOT_W / 2.0,
        TOP + PLOT_H + 38.0,
        TOP - 12.0,
        esc(quantity.axis_label())
    );

    // Dashed reference overlays.
    for (_, form) in &overlays {
        let mut pts = String::new();
        for r in records {
            let v = form.eval(r.a);
            if v.is_finite() {
                let _ = write!(pts, "{:.3},{:.3} ", sx(r.a), sy(v));
            }
        }
        let _ = write!(
            out,
            "<polyline class=\"overlay\" points=\"{}\" fill=\"none\" \
             stroke=\"{OVERLAY_COLOR}\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n",
            pts.trim_end()
        );
    }

    // Data series: contiguous plottable runs become polylines,
    // isolated points become dots, capped values become top markers.
    for s in &series {
        let mut run: Vec<(f64, f64)> = Vec::new();
        let flush = |run: &mut Vec<(f64, f64)>, out: &mut String| {
            if run.len() >= 2 {
                let mut pts = String::new();
                for (x, y) in run.iter() {
                    let _ = write!(pts, "{x:.3},{y:.3} ");
                }
                let _ = write!(
                    out,
                    "<polyline class=\"series\" points=\"{}\" fill=\"none\" \
                     stroke=\"{}\" stroke-width=\"1.6\"/>\n",
                    pts.trim_end(),
                    s.color
                );
            } else if run.len() == 1 {
                let _ = write!(
                    out,
                    "<circle class=\"pt\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.5\" fill=\"{}\"/>\n",
                    run[0].0, run[0].1, s.color
                );
            }
            run.clear();
        };
        for p in &s.points {
            match p.value {
                Some(v) => run.push((sx(p.a), sy(v))),
                None => {
                    flush(&mut run, &mut out);
                    let _ = write!(
                        out,
                        "<circle class=\"cap\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" \
                         fill=\"{}\" stroke=\"#333333\"/>\n",
                        sx(p.a),
                        TOP + 5.0,
                        s.color
                    );
                }
            }
        }
        flush(&mut run, &mut out);
    }

    // Legend.
    let mut ly = TOP + 14.0;
    let lx = LEFT + 12.0;
    for s in &series {
        let _ = write!(
            out,
            "<line x1=\"{lx}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{}\" \
             stroke-width=\"2\"/>\n<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" \
             fill=\"#111\">{}</text>\n",
            ly - 4.0,
            lx + 22.0,
            ly - 4.0,
            s.color,
            lx + 28.0,
            ly,
            esc(s.label)
        );
        ly += 16.0;
    }
    for (label, _) in &overlays {
        let _ = write!(
            out,
            "<line x1=\"{lx}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{OVERLAY_COLOR}\" \
             stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n<text x=\"{:.3}\" y=\"{:.3}\" \
             font-size=\"12\" fill=\"#111\">{}</text>\n",
            ly - 4.0,
            lx + 22.0,
            ly - 4.0,
            lx + 28.0,
            ly,
            esc(label)
        );
        ly += 16.0;
    }

    out.push_str("</svg>\n");
    Ok(out)
}
