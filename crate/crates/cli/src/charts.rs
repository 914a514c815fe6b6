//! SVG renderings of the learning curves and the class balance.
//!
//! The markup is assembled by hand so output stays a pure function of the
//! numbers: same points in, same bytes out. Pixel coordinates are rounded
//! to two decimals at format time, which tests recompute exactly.

use std::fmt::Write as _;

use nids_core::eval::{CurvePoint, MetricsReport};
use nids_core::model::ModelKind;
use nids_core::preprocess::SmoteBalance;

pub const CLASS_COUNTS_SVG_FILE: &str = "class_counts.svg";

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
// Plot rectangle inside the canvas; the right margin holds the legend.
const LEFT: f64 = 60.0;
const RIGHT: f64 = 490.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 350.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMetric {
    Accuracy,
    Precision,
    Recall,
    F1,
}

impl CurveMetric {
    pub const ALL: [CurveMetric; 4] = [
        CurveMetric::Accuracy,
        CurveMetric::Precision,
        CurveMetric::Recall,
        CurveMetric::F1,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            CurveMetric::Accuracy => "accuracy",
            CurveMetric::Precision => "precision",
            CurveMetric::Recall => "recall",
            CurveMetric::F1 => "f1",
        }
    }

    fn pick(self, m: &MetricsReport) -> f64 {
        match self {
            CurveMetric::Accuracy => m.accuracy,
            CurveMetric::Precision => m.precision,
            CurveMetric::Recall => m.recall,
            CurveMetric::F1 => m.f1,
        }
    }
}

pub fn curve_svg_file(metric: CurveMetric) -> String {
    format!("curve_{}.svg", metric.slug())
}

fn model_color(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Tree => "#7a4fa3",
        ModelKind::Forest => "#2a7f3f",
        ModelKind::Gbm => "#b5541c",
        ModelKind::LogReg => "#3558a0",
    }
}

/// Horizontal position of `fraction` given the plotted domain.
pub fn curve_x(fraction: f64, first: f64, last: f64) -> f64 {
    if last > first {
        LEFT + (fraction - first) / (last - first) * (RIGHT - LEFT)
    } else {
        (LEFT + RIGHT) / 2.0
    }
}

/// Vertical position of a score; the value axis is always `[0, 1]`.
pub fn curve_y(value: f64) -> f64 {
    BOTTOM - value.clamp(0.0, 1.0) * (BOTTOM - TOP)
}

/// One chart per metric: a polyline and point markers per model, drawn over
/// the training fractions actually present in `points`.
pub fn render_curve_svg(metric: CurveMetric, points: &[CurvePoint]) -> String {
    let mut kinds: Vec<ModelKind> = Vec::new();
    for p in points {
        if !kinds.contains(&p.kind) {
            kinds.push(p.kind);
        }
    }
    let mut fractions: Vec<f64> = Vec::new();
    for p in points {
        if !fractions.contains(&p.fraction) {
            fractions.push(p.fraction);
        }
    }
    let (first, last) = match (fractions.first(), fractions.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 0.0),
    };

    let mut svg = svg_open();
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">{} vs training fraction</text>",
        (LEFT + RIGHT) / 2.0,
        metric.slug()
    );
    axes(&mut svg);

    // Value-axis ticks every 0.25.
    for i in 0..=4 {
        let v = f64::from(i) * 0.25;
        let y = curve_y(v);
        let _ = writeln!(
            svg,
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT:.2}\" y2=\"{y:.2}\" stroke=\"#444\"/>",
            LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\" \
             font-family=\"sans-serif\">{v:.2}</text>",
            LEFT - 9.0,
            y + 4.0
        );
    }
    for &f in &fractions {
        let x = curve_x(f, first, last);
        let _ = writeln!(
            svg,
            "  <line x1=\"{x:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>",
            BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{f}</text>",
            BOTTOM + 18.0
        );
    }

    for (slot, &kind) in kinds.iter().enumerate() {
        let color = model_color(kind);
        let series: Vec<&CurvePoint> = points.iter().filter(|p| p.kind == kind).collect();
        let mut coords = String::new();
        for p in &series {
            if !coords.is_empty() {
                coords.push(' ');
            }
            let _ = write!(
                coords,
                "{:.2},{:.2}",
                curve_x(p.fraction, first, last),
                curve_y(metric.pick(&p.metrics))
            );
        }
        let _ = writeln!(
            svg,
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{coords}\"/>"
        );
        for p in &series {
            let _ = writeln!(
                svg,
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                curve_x(p.fraction, first, last),
                curve_y(metric.pick(&p.metrics))
            );
        }
        legend_entry(&mut svg, slot, color, kind.as_str());
    }

    svg.push_str("</svg>\n");
    svg
}

const BAR_SERIES: [(&str, &str); 4] = [
    ("benign before", "#9ecbe8"),
    ("malicious before", "#e8a89e"),
    ("benign after", "#3558a0"),
    ("malicious after", "#b0301c"),
];
const BAR_WIDTH: f64 = 48.0;
const BAR_GAP: f64 = 8.0;

/// Left edge of bar `series` in dataset group `group`.
pub fn bar_x(group: usize, series: usize) -> f64 {
    let group_width = 4.0 * BAR_WIDTH + 3.0 * BAR_GAP;
    let start = LEFT + 40.0 + group as f64 * (group_width + 60.0);
    start + series as f64 * (BAR_WIDTH + BAR_GAP)
}

/// Bar height in pixels for `count` when the tallest bar holds `max`.
pub fn bar_height(count: usize, max: usize) -> f64 {
    if max == 0 {
        0.0
    } else {
        count as f64 / max as f64 * (BOTTOM - TOP - 20.0)
    }
}

/// Grouped bars: per dataset, class counts before and after oversampling.
pub fn render_class_counts_svg(balance: &[SmoteBalance; 2]) -> String {
    let counts = |b: &SmoteBalance| {
        [
            b.benign_before,
            b.malicious_before,
            b.benign_after,
            b.malicious_after,
        ]
    };
    let max = balance.iter().flat_map(counts).max().unwrap_or(0);

    let mut svg = svg_open();
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">class counts around oversampling</text>",
        (LEFT + RIGHT) / 2.0
    );
    axes(&mut svg);

    for (group, b) in balance.iter().enumerate() {
        for (series, (&count, &(_, color))) in
            counts(b).iter().zip(BAR_SERIES.iter()).enumerate()
        {
            let h = bar_height(count, max);
            let x = bar_x(group, series);
            let _ = writeln!(
                svg,
                "  <rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{BAR_WIDTH:.2}\" height=\"{h:.2}\" \
                 fill=\"{color}\"/>",
                BOTTOM - h
            );
            let _ = writeln!(
                svg,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\" \
                 font-family=\"sans-serif\">{count}</text>",
                x + BAR_WIDTH / 2.0,
                BOTTOM - h - 4.0
            );
        }
        let center = (bar_x(group, 0) + bar_x(group, 3) + BAR_WIDTH) / 2.0;
        let name = match group {
            0 => "unsw",
            _ => "kdd",
        };
        let _ = writeln!(
            svg,
            "  <text x=\"{center:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{name}</text>",
            BOTTOM + 18.0
        );
    }
    for (slot, &(label, color)) in BAR_SERIES.iter().enumerate() {
        legend_entry(&mut svg, slot, color, label);
    }

    svg.push_str("</svg>\n");
    svg
}

fn svg_open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">\n  <rect width=\"{WIDTH:.0}\" \
         height=\"{HEIGHT:.0}\" fill=\"#ffffff\"/>\n"
    )
}

fn axes(svg: &mut String) {
    let _ = writeln!(
        svg,
        "  <line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#444\"/>"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{LEFT:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{RIGHT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#444\"/>"
    );
}

fn legend_entry(svg: &mut String, slot: usize, color: &str, label: &str) {
    let y = TOP + 10.0 + slot as f64 * 20.0;
    let _ = writeln!(
        svg,
        "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>",
        RIGHT + 14.0,
        y - 10.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{y:.2}\" font-size=\"12\" \
         font-family=\"sans-serif\">{label}</text>",
        RIGHT + 32.0
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use nids_core::data::DatasetKind;

    fn point(kind: ModelKind, fraction: f64, accuracy: f64) -> CurvePoint {
        CurvePoint {
            fraction,
            kind,
            train_rows: 100,
            test_rows: 400,
            metrics: MetricsReport {
                accuracy,
                precision: accuracy,
                recall: accuracy,
                f1: accuracy,
                degenerate: false,
            },
        }
    }

    #[test]
    fn polyline_coordinates_match_recomputation() {
        let points = vec![
            point(ModelKind::Forest, 0.02, 0.98),
            point(ModelKind::Gbm, 0.02, 0.95),
            point(ModelKind::Forest, 0.10, 0.99),
            point(ModelKind::Gbm, 0.10, 0.97),
        ];
        let svg = render_curve_svg(CurveMetric::Accuracy, &points);
        let expected = format!(
            "points=\"{:.2},{:.2} {:.2},{:.2}\"",
            curve_x(0.02, 0.02, 0.10),
            curve_y(0.98),
            curve_x(0.10, 0.02, 0.10),
            curve_y(0.99)
        );
        assert!(svg.contains(&expected), "missing {expected} in:\n{svg}");
        // Two models, two polylines, a marker per point.
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains(">forest</text>") && svg.contains(">gbm</text>"));
    }

    #[test]
    fn value_axis_spans_zero_to_one() {
        assert_eq!(curve_y(0.0), BOTTOM);
        assert_eq!(curve_y(1.0), TOP);
        assert!(curve_y(0.25) > curve_y(0.75));
    }

    #[test]
    fn single_fraction_lands_mid_plot() {
        let x = curve_x(0.10, 0.10, 0.10);
        assert_eq!(x, (LEFT + RIGHT) / 2.0);
    }

    #[test]
    fn bar_heights_scale_with_counts() {
        let balance = [
            SmoteBalance {
                kind: DatasetKind::Unsw,
                benign_before: 400,
                malicious_before: 100,
                benign_after: 400,
                malicious_after: 400,
            },
            SmoteBalance {
                kind: DatasetKind::Kdd,
                benign_before: 50,
                malicious_before: 200,
                benign_after: 200,
                malicious_after: 200,
            },
        ];
        let svg = render_class_counts_svg(&balance);
        let full = bar_height(400, 400);
        let quarter = bar_height(100, 400);
        assert_eq!(quarter * 4.0, full);
        let expected = format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{BAR_WIDTH:.2}\" height=\"{quarter:.2}\"",
            bar_x(0, 1),
            BOTTOM - quarter
        );
        assert!(svg.contains(&expected), "missing {expected} in:\n{svg}");
        assert_eq!(svg.matches("<rect x=").count(), 8 + 4); // bars plus legend swatches
        assert!(svg.contains(">unsw</text>") && svg.contains(">kdd</text>"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let points = vec![
            point(ModelKind::Forest, 0.02, 0.98),
            point(ModelKind::Forest, 0.04, 0.985),
        ];
        let a = render_curve_svg(CurveMetric::F1, &points);
        let b = render_curve_svg(CurveMetric::F1, &points);
        assert_eq!(a, b);
        assert!(a.contains("f1 vs training fraction"));
    }
}
