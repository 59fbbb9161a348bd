//! CSV and SVG emission. All float formatting is fixed-width so reruns of
//! the same configuration produce byte-identical files.

use crate::point::PointOutcome;

pub const CSV_HEADER: &str = "bond_length,e_hf,e_fci,e_qccsd,e_uccsd,err_qccsd,err_uccsd,\
overlap_hf,params,gates,iters_q,iters_u,converged_q,converged_u,status";

fn fmt_energy(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

fn fmt_count(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_bool(v: Option<bool>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv_row(outcome: &PointOutcome) -> String {
    let err_q = match (outcome.e_qccsd, outcome.e_fci) {
        (Some(e), Some(f)) => Some((e - f).abs()),
        _ => None,
    };
    let err_u = match (outcome.e_uccsd, outcome.e_fci) {
        (Some(e), Some(f)) => Some((e - f).abs()),
        _ => None,
    };
    format!(
        "{:.6},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        outcome.bond_length,
        fmt_energy(outcome.e_hf),
        fmt_energy(outcome.e_fci),
        fmt_energy(outcome.e_qccsd),
        fmt_energy(outcome.e_uccsd),
        fmt_energy(err_q),
        fmt_energy(err_u),
        outcome
            .overlap_hf
            .map(|v| format!("{v:.6}"))
            .unwrap_or_default(),
        fmt_count(outcome.params),
        fmt_count(outcome.gates),
        fmt_count(outcome.iters_q),
        fmt_count(outcome.iters_u),
        fmt_bool(outcome.converged_q),
        fmt_bool(outcome.converged_u),
        outcome.status_label(),
    )
}

pub fn csv_report(outcomes: &[PointOutcome]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for o in outcomes {
        out.push_str(&csv_row(o));
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;
const ERROR_FLOOR: f64 = 1e-12;

/// Semilog error-vs-bond-length plot of a scan, as a standalone SVG
/// document. Points without energies are skipped; errors clamp to a
/// 1e-12 floor so exact matches still plot.
pub fn error_plot_svg(outcomes: &[PointOutcome]) -> String {
    let series: Vec<(&str, &str, Vec<(f64, f64)>)> = vec![
        (
            "QCCSD",
            "#1f77b4",
            outcomes
                .iter()
                .filter_map(|o| match (o.e_qccsd, o.e_fci) {
                    (Some(e), Some(f)) => {
                        Some((o.bond_length, (e - f).abs().max(ERROR_FLOOR)))
                    }
                    _ => None,
                })
                .collect(),
        ),
        (
            "UCCSD",
            "#d62728",
            outcomes
                .iter()
                .filter_map(|o| match (o.e_uccsd, o.e_fci) {
                    (Some(e), Some(f)) => {
                        Some((o.bond_length, (e - f).abs().max(ERROR_FLOOR)))
                    }
                    _ => None,
                })
                .collect(),
        ),
    ];

    let points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, _, pts)| pts.iter().copied())
        .collect();
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    if points.is_empty() {
        svg.push_str(
            "<text x=\"360\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\">\
             no data</text>\n</svg>\n",
        );
        return svg;
    }

    let x_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let x_span = if (x_max - x_min).abs() < 1e-12 {
        1.0
    } else {
        x_max - x_min
    };
    let y_log_min = points
        .iter()
        .map(|p| p.1.log10())
        .fold(f64::INFINITY, f64::min)
        .floor();
    let y_log_max = points
        .iter()
        .map(|p| p.1.log10())
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil()
        .max(y_log_min + 1.0);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |bond: f64| MARGIN_LEFT + (bond - x_min) / x_span * plot_w;
    let to_y =
        |err: f64| MARGIN_TOP + (y_log_max - err.log10()) / (y_log_max - y_log_min) * plot_h;

    // frame
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>\n"
    ));

    // decade gridlines and labels
    let mut decade = y_log_min as i64;
    while decade <= y_log_max as i64 {
        let y = to_y(10f64.powi(decade as i32));
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#cccccc\" stroke-dasharray=\"3,3\"/>\n",
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\" \
             font-family=\"sans-serif\">1e{decade}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        ));
        decade += 1;
    }

    // x ticks at each data point's bond length (deduplicated)
    let mut ticks: Vec<f64> = points.iter().map(|p| p.0).collect();
    ticks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ticks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    for t in &ticks {
        let x = to_x(*t);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\" \
             font-family=\"sans-serif\">{t:.2}</text>\n",
            MARGIN_TOP + plot_h + 20.0
        ));
    }

    // axis titles
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" \
         font-family=\"sans-serif\">bond length (Angstrom)</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" \
         font-family=\"sans-serif\" transform=\"rotate(-90 20 {:.2})\">\
         |E - E_FCI| (Hartree)</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // series
    let mut legend_y = MARGIN_TOP + 10.0;
    for (name, color, pts) in &series {
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts
            .iter()
            .map(|(b, e)| format!("{:.2},{:.2}", to_x(*b), to_y(*e)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        for (b, e) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                to_x(*b),
                to_y(*e)
            ));
        }
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"4\" fill=\"{color}\"/>\n",
            MARGIN_LEFT + plot_w - 110.0,
            legend_y - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{legend_y:.2}\" font-size=\"12\" \
             font-family=\"sans-serif\">{name}</text>\n",
            MARGIN_LEFT + plot_w - 90.0
        ));
        legend_y += 18.0;
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::PointStatus;

    fn outcome(bond: f64, e_q: Option<f64>, e_u: Option<f64>) -> PointOutcome {
        PointOutcome {
            bond_length: bond,
            e_hf: Some(-1.0),
            e_fci: Some(-1.1),
            e_qccsd: e_q,
            e_uccsd: e_u,
            overlap_hf: Some(0.99),
            params: Some(3),
            gates: Some(3),
            iters_q: e_q.map(|_| 7),
            iters_u: e_u.map(|_| 9),
            converged_q: e_q.map(|_| true),
            converged_u: e_u.map(|_| true),
            status: Some(PointStatus::Ok),
            detail: None,
            qccsd_result: None,
            uccsd_result: None,
        }
    }

    #[test]
    fn csv_row_schema() {
        let row = csv_row(&outcome(0.75, Some(-1.0999), Some(-1.0998)));
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), CSV_HEADER.split(',').count());
        assert_eq!(fields[0], "0.750000");
        assert_eq!(fields[14], "ok");
        // error columns are |E - E_FCI|
        let err_q: f64 = fields[5].parse().unwrap();
        assert!((err_q - 1e-4).abs() < 1e-15);

        // missing ansatz leaves its columns empty
        let row = csv_row(&outcome(0.75, Some(-1.0999), None));
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[4], "");
        assert_eq!(fields[6], "");
        assert_eq!(fields[13], "");
    }

    #[test]
    fn csv_is_deterministic() {
        let rows = vec![outcome(0.5, Some(-1.09), Some(-1.08)), outcome(0.75, None, None)];
        assert_eq!(csv_report(&rows), csv_report(&rows));
    }

    #[test]
    fn svg_renders_both_series() {
        let rows = vec![
            outcome(0.5, Some(-1.0999), Some(-1.0998)),
            outcome(1.0, Some(-1.0995), Some(-1.0997)),
        ];
        let svg = error_plot_svg(&rows);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("QCCSD"));
        assert!(svg.contains("UCCSD"));
        assert!(svg.contains("polyline"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // deterministic
        assert_eq!(svg, error_plot_svg(&rows));
    }

    #[test]
    fn svg_handles_empty_scan() {
        let svg = error_plot_svg(&[]);
        assert!(svg.contains("no data"));
    }
}
