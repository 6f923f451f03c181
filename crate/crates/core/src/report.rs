//! Output emission: estimate JSON/CSV, run manifests, and the two SVG
//! plot emitters (Gershgorin discs and spectrum/shift diagrams).
//!
//! The estimate documents contain only run-independent data (values,
//! provenance, config echo), so a fixed seed reproduces them byte for
//! byte regardless of worker count. Wall-clock timings go into the
//! manifest instead.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dense_eig::SpectrumKind;
use crate::matrix::GershgorinDisc;
use crate::pipeline::{SampleConfig, SampleDetail, SpectrumEstimate};

/// Record of one CLI run: what was asked, on what input, by which version,
/// and how long each phase took.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub matrix_source: String,
    pub config: SampleConfig,
    pub threads: Option<usize>,
    pub version: String,
    /// Phase name -> seconds. The only run-dependent part of any output.
    pub timings: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command: &str, matrix_source: &str, config: SampleConfig) -> Self {
        RunManifest {
            command: command.to_string(),
            matrix_source: matrix_source.to_string(),
            config,
            threads: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timings: BTreeMap::new(),
        }
    }

    pub fn record_timing(&mut self, phase: &str, seconds: f64) {
        self.timings.insert(phase.to_string(), seconds);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

#[derive(Serialize)]
struct EstimateDocument<'a> {
    kind: SpectrumKind,
    values: &'a [f64],
    rejected: usize,
    provenance: &'a [Vec<crate::pipeline::Provenance>],
    config: &'a SampleConfig,
}

/// Estimate as a pretty JSON document (values, provenance, config echo).
pub fn estimate_to_json(estimate: &SpectrumEstimate, config: &SampleConfig) -> String {
    let doc = EstimateDocument {
        kind: estimate.kind,
        values: &estimate.values,
        rejected: estimate.rejected,
        provenance: &estimate.provenance,
        config,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("estimate serializes");
    s.push('\n');
    s
}

/// Estimate as CSV: header plus one line per accepted value, carrying the
/// representative (smallest-residual) provenance record.
pub fn estimate_to_csv(estimate: &SpectrumEstimate) -> String {
    let mut out = String::from("value,residual,iterations,sample,shift\n");
    for (value, best) in estimate.values.iter().zip(estimate.best_provenance()) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            value, best.residual, best.iterations, best.sample, best.shift
        ));
    }
    out
}

/// Gershgorin disc list as CSV (center, radius per row).
pub fn discs_to_csv(discs: &[GershgorinDisc]) -> String {
    let mut out = String::from("center,radius\n");
    for d in discs {
        out.push_str(&format!("{},{}\n", d.center, d.radius));
    }
    out
}

fn fmt(x: f64) -> String {
    format!("{x:.4}")
}

/// SVG of Gershgorin circles in the complex plane, optionally with oracle
/// eigenvalues overlaid on the real axis.
pub fn gershgorin_svg(discs: &[GershgorinDisc], oracle: Option<&[f64]>) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut max_r = 0.0f64;
    for d in discs {
        lo = lo.min(d.center - d.radius);
        hi = hi.max(d.center + d.radius);
        max_r = max_r.max(d.radius);
    }
    if let Some(values) = oracle {
        for &v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = -1.0;
        hi = 1.0;
    }
    let span = (hi - lo).max(1e-30);
    let width = 900.0;
    let margin = 40.0;
    let scale = (width - 2.0 * margin) / span;
    let height = 2.0 * margin + (2.0 * max_r * scale).max(120.0);
    let cy = height / 2.0;
    let tx = |x: f64| margin + (x - lo) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width), fmt(height), fmt(width), fmt(height)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888\" stroke-width=\"1\"/>\n",
        fmt(margin / 2.0),
        fmt(cy),
        fmt(width - margin / 2.0),
        fmt(cy)
    ));
    for d in discs {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\" opacity=\"0.6\"/>\n",
            fmt(tx(d.center)),
            fmt(cy),
            fmt((d.radius * scale).max(0.5))
        ));
    }
    if let Some(values) = oracle {
        for &v in values {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#d62728\"/>\n",
                fmt(tx(v)),
                fmt(cy)
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// SVG spectrum diagram: fine-grid oracle spectrum on the bottom row, each
/// sample's coarse spectrum on a row above, with an arrow from every shift
/// to the fine value its refinement converged to.
pub fn spectrum_svg(fine: &[f64], details: &[SampleDetail]) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in fine {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    for d in details {
        for &v in &d.coarse_values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    let span = (hi - lo).max(1e-30);
    let width = 1000.0;
    let margin = 50.0;
    let row_height = 36.0;
    let rows = details.len() + 1;
    let height = 2.0 * margin + row_height * rows as f64;
    let scale = (width - 2.0 * margin) / span;
    let tx = |x: f64| margin + (x - lo) * scale;
    let fine_y = height - margin;
    let sample_y = |sample: usize| fine_y - row_height * (sample + 1) as f64;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width), fmt(height), fmt(width), fmt(height)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#333\">fine</text>\n",
        fmt(4.0),
        fmt(fine_y + 4.0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        fmt(margin),
        fmt(fine_y),
        fmt(width - margin),
        fmt(fine_y)
    ));
    for &v in fine {
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d62728\" stroke-width=\"1\"/>\n",
            fmt(tx(v)),
            fmt(fine_y - 6.0),
            fmt(tx(v)),
            fmt(fine_y + 6.0)
        ));
    }
    for detail in details {
        let y = sample_y(detail.sample);
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#333\">s{}</text>\n",
            fmt(4.0),
            fmt(y + 4.0),
            detail.sample
        ));
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n",
            fmt(margin),
            fmt(y),
            fmt(width - margin),
            fmt(y)
        ));
        for &v in &detail.coarse_values {
            svg.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n",
                fmt(tx(v)),
                fmt(y - 5.0),
                fmt(tx(v)),
                fmt(y + 5.0)
            ));
        }
        for r in &detail.refinements {
            if r.converged {
                svg.push_str(&format!(
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#2ca02c\" stroke-width=\"0.7\" opacity=\"0.8\"/>\n",
                    fmt(tx(r.shift)),
                    fmt(y + 5.0),
                    fmt(tx(r.value)),
                    fmt(fine_y - 6.0)
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Per-trial interlacing slack table as CSV.
pub fn interlace_table_csv(reports: &[(usize, crate::pipeline::InterlaceReport)]) -> String {
    let mut out = String::from("trial,index,coarse_value,lower_slack,upper_slack,vacuous\n");
    for (trial, report) in reports {
        for e in &report.entries {
            let (lower, vacuous) = match e.lower_slack {
                Some(s) => (s.to_string(), "false"),
                None => (String::new(), "true"),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                trial, e.index, e.coarse_value, lower, e.upper_slack, vacuous
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Provenance;

    fn sample_estimate() -> SpectrumEstimate {
        SpectrumEstimate {
            values: vec![0.5, 1.5],
            provenance: vec![
                vec![Provenance {
                    sample: 0,
                    shift: 0.6,
                    residual: 1e-12,
                    iterations: 4,
                }],
                vec![
                    Provenance {
                        sample: 0,
                        shift: 1.4,
                        residual: 1e-11,
                        iterations: 5,
                    },
                    Provenance {
                        sample: 1,
                        shift: 1.45,
                        residual: 1e-13,
                        iterations: 3,
                    },
                ],
            ],
            rejected: 1,
            kind: SpectrumKind::Eigen,
        }
    }

    #[test]
    fn csv_uses_smallest_residual_record() {
        let csv = estimate_to_csv(&sample_estimate());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "value,residual,iterations,sample,shift");
        assert_eq!(lines.len(), 3);
        // second value's representative is the sample-1 record
        assert!(lines[2].contains(",1,1.45"), "{}", lines[2]);
    }

    #[test]
    fn json_and_csv_values_agree() {
        let est = sample_estimate();
        let cfg = SampleConfig::new(2, 2, 2, 42);
        let json = estimate_to_json(&est, &cfg);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let json_values: Vec<f64> = parsed["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        let csv_values: Vec<f64> = estimate_to_csv(&est)
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(json_values, csv_values);
    }

    #[test]
    fn manifest_roundtrip() {
        let mut m = RunManifest::new("estimate-eig", "gen:lap1d:4", SampleConfig::new(1, 2, 2, 7));
        m.record_timing("estimate", 0.25);
        let json = m.to_json();
        let back: RunManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back.command, "estimate-eig");
        assert_eq!(back.config.seed, 7);
        assert_eq!(back.timings["estimate"], 0.25);
    }

    #[test]
    fn svg_emitters_produce_wellformed_documents() {
        let discs = vec![
            GershgorinDisc {
                center: 2.0,
                radius: 1.0,
            },
            GershgorinDisc {
                center: -1.0,
                radius: 0.5,
            },
        ];
        let svg = gershgorin_svg(&discs, Some(&[1.0, 2.5]));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 4);

        let detail = SampleDetail {
            sample: 0,
            coarse_values: vec![0.5, 1.5],
            refinements: vec![crate::pipeline::RefineRecord {
                shift: 0.5,
                value: 0.38,
                residual: 1e-12,
                iterations: 4,
                converged: true,
            }],
        };
        let svg = spectrum_svg(&[0.38, 1.38, 2.61, 3.61], &[detail]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("s0"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
