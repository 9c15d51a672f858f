//! CSV, JSON and SVG emission for experiment and exact runs.

use std::fmt::Write as _;

use frustration::models::{ExactPoint, ExperimentRecord, GnpBounds};
use serde_json::{json, Value};

pub const CSV_COLUMNS: [&str; 9] =
    ["model", "n", "p", "samples", "p_scf_before", "p_scf_after", "delta_p_scf", "delta_xi_mean", "seed"];

#[derive(Clone, Debug)]
pub struct Row {
    pub record: ExperimentRecord,
    pub exact: Option<ExactPoint>,
    pub bounds: Option<GnpBounds>,
}

fn version_line() -> String {
    format!("# frustration {}\n", env!("CARGO_PKG_VERSION"))
}

fn commented(manifest: &str) -> String {
    format!("{}{manifest}", version_line())
}

pub fn experiment_csv(manifest: &str, rows: &[Row]) -> String {
    let mut s = commented(manifest);
    let exact = rows.iter().any(|r| r.exact.is_some());
    let bounds = rows.iter().any(|r| r.bounds.is_some());
    s.push_str(&CSV_COLUMNS.join(","));
    s.push_str(",budget_exceeded");
    if exact {
        s.push_str(",exact_p_scf_before,exact_p_scf_after,exact_delta_p_scf,exact_delta_xi_mean");
    }
    if bounds {
        s.push_str(",lower_bound,upper_bound");
    }
    s.push('\n');
    for r in rows {
        let e = &r.record;
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            e.model,
            e.n,
            e.p,
            e.samples,
            e.p_scf_before,
            e.p_scf_after,
            e.delta_p_scf,
            e.delta_xi_mean,
            e.seed,
            e.budget_exceeded
        );
        if exact {
            match &r.exact {
                Some(x) => {
                    let _ = write!(s, ",{},{},{},{}", x.p_scf_before, x.p_scf_after, x.delta_p_scf, x.delta_xi_mean);
                }
                None => s.push_str(",,,,"),
            }
        }
        if bounds {
            match &r.bounds {
                Some(b) => {
                    let _ = write!(s, ",{},{}", b.lower, b.upper);
                }
                None => s.push_str(",,"),
            }
        }
        s.push('\n');
    }
    s
}

fn manifest_json(manifest: &str) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    for line in manifest.lines() {
        if let Some((k, v)) = line.trim_start_matches("#!").trim().split_once('=') {
            map.insert(k.to_string(), json!(v));
        }
    }
    Value::Object(map)
}

fn exact_json(x: &ExactPoint) -> Value {
    json!({
        "p": x.p,
        "p_scf_before": x.p_scf_before,
        "p_scf_after": x.p_scf_after,
        "delta_p_scf": x.delta_p_scf,
        "delta_xi_mean": x.delta_xi_mean,
    })
}

pub fn experiment_json(manifest: &str, rows: &[Row]) -> String {
    let records: Vec<Value> = rows
        .iter()
        .map(|r| {
            let e = &r.record;
            let mut v = json!({
                "model": e.model,
                "n": e.n,
                "p": e.p,
                "samples": e.samples,
                "p_scf_before": e.p_scf_before,
                "p_scf_after": e.p_scf_after,
                "delta_p_scf": e.delta_p_scf,
                "delta_xi_mean": e.delta_xi_mean,
                "seed": e.seed,
                "budget_exceeded": e.budget_exceeded,
            });
            if let Some(x) = &r.exact {
                v["exact"] = exact_json(x);
            }
            if let Some(b) = &r.bounds {
                v["bounds"] = json!({ "lower": b.lower, "upper": b.upper, "expected_claws": b.expected_claws });
            }
            v
        })
        .collect();
    let doc = json!({ "manifest": manifest_json(manifest), "records": records });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}

pub fn exact_csv(manifest: &str, points: &[ExactPoint]) -> String {
    let mut s = commented(manifest);
    s.push_str("p,p_scf_before,p_scf_after,delta_p_scf,delta_xi_mean\n");
    for x in points {
        let _ = writeln!(s, "{},{},{},{},{}", x.p, x.p_scf_before, x.p_scf_after, x.delta_p_scf, x.delta_xi_mean);
    }
    s
}

pub fn exact_json_doc(manifest: &str, points: &[ExactPoint]) -> String {
    let pts: Vec<Value> = points.iter().map(exact_json).collect();
    let doc = json!({ "manifest": manifest_json(manifest), "points": pts });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

pub fn series_of(rows: &[Row]) -> Vec<Series> {
    let mc = |name: &str, f: fn(&ExperimentRecord) -> f64| Series {
        name: name.into(),
        points: rows.iter().map(|r| (r.record.p, f(&r.record))).collect(),
        dashed: false,
    };
    let mut out = vec![
        mc("p_scf_before", |e| e.p_scf_before),
        mc("p_scf_after", |e| e.p_scf_after),
        mc("delta_p_scf", |e| e.delta_p_scf),
        mc("delta_xi", |e| e.delta_xi_mean),
    ];
    if rows.iter().all(|r| r.exact.is_some()) && !rows.is_empty() {
        let ex = |name: &str, f: fn(&ExactPoint) -> f64| Series {
            name: name.into(),
            points: rows.iter().map(|r| (r.record.p, f(r.exact.as_ref().expect("exact point")))).collect(),
            dashed: true,
        };
        out.push(ex("exact p_scf_after", |x| x.p_scf_after));
        out.push(ex("exact delta_p_scf", |x| x.delta_p_scf));
    }
    if rows.iter().all(|r| r.bounds.is_some()) && !rows.is_empty() {
        let bd = |name: &str, f: fn(&GnpBounds) -> f64| Series {
            name: name.into(),
            points: rows.iter().map(|r| (r.record.p, f(r.bounds.as_ref().expect("bounds")))).collect(),
            dashed: true,
        };
        out.push(bd("lower bound", |b| b.lower));
        out.push(bd("upper bound", |b| b.upper));
    }
    out
}

const COLORS: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// Static line chart with y fixed to [0, 1].
pub fn svg_chart(title: &str, x_label: &str, series: &[Series]) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (60.0, 180.0, 40.0, 50.0);
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + (1.0 - y.clamp(0.0, 1.0)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (x, y) = (x0 + f * (x1 - x0), sy(f));
        let _ = writeln!(s, r##"<line x1="{left}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##, left + pw);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{f:.1}</text>"#, left - 6.0, y + 4.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(x), top + ph + 18.0, tick(x));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, left + pw / 2.0, h - 10.0, escape(x_label));
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if ser.dashed { r#" stroke-dasharray="6,3""# } else { "" };
        let d: Vec<String> = ser
            .points
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| format!("{}{:.2},{:.2}", if k == 0 { 'M' } else { 'L' }, sx(x), sy(y)))
            .collect();
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, d.join(" "));
        let ly = top + 16.0 * i as f64;
        let lx = left + pw + 14.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 22.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    format!("{r}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: f64) -> ExperimentRecord {
        ExperimentRecord {
            model: "gnp".into(),
            n: 20,
            p,
            samples: 10,
            p_scf_before: 0.5,
            p_scf_after: 0.6,
            delta_p_scf: 0.1,
            delta_xi_mean: 0.25,
            seed: 4,
            budget_exceeded: 0,
        }
    }

    #[test]
    fn csv_header_is_stable() {
        let rows = vec![Row { record: record(0.1), exact: None, bounds: None }];
        let csv = experiment_csv("#! model=gnp\n", &rows);
        let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
        assert!(header.starts_with(&CSV_COLUMNS.join(",")));
        assert!(csv.contains("gnp,20,0.1,10,0.5,0.6,0.1,0.25,4,0"));
    }

    #[test]
    fn json_carries_manifest() {
        let rows = vec![Row { record: record(0.1), exact: None, bounds: None }];
        let v: Value = serde_json::from_str(&experiment_json("#! model=gnp\n#! seed=4\n", &rows)).unwrap();
        assert_eq!(v["manifest"]["seed"], "4");
        assert_eq!(v["records"][0]["p_scf_after"], 0.6);
    }

    #[test]
    fn svg_has_one_path_per_series() {
        let rows: Vec<Row> = [0.1, 0.2].iter().map(|&p| Row { record: record(p), exact: None, bounds: None }).collect();
        let svg = svg_chart("t", "p", &series_of(&rows));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke-width=\"1.5\"").count(), 4);
    }
}
