//! Golden-report regression: byte-level comparison after stripping timing.

use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldenOutcome {
    Match,
    Drift(Vec<String>),
}

/// Remove the volatile fields before comparison: wall-clock time, the
/// thread count and seed echoes, and the input hash that covers them. A
/// symbolic check rerun with a different seed therefore still matches; a
/// point-sampled check records its points in the result and drifts.
pub fn strip_timing(json: &str) -> Result<String, serde_json::Error> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time_ms");
        obj.remove("input_hash");
        if let Some(cfg) = obj.get_mut("config").and_then(|c| c.as_object_mut()) {
            cfg.remove("threads");
            cfg.remove("seed");
        }
    }
    serde_json::to_string_pretty(&v)
}

/// Compare a fresh report against a stored golden report; drift lists the
/// differing JSON paths.
pub fn golden_compare(report_json: &str, golden_json: Option<&str>) -> GoldenOutcome {
    let Some(golden_json) = golden_json else {
        return GoldenOutcome::Drift(vec!["absent".to_string()]);
    };
    let fresh = match strip_timing(report_json) {
        Ok(s) => s,
        Err(e) => return GoldenOutcome::Drift(vec![format!("fresh parse: {e}")]),
    };
    let golden = match strip_timing(golden_json) {
        Ok(s) => s,
        Err(e) => return GoldenOutcome::Drift(vec![format!("golden parse: {e}")]),
    };
    if fresh == golden {
        return GoldenOutcome::Match;
    }
    let a: Value = serde_json::from_str(&fresh).expect("fresh reparses");
    let b: Value = serde_json::from_str(&golden).expect("golden reparses");
    let mut paths = Vec::new();
    diff_paths(&a, &b, "$", &mut paths);
    if paths.is_empty() {
        paths.push("byte-level difference".to_string());
    }
    GoldenOutcome::Drift(paths)
}

fn diff_paths(a: &Value, b: &Value, path: &str, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => {
            let keys: std::collections::BTreeSet<&String> = ma.keys().chain(mb.keys()).collect();
            for k in keys {
                match (ma.get(k), mb.get(k)) {
                    (Some(x), Some(y)) => diff_paths(x, y, &format!("{path}.{k}"), out),
                    _ => out.push(format!("{path}.{k}")),
                }
            }
        }
        (Value::Array(xa), Value::Array(xb)) => {
            if xa.len() != xb.len() {
                out.push(format!("{path}.length"));
                return;
            }
            for (i, (x, y)) in xa.iter().zip(xb).enumerate() {
                diff_paths(x, y, &format!("{path}[{i}]"), out);
            }
        }
        _ => {
            if a != b {
                out.push(path.to_string());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_reports_match_modulo_timing() {
        let a = r#"{"schema":1,"status":"PASS","wall_time_ms":10}"#;
        let b = r#"{"schema":1,"status":"PASS","wall_time_ms":999}"#;
        assert_eq!(golden_compare(a, Some(b)), GoldenOutcome::Match);
    }

    #[test]
    fn drift_reports_paths() {
        let a = r#"{"schema":1,"status":"PASS","wall_time_ms":1}"#;
        let b = r#"{"schema":1,"status":"FAIL","wall_time_ms":1}"#;
        match golden_compare(a, Some(b)) {
            GoldenOutcome::Drift(paths) => assert_eq!(paths, vec!["$.status".to_string()]),
            other => panic!("expected drift, got {other:?}"),
        }
        assert_eq!(
            golden_compare(a, None),
            GoldenOutcome::Drift(vec!["absent".to_string()])
        );
    }
}
