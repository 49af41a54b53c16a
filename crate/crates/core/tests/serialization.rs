use qmlines::enumerate::enumerate_consistent_with;
use qmlines::fixtures::{q4_betweenness, q4_matrix};
use qmlines::{classify, dbe_verdict, line_set, realize, Variant};
use serde_json::{json, Value};

#[test]
fn betweenness_json_fields() {
    let v = serde_json::to_value(q4_betweenness()).unwrap();
    assert_eq!(v["n"], 4);
    assert!(v["encoding"].is_string());
    assert_eq!(v["triples"].as_array().unwrap().len(), 4);
}

#[test]
fn matrix_json_keeps_exact_entries() {
    let v = serde_json::to_value(q4_matrix()).unwrap();
    assert_eq!(v["labels"], json!(["p", "s", "q", "r"]));
    assert_eq!(v["rows"][1], json!(["3", "0", "2", "3"]));
}

#[test]
fn verdict_and_lines_json() {
    let b = q4_betweenness();
    let v = serde_json::to_value(dbe_verdict(&b)).unwrap();
    assert_eq!(
        v,
        json!({"line_count": 3, "has_universal": false, "satisfies_dbe": false})
    );
    let lines = serde_json::to_value(line_set(&b)).unwrap();
    assert!(lines.is_object());
}

#[test]
fn feasibility_outcome_json() {
    let v = serde_json::to_value(realize(&q4_betweenness(), Variant::Quasi).unwrap()).unwrap();
    assert_eq!(v["status"], "feasible");
    assert_eq!(v["optimal_slack"], "1/22");
    assert_eq!(v["witness"]["rows"][0], json!(["0", "1", "1", "3"]));
    let v = serde_json::to_value(realize(&q4_betweenness(), Variant::Metric).unwrap()).unwrap();
    assert_eq!(v["optimal_slack"], "0");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn classification_records_serialize() {
    let recs = classify(3, &[2, 3]).unwrap();
    let v = serde_json::to_value(&recs).unwrap();
    let first = &v[0];
    for key in [
        "canonical",
        "class_size",
        "line_count",
        "has_universal",
        "satisfies_dbe",
        "realizable_quasi",
        "quasi_slack",
        "realizable_metric",
        "metric_slack",
        "realizable_int",
        "realizable_digraph",
        "witness",
    ] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["realizable_int"], json!({"2": true, "3": true}));
}

#[test]
fn enumeration_does_not_depend_on_thread_count() {
    let one = enumerate_consistent_with(4, 1).unwrap();
    for threads in [2, 3, 7] {
        let other = enumerate_consistent_with(4, threads).unwrap();
        assert_eq!(other.raw_count, one.raw_count);
        assert_eq!(other.classes, one.classes);
    }
    assert_eq!(one.raw_count, 104_976);
    assert_eq!(one.classes.len(), 4455);
}
