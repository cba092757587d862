use serde_json::Value;

use qradius_verify::{lookup, predicates, run_predicate, run_suite, stress, Error, RunConfig, Status};

fn small(trials: usize, seed: u64) -> RunConfig {
    RunConfig { trials, seed, ..RunConfig::default() }
}

#[test]
fn reports_are_reproducible() {
    let a = run_suite("section2", &small(3, 5)).unwrap().to_json().unwrap();
    let b = run_suite("section2", &small(3, 5)).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    let c = run_suite("section2", &small(3, 6)).unwrap().to_json().unwrap();
    assert_ne!(a, c);
}

#[test]
fn report_json_shape() {
    let r = run_suite("all", &small(1, 0)).unwrap();
    assert!(!r.has_failures());
    let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["suite"], "all");
    assert_eq!(v["config"]["trials"], 1);
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("0 < |q| <= 1")));
    let preds = v["predicates"].as_array().unwrap();
    assert_eq!(preds.len(), 25);
    for p in preds {
        for key in ["id", "statement", "trials", "passes", "fails", "inconclusives", "min_slack", "worst_digest"] {
            assert!(p.get(key).is_some(), "{} lacks {key}", p["id"]);
        }
        let total = p["passes"].as_u64().unwrap() + p["fails"].as_u64().unwrap() + p["inconclusives"].as_u64().unwrap();
        assert_eq!(total, p["trials"].as_u64().unwrap());
    }
}

#[test]
fn csv_has_one_row_per_predicate() {
    let r = run_suite("means-axioms", &small(4, 1)).unwrap();
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>()[..3], ["id", "kind", "trials"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.iter().map(|r| r[0].to_string()).collect::<Vec<_>>(), ["MA1", "MA2", "MA4"]);
    for row in &rows {
        assert_eq!(&row[2], "4");
        assert_eq!(&row[4], "0");
        let slack: f64 = row[6].parse().unwrap();
        assert!(slack >= 0.0);
    }
}

#[test]
fn demo_records_the_violation() {
    let run = run_predicate("p08", &small(50, 0)).unwrap();
    assert_eq!(run.outcomes.len(), 1);
    let o = &run.outcomes[0];
    assert_eq!(o.status, Status::Pass);
    assert!((o.rhs.unwrap() - 2.0).abs() < 1e-9 && (o.lhs.unwrap() - 0.8).abs() < 1e-9);
}

#[test]
fn registry_and_errors() {
    assert_eq!(predicates().len(), 25);
    assert_eq!(lookup("p17").unwrap().id, "P17");
    assert!(matches!(run_suite("section9", &small(1, 0)), Err(Error::UnknownSuite(_))));
    assert!(matches!(run_predicate("P99", &small(1, 0)), Err(Error::UnknownPredicate(_))));
    assert!(matches!(run_suite("all", &RunConfig { dims: vec![1], ..small(1, 0) }), Err(Error::InvalidConfig(_))));
}

#[test]
fn outcome_digests_identify_inputs() {
    let run = run_predicate("P01", &small(2, 3)).unwrap();
    let digests: Vec<&str> = run.outcomes.iter().map(|o| o.inputs_digest.as_str()).collect();
    assert!(digests.iter().all(|d| d.len() == 64));
    let mut unique = digests.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), digests.len());
}

#[test]
fn short_stress_stays_sound() {
    let r = stress("P02", 300, 2).unwrap();
    assert!(r.worst.slack.unwrap() >= -1e-8);
    assert_ne!(r.worst.status, Status::Fail);
}
