//! Native runs of the browser entry points.

use qu8it_web::{evolve_response, resources_response, spectrum_response};
use serde_json::Value;

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn spectrum_of_one_sector() {
    let v = json(&spectrum_response(r#"{"L": 1, "h": 20, "sector": "0"}"#).unwrap());
    assert_eq!(v["dim"], 64);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 20);
    assert!(levels[0]["casimir"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn spectrum_defaults_cover_the_register() {
    let v = json(&spectrum_response("{}").unwrap());
    assert_eq!(v["levels"].as_array().unwrap().len(), 64);
}

#[test]
fn evolve_tracks_exact_solution() {
    let v = json(&evolve_response(r#"{"h": 1, "t": 0.5, "steps": 50, "order": 2, "state": "1,8bar"}"#).unwrap());
    assert_eq!(v["state"], "1,8\u{304}");
    let trotter = v["trotter"].as_array().unwrap();
    assert_eq!(trotter.len(), 51);
    assert_eq!(v["exact"].as_array().unwrap().len(), 51);
    let f = trotter.last().unwrap()["fidelity"].as_f64().unwrap();
    assert!(f > 1.0 - 1e-6, "fidelity {f}");
}

#[test]
fn resources_ratios() {
    let v = json(&resources_response(r#"{"nf": 2, "L": 2}"#).unwrap());
    assert_eq!(v["qu8it"]["qudit_count"], 8);
    assert_eq!(v["qubit"]["qudit_count"], 24);
    assert!((v["ratios"][0].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn bad_requests_are_errors() {
    assert!(spectrum_response("not json").is_err());
    assert!(spectrum_response(r#"{"L": 3}"#).is_err());
    assert!(evolve_response(r#"{"state": "1,9"}"#).is_err());
    assert!(evolve_response(r#"{"steps": 0}"#).is_err());
    assert!(resources_response(r#"{"nf": 0}"#).is_err());
}
