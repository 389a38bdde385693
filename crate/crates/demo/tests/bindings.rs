use mahler_demo::{lift_json, regular_json, solve_json};

const CANTOR3: &str = include_str!("../../../corpus/cantor3.json");
const SINGULAR: &str = include_str!("../../../corpus/singular16.json");

#[test]
fn solve_returns_series() {
    let v: serde_json::Value = serde_json::from_str(&solve_json(CANTOR3, 10).unwrap()).unwrap();
    assert_eq!(v["series"][0], serde_json::json!(["0", "1", "1", "0", "1", "0", "0", "0", "1", "0"]));
    assert!(solve_json(CANTOR3, 100_000).is_err());
}

#[test]
fn regularity() {
    let v: serde_json::Value = serde_json::from_str(&regular_json(SINGULAR, "1/4").unwrap()).unwrap();
    assert_eq!(v["regular"], false);
    assert_eq!(v["failing_k"], 1);
    assert!(regular_json(SINGULAR, "2").is_err());
}

#[test]
fn lift_line() {
    let v: serde_json::Value = serde_json::from_str(&lift_json(CANTOR3, "1/2", "1,-1,1/2", 1, 64).unwrap()).unwrap();
    assert_eq!(v["pretty"], serde_json::json!(["1", "-1", "z"]));
    assert!(lift_json(CANTOR3, "1/2", "1,-1,0", 1, 64).is_err());
}

#[test]
fn malformed_system() {
    assert!(solve_json("{\"q\": 2}", 4).is_err());
}
