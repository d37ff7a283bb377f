use beauville_wasm::{invariants, psl2, select_classes, DEMO_MAX_Q};
use serde_json::{json, Value};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn invariants_calculator() {
    let doc = parse(invariants("25", "5,5,5", "5,5,5"));
    for (k, v) in [("g1", 6), ("g2", 6), ("chi", 1), ("K2", 8), ("e", 4), ("q", 0), ("pg", 0)] {
        assert_eq!(doc[k], json!(v), "{k}");
    }
    let doc = parse(invariants("168", "4,4,4", "7,7,7"));
    assert_eq!((doc["chi"].clone(), doc["K2"].clone(), doc["e"].clone()), (json!(6), json!(48), json!(24)));
    assert!(parse(invariants("25", "2,3", "x")).get("error").is_some());
    assert!(parse(invariants("25", "2,3,6", "5,5,5")).get("error").is_some());
}

#[test]
fn psl2_construction() {
    let doc = parse(psl2(13));
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["exists"], true);
    assert_eq!(parse(psl2(5))["exists"], false);
    assert!(parse(psl2(6)).get("error").is_some());
    assert!(parse(psl2(DEMO_MAX_Q as u32 + 1)).get("error").is_some());
}

#[test]
fn class_selection() {
    let doc = parse(select_classes(100, "2,3,7", "2,3,7", false, "unbounded"));
    let ks: Vec<u64> = doc["shapes"].as_array().unwrap().iter().flat_map(|t| t.as_array().unwrap().iter().map(|s| s["k"].as_u64().unwrap())).collect();
    assert_eq!(ks, vec![50, 32, 14, 46, 30, 12]);
    assert!(parse(select_classes(100, "2,3,7", "2,3,7", false, "strict")).get("error").is_some());
    assert_eq!(parse(select_classes(800, "2,4,6", "2,4,5", true, "strict"))["mode"], "sn");
    assert!(parse(select_classes(800, "2,2,2,3", "2,2,2,3", false, "strict")).get("shapes").is_some());
    assert!(parse(select_classes(800, "2,3,7", "2,3,7", false, "sideways")).get("error").is_some());
}
