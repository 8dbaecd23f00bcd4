use serde_json::Value;
use zgu_web::{char_table, help, two_subgroups};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn table_seven() {
    let v = parse(char_table(7));
    let degrees: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![1, 7, 8, 6, 3, 3]);
    assert_eq!(v["test_character"], "theta_1");
}

#[test]
fn table_five_has_note() {
    let v = parse(char_table(5));
    assert!(v["test_character"].is_null());
    assert!(v["note"].as_str().unwrap().contains("q = 5"));
}

#[test]
fn errors_are_json() {
    let v = parse(char_table(6));
    assert!(v["error"].as_str().is_some());
}

#[test]
fn two_subgroups_nine() {
    let v = parse(two_subgroups(9));
    assert_eq!(v["conclusion"], "cyclic or dihedral");
    assert_eq!(v["obstructions"].as_array().unwrap().len(), 3);
}

#[test]
fn help_modular_toggle() {
    let plain = parse(help(9, 5, false));
    let nontrivial = plain["solutions"].as_array().unwrap().iter().filter(|s| s["trivial"] == false).count();
    assert_eq!(nontrivial, 2);
    let modular = parse(help(9, 5, true));
    assert!(modular["solutions"].as_array().unwrap().iter().all(|s| s["trivial"] == true));
}
