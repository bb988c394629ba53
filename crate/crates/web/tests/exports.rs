use ncsa_web::{de_curves, frame_view, load_sweep};
use serde_json::Value;

const CFG: &str = "ns=8\nusers=3x(4,2)\nseed=3\n";

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn frame_view_tracks_degrees_round_by_round() {
    let v = parse(&frame_view(CFG, 4).unwrap());
    let slots = v["slots"].as_array().unwrap();
    assert_eq!(slots.len(), 3);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), v["p"].as_array().unwrap().len() + 1);
    let first: u64 = degrees[0].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).sum();
    assert_eq!(first, 12);
    let decoded = v["decoded_round"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r.is_null())
        .count() as u64;
    let last: u64 = degrees
        .last()
        .unwrap()
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_u64().unwrap())
        .sum();
    assert_eq!(last, 12 - 4 * decoded);
}

#[test]
fn curves_have_one_entry_per_round() {
    let v = parse(&de_curves("ns=100\nusers=10x(5,2)\n", 500).unwrap());
    for key in ["l", "de_p", "de_q", "mc_p", "mc_q"] {
        assert_eq!(v[key].as_array().unwrap().len(), 10, "{key}");
    }
}

#[test]
fn sweep_carries_baseline() {
    let v = parse(&load_sweep("ns=200\nusers=(3,1)\n", 1.0, 5, 100).unwrap());
    let g = v["g"].as_array().unwrap();
    assert_eq!(g.len(), 5);
    let s = v["slotted"][4].as_f64().unwrap();
    assert!((s - (-1.0f64).exp()).abs() < 1e-12);
}

#[test]
fn bad_input_is_reported() {
    assert!(frame_view("ns=4\nusers=(5,2)\n", 0).unwrap_err().contains("line 2"));
    assert!(de_curves(CFG, 0).is_err());
    assert!(load_sweep(CFG, 0.0, 5, 10).is_err());
}
