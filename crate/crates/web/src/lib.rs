//! WebAssembly bindings for the browser demo. Every export takes the config
//! file text and returns a JSON document; errors come back as JS strings.

use ncsa_core::{
    aloha_baseline, de_iterate, decode_frame, parse_config, place_frame, round_profile, sweep_load, AlohaVariant,
    Mixture, SystemConfig, Workers,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Frame cap for the interactive views.
pub const MAX_FRAMES: usize = 20_000;

#[derive(Serialize)]
struct FrameView {
    ns: usize,
    /// Slot indices per user.
    slots: Vec<Vec<usize>>,
    k: Vec<usize>,
    /// Round in which each user decoded, `null` if never.
    decoded_round: Vec<Option<usize>>,
    /// Slot degrees before the first round and after each round.
    degrees: Vec<Vec<usize>>,
    p: Vec<f64>,
    q: Vec<f64>,
}

#[derive(Serialize)]
struct Curves {
    l: Vec<usize>,
    de_p: Vec<f64>,
    de_q: Vec<f64>,
    mc_p: Vec<f64>,
    mc_q: Vec<f64>,
    frames: usize,
}

#[derive(Serialize)]
struct SweepView {
    g: Vec<f64>,
    throughput: Vec<f64>,
    t_ci95: Vec<f64>,
    plr: Vec<f64>,
    slotted: Vec<f64>,
    argmax_g: f64,
    t_max: f64,
}

fn config(text: &str) -> Result<SystemConfig, String> {
    parse_config(text).map_err(|e| e.to_string())
}

fn frames(requested: usize) -> Result<usize, String> {
    match requested {
        0 => Err("frames must be at least 1".to_string()),
        f if f > MAX_FRAMES => Err(format!("at most {MAX_FRAMES} frames in the browser")),
        f => Ok(f),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Placement and peeling rounds of one frame.
pub fn frame_view(config_text: &str, frame_index: u64) -> Result<String, String> {
    let cfg = config(config_text)?;
    let placement = place_frame(&cfg, frame_index);
    let trace = decode_frame(&cfg, &placement);

    let mut degree = placement.degree_of_slot().to_vec();
    let mut degrees = vec![degree.clone()];
    for r in &trace.rounds {
        for &u in &r.newly_decoded {
            for &s in placement.slots_of(u) {
                degree[s] -= 1;
            }
        }
        degrees.push(degree.clone());
    }
    to_json(&FrameView {
        ns: cfg.ns(),
        slots: placement.slots_of_user().to_vec(),
        k: cfg.users().iter().map(|c| c.k()).collect(),
        decoded_round: (0..cfg.num_users()).map(|u| trace.round_of(u)).collect(),
        degrees,
        p: trace.rounds.iter().map(|r| r.p_empirical).collect(),
        q: trace.rounds.iter().map(|r| r.q_empirical).collect(),
    })
}

/// Density-evolution prediction next to simulated per-round averages.
pub fn de_curves(config_text: &str, frame_count: usize) -> Result<String, String> {
    let cfg = config(config_text)?;
    let frame_count = frames(frame_count)?;
    let de = de_iterate(&cfg);
    let rounds = cfg.num_users();
    let mc = round_profile(&cfg, frame_count, rounds, Workers::Auto);
    to_json(&Curves {
        l: (0..rounds).collect(),
        de_p: (0..rounds).map(|l| de.p_at(l)).collect(),
        de_q: (0..rounds).map(|l| de.q_at(l)).collect(),
        mc_p: mc.iter().map(|m| m.0).collect(),
        mc_q: mc.iter().map(|m| m.1).collect(),
        frames: frame_count,
    })
}

/// Throughput against load for the config's code mix, with the slotted Aloha
/// curve at the same loads.
pub fn load_sweep(config_text: &str, g_max: f64, points: usize, frame_count: usize) -> Result<String, String> {
    let cfg = config(config_text)?;
    let frame_count = frames(frame_count)?;
    if !(g_max > 0.0 && g_max <= 4.0) || !(1..=200).contains(&points) {
        return Err("need 0 < g_max <= 4 and 1..=200 points".to_string());
    }
    let grid: Vec<f64> = (1..=points).map(|i| g_max * i as f64 / points as f64).collect();
    let result = sweep_load(&Mixture::from_config(&cfg), cfg.ns(), &grid, frame_count, cfg.seed());
    let g: Vec<f64> = result.points.iter().map(|p| p.aggregate.g).collect();
    to_json(&SweepView {
        slotted: g.iter().map(|&g| aloha_baseline(g, AlohaVariant::Slotted)).collect(),
        throughput: result.points.iter().map(|p| p.aggregate.t_mean).collect(),
        t_ci95: result.points.iter().map(|p| p.aggregate.t_ci95).collect(),
        plr: result.points.iter().map(|p| p.aggregate.plr_mean).collect(),
        g,
        argmax_g: result.argmax_g,
        t_max: result.t_max,
    })
}

#[wasm_bindgen(js_name = frameView)]
pub fn frame_view_js(config_text: &str, frame_index: u32) -> Result<String, JsValue> {
    frame_view(config_text, frame_index as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = deCurves)]
pub fn de_curves_js(config_text: &str, frames: u32) -> Result<String, JsValue> {
    de_curves(config_text, frames as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = loadSweep)]
pub fn load_sweep_js(config_text: &str, g_max: f64, points: u32, frames: u32) -> Result<String, JsValue> {
    load_sweep(config_text, g_max, points as usize, frames as usize).map_err(|e| JsValue::from_str(&e))
}
