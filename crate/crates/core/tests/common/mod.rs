#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use metaplectic_packets::format::Workspace;
use metaplectic_packets::*;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_inventory<R: Rng>(rng: &mut R) -> Inventory {
    let mut labels = Inventory::standard().labels().to_vec();
    for i in 0..rng.gen_range(0..3) {
        let dim = rng.gen_range(1..4) * 2;
        let roots = (1..=rng.gen_range(0..6))
            .map(|n| (n, random_sign(rng)))
            .collect();
        match rng.gen_range(0..3) {
            0 => labels.push(CuspidalLabel {
                id: format!("o{}", i),
                dim: dim - 1,
                dual_id: format!("o{}", i),
                duality: DualityType::Orthogonal,
                is_trivial: false,
                omega_minus_one: random_sign(rng),
                root_numbers: roots,
            }),
            1 => labels.push(CuspidalLabel {
                id: format!("s{}", i),
                dim,
                dual_id: format!("s{}", i),
                duality: DualityType::Symplectic,
                is_trivial: false,
                omega_minus_one: random_sign(rng),
                root_numbers: roots,
            }),
            _ => {
                for (me, other) in [("p", "q"), ("q", "p")] {
                    labels.push(CuspidalLabel {
                        id: format!("{}{}", me, i),
                        dim,
                        dual_id: format!("{}{}", other, i),
                        duality: DualityType::None,
                        is_trivial: false,
                        omega_minus_one: Sign::Plus,
                        root_numbers: BTreeMap::new(),
                    });
                }
            }
        }
    }
    Inventory::build(labels).expect("generated inventory is valid")
}

fn random_parameter<R: Rng>(rng: &mut R, inv: &Arc<Inventory>) -> AParameter {
    loop {
        let rhos: Vec<Rho> = inv.rhos().collect();
        let mut blocks = Vec::new();
        for _ in 0..rng.gen_range(0..4) {
            let rho = *rhos.choose(rng).unwrap();
            let block = JordanBlock::new(rho, rng.gen_range(1..5), rng.gen_range(1..5));
            let mult = rng.gen_range(1..3);
            blocks.push((block, mult));
            if inv.duality(rho) == DualityType::None {
                blocks.push((block.dual(inv), mult));
            }
        }
        let side = if rng.gen_bool(0.8) {
            GroupSide::Metaplectic
        } else {
            GroupSide::OddOrthogonal
        };
        if let Ok(p) = AParameter::new(inv.clone(), side, blocks) {
            return p;
        }
    }
}

fn random_xms<R: Rng>(rng: &mut R, inv: &Arc<Inventory>) -> Xms {
    loop {
        let rhos: Vec<Rho> = inv
            .rhos()
            .filter(|&r| inv.duality(r) != DualityType::None)
            .collect();
        let mut rows = Vec::new();
        for _ in 0..rng.gen_range(0..3) {
            let rho = *rhos.choose(rng).unwrap();
            let half = inv.duality(rho) == DualityType::Orthogonal;
            let mut row = Vec::new();
            for _ in 0..rng.gen_range(1..4) {
                let b = rng.gen_range(1..5i64);
                let lower2 = 2 * rng.gen_range(-2..3i64) + half as i64;
                let upper2 = lower2 + 2 * (b - 1);
                let l = rng.gen_range(0..=(b / 2) as u32);
                row.push(ExtendedSegment::twice(upper2, lower2, l, random_sign(rng)));
            }
            row.sort_by_key(|s| (s.lower, s.upper));
            rows.push((rho, row));
        }
        if let Ok(e) = Xms::new(inv.clone(), GroupSide::Metaplectic, rows) {
            return e;
        }
    }
}

fn random_value<R: Rng>(rng: &mut R, depth: u32) -> Value {
    match rng.gen_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => Value::Null,
        1 => json!(rng.gen_bool(0.5)),
        2 => json!(rng.gen_range(-1000i64..1000)),
        3 => json!(format!("s{}", rng.gen_range(0..100))),
        4 => Value::Array(
            (0..rng.gen_range(0..4))
                .map(|_| random_value(rng, depth - 1))
                .collect(),
        ),
        _ => Value::Object(
            (0..rng.gen_range(0..4))
                .map(|i| (format!("k{}", i * 7 % 5), random_value(rng, depth - 1)))
                .collect(),
        ),
    }
}

/// A random valid workspace; any of the optional parts may be missing.
pub fn random_workspace<R: Rng>(rng: &mut R) -> Workspace {
    let inv = Arc::new(random_inventory(rng));
    let mut ws = Workspace::new(inv.clone());
    ws.embed_inventory = rng.gen_bool(0.8);
    if rng.gen_bool(0.8) {
        let psi = random_parameter(rng, &inv);
        if rng.gen_bool(0.7) {
            let chars = psi.all_characters();
            ws.character = chars.choose(rng).cloned();
        }
        ws.parameter = Some(psi);
    }
    if rng.gen_bool(0.7) {
        ws.xms = Some(random_xms(rng, &inv));
    }
    if rng.gen_bool(0.5) {
        ws.result = Some(random_value(rng, 3));
    }
    ws
}

/// Runs every invalid fixture through the `mpp` binary and returns
/// (fixture, expected, actual) exit codes.
pub fn run_invalid_fixtures(bin: &str) -> Vec<(String, i32, i32)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/invalid");
    let manifest = std::fs::read_to_string(dir.join("EXPECTED")).unwrap();
    let mut out = Vec::new();
    for line in manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let mut words = line.split_whitespace();
        let expected: i32 = words.next().unwrap().parse().unwrap();
        let file = words.next().unwrap();
        let sub = words.next().unwrap();
        let status = std::process::Command::new(bin)
            .arg(sub)
            .arg(dir.join(file))
            .args(words)
            .output()
            .unwrap()
            .status;
        out.push((file.to_string(), expected, status.code().unwrap_or(-1)));
    }
    out
}
