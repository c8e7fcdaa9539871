//! Desk-scale corpora of parameters, generated by recursive block packing
//! in canonical block order. Output order is deterministic.

use std::sync::Arc;

use crate::discrete::DiscreteParam;
use crate::inventory::{DualityType, Inventory};
use crate::param::{AParameter, GroupSide, JordanBlock};

/// Good-parity blocks of dimension at most `max_dim`, in key order.
pub fn good_blocks(inv: &Inventory, max_dim: u64) -> Vec<JordanBlock> {
    let mut out = Vec::new();
    for rho in inv.rhos() {
        if inv.duality(rho) == DualityType::None {
            continue;
        }
        let d = inv.dim(rho) as u64;
        for a in 1..=max_dim as u32 {
            for b in 1..=max_dim as u32 {
                let block = JordanBlock::new(rho, a, b);
                if d * a as u64 * b as u64 <= max_dim && block.is_good_parity(inv) {
                    out.push(block);
                }
            }
        }
    }
    out.sort();
    out
}

fn pack(
    blocks: &[JordanBlock],
    inv: &Inventory,
    budget: u64,
    current: &mut Vec<(JordanBlock, u32)>,
    out: &mut Vec<Vec<(JordanBlock, u32)>>,
) {
    let Some((first, rest)) = blocks.split_first() else {
        out.push(current.clone());
        return;
    };
    pack(rest, inv, budget, current, out);
    let d = first.dim(inv);
    let mut m = 1;
    while m as u64 * d <= budget {
        current.push((*first, m));
        pack(rest, inv, budget - m as u64 * d, current, out);
        current.pop();
        m += 1;
    }
}

/// Every good-parity parameter with 2n ≤ `max_dim` (the empty one included).
pub fn good_parity(inv: &Arc<Inventory>, max_dim: u64) -> Vec<AParameter> {
    let blocks = good_blocks(inv, max_dim);
    let mut raw = Vec::new();
    pack(&blocks, inv, max_dim, &mut Vec::new(), &mut raw);
    let mut out: Vec<AParameter> = raw
        .into_iter()
        .filter_map(|v| AParameter::new(inv.clone(), GroupSide::Metaplectic, v).ok())
        .collect();
    out.sort_by_key(|p| {
        (
            p.dimension(),
            p.blocks().clone().into_iter().collect::<Vec<_>>(),
        )
    });
    out
}

/// Every discrete L-parameter with every character, 2n ≤ `max_dim`.
pub fn discrete(inv: &Arc<Inventory>, max_dim: u64) -> Vec<DiscreteParam> {
    good_parity(inv, max_dim)
        .into_iter()
        .filter(|p| {
            let c = p.classify();
            c.tempered && c.discrete
        })
        .flat_map(|p| {
            p.all_characters()
                .into_iter()
                .map(move |eps| DiscreteParam {
                    phi: p.clone(),
                    eps,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_corpus() {
        let inv = Arc::new(Inventory::standard());
        let c = good_parity(&inv, 2);
        // empty, (triv,2,1), (triv,1,2), (rhoQ,2,1), (rhoQ,1,2), (rhoS,1,1)
        assert!(c[0].is_empty());
        assert!(c.iter().all(|p| p.dimension() <= 2 && p.is_good_parity()));
        assert_eq!(c.len(), 6);
        let d = discrete(&inv, 2);
        // (triv,2,1), (rhoQ,2,1), (rhoS,1,1) with two characters each, plus empty
        assert_eq!(d.len(), 7);
    }

    #[test]
    fn deterministic() {
        let inv = Arc::new(Inventory::standard());
        assert_eq!(good_parity(&inv, 6), good_parity(&inv, 6));
    }
}
