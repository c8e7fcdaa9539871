//! Packet enumeration over extended multi-segments, the DDR recursion
//! check and multiplicity diagnostics.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::Rho;
use crate::nonvanish::{Criterion, Rule};
use crate::param::{AParameter, JordanBlock, SegmentMatrix, SignMap};
use crate::sign::Sign;
use crate::xms::{canonical_order, ExtendedSegment, Xms};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketMember {
    pub xms: Xms,
    pub np: Vec<SegmentMatrix>,
}

/// Members of Π_ψ grouped by character. Every character of the component
/// group is a key, including those whose packet is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packet {
    pub psi: AParameter,
    pub np: Vec<SegmentMatrix>,
    pub members: BTreeMap<SignMap, Vec<Xms>>,
}

impl Packet {
    pub fn total(&self) -> usize {
        self.members.values().map(Vec::len).sum()
    }

    pub fn empty_characters(&self) -> Vec<&SignMap> {
        self.members
            .iter()
            .filter(|(_, v)| v.is_empty())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn flat(&self) -> Vec<PacketMember> {
        self.members
            .values()
            .flatten()
            .map(|x| PacketMember {
                xms: x.clone(),
                np: self.np.clone(),
            })
            .collect()
    }
}

/// The (l, η) choices for a run of `count` equal segments.
fn run_options(block: &JordanBlock, count: usize, prune: bool) -> Vec<Vec<ExtendedSegment>> {
    let b = block.b as i64;
    let single: Vec<ExtendedSegment> = (0..=(b / 2) as u32)
        .flat_map(|l| {
            let signs: &[Sign] = if 2 * l as i64 == b {
                &[Sign::Plus]
            } else {
                &[Sign::Plus, Sign::Minus]
            };
            signs
                .iter()
                .map(move |&eta| ExtendedSegment::from_block(block, l, eta))
        })
        .collect();
    if prune {
        // Adjacent equal segments need equal l and chained signs.
        let step = Sign::parity(b - 1);
        return single
            .iter()
            .map(|first| {
                let mut run = vec![*first];
                for _ in 1..count {
                    let prev = *run.last().unwrap();
                    run.push(
                        ExtendedSegment {
                            eta: prev.eta * step,
                            ..prev
                        }
                        .canonical(),
                    );
                }
                run
            })
            .collect();
    }
    let mut runs = vec![Vec::new()];
    for _ in 0..count {
        runs = runs
            .into_iter()
            .flat_map(|r: Vec<ExtendedSegment>| {
                single.iter().map(move |s| {
                    let mut r = r.clone();
                    r.push(*s);
                    r
                })
            })
            .collect();
    }
    runs
}

/// Enumerates candidate extended multi-segments over the canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Enumerator {
    pub criterion: Criterion,
}

impl Enumerator {
    pub fn with_rule(rule: Rule) -> Self {
        Enumerator {
            criterion: Criterion::with_rule(rule),
        }
    }

    fn prune(&self) -> bool {
        self.criterion.rule == Rule::Standard
    }

    /// Every canonical XMS with ψ_E = ψ in the canonical order, before the
    /// non-vanishing filter.
    pub fn candidates(&self, psi: &AParameter) -> Result<Vec<Xms>> {
        if !psi.is_good_parity() {
            return Err(Error::pre(
                "packet enumeration needs a good-parity parameter",
            ));
        }
        let order = canonical_order(psi);
        let mut per_row: Vec<(Rho, Vec<Vec<ExtendedSegment>>)> = Vec::new();
        for (&rho, row) in &order {
            let mut choices: Vec<Vec<ExtendedSegment>> = vec![Vec::new()];
            let mut i = 0;
            while i < row.len() {
                let mut j = i;
                while j < row.len() && row[j] == row[i] {
                    j += 1;
                }
                let runs = run_options(&row[i], j - i, self.prune());
                choices = choices
                    .into_iter()
                    .flat_map(|prefix| {
                        runs.iter().map(move |run| {
                            let mut p = prefix.clone();
                            p.extend_from_slice(run);
                            p
                        })
                    })
                    .collect();
                i = j;
            }
            per_row.push((rho, choices));
        }
        let mut all: Vec<BTreeMap<Rho, Vec<ExtendedSegment>>> = vec![BTreeMap::new()];
        for (rho, choices) in &per_row {
            all = all
                .into_iter()
                .flat_map(|m| {
                    choices.iter().map(move |c| {
                        let mut m = m.clone();
                        m.insert(*rho, c.clone());
                        m
                    })
                })
                .collect();
        }
        let mut set = BTreeSet::new();
        for rows in all {
            set.insert(Xms::new(psi.inventory().clone(), psi.side(), rows)?);
        }
        Ok(set.into_iter().collect())
    }

    /// The non-vanishing members of Π_ψ for each character.
    pub fn enumerate_all(&self, psi: &AParameter) -> Result<Packet> {
        let candidates = self.candidates(psi)?;
        let verdicts: Vec<Result<bool>> = candidates
            .par_iter()
            .map(|e| self.criterion.is_nonzero(e))
            .collect();
        let mut members: BTreeMap<SignMap, Vec<Xms>> = psi
            .all_characters()
            .into_iter()
            .map(|c| (c, Vec::new()))
            .collect();
        for (e, v) in candidates.into_iter().zip(verdicts) {
            if v? {
                members.entry(e.character()).or_default().push(e);
            }
        }
        Ok(Packet {
            psi: psi.clone(),
            np: Vec::new(),
            members,
        })
    }

    pub fn enumerate(&self, psi: &AParameter, eps: &SignMap) -> Result<Vec<Xms>> {
        psi.check_character(eps)?;
        let found: Vec<Result<Option<Xms>>> = self
            .candidates(psi)?
            .into_par_iter()
            .filter(|e| e.character() == *eps)
            .map(|e| Ok(self.criterion.is_nonzero(&e)?.then_some(e)))
            .collect();
        let mut out = Vec::new();
        for f in found {
            if let Some(e) = f? {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Π_ψ for an arbitrary ψ: the good-parity packet of ψ_gp, tagged with
    /// the shape of τ_{ψ_np}.
    pub fn general(&self, psi: &AParameter) -> Result<Packet> {
        let (gp, np) = psi.decompose();
        let mut packet = self.enumerate_all(&gp)?;
        packet.psi = psi.clone();
        packet.np = AParameter::tau_np_shape(&np);
        Ok(packet)
    }
}

pub fn enumerate(psi: &AParameter, eps: &SignMap) -> Result<Vec<Xms>> {
    Enumerator::default().enumerate(psi, eps)
}

pub fn enumerate_all(psi: &AParameter) -> Result<Packet> {
    Enumerator::default().enumerate_all(psi)
}

pub fn general(psi: &AParameter) -> Result<Packet> {
    Enumerator::default().general(psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdrReport {
    pub block: JordanBlock,
    pub eta0: Sign,
    /// Members with l ≥ 1 at the block.
    pub deformed: usize,
    /// Members with l = 0 at the block.
    pub split: usize,
    pub discrepancies: Vec<String>,
}

impl DdrReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn as_set(v: &[Xms]) -> BTreeSet<Xms> {
    v.iter().map(Xms::canonical).collect()
}

/// Compares the image of a map with a target packet and records any
/// failure of injectivity or surjectivity.
fn compare_bijection(what: &str, image: Vec<Xms>, target: &[Xms], out: &mut Vec<String>) {
    let set: BTreeSet<Xms> = image.iter().map(Xms::canonical).collect();
    if set.len() != image.len() {
        out.push(format!("{}: map is not injective", what));
    }
    let target = as_set(target);
    for e in set.difference(&target) {
        out.push(format!(
            "{}: image {} is not in the target packet",
            what,
            e.display()
        ));
    }
    for e in target.difference(&set) {
        out.push(format!(
            "{}: target member {} is not hit",
            what,
            e.display()
        ));
    }
}

/// Checks the DDR recursion at one block (ρ, A, B) with A > B: members with
/// l ≥ 1 correspond to the packet of the shrunk block, members with l = 0
/// to the packets of the split blocks.
pub fn ddr_check(psi: &AParameter, eps: &SignMap, block: JordanBlock) -> Result<DdrReport> {
    ddr_check_with(psi, eps, block, Rule::Standard)
}

pub fn ddr_check_with(
    psi: &AParameter,
    eps: &SignMap,
    block: JordanBlock,
    rule: Rule,
) -> Result<DdrReport> {
    if !psi.classify().nonneg_ddr {
        return Err(Error::pre("ddr_check needs a non-negative DDR parameter"));
    }
    psi.check_character(eps)?;
    if psi.multiplicity(&block) == 0 {
        return Err(Error::pre("block is not in the parameter"));
    }
    if block.b < 2 {
        return Err(Error::pre("ddr_check needs a block with A > B"));
    }
    let en = Enumerator::with_rule(rule);
    let inv = psi.inventory().clone();
    let rho = block.rho;
    let eta0 = eps.get(&block).expect("character covers the block");
    let members = en.enumerate(psi, eps)?;
    let pos = canonical_order(psi)[&rho]
        .iter()
        .position(|b| *b == block)
        .expect("block is in its row");

    let rest: Vec<(JordanBlock, u32)> = psi
        .blocks()
        .iter()
        .filter(|(b, _)| **b != block)
        .map(|(b, &m)| (*b, m))
        .collect();
    let mut eps_rest = eps.clone();
    eps_rest.0.remove(&block);

    let mut discrepancies = Vec::new();
    let (p1, p0): (Vec<&Xms>, Vec<&Xms>) = members.iter().partition(|e| e.row(rho)[pos].l >= 1);

    // l ≥ 1: shrink to (ρ, A − 1, B + 1).
    let mut image = Vec::new();
    for e in &p1 {
        match e.deform_minus(rho, pos) {
            Ok(d) => image.push(d),
            Err(err) => {
                discrepancies.push(format!("deform_minus failed on {}: {}", e.display(), err))
            }
        }
    }
    let target = if block.b == 2 {
        if eta0 == Sign::Minus {
            Vec::new()
        } else {
            let psi_deg = AParameter::new(inv.clone(), psi.side(), rest.clone())?;
            en.enumerate(&psi_deg, &eps_rest)?
        }
    } else {
        let shrunk = JordanBlock::new(rho, block.a, block.b - 2);
        let psi_deg = AParameter::new(
            inv.clone(),
            psi.side(),
            rest.iter().copied().chain([(shrunk, 1)]),
        )?;
        let mut eps_deg = eps_rest.clone();
        eps_deg.set(shrunk, eta0);
        en.enumerate(&psi_deg, &eps_deg)?
    };
    compare_bijection("l >= 1", image, &target, &mut discrepancies);

    // l = 0: split into the chain of (ρ, C, C), B ≤ C ≤ A.
    let b = block.b as i64;
    let lo = block.lower();
    let width = b - 1;
    let cs: Vec<HalfInteger> = (0..=width).map(|k| lo.add_int(k)).collect();
    let split_blocks: Vec<JordanBlock> = cs
        .iter()
        .map(|c| JordanBlock::new(rho, (c.twice() + 1) as u32, 1))
        .collect();
    let psi_split = AParameter::new(
        inv.clone(),
        psi.side(),
        rest.iter()
            .copied()
            .chain(split_blocks.iter().map(|&x| (x, 1))),
    )?;
    let mut seen_p0 = 0;
    for eta in [Sign::Plus, Sign::Minus] {
        let allowed = eta.pow(b) * Sign::parity(b * (b - 1) / 2) == eta0;
        let group: Vec<&&Xms> = p0.iter().filter(|e| e.row(rho)[pos].eta == eta).collect();
        if !allowed {
            if !group.is_empty() {
                discrepancies.push(format!(
                    "l = 0 members with eta = {} contradict eta0 = {}",
                    eta, eta0
                ));
            }
            continue;
        }
        seen_p0 += group.len();
        let mut eps_split = eps_rest.clone();
        for (k, x) in split_blocks.iter().enumerate() {
            eps_split.set(*x, Sign::parity(k as i64) * eta);
        }
        let target = en.enumerate(&psi_split, &eps_split)?;
        let image: Vec<Xms> = group
            .iter()
            .map(|e| {
                let mut row = e.row(rho).to_vec();
                let chain: Vec<ExtendedSegment> = cs
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| ExtendedSegment::new(c, c, 0, Sign::parity(k as i64) * eta))
                    .collect();
                row.splice(pos..=pos, chain);
                e.with_row(rho, row)
            })
            .collect::<Result<_>>()?;
        compare_bijection(
            &format!("l = 0, eta = {}", eta),
            image,
            &target,
            &mut discrepancies,
        );
    }
    if seen_p0 != p0.len() {
        discrepancies.push("some l = 0 members were not matched to a sign".into());
    }
    Ok(DdrReport {
        block,
        eta0,
        deformed: p1.len(),
        split: p0.len(),
        discrepancies,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketReport {
    pub total: usize,
    pub counts: BTreeMap<SignMap, usize>,
    pub duplicates: usize,
    pub empty: Vec<SignMap>,
}

/// Multiplicity diagnostics for Π_ψ.
pub fn report(psi: &AParameter) -> Result<PacketReport> {
    let packet = general(psi)?;
    let mut seen = BTreeSet::new();
    let mut duplicates = 0;
    for e in packet.members.values().flatten() {
        if !seen.insert(e.canonical()) {
            duplicates += 1;
        }
    }
    Ok(PacketReport {
        total: packet.total(),
        counts: packet
            .members
            .iter()
            .map(|(k, v)| (k.clone(), v.len()))
            .collect(),
        duplicates,
        empty: packet.empty_characters().into_iter().cloned().collect(),
    })
}
