//! Corpus-wide verification suites. Each suite reports what it checked and
//! every violation it found; none of them panics on a failed property.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::adams::{packet_shift_check, RootNumberTable};
use crate::corpus;
use crate::error::Result;
use crate::half::HalfInteger;
use crate::inventory::{Inventory, Rho};
use crate::nonvanish::{exchange_unreduced, nonvanishing, row_exchange, Criterion, Rule};
use crate::packets::{ddr_check_with, enumerate_all, Enumerator};
use crate::param::{AParameter, SignMap};
use crate::xms::{ato_sign, canonical_order, BlockOrder, Xms};

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub parameters: usize,
    pub checks: usize,
    pub violations: Vec<String>,
    /// Measured facts that are not violations.
    pub notes: BTreeMap<String, usize>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn note(&mut self, key: &str, n: usize) {
        *self.notes.entry(key.to_string()).or_insert(0) += n;
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.parameters += other.parameters;
        self.checks += other.checks;
        self.violations.extend(other.violations);
        for (k, v) in other.notes {
            self.note(&k, v);
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} parameters, {} checks, {} violations",
            self.name,
            self.parameters,
            self.checks,
            self.violations.len()
        );
        for (k, v) in &self.notes {
            s.push_str(&format!(", {} = {}", k, v));
        }
        s
    }
}

/// The order of an XMS, read off its rows.
pub fn order_of(e: &Xms) -> BlockOrder {
    e.rows()
        .iter()
        .map(|(&rho, row)| (rho, row.iter().map(|s| s.block(rho)).collect()))
        .collect()
}

/// ε_E ε^{Ato/W}_{ψ_E} with the Atobe sign taken in the order of E: the
/// character of π(E) in the order-independent normalization.
pub fn normalized_character(e: &Xms) -> Result<SignMap> {
    let psi = e.parameter();
    let ato = ato_sign(&psi, &order_of(e))?;
    e.character().times(&ato.character)
}

fn rowex_one(psi: &AParameter) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("rowex");
    rep.parameters = 1;
    for cand in Enumerator::default().candidates(psi)? {
        let e = if cand.is_nonnegative() {
            cand
        } else {
            cand.shift_uniform(cand.minimal_shift())?
        };
        let verdict = Criterion {
            exhaustive: true,
            ..Default::default()
        }
        .evaluate(&e)?;
        let nz = nonvanishing(&e)?;
        if nz {
            rep.note("nonvanishing inputs", 1);
            if !verdict.conflicts.is_empty() {
                rep.violations
                    .push(format!("path conflict on non-vanishing {}", e.display()));
            }
        } else if !verdict.conflicts.is_empty() {
            rep.note("path conflicts on vanishing inputs", 1);
        }
        let rho_list: Vec<Rho> = e.rows().keys().copied().collect();
        for rho in rho_list {
            for k in 1..e.row(rho).len() {
                let r = row_exchange(&e, rho, k)?;
                if r == e {
                    continue;
                }
                rep.checks += 1;
                if nz {
                    if r.parameter() != e.parameter() {
                        rep.violations
                            .push(format!("R_{} changes psi on {}", k - 1, e.display()));
                    }
                    if r.character() != e.character() {
                        rep.note("literal eps_E changes", 1);
                    }
                    if normalized_character(&r)? != normalized_character(&e)? {
                        rep.violations.push(format!(
                            "R_{} changes the normalized character on {}",
                            k - 1,
                            e.display()
                        ));
                    }
                }
                if nonvanishing(&r)? != nz {
                    if exchange_unreduced(e.row(rho), k) {
                        rep.note("verdict changes without reduction mod b", 1);
                    }
                    rep.violations.push(format!(
                        "R_{} changes the verdict ({} to {}) on {}",
                        k - 1,
                        if nz { "nonzero" } else { "zero" },
                        if nz { "zero" } else { "nonzero" },
                        e.display()
                    ));
                }
                let back = row_exchange(&r, rho, k)?;
                if !back.equivalent(&e) {
                    if nz {
                        rep.violations.push(format!(
                            "R_{} twice is not the identity on {}",
                            k - 1,
                            e.display()
                        ));
                    } else {
                        rep.note("double exchange differs on vanishing inputs", 1);
                    }
                }
            }
        }
    }
    Ok(rep)
}

fn run_parallel<F>(name: &str, params: Vec<AParameter>, f: F) -> Result<SuiteReport>
where
    F: Fn(&AParameter) -> Result<SuiteReport> + Sync,
{
    let parts: Vec<Result<SuiteReport>> = params.par_iter().map(&f).collect();
    let mut rep = SuiteReport::new(name);
    for p in parts {
        rep.absorb(p?);
    }
    rep.name = name.to_string();
    Ok(rep)
}

/// Row exchanges over every canonical candidate of every good-parity ψ
/// with 2n ≤ `max_dim`.
pub fn rowex(inv: &Arc<Inventory>, max_dim: u64) -> Result<SuiteReport> {
    run_parallel("rowex", corpus::good_parity(inv, max_dim), rowex_one)
}

/// The DDR recursion on every non-negative DDR ψ, every ε and every block
/// with A > B.
pub fn ddr(inv: &Arc<Inventory>, max_dim: u64, rule: Rule) -> Result<SuiteReport> {
    let params: Vec<_> = corpus::good_parity(inv, max_dim)
        .into_iter()
        .filter(|p| p.classify().nonneg_ddr)
        .collect();
    run_parallel("ddr", params, |psi| {
        let mut rep = SuiteReport::new("ddr");
        rep.parameters = 1;
        for eps in psi.all_characters() {
            for block in psi.blocks().keys().filter(|b| b.b >= 2) {
                rep.checks += 1;
                if block.b == 2 && eps.get(block) == Some(crate::sign::Sign::Minus) {
                    rep.note("A = B + 1 with eta0 = -1", 1);
                }
                let r = ddr_check_with(psi, &eps, *block, rule)?;
                for d in r.discrepancies {
                    rep.violations.push(format!(
                        "{} at {}: {}",
                        psi.display(),
                        block.label(psi.inventory()),
                        d
                    ));
                }
            }
        }
        Ok(rep)
    })
}

/// Packet shifts at α = 2n + 2 and α = 2n + 4.
pub fn adams(inv: &Arc<Inventory>, max_dim: u64, roots: &RootNumberTable) -> Result<SuiteReport> {
    run_parallel("adams", corpus::good_parity(inv, max_dim), |psi| {
        let mut rep = SuiteReport::new("adams");
        rep.parameters = 1;
        for alpha in [psi.dimension() as i64 + 2, psi.dimension() as i64 + 4] {
            let r = packet_shift_check(psi, alpha, roots)?;
            rep.checks += r.members;
            let tag = |kind: &str, v: &[String]| {
                v.iter()
                    .map(|x| format!("alpha = {}, {}: {}", alpha, kind, x))
                    .collect::<Vec<_>>()
            };
            rep.violations
                .extend(tag("dimension", &r.dimension_failures));
            rep.violations
                .extend(tag("character", &r.character_failures));
            rep.violations.extend(tag("collision", &r.collisions));
            rep.violations.extend(tag("vanishing", &r.vanishing));
        }
        Ok(rep)
    })
}

/// Cuspidality through the three conditions against the exhaustive scan
/// of parameter-level Jacquet modules and against the a-bounds.
pub fn cuspidal_oracle(inv: &Arc<Inventory>, max_dim: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("cuspidal-oracle");
    for phi in corpus::discrete(inv, max_dim) {
        rep.parameters += 1;
        rep.checks += 1;
        let max_a = phi.phi.blocks().keys().map(|b| b.a).max().unwrap_or(0) as i64;
        let scan = inv
            .rhos()
            .all(|r| (0..max_a).all(|x2| phi.jac(r, HalfInteger::from_twice(x2)).is_none()));
        let bounded = inv.rhos().all(|r| phi.bounds(r).a_bound.is_none());
        let direct = phi.is_cuspidal();
        if direct != scan || direct != bounded {
            rep.violations.push(format!(
                "{} with {:?}: conditions {}, jacquet scan {}, bounds {}",
                phi.phi.display(),
                phi.eps.iter().map(|(_, s)| s.to_i8()).collect::<Vec<_>>(),
                direct,
                scan,
                bounded
            ));
        }
        if direct {
            rep.note("cuspidal", 1);
        }
    }
    rep
}

/// Multiplicity-free tempered ψ: exactly one member per character.
pub fn tempered(inv: &Arc<Inventory>, max_dim: u64) -> Result<SuiteReport> {
    let params: Vec<_> = corpus::good_parity(inv, max_dim)
        .into_iter()
        .filter(|p| {
            let c = p.classify();
            c.tempered && c.multiplicity_free
        })
        .collect();
    run_parallel("tempered", params, |psi| {
        let mut rep = SuiteReport::new("tempered");
        rep.parameters = 1;
        let packet = enumerate_all(psi)?;
        for (eps, members) in &packet.members {
            rep.checks += 1;
            if members.len() != 1 {
                rep.violations.push(format!(
                    "{} with {:?}: {} members",
                    psi.display(),
                    eps.iter().map(|(_, s)| s.to_i8()).collect::<Vec<_>>(),
                    members.len()
                ));
            }
        }
        let k = psi.blocks().len() as u32;
        if packet.total() != 1 << k {
            rep.violations.push(format!(
                "{}: total {} instead of {}",
                psi.display(),
                packet.total(),
                1u64 << k
            ));
        }
        Ok(rep)
    })
}

/// The Atobe sign is a character, its value on s_ψ counts the pairs, and
/// it is trivial on non-negative DDR parameters.
pub fn ato(inv: &Arc<Inventory>, max_dim: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("ato");
    for psi in corpus::good_parity(inv, max_dim) {
        rep.parameters += 1;
        let a = ato_sign(&psi, &canonical_order(&psi))?;
        rep.checks += 1;
        if a.character.product() != crate::sign::Sign::Plus {
            rep.violations
                .push(format!("{}: not a character", psi.display()));
        }
        if a.character.pair(&psi.s_psi())? != crate::sign::Sign::parity(a.pairs.len() as i64) {
            rep.violations
                .push(format!("{}: value on s_psi", psi.display()));
        }
        if psi.classify().nonneg_ddr {
            rep.note("non-negative DDR", 1);
            if !a.pairs.is_empty() {
                rep.violations
                    .push(format!("{}: DDR with pairs", psi.display()));
            }
        }
        if !a.pairs.is_empty() {
            rep.note("with pairs", 1);
        }
    }
    Ok(rep)
}

/// Packet-level diagnostics: duplicate forms and empty characters.
pub fn multiplicity(inv: &Arc<Inventory>, max_dim: u64) -> Result<SuiteReport> {
    run_parallel("multiplicity", corpus::good_parity(inv, max_dim), |psi| {
        let mut rep = SuiteReport::new("multiplicity");
        rep.parameters = 1;
        let r = crate::packets::report(psi)?;
        rep.checks += r.total;
        if r.duplicates > 0 {
            rep.violations
                .push(format!("{}: {} duplicates", psi.display(), r.duplicates));
        }
        if !r.empty.is_empty() {
            rep.note("parameters with empty characters", 1);
            rep.note("empty characters", r.empty.len());
        }
        Ok(rep)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // The exchange reduces l modulo b, and on vanishing inputs that can
    // produce a non-vanishing row. Everything else must hold.
    #[test]
    fn rowex_small() {
        let inv = Arc::new(Inventory::standard());
        let r = rowex(&inv, 4).unwrap();
        assert!(r.checks > 0 && r.notes["nonvanishing inputs"] > 0);
        assert!(
            r.violations.iter().all(|v| v.contains("(zero to nonzero)")),
            "{:?}",
            r.violations
        );
        assert!(!r
            .notes
            .contains_key("verdict changes without reduction mod b"));
    }

    #[test]
    fn small_suites_pass() {
        let inv = Arc::new(Inventory::standard());
        let roots = RootNumberTable::from_inventory(&inv);
        assert!(cuspidal_oracle(&inv, 6).passed());
        assert!(tempered(&inv, 6).unwrap().passed());
        assert!(ato(&inv, 6).unwrap().passed());
        let r = ddr(&inv, 6, Rule::Standard).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let r = ddr(&inv, 6, Rule::FlippedCaseOneMismatch).unwrap();
        assert!(!r.passed());
        let r = adams(&inv, 2, &roots).unwrap();
        assert!(r.parameters > 0);
    }
}
