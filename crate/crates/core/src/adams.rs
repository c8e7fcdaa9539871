//! Root-number tables and the Adams shift E ↦ E_α.

use std::collections::{BTreeMap, BTreeSet};

use crate::discrete::check_alpha;
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::{DualityType, Inventory, Rho};
use crate::nonvanish::{nonvanishing, star};
use crate::packets::enumerate_all;
use crate::param::{AParameter, GroupSide, JordanBlock, SignMap};
use crate::sign::Sign;
use crate::xms::{order_violation, ExtendedSegment, Xms};

/// ε(ρ ⊗ r(n)) for the (ρ, n) pairs supplied by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootNumberTable {
    entries: BTreeMap<(Rho, u32), Sign>,
}

impl RootNumberTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects the tables carried by the inventory's labels.
    pub fn from_inventory(inv: &Inventory) -> Self {
        let mut t = Self::new();
        for rho in inv.rhos() {
            for (&n, &s) in &inv.label(rho).root_numbers {
                t.insert(rho, n, s);
            }
        }
        t
    }

    pub fn insert(&mut self, rho: Rho, n: u32, s: Sign) {
        self.entries.insert((rho, n), s);
    }

    /// ε(ρ ⊗ r(n)). n = 0 gives +1 and negative n is read as |n|, so that
    /// the factors of a diagonal restriction with B < 0 cancel in pairs.
    pub fn get(&self, inv: &Inventory, rho: Rho, n: i64) -> Result<Sign> {
        if n == 0 {
            return Ok(Sign::Plus);
        }
        let m = n.unsigned_abs() as u32;
        self.entries
            .get(&(rho, m))
            .copied()
            .ok_or_else(|| Error::MissingRootNumber {
                rho: inv.id(rho).to_string(),
                n,
            })
    }

    /// Checks ε(ρ⊗r(n)) ε(ρ⊗r(n−2)) = ω_ρ(−1) for every self-dual ρ and
    /// n ≥ 3 where both entries are present. Returns the offending (ρ, n).
    pub fn ratio_violations(&self, inv: &Inventory) -> Vec<(Rho, u32)> {
        let mut out = Vec::new();
        for (&(rho, n), &s) in &self.entries {
            if n < 3 || inv.duality(rho) == DualityType::None {
                continue;
            }
            if let Some(&prev) = self.entries.get(&(rho, n - 2)) {
                if s * prev != inv.label(rho).omega_minus_one {
                    out.push((rho, n));
                }
            }
        }
        out
    }

    /// ϵ(ψ) as ∏ over blocks and 0 ≤ k < b of ε(ρ ⊗ r(2(B + k) + 1)).
    pub fn eps_psi(&self, psi: &AParameter) -> Result<Sign> {
        let inv = psi.inventory();
        let mut acc = Sign::Plus;
        for block in psi.instances() {
            for k in 0..block.b as i64 {
                let n = block.lower().twice() + 2 * k + 1;
                acc = acc * self.get(inv, block.rho, n)?;
            }
        }
        Ok(acc)
    }
}

/// ε_E(s₀) with s₀ = (−1)^{m(ρ,a,b)} on each class.
pub fn s0_pair(e: &Xms) -> Sign {
    let psi = e.parameter();
    let s0 = SignMap(
        psi.good_classes()
            .into_iter()
            .map(|b| (b, Sign::parity(psi.multiplicity(&b) as i64)))
            .collect(),
    );
    e.character()
        .pair(&s0)
        .expect("ε_E and s₀ share the domain I⁺(ψ_E)")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdamsShift {
    pub xms: Xms,
    pub central_sign: Sign,
}

/// E_α on the odd-orthogonal side: η flipped on every triv segment and
/// ([(α−1)/2, −(α−1)/2], l_α, +) placed below them.
pub fn shift_alpha(e: &Xms, alpha: i64, roots: &RootNumberTable) -> Result<AdamsShift> {
    let inv = e.inventory().clone();
    let triv = inv
        .trivial()
        .ok_or_else(|| Error::pre("inventory has no trivial label"))?;
    check_alpha(alpha, e.dimension())?;
    let central = s0_pair(e) * roots.eps_psi(&e.parameter())?;
    let half = alpha / 2;
    let l_alpha = if central == Sign::Minus {
        half
    } else {
        half - 1
    };
    let big = ExtendedSegment::new(
        HalfInteger::from_twice(alpha - 1),
        HalfInteger::from_twice(1 - alpha),
        l_alpha as u32,
        Sign::Plus,
    );
    let mut row = vec![big];
    row.extend(
        e.row(triv)
            .iter()
            .map(|s| ExtendedSegment { eta: -s.eta, ..*s }),
    );
    let coords: Vec<_> = row.iter().map(|s| (s.upper, s.lower)).collect();
    if let Some(reason) = order_violation(&coords) {
        return Err(Error::pre(format!(
            "existing triv order is not compatible with the shift: {}",
            reason
        )));
    }
    let mut rows = e.rows().clone();
    rows.insert(triv, row);
    let xms = Xms::new(inv, GroupSide::OddOrthogonal, rows)?;
    Ok(AdamsShift {
        xms,
        central_sign: central,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftReport {
    pub members: usize,
    pub dimension_failures: Vec<String>,
    pub character_failures: Vec<String>,
    pub collisions: Vec<String>,
    pub vanishing: Vec<String>,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.dimension_failures.is_empty()
            && self.character_failures.is_empty()
            && self.collisions.is_empty()
            && self.vanishing.is_empty()
    }
}

/// Runs the Adams shift over the whole good-parity packet of ψ.
pub fn packet_shift_check(
    psi: &AParameter,
    alpha: i64,
    roots: &RootNumberTable,
) -> Result<ShiftReport> {
    let inv = psi.inventory();
    let triv = inv
        .trivial()
        .ok_or_else(|| Error::pre("inventory has no trivial label"))?;
    check_alpha(alpha, psi.dimension())?;
    let packet = enumerate_all(psi)?;
    let expected = psi
        .plus([(JordanBlock::new(triv, 1, alpha as u32), 1)])?
        .with_side(GroupSide::OddOrthogonal);
    let mut report = ShiftReport::default();
    let mut images = BTreeSet::new();
    for e in packet.members.values().flatten() {
        report.members += 1;
        let shifted = shift_alpha(e, alpha, roots)?;
        let (psi_a, eps_a) = shifted.xms.enhanced();
        if psi_a != expected {
            report
                .dimension_failures
                .push(format!("{} -> {}", e.display(), psi_a.display()));
        }
        for (b, s) in e.character().iter() {
            if b.rho != triv && eps_a.get(b) != Some(*s) {
                report
                    .character_failures
                    .push(format!("{} at {}", e.display(), b.label(inv)));
            }
        }
        if !images.insert(shifted.xms.canonical()) {
            report.collisions.push(format!("{} collides", e.display()));
        }
        if !nonvanishing(&shifted.xms)? {
            let why = if star(&shifted.xms) {
                "adjacent"
            } else {
                "star"
            };
            report.vanishing.push(format!(
                "{} -> {} ({})",
                e.display(),
                shifted.xms.display(),
                why
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::tests::{blk, param, std_inv};
    use crate::xms::tests::{seg, xms};
    use proptest::prelude::*;

    #[test]
    fn eps_psi_examples() {
        let inv = std_inv();
        let t = inv.lookup("triv").unwrap();
        let q = inv.lookup("rhoQ").unwrap();
        let mut roots = RootNumberTable::new();
        roots.insert(t, 2, Sign::Minus);
        roots.insert(q, 2, Sign::Minus);
        let psi = param(&inv, &[("triv", 2, 1, 1)]).unwrap();
        assert_eq!(roots.eps_psi(&psi), Ok(Sign::Minus));
        let psi = param(&inv, &[("rhoQ", 1, 2, 1), ("triv", 2, 1, 1)]).unwrap();
        assert_eq!(roots.eps_psi(&psi), Ok(Sign::Plus));
        assert_eq!(roots.eps_psi(&param(&inv, &[]).unwrap()), Ok(Sign::Plus));
        let psi = param(&inv, &[("triv", 4, 1, 1)]).unwrap();
        assert!(matches!(
            roots.eps_psi(&psi),
            Err(Error::MissingRootNumber { .. })
        ));
    }

    #[test]
    fn ratio_validator() {
        let inv = std_inv();
        let t = inv.lookup("triv").unwrap();
        let mut roots = RootNumberTable::from_inventory(&inv);
        assert!(roots.ratio_violations(&inv).is_empty());
        roots.insert(t, 5, Sign::Minus);
        assert_eq!(roots.ratio_violations(&inv), vec![(t, 5), (t, 7)]);
    }

    #[test]
    fn s0_examples() {
        let inv = std_inv();
        assert_eq!(
            s0_pair(&xms(&inv, &[("triv", vec![seg(1, 1, 0, 1)])]).unwrap()),
            Sign::Plus
        );
        assert_eq!(
            s0_pair(&xms(&inv, &[("triv", vec![seg(1, -1, 0, 1)])]).unwrap()),
            Sign::Minus
        );
        let doubled = xms(&inv, &[("triv", vec![seg(1, -1, 0, 1), seg(1, -1, 0, 1)])]).unwrap();
        assert_eq!(s0_pair(&doubled), Sign::Plus);
    }

    #[test]
    fn shift_alpha_examples() {
        let inv = std_inv();
        let t = inv.lookup("triv").unwrap();
        let e = xms(&inv, &[("triv", vec![seg(1, 1, 0, 1)])]).unwrap();
        let roots = RootNumberTable::from_inventory(&inv);
        let out = shift_alpha(&e, 4, &roots).unwrap();
        assert_eq!(out.xms.row(t), &[seg(3, -3, 1, 1), seg(1, 1, 0, -1)]);
        assert_eq!(out.central_sign, Sign::Plus);
        assert_eq!(out.xms.side(), GroupSide::OddOrthogonal);

        let mut flipped = roots.clone();
        flipped.insert(t, 2, Sign::Minus);
        let out = shift_alpha(&e, 4, &flipped).unwrap();
        assert_eq!(out.xms.row(t)[0].l, 2);
        assert_eq!(out.central_sign, Sign::Minus);

        let empty = Xms::empty(inv.clone(), GroupSide::Metaplectic);
        let out = shift_alpha(&empty, 4, &roots).unwrap();
        assert_eq!(out.xms.row(t), &[seg(3, -3, 1, 1)]);

        assert!(shift_alpha(&e, 2, &roots).is_err());
        assert!(shift_alpha(&e, 5, &roots).is_err());
    }

    #[test]
    fn packet_shift_examples() {
        let inv = std_inv();
        let roots = RootNumberTable::from_inventory(&inv);
        let psi = param(&inv, &[("triv", 1, 2, 1)]).unwrap();
        let r = packet_shift_check(&psi, 6, &roots).unwrap();
        assert_eq!(r.members, 2);
        assert!(r.passed(), "{:?}", r);
        let r = packet_shift_check(&param(&inv, &[]).unwrap(), 2, &roots).unwrap();
        assert_eq!(r.members, 1);
        let psi = param(&inv, &[("rhoS", 1, 1, 1)]).unwrap();
        let r = packet_shift_check(&psi, 4, &roots).unwrap();
        assert!(r.character_failures.is_empty());
        let _ = blk(&inv, "triv", 1, 1);
    }

    proptest! {
        #[test]
        fn eps_psi_is_multiplicative(
            x in prop::collection::vec((0usize..3, 1u32..5, 1u32..5), 0..3),
            y in prop::collection::vec((0usize..3, 1u32..5, 1u32..5), 0..3),
        ) {
            let inv = std_inv();
            let ids = ["triv", "rhoQ", "rhoS"];
            let mut roots = RootNumberTable::new();
            for r in inv.rhos() {
                for n in 1..12 {
                    roots.insert(r, n, Sign::parity((n * n / 3 + r.0 as u32) as i64));
                }
            }
            let mk = |v: &[(usize, u32, u32)]| {
                AParameter::new(inv.clone(), GroupSide::Metaplectic,
                    v.iter().map(|&(i, a, b)| (blk(&inv, ids[i], a, b), 2)))
            };
            if let (Ok(p), Ok(q)) = (mk(&x), mk(&y)) {
                let both = p.plus(q.blocks().iter().map(|(b, &m)| (*b, m))).unwrap();
                prop_assert_eq!(
                    roots.eps_psi(&both).unwrap(),
                    roots.eps_psi(&p).unwrap() * roots.eps_psi(&q).unwrap()
                );
            }
        }
    }
}
