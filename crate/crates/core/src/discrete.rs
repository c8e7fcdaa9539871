//! Discrete bounded L-parameters: the a/b bounds, the cuspidality test,
//! partial Jacquet modules at the level of parameters, first occurrence and
//! the discrete theta shift.

use std::sync::Arc;

use crate::adams::RootNumberTable;
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::{DualityType, Inventory, Rho};
use crate::param::{AParameter, GroupSide, JordanBlock, SignMap};
use crate::sign::Sign;

/// An L-parameter (all b = 1) with a character on its Jordan blocks.
/// Outputs of [`DiscreteParam::jac`] may carry multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteParam {
    pub phi: AParameter,
    pub eps: SignMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoBounds {
    pub b_bound: i64,
    /// `None` stands for ∞.
    pub a_bound: Option<u32>,
}

impl DiscreteParam {
    pub fn new(phi: AParameter, eps: SignMap) -> Result<DiscreteParam> {
        if let Some(b) = phi.blocks().keys().find(|b| b.b != 1) {
            return Err(Error::InvalidBlock(
                b.label(phi.inventory()),
                "L-parameters have b = 1".into(),
            ));
        }
        if !phi.is_good_parity() {
            return Err(Error::pre("L-parameter is not of good parity"));
        }
        phi.check_character(&eps)?;
        Ok(DiscreteParam { phi, eps })
    }

    /// Builds from (label, a, ε) triples.
    pub fn from_pairs(
        inventory: Arc<Inventory>,
        pairs: impl IntoIterator<Item = (Rho, u32, Sign)>,
    ) -> Result<DiscreteParam> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let phi = AParameter::new(
            inventory,
            GroupSide::Metaplectic,
            pairs
                .iter()
                .map(|&(r, a, _)| (JordanBlock::new(r, a, 1), 1)),
        )?;
        let eps = SignMap(
            pairs
                .iter()
                .map(|&(r, a, s)| (JordanBlock::new(r, a, 1), s))
                .collect(),
        );
        DiscreteParam::new(phi, eps)
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.phi.blocks().values().all(|&m| m == 1)
    }

    fn inv(&self) -> &Inventory {
        self.phi.inventory()
    }

    /// Sorted Jord_ρ(φ) as a set of integers.
    pub fn jord(&self, rho: Rho) -> Vec<u32> {
        self.phi
            .blocks()
            .keys()
            .filter(|b| b.rho == rho)
            .map(|b| b.a)
            .collect()
    }

    fn contains(&self, rho: Rho, a: u32) -> bool {
        self.phi.multiplicity(&JordanBlock::new(rho, a, 1)) > 0
    }

    fn eps_at(&self, rho: Rho, a: u32) -> Sign {
        self.eps
            .get(&JordanBlock::new(rho, a, 1))
            .expect("character is defined on every block")
    }

    /// The sign ε(ρ, 2) has to take in a cuspidal chain.
    fn cuspidal_sign_at_two(&self, rho: Rho) -> Sign {
        if self.inv().is_trivial(rho) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Conditions (1)–(3) for the single value a.
    fn chain_condition(&self, rho: Rho, a: u32) -> bool {
        if a > 2 {
            if !self.contains(rho, a - 2) {
                return false;
            }
            if self.eps_at(rho, a - 2) * self.eps_at(rho, a) != Sign::Minus {
                return false;
            }
        }
        if a == 2 && self.eps_at(rho, 2) != self.cuspidal_sign_at_two(rho) {
            return false;
        }
        true
    }

    pub fn bounds(&self, rho: Rho) -> RhoBounds {
        let jord = self.jord(rho);
        let mut b_bound = match self.inv().duality(rho) {
            DualityType::Symplectic => -1,
            _ => 0,
        };
        for &a in &jord {
            if !self.chain_condition(rho, a) {
                break;
            }
            b_bound = a as i64;
        }
        let a_bound = jord.iter().copied().find(|&a| a as i64 > b_bound);
        RhoBounds { b_bound, a_bound }
    }

    /// Cuspidality read off the three conditions directly.
    pub fn is_cuspidal(&self) -> bool {
        self.phi
            .blocks()
            .keys()
            .all(|b| self.chain_condition(b.rho, b.a))
    }

    /// The parameter-level partial Jacquet module Jac_{ρ,x}. `None` means zero.
    pub fn jac(&self, rho: Rho, x: HalfInteger) -> Option<DiscreteParam> {
        if x <= HalfInteger::ZERO {
            return None;
        }
        let top = (x.twice() + 1) as u32;
        if !self.contains(rho, top) {
            return None;
        }
        let inv = self.phi.inventory().clone();
        let top_block = JordanBlock::new(rho, top, 1);
        let top_sign = self.eps_at(rho, top);
        let mut blocks = self.phi.blocks().clone();
        let mut eps = self.eps.clone();
        let remove_top = |blocks: &mut crate::param::BlockMultiset, eps: &mut SignMap| {
            let m = blocks.get_mut(&top_block).unwrap();
            *m -= 1;
            if *m == 0 {
                blocks.remove(&top_block);
                eps.0.remove(&top_block);
            }
        };
        if x == HalfInteger::HALF {
            let wanted = if inv.is_trivial(rho) {
                Sign::Minus
            } else {
                Sign::Plus
            };
            if top_sign != wanted {
                return None;
            }
            remove_top(&mut blocks, &mut eps);
        } else {
            let below = JordanBlock::new(rho, top - 2, 1);
            if self.contains(rho, top - 2) {
                if self.eps_at(rho, top - 2) * top_sign != Sign::Plus {
                    return None;
                }
            } else {
                eps.set(below, top_sign);
            }
            remove_top(&mut blocks, &mut eps);
            *blocks.entry(below).or_insert(0) += 1;
        }
        let phi = AParameter::new(inv, self.phi.side(), blocks).ok()?;
        Some(DiscreteParam { phi, eps })
    }

    /// Whether Jac_{triv,x} vanishes for every x.
    pub fn is_triv_cuspidal(&self) -> bool {
        let Some(triv) = self.inv().trivial() else {
            return true;
        };
        self.jord(triv).iter().all(|&a| {
            self.jac(triv, HalfInteger::from_twice(a as i64 - 1))
                .is_none()
        })
    }

    /// ε(s₀) with s₀ = −1 on every block.
    pub fn eps_s0(&self) -> Sign {
        self.eps.product()
    }

    pub fn first_occurrence(&self) -> Result<i64> {
        let triv = self
            .inv()
            .trivial()
            .ok_or_else(|| Error::pre("inventory has no trivial label"))?;
        if !self.is_triv_cuspidal() {
            return Err(Error::pre("representation is not triv-cuspidal"));
        }
        let b = self.bounds(triv).b_bound;
        Ok(if self.eps_s0() == Sign::Plus {
            -b
        } else {
            b + 2
        })
    }

    /// ϵ(φ) = ∏ ε(ρ ⊗ r(a)) over the blocks of φ.
    pub fn root_number(&self, roots: &RootNumberTable) -> Result<Sign> {
        let mut acc = Sign::Plus;
        for b in self.phi.instances() {
            acc = acc * roots.get(self.inv(), b.rho, b.a as i64)?;
        }
        Ok(acc)
    }

    /// (φ_α, ε_α) on the odd-orthogonal side together with the central sign.
    pub fn theta(&self, alpha: i64, roots: &RootNumberTable) -> Result<ThetaLift> {
        let triv = self
            .inv()
            .trivial()
            .ok_or_else(|| Error::pre("inventory has no trivial label"))?;
        check_alpha(alpha, self.phi.dimension())?;
        let central = self.eps_s0() * self.root_number(roots)?;
        let extra = JordanBlock::new(triv, 1, alpha as u32);
        let phi = self
            .phi
            .plus([(extra, 1)])?
            .with_side(GroupSide::OddOrthogonal);
        let mut eps = SignMap(
            self.eps
                .iter()
                .map(|(b, &s)| (*b, if b.rho == triv { -s } else { s }))
                .collect(),
        );
        eps.set(extra, -central);
        Ok(ThetaLift {
            param: phi,
            eps,
            central_sign: central,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaLift {
    pub param: AParameter,
    pub eps: SignMap,
    pub central_sign: Sign,
}

pub(crate) fn check_alpha(alpha: i64, dim: u64) -> Result<()> {
    if alpha % 2 != 0 {
        return Err(Error::pre(format!("alpha = {} is odd", alpha)));
    }
    if alpha < dim as i64 + 2 {
        return Err(Error::pre(format!(
            "alpha = {} is below 2n + 2 = {}",
            alpha,
            dim + 2
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::tests::std_inv;
    use proptest::prelude::*;

    fn dp(inv: &Arc<Inventory>, v: &[(&str, u32, i64)]) -> DiscreteParam {
        DiscreteParam::from_pairs(
            inv.clone(),
            v.iter()
                .map(|&(id, a, s)| (inv.lookup(id).unwrap(), a, Sign::from_i64(s).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn bounds_examples() {
        let inv = std_inv();
        let s = inv.lookup("rhoS").unwrap();
        let q = inv.lookup("rhoQ").unwrap();
        let t = inv.lookup("triv").unwrap();
        let phi = dp(&inv, &[("rhoS", 1, 1), ("rhoS", 3, -1), ("rhoS", 5, 1)]);
        assert_eq!(
            phi.bounds(s),
            RhoBounds {
                b_bound: 5,
                a_bound: None
            }
        );
        let phi = dp(&inv, &[("rhoQ", 2, -1), ("rhoQ", 4, 1)]);
        assert_eq!(
            phi.bounds(q),
            RhoBounds {
                b_bound: 4,
                a_bound: None
            }
        );
        let phi = dp(&inv, &[("triv", 2, -1)]);
        assert_eq!(
            phi.bounds(t),
            RhoBounds {
                b_bound: 0,
                a_bound: Some(2)
            }
        );
        assert_eq!(
            phi.bounds(s),
            RhoBounds {
                b_bound: -1,
                a_bound: None
            }
        );
    }

    #[test]
    fn cuspidal_examples() {
        let inv = std_inv();
        assert!(dp(&inv, &[("triv", 2, 1)]).is_cuspidal());
        assert!(!dp(&inv, &[("triv", 2, -1)]).is_cuspidal());
        assert!(dp(&inv, &[("rhoQ", 2, -1), ("rhoQ", 4, 1)]).is_cuspidal());
        assert!(!dp(&inv, &[("rhoQ", 2, -1), ("rhoQ", 4, -1)]).is_cuspidal());
        assert!(!dp(&inv, &[("rhoQ", 4, 1)]).is_cuspidal());
    }

    #[test]
    fn jac_examples() {
        let inv = std_inv();
        let s = inv.lookup("rhoS").unwrap();
        let t = inv.lookup("triv").unwrap();
        let phi = dp(&inv, &[("rhoS", 3, 1), ("rhoS", 1, 1)]);
        assert!(phi.jac(s, HalfInteger::ZERO).is_none());
        let out = phi.jac(s, HalfInteger::from_int(1)).unwrap();
        assert_eq!(out.phi.multiplicity(&JordanBlock::new(s, 1, 1)), 2);
        assert_eq!(out.eps.get(&JordanBlock::new(s, 1, 1)), Some(Sign::Plus));
        assert_eq!(out.eps.len(), 1);
        assert!(!out.is_multiplicity_free());

        let phi = dp(&inv, &[("triv", 2, -1)]);
        let out = phi.jac(t, HalfInteger::HALF).unwrap();
        assert!(out.phi.is_empty() && out.eps.is_empty());
        assert!(dp(&inv, &[("triv", 2, 1)])
            .jac(t, HalfInteger::HALF)
            .is_none());

        // case (2): moves the block down and keeps its sign
        let phi = dp(&inv, &[("rhoS", 3, -1)]);
        let out = phi.jac(s, HalfInteger::from_int(1)).unwrap();
        assert_eq!(out.eps.get(&JordanBlock::new(s, 1, 1)), Some(Sign::Minus));
    }

    #[test]
    fn first_occurrence_examples() {
        let inv = std_inv();
        assert_eq!(dp(&inv, &[("triv", 2, 1)]).first_occurrence(), Ok(-2));
        assert_eq!(dp(&inv, &[("rhoS", 1, 1)]).first_occurrence(), Ok(0));
        assert!(matches!(
            dp(&inv, &[("triv", 2, -1)]).first_occurrence(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theta_examples() {
        let inv = std_inv();
        let roots = RootNumberTable::from_inventory(&inv);
        let t = inv.lookup("triv").unwrap();
        let s = inv.lookup("rhoS").unwrap();
        let extra = JordanBlock::new(t, 1, 4);

        let lift = dp(&inv, &[("rhoS", 1, 1)]).theta(4, &roots).unwrap();
        assert_eq!(lift.eps.get(&JordanBlock::new(s, 1, 1)), Some(Sign::Plus));
        assert_eq!(lift.eps.get(&extra), Some(Sign::Minus));
        assert_eq!(lift.central_sign, Sign::Plus);

        let lift = dp(&inv, &[("rhoS", 1, -1)]).theta(4, &roots).unwrap();
        assert_eq!(lift.eps.get(&JordanBlock::new(s, 1, 1)), Some(Sign::Minus));
        assert_eq!(lift.eps.get(&extra), Some(Sign::Plus));
        assert_eq!(lift.central_sign, Sign::Minus);

        let lift = dp(&inv, &[]).theta(4, &roots).unwrap();
        assert_eq!(lift.param.blocks().len(), 1);
        assert_eq!(lift.eps.get(&extra), Some(Sign::Minus));
        assert_eq!(lift.central_sign, Sign::Plus);
        assert_eq!(lift.param.side(), GroupSide::OddOrthogonal);

        assert!(dp(&inv, &[("rhoS", 1, 1)]).theta(2, &roots).is_err());
        assert!(dp(&inv, &[]).theta(3, &roots).is_err());
    }

    fn arb_discrete() -> impl Strategy<Value = DiscreteParam> {
        let inv = std_inv();
        prop::collection::btree_map((0usize..3, 1u32..8), any::<bool>(), 0..5).prop_filter_map(
            "good parity within bound",
            move |m| {
                let ids = ["triv", "rhoQ", "rhoS"];
                let pairs: Vec<_> = m
                    .iter()
                    .map(|(&(i, a), &neg)| {
                        let s = if neg { Sign::Minus } else { Sign::Plus };
                        (inv.lookup(ids[i]).unwrap(), a, s)
                    })
                    .filter(|&(r, a, _)| JordanBlock::new(r, a, 1).is_good_parity(&inv))
                    .collect();
                DiscreteParam::from_pairs(inv.clone(), pairs).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn cuspidal_iff_every_jac_vanishes(phi in arb_discrete()) {
            let inv = phi.phi.inventory().clone();
            let max_a = phi.phi.blocks().keys().map(|b| b.a).max().unwrap_or(0) as i64;
            let all_zero = inv.rhos().all(|r| {
                (0..max_a).all(|x2| phi.jac(r, HalfInteger::from_twice(x2)).is_none())
            });
            prop_assert_eq!(phi.is_cuspidal(), all_zero);
            let bounded = inv.rhos().all(|r| phi.bounds(r).a_bound.is_none());
            prop_assert_eq!(phi.is_cuspidal(), bounded);
        }

        #[test]
        fn jac_lowers_dimension(phi in arb_discrete(), x2 in 0i64..8) {
            let inv = phi.phi.inventory().clone();
            for r in inv.rhos() {
                if let Some(out) = phi.jac(r, HalfInteger::from_twice(x2)) {
                    prop_assert_eq!(
                        out.phi.dimension() + 2 * inv.dim(r) as u64,
                        phi.phi.dimension()
                    );
                    prop_assert!(out.phi.check_character(&out.eps).is_ok());
                }
            }
        }

        #[test]
        fn theta_dimension_law(phi in arb_discrete(), extra in 0i64..3) {
            let roots = RootNumberTable::from_inventory(phi.phi.inventory());
            let alpha = phi.phi.dimension() as i64 + 2 + 2 * extra;
            let lift = phi.theta(alpha, &roots).unwrap();
            prop_assert_eq!(lift.param.dimension(), phi.phi.dimension() + alpha as u64);
            let triv = phi.phi.inventory().trivial().unwrap();
            for (b, s) in phi.eps.iter() {
                if b.rho != triv {
                    prop_assert_eq!(lift.eps.get(b), Some(*s));
                }
            }
        }
    }
}
