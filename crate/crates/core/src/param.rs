//! A-parameters as multisets of Jordan blocks, their classification into
//! good-parity, bad-parity and dual-paired classes, and the component-group
//! combinatorics on the good-parity classes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::{DualityType, Inventory, Rho};
use crate::sign::Sign;

/// One irreducible summand ρ ⊗ r(a) ⊗ r(b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanBlock {
    pub rho: Rho,
    pub a: u32,
    pub b: u32,
}

impl JordanBlock {
    pub fn new(rho: Rho, a: u32, b: u32) -> Self {
        JordanBlock { rho, a, b }
    }

    /// A = (a + b)/2 − 1.
    pub fn upper(&self) -> HalfInteger {
        HalfInteger::from_twice(self.a as i64 + self.b as i64 - 2)
    }

    /// B = (a − b)/2.
    pub fn lower(&self) -> HalfInteger {
        HalfInteger::from_twice(self.a as i64 - self.b as i64)
    }

    pub fn dim(&self, inv: &Inventory) -> u64 {
        inv.dim(self.rho) as u64 * self.a as u64 * self.b as u64
    }

    pub fn is_good_parity(&self, inv: &Inventory) -> bool {
        match inv.duality(self.rho) {
            DualityType::Symplectic => (self.a + self.b).is_multiple_of(2),
            DualityType::Orthogonal => (self.a + self.b) % 2 == 1,
            DualityType::None => false,
        }
    }

    pub fn dual(&self, inv: &Inventory) -> JordanBlock {
        JordanBlock {
            rho: inv.dual(self.rho),
            ..*self
        }
    }

    /// The `rho:a:b` key used in files and messages.
    pub fn label(&self, inv: &Inventory) -> String {
        format!("{}:{}:{}", inv.id(self.rho), self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSide {
    Metaplectic,
    OddOrthogonal,
}

impl GroupSide {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupSide::Metaplectic => "metaplectic",
            GroupSide::OddOrthogonal => "odd-orthogonal",
        }
    }
}

/// A multiset of Jordan blocks with multiplicities.
pub type BlockMultiset = BTreeMap<JordanBlock, u32>;

#[derive(Clone)]
pub struct AParameter {
    inventory: Arc<Inventory>,
    side: GroupSide,
    blocks: BlockMultiset,
}

impl fmt::Debug for AParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AParameter({:?}, {})", self.side, self.display())
    }
}

impl PartialEq for AParameter {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.blocks == other.blocks
    }
}

impl Eq for AParameter {}

impl AParameter {
    /// Builds and validates a parameter. Repeated blocks are merged by
    /// adding their multiplicities.
    pub fn new(
        inventory: Arc<Inventory>,
        side: GroupSide,
        blocks: impl IntoIterator<Item = (JordanBlock, u32)>,
    ) -> Result<AParameter> {
        let mut merged = BlockMultiset::new();
        for (block, mult) in blocks {
            if (block.rho.0 as usize) >= inventory.len() {
                return Err(Error::UnknownRho(format!("#{}", block.rho.0)));
            }
            if block.a == 0 || block.b == 0 {
                return Err(Error::InvalidBlock(
                    block.label(&inventory),
                    "a and b must be positive".into(),
                ));
            }
            if mult == 0 {
                return Err(Error::InvalidBlock(
                    block.label(&inventory),
                    "multiplicity must be positive".into(),
                ));
            }
            *merged.entry(block).or_insert(0) += mult;
        }
        let psi = AParameter {
            inventory,
            side,
            blocks: merged,
        };
        psi.validate()?;
        Ok(psi)
    }

    pub fn empty(inventory: Arc<Inventory>, side: GroupSide) -> AParameter {
        AParameter {
            inventory,
            side,
            blocks: BlockMultiset::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let inv = &*self.inventory;
        let dim = self.dimension();
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        for (block, &mult) in &self.blocks {
            match inv.duality(block.rho) {
                DualityType::None => {
                    let dual = block.dual(inv);
                    if self.blocks.get(&dual) != Some(&mult) {
                        return Err(Error::UnpairedBlock(block.label(inv)));
                    }
                }
                _ if !block.is_good_parity(inv) && mult % 2 != 0 => {
                    return Err(Error::OddOrthogonalMultiplicity(block.label(inv)));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn inventory(&self) -> &Arc<Inventory> {
        &self.inventory
    }

    pub fn side(&self) -> GroupSide {
        self.side
    }

    pub fn with_side(&self, side: GroupSide) -> AParameter {
        AParameter {
            side,
            ..self.clone()
        }
    }

    pub fn blocks(&self) -> &BlockMultiset {
        &self.blocks
    }

    pub fn multiplicity(&self, block: &JordanBlock) -> u32 {
        self.blocks.get(block).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total dimension 2n = Σ mult · d_ρ · a · b.
    pub fn dimension(&self) -> u64 {
        self.blocks
            .iter()
            .map(|(b, &m)| m as u64 * b.dim(&self.inventory))
            .sum()
    }

    pub fn n(&self) -> u64 {
        self.dimension() / 2
    }

    /// Blocks repeated according to multiplicity, in key order.
    pub fn instances(&self) -> impl Iterator<Item = JordanBlock> + '_ {
        self.blocks
            .iter()
            .flat_map(|(b, &m)| std::iter::repeat_n(*b, m as usize))
    }

    /// Jordan blocks for one label, with multiplicity.
    pub fn jord_rho(&self, rho: Rho) -> Vec<JordanBlock> {
        self.instances().filter(|b| b.rho == rho).collect()
    }

    /// The direct sum with another multiset of blocks.
    pub fn plus(&self, extra: impl IntoIterator<Item = (JordanBlock, u32)>) -> Result<AParameter> {
        AParameter::new(
            self.inventory.clone(),
            self.side,
            self.blocks.iter().map(|(b, &m)| (*b, m)).chain(extra),
        )
    }

    /// Good-parity classes (I⁺) in key order.
    pub fn good_classes(&self) -> Vec<JordanBlock> {
        self.blocks
            .keys()
            .filter(|b| b.is_good_parity(&self.inventory))
            .copied()
            .collect()
    }

    pub fn classify(&self) -> Classification {
        let inv = &*self.inventory;
        let mut c = Classification::default_flags();
        for (block, &mult) in &self.blocks {
            match inv.duality(block.rho) {
                DualityType::None => {
                    let dual = block.dual(inv);
                    if block.rho < dual.rho {
                        c.paired.push((*block, dual));
                    }
                }
                _ if block.is_good_parity(inv) => c.good.push(*block),
                _ => c.bad.push(*block),
            }
            if block.b != 1 {
                c.tempered = false;
            }
            if mult != 1 {
                c.multiplicity_free = false;
            }
        }
        c.good_parity = c.bad.is_empty() && c.paired.is_empty();
        c.discrete = c.good_parity && c.multiplicity_free;
        c.nonneg_ddr = c.good_parity && self.is_nonneg_ddr_chain();
        c
    }

    fn is_nonneg_ddr_chain(&self) -> bool {
        let mut rows: BTreeMap<Rho, Vec<JordanBlock>> = BTreeMap::new();
        for block in self.instances() {
            rows.entry(block.rho).or_default().push(block);
        }
        rows.values_mut().all(|row| {
            row.sort_by_key(|b| (b.lower(), b.upper()));
            row[0].lower() >= HalfInteger::ZERO
                && row.windows(2).all(|w| w[0].upper() < w[1].lower())
        })
    }

    pub fn is_good_parity(&self) -> bool {
        self.blocks
            .keys()
            .all(|b| b.is_good_parity(&self.inventory))
    }

    /// ψ = ψ_np^∨ ⊕ ψ_gp ⊕ ψ_np.
    pub fn decompose(&self) -> (AParameter, BlockMultiset) {
        let inv = &*self.inventory;
        let c = self.classify();
        let gp = AParameter {
            inventory: self.inventory.clone(),
            side: self.side,
            blocks: c.good.iter().map(|b| (*b, self.blocks[b])).collect(),
        };
        let mut np = BlockMultiset::new();
        for b in &c.bad {
            np.insert(*b, self.blocks[b] / 2);
        }
        for (b, _) in &c.paired {
            np.insert(*b, self.blocks[b]);
        }
        debug_assert!(np.keys().all(|b| !b.is_good_parity(inv)));
        (gp, np)
    }

    /// Inverse of [`AParameter::decompose`].
    pub fn reassemble(gp: &AParameter, np: &BlockMultiset) -> Result<AParameter> {
        let inv = gp.inventory.clone();
        let extra = np
            .iter()
            .flat_map(|(b, &m)| [(*b, m), (b.dual(&inv), m)])
            .collect::<Vec<_>>();
        gp.plus(extra)
    }

    /// s_ψ: −1 exactly on the good-parity classes with even b.
    pub fn s_psi(&self) -> SignMap {
        SignMap(
            self.good_classes()
                .into_iter()
                .map(|b| (b, Sign::parity(b.b as i64 + 1)))
                .collect(),
        )
    }

    /// Every character of the component group, in a fixed order.
    pub fn all_characters(&self) -> Vec<SignMap> {
        let classes = self.good_classes();
        let k = classes.len();
        assert!(k < 31, "component group too large to enumerate");
        (0u32..(1 << k))
            .map(|mask| {
                SignMap(
                    classes
                        .iter()
                        .enumerate()
                        .map(|(i, b)| {
                            let s = if mask >> (k - 1 - i) & 1 == 1 {
                                Sign::Minus
                            } else {
                                Sign::Plus
                            };
                            (*b, s)
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// Checks that a sign map lives exactly on I⁺(ψ).
    pub fn check_character(&self, eps: &SignMap) -> Result<()> {
        let inv = &*self.inventory;
        for b in self.good_classes() {
            if !eps.0.contains_key(&b) {
                return Err(Error::MissingCharacterValue(b.label(inv)));
            }
        }
        for b in eps.0.keys() {
            if !self.blocks.contains_key(b) || !b.is_good_parity(inv) {
                return Err(Error::ExtraCharacterValue(b.label(inv)));
            }
        }
        Ok(())
    }

    pub fn tau_np_shape(np: &BlockMultiset) -> Vec<SegmentMatrix> {
        np.iter()
            .flat_map(|(b, &m)| std::iter::repeat_n(SegmentMatrix::of(b), m as usize))
            .collect()
    }

    pub fn display(&self) -> ParamDisplay<'_> {
        ParamDisplay(self)
    }
}

pub struct ParamDisplay<'a>(&'a AParameter);

impl fmt::Display for ParamDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let psi = self.0;
        if psi.blocks.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (b, &m) in &psi.blocks {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{}*", m)?;
            }
            write!(f, "({},{},{})", psi.inventory.id(b.rho), b.a, b.b)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub good: Vec<JordanBlock>,
    pub bad: Vec<JordanBlock>,
    /// Each J ↔ J′ pair once, keyed by the member with the smaller label.
    pub paired: Vec<(JordanBlock, JordanBlock)>,
    pub good_parity: bool,
    pub discrete: bool,
    pub tempered: bool,
    pub multiplicity_free: bool,
    pub nonneg_ddr: bool,
}

impl Classification {
    fn default_flags() -> Self {
        Classification {
            tempered: true,
            multiplicity_free: true,
            ..Default::default()
        }
    }
}

/// Corner data of the generalized segment attached to a bad-parity block:
/// rows run from (a−b)/2 down to −(a+b)/2 + 1, columns from left to right
/// increase by one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentMatrix {
    pub block: JordanBlock,
    pub top_left: HalfInteger,
    pub top_right: HalfInteger,
    pub bottom_left: HalfInteger,
    pub bottom_right: HalfInteger,
    pub rows: u32,
    pub cols: u32,
}

impl SegmentMatrix {
    pub fn of(b: &JordanBlock) -> SegmentMatrix {
        let (a, bb) = (b.a as i64, b.b as i64);
        SegmentMatrix {
            block: *b,
            top_left: HalfInteger::from_twice(a - bb),
            top_right: HalfInteger::from_twice(a + bb - 2),
            bottom_left: HalfInteger::from_twice(-(a + bb) + 2),
            bottom_right: HalfInteger::from_twice(-(a - bb)),
            rows: b.a,
            cols: b.b,
        }
    }
}

/// A ±1-valued function on block classes. Used both for elements of the
/// component group and for its characters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignMap(pub BTreeMap<JordanBlock, Sign>);

impl SignMap {
    pub fn new() -> Self {
        SignMap(BTreeMap::new())
    }

    pub fn constant(classes: impl IntoIterator<Item = JordanBlock>, s: Sign) -> Self {
        SignMap(classes.into_iter().map(|b| (b, s)).collect())
    }

    pub fn get(&self, b: &JordanBlock) -> Option<Sign> {
        self.0.get(b).copied()
    }

    pub fn set(&mut self, b: JordanBlock, s: Sign) {
        self.0.insert(b, s);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&JordanBlock, &Sign)> {
        self.0.iter()
    }

    fn same_domain(&self, other: &SignMap) -> Result<()> {
        if self.0.len() == other.0.len() && self.0.keys().eq(other.0.keys()) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// ⟨ε, s⟩ = ∏ ε_i ∗ s_i where ε_i ∗ s_i = −1 iff both are −1.
    pub fn pair(&self, s: &SignMap) -> Result<Sign> {
        self.same_domain(s)?;
        Ok(self
            .0
            .values()
            .zip(s.0.values())
            .map(|(e, v)| {
                if e.is_minus() && v.is_minus() {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .product())
    }

    /// Pointwise product.
    pub fn times(&self, other: &SignMap) -> Result<SignMap> {
        self.same_domain(other)?;
        Ok(SignMap(
            self.0
                .iter()
                .zip(other.0.values())
                .map(|((b, x), y)| (*b, *x * *y))
                .collect(),
        ))
    }

    pub fn product(&self) -> Sign {
        self.0.values().copied().product()
    }
}
