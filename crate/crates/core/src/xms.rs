//! Extended segments and extended multi-segments.
//!
//! Rows are stored lowest first: index 0 is the minimal element of the
//! admissible order on I_ρ and the last index is the maximal one.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::inventory::{DualityType, Inventory, Rho};
use crate::param::{AParameter, GroupSide, JordanBlock, SignMap};
use crate::sign::Sign;

/// ([A, B]_ρ, l, η).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedSegment {
    pub upper: HalfInteger,
    pub lower: HalfInteger,
    pub l: u32,
    pub eta: Sign,
}

impl ExtendedSegment {
    pub fn new(upper: HalfInteger, lower: HalfInteger, l: u32, eta: Sign) -> Self {
        ExtendedSegment {
            upper,
            lower,
            l,
            eta,
        }
    }

    /// Shorthand taking doubled coordinates.
    pub fn twice(a2: i64, b2: i64, l: u32, eta: Sign) -> Self {
        Self::new(
            HalfInteger::from_twice(a2),
            HalfInteger::from_twice(b2),
            l,
            eta,
        )
    }

    pub fn from_block(block: &JordanBlock, l: u32, eta: Sign) -> Self {
        Self::new(block.upper(), block.lower(), l, eta)
    }

    /// a = A + B + 1.
    pub fn a(&self) -> i64 {
        (self.upper.twice() + self.lower.twice()) / 2 + 1
    }

    /// b = A − B + 1.
    pub fn b(&self) -> i64 {
        (self.upper.twice() - self.lower.twice()) / 2 + 1
    }

    /// A − B as an integer.
    pub fn width(&self) -> i64 {
        (self.upper.twice() - self.lower.twice()) / 2
    }

    pub fn block(&self, rho: Rho) -> JordanBlock {
        JordanBlock::new(rho, self.a() as u32, self.b() as u32)
    }

    pub fn same_interval(&self, other: &ExtendedSegment) -> bool {
        self.upper == other.upper && self.lower == other.lower
    }

    /// [A, B] ⊇ [A′, B′].
    pub fn contains(&self, other: &ExtendedSegment) -> bool {
        self.upper >= other.upper && self.lower <= other.lower
    }

    pub fn translate(&self, t: i64) -> ExtendedSegment {
        ExtendedSegment {
            upper: self.upper.add_int(t),
            lower: self.lower.add_int(t),
            ..*self
        }
    }

    /// η normalized to + when l = b/2, where it carries no information.
    pub fn canonical(&self) -> ExtendedSegment {
        if 2 * self.l as i64 == self.b() {
            ExtendedSegment {
                eta: Sign::Plus,
                ..*self
            }
        } else {
            *self
        }
    }

    /// (−1)^{⌊b/2⌋ + l} η^b.
    pub fn enhanced_sign(&self) -> Sign {
        let b = self.b();
        Sign::parity(b / 2 + self.l as i64) * self.eta.pow(b)
    }

    fn check(&self, duality: DualityType, path: &str) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidSegment {
                path: path.to_string(),
                reason: reason.to_string(),
            })
        };
        let diff = self.upper.twice() - self.lower.twice();
        if diff < 0 || diff % 2 != 0 {
            return bad("A - B must be a non-negative integer");
        }
        if self.upper.twice() + self.lower.twice() < 0 {
            return bad("A + B must be non-negative");
        }
        if 2 * self.l as i64 > self.b() {
            return bad(&format!("l = {} exceeds b/2 with b = {}", self.l, self.b()));
        }
        match duality {
            DualityType::Symplectic if !self.upper.is_integer() => {
                bad("symplectic rows need integral A")
            }
            DualityType::Orthogonal if self.upper.is_integer() => {
                bad("orthogonal rows need A in 1/2 + Z")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ExtendedSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "([{},{}],{},{})",
            self.upper, self.lower, self.l, self.eta
        )
    }
}

/// Checks the admissibility conditions on a row of intervals listed lowest
/// first. Returns a description of the first violation.
pub fn order_violation(row: &[(HalfInteger, HalfInteger)]) -> Option<String> {
    let any_negative = row.iter().any(|&(_, b)| b < HalfInteger::ZERO);
    for (i, &(ai, bi)) in row.iter().enumerate() {
        for (j, &(aj, bj)) in row[..i].iter().enumerate() {
            if aj > ai && bj > bi {
                return Some(format!("position {} dominates later position {}", j, i));
            }
            if any_negative && bj > bi {
                return Some(format!(
                    "row has negative B but B at position {} exceeds B at later position {}",
                    j, i
                ));
            }
        }
    }
    None
}

/// An extended multi-segment: one ordered row per self-dual label.
#[derive(Clone)]
pub struct Xms {
    inventory: Arc<Inventory>,
    side: GroupSide,
    rows: BTreeMap<Rho, Vec<ExtendedSegment>>,
}

impl fmt::Debug for Xms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Xms({:?}, {})", self.side, self.display())
    }
}

impl PartialEq for Xms {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.rows == other.rows
    }
}

impl Eq for Xms {}

impl PartialOrd for Xms {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Xms {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.side, &self.rows).cmp(&(other.side, &other.rows))
    }
}

impl std::hash::Hash for Xms {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.side.hash(state);
        self.rows.hash(state);
    }
}

impl Xms {
    pub fn new(
        inventory: Arc<Inventory>,
        side: GroupSide,
        rows: impl IntoIterator<Item = (Rho, Vec<ExtendedSegment>)>,
    ) -> Result<Xms> {
        let mut map: BTreeMap<Rho, Vec<ExtendedSegment>> = BTreeMap::new();
        for (rho, row) in rows {
            if (rho.0 as usize) >= inventory.len() {
                return Err(Error::UnknownRho(format!("#{}", rho.0)));
            }
            map.entry(rho).or_default().extend(row);
        }
        map.retain(|_, row| !row.is_empty());
        let e = Xms {
            inventory,
            side,
            rows: map,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn empty(inventory: Arc<Inventory>, side: GroupSide) -> Xms {
        Xms {
            inventory,
            side,
            rows: BTreeMap::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let inv = &*self.inventory;
        for (&rho, row) in &self.rows {
            let id = inv.id(rho);
            let duality = inv.duality(rho);
            if duality == DualityType::None {
                return Err(Error::NotSelfDual(id.to_string()));
            }
            for (i, seg) in row.iter().enumerate() {
                seg.check(duality, &format!("xms.segments.{}[{}]", id, i))?;
            }
            let coords: Vec<_> = row.iter().map(|s| (s.upper, s.lower)).collect();
            if let Some(reason) = order_violation(&coords) {
                return Err(Error::InadmissibleOrder {
                    rho: id.to_string(),
                    reason,
                });
            }
        }
        let dim = self.dimension();
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        Ok(())
    }

    pub fn inventory(&self) -> &Arc<Inventory> {
        &self.inventory
    }

    pub fn side(&self) -> GroupSide {
        self.side
    }

    pub fn with_side(&self, side: GroupSide) -> Xms {
        Xms {
            side,
            ..self.clone()
        }
    }

    pub fn rows(&self) -> &BTreeMap<Rho, Vec<ExtendedSegment>> {
        &self.rows
    }

    pub fn row(&self, rho: Rho) -> &[ExtendedSegment] {
        self.rows.get(&rho).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }

    /// Replaces one row and revalidates.
    pub fn with_row(&self, rho: Rho, row: Vec<ExtendedSegment>) -> Result<Xms> {
        let mut rows = self.rows.clone();
        rows.insert(rho, row);
        Xms::new(self.inventory.clone(), self.side, rows)
    }

    /// Replaces a row without revalidating. Callers guarantee validity.
    pub(crate) fn with_row_unchecked(&self, rho: Rho, row: Vec<ExtendedSegment>) -> Xms {
        let mut rows = self.rows.clone();
        if row.is_empty() {
            rows.remove(&rho);
        } else {
            rows.insert(rho, row);
        }
        Xms {
            inventory: self.inventory.clone(),
            side: self.side,
            rows,
        }
    }

    pub fn dimension(&self) -> u64 {
        self.rows
            .iter()
            .map(|(&rho, row)| {
                let d = self.inventory.dim(rho) as u64;
                row.iter().map(|s| d * (s.a() * s.b()) as u64).sum::<u64>()
            })
            .sum()
    }

    /// ψ_E.
    pub fn parameter(&self) -> AParameter {
        AParameter::new(
            self.inventory.clone(),
            self.side,
            self.rows
                .iter()
                .flat_map(|(&rho, row)| row.iter().map(move |s| (s.block(rho), 1))),
        )
        .expect("segments of a valid XMS form a valid good-parity parameter")
    }

    /// ε_E.
    pub fn character(&self) -> SignMap {
        let mut eps = SignMap::new();
        for (&rho, row) in &self.rows {
            for s in row {
                let block = s.block(rho);
                let prev = eps.get(&block).unwrap_or(Sign::Plus);
                eps.set(block, prev * s.enhanced_sign());
            }
        }
        eps
    }

    pub fn enhanced(&self) -> (AParameter, SignMap) {
        (self.parameter(), self.character())
    }

    pub fn canonical(&self) -> Xms {
        Xms {
            rows: self
                .rows
                .iter()
                .map(|(&r, row)| (r, row.iter().map(ExtendedSegment::canonical).collect()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn equivalent(&self, other: &Xms) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.rows
            .values()
            .flatten()
            .all(|s| s.lower >= HalfInteger::ZERO)
    }

    /// Smallest integer t ≥ 0 with B + t ≥ 0 for every segment.
    pub fn minimal_shift(&self) -> i64 {
        self.rows
            .values()
            .flatten()
            .map(|s| s.lower.lift_to_nonnegative())
            .max()
            .unwrap_or(0)
    }

    /// E_t: every segment translated by the same t.
    pub fn shift_uniform(&self, t: i64) -> Result<Xms> {
        Xms::new(
            self.inventory.clone(),
            self.side,
            self.rows
                .iter()
                .map(|(&r, row)| (r, row.iter().map(|s| s.translate(t)).collect())),
        )
    }

    /// Translates each segment by its own amount. Missing rows stay fixed.
    pub fn translate(&self, t: &BTreeMap<Rho, Vec<i64>>) -> Result<Xms> {
        let mut rows = BTreeMap::new();
        for (&rho, row) in &self.rows {
            let shifts = t.get(&rho);
            if let Some(v) = shifts {
                if v.len() != row.len() {
                    return Err(Error::pre(format!(
                        "shift vector for `{}` has {} entries, row has {}",
                        self.inventory.id(rho),
                        v.len(),
                        row.len()
                    )));
                }
            }
            let moved = row
                .iter()
                .enumerate()
                .map(|(i, s)| s.translate(shifts.map_or(0, |v| v[i])))
                .collect();
            rows.insert(rho, moved);
        }
        Xms::new(self.inventory.clone(), self.side, rows)
    }

    /// The translation used to build a non-negative DDR family: the shifted
    /// rows must satisfy 0 ≤ B₁ + t₁ ≤ A₁ + t₁ < B₂ + t₂ ≤ ….
    pub fn shift(&self, t: &BTreeMap<Rho, Vec<i64>>) -> Result<Xms> {
        if t.values().flatten().any(|&x| x < 0) {
            return Err(Error::pre("shift amounts must be non-negative"));
        }
        let out = self.translate(t)?;
        for (&rho, row) in &out.rows {
            let id = self.inventory.id(rho);
            if row[0].lower < HalfInteger::ZERO {
                return Err(Error::pre(format!("shifted row `{}` starts below 0", id)));
            }
            if let Some(i) = (1..row.len()).find(|&i| row[i - 1].upper >= row[i].lower) {
                return Err(Error::pre(format!(
                    "shifted row `{}` breaks the chain at position {}",
                    id, i
                )));
            }
        }
        Ok(out)
    }

    fn segment(&self, rho: Rho, i: usize) -> Result<ExtendedSegment> {
        self.row(rho).get(i).copied().ok_or_else(|| {
            Error::pre(format!(
                "row `{}` has no position {}",
                self.inventory.id(rho),
                i
            ))
        })
    }

    /// ([A−1, B+1], l−1, η). The segment disappears when b = 2.
    pub fn deform_minus(&self, rho: Rho, i: usize) -> Result<Xms> {
        let s = self.segment(rho, i)?;
        if s.l == 0 {
            return Err(Error::pre("deform_minus needs l >= 1"));
        }
        let mut row = self.row(rho).to_vec();
        if s.b() == 2 {
            row.remove(i);
        } else {
            row[i] = ExtendedSegment::new(s.upper.add_int(-1), s.lower.add_int(1), s.l - 1, s.eta);
        }
        self.with_row(rho, row)
    }

    /// ([A+1, B−1], l+1, η): the inverse of [`Xms::deform_minus`] on segments
    /// that survive it.
    pub fn widen(&self, rho: Rho, i: usize) -> Result<Xms> {
        let s = self.segment(rho, i)?;
        let mut row = self.row(rho).to_vec();
        row[i] = ExtendedSegment::new(s.upper.add_int(1), s.lower.add_int(-1), s.l + 1, s.eta);
        self.with_row(rho, row)
    }

    /// ([A−1, B−1], l, η), allowed when B > 0 and A_{i−1} < B_i − 1.
    pub fn deform_plus(&self, rho: Rho, i: usize) -> Result<Xms> {
        let s = self.segment(rho, i)?;
        if s.lower <= HalfInteger::ZERO {
            return Err(Error::pre("deform_plus needs B > 0"));
        }
        let moved = s.translate(-1);
        if i > 0 && self.row(rho)[i - 1].upper >= moved.lower {
            return Err(Error::pre(
                "deform_plus needs the previous segment to end below B - 1",
            ));
        }
        let mut row = self.row(rho).to_vec();
        row[i] = moved;
        self.with_row(rho, row)
    }

    pub fn display(&self) -> XmsDisplay<'_> {
        XmsDisplay(self)
    }
}

pub struct XmsDisplay<'a>(&'a Xms);

impl fmt::Display for XmsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.0;
        if e.rows.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        for (&rho, row) in &e.rows {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{}:", e.inventory.id(rho))?;
            for s in row {
                write!(f, " {}", s)?;
            }
        }
        Ok(())
    }
}

/// An admissible order on each Jord_ρ(ψ), lowest first.
pub type BlockOrder = BTreeMap<Rho, Vec<JordanBlock>>;

/// Sorts each Jord_ρ by (B, A) ascending. Satisfies both admissibility
/// conditions.
pub fn canonical_order(psi: &AParameter) -> BlockOrder {
    let mut order = BlockOrder::new();
    for b in psi.instances() {
        order.entry(b.rho).or_default().push(b);
    }
    for row in order.values_mut() {
        row.sort_by_key(|b| (b.lower(), b.upper()));
    }
    order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtoData {
    /// Unordered pairs of block instances as (lower, higher) in the order.
    pub pairs: Vec<(JordanBlock, JordanBlock)>,
    pub character: SignMap,
}

/// The crossing pairs between two blocks of the same label with b of
/// different parity, and the sign character counting them.
pub fn ato_sign(psi: &AParameter, order: &BlockOrder) -> Result<AtoData> {
    if !psi.is_good_parity() {
        return Err(Error::pre("ato_sign needs a good-parity parameter"));
    }
    let inv = psi.inventory();
    for (&rho, row) in order {
        let mut sorted = row.clone();
        sorted.sort();
        let expected = psi.jord_rho(rho);
        if sorted != expected || row.iter().any(|b| b.rho != rho) {
            return Err(Error::InadmissibleOrder {
                rho: inv.id(rho).to_string(),
                reason: "order is not a permutation of Jord_rho".into(),
            });
        }
        let coords: Vec<_> = row.iter().map(|b| (b.upper(), b.lower())).collect();
        if let Some(reason) = order_violation(&coords) {
            return Err(Error::InadmissibleOrder {
                rho: inv.id(rho).to_string(),
                reason,
            });
        }
    }
    if let Some(b) = psi.instances().find(|b| !order.contains_key(&b.rho)) {
        return Err(Error::InadmissibleOrder {
            rho: inv.id(b.rho).to_string(),
            reason: "label missing from the order".into(),
        });
    }
    let mut pairs = Vec::new();
    let mut character = SignMap::constant(psi.good_classes(), Sign::Plus);
    for row in order.values() {
        for (j, low) in row.iter().enumerate() {
            for high in &row[j + 1..] {
                if (low.b + high.b) % 2 == 0 || high.a >= low.a {
                    continue;
                }
                let (even, odd) = if high.b % 2 == 0 {
                    (high, low)
                } else {
                    (low, high)
                };
                if even.b <= odd.b {
                    continue;
                }
                pairs.push((*low, *high));
                for x in [low, high] {
                    let v = character.get(x).unwrap();
                    character.set(*x, -v);
                }
            }
        }
    }
    Ok(AtoData { pairs, character })
}

/// ε · ε^{Ato/W}.
pub fn ato_convert(eps: &SignMap, ato: &AtoData) -> Result<SignMap> {
    eps.times(&ato.character)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::param::tests::{blk, param, std_inv};
    use proptest::prelude::*;

    pub fn seg(a2: i64, b2: i64, l: u32, eta: i64) -> ExtendedSegment {
        ExtendedSegment::twice(a2, b2, l, Sign::from_i64(eta).unwrap())
    }

    pub fn xms(inv: &Arc<Inventory>, rows: &[(&str, Vec<ExtendedSegment>)]) -> Result<Xms> {
        Xms::new(
            inv.clone(),
            GroupSide::Metaplectic,
            rows.iter()
                .map(|(id, r)| (inv.lookup(id).unwrap(), r.clone())),
        )
    }

    #[test]
    fn build_examples() {
        let inv = std_inv();
        let e = xms(&inv, &[("triv", vec![seg(1, 1, 0, 1)])]).unwrap();
        assert_eq!(e.dimension(), 2);
        assert!(matches!(
            xms(&inv, &[("triv", vec![seg(1, -1, 2, 1)])]),
            Err(Error::InvalidSegment { .. })
        ));
        assert!(matches!(
            xms(&inv, &[("rhoS", vec![seg(2, 2, 0, 1), seg(0, 0, 0, 1)])]),
            Err(Error::InadmissibleOrder { .. })
        ));
        assert!(matches!(
            xms(&inv, &[("chi", vec![seg(0, 0, 0, 1)])]),
            Err(Error::NotSelfDual(_))
        ));
        assert!(matches!(
            xms(&inv, &[("rhoS", vec![seg(1, 1, 0, 1)])]),
            Err(Error::InvalidSegment { .. })
        ));
        // negative B forces ordering by B
        assert!(xms(&inv, &[("triv", vec![seg(1, -1, 0, 1), seg(3, 1, 0, 1)])]).is_ok());
        assert!(xms(&inv, &[("triv", vec![seg(3, 1, 0, 1), seg(3, -1, 0, 1)])]).is_err());
    }

    #[test]
    fn enhanced_examples() {
        let inv = std_inv();
        let t = blk(&inv, "triv", 2, 1);
        let (psi, eps) = xms(&inv, &[("triv", vec![seg(1, 1, 0, 1)])])
            .unwrap()
            .enhanced();
        assert_eq!(psi, param(&inv, &[("triv", 2, 1, 1)]).unwrap());
        assert_eq!(eps.get(&t), Some(Sign::Plus));

        let t = blk(&inv, "triv", 1, 2);
        for eta in [1, -1] {
            let e = xms(&inv, &[("triv", vec![seg(1, -1, 0, eta)])]).unwrap();
            assert_eq!(e.character().get(&t), Some(Sign::Minus));
            let e = xms(&inv, &[("triv", vec![seg(1, -1, 1, eta)])]).unwrap();
            assert_eq!(e.character().get(&t), Some(Sign::Plus));
        }
    }

    #[test]
    fn equivalence_examples() {
        let inv = std_inv();
        let e = |l, eta| xms(&inv, &[("triv", vec![seg(1, -1, l, eta)])]).unwrap();
        assert!(e(0, 1).equivalent(&e(0, 1)));
        assert!(e(1, 1).equivalent(&e(1, -1)));
        assert!(!e(0, 1).equivalent(&e(0, -1)));
    }

    #[test]
    fn shift_examples() {
        let inv = std_inv();
        let t = inv.lookup("triv").unwrap();
        let e = xms(&inv, &[("triv", vec![seg(1, -1, 0, 1)])]).unwrap();
        let shifted = e.shift(&BTreeMap::from([(t, vec![1])])).unwrap();
        assert_eq!(shifted.row(t), &[seg(3, 1, 0, 1)]);
        assert_eq!(e.minimal_shift(), 1);
        assert_eq!(e.shift_uniform(1).unwrap(), shifted);

        let ddr = xms(&inv, &[("triv", vec![seg(1, 1, 0, 1), seg(5, 5, 0, 1)])]).unwrap();
        assert_eq!(ddr.shift(&BTreeMap::new()).unwrap(), ddr);
        assert!(ddr.shift(&BTreeMap::from([(t, vec![2, 0])])).is_err());
    }

    #[test]
    fn deformation_examples() {
        let inv = std_inv();
        let t = inv.lookup("triv").unwrap();
        let e = xms(&inv, &[("triv", vec![seg(3, -1, 1, 1)])]).unwrap();
        assert_eq!(e.deform_minus(t, 0).unwrap().row(t), &[seg(1, 1, 0, 1)]);
        assert_eq!(e.deform_minus(t, 0).unwrap().widen(t, 0).unwrap(), e);
        let e0 = xms(&inv, &[("triv", vec![seg(3, -1, 0, 1)])]).unwrap();
        assert!(e0.deform_minus(t, 0).is_err());
        let e = xms(&inv, &[("triv", vec![seg(3, 1, 0, 1)])]).unwrap();
        assert_eq!(e.deform_plus(t, 0).unwrap().row(t), &[seg(1, -1, 0, 1)]);
        let e = xms(&inv, &[("triv", vec![seg(1, -1, 1, 1)])]).unwrap();
        assert!(e.deform_minus(t, 0).unwrap().is_empty());
    }

    #[test]
    fn ato_examples() {
        let inv = std_inv();
        let s = inv.lookup("rhoS").unwrap();
        let psi = param(&inv, &[("rhoS", 5, 1, 1), ("rhoS", 4, 4, 1)]).unwrap();
        let low = blk(&inv, "rhoS", 5, 1);
        let high = blk(&inv, "rhoS", 4, 4);
        let ato = ato_sign(&psi, &BTreeMap::from([(s, vec![low, high])])).unwrap();
        assert_eq!(ato.pairs.len(), 1);
        assert_eq!(ato.character.get(&low), Some(Sign::Minus));
        assert_eq!(ato.character.get(&high), Some(Sign::Minus));
        let ato = ato_sign(&psi, &BTreeMap::from([(s, vec![high, low])])).unwrap();
        assert!(ato.pairs.is_empty());
        assert_eq!(ato.character.product(), Sign::Plus);

        let tempered = param(&inv, &[("rhoQ", 2, 1, 1), ("rhoQ", 4, 1, 1)]).unwrap();
        let ato = ato_sign(&tempered, &canonical_order(&tempered)).unwrap();
        assert!(ato.pairs.is_empty());

        let eps = SignMap::constant(psi.good_classes(), Sign::Plus);
        let ato = ato_sign(&psi, &BTreeMap::from([(s, vec![low, high])])).unwrap();
        let conv = ato_convert(&eps, &ato).unwrap();
        assert_eq!(conv, ato.character);
        assert_eq!(ato_convert(&conv, &ato).unwrap(), eps);
    }

    pub fn arb_segment_row(sympl: bool) -> impl Strategy<Value = Vec<ExtendedSegment>> {
        prop::collection::vec((0i64..4, 0i64..4, 0u32..3, any::<bool>()), 0..4).prop_map(move |v| {
            let mut row: Vec<ExtendedSegment> = v
                .into_iter()
                .map(|(lo, w, l, neg)| {
                    let b2 = 2 * lo + if sympl { 0 } else { 1 };
                    let a2 = b2 + 2 * w;
                    let b = w + 1;
                    let l = l.min((b / 2) as u32);
                    seg(a2, b2, l, if neg { -1 } else { 1 })
                })
                .collect();
            row.sort_by_key(|s| (s.lower, s.upper));
            row
        })
    }

    proptest! {
        #[test]
        fn enhanced_is_stable_under_equal_permutations(row in arb_segment_row(true)) {
            let inv = std_inv();
            let e = xms(&inv, &[("rhoS", row.clone()), ("triv", vec![seg(1, 1, 0, 1)])]);
            prop_assume!(e.is_ok());
            let e = e.unwrap();
            let mut rev = row.clone();
            // reverse within runs of equal intervals
            let mut i = 0;
            while i < rev.len() {
                let mut j = i;
                while j < rev.len() && rev[j].same_interval(&rev[i]) { j += 1; }
                rev[i..j].reverse();
                i = j;
            }
            let f = xms(&inv, &[("rhoS", rev), ("triv", vec![seg(1, 1, 0, 1)])]).unwrap();
            prop_assert_eq!(e.enhanced(), f.enhanced());
        }

        #[test]
        fn canonical_is_idempotent(row in arb_segment_row(false)) {
            let inv = std_inv();
            if let Ok(e) = xms(&inv, &[("triv", row)]) {
                prop_assert_eq!(e.canonical().canonical(), e.canonical());
                prop_assert!(e.equivalent(&e.canonical()));
                prop_assert_eq!(e.canonical().character(), e.character());
            }
        }

        #[test]
        fn translate_round_trip(row in arb_segment_row(true), t in 0i64..3) {
            let inv = std_inv();
            let s = inv.lookup("rhoS").unwrap();
            if let Ok(e) = xms(&inv, &[("rhoS", row.clone())]) {
                let fwd = BTreeMap::from([(s, vec![t; row.len()])]);
                let back = BTreeMap::from([(s, vec![-t; row.len()])]);
                let there = e.translate(&fwd).unwrap();
                prop_assert_eq!(there.translate(&back).unwrap(), e);
            }
        }

        #[test]
        fn deform_minus_widen_inverse(row in arb_segment_row(true)) {
            let inv = std_inv();
            let s = inv.lookup("rhoS").unwrap();
            if let Ok(e) = xms(&inv, &[("rhoS", row.clone())]) {
                for i in 0..row.len() {
                    if row[i].l >= 1 && row[i].b() > 2 {
                        if let Ok(d) = e.deform_minus(s, i) {
                            prop_assert_eq!(d.widen(s, i).unwrap(), e.clone());
                        }
                    }
                }
            }
        }

        #[test]
        fn ato_character_laws(v in prop::collection::vec((1u32..6, 1u32..6), 0..4)) {
            let inv = std_inv();
            let blocks: Vec<_> = v.iter()
                .filter(|(a, b)| (a + b) % 2 == 0)
                .map(|&(a, b)| (blk(&inv, "rhoS", a, b), 1))
                .collect();
            let psi = AParameter::new(inv.clone(), GroupSide::Metaplectic, blocks).unwrap();
            let ato = ato_sign(&psi, &canonical_order(&psi)).unwrap();
            prop_assert_eq!(ato.character.product(), Sign::Plus);
            let s = psi.s_psi();
            prop_assert_eq!(ato.character.pair(&s).unwrap(), Sign::parity(ato.pairs.len() as i64));
            if psi.classify().nonneg_ddr {
                prop_assert!(ato.pairs.is_empty());
            }
        }
    }
}
