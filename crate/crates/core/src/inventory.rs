//! Cuspidal labels: opaque stand-ins for unitary cuspidal representations of
//! general linear groups, carrying only the attributes the combinatorics reads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DualityType {
    Orthogonal,
    Symplectic,
    /// Not self-dual.
    None,
}

impl DualityType {
    pub fn as_str(self) -> &'static str {
        match self {
            DualityType::Orthogonal => "orthogonal",
            DualityType::Symplectic => "symplectic",
            DualityType::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalLabel {
    pub id: String,
    pub dim: u32,
    pub dual_id: String,
    pub duality: DualityType,
    pub is_trivial: bool,
    pub omega_minus_one: Sign,
    /// ε(ρ ⊗ r(n)) for the supplied n ≥ 1.
    pub root_numbers: BTreeMap<u32, Sign>,
}

impl CuspidalLabel {
    pub fn is_self_dual(&self) -> bool {
        self.duality != DualityType::None
    }
}

/// Index of a label inside its [`Inventory`]. Labels are sorted by id, so
/// ordering by `Rho` is ordering by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rho(pub u16);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    labels: Vec<CuspidalLabel>,
    by_id: HashMap<String, Rho>,
    duals: Vec<Rho>,
    trivial: Option<Rho>,
}

impl Inventory {
    /// Validates a list of labels: unique ids, an involutive dual pairing,
    /// and the constraints on the trivial label and symplectic dimensions.
    pub fn build(mut raw: Vec<CuspidalLabel>) -> Result<Inventory> {
        raw.sort_by(|x, y| x.id.cmp(&y.id));
        let mut by_id = HashMap::new();
        for (i, label) in raw.iter().enumerate() {
            if by_id.insert(label.id.clone(), Rho(i as u16)).is_some() {
                return Err(Error::DuplicateId(label.id.clone()));
            }
        }
        let mut duals = Vec::with_capacity(raw.len());
        let mut trivial = None;
        for label in &raw {
            if label.dim == 0 {
                return Err(Error::InvalidLabel {
                    id: label.id.clone(),
                    reason: "dimension must be positive".into(),
                });
            }
            let self_dual = label.dual_id == label.id;
            if self_dual != label.is_self_dual() {
                return Err(Error::BrokenDualPairing {
                    id: label.id.clone(),
                    reason: format!(
                        "duality type `{}` but dual id `{}`",
                        label.duality.as_str(),
                        label.dual_id
                    ),
                });
            }
            let Some(&dual) = by_id.get(&label.dual_id) else {
                return Err(Error::BrokenDualPairing {
                    id: label.id.clone(),
                    reason: format!("dual `{}` is not in the inventory", label.dual_id),
                });
            };
            let partner = &raw[dual.0 as usize];
            if partner.dual_id != label.id {
                return Err(Error::BrokenDualPairing {
                    id: label.id.clone(),
                    reason: format!("`{}` does not point back", partner.id),
                });
            }
            if partner.dim != label.dim {
                return Err(Error::BrokenDualPairing {
                    id: label.id.clone(),
                    reason: "dual has a different dimension".into(),
                });
            }
            if label.is_trivial {
                if label.dim != 1
                    || label.duality != DualityType::Orthogonal
                    || label.omega_minus_one != Sign::Plus
                    || !self_dual
                {
                    return Err(Error::InvalidTrivial(label.id.clone()));
                }
                if trivial.is_some() {
                    return Err(Error::InvalidLabel {
                        id: label.id.clone(),
                        reason: "more than one trivial label".into(),
                    });
                }
                trivial = Some(Rho(duals.len() as u16));
            }
            if label.duality == DualityType::Symplectic && label.dim % 2 != 0 {
                return Err(Error::InvalidLabel {
                    id: label.id.clone(),
                    reason: "symplectic labels have even dimension".into(),
                });
            }
            if label.root_numbers.contains_key(&0) {
                return Err(Error::InvalidLabel {
                    id: label.id.clone(),
                    reason: "root numbers are indexed by n >= 1".into(),
                });
            }
            duals.push(dual);
        }
        Ok(Inventory {
            labels: raw,
            by_id,
            duals,
            trivial,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[CuspidalLabel] {
        &self.labels
    }

    pub fn rhos(&self) -> impl Iterator<Item = Rho> + '_ {
        (0..self.labels.len()).map(|i| Rho(i as u16))
    }

    pub fn lookup(&self, id: &str) -> Result<Rho> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownRho(id.to_string()))
    }

    pub fn label(&self, rho: Rho) -> &CuspidalLabel {
        &self.labels[rho.0 as usize]
    }

    pub fn id(&self, rho: Rho) -> &str {
        &self.label(rho).id
    }

    pub fn dual(&self, rho: Rho) -> Rho {
        self.duals[rho.0 as usize]
    }

    pub fn duality(&self, rho: Rho) -> DualityType {
        self.label(rho).duality
    }

    pub fn dim(&self, rho: Rho) -> u32 {
        self.label(rho).dim
    }

    pub fn trivial(&self) -> Option<Rho> {
        self.trivial
    }

    pub fn is_trivial(&self, rho: Rho) -> bool {
        self.trivial == Some(rho)
    }

    /// The three-label inventory used by the corpus suites: the trivial
    /// character, a non-trivial quadratic character and a two-dimensional
    /// symplectic label. Root numbers are all +1 (consistent with the
    /// ratio rule, since every ω(−1) is +1).
    pub fn standard() -> Inventory {
        let ones = |max: u32| (1..=max).map(|n| (n, Sign::Plus)).collect();
        Inventory::build(vec![
            CuspidalLabel {
                id: "triv".into(),
                dim: 1,
                dual_id: "triv".into(),
                duality: DualityType::Orthogonal,
                is_trivial: true,
                omega_minus_one: Sign::Plus,
                root_numbers: ones(32),
            },
            CuspidalLabel {
                id: "rhoQ".into(),
                dim: 1,
                dual_id: "rhoQ".into(),
                duality: DualityType::Orthogonal,
                is_trivial: false,
                omega_minus_one: Sign::Plus,
                root_numbers: ones(32),
            },
            CuspidalLabel {
                id: "rhoS".into(),
                dim: 2,
                dual_id: "rhoS".into(),
                duality: DualityType::Symplectic,
                is_trivial: false,
                omega_minus_one: Sign::Plus,
                root_numbers: ones(32),
            },
        ])
        .expect("standard inventory is valid")
    }
}

/// Displays a label id through its inventory.
pub struct RhoDisplay<'a>(pub &'a Inventory, pub Rho);

impl fmt::Display for RhoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.id(self.1))
    }
}
