//! The non-vanishing criterion for extended multi-segments: condition (⋆),
//! the adjacent-pair conditions, row exchanges and the search over
//! admissible orders.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::inventory::Rho;
use crate::sign::Sign;
use crate::xms::{ExtendedSegment, Xms};

/// Which variant of the adjacent-pair conditions to apply. Everything except
/// [`Rule::Standard`] is a deliberate mutation, used to check that the
/// verification suites are able to notice a wrong criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Rule {
    #[default]
    Standard,
    /// Case (1) with differing signs, inequality reversed:
    /// B_k + l_k < A_{k−1} − l_{k−1}.
    FlippedCaseOneMismatch,
}

/// Condition (⋆) on every segment, in doubled units.
pub fn star(e: &Xms) -> bool {
    e.rows().values().all(|row| {
        let mut alpha = 0i64;
        row.iter().all(|s| {
            let lhs = s.lower.twice() + 2 * s.l as i64;
            let thr = if s.lower.is_integer() {
                0
            } else if s.eta != Sign::parity(alpha) {
                1
            } else {
                -1
            };
            alpha += s.a();
            lhs >= thr
        })
    })
}

/// η_k = (−1)^{A_{k−1}−B_{k−1}} η_{k−1}.
fn signs_match(lower: &ExtendedSegment, upper: &ExtendedSegment) -> bool {
    upper.eta == Sign::parity(lower.width()) * lower.eta
}

/// The adjacent-pair conditions for `upper` directly above `lower`. Every
/// case whose hypothesis holds is checked.
pub fn adjacent_pair_ok(lower: &ExtendedSegment, upper: &ExtendedSegment, rule: Rule) -> bool {
    let (a0, b0) = (lower.upper.twice(), lower.lower.twice());
    let (a1, b1) = (upper.upper.twice(), upper.lower.twice());
    let (l0, l1) = (2 * lower.l as i64, 2 * upper.l as i64);
    let (w0, w1) = (lower.b(), upper.b());
    let (m0, m1) = (lower.l as i64, upper.l as i64);
    let matched = signs_match(lower, upper);

    if a1 >= a0 && b1 >= b0 {
        let ok = if matched {
            a1 - l1 >= a0 - l0 && b1 + l1 >= b0 + l0
        } else if rule == Rule::FlippedCaseOneMismatch {
            b1 + l1 < a0 - l0
        } else {
            b1 + l1 > a0 - l0
        };
        if !ok {
            return false;
        }
    }
    if upper.contains(lower) {
        let ok = if matched {
            let d = m1 - m0;
            0 <= d && d <= w1 - w0
        } else {
            m1 + m0 >= w0
        };
        if !ok {
            return false;
        }
    }
    if lower.contains(upper) {
        let ok = if matched {
            let d = m0 - m1;
            0 <= d && d <= w0 - w1
        } else {
            m1 + m0 >= w1
        };
        if !ok {
            return false;
        }
    }
    true
}

fn check_adjacent_index(e: &Xms, rho: Rho, k: usize) -> Result<()> {
    let len = e.row(rho).len();
    if k == 0 || k >= len {
        return Err(Error::pre(format!(
            "positions {} and {} are not adjacent in row `{}` of length {}",
            k as i64 - 1,
            k,
            e.inventory().id(rho),
            len
        )));
    }
    if !e.is_nonnegative() {
        return Err(Error::pre("the extended multi-segment is not non-negative"));
    }
    Ok(())
}

/// The adjacent-pair conditions at positions (k−1, k) of row ρ.
pub fn adjacent_ok(e: &Xms, rho: Rho, k: usize) -> Result<bool> {
    check_adjacent_index(e, rho, k)?;
    let row = e.row(rho);
    Ok(adjacent_pair_ok(&row[k - 1], &row[k], Rule::Standard))
}

/// Reduces v modulo b into [0, b) and then folds into [0, ⌊b/2⌋].
fn fold(v: i64, b: i64) -> u32 {
    let r = v.rem_euclid(b);
    (if 2 * r > b { b - r } else { r }) as u32
}

/// Row exchange on a bare row. `None` when the two segments are not nested.
pub fn exchange_row(row: &[ExtendedSegment], k: usize) -> Option<Vec<ExtendedSegment>> {
    let (lo, hi) = (row[k - 1], row[k]);
    let matched = signs_match(&lo, &hi);
    let sgn = Sign::parity(lo.width()) * lo.eta * hi.eta;
    let signed = |x: i64| if sgn == Sign::Plus { x } else { -x };
    let (new_lo, new_hi);
    if hi.contains(&lo) {
        new_lo = ExtendedSegment {
            eta: Sign::parity(hi.width()) * lo.eta,
            ..lo
        };
        let free_lo = lo.b() - 2 * lo.l as i64;
        let l = fold(hi.l as i64 + signed(free_lo), hi.b());
        let keep = matched && hi.b() - 2 * (hi.l as i64) < 2 * free_lo;
        let eta = if keep {
            Sign::parity(lo.width()) * hi.eta
        } else {
            Sign::parity(lo.width() - 1) * hi.eta
        };
        new_hi = ExtendedSegment { l, eta, ..hi };
    } else if lo.contains(&hi) {
        new_hi = ExtendedSegment {
            eta: Sign::parity(lo.width()) * hi.eta,
            ..hi
        };
        let free_hi = hi.b() - 2 * hi.l as i64;
        let l = fold(lo.l as i64 + signed(free_hi), lo.b());
        let keep = matched && lo.b() - 2 * (lo.l as i64) < 2 * free_hi;
        let eta = if keep {
            Sign::parity(hi.width()) * lo.eta
        } else {
            Sign::parity(hi.width() - 1) * lo.eta
        };
        new_lo = ExtendedSegment { l, eta, ..lo };
    } else {
        return None;
    }
    let mut out = row.to_vec();
    out[k - 1] = new_hi;
    out[k] = new_lo;
    Some(out)
}

/// Whether the exchange at (k−1, k) produces its new l without any
/// reduction modulo b: the unreduced value lies in [0, b], so at most the
/// reflection v ↦ b − v is needed.
pub fn exchange_unreduced(row: &[ExtendedSegment], k: usize) -> bool {
    let (lo, hi) = (row[k - 1], row[k]);
    let sgn = Sign::parity(lo.width()) * lo.eta * hi.eta;
    let (outer, inner) = if hi.contains(&lo) {
        (hi, lo)
    } else if lo.contains(&hi) {
        (lo, hi)
    } else {
        return true;
    };
    let free = inner.b() - 2 * inner.l as i64;
    let v = outer.l as i64 + if sgn == Sign::Plus { free } else { -free };
    (0..=outer.b()).contains(&v)
}

/// R_{k−1}: exchanges positions k−1 and k of row ρ, or returns E unchanged
/// when the exchanged order would not be admissible.
pub fn row_exchange(e: &Xms, rho: Rho, k: usize) -> Result<Xms> {
    check_adjacent_index(e, rho, k)?;
    Ok(match exchange_row(e.row(rho), k) {
        Some(row) => e.with_row_unchecked(rho, row),
        None => e.clone(),
    })
}

/// Two exchange paths reaching the same order with non-equivalent rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathConflict {
    pub rho: Rho,
    pub order: Vec<usize>,
    pub first: Vec<ExtendedSegment>,
    pub second: Vec<ExtendedSegment>,
}

/// Where the adjacent-pair conditions failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub rho: Rho,
    /// The order, as positions in the starting row, lowest first.
    pub order: Vec<usize>,
    pub k: usize,
}

struct RowSearch {
    states: Vec<(Vec<usize>, Vec<ExtendedSegment>)>,
    conflicts: Vec<PathConflict>,
    failure: Option<Failure>,
}

fn canonical_row(row: &[ExtendedSegment]) -> Vec<ExtendedSegment> {
    row.iter().map(ExtendedSegment::canonical).collect()
}

fn search_row(
    rho: Rho,
    start: &[ExtendedSegment],
    rule: Rule,
    budget: &mut usize,
    cap: usize,
    stop_on_failure: bool,
) -> Result<RowSearch> {
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut out = RowSearch {
        states: Vec::new(),
        conflicts: Vec::new(),
        failure: None,
    };
    let perm: Vec<usize> = (0..start.len()).collect();
    seen.insert(perm.clone(), 0);
    out.states.push((perm, start.to_vec()));
    let mut queue = VecDeque::from([0usize]);
    *budget += 1;
    while let Some(idx) = queue.pop_front() {
        let (perm, row) = out.states[idx].clone();
        if out.failure.is_none() {
            if let Some(k) = (1..row.len()).find(|&k| !adjacent_pair_ok(&row[k - 1], &row[k], rule))
            {
                out.failure = Some(Failure {
                    rho,
                    order: perm.clone(),
                    k,
                });
                if stop_on_failure {
                    return Ok(out);
                }
            }
        }
        for k in 1..row.len() {
            let Some(next) = exchange_row(&row, k) else {
                continue;
            };
            let mut next_perm = perm.clone();
            next_perm.swap(k - 1, k);
            match seen.get(&next_perm) {
                Some(&j) => {
                    let other = &out.states[j].1;
                    if canonical_row(other) != canonical_row(&next) {
                        out.conflicts.push(PathConflict {
                            rho,
                            order: next_perm,
                            first: other.clone(),
                            second: next,
                        });
                    }
                }
                None => {
                    *budget += 1;
                    if *budget > cap {
                        return Err(Error::Truncated(cap));
                    }
                    seen.insert(next_perm.clone(), out.states.len());
                    queue.push_back(out.states.len());
                    out.states.push((next_perm, next));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub nonzero: bool,
    pub star: bool,
    /// The uniform shift used to reach a non-negative family.
    pub shift: i64,
    /// Number of (row, order) states visited.
    pub states: usize,
    pub failure: Option<Failure>,
    pub conflicts: Vec<PathConflict>,
}

/// The full non-vanishing test with a configurable rule and state cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub rule: Rule,
    pub cap: usize,
    /// Explore every order even after a failure, to collect diagnostics.
    pub exhaustive: bool,
}

impl Default for Criterion {
    fn default() -> Self {
        Criterion {
            rule: Rule::Standard,
            cap: 1 << 20,
            exhaustive: false,
        }
    }
}

impl Criterion {
    pub fn with_rule(rule: Rule) -> Self {
        Criterion {
            rule,
            ..Default::default()
        }
    }

    pub fn evaluate(&self, e: &Xms) -> Result<Verdict> {
        self.evaluate_shifted(e, e.minimal_shift())
    }

    /// Same as [`Criterion::evaluate`] with a chosen uniform shift t, which
    /// must make every B non-negative.
    pub fn evaluate_shifted(&self, e: &Xms, t: i64) -> Result<Verdict> {
        if t < e.minimal_shift() {
            return Err(Error::pre(format!("shift {} leaves a negative B", t)));
        }
        let star_ok = star(e);
        let mut verdict = Verdict {
            nonzero: star_ok,
            star: star_ok,
            shift: t,
            states: 0,
            failure: None,
            conflicts: Vec::new(),
        };
        if !star_ok && !self.exhaustive {
            return Ok(verdict);
        }
        let et = e.shift_uniform(t)?;
        let mut budget = 0;
        for (&rho, row) in et.rows() {
            let found = search_row(rho, row, self.rule, &mut budget, self.cap, !self.exhaustive)?;
            verdict.conflicts.extend(found.conflicts);
            if verdict.failure.is_none() {
                verdict.failure = found.failure;
            }
            if verdict.failure.is_some() {
                verdict.nonzero = false;
                if !self.exhaustive {
                    break;
                }
            }
        }
        verdict.states = budget;
        Ok(verdict)
    }

    pub fn is_nonzero(&self, e: &Xms) -> Result<bool> {
        Ok(self.evaluate(e)?.nonzero)
    }
}

/// Whether π(E) ≠ 0 under the standard criterion.
pub fn nonvanishing(e: &Xms) -> Result<bool> {
    Criterion::default().is_nonzero(e)
}

/// One reachable combination of admissible orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderState {
    pub xms: Xms,
    pub perm: BTreeMap<Rho, Vec<usize>>,
}

/// All states reachable from a non-negative E by row exchanges, as the
/// product of the per-row closures.
pub fn enumerate_orders(e: &Xms, cap: usize) -> Result<Vec<OrderState>> {
    if !e.is_nonnegative() {
        return Err(Error::pre("order enumeration needs a non-negative family"));
    }
    let mut budget = 0;
    let mut states = vec![OrderState {
        xms: e.clone(),
        perm: BTreeMap::new(),
    }];
    for (&rho, row) in e.rows() {
        let found = search_row(rho, row, Rule::Standard, &mut budget, cap, false)?;
        if states.len() * found.states.len() > cap {
            return Err(Error::Truncated(cap));
        }
        let mut next = Vec::with_capacity(states.len() * found.states.len());
        for st in &states {
            for (perm, r) in &found.states {
                let mut p = st.perm.clone();
                p.insert(rho, perm.clone());
                next.push(OrderState {
                    xms: st.xms.with_row_unchecked(rho, r.clone()),
                    perm: p,
                });
            }
        }
        states = next;
    }
    Ok(states)
}
