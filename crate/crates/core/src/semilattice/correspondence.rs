//! Invariant quasi-metric semilattices and their weights and co-valuations.

use rand::Rng;
use thiserror::Error;

use super::valuation::{check_valuation, Flavour};
use super::{check_congruence, semilattice_from_order, CongruenceFailure, MeetSL};
use crate::order::Partition;
use crate::qmetric::{validate_gqm, DpcWitness, GQSpace, QmError};
use crate::value::{DistVal, Rational};
use crate::weights::{
    differ_by_block_constants, synth_cweak_weight, verify_weight, CWeakWeight, NotCww, WeightMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("semilattice order differs from the specialisation order")]
    OrderMismatch,
    #[error("carrier sizes differ")]
    SizeMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency alarm: {0}")]
    Alarm(String),
}

/// The three equivalent forms of invariance, each with its first
/// counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    /// `(x, y)` with `d(x,y) ≠ d(x, x∧y)`.
    pub identity: Option<(usize, usize)>,
    /// `(z, x, y)` with `d(z∧x, z∧y) > d(x,y)`.
    pub shift: Option<(usize, usize, usize)>,
    /// `(x, y, z)` with `d(x, y∧z) > d(x,y) + d(x,z)`.
    pub subadditive: Option<(usize, usize, usize)>,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.identity.is_none()
    }
}

fn same_order(space: &GQSpace, s: &MeetSL) -> Result<(), CorrespondenceError> {
    if space.size() != s.size() {
        return Err(CorrespondenceError::SizeMismatch);
    }
    if &space.specialisation_order() != s.order() {
        return Err(CorrespondenceError::OrderMismatch);
    }
    Ok(())
}

/// Evaluates all three forms and raises an alarm if they disagree.
pub fn check_invariant(space: &GQSpace, s: &MeetSL) -> Result<InvarianceReport, CorrespondenceError> {
    same_order(space, s)?;
    let n = s.size();
    let d = |a: usize, b: usize| space.d(a, b);
    let mut r = InvarianceReport { identity: None, shift: None, subadditive: None };
    'a: for x in 0..n {
        for y in 0..n {
            if d(x, y) != d(x, s.meet(x, y)) {
                r.identity = Some((x, y));
                break 'a;
            }
        }
    }
    'b: for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                if d(s.meet(z, x), s.meet(z, y)) > d(x, y) {
                    r.shift = Some((z, x, y));
                    break 'b;
                }
            }
        }
    }
    'c: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d(x, s.meet(y, z)) > &(d(x, y) + d(x, z)) {
                    r.subadditive = Some((x, y, z));
                    break 'c;
                }
            }
        }
    }
    let verdicts = [r.identity.is_none(), r.shift.is_none(), r.subadditive.is_none()];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(CorrespondenceError::Alarm(format!("invariance forms disagree: {r:?}")));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfError {
    #[error("value vector has {got} entries for {n} points")]
    Length { n: usize, got: usize },
    #[error("not a congruence: {0}")]
    NotACongruence(CongruenceFailure),
    #[error("co-valuation inequality fails at ({0}, {1}, {2})")]
    NotACovaluation(usize, usize, usize),
    #[error("not strictly decreasing: {0} < {1} but f({0}) ≤ f({1})")]
    NotStrictlyDecreasing(usize, usize),
    #[error("internal consistency alarm: {0}")]
    Alarm(QmError),
}

/// `d_f(x,y) = f(x∧y) − f(x)` when `x ≅ x∧y`, otherwise `∞`. Without a
/// congruence every pair is related.
pub fn dist_from_covaluation(s: &MeetSL, f: &[Rational], cong: Option<&Partition>) -> Result<GQSpace, DfError> {
    let n = s.size();
    if f.len() != n {
        return Err(DfError::Length { n, got: f.len() });
    }
    if let Some(p) = cong {
        check_congruence(s, p).map_err(DfError::NotACongruence)?;
    }
    check_valuation(s, f, Flavour::MeetCoval, cong).map_err(|e| match e {
        super::valuation::ValuationError::Inequality(x, y, z) => DfError::NotACovaluation(x, y, z),
        super::valuation::ValuationError::Length { n, got } => DfError::Length { n, got },
    })?;
    for x in 0..n {
        for y in 0..n {
            if s.order().lt(x, y) && cong.is_none_or(|p| p.same(x, y)) && f[x] <= f[y] {
                return Err(DfError::NotStrictlyDecreasing(x, y));
            }
        }
    }
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let m = s.meet(x, y);
                    if cong.is_none_or(|p| p.same(x, m)) {
                        DistVal::Finite(&f[m] - &f[x])
                    } else {
                        DistVal::Infinity
                    }
                })
                .collect()
        })
        .collect();
    validate_gqm(d).map_err(DfError::Alarm)
}

fn require_invariant_dpc(space: &GQSpace, s: &MeetSL) -> Result<(), CorrespondenceError> {
    if let Some((x, y)) = check_invariant(space, s)?.identity {
        return Err(CorrespondenceError::Precondition(format!("not invariant at ({x}, {y})")));
    }
    if let Err(w) = space.check_dpc() {
        return Err(CorrespondenceError::Precondition(format!(
            "DPC fails at ({}, {}, {})",
            w.x, w.y, w.z
        )));
    }
    Ok(())
}

/// `w_x(y) = d(x,y) − d(y,x)` for `y` in the component of `x`, `None`
/// elsewhere. Requires invariance and DPC.
pub fn synth_wx(space: &GQSpace, s: &MeetSL, x: usize) -> Result<Vec<Option<Rational>>, CorrespondenceError> {
    require_invariant_dpc(space, s)?;
    Ok(wx_unchecked(space, x))
}

fn wx_unchecked(space: &GQSpace, x: usize) -> Vec<Option<Rational>> {
    (0..space.size())
        .map(|y| match (space.d(x, y).finite(), space.d(y, x).finite()) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        })
        .collect()
}

/// `w_x` glued over one representative per component. `reps` defaults to the
/// smallest index of each component.
pub fn glued_wx(space: &GQSpace, s: &MeetSL, reps: Option<&[usize]>) -> Result<CWeakWeight, CorrespondenceError> {
    require_invariant_dpc(space, s)?;
    Ok(glued_unchecked(space, reps))
}

/// Gluing without the invariance and DPC checks, for experiments on spaces
/// that fail them.
pub fn glued_unchecked(space: &GQSpace, reps: Option<&[usize]>) -> CWeakWeight {
    let partition = space.components();
    let mut values = vec![Rational::default(); space.size()];
    for (i, b) in partition.blocks().iter().enumerate() {
        let r = reps.map_or(b[0], |r| r[i]);
        let wr = wx_unchecked(space, r);
        for &y in b {
            values[y] = wr[y].clone().expect("same component");
        }
    }
    CWeakWeight { values, partition }
}

/// Both sides of the DPC ⇔ componentwise-weighted equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpcWwVerdict {
    pub dpc: Result<(), DpcWitness>,
    pub cww: Result<CWeakWeight, NotCww>,
}

/// Requires invariance; alarms if the two verdicts differ.
pub fn check_dpc_iff_ww(space: &GQSpace, s: &MeetSL) -> Result<DpcWwVerdict, CorrespondenceError> {
    if let Some((x, y)) = check_invariant(space, s)?.identity {
        return Err(CorrespondenceError::Precondition(format!("not invariant at ({x}, {y})")));
    }
    let v = DpcWwVerdict { dpc: space.check_dpc(), cww: synth_cweak_weight(space) };
    if v.dpc.is_ok() != v.cww.is_ok() {
        return Err(CorrespondenceError::Alarm(format!(
            "DPC verdict {:?} but weight synthesis {:?}",
            v.dpc, v.cww
        )));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MspaceMode {
    /// Meet case: bound `d(x,y)` over `y ≤ x`.
    Lower,
    /// Join case: bound `d(y,x)` over `y ≥ x`.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MspaceReport {
    /// Least admissible constant per point.
    pub constants: Vec<Rational>,
    /// The same constant read off `w_x`: its maximum for [`MspaceMode::Lower`],
    /// minus its minimum for [`MspaceMode::Upper`].
    pub from_wx: Vec<Rational>,
}

/// Per-point constants of the m-space (lower) or M-space (upper) property,
/// cross-checked against the bounds of `w_x`. The upper mode is the lower
/// mode of the conjugate space, whose order must be a meet-semilattice.
pub fn check_mspace(space: &GQSpace, mode: MspaceMode) -> Result<MspaceReport, CorrespondenceError> {
    let target = match mode {
        MspaceMode::Lower => space.clone(),
        MspaceMode::Upper => space.conjugate(),
    };
    let s = semilattice_from_order(&target.specialisation_order())
        .map_err(|e| CorrespondenceError::Precondition(e.to_string()))?;
    require_invariant_dpc(&target, &s)?;
    let n = target.size();
    let mut constants = Vec::with_capacity(n);
    let mut from_wx = Vec::with_capacity(n);
    for x in 0..n {
        let c = (0..n)
            .filter(|&y| s.leq(y, x))
            .filter_map(|y| target.d(x, y).finite().cloned())
            .max()
            .unwrap_or_default();
        let w = wx_unchecked(&target, x).into_iter().flatten().max().unwrap_or_default();
        if c != w {
            return Err(CorrespondenceError::Alarm(format!("constant at {x} is {c} but w_x peaks at {w}")));
        }
        constants.push(c);
        from_wx.push(w);
    }
    Ok(MspaceReport { constants, from_wx })
}

/// Sign and additivity of `w_⊥` and `w_⊤` where those elements exist:
/// `w_⊥ ≤ 0` and supadditive, `w_⊤ ≥ 0` and (for invariant spaces)
/// subadditive. Pairs at infinite distance are skipped.
pub fn check_top_bottom(space: &GQSpace, s: &MeetSL) -> Result<(), CorrespondenceError> {
    let invariant = check_invariant(space, s)?.is_invariant();
    let n = s.size();
    let zero = Rational::default();
    let bot = s.bottom();
    let wb = wx_unchecked(space, bot);
    for x in 0..n {
        if wb[x].as_ref().is_some_and(|v| v > &zero) {
            return Err(CorrespondenceError::Alarm(format!("w_⊥({x}) > 0")));
        }
        for y in 0..n {
            if let (Some(a), Some(b), Some(m)) = (&wb[x], &wb[y], &wb[s.meet(x, y)]) {
                if m < &(a + b) {
                    return Err(CorrespondenceError::Alarm(format!("w_⊥ not supadditive at ({x}, {y})")));
                }
            }
        }
    }
    if let Some(top) = s.top() {
        let wt = wx_unchecked(space, top);
        for x in 0..n {
            if wt[x].as_ref().is_some_and(|v| v < &zero) {
                return Err(CorrespondenceError::Alarm(format!("w_⊤({x}) < 0")));
            }
            if !invariant {
                continue;
            }
            for y in 0..n {
                if let (Some(a), Some(b), Some(m)) = (&wt[x], &wt[y], &wt[s.meet(x, y)]) {
                    if m > &(a + b) {
                        return Err(CorrespondenceError::Alarm(format!("w_⊤ not subadditive at ({x}, {y})")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs one full leg of the correspondence for the co-valuation `f`:
/// builds `d_f`, checks invariance, order, `≅ = ≅_{d_f}`, that `f` weights
/// `d_f`, that `−f` is a valuation, and that rebuilding from a synthesised
/// weight returns `d_f`.
pub fn correspondence_leg(
    s: &MeetSL,
    f: &[Rational],
    cong: Option<&Partition>,
) -> Result<GQSpace, CorrespondenceError> {
    let alarm = |m: String| CorrespondenceError::Alarm(m);
    let d = dist_from_covaluation(s, f, cong).map_err(|e| alarm(e.to_string()))?;
    if &d.specialisation_order() != s.order() {
        return Err(alarm("order of d_f differs from the semilattice order".into()));
    }
    if !check_invariant(&d, s)?.is_invariant() {
        return Err(alarm("d_f is not invariant".into()));
    }
    let comps = d.components();
    let expected = cong.cloned().unwrap_or_else(|| Partition::trivial(s.size()));
    if comps != expected {
        return Err(alarm("components of d_f differ from the congruence".into()));
    }
    verify_weight(&d, f, WeightMode::Componentwise).map_err(|e| alarm(format!("f is not a weight of d_f: {e}")))?;
    let g: Vec<Rational> = f.iter().map(|v| -v).collect();
    check_valuation(s, &g, Flavour::MeetVal, cong).map_err(|e| alarm(format!("−f is not a valuation: {e}")))?;
    let w = synth_cweak_weight(&d).map_err(|e| alarm(e.to_string()))?;
    if !differ_by_block_constants(&w.values, f, &comps) {
        return Err(alarm("synthesised weight is not f up to block constants".into()));
    }
    let back = dist_from_covaluation(s, &w.values, Some(&comps)).map_err(|e| alarm(e.to_string()))?;
    if back != d {
        return Err(alarm("d_w differs from d_f".into()));
    }
    let wx = glued_wx(&d, s, None)?;
    if !differ_by_block_constants(&wx.values, f, &comps) {
        return Err(alarm("glued w_x is not f up to block constants".into()));
    }
    Ok(d)
}

/// `trials` random co-valuations through [`correspondence_leg`].
pub fn correspondence_roundtrip<R: Rng>(
    s: &MeetSL,
    cong: Option<&Partition>,
    rng: &mut R,
    trials: usize,
) -> Result<(), CorrespondenceError> {
    for _ in 0..trials {
        let f = super::generate::random_covaluation(s, cong, rng);
        correspondence_leg(s, &f, cong)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::value::int;
    use rand::SeedableRng;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn sl(space: &GQSpace) -> MeetSL {
        semilattice_from_order(&space.specialisation_order()).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let p = power_set_space(3);
        assert!(check_invariant(&p, &sl(&p)).unwrap().is_invariant());
        let nw = not_weighted();
        assert!(check_invariant(&nw, &sl(&nw)).unwrap().is_invariant());
        let ni = non_invariant();
        let r = check_invariant(&ni, &sl(&ni)).unwrap();
        assert_eq!(r.identity, Some((1, 2)));
        assert!(r.shift.is_some() && r.subadditive.is_some());
    }

    #[test]
    fn chain_covaluation_gives_chain_space() {
        let d = dist_from_covaluation(&chain_sl(3), &ints(&[2, 1, 0]), None).unwrap();
        assert_eq!(d, chain_space(3));
        assert_eq!(d.d(2, 0), &DistVal::from_int(2));
    }

    #[test]
    fn cardinality_covaluation_gives_power_set_space() {
        // Under reverse inclusion |A| strictly decreases, and |A∪B| − |A| = |B \ A|.
        let f: Vec<Rational> = (0..4u32).map(|a| int(i64::from(a.count_ones()))).collect();
        let d = dist_from_covaluation(&power_set_sl(2), &f, None).unwrap();
        assert_eq!(d, power_set_space(2));
        let neg: Vec<Rational> = f.iter().map(|v| -v).collect();
        assert!(dist_from_covaluation(&power_set_sl(2), &neg, None).is_err());
    }

    #[test]
    fn generalised_chain_fixture() {
        let cong = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let d = dist_from_covaluation(&chain_sl(3), &ints(&[5, 1, 0]), Some(&cong)).unwrap();
        assert!(d.d(1, 0).is_infinite());
        assert_eq!(d.d(2, 1), &DistVal::from_int(1));
        assert_eq!(d.components(), cong);
    }

    #[test]
    fn wx_examples() {
        let s = sierpinski();
        assert_eq!(synth_wx(&s, &sl(&s), 1).unwrap(), vec![Some(int(1)), Some(int(0))]);
        let c = chain_space(3);
        assert_eq!(synth_wx(&c, &sl(&c), 2).unwrap(), vec![Some(int(2)), Some(int(1)), Some(int(0))]);
        let p = power_set_space(3);
        let w = synth_wx(&p, &sl(&p), 0).unwrap();
        for a in 0..8u32 {
            assert_eq!(w[a as usize], Some(int(i64::from(a.count_ones()))));
        }
        let nw = not_weighted();
        assert!(matches!(synth_wx(&nw, &sl(&nw), 0), Err(CorrespondenceError::Precondition(_))));
    }

    #[test]
    fn dpc_iff_ww_examples() {
        let nw = not_weighted();
        let v = check_dpc_iff_ww(&nw, &sl(&nw)).unwrap();
        assert!(v.dpc.is_err() && v.cww.is_err());
        for sp in [chain_space(4), subgroups_z4()] {
            let v = check_dpc_iff_ww(&sp, &sl(&sp)).unwrap();
            assert!(v.dpc.is_ok() && v.cww.is_ok());
        }
    }

    #[test]
    fn mspace_constants() {
        let r = check_mspace(&chain_space(3), MspaceMode::Lower).unwrap();
        assert_eq!(r.constants, ints(&[0, 1, 2]));
        let one = GQSpace::from_fn(1, |_, _| DistVal::zero()).unwrap();
        assert_eq!(check_mspace(&one, MspaceMode::Lower).unwrap().constants, ints(&[0]));
        let p = power_set_space(2);
        let lower = check_mspace(&p, MspaceMode::Lower).unwrap();
        let upper = check_mspace(&p, MspaceMode::Upper).unwrap();
        for a in 0..4u32 {
            let k = i64::from(a.count_ones());
            assert_eq!(lower.constants[a as usize], int(2 - k));
            assert_eq!(upper.constants[a as usize], int(k));
        }
    }

    #[test]
    fn top_bottom_signs() {
        for sp in [chain_space(4), power_set_space(3), not_weighted(), subgroups_z4()] {
            assert_eq!(check_top_bottom(&sp, &sl(&sp)), Ok(()));
        }
    }

    #[test]
    fn round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        assert_eq!(correspondence_roundtrip(&chain_sl(3), None, &mut rng, 10), Ok(()));
        assert_eq!(correspondence_roundtrip(&power_set_sl(3), None, &mut rng, 10), Ok(()));
        let s = power_set_sl(2);
        let cong = super::super::congruence_closure(&s, &[(0, 1)]);
        assert_eq!(correspondence_roundtrip(&s, Some(&cong), &mut rng, 10), Ok(()));
    }
}
