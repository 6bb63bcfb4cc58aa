//! Weak partial metrics and their correspondence with weakly weighted
//! quasi-metrics.

use thiserror::Error;

use crate::order::OrderRel;
use crate::qmetric::{validate_gqm, GQSpace};
use crate::value::{DistVal, Rational};
use crate::weights::CWeakWeight;

/// A validated generalised weak partial metric. Entries may be negative
/// unless the space is a partial metric in the strict sense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpmSpace {
    p: Vec<Vec<DistVal>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmError {
    #[error("empty carrier")]
    Empty,
    #[error("matrix is not square")]
    NotSquare,
    #[error("PM1 violated at ({0}, {1})")]
    Pm1Violation(usize, usize),
    #[error("PM2 violated: p({0},{0}) > p({0},{1})")]
    Pm2Violation(usize, usize),
    #[error("PM2S violated: p({0},{0}) is not below p({0},{1})")]
    Pm2SViolation(usize, usize),
    #[error("PM3 violated: p({0},{1}) ≠ p({1},{0})")]
    Pm3Violation(usize, usize),
    #[error("PM4 violated: p({0},{2}) > p({0},{1}) + p({1},{2}) − p({1},{1})")]
    Pm4Violation(usize, usize, usize),
    #[error("PM5 violated: p({0},{0}) is infinite")]
    Pm5Violation(usize),
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
}

/// Checks PM5, PM3, PM2 (and PM2S if asked), PM1, PM4 and finally the sign
/// requirement, in that order.
pub fn validate_wpm(p: Vec<Vec<DistVal>>, require_nonneg: bool, require_strong: bool) -> Result<WpmSpace, PmError> {
    let n = p.len();
    if n == 0 {
        return Err(PmError::Empty);
    }
    if p.iter().any(|r| r.len() != n) {
        return Err(PmError::NotSquare);
    }
    if let Some(x) = (0..n).find(|&x| p[x][x].is_infinite()) {
        return Err(PmError::Pm5Violation(x));
    }
    for x in 0..n {
        for y in x + 1..n {
            if p[x][y] != p[y][x] {
                return Err(PmError::Pm3Violation(x, y));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if p[x][x] > p[x][y] {
                return Err(PmError::Pm2Violation(x, y));
            }
            if require_strong && x != y && p[x][x] == p[x][y] {
                return Err(PmError::Pm2SViolation(x, y));
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if p[x][x] == p[y][y] && p[x][x] == p[x][y] {
                return Err(PmError::Pm1Violation(x, y));
            }
        }
    }
    for y in 0..n {
        let pyy = p[y][y].finite().expect("PM5 checked").clone();
        for x in 0..n {
            if p[x][y].is_infinite() {
                continue;
            }
            for z in 0..n {
                if p[x][z] > &(&p[x][y] + &p[y][z]) - &pyy {
                    return Err(PmError::Pm4Violation(x, y, z));
                }
            }
        }
    }
    if require_nonneg {
        for x in 0..n {
            for y in 0..n {
                if p[x][y].is_negative() {
                    return Err(PmError::NegativeEntry(x, y));
                }
            }
        }
    }
    Ok(WpmSpace { p })
}

impl WpmSpace {
    pub fn size(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self, x: usize, y: usize) -> &DistVal {
        &self.p[x][y]
    }

    pub fn matrix(&self) -> &[Vec<DistVal>] {
        &self.p
    }

    /// Self-distance, finite by PM5.
    pub fn self_distance(&self, x: usize) -> &Rational {
        self.p[x][x].finite().expect("PM5")
    }

    /// All entries non-negative, i.e. a partial metric proper.
    pub fn is_nonneg(&self) -> bool {
        self.p.iter().flatten().all(|v| !v.is_negative())
    }

    /// Strict PM2 holds.
    pub fn is_strong(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..n).all(|y| x == y || self.p[x][x] < self.p[x][y]))
    }

    /// `p + c` on every finite entry.
    pub fn shifted(&self, c: &Rational) -> WpmSpace {
        WpmSpace {
            p: self.p.iter().map(|r| r.iter().map(|v| v.shift(c)).collect()).collect(),
        }
    }

    /// `x ≤ y` iff `p(x,x) = p(x,y)`; cross-checked against the order of the
    /// induced quasi-metric.
    pub fn order(&self) -> OrderRel {
        let n = self.size();
        let o = OrderRel::from_fn(n, |x, y| self.p[x][x] == self.p[x][y])
            .expect("order of a weak partial metric is a partial order");
        assert_eq!(o, d_from_p(self).0.specialisation_order(), "≤_p differs from ≤ of d_p");
        o
    }
}

/// `p(x,y) = d(x,y) + w(x)` on connected pairs, `∞` elsewhere. `w` must be a
/// componentwise weak weight for `space`.
pub fn p_from_dw(space: &GQSpace, w: &[Rational]) -> WpmSpace {
    let n = space.size();
    WpmSpace {
        p: (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        if space.connected(x, y) {
                            space.d(x, y).shift(&w[x])
                        } else {
                            DistVal::Infinity
                        }
                    })
                    .collect()
            })
            .collect(),
    }
}

/// `d(x,y) = p(x,y) − p(x,x)` together with the weight `w(x) = p(x,x)`.
pub fn d_from_p(pm: &WpmSpace) -> (GQSpace, CWeakWeight) {
    let n = pm.size();
    let d = (0..n)
        .map(|x| (0..n).map(|y| pm.p(x, y) - pm.self_distance(x)).collect())
        .collect();
    let space = validate_gqm(d).expect("induced distance of a weak partial metric is a quasi-metric");
    let values = (0..n).map(|x| pm.self_distance(x).clone()).collect();
    let partition = space.components();
    (space, CWeakWeight { values, partition })
}

/// First entry where a round trip changed the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("round trip changes entry ({x}, {y}): {before} became {after}")]
pub struct RoundTripMismatch {
    pub x: usize,
    pub y: usize,
    pub before: DistVal,
    pub after: DistVal,
}

fn compare(a: &[Vec<DistVal>], b: &[Vec<DistVal>]) -> Result<(), RoundTripMismatch> {
    for (x, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (y, (va, vb)) in ra.iter().zip(rb).enumerate() {
            if va != vb {
                return Err(RoundTripMismatch { x, y, before: va.clone(), after: vb.clone() });
            }
        }
    }
    Ok(())
}

/// `d ↦ p ↦ d` is the identity.
pub fn roundtrip_from_d(space: &GQSpace, w: &[Rational]) -> Result<(), RoundTripMismatch> {
    compare(space.matrix(), d_from_p(&p_from_dw(space, w)).0.matrix())
}

/// `p ↦ (d, w) ↦ p` is the identity.
pub fn roundtrip_from_p(pm: &WpmSpace) -> Result<(), RoundTripMismatch> {
    let (d, w) = d_from_p(pm);
    compare(pm.matrix(), p_from_dw(&d, &w.values).matrix())
}

/// Both directions.
pub fn roundtrip_check(space: &GQSpace, w: &[Rational], pm: &WpmSpace) -> Result<(), RoundTripMismatch> {
    roundtrip_from_d(space, w)?;
    roundtrip_from_p(pm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{int, rat};
    use crate::weights::{verify_weight, WeightMode};

    fn sierpinski() -> GQSpace {
        GQSpace::from_fn(2, |x, y| DistVal::from_int(if (x, y) == (1, 0) { 1 } else { 0 })).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<DistVal>> {
        rows.iter().map(|r| r.iter().map(|&v| DistVal::from_int(v)).collect()).collect()
    }

    #[test]
    fn sierpinski_round_trip() {
        let s = sierpinski();
        let w = [int(1), int(0)];
        let p = p_from_dw(&s, &w);
        assert_eq!(p.matrix(), ints(&[&[1, 1], &[1, 0]]).as_slice());
        let p = validate_wpm(p.matrix().to_vec(), true, false).unwrap();
        let (d, wp) = d_from_p(&p);
        assert_eq!(d, s);
        assert_eq!(wp.values, w.to_vec());
        assert_eq!(verify_weight(&d, &wp.values, WeightMode::Weak), Ok(()));
        assert_eq!(roundtrip_check(&s, &w, &p), Ok(()));
        assert!(p.order().leq(0, 1));
    }

    #[test]
    fn validation_failures() {
        assert_eq!(
            validate_wpm(ints(&[&[0, 1], &[2, 0]]), false, false),
            Err(PmError::Pm3Violation(0, 1))
        );
        assert_eq!(
            validate_wpm(ints(&[&[1, 1], &[1, 1]]), false, false),
            Err(PmError::Pm1Violation(0, 1))
        );
        assert_eq!(
            validate_wpm(ints(&[&[1, 1], &[1, 0]]), false, true),
            Err(PmError::Pm2SViolation(0, 1))
        );
        assert_eq!(
            validate_wpm(vec![vec![DistVal::Infinity]], false, false),
            Err(PmError::Pm5Violation(0))
        );
        assert_eq!(
            validate_wpm(ints(&[&[-1]]), true, false),
            Err(PmError::NegativeEntry(0, 0))
        );
    }

    #[test]
    fn metric_is_weak_partial_metric() {
        let m = ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let p = validate_wpm(m, true, true).unwrap();
        let (d, w) = d_from_p(&p);
        assert_eq!(d.matrix(), p.matrix());
        assert!(w.values.iter().all(|v| v == &int(0)));
        assert_eq!(p.order(), OrderRel::equality(3));
    }

    #[test]
    fn shift_keeps_order() {
        let p = validate_wpm(ints(&[&[1, 1], &[1, 0]]), true, false).unwrap();
        let q = p.shifted(&rat(-7, 3));
        let q = validate_wpm(q.matrix().to_vec(), false, false).unwrap();
        assert_eq!(q.order(), p.order());
    }
}
