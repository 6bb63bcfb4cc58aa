//! Weak weights, componentwise weak weights, and their bounded representatives.

use thiserror::Error;

use crate::order::Partition;
use crate::qmetric::GQSpace;
use crate::value::{DistVal, Rational};

/// A weak weight for a whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakWeight {
    pub values: Vec<Rational>,
}

/// A weight that only has to balance distances inside each block of
/// `partition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWeakWeight {
    pub values: Vec<Rational>,
    pub partition: Partition,
}

/// Why a space carries no weak weight.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotWeaklyWeighted {
    /// `d(x,y) + w(x) ≠ d(y,x) + w(y)` for the base-point candidate.
    #[error("weight equation fails at ({x}, {y})")]
    Equation { x: usize, y: usize },
    /// `d(x,y) = ∞` while `d(y,x)` is finite.
    #[error("d({x},{y}) is infinite but d({y},{x}) is not")]
    InfiniteAsymmetry { x: usize, y: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("component {component} is not weakly weighted: weight equation fails at ({x}, {y})")]
pub struct NotCww {
    pub component: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Weak,
    Componentwise,
    Weight,
    Coweight,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight vector has {got} entries for {n} points")]
    Length { n: usize, got: usize },
    #[error("identity fails at ({0}, {1})")]
    Pair(usize, usize),
    #[error("negative value at {0}")]
    NegativeWeight(usize),
}

fn balanced(x: &DistVal, wx: &Rational, y: &DistVal, wy: &Rational) -> bool {
    x.shift(wx) == y.shift(wy)
}

/// Base-point candidate on one block: `w(y) = d(x₀,y) − d(y,x₀)`.
fn candidate(space: &GQSpace, block: &[usize], values: &mut [Rational]) -> Result<(), (usize, usize)> {
    let x0 = block[0];
    for &y in block {
        let (a, b) = (space.d(x0, y).finite(), space.d(y, x0).finite());
        values[y] = a.expect("finite inside a component") - b.expect("finite inside a component");
    }
    for &x in block {
        for &y in block {
            if x < y && !balanced(space.d(x, y), &values[x], space.d(y, x), &values[y]) {
                return Err((x, y));
            }
        }
    }
    Ok(())
}

/// Finds a weak weight, taking the smallest index of each component as base
/// point. The equation is checked inside components first, then the
/// symmetry of infinite distances.
pub fn synth_weak_weight(space: &GQSpace) -> Result<WeakWeight, NotWeaklyWeighted> {
    let n = space.size();
    let mut values = vec![Rational::default(); n];
    for b in space.components().blocks() {
        candidate(space, b, &mut values).map_err(|(x, y)| NotWeaklyWeighted::Equation { x, y })?;
    }
    for x in 0..n {
        for y in 0..n {
            if space.d(x, y).is_infinite() && space.d(y, x).is_finite() {
                return Err(NotWeaklyWeighted::InfiniteAsymmetry { x, y });
            }
        }
    }
    Ok(WeakWeight { values })
}

/// Per-component synthesis glued into one vector.
pub fn synth_cweak_weight(space: &GQSpace) -> Result<CWeakWeight, NotCww> {
    let partition = space.components();
    let mut values = vec![Rational::default(); space.size()];
    for (i, b) in partition.blocks().iter().enumerate() {
        candidate(space, b, &mut values).map_err(|(x, y)| NotCww { component: i, x, y })?;
    }
    Ok(CWeakWeight { values, partition })
}

/// Checks `w` against the identity selected by `mode`.
///
/// `Weak` and `Weight` use `d(x,y) + w(x) = d(y,x) + w(y)` on all pairs,
/// `Componentwise` the same identity on connected pairs, and `Coweight`
/// uses `d(x,y) + w(y) = d(y,x) + w(x)`. The last two modes also need `w ≥ 0`.
pub fn verify_weight(space: &GQSpace, w: &[Rational], mode: WeightMode) -> Result<(), WeightError> {
    let n = space.size();
    if w.len() != n {
        return Err(WeightError::Length { n, got: w.len() });
    }
    for x in 0..n {
        for y in x + 1..n {
            let ok = match mode {
                WeightMode::Weak | WeightMode::Weight => balanced(space.d(x, y), &w[x], space.d(y, x), &w[y]),
                WeightMode::Componentwise => {
                    !space.connected(x, y) || balanced(space.d(x, y), &w[x], space.d(y, x), &w[y])
                }
                WeightMode::Coweight => balanced(space.d(x, y), &w[y], space.d(y, x), &w[x]),
            };
            if !ok {
                return Err(WeightError::Pair(x, y));
            }
        }
    }
    if matches!(mode, WeightMode::Weight | WeightMode::Coweight) {
        if let Some(x) = w.iter().position(|v| v < &Rational::default()) {
            return Err(WeightError::NegativeWeight(x));
        }
    }
    Ok(())
}

/// Bounds of a weak weight and its two normalised representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClassification {
    pub lower_bound: Option<Rational>,
    pub upper_bound: Option<Rational>,
    /// `w − min w`, a weight with minimum 0.
    pub fading_weight: Option<WeakWeight>,
    /// `max w − w`, a co-weight with minimum 0.
    pub fading_coweight: Option<WeakWeight>,
}

/// On a finite carrier both bounds exist, so every field is populated.
pub fn classify_bounds(w: &WeakWeight) -> WeightClassification {
    let lo = w.values.iter().min().cloned();
    let hi = w.values.iter().max().cloned();
    WeightClassification {
        fading_weight: lo
            .as_ref()
            .map(|m| WeakWeight { values: w.values.iter().map(|v| v - m).collect() }),
        fading_coweight: hi
            .as_ref()
            .map(|m| WeakWeight { values: w.values.iter().map(|v| m - v).collect() }),
        lower_bound: lo,
        upper_bound: hi,
    }
}

/// Shifts each block so its minimum is 0.
pub fn fading_per_component(w: &CWeakWeight) -> CWeakWeight {
    let mut values = w.values.clone();
    for b in w.partition.blocks() {
        let m = b.iter().map(|&x| &w.values[x]).min().cloned().unwrap_or_default();
        for &x in b {
            values[x] = &w.values[x] - &m;
        }
    }
    CWeakWeight { values, partition: w.partition.clone() }
}

/// True when `a − b` is constant on every block of `p`.
pub fn differ_by_block_constants(a: &[Rational], b: &[Rational], p: &Partition) -> bool {
    p.blocks().iter().all(|blk| {
        let c = &a[blk[0]] - &b[blk[0]];
        blk.iter().all(|&x| &a[x] - &b[x] == c)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WwDpcAlarm {
    #[error("weight does not certify the space: {0}")]
    NotAWeight(WeightError),
    #[error("DPC fails at ({0}, {1}, {2})")]
    Dpc(usize, usize, usize),
    #[error("additivity along ({0}, {1}, {2}) is not reversed")]
    Reverse(usize, usize, usize),
}

fn reverse_additivity(space: &GQSpace, same_block: impl Fn(usize, usize, usize) -> bool) -> Result<(), WwDpcAlarm> {
    let n = space.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !same_block(x, y, z) {
                    continue;
                }
                if space.d(x, z) == &(space.d(x, y) + space.d(y, z))
                    && space.d(z, x) != &(space.d(z, y) + space.d(y, x))
                {
                    return Err(WwDpcAlarm::Reverse(x, y, z));
                }
            }
        }
    }
    Ok(())
}

/// Consistency check for a verified weak weight: DPC must hold, and every
/// additive triple must stay additive when reversed. Any error is an alarm.
pub fn check_ww_implies_dpc(space: &GQSpace, w: &WeakWeight) -> Result<(), WwDpcAlarm> {
    verify_weight(space, &w.values, WeightMode::Weak).map_err(WwDpcAlarm::NotAWeight)?;
    space.check_dpc().map_err(|e| WwDpcAlarm::Dpc(e.x, e.y, e.z))?;
    reverse_additivity(space, |_, _, _| true)
}

/// Componentwise version: triples are taken inside a single component.
pub fn check_cww_implies_dpc(space: &GQSpace, w: &CWeakWeight) -> Result<(), WwDpcAlarm> {
    verify_weight(space, &w.values, WeightMode::Componentwise).map_err(WwDpcAlarm::NotAWeight)?;
    space.check_dpc().map_err(|e| WwDpcAlarm::Dpc(e.x, e.y, e.z))?;
    let p = &w.partition;
    reverse_additivity(space, |x, y, z| p.same(x, y) && p.same(y, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmetric::validate_gqm;
    use crate::value::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn sierpinski() -> GQSpace {
        GQSpace::from_fn(2, |x, y| DistVal::from_int(if (x, y) == (1, 0) { 1 } else { 0 })).unwrap()
    }

    fn chain(n: usize) -> GQSpace {
        GQSpace::from_fn(n, |x, y| DistVal::from_int((x as i64 - y as i64).max(0))).unwrap()
    }

    #[test]
    fn sierpinski_weight() {
        let w = synth_weak_weight(&sierpinski()).unwrap();
        assert!(differ_by_block_constants(&w.values, &ints(&[1, 0]), &Partition::trivial(2)));
        let c = classify_bounds(&w);
        assert_eq!(c.fading_weight.unwrap().values, ints(&[1, 0]));
        assert_eq!(c.fading_coweight.unwrap().values, ints(&[0, 1]));
    }

    #[test]
    fn not_weighted_example() {
        let d = validate_gqm(
            [[0, 0, 0], [1, 0, 0], [1, 1, 0]]
                .iter()
                .map(|r| r.iter().map(|&v| DistVal::from_int(v)).collect())
                .collect(),
        )
        .unwrap();
        assert!(matches!(synth_weak_weight(&d), Err(NotWeaklyWeighted::Equation { .. })));
    }

    #[test]
    fn chain_weights() {
        let c = chain(3);
        let w = ints(&[0, -1, -2]);
        assert_eq!(verify_weight(&c, &w, WeightMode::Weak), Ok(()));
        assert_eq!(verify_weight(&c, &w, WeightMode::Weight), Err(WeightError::NegativeWeight(1)));
        let cl = classify_bounds(&WeakWeight { values: w });
        assert_eq!(cl.fading_weight.unwrap().values, ints(&[2, 1, 0]));
        assert_eq!(cl.fading_coweight.unwrap().values, ints(&[0, 1, 2]));
        let w4 = synth_weak_weight(&chain(4)).unwrap();
        assert_eq!(check_ww_implies_dpc(&chain(4), &w4), Ok(()));
    }

    #[test]
    fn infinite_asymmetry() {
        let edge = GQSpace::from_fn(2, |x, y| match (x, y) {
            (0, 1) => DistVal::from_int(1),
            (1, 0) => DistVal::Infinity,
            _ => DistVal::zero(),
        })
        .unwrap();
        assert_eq!(synth_weak_weight(&edge), Err(NotWeaklyWeighted::InfiniteAsymmetry { x: 1, y: 0 }));
        let cw = synth_cweak_weight(&edge).unwrap();
        assert_eq!(cw.partition.num_blocks(), 2);
        assert_eq!(check_cww_implies_dpc(&edge, &cw), Ok(()));
    }

    #[test]
    fn metric_takes_zero_weight() {
        let m = GQSpace::from_fn(3, |x, y| DistVal::from_int((x as i64 - y as i64).abs())).unwrap();
        assert_eq!(verify_weight(&m, &ints(&[0, 0, 0]), WeightMode::Weak), Ok(()));
        let w = synth_weak_weight(&m).unwrap();
        assert_eq!(w.values, ints(&[0, 0, 0]));
    }
}
