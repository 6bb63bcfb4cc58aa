//! Does the glued weight `w_X` give entropy values that depend on the chosen
//! representatives when the space fails DPC? This harness only tabulates.

use super::{entropy_sup, EntropyError, FiniteEndo};
use crate::qmetric::GQSpace;
use crate::semilattice::correspondence::glued_unchecked;
use crate::value::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepRow {
    /// One representative per component, in block order.
    pub reps: Vec<usize>,
    pub weight: Vec<Rational>,
    /// Entropy per seed, `None` where the seed is not inert.
    pub per_seed: Vec<Option<Rational>>,
    pub sup: Option<Rational>,
}

/// Every representative family, each with the entropy of `e` computed from
/// the glued weight. Points are inert relative to the components of `space`.
pub fn representative_dependence(
    space: &GQSpace,
    e: &FiniteEndo,
    horizon: usize,
    window: usize,
) -> Result<Vec<RepRow>, EntropyError> {
    if space.size() != e.semilattice().size() {
        return Err(EntropyError::Invalid("space and semilattice differ in size".into()));
    }
    let comps = space.components();
    let blocks = comps.blocks();
    let seeds: Vec<usize> = (0..space.size()).collect();
    let mut rows = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    loop {
        let reps: Vec<usize> = choice.iter().zip(blocks).map(|(&i, b)| b[i]).collect();
        let w = glued_unchecked(space, Some(&reps)).values;
        let report = entropy_sup(
            e,
            |t| Ok(w[*t].clone()),
            |x| Ok(e.inert_trajectory(*x, &comps)),
            &seeds,
            horizon,
            window,
            true,
        )?;
        rows.push(RepRow {
            reps,
            weight: w.clone(),
            per_seed: report.rows.iter().map(|r| r.estimate.as_ref().map(|x| x.value.clone())).collect(),
            sup: report.value,
        });
        // Odometer over the product of blocks.
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < blocks[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            return Ok(rows);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain_sl, not_weighted};

    #[test]
    fn tabulates_every_family() {
        let space = not_weighted();
        let n = space.size();
        let e = FiniteEndo::new(chain_sl(n), (0..n).collect()).unwrap();
        let rows = representative_dependence(&space, &e, 16, 4).unwrap();
        let expected: usize = space.components().blocks().iter().map(Vec::len).product();
        assert_eq!(rows.len(), expected);
    }
}
