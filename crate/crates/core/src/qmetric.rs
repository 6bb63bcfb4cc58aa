//! Finite generalised quasi-metric spaces.

use thiserror::Error;

use crate::order::{OrderRel, Partition};
use crate::value::DistVal;

/// A validated generalised quasi-metric on `0..n`.
///
/// Only [`validate_gqm`] and the structure-preserving operations below build
/// values of this type, so every `GQSpace` satisfies both axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GQSpace {
    d: Vec<Vec<DistVal>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmError {
    #[error("empty carrier")]
    Empty,
    #[error("matrix is not square")]
    NotSquare,
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("QM1 violated at ({0}, {1})")]
    Qm1Violation(usize, usize),
    #[error("QM2 violated: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    Qm2Violation(usize, usize, usize),
    #[error("label table has {got} entries for {n} points")]
    LabelCount { n: usize, got: usize },
}

/// Checks both axioms and wraps the matrix.
///
/// Checks run in the order shape, sign, QM1, QM2. A nonzero diagonal entry
/// is reported as `Qm1Violation(x, x)`.
pub fn validate_gqm(d: Vec<Vec<DistVal>>) -> Result<GQSpace, QmError> {
    let n = d.len();
    if n == 0 {
        return Err(QmError::Empty);
    }
    if d.iter().any(|r| r.len() != n) {
        return Err(QmError::NotSquare);
    }
    for x in 0..n {
        for y in 0..n {
            if d[x][y].is_negative() {
                return Err(QmError::NegativeEntry(x, y));
            }
        }
    }
    for x in 0..n {
        if !d[x][x].is_zero() {
            return Err(QmError::Qm1Violation(x, x));
        }
        for y in x + 1..n {
            if d[x][y].is_zero() && d[y][x].is_zero() {
                return Err(QmError::Qm1Violation(x, y));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if d[x][y].is_infinite() {
                continue;
            }
            for z in 0..n {
                if d[x][z] > &d[x][y] + &d[y][z] {
                    return Err(QmError::Qm2Violation(x, y, z));
                }
            }
        }
    }
    Ok(GQSpace { d, labels: None })
}

/// A descending chain `x ≥ y ≥ z` on which distances do not add up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpcWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl GQSpace {
    /// Builds and validates from an entry function.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> DistVal) -> Result<Self, QmError> {
        validate_gqm((0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, QmError> {
        if labels.len() != self.size() {
            return Err(QmError::LabelCount { n: self.size(), got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self, x: usize, y: usize) -> &DistVal {
        &self.d[x][y]
    }

    pub fn matrix(&self) -> &[Vec<DistVal>] {
        &self.d
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a point: its label or its index.
    pub fn name(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// `d⁻¹(x, y) = d(y, x)`.
    pub fn conjugate(&self) -> GQSpace {
        let n = self.size();
        GQSpace {
            d: (0..n).map(|x| (0..n).map(|y| self.d[y][x].clone()).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Entrywise maximum of `d` and its conjugate.
    pub fn symmetrise(&self) -> GQSpace {
        let n = self.size();
        GQSpace {
            d: (0..n)
                .map(|x| (0..n).map(|y| self.d[x][y].clone().max(self.d[y][x].clone())).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_metric(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..n).all(|y| self.d[x][y] == self.d[y][x]))
    }

    /// Points at finite distance in both directions.
    pub fn connected(&self, x: usize, y: usize) -> bool {
        self.d[x][y].is_finite() && self.d[y][x].is_finite()
    }

    /// Classes of `≅_d`.
    pub fn components(&self) -> Partition {
        let p = Partition::from_equivalence(self.size(), |x, y| self.connected(x, y));
        for b in p.blocks() {
            for &x in b {
                for &y in b {
                    assert!(self.connected(x, y), "≅_d is not transitive at ({x}, {y})");
                }
            }
        }
        p
    }

    /// `x ≤ y` iff `d(x, y) = 0`.
    pub fn specialisation_order(&self) -> OrderRel {
        OrderRel::from_fn(self.size(), |x, y| self.d[x][y].is_zero())
            .expect("specialisation order of a validated space is a partial order")
    }

    /// Descending path condition. Returns the first failing chain in
    /// lexicographic `(x, y, z)` order.
    pub fn check_dpc(&self) -> Result<(), DpcWitness> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                if y == x || !self.d[y][x].is_zero() {
                    continue;
                }
                for z in 0..n {
                    if z == y || !self.d[z][y].is_zero() {
                        continue;
                    }
                    if self.d[x][z] != &self.d[x][y] + &self.d[y][z] {
                        return Err(DpcWitness { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// DPC checked separately on every component, witness in global indices.
    pub fn check_dpc_by_components(&self) -> Result<(), DpcWitness> {
        for b in self.components().blocks() {
            if let Err(w) = self.restrict(b).check_dpc() {
                return Err(DpcWitness { x: b[w.x], y: b[w.y], z: b[w.z] });
            }
        }
        Ok(())
    }

    /// `x₁ ≤ x₂` and `y₂ ≤ y₁` force `d(x₁, y₁) ≤ d(x₂, y₂)`. Holds on every
    /// valid space, so a witness `(x₁, x₂, y₁, y₂)` points at a validator bug.
    pub fn check_monotonicity(&self) -> Result<(), (usize, usize, usize, usize)> {
        let n = self.size();
        for x1 in 0..n {
            for x2 in 0..n {
                if !self.d[x1][x2].is_zero() {
                    continue;
                }
                for y1 in 0..n {
                    for y2 in 0..n {
                        if self.d[y2][y1].is_zero() && self.d[x1][y1] > self.d[x2][y2] {
                            return Err((x1, x2, y1, y2));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Induced subspace on `points`, reindexed in the given order.
    pub fn restrict(&self, points: &[usize]) -> GQSpace {
        GQSpace {
            d: points
                .iter()
                .map(|&x| points.iter().map(|&y| self.d[x][y].clone()).collect())
                .collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| points.iter().map(|&x| l[x].clone()).collect()),
        }
    }
}

/// Block-diagonal sum with `∞` between different summands. `None` on an
/// empty list. Labels survive only when every summand has them.
pub fn disjoint_union(spaces: &[GQSpace]) -> Option<GQSpace> {
    if spaces.is_empty() {
        return None;
    }
    let n: usize = spaces.iter().map(GQSpace::size).sum();
    let mut d = vec![vec![DistVal::Infinity; n]; n];
    let mut off = 0;
    for s in spaces {
        for x in 0..s.size() {
            for y in 0..s.size() {
                d[off + x][off + y] = s.d[x][y].clone();
            }
        }
        off += s.size();
    }
    let labels = spaces
        .iter()
        .map(|s| s.labels.clone())
        .collect::<Option<Vec<_>>>()
        .map(|ls| ls.concat());
    Some(GQSpace { d, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<DistVal>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| if v < 0 { DistVal::Infinity } else { DistVal::from_int(v) }).collect())
            .collect()
    }

    fn sierpinski() -> GQSpace {
        validate_gqm(m(&[&[0, 0], &[1, 0]])).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_gqm(m(&[&[0, 0], &[1, 0]])).is_ok());
        assert_eq!(validate_gqm(m(&[&[0, 0], &[0, 0]])), Err(QmError::Qm1Violation(0, 1)));
        assert_eq!(
            validate_gqm(m(&[&[0, 1, 5], &[1, 0, 1], &[5, 1, 0]])),
            Err(QmError::Qm2Violation(0, 1, 2))
        );
        assert_eq!(
            validate_gqm(vec![vec![DistVal::zero(), DistVal::from_int(-1)], vec![DistVal::zero(), DistVal::zero()]]),
            Err(QmError::NegativeEntry(0, 1))
        );
        assert_eq!(validate_gqm(m(&[&[1]])), Err(QmError::Qm1Violation(0, 0)));
    }

    #[test]
    fn conjugate_and_symmetrise() {
        let s = sierpinski();
        let c = s.conjugate();
        assert_eq!(c.d(0, 1), &DistVal::from_int(1));
        assert_eq!(c.d(1, 0), &DistVal::zero());
        assert_eq!(c.conjugate(), s);
        let sy = s.symmetrise();
        assert_eq!(sy.d(0, 1), &DistVal::from_int(1));
        assert!(sy.is_metric());
        let inf = validate_gqm(m(&[&[0, -1], &[2, 0]])).unwrap().symmetrise();
        assert!(inf.d(0, 1).is_infinite() && inf.d(1, 0).is_infinite());
    }

    #[test]
    fn components_and_order() {
        let s = sierpinski();
        assert_eq!(s.components().num_blocks(), 1);
        assert!(s.specialisation_order().leq(0, 1));
        assert!(!s.specialisation_order().leq(1, 0));
        let split = validate_gqm(m(&[&[0, -1], &[-1, 0]])).unwrap();
        assert_eq!(split.components().num_blocks(), 2);
        let edge = validate_gqm(m(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(edge.components().num_blocks(), 2);
    }

    #[test]
    fn dpc_examples() {
        let chain = GQSpace::from_fn(3, |x, y| DistVal::from_int((x as i64 - y as i64).max(0))).unwrap();
        assert_eq!(chain.check_dpc(), Ok(()));
        let bad = validate_gqm(m(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]])).unwrap();
        assert_eq!(bad.check_dpc(), Err(DpcWitness { x: 2, y: 1, z: 0 }));
        assert_eq!(bad.check_dpc_by_components(), Err(DpcWitness { x: 2, y: 1, z: 0 }));
    }

    #[test]
    fn union_of_sierpinski_with_itself() {
        let u = disjoint_union(&[sierpinski(), sierpinski()]).unwrap();
        assert_eq!(u.size(), 4);
        assert_eq!(u.components().num_blocks(), 2);
        assert!(u.d(0, 2).is_infinite());
        assert!(validate_gqm(u.matrix().to_vec()).is_ok());
        assert!(disjoint_union(&[]).is_none());
    }
}
