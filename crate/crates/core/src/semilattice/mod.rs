//! Finite meet-semilattices and their congruences.
//!
//! Join-semilattices are handled by storing the meet-semilattice of the
//! reversed order: its meet is the join of the original.

pub mod correspondence;
pub mod generate;
pub mod valuation;

use thiserror::Error;

use crate::order::{OrderError, OrderRel, Partition};

/// A finite meet-semilattice on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeetSL {
    meet: Vec<Vec<usize>>,
    order: OrderRel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlError {
    #[error("{0} and {1} have no infimum")]
    NotASemilattice(usize, usize),
    #[error("meet table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Computes pairwise infima of a partial order.
pub fn semilattice_from_order(order: &OrderRel) -> Result<MeetSL, SlError> {
    let n = order.len();
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in x..n {
            let lower: Vec<usize> = (0..n).filter(|&z| order.leq(z, x) && order.leq(z, y)).collect();
            let inf = lower
                .iter()
                .copied()
                .find(|&m| lower.iter().all(|&z| order.leq(z, m)))
                .ok_or(SlError::NotASemilattice(x, y))?;
            meet[x][y] = inf;
            meet[y][x] = inf;
        }
    }
    Ok(MeetSL { meet, order: order.clone() })
}

impl MeetSL {
    /// Validates an idempotent, commutative, associative table and derives
    /// `x ≤ y ⇔ x ∧ y = x`.
    pub fn from_meet_table(meet: Vec<Vec<usize>>) -> Result<Self, SlError> {
        let n = meet.len();
        if meet.iter().any(|r| r.len() != n) {
            return Err(SlError::BadTable("not square".into()));
        }
        if meet.iter().flatten().any(|&v| v >= n) {
            return Err(SlError::BadTable("entry out of range".into()));
        }
        for x in 0..n {
            if meet[x][x] != x {
                return Err(SlError::BadTable(format!("{x} ∧ {x} ≠ {x}")));
            }
            for y in 0..n {
                if meet[x][y] != meet[y][x] {
                    return Err(SlError::BadTable(format!("{x} ∧ {y} ≠ {y} ∧ {x}")));
                }
                for z in 0..n {
                    if meet[meet[x][y]][z] != meet[x][meet[y][z]] {
                        return Err(SlError::BadTable(format!("not associative at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        let order = OrderRel::from_fn(n, |x, y| meet[x][y] == x)?;
        Ok(MeetSL { meet, order })
    }

    /// The family ordered by inclusion, meet being intersection. `sets` are
    /// bitmasks; the family must be closed under intersection.
    pub fn from_family(sets: &[u32]) -> Result<Self, SlError> {
        let n = sets.len();
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let m = sets[x] & sets[y];
                meet[x][y] = sets
                    .iter()
                    .position(|&s| s == m)
                    .ok_or_else(|| SlError::BadTable(format!("family not closed: {x} ∩ {y}")))?;
            }
        }
        Self::from_meet_table(meet)
    }

    pub fn size(&self) -> usize {
        self.meet.len()
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    pub fn order(&self) -> &OrderRel {
        &self.order
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.leq(x, y)
    }

    pub fn bottom(&self) -> usize {
        (0..self.size()).fold(0, |acc, x| self.meet(acc, x))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.size()).find(|&t| (0..self.size()).all(|x| self.leq(x, t)))
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.size()).filter(|&y| self.leq(y, x)).collect()
    }

    /// Meet-semilattice of the reversed order, if it is one. Its meet is the
    /// join of `self`.
    pub fn dual(&self) -> Result<MeetSL, SlError> {
        semilattice_from_order(&self.order.dual())
    }
}

/// Failure of the congruence test.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceFailure {
    #[error("partition does not cover the carrier")]
    Size,
    #[error("block is not convex: {0} ≤ {1} ≤ {2}")]
    Convexity(usize, usize, usize),
    #[error("{0} ≅ {1} and {2} ≅ {3} but the meets are not")]
    Law(usize, usize, usize, usize),
}

/// Convexity of every block, then the compatibility law.
pub fn check_congruence(s: &MeetSL, p: &Partition) -> Result<(), CongruenceFailure> {
    let n = s.size();
    if p.len() != n {
        return Err(CongruenceFailure::Size);
    }
    for b in p.blocks() {
        if let Some((x, y, z)) = s.order().convexity_witness(b) {
            return Err(CongruenceFailure::Convexity(x, y, z));
        }
    }
    // With reflexivity and transitivity the two-sided law reduces to
    // x ≅ y ⇒ x∧z ≅ y∧z.
    for x in 0..n {
        for y in x + 1..n {
            if !p.same(x, y) {
                continue;
            }
            for z in 0..n {
                if !p.same(s.meet(x, z), s.meet(y, z)) {
                    return Err(CongruenceFailure::Law(x, y, z, z));
                }
            }
        }
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Smallest congruence identifying every given pair.
pub fn congruence_closure(s: &MeetSL, pairs: &[(usize, usize)]) -> Partition {
    let n = s.size();
    let mut uf = UnionFind((0..n).collect());
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for z in 0..n {
                changed |= uf.union(s.meet(x, z), s.meet(r, z));
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Partition::from_labels(&labels)
}
