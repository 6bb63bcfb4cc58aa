//! Partitions and partial orders on index carriers `0..n`.

use thiserror::Error;

/// A partition of `0..n` into nonempty disjoint blocks.
///
/// Stored in normal form: every block is sorted and blocks are ordered by
/// their smallest element, so structural equality is equality of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("index {0} is out of range")]
    OutOfRange(usize),
    #[error("index {0} appears in more than one block")]
    Duplicate(usize),
    #[error("index {0} is not covered")]
    Uncovered(usize),
    #[error("empty block")]
    EmptyBlock,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &x in b {
                if x >= n {
                    return Err(PartitionError::OutOfRange(x));
                }
                if seen[x] {
                    return Err(PartitionError::Duplicate(x));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(PartitionError::Uncovered(x));
        }
        Ok(Self::normalise(n, blocks))
    }

    /// Builds the partition from a block label per point.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let idx = *map.entry(*l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(x);
        }
        Self::normalise(labels.len(), blocks)
    }

    /// Classes of an equivalence given as a predicate. The predicate is
    /// trusted to be an equivalence; callers that need to verify
    /// transitivity do so themselves.
    pub fn from_equivalence(n: usize, mut equiv: impl FnMut(usize, usize) -> bool) -> Self {
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if label[x] != usize::MAX {
                continue;
            }
            label[x] = next;
            for y in x + 1..n {
                if label[y] == usize::MAX && equiv(x, y) {
                    label[y] = next;
                }
            }
            next += 1;
        }
        Self::from_labels(&label)
    }

    pub fn discrete(n: usize) -> Self {
        Self::normalise(n, (0..n).map(|x| vec![x]).collect())
    }

    pub fn trivial(n: usize) -> Self {
        Self::normalise(n, vec![(0..n).collect()])
    }

    fn normalise(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut block_of = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        Partition { blocks, block_of }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| coarser.same(b[0], x)))
    }
}

/// A partial order on `0..n` as a boolean matrix, `leq[x][y]` meaning `x ≤ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderRel {
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation matrix is not square")]
    NotSquare,
    #[error("not reflexive at {0}")]
    NotReflexive(usize),
    #[error("not antisymmetric: {0} ≤ {1} ≤ {0}")]
    NotAntisymmetric(usize, usize),
    #[error("not transitive: {0} ≤ {1} ≤ {2} but {0} ≰ {2}")]
    NotTransitive(usize, usize, usize),
}

impl OrderRel {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(OrderError::NotSquare);
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(OrderError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(OrderError::NotAntisymmetric(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !leq[x][y] {
                    continue;
                }
                for z in 0..n {
                    if leq[y][z] && !leq[x][z] {
                        return Err(OrderError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        Ok(OrderRel { leq })
    }

    /// Builds from a predicate and validates.
    pub fn from_fn(n: usize, mut leq: impl FnMut(usize, usize) -> bool) -> Result<Self, OrderError> {
        Self::new((0..n).map(|x| (0..n).map(|y| leq(x, y)).collect()).collect())
    }

    pub fn equality(n: usize) -> Self {
        OrderRel {
            leq: (0..n).map(|x| (0..n).map(|y| x == y).collect()).collect(),
        }
    }

    /// The usual order `0 < 1 < … < n−1`.
    pub fn chain(n: usize) -> Self {
        OrderRel {
            leq: (0..n).map(|x| (0..n).map(|y| x <= y).collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// The inverse order `≥`.
    pub fn dual(&self) -> OrderRel {
        let n = self.len();
        OrderRel {
            leq: (0..n).map(|x| (0..n).map(|y| self.leq[y][x]).collect()).collect(),
        }
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// A block is convex when `x ≤ y ≤ z` with `x, z` in it forces `y` in it.
    /// Returns a violating triple.
    pub fn convexity_witness(&self, block: &[usize]) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let mut inside = vec![false; n];
        for &b in block {
            inside[b] = true;
        }
        for &x in block {
            for &z in block {
                if !self.leq(x, z) {
                    continue;
                }
                for y in 0..n {
                    if !inside[y] && self.leq(x, y) && self.leq(y, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}
