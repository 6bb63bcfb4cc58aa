//! Finite subsets of ℤ ordered by reverse inclusion, so that meets are
//! unions, with an integer shift.

use std::collections::BTreeSet;

use super::{EntropyError, SemilatticeEndo};
use crate::value::DistVal;

/// `A ↦ A + c` on finite subsets of ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetShift {
    pub shift: i64,
}

impl SetShift {
    pub fn new(shift: i64) -> Self {
        SetShift { shift }
    }

    /// `d(A, B) = |B \ A|`.
    pub fn distance(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> DistVal {
        DistVal::from_int(b.difference(a).count() as i64)
    }

    pub fn cardinality(a: &BTreeSet<i64>) -> DistVal {
        DistVal::from_int(a.len() as i64)
    }

    /// Finite symmetric difference; always true between finite sets.
    pub fn related(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> bool {
        Self::distance(a, b).is_finite() && Self::distance(b, a).is_finite()
    }
}

impl SemilatticeEndo for SetShift {
    type Elem = BTreeSet<i64>;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, EntropyError> {
        Ok(a.union(b).copied().collect())
    }

    fn apply(&self, a: &Self::Elem) -> Result<Self::Elem, EntropyError> {
        a.iter()
            .map(|v| v.checked_add(self.shift).ok_or_else(|| EntropyError::Invalid("shift overflows i64".into())))
            .collect()
    }
}
