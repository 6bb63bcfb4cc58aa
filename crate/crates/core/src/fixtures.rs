//! Small named spaces used by the tests, the acceptance suite and the CLI.

use crate::order::{OrderRel, Partition};
use crate::qmetric::GQSpace;
use crate::semilattice::{semilattice_from_order, MeetSL};
use crate::value::DistVal;

/// Two points, `d(0,1) = 0`, `d(1,0) = 1`.
pub fn sierpinski() -> GQSpace {
    GQSpace::from_fn(2, |x, y| DistVal::from_int(i64::from((x, y) == (1, 0)))).unwrap()
}

/// `d(x,y) = max(x − y, 0)` on `0..n`.
pub fn chain_space(n: usize) -> GQSpace {
    GQSpace::from_fn(n, |x, y| DistVal::from_int((x as i64 - y as i64).max(0))).unwrap()
}

/// The chain `0 < 1 < … < n−1` as a meet-semilattice.
pub fn chain_sl(n: usize) -> MeetSL {
    semilattice_from_order(&OrderRel::chain(n)).unwrap()
}

/// Three points totally ordered `0 < 1 < 2` whose downward distances are all
/// 1, so that `d(2,0) < d(2,1) + d(1,0)`.
pub fn not_weighted() -> GQSpace {
    GQSpace::from_fn(3, |x, y| DistVal::from_int(i64::from(x > y))).unwrap()
}

/// Subsets of a `bits`-element set as bitmasks, ordered by reverse
/// inclusion so that meet is union.
pub fn power_set_sl(bits: u32) -> MeetSL {
    let n = 1usize << bits;
    semilattice_from_order(&OrderRel::from_fn(n, |a, b| a & b == b).unwrap()).unwrap()
}

/// `d(A,B) = |B \ A|` on the same carrier as [`power_set_sl`].
pub fn power_set_space(bits: u32) -> GQSpace {
    let n = 1usize << bits;
    GQSpace::from_fn(n, |a, b| DistVal::from_int(i64::from((b & !a).count_ones()))).unwrap()
}

/// A 3-point invariant-looking space that is not invariant: `0` lies below
/// the incomparable `1` and `2`, and `d(1,2) = 1/2 < d(1, 1∧2) = 1`.
pub fn non_invariant() -> GQSpace {
    GQSpace::from_fn(3, |x, y| match (x, y) {
        (1, 0) | (2, 0) => DistVal::from_int(1),
        (1, 2) | (2, 1) => DistVal::ratio(1, 2),
        _ => DistVal::zero(),
    })
    .unwrap()
}

/// Subgroups `{0} , 2ℤ/4, ℤ/4` of `ℤ/4` with `d(H,K) = log₂|H+K : H|`.
pub fn subgroups_z4() -> GQSpace {
    let size = [1i64, 2, 4];
    GQSpace::from_fn(3, |h, k| {
        let sum = size[h.max(k)];
        DistVal::from_int((sum / size[h]).trailing_zeros() as i64)
    })
    .unwrap()
}

/// Four-element lattice `⊥ = 0`, `x = 1`, `y = 2`, `⊤ = 3`.
pub fn diamond() -> MeetSL {
    semilattice_from_order(&OrderRel::from_fn(4, |a, b| a == b || a == 0 || b == 3).unwrap()).unwrap()
}

/// Endomorphism of [`diamond`] sending `⊤` to `x` and everything else to `⊥`.
pub fn diamond_endo() -> Vec<usize> {
    vec![0, 0, 0, 1]
}

/// Blocks `{⊤, x}` and `{y, ⊥}` of [`diamond`].
pub fn diamond_congruence() -> Partition {
    Partition::new(4, vec![vec![1, 3], vec![0, 2]]).unwrap()
}
