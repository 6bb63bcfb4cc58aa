//! Endomorphisms of finite meet-semilattices given by a map table.

use super::{inert_by_powers, inert_by_trajectory, inert_one_step, EntropyError, SemilatticeEndo};
use crate::order::Partition;
use crate::semilattice::generate::is_endomorphism;
use crate::semilattice::MeetSL;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteEndo {
    sl: MeetSL,
    map: Vec<usize>,
}

/// Verdicts of the three inertness criteria at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InertVerdicts {
    pub trajectory: bool,
    pub powers: bool,
    pub one_step: bool,
}

impl FiniteEndo {
    pub fn new(sl: MeetSL, map: Vec<usize>) -> Result<Self, EntropyError> {
        if map.len() != sl.size() || map.iter().any(|&v| v >= sl.size()) {
            return Err(EntropyError::Invalid(format!(
                "map table must have {} entries in range",
                sl.size()
            )));
        }
        is_endomorphism(&sl, &map).map_err(|(a, b)| EntropyError::NotAnEndomorphism(a, b))?;
        Ok(FiniteEndo { sl, map })
    }

    pub fn semilattice(&self) -> &MeetSL {
        &self.sl
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `a ≅ b ⇒ φ(a) ≅ φ(b)`; on failure, the offending pair.
    pub fn respects(&self, cong: &Partition) -> Result<(), (usize, usize)> {
        for block in cong.blocks() {
            for &a in block {
                for &b in block {
                    if !cong.same(self.map[a], self.map[b]) {
                        return Err((a, b));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn inert_trajectory(&self, x: usize, cong: &Partition) -> bool {
        inert_by_trajectory(self, &x, |a, b| cong.same(*a, *b), self.sl.size() + 1).expect("finite carrier")
    }

    pub fn inert_powers(&self, x: usize, cong: &Partition) -> bool {
        inert_by_powers(self, &x, |a, b| cong.same(*a, *b), self.sl.size() + 1).expect("finite carrier")
    }

    /// Criterion (c) without checking that it applies.
    pub fn inert_one_step(&self, x: usize, cong: &Partition) -> bool {
        inert_one_step(self, &x, |a, b| cong.same(*a, *b)).expect("finite carrier")
    }

    /// Criterion (c), refused when the map does not respect `cong`.
    pub fn inert_one_step_checked(&self, x: usize, cong: &Partition) -> Result<bool, EntropyError> {
        self.respects(cong)
            .map_err(|(a, b)| EntropyError::RespectCheckFailed(a.to_string(), b.to_string()))?;
        Ok(self.inert_one_step(x, cong))
    }

    pub fn verdicts(&self, x: usize, cong: &Partition) -> InertVerdicts {
        InertVerdicts {
            trajectory: self.inert_trajectory(x, cong),
            powers: self.inert_powers(x, cong),
            one_step: self.inert_one_step(x, cong),
        }
    }
}

impl SemilatticeEndo for FiniteEndo {
    type Elem = usize;

    fn meet(&self, a: &usize, b: &usize) -> Result<usize, EntropyError> {
        Ok(self.sl.meet(*a, *b))
    }

    fn apply(&self, a: &usize) -> Result<usize, EntropyError> {
        Ok(self.map[*a])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{entropy_point, entropy_sup, trajectory, SupKind};
    use crate::fixtures::{chain_sl, diamond, diamond_congruence, diamond_endo};
    use crate::value::int;

    #[test]
    fn constant_map_on_chain() {
        let e = FiniteEndo::new(chain_sl(3), vec![0, 0, 0]).unwrap();
        let eq = Partition::discrete(3);
        assert!(!e.inert_trajectory(2, &eq));
        assert!(e.inert_trajectory(2, &Partition::trivial(3)));
        assert_eq!(trajectory(&e, &2, 3).unwrap(), vec![2, 0, 0]);
    }

    #[test]
    fn identity_trajectory_is_constant() {
        let e = FiniteEndo::new(chain_sl(3), vec![0, 1, 2]).unwrap();
        assert_eq!(trajectory(&e, &1, 4).unwrap(), vec![1; 4]);
    }

    #[test]
    fn rejects_non_endomorphism() {
        assert!(matches!(
            FiniteEndo::new(diamond(), vec![0, 1, 1, 3]),
            Err(EntropyError::NotAnEndomorphism(..))
        ));
    }

    #[test]
    fn diamond_split() {
        let e = FiniteEndo::new(diamond(), diamond_endo()).unwrap();
        let c = diamond_congruence();
        let v = e.verdicts(3, &c);
        assert!(v.one_step && !v.powers && !v.trajectory);
        assert!(matches!(e.inert_one_step_checked(3, &c), Err(EntropyError::RespectCheckFailed(..))));
    }

    #[test]
    fn finite_entropy_is_zero() {
        let e = FiniteEndo::new(chain_sl(4), vec![0, 0, 1, 2]).unwrap();
        let f = [int(5), int(3), int(2), int(0)];
        let est = entropy_point(&e, &3, |t| Ok(f[*t].clone()), 32, 8).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, int(0));
        let all: Vec<usize> = (0..4).collect();
        let r = entropy_sup(&e, |t| Ok(f[*t].clone()), |_| Ok(true), &all, 32, 8, true).unwrap();
        assert_eq!((r.value, r.kind), (Some(int(0)), SupKind::Exact));
    }
}
