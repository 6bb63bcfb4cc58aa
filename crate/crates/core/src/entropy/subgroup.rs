//! Finite subgroups of the direct sum of countably many copies of ℤ/p^k,
//! ordered by reverse inclusion so that meets are sums, with a coordinate
//! shift.

use std::collections::BTreeSet;

use super::{EntropyError, SemilatticeEndo};
use crate::value::DistVal;

pub const DEFAULT_BUDGET: usize = 1 << 16;

/// A finitely supported vector, trailing zeros trimmed.
pub type Vector = Vec<u32>;

/// A finite subgroup as its full element set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elems: BTreeSet<Vector>,
}

fn trim(mut v: Vector) -> Vector {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl Subgroup {
    pub fn zero() -> Self {
        Subgroup { elems: BTreeSet::from([Vec::new()]) }
    }

    pub fn elements(&self) -> &BTreeSet<Vector> {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.elems.contains(&trim(v.to_vec()))
    }
}

/// `(x_0, x_1, …) ↦ (0, …, 0, x_0, x_1, …)` with `shift` leading zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateShift {
    p: u32,
    k: u32,
    modulus: u32,
    shift: usize,
    budget: usize,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl CoordinateShift {
    pub fn new(p: u32, k: u32, shift: usize) -> Result<Self, EntropyError> {
        Self::with_budget(p, k, shift, DEFAULT_BUDGET)
    }

    pub fn with_budget(p: u32, k: u32, shift: usize, budget: usize) -> Result<Self, EntropyError> {
        if !is_prime(p) {
            return Err(EntropyError::Invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(EntropyError::Invalid("exponent must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|m| *m <= 1 << 16)
            .ok_or_else(|| EntropyError::Invalid(format!("{p}^{k} is too large")))?;
        Ok(CoordinateShift { p, k, modulus, shift, budget })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vector {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.modulus)
                .collect(),
        )
    }

    fn check(&self, size: usize) -> Result<(), EntropyError> {
        if size > self.budget {
            return Err(EntropyError::HorizonExceeded { size, budget: self.budget });
        }
        Ok(())
    }

    /// Closure of `gens` under addition.
    pub fn generated(&self, gens: &[Vector]) -> Result<Subgroup, EntropyError> {
        let mut h = Subgroup::zero();
        for g in gens {
            let g = trim(g.iter().map(|c| c % self.modulus).collect());
            if h.elems.contains(&g) {
                continue;
            }
            let mut multiples = vec![Vec::new()];
            let mut m = g.clone();
            while !m.is_empty() {
                multiples.push(m.clone());
                m = self.add(&m, &g);
            }
            h = self.sum_with(&h, &multiples)?;
        }
        Ok(h)
    }

    fn sum_with(&self, h: &Subgroup, ks: &[Vector]) -> Result<Subgroup, EntropyError> {
        let mut out = BTreeSet::new();
        for a in &h.elems {
            for b in ks {
                out.insert(self.add(a, b));
                self.check(out.len())?;
            }
        }
        Ok(Subgroup { elems: out })
    }

    /// `e_i`.
    pub fn unit(i: usize) -> Vector {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        v
    }

    /// Exponent `e` with `|H| = p^e`.
    pub fn log_order(&self, h: &Subgroup) -> u32 {
        let mut n = h.order();
        let mut e = 0;
        while n > 1 {
            assert_eq!(n % self.p as usize, 0, "subgroup order is a power of p");
            n /= self.p as usize;
            e += 1;
        }
        e
    }

    /// `d(H, K) = log_p |H+K : H|`.
    pub fn distance(&self, h: &Subgroup, k: &Subgroup) -> Result<DistVal, EntropyError> {
        let s = self.meet(h, k)?;
        Ok(DistVal::from_int(i64::from(self.log_order(&s)) - i64::from(self.log_order(h))))
    }
}

impl SemilatticeEndo for CoordinateShift {
    type Elem = Subgroup;

    fn meet(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup, EntropyError> {
        let ks: Vec<Vector> = b.elems.iter().cloned().collect();
        self.sum_with(a, &ks)
    }

    fn apply(&self, a: &Subgroup) -> Result<Subgroup, EntropyError> {
        let elems = a
            .elems
            .iter()
            .map(|v| if v.is_empty() { Vec::new() } else { [vec![0; self.shift], v.clone()].concat() })
            .collect();
        Ok(Subgroup { elems })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{entropy_point, gennorm_entropy, inert_by_distance, trajectory, GenNorm};
    use crate::value::int;

    #[test]
    fn bernoulli_trajectory() {
        let e = CoordinateShift::new(2, 1, 1).unwrap();
        let h = e.generated(&[CoordinateShift::unit(0)]).unwrap();
        let ts = trajectory(&e, &h, 5).unwrap();
        for (n, t) in ts.iter().enumerate() {
            assert_eq!(t.order(), 1 << (n + 1));
            assert!(t.contains(&CoordinateShift::unit(n)));
        }
        assert!(inert_by_distance(&e, &h, |a, b| e.distance(a, b).unwrap()).unwrap());
    }

    #[test]
    fn bernoulli_entropy_one() {
        let e = CoordinateShift::new(3, 1, 1).unwrap();
        let h = e.generated(&[CoordinateShift::unit(0)]).unwrap();
        let est = entropy_point(&e, &h, |t| Ok(e.distance(&h, t)?.finite().cloned().unwrap()), 9, 4).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, int(1));
        let v = GenNorm::new(|s: &Subgroup| DistVal::from_int(e.log_order(s).into()));
        let seeds = vec![h, e.generated(&[vec![1, 1]]).unwrap()];
        let r = gennorm_entropy(&e, &v, &seeds, 9, 4, false).unwrap();
        assert_eq!(r.value, Some(int(1)));
    }

    #[test]
    fn cyclic_of_order_four() {
        let e = CoordinateShift::new(2, 2, 1).unwrap();
        let h = e.generated(&[vec![1]]).unwrap();
        assert_eq!(h.order(), 4);
        assert_eq!(e.log_order(&h), 2);
        let h2 = e.generated(&[vec![2]]).unwrap();
        assert_eq!(e.distance(&h2, &h).unwrap(), DistVal::from_int(1));
        assert_eq!(e.distance(&h, &h2).unwrap(), DistVal::zero());
    }

    #[test]
    fn budget_and_validation() {
        let e = CoordinateShift::with_budget(2, 1, 1, 16).unwrap();
        let h = e.generated(&[CoordinateShift::unit(0)]).unwrap();
        assert!(matches!(trajectory(&e, &h, 6), Err(EntropyError::HorizonExceeded { .. })));
        assert!(CoordinateShift::new(4, 1, 1).is_err());
        assert!(CoordinateShift::new(2, 0, 1).is_err());
    }
}
