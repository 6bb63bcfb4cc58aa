//! Semivaluations and semi-co-valuations, plain and relative to a congruence.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::MeetSL;
use crate::order::Partition;
use crate::value::Rational;

/// Which four-point inequality a function should satisfy.
///
/// Join flavours read the stored [`MeetSL`] as the reversed form of a
/// join-semilattice, so `∨` is evaluated with the stored meet and "up" in the
/// join-semilattice is "down" in storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavour {
    MeetVal,
    MeetCoval,
    JoinVal,
    JoinCoval,
}

impl Flavour {
    pub fn is_join(self) -> bool {
        matches!(self, Flavour::JoinVal | Flavour::JoinCoval)
    }

    /// Flavour satisfied by `−f`.
    pub fn negated(self) -> Flavour {
        match self {
            Flavour::MeetVal => Flavour::MeetCoval,
            Flavour::MeetCoval => Flavour::MeetVal,
            Flavour::JoinVal => Flavour::JoinCoval,
            Flavour::JoinCoval => Flavour::JoinVal,
        }
    }

    /// True when `f(x) + f(x∘y∘z)` must dominate `f(x∘y) + f(x∘z)`.
    fn lhs_dominates(self) -> bool {
        matches!(self, Flavour::MeetVal | Flavour::JoinCoval)
    }
}

impl fmt::Display for Flavour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavour::MeetVal => "meet-val",
            Flavour::MeetCoval => "meet-coval",
            Flavour::JoinVal => "join-val",
            Flavour::JoinCoval => "join-coval",
        })
    }
}

impl FromStr for Flavour {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "meet-val" => Ok(Flavour::MeetVal),
            "meet-coval" => Ok(Flavour::MeetCoval),
            "join-val" => Ok(Flavour::JoinVal),
            "join-coval" => Ok(Flavour::JoinCoval),
            _ => Err(format!("unknown flavour `{s}`")),
        }
    }
}

/// A function on a semilattice tagged with the inequality it is meant to
/// satisfy, optionally relative to a congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub values: Vec<Rational>,
    pub flavour: Flavour,
    pub congruence: Option<Partition>,
}

/// Monotonicity of `f` inside every block, in the order of the semilattice
/// the flavour refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Monotonicity {
    pub non_decreasing: bool,
    pub strictly_increasing: bool,
    pub non_increasing: bool,
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("value vector has {got} entries for {n} points")]
    Length { n: usize, got: usize },
    #[error("inequality fails at ({0}, {1}, {2})")]
    Inequality(usize, usize, usize),
}

/// Verifies the flavour's inequality on every applicable triple and reports
/// monotonicity per block. With a congruence only triples with `x ≅ x∘z` and
/// `y ≅ x∘y` are tested.
pub fn check_valuation(
    s: &MeetSL,
    f: &[Rational],
    flavour: Flavour,
    cong: Option<&Partition>,
) -> Result<Monotonicity, ValuationError> {
    let n = s.size();
    if f.len() != n {
        return Err(ValuationError::Length { n, got: f.len() });
    }
    let related = |a: usize, b: usize| cong.is_none_or(|p| p.same(a, b));
    for x in 0..n {
        for z in 0..n {
            let xz = s.meet(x, z);
            if !related(x, xz) {
                continue;
            }
            for y in 0..n {
                let xy = s.meet(x, y);
                if !related(y, xy) {
                    continue;
                }
                let lhs = &f[x] + &f[s.meet(xy, z)];
                let rhs = &f[xy] + &f[xz];
                let ok = if flavour.lhs_dominates() { lhs >= rhs } else { lhs <= rhs };
                if !ok {
                    return Err(ValuationError::Inequality(x, y, z));
                }
            }
        }
    }
    Ok(monotonicity(s, f, flavour.is_join(), cong))
}

/// Monotonicity of `f` on comparable pairs inside blocks. `reversed` reads
/// the stored order upside down.
pub fn monotonicity(s: &MeetSL, f: &[Rational], reversed: bool, cong: Option<&Partition>) -> Monotonicity {
    let n = s.size();
    let mut m = Monotonicity {
        non_decreasing: true,
        strictly_increasing: true,
        non_increasing: true,
        strictly_decreasing: true,
    };
    for a in 0..n {
        for b in 0..n {
            let below = if reversed { s.order().lt(b, a) } else { s.order().lt(a, b) };
            if !below || cong.is_some_and(|p| !p.same(a, b)) {
                continue;
            }
            m.non_decreasing &= f[a] <= f[b];
            m.strictly_increasing &= f[a] < f[b];
            m.non_increasing &= f[a] >= f[b];
            m.strictly_decreasing &= f[a] > f[b];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain_sl, power_set_sl};
    use crate::value::int;

    fn neg(v: &[Rational]) -> Vec<Rational> {
        v.iter().map(|x| -x).collect()
    }

    #[test]
    fn minus_cardinality_on_union_semilattice() {
        let s = power_set_sl(3);
        let f: Vec<Rational> = (0..8u32).map(|a| int(-i64::from(a.count_ones()))).collect();
        let m = check_valuation(&s, &f, Flavour::MeetVal, None).unwrap();
        assert!(m.strictly_increasing);
        assert!(check_valuation(&s, &neg(&f), Flavour::MeetCoval, None).is_ok());
    }

    #[test]
    fn decreasing_chain_covaluation() {
        let s = chain_sl(3);
        let f = vec![int(2), int(1), int(0)];
        let m = check_valuation(&s, &f, Flavour::MeetCoval, None).unwrap();
        assert!(m.strictly_decreasing);
    }

    #[test]
    fn constants_are_both() {
        let s = power_set_sl(2);
        let f = vec![int(3); 4];
        for fl in [Flavour::MeetVal, Flavour::MeetCoval, Flavour::JoinVal, Flavour::JoinCoval] {
            let m = check_valuation(&s, &f, fl, None).unwrap();
            assert!(m.non_decreasing && m.non_increasing && !m.strictly_increasing);
        }
    }

    #[test]
    fn increasing_generalised_covaluation() {
        // On the two-point chain with the equality congruence, the identity
        // passes the restricted test while being strictly increasing.
        let s = chain_sl(2);
        let f = vec![int(0), int(1)];
        let eq = Partition::discrete(2);
        assert!(check_valuation(&s, &f, Flavour::MeetCoval, Some(&eq)).is_ok());
        assert!(check_valuation(&s, &f, Flavour::MeetCoval, None).is_err());
    }

    #[test]
    fn join_flavour_reads_reversed_order() {
        // Chain 0<1<2 stored as meet; as a join-semilattice it is 2<1<0.
        let s = chain_sl(3);
        let f = vec![int(2), int(1), int(0)];
        let m = check_valuation(&s, &f, Flavour::JoinVal, None).unwrap();
        assert!(m.strictly_increasing);
    }

    #[test]
    fn flavour_text_round_trip() {
        for fl in [Flavour::MeetVal, Flavour::MeetCoval, Flavour::JoinVal, Flavour::JoinCoval] {
            assert_eq!(fl.to_string().parse::<Flavour>(), Ok(fl));
            assert_eq!(fl.negated().negated(), fl);
        }
    }
}
