//! Trajectories, inert points and entropy estimates for meet-semilattice
//! endomorphisms.

pub mod experiment;
pub mod finite;
pub mod powerset;
pub mod subgroup;

use std::fmt::Debug;

use thiserror::Error;

use crate::value::{DistVal, Rational};

pub use finite::FiniteEndo;
pub use powerset::SetShift;
pub use subgroup::{CoordinateShift, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntropyError {
    #[error("element of size {size} exceeds the budget of {budget}")]
    HorizonExceeded { size: usize, budget: usize },
    #[error("map does not preserve meets at ({0}, {1})")]
    NotAnEndomorphism(usize, usize),
    #[error("map does not respect the relation: {0} ≅ {1} but their images are not related")]
    RespectCheckFailed(String, String),
    #[error("norm increases under the map at {0}")]
    MonotonicityViolated(String),
    #[error("seed {0} has infinite norm")]
    SeedOutsideDomain(String),
    #[error("trajectory left the finite-norm part at step {0}")]
    NormBlewUp(usize),
    #[error("horizon {horizon} is too short for window {window}")]
    BadWindow { horizon: usize, window: usize },
    #[error("{0}")]
    Invalid(String),
}

/// A meet-preserving self-map of a meet-semilattice whose elements can be
/// built one at a time.
pub trait SemilatticeEndo {
    type Elem: Clone + Eq + Debug;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, EntropyError>;

    fn apply(&self, a: &Self::Elem) -> Result<Self::Elem, EntropyError>;
}

/// `T_1, …, T_n` where `T_k = x ∧ φ(x) ∧ … ∧ φ^(k−1)(x)`.
pub fn trajectory<E: SemilatticeEndo>(e: &E, x: &E::Elem, n: usize) -> Result<Vec<E::Elem>, EntropyError> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    out.push(x.clone());
    let mut power = x.clone();
    for _ in 1..n {
        power = e.apply(&power)?;
        let next = e.meet(out.last().expect("nonempty"), &power)?;
        out.push(next);
    }
    Ok(out)
}

/// Criterion (a): `T_k ≅ x` for `k = 1..=n`. On a finite carrier, passing
/// `n` at least the carrier size covers every `k`, since `T_(k+1) = T_k`
/// forces the trajectory to stay put.
pub fn inert_by_trajectory<E: SemilatticeEndo>(
    e: &E,
    x: &E::Elem,
    rel: impl Fn(&E::Elem, &E::Elem) -> bool,
    n: usize,
) -> Result<bool, EntropyError> {
    let mut t = x.clone();
    let mut power = x.clone();
    for _ in 1..n {
        power = e.apply(&power)?;
        let next = e.meet(&t, &power)?;
        if !rel(&next, x) {
            return Ok(false);
        }
        if next == t {
            return Ok(true);
        }
        t = next;
    }
    Ok(true)
}

/// Criterion (b): `x ∧ φ^k(x) ≅ x` for `k = 0..n`.
pub fn inert_by_powers<E: SemilatticeEndo>(
    e: &E,
    x: &E::Elem,
    rel: impl Fn(&E::Elem, &E::Elem) -> bool,
    n: usize,
) -> Result<bool, EntropyError> {
    let mut power = x.clone();
    for _ in 0..n {
        if !rel(&e.meet(x, &power)?, x) {
            return Ok(false);
        }
        power = e.apply(&power)?;
    }
    Ok(true)
}

/// Criterion (c): `x ∧ φ(x) ≅ x`. Only equivalent to the others when the
/// map respects the relation; see [`FiniteEndo::inert_one_step_checked`].
pub fn inert_one_step<E: SemilatticeEndo>(
    e: &E,
    x: &E::Elem,
    rel: impl Fn(&E::Elem, &E::Elem) -> bool,
) -> Result<bool, EntropyError> {
    Ok(rel(&e.meet(x, &e.apply(x)?)?, x))
}

/// Criterion for invariant spaces: `d(x, φ(x)) < ∞`.
pub fn inert_by_distance<E: SemilatticeEndo>(
    e: &E,
    x: &E::Elem,
    d: impl Fn(&E::Elem, &E::Elem) -> DistVal,
) -> Result<bool, EntropyError> {
    Ok(d(x, &e.apply(x)?).is_finite())
}

/// Trailing behaviour of `f(T_n)` up to a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyEstimate {
    /// The common trailing increment when converged, else the largest
    /// `f(T_n)/n` over the window.
    pub value: Rational,
    pub horizon: usize,
    pub converged: bool,
    /// The last `window` increments `f(T_(n+1)) − f(T_n)`.
    pub increments: Vec<Rational>,
}

/// Evaluates `f` on `T_1..T_horizon`. Converged when the last `window`
/// increments agree.
pub fn entropy_point<E: SemilatticeEndo>(
    e: &E,
    x: &E::Elem,
    f: impl Fn(&E::Elem) -> Result<Rational, EntropyError>,
    horizon: usize,
    window: usize,
) -> Result<EntropyEstimate, EntropyError> {
    if window == 0 || horizon <= window {
        return Err(EntropyError::BadWindow { horizon, window });
    }
    let ts = trajectory(e, x, horizon)?;
    let a: Vec<Rational> = ts.iter().map(&f).collect::<Result<_, _>>()?;
    let increments: Vec<Rational> = a[horizon - window - 1..]
        .windows(2)
        .map(|p| &p[1] - &p[0])
        .collect();
    let converged = increments.iter().all(|d| d == &increments[0]);
    let value = if converged {
        increments[0].clone()
    } else {
        (horizon - window + 1..=horizon)
            .map(|n| &a[n - 1] / Rational::from_integer(n.into()))
            .max()
            .expect("window is nonempty")
    };
    Ok(EntropyEstimate { value, horizon, converged, increments })
}

/// Whether a supremum over seeds is the true value or only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupKind {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedRow<T> {
    pub seed: T,
    pub inert: bool,
    pub estimate: Option<EntropyEstimate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupReport<T> {
    /// Largest estimate over inert seeds; `None` if no seed is inert.
    pub value: Option<Rational>,
    pub kind: SupKind,
    /// Every maximising estimate converged.
    pub converged: bool,
    pub rows: Vec<SeedRow<T>>,
}

/// Maximises [`entropy_point`] over the inert seeds. `exhaustive` declares
/// that the seeds cover the whole carrier.
pub fn entropy_sup<E: SemilatticeEndo>(
    e: &E,
    f: impl Fn(&E::Elem) -> Result<Rational, EntropyError>,
    inert: impl Fn(&E::Elem) -> Result<bool, EntropyError>,
    seeds: &[E::Elem],
    horizon: usize,
    window: usize,
    exhaustive: bool,
) -> Result<SupReport<E::Elem>, EntropyError> {
    let mut rows = Vec::with_capacity(seeds.len());
    for s in seeds {
        let ok = inert(s)?;
        let estimate = if ok { Some(entropy_point(e, s, &f, horizon, window)?) } else { None };
        rows.push(SeedRow { seed: s.clone(), inert: ok, estimate });
    }
    Ok(summarise(rows, exhaustive))
}

fn summarise<T>(rows: Vec<SeedRow<T>>, exhaustive: bool) -> SupReport<T> {
    let value = rows.iter().filter_map(|r| r.estimate.as_ref().map(|e| e.value.clone())).max();
    let converged = rows
        .iter()
        .filter_map(|r| r.estimate.as_ref())
        .filter(|e| Some(&e.value) == value.as_ref())
        .all(|e| e.converged);
    SupReport {
        value,
        kind: if exhaustive { SupKind::Exact } else { SupKind::LowerBound },
        converged,
        rows,
    }
}

/// A generalised norm `v : X → [0, ∞]`.
pub struct GenNorm<'a, T> {
    v: Box<dyn Fn(&T) -> DistVal + 'a>,
}

impl<'a, T> GenNorm<'a, T> {
    pub fn new(v: impl Fn(&T) -> DistVal + 'a) -> Self {
        GenNorm { v: Box::new(v) }
    }

    pub fn v(&self, x: &T) -> DistVal {
        (self.v)(x)
    }

    /// `v` on the finite-norm part, `0` elsewhere.
    pub fn f(&self, x: &T) -> Rational {
        self.v(x).finite().cloned().unwrap_or_default()
    }

    /// Same side of the split into finite and infinite norm.
    pub fn related(&self, a: &T, b: &T) -> bool {
        self.v(a).is_finite() == self.v(b).is_finite()
    }
}

/// Entropy of a norm-non-increasing endomorphism over seeds of finite norm.
/// Such seeds are inert, so no inertness test is run; instead the norm is
/// checked not to grow along each orbit and to stay finite along each
/// trajectory.
pub fn gennorm_entropy<E: SemilatticeEndo>(
    e: &E,
    v: &GenNorm<'_, E::Elem>,
    seeds: &[E::Elem],
    horizon: usize,
    window: usize,
    exhaustive: bool,
) -> Result<SupReport<E::Elem>, EntropyError> {
    let mut rows = Vec::with_capacity(seeds.len());
    for s in seeds {
        if v.v(s).is_infinite() {
            return Err(EntropyError::SeedOutsideDomain(format!("{s:?}")));
        }
        let mut y = s.clone();
        for _ in 0..horizon {
            let next = e.apply(&y)?;
            if v.v(&next) > v.v(&y) {
                return Err(EntropyError::MonotonicityViolated(format!("{y:?}")));
            }
            y = next;
        }
        for (k, t) in trajectory(e, s, horizon)?.iter().enumerate() {
            if v.v(t).is_infinite() {
                return Err(EntropyError::NormBlewUp(k + 1));
            }
        }
        let est = entropy_point(e, s, |t| Ok(v.f(t)), horizon, window)?;
        rows.push(SeedRow { seed: s.clone(), inert: true, estimate: Some(est) });
    }
    Ok(summarise(rows, exhaustive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::int;
    use std::collections::BTreeSet;

    #[test]
    fn shift_trajectory_and_entropy() {
        let e = SetShift::new(1);
        let a: BTreeSet<i64> = [0].into();
        let ts = trajectory(&e, &a, 5).unwrap();
        assert_eq!(ts[4], (0..5).collect());
        let est = entropy_point(&e, &a, |t| Ok(int(t.difference(&a).count() as i64)), 64, 8).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, int(1));
    }

    #[test]
    fn bad_window() {
        let e = SetShift::new(1);
        assert!(matches!(
            entropy_point(&e, &BTreeSet::new(), |_| Ok(int(0)), 4, 4),
            Err(EntropyError::BadWindow { .. })
        ));
    }

    #[test]
    fn cardinality_norm() {
        let e = SetShift::new(3);
        let v = GenNorm::new(|a: &BTreeSet<i64>| DistVal::from_int(a.len() as i64));
        let seeds: Vec<BTreeSet<i64>> = vec![[0].into(), [0, 5].into(), [-3, 3].into()];
        let r = gennorm_entropy(&e, &v, &seeds, 64, 8, false).unwrap();
        assert_eq!(r.kind, SupKind::LowerBound);
        assert!(r.converged);
        assert_eq!(r.value, Some(int(2)));
        let id = SetShift::new(0);
        let r0 = gennorm_entropy(&id, &v, &seeds, 32, 8, false).unwrap();
        assert_eq!(r0.value, Some(int(0)));
    }
}
