//! Seeded random and exhaustive sources of semilattices, congruences,
//! co-valuations and invariant spaces.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{check_congruence, congruence_closure, MeetSL};
use crate::order::Partition;
use crate::qmetric::{validate_gqm, GQSpace};
use crate::value::{rat, DistVal, Rational};

/// Random intersection-closed family of subsets of a `ground`-element set
/// ordered by inclusion, grown until it has at least `target` members.
/// Members are sorted by cardinality, so index 0 is the bottom.
pub fn random_family_sl<R: Rng>(rng: &mut R, ground: u32, target: usize) -> MeetSL {
    assert!(ground <= 16, "ground set too large");
    let universe = 1u32 << ground;
    let target = target.clamp(1, universe as usize);
    let mut fam: BTreeSet<u32> = BTreeSet::new();
    fam.insert(rng.gen_range(0..universe));
    while fam.len() < target {
        let s = rng.gen_range(0..universe);
        let mut add = vec![s];
        while let Some(t) = add.pop() {
            if fam.insert(t) {
                add.extend(fam.iter().map(|&u| u & t));
            }
        }
    }
    let mut sets: Vec<u32> = fam.into_iter().collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    MeetSL::from_family(&sets).expect("family is intersection-closed")
}

/// Congruence generated by `merges` random pairs.
pub fn random_congruence<R: Rng>(s: &MeetSL, rng: &mut R, merges: usize) -> Partition {
    let n = s.size();
    let pairs: Vec<(usize, usize)> = (0..merges).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    congruence_closure(s, &pairs)
}

fn small_positive<R: Rng>(rng: &mut R, max: i64) -> Rational {
    rat(rng.gen_range(1..=max), rng.gen_range(1..=3))
}

/// A (generalised) meet co-valuation, strictly decreasing on the whole
/// semilattice: `f(x) = c_[x] − μ(↓x)` with `μ` a positive sum of singleton
/// and pair terms, and `c` a random constant per block of `cong`.
///
/// Such a `μ` is monotone and supermodular on down-sets, and
/// `↓(x∧y) ∪ ↓(x∧z) ⊆ ↓x` with intersection `↓(x∧y∧z)`, which gives the
/// co-valuation inequality; related triples share blocks pairwise so the
/// constants cancel.
pub fn random_covaluation<R: Rng>(s: &MeetSL, cong: Option<&Partition>, rng: &mut R) -> Vec<Rational> {
    let n = s.size();
    let single: Vec<Rational> = (0..n).map(|_| small_positive(rng, 6)).collect();
    let pair: Vec<Vec<Rational>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(0.5) { Rational::default() } else { small_positive(rng, 3) })
                .collect()
        })
        .collect();
    let blocks = cong.map_or(1, Partition::num_blocks);
    let consts: Vec<Rational> = (0..blocks).map(|_| rat(rng.gen_range(-4..=4), 1)).collect();
    (0..n)
        .map(|x| {
            let down = s.down_set(x);
            let mut mu = Rational::default();
            for (i, &u) in down.iter().enumerate() {
                mu += &single[u];
                for &v in &down[i + 1..] {
                    mu += &pair[u.min(v)][u.max(v)];
                }
            }
            let c = &consts[cong.map_or(0, |p| p.block_of(x))];
            c - mu
        })
        .collect()
}

/// Changes one or two strictly-downward distances of an invariant space and
/// rebuilds the rest by `d(x,y) = d(x, x∧y)`. Returns `None` if the result
/// breaks the triangle inequality or a distance would drop to 0.
pub fn perturb_invariant<R: Rng>(s: &MeetSL, d: &GQSpace, rng: &mut R) -> Option<GQSpace> {
    let n = s.size();
    let below: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| s.order().lt(y, x) && d.d(x, y).is_finite())
        .collect();
    if below.is_empty() {
        return None;
    }
    let mut b: Vec<Vec<DistVal>> = d.matrix().to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        let &(x, y) = below.choose(rng).expect("nonempty");
        let delta = rat(rng.gen_range(-2..=2), 2);
        let v = b[x][y].finite().expect("finite") + delta;
        if v <= Rational::default() {
            return None;
        }
        b[x][y] = DistVal::Finite(v);
    }
    let m = (0..n)
        .map(|x| (0..n).map(|y| b[x][s.meet(x, y)].clone()).collect())
        .collect();
    validate_gqm(m).ok()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Relabelling with the lexicographically least order matrix, and that
/// matrix as a bit string. Two semilattices are isomorphic iff their keys
/// agree.
pub fn canonical_form(s: &MeetSL) -> (MeetSL, u64) {
    let n = s.size();
    assert!(n <= 8, "canonical form is for tiny carriers");
    let mut best: Option<(u64, Vec<usize>)> = None;
    for perm in permutations(n) {
        // perm[new] = old
        let mut key = 0u64;
        for a in 0..n {
            for b in 0..n {
                key = (key << 1) | u64::from(s.leq(perm[a], perm[b]));
            }
        }
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, perm));
        }
    }
    let (key, perm) = best.expect("at least one permutation");
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let meet = (0..n)
        .map(|a| (0..n).map(|b| inv[s.meet(perm[a], perm[b])]).collect())
        .collect();
    (MeetSL::from_meet_table(meet).expect("relabelled table"), key)
}

/// One representative of every isomorphism class of meet-semilattices with
/// exactly `n` elements (`1 ≤ n ≤ 6`).
///
/// Each class is realised as the intersection-closed family
/// `{↓x \ {⊥}}` of subsets of an `(n−1)`-element set; it suffices to run over
/// naturally labelled orders on the non-bottom elements.
pub fn enumerate_semilattices(n: usize) -> Vec<MeetSL> {
    assert!((1..=6).contains(&n), "enumeration supports 1 to 6 elements");
    let m = n - 1;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut lt = vec![vec![false; m]; m];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            lt[i][j] = mask >> k & 1 == 1;
        }
        let transitive = (0..m).all(|i| (0..m).all(|j| !lt[i][j] || (0..m).all(|k| !lt[j][k] || lt[i][k])));
        if !transitive {
            continue;
        }
        let mut sets = vec![0u32];
        sets.extend((0..m).map(|x| (0..m).filter(|&y| y == x || lt[y][x]).fold(0u32, |acc, y| acc | 1 << y)));
        let Ok(s) = MeetSL::from_family(&sets) else { continue };
        let (c, key) = canonical_form(&s);
        if seen.insert(key) {
            out.push(c);
        }
    }
    out
}

/// Every congruence, by filtering set partitions.
pub fn all_congruences(s: &MeetSL) -> Vec<Partition> {
    let n = s.size();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(k: usize, max: usize, labels: &mut Vec<usize>, s: &MeetSL, out: &mut Vec<Partition>) {
        if k == labels.len() {
            let p = Partition::from_labels(labels);
            if check_congruence(s, &p).is_ok() {
                out.push(p);
            }
            return;
        }
        for l in 0..=max + 1 {
            labels[k] = l;
            rec(k + 1, max.max(l), labels, s, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut labels, s, &mut out);
    }
    out
}

/// Every meet-preserving self-map, by backtracking over images.
pub fn all_endomorphisms(s: &MeetSL) -> Vec<Vec<usize>> {
    let n = s.size();
    let mut out = Vec::new();
    let mut img = vec![usize::MAX; n];
    fn consistent(s: &MeetSL, img: &[usize], k: usize) -> bool {
        (0..=k).all(|a| {
            let m = s.meet(a, k);
            m > k || img[m] == s.meet(img[a], img[k])
        }) && (0..k).all(|a| {
            (0..=k).all(|b| {
                let m = s.meet(a, b);
                m != k || img[k] == s.meet(img[a], img[b])
            })
        })
    }
    fn rec(k: usize, s: &MeetSL, img: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == img.len() {
            out.push(img.clone());
            return;
        }
        for v in 0..img.len() {
            img[k] = v;
            if consistent(s, img, k) {
                rec(k + 1, s, img, out);
            }
        }
        img[k] = usize::MAX;
    }
    rec(0, s, &mut img, &mut out);
    out
}

/// Whether a map preserves meets.
pub fn is_endomorphism(s: &MeetSL, map: &[usize]) -> Result<(), (usize, usize)> {
    let n = s.size();
    for a in 0..n {
        for b in 0..n {
            if map[s.meet(a, b)] != s.meet(map[a], map[b]) {
                return Err((a, b));
            }
        }
    }
    Ok(())
}
