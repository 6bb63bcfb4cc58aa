//! Prefix and global-alignment partial metrics on finite strings.

use num_bigint::BigInt;
use thiserror::Error;

use crate::partial::{validate_wpm, PmError, WpmSpace};
use crate::value::{DistVal, Rational};

/// Match, mismatch and gap scores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreScheme {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl ScoreScheme {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        ScoreScheme { alpha, beta, gamma }
    }

    /// `α > β`, `α > γ`, `β ≥ 2γ` and `γ < 0`.
    pub fn is_valid(&self) -> bool {
        let two_gamma = &self.gamma + &self.gamma;
        self.alpha > self.beta
            && self.alpha > self.gamma
            && self.beta >= two_gamma
            && self.gamma < Rational::default()
    }

    fn pair(&self, a: char, b: char) -> &Rational {
        if a == b {
            &self.alpha
        } else {
            &self.beta
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("score scheme violates α > β, α > γ, β ≥ 2γ, γ < 0")]
    InvalidScheme,
    #[error("the blank character `#` cannot be part of the alphabet")]
    BlankInAlphabet,
    #[error("alphabet repeats `{0}`")]
    RepeatedLetter(char),
    #[error("`{0}` is not in the alphabet (string {1})")]
    ForeignChar(char, usize),
    #[error("string {0} repeats string {1}")]
    Duplicate(usize, usize),
    #[error("empty string set")]
    Empty,
    #[error("partial metric check failed: {0}")]
    Pm(PmError),
}

/// Distinct finite strings over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringSet {
    alphabet: Vec<char>,
    strings: Vec<String>,
}

pub const DNA: &str = "GATC";

impl StringSet {
    pub fn new(alphabet: &str, strings: Vec<String>) -> Result<Self, AlignError> {
        let letters: Vec<char> = alphabet.chars().collect();
        if letters.contains(&'#') {
            return Err(AlignError::BlankInAlphabet);
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(AlignError::RepeatedLetter(*c));
            }
        }
        if strings.is_empty() {
            return Err(AlignError::Empty);
        }
        for (i, s) in strings.iter().enumerate() {
            if let Some(c) = s.chars().find(|c| !letters.contains(c)) {
                return Err(AlignError::ForeignChar(c, i));
            }
            if let Some(j) = strings[..i].iter().position(|t| t == s) {
                return Err(AlignError::Duplicate(i, j));
            }
        }
        Ok(StringSet { alphabet: letters, strings })
    }

    pub fn dna(strings: Vec<String>) -> Result<Self, AlignError> {
        Self::new(DNA, strings)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

fn common_prefix(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

fn dyadic(k: usize) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << k)
}

/// `p(s,t) = 2^(−l)` with `l` the length of the longest common prefix.
pub fn prefix_pm(strs: &StringSet) -> WpmSpace {
    let s = strs.strings();
    let m = s
        .iter()
        .map(|a| s.iter().map(|b| DistVal::Finite(dyadic(common_prefix(a, b)))).collect())
        .collect();
    validate_wpm(m, true, false).expect("prefix distance is a partial metric")
}

/// Best global alignment score.
///
/// Columns pairing `#` with `#` score 0 and deleting one leaves a valid
/// alignment with the same score, so the recurrence ignores them.
pub fn align_score(x: &str, y: &str, sch: &ScoreScheme) -> Rational {
    let a: Vec<char> = x.chars().collect();
    let b: Vec<char> = y.chars().collect();
    let mut prev: Vec<Rational> = (0..=b.len()).map(|j| &sch.gamma * Rational::from_integer(j.into())).collect();
    for i in 1..=a.len() {
        let mut cur = Vec::with_capacity(b.len() + 1);
        cur.push(&sch.gamma * Rational::from_integer(i.into()));
        for j in 1..=b.len() {
            let diag = &prev[j - 1] + sch.pair(a[i - 1], b[j - 1]);
            let up = &prev[j] + &sch.gamma;
            let left = &cur[j - 1] + &sch.gamma;
            cur.push(diag.max(up).max(left));
        }
        prev = cur;
    }
    prev.pop().expect("row is nonempty")
}

/// [`align_score`] refusing schemes outside the valid range when `strict`.
pub fn align_score_checked(x: &str, y: &str, sch: &ScoreScheme, strict: bool) -> Result<Rational, AlignError> {
    if strict && !sch.is_valid() {
        return Err(AlignError::InvalidScheme);
    }
    Ok(align_score(x, y, sch))
}

/// Maximum over an explicit list of every blank-free-column alignment.
/// Exponential; meant as an oracle for short strings.
pub fn align_score_exhaustive(x: &str, y: &str, sch: &ScoreScheme) -> Rational {
    let a: Vec<char> = x.chars().collect();
    let b: Vec<char> = y.chars().collect();
    let mut all: Vec<Vec<(Option<char>, Option<char>)>> = Vec::new();
    let mut cols = Vec::new();
    fn rec(
        a: &[char],
        b: &[char],
        cols: &mut Vec<(Option<char>, Option<char>)>,
        all: &mut Vec<Vec<(Option<char>, Option<char>)>>,
    ) {
        if a.is_empty() && b.is_empty() {
            all.push(cols.clone());
            return;
        }
        if let (Some(&p), Some(&q)) = (a.first(), b.first()) {
            cols.push((Some(p), Some(q)));
            rec(&a[1..], &b[1..], cols, all);
            cols.pop();
        }
        if let Some(&p) = a.first() {
            cols.push((Some(p), None));
            rec(&a[1..], b, cols, all);
            cols.pop();
        }
        if let Some(&q) = b.first() {
            cols.push((None, Some(q)));
            rec(a, &b[1..], cols, all);
            cols.pop();
        }
    }
    rec(&a, &b, &mut cols, &mut all);
    all.iter()
        .map(|al| {
            al.iter()
                .map(|c| match c {
                    (Some(p), Some(q)) => sch.pair(*p, *q).clone(),
                    _ => sch.gamma.clone(),
                })
                .sum::<Rational>()
        })
        .max()
        .expect("at least one alignment")
}

/// `p(x,y) = −s(x,y)`, checked to be a strong weak partial metric.
pub fn dna_pm(strs: &StringSet, sch: &ScoreScheme) -> Result<WpmSpace, AlignError> {
    if !sch.is_valid() {
        return Err(AlignError::InvalidScheme);
    }
    let s = strs.strings();
    let m = s
        .iter()
        .map(|a| s.iter().map(|b| DistVal::Finite(-align_score(a, b, sch))).collect())
        .collect();
    validate_wpm(m, false, true).map_err(AlignError::Pm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial::d_from_p;
    use crate::value::{int, rat};

    fn set(v: &[&str]) -> StringSet {
        StringSet::new("abc", v.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn std_scheme() -> ScoreScheme {
        ScoreScheme::new(int(1), int(-1), int(-2))
    }

    #[test]
    fn prefix_examples() {
        let p = prefix_pm(&set(&["ab", "abc"]));
        assert_eq!(p.p(0, 1), &DistVal::ratio(1, 4));
        let (d, w) = d_from_p(&p);
        assert_eq!(d.d(0, 1), &DistVal::zero());
        assert_eq!(d.d(1, 0), &DistVal::ratio(1, 8));
        assert_eq!(w.values, vec![rat(1, 4), rat(1, 8)]);
        let q = prefix_pm(&set(&["a", "b"]));
        assert_eq!(q.p(0, 1), &DistVal::from_int(1));
        assert_eq!(d_from_p(&q).0.d(0, 1), &DistVal::ratio(1, 2));
        let o = prefix_pm(&set(&["a", "ab", "b"])).order();
        assert!(o.leq(0, 1) && !o.leq(1, 0) && !o.leq(0, 2));
    }

    #[test]
    fn gattaca() {
        let s = align_score("GATTACA", "GCATCACGA", &std_scheme());
        assert!(s >= int(-1), "score {s}");
        let strs = StringSet::dna(vec!["GATTACA".into(), "GCATCACGA".into()]).unwrap();
        let p = dna_pm(&strs, &std_scheme()).unwrap();
        assert!(p.is_strong());
        let (d, _) = d_from_p(&p);
        assert_eq!(d.d(0, 1), &DistVal::Finite(int(7) - s));
    }

    #[test]
    fn self_alignment_and_oracle() {
        let sch = std_scheme();
        assert_eq!(align_score("GATC", "GATC", &sch), int(4));
        assert_eq!(align_score("AB", "BA", &sch), align_score_exhaustive("AB", "BA", &sch));
        assert_eq!(align_score("", "", &sch), int(0));
        assert_eq!(align_score("", "GA", &sch), int(-4));
    }

    #[test]
    fn scheme_validity() {
        assert!(std_scheme().is_valid());
        let bad = ScoreScheme::new(int(1), int(-5), int(-2));
        assert!(!bad.is_valid());
        assert_eq!(align_score_checked("A", "A", &bad, true), Err(AlignError::InvalidScheme));
        assert!(align_score_checked("A", "A", &bad, false).is_ok());
        let strs = StringSet::dna(vec!["A".into()]).unwrap();
        assert_eq!(dna_pm(&strs, &bad), Err(AlignError::InvalidScheme));
        assert_eq!(dna_pm(&strs, &std_scheme()).unwrap().p(0, 0), &DistVal::from_int(-1));
    }

    #[test]
    fn string_set_validation() {
        assert_eq!(StringSet::new("A#", vec!["A".into()]), Err(AlignError::BlankInAlphabet));
        assert_eq!(StringSet::dna(vec!["AX".into()]), Err(AlignError::ForeignChar('X', 0)));
        assert_eq!(StringSet::dna(vec!["A".into(), "A".into()]), Err(AlignError::Duplicate(1, 0)));
    }
}
