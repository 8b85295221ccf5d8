//! Dictionary order on binary representations: the comparator automaton,
//! the length lemma it relies on, and the systems that pick the largest (or
//! `t`-th largest) representation of every number.
//!
//! Dictionary order compares the first differing digit; a proper prefix is
//! the smaller string. Leading zeros are ignored.

use serde::{Deserialize, Serialize};

use crate::automata::{combine, cylinder, exists, intersect_all, BoolOp, DigitAlphabet, Dfa};
use crate::error::Error;
use crate::fib::{build_normalizer, eval_rep, fib, Anchor, ConverterSpec};
use crate::perfection::{equal_rel, Domain, SystemSpec};

/// States of the comparator. Inputs are pairs `(s', t')` read in parallel;
/// `s`, `t` are the inputs without leading zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComparatorState {
    /// only leading zeros so far
    Initial,
    /// `s` has started, `t` has not
    SLongerStart,
    /// `|s| > |t|`, `t` a prefix of `s` so far, last digit of `s` is 1
    SLongerOne,
    /// `|s| > |t|`, `t` a prefix of `s` so far, last digit of `s` is 0
    SLongerZero,
    /// `|s| < |t|`, `s` a prefix of `t` so far, last digit of `t` is 1
    TLongerOne,
    /// `|s| < |t|`, `s` a prefix of `t` so far, last digit of `t` is 0
    TLongerZero,
    /// same length, equal so far
    Equal,
    /// some position already has `s_i > t_i`
    Greater,
    /// `s < t` is settled, or the lengths differ by two or more
    Rejected,
}

impl ComparatorState {
    pub const ALL: [ComparatorState; 9] = [
        ComparatorState::Initial,
        ComparatorState::SLongerStart,
        ComparatorState::SLongerOne,
        ComparatorState::SLongerZero,
        ComparatorState::TLongerOne,
        ComparatorState::TLongerZero,
        ComparatorState::Equal,
        ComparatorState::Greater,
        ComparatorState::Rejected,
    ];

    pub fn index(self) -> u32 {
        Self::ALL.iter().position(|&s| s == self).unwrap() as u32
    }

    pub fn accepting(self) -> bool {
        use ComparatorState::*;
        matches!(self, SLongerStart | SLongerOne | SLongerZero | Greater)
    }

    pub fn step(self, a: i8, b: i8) -> ComparatorState {
        use ComparatorState::*;
        let s_buf = |d: i8| if d == 1 { SLongerOne } else { SLongerZero };
        let t_buf = |d: i8| if d == 1 { TLongerOne } else { TLongerZero };
        let cmp = |x: i8, y: i8, same: ComparatorState| match x.cmp(&y) {
            std::cmp::Ordering::Greater => Greater,
            std::cmp::Ordering::Less => Rejected,
            std::cmp::Ordering::Equal => same,
        };
        match self {
            Initial => match (a, b) {
                (0, 0) => Initial,
                (1, 0) => SLongerStart,
                (0, _) => TLongerOne,
                _ => Equal,
            },
            // t must start now, with the digit 1 matching s's first digit
            SLongerStart => {
                if b == 1 {
                    s_buf(a)
                } else {
                    Rejected
                }
            }
            SLongerOne => cmp(1, b, s_buf(a)),
            SLongerZero => cmp(0, b, s_buf(a)),
            TLongerOne => cmp(a, 1, t_buf(b)),
            TLongerZero => cmp(a, 0, t_buf(b)),
            Equal => cmp(a, b, Equal),
            Greater => Greater,
            Rejected => Rejected,
        }
    }
}

/// The comparator over `{0,1} × {0,1}`: accepts `(s', t')` iff `s > t`,
/// provided the unpadded lengths differ by at most one.
pub fn build_comparator() -> Dfa {
    let alphabet = DigitAlphabet::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
    let all = ComparatorState::ALL;
    Dfa::from_fn(
        alphabet.clone(),
        all.len(),
        ComparatorState::Initial.index(),
        |q, s| all[q as usize].step(alphabet.digit(s, 0), alphabet.digit(s, 1)).index(),
        |q| all[q as usize].accepting(),
    )
    .expect("comparator")
    .minimize()
}

/// Direct dictionary comparison: `s > t` after stripping leading zeros.
pub fn dict_greater(s: &[i8], t: &[i8]) -> bool {
    let strip = |x: &[i8]| x[x.iter().position(|&d| d != 0).unwrap_or(x.len())..].to_vec();
    strip(s) > strip(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaVerdict {
    Pass { values_checked: u64 },
    Fail { n: u64, min_len: usize, max_len: usize },
}

/// Shortest and longest binary representation lengths (no leading zeros)
/// for every `n <= max_n`, by brute force.
pub fn representation_length_ranges(max_n: u64) -> Vec<(usize, usize)> {
    // a string of length l with a leading 1 is worth at least F_{l+1}
    let mut max_len = 0;
    while (fib(max_len + 2) as u64) <= max_n {
        max_len += 1;
    }
    let mut ranges = vec![(usize::MAX, 0usize); max_n as usize + 1];
    ranges[0] = (0, 0);
    for len in 1..=max_len {
        let weights: Vec<u64> = (0..len).map(|i| fib(len + 1 - i) as u64).collect();
        // leading digit fixed to 1
        for rest in 0u64..(1 << (len - 1)) {
            let mut v = weights[0];
            for (i, w) in weights.iter().enumerate().skip(1) {
                if rest >> (len - 1 - i) & 1 == 1 {
                    v += w;
                }
            }
            if v <= max_n {
                let r = &mut ranges[v as usize];
                r.0 = r.0.min(len);
                r.1 = r.1.max(len);
            }
        }
    }
    ranges
}

/// Two representations of the same number differ in length by at most one.
pub fn verify_length_lemma(max_n: u64) -> LemmaVerdict {
    let ranges = representation_length_ranges(max_n);
    for (n, &(lo, hi)) in ranges.iter().enumerate() {
        if hi - lo > 1 {
            return LemmaVerdict::Fail {
                n: n as u64,
                min_len: lo,
                max_len: hi,
            };
        }
    }
    LemmaVerdict::Pass {
        values_checked: max_n + 1,
    }
}

fn binary_triple() -> DigitAlphabet {
    DigitAlphabet::new(vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap()
}

/// Pairs `(x, n)`: `x` is a binary representation of `n`.
fn fcanon() -> Result<Dfa, Error> {
    Ok((*build_normalizer(&ConverterSpec::binary(), 0)?).clone())
}

/// `∃y. rep(y, n) ∧ rep(x, n) ∧ y > x ∧ extra(y, n)` over pairs `(x, n)`.
fn exists_above(extra: Option<&Dfa>) -> Result<Dfa, Error> {
    let t = binary_triple();
    let f = fcanon()?;
    let comp = build_comparator();
    // tracks: 0 = x, 1 = y, 2 = n
    let mut parts = vec![
        cylinder(&f, &t, &[0, 2])?,
        cylinder(&f, &t, &[1, 2])?,
        cylinder(&comp, &t, &[1, 0])?,
    ];
    if let Some(e) = extra {
        parts.push(cylinder(e, &t, &[1, 2])?);
    }
    let refs: Vec<&Dfa> = parts.iter().collect();
    exists(&intersect_all(&refs)?, &[0, 2])
}

/// The relation `D(s, n)`: `s` is the largest representation of `n`.
pub fn build_max_dict_relation() -> Result<Dfa, Error> {
    let t = binary_triple();
    let f = fcanon()?;
    let comp = build_comparator();
    let eq = equal_rel(&[0, 1])?;
    // tracks: 0 = s, 1 = t, 2 = n; some other representation t is not below s
    let bad = intersect_all(&[
        &cylinder(&f, &t, &[0, 2])?,
        &cylinder(&f, &t, &[1, 2])?,
        &cylinder(&comp.complement(), &t, &[0, 1])?,
        &cylinder(&eq.complement(), &t, &[0, 1])?,
    ])?;
    let bad = exists(&bad, &[0, 2])?;
    Ok(combine(BoolOp::Diff, &f, &bad)?.minimize())
}

fn system_from_relation(name: &str, relation: &Dfa) -> Result<SystemSpec, Error> {
    let rule = exists(relation, &[0])?;
    SystemSpec::new(name, &rule, ConverterSpec::binary(), Domain::Naturals)
}

/// The system that picks the largest representation in dictionary order.
pub fn build_max_dict_system() -> Result<SystemSpec, Error> {
    system_from_relation("max_dict", &build_max_dict_relation()?)
}

/// Which representation to take when a number has fewer than `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    #[default]
    Smallest,
    Largest,
}

/// The relation `R_t(x, n)`: `x` is the `t`-th largest representation of
/// `n`, or `n` has fewer than `t` and `x` is the fallback one.
pub fn build_rank_t_relation(t: usize, fallback: Fallback) -> Result<Dfa, Error> {
    if t == 0 || t > 3 {
        return Err(Error::InvalidSystem(format!("rank must be 1, 2 or 3, got {t}")));
    }
    let f = fcanon()?;
    // above[k](x, n): at least k representations of n are above x
    let mut above = vec![f.clone()];
    for k in 1..=t {
        let prev = if k == 1 { None } else { Some(&above[k - 1]) };
        let a = combine(BoolOp::And, &exists_above(prev)?, &f)?.minimize();
        above.push(a);
    }
    let exact = combine(BoolOp::Diff, &above[t - 1], &above[t])?;
    // total(n): n has at least t representations, lifted to (x, n)
    let total_n = exists(&above[t - 1], &[1])?;
    let pair = f.alphabet().clone();
    let total = cylinder(&total_n, &pair, &[1])?;
    let extremal = match fallback {
        Fallback::Largest => combine(BoolOp::Diff, &f, &above[1])?,
        Fallback::Smallest => {
            // no representation of n lies below x
            let tt = binary_triple();
            let comp = build_comparator();
            let below = intersect_all(&[
                &cylinder(&f, &tt, &[0, 2])?,
                &cylinder(&f, &tt, &[1, 2])?,
                &cylinder(&comp, &tt, &[0, 1])?,
            ])?;
            combine(BoolOp::Diff, &f, &exists(&below, &[0, 2])?)?
        }
    };
    let fallback_part = combine(BoolOp::Diff, &extremal, &total)?;
    Ok(combine(BoolOp::Or, &exact, &fallback_part)?.minimize())
}

pub fn build_rank_t_system(t: usize, fallback: Fallback) -> Result<SystemSpec, Error> {
    let name = match fallback {
        Fallback::Smallest => format!("rank_{t}"),
        Fallback::Largest => format!("rank_{t}_largest"),
    };
    system_from_relation(&name, &build_rank_t_relation(t, fallback)?)
}

/// All binary representations of `n` (no leading zeros), largest first in
/// dictionary order.
pub fn representations_desc(n: u64) -> Vec<Vec<i8>> {
    let mut len = 0;
    while (fib(len + 2) as u64) <= n {
        len += 1;
    }
    let mut out = Vec::new();
    for l in 0..=len {
        for bits in 0u64..(1 << l) {
            let x: Vec<i8> = (0..l).map(|i| (bits >> (l - 1 - i) & 1) as i8).collect();
            if x.first() == Some(&0) {
                continue;
            }
            if eval_rep(&x, Anchor::F2) == n as i64 {
                out.push(x);
            }
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::equivalent;
    use crate::perfection::{check_perfect, find_representation};

    fn bits(s: &str) -> Vec<i8> {
        s.bytes().map(|b| (b - b'0') as i8).collect()
    }

    #[test]
    fn comparator_examples() {
        let c = build_comparator();
        assert!(c.accepts_tracks(&[&bits("1100"), &bits("1011")]));
        assert!(c.accepts_tracks(&[&bits("1011"), &bits("1001")]));
        assert!(!c.accepts_tracks(&[&bits("0110"), &bits("1100")]));
        assert!(c.accepts_tracks(&[&bits("1100"), &bits("110")]));
        assert!(!c.accepts_tracks(&[&bits("110"), &bits("110")]));
    }

    #[test]
    fn comparator_has_eight_live_states() {
        let c = build_comparator();
        assert_eq!(c.trimmed_state_count(), 8);
        assert_eq!(c.num_states(), 9);
    }

    #[test]
    fn comparator_matches_direct_order() {
        let c = build_comparator();
        let all: Vec<Vec<i8>> = (0..=10)
            .flat_map(|l| (0u32..(1 << l)).map(move |b| (0..l).map(|i| (b >> (l - 1 - i) & 1) as i8).collect()))
            .filter(|x: &Vec<i8>| x.first() != Some(&0))
            .collect();
        for s in &all {
            for t in &all {
                if s.len().abs_diff(t.len()) > 1 {
                    continue;
                }
                let got = c.accepts_tracks(&[s, t]);
                assert_eq!(got, dict_greater(s, t), "{s:?} {t:?}");
                let rev = c.accepts_tracks(&[t, s]);
                assert_eq!([got, rev, s == t].iter().filter(|&&b| b).count(), 1);
            }
        }
    }

    #[test]
    fn length_lemma_holds() {
        assert_eq!(verify_length_lemma(5000), LemmaVerdict::Pass { values_checked: 5001 });
        let r = representation_length_ranges(8);
        assert_eq!(r[8], (4, 5));
        assert_eq!(r[1], (1, 1));
    }

    #[test]
    fn max_dict_table() {
        let sys = build_max_dict_system().unwrap();
        let expected = ["1", "10", "11", "101", "110", "111", "1010", "1100", "1101", "1110", "1111"];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(find_representation(&sys, i as i64 + 1).unwrap().to_string(), *e);
        }
        assert!(check_perfect(&sys).unwrap().perfect);
    }

    #[test]
    fn max_dict_relation_size() {
        let d = build_max_dict_relation().unwrap();
        assert!(d.trimmed_state_count().abs_diff(7) <= 1, "{}", d.trimmed_state_count());
    }

    #[test]
    fn rank_one_is_max_dict() {
        let r1 = build_rank_t_system(1, Fallback::Smallest).unwrap();
        let md = build_max_dict_system().unwrap();
        assert!(equivalent(&r1.rule, &md.rule).unwrap());
    }

    #[test]
    fn rank_two_examples() {
        let r2 = build_rank_t_system(2, Fallback::Smallest).unwrap();
        assert_eq!(find_representation(&r2, 8).unwrap().to_string(), "1011");
        assert_eq!(find_representation(&r2, 1).unwrap().to_string(), "1");
        for n in 0..400u64 {
            let reps = representations_desc(n);
            let want = if reps.len() >= 2 { &reps[1] } else { reps.last().unwrap() };
            let got = find_representation(&r2, n as i64).unwrap();
            assert_eq!(got.digits(), want.as_slice(), "{n}");
        }
    }

    #[test]
    fn rank_t_rejects_out_of_range() {
        assert!(build_rank_t_relation(0, Fallback::Smallest).is_err());
        assert!(build_rank_t_relation(4, Fallback::Smallest).is_err());
    }
}
