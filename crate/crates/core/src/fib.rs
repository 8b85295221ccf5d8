//! Fibonacci values of digit strings and the normalizer automata that relate
//! arbitrary digit strings to Zeckendorf strings of the same value.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::automata::{DigitAlphabet, Dfa};
use crate::error::Error;

/// Place value of the last digit of a string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// last digit weighs `F_2`
    F2,
    /// last digit weighs `F_1`; the other digits shift up one place
    F1,
}

impl FromStr for Anchor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "f2" => Ok(Anchor::F2),
            "f1" => Ok(Anchor::F1),
            _ => Err(Error::InvalidSystem(format!("unknown anchor {s:?}"))),
        }
    }
}

/// Memoized Fibonacci numbers, `F_0 = 0`, `F_1 = 1`.
#[derive(Clone, Debug)]
pub struct FibSequence {
    values: Vec<i64>,
}

impl Default for FibSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl FibSequence {
    /// All Fibonacci numbers that fit in an `i64` (`F_0` through `F_92`).
    pub fn new() -> Self {
        let mut values = vec![0i64, 1];
        loop {
            let n = values.len();
            match values[n - 1].checked_add(values[n - 2]) {
                Some(v) => values.push(v),
                None => break,
            }
        }
        FibSequence { values }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn fibs() -> &'static FibSequence {
    static FIBS: OnceLock<FibSequence> = OnceLock::new();
    FIBS.get_or_init(FibSequence::new)
}

/// `F_i`.
pub fn fib(i: usize) -> i64 {
    fibs().get(i)
}

/// A digit string, most significant digit first.
///
/// Renders `-1` as `ī`; [`RepString::machine`] gives the `-1` form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepString(pub Vec<i8>);

impl RepString {
    pub fn new(digits: Vec<i8>) -> Self {
        RepString(digits)
    }

    pub fn digits(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn strip_leading_zeros(&self) -> RepString {
        let start = self.0.iter().position(|&d| d != 0).unwrap_or(self.0.len());
        RepString(self.0[start..].to_vec())
    }

    /// Concatenated digits with negatives written `-1`; `ε` is the empty
    /// string.
    pub fn machine(&self) -> String {
        self.0.iter().map(|d| d.to_string()).collect()
    }

    /// Accepts `ε`, plain digits, `ī`/`-1`/`[-1]` for negative one.
    pub fn parse(text: &str) -> Result<RepString, Error> {
        let t = text.trim();
        if t.is_empty() || t == "ε" || t == "eps" {
            return Ok(RepString::default());
        }
        let mut out = Vec::new();
        let mut chars = t.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '0'..='9' => out.push(c as i8 - b'0' as i8),
                'ī' => out.push(-1),
                '-' => match chars.next() {
                    Some(d @ '0'..='9') => out.push(-(d as i8 - b'0' as i8)),
                    _ => return Err(Error::InvalidSystem(format!("bad digit string {t:?}"))),
                },
                '[' => {
                    let mut inner = String::new();
                    for d in chars.by_ref() {
                        if d == ']' {
                            break;
                        }
                        inner.push(d);
                    }
                    let v: i8 = inner
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidSystem(format!("bad digit [{inner}]")))?;
                    out.push(v);
                }
                ',' | ' ' | '_' => {}
                _ => return Err(Error::InvalidSystem(format!("bad digit string {t:?}"))),
            }
        }
        Ok(RepString(out))
    }
}

impl fmt::Display for RepString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &d in &self.0 {
            match d {
                -1 => write!(f, "ī")?,
                d => write!(f, "{d}")?,
            }
        }
        Ok(())
    }
}

impl From<&str> for RepString {
    /// Panics on malformed input; meant for literals.
    fn from(s: &str) -> Self {
        RepString::parse(s).expect("valid digit string")
    }
}

/// Value of a digit string: `Σ a_i F_{t+2-i}` for [`Anchor::F2`],
/// `Σ a_i F_{t+1-i}` for [`Anchor::F1`], where `t` is the length.
pub fn eval_rep(x: &[i8], anchor: Anchor) -> i64 {
    let t = x.len();
    let top = match anchor {
        Anchor::F2 => t + 1,
        Anchor::F1 => t,
    };
    x.iter()
        .enumerate()
        .map(|(i, &a)| a as i64 * fib(top - i))
        .sum()
}

/// Greedy representation: repeatedly take the largest `F_i <= n`, `i >= 2`.
pub fn zeckendorf_encode(n: u64) -> RepString {
    if n == 0 {
        return RepString::default();
    }
    let n = n as i64;
    let mut top = 2;
    while fib(top + 1) <= n {
        top += 1;
    }
    let mut rest = n;
    let mut out = Vec::with_capacity(top - 1);
    for i in (2..=top).rev() {
        if fib(i) <= rest {
            out.push(1);
            rest -= fib(i);
        } else {
            out.push(0);
        }
    }
    RepString(out)
}

/// Length of the Zeckendorf representation of `n`.
pub fn zeckendorf_len(n: u64) -> usize {
    zeckendorf_encode(n).len()
}

/// Which relation a normalizer decides: pairs `(x, y)` with `y` binary and
/// free of `11`, and `value(x, anchor) = sign · value(y, F2) + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConverterSpec {
    pub x_digits: Vec<i8>,
    pub sign: i8,
    pub anchor: Anchor,
}

impl ConverterSpec {
    pub fn new(x_digits: Vec<i8>, sign: i8, anchor: Anchor) -> Result<Self, Error> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidSystem(format!("sign must be ±1, got {sign}")));
        }
        let mut x_digits = x_digits;
        x_digits.sort_unstable();
        x_digits.dedup();
        if !x_digits.contains(&0) {
            return Err(Error::InvalidSystem("digit set must contain 0".into()));
        }
        Ok(ConverterSpec {
            x_digits,
            sign,
            anchor,
        })
    }

    /// `{0,1}`, positive, `F_2` anchored.
    pub fn binary() -> Self {
        Self::new(vec![0, 1], 1, Anchor::F2).unwrap()
    }

    /// `{-1,0,1}`, positive, `F_2` anchored.
    pub fn signed() -> Self {
        Self::new(vec![-1, 0, 1], 1, Anchor::F2).unwrap()
    }

    pub fn with_sign(&self, sign: i8) -> Self {
        let mut s = self.clone();
        s.sign = if sign < 0 { -1 } else { 1 };
        s
    }

    pub fn with_anchor(&self, anchor: Anchor) -> Self {
        let mut s = self.clone();
        s.anchor = anchor;
        s
    }

    /// `x_digits × {0,1}`
    pub fn pair_alphabet(&self) -> DigitAlphabet {
        DigitAlphabet::new(vec![self.x_digits.clone(), vec![0, 1]]).expect("valid digits")
    }

    /// Does the pair satisfy the relation? Direct evaluation, used as the
    /// oracle for the automaton.
    pub fn holds(&self, x: &[i8], y: &[i8], offset: i64) -> bool {
        y.iter().all(|&b| b == 0 || b == 1)
            && !y.windows(2).any(|w| w == [1, 1])
            && eval_rep(x, self.anchor) == self.sign as i64 * eval_rep(y, Anchor::F2) + offset
    }
}

/// Search state of the normalizer construction.
///
/// `diff` is the value of the prefixes read so far, `x - sign·y`, at the
/// current place; `lower` is the same difference one place lower. Reading a
/// digit difference `d` maps `(diff, lower)` to `(diff + lower + d, diff + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalizerState {
    pub diff: i64,
    pub lower: i64,
    pub y_prev: i8,
    /// pending x digit for the `F_1` anchored construction
    pub x_delay: i8,
}

pub const DEFAULT_BOUND: i64 = 16;

/// Builds the normalizer with states bounded by `|diff|, |lower| <= bound`,
/// minimized. Configurations outside the bound are sent to the dead state.
pub fn build_normalizer_bounded(spec: &ConverterSpec, offset: i64, bound: i64) -> Result<Dfa, Error> {
    if offset.abs() > 2 {
        return Err(Error::OffsetOutOfRange(offset));
    }
    let alphabet = spec.pair_alphabet();
    let k = alphabet.len();
    let sign = spec.sign as i64;
    let start = NormalizerState {
        diff: 0,
        lower: 0,
        y_prev: 0,
        x_delay: 0,
    };
    let mut ids: HashMap<NormalizerState, u32> = HashMap::new();
    let mut states = vec![start];
    ids.insert(start, 0);
    // state 0 is the start; DEAD is patched in after exploration
    const DEAD: u32 = u32::MAX;
    let mut delta: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let s = states[head];
        head += 1;
        for sym in 0..k {
            let a = alphabet.digit(sym, 0);
            let b = alphabet.digit(sym, 1);
            if s.y_prev == 1 && b == 1 {
                delta.push(DEAD);
                continue;
            }
            let (d, x_delay) = match spec.anchor {
                Anchor::F2 => (a as i64 - sign * b as i64, 0),
                Anchor::F1 => (s.x_delay as i64 - sign * b as i64, a),
            };
            let next = NormalizerState {
                diff: s.diff + s.lower + d,
                lower: s.diff + d,
                y_prev: b,
                x_delay,
            };
            if next.diff.abs() > bound || next.lower.abs() > bound {
                delta.push(DEAD);
                continue;
            }
            let id = *ids.entry(next).or_insert_with(|| {
                states.push(next);
                states.len() as u32 - 1
            });
            delta.push(id);
        }
    }
    let dead = states.len() as u32;
    for t in delta.iter_mut() {
        if *t == DEAD {
            *t = dead;
        }
    }
    delta.extend(std::iter::repeat_n(dead, k));
    let mut accepting: Vec<bool> = states
        .iter()
        .map(|s| match spec.anchor {
            Anchor::F2 => s.diff == offset,
            Anchor::F1 => s.diff + s.x_delay as i64 == offset,
        })
        .collect();
    accepting.push(false);
    Ok(Dfa::new(alphabet, delta, accepting, 0)?.minimize())
}

/// Minimized normalizer for `spec` and `offset`. The construction is run
/// with [`DEFAULT_BOUND`] and twice that bound; the results must coincide.
/// Results are cached.
pub fn build_normalizer(spec: &ConverterSpec, offset: i64) -> Result<Arc<Dfa>, Error> {
    type Cache = Mutex<HashMap<(ConverterSpec, i64), Arc<Dfa>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (spec.clone(), offset);
    if let Some(d) = cache.lock().unwrap().get(&key) {
        return Ok(d.clone());
    }
    let small = build_normalizer_bounded(spec, offset, DEFAULT_BOUND)?;
    let large = build_normalizer_bounded(spec, offset, 2 * DEFAULT_BOUND)?;
    if small != large {
        return Err(Error::NormalizerDiverged {
            bound: DEFAULT_BOUND,
        });
    }
    let d = Arc::new(small);
    cache.lock().unwrap().insert(key, d.clone());
    Ok(d)
}

/// Accepts pairs `(x, t)` over `digits × digits` where `t` is `x` shifted
/// one place right: `t = 0 · x` with the last digit of `x` dropped.
pub fn build_shifter(digits: &[i8]) -> Result<Dfa, Error> {
    let alphabet = DigitAlphabet::new(vec![digits.to_vec(), digits.to_vec()])?;
    let coord = alphabet.coord(0).to_vec();
    let n = coord.len();
    // state i < n: previous x digit is coord[i]; state n: dead
    let zero = coord.iter().position(|&d| d == 0).unwrap() as u32;
    Dfa::from_fn(
        alphabet.clone(),
        n + 1,
        zero,
        |q, s| {
            if q as usize == n {
                return n as u32;
            }
            let a = alphabet.digit(s, 0);
            let b = alphabet.digit(s, 1);
            if b == coord[q as usize] {
                coord.iter().position(|&d| d == a).unwrap() as u32
            } else {
                n as u32
            }
        },
        |q| (q as usize) < n,
    )
    .map(|d| d.minimize())
}

/// Outcome of an exhaustive comparison between an automaton and the
/// relation it is supposed to decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Pass { pairs_checked: u64 },
    Fail {
        x: RepString,
        y: RepString,
        automaton_accepts: bool,
    },
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, OracleVerdict::Pass { .. })
    }
}

/// Builds the normalizer and compares it with direct evaluation on every
/// pair of equal length `<= max_len`.
pub fn oracle_pair_check(spec: &ConverterSpec, offset: i64, max_len: usize) -> Result<OracleVerdict, Error> {
    let d = build_normalizer(spec, offset)?;
    Ok(oracle_check_dfa(&d, spec, offset, max_len))
}

/// Compares `dfa` (over `spec.pair_alphabet()`) with [`ConverterSpec::holds`].
pub fn oracle_check_dfa(dfa: &Dfa, spec: &ConverterSpec, offset: i64, max_len: usize) -> OracleVerdict {
    struct Walk<'a> {
        dfa: &'a Dfa,
        spec: &'a ConverterSpec,
        offset: i64,
        x: Vec<i8>,
        y: Vec<i8>,
        checked: u64,
    }
    impl Walk<'_> {
        fn go(&mut self, q: u32, remaining: usize) -> Option<OracleVerdict> {
            if remaining == 0 {
                self.checked += 1;
                let expected = self.spec.holds(&self.x, &self.y, self.offset);
                let got = self.dfa.is_accepting(q);
                if expected != got {
                    return Some(OracleVerdict::Fail {
                        x: RepString(self.x.clone()),
                        y: RepString(self.y.clone()),
                        automaton_accepts: got,
                    });
                }
                return None;
            }
            let a = self.dfa.alphabet();
            for s in 0..a.len() {
                self.x.push(a.digit(s, 0));
                self.y.push(a.digit(s, 1));
                let r = self.go(self.dfa.next(q, s), remaining - 1);
                self.x.pop();
                self.y.pop();
                if r.is_some() {
                    return r;
                }
            }
            None
        }
    }
    let mut walk = Walk {
        dfa,
        spec,
        offset,
        x: Vec::new(),
        y: Vec::new(),
        checked: 0,
    };
    for len in 0..=max_len {
        if let Some(fail) = walk.go(dfa.initial(), len) {
            return fail;
        }
    }
    OracleVerdict::Pass {
        pairs_checked: walk.checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        let f = FibSequence::new();
        assert_eq!((f.get(0), f.get(1), f.get(2), f.get(3), f.get(10)), (0, 1, 1, 2, 55));
        assert_eq!(f.len(), 93);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_rep(&[2, 1, 0, 1], Anchor::F2), 14);
        assert_eq!(eval_rep(&[], Anchor::F2), 0);
        assert_eq!(eval_rep(&[], Anchor::F1), 0);
        // core 100010 at F2 plus a trailing ε = -1 of weight F_1
        let odd = RepString::from("100010ī");
        assert_eq!(eval_rep(odd.digits(), Anchor::F1), 14);
        assert_eq!(eval_rep(&[1, 0, 0, 0, 1, 0], Anchor::F2) - 1, 14);
    }

    #[test]
    fn zeckendorf_examples() {
        assert_eq!(zeckendorf_encode(11).to_string(), "10100");
        assert_eq!(zeckendorf_encode(0), RepString::default());
        assert_eq!(zeckendorf_encode(12).to_string(), "10101");
    }

    #[test]
    fn zeckendorf_round_trip_up_to_1e5() {
        for n in 0..=100_000u64 {
            let z = zeckendorf_encode(n);
            assert!(!z.0.windows(2).any(|w| w == [1, 1]), "{n}");
            assert_eq!(eval_rep(z.digits(), Anchor::F2), n as i64);
            assert!(z.0.first().is_none_or(|&d| d == 1));
        }
    }

    #[test]
    fn rep_string_render_and_parse() {
        let r = RepString(vec![1, 0, -1, 0, 0, 1]);
        assert_eq!(r.to_string(), "10ī001");
        assert_eq!(r.machine(), "10-1001");
        assert_eq!(RepString::parse("10-1001").unwrap(), r);
        assert_eq!(RepString::parse("10[-1]001").unwrap(), r);
        assert_eq!(RepString::parse("10ī001").unwrap(), r);
        assert_eq!(RepString::parse("ε").unwrap(), RepString::default());
        assert!(RepString::parse("1x").is_err());
        assert_eq!(RepString::from("0010").strip_leading_zeros().to_string(), "10");
    }

    fn pair(spec: &ConverterSpec, x: &str, y: &str) -> Vec<usize> {
        let x = RepString::from(x);
        let y = RepString::from(y);
        crate::automata::encode_tracks(&spec.pair_alphabet(), &[x.digits(), y.digits()]).unwrap()
    }

    #[test]
    fn binary_normalizer_examples() {
        let spec = ConverterSpec::binary();
        let c = build_normalizer(&spec, 0).unwrap();
        assert!(c.accepts(&pair(&spec, "01110", "10010")));
        assert!(c.accepts(&pair(&spec, "011", "100")));
        assert!(!c.accepts(&pair(&spec, "10", "01")));
        // y must be Zeckendorf
        assert!(!c.accepts(&pair(&spec, "100", "011")));
    }

    #[test]
    fn binary_normalizer_passes_oracle() {
        let v = oracle_pair_check(&ConverterSpec::binary(), 0, 10).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn signed_normalizer_passes_oracle() {
        let v = oracle_pair_check(&ConverterSpec::signed(), 0, 8).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn corrupted_normalizer_fails_oracle() {
        let spec = ConverterSpec::binary();
        let good = build_normalizer(&spec, 0).unwrap();
        let flipped: Vec<bool> = good
            .accepting()
            .iter()
            .enumerate()
            .map(|(i, &a)| if i == good.initial() as usize { !a } else { a })
            .collect();
        let bad = Dfa::new(
            good.alphabet().clone(),
            good.transitions().to_vec(),
            flipped,
            good.initial(),
        )
        .unwrap();
        match oracle_check_dfa(&bad, &spec, 0, 4) {
            OracleVerdict::Fail { x, y, automaton_accepts } => {
                assert_eq!(spec.holds(x.digits(), y.digits(), 0), !automaton_accepts);
            }
            v => panic!("expected failure, got {v:?}"),
        }
    }

    #[test]
    fn offset_coherence() {
        for spec in [ConverterSpec::binary(), ConverterSpec::signed()] {
            for offset in -1..=1 {
                let v = oracle_pair_check(&spec, offset, 6).unwrap();
                assert!(v.passed(), "{spec:?} {offset} {v:?}");
            }
        }
    }

    #[test]
    fn offsets_beyond_two_are_rejected() {
        assert_eq!(
            build_normalizer_bounded(&ConverterSpec::binary(), 3, 16),
            Err(Error::OffsetOutOfRange(3))
        );
    }

    #[test]
    fn bound_fixpoint_holds() {
        for spec in [ConverterSpec::binary(), ConverterSpec::signed()] {
            for sign in [1, -1] {
                for anchor in [Anchor::F2, Anchor::F1] {
                    let s = spec.with_sign(sign).with_anchor(anchor);
                    for offset in -1..=1 {
                        let a = build_normalizer_bounded(&s, offset, DEFAULT_BOUND).unwrap();
                        let b = build_normalizer_bounded(&s, offset, 2 * DEFAULT_BOUND).unwrap();
                        assert_eq!(a, b, "{s:?} {offset}");
                    }
                }
            }
        }
    }

    #[test]
    fn shifter_and_f1_values() {
        let digits = [-1, 0, 1];
        let sh = build_shifter(&digits).unwrap();
        let alpha = sh.alphabet().clone();
        // all x of length <= 7 over {-1,0,1}; find t with the shifter and
        // compare F1 value of x with F2 value of t plus the last digit
        let mut xs: Vec<Vec<i8>> = vec![vec![]];
        for _ in 0..7 {
            let mut next = Vec::new();
            for x in &xs {
                if x.len() < 7 {
                    for d in digits {
                        let mut x2 = x.clone();
                        x2.push(d);
                        next.push(x2);
                    }
                }
            }
            xs.extend(next);
            xs.dedup();
        }
        xs.sort();
        xs.dedup();
        for x in xs {
            let mut t = vec![0];
            t.extend_from_slice(&x[..x.len().saturating_sub(1)]);
            if x.is_empty() {
                t.clear();
            }
            let w = crate::automata::encode_tracks(&alpha, &[&x, &t]).unwrap();
            assert!(sh.accepts(&w), "{x:?}");
            let last = x.last().copied().unwrap_or(0) as i64;
            assert_eq!(eval_rep(&x, Anchor::F1), eval_rep(&t, Anchor::F2) + last);
        }
        // a non-shift is rejected
        let w = crate::automata::encode_tracks(&alpha, &[&[1, 0], &[1, 0]]).unwrap();
        assert!(!sh.accepts(&w));
    }
}
