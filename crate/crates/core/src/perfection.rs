//! Completeness and unambiguity of rule languages, and fast lookup of
//! representations.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::automata::{
    combine, cylinder, exists, intersect_all, pad_normalize, union_all, BoolOp, DigitAlphabet,
    Dfa,
};
use crate::error::Error;
use crate::fib::{build_normalizer, eval_rep, zeckendorf_encode, Anchor, ConverterSpec, RepString};
use crate::regex::regex_dfa;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Naturals,
    Integers,
}

impl Domain {
    /// Signs that have to be checked separately.
    pub fn signs(self) -> &'static [i8] {
        match self {
            Domain::Naturals => &[1],
            Domain::Integers => &[1, -1],
        }
    }
}

/// How representations are compared when a system has several offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnambiguityMode {
    /// Two distinct rule strings must not have the same value. The trailing
    /// ε digit is not part of the comparison.
    Core,
    /// Two (string, offset) pairs that denote the same value must coincide.
    AcrossOffsets,
}

/// A numeration system: rule language plus how its strings are valued.
///
/// With `completeness_offsets` other than `[0]`, a rule string `x` is a core
/// and the full representation of `n` is `x` followed by an ε digit `-c`,
/// where `value(x) = n + c`.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub name: String,
    pub rule: Dfa,
    pub converter: ConverterSpec,
    pub domain: Domain,
    pub completeness_offsets: Vec<i64>,
}

impl SystemSpec {
    /// The rule is closed under leading zeros and minimized.
    pub fn new(name: impl Into<String>, rule: &Dfa, converter: ConverterSpec, domain: Domain) -> Result<Self, Error> {
        let a = rule.alphabet();
        if a.arity() != 1 || a.coord(0) != converter.x_digits.as_slice() {
            return Err(Error::AlphabetMismatch {
                left: a.to_string(),
                right: format!("{:?}", converter.x_digits),
            });
        }
        Ok(SystemSpec {
            name: name.into(),
            rule: pad_normalize(rule),
            converter: converter.with_sign(1),
            domain,
            completeness_offsets: vec![0],
        })
    }

    pub fn from_regex(
        name: impl Into<String>,
        regex: &str,
        digits: &[i8],
        anchor: Anchor,
        domain: Domain,
    ) -> Result<Self, Error> {
        let alphabet = DigitAlphabet::unary(digits)?;
        let rule = regex_dfa(regex, &alphabet)?;
        let conv = ConverterSpec::new(digits.to_vec(), 1, anchor)?;
        Self::new(name, &rule, conv, domain)
    }

    pub fn with_offsets(mut self, offsets: &[i64]) -> Result<Self, Error> {
        if offsets.is_empty() || offsets.iter().any(|c| c.abs() > 1) {
            return Err(Error::InvalidSystem(format!("offsets must lie in -1..=1, got {offsets:?}")));
        }
        if self.converter.anchor == Anchor::F1 && offsets != [0] {
            return Err(Error::InvalidSystem("offsets need an F2 anchored rule".into()));
        }
        let mut o = offsets.to_vec();
        o.sort_unstable();
        o.dedup();
        self.completeness_offsets = o;
        Ok(self)
    }

    pub fn digits(&self) -> &[i8] {
        &self.converter.x_digits
    }

    pub fn has_epsilon_term(&self) -> bool {
        self.completeness_offsets != [0]
    }

    /// Value of a full representation string.
    pub fn value_of(&self, rep: &[i8]) -> i64 {
        if self.has_epsilon_term() {
            eval_rep(rep, Anchor::F1)
        } else {
            eval_rep(rep, self.converter.anchor)
        }
    }

    /// Whether a full representation string is valid in this system.
    pub fn accepts(&self, rep: &[i8]) -> bool {
        if !rep.iter().all(|d| self.digits().contains(d)) {
            return false;
        }
        if self.has_epsilon_term() {
            let (core, eps) = match rep.split_last() {
                Some((&e, core)) => (core, e as i64),
                None => (rep, 0),
            };
            self.completeness_offsets.contains(&-eps) && self.rule.accepts_digits(core)
        } else {
            self.rule.accepts_digits(rep)
        }
    }

    /// Full representation built from a rule string and the offset used.
    pub fn full_rep(&self, core: &[i8], offset: i64) -> RepString {
        let mut r = RepString(core.to_vec()).strip_leading_zeros();
        if self.has_epsilon_term() {
            r.0.push(-offset as i8);
            r = r.strip_leading_zeros();
        }
        r
    }

    pub fn state_counts(&self) -> StateCounts {
        StateCounts {
            complete: self.rule.num_states(),
            trimmed: self.rule.trimmed_state_count(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub complete: usize,
    pub trimmed: usize,
}

/// The diagonal `{(x, x)}` over `digits × digits`.
pub fn equal_rel(digits: &[i8]) -> Result<Dfa, Error> {
    let alphabet = DigitAlphabet::new(vec![digits.to_vec(), digits.to_vec()])?;
    Dfa::from_fn(
        alphabet.clone(),
        2,
        0,
        |q, s| {
            if q == 0 && alphabet.digit(s, 0) == alphabet.digit(s, 1) {
                0
            } else {
                1
            }
        },
        |q| q == 0,
    )
}

/// Binary strings without `11`, closed under leading zeros.
pub fn zeckendorf_language() -> Dfa {
    regex_dfa(".*11.*", &DigitAlphabet::binary())
        .expect("fixed regex")
        .complement()
        .minimize()
}

fn nonzero_language() -> Dfa {
    regex_dfa("0*1.*", &DigitAlphabet::binary()).expect("fixed regex")
}

fn zeck_value(track: &[i8]) -> i64 {
    eval_rep(track, Anchor::F2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completeness {
    pub sign: i8,
    pub complete: bool,
    /// smallest missing value (signed)
    pub witness: Option<i64>,
    /// Zeckendorf string of `|witness|`
    pub witness_zeckendorf: Option<String>,
    /// missing values with Zeckendorf length at most 12, at most 16 of them
    pub missing_sample: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub value: i64,
    pub first: String,
    pub second: String,
    pub first_machine: String,
    pub second_machine: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unambiguity {
    pub sign: i8,
    pub mode: UnambiguityMode,
    pub unambiguous: bool,
    pub witness: Option<Collision>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfectionReport {
    pub system: String,
    pub domain: Domain,
    pub offsets: Vec<i64>,
    pub perfect: bool,
    pub completeness: Vec<Completeness>,
    pub unambiguity: Vec<Unambiguity>,
    /// only for systems with an ε digit; informational
    pub unambiguity_across_offsets: Vec<Unambiguity>,
    pub rule_states: StateCounts,
    pub elapsed_ms: f64,
}

impl PerfectionReport {
    pub fn complete(&self) -> bool {
        self.completeness.iter().all(|c| c.complete)
    }

    pub fn unambiguous(&self) -> bool {
        self.unambiguity.iter().all(|u| u.unambiguous)
    }
}

fn check_sign(sys: &SystemSpec, sign: i8) -> Result<ConverterSpec, Error> {
    if sign != 1 && !(sign == -1 && sys.domain == Domain::Integers) {
        return Err(Error::InvalidSystem(format!(
            "sign {sign} is not checked for a {:?} system",
            sys.domain
        )));
    }
    Ok(sys.converter.with_sign(sign))
}

/// Values of `sign` reached by the rule, as a pad-closed language of
/// Zeckendorf strings.
fn reached_values(sys: &SystemSpec, conv: &ConverterSpec) -> Result<Dfa, Error> {
    let pair = conv.pair_alphabet();
    let lifted = cylinder(&sys.rule, &pair, &[0])?;
    let mut parts = Vec::new();
    for &c in &sys.completeness_offsets {
        let n = build_normalizer(conv, c)?;
        let both = combine(BoolOp::And, &lifted, &n)?;
        parts.push(exists(&both, &[1])?);
    }
    if conv.sign < 0 {
        // zero is checked on the positive side
        parts.push(regex_dfa("0*", &DigitAlphabet::binary())?);
    }
    let refs: Vec<&Dfa> = parts.iter().collect();
    Ok(pad_normalize(&union_all(&refs)?))
}

/// Is every value of the given sign represented?
pub fn check_completeness(sys: &SystemSpec, sign: i8) -> Result<Completeness, Error> {
    let conv = check_sign(sys, sign)?;
    let reached = reached_values(sys, &conv)?;
    let missing = combine(BoolOp::Diff, &zeckendorf_language(), &reached)?.minimize();
    let Some(word) = missing.shortest_word() else {
        return Ok(Completeness {
            sign,
            complete: true,
            witness: None,
            witness_zeckendorf: None,
            missing_sample: Vec::new(),
        });
    };
    let z = RepString(missing.tracks(&word).remove(0)).strip_leading_zeros();
    let witness = sign as i64 * zeck_value(z.digits());
    let mut sample: Vec<i64> = missing
        .enumerate(12)
        .into_iter()
        .filter(|w| w.first().is_none_or(|&s| s != 0))
        .map(|w| sign as i64 * zeck_value(&missing.tracks(&w)[0]))
        .collect();
    sample.sort_by_key(|v| v.abs());
    sample.dedup();
    sample.truncate(16);
    Ok(Completeness {
        sign,
        complete: false,
        witness: Some(witness),
        witness_zeckendorf: Some(z.to_string()),
        missing_sample: sample,
    })
}

fn collision_search(sys: &SystemSpec, conv: &ConverterSpec, c1: i64, c2: i64) -> Result<Option<Collision>, Error> {
    let d = sys.digits().to_vec();
    let triple = DigitAlphabet::new(vec![d.clone(), d.clone(), vec![0, 1]])?;
    let rx = cylinder(&sys.rule, &triple, &[0])?;
    let ry = cylinder(&sys.rule, &triple, &[1])?;
    let n1 = cylinder(&*build_normalizer(conv, c1)?, &triple, &[0, 2])?;
    let n2 = cylinder(&*build_normalizer(conv, c2)?, &triple, &[1, 2])?;
    let mut parts = vec![rx, ry, n1, n2];
    if c1 == c2 {
        parts.push(cylinder(&equal_rel(&d)?.complement(), &triple, &[0, 1])?);
    }
    if conv.sign < 0 {
        parts.push(cylinder(&nonzero_language(), &triple, &[2])?);
    }
    let refs: Vec<&Dfa> = parts.iter().collect();
    let all = intersect_all(&refs)?;
    let Some(word) = all.shortest_word() else {
        return Ok(None);
    };
    let tracks = all.tracks(&word);
    let value = conv.sign as i64 * zeck_value(&tracks[2]);
    let first = sys.full_rep(&tracks[0], c1);
    let second = sys.full_rep(&tracks[1], c2);
    Ok(Some(Collision {
        value,
        first: first.to_string(),
        second: second.to_string(),
        first_machine: first.machine(),
        second_machine: second.machine(),
    }))
}

/// Do two distinct representations share a value of the given sign?
pub fn check_unambiguity(sys: &SystemSpec, sign: i8, mode: UnambiguityMode) -> Result<Unambiguity, Error> {
    let conv = check_sign(sys, sign)?;
    let offs = &sys.completeness_offsets;
    let mut witness = None;
    'outer: for (i, &c1) in offs.iter().enumerate() {
        for &c2 in &offs[i..] {
            if mode == UnambiguityMode::Core && c1 != c2 {
                continue;
            }
            if let Some(w) = collision_search(sys, &conv, c1, c2)? {
                witness = Some(w);
                break 'outer;
            }
        }
    }
    Ok(Unambiguity {
        sign,
        mode,
        unambiguous: witness.is_none(),
        witness,
    })
}

/// Runs every completeness and unambiguity check the domain calls for.
pub fn check_perfect(sys: &SystemSpec) -> Result<PerfectionReport, Error> {
    let start = Instant::now();
    let mut completeness = Vec::new();
    let mut unambiguity = Vec::new();
    let mut across = Vec::new();
    for &sign in sys.domain.signs() {
        completeness.push(check_completeness(sys, sign)?);
        unambiguity.push(check_unambiguity(sys, sign, UnambiguityMode::Core)?);
        if sys.has_epsilon_term() {
            across.push(check_unambiguity(sys, sign, UnambiguityMode::AcrossOffsets)?);
        }
    }
    let perfect = completeness.iter().all(|c| c.complete) && unambiguity.iter().all(|u| u.unambiguous);
    Ok(PerfectionReport {
        system: sys.name.clone(),
        domain: sys.domain,
        offsets: sys.completeness_offsets.clone(),
        perfect,
        completeness,
        unambiguity,
        unambiguity_across_offsets: across,
        rule_states: sys.state_counts(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Work done by [`find_representation_traced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchTrace {
    /// product states visited
    pub visited: usize,
    /// `|rule| · |normalizer| · offsets`: the per-position ceiling
    pub width: usize,
}

/// A representation of `n` in the system.
pub fn find_representation(sys: &SystemSpec, n: i64) -> Result<RepString, Error> {
    find_representation_traced(sys, n).map(|(r, _)| r)
}

/// Breadth-first search over rule × normalizer × (the Zeckendorf string of
/// `|n|` with leading zeros), built on the fly.
pub fn find_representation_traced(sys: &SystemSpec, n: i64) -> Result<(RepString, SearchTrace), Error> {
    if n < 0 && sys.domain == Domain::Naturals {
        return Err(Error::NoRepresentation(n));
    }
    let conv = sys.converter.with_sign(if n < 0 { -1 } else { 1 });
    let z = zeckendorf_encode(n.unsigned_abs());
    let z = z.digits();
    let rule = &sys.rule;
    let rule_live = rule.live_states();
    let norms: Vec<(i64, Arc<Dfa>)> = sys
        .completeness_offsets
        .iter()
        .map(|&c| build_normalizer(&conv, c).map(|d| (c, d)))
        .collect::<Result<_, _>>()?;
    let k = rule.alphabet().len();
    let width = rule.num_states() * norms.iter().map(|(_, d)| d.num_states()).sum::<usize>();

    // (offset index, rule state, normalizer state, position in z)
    type Node = (usize, u32, u32, usize);
    let mut parent: HashMap<Node, Option<(Node, i8)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for (oi, (_, nd)) in norms.iter().enumerate() {
        let node = (oi, rule.initial(), nd.initial(), 0);
        parent.insert(node, None);
        queue.push_back(node);
    }
    let lives: Vec<Vec<bool>> = norms.iter().map(|(_, d)| d.live_states()).collect();
    let mut found = None;
    while let Some(node @ (oi, rq, nq, pos)) = queue.pop_front() {
        let nd = &norms[oi].1;
        if pos == z.len() && rule.is_accepting(rq) && nd.is_accepting(nq) {
            found = Some(node);
            break;
        }
        // next y digit: padding while nothing of z is read, else z[pos]
        let mut steps: Vec<(i8, usize)> = Vec::with_capacity(2);
        if pos == 0 {
            steps.push((0, 0));
        }
        if pos < z.len() {
            steps.push((z[pos], pos + 1));
        }
        for &(b, npos) in &steps {
            for xs in 0..k {
                let rq2 = rule.next(rq, xs);
                if !rule_live[rq2 as usize] {
                    continue;
                }
                let nq2 = nd.next(nq, xs * 2 + b as usize);
                if !lives[oi][nq2 as usize] {
                    continue;
                }
                let next = (oi, rq2, nq2, npos);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((node, rule.alphabet().digit(xs, 0))));
                    queue.push_back(next);
                }
            }
        }
    }
    let visited = parent.len();
    let Some(mut node) = found else {
        return Err(Error::NoRepresentation(n));
    };
    let offset = norms[node.0].0;
    let mut digits = Vec::new();
    while let Some(Some((prev, d))) = parent.get(&node).copied() {
        digits.push(d);
        node = prev;
    }
    digits.reverse();
    Ok((sys.full_rep(&digits, offset), SearchTrace { visited, width }))
}

/// Number of binary strings, up to leading zeros, with Fibonacci value `n`.
pub fn count_representations(n: u64) -> u64 {
    let conv = ConverterSpec::binary();
    let nd = build_normalizer(&conv, 0).expect("binary normalizer");
    // longest representation is at most one digit longer than Zeckendorf
    let mut y = vec![0i8];
    y.extend_from_slice(zeckendorf_encode(n).digits());
    let mut counts: HashMap<u32, u64> = HashMap::from([(nd.initial(), 1)]);
    for &b in &y {
        let mut next: HashMap<u32, u64> = HashMap::new();
        for (&q, &c) in &counts {
            for a in 0..2usize {
                *next.entry(nd.next(q, a * 2 + b as usize)).or_default() += c;
            }
        }
        counts = next;
    }
    counts
        .iter()
        .filter(|(&q, _)| nd.is_accepting(q))
        .map(|(_, &c)| c)
        .sum()
}

/// Every full representation with a rule string of length at most
/// `max_len`, without leading zeros, grouped by value. Direct enumeration,
/// independent of the normalizers.
pub fn enumerate_representations(sys: &SystemSpec, max_len: usize) -> HashMap<i64, Vec<RepString>> {
    let rule = &sys.rule;
    let live = rule.live_states();
    let alphabet = rule.alphabet();
    let mut out: HashMap<i64, Vec<RepString>> = HashMap::new();
    let mut record = |core: &[i8]| {
        for &c in &sys.completeness_offsets {
            let r = sys.full_rep(core, c);
            out.entry(sys.value_of(r.digits())).or_default().push(r);
        }
    };
    fn walk(
        rule: &Dfa,
        live: &[bool],
        alphabet: &DigitAlphabet,
        q: u32,
        buf: &mut Vec<i8>,
        max_len: usize,
        record: &mut dyn FnMut(&[i8]),
    ) {
        if rule.is_accepting(q) {
            record(buf);
        }
        if buf.len() == max_len {
            return;
        }
        for s in 0..alphabet.len() {
            let d = alphabet.digit(s, 0);
            if buf.is_empty() && d == 0 {
                continue;
            }
            let r = rule.next(q, s);
            if live[r as usize] {
                buf.push(d);
                walk(rule, live, alphabet, r, buf, max_len, record);
                buf.pop();
            }
        }
    }
    let mut buf = Vec::new();
    walk(rule, &live, alphabet, rule.initial(), &mut buf, max_len, &mut record);
    out
}
