use std::collections::{HashMap, VecDeque};

use super::alphabet::DigitAlphabet;
use crate::error::Error;

/// A word as a sequence of symbol indices of some [`DigitAlphabet`].
pub type Word = Vec<usize>;

/// Complete deterministic automaton over a [`DigitAlphabet`].
///
/// The transition table is total: a dead state is materialized whenever one
/// is needed. States are dense `u32` ids; row `q` of `delta` holds the
/// successors of `q` in symbol order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: DigitAlphabet,
    delta: Vec<u32>,
    accepting: Vec<bool>,
    initial: u32,
}

impl Dfa {
    pub fn new(
        alphabet: DigitAlphabet,
        delta: Vec<u32>,
        accepting: Vec<bool>,
        initial: u32,
    ) -> Result<Self, Error> {
        let n = accepting.len();
        let k = alphabet.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if delta.len() != n * k {
            return Err(Error::InvalidAutomaton(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * k
            )));
        }
        if initial as usize >= n || delta.iter().any(|&q| q as usize >= n) {
            return Err(Error::InvalidAutomaton("state id out of range".into()));
        }
        Ok(Dfa {
            alphabet,
            delta,
            accepting,
            initial,
        })
    }

    /// Builds a `states`-state automaton from a transition function.
    pub fn from_fn(
        alphabet: DigitAlphabet,
        states: usize,
        initial: u32,
        mut next: impl FnMut(u32, usize) -> u32,
        mut accept: impl FnMut(u32) -> bool,
    ) -> Result<Self, Error> {
        let k = alphabet.len();
        let mut delta = Vec::with_capacity(states * k);
        for q in 0..states as u32 {
            for a in 0..k {
                delta.push(next(q, a));
            }
        }
        let accepting = (0..states as u32).map(&mut accept).collect();
        Self::new(alphabet, delta, accepting, initial)
    }

    /// Accepts every word.
    pub fn universal(alphabet: DigitAlphabet) -> Self {
        let k = alphabet.len();
        Dfa {
            alphabet,
            delta: vec![0; k],
            accepting: vec![true],
            initial: 0,
        }
    }

    /// Accepts nothing.
    pub fn empty(alphabet: DigitAlphabet) -> Self {
        let mut d = Self::universal(alphabet);
        d.accepting[0] = false;
        d
    }

    /// Accepts exactly `{ε}`.
    pub fn epsilon(alphabet: DigitAlphabet) -> Self {
        let k = alphabet.len();
        Dfa {
            alphabet,
            delta: [vec![1; k], vec![1; k]].concat(),
            accepting: vec![true, false],
            initial: 0,
        }
    }

    pub fn alphabet(&self) -> &DigitAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    #[inline]
    pub fn next(&self, q: u32, symbol: usize) -> u32 {
        self.delta[q as usize * self.alphabet.len() + symbol]
    }

    #[inline]
    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn transitions(&self) -> &[u32] {
        &self.delta
    }

    pub fn run(&self, word: &[usize]) -> u32 {
        word.iter().fold(self.initial, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.is_accepting(self.run(word))
    }

    /// Membership of a one-track digit string. Digits outside the alphabet
    /// make the word rejected.
    pub fn accepts_digits(&self, digits: &[i8]) -> bool {
        let mut q = self.initial;
        for &d in digits {
            match self.alphabet.index_of(&[d]) {
                Some(a) => q = self.next(q, a),
                None => return false,
            }
        }
        self.is_accepting(q)
    }

    /// Membership of a tuple of tracks, each padded with leading zeros to
    /// the longest one.
    pub fn accepts_tracks(&self, tracks: &[&[i8]]) -> bool {
        match encode_tracks(&self.alphabet, tracks) {
            Some(w) => self.accepts(&w),
            None => false,
        }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.accepting.iter_mut().for_each(|a| *a = !*a);
        d
    }

    /// States in breadth-first discovery order from the initial state,
    /// following symbols in alphabet order.
    pub fn bfs_order(&self) -> Vec<u32> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    order.push(r);
                }
            }
        }
        order
    }

    /// Renumbers reachable states breadth-first; unreachable states vanish.
    pub fn canonical(&self) -> Dfa {
        let order = self.bfs_order();
        let mut id = vec![u32::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            id[q as usize] = i as u32;
        }
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(order.len() * k);
        let mut accepting = Vec::with_capacity(order.len());
        for &q in &order {
            for a in 0..k {
                delta.push(id[self.next(q, a) as usize]);
            }
            accepting.push(self.is_accepting(q));
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            accepting,
            initial: 0,
        }
    }

    /// Minimal complete automaton for the same language, numbered
    /// breadth-first from the initial state. Equivalent inputs produce
    /// identical outputs.
    pub fn minimize(&self) -> Dfa {
        let reach = self.canonical();
        let n = reach.num_states();
        let k = reach.alphabet.len();
        let mut class: Vec<u32> = reach.accepting.iter().map(|&a| a as u32).collect();
        let mut classes = if reach.accepting.iter().all(|&a| a)
            || reach.accepting.iter().all(|&a| !a)
        {
            class.iter_mut().for_each(|c| *c = 0);
            1
        } else {
            2
        };
        let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sig = Vec::with_capacity(k + 1);
        loop {
            sig_ids.clear();
            let mut next_class = Vec::with_capacity(n);
            for q in 0..n {
                sig.clear();
                sig.push(class[q]);
                for a in 0..k {
                    sig.push(class[reach.delta[q * k + a] as usize]);
                }
                let fresh = sig_ids.len() as u32;
                let id = *sig_ids.entry(sig.clone()).or_insert(fresh);
                next_class.push(id);
            }
            let count = sig_ids.len();
            class = next_class;
            if count == classes {
                break;
            }
            classes = count;
        }
        let mut delta = vec![0; classes * k];
        let mut accepting = vec![false; classes];
        for q in 0..n {
            let c = class[q] as usize;
            accepting[c] = reach.accepting[q];
            for a in 0..k {
                delta[c * k + a] = class[reach.delta[q * k + a] as usize];
            }
        }
        Dfa {
            alphabet: reach.alphabet,
            delta,
            accepting,
            initial: class[0],
        }
        .canonical()
    }

    /// States from which some accepting state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                rev[self.delta[q * k + a] as usize].push(q as u32);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| live[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Number of states that are reachable and co-reachable, i.e. the size
    /// of the automaton with dead and unreachable states removed.
    pub fn trimmed_state_count(&self) -> usize {
        let live = self.live_states();
        self.bfs_order()
            .into_iter()
            .filter(|&q| live[q as usize])
            .count()
    }

    /// Applies a symbol bijection: the result accepts `map(u)` iff `self`
    /// accepts `u`.
    pub fn relabel(&self, map: impl Fn(&[i8]) -> Vec<i8>) -> Result<Dfa, Error> {
        let k = self.alphabet.len();
        let mut image = vec![usize::MAX; k];
        for a in 0..k {
            let to = map(&self.alphabet.digits_of(a));
            let b = self.alphabet.index_of(&to).ok_or_else(|| {
                Error::InvalidAlphabet(format!("relabel target {to:?} outside alphabet"))
            })?;
            if image[b] != usize::MAX {
                return Err(Error::InvalidAlphabet("relabel map is not a bijection".into()));
            }
            image[b] = a;
        }
        // image[b] = preimage of b
        let n = self.num_states();
        let mut delta = Vec::with_capacity(n * k);
        for q in 0..n {
            for &pre in &image {
                delta.push(self.delta[q * k + pre]);
            }
        }
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            accepting: self.accepting.clone(),
            initial: self.initial,
        })
    }

    /// Shortest accepted word, lexicographically least among the shortest.
    pub fn shortest_word(&self) -> Option<Word> {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[self.initial as usize] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            if self.is_accepting(q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur as usize] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    parent[r as usize] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// All accepted words of length at most `max_len`, ordered by length and
    /// then lexicographically.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let live = self.live_states();
        let k = self.alphabet.len();
        let mut out = Vec::new();
        let mut level: Vec<(Word, u32)> = Vec::new();
        if live[self.initial as usize] {
            level.push((Vec::new(), self.initial));
        }
        for len in 0..=max_len {
            for (w, q) in &level {
                if self.is_accepting(*q) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &level {
                for a in 0..k {
                    let r = self.next(*q, a);
                    if live[r as usize] {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, r));
                    }
                }
            }
            level = next;
        }
        out
    }

    /// Decodes a word into per-symbol digit tuples.
    pub fn decode(&self, word: &[usize]) -> Vec<Vec<i8>> {
        word.iter().map(|&a| self.alphabet.digits_of(a)).collect()
    }

    /// Splits a word into its tracks.
    pub fn tracks(&self, word: &[usize]) -> Vec<Vec<i8>> {
        let arity = self.alphabet.arity();
        (0..arity)
            .map(|c| word.iter().map(|&a| self.alphabet.digit(a, c)).collect())
            .collect()
    }
}

/// Encodes tracks as a word, padding shorter tracks with leading zeros.
pub fn encode_tracks(alphabet: &DigitAlphabet, tracks: &[&[i8]]) -> Option<Word> {
    if tracks.len() != alphabet.arity() {
        return None;
    }
    let len = tracks.iter().map(|t| t.len()).max().unwrap_or(0);
    let mut word = Vec::with_capacity(len);
    let mut tuple = vec![0i8; tracks.len()];
    for i in 0..len {
        for (c, t) in tracks.iter().enumerate() {
            let pad = len - t.len();
            tuple[c] = if i < pad { 0 } else { t[i - pad] };
        }
        word.push(alphabet.index_of(&tuple)?);
    }
    Some(word)
}

/// Encodes a one-track digit string.
pub fn encode_digits(alphabet: &DigitAlphabet, digits: &[i8]) -> Option<Word> {
    digits.iter().map(|&d| alphabet.index_of(&[d])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Binary words with no factor `11`: states = last digit, plus dead.
    fn no11() -> Dfa {
        Dfa::from_fn(
            DigitAlphabet::binary(),
            3,
            0,
            |q, a| match (q, a) {
                (0, 0) => 0,
                (0, 1) => 1,
                (1, 0) => 0,
                _ => 2,
            },
            |q| q < 2,
        )
        .unwrap()
    }

    #[test]
    fn no11_minimal_has_three_states() {
        let m = no11().minimize();
        assert_eq!(m.num_states(), 3);
        assert_eq!(m.trimmed_state_count(), 2);
    }

    #[test]
    fn minimize_merges_duplicates_and_is_idempotent() {
        // Same as no11 but with a redundant copy of state 0.
        let d = Dfa::from_fn(
            DigitAlphabet::binary(),
            5,
            0,
            |q, a| match (q, a) {
                (0, 0) => 3,
                (0, 1) => 1,
                (3, 0) => 0,
                (3, 1) => 1,
                (1, 0) => 3,
                (4, _) => 0,
                _ => 2,
            },
            |q| q != 2,
        )
        .unwrap();
        let m = d.minimize();
        assert_eq!(m, no11().minimize());
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn shortest_word_prefers_lexicographically_least() {
        // accepts words of length 2 ending in anything, and "11" earlier? no:
        // accepts {01, 10}
        let d = Dfa::from_fn(
            DigitAlphabet::binary(),
            5,
            0,
            |q, a| match (q, a) {
                (0, 0) => 1,
                (0, 1) => 2,
                (1, 1) => 3,
                (2, 0) => 3,
                _ => 4,
            },
            |q| q == 3,
        )
        .unwrap();
        assert_eq!(d.shortest_word(), Some(vec![0, 1]));
        assert!(Dfa::empty(DigitAlphabet::binary()).shortest_word().is_none());
        assert_eq!(Dfa::universal(DigitAlphabet::binary()).shortest_word(), Some(vec![]));
    }

    #[test]
    fn enumerate_no11_up_to_three() {
        let words: Vec<String> = no11()
            .enumerate(3)
            .iter()
            .map(|w| w.iter().map(|a| a.to_string()).collect())
            .collect();
        assert_eq!(
            words,
            ["", "0", "1", "00", "01", "10", "000", "001", "010", "100", "101"]
        );
        assert!(Dfa::empty(DigitAlphabet::binary()).enumerate(5).is_empty());
    }

    #[test]
    fn relabel_rejects_non_bijection() {
        assert!(no11().relabel(|_| vec![0]).is_err());
        let id = no11().relabel(|d| d.to_vec()).unwrap();
        assert_eq!(id, no11());
    }

    #[test]
    fn tracks_are_padded_on_the_left() {
        let a = DigitAlphabet::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let w = encode_tracks(&a, &[&[1, 0, 1], &[1]]).unwrap();
        assert_eq!(
            w.iter().map(|&s| a.digits_of(s)).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![0, 0], vec![1, 1]]
        );
    }
}
