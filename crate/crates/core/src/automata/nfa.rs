use std::collections::HashMap;

use super::alphabet::DigitAlphabet;
use super::dfa::Dfa;
use crate::error::Error;

/// Nondeterministic automaton with optional ε-moves.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: DigitAlphabet,
    initial: Vec<u32>,
    /// `trans[q * k + a]` = successors of `q` on symbol `a`.
    trans: Vec<Vec<u32>>,
    eps: Vec<Vec<u32>>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: DigitAlphabet) -> Self {
        Nfa {
            alphabet,
            initial: Vec::new(),
            trans: Vec::new(),
            eps: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &DigitAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> u32 {
        let id = self.accepting.len() as u32;
        self.accepting.push(accepting);
        self.eps.push(Vec::new());
        self.trans
            .extend(std::iter::repeat_with(Vec::new).take(self.alphabet.len()));
        id
    }

    pub fn set_accepting(&mut self, q: u32, accepting: bool) {
        self.accepting[q as usize] = accepting;
    }

    pub fn add_initial(&mut self, q: u32) {
        if !self.initial.contains(&q) {
            self.initial.push(q);
        }
    }

    pub fn set_initial(&mut self, states: &[u32]) {
        self.initial = states.to_vec();
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn add_transition(&mut self, from: u32, symbol: usize, to: u32) {
        let k = self.alphabet.len();
        let slot = &mut self.trans[from as usize * k + symbol];
        if !slot.contains(&to) {
            slot.push(to);
        }
    }

    pub fn add_epsilon(&mut self, from: u32, to: u32) {
        let slot = &mut self.eps[from as usize];
        if !slot.contains(&to) {
            slot.push(to);
        }
    }

    pub fn successors(&self, q: u32, symbol: usize) -> &[u32] {
        &self.trans[q as usize * self.alphabet.len() + symbol]
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    /// Views a DFA as an NFA.
    pub fn from_dfa(d: &Dfa) -> Nfa {
        let mut n = Nfa::new(d.alphabet().clone());
        for q in 0..d.num_states() as u32 {
            n.add_state(d.is_accepting(q));
        }
        for q in 0..d.num_states() as u32 {
            for a in 0..d.alphabet().len() {
                n.add_transition(q, a, d.next(q, a));
            }
        }
        n.add_initial(d.initial());
        n
    }

    fn closure(&self, set: &mut Vec<u32>) {
        let mut stack = set.clone();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q as usize] {
                if !set.contains(&r) {
                    set.push(r);
                    stack.push(r);
                }
            }
        }
        set.sort_unstable();
        set.dedup();
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur = self.initial.clone();
        self.closure(&mut cur);
        for &a in word {
            let mut next = Vec::new();
            for &q in &cur {
                next.extend_from_slice(self.successors(q, a));
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&q| self.is_accepting(q))
    }

    /// Subset construction. The result is complete; the empty subset becomes
    /// the dead state when it is reachable.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut start = self.initial.clone();
        self.closure(&mut start);
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut delta: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < sets.len() {
            let cur = sets[head].clone();
            head += 1;
            for a in 0..k {
                let mut next = Vec::new();
                for &q in &cur {
                    next.extend_from_slice(self.successors(q, a));
                }
                self.closure(&mut next);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                delta.push(id);
            }
        }
        let accepting = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.is_accepting(q)))
            .collect();
        Dfa::new(self.alphabet.clone(), delta, accepting, 0).expect("subset construction")
    }

    /// Checks that every referenced state exists.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.num_states() as u32;
        let bad = self.initial.iter().any(|&q| q >= n)
            || self.trans.iter().flatten().any(|&q| q >= n)
            || self.eps.iter().flatten().any(|&q| q >= n);
        if bad {
            Err(Error::InvalidAutomaton("transition to undeclared state".into()))
        } else {
            Ok(())
        }
    }
}
