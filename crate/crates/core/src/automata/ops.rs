use std::collections::HashMap;

use super::alphabet::DigitAlphabet;
use super::dfa::{Dfa, Word};
use super::nfa::Nfa;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    /// `a ∧ ¬b`
    Diff,
    /// symmetric difference
    Xor,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Diff => a && !b,
            BoolOp::Xor => a != b,
        }
    }
}

fn same_alphabet(a: &Dfa, b: &Dfa) -> Result<(), Error> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_string(),
            right: b.alphabet().to_string(),
        });
    }
    Ok(())
}

/// Product construction over the reachable pairs.
pub fn combine(op: BoolOp, a: &Dfa, b: &Dfa) -> Result<Dfa, Error> {
    same_alphabet(a, b)?;
    let k = a.alphabet().len();
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    ids.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut head = 0;
    while head < pairs.len() {
        let (p, q) = pairs[head];
        head += 1;
        for s in 0..k {
            let next = (a.next(p, s), b.next(q, s));
            let id = *ids.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() as u32 - 1
            });
            delta.push(id);
        }
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| op.apply(a.is_accepting(p), b.is_accepting(q)))
        .collect();
    Dfa::new(a.alphabet().clone(), delta, accepting, 0)
}

/// Minimized intersection of all automata in `parts`.
pub fn intersect_all(parts: &[&Dfa]) -> Result<Dfa, Error> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidAutomaton("empty intersection".into()))?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = combine(BoolOp::And, &acc, p)?.minimize();
    }
    Ok(acc)
}

/// Minimized union of all automata in `parts`.
pub fn union_all(parts: &[&Dfa]) -> Result<Dfa, Error> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidAutomaton("empty union".into()))?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = combine(BoolOp::Or, &acc, p)?.minimize();
    }
    Ok(acc)
}

/// Projects onto the coordinates in `keep` (existential quantification of
/// the others). The result is nondeterministic in general.
pub fn project(a: &Dfa, keep: &[usize]) -> Result<Nfa, Error> {
    let src = a.alphabet();
    if keep.len() >= src.arity() {
        return Err(Error::InvalidCoordinate(format!(
            "projection must drop a coordinate (arity {}, keeping {})",
            src.arity(),
            keep.len()
        )));
    }
    let target = src.select(keep)?;
    let image: Vec<usize> = (0..src.len())
        .map(|s| {
            let digits: Vec<i8> = keep.iter().map(|&c| src.digit(s, c)).collect();
            target.index_of(&digits).expect("selected digits")
        })
        .collect();
    let mut n = Nfa::new(target);
    for q in 0..a.num_states() as u32 {
        n.add_state(a.is_accepting(q));
    }
    for q in 0..a.num_states() as u32 {
        for (s, &t) in image.iter().enumerate() {
            n.add_transition(q, t, a.next(q, s));
        }
    }
    n.add_initial(a.initial());
    Ok(n)
}

/// Lifts `a` into the product space `target`: coordinate `i` of `a` is read
/// from coordinate `placement[i]` of `target`, all other coordinates are
/// unconstrained.
pub fn cylinder(a: &Dfa, target: &DigitAlphabet, placement: &[usize]) -> Result<Dfa, Error> {
    let src = a.alphabet();
    if placement.len() != src.arity() {
        return Err(Error::InvalidCoordinate(format!(
            "placement has {} entries for arity {}",
            placement.len(),
            src.arity()
        )));
    }
    for (i, &t) in placement.iter().enumerate() {
        if t >= target.arity() {
            return Err(Error::InvalidCoordinate(format!(
                "target coordinate {t} out of range for arity {}",
                target.arity()
            )));
        }
        if target.coord(t) != src.coord(i) {
            return Err(Error::AlphabetMismatch {
                left: format!("{:?}", src.coord(i)),
                right: format!("{:?}", target.coord(t)),
            });
        }
    }
    let source_of: Vec<usize> = (0..target.len())
        .map(|s| {
            let digits: Vec<i8> = placement.iter().map(|&t| target.digit(s, t)).collect();
            src.index_of(&digits).expect("digits agree")
        })
        .collect();
    Dfa::from_fn(
        target.clone(),
        a.num_states(),
        a.initial(),
        |q, s| a.next(q, source_of[s]),
        |q| a.is_accepting(q),
    )
}

/// Convenience form of [`cylinder`] for a one-track automaton: places it at
/// coordinate `at` of a `target_arity`-track alphabet whose other
/// coordinates take `other_coords` in order.
pub fn cylinder_at(
    a: &Dfa,
    target_arity: usize,
    at: usize,
    other_coords: &[Vec<i8>],
) -> Result<Dfa, Error> {
    if a.alphabet().arity() != 1 || at >= target_arity || other_coords.len() + 1 != target_arity
    {
        return Err(Error::InvalidCoordinate(format!(
            "cannot place a {}-track automaton at {at} of arity {target_arity}",
            a.alphabet().arity()
        )));
    }
    let mut coords = other_coords.to_vec();
    coords.insert(at, a.alphabet().coord(0).to_vec());
    let target = DigitAlphabet::new(coords)?;
    cylinder(a, &target, &[at])
}

/// Closes the language under adding and removing leading padding symbols:
/// the result accepts `u` iff `a` accepts some word that equals `u` once
/// leading padding is stripped from both.
pub fn pad_normalize(a: &Dfa) -> Dfa {
    let pad = a.alphabet().padding();
    let k = a.alphabet().len();
    // states reachable from the initial state on padding alone
    let mut zero_reach = vec![a.initial()];
    loop {
        let q = a.next(*zero_reach.last().unwrap(), pad);
        if zero_reach.contains(&q) {
            break;
        }
        zero_reach.push(q);
    }
    let mut n = Nfa::from_dfa(a);
    let start = n.add_state(zero_reach.iter().any(|&z| a.is_accepting(z)));
    n.add_transition(start, pad, start);
    for s in (0..k).filter(|&s| s != pad) {
        for &z in &zero_reach {
            n.add_transition(start, s, a.next(z, s));
        }
    }
    n.set_initial(&[start]);
    n.determinize().minimize()
}

/// `∃` over the dropped coordinates: projection, subset construction,
/// pad-closure and minimization.
pub fn exists(a: &Dfa, keep: &[usize]) -> Result<Dfa, Error> {
    Ok(pad_normalize(&project(a, keep)?.determinize()))
}

/// Shortest word accepted by exactly one of `a`, `b` after pad-closure.
pub fn counterexample(a: &Dfa, b: &Dfa) -> Result<Option<Word>, Error> {
    let x = combine(BoolOp::Xor, &pad_normalize(a), &pad_normalize(b))?;
    Ok(x.shortest_word())
}

/// Language equality modulo leading padding.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool, Error> {
    Ok(counterexample(a, b)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dfa::encode_digits;

    fn no_factor(bad: usize) -> Dfa {
        // binary words without `bad bad`
        Dfa::from_fn(
            DigitAlphabet::binary(),
            3,
            0,
            move |q, a| match q {
                0 if a == bad => 1,
                0 => 0,
                1 if a == bad => 2,
                1 => 0,
                _ => 2,
            },
            |q| q < 2,
        )
        .unwrap()
    }

    fn word(s: &str) -> Word {
        s.bytes().map(|b| (b - b'0') as usize).collect()
    }

    #[test]
    fn and_of_no11_and_no00() {
        let both = combine(BoolOp::And, &no_factor(1), &no_factor(0)).unwrap();
        assert!(both.accepts(&word("101")));
        assert!(!both.accepts(&word("1001")));
        assert!(!both.accepts(&word("110011")));
    }

    #[test]
    fn no11_vs_no00_counterexample_is_11() {
        let w = counterexample(&no_factor(1), &no_factor(0)).unwrap().unwrap();
        assert_eq!(w, word("11"));
        let a = no_factor(1);
        assert!(equivalent(&a, &a).unwrap());
    }

    #[test]
    fn diff_from_universal_is_complement() {
        let a = no_factor(1);
        let u = Dfa::universal(DigitAlphabet::binary());
        let c = combine(BoolOp::Diff, &u, &a).unwrap();
        for len in 0..=8 {
            for bits in 0..(1u32 << len) {
                let w: Word = (0..len).map(|i| ((bits >> i) & 1) as usize).collect();
                assert_eq!(c.accepts(&w), !a.accepts(&w));
            }
        }
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let s = Dfa::universal(DigitAlphabet::signed());
        assert!(matches!(
            combine(BoolOp::And, &s, &no_factor(1)),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn pad_normalize_single_word() {
        // {100}
        let mut n = Nfa::new(DigitAlphabet::binary());
        let states: Vec<u32> = (0..4).map(|i| n.add_state(i == 3)).collect();
        n.add_initial(states[0]);
        n.add_transition(states[0], 1, states[1]);
        n.add_transition(states[1], 0, states[2]);
        n.add_transition(states[2], 0, states[3]);
        let p = pad_normalize(&n.determinize());
        let alpha = DigitAlphabet::binary();
        for w in ["100", "0100", "000100"] {
            assert!(p.accepts(&encode_digits(&alpha, &bytes(w)).unwrap()));
        }
        for w in ["", "10", "1000", "0"] {
            assert!(!p.accepts(&encode_digits(&alpha, &bytes(w)).unwrap()));
        }
        assert_eq!(pad_normalize(&p), p);
    }

    #[test]
    fn pad_normalize_epsilon_gives_zero_star() {
        let p = pad_normalize(&Dfa::epsilon(DigitAlphabet::binary()));
        assert!(p.accepts(&[]));
        assert!(p.accepts(&[0, 0, 0]));
        assert!(!p.accepts(&[1]));
        assert_eq!(p.trimmed_state_count(), 1);
    }

    fn bytes(s: &str) -> Vec<i8> {
        s.bytes().map(|b| (b - b'0') as i8).collect()
    }

    #[test]
    fn project_diagonal_is_universal() {
        let pair = DigitAlphabet::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let diag = Dfa::from_fn(
            pair.clone(),
            2,
            0,
            |q, s| {
                if q == 0 && pair.digit(s, 0) == pair.digit(s, 1) {
                    0
                } else {
                    1
                }
            },
            |q| q == 0,
        )
        .unwrap();
        let p = exists(&diag, &[0]).unwrap();
        assert!(equivalent(&p, &Dfa::universal(DigitAlphabet::binary())).unwrap());
        let e = exists(&Dfa::empty(pair), &[1]).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn cylinder_then_project_is_identity() {
        let a = no_factor(1);
        let lifted = cylinder_at(&a, 3, 1, &[vec![-1, 0, 1], vec![0, 1]]).unwrap();
        assert_eq!(lifted.alphabet().arity(), 3);
        let back = exists(&lifted, &[1]).unwrap();
        assert!(equivalent(&back, &a).unwrap());
        let u = cylinder_at(
            &Dfa::universal(DigitAlphabet::binary()),
            2,
            0,
            &[vec![0, 1]],
        )
        .unwrap();
        assert_eq!(u.minimize().num_states(), 1);
        assert!(u.minimize().is_accepting(0));
    }

    #[test]
    fn invalid_coordinates_are_rejected() {
        let a = no_factor(1);
        assert!(project(&a, &[0]).is_err());
        let pair = DigitAlphabet::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(cylinder(&a, &pair, &[2]).is_err());
        assert!(cylinder_at(&a, 2, 2, &[vec![0, 1]]).is_err());
    }
}
