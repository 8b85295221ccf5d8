//! Line-oriented text format and Graphviz export.
//!
//! ```text
//! alphabet: -1,0,1;0,1
//! initial: 0
//! accepting: 0 2
//! 0 [1,0] -> 1
//! 1 [0,1] -> 0
//! ```
//!
//! Coordinates are separated by `;`. Transitions missing from the file go
//! to a dead state that is added on load. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::alphabet::DigitAlphabet;
use super::dfa::Dfa;
use crate::error::Error;

pub fn to_text(d: &Dfa) -> String {
    let a = d.alphabet();
    let mut out = String::new();
    let _ = writeln!(out, "alphabet: {a}");
    let _ = writeln!(out, "initial: {}", d.initial());
    let acc: Vec<String> = (0..d.num_states() as u32)
        .filter(|&q| d.is_accepting(q))
        .map(|q| q.to_string())
        .collect();
    let _ = writeln!(out, "accepting: {}", acc.join(" "));
    for q in 0..d.num_states() as u32 {
        for s in 0..a.len() {
            let _ = writeln!(out, "{q} {} -> {}", a.symbol(s), d.next(q, s));
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn from_text(text: &str) -> Result<Dfa, Error> {
    let mut alphabet: Option<DigitAlphabet> = None;
    let mut initial: Option<u32> = None;
    let mut accepting: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, usize, u32, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            alphabet = Some(DigitAlphabet::parse(rest).map_err(|e| parse_err(lineno, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad initial state"))?,
            );
        } else if let Some(rest) = line.strip_prefix("accepting:") {
            for tok in rest.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                accepting.push(tok.parse().map_err(|_| parse_err(lineno, "bad accepting state"))?);
            }
        } else {
            let alpha = alphabet
                .as_ref()
                .ok_or_else(|| parse_err(lineno, "transition before alphabet header"))?;
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| parse_err(lineno, "expected `from <symbol> -> to`"))?;
            let lhs = lhs.trim();
            let (from, sym) = lhs
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(lineno, "expected `from <symbol> -> to`"))?;
            let from: u32 = from.parse().map_err(|_| parse_err(lineno, "bad source state"))?;
            let to: u32 = rhs
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, "bad target state"))?;
            let s = alpha
                .parse_symbol(sym)
                .map_err(|e| parse_err(lineno, e.to_string()))?;
            edges.push((from, s, to, lineno));
        }
    }
    let alphabet = alphabet.ok_or_else(|| parse_err(0, "missing alphabet header"))?;
    let initial = initial.ok_or_else(|| parse_err(0, "missing initial state"))?;
    let max_id = edges
        .iter()
        .flat_map(|&(f, _, t, _)| [f, t])
        .chain(accepting.iter().copied())
        .chain(std::iter::once(initial))
        .max()
        .unwrap_or(0);
    let n = max_id as usize + 1;
    let k = alphabet.len();
    let dead = n as u32;
    let mut delta = vec![dead; (n + 1) * k];
    let mut set = vec![false; n * k];
    for (f, s, t, lineno) in edges {
        let slot = f as usize * k + s;
        if set[slot] && delta[slot] != t {
            return Err(parse_err(lineno, format!("state {f} has two transitions on one symbol")));
        }
        set[slot] = true;
        delta[slot] = t;
    }
    let mut acc = vec![false; n + 1];
    for q in accepting {
        acc[q as usize] = true;
    }
    Ok(Dfa::new(alphabet, delta, acc, initial)?.canonical())
}

/// Graphviz rendering. With `trim`, dead and unreachable states are left
/// out, matching the usual drawings of partial automata.
pub fn to_dot(d: &Dfa, name: &str, trim: bool) -> String {
    let a = d.alphabet();
    let live = d.live_states();
    let order = d.bfs_order();
    let keep = |q: u32| !trim || live[q as usize];
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{name}\" {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    let _ = writeln!(out, "  __start [shape=point];");
    for &q in &order {
        if !keep(q) {
            continue;
        }
        let shape = if d.is_accepting(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [shape={shape}];");
    }
    if keep(d.initial()) {
        let _ = writeln!(out, "  __start -> {};", d.initial());
    }
    for &q in &order {
        if !keep(q) {
            continue;
        }
        let mut labels: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for s in 0..a.len() {
            let r = d.next(q, s);
            if keep(r) {
                let sym = a.symbol(s);
                let label = if sym.arity() == 1 {
                    sym.0[0].to_string()
                } else {
                    sym.to_string()
                };
                labels.entry(r).or_default().push(label);
            }
        }
        for (r, ls) in labels {
            let _ = writeln!(out, "  {q} -> {r} [label=\"{}\"];", ls.join(", "));
        }
    }
    out.push_str("}\n");
    out
}
