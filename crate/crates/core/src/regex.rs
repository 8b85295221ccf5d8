//! Regular expressions over digit alphabets.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! alt     := concat ('|' concat)*
//! concat  := postfix*                 -- empty concat is ε, so "()" is ε
//! postfix := atom ('*' | '+' | '?')*
//! atom    := '(' alt ')' | '.' | DIGIT | '[' INT (',' INT)* ']'
//! ```
//!
//! A bare `DIGIT` is `0`..`9` on a one-track alphabet. Brackets hold either a
//! single (possibly negative) digit, e.g. `[-1]`, or one digit per track, e.g.
//! `[1,0]`. `.` is any symbol of the alphabet.

use std::fmt;

use thiserror::Error;

use crate::automata::{DigitAlphabet, Dfa, Nfa};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("regex error at position {position}: {kind}")]
pub struct RegexError {
    pub position: usize,
    pub kind: RegexErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexErrorKind {
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unbalanced parenthesis")]
    Unbalanced,
    #[error("malformed bracket literal")]
    BadBracket,
    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("literal has {found} digits but the alphabet has arity {arity}")]
    Arity { found: usize, arity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegexAst {
    Epsilon,
    Digit(i8),
    /// `[d]` or `[d1,...,dk]`
    Bracket(Vec<i8>),
    Any,
    Concat(Vec<RegexAst>),
    Alt(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
    Group(Box<RegexAst>),
}

impl fmt::Display for RegexAst {
    /// S-expression form, used for parse-tree golden tests.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexAst::Epsilon => write!(f, "eps"),
            RegexAst::Digit(d) => write!(f, "{d}"),
            RegexAst::Bracket(ds) => {
                let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
            RegexAst::Any => write!(f, "."),
            RegexAst::Concat(xs) | RegexAst::Alt(xs) => {
                let op = if matches!(self, RegexAst::Concat(_)) { "cat" } else { "alt" };
                write!(f, "({op}")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                write!(f, ")")
            }
            RegexAst::Star(x) => write!(f, "(* {x})"),
            RegexAst::Plus(x) => write!(f, "(+ {x})"),
            RegexAst::Optional(x) => write!(f, "(? {x})"),
            RegexAst::Group(x) => write!(f, "(grp {x})"),
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    alphabet: Option<&'a DigitAlphabet>,
    len: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: Option<&'a DigitAlphabet>) -> Self {
        Parser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            alphabet,
            len: text.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.len)
    }

    fn err(&self, kind: RegexErrorKind) -> RegexError {
        RegexError {
            position: self.offset(),
            kind,
        }
    }

    fn parse_alt(&mut self) -> Result<RegexAst, RegexError> {
        let mut branches = vec![self.parse_concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.parse_concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            RegexAst::Alt(branches)
        })
    }

    fn parse_concat(&mut self) -> Result<RegexAst, RegexError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.parse_postfix()?);
        }
        Ok(match items.len() {
            0 => RegexAst::Epsilon,
            1 => items.pop().unwrap(),
            _ => RegexAst::Concat(items),
        })
    }

    fn parse_postfix(&mut self) -> Result<RegexAst, RegexError> {
        let mut atom = self.parse_atom()?;
        while let Some(c) = self.peek() {
            atom = match c {
                '*' => RegexAst::Star(Box::new(atom)),
                '+' => RegexAst::Plus(Box::new(atom)),
                '?' => RegexAst::Optional(Box::new(atom)),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(atom)
    }

    fn check_literal(&self, digits: &[i8], at: usize) -> Result<(), RegexError> {
        let Some(alpha) = self.alphabet else {
            return Ok(());
        };
        if digits.len() != alpha.arity() {
            return Err(RegexError {
                position: at,
                kind: RegexErrorKind::Arity {
                    found: digits.len(),
                    arity: alpha.arity(),
                },
            });
        }
        if alpha.index_of(digits).is_none() {
            let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            return Err(RegexError {
                position: at,
                kind: RegexErrorKind::UnknownSymbol(format!("[{}]", parts.join(","))),
            });
        }
        Ok(())
    }

    fn parse_atom(&mut self) -> Result<RegexAst, RegexError> {
        let at = self.offset();
        match self.peek() {
            None => Err(self.err(RegexErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_alt()?;
                if self.peek() != Some(')') {
                    return Err(self.err(RegexErrorKind::Unbalanced));
                }
                self.pos += 1;
                Ok(RegexAst::Group(Box::new(inner)))
            }
            Some('.') => {
                self.pos += 1;
                Ok(RegexAst::Any)
            }
            Some('[') => {
                self.pos += 1;
                let mut digits = Vec::new();
                let mut cur = String::new();
                loop {
                    match self.peek() {
                        None => return Err(self.err(RegexErrorKind::BadBracket)),
                        Some(c @ ('-' | '0'..='9')) => {
                            cur.push(c);
                            self.pos += 1;
                        }
                        Some(c @ (',' | ']')) => {
                            let d: i8 = cur.parse().map_err(|_| self.err(RegexErrorKind::BadBracket))?;
                            digits.push(d);
                            cur.clear();
                            self.pos += 1;
                            if c == ']' {
                                break;
                            }
                        }
                        Some(c) => return Err(self.err(RegexErrorKind::Unexpected(c))),
                    }
                }
                self.check_literal(&digits, at)?;
                Ok(RegexAst::Bracket(digits))
            }
            Some(c @ '0'..='9') => {
                self.pos += 1;
                let d = c as i8 - b'0' as i8;
                self.check_literal(&[d], at)?;
                Ok(RegexAst::Digit(d))
            }
            Some(')') => Err(self.err(RegexErrorKind::Unbalanced)),
            Some(c) => Err(self.err(RegexErrorKind::Unexpected(c))),
        }
    }
}

/// Syntax-only parse.
pub fn parse(text: &str) -> Result<RegexAst, RegexError> {
    parse_with(text, None)
}

fn parse_with(text: &str, alphabet: Option<&DigitAlphabet>) -> Result<RegexAst, RegexError> {
    let mut p = Parser::new(text, alphabet);
    let ast = p.parse_alt()?;
    if p.peek().is_some() {
        return Err(p.err(RegexErrorKind::Unbalanced));
    }
    Ok(ast)
}

/// Symbol indices a literal stands for.
fn literal_symbols(ast: &RegexAst, alphabet: &DigitAlphabet) -> Vec<usize> {
    match ast {
        RegexAst::Digit(d) => alphabet.index_of(&[*d]).into_iter().collect(),
        RegexAst::Bracket(ds) => alphabet.index_of(ds).into_iter().collect(),
        RegexAst::Any => (0..alphabet.len()).collect(),
        _ => Vec::new(),
    }
}

/// Thompson construction.
fn build(ast: &RegexAst, alphabet: &DigitAlphabet, n: &mut Nfa) -> (u32, u32) {
    match ast {
        RegexAst::Epsilon => {
            let s = n.add_state(false);
            let t = n.add_state(false);
            n.add_epsilon(s, t);
            (s, t)
        }
        RegexAst::Digit(_) | RegexAst::Bracket(_) | RegexAst::Any => {
            let s = n.add_state(false);
            let t = n.add_state(false);
            for a in literal_symbols(ast, alphabet) {
                n.add_transition(s, a, t);
            }
            (s, t)
        }
        RegexAst::Group(x) => build(x, alphabet, n),
        RegexAst::Concat(xs) => {
            let mut frag: Option<(u32, u32)> = None;
            for x in xs {
                let (s, t) = build(x, alphabet, n);
                frag = Some(match frag {
                    None => (s, t),
                    Some((s0, t0)) => {
                        n.add_epsilon(t0, s);
                        (s0, t)
                    }
                });
            }
            frag.unwrap_or_else(|| build(&RegexAst::Epsilon, alphabet, n))
        }
        RegexAst::Alt(xs) => {
            let s = n.add_state(false);
            let t = n.add_state(false);
            for x in xs {
                let (a, b) = build(x, alphabet, n);
                n.add_epsilon(s, a);
                n.add_epsilon(b, t);
            }
            (s, t)
        }
        RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => {
            let s = n.add_state(false);
            let t = n.add_state(false);
            let (a, b) = build(x, alphabet, n);
            n.add_epsilon(s, a);
            n.add_epsilon(b, t);
            if !matches!(ast, RegexAst::Plus(_)) {
                n.add_epsilon(s, t);
            }
            if !matches!(ast, RegexAst::Optional(_)) {
                n.add_epsilon(b, a);
            }
            (s, t)
        }
    }
}

/// Compiles an already-validated tree.
pub fn compile(ast: &RegexAst, alphabet: &DigitAlphabet) -> Nfa {
    let mut n = Nfa::new(alphabet.clone());
    let (s, t) = build(ast, alphabet, &mut n);
    n.add_initial(s);
    n.set_accepting(t, true);
    n
}

pub fn parse_compile(text: &str, alphabet: &DigitAlphabet) -> Result<Nfa, RegexError> {
    let ast = parse_with(text, Some(alphabet))?;
    Ok(compile(&ast, alphabet))
}

/// Minimal DFA for a regex.
pub fn regex_dfa(text: &str, alphabet: &DigitAlphabet) -> Result<Dfa, RegexError> {
    Ok(parse_compile(text, alphabet)?.determinize().minimize())
}
