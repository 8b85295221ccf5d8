use std::fmt;

use crate::error::Error;

/// A tuple of digits, one per coordinate (track) of a [`DigitAlphabet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub Vec<i8>);

impl Symbol {
    pub fn digits(&self) -> &[i8] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Product of per-coordinate digit sets.
///
/// Symbols are numbered in lexicographic order of their digit tuples, with
/// coordinate 0 most significant and digits ascending within a coordinate.
/// Every coordinate contains `0`, so the all-zeros tuple (the padding
/// symbol) always exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitAlphabet {
    coords: Vec<Vec<i8>>,
    strides: Vec<usize>,
    size: usize,
}

impl DigitAlphabet {
    pub fn new(coords: Vec<Vec<i8>>) -> Result<Self, Error> {
        if coords.is_empty() {
            return Err(Error::InvalidAlphabet("arity must be at least 1".into()));
        }
        let mut normalized = Vec::with_capacity(coords.len());
        for (i, c) in coords.into_iter().enumerate() {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if !c.contains(&0) {
                return Err(Error::InvalidAlphabet(format!(
                    "coordinate {i} lacks the padding digit 0"
                )));
            }
            normalized.push(c);
        }
        let mut strides = vec![1; normalized.len()];
        for i in (0..normalized.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * normalized[i + 1].len();
        }
        let size = strides[0] * normalized[0].len();
        Ok(DigitAlphabet {
            coords: normalized,
            strides,
            size,
        })
    }

    pub fn unary(digits: &[i8]) -> Result<Self, Error> {
        Self::new(vec![digits.to_vec()])
    }

    /// `{0,1}`
    pub fn binary() -> Self {
        Self::new(vec![vec![0, 1]]).expect("valid alphabet")
    }

    /// `{-1,0,1}`
    pub fn signed() -> Self {
        Self::new(vec![vec![-1, 0, 1]]).expect("valid alphabet")
    }

    /// Parses `0,1` or `-1,0,1;0,1` (coordinates separated by `;`).
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut coords = Vec::new();
        for part in text.split(';') {
            let part = part.trim().trim_start_matches('{').trim_end_matches('}');
            let mut digits = Vec::new();
            for d in part.split(',') {
                let d = d.trim();
                let v: i8 = d
                    .parse()
                    .map_err(|_| Error::InvalidAlphabet(format!("bad digit {d:?}")))?;
                digits.push(v);
            }
            coords.push(digits);
        }
        Self::new(coords)
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> &[i8] {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Vec<i8>] {
        &self.coords
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn symbol(&self, index: usize) -> Symbol {
        Symbol(self.digits_of(index))
    }

    pub fn digits_of(&self, index: usize) -> Vec<i8> {
        let mut out = Vec::with_capacity(self.coords.len());
        for (c, s) in self.coords.iter().zip(&self.strides) {
            out.push(c[(index / s) % c.len()]);
        }
        out
    }

    /// Digit of coordinate `coord` within symbol `index`.
    pub fn digit(&self, index: usize, coord: usize) -> i8 {
        let c = &self.coords[coord];
        c[(index / self.strides[coord]) % c.len()]
    }

    pub fn index_of(&self, digits: &[i8]) -> Option<usize> {
        if digits.len() != self.coords.len() {
            return None;
        }
        let mut idx = 0;
        for ((d, c), s) in digits.iter().zip(&self.coords).zip(&self.strides) {
            idx += c.iter().position(|x| x == d)? * s;
        }
        Some(idx)
    }

    /// Index of the all-zeros symbol.
    pub fn padding(&self) -> usize {
        self.index_of(&vec![0; self.arity()]).expect("padding symbol exists")
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.size).map(|i| self.symbol(i))
    }

    /// Alphabet made of the listed coordinates, in the given order.
    pub fn select(&self, keep: &[usize]) -> Result<Self, Error> {
        if keep.is_empty() {
            return Err(Error::InvalidCoordinate(
                "must keep at least one coordinate".into(),
            ));
        }
        let mut coords = Vec::with_capacity(keep.len());
        for &k in keep {
            let c = self.coords.get(k).ok_or_else(|| {
                Error::InvalidCoordinate(format!("coordinate {k} out of range"))
            })?;
            coords.push(c.clone());
        }
        Self::new(coords)
    }

    /// Coordinates of `self` followed by those of `other`.
    pub fn product(&self, other: &DigitAlphabet) -> Self {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        Self::new(coords).expect("product of valid alphabets")
    }

    /// Parses a symbol written as a bare digit (arity 1) or `[a,b,...]`.
    pub fn parse_symbol(&self, text: &str) -> Result<usize, Error> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .unwrap_or(t);
        let digits = inner
            .split(',')
            .map(|d| d.trim().parse::<i8>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidAlphabet(format!("bad symbol {t:?}")))?;
        self.index_of(&digits)
            .ok_or_else(|| Error::InvalidAlphabet(format!("symbol {t} not in alphabet")))
    }
}

impl fmt::Display for DigitAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            let parts: Vec<String> = c.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}
