//! Words over the alphabet {x, y} and monomial orders.
//!
//! A [`Word`] is packed into a `u64`: the first letter sits in the most
//! significant used bit, `x` is 0 and `y` is 1. Degree is stored separately so
//! equality and hashing are degree-aware.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const MAX_DEGREE: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    X,
    Y,
}

impl Variable {
    pub const ALL: [Variable; 2] = [Variable::X, Variable::Y];

    #[inline]
    fn bit(self) -> u64 {
        match self {
            Variable::X => 0,
            Variable::Y => 1,
        }
    }

    #[inline]
    fn from_bit(b: u64) -> Self {
        if b & 1 == 0 {
            Variable::X
        } else {
            Variable::Y
        }
    }

    pub fn other(self) -> Self {
        match self {
            Variable::X => Variable::Y,
            Variable::Y => Variable::X,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Variable::X => 'x',
            Variable::Y => 'y',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(v: Variable) -> Self {
        Word { len: 1, bits: v.bit() }
    }

    /// Word of length `len` whose letters are the low `len` bits (y = 1).
    pub fn from_bits(bits: u64, len: u32) -> Self {
        assert!(len <= MAX_DEGREE, "word too long");
        let mask = if len == 0 { 0 } else { u64::MAX >> (64 - len) };
        Word { len, bits: bits & mask }
    }

    pub fn from_letters(letters: &[Variable]) -> Self {
        assert!(letters.len() as u32 <= MAX_DEGREE, "word too long");
        let bits = letters.iter().fold(0u64, |acc, v| (acc << 1) | v.bit());
        Word { len: letters.len() as u32, bits }
    }

    /// Parses a plain string of `x`/`y` letters (no exponents).
    pub fn parse(s: &str) -> Option<Self> {
        let letters: Option<Vec<Variable>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'x' => Some(Variable::X),
                'y' => Some(Variable::Y),
                _ => None,
            })
            .collect();
        letters.map(|l| Word::from_letters(&l))
    }

    pub fn power(v: Variable, n: u32) -> Self {
        Word::from_letters(&vec![v; n as usize])
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn at(&self, i: u32) -> Variable {
        debug_assert!(i < self.len);
        Variable::from_bit(self.bits >> (self.len - 1 - i))
    }

    pub fn letters(&self) -> impl Iterator<Item = Variable> + '_ {
        (0..self.len).map(move |i| self.at(i))
    }

    pub fn count(&self, v: Variable) -> u32 {
        let ones = self.bits.count_ones();
        match v {
            Variable::Y => ones,
            Variable::X => self.len - ones,
        }
    }

    #[inline]
    pub fn concat(&self, other: &Word) -> Word {
        assert!(self.len + other.len <= MAX_DEGREE, "word too long");
        Word { len: self.len + other.len, bits: (self.bits << other.len) | other.bits }
    }

    /// Factor `[start, start+len)`.
    #[inline]
    pub fn sub(&self, start: u32, len: u32) -> Word {
        debug_assert!(start + len <= self.len);
        let shift = self.len - start - len;
        let mask = if len == 0 { 0 } else { u64::MAX >> (64 - len) };
        Word { len, bits: (self.bits >> shift) & mask }
    }

    pub fn prefix(&self, len: u32) -> Word {
        self.sub(0, len)
    }

    pub fn suffix(&self, len: u32) -> Word {
        self.sub(self.len - len, len)
    }

    /// Drops the first letter if it equals `v`.
    pub fn strip_first(&self, v: Variable) -> Option<Word> {
        if self.len > 0 && self.at(0) == v {
            Some(self.suffix(self.len - 1))
        } else {
            None
        }
    }

    /// Rotation starting at position `k`: `w[k..] w[..k]`.
    pub fn rotate(&self, k: u32) -> Word {
        if self.len == 0 {
            return *self;
        }
        let k = k % self.len;
        self.suffix(self.len - k).concat(&self.prefix(k))
    }

    /// Canonical representative of the rotation class (minimal packed value).
    pub fn necklace(&self) -> Word {
        (0..self.len.max(1)).map(|k| self.rotate(k)).min().unwrap_or(*self)
    }

    pub fn swap_letters(&self) -> Word {
        let mask = if self.len == 0 { 0 } else { u64::MAX >> (64 - self.len) };
        Word { len: self.len, bits: !self.bits & mask }
    }

    /// Leftmost occurrence of `pat` as a factor at or after `from`.
    pub fn find(&self, pat: &Word, from: u32) -> Option<u32> {
        if pat.len > self.len {
            return None;
        }
        (from..=self.len - pat.len).find(|&i| self.sub(i, pat.len) == *pat)
    }

    pub fn contains(&self, pat: &Word) -> bool {
        self.find(pat, 0).is_some()
    }

    /// All words of a given degree, in increasing packed order.
    pub fn all_of_degree(d: u32) -> impl Iterator<Item = Word> {
        assert!(d <= 30, "enumeration degree too large");
        (0..(1u64 << d)).map(move |bits| Word { len: d, bits })
    }

    pub fn all_up_to(d: u32) -> impl Iterator<Item = Word> {
        (0..=d).flat_map(Word::all_of_degree)
    }
}

impl fmt::Display for Word {
    /// Compact exponent form, e.g. `x^2 y x`; the empty word renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.len {
            let v = self.at(i);
            let mut run = 1;
            while i + run < self.len && self.at(i + run) == v {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{}", v.symbol())?;
            } else {
                write!(f, "{}^{}", v.symbol(), run)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "1");
        }
        for v in self.letters() {
            write!(f, "{}", v.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self:?}"))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "1" {
            return Ok(Word::EMPTY);
        }
        Word::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad word {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    /// Lower degree is more significant (power-series / standard-basis convention).
    Local,
    /// Higher degree is more significant (ordinary deglex).
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    /// The lex-greater variable.
    pub greater: Variable,
    pub mode: OrderMode,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder { greater: Variable::X, mode: OrderMode::Local }
    }
}

impl MonomialOrder {
    pub fn local(greater: Variable) -> Self {
        MonomialOrder { greater, mode: OrderMode::Local }
    }

    pub fn global(greater: Variable) -> Self {
        MonomialOrder { greater, mode: OrderMode::Global }
    }

    /// Left-to-right lex comparison of equal-length words under the precedence.
    #[inline]
    pub fn lex(&self, u: &Word, v: &Word) -> Ordering {
        debug_assert_eq!(u.len, v.len);
        // packed order has y > x; flip when x is the greater letter
        match self.greater {
            Variable::Y => u.bits.cmp(&v.bits),
            Variable::X => v.bits.cmp(&u.bits),
        }
    }

    /// Degree first, then lex by precedence.
    pub fn compare(&self, u: &Word, v: &Word) -> Ordering {
        u.len.cmp(&v.len).then_with(|| self.lex(u, v))
    }

    /// Significance used to pick leading words: `Greater` means `u` is the
    /// more significant of the two. In local mode lower degree wins.
    #[inline]
    pub fn significance(&self, u: &Word, v: &Word) -> Ordering {
        match self.mode {
            OrderMode::Global => self.compare(u, v),
            OrderMode::Local => v.len.cmp(&u.len).then_with(|| self.lex(u, v)),
        }
    }
}

/// Degree-first word comparison under the order's precedence.
pub fn compare_words(u: &Word, v: &Word, order: &MonomialOrder) -> Ordering {
    order.compare(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn compare_examples() {
        let o = MonomialOrder::default();
        assert_eq!(compare_words(&w("xy"), &w("yx"), &o), Ordering::Greater);
        assert_eq!(compare_words(&w("x"), &w("yy"), &o), Ordering::Less);
        let oy = MonomialOrder::local(Variable::Y);
        assert_eq!(compare_words(&w("x"), &w("yy"), &oy), Ordering::Less);
        assert_eq!(compare_words(&w("xyx"), &w("xyx"), &o), Ordering::Equal);
        assert_eq!(compare_words(&w("xy"), &w("yx"), &oy), Ordering::Less);
    }

    #[test]
    fn packing() {
        let u = w("xxyxy");
        assert_eq!(format!("{u}"), "x^2 y x y");
        assert_eq!(format!("{u:?}"), "xxyxy");
        assert_eq!(u.sub(1, 3), w("xyx"));
        assert_eq!(u.rotate(2), w("yxyxx"));
        assert_eq!(u.find(&w("xy"), 0), Some(1));
        assert_eq!(u.find(&w("xy"), 2), Some(3));
        assert_eq!(u.count(Variable::X), 3);
        assert_eq!(w("xy").concat(&w("y")), w("xyy"));
        assert_eq!(w("yxx").necklace(), w("xxy"));
        assert_eq!(w("xyy").swap_letters(), w("yxx"));
        assert_eq!(Word::EMPTY.concat(&w("x")), w("x"));
        assert_eq!(Word::all_of_degree(3).count(), 8);
    }

    #[test]
    fn empty_and_zero_bits_differ_by_degree() {
        assert_ne!(Word::EMPTY, w("x"));
        assert_ne!(w("x"), w("xx"));
    }
}
