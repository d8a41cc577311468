//! Word pairs and their hex text form, e.g. `(0x22,0x8)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A `(left, right)` pair of branch words: a difference, a mask or a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pair {
    pub left: u64,
    pub right: u64,
}

impl Pair {
    pub const ZERO: Pair = Pair { left: 0, right: 0 };

    pub const fn new(left: u64, right: u64) -> Self {
        Pair { left, right }
    }

    pub fn is_zero(&self) -> bool {
        self.left == 0 && self.right == 0
    }

    pub fn hamming(&self) -> u32 {
        self.left.count_ones() + self.right.count_ones()
    }

    /// Parity of the inner product with `other`.
    pub fn dot(&self, other: &Pair) -> u32 {
        ((self.left & other.left).count_ones() + (self.right & other.right).count_ones()) & 1
    }
}

impl From<(u64, u64)> for Pair {
    fn from((left, right): (u64, u64)) -> Self {
        Pair { left, right }
    }
}

impl From<Pair> for (u64, u64) {
    fn from(p: Pair) -> Self {
        (p.left, p.right)
    }
}

pub fn fmt_hex(x: u64) -> String {
    format!("{x:#x}")
}

pub fn parse_hex(s: &str) -> Result<u64> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(digits, 16).map_err(|_| Error::Parse(format!("bad hex word `{s}`")))
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:#x},{:#x})", self.left, self.right)
    }
}

impl FromStr for Pair {
    type Err = Error;

    /// Accepts `(0x22,0x8)`, `0x22,0x8` and whitespace variants.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let (l, r) = t.split_once(',').ok_or_else(|| Error::Parse(format!("expected a word pair, got `{s}`")))?;
        Ok(Pair { left: parse_hex(l)?, right: parse_hex(r)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_form_matches_tables() {
        assert_eq!(Pair::new(0x2200, 0x800).to_string(), "(0x2200,0x800)");
        assert_eq!(Pair::new(0, 0x100).to_string(), "(0x0,0x100)");
        assert_eq!("(0x22, 0x8)".parse::<Pair>().unwrap(), Pair::new(0x22, 0x8));
        assert_eq!("0x800a,4".parse::<Pair>().unwrap(), Pair::new(0x800a, 4));
        assert!("0x12".parse::<Pair>().is_err());
        assert!("(0xzz,0x1)".parse::<Pair>().is_err());
    }

    #[test]
    fn dot_parity() {
        assert_eq!(Pair::new(0b11, 1).dot(&Pair::new(0b01, 1)), 0);
        assert_eq!(Pair::new(0b11, 1).dot(&Pair::new(0b01, 0)), 1);
    }
}
