//! Simon and Simeck block ciphers, parameterized by branch width.
//!
//! Words are carried in a `u64` and masked to the branch width after every
//! operation. Bit `i` is the coefficient of `2^i`; a left rotation by `t`
//! moves bit `i` to bit `(i + t) mod n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Simon,
    Simeck,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Simon => f.write_str("simon"),
            Variant::Simeck => f.write_str("simeck"),
        }
    }
}

/// Parameters of one member of the Simon-like family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CipherSpec {
    pub variant: Variant,
    /// Branch width `n`; the block is `2n` bits.
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    /// Number of master-key words `m` (key size is `m * n`).
    pub key_words: u32,
    pub total_rounds: u32,
}

impl CipherSpec {
    pub fn simon(n: u32, key_words: u32) -> Result<Self> {
        let total_rounds = match (n, key_words) {
            (16, 4) => 32,
            (24, 3) => 36,
            (24, 4) => 36,
            (32, 3) => 42,
            (32, 4) => 44,
            (48, 2) => 52,
            (48, 3) => 54,
            (64, 2) => 68,
            (64, 3) => 69,
            (64, 4) => 72,
            _ => {
                return Err(Error::Config(format!(
                    "no Simon{}/{} variant",
                    2 * n,
                    n * key_words
                )))
            }
        };
        Ok(CipherSpec { variant: Variant::Simon, n, a: 8, b: 1, c: 2, key_words, total_rounds })
    }

    pub fn simeck(n: u32) -> Result<Self> {
        let total_rounds = match n {
            16 => 32,
            24 => 36,
            32 => 44,
            _ => return Err(Error::Config(format!("no Simeck{} variant", 2 * n))),
        };
        Ok(CipherSpec { variant: Variant::Simeck, n, a: 5, b: 0, c: 1, key_words: 4, total_rounds })
    }

    pub fn simon32() -> Self {
        Self::simon(16, 4).unwrap()
    }

    pub fn simon48() -> Self {
        Self::simon(24, 4).unwrap()
    }

    pub fn simon64() -> Self {
        Self::simon(32, 4).unwrap()
    }

    pub fn simon96() -> Self {
        Self::simon(48, 3).unwrap()
    }

    pub fn simon128() -> Self {
        Self::simon(64, 4).unwrap()
    }

    pub fn simeck32() -> Self {
        Self::simeck(16).unwrap()
    }

    pub fn simeck48() -> Self {
        Self::simeck(24).unwrap()
    }

    pub fn simeck64() -> Self {
        Self::simeck(32).unwrap()
    }

    /// Short name such as `simon32` or `simeck48` (block size in bits).
    pub fn name(&self) -> String {
        format!("{}{}", self.variant, 2 * self.n)
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    #[inline]
    pub fn ones(&self) -> u64 {
        self.mask()
    }

    /// Circular shift: left for `t >= 0`, right for `t < 0`.
    #[inline]
    pub fn rot(&self, x: u64, t: i32) -> u64 {
        let n = self.n as i32;
        let t = t.rem_euclid(n) as u32;
        if t == 0 {
            return x;
        }
        ((x << t) | (x >> (self.n - t))) & self.mask()
    }

    /// `S^a(x) & S^b(x) ^ S^c(x)`.
    #[inline]
    pub fn round_fn(&self, x: u64) -> u64 {
        (self.rot(x, self.a as i32) & self.rot(x, self.b as i32)) ^ self.rot(x, self.c as i32)
    }

    /// One Feistel round on `(left, right)`.
    #[inline]
    pub fn round(&self, (x, y): (u64, u64), k: u64) -> (u64, u64) {
        (self.round_fn(x) ^ y ^ k, x)
    }

    /// Encrypt `rounds` rounds with the first `rounds` keys of `round_keys`.
    pub fn encrypt(&self, pt: (u64, u64), round_keys: &[u64], rounds: usize) -> Result<(u64, u64)> {
        if rounds > round_keys.len() {
            return Err(Error::Config(format!(
                "{} rounds requested but only {} round keys available",
                rounds,
                round_keys.len()
            )));
        }
        Ok(self.encrypt_unchecked(pt, &round_keys[..rounds]))
    }

    /// Encrypt with every key in `round_keys`.
    #[inline]
    pub fn encrypt_unchecked(&self, mut state: (u64, u64), round_keys: &[u64]) -> (u64, u64) {
        for &k in round_keys {
            state = self.round(state, k);
        }
        state
    }

    /// Theorem preconditions for the exact differential and linear formulas.
    pub fn validate(&self) -> Result<()> {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        if !self.n.is_multiple_of(2) || self.n == 0 || self.n > 64 {
            return Err(Error::Config(format!("branch width {} must be even and at most 64", self.n)));
        }
        if self.a <= self.b {
            return Err(Error::Config("rotation offsets require a > b".into()));
        }
        if gcd(self.n, self.a - self.b) != 1 {
            return Err(Error::Config("rotation offsets require gcd(n, a - b) = 1".into()));
        }
        Ok(())
    }
}

impl FromStr for CipherSpec {
    type Err = Error;

    /// Accepts `simon32`, `simon48`, ..., `simeck64`, and the explicit
    /// `simon48/72` form with a key size.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (family, rest) = if let Some(r) = lower.strip_prefix("simeck") {
            (Variant::Simeck, r)
        } else if let Some(r) = lower.strip_prefix("simon") {
            (Variant::Simon, r)
        } else {
            return Err(Error::Parse(format!("unknown cipher `{s}`")));
        };
        let (block, key) = match rest.split_once('/') {
            Some((b, k)) => (b, Some(k)),
            None => (rest, None),
        };
        let block: u32 = block.parse().map_err(|_| Error::Parse(format!("bad block size in `{s}`")))?;
        let n = block / 2;
        match family {
            Variant::Simeck => {
                if let Some(k) = key {
                    if k.parse::<u32>().ok() != Some(4 * n) {
                        return Err(Error::Parse(format!("unsupported key size in `{s}`")));
                    }
                }
                CipherSpec::simeck(n)
            }
            Variant::Simon => match key {
                Some(k) => {
                    let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad key size in `{s}`")))?;
                    if n == 0 || !k.is_multiple_of(n) {
                        return Err(Error::Parse(format!("unsupported key size in `{s}`")));
                    }
                    CipherSpec::simon(n, k / n)
                }
                None => match n {
                    16 => Ok(CipherSpec::simon32()),
                    24 => Ok(CipherSpec::simon48()),
                    32 => Ok(CipherSpec::simon64()),
                    48 => Ok(CipherSpec::simon96()),
                    64 => Ok(CipherSpec::simon128()),
                    _ => Err(Error::Parse(format!("unknown cipher `{s}`"))),
                },
            },
        }
    }
}

/// Source of round keys for encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyMaterial {
    /// Master key words, least significant word first (`k[0]` is the first round key).
    RealSchedule(Vec<u64>),
    /// Explicit round keys used as given.
    IndependentRoundKeys(Vec<u64>),
}

// Published z sequences, element 0 first.
const SIMON_Z: [&str; 5] = [
    "11111010001001010110000111001101111101000100101011000011100110",
    "10001110111110010011000010110101000111011111001001100001011010",
    "10101111011100000011010010011000101000010001111110010110110011",
    "11011011101011000110010111100000010010001010011100110100001111",
    "11010001111001101011011000100000010111000011001010010011101111",
];

fn simon_z(j: usize) -> u64 {
    SIMON_Z[j].bytes().enumerate().fold(0u64, |acc, (i, ch)| acc | (((ch - b'0') as u64) << i))
}

fn simon_z_index(n: u32, m: u32) -> usize {
    match (n, m) {
        (16, 4) | (24, 3) => 0,
        (24, 4) => 1,
        (32, 3) | (48, 2) | (64, 2) => 2,
        (32, 4) | (48, 3) | (64, 3) => 3,
        (64, 4) => 4,
        _ => unreachable!("validated by CipherSpec::simon"),
    }
}

fn simeck_sequence(n: u32) -> u64 {
    match n {
        16 | 24 => 0x9A42_BB1F,
        _ => 0x938_BCA3_083F,
    }
}

impl CipherSpec {
    /// Expand key material into `rounds` round keys.
    pub fn key_schedule(&self, keys: &KeyMaterial, rounds: usize) -> Result<Vec<u64>> {
        match keys {
            KeyMaterial::IndependentRoundKeys(list) => {
                if list.len() < rounds {
                    return Err(Error::Config(format!(
                        "{} independent round keys supplied, {} needed",
                        list.len(),
                        rounds
                    )));
                }
                Ok(list.iter().map(|k| k & self.mask()).collect())
            }
            KeyMaterial::RealSchedule(master) => {
                if master.len() != self.key_words as usize {
                    return Err(Error::Config(format!(
                        "{} expects {} master-key words, got {}",
                        self.name(),
                        self.key_words,
                        master.len()
                    )));
                }
                let master: Vec<u64> = master.iter().map(|k| k & self.mask()).collect();
                Ok(match self.variant {
                    Variant::Simon => self.simon_schedule(&master, rounds),
                    Variant::Simeck => self.simeck_schedule(&master, rounds),
                })
            }
        }
    }

    fn simon_schedule(&self, master: &[u64], rounds: usize) -> Vec<u64> {
        let m = self.key_words as usize;
        let z = simon_z(simon_z_index(self.n, self.key_words));
        let c = self.mask() ^ 3;
        let mut k: Vec<u64> = master.to_vec();
        for i in m..rounds.max(m) {
            let mut tmp = self.rot(k[i - 1], -3);
            if m == 4 {
                tmp ^= k[i - 3];
            }
            tmp ^= self.rot(tmp, -1);
            let zbit = (z >> ((i - m) % 62)) & 1;
            k.push(c ^ zbit ^ k[i - m] ^ tmp);
        }
        k.truncate(rounds);
        k
    }

    fn simeck_schedule(&self, master: &[u64], rounds: usize) -> Vec<u64> {
        let mut regs = [master[0], master[1], master[2], master[3]];
        let mut seq = simeck_sequence(self.n);
        let base = self.mask() ^ 3;
        let mut out = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            out.push(regs[0]);
            let constant = base | (seq & 1);
            seq >>= 1;
            let (l, r) = self.round((regs[1], regs[0]), constant);
            regs = [r, regs[2], regs[3], l];
        }
        out
    }
}
