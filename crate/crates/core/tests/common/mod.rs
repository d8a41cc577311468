#![allow(dead_code)]

use dltrail::search::RoundConfig;
use dltrail::{CipherSpec, Pair};

/// One published trail row: anchors, component weights and `-log2 |Cor_E|`.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub cipher: &'static str,
    pub config: (usize, usize, usize),
    pub delta_in: (u64, u64),
    pub delta_mid: (u64, u64),
    pub lambda_mid: (u64, u64),
    pub lambda_out: (u64, u64),
    /// `-log2` of the differential probability.
    pub p: u32,
    /// `-log2` of the squared linear correlation.
    pub q2: u32,
    /// `-log2 |Cor_m|` as printed.
    pub mid: f64,
    /// `-log2 |Cor_E|` as printed.
    pub total: f64,
}

impl Fixture {
    pub fn spec(&self) -> CipherSpec {
        self.cipher.parse().unwrap()
    }

    pub fn round_config(&self) -> RoundConfig {
        RoundConfig::new(self.config.0, self.config.1, self.config.2)
    }

    pub fn anchors(&self) -> [Pair; 4] {
        let p = |x: (u64, u64)| Pair::new(x.0, x.1);
        [p(self.delta_in), p(self.delta_mid), p(self.lambda_mid), p(self.lambda_out)]
    }
}

const fn fx(
    cipher: &'static str,
    config: (usize, usize, usize),
    delta_in: (u64, u64),
    delta_mid: (u64, u64),
    lambda_mid: (u64, u64),
    lambda_out: (u64, u64),
    p: u32,
    mid: f64,
    q2: u32,
    total: f64,
) -> Fixture {
    Fixture { cipher, config, delta_in, delta_mid, lambda_mid, lambda_out, p, q2, mid, total }
}

/// Simon32, Simon48 and Simeck32 rows.
pub const NARROW: &[Fixture] = &[
    fx("simon32", (5, 2, 4), (0x8, 0x22), (0x22, 0x8), (0x44, 0x10), (0x40, 0x10), 8, 0.0, 6, 14.0),
    fx("simon32", (5, 5, 3), (0x800, 0x2208), (0x2200, 0x800), (0x0, 0x100), (0x10, 0x45), 8, 0.63, 8, 16.63),
    fx("simon32", (5, 5, 3), (0x8, 0x22), (0x22, 0x8), (0x100, 0x0), (0x40, 0x110), 8, 2.73, 4, 14.73),
    fx("simon32", (5, 3, 5), (0x100, 0x440), (0x440, 0x100), (0x2208, 0x800), (0x800, 0x2200), 8, 0.83, 8, 16.83),
    fx("simon32", (5, 5, 4), (0x8, 0x22), (0x22, 0x8), (0x0, 0x1), (0x400, 0x1101), 8, 0.63, 10, 18.63),
    fx("simon32", (4, 6, 4), (0x4, 0x11), (0x4, 0x1), (0x0, 0x8000), (0x200, 0x8880), 6, 1.88, 10, 17.88),
    fx("simon32", (7, 3, 4), (0x100, 0x645), (0x44, 0x10), (0x8000, 0x2), (0x8000, 0x2002), 14, 0.0, 6, 20.0),
    // Printed with lambda_mid (0x0,0x1000); only the swapped halves connect to lambda_out.
    fx("simon32", (5, 5, 5), (0x80, 0x220), (0x220, 0x80), (0x1000, 0x0), (0x40, 0x1110), 8, 2.73, 10, 20.73),
    fx("simon48", (5, 4, 5), (0x8, 0x22), (0x22, 0x8), (0x220, 0x80), (0x80, 0x220), 8, 0.58, 8, 16.58),
    fx("simon48", (5, 5, 5), (0x8, 0x32), (0x22, 0x8), (0x1, 0x0), (0x40000, 0x110001), 8, 0.66, 10, 18.66),
    fx("simon48", (7, 3, 5), (0x800, 0x2220), (0x220, 0x80), (0x11, 0x4), (0x4, 0x11), 14, 0.0, 8, 22.0),
    fx("simon48", (7, 4, 4), (0x80, 0x222), (0x22, 0x8), (0x20, 0x80), (0x20, 0x88), 14, 0.19, 6, 20.19),
    fx("simon48", (7, 5, 4), (0x400, 0x1110), (0x110, 0x40), (0x8, 0x0), (0x800008, 0x200000), 14, 0.66, 8, 22.66),
    fx("simon48", (7, 5, 4), (0x400, 0x1110), (0x110, 0x40), (0x8, 0x20), (0x8, 0x22), 14, 1.30, 6, 21.30),
    fx("simon48", (5, 6, 5), (0x8, 0x32), (0x22, 0x8), (0x4, 0x0), (0x100000, 0x440004), 8, 3.01, 10, 21.01),
    fx("simon48", (7, 6, 4), (0x80, 0x222), (0x22, 0x8), (0x0, 0x1), (0x40000, 0x110001), 14, 0.66, 10, 24.66),
    fx("simon48", (6, 6, 5), (0x200, 0x888), (0x20, 0x8), (0x4, 0x0), (0x100000, 0x440004), 12, 2.08, 10, 24.08),
    fx("simon48", (7, 4, 6), (0x80, 0x222), (0x22, 0x8), (0x400000, 0x1), (0x40000, 0x110001), 14, 0.0, 12, 26.0),
    fx("simon48", (7, 4, 7), (0x80, 0x222), (0x22, 0x8), (0x220, 0x80), (0x8, 0x222), 14, 0.58, 14, 28.58),
    fx("simeck32", (5, 2, 5), (0x10, 0x28), (0x28, 0x10), (0x5, 0x2), (0x2, 0x5), 8, 0.0, 8, 16.0),
    fx("simeck32", (5, 5, 4), (0x2000, 0x7400), (0x400, 0x0), (0x100, 0x200), (0x100, 0x288), 10, 0.63, 6, 16.63),
    fx("simeck32", (5, 6, 3), (0x100, 0x2a0), (0x20, 0x0), (0x10, 0x0), (0x8, 0x14), 10, 1.99, 4, 15.99),
    fx("simeck32", (6, 3, 5), (0x4, 0x800a), (0x1, 0x8000), (0x5100, 0x2000), (0x2000, 0x5000), 12, 0.0, 8, 20.0),
];

/// Simon64, Simon96, Simeck48 and Simeck64 rows that are internally consistent.
pub const WIDE: &[Fixture] = &[
    fx("simon64", (7, 7, 6), (0x200, 0x888), (0x88, 0x20), (0x0, 0x4), (0x1000001, 0x4400004), 14, 0.58, 20, 34.58),
    fx("simon64", (7, 7, 6), (0x200, 0x888), (0x88, 0x20), (0x20, 0x80), (0x2, 0x80000088), 14, 7.05, 12, 33.06),
    fx("simon64", (8, 6, 6), (0x80, 0x8322), (0x80, 0x22), (0x80, 0x200), (0x8, 0x222), 18, 2.46, 12, 32.46),
    fx("simon64", (9, 6, 5), (0x800, 0x83220), (0x2220, 0x800), (0x200, 0x0), (0x8, 0x222), 20, 3.16, 10, 33.16),
    fx("simon64", (9, 7, 5), (0x800, 0x83220), (0x2220, 0x800), (0x800, 0x0), (0x20, 0x888), 20, 6.39, 10, 36.39),
    fx("simon64", (8, 5, 8), (0x800, 0x2220), (0x800, 0x220), (0x20, 0x880), (0x20, 0x888), 18, 0.91, 18, 36.91),
    fx("simon96", (9, 5, 9), (0x10000, 0x44400), (0x44400, 0x10000), (0x222, 0x8), (0x8, 0x222), 20, 0.0, 20, 40.0),
    fx("simon96", (10, 6, 9), (0x11100, 0x40400), (0x11100, 0x4000), (0x222, 0x8), (0x8, 0x222), 26, 0.66, 20, 46.66),
    fx("simon96", (9, 8, 8), (0x800, 0x2220), (0x2220, 0x800), (0x20, 0x880), (0x20, 0x888), 20, 6.41, 18, 44.41),
    fx("simon96", (11, 6, 9), (0x101000, 0x440400), (0x44400, 0x10000), (0x888, 0x20), (0x20, 0x888), 30, 0.66, 20, 50.66),
    fx("simon96", (9, 9, 8), (0x80000, 0x222000), (0x222000, 0x80000), (0x1000, 0x4000), (0x1010, 0x4044), 20, 8.16, 22, 50.16),
    fx("simeck48", (6, 6, 5), (0x80, 0x140), (0x200, 0x140), (0x10, 0x0), (0x2, 0x15), 12, 0.37, 10, 22.37),
    fx("simeck48", (6, 6, 5), (0x400, 0xa80), (0x100, 0x80), (0x28, 0x10), (0x10, 0x28), 12, 2.07, 8, 22.07),
    fx("simeck48", (5, 7, 5), (0x800, 0x1500), (0x100, 0x0), (0x10, 0x0), (0x2, 0x15), 10, 1.44, 10, 21.44),
    fx("simeck48", (8, 4, 5), (0x8000, 0x15000), (0x8000, 0x5000), (0x500, 0x200), (0x200, 0x500), 18, 0.0, 8, 26.0),
    fx("simeck48", (6, 6, 6), (0x80, 0x140), (0x200, 0x140), (0x10, 0x20), (0x4, 0x2a), 12, 0.75, 12, 24.75),
    fx("simeck48", (8, 7, 3), (0x80, 0x150), (0x80, 0x50), (0x8, 0x0), (0x4, 0xa), 18, 2.06, 4, 24.06),
    fx("simeck48", (7, 4, 7), (0x8000, 0x14000), (0x54000, 0x20000), (0x2800, 0x1000), (0x400, 0x2a00), 14, 0.0, 14, 28.0),
    fx("simeck48", (8, 4, 7), (0x8000, 0x15000), (0x8000, 0x5000), (0x500, 0x200), (0x80, 0x540), 18, 0.0, 14, 32.0),
    fx("simeck64", (4, 9, 9), (0x100, 0x280), (0x100, 0x80), (0x40, 0x0), (0x0, 0x44), 6, 1.04, 22, 29.04),
    fx("simeck64", (7, 7, 9), (0x2000, 0x5400), (0x1400, 0x800), (0x100, 0x0), (0x0, 0x110), 14, 0.13, 22, 36.13),
    fx("simeck64", (4, 10, 9), (0x100, 0x280), (0x100, 0x80), (0x40, 0x0), (0x0, 0x44), 6, 4.44, 22, 32.44),
    fx("simeck64", (4, 9, 10), (0x100, 0x280), (0x100, 0x80), (0x20, 0x40), (0x0, 0x44), 6, 3.04, 24, 33.04),
    fx("simeck64", (7, 7, 10), (0x2000, 0x5400), (0x1400, 0x800), (0x100, 0x200), (0x0, 0x220), 14, 0.13, 24, 38.13),
    fx("simeck64", (4, 9, 11), (0x100, 0x280), (0x100, 0x80), (0x40, 0x0), (0x20, 0x54), 6, 1.04, 28, 35.04),
    // Printed with delta_mid (0x28,0x100); that difference is unreachable, (0x280,0x100) matches every column.
    fx("simeck64", (11, 6, 7), (0x0, 0x880), (0x280, 0x100), (0x50, 0x20), (0x8, 0x54), 26, 0.0, 14, 40.0),
    fx("simeck64", (7, 7, 11), (0x2000, 0x5400), (0x1400, 0x800), (0x110, 0x0), (0x80, 0x140), 14, 1.04, 26, 41.04),
    fx("simeck64", (11, 7, 7), (0x0, 0x880), (0x280, 0x100), (0x28, 0x10), (0x4, 0x2a), 26, 1.04, 14, 41.04),
];

/// Published rows whose columns contradict each other; listed so the report names them.
pub const INCONSISTENT: &[(&str, &str)] = &[
    ("simon64 16 (5,6,5)", "no 5-round linear trail joins (0x4,0x0) to (0x1000000,0x4400004) within weight 9"),
    ("simeck64 22 (7,7,8)", "middle correlation of (0x1400,0x800) to (0x40,0x280) over 7 rounds is 2^-0.91, printed 2^-0.44"),
    ("simeck64 25 (4,10,11)", "lightest linear trail (0x0,0x4) to (0x4,0x2) has weight 17, printed squared correlation 2^-32"),
];
