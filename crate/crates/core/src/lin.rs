//! Linear correlation of the Simon-like round function and linear trail search.
//!
//! Correlations are tracked as magnitudes `2^-weight`; signs are not needed
//! because trails enter the distinguisher through `q^2`.

use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::gf2::{self, AffineSet};
use crate::trail::{RoundRule, TrailEngine};
use crate::word::Pair;

/// `(lambda^r, lambda^{r+1}) -> (lambda^{r+1}, lambda^{r+2})` with `|cor| = 2^-weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinTransition {
    pub lambda_in: Pair,
    pub lambda_out: Pair,
    pub weight: u32,
}

/// Masks `lambda^0 .. lambda^{R+1}`; the input mask is `(lambda^0, lambda^1)` and the
/// output mask is `(lambda^R, lambda^{R+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinTrail {
    pub spec: CipherSpec,
    pub lambdas: Vec<u64>,
    pub weight: u32,
}

impl LinTrail {
    pub fn rounds(&self) -> usize {
        self.lambdas.len() - 2
    }

    pub fn input(&self) -> Pair {
        Pair::new(self.lambdas[0], self.lambdas[1])
    }

    pub fn output(&self) -> Pair {
        let r = self.rounds();
        Pair::new(self.lambdas[r], self.lambdas[r + 1])
    }

    pub fn round_weights(&self) -> Option<Vec<u32>> {
        self.lambdas
            .windows(3)
            .map(|w| lin_round_weight(&self.spec, w[0], w[1], w[2]))
            .collect()
    }
}

/// The `abits` word: its popcount is the weight of a non-all-ones output mask.
pub fn abits(spec: &CipherSpec, lout: u64) -> u64 {
    debug_assert!(lout != spec.ones());
    let shift = spec.b as i32 - spec.a as i32;
    let mut tmp = lout;
    let mut ab = lout;
    while tmp != 0 {
        tmp = lout & spec.rot(tmp, shift);
        ab ^= tmp;
    }
    ab
}

/// Weight of `u . x ^ lout . (S^a x & S^b x)` for the AND part alone.
pub fn and_weight(spec: &CipherSpec, lin: u64, lout: u64) -> Option<u32> {
    let (a, b) = (spec.a as i32, spec.b as i32);
    let n = spec.n;
    let support = spec.rot(lout, -a) | spec.rot(lout, -b);
    if (support ^ lin) & lin != 0 {
        return None;
    }
    if lout == spec.ones() {
        let mut v = 0u64;
        let mut rest = lin;
        while rest != 0 {
            v ^= rest & 3;
            rest >>= 2;
        }
        return (v == 0).then_some((n - 2) / 2);
    }
    let ab = abits(spec, lout);
    let mut sbits = spec.rot(lout, -a) & !spec.rot(lout, -b) & !spec.rot(ab, -a);
    let s2 = 2 * a - 2 * b;
    let mut pbits = spec.rot(sbits & lin, s2);
    while sbits != 0 {
        sbits = spec.rot(sbits, s2) & spec.rot(lout, a - 2 * b);
        pbits = spec.rot((sbits & lin) ^ pbits, s2);
    }
    (pbits == 0).then_some(ab.count_ones())
}

/// Weight of the one-round approximation `(l0, l1) -> (l1, l2)`, `None` for correlation zero.
pub fn lin_round_weight(spec: &CipherSpec, l0: u64, l1: u64, l2: u64) -> Option<u32> {
    let lin = l0 ^ l2 ^ spec.rot(l1, -(spec.c as i32));
    and_weight(spec, lin, l1)
}

/// Weight shared by every input mask with nonzero correlation to `lout`.
pub fn mask_weight(spec: &CipherSpec, lout: u64) -> u32 {
    if lout == spec.ones() {
        (spec.n - 2) / 2
    } else {
        abits(spec, lout).count_ones()
    }
}

/// Input masks `u` of the AND part with nonzero correlation to `lout`.
///
/// The quadratic form `Q(x) = lout . (S^a x & S^b x)` has radical `V`; the
/// support is `{u : u . r = Q(r) for r in V}`, of dimension `n - dim V`.
pub fn and_support(spec: &CipherSpec, lout: u64) -> AffineSet {
    let n = spec.n;
    if lout == 0 {
        return AffineSet::single(0);
    }
    let (a, b) = (spec.a as i32, spec.b as i32);
    let cols: Vec<u64> = (0..n)
        .map(|i| {
            let e = 1u64 << i;
            spec.rot(lout & spec.rot(e, a), -b) ^ spec.rot(lout & spec.rot(e, b), -a)
        })
        .collect();
    let q = |x: u64| (lout & spec.rot(x, a) & spec.rot(x, b)).count_ones() & 1;
    let rows: Vec<(u64, u32)> = gf2::kernel(&cols).into_iter().map(|r| (r, q(r))).collect();
    gf2::solve(n, &rows).expect("the form is linear on its radical")
}

/// All `t` with `lambda^r = lambda^{r+2} ^ t` for middle mask `l1`.
pub fn step_set(spec: &CipherSpec, l1: u64) -> AffineSet {
    and_support(spec, l1).translate(spec.rot(l1, -(spec.c as i32)))
}

/// Every `lambda^r` with nonzero correlation to `(l1, l2)` and weight at most `cap`.
pub fn enumerate_mask_predecessors(spec: &CipherSpec, out: Pair, cap: u32) -> Vec<(u64, u32)> {
    let w = mask_weight(spec, out.left);
    if w > cap {
        return Vec::new();
    }
    step_set(spec, out.left).translate(out.right).sorted().into_iter().map(|l0| (l0, w)).collect()
}

/// Linear rule for the generic trail engine; `1^n` is excluded inside trails.
pub struct LinRule {
    pub spec: CipherSpec,
}

impl RoundRule for LinRule {
    fn width(&self) -> u32 {
        self.spec.n
    }

    fn weight(&self, x: u64) -> Option<u32> {
        (x != self.spec.ones()).then(|| mask_weight(&self.spec, x))
    }

    fn step_set(&self, x: u64) -> AffineSet {
        step_set(&self.spec, x)
    }

    fn hw_per_weight(&self) -> u32 {
        2
    }
}

/// Backward sequence `s^k = lambda^{R+1-k}` turned into a trail.
fn from_backward(spec: &CipherSpec, weight: u32, mut seq: Vec<u64>) -> LinTrail {
    seq.reverse();
    LinTrail { spec: *spec, lambdas: seq, weight }
}

/// Minimal-weight `rounds`-round trail, optionally ending in a fixed output mask.
pub fn search_best_lin_trail(
    spec: &CipherSpec,
    rounds: usize,
    weight_cap: u32,
    lambda_out: Option<Pair>,
) -> Result<LinTrail> {
    if rounds == 0 {
        return Err(Error::Config("linear part needs at least one round".into()));
    }
    let rule = LinRule { spec: *spec };
    let mut engine = TrailEngine::new(&rule);
    let found = match lambda_out {
        Some(p) if p.is_zero() => return Err(Error::Config("output mask must be nonzero".into())),
        Some(p) => engine.best_from(rounds, (p.left, p.right), weight_cap),
        None => engine.best_free(rounds, weight_cap),
    };
    found
        .map(|(w, seq)| from_backward(spec, w, seq))
        .ok_or_else(|| Error::NotFound(format!("no {rounds}-round linear trail within weight {weight_cap}")))
}

/// Input masks of all trails into `lambda_out`, with the number of trails per weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinEntry {
    pub mask: Pair,
    pub weight: u32,
    pub trails: u64,
}

pub fn enumerate_lin_trails_to(
    spec: &CipherSpec,
    lambda_out: Pair,
    rounds: usize,
    max_weight: u32,
) -> Result<Vec<LinEntry>> {
    if lambda_out.is_zero() {
        return Err(Error::Config("output mask must be nonzero".into()));
    }
    if rounds == 0 {
        return Err(Error::Config("linear part needs at least one round".into()));
    }
    let rule = LinRule { spec: *spec };
    let mut engine = TrailEngine::new(&rule);
    let ends = engine.enumerate_from(rounds, (lambda_out.left, lambda_out.right), max_weight);
    let mut out: Vec<LinEntry> = ends
        .into_iter()
        .flat_map(|e| {
            let mask = Pair::new(e.end.0, e.end.1);
            e.counts.into_iter().map(move |(weight, trails)| LinEntry { mask, weight, trails })
        })
        .collect();
    out.sort_unstable_by_key(|e| (e.weight, e.mask));
    Ok(out)
}
