//! XOR-differential propagation through the Simon-like round function and
//! differential trail search.

use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::gf2::{self, AffineSet};
use crate::trail::{RoundRule, TrailEngine};
use crate::word::Pair;

/// `alpha -> beta` through `f` with probability `2^-weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiffTransition {
    pub alpha: u64,
    pub beta: u64,
    pub weight: u32,
}

/// Branch differences `alpha^0 .. alpha^{R+1}`; round `r` maps
/// `(alpha^{r+1}, alpha^r)` to `(alpha^{r+2}, alpha^{r+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffTrail {
    pub spec: CipherSpec,
    pub alphas: Vec<u64>,
    pub weight: u32,
}

impl DiffTrail {
    pub fn rounds(&self) -> usize {
        self.alphas.len() - 2
    }

    /// `(alpha^1, alpha^0)`.
    pub fn input(&self) -> Pair {
        Pair::new(self.alphas[1], self.alphas[0])
    }

    /// `(alpha^{R+1}, alpha^R)`.
    pub fn output(&self) -> Pair {
        let r = self.rounds();
        Pair::new(self.alphas[r + 1], self.alphas[r])
    }

    /// Per-round weights recomputed from the differences.
    pub fn round_weights(&self) -> Option<Vec<u32>> {
        (0..self.rounds())
            .map(|r| {
                let a = self.alphas[r + 1];
                diff_round_weight(&self.spec, a, self.alphas[r + 2] ^ self.alphas[r])
            })
            .collect()
    }
}

/// `(varibits, doublebits)` of an input difference.
pub fn vari_double(spec: &CipherSpec, alpha: u64) -> (u64, u64) {
    let (a, b) = (spec.a as i32, spec.b as i32);
    let vari = spec.rot(alpha, a) | spec.rot(alpha, b);
    let double = spec.rot(alpha, b) & !spec.rot(alpha, a) & spec.rot(alpha, 2 * a - b);
    (vari, double & spec.mask())
}

/// Weight shared by every possible output difference of `alpha`.
pub fn diff_weight(spec: &CipherSpec, alpha: u64) -> u32 {
    if alpha == spec.ones() {
        return spec.n - 1;
    }
    let (vari, double) = vari_double(spec, alpha);
    (vari ^ double).count_ones()
}

/// `-log2 Pr[f(x) ^ f(x ^ alpha) = beta]`, `None` when the transition is impossible.
pub fn diff_round_weight(spec: &CipherSpec, alpha: u64, beta: u64) -> Option<u32> {
    let gamma = beta ^ spec.rot(alpha, spec.c as i32);
    if alpha == spec.ones() {
        return gamma.count_ones().is_multiple_of(2).then_some(spec.n - 1);
    }
    let (vari, double) = vari_double(spec, alpha);
    let shifted = spec.rot(gamma, (spec.a - spec.b) as i32);
    if gamma & !vari == 0 && (gamma ^ shifted) & double == 0 {
        Some((vari ^ double).count_ones())
    } else {
        None
    }
}

/// The set of possible output differences of `alpha`; its dimension is the weight.
pub fn output_set(spec: &CipherSpec, alpha: u64) -> AffineSet {
    let n = spec.n;
    let lin = spec.rot(alpha, spec.c as i32);
    if alpha == 0 {
        return AffineSet::single(0);
    }
    let mut rows = Vec::new();
    if alpha == spec.ones() {
        rows.push((spec.mask(), 0));
    } else {
        let (vari, double) = vari_double(spec, alpha);
        let d = spec.a - spec.b;
        for i in 0..n {
            if (vari >> i) & 1 == 0 {
                rows.push((1u64 << i, 0));
            } else if (double >> i) & 1 == 1 {
                let j = (i + n - d) % n;
                rows.push(((1u64 << i) | (1u64 << j), 0));
            }
        }
    }
    gf2::solve(n, &rows).expect("homogeneous").translate(lin)
}

/// Every `beta` reachable from `alpha` with weight at most `cap`, ordered by `(weight, beta)`.
pub fn enumerate_transitions(spec: &CipherSpec, alpha: u64, cap: u32) -> Vec<DiffTransition> {
    let weight = diff_weight(spec, alpha);
    if weight > cap {
        return Vec::new();
    }
    output_set(spec, alpha)
        .sorted()
        .into_iter()
        .map(|beta| DiffTransition { alpha, beta, weight })
        .collect()
}

/// Differential rule for the generic trail engine; `1^n` is excluded inside trails.
pub struct DiffRule {
    pub spec: CipherSpec,
}

impl RoundRule for DiffRule {
    fn width(&self) -> u32 {
        self.spec.n
    }

    fn weight(&self, x: u64) -> Option<u32> {
        (x != self.spec.ones()).then(|| diff_weight(&self.spec, x))
    }

    fn step_set(&self, x: u64) -> AffineSet {
        output_set(&self.spec, x)
    }

    fn hw_per_weight(&self) -> u32 {
        1
    }
}

fn to_trail(spec: &CipherSpec, weight: u32, seq: Vec<u64>) -> DiffTrail {
    DiffTrail { spec: *spec, alphas: seq, weight }
}

/// Minimal-weight `rounds`-round trail, optionally from a fixed input difference.
pub fn search_best_diff_trail(
    spec: &CipherSpec,
    rounds: usize,
    weight_cap: u32,
    delta_in: Option<Pair>,
) -> Result<DiffTrail> {
    if rounds == 0 {
        return Err(Error::Config("differential part needs at least one round".into()));
    }
    let rule = DiffRule { spec: *spec };
    let mut engine = TrailEngine::new(&rule);
    let found = match delta_in {
        Some(p) if p.is_zero() => return Err(Error::Config("input difference must be nonzero".into())),
        Some(p) => engine.best_from(rounds, (p.left, p.right), weight_cap),
        None => engine.best_free(rounds, weight_cap),
    };
    found
        .map(|(w, seq)| to_trail(spec, w, seq))
        .ok_or_else(|| Error::NotFound(format!("no {rounds}-round differential trail within weight {weight_cap}")))
}

/// Output differences of all trails from `delta_in` with weight at most `max_weight`.
///
/// Each entry carries the number of distinct trails that reach `delta` with exactly `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiffEntry {
    pub delta: Pair,
    pub weight: u32,
    pub trails: u64,
}

pub fn enumerate_diff_trails_from(
    spec: &CipherSpec,
    delta_in: Pair,
    rounds: usize,
    max_weight: u32,
) -> Result<Vec<DiffEntry>> {
    if delta_in.is_zero() {
        return Err(Error::Config("input difference must be nonzero".into()));
    }
    if rounds == 0 {
        return Err(Error::Config("differential part needs at least one round".into()));
    }
    let rule = DiffRule { spec: *spec };
    let mut engine = TrailEngine::new(&rule);
    let ends = engine.enumerate_from(rounds, (delta_in.left, delta_in.right), max_weight);
    let mut out: Vec<DiffEntry> = ends
        .into_iter()
        .flat_map(|e| {
            let delta = Pair::new(e.end.0, e.end.1);
            e.counts.into_iter().map(move |(weight, trails)| DiffEntry { delta, weight, trails })
        })
        .collect();
    out.sort_unstable_by_key(|e| (e.weight, e.delta));
    Ok(out)
}
