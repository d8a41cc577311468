//! Generic search over Feistel word sequences `s^0 .. s^{R+1}`.
//!
//! Both differential and (backward) linear trails of Simon-like ciphers have
//! the shape `s^{k+1} = s^{k-1} ^ t` with `t` drawn from an affine set that
//! depends only on `s^k`, and a round cost `w(s^k)`. The trail weight is
//! `w(s^1) + .. + w(s^R)`; the start pair is `(s^1, s^0)` and the end pair is
//! `(s^{R+1}, s^R)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::gf2::AffineSet;

/// Per-word propagation rule.
pub trait RoundRule: Sync {
    fn width(&self) -> u32;

    /// Round cost of a middle word, `None` if the word may not occur inside a trail.
    fn weight(&self, x: u64) -> Option<u32>;

    /// All `t` with `s^{k+1} = s^{k-1} ^ t` allowed when `s^k = x`.
    fn step_set(&self, x: u64) -> AffineSet;

    /// `weight(x) >= ceil(popcount(x) / hw_per_weight())` for every admissible `x`.
    fn hw_per_weight(&self) -> u32;
}

/// Per-weight trail counts for one end pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndCounts {
    pub end: (u64, u64),
    /// `(weight, number of trails)`, increasing weight.
    pub counts: Vec<(u32, u64)>,
}

pub struct TrailEngine<'r, R: RoundRule> {
    rule: &'r R,
    mask: u64,
    steps: HashMap<u64, Arc<AffineSet>>,
    bounds: Vec<u32>,
    cands: Vec<(u64, u32)>,
    cand_limit: Option<u32>,
}

impl<'r, R: RoundRule> TrailEngine<'r, R> {
    pub fn new(rule: &'r R) -> Self {
        let n = rule.width();
        TrailEngine {
            rule,
            mask: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            steps: HashMap::new(),
            bounds: vec![0],
            cands: Vec::new(),
            cand_limit: None,
        }
    }

    pub fn rule(&self) -> &R {
        self.rule
    }

    pub fn step_set(&mut self, x: u64) -> Arc<AffineSet> {
        if let Some(s) = self.steps.get(&x) {
            return s.clone();
        }
        let s = Arc::new(self.rule.step_set(x));
        if self.steps.len() < 1 << 22 {
            self.steps.insert(x, s.clone());
        }
        s
    }

    fn rot(&self, x: u64, t: u32) -> u64 {
        let n = self.rule.width();
        let t = t % n;
        if t == 0 {
            x
        } else {
            ((x << t) | (x >> (n - t))) & self.mask
        }
    }

    fn is_canonical(&self, x: u64) -> bool {
        (1..self.rule.width()).all(|t| self.rot(x, t) >= x)
    }

    /// Nonzero admissible words with weight at most `limit`, sorted by `(weight, word)`.
    pub fn candidates(&mut self, limit: u32) -> Vec<(u64, u32)> {
        if self.cand_limit.is_none_or(|l| l < limit) {
            let n = self.rule.width();
            let max_hw = (limit * self.rule.hw_per_weight()).min(n);
            let mut out = Vec::new();
            let rule = self.rule;
            for_each_word_up_to(n, max_hw, &mut |x| {
                if let Some(w) = rule.weight(x) {
                    if w <= limit {
                        out.push((x, w));
                    }
                }
            });
            out.sort_unstable_by_key(|&(x, w)| (w, x));
            self.cands = out;
            self.cand_limit = Some(limit);
        }
        self.cands.iter().copied().take_while(|&(_, w)| w <= limit).collect()
    }

    /// Best weight over all nonzero `rounds`-round trails with a free start.
    pub fn bound(&mut self, rounds: usize) -> u32 {
        while self.bounds.len() <= rounds {
            let k = self.bounds.len();
            let lo = self.bounds[k - 1];
            let mut target = lo;
            loop {
                if self.free_search(k, target).is_some() {
                    break;
                }
                target += 1;
            }
            self.bounds.push(target);
        }
        self.bounds[rounds]
    }

    /// Minimal-weight trail with a free start, searched up to `cap`.
    pub fn best_free(&mut self, rounds: usize, cap: u32) -> Option<(u32, Vec<u64>)> {
        assert!(rounds >= 1);
        let lo = self.bound(rounds - 1);
        for target in lo..=cap {
            if let Some(seq) = self.free_search(rounds, target) {
                if self.bounds.len() == rounds {
                    self.bounds.push(target);
                }
                return Some((self.seq_weight(&seq), seq));
            }
        }
        None
    }

    /// Minimal-weight trail from a fixed start `(s^1, s^0)`, searched up to `cap`.
    pub fn best_from(&mut self, rounds: usize, start: (u64, u64), cap: u32) -> Option<(u32, Vec<u64>)> {
        assert!(rounds >= 1);
        let (s1, s0) = start;
        let w1 = self.rule.weight(s1)?;
        let lo = w1 + self.bound(rounds - 1);
        for target in lo..=cap {
            let mut path = vec![s0, s1];
            if self.extend(rounds, w1, target, &mut path) {
                return Some((self.seq_weight(&path), path));
            }
        }
        None
    }

    /// Weight of a full sequence `s^0 .. s^{R+1}`.
    pub fn seq_weight(&self, seq: &[u64]) -> u32 {
        seq[1..seq.len() - 1].iter().map(|&x| self.rule.weight(x).unwrap_or(u32::MAX / 4)).sum()
    }

    /// Check every step of a full sequence `s^0 .. s^{R+1}`.
    pub fn is_valid(&mut self, seq: &[u64]) -> bool {
        if seq.len() < 3 || (seq[0] == 0 && seq[1] == 0) {
            return false;
        }
        for k in 1..seq.len() - 1 {
            if self.rule.weight(seq[k]).is_none() {
                return false;
            }
            let t = seq[k + 1] ^ seq[k - 1];
            if !self.step_set(seq[k]).contains(t) {
                return false;
            }
        }
        true
    }

    fn free_search(&mut self, rounds: usize, target: u32) -> Option<Vec<u64>> {
        let b_rest1 = self.bound_below(rounds, 1);
        if b_rest1 > target {
            return None;
        }
        let firsts = self.candidates(target - b_rest1);
        // s^1 = 0 first: the trail then starts with a free round.
        let zero_first = std::iter::once((0u64, 0u32));
        for (s1, w1) in zero_first.chain(firsts.iter().copied()) {
            if s1 != 0 && !self.is_canonical(s1) {
                continue;
            }
            if rounds == 1 {
                let s0 = if s1 == 0 { 1 } else { 0 };
                let t = self.step_set(s1).offset;
                return Some(vec![s0, s1, s0 ^ t]);
            }
            let b_rest2 = self.bound_below(rounds, 2);
            if w1 + b_rest2 > target {
                continue;
            }
            let seconds = self.candidates(target - w1 - b_rest2);
            let zero_second: Vec<(u64, u32)> = if s1 != 0 { vec![(0, 0)] } else { Vec::new() };
            for &(s2, w2) in zero_second.iter().chain(seconds.iter()) {
                if s1 == 0 && !self.is_canonical(s2) {
                    continue;
                }
                let s0 = s2 ^ self.step_set(s1).offset;
                let mut path = vec![s0, s1, s2];
                if self.extend(rounds, w1 + w2, target, &mut path) {
                    return Some(path);
                }
            }
        }
        None
    }

    /// Bound for the rounds after position `k` of an `rounds`-round trail.
    fn bound_below(&mut self, rounds: usize, k: usize) -> u32 {
        if rounds <= k {
            0
        } else {
            self.bound(rounds - k)
        }
    }

    /// Depth-first extension; `path` holds `s^0 .. s^k`, `acc` = `w(s^1..s^k)`.
    fn extend(&mut self, rounds: usize, acc: u32, target: u32, path: &mut Vec<u64>) -> bool {
        let k = path.len() - 1;
        let cur = path[k];
        let prev = path[k - 1];
        let set = self.step_set(cur);
        if k == rounds {
            path.push(prev ^ set.offset);
            return true;
        }
        let rest = self.bound_below(rounds, k + 1);
        if acc + rest > target {
            return false;
        }
        let budget = target - acc - rest;
        for t in set.iter() {
            let next = prev ^ t;
            let Some(w) = self.rule.weight(next) else { continue };
            if w > budget {
                continue;
            }
            path.push(next);
            if self.extend(rounds, acc + w, target, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Visit every free-start trail of weight at most `max_weight`, up to rotation.
    ///
    /// The visitor receives `s^0 .. s^R`, the weight, and the step set of `s^R`
    /// (all choices of `s^{R+1}` are `s^{R-1} ^ t`). It returns the bound to use
    /// from then on, which may only shrink.
    pub fn for_each_free<F>(&mut self, rounds: usize, max_weight: u32, mut visit: F)
    where
        F: FnMut(&[u64], u32, &AffineSet) -> u32,
    {
        assert!(rounds >= 1);
        let mut bound = max_weight;
        let b1 = self.bound_below(rounds, 1);
        if b1 > bound {
            return;
        }
        let firsts = self.candidates(bound - b1);
        for (s1, w1) in std::iter::once((0u64, 0u32)).chain(firsts) {
            if s1 != 0 && !self.is_canonical(s1) {
                continue;
            }
            if w1 + b1 > bound {
                break;
            }
            if rounds == 1 {
                if s1 == 0 {
                    // (0, s0) costs nothing; wide branches only get sparse s0.
                    let n = self.rule.width();
                    let mut s0s = Vec::new();
                    for_each_word_up_to(n, if n <= 16 { n } else { 4 }, &mut |x| s0s.push(x));
                    s0s.retain(|&x| self.is_canonical(x));
                    for s0 in s0s {
                        let set = self.step_set(0);
                        bound = bound.min(visit(&[s0, 0], 0, &set));
                    }
                } else {
                    let set = self.step_set(s1);
                    bound = bound.min(visit(&[0, s1], w1, &set));
                }
                continue;
            }
            let b2 = self.bound_below(rounds, 2);
            if w1 + b2 > bound {
                continue;
            }
            let seconds = self.candidates(bound - w1 - b2);
            let zero = if s1 != 0 { Some((0u64, 0u32)) } else { None };
            let t1 = self.step_set(s1);
            for (s2, w2) in zero.into_iter().chain(seconds) {
                if s1 == 0 && !self.is_canonical(s2) {
                    continue;
                }
                if w1 + w2 + b2 > bound {
                    break;
                }
                // Every s^0 in s^2 ^ T(s^1) gives a distinct trail with the same weights.
                for t in t1.iter() {
                    let mut path = vec![s2 ^ t, s1, s2];
                    self.visit_rec(rounds, w1 + w2, &mut bound, &mut path, &mut visit);
                }
            }
        }
    }

    /// Visit every trail from a fixed start `(s^1, s^0)` of weight at most `max_weight`.
    pub fn for_each_from<F>(&mut self, rounds: usize, start: (u64, u64), max_weight: u32, mut visit: F)
    where
        F: FnMut(&[u64], u32, &AffineSet) -> u32,
    {
        let (s1, s0) = start;
        let Some(w1) = self.rule.weight(s1) else { return };
        let mut bound = max_weight;
        if w1 + self.bound_below(rounds, 1) > bound {
            return;
        }
        let mut path = vec![s0, s1];
        self.visit_rec(rounds, w1, &mut bound, &mut path, &mut visit);
    }

    fn visit_rec<F>(&mut self, rounds: usize, acc: u32, bound: &mut u32, path: &mut Vec<u64>, visit: &mut F)
    where
        F: FnMut(&[u64], u32, &AffineSet) -> u32,
    {
        let k = path.len() - 1;
        let cur = path[k];
        let set = self.step_set(cur);
        if k == rounds {
            *bound = (*bound).min(visit(path, acc, &set));
            return;
        }
        let rest = self.bound_below(rounds, k + 1);
        let prev = path[k - 1];
        for t in set.iter() {
            let next = prev ^ t;
            let Some(w) = self.rule.weight(next) else { continue };
            if acc + w + rest > *bound {
                continue;
            }
            path.push(next);
            self.visit_rec(rounds, acc + w, bound, path, visit);
            path.pop();
        }
    }

    /// Minimal-weight trail from `start` to `end` (both as `(s^{k+1}, s^k)` pairs).
    pub fn best_between(&mut self, rounds: usize, start: (u64, u64), end: (u64, u64), cap: u32) -> Option<(u32, Vec<u64>)> {
        let mut best: Option<(u32, Vec<u64>)> = None;
        self.for_each_from(rounds, start, cap, |path, w, set| {
            let k = path.len() - 1;
            if path[k] == end.1 && set.contains(end.0 ^ path[k - 1]) {
                if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                    let mut full = path.to_vec();
                    full.push(end.0);
                    best = Some((w, full));
                }
                return w;
            }
            cap
        });
        best
    }

    /// Count every trail from `start` with weight at most `max_weight`, grouped by end pair.
    pub fn enumerate_from(&mut self, rounds: usize, start: (u64, u64), max_weight: u32) -> Vec<EndCounts> {
        let (s1, s0) = start;
        let Some(w1) = self.rule.weight(s1) else { return Vec::new() };
        let tail: Vec<u32> = (0..=rounds).map(|j| self.bound(j)).collect();
        if w1 + tail[rounds - 1] > max_weight {
            return Vec::new();
        }
        // Layer k maps (s^k, s^{k-1}) to trail counts indexed by accumulated weight.
        let mut layer: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
        let mut v = vec![0u64; (max_weight + 1) as usize];
        v[w1 as usize] = 1;
        layer.insert((s1, s0), v);
        for k in 1..rounds {
            let rest = tail[rounds - k - 1];
            let mut next_layer: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
            let mut states: Vec<_> = layer.into_iter().collect();
            states.sort_unstable_by_key(|(key, _)| *key);
            for ((cur, prev), counts) in states {
                let min_acc = counts.iter().position(|&c| c != 0).unwrap() as u32;
                let set = self.step_set(cur);
                for t in set.iter() {
                    let nxt = prev ^ t;
                    let Some(w) = self.rule.weight(nxt) else { continue };
                    if min_acc + w + rest > max_weight {
                        continue;
                    }
                    let entry = next_layer
                        .entry((nxt, cur))
                        .or_insert_with(|| vec![0u64; (max_weight + 1) as usize]);
                    for (acc, &c) in counts.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let tot = acc as u32 + w;
                        if tot + rest <= max_weight {
                            entry[tot as usize] += c;
                        }
                    }
                }
            }
            next_layer.retain(|_, v| v.iter().any(|&c| c != 0));
            layer = next_layer;
        }
        let mut ends: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
        for ((cur, prev), counts) in layer {
            let set = self.step_set(cur);
            for t in set.iter() {
                let e = ends.entry((prev ^ t, cur)).or_insert_with(|| vec![0u64; (max_weight + 1) as usize]);
                for (i, &c) in counts.iter().enumerate() {
                    e[i] += c;
                }
            }
        }
        let mut out: Vec<EndCounts> = ends
            .into_iter()
            .map(|(end, v)| EndCounts {
                end,
                counts: v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(w, &c)| (w as u32, c)).collect(),
            })
            .collect();
        out.sort_unstable_by_key(|e| e.end);
        out
    }
}

/// Call `f` on every nonzero `n`-bit word of popcount at most `max_hw`.
pub fn for_each_word_up_to(n: u32, max_hw: u32, f: &mut dyn FnMut(u64)) {
    fn rec(pos: u32, n: u32, left: u32, acc: u64, f: &mut dyn FnMut(u64)) {
        if acc != 0 {
            f(acc);
        }
        if left == 0 {
            return;
        }
        for p in pos..n {
            rec(p + 1, n, left - 1, acc | (1u64 << p), f);
        }
    }
    rec(0, n, max_hw, 0, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_enumeration_counts() {
        let mut c = 0;
        for_each_word_up_to(10, 3, &mut |_| c += 1);
        assert_eq!(c, 10 + 45 + 120);
        let mut all = 0;
        for_each_word_up_to(8, 8, &mut |_| all += 1);
        assert_eq!(all, 255);
    }
}
