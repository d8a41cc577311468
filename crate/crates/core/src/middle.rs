//! Continuous-difference propagation through the middle rounds.
//!
//! Entry `i` of a branch is `2 Pr[difference bit i = 0] - 1`, so `+1` means the
//! bit difference is certainly zero.

use crate::cipher::CipherSpec;
use crate::word::Pair;

#[derive(Debug, Clone, PartialEq)]
pub struct ContState {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl ContState {
    pub fn from_difference(spec: &CipherSpec, delta: Pair) -> Self {
        let branch = |w: u64| (0..spec.n).map(|i| 1.0 - 2.0 * ((w >> i) & 1) as f64).collect();
        ContState { left: branch(delta.left), right: branch(delta.right) }
    }

    pub fn width(&self) -> usize {
        self.left.len()
    }

    /// One round; indices follow left rotation, so `S^a` reads entry `i - a`.
    pub fn step(&self, spec: &CipherSpec) -> Self {
        let n = self.width();
        let at = |i: usize, t: u32| self.left[(i + n - t as usize % n) % n];
        let left = (0..n)
            .map(|i| {
                let (xa, xb) = (at(i, spec.a), at(i, spec.b));
                0.25 * (1.0 + xa + xb + xa * xb) * at(i, spec.c) * self.right[i]
            })
            .collect();
        ContState { left, right: self.left.clone() }
    }

    pub fn propagate(&self, spec: &CipherSpec, rounds: usize) -> Self {
        let mut s = self.clone();
        for _ in 0..rounds {
            s = s.step(spec);
        }
        s
    }

    /// Signed product of the entries selected by `mask`; exactly zero if any selected entry is zero.
    pub fn correlation(&self, mask: Pair) -> f64 {
        let mut r = 1.0;
        for (branch, w) in [(&self.left, mask.left), (&self.right, mask.right)] {
            let mut bits = w;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                r *= branch[i];
            }
        }
        r
    }

    pub fn all_in_range(&self) -> bool {
        self.left.iter().chain(&self.right).all(|x| (-1.0..=1.0).contains(x))
    }
}

/// Middle-part correlation of `delta` after `rounds` rounds under `mask`.
pub fn middle_correlation(spec: &CipherSpec, delta: Pair, rounds: usize, mask: Pair) -> f64 {
    ContState::from_difference(spec, delta).propagate(spec, rounds).correlation(mask)
}

/// Sign-free log2 magnitude, `-inf` for zero.
pub fn log2_abs(x: f64) -> f64 {
    x.abs().log2()
}
