use super::Assignment;
use crate::cipher::CipherSpec;
use crate::diff::vari_double;
use crate::error::{Error, Result};
use crate::search::DLTrail;
use crate::word::Pair;

fn put_word(a: &mut Assignment, prefix: &str, n: u32, w: u64) {
    for i in 0..n {
        a.insert(format!("{prefix}_{i}"), ((w >> i) & 1) as f64);
    }
}

fn put_reals(a: &mut Assignment, prefix: &str, v: &[f64]) {
    for (i, x) in v.iter().enumerate() {
        a.insert(format!("{prefix}_{i}"), *x);
    }
}

/// Values of every differential-part variable along `alpha^0 .. alpha^{R+1}`.
pub fn diff_assignment(spec: &CipherSpec, alphas: &[u64]) -> Assignment {
    let n = spec.n;
    let mut a = Assignment::new();
    for (k, &w) in alphas.iter().enumerate() {
        put_word(&mut a, &format!("d_alpha_{k}"), n, w);
    }
    let mut total = 0u32;
    for r in 0..alphas.len() - 2 {
        let x = alphas[r + 1];
        let beta = alphas[r + 2] ^ alphas[r];
        let gamma = beta ^ spec.rot(x, spec.c as i32);
        let (vari, dbl) = vari_double(spec, x);
        let probits = vari ^ dbl;
        put_word(&mut a, &format!("d_beta_{r}"), n, beta);
        put_word(&mut a, &format!("d_gamma_{r}"), n, gamma);
        put_word(&mut a, &format!("d_varibits_{r}"), n, vari);
        put_word(&mut a, &format!("d_doublebits_{r}"), n, dbl);
        put_word(&mut a, &format!("d_probits_{r}"), n, probits);
        a.insert(format!("d_pro_{r}"), probits.count_ones() as f64);
        total += probits.count_ones();
    }
    a.insert("d_Pro".into(), total as f64);
    a
}

/// Values of every linear-part variable along `lambda^0 .. lambda^{R+1}`.
pub fn lin_assignment(spec: &CipherSpec, lambdas: &[u64]) -> Assignment {
    let n = spec.n;
    let (a_, b_, c_) = (spec.a as i32, spec.b as i32, spec.c as i32);
    let s2 = 2 * a_ - 2 * b_;
    let mut a = Assignment::new();
    for (k, &w) in lambdas.iter().enumerate() {
        put_word(&mut a, &format!("l_lambda_{k}"), n, w);
    }
    let mut total = 0u32;
    for r in 0..lambdas.len() - 2 {
        let (lo, mid, hi) = (lambdas[r], lambdas[r + 1], lambdas[r + 2]);
        let lamin = lo ^ hi ^ spec.rot(mid, -c_);
        put_word(&mut a, &format!("l_lamin_{r}"), n, lamin);
        let mut tmp = vec![mid];
        for j in 1..n as i32 {
            let prev = *tmp.last().unwrap();
            tmp.push(prev & spec.rot(mid, j * (b_ - a_)));
        }
        let abits = tmp.iter().fold(0, |acc, t| acc ^ t);
        for (j, &t) in tmp.iter().enumerate() {
            put_word(&mut a, &format!("l_tmp_{r}_{j}"), n, t);
        }
        put_word(&mut a, &format!("l_abits_{r}"), n, abits);
        for i in 0..n {
            let ones = tmp.iter().map(|t| (t >> i) & 1).sum::<u64>() + ((abits >> i) & 1);
            a.insert(format!("l_N_{r}_{i}"), (ones / 2) as f64);
        }
        let mut s = spec.rot(mid, -a_) & !spec.rot(mid, -b_) & !spec.rot(abits, -a_) & spec.mask();
        let mut p = spec.rot(s & lamin, s2);
        put_word(&mut a, &format!("l_sbits_{r}_0"), n, s);
        put_word(&mut a, &format!("l_pbits_{r}_0"), n, p);
        for j in 1..n {
            s = spec.rot(s, s2) & spec.rot(mid, a_ - 2 * b_);
            p = spec.rot((s & lamin) ^ p, s2);
            put_word(&mut a, &format!("l_sbits_{r}_{j}"), n, s);
            put_word(&mut a, &format!("l_pbits_{r}_{j}"), n, p);
        }
        a.insert(format!("l_cor_{r}"), abits.count_ones() as f64);
        total += abits.count_ones();
    }
    a.insert("l_Cor".into(), total as f64);
    a
}

fn log2_or_neg_inf(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.log2()
    }
}

/// Values of every middle-part variable for difference `delta` read out by `mask`.
///
/// With `standalone` the interface binaries of the stand-alone middle model are filled in too.
pub fn middle_assignment(spec: &CipherSpec, delta: Pair, rounds: usize, mask: Pair, standalone: bool) -> Assignment {
    let n = spec.n as usize;
    let mut a = Assignment::new();
    if standalone {
        put_word(&mut a, "m_alpha_1", spec.n, delta.left);
        put_word(&mut a, "m_alpha_0", spec.n, delta.right);
        put_word(&mut a, "m_lambda_0", spec.n, mask.left);
        put_word(&mut a, "m_lambda_1", spec.n, mask.right);
    }
    let bits = |w: u64| -> Vec<f64> { (0..n).map(|i| 1.0 - 2.0 * ((w >> i) & 1) as f64).collect() };
    let mut x = vec![bits(delta.right), bits(delta.left)];
    let at = |v: &[f64], i: usize, t: u32| v[(i + n - t as usize % n) % n];
    for r in 0..rounds {
        let (xl, xr) = (&x[r + 1], &x[r]);
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let (pa, pb) = (at(xl, i, spec.a), at(xl, i, spec.b));
                0.25 * (1.0 + pa + pb + pa * pb)
            })
            .collect();
        let t: Vec<f64> = (0..n).map(|i| y[i] * xr[i]).collect();
        let next: Vec<f64> = (0..n).map(|i| t[i] * at(xl, i, spec.c)).collect();
        put_reals(&mut a, &format!("m_y_{r}"), &y);
        put_reals(&mut a, &format!("m_t_{r}"), &t);
        x.push(next);
    }
    for (k, v) in x.iter().enumerate() {
        put_reals(&mut a, &format!("m_x_{k}"), v);
    }
    let z0: Vec<f64> = x[rounds + 1].iter().map(|v| v.abs()).collect();
    let z1: Vec<f64> = x[rounds].iter().map(|v| v.abs()).collect();
    let z2: Vec<f64> = z0.iter().map(|&v| log2_or_neg_inf(v)).collect();
    let z3: Vec<f64> = z1.iter().map(|&v| log2_or_neg_inf(v)).collect();
    let mut cor = 0.0;
    for i in 0..n {
        if (mask.left >> i) & 1 == 1 {
            cor += z2[i];
        }
        if (mask.right >> i) & 1 == 1 {
            cor += z3[i];
        }
    }
    put_reals(&mut a, "m_z0", &z0);
    put_reals(&mut a, "m_z1", &z1);
    put_reals(&mut a, "m_z2", &z2);
    put_reals(&mut a, "m_z3", &z3);
    a.insert("m_Cor".into(), cor);
    a
}

/// Full-model assignment of a trail whose differential and linear paths are known.
pub fn trail_assignment(spec: &CipherSpec, trail: &DLTrail) -> Result<Assignment> {
    let c = trail.config;
    if trail.diff_path.len() != c.rd + 2 || trail.lin_path.len() != c.rl + 2 {
        return Err(Error::Config("trail paths are missing; re-evaluate the trail first".into()));
    }
    let mut a = diff_assignment(spec, &trail.diff_path);
    a.extend(lin_assignment(spec, &trail.lin_path));
    let mid = middle_assignment(spec, trail.delta_mid, c.rm, trail.lambda_mid, false);
    let cor_e = a["d_Pro"] - mid["m_Cor"] + 2.0 * a["l_Cor"];
    a.extend(mid);
    a.insert("e_Cor".into(), cor_e);
    Ok(a)
}
