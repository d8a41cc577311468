//! Differential-linear trails: composition, the differential-first and
//! linear-first searches, and clustering of trails into a distinguisher.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cipher::CipherSpec;
use crate::diff::{self, DiffRule};
use crate::error::{Error, Result};
use crate::lin::{self, LinRule};
use crate::middle::ContState;
use crate::trail::TrailEngine;
use crate::word::Pair;

/// Split `(R_d, R_m, R_l)` of the cipher rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoundConfig {
    pub rd: usize,
    pub rm: usize,
    pub rl: usize,
}

impl RoundConfig {
    pub fn new(rd: usize, rm: usize, rl: usize) -> Self {
        RoundConfig { rd, rm, rl }
    }

    pub fn total(&self) -> usize {
        self.rd + self.rm + self.rl
    }
}

impl fmt::Display for RoundConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.rd, self.rm, self.rl)
    }
}

impl FromStr for RoundConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("round configuration must look like `5,2,4`, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<usize> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        Ok(RoundConfig::new(v[0], v[1], v[2]))
    }
}

/// A single trail `(delta_in, delta_mid, lambda_mid, lambda_out)` and its correlation pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct DLTrail {
    pub config: RoundConfig,
    pub delta_in: Pair,
    pub delta_mid: Pair,
    pub lambda_mid: Pair,
    pub lambda_out: Pair,
    /// `-Pro`.
    pub log2_p: i32,
    /// Signed middle correlation.
    pub r_mid: f64,
    /// `-Cor_l`, the log2 of the linear correlation magnitude.
    pub log2_q: i32,
    pub cor_total: f64,
    /// `alpha^0 .. alpha^{R_d+1}`, empty when unknown.
    pub diff_path: Vec<u64>,
    /// `lambda^0 .. lambda^{R_l+1}`, empty when unknown.
    pub lin_path: Vec<u64>,
}

impl DLTrail {
    pub fn log2_cor(&self) -> f64 {
        self.cor_total.abs().log2()
    }
}

/// `2^log2_p * r * 2^(2 log2_q)`.
pub fn compose(log2_p: f64, r_mid: f64, log2_q: f64) -> f64 {
    (log2_p + 2.0 * log2_q).exp2() * r_mid
}

/// `ceil(epsilon / cor^2)` as a float (values can exceed any integer type).
pub fn samples_needed(cor: f64, epsilon: f64) -> Result<f64> {
    if cor == 0.0 {
        return Err(Error::ZeroCorrelation);
    }
    if epsilon <= 0.0 {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    Ok((epsilon / (cor * cor)).ceil())
}

/// True when the data requirement exceeds the full codebook of a `2n`-bit block.
pub fn theoretical_only(samples: f64, spec: &CipherSpec) -> bool {
    samples > (2.0 * spec.n as f64).exp2()
}

fn rot_pair(spec: &CipherSpec, p: Pair, t: i32) -> Pair {
    Pair::new(spec.rot(p.left, t), spec.rot(p.right, t))
}

fn rot_path(spec: &CipherSpec, path: &[u64], t: i32) -> Vec<u64> {
    path.iter().map(|&x| spec.rot(x, t)).collect()
}

fn canonical_pair(spec: &CipherSpec, p: Pair) -> (Pair, i32) {
    (0..spec.n as i32)
        .map(|t| (rot_pair(spec, p, t), t))
        .min_by_key(|(q, _)| (q.left, q.right))
        .unwrap()
}

fn key(t: &DLTrail) -> (u64, u64, u64, u64, u64, u64, u64, u64) {
    (
        t.delta_in.left,
        t.delta_in.right,
        t.delta_mid.left,
        t.delta_mid.right,
        t.lambda_mid.left,
        t.lambda_mid.right,
        t.lambda_out.left,
        t.lambda_out.right,
    )
}

/// Keep the better of two trails: larger magnitude, then smaller anchors.
fn better(a: &DLTrail, b: &DLTrail) -> bool {
    let (x, y) = (a.log2_cor(), b.log2_cor());
    if (x - y).abs() > 1e-9 {
        x > y
    } else {
        key(a) < key(b)
    }
}

/// Knobs shared by the two heuristic searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Cap on the part searched second, as an absolute weight.
    pub second_cap: Option<u32>,
    /// How far above its optimum the part searched second may go.
    pub second_slack: u32,
    /// Upper limit on the number of distinct anchors tried from the first part.
    pub max_anchors: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { second_cap: None, second_slack: 6, max_anchors: 4096 }
    }
}

/// Distinct `(end, start)` pairs of all optimal free-start trails, up to rotation.
fn optimal_anchors<R: crate::trail::RoundRule>(
    spec: &CipherSpec,
    engine: &mut TrailEngine<'_, R>,
    rounds: usize,
    limit: usize,
) -> (u32, Vec<(Pair, Pair, Vec<u64>)>) {
    let best = engine.bound(rounds);
    let mut seen: BTreeMap<(u64, u64), (Pair, Vec<u64>)> = BTreeMap::new();
    engine.for_each_free(rounds, best, |path, _w, set| {
        let k = path.len() - 1;
        for t in set.iter() {
            let end = Pair::new(path[k - 1] ^ t, path[k]);
            let start = Pair::new(path[1], path[0]);
            let (canon, r) = canonical_pair(spec, end);
            let start = rot_pair(spec, start, r);
            let mut full = path.to_vec();
            full.push(end.left);
            let full = rot_path(spec, &full, r);
            let e = seen.entry((canon.left, canon.right)).or_insert((start, full.clone()));
            if (start.left, start.right) < (e.0.left, e.0.right) {
                *e = (start, full);
            }
        }
        best
    });
    let list = seen
        .into_iter()
        .take(limit)
        .map(|((l, r), (start, path))| (Pair::new(l, r), start, path))
        .collect();
    (best, list)
}

fn neg_log2(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else {
        -x.abs().log2()
    }
}

/// Differential-first search: fix optimal differential trails, then choose the
/// linear trail minimizing `2 Cor_l - log2 |middle correlation|`.
pub fn dfs_search(spec: &CipherSpec, config: RoundConfig, opts: &SearchOptions) -> Result<DLTrail> {
    check_config(config)?;
    let n = spec.n as i32;
    let drule = DiffRule { spec: *spec };
    let mut deng = TrailEngine::new(&drule);
    let (pro, anchors) = optimal_anchors(spec, &mut deng, config.rd, opts.max_anchors);
    let lrule = LinRule { spec: *spec };
    let mut leng = TrailEngine::new(&lrule);
    let lin_best = leng.bound(config.rl);
    let cap = opts.second_cap.unwrap_or(lin_best + opts.second_slack);
    let mut incumbent: Option<DLTrail> = None;
    for (delta, delta_in, dpath) in anchors {
        let state = ContState::from_difference(spec, delta).propagate(spec, config.rm);
        let cl: Vec<f64> = state.left.iter().map(|&x| neg_log2(x)).collect();
        let cr: Vec<f64> = state.right.iter().map(|&x| neg_log2(x)).collect();
        let cost = |c: &[f64], w: u64| -> f64 {
            let mut s = 0.0;
            let mut b = w;
            while b != 0 {
                s += c[b.trailing_zeros() as usize];
                b &= b - 1;
            }
            s
        };
        let mut best_val = incumbent.as_ref().map_or(f64::INFINITY, |t| -t.log2_cor() - pro as f64);
        let lin_cap = if best_val.is_finite() { cap.min((best_val / 2.0).floor() as u32) } else { cap };
        let mut local: Option<DLTrail> = None;
        leng.for_each_free(config.rl, lin_cap, |path, w, set| {
            let k = path.len() - 1;
            for t in 0..n {
                let l1 = spec.rot(path[k], t);
                let base = 2.0 * w as f64 + cost(&cr, l1);
                if base > best_val + 1e-9 {
                    continue;
                }
                for u in set.iter() {
                    let l0 = spec.rot(path[k - 1] ^ u, t);
                    let v = base + cost(&cl, l0);
                    if v > best_val + 1e-9 {
                        continue;
                    }
                    let mut lp: Vec<u64> = path.iter().map(|&x| spec.rot(x, t)).collect();
                    lp.push(l0);
                    lp.reverse();
                    let cand = make_trail(spec, config, delta_in, delta, pro, &state, &lp, w, dpath.clone());
                    if local.as_ref().is_none_or(|c| better(&cand, c)) {
                        best_val = best_val.min(v);
                        local = Some(cand);
                    }
                }
            }
            if best_val.is_finite() {
                lin_cap.min((best_val / 2.0 + 1e-9).floor() as u32)
            } else {
                lin_cap
            }
        });
        if let Some(c) = local {
            if incumbent.as_ref().is_none_or(|i| better(&c, i)) {
                incumbent = Some(c);
            }
        }
    }
    incumbent.ok_or_else(|| Error::NotFound(format!("no admissible linear part within weight {cap}")))
}

#[allow(clippy::too_many_arguments)]
fn make_trail(
    spec: &CipherSpec,
    config: RoundConfig,
    delta_in: Pair,
    delta: Pair,
    pro: u32,
    state: &ContState,
    lin_path: &[u64],
    lin_w: u32,
    diff_path: Vec<u64>,
) -> DLTrail {
    let rl = lin_path.len() - 2;
    let lambda_mid = Pair::new(lin_path[0], lin_path[1]);
    let lambda_out = Pair::new(lin_path[rl], lin_path[rl + 1]);
    let r = state.correlation(lambda_mid);
    let _ = spec;
    DLTrail {
        config,
        delta_in,
        delta_mid: delta,
        lambda_mid,
        lambda_out,
        log2_p: -(pro as i32),
        r_mid: r,
        log2_q: -(lin_w as i32),
        cor_total: compose(-(pro as f64), r, -(lin_w as f64)),
        diff_path,
        lin_path: lin_path.to_vec(),
    }
}

/// Linear-first search: fix optimal linear trails, then choose the differential
/// trail maximizing `2^-Pro |middle correlation|` within the weight cap.
pub fn lfs_search(spec: &CipherSpec, config: RoundConfig, opts: &SearchOptions) -> Result<DLTrail> {
    check_config(config)?;
    let n = spec.n as i32;
    let lrule = LinRule { spec: *spec };
    let mut leng = TrailEngine::new(&lrule);
    // Backward linear trails: the anchor "end" is the input mask, "start" the output mask.
    let (cor_l, anchors) = optimal_anchors(spec, &mut leng, config.rl, opts.max_anchors);
    let drule = DiffRule { spec: *spec };
    let mut deng = TrailEngine::new(&drule);
    let diff_best = deng.bound(config.rd);
    let cap = opts.second_cap.unwrap_or(diff_best + opts.second_slack);
    let mut incumbent: Option<DLTrail> = None;
    for (lambda, _lambda_out, back_path) in anchors {
        let mut lin_path = back_path.clone();
        lin_path.reverse();
        let masks: Vec<Pair> = (0..n).map(|t| rot_pair(spec, lambda, -t)).collect();
        let mut best_val = incumbent.as_ref().map_or(f64::INFINITY, |t| -t.log2_cor() - 2.0 * cor_l as f64);
        let mut local: Option<DLTrail> = None;
        let mut cache: HashMap<(u64, u64), ContState> = HashMap::new();
        let d_cap = if best_val.is_finite() { cap.min(best_val.floor() as u32) } else { cap };
        deng.for_each_free(config.rd, d_cap, |path, w, set| {
            let k = path.len() - 1;
            for u in set.iter() {
                let delta = Pair::new(path[k - 1] ^ u, path[k]);
                if cache.len() > 1 << 20 {
                    cache.clear();
                }
                let state = cache
                    .entry((delta.left, delta.right))
                    .or_insert_with(|| ContState::from_difference(spec, delta).propagate(spec, config.rm));
                for (t, m) in masks.iter().enumerate() {
                    let r = state.correlation(*m);
                    if r == 0.0 {
                        continue;
                    }
                    let v = w as f64 - r.abs().log2();
                    if v > best_val + 1e-9 {
                        continue;
                    }
                    // Rotating the differential side by t pairs it with the fixed mask.
                    let mut dp = path.to_vec();
                    dp.push(delta.left);
                    let dp = rot_path(spec, &dp, t as i32);
                    let di = Pair::new(dp[1], dp[0]);
                    let dm = rot_pair(spec, delta, t as i32);
                    let cand = DLTrail {
                        config,
                        delta_in: di,
                        delta_mid: dm,
                        lambda_mid: lambda,
                        lambda_out: Pair::new(lin_path[config.rl], lin_path[config.rl + 1]),
                        log2_p: -(w as i32),
                        r_mid: r,
                        log2_q: -(cor_l as i32),
                        cor_total: compose(-(w as f64), r, -(cor_l as f64)),
                        diff_path: dp,
                        lin_path: lin_path.clone(),
                    };
                    if local.as_ref().is_none_or(|c| better(&cand, c)) {
                        best_val = best_val.min(v);
                        local = Some(cand);
                    }
                }
            }
            if best_val.is_finite() {
                d_cap.min((best_val + 1e-9).floor() as u32)
            } else {
                d_cap
            }
        });
        if let Some(c) = local {
            if incumbent.as_ref().is_none_or(|i| better(&c, i)) {
                incumbent = Some(c);
            }
        }
    }
    incumbent.ok_or_else(|| Error::NotFound(format!("no admissible differential part within weight {cap}")))
}

fn check_config(config: RoundConfig) -> Result<()> {
    if config.rd == 0 || config.rl == 0 {
        return Err(Error::Config("differential and linear parts need at least one round".into()));
    }
    Ok(())
}

/// Re-derive every component of a trail from its four anchors.
///
/// `Pro` and `Cor_l` are the lightest connecting trails within the given caps.
pub fn evaluate(
    spec: &CipherSpec,
    config: RoundConfig,
    anchors: [Pair; 4],
    diff_cap: u32,
    lin_cap: u32,
) -> Result<DLTrail> {
    check_config(config)?;
    let [delta_in, delta_mid, lambda_mid, lambda_out] = anchors;
    let drule = DiffRule { spec: *spec };
    let (pro, dpath) = TrailEngine::new(&drule)
        .best_between(config.rd, (delta_in.left, delta_in.right), (delta_mid.left, delta_mid.right), diff_cap)
        .ok_or_else(|| Error::NotFound(format!("no differential trail {delta_in} -> {delta_mid}")))?;
    let lrule = LinRule { spec: *spec };
    let (cor_l, mut lpath) = TrailEngine::new(&lrule)
        .best_between(
            config.rl,
            (lambda_out.left, lambda_out.right),
            (lambda_mid.left, lambda_mid.right),
            lin_cap,
        )
        .ok_or_else(|| Error::NotFound(format!("no linear trail {lambda_mid} -> {lambda_out}")))?;
    lpath.reverse();
    let r = crate::middle::middle_correlation(spec, delta_mid, config.rm, lambda_mid);
    Ok(DLTrail {
        config,
        delta_in,
        delta_mid,
        lambda_mid,
        lambda_out,
        log2_p: -(pro as i32),
        r_mid: r,
        log2_q: -(cor_l as i32),
        cor_total: compose(-(pro as f64), r, -(cor_l as f64)),
        diff_path: dpath,
        lin_path: lpath,
    })
}

/// How list entries reached by several trails are weighted in the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counting {
    /// One entry per distinct `(endpoint, weight)`, as produced by repeatedly
    /// excluding each found endpoint at a fixed weight.
    DistinctEndpoint,
    /// One entry per trail.
    PerTrail,
}

impl fmt::Display for Counting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Counting::DistinctEndpoint => "distinct",
            Counting::PerTrail => "per-trail",
        })
    }
}

impl FromStr for Counting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct" => Ok(Counting::DistinctEndpoint),
            "per-trail" => Ok(Counting::PerTrail),
            _ => Err(Error::Parse(format!("counting must be `distinct` or `per-trail`, got `{s}`"))),
        }
    }
}

/// Trail pairs grouped by `(differential weight, linear weight)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub diff_weight: u32,
    pub lin_weight: u32,
    pub trail_count: u64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DLDistinguisher {
    pub config: RoundConfig,
    pub delta_in: Pair,
    pub lambda_out: Pair,
    /// `-log2` of the probability and correlation bounds.
    pub p_bar_weight: u32,
    pub q_bar_weight: u32,
    pub counting: Counting,
    pub cor_sum: f64,
    pub cells: Vec<Cell>,
}

impl DLDistinguisher {
    pub fn log2_cor(&self) -> f64 {
        self.cor_sum.abs().log2()
    }

    /// `diff_weight,lin_weight,trail_count,signed_contribution` rows.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("diff_weight,lin_weight,trail_count,signed_contribution\n");
        for c in &self.cells {
            s.push_str(&format!("{},{},{},{:e}\n", c.diff_weight, c.lin_weight, c.trail_count, c.contribution));
        }
        s
    }
}

/// Products of state entries over every byte of a mask, per byte position.
struct MaskTables {
    tables: Vec<[f64; 256]>,
    bytes: usize,
}

impl MaskTables {
    fn new(state: &ContState) -> Self {
        let n = state.width();
        let bytes = n.div_ceil(8);
        let mut tables = Vec::with_capacity(2 * bytes);
        for branch in [&state.left, &state.right] {
            for k in 0..bytes {
                let mut t = [1.0f64; 256];
                for v in 1..256usize {
                    let low = v.trailing_zeros() as usize;
                    let idx = 8 * k + low;
                    let e = if idx < n { branch[idx] } else { 1.0 };
                    t[v] = t[v & (v - 1)] * e;
                }
                tables.push(t);
            }
        }
        MaskTables { tables, bytes }
    }

    fn correlation(&self, m: Pair) -> f64 {
        let mut r = 1.0;
        for (off, w) in [(0, m.left), (self.bytes, m.right)] {
            let mut w = w;
            let mut k = 0;
            while w != 0 {
                r *= self.tables[off + k][(w & 0xff) as usize];
                w >>= 8;
                k += 1;
            }
        }
        r
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TransformOptions {
    pub p_bar_weight: u32,
    pub q_bar_weight: u32,
    pub counting: Counting,
}

/// Sum `p * r * q^2` over every differential trail from the seed's input
/// difference and every linear trail into its output mask within the bounds.
pub fn transform(spec: &CipherSpec, seed: &DLTrail, opts: &TransformOptions) -> Result<DLDistinguisher> {
    let config = seed.config;
    if (opts.p_bar_weight as i32) < -seed.log2_p || (opts.q_bar_weight as i32) < -seed.log2_q {
        return Err(Error::Config("bounds must not be tighter than the seed trail".into()));
    }
    let dlist = diff::enumerate_diff_trails_from(spec, seed.delta_in, config.rd, opts.p_bar_weight)?;
    let llist = lin::enumerate_lin_trails_to(spec, seed.lambda_out, config.rl, opts.q_bar_weight)?;
    let seed_in_d = dlist.iter().any(|e| e.delta == seed.delta_mid && e.weight as i32 == -seed.log2_p);
    let seed_in_l = llist.iter().any(|e| e.mask == seed.lambda_mid && e.weight as i32 == -seed.log2_q);
    if !seed_in_d || !seed_in_l {
        return Err(Error::Integrity("the seed trail is not re-derivable within the bounds".into()));
    }
    let mult = |t: u64| match opts.counting {
        Counting::DistinctEndpoint => 1u64,
        Counting::PerTrail => t,
    };
    // Group differential entries by output difference so each middle state is computed once.
    let mut groups: BTreeMap<(u64, u64), Vec<(u32, u64)>> = BTreeMap::new();
    for e in &dlist {
        groups.entry((e.delta.left, e.delta.right)).or_default().push((e.weight, mult(e.trails)));
    }
    let groups: Vec<((u64, u64), Vec<(u32, u64)>)> = groups.into_iter().collect();
    let lin_entries: Vec<(Pair, u32, u64, f64)> = llist
        .iter()
        .map(|e| (e.mask, e.weight, mult(e.trails), (-2.0 * e.weight as f64).exp2()))
        .collect();
    let pw = opts.p_bar_weight as usize;
    let qw = opts.q_bar_weight as usize;
    let partials: Vec<Vec<(u64, f64)>> = groups
        .par_iter()
        .map(|((l, r), ws)| {
            let state = ContState::from_difference(spec, Pair::new(*l, *r)).propagate(spec, config.rm);
            let tables = MaskTables::new(&state);
            let mut cells = vec![(0u64, 0.0f64); (pw + 1) * (qw + 1)];
            // Per linear weight: summed q^2 r and pair counts, independent of the differential weight.
            let mut by_lw = vec![(0u64, 0.0f64); qw + 1];
            for &(mask, lw, lm, q2) in &lin_entries {
                let c = tables.correlation(mask);
                let slot = &mut by_lw[lw as usize];
                slot.0 += lm;
                slot.1 += c * q2 * lm as f64;
            }
            for &(dw, dm) in ws {
                let p = (-(dw as f64)).exp2() * dm as f64;
                for (lw, &(cnt, sum)) in by_lw.iter().enumerate() {
                    if cnt == 0 {
                        continue;
                    }
                    let cell = &mut cells[dw as usize * (qw + 1) + lw];
                    cell.0 += cnt * dm;
                    cell.1 += p * sum;
                }
            }
            cells
        })
        .collect();
    let mut total = vec![(0u64, 0.0f64); (pw + 1) * (qw + 1)];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.0 += p.0;
            t.1 += p.1;
        }
    }
    let cells: Vec<Cell> = total
        .into_iter()
        .enumerate()
        .filter(|(_, (c, _))| *c != 0)
        .map(|(i, (c, s))| Cell {
            diff_weight: (i / (qw + 1)) as u32,
            lin_weight: (i % (qw + 1)) as u32,
            trail_count: c,
            contribution: s,
        })
        .collect();
    let cor_sum = cells.iter().map(|c| c.contribution).sum();
    Ok(DLDistinguisher {
        config,
        delta_in: seed.delta_in,
        lambda_out: seed.lambda_out,
        p_bar_weight: opts.p_bar_weight,
        q_bar_weight: opts.q_bar_weight,
        counting: opts.counting,
        cor_sum,
        cells,
    })
}
