use super::{ConstraintModel, GeneralKind, ObjSense, Sense, VarKind};
use crate::cipher::CipherSpec;
use crate::search::RoundConfig;

const INF: f64 = f64::INFINITY;

/// Index of bit `i - t` modulo `n`, i.e. bit `i` of `S^t x` is `x[at(n, i, t)]`.
fn at(n: u32, i: u32, t: i64) -> usize {
    (i as i64 - t).rem_euclid(n as i64) as usize
}

/// Variables of a differential part: `alpha^0 .. alpha^{R+1}` and `Pro`.
#[derive(Debug, Clone)]
pub struct DiffPart {
    pub alpha: Vec<Vec<usize>>,
    pub pro: usize,
}

impl DiffPart {
    /// `(alpha^{R+1}, alpha^R)`.
    pub fn output(&self) -> (&[usize], &[usize]) {
        let r = self.alpha.len() - 2;
        (&self.alpha[r + 1], &self.alpha[r])
    }
}

/// Variables of a linear part: `lambda^0 .. lambda^{R+1}` and `Cor_l`.
#[derive(Debug, Clone)]
pub struct LinPart {
    pub lambda: Vec<Vec<usize>>,
    pub cor_l: usize,
}

impl LinPart {
    /// `(lambda^0, lambda^1)`.
    pub fn input(&self) -> (&[usize], &[usize]) {
        (&self.lambda[0], &self.lambda[1])
    }
}

#[derive(Debug, Clone)]
pub struct MiddlePart {
    pub cor_m: usize,
}

fn xor3_rows(m: &mut ConstraintModel, name: &str, x: usize, y: usize, z: usize) {
    // z = x ^ y
    m.add_linear(format!("{name}_0"), vec![(1.0, x), (1.0, y), (-1.0, z)], Sense::Ge, 0.0);
    m.add_linear(format!("{name}_1"), vec![(1.0, x), (-1.0, y), (1.0, z)], Sense::Ge, 0.0);
    m.add_linear(format!("{name}_2"), vec![(-1.0, x), (1.0, y), (1.0, z)], Sense::Ge, 0.0);
    m.add_linear(format!("{name}_3"), vec![(1.0, x), (1.0, y), (1.0, z)], Sense::Le, 2.0);
}

/// Differential part over `rounds` rounds with exact transition rules.
pub fn add_diff_part(m: &mut ConstraintModel, spec: &CipherSpec, rounds: usize) -> DiffPart {
    let n = spec.n;
    let (a, b, c) = (spec.a as i64, spec.b as i64, spec.c as i64);
    let mut alpha = vec![m.binaries("d_alpha_0", n), m.binaries("d_alpha_1", n)];
    let nontrivial = alpha[0].iter().chain(&alpha[1]).map(|&v| (1.0, v)).collect();
    m.add_linear("d_nontrivial", nontrivial, Sense::Ge, 1.0);
    let mut pros = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let next = m.binaries(&format!("d_alpha_{}", r + 2), n);
        let beta = m.binaries(&format!("d_beta_{r}"), n);
        let gamma = m.binaries(&format!("d_gamma_{r}"), n);
        let vari = m.binaries(&format!("d_varibits_{r}"), n);
        let dbl = m.binaries(&format!("d_doublebits_{r}"), n);
        let probits = m.binaries(&format!("d_probits_{r}"), n);
        let pro = m.var(format!("d_pro_{r}"), VarKind::Integer, 0.0, n as f64);
        let al = alpha[r + 1].clone();
        for i in 0..n {
            let iu = i as usize;
            let (xa, xb, xd, xc) = (al[at(n, i, a)], al[at(n, i, b)], al[at(n, i, 2 * a - b)], al[at(n, i, c)]);
            let v = vari[iu];
            m.add_linear(format!("d_vari_{r}_{i}_0"), vec![(1.0, v), (-1.0, xa)], Sense::Ge, 0.0);
            m.add_linear(format!("d_vari_{r}_{i}_1"), vec![(1.0, v), (-1.0, xb)], Sense::Ge, 0.0);
            m.add_linear(format!("d_vari_{r}_{i}_2"), vec![(1.0, xa), (1.0, xb), (-1.0, v)], Sense::Ge, 0.0);
            let d = dbl[iu];
            m.add_linear(format!("d_double_{r}_{i}_0"), vec![(1.0, d), (1.0, xa)], Sense::Le, 1.0);
            m.add_linear(format!("d_double_{r}_{i}_1"), vec![(1.0, d), (-1.0, xb)], Sense::Le, 0.0);
            m.add_linear(format!("d_double_{r}_{i}_2"), vec![(1.0, d), (-1.0, xd)], Sense::Le, 0.0);
            m.add_linear(
                format!("d_double_{r}_{i}_3"),
                vec![(1.0, d), (1.0, xa), (-1.0, xb), (-1.0, xd)],
                Sense::Ge,
                -1.0,
            );
            xor3_rows(m, &format!("d_beta_{r}_{i}"), gamma[iu], xc, beta[iu]);
        }
        let weight = al.iter().map(|&v| (1.0, v)).collect();
        m.add_linear(format!("d_notones_{r}"), weight, Sense::Le, (n - 1) as f64);
        for i in 0..n {
            let iu = i as usize;
            let g = gamma[iu];
            let gs = gamma[at(n, i, a - b)];
            m.add_linear(format!("d_gamma_{r}_{i}_0"), vec![(1.0, g), (-1.0, vari[iu])], Sense::Le, 0.0);
            m.add_linear(format!("d_gamma_{r}_{i}_1"), vec![(1.0, g), (-1.0, gs), (1.0, dbl[iu])], Sense::Le, 1.0);
            m.add_linear(format!("d_gamma_{r}_{i}_2"), vec![(-1.0, g), (1.0, gs), (1.0, dbl[iu])], Sense::Le, 1.0);
        }
        for i in 0..n as usize {
            xor3_rows(m, &format!("d_probits_{r}_{i}"), vari[i], dbl[i], probits[i]);
        }
        let mut sum = vec![(1.0, pro)];
        sum.extend(probits.iter().map(|&p| (-1.0, p)));
        m.add_linear(format!("d_pro_{r}"), sum, Sense::Eq, 0.0);
        for i in 0..n as usize {
            xor3_rows(m, &format!("d_xor_{r}_{i}"), beta[i], alpha[r][i], next[i]);
        }
        alpha.push(next);
        pros.push(pro);
    }
    let pro = m.var("d_Pro", VarKind::Integer, 0.0, INF);
    let mut sum = vec![(1.0, pro)];
    sum.extend(pros.iter().map(|&p| (-1.0, p)));
    m.add_linear("d_Pro", sum, Sense::Eq, 0.0);
    DiffPart { alpha, pro }
}

/// Linear part over `rounds` rounds; the correlation is exact, not an independent-AND estimate.
pub fn add_lin_part(m: &mut ConstraintModel, spec: &CipherSpec, rounds: usize) -> LinPart {
    let n = spec.n;
    let (a, b, c) = (spec.a as i64, spec.b as i64, spec.c as i64);
    let s2 = 2 * a - 2 * b;
    m.comments.push(
        "linear part: tmp^{j+1} reads lambda rotated by (j+1)(b-a) and pbits^{j+1} uses sbits^{j+1}, \
         which agrees with exhaustive correlations at n = 16"
            .into(),
    );
    m.comments.push("linear part: pbits^{n-1} = 0 is imposed through variable bounds".into());
    let mut lambda = vec![m.binaries("l_lambda_0", n), m.binaries("l_lambda_1", n)];
    let nontrivial = lambda[0].iter().chain(&lambda[1]).map(|&v| (1.0, v)).collect();
    m.add_linear("l_nontrivial", nontrivial, Sense::Ge, 1.0);
    let mut cors = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let hi = m.binaries(&format!("l_lambda_{}", r + 2), n);
        let lin = m.binaries(&format!("l_lamin_{r}"), n);
        let tmp: Vec<Vec<usize>> = (0..n).map(|j| m.binaries(&format!("l_tmp_{r}_{j}"), n)).collect();
        let abits = m.binaries(&format!("l_abits_{r}"), n);
        let nn: Vec<usize> =
            (0..n).map(|i| m.var(format!("l_N_{r}_{i}"), VarKind::Integer, 0.0, n.div_ceil(2) as f64)).collect();
        let sbits: Vec<Vec<usize>> = (0..n).map(|j| m.binaries(&format!("l_sbits_{r}_{j}"), n)).collect();
        let pbits: Vec<Vec<usize>> = (0..n)
            .map(|j| {
                // The last list is fixed to zero; as an integer it keeps that bound in any LP reader.
                let (kind, up) = if j == n - 1 { (VarKind::Integer, 0.0) } else { (VarKind::Binary, 1.0) };
                (0..n).map(|i| m.var(format!("l_pbits_{r}_{j}_{i}"), kind, 0.0, up)).collect()
            })
            .collect();
        let cor = m.var(format!("l_cor_{r}"), VarKind::Integer, 0.0, n as f64);
        let lo = lambda[r].clone();
        let mid = lambda[r + 1].clone();
        for i in 0..n {
            let iu = i as usize;
            let vars = [lo[iu], mid[at(n, i, -c)], hi[iu], lin[iu]];
            // Even parity of the four bits, one row per odd pattern.
            for (k, signs) in [
                [1.0, 1.0, 1.0, -1.0],
                [1.0, 1.0, -1.0, 1.0],
                [1.0, -1.0, 1.0, 1.0],
                [-1.0, 1.0, 1.0, 1.0],
            ]
            .iter()
            .enumerate()
            {
                let row: Vec<(f64, usize)> = signs.iter().zip(vars).map(|(&s, v)| (s, v)).collect();
                m.add_linear(format!("l_lamin_{r}_{i}_{k}"), row, Sense::Ge, 0.0);
            }
            for (k, signs) in [
                [1.0, 1.0, 1.0, -1.0],
                [1.0, 1.0, -1.0, 1.0],
                [1.0, -1.0, 1.0, 1.0],
                [-1.0, 1.0, 1.0, 1.0],
            ]
            .iter()
            .enumerate()
            {
                let row: Vec<(f64, usize)> = signs.iter().zip(vars).map(|(&s, v)| (s, v)).collect();
                m.add_linear(format!("l_lamin_{r}_{i}_{}", k + 4), row, Sense::Le, 2.0);
            }
            m.add_linear(
                format!("l_lamin_{r}_{i}_8"),
                vec![(1.0, mid[at(n, i, -a)]), (1.0, mid[at(n, i, -b)]), (-1.0, lin[iu])],
                Sense::Ge,
                0.0,
            );
        }
        let weight = mid.iter().map(|&v| (1.0, v)).collect();
        m.add_linear(format!("l_notones_{r}"), weight, Sense::Le, (n - 1) as f64);
        for i in 0..n as usize {
            m.add_linear(format!("l_tmp0_{r}_{i}"), vec![(1.0, tmp[0][i]), (-1.0, mid[i])], Sense::Eq, 0.0);
        }
        for j in 0..(n - 1) as usize {
            for i in 0..n {
                let shift = (j as i64 + 1) * (b - a);
                m.add_general(
                    format!("l_tmp_{r}_{}_{i}", j + 1),
                    GeneralKind::And,
                    tmp[j + 1][i as usize],
                    vec![tmp[j][i as usize], mid[at(n, i, shift)]],
                );
            }
        }
        for i in 0..n as usize {
            let mut row: Vec<(f64, usize)> = tmp.iter().map(|t| (1.0, t[i])).collect();
            row.push((1.0, abits[i]));
            row.push((-2.0, nn[i]));
            m.add_linear(format!("l_abits_{r}_{i}"), row, Sense::Eq, 0.0);
        }
        for i in 0..n {
            let iu = i as usize;
            let s = sbits[0][iu];
            let (la, lb, aa) = (mid[at(n, i, -a)], mid[at(n, i, -b)], abits[at(n, i, -a)]);
            m.add_linear(format!("l_sbits_{r}_{i}_0"), vec![(-1.0, aa), (-1.0, s)], Sense::Ge, -1.0);
            m.add_linear(format!("l_sbits_{r}_{i}_1"), vec![(-1.0, lb), (-1.0, s)], Sense::Ge, -1.0);
            m.add_linear(
                format!("l_sbits_{r}_{i}_2"),
                vec![(-1.0, la), (1.0, lb), (1.0, aa), (1.0, s)],
                Sense::Ge,
                0.0,
            );
            m.add_linear(format!("l_sbits_{r}_{i}_3"), vec![(1.0, la), (-1.0, s)], Sense::Ge, 0.0);
            m.add_general(
                format!("l_pbits_{r}_0_{i}"),
                GeneralKind::And,
                pbits[0][at(n, i, -s2)],
                vec![s, lin[iu]],
            );
        }
        for j in 0..(n - 1) as usize {
            for i in 0..n {
                let iu = i as usize;
                let t = at(n, i, -s2);
                m.add_general(
                    format!("l_sbits_{r}_{}_{i}", j + 1),
                    GeneralKind::And,
                    sbits[j + 1][t],
                    vec![sbits[j][iu], mid[at(n, i, -a)]],
                );
                // pbits^{j+1}[i + s2] = (sbits^{j+1}[i] & lamin[i]) ^ pbits^j[i]
                let (s, l, p, q) = (sbits[j + 1][iu], lin[iu], pbits[j][iu], pbits[j + 1][t]);
                let rows: [(Vec<(f64, usize)>, f64); 6] = [
                    (vec![(1.0, l), (-1.0, p), (1.0, q)], 0.0),
                    (vec![(1.0, l), (1.0, p), (-1.0, q)], 0.0),
                    (vec![(-1.0, s), (-1.0, l), (1.0, p), (1.0, q)], -1.0),
                    (vec![(-1.0, s), (-1.0, l), (-1.0, p), (-1.0, q)], -3.0),
                    (vec![(1.0, s), (-1.0, p), (1.0, q)], 0.0),
                    (vec![(1.0, s), (1.0, p), (-1.0, q)], 0.0),
                ];
                for (k, (row, rhs)) in rows.into_iter().enumerate() {
                    m.add_linear(format!("l_pbits_{r}_{}_{i}_{k}", j + 1), row, Sense::Ge, rhs);
                }
            }
        }
        let mut sum = vec![(1.0, cor)];
        sum.extend(abits.iter().map(|&v| (-1.0, v)));
        m.add_linear(format!("l_cor_{r}"), sum, Sense::Eq, 0.0);
        lambda.push(hi);
        cors.push(cor);
    }
    let cor_l = m.var("l_Cor", VarKind::Integer, 0.0, INF);
    let mut sum = vec![(1.0, cor_l)];
    sum.extend(cors.iter().map(|&p| (-1.0, p)));
    m.add_linear("l_Cor", sum, Sense::Eq, 0.0);
    LinPart { lambda, cor_l }
}

/// Middle part driven by the differential output `(left, right)` and read out by `(mask0, mask1)`.
pub fn add_middle_part(
    m: &mut ConstraintModel,
    spec: &CipherSpec,
    rounds: usize,
    left: &[usize],
    right: &[usize],
    mask0: &[usize],
    mask1: &[usize],
) -> MiddlePart {
    let n = spec.n;
    let (a, b, c) = (spec.a as i64, spec.b as i64, spec.c as i64);
    let cont = |m: &mut ConstraintModel, p: &str, lo: f64, hi: f64| -> Vec<usize> {
        (0..n).map(|i| m.var(format!("{p}_{i}"), VarKind::Continuous, lo, hi)).collect()
    };
    let mut x = vec![cont(m, "m_x_0", -1.0, 1.0), cont(m, "m_x_1", -1.0, 1.0)];
    for i in 0..n as usize {
        m.add_linear(format!("m_init_1_{i}"), vec![(1.0, x[1][i]), (2.0, left[i])], Sense::Eq, 1.0);
        m.add_linear(format!("m_init_0_{i}"), vec![(1.0, x[0][i]), (2.0, right[i])], Sense::Eq, 1.0);
    }
    for r in 0..rounds {
        let next = cont(m, &format!("m_x_{}", r + 2), -1.0, 1.0);
        let y = cont(m, &format!("m_y_{r}"), -1.0, 1.0);
        let t = cont(m, &format!("m_t_{r}"), -1.0, 1.0);
        let (xl, xr) = (x[r + 1].clone(), x[r].clone());
        for i in 0..n {
            let iu = i as usize;
            let (pa, pb) = (xl[at(n, i, a)], xl[at(n, i, b)]);
            m.add_quadratic(
                format!("m_and_{r}_{i}"),
                vec![(4.0, y[iu]), (-1.0, pa), (-1.0, pb)],
                vec![(-1.0, pa, pb)],
                Sense::Eq,
                1.0,
            );
            m.add_quadratic(format!("m_t_{r}_{i}"), vec![(1.0, t[iu])], vec![(-1.0, y[iu], xr[iu])], Sense::Eq, 0.0);
            m.add_quadratic(
                format!("m_x_{}_{i}", r + 2),
                vec![(1.0, next[iu])],
                vec![(-1.0, t[iu], xl[at(n, i, c)])],
                Sense::Eq,
                0.0,
            );
        }
        x.push(next);
    }
    let z0 = cont(m, "m_z0", 0.0, 1.0);
    let z1 = cont(m, "m_z1", 0.0, 1.0);
    let z2 = cont(m, "m_z2", -INF, 0.0);
    let z3 = cont(m, "m_z3", -INF, 0.0);
    let cor_m = m.var("m_Cor", VarKind::Continuous, -INF, 0.0);
    for i in 0..n as usize {
        m.add_general(format!("m_abs0_{i}"), GeneralKind::Abs, z0[i], vec![x[rounds + 1][i]]);
        m.add_general(format!("m_abs1_{i}"), GeneralKind::Abs, z1[i], vec![x[rounds][i]]);
        m.add_general(format!("m_log0_{i}"), GeneralKind::Log2, z2[i], vec![z0[i]]);
        m.add_general(format!("m_log1_{i}"), GeneralKind::Log2, z3[i], vec![z1[i]]);
    }
    let mut quad: Vec<(f64, usize, usize)> = (0..n as usize).map(|j| (-1.0, mask0[j], z2[j])).collect();
    quad.extend((0..n as usize).map(|j| (-1.0, mask1[j], z3[j])));
    m.add_quadratic("m_Cor", vec![(1.0, cor_m)], quad, Sense::Eq, 0.0);
    MiddlePart { cor_m }
}

pub fn build_diff_model(spec: &CipherSpec, rounds: usize) -> (ConstraintModel, DiffPart) {
    let mut m = ConstraintModel::new(format!("{}_diff_{rounds}", spec.name()));
    let part = add_diff_part(&mut m, spec, rounds);
    m.set_objective(ObjSense::Minimize, vec![(1.0, part.pro)]);
    (m, part)
}

pub fn build_lin_model(spec: &CipherSpec, rounds: usize) -> (ConstraintModel, LinPart) {
    let mut m = ConstraintModel::new(format!("{}_lin_{rounds}", spec.name()));
    let part = add_lin_part(&mut m, spec, rounds);
    m.set_objective(ObjSense::Minimize, vec![(1.0, part.cor_l)]);
    (m, part)
}

/// Stand-alone middle model; its difference and mask inputs are the binaries
/// `m_alpha_{1,0}_i` and `m_lambda_{0,1}_i`.
pub fn build_middle_model(spec: &CipherSpec, rounds: usize) -> (ConstraintModel, MiddlePart) {
    let n = spec.n;
    let mut m = ConstraintModel::new(format!("{}_middle_{rounds}", spec.name()));
    let left = m.binaries("m_alpha_1", n);
    let right = m.binaries("m_alpha_0", n);
    let mask0 = m.binaries("m_lambda_0", n);
    let mask1 = m.binaries("m_lambda_1", n);
    let part = add_middle_part(&mut m, spec, rounds, &left, &right, &mask0, &mask1);
    m.set_objective(ObjSense::Maximize, vec![(1.0, part.cor_m)]);
    (m, part)
}

/// All three parts joined, minimizing `Cor_e = Pro - Cor_m + 2 Cor_l`.
pub fn build_full_model(spec: &CipherSpec, config: RoundConfig) -> ConstraintModel {
    let mut m = ConstraintModel::new(format!("{}_full_{config}", spec.name()).replace(',', "_"));
    let d = add_diff_part(&mut m, spec, config.rd);
    let l = add_lin_part(&mut m, spec, config.rl);
    let (left, right) = d.output();
    let (left, right) = (left.to_vec(), right.to_vec());
    let (mask0, mask1) = l.input();
    let (mask0, mask1) = (mask0.to_vec(), mask1.to_vec());
    let mid = add_middle_part(&mut m, spec, config.rm, &left, &right, &mask0, &mask1);
    let cor_e = m.var("e_Cor", VarKind::Continuous, -INF, INF);
    m.add_linear(
        "e_Cor",
        vec![(1.0, cor_e), (-1.0, d.pro), (1.0, mid.cor_m), (-2.0, l.cor_l)],
        Sense::Eq,
        0.0,
    );
    m.set_objective(ObjSense::Minimize, vec![(1.0, cor_e)]);
    m
}
