use super::{Assignment, ConstraintModel, GeneralKind, Sense, VarKind};
use crate::error::{Error, Result};

const TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub satisfied: bool,
    /// Names of violated rows, prefixed with `bound:` for variable bounds and kinds.
    pub violated: Vec<String>,
    /// `None` when the objective selects a logarithm of zero; such points are excluded.
    pub objective: Option<f64>,
}

/// `x * y` with `0 * inf = 0`, matching conditional products over selected bits.
fn product(x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        0.0
    } else {
        x * y
    }
}

fn row_holds(terms: impl Iterator<Item = f64>, sense: Sense, rhs: f64) -> bool {
    let (mut sum, mut pos, mut neg) = (0.0, false, false);
    for t in terms {
        if t == f64::INFINITY {
            pos = true;
        } else if t == f64::NEG_INFINITY {
            neg = true;
        } else {
            sum += t;
        }
    }
    match (pos, neg) {
        // Both sides diverge: only reachable through logarithms of zero.
        (true, true) => true,
        (true, false) => sense == Sense::Ge,
        (false, true) => sense == Sense::Le,
        (false, false) => match sense {
            Sense::Le => sum <= rhs + TOL,
            Sense::Ge => sum >= rhs - TOL,
            Sense::Eq => (sum - rhs).abs() <= TOL,
        },
    }
}

/// Evaluate every bound, kind, row and general constraint of `model` at `assignment`.
pub fn check_assignment(model: &ConstraintModel, assignment: &Assignment) -> Result<CheckReport> {
    let mut val = Vec::with_capacity(model.vars.len());
    for v in &model.vars {
        let x = *assignment.get(&v.name).ok_or_else(|| Error::IncompleteAssignment(v.name.clone()))?;
        val.push(x);
    }
    let mut violated = Vec::new();
    for (v, &x) in model.vars.iter().zip(&val) {
        let in_bounds = x >= v.lower - TOL && x <= v.upper + TOL;
        let kind_ok = match v.kind {
            VarKind::Binary => x == 0.0 || x == 1.0,
            VarKind::Integer => x.is_finite() && x.fract() == 0.0,
            VarKind::Continuous => !x.is_nan(),
        };
        if !in_bounds || !kind_ok {
            violated.push(format!("bound:{}", v.name));
        }
    }
    for c in &model.constraints {
        let lin = c.linear.iter().map(|&(k, v)| product(k, val[v]));
        let quad = c.quad.iter().map(|&(k, u, w)| product(k, product(val[u], val[w])));
        if !row_holds(lin.chain(quad), c.sense, c.rhs) {
            violated.push(c.name.clone());
        }
    }
    for g in &model.generals {
        let out = val[g.out];
        let ok = match g.kind {
            GeneralKind::Abs => out == val[g.args[0]].abs(),
            GeneralKind::Log2 => {
                let u = val[g.args[0]];
                if u == 0.0 {
                    out == f64::NEG_INFINITY
                } else {
                    u > 0.0 && (out - u.log2()).abs() <= TOL
                }
            }
            GeneralKind::And => {
                let all = g.args.iter().all(|&a| val[a] == 1.0);
                let bin = g.args.iter().all(|&a| val[a] == 0.0 || val[a] == 1.0);
                bin && out == if all { 1.0 } else { 0.0 }
            }
        };
        if !ok {
            violated.push(g.name.clone());
        }
    }
    let objective = match &model.objective {
        None => Some(0.0),
        Some((_, expr)) => {
            let terms: Vec<f64> = expr.iter().map(|&(k, v)| product(k, val[v])).collect();
            terms.iter().all(|t| t.is_finite()).then(|| terms.iter().sum())
        }
    };
    Ok(CheckReport { satisfied: violated.is_empty(), violated, objective })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::cipher::CipherSpec;
    use crate::diff;
    use crate::lin;
    use crate::middle::middle_correlation;
    use crate::search::RoundConfig;
    use crate::word::Pair;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_model_accepts_empty_assignment() {
        let r = check_assignment(&ConstraintModel::new("e"), &Assignment::new()).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn missing_value_is_an_error() {
        let mut m = ConstraintModel::new("x");
        m.binary("x");
        assert!(matches!(check_assignment(&m, &Assignment::new()), Err(crate::Error::IncompleteAssignment(_))));
    }

    #[test]
    fn best_diff_trail_satisfies_with_pro_8() {
        let s = CipherSpec::simon32();
        let t = diff::search_best_diff_trail(&s, 5, 30, Some(Pair::new(0x8, 0x22))).unwrap();
        let (m, _) = build_diff_model(&s, 5);
        let mut a = diff_assignment(&s, &t.alphas);
        let r = check_assignment(&m, &a).unwrap();
        assert!(r.satisfied, "{:?}", r.violated);
        assert_eq!(r.objective, Some(8.0));
        // Flip one bit of an inner difference.
        let key = "d_alpha_3_0".to_string();
        let v = a[&key];
        a.insert(key, 1.0 - v);
        assert!(!check_assignment(&m, &a).unwrap().satisfied);
    }

    #[test]
    fn one_round_diff_model_agrees_with_rule() {
        let s = CipherSpec::simon32();
        let (m, _) = build_diff_model(&s, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut valid = 0;
        for _ in 0..300 {
            let x: u64 = rng.gen::<u64>() & 0xffff >> rng.gen_range(4..14);
            let x0: u64 = rng.gen::<u64>() & 0xffff;
            let beta = if rng.gen_bool(0.5) {
                let set = diff::output_set(&s, x);
                let k = rng.gen_range(0..set.len().min(1 << 20));
                { let b = set.iter().nth(k as usize).unwrap(); b }
            } else {
                rng.gen::<u64>() & 0xffff
            };
            let alphas = [x0, x, beta ^ x0];
            let r = check_assignment(&m, &diff_assignment(&s, &alphas)).unwrap();
            let w = diff::diff_round_weight(&s, x, beta);
            let nontrivial = x0 | x != 0;
            assert_eq!(r.satisfied, w.is_some() && nontrivial, "{x:#x} {beta:#x}");
            if let Some(w) = w.filter(|_| nontrivial) {
                assert_eq!(r.objective, Some(w as f64));
                valid += 1;
            }
        }
        assert!(valid > 50);
    }

    #[test]
    fn one_round_lin_model_agrees_with_rule() {
        for s in [CipherSpec::simon32(), CipherSpec::simeck32()] {
            let (m, _) = build_lin_model(&s, 1);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut valid = 0;
            for _ in 0..200 {
                let l1: u64 = rng.gen::<u64>() & 0xffff >> rng.gen_range(2..14);
                let l2: u64 = rng.gen::<u64>() & 0xffff;
                let l0 = if rng.gen_bool(0.6) {
                    let set = lin::step_set(&s, l1);
                    let k = rng.gen_range(0..set.len().min(1 << 20));
                    { let b = set.iter().nth(k as usize).unwrap(); b ^ l2 }
                } else {
                    rng.gen::<u64>() & 0xffff
                };
                let r = check_assignment(&m, &lin_assignment(&s, &[l0, l1, l2])).unwrap();
                let w = lin::lin_round_weight(&s, l0, l1, l2);
                let nontrivial = l0 | l1 != 0;
                assert_eq!(r.satisfied, w.is_some() && nontrivial, "{l0:#x} {l1:#x} {l2:#x} {:?}", r.violated);
                if let Some(w) = w.filter(|_| nontrivial) {
                    assert_eq!(r.objective, Some(w as f64));
                    valid += 1;
                }
            }
            assert!(valid > 50);
        }
    }

    #[test]
    fn zero_masks_give_zero_weight_rows() {
        let s = CipherSpec::simon32();
        let a = lin_assignment(&s, &[0, 0, 0, 0]);
        let (m, _) = build_lin_model(&s, 2);
        let r = check_assignment(&m, &a).unwrap();
        assert_eq!(r.violated, vec!["l_nontrivial".to_string()]);
        assert_eq!(a["l_Cor"], 0.0);
    }

    #[test]
    fn middle_model_reproduces_fixture() {
        let s = CipherSpec::simon32();
        let (delta, mask) = (Pair::new(0x22, 0x8), Pair::new(0x100, 0));
        let (m, _) = build_middle_model(&s, 5);
        let r = check_assignment(&m, &middle_assignment(&s, delta, 5, mask, true)).unwrap();
        assert!(r.satisfied, "{:?}", r.violated);
        let want = middle_correlation(&s, delta, 5, mask).abs().log2();
        assert!((r.objective.unwrap() - want).abs() < 1e-9);
        assert!((r.objective.unwrap() + 2.73).abs() < 0.01);
    }

    #[test]
    fn zero_middle_correlation_is_excluded() {
        let s = CipherSpec::simon32();
        let (m, _) = build_middle_model(&s, 2);
        // After one round of (0x1, 0) bit 8 of the left branch is uniform; it is the right branch one round later.
        let delta = Pair::new(0x1, 0);
        let st = crate::middle::ContState::from_difference(&s, delta).propagate(&s, 2);
        assert_eq!(st.right[8], 0.0);
        let r = check_assignment(&m, &middle_assignment(&s, delta, 2, Pair::new(0, 1 << 8), true)).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.objective, None);
    }

    #[test]
    fn full_model_accepts_searched_trail() {
        let s = CipherSpec::simon32();
        let cfg = RoundConfig::new(5, 2, 4);
        let t = crate::search::dfs_search(&s, cfg, &Default::default()).unwrap();
        let m = build_full_model(&s, cfg);
        let r = check_assignment(&m, &trail_assignment(&s, &t).unwrap()).unwrap();
        assert!(r.satisfied, "{:?}", r.violated);
        assert!((r.objective.unwrap() - 14.0).abs() < 1e-9);
    }
}
