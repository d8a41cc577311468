//! Extended LP text: objective, rows (quadratic parts in brackets), bounds,
//! kind sections and general constraints, in that fixed order.
//!
//! Every non-binary variable gets an explicit bounds line, so a parsed model
//! re-emits byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{ConstraintModel, GeneralKind, ObjSense, Sense, VarKind};
use crate::error::{Error, Result};

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn term(out: &mut String, k: f64, body: &str) {
    let sign = if k < 0.0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {} {body}", num(k.abs()));
}

pub fn emit_model(model: &ConstraintModel) -> String {
    let name = |v: usize| model.vars[v].name.as_str();
    let mut s = String::new();
    let _ = writeln!(s, "\\ model {}", model.name);
    for c in &model.comments {
        let _ = writeln!(s, "\\ {c}");
    }
    let (sense, expr) = match &model.objective {
        Some((sense, e)) => (*sense, e.as_slice()),
        None => (ObjSense::Minimize, &[][..]),
    };
    s.push_str(match sense {
        ObjSense::Minimize => "Minimize\n",
        ObjSense::Maximize => "Maximize\n",
    });
    s.push_str(" obj:");
    for &(k, v) in expr {
        term(&mut s, k, name(v));
    }
    s.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(s, " {}:", c.name);
        for &(k, v) in &c.linear {
            term(&mut s, k, name(v));
        }
        if !c.quad.is_empty() {
            s.push_str(" + [");
            for &(k, u, w) in &c.quad {
                term(&mut s, k, &format!("{} * {}", name(u), name(w)));
            }
            s.push_str(" ]");
        }
        let _ = writeln!(s, " {} {}", c.sense.symbol(), num(c.rhs));
    }
    s.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| v.kind != VarKind::Binary) {
        if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
            let _ = writeln!(s, " {} free", v.name);
        } else {
            let _ = writeln!(s, " {} <= {} <= {}", num(v.lower), v.name, num(v.upper));
        }
    }
    for (title, kind) in [("Binaries", VarKind::Binary), ("Generals", VarKind::Integer)] {
        let _ = writeln!(s, "{title}");
        for v in model.vars.iter().filter(|v| v.kind == kind) {
            let _ = writeln!(s, " {}", v.name);
        }
    }
    s.push_str("General Constraints\n");
    for g in &model.generals {
        let args: Vec<&str> = g.args.iter().map(|&a| name(a)).collect();
        let f = match g.kind {
            GeneralKind::Abs => "ABS",
            GeneralKind::Log2 => "LOG_2",
            GeneralKind::And => "AND",
        };
        let _ = writeln!(s, " {}: {} = {f} ( {} )", g.name, name(g.out), args.join(" , "));
    }
    s.push_str("End\n");
    s
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Objective,
    Rows,
    Bounds,
    Binaries,
    Generals,
    GeneralConstraints,
    End,
}

struct RawRow {
    name: String,
    linear: Vec<(f64, String)>,
    quad: Vec<(f64, String, String)>,
    sense: Sense,
    rhs: f64,
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn parse_num(t: &str, line: usize) -> Result<f64> {
    t.parse::<f64>().map_err(|_| perr(line, format!("bad number `{t}`")))
}

/// Parse `[+|-] [coef] name` terms and an optional bracketed quadratic block.
fn parse_terms(
    tokens: &[&str],
    line: usize,
) -> Result<(Vec<(f64, String)>, Vec<(f64, String, String)>, usize)> {
    let mut lin = Vec::new();
    let mut quad = Vec::new();
    let mut i = 0;
    let mut in_quad = false;
    while i < tokens.len() {
        let t = tokens[i];
        if matches!(t, "<=" | ">=" | "=" | "=<" | "=>") {
            break;
        }
        if t == "[" {
            in_quad = true;
            i += 1;
            continue;
        }
        if t == "]" {
            in_quad = false;
            i += 1;
            continue;
        }
        let mut sign = 1.0;
        if t == "+" || t == "-" {
            sign = if t == "-" { -1.0 } else { 1.0 };
            i += 1;
        }
        let t = *tokens.get(i).ok_or_else(|| perr(line, "dangling sign"))?;
        if t == "[" {
            continue;
        }
        let (coef, next) = match t.parse::<f64>() {
            Ok(c) => (c, i + 1),
            Err(_) => (1.0, i),
        };
        let v = *tokens.get(next).ok_or_else(|| perr(line, "missing variable"))?;
        if in_quad {
            if tokens.get(next + 1) != Some(&"*") {
                return Err(perr(line, "expected `*` in quadratic term"));
            }
            let w = *tokens.get(next + 2).ok_or_else(|| perr(line, "missing factor"))?;
            quad.push((sign * coef, v.to_string(), w.to_string()));
            i = next + 3;
        } else {
            lin.push((sign * coef, v.to_string()));
            i = next + 1;
        }
    }
    Ok((lin, quad, i))
}

/// Read a model written by [`emit_model`] (or any file in the same dialect subset).
pub fn parse_model(text: &str) -> Result<ConstraintModel> {
    let mut name = String::new();
    let mut comments = Vec::new();
    let mut section: Option<Section> = None;
    let mut obj_sense = ObjSense::Minimize;
    let mut obj_terms: Vec<(f64, String)> = Vec::new();
    let mut rows: Vec<RawRow> = Vec::new();
    let mut bounds: Vec<(String, f64, f64)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut integers: Vec<String> = Vec::new();
    let mut generals: Vec<(String, GeneralKind, String, Vec<String>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('\\') {
            let c = c.trim();
            match c.strip_prefix("model ") {
                Some(n) if name.is_empty() => name = n.to_string(),
                _ => comments.push(c.to_string()),
            }
            continue;
        }
        let header = match line.to_ascii_lowercase().as_str() {
            "minimize" => {
                obj_sense = ObjSense::Minimize;
                Some(Section::Objective)
            }
            "maximize" => {
                obj_sense = ObjSense::Maximize;
                Some(Section::Objective)
            }
            "subject to" => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "binaries" => Some(Section::Binaries),
            "generals" => Some(Section::Generals),
            "general constraints" => Some(Section::GeneralConstraints),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(h) = header {
            section = Some(h);
            continue;
        }
        let (label, body) = match line.split_once(':') {
            Some((l, b)) => (l.trim().to_string(), b.trim()),
            None => (String::new(), line),
        };
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match section {
            Some(Section::Objective) => {
                let (lin, quad, _) = parse_terms(&tokens, ln)?;
                if !quad.is_empty() {
                    return Err(perr(ln, "quadratic objectives are not supported"));
                }
                obj_terms.extend(lin);
            }
            Some(Section::Rows) => {
                let (linear, quad, at) = parse_terms(&tokens, ln)?;
                let sense = match tokens.get(at) {
                    Some(&"<=") | Some(&"=<") => Sense::Le,
                    Some(&">=") | Some(&"=>") => Sense::Ge,
                    Some(&"=") => Sense::Eq,
                    _ => return Err(perr(ln, "missing comparison")),
                };
                let rhs = parse_num(tokens.get(at + 1).ok_or_else(|| perr(ln, "missing right-hand side"))?, ln)?;
                rows.push(RawRow { name: label, linear, quad, sense, rhs });
            }
            Some(Section::Bounds) => {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t.as_slice() {
                    [v, free] if free.eq_ignore_ascii_case("free") => {
                        bounds.push((v.to_string(), f64::NEG_INFINITY, f64::INFINITY))
                    }
                    [lo, "<=", v, "<=", hi] => bounds.push((v.to_string(), parse_num(lo, ln)?, parse_num(hi, ln)?)),
                    [v, "<=", hi] => bounds.push((v.to_string(), 0.0, parse_num(hi, ln)?)),
                    [v, ">=", lo] => bounds.push((v.to_string(), parse_num(lo, ln)?, f64::INFINITY)),
                    [v, "=", x] => {
                        let x = parse_num(x, ln)?;
                        bounds.push((v.to_string(), x, x))
                    }
                    _ => return Err(perr(ln, "unrecognised bound")),
                }
            }
            Some(Section::Binaries) => binaries.extend(line.split_whitespace().map(String::from)),
            Some(Section::Generals) => integers.extend(line.split_whitespace().map(String::from)),
            Some(Section::GeneralConstraints) => {
                // out = F ( a , b )
                let t = &tokens;
                if t.len() < 5 || t[1] != "=" || t[3] != "(" || t.last() != Some(&")") {
                    return Err(perr(ln, "malformed general constraint"));
                }
                let kind = match t[2] {
                    "ABS" => GeneralKind::Abs,
                    "LOG_2" => GeneralKind::Log2,
                    "AND" => GeneralKind::And,
                    f => return Err(perr(ln, format!("unsupported function `{f}`"))),
                };
                let args: Vec<String> =
                    t[4..t.len() - 1].iter().filter(|x| **x != ",").map(|x| x.to_string()).collect();
                generals.push((label, kind, t[0].to_string(), args));
            }
            Some(Section::End) => return Err(perr(ln, "content after End")),
            None => return Err(perr(ln, "content before the objective section")),
        }
    }
    if section != Some(Section::End) {
        return Err(Error::Parse("missing End".into()));
    }
    let mut m = ConstraintModel::new(name);
    m.comments = comments;
    let int_set: std::collections::HashSet<&String> = integers.iter().collect();
    let bound_map: HashMap<&String, (f64, f64)> = bounds.iter().map(|(v, l, h)| (v, (*l, *h))).collect();
    for b in &binaries {
        m.binary(b.clone());
    }
    for (v, lo, hi) in &bounds {
        let kind = if int_set.contains(v) { VarKind::Integer } else { VarKind::Continuous };
        m.var(v.clone(), kind, *lo, *hi);
    }
    for v in &integers {
        if !bound_map.contains_key(v) {
            m.var(v.clone(), VarKind::Integer, 0.0, f64::INFINITY);
        }
    }
    let resolve = |m: &mut ConstraintModel, v: &str| -> usize {
        match m.id(v) {
            Some(id) => id,
            None => m.var(v.to_string(), VarKind::Continuous, 0.0, f64::INFINITY),
        }
    };
    let obj: Vec<(f64, usize)> = obj_terms.iter().map(|(k, v)| (*k, resolve(&mut m, v))).collect();
    m.set_objective(obj_sense, obj);
    for r in rows {
        let linear = r.linear.iter().map(|(k, v)| (*k, resolve(&mut m, v))).collect();
        let quad = r.quad.iter().map(|(k, u, w)| (*k, resolve(&mut m, u), resolve(&mut m, w))).collect();
        m.add_quadratic(r.name, linear, quad, r.sense, r.rhs);
    }
    for (name, kind, out, args) in generals {
        let out = resolve(&mut m, &out);
        let args = args.iter().map(|a| resolve(&mut m, a)).collect();
        m.add_general(name, kind, out, args);
    }
    Ok(m)
}
