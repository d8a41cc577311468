//! Line-oriented `key: value` files for trails and distinguishers.
//!
//! Keys always appear in the order written by [`TrailDocument::to_text`];
//! floats use the shortest representation that reads back exactly.

use std::fmt::Write as _;

use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::search::{self, Cell, Counting, DLDistinguisher, DLTrail, RoundConfig, TransformOptions};
use crate::word::{fmt_hex, parse_hex, Pair};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct TrailDocument {
    pub spec: CipherSpec,
    pub trail: DLTrail,
    pub distinguisher: Option<DLDistinguisher>,
}

fn hex_list(path: &[u64]) -> String {
    path.iter().map(|&x| fmt_hex(x)).collect::<Vec<_>>().join(",")
}

fn pow2(w: u32) -> String {
    format!("2^-{w}")
}

fn parse_pow2(s: &str) -> Result<u32> {
    s.strip_prefix("2^-")
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected a bound like 2^-16, got `{s}`")))
}

impl TrailDocument {
    pub fn new(spec: CipherSpec, trail: DLTrail) -> Self {
        TrailDocument { spec, trail, distinguisher: None }
    }

    pub fn to_text(&self) -> String {
        let t = &self.trail;
        let s = &self.spec;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}: {v}");
        };
        kv("format_version", FORMAT_VERSION.to_string());
        kv("cipher.name", s.name());
        kv("cipher.branch_width", s.n.to_string());
        kv("cipher.offsets", format!("{},{},{}", s.a, s.b, s.c));
        kv("config", t.config.to_string());
        kv("delta_in", t.delta_in.to_string());
        kv("delta_mid", t.delta_mid.to_string());
        kv("lambda_mid", t.lambda_mid.to_string());
        kv("lambda_out", t.lambda_out.to_string());
        kv("log2_p", t.log2_p.to_string());
        kv("log2_q", t.log2_q.to_string());
        kv("r_mid", format!("{}", t.r_mid));
        kv("cor_total", format!("{}", t.cor_total));
        if !t.diff_path.is_empty() {
            kv("diff_path", hex_list(&t.diff_path));
        }
        if !t.lin_path.is_empty() {
            kv("lin_path", hex_list(&t.lin_path));
        }
        if let Some(d) = &self.distinguisher {
            kv("distinguisher.p_bar", pow2(d.p_bar_weight));
            kv("distinguisher.q_bar", pow2(d.q_bar_weight));
            kv("distinguisher.counting", d.counting.to_string());
            kv("distinguisher.cor_sum", format!("{}", d.cor_sum));
            for c in &d.cells {
                kv(
                    "distinguisher.trail_counts",
                    format!("{} {} {} {}", c.diff_weight, c.lin_weight, c.trail_count, c.contribution),
                );
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: Vec<(String, String)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key: value`", i + 1)))?;
            fields.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |k: &str| -> Result<&str> {
            fields
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parse(format!("missing field `{k}`")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?.parse::<f64>().map_err(|_| Error::Parse(format!("field `{k}` is not a number")))
        };
        let int = |k: &str| -> Result<i32> {
            get(k)?.parse::<i32>().map_err(|_| Error::Parse(format!("field `{k}` is not an integer")))
        };
        let version: u32 = get("format_version")?
            .parse()
            .map_err(|_| Error::Parse("format_version is not an integer".into()))?;
        if version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {version}")));
        }
        let spec: CipherSpec = get("cipher.name")?.parse()?;
        let width: u32 = get("cipher.branch_width")?
            .parse()
            .map_err(|_| Error::Parse("cipher.branch_width is not an integer".into()))?;
        if width != spec.n || get("cipher.offsets")? != format!("{},{},{}", spec.a, spec.b, spec.c) {
            return Err(Error::Integrity(format!("cipher block does not describe {}", spec.name())));
        }
        let path = |k: &str| -> Result<Vec<u64>> {
            match fields.iter().find(|(key, _)| key == k) {
                None => Ok(Vec::new()),
                Some((_, v)) => v.split(',').map(|x| parse_hex(x.trim())).collect(),
            }
        };
        let trail = DLTrail {
            config: get("config")?.parse::<RoundConfig>()?,
            delta_in: get("delta_in")?.parse::<Pair>()?,
            delta_mid: get("delta_mid")?.parse::<Pair>()?,
            lambda_mid: get("lambda_mid")?.parse::<Pair>()?,
            lambda_out: get("lambda_out")?.parse::<Pair>()?,
            log2_p: int("log2_p")?,
            r_mid: num("r_mid")?,
            log2_q: int("log2_q")?,
            cor_total: num("cor_total")?,
            diff_path: path("diff_path")?,
            lin_path: path("lin_path")?,
        };
        let distinguisher = if fields.iter().any(|(k, _)| k.starts_with("distinguisher.")) {
            let cells = fields
                .iter()
                .filter(|(k, _)| k == "distinguisher.trail_counts")
                .map(|(_, v)| {
                    let p: Vec<&str> = v.split_whitespace().collect();
                    let bad = || Error::Parse(format!("malformed trail_counts `{v}`"));
                    if p.len() != 4 {
                        return Err(bad());
                    }
                    Ok(Cell {
                        diff_weight: p[0].parse().map_err(|_| bad())?,
                        lin_weight: p[1].parse().map_err(|_| bad())?,
                        trail_count: p[2].parse().map_err(|_| bad())?,
                        contribution: p[3].parse().map_err(|_| bad())?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(DLDistinguisher {
                config: trail.config,
                delta_in: trail.delta_in,
                lambda_out: trail.lambda_out,
                p_bar_weight: parse_pow2(get("distinguisher.p_bar")?)?,
                q_bar_weight: parse_pow2(get("distinguisher.q_bar")?)?,
                counting: get("distinguisher.counting")?.parse::<Counting>()?,
                cor_sum: num("distinguisher.cor_sum")?,
                cells,
            })
        } else {
            None
        };
        Ok(TrailDocument { spec, trail, distinguisher })
    }

    /// Re-derive every numeric field from the anchors and compare.
    pub fn reverify(&self) -> Result<()> {
        let t = &self.trail;
        let caps = ((-t.log2_p) as u32, (-t.log2_q) as u32);
        let fresh = search::evaluate(
            &self.spec,
            t.config,
            [t.delta_in, t.delta_mid, t.lambda_mid, t.lambda_out],
            caps.0,
            caps.1,
        )?;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        if fresh.log2_p != t.log2_p || fresh.log2_q != t.log2_q || !close(fresh.r_mid, t.r_mid) {
            return Err(Error::Integrity(format!(
                "trail components do not reproduce: got log2_p {} r_mid {} log2_q {}",
                fresh.log2_p, fresh.r_mid, fresh.log2_q
            )));
        }
        if !close(fresh.cor_total, t.cor_total) {
            return Err(Error::Integrity("cor_total does not match its components".into()));
        }
        if let Some(d) = &self.distinguisher {
            let again = search::transform(
                &self.spec,
                t,
                &TransformOptions { p_bar_weight: d.p_bar_weight, q_bar_weight: d.q_bar_weight, counting: d.counting },
            )?;
            let sum_ok = close(again.cor_sum, d.cor_sum);
            let cells_ok = again.cells.len() == d.cells.len()
                && again.cells.iter().zip(&d.cells).all(|(a, b)| {
                    a.diff_weight == b.diff_weight
                        && a.lin_weight == b.lin_weight
                        && a.trail_count == b.trail_count
                        && close(a.contribution, b.contribution)
                });
            if !sum_ok || !cells_ok {
                return Err(Error::Integrity("distinguisher does not reproduce".into()));
            }
        }
        Ok(())
    }
}
