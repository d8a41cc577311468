//! Command-line front end. Every subcommand prints a table to stdout and can
//! write a structured file with `--out`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cipher::CipherSpec;
use crate::diff::enumerate_diff_trails_from;
use crate::document::TrailDocument;
use crate::error::{Error, Result};
use crate::lin::enumerate_lin_trails_to;
use crate::middle::{log2_abs, ContState};
use crate::model::{build_diff_model, build_full_model, build_lin_model, build_middle_model, emit_model};
use crate::search::{
    dfs_search, lfs_search, samples_needed, theoretical_only, transform, Counting, DLTrail, RoundConfig,
    SearchOptions, TransformOptions,
};
use crate::verify::{csv_row, estimate, ExperimentPlan, KeyMode, CSV_HEADER};
use crate::word::Pair;

#[derive(Debug, Parser)]
#[command(name = "dltrail", version, about = "Differential-linear trails for Simon and Simeck")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "DLTRAIL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a differential-linear trail.
    Search(SearchArgs),
    /// Cluster trails around a seed trail into a distinguisher.
    Transform(TransformArgs),
    /// Estimate a correlation experimentally.
    Verify(VerifyArgs),
    /// Write a constraint model in LP format.
    EmitModel(EmitArgs),
    /// List output differences reachable from an input difference.
    EnumerateDiff(EnumDiffArgs),
    /// List input masks reaching an output mask.
    EnumerateLin(EnumLinArgs),
    /// Propagate a difference through middle rounds.
    Middle(MiddleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Strategy {
    Dfs,
    Lfs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Part {
    Diff,
    Middle,
    Lin,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CountingArg {
    Distinct,
    PerTrail,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Cipher name such as simon32, simon48/96, simeck64.
    #[arg(long)]
    cipher: CipherSpec,
    /// Rounds as R_d,R_m,R_l.
    #[arg(long)]
    config: RoundConfig,
    #[arg(long, value_enum, default_value = "dfs")]
    strategy: Strategy,
    /// Absolute weight cap on the part searched second.
    #[arg(long)]
    cap: Option<u32>,
    /// Weight allowance above the optimum of the part searched second.
    #[arg(long, default_value_t = 6)]
    slack: u32,
    /// Write the trail document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    /// Trail document used as the seed.
    #[arg(long)]
    trail: PathBuf,
    /// Differential bound as a weight: 16 means 2^-16.
    #[arg(long)]
    pbar: u32,
    /// Linear correlation bound as a weight: 8 means 2^-8.
    #[arg(long)]
    qbar: u32,
    #[arg(long, value_enum, default_value = "distinct")]
    counting: CountingArg,
    /// Write the trail document with its distinguisher block here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the (diff weight, lin weight) histogram as CSV here.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Trail document supplying cipher, rounds, delta_in and lambda_out.
    #[arg(long, conflicts_with_all = ["cipher", "delta", "lambda", "rounds"])]
    trail: Option<PathBuf>,
    #[arg(long, required_unless_present = "trail")]
    cipher: Option<CipherSpec>,
    #[arg(long, required_unless_present = "trail")]
    delta: Option<Pair>,
    #[arg(long, required_unless_present = "trail")]
    lambda: Option<Pair>,
    #[arg(long, required_unless_present = "trail")]
    rounds: Option<usize>,
    /// Samples per key, as an integer or 2^k.
    #[arg(long, default_value = "2^22", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 20)]
    keys: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use independent random round keys instead of the key schedule.
    #[arg(long)]
    independent_keys: bool,
    /// Write a CSV row here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmitArgs {
    #[arg(long)]
    cipher: CipherSpec,
    #[arg(long)]
    config: RoundConfig,
    #[arg(long, value_enum)]
    part: Part,
    /// LP file to write; a JSON stats file is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EnumDiffArgs {
    #[arg(long)]
    cipher: CipherSpec,
    #[arg(long)]
    delta: Pair,
    #[arg(long)]
    rounds: usize,
    /// Largest trail weight kept.
    #[arg(long)]
    max_weight: u32,
    /// Write `delta,weight,trails` CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EnumLinArgs {
    #[arg(long)]
    cipher: CipherSpec,
    /// Output mask the trails end in.
    #[arg(long)]
    lambda: Pair,
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    max_weight: u32,
    /// Write `mask,weight,trails` CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MiddleArgs {
    #[arg(long)]
    cipher: CipherSpec,
    #[arg(long)]
    delta: Pair,
    #[arg(long)]
    rounds: usize,
    /// Output mask whose correlation is reported.
    #[arg(long)]
    lambda: Option<Pair>,
    /// Write `branch,bit,value` CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let bad = || format!("expected an integer or 2^k, got `{s}`");
    match s.strip_prefix("2^") {
        Some(k) => {
            let k: u32 = k.parse().map_err(|_| bad())?;
            1u64.checked_shl(k).filter(|_| k < 64).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(cli.command, &mut buf));
                let _ = out.write_all(&buf);
                r
            }
            Err(e) => Err(Error::Config(format!("--threads: {e}"))),
        },
        None => dispatch(cli.command, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Config(_) | Error::Parse(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Search(a) => search_cmd(a, out),
        Command::Transform(a) => transform_cmd(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::EmitModel(a) => emit_cmd(a, out),
        Command::EnumerateDiff(a) => enum_diff_cmd(a, out),
        Command::EnumerateLin(a) => enum_lin_cmd(a, out),
        Command::Middle(a) => middle_cmd(a, out),
    }
}

fn load(path: &PathBuf) -> Result<TrailDocument> {
    TrailDocument::parse(&fs::read_to_string(path)?)
}

fn print_trail(out: &mut dyn Write, spec: &CipherSpec, t: &DLTrail) -> Result<()> {
    writeln!(out, "cipher        {}", spec.name())?;
    writeln!(out, "config        {}", t.config)?;
    writeln!(out, "delta_in      {}", t.delta_in)?;
    writeln!(out, "delta_mid     {}", t.delta_mid)?;
    writeln!(out, "lambda_mid    {}", t.lambda_mid)?;
    writeln!(out, "lambda_out    {}", t.lambda_out)?;
    writeln!(out, "log2 p        {}", t.log2_p)?;
    writeln!(out, "log2 |r|      {:.2}", log2_abs(t.r_mid))?;
    writeln!(out, "log2 q        {}", t.log2_q)?;
    writeln!(out, "log2 |cor|    {:.2}", t.log2_cor())?;
    if t.cor_total != 0.0 {
        let data = samples_needed(t.cor_total, 1.0)?;
        let mark = if theoretical_only(data, spec) { "  (theoretical only)" } else { "" };
        writeln!(out, "log2 data     {:.2}{mark}", data.log2())?;
    }
    Ok(())
}

fn search_cmd(a: SearchArgs, out: &mut dyn Write) -> Result<()> {
    let opts = SearchOptions { second_cap: a.cap, second_slack: a.slack, ..Default::default() };
    let trail = match a.strategy {
        Strategy::Dfs => dfs_search(&a.cipher, a.config, &opts)?,
        Strategy::Lfs => lfs_search(&a.cipher, a.config, &opts)?,
    };
    print_trail(out, &a.cipher, &trail)?;
    if let Some(p) = a.out {
        fs::write(p, TrailDocument::new(a.cipher, trail).to_text())?;
    }
    Ok(())
}

fn transform_cmd(a: TransformArgs, out: &mut dyn Write) -> Result<()> {
    let mut doc = load(&a.trail)?;
    let counting = match a.counting {
        CountingArg::Distinct => Counting::DistinctEndpoint,
        CountingArg::PerTrail => Counting::PerTrail,
    };
    let opts = TransformOptions { p_bar_weight: a.pbar, q_bar_weight: a.qbar, counting };
    let d = transform(&doc.spec, &doc.trail, &opts)?;
    print_trail(out, &doc.spec, &doc.trail)?;
    writeln!(out, "p_bar         2^-{}", d.p_bar_weight)?;
    writeln!(out, "q_bar         2^-{}", d.q_bar_weight)?;
    writeln!(out, "counting      {}", d.counting)?;
    writeln!(out, "cells         {}", d.cells.len())?;
    writeln!(out, "trails        {}", d.cells.iter().map(|c| c.trail_count).sum::<u64>())?;
    writeln!(out, "log2 |sum|    {:.2}", d.log2_cor())?;
    if let Some(p) = a.histogram {
        fs::write(p, d.histogram_csv())?;
    }
    doc.distinguisher = Some(d);
    if let Some(p) = a.out {
        fs::write(p, doc.to_text())?;
    }
    Ok(())
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let (spec, delta_in, lambda_out, rounds) = match &a.trail {
        Some(path) => {
            let doc = load(path)?;
            (doc.spec, doc.trail.delta_in, doc.trail.lambda_out, doc.trail.config.total())
        }
        // clap enforces presence when --trail is absent.
        None => (a.cipher.unwrap(), a.delta.unwrap(), a.lambda.unwrap(), a.rounds.unwrap()),
    };
    let plan = ExperimentPlan {
        spec,
        delta_in,
        lambda_out,
        rounds,
        samples: a.samples,
        keys: a.keys,
        key_mode: if a.independent_keys { KeyMode::IndependentRoundKeys } else { KeyMode::RealSchedule },
        seed: a.seed,
    };
    let r = estimate(&plan)?;
    writeln!(out, "cipher        {}", spec.name())?;
    writeln!(out, "rounds        {rounds}")?;
    writeln!(out, "delta_in      {delta_in}")?;
    writeln!(out, "lambda_out    {lambda_out}")?;
    writeln!(out, "samples       {} x {} keys", plan.samples, plan.keys)?;
    writeln!(out, "mean |cor|    {:.6e}", r.mean_abs)?;
    writeln!(out, "log2 |cor|    {:.2}", r.log2)?;
    writeln!(out, "stderr        {:.3e}", r.stderr)?;
    if let Some(p) = a.out {
        fs::write(p, format!("{CSV_HEADER}\n{}\n", csv_row(&plan, &r)))?;
    }
    Ok(())
}

fn emit_cmd(a: EmitArgs, out: &mut dyn Write) -> Result<()> {
    let (s, c) = (&a.cipher, a.config);
    let model = match a.part {
        Part::Diff => build_diff_model(s, c.rd).0,
        Part::Middle => build_middle_model(s, c.rm).0,
        Part::Lin => build_lin_model(s, c.rl).0,
        Part::Full => build_full_model(s, c),
    };
    let stats = model.stats();
    fs::write(&a.out, emit_model(&model))?;
    fs::write(a.out.with_extension("json"), stats.to_json() + "\n")?;
    writeln!(out, "model         {}", model.name)?;
    writeln!(out, "variables     {}", stats.variables)?;
    writeln!(out, "constraints   {}", stats.constraints())?;
    writeln!(out, "  linear      {}", stats.linear)?;
    writeln!(out, "  quadratic   {}", stats.quadratic)?;
    writeln!(out, "  general     {}", stats.general)?;
    writeln!(out, "written       {}", a.out.display())?;
    Ok(())
}

fn enum_diff_cmd(a: EnumDiffArgs, out: &mut dyn Write) -> Result<()> {
    let list = enumerate_diff_trails_from(&a.cipher, a.delta, a.rounds, a.max_weight)?;
    let rows: Vec<(Pair, u32, u64)> = list.iter().map(|e| (e.delta, e.weight, e.trails)).collect();
    write_enumeration(out, "delta", &rows, a.out)
}

fn enum_lin_cmd(a: EnumLinArgs, out: &mut dyn Write) -> Result<()> {
    let list = enumerate_lin_trails_to(&a.cipher, a.lambda, a.rounds, a.max_weight)?;
    let rows: Vec<(Pair, u32, u64)> = list.iter().map(|e| (e.mask, e.weight, e.trails)).collect();
    write_enumeration(out, "mask", &rows, a.out)
}

fn write_enumeration(out: &mut dyn Write, label: &str, rows: &[(Pair, u32, u64)], file: Option<PathBuf>) -> Result<()> {
    writeln!(out, "weight  endpoints  trails")?;
    let mut w = 0;
    while let Some(first) = rows.iter().find(|r| r.1 >= w) {
        w = first.1;
        let at: Vec<_> = rows.iter().filter(|r| r.1 == w).collect();
        writeln!(out, "{w:>6}  {:>9}  {}", at.len(), at.iter().map(|r| r.2).sum::<u64>())?;
        w += 1;
    }
    if let Some(p) = file {
        let mut csv = format!("{label},weight,trails\n");
        for (x, w, t) in rows {
            csv.push_str(&format!("\"{x}\",{w},{t}\n"));
        }
        fs::write(p, csv)?;
    }
    Ok(())
}

fn middle_cmd(a: MiddleArgs, out: &mut dyn Write) -> Result<()> {
    let s = &a.cipher;
    let st = ContState::from_difference(s, a.delta).propagate(s, a.rounds);
    writeln!(out, "bit   left      right")?;
    for i in (0..s.n as usize).rev() {
        writeln!(out, "{i:>3}  {:>8.4}  {:>8.4}", st.left[i], st.right[i])?;
    }
    if let Some(mask) = a.lambda {
        let c = st.correlation(mask);
        writeln!(out, "correlation   {c:.6}")?;
        writeln!(out, "log2 |r|      {:.2}", log2_abs(c))?;
    }
    if let Some(p) = a.out {
        let mut csv = String::from("branch,bit,value\n");
        for (name, v) in [("left", &st.left), ("right", &st.right)] {
            for (i, x) in v.iter().enumerate() {
                csv.push_str(&format!("{name},{i},{x}\n"));
            }
        }
        fs::write(p, csv)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("dltrail").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn counts_accept_powers() {
        assert_eq!(parse_count("2^22"), Ok(1 << 22));
        assert_eq!(parse_count("1000"), Ok(1000));
        assert!(parse_count("2^64").is_err());
        assert!(parse_count("lots").is_err());
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = call(&["middle", "--cipher", "simon32", "--delta", "(0x1,0x0)", "--rounds", "1", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn bad_value_names_flag() {
        let (code, _, err) = call(&["middle", "--cipher", "simon31", "--delta", "(0x1,0x0)", "--rounds", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--cipher"));
    }

    #[test]
    fn search_prints_fixture() {
        let (code, out, _) = call(&["search", "--cipher", "simon32", "--config", "5,2,4", "--strategy", "dfs"]);
        assert_eq!(code, 0);
        assert!(out.contains("log2 |cor|    -14.00"), "{out}");
    }

    #[test]
    fn unreachable_cap_is_not_found() {
        let (code, _, err) =
            call(&["search", "--cipher", "simon32", "--config", "3,1,3", "--strategy", "dfs", "--cap", "0"]);
        assert_eq!(code, 1, "{err}");
    }

    #[test]
    fn middle_reports_correlation() {
        let (code, out, _) = call(&[
            "middle", "--cipher", "simon32", "--delta", "(0x22,0x8)", "--rounds", "5", "--lambda", "(0x100,0x0)",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("log2 |r|      -2.73"), "{out}");
    }
}
