//! Builds the constraint model for an 11-round Simon32 trail, writes it in LP
//! format, and checks a known trail against it.

use dltrail::model::{build_full_model, check_assignment, emit_model, parse_model, trail_assignment};
use dltrail::search::{evaluate, RoundConfig};
use dltrail::{CipherSpec, Pair};

fn main() -> dltrail::Result<()> {
    let spec = CipherSpec::simon32();
    let config = RoundConfig::new(5, 2, 4);
    let model = build_full_model(&spec, config);
    let stats = model.stats();
    println!("variables {}  constraints {}", stats.variables, stats.constraints());

    let text = emit_model(&model);
    let back = parse_model(&text)?;
    println!("LP text {} bytes, reparsed with {} variables", text.len(), back.stats().variables);
    for line in text.lines().take(6) {
        println!("  {line}");
    }

    let trail = evaluate(
        &spec,
        config,
        [Pair::new(0x8, 0x22), Pair::new(0x22, 0x8), Pair::new(0x44, 0x10), Pair::new(0x40, 0x10)],
        8,
        3,
    )?;
    let report = check_assignment(&model, &trail_assignment(&spec, &trail)?)?;
    println!(
        "trail log2|cor| {:.2}: satisfied {}, objective {:?}",
        trail.log2_cor(),
        report.satisfied,
        report.objective
    );
    Ok(())
}
