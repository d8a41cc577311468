//! Counts differential trails from an input difference and linear trails into
//! an output mask, grouped by weight.

use std::collections::BTreeMap;

use dltrail::diff::enumerate_diff_trails_from;
use dltrail::lin::enumerate_lin_trails_to;
use dltrail::{CipherSpec, Pair};

fn main() -> dltrail::Result<()> {
    let spec = CipherSpec::simon32();

    let diffs = enumerate_diff_trails_from(&spec, Pair::new(0x800, 0x2208), 5, 12)?;
    let mut by_weight: BTreeMap<u32, (usize, u64)> = BTreeMap::new();
    for e in &diffs {
        let slot = by_weight.entry(e.weight).or_default();
        slot.0 += 1;
        slot.1 += e.trails;
    }
    println!("5-round differential trails from (0x800,0x2208)");
    for (w, (ends, trails)) in by_weight {
        println!("  weight {w:>2}: {ends:>5} output differences, {trails:>6} trails");
    }

    let masks = enumerate_lin_trails_to(&spec, Pair::new(0x10, 0x45), 3, 6)?;
    println!("3-round linear trails into (0x10,0x45)");
    for e in masks.iter().take(8) {
        println!("  {}  weight {}  trails {}", e.mask, e.weight, e.trails);
    }
    println!("  {} entries in total", masks.len());
    Ok(())
}
