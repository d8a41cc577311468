//! Clusters every trail around a seed into a distinguisher and prints the
//! per-weight histogram.

use dltrail::search::{evaluate, transform, Counting, RoundConfig, TransformOptions};
use dltrail::{CipherSpec, Pair};

fn main() -> dltrail::Result<()> {
    let spec = CipherSpec::simon32();
    let seed = evaluate(
        &spec,
        RoundConfig::new(5, 5, 3),
        [Pair::new(0x800, 0x2208), Pair::new(0x2200, 0x800), Pair::new(0x0, 0x100), Pair::new(0x10, 0x45)],
        8,
        4,
    )?;
    println!("seed trail        log2|cor| {:.3}", seed.log2_cor());

    for counting in [Counting::DistinctEndpoint, Counting::PerTrail] {
        let opts = TransformOptions { p_bar_weight: 16, q_bar_weight: 8, counting };
        let d = transform(&spec, &seed, &opts)?;
        println!("{:<17} log2|cor| {:.3} from {} cells", counting.to_string(), d.log2_cor(), d.cells.len());
        if counting == Counting::DistinctEndpoint {
            print!("{}", d.histogram_csv());
        }
    }
    Ok(())
}
