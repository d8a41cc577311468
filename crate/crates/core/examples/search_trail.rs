//! Finds an 11-round differential-linear trail for Simon32 with both heuristics
//! and prints the winner as a trail document.

use std::time::Instant;

use dltrail::document::TrailDocument;
use dltrail::search::{dfs_search, lfs_search, RoundConfig, SearchOptions};
use dltrail::CipherSpec;

fn main() -> dltrail::Result<()> {
    let spec = CipherSpec::simon32();
    let config = RoundConfig::new(5, 2, 4);
    let opts = SearchOptions::default();

    let t = Instant::now();
    let dfs = dfs_search(&spec, config, &opts)?;
    println!("dfs  log2|cor| {:7.3}  ({:?})", dfs.log2_cor(), t.elapsed());
    let t = Instant::now();
    let lfs = lfs_search(&spec, config, &opts)?;
    println!("lfs  log2|cor| {:7.3}  ({:?})", lfs.log2_cor(), t.elapsed());

    let best = if lfs.log2_cor() > dfs.log2_cor() { lfs } else { dfs };
    let doc = TrailDocument::new(spec, best);
    doc.reverify()?;
    print!("\n{}", doc.to_text());
    Ok(())
}
