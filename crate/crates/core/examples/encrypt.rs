//! Encrypts the published test vectors and prints a round-by-round state.

use dltrail::{CipherSpec, KeyMaterial};

fn main() -> dltrail::Result<()> {
    let master = vec![0x0100, 0x0908, 0x1110, 0x1918];
    for spec in [CipherSpec::simon32(), CipherSpec::simeck32()] {
        let keys = spec.key_schedule(&KeyMaterial::RealSchedule(master.clone()), 32)?;
        let (l, r) = spec.encrypt((0x6565, 0x6877), &keys, 32)?;
        println!("{:<9} 6565 6877 -> {l:04x} {r:04x}", spec.name());
    }

    let spec = CipherSpec::simon32();
    let keys = spec.key_schedule(&KeyMaterial::RealSchedule(master), 4)?;
    let mut state = (0x6565, 0x6877);
    for (i, &k) in keys.iter().enumerate() {
        state = spec.round(state, k);
        println!("round {:>2}  {:04x} {:04x}", i + 1, state.0, state.1);
    }
    Ok(())
}
