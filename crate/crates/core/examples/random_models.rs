//! Seeded random Family I and Family II instances and the field each one
//! runs in.
//!
//!     cargo run --release --example random_models

use hurwitz_tr::model::{random, Curve};
use hurwitz_tr::verify::suite::Mode;
use hurwitz_tr::C;

fn main() -> hurwitz_tr::Result<()> {
    for seed in 0..4 {
        for m in [random::family_i(seed), random::family_ii(seed)] {
            let c = Curve::<C>::build(&m)?;
            let pts: Vec<String> = c.crit.iter().map(|p| p.p.to_string_digits(8)).collect();
            println!("seed {seed}: {} [{:?}] critical points {pts:?}", m.fingerprint(), Mode::auto(&m));
        }
    }
    Ok(())
}
