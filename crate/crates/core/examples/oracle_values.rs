//! Weighted Hurwitz numbers straight from the tau function.
//!
//!     cargo run --release --example oracle_values

use hurwitz_tr::model::Model;
use hurwitz_tr::oracle::{hurwitz_number, hurwitz_numbers_all_genera};

fn main() -> hurwitz_tr::Result<()> {
    let m = Model::simple_hurwitz();
    for d in 1..=6 {
        println!("h_{{0;{d}}} = {}", hurwitz_number(&m, 0, &[d])?);
    }
    // one expansion serves every genus
    let all = hurwitz_numbers_all_genera(&m, 3, &[2])?;
    for (g, h) in all.iter().enumerate() {
        println!("h_{{{g};2}} = {h}");
    }
    let mono = Model::monotone_hurwitz();
    println!("monotone h_{{1;2,1}} = {}", hurwitz_number(&mono, 1, &[2, 1])?);
    Ok(())
}
