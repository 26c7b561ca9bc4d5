//! The `hbar`-coefficients of the deformation operator and their
//! falling-factorial divisibility.
//!
//!     cargo run --release --example divisibility_lemmas

use hurwitz_tr::verify::lemmas::{check_cuz, check_cvy, cvy};
use hurwitz_tr::Q;

fn main() {
    for (k, q) in cvy(3).iter().enumerate() {
        println!("q_{}(v) = {q:?}", 2 * k);
    }
    for k in 1..=3 {
        println!("{}", check_cvy(k).1);
    }
    for a in [Q::int(2), Q::new(-1, 3)] {
        println!("{}", check_cuz(2, &a).1);
    }
}
