//! Topological recursion on the monotone curve, in exact arithmetic, and
//! the resulting `h_{g;k}` next to the oracle.
//!
//!     cargo run --release --example topological_recursion

use hurwitz_tr::model::{Curve, Model};
use hurwitz_tr::oracle::hurwitz_number;
use hurwitz_tr::trengine::{Recursion, TrEngine};
use hurwitz_tr::verify::cross::tr_value;
use hurwitz_tr::Q;

fn main() -> hurwitz_tr::Result<()> {
    let m = Model::monotone_hurwitz();
    let curve = Curve::<Q>::build(&m)?;
    println!("critical points: {:?}", curve.crit.iter().map(|c| c.p.to_string()).collect::<Vec<_>>());
    let mut e = TrEngine::new(curve, Recursion::Tr)?;
    let om = e.omega(1, 1)?;
    println!("omega_{{1,1}} in the pole basis:");
    for (key, c) in &om.terms {
        println!("  {key:?}: {c}");
    }
    for (g, k) in [(0, vec![1, 1, 2]), (1, vec![3]), (1, vec![1, 2]), (2, vec![2])] {
        let t = tr_value(&mut e, g, &k)?;
        let o = hurwitz_number(&m, g, &k)?;
        println!("h_{{{g};{k:?}}}: recursion {t}, oracle {o}");
    }
    Ok(())
}
