//! `W_{g,n}` as a Taylor series in the `z_i`, and `h_{g;k}` read off its
//! `X`-expansion.
//!
//!     cargo run --release --example closed_formulas

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::Model;
use hurwitz_tr::verify::cross::{closed_values, multisets};
use hurwitz_tr::Q;

fn main() -> hurwitz_tr::Result<()> {
    let cf = ClosedForm::<Q>::new(&Model::dessins())?;
    let w = cf.w(0, &[3, 3, 3])?;
    let mut terms: Vec<_> = w.terms.iter().map(|(m, c)| (m[..3].to_vec(), c.clone())).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    println!("W_{{0,3}} for dessins, first terms:");
    for (m, c) in terms.iter().take(8) {
        println!("  z^{m:?}: {c}");
    }
    let ks = multisets(2, 4, 8);
    for (k, h) in closed_values(&cf, 1, &ks)? {
        println!("h_{{1;{k:?}}} = {h}");
    }
    Ok(())
}
