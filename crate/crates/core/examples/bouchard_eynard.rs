//! Bouchard-Eynard recursion on a curve where `dx` has a double zero, in
//! numeric mode, with a sheet relabeling that must not change anything.
//!
//!     cargo run --release --example bouchard_eynard

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{Curve, Model};
use hurwitz_tr::trengine::{Recursion, TrEngine};
use hurwitz_tr::verify::cross::{closed_values, tr_value};
use hurwitz_tr::{C, Q};

fn main() -> hurwitz_tr::Result<()> {
    let m = Model::double_zero();
    let curve = Curve::<C>::build(&m)?;
    for c in &curve.crit {
        println!("critical point {} with {} sheets", c.p, c.sheets());
    }
    let mut be = TrEngine::new(curve.clone(), Recursion::Be)?;
    let mut swapped = TrEngine::new(curve, Recursion::Be)?;
    swapped.relabel(0, vec![2, 1])?;
    let a = be.omega(1, 1)?.clone();
    println!("omega_{{1,1}}: {} terms, relabeled distance {:.1e}", a.terms.len(), a.distance(swapped.omega(1, 1)?));

    let cf = ClosedForm::<Q>::new(&m)?;
    let k = vec![1, 2, 2];
    let closed = &closed_values(&cf, 0, std::slice::from_ref(&k))?[&k];
    println!("h_{{0;1,2,2}}: closed {closed}, BE {}", tr_value(&mut be, 0, &k)?);
    Ok(())
}
