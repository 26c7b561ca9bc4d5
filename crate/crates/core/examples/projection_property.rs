//! `H_{g,n}` lies in `Theta` for the deformed 3-spin data but not for the
//! undeformed one.
//!
//!     cargo run --release --example projection_property

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{Curve, Model};
use hurwitz_tr::verify::poles::theta_h;
use hurwitz_tr::{C, Q};

fn main() -> hurwitz_tr::Result<()> {
    for deformed in [true, false] {
        let m = Model::r_spin(3, deformed);
        let cf = ClosedForm::<Q>::new(&m)?;
        let curve = Curve::<C>::build(&m)?;
        for (g, n) in [(0, 3), (1, 1), (1, 2)] {
            let (ok, w) = theta_h(&cf, &curve, g, n)?;
            println!("{} ({g},{n}): {ok}  {w}", m.fingerprint());
        }
    }
    Ok(())
}
