//! The three routes to `W^(r)_{g,n}`, the odd-principal-part test at the
//! critical points, and a corrupted input that the test must reject.
//!
//!     cargo run --release --example loop_equations

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{Curve, Model};
use hurwitz_tr::verify::loops::{corrupt, wr_routes, wr_slices, xihat_pinned, xihat_wr};
use hurwitz_tr::Q;

fn main() -> hurwitz_tr::Result<()> {
    let m = Model::monotone_hurwitz();
    let cf = ClosedForm::<Q>::new(&m)?;
    let curve = Curve::<Q>::build(&m)?;
    for r in 1..=4 {
        for (g, n) in [(0, 3), (1, 1), (1, 2)] {
            let routes = if r >= 2 { wr_routes(&cf, r, g, n, 8)?.0 } else { true };
            let (ok, w) = xihat_wr(&cf, &curve, r, g, n)?;
            println!("r={r} ({g},{n}): routes agree {routes}, Xi-hat {ok}: {w}");
        }
    }
    let (_, p) = wr_slices(&cf, 2, 1, 1)?;
    let (ok, w) = xihat_pinned(&corrupt(&p, &m), &curve)?;
    println!("corrupted W^(2)_{{1,1}}: Xi-hat {ok}: {w}");
    Ok(())
}
