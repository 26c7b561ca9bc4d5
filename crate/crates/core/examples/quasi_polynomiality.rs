//! Fits `h_{g;k}` by polynomials in `k` times basis coefficients and
//! predicts the next layer.
//!
//!     cargo run --release --example quasi_polynomiality

use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{Curve, Model};
use hurwitz_tr::verify::quasi::{quasipoly_fit, Basis};
use hurwitz_tr::Q;

fn main() -> hurwitz_tr::Result<()> {
    let m = Model::simple_hurwitz();
    let cf = ClosedForm::<Q>::new(&m)?;
    let curve = Curve::<Q>::build(&m)?;
    for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 1)] {
        for b in [Basis::Xi, Basis::XiTilde] {
            let f = quasipoly_fit(&cf, &curve, b, g, n, None)?;
            println!("({g},{n}) {b}: {}", f.witness);
            for t in f.terms.iter().take(6) {
                println!("    A_{:?} k^{:?}: {}", t.index, t.exps, t.coeff);
            }
        }
    }
    Ok(())
}
