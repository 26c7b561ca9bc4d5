//! Runs the full per-model battery on one model and prints a summary.
//!
//!     cargo run --release --example verify_suite -- orbifold

use std::collections::BTreeMap;

use hurwitz_tr::model::{random, Model};
use hurwitz_tr::verify::suite::{global_checks, run_suite, Mode, SuiteConfig};
use hurwitz_tr::verify::Verdict;

fn main() -> hurwitz_tr::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "simple".into());
    let m = match name.as_str() {
        "monotone" => Model::monotone_hurwitz(),
        "dessins" => Model::dessins(),
        "orbifold" => Model::orbifold(2),
        "rspin" => Model::r_spin(3, true),
        "double_zero" => Model::double_zero(),
        "random" => random::family_i(0),
        _ => Model::simple_hurwitz(),
    };
    let mode = Mode::auto(&m);
    println!("{} in {mode:?}", m.fingerprint());
    let cfg = SuiteConfig { chi_max: 2, r_max: 3, ..SuiteConfig::default() };
    let mut reports = run_suite(&m, &cfg, mode)?;
    reports.extend(global_checks(true));
    let mut tally: BTreeMap<&str, [u32; 3]> = BTreeMap::new();
    for r in &reports {
        let i = match r.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Skipped(_) => 2,
        };
        tally.entry(&r.id).or_default()[i] += 1;
        if r.failed() {
            println!("FAIL {} {:?}: {}", r.id, r.scope, r.witness);
        }
    }
    for (id, [p, f, s]) in tally {
        println!("{id:>20}: {p} pass, {f} fail, {s} skipped");
    }
    Ok(())
}
