//! Acceptance run: one line per criterion. Known literal discrepancies are
//! reported as failing but do not fail the run; everything else must pass.

use std::time::Instant;

use hurwitz_tr::closedform::wr::WrMethod;
use hurwitz_tr::closedform::ClosedForm;
use hurwitz_tr::model::{random, Curve, Model};
use hurwitz_tr::oracle::hurwitz_number;
use hurwitz_tr::scalar::{set_numeric_digits, DEFAULT_DIGITS};
use hurwitz_tr::trengine::{Recursion, TrEngine};
use hurwitz_tr::verify::cross::{closed_vs_oracle, cross_check, multisets, tr_value};
use hurwitz_tr::verify::quasi::{self, Basis};
use hurwitz_tr::verify::suite::{global_checks, stable_cells, Mode};
use hurwitz_tr::verify::{lemmas, loops, poles, tolerance};
use hurwitz_tr::{Result, Scalar, C, Q};

struct Outcome {
    ok: bool,
    /// a literal expectation that cannot hold; reported, not enforced
    known: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, known: false, detail: detail.into() }
    }
}

/// Collects sub-check failures; the first one is the headline.
#[derive(Default)]
struct Tally {
    checks: usize,
    bad: Vec<String>,
}

impl Tally {
    fn add(&mut self, what: &str, r: Result<(bool, String)>) {
        self.checks += 1;
        match r {
            Ok((true, _)) => {}
            Ok((false, w)) => self.bad.push(format!("{what}: {w}")),
            Err(e) => self.bad.push(format!("{what}: error: {e}")),
        }
    }
    fn outcome(self, summary: &str) -> Outcome {
        match self.bad.first() {
            None => Outcome::new(true, format!("{} checks; {summary}", self.checks)),
            Some(b) => Outcome::new(false, format!("{} of {} checks failed; first: {b}", self.bad.len(), self.checks)),
        }
    }
}

fn curated() -> Vec<Model> {
    vec![
        Model::simple_hurwitz(),
        Model::monotone_hurwitz(),
        Model::dessins(),
        Model::orbifold(2),
        Model::r_spin(3, true),
        Model::double_zero(),
        Model::extended_ooguri_vafa(Q::new(1, 3), Q::int(2)),
    ]
}

fn exact_models() -> Vec<Model> {
    vec![Model::simple_hurwitz(), Model::monotone_hurwitz(), Model::dessins()]
}

fn criterion_1() -> Outcome {
    let m = Model::simple_hurwitz();
    let mut t = Tally::default();
    for (g, d, want) in [(0, 1, Q::int(1)), (0, 2, Q::new(1, 2)), (1, 2, Q::new(1, 12)), (2, 2, Q::new(1, 240))] {
        t.add(&format!("h_{{{g};{d}}}"), hurwitz_number(&m, g, &[d]).map(|v| (v == want, format!("oracle {v}, expected {want}"))));
    }
    let mut literal = vec![];
    for d in 1..=5u32 {
        let v = match hurwitz_number(&m, 0, &[d]) {
            Ok(v) => v,
            Err(e) => return Outcome::new(false, format!("oracle error: {e}")),
        };
        let classical = Q::int(d).pow(d as i32 - 3);
        let fact: i64 = (1..d as i64).product();
        t.add(&format!("h_{{0;{d}}} (d-1)!"), Ok((v.clone() * Q::int(fact) == classical, format!("oracle {v}"))));
        if v != classical {
            literal.push(format!("d = {d}: oracle {v}, d^(d-3) = {classical}"));
        }
    }
    let o = t.outcome("sinh values exact, h_{0;d} (d-1)! = d^(d-3) for d <= 5");
    if !o.ok {
        return o;
    }
    Outcome {
        ok: literal.is_empty(),
        known: true,
        detail: format!("{}; literal h_{{0;d}} = d^(d-3) fails at {}", o.detail, literal.join(", ")),
    }
}

fn criterion_2() -> Outcome {
    let mut t = Tally::default();
    let models = [exact_models(), vec![random::family_i(0), random::family_ii(0)]].concat();
    for m in &models {
        let r = ClosedForm::<Q>::new(m).and_then(|cf| closed_vs_oracle(&cf, 4, 6, 12));
        t.add(&m.fingerprint(), r);
    }
    t.outcome("2g-2+n <= 4, k_i <= 6, |k| <= 12, exact")
}

fn criterion_3() -> Outcome {
    let mut t = Tally::default();
    let cells: Vec<_> = [(0, 1), (0, 2)].into_iter().chain(stable_cells(3)).collect();
    for m in exact_models() {
        let r = (|| {
            let cf = ClosedForm::<Q>::new(&m)?;
            let mut e = TrEngine::new(Curve::<Q>::build(&m)?, Recursion::Tr)?;
            for &(g, n) in &cells {
                let (ok, w) = cross_check(&cf, &mut e, g, n, 5, 10)?;
                if !ok {
                    return Ok((false, format!("({g},{n}) {w}")));
                }
            }
            Ok((true, String::new()))
        })();
        t.add(&m.fingerprint(), r);
    }
    set_numeric_digits(DEFAULT_DIGITS);
    for m in [Model::orbifold(2), Model::extended_ooguri_vafa(Q::new(1, 3), Q::int(2))] {
        let r = (|| {
            let cf = ClosedForm::<Q>::new(&m)?;
            let mut e = TrEngine::new(Curve::<C>::build(&m)?, Recursion::Tr)?;
            for &(g, n) in &cells {
                let (ok, w) = cross_check(&cf, &mut e, g, n, 5, 8)?;
                if !ok {
                    return Ok((false, format!("({g},{n}) {w}")));
                }
            }
            Ok((true, String::new()))
        })();
        t.add(&m.fingerprint(), r);
    }
    let tol = tolerance::<C>();
    if tol > 1e-30 {
        return Outcome::new(false, format!("numeric tolerance {tol:.1e} is looser than 1e-30"));
    }
    t.outcome(&format!("exact for three curves, relative {tol:.0e} for orbifold and Ooguri-Vafa, 2g-2+n <= 3, k_i <= 5"))
}

fn xihat_for<F: Scalar>(m: &Model, t: &mut Tally, skipped: &mut Vec<String>) {
    let (cf, curve) = match (ClosedForm::<Q>::new(m), Curve::<F>::build(m)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return t.add(&m.fingerprint(), Err(e)),
    };
    for r in 1..=4 {
        for (g, n) in stable_cells(3) {
            let what = format!("{} r={r} ({g},{n})", m.fingerprint());
            if r >= 2 {
                let routes = loops::wr_routes(&cf, r, g, n, 8);
                let failed = !matches!(routes, Ok((true, _)));
                t.add(&format!("{what} routes"), routes);
                if failed {
                    continue;
                }
            }
            match loops::xihat_wr(&cf, &curve, r, g, n) {
                Err(hurwitz_tr::Error::Unsupported(_)) if m.y_rational().is_none() => skipped.push(what),
                r => t.add(&what, r),
            }
        }
    }
}

fn criterion_4() -> Outcome {
    let mut t = Tally::default();
    let mut skipped = vec![];
    set_numeric_digits(DEFAULT_DIGITS);
    for m in curated() {
        match Mode::auto(&m) {
            Mode::Exact => xihat_for::<Q>(&m, &mut t, &mut skipped),
            Mode::Numeric(_) => xihat_for::<C>(&m, &mut t, &mut skipped),
        }
    }
    // the r = 3 expansion with the constant as printed
    let cf = ClosedForm::<Q>::new(&Model::simple_hurwitz()).expect("model");
    let ks = poles::slice_orders(1, 8);
    let printed = cf.cw3(1, &ks, (-1, 1)).and_then(|p| Ok(p.sub_ref(&cf.wr(3, 1, &ks, WrMethod::Definitional)?)));
    let note = match printed {
        Ok(d) if d.terms.values().any(|c| !c.is_zero()) => "printed W_{g-1,n} constant -1 disagrees with the definition, -1/4 agrees",
        Ok(_) => "printed W_{g-1,n} constant -1 unexpectedly agrees",
        Err(_) => "printed constant not evaluated",
    };
    let out = t.outcome(&format!(
        "r <= 4, 2g-2+n <= 3, routes agree for r = 2, 3, 4; {} Family II r >= 2 cells not sliceable (y transcendental); {note}",
        skipped.len()
    ));
    out
}

fn criterion_5() -> Outcome {
    let mut t = Tally::default();
    set_numeric_digits(DEFAULT_DIGITS);
    let models = [curated(), vec![random::family_i(0), random::family_ii(0)]].concat();
    for m in &models {
        let cf = match ClosedForm::<Q>::new(m) {
            Ok(c) => c,
            Err(e) => {
                t.add(&m.fingerprint(), Err(e));
                continue;
            }
        };
        for (g, n) in stable_cells(3) {
            let what = format!("{} ({g},{n})", m.fingerprint());
            let r = match Mode::auto(m) {
                Mode::Exact => Curve::<Q>::build(m).and_then(|c| poles::theta_h(&cf, &c, g, n)),
                Mode::Numeric(_) => Curve::<C>::build(m).and_then(|c| poles::theta_h(&cf, &c, g, n)),
            };
            t.add(&what, r);
        }
    }
    let control = global_checks(true).into_iter().find(|r| r.id == "deformation_control").expect("control present");
    t.add("deformation control", Ok((control.passed(), control.witness.clone())));
    t.outcome("H_{g,n} in Theta for 2g-2+n <= 3; undeformed 3-spin fails, deformed passes")
}

fn criterion_6() -> Outcome {
    let mut t = Tally::default();
    let cells = stable_cells(3);
    for m in exact_models() {
        let r = (|| {
            let c = Curve::<Q>::build(&m)?;
            let mut tr = TrEngine::new(c.clone(), Recursion::Tr)?;
            let mut be = TrEngine::new(c, Recursion::Be)?;
            for &(g, n) in &cells {
                let a = tr.omega(g, n as u32)?.clone();
                if a.distance(be.omega(g, n as u32)?) != 0.0 {
                    return Ok((false, format!("({g},{n}) differ")));
                }
            }
            Ok((true, String::new()))
        })();
        t.add(&format!("BE = TR {}", m.fingerprint()), r);
    }
    set_numeric_digits(DEFAULT_DIGITS);
    for (m, perm) in [(Model::double_zero(), vec![2, 1])] {
        let r = (|| {
            let c = Curve::<C>::build(&m)?;
            let mut a = TrEngine::new(c.clone(), Recursion::Be)?;
            let mut b = TrEngine::new(c, Recursion::Be)?;
            b.relabel(0, perm.clone())?;
            for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
                let x = a.omega(g, n)?.clone();
                let d = x.distance(b.omega(g, n)?);
                if d > tolerance::<C>() {
                    return Ok((false, format!("({g},{n}) relative distance {d:.1e}")));
                }
            }
            Ok((true, String::new()))
        })();
        t.add(&format!("relabel {perm:?} {}", m.fingerprint()), r);
    }
    let m = Model::r_spin(3, true);
    let mut worst = 0.0f64;
    let r = (|| {
        let mut be = TrEngine::new(Curve::<C>::build(&m)?, Recursion::Be)?;
        for (g, n) in [(0u32, 3usize), (1, 1)] {
            let mut rows = vec![];
            for k in multisets(n, 4, 10) {
                let o = C::from_rational(&hurwitz_number(&m, g, &k)?.0);
                let b = tr_value(&mut be, g, &k)?;
                rows.push((k, o, b));
            }
            // zeros of h are compared against the size of the table
            let scale = rows.iter().map(|r| r.1.abs_f64()).fold(0.0, f64::max);
            for (k, o, b) in rows {
                let d = (o.clone() - &b).abs_f64() / o.abs_f64().max(b.abs_f64()).max(scale);
                worst = worst.max(d);
                if d > 1e-25 {
                    return Ok((false, format!("({g}, {k:?}): oracle {o}, BE {b}")));
                }
            }
        }
        Ok((true, String::new()))
    })();
    t.add("BE vs oracle on 3-spin", r);
    t.outcome(&format!("BE = TR exactly on three curves; relabeling invariant; 3-spin BE vs oracle worst relative {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut t = Tally::default();
    for m in [Model::simple_hurwitz(), Model::monotone_hurwitz()] {
        let (cf, c) = (ClosedForm::<Q>::new(&m).expect("model"), Curve::<Q>::build(&m).expect("curve"));
        for (g, n) in [(0, 3), (1, 1), (1, 2)] {
            for b in [Basis::Xi, Basis::XiTilde] {
                let r = quasi::quasipoly_fit(&cf, &c, b, g, n, Some(5)).map(|f| (f.passed, f.witness));
                t.add(&format!("{} ({g},{n}) {b}", m.fingerprint()), r);
            }
        }
    }
    t.outcome("degree <= 3g-3+n, trained on k <= 5, k = 6 predicted exactly, both bases")
}

fn criterion_8() -> Outcome {
    let mut t = Tally::default();
    for k in 1..=2 {
        t.add(&format!("c_{} in v", 2 * k), Ok(lemmas::check_cvy(k)));
    }
    for a in [Q::int(3), Q::new(-1, 2), Q::int(1)] {
        t.add(&format!("c_2 in z, A = {a}"), Ok(lemmas::check_cuz(1, &a)));
    }
    t.outcome("exact polynomial divisibility")
}

fn criterion_9() -> Outcome {
    let mut t = Tally::default();
    // corrupted W fails Xi-hat, exact and numeric
    let m = Model::simple_hurwitz();
    let cf = ClosedForm::<Q>::new(&m).expect("model");
    let r = (|| {
        let (_, p) = loops::wr_slices(&cf, 2, 1, 1)?;
        let (ok, w) = loops::xihat_pinned(&loops::corrupt(&p, &m), &Curve::<Q>::build(&m)?)?;
        Ok((!ok, w))
    })();
    t.add("corrupted W^(2)_{1,1}, simple Hurwitz", r);
    set_numeric_digits(DEFAULT_DIGITS);
    let m = Model::r_spin(3, true);
    let r = (|| {
        let cf = ClosedForm::<Q>::new(&m)?;
        let (_, p) = loops::wr_slices(&cf, 1, 0, 3)?;
        let (ok, w) = loops::xihat_pinned(&loops::corrupt(&p, &m), &Curve::<C>::build(&m)?)?;
        Ok((!ok, w))
    })();
    t.add("corrupted W_{0,3}, 3-spin", r);
    // corrupted h fails quasi-polynomiality
    for m in [Model::simple_hurwitz(), Model::monotone_hurwitz()] {
        let r = (|| {
            let (cf, c) = (ClosedForm::<Q>::new(&m)?, Curve::<Q>::build(&m)?);
            let (g, n) = (1, 2);
            let d = quasi::degree_bound(g, n);
            let data = quasi::h_table(&cf, g, n, 6)?;
            let co = quasi::basis_coeffs(&c, Basis::Xi, 6)?;
            let f = quasi::fit(&quasi::corrupt(&data, &co, d), &co, Basis::Xi, n, d, 5)?;
            Ok((!f.passed, f.witness))
        })();
        t.add(&format!("corrupted h, {}", m.fingerprint()), r);
    }
    let pade = global_checks(true).into_iter().find(|r| r.id == "pade_control").expect("control present");
    t.add("non-rational series", Ok((pade.passed(), pade.witness.clone())));
    t.outcome("every control rejected")
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut enforced_failures = 0;
    for (i, f) in criteria {
        if !only.is_empty() && !only.contains(&i) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let status = match (o.ok, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known, not enforced)",
            (false, false) => {
                enforced_failures += 1;
                "FAIL"
            }
        };
        println!("criterion {i}: {status} [{:.1}s] {}", t.elapsed().as_secs_f64(), o.detail);
    }
    if enforced_failures > 0 {
        eprintln!("{enforced_failures} criterion(s) failed");
        std::process::exit(1);
    }
}
