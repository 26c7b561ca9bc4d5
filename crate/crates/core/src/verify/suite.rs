//! The full battery of checks for one model, plus the model-independent
//! lemma and control checks.

use serde::{Deserialize, Serialize};

use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::model::{Curve, Model};
use crate::scalar::{set_numeric_digits, Scalar, C, DEFAULT_DIGITS, Q};
use crate::series::{pade, Series};
use crate::trengine::{Recursion, TrEngine};

use super::quasi::{self, Basis};
use super::{cross, lemmas, loops, poles, timed, CheckReport, Scope};

/// Field the engines run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric(u32),
}

impl Mode {
    /// Exact when the critical points are rational and at most simple;
    /// otherwise numeric at the default precision.
    pub fn auto(model: &Model) -> Mode {
        match Curve::<Q>::build(model) {
            Ok(c) if c.all_simple() => Mode::Exact,
            _ => Mode::Numeric(DEFAULT_DIGITS),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Largest `2g - 2 + n` for the recursion, loop-equation and pole checks.
    pub chi_max: u32,
    /// Largest `r` for `W^(r)`.
    pub r_max: u32,
    /// Largest part of `k` in the three-way comparison.
    pub cross_kmax: u32,
    /// Largest `|k|` sent to the oracle.
    pub oracle_max: u32,
    /// `z_1` order used when comparing the routes to `W^(r)`.
    pub route_order: i16,
    /// `(g, n)` cells for quasi-polynomiality.
    pub quasi: Vec<(u32, usize)>,
    /// Training box for quasi-polynomiality; adaptive when absent.
    pub quasi_train: Option<u32>,
    /// Run the negative controls.
    pub controls: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            chi_max: 3,
            r_max: 4,
            cross_kmax: 5,
            oracle_max: 10,
            route_order: 8,
            quasi: vec![(0, 3), (1, 1), (1, 2)],
            quasi_train: None,
            controls: true,
        }
    }
}

/// Stable `(g, n)` with `n >= 1` and `2g - 2 + n <= chi_max`.
pub fn stable_cells(chi_max: u32) -> Vec<(u32, usize)> {
    let mut out = vec![];
    for chi in 1..=chi_max as i32 {
        for g in 0..=(chi + 1) / 2 {
            let n = chi + 2 - 2 * g;
            if n >= 1 {
                out.push((g as u32, n as usize));
            }
        }
    }
    out
}

/// Every per-model check, in an order where agreement of the routes to
/// `W^(r)` is established before `W^(r)` is tested for poles.
pub fn run_suite(model: &Model, cfg: &SuiteConfig, mode: Mode) -> Result<Vec<CheckReport>> {
    let cf = ClosedForm::<Q>::new(model)?;
    match mode {
        Mode::Exact => run::<Q>(&cf, cfg),
        Mode::Numeric(d) => {
            set_numeric_digits(d);
            run::<C>(&cf, cfg)
        }
    }
}

fn run<F: Scalar>(cf: &ClosedForm<Q>, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let model = &cf.model;
    let name = model.fingerprint();
    let curve = Curve::<F>::build(model)?;
    let simple = curve.all_simple();
    let rec = if simple { Recursion::Tr } else { Recursion::Be };
    let mut eng = TrEngine::new(curve.clone(), rec)?;
    let cells = stable_cells(cfg.chi_max);
    let mut out = vec![];
    let add = |out: &mut Vec<CheckReport>, r: CheckReport| {
        log::info!("{} {:?} {:?} ({} ms)", r.id, r.scope, r.verdict, r.millis);
        out.push(r);
    };

    let closed_oracle_max = cfg.oracle_max.min(12);
    add(&mut out, timed("closed_vs_oracle", &name, Scope::default(), || {
        cross::closed_vs_oracle(cf, cfg.chi_max + 1, cfg.cross_kmax + 1, closed_oracle_max)
    }));
    for &(g, n) in [(0, 1), (0, 2)].iter().chain(&cells) {
        add(&mut out, timed("cross", &name, Scope::gn(g, n as u32), || {
            cross::cross_check(cf, &mut eng, g, n, cfg.cross_kmax, cfg.oracle_max)
        }));
    }

    for r in 1..=cfg.r_max {
        for &(g, n) in &cells {
            let scope = Scope::gn(g, n as u32).with_r(r);
            let routes_ok = if r >= 2 {
                let rep = timed("wr_routes", &name, scope.clone(), || loops::wr_routes(cf, r, g, n, cfg.route_order));
                let ok = rep.passed();
                add(&mut out, rep);
                ok
            } else {
                true
            };
            add(&mut out, timed("xihat", &name, scope, || {
                if !routes_ok {
                    return Err(Error::Computation("routes to W^(r) disagree".into()));
                }
                loops::xihat_wr(cf, &curve, r, g, n)
            }));
        }
    }

    for &(g, n) in &cells {
        add(&mut out, timed("theta", &name, Scope::gn(g, n as u32), || poles::theta_h(cf, &curve, g, n)));
    }

    for g in 0..=(cfg.chi_max + 1) / 2 {
        for n in 0..=(cfg.chi_max + 1 - 2 * g) {
            let scope = Scope::gn(g, n + 1);
            match loops::omega_loops(&mut eng, g, n) {
                Ok(v) => {
                    for (a, r, ok, w) in v {
                        add(&mut out, timed("omega_loop", &name, scope.clone().with_a(a).with_r(r as u32), || Ok((ok, w))));
                    }
                }
                Err(e) => add(&mut out, timed("omega_loop", &name, scope, || Err(e))),
            }
        }
    }

    if simple {
        let mut be = TrEngine::new(curve.clone(), Recursion::Be)?;
        for &(g, n) in &cells {
            add(&mut out, timed("be_vs_tr", &name, Scope::gn(g, n as u32), || {
                let a = eng.omega(g, n as u32)?.clone();
                let b = be.omega(g, n as u32)?;
                agree(&a, b)
            }));
        }
    }
    for (a, c) in curve.crit.iter().enumerate().filter(|(_, c)| c.sheets() >= 3) {
        let m = c.sheets() as usize;
        let mut other = TrEngine::new(curve.clone(), Recursion::Be)?;
        other.relabel(a, (1..m).rev().collect())?;
        for &(g, n) in cells.iter().filter(|c| 2 * c.0 + c.1 as u32 <= 4) {
            add(&mut out, timed("relabel", &name, Scope::gn(g, n as u32).with_a(a), || {
                let x = eng.omega(g, n as u32)?.clone();
                let y = other.omega(g, n as u32)?;
                agree(&x, y)
            }));
        }
    }

    for &(g, n) in &cfg.quasi {
        for (id, basis) in [("quasi_xi", Basis::Xi), ("quasi_xi_tilde", Basis::XiTilde)] {
            add(&mut out, timed(id, &name, Scope::gn(g, n as u32), || {
                let f = quasi::quasipoly_fit(cf, &curve, basis, g, n, cfg.quasi_train)?;
                Ok((f.passed, f.witness))
            }));
        }
    }

    if cfg.controls {
        let r = if model.y_rational().is_some() { 2 } else { 1 };
        add(&mut out, timed("xihat_control", &name, Scope::gn(1, 1).with_r(r), || {
            let (_, p) = loops::wr_slices(cf, r, 1, 1)?;
            let (ok, w) = loops::xihat_pinned(&loops::corrupt(&p, model), &curve)?;
            Ok((!ok, format!("corrupted W^({r})_{{1,1}} rejected: {w}")))
        }));
        add(&mut out, timed("theta_control", &name, Scope::gn(1, 1), || {
            let (_, p) = poles::h_slices(cf, 1, 1)?;
            let (ok, w) = poles::theta_pinned(&loops::corrupt(&p, model), model, &curve)?;
            Ok((!ok, format!("corrupted H_{{1,1}} rejected: {w}")))
        }));
        if let Some(&(g, n)) = cfg.quasi.first() {
            add(&mut out, timed("quasi_control", &name, Scope::gn(g, n as u32), || {
                let degree = quasi::degree_bound(g, n);
                let nb = quasi::basis_coeffs(&curve, Basis::Xi, 1)?.len();
                let tm = cfg.quasi_train.unwrap_or_else(|| quasi::default_train_max(nb, degree));
                let data = quasi::to_field::<F>(&quasi::h_table(cf, g, n, tm + 1)?);
                let co = quasi::basis_coeffs(&curve, Basis::Xi, tm + 1)?;
                let bad = quasi::corrupt(&data, &co, degree);
                match quasi::fit(&bad, &co, Basis::Xi, n, degree, tm) {
                    Ok(f) => Ok((!f.passed, format!("corrupted data rejected: {}", f.witness))),
                    Err(Error::Computation(w)) if w.starts_with("singular") => Ok((true, format!("corrupted data rejected: {w}"))),
                    Err(e) => Err(e),
                }
            }));
        }
    }
    Ok(out)
}

fn agree<F: Scalar>(a: &crate::trengine::MultiDifferential<F>, b: &crate::trengine::MultiDifferential<F>) -> Result<(bool, String)> {
    let d = a.distance(b);
    let ok = d <= super::tolerance::<F>();
    let how = if F::is_exact() { if ok { "equal".to_string() } else { "differ".to_string() } } else { format!("relative distance {d:.1e}") };
    Ok((ok, format!("{} pole-basis coefficients, {how}", a.terms.len().max(b.terms.len()))))
}

/// Checks that do not depend on a model: the two divisibility lemmas, the
/// rational-reconstruction guard and the deformation control.
pub fn global_checks(controls: bool) -> Vec<CheckReport> {
    let mut out = vec![];
    for k in 1..=2 {
        out.push(timed("lemma_cvy", "-", Scope::default(), || Ok(lemmas::check_cvy(k))));
    }
    for a in [Q::int(3), Q::new(-1, 2)] {
        out.push(timed("lemma_cuz", "-", Scope::default(), || Ok(lemmas::check_cuz(1, &a))));
    }
    if controls {
        out.push(timed("pade_control", "-", Scope::default(), || {
            // exp(z) to O(z^40): no rational function of modest degree fits the guard
            let mut c = vec![Q::one()];
            for k in 1..40 {
                let next = c[k - 1].clone() * Q::new(1, k as i64);
                c.push(next);
            }
            match pade::reconstruct(&Series::from_coeffs(c, 40), poles::GUARD) {
                Ok(r) => Ok((false, format!("exp(z) accepted as {r:?}"))),
                Err(e) => Ok((true, format!("exp(z) rejected: {e}"))),
            }
        }));
        out.push(timed("deformation_control", "-", Scope::gn(1, 1), || {
            set_numeric_digits(DEFAULT_DIGITS);
            let theta = |m: Model| -> Result<(bool, String)> {
                let cf = ClosedForm::<Q>::new(&m)?;
                poles::theta_h(&cf, &Curve::<C>::build(&m)?, 1, 1)
            };
            let (bare, wb) = theta(Model::r_spin(3, false))?;
            let (def, wd) = theta(Model::r_spin(3, true))?;
            Ok((!bare && def, format!("undeformed 3-spin H_{{1,1}}: {wb}; deformed: {wd}")))
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells() {
        assert_eq!(stable_cells(2), vec![(0, 3), (1, 1), (0, 4), (1, 2)]);
        assert_eq!(stable_cells(3).len(), 7);
    }

    #[test]
    fn mode_choice() {
        assert_eq!(Mode::auto(&Model::simple_hurwitz()), Mode::Exact);
        assert_eq!(Mode::auto(&Model::double_zero()), Mode::Numeric(DEFAULT_DIGITS));
    }
}
