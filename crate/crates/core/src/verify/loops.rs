//! Linear, quadratic and higher loop equations, checked two ways: odd
//! principal parts of `W^(r)_{g,n}` in `z_1` on rational slices of the
//! closed formulas, and the sheet sums of the topological-recursion output
//! inside the charts.

use std::collections::HashMap;

use crate::closedform::wr::WrMethod;
use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::model::{Curve, Model};
use crate::scalar::{Scalar, Q};
use crate::series::{MSeries, Poly, RatFun, Series};
use crate::trengine::{Key, TrEngine};

use super::poles::{self, Pinned};

/// `W^(r)_{g,n}` by one route, `z_1` to order `k1`, the others as in
/// [`poles::slice_orders`].
pub fn wr_series(cf: &ClosedForm<Q>, r: u32, g: u32, n: usize, k1: i16, method: WrMethod) -> Result<MSeries<Q>> {
    cf.wr(r, g, &poles::slice_orders(n, k1), method)
}

fn drop_constant(f: &MSeries<Q>) -> MSeries<Q> {
    let mut out = f.clone();
    out.terms.retain(|m, _| m.iter().any(|&e| e != 0));
    out
}

/// The definitional, closed and (for `r <= 3`) explicit routes to
/// `W^(r)_{g,n}` agree as series; for `n = 1` up to a constant in `z_1`.
pub fn wr_routes(cf: &ClosedForm<Q>, r: u32, g: u32, n: usize, k1: i16) -> Result<(bool, String)> {
    let norm = |f: MSeries<Q>| if n == 1 { drop_constant(&f) } else { f };
    let def = norm(wr_series(cf, r, g, n, k1, WrMethod::Definitional)?);
    let mut routes = vec![("closed", norm(wr_series(cf, r, g, n, k1, WrMethod::ClosedForm)?))];
    if r <= 3 {
        routes.push(("explicit", norm(wr_series(cf, r, g, n, k1, WrMethod::Explicit)?)));
    }
    for (name, f) in routes {
        let diff = f.sub_ref(&def);
        if let Some((m, c)) = diff.terms.iter().find(|(_, c)| !c.is_zero()) {
            return Ok((false, format!("{name} route differs from the definition at z^{:?}: {c}", &m[..n])));
        }
    }
    Ok((true, format!("{} terms agree to z_1^{k1}", def.len())))
}

/// Rational slices of `W^(r)_{g,n}` in `z_1`, raising the `z_1` order along
/// [`poles::K1_LADDER`] until reconstruction succeeds.
pub fn wr_slices(cf: &ClosedForm<Q>, r: u32, g: u32, n: usize) -> Result<(i16, Pinned)> {
    if r >= 2 && cf.model.y_rational().is_none() {
        return Err(Error::Unsupported(
            "y is not a rational function of z, so W^(r) with r >= 2 (which contains W_{0,1} = y) has no rational slices".into(),
        ));
    }
    poles::pin_ladder(n, |k1| wr_series(cf, r, g, n, k1, WrMethod::ClosedForm))
}

/// Odd principal parts at every critical point, on every slice. Slices
/// giving different verdicts are reported as a failure.
pub fn xihat_pinned<F: Scalar>(p: &Pinned, curve: &Curve<F>) -> Result<(bool, String)> {
    let mut verdicts = vec![];
    for (k, f) in &p.slices {
        let (ok, w) = poles::check_xihat_all(f, curve)?;
        verdicts.push((ok, format!("slice z^{k:?}: {w}")));
    }
    let ok = verdicts.iter().all(|v| v.0);
    if !ok && verdicts.iter().any(|v| v.0) {
        let w: Vec<_> = verdicts.into_iter().map(|v| v.1).collect();
        return Ok((false, format!("slices disagree: {}", w.join(" | "))));
    }
    let first_bad = verdicts.iter().find(|v| !v.0).or(verdicts.first()).map(|v| v.1.clone()).unwrap_or_default();
    Ok((ok, first_bad))
}

/// `W^(r)_{g,n} in Xi-hat(z_1)` through the closed formulas.
pub fn xihat_wr<F: Scalar>(cf: &ClosedForm<Q>, curve: &Curve<F>, r: u32, g: u32, n: usize) -> Result<(bool, String)> {
    let (k1, p) = wr_slices(cf, r, g, n)?;
    let (ok, w) = xihat_pinned(&p, curve)?;
    Ok((ok, format!("z_1 order {k1}, {} slice(s); {w}", p.slices.len())))
}

/// Adds `1 / prod (z - p_a)^(m_a)`, whose principal part at every critical
/// point starts at an exponent divisible by the number of sheets, to every
/// slice.
pub fn corrupt(p: &Pinned, model: &Model) -> Pinned {
    let den = poles::radical(model).mul_ref(&model.q_function().num.monic());
    let bad = RatFun::new(Poly::one(), den);
    Pinned { slices: p.slices.iter().map(|(k, f)| (k.clone(), f.add_ref(&bad))).collect() }
}

/// The order-`r` loop equation for `omega_{g,n+1}` at `p_a`: the sum over
/// `r`-sets of sheets vanishes to order `r (m - 1)` in the chart coordinate.
pub fn omega_loop<F: Scalar>(eng: &TrEngine<F>, a: usize, g: u32, n: u32, r: usize) -> Result<(bool, String)> {
    let m = eng.chart(a).m as i32;
    let need = r as i32 * (m - 1);
    let terms = eng.loop_terms(a, g, n, r)?;
    let mut total: HashMap<Key, Series<F>> = HashMap::new();
    let mut scale: f64 = 0.0;
    for part in &terms {
        for (k, s) in part {
            for (_, c) in s.terms() {
                scale = scale.max(c.abs_f64());
            }
            match total.get_mut(k) {
                Some(x) => *x = x.add_ref(s),
                None => {
                    total.insert(k.clone(), s.clone());
                }
            }
        }
    }
    let tol = super::tolerance::<F>() * scale.max(1e-300);
    let mut keys: Vec<_> = total.keys().cloned().collect();
    keys.sort();
    for k in keys {
        let s = &total[&k];
        for e in s.val..need {
            let c = s.checked_coeff(e)?;
            let small = if F::is_exact() { c.is_zero() } else { c.abs_f64() <= tol };
            if !small {
                return Ok((false, format!("p_{a}, r = {r}, outer labels {k:?}: t^{e} coefficient {c}")));
            }
        }
    }
    Ok((true, format!("p_{a}, r = {r}: {} outer labels, vanishes to order {need}", total.len())))
}

/// Loop equations of every order `1..=m` at every critical point for
/// `omega_{g,n+1}` (computed on demand).
pub fn omega_loops<F: Scalar>(eng: &mut TrEngine<F>, g: u32, n: u32) -> Result<Vec<(usize, usize, bool, String)>> {
    if 2 * g + n + 1 > 2 {
        eng.omega(g, n + 1)?;
    }
    let mut out = vec![];
    for a in 0..eng.curve.crit.len() {
        let m = eng.chart(a).m as usize;
        for r in 1..=m {
            if (g, n, r) == (0, 0, 1) {
                continue;
            }
            let (ok, w) = omega_loop(eng, a, g, n, r)?;
            out.push((a, r, ok, w));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trengine::Recursion;

    #[test]
    fn routes_agree_for_simple_hurwitz() {
        let cf = ClosedForm::<Q>::new(&Model::simple_hurwitz()).unwrap();
        for (r, g, n) in [(2, 1, 1), (3, 1, 1), (2, 0, 2), (3, 0, 3)] {
            let (ok, w) = wr_routes(&cf, r, g, n, 8).unwrap();
            assert!(ok, "r={r} g={g} n={n}: {w}");
        }
    }

    #[test]
    fn xihat_and_its_control() {
        let m = Model::monotone_hurwitz();
        let cf = ClosedForm::<Q>::new(&m).unwrap();
        let c = Curve::<Q>::build(&m).unwrap();
        let (_, p) = wr_slices(&cf, 2, 1, 1).unwrap();
        assert!(xihat_pinned(&p, &c).unwrap().0);
        let bad = corrupt(&p, &m);
        let (ok, w) = xihat_pinned(&bad, &c).unwrap();
        assert!(!ok && w.contains("nu^-2"), "{w}");
    }

    #[test]
    fn omega_level_equations() {
        let c = Curve::<Q>::build(&Model::simple_hurwitz()).unwrap();
        let mut e = TrEngine::new(c, Recursion::Tr).unwrap();
        for (g, n) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)] {
            for (a, r, ok, w) in omega_loops(&mut e, g, n).unwrap() {
                assert!(ok, "g={g} n={n} a={a} r={r}: {w}");
            }
        }
    }
}
