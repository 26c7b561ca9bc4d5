//! Pole structure in `z_1`: Taylor slices in the other variables, rational
//! reconstruction, and principal parts at the critical points.

use std::collections::BTreeMap;

use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::model::{Curve, Model};
use crate::scalar::{Scalar, Q};
use crate::series::{reconstruct, MSeries, Poly, RatFun, Series};
use crate::trengine::Chart;

/// Guard coefficients used to confirm every reconstruction.
pub const GUARD: usize = 8;

/// Orders in `z_1` tried in turn until every slice reconstructs.
pub const K1_LADDER: [i16; 5] = [16, 32, 48, 64, 96];

/// Number of slices that must agree.
pub const PINNINGS: usize = 3;

/// A function of `z_1` known through several Taylor slices in `z_2..z_n`,
/// each reconstructed as a rational function of `z_1`.
#[derive(Clone, Debug)]
pub struct Pinned {
    pub slices: Vec<(Vec<i16>, RatFun<Q>)>,
}

/// Taylor coefficients in `z_2..z_n` (variables `1..n`) of `f`, each a
/// Laurent series in `z_1` known to `O(z_1^(k1+1))`.
pub fn slices<F: Scalar>(f: &MSeries<F>, n: usize, k1: i16) -> BTreeMap<Vec<i16>, Series<F>> {
    let mut by: BTreeMap<Vec<i16>, BTreeMap<i16, F>> = BTreeMap::new();
    for (m, c) in &f.terms {
        if m[0] > k1 {
            continue;
        }
        by.entry(m[1..n].to_vec()).or_default().insert(m[0], c.clone());
    }
    by.into_iter()
        .map(|(k, v)| {
            let lo = v.keys().next().copied().unwrap_or(0).min(0) as i32;
            let mut c = vec![F::zero(); (k1 as i32 + 1 - lo).max(0) as usize];
            for (e, x) in v {
                c[(e as i32 - lo) as usize] = x;
            }
            (k, Series::new(lo, c, k1 as i32 + 1))
        })
        .collect()
}

/// Reconstructs the first `count` nonzero slices (lowest total degree first).
pub fn pin(f: &MSeries<Q>, n: usize, k1: i16, count: usize) -> Result<Pinned> {
    let mut all: Vec<(Vec<i16>, Series<Q>)> = slices(f, n, k1).into_iter().filter(|(_, s)| !s.is_zero()).collect();
    all.sort_by_key(|(k, _)| (k.iter().map(|&x| x as i32).sum::<i32>(), k.clone()));
    let mut out = vec![];
    for (k, s) in all.into_iter().take(count) {
        let r = reconstruct(&s, GUARD).map_err(|e| match e {
            Error::Computation(m) | Error::Truncation(m) => {
                Error::Truncation(format!("slice {k:?} not reconstructed from {} coefficients in z_1: {m}", k1 + 1))
            }
            other => other,
        })?;
        out.push((k, r));
    }
    if out.is_empty() {
        return Err(Error::Computation("function vanishes identically on the sampled slices".into()));
    }
    Ok(Pinned { slices: out })
}

/// Truncation orders giving at least [`PINNINGS`] slices: `k1` in `z_1`,
/// 3 in `z_2` when `n = 2`, 2 in each other variable otherwise.
pub fn slice_orders(n: usize, k1: i16) -> Vec<i16> {
    let mut ks = vec![if n == 2 { 3 } else { 2 }; n];
    ks[0] = k1;
    ks
}

/// Slices of `f(k1)` (a function known to `z_1^k1`), raising `k1` along
/// [`K1_LADDER`] until every slice reconstructs.
pub fn pin_ladder(n: usize, mut f: impl FnMut(i16) -> Result<MSeries<Q>>) -> Result<(i16, Pinned)> {
    let mut last = String::new();
    for k1 in K1_LADDER {
        match pin(&f(k1)?, n, k1, PINNINGS) {
            Ok(p) => return Ok((k1, p)),
            Err(Error::Truncation(m)) => last = m,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Truncation(last))
}

/// Rational slices of `H_{g,n}` in `z_1`.
pub fn h_slices(cf: &ClosedForm<Q>, g: u32, n: usize) -> Result<(i16, Pinned)> {
    pin_ladder(n, |k1| cf.h(g, &slice_orders(n, k1)))
}

/// `Theta` membership on every slice; slices giving different verdicts are
/// reported as a failure.
pub fn theta_pinned<F: Scalar>(p: &Pinned, model: &Model, curve: &Curve<F>) -> Result<(bool, String)> {
    let mut verdicts = vec![];
    for (k, f) in &p.slices {
        let (ok, w) = check_theta(f, model, curve)?;
        verdicts.push((ok, format!("slice z^{k:?}: {w}")));
    }
    let ok = verdicts.iter().all(|v| v.0);
    if !ok && verdicts.iter().any(|v| v.0) {
        let w: Vec<_> = verdicts.into_iter().map(|v| v.1).collect();
        return Ok((false, format!("slices disagree: {}", w.join(" | "))));
    }
    let w = verdicts.iter().find(|v| !v.0).or(verdicts.first()).map(|v| v.1.clone()).unwrap_or_default();
    Ok((ok, w))
}

/// `H_{g,n} in Theta(z_1)` on every slice: poles only at the critical
/// points, none at infinity, odd principal parts.
pub fn theta_h<F: Scalar>(cf: &ClosedForm<Q>, curve: &Curve<F>, g: u32, n: usize) -> Result<(bool, String)> {
    let (k1, p) = h_slices(cf, g, n)?;
    let (ok, w) = theta_pinned(&p, &cf.model, curve)?;
    Ok((ok, format!("z_1 order {k1}, {} slice(s); {w}", p.slices.len())))
}

pub fn to_field<F: Scalar>(f: &RatFun<Q>) -> RatFun<F> {
    RatFun { num: f.num.map(|x| F::from_rational(&x.0)), den: f.den.map(|x| F::from_rational(&x.0)) }
}

fn is_small<F: Scalar>(c: &F, scale: f64) -> bool {
    if F::is_exact() {
        c.is_zero()
    } else {
        c.abs_f64() <= super::tolerance::<F>() * scale.max(1e-300)
    }
}

/// Laurent expansion of `f` at `p_a` to `O(t^1)` and a chart deep enough for
/// its principal part.
fn local<F: Scalar>(f: &RatFun<F>, curve: &Curve<F>, a: usize) -> Result<(Series<F>, Chart<F>)> {
    let p = &curve.crit[a].p;
    let e = f.expand_at(p, 1)?.normalized();
    let pole = (-e.val).max(0);
    let ch = Chart::new(curve, a, pole + 6)?;
    Ok((e, ch))
}

/// Principal part of `f` at `p_a` in the coordinate `nu`, `nu^m ~ x - x(p_a)`.
pub fn principal_in_nu<F: Scalar>(f: &RatFun<F>, curve: &Curve<F>, a: usize) -> Result<Vec<(i32, F)>> {
    let (e, ch) = local(f, curve, a)?;
    if e.val >= 0 {
        return Ok(vec![]);
    }
    let inu = e.compose(&ch.t_of_nu)?;
    Ok((inu.val..0).map(|k| (k, inu.coeff(k))).collect())
}

/// `Xi-hat` test through the `nu` expansion: the principal part may contain
/// no exponent divisible by the number of sheets.
pub fn xihat_nu<F: Scalar>(f: &RatFun<F>, curve: &Curve<F>, a: usize) -> Result<(bool, String)> {
    let m = curve.crit[a].sheets() as i32;
    let pp = principal_in_nu(f, curve, a)?;
    let scale = pp.iter().map(|x| x.1.abs_f64()).fold(0.0, f64::max);
    for (k, c) in &pp {
        if k % m == 0 && !is_small(c, scale) {
            return Ok((false, format!("p_{a}: coefficient of nu^{k} is {c}")));
        }
    }
    Ok((true, format!("p_{a}: principal part of order {}", pp.first().map(|x| -x.0).unwrap_or(0))))
}

/// `f(t) + f(sigma(t))` at a simple point: must be holomorphic.
pub fn xihat_sigma<F: Scalar>(f: &RatFun<F>, curve: &Curve<F>, a: usize) -> Result<(bool, String)> {
    let (e, ch) = local(f, curve, a)?;
    if e.val >= 0 {
        return Ok((true, format!("p_{a}: regular")));
    }
    let s = e.compose(ch.deck()?)?.add_ref(&e);
    let scale = e.c.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    for k in s.val..0 {
        let c = s.coeff(k);
        if !is_small(&c, scale) {
            return Ok((false, format!("p_{a}: f + f(sigma) has t^{k} coefficient {c}")));
        }
    }
    Ok((true, format!("p_{a}: f + f(sigma) holomorphic")))
}

/// Both tests at a simple point (they must agree), the `nu` test otherwise.
pub fn check_xihat<F: Scalar>(f: &RatFun<F>, curve: &Curve<F>, a: usize) -> Result<(bool, String)> {
    let nu = xihat_nu(f, curve, a)?;
    if curve.crit[a].sheets() != 2 {
        return Ok(nu);
    }
    let sg = xihat_sigma(f, curve, a)?;
    if nu.0 != sg.0 {
        return Err(Error::Computation(format!("nu and sigma tests disagree at p_{a}: {} / {}", nu.1, sg.1)));
    }
    Ok(nu)
}

/// Squarefree part of the numerator of `Q`.
pub fn radical(model: &Model) -> Poly<Q> {
    model.q_function().num.squarefree().into_iter().fold(Poly::one(), |acc, (p, _)| acc.mul_ref(&p))
}

/// `Theta` membership of a rational function: regular at infinity, poles
/// only at critical points, odd principal parts there.
pub fn check_theta<F: Scalar>(f: &RatFun<Q>, model: &Model, curve: &Curve<F>) -> Result<(bool, String)> {
    if f.num.deg() > f.den.deg() {
        return Ok((false, format!("pole of order {} at infinity", f.num.deg() - f.den.deg())));
    }
    let rad = radical(model);
    let dd = f.den.deg().max(0) as u32;
    let (_, rem) = rad.pow(dd).divrem(&f.den);
    if !rem.is_zero() {
        let g = f.den.gcd(&rad.pow(dd));
        let extra = f.den.divrem(&g).0.monic();
        return Ok((false, format!("extra poles: denominator factor {extra:?} is coprime to the critical points")));
    }
    let ff: RatFun<F> = to_field(f);
    let mut notes = vec![];
    for a in 0..curve.crit.len() {
        let (ok, w) = check_xihat(&ff, curve, a)?;
        if !ok {
            return Ok((false, w));
        }
        notes.push(w);
    }
    Ok((true, notes.join("; ")))
}

/// `Xi-hat` membership of a rational function at every critical point.
pub fn check_xihat_all<F: Scalar>(f: &RatFun<Q>, curve: &Curve<F>) -> Result<(bool, String)> {
    let ff: RatFun<F> = to_field(f);
    let mut notes = vec![];
    for a in 0..curve.crit.len() {
        let (ok, w) = check_xihat(&ff, curve, a)?;
        if !ok {
            return Ok((false, w));
        }
        notes.push(w);
    }
    Ok((true, notes.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple() -> Curve<Q> {
        Curve::build(&Model::simple_hurwitz()).unwrap()
    }

    #[test]
    fn simple_pole_is_odd() {
        let f = RatFun::from_ints(&[1], &[-1, 1]);
        assert!(check_xihat(&f, &simple(), 0).unwrap().0);
    }

    #[test]
    fn double_pole_is_even() {
        let f = RatFun::from_ints(&[1], &[1, -2, 1]);
        let (ok, w) = check_xihat(&f, &simple(), 0).unwrap();
        assert!(!ok);
        assert!(w.contains("nu^-2"), "{w}");
    }

    #[test]
    fn even_model_deck_is_exact() {
        // x = x(p) + t^2 when Q(p + t) (p + t)^-1 = 2t: sigma = -t
        let f = RatFun::from_ints(&[1], &[1, -2, 1]);
        let c = simple();
        let (_, w) = xihat_sigma(&f, &c, 0).unwrap();
        assert!(w.contains("t^-2"), "{w}");
    }

    #[test]
    fn monotone_w11() {
        let m = Model::monotone_hurwitz();
        let cf = ClosedForm::<Q>::new(&m).unwrap();
        let w = cf.w(1, &[30]).unwrap();
        let p = pin(&w, 1, 30, 1).unwrap();
        let c = Curve::<Q>::build(&m).unwrap();
        assert!(check_xihat_all(&p.slices[0].1, &c).unwrap().0);
    }
}
