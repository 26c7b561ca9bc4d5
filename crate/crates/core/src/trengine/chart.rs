//! Local charts at the zeros of `dx`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::model::Curve;
use crate::scalar::Scalar;
use crate::series::Series;

/// Invariant named when a simple-point operation meets a higher-order zero.
pub const INV_SIMPLE: &str = "simple critical point";

/// Expansion data at a critical point `p_a`, in the coordinate `t = z - p_a`.
///
/// `nu` is the normalising coordinate with `nu^m = (x(p+t) - x(p)) / c`;
/// the local sheets are `t_k(t) = t(zeta^k nu(t))` for a primitive `m`-th
/// root of unity `zeta`.
pub struct Chart<F: Scalar> {
    pub a: usize,
    pub p: F,
    /// number of local sheets
    pub m: u32,
    pub prec: i32,
    /// `x'(p+t)`
    pub dx: Series<F>,
    /// `x(p+t) - x(p)`
    pub xt: Series<F>,
    /// `y(p+t) - y(p)`
    pub yt: Series<F>,
    pub nu: Series<F>,
    pub t_of_nu: Series<F>,
    /// `sheets[0] = t`; the others are the remaining points of the fibre of `x`
    pub sheets: Vec<Series<F>>,
    pub dsheets: Vec<Series<F>>,
    /// `y(p + t_k) - y(p)`
    pub ysheets: Vec<Series<F>>,
    crit: Vec<F>,
    basis: Mutex<HashMap<(usize, u16, u16), Series<F>>>,
}

impl<F: Scalar> Chart<F> {
    /// Builds the chart at `curve.crit[a]` with series known to `O(t^prec)`.
    /// For `m > 2` the sheets need roots of unity, i.e. numeric mode.
    pub fn new(curve: &Curve<F>, a: usize, prec: i32) -> Result<Self> {
        let cp = &curve.crit[a];
        let m = cp.sheets();
        let p = cp.p.clone();
        let mut dx = curve.dx_at(a, prec)?;
        // at an approximate root the coefficients below t^(m-1) are rounding noise
        let scale = dx.c.iter().map(|x| x.abs_f64()).fold(1.0, f64::max);
        for e in 0..m as i32 - 1 {
            let c = dx.coeff(e);
            if !c.is_zero() {
                if !c.near_zero(scale) {
                    return Err(Error::Computation(format!("dx does not vanish to order {} at critical point {a}", m - 1)));
                }
                dx.c[(e - dx.val) as usize] = F::zero();
            }
        }
        let dx = dx.normalized();
        let xt = dx.integrate()?;
        let dy = curve.dy_at(a, prec)?;
        let yt = dy.integrate()?;
        let lead = xt.clone().normalized();
        if lead.valuation() != Some(m as i32) {
            return Err(Error::Computation(format!("x has unexpected order at critical point {a}")));
        }
        let c = lead.c[0].clone();
        let mut unit = lead.shift(-(m as i32)).scale(&c.inv());
        unit.c[0] = F::one();
        let nu = unit.pow_frac(&F::from_frac(1, m as i64))?.shift(1);
        let t_of_nu = nu.reversion()?;
        let mut sheets = vec![Series::var(crate::series::INF)];
        if m == 2 {
            sheets.push(t_of_nu.compose(&nu.neg_ref())?);
        } else {
            let Some(zeta) = F::root_of_unity(m) else {
                return Err(Error::Unsupported(format!(
                    "critical point {a} has {m} sheets; the sheets need {m}-th roots of unity (numeric mode)"
                )));
            };
            let mut zk = F::one();
            for _ in 1..m {
                zk *= &zeta;
                sheets.push(t_of_nu.compose(&nu.scale(&zk))?);
            }
        }
        let dsheets = sheets.iter().map(|s| s.deriv()).collect();
        let ysheets = sheets.iter().map(|s| yt.compose(s)).collect::<Result<Vec<_>>>()?;
        let crit = curve.crit.iter().map(|c| c.p.clone()).collect();
        Ok(Chart { a, p, m, prec, dx, xt, yt, nu, t_of_nu, sheets, dsheets, ysheets, crit, basis: Mutex::new(HashMap::new()) })
    }

    /// The deck transformation `sigma(t) = -t + O(t^2)` at a simple point.
    pub fn deck(&self) -> Result<&Series<F>> {
        if self.m != 2 {
            return Err(Error::validation(INV_SIMPLE, format!("point {} has {} sheets; use the Bouchard-Eynard step", self.a, self.m)));
        }
        Ok(&self.sheets[1])
    }

    /// Reorders the sheets `1..m`; sheet 0 is the identity and stays put.
    pub fn relabel(&mut self, perm: &[usize]) {
        let pick = |v: &Vec<Series<F>>| {
            let mut out = vec![v[0].clone()];
            out.extend(perm.iter().map(|&i| v[i].clone()));
            out
        };
        self.sheets = pick(&self.sheets);
        self.dsheets = pick(&self.dsheets);
        self.ysheets = pick(&self.ysheets);
        self.basis.lock().unwrap().clear();
    }

    /// `t_k'(t) / (p_a + t_k(t) - p_b)^d`, the pullback of `dz/(z-p_b)^d`
    /// to sheet `k`, divided by `dt`.
    pub fn basis_at(&self, k: usize, b: usize, d: u16) -> Result<Series<F>> {
        if let Some(s) = self.basis.lock().unwrap().get(&(k, b as u16, d)) {
            return Ok(s.clone());
        }
        let tk = &self.sheets[k];
        let s = if b == self.a {
            tk.inv()?.pow(d as u32).mul_ref(&self.dsheets[k])
        } else {
            // (delta + s)^(-d) = sum binom(-d, l) delta^(-d-l) s^l
            let delta = self.p.sub_ref(&self.crit[b]);
            let dinv = delta.inv();
            let mut c = Vec::with_capacity(self.prec as usize);
            let mut coef = dinv.powi(d as u32);
            for l in 0..self.prec as i64 {
                c.push(coef.clone());
                coef = coef * F::from_i64(-(d as i64) - l) / F::from_i64(l + 1) * &dinv;
            }
            Series::from_coeffs(c, self.prec).compose(tk)?.mul_ref(&self.dsheets[k])
        };
        self.basis.lock().unwrap().insert((k, b as u16, d), s.clone());
        Ok(s)
    }

    /// `B(z_k, z_l) / (dt dt)` with both points on sheets of this chart.
    pub fn bergman_sheets(&self, k: usize, l: usize) -> Result<Series<F>> {
        let diff = self.sheets[k].sub_ref(&self.sheets[l]);
        Ok(diff.inv()?.pow(2).mul_ref(&self.dsheets[k]).mul_ref(&self.dsheets[l]))
    }

    /// Pullback of `B(z, z')` with `z` on sheet `k` and `z'` global, as a list
    /// of `(d, series)`: `B = sum_d series(t) dt dz'/(z'-p_a)^d`.
    pub fn bergman_mixed(&self, k: usize, max_pow: i32) -> Vec<(u16, Series<F>)> {
        // 1/(z' - p - s)^2 = sum_l (l+1) s^l / (z'-p)^(l+2)
        let tk = &self.sheets[k];
        let mut out = vec![];
        let mut sp = Series::one(crate::series::INF);
        for l in 0..max_pow.max(0) {
            if l > 0 {
                sp = sp.mul_ref(tk);
            }
            let v = sp.clone().normalized().valuation().unwrap_or(l);
            if v >= self.prec {
                break;
            }
            out.push(((l + 2) as u16, sp.mul_ref(&self.dsheets[k]).scale(&F::from_i64(l as i64 + 1))));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::scalar::{C, Q};

    #[test]
    fn deck_simple_hurwitz() {
        // x = log z - z at p = 1
        let c = Curve::<Q>::build(&Model::simple_hurwitz()).unwrap();
        let ch = Chart::new(&c, 0, 10).unwrap();
        let s = ch.deck().unwrap();
        assert_eq!(s.coeff(1), Q::from_i64(-1));
        assert_eq!(s.coeff(2), Q::new(2, 3));
        // x(sigma(t)) = x(t) and sigma(sigma(t)) = t
        let xs = ch.xt.compose(s).unwrap().sub_ref(&ch.xt);
        assert!(xs.is_zero());
        let ss = s.compose(s).unwrap().sub_ref(&Series::var(INF_TEST));
        assert!(ss.is_zero() && ss.prec >= 8);
    }

    const INF_TEST: i32 = crate::series::INF;

    #[test]
    fn sheets_of_a_double_zero() {
        crate::scalar::set_numeric_digits(60);
        let c = Curve::<C>::build(&Model::double_zero()).unwrap();
        let ch = Chart::new(&c, 0, 12).unwrap();
        assert_eq!(ch.m, 3);
        for k in 1..3 {
            let d = ch.xt.compose(&ch.sheets[k]).unwrap().sub_ref(&ch.xt);
            assert!(d.c.iter().all(|x| x.abs_f64() < 1e-50), "sheet {k}");
        }
        // the sheets form a group: t_1(t_1(t)) = t_2(t)
        let tt = ch.sheets[1].compose(&ch.sheets[1]).unwrap().sub_ref(&ch.sheets[2]);
        assert!(tt.c.iter().all(|x| x.abs_f64() < 1e-50));
    }

    #[test]
    fn exact_field_rejects_three_sheets() {
        let c = Curve::<Q>::build(&Model::double_zero()).unwrap();
        assert!(matches!(Chart::new(&c, 0, 8), Err(Error::Unsupported(_))));
    }
}
