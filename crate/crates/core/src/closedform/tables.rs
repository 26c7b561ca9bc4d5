//! Precomputed action of the `U`, `U-bar` and `U-tilde` operators on monomials.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::Result;
use crate::model::Model;
use crate::scalar::{Scalar, Q};
use crate::series::multi::unit;
use crate::series::{inv_s_coeffs, rho, s_coeffs, MSeries, Series, Window};

// local variables of the tables
pub const LZ: usize = 0;
pub const LH: usize = 1;
/// the formal variable `u` of the higher loop equations
pub const LU: usize = 2;
const LV: usize = 3;
const LY: usize = 4;
const LUI: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// `U_i`: sum over `j >= 0` of `D^j`.
    U,
    /// `U-bar_i`: sum over `j >= 1` of `D^(j-1)`.
    UBar,
    /// `U-tilde_1` with the extra factor `u S(v u h) e^(u y)`, kept to `u^rmax`.
    UTilde(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableKey {
    pub kind: OpKind,
    /// coefficients `z^0 .. z^(zprec-1)` of the multipliers are kept
    pub zprec: i16,
    /// top of the output window in `z`
    pub ztop: i16,
    /// largest `h` exponent kept in the output
    pub hcap: i16,
    /// largest `u_i` exponent of the inputs
    pub smax: i16,
}

pub(crate) fn conv<F: Scalar>(s: &Series<Q>) -> Series<F> {
    s.map(|x| F::from_rational(&x.0))
}

/// `sum_a c_a y^a` as an [`MSeries`] in variable `var`.
pub(crate) fn ms_of<F: Scalar>(var: usize, s: &Series<F>) -> MSeries<F> {
    MSeries::from_series(var, s)
}

/// Origin data shared by the operator tables and the `n = 1, 2` formulas.
pub struct OriginData<F: Scalar> {
    pub zprec: i32,
    pub y: Series<F>,
    /// powers `y(z)^a`, `a = 0..zprec`
    pub ypow: Vec<Series<F>>,
    pub qinv: Series<F>,
    /// `D y = z y' / Q`
    pub dy: Series<F>,
    pub q: Series<F>,
}

impl<F: Scalar> OriginData<F> {
    pub fn new(model: &Model, zprec: i32) -> Result<Self> {
        let p = zprec.max(2);
        let y: Series<F> = conv(&model.y_hat_series(0, p)?[0]);
        let mut ypow = vec![Series::one(p)];
        for a in 1..p {
            let next = ypow[a as usize - 1].mul_ref(&y).truncate(p);
            ypow.push(next);
        }
        let qf = model.q_function();
        let q: Series<F> = conv(&qf.expand_at(&Q::zero(), p)?);
        let qinv = q.inv()?.truncate(p);
        let dy = y.euler().mul_ref(&qinv).truncate(p);
        Ok(OriginData { zprec: p, y, ypow, qinv, dy, q })
    }

    /// Substitutes `y -> y(z)` in an [`MSeries`] whose variable `LY` is `y`.
    pub fn subst_y(&self, f: &MSeries<F>) -> Result<MSeries<F>> {
        let mut out = MSeries::zero();
        for (m, c) in &f.terms {
            let a = m[LY];
            if a as i32 >= self.zprec {
                continue;
            }
            let mut base = *m;
            base[LY] = 0;
            let yp = &self.ypow[a as usize];
            for (e, yc) in yp.terms() {
                if e >= self.zprec {
                    continue;
                }
                let mut mm = base;
                mm[LZ] += e as i16;
                out.add_term(mm, &c.mul_ref(yc));
            }
        }
        Ok(out)
    }
}

/// `D f = Q^(-1) z d/dz f` on the local variable `LZ`, pruned by `w`.
pub(crate) fn d_op<F: Scalar>(f: &MSeries<F>, qinv: &MSeries<F>, w: &Window) -> MSeries<F> {
    f.euler(LZ).mul_win(qinv, w)
}

/// Multipliers `M_{j,s}(z, h)` and the cached monomial images.
pub struct OpTable<F: Scalar> {
    pub key: TableKey,
    /// `L[r][j]` in local variables `(LZ, LH, LU)`.
    pub l: Vec<Vec<MSeries<F>>>,
    /// `m[s][j]`
    m: Vec<Vec<MSeries<F>>>,
    qinv: MSeries<F>,
    cache: Mutex<HashMap<(i16, i16), MSeries<F>>>,
}

impl<F: Scalar> OpTable<F> {
    pub fn build(model: &Model, key: TableKey) -> Result<Self> {
        let n = key.zprec as i32;
        let hc = key.hcap as i32;
        let h1 = hc + 1;
        let mmax = (h1.max(0) / 2 + 1) as usize;
        let origin = OriginData::<F>::new(model, n)?;

        // E(u) = exp(u (S(u h z d) y_hat - y))
        let yhat: Vec<Series<F>> = model.y_hat_series(mmax, n)?.iter().map(conv).collect();
        let s = s_coeffs::<F>(mmax + 2);
        let is = inv_s_coeffs::<F>(mmax + 2);
        let mut arg = MSeries::zero();
        for k in 0..=mmax {
            let mut d = yhat.clone();
            for _ in 0..2 * k {
                d = d.iter().map(|x| x.euler()).collect();
            }
            for (m, dm) in d.iter().enumerate() {
                let hp = 2 * k + 2 * m;
                if (k, m) == (0, 0) || hp as i32 > h1 {
                    continue;
                }
                for (e, c) in dm.terms() {
                    if e >= n {
                        continue;
                    }
                    let mut mono = unit(LZ, e as i16);
                    mono[LUI] = (2 * k + 1) as i16;
                    mono[LH] = hp as i16;
                    arg.add_term(mono, &c.mul_ref(&s[k]));
                }
            }
        }
        let wz = Window::all().hi(LZ, n as i16 - 1).hi(LH, h1 as i16);
        let e_u = MSeries::one().add_ref(&arg.exp_minus_one(&wz, h1.max(1) as usize));
        let mut ginv = MSeries::zero();
        for (k, c) in is.iter().enumerate() {
            let p = 2 * k as i16 - 1;
            if p as i32 > hc {
                break;
            }
            let mut mono = unit(LUI, p);
            mono[LH] = p;
            ginv.add_term(mono, c);
        }
        let g = e_u.mul_win(&ginv, &Window::all().hi(LZ, n as i16 - 1).hi(LH, hc as i16));
        let gsplit: HashMap<i16, MSeries<F>> = g.split(LUI).into_iter().collect();
        let tmax = g.max_exp(LUI).unwrap_or(-1);
        let rmax = (key.smax + tmax).max(0) as i32 + 1;

        // Phi(y, v, h) = exp(v (S(v h d_y)/S(h d_y) psi_hat - psi))
        let ny = n + rmax + 1;
        let psi: Vec<Series<F>> = model.psi_hat_series(mmax, ny + 2 * mmax as i32 + 2)?.iter().map(conv).collect();
        let mut delta = MSeries::zero();
        for k in 0..=mmax {
            let rk = rho::<F>(k);
            for (m, pm) in psi.iter().enumerate() {
                let hp = 2 * k + 2 * m;
                if (k, m) == (0, 0) || hp as i32 > h1 {
                    continue;
                }
                let mut d = pm.clone();
                for _ in 0..2 * k {
                    d = d.deriv();
                }
                for (a, c) in d.terms() {
                    if a >= ny {
                        continue;
                    }
                    for (vi, rc) in rk.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let mut mono = unit(LY, a as i16);
                        mono[LV] = vi as i16 + 1;
                        mono[LH] = hp as i16;
                        delta.add_term(mono, &c.mul_ref(rc));
                    }
                }
            }
        }
        let wy = Window::all().hi(LY, ny as i16 - 1).hi(LH, h1 as i16);
        let mut phi = MSeries::one().add_ref(&delta.exp_minus_one(&wy, h1.max(1) as usize));
        if let OpKind::UTilde(rw) = key.kind {
            // u S(v u h) e^(u y)
            let mut extra = MSeries::zero();
            let mut fact = F::one();
            for a in 0..rw as i64 {
                if a > 0 {
                    fact *= F::from_i64(a);
                }
                for (k, sk) in s.iter().enumerate() {
                    let up = 2 * k as i64 + 1 + a;
                    if up > rw as i64 || 2 * k as i32 > h1 {
                        break;
                    }
                    let mut mono = unit(LY, a as i16);
                    mono[LV] = 2 * k as i16;
                    mono[LU] = up as i16;
                    mono[LH] = 2 * k as i16;
                    extra.add_term(mono, &sk.mul_ref(&fact.inv()));
                }
            }
            phi = phi.mul_win(&extra, &wy);
        }
        let psi1 = ms_of(LY, &psi[0].deriv()).shift(LV, 1);
        let mut l = vec![];
        let mut p = phi;
        for r in 0..=rmax {
            let byv = origin.subst_y(&p)?.split(LV);
            let jmax = byv.last().map(|x| x.0).unwrap_or(0);
            let mut dense = vec![MSeries::zero(); jmax as usize + 1];
            for (j, x) in byv {
                dense[j as usize] = x;
            }
            l.push(dense);
            if r < rmax {
                let w = Window::all().hi(LY, (ny - 2 - r) as i16).hi(LH, h1 as i16);
                let mut next = p.deriv(LY);
                next.add_assign_ref(&p.mul_win(&psi1, &w));
                next.prune(&w);
                p = next;
            }
        }

        let qinv = ms_of(LZ, &origin.qinv);
        let wm = Window::all().hi(LZ, n as i16 - 1).hi(LH, hc as i16);
        let mut m = vec![];
        for s_ in 0..=key.smax {
            let mut row: Vec<MSeries<F>> = vec![];
            for (r, lr) in l.iter().enumerate() {
                let Some(gt) = gsplit.get(&(r as i16 - s_)) else { continue };
                for (j, lrj) in lr.iter().enumerate() {
                    if lrj.is_empty() {
                        continue;
                    }
                    if row.len() <= j {
                        row.resize(j + 1, MSeries::zero());
                    }
                    let prod = lrj.mul_win(gt, &wm);
                    row[j].add_assign_ref(&prod);
                }
            }
            let row = row.into_iter().map(|x| x.mul_win(&qinv, &wm)).collect();
            m.push(row);
        }
        Ok(OpTable { key, l, m, qinv, cache: Mutex::new(HashMap::new()) })
    }

    /// Image of `z^e u_i^s` (variables `LZ`, `LH`, `LU`).
    pub fn image(&self, e: i16, s: i16) -> MSeries<F> {
        if let Some(v) = self.cache.lock().unwrap().get(&(e, s)) {
            return v.clone();
        }
        let v = self.compute(e, s);
        self.cache.lock().unwrap().insert((e, s), v.clone());
        v
    }

    fn compute(&self, e: i16, s: i16) -> MSeries<F> {
        let k = self.key;
        assert!(s <= k.smax, "u exponent {s} above table bound {}", k.smax);
        assert!(k.ztop - e < k.zprec, "z exponent {e} below table range");
        let Some(row) = self.m.get(s as usize) else { return MSeries::zero() };
        let w = Window::all().hi(LZ, k.ztop).hi(LH, k.hcap);
        let ze = MSeries::term(unit(LZ, e), F::one());
        let first = if k.kind == OpKind::UBar { 1 } else { 0 };
        let mut acc = MSeries::zero();
        for j in (first..row.len()).rev() {
            if !acc.is_empty() {
                acc = d_op(&acc, &self.qinv, &w);
            }
            if !row[j].is_empty() {
                acc.add_assign_ref(&row[j].mul_win(&ze, &w));
            }
        }
        acc
    }
}
