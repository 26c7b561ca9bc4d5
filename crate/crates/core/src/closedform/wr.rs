//! The higher loop quantities `W^(r)_{g,n}`.
//!
//! Three independent routes:
//! * definitional: `r! [h^(2g-2+n) u^r] T_n` built from the `W_{g,n}` with
//!   restricted slots `z_i -> z_1` carrying `u h S(u h D_i)`;
//! * explicit expansions for `r = 2, 3` in terms of products of `W`s;
//! * the closed graph formula with `U-tilde_1` in place of `U_1`.
//!
//! Results are series in `z_1..z_n` (variables `0..n`) in the domain
//! `|z_j| < |z_1|`, so poles on the diagonals `z_1 = z_j` show up as negative
//! powers of `z_1`. Restricting both arguments of `W_{0,2}` to the same point
//! always uses the regular part `D_1 D_2 H_{0,2}`.

use super::tables::OpKind;
use super::{check_n, d_var, ClosedForm, Vars};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::multi::{unit, ONE};
use crate::series::{inv_s_coeffs, s_coeffs, MSeries, Series, Window};

/// Which route computes `W^(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WrMethod {
    Definitional,
    ClosedForm,
    /// Only `r <= 3`.
    Explicit,
}

// scratch slots for restricted arguments, and h, u
const TV: usize = 8;
const HV: usize = 14;
const UV: usize = 15;

/// The constant in front of `W_{g-1,n}` in the `r = 3` expansion.
pub const CW3_SHIFT: (i64, i64) = (-1, 4);

impl<F: Scalar> ClosedForm<F> {
    /// `W^(r)_{g,n}(z_1; z_2..z_n)` with `z_i`-degree at most `ks[i]`.
    pub fn wr(&self, r: u32, g: u32, ks: &[i16], method: WrMethod) -> Result<MSeries<F>> {
        let n = ks.len();
        check_n(n)?;
        if r == 0 {
            return Ok(MSeries::zero());
        }
        if r > 6 {
            return Err(Error::Unsupported(format!("r = {r} above 6")));
        }
        let out = match method {
            WrMethod::Definitional => self.wr_definitional(r, g, ks)?,
            WrMethod::ClosedForm => self.wr_closed(r, g, ks)?,
            WrMethod::Explicit => match r {
                1 => self.slot_m(g as i32, 1, &rest(n), ks)?,
                2 => self.cw2(g, ks)?,
                3 => self.cw3(g, ks, CW3_SHIFT)?,
                _ => return Err(Error::Unsupported("explicit W^(r) only for r <= 3".into())),
            },
        };
        Ok(out.pruned(&final_window(ks)))
    }

    /// `W_{g', c+|J|}(z_1 (c times), z_J)` before restriction: the `c` copies
    /// of `z_1` sit in scratch slots.
    fn slot(&self, g: i32, c: usize, js: &[usize], ks: &[i16]) -> Result<MSeries<F>> {
        let m = c + js.len();
        if g < 0 || m == 0 {
            return Ok(MSeries::zero());
        }
        let kb = kbig(ks);
        if (g, m) == (0, 2) && c == 1 {
            return self.w02_full(TV, kb, js[0], ks[js[0]]);
        }
        let mut kk = vec![kb; c];
        kk.extend(js.iter().map(|&j| ks[j]));
        let w = self.w(g as u32, &kk)?;
        let mut perm: Vec<usize> = (0..c).map(|i| TV + i).collect();
        perm.extend_from_slice(js);
        Ok(w.permute(&perm))
    }

    /// [`Self::slot`] with the copies restricted to `z_1`.
    fn slot_m(&self, g: i32, c: usize, js: &[usize], ks: &[i16]) -> Result<MSeries<F>> {
        Ok(merge(&self.slot(g, c, js, ks)?, c))
    }

    /// `W_{0,2}(z_a, z_b) = z_a z_b / ((z_a - z_b)^2 Q_a Q_b)` for `|z_b| < |z_a|`.
    fn w02_full(&self, a: usize, ka: i16, b: usize, kb: i16) -> Result<MSeries<F>> {
        let qinv = self.qinv(ka.max(kb) as i32 + 1)?;
        let mut pole = MSeries::zero();
        for m in 1..=kb {
            let mut mono = ONE;
            mono[a] = -m;
            mono[b] = m;
            pole.add_term(mono, &F::from_i64(m as i64));
        }
        let w = Window::all().hi(a, ka).hi(b, kb);
        Ok(pole.mul_win(&MSeries::from_series(a, &qinv), &w).mul_win(&MSeries::from_series(b, &qinv), &w))
    }

    fn qinv(&self, prec: i32) -> Result<Series<F>> {
        Ok(super::tables::OriginData::<F>::new(&self.model, prec)?.qinv)
    }

    fn y_series(&self, prec: i32) -> Result<Series<F>> {
        Ok(super::tables::OriginData::<F>::new(&self.model, prec)?.y.truncate(prec))
    }

    fn wr_definitional(&self, r: u32, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        let hcap = 2 * g as i16 - 1 + n as i16;
        let kb = kbig(ks);
        let r16 = r as i16;
        let qinv = self.qinv(kb as i32 + 1)?;
        let s = s_coeffs::<F>(r as usize + 1);
        let is = inv_s_coeffs::<F>(r as usize + 1);
        let mut win = Window::all().hi(0, kb).hi(HV, hcap).hi(UV, r16);
        for j in 1..n {
            win = win.hi(j, ks[j]);
        }
        let others = rest(n);

        // T_{|J|+1}(z_1; z_J) for every subset J of {2..n}
        let mut t_of: Vec<MSeries<F>> = vec![];
        for mask in 0..(1usize << others.len()) {
            let js: Vec<usize> = others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|x| *x.1).collect();
            let mut t = MSeries::zero();
            let mut fact = F::one();
            for k in 1..=r as usize {
                fact *= F::from_i64(k as i64);
                let base = k as i16 + js.len() as i16 - 2;
                let mut gp = 0i32;
                while 2 * gp as i16 + base + k as i16 <= hcap {
                    let mut f = self.slot(gp, k, &js, ks)?;
                    for i in 0..k {
                        let v = TV + i;
                        let mut acc = MSeries::zero();
                        let mut d = f.clone();
                        for (a, sa) in s.iter().enumerate() {
                            let p = 1 + 2 * a as i16;
                            if p > r16 {
                                break;
                            }
                            if a > 0 {
                                let wv = win.hi(v, kb);
                                d = d_var(&d_var(&d, v, &qinv, &wv), v, &qinv, &wv);
                            }
                            let mut mono = unit(UV, p);
                            mono[HV] = p;
                            acc.add_assign_ref(&d.mul_win(&MSeries::term(mono, sa.clone()), &win.hi(HV, hcap - base - 2 * gp as i16)));
                        }
                        f = acc;
                    }
                    let f = merge(&f, k).shift(HV, base + 2 * gp as i16).pruned(&win);
                    t.add_scaled(&f, &fact.inv());
                    gp += 1;
                }
            }
            t_of.push(t);
        }

        // sum over l and ordered partitions of {2..n} into l possibly empty blocks
        let mut sum = MSeries::zero();
        let mut lfact = F::one();
        for l in 1..=r as usize {
            lfact *= F::from_i64(l as i64);
            let total = l.pow(others.len() as u32);
            for code in 0..total {
                let mut masks = vec![0usize; l];
                let mut c = code;
                for b in 0..others.len() {
                    masks[c % l] |= 1 << b;
                    c /= l;
                }
                let mut prod = MSeries::one();
                for &m in &masks {
                    prod = prod.mul_win(&t_of[m], &win);
                    if prod.is_empty() {
                        break;
                    }
                }
                sum.add_scaled(&prod, &lfact.inv());
            }
        }

        // S(u h D_1) / (h S(u h))
        let mut pre = MSeries::zero();
        let mut d = sum;
        for (a, sa) in s.iter().enumerate() {
            if 2 * a as i16 > r16 {
                break;
            }
            if a > 0 {
                d = d_var(&d_var(&d, 0, &qinv, &win), 0, &qinv, &win);
            }
            let mut mono = unit(UV, 2 * a as i16);
            mono[HV] = 2 * a as i16;
            pre.add_assign_ref(&d.mul_win(&MSeries::term(mono, sa.clone()), &win));
        }
        let mut inv = MSeries::zero();
        for (b, c) in is.iter().enumerate() {
            if 2 * b as i16 > r16 {
                break;
            }
            let mut mono = unit(UV, 2 * b as i16);
            mono[HV] = 2 * b as i16;
            inv.add_term(mono, c);
        }
        let full = pre.mul_win(&inv, &win);
        Ok(full.coeff_of(HV, hcap).coeff_of(UV, r16).scale(&factorial::<F>(r)))
    }

    /// Explicit `r = 2` expansion.
    fn cw2(&self, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        let g = g as i32;
        let w = work_window(ks);
        let mut out = self.slot_m(g - 1, 2, &rest(n), ks)?;
        for (a, b) in subsets2(&rest(n)) {
            for g1 in 0..=g {
                let x = self.slot_m(g1, 1, &a, ks)?;
                let y = self.slot_m(g - g1, 1, &b, ks)?;
                out.add_assign_ref(&x.mul_win(&y, &w));
            }
        }
        Ok(out)
    }

    /// Explicit `r = 3` expansion; `shift = (p, q)` is the constant `p/q` in
    /// `(D_1^2/2 + p/q) W_{g-1,n}`.
    pub fn cw3(&self, g: u32, ks: &[i16], shift: (i64, i64)) -> Result<MSeries<F>> {
        let n = ks.len();
        let g = g as i32;
        let w = work_window(ks);
        let others = rest(n);
        let mut out = self.slot_m(g - 2, 3, &others, ks)?;
        let three = F::from_i64(3);
        for (a, b) in subsets2(&others) {
            for g1 in 0..=g - 1 {
                let x = self.slot_m(g1, 1, &a, ks)?;
                let y = self.slot_m(g - 1 - g1, 2, &b, ks)?;
                out.add_scaled(&x.mul_win(&y, &w), &three);
            }
        }
        let len = others.len();
        for code in 0..3usize.pow(len as u32) {
            let mut blocks: [Vec<usize>; 3] = Default::default();
            let mut c = code;
            for &j in &others {
                blocks[c % 3].push(j);
                c /= 3;
            }
            for g1 in 0..=g {
                for g2 in 0..=g - g1 {
                    let x = self.slot_m(g1, 1, &blocks[0], ks)?;
                    let y = self.slot_m(g2, 1, &blocks[1], ks)?;
                    let z = self.slot_m(g - g1 - g2, 1, &blocks[2], ks)?;
                    out.add_assign_ref(&x.mul_win(&y, &w).mul_win(&z, &w));
                }
            }
        }
        if g >= 1 {
            let base = self.slot_m(g - 1, 1, &others, ks)?;
            let qinv = self.qinv(kbig(ks) as i32 + 1)?;
            let d2 = d_var(&d_var(&base, 0, &qinv, &w), 0, &qinv, &w);
            out.add_scaled(&d2, &F::from_frac(1, 2));
            out.add_scaled(&base, &F::from_frac(shift.0, shift.1));
        }
        Ok(out)
    }

    fn wr_closed(&self, r: u32, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        let rf = factorial::<F>(r);
        match (g, n) {
            (0, 1) => {
                let y = self.y_series(ks[0] as i32 + 1)?;
                Ok(MSeries::from_series(0, &y.pow(r)))
            }
            (0, 2) => {
                // r y^(r-1) W_{0,2}
                let y = self.y_series(kbig(ks) as i32 + 1)?;
                let lead = MSeries::from_series(0, &y.pow(r - 1)).scale(&F::from_i64(r as i64));
                let w02 = self.w02_full(0, kbig(ks), 1, ks[1])?;
                Ok(lead.mul_win(&w02, &work_window(ks)))
            }
            (_, 1) => {
                let w = self.w_g1(g, ks[0], OpKind::UTilde(r as u8))?;
                Ok(w.coeff_of(Vars { n: 1 }.uw(), r as i16).scale(&rf))
            }
            _ => {
                let w = self.w_graphs(g, ks, Some(r as u8), true)?;
                Ok(w.coeff_of(Vars { n }.uw(), r as i16).scale(&rf))
            }
        }
    }
}

fn factorial<F: Scalar>(r: u32) -> F {
    (1..=r as i64).fold(F::one(), |a, k| a * F::from_i64(k))
}

fn rest(n: usize) -> Vec<usize> {
    (1..n).collect()
}

/// Degree budget for `z_1` in intermediate factors.
fn kbig(ks: &[i16]) -> i16 {
    ks.iter().sum()
}

fn work_window(ks: &[i16]) -> Window {
    let mut w = Window::all().hi(0, kbig(ks));
    for (j, &k) in ks.iter().enumerate().skip(1) {
        w = w.hi(j, k);
    }
    w
}

fn final_window(ks: &[i16]) -> Window {
    work_window(ks).hi(0, ks[0])
}

fn merge<F: Scalar>(f: &MSeries<F>, c: usize) -> MSeries<F> {
    let mut out = f.clone();
    for i in 0..c {
        out = out.merge_var(TV + i, 0);
    }
    out
}

/// Ordered pairs `(I, J)` with `I` and `J` a partition of `set`.
fn subsets2(set: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..1usize << set.len())
        .map(|mask| {
            let (mut a, mut b) = (vec![], vec![]);
            for (i, &x) in set.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.push(x)
                } else {
                    b.push(x)
                }
            }
            (a, b)
        })
        .collect()
}
