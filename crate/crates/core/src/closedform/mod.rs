//! Closed algebraic formulas for `W_{g,n}` and `H_{g,n}` as Taylor series at
//! `z_1 = ... = z_n = 0`.
//!
//! Edge weights `z_k z_l / (z_k - z_l)^2` are expanded in an ordered domain
//! `|z_inner| < |z_outer|`. The final functions have no diagonal poles, so
//! after all operators act the negative powers cancel and what remains is
//! the Taylor expansion. A few negative orders are kept to assert this.

pub mod graphs;
pub mod tables;
pub mod wr;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::{Scalar, Q};
use crate::series::multi::{Mono, MAXV, ONE};
use crate::series::{inv_s_coeffs, s_coeffs, MSeries, Series, Window};
use tables::{conv, OpKind, OpTable, OriginData, TableKey, LH, LU, LZ};

/// Largest number of points the engine handles.
pub const MAX_N: usize = 7;

/// Global variable layout for `n` points: `z_i = i`, `u_i = n + i`, `h = 2n`,
/// and the formal `u` of the higher loop equations at `2n + 1`.
#[derive(Clone, Copy, Debug)]
pub struct Vars {
    pub n: usize,
}

impl Vars {
    pub fn z(&self, i: usize) -> usize {
        i
    }
    pub fn u(&self, i: usize) -> usize {
        self.n + i
    }
    pub fn h(&self) -> usize {
        2 * self.n
    }
    pub fn uw(&self) -> usize {
        2 * self.n + 1
    }
}

/// Ranks and per-graph truncation bounds.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub rank: Vec<usize>,
    pub k: Vec<i16>,
}

impl Layout {
    pub fn new(ks: &[i16]) -> Self {
        let n = ks.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (ks[i], i));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Layout { rank, k: ks.to_vec() }
    }

    /// Same, but with `z_1` outermost: expansions hold in `|z_j| < |z_1|`.
    pub fn outer_first(ks: &[i16]) -> Self {
        let mut lay = Self::new(&ks[1..]);
        lay.rank.insert(0, ks.len() - 1);
        lay.k = ks.to_vec();
        lay
    }

    /// `(inner, outer)` for a pair.
    pub fn orient(&self, a: usize, b: usize) -> (usize, usize) {
        if self.rank[a] < self.rank[b] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Largest `m` that can contribute on each edge of a graph.
    pub fn bounds(&self, edges: &[(usize, usize)]) -> Vec<i16> {
        let n = self.k.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.rank[i]);
        let mut out_sum = vec![0i16; n];
        let mut mb = vec![0i16; edges.len()];
        for &v in &order {
            let b = self.k[v] + out_sum[v];
            for (ei, &(x, y)) in edges.iter().enumerate() {
                let (inner, outer) = self.orient(x, y);
                if inner == v {
                    mb[ei] = b;
                    out_sum[outer] += b;
                }
            }
        }
        mb
    }
}

pub struct ClosedForm<F: Scalar> {
    pub model: Model,
    tables: Mutex<HashMap<TableKey, Arc<OpTable<F>>>>,
}

fn round_up(x: i16, m: i16) -> i16 {
    (x + m - 1) / m * m
}

impl<F: Scalar> ClosedForm<F> {
    pub fn new(model: &Model) -> Result<Self> {
        model.validate()?;
        Ok(ClosedForm { model: model.clone(), tables: Mutex::new(HashMap::new()) })
    }

    pub(crate) fn table(&self, key: TableKey) -> Result<Arc<OpTable<F>>> {
        // reuse any table that covers the request
        {
            let t = self.tables.lock().unwrap();
            for (k, v) in t.iter() {
                if k.kind == key.kind && k.ztop == key.ztop && k.zprec >= key.zprec && k.hcap >= key.hcap && k.smax >= key.smax {
                    return Ok(v.clone());
                }
            }
        }
        let key = TableKey { zprec: round_up(key.zprec, 4), smax: round_up(key.smax.max(1), 2), ..key };
        let t = Arc::new(OpTable::build(&self.model, key)?);
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    /// Applies `U_i`-type operator `kind` in variable `i`. Output keeps
    /// `z_i <= ztop` and `h <= hcap`.
    pub(crate) fn apply(&self, f: &MSeries<F>, vars: Vars, i: usize, kind: OpKind, ztop: i16, hcap: i16) -> Result<MSeries<F>> {
        if f.is_empty() {
            return Ok(MSeries::zero());
        }
        let (zi, ui, hb, uw) = (vars.z(i), vars.u(i), vars.h(), vars.uw());
        let zmin = f.min_exp(zi).unwrap_or(0).min(0);
        let smax = f.max_exp(ui).unwrap_or(0).max(0);
        let hmin = f.min_exp(hb).unwrap_or(0);
        let key = TableKey { kind, zprec: ztop - zmin + 1, ztop, hcap: hcap - hmin, smax };
        let table = self.table(key)?;
        let mut out = MSeries::zero();
        for (m, c) in &f.terms {
            let (e, s) = (m[zi], m[ui]);
            if e > ztop {
                continue;
            }
            let img = table.image(e, s);
            let mut base = *m;
            base[zi] = 0;
            base[ui] = 0;
            for (tm, tc) in &img.terms {
                let mut mm = base;
                mm[zi] = tm[LZ];
                mm[hb] += tm[LH];
                mm[uw] += tm[LU];
                if mm[hb] > hcap {
                    continue;
                }
                out.add_term(mm, &c.mul_ref(tc));
            }
        }
        Ok(out)
    }

    /// `w_{a,b} = exp(h^2 u_a u_b S(u_a h D_a) S(u_b h D_b) z_a z_b/(z_a - z_b)^2) - 1`
    /// for `a` inner, truncated at `m <= mb` and `h <= hcap`.
    pub(crate) fn edge(&self, vars: Vars, a: usize, b: usize, mb: i16, hcap: i16) -> MSeries<F> {
        let s = s_coeffs::<F>((hcap.max(0) / 2 + 1) as usize);
        let mut arg = MSeries::zero();
        for m in 1..=mb {
            let mf = F::from_i64(m as i64);
            let m2 = mf.mul_ref(&mf);
            for p in 0..s.len() {
                for q in 0..s.len() {
                    let hp = 2 + 2 * p + 2 * q;
                    if hp as i16 > hcap {
                        continue;
                    }
                    let c = mf.mul_ref(&s[p]).mul_ref(&s[q]).mul_ref(&m2.powi((p + q) as u32));
                    let mut mono = ONE;
                    mono[vars.z(a)] = m;
                    mono[vars.z(b)] = -m;
                    mono[vars.u(a)] = 2 * p as i16 + 1;
                    mono[vars.u(b)] = 2 * q as i16 + 1;
                    mono[vars.h()] = hp as i16;
                    arg.add_term(mono, &c);
                }
            }
        }
        let w = Window::all().hi(vars.z(a), mb).hi(vars.h(), hcap);
        arg.exp_minus_one(&w, (hcap.max(0) / 2) as usize)
    }

    /// `h u_k S(u_k h z_k d_k) z_i/(z_k - z_i)` in the ordered domain.
    pub(crate) fn leaf_term(&self, vars: Vars, lay: &Layout, k: usize, i: usize, mb: i16, hcap: i16) -> MSeries<F> {
        let s = s_coeffs::<F>((hcap.max(0) / 2 + 1) as usize);
        let i_inner = lay.rank[i] < lay.rank[k];
        let mut out = MSeries::zero();
        let range: Vec<i16> = if i_inner { (1..=mb).collect() } else { (0..=mb).collect() };
        for m in range {
            let m2 = F::from_i64((m as i64) * (m as i64));
            for (a, sa) in s.iter().enumerate() {
                let hp = 1 + 2 * a as i16;
                if hp > hcap {
                    break;
                }
                let mut c = sa.mul_ref(&m2.powi(a as u32));
                let mut mono = ONE;
                if i_inner {
                    mono[vars.z(i)] = m;
                    mono[vars.z(k)] = -m;
                } else {
                    c = -c;
                    mono[vars.z(k)] = m;
                    mono[vars.z(i)] = -m;
                }
                mono[vars.u(k)] = 2 * a as i16 + 1;
                mono[vars.h()] = hp;
                out.add_term(mono, &c);
            }
        }
        out
    }

    /// Product of factors with the inner-side windows of the ordered domain.
    /// `factors[j] = (series, pair (inner, outer), bound, min h order)`.
    fn product(&self, vars: Vars, lay: &Layout, factors: Vec<(MSeries<F>, (usize, usize), i16, i16)>, hcap: i16, fixed: &[usize]) -> MSeries<F> {
        let n = vars.n;
        let mut rem_out = vec![0i16; n];
        let mut rem_h: i16 = factors.iter().map(|f| f.3).sum();
        for f in &factors {
            rem_out[f.1 .1] += f.2;
        }
        let mut acc = MSeries::one();
        for (s, (_, outer), mb, hmin) in factors {
            rem_out[outer] -= mb;
            rem_h -= hmin;
            let mut w = Window::all().hi(vars.h(), hcap - rem_h);
            for v in 0..n {
                if fixed.contains(&v) {
                    w = w.with(vars.z(v), -2, lay.k[v]);
                } else {
                    w = w.hi(vars.z(v), lay.k[v] + rem_out[v]);
                }
            }
            acc = acc.mul_win(&s, &w);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Extracts `[h^t]` and checks that negative powers cancelled.
    fn finish(&self, f: &MSeries<F>, vars: Vars, t: i16, what: &str) -> Result<MSeries<F>> {
        self.finish_with(f, vars, t, what, false)
    }

    /// As [`Self::finish`]; with `outer1` negative powers of `z_1` are genuine
    /// and kept.
    fn finish_with(&self, f: &MSeries<F>, vars: Vars, t: i16, what: &str, outer1: bool) -> Result<MSeries<F>> {
        let c = f.coeff_of(vars.h(), t);
        let mut out = MSeries::zero();
        let scale = c.terms.values().map(|x| x.abs_f64()).fold(1.0, f64::max);
        for (m, x) in &c.terms {
            let from = if outer1 { 1 } else { 0 };
            if (from..vars.n).any(|i| m[i] < 0) {
                if !x.near_zero(scale * 1e6) {
                    return Err(Error::Computation(format!("{what}: uncancelled diagonal term {:?}", &m[..vars.n])));
                }
                continue;
            }
            if (vars.n..MAXV).any(|i| m[i] != 0 && i != vars.uw()) {
                return Err(Error::Computation(format!("{what}: leftover auxiliary variable in {:?}", &m[..])));
            }
            out.add_term(*m, x);
        }
        Ok(out)
    }

    /// `W_{g,n}` as a Taylor series in `z_1..z_n` (variables `0..n`), with
    /// `z_i`-degree at most `ks[i]`. For `(0,2)` this is the regular part
    /// `D_1 D_2 H_{0,2}`.
    pub fn w(&self, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        check_n(n)?;
        match (g, n) {
            (0, 1) => {
                let o = OriginData::<F>::new(&self.model, ks[0] as i32 + 1)?;
                Ok(MSeries::from_series(0, &o.y.truncate(ks[0] as i32 + 1)))
            }
            (_, 1) => self.w_g1(g, ks[0], OpKind::U),
            (0, 2) => {
                let h = self.h02(ks)?;
                let o = OriginData::<F>::new(&self.model, ks.iter().copied().max().unwrap() as i32 + 1)?;
                let w = Window::all().hi(0, ks[0]).hi(1, ks[1]);
                Ok(d_var(&d_var(&h, 0, &o.qinv, &w), 1, &o.qinv, &w))
            }
            _ => self.w_graphs(g, ks, None, false),
        }
    }

    /// `W_{g,1}`, or its `U-tilde` variant carrying the formal `u`.
    pub(crate) fn w_g1(&self, g: u32, k: i16, kind: OpKind) -> Result<MSeries<F>> {
        let t = 2 * g as i16;
        let key = TableKey { kind, zprec: k + 1, ztop: k, hcap: t - 1, smax: 0 };
        let table = self.table(key)?;
        let o = OriginData::<F>::new(&self.model, k as i32 + 1)?;
        // local layout: z = LZ, h = LH, u = LU
        let mut acc = table.image(0, 0).shift(LH, 1);
        let w = Window::all().hi(LZ, k).hi(LH, t);
        let qinv = MSeries::from_series(LZ, &o.qinv);
        let dy = MSeries::from_series(LZ, &o.dy);
        let l0 = &table.l[0];
        let mut horner = MSeries::zero();
        for j in (0..l0.len().saturating_sub(1)).rev() {
            if !horner.is_empty() {
                horner = tables::d_op(&horner, &qinv, &w);
            }
            horner.add_assign_ref(&l0[j + 1].mul_win(&dy, &w));
        }
        acc.add_assign_ref(&horner);
        let c = acc.coeff_of(LH, t);
        // move LU to the global slot of a one-point layout
        let vars = Vars { n: 1 };
        Ok(relabel(&c, &[(LZ, vars.z(0)), (LU, vars.uw())]))
    }

    /// Sum over connected graphs with the first operator optionally replaced
    /// by `U-tilde` (used by the higher loop equations). With `outer1` the
    /// expansion domain is `|z_j| < |z_1|` and the diagonal poles at
    /// `z_1 = z_j` survive as negative powers of `z_1`.
    pub(crate) fn w_graphs(&self, g: u32, ks: &[i16], tilde: Option<u8>, outer1: bool) -> Result<MSeries<F>> {
        let n = ks.len();
        let vars = Vars { n };
        let t = 2 * g as i16 - 2 + n as i16;
        let hcap0 = t + n as i16;
        let lay = if outer1 { Layout::outer_first(ks) } else { Layout::new(ks) };
        let max_e = (g as usize + n).saturating_sub(1);
        let mut total = MSeries::zero();
        let mut cache: HashMap<(usize, usize, i16), MSeries<F>> = HashMap::new();
        for gr in graphs::connected_graphs(n, max_e) {
            let mb = lay.bounds(&gr);
            let mut factors = vec![];
            for (ei, &(a, b)) in gr.iter().enumerate() {
                let (inner, outer) = lay.orient(a, b);
                let w = cache.entry((inner, outer, mb[ei])).or_insert_with(|| self.edge(vars, inner, outer, mb[ei], hcap0)).clone();
                factors.push((w, (inner, outer), mb[ei], 2));
            }
            let p = self.product(vars, &lay, factors, hcap0, &[]);
            total.add_assign_ref(&p);
        }
        for i in 0..n {
            let kind = match (i, tilde) {
                (0, Some(r)) => OpKind::UTilde(r),
                _ => OpKind::U,
            };
            let cap = t + (n - i - 1) as i16;
            total = self.apply(&total, vars, i, kind, ks[i], cap)?;
            let lo = if outer1 && i == 0 { i16::MIN } else { -2 };
            total.prune(&Window::all().with(vars.z(i), lo, ks[i]));
        }
        self.finish_with(&total, vars, t, &format!("W_{{{g},{n}}}"), outer1)
    }

    /// `H_{0,2} = log((z1-z2)/(X1-X2)) - log(z1/X1) - log(z2/X2)`, i.e.
    /// `-log((X(z1)-X(z2))/(z1-z2)) + log(X1/z1) + log(X2/z2)`.
    pub fn h02(&self, ks: &[i16]) -> Result<MSeries<F>> {
        let xs = self.x_series((ks[0] + ks[1]) as i32 + 2)?;
        // divided difference (X(z1) - X(z2))/(z1 - z2) = sum_k x_k sum_{a+b=k-1} z1^a z2^b
        let w = Window::all().hi(0, ks[0]).hi(1, ks[1]);
        let mut phi = MSeries::zero();
        for (k, c) in xs.terms() {
            for a in 0..k {
                let mut m = ONE;
                m[0] = a as i16;
                m[1] = (k - 1 - a) as i16;
                if w.contains(&m) {
                    phi.add_term(m, c);
                }
            }
        }
        let mut h = log1p(&phi.sub_ref(&MSeries::one()), &w, (ks[0] + ks[1]) as usize).scale(&F::from_i64(-1));
        let lxz = xs.shift(-1).log()?;
        for v in 0..2 {
            let mut s = MSeries::from_series(v, &lxz.truncate(ks[v] as i32 + 1));
            s.prune(&w);
            h.add_assign_ref(&s);
        }
        h.terms.remove(&ONE);
        Ok(h)
    }

    /// `X(z) = z exp(-psi(y(z)))`.
    pub fn x_series(&self, prec: i32) -> Result<Series<F>> {
        let psi: Series<F> = conv(&self.model.psi_hat_series(0, prec)?[0]);
        let y: Series<F> = conv(&self.model.y_hat_series(0, prec)?[0]);
        Ok(psi.compose(&y)?.neg_ref().exp()?.shift(1).truncate(prec))
    }

    /// `H_{g,n}` as a Taylor series in `z_1..z_n`, normalised by `H(0) = 0`.
    pub fn h(&self, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        check_n(n)?;
        let mut out = match (g, n) {
            (0, 1) => {
                let o = OriginData::<F>::new(&self.model, ks[0] as i32 + 2)?;
                let integrand = o.y.mul_ref(&o.q).shift(-1);
                MSeries::from_series(0, &integrand.integrate()?.truncate(ks[0] as i32 + 1))
            }
            (_, 1) => self.h_g1(g, ks[0])?,
            (0, 2) => self.h02(ks)?,
            (_, 2) => self.h_g2(g, ks)?,
            _ => self.h_graphs(g, ks)?,
        };
        out.terms.remove(&ONE);
        Ok(out)
    }

    fn h_g1(&self, g: u32, k: i16) -> Result<MSeries<F>> {
        let t = 2 * g as i16;
        let key = TableKey { kind: OpKind::UBar, zprec: k + 1, ztop: k, hcap: t - 1, smax: 0 };
        let table = self.table(key)?;
        let o = OriginData::<F>::new(&self.model, k as i32 + 2)?;
        let mut acc = table.image(0, 0).shift(LH, 1);
        let w = Window::all().hi(LZ, k).hi(LH, t);
        let qinv = MSeries::from_series(LZ, &o.qinv);
        let dy = MSeries::from_series(LZ, &o.dy);
        let l0 = &table.l[0];
        let mut horner = MSeries::zero();
        for j in (1..l0.len().saturating_sub(1)).rev() {
            if !horner.is_empty() {
                horner = tables::d_op(&horner, &qinv, &w);
            }
            horner.add_assign_ref(&l0[j + 1].mul_win(&dy, &w));
        }
        acc.add_assign_ref(&horner);
        let mut c = acc.coeff_of(LH, t);
        // int_0^z (y_hat - y)/z dz at h^(2g)
        let prec = k as i32 + 1;
        let yh = self.model.y_hat_series(g as usize, prec)?;
        let ym: Series<F> = conv(&yh[g as usize]);
        let int1 = ym.shift(-1).integrate()?;
        c.add_assign_ref(&MSeries::from_series(LZ, &int1.truncate(prec)));
        // int_0^{y(z)} Psi(y) dy, Psi = S(h d_y)^{-1} psi_hat - psi, at h^(2g)
        let psi = self.model.psi_hat_series(g as usize, prec + 2 * g as i32 + 1)?;
        let is = inv_s_coeffs::<Q>(g as usize);
        let mut big_psi = Series::<Q>::zero(prec + 1);
        for kk in 0..=g as usize {
            let m = g as usize - kk;
            let mut d = psi[m].clone();
            for _ in 0..2 * kk {
                d = d.deriv();
            }
            big_psi = big_psi.add_ref(&d.scale(&is[kk]).truncate(prec + 1));
        }
        let anti: Series<F> = conv(&big_psi.integrate()?);
        let int2 = anti.compose(&o.y)?.truncate(prec);
        c.add_assign_ref(&MSeries::from_series(LZ, &int2));
        Ok(c)
    }

    fn h_g2(&self, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let vars = Vars { n: 2 };
        let t = 2 * g as i16;
        let lay = Layout::new(ks);
        let (inner, outer) = lay.orient(0, 1);
        let mb = lay.bounds(&[(inner, outer)])[0];
        let mut total = self.edge(vars, inner, outer, mb, t + 2);
        total = self.apply(&total, vars, 0, OpKind::UBar, ks[0], t + 1)?;
        total.prune(&Window::all().with(vars.z(0), -2, ks[0]));
        total = self.apply(&total, vars, 1, OpKind::UBar, ks[1], t)?;
        total.prune(&Window::all().with(vars.z(1), -2, ks[1]));
        for (k, i) in [(0usize, 1usize), (1, 0)] {
            let tau = self.leaf_term(vars, &lay, k, i, mb, t + 1);
            let mut part = tau.pruned(&Window::all().with(vars.z(i), -2, ks[i]));
            part = self.apply(&part, vars, k, OpKind::UBar, ks[k], t)?;
            part.prune(&Window::all().with(vars.z(k), -2, ks[k]));
            total.add_assign_ref(&part);
        }
        self.finish(&total, vars, t, &format!("H_{{{g},2}}"))
    }

    fn h_graphs(&self, g: u32, ks: &[i16]) -> Result<MSeries<F>> {
        let n = ks.len();
        let vars = Vars { n };
        let t = 2 * g as i16 - 2 + n as i16;
        let lay = Layout::new(ks);
        let max_e = (g as usize + n).saturating_sub(1);
        let mut groups: HashMap<Vec<usize>, MSeries<F>> = HashMap::new();
        let mut edge_cache: HashMap<(usize, usize, i16, i16), MSeries<F>> = HashMap::new();
        let mut leaf_cache: HashMap<(usize, usize, i16, i16), MSeries<F>> = HashMap::new();
        for gr in graphs::connected_graphs(n, max_e) {
            let deg = graphs::degrees(n, &gr);
            let inner_set: Vec<usize> = (0..n).filter(|&v| deg[v] >= 2).collect();
            let hcap0 = t + inner_set.len() as i16;
            let mb = lay.bounds(&gr);
            let mut factors = vec![];
            let mut leaves = vec![];
            for (ei, &(a, b)) in gr.iter().enumerate() {
                let (inn, out) = lay.orient(a, b);
                let leaf = if deg[a] == 1 { Some((a, b)) } else if deg[b] == 1 { Some((b, a)) } else { None };
                match leaf {
                    None => {
                        let w = edge_cache.entry((inn, out, mb[ei], hcap0)).or_insert_with(|| self.edge(vars, inn, out, mb[ei], hcap0)).clone();
                        factors.push((w, (inn, out), mb[ei], 2));
                    }
                    Some((i, k)) => {
                        leaves.push(i);
                        let key = (i, k, mb[ei], hcap0);
                        let f = match leaf_cache.get(&key) {
                            Some(f) => f.clone(),
                            None => {
                                let w = self.edge(vars, inn, out, mb[ei], hcap0 + 1);
                                let mut f = self.apply(&w, vars, i, OpKind::UBar, ks[i], hcap0)?;
                                f.add_assign_ref(&self.leaf_term(vars, &lay, k, i, mb[ei], hcap0));
                                f.prune(&Window::all().with(vars.z(i), -2, ks[i]));
                                leaf_cache.insert(key, f.clone());
                                f
                            }
                        };
                        factors.push((f, (inn, out), mb[ei], 1));
                    }
                }
            }
            let p = self.product(vars, &lay, factors, hcap0, &leaves);
            let slot = groups.entry(inner_set).or_default();
            slot.add_assign_ref(&p);
        }
        let mut total = MSeries::zero();
        for (set, mut f) in groups {
            let cnt = set.len();
            for (j, &i) in set.iter().enumerate() {
                let cap = t + (cnt - j - 1) as i16;
                f = self.apply(&f, vars, i, OpKind::UBar, ks[i], cap)?;
                f.prune(&Window::all().with(vars.z(i), -2, ks[i]));
            }
            total.add_assign_ref(&f);
        }
        self.finish(&total, vars, t, &format!("H_{{{g},{n}}}"))
    }

    /// Substitutes `z_i = z(X_i)` for `i < n`; the result has the same
    /// per-variable degree bounds.
    pub fn to_x(&self, f: &MSeries<F>, ks: &[i16]) -> Result<MSeries<F>> {
        let kmax = ks.iter().copied().max().unwrap_or(0) as i32;
        let zx = self.x_series(kmax + 2)?.reversion()?;
        let mut pows = vec![Series::one(kmax + 1)];
        for e in 1..=kmax {
            let next = pows[e as usize - 1].mul_ref(&zx).truncate(kmax + 1);
            pows.push(next);
        }
        let mut cur = f.clone();
        for (i, &k) in ks.iter().enumerate() {
            let mut next = MSeries::zero();
            for (m, c) in &cur.terms {
                let e = m[i];
                if e < 0 {
                    return Err(Error::Computation("negative power in X-conversion".into()));
                }
                if e > k {
                    continue;
                }
                for (a, pc) in pows[e as usize].terms() {
                    if a > k as i32 {
                        break;
                    }
                    let mut mm = *m;
                    mm[i] = a as i16;
                    next.add_term(mm, &c.mul_ref(pc));
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `h_{g;k}` from the X-expansion of `H_{g,n}`.
    pub fn hurwitz_from_h(&self, g: u32, k: &[u32]) -> Result<F> {
        let ks: Vec<i16> = k.iter().map(|&x| x as i16).collect();
        let hx = self.to_x(&self.h(g, &ks)?, &ks)?;
        Ok(hx.coeff(&mono_of(&ks)))
    }

    /// `h_{g;k}` from the X-expansion of `W_{g,n}`.
    pub fn hurwitz_from_w(&self, g: u32, k: &[u32]) -> Result<F> {
        let ks: Vec<i16> = k.iter().map(|&x| x as i16).collect();
        let wx = self.to_x(&self.w(g, &ks)?, &ks)?;
        let prod: i64 = k.iter().map(|&x| x as i64).product();
        Ok(wx.coeff(&mono_of(&ks)) * F::from_frac(1, prod))
    }
}

pub(crate) fn mono_of(ks: &[i16]) -> Mono {
    let mut m = ONE;
    m[..ks.len()].copy_from_slice(ks);
    m
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Unsupported(format!("n = {n} outside 1..={MAX_N}")));
    }
    Ok(())
}

/// Moves local variables to global slots.
pub(crate) fn relabel<F: Scalar>(f: &MSeries<F>, map: &[(usize, usize)]) -> MSeries<F> {
    let mut out = MSeries::zero();
    for (m, c) in &f.terms {
        let mut mm = ONE;
        for i in 0..MAXV {
            let to = map.iter().find(|x| x.0 == i).map(|x| x.1).unwrap_or(i);
            mm[to] += m[i];
        }
        out.add_term(mm, c);
    }
    out
}

/// `D_v f = Q(z_v)^(-1) z_v d/dz_v f`.
pub(crate) fn d_var<F: Scalar>(f: &MSeries<F>, v: usize, qinv: &Series<F>, w: &Window) -> MSeries<F> {
    f.euler(v).mul_win(&MSeries::from_series(v, qinv), w)
}

/// `log(1 + f)` for `f` without constant term.
pub(crate) fn log1p<F: Scalar>(f: &MSeries<F>, w: &Window, max_pow: usize) -> MSeries<F> {
    let mut acc = MSeries::zero();
    let mut p = MSeries::one();
    for j in 1..=max_pow {
        p = p.mul_win(f, w);
        if p.is_empty() {
            break;
        }
        let sign = if j % 2 == 1 { 1 } else { -1 };
        acc.add_scaled(&p, &F::from_frac(sign, j as i64));
    }
    acc
}
