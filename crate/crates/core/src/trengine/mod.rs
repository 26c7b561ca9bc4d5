//! Topological recursion and the Bouchard-Eynard recursion by residue
//! calculus in local charts at the zeros of `dx`.
//!
//! A stable `omega_{g,n}` is stored in the global pole basis
//! `prod_i dz_i / (z_i - p_{a_i})^{d_i}`, `d_i >= 2`. `omega_{0,1} = y dx` and
//! `omega_{0,2} = dz dz / (z - z)^2` are never stored; they enter the
//! recursion through dedicated chart expansions.

pub mod chart;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

pub use chart::Chart;

use crate::error::{Error, Result};
use crate::model::Curve;
use crate::scalar::Scalar;
use crate::series::{Series, INF};

/// Per-variable pole labels `(a, d)`: the factor `dz / (z - p_a)^d`.
pub type Key = Vec<(u16, u16)>;

const HOLE: (u16, u16) = (u16::MAX, 0);
const MAX_PREC: i32 = 1024;

/// A stable multidifferential in the pole basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiDifferential<F> {
    pub g: u32,
    pub n: u32,
    pub terms: BTreeMap<Key, F>,
}

impl<F: Scalar> MultiDifferential<F> {
    /// Largest pole order in any variable.
    pub fn max_order(&self) -> u16 {
        self.terms.keys().flat_map(|k| k.iter().map(|x| x.1)).max().unwrap_or(0)
    }

    /// Largest `|c(key) - c(permuted key)|` over all keys and transpositions
    /// of adjacent variables; zero for a symmetric differential.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let zero = F::zero();
        for (k, c) in &self.terms {
            for i in 0..k.len().saturating_sub(1) {
                let mut kk = k.clone();
                kk.swap(i, i + 1);
                let o = self.terms.get(&kk).unwrap_or(&zero);
                let d = c.sub_ref(o);
                if !d.is_zero() {
                    worst = worst.max(if F::is_exact() { f64::INFINITY } else { d.abs_f64() });
                }
            }
        }
        worst
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference relative to the larger scale; `0` when
    /// equal exactly.
    pub fn distance(&self, o: &Self) -> f64 {
        let zero = F::zero();
        let s = self.scale().max(o.scale()).max(1e-300);
        let mut worst: f64 = 0.0;
        for k in self.terms.keys().chain(o.terms.keys()) {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = o.terms.get(k).unwrap_or(&zero);
            let d = a.sub_ref(b);
            if !d.is_zero() {
                worst = worst.max(if F::is_exact() { f64::INFINITY } else { d.abs_f64() / s });
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recursion {
    /// The two-sheet kernel; all zeros of `dx` must be simple.
    Tr,
    /// The full subset/partition sum over local sheets.
    Be,
}

type Local<F> = Arc<HashMap<Key, Series<F>>>;

/// The `(g, n)`-table together with the charts it is computed in.
pub struct TrEngine<F: Scalar> {
    pub curve: Curve<F>,
    pub recursion: Recursion,
    charts: Vec<Chart<F>>,
    prec: i32,
    table: BTreeMap<(u32, u32), MultiDifferential<F>>,
    local: Mutex<HashMap<(usize, u32, u32, Vec<usize>), Local<F>>>,
    perms: Vec<Option<Vec<usize>>>,
    origin: Mutex<HashMap<(u16, u16, u32), Series<F>>>,
}

impl<F: Scalar> TrEngine<F> {
    pub fn new(curve: Curve<F>, recursion: Recursion) -> Result<Self> {
        if recursion == Recursion::Tr && !curve.all_simple() {
            return Err(Error::validation(chart::INV_SIMPLE, "topological recursion needs simple zeros of dx; use Bouchard-Eynard"));
        }
        let n = curve.crit.len();
        let mut e = TrEngine {
            curve,
            recursion,
            charts: vec![],
            prec: 0,
            table: BTreeMap::new(),
            local: Mutex::new(HashMap::new()),
            perms: vec![None; n],
            origin: Mutex::new(HashMap::new()),
        };
        e.rebuild(16)?;
        Ok(e)
    }

    /// Relabels the non-identity sheets at critical point `a`; `perm` is a
    /// permutation of `1..m`. Forgets all computed differentials.
    pub fn relabel(&mut self, a: usize, perm: Vec<usize>) -> Result<()> {
        let m = self.charts.get(a).ok_or_else(|| Error::Config(format!("no critical point {a}")))?.m as usize;
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (1..m).collect::<Vec<_>>() {
            return Err(Error::Config(format!("{perm:?} is not a permutation of 1..{m}")));
        }
        self.perms[a] = Some(perm);
        self.table.clear();
        let p = self.prec;
        self.rebuild(p)
    }

    pub fn chart(&self, a: usize) -> &Chart<F> {
        &self.charts[a]
    }

    pub fn chart_prec(&self) -> i32 {
        self.prec
    }

    fn rebuild(&mut self, prec: i32) -> Result<()> {
        let mut charts = vec![];
        for a in 0..self.curve.crit.len() {
            let mut ch = Chart::new(&self.curve, a, prec)?;
            if let Some(p) = &self.perms[a] {
                ch.relabel(p);
            }
            charts.push(ch);
        }
        self.charts = charts;
        self.prec = prec;
        self.local.lock().unwrap().clear();
        Ok(())
    }

    /// `omega_{g,n}` for `2g - 2 + n > 0`, computing the table up to it.
    pub fn omega(&mut self, g: u32, n: u32) -> Result<&MultiDifferential<F>> {
        if 2 * g + n <= 2 {
            return Err(Error::Computation(format!("omega_({g},{n}) is unstable and not stored in the pole basis")));
        }
        // every cell the target depends on: lower Euler characteristic,
        // genus at most g and n' <= n + 2 (g - g')
        let chi = 2 * g as i32 - 2 + n as i32;
        for c in 1..=chi {
            for gg in 0..=g {
                let nn = c + 2 - 2 * gg as i32;
                if nn < 1 || nn as u32 > n + 2 * (g - gg) {
                    continue;
                }
                self.fill(gg, nn as u32)?;
            }
        }
        Ok(&self.table[&(g, n)])
    }

    fn fill(&mut self, g: u32, n: u32) -> Result<()> {
        if self.table.contains_key(&(g, n)) {
            return Ok(());
        }
        let want = 4 * (2 * g as i32 - 2 + n as i32) + 8;
        if self.prec < want {
            self.rebuild(want)?;
        }
        loop {
            let maxord = self.table.values().map(|o| o.max_order()).max().unwrap_or(0) as i32;
            if self.prec <= maxord + 4 {
                let p = (self.prec * 2).max(maxord + 8);
                self.rebuild(p)?;
            }
            let r = match self.recursion {
                Recursion::Tr => self.tr_step(g, n - 1),
                Recursion::Be => self.be_step(g, n - 1),
            };
            match r {
                Ok(om) => {
                    self.table.insert((g, n), om);
                    return Ok(());
                }
                Err(Error::Truncation(msg)) => {
                    if self.prec * 2 > MAX_PREC {
                        return Err(Error::Truncation(format!("chart order {} insufficient for omega_({g},{n}): {msg}", self.prec)));
                    }
                    let p = self.prec * 2;
                    self.rebuild(p)?;
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Inserts a differential computed elsewhere (used by the comparison runs).
    pub fn insert(&mut self, om: MultiDifferential<F>) {
        self.table.insert((om.g, om.n), om);
        self.local.lock().unwrap().clear();
    }

    pub fn get(&self, g: u32, n: u32) -> Option<&MultiDifferential<F>> {
        self.table.get(&(g, n))
    }

    /// Chart expansion of `omega_{g,n}` with its first `sheets.len()`
    /// variables on the given sheets at point `a`, divided by `dt`, grouped
    /// by the pole labels of the remaining variables.
    fn local_exp(&self, a: usize, g: u32, n: u32, sheets: &[usize]) -> Result<Local<F>> {
        let key = (a, g, n, sheets.to_vec());
        if let Some(v) = self.local.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let ch = &self.charts[a];
        let mut out: HashMap<Key, Series<F>> = HashMap::new();
        if (g, n) == (0, 1) {
            // (y - y(p_a)) dx; the constant drops out of every loop equation
            // once the lower ones hold
            out.insert(vec![], ch.ysheets[sheets[0]].mul_ref(&ch.dx));
        } else if (g, n) == (0, 2) {
            if sheets.len() == 2 {
                out.insert(vec![], ch.bergman_sheets(sheets[0], sheets[1])?);
            } else {
                for (d, s) in ch.bergman_mixed(sheets[0], ch.prec) {
                    out.insert(vec![(a as u16, d)], s);
                }
            }
        } else {
            let om = self
                .table
                .get(&(g, n))
                .ok_or_else(|| Error::Computation(format!("omega_({g},{n}) requested before it was computed")))?;
            let s = sheets.len();
            for (k, c) in &om.terms {
                let mut prod = Series::constant(c.clone(), INF);
                for (i, &(b, d)) in k[..s].iter().enumerate() {
                    prod = prod.mul_ref(&ch.basis_at(sheets[i], b as usize, d)?);
                }
                let rest = k[s..].to_vec();
                match out.get_mut(&rest) {
                    Some(acc) => *acc = acc.add_ref(&prod),
                    None => {
                        out.insert(rest, prod);
                    }
                }
            }
        }
        let v = Arc::new(out);
        self.local.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// `sum over set partitions J of the sheet set, splittings of the n
    /// outer variables and genera` of the products of chart expansions; the
    /// genus total of a partition into `l` blocks is `g + l - |sheets|`.
    fn bracket(&self, a: usize, g: u32, n: u32, sheets: &[usize], full: bool) -> Result<HashMap<Key, Series<F>>> {
        let mut acc: HashMap<Key, Series<F>> = HashMap::new();
        let top = 2 * g as i32 - 2 + n as i32 + 1;
        for blocks in set_partitions(sheets) {
            let l = blocks.len() as i32;
            let gtot = g as i32 + l - sheets.len() as i32;
            if gtot < 0 {
                continue;
            }
            // assign each outer variable to a block
            let assignments = (l as u64).pow(n);
            for code in 0..assignments {
                let mut owner = vec![0usize; n as usize];
                let mut c = code;
                for o in owner.iter_mut() {
                    *o = (c % l as u64) as usize;
                    c /= l as u64;
                }
                let vars: Vec<Vec<usize>> = (0..l as usize).map(|b| (0..n as usize).filter(|&i| owner[i] == b).collect()).collect();
                for gs in compositions(gtot as u32, l as usize) {
                    let mut ok = true;
                    for b in 0..l as usize {
                        let nb = (blocks[b].len() + vars[b].len()) as u32;
                        let chi = 2 * gs[b] as i32 - 2 + nb as i32;
                        let bad = if full { chi > top } else { (gs[b], nb) == (0, 1) || chi >= top || chi < 0 };
                        if bad {
                            ok = false;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let mut part: HashMap<Key, Series<F>> = HashMap::new();
                    part.insert(vec![HOLE; n as usize], Series::one(INF));
                    for b in 0..l as usize {
                        let nb = (blocks[b].len() + vars[b].len()) as u32;
                        let loc = self.local_exp(a, gs[b], nb, &blocks[b])?;
                        let mut next: HashMap<Key, Series<F>> = HashMap::new();
                        for (k1, s1) in &part {
                            for (k2, s2) in loc.iter() {
                                let mut k = k1.clone();
                                for (pos, &v) in vars[b].iter().enumerate() {
                                    k[v] = k2[pos];
                                }
                                let prod = s1.mul_ref(s2);
                                match next.get_mut(&k) {
                                    Some(x) => *x = x.add_ref(&prod),
                                    None => {
                                        next.insert(k, prod);
                                    }
                                }
                            }
                        }
                        part = next;
                    }
                    for (k, s) in part {
                        match acc.get_mut(&k) {
                            Some(x) => *x = x.add_ref(&s),
                            None => {
                                acc.insert(k, s);
                            }
                        }
                    }
                }
            }
        }
        Ok(acc)
    }

    /// The terms of the order-`r` loop equation for `omega_{g,n+1}` at `p_a`:
    /// for every `r`-element set of local sheets, the sum over set partitions
    /// of products of `omega`s, `omega_{0,1}` included, divided by `dt^r` and
    /// grouped by the pole labels of the outer variables. The sum over all
    /// sets must vanish to order `r (m - 1)` in `t`. Needs `omega_{g,n+1}`
    /// in the table.
    pub fn loop_terms(&self, a: usize, g: u32, n: u32, r: usize) -> Result<Vec<HashMap<Key, Series<F>>>> {
        let m = self.charts[a].m as usize;
        if r == 0 || r > m {
            return Err(Error::Computation(format!("loop equation of order {r} at a point with {m} sheets")));
        }
        if 2 * g + n + 1 > 2 && !self.table.contains_key(&(g, n + 1)) {
            return Err(Error::Computation(format!("omega_({g},{}) requested before it was computed", n + 1)));
        }
        let mut out = vec![];
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != r {
                continue;
            }
            let sheets: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            out.push(self.bracket(a, g, n, &sheets, true)?);
        }
        Ok(out)
    }

    /// One step of topological recursion: `omega_{g,n+1}` from the table.
    ///
    /// `omega_{g,n+1}(z_0, z) = 1/2 sum_a Res_{w -> p_a} K(z_0, w) (omega_{g-1,n+2}(w, s(w), z) + sum' omega omega)`
    /// with `K = int_w^{s(w)} B(z_0, .) / (omega_{0,1}(s(w)) - omega_{0,1}(w))`.
    pub fn tr_step(&self, g: u32, n: u32) -> Result<MultiDifferential<F>> {
        let mut terms = BTreeMap::new();
        let half = F::from_frac(1, 2);
        for a in 0..self.charts.len() {
            let ch = &self.charts[a];
            let sigma = ch.deck()?;
            // 1 / ((y(s) - y(t)) x'(t))
            let base = ch.ysheets[1].sub_ref(&ch.ysheets[0]).mul_ref(&ch.dx).inv()?.scale(&half);
            let br = self.bracket(a, g, n, &[0, 1], false)?;
            let mut spow: Vec<Series<F>> = vec![Series::one(INF)];
            for (rest, r) in br {
                let p = base.mul_ref(&r);
                let Some(v) = p.clone().normalized().valuation() else { continue };
                // the t^j and sigma^j terms have valuation j
                let jmax = -1 - v;
                for j in 1..=jmax {
                    while spow.len() <= j as usize {
                        let nx = spow.last().unwrap().mul_ref(sigma);
                        spow.push(nx);
                    }
                    let c = res_product(&spow[j as usize], &p)?.sub_ref(&p.checked_coeff(-1 - j)?);
                    push_term(&mut terms, (a as u16, j as u16 + 1), &rest, c);
                }
            }
        }
        Ok(MultiDifferential { g, n: n + 1, terms })
    }

    /// One step of the Bouchard-Eynard recursion: `omega_{g,n+1}` from the table,
    /// `-sum_a Res sum_I int_{p_a}^{t} B(., z_0) / prod_{i in I} (omega_{0,1}(t_i) - omega_{0,1}(t)) (...)`.
    pub fn be_step(&self, g: u32, n: u32) -> Result<MultiDifferential<F>> {
        let mut terms = BTreeMap::new();
        for a in 0..self.charts.len() {
            let ch = &self.charts[a];
            let m = ch.m as usize;
            for mask in 1u32..(1 << (m - 1)) {
                let mut sheets = vec![0usize];
                let mut den = Series::one(INF);
                for i in 1..m {
                    if mask & (1 << (i - 1)) != 0 {
                        sheets.push(i);
                        den = den.mul_ref(&ch.ysheets[i].sub_ref(&ch.ysheets[0]).mul_ref(&ch.dx));
                    }
                }
                let base = den.inv()?.neg_ref();
                let br = self.bracket(a, g, n, &sheets, false)?;
                for (rest, r) in br {
                    let p = base.mul_ref(&r);
                    let Some(v) = p.clone().normalized().valuation() else { continue };
                    for j in 1..=(-1 - v) {
                        let c = p.checked_coeff(-1 - j)?;
                        push_term(&mut terms, (a as u16, j as u16 + 1), &rest, c);
                    }
                }
            }
        }
        Ok(MultiDifferential { g, n: n + 1, terms })
    }

    /// `[z / (Q(z) (z - p_b)^d)](z(X))` to `O(X^(kmax+1))`: the pole basis
    /// element divided by `dX/X`.
    pub fn origin_basis(&self, b: u16, d: u16, kmax: u32) -> Result<Series<F>> {
        let key = (b, d, kmax);
        if let Some(s) = self.origin.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let prec = kmax as i32 + 1;
        let zero = F::zero();
        let qinv = self.curve.q.expand_at(&zero, prec)?.inv()?;
        // 1/(z - p)^d = (-p)^(-d) (1 - z/p)^(-d)
        let p = self.curve.crit[b as usize].p.clone();
        let pinv = p.inv();
        let mut c = vec![];
        let mut coef = (-p).inv().powi(d as u32);
        for l in 0..prec as i64 {
            c.push(coef.clone());
            coef = coef * F::from_i64(d as i64 + l) / F::from_i64(l + 1) * &pinv;
        }
        let f = Series::from_coeffs(c, prec).mul_ref(&qinv).shift(1).truncate(prec);
        let z = self.curve.z_of_x(prec)?;
        let s = f.compose(&z)?;
        self.origin.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// `h_{g;k}` read off `omega = sum h prod k_i X_i^(k_i - 1) dX_i`.
    pub fn hurwitz(&self, om: &MultiDifferential<F>, k: &[u32]) -> Result<F> {
        if k.len() != om.n as usize {
            return Err(Error::Computation("arity mismatch".into()));
        }
        let kmax = *k.iter().max().unwrap_or(&1);
        let mut total = F::zero();
        for (key, c) in &om.terms {
            let mut prod = c.clone();
            for (i, &(b, d)) in key.iter().enumerate() {
                let s = self.origin_basis(b, d, kmax)?;
                prod *= s.checked_coeff(k[i] as i32)?;
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        for &ki in k {
            total /= F::from_i64(ki as i64);
        }
        Ok(total)
    }

    /// `h_{0;k}` from `omega_{0,1} = y dx`: `[X^k] y(z(X)) / k`.
    pub fn hurwitz_01(&self, k: u32) -> Result<F> {
        let prec = k as i32 + 1;
        let y = self.curve.y_series(prec)?;
        let z = self.curve.z_of_x(prec)?;
        Ok(y.compose(&z)?.checked_coeff(k as i32)? / F::from_i64(k as i64))
    }

    /// `h_{0;k1,k2}` from `omega_{0,2} - dX dX/(X - X)^2`.
    pub fn hurwitz_02(&self, k1: u32, k2: u32) -> Result<F> {
        let deg = (k1 + k2) as usize;
        let prec = deg as i32 + 3;
        let z = self.curve.z_of_x(prec)?;
        let qinv = self.curve.q.expand_at(&F::zero(), prec)?.inv()?;
        // u(X) = z/(X Q(z)) at z = z(X); phi(X) = z(X)/X
        let u = qinv.compose(&z)?.mul_ref(&z.shift(-1));
        let phi = z.shift(-1);
        // E(X1, X2) = (z1 - z2)/(X1 - X2) = sum_k phi_k h_k(X1, X2), as homogeneous parts
        let top = deg + 2;
        let e: Vec<Vec<F>> = (0..=top).map(|k| vec![phi.coeff(k as i32); k + 1]).collect();
        let inv_e2 = homog_inv_square(&e, top);
        // N = u1 u2 / E^2 - 1 (X1 X2 factored out), divided by (X1 - X2)^2
        let mut num: Vec<Vec<F>> = vec![];
        for dg in 0..=top {
            let mut part = vec![F::zero(); dg + 1];
            for i in 0..=dg {
                let mut acc = F::zero();
                for a in 0..=i {
                    for b in 0..=(dg - i) {
                        let rest = dg - a - b;
                        let ri = i - a;
                        if ri > rest {
                            continue;
                        }
                        let t = u.coeff(a as i32) * u.coeff(b as i32);
                        acc.add_mul(&t, &inv_e2[rest][ri]);
                    }
                }
                part[i] = acc;
            }
            if dg == 0 {
                part[0] -= F::one();
            }
            num.push(part);
        }
        let once: Vec<Vec<F>> = (1..num.len()).map(|dg| div_diag(&num[dg])).collect();
        let twice: Vec<Vec<F>> = (1..once.len()).map(|dg| div_diag(&once[dg])).collect();
        // W02 = X1 X2 * twice; [X1^k1 X2^k2] = twice[k1 + k2 - 2][k1 - 1]
        let dg = (k1 + k2 - 2) as usize;
        let w = twice[dg][(k1 - 1) as usize].clone();
        Ok(w / F::from_i64((k1 * k2) as i64))
    }
}

fn push_term<F: Scalar>(terms: &mut BTreeMap<Key, F>, first: (u16, u16), rest: &Key, c: F) {
    if c.is_zero() {
        return;
    }
    let mut k = vec![first];
    k.extend_from_slice(rest);
    match terms.get_mut(&k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                terms.remove(&k);
            }
        }
        None => {
            terms.insert(k, c);
        }
    }
}

/// `Res (a b)`; fails if the product's `t^-1` coefficient is not determined.
fn res_product<F: Scalar>(a: &Series<F>, b: &Series<F>) -> Result<F> {
    a.mul_ref(b).checked_coeff(-1)
}

/// Divides a homogeneous polynomial `sum p_i X1^i X2^(D-i)` by `X1 - X2`.
fn div_diag<F: Scalar>(p: &[F]) -> Vec<F> {
    let dg = p.len() - 1;
    let mut q = vec![F::zero(); dg];
    let mut prev = F::zero();
    for i in 0..dg {
        prev = prev - &p[i];
        q[i] = prev.clone();
    }
    q
}

/// `1/E^2` for `E = 1 + ...` given as homogeneous parts, to total degree `top`.
fn homog_inv_square<F: Scalar>(e: &[Vec<F>], top: usize) -> Vec<Vec<F>> {
    let mul = |a: &[Vec<F>], b: &[Vec<F>]| -> Vec<Vec<F>> {
        let mut out: Vec<Vec<F>> = (0..=top).map(|d| vec![F::zero(); d + 1]).collect();
        for (da, pa) in a.iter().enumerate() {
            for (db, pb) in b.iter().enumerate() {
                if da + db > top {
                    break;
                }
                for (i, x) in pa.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in pb.iter().enumerate() {
                        out[da + db][i + j].add_mul(x, y);
                    }
                }
            }
        }
        out
    };
    let e2 = mul(e, e);
    // inverse of 1 + r, degree by degree
    let mut inv: Vec<Vec<F>> = (0..=top).map(|d| vec![F::zero(); d + 1]).collect();
    inv[0][0] = F::one();
    for d in 1..=top {
        for k in 1..=d {
            for i in 0..=k {
                if e2[k][i].is_zero() {
                    continue;
                }
                for j in 0..=(d - k) {
                    let t = e2[k][i].mul_ref(&inv[d - k][j]);
                    inv[d][i + j] -= t;
                }
            }
        }
    }
    inv
}

/// All set partitions of `items`, blocks in order of their first element.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = vec![];
    for p in set_partitions(&items[1..]) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = vec![vec![first]];
        q.extend(p);
        out.push(q);
    }
    for p in out.iter_mut() {
        p.sort();
    }
    out
}

/// Ordered `l`-tuples of non-negative integers summing to `total`.
fn compositions(total: u32, l: usize) -> Vec<Vec<u32>> {
    if l == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if l == 1 {
        return vec![vec![total]];
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in compositions(total - first, l - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::oracle::hurwitz_number;
    use crate::scalar::Q;

    #[test]
    fn partitions_count() {
        // Bell numbers
        let c: Vec<usize> = (0..5).map(|n| set_partitions(&(0..n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 15]);
        assert_eq!(compositions(2, 3).len(), 6);
    }

    #[test]
    fn simple_hurwitz_low_cells() {
        let model = Model::simple_hurwitz();
        let mut e = TrEngine::<Q>::new(Curve::build(&model).unwrap(), Recursion::Tr).unwrap();
        let w11 = e.omega(1, 1).unwrap().clone();
        let w03 = e.omega(0, 3).unwrap().clone();
        for k in 1..=4u32 {
            assert_eq!(e.hurwitz(&w11, &[k]).unwrap(), hurwitz_number(&model, 1, &[k]).unwrap(), "k={k}");
        }
        assert_eq!(e.hurwitz(&w03, &[1, 2, 2]).unwrap(), hurwitz_number(&model, 0, &[1, 2, 2]).unwrap());
        for k in 1..=5 {
            assert_eq!(e.hurwitz_01(k).unwrap(), hurwitz_number(&model, 0, &[k]).unwrap());
        }
        assert_eq!(e.hurwitz_02(2, 3).unwrap(), hurwitz_number(&model, 0, &[2, 3]).unwrap());
    }
}
