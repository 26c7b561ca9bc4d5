//! Sparse multivariate Laurent polynomials with explicit pruning.
//!
//! Truncation is not tracked automatically; callers prune with [`Window`]s
//! chosen so that every coefficient they later read is complete.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::scalar::Scalar;
use crate::series::uni::Series;

pub const MAXV: usize = 16;

/// Exponent vector.
pub type Mono = [i16; MAXV];

pub const ONE: Mono = [0; MAXV];

pub fn unit(var: usize, e: i16) -> Mono {
    let mut m = ONE;
    m[var] = e;
    m
}

pub fn mono_add(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for i in 0..MAXV {
        m[i] += b[i];
    }
    m
}

/// Box of allowed exponents per variable (inclusive).
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub lo: [i16; MAXV],
    pub hi: [i16; MAXV],
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: [i16::MIN; MAXV], hi: [i16::MAX; MAXV] }
    }
}

impl Window {
    pub fn all() -> Self {
        Self::default()
    }
    pub fn with(mut self, var: usize, lo: i16, hi: i16) -> Self {
        self.lo[var] = lo;
        self.hi[var] = hi;
        self
    }
    pub fn hi(mut self, var: usize, hi: i16) -> Self {
        self.hi[var] = hi;
        self
    }
    pub fn contains(&self, m: &Mono) -> bool {
        (0..MAXV).all(|i| m[i] >= self.lo[i] && m[i] <= self.hi[i])
    }
}

#[derive(Clone, PartialEq)]
pub struct MSeries<F> {
    pub terms: FxHashMap<Mono, F>,
}

impl<F: Scalar> fmt::Debug for MSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        for (m, c) in v {
            writeln!(f, "{m:?}: {c:?}")?;
        }
        Ok(())
    }
}

impl<F: Scalar> Default for MSeries<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> MSeries<F> {
    pub fn zero() -> Self {
        MSeries { terms: FxHashMap::default() }
    }
    pub fn constant(c: F) -> Self {
        Self::term(ONE, c)
    }
    pub fn one() -> Self {
        Self::constant(F::one())
    }
    pub fn term(m: Mono, c: F) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }
    /// Univariate series in variable `var`.
    pub fn from_series(var: usize, s: &Series<F>) -> Self {
        let mut out = Self::zero();
        for (e, c) in s.terms() {
            out.terms.insert(unit(var, e as i16), c.clone());
        }
        out
    }
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }
    pub fn add_term(&mut self, m: Mono, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }
    fn add_mul_term(&mut self, m: Mono, a: &F, b: &F) {
        match self.terms.get_mut(&m) {
            Some(x) => x.add_mul(a, b),
            None => {
                self.terms.insert(m, a.mul_ref(b));
            }
        }
    }
    pub fn add_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }
    pub fn add_scaled(&mut self, o: &Self, k: &F) {
        for (m, c) in &o.terms {
            self.add_term(*m, &c.mul_ref(k));
        }
    }
    pub fn add_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }
    pub fn sub_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &F::from_i64(-1));
        r
    }
    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MSeries { terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(k))).collect() }
    }
    pub fn clean(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }
    /// Product keeping only monomials in `w`.
    pub fn mul_win(&self, o: &Self, w: &Window) -> Self {
        let mut r = Self::zero();
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = mono_add(ma, mb);
                if w.contains(&m) {
                    r.add_mul_term(m, ca, cb);
                }
            }
        }
        r.clean();
        r
    }
    pub fn mul_ref(&self, o: &Self) -> Self {
        self.mul_win(o, &Window::all())
    }
    pub fn prune(&mut self, w: &Window) {
        self.terms.retain(|m, c| w.contains(m) && !c.is_zero());
    }
    pub fn pruned(mut self, w: &Window) -> Self {
        self.prune(w);
        self
    }
    /// Multiplies each term by its exponent in `var` (the Euler operator).
    pub fn euler(&self, var: usize) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m[var] != 0 {
                r.terms.insert(*m, c.mul_ref(&F::from_i64(m[var] as i64)));
            }
        }
        r
    }
    /// Partial derivative in `var`.
    pub fn deriv(&self, var: usize) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m[var] != 0 {
                let mut mm = *m;
                mm[var] -= 1;
                r.terms.insert(mm, c.mul_ref(&F::from_i64(m[var] as i64)));
            }
        }
        r
    }
    /// Terms with `var` exponent equal to `e`, keeping `var`.
    pub fn slice(&self, var: usize, e: i16) -> Self {
        MSeries { terms: self.terms.iter().filter(|(m, _)| m[var] == e).map(|(m, c)| (*m, c.clone())).collect() }
    }
    /// Coefficient of `var^e`, with `var` removed.
    pub fn coeff_of(&self, var: usize, e: i16) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m[var] == e {
                let mut mm = *m;
                mm[var] = 0;
                r.terms.insert(mm, c.clone());
            }
        }
        r
    }
    /// Splits by the exponent of `var`; the pieces no longer contain `var`.
    pub fn split(&self, var: usize) -> Vec<(i16, Self)> {
        let mut map: std::collections::BTreeMap<i16, Self> = Default::default();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm[var];
            mm[var] = 0;
            map.entry(e).or_default().terms.insert(mm, c.clone());
        }
        map.into_iter().collect()
    }
    /// Replaces `from` by `to` (exponents add), i.e. restriction `x_from = x_to`.
    pub fn merge_var(&self, from: usize, to: usize) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            mm[to] += mm[from];
            mm[from] = 0;
            r.add_term(mm, c);
        }
        r
    }
    /// Renames variables: exponent of `i` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let mut mm = ONE;
            for (i, &p) in perm.iter().enumerate() {
                mm[p] += m[i];
            }
            for i in perm.len()..MAXV {
                mm[i] += m[i];
            }
            r.add_term(mm, c);
        }
        r
    }
    pub fn max_exp(&self, var: usize) -> Option<i16> {
        self.terms.keys().map(|m| m[var]).max()
    }
    pub fn min_exp(&self, var: usize) -> Option<i16> {
        self.terms.keys().map(|m| m[var]).min()
    }
    /// Multiplies by `var^k`.
    pub fn shift(&self, var: usize, k: i16) -> Self {
        MSeries {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = *m;
                    mm[var] += k;
                    (mm, c.clone())
                })
                .collect(),
        }
    }
    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MSeries<G> {
        MSeries { terms: self.terms.iter().map(|(m, c)| (*m, f(c))).collect() }
    }
    /// Univariate series in `var` from terms with every other exponent zero.
    pub fn to_series(&self, var: usize, prec: i32) -> Series<F> {
        let mut lo = 0i32;
        for m in self.terms.keys() {
            lo = lo.min(m[var] as i32);
        }
        let mut c = vec![F::zero(); (prec - lo).max(0) as usize];
        for (m, x) in &self.terms {
            let e = m[var] as i32;
            if e < prec && (0..MAXV).all(|i| i == var || m[i] == 0) {
                c[(e - lo) as usize] += x;
            }
        }
        Series::new(lo, c, prec)
    }
    /// `exp(self) - 1` for a series whose terms all lie in the window's
    /// nilpotent direction: every power is pruned by `w`, and powers beyond
    /// `max_pow` are dropped.
    pub fn exp_minus_one(&self, w: &Window, max_pow: usize) -> Self {
        let mut acc = Self::zero();
        let mut p = Self::one();
        for k in 1..=max_pow {
            p = p.mul_win(self, w).scale(&F::from_frac(1, k as i64));
            if p.is_empty() {
                break;
            }
            acc.add_assign_ref(&p);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    #[test]
    fn product_and_window() {
        let x = MSeries::term(unit(0, 1), Q::one());
        let y = MSeries::term(unit(1, 1), Q::one());
        let s = x.add_ref(&y).add_ref(&MSeries::one());
        let sq = s.mul_win(&s, &Window::all().hi(0, 1));
        assert_eq!(sq.coeff(&unit(0, 2)), Q::zero());
        let mut m = unit(0, 1);
        m[1] = 1;
        assert_eq!(sq.coeff(&m), Q::from_i64(2));
    }

    #[test]
    fn merge_restricts() {
        let mut m = unit(0, 2);
        m[1] = 3;
        let s = MSeries::term(m, Q::one());
        let r = s.merge_var(1, 0);
        assert_eq!(r.coeff(&unit(0, 5)), Q::one());
    }
}
