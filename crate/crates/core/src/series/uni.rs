//! Truncated univariate Laurent series with absolute precision tracking.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Precision marker for series that are known exactly (finite Laurent polynomials).
pub const INF: i32 = i32::MAX / 4;

fn padd(a: i32, b: i32) -> i32 {
    if a >= INF || b >= INF { INF } else { a + b }
}

/// `sum c[i] t^(val+i) + O(t^prec)`. Coefficients at exponents in
/// `val+c.len() .. prec` are zero; `prec == INF` means the series is exact.
#[derive(Clone, PartialEq)]
pub struct Series<F> {
    pub val: i32,
    pub c: Vec<F>,
    pub prec: i32,
}

impl<F: Scalar> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({x:?})t^{}", self.val + i as i32)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec < INF {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

impl<F: Scalar> Series<F> {
    pub fn new(val: i32, c: Vec<F>, prec: i32) -> Self {
        let mut s = Series { val, c, prec };
        s.clip();
        s
    }
    pub fn zero(prec: i32) -> Self {
        Series { val: prec.min(0), c: vec![], prec }
    }
    pub fn exact_zero() -> Self {
        Series { val: 0, c: vec![], prec: INF }
    }
    pub fn one(prec: i32) -> Self {
        Self::monomial(F::one(), 0, prec)
    }
    pub fn monomial(coef: F, e: i32, prec: i32) -> Self {
        if e >= prec {
            return Self::zero(prec);
        }
        Series { val: e, c: vec![coef], prec }
    }
    /// `t` with given precision.
    pub fn var(prec: i32) -> Self {
        Self::monomial(F::one(), 1, prec)
    }
    /// Power series from dense coefficients `c[0] + c[1] t + ...`, known up to `prec`.
    pub fn from_coeffs(c: Vec<F>, prec: i32) -> Self {
        Self::new(0, c, prec)
    }
    pub fn constant(x: F, prec: i32) -> Self {
        Self::monomial(x, 0, prec)
    }

    fn clip(&mut self) {
        if self.prec < INF {
            let max = (self.prec - self.val).max(0) as usize;
            self.c.truncate(max);
        }
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    /// Moves `val` to the first nonzero coefficient.
    pub fn normalize(&mut self) {
        self.clip();
        let lead = self.c.iter().position(|x| !x.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.c.drain(..k);
                self.val += k as i32;
            }
            None => {
                self.c.clear();
                self.val = if self.prec < INF { self.prec } else { 0 };
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= INF
    }

    /// True if all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Lowest exponent with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i32> {
        self.c.iter().position(|x| !x.is_zero()).map(|k| self.val + k as i32)
    }

    /// Coefficient at `e`, zero outside the stored window.
    pub fn coeff(&self, e: i32) -> F {
        if e < self.val {
            return F::zero();
        }
        self.c.get((e - self.val) as usize).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeff_ref(&self, e: i32) -> Option<&F> {
        if e < self.val {
            return None;
        }
        self.c.get((e - self.val) as usize)
    }

    /// Coefficient at `e`, failing if `e` lies beyond the known precision.
    pub fn checked_coeff(&self, e: i32) -> Result<F> {
        if e >= self.prec {
            return Err(Error::Truncation(format!("coefficient t^{e} requested, series known to O(t^{})", self.prec)));
        }
        Ok(self.coeff(e))
    }

    /// Largest exponent stored plus one (for exact series) or `prec`.
    pub fn end(&self) -> i32 {
        if self.prec < INF { self.prec } else { self.val + self.c.len() as i32 }
    }

    pub fn truncate(&self, prec: i32) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        if s.val > s.prec {
            s.val = s.prec;
            s.c.clear();
        }
        s.clip();
        s
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec);
        }
        Series { val: self.val, c: self.c.iter().map(|x| x.mul_ref(k)).collect(), prec: self.prec }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        Series { val: self.val + k, c: self.c.clone(), prec: padd(self.prec, k) }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let end = self.end().max(o.end()).min(prec);
        let len = (end - val).max(0) as usize;
        let mut c = vec![F::zero(); len];
        for (i, x) in self.c.iter().enumerate() {
            let e = self.val + i as i32;
            if e < end {
                c[(e - val) as usize] += x;
            }
        }
        for (i, x) in o.c.iter().enumerate() {
            let e = o.val + i as i32;
            if e < end {
                c[(e - val) as usize] += x;
            }
        }
        Series::new(val, c, prec)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Series { val: self.val, c: self.c.iter().map(|x| -x.clone()).collect(), prec: self.prec }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let prec = padd(self.val, o.prec).min(padd(o.val, self.prec));
        let val = self.val + o.val;
        if self.c.is_empty() || o.c.is_empty() {
            return Series { val: val.min(prec), c: vec![], prec };
        }
        let full = self.c.len() + o.c.len() - 1;
        let len = if prec < INF { full.min((prec - val).max(0) as usize) } else { full };
        let mut c = vec![F::zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j].add_mul(a, b);
            }
        }
        Series::new(val, c, prec)
    }

    /// Multiplicative inverse; the series must have an invertible leading term.
    pub fn inv(&self) -> Result<Self> {
        let s = self.clone().normalized();
        if s.c.is_empty() {
            return Err(Error::Computation("inverse of a series with no known nonzero term".into()));
        }
        let v = s.val;
        let rel = if s.prec >= INF { None } else { Some(s.prec - v) };
        // power series part a(t) with a(0) != 0
        let n = match rel {
            Some(r) => r as usize,
            None => {
                if s.c.len() == 1 {
                    return Ok(Series { val: -v, c: vec![s.c[0].inv()], prec: INF });
                }
                return Err(Error::Computation("inverse of an exact non-monomial needs a precision".into()));
            }
        };
        let a0inv = s.c[0].inv();
        let mut b: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { F::one() } else { F::zero() };
            for j in 1..=k.min(s.c.len() - 1) {
                let t = s.c[j].mul_ref(&b[k - j]);
                acc -= &t;
            }
            b.push(acc * &a0inv);
        }
        Ok(Series::new(-v, b, -v + n as i32))
    }

    /// Inverse of an exact series to a requested absolute precision.
    pub fn inv_prec(&self, prec: i32) -> Result<Self> {
        let s = self.clone().normalized();
        let v = s.valuation().ok_or_else(|| Error::Computation("inverse of zero series".into()))?;
        // result val = -v; need relative precision prec + v
        let rel = prec + v;
        s.truncate(v + rel.max(1)).inv()
    }

    pub fn div_ref(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Series::one(INF);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        r
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n >= 0 { Ok(self.pow(n as u32)) } else { Ok(self.inv()?.pow((-n) as u32)) }
    }

    /// Formal derivative.
    pub fn deriv(&self) -> Self {
        let c = self.c.iter().enumerate().map(|(i, x)| x.mul_ref(&F::from_i64((self.val + i as i32) as i64))).collect();
        Series::new(self.val - 1, c, padd(self.prec, -1))
    }

    /// `t d/dt`.
    pub fn euler(&self) -> Self {
        let c = self.c.iter().enumerate().map(|(i, x)| x.mul_ref(&F::from_i64((self.val + i as i32) as i64))).collect();
        Series::new(self.val, c, self.prec)
    }

    /// Antiderivative with zero constant term. Fails on a `t^-1` term.
    pub fn integrate(&self) -> Result<Self> {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, x) in self.c.iter().enumerate() {
            let e = self.val + i as i32;
            if e == -1 {
                if !x.is_zero() {
                    return Err(Error::Computation("formal integration would produce a logarithm".into()));
                }
                c.push(F::zero());
                continue;
            }
            c.push(x.clone() / F::from_i64((e + 1) as i64));
        }
        if self.val <= -1 && self.prec <= -1 {
            return Err(Error::Truncation("integration of a series not known past t^-1".into()));
        }
        Ok(Series::new(self.val + 1, c, padd(self.prec, 1)))
    }

    /// `exp(f)` for `f` with no terms of nonpositive degree.
    pub fn exp(&self) -> Result<Self> {
        let s = self.clone().normalized();
        if s.c.is_empty() {
            return Ok(Series::one(s.prec));
        }
        if s.val < 1 {
            return Err(Error::Computation("exp of a series with a constant or polar term".into()));
        }
        let prec = s.prec;
        if prec >= INF {
            return Err(Error::Computation("exp of an exact series needs a precision".into()));
        }
        let n = prec as usize;
        // e' = f' e
        let fd: Vec<F> = (0..n).map(|k| s.coeff(k as i32).mul_ref(&F::from_i64(k as i64))).collect();
        let mut e: Vec<F> = vec![F::zero(); n];
        if n > 0 {
            e[0] = F::one();
        }
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                if fd[j].is_zero() {
                    continue;
                }
                acc.add_mul(&fd[j], &e[k - j]);
            }
            e[k] = acc / F::from_i64(k as i64);
        }
        Ok(Series::new(0, e, prec))
    }

    /// `log(f)` for `f = 1 + O(t)`.
    pub fn log(&self) -> Result<Self> {
        if self.val > 0 || !self.coeff(0).is_one() || self.c.iter().take((-self.val).max(0) as usize).any(|x| !x.is_zero()) {
            return Err(Error::Computation("log of a series not of the form 1 + O(t)".into()));
        }
        let d = self.deriv();
        let q = d.mul_ref(&self.inv()?);
        q.integrate()
    }

    /// `f^alpha` for `f = 1 + O(t)` and rational `alpha`.
    pub fn pow_frac(&self, alpha: &F) -> Result<Self> {
        let l = self.log()?;
        l.scale(alpha).exp()
    }

    /// `self(g(t))`. Requires `g = O(t)`; negative exponents of `self` need
    /// an exact leading term of `g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let g = g.clone().normalized();
        if g.c.is_empty() {
            if self.val >= 0 {
                return Ok(Series::constant(self.coeff(0), padd(self.prec.min(INF), 0).min(g.prec.max(1))));
            }
            return Err(Error::Computation("composition with zero".into()));
        }
        if g.val < 1 {
            return Err(Error::Computation("composition with a series having a constant term".into()));
        }
        let gv = g.val;
        // precision: terms t^e of self with e >= self.prec contribute O(t^(e gv))
        let mut prec = if self.prec < INF { self.prec * gv } else { INF };
        // relative precision of g powers
        let grel = g.prec - gv;
        let lo = self.val;
        let hi = self.end();
        // contributions g^e = t^(e gv) (1 + O(t^grel))
        if grel < INF {
            for e in lo..hi {
                // g^0 = 1 is exact
                if e != 0 && !self.coeff(e).is_zero() {
                    prec = prec.min(e * gv + grel);
                }
            }
        }
        if prec >= INF {
            return Err(Error::Computation("exact composition needs a precision".into()));
        }
        let g = g.truncate(prec.max(gv) + (-lo).max(0) * gv + 2);
        let mut acc = Series::zero(prec);
        if lo < 0 {
            let gi = g.inv()?;
            let mut p = Series::one(INF);
            for e in 1..=(-lo) {
                // later factors of g^-1 lower the precision by gv each
                p = p.mul_ref(&gi).truncate(prec + (-lo - e) * gv);
                let ce = self.coeff(-e);
                if !ce.is_zero() {
                    acc = acc.add_ref(&p.scale(&ce));
                }
            }
        }
        let mut p = Series::one(INF);
        for e in 0..hi.max(0) {
            if e > 0 {
                p = p.mul_ref(&g).truncate(prec);
            }
            if e * gv >= prec {
                break;
            }
            let ce = self.coeff(e);
            if !ce.is_zero() {
                acc = acc.add_ref(&p.scale(&ce));
            }
        }
        Ok(acc.truncate(prec))
    }

    /// Compositional inverse of `g = a t + O(t^2)`, `a != 0`.
    pub fn reversion(&self) -> Result<Self> {
        let g = self.clone().normalized();
        if g.val != 1 || g.c.is_empty() {
            return Err(Error::Computation("reversion needs a series of valuation one".into()));
        }
        if g.prec >= INF {
            return Err(Error::Computation("reversion of an exact series needs a precision".into()));
        }
        let n = g.prec; // result known to O(t^n)
        // h = t / g(t)
        let h = g.shift(-1).inv()?;
        let mut out = vec![F::zero(); n.max(0) as usize];
        let mut hp = Series::one(INF);
        for k in 1..n {
            hp = hp.mul_ref(&h).truncate(n);
            // [t^k] f = (1/k) [w^(k-1)] h^k
            out[k as usize] = hp.coeff(k - 1) / F::from_i64(k as i64);
        }
        Ok(Series::new(0, out, n))
    }

    /// Pointwise map of coefficients into another field.
    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Series<G> {
        Series { val: self.val, c: self.c.iter().map(f).collect(), prec: self.prec }
    }

    /// Residue, the coefficient of `t^-1`.
    pub fn residue(&self) -> Result<F> {
        self.checked_coeff(-1)
    }

    /// Iterates over `(exponent, coefficient)` of nonzero stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &F)> {
        self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(i, x)| (self.val + i as i32, x))
    }
}

impl<F: Scalar> Add for Series<F> {
    type Output = Series<F>;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}
impl<F: Scalar> Sub for Series<F> {
    type Output = Series<F>;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}
impl<F: Scalar> Mul for Series<F> {
    type Output = Series<F>;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<F: Scalar> Neg for Series<F> {
    type Output = Series<F>;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn reversion_of_z_exp_minus_z() {
        // X = z e^{-z}; z(X) = X + X^2 + 3/2 X^3 + 8/3 X^4 + ...
        let n = 6;
        let mz = Series::from_coeffs(vec![Q::zero(), q(-1, 1)], n);
        let x = Series::var(INF).mul_ref(&mz.exp().unwrap());
        let z = x.reversion().unwrap();
        assert_eq!(z.coeff(1), q(1, 1));
        assert_eq!(z.coeff(2), q(1, 1));
        assert_eq!(z.coeff(3), q(3, 2));
        assert_eq!(z.coeff(4), q(8, 3));
        assert_eq!(z.coeff(5), q(125, 24));
    }

    #[test]
    fn exp_log_roundtrip() {
        let f = Series::from_coeffs(vec![Q::zero(), q(1, 2), q(-3, 1), q(2, 7)], 8);
        let e = f.exp().unwrap();
        let l = e.log().unwrap();
        for k in 0..8 {
            assert_eq!(l.coeff(k), f.coeff(k));
        }
    }

    #[test]
    fn laurent_inverse_and_precision() {
        let f = Series::new(-2, vec![q(1, 1), q(1, 1)], 3);
        let g = f.inv().unwrap();
        assert_eq!(g.val, 2);
        assert_eq!(g.prec, 7);
        let one = f.mul_ref(&g);
        assert_eq!(one.coeff(0), Q::one());
        assert!(one.prec >= 1);
    }

    #[test]
    fn compose_with_negative_powers() {
        // f = 1/t, g = t + t^2 ; f(g) = 1/t - 1 + t - ...
        let f = Series::monomial(Q::one(), -1, INF);
        let g = Series::new(1, vec![Q::one(), Q::one()], 6);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.coeff(-1), Q::one());
        assert_eq!(h.coeff(0), q(-1, 1));
        assert_eq!(h.coeff(1), Q::one());
    }

    #[test]
    fn compose_keeps_precision_below_a_pole() {
        // t^-3 known to O(t), at t + t^2: t^-3 - 3 t^-2 + 6 t^-1 - 10 + O(t)
        let f = Series::new(-3, vec![Q::one()], 1);
        let g = Series::new(1, vec![Q::one(), Q::one()], 10);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.prec, 1);
        assert_eq!(h.coeff(-1), q(6, 1));
        assert_eq!(h.coeff(0), q(-10, 1));
    }

    #[test]
    fn constant_term_does_not_cost_precision() {
        // (1 - t) at g = t + O(t^4) is known to O(t^4)
        let f = Series::from_coeffs(vec![Q::one(), q(-1, 1)], INF);
        let g = Series::new(1, vec![Q::one()], 4);
        assert_eq!(f.compose(&g).unwrap().prec, 4);
    }
}
