//! Dense univariate polynomials and rational functions.

use std::fmt;

use rug::Complex;

use crate::error::{Error, Result};
use crate::scalar::{approx_rational, numeric_bits, Scalar, C, Q};
use crate::series::uni::{Series, INF};

/// Polynomial `c[0] + c[1] x + ...`, trailing zeros trimmed.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    pub c: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| format!("({x:?})x^{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn zero() -> Self {
        Poly { c: vec![] }
    }
    pub fn one() -> Self {
        Poly { c: vec![F::one()] }
    }
    pub fn constant(x: F) -> Self {
        Poly::new(vec![x])
    }
    pub fn x() -> Self {
        Poly { c: vec![F::zero(), F::one()] }
    }
    /// `x - a`
    pub fn linear_root(a: &F) -> Self {
        Poly::new(vec![-a.clone(), F::one()])
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree, `-1` for the zero polynomial.
    pub fn deg(&self) -> i32 {
        self.c.len() as i32 - 1
    }
    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }
    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(F::zero)
    }
    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_ref(x) + a;
        }
        acc
    }
    pub fn add_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|x| -x.clone()).collect() }
    }
    pub fn scale(&self, k: &F) -> Self {
        Poly::new(self.c.iter().map(|x| x.mul_ref(k)).collect())
    }
    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j].add_mul(a, b);
            }
        }
        Poly::new(c)
    }
    pub fn pow(&self, n: u32) -> Self {
        let mut r = Poly::one();
        for _ in 0..n {
            r = r.mul_ref(self);
        }
        r
    }
    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }
    pub fn deriv(&self) -> Self {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x.mul_ref(&F::from_i64(i as i64))).collect())
    }
    /// `x d/dx`
    pub fn euler(&self) -> Self {
        Poly::new(self.c.iter().enumerate().map(|(i, x)| x.mul_ref(&F::from_i64(i as i64))).collect())
    }
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lead().inv();
        let mut q = vec![F::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = r[k + dl - 1].mul_ref(&inv);
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    let t = coef.mul_ref(dc);
                    r[k + j] -= &t;
                }
            }
            r[k + dl - 1] = F::zero();
            q[k] = coef;
        }
        r.truncate(dl - 1);
        (Poly::new(q), Poly::new(r))
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv())
    }
    /// `p(q(x))`
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_ref(q).add_ref(&Poly::constant(a.clone()));
        }
        acc
    }
    /// `p(a + t)` as a polynomial in `t`.
    pub fn taylor_at(&self, a: &F) -> Self {
        self.compose(&Poly::new(vec![a.clone(), F::one()]))
    }
    pub fn to_series(&self, prec: i32) -> Series<F> {
        Series::from_coeffs(self.c.clone(), prec)
    }
    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.c.iter().map(f).collect())
    }
    pub fn to_c(&self) -> Poly<C> {
        self.map(|x| x.to_c())
    }
}

impl Poly<Q> {
    pub fn from_ints(v: &[i64]) -> Self {
        Poly::new(v.iter().map(|&x| Q::from_i64(x)).collect())
    }
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Square-free decomposition `p = lc * prod f_i^i` (Yun).
    pub fn squarefree(&self) -> Vec<(Poly<Q>, u32)> {
        let mut out = vec![];
        if self.deg() < 1 {
            return out;
        }
        let f = self.monic();
        let fd = f.deriv();
        let a = f.gcd(&fd);
        let mut b = f.divrem(&a).0;
        let mut c = fd.divrem(&a).0;
        let mut d = c.sub_ref(&b.deriv());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.divrem(&g).0;
            if b.deg() < 1 {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub_ref(&b.deriv());
            i += 1;
        }
        out
    }
    /// Rational roots, found numerically and confirmed exactly.
    pub fn rational_roots(&self) -> Vec<Q> {
        let mut out = vec![];
        if self.deg() < 1 {
            return out;
        }
        for r in self.to_c().roots_simple() {
            if r.im().clone().abs() > 1e-20f64 {
                continue;
            }
            if let Some(q) = approx_rational(r.re(), 1_000_000_000) {
                let q = Q(q);
                if self.eval(&q).is_zero() && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    }
}

impl Poly<C> {
    /// All complex roots of a polynomial with simple roots (Aberth iteration).
    pub fn roots_simple(&self) -> Vec<C> {
        let n = self.deg();
        if n < 1 {
            return vec![];
        }
        let p = self.monic();
        let n = n as usize;
        let bits = numeric_bits();
        let dp = p.deriv();
        let mut bound = 0.0f64;
        for x in &p.c[..n] {
            bound = bound.max(x.abs_f64());
        }
        let r0 = 1.0 + bound;
        let mut z: Vec<C> = (0..n)
            .map(|k| {
                let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                C(Complex::with_val(bits, (r0 * 0.9 * ang.cos(), r0 * 0.9 * ang.sin())))
            })
            .collect();
        let eps = 2f64.powi(-(bits as i32 - 20));
        for _ in 0..2000 {
            let mut maxc = 0.0f64;
            for k in 0..n {
                let pv = p.eval(&z[k]);
                if pv.is_zero() {
                    continue;
                }
                let w = pv / dp.eval(&z[k]);
                let mut s = C::zero();
                for j in 0..n {
                    if j != k {
                        s += (z[k].clone() - &z[j]).inv();
                    }
                }
                let corr = w.clone() / (C::one() - w * s);
                maxc = maxc.max(corr.abs_f64() / z[k].abs_f64().max(1e-30));
                z[k] -= &corr;
            }
            if maxc < eps {
                break;
            }
        }
        z
    }
}

/// Ratio of polynomials. Exact fields keep it reduced with a monic denominator.
#[derive(Clone, PartialEq)]
pub struct RatFun<F> {
    pub num: Poly<F>,
    pub den: Poly<F>,
}

impl<F: Scalar> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

fn reduce<F: Scalar>(num: Poly<F>, den: Poly<F>) -> RatFun<F> {
    assert!(!den.is_zero(), "rational function with zero denominator");
    if num.is_zero() {
        return RatFun { num, den: Poly::one() };
    }
    if F::is_exact() {
        // gcd through Q, the only exact field
        let nq: Poly<Q> = num.map(|x| Q(x.to_rational().unwrap()));
        let dq: Poly<Q> = den.map(|x| Q(x.to_rational().unwrap()));
        let g = nq.gcd(&dq);
        let (nq, dq) = (nq.divrem(&g).0, dq.divrem(&g).0);
        let l = dq.lead().inv();
        let back = |p: &Poly<Q>| p.scale(&l).map(|x| F::from_rational(&x.0));
        RatFun { num: back(&nq), den: back(&dq) }
    } else {
        let l = den.lead().inv();
        RatFun { num: num.scale(&l), den: den.scale(&l) }
    }
}

impl<F: Scalar> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        reduce(num, den)
    }
    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }
    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    pub fn constant(x: F) -> Self {
        Self::from_poly(Poly::constant(x))
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            return reduce(self.num.add_ref(&o.num), self.den.clone());
        }
        reduce(self.num.mul_ref(&o.den).add_ref(&o.num.mul_ref(&self.den)), self.den.mul_ref(&o.den))
    }
    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg())
    }
    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn scale(&self, k: &F) -> Self {
        reduce(self.num.scale(k), self.den.clone())
    }
    pub fn mul_ref(&self, o: &Self) -> Self {
        reduce(self.num.mul_ref(&o.num), self.den.mul_ref(&o.den))
    }
    pub fn div_ref(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by the zero rational function");
        reduce(self.num.mul_ref(&o.den), self.den.mul_ref(&o.num))
    }
    pub fn deriv(&self) -> Self {
        let n = self.num.deriv().mul_ref(&self.den).sub_ref(&self.num.mul_ref(&self.den.deriv()));
        reduce(n, self.den.mul_ref(&self.den))
    }
    /// `z d/dz`
    pub fn euler(&self) -> Self {
        let d = self.deriv();
        reduce(d.num.shift(1), d.den)
    }
    pub fn eval(&self, x: &F) -> Result<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Computation("rational function evaluated at a pole".into()));
        }
        Ok(self.num.eval(x) / d)
    }
    /// `r(s(z))` for another rational function `s`.
    pub fn compose(&self, s: &Self) -> Self {
        let n = self.num.deg().max(self.den.deg()).max(0) as u32;
        let hom = |p: &Poly<F>| {
            let mut acc = Poly::zero();
            for (i, a) in p.c.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let t = s.num.pow(i as u32).mul_ref(&s.den.pow(n - i as u32)).scale(a);
                acc = acc.add_ref(&t);
            }
            acc
        };
        reduce(hom(&self.num), hom(&self.den))
    }
    /// Laurent expansion at `z = a + t`, known to `O(t^prec)`.
    pub fn expand_at(&self, a: &F, prec: i32) -> Result<Series<F>> {
        let n = self.num.taylor_at(a);
        let mut d = self.den.taylor_at(a);
        if !F::is_exact() {
            // at an approximate root the leading coefficients are rounding noise
            let scale = d.c.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
            for x in d.c.iter_mut() {
                if !x.near_zero(scale) {
                    break;
                }
                *x = F::zero();
            }
        }
        let dv = d.c.iter().position(|x| !x.is_zero()).unwrap_or(0) as i32;
        let ds = Series::new(0, d.c.clone(), INF);
        let rel = prec + dv;
        let inv = ds.truncate(dv + rel.max(1)).inv()?;
        Ok(Series::new(0, n.c.clone(), INF).mul_ref(&inv).truncate(prec))
    }
    /// Expansion at infinity in `w = 1/z`, known to `O(w^prec)`.
    pub fn expand_at_infinity(&self, prec: i32) -> Result<Series<F>> {
        let nd = self.num.deg().max(0);
        let dd = self.den.deg();
        // r(1/w) = w^(dd-nd) * rev(num)(w) / rev(den)(w)
        let rn: Vec<F> = self.num.c.iter().rev().cloned().collect();
        let rd: Vec<F> = self.den.c.iter().rev().cloned().collect();
        let shift = dd - nd;
        let inv = Series::from_coeffs(rd, INF).truncate((prec - shift).max(1)).inv()?;
        Ok(Series::from_coeffs(rn, INF).mul_ref(&inv).shift(shift).truncate(prec))
    }
    pub fn to_c(&self) -> RatFun<C> {
        RatFun { num: self.num.to_c(), den: self.den.to_c() }
    }
}

impl RatFun<Q> {
    pub fn from_ints(num: &[i64], den: &[i64]) -> Self {
        reduce(Poly::from_ints(num), Poly::from_ints(den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        // (x-1)^2 (x+2)
        let p = Poly::from_ints(&[-1, 1]).pow(2).mul_ref(&Poly::from_ints(&[2, 1]));
        let sf = p.squarefree();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (Poly::from_ints(&[2, 1]), 1));
        assert_eq!(sf[1], (Poly::from_ints(&[-1, 1]), 2));
    }

    #[test]
    fn rational_roots_found() {
        let p = Poly::from_ints(&[-1, 2]).mul_ref(&Poly::from_ints(&[3, 0, 1]));
        assert_eq!(p.rational_roots(), vec![Q::new(1, 2)]);
    }

    #[test]
    fn complex_roots() {
        let p = Poly::from_ints(&[1, 0, 1]).to_c();
        let r = p.roots_simple();
        for x in r {
            assert!(p.eval(&x).near_zero(1.0));
        }
    }

    #[test]
    fn expansions() {
        // z / (1 - z)^2 at z = 1: 1/t^2 + 1/t
        let r = RatFun::from_ints(&[0, 1], &[1, -2, 1]);
        let s = r.expand_at(&Q::one(), 3).unwrap();
        assert_eq!(s.coeff(-2), Q::one());
        assert_eq!(s.coeff(-1), Q::one());
        assert_eq!(s.coeff(0), Q::zero());
        let inf = r.expand_at_infinity(4).unwrap();
        assert_eq!(inf.coeff(1), Q::one());
        assert_eq!(inf.coeff(2), Q::from_i64(2));
    }
}
