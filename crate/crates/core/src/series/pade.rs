//! Rational reconstruction of truncated power series.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::poly::{Poly, RatFun};
use crate::series::uni::{Series, INF};

/// Solves `A x = b` by Gaussian elimination; `None` if singular.
fn solve<F: Scalar>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = b.len();
    for col in 0..n {
        let piv = if F::is_exact() {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let (r, mag) = (col..n)
                .map(|r| (r, a[r][col].abs_f64()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if mag <= 0.0 {
                return None;
            }
            r
        };
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul_ref(&inv);
            for c in col..n {
                let t = f.mul_ref(&a[col][c]);
                a[r][c] -= &t;
            }
            let t = f.mul_ref(&b[col]);
            b[r] -= &t;
        }
    }
    let mut x = vec![F::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            let t = a[r][c].mul_ref(&x[c]);
            acc -= &t;
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

fn check_against<F: Scalar>(r: &RatFun<F>, coeffs: &[F]) -> bool {
    let len = coeffs.len() as i32;
    let Ok(s) = Series::from_coeffs(r.num.c.clone(), INF).div_ref(&Series::from_coeffs(r.den.c.clone(), len)) else {
        return false;
    };
    let scale = coeffs.iter().map(|x| x.abs_f64()).fold(1.0, f64::max);
    (0..len).all(|k| {
        let d = s.coeff(k) - &coeffs[k as usize];
        d.near_zero(scale)
    })
}

/// Padé approximant of type `[deg_num / deg_den]` fitted on the first
/// `deg_num + deg_den + 1` coefficients and confirmed on `guard` more.
pub fn pade_reconstruct<F: Scalar>(coeffs: &[F], deg_num: usize, deg_den: usize, guard: usize) -> Result<RatFun<F>> {
    let need = deg_num + deg_den + 1;
    if coeffs.len() < need + guard {
        return Err(Error::Truncation(format!("Padé [{deg_num}/{deg_den}] with guard {guard} needs {} coefficients, have {}", need + guard, coeffs.len())));
    }
    let c = |k: i64| if k < 0 { F::zero() } else { coeffs[k as usize].clone() };
    // den b_0 = 1, b_1..b_m: sum_j b_j c_{k-j} = 0 for k = n+1..n+m
    let m = deg_den;
    let n = deg_num;
    let mut den = vec![F::one()];
    if m > 0 {
        let a: Vec<Vec<F>> = (0..m).map(|i| (1..=m).map(|j| c((n + 1 + i) as i64 - j as i64)).collect()).collect();
        let b: Vec<F> = (0..m).map(|i| -c((n + 1 + i) as i64)).collect();
        let x = solve(a, b).ok_or_else(|| Error::Computation(format!("Padé [{n}/{m}] system is singular")))?;
        den.extend(x);
    }
    let mut num = vec![F::zero(); n + 1];
    for (k, slot) in num.iter_mut().enumerate() {
        for (j, bj) in den.iter().enumerate().take(k + 1) {
            slot.add_mul(bj, &coeffs[k - j]);
        }
    }
    let r = RatFun::new(Poly::new(num), Poly::new(den));
    if !check_against(&r, &coeffs[..need + guard]) {
        return Err(Error::Computation(format!("Padé [{n}/{m}] fails its guard coefficients")));
    }
    Ok(r)
}

/// Reconstructs a rational function from a truncated power series, using the
/// last `guard` known coefficients purely as confirmation.
pub fn reconstruct<F: Scalar>(s: &Series<F>, guard: usize) -> Result<RatFun<F>> {
    let s = s.clone();
    if s.prec >= INF {
        let v = s.val;
        let p = Poly::new(s.c.clone());
        let x = Poly::one().shift(v.unsigned_abs() as usize);
        return Ok(if v >= 0 { RatFun::new(p.mul_ref(&x), Poly::one()) } else { RatFun::new(p, x) });
    }
    let v = s.val.min(0);
    let shifted = s.shift(-v);
    let len = shifted.prec.max(0) as usize;
    let coeffs: Vec<F> = (0..len as i32).map(|k| shifted.coeff(k)).collect();
    if len <= guard {
        return Err(Error::Truncation("not enough coefficients for reconstruction".into()));
    }
    let r = if F::is_exact() { eea(&coeffs, guard)? } else { scan(&coeffs, guard)? };
    if v < 0 {
        let x = Poly::one().shift((-v) as usize);
        Ok(RatFun::new(r.num, r.den.mul_ref(&x)))
    } else {
        Ok(r)
    }
}

fn eea<F: Scalar>(coeffs: &[F], guard: usize) -> Result<RatFun<F>> {
    let l = coeffs.len() - guard;
    let mut r0 = Poly::one().shift(l);
    let mut r1 = Poly::new(coeffs[..l].to_vec());
    let mut t0 = Poly::<F>::zero();
    let mut t1 = Poly::<F>::one();
    loop {
        let t1z = t1.coeff(0);
        if !t1z.is_zero() && (r1.deg().max(0) + t1.deg()) < l as i32 && first_guard_ok(&r1, &t1, coeffs, l) {
            let cand = RatFun::new(r1.clone(), t1.clone());
            if check_against(&cand, coeffs) {
                return Ok(cand);
            }
        }
        if r1.is_zero() {
            break;
        }
        let (q, r) = r0.divrem(&r1);
        let mut t = t0.sub_ref(&q.mul_ref(&t1));
        // keeping remainders monic tames coefficient growth over Q
        let mut r = r;
        if !r.is_zero() {
            let k = r.lead().inv();
            r = r.scale(&k);
            t = t.scale(&k);
        }
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    Err(Error::Truncation(format!("no rational function of total degree < {l} matches {} coefficients", coeffs.len())))
}

/// Cheap screen before the full check: the first guard coefficient of
/// `t * f - r` vanishes.
fn first_guard_ok<F: Scalar>(r: &Poly<F>, t: &Poly<F>, coeffs: &[F], l: usize) -> bool {
    if l >= coeffs.len() {
        return true;
    }
    let mut acc = -r.coeff(l);
    for j in 0..=t.deg().max(0) as usize {
        if j <= l {
            acc.add_mul(&t.coeff(j), &coeffs[l - j]);
        }
    }
    let scale = coeffs.iter().map(|x| x.abs_f64()).fold(1.0, f64::max);
    acc.near_zero(scale)
}

fn scan<F: Scalar>(coeffs: &[F], guard: usize) -> Result<RatFun<F>> {
    let l = coeffs.len() - guard;
    for m in 0..l {
        let n = l - 1 - m;
        if let Ok(r) = pade_reconstruct(coeffs, n, m, guard) {
            return Ok(r);
        }
    }
    Err(Error::Truncation("no Padé approximant survives its guard".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Q, C};

    #[test]
    fn recovers_rational() {
        let r = RatFun::from_ints(&[1, 2, 0, 3], &[1, -1, 5]);
        let s = r.expand_at(&Q::zero(), 20).unwrap();
        let back = reconstruct(&s, 4).unwrap();
        assert_eq!(back, r);
        let coeffs: Vec<Q> = (0..12).map(|k| s.coeff(k)).collect();
        assert_eq!(pade_reconstruct(&coeffs, 3, 2, 3).unwrap(), r);
    }

    #[test]
    fn exp_has_no_low_degree_rational_form() {
        let e = Series::from_coeffs(vec![Q::zero(), Q::one()], 16).exp().unwrap();
        assert!(reconstruct(&e, 4).is_err());
    }

    #[test]
    fn numeric_scan() {
        let r = RatFun::from_ints(&[2, 1], &[1, -3]).to_c();
        let s = r.expand_at(&C::zero(), 14).unwrap();
        let back = reconstruct(&s, 4).unwrap();
        assert_eq!(back.den.deg(), 1);
        let x = C::new(0.1, 0.0);
        assert!((back.eval(&x).unwrap() - r.eval(&x).unwrap()).near_zero(1.0));
    }

    #[test]
    fn laurent_input() {
        let r = RatFun::from_ints(&[1], &[0, 0, 1, -1]);
        let s = r.expand_at(&Q::zero(), 10).unwrap();
        assert_eq!(reconstruct(&s, 3).unwrap(), r);
    }
}
