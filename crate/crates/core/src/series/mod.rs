//! Series, polynomials and the `S` function.

pub mod multi;
pub mod pade;
pub mod poly;
pub mod uni;

use crate::scalar::Scalar;

pub use multi::{MSeries, Mono, Window};
pub use pade::{pade_reconstruct, reconstruct};
pub use poly::{Poly, RatFun};
pub use uni::{Series, INF};

/// `[t^(2m)] S(t)` for `m = 0..=n`, where `S(t) = (e^(t/2) - e^(-t/2)) / t`.
pub fn s_coeffs<F: Scalar>(n: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(n + 1);
    let mut fact = F::one();
    let mut four = F::one();
    for m in 0..=n {
        if m > 0 {
            fact *= F::from_i64((2 * m) as i64) * F::from_i64((2 * m + 1) as i64);
            four *= F::from_i64(4);
        }
        out.push((four.clone() * &fact).inv());
    }
    out
}

/// `[t^(2m)] 1/S(t)` for `m = 0..=n`.
pub fn inv_s_coeffs<F: Scalar>(n: usize) -> Vec<F> {
    let s = s_coeffs::<F>(n);
    let mut out: Vec<F> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut acc = if m == 0 { F::one() } else { F::zero() };
        for j in 1..=m {
            let t = s[j].mul_ref(&out[m - j]);
            acc -= &t;
        }
        out.push(acc);
    }
    out
}

/// `[t^(2k)] S(v t) / S(t)` as a polynomial in `v` (coefficients of `v^0..v^(2k)`).
pub fn rho<F: Scalar>(k: usize) -> Vec<F> {
    let s = s_coeffs::<F>(k);
    let is = inv_s_coeffs::<F>(k);
    let mut p = vec![F::zero(); 2 * k + 1];
    for a in 0..=k {
        let t = s[a].mul_ref(&is[k - a]);
        p[2 * a] += &t;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    #[test]
    fn s_and_inverse() {
        let s = s_coeffs::<Q>(2);
        assert_eq!(s, vec![Q::one(), Q::new(1, 24), Q::new(1, 1920)]);
        let i = inv_s_coeffs::<Q>(2);
        assert_eq!(i, vec![Q::one(), Q::new(-1, 24), Q::new(7, 5760)]);
        assert_eq!(rho::<Q>(1), vec![Q::new(-1, 24), Q::zero(), Q::new(1, 24)]);
    }
}
