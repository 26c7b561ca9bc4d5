//! Divisibility of the hbar-coefficients of
//! `exp(v (S(v hbar d)/S(hbar d) - 1) log(y - A))` by falling products in `v`,
//! for `d = d/dy` and for `d = z d/dz`.

use std::collections::BTreeMap;

use crate::scalar::{Scalar, Q};
use crate::series::{rho, Poly};

/// `prod_{j=lo}^{hi} (v - j)`.
pub fn falling(lo: i64, hi: i64) -> Poly<Q> {
    (lo..=hi).fold(Poly::one(), |acc, j| acc.mul_ref(&Poly::new(vec![Q::int(-j), Q::one()])))
}

/// `v rho_i(v)`, the coefficient of `hbar^(2i) d^(2i)` in the operator.
fn op_coeff(i: usize) -> Poly<Q> {
    Poly::new(rho::<Q>(i)).mul_ref(&Poly::x())
}

/// `q_{2k}(v)` for `k = 0..=kmax`, where `c_{2k}(v, y) = q_{2k}(v) / (y - A)^(2k)`.
///
/// With `s = y - A`, `d^(2i) log s = -(2i-1)! s^(-2i)`, so the exponent is a
/// series in `w = hbar^2 / s^2` with coefficients `e_i(v) = -(2i-1)! v rho_i(v)`.
pub fn cvy(kmax: usize) -> Vec<Poly<Q>> {
    let e: Vec<Poly<Q>> = (0..=kmax)
        .map(|i| if i == 0 { Poly::zero() } else { op_coeff(i).scale(&-Q::int(factorial(2 * i - 1))) })
        .collect();
    exp_series(&e)
}

/// Coefficients of `exp(sum_{i>=1} e_i w^i)` via `k c_k = sum_i i e_i c_{k-i}`.
fn exp_series(e: &[Poly<Q>]) -> Vec<Poly<Q>> {
    let mut c = vec![Poly::one()];
    for k in 1..e.len() {
        let mut acc = Poly::zero();
        for i in 1..=k {
            acc = acc.add_ref(&e[i].mul_ref(&c[k - i]).scale(&Q::int(i as i64)));
        }
        c.push(acc.scale(&Q::new(1, k as i64)));
    }
    c
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `c_{2k}(v, y)` is divisible by `(v+1) v (v-1) ... (v-2k+1)`. The witness
/// also records whether the next factor `(v - 2k)` divides.
pub fn check_cvy(k: usize) -> (bool, String) {
    let q = &cvy(k)[k];
    let f = falling(-1, 2 * k as i64 - 1);
    let (p, r) = q.divrem(&f);
    if !r.is_zero() {
        return (false, format!("q_{}(v) = {q:?} leaves remainder {r:?}", 2 * k));
    }
    let next = p.divrem(&falling(2 * k as i64, 2 * k as i64)).1.is_zero();
    (true, format!("q_{} = falling(-1..{}) * {p:?}; (v - {}) divides the quotient: {next}", 2 * k, 2 * k - 1, 2 * k))
}

/// A Laurent polynomial in `s = z - A` with coefficients in `Q[u]`.
pub type Laurent = BTreeMap<i32, Poly<Q>>;

fn add_into(out: &mut Laurent, e: i32, c: Poly<Q>) {
    let v = out.remove(&e).unwrap_or_else(Poly::zero).add_ref(&c);
    if !v.is_zero() {
        out.insert(e, v);
    }
}

/// `z d/dz` with `z = s + A`: `s^e -> e s^e + A e s^(e-1)`.
fn euler(f: &Laurent, a: &Q) -> Laurent {
    let mut out = Laurent::new();
    for (&e, c) in f {
        if e != 0 {
            add_into(&mut out, e, c.scale(&Q::int(e)));
            add_into(&mut out, e - 1, c.scale(&(a.clone() * Q::int(e))));
        }
    }
    out
}

fn mul(f: &Laurent, g: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&a, x) in f {
        for (&b, y) in g {
            add_into(&mut out, a + b, x.mul_ref(y));
        }
    }
    out
}

/// `c_{2k}(u, z)` for `k = 0..=kmax` as Laurent polynomials in `z - A`.
pub fn cuz(kmax: usize, a: &Q) -> Vec<Laurent> {
    // (z d/dz)^j log(z - A) for j >= 1: starts at 1 + A/s
    let mut dlog = vec![Laurent::new()];
    let mut cur: Laurent = [(0, Poly::one()), (-1, Poly::constant(a.clone()))].into_iter().filter(|x| !x.1.is_zero()).collect();
    for _ in 1..=2 * kmax {
        dlog.push(cur.clone());
        cur = euler(&cur, a);
    }
    let e: Vec<Laurent> = (0..=kmax)
        .map(|i| {
            if i == 0 {
                return Laurent::new();
            }
            let c = op_coeff(i);
            dlog[2 * i].iter().map(|(&s, p)| (s, p.mul_ref(&c))).collect()
        })
        .collect();
    let mut c = vec![[(0, Poly::one())].into_iter().collect::<Laurent>()];
    for k in 1..=kmax {
        let mut acc = Laurent::new();
        for i in 1..=k {
            for (s, p) in mul(&e[i], &c[k - i]) {
                add_into(&mut acc, s, p.scale(&Q::int(i as i64)));
            }
        }
        c.push(acc.into_iter().map(|(s, p)| (s, p.scale(&Q::new(1, k as i64)))).collect());
    }
    c
}

/// For `l > 0` the coefficient of `(z - A)^-l` in `c_{2k}(u, z)` is divisible
/// by `(u+1) u (u-1) ... (u-l+1)`.
pub fn check_cuz(k: usize, a: &Q) -> (bool, String) {
    let c = &cuz(k, a)[k];
    let mut notes = vec![];
    for (&s, d) in c.iter().filter(|(&s, _)| s < 0) {
        let l = -s as i64;
        let r = d.divrem(&falling(-1, l - 1)).1;
        if !r.is_zero() {
            return (false, format!("d_{{{},{l}}}(u) = {d:?} leaves remainder {r:?}", 2 * k));
        }
        notes.push(format!("l = {l}"));
    }
    (true, format!("k = {k}, A = {a}: divisible for {}", if notes.is_empty() { "no polar terms".into() } else { notes.join(", ") }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_in_closed_form() {
        // q_2 = -v rho_1(v) = -v (v^2 - 1)/24
        let q = &cvy(1)[1];
        assert_eq!(q, &falling(-1, 1).scale(&Q::new(-1, 24)));
    }

    #[test]
    fn integer_points_match_the_product() {
        // at v = m the series is prod_i (1 + (2i-m+1)/2 w^(1/2)), even in hbar
        let c = cvy(3);
        for m in 2..=5i64 {
            let mut prod = vec![Q::one()];
            for i in 0..m {
                let a = Q::new(2 * i - m + 1, 2);
                let mut next = vec![Q::zero(); prod.len() + 1];
                for (j, x) in prod.iter().enumerate() {
                    next[j] += x.clone();
                    next[j + 1] += x.clone() * a.clone();
                }
                prod = next;
            }
            for (k, ck) in c.iter().enumerate() {
                let want = prod.get(2 * k).cloned().unwrap_or_else(Q::zero);
                assert_eq!(ck.eval(&Q::int(m)), want, "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn lemmas_hold() {
        assert!(check_cvy(1).0 && check_cvy(2).0);
        assert!(check_cuz(1, &Q::int(3)).0);
    }
}
