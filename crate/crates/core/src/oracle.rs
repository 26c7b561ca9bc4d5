//! Brute-force weighted Hurwitz numbers from the Schur expansion of the
//! tau function.
//!
//! After the rescaling `p_i -> h p_i` every ingredient is a power series in `h`:
//!
//! `Z'_mu = h^l(mu)/z_mu sum_lambda chi^lambda(mu) C_lambda(h) S_lambda(h)`,
//! `C_lambda = exp(sum_cells psi_hat(h^2, h c))`,
//! `S_lambda = sum_nu chi^lambda(nu)/z_nu h^(-l(nu)) prod_i y_hat_{nu_i}(h^2)`,
//!
//! and `log Z'` restricted to sub-multisets of the target partition gives
//! `h^(2g-2+2n) h_{g;k} / prod(mult!)`.

use std::collections::HashMap;
use std::sync::Mutex;

use rug::Integer;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::{Scalar, Q};
use crate::series::Series;

/// Largest partition size the oracle accepts.
pub const MAX_SIZE: u32 = 12;

/// Partitions of `n` in descending order of parts, reverse-lexicographic.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(n, n, &mut vec![], &mut out);
    out
}

/// `z_mu = prod_i i^{m_i} m_i!`.
pub fn z_mu(mu: &[u32]) -> Integer {
    let mut z = Integer::from(1);
    let mut i = 0;
    while i < mu.len() {
        let mut j = i;
        while j < mu.len() && mu[j] == mu[i] {
            j += 1;
        }
        let m = (j - i) as u32;
        z *= Integer::from(Integer::u_pow_u(mu[i], m));
        z *= Integer::from(Integer::factorial(m));
        i = j;
    }
    z
}

/// Contents `j - i` of the cells of `lambda`.
pub fn contents(lambda: &[u32]) -> Vec<i64> {
    let mut c = vec![];
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row {
            c.push(j as i64 - i as i64);
        }
    }
    c
}

pub fn transpose(lambda: &[u32]) -> Vec<u32> {
    let w = lambda.first().copied().unwrap_or(0);
    (1..=w).map(|j| lambda.iter().filter(|&&r| r >= j).count() as u32).collect()
}

static CHAR_MEMO: Mutex<Option<HashMap<(Vec<u32>, Vec<u32>), i64>>> = Mutex::new(None);

/// Irreducible character `chi^lambda(mu)` by the Murnaghan-Nakayama rule on beta-sets.
pub fn character(lambda: &[u32], mu: &[u32]) -> i64 {
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = CHAR_MEMO.lock().unwrap().get_or_insert_with(HashMap::new).get(&key) {
        return *v;
    }
    let v = mn(lambda, mu);
    CHAR_MEMO.lock().unwrap().get_or_insert_with(HashMap::new).insert(key, v);
    v
}

fn mn(lambda: &[u32], mu: &[u32]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    let l = lambda.len();
    let beta: Vec<i64> = lambda.iter().enumerate().map(|(i, &x)| x as i64 + (l - 1 - i) as i64).collect();
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r as i64;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut nbeta = beta.clone();
        nbeta[i] = nb;
        nbeta.sort_unstable_by(|a, b| b.cmp(a));
        let n = nbeta.len();
        let mut nl: Vec<u32> = nbeta.iter().enumerate().map(|(k, &x)| (x - (n - 1 - k) as i64) as u32).collect();
        while nl.last() == Some(&0) {
            nl.pop();
        }
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * character(&nl, rest);
    }
    total
}

/// Multiset of parts as (part, multiplicity), parts descending.
fn kinds(k: &[u32]) -> Vec<(u32, u32)> {
    let mut s = k.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<(u32, u32)> = vec![];
    for p in s {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Ground-truth engine for one model.
pub struct Oracle {
    psi: Vec<Series<Q>>,
    yhat: Vec<Series<Q>>,
    /// Absolute `h`-precision of every intermediate series.
    prec: i32,
}

impl Oracle {
    /// Prepares series data sufficient for `|k| <= max_size` and `h`-precision `prec`.
    fn new(model: &Model, max_size: u32, prec: i32) -> Result<Self> {
        model.validate()?;
        let m_max = (prec.max(0) as usize) / 2 + 1;
        let psi = model.psi_hat_series(m_max, prec + 1)?;
        let yhat = model.y_hat_series(m_max, max_size as i32 + 1)?;
        Ok(Oracle { psi, yhat, prec })
    }

    /// `C_lambda(h)`.
    fn content_weight(&self, lambda: &[u32]) -> Result<Series<Q>> {
        let p = self.prec;
        let mut mult: HashMap<i64, i64> = HashMap::new();
        for c in contents(lambda) {
            *mult.entry(c).or_default() += 1;
        }
        let mut arg = vec![Q::zero(); p.max(1) as usize];
        for (m, s) in self.psi.iter().enumerate() {
            for (j, coef) in s.terms() {
                let e = j + 2 * m as i32;
                if e >= p || coef.is_zero() {
                    continue;
                }
                let mut tot = Q::zero();
                for (&c, &cnt) in &mult {
                    tot += Q::from_i64(cnt) * Q::from_i64(c).powi(j as u32);
                }
                arg[e as usize] += tot * coef;
            }
        }
        if !arg[0].is_zero() {
            return Err(Error::Computation("psi_hat(0, 0) must vanish".into()));
        }
        Series::from_coeffs(arg, p).exp()
    }

    /// `y_hat_j(h^2)`.
    fn y_j(&self, j: u32) -> Series<Q> {
        let mut c = vec![Q::zero(); self.prec.max(0) as usize];
        for (m, s) in self.yhat.iter().enumerate() {
            let e = 2 * m;
            if (e as i32) < self.prec {
                c[e] = s.coeff(j as i32);
            }
        }
        Series::from_coeffs(c, self.prec)
    }

    /// `Z'_mu(h)` for every partition `mu` of `d`.
    fn z_coefficients(&self, d: u32) -> Result<HashMap<Vec<u32>, Series<Q>>> {
        let parts = partitions(d);
        let cl: Vec<Series<Q>> = parts.iter().map(|l| self.content_weight(l)).collect::<Result<_>>()?;
        let yj: Vec<Series<Q>> = (0..=d).map(|j| self.y_j(j)).collect();
        let yprod: Vec<Series<Q>> = parts
            .iter()
            .map(|nu| nu.iter().fold(Series::one(self.prec), |acc, &j| acc.mul_ref(&yj[j as usize])))
            .collect();
        let mut out = HashMap::new();
        for mu in &parts {
            let mut tot = Series::zero(self.prec);
            for (b, nu) in parts.iter().enumerate() {
                if yprod[b].is_zero() {
                    continue;
                }
                let mut a = Series::zero(self.prec);
                for (l, lam) in parts.iter().enumerate() {
                    let chi = character(lam, mu) * character(lam, nu);
                    if chi != 0 {
                        a = a.add_ref(&cl[l].scale(&Q::from_i64(chi)));
                    }
                }
                let e = mu.len() as i32 - nu.len() as i32;
                let k = Q(rug::Rational::from((Integer::from(1), z_mu(nu))));
                tot = tot.add_ref(&a.mul_ref(&yprod[b]).scale(&k).shift(e).truncate(self.prec));
            }
            let k = Q(rug::Rational::from((Integer::from(1), z_mu(mu))));
            out.insert(mu.clone(), tot.scale(&k));
        }
        Ok(out)
    }
}

/// `a(h) = sum_g h^(2g-2+n) h_{g;k}` for the multiset `k`, to `O(h^prec_out)`.
pub fn tau_log_coefficient(model: &Model, k: &[u32], prec_out: i32) -> Result<Series<Q>> {
    if k.is_empty() || k.contains(&0) {
        return Err(Error::Config("k must be a nonempty list of positive integers".into()));
    }
    let d: u32 = k.iter().sum();
    if d > MAX_SIZE {
        return Err(Error::Unsupported(format!("oracle limited to |k| <= {MAX_SIZE}, got {d}")));
    }
    let n = k.len() as i32;
    // a' = h^n a; intermediate products carry h^(l(mu) - l(nu)) >= h^(1-d)
    let prec = prec_out + n + d as i32;
    let oracle = Oracle::new(model, d, prec)?;
    let kd = kinds(k);
    let nk = kd.len();
    // sub-multisets as exponent vectors
    let mut subs: Vec<Vec<u32>> = vec![vec![]];
    for &(_, m) in &kd {
        subs = subs.into_iter().flat_map(|s| (0..=m).map(move |e| [s.clone(), vec![e]].concat())).collect();
    }
    let size = |e: &[u32]| -> u32 { e.iter().zip(&kd).map(|(x, (p, _))| x * p).sum() };
    let mut zc: HashMap<u32, HashMap<Vec<u32>, Series<Q>>> = HashMap::new();
    let mut a_terms: HashMap<Vec<u32>, Series<Q>> = HashMap::new();
    for e in &subs {
        let s = size(e);
        if s == 0 {
            continue;
        }
        if !zc.contains_key(&s) {
            zc.insert(s, oracle.z_coefficients(s)?);
        }
        let mut mu = vec![];
        for (x, (p, _)) in e.iter().zip(&kd) {
            mu.extend(std::iter::repeat_n(*p, *x as usize));
        }
        mu.sort_unstable_by(|a, b| b.cmp(a));
        a_terms.insert(e.clone(), zc[&s][&mu].clone());
    }
    // log(1 + A) = sum_j (-1)^(j+1) A^j / j, only up to the target multiset
    let target: Vec<u32> = kd.iter().map(|x| x.1).collect();
    let mut power = a_terms.clone();
    let mut acc = power.get(&target).cloned().unwrap_or_else(|| Series::zero(prec));
    for j in 2..=n {
        let mut next: HashMap<Vec<u32>, Series<Q>> = HashMap::new();
        for (e1, s1) in &power {
            for (e2, s2) in &a_terms {
                let e: Vec<u32> = (0..nk).map(|i| e1[i] + e2[i]).collect();
                if (0..nk).any(|i| e[i] > target[i]) {
                    continue;
                }
                let p = s1.mul_ref(s2).truncate(prec);
                let slot = next.entry(e).or_insert_with(|| Series::zero(prec));
                *slot = slot.add_ref(&p);
            }
        }
        power = next;
        if let Some(s) = power.get(&target) {
            let sign = if j % 2 == 0 { -1 } else { 1 };
            acc = acc.add_ref(&s.scale(&Q::from_frac(sign, j as i64)));
        }
    }
    let mut fact = Integer::from(1);
    for &m in &target {
        fact *= Integer::from(Integer::factorial(m));
    }
    let out = acc.scale(&Q(rug::Rational::from(fact))).shift(-n);
    Ok(out.truncate(prec_out))
}

/// `h_{g;k}` straight from the tau function.
pub fn hurwitz_number(model: &Model, g: u32, k: &[u32]) -> Result<Q> {
    let e = 2 * g as i32 - 2 + k.len() as i32;
    tau_log_coefficient(model, k, e + 1)?.checked_coeff(e)
}

/// All `h_{g;k}` with `g <= g_max` for one multiset `k` (index = genus).
pub fn hurwitz_numbers_all_genera(model: &Model, g_max: u32, k: &[u32]) -> Result<Vec<Q>> {
    let n = k.len() as i32;
    let a = tau_log_coefficient(model, k, 2 * g_max as i32 - 1 + n)?;
    (0..=g_max).map(|g| a.checked_coeff(2 * g as i32 - 2 + n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let c: Vec<usize> = (0..=12).map(|n| partitions(n).len()).collect();
        assert_eq!(c, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
    }

    #[test]
    fn character_orthogonality() {
        for n in 1..=7u32 {
            let ps = partitions(n);
            let nfact = Integer::from(Integer::factorial(n));
            for a in &ps {
                for b in &ps {
                    let mut s = Integer::new();
                    for mu in &ps {
                        let t = Integer::from(character(a, mu) * character(b, mu)) * &nfact / z_mu(mu);
                        s += t;
                    }
                    assert_eq!(s, if a == b { nfact.clone() } else { Integer::new() });
                }
            }
        }
    }

    #[test]
    fn transpose_sign() {
        for lam in partitions(6) {
            for mu in partitions(6) {
                let sgn = if (6 - mu.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&transpose(&lam), &mu), sgn * character(&lam, &mu));
            }
        }
    }

    #[test]
    fn sinh_values() {
        let m = Model::simple_hurwitz();
        let a = tau_log_coefficient(&m, &[2], 4).unwrap();
        assert_eq!(a.coeff(-1), Q::new(1, 2));
        assert_eq!(a.coeff(1), Q::new(1, 12));
        assert_eq!(a.coeff(3), Q::new(1, 240));
        assert_eq!(hurwitz_number(&m, 0, &[1, 1]).unwrap(), Q::new(1, 2));
    }

    #[test]
    fn one_part_genus_zero() {
        // classical count d^(d-3) of covers, divided by b! = (d-1)! from the exponential weight
        let m = Model::simple_hurwitz();
        for d in 1..=6u32 {
            let h = hurwitz_number(&m, 0, &[d]).unwrap();
            let fact = Q(rug::Rational::from(Integer::from(Integer::factorial(d - 1))));
            assert_eq!(h * fact, Q::from_i64(d as i64).pow(d as i32 - 3));
        }
    }
}
