//! Three-way agreement of `h_{g;k}`: the tau-function oracle, the closed
//! formula for `W_{g,n}` and topological recursion.

use std::collections::BTreeMap;

use crate::closedform::{mono_of, ClosedForm};
use crate::error::{Error, Result};
use crate::oracle;
use crate::scalar::{Scalar, Q};
use crate::trengine::TrEngine;

/// Nondecreasing `k` in `[1..=kmax]^n` with `|k| <= size_max`.
pub fn multisets(n: usize, kmax: u32, size_max: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, lo: u32, kmax: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in lo..=kmax.min(left) {
            cur.push(k);
            go(n - 1, k, kmax, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(n, 1, kmax, size_max, &mut vec![], &mut out);
    out
}

/// `h_{g;k}` for every `k` in `ks` from one `X`-expansion of `W_{g,n}`.
pub fn closed_values(cf: &ClosedForm<Q>, g: u32, ks: &[Vec<u32>]) -> Result<BTreeMap<Vec<u32>, Q>> {
    let Some(n) = ks.first().map(|k| k.len()) else { return Ok(BTreeMap::new()) };
    let kmax = ks.iter().flatten().copied().max().unwrap_or(1) as i16;
    let orders = vec![kmax; n];
    let wx = cf.to_x(&cf.w(g, &orders)?, &orders)?;
    let mut out = BTreeMap::new();
    for k in ks {
        let m: Vec<i16> = k.iter().map(|&x| x as i16).collect();
        let prod: i64 = k.iter().map(|&x| x as i64).product();
        out.insert(k.clone(), wx.coeff(&mono_of(&m)) * Q::new(1, prod));
    }
    Ok(out)
}

/// `h_{g;k}` from the recursion (unstable cases from `omega_{0,1}`, `omega_{0,2}`).
pub fn tr_value<F: Scalar>(eng: &mut TrEngine<F>, g: u32, k: &[u32]) -> Result<F> {
    match (g, k.len()) {
        (0, 1) => eng.hurwitz_01(k[0]),
        (0, 2) => eng.hurwitz_02(k[0], k[1]),
        (_, 0) => Err(Error::Config("k must be nonempty".into())),
        (g, n) => {
            let om = eng.omega(g, n as u32)?.clone();
            eng.hurwitz(&om, k)
        }
    }
}

/// `|a - b|` relative to the largest of `|a|`, `|b|` and `scale`; exact
/// zeros of `h` are compared against the size of the whole table.
fn residual<F: Scalar>(a: &F, b: &F, scale: f64) -> f64 {
    let d = a.sub_ref(b);
    if d.is_zero() {
        return 0.0;
    }
    let s = a.abs_f64().max(b.abs_f64()).max(scale);
    if s == 0.0 {
        d.abs_f64()
    } else {
        d.abs_f64() / s
    }
}

/// Compares the closed formula and the recursion on every `k` with parts
/// `<= kmax`, and the oracle as well where `|k| <= oracle_max`.
pub fn cross_check<F: Scalar>(
    cf: &ClosedForm<Q>,
    eng: &mut TrEngine<F>,
    g: u32,
    n: usize,
    kmax: u32,
    oracle_max: u32,
) -> Result<(bool, String)> {
    let ks = multisets(n, kmax, kmax * n as u32);
    if ks.is_empty() {
        return Err(Error::Config("no k in range".into()));
    }
    let closed = closed_values(cf, g, &ks)?;
    let scale = closed.values().map(|v| v.abs_f64()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    let mut with_oracle = 0;
    for k in &ks {
        let c = F::from_rational(&closed[k].0);
        let t = tr_value(eng, g, k)?;
        let r = residual(&c, &t, scale);
        let ok = if F::is_exact() { c == t } else { r <= super::tolerance::<F>() };
        if !ok {
            return Ok((false, format!("k = {k:?}: closed formula {c}, recursion {t}")));
        }
        worst = worst.max(r);
        if k.iter().sum::<u32>() <= oracle_max {
            let o = oracle::hurwitz_number(&cf.model, g, k)?;
            if o != closed[k] {
                return Ok((false, format!("k = {k:?}: oracle {o}, closed formula {}", closed[k])));
            }
            with_oracle += 1;
        }
    }
    let how = if F::is_exact() { "exactly".to_string() } else { format!("to relative {worst:.1e}") };
    Ok((true, format!("{} values of h_{{{g};k}} agree {how}; {with_oracle} also against the oracle", ks.len())))
}

/// Closed formula against the oracle, exactly, for every `(g, n)` with
/// `2g - 2 + n <= chi_max`, parts `<= kmax` and `|k| <= size_max`. From six
/// variables on, parts are capped at 3: the closed formula is truncated on a
/// box, whose cost grows like `kmax^n`.
pub fn closed_vs_oracle(cf: &ClosedForm<Q>, chi_max: u32, kmax: u32, size_max: u32) -> Result<(bool, String)> {
    let mut count = 0;
    for n in 1..=(chi_max + 2) as usize {
        let kn = if n >= 6 { kmax.min(3) } else { kmax };
        let ks = multisets(n, kn, size_max);
        if ks.is_empty() {
            continue;
        }
        let g_max = (chi_max + 2 - n as u32) / 2;
        let closed: Vec<_> = (0..=g_max).map(|g| closed_values(cf, g, &ks)).collect::<Result<_>>()?;
        for k in &ks {
            let o = oracle::hurwitz_numbers_all_genera(&cf.model, g_max, k)?;
            for (g, c) in closed.iter().enumerate() {
                if o[g] != c[k] {
                    return Ok((false, format!("g = {g}, k = {k:?}: oracle {}, closed formula {}", o[g], c[k])));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} values agree exactly (2g-2+n <= {chi_max}, k_i <= {kmax}, |k| <= {size_max})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Curve, Model};
    use crate::trengine::Recursion;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 3, 6).len(), 6);
        assert_eq!(multisets(3, 4, 5), vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 1, 3], vec![1, 2, 2]]);
    }

    #[test]
    fn simple_hurwitz_three_ways() {
        let m = Model::simple_hurwitz();
        let cf = ClosedForm::<Q>::new(&m).unwrap();
        let mut e = TrEngine::new(Curve::<Q>::build(&m).unwrap(), Recursion::Tr).unwrap();
        for (g, n) in [(0, 1), (0, 2), (0, 3), (1, 1)] {
            let (ok, w) = cross_check(&cf, &mut e, g, n, 4, 8).unwrap();
            assert!(ok, "({g},{n}): {w}");
        }
    }

    #[test]
    fn dessins_closed_against_oracle() {
        let cf = ClosedForm::<Q>::new(&Model::dessins()).unwrap();
        let (ok, w) = closed_vs_oracle(&cf, 2, 4, 6).unwrap();
        assert!(ok, "{w}");
    }
}
