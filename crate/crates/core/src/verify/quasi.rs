//! Quasi-polynomiality: `h_{g;k} = sum_I A_I(k) prod_j [X^{k_j}] xi^{I_j}`
//! with polynomials `A_I` of total degree at most `3g - 3 + n`, fitted on a
//! box of `k` and checked on the next layer.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closedform::{mono_of, ClosedForm};
use crate::error::{Error, Result};
use crate::model::Curve;
use crate::scalar::{Scalar, Q};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `(z - p_a)^-j`, `j = 1..m_a - 1`, expanded in `X`
    Xi,
    /// `z^alpha / Q-check(z)`, `alpha < deg Q-check`, expanded in `X`
    XiTilde,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Xi => "xi",
            Basis::XiTilde => "xi~",
        })
    }
}

/// `[X^k] xi^i` for `k = 0..=kmax`, one row per basis function.
pub fn basis_coeffs<F: Scalar>(curve: &Curve<F>, basis: Basis, kmax: u32) -> Result<Vec<Vec<F>>> {
    let prec = kmax as i32 + 1;
    let z = curve.z_of_x(prec)?;
    let funcs: Vec<Series<F>> = match basis {
        Basis::Xi => {
            let mut v = vec![];
            for c in &curve.crit {
                let inv = z.sub_ref(&Series::constant(c.p.clone(), prec)).inv()?;
                let mut pw = inv.clone();
                for _ in 0..c.order {
                    v.push(pw.clone());
                    pw = pw.mul_ref(&inv);
                }
            }
            v
        }
        Basis::XiTilde => {
            let qc = curve.qcheck.to_series(prec).compose(&z)?.inv()?;
            let mut v = vec![];
            let mut zp = Series::one(prec);
            for _ in 0..curve.qcheck.deg().max(0) {
                v.push(qc.mul_ref(&zp));
                zp = zp.mul_ref(&z);
            }
            v
        }
    };
    Ok(funcs.iter().map(|s| (0..=kmax as i32).map(|k| s.coeff(k)).collect()).collect())
}

/// `h_{g;k}` for every `k` in `[1..=kmax]^n`, from the closed formula for
/// `H_{g,n}`.
pub fn h_table(cf: &ClosedForm<Q>, g: u32, n: usize, kmax: u32) -> Result<BTreeMap<Vec<u32>, Q>> {
    let ks = vec![kmax as i16; n];
    let hx = cf.to_x(&cf.h(g, &ks)?, &ks)?;
    let mut out = BTreeMap::new();
    for k in tuples(n, kmax) {
        let m: Vec<i16> = k.iter().map(|&x| x as i16).collect();
        out.insert(k, hx.coeff(&mono_of(&m)));
    }
    Ok(out)
}

/// All of `[1..=kmax]^n` in lexicographic order.
pub fn tuples(n: usize, kmax: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| (1..=kmax).map(move |k| [t.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Exponent vectors of total degree `<= d` in `n` variables.
pub fn monomials(n: usize, d: i32) -> Vec<Vec<u32>> {
    if d < 0 {
        return vec![];
    }
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                let used: u32 = t.iter().sum();
                (0..=d as u32 - used).map(move |e| [t.clone(), vec![e]].concat())
            })
            .collect();
    }
    out
}

/// Result of a row-reduced solve of an overdetermined system
/// `rows x = rhs`; free variables are set to zero.
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub x: Vec<F>,
    pub rank: usize,
    /// `None` when consistent; otherwise the index of an equation with a
    /// nonzero residual after elimination.
    pub inconsistent: Option<usize>,
}

pub fn solve<F: Scalar>(rows: &[Vec<F>], rhs: &[F]) -> Solution<F> {
    let ncol = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Vec<(usize, Vec<F>, F)> = rows.iter().cloned().zip(rhs.iter().cloned()).enumerate().map(|(i, (r, b))| (i, r, b)).collect();
    let scale = a.iter().flat_map(|r| r.1.iter()).map(|x| x.abs_f64()).fold(0.0, f64::max);
    let bscale = rhs.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    let small = |x: &F, s: f64| if F::is_exact() { x.is_zero() } else { x.abs_f64() <= super::tolerance::<F>() * s.max(1e-300) };
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncol {
        let best = (r..a.len()).max_by(|&i, &j| a[i].1[c].abs_f64().total_cmp(&a[j].1[c].abs_f64()));
        let Some(p) = best.filter(|&p| !small(&a[p].1[c], scale)) else { continue };
        a.swap(r, p);
        let inv = a[r].1[c].inv();
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &mut head[r];
        for x in prow.1.iter_mut() {
            *x *= &inv;
        }
        prow.2 *= &inv;
        for row in tail.iter_mut() {
            let f = row.1[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.1.iter_mut().zip(&prow.1) {
                *x -= f.mul_ref(y);
            }
            row.2 -= f.mul_ref(&prow.2);
        }
        pivots.push(c);
        r += 1;
    }
    let inconsistent = a[r..].iter().find(|row| !small(&row.2, bscale)).map(|row| row.0);
    let mut x = vec![F::zero(); ncol];
    for (i, &c) in pivots.iter().enumerate().rev() {
        let mut v = a[i].2.clone();
        for (j, xj) in x.iter().enumerate().skip(c + 1) {
            if !xj.is_zero() {
                v -= a[i].1[j].mul_ref(xj);
            }
        }
        x[c] = v;
    }
    Solution { x, rank: r, inconsistent }
}

/// One coefficient of a fitted `A_I`: `coeff * prod k_j^exps_j`.
#[derive(Clone, Debug)]
pub struct FitTerm<F> {
    pub index: Vec<usize>,
    pub exps: Vec<u32>,
    pub coeff: F,
}

#[derive(Clone, Debug)]
pub struct QuasiFit<F> {
    pub basis: Basis,
    pub degree: i32,
    pub unknowns: usize,
    pub rank: usize,
    pub train: usize,
    pub held_out: usize,
    pub passed: bool,
    pub witness: String,
    /// nonzero coefficients of the particular solution
    pub terms: Vec<FitTerm<F>>,
}

/// Fits `data` on `[1..=train_max]^n` with polynomials of total degree
/// `<= degree` and checks every tuple of `data` outside that box.
pub fn fit<F: Scalar>(data: &BTreeMap<Vec<u32>, F>, coeffs: &[Vec<F>], basis: Basis, n: usize, degree: i32, train_max: u32) -> Result<QuasiFit<F>> {
    let nb = coeffs.len();
    if nb == 0 {
        return Err(Error::Computation("empty basis".into()));
    }
    let kmax = data.keys().flatten().copied().max().unwrap_or(0);
    if coeffs[0].len() <= kmax as usize {
        return Err(Error::Truncation(format!("basis known to X^{}, data reach k = {kmax}", coeffs[0].len() - 1)));
    }
    let mons = monomials(n, degree);
    let idx = index_tuples(n, nb);
    let row = |k: &[u32]| -> Vec<F> {
        let mut v = Vec::with_capacity(idx.len() * mons.len());
        for ii in &idx {
            let base: F = ii.iter().zip(k).map(|(&i, &kj)| coeffs[i][kj as usize].clone()).fold(F::one(), |a, b| a * b);
            for e in &mons {
                let p: i64 = e.iter().zip(k).map(|(&ej, &kj)| (kj as i64).pow(ej)).product();
                v.push(base.mul_ref(&F::from_i64(p)));
            }
        }
        v
    };
    let (train, held): (Vec<_>, Vec<_>) = data.iter().partition(|(k, _)| k.iter().all(|&x| x <= train_max));
    let rows: Vec<Vec<F>> = train.iter().map(|(k, _)| row(k)).collect();
    let rhs: Vec<F> = train.iter().map(|(_, v)| (*v).clone()).collect();
    let unknowns = idx.len() * mons.len();
    let mk = |passed: bool, witness: String, sol: &Solution<F>| {
        let mut terms = vec![];
        for (j, c) in sol.x.iter().enumerate() {
            if !c.is_zero() {
                terms.push(FitTerm { index: idx[j / mons.len()].clone(), exps: mons[j % mons.len()].clone(), coeff: c.clone() });
            }
        }
        QuasiFit { basis, degree, unknowns, rank: sol.rank, train: train.len(), held_out: held.len(), passed, witness, terms }
    };
    if unknowns == 0 {
        let sol = Solution { x: vec![], rank: 0, inconsistent: None };
        let nz = train.iter().find(|(_, v)| !v.is_zero());
        return Ok(match nz {
            Some((k, v)) => mk(false, format!("degree bound {degree} < 0 but h at {k:?} is {v}"), &sol),
            None => mk(true, "degree bound < 0 and all data vanish".into(), &sol),
        });
    }
    let sol = solve(&rows, &rhs);
    if let Some(i) = sol.inconsistent {
        let w = format!("no fit of degree {degree} in the {basis} basis: training point {:?} inconsistent (rank {})", train[i].0, sol.rank);
        return Ok(mk(false, w, &sol));
    }
    if sol.rank < unknowns {
        return Err(Error::Computation(format!(
            "singular interpolation: rank {} for {unknowns} unknowns on [1..={train_max}]^{n}",
            sol.rank
        )));
    }
    let scale = data.values().map(|v| v.abs_f64()).fold(0.0, f64::max);
    for (k, v) in &held {
        let pred: F = row(k).iter().zip(&sol.x).map(|(a, b)| a.mul_ref(b)).sum();
        let diff = pred.sub_ref(v);
        let ok = if F::is_exact() { diff.is_zero() } else { diff.abs_f64() <= super::tolerance::<F>() * scale.max(v.abs_f64()) };
        if !ok {
            let w = format!("held-out k = {k:?}: predicted {pred}, actual {v}");
            return Ok(mk(false, w, &sol));
        }
    }
    let w = format!(
        "degree {degree} in the {basis} basis: {} unknowns fitted on {} points, {} held-out points reproduced",
        unknowns,
        train.len(),
        held.len()
    );
    Ok(mk(true, w, &sol))
}

fn index_tuples(n: usize, nb: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t: Vec<usize>| (0..nb).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// `3g - 3 + n`.
pub fn degree_bound(g: u32, n: usize) -> i32 {
    3 * g as i32 - 3 + n as i32
}

/// Smallest training box that can determine the fit: each variable carries
/// `nb (degree + 1)` unknowns, plus one spare value; never below 5.
pub fn default_train_max(nb: usize, degree: i32) -> u32 {
    5.max(nb as u32 * (degree.max(0) as u32 + 1) + 1)
}

/// Closed-formula data on `[1..=train_max + 1]^n`, fitted on
/// `[1..=train_max]^n` with the degree bound `3g - 3 + n`.
pub fn quasipoly_fit<F: Scalar>(
    cf: &ClosedForm<Q>,
    curve: &Curve<F>,
    basis: Basis,
    g: u32,
    n: usize,
    train_max: Option<u32>,
) -> Result<QuasiFit<F>> {
    if 2 * g as i32 - 2 + n as i32 <= 0 {
        return Err(Error::Unsupported(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let degree = degree_bound(g, n);
    let nb = basis_coeffs(curve, basis, 1)?.len();
    let train_max = train_max.unwrap_or_else(|| default_train_max(nb, degree));
    let data = to_field(&h_table(cf, g, n, train_max + 1)?);
    let coeffs = basis_coeffs(curve, basis, train_max + 1)?;
    fit(&data, &coeffs, basis, n, degree, train_max)
}

pub fn to_field<F: Scalar>(data: &BTreeMap<Vec<u32>, Q>) -> BTreeMap<Vec<u32>, F> {
    data.iter().map(|(k, v)| (k.clone(), F::from_rational(&v.0))).collect()
}

/// Adds `prod_j k_j^(d+1) [X^{k_j}] xi^0`, a quasi-polynomial term one degree
/// above the bound.
pub fn corrupt<F: Scalar>(data: &BTreeMap<Vec<u32>, F>, coeffs: &[Vec<F>], degree: i32) -> BTreeMap<Vec<u32>, F> {
    let e = (degree + 1).max(0) as u32;
    data.iter()
        .map(|(k, v)| {
            let add = k.iter().fold(F::one(), |a, &kj| a * coeffs[0][kj as usize].clone() * F::from_i64((kj as i64).pow(e)));
            (k.clone(), v.add_ref(&add))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

    #[test]
    fn simple_hurwitz_basis_is_k_to_the_k() {
        let c = Curve::<Q>::build(&Model::simple_hurwitz()).unwrap();
        let xi = basis_coeffs(&c, Basis::Xi, 6).unwrap();
        // 1/(z - 1) = -(1 + D z)
        for k in 1..=6u32 {
            let kk = Q::int(k).pow(k as i32) / Q::int((1..=k).product::<u32>());
            assert_eq!(xi[0][k as usize], -kk);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let rows = vec![vec![Q::int(1)], vec![Q::int(2)]];
        let s = solve(&rows, &[Q::int(1), Q::int(2)]);
        assert_eq!((s.inconsistent, s.x[0].clone()), (None, Q::int(1)));
        let s = solve(&rows, &[Q::int(1), Q::int(3)]);
        assert!(s.inconsistent.is_some());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 0).len(), 1);
        assert!(monomials(1, -1).is_empty());
    }

    #[test]
    fn one_part_genus_one() {
        let m = Model::simple_hurwitz();
        let cf = ClosedForm::<Q>::new(&m).unwrap();
        let c = Curve::<Q>::build(&m).unwrap();
        let f = quasipoly_fit(&cf, &c, Basis::Xi, 1, 1, Some(5)).unwrap();
        assert!(f.passed, "{}", f.witness);
        // A(k) = -(k - 1)/24 against xi = -k^k/k!
        let get = |e: u32| f.terms.iter().find(|t| t.exps == [e]).map(|t| t.coeff.clone()).unwrap_or(Q::int(0));
        assert_eq!((get(0), get(1)), (Q::new(1, 24), Q::new(-1, 24)));
    }
}
