//! Hypergeometric data `(psi_hat, y_hat)` and the spectral curve derived from it.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::series::{inv_s_coeffs, s_coeffs, Poly, RatFun, Series};

/// Invariant names reported by validation.
pub const INV_VANISH: &str = "psi and y nonzero but vanishing at zero";
pub const INV_CONST: &str = "nonvanishing constant terms of P2, P3, R2, R3, R4";
pub const INV_ALPHA: &str = "alpha nonzero";

/// The `(psi_hat, y_hat)` data. All coefficients are exact; numeric mode
/// converts them when a computation starts.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    /// `psi_hat = S(h d_y) P1 + log P2 - log P3`, `y_hat = R1 / R2`.
    /// With `deformed = false` the `S(h d_y)` factor is dropped (a control
    /// case outside the family).
    FamilyI { p1: Poly<Q>, p2: Poly<Q>, p3: Poly<Q>, r1: Poly<Q>, r2: Poly<Q>, deformed: bool },
    /// `psi_hat = alpha y`, `y_hat = R1/R2 + S(h z d_z)^{-1} (log R3 - log R4)`.
    FamilyII { alpha: Q, r1: Poly<Q>, r2: Poly<Q>, r3: Poly<Q>, r4: Poly<Q> },
    /// Polynomial data: `psi[m]` is the `h^(2m)` coefficient of `psi_hat(h^2, y)`,
    /// `y[m]` the `h^(2m)` coefficient of `y_hat(h^2, z)`.
    Raw { psi: Vec<Poly<Q>>, y: Vec<Poly<Q>> },
}

fn poly(v: &[i64]) -> Poly<Q> {
    Poly::from_ints(v)
}

fn q_to<F: Scalar>(s: &Series<Q>) -> Series<F> {
    s.map(|x| F::from_rational(&x.0))
}

/// `log(p / p(0))` as a power series.
fn log_series(p: &Poly<Q>, prec: i32) -> Result<Series<Q>> {
    let c0 = p.coeff(0);
    p.scale(&c0.inv()).to_series(prec).log()
}

impl Model {
    pub fn family_i(p1: Poly<Q>, p2: Poly<Q>, p3: Poly<Q>, r1: Poly<Q>, r2: Poly<Q>) -> Model {
        Model::FamilyI { p1, p2, p3, r1, r2, deformed: true }
    }

    /// Simple Hurwitz numbers: `psi = y`, `y = z`.
    pub fn simple_hurwitz() -> Model {
        Self::family_i(poly(&[0, 1]), poly(&[1]), poly(&[1]), poly(&[0, 1]), poly(&[1]))
    }
    /// Monotone Hurwitz numbers: `psi = -log(1-y)`, `y = z`.
    pub fn monotone_hurwitz() -> Model {
        Self::family_i(Poly::zero(), poly(&[1]), poly(&[1, -1]), poly(&[0, 1]), poly(&[1]))
    }
    /// Dessins: `psi = log(1+y)`, `y = z^2`.
    pub fn dessins() -> Model {
        Self::family_i(Poly::zero(), poly(&[1, 1]), poly(&[1]), poly(&[0, 0, 1]), poly(&[1]))
    }
    /// Orbifold Hurwitz numbers: `psi = y`, `y = z^q`.
    pub fn orbifold(q: usize) -> Model {
        let mut r1 = vec![0; q + 1];
        r1[q] = 1;
        Self::family_i(poly(&[0, 1]), poly(&[1]), poly(&[1]), poly(&r1), poly(&[1]))
    }
    /// r-spin Hurwitz numbers: `psi_hat = S(h d_y) y^r`, `y = z`; `deformed = false`
    /// gives the undeformed control `psi_hat = y^r`.
    pub fn r_spin(r: usize, deformed: bool) -> Model {
        let mut p1 = vec![0; r + 1];
        p1[r] = 1;
        Model::FamilyI { p1: poly(&p1), p2: poly(&[1]), p3: poly(&[1]), r1: poly(&[0, 1]), r2: poly(&[1]), deformed }
    }
    /// Extended Ooguri-Vafa data: `psi = alpha y`, `R3 = 1 - z/A`, `R4 = 1 - A z`.
    pub fn extended_ooguri_vafa(alpha: Q, a: Q) -> Model {
        let r3 = Poly::new(vec![Q::one(), -a.inv()]);
        let r4 = Poly::new(vec![Q::one(), -a]);
        Model::FamilyII { alpha, r1: Poly::zero(), r2: poly(&[1]), r3, r4 }
    }
    /// `psi = y`, `y = z - z^2/8`: here `Q = (1 - z/2)^2` has a double zero.
    pub fn double_zero() -> Model {
        let r1 = Poly::new(vec![Q::zero(), Q::one(), Q::new(-1, 8)]);
        Self::family_i(poly(&[0, 1]), poly(&[1]), poly(&[1]), r1, poly(&[1]))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::FamilyI { .. } => "FamilyI",
            Model::FamilyII { .. } => "FamilyII",
            Model::Raw { .. } => "Raw",
        }
    }

    /// Short description used in reports.
    pub fn fingerprint(&self) -> String {
        let p = |p: &Poly<Q>| format!("[{}]", p.c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        match self {
            Model::FamilyI { p1, p2, p3, r1, r2, deformed } => format!(
                "FamilyI(P1={},P2={},P3={},R1={},R2={}{})",
                p(p1),
                p(p2),
                p(p3),
                p(r1),
                p(r2),
                if *deformed { "" } else { ",undeformed" }
            ),
            Model::FamilyII { alpha, r1, r2, r3, r4 } => {
                format!("FamilyII(alpha={alpha},R1={},R2={},R3={},R4={})", p(r1), p(r2), p(r3), p(r4))
            }
            Model::Raw { psi, y } => format!(
                "Raw(psi={},y={})",
                psi.iter().map(p).collect::<Vec<_>>().join(";"),
                y.iter().map(p).collect::<Vec<_>>().join(";")
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nz0 = |p: &Poly<Q>, name: &str| {
            if p.coeff(0).is_zero() {
                Err(Error::validation(INV_CONST, format!("{name}(0) = 0")))
            } else {
                Ok(())
            }
        };
        match self {
            Model::FamilyI { p1, p2, p3, r1, r2, .. } => {
                if p2.coeff(0).is_zero() || p3.coeff(0).is_zero() {
                    return Err(Error::validation(INV_VANISH, "log P2 - log P3 must be regular at y = 0 (P2(0), P3(0) nonzero)"));
                }
                nz0(r2, "R2")?;
                if !p1.coeff(0).is_zero() || p2.coeff(0) != p3.coeff(0) {
                    return Err(Error::validation(INV_VANISH, "psi(0) = P1(0) + log(P2(0)/P3(0)) must vanish"));
                }
                if p1.is_zero() && p2.monic() == p3.monic() {
                    return Err(Error::validation(INV_VANISH, "psi is identically zero"));
                }
                if !r1.coeff(0).is_zero() {
                    return Err(Error::validation(INV_VANISH, "y(0) = R1(0)/R2(0) must vanish"));
                }
                if r1.is_zero() {
                    return Err(Error::validation(INV_VANISH, "y is identically zero"));
                }
            }
            Model::FamilyII { alpha, r1, r2, r3, r4 } => {
                if alpha.is_zero() {
                    return Err(Error::validation(INV_ALPHA, "alpha = 0"));
                }
                nz0(r2, "R2")?;
                if r3.coeff(0).is_zero() || r4.coeff(0).is_zero() {
                    return Err(Error::validation(INV_VANISH, "log R3 - log R4 must be regular at z = 0 (R3(0), R4(0) nonzero)"));
                }
                if !r1.coeff(0).is_zero() || r3.coeff(0) != r4.coeff(0) {
                    return Err(Error::validation(INV_VANISH, "y(0) = R1(0)/R2(0) + log(R3(0)/R4(0)) must vanish"));
                }
                if r1.is_zero() && r3.monic() == r4.monic() {
                    return Err(Error::validation(INV_VANISH, "y is identically zero"));
                }
            }
            Model::Raw { psi, y } => {
                let p0 = psi.first().cloned().unwrap_or_else(Poly::zero);
                let y0 = y.first().cloned().unwrap_or_else(Poly::zero);
                if p0.is_zero() || y0.is_zero() {
                    return Err(Error::validation(INV_VANISH, "psi(y) and y(z) must be nonzero"));
                }
                if !p0.coeff(0).is_zero() || !y0.coeff(0).is_zero() {
                    return Err(Error::validation(INV_VANISH, "psi(0) and y(0) must vanish"));
                }
                if y.iter().skip(1).any(|p| !p.coeff(0).is_zero()) {
                    return Err(Error::validation(INV_VANISH, "y_hat(h^2, 0) must vanish"));
                }
            }
        }
        Ok(())
    }

    /// `psi_hat_m(y)` for `m = 0..=m_max`, each to `O(y^prec)`.
    pub fn psi_hat_series(&self, m_max: usize, prec: i32) -> Result<Vec<Series<Q>>> {
        let mut out = vec![];
        match self {
            Model::FamilyI { p1, p2, p3, deformed, .. } => {
                let base = p1.to_series(prec).add_ref(&log_series(p2, prec)?).sub_ref(&log_series(p3, prec)?);
                out.push(base);
                let s = s_coeffs::<Q>(m_max);
                let mut d = p1.clone();
                for m in 1..=m_max {
                    d = d.deriv().deriv();
                    if *deformed {
                        out.push(d.scale(&s[m]).to_series(prec));
                    } else {
                        out.push(Series::zero(prec));
                    }
                }
            }
            Model::FamilyII { alpha, .. } => {
                out.push(Poly::new(vec![Q::zero(), alpha.clone()]).to_series(prec));
                for _ in 1..=m_max {
                    out.push(Series::zero(prec));
                }
            }
            Model::Raw { psi, .. } => {
                for m in 0..=m_max {
                    out.push(psi.get(m).cloned().unwrap_or_else(Poly::zero).to_series(prec));
                }
            }
        }
        Ok(out)
    }

    /// `y_hat_m(z)` for `m = 0..=m_max`, each to `O(z^prec)`.
    pub fn y_hat_series(&self, m_max: usize, prec: i32) -> Result<Vec<Series<Q>>> {
        let mut out = vec![];
        match self {
            Model::FamilyI { r1, r2, .. } => {
                out.push(RatFun::new(r1.clone(), r2.clone()).expand_at(&Q::zero(), prec)?);
                for _ in 1..=m_max {
                    out.push(Series::zero(prec));
                }
            }
            Model::FamilyII { r1, r2, r3, r4, .. } => {
                let l = log_series(r3, prec)?.sub_ref(&log_series(r4, prec)?);
                out.push(RatFun::new(r1.clone(), r2.clone()).expand_at(&Q::zero(), prec)?.add_ref(&l));
                let is = inv_s_coeffs::<Q>(m_max);
                let mut d = l.clone();
                for m in 1..=m_max {
                    d = d.euler().euler();
                    out.push(d.scale(&is[m]));
                }
            }
            Model::Raw { y, .. } => {
                for m in 0..=m_max {
                    out.push(y.get(m).cloned().unwrap_or_else(Poly::zero).to_series(prec));
                }
            }
        }
        Ok(out)
    }

    /// `psi'(y)` as a rational function of `y`.
    pub fn psi_prime(&self) -> RatFun<Q> {
        match self {
            Model::FamilyI { p1, p2, p3, .. } => RatFun::from_poly(p1.deriv())
                .add_ref(&RatFun::new(p2.deriv(), p2.clone()))
                .sub_ref(&RatFun::new(p3.deriv(), p3.clone())),
            Model::FamilyII { alpha, .. } => RatFun::constant(alpha.clone()),
            Model::Raw { psi, .. } => RatFun::from_poly(psi[0].deriv()),
        }
    }

    /// `y'(z)` as a rational function of `z`.
    pub fn y_prime(&self) -> RatFun<Q> {
        match self {
            Model::FamilyI { r1, r2, .. } => RatFun::new(r1.clone(), r2.clone()).deriv(),
            Model::FamilyII { r1, r2, r3, r4, .. } => RatFun::new(r1.clone(), r2.clone())
                .deriv()
                .add_ref(&RatFun::new(r3.deriv(), r3.clone()))
                .sub_ref(&RatFun::new(r4.deriv(), r4.clone())),
            Model::Raw { y, .. } => RatFun::from_poly(y[0].deriv()),
        }
    }

    /// `y(z)` when it is rational.
    pub fn y_rational(&self) -> Option<RatFun<Q>> {
        match self {
            Model::FamilyI { r1, r2, .. } => Some(RatFun::new(r1.clone(), r2.clone())),
            Model::FamilyII { r1, r2, r3, r4, .. } => {
                if r3 == r4 {
                    Some(RatFun::new(r1.clone(), r2.clone()))
                } else {
                    None
                }
            }
            Model::Raw { y, .. } => Some(RatFun::from_poly(y[0].clone())),
        }
    }

    /// `Q(z) = 1 - z y'(z) psi'(y(z))`.
    pub fn q_function(&self) -> RatFun<Q> {
        let pp = self.psi_prime();
        let pp_z = if pp.num.deg() <= 0 && pp.den.deg() == 0 {
            pp
        } else {
            pp.compose(&self.y_rational().expect("non-constant psi' needs rational y"))
        };
        let zy = self.y_prime().mul_ref(&RatFun::from_poly(Poly::x()));
        RatFun::constant(Q::one()).sub_ref(&zy.mul_ref(&pp_z))
    }

    pub fn is_undeformed_family_i(&self) -> bool {
        matches!(self, Model::FamilyI { deformed: false, .. })
    }
}

/// A zero of `Q`, i.e. of `dx`.
#[derive(Clone, Debug)]
pub struct CritPoint<F> {
    pub p: F,
    /// Order of vanishing of `Q` at `p`; the number of local sheets is `order + 1`.
    pub order: u32,
}

impl<F> CritPoint<F> {
    pub fn sheets(&self) -> u32 {
        self.order + 1
    }
}

/// Spectral curve `(CP^1, x = log z - psi(y(z)), y(z), dz dz/(z-z)^2)` over `F`.
#[derive(Clone, Debug)]
pub struct Curve<F: Scalar> {
    pub model: Model,
    /// `Q(z)`, with `dx = Q(z) dz / z`.
    pub q: RatFun<F>,
    /// Monic numerator of `Q`, i.e. `prod (z - p_a)^(m_a - 1)`.
    pub qcheck: Poly<F>,
    pub crit: Vec<CritPoint<F>>,
    /// `y'(z)`.
    pub dy: RatFun<F>,
}

impl<F: Scalar> Curve<F> {
    /// Builds the curve; exact fields require rational critical points.
    pub fn build(model: &Model) -> Result<Self> {
        model.validate()?;
        let qf = model.q_function();
        if qf.is_zero() {
            return Err(Error::Computation("Q vanishes identically (degenerate model)".into()));
        }
        let qcheck_q = qf.num.monic();
        let mut crit = vec![];
        for (factor, mult) in qcheck_q.squarefree() {
            if F::is_exact() {
                let roots = factor.rational_roots();
                if (roots.len() as i32) < factor.deg() {
                    return Err(Error::Unsupported(format!(
                        "critical points of {} are not all rational; use numeric mode",
                        model.fingerprint()
                    )));
                }
                for r in roots {
                    crit.push(CritPoint { p: F::from_rational(&r.0), order: mult });
                }
            } else {
                for r in factor.to_c().roots_simple() {
                    let p = F::from_c(&r).expect("numeric field");
                    crit.push(CritPoint { p, order: mult });
                }
            }
        }
        let conv = |r: &RatFun<Q>| RatFun { num: r.num.map(|x| F::from_rational(&x.0)), den: r.den.map(|x| F::from_rational(&x.0)) };
        let dy = conv(&model.y_prime());
        for c in &crit {
            let den = dy.den.eval(&c.p);
            let num = dy.num.eval(&c.p);
            if den.near_zero(1.0) || num.near_zero(1.0) {
                return Err(Error::Computation(format!("dy vanishes or y is singular at critical point {:?}", c.p)));
            }
        }
        Ok(Curve { model: model.clone(), q: conv(&qf), qcheck: qcheck_q.map(|x| F::from_rational(&x.0)), crit, dy })
    }

    /// True if every zero of `dx` is simple.
    pub fn all_simple(&self) -> bool {
        self.crit.iter().all(|c| c.order == 1)
    }

    /// `x'(p_a + t) = Q(p_a + t) / (p_a + t)` to `O(t^prec)`.
    pub fn dx_at(&self, a: usize, prec: i32) -> Result<Series<F>> {
        let xq = self.q.mul_ref(&RatFun::new(Poly::one(), Poly::x()));
        xq.expand_at(&self.crit[a].p, prec)
    }

    /// `y'(p_a + t)` to `O(t^prec)`.
    pub fn dy_at(&self, a: usize, prec: i32) -> Result<Series<F>> {
        self.dy.expand_at(&self.crit[a].p, prec)
    }

    /// `y(z)` at the origin to `O(z^prec)`.
    pub fn y_series(&self, prec: i32) -> Result<Series<F>> {
        Ok(q_to(&self.model.y_hat_series(0, prec)?[0]))
    }

    /// `X(z) = z exp(-psi(y(z)))` to `O(z^prec)`.
    pub fn x_series(&self, prec: i32) -> Result<Series<F>> {
        let psi = q_to::<F>(&self.model.psi_hat_series(0, prec)?[0]);
        let y = self.y_series(prec)?;
        let e = psi.compose(&y)?.neg_ref().exp()?;
        Ok(e.shift(1).truncate(prec))
    }

    /// `z(X)` to `O(X^prec)`.
    pub fn z_of_x(&self, prec: i32) -> Result<Series<F>> {
        self.x_series(prec)?.reversion()
    }
}

/// Reproducible random members of the two families with small rational
/// coefficients, simple critical points and `deg Q-check <= 3`.
pub mod random {
    use rand::seq::IndexedRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::{Curve, Model};
    use crate::scalar::{Scalar, C, Q};
    use crate::series::Poly;

    const VALUES: [(i64, i64); 6] = [(-2, 1), (-1, 1), (-1, 2), (1, 2), (1, 1), (2, 1)];

    fn pick(rng: &mut ChaCha8Rng) -> Q {
        let (n, d) = *VALUES.choose(rng).expect("nonempty");
        Q::new(n, d)
    }

    fn usable(m: &Model) -> bool {
        m.validate().is_ok()
            && Curve::<C>::build(m).map(|c| c.all_simple() && c.qcheck.deg() >= 1 && c.qcheck.deg() <= 3).unwrap_or(false)
    }

    /// `psi = a y + log(1 + b y)`, `y = (z + e z^2) / (1 + f z)`.
    pub fn family_i(seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let a = if rng.random_bool(0.5) { pick(&mut rng) } else { Q::zero() };
            let p2 = Poly::new(vec![Q::one(), pick(&mut rng)]);
            let r1 = Poly::new(vec![Q::zero(), Q::one(), if rng.random_bool(0.5) { pick(&mut rng) } else { Q::zero() }]);
            let r2 = Poly::new(vec![Q::one(), if rng.random_bool(0.5) { pick(&mut rng) } else { Q::zero() }]);
            let m = Model::family_i(Poly::new(vec![Q::zero(), a]), p2, Poly::one(), r1, r2);
            if usable(&m) {
                return m;
            }
        }
    }

    /// `psi = alpha y`, `y = e z + log(1 + b z) - log(1 + c z)`.
    pub fn family_ii(seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let alpha = pick(&mut rng);
            let e = if rng.random_bool(0.5) { pick(&mut rng) } else { Q::zero() };
            let (b, c) = (pick(&mut rng), pick(&mut rng));
            if b == c {
                continue;
            }
            let m = Model::FamilyII {
                alpha,
                r1: Poly::new(vec![Q::zero(), e]),
                r2: Poly::one(),
                r3: Poly::new(vec![Q::one(), b]),
                r4: Poly::new(vec![Q::one(), c]),
            };
            if usable(&m) {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_examples() {
        let c = Curve::<Q>::build(&Model::simple_hurwitz()).unwrap();
        assert_eq!(c.q, RatFun::from_ints(&[1, -1], &[1]));
        assert_eq!(c.crit.len(), 1);
        assert_eq!(c.crit[0].p, Q::one());

        let c = Curve::<Q>::build(&Model::monotone_hurwitz()).unwrap();
        assert_eq!(c.q, RatFun::from_ints(&[1, -2], &[1, -1]));
        assert_eq!(c.crit[0].p, Q::new(1, 2));

        let c = Curve::<Q>::build(&Model::dessins()).unwrap();
        assert_eq!(c.q, RatFun::from_ints(&[1, 0, -1], &[1, 0, 1]));
        let mut ps: Vec<Q> = c.crit.iter().map(|c| c.p.clone()).collect();
        ps.sort();
        assert_eq!(ps, vec![Q::from_i64(-1), Q::one()]);

        let c = Curve::<Q>::build(&Model::double_zero()).unwrap();
        assert_eq!(c.crit.len(), 1);
        assert_eq!(c.crit[0].order, 2);
    }

    #[test]
    fn irrational_points_need_numeric_mode() {
        assert!(matches!(Curve::<Q>::build(&Model::orbifold(2)), Err(Error::Unsupported(_))));
        let c = Curve::<crate::scalar::C>::build(&Model::orbifold(2)).unwrap();
        assert_eq!(c.crit.len(), 2);
    }

    #[test]
    fn r_spin_psi_hat() {
        let m = Model::r_spin(3, true);
        let s = m.psi_hat_series(1, 5).unwrap();
        assert_eq!(s[0].coeff(3), Q::one());
        assert_eq!(s[1].coeff(1), Q::new(6, 24));
    }

    #[test]
    fn ooguri_vafa_y_hat() {
        let a = Q::from_i64(2);
        let m = Model::extended_ooguri_vafa(Q::new(1, 3), a.clone());
        let s = m.y_hat_series(1, 4).unwrap();
        // y_k = (A^{-k} - A^k)/k at h^0 for R3 = 1 - A z; here R3 = 1 - z/A so the sign flips
        for k in 1..4 {
            let want = (a.pow(k) - a.pow(-k)) / Q::from_i64(k as i64);
            assert_eq!(s[0].coeff(k), want);
            // h^2 coefficient: -(k^2/24) y_k
            assert_eq!(s[1].coeff(k), want.clone() * Q::new(-(k as i64) * k as i64, 24));
        }
    }

    #[test]
    fn random_instances_are_reproducible() {
        for seed in 0..4 {
            assert_eq!(random::family_i(seed), random::family_i(seed));
            let m = random::family_ii(seed);
            assert_eq!(m, random::family_ii(seed));
            assert!(m.validate().is_ok());
        }
    }

    #[test]
    fn validation_names_invariant() {
        let m = Model::family_i(poly(&[0, 1]), poly(&[0, 1]), poly(&[1]), poly(&[0, 1]), poly(&[1]));
        match m.validate() {
            Err(Error::Validation { invariant, .. }) => assert!(invariant.contains("vanishing at zero")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
