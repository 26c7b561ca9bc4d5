//! Batch front end: a TOML run configuration in, a JSON or CSV report out.
//!
//! The configuration schema is documented in the README; [`RunConfig`]
//! mirrors it field for field.

use std::any::Any;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::model::{random, Curve, Model};
use crate::oracle;
use crate::scalar::{set_numeric_digits, Scalar, C, DEFAULT_DIGITS, Q};
use crate::series::Poly;
use crate::trengine::{Recursion, TrEngine};
use crate::verify::cross::tr_value;
use crate::verify::quasi::{self, Basis};
use crate::verify::suite::{self, Mode, SuiteConfig};
use crate::verify::{self, CheckReport, Verdict};

/// A coefficient as written in the config: an integer, an `"a/b"` string or
/// a decimal. Decimals force numeric mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Decimal(f64),
    Text(String),
}

impl Coef {
    /// The exact value, and whether it was written as a decimal.
    pub fn value(&self) -> Result<(Q, bool)> {
        match self {
            Coef::Int(v) => Ok((Q::int(*v), false)),
            Coef::Decimal(x) => {
                let q = Q::parse(&format!("{x:e}")).ok_or_else(|| Error::Config(format!("coefficient {x} is not finite")))?;
                Ok((q, true))
            }
            Coef::Text(s) => {
                let q = Q::parse(s).ok_or_else(|| Error::Config(format!("cannot parse coefficient {s:?}")))?;
                Ok((q, s.contains(['.', 'e', 'E'])))
            }
        }
    }
}

impl From<i64> for Coef {
    fn from(v: i64) -> Self {
        Coef::Int(v)
    }
}

fn one() -> Vec<Coef> {
    vec![Coef::Int(1)]
}

fn yes() -> bool {
    true
}

/// The model section; `family` selects the variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    /// `psi_hat = S(h d_y) P1 + log P2 - log P3`, `y_hat = R1 / R2`.
    FamilyI {
        #[serde(default)]
        p1: Vec<Coef>,
        #[serde(default = "one")]
        p2: Vec<Coef>,
        #[serde(default = "one")]
        p3: Vec<Coef>,
        r1: Vec<Coef>,
        #[serde(default = "one")]
        r2: Vec<Coef>,
        #[serde(default = "yes")]
        deformed: bool,
    },
    /// `psi_hat = alpha y`, `y_hat = R1/R2 + S(h z d_z)^{-1} (log R3 - log R4)`.
    #[serde(rename = "family_ii")]
    FamilyII {
        alpha: Coef,
        #[serde(default)]
        r1: Vec<Coef>,
        #[serde(default = "one")]
        r2: Vec<Coef>,
        r3: Vec<Coef>,
        r4: Vec<Coef>,
    },
    /// `h^(2m)` coefficients of `psi_hat` and `y_hat`, each a polynomial.
    Raw { psi: Vec<Vec<Coef>>, y: Vec<Vec<Coef>> },
    SimpleHurwitz,
    MonotoneHurwitz,
    Dessins,
    Orbifold { q: usize },
    RSpin {
        r: usize,
        #[serde(default = "yes")]
        deformed: bool,
    },
    OoguriVafa { alpha: Coef, a: Coef },
    DoubleZero,
    /// A random Family I instance drawn from the run seed.
    RandomI,
    /// A random Family II instance drawn from the run seed.
    #[serde(rename = "random_ii")]
    RandomII,
}

impl ModelSpec {
    /// The model and whether any coefficient was a decimal.
    pub fn build(&self, seed: u64) -> Result<(Model, bool)> {
        let mut dec = false;
        let mut q = |c: &Coef| -> Result<Q> {
            let (v, d) = c.value()?;
            dec |= d;
            Ok(v)
        };
        let mut poly = |v: &[Coef]| -> Result<Poly<Q>> { Ok(Poly::new(v.iter().map(&mut q).collect::<Result<_>>()?)) };
        let m = match self {
            ModelSpec::FamilyI { p1, p2, p3, r1, r2, deformed } => Model::FamilyI {
                p1: poly(p1)?,
                p2: poly(p2)?,
                p3: poly(p3)?,
                r1: poly(r1)?,
                r2: poly(r2)?,
                deformed: *deformed,
            },
            ModelSpec::FamilyII { alpha, r1, r2, r3, r4 } => {
                let (alpha, d) = alpha.value()?;
                let m = Model::FamilyII { alpha, r1: poly(r1)?, r2: poly(r2)?, r3: poly(r3)?, r4: poly(r4)? };
                dec |= d;
                m
            }
            ModelSpec::Raw { psi, y } => Model::Raw {
                psi: psi.iter().map(|p| poly(p)).collect::<Result<_>>()?,
                y: y.iter().map(|p| poly(p)).collect::<Result<_>>()?,
            },
            ModelSpec::SimpleHurwitz => Model::simple_hurwitz(),
            ModelSpec::MonotoneHurwitz => Model::monotone_hurwitz(),
            ModelSpec::Dessins => Model::dessins(),
            ModelSpec::Orbifold { q } => Model::orbifold(*q),
            ModelSpec::RSpin { r, deformed } => Model::r_spin(*r, *deformed),
            ModelSpec::OoguriVafa { alpha, a } => {
                let (alpha, d1) = alpha.value()?;
                let (a, d2) = a.value()?;
                if a.is_zero() {
                    return Err(Error::Config("ooguri_vafa needs a nonzero".into()));
                }
                dec |= d1 || d2;
                Model::extended_ooguri_vafa(alpha, a)
            }
            ModelSpec::DoubleZero => Model::double_zero(),
            ModelSpec::RandomI => random::family_i(seed),
            ModelSpec::RandomII => random::family_ii(seed),
        };
        m.validate()?;
        Ok((m, dec))
    }
}

/// `"exact"`, `"auto"` or `{ numeric = digits }`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    #[default]
    Auto,
    Exact,
    Numeric(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Oracle,
    Closed,
    /// Topological recursion, or Bouchard-Eynard on curves with higher zeros.
    Tr,
}

fn all_engines() -> Vec<Engine> {
    vec![Engine::Oracle, Engine::Closed, Engine::Tr]
}

fn both_bases() -> Vec<Basis> {
    vec![Basis::Xi, Basis::XiTilde]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    #[default]
    Full,
    Quick,
}

impl SuiteName {
    pub fn config(self) -> SuiteConfig {
        match self {
            SuiteName::Full => SuiteConfig::default(),
            SuiteName::Quick => SuiteConfig {
                chi_max: 1,
                r_max: 3,
                cross_kmax: 4,
                oracle_max: 8,
                quasi: vec![(0, 3), (1, 1)],
                ..SuiteConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// `h_{g;k}` from each engine; every engine after the first is checked
    /// against the first.
    Hurwitz {
        g: u32,
        k: Vec<u32>,
        #[serde(default = "all_engines")]
        engines: Vec<Engine>,
    },
    /// The `z`-expansion of `W_{g,n}` from the closed formula.
    Wgn { g: u32, n: usize, orders: Vec<i16> },
    /// Every stable `omega_{g,n}` with `g <= g_max`, `n <= n_max`, in the
    /// pole basis at the critical points.
    Tr { g_max: u32, n_max: u32 },
    Verify {
        #[serde(default)]
        suite: SuiteName,
        /// Replaces the named suite's settings.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        settings: Option<SuiteConfig>,
    },
    /// Fit on `[k_lo..k_hi - 1]^n`, predict the layer `k_hi`; `k_lo` must be 1.
    Quasipoly {
        g: u32,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_range: Option<[u32; 2]>,
        #[serde(default = "both_bases")]
        bases: Vec<Basis>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default)]
    pub output: Format,
    /// Include per-check wall-clock times (breaks byte-identical output).
    #[serde(default)]
    pub timings: bool,
    pub model: ModelSpec,
    #[serde(default)]
    pub targets: Vec<Target>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A rational as `"n/d"`, or a complex number as a pair of decimals.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(String),
    Numeric([String; 2]),
    Text(String),
}

impl Value {
    pub fn of<F: Scalar>(x: &F) -> Value {
        let any = x as &dyn Any;
        if let Some(q) = any.downcast_ref::<Q>() {
            return Value::Exact(format!("{}/{}", q.numer(), q.denom()));
        }
        let c = any.downcast_ref::<C>().cloned().unwrap_or_else(|| x.to_c());
        let digits = (c.prec() as usize).saturating_sub(32) * 10_000 / 33_220 / 2;
        let f = |v: &rug::Float| {
            if v.is_zero() {
                "0".to_string()
            } else {
                v.to_string_radix(10, Some(digits.max(1)))
            }
        };
        Value::Numeric([f(c.re()), f(c.im())])
    }

    fn flat(&self) -> String {
        match self {
            Value::Exact(s) | Value::Text(s) => s.clone(),
            Value::Numeric([re, im]) => format!("{re} {im}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub target: String,
    pub key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Entry>>,
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
    /// `g` the record is about, for the CSV layout.
    #[serde(skip)]
    pub g: Option<u32>,
}

impl Record {
    fn new(target: &str, key: String, engine: &str) -> Record {
        Record { target: target.into(), key, value: None, values: None, engine: engine.into(), verdict: None, millis: None, g: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub model: String,
    pub mode: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub results: Vec<Record>,
}

impl Report {
    /// 1 if any check failed, 3 if any target hit a computational error.
    pub fn exit_code(&self) -> i32 {
        let v = |s: &str| self.results.iter().any(|r| r.verdict.as_deref() == Some(s));
        if v("error") {
            3
        } else if v("fail") {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per value: `target, g, k, value, engine, verdict`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        let err = |e: csv::Error| Error::Computation(format!("csv: {e}"));
        w.write_record(["target", "g", "k", "value", "engine", "verdict"]).map_err(err)?;
        for r in &self.results {
            let g = r.g.map(|g| g.to_string()).unwrap_or_default();
            let verdict = r.verdict.clone().unwrap_or_default();
            let mut rows = vec![];
            if let Some(v) = &r.value {
                rows.push((r.key.clone(), v.flat()));
            }
            for e in r.values.iter().flatten() {
                rows.push((format!("{} {}", r.key, e.key), e.value.flat()));
            }
            if rows.is_empty() {
                rows.push((r.key.clone(), String::new()));
            }
            for (k, v) in rows {
                w.write_record([&r.target, &g, &k, &v, &r.engine, &verdict]).map_err(err)?;
            }
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Computation(e.to_string()))?).map_err(|e| Error::Computation(e.to_string()))
    }

    pub fn render(&self, f: Format) -> Result<String> {
        match f {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn verdict_str(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

fn error_record(target: &str, key: String, e: &Error) -> Record {
    let mut r = Record::new(target, key, "-");
    r.value = Some(Value::Text(e.to_string()));
    r.verdict = Some("error".into());
    r
}

/// Executes every target. Configuration and model errors are returned as
/// `Err`; failures inside a target become records with verdict `"error"`.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let (model, decimal) = cfg.model.build(cfg.seed)?;
    let mode = match cfg.mode {
        ModeSpec::Numeric(d) => Mode::Numeric(d),
        _ if decimal => Mode::Numeric(DEFAULT_DIGITS),
        ModeSpec::Exact => Mode::Exact,
        ModeSpec::Auto => Mode::auto(&model),
    };
    if decimal && cfg.mode == ModeSpec::Exact {
        log::warn!("decimal coefficients force numeric mode");
    }
    let mode_name = match mode {
        Mode::Exact => "exact".to_string(),
        Mode::Numeric(d) => format!("numeric({d})"),
    };
    let meta = Meta { model: model.fingerprint(), mode: mode_name, seed: cfg.seed, version: env!("CARGO_PKG_VERSION").to_string() };
    let cf = ClosedForm::<Q>::new(&model)?;
    let results = match mode {
        Mode::Exact => run_targets::<Q>(cfg, &cf, mode)?,
        Mode::Numeric(d) => {
            set_numeric_digits(d);
            run_targets::<C>(cfg, &cf, mode)?
        }
    };
    Ok(Report { meta, results })
}

fn run_targets<F: Scalar>(cfg: &RunConfig, cf: &ClosedForm<Q>, mode: Mode) -> Result<Vec<Record>> {
    let model = &cf.model;
    // the engine is built on first use: some targets never need the curve
    let mut eng: Option<TrEngine<F>> = None;
    let engine = |eng: &mut Option<TrEngine<F>>| -> Result<()> {
        if eng.is_none() {
            let curve = Curve::<F>::build(model)?;
            let rec = if curve.all_simple() { Recursion::Tr } else { Recursion::Be };
            *eng = Some(TrEngine::new(curve, rec)?);
        }
        Ok(())
    };
    let mut out = vec![];
    for t in &cfg.targets {
        match t {
            Target::Hurwitz { g, k, engines } => {
                let key = format!("g={g};k={}", join(k));
                if k.is_empty() || k.contains(&0) {
                    return Err(Error::Config(format!("hurwitz target {key}: k must be a nonempty list of positive integers")));
                }
                let mut first: Option<C> = None;
                for e in engines {
                    let val: Result<(Value, C, &str)> = match e {
                        Engine::Oracle => oracle::hurwitz_number(model, *g, k).map(|v| (Value::of(&v), v.to_c(), "oracle")),
                        Engine::Closed => {
                            crate::verify::cross::closed_values(cf, *g, std::slice::from_ref(k)).map(|m| (Value::of(&m[k]), m[k].to_c(), "closed"))
                        }
                        Engine::Tr => engine(&mut eng).and_then(|_| {
                            let e = eng.as_mut().expect("built");
                            let name = if e.recursion == Recursion::Tr { "tr" } else { "be" };
                            tr_value(e, *g, k).map(|v| (Value::of(&v), v.to_c(), name))
                        }),
                    };
                    match val {
                        Ok((v, c, name)) => {
                            let mut r = Record::new("hurwitz", key.clone(), name);
                            r.g = Some(*g);
                            r.value = Some(v);
                            if let Some(f) = &first {
                                let ok = if mode == Mode::Exact { &c == f } else { c.rel_dist(f) <= verify::tolerance::<C>() };
                                r.verdict = Some(verdict_str(ok));
                            } else {
                                first = Some(c);
                            }
                            out.push(r);
                        }
                        Err(e) => out.push(error_record("hurwitz", key.clone(), &e)),
                    }
                }
            }
            Target::Wgn { g, n, orders } => {
                let key = format!("g={g};n={n};orders={}", join(orders));
                if orders.len() != *n || *n == 0 {
                    return Err(Error::Config(format!("wgn target {key}: orders needs one entry per variable")));
                }
                match cf.w(*g, orders) {
                    Ok(w) => {
                        let mut terms: Vec<_> = w.terms.iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m[..*n].to_vec(), c.clone())).collect();
                        terms.sort_by(|a, b| a.0.cmp(&b.0));
                        let mut r = Record::new("wgn", key, "closed");
                        r.g = Some(*g);
                        r.values = Some(terms.into_iter().map(|(m, c)| Entry { key: join(&m), value: Value::of(&c) }).collect());
                        out.push(r);
                    }
                    Err(e) => out.push(error_record("wgn", key, &e)),
                }
            }
            Target::Tr { g_max, n_max } => {
                if let Err(e) = engine(&mut eng) {
                    out.push(error_record("tr", format!("g_max={g_max};n_max={n_max}"), &e));
                    continue;
                }
                let e = eng.as_mut().expect("built");
                let name = if e.recursion == Recursion::Tr { "tr" } else { "be" };
                for g in 0..=*g_max {
                    for n in 1..=*n_max {
                        if 2 * g + n <= 2 {
                            continue;
                        }
                        let key = format!("g={g};n={n}");
                        match e.omega(g, n) {
                            Ok(om) => {
                                let mut r = Record::new("tr", key, name);
                                r.g = Some(g);
                                r.values = Some(
                                    om.terms
                                        .iter()
                                        .map(|(k, c)| {
                                            let mut s = String::new();
                                            for (i, (a, d)) in k.iter().enumerate() {
                                                let _ = write!(s, "{}p{a}^{d}", if i > 0 { "," } else { "" });
                                            }
                                            Entry { key: s, value: Value::of(c) }
                                        })
                                        .collect(),
                                );
                                r.verdict = Some(verdict_str(om.asymmetry() <= verify::tolerance::<F>() * om.scale().max(1.0)));
                                out.push(r);
                            }
                            Err(err) => out.push(error_record("tr", key, &err)),
                        }
                    }
                }
            }
            Target::Verify { suite: name, settings } => {
                let sc = settings.clone().unwrap_or_else(|| name.config());
                let reports = suite::run_suite(model, &sc, mode);
                match reports {
                    Ok(mut reps) => {
                        reps.extend(suite::global_checks(sc.controls));
                        out.extend(reps.iter().map(|r| check_record(r, cfg.timings)));
                    }
                    Err(e) => out.push(error_record("verify", format!("{name:?}").to_lowercase(), &e)),
                }
            }
            Target::Quasipoly { g, n, k_range, bases } => {
                let train = match k_range {
                    Some([1, hi]) if *hi >= 2 => Some(hi - 1),
                    Some(r) => return Err(Error::Config(format!("quasipoly k_range {r:?}: must be [1, k_max] with k_max >= 2"))),
                    None => None,
                };
                let curve = match Curve::<F>::build(model) {
                    Ok(c) => c,
                    Err(e) => {
                        out.push(error_record("quasipoly", format!("g={g};n={n}"), &e));
                        continue;
                    }
                };
                for b in bases {
                    let key = format!("g={g};n={n};basis={b}");
                    match quasi::quasipoly_fit(cf, &curve, *b, *g, *n, train) {
                        Ok(f) => {
                            let mut r = Record::new("quasipoly", key, "closed");
                            r.g = Some(*g);
                            r.values = Some(
                                f.terms
                                    .iter()
                                    .map(|t| Entry { key: format!("I={};k^{}", join(&t.index), join(&t.exps)), value: Value::of(&t.coeff) })
                                    .collect(),
                            );
                            r.verdict = Some(verdict_str(f.passed));
                            if !f.passed {
                                r.value = Some(Value::Text(f.witness.clone()));
                            }
                            out.push(r);
                        }
                        Err(Error::Unsupported(w)) | Err(Error::Computation(w)) if w.starts_with("singular") || w.contains("unstable") => {
                            let mut r = Record::new("quasipoly", key, "closed");
                            r.value = Some(Value::Text(w));
                            r.verdict = Some("skipped".into());
                            out.push(r);
                        }
                        Err(e) => out.push(error_record("quasipoly", key, &e)),
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_record(r: &CheckReport, timings: bool) -> Record {
    let s = &r.scope;
    let mut key = r.id.clone();
    for (name, v) in [("g", s.g.map(|x| x as usize)), ("n", s.n.map(|x| x as usize)), ("r", s.r.map(|x| x as usize)), ("a", s.a)] {
        if let Some(v) = v {
            let _ = write!(key, ";{name}={v}");
        }
    }
    let mut rec = Record::new("verify", key, &r.model);
    rec.g = s.g;
    rec.value = Some(Value::Text(r.witness.clone()));
    rec.verdict = Some(match &r.verdict {
        Verdict::Pass => "pass".into(),
        Verdict::Fail => "fail".into(),
        Verdict::Skipped(w) => format!("skipped: {w}"),
    });
    if timings {
        rec.millis = Some(r.millis);
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIMPLE: &str = r#"
[model]
family = "family_i"
p1 = [0, 1]
r1 = [0, 1]

[[targets]]
kind = "hurwitz"
g = 1
k = [2]
"#;

    #[test]
    fn simple_hurwitz_record() {
        let cfg = RunConfig::parse(SIMPLE).unwrap();
        let rep = run(&cfg).unwrap();
        assert_eq!(rep.exit_code(), 0);
        assert!(rep.results.iter().all(|r| r.value == Some(Value::Exact("1/12".into()))));
        assert_eq!(rep.results.len(), 3);
    }

    #[test]
    fn vanishing_p2_is_rejected() {
        let cfg = RunConfig::parse(&SIMPLE.replace("r1 = [0, 1]", "r1 = [0, 1]\np2 = [0, 1]")).unwrap();
        let e = run(&cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("vanishing at zero"), "{e}");
    }

    #[test]
    fn coefficients() {
        assert_eq!(Coef::Text("-3/4".into()).value().unwrap(), (Q::new(-3, 4), false));
        assert_eq!(Coef::Decimal(0.25).value().unwrap(), (Q::new(1, 4), true));
        assert!(Coef::Text("x".into()).value().is_err());
    }

    #[test]
    fn unknown_field_is_a_config_error() {
        let e = RunConfig::parse(&format!("colour = 1\n{SIMPLE}")).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }
}
