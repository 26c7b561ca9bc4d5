use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;

use hurwitz_tr::cli::{Coef, Engine, Format, ModeSpec, ModelSpec, RunConfig, SuiteName, Target};
use hurwitz_tr::Q;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-tr"))
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hurwitz-tr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

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
fn simple_hurwitz_genus_one() {
    let out = bin().arg(write("simple.toml", SIMPLE)).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["mode"], "exact");
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["value"], "1/12");
    }
}

#[test]
fn output_is_deterministic() {
    let p = write("det.toml", &format!("{SIMPLE}\n[[targets]]\nkind = \"tr\"\ng_max = 1\nn_max = 3\n"));
    let a = bin().arg(&p).output().unwrap().stdout;
    let b = bin().arg(&p).output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn csv_rows() {
    let out = bin().arg(write("csv.toml", SIMPLE)).args(["--format", "csv"]).output().unwrap();
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|x| &x[3] == "1/12" && &x[1] == "1"));
}

#[test]
fn exit_codes() {
    // model validation names the invariant
    let out = bin().arg(write("p2.toml", &SIMPLE.replace("r1 = [0, 1]", "r1 = [0, 1]\np2 = [0, 1]"))).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vanishing at zero"));
    // parse errors carry a position
    let out = bin().arg(write("bad.toml", "[model]\nfamily = \n")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // the undeformed 3-spin numbers are not the ones its curve produces
    let cfg = "[model]\nfamily = \"r_spin\"\nr = 3\ndeformed = false\n\n[[targets]]\nkind = \"hurwitz\"\ng = 1\nk = [2]\n";
    let out = bin().arg(write("undeformed.toml", cfg)).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    // beyond the oracle's partition bound
    let out = bin().arg(write("big.toml", &SIMPLE.replace("k = [2]", "k = [13]\nengines = [\"oracle\"]"))).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn printed_config_parses_back() {
    let out = bin().arg(write("print.toml", SIMPLE)).arg("--print-config").output().unwrap();
    let a = RunConfig::parse(SIMPLE).unwrap();
    let b = RunConfig::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(a, b);
}

fn coef() -> impl Strategy<Value = Coef> {
    prop_oneof![
        (-9i64..=9).prop_map(Coef::Int),
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Coef::Text(Q::new(n, d).to_string())),
        (-40i64..=40).prop_map(|n| Coef::Decimal(n as f64 / 8.0)),
    ]
}

fn coefs() -> impl Strategy<Value = Vec<Coef>> {
    prop::collection::vec(coef(), 1..4)
}

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        (coefs(), coefs(), coefs(), coefs(), coefs(), any::<bool>())
            .prop_map(|(p1, p2, p3, r1, r2, deformed)| ModelSpec::FamilyI { p1, p2, p3, r1, r2, deformed }),
        (coef(), coefs(), coefs(), coefs(), coefs()).prop_map(|(alpha, r1, r2, r3, r4)| ModelSpec::FamilyII { alpha, r1, r2, r3, r4 }),
        Just(ModelSpec::SimpleHurwitz),
        (1usize..5).prop_map(|q| ModelSpec::Orbifold { q }),
        (2usize..5, any::<bool>()).prop_map(|(r, deformed)| ModelSpec::RSpin { r, deformed }),
        (coef(), coef()).prop_map(|(alpha, a)| ModelSpec::OoguriVafa { alpha, a }),
        Just(ModelSpec::RandomII),
    ]
}

fn target() -> impl Strategy<Value = Target> {
    prop_oneof![
        (0u32..3, prop::collection::vec(1u32..6, 1..4), prop::sample::subsequence(vec![Engine::Oracle, Engine::Closed, Engine::Tr], 1..=3))
            .prop_map(|(g, k, engines)| Target::Hurwitz { g, k, engines }),
        (0u32..3, prop::collection::vec(0i16..6, 1..4)).prop_map(|(g, orders)| Target::Wgn { g, n: orders.len(), orders }),
        (0u32..3, 1u32..4).prop_map(|(g_max, n_max)| Target::Tr { g_max, n_max }),
        prop_oneof![Just(SuiteName::Full), Just(SuiteName::Quick)].prop_map(|suite| Target::Verify { suite, settings: None }),
        (0u32..2, 1usize..3, prop::option::of(2u32..8))
            .prop_map(|(g, n, hi)| Target::Quasipoly { g, n, k_range: hi.map(|h| [1, h]), bases: vec![hurwitz_tr::verify::quasi::Basis::Xi] }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(
        seed in any::<u32>(),
        mode in prop_oneof![Just(ModeSpec::Auto), Just(ModeSpec::Exact), (10u32..100).prop_map(ModeSpec::Numeric)],
        csv in any::<bool>(),
        model in model(),
        targets in prop::collection::vec(target(), 0..4),
    ) {
        let cfg = RunConfig {
            seed: seed as u64,
            mode,
            output: if csv { Format::Csv } else { Format::Json },
            timings: false,
            model,
            targets,
        };
        let text = cfg.to_toml().unwrap();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_toml().unwrap(), text);
    }
}
