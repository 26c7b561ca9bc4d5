//! The command-line pipeline as a library call: parse a TOML run
//! configuration, execute it and render JSON.
//!
//!     cargo run --release --example run_config

use hurwitz_tr::cli::{run, RunConfig};

const CONFIG: &str = r#"
seed = 3

[model]
family = "family_i"
p2 = [1, "1/2"]
r1 = [0, 1, 1]

[[targets]]
kind = "hurwitz"
g = 0
k = [1, 1, 1]

[[targets]]
kind = "quasipoly"
g = 0
n = 3
bases = ["xi"]
"#;

fn main() -> hurwitz_tr::Result<()> {
    let cfg = RunConfig::parse(CONFIG)?;
    let report = run(&cfg)?;
    print!("{}", report.to_json());
    println!("exit status would be {}", report.exit_code());
    Ok(())
}
