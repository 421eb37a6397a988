//! Drive a run from config text, the way the `seedsim` binary does, and
//! show the provenance-annotated echo.
//!
//! cargo run --example config_run

use std::path::Path;

use seedsim::config::{parse_config, Provenance};
use seedsim::experiment::run_experiment;

const CONFIG: &str = r#"
model = "ode"
t_end = 216.0

[params]
chi_c = 2.5e-4

[renewal]
enabled = true
mode = "add-initial"
value = 5e-4
"#;

fn main() -> seedsim::Result<()> {
    let out = std::env::temp_dir().join("seedsim-config-run");
    let mut cfg = parse_config(CONFIG, Path::new("<inline>"), Path::new("."))?;
    cfg.output_dir = out;
    println!("{}", cfg.echo());
    assert_eq!(cfg.provenance("params.chi_c"), Some(Provenance::User));

    let summary = run_experiment(&cfg)?;
    print!("{summary}");

    // A rejected config names the offending key.
    let err = parse_config(
        "model = \"ode\"\n[params]\ns_min = 5.0\n",
        Path::new("<bad>"),
        Path::new("."),
    )
    .unwrap_err();
    println!("\nrejected: {err}");
    Ok(())
}
