//! Drive the experiment runner from code: parse a config, execute a kind
//! and print the tables and the assertion summary.

use multcorr::expcli::{execute, ExperimentConfig, Kind};

const CONFIG: &str = r#"
[multfunc]
functions = ["two_squares", "delta_omega:0.5"]

[charsum]
tuples = [[2, 4, 1, 5000], [3, 2, 1, 5000]]
random = 4
y_max = 5000
"#;

fn main() -> multcorr::Result<()> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    let rep = execute(Kind::CharIdentity, &cfg)?;
    for t in &rep.tables {
        print!("{}", t.to_csv("example run"));
    }
    print!("\n{}", rep.summary());
    Ok(())
}
