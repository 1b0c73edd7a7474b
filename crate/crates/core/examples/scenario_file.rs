// Running a scenario document from code, the way the command-line tool
// does, and reading back the spectrum CSV.

use diffuse_born::scenario::{parse_config, run_scenario};

pub fn run_example() -> diffuse_born::Result<()> {
    let config = parse_config(
        r#"{ "scenario": "cube_spectrum", "H_over_lambda": 0.25, "h_over_lambda": 0.05, "kappa": 1 }"#,
    )?;
    let out = std::env::temp_dir().join(format!("diffuse-born-example-{}", std::process::id()));
    let summary = run_scenario(&config, &out, "cube")?;
    println!(
        "N = {:?}, w_max = {:?}, config hash {}",
        summary.n,
        summary.w_max,
        &summary.config_hash[..12]
    );
    let csv = std::fs::read_to_string(out.join("cube.csv"))?;
    for line in csv.lines().take(4) {
        println!("  {line}");
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> diffuse_born::Result<()> {
    run_example()
}
