#[allow(dead_code)]
mod bound_calculator {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/bound_calculator.rs"
    ));
}

#[allow(dead_code)]
mod cube_spectrum {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cube_spectrum.rs"
    ));
}

#[allow(dead_code)]
mod wmax_sweep {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/wmax_sweep.rs"
    ));
}

#[allow(dead_code)]
mod two_cubes {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/two_cubes.rs"
    ));
}

#[allow(dead_code)]
mod opposite_cubes {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/opposite_cubes.rs"
    ));
}

#[allow(dead_code)]
mod sandwich {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sandwich.rs"));
}

#[allow(dead_code)]
mod embedded_cubes {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/embedded_cubes.rs"
    ));
}

#[allow(dead_code)]
mod tmatrix {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tmatrix.rs"));
}

#[allow(dead_code)]
mod born_iteration {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/born_iteration.rs"
    ));
}

#[allow(dead_code)]
mod data_function {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data_function.rs"
    ));
}

#[allow(dead_code)]
mod scenario_file {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/scenario_file.rs"
    ));
}

#[test]
fn bound_calculator_example_runs() {
    bound_calculator::run_example().expect("bound_calculator example should run");
}

#[test]
fn cube_spectrum_example_runs() {
    cube_spectrum::run_example().expect("cube_spectrum example should run");
}

#[test]
fn wmax_sweep_example_runs() {
    wmax_sweep::run_example().expect("wmax_sweep example should run");
}

#[test]
fn two_cubes_example_runs() {
    two_cubes::run_example().expect("two_cubes example should run");
}

#[test]
fn opposite_cubes_example_runs() {
    opposite_cubes::run_example().expect("opposite_cubes example should run");
}

#[test]
fn sandwich_example_runs() {
    sandwich::run_example().expect("sandwich example should run");
}

#[test]
fn embedded_cubes_example_runs() {
    embedded_cubes::run_example().expect("embedded_cubes example should run");
}

#[test]
fn tmatrix_example_runs() {
    tmatrix::run_example().expect("tmatrix example should run");
}

#[test]
fn born_iteration_example_runs() {
    born_iteration::run_example().expect("born_iteration example should run");
}

#[test]
fn data_function_example_runs() {
    data_function::run_example().expect("data_function example should run");
}

#[test]
fn scenario_file_example_runs() {
    scenario_file::run_example().expect("scenario_file example should run");
}
