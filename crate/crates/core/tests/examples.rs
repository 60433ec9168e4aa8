#[allow(dead_code)]
mod banded_360 {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/banded_360.rs"
    ));
}

#[test]
fn banded_360() {
    banded_360::run_example().unwrap();
}

#[allow(dead_code)]
mod closed_form_designs {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/closed_form_designs.rs"
    ));
}

#[test]
fn closed_form_designs() {
    closed_form_designs::run_example().unwrap();
}

#[allow(dead_code)]
mod efficiency_tables {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/efficiency_tables.rs"
    ));
}

#[test]
fn efficiency_tables() {
    efficiency_tables::run_example().unwrap();
}

#[allow(dead_code)]
mod equal_weight_rules {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/equal_weight_rules.rs"
    ));
}

#[test]
fn equal_weight_rules() {
    equal_weight_rules::run_example().unwrap();
}

#[allow(dead_code)]
mod equivalence_check {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/equivalence_check.rs"
    ));
}

#[test]
fn equivalence_check() {
    equivalence_check::run_example().unwrap();
}

#[allow(dead_code)]
mod fit_and_covariance {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/fit_and_covariance.rs"
    ));
}

#[test]
fn fit_and_covariance() {
    fit_and_covariance::run_example().unwrap();
}

#[allow(dead_code)]
mod support_bound {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/support_bound.rs"
    ));
}

#[test]
fn support_bound() {
    support_bound::run_example().unwrap();
}
