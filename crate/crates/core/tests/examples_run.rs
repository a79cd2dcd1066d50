//! Every example runs to completion.

#[path = "../examples/config_sweep.rs"]
mod config_sweep;
#[path = "../examples/dalembert_oracle.rs"]
mod dalembert_oracle;
#[path = "../examples/dirichlet_decay.rs"]
mod dirichlet_decay;
#[path = "../examples/dynamic_boundary.rs"]
mod dynamic_boundary;
#[path = "../examples/energy_identity.rs"]
mod energy_identity;
#[path = "../examples/lemma_suite.rs"]
mod lemma_suite;
#[path = "../examples/neumann_decay.rs"]
mod neumann_decay;
#[path = "../examples/perturbed_damping.rs"]
mod perturbed_damping;
#[path = "../examples/trajectory_estimates.rs"]
mod trajectory_estimates;
#[path = "../examples/wave_reconstruction.rs"]
mod wave_reconstruction;

#[test]
fn config_sweep_runs() {
    config_sweep::main().unwrap();
}

#[test]
fn dalembert_oracle_runs() {
    dalembert_oracle::main().unwrap();
}

#[test]
fn dirichlet_decay_runs() {
    dirichlet_decay::main().unwrap();
}

#[test]
fn dynamic_boundary_runs() {
    dynamic_boundary::main().unwrap();
}

#[test]
fn energy_identity_runs() {
    energy_identity::main().unwrap();
}

#[test]
fn lemma_suite_runs() {
    lemma_suite::main().unwrap();
}

#[test]
fn neumann_decay_runs() {
    neumann_decay::main().unwrap();
}

#[test]
fn perturbed_damping_runs() {
    perturbed_damping::main().unwrap();
}

#[test]
fn trajectory_estimates_runs() {
    trajectory_estimates::main().unwrap();
}

#[test]
fn wave_reconstruction_runs() {
    wave_reconstruction::main().unwrap();
}
