// A general covering LP (arbitrary `b`, `c`, small entries) reduced to normal
// form, solved, and mapped back.

use std::error::Error;

use congest_cover::instances::{GeneralInstance, SparseNonNegMatrix};
use congest_cover::normalize::{denormalize, normalize, PrimalValue};
use congest_cover::{engine, verify};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Row 2 has b = 0 and column 3 is free, so both drop out of the reduction.
    let matrix = SparseNonNegMatrix::from_entries(
        4,
        4,
        vec![
            (0, 0, 0.5),
            (0, 1, 2.0),
            (1, 1, 0.25),
            (1, 2, 4.0),
            (2, 0, 1.0),
            (3, 2, 3.0),
            (3, 3, 1.0),
        ],
    )?;
    let general = GeneralInstance::new(matrix, vec![2.0, 1.0, 0.0, 5.0], vec![1.0, 3.0, 0.5, 0.0])?;

    let (normalized, map) = normalize(&general)?;
    print!("{}", map.to_text());
    println!("normalized: {} rows x {} cols", normalized.n_rows(), normalized.n_cols());

    let eps = 0.25;
    let out = engine::run(&normalized, eps)?;
    let original = denormalize(&out.solution, &map)?;
    for (j, x) in original.x.iter().enumerate() {
        match x {
            PrimalValue::Finite(v) => println!("x[{j}] = {v:.6}"),
            PrimalValue::Saturated => println!("x[{j}] = +inf (zero cost)"),
        }
    }
    let check = verify::check_general(&general, &original, verify::DEFAULT_TOLERANCE)?;
    let ratio = original.primal_objective / original.dual_objective;
    println!(
        "c.x = {:.6}  b.y = {:.6}  ratio {ratio:.12}  primal ok {}  dual ok {}",
        original.primal_objective, original.dual_objective, check.primal.feasible, check.dual.feasible
    );
    if !(check.primal.feasible && check.dual.feasible) || (ratio - (1.0 + eps)).abs() > 1e-9 {
        return Err("round trip lost feasibility or the ratio".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
