// Fractional vertex cover of small graphs with the centralized solver,
// checked against the exact optimum.

use std::error::Error;

use congest_cover::{engine, instances, verify};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let graphs: [(&str, Vec<(usize, usize)>); 3] = [
        ("triangle", vec![(0, 1), (1, 2), (0, 2)]),
        ("path", vec![(0, 1), (1, 2), (2, 3)]),
        ("star", vec![(0, 1), (0, 2), (0, 3), (0, 4)]),
    ];
    for (name, edges) in graphs {
        let inst = instances::gen_vertex_cover_lp(&edges)?;
        let opt = verify::exact_opt(&inst)?;
        for eps in [0.5, 0.1] {
            let out = engine::run(&inst, eps)?;
            let cert = verify::certify(&inst, &out.solution, eps)?;
            println!(
                "{name:<8} eps {eps:<4} opt {opt:.4}  primal {:.4}  dual {:.4}  phases {:>4}  valid {}",
                out.solution.primal_objective,
                out.solution.dual_objective,
                out.trace.phases(),
                cert.valid,
            );
            if !cert.valid || out.solution.primal_objective > (1.0 + eps) * opt + 1e-9 {
                return Err(format!("{name}: bad solution at eps {eps}").into());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
