// Phase-by-phase run of the CONGEST simulation on a random instance, with
// the traffic it generates and a bit-level comparison to the centralized
// solver.

use std::error::Error;

use congest_cover::congest::{build_network, ROUNDS_PER_PHASE};
use congest_cover::engine::{self, setup_params};
use congest_cover::instances::gen_random_rs;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = gen_random_rs(40, 25, 3, 3.0, 11)?;
    let eps = 0.5;
    let params = setup_params(eps, &inst)?;
    let mut net = build_network(&inst, params);
    println!(
        "{} set nodes, {} element nodes, {} edges, {ROUNDS_PER_PHASE} rounds per phase",
        net.n_left(),
        net.n_right(),
        net.edge_count()
    );

    while !net.all_dead() {
        let rec = net.run_phase_protocol()?;
        if rec.phase <= 5 || rec.phase % 25 == 0 {
            println!(
                "phase {:>4}: {:>2} selected, {:>3} messages, {:>2} elements finished",
                rec.phase,
                rec.selected.len(),
                rec.messages,
                rec.newly_dead.len()
            );
        }
    }
    let stats = net.round_stats();
    println!(
        "{} phases, {} rounds (bound {}), {} messages, widest message {} bits of {}",
        stats.phases, stats.rounds, stats.round_bound, stats.messages, stats.max_message_bits, stats.bit_budget
    );

    let distributed = net.into_output();
    let central = engine::run(&inst, eps)?;
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(u, v)| u.to_bits() == v.to_bits());
    let identical = same(&central.solution.x, &distributed.solution.x) && same(&central.solution.y, &distributed.solution.y);
    println!("bit-identical to the centralized run: {identical}");
    if !identical || stats.rounds > stats.round_bound {
        return Err("simulation diverged from the centralized solver".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
