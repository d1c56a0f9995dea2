// How executed rounds grow as eps shrinks and as the column width grows.

use std::error::Error;

use congest_cover::congest::run_distributed;
use congest_cover::instances::{gen_random_rs, gen_vertex_cover_lp};

fn circulant(n: usize, degree: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (1..=degree / 2).map(move |k| (i, (i + k) % n))).collect()
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = gen_random_rs(60, 60, 3, 4.0, 1)?;
    println!("eps sweep, gamma_p {} gamma_d {}", inst.stats().gamma_p, inst.stats().gamma_d);
    let mut previous: Option<u64> = None;
    for eps in [1.0, 0.5, 0.25] {
        let s = run_distributed(&inst, eps)?.stats;
        let growth = previous.map_or(String::new(), |p| format!("x{:.2}", s.rounds as f64 / p as f64));
        println!("  eps {eps:<5} c {:<3} rounds {:>6} of {:>6}  {growth}", s.c_const, s.rounds, s.round_bound);
        previous = Some(s.rounds);
    }

    println!("width sweep (vertex cover of circulant graphs), eps 0.5");
    let mut previous: Option<u64> = None;
    for degree in [4, 8, 16, 32] {
        let inst = gen_vertex_cover_lp(&circulant(2 * degree + 2, degree))?;
        let s = run_distributed(&inst, 0.5)?.stats;
        let step = previous.map_or(String::new(), |p| format!("+{}", s.rounds as i64 - p as i64));
        println!("  gamma_p {:<4} rounds {:>5} of {:>5}  {step}", s.gamma_p, s.rounds, s.round_bound);
        previous = Some(s.rounds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
