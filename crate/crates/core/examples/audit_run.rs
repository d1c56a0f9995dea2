// Replays a trace through the invariant audit, then tampers with it to show
// what a failing check looks like.

use std::error::Error;

use congest_cover::engine;
use congest_cover::instances::gen_random_rs;
use congest_cover::verify::audit_trace;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = gen_random_rs(30, 20, 4, 4.0, 3)?;
    let out = engine::run(&inst, 0.25)?;
    let report = audit_trace(&out.trace, &out.params, &inst);
    for check in &report.checks {
        println!("{:<28} {}  {}", check.name, if check.passed { "ok  " } else { "FAIL" }, check.detail);
    }
    if !report.passed {
        return Err("clean run failed its audit".into());
    }

    let mut tampered = out.trace.clone();
    tampered.final_state.y[0] *= 2.0;
    let broken = audit_trace(&tampered, &out.params, &inst);
    let names: Vec<&str> = broken.failures().map(|c| c.name).collect();
    println!("after doubling y[0]: failing checks {names:?}");
    if broken.passed {
        return Err("tampering went unnoticed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
