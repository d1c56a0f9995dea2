// Instance text format: generate, serialize, parse back; plus the edge-list
// and set-system inputs.

use std::error::Error;

use congest_cover::instances::{
    gen_random_general, gen_random_rs, gen_set_cover, gen_vertex_cover_lp, parse_edge_list, parse_instance,
    parse_set_system, serialize_instance, Instance,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let inst = Instance::Normalized(gen_random_rs(4, 3, 2, 2.5, 8)?);
    let text = serialize_instance(&inst);
    print!("{text}");
    if parse_instance(&text)? != inst {
        return Err("normalized round trip changed the instance".into());
    }

    let general = Instance::General(gen_random_general(3, 3, 2, 8)?);
    let text = serialize_instance(&general);
    print!("{text}");
    if parse_instance(&text)? != general {
        return Err("general round trip changed the instance".into());
    }

    let edges = parse_edge_list("# a 4-cycle\n0 1\n1 2\n2 3\n3 0\n")?;
    let cycle = gen_vertex_cover_lp(&edges)?;
    println!("4-cycle: {} rows, {} columns", cycle.n_rows(), cycle.n_cols());

    let (count, sets) = parse_set_system("5\n0 1 2\n2 3\n3 4\n0 4\n")?;
    let cover = gen_set_cover(count, &sets)?;
    println!("set system: {} elements, {} sets, gamma_p {}", cover.n_rows(), cover.n_cols(), cover.stats().gamma_p);

    match parse_instance("fcp normalized 1 1\n0 0 -2\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("negative entry accepted".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
