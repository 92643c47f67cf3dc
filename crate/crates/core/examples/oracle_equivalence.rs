//! Phase oracle (multi-controlled Z) against the bit-flip oracle with an
//! ancilla in |->. The search-register distributions agree.

use grover_lab::grover::{grover_circuit, GroverPlan, OracleSpec, MARKED_PAIRS, SINGLE_MARKED};
use grover_lab::noise::search_distribution;

fn main() -> grover_lab::Result<()> {
    let boolean = OracleSpec::boolean(3, ["101"])?;
    println!("bit-flip oracle circuit (ancilla is q3):\n{}", grover_circuit(&GroverPlan::new(boolean))?);

    let mut sets: Vec<Vec<&str>> = SINGLE_MARKED.iter().map(|m| vec![*m]).collect();
    sets.extend(MARKED_PAIRS.iter().map(|p| p.to_vec()));
    for marked in sets {
        let phase = OracleSpec::phase(3, &marked)?;
        let boolean = OracleSpec::boolean(3, &marked)?;
        let a = search_distribution(&GroverPlan::new(phase), None)?;
        let b = search_distribution(&GroverPlan::new(boolean), None)?;
        let diff = a.probs().iter().zip(b.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{:<9} max |p_phase - p_boolean| = {diff:.1e}", marked.join(","));
    }
    Ok(())
}
