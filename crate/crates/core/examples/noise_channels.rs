//! The individual channels: depolarizing, thermal relaxation, readout.

use grover_lab::noise::{apply_readout, depolarizing_channel, readout_confusion, thermal_relaxation_channel};
use grover_lab::sim::{Circuit, DensityMatrix, Distribution, StateVector};

fn main() -> grover_lab::Result<()> {
    let one = DensityMatrix::from_pure(&StateVector::zero(1)?.apply_circuit(Circuit::new(1).x(0)?)?)?;

    let dep = depolarizing_channel(0.2, 1)?;
    println!("depolarizing p=0.2: {} Kraus operators, completeness error {:.1e}", dep.operators().len(), dep.completeness_error());
    println!("  |1><1| -> P(1) = {:.3}", one.apply_channel(&dep, &[0])?.get(1, 1).re);

    // T1 = 100 us, T2 = 80 us
    for d in [0.0, 1e3, 1e5, 1e6] {
        let ch = thermal_relaxation_channel(100.0, 80.0, d)?;
        println!("  thermal {:>9} ns: P(1) = {:.4}", d, one.apply_channel(&ch, &[0])?.get(1, 1).re);
    }

    let m = readout_confusion(0.0090, 0.0128)?;
    println!("confusion [read][prepared] = {m:?}");
    let ideal = Distribution::new(2, vec![0.0, 0.0, 0.0, 1.0])?;
    println!("|11> read as {:?}", apply_readout(&ideal, &[m, m])?.to_label_map());
    Ok(())
}
