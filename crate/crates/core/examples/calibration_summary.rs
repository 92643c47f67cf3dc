//! Summaries of the bundled calibration samples and the noise model each
//! one yields.

use std::path::PathBuf;

use grover_lab::calibration::load_summary;
use grover_lab::noise::{from_calibration, Durations};

fn main() -> grover_lab::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    for device in ["ibm_sherbrook", "ibm_osaka", "ibm_kyoto"] {
        let summary = load_summary(dir.join(format!("{device}.csv")))?;
        println!("{device}: {} qubits", summary.qubits);
        println!("  {:<14}{:>11}{:>11}{:>11}{:>11}{:>11}", "field", "min", "25%", "median", "75%", "max");
        for (name, f) in summary.rows() {
            println!("  {name:<14}{:>11.5}{:>11.5}{:>11.5}{:>11.5}{:>11.5}", f.min, f.q25, f.median, f.q75, f.max);
        }
        let model = from_calibration(&summary, &Durations::default())?;
        println!(
            "  model: p1 {:.3e}, p2 {:.3e}, T1 {:?} us, T2 {:?} us\n",
            model.depolarizing_1q, model.depolarizing_2q, model.default_qubit.t1_us, model.default_qubit.t2_us
        );
    }
    Ok(())
}
