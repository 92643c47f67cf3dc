//! Tomography of the Grover output for the five reference cases, exact,
//! finite-shot and under noise. Prints the reconstructed density matrix of
//! the first case.

use grover_lab::grover::{GroverPlan, OracleSpec, TOMOGRAPHY_CASES};
use grover_lab::noise::NoiseModel;
use grover_lab::tomography::{run_qst_for_plan, QstBackend, Shots, SHOT_PRESETS};

fn main() -> grover_lab::Result<()> {
    let noisy = QstBackend::Noisy(NoiseModel::default_calibrated());
    println!("{:<10}{:>10}{:>10}{:>10}", "marked", "exact", "ideal", "noisy");
    for (i, case) in TOMOGRAPHY_CASES.iter().enumerate() {
        let plan = GroverPlan::new(OracleSpec::phase(3, *case)?);
        let exact = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::Analytic, 0)?;
        let ideal = run_qst_for_plan(&plan, &QstBackend::Ideal, Shots::PerSetting(SHOT_PRESETS[2]), 1)?;
        let mixed = run_qst_for_plan(&plan, &noisy, Shots::PerSetting(SHOT_PRESETS[2]), 1)?;
        println!("{:<10}{:>10.4}{:>10.4}{:>10.4}", case.join(","), exact.fidelity, ideal.fidelity, mixed.fidelity);
        if i == 0 {
            println!("Re(rho), noisy:");
            let m = mixed.physical.to_matrix();
            for r in 0..8 {
                println!("  {}", (0..8).map(|c| format!("{:7.3}", m[(r, c)].re)).collect::<String>());
            }
        }
    }
    Ok(())
}
