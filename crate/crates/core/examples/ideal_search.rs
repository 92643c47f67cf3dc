//! One Grover iteration on three qubits, exact and sampled.
//!
//! ```text
//! cargo run --example ideal_search
//! ```

use grover_lab::grover::{classical_baseline, grover_circuit, theoretical_success, GroverPlan, OracleSpec};
use grover_lab::metrics::{metrics_report, metrics_report_analytic};
use grover_lab::sim::{sample_counts, StateVector};

fn main() -> grover_lab::Result<()> {
    for marked in [&["010"][..], &["000", "111"]] {
        let spec = OracleSpec::phase(3, marked)?;
        let circuit = grover_circuit(&GroverPlan::new(spec.clone()))?;
        println!("marked {spec}\n{circuit}");

        let dist = StateVector::zero(3)?.apply_circuit(&circuit)?.probabilities();
        for (label, p) in dist.to_label_map() {
            println!("  {label}  {p:.5}");
        }
        let exact = metrics_report_analytic(&dist, &spec, "ideal")?;
        let counts = sample_counts(&dist, 100_000, 7)?;
        let sampled = metrics_report(&counts, &spec, "ideal")?;
        println!(
            "  ASP exact {:.5}, sampled {:.5}; closed form {:.5}; classical {:.3}\n",
            exact.asp,
            sampled.asp,
            theoretical_success(spec.marked_count(), 8)?,
            classical_baseline(spec.marked_count(), 8)?,
        );
    }
    Ok(())
}
