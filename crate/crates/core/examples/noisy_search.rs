//! Grover search under the default calibrated noise model, plus a sweep of
//! the depolarizing strength.

use grover_lab::grover::{grover_circuit, GroverPlan, OracleSpec};
use grover_lab::metrics::{asp_of_distribution, metrics_report};
use grover_lab::noise::{noisy_distribution, run_noisy, NoiseModel};

fn main() -> grover_lab::Result<()> {
    let model = NoiseModel::default_calibrated();
    println!("{}", model.to_json()?);

    let spec = OracleSpec::phase(3, ["010"])?;
    let circuit = grover_circuit(&GroverPlan::new(spec.clone()))?;
    let run = run_noisy(&circuit, &model, 8192, 1)?;
    println!("purity of the final state {:.4}", run.density.purity());
    for (label, p) in run.post_readout.to_label_map() {
        println!("  {label}  {p:.4}  ({} counts)", run.counts.count(&label));
    }
    let report = metrics_report(&run.counts, &spec, "noisy:default")?;
    println!("ASP {:.4}, SSO {:.4}", report.asp, report.sso);

    println!("\ndepolarizing scale -> exact ASP");
    for factor in [0.0, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let dist = noisy_distribution(&circuit, &model.scaled(factor))?;
        println!("  x{factor:<5} {:.4}", asp_of_distribution(&dist, spec.marked())?);
    }
    Ok(())
}
