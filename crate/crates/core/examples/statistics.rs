//! Summary rows and one-sample tests on the published ASP and fidelity
//! columns.

use grover_lab::stats::{summarize, t_test_mean, variance_test};

fn main() -> grover_lab::Result<()> {
    let asp = [80.0, 80.0, 60.0, 70.0, 60.0, 50.0, 80.0, 70.0, 30.0];
    let fidelity = [0.4923291, 0.5388754, 0.5721854, 0.4923291, 0.6894187];

    for (name, values, mu, sigma) in [("two-marked ASP (%)", &asp[..], 64.44, 16.67), ("fidelity", &fidelity[..], 0.5432, 0.099)] {
        let s = summarize(values)?;
        let t = t_test_mean(values, mu, 0.05)?;
        let v = variance_test(values, sigma, 0.05)?;
        println!("{name}");
        println!("  mean {:.4}  stdev {:.4}  se {:.4}  median {:.4}", s.mean, s.stdev, s.se_mean, s.median);
        println!("  t = {:.4}, p = {:.4}, 95% CI ({:.4}, {:.4})", t.statistic, t.p_value, t.ci_lower, t.ci_upper);
        println!(
            "  chi2 = {:.4}, p = {:.4}, stdev CI ({:.4}, {:.4}), variance CI ({:.4}, {:.4})",
            v.test.statistic, v.test.p_value, v.stdev_ci_lower, v.stdev_ci_upper, v.test.ci_lower, v.test.ci_upper
        );
    }
    Ok(())
}
