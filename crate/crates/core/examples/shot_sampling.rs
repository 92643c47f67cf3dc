//! Seeded sampling: the same seed and stream give the same histogram,
//! different streams are independent.

use grover_lab::sim::{sample_counts_stream, Distribution};

fn main() -> grover_lab::Result<()> {
    let dist = Distribution::new(2, vec![0.1, 0.2, 0.3, 0.4])?;
    let a = sample_counts_stream(&dist, 10_000, 42, 0)?;
    let b = sample_counts_stream(&dist, 10_000, 42, 0)?;
    let c = sample_counts_stream(&dist, 10_000, 42, 1)?;
    println!("stream 0: {:?}", a.counts);
    println!("stream 0: {:?} (repeat, identical: {})", b.counts, a == b);
    println!("stream 1: {:?}", c.counts);
    Ok(())
}
