//! Reconstruct states from fragments quantized at eps * 2^(-n-4) and compare
//! the trace distance with eps.

use qph::codec::{reconstruction_precision, Fragment, Generator};
use qph::random;

fn main() -> qph::Result<()> {
    let mut rng = random::rng(3);
    println!("{:>2} {:>8} {:>12} {:>12}", "n", "eps", "worst dist", "mean dist");
    for n in 1..=3 {
        for eps in [0.25, 0.0625, 0.015625] {
            let ds: Vec<f64> = (0..50)
                .map(|_| {
                    let phi = random::haar_state(&mut rng, n + 1);
                    let f = Fragment::quantize(&Generator::decompose(&phi)?, reconstruction_precision(eps, n))?;
                    phi.projector().trace_distance(&f.reconstruct()?)
                })
                .collect::<qph::Result<_>>()?;
            let worst = ds.iter().copied().fold(0.0, f64::max);
            println!("{n:>2} {eps:>8} {worst:>12.3e} {:>12.3e}", ds.iter().sum::<f64>() / ds.len() as f64);
        }
    }
    Ok(())
}
