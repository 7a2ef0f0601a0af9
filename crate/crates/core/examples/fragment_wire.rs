//! Quantize a generator to fixed point, check the error bounds and move it
//! through the QGF1 byte format.

use qph::codec::{encoded_len, precision_bits, Fragment, Generator};
use qph::random;

fn main() -> qph::Result<()> {
    let mut rng = random::rng(2);
    let g = Generator::random(&mut rng, 2);
    for k in [3, 6, 10] {
        let eps = (-(k as f64)).exp2();
        let f = Fragment::quantize(&g, eps)?;
        let bytes = f.encode();
        let back = Fragment::decode(&bytes)?;
        assert_eq!(back, f);
        println!(
            "eps 2^-{k}: t = {}, entry error {:.4} (<= {:.4}), node error {:.4} (<= {:.4}), {} bytes (expected {})",
            precision_bits(eps)?,
            f.max_entry_error(&g)?,
            2.0 * eps,
            f.max_node_error(&g)?,
            4.0 * eps,
            bytes.len(),
            encoded_len(g.n(), f.precision_bits()),
        );
    }
    let bytes = Fragment::quantize(&g, 0.25)?.encode();
    println!("header {:02x?}", &bytes[..8]);
    println!("truncated input: {}", Fragment::decode(&bytes[..bytes.len() - 1]).unwrap_err());
    Ok(())
}
