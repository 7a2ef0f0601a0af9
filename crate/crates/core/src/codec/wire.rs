//! Bit-exact fragment serialization.
//!
//! Layout: `"QGF1"`, then `n` and `t` as big-endian `u16`, then every node in
//! length-then-lexicographic order of its label. A node is four entries
//! (row-major), each a real then an imaginary component; a component is one
//! sign bit followed by a `t+1`-bit magnitude (one integer bit, `t`
//! fraction bits), packed MSB-first. A node is `8·(t+2)` bits, i.e. exactly
//! `t+2` bytes, so the payload never needs padding.

use super::fragment::{Fragment, MAX_PRECISION_BITS};
use super::generator::node_count;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QGF1";
pub const HEADER_LEN: usize = 8;

/// Largest depth accepted when decoding; keeps node counts addressable.
pub const MAX_DEPTH: usize = 30;

/// Encoded size in bytes of a depth-`n` fragment with `t` fraction bits.
pub fn encoded_len(n: usize, t: u32) -> usize {
    HEADER_LEN + node_count(n) * (t as usize + 2)
}

struct BitWriter {
    bytes: Vec<u8>,
    used: u32,
}

impl BitWriter {
    fn push(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            if self.used.is_multiple_of(8) {
                self.bytes.push(0);
            }
            if value >> i & 1 == 1 {
                *self.bytes.last_mut().expect("pushed") |= 0x80 >> (self.used % 8);
            }
            self.used += 1;
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn take(&mut self, width: u32) -> u64 {
        let mut v = 0u64;
        for _ in 0..width {
            let b = self.bytes[self.pos / 8] >> (7 - self.pos % 8) & 1;
            v = v << 1 | b as u64;
            self.pos += 1;
        }
        v
    }
}

impl Fragment {
    pub fn encode(&self) -> Vec<u8> {
        let t = self.precision_bits();
        let mut w = BitWriter { bytes: Vec::with_capacity(encoded_len(self.n(), t)), used: 0 };
        w.bytes.extend_from_slice(MAGIC);
        w.bytes.extend_from_slice(&(self.n() as u16).to_be_bytes());
        w.bytes.extend_from_slice(&(t as u16).to_be_bytes());
        w.used = 8 * HEADER_LEN as u32;
        for node in self.raw() {
            for &c in node {
                w.push(u64::from(c < 0), 1);
                w.push(c.unsigned_abs(), t + 1);
            }
        }
        w.bytes
    }

    /// Parses the header and payload; `n` and `t` come from the header.
    pub fn decode(bytes: &[u8]) -> Result<Fragment> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::MalformedHeader(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::MalformedHeader(format!("bad magic {:?}", &bytes[..4])));
        }
        let n = u16::from_be_bytes([bytes[4], bytes[5]]) as usize;
        let t = u16::from_be_bytes([bytes[6], bytes[7]]) as u32;
        if n > MAX_DEPTH {
            return Err(Error::MalformedHeader(format!("depth {n} exceeds {MAX_DEPTH}")));
        }
        if t == 0 || t > MAX_PRECISION_BITS {
            return Err(Error::MalformedHeader(format!("precision {t} is outside 1..={MAX_PRECISION_BITS}")));
        }
        let expected = encoded_len(n, t);
        if bytes.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: bytes.len() });
        }
        let mut r = BitReader { bytes, pos: 8 * HEADER_LEN };
        let mut raw = Vec::with_capacity(node_count(n));
        for _ in 0..node_count(n) {
            let mut node = [0i64; 8];
            for c in node.iter_mut() {
                let negative = r.take(1) == 1;
                let magnitude = r.take(t + 1) as i64;
                if negative && magnitude == 0 {
                    return Err(Error::MalformedPayload("negative zero component".into()));
                }
                *c = if negative { -magnitude } else { magnitude };
            }
            raw.push(node);
        }
        Fragment::from_raw(n, t, raw)
    }

    /// [`Fragment::decode`], additionally requiring the header to announce
    /// depth `n` and precision `t`.
    pub fn decode_expecting(bytes: &[u8], n: usize, t: u32) -> Result<Fragment> {
        if bytes.len() >= HEADER_LEN {
            let hn = u16::from_be_bytes([bytes[4], bytes[5]]) as usize;
            let ht = u16::from_be_bytes([bytes[6], bytes[7]]) as u32;
            if (hn, ht) != (n, t) {
                return Err(Error::MalformedHeader(format!("header announces n={hn}, t={ht}; expected n={n}, t={t}")));
            }
        }
        Fragment::decode(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Generator;
    use crate::random;
    use proptest::prelude::*;

    #[test]
    fn depth_one_four_bits_is_twenty_six_bytes() {
        let f = Fragment::quantize(&Generator::identity(1), 1.0 / 16.0).unwrap();
        let bytes = f.encode();
        assert_eq!(f.node_count(), 3);
        assert_eq!(bytes.len(), 8 + 18);
        assert_eq!(&bytes[..8], b"QGF1\x00\x01\x00\x04");
        // Root node, re00 = +1.0000: sign 0, magnitude 10000₂, so the first
        // six bits read 010000.
        assert_eq!(bytes[8] >> 2, 0b010000);
        assert_eq!(Fragment::decode(&bytes).unwrap(), f);
    }

    #[test]
    fn negative_components_round_trip() {
        let f = Fragment::from_raw(0, 3, vec![[-5, 3, 0, -8, 8, 0, -1, 1]]).unwrap();
        assert_eq!(Fragment::decode(&f.encode()).unwrap(), f);
    }

    #[test]
    fn truncated_and_corrupt_inputs() {
        let mut rng = random::rng(1);
        let f = Fragment::quantize(&Generator::random(&mut rng, 2), 0.01).unwrap();
        let bytes = f.encode();
        let short = &bytes[..bytes.len() - 1];
        assert!(matches!(Fragment::decode(short), Err(Error::LengthMismatch { .. })));
        assert!(matches!(Fragment::decode(&bytes[..5]), Err(Error::MalformedHeader(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Fragment::decode(&bad), Err(Error::MalformedHeader(_))));
        assert!(matches!(Fragment::decode_expecting(&bytes, 2, 8), Err(Error::MalformedHeader(_))));
        assert_eq!(Fragment::decode_expecting(&bytes, 2, 7).unwrap(), f);
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(seed in any::<u64>(), n in 0usize..4, k in 1u32..20) {
            let mut rng = random::rng(seed);
            let f = Fragment::quantize(&Generator::random(&mut rng, n), (-(k as f64)).exp2()).unwrap();
            let bytes = f.encode();
            prop_assert_eq!(bytes.len(), encoded_len(n, k));
            prop_assert_eq!(Fragment::decode(&bytes).unwrap(), f);
        }
    }
}
