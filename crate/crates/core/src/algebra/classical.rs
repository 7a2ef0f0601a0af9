use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::problem::{Membership, PartialProblem};
use crate::error::{Error, Result};
use crate::state::{QTuple, Qustring};
use crate::Budgets;

/// `⟨s₁, …, s_m⟩`: for each component, its length as an LEB128 varint
/// written as bits (eight per byte, most significant first), then its bits.
pub fn pair<S: AsRef<str>>(parts: &[S]) -> Result<String> {
    let mut out = String::new();
    for s in parts {
        let s = s.as_ref();
        if s.chars().any(|c| c != '0' && c != '1') {
            return Err(Error::Parse(format!("{s:?} is not a binary string")));
        }
        let mut len = s.len() as u64;
        loop {
            let mut byte = (len & 0x7f) as u8;
            len >>= 7;
            if len != 0 {
                byte |= 0x80;
            }
            out.push_str(&format!("{byte:08b}"));
            if len == 0 {
                break;
            }
        }
        out.push_str(s);
    }
    Ok(out)
}

/// Inverse of [`pair`].
pub fn unpair(code: &str) -> Result<Vec<String>> {
    let bits = code.as_bytes();
    if bits.iter().any(|&b| b != b'0' && b != b'1') {
        return Err(Error::Parse(format!("{code:?} is not a binary string")));
    }
    let mut pos = 0;
    let mut parts = Vec::new();
    while pos < bits.len() {
        let mut len: u64 = 0;
        let mut shift = 0;
        loop {
            if pos + 8 > bits.len() || shift > 63 {
                return Err(Error::Parse("truncated length prefix".into()));
            }
            let byte = u8::from_str_radix(&code[pos..pos + 8], 2).expect("binary digits");
            pos += 8;
            len |= u64::from(byte & 0x7f) << shift;
            shift += 7;
            if byte & 0x80 == 0 {
                break;
            }
        }
        let len = len as usize;
        if pos + len > bits.len() {
            return Err(Error::Parse("component runs past the end".into()));
        }
        parts.push(code[pos..pos + len].to_string());
        pos += len;
    }
    Ok(parts)
}

/// A set of basis-string tuples, stored in paired form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalPart {
    encoded: BTreeSet<String>,
}

impl ClassicalPart {
    pub fn insert<S: AsRef<str>>(&mut self, tuple: &[S]) -> Result<()> {
        self.encoded.insert(pair(tuple)?);
        Ok(())
    }

    pub fn contains<S: AsRef<str>>(&self, tuple: &[S]) -> bool {
        pair(tuple).is_ok_and(|c| self.encoded.contains(&c))
    }

    pub fn len(&self) -> usize {
        self.encoded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encoded.is_empty()
    }

    pub fn encoded(&self) -> impl Iterator<Item = &str> {
        self.encoded.iter().map(String::as_str)
    }

    /// Decoded tuples in the order of their codes.
    pub fn tuples(&self) -> Vec<Vec<String>> {
        self.encoded.iter().map(|c| unpair(c).expect("stored codes decode")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParts {
    pub accept: ClassicalPart,
    pub reject: ClassicalPart,
    /// Number of basis tuples examined.
    pub tested: usize,
    /// Every examined tuple landed in one of the two parts.
    pub total: bool,
}

fn bits(value: usize, width: usize) -> String {
    (0..width).rev().map(|i| if value >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Every shape `(s₁, …, s_m)` with parts of at least one qubit and
/// `Σ sᵢ ≤ max_n`, in lexicographic order.
fn shapes(arity: usize, max_n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: usize, budget: usize, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for s in 1..=budget.saturating_sub(left - 1) {
            prefix.push(s);
            go(prefix, left - 1, budget - s, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), arity, max_n, &mut out);
    out
}

/// `(Ǎ, B̌)`: basis tuples of `arity` parts and at most `max_n` qubits in
/// total whose basis states are accepted, respectively rejected.
pub fn classical_part(p: &PartialProblem, arity: usize, max_n: usize, budgets: &Budgets) -> Result<ClassicalParts> {
    if arity == 0 {
        return Err(Error::BadLayout("tuples need at least one part".into()));
    }
    budgets.check_qubits(max_n)?;
    let all = shapes(arity, max_n);
    let count = all.iter().fold(0u128, |acc, s| acc.saturating_add(1u128 << s.iter().sum::<usize>()));
    budgets.check_grid("classical tuples", count)?;
    let mut parts = ClassicalParts { accept: ClassicalPart::default(), reject: ClassicalPart::default(), tested: 0, total: true };
    for shape in all {
        let total: usize = shape.iter().sum();
        for code in 0..1usize << total {
            let mut rest = total;
            let strings: Vec<String> = shape
                .iter()
                .map(|&s| {
                    rest -= s;
                    bits(code >> rest & ((1 << s) - 1), s)
                })
                .collect();
            let tuple = QTuple::new(
                strings.iter().map(|s| Qustring::basis(s.len(), usize::from_str_radix(s, 2).expect("binary"))).collect(),
            )?;
            parts.tested += 1;
            match p.membership(&tuple)? {
                Membership::Accept => parts.accept.insert(&strings)?,
                Membership::Reject => parts.reject.insert(&strings)?,
                Membership::OutsideLegalRegion => parts.total = false,
            }
        }
    }
    Ok(parts)
}
