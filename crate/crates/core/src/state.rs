//! Global states and their canonical byte encoding.

use crate::model::Model;

/// One global configuration: a flat vector holding the globals in
/// declaration order followed by each instance's locals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub(crate) Box<[i64]>);

impl State {
    pub fn from_slots(values: Vec<i64>) -> State {
        State(values.into_boxed_slice())
    }

    pub fn slots(&self) -> &[i64] {
        &self.0
    }

    pub fn global(&self, index: usize) -> i64 {
        self.0[index]
    }

    pub fn global_vals<'a>(&'a self, m: &Model) -> &'a [i64] {
        &self.0[..m.globals.len()]
    }

    /// Local valuation of flat instance `instance`, in declaration order.
    pub fn local_vals<'a>(&'a self, m: &Model, instance: usize) -> &'a [i64] {
        let info = &m.instance_infos()[instance];
        let n = m.templates[info.template].locals.len();
        &self.0[info.offset..info.offset + n]
    }

    /// True when every component lies in its declared range.
    pub fn in_range(&self, m: &Model) -> bool {
        self.0.len() == m.num_slots()
            && self
                .0
                .iter()
                .zip(m.slot_ranges())
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Error returned by [`decode_state`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("encoded state has {got} bytes, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("slot {slot} decodes to {value}, outside {lo}..{hi}")]
    Range {
        slot: usize,
        value: i64,
        lo: i64,
        hi: i64,
    },
}

fn width(lo: i64, hi: i64) -> usize {
    let span = (hi as i128 - lo as i128) as u128;
    match span {
        0..=0xff => 1,
        0x100..=0xffff => 2,
        0x1_0000..=0xffff_ffff => 4,
        _ => 8,
    }
}

/// Bytes needed to encode one state of `m`.
pub fn encoded_len(m: &Model) -> usize {
    m.slot_ranges().iter().map(|&(lo, hi)| width(lo, hi)).sum()
}

/// Canonical encoding: each slot as its offset from the declared lower bound,
/// big-endian, in the narrowest of 1/2/4/8 bytes that covers the range.
/// Byte order therefore agrees with lexicographic order on slot values.
pub fn encode_state(m: &Model, s: &State) -> Vec<u8> {
    let mut out = Vec::with_capacity(encoded_len(m));
    encode_into(m, s, &mut out);
    out
}

pub(crate) fn encode_into(m: &Model, s: &State, out: &mut Vec<u8>) {
    for (&v, &(lo, hi)) in s.0.iter().zip(m.slot_ranges()) {
        let off = (v as i128 - lo as i128) as u64;
        let bytes = off.to_be_bytes();
        out.extend_from_slice(&bytes[8 - width(lo, hi)..]);
    }
}

pub fn decode_state(m: &Model, bytes: &[u8]) -> Result<State, DecodeError> {
    let expected = encoded_len(m);
    if bytes.len() != expected {
        return Err(DecodeError::Length {
            expected,
            got: bytes.len(),
        });
    }
    let mut vals = Vec::with_capacity(m.num_slots());
    let mut pos = 0;
    for (slot, &(lo, hi)) in m.slot_ranges().iter().enumerate() {
        let w = width(lo, hi);
        let mut buf = [0u8; 8];
        buf[8 - w..].copy_from_slice(&bytes[pos..pos + w]);
        pos += w;
        let value = (lo as i128 + u64::from_be_bytes(buf) as i128) as i64;
        if value < lo || value > hi {
            return Err(DecodeError::Range {
                slot,
                value,
                lo,
                hi,
            });
        }
        vals.push(value);
    }
    Ok(State::from_slots(vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(width(0, 1), 1);
        assert_eq!(width(-128, 127), 1);
        assert_eq!(width(0, 256), 2);
        assert_eq!(width(0, 70_000), 4);
        assert_eq!(width(i64::MIN, i64::MAX), 8);
    }

    #[test]
    fn wide_ranges_roundtrip() {
        let m = crate::parse_model(
            "model w\nglobal a: -5..300 = -5\nglobal b: -9000000000..9000000000 = 42\nglobal c: 0..0 = 0\n",
        )
        .unwrap();
        let s = State::from_slots(vec![299, -8999999999, 0]);
        let bytes = encode_state(&m, &s);
        assert_eq!(bytes.len(), 2 + 8 + 1);
        assert_eq!(decode_state(&m, &bytes).unwrap(), s);
    }

    #[test]
    fn decode_rejects_bad_input() {
        let m = crate::parse_model("model w\nglobal a: 0..2 = 0\n").unwrap();
        assert!(matches!(
            decode_state(&m, &[]),
            Err(DecodeError::Length { .. })
        ));
        assert!(matches!(
            decode_state(&m, &[7]),
            Err(DecodeError::Range { .. })
        ));
    }
}
