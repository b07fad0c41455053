use crate::model::{Expr, Model, PidIndex};
use crate::state::{encode_state, State};

/// A bijection on the pids `0..n` of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0:?} is not a permutation of 0..{len}", len = .0.len())]
pub struct PermutationError(pub Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation, PermutationError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(PermutationError(images));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of pid `i`.
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

/// Statically checks that permuting the pids of `family` maps behaviours to
/// behaviours and preserves the error and accept predicates: those
/// predicates may only reach the family's locals through quantified pid
/// variables, never through a literal or named-constant pid.
///
/// Transitions cannot name another process or use a pid as a value, so
/// they satisfy the condition by construction.
pub fn check_symmetry_safe(m: &Model, family: usize) -> bool {
    let mut safe = true;
    for pred in m.error.iter().chain(m.accept.iter()) {
        pred.walk(&mut |e| {
            if let Expr::Indexed {
                family: f,
                index: PidIndex::Literal(_) | PidIndex::Const(_),
                ..
            } = e
            {
                if *f == family {
                    safe = false;
                }
            }
        });
    }
    safe
}

fn local_len(m: &Model, family: usize) -> usize {
    m.templates[m.instances[family].template].locals.len()
}

/// Moves the local vector of pid `i` to pid `p(i)` within `family`.
pub fn apply_perm(m: &Model, s: &State, family: usize, p: &Permutation) -> State {
    let n = m.instances[family].count;
    assert_eq!(p.len(), n, "permutation size does not match family size");
    let width = local_len(m, family);
    let start = m.instance_infos()[m.family_start(family)].offset;
    let mut out = s.0.clone();
    for i in 0..n {
        let from = start + i * width;
        let to = start + p.image(i) * width;
        out[to..to + width].copy_from_slice(&s.0[from..from + width]);
    }
    State(out)
}

/// Canonical representative of the orbit of `s` under full permutation of
/// every symmetric family: each family's local vectors sorted
/// lexicographically. With the order-preserving byte encoding this is the
/// orbit member with the smallest encoding.
pub fn rep(m: &Model, s: &State) -> State {
    let mut out = s.0.clone();
    for family in m.symmetric_families() {
        let n = m.instances[family].count;
        let width = local_len(m, family);
        if width == 0 || n < 2 {
            continue;
        }
        let start = m.instance_infos()[m.family_start(family)].offset;
        let block = &mut out[start..start + n * width];
        let mut rows: Vec<&[i64]> = s.0[start..start + n * width].chunks(width).collect();
        rows.sort_unstable();
        for (dst, row) in block.chunks_mut(width).zip(rows) {
            dst.copy_from_slice(row);
        }
    }
    State(out)
}

/// Storage key of a state: `encode(rep(s))` under symmetry, else `encode(s)`.
pub fn state_key(m: &Model, s: &State, symmetry: bool) -> Vec<u8> {
    if symmetry {
        encode_state(m, &rep(m, s))
    } else {
        encode_state(m, s)
    }
}
