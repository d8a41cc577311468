//! Small linear algebra over GF(2) on words of at most 64 bits.

/// The set `offset ^ span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSet {
    pub offset: u64,
    pub basis: Vec<u64>,
}

impl AffineSet {
    pub fn single(x: u64) -> Self {
        AffineSet { offset: x, basis: Vec::new() }
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn len(&self) -> u64 {
        1u64 << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Shift every element by `x`.
    pub fn translate(mut self, x: u64) -> Self {
        self.offset ^= x;
        self
    }

    /// Elements in Gray-code order; each step flips one basis vector.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let total = self.len();
        let mut cur = self.offset;
        (0..total).map(move |i| {
            if i > 0 {
                cur ^= self.basis[i.trailing_zeros() as usize];
            }
            cur
        })
    }

    /// Elements in increasing numeric order.
    pub fn sorted(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.iter().collect();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, x: u64) -> bool {
        let reduced = reduce(&echelon(&self.basis), x ^ self.offset);
        reduced == 0
    }
}

/// Row-reduce `vectors` into a basis with distinct leading bits, highest first.
pub fn echelon(vectors: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = Vec::new();
    for &v in vectors {
        let r = reduce(&rows, v);
        if r != 0 {
            let lead = 63 - r.leading_zeros();
            for row in rows.iter_mut() {
                if (*row >> lead) & 1 == 1 {
                    *row ^= r;
                }
            }
            rows.push(r);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows
}

fn reduce(rows: &[u64], mut v: u64) -> u64 {
    for &r in rows {
        let lead = 63 - r.leading_zeros();
        if (v >> lead) & 1 == 1 {
            v ^= r;
        }
    }
    v
}

/// Solve `parity(row_k & x) = rhs_k` for every `k` over `n` unknowns.
///
/// Returns `None` when the system is inconsistent.
pub fn solve(n: u32, rows: &[(u64, u32)]) -> Option<AffineSet> {
    // Kept rows: (row, rhs, pivot column); pivots are cleared from every other row.
    let mut aug: Vec<(u64, u32, u32)> = Vec::new();
    for &(row, rhs) in rows {
        let mut r = row;
        let mut b = rhs & 1;
        for &(pr, pb, piv) in aug.iter() {
            if (r >> piv) & 1 == 1 {
                r ^= pr;
                b ^= pb;
            }
        }
        if r == 0 {
            if b == 1 {
                return None;
            }
            continue;
        }
        let lead = r.trailing_zeros();
        for (pr, pb, _) in aug.iter_mut() {
            if (*pr >> lead) & 1 == 1 {
                *pr ^= r;
                *pb ^= b;
            }
        }
        aug.push((r, b, lead));
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let pivot_mask: u64 = aug.iter().fold(0, |m, &(_, _, p)| m | (1u64 << p));
    let mut offset = 0u64;
    for &(_, b, p) in &aug {
        if b == 1 {
            offset |= 1u64 << p;
        }
    }
    let mut basis = Vec::new();
    let mut f = mask & !pivot_mask;
    while f != 0 {
        let col = f.trailing_zeros();
        f &= f - 1;
        let mut v = 1u64 << col;
        for &(r, _, p) in &aug {
            if (r >> col) & 1 == 1 {
                v |= 1u64 << p;
            }
        }
        basis.push(v);
    }
    Some(AffineSet { offset, basis })
}

/// Kernel of the linear map whose image of `e_i` is `columns[i]`.
pub fn kernel(columns: &[u64]) -> Vec<u64> {
    let n = columns.len() as u32;
    // x in kernel iff for every output bit j: parity(row_j & x) = 0.
    let out_bits = columns.iter().fold(0u64, |m, c| m | c);
    let mut rows = Vec::new();
    let mut ob = out_bits;
    while ob != 0 {
        let j = ob.trailing_zeros();
        ob &= ob - 1;
        let mut row = 0u64;
        for (i, c) in columns.iter().enumerate() {
            if (c >> j) & 1 == 1 {
                row |= 1u64 << i;
            }
        }
        rows.push((row, 0));
    }
    solve(n, &rows).expect("homogeneous systems are consistent").basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        // x0 ^ x1 = 1, x1 ^ x2 = 0 over 3 bits.
        let s = solve(3, &[(0b011, 1), (0b110, 0)]).unwrap();
        let mut got = s.sorted();
        got.sort();
        let mut want: Vec<u64> = (0..8u64)
            .filter(|x| ((x & 0b011).count_ones() & 1) == 1 && ((x & 0b110).count_ones() & 1) == 0)
            .collect();
        want.sort();
        assert_eq!(got, want);
        assert!(solve(2, &[(0b01, 1), (0b01, 0)]).is_none());
    }

    #[test]
    fn kernel_of_rotation_xor() {
        // x -> x ^ rot1(x) on 4 bits has kernel {0, 0b1111}.
        let cols: Vec<u64> = (0..4).map(|i| (1u64 << i) | (1u64 << ((i + 1) % 4))).collect();
        let k = kernel(&cols);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], 0b1111);
    }

    #[test]
    fn affine_iteration_covers_span() {
        let s = AffineSet { offset: 0b1000, basis: vec![0b1, 0b110] };
        assert_eq!(s.sorted(), vec![0b1000, 0b1001, 0b1110, 0b1111]);
        assert!(s.contains(0b1110));
        assert!(!s.contains(0b0110));
    }
}
