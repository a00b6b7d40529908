//! Shared domain types: code parameters, binary matrices, index sets and
//! the kernel generators `W_S`, `T_M` used to build `T = W_S ⊗ T_M`.
//!
//! Bits are stored as `u8` values in `{0, 1}`, indices are 0-based and in
//! natural order (no bit-reversal anywhere in the crate).

use std::fmt;

use crate::construction::DesignChannel;
use crate::error::{Error, Result};

/// Bit vector (`u`, `x`, `t^(s)`, `û`); every entry is 0 or 1.
pub type BitVector = Vec<u8>;

/// Parameters of one sliding-window code instance.
///
/// `n` is the code length, `m` the window length and `s = n / m` the number
/// of windows. `k` is the number of information bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeConfig {
    n: usize,
    m: usize,
    k: usize,
    design: DesignChannel,
}

impl CodeConfig {
    pub fn new(n: usize, m: usize, k: usize, design: DesignChannel) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::invalid("n", format!("{n} is not a power of two")));
        }
        if m == 0 || !m.is_power_of_two() {
            return Err(Error::invalid("m", format!("{m} is not a power of two")));
        }
        if m > n {
            return Err(Error::invalid("m", format!("window {m} exceeds code length {n}")));
        }
        if k > n {
            return Err(Error::invalid("k", format!("{k} exceeds code length {n}")));
        }
        design.validate()?;
        Ok(Self { n, m, k, design })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of windows `N / M`.
    pub fn s(&self) -> usize {
        self.n / self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn design(&self) -> DesignChannel {
        self.design
    }

    pub fn log2_n(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn log2_m(&self) -> u32 {
        self.m.trailing_zeros()
    }

    /// Code rate `K / N`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn with_design(&self, design: DesignChannel) -> Result<Self> {
        Self::new(self.n, self.m, self.k, design)
    }
}

/// Dense binary matrix in row-major order.
///
/// Only materialized for small sizes (reference encoder and tests); the
/// production encoders and decoders never build `T` explicitly.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl BinaryMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::invalid("rows", "matrix must have positive dimensions"));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            Error::check_len("matrix row", c, row.len())?;
            if row.iter().any(|&b| b > 1) {
                return Err(Error::invalid("rows", "entries must be 0 or 1"));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries,
        })
    }

    fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> u8) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Row vector times matrix over GF(2): `u · A`.
    pub fn left_mul(&self, u: &[u8]) -> Result<BitVector> {
        Error::check_len("input vector", self.rows, u.len())?;
        let mut out = vec![0u8; self.cols];
        for (i, &bit) in u.iter().enumerate() {
            if bit & 1 == 1 {
                for (o, &a) in out.iter_mut().zip(self.row(i)) {
                    *o ^= a;
                }
            }
        }
        Ok(out)
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        Error::check_len("matrix product inner dimension", self.cols, other.rows)?;
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(0, |acc, t| acc ^ (self.get(i, t) & other.get(t, j)))
        }))
    }

    /// True when every entry above the diagonal is zero and the diagonal is all ones.
    pub fn is_lower_unitriangular(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Greater => self.get(i, j) == 0,
                    std::cmp::Ordering::Equal => self.get(i, j) == 1,
                    std::cmp::Ordering::Less => true,
                })
            })
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = self.row(r).iter().map(|&b| char::from(b'0' + b)).collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

/// The sliding-window kernel `W_S`: `S×S`, ones on and below the diagonal.
pub fn make_ws_kernel(s: usize) -> Result<BinaryMatrix> {
    if s == 0 {
        return Err(Error::invalid("s", "window count must be at least 1"));
    }
    Ok(BinaryMatrix::from_fn(s, s, |i, j| u8::from(j <= i)))
}

/// `T_2^{⊗m}`, size `2^m`, natural order.
pub fn polar_transform(m: u32) -> BinaryMatrix {
    let t2 = BinaryMatrix::from_fn(2, 2, |i, j| u8::from(j <= i));
    (0..m).fold(BinaryMatrix::from_fn(1, 1, |_, _| 1), |acc, _| kronecker(&acc, &t2))
}

/// Kronecker product; entries are products of bits.
pub fn kronecker(a: &BinaryMatrix, b: &BinaryMatrix) -> BinaryMatrix {
    BinaryMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a.get(i / b.rows, j / b.cols) & b.get(i % b.rows, j % b.cols)
    })
}

/// Sorted set of distinct indices in `[0, universe)`.
///
/// Used for frozen sets, information sets and their per-window restrictions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexSet {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSet {
    /// Builds a set from already sorted, distinct indices.
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("indices", "must be strictly increasing"));
        }
        if let Some(&last) = indices.last() {
            if last >= universe {
                return Err(Error::invalid(
                    "indices",
                    format!("index {last} out of range [0, {universe})"),
                ));
            }
        }
        Ok(Self { indices, universe })
    }

    /// Sorts and deduplicates before validating the range.
    pub fn from_unsorted(mut indices: Vec<usize>, universe: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, universe)
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            indices: Vec::new(),
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            indices: (0..universe).collect(),
            universe,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn complement(&self) -> IndexSet {
        let mut out = Vec::with_capacity(self.universe - self.indices.len());
        let mut it = self.indices.iter().peekable();
        for i in 0..self.universe {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        IndexSet {
            indices: out,
            universe: self.universe,
        }
    }

    /// Membership mask of length `universe`.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }
}
