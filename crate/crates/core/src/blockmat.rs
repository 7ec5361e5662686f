//! Block matrices of circulants and their compactified (polynomial) form.
//!
//! Convention: inside a circulant block each row is the previous row shifted
//! cyclically one place to the right, and the first row carries the
//! coefficients, so entry `(r, c)` of the block for `a(x)` is `a[(c - r) mod m]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::CycPoly;

/// Square 0/1 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    order: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(order: usize) -> Self {
        BinaryMatrix {
            order,
            bits: vec![false; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let v = rows.len();
        let mut m = Self::zeros(v);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != v {
                return Err(Error::Shape(format!("row {i} has length {} in a matrix of order {v}", row.len())));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::Domain(format!("entry ({i}, {j}) is {b}, not 0/1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.order + j] = value;
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.bits[i * self.order..(i + 1) * self.order].iter().filter(|&&b| b).count()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.order).filter(|&i| self.get(i, j)).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Integer copy, row-major.
    pub fn to_int(&self) -> IntMatrix {
        IntMatrix {
            rows: self.order,
            cols: self.order,
            data: self.bits.iter().map(|&b| if b { BigInt::one() } else { BigInt::zero() }).collect(),
        }
    }
}

/// Header `v`, then `v` lines of `v` characters from `{0,1}`.
impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for i in 0..self.order {
            let line: String = (0..self.order).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let v: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(hl + 1, format!("bad order {:?}", header.trim())))?;
        let mut m = BinaryMatrix::zeros(v);
        let mut count = 0;
        for (ln, line) in lines {
            let line = line.trim();
            if count == v {
                return Err(Error::parse(ln + 1, "more rows than the declared order"));
            }
            if line.len() != v {
                return Err(Error::parse(ln + 1, format!("expected {v} characters, found {}", line.len())));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(count, j, true),
                    _ => return Err(Error::parse(ln + 1, format!("unexpected character {ch:?}"))),
                }
            }
            count += 1;
        }
        if count != v {
            return Err(Error::parse(0, format!("expected {v} rows, found {count}")));
        }
        Ok(m)
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// All-ones `n x n` matrix.
    pub fn ones(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            data: vec![BigInt::one(); n * n],
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        (0..self.cols).map(|j| self.get(i, j)).sum()
    }

    pub fn col_sum(&self, j: usize) -> BigInt {
        (0..self.rows).map(|i| self.get(i, j)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("integer matrix sum of different shapes".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale<T: Into<BigInt>>(&self, c: T) -> Self {
        let c = c.into();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * &c).collect(),
        }
    }
}

/// `b x b` grid of polynomials over a shared modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompactMatrix {
    block_dim: usize,
    modulus: usize,
    entries: Vec<CycPoly>,
}

impl CompactMatrix {
    pub fn zeros(block_dim: usize, modulus: usize) -> Self {
        CompactMatrix {
            block_dim,
            modulus,
            entries: vec![CycPoly::zero(modulus); block_dim * block_dim],
        }
    }

    pub fn identity(block_dim: usize, modulus: usize) -> Self {
        let mut c = Self::zeros(block_dim, modulus);
        for i in 0..block_dim {
            c.entries[i * block_dim + i] = CycPoly::one(modulus);
        }
        c
    }

    /// Every entry equal to `p`, i.e. `J_b * p`.
    pub fn filled(block_dim: usize, p: &CycPoly) -> Self {
        CompactMatrix {
            block_dim,
            modulus: p.modulus(),
            entries: vec![p.clone(); block_dim * block_dim],
        }
    }

    pub fn from_entries(block_dim: usize, modulus: usize, entries: Vec<CycPoly>) -> Result<Self> {
        if block_dim == 0 || entries.len() != block_dim * block_dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {block_dim}x{block_dim} grid, got {}",
                block_dim * block_dim,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|p| p.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus,
                right: bad.modulus(),
            });
        }
        Ok(CompactMatrix {
            block_dim,
            modulus,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<CycPoly>>) -> Result<Self> {
        let b = rows.len();
        if rows.iter().any(|r| r.len() != b) {
            return Err(Error::Shape("compact matrix rows must all have length b".into()));
        }
        let m = rows.first().and_then(|r| r.first()).map(CycPoly::modulus).unwrap_or(1);
        Self::from_entries(b, m, rows.into_iter().flatten().collect())
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// 0-based.
    pub fn get(&self, i: usize, j: usize) -> &CycPoly {
        &self.entries[i * self.block_dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CycPoly) -> Result<()> {
        if p.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: p.modulus(),
            });
        }
        self.entries[i * self.block_dim + j] = p;
        Ok(())
    }

    pub fn entries(&self) -> &[CycPoly] {
        &self.entries
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.block_dim != other.block_dim {
            return Err(Error::Shape(format!(
                "block dimension {} vs {}",
                self.block_dim, other.block_dim
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(CompactMatrix {
            block_dim: self.block_dim,
            modulus: self.modulus,
            entries,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let b = self.block_dim;
        let mut out = Self::zeros(b, self.modulus);
        for i in 0..b {
            for j in 0..b {
                let mut acc = CycPoly::zero(self.modulus);
                for k in 0..b {
                    let (x, y) = (self.get(i, k), other.get(k, j));
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y)?)?;
                }
                out.entries[i * b + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn scalar<T: Into<BigInt>>(&self, c: T) -> Self {
        let c = c.into();
        CompactMatrix {
            block_dim: self.block_dim,
            modulus: self.modulus,
            entries: self.entries.iter().map(|p| p.scalar_mul(c.clone())).collect(),
        }
    }

    /// Entrywise substitution `x = 1`.
    pub fn eval_at_one(&self) -> IntMatrix {
        let b = self.block_dim;
        IntMatrix {
            rows: b,
            cols: b,
            data: self.entries.iter().map(CycPoly::eval_at_one).collect(),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(CycPoly::is_binary)
    }
}

/// `b m` header, then `b` lines of `b` space-separated coefficient lists.
impl fmt::Display for CompactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.block_dim, self.modulus)?;
        for i in 0..self.block_dim {
            let row: Vec<String> = (0..self.block_dim).map(|j| self.get(i, j).coeff_list()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for CompactMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(hl + 1, format!("bad header {header:?}")))?;
        let [b, m] = nums[..] else {
            return Err(Error::parse(hl + 1, "header must be `b m`"));
        };
        if b == 0 || m == 0 {
            return Err(Error::parse(hl + 1, "block dimension and modulus must be positive"));
        }
        let mut entries = Vec::with_capacity(b * b);
        let mut rows = 0;
        for (ln, line) in lines {
            if rows == b {
                return Err(Error::parse(ln + 1, "more rows than the declared block dimension"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != b {
                return Err(Error::parse(ln + 1, format!("expected {b} entries, found {}", fields.len())));
            }
            for field in fields {
                let p = CycPoly::parse_coeff_list(m, field).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::parse(ln + 1, msg),
                    other => other,
                })?;
                entries.push(p);
            }
            rows += 1;
        }
        if rows != b {
            return Err(Error::parse(0, format!("expected {b} rows, found {rows}")));
        }
        CompactMatrix::from_entries(b, m, entries)
    }
}

/// Replaces every `m x m` circulant block of `mat` by its polynomial.
pub fn compactify(mat: &BinaryMatrix, block_dim: usize, modulus: usize) -> Result<CompactMatrix> {
    if block_dim == 0 || modulus == 0 || mat.order() != block_dim * modulus {
        return Err(Error::Shape(format!(
            "order {} is not {block_dim} blocks of order {modulus}",
            mat.order()
        )));
    }
    let m = modulus;
    let mut entries = Vec::with_capacity(block_dim * block_dim);
    for bi in 0..block_dim {
        for bj in 0..block_dim {
            let (r0, c0) = (bi * m, bj * m);
            for r in 1..m {
                for c in 0..m {
                    if mat.get(r0 + r, c0 + c) != mat.get(r0, c0 + (c + m - r) % m) {
                        return Err(Error::NotCirculant { row: bi, col: bj });
                    }
                }
            }
            entries.push(CycPoly::from_exponents(m, (0..m).filter(|&c| mat.get(r0, c0 + c))));
        }
    }
    CompactMatrix::from_entries(block_dim, modulus, entries)
}

/// Inverse of [`compactify`]; every entry must be a 0/1 polynomial.
pub fn decompactify(cm: &CompactMatrix) -> Result<BinaryMatrix> {
    let (b, m) = (cm.block_dim(), cm.modulus());
    let mut out = BinaryMatrix::zeros(b * m);
    for bi in 0..b {
        for bj in 0..b {
            let p = cm.get(bi, bj);
            for (e, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !c.is_one() {
                    return Err(Error::NonBinary {
                        row: bi,
                        col: bj,
                        exponent: e,
                        value: c.to_string(),
                    });
                }
                for r in 0..m {
                    out.set(bi * m + r, bj * m + (e + r) % m, true);
                }
            }
        }
    }
    Ok(out)
}

/// The 8-vertex `dsrg(8,3,2,1,1)` made of four circulant blocks of order 4.
pub fn worked_example() -> BinaryMatrix {
    const ROWS: [&str; 8] = [
        "00010110", "10000011", "01001001", "00101100", "00110100", "10010010", "11000001", "01101000",
    ];
    let rows: Vec<Vec<u8>> = ROWS.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
    BinaryMatrix::from_rows(&rows).expect("static matrix is square and binary")
}

pub fn cm_add(a: &CompactMatrix, b: &CompactMatrix) -> Result<CompactMatrix> {
    a.add(b)
}

pub fn cm_mul(a: &CompactMatrix, b: &CompactMatrix) -> Result<CompactMatrix> {
    a.mul(b)
}

pub fn cm_scalar<T: Into<BigInt>>(a: &CompactMatrix, c: T) -> CompactMatrix {
    a.scalar(c)
}

pub fn cm_eval_at_one(a: &CompactMatrix) -> IntMatrix {
    a.eval_at_one()
}
