//! Exact arithmetic in `Z[x]/(x^m - 1)`.
//!
//! A [`CycPoly`] is a dense coefficient vector of length `m`; every product
//! folds exponents back modulo `m`, which is exactly multiplication of the
//! corresponding `m x m` circulant matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Element of `Z[x]/(x^m - 1)`; `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycPoly {
    modulus: usize,
    coeffs: Vec<BigInt>,
}

impl CycPoly {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        CycPoly {
            modulus,
            coeffs: vec![BigInt::zero(); modulus],
        }
    }

    pub fn one(modulus: usize) -> Self {
        Self::monomial(modulus, 0)
    }

    /// `x^e`, with `e` reduced modulo `m`.
    pub fn monomial(modulus: usize, e: usize) -> Self {
        let mut p = Self::zero(modulus);
        p.coeffs[e % modulus] = BigInt::one();
        p
    }

    /// Sum of `x^e` over the given exponents (each reduced modulo `m`; repeats accumulate).
    pub fn from_exponents<I: IntoIterator<Item = usize>>(modulus: usize, exps: I) -> Self {
        let mut p = Self::zero(modulus);
        for e in exps {
            p.coeffs[e % modulus] += 1;
        }
        p
    }

    pub fn from_coeffs<T: Into<BigInt>>(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a cyclic polynomial needs at least one coefficient".into()));
        }
        Ok(CycPoly {
            modulus: coeffs.len(),
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(coeffs.to_vec())
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i % self.modulus]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycPoly {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycPoly {
            modulus: self.modulus,
            coeffs,
        })
    }

    /// Cyclic convolution: `out[k] = sum over i + j = k (mod m) of a[i] * b[j]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let m = self.modulus;
        let mut out = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = if i + j >= m { i + j - m } else { i + j };
                out[k] += a * b;
            }
        }
        Ok(CycPoly {
            modulus: m,
            coeffs: out,
        })
    }

    /// Multiplication by `x^s`: a cyclic rotation of the coefficients.
    pub fn shift(&self, s: usize) -> Self {
        let m = self.modulus;
        let s = s % m;
        let mut coeffs = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + s) % m] = c.clone();
        }
        CycPoly { modulus: m, coeffs }
    }

    pub fn scalar_mul<T: Into<BigInt>>(&self, c: T) -> Self {
        let c = c.into();
        CycPoly {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| a * &c).collect(),
        }
    }

    /// Value at `x = 1`, i.e. the coefficient sum. Well defined because 1 is a root of `x^m - 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_binary(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_one())
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Exponents with coefficient exactly 1, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Binary polynomial as a bitmask (bit `i` set iff `coeffs[i] == 1`); `None` if not binary or `m > 64`.
    pub fn to_mask(&self) -> Option<u64> {
        if self.modulus > 64 || !self.is_binary() {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_one())
                .fold(0u64, |acc, (i, _)| acc | (1 << i)),
        )
    }

    pub fn from_mask(modulus: usize, mask: u64) -> Self {
        Self::from_exponents(modulus, (0..modulus.min(64)).filter(|i| mask >> i & 1 == 1))
    }

    /// Human-readable form such as `1 + x + x^3`.
    pub fn pretty(&self) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}{mono}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        out
    }

    /// The comma-separated coefficient list without the `m:` prefix.
    pub fn coeff_list(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub(crate) fn parse_coeff_list(modulus: usize, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                BigInt::from_str(t).map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad coefficient {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != modulus {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {modulus} coefficients, found {}", coeffs.len()),
            });
        }
        Ok(CycPoly { modulus, coeffs })
    }

    /// Largest absolute coefficient as `u64`, if it fits.
    pub fn max_abs_coeff(&self) -> Option<u64> {
        self.coeffs.iter().map(|c| c.abs().to_u64()).try_fold(0u64, |acc, c| c.map(|c| acc.max(c)))
    }
}

/// `m:c0,c1,...,c{m-1}`
impl fmt::Display for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modulus, self.coeff_list())
    }
}

impl FromStr for CycPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, rest) = s.split_once(':').ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing modulus prefix in {s:?}"),
        })?;
        let m: usize = m.parse().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("bad modulus {m:?}"),
        })?;
        if m == 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "modulus must be positive".into(),
            });
        }
        Self::parse_coeff_list(m, rest)
    }
}

impl<'a> Add for &'a CycPoly {
    type Output = CycPoly;
    fn add(self, rhs: &'a CycPoly) -> CycPoly {
        CycPoly::add(self, rhs).expect("modulus mismatch")
    }
}

impl<'a> Sub for &'a CycPoly {
    type Output = CycPoly;
    fn sub(self, rhs: &'a CycPoly) -> CycPoly {
        CycPoly::sub(self, rhs).expect("modulus mismatch")
    }
}

impl<'a> Mul for &'a CycPoly {
    type Output = CycPoly;
    fn mul(self, rhs: &'a CycPoly) -> CycPoly {
        CycPoly::mul(self, rhs).expect("modulus mismatch")
    }
}

impl Neg for &CycPoly {
    type Output = CycPoly;
    fn neg(self) -> CycPoly {
        self.scalar_mul(-1)
    }
}

/// Modulus `2n + 3` shared by every polynomial of the family with index `n`.
pub fn family_modulus(n: usize) -> usize {
    2 * n + 3
}

fn require_index(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::IndexOutOfRange { what, n, min });
    }
    Ok(())
}

/// `P = 1 + x + ... + x^n` over `m = 2n + 3`.
pub fn make_p(n: usize) -> Result<CycPoly> {
    require_index("P", n, 1)?;
    Ok(CycPoly::from_exponents(family_modulus(n), 0..=n))
}

/// `Q = 1 + x + ... + x^(2n+2)`, the all-ones circulant.
pub fn make_q(n: usize) -> Result<CycPoly> {
    require_index("Q", n, 1)?;
    let m = family_modulus(n);
    Ok(CycPoly::from_exponents(m, 0..m))
}

/// `R = Q - x^(n-1) - x^(2n+1)`.
pub fn make_r(n: usize) -> Result<CycPoly> {
    require_index("R", n, 2)?;
    let m = family_modulus(n);
    let removed = CycPoly::from_exponents(m, [n - 1, 2 * n + 1]);
    make_q(n)?.sub(&removed)
}

/// `S = Q - 1 - x^2 - x^(n+2) - x^(n+3)`.
pub fn make_s(n: usize) -> Result<CycPoly> {
    require_index("S", n, 2)?;
    let m = family_modulus(n);
    let removed = CycPoly::from_exponents(m, [0, 2, n + 2, n + 3]);
    make_q(n)?.sub(&removed)
}
