//! The infinite family `dsrg(9(2n+3), 3(2n+3), 2n+4, 2n+1, 2n+4)` as explicit
//! 9x9 block-circulant matrices over `Z[x]/(x^(2n+3) - 1)`.

use crate::blockmat::{decompactify, CompactMatrix, IntMatrix};
use crate::dsrg::{Digraph, DsrgParams};
use crate::error::{Error, Result};
use crate::polyring::{family_modulus, make_p, make_q, make_r, make_s, CycPoly};

/// Number of block rows/columns in every family member.
pub const BLOCKS: usize = 9;

fn require(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::IndexOutOfRange { what, n, min });
    }
    Ok(())
}

pub fn params_for(n: usize) -> Result<DsrgParams> {
    require("the family parameter set", n, 1)?;
    let m = family_modulus(n);
    Ok(DsrgParams {
        v: 9 * m,
        k: 3 * m,
        t: 2 * n + 4,
        lambda: 2 * n + 1,
        mu: 2 * n + 4,
    })
}

/// Target value of `A_n(1)`: six identical upper rows and three identical lower rows.
pub fn build_cn(n: usize) -> Result<IntMatrix> {
    require("C_n", n, 1)?;
    let n = n as i64;
    let upper = vec![0, n + 1, n + 1, n + 1, n + 1, 1, 2, n + 1, n + 1];
    let lower = vec![2 * n + 3, 1, 1, 1, 1, 2 * n + 1, 2 * n - 1, 1, 1];
    let mut rows = vec![upper; 6];
    rows.extend(std::iter::repeat_n(lower, 3));
    IntMatrix::from_i64_rows(&rows)
}

/// First block row of the template; rows 2..=6 are its successive `x`-multiples.
fn upper_row(n: usize) -> Result<Vec<CycPoly>> {
    let m = family_modulus(n);
    let p = make_p(n)?;
    let x = |e: usize| CycPoly::monomial(m, e);
    Ok(vec![
        CycPoly::zero(m),
        p.clone(),
        p.shift(1),
        p.shift(n - 1),
        p.shift(n - 2),
        x(2 * n),
        CycPoly::from_exponents(m, [1, n + 1]),
        p.shift(2),
        p.shift(1),
    ])
}

/// Shared value of block rows 7, 8 and 9.
fn lower_row(n: usize) -> Result<Vec<CycPoly>> {
    let m = family_modulus(n);
    let x = |e: usize| CycPoly::monomial(m, e);
    Ok(vec![
        make_q(n)?,
        x(0),
        x(1),
        x(n - 1),
        x(n - 2),
        make_r(n)?,
        make_s(n)?,
        x(2),
        x(1),
    ])
}

/// `A_n(x)`, defined for `n >= 2`.
pub fn build_family_compact(n: usize) -> Result<CompactMatrix> {
    require("the family construction", n, 2)?;
    let first = upper_row(n)?;
    let lower = lower_row(n)?;
    let mut rows: Vec<Vec<CycPoly>> = (0..6)
        .map(|i| first.iter().map(|p| p.shift(i)).collect())
        .collect();
    rows.extend(std::iter::repeat_n(lower, 3));
    CompactMatrix::from_rows(rows)
}

/// The digraph whose adjacency matrix is the decompactification of `A_n(x)`.
pub fn build_family_digraph(n: usize) -> Result<Digraph> {
    let cm = build_family_compact(n)?;
    let mat = decompactify(&cm).expect("family template must be binary");
    Ok(Digraph::from_matrix(&mat).expect("family digraph must be loop-free"))
}

/// Template evaluated at `n = 1` with exponents reduced modulo 5 (`x^(n-2)` read as `x^4`).
///
/// Exploratory only: the construction is not claimed for `n = 1`, and `R`, `S`
/// are taken literally with the subtractions folded mod 5, so the result may
/// fail to be binary or strongly regular.
pub fn build_reduced_n1_compact() -> Result<CompactMatrix> {
    let n = 1usize;
    let m = family_modulus(n);
    let p = make_p(n)?;
    let x = |e: usize| CycPoly::monomial(m, e);
    let neg = m - 1; // x^(n-2) = x^(-1)
    let first = vec![
        CycPoly::zero(m),
        p.clone(),
        p.shift(1),
        p.shift(0),
        p.shift(neg),
        x(2),
        CycPoly::from_exponents(m, [1, 2]),
        p.shift(2),
        p.shift(1),
    ];
    let q = make_q(n)?;
    let r = q.sub(&CycPoly::from_exponents(m, [0, 3]))?;
    let s = q.sub(&CycPoly::from_exponents(m, [0, 2, 3, 4]))?;
    let lower = vec![q, x(0), x(1), x(0), x(neg), r, s, x(2), x(1)];
    let mut rows: Vec<Vec<CycPoly>> = (0..6)
        .map(|i| first.iter().map(|p| p.shift(i)).collect())
        .collect();
    rows.extend(std::iter::repeat_n(lower, 3));
    CompactMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmat::cm_eval_at_one;
    use num_bigint::BigInt;

    #[test]
    fn parameter_sets() {
        let p = params_for(1).unwrap();
        assert_eq!((p.v, p.k, p.t, p.lambda, p.mu), (45, 15, 6, 3, 6));
        let p = params_for(2).unwrap();
        assert_eq!((p.v, p.k, p.t, p.lambda, p.mu), (63, 21, 8, 5, 8));
        let p = params_for(5).unwrap();
        assert_eq!((p.v, p.k, p.t, p.lambda, p.mu), (117, 39, 14, 11, 14));
        assert!(params_for(0).is_err());
    }

    #[test]
    fn cn_rows() {
        let c = build_cn(1).unwrap();
        let row7: Vec<BigInt> = (0..9).map(|j| c.get(6, j).clone()).collect();
        let expect: Vec<BigInt> = [5, 1, 1, 1, 1, 3, 1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(row7, expect);
        for n in 1..20 {
            let c = build_cn(n).unwrap();
            for i in 0..9 {
                assert_eq!(c.row_sum(i), BigInt::from(3 * (2 * n + 3)));
                assert_eq!(c.col_sum(i), BigInt::from(3 * (2 * n + 3)));
            }
        }
        assert!(build_cn(0).is_err());
    }

    #[test]
    fn template_entries() {
        for n in 2..8 {
            let a = build_family_compact(n).unwrap();
            assert_eq!(a.get(0, 1), &make_p(n).unwrap());
            assert_eq!(a.get(6, 0), &make_q(n).unwrap());
            assert_eq!(a.get(7, 0), a.get(6, 0));
            assert_eq!(a.get(8, 0), a.get(6, 0));
            assert!(a.is_binary());
            assert_eq!(cm_eval_at_one(&a), build_cn(n).unwrap());
        }
        assert!(build_family_compact(1).is_err());
    }

    #[test]
    fn family_digraph_is_loop_free_and_regular() {
        for n in 2..6 {
            let g = build_family_digraph(n).unwrap();
            let k = 3 * (2 * n + 3);
            for u in 0..g.order() {
                assert!(!g.has_arc(u, u));
                assert_eq!(g.out_degree(u), k);
                assert_eq!(g.in_degree(u), k);
            }
        }
    }

    #[test]
    fn reduced_n1_template_shape() {
        let a = build_reduced_n1_compact().unwrap();
        assert_eq!((a.block_dim(), a.modulus()), (9, 5));
    }
}
