use std::collections::BTreeSet;

use dsrg_core::family::{build_cn, build_family_compact, build_reduced_n1_compact, params_for};
use dsrg_core::search::{free_variables, satisfies_constraints, search, EntryRole, SearchSpec};
use dsrg_core::{decompactify, verify_combinatorial, verify_matrix, CompactMatrix, Digraph};

type Masks = [[u8; 9]; 9];

fn masks(cm: &CompactMatrix) -> Masks {
    let mut out = [[0u8; 9]; 9];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = cm.get(i, j).to_mask().expect("binary") as u8;
        }
    }
    out
}

#[test]
fn layout_has_twelve_free_entries() {
    for n in 1..=4 {
        let layout = free_variables(&SearchSpec::new(n).unwrap()).unwrap();
        assert_eq!(layout.free.len(), 12, "n={n}");
        assert!(layout.infeasible.is_none());
        assert!(matches!(layout.role(0, 1), EntryRole::Fixed(_)));
        assert!(matches!(layout.role(6, 1), EntryRole::Fixed(_)));
    }
}

#[test]
fn every_solution_is_a_dsrg() {
    for n in 1..=2 {
        let res = search(&SearchSpec::new(n).unwrap()).unwrap();
        assert!(res.stats.complete);
        let p = params_for(n).unwrap();
        for cm in &res.solutions {
            assert!(satisfies_constraints(cm, &SearchSpec::new(n).unwrap()));
            assert_eq!(dsrg_core::blockmat::cm_eval_at_one(cm), build_cn(n).unwrap());
            let g = Digraph::from_matrix(&decompactify(cm).unwrap()).unwrap();
            assert!(verify_matrix(&g, &p).unwrap().is_none());
            assert!(verify_combinatorial(&g, &p).unwrap().is_none());
        }
    }
}

#[test]
fn family_members_are_found() {
    for n in 2..=3 {
        let res = search(&SearchSpec::new(n).unwrap().with_budget(None)).unwrap();
        assert!(res.stats.complete);
        let a = build_family_compact(n).unwrap();
        assert!(res.solutions.contains(&a), "n={n}");
    }
    let reduced = build_reduced_n1_compact().unwrap();
    assert!(search(&SearchSpec::new(1).unwrap()).unwrap().solutions.contains(&reduced));
}

#[test]
fn job_count_does_not_change_output() {
    for n in 1..=2 {
        let one = search(&SearchSpec::new(n).unwrap().with_jobs(1)).unwrap();
        let four = search(&SearchSpec::new(n).unwrap().with_jobs(4)).unwrap();
        assert_eq!(one.solutions, four.solutions);
        let again = search(&SearchSpec::new(n).unwrap().with_jobs(1)).unwrap();
        assert_eq!(one.solutions, again.solutions);
        assert_eq!(one.stats.nodes, again.stats.nodes);
    }
}

#[test]
fn budget_stops_early() {
    let res = search(&SearchSpec::new(3).unwrap().with_budget(Some(10))).unwrap();
    assert!(!res.stats.complete);
    assert!(res.stats.nodes <= 20);
}

#[test]
fn constraint_check_rejects_perturbations() {
    let spec = SearchSpec::new(2).unwrap();
    let a = build_family_compact(2).unwrap();
    assert!(satisfies_constraints(&a, &spec));
    let mut b = a.clone();
    b.set(0, 0, a.get(0, 0).add(&dsrg_core::CycPoly::monomial(7, 3)).unwrap()).unwrap();
    assert!(!satisfies_constraints(&b, &spec));
    let mut c = a.clone();
    c.set(7, 3, a.get(7, 3).shift(1)).unwrap();
    assert!(!satisfies_constraints(&c, &spec));
}

// ---- independent generate-and-test oracle for n = 1 ----

const M: usize = 5;
const LANES: u64 = 0xFF_FFFF_FFFF;

/// Five 8-bit lanes holding the coefficients of a polynomial mod x^5 - 1.
fn lanes(mask: u8) -> u64 {
    (0..M).filter(|i| mask >> i & 1 == 1).map(|i| 1u64 << (8 * i)).sum()
}

fn rot_lanes(w: u64, s: usize) -> u64 {
    if s == 0 {
        w
    } else {
        ((w << (8 * s)) | (w >> (8 * (M - s)))) & LANES
    }
}

fn rot_mask(m: u8, s: usize) -> u8 {
    let s = s % M;
    ((m << s) | (m >> (M - s))) & 0x1F
}

fn subsets(size: usize) -> Vec<u8> {
    (0u8..32).filter(|m| m.count_ones() as usize == size).collect()
}

/// A^2 + 3A == 6 Q in every entry, with no loops; checked entry by entry.
fn is_solution(a: &Masks, lane: &[u64; 32]) -> bool {
    for (i, row) in a.iter().enumerate() {
        if row[i] & 1 == 1 {
            return false;
        }
    }
    let target = lanes(0x1F) * 6;
    for i in 0..9 {
        for j in 0..9 {
            let mut acc = 3 * lane[a[i][j] as usize];
            for k in 0..9 {
                let (left, right) = (a[i][k], lane[a[k][j] as usize]);
                for s in 0..M {
                    if left >> s & 1 == 1 {
                        acc += rot_lanes(right, s);
                    }
                }
            }
            if acc != target {
                return false;
            }
        }
    }
    true
}

/// Cells written by a free cell of row 0 or row 6 under the structural constraints.
fn place(a: &mut Masks, row: usize, col: usize, m: u8) {
    if row == 0 {
        for i in 0..6 {
            a[i][col] = rot_mask(m, i);
            if col == 8 {
                a[i][7] = rot_mask(m, i + 1);
            }
        }
    } else {
        for r in a.iter_mut().skip(6) {
            r[col] = m;
            if col == 8 {
                r[7] = rot_mask(m, 1);
            }
        }
    }
}

fn oracle_n1() -> BTreeSet<Masks> {
    let upper = [0usize, 2, 2, 2, 2, 1, 2, 2, 2];
    let lower = [5usize, 1, 1, 1, 1, 3, 1, 1, 1];
    let free_cols = [0usize, 3, 4, 5, 6, 8];
    let cells: Vec<(usize, usize, Vec<u8>)> = free_cols
        .iter()
        .map(|&c| (0, c, subsets(upper[c])))
        .chain(free_cols.iter().map(|&c| (6, c, subsets(lower[c]))))
        .collect();
    let combos: usize = cells.iter().map(|c| c.2.len()).product();
    assert_eq!(combos, 312_500_000);

    let mut a: Masks = [[0; 9]; 9];
    place(&mut a, 0, 1, 0b00011); // P = 1 + x
    place(&mut a, 0, 2, 0b00110);
    place(&mut a, 6, 1, 0b00001);
    place(&mut a, 6, 2, 0b00010);
    for (r, c, dom) in &cells {
        place(&mut a, *r, *c, dom[0]);
    }
    let lane: [u64; 32] = std::array::from_fn(|m| lanes(m as u8));

    let mut idx = vec![0usize; cells.len()];
    let mut found = BTreeSet::new();
    'outer: loop {
        if is_solution(&a, &lane) {
            found.insert(a);
        }
        // odometer, last cell fastest
        let mut v = cells.len();
        loop {
            if v == 0 {
                break 'outer;
            }
            v -= 1;
            let (r, c, dom) = &cells[v];
            idx[v] += 1;
            if idx[v] < dom.len() {
                place(&mut a, *r, *c, dom[idx[v]]);
                break;
            }
            idx[v] = 0;
            place(&mut a, *r, *c, dom[0]);
        }
    }
    found
}

#[test]
fn n1_search_equals_exhaustive_oracle() {
    let oracle = oracle_n1();
    let res = search(&SearchSpec::new(1).unwrap()).unwrap();
    let got: BTreeSet<Masks> = res.solutions.iter().map(masks).collect();
    assert_eq!(got.len(), res.solutions.len(), "duplicates in search output");
    assert_eq!(oracle.len(), 24);
    assert_eq!(got, oracle);
}

#[test]
fn class_counts_for_n3_to_n5() {
    for (n, classes, order) in [(3, 2, 4608u32), (4, 2, 22528), (5, 2, 106496)] {
        let res = search(&SearchSpec::new(n).unwrap()).unwrap();
        assert!(res.stats.complete, "n={n}");
        assert!(res.solutions.contains(&build_family_compact(n).unwrap()));
        let graphs: Vec<Digraph> = res
            .solutions
            .iter()
            .map(|cm| Digraph::from_matrix(&decompactify(cm).unwrap()).unwrap())
            .collect();
        let info = dsrg_core::autiso::classify(&graphs);
        assert_eq!(info.len(), classes, "n={n}");
        for c in &info {
            assert_eq!(c.aut_order, num_bigint::BigUint::from(order));
        }
    }
}
