//! Digraphs with bitset adjacency and two independent strong-regularity checks:
//! one through the matrix identities, one by counting 2-paths pair by pair.

use std::fmt;
use std::str::FromStr;

use crate::blockmat::BinaryMatrix;
use crate::error::{Error, Result};

const WORD: usize = 64;

/// Parameter set `(v, k, t, lambda, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DsrgParams {
    pub v: usize,
    pub k: usize,
    pub t: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl DsrgParams {
    pub fn new(v: usize, k: usize, t: usize, lambda: usize, mu: usize) -> Result<Self> {
        let p = DsrgParams { v, k, t, lambda, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = (self.k < self.v || self.v == 0 && self.k == 0)
            && self.t <= self.k
            && self.lambda <= self.k
            && self.mu <= self.k;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("inconsistent parameter set {self}")))
        }
    }
}

impl fmt::Display for DsrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.v, self.k, self.t, self.lambda, self.mu)
    }
}

/// Parses `v,k,t,l,m` (parentheses optional).
impl FromStr for DsrgParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let nums: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(0, format!("bad parameter list {s:?}")))?;
        let [v, k, t, lambda, mu] = nums[..] else {
            return Err(Error::parse(0, "expected five comma-separated integers v,k,t,l,m"));
        };
        DsrgParams::new(v, k, t, lambda, mu)
    }
}

/// Loop-free digraph stored as out- and in-neighbour bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    v: usize,
    words: usize,
    out_adj: Vec<u64>,
    in_adj: Vec<u64>,
}

impl Digraph {
    pub fn empty(v: usize) -> Self {
        let words = v.div_ceil(WORD).max(1);
        Digraph {
            v,
            words,
            out_adj: vec![0; v * words],
            in_adj: vec![0; v * words],
        }
    }

    /// Fails if `(u, v)` is out of range or a loop.
    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(v: usize, arcs: I) -> Result<Self> {
        let mut g = Self::empty(v);
        for (a, b) in arcs {
            if a >= v || b >= v {
                return Err(Error::Domain(format!("arc ({a}, {b}) out of range for {v} vertices")));
            }
            if a == b {
                return Err(Error::Domain(format!("loop at vertex {a}")));
            }
            g.add_arc(a, b);
        }
        Ok(g)
    }

    pub fn from_matrix(m: &BinaryMatrix) -> Result<Self> {
        let v = m.order();
        let arcs = (0..v).flat_map(|i| (0..v).map(move |j| (i, j))).filter(|&(i, j)| m.get(i, j));
        Self::from_arcs(v, arcs)
    }

    pub fn to_matrix(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.v);
        for (a, b) in self.arcs() {
            m.set(a, b, true);
        }
        m
    }

    fn add_arc(&mut self, a: usize, b: usize) {
        self.out_adj[a * self.words + b / WORD] |= 1 << (b % WORD);
        self.in_adj[b * self.words + a / WORD] |= 1 << (a % WORD);
    }

    pub fn order(&self) -> usize {
        self.v
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.out_adj[a * self.words + b / WORD] >> (b % WORD) & 1 == 1
    }

    pub fn out_row(&self, a: usize) -> &[u64] {
        &self.out_adj[a * self.words..(a + 1) * self.words]
    }

    pub fn in_row(&self, b: usize) -> &[u64] {
        &self.in_adj[b * self.words..(b + 1) * self.words]
    }

    pub fn out_degree(&self, a: usize) -> usize {
        popcount(self.out_row(a))
    }

    pub fn in_degree(&self, b: usize) -> usize {
        popcount(self.in_row(b))
    }

    /// Number of paths `a -> z -> b`.
    pub fn two_paths(&self, a: usize, b: usize) -> usize {
        self.out_row(a)
            .iter()
            .zip(self.in_row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    pub fn out_neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.out_row(a))
    }

    pub fn in_neighbors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.in_row(b))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.v).flat_map(move |a| self.out_neighbors(a).map(move |b| (a, b)))
    }

    pub fn arc_count(&self) -> usize {
        popcount(&self.out_adj)
    }

    /// Every arc reversed.
    pub fn converse(&self) -> Self {
        Digraph {
            v: self.v,
            words: self.words,
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    /// Image under the vertex map `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.v);
        let mut g = Self::empty(self.v);
        for (a, b) in self.arcs() {
            g.add_arc(perm[a], perm[b]);
        }
        g
    }

    /// Toggles arc `(a, b)`; `a != b`.
    pub fn flip_arc(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "loops are not allowed");
        self.out_adj[a * self.words + b / WORD] ^= 1 << (b % WORD);
        self.in_adj[b * self.words + a / WORD] ^= 1 << (a % WORD);
    }

    /// Edge-list text: header `v e`, then one `i j` line per arc (1-based).
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.v, self.arc_count());
        for (a, b) in self.arcs() {
            s.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let (v, e) = parse_pair(header).ok_or_else(|| Error::parse(hl + 1, "header must be `v e`"))?;
        let mut arcs = Vec::with_capacity(e);
        for (ln, line) in lines {
            let (a, b) = parse_pair(line).ok_or_else(|| Error::parse(ln + 1, format!("bad arc line {line:?}")))?;
            if a == 0 || b == 0 || a > v || b > v {
                return Err(Error::parse(ln + 1, format!("vertex out of range 1..={v}")));
            }
            arcs.push((a - 1, b - 1));
        }
        if arcs.len() != e {
            return Err(Error::parse(0, format!("header declares {e} arcs, found {}", arcs.len())));
        }
        let g = Self::from_arcs(v, arcs.iter().copied()).map_err(|err| Error::parse(0, err.to_string()))?;
        if g.arc_count() != e {
            return Err(Error::parse(0, "duplicate arcs"));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    let a = it.next()?.ok()?;
    let b = it.next()?.ok()?;
    it.next().is_none().then_some((a, b))
}

pub(crate) fn popcount(ws: &[u64]) -> usize {
    ws.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn bits(ws: &[u64]) -> impl Iterator<Item = usize> + '_ {
    ws.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * WORD + b)
        })
    })
}

/// Which clause of the combinatorial definition a vertex pair falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Same,
    Adjacent,
    NonAdjacent,
}

/// First failure found by a verifier (vertices are 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutDegree { vertex: usize, found: usize, expected: usize },
    InDegree { vertex: usize, found: usize, expected: usize },
    Paths { from: usize, to: usize, kind: PairKind, found: usize, expected: usize },
    RowSum { row: usize, found: i64, expected: i64 },
    ColSum { col: usize, found: i64, expected: i64 },
    SquareEntry { row: usize, col: usize, lhs: i64, rhs: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutDegree { vertex, found, expected } => {
                write!(f, "vertex {} has outdegree {found}, expected {expected}", vertex + 1)
            }
            Violation::InDegree { vertex, found, expected } => {
                write!(f, "vertex {} has indegree {found}, expected {expected}", vertex + 1)
            }
            Violation::Paths { from, to, kind, found, expected } => write!(
                f,
                "pair ({}, {}) [{kind:?}] has {found} paths of length 2, expected {expected}",
                from + 1,
                to + 1
            ),
            Violation::RowSum { row, found, expected } => {
                write!(f, "row {} of AJ is {found}, expected {expected}", row + 1)
            }
            Violation::ColSum { col, found, expected } => {
                write!(f, "column {} of JA is {found}, expected {expected}", col + 1)
            }
            Violation::SquareEntry { row, col, lhs, rhs } => write!(
                f,
                "A^2[{}, {}] = {lhs}, but tI + lA + m(J - I - A) gives {rhs}",
                row + 1,
                col + 1
            ),
        }
    }
}

/// Outcome of a verifier: `None` means the digraph is a dsrg with the given parameters.
pub type Verdict = Option<Violation>;

fn check_size(g: &Digraph, p: &DsrgParams) -> Result<()> {
    if g.order() != p.v {
        return Err(Error::Shape(format!(
            "digraph has {} vertices but parameters say v = {}",
            g.order(),
            p.v
        )));
    }
    Ok(())
}

/// Checks `A^2 = tI + lA + m(J - I - A)` and `AJ = JA = kJ` with dense integer arithmetic.
pub fn verify_matrix(g: &Digraph, p: &DsrgParams) -> Result<Verdict> {
    check_size(g, p)?;
    let v = g.order();
    let a: Vec<i64> = (0..v * v).map(|idx| g.has_arc(idx / v, idx % v) as i64).collect();
    let k = p.k as i64;

    for i in 0..v {
        let s: i64 = a[i * v..(i + 1) * v].iter().sum();
        if s != k {
            return Ok(Some(Violation::RowSum { row: i, found: s, expected: k }));
        }
    }
    for j in 0..v {
        let s: i64 = (0..v).map(|i| a[i * v + j]).sum();
        if s != k {
            return Ok(Some(Violation::ColSum { col: j, found: s, expected: k }));
        }
    }

    let mut sq = vec![0i64; v * v];
    for i in 0..v {
        for l in 0..v {
            let x = a[i * v + l];
            if x == 0 {
                continue;
            }
            for j in 0..v {
                sq[i * v + j] += x * a[l * v + j];
            }
        }
    }

    let (t, lam, mu) = (p.t as i64, p.lambda as i64, p.mu as i64);
    for i in 0..v {
        for j in 0..v {
            let id = (i == j) as i64;
            let aij = a[i * v + j];
            let rhs = t * id + lam * aij + mu * (1 - id - aij);
            if sq[i * v + j] != rhs {
                return Ok(Some(Violation::SquareEntry {
                    row: i,
                    col: j,
                    lhs: sq[i * v + j],
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

/// Checks the four counting conditions vertex by vertex and pair by pair.
pub fn verify_combinatorial(g: &Digraph, p: &DsrgParams) -> Result<Verdict> {
    check_size(g, p)?;
    let v = g.order();
    for x in 0..v {
        let d = g.out_degree(x);
        if d != p.k {
            return Ok(Some(Violation::OutDegree { vertex: x, found: d, expected: p.k }));
        }
        let d = g.in_degree(x);
        if d != p.k {
            return Ok(Some(Violation::InDegree { vertex: x, found: d, expected: p.k }));
        }
    }
    for x in 0..v {
        for y in 0..v {
            let (kind, expected) = if x == y {
                (PairKind::Same, p.t)
            } else if g.has_arc(x, y) {
                (PairKind::Adjacent, p.lambda)
            } else {
                (PairKind::NonAdjacent, p.mu)
            };
            let found = g.two_paths(x, y);
            if found != expected {
                return Ok(Some(Violation::Paths { from: x, to: y, kind, found, expected }));
            }
        }
    }
    Ok(None)
}

/// Reads `(v, k, t, lambda, mu)` off the digraph and confirms them by counting.
pub fn infer_params(g: &Digraph) -> Result<std::result::Result<DsrgParams, Violation>> {
    let v = g.order();
    if v == 0 {
        return Err(Error::Domain("cannot infer parameters of the empty vertex set".into()));
    }
    let k = g.out_degree(0);
    let t = g.two_paths(0, 0);
    let mut lambda = None;
    let mut mu = None;
    'outer: for x in 0..v {
        for y in 0..v {
            if x == y {
                continue;
            }
            if g.has_arc(x, y) {
                lambda.get_or_insert_with(|| g.two_paths(x, y));
            } else {
                mu.get_or_insert_with(|| g.two_paths(x, y));
            }
            if lambda.is_some() && mu.is_some() {
                break 'outer;
            }
        }
    }
    let p = DsrgParams {
        v,
        k,
        t,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    };
    Ok(match verify_combinatorial(g, &p)? {
        None => Ok(p),
        Some(w) => Err(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmat::worked_example as example_s;

    fn s_graph() -> Digraph {
        Digraph::from_matrix(&example_s()).unwrap()
    }

    fn p(v: usize, k: usize, t: usize, l: usize, m: usize) -> DsrgParams {
        DsrgParams { v, k, t, lambda: l, mu: m }
    }

    #[test]
    fn worked_example_accepted_by_both() {
        let g = s_graph();
        assert_eq!(verify_matrix(&g, &p(8, 3, 2, 1, 1)).unwrap(), None);
        assert_eq!(verify_combinatorial(&g, &p(8, 3, 2, 1, 1)).unwrap(), None);
    }

    #[test]
    fn empty_digraph_degenerate() {
        let g = Digraph::empty(5);
        assert_eq!(verify_matrix(&g, &p(5, 0, 0, 0, 0)).unwrap(), None);
        assert_eq!(verify_combinatorial(&g, &p(5, 0, 0, 0, 0)).unwrap(), None);
    }

    #[test]
    fn wrong_mu_is_rejected_at_a_non_adjacent_pair() {
        let g = s_graph();
        match verify_combinatorial(&g, &p(8, 3, 2, 1, 2)).unwrap() {
            Some(Violation::Paths { kind: PairKind::NonAdjacent, found: 1, expected: 2, .. }) => {}
            other => panic!("unexpected verdict {other:?}"),
        }
        match verify_matrix(&g, &p(8, 3, 2, 1, 2)).unwrap() {
            Some(Violation::SquareEntry { row, col, .. }) => {
                assert!(row != col && !g.has_arc(row, col));
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn size_mismatch() {
        assert!(verify_matrix(&s_graph(), &p(9, 3, 2, 1, 1)).is_err());
        assert!(verify_combinatorial(&s_graph(), &p(9, 3, 2, 1, 1)).is_err());
    }

    #[test]
    fn inference() {
        assert_eq!(infer_params(&s_graph()).unwrap(), Ok(p(8, 3, 2, 1, 1)));
        let cycle = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        // 0->1->2 is the only 2-path from 0 to 2; no 2-path joins an arc's endpoints.
        assert_eq!(infer_params(&cycle).unwrap(), Ok(p(3, 1, 0, 0, 1)));
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(infer_params(&path).unwrap().is_err());
    }

    #[test]
    fn loops_rejected() {
        assert!(Digraph::from_arcs(3, [(1, 1)]).is_err());
        assert!(Digraph::from_matrix(&BinaryMatrix::identity(2)).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = s_graph();
        let text = g.to_edge_list();
        assert!(text.starts_with("8 24\n"));
        assert_eq!(Digraph::parse_edge_list(&text).unwrap(), g);
        assert!(Digraph::parse_edge_list("3 1\n1 4\n").is_err());
        assert!(Digraph::parse_edge_list("3 2\n1 2\n").is_err());
        assert!(Digraph::parse_edge_list("3 2\n1 2\n1 2\n").is_err());
    }

    #[test]
    fn params_text() {
        assert_eq!("8,3,2,1,1".parse::<DsrgParams>().unwrap(), p(8, 3, 2, 1, 1));
        assert_eq!("(63,21,8,5,8)".parse::<DsrgParams>().unwrap(), p(63, 21, 8, 5, 8));
        assert!("8,3,2,1".parse::<DsrgParams>().is_err());
        assert!("3,4,0,0,0".parse::<DsrgParams>().is_err());
    }

    #[test]
    fn converse_and_relabel() {
        let g = s_graph();
        let c = g.converse();
        assert_eq!(c.to_matrix(), g.to_matrix().transpose());
        let perm: Vec<usize> = (0..8).rev().collect();
        let h = g.relabel(&perm);
        assert_eq!(h.arc_count(), g.arc_count());
        assert!(h.has_arc(perm[0], perm[3]));
    }
}
