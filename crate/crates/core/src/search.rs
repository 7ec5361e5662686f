//! Backtracking search for compact adjacency matrices `A(x)` of shape 9x9 over
//! `Z[x]/(x^(2n+3) - 1)` with `A(1)` prescribed, the block-structure constraints
//! below, and `A(x)^2 + 3A(x) = (2n+4) J_9 Q(x)`.
//!
//! Structural constraints (1-based block indices):
//! * `A[1,2] = P = 1 + x + ... + x^n` and `A[7,2] = 1`;
//! * rows 8 and 9 equal row 7;
//! * row `i` is `x` times row `i-1` for `i = 2..6`;
//! * column 3 is `x` times column 2 and column 8 is `x` times column 9.
//!
//! What remains free are twelve entries of block rows 1 and 7. Each is a 0/1
//! polynomial with a fixed coefficient sum, enumerated as subsets of `0..m`.
//! Every term `A[i,k] A[k,j]` of the product is accumulated as soon as both of
//! its factors are known. Coefficients only grow, so a branch dies as soon as
//! one exceeds `2n + 4`, and a completed entry must equal `(2n+4) Q` exactly.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::blockmat::{CompactMatrix, IntMatrix};
use crate::error::{Error, Result};
use crate::family::{build_cn, BLOCKS};
use crate::polyring::{family_modulus, make_p, make_q, CycPoly};

/// Default node budget above `n = 2`.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub n: usize,
    /// Prescribed `A(1)`.
    pub target_c: IntMatrix,
    /// Maximum number of search nodes; `None` is unlimited.
    pub node_budget: Option<u64>,
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub jobs: usize,
}

impl SearchSpec {
    /// Target `C_n` with the default budget for `n`.
    pub fn new(n: usize) -> Result<Self> {
        let target_c = build_cn(n)?;
        Ok(SearchSpec {
            n,
            target_c,
            node_budget: if n <= 2 { None } else { Some(DEFAULT_BUDGET) },
            jobs: 1,
        })
    }

    pub fn with_target(mut self, target_c: IntMatrix) -> Self {
        self.target_c = target_c;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn modulus(&self) -> usize {
        family_modulus(self.n)
    }

    /// Warnings about a target whose line sums are not all `3(2n+3)`.
    pub fn warnings(&self) -> Vec<String> {
        let want = BigInt::from(3 * self.modulus());
        let c = &self.target_c;
        let mut out = Vec::new();
        if c.rows() != BLOCKS || c.cols() != BLOCKS {
            out.push(format!("target is {}x{}, expected 9x9", c.rows(), c.cols()));
            return out;
        }
        for i in 0..BLOCKS {
            if c.row_sum(i) != want {
                out.push(format!("target row {} sums to {}, expected {want}", i + 1, c.row_sum(i)));
            }
            if c.col_sum(i) != want {
                out.push(format!("target column {} sums to {}, expected {want}", i + 1, c.col_sum(i)));
            }
        }
        out
    }
}

/// How one entry of `A(x)` is determined (indices 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryRole {
    Fixed(CycPoly),
    /// Free unknown number `var`, whose coefficients must sum to `target_sum`.
    Free { var: usize, target_sum: i64 },
    /// `x^shift` times the entry `from`.
    Derived { from: (usize, usize), shift: usize },
}

/// A free unknown of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeVar {
    pub cell: (usize, usize),
    pub target_sum: usize,
    /// Positions that must stay 0 so that no diagonal block gets a loop.
    pub forbidden: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct VariableLayout {
    pub modulus: usize,
    /// Row-major, 81 entries.
    pub roles: Vec<EntryRole>,
    pub free: Vec<FreeVar>,
    /// Reason the target cannot be met by any matrix with this structure.
    pub infeasible: Option<String>,
}

impl VariableLayout {
    pub fn role(&self, i: usize, j: usize) -> &EntryRole {
        &self.roles[i * BLOCKS + j]
    }
}

impl fmt::Display for VariableLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..BLOCKS {
            for j in 0..BLOCKS {
                let desc = match self.role(i, j) {
                    EntryRole::Fixed(p) => format!("FIXED {}", p.pretty()),
                    EntryRole::Free { var, target_sum } => format!("FREE #{var} sum {target_sum}"),
                    EntryRole::Derived { from, shift } => {
                        format!("DERIVED x^{shift} * [{},{}]", from.0 + 1, from.1 + 1)
                    }
                };
                writeln!(f, "[{},{}] {desc}", i + 1, j + 1)?;
            }
        }
        Ok(())
    }
}

/// Root entry and accumulated shift of entry `(i, j)` under the structural constraints.
fn root_of(i: usize, j: usize) -> ((usize, usize), usize) {
    let (row, mut shift) = match i {
        0..=5 => (0, i),
        _ => (6, 0),
    };
    let col = match j {
        2 => {
            shift += 1;
            1
        }
        7 => {
            shift += 1;
            8
        }
        _ => j,
    };
    ((row, col), shift)
}

fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// Classifies every entry as fixed, free or derived and collects the free unknowns.
pub fn free_variables(spec: &SearchSpec) -> Result<VariableLayout> {
    let n = spec.n;
    if n < 1 {
        return Err(Error::IndexOutOfRange { what: "search", n, min: 1 });
    }
    let m = spec.modulus();
    if m > 64 {
        return Err(Error::Domain(format!("modulus {m} exceeds the 64-bit search kernel")));
    }
    if spec.target_c.rows() != BLOCKS || spec.target_c.cols() != BLOCKS {
        return Err(Error::Shape("target matrix must be 9x9".into()));
    }
    let fixed = |cell: (usize, usize)| -> Option<CycPoly> {
        match cell {
            (0, 1) => Some(make_p(n).expect("n >= 1")),
            (6, 1) => Some(CycPoly::one(m)),
            _ => None,
        }
    };
    let mut roles = Vec::with_capacity(BLOCKS * BLOCKS);
    let mut free: Vec<FreeVar> = Vec::new();
    let mut var_of_root = std::collections::BTreeMap::new();
    let mut infeasible = None;
    let mut note = |msg: String| {
        infeasible.get_or_insert(msg);
    };

    for i in 0..BLOCKS {
        for j in 0..BLOCKS {
            let (root, shift) = root_of(i, j);
            let want = to_i64(spec.target_c.get(i, j)).unwrap_or(-1);
            if (i, j) == root {
                if let Some(p) = fixed(root) {
                    roles.push(EntryRole::Fixed(p));
                } else {
                    let var = free.len();
                    var_of_root.insert(root, var);
                    if want < 0 || want as usize > m {
                        note(format!("target entry [{},{}] = {want} is not a coefficient sum of a 0/1 polynomial", i + 1, j + 1));
                    }
                    free.push(FreeVar {
                        cell: root,
                        target_sum: want.clamp(0, m as i64) as usize,
                        forbidden: Vec::new(),
                    });
                    roles.push(EntryRole::Free { var, target_sum: want });
                }
            } else {
                roles.push(EntryRole::Derived { from: root, shift });
            }
        }
    }

    for i in 0..BLOCKS {
        for j in 0..BLOCKS {
            let (root, shift) = root_of(i, j);
            let want = to_i64(spec.target_c.get(i, j)).unwrap_or(-1);
            match fixed(root) {
                Some(p) => {
                    let sum = to_i64(&p.eval_at_one()).unwrap();
                    if sum != want {
                        note(format!("entry [{},{}] is forced to sum {sum}, target says {want}", i + 1, j + 1));
                    }
                    if i == j && !p.shift(shift).constant_term().is_zero() {
                        note(format!("fixed diagonal entry [{},{}] has a loop", i + 1, j + 1));
                    }
                }
                None => {
                    let var = var_of_root[&root];
                    if free[var].target_sum as i64 != want {
                        note(format!(
                            "entries [{},{}] and [{},{}] must be equal up to a shift but have different targets",
                            i + 1,
                            j + 1,
                            root.0 + 1,
                            root.1 + 1
                        ));
                    }
                    if i == j {
                        let p = (m - shift % m) % m;
                        if !free[var].forbidden.contains(&p) {
                            free[var].forbidden.push(p);
                        }
                    }
                }
            }
        }
    }
    for fv in &mut free {
        fv.forbidden.sort_unstable();
        if fv.target_sum + fv.forbidden.len() > m {
            note(format!(
                "entry [{},{}] cannot reach sum {} without a loop",
                fv.cell.0 + 1,
                fv.cell.1 + 1,
                fv.target_sum
            ));
        }
    }
    Ok(VariableLayout {
        modulus: m,
        roles,
        free,
        infeasible,
    })
}

/// All `k`-subsets of `0..m` avoiding `forbidden`, as bitmasks in increasing order.
fn subsets(m: usize, k: usize, forbidden: &[usize]) -> Vec<u64> {
    let allowed: Vec<usize> = (0..m).filter(|p| !forbidden.contains(p)).collect();
    let mut out = Vec::new();
    if k > allowed.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | 1 << allowed[i]));
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if idx[i] < allowed.len() - k + i {
                break;
            }
        }
        idx[i] += 1;
        for l in i + 1..k {
            idx[l] = idx[l - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Factor {
    Const(u64),
    Var { var: usize, shift: usize },
}

/// One product `left * right` (times `scale`) feeding entry `entry` of `A^2 + 3A`.
#[derive(Clone, Debug)]
struct Term {
    entry: usize,
    left: Factor,
    right: Factor,
    scale: u16,
}

/// Precomputed schedule: which terms become computable at each search depth.
struct Plan {
    m: usize,
    target: u16,
    order: Vec<usize>,
    domains: Vec<Vec<u64>>,
    /// Terms whose factors are all constants.
    initial: Vec<Term>,
    /// `by_depth[d]`: terms completed by assigning `order[d]`.
    by_depth: Vec<Vec<Term>>,
    /// `closing[d]`: entries with no terms left after depth `d`.
    closing: Vec<Vec<usize>>,
    entries: usize,
    layout: VariableLayout,
}

fn rot(mask: u64, s: usize, m: usize) -> u64 {
    let s = s % m;
    if s == 0 {
        return mask;
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    ((mask << s) | (mask >> (m - s))) & full
}

impl Plan {
    fn new(spec: &SearchSpec) -> Result<Self> {
        let layout = free_variables(spec)?;
        let m = layout.modulus;
        let factor_of = |i: usize, j: usize| -> Factor {
            let (root, shift) = root_of(i, j);
            match layout.role(root.0, root.1) {
                EntryRole::Fixed(p) => Factor::Const(rot(p.to_mask().expect("fixed entries are binary"), shift, m)),
                EntryRole::Free { var, .. } => Factor::Var { var: *var, shift },
                EntryRole::Derived { .. } => unreachable!("roots are never derived"),
            }
        };

        // Row 7 unknowns first, then row 1; within a row, smallest domain first.
        let domains: Vec<Vec<u64>> = layout
            .free
            .iter()
            .map(|fv| subsets(m, fv.target_sum, &fv.forbidden))
            .collect();
        let mut order: Vec<usize> = (0..layout.free.len()).collect();
        order.sort_by_key(|&v| (layout.free[v].cell.0 == 0, domains[v].len(), layout.free[v].cell));
        let mut depth_of = vec![0; order.len()];
        for (d, &v) in order.iter().enumerate() {
            depth_of[v] = d;
        }

        // Block rows 2..6 are shifts of row 1 and rows 8, 9 copy row 7, so the
        // product is determined by its rows 1 and 7.
        let rows = [0usize, 6];
        let mut initial = Vec::new();
        let mut by_depth = vec![Vec::new(); order.len()];
        let mut last_depth = vec![None::<usize>; rows.len() * BLOCKS];
        let mut push = |term: Term, initial: &mut Vec<Term>, by_depth: &mut Vec<Vec<Term>>| {
            let vars = [term.left, term.right]
                .into_iter()
                .filter_map(|f| match f {
                    Factor::Var { var, .. } => Some(depth_of[var]),
                    Factor::Const(_) => None,
                })
                .max();
            match vars {
                None => initial.push(term),
                Some(d) => {
                    let e = term.entry;
                    last_depth[e] = Some(last_depth[e].map_or(d, |x: usize| x.max(d)));
                    by_depth[d].push(term);
                }
            }
        };
        for (r, &i) in rows.iter().enumerate() {
            for j in 0..BLOCKS {
                let entry = r * BLOCKS + j;
                for k in 0..BLOCKS {
                    let term = Term {
                        entry,
                        left: factor_of(i, k),
                        right: factor_of(k, j),
                        scale: 1,
                    };
                    push(term, &mut initial, &mut by_depth);
                }
                let term = Term {
                    entry,
                    left: factor_of(i, j),
                    right: Factor::Const(1),
                    scale: 3,
                };
                push(term, &mut initial, &mut by_depth);
            }
        }
        let mut closing = vec![Vec::new(); order.len()];
        for (e, d) in last_depth.iter().enumerate() {
            // Entries with only constant terms are checked up front.
            if let Some(d) = d {
                closing[*d].push(e);
            }
        }
        let target = u16::try_from(2 * spec.n + 4).map_err(|_| Error::Domain("n too large".into()))?;
        Ok(Plan {
            m,
            target,
            order,
            domains,
            initial,
            by_depth,
            closing,
            entries: rows.len() * BLOCKS,
            layout,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Branches cut because a partial coefficient overshot `2n + 4`.
    pub pruned_overshoot: u64,
    /// Branches cut because a completed entry differed from `(2n+4) Q`.
    pub pruned_mismatch: u64,
    pub elapsed: Duration,
    /// False if the node budget ran out.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Canonically sorted (lexicographic on concatenated coefficient vectors).
    pub solutions: Vec<CompactMatrix>,
    pub stats: SearchStats,
    pub warnings: Vec<String>,
}

struct Worker<'p> {
    plan: &'p Plan,
    values: Vec<u64>,
    acc: Vec<u16>,
    nodes: u64,
    pruned_overshoot: u64,
    pruned_mismatch: u64,
    solutions: Vec<Vec<u64>>,
    budget: Option<u64>,
    shared_nodes: &'p AtomicU64,
    exhausted: &'p AtomicBool,
}

impl Worker<'_> {
    fn value(&self, f: Factor) -> u64 {
        match f {
            Factor::Const(c) => c,
            Factor::Var { var, shift } => rot(self.values[var], shift, self.plan.m),
        }
    }

    /// Adds (or removes) a term; returns false if a coefficient overshoots.
    fn apply(&mut self, term: &Term, sign: i32) -> bool {
        let m = self.plan.m;
        let (a, b) = (self.value(term.left), self.value(term.right));
        let base = term.entry * m;
        let mut ok = true;
        let mut x = a;
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            let mut y = rot(b, i, m);
            while y != 0 {
                let k = y.trailing_zeros() as usize;
                y &= y - 1;
                let slot = &mut self.acc[base + k];
                if sign > 0 {
                    *slot += term.scale;
                    ok &= *slot <= self.plan.target;
                } else {
                    *slot -= term.scale;
                }
            }
        }
        ok
    }

    fn entry_matches(&self, e: usize) -> bool {
        let m = self.plan.m;
        self.acc[e * m..(e + 1) * m].iter().all(|&c| c == self.plan.target)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            let total = self.shared_nodes.fetch_add(1024, Ordering::Relaxed) + 1024;
            if self.budget.is_some_and(|b| total > b) {
                self.exhausted.store(true, Ordering::Relaxed);
            }
        }
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.exhausted.store(true, Ordering::Relaxed);
            }
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    fn assign(&mut self, depth: usize, value: u64) -> bool {
        let plan = self.plan;
        let var = plan.order[depth];
        self.values[var] = value;
        let terms = &plan.by_depth[depth];
        let mut applied = 0;
        let mut ok = true;
        for t in terms {
            applied += 1;
            if !self.apply(t, 1) {
                ok = false;
                self.pruned_overshoot += 1;
                break;
            }
        }
        if ok && !plan.closing[depth].iter().all(|&e| self.entry_matches(e)) {
            ok = false;
            self.pruned_mismatch += 1;
        }
        if !ok {
            for t in &terms[..applied] {
                self.apply(t, -1);
            }
        }
        ok
    }

    fn unassign(&mut self, depth: usize) {
        for t in &self.plan.by_depth[depth] {
            self.apply(t, -1);
        }
    }

    fn dfs(&mut self, depth: usize) {
        if depth == self.plan.order.len() {
            self.solutions.push(self.values.clone());
            return;
        }
        for idx in 0..self.plan.domains[self.plan.order[depth]].len() {
            if !self.tick() {
                return;
            }
            let value = self.plan.domains[self.plan.order[depth]][idx];
            if self.assign(depth, value) {
                self.dfs(depth + 1);
                self.unassign(depth);
            }
        }
    }
}

/// Exhaustive (unless the budget runs out) search for matrices meeting every constraint.
pub fn search(spec: &SearchSpec) -> Result<SearchResult> {
    let start = Instant::now();
    let warnings = spec.warnings();
    let plan = Plan::new(spec)?;
    let m = plan.m;
    let mut stats = SearchStats {
        complete: true,
        ..Default::default()
    };
    if plan.layout.infeasible.is_some() || plan.domains.iter().any(Vec::is_empty) {
        stats.elapsed = start.elapsed();
        let mut warnings = warnings;
        warnings.extend(plan.layout.infeasible.clone());
        return Ok(SearchResult {
            solutions: Vec::new(),
            stats,
            warnings,
        });
    }

    let mut base = vec![0u16; plan.entries * m];
    let shared_nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let mut root = Worker {
        plan: &plan,
        values: vec![0; plan.layout.free.len()],
        acc: std::mem::take(&mut base),
        nodes: 0,
        pruned_overshoot: 0,
        pruned_mismatch: 0,
        solutions: Vec::new(),
        budget: spec.node_budget,
        shared_nodes: &shared_nodes,
        exhausted: &exhausted,
    };
    let mut feasible = true;
    for t in &plan.initial {
        feasible &= root.apply(t, 1);
    }
    let const_entries: Vec<usize> = (0..plan.entries)
        .filter(|e| !plan.closing.iter().flatten().any(|x| x == e))
        .collect();
    feasible &= const_entries.iter().all(|&e| root.entry_matches(e));

    let mut raw: Vec<Vec<u64>> = Vec::new();
    if feasible {
        if spec.jobs <= 1 || plan.order.is_empty() {
            root.dfs(0);
            stats.nodes = root.nodes;
            stats.pruned_overshoot = root.pruned_overshoot;
            stats.pruned_mismatch = root.pruned_mismatch;
            raw = root.solutions;
        } else {
            let first = plan.order[0];
            let acc0 = root.acc.clone();
            let run = |value: u64| {
                let mut w = Worker {
                    plan: &plan,
                    values: vec![0; plan.layout.free.len()],
                    acc: acc0.clone(),
                    nodes: 0,
                    pruned_overshoot: 0,
                    pruned_mismatch: 0,
                    solutions: Vec::new(),
                    budget: spec.node_budget,
                    shared_nodes: &shared_nodes,
                    exhausted: &exhausted,
                };
                if w.tick() && w.assign(0, value) {
                    w.dfs(1);
                }
                (w.nodes, w.pruned_overshoot, w.pruned_mismatch, w.solutions)
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(spec.jobs)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            let parts: Vec<_> = pool.install(|| plan.domains[first].par_iter().map(|&v| run(v)).collect());
            for (nodes, po, pm, sols) in parts {
                stats.nodes += nodes;
                stats.pruned_overshoot += po;
                stats.pruned_mismatch += pm;
                raw.extend(sols);
            }
        }
    }
    stats.complete = !exhausted.load(Ordering::Relaxed);

    let mut solutions: Vec<CompactMatrix> = raw.iter().map(|vals| assemble(&plan, vals)).collect();
    solutions.sort();
    solutions.dedup();
    stats.elapsed = start.elapsed();
    Ok(SearchResult {
        solutions,
        stats,
        warnings,
    })
}

fn assemble(plan: &Plan, values: &[u64]) -> CompactMatrix {
    let m = plan.m;
    let mut rows = Vec::with_capacity(BLOCKS);
    for i in 0..BLOCKS {
        let mut row = Vec::with_capacity(BLOCKS);
        for j in 0..BLOCKS {
            let (root, shift) = root_of(i, j);
            let p = match plan.layout.role(root.0, root.1) {
                EntryRole::Fixed(p) => p.shift(shift),
                EntryRole::Free { var, .. } => CycPoly::from_mask(m, rot(values[*var], shift, m)),
                EntryRole::Derived { .. } => unreachable!(),
            };
            row.push(p);
        }
        rows.push(row);
    }
    CompactMatrix::from_rows(rows).expect("9x9 grid over one modulus")
}

/// Checks a candidate against every constraint using exact ring arithmetic.
pub fn satisfies_constraints(a: &CompactMatrix, spec: &SearchSpec) -> bool {
    let n = spec.n;
    let m = spec.modulus();
    if a.block_dim() != BLOCKS || a.modulus() != m || !a.is_binary() {
        return false;
    }
    if (0..BLOCKS).any(|i| !a.get(i, i).constant_term().is_zero()) {
        return false;
    }
    if a.eval_at_one() != spec.target_c {
        return false;
    }
    let (Ok(p), Ok(q)) = (make_p(n), make_q(n)) else {
        return false;
    };
    if a.get(0, 1) != &p || a.get(6, 1) != &CycPoly::one(m) {
        return false;
    }
    for j in 0..BLOCKS {
        if a.get(7, j) != a.get(6, j) || a.get(8, j) != a.get(6, j) {
            return false;
        }
        for i in 1..6 {
            if a.get(i, j) != &a.get(i - 1, j).shift(1) {
                return false;
            }
        }
    }
    for i in 0..BLOCKS {
        if a.get(i, 2) != &a.get(i, 1).shift(1) || a.get(i, 7) != &a.get(i, 8).shift(1) {
            return false;
        }
    }
    let Ok(sq) = a.mul(a) else { return false };
    let Ok(w) = sq.add(&a.scalar(3)) else { return false };
    w == CompactMatrix::filled(BLOCKS, &q.scalar_mul(2 * n as i64 + 4))
}
