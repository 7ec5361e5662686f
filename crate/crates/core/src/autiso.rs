//! Individualization-refinement for digraphs: equitable refinement, canonical
//! forms, isomorphism tests and automorphism groups.
//!
//! The search tree follows the usual scheme. Every node is an equitable ordered
//! partition; children individualize one vertex of the first smallest
//! non-singleton cell. Each node carries the exact refinement trace, so nodes are
//! compared without hashing. Leaves are ranked by (trace sequence, relabelled
//! adjacency) and the largest one is the canonical labelling. Equal leaves give
//! automorphisms, which prune siblings through orbits of the pointwise
//! stabilizer of the current prefix. The group order comes from a Schreier-Sims
//! stabilizer chain built on the discovered generators.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::blockmat::BinaryMatrix;
use crate::dsrg::{popcount, Digraph};
use crate::error::{Error, Result};

/// Vertex permutation: `perm[u]` is the image of `u`.
pub type Perm = Vec<usize>;

/// Ordered partition of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    pub fn unit(v: usize) -> Self {
        Coloring {
            classes: if v == 0 { vec![] } else { vec![(0..v).collect()] },
        }
    }

    pub fn discrete(v: usize) -> Self {
        Coloring {
            classes: (0..v).map(|u| vec![u]).collect(),
        }
    }

    /// Fails unless the classes are non-empty, disjoint and cover `0..v`.
    pub fn new(v: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; v];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::Domain("empty color class".into()));
            }
            for &u in class {
                if u >= v || std::mem::replace(&mut seen[u], true) {
                    return Err(Error::Domain(format!("vertex {u} out of range or repeated")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Domain("coloring does not cover every vertex".into()));
        }
        Ok(Coloring { classes })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every vertex.
    pub fn class_of(&self) -> Vec<usize> {
        let v = self.classes.iter().map(Vec::len).sum();
        let mut out = vec![0; v];
        for (i, class) in self.classes.iter().enumerate() {
            for &u in class {
                out[u] = i;
            }
        }
        out
    }

    /// Same classes in the same order, ignoring the order inside each class.
    pub fn same_partition(&self, other: &Self) -> bool {
        self.classes.len() == other.classes.len()
            && self.classes.iter().zip(&other.classes).all(|(a, b)| {
                let (mut a, mut b) = (a.clone(), b.clone());
                a.sort_unstable();
                b.sort_unstable();
                a == b
            })
    }
}

/// Ordered partition stored as a permutation of the vertices with cells at fixed
/// start positions.
#[derive(Clone, Debug)]
struct Partition {
    lab: Vec<usize>,
    pos: Vec<usize>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<usize>,
    /// Cell length, meaningful only at cell starts.
    len_at: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn from_coloring(c: &Coloring, v: usize) -> Self {
        let mut p = Partition {
            lab: Vec::with_capacity(v),
            pos: vec![0; v],
            cell_of: vec![0; v],
            len_at: vec![0; v],
            cells: c.len(),
        };
        for class in c.classes() {
            let start = p.lab.len();
            p.len_at[start] = class.len();
            for &u in class {
                p.pos[u] = p.lab.len();
                p.cell_of[u] = start;
                p.lab.push(u);
            }
        }
        p
    }

    fn to_coloring(&self) -> Coloring {
        let mut classes = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.lab.len() {
            let l = self.len_at[s];
            classes.push(self.lab[s..s + l].to_vec());
            s += l;
        }
        Coloring { classes }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.lab.len() {
            out.push(s);
            s += self.len_at[s];
        }
        out
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        self.cell_starts()
            .into_iter()
            .filter(|&s| self.len_at[s] > 1)
            .min_by_key(|&s| (self.len_at[s], s))
    }

    /// Moves `u` to the front of its cell and splits it off as a singleton.
    fn individualize(&mut self, u: usize) -> usize {
        let start = self.cell_of[u];
        let len = self.len_at[start];
        debug_assert!(len > 1);
        let (pu, other) = (self.pos[u], self.lab[start]);
        self.lab.swap(start, pu);
        self.pos[other] = pu;
        self.pos[u] = start;
        self.len_at[start] = 1;
        self.len_at[start + 1] = len - 1;
        for p in start + 1..start + len {
            self.cell_of[self.lab[p]] = start + 1;
        }
        self.cells += 1;
        start
    }

    /// Equitable refinement from the given splitter queue; appends the trace.
    fn refine(&mut self, g: &Digraph, initial: &[usize], trace: &mut Vec<u32>) {
        let v = self.lab.len();
        let words = g.words();
        let mut queued = vec![false; v];
        let mut queue = VecDeque::new();
        for &s in initial {
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut splitter = vec![0u64; words];
        let mut keys: Vec<(u32, u32, usize)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if self.is_discrete() {
                break;
            }
            splitter.iter_mut().for_each(|x| *x = 0);
            for &u in &self.lab[w..w + self.len_at[w]] {
                splitter[u / 64] |= 1 << (u % 64);
            }
            trace.push(u32::MAX);
            trace.push(w as u32);
            for x in self.cell_starts() {
                let len = self.len_at[x];
                if len == 1 {
                    continue;
                }
                keys.clear();
                for &u in &self.lab[x..x + len] {
                    let out = and_count(g.out_row(u), &splitter);
                    let inn = and_count(g.in_row(u), &splitter);
                    keys.push((out, inn, u));
                }
                if keys.iter().all(|k| (k.0, k.1) == (keys[0].0, keys[0].1)) {
                    continue;
                }
                keys.sort_by_key(|&(o, i, _)| (o, i));
                trace.push(x as u32);
                let mut sub_starts = Vec::new();
                let mut i = 0;
                while i < len {
                    let key = (keys[i].0, keys[i].1);
                    let mut j = i;
                    while j < len && (keys[j].0, keys[j].1) == key {
                        j += 1;
                    }
                    sub_starts.push((x + i, j - i));
                    trace.extend([key.0, key.1, (j - i) as u32]);
                    i = j;
                }
                for (p, &(_, _, u)) in keys.iter().enumerate() {
                    self.lab[x + p] = u;
                    self.pos[u] = x + p;
                }
                for &(s, l) in &sub_starts {
                    self.len_at[s] = l;
                    for p in s..s + l {
                        self.cell_of[self.lab[p]] = s;
                    }
                }
                self.cells += sub_starts.len() - 1;
                if queued[x] {
                    for &(s, _) in &sub_starts[1..] {
                        queued[s] = true;
                        queue.push_back(s);
                    }
                } else {
                    let largest = sub_starts.iter().max_by_key(|&&(s, l)| (l, std::cmp::Reverse(s))).unwrap().0;
                    for &(s, _) in &sub_starts {
                        if s != largest {
                            queued[s] = true;
                            queue.push_back(s);
                        }
                    }
                }
            }
        }
        trace.push(u32::MAX - 1);
        trace.push(self.cells as u32);
    }
}

fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Coarsest equitable refinement of `c` with respect to out- and in-neighbour counts.
pub fn refine(g: &Digraph, c: &Coloring) -> Coloring {
    let mut p = Partition::from_coloring(c, g.order());
    let starts = p.cell_starts();
    p.refine(g, &starts, &mut Vec::new());
    p.to_coloring()
}

#[derive(Clone, Debug)]
struct Leaf {
    lab: Vec<usize>,
    path: Vec<usize>,
    traces: Vec<Vec<u32>>,
    graph: Vec<u64>,
}

/// Adjacency rows of the digraph relabelled so that vertex `lab[p]` becomes `p`.
fn relabelled_rows(g: &Digraph, lab: &[usize]) -> Vec<u64> {
    let v = g.order();
    let words = g.words();
    let mut pos = vec![0; v];
    for (p, &u) in lab.iter().enumerate() {
        pos[u] = p;
    }
    let mut rows = vec![0u64; v * words];
    for (p, &u) in lab.iter().enumerate() {
        for w in g.out_neighbors(u) {
            let q = pos[w];
            rows[p * words + q / 64] |= 1 << (q % 64);
        }
    }
    rows
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

enum Flow {
    Continue,
    /// Abandon everything below the node at this depth.
    BackTo(usize),
}

/// Union-find over vertices, used for orbit pruning.
struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(v: usize) -> Self {
        Orbits { parent: (0..v).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

struct Search<'g> {
    g: &'g Digraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Perm>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'g> Search<'g> {
    fn stabilizer_orbits(&self, prefix: &[usize]) -> Orbits {
        let mut orbits = Orbits::new(self.g.order());
        for gen in &self.generators {
            if prefix.iter().all(|&u| gen[u] == u) {
                for (u, &w) in gen.iter().enumerate() {
                    orbits.union(u, w);
                }
            }
        }
        orbits
    }

    fn record_automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            perm[a] = b;
        }
        if perm.iter().enumerate().any(|(i, &x)| i != x) {
            self.generators.push(perm);
        }
    }

    fn visit(
        &mut self,
        part: &Partition,
        path: &mut Vec<usize>,
        traces: &mut Vec<Vec<u32>>,
    ) -> Result<Flow> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::Budget(b));
            }
        }
        let depth = path.len();

        if part.is_discrete() {
            return Ok(self.visit_leaf(part, path, traces));
        }

        let target = part.target_cell().expect("non-discrete partition has a non-singleton cell");
        let cell: Vec<usize> = part.lab[target..target + part.len_at[target]].to_vec();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &cell {
            if !explored.is_empty() {
                let mut orbits = self.stabilizer_orbits(path);
                let rw = orbits.find(w);
                if explored.iter().any(|&e| orbits.find(e) == rw) {
                    continue;
                }
            }
            explored.push(w);

            let mut child = part.clone();
            let s = child.individualize(w);
            let mut trace = vec![s as u32];
            child.refine(self.g, &[s], &mut trace);

            path.push(w);
            traces.push(trace);
            let flow = if self.worth_exploring(traces) {
                self.visit(&child, path, traces)?
            } else {
                Flow::Continue
            };
            path.pop();
            traces.pop();

            if let Flow::BackTo(k) = flow {
                if k < depth {
                    return Ok(Flow::BackTo(k));
                }
            }
        }
        Ok(Flow::Continue)
    }

    /// A node is kept if it may still lead to a leaf equivalent to the first
    /// leaf or to a leaf at least as large as the current best one.
    fn worth_exploring(&self, traces: &[Vec<u32>]) -> bool {
        let (Some(first), Some(best)) = (&self.first, &self.best) else {
            return true;
        };
        let d = traces.len();
        if first.traces.len() >= d && first.traces[..d] == *traces {
            return true;
        }
        let best_prefix = &best.traces[..d.min(best.traces.len())];
        traces.cmp(best_prefix) != Ordering::Less
    }

    fn visit_leaf(&mut self, part: &Partition, path: &[usize], traces: &[Vec<u32>]) -> Flow {
        let graph = relabelled_rows(self.g, &part.lab);
        let leaf = Leaf {
            lab: part.lab.clone(),
            path: path.to_vec(),
            traces: traces.to_vec(),
            graph,
        };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return Flow::Continue;
        };
        if first.traces == leaf.traces && first.graph == leaf.graph {
            let (from, back) = (first.lab.clone(), common_prefix(&first.path, path));
            self.record_automorphism(&from, &leaf.lab);
            return Flow::BackTo(back);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.traces.cmp(&best.traces).then_with(|| leaf.graph.cmp(&best.graph)) {
            Ordering::Equal => {
                let (from, back) = (best.lab.clone(), common_prefix(&best.path, path));
                self.record_automorphism(&from, &leaf.lab);
                Flow::BackTo(back)
            }
            Ordering::Greater => {
                self.best = Some(leaf);
                Flow::Continue
            }
            Ordering::Less => Flow::Continue,
        }
    }
}

/// Everything the search tree produces for one digraph.
#[derive(Clone, Debug)]
pub struct Labelling {
    /// `lab[p]` is the vertex placed at position `p` of the canonical form.
    pub lab: Vec<usize>,
    pub canonical: BinaryMatrix,
    pub generators: Vec<Perm>,
    pub nodes: u64,
}

impl Labelling {
    /// Map taking each vertex to its canonical position.
    pub fn to_canonical(&self) -> Perm {
        let mut pos = vec![0; self.lab.len()];
        for (p, &u) in self.lab.iter().enumerate() {
            pos[u] = p;
        }
        pos
    }
}

/// Runs the individualization-refinement search; `budget` caps visited nodes.
pub fn canonical_labelling(g: &Digraph, budget: Option<u64>) -> Result<Labelling> {
    let v = g.order();
    if v == 0 {
        return Ok(Labelling {
            lab: vec![],
            canonical: BinaryMatrix::zeros(0),
            generators: vec![],
            nodes: 0,
        });
    }
    let mut root = Partition::from_coloring(&Coloring::unit(v), v);
    let mut trace = Vec::new();
    root.refine(g, &[0], &mut trace);
    let mut search = Search {
        g,
        first: None,
        best: None,
        generators: Vec::new(),
        nodes: 0,
        budget,
    };
    search.visit(&root, &mut Vec::new(), &mut vec![trace])?;
    let best = search.best.expect("search reaches at least one leaf");
    let mut canonical = BinaryMatrix::zeros(v);
    let words = g.words();
    for p in 0..v {
        for q in 0..v {
            if best.graph[p * words + q / 64] >> (q % 64) & 1 == 1 {
                canonical.set(p, q, true);
            }
        }
    }
    Ok(Labelling {
        lab: best.lab,
        canonical,
        generators: search.generators,
        nodes: search.nodes,
    })
}

/// Relabelling of `g` shared by every digraph isomorphic to it.
pub fn canonical_form(g: &Digraph) -> BinaryMatrix {
    canonical_labelling(g, None).expect("unbounded search cannot exhaust a budget").canonical
}

/// `Some(perm)` with `perm` mapping `g1` arc-exactly onto `g2`, or `None`.
pub fn are_isomorphic(g1: &Digraph, g2: &Digraph) -> Option<Perm> {
    if g1.order() != g2.order() || g1.arc_count() != g2.arc_count() {
        return None;
    }
    let l1 = canonical_labelling(g1, None).ok()?;
    let l2 = canonical_labelling(g2, None).ok()?;
    if l1.canonical != l2.canonical {
        return None;
    }
    let mut perm = vec![0; g1.order()];
    for (&a, &b) in l1.lab.iter().zip(&l2.lab) {
        perm[a] = b;
    }
    Some(perm)
}

/// Exact group order plus the generators it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutResult {
    pub order: BigUint,
    pub generators: Vec<Perm>,
}

pub fn automorphism_group(g: &Digraph) -> AutResult {
    automorphism_group_with_budget(g, None).expect("unbounded search cannot exhaust a budget")
}

pub fn automorphism_group_with_budget(g: &Digraph, budget: Option<u64>) -> Result<AutResult> {
    let lab = canonical_labelling(g, budget)?;
    let chain = StabChain::new(g.order(), &lab.generators);
    Ok(AutResult {
        order: chain.order(),
        generators: lab.generators,
    })
}

/// True iff `perm` maps arcs to arcs (and hence non-arcs to non-arcs).
pub fn is_automorphism(g: &Digraph, perm: &[usize]) -> bool {
    perm.len() == g.order() && g.arcs().all(|(a, b)| g.has_arc(perm[a], perm[b]))
}

/// One line: space-separated 1-based images of `1..v`.
pub fn format_perm(perm: &[usize]) -> String {
    perm.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_perm(line: &str) -> Result<Perm> {
    let perm: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::parse(0, format!("bad permutation {line:?}")))?;
    let mut seen = vec![false; perm.len()];
    for &x in &perm {
        if x >= perm.len() || std::mem::replace(&mut seen[x], true) {
            return Err(Error::parse(0, "not a permutation"));
        }
    }
    Ok(perm)
}

/// Base and strong generating set computed with the Schreier-Sims algorithm.
pub struct StabChain {
    degree: usize,
    base: Vec<usize>,
    /// Generators of the pointwise stabilizer of `base[..i]`.
    strong: Vec<Vec<Perm>>,
    /// `transversal[i][b]`: a permutation taking `base[i]` to `b`, if `b` is in the orbit.
    transversal: Vec<Vec<Option<Perm>>>,
}

fn compose(a: &[usize], b: &[usize]) -> Perm {
    // first a, then b
    a.iter().map(|&x| b[x]).collect()
}

fn inverse(a: &[usize]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn is_identity(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x)
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            base: Vec::new(),
            strong: Vec::new(),
            transversal: Vec::new(),
        };
        for gen in generators.iter().filter(|g| !is_identity(g)) {
            if gen.len() != degree {
                panic!("generator of degree {} in a group of degree {degree}", gen.len());
            }
            if chain.base.iter().all(|&b| gen[b] == b) {
                let moved = (0..degree).find(|&i| gen[i] != i).unwrap();
                chain.push_level(moved);
            }
            chain.strong[0].push(gen.clone());
        }
        for i in 0..chain.base.len() {
            chain.strong[i] = generators
                .iter()
                .filter(|g| !is_identity(g) && chain.base[..i].iter().all(|&b| g[b] == b))
                .cloned()
                .collect();
            chain.rebuild_transversal(i);
        }
        chain.complete();
        chain
    }

    fn push_level(&mut self, point: usize) {
        self.base.push(point);
        self.strong.push(Vec::new());
        self.transversal.push(vec![None; self.degree]);
    }

    fn rebuild_transversal(&mut self, i: usize) {
        let b = self.base[i];
        let mut t: Vec<Option<Perm>> = vec![None; self.degree];
        t[b] = Some((0..self.degree).collect());
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            let ux = t[x].clone().unwrap();
            for s in &self.strong[i] {
                let y = s[x];
                if t[y].is_none() {
                    t[y] = Some(compose(&ux, s));
                    queue.push_back(y);
                }
            }
        }
        self.transversal[i] = t;
    }

    /// Strips `g` through levels `from..`; returns the residue and the level it stopped at.
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for i in from..self.base.len() {
            let beta = g[self.base[i]];
            match &self.transversal[i][beta] {
                None => return (g, i),
                Some(u) => g = compose(&g, &inverse(u)),
            }
        }
        (g, self.base.len())
    }

    fn complete(&mut self) {
        let mut i = self.base.len() as isize - 1;
        'levels: while i >= 0 {
            let lvl = i as usize;
            let orbit: Vec<usize> = (0..self.degree).filter(|&b| self.transversal[lvl][b].is_some()).collect();
            for &beta in &orbit {
                let u_beta = self.transversal[lvl][beta].clone().unwrap();
                for s_idx in 0..self.strong[lvl].len() {
                    let s = &self.strong[lvl][s_idx];
                    let image = s[beta];
                    let u_image = self.transversal[lvl][image].as_ref().unwrap();
                    let h = compose(&compose(&u_beta, s), &inverse(u_image));
                    if is_identity(&h) {
                        continue;
                    }
                    let (residue, j) = self.sift(h, lvl + 1);
                    if is_identity(&residue) {
                        continue;
                    }
                    if j == self.base.len() {
                        let moved = (0..self.degree).find(|&x| residue[x] != x).unwrap();
                        self.push_level(moved);
                    }
                    for l in lvl + 1..=j {
                        self.strong[l].push(residue.clone());
                        self.rebuild_transversal(l);
                    }
                    i = j as isize;
                    continue 'levels;
                }
            }
            i -= 1;
        }
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.transversal.iter().map(|t| t.iter().filter(|x| x.is_some()).count()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.orbit_sizes().into_iter().fold(BigUint::one(), |acc, s| acc * BigUint::from(s))
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        g.len() == self.degree && is_identity(&self.sift(g.to_vec(), 0).0)
    }
}

/// One isomorphism class within a classified collection.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    /// Index (into the input) of the first member.
    pub representative: usize,
    pub members: Vec<usize>,
    pub aut_order: BigUint,
    pub canonical: BinaryMatrix,
}

impl ClassInfo {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl fmt::Display for ClassInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size {} aut order {}", self.size(), self.aut_order)
    }
}

/// Partitions `graphs` into isomorphism classes sorted by (aut order, canonical form).
pub fn classify(graphs: &[Digraph]) -> Vec<ClassInfo> {
    let mut by_form: BTreeMap<BinaryMatrix, (Vec<usize>, Vec<Perm>)> = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        let lab = canonical_labelling(g, None).expect("unbounded search");
        by_form
            .entry(lab.canonical)
            .or_insert_with(|| (Vec::new(), lab.generators))
            .0
            .push(i);
    }
    let mut classes: Vec<ClassInfo> = by_form
        .into_iter()
        .map(|(canonical, (members, gens))| ClassInfo {
            representative: members[0],
            aut_order: StabChain::new(canonical.order(), &gens).order(),
            members,
            canonical,
        })
        .collect();
    classes.sort_by(|a, b| a.aut_order.cmp(&b.aut_order).then_with(|| a.canonical.cmp(&b.canonical)));
    classes
}

/// Out- and in-degree pairs, sorted; a cheap isomorphism invariant.
pub fn degree_profile(g: &Digraph) -> Vec<(usize, usize)> {
    let mut d: Vec<(usize, usize)> = (0..g.order())
        .map(|u| (popcount(g.out_row(u)), popcount(g.in_row(u))))
        .collect();
    d.sort_unstable();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmat::worked_example;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn refine_regular_keeps_unit() {
        let g = Digraph::from_matrix(&worked_example()).unwrap();
        assert_eq!(refine(&g, &Coloring::unit(8)), Coloring::unit(8));
    }

    #[test]
    fn refine_isolates_source() {
        // 0 is a source feeding a directed 3-cycle.
        let g = Digraph::from_arcs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]).unwrap();
        let r = refine(&g, &Coloring::unit(4));
        assert!(r.classes().iter().any(|c| c == &vec![0]));
        let again = refine(&g, &r);
        assert!(again.same_partition(&r));
    }

    #[test]
    fn three_cycle_group() {
        let aut = automorphism_group(&cycle(3));
        assert_eq!(aut.order, BigUint::from(3u32));
        let aut = automorphism_group(&cycle(7));
        assert_eq!(aut.order, BigUint::from(7u32));
    }

    #[test]
    fn empty_graph_is_symmetric() {
        let aut = automorphism_group(&Digraph::empty(5));
        assert_eq!(aut.order, BigUint::from(120u32));
    }

    #[test]
    fn schreier_sims_on_known_groups() {
        // S_6 from a transposition and a 6-cycle.
        let t: Perm = vec![1, 0, 2, 3, 4, 5];
        let c: Perm = vec![1, 2, 3, 4, 5, 0];
        let chain = StabChain::new(6, &[t.clone(), c.clone()]);
        assert_eq!(chain.order(), BigUint::from(720u32));
        // Dihedral group of order 12.
        let r: Perm = vec![5, 4, 3, 2, 1, 0];
        let chain = StabChain::new(6, &[c, r]);
        assert_eq!(chain.order(), BigUint::from(12u32));
        assert!(!chain.contains(&t));
        assert_eq!(StabChain::new(4, &[]).order(), BigUint::from(1u32));
    }

    #[test]
    fn perm_text() {
        let p = vec![2, 0, 1];
        assert_eq!(format_perm(&p), "3 1 2");
        assert_eq!(parse_perm("3 1 2").unwrap(), p);
        assert!(parse_perm("1 1 2").is_err());
        assert!(parse_perm("0 1").is_err());
    }

    #[test]
    fn different_orders_not_isomorphic() {
        assert!(are_isomorphic(&cycle(3), &cycle(4)).is_none());
        let g = cycle(5);
        let perm = vec![3, 0, 4, 1, 2];
        let h = g.relabel(&perm);
        let w = are_isomorphic(&g, &h).unwrap();
        assert_eq!(g.relabel(&w), h);
    }
}
