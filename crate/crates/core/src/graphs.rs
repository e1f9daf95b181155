//! Finite simple graphs, F-coloured graphs and the cycle machinery built on
//! them.
//!
//! Pattern colours are the pattern's vertex indices `0..|F|`. For K3
//! colourings the colour names 1, 2, 3 used in the literature correspond to
//! indices 0, 1, 2, and the cyclic colouring of the two-way infinite path
//! gives level `l` the colour `l mod 3`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of enumerated cycles.
pub const DEFAULT_MAX_CYCLES: usize = 100_000;
/// Default cap on the length of enumerated cycles.
pub const DEFAULT_MAX_CYCLE_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("sigma has {got} entries for {expected} host vertices")]
    SigmaLength { expected: usize, got: usize },
    #[error("vertex {vertex} has colour {colour} outside the pattern")]
    ColourOutOfRange { vertex: usize, colour: usize },
    #[error("host edge ({u}, {v}) maps to colours ({cu}, {cv}), which is not a pattern edge")]
    NotAHomomorphism {
        u: usize,
        v: usize,
        cu: usize,
        cv: usize,
    },
    #[error("blow-up size for vertex {0} is zero")]
    ZeroSize(usize),
    #[error("expected {expected} blow-up sizes, got {got}")]
    SizesLength { expected: usize, got: usize },
    #[error("consecutive walk vertices {0} and {1} are not adjacent")]
    NotAWalk(usize, usize),
    #[error("pattern is not a triangle on colours 0, 1, 2")]
    PatternNotK3,
    #[error("vertex sequence is not a simple cycle of the host")]
    NotACycle,
    #[error("ordering is not an injection into 1..=1000000: {0}")]
    BadOrdering(String),
    #[error("cycle enumeration hit its caps; the answer is inconclusive")]
    Truncated,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Finite simple graph on vertices `0..n`; immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    /// Sorted, each pair `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        Graph::new(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// Like [`Graph::new`] but silently merges repeated edges.
    pub fn from_edge_set(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i+5`.
    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, e).expect("Petersen graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// A proper 2-colouring by breadth-first search, if one exists.
    pub fn two_colouring(&self) -> Option<Vec<usize>> {
        let mut side = vec![usize::MAX; self.n];
        for s in 0..self.n {
            if side[s] != usize::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == usize::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    /// All triangles `(a, b, c)` with `a < b < c`.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for &c in &self.adj[b] {
                if c > b && self.has_edge(a, c) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Subgraph induced by `keep`; vertex `i` of the result is `keep[i]`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u].min(pos[v]), pos[u].max(pos[v])))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Graph::from_sorted(keep.len(), edges)
    }
}

#[derive(Serialize, Deserialize)]
struct ColouredRepr {
    pattern: Graph,
    host: Graph,
    sigma: Vec<usize>,
}

/// A host graph `H` with a homomorphism `sigma: H -> F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColouredRepr", into = "ColouredRepr")]
pub struct ColouredGraph {
    host: Graph,
    pattern: Graph,
    sigma: Vec<usize>,
}

impl TryFrom<ColouredRepr> for ColouredGraph {
    type Error = GraphError;

    fn try_from(r: ColouredRepr) -> Result<Self, Self::Error> {
        ColouredGraph::new(r.host, r.pattern, r.sigma)
    }
}

impl From<ColouredGraph> for ColouredRepr {
    fn from(g: ColouredGraph) -> Self {
        ColouredRepr {
            pattern: g.pattern,
            host: g.host,
            sigma: g.sigma,
        }
    }
}

impl ColouredGraph {
    /// Validates that `sigma` is a homomorphism; reports the first bad edge.
    pub fn new(host: Graph, pattern: Graph, sigma: Vec<usize>) -> Result<Self, GraphError> {
        if sigma.len() != host.n() {
            return Err(GraphError::SigmaLength {
                expected: host.n(),
                got: sigma.len(),
            });
        }
        if let Some((vertex, &colour)) = sigma.iter().enumerate().find(|(_, &c)| c >= pattern.n()) {
            return Err(GraphError::ColourOutOfRange { vertex, colour });
        }
        for &(u, v) in host.edges() {
            if !pattern.has_edge(sigma[u], sigma[v]) {
                return Err(GraphError::NotAHomomorphism {
                    u,
                    v,
                    cu: sigma[u],
                    cv: sigma[v],
                });
            }
        }
        Ok(ColouredGraph {
            host,
            pattern,
            sigma,
        })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn colour(&self, v: usize) -> usize {
        self.sigma[v]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.pattern.n()];
        for &c in &self.sigma {
            hit[c] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Host vertices of colour `c`, in increasing order.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.host.n()).filter(|&v| self.sigma[v] == c).collect()
    }

    /// Pattern is a triangle, i.e. colours are 0, 1, 2 all pairwise adjacent.
    pub fn is_k3_coloured(&self) -> bool {
        self.pattern.n() == 3 && self.pattern.edge_count() == 3
    }

    fn require_k3(&self) -> Result<(), GraphError> {
        if self.is_k3_coloured() {
            Ok(())
        } else {
            Err(GraphError::PatternNotK3)
        }
    }

    /// Replaces every host vertex `v` by `sizes[v]` independent copies, laid
    /// out consecutively in vertex order; copies of adjacent vertices are
    /// completely joined and inherit the colour.
    pub fn blow_up(&self, sizes: &[usize]) -> Result<ColouredGraph, GraphError> {
        let n = self.host.n();
        if sizes.len() != n {
            return Err(GraphError::SizesLength {
                expected: n,
                got: sizes.len(),
            });
        }
        if let Some(v) = sizes.iter().position(|&s| s == 0) {
            return Err(GraphError::ZeroSize(v));
        }
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for &s in sizes {
            offset.push(offset.last().unwrap() + s);
        }
        let mut edges = Vec::new();
        for &(u, v) in self.host.edges() {
            for a in offset[u]..offset[u + 1] {
                for b in offset[v]..offset[v + 1] {
                    edges.push((a, b));
                }
            }
        }
        let sigma = (0..n).flat_map(|v| std::iter::repeat_n(self.sigma[v], sizes[v])).collect();
        let host = Graph::new(offset[n], edges)?;
        ColouredGraph::new(host, self.pattern.clone(), sigma)
    }

    /// Wrap of a walk: `+1` per step whose colour goes up by one mod 3,
    /// `-1` otherwise. K3 patterns only.
    pub fn wrap(&self, walk: &[usize]) -> Result<i64, GraphError> {
        self.require_k3()?;
        let mut total = 0;
        for w in walk.windows(2) {
            if !self.host.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAWalk(w[0], w[1]));
            }
            total += self.edge_wrap(w[0], w[1]);
        }
        Ok(total)
    }

    /// Wrap of a cycle given as its vertex sequence (the closing step is implied).
    pub fn cycle_wrap(&self, cycle: &[usize]) -> Result<i64, GraphError> {
        let mut closed = cycle.to_vec();
        if let Some(&first) = cycle.first() {
            closed.push(first);
        }
        self.wrap(&closed)
    }

    fn edge_wrap(&self, u: usize, v: usize) -> i64 {
        if (self.sigma[u] + 1) % 3 == self.sigma[v] {
            1
        } else {
            -1
        }
    }

    /// Colour homomorphism to the cyclically 3-coloured two-way infinite path.
    ///
    /// On success returns a level per vertex: adjacent vertices differ by one
    /// and `level mod 3` is the vertex colour. The lowest vertex of each
    /// component sits at level equal to its colour index. On failure returns
    /// a simple cycle with nonzero wrap.
    pub fn hom_to_coloured_line(&self) -> Result<LineHom, GraphError> {
        self.require_k3()?;
        let n = self.host.n();
        let mut level = vec![i64::MIN; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        for root in 0..n {
            if level[root] != i64::MIN {
                continue;
            }
            level[root] = self.sigma[root] as i64;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &w in self.host.neighbours(u) {
                    let want = level[u] + self.edge_wrap(u, w);
                    if level[w] == i64::MIN {
                        level[w] = want;
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    } else if level[w] != want {
                        let cycle = tree_cycle(u, w, &parent, &depth);
                        let wrap = self.cycle_wrap(&cycle)?;
                        return Ok(LineHom::Wrapped { cycle, wrap });
                    }
                }
            }
        }
        Ok(LineHom::Levels(level))
    }
}

/// Outcome of [`ColouredGraph::hom_to_coloured_line`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineHom {
    Levels(Vec<i64>),
    Wrapped { cycle: Vec<usize>, wrap: i64 },
}

/// The cycle formed by non-tree edge `u -- w` and the BFS tree paths.
fn tree_cycle(u: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    // left: u .. lca, right: w .. lca. Cycle: lca .. u, w .. (before lca).
    right.pop();
    left.reverse();
    left.extend(right);
    left
}

/// Injective assignment of positive integers to pattern vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ColourOrdering(Vec<i64>);

impl TryFrom<Vec<i64>> for ColourOrdering {
    type Error = GraphError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        ColourOrdering::new(v)
    }
}

impl From<ColourOrdering> for Vec<i64> {
    fn from(c: ColourOrdering) -> Self {
        c.0
    }
}

impl ColourOrdering {
    pub fn new(values: Vec<i64>) -> Result<Self, GraphError> {
        if values.iter().any(|&x| !(1..=1_000_000).contains(&x)) {
            return Err(GraphError::BadOrdering(format!("{values:?} leaves 1..=1000000")));
        }
        let distinct: BTreeSet<_> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(GraphError::BadOrdering(format!("{values:?} repeats a value")));
        }
        Ok(ColourOrdering(values))
    }

    /// `c(i) = i + 1`.
    pub fn identity(k: usize) -> Self {
        ColourOrdering((1..=k as i64).collect())
    }

    /// Every ordering with values `{1..k}`, in lexicographic order.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut perm: Vec<i64> = (1..=k as i64).collect();
        permutations(&mut perm, 0, &mut out);
        out.sort();
        out.into_iter().map(ColourOrdering).collect()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn value(&self, colour: usize) -> i64 {
        self.0[colour]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn permutations(v: &mut Vec<i64>, i: usize, out: &mut Vec<Vec<i64>>) {
    if i == v.len() {
        out.push(v.clone());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, out);
        v.swap(i, j);
    }
}

/// Outcome of [`hom_exists`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomSearch {
    Found(Vec<usize>),
    NotFound,
    BudgetExhausted,
}

impl HomSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, HomSearch::Found(_))
    }
}

/// Searches a homomorphism `source -> target` (`|target| <= 64`).
///
/// Backtracking with forward checking on candidate bitsets; the next vertex
/// is the one with fewest candidates, ties broken by higher degree then
/// lower index. `budget` caps the number of tentative assignments.
pub fn hom_exists(source: &Graph, target: &Graph, budget: u64) -> HomSearch {
    let n = source.n();
    let t = target.n();
    assert!(t <= 64, "target graphs are limited to 64 vertices");
    if n == 0 {
        return HomSearch::Found(Vec::new());
    }
    if t == 0 {
        return HomSearch::NotFound;
    }
    let all: u64 = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    let tadj: Vec<u64> = (0..t)
        .map(|a| target.neighbours(a).iter().fold(0u64, |m, &b| m | 1 << b))
        .collect();

    let mut cand = vec![all; n];
    let mut assigned = vec![usize::MAX; n];
    let mut trail: Vec<(usize, u64)> = Vec::new();
    struct Frame {
        v: usize,
        untried: u64,
        mark: usize,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut spent = 0u64;

    let pick = |cand: &[u64], assigned: &[usize]| -> Option<usize> {
        (0..n)
            .filter(|&v| assigned[v] == usize::MAX)
            .min_by_key(|&v| (cand[v].count_ones(), std::cmp::Reverse(source.degree(v)), v))
    };

    let mut next = pick(&cand, &assigned);
    loop {
        if let Some(v) = next.take() {
            stack.push(Frame {
                v,
                untried: cand[v],
                mark: trail.len(),
            });
        }
        let Some(frame) = stack.last_mut() else {
            return HomSearch::NotFound;
        };
        // Undo the previous attempt at this frame.
        while trail.len() > frame.mark {
            let (w, old) = trail.pop().unwrap();
            cand[w] = old;
        }
        assigned[frame.v] = usize::MAX;
        if frame.untried == 0 {
            stack.pop();
            continue;
        }
        if spent >= budget {
            return HomSearch::BudgetExhausted;
        }
        spent += 1;
        let colour = frame.untried.trailing_zeros() as usize;
        frame.untried &= frame.untried - 1;
        let v = frame.v;
        assigned[v] = colour;
        let mut dead = false;
        for &w in source.neighbours(v) {
            if assigned[w] != usize::MAX {
                continue;
            }
            let narrowed = cand[w] & tadj[colour];
            if narrowed != cand[w] {
                trail.push((w, cand[w]));
                cand[w] = narrowed;
                if narrowed == 0 {
                    dead = true;
                    break;
                }
            }
        }
        if dead {
            continue;
        }
        match pick(&cand, &assigned) {
            Some(w) => next = Some(w),
            None => return HomSearch::Found(assigned),
        }
    }
}

/// Simple cycles with a flag telling whether a cap cut the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleList {
    pub cycles: Vec<Vec<usize>>,
    pub truncated: bool,
}

/// Every simple cycle up to the caps, each listed once: it starts at its
/// lowest vertex and its second vertex is lower than its last.
///
/// `truncated` is set iff a cycle was skipped, either because `max_count`
/// was reached or because a cycle longer than `max_len` exists.
pub fn enumerate_cycles(g: &Graph, max_count: usize, max_len: usize) -> CycleList {
    let mut out = CycleList {
        cycles: Vec::new(),
        truncated: false,
    };
    for start in 0..g.n() {
        cycles_from(g, start, max_count, max_len, &mut out);
        if out.truncated && out.cycles.len() >= max_count {
            break;
        }
    }
    out
}

/// The cycles whose lowest vertex is `start` (the unit of work splitting).
pub fn enumerate_cycles_from(g: &Graph, start: usize, max_count: usize, max_len: usize) -> CycleList {
    let mut out = CycleList {
        cycles: Vec::new(),
        truncated: false,
    };
    cycles_from(g, start, max_count, max_len, &mut out);
    out
}

fn cycles_from(g: &Graph, start: usize, max_count: usize, max_len: usize, out: &mut CycleList) {
    let mut on_path = vec![false; g.n()];
    let mut path = vec![start];
    on_path[start] = true;
    // Explicit DFS: (vertex, next neighbour index).
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        let nbrs = g.neighbours(u);
        if *i >= nbrs.len() {
            stack.pop();
            path.pop();
            on_path[u] = false;
            continue;
        }
        let w = nbrs[*i];
        *i += 1;
        if w == start && path.len() >= 3 && path[1] < u {
            if out.cycles.len() >= max_count {
                out.truncated = true;
                return;
            }
            out.cycles.push(path.clone());
            continue;
        }
        if w <= start || on_path[w] {
            continue;
        }
        if path.len() >= max_len {
            if !out.truncated && closes_later(g, start, w, &on_path) {
                out.truncated = true;
            }
            continue;
        }
        on_path[w] = true;
        path.push(w);
        stack.push((w, 0));
    }
}

/// Can a path from `w` through vertices above `start` and off the current
/// path return to `start` (so a longer cycle exists)?
fn closes_later(g: &Graph, start: usize, w: usize, on_path: &[bool]) -> bool {
    let mut seen = vec![false; g.n()];
    seen[w] = true;
    let mut queue = VecDeque::from([w]);
    while let Some(u) = queue.pop_front() {
        for &x in g.neighbours(u) {
            if x == start {
                return true;
            }
            if x > start && !on_path[x] && !seen[x] {
                seen[x] = true;
                queue.push_back(x);
            }
        }
    }
    false
}

/// Fundamental cycles of a breadth-first spanning forest, one per non-tree
/// edge in edge order.
pub fn cycle_basis(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbours(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    g.edges()
        .iter()
        .filter(|&&(u, v)| parent[u] != v && parent[v] != u)
        .map(|&(u, v)| tree_cycle(u, v, &parent, &depth))
        .collect()
}

/// Checks that `cycle` is a simple cycle of `g` (length >= 3).
pub fn is_cycle_of(g: &Graph, cycle: &[usize]) -> bool {
    let l = cycle.len();
    if l < 3 {
        return false;
    }
    let distinct: BTreeSet<_> = cycle.iter().collect();
    distinct.len() == l && (0..l).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % l]))
}

/// A cycle along which `c(sigma(.))` strictly increases at every step but
/// one, oriented to start at its minimum.
///
/// Exhaustive over the enumerated cycles; if none is found and the
/// enumeration was truncated the answer is [`GraphError::Truncated`].
pub fn has_increasing_cycle(
    g: &ColouredGraph,
    c: &ColourOrdering,
    max_count: usize,
    max_len: usize,
) -> Result<Option<Vec<usize>>, GraphError> {
    let list = enumerate_cycles(g.host(), max_count, max_len);
    for cycle in &list.cycles {
        let vals: Vec<i64> = cycle.iter().map(|&v| c.value(g.colour(v))).collect();
        for dir in [false, true] {
            let mut seq = cycle.clone();
            let mut vs = vals.clone();
            if dir {
                seq.reverse();
                vs.reverse();
            }
            let l = vs.len();
            let rises = (0..l).filter(|&i| vs[(i + 1) % l] > vs[i]).count();
            if rises == l - 1 {
                let lo = (0..l).min_by_key(|&i| vs[i]).unwrap();
                seq.rotate_left(lo);
                return Ok(Some(seq));
            }
        }
    }
    if list.truncated {
        Err(GraphError::Truncated)
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k3() -> Graph {
        Graph::complete(3)
    }

    fn coloured(host: Graph, sigma: &[usize]) -> ColouredGraph {
        ColouredGraph::new(host, k3(), sigma.to_vec()).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(Graph::new(3, [(0, 0)]), Err(GraphError::SelfLoop(0, 0))));
        assert!(matches!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(1, 0))));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(GraphError::OutOfRange { .. })));
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[2,1],[0,1]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    }

    #[test]
    fn validate_coloured_examples() {
        assert!(ColouredGraph::new(Graph::cycle(5), k3(), vec![0, 1, 2, 0, 2]).is_ok());
        assert_eq!(
            ColouredGraph::new(Graph::complete(3), k3(), vec![0, 0, 1]).unwrap_err(),
            GraphError::NotAHomomorphism { u: 0, v: 1, cu: 0, cv: 0 }
        );
        assert!(ColouredGraph::new(Graph::empty(3), k3(), vec![2, 2, 2]).is_ok());
    }

    #[test]
    fn homomorphism_examples() {
        assert_eq!(hom_exists(&k3(), &Graph::complete(2), 1000), HomSearch::NotFound);
        let HomSearch::Found(map) = hom_exists(&Graph::cycle(5), &k3(), 1000) else {
            panic!("C5 is 3-colourable")
        };
        assert!(ColouredGraph::new(Graph::cycle(5), k3(), map).is_ok());
        let HomSearch::Found(map) = hom_exists(&Graph::petersen(), &k3(), 10_000) else {
            panic!("Petersen is 3-colourable")
        };
        assert!(ColouredGraph::new(Graph::petersen(), k3(), map).is_ok());
        assert_eq!(hom_exists(&Graph::complete(4), &k3(), 10_000), HomSearch::NotFound);
        assert_eq!(hom_exists(&Graph::complete(6), &Graph::complete(5), 3), HomSearch::BudgetExhausted);
    }

    #[test]
    fn blow_up_examples() {
        let tri = coloured(Graph::complete(3), &[0, 1, 2]);
        assert_eq!(tri.blow_up(&[1, 1, 1]).unwrap(), tri);
        assert_eq!(tri.blow_up(&[2, 2, 2]).unwrap().host().edge_count(), 12);
        let edge = coloured(Graph::path(2), &[0, 1]);
        let k23 = edge.blow_up(&[2, 3]).unwrap();
        assert_eq!(k23.host().n(), 5);
        assert_eq!(k23.host().edge_count(), 6);
        assert!(matches!(tri.blow_up(&[1, 0, 1]), Err(GraphError::ZeroSize(1))));
    }

    #[test]
    fn cycle_enumeration_examples() {
        assert!(enumerate_cycles(&Graph::path(6), 100, 20).cycles.is_empty());
        let k4 = enumerate_cycles(&Graph::complete(4), 100, 20);
        assert_eq!(k4.cycles.len(), 7);
        assert!(!k4.truncated);
        assert_eq!(enumerate_cycles(&Graph::cycle(5), 100, 20).cycles, vec![vec![0, 1, 2, 3, 4]]);
        let capped = enumerate_cycles(&Graph::complete(4), 3, 20);
        assert!(capped.truncated);
        assert_eq!(capped.cycles.len(), 3);
        let short = enumerate_cycles(&Graph::complete(4), 100, 3);
        assert_eq!(short.cycles.len(), 4);
        assert!(short.truncated);
        // Length cap that does not bite is not reported.
        assert!(!enumerate_cycles(&Graph::cycle(5), 100, 5).truncated);
    }

    #[test]
    fn cycle_basis_examples() {
        assert!(cycle_basis(&Graph::path(4)).is_empty());
        let c5 = cycle_basis(&Graph::cycle(5));
        assert_eq!(c5.len(), 1);
        assert!(is_cycle_of(&Graph::cycle(5), &c5[0]));
        let p = Graph::petersen();
        let basis = cycle_basis(&p);
        assert_eq!(basis.len(), 15 - 10 + 1);
        assert!(basis.iter().all(|c| is_cycle_of(&p, c)));
    }

    #[test]
    fn wrap_examples() {
        let tri = coloured(Graph::complete(3), &[0, 1, 2]);
        assert_eq!(tri.cycle_wrap(&[0, 1, 2]).unwrap(), 3);
        assert_eq!(tri.wrap(&[0, 1, 2, 0]).unwrap(), 3);
        let c4 = coloured(Graph::cycle(4), &[0, 1, 0, 1]);
        assert_eq!(c4.cycle_wrap(&[0, 1, 2, 3]).unwrap(), 0);
        let c6 = coloured(Graph::cycle(6), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(c6.cycle_wrap(&[0, 1, 2, 3, 4, 5]).unwrap(), 6);
        assert_eq!(c4.wrap(&[0, 2]), Err(GraphError::NotAWalk(0, 2)));
        let k4 = ColouredGraph::new(Graph::path(2), Graph::complete(4), vec![0, 1]).unwrap();
        assert_eq!(k4.wrap(&[0, 1]), Err(GraphError::PatternNotK3));
    }

    #[test]
    fn line_hom_examples() {
        let path = coloured(Graph::path(3), &[0, 1, 2]);
        assert_eq!(path.hom_to_coloured_line().unwrap(), LineHom::Levels(vec![0, 1, 2]));
        let tri = coloured(Graph::complete(3), &[0, 1, 2]);
        match tri.hom_to_coloured_line().unwrap() {
            LineHom::Wrapped { cycle, wrap } => {
                assert_eq!(cycle.len(), 3);
                assert_eq!(wrap.abs(), 3);
            }
            other => panic!("triangle must be wrapped, got {other:?}"),
        }
        let c6 = coloured(Graph::cycle(6), &[0, 1, 2, 0, 2, 1]);
        let LineHom::Levels(levels) = c6.hom_to_coloured_line().unwrap() else {
            panic!("unwrapped hexagon maps to the line")
        };
        for &(u, v) in c6.host().edges() {
            assert_eq!((levels[u] - levels[v]).abs(), 1);
        }
        for v in 0..6 {
            assert_eq!(levels[v].rem_euclid(3) as usize, c6.colour(v));
        }
    }

    #[test]
    fn increasing_cycle_examples() {
        let tri = coloured(Graph::complete(3), &[0, 1, 2]);
        let id = ColourOrdering::identity(3);
        assert_eq!(has_increasing_cycle(&tri, &id, 100, 20).unwrap(), Some(vec![0, 1, 2]));
        let c4 = coloured(Graph::cycle(4), &[0, 1, 0, 1]);
        assert_eq!(has_increasing_cycle(&c4, &id, 100, 20).unwrap(), None);
        let c5 = coloured(Graph::cycle(5), &[0, 1, 2, 0, 2]);
        for c in ColourOrdering::all(3) {
            assert_eq!(has_increasing_cycle(&c5, &c, 100, 20).unwrap(), None);
        }
    }

    #[test]
    fn orderings() {
        assert!(ColourOrdering::new(vec![1, 1]).is_err());
        assert!(ColourOrdering::new(vec![0, 1]).is_err());
        let all = ColourOrdering::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], ColourOrdering::identity(3));
    }
}
