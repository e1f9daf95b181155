//! Explicit constructions: progression-free sets from spheres, difference
//! graphs, the `G_n` family, and a constructive search for solutions with
//! distinct values.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equations::{Equation, EquationError, SolutionClass};
use crate::graphs::{ColourOrdering, ColouredGraph, Graph, GraphError};

/// Largest `N` accepted by [`behrend_set`].
pub const BEHREND_MAX_N: u64 = 1_000_000;
/// Largest part size `nN` accepted by [`rs_graph`].
pub const RS_MAX_PART: usize = 100_000;
/// Largest `|A|` accepted by the distinct-solution finder.
pub const SOLVER_MAX_SET: usize = 2_000;
/// Node budget of the backtracking walk in the distinct-solution finder.
pub const SOLVER_WALK_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("instance exceeds the construction scale: {0}")]
    ScaleExceeded(String),
    #[error("set member {value} lies outside 1..={n}")]
    OutOfRange { value: i64, n: i64 },
    #[error("equation has genus {0}; two zero-sum halves are needed")]
    GenusBelowTwo(usize),
    #[error("no distinct solution produced; guarantee {} < {}", .0.realized_bound, .0.required_degree)]
    Abstain(SolverReport),
}

/// Progression-free set built from lattice points on a sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehrendSet {
    pub n: u64,
    pub members: Vec<u64>,
    /// Digits lie in `0..digits`, written in base `2 * digits - 1`.
    pub digits: u64,
    pub dimension: u32,
    /// Squared radius; `None` for the full digit cube with `digits = 2`.
    pub radius: Option<u64>,
}

/// Number of integers in `1..=n` whose base-3 digits are all 0 or 1.
pub fn ternary_baseline(n: u64) -> usize {
    (1..=n).filter(|&m| {
        let mut x = m;
        while x > 0 {
            if x % 3 == 2 {
                return false;
            }
            x /= 3;
        }
        true
    })
    .count()
}

/// Scans digit bounds `2..=20` and dimensions `2..=12` for the largest
/// sphere slice below `n`; the digit cube `{0,1}^k` in base 3 competes too.
/// Values are shifted by one into `1..=n`.
pub fn behrend_set(n: u64) -> Result<BehrendSet, ConstructionError> {
    if n > BEHREND_MAX_N {
        return Err(ConstructionError::ScaleExceeded(format!("N = {n} > {BEHREND_MAX_N}")));
    }
    let mut best = BehrendSet {
        n,
        members: cube_points(n),
        digits: 2,
        dimension: (1..).find(|&k| 3u64.pow(k) >= n.max(1)).unwrap_or(1),
        radius: None,
    };
    for d in 2..=20u64 {
        let base = 2 * d - 1;
        for k in 2..=12u32 {
            // Radius -> count among points with value < n.
            let mut counts: HashMap<u64, usize> = HashMap::new();
            sphere_walk(n, d, base, k, &mut |_, r| *counts.entry(r).or_default() += 1);
            let Some((&r, &cnt)) = counts.iter().max_by_key(|&(&r, &c)| (c, std::cmp::Reverse(r))) else {
                continue;
            };
            if cnt > best.members.len() {
                let mut members = Vec::with_capacity(cnt);
                sphere_walk(n, d, base, k, &mut |v, rr| {
                    if rr == r {
                        members.push(v + 1);
                    }
                });
                members.sort_unstable();
                best = BehrendSet {
                    n,
                    members,
                    digits: d,
                    dimension: k,
                    radius: Some(r),
                };
            }
        }
    }
    Ok(best)
}

fn cube_points(n: u64) -> Vec<u64> {
    (0..n).filter(|&v| {
        let mut x = v;
        while x > 0 {
            if x % 3 == 2 {
                return false;
            }
            x /= 3;
        }
        true
    })
    .map(|v| v + 1)
    .collect()
}

/// Visits every digit vector in `[0, d)^k` whose value in base `base` is
/// below `n`, passing the value and the squared norm.
fn sphere_walk(n: u64, d: u64, base: u64, k: u32, visit: &mut dyn FnMut(u64, u64)) {
    fn rec(n: u64, d: u64, base: u64, pos: i32, value: u64, norm: u64, visit: &mut dyn FnMut(u64, u64)) {
        if pos < 0 {
            visit(value, norm);
            return;
        }
        let place = base.checked_pow(pos as u32).unwrap_or(u64::MAX);
        for digit in 0..d {
            let Some(v) = digit.checked_mul(place).and_then(|p| p.checked_add(value)) else {
                break;
            };
            if v >= n {
                break;
            }
            rec(n, d, base, pos - 1, v, norm + digit * digit, visit);
        }
    }
    rec(n, d, base, k as i32 - 1, 0, 0, visit);
}

/// Difference graph of a pattern: part `v` is `1..=nN` with `n = max c`,
/// and `x in V_u`, `y in V_v` are adjacent for `uv in E(F)` iff
/// `y - x in (c(v) - c(u)) A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsGraph {
    pub pattern: Graph,
    pub ordering: ColourOrdering,
    pub n: usize,
    pub set: Vec<i64>,
    pub part_size: usize,
    pub graph: Graph,
    /// One copy of the pattern per `(x, a)`; entry `v` is the host vertex
    /// used for pattern vertex `v`.
    pub packing: Vec<Vec<usize>>,
    pub packing_labels: Vec<(i64, i64)>,
    pub dropped: usize,
}

impl RsGraph {
    /// Host vertex of value `x` in part `v`.
    pub fn vertex(&self, v: usize, x: i64) -> usize {
        v * self.part_size + (x as usize - 1)
    }

    /// `(part, value)` of a host vertex.
    pub fn locate(&self, vertex: usize) -> (usize, i64) {
        (vertex / self.part_size, (vertex % self.part_size) as i64 + 1)
    }

    pub fn coloured(&self) -> Result<ColouredGraph, GraphError> {
        let sigma = (0..self.graph.n()).map(|w| w / self.part_size).collect();
        ColouredGraph::new(self.graph.clone(), self.pattern.clone(), sigma)
    }

    /// For an edge between parts `u` and `v`, the member `a` with
    /// `y - x = (c(v) - c(u)) a`.
    pub fn difference_parameter(&self, p: usize, q: usize) -> Option<i64> {
        let (u, x) = self.locate(p);
        let (v, y) = self.locate(q);
        let dc = self.ordering.value(v) - self.ordering.value(u);
        if dc == 0 || (y - x) % dc != 0 {
            return None;
        }
        Some((y - x) / dc)
    }
}

pub fn rs_graph(pattern: &Graph, ordering: &ColourOrdering, n: usize, set: &[i64]) -> Result<RsGraph, ConstructionError> {
    if pattern.n() > 6 {
        return Err(ConstructionError::ScaleExceeded(format!("pattern on {} vertices", pattern.n())));
    }
    if ordering.len() != pattern.n() {
        return Err(GraphError::BadOrdering(format!("{} values for {} colours", ordering.len(), pattern.n())).into());
    }
    let set: Vec<i64> = set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(&bad) = set.iter().find(|&&a| a < 1 || a > n as i64) {
        return Err(ConstructionError::OutOfRange { value: bad, n: n as i64 });
    }
    let top = ordering.values().iter().copied().max().unwrap_or(1) as usize;
    let part = top * n;
    if part > RS_MAX_PART {
        return Err(ConstructionError::ScaleExceeded(format!("part size {part} > {RS_MAX_PART}")));
    }
    let part_i = part as i64;
    let mut edges = Vec::new();
    for &(u, v) in pattern.edges() {
        let dc = ordering.value(v) - ordering.value(u);
        for x in 1..=part_i {
            for &a in &set {
                let y = x + dc * a;
                if (1..=part_i).contains(&y) {
                    edges.push((u * part + (x - 1) as usize, v * part + (y - 1) as usize));
                }
            }
        }
    }
    let graph = Graph::from_edge_set(pattern.n() * part, edges)?;
    let mut packing = Vec::new();
    let mut labels = Vec::new();
    let mut dropped = 0;
    for x in 1..=n as i64 {
        for &a in &set {
            let copy: Option<Vec<usize>> = (0..pattern.n())
                .map(|v| {
                    let xv = x + (ordering.value(v) - 1) * a;
                    (1..=part_i).contains(&xv).then(|| v * part + (xv - 1) as usize)
                })
                .collect();
            match copy {
                Some(c) => {
                    packing.push(c);
                    labels.push((x, a));
                }
                None => dropped += 1,
            }
        }
    }
    Ok(RsGraph {
        pattern: pattern.clone(),
        ordering: ordering.clone(),
        n,
        set,
        part_size: part,
        graph,
        packing,
        packing_labels: labels,
        dropped,
    })
}

/// Subsets of `0..n` as bitmasks, by size then lexicographically.
fn ordered_subsets(n: usize) -> Vec<u32> {
    let mut s: Vec<u32> = (0..1u32 << n).collect();
    s.sort_by_key(|&m| {
        let mut elems: Vec<u32> = (0..n as u32).filter(|&i| m >> i & 1 == 1).collect();
        elems.resize(n, u32::MAX);
        (m.count_ones(), elems)
    });
    s
}

fn subset_graph(n: usize, subsets: &[u32]) -> ColouredGraph {
    let q = subsets.len();
    let b0 = n;
    let c0 = n + q;
    let mut edges = Vec::new();
    for a in 0..n {
        for (i, &x) in subsets.iter().enumerate() {
            if x >> a & 1 == 1 {
                edges.push((a, b0 + i));
                edges.push((a, c0 + i));
            }
        }
    }
    for (i, &x) in subsets.iter().enumerate() {
        for (j, &y) in subsets.iter().enumerate() {
            if x & y == 0 {
                edges.push((b0 + i, c0 + j));
            }
        }
    }
    let host = Graph::new(n + 2 * q, edges).expect("subset graph is simple");
    let sigma = (0..n + 2 * q).map(|v| if v < n { 0 } else if v < c0 { 1 } else { 2 }).collect();
    ColouredGraph::new(host, Graph::complete(3), sigma).expect("parts are independent")
}

/// `G_n` with parts `A = [n]`, `B = C = 2^[n]`, coloured by part.
///
/// Vertices: `A` first, then `B`, then `C`; subsets ordered by size then
/// lexicographically.
pub fn g_n(n: usize) -> Result<ColouredGraph, ConstructionError> {
    if n > 4 {
        return Err(ConstructionError::ScaleExceeded(format!("n = {n} > 4")));
    }
    Ok(subset_graph(n, &ordered_subsets(n)))
}

/// `G_3` restricted to nonempty proper subsets: 15 vertices, 30 edges.
pub fn fig5_graph() -> ColouredGraph {
    let subsets: Vec<u32> = ordered_subsets(3).into_iter().filter(|&m| m != 0 && m != 7).collect();
    subset_graph(3, &subsets)
}

/// Degree bookkeeping of one run of the distinct-solution finder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub set_size: usize,
    pub paths: u64,
    pub vertices: usize,
    /// `(s + t - 1)(sum |a| + sum |b|)`.
    pub constant: i64,
    /// `M^2 / (4 c N)`, the bound available before building the graph.
    pub worst_case_bound: f64,
    /// `|P| / 2n` with the realized vertex count `n`.
    pub realized_bound: f64,
    pub required_degree: usize,
    pub surviving_paths: u64,
    pub surviving_vertices: usize,
    pub guarantee_holds: bool,
    /// Nodes expanded by the walk.
    pub walk_nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctSolution {
    /// Values in the equation's own variable order.
    pub assignment: Vec<i64>,
    pub report: SolverReport,
}

/// An equation split into two zero-sum halves and the layered graph on a set.
#[derive(Debug, Clone)]
pub struct SolverInstance {
    pub equation: Equation,
    /// Original variable index of each `x_i` and `y_j`.
    pub x_vars: Vec<usize>,
    pub y_vars: Vec<usize>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub set: Vec<i64>,
    pub n: i64,
    /// Layer value of a pair is `alpha[k] x + beta[k] y`.
    alpha: Vec<i64>,
    beta: Vec<i64>,
}

impl SolverInstance {
    pub fn new(equation: &Equation, set: &[i64], n: i64) -> Result<Self, ConstructionError> {
        let set: Vec<i64> = set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&a| a < 1 || a > n) {
            return Err(ConstructionError::OutOfRange { value: bad, n });
        }
        if set.len() > SOLVER_MAX_SET {
            return Err(ConstructionError::ScaleExceeded(format!("|A| = {} > {SOLVER_MAX_SET}", set.len())));
        }
        let (genus, partition) = equation.genus()?;
        if genus < 2 {
            return Err(ConstructionError::GenusBelowTwo(genus));
        }
        let first = partition.parts.iter().position(|p| p.contains(&0)).expect("index 0 is covered");
        let x_vars = partition.parts[first].clone();
        let mut y_vars: Vec<usize> = partition
            .parts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != first)
            .flat_map(|(_, p)| p.iter().copied())
            .collect();
        y_vars.sort_unstable();
        let a: Vec<i64> = x_vars.iter().map(|&i| equation.coeffs()[i]).collect();
        let b: Vec<i64> = y_vars.iter().map(|&i| equation.coeffs()[i]).collect();
        let (s, t) = (a.len(), b.len());
        let layers = s + t - 1;
        let mut alpha = vec![a[0]];
        let mut beta = vec![0];
        for j in 0..layers - 1 {
            let (da, db) = if j < t - 1 { (0, b[j]) } else { (a[j + 2 - t], 0) };
            alpha.push(alpha[j] + da);
            beta.push(beta[j] + db);
        }
        debug_assert_eq!(alpha[layers - 1], 0);
        debug_assert_eq!(beta[layers - 1], -b[t - 1]);
        Ok(SolverInstance {
            equation: equation.clone(),
            x_vars,
            y_vars,
            a,
            b,
            set,
            n,
            alpha,
            beta,
        })
    }

    pub fn layers(&self) -> usize {
        self.a.len() + self.b.len() - 1
    }

    /// `(s + t - 1)(sum |a| + sum |b|)`.
    pub fn constant(&self) -> i64 {
        self.layers() as i64 * self.equation.coeffs().iter().map(|a| a.abs()).sum::<i64>()
    }

    /// Vertex values of the path of the ordered pair `(x, y)`.
    pub fn path(&self, x: i64, y: i64) -> Vec<i64> {
        (0..self.layers()).map(|k| self.alpha[k] * x + self.beta[k] * y).collect()
    }

    /// The pair whose path uses the edge `u -> v` between layers `k` and
    /// `k + 1`, if any.
    pub fn recover_pair(&self, k: usize, u: i64, v: i64) -> Option<(i64, i64)> {
        if k + 1 >= self.layers() {
            return None;
        }
        let t = self.b.len();
        let diff = v - u;
        let (x, y) = if k < t - 1 {
            let b = self.b[k];
            if diff % b != 0 {
                return None;
            }
            let y = diff / b;
            let rest = u - self.beta[k] * y;
            if rest % self.alpha[k] != 0 {
                return None;
            }
            (rest / self.alpha[k], y)
        } else {
            let a = self.a[k + 2 - t];
            if diff % a != 0 {
                return None;
            }
            let x = diff / a;
            let rest = u - self.alpha[k] * x;
            if rest % self.beta[k] != 0 {
                return None;
            }
            (x, rest / self.beta[k])
        };
        let ok = x != y
            && self.set.binary_search(&x).is_ok()
            && self.set.binary_search(&y).is_ok()
            && self.path(x, y)[k] == u
            && self.path(x, y)[k + 1] == v;
        ok.then_some((x, y))
    }

    /// Builds the layered graph, sparsifies it and walks it.
    pub fn solve(&self) -> Result<DistinctSolution, ConstructionError> {
        let layers = self.layers();
        let m = self.set.len();
        let (s, t) = (self.a.len(), self.b.len());
        let required = 2 * (s + t);
        let constant = self.constant();
        let mut report = SolverReport {
            set_size: m,
            paths: (m * m.saturating_sub(1)) as u64,
            vertices: 0,
            constant,
            worst_case_bound: (m * m) as f64 / (4.0 * constant as f64 * self.n as f64),
            realized_bound: 0.0,
            required_degree: required,
            surviving_paths: 0,
            surviving_vertices: 0,
            guarantee_holds: false,
            walk_nodes: 0,
        };
        if m < 2 {
            return Err(ConstructionError::Abstain(report));
        }

        // Vertex ids per (layer, value); paths as vertex-id lists.
        let mut ids: Vec<HashMap<i64, u32>> = vec![HashMap::new(); layers];
        let mut values: Vec<(usize, i64)> = Vec::new();
        let mut paths: Vec<u32> = Vec::with_capacity(m * (m - 1) * layers);
        for &x in &self.set {
            for &y in &self.set {
                if x == y {
                    continue;
                }
                for (k, val) in self.path(x, y).into_iter().enumerate() {
                    let id = *ids[k].entry(val).or_insert_with(|| {
                        values.push((k, val));
                        (values.len() - 1) as u32
                    });
                    paths.push(id);
                }
            }
        }
        let nv = values.len();
        let np = m * (m - 1);
        report.vertices = nv;
        report.realized_bound = np as f64 / (2.0 * nv as f64);
        report.guarantee_holds = report.realized_bound >= required as f64;

        // Delete every path through a vertex on fewer than |P| / 2n paths.
        let mut on: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for p in 0..np {
            for &v in &paths[p * layers..(p + 1) * layers] {
                on[v as usize].push(p as u32);
            }
        }
        let mut count: Vec<usize> = on.iter().map(Vec::len).collect();
        let mut alive = vec![true; np];
        let below = |c: usize| c > 0 && 2 * nv * c < np;
        let mut queue: Vec<u32> = (0..nv as u32).filter(|&v| below(count[v as usize])).collect();
        while let Some(v) = queue.pop() {
            if !below(count[v as usize]) {
                continue;
            }
            for &p in &on[v as usize] {
                if !alive[p as usize] {
                    continue;
                }
                alive[p as usize] = false;
                for &w in &paths[p as usize * layers..(p as usize + 1) * layers] {
                    count[w as usize] -= 1;
                    if below(count[w as usize]) {
                        queue.push(w);
                    }
                }
            }
        }
        let keep: Vec<bool> = count.iter().map(|&c| c > 0).collect();
        report.surviving_paths = alive.iter().filter(|&&a| a).count() as u64;
        report.surviving_vertices = keep.iter().filter(|&&k| k).count();

        // Induced subgraph on surviving vertices: every edge of any path
        // whose endpoints both survive.
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for p in 0..np {
            let path = &paths[p * layers..(p + 1) * layers];
            for w in path.windows(2) {
                if keep[w[0] as usize] && keep[w[1] as usize] {
                    out[w[0] as usize].push(w[1]);
                }
            }
        }
        for list in &mut out {
            list.sort_unstable_by_key(|&w| values[w as usize].1);
        }
        let mut starts: Vec<u32> = (0..nv as u32).filter(|&v| keep[v as usize] && values[v as usize].0 == 0).collect();
        starts.sort_unstable_by_key(|&v| values[v as usize].1);

        let mut walk = Walk {
            inst: self,
            values: &values,
            out: &out,
            xs: Vec::with_capacity(s),
            ys: Vec::with_capacity(t),
            nodes: 0,
        };
        for &u in &starts {
            let x1 = values[u as usize].1 / self.a[0];
            walk.xs.push(x1);
            let found = walk.extend(u, 0);
            if found {
                let mut assignment = vec![0; self.equation.len()];
                for (&i, &v) in self.x_vars.iter().zip(&walk.xs) {
                    assignment[i] = v;
                }
                for (&i, &v) in self.y_vars.iter().zip(&walk.ys) {
                    assignment[i] = v;
                }
                report.walk_nodes = walk.nodes;
                debug_assert_eq!(
                    self.equation.classify_solution(&assignment),
                    Ok(SolutionClass::AllDistinct)
                );
                return Ok(DistinctSolution { assignment, report });
            }
            walk.xs.pop();
            if walk.nodes >= SOLVER_WALK_BUDGET {
                break;
            }
        }
        report.walk_nodes = walk.nodes;
        Err(ConstructionError::Abstain(report))
    }
}

struct Walk<'a> {
    inst: &'a SolverInstance,
    values: &'a [(usize, i64)],
    out: &'a [Vec<u32>],
    xs: Vec<i64>,
    ys: Vec<i64>,
    nodes: u64,
}

impl Walk<'_> {
    fn fresh(&self, v: i64) -> bool {
        !self.xs.contains(&v) && !self.ys.contains(&v)
    }

    /// Extends a walk standing at `u` in layer `k`, choosing fresh values.
    fn extend(&mut self, u: u32, k: usize) -> bool {
        let inst = self.inst;
        let layers = inst.layers();
        let t = inst.b.len();
        for &w in &self.out[u as usize] {
            if self.nodes >= SOLVER_WALK_BUDGET {
                return false;
            }
            self.nodes += 1;
            let diff = self.values[w as usize].1 - self.values[u as usize].1;
            if k < t - 1 {
                let y = diff / inst.b[k];
                if !self.fresh(y) {
                    continue;
                }
                self.ys.push(y);
                if self.extend(w, k + 1) {
                    return true;
                }
                self.ys.pop();
            } else {
                let x = diff / inst.a[k + 2 - t];
                if !self.fresh(x) {
                    continue;
                }
                self.xs.push(x);
                if k + 2 == layers {
                    let y_last = -self.values[w as usize].1 / inst.b[t - 1];
                    if y_last != x && self.fresh(y_last) {
                        self.ys.push(y_last);
                        return true;
                    }
                } else if self.extend(w, k + 1) {
                    return true;
                }
                self.xs.pop();
            }
        }
        false
    }
}

/// Searches a solution of `equation` with pairwise distinct values from
/// `set`, following the layered-graph argument for genus-two equations.
pub fn find_distinct_solution(equation: &Equation, set: &[i64], n: i64) -> Result<DistinctSolution, ConstructionError> {
    SolverInstance::new(equation, set, n)?.solve()
}
