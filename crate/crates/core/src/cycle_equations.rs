//! Cycle-equation systems of coloured graphs.
//!
//! For a cycle `v_0 v_1 ... v_{l-1}` of an F-coloured graph and an ordering
//! `c` of the colours, the cycle-equation has one variable per cycle edge;
//! the edge `v_i v_{i+1}` gets coefficient `c(sigma(v_{i+1})) - c(sigma(v_i))`.
//! Variables belonging to the same host edge are identified when equations
//! of different cycles are combined.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equations::{has_proper_zero_sum_subset, Equation, EquationError};
use crate::graphs::{
    cycle_basis, enumerate_cycles, is_cycle_of, ColourOrdering, ColouredGraph, CycleList, Graph, GraphError,
    LineHom,
};

/// Largest host accepted by [`check_all_colourings`].
pub const MAX_COLOURING_VERTICES: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("ordering has {got} values for a pattern on {expected} colours")]
    OrderingLength { expected: usize, got: usize },
    #[error("instance exceeds the exhaustive-search scale: {0}")]
    ScaleExceeded(String),
}

/// A cycle with its equation; `edges[i]` is the host edge index of the
/// variable `i`, i.e. of the step `cycle[i] -> cycle[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEquation {
    pub cycle: Vec<usize>,
    pub edges: Vec<usize>,
    pub equation: Equation,
}

impl CycleEquation {
    /// `(edge, coefficient)` pairs sorted by edge.
    pub fn by_edge(&self) -> Vec<(usize, i64)> {
        let mut v: Vec<_> = self.edges.iter().copied().zip(self.equation.coeffs().iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

fn check_ordering(g: &ColouredGraph, c: &ColourOrdering) -> Result<(), CycleError> {
    if c.len() != g.pattern().n() {
        return Err(CycleError::OrderingLength {
            expected: g.pattern().n(),
            got: c.len(),
        });
    }
    Ok(())
}

pub fn build_cycle_equation(
    cycle: &[usize],
    g: &ColouredGraph,
    c: &ColourOrdering,
) -> Result<CycleEquation, CycleError> {
    check_ordering(g, c)?;
    if !is_cycle_of(g.host(), cycle) {
        return Err(GraphError::NotACycle.into());
    }
    let l = cycle.len();
    let mut coeffs = Vec::with_capacity(l);
    let mut edges = Vec::with_capacity(l);
    for i in 0..l {
        let (u, v) = (cycle[i], cycle[(i + 1) % l]);
        coeffs.push(c.value(g.colour(v)) - c.value(g.colour(u)));
        edges.push(g.host().edge_index(u, v).expect("cycle edge"));
    }
    Ok(CycleEquation {
        cycle: cycle.to_vec(),
        edges,
        equation: Equation::new(coeffs)?,
    })
}

/// `Eq(H, sigma, c)` over either every simple cycle or a fundamental basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEquationSystem {
    pub ordering: ColourOrdering,
    pub equations: Vec<CycleEquation>,
    /// `true` when built from the full cycle list, `false` for a basis.
    pub all_cycles: bool,
    pub truncated: bool,
}

impl CycleEquationSystem {
    pub fn from_all_cycles(
        g: &ColouredGraph,
        c: &ColourOrdering,
        max_count: usize,
        max_len: usize,
    ) -> Result<Self, CycleError> {
        let list = enumerate_cycles(g.host(), max_count, max_len);
        Ok(CycleEquationSystem {
            ordering: c.clone(),
            equations: list
                .cycles
                .iter()
                .map(|cy| build_cycle_equation(cy, g, c))
                .collect::<Result<_, _>>()?,
            all_cycles: true,
            truncated: list.truncated,
        })
    }

    pub fn from_basis(g: &ColouredGraph, c: &ColourOrdering) -> Result<Self, CycleError> {
        Ok(CycleEquationSystem {
            ordering: c.clone(),
            equations: cycle_basis(g.host())
                .iter()
                .map(|cy| build_cycle_equation(cy, g, c))
                .collect::<Result<_, _>>()?,
            all_cycles: false,
            truncated: false,
        })
    }
}

/// A single cycle whose equation is convex under `ordering`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexWitness {
    pub ordering: ColourOrdering,
    pub cycle: Vec<usize>,
    pub equation: Equation,
}

/// Some linear combination of the cycle-equations is convex iff a single
/// cycle-equation is, so only single cycles are examined.
pub fn exists_convex_combination(
    g: &ColouredGraph,
    c: &ColourOrdering,
    max_count: usize,
    max_len: usize,
) -> Result<Option<ConvexWitness>, CycleError> {
    let list = enumerate_cycles(g.host(), max_count, max_len);
    convex_in(g, c, &list)
}

fn convex_in(g: &ColouredGraph, c: &ColourOrdering, list: &CycleList) -> Result<Option<ConvexWitness>, CycleError> {
    for cycle in &list.cycles {
        let ce = build_cycle_equation(cycle, g, c)?;
        if ce.equation.is_convex() {
            return Ok(Some(ConvexWitness {
                ordering: c.clone(),
                cycle: ce.cycle,
                equation: ce.equation,
            }));
        }
    }
    if list.truncated {
        Err(GraphError::Truncated.into())
    } else {
        Ok(None)
    }
}

/// Outcome of [`eqs_all_symmetric`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryVerdict {
    /// Every cycle-equation is symmetric; the levels of a colour
    /// homomorphism to the coloured line certify it.
    AllSymmetric { levels: Vec<i64> },
    /// A cycle with nonzero wrap and its non-symmetric equation at the
    /// identity ordering.
    NotSymmetric { cycle: Vec<usize>, wrap: i64, equation: Equation },
}

impl SymmetryVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SymmetryVerdict::AllSymmetric { .. })
    }
}

pub fn eqs_all_symmetric(g: &ColouredGraph) -> Result<SymmetryVerdict, CycleError> {
    match g.hom_to_coloured_line()? {
        LineHom::Levels(levels) => Ok(SymmetryVerdict::AllSymmetric { levels }),
        LineHom::Wrapped { cycle, wrap } => {
            let ce = build_cycle_equation(&cycle, g, &ColourOrdering::identity(3))?;
            Ok(SymmetryVerdict::NotSymmetric {
                cycle,
                wrap,
                equation: ce.equation,
            })
        }
    }
}

/// Outcome of [`classify_cycle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    /// Positions `i < j` along `cycle` carry the same colour.
    Abundant { cycle: Vec<usize>, repeated: (usize, usize) },
    /// All colours distinct; `ordering` makes the cycle-equation convex.
    NotAbundant { cycle: Vec<usize>, ordering: ColourOrdering, equation: Equation },
}

impl CycleClass {
    pub fn is_abundant(&self) -> bool {
        matches!(self, CycleClass::Abundant { .. })
    }
}

/// The vertices of a host that is a single cycle, in traversal order from
/// vertex 0 towards its smaller neighbour.
pub fn cycle_order(host: &Graph) -> Result<Vec<usize>, GraphError> {
    let n = host.n();
    if n < 3 || host.edge_count() != n || (0..n).any(|v| host.degree(v) != 2) {
        return Err(GraphError::NotACycle);
    }
    let mut order = vec![0];
    let mut prev = 0;
    let mut cur = host.neighbours(0)[0];
    while cur != 0 {
        order.push(cur);
        let nb = host.neighbours(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    if order.len() != n {
        return Err(GraphError::NotACycle);
    }
    Ok(order)
}

pub fn classify_cycle(g: &ColouredGraph) -> Result<CycleClass, CycleError> {
    let cycle = cycle_order(g.host())?;
    let l = cycle.len();
    let mut first_at = vec![usize::MAX; g.pattern().n()];
    for (i, &v) in cycle.iter().enumerate() {
        let col = g.colour(v);
        if first_at[col] != usize::MAX {
            return Ok(CycleClass::Abundant {
                cycle,
                repeated: (first_at[col], i),
            });
        }
        first_at[col] = i;
    }
    let mut values = vec![0i64; g.pattern().n()];
    let mut next = l as i64;
    for (col, slot) in values.iter_mut().enumerate() {
        *slot = if first_at[col] == usize::MAX {
            next += 1;
            next
        } else {
            first_at[col] as i64 + 1
        };
    }
    let ordering = ColourOrdering::new(values)?;
    let equation = build_cycle_equation(&cycle, g, &ordering)?.equation;
    Ok(CycleClass::NotAbundant {
        cycle,
        ordering,
        equation,
    })
}

/// Bounds of the genus-one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationBounds {
    /// Largest number of cycles combined.
    pub max_cycles: usize,
    /// Largest multiplier magnitude.
    pub max_multiplier: i64,
}

impl Default for CombinationBounds {
    fn default() -> Self {
        CombinationBounds {
            max_cycles: 2,
            max_multiplier: 2,
        }
    }
}

/// A linear combination of cycle-equations and the equation it produces
/// over the union of the supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationWitness {
    pub ordering: ColourOrdering,
    pub cycles: Vec<Vec<usize>>,
    pub multipliers: Vec<i64>,
    /// Host edge of each variable of `equation`, increasing.
    pub edges: Vec<(usize, usize)>,
    pub equation: Equation,
    pub genus_one: bool,
    pub convex: bool,
}

impl CombinationWitness {
    /// Recomputes the combination and both reported properties.
    pub fn verify(&self, g: &ColouredGraph) -> Result<bool, CycleError> {
        if self.cycles.len() != self.multipliers.len() || self.cycles.is_empty() {
            return Ok(false);
        }
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (cy, &m) in self.cycles.iter().zip(&self.multipliers) {
            let ce = build_cycle_equation(cy, g, &self.ordering)?;
            for (e, a) in ce.by_edge() {
                *acc.entry(e).or_default() += m * a;
            }
        }
        acc.retain(|_, a| *a != 0);
        let edges: Vec<_> = acc.keys().map(|&e| g.host().edges()[e]).collect();
        let coeffs: Vec<i64> = acc.values().copied().collect();
        Ok(edges == self.edges
            && coeffs == self.equation.coeffs()
            && self.equation.is_genus_one() == self.genus_one
            && self.equation.is_convex() == self.convex)
    }
}

/// Cycle list preprocessed for combination search.
struct Prepared<'a> {
    cycles: &'a [Vec<usize>],
    steps: Vec<Vec<(usize, usize, usize)>>,
    bits: Vec<Vec<u64>>,
    m: usize,
}

impl<'a> Prepared<'a> {
    fn new(host: &Graph, cycles: &'a [Vec<usize>]) -> Self {
        let m = host.edge_count();
        let words = m.div_ceil(64).max(1);
        let mut steps = Vec::with_capacity(cycles.len());
        let mut bits = Vec::with_capacity(cycles.len());
        for cy in cycles {
            let l = cy.len();
            let mut s = Vec::with_capacity(l);
            let mut b = vec![0u64; words];
            for i in 0..l {
                let (u, v) = (cy[i], cy[(i + 1) % l]);
                let e = host.edge_index(u, v).expect("cycle edge");
                s.push((e, u, v));
                b[e / 64] |= 1 << (e % 64);
            }
            steps.push(s);
            bits.push(b);
        }
        Prepared {
            cycles,
            steps,
            bits,
            m,
        }
    }

    fn overlap(&self, i: usize, j: usize) -> bool {
        self.bits[i].iter().zip(&self.bits[j]).any(|(a, b)| a & b != 0)
    }
}

/// Multiplier vectors of length `s` in `[-l, l] \ {0}` whose first entry is
/// positive and whose entries have gcd 1 (other vectors rescale these).
fn multiplier_vectors(s: usize, l: i64) -> Vec<Vec<i64>> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let vals: Vec<i64> = (-l..=l).filter(|&x| x != 0).collect();
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for pos in 0..s {
        let mut next = Vec::new();
        for v in &out {
            for &x in &vals {
                if pos == 0 && x < 0 {
                    continue;
                }
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().fold(0, |g, &x| gcd(g, x)) == 1);
    out
}

struct Combiner<'p, 'a> {
    prep: &'p Prepared<'a>,
    g: &'p ColouredGraph,
    c: &'p ColourOrdering,
    acc: Vec<i64>,
    seen: Vec<bool>,
    touched: Vec<usize>,
    coeffs: Vec<i64>,
    coef: Vec<Vec<i64>>,
    /// Per cycle, edge masks of each value `a > 0` and of `-a`.
    masks: Vec<Vec<(Vec<u64>, Vec<u64>)>>,
}

impl<'p, 'a> Combiner<'p, 'a> {
    fn new(prep: &'p Prepared<'a>, g: &'p ColouredGraph, c: &'p ColourOrdering) -> Self {
        let coef: Vec<Vec<i64>> = prep
            .steps
            .iter()
            .map(|s| s.iter().map(|&(_, u, v)| c.value(g.colour(v)) - c.value(g.colour(u))).collect())
            .collect();
        let words = prep.bits.first().map_or(1, Vec::len);
        let masks = coef
            .iter()
            .zip(&prep.steps)
            .map(|(cs, st): (&Vec<i64>, &Vec<(usize, usize, usize)>)| {
                let mut by_value: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
                for (&a, &(e, _, _)) in cs.iter().zip(st) {
                    by_value.entry(a).or_insert_with(|| vec![0; words])[e / 64] |= 1 << (e % 64);
                }
                by_value
                    .iter()
                    .filter(|&(&a, _)| a > 0)
                    .filter_map(|(&a, m)| by_value.get(&-a).map(|n| (m.clone(), n.clone())))
                    .collect()
            })
            .collect();
        Combiner {
            prep,
            g,
            c,
            masks,
            acc: vec![0; prep.m],
            seen: vec![false; prep.m],
            touched: Vec::new(),
            coeffs: Vec::new(),
            coef,
        }
    }

    /// Some cycle keeps edges of values `a` and `-a` outside all other
    /// cycles of the set; they stay opposite under any multipliers, and
    /// form a proper zero-sum subset once a third private edge exists.
    fn private_conflict(&self, idx: &[usize]) -> bool {
        let words = self.prep.bits[idx[0]].len();
        let private: Vec<Vec<u64>> = idx
            .iter()
            .map(|&i| {
                (0..words)
                    .map(|w| {
                        let others = idx.iter().filter(|&&j| j != i).fold(0, |acc, &j| acc | self.prep.bits[j][w]);
                        self.prep.bits[i][w] & !others
                    })
                    .collect()
            })
            .collect();
        let counts: Vec<u32> = private.iter().map(|p| p.iter().map(|w| w.count_ones()).sum()).collect();
        let total: u32 = counts.iter().sum();
        idx.iter().zip(&private).any(|(&i, own)| {
            total >= 3
                && self.masks[i].iter().any(|(pos, neg)| {
                    (0..words).any(|w| pos[w] & own[w] != 0) && (0..words).any(|w| neg[w] & own[w] != 0)
                })
        })
    }

    /// Returns the combination if its equation has genus one.
    fn try_combo(&mut self, idx: &[usize], mult: &[i64]) -> Option<CombinationWitness> {
        self.touched.clear();
        for (&i, &lam) in idx.iter().zip(mult) {
            for (k, &(e, _, _)) in self.prep.steps[i].iter().enumerate() {
                if !self.seen[e] {
                    self.seen[e] = true;
                    self.touched.push(e);
                }
                self.acc[e] += lam * self.coef[i][k];
            }
        }
        self.touched.sort_unstable();
        self.coeffs.clear();
        let (mut pos, mut neg) = (0u128, 0u128);
        let mut small = true;
        for &e in &self.touched {
            let a = self.acc[e];
            if a != 0 {
                self.coeffs.push(a);
                match a.unsigned_abs() {
                    m if m >= 128 => small = false,
                    m if a > 0 => pos |= 1 << m,
                    m => neg |= 1 << m,
                }
            }
        }
        let edges: Vec<usize> = self.touched.iter().copied().filter(|&e| self.acc[e] != 0).collect();
        for &e in &self.touched {
            self.acc[e] = 0;
            self.seen[e] = false;
        }
        // A pair `a, -a` inside three or more coefficients is a proper
        // zero-sum subset.
        if self.coeffs.len() < 2 || (small && self.coeffs.len() > 2 && pos & neg != 0) {
            return None;
        }
        if has_proper_zero_sum_subset(&self.coeffs) {
            return None;
        }
        let equation = Equation::new(self.coeffs.clone()).ok()?;
        Some(CombinationWitness {
            ordering: self.c.clone(),
            cycles: idx.iter().map(|&i| self.prep.cycles[i].clone()).collect(),
            multipliers: mult.to_vec(),
            edges: edges.iter().map(|&e| self.g.host().edges()[e]).collect(),
            convex: equation.is_convex(),
            equation,
            genus_one: true,
        })
    }
}

/// Bounded search for a combination of cycle-equations with genus one.
///
/// Single cycles are tried first, then sets of two, three, ... cycles up to
/// `bounds.max_cycles`. Only sets whose cycles are connected through shared
/// edges are tried: if the cycles split into two edge-disjoint groups the
/// combination splits into two zero-sum parts. `Ok(None)` means none within
/// the bounds.
pub fn genus_one_combination_search(
    g: &ColouredGraph,
    c: &ColourOrdering,
    bounds: CombinationBounds,
    list: &CycleList,
) -> Result<Option<CombinationWitness>, CycleError> {
    check_ordering(g, c)?;
    let prep = Prepared::new(g.host(), &list.cycles);
    let mut comb = Combiner::new(&prep, g, c);
    let n = list.cycles.len();
    if bounds.max_cycles >= 1 {
        for i in 0..n {
            if let Some(w) = comb.try_combo(&[i], &[1]) {
                return Ok(Some(w));
            }
        }
    }
    if bounds.max_cycles >= 2 {
        let mults = multiplier_vectors(2, bounds.max_multiplier);
        for i in 0..n {
            for j in i + 1..n {
                if !prep.overlap(i, j) || comb.private_conflict(&[i, j]) {
                    continue;
                }
                for m in &mults {
                    if let Some(w) = comb.try_combo(&[i, j], m) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    if bounds.max_cycles >= 3 {
        let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && prep.overlap(i, j)).collect()).collect();
        for size in 3..=bounds.max_cycles {
            let mults = multiplier_vectors(size, bounds.max_multiplier);
            let mut found = None;
            for root in 0..n {
                let ext: Vec<usize> = adj[root].iter().copied().filter(|&u| u > root).collect();
                connected_sets(&adj, root, &mut vec![root], ext, size, &mut |set| {
                    if comb.private_conflict(set) {
                        return false;
                    }
                    for m in &mults {
                        if let Some(w) = comb.try_combo(set, m) {
                            found = Some(w);
                            return true;
                        }
                    }
                    false
                });
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
    }
    if list.truncated {
        Err(GraphError::Truncated.into())
    } else {
        Ok(None)
    }
}

/// Enumerates each connected vertex set of size `size` whose minimum is
/// `root` exactly once (extension-set scheme). `visit` returning `true` stops.
fn connected_sets(
    adj: &[Vec<usize>],
    root: usize,
    set: &mut Vec<usize>,
    mut ext: Vec<usize>,
    size: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if set.len() == size {
        return visit(set);
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root
                && !set.contains(&u)
                && !next.contains(&u)
                && !set.iter().any(|&s| adj[s].binary_search(&u).is_ok())
            {
                next.push(u);
            }
        }
        set.push(w);
        let stop = connected_sets(adj, root, set, next, size, visit);
        set.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Which property [`check_all_colourings`] evaluates per colouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "check")]
pub enum ColouringCheck {
    GenusOne {
        bounds: CombinationBounds,
        orderings: Vec<ColourOrdering>,
    },
    Convex {
        orderings: Vec<ColourOrdering>,
    },
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Witness found (genus one, convex) or all equations symmetric.
    Holds,
    /// No witness within the bounds, or a non-symmetric equation exists.
    Fails,
    /// The cycle list was truncated before a witness appeared.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Combination(CombinationWitness),
    Convex(ConvexWitness),
    Symmetry(SymmetryVerdict),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberVerdict {
    pub colouring: Vec<usize>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

/// One class of colourings under colour permutations.
///
/// The checks are only invariant under part of the permutation group, so a
/// class lists one member per coset of that part; the class verdict is the
/// worst member verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringRecord {
    pub class: usize,
    pub colouring: Vec<usize>,
    pub verdict: Verdict,
    pub members: Vec<MemberVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringSummary {
    pub classes: usize,
    pub colourings: usize,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub symmetry_reduction: bool,
    pub cycles: usize,
    pub cycles_truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringReport {
    pub records: Vec<ColouringRecord>,
    pub summary: ColouringSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub symmetry_reduction: bool,
    pub max_cycles: usize,
    pub max_cycle_len: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            symmetry_reduction: true,
            max_cycles: crate::graphs::DEFAULT_MAX_CYCLES,
            max_cycle_len: crate::graphs::DEFAULT_MAX_CYCLE_LEN,
            jobs: None,
        }
    }
}

/// Proper colourings of `g` with `k` colours in lexicographic order. With
/// `canonical` set only restricted-growth colourings are produced (colour
/// `i` first appears before colour `i + 1`), one per permutation class.
pub fn proper_colourings(g: &Graph, k: usize, canonical: bool) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut col = vec![usize::MAX; n];
    fn rec(g: &Graph, k: usize, canonical: bool, v: usize, used: usize, col: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if v == g.n() {
            out.push(col.to_vec());
            return;
        }
        let limit = if canonical { (used + 1).min(k) } else { k };
        for a in 0..limit {
            if g.neighbours(v).iter().any(|&w| w < v && col[w] == a) {
                continue;
            }
            col[v] = a;
            rec(g, k, canonical, v + 1, used.max(a + 1), col, out);
        }
        col[v] = usize::MAX;
    }
    rec(g, k, canonical, 0, 0, &mut col, &mut out);
    out
}

/// Evaluates `check` on every proper 3-colouring of `g`.
pub fn check_all_colourings(
    g: &Graph,
    check: &ColouringCheck,
    opts: CheckOptions,
) -> Result<ColouringReport, CycleError> {
    if g.n() > MAX_COLOURING_VERTICES {
        return Err(CycleError::ScaleExceeded(format!(
            "{} vertices, limit {MAX_COLOURING_VERTICES}",
            g.n()
        )));
    }
    let k3 = Graph::complete(3);
    let list = match check {
        ColouringCheck::Symmetric => CycleList {
            cycles: Vec::new(),
            truncated: false,
        },
        _ => enumerate_cycles(g, opts.max_cycles, opts.max_cycle_len),
    };
    let reps = proper_colourings(g, 3, opts.symmetry_reduction);
    // Coset representatives: swapping colours 0 and 2 negates every
    // cycle-equation at the identity ordering; every permutation preserves
    // or negates the wrap.
    let perms: Vec<[usize; 3]> = match (opts.symmetry_reduction, check) {
        (false, _) | (true, ColouringCheck::Symmetric) => vec![[0, 1, 2]],
        (true, _) => vec![[0, 1, 2], [1, 0, 2], [0, 2, 1]],
    };
    let evaluate = |sigma: &Vec<usize>| -> Result<Vec<MemberVerdict>, CycleError> {
        let mut members: Vec<MemberVerdict> = Vec::new();
        for p in &perms {
            let colouring: Vec<usize> = sigma.iter().map(|&a| p[a]).collect();
            if members.iter().any(|m| m.colouring == colouring) {
                continue;
            }
            let cg = ColouredGraph::new(g.clone(), k3.clone(), colouring.clone())?;
            let (verdict, witness) = evaluate_one(&cg, check, &list)?;
            members.push(MemberVerdict {
                colouring,
                verdict,
                witness,
            });
        }
        Ok(members)
    };
    let results: Vec<Result<Vec<MemberVerdict>, CycleError>> = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| CycleError::ScaleExceeded(e.to_string()))?
            .install(|| reps.par_iter().map(evaluate).collect()),
        None => reps.par_iter().map(evaluate).collect(),
    };
    let mut records = Vec::with_capacity(reps.len());
    let mut summary = ColouringSummary {
        classes: reps.len(),
        colourings: 0,
        holds: 0,
        fails: 0,
        inconclusive: 0,
        symmetry_reduction: opts.symmetry_reduction,
        cycles: list.cycles.len(),
        cycles_truncated: list.truncated,
    };
    for (class, (sigma, res)) in reps.iter().zip(results).enumerate() {
        let members = res?;
        let verdict = if members.iter().any(|m| m.verdict == Verdict::Fails) {
            Verdict::Fails
        } else if members.iter().any(|m| m.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        };
        summary.colourings += if opts.symmetry_reduction { orbit_size(sigma) } else { 1 };
        match verdict {
            Verdict::Holds => summary.holds += 1,
            Verdict::Fails => summary.fails += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
        records.push(ColouringRecord {
            class,
            colouring: sigma.clone(),
            verdict,
            members,
        });
    }
    Ok(ColouringReport { records, summary })
}

/// Number of labelled colourings in the permutation class of `sigma`.
fn orbit_size(sigma: &[usize]) -> usize {
    let used = sigma.iter().max().map_or(0, |&m| m + 1);
    (0..used).fold(1, |acc, i| acc * (3 - i))
}

fn evaluate_one(
    cg: &ColouredGraph,
    check: &ColouringCheck,
    list: &CycleList,
) -> Result<(Verdict, Option<Witness>), CycleError> {
    match check {
        ColouringCheck::Symmetric => {
            let v = eqs_all_symmetric(cg)?;
            let verdict = if v.holds() { Verdict::Holds } else { Verdict::Fails };
            Ok((verdict, Some(Witness::Symmetry(v))))
        }
        ColouringCheck::Convex { orderings } => {
            let mut truncated = false;
            for c in orderings {
                match convex_in(cg, c, list) {
                    Ok(Some(w)) => return Ok((Verdict::Holds, Some(Witness::Convex(w)))),
                    Ok(None) => {}
                    Err(CycleError::Graph(GraphError::Truncated)) => truncated = true,
                    Err(e) => return Err(e),
                }
            }
            Ok((if truncated { Verdict::Inconclusive } else { Verdict::Fails }, None))
        }
        ColouringCheck::GenusOne { bounds, orderings } => {
            let mut truncated = false;
            for c in orderings {
                match genus_one_combination_search(cg, c, *bounds, list) {
                    Ok(Some(w)) => return Ok((Verdict::Holds, Some(Witness::Combination(w)))),
                    Ok(None) => {}
                    Err(CycleError::Graph(GraphError::Truncated)) => truncated = true,
                    Err(e) => return Err(e),
                }
            }
            Ok((if truncated { Verdict::Inconclusive } else { Verdict::Fails }, None))
        }
    }
}
