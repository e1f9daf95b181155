//! Edge-disjoint packings, uniformly-far witnesses, the uniformization
//! extraction and exact path and 5-cycle counts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

use crate::graphs::{Graph, GraphError};

/// Largest pattern accepted by [`greedy_packing`].
pub const MAX_PATTERN: usize = 5;
/// Largest host for [`count_c5`].
pub const C5_MAX_N: usize = 300;
/// Default cap on random-partition retries.
pub const DEFAULT_RETRIES: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RemovalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("pattern has {0} vertices; at most {MAX_PATTERN} are supported")]
    PatternTooLarge(usize),
    #[error("packing has {have} copies, at least {need} are required")]
    PackingTooSmall { have: usize, need: f64 },
    #[error("packing is not valid: {0}")]
    InvalidPacking(String),
    #[error("no partition reached the survival target after {0} attempts")]
    RetriesExhausted(u32),
    #[error("graph has no triangles")]
    NoTriangles,
    #[error("{n} vertices exceed the exact-count limit {max}")]
    ScaleExceeded { n: usize, max: usize },
    #[error("parts must have one label per vertex")]
    PartsLength,
    #[error("only {aligned} of {packing} packed triangles meet all three parts")]
    FewAligned { aligned: usize, packing: usize },
}

/// Edge-disjoint copies of a pattern; slot `i` of a copy is the image of
/// pattern vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FCopyPacking {
    pub copies: Vec<Vec<usize>>,
}

impl FCopyPacking {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Host edges of one copy, each as `(min, max)`.
    pub fn copy_edges(pattern: &Graph, copy: &[usize]) -> Vec<(usize, usize)> {
        pattern
            .edges()
            .iter()
            .map(|&(i, j)| (copy[i].min(copy[j]), copy[i].max(copy[j])))
            .collect()
    }

    /// Checks that each copy is an injective image containing the pattern's
    /// edges and that copies share no edge.
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> Result<(), String> {
        let mut used = HashSet::new();
        for (k, copy) in self.copies.iter().enumerate() {
            if copy.len() != pattern.n() {
                return Err(format!("copy {k} has {} slots", copy.len()));
            }
            if copy.iter().any(|&v| v >= host.n()) {
                return Err(format!("copy {k} names a vertex outside the host"));
            }
            if copy.iter().collect::<HashSet<_>>().len() != copy.len() {
                return Err(format!("copy {k} repeats a vertex"));
            }
            for e in Self::copy_edges(pattern, copy) {
                if !host.has_edge(e.0, e.1) {
                    return Err(format!("copy {k} needs missing edge {e:?}"));
                }
                if !used.insert(e) {
                    return Err(format!("copy {k} reuses edge {e:?}"));
                }
            }
        }
        Ok(())
    }
}

struct Packer<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    parts: Option<&'a [usize]>,
    used: HashSet<(usize, usize)>,
    /// Pattern neighbours of slot `i` among slots `< i`.
    back: Vec<Vec<usize>>,
    map: Vec<usize>,
    taken: Vec<bool>,
    out: Vec<Vec<usize>>,
}

impl Packer<'_> {
    fn free(&self, u: usize, v: usize) -> bool {
        self.host.has_edge(u, v) && !self.used.contains(&(u.min(v), u.max(v)))
    }

    /// Scans all maps extending `map[..i]` in lexicographic order and packs
    /// each one whose edges are still free.
    fn scan(&mut self, i: usize) {
        if i == self.pattern.n() {
            let copy = self.map.clone();
            for e in FCopyPacking::copy_edges(self.pattern, &copy) {
                self.used.insert(e);
            }
            self.out.push(copy);
            return;
        }
        for v in 0..self.host.n() {
            if self.taken[v] || self.parts.is_some_and(|p| p[v] != i) {
                continue;
            }
            if !self.back[i].iter().all(|&j| self.free(self.map[j], v)) {
                continue;
            }
            self.taken[v] = true;
            self.map[i] = v;
            self.scan(i + 1);
            self.taken[v] = false;
            // A packed copy may have consumed an edge of the prefix.
            if !(1..i).all(|k| self.back[k].iter().all(|&j| self.free(self.map[j], self.map[k]))) {
                return;
            }
        }
    }
}

/// Maximal edge-disjoint family of pattern copies, taken in lexicographic
/// order of the vertex tuples. With `parts`, slot `i` must lie in part `i`.
pub fn greedy_packing(host: &Graph, pattern: &Graph, parts: Option<&[usize]>) -> Result<FCopyPacking, RemovalError> {
    if pattern.n() > MAX_PATTERN {
        return Err(RemovalError::PatternTooLarge(pattern.n()));
    }
    if parts.is_some_and(|p| p.len() != host.n()) {
        return Err(RemovalError::PartsLength);
    }
    if pattern.edge_count() == 0 || pattern.n() > host.n() {
        return Ok(FCopyPacking::default());
    }
    let back = (0..pattern.n())
        .map(|i| pattern.neighbours(i).iter().copied().filter(|&j| j < i).collect())
        .collect();
    let mut p = Packer {
        host,
        pattern,
        parts,
        used: HashSet::new(),
        back,
        map: vec![0; pattern.n()],
        taken: vec![false; host.n()],
        out: Vec::new(),
    };
    p.scan(0);
    Ok(FCopyPacking { copies: p.out })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformFarWitness {
    /// Part of each host vertex, indexed by pattern vertex.
    pub parts: Vec<usize>,
    pub packing: FCopyPacking,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
pub enum FarFailure {
    #[error("witness has {got} part labels for {expected} vertices")]
    PartsLength { expected: usize, got: usize },
    #[error("vertex {0} has a part label outside the pattern")]
    PartOutOfRange(usize),
    #[error("edge ({0}, {1}) joins parts that are not adjacent in the pattern")]
    NotPartite(usize, usize),
    #[error("packing is not valid: {0}")]
    InvalidPacking(String),
    #[error("copy {copy} puts slot {slot} outside its part")]
    Misaligned { copy: usize, slot: usize },
    #[error("vertex {vertex} lies in {copies} copies, needs {needed}")]
    LowCoverage { vertex: usize, copies: usize, needed: f64 },
    #[error("vertex {vertex} has {got} neighbours in part {part}, needs {needed}")]
    LowDegree { vertex: usize, part: usize, got: usize, needed: f64 },
    #[error("part {part} has {size} vertices, needs {needed}")]
    SmallPart { part: usize, size: usize, needed: f64 },
    #[error("{copies} copies are fewer than the {needed} edge deletions implied")]
    TooFewCopies { copies: usize, needed: f64 },
}

/// Checks the witness definition, then the consequences it implies for
/// degrees into adjacent parts, part sizes and the number of copies.
pub fn verify_uniform_far(host: &Graph, pattern: &Graph, w: &UniformFarWitness) -> Result<(), FarFailure> {
    let n = host.n();
    if w.parts.len() != n {
        return Err(FarFailure::PartsLength {
            expected: n,
            got: w.parts.len(),
        });
    }
    if let Some(v) = w.parts.iter().position(|&p| p >= pattern.n()) {
        return Err(FarFailure::PartOutOfRange(v));
    }
    if let Some(&(u, v)) = host.edges().iter().find(|&&(u, v)| !pattern.has_edge(w.parts[u], w.parts[v])) {
        return Err(FarFailure::NotPartite(u, v));
    }
    w.packing.validate(host, pattern).map_err(FarFailure::InvalidPacking)?;
    let mut cover = vec![0usize; n];
    for (k, copy) in w.packing.copies.iter().enumerate() {
        if let Some(slot) = (0..copy.len()).find(|&i| w.parts[copy[i]] != i) {
            return Err(FarFailure::Misaligned { copy: k, slot });
        }
        for &v in copy {
            cover[v] += 1;
        }
    }
    let needed = w.eps * n as f64;
    if let Some(v) = (0..n).find(|&v| (cover[v] as f64) < needed) {
        return Err(FarFailure::LowCoverage {
            vertex: v,
            copies: cover[v],
            needed,
        });
    }
    for v in 0..n {
        for &j in pattern.neighbours(w.parts[v]) {
            let got = host.neighbours(v).iter().filter(|&&u| w.parts[u] == j).count();
            if (got as f64) < needed {
                return Err(FarFailure::LowDegree {
                    vertex: v,
                    part: j,
                    got,
                    needed,
                });
            }
        }
    }
    for part in (0..pattern.n()).filter(|&i| pattern.degree(i) > 0) {
        let size = w.parts.iter().filter(|&&p| p == part).count();
        if (size as f64) < needed {
            return Err(FarFailure::SmallPart { part, size, needed });
        }
    }
    let deletions = w.eps / pattern.n() as f64 * (n * n) as f64;
    if (w.packing.len() as f64) < deletions {
        return Err(FarFailure::TooFewCopies {
            copies: w.packing.len(),
            needed: deletions,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Uniformized {
    /// Original vertex behind each vertex of `graph`.
    pub vertices: Vec<usize>,
    pub graph: Graph,
    pub witness: UniformFarWitness,
    pub attempts: u32,
    /// Copies aligned with the accepted random partition.
    pub survivors: usize,
    /// Copies left after sparsification.
    pub kept: usize,
}

/// `|F|^|F|`.
pub fn pattern_power(pattern: &Graph) -> f64 {
    (pattern.n() as f64).powi(pattern.n() as i32)
}

/// Extracts a uniformly far subgraph: a seeded random partition keeping at
/// least a `|F|^-|F|` share of the packing, then repeated deletion of the
/// copies at vertices covered fewer than `eps / (2 |F|^|F|) * n` times.
pub fn uniformize(
    host: &Graph,
    pattern: &Graph,
    packing: &FCopyPacking,
    eps: f64,
    seed: u64,
    retries: u32,
) -> Result<Uniformized, RemovalError> {
    packing.validate(host, pattern).map_err(RemovalError::InvalidPacking)?;
    let n = host.n();
    let need = eps * (n * n) as f64;
    if packing.is_empty() || (packing.len() as f64) < need {
        return Err(RemovalError::PackingTooSmall {
            have: packing.len(),
            need,
        });
    }
    let k = pattern.n();
    let power = pattern_power(pattern);
    let target = packing.len() as f64 / power;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = None;
    for attempt in 1..=retries {
        let parts: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let alive: Vec<usize> = (0..packing.len())
            .filter(|&c| packing.copies[c].iter().enumerate().all(|(i, &v)| parts[v] == i))
            .collect();
        if alive.len() as f64 >= target {
            accepted = Some((attempt, parts, alive));
            break;
        }
    }
    let Some((attempts, parts, mut alive)) = accepted else {
        return Err(RemovalError::RetriesExhausted(retries));
    };
    let survivors = alive.len();
    let threshold = eps / (2.0 * power) * n as f64;
    loop {
        let mut cover = vec![0usize; n];
        for &c in &alive {
            for &v in &packing.copies[c] {
                cover[v] += 1;
            }
        }
        let Some(v) = (0..n).find(|&v| cover[v] > 0 && (cover[v] as f64) < threshold) else {
            break;
        };
        alive.retain(|&c| !packing.copies[c].contains(&v));
    }
    let mut vertices: Vec<usize> = alive.iter().flat_map(|&c| packing.copies[c].iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in vertices.iter().enumerate() {
        pos[v] = i;
    }
    let copies: Vec<Vec<usize>> = alive.iter().map(|&c| packing.copies[c].iter().map(|&v| pos[v]).collect()).collect();
    let edges: Vec<(usize, usize)> = copies.iter().flat_map(|c| FCopyPacking::copy_edges(pattern, c)).collect();
    let graph = Graph::new(vertices.len(), edges)?;
    let witness = UniformFarWitness {
        parts: vertices.iter().map(|&v| parts[v]).collect(),
        packing: FCopyPacking { copies },
        eps: eps / (2.0 * power),
    };
    Ok(Uniformized {
        vertices,
        graph,
        kept: alive.len(),
        witness,
        attempts,
        survivors,
    })
}

fn bitsets(host: &Graph, keep: impl Fn(usize) -> bool) -> Vec<Vec<u64>> {
    let words = host.n().div_ceil(64);
    (0..host.n())
        .map(|v| {
            let mut row = vec![0u64; words];
            for &u in host.neighbours(v).iter().filter(|&&u| keep(u)) {
                row[u / 64] |= 1 << (u % 64);
            }
            row
        })
        .collect()
}

/// Number of paths `x1 x2 x3 x4` with `x1 != x4` in part 0, `x2` in part 1
/// and `x3` in part 2, counted as vertex sequences. Other labels are
/// ignored.
pub fn count_p4_aligned(host: &Graph, parts: &[usize]) -> Result<u128, RemovalError> {
    if parts.len() != host.n() {
        return Err(RemovalError::PartsLength);
    }
    let into_a = bitsets(host, |u| parts[u] == 0);
    let deg_a: Vec<u128> = into_a.iter().map(|r| r.iter().map(|w| w.count_ones() as u128).sum()).collect();
    let mut total = 0u128;
    for &(u, v) in host.edges() {
        let (b, c) = match (parts[u], parts[v]) {
            (1, 2) => (u, v),
            (2, 1) => (v, u),
            _ => continue,
        };
        let common: u128 = into_a[b].iter().zip(&into_a[c]).map(|(x, y)| (x & y).count_ones() as u128).sum();
        total += deg_a[b] * deg_a[c] - common;
    }
    Ok(total)
}

/// Number of 5-cycles, from traces of adjacency powers with the
/// degenerate closed walks removed.
pub fn count_c5(host: &Graph) -> Result<u128, RemovalError> {
    let n = host.n();
    if n > C5_MAX_N {
        return Err(RemovalError::ScaleExceeded { n, max: C5_MAX_N });
    }
    let rows = bitsets(host, |_| true);
    // Walks of length two and three.
    let mut w2 = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let c = rows[i].iter().zip(&rows[j]).map(|(x, y)| (x & y).count_ones() as i64).sum();
            w2[i][j] = c;
            w2[j][i] = c;
        }
    }
    let mut tr5 = 0i128;
    let mut tr3 = 0i128;
    let mut deg_weighted = 0i128;
    for i in 0..n {
        for j in 0..n {
            let w3: i64 = host.neighbours(j).iter().map(|&k| w2[i][k]).sum();
            tr5 += w2[i][j] as i128 * w3 as i128;
            if i == j {
                tr3 += w3 as i128;
                deg_weighted += (host.degree(i) as i128 - 2) * w3 as i128;
            }
        }
    }
    let ten = tr5 - 5 * tr3 - 5 * deg_weighted;
    debug_assert!(ten >= 0 && ten % 10 == 0);
    Ok((ten / 10) as u128)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStep {
    pub survivors: Vec<usize>,
    /// Packed triangles inside the current graph.
    pub mass: u64,
    /// `mass / (n * |survivors|)`.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseCoreReport {
    pub n: usize,
    pub delta: f64,
    pub seed: u64,
    /// Size of the greedy triangle packing of the input.
    pub packing: usize,
    /// `packing / n^2`.
    pub p: f64,
    pub attempts: u32,
    /// Packed triangles with one vertex in each part.
    pub aligned: usize,
    /// Part of each vertex: 0, 1, 2 for the first, second, third part.
    pub parts: Vec<usize>,
    /// Refinement of the first part; the last entry is the final set.
    pub first_part: Vec<RefinementStep>,
    pub second_part: Vec<RefinementStep>,
    pub iteration_bound: f64,
    pub core: Vec<usize>,
    pub core_mass: u64,
    /// Aligned paths closed by each surviving second-part vertex.
    pub yields: Vec<(usize, u128)>,
    pub yield_total: u128,
    pub c5_input: Option<u128>,
    pub c5_core: Option<u128>,
}

impl DenseCoreReport {
    /// Refinement steps taken in both passes.
    pub fn steps(&self) -> (usize, usize) {
        (self.first_part.len() - 2, self.second_part.len() - 2)
    }
}

/// One refinement pass over `side`: repeatedly keep the vertices lying in
/// at least `delta * p_i * n` packed triangles, stopping once a step keeps
/// at least a `delta` share.
fn refine(triangles: &[[usize; 3]], alive: &mut [bool], side: &[usize], n: usize, delta: f64) -> Vec<RefinementStep> {
    let mass = |alive: &[bool]| triangles.iter().filter(|t| t.iter().all(|&v| alive[v])).count() as u64;
    let step = |set: Vec<usize>, alive: &[bool]| {
        let m = mass(alive);
        let density = if set.is_empty() { 0.0 } else { m as f64 / (n * set.len()) as f64 };
        RefinementStep {
            survivors: set,
            mass: m,
            density,
        }
    };
    let mut out = vec![step(side.iter().copied().filter(|&v| alive[v]).collect(), alive)];
    loop {
        let cur = out.last().unwrap();
        let mut load = vec![0usize; alive.len()];
        for t in triangles.iter().filter(|t| t.iter().all(|&v| alive[v])) {
            for &v in t {
                load[v] += 1;
            }
        }
        let threshold = delta * cur.density * n as f64;
        let next: Vec<usize> = cur.survivors.iter().copied().filter(|&v| load[v] as f64 >= threshold).collect();
        let stop = next.len() as f64 >= delta * cur.survivors.len() as f64 || next.is_empty();
        for &v in &cur.survivors {
            alive[v] = false;
        }
        for &v in &next {
            alive[v] = true;
        }
        out.push(step(next, alive));
        if stop {
            return out;
        }
    }
}

/// Packed triangles meeting all three parts, oriented by part.
fn aligned_triangles(packing: &FCopyPacking, parts: &[usize]) -> Vec<[usize; 3]> {
    packing
        .copies
        .iter()
        .filter_map(|c| {
            let mut t = [usize::MAX; 3];
            for &v in c {
                if parts[v] < 3 {
                    t[parts[v]] = v;
                }
            }
            t.iter().all(|&v| v != usize::MAX).then_some(t)
        })
        .collect()
}

/// Runs the two-pass refinement towards a dense core and measures the
/// 5-cycles it certifies. Without `parts`, seeded balanced tripartitions
/// are drawn until a fifth of the packing is aligned.
pub fn dense_core_c5(
    host: &Graph,
    delta: f64,
    seed: u64,
    retries: u32,
    parts: Option<&[usize]>,
) -> Result<DenseCoreReport, RemovalError> {
    let n = host.n();
    let k3 = Graph::complete(3);
    let packing = greedy_packing(host, &k3, None)?;
    if packing.is_empty() {
        return Err(RemovalError::NoTriangles);
    }
    let (attempts, parts, triangles) = if let Some(parts) = parts {
        if parts.len() != n {
            return Err(RemovalError::PartsLength);
        }
        let aligned = aligned_triangles(&packing, parts);
        if aligned.len() * 5 < packing.len() {
            return Err(RemovalError::FewAligned {
                aligned: aligned.len(),
                packing: packing.len(),
            });
        }
        (0, parts.to_vec(), aligned)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = None;
        for attempt in 1..=retries {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut parts = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                parts[v] = i * 3 / n;
            }
            let aligned = aligned_triangles(&packing, &parts);
            if aligned.len() * 5 >= packing.len() {
                chosen = Some((attempt, parts, aligned));
                break;
            }
        }
        chosen.ok_or(RemovalError::RetriesExhausted(retries))?
    };
    let mut alive = vec![true; n];
    let side = |p: usize| (0..n).filter(|&v| parts[v] == p).collect::<Vec<_>>();
    let first_part = refine(&triangles, &mut alive, &side(0), n, delta);
    let second_part = refine(&triangles, &mut alive, &side(1), n, delta);
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let core_mass = second_part.last().unwrap().mass;
    // The graph after deleting the edges outside aligned triangles.
    let edges: HashSet<(usize, usize)> = triangles
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    let aligned_graph = Graph::new(n, edges)?;
    let final_first: HashSet<usize> = first_part.last().unwrap().survivors.iter().copied().collect();
    let mut yields = Vec::new();
    for &x in &second_part.last().unwrap().survivors {
        let labels: Vec<usize> = (0..n)
            .map(|v| match parts[v] {
                0 if final_first.contains(&v) && aligned_graph.has_edge(x, v) => 0,
                0 => 3,
                _ if v == x => 3,
                p => p,
            })
            .collect();
        yields.push((x, count_p4_aligned(&aligned_graph, &labels)?));
    }
    let core_graph = aligned_graph.induced(&core);
    Ok(DenseCoreReport {
        n,
        delta,
        seed,
        packing: packing.len(),
        p: packing.len() as f64 / (n * n) as f64,
        attempts,
        aligned: triangles.len(),
        parts,
        first_part,
        second_part,
        iteration_bound: (n as f64).ln() / (1.0 / delta).ln(),
        core_mass,
        yield_total: yields.iter().map(|y| y.1).sum(),
        yields,
        c5_input: count_c5(host).ok(),
        c5_core: count_c5(&core_graph).ok(),
        core,
    })
}
