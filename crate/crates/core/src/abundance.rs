//! Abundance certificates: derivation trees whose nodes rebuild a coloured
//! graph from their children, a verifier for them, and searches that emit
//! them.
//!
//! Every node names its output graph explicitly. A node is accepted when its
//! output equals, vertex for vertex, the graph its step builds from the
//! declared outputs of its children. Vertex layouts per step:
//!
//! * `Peel`: the child's vertices, then the new vertex.
//! * `GlueBlowup`: the first child's vertices other than `u` and `v` in
//!   increasing order, then the second child's vertices.
//! * `Join`: the first child's vertices, then the second child's.
//! * `Subgraph`: output vertex `i` is child vertex `vertices[i]`.
//! * `Blowup`: consecutive copies, as in [`ColouredGraph::blow_up`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{ColouredGraph, Graph, GraphError};

/// Largest output of [`build_hm`].
pub const HM_MAX_VERTICES: usize = 1_000_000;
/// Edge count up to which [`splittable_decompose`] runs without a budget.
pub const SPLIT_EXHAUSTIVE_EDGES: usize = 20;
/// Search-node budget of [`splittable_decompose`] above that size.
pub const SPLIT_BUDGET: u64 = 1_000_000;

/// Output graph of a certificate node, kept as plain data so that a
/// malformed node is reported against its id rather than at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeGraph {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub sigma: Vec<usize>,
}

impl NodeGraph {
    pub fn of(g: &ColouredGraph) -> Self {
        NodeGraph {
            n: g.host().n(),
            edges: g.host().edges().iter().map(|&(u, v)| [u, v]).collect(),
            sigma: g.sigma().to_vec(),
        }
    }

    pub fn to_coloured(&self, pattern: &Graph) -> Result<ColouredGraph, GraphError> {
        let host = Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?;
        ColouredGraph::new(host, pattern.clone(), self.sigma.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum Step {
    /// Leaf: at most one edge.
    Atom {},
    /// Adds a vertex of colour `colour` adjacent to `attached`.
    Peel { colour: usize, attached: Vec<usize> },
    /// Replaces the edge `edge = [u, v]` of the first child by the second
    /// child, identifying copies of `u` with `u_set` and of `v` with `v_set`.
    GlueBlowup {
        edge: [usize; 2],
        u_set: Vec<usize>,
        v_set: Vec<usize>,
    },
    /// Disjoint union plus all edges from colour `a` of the first child to
    /// colour `a_prime` of the second and from colour `b` of the first to
    /// colour `a` of the second.
    Join { a: usize, b: usize, a_prime: usize },
    Subgraph {
        vertices: Vec<usize>,
        edges: Vec<[usize; 2]>,
    },
    Blowup { sizes: Vec<usize> },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Atom {} => "Atom",
            Step::Peel { .. } => "Peel",
            Step::GlueBlowup { .. } => "GlueBlowup",
            Step::Join { .. } => "Join",
            Step::Subgraph { .. } => "Subgraph",
            Step::Blowup { .. } => "Blowup",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Step::Atom {} => 0,
            Step::GlueBlowup { .. } | Step::Join { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateNode {
    pub id: String,
    #[serde(flatten)]
    pub step: Step,
    #[serde(default)]
    pub children: Vec<String>,
    pub output_graph: NodeGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pattern: Graph,
    pub root: String,
    pub nodes: Vec<CertificateNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum Violation {
    #[error("root node is missing")]
    MissingRoot,
    #[error("id is used by more than one node")]
    DuplicateId,
    #[error("child `{0}` does not exist")]
    UnknownChild(String),
    #[error("node is not reachable from the root")]
    Unreachable,
    #[error("node lies on a cycle of child references")]
    CyclicReference,
    #[error("{step} takes {expected} children, got {got}")]
    Arity { step: &'static str, expected: usize, got: usize },
    #[error("output graph is invalid: {0}")]
    InvalidGraph(String),
    #[error("atom has {0} edges")]
    AtomTooLarge(usize),
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} is listed twice")]
    RepeatedVertex(usize),
    #[error("attached vertices carry several colours")]
    PeelNotMonochromatic,
    #[error("colour {new} is not adjacent to colour {attached} in the pattern")]
    PeelColourNotAdjacent { new: usize, attached: usize },
    #[error("colour {0} is outside the pattern")]
    ColourOutOfRange(usize),
    #[error("({0}, {1}) is not an edge of the first child")]
    GlueNotAnEdge(usize, usize),
    #[error("vertex {vertex} of the second child has colour {got}, expected {expected}")]
    GlueWrongColour { vertex: usize, got: usize, expected: usize },
    #[error("({0}, {1}) is not an edge of the pattern")]
    NotPatternEdge(usize, usize),
    #[error("edge ({0}, {1}) is not present in the child")]
    SubgraphEdgeMissing(usize, usize),
    #[error("blow-up rejected: {0}")]
    Blowup(String),
    #[error("declared output differs from the rebuilt graph: {0}")]
    OutputMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("node `{node}`: {violation}")]
pub struct CertificateError {
    pub node: String,
    pub violation: Violation,
}

fn fail<T>(node: &str, violation: Violation) -> Result<T, CertificateError> {
    Err(CertificateError {
        node: node.to_string(),
        violation,
    })
}

fn check_vertices(list: &[usize], n: usize) -> Result<(), Violation> {
    let mut seen = HashSet::new();
    for &v in list {
        if v >= n {
            return Err(Violation::VertexOutOfRange { vertex: v, n });
        }
        if !seen.insert(v) {
            return Err(Violation::RepeatedVertex(v));
        }
    }
    Ok(())
}

fn build(pattern: &Graph, n: usize, edges: Vec<(usize, usize)>, sigma: Vec<usize>) -> Result<ColouredGraph, Violation> {
    let host = Graph::new(n, edges).map_err(|e| Violation::InvalidGraph(e.to_string()))?;
    ColouredGraph::new(host, pattern.clone(), sigma).map_err(|e| Violation::InvalidGraph(e.to_string()))
}

/// Disjoint union of two coloured graphs, second shifted past the first.
fn union_parts(h: &ColouredGraph, k: &ColouredGraph) -> (usize, Vec<(usize, usize)>, Vec<usize>) {
    let off = h.host().n();
    let mut edges = h.host().edges().to_vec();
    edges.extend(k.host().edges().iter().map(|&(u, v)| (u + off, v + off)));
    let mut sigma = h.sigma().to_vec();
    sigma.extend_from_slice(k.sigma());
    (off + k.host().n(), edges, sigma)
}

/// Rebuilds the output of `step` from its children's graphs.
pub fn apply_step(pattern: &Graph, step: &Step, children: &[&ColouredGraph]) -> Result<ColouredGraph, Violation> {
    if children.len() != step.arity() {
        return Err(Violation::Arity {
            step: step.name(),
            expected: step.arity(),
            got: children.len(),
        });
    }
    match step {
        Step::Atom {} => unreachable!("atoms are checked against their own output"),
        Step::Peel { colour, attached } => {
            let h = children[0];
            let n = h.host().n();
            check_vertices(attached, n)?;
            if *colour >= pattern.n() {
                return Err(Violation::ColourOutOfRange(*colour));
            }
            if let Some(&first) = attached.first() {
                let c = h.colour(first);
                if attached.iter().any(|&v| h.colour(v) != c) {
                    return Err(Violation::PeelNotMonochromatic);
                }
                if !pattern.has_edge(*colour, c) {
                    return Err(Violation::PeelColourNotAdjacent {
                        new: *colour,
                        attached: c,
                    });
                }
            }
            let mut edges = h.host().edges().to_vec();
            edges.extend(attached.iter().map(|&v| (v, n)));
            let mut sigma = h.sigma().to_vec();
            sigma.push(*colour);
            build(pattern, n + 1, edges, sigma)
        }
        Step::GlueBlowup { edge, u_set, v_set } => {
            let (h, k) = (children[0], children[1]);
            let [u, v] = *edge;
            let n = h.host().n();
            check_vertices(&[u, v], n)?;
            if !h.host().has_edge(u, v) {
                return Err(Violation::GlueNotAnEdge(u, v));
            }
            let m = k.host().n();
            check_vertices(&[u_set.as_slice(), v_set.as_slice()].concat(), m)?;
            for (set, expected) in [(u_set, h.colour(u)), (v_set, h.colour(v))] {
                if let Some(&x) = set.iter().find(|&&x| k.colour(x) != expected) {
                    return Err(Violation::GlueWrongColour {
                        vertex: x,
                        got: k.colour(x),
                        expected,
                    });
                }
            }
            let rest: Vec<usize> = (0..n).filter(|&w| w != u && w != v).collect();
            let mut pos = vec![usize::MAX; n];
            for (i, &w) in rest.iter().enumerate() {
                pos[w] = i;
            }
            let off = rest.len();
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for &(x, y) in h.host().edges() {
                if pos[x] != usize::MAX && pos[y] != usize::MAX {
                    edges.push((pos[x], pos[y]));
                }
            }
            for (centre, other, set) in [(u, v, u_set), (v, u, v_set)] {
                for &w in h.host().neighbours(centre) {
                    if w != other {
                        edges.extend(set.iter().map(|&x| (pos[w], x + off)));
                    }
                }
            }
            edges.extend(k.host().edges().iter().map(|&(x, y)| (x + off, y + off)));
            let mut sigma: Vec<usize> = rest.iter().map(|&w| h.colour(w)).collect();
            sigma.extend_from_slice(k.sigma());
            build(pattern, off + m, edges, sigma)
        }
        Step::Join { a, b, a_prime } => {
            for &c in [a, b, a_prime] {
                if c >= pattern.n() {
                    return Err(Violation::ColourOutOfRange(c));
                }
            }
            for (x, y) in [(*a, *b), (*a, *a_prime)] {
                if !pattern.has_edge(x, y) {
                    return Err(Violation::NotPatternEdge(x, y));
                }
            }
            let (h, k) = (children[0], children[1]);
            let off = h.host().n();
            let (n, mut edges, sigma) = union_parts(h, k);
            for (left, right) in [(*a, *a_prime), (*b, *a)] {
                for x in h.class(left) {
                    edges.extend(k.class(right).into_iter().map(|y| (x, y + off)));
                }
            }
            build(pattern, n, edges, sigma)
        }
        Step::Subgraph { vertices, edges } => {
            let h = children[0];
            check_vertices(vertices, h.host().n())?;
            let mut out = Vec::with_capacity(edges.len());
            for e in edges {
                check_vertices(&e[..], vertices.len())?;
                if !h.host().has_edge(vertices[e[0]], vertices[e[1]]) {
                    return Err(Violation::SubgraphEdgeMissing(e[0], e[1]));
                }
                out.push((e[0], e[1]));
            }
            let sigma = vertices.iter().map(|&v| h.colour(v)).collect();
            build(pattern, vertices.len(), out, sigma)
        }
        Step::Blowup { sizes } => children[0].blow_up(sizes).map_err(|e| Violation::Blowup(e.to_string())),
    }
}

fn describe_mismatch(declared: &ColouredGraph, rebuilt: &ColouredGraph) -> String {
    if declared.host().n() != rebuilt.host().n() {
        return format!("{} vertices declared, {} rebuilt", declared.host().n(), rebuilt.host().n());
    }
    if let Some(v) = (0..declared.host().n()).find(|&v| declared.colour(v) != rebuilt.colour(v)) {
        return format!(
            "vertex {v} declared colour {}, rebuilt {}",
            declared.colour(v),
            rebuilt.colour(v)
        );
    }
    let a: BTreeSet<_> = declared.host().edges().iter().collect();
    let b: BTreeSet<_> = rebuilt.host().edges().iter().collect();
    if let Some((u, v)) = b.difference(&a).next() {
        return format!("edge ({u}, {v}) missing from the declared output");
    }
    if let Some((u, v)) = a.difference(&b).next() {
        return format!("edge ({u}, {v}) is not produced by the step");
    }
    "graphs differ".into()
}

impl Certificate {
    pub fn node(&self, id: &str) -> Option<&CertificateNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Checks the tree shape: unique ids, known children, an acyclic
    /// reference graph, every node reachable from the root.
    fn check_shape(&self) -> Result<HashMap<&str, usize>, CertificateError> {
        let mut index = HashMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if index.insert(node.id.as_str(), i).is_some() {
                return fail(&node.id, Violation::DuplicateId);
            }
        }
        for node in &self.nodes {
            if let Some(c) = node.children.iter().find(|c| !index.contains_key(c.as_str())) {
                return fail(&node.id, Violation::UnknownChild(c.clone()));
            }
        }
        let Some(&root) = index.get(self.root.as_str()) else {
            return fail(&self.root, Violation::MissingRoot);
        };
        // 0 unseen, 1 on stack, 2 done.
        let mut state = vec![0u8; self.nodes.len()];
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (i, ref mut next)) = stack.last_mut() {
            if let Some(c) = self.nodes[i].children.get(*next) {
                *next += 1;
                let j = index[c.as_str()];
                match state[j] {
                    0 => {
                        state[j] = 1;
                        stack.push((j, 0));
                    }
                    1 => return fail(&self.nodes[j].id, Violation::CyclicReference),
                    _ => {}
                }
            } else {
                state[i] = 2;
                stack.pop();
            }
        }
        if let Some(i) = state.iter().position(|&s| s == 0) {
            return fail(&self.nodes[i].id, Violation::Unreachable);
        }
        Ok(index)
    }

    fn check_node(&self, node: &CertificateNode, graphs: &[Result<ColouredGraph, Violation>], index: &HashMap<&str, usize>) -> Result<(), CertificateError> {
        let own = match &graphs[index[node.id.as_str()]] {
            Ok(g) => g,
            Err(v) => return fail(&node.id, v.clone()),
        };
        if let Step::Atom {} = node.step {
            if !node.children.is_empty() {
                return fail(
                    &node.id,
                    Violation::Arity {
                        step: "Atom",
                        expected: 0,
                        got: node.children.len(),
                    },
                );
            }
            let e = own.host().edge_count();
            return if e > 1 { fail(&node.id, Violation::AtomTooLarge(e)) } else { Ok(()) };
        }
        let mut kids = Vec::with_capacity(node.children.len());
        for c in &node.children {
            match &graphs[index[c.as_str()]] {
                Ok(g) => kids.push(g),
                Err(_) => return fail(c, Violation::InvalidGraph("child output is invalid".into())),
            }
        }
        let rebuilt = apply_step(&self.pattern, &node.step, &kids).map_err(|violation| CertificateError {
            node: node.id.clone(),
            violation,
        })?;
        if &rebuilt != own {
            return fail(&node.id, Violation::OutputMismatch(describe_mismatch(own, &rebuilt)));
        }
        Ok(())
    }

    /// Accepts iff every node satisfies its side conditions and rebuilds its
    /// declared output. Returns the root graph; on rejection, the first
    /// failing node in list order.
    pub fn verify(&self) -> Result<ColouredGraph, CertificateError> {
        let index = self.check_shape()?;
        let graphs: Vec<Result<ColouredGraph, Violation>> = self
            .nodes
            .par_iter()
            .map(|n| n.output_graph.to_coloured(&self.pattern).map_err(|e| Violation::InvalidGraph(e.to_string())))
            .collect();
        let results: Vec<Result<(), CertificateError>> =
            self.nodes.par_iter().map(|n| self.check_node(n, &graphs, &index)).collect();
        results.into_iter().collect::<Result<(), _>>()?;
        Ok(graphs[index[self.root.as_str()]].clone().expect("checked above"))
    }

    /// Replaces every `Join` by the two peels and the glue it abbreviates.
    /// Added nodes get ids `<join id>/v` and `<join id>/u`.
    pub fn expand_joins(&self) -> Result<Certificate, CertificateError> {
        let index = self.check_shape()?;
        let mut out = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let Step::Join { a, b, a_prime } = node.step else {
                out.push(node.clone());
                continue;
            };
            if node.children.len() != 2 {
                return fail(
                    &node.id,
                    Violation::Arity {
                        step: "Join",
                        expected: 2,
                        got: node.children.len(),
                    },
                );
            }
            let graph_of = |id: &str| {
                self.nodes[index[id]].output_graph.to_coloured(&self.pattern).map_err(|e| CertificateError {
                    node: id.to_string(),
                    violation: Violation::InvalidGraph(e.to_string()),
                })
            };
            let h = graph_of(&node.children[0])?;
            let k = graph_of(&node.children[1])?;
            let n = h.host().n();
            let err = |violation| CertificateError {
                node: node.id.clone(),
                violation,
            };
            let peel_v = Step::Peel {
                colour: a,
                attached: h.class(b),
            };
            let with_v = apply_step(&self.pattern, &peel_v, &[&h]).map_err(err)?;
            let mut attached = h.class(a);
            attached.push(n);
            let peel_u = Step::Peel {
                colour: a_prime,
                attached,
            };
            let with_uv = apply_step(&self.pattern, &peel_u, &[&with_v]).map_err(err)?;
            let glue = Step::GlueBlowup {
                edge: [n + 1, n],
                u_set: k.class(a_prime),
                v_set: k.class(a),
            };
            let v_id = format!("{}/v", node.id);
            let u_id = format!("{}/u", node.id);
            out.push(CertificateNode {
                id: v_id.clone(),
                step: peel_v,
                children: vec![node.children[0].clone()],
                output_graph: NodeGraph::of(&with_v),
            });
            out.push(CertificateNode {
                id: u_id.clone(),
                step: peel_u,
                children: vec![v_id],
                output_graph: NodeGraph::of(&with_uv),
            });
            out.push(CertificateNode {
                id: node.id.clone(),
                step: glue,
                children: vec![u_id, node.children[1].clone()],
                output_graph: node.output_graph.clone(),
            });
        }
        Ok(Certificate {
            pattern: self.pattern.clone(),
            root: self.root.clone(),
            nodes: out,
        })
    }
}

pub fn verify_certificate(cert: &Certificate) -> Result<ColouredGraph, CertificateError> {
    cert.verify()
}

/// Incremental certificate writer with generated ids.
struct Builder {
    pattern: Graph,
    nodes: Vec<CertificateNode>,
    prefix: &'static str,
}

impl Builder {
    fn new(pattern: &Graph, prefix: &'static str) -> Self {
        Builder {
            pattern: pattern.clone(),
            nodes: Vec::new(),
            prefix,
        }
    }

    fn push(&mut self, step: Step, children: Vec<String>, output: &ColouredGraph) -> String {
        let id = format!("{}{}", self.prefix, self.nodes.len());
        self.nodes.push(CertificateNode {
            id: id.clone(),
            step,
            children,
            output_graph: NodeGraph::of(output),
        });
        id
    }

    fn atom(&mut self, g: &ColouredGraph) -> String {
        self.push(Step::Atom {}, vec![], g)
    }

    /// Applies `step` to the graphs of `children`; the step is known valid.
    fn apply(&mut self, step: Step, children: &[(&str, &ColouredGraph)]) -> (String, ColouredGraph) {
        let graphs: Vec<&ColouredGraph> = children.iter().map(|c| c.1).collect();
        let out = apply_step(&self.pattern, &step, &graphs).expect("builder steps are valid by construction");
        let id = self.push(step, children.iter().map(|c| c.0.to_string()).collect(), &out);
        (id, out)
    }

    /// Relabels `g` (whose vertex `i` is target vertex `order[i]`) so that it
    /// matches the target labelling.
    fn relabel(&mut self, id: String, g: ColouredGraph, order: &[usize]) -> (String, ColouredGraph) {
        if order.iter().enumerate().all(|(i, &v)| i == v) {
            return (id, g);
        }
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let edges = g
            .host()
            .edges()
            .iter()
            .map(|&(x, y)| {
                let (a, b) = (order[x], order[y]);
                [a.min(b), a.max(b)]
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.apply(Step::Subgraph { vertices: pos, edges }, &[(&id, &g)])
    }

    fn finish(self, root: String) -> Certificate {
        Certificate {
            pattern: self.pattern,
            root,
            nodes: self.nodes,
        }
    }
}

fn restrict(g: &ColouredGraph, keep: &[usize]) -> ColouredGraph {
    let host = g.host().induced(keep);
    let sigma = keep.iter().map(|&v| g.colour(v)).collect();
    ColouredGraph::new(host, g.pattern().clone(), sigma).expect("restriction of a proper colouring")
}

fn is_monochromatic(g: &ColouredGraph, alive: &[bool], v: usize) -> bool {
    let mut colours = g.host().neighbours(v).iter().filter(|&&w| alive[w]).map(|&w| g.colour(w));
    match colours.next() {
        None => true,
        Some(c) => colours.all(|d| d == c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelOrder {
    /// Vertices in removal order; the rest form the atom.
    pub order: Vec<usize>,
    pub atom: Vec<usize>,
    pub certificate: Certificate,
}

/// Repeatedly removes a vertex whose remaining neighbourhood is
/// monochromatic until at most one edge is left.
///
/// Removal never spoils another candidate, so the greedy order reaches an
/// atom whenever any order does and `None` is exact.
pub fn peel_order_search(g: &ColouredGraph) -> Option<PeelOrder> {
    let n = g.host().n();
    let mut alive = vec![true; n];
    let mut edges = g.host().edge_count();
    let mut order = Vec::new();
    while edges > 1 {
        // Prefer vertices that carry edges; isolated ones can wait.
        let v = (0..n)
            .filter(|&v| alive[v] && is_monochromatic(g, &alive, v))
            .max_by_key(|&v| (g.host().neighbours(v).iter().any(|&w| alive[w]), std::cmp::Reverse(v)))?;
        edges -= g.host().neighbours(v).iter().filter(|&&w| alive[w]).count();
        alive[v] = false;
        order.push(v);
    }
    let atom: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut b = Builder::new(g.pattern(), "p");
    let mut current = restrict(g, &atom);
    let mut id = b.atom(&current);
    let mut layout = atom.clone();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in atom.iter().enumerate() {
        pos[v] = i;
    }
    for &v in order.iter().rev() {
        let attached = g.host().neighbours(v).iter().filter(|&&w| pos[w] != usize::MAX).map(|&w| pos[w]).collect();
        let step = Step::Peel {
            colour: g.colour(v),
            attached,
        };
        (id, current) = b.apply(step, &[(&id, &current)]);
        pos[v] = layout.len();
        layout.push(v);
    }
    let (root, _) = b.relabel(id, current, &layout);
    Some(PeelOrder {
        order,
        atom,
        certificate: b.finish(root),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbundanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("colouring is not surjective onto the pattern")]
    NotSurjective,
    #[error("({0}, {1}) is not an edge of the pattern")]
    NotPatternEdge(usize, usize),
    #[error("pattern has no edges")]
    EdgelessPattern,
    #[error("output would have {0} vertices")]
    ScaleExceeded(usize),
    #[error("split search exhausted its budget of {0} nodes")]
    BudgetExhausted(u64),
}

/// Split tree over vertex subsets of the input graph.
enum Split {
    Atom(Vec<usize>),
    Join {
        a: usize,
        b: usize,
        left: Box<Split>,
        right: Box<Split>,
        vertices: Vec<usize>,
    },
}

struct Splitter<'g> {
    g: &'g ColouredGraph,
    pairs: Vec<(usize, usize)>,
    failed: HashSet<(Vec<usize>, Vec<usize>)>,
    nodes: u64,
    budget: Option<u64>,
}

impl Splitter<'_> {
    /// `vertices` sorted; `edges` are indices into the host's edge list.
    fn solve(&mut self, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Option<Split>, AbundanceError> {
        if edges.len() <= 1 {
            return Ok(Some(Split::Atom(vertices)));
        }
        let key = (vertices, edges);
        if self.failed.contains(&key) {
            return Ok(None);
        }
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(AbundanceError::BudgetExhausted(b));
            }
        }
        let (vertices, edges) = key;
        let host = self.g.host();
        let mut pos = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            pos.insert(v, i);
        }
        for (a, b) in self.pairs.clone() {
            let spans = |e: usize| {
                let (u, v) = host.edges()[e];
                let (cu, cv) = (self.g.colour(u), self.g.colour(v));
                (cu, cv) == (a, b) || (cu, cv) == (b, a)
            };
            // Components after deleting the a-b edges.
            let mut parent: Vec<usize> = (0..vertices.len()).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                let mut y = x;
                while p[y] != r {
                    let next = p[y];
                    p[y] = r;
                    y = next;
                }
                r
            }
            for &e in edges.iter().filter(|&&e| !spans(e)) {
                let (u, v) = host.edges()[e];
                let (ru, rv) = (find(&mut parent, pos[&u]), find(&mut parent, pos[&v]));
                parent[ru] = rv;
            }
            let r0 = find(&mut parent, 0);
            let side: Vec<bool> = (0..vertices.len()).map(|i| find(&mut parent, i) == r0).collect();
            if side.iter().all(|&s| s) {
                continue;
            }
            let pick = |flag: bool| -> (Vec<usize>, Vec<usize>) {
                let vs = vertices.iter().zip(&side).filter(|&(_, &s)| s == flag).map(|(&v, _)| v).collect();
                let es = edges
                    .iter()
                    .copied()
                    .filter(|&e| {
                        let (u, v) = host.edges()[e];
                        side[pos[&u]] == flag && side[pos[&v]] == flag
                    })
                    .collect();
                (vs, es)
            };
            let (lv, le) = pick(true);
            let (rv, re) = pick(false);
            let Some(left) = self.solve(lv, le)? else { continue };
            let Some(right) = self.solve(rv, re)? else { continue };
            return Ok(Some(Split::Join {
                a,
                b,
                left: Box::new(left),
                right: Box::new(right),
                vertices,
            }));
        }
        self.failed.insert((vertices, edges));
        Ok(None)
    }
}

/// Emits the certificate of a split tree; returns the node id, its graph
/// and the input vertex behind each output vertex.
fn emit_split(b: &mut Builder, g: &ColouredGraph, split: &Split) -> (String, ColouredGraph) {
    match split {
        Split::Atom(vs) => {
            let atom = restrict(g, vs);
            let id = b.atom(&atom);
            (id, atom)
        }
        Split::Join {
            a,
            b: colour_b,
            left,
            right,
            vertices,
        } => {
            let (lid, lg) = emit_split(b, g, left);
            let (rid, rg) = emit_split(b, g, right);
            let step = Step::Join {
                a: *a,
                b: *colour_b,
                a_prime: *colour_b,
            };
            let (jid, jg) = b.apply(step, &[(&lid, &lg), (&rid, &rg)]);
            let layout: Vec<usize> = leaves(left).into_iter().chain(leaves(right)).collect();
            // Keep exactly the edges of the input among these vertices.
            let mut pos = HashMap::new();
            for (i, &v) in vertices.iter().enumerate() {
                pos.insert(v, i);
            }
            let mut at = vec![0; vertices.len()];
            for (i, v) in layout.iter().enumerate() {
                at[pos[v]] = i;
            }
            let target = restrict(g, vertices);
            let edges = target.host().edges().iter().map(|&(x, y)| [x, y]).collect();
            b.apply(Step::Subgraph { vertices: at, edges }, &[(&jid, &jg)])
        }
    }
}

fn leaves(split: &Split) -> Vec<usize> {
    match split {
        Split::Atom(vs) | Split::Join { vertices: vs, .. } => vs.clone(),
    }
}

/// Recursively splits along colour pairs whose edges form a cut, emitting
/// `Join` steps with `a_prime = b` followed by the subgraph that keeps the
/// actual cut edges. `None` when no split sequence reaches atoms.
pub fn splittable_decompose(g: &ColouredGraph) -> Result<Option<Certificate>, AbundanceError> {
    let mut pairs: Vec<(usize, usize)> = g.pattern().edges().to_vec();
    pairs.sort_unstable();
    let mut s = Splitter {
        g,
        pairs,
        failed: HashSet::new(),
        nodes: 0,
        budget: (g.host().edge_count() > SPLIT_EXHAUSTIVE_EDGES).then_some(SPLIT_BUDGET),
    };
    let all: Vec<usize> = (0..g.host().n()).collect();
    let Some(split) = s.solve(all, (0..g.host().edge_count()).collect())? else {
        return Ok(None);
    };
    let mut b = Builder::new(g.pattern(), "s");
    let (root, _) = emit_split(&mut b, g, &split);
    Ok(Some(b.finish(root)))
}

/// Two copies of `g`, with colour class `a` of the first joined to class
/// `b` of the second and class `b` of the first joined to class `a` of the
/// second. The second copy is shifted by `|g|`.
pub fn double_along_edge(g: &ColouredGraph, edge: (usize, usize)) -> Result<ColouredGraph, AbundanceError> {
    if !g.is_surjective() {
        return Err(AbundanceError::NotSurjective);
    }
    let (a, b) = edge;
    if !g.pattern().has_edge(a, b) {
        return Err(AbundanceError::NotPatternEdge(a, b));
    }
    let n = g.host().n();
    let (total, mut edges, sigma) = union_parts(g, g);
    for (x, y) in [(a, b), (b, a)] {
        for u in g.class(x) {
            edges.extend(g.class(y).into_iter().map(|v| (u, v + n)));
        }
    }
    Ok(ColouredGraph::new(Graph::new(total, edges)?, g.pattern().clone(), sigma)?)
}

/// Sequence `H^0 = seed, ..., H^m`, doubling along the pattern's edges in
/// lexicographic order, cycled.
pub fn hm_sequence(seed: &ColouredGraph, m: usize) -> Result<Vec<ColouredGraph>, AbundanceError> {
    let size = u32::try_from(m)
        .ok()
        .and_then(|m| 2usize.checked_pow(m))
        .and_then(|f| f.checked_mul(seed.host().n()))
        .unwrap_or(usize::MAX);
    if size > HM_MAX_VERTICES {
        return Err(AbundanceError::ScaleExceeded(size));
    }
    let mut edges = seed.pattern().edges().to_vec();
    edges.sort_unstable();
    if edges.is_empty() {
        return Err(AbundanceError::EdgelessPattern);
    }
    if !seed.is_surjective() {
        return Err(AbundanceError::NotSurjective);
    }
    let mut out = vec![seed.clone()];
    for j in 0..m {
        let next = double_along_edge(&out[j], edges[j % edges.len()])?;
        out.push(next);
    }
    Ok(out)
}

pub fn build_hm(seed: &ColouredGraph, m: usize) -> Result<ColouredGraph, AbundanceError> {
    Ok(hm_sequence(seed, m)?.pop().expect("sequence starts with the seed"))
}

/// One vertex per pattern colour, no edges.
pub fn bijective_seed(pattern: &Graph) -> ColouredGraph {
    let k = pattern.n();
    ColouredGraph::new(Graph::empty(k), pattern.clone(), (0..k).collect()).expect("edgeless hosts are always proper")
}

/// Number of certificate nodes per step kind.
pub fn step_histogram(cert: &Certificate) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for node in &cert.nodes {
        *out.entry(node.step.name()).or_insert(0) += 1;
    }
    out
}
