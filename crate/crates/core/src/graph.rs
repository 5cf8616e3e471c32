//! Finite directed graphs with optional infinite-emitter flags, and the
//! structural queries the algebra and the classifier are built on.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexIdx = usize;
pub type EdgeIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` names undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("vertex `{0}` is flagged as an infinite emitter but emits no edge")]
    EmptyInfiniteEmitter(String),
    #[error("malformed graph document: {0}")]
    Parse(String),
}

/// Graph file document: `{"vertices":[...],"edges":[...]}`. Array order is
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<RawVertex>,
    #[serde(default)]
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    #[serde(default)]
    pub infinite_emitter: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub infinite_emitter: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: VertexIdx,
    pub dst: VertexIdx,
}

/// A validated graph. Immutable; out-edge lists keep file order, which is
/// the enumeration of `s^{-1}(v)` used to pick basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeIdx>>,
    inc: Vec<Vec<EdgeIdx>>,
    vertex_lookup: HashMap<String, VertexIdx>,
    edge_lookup: HashMap<String, EdgeIdx>,
}

pub fn validate_graph(raw: &RawGraph) -> Result<Graph, GraphError> {
    if raw.vertices.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let mut vertex_lookup = HashMap::new();
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for v in &raw.vertices {
        if vertex_lookup.insert(v.id.clone(), vertices.len()).is_some() {
            return Err(GraphError::DuplicateVertex(v.id.clone()));
        }
        vertices.push(Vertex {
            id: v.id.clone(),
            infinite_emitter: v.infinite_emitter,
        });
    }
    let mut edge_lookup = HashMap::new();
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut out = vec![Vec::new(); vertices.len()];
    let mut inc = vec![Vec::new(); vertices.len()];
    for e in &raw.edges {
        if edge_lookup.insert(e.id.clone(), edges.len()).is_some() {
            return Err(GraphError::DuplicateEdge(e.id.clone()));
        }
        let endpoint = |name: &String| {
            vertex_lookup
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: name.clone(),
                })
        };
        let (src, dst) = (endpoint(&e.src)?, endpoint(&e.dst)?);
        out[src].push(edges.len());
        inc[dst].push(edges.len());
        edges.push(Edge {
            id: e.id.clone(),
            src,
            dst,
        });
    }
    for (i, v) in vertices.iter().enumerate() {
        if v.infinite_emitter && out[i].is_empty() {
            return Err(GraphError::EmptyInfiniteEmitter(v.id.clone()));
        }
    }
    Ok(Graph {
        vertices,
        edges,
        out,
        inc,
        vertex_lookup,
        edge_lookup,
    })
}

impl Graph {
    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        validate_graph(&raw)
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    infinite_emitter: v.infinite_emitter,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    src: self.vertices[e.src].id.clone(),
                    dst: self.vertices[e.dst].id.clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: VertexIdx) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeIdx) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<VertexIdx> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<EdgeIdx> {
        self.edge_lookup.get(id).copied()
    }

    /// Out-edges of `v` in file order.
    pub fn out_edges(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.inc[v]
    }

    pub fn is_sink(&self, v: VertexIdx) -> bool {
        self.out[v].is_empty()
    }

    pub fn is_regular(&self, v: VertexIdx) -> bool {
        !self.out[v].is_empty() && !self.vertices[v].infinite_emitter
    }

    /// Vertices emitting at least one edge and not flagged as infinite
    /// emitters, in vertex order.
    pub fn regular_vertices(&self) -> Vec<VertexIdx> {
        (0..self.vertices.len()).filter(|&v| self.is_regular(v)).collect()
    }

    pub fn regular_vertex_ids(&self) -> Vec<&str> {
        self.regular_vertices()
            .into_iter()
            .map(|v| self.vertices[v].id.as_str())
            .collect()
    }

    /// Last edge in the enumeration of `s^{-1}(v)` when `v` is regular.
    pub fn last_out_edge(&self, v: VertexIdx) -> Option<EdgeIdx> {
        if self.is_regular(v) {
            self.out[v].last().copied()
        } else {
            None
        }
    }

    pub fn has_flagged_vertex(&self) -> bool {
        self.vertices.iter().any(|v| v.infinite_emitter)
    }

    /// True when the materialized edges contain no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertices.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inc[v].len()).collect();
        let mut queue: VecDeque<VertexIdx> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &e in &self.out[v] {
                let w = self.edges[e].dst;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        seen == n
    }

    /// Shortest edge path from `from` to `to` (BFS in edge order). An empty
    /// path is returned when `from == to`.
    fn shortest_path(&self, from: VertexIdx, to: VertexIdx) -> Option<Vec<EdgeIdx>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut prev: Vec<Option<EdgeIdx>> = vec![None; self.vertices.len()];
        let mut visited = vec![false; self.vertices.len()];
        visited[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.out[v] {
                let w = self.edges[e].dst;
                if visited[w] {
                    continue;
                }
                visited[w] = true;
                prev[w] = Some(e);
                if w == to {
                    let mut path = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let e = prev[cur].expect("bfs predecessor");
                        path.push(e);
                        cur = self.edges[e].src;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// A cycle together with an exit, if the materialized graph has one. The
    /// cycle is rotated so that it starts at the source of the exit edge.
    pub fn find_cycle_with_exit(&self) -> Option<ForbiddenWitness> {
        for v in 0..self.vertices.len() {
            if self.out[v].len() < 2 {
                continue;
            }
            for &g in &self.out[v] {
                let Some(back) = self.shortest_path(self.edges[g].dst, v) else {
                    continue;
                };
                let exit = *self.out[v].iter().find(|&&f| f != g).expect("out-degree >= 2");
                let mut cycle = vec![g];
                cycle.extend(back);
                let vertices = cycle
                    .iter()
                    .map(|&e| self.vertices[self.edges[e].src].id.clone())
                    .collect();
                let mut edges: Vec<String> = cycle.iter().map(|&e| self.edges[e].id.clone()).collect();
                edges.push(self.edges[exit].id.clone());
                return Some(ForbiddenWitness {
                    kind: WitnessKind::CycleWithExit,
                    vertices,
                    edges,
                });
            }
        }
        None
    }

    /// First F1, F2 or F3 occurrence (in that priority, then edge order),
    /// matched injectively on vertices.
    pub fn find_forbidden_subgraph(&self) -> Option<ForbiddenWitness> {
        let name = |v: VertexIdx| self.vertices[v].id.clone();
        let ename = |e: EdgeIdx| self.edges[e].id.clone();
        for (ei, e) in self.edges.iter().enumerate() {
            for &fi in &self.out[e.dst] {
                let f = &self.edges[fi];
                if e.src != e.dst && e.dst != f.dst && e.src != f.dst {
                    return Some(ForbiddenWitness {
                        kind: WitnessKind::F1,
                        vertices: vec![name(e.src), name(e.dst), name(f.dst)],
                        edges: vec![ename(ei), ename(fi)],
                    });
                }
            }
        }
        for (ei, e) in self.edges.iter().enumerate() {
            for &fi in &self.inc[e.dst] {
                let f = &self.edges[fi];
                if fi > ei && e.src != f.src && e.src != e.dst && f.src != e.dst {
                    return Some(ForbiddenWitness {
                        kind: WitnessKind::F2,
                        vertices: vec![name(e.src), name(f.src), name(e.dst)],
                        edges: vec![ename(ei), ename(fi)],
                    });
                }
            }
        }
        for (ei, e) in self.edges.iter().enumerate() {
            if e.src == e.dst {
                continue;
            }
            for &fi in &self.out[e.src] {
                if fi > ei && self.edges[fi].dst == e.dst {
                    return Some(ForbiddenWitness {
                        kind: WitnessKind::F3,
                        vertices: vec![name(e.src), name(e.dst)],
                        edges: vec![ename(ei), ename(fi)],
                    });
                }
            }
        }
        None
    }

    /// Weakly connected components, ordered by their first vertex; vertex
    /// and edge order inside each component follow the parent graph.
    pub fn decompose_components(&self) -> Vec<Graph> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut order: Vec<usize> = Vec::new();
        let mut members: HashMap<usize, Vec<VertexIdx>> = HashMap::new();
        for v in 0..n {
            let r = roots[v];
            members.entry(r).or_insert_with(|| {
                order.push(r);
                Vec::new()
            });
            members.get_mut(&r).unwrap().push(v);
        }
        order
            .into_iter()
            .map(|root| {
                let vs = &members[&root];
                let raw = RawGraph {
                    vertices: vs
                        .iter()
                        .map(|&v| RawVertex {
                            id: self.vertices[v].id.clone(),
                            infinite_emitter: self.vertices[v].infinite_emitter,
                        })
                        .collect(),
                    edges: self
                        .edges
                        .iter()
                        .filter(|e| roots[e.src] == root)
                        .map(|e| RawEdge {
                            id: e.id.clone(),
                            src: self.vertices[e.src].id.clone(),
                            dst: self.vertices[e.dst].id.clone(),
                        })
                        .collect(),
                };
                validate_graph(&raw).expect("component of a valid graph is valid")
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    CycleWithExit,
    F1,
    F2,
    F3,
}

/// A concrete obstruction to solvability. For `CycleWithExit` the edges are
/// the cycle (starting at the exit's source) followed by the exit edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenWitness {
    pub kind: WitnessKind,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    None,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

impl Cardinality {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinality::Infinite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternClass {
    pub kind: PatternKind,
    pub center: Option<String>,
    pub sink_count: Cardinality,
    pub loop_count: Cardinality,
}

impl PatternClass {
    fn plain(kind: PatternKind) -> Self {
        PatternClass {
            kind,
            center: None,
            sink_count: Cardinality::Finite(0),
            loop_count: Cardinality::Finite(0),
        }
    }

    /// True when the center is flagged and so the star is infinite.
    pub fn is_infinite(&self) -> bool {
        self.sink_count.is_infinite() || self.loop_count.is_infinite()
    }
}

/// Classify a weakly connected component as one of the shapes E1..E6.
pub fn match_pattern(c: &Graph) -> PatternClass {
    let none = PatternClass::plain(PatternKind::None);
    let nv = c.vertex_count();
    let ne = c.edge_count();
    let is_loop = |e: EdgeIdx| c.edges[e].src == c.edges[e].dst;

    if nv == 1 {
        return match (ne, c.vertices[0].infinite_emitter) {
            (0, _) => PatternClass::plain(PatternKind::E1),
            (1, false) => PatternClass::plain(PatternKind::E2),
            _ => none,
        };
    }
    if c.has_flagged_vertex()
        && c.vertices
            .iter()
            .enumerate()
            .any(|(v, x)| x.infinite_emitter && !c.inc[v].is_empty())
    {
        return none;
    }
    if nv == 2 && ne == 2 && !c.has_flagged_vertex() {
        let (a, b) = (&c.edges[0], &c.edges[1]);
        if a.src != a.dst && a.src == b.dst && a.dst == b.src {
            return PatternClass::plain(PatternKind::E3);
        }
    }

    let centers: Vec<VertexIdx> = (0..nv)
        .filter(|&v| c.inc[v].is_empty() && !c.out[v].is_empty())
        .collect();
    if centers.len() != 1 {
        return none;
    }
    let center = centers[0];
    if c.out[center].len() != nv - 1 {
        return none;
    }
    let mut sinks = 0;
    let mut loops = 0;
    let mut seen = vec![false; nv];
    for &e in &c.out[center] {
        let child = c.edges[e].dst;
        if child == center || seen[child] || c.vertices[child].infinite_emitter {
            return none;
        }
        seen[child] = true;
        match (c.out[child].as_slice(), c.inc[child].len()) {
            ([], 1) => sinks += 1,
            ([l], 2) if is_loop(*l) => loops += 1,
            _ => return none,
        }
    }
    let flagged = c.vertices[center].infinite_emitter;
    let card = |n: usize| {
        if flagged && n > 0 {
            Cardinality::Infinite
        } else {
            Cardinality::Finite(n)
        }
    };
    let kind = match (sinks > 0, loops > 0) {
        (true, false) => PatternKind::E4,
        (false, true) => PatternKind::E5,
        (true, true) => PatternKind::E6,
        (false, false) => return none,
    };
    PatternClass {
        kind,
        center: Some(c.vertices[center].id.clone()),
        sink_count: card(sinks),
        loop_count: card(loops),
    }
}

/// Builds graphs from `(src, dst)` index pairs; vertices are named `v0..`
/// and edges `e0..`.
pub fn graph_from_pairs(n_vertices: usize, pairs: &[(usize, usize)], flagged: &[usize]) -> Graph {
    let raw = RawGraph {
        vertices: (0..n_vertices)
            .map(|i| RawVertex {
                id: format!("v{i}"),
                infinite_emitter: flagged.contains(&i),
            })
            .collect(),
        edges: pairs
            .iter()
            .enumerate()
            .map(|(i, &(s, d))| RawEdge {
                id: format!("e{i}"),
                src: format!("v{s}"),
                dst: format!("v{d}"),
            })
            .collect(),
    };
    validate_graph(&raw).expect("generated graph is valid")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every graph with `1..=max_vertices` vertices and at most `max_edges`
/// edges (loops and parallel edges allowed, no flags), one representative
/// per isomorphism class.
pub fn small_graphs(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |d| (s, d))).collect();
        let perms = permutations(n);
        let mut current: Vec<usize> = Vec::new();
        // multisets of slot indices as non-decreasing sequences
        fn walk(
            start: usize,
            remaining: usize,
            slots: &[(usize, usize)],
            perms: &[Vec<usize>],
            current: &mut Vec<usize>,
            n: usize,
            out: &mut Vec<Graph>,
        ) {
            let pairs: Vec<(usize, usize)> = current.iter().map(|&i| slots[i]).collect();
            let canonical = perms.iter().all(|p| {
                let mut mapped: Vec<(usize, usize)> = pairs.iter().map(|&(s, d)| (p[s], p[d])).collect();
                mapped.sort_unstable();
                mapped >= pairs
            });
            if canonical {
                out.push(graph_from_pairs(n, &pairs, &[]));
            }
            if remaining == 0 {
                return;
            }
            for i in start..slots.len() {
                current.push(i);
                walk(i, remaining - 1, slots, perms, current, n, out);
                current.pop();
            }
        }
        walk(0, max_edges, &slots, &perms, &mut current, n, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e4(n: usize, flagged: bool) -> Graph {
        let pairs: Vec<_> = (1..=n).map(|i| (0, i)).collect();
        graph_from_pairs(n + 1, &pairs, if flagged { &[0] } else { &[] })
    }

    #[test]
    fn minimal_graph_has_a_sink() {
        let g = graph_from_pairs(1, &[], &[]);
        assert!(g.is_sink(0));
        assert!(g.regular_vertices().is_empty());
    }

    #[test]
    fn validation_errors() {
        let raw: RawGraph =
            serde_json::from_str(r#"{"vertices":[{"id":"v"}],"edges":[{"id":"e","src":"v","dst":"w"}]}"#).unwrap();
        assert_eq!(
            validate_graph(&raw),
            Err(GraphError::DanglingEndpoint {
                edge: "e".into(),
                vertex: "w".into()
            })
        );
        assert_eq!(
            Graph::from_json(r#"{"vertices":[],"edges":[]}"#),
            Err(GraphError::EmptyGraph)
        );
        assert_eq!(
            Graph::from_json(r#"{"vertices":[{"id":"v"},{"id":"v"}]}"#),
            Err(GraphError::DuplicateVertex("v".into()))
        );
        assert_eq!(
            Graph::from_json(r#"{"vertices":[{"id":"v","infinite_emitter":true}]}"#),
            Err(GraphError::EmptyInfiniteEmitter("v".into()))
        );
        assert!(matches!(
            Graph::from_json(
                r#"{"vertices":[{"id":"v"}],"edges":[{"id":"e","src":"v","dst":"v"},{"id":"e","src":"v","dst":"v"}]}"#
            ),
            Err(GraphError::DuplicateEdge(_))
        ));
    }

    #[test]
    fn regular_vertices_examples() {
        let e2 = graph_from_pairs(1, &[(0, 0)], &[]);
        assert_eq!(e2.regular_vertex_ids(), vec!["v0"]);
        assert_eq!(e4(2, false).regular_vertex_ids(), vec!["v0"]);
        let flagged = e4(2, true);
        assert!(flagged.regular_vertices().is_empty());
        assert!(!flagged.is_sink(0));
    }

    #[test]
    fn cycle_with_exit_examples() {
        let rose = graph_from_pairs(1, &[(0, 0), (0, 0)], &[]);
        let w = rose.find_cycle_with_exit().unwrap();
        assert_eq!(w.edges, vec!["e0", "e1"]);
        assert!(graph_from_pairs(2, &[(0, 1), (1, 0)], &[])
            .find_cycle_with_exit()
            .is_none());
        let e5 = graph_from_pairs(3, &[(0, 1), (0, 2), (1, 1), (2, 2)], &[]);
        assert!(e5.find_cycle_with_exit().is_none());
        // exit off a non-base vertex: cycle rotated to the exit's source
        let g = graph_from_pairs(3, &[(0, 1), (1, 0), (1, 2)], &[]);
        let w = g.find_cycle_with_exit().unwrap();
        assert_eq!(w.edges, vec!["e1", "e0", "e2"]);
        assert_eq!(w.vertices, vec!["v1", "v0"]);
    }

    #[test]
    fn forbidden_subgraph_examples() {
        let path = graph_from_pairs(3, &[(0, 1), (1, 2)], &[]);
        let w = path.find_forbidden_subgraph().unwrap();
        assert_eq!(w.kind, WitnessKind::F1);
        assert_eq!(w.edges, vec!["e0", "e1"]);
        let f2 = graph_from_pairs(3, &[(0, 2), (1, 2)], &[]);
        assert_eq!(f2.find_forbidden_subgraph().unwrap().kind, WitnessKind::F2);
        let f3 = graph_from_pairs(2, &[(0, 1), (0, 1)], &[]);
        assert_eq!(f3.find_forbidden_subgraph().unwrap().kind, WitnessKind::F3);
        let e5 = graph_from_pairs(2, &[(0, 1), (1, 1)], &[]);
        assert!(e5.find_forbidden_subgraph().is_none());
        assert!(e4(3, false).find_forbidden_subgraph().is_none());
    }

    #[test]
    fn components() {
        let g = graph_from_pairs(2, &[(1, 1)], &[]);
        let cs = g.decompose_components();
        assert_eq!(cs.len(), 2);
        assert_eq!(match_pattern(&cs[0]).kind, PatternKind::E1);
        assert_eq!(match_pattern(&cs[1]).kind, PatternKind::E2);
        let e6 = graph_from_pairs(3, &[(0, 1), (0, 2), (2, 2)], &[]);
        assert_eq!(e6.decompose_components().len(), 1);
        assert_eq!(graph_from_pairs(3, &[], &[]).decompose_components().len(), 3);
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            match_pattern(&graph_from_pairs(1, &[(0, 0)], &[])).kind,
            PatternKind::E2
        );
        let p = match_pattern(&e4(2, false));
        assert_eq!(p.kind, PatternKind::E4);
        assert_eq!(p.center.as_deref(), Some("v0"));
        assert_eq!(p.sink_count, Cardinality::Finite(2));
        assert_eq!(p.loop_count, Cardinality::Finite(0));
        let p = match_pattern(&e4(2, true));
        assert_eq!(p.sink_count, Cardinality::Infinite);
        assert_eq!(
            match_pattern(&graph_from_pairs(3, &[(0, 1), (1, 2)], &[])).kind,
            PatternKind::None
        );
        assert_eq!(
            match_pattern(&graph_from_pairs(2, &[(0, 1), (1, 0)], &[])).kind,
            PatternKind::E3
        );
        let e5 = graph_from_pairs(2, &[(0, 1), (1, 1)], &[]);
        assert_eq!(match_pattern(&e5).kind, PatternKind::E5);
        let e6 = graph_from_pairs(3, &[(0, 1), (0, 2), (2, 2)], &[]);
        let p = match_pattern(&e6);
        assert_eq!(
            (p.kind, p.sink_count, p.loop_count),
            (PatternKind::E6, Cardinality::Finite(1), Cardinality::Finite(1))
        );
        // parallel edges into one sink are not a star
        assert_eq!(
            match_pattern(&graph_from_pairs(2, &[(0, 1), (0, 1)], &[])).kind,
            PatternKind::None
        );
        // flagged loop vertex hides infinitely many loops
        assert_eq!(
            match_pattern(&graph_from_pairs(1, &[(0, 0)], &[0])).kind,
            PatternKind::None
        );
    }

    #[test]
    fn acyclicity() {
        assert!(e4(3, false).is_acyclic());
        assert!(!graph_from_pairs(1, &[(0, 0)], &[]).is_acyclic());
    }

    #[test]
    fn small_graph_counts() {
        // one vertex: loops only, 0..=2 of them
        assert_eq!(small_graphs(1, 2).len(), 3);
        // two vertices, at most one edge: empty(1+... ) classes
        // n=1: {}, {loop}; n=2: {}, {loop}, {a->b}
        assert_eq!(small_graphs(2, 1).len(), 5);
    }

    #[test]
    fn json_round_trip() {
        let g = e4(2, true);
        let text = serde_json::to_string(&g.to_raw()).unwrap();
        assert_eq!(Graph::from_json(&text).unwrap(), g);
    }
}
