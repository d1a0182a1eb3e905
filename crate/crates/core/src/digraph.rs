//! Digraphs on dense vertex ids with separately stored non-oriented edges,
//! source/sink detection, vertex-disjoint path counting and the Holt-Klee test.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    arcs: Vec<(usize, usize)>,
    undirected: Vec<(usize, usize)>,
    arc_set: HashSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Digraph {
            labels,
            arcs: Vec::new(),
            undirected: Vec::new(),
            arc_set: HashSet::new(),
        }
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::Precondition(format!("vertex out of range in ({u}, {v})")));
        }
        if u == v {
            return Err(Error::Precondition(format!("self-loop at {u}")));
        }
        if self.arc_set.contains(&(u, v))
            || self.arc_set.contains(&(v, u))
            || self.undirected.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
        {
            return Err(Error::Precondition(format!("duplicate edge ({u}, {v})")));
        }
        Ok(())
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.arcs.push((u, v));
        self.arc_set.insert((u, v));
        Ok(())
    }

    pub fn add_undirected(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.undirected.push((u, v));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn undirected(&self) -> &[(usize, usize)] {
        &self.undirected
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arc_set.contains(&(u, v))
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn reversed(&self) -> Self {
        let mut d = Digraph::with_labels(self.labels.clone());
        for &(u, v) in &self.arcs {
            d.arcs.push((v, u));
            d.arc_set.insert((v, u));
        }
        d.undirected = self.undirected.clone();
        d
    }

    /// Copy with the single arc `u → v` turned around.
    pub fn with_arc_reversed(&self, u: usize, v: usize) -> Result<Self> {
        if !self.has_arc(u, v) {
            return Err(Error::Precondition(format!("no arc {u} -> {v}")));
        }
        let mut d = Digraph::with_labels(self.labels.clone());
        d.undirected = self.undirected.clone();
        for &(a, b) in &self.arcs {
            let arc = if (a, b) == (u, v) { (v, u) } else { (a, b) };
            d.arcs.push(arc);
            d.arc_set.insert(arc);
        }
        Ok(d)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for &(_, v) in &self.arcs {
            deg[v] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for &(u, _) in &self.arcs {
            deg[u] += 1;
        }
        deg
    }

    pub fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// The unique in-degree-0 and the unique out-degree-0 vertex, each `None`
    /// when missing or not unique. Non-oriented edges count towards neither.
    pub fn unique_source_sink(&self) -> (Option<usize>, Option<usize>) {
        let ins = self.in_degrees();
        let outs = self.out_degrees();
        let unique = |deg: &[usize]| {
            let mut it = (0..self.len()).filter(|&v| deg[v] == 0);
            match (it.next(), it.next()) {
                (Some(v), None) => Some(v),
                _ => None,
            }
        };
        (unique(&ins), unique(&outs))
    }

    pub fn is_uso(&self) -> bool {
        let (s, t) = self.unique_source_sink();
        s.is_some() && t.is_some()
    }

    /// No directed cycle among the oriented arcs.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = self.in_degrees();
        let adj = self.out_neighbors();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &adj[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == self.len()).then_some(order)
    }

    /// Maximum number of `s → t` dipaths sharing no internal vertex,
    /// as a unit-capacity flow through split vertices.
    pub fn max_disjoint_paths(&self, s: usize, t: usize) -> usize {
        assert!(s != t && s < self.len() && t < self.len());
        let n = self.len();
        // node v_in = 2v, v_out = 2v + 1
        let mut flow = FlowNetwork::new(2 * n);
        for v in 0..n {
            let cap = if v == s || v == t { n } else { 1 };
            flow.add_edge(2 * v, 2 * v + 1, cap);
        }
        for &(u, v) in &self.arcs {
            flow.add_edge(2 * u + 1, 2 * v, 1);
        }
        flow.max_flow(2 * s + 1, 2 * t)
    }

    /// Holt-Klee condition with parameter `d`.
    pub fn holt_klee(&self, d: usize) -> HoltKleeReport {
        let (source, sink) = self.unique_source_sink();
        let generic = self.undirected.is_empty();
        let count = match (source, sink) {
            (Some(s), Some(t)) if s != t => self.max_disjoint_paths(s, t),
            _ => 0,
        };
        let holds = generic
            && source.is_some()
            && sink.is_some()
            && (count >= d || (d == 0 && source.is_some()));
        HoltKleeReport {
            holds,
            source,
            sink,
            source_label: source.map(|v| self.labels[v].clone()),
            sink_label: sink.map(|v| self.labels[v].clone()),
            disjoint_path_count: count,
            required_d: d,
            non_generic: !generic,
        }
    }

    pub fn to_export(&self) -> DigraphExport {
        let label = |v: usize| self.labels[v].clone();
        DigraphExport {
            vertices: self.labels.clone(),
            arcs: self.arcs.iter().map(|&(u, v)| [label(u), label(v)]).collect(),
            edges: self.undirected.iter().map(|&(u, v)| [label(u), label(v)]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_export()).expect("plain data serializes")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for l in &self.labels {
            let _ = writeln!(out, "  \"{l}\";");
        }
        for &(u, v) in &self.arcs {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.labels[u], self.labels[v]);
        }
        for &(u, v) in &self.undirected {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [dir=none];", self.labels[u], self.labels[v]);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphExport {
    pub vertices: Vec<String>,
    pub arcs: Vec<[String; 2]>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoltKleeReport {
    pub holds: bool,
    #[serde(skip)]
    pub source: Option<usize>,
    #[serde(skip)]
    pub sink: Option<usize>,
    #[serde(rename = "source")]
    pub source_label: Option<String>,
    #[serde(rename = "sink")]
    pub sink_label: Option<String>,
    pub disjoint_path_count: usize,
    pub required_d: usize,
    pub non_generic: bool,
}

struct FlowNetwork {
    // (to, capacity, index of reverse edge)
    adj: Vec<Vec<(usize, usize, usize)>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: usize) {
        let ru = self.adj[v].len();
        let rv = self.adj[u].len();
        self.adj[u].push((v, cap, ru));
        self.adj[v].push((u, 0, rv));
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut total = 0;
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for (i, &(v, cap, _)) in self.adj[u].iter().enumerate() {
                    if cap > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = Some((u, i));
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                let (_, _, rev) = self.adj[u][i];
                self.adj[u][i].1 -= 1;
                self.adj[v][rev].1 += 1;
                v = u;
            }
            total += 1;
        }
    }
}

/// Undirected simple graph with a list of 2-faces, the input of
/// [`enumerate_acyclic_uso`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacedGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Vec<usize>>,
}

/// Streams every orientation of the graph that is acyclic, has a unique
/// source and sink, and has a unique source and sink on every listed face.
/// The order is deterministic: depth-first over edges in input order,
/// `u → v` before `v → u` for an edge `(u, v)`.
pub fn enumerate_acyclic_uso(graph: &FacedGraph) -> AcyclicUsoIter {
    AcyclicUsoIter::new(graph.clone())
}

pub struct AcyclicUsoIter {
    graph: FacedGraph,
    // for each edge index, faces whose last edge (in input order) it is
    face_closers: Vec<Vec<usize>>,
    face_edges: Vec<Vec<usize>>,
    choice: Vec<u8>,
    done: bool,
    started: bool,
}

impl AcyclicUsoIter {
    fn new(graph: FacedGraph) -> Self {
        let m = graph.edges.len();
        let face_edges: Vec<Vec<usize>> = graph
            .faces
            .iter()
            .map(|f| {
                graph
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|(_, (u, v))| f.contains(u) && f.contains(v))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut face_closers = vec![Vec::new(); m];
        for (fi, edges) in face_edges.iter().enumerate() {
            if let Some(&last) = edges.iter().max() {
                face_closers[last].push(fi);
            }
        }
        AcyclicUsoIter {
            graph,
            face_closers,
            face_edges,
            choice: Vec::with_capacity(m),
            done: false,
            started: false,
        }
    }

    fn arc(&self, i: usize) -> (usize, usize) {
        let (u, v) = self.graph.edges[i];
        if self.choice[i] == 0 {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Whether the newest assignment keeps the partial orientation feasible.
    fn consistent(&self) -> bool {
        let i = self.choice.len() - 1;
        let (u, v) = self.arc(i);
        // a cycle through the new arc needs a path v ~> u
        let mut adj = vec![Vec::new(); self.graph.vertices];
        for j in 0..i {
            let (a, b) = self.arc(j);
            adj[a].push(b);
        }
        let mut stack = vec![v];
        let mut seen = vec![false; self.graph.vertices];
        while let Some(x) = stack.pop() {
            if x == u {
                return false;
            }
            if !std::mem::replace(&mut seen[x], true) {
                stack.extend(&adj[x]);
            }
        }
        for &f in &self.face_closers[i] {
            let verts = &self.graph.faces[f];
            let mut indeg = vec![0usize; self.graph.vertices];
            let mut outdeg = vec![0usize; self.graph.vertices];
            for &e in &self.face_edges[f] {
                let (a, b) = self.arc(e);
                outdeg[a] += 1;
                indeg[b] += 1;
            }
            let sources = verts.iter().filter(|&&x| indeg[x] == 0).count();
            let sinks = verts.iter().filter(|&&x| outdeg[x] == 0).count();
            if sources != 1 || sinks != 1 {
                return false;
            }
        }
        true
    }

    fn complete(&self) -> Option<Digraph> {
        let mut d = Digraph::new(self.graph.vertices);
        for i in 0..self.choice.len() {
            let (a, b) = self.arc(i);
            d.add_arc(a, b).ok()?;
        }
        d.is_uso().then_some(d)
    }

    /// Moves the top choice to its next consistent alternative, popping
    /// exhausted levels. False once the whole tree is exhausted.
    fn bump(&mut self) -> bool {
        loop {
            match self.choice.last().copied() {
                None => return false,
                Some(0) => {
                    *self.choice.last_mut().unwrap() = 1;
                    if self.consistent() {
                        return true;
                    }
                }
                Some(_) => {
                    self.choice.pop();
                }
            }
        }
    }

    /// Extends a consistent prefix to a full consistent assignment.
    fn descend(&mut self) -> bool {
        while self.choice.len() < self.graph.edges.len() {
            self.choice.push(0);
            if !self.consistent() && !self.bump() {
                return false;
            }
        }
        true
    }

    fn step(&mut self) -> bool {
        if self.started {
            if !self.bump() {
                return false;
            }
        } else {
            self.started = true;
        }
        self.descend()
    }
}

impl Iterator for AcyclicUsoIter {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.done {
            return None;
        }
        if self.graph.edges.is_empty() {
            self.done = true;
            let d = Digraph::new(self.graph.vertices);
            return d.is_uso().then_some(d);
        }
        loop {
            if !self.step() {
                self.done = true;
                return None;
            }
            if let Some(d) = self.complete() {
                return Some(d);
            }
        }
    }
}
