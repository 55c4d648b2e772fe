//! Graphs on at most 64 nodes and the node-set combinatorics everything else
//! is built on: neighborhoods, common neighborhoods, complete-bipartite
//! subgraph detection, clique/chromatic search, plus graph6, edge-list and
//! family-DSL ingestion.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Hard cap on node count; `NodeSet` is a 64-bit mask.
pub const MAX_NODES: usize = 64;

/// Largest graph the exact chromatic search will accept.
pub const CHROMATIC_BUDGET: usize = 12;

/// Sample count used by `cn_laws_report` when the subset space is too large
/// to sweep exhaustively.
pub const CN_LAW_SAMPLES: usize = 10_000;

/// Subset spaces up to this size are checked exhaustively (2^20 subsets).
const CN_EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph has {n} nodes; at most {MAX_NODES} are supported")]
    TooManyNodes { n: usize },
    #[error("graph must have at least 2 nodes, found {n}")]
    TooFewNodes { n: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("self-loop at node {v}")]
    SelfLoop { v: usize },
    #[error("node {v} out of range for {n} nodes")]
    NodeOutOfRange { v: usize, n: usize },
    #[error("graph is disconnected: components {a} and {b}")]
    Disconnected { a: NodeSet, b: NodeSet },
    #[error("graph6: {msg} (byte {offset})")]
    Graph6 { msg: String, offset: usize },
    #[error("edge list, line {line}: {msg}")]
    EdgeList { msg: String, line: usize },
    #[error("family {spec:?}: {msg}")]
    Family { spec: String, msg: String },
    #[error("node sets {a} and {b} overlap")]
    Overlap { a: NodeSet, b: NodeSet },
    #[error(
        "chromatic number of {name}: {n} nodes exceeds the exact-search budget of {CHROMATIC_BUDGET}"
    )]
    ChromaticBudget { name: String, n: usize },
}

/// A set of node indices below 64, stored as a bit mask.
///
/// `Ord` is the linear order used everywhere a canonical choice between node
/// sets is needed: smaller cardinality first, ties broken lexicographically
/// on the ascending member lists (so `{1,3} < {2,3}` and `{3} < {1,2}`).
/// Note this is *not* the numeric order of the masks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn singleton(v: usize) -> NodeSet {
        debug_assert!(v < MAX_NODES);
        NodeSet(1 << v)
    }

    /// The full set {0, .., n-1}.
    pub fn full(n: usize) -> NodeSet {
        debug_assert!(n <= MAX_NODES);
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn from_mask(mask: u64) -> NodeSet {
        NodeSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_NODES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_NODES);
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: usize) -> NodeSet {
        debug_assert!(v < MAX_NODES);
        NodeSet(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> NodeSet {
        NodeSet(self.0 & !(1 << v))
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint_from(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> NodeSet {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &NodeSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else {
                // With equal cardinality, the ascending member lists share a
                // prefix up to the lowest differing bit; whoever owns that
                // bit lists the smaller element first.
                let low = diff.trailing_zeros();
                if self.0 >> low & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &NodeSet) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for NodeSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite simple connected undirected graph on nodes 0..n.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<NodeSet>,
    name: String,
}

impl Graph {
    /// Build and validate a graph from an edge list.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        name: impl Into<String>,
    ) -> Result<Graph, GraphError> {
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes { n });
        }
        let mut adj = vec![NodeSet::EMPTY; n];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::NodeOutOfRange { v: w, n });
                }
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let g = Graph {
            n,
            adj,
            name: name.into(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Graph {
        self.name = name.into();
        self
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Nodes adjacent to every member of `a`; the full node set for `a = {}`.
    pub fn common_neighborhood(&self, a: NodeSet) -> NodeSet {
        a.iter()
            .fold(self.nodes(), |acc, v| acc.intersection(self.adj[v]))
    }

    /// Check every structural invariant: node-count bounds, at least one
    /// edge, no self-loops, symmetry, connectivity (with two witness
    /// components on failure).
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.n > MAX_NODES {
            return Err(GraphError::TooManyNodes { n: self.n });
        }
        if self.n < 2 {
            return Err(GraphError::TooFewNodes { n: self.n });
        }
        let full = self.nodes();
        for v in 0..self.n {
            if self.adj[v].contains(v) {
                return Err(GraphError::SelfLoop { v });
            }
            if !self.adj[v].is_subset_of(full) {
                let w = self.adj[v].difference(full).min_element().unwrap();
                return Err(GraphError::NodeOutOfRange { v: w, n: self.n });
            }
            for w in self.adj[v].iter() {
                debug_assert!(self.adj[w].contains(v), "adjacency must be symmetric");
            }
        }
        if self.edge_count() == 0 {
            return Err(GraphError::NoEdges);
        }
        // BFS from node 0 over the bit masks.
        let mut reached = NodeSet::singleton(0);
        loop {
            let grown = reached
                .iter()
                .fold(reached, |acc, v| acc.union(self.adj[v]));
            if grown == reached {
                break;
            }
            reached = grown;
        }
        if reached != full {
            return Err(GraphError::Disconnected {
                a: reached,
                b: full.difference(reached),
            });
        }
        Ok(())
    }

    // ---- graph6 ----

    /// Standard printable graph6 encoding (short form for n <= 62, the
    /// 4-byte size form above that).
    pub fn to_graph6(&self) -> String {
        let mut out: Vec<u8> = Vec::new();
        if self.n <= 62 {
            out.push(63 + self.n as u8);
        } else {
            out.push(b'~');
            out.push(63 + ((self.n >> 12) & 63) as u8);
            out.push(63 + ((self.n >> 6) & 63) as u8);
            out.push(63 + (self.n & 63) as u8);
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..self.n {
            for i in 0..j {
                acc = acc << 1 | u8::from(self.has_edge(i, j));
                filled += 1;
                if filled == 6 {
                    out.push(63 + acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(63 + (acc << (6 - filled)));
        }
        String::from_utf8(out).unwrap()
    }

    /// Parse one graph6 line (optional `>>graph6<<` header permitted) and
    /// validate the result. Byte offsets in errors refer to the trimmed
    /// line, including the header if present.
    pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
        let line = text.trim();
        let start = if let Some(rest) = line.strip_prefix(">>graph6<<") {
            line.len() - rest.len()
        } else {
            0
        };
        let bytes = line.as_bytes();
        let fail = |msg: &str, offset: usize| GraphError::Graph6 {
            msg: msg.to_string(),
            offset,
        };
        if start >= bytes.len() {
            return Err(fail("empty input", start));
        }
        let (n, data_start) = if bytes[start] == b'~' {
            if bytes.len() > start + 1 && bytes[start + 1] == b'~' {
                return Err(fail("8-byte node counts exceed the supported range", start));
            }
            if bytes.len() < start + 4 {
                return Err(fail("truncated 4-byte node count", bytes.len()));
            }
            let mut n = 0usize;
            for k in 1..4 {
                let c = bytes[start + k];
                if !(63..=126).contains(&c) {
                    return Err(fail("invalid node-count byte", start + k));
                }
                n = n << 6 | (c - 63) as usize;
            }
            (n, start + 4)
        } else {
            let c = bytes[start];
            if !(63..=125).contains(&c) {
                return Err(fail("invalid node-count byte", start));
            }
            ((c - 63) as usize, start + 1)
        };
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes { n });
        }
        let nbits = n * (n - 1) / 2;
        let nbytes = nbits.div_ceil(6);
        let found = bytes.len() - data_start;
        if found != nbytes {
            return Err(fail(
                &format!("expected {nbytes} data bytes for {n} nodes, found {found}"),
                bytes.len().min(data_start + nbytes),
            ));
        }
        let mut edges = Vec::new();
        let mut bit = 0usize;
        let mut tail = 0u8; // the final byte, to validate padding
        let mut next = |k: usize| -> Result<bool, GraphError> {
            let c = bytes[data_start + k / 6];
            if !(63..=126).contains(&c) {
                return Err(GraphError::Graph6 {
                    msg: "invalid data byte".to_string(),
                    offset: data_start + k / 6,
                });
            }
            tail = c - 63;
            Ok((c - 63) >> (5 - k % 6) & 1 == 1)
        };
        for j in 1..n {
            for i in 0..j {
                if next(bit)? {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        if nbits % 6 != 0 && nbytes > 0 {
            // Force a scan of the last byte even if its edge bits were all
            // consumed, then reject nonzero padding.
            let pad = 6 - nbits % 6;
            if tail & ((1 << pad) - 1) != 0 {
                return Err(fail("nonzero padding bits", data_start + nbytes - 1));
            }
        }
        let name = &line[start..];
        Graph::from_edges(n, &edges, name)
    }

    // ---- edge-list text ----

    /// Parse "u v" per line (0-based). Blank lines and `#` comments are
    /// skipped. The graph is named by its own graph6 encoding.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        let mut max_node = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let mut tok = body.split_whitespace();
            let mut field = |what: &str| -> Result<usize, GraphError> {
                let t = tok.next().ok_or_else(|| GraphError::EdgeList {
                    msg: format!("missing {what}"),
                    line,
                })?;
                t.parse().map_err(|_| GraphError::EdgeList {
                    msg: format!("{what} {t:?} is not a node index"),
                    line,
                })
            };
            let u = field("first endpoint")?;
            let v = field("second endpoint")?;
            if let Some(t) = tok.next() {
                return Err(GraphError::EdgeList {
                    msg: format!("unexpected trailing token {t:?}"),
                    line,
                });
            }
            max_node = max_node.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let g = Graph::from_edges(max_node + 1, &edges, "")?;
        let name = g.to_graph6();
        Ok(g.rename(name))
    }

    // ---- subgraph search ----

    /// Is G[a, b] complete bipartite? Errors if the sets overlap; vacuously
    /// true when either side is empty.
    pub fn is_complete_bipartite_between(
        &self,
        a: NodeSet,
        b: NodeSet,
    ) -> Result<bool, GraphError> {
        if !a.is_disjoint_from(b) {
            return Err(GraphError::Overlap { a, b });
        }
        Ok(a.iter().all(|v| b.is_subset_of(self.adj[v])))
    }

    /// Does the graph contain K_{l,m} as a (not necessarily induced)
    /// subgraph? Exhaustive search over candidate shores A with the pruning
    /// rule that A can only extend while |CN(A)| stays >= the other side.
    pub fn contains_complete_bipartite(&self, l: usize, m: usize) -> bool {
        assert!(l >= 1 && m >= 1, "shore sizes must be positive");
        // The answer is symmetric in (l, m); searching the smaller shore
        // prunes harder.
        let (l, m) = (l.min(m), l.max(m));
        fn extend(g: &Graph, a: NodeSet, from: usize, left: usize, m: usize) -> bool {
            let cn = g.common_neighborhood(a);
            if cn.len() < m {
                return false;
            }
            if left == 0 {
                return true;
            }
            (from..g.n).any(|v| !a.contains(v) && extend(g, a.with(v), v + 1, left - 1, m))
        }
        extend(self, NodeSet::EMPTY, 0, l, m)
    }

    /// A maximum clique, found by Bron-Kerbosch with pivoting.
    pub fn max_clique(&self) -> NodeSet {
        fn bk(g: &Graph, r: NodeSet, mut p: NodeSet, mut x: NodeSet, best: &mut NodeSet) {
            if p.is_empty() && x.is_empty() {
                if r.len() > best.len() {
                    *best = r;
                }
                return;
            }
            if r.len() + p.len() <= best.len() {
                return;
            }
            let pivot = p
                .union(x)
                .iter()
                .max_by_key(|&u| p.intersection(g.adj[u]).len())
                .unwrap();
            for v in p.difference(g.adj[pivot]).iter() {
                bk(
                    g,
                    r.with(v),
                    p.intersection(g.adj[v]),
                    x.intersection(g.adj[v]),
                    best,
                );
                p.remove(v);
                x.insert(v);
            }
        }
        let mut best = NodeSet::EMPTY;
        bk(
            self,
            NodeSet::EMPTY,
            self.nodes(),
            NodeSet::EMPTY,
            &mut best,
        );
        best
    }

    /// Exact chromatic number by k-coloring backtracking, k counting up from
    /// the clique lower bound. Rejects graphs above `CHROMATIC_BUDGET`.
    pub fn chromatic_number(&self) -> Result<usize, GraphError> {
        if self.n > CHROMATIC_BUDGET {
            return Err(GraphError::ChromaticBudget {
                name: self.name.clone(),
                n: self.n,
            });
        }
        // Static order: descending degree fails earlier.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));

        fn colorable(
            g: &Graph,
            order: &[usize],
            colors: &mut [usize],
            idx: usize,
            used: usize,
            k: usize,
        ) -> bool {
            if idx == order.len() {
                return true;
            }
            let v = order[idx];
            let mut forbidden = 0u64;
            for w in g.adj[v].iter() {
                if colors[w] != usize::MAX {
                    forbidden |= 1 << colors[w];
                }
            }
            // Colors beyond the first unused one are interchangeable.
            for c in 0..k.min(used + 1) {
                if forbidden >> c & 1 == 0 {
                    colors[v] = c;
                    if colorable(g, order, colors, idx + 1, used.max(c + 1), k) {
                        return true;
                    }
                }
            }
            colors[v] = usize::MAX;
            false
        }

        let lower = self.max_clique().len().max(1);
        for k in lower..=self.n {
            let mut colors = vec![usize::MAX; self.n];
            if colorable(self, &order, &mut colors, 0, 0, k) {
                return Ok(k);
            }
        }
        unreachable!("n colors always suffice")
    }

    // ---- CN laws ----

    /// Check the four common-neighborhood laws:
    /// (a) A and CN(A) are disjoint;
    /// (b) CN is antitone (checked via single-element removals, which chain
    ///     to arbitrary inclusions, in exhaustive mode; via random pairs
    ///     A subset-of B in sampled mode);
    /// (c) A is contained in CN(CN(A));
    /// (d) CN(A) = CN(CN(CN(A))).
    ///
    /// Exhaustive over all subsets while 2^n <= 2^20, otherwise sampled with
    /// a seeded generator. The laws are theorems, so any failure witnesses
    /// an implementation bug.
    pub fn cn_laws_report(&self, seed: u64) -> CnLawsReport {
        let mut laws = [
            LawCheck::new('a'),
            LawCheck::new('b'),
            LawCheck::new('c'),
            LawCheck::new('d'),
        ];
        let check = |g: &Graph, a: NodeSet, b_superset: NodeSet, laws: &mut [LawCheck; 4]| {
            let cn = g.common_neighborhood(a);
            let cn2 = g.common_neighborhood(cn);
            let cn3 = g.common_neighborhood(cn2);
            laws[0].observe(a.is_disjoint_from(cn), a, cn);
            let cn_sup = g.common_neighborhood(b_superset);
            laws[1].observe(cn_sup.is_subset_of(cn), a, b_superset);
            laws[2].observe(a.is_subset_of(cn2), a, cn2);
            laws[3].observe(cn == cn3, a, cn3);
        };
        if self.n <= CN_EXHAUSTIVE_LIMIT {
            let total = 1u64 << self.n;
            for mask in 0..total {
                let a = NodeSet::from_mask(mask);
                // For law (b) pair A with each one-element extension; the
                // general inclusion follows by chaining removals.
                let mut paired = false;
                for v in 0..self.n {
                    if !a.contains(v) {
                        check(self, a, a.with(v), &mut laws);
                        paired = true;
                        break;
                    }
                }
                if !paired {
                    check(self, a, a, &mut laws);
                }
            }
            CnLawsReport {
                exhaustive: true,
                samples: total as usize,
                seed: None,
                laws: laws.to_vec(),
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full = self.nodes().mask();
            for _ in 0..CN_LAW_SAMPLES {
                let a = NodeSet::from_mask(rng.gen::<u64>() & full);
                let b = NodeSet::from_mask(a.mask() | (rng.gen::<u64>() & full));
                check(self, a, b, &mut laws);
            }
            CnLawsReport {
                exhaustive: false,
                samples: CN_LAW_SAMPLES,
                seed: Some(seed),
                laws: laws.to_vec(),
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph({}, n={}, m={})",
            self.name,
            self.n,
            self.edge_count()
        )
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LawCheck {
    pub law: char,
    pub pass: bool,
    /// First failing pair of sets, if any.
    pub witness: Option<(NodeSet, NodeSet)>,
}

impl LawCheck {
    fn new(law: char) -> LawCheck {
        LawCheck {
            law,
            pass: true,
            witness: None,
        }
    }

    fn observe(&mut self, ok: bool, a: NodeSet, b: NodeSet) {
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some((a, b));
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CnLawsReport {
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: Option<u64>,
    pub laws: Vec<LawCheck>,
}

impl CnLawsReport {
    pub fn all_pass(&self) -> bool {
        self.laws.iter().all(|l| l.pass)
    }
}

// ---- generators ----

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Graph::from_edges(n, &edges, format!("K{n}"))
}

pub fn cycle(len: usize) -> Result<Graph, GraphError> {
    if len < 3 {
        return Err(GraphError::Family {
            spec: format!("cycle:{len}"),
            msg: "cycle length must be at least 3".to_string(),
        });
    }
    let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    Graph::from_edges(len, &edges, format!("C{len}"))
}

/// K_{l,m} with shore {0..l} against shore {l..l+m}.
pub fn complete_bipartite(l: usize, m: usize) -> Result<Graph, GraphError> {
    if l == 0 || m == 0 {
        return Err(GraphError::Family {
            spec: format!("complete-bipartite:{l},{m}"),
            msg: "both shores must be nonempty".to_string(),
        });
    }
    let edges: Vec<_> = (0..l)
        .flat_map(|i| (0..m).map(move |j| (i, l + j)))
        .collect();
    Graph::from_edges(l + m, &edges, format!("K{l},{m}"))
}

/// Kneser graph: vertices are the k-subsets of {0..n} in lexicographic
/// order, adjacent when disjoint. Requires n >= 2k+1 so the result is
/// connected with an edge.
pub fn kneser(n: usize, k: usize) -> Result<Graph, GraphError> {
    let spec = format!("kneser:{n},{k}");
    if k == 0 || n < 2 * k + 1 {
        return Err(GraphError::Family {
            spec,
            msg: format!("needs k >= 1 and n >= 2k+1, got n = {n}, k = {k}"),
        });
    }
    let mut subsets: Vec<NodeSet> = Vec::new();
    fn gen(n: usize, k: usize, from: usize, cur: NodeSet, out: &mut Vec<NodeSet>) {
        if cur.len() == k {
            out.push(cur);
            return;
        }
        for v in from..n {
            gen(n, k, v + 1, cur.with(v), out);
        }
    }
    gen(n, k, 0, NodeSet::EMPTY, &mut subsets);
    if subsets.len() > MAX_NODES {
        return Err(GraphError::Family {
            spec,
            msg: format!(
                "{} choose {} = {} vertices exceeds the {MAX_NODES}-node cap",
                n,
                k,
                subsets.len()
            ),
        });
    }
    let mut edges = Vec::new();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            if subsets[i].is_disjoint_from(subsets[j]) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(subsets.len(), &edges, format!("Kneser({n},{k})"))
}

/// Mycielski step: originals keep their indices, node n+i shadows node i,
/// node 2n is the apex joined to every shadow.
pub fn mycielski(g: &Graph) -> Result<Graph, GraphError> {
    let n = g.n();
    if 2 * n + 1 > MAX_NODES {
        return Err(GraphError::TooManyNodes { n: 2 * n + 1 });
    }
    let mut edges = g.edges();
    for (u, v) in g.edges() {
        edges.push((n + u, v));
        edges.push((n + v, u));
    }
    for i in 0..n {
        edges.push((n + i, 2 * n));
    }
    Graph::from_edges(2 * n + 1, &edges, format!("M({})", g.name()))
}

/// Parse a family DSL string: `complete:N`, `cycle:N`,
/// `complete-bipartite:L,M`, `kneser:N,K`, or `mycielski:<family>`.
pub fn parse_family(spec: &str) -> Result<Graph, GraphError> {
    let bad = |msg: &str| GraphError::Family {
        spec: spec.to_string(),
        msg: msg.to_string(),
    };
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h.trim(), r.trim()),
        None => (spec.trim(), ""),
    };
    let nums = || -> Result<Vec<usize>, GraphError> {
        rest.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| bad("parameters must be integers"))
            })
            .collect()
    };
    let arity = |want: usize, got: &[usize]| -> Result<(), GraphError> {
        if got.len() == want {
            Ok(())
        } else {
            Err(bad(&format!(
                "expected {want} parameter(s), got {}",
                got.len()
            )))
        }
    };
    match head {
        "complete" => {
            let p = nums()?;
            arity(1, &p)?;
            complete(p[0])
        }
        "cycle" => {
            let p = nums()?;
            arity(1, &p)?;
            cycle(p[0])
        }
        "complete-bipartite" => {
            let p = nums()?;
            arity(2, &p)?;
            complete_bipartite(p[0], p[1])
        }
        "kneser" => {
            let p = nums()?;
            arity(2, &p)?;
            kneser(p[0], p[1])
        }
        "mycielski" => {
            if rest.is_empty() {
                return Err(bad(
                    "mycielski needs an inner family, e.g. mycielski:cycle:5",
                ));
            }
            mycielski(&parse_family(rest)?)
        }
        other => Err(bad(&format!("unknown family {other:?}"))),
    }
}

/// Every connected graph on exactly `n` nodes, one representative per
/// isomorphism class, ordered by minimal edge mask. Intended for small n
/// (the canonical form is a minimum over all n! relabelings).
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!((2..=7).contains(&n), "corpus generator is for 2..=7 nodes");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let bit_of = {
        let mut t = vec![vec![usize::MAX; n]; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            t[i][j] = b;
            t[j][i] = b;
        }
        t
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut out = Vec::new();
    'mask: for mask in 0u64..1 << pairs.len() {
        // Connectivity first; it kills most masks cheaply.
        let mut adj = vec![0u64; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        let mut reached = 1u64;
        loop {
            let mut grown = reached;
            let mut rest = reached;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grown |= adj[v];
            }
            if grown == reached {
                break;
            }
            reached = grown;
        }
        if reached != (1u64 << n) - 1 {
            continue;
        }
        // Keep only the lexicographically minimal representative of the
        // isomorphism class.
        for perm in &perms {
            let mut remapped = 0u64;
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    remapped |= 1 << bit_of[perm[i]][perm[j]];
                }
            }
            if remapped < mask {
                continue 'mask;
            }
        }
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges, "").expect("connected by construction");
        let name = g.to_graph6();
        out.push(g.rename(name));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn set(vs: &[usize]) -> NodeSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn nodeset_order_is_cardinality_then_lex() {
        assert!(set(&[3]) < set(&[1, 2]));
        assert!(set(&[1, 3]) < set(&[2, 3]));
        assert!(set(&[1, 2]) < set(&[1, 3]));
        // Numeric mask order would invert this pair.
        assert!(set(&[0, 3]) < set(&[1, 2]));
        assert_eq!(set(&[2, 4]).cmp(&set(&[2, 4])), Ordering::Equal);
        assert!(!(set(&[2, 4]) < set(&[2, 4])));
    }

    #[test]
    fn nodeset_display() {
        assert_eq!(set(&[0, 2, 5]).to_string(), "{0,2,5}");
        assert_eq!(NodeSet::EMPTY.to_string(), "{}");
    }

    #[test]
    fn neighbors_and_cn() {
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.neighbors(0), set(&[1, 4]));
        assert_eq!(c5.common_neighborhood(set(&[1, 4])), set(&[0]));
        assert_eq!(c5.common_neighborhood(NodeSet::EMPTY), c5.nodes());
        let k4 = complete(4).unwrap();
        assert_eq!(k4.neighbors(2), set(&[0, 1, 3]));
        assert_eq!(k4.common_neighborhood(set(&[0, 1])), set(&[2, 3]));
        let star = complete_bipartite(1, 3).unwrap();
        assert_eq!(star.neighbors(0), set(&[1, 2, 3]));
    }

    #[test]
    fn graph6_reference_encodings() {
        let cases: Vec<(Graph, &str)> = vec![
            (complete(2).unwrap(), "A_"),
            (cycle(4).unwrap(), "Cl"),
            (cycle(5).unwrap(), "Dhc"),
            (complete(4).unwrap(), "C~"),
            (complete(5).unwrap(), "D~{"),
            (complete(6).unwrap(), "E~~w"),
            (complete_bipartite(3, 3).unwrap(), "EFz_"),
            (complete_bipartite(1, 3).unwrap(), "Cs"),
            (kneser(5, 2).unwrap(), "I?LRCecq?"),
        ];
        for (g, expect) in cases {
            assert_eq!(g.to_graph6(), expect, "encoding {}", g.name());
            let back = Graph::parse_graph6(expect).unwrap();
            assert_eq!(back.n(), g.n());
            assert_eq!(back.edges(), g.edges());
        }
    }

    #[test]
    fn graph6_decode_fixture() {
        let g = Graph::parse_graph6("DQc").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn graph6_header_and_roundtrip_long_form() {
        let g = Graph::parse_graph6(">>graph6<<A_").unwrap();
        assert_eq!(g.n(), 2);
        // 64 nodes exercises the 4-byte size field.
        let edges: Vec<_> = (0..63).map(|i| (i, i + 1)).collect();
        let path = Graph::from_edges(64, &edges, "P64").unwrap();
        let enc = path.to_graph6();
        assert!(enc.starts_with('~'));
        let back = Graph::parse_graph6(&enc).unwrap();
        assert_eq!(back.n(), 64);
        assert_eq!(back.edges(), path.edges());
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        match Graph::parse_graph6("@") {
            Err(GraphError::TooFewNodes { n: 1 }) => {}
            other => panic!("expected too-few-nodes, got {other:?}"),
        }
        match Graph::parse_graph6("A") {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("expected length error, got {other:?}"),
        }
        match Graph::parse_graph6("B!") {
            Err(GraphError::Graph6 { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("expected data-byte error, got {other:?}"),
        }
        match Graph::parse_graph6("B 7") {
            Err(GraphError::Graph6 { msg, offset }) => {
                assert!(msg.contains("expected 1 data bytes"), "{msg}");
                assert_eq!(offset, 2);
            }
            other => panic!("expected length error, got {other:?}"),
        }
        match Graph::parse_graph6("A?") {
            Err(GraphError::NoEdges) => {}
            other => panic!("expected no-edges, got {other:?}"),
        }
        // Two disjoint edges: disconnected, with witness components.
        match Graph::parse_graph6("C`") {
            Err(GraphError::Disconnected { a, b }) => {
                assert_eq!(a, set(&[0, 1]));
                assert_eq!(b, set(&[2, 3]));
            }
            other => panic!("expected disconnected, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::parse_edge_list("0 1\n1 2 # a comment\n\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        match Graph::parse_edge_list("0 x") {
            Err(GraphError::EdgeList { line: 1, .. }) => {}
            other => panic!("expected edge-list error, got {other:?}"),
        }
        match Graph::parse_edge_list("0 1\n2 2") {
            Err(GraphError::SelfLoop { v: 2 }) => {}
            other => panic!("expected self-loop, got {other:?}"),
        }
    }

    #[test]
    fn cn_laws_hold() {
        for g in [
            cycle(5).unwrap(),
            complete(6).unwrap(),
            kneser(5, 2).unwrap(),
            complete_bipartite(3, 3).unwrap(),
        ] {
            let report = g.cn_laws_report(0);
            assert!(report.exhaustive);
            assert!(report.all_pass(), "laws failed on {}: {report:?}", g.name());
        }
        // Above 2^20 subsets the report switches to seeded sampling.
        let big = cycle(24).unwrap();
        let report = big.cn_laws_report(42);
        assert!(!report.exhaustive);
        assert_eq!(report.seed, Some(42));
        assert_eq!(report.samples, CN_LAW_SAMPLES);
        assert!(report.all_pass());
    }

    #[test]
    fn complete_bipartite_between() {
        let c5 = cycle(5).unwrap();
        assert!(c5
            .is_complete_bipartite_between(set(&[0]), set(&[1, 4]))
            .unwrap());
        assert!(!c5
            .is_complete_bipartite_between(set(&[0, 2]), set(&[1, 3]))
            .unwrap());
        assert!(c5
            .is_complete_bipartite_between(NodeSet::EMPTY, set(&[1, 3]))
            .unwrap());
        assert!(matches!(
            c5.is_complete_bipartite_between(set(&[0, 1]), set(&[1, 2])),
            Err(GraphError::Overlap { .. })
        ));
        // CN(A) is the maximal right shore for any A.
        for mask in 0..32u64 {
            let a = NodeSet::from_mask(mask);
            let cn = c5.common_neighborhood(a);
            assert!(c5.is_complete_bipartite_between(a, cn).unwrap());
        }
    }

    #[test]
    fn contains_complete_bipartite_search() {
        let c5 = cycle(5).unwrap();
        assert!(c5.contains_complete_bipartite(1, 2));
        assert!(!c5.contains_complete_bipartite(2, 2));
        assert!(c5.contains_complete_bipartite(2, 1)); // symmetric
        let k4 = complete(4).unwrap();
        assert!(k4.contains_complete_bipartite(2, 2));
        assert!(!k4.contains_complete_bipartite(2, 3));
        let pet = kneser(5, 2).unwrap();
        assert!(pet.contains_complete_bipartite(1, 3));
        assert!(!pet.contains_complete_bipartite(1, 4));
        assert!(!pet.contains_complete_bipartite(2, 2)); // girth 5
    }

    #[test]
    fn contains_matches_bruteforce_on_small_graphs() {
        // Independent oracle: try every ordered pair of disjoint subsets.
        fn oracle(g: &Graph, l: usize, m: usize) -> bool {
            let total = 1u64 << g.n();
            for am in 0..total {
                let a = NodeSet::from_mask(am);
                if a.len() != l {
                    continue;
                }
                for bm in 0..total {
                    let b = NodeSet::from_mask(bm);
                    if b.len() == m
                        && a.is_disjoint_from(b)
                        && g.is_complete_bipartite_between(a, b).unwrap()
                    {
                        return true;
                    }
                }
            }
            false
        }
        for g in [
            cycle(5).unwrap(),
            complete(5).unwrap(),
            mycielski(&complete(2).unwrap()).unwrap(),
        ] {
            for l in 1..=3 {
                for m in l..=4 {
                    assert_eq!(
                        g.contains_complete_bipartite(l, m),
                        oracle(&g, l, m),
                        "mismatch on {} at ({l},{m})",
                        g.name()
                    );
                }
            }
        }
    }

    #[test]
    fn clique_and_chromatic() {
        assert_eq!(complete(6).unwrap().max_clique().len(), 6);
        assert_eq!(cycle(5).unwrap().max_clique().len(), 2);
        assert_eq!(kneser(5, 2).unwrap().max_clique().len(), 2);
        assert_eq!(complete(4).unwrap().chromatic_number().unwrap(), 4);
        assert_eq!(cycle(5).unwrap().chromatic_number().unwrap(), 3);
        assert_eq!(cycle(6).unwrap().chromatic_number().unwrap(), 2);
        assert_eq!(kneser(5, 2).unwrap().chromatic_number().unwrap(), 3);
        // Triangle-free with chromatic number 4.
        let grotzsch = mycielski(&mycielski(&complete(2).unwrap()).unwrap()).unwrap();
        assert_eq!(grotzsch.n(), 11);
        assert!(!grotzsch.contains_complete_bipartite(3, 3));
        assert_eq!(grotzsch.chromatic_number().unwrap(), 4);
        assert!(matches!(
            cycle(13).unwrap().chromatic_number(),
            Err(GraphError::ChromaticBudget { n: 13, .. })
        ));
    }

    #[test]
    fn family_dsl() {
        assert_eq!(parse_family("cycle:5").unwrap().name(), "C5");
        assert_eq!(parse_family("complete:3").unwrap().edge_count(), 3);
        assert_eq!(parse_family("kneser:5,2").unwrap().n(), 10);
        assert_eq!(
            parse_family("complete-bipartite:3,3").unwrap().edge_count(),
            9
        );
        // The Mycielskian of K2 is the 5-cycle, up to the documented
        // numbering.
        let m = parse_family("mycielski:complete:2").unwrap();
        assert_eq!(m.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 4), (3, 4)]);
        for bad in [
            "complete",
            "complete:one",
            "cycle:2",
            "kneser:4,2",
            "kneser:5",
            "complete-bipartite:0,3",
            "mycielski:",
            "hypercube:3",
        ] {
            assert!(
                matches!(parse_family(bad), Err(GraphError::Family { .. })),
                "{bad} should be rejected"
            );
        }
    }

    #[test]
    fn kneser_52_is_petersen_shaped() {
        let g = kneser(5, 2).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn corpus_counts_match_the_census() {
        // Connected graphs up to isomorphism on 2..=6 nodes.
        assert_eq!(connected_graphs_up_to_iso(2).len(), 1);
        assert_eq!(connected_graphs_up_to_iso(3).len(), 2);
        assert_eq!(connected_graphs_up_to_iso(4).len(), 6);
        assert_eq!(connected_graphs_up_to_iso(5).len(), 21);
        assert_eq!(connected_graphs_up_to_iso(6).len(), 112);
    }

    #[test]
    fn corpus_members_are_valid_and_distinct() {
        let graphs = connected_graphs_up_to_iso(5);
        let mut seen = HashSet::new();
        for g in &graphs {
            g.validate().unwrap();
            assert!(seen.insert(g.to_graph6()));
        }
    }
}
