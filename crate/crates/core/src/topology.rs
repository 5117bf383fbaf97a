//! Device coupling graph and all-pairs minimum connected distances.
//!
//! Distance between two qubits is the fewest coupling edges on any path
//! joining them. Edges are unweighted, so Dijkstra here visits nodes in the
//! same order a breadth-first search would.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// Undirected coupling graph. Edges are stored normalized as `(i, j)` with `i < j`,
/// sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyFile {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
}

impl Topology {
    pub fn new(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::validation("topology: num_qubits must be at least 1"));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::validation(format!(
                    "topology: edge ({a},{b}) has endpoint out of range for {num_qubits} qubits"
                )));
            }
            if a == b {
                return Err(Error::validation(format!("topology: edge ({a},{b}) is a self-loop")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Topology {
            num_qubits,
            edges: set.into_iter().collect(),
        })
    }

    /// A chain `0 - 1 - ... - (n-1)`.
    pub fn path(num_qubits: usize) -> Result<Self> {
        let edges: Vec<_> = (1..num_qubits).map(|i| (i - 1, i)).collect();
        Topology::new(num_qubits, &edges)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_qubits];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: TopologyFile = serde_json::from_str(text).map_err(|e| Error::parse("topology", e))?;
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Topology::new(file.num_qubits, &edges)
    }

    pub fn to_json_string(&self) -> String {
        let file = TopologyFile {
            num_qubits: self.num_qubits,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        io::to_json_pretty(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Topology::from_json_str(&io::read_to_string(path)?)
    }

    /// Single-source shortest hop counts from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<Option<u32>> {
        dijkstra(&self.neighbors(), source)
    }

    /// All-pairs minimum connected distances.
    pub fn min_distances(&self) -> DistanceMatrix {
        let adj = self.neighbors();
        let n = self.num_qubits;
        let mut data = Vec::with_capacity(n * n);
        for source in 0..n {
            data.extend(dijkstra(&adj, source));
        }
        DistanceMatrix { n, data }
    }
}

fn dijkstra(adj: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist: Vec<Option<u32>> = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0u32, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &v in &adj[u] {
            let candidate = d + 1;
            if dist[v].is_none_or(|cur| candidate < cur) {
                dist[v] = Some(candidate);
                heap.push(Reverse((candidate, v)));
            }
        }
    }
    dist
}

/// Symmetric `n x n` hop-count matrix. `None` marks a disconnected pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::validation("distance matrix must be square"));
        }
        Ok(DistanceMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.data[i * self.n + j]
    }

    pub fn is_reachable(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    pub fn rows(&self) -> Vec<Vec<Option<u32>>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Largest finite distance, or 0 for a single qubit / fully disconnected graph.
    pub fn diameter(&self) -> u32 {
        self.data.iter().flatten().copied().max().unwrap_or(0)
    }
}

impl Serialize for DistanceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DistanceMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Option<u32>>>::deserialize(d)?;
        DistanceMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    /// Floyd–Warshall over the raw edge list, independent of `Topology::neighbors`.
    fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<u32>>> {
        let mut d = vec![vec![None; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(0u32);
        }
        for &(a, b) in edges {
            if a != b {
                d[a][b] = Some(1);
                d[b][a] = Some(1);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(ik), Some(kj)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|ij| ik + kj < ij) {
                            d[i][j] = Some(ik + kj);
                        }
                    }
                }
            }
        }
        d
    }

    fn bfs(n: usize, edges: &[(usize, usize)], s: usize) -> Vec<Option<u32>> {
        let mut adj = vec![vec![]; n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![None; n];
        dist[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    #[test]
    fn path_of_three() {
        let t = Topology::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(t.min_distances().get(0, 2), Some(2));
    }

    #[test]
    fn self_loop_rejected() {
        let err = Topology::new(2, &[(0, 0)]).unwrap_err().to_string();
        assert!(err.contains("self-loop"), "{err}");
        assert!(err.contains("(0,0)"));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = Topology::new(2, &[(0, 2)]).unwrap_err().to_string();
        assert!(err.contains("(0,2)"), "{err}");
        assert!(Topology::new(0, &[]).is_err());
    }

    #[test]
    fn symmetric_duplicates_collapse() {
        let t = Topology::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(t.edges(), &[(0, 1)]);
    }

    #[test]
    fn five_qubit_path() {
        let d = Topology::path(5).unwrap().min_distances();
        assert_eq!(d.get(0, 4), Some(4));
        assert_eq!(d.get(4, 0), Some(4));
        assert_eq!(d.diameter(), 4);
    }

    #[test]
    fn disconnected_pair_is_unreachable() {
        let d = Topology::new(2, &[]).unwrap().min_distances();
        assert_eq!(d.get(0, 1), None);
        assert!(!d.is_reachable(1, 0));
        assert_eq!(d.get(1, 1), Some(0));
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let ok = Topology::from_json_str(r#"{ "num_qubits": 2, "edges": [[1, 0]] }"#).unwrap();
        assert_eq!(ok.edges(), &[(0, 1)]);
        let err = Topology::from_json_str(r#"{"num_qubits":2,"edges":[],"name":"x"}"#);
        assert!(err.is_err());
        let round = Topology::from_json_str(&ok.to_json_string()).unwrap();
        assert_eq!(round, ok);
    }

    #[test]
    fn ten_node_graph_matches_floyd_warshall() {
        let edges = [
            (0, 3),
            (3, 7),
            (7, 2),
            (2, 9),
            (1, 4),
            (4, 5),
            (5, 1),
            (6, 8),
            (8, 0),
            (9, 6),
        ];
        let t = Topology::new(10, &edges).unwrap();
        assert_eq!(t.min_distances().rows(), floyd_warshall(10, &edges));
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..=12).prop_flat_map(|n| {
            let pairs = proptest::collection::vec((0..n, 0..n), 0..(n * 2 + 1));
            (
                Just(n),
                pairs.prop_map(|v| v.into_iter().filter(|(a, b)| a != b).collect()),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_floyd_warshall_and_bfs((n, edges) in arb_graph()) {
            let d = Topology::new(n, &edges).unwrap().min_distances();
            prop_assert_eq!(d.rows(), floyd_warshall(n, &edges));
            for s in 0..n {
                prop_assert_eq!(d.rows()[s].clone(), bfs(n, &edges, s));
            }
        }

        #[test]
        fn metric_properties((n, edges) in arb_graph()) {
            let d = Topology::new(n, &edges).unwrap().min_distances();
            for i in 0..n {
                prop_assert_eq!(d.get(i, i), Some(0));
                for j in 0..n {
                    prop_assert_eq!(d.get(i, j), d.get(j, i));
                    for k in 0..n {
                        if let (Some(ij), Some(jk), Some(ik)) = (d.get(i, j), d.get(j, k), d.get(i, k)) {
                            prop_assert!(ik <= ij + jk);
                        }
                    }
                }
            }
        }

        #[test]
        fn removing_an_edge_never_shortens((n, edges) in arb_graph(), pick in any::<prop::sample::Index>()) {
            let t = Topology::new(n, &edges).unwrap();
            prop_assume!(!t.edges().is_empty());
            let full = t.min_distances();
            let drop = pick.index(t.edges().len());
            let rest: Vec<_> = t.edges().iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &e)| e).collect();
            let reduced = Topology::new(n, &rest).unwrap().min_distances();
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (full.get(i, j), reduced.get(i, j)) {
                        prop_assert!(b >= a);
                    }
                }
            }
        }
    }
}
