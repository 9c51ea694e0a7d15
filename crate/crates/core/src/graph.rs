//! Network graph with a binary interference structure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A directed-pair-free link: an identifier plus its endpoint nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub id: usize,
    pub endpoints: (usize, usize),
}

/// Undirected network graph with per-link interference sets.
///
/// Interference is kept over internal link indices (positions in the link
/// list). Inputs are symmetrized (union) on construction, self-entries are
/// dropped, and every referenced index must exist, so the stored relation is
/// always symmetric and irreflexive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    nodes: Vec<usize>,
    links: Vec<Link>,
    interference: Vec<BTreeSet<usize>>,
}

impl NetworkGraph {
    /// Builds a graph from explicit per-link interference lists, given by
    /// link index.
    pub fn new(
        nodes: Vec<usize>,
        links: Vec<Link>,
        interference: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if interference.len() != links.len() {
            return Err(Error::Graph(format!(
                "interference lists for {} links, graph has {}",
                interference.len(),
                links.len()
            )));
        }
        let mut graph = Self::bare(nodes, links)?;
        let n = graph.links.len();
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (l, list) in interference.into_iter().enumerate() {
            for k in list {
                if k >= n {
                    return Err(Error::Graph(format!(
                        "interference of link index {l} references unknown link index {k}"
                    )));
                }
                if k == l {
                    continue; // a link never interferes with itself
                }
                sets[l].insert(k);
                sets[k].insert(l); // symmetrize by union
            }
        }
        graph.interference = sets;
        Ok(graph)
    }

    /// Builds a graph from per-link interference lists keyed by link id.
    pub fn from_id_lists(
        nodes: Vec<usize>,
        links: Vec<Link>,
        interference_by_id: &BTreeMap<usize, Vec<usize>>,
    ) -> Result<Self> {
        let index: BTreeMap<usize, usize> =
            links.iter().enumerate().map(|(i, l)| (l.id, i)).collect();
        let resolve = |id: usize| -> Result<usize> {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::Graph(format!("unknown link id {id} in interference lists")))
        };
        let mut lists = vec![Vec::new(); links.len()];
        for (&id, neighbours) in interference_by_id {
            let l = resolve(id)?;
            for &k in neighbours {
                lists[l].push(resolve(k)?);
            }
        }
        Self::new(nodes, links, lists)
    }

    /// Builds the k-hop interference sets from the topology alone: two links
    /// are 1-hop neighbours when they share an endpoint, and `I_l` collects
    /// every link within `k` hops of `l` in that conflict sense.
    pub fn with_khop(nodes: Vec<usize>, links: Vec<Link>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Graph("khop requires k >= 1".into()));
        }
        let mut graph = Self::bare(nodes, links)?;
        let n = graph.links.len();
        let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in 0..n {
            for b in (a + 1)..n {
                if graph.share_endpoint(a, b) {
                    adjacent[a].push(b);
                    adjacent[b].push(a);
                }
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for start in 0..n {
            // BFS to depth k in the link-conflict graph.
            let mut depth = vec![usize::MAX; n];
            depth[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                if depth[v] == k {
                    continue;
                }
                for &w in &adjacent[v] {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            for v in 0..n {
                if v != start && depth[v] != usize::MAX {
                    sets[start].insert(v);
                }
            }
        }
        graph.interference = sets;
        Ok(graph)
    }

    fn bare(nodes: Vec<usize>, links: Vec<Link>) -> Result<Self> {
        let node_set: BTreeSet<usize> = nodes.iter().copied().collect();
        if node_set.len() != nodes.len() {
            return Err(Error::Graph("duplicate node ids".into()));
        }
        let mut seen = BTreeSet::new();
        for link in &links {
            if !seen.insert(link.id) {
                return Err(Error::Graph(format!("duplicate link id {}", link.id)));
            }
            for endpoint in [link.endpoints.0, link.endpoints.1] {
                if !node_set.contains(&endpoint) {
                    return Err(Error::Graph(format!(
                        "link {} references unknown node {endpoint}",
                        link.id
                    )));
                }
            }
        }
        let n = links.len();
        Ok(Self {
            nodes,
            links,
            interference: vec![BTreeSet::new(); n],
        })
    }

    fn share_endpoint(&self, a: usize, b: usize) -> bool {
        let (a0, a1) = self.links[a].endpoints;
        let (b0, b1) = self.links[b].endpoints;
        a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_id(&self, index: usize) -> usize {
        self.links[index].id
    }

    pub fn index_of_id(&self, id: usize) -> Option<usize> {
        self.links.iter().position(|l| l.id == id)
    }

    /// Interference set of a link, as link indices.
    pub fn interference(&self, link: usize) -> &BTreeSet<usize> {
        &self.interference[link]
    }

    pub fn interferes(&self, a: usize, b: usize) -> bool {
        self.interference[a].contains(&b)
    }

    /// A path of `n` links over `n + 1` nodes, node-exclusive interference.
    pub fn path(n: usize) -> Self {
        let nodes = (0..=n).collect();
        let links = (0..n)
            .map(|i| Link {
                id: i + 1,
                endpoints: (i, i + 1),
            })
            .collect();
        Self::with_khop(nodes, links, 1).expect("path construction")
    }

    /// A cycle of `n` links, node-exclusive interference.
    pub fn cycle(n: usize) -> Self {
        let nodes = (0..n).collect();
        let links = (0..n)
            .map(|i| Link {
                id: i + 1,
                endpoints: (i, (i + 1) % n),
            })
            .collect();
        Self::with_khop(nodes, links, 1).expect("cycle construction")
    }

    /// `n` links sharing a hub node, node-exclusive interference.
    pub fn star(n: usize) -> Self {
        let nodes = (0..=n).collect();
        let links = (0..n)
            .map(|i| Link {
                id: i + 1,
                endpoints: (0, i + 1),
            })
            .collect();
        Self::with_khop(nodes, links, 1).expect("star construction")
    }

    /// One link between two nodes.
    pub fn single_link() -> Self {
        Self::path(1)
    }

    /// Two links sharing a node (a 2-link path): they interfere.
    pub fn two_link_interfering() -> Self {
        Self::path(2)
    }
}
