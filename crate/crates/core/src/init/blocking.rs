use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::scores::PairScore;
use crate::model::{Record, RecordId, RecordPair};

/// A connected component of the above-threshold pair graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockingComponent {
    /// Sorted member ids.
    pub members: Vec<RecordId>,
    /// Edges of the pair graph inside the component, canonical order.
    pub edges: Vec<RecordPair>,
}

impl BlockingComponent {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Connected components of the graph whose edges are `scores`. Records with
/// no edge become singletons. Components are ordered by their smallest id.
/// Scores naming unknown records are ignored.
pub fn blocking_components(records: &[Record], scores: &[PairScore]) -> Vec<BlockingComponent> {
    let mut ids: Vec<&RecordId> = records.iter().map(Record::id).collect();
    ids.sort();
    ids.dedup();
    let index: HashMap<&RecordId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    let mut uf = UnionFind::<usize>::new(ids.len());
    let mut edges = Vec::new();
    for s in scores {
        if let (Some(&i), Some(&j)) = (index.get(s.pair.a()), index.get(s.pair.b())) {
            uf.union(i, j);
            edges.push((i, s.pair.clone()));
        }
    }

    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut components: Vec<BlockingComponent> = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let root = uf.find(i);
        let slot = *by_root.entry(root).or_insert_with(|| {
            components.push(BlockingComponent {
                members: Vec::new(),
                edges: Vec::new(),
            });
            components.len() - 1
        });
        components[slot].members.push((*id).clone());
    }
    for (i, pair) in edges {
        let slot = by_root[&uf.find(i)];
        components[slot].edges.push(pair);
    }
    for c in &mut components {
        c.edges.sort();
        c.edges.dedup();
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(ids: &[&str]) -> Vec<Record> {
        ids.iter()
            .map(|i| Record::new(RecordId::new(*i).unwrap(), vec![]).unwrap())
            .collect()
    }

    fn edge(a: &str, b: &str) -> PairScore {
        PairScore::new(RecordPair::of(a, b).unwrap(), 0.9, "t").unwrap()
    }

    fn member_sets(cs: &[BlockingComponent]) -> Vec<Vec<&str>> {
        cs.iter()
            .map(|c| c.members.iter().map(RecordId::as_str).collect())
            .collect()
    }

    #[test]
    fn chain_and_isolated() {
        let cs = blocking_components(&recs(&["a", "b", "c", "d"]), &[edge("a", "b"), edge("b", "c")]);
        assert_eq!(member_sets(&cs), vec![vec!["a", "b", "c"], vec!["d"]]);
        assert_eq!(cs[0].edges.len(), 2);
    }

    #[test]
    fn no_edges_all_singletons() {
        let cs = blocking_components(&recs(&["c", "a", "b"]), &[]);
        assert_eq!(member_sets(&cs), vec![vec!["a"], vec!["b"], vec!["c"]]);
    }

    #[test]
    fn complete_graph_one_component() {
        let ids = ["a", "b", "c", "d"];
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push(edge(ids[i], ids[j]));
            }
        }
        let cs = blocking_components(&recs(&ids), &edges);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].edges.len(), 6);
    }
}
