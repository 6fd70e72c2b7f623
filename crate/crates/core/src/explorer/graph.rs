//! Integer-indexed view of an explored transition relation.

use std::ops::Range;

use rustc_hash::FxHashMap;

use crate::lts::{Label, State, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Edge {
    pub pre: u32,
    pub label: u32,
    pub post: u32,
}

/// States are numbered in discovery order; edges are sorted by
/// `(pre, label, post)` so the out-edges of a state are contiguous.
#[derive(Debug, Clone)]
pub(crate) struct Graph {
    pub index: FxHashMap<State, u32>,
    pub labels: Vec<Label>,
    pub edges: Vec<Edge>,
    offsets: Vec<usize>,
    pub inv_ok: Vec<bool>,
    pub deadlocked: Vec<bool>,
    pub edge_violating: Vec<bool>,
    pub initial: Vec<u32>,
}

impl Graph {
    pub fn new(
        index: FxHashMap<State, u32>,
        labels: Vec<Label>,
        mut edges: Vec<Edge>,
        inv_ok: Vec<bool>,
        expanded: &[bool],
        initial: Vec<u32>,
    ) -> Self {
        let n = inv_ok.len();
        edges.sort_unstable();
        edges.dedup();
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.pre as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let deadlocked: Vec<bool> = (0..n).map(|i| expanded[i] && offsets[i] == offsets[i + 1]).collect();
        let edge_violating = edges
            .iter()
            .map(|e| !inv_ok[e.post as usize] || deadlocked[e.post as usize])
            .collect();
        Graph {
            index,
            labels,
            edges,
            offsets,
            inv_ok,
            deadlocked,
            edge_violating,
            initial,
        }
    }

    pub fn state_count(&self) -> usize {
        self.inv_ok.len()
    }

    pub fn out_edges(&self, s: u32) -> Range<usize> {
        self.offsets[s as usize]..self.offsets[s as usize + 1]
    }

    pub fn label_id(&self, label: &Label) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Position of `t` in `edges`, if it is a derived transition.
    pub fn edge_id(&self, t: &Transition) -> Option<usize> {
        let key = Edge {
            pre: *self.index.get(&t.pre)?,
            label: self.label_id(&t.label)?,
            post: *self.index.get(&t.post)?,
        };
        let range = self.out_edges(key.pre);
        self.edges[range.clone()].binary_search(&key).ok().map(|i| range.start + i)
    }

    pub fn transition(&self, states: &[State], e: &Edge) -> Transition {
        Transition {
            pre: states[e.pre as usize].clone(),
            label: self.labels[e.label as usize].clone(),
            post: states[e.post as usize].clone(),
        }
    }
}
