use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::class::{state_key, torus_class_in, Group, StateKey, TorusClass};
use super::diagram::Atbd;
use crate::error::{Error, Result};
use crate::exact::LatticeVec;

pub const DEFAULT_STATE_BOUND: usize = 2000;

/// How far the exploration may go.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Limited(usize),
    Exhaustive,
}

/// Diagrams reachable by mutation, grouped into torus classes.
#[derive(Clone, Debug)]
pub struct MutationGraph {
    pub group: Group,
    pub classes: Vec<TorusClass>,
    /// One diagram per class, the first one met.
    pub diagrams: Vec<Atbd>,
    /// (class, cut direction of the mutated group in the source diagram, class).
    pub edges: BTreeSet<(usize, LatticeVec, usize)>,
    /// Distinct diagrams up to SL(2,Z), with their class and depth.
    pub states: Vec<(Atbd, usize, usize)>,
    pub state_edges: BTreeSet<(usize, usize)>,
    /// Whether every state's mutations were explored.
    pub complete: bool,
}

pub fn mutation_graph(a: &Atbd, depth: Depth) -> Result<MutationGraph> {
    mutation_graph_with(a, depth, Group::Sl, DEFAULT_STATE_BOUND)
}

pub fn mutation_graph_with(a: &Atbd, depth: Depth, group: Group, bound: usize) -> Result<MutationGraph> {
    let mut g = MutationGraph {
        group,
        classes: vec![],
        diagrams: vec![],
        edges: BTreeSet::new(),
        states: vec![],
        state_edges: BTreeSet::new(),
        complete: true,
    };
    let mut class_ix: BTreeMap<TorusClass, usize> = BTreeMap::new();
    let mut state_ix: BTreeMap<StateKey, usize> = BTreeMap::new();
    let mut intern = |g: &mut MutationGraph, d: &Atbd, level: usize| -> Result<(usize, usize, bool)> {
        let c = torus_class_in(d, group)?;
        let ci = *class_ix.entry(c.clone()).or_insert_with(|| {
            g.classes.push(c);
            g.diagrams.push(d.clone());
            g.classes.len() - 1
        });
        let key = state_key(d)?;
        if let Some(&si) = state_ix.get(&key) {
            return Ok((ci, si, false));
        }
        g.states.push((d.clone(), ci, level));
        state_ix.insert(key, g.states.len() - 1);
        if g.states.len() > bound {
            return Err(Error::GraphUnbounded(bound));
        }
        Ok((ci, g.states.len() - 1, true))
    };
    intern(&mut g, a, 0)?;
    let mut queue = VecDeque::from([0usize]);
    while let Some(si) = queue.pop_front() {
        let (d, ci, level) = g.states[si].clone();
        if let Depth::Limited(m) = depth {
            if level >= m {
                g.complete = false;
                continue;
            }
        }
        let mut seen_dirs = BTreeSet::new();
        for j in 0..d.nodes.len() {
            let nd = &d.nodes[j];
            if nd.frozen || !seen_dirs.insert(nd.direction) {
                continue;
            }
            let m = d.mutate(j)?;
            let (cj, sj, fresh) = intern(&mut g, &m, level + 1)?;
            g.edges.insert((ci, nd.direction, cj));
            g.state_edges.insert((si.min(sj), si.max(sj)));
            if fresh {
                queue.push_back(sj);
            }
        }
    }
    if depth == Depth::Exhaustive && !g.complete {
        return Err(Error::GraphUnbounded(bound));
    }
    Ok(g)
}

fn simple_cycle(n: usize, adj: &[BTreeSet<usize>], len: usize) -> Option<Vec<usize>> {
    fn go(adj: &[BTreeSet<usize>], path: &mut Vec<usize>, len: usize) -> bool {
        let last = *path.last().expect("nonempty path");
        if path.len() == len {
            return adj[last].contains(&path[0]);
        }
        for &nx in &adj[last] {
            if nx > path[0] && !path.contains(&nx) {
                path.push(nx);
                if go(adj, path, len) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    if len < 3 {
        return None;
    }
    (0..n).find_map(|s| {
        let mut path = vec![s];
        go(adj, &mut path, len).then_some(path)
    })
}

impl MutationGraph {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    fn class_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.classes.len()];
        for &(a, _, b) in &self.edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj
    }

    fn state_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.states.len()];
        for &(a, b) in &self.state_edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj
    }

    /// A cycle of `len` pairwise distinct classes, if one exists.
    pub fn class_cycle(&self, len: usize) -> Option<Vec<usize>> {
        simple_cycle(self.classes.len(), &self.class_adjacency(), len)
    }

    /// A cycle of `len` pairwise distinct diagrams, if one exists.
    pub fn state_cycle(&self, len: usize) -> Option<Vec<usize>> {
        simple_cycle(self.states.len(), &self.state_adjacency(), len)
    }

    /// Length of the shortest cycle of distinct classes.
    pub fn class_girth(&self) -> Option<usize> {
        (3..=self.classes.len()).find(|&l| self.class_cycle(l).is_some())
    }

    pub fn state_girth(&self) -> Option<usize> {
        (3..=self.states.len()).find(|&l| self.state_cycle(l).is_some())
    }

    /// Classes met along the state cycle of the given length.
    pub fn classes_on_state_cycle(&self, len: usize) -> Option<Vec<usize>> {
        self.state_cycle(len).map(|c| c.iter().map(|&s| self.states[s].1).collect())
    }
}
