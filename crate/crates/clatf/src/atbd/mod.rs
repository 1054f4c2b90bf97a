//! Almost-toric base diagrams: nodes, cuts, trades, slides, mutations and torus classes.

mod catalog;
mod class;
mod diagram;
mod graph;


pub use catalog::{dp6_alternating, frozen_groups, frozen_vertex_type, monotone_polygon, seed_catalog, FrozenVertexType, CATALOG};
pub use class::{canonical_polygon, state_key, torus_class, torus_class_in, Group, StateKey, TorusClass};
pub use diagram::{Atbd, Node, VertexStatus};
pub use graph::{mutation_graph, mutation_graph_with, Depth, MutationGraph, DEFAULT_STATE_BOUND};
