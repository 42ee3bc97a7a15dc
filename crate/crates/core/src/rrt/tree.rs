use crate::geom::Vec2;
use crate::scalar::{angle_diff_abs_deg, Real};

use super::{CostComponents, CostWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct RrtNode<T> {
    pub position: Vec2<T>,
    pub parent: Option<usize>,
    /// Heading of the edge from the parent; `None` for the root.
    pub heading_deg: Option<T>,
    /// Cumulative cost from the root.
    pub cost: T,
    /// Cost inputs of the edge from the parent (all zero for the root).
    pub components: CostComponents<T>,
}

/// Search tree with child lists so cost changes can be pushed downstream.
#[derive(Debug, Clone)]
pub struct RrtTree<T> {
    nodes: Vec<RrtNode<T>>,
    children: Vec<Vec<usize>>,
}

impl<T: Real> RrtTree<T> {
    pub fn new(root: Vec2<T>) -> Self {
        Self {
            nodes: vec![RrtNode {
                position: root,
                parent: None,
                heading_deg: None,
                cost: T::zero(),
                components: CostComponents::default(),
            }],
            children: vec![Vec::new()],
        }
    }

    pub fn nodes(&self) -> &[RrtNode<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn push(&mut self, node: RrtNode<T>) -> usize {
        let idx = self.nodes.len();
        if let Some(p) = node.parent {
            self.children[p].push(idx);
        }
        self.nodes.push(node);
        self.children.push(Vec::new());
        idx
    }

    /// Index of the node closest to `p`; lowest index on ties.
    pub fn nearest(&self, p: Vec2<T>) -> usize {
        let mut best = (0, T::infinity());
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (n.position - p).dot(n.position - p);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Indices of nodes within `radius` of `p`, ascending.
    pub fn within(&self, p: Vec2<T>, radius: T) -> Vec<usize> {
        let r2 = radius * radius;
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| (n.position - p).dot(n.position - p) <= r2)
            .map(|(i, _)| i)
            .collect()
    }

    /// Node indices from the root down to `idx`.
    pub fn chain(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![idx];
        let mut cur = idx;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// True when `candidate` lies on the root path of `node`.
    pub fn is_ancestor(&self, candidate: usize, node: usize) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == candidate {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    pub(crate) fn reparent(
        &mut self,
        idx: usize,
        new_parent: usize,
        heading: T,
        components: CostComponents<T>,
        cost: T,
    ) {
        if let Some(old) = self.nodes[idx].parent {
            self.children[old].retain(|&c| c != idx);
        }
        self.children[new_parent].push(idx);
        let n = &mut self.nodes[idx];
        n.parent = Some(new_parent);
        n.heading_deg = Some(heading);
        n.components = components;
        n.cost = cost;
    }

    /// Recomputes turn angles and cumulative costs below `idx` after its
    /// heading or cost changed.
    pub(crate) fn propagate(
        &mut self,
        idx: usize,
        weights: &CostWeights<T>,
        cost_fn: fn(&CostComponents<T>, &CostWeights<T>) -> T,
    ) {
        let mut stack = vec![idx];
        while let Some(p) = stack.pop() {
            let (p_cost, p_heading) = (self.nodes[p].cost, self.nodes[p].heading_deg);
            for k in 0..self.children[p].len() {
                let c = self.children[p][k];
                let node = &mut self.nodes[c];
                let h = node.heading_deg.expect("non-root nodes carry a heading");
                node.components.turn_deg = p_heading
                    .map(|ph| angle_diff_abs_deg(h, ph))
                    .unwrap_or_else(T::zero);
                node.cost = p_cost + cost_fn(&node.components, weights);
                stack.push(c);
            }
        }
    }
}
