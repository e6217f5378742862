//! Directed graphs: reachability, strongly connected components and simple
//! cycles.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Adjacency lists over vertices `0..n`, sorted and without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Digraph::new(n);
        for (u, v) in edges {
            g.adj[u].push(v);
        }
        g.normalize();
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if let Err(k) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(k, v);
        }
    }

    fn normalize(&mut self) {
        for row in &mut self.adj {
            row.sort_unstable();
            row.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn succ(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Vertices reachable from `v0`, including `v0`.
    pub fn reachable(&self, v0: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![v0];
        seen[v0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// A shortest path from `from` to any vertex satisfying `target`, using
    /// only vertices allowed by `allowed`. The path includes both ends.
    pub fn shortest_path(
        &self,
        from: usize,
        allowed: impl Fn(usize) -> bool,
        target: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if !allowed(from) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = alloc::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if target(u) {
                let mut path = vec![u];
                let mut c = u;
                while c != from {
                    c = parent[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adj[u] {
                if !seen[v] && allowed(v) {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Strongly connected components (Tarjan), each sorted, in reverse
    /// topological order.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        self.sccs_within(|_| true)
    }

    /// Strongly connected components of the subgraph induced by `keep`.
    pub fn sccs_within(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let n = self.len();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0usize;
        // Explicit call stack of (vertex, next successor position).
        let mut calls: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != UNSEEN || !keep(root) {
                continue;
            }
            calls.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(top) = calls.len().checked_sub(1) {
                let (u, pos) = calls[top];
                if pos < self.adj[u].len() {
                    let v = self.adj[u][pos];
                    calls[top].1 += 1;
                    if !keep(v) {
                        continue;
                    }
                    if index[v] == UNSEEN {
                        index[v] = counter;
                        low[v] = counter;
                        counter += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        calls.push((v, 0));
                    } else if on_stack[v] {
                        low[u] = low[u].min(index[v]);
                    }
                } else {
                    calls.pop();
                    if let Some(&(parent, _)) = calls.last() {
                        low[parent] = low[parent].min(low[u]);
                    }
                    if low[u] == index[u] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == u {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
        out
    }

    /// True when the vertex set (assumed strongly connected) contains an edge.
    pub fn has_internal_edge(&self, comp: &[usize]) -> bool {
        comp.len() > 1 || self.has_edge(comp[0], comp[0])
    }
}

/// Maximal SCCs reachable from `v0` that contain at least one edge, sorted by
/// their smallest vertex.
pub fn reachable_sccs(g: &Digraph, v0: usize) -> Vec<Vec<usize>> {
    let reach = g.reachable(v0);
    let mut out: Vec<Vec<usize>> = g
        .sccs_within(|v| reach[v])
        .into_iter()
        .filter(|c| g.has_internal_edge(c))
        .collect();
    out.sort();
    out
}

/// Every simple cycle inside `scc`, each exactly once and rotated to start at
/// its smallest vertex. Cycles are listed by start vertex and then in search
/// order. Fails with a budget error past `cap` cycles.
pub fn simple_cycles(g: &Digraph, scc: &[usize], cap: usize) -> Result<Vec<Vec<usize>>> {
    let members: BTreeSet<usize> = scc.iter().copied().collect();
    let mut out = Vec::new();
    let n = g.len();
    let mut blocked = vec![false; n];
    let mut bset: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &s in &members {
        // Johnson: restrict to the SCC of `s` among vertices >= s.
        let allowed = |v: usize| v >= s && members.contains(&v);
        let comp = g
            .sccs_within(allowed)
            .into_iter()
            .find(|c| c.binary_search(&s).is_ok())
            .unwrap_or_default();
        if comp.is_empty() || !g.has_internal_edge(&comp) {
            continue;
        }
        let in_comp = |v: usize| comp.binary_search(&v).is_ok();
        for &v in &comp {
            blocked[v] = false;
            bset[v].clear();
        }
        let mut path = vec![s];
        circuit(
            g, s, s, &in_comp, &mut blocked, &mut bset, &mut path, &mut out, cap,
        )?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn circuit(
    g: &Digraph,
    s: usize,
    v: usize,
    in_comp: &dyn Fn(usize) -> bool,
    blocked: &mut [bool],
    bset: &mut [BTreeSet<usize>],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<bool> {
    let mut found = false;
    blocked[v] = true;
    for &w in g.succ(v) {
        if !in_comp(w) {
            continue;
        }
        if w == s {
            if out.len() >= cap {
                return Err(Error::Budget(format!(
                    "more than {cap} simple cycles; raise the cycle cap"
                )));
            }
            out.push(path.clone());
            found = true;
        } else if !blocked[w] {
            path.push(w);
            if circuit(g, s, w, in_comp, blocked, bset, path, out, cap)? {
                found = true;
            }
            path.pop();
        }
    }
    if found {
        unblock(v, blocked, bset);
    } else {
        for &w in g.succ(v) {
            if in_comp(w) {
                bset[w].insert(v);
            }
        }
    }
    Ok(found)
}

fn unblock(v: usize, blocked: &mut [bool], bset: &mut [BTreeSet<usize>]) {
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if blocked[u] {
            blocked[u] = false;
            let waiting = core::mem::take(&mut bset[u]);
            stack.extend(waiting);
        }
    }
}

/// Rotates a cycle so that it starts at its smallest vertex.
pub fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    let k = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle[k..].iter().chain(&cycle[..k]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_and_two_cycle() {
        let g = Digraph::from_edges(2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        let c = simple_cycles(&g, &[0, 1], 100).unwrap();
        assert_eq!(c, vec![vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn complete_digraph_on_three_vertices() {
        let edges = (0..3).flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)));
        let g = Digraph::from_edges(3, edges);
        assert_eq!(simple_cycles(&g, &[0, 1, 2], 100).unwrap().len(), 5);
        assert!(simple_cycles(&g, &[0, 1, 2], 4).is_err());
    }

    #[test]
    fn dag_has_no_sccs_with_edges() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(reachable_sccs(&g, 0).is_empty());
        let h = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 1)]);
        assert_eq!(reachable_sccs(&h, 0), vec![vec![1, 2]]);
    }

    #[test]
    fn rotation() {
        assert_eq!(canonical_rotation(&[3, 1, 2]), vec![1, 2, 3]);
    }
}
