//! Small directed-graph utilities over adjacency lists.

use std::collections::VecDeque;

/// Strongly connected components (Tarjan, iterative). Components are
/// returned in reverse topological order; node lists are sorted.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    // (node, next child offset)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child == 0 && index[v] == UNSEEN {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*child) {
                *child += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Nodes reachable from `sources` (inclusive).
pub fn reachable(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// SCCs restricted to `alive` nodes that have no edge leaving them.
pub fn bottom_components(adj: &[Vec<usize>], alive: &[bool]) -> Vec<Vec<usize>> {
    let restricted: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, out)| if alive[v] { out.iter().copied().filter(|&w| alive[w]).collect() } else { Vec::new() })
        .collect();
    let comps = strongly_connected_components(&restricted);
    let mut comp_of = vec![usize::MAX; adj.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    comps
        .iter()
        .enumerate()
        .filter(|(i, c)| alive[c[0]] && c.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == *i)))
        .map(|(_, c)| c.clone())
        .collect()
}

/// Whether some infinite path exists inside `adj` starting from `sources`
/// (i.e. a reachable cycle).
pub fn has_reachable_cycle(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> bool {
    let seen = reachable(adj, sources);
    strongly_connected_components(adj).iter().any(|c| seen[c[0]] && is_nontrivial(adj, c))
}

/// A component contains a cycle iff it has more than one node or a self-loop.
pub fn is_nontrivial(adj: &[Vec<usize>], component: &[usize]) -> bool {
    component.len() > 1 || adj[component[0]].contains(&component[0])
}
