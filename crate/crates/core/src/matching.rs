use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum bipartite matching by Hopcroft-Karp.
///
/// `adj[l]` lists the right vertices (`< right`) adjacent to left vertex `l`.
/// Returns, for each left vertex, its matched right vertex.
pub fn hopcroft_karp(right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![FREE; left];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![0usize; left];

    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(l) = queue.pop_front() {
            for &rv in &adj[l] {
                match match_r[rv] {
                    FREE => reachable_free = true,
                    l2 if dist[l2] == usize::MAX => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !reachable_free {
            break;
        }
        let mut grew = false;
        for l in 0..left {
            if match_l[l] == FREE && augment(l, adj, &mut match_l, &mut match_r, &mut dist) {
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    match_l.into_iter().map(|m| (m != FREE).then_some(m)).collect()
}

fn augment(l: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &rv in &adj[l] {
        let next = match_r[rv];
        if next == FREE || (dist[next] == dist[l] + 1 && augment(next, adj, match_l, match_r, dist)) {
            match_l[l] = rv;
            match_r[rv] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// Left-perfect matching, if one exists.
pub fn perfect_matching(right: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    hopcroft_karp(right, adj).into_iter().collect()
}
