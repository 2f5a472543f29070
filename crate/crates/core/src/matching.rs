//! Maximum bipartite matching (augmenting paths).

use alloc::vec;
use alloc::vec::Vec;

/// Matches each left vertex to a distinct right vertex where `edge(l, r)`
/// holds, maximizing the number of matched pairs. Returns, for every left
/// vertex, its partner if any. Left vertices are served in index order and
/// try right vertices in index order, so equal-cost ties resolve toward the
/// identity pairing.
pub(crate) fn maximum_matching(left: usize, right: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    let adjacency: Vec<Vec<usize>> = (0..left)
        .map(|l| (0..right).filter(|&r| edge(l, r)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for l in 0..left {
        let mut seen = vec![false; right];
        augment(l, &adjacency, &mut owner, &mut seen);
    }
    let mut partner = vec![None; left];
    for (r, l) in owner.iter().enumerate() {
        if let Some(l) = l {
            partner[*l] = Some(r);
        }
    }
    partner
}

fn augment(l: usize, adjacency: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    if let Some(&r) = adjacency[l].iter().find(|&&r| !seen[r] && owner[r].is_none()) {
        seen[r] = true;
        owner[r] = Some(l);
        return true;
    }
    for &r in &adjacency[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].is_none_or(|other| augment(other, adjacency, owner, seen)) {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}
