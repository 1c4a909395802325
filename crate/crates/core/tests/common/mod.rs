//! Reference implementations used as test oracles. They share no code with
//! the library beyond reading edge lists.

#![allow(dead_code)]

/// Minimum hitting set size by trying every vertex subset.
pub fn tau_brute(n: usize, edges: &[Vec<usize>]) -> u32 {
    assert!(n <= 20, "brute force only for tiny instances");
    (0u32..1 << n)
        .filter(|mask| edges.iter().all(|e| e.iter().any(|&v| mask >> v & 1 == 1)))
        .map(|mask| mask.count_ones())
        .min()
        .unwrap_or(0)
}

/// Game value by walking the full game tree over move sequences, with no
/// memo and no notion of position: every history is explored separately.
pub fn game_value_brute(n: usize, edges: &[Vec<usize>], edge_hitter_first: bool) -> u32 {
    fn walk(n: usize, edges: &[Vec<usize>], chosen: &mut Vec<usize>, eh: bool) -> u32 {
        let unhit: Vec<&Vec<usize>> = edges
            .iter()
            .filter(|e| !e.iter().any(|v| chosen.contains(v)))
            .collect();
        if unhit.is_empty() {
            return 0;
        }
        let mut best: Option<u32> = None;
        for v in 0..n {
            if chosen.contains(&v) || !unhit.iter().any(|e| e.contains(&v)) {
                continue;
            }
            chosen.push(v);
            let val = 1 + walk(n, edges, chosen, !eh);
            chosen.pop();
            best = Some(match best {
                None => val,
                Some(b) if eh => b.min(val),
                Some(b) => b.max(val),
            });
        }
        best.expect("an unhit edge has a vertex")
    }
    walk(n, edges, &mut Vec::new(), edge_hitter_first)
}

/// Sorted, deduplicated copy of an edge list, the way a careful reader
/// would normalize it by hand.
pub fn normalize(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for e in edges {
        let mut e = e.clone();
        e.sort_unstable();
        e.dedup();
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}
