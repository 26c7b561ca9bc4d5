//! Simple graphs on labelled vertices.

/// Edge lists of all connected simple graphs on `n` vertices with at most
/// `max_edges` edges.
pub fn connected_graphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = vec![];
    if n == 1 {
        out.push(vec![]);
        return out;
    }
    let mut cur = vec![];
    rec(&pairs, 0, n, max_edges, &mut cur, &mut out);
    out
}

fn rec(pairs: &[(usize, usize)], start: usize, n: usize, max: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if cur.len() + 1 >= n && connected(n, cur) {
        out.push(cur.clone());
    }
    if cur.len() == max {
        return;
    }
    for i in start..pairs.len() {
        cur.push(pairs[i]);
        rec(pairs, i + 1, n, max, cur, out);
        cur.pop();
    }
}

pub fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps == 1
}

/// Vertex degrees.
pub fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(a, b) in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c: Vec<usize> = (1..=5).map(|n| connected_graphs(n, n * (n - 1) / 2).len()).collect();
        assert_eq!(c, vec![1, 1, 4, 38, 728]);
        // trees: n^(n-2)
        assert_eq!(connected_graphs(5, 4).len(), 125);
    }
}
