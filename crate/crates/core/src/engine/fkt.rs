//! Planar leaf: the even-subgraph generating function of a planar graph as
//! a weighted perfect-matching sum on a Fisher graph, evaluated with a
//! Kasteleyn-oriented Pfaffian.
//!
//! With `theta = pi/4k`, `a_e = cos(theta m_e)` and `b_e = i sin(theta m_e)`,
//! `sum_{A even} prod_{e in A} b_e prod_{e not in A} a_e` is the principal
//! amplitude of the X-program with one `XX` row per edge, which in turn is
//! `e^{i theta (r - |E|)} (i sin theta)^r T(G; x, y)`.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::planarity::{faces_of, lr_embedding, planar_embedding};
use crate::graph::Multigraph;

/// `T(g; x(k), y(k))` for a graph with planar underlying graph.
pub fn planar_value(g: &Multigraph, k: u32) -> Result<Complex64> {
    let theta = std::f64::consts::PI / (4.0 * k as f64);
    let mut z = Complex64::new(1.0, 0.0);
    let loopless = {
        let mut h = g.clone();
        for e in g.edges().iter().filter(|e| e.is_loop()) {
            // a loop always sits in the even subgraph with weight e^{i theta m}
            z *= Complex64::from_polar(1.0, theta * e.mult as f64);
            h = h.delete(e.id)?;
        }
        h
    };
    for part in loopless.connected_parts() {
        z *= even_subgraph_sum(&part, theta)?;
    }
    let r = g.rank() as f64;
    let size = g.total_multiplicity() as f64;
    let i_sin = Complex64::new(0.0, theta.sin());
    let scale = Complex64::from_polar(1.0, theta * (r - size)) * i_sin.powf(r);
    Ok(z / scale)
}

/// Even-subgraph sum of a connected loopless planar multigraph.
fn even_subgraph_sum(g: &Multigraph, theta: f64) -> Result<Complex64> {
    let emb = planar_embedding(g)
        .ok_or_else(|| Error::Contract("planar leaf called on a nonplanar graph".into()))?;
    let local: HashMap<u32, usize> = emb.labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut mult: HashMap<(usize, usize), u64> = HashMap::new();
    for e in g.edges() {
        let (a, b) = (local[&e.u], local[&e.v]);
        mult.insert((a.min(b), a.max(b)), e.mult);
    }

    // Split vertices of degree > 3 into paths following the rotation, so
    // that every vertex of the weighted graph `h` has degree at most 3.
    let mut h_deg: Vec<usize> = Vec::new();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    // h edges: endpoints and (a, b) weights
    let mut h_edges: Vec<(usize, usize, Complex64, Complex64)> = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    for (v, nbrs) in emb.rotation.iter().enumerate() {
        let d = nbrs.len();
        if d <= 3 {
            let hv = h_deg.len();
            h_deg.push(d);
            for &w in nbrs {
                owner.insert((v, w), hv);
            }
            continue;
        }
        let first = h_deg.len();
        let count = d - 2;
        h_deg.extend(std::iter::repeat(3).take(count));
        owner.insert((v, nbrs[0]), first);
        for (j, &w) in nbrs.iter().enumerate().skip(1).take(d - 2) {
            owner.insert((v, w), first + j - 1);
        }
        owner.insert((v, nbrs[d - 1]), first + count - 1);
        for j in 0..count - 1 {
            h_edges.push((first + j, first + j + 1, one, one));
        }
    }
    for (&(a, b), &m) in &mult {
        let phase = theta * m as f64;
        let (p, q) = (owner[&(a, b)], owner[&(b, a)]);
        h_edges.push((p, q, Complex64::new(phase.cos(), 0.0), Complex64::new(0.0, phase.sin())));
    }
    // deterministic order regardless of hash iteration
    h_edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));

    // Fisher graph: two terminals per h edge, a gadget per h vertex.
    let mut gadget: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); h_deg.len()];
    let mut f_edges: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut reference: Vec<(usize, usize)> = Vec::new();
    for (i, &(p, q, a, b)) in h_edges.iter().enumerate() {
        let (tp, tq) = (2 * i, 2 * i + 1);
        f_edges.push((tp, tq, a));
        reference.push((tp, tq));
        // b is charged once, on the terminal at p
        gadget[p].push((tp, b));
        gadget[q].push((tq, one));
    }
    for terms in &gadget {
        for x in 0..terms.len() {
            for y in x + 1..terms.len() {
                f_edges.push((terms[x].0, terms[y].0, terms[x].1 * terms[y].1));
            }
        }
    }
    planar_matching_sum(2 * h_edges.len(), &f_edges, &reference)
}

/// Sum over perfect matchings of the product of edge weights, for a simple
/// planar graph on `0..n`. `reference` must be a perfect matching; it fixes
/// the global sign of the Pfaffian.
pub fn planar_matching_sum(
    n: usize,
    edges: &[(usize, usize, Complex64)],
    reference: &[(usize, usize)],
) -> Result<Complex64> {
    if n % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let forward = kasteleyn_orientation(n, &pairs)
        .ok_or_else(|| Error::Contract("matching graph is not planar".into()))?;
    let mut k = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut dir: HashMap<(usize, usize), bool> = HashMap::new();
    for (i, &(u, v, w)) in edges.iter().enumerate() {
        let (s, t) = if forward[i] { (u, v) } else { (v, u) };
        k[s][t] += w;
        k[t][s] -= w;
        dir.insert((s, t), true);
        dir.insert((t, s), false);
    }
    let sign = matching_sign(reference, &dir)?;
    Ok(pfaffian(k) * sign)
}

/// The sign carried by one perfect matching's term in the Pfaffian; every
/// other matching carries the same sign under a Kasteleyn orientation.
fn matching_sign(m: &[(usize, usize)], dir: &HashMap<(usize, usize), bool>) -> Result<f64> {
    let mut seq = Vec::with_capacity(2 * m.len());
    let mut sign = 1.0;
    for &(u, v) in m {
        match dir.get(&(u, v)) {
            Some(true) => {}
            Some(false) => sign = -sign,
            None => return Err(Error::Contract("reference pair is not an edge".into())),
        }
        seq.push(u);
        seq.push(v);
    }
    let inversions: usize = (0..seq.len())
        .map(|i| seq[i + 1..].iter().filter(|&&x| x < seq[i]).count())
        .sum();
    Ok(if inversions % 2 == 0 { sign } else { -sign })
}

/// Orientation (true = as listed) in which every face but one per
/// component has an odd number of edges oriented against its walk.
pub fn kasteleyn_orientation(n: usize, edges: &[(usize, usize)]) -> Option<Vec<bool>> {
    let rotation = lr_embedding(n, edges)?;
    let index: HashMap<(usize, usize), usize> = edges
        .iter()
        .enumerate()
        .flat_map(|(i, &(u, v))| [((u, v), i), ((v, u), i)])
        .collect();

    // Spanning forest: its edges keep the listed orientation.
    let mut oriented: Vec<Option<bool>> = vec![None; edges.len()];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    oriented[index[&(v, w)]] = Some(true);
                    queue.push_back(w);
                }
            }
        }
    }

    let faces = faces_of(&rotation);
    let mut face_of_dart: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, darts) in faces.iter().enumerate() {
        for &d in darts {
            face_of_dart.insert(d, f);
        }
    }
    // Dual forest on the remaining edges: (neighbour face, edge).
    let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if oriented[i].is_none() {
            let (f, g) = (face_of_dart[&(u, v)], face_of_dart[&(v, u)]);
            dual[f].push((g, i));
            dual[g].push((f, i));
        }
    }
    let mut order: Vec<(usize, Option<usize>)> = Vec::new();
    let mut visited = vec![false; faces.len()];
    for root in 0..faces.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        order.push((root, None));
        while let Some(f) = queue.pop_front() {
            for &(g, e) in &dual[f] {
                if !visited[g] {
                    visited[g] = true;
                    order.push((g, Some(e)));
                    queue.push_back(g);
                }
            }
        }
    }
    // Leaves first: when a face is reached, only its parent edge is free.
    for &(f, parent) in order.iter().rev() {
        let Some(e) = parent else { continue };
        let mut against = 0usize;
        let mut dart_of_e = None;
        for &(u, v) in &faces[f] {
            let i = index[&(u, v)];
            if i == e {
                dart_of_e = Some((u, v));
                continue;
            }
            let along = oriented[i].expect("only the parent edge is free") == (edges[i] == (u, v));
            if !along {
                against += 1;
            }
        }
        let (u, v) = dart_of_e.expect("parent edge bounds the face");
        // make the total number of edges against the walk odd
        let want_along = against % 2 == 1;
        oriented[e] = Some(want_along == (edges[e] == (u, v)));
    }
    Some(oriented.into_iter().map(|o| o.unwrap_or(true)).collect())
}

/// Pfaffian of a skew-symmetric matrix by pivoted elimination.
pub fn pfaffian(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let (p, best) = (k + 1..n)
            .map(|j| (j, a[k][j].norm()))
            .fold((k + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k + 1 {
            a.swap(k + 1, p);
            for row in a.iter_mut() {
                row.swap(k + 1, p);
            }
            pf = -pf;
        }
        let pivot = a[k][k + 1];
        pf *= pivot;
        let c: Vec<Complex64> = (0..n)
            .map(|i| if i >= k + 2 { a[k][i] / pivot } else { Complex64::new(0.0, 0.0) })
            .collect();
        for i in k + 2..n {
            for j in k + 2..n {
                let delta = c[j] * a[i][k + 1] + c[i] * a[k + 1][j];
                a[i][j] -= delta;
            }
        }
        k += 2;
    }
    if n % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    pf
}
