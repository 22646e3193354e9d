//! Test-only oracles, independent of the library's numerical paths.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reqplex::WeightedGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi style graph on `1..=max_n` nodes with a random edge probability.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> WeightedGraph {
    let n = rng.random_range(1..=max_n);
    let p: f64 = rng.random_range(0.05..0.9);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// Random labelled tree on `n` nodes (random parent attachment).
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let edges: Vec<_> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    WeightedGraph::from_edges(n, &edges).unwrap()
}

pub fn dense_adjacency(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.u][e.v] = 1.0;
        a[e.v][e.u] = 1.0;
    }
    a
}

pub fn dense_laplacian(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let a = dense_adjacency(g);
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            l[i][j] = -a[i][j];
        }
        l[i][i] = a[i].iter().sum();
    }
    l
}

/// `I - D^-1/2 A D^-1/2` with all-zero rows for isolated vertices.
pub fn dense_normalized_laplacian(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let a = dense_adjacency(g);
    let n = a.len();
    let deg: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        if deg[i] == 0.0 {
            continue;
        }
        m[i][i] = 1.0;
        for j in 0..n {
            if a[i][j] != 0.0 {
                m[i][j] = -a[i][j] / (deg[i] * deg[j]).sqrt();
            }
        }
    }
    m
}

/// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Graph energy: sum of absolute adjacency eigenvalues.
pub fn direct_ge(g: &WeightedGraph) -> f64 {
    jacobi_eigenvalues(dense_adjacency(g)).iter().map(|l| l.abs()).sum()
}

pub fn direct_gen(g: &WeightedGraph) -> f64 {
    direct_ge(g) / g.node_count() as f64
}

/// Laplacian energy: sum |mu_i - 2m/n|.
pub fn direct_lge(g: &WeightedGraph) -> f64 {
    let shift = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
    jacobi_eigenvalues(dense_laplacian(g))
        .iter()
        .map(|m| (m - shift).abs())
        .sum()
}

/// Normalized Laplacian energy: sum |nu_i - 1|.
pub fn direct_nlge(g: &WeightedGraph) -> f64 {
    jacobi_eigenvalues(dense_normalized_laplacian(g))
        .iter()
        .map(|v| (v - 1.0).abs())
        .sum()
}

/// Natural connectivity: ln((1/n) sum e^lambda_i).
pub fn direct_ncn(g: &WeightedGraph) -> f64 {
    let ev = jacobi_eigenvalues(dense_adjacency(g));
    (ev.iter().map(|l| l.exp()).sum::<f64>() / ev.len() as f64).ln()
}

/// Edges left over after growing a spanning forest with union-find.
pub fn non_forest_edges(g: &WeightedGraph) -> usize {
    let mut parent: Vec<usize> = (0..g.node_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut extra = 0;
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            extra += 1;
        } else {
            parent[a] = b;
        }
    }
    extra
}

/// Number of trees in the spanning forest, via depth-first search.
pub fn dfs_component_count(g: &WeightedGraph) -> usize {
    let adj = dense_adjacency(g);
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if adj[x][y] != 0.0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// Student-t density integrated from 0 to |t| with composite Simpson's rule.
pub fn t_two_sided_p_by_quadrature(t: f64, dof: u32) -> f64 {
    let nu = dof as f64;
    let ln_gamma = lanczos_ln_gamma;
    let norm = (ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0)).exp() / (nu * std::f64::consts::PI).sqrt();
    let density = |x: f64| norm * (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0);
    let steps = 20_000;
    let h = t.abs() / steps as f64;
    let mut acc = density(0.0) + density(t.abs());
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * density(i as f64 * h);
    }
    let half_mass = acc * h / 3.0;
    1.0 - 2.0 * half_mass
}

/// Lanczos approximation of ln Gamma (g = 7, n = 9).
fn lanczos_ln_gamma(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
