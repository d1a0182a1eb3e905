//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use holtklee::digraph::Digraph;
use holtklee::{Sign, SignVector};

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Fourier-Motzkin feasibility of a homogeneous system of `row · y > 0`
/// (strict) and `row · y ≥ 0` constraints.
fn feasible(mut rows: Vec<(Vec<i128>, bool)>, dim: usize) -> bool {
    for k in 0..dim {
        let (zero, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(r, _)| r[k] == 0);
        let (pos, neg): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(r, _)| r[k] > 0);
        rows = zero;
        for (p, ps) in &pos {
            for (q, qs) in &neg {
                let (a, b) = (p[k], -q[k]);
                let mut row: Vec<i128> = p.iter().zip(q).map(|(x, y)| b * x + a * y).collect();
                let g = row.iter().fold(0, |g, &x| gcd(g, x));
                if g > 1 {
                    row.iter_mut().for_each(|x| *x /= g);
                }
                rows.push((row, *ps || *qs));
            }
        }
        rows.sort();
        rows.dedup();
    }
    rows.iter().all(|(_, strict)| !strict)
}

/// Sign vectors realized by the hyperplanes `v · y = 0`, by brute force over
/// all 3^n sign patterns.
pub fn realized_covectors(vectors: &[Vec<i64>]) -> Vec<SignVector> {
    let n = vectors.len();
    let dim = vectors[0].len();
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut signs = Vec::with_capacity(n);
        let mut rows = Vec::new();
        for v in vectors {
            let s = [Sign::Minus, Sign::Zero, Sign::Plus][c % 3];
            c /= 3;
            signs.push(s);
            let row: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            let neg: Vec<i128> = row.iter().map(|x| -x).collect();
            match s {
                Sign::Plus => rows.push((row, true)),
                Sign::Minus => rows.push((neg, true)),
                Sign::Zero => {
                    rows.push((row, false));
                    rows.push((neg, false));
                }
            }
        }
        if feasible(rows, dim) {
            out.push(SignVector::from_signs(&signs).unwrap());
        }
    }
    out.sort();
    out
}

/// All simple s-t paths, each as its set of internal vertices.
pub fn internal_sets(d: &Digraph, s: usize, t: usize) -> Vec<u64> {
    let adj = d.out_neighbors();
    let mut out = Vec::new();
    let mut stack = vec![(s, 1u64 << s)];
    while let Some((v, seen)) = stack.pop() {
        for &w in &adj[v] {
            if w == t {
                out.push(seen & !(1 << s));
            } else if seen & (1 << w) == 0 {
                stack.push((w, seen | 1 << w));
            }
        }
    }
    out
}

pub fn brute_disjoint(paths: &[u64], used: u64, direct_taken: bool) -> usize {
    let mut best = 0;
    for (i, &p) in paths.iter().enumerate() {
        let ok = if p == 0 { !direct_taken } else { p & used == 0 };
        if ok {
            let rest = &paths[i + 1..];
            best = best.max(1 + brute_disjoint(rest, used | p, direct_taken || p == 0));
        }
    }
    best
}

/// DAG on `0..n` with arc `u → v` (u < v) wherever the next bit is set.
pub fn random_dag(n: usize, bits: &[bool]) -> Digraph {
    let mut d = Digraph::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                d.add_arc(u, v).unwrap();
            }
            k += 1;
        }
    }
    d
}
