//! Named graph families.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::io::MAX_VERTICES;
use crate::graph::{Digraph, VertexId};
use crate::random_walk::rng_for;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    K4Chain { m: usize },
    BsTree { l: usize, k: Option<usize> },
    BackwardPath { n: usize },
    PermSuperposition { n: usize, d: usize, seed: u64 },
    KSymmetric { r: usize },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Digraph> {
        match *self {
            FamilySpec::K4Chain { m } => gen_k4_chain(m),
            FamilySpec::BsTree { l, k } => gen_bs_tree(l, k),
            FamilySpec::BackwardPath { n } => gen_backward_path(n),
            FamilySpec::PermSuperposition { n, d, seed } => gen_perm_superposition(n, d, seed),
            FamilySpec::KSymmetric { r } => gen_k_symmetric(r),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::K4Chain { .. } => "k4-chain",
            FamilySpec::BsTree { .. } => "bs-tree",
            FamilySpec::BackwardPath { .. } => "backward-path",
            FamilySpec::PermSuperposition { .. } => "perm",
            FamilySpec::KSymmetric { .. } => "k-symmetric",
        }
    }
}

/// `m` copies of K*₄ glued at vertex 0; copy `i` also uses `3i+1 ..= 3i+3`.
pub fn gen_k4_chain(m: usize) -> Result<Digraph> {
    if m < 1 {
        return Err(Error::InvalidParameter("k4 chain needs M >= 1".into()));
    }
    let n = m.checked_mul(3).and_then(|x| x.checked_add(1)).filter(|&n| n <= MAX_VERTICES);
    let n = n.ok_or_else(|| Error::InvalidParameter(format!("M = {m} is too large")))?;
    let mut g = Digraph::new(n);
    for i in 0..m {
        let block = [0, 3 * i + 1, 3 * i + 2, 3 * i + 3];
        for &u in &block {
            for &v in &block {
                if u != v {
                    g.add_edge(VertexId(u), VertexId(v), 1.0)?;
                }
            }
        }
    }
    Ok(g)
}

/// Complete `k`-ary tree of depth `l` with arcs away from the root, plus an
/// arc from every leaf to each of its `l` proper ancestors, weighted by
/// `1 / d_out(tail)`. Vertices are numbered in BFS order from the root 0;
/// `k` defaults to `l²`.
pub fn gen_bs_tree(l: usize, k: Option<usize>) -> Result<Digraph> {
    let k = k.unwrap_or(l.saturating_mul(l));
    if l < 1 {
        return Err(Error::InvalidParameter("tree depth must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("branching factor {k} < 2")));
    }
    // level sizes k^0 .. k^l
    let mut levels = Vec::with_capacity(l + 1);
    let mut size = 1usize;
    let mut n = 0usize;
    for depth in 0..=l {
        if depth > 0 {
            size = size.checked_mul(k).filter(|&s| s <= MAX_VERTICES).ok_or_else(too_big)?;
        }
        levels.push(n);
        n = n.checked_add(size).filter(|&n| n <= MAX_VERTICES).ok_or_else(too_big)?;
    }
    let first_leaf = levels[l];
    let parent = |v: usize| (v - 1) / k;
    let mut g = Digraph::new(n);
    for v in 0..first_leaf {
        for c in 0..k {
            g.add_edge(VertexId(v), VertexId(v * k + 1 + c), 1.0 / k as f64)?;
        }
    }
    for leaf in first_leaf..n {
        let mut up = leaf;
        while up != 0 {
            up = parent(up);
            g.add_edge(VertexId(leaf), VertexId(up), 1.0 / l as f64)?;
        }
    }
    Ok(g)
}

fn too_big() -> Error {
    Error::InvalidParameter(format!("instance exceeds {MAX_VERTICES} vertices"))
}

/// Path `0 -> 1 -> .. -> n-1` of weight-0 arcs plus a weight-1 arc
/// `j -> i` for every `j ≥ i + 2`.
pub fn gen_backward_path(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidParameter("backward path needs n >= 3".into()));
    }
    if n > 4096 {
        return Err(Error::InvalidParameter(format!("backward path with n = {n} is too dense")));
    }
    let mut g = Digraph::new(n);
    for i in 0..n - 1 {
        g.add_edge(VertexId(i), VertexId(i + 1), 0.0)?;
    }
    for j in 2..n {
        for i in 0..j - 1 {
            g.add_edge(VertexId(j), VertexId(i), 1.0)?;
        }
    }
    Ok(g)
}

/// Union of `d` uniformly random fixed-point-free permutations of `0..n`.
///
/// Permutations with a fixed point are redrawn. Arcs `i -> π_j(i)` are added
/// permutation by permutation, so edge ids are reproducible from the seed.
pub fn gen_perm_superposition(n: usize, d: usize, seed: u64) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidParameter("permutation family needs n >= 3".into()));
    }
    if d < 1 || d >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= d < n, got d = {d}, n = {n}")));
    }
    if n > MAX_VERTICES || n.checked_mul(d).is_none_or(|m| m > 1 << 26) {
        return Err(too_big());
    }
    let mut rng = rng_for(seed, 0);
    let mut g = Digraph::new(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..d {
        loop {
            perm.shuffle(&mut rng);
            if perm.iter().enumerate().all(|(i, &p)| i != p) {
                break;
            }
        }
        for (i, &p) in perm.iter().enumerate() {
            g.add_edge(VertexId(i), VertexId(p), 1.0)?;
        }
    }
    Ok(g)
}

/// Complete symmetric digraph on `r + 1` vertices.
pub fn gen_k_symmetric(r: usize) -> Result<Digraph> {
    if r < 1 {
        return Err(Error::InvalidParameter("need r >= 1".into()));
    }
    if r >= 4096 {
        return Err(Error::InvalidParameter(format!("r = {r} is too large")));
    }
    let n = r + 1;
    let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    Digraph::from_arcs(n, arcs)
}
