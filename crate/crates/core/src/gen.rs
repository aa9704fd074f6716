//! Random and exhaustive generation of finite classical systems.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dynsys::{ClassicalSystem, PointMap};
use crate::lattice::OrderSpec;

pub fn random_map<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PointMap {
    PointMap::new((0..n).map(|_| rng.random_range(0..n)).collect())
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PointMap {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    PointMap::new(images)
}

pub fn random_self_map<R: Rng + ?Sized>(rng: &mut R, n: usize, bijective: bool) -> PointMap {
    if bijective {
        random_permutation(rng, n)
    } else {
        random_map(rng, n)
    }
}

// Partial assignment check for g with g∘f = f∘g.
fn consistent(f: &[usize], g: &[Option<usize>], x: usize) -> bool {
    let gx = g[x].expect("assigned");
    // g(f(x)) = f(g(x))
    if let Some(gfx) = g[f[x]] {
        if gfx != f[gx] {
            return false;
        }
    }
    // for every y with f(y) = x: g(x) = f(g(y))
    for (y, &fy) in f.iter().enumerate() {
        if fy == x {
            if let Some(gy) = g[y] {
                if gx != f[gy] {
                    return false;
                }
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn centralizer_dfs<R: Rng + ?Sized>(
    f: &[usize],
    g: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    x: usize,
    bijective: bool,
    rng: &mut Option<&mut R>,
    out: &mut Vec<PointMap>,
    limit: usize,
) {
    let n = f.len();
    if out.len() >= limit {
        return;
    }
    if x == n {
        out.push(PointMap::new(g.iter().map(|v| v.expect("complete")).collect()));
        return;
    }
    let mut candidates: Vec<usize> = (0..n).collect();
    if let Some(r) = rng.as_deref_mut() {
        candidates.shuffle(r);
    }
    for c in candidates {
        if bijective && used[c] {
            continue;
        }
        g[x] = Some(c);
        used[c] = true;
        if consistent(f, g, x) {
            centralizer_dfs(f, g, used, x + 1, bijective, rng, out, limit);
        }
        used[c] = false;
        g[x] = None;
        if out.len() >= limit {
            return;
        }
    }
}

/// Every map commuting with `f` (permutations only when `bijective`).
pub fn centralizer(f: &PointMap, bijective: bool) -> Vec<PointMap> {
    let n = f.len();
    let mut out = Vec::new();
    let mut none: Option<&mut rand_chacha::ChaCha8Rng> = None;
    centralizer_dfs(
        f.images(),
        &mut vec![None; n],
        &mut vec![false; n],
        0,
        bijective,
        &mut none,
        &mut out,
        usize::MAX,
    );
    out
}

/// A uniformly-ordered depth-first pick from the centralizer of `f`. The
/// identity always commutes, so this never fails.
pub fn random_commuting<R: Rng + ?Sized>(rng: &mut R, f: &PointMap, bijective: bool) -> PointMap {
    let n = f.len();
    let mut out = Vec::new();
    let mut r = Some(rng);
    centralizer_dfs(
        f.images(),
        &mut vec![None; n],
        &mut vec![false; n],
        0,
        bijective,
        &mut r,
        &mut out,
        1,
    );
    out.pop().expect("the identity commutes with every map")
}

pub fn random_product_system<R: Rng + ?Sized>(
    rng: &mut R,
    points: usize,
    rank: usize,
    bijective: bool,
) -> ClassicalSystem {
    let first = random_self_map(rng, points, bijective);
    let mut gens = vec![first];
    while gens.len() < rank {
        // commute with every earlier generator: draw from the centralizer of
        // the first and retry until the rest agree
        let cand = random_commuting(rng, &gens[0], bijective);
        if gens
            .iter()
            .all(|g| g.after(&cand) == cand.after(g))
        {
            gens.push(cand);
        }
    }
    ClassicalSystem::new(OrderSpec::Product { rank }, points, gens)
        .expect("generated maps commute")
}

/// Generators for a chain, coarsest first, from the finest map.
pub fn chain_generators(finest: &PointMap, levels: &[u64]) -> Vec<PointMap> {
    let last = *levels.last().expect("nonempty levels");
    levels.iter().map(|l| finest.power(last / l)).collect()
}

pub fn random_chain_system<R: Rng + ?Sized>(
    rng: &mut R,
    points: usize,
    levels: &[u64],
    bijective: bool,
) -> ClassicalSystem {
    let finest = random_self_map(rng, points, bijective);
    ClassicalSystem::new(
        OrderSpec::Chain {
            levels: levels.to_vec(),
        },
        points,
        chain_generators(&finest, levels),
    )
    .expect("powers of one map form a chain")
}

/// All `n^n` self-maps in lexicographic order of their image vectors.
pub fn all_maps(n: usize) -> Vec<PointMap> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(PointMap::new(cur.clone()));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

pub fn all_permutations(n: usize) -> Vec<PointMap> {
    all_maps(n).into_iter().filter(PointMap::is_bijective).collect()
}
