//! The partition families `B(n+1)`, `C(n+1)` and `D(n)` with their drawings.
//!
//! Vertex `v` sits at `x = n - v` on the baseline, so vertex 0 is rightmost
//! and vertex `k` carries the letter `j_k` of a word `j_n ... j_1`. A pair is
//! drawn as two legs joined by a horizontal at the pair's height; singletons
//! are vertical lines rising above every horizontal.
//!
//! Heights: in `B` and `C` the pair containing 0 sits at height 1 and the pair
//! whose lower vertex is `l` at `l + 1`; in `D` a pair `(a, b)` sits at `a`.

mod layout;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

pub use layout::{Point, Polyline};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            _ => Err(Error::Parse(format!("unknown partition family {s:?}"))),
        }
    }
}

/// Block structure of a partition, split the way the formulas consume it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockData {
    /// Pairs `(a, b)`, `a < b`, excluding the pair containing 0.
    pub p: Vec<(usize, usize)>,
    /// All singletons, ascending.
    pub s: Vec<usize>,
    /// Singletons to the left of the partner of 0 (vertex label above it).
    pub s_l: Vec<usize>,
    /// Singletons to the right of the partner of 0.
    pub s_r: Vec<usize>,
    pub pi0: Option<usize>,
}

/// A partition of `{0..n}` (families `B`, `C`) or `{1..n}` (family `D`)
/// into pairs and singletons, together with its drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrawnPartition {
    pub family: Family,
    /// Largest vertex label.
    pub n: usize,
    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub pairs: Vec<(usize, usize)>,
    pub singletons: Vec<usize>,
    pub partner0: Option<usize>,
    /// Height of each pair, aligned with `pairs`.
    pub heights: Vec<usize>,
    /// Crossing points, each recorded by the lowest vertex of the two blocks involved.
    #[serde(skip)]
    crossing_blocks: Vec<(usize, usize)>,
}

impl DrawnPartition {
    fn build(family: Family, n: usize, mut pairs: Vec<(usize, usize)>, mut singletons: Vec<usize>) -> Self {
        pairs.sort_unstable();
        singletons.sort_unstable();
        let partner0 = match family {
            Family::D => None,
            _ => pairs.iter().find(|p| p.0 == 0).map(|p| p.1),
        };
        let heights = pairs
            .iter()
            .map(|&(a, _)| match family {
                Family::D => a,
                _ => a + 1,
            })
            .collect();
        let mut p = DrawnPartition {
            family,
            n,
            pairs,
            singletons,
            partner0,
            heights,
            crossing_blocks: Vec::new(),
        };
        p.crossing_blocks = p.compute_crossings();
        p
    }

    /// Number of vertices.
    pub fn n_vertices(&self) -> usize {
        match self.family {
            Family::D => self.n,
            _ => self.n + 1,
        }
    }

    fn x(&self, v: usize) -> i64 {
        (self.n - v) as i64
    }

    /// Height of the tops of singleton lines.
    pub fn top(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0) + 1
    }

    /// Polylines of every block: pairs first (aligned with `pairs`), then singletons.
    pub fn layout(&self) -> Vec<Polyline> {
        let top = self.top() as i64;
        self.pairs
            .iter()
            .zip(&self.heights)
            .map(|(&(a, b), &h)| Polyline::arch(self.x(a), self.x(b), h as i64))
            .chain(self.singletons.iter().map(|&s| Polyline::line(self.x(s), top)))
            .collect()
    }

    fn block_reps(&self) -> Vec<usize> {
        self.pairs
            .iter()
            .map(|p| p.0)
            .chain(self.singletons.iter().copied())
            .collect()
    }

    fn compute_crossings(&self) -> Vec<(usize, usize)> {
        let lines = self.layout();
        let reps = self.block_reps();
        let mut out = Vec::new();
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                let k = layout::intersections(&lines[a], &lines[b]);
                out.extend(std::iter::repeat_n((reps[a], reps[b]), k));
            }
        }
        out
    }

    /// Geometric crossing number of the drawing.
    pub fn crossings(&self) -> usize {
        self.crossing_blocks.len()
    }

    /// Each crossing point as the pair of block representatives (lowest
    /// vertex of each block). Used for the `q_ij` weights.
    pub fn crossing_blocks(&self) -> &[(usize, usize)] {
        &self.crossing_blocks
    }

    pub fn block_data(&self) -> BlockData {
        let k = self.partner0;
        let p = self.pairs.iter().copied().filter(|p| p.0 != 0 || self.family == Family::D).collect();
        let (s_r, s_l) = match k {
            Some(k) => self.singletons.iter().partition(|&&s| s < k),
            None => (Vec::new(), self.singletons.clone()),
        };
        BlockData {
            p,
            s: self.singletons.clone(),
            s_l,
            s_r,
            pi0: k,
        }
    }

    /// Whether every pair joins equal letters. `letter(v)` gives the letter
    /// carried by vertex `v`.
    pub fn pairs_match<F: Fn(usize) -> u8>(&self, letter: F) -> bool {
        self.pairs.iter().all(|&(a, b)| letter(a) == letter(b))
    }

    /// Letters of the given vertices from the highest label down, i.e. as a
    /// word written left to right.
    pub fn word_of<F: Fn(usize) -> u8>(vertices: &[usize], letter: F) -> crate::Word {
        let mut v: Vec<usize> = vertices.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        crate::Word::new(v.into_iter().map(letter).collect())
    }

    /// Checks the family's rules. Used by tests and as a debug guard.
    pub fn satisfies_rules(&self) -> bool {
        let lo = if self.family == Family::D { 1 } else { 0 };
        let mut seen = vec![false; self.n + 1];
        for &(a, b) in &self.pairs {
            if a >= b || a < lo || b > self.n || seen[a] || seen[b] {
                return false;
            }
            seen[a] = true;
            seen[b] = true;
        }
        for &s in &self.singletons {
            if s < lo || s > self.n || seen[s] {
                return false;
            }
            seen[s] = true;
        }
        if !seen[lo..].iter().all(|&x| x) {
            return false;
        }
        let Some(k) = self.partner0 else {
            return self.family == Family::D;
        };
        let partner = |l: usize| {
            self.pairs
                .iter()
                .find(|p| p.0 == l || p.1 == l)
                .map(|p| if p.0 == l { p.1 } else { p.0 })
        };
        for l in 1..k {
            match partner(l) {
                Some(m) if m > k => {}
                None if self.family == Family::C => {}
                _ => return false,
            }
        }
        // right of k: singletons or partners of vertices below k
        (k + 1..=self.n).all(|m| match partner(m) {
            Some(l) => l < k && l > 0,
            None => true,
        })
    }
}

/// All partitions of the family on `n_vertices` vertices, in lexicographic
/// order of `(partner0, pairing map)`.
///
/// `B` and `C` use vertices `0..n_vertices`; `D` uses `1..=n_vertices`.
pub fn enumerate(family: Family, n_vertices: usize) -> Vec<DrawnPartition> {
    match family {
        Family::D => enumerate_d(n_vertices),
        _ if n_vertices == 0 => Vec::new(),
        _ => enumerate_bc(family, n_vertices - 1),
    }
}

fn enumerate_bc(family: Family, n: usize) -> Vec<DrawnPartition> {
    let mut out = Vec::new();
    for k in 1..=n {
        // choice[l-1]: partner of l, or None for a singleton (family C only)
        let mut choice: Vec<Option<usize>> = Vec::with_capacity(k - 1);
        let mut used = vec![false; n + 1];
        assign(family, n, k, 1, &mut choice, &mut used, &mut out);
    }
    out
}

fn assign(
    family: Family,
    n: usize,
    k: usize,
    l: usize,
    choice: &mut Vec<Option<usize>>,
    used: &mut [bool],
    out: &mut Vec<DrawnPartition>,
) {
    if l == k {
        let mut pairs = vec![(0, k)];
        let mut singletons = Vec::new();
        for (idx, c) in choice.iter().enumerate() {
            match c {
                Some(m) => pairs.push((idx + 1, *m)),
                None => singletons.push(idx + 1),
            }
        }
        singletons.extend((k + 1..=n).filter(|&m| !used[m]));
        out.push(DrawnPartition::build(family, n, pairs, singletons));
        return;
    }
    if family == Family::C {
        choice.push(None);
        assign(family, n, k, l + 1, choice, used, out);
        choice.pop();
    }
    for m in k + 1..=n {
        if used[m] {
            continue;
        }
        used[m] = true;
        choice.push(Some(m));
        assign(family, n, k, l + 1, choice, used, out);
        choice.pop();
        used[m] = false;
    }
}

fn enumerate_d(n: usize) -> Vec<DrawnPartition> {
    fn go(v: usize, n: usize, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, single: &mut Vec<usize>, out: &mut Vec<DrawnPartition>) {
        if v > n {
            out.push(DrawnPartition::build(Family::D, n, pairs.clone(), single.clone()));
            return;
        }
        if used[v] {
            go(v + 1, n, used, pairs, single, out);
            return;
        }
        single.push(v);
        go(v + 1, n, used, pairs, single, out);
        single.pop();
        for m in v + 1..=n {
            if used[m] {
                continue;
            }
            used[m] = true;
            pairs.push((v, m));
            go(v + 1, n, used, pairs, single, out);
            pairs.pop();
            used[m] = false;
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n + 1];
    go(1, n, &mut used, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

type Cache = RwLock<HashMap<(Family, usize), Arc<Vec<DrawnPartition>>>>;

/// Shared, lazily filled copy of [`enumerate`].
pub fn cached(family: Family, n_vertices: usize) -> Arc<Vec<DrawnPartition>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().expect("partition cache poisoned").get(&(family, n_vertices)) {
        return Arc::clone(v);
    }
    let fresh = Arc::new(enumerate(family, n_vertices));
    let mut w = cache.write().expect("partition cache poisoned");
    Arc::clone(w.entry((family, n_vertices)).or_insert(fresh))
}

/// For a full pairing in `B(2m)` with `partner0 = m`, the permutation
/// `l -> partner(l) - m` of `{1..m-1}` (values 1-based).
pub fn induced_permutation(p: &DrawnPartition) -> Result<Vec<usize>> {
    if p.family != Family::B || p.n_vertices() % 2 != 0 {
        return Err(Error::InvalidArgument("need a partition in B(2m)".into()));
    }
    let m = p.n_vertices() / 2;
    if !p.singletons.is_empty() || p.partner0 != Some(m) {
        return Err(Error::InvalidArgument(format!(
            "need a full pairing with 0 paired to {m}"
        )));
    }
    let mut perm = vec![0; m - 1];
    for &(a, b) in &p.pairs {
        if a > 0 {
            perm[a - 1] = b - m;
        }
    }
    Ok(perm)
}

pub fn inversions(perm: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                n += 1;
            }
        }
    }
    n
}
