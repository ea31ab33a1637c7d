//! The real resonance arrangement: realizability of sign functions, chamber
//! witnesses, walls, and the chamber adjacency graph.
//!
//! Realizability is decided by exact rational linear feasibility. The
//! arrangement is central and homogeneous, so strict inequalities can be
//! normalized to `>= 1` without loss.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigRational, One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stratum::{canonical_subsets, PoleSubset, ResidueConfig, Sign, SignFunction};

/// Largest pole count for which the chamber graph is enumerated.
pub const CHAMBER_GRAPH_MAX_POLES: usize = 5;

/// A chamber of the real arrangement: a nowhere-zero sign function together
/// with an exact rational witness configuration.
#[derive(Debug, Clone)]
pub struct Chamber {
    pub psi: SignFunction,
    pub witness: ResidueConfig,
}

impl Chamber {
    /// Builds a chamber from a sign function by solving for a witness.
    pub fn from_psi(psi: &SignFunction) -> Result<Chamber> {
        let witness = sample_point(psi)?;
        Ok(Chamber { psi: psi.clone(), witness })
    }

    /// Builds a chamber from a residue configuration; the configuration must
    /// avoid every hyperplane.
    pub fn from_residues(res: &ResidueConfig) -> Result<Chamber> {
        let psi = res.sign_function();
        if !psi.is_nowhere_zero() {
            return Err(Error::UnrealizableSign);
        }
        Ok(Chamber { psi, witness: res.clone() })
    }
}

/// A wall between two chambers: the hyperplane subset and the two sides.
#[derive(Debug, Clone)]
pub struct Wall {
    pub subset: PoleSubset,
    pub sides: (SignFunction, SignFunction),
}

// ----------------------------------------------------------------------
// Exact rational feasibility
// ----------------------------------------------------------------------

mod lp {
    use super::*;

    pub enum Rel {
        Eq,
        Ge,
    }

    pub struct Row {
        pub coeffs: Vec<BigRational>,
        pub rel: Rel,
        pub rhs: BigRational,
    }

    /// Phase-1 simplex with Bland's rule over exact rationals. Returns a
    /// feasible point of the system over free variables, if one exists.
    pub fn feasible(num_vars: usize, rows: &[Row]) -> Option<Vec<BigRational>> {
        let m = rows.len();
        // free variables split as x = u - v with u, v >= 0;
        // Ge rows get a surplus column; every row gets an artificial.
        let mut surplus = 0usize;
        for r in rows {
            if matches!(r.rel, Rel::Ge) {
                surplus += 1;
            }
        }
        let n_struct = 2 * num_vars + surplus;
        let n = n_struct + m;
        let zero = BigRational::zero();
        let one = BigRational::one();
        let mut tab = vec![vec![zero.clone(); n + 1]; m + 1];
        let mut basis = vec![0usize; m];
        let mut s_col = 2 * num_vars;
        for (i, r) in rows.iter().enumerate() {
            let flip = r.rhs.is_negative();
            let sgn = if flip { -one.clone() } else { one.clone() };
            for (j, c) in r.coeffs.iter().enumerate() {
                tab[i][2 * j] = c * &sgn;
                tab[i][2 * j + 1] = -(c * &sgn);
            }
            if matches!(r.rel, Rel::Ge) {
                tab[i][s_col] = -&sgn * &one;
                s_col += 1;
            }
            tab[i][n_struct + i] = one.clone();
            tab[i][n] = &r.rhs * &sgn;
            basis[i] = n_struct + i;
        }
        // objective: minimize the sum of artificials; price them out
        for j in 0..=n {
            let mut s = BigRational::zero();
            for i in 0..m {
                s += &tab[i][j];
            }
            tab[m][j] = -s;
        }
        for i in 0..m {
            tab[m][n_struct + i] = BigRational::zero();
        }

        loop {
            // Bland: smallest column with negative reduced cost
            let mut enter = None;
            for j in 0..n {
                if tab[m][j].is_negative() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(e) = enter else { break };
            // ratio test, ties broken by smallest basis variable
            let mut leave: Option<usize> = None;
            let mut best: Option<BigRational> = None;
            for i in 0..m {
                if tab[i][e].is_positive() {
                    let ratio = &tab[i][n] / &tab[i][e];
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            let Some(l) = leave else {
                // unbounded objective cannot happen in phase 1
                return None;
            };
            // pivot at (l, e)
            let piv = tab[l][e].clone();
            for j in 0..=n {
                tab[l][j] = &tab[l][j] / &piv;
            }
            for i in 0..=m {
                if i != l && !tab[i][e].is_zero() {
                    let f = tab[i][e].clone();
                    for j in 0..=n {
                        let delta = &f * &tab[l][j];
                        tab[i][j] = &tab[i][j] - delta;
                    }
                }
            }
            basis[l] = e;
        }

        if !tab[m][n].is_zero() {
            return None;
        }
        let mut x = vec![BigRational::zero(); 2 * num_vars];
        for i in 0..m {
            if basis[i] < 2 * num_vars {
                x[basis[i]] = tab[i][n].clone();
            }
        }
        Some((0..num_vars).map(|j| &x[2 * j] - &x[2 * j + 1]).collect())
    }
}

fn sign_rows(psi: &SignFunction, zero_override: Option<&PoleSubset>) -> Vec<lp::Row> {
    let p = psi.num_poles();
    let one = BigRational::one();
    let mut rows = Vec::new();
    // residue theorem
    rows.push(lp::Row {
        coeffs: vec![one.clone(); p],
        rel: lp::Rel::Eq,
        rhs: BigRational::zero(),
    });
    for s in canonical_subsets(p) {
        let mut coeffs = vec![BigRational::zero(); p];
        for l in s.iter() {
            coeffs[l as usize - 1] = one.clone();
        }
        let sign = if zero_override == Some(&s) { Sign::Zero } else { psi.sign(&s) };
        let row = match sign {
            Sign::Zero => lp::Row { coeffs, rel: lp::Rel::Eq, rhs: BigRational::zero() },
            Sign::Pos => lp::Row { coeffs, rel: lp::Rel::Ge, rhs: one.clone() },
            Sign::Neg => lp::Row {
                coeffs: coeffs.into_iter().map(|c| -c).collect(),
                rel: lp::Rel::Ge,
                rhs: one.clone(),
            },
        };
        rows.push(row);
    }
    rows
}

/// Exact rational witness for an abstract sign function: strict where the
/// sign is nonzero, equality where it vanishes.
pub fn sample_point(psi: &SignFunction) -> Result<ResidueConfig> {
    let p = psi.num_poles();
    let rows = sign_rows(psi, None);
    match lp::feasible(p, &rows) {
        Some(lambda) => {
            let res = ResidueConfig::new(lambda).expect("sum forced to zero");
            debug_assert_eq!(res.sign_function(), *psi);
            Ok(res)
        }
        None => Err(Error::Infeasible),
    }
}

pub fn is_realizable(psi: &SignFunction) -> bool {
    lp::feasible(psi.num_poles(), &sign_rows(psi, None)).is_some()
}

/// Whether replacing the sign of `subset` by zero, all other signs strict,
/// is realizable: exactly the condition for the hyperplane to be a facet of
/// the chamber.
pub fn wall_is_facet(psi: &SignFunction, subset: &PoleSubset) -> bool {
    lp::feasible(psi.num_poles(), &sign_rows(psi, Some(subset))).is_some()
}

/// The facets of a chamber.
pub fn chamber_walls(chamber: &Chamber) -> Vec<PoleSubset> {
    canonical_subsets(chamber.psi.num_poles())
        .into_iter()
        .filter(|s| wall_is_facet(&chamber.psi, s))
        .collect()
}

/// A chamber is simplicial when it has exactly `p - 1` facets, the ambient
/// real dimension.
pub fn is_simplicial(chamber: &Chamber) -> bool {
    chamber_walls(chamber).len() == chamber.psi.num_poles() - 1
}

// ----------------------------------------------------------------------
// Chamber graph
// ----------------------------------------------------------------------

/// All chambers of the real arrangement for one pole count, with an edge
/// for every shared facet.
#[derive(Debug)]
pub struct ChamberGraph {
    pub p: usize,
    pub chambers: Vec<Chamber>,
    /// `(smaller index, larger index, wall subset)` per shared facet.
    pub edges: Vec<(usize, usize, PoleSubset)>,
    /// Adjacency: for each chamber, `(neighbor, wall)` sorted by wall.
    pub adj: Vec<Vec<(usize, PoleSubset)>>,
}

impl ChamberGraph {
    pub fn find(&self, psi: &SignFunction) -> Option<usize> {
        self.chambers.binary_search_by(|c| c.psi.cmp(psi)).ok()
    }

    /// The walls of the arrangement as subset/side-chamber pairs, one per
    /// shared facet.
    pub fn walls(&self) -> Vec<Wall> {
        self.edges
            .iter()
            .map(|&(a, b, subset)| Wall {
                subset,
                sides: (self.chambers[a].psi.clone(), self.chambers[b].psi.clone()),
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.chambers.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.chambers.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &(j, _) in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.chambers.len()
    }
}

static GRAPH_CACHE: OnceLock<Mutex<HashMap<usize, Arc<ChamberGraph>>>> = OnceLock::new();

/// The chamber graph for `p` poles, built once and cached. Enumeration
/// walks outward from the standard chamber, crossing one facet at a time.
pub fn chamber_graph(p: usize) -> Result<Arc<ChamberGraph>> {
    if !(2..=CHAMBER_GRAPH_MAX_POLES).contains(&p) {
        return Err(Error::ScaleLimit(format!(
            "chamber graph supported for 2 <= p <= {CHAMBER_GRAPH_MAX_POLES}, got {p}"
        )));
    }
    let cache = GRAPH_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&p) {
        return Ok(Arc::clone(g));
    }
    let graph = Arc::new(build_chamber_graph(p));
    cache.lock().unwrap().insert(p, Arc::clone(&graph));
    Ok(graph)
}

fn build_chamber_graph(p: usize) -> ChamberGraph {
    let subsets = canonical_subsets(p);
    let start = SignFunction::standard(p);
    let mut discovered: Vec<SignFunction> = vec![start.clone()];
    let mut index: HashMap<SignFunction, usize> = HashMap::new();
    index.insert(start, 0);
    let mut raw_edges: Vec<(usize, usize, PoleSubset)> = Vec::new();
    let mut head = 0;
    while head < discovered.len() {
        let psi = discovered[head].clone();
        for s in &subsets {
            if wall_is_facet(&psi, s) {
                let flipped = psi.with_sign(s, psi.sign(s).negate());
                let j = *index.entry(flipped.clone()).or_insert_with(|| {
                    discovered.push(flipped);
                    discovered.len() - 1
                });
                if head < j {
                    raw_edges.push((head, j, *s));
                }
            }
        }
        head += 1;
    }
    // canonical ordering by sign vector
    let mut order: Vec<usize> = (0..discovered.len()).collect();
    order.sort_by(|&a, &b| discovered[a].cmp(&discovered[b]));
    let mut rank = vec![0usize; discovered.len()];
    for (new_i, &old_i) in order.iter().enumerate() {
        rank[old_i] = new_i;
    }
    let chambers: Vec<Chamber> = order
        .iter()
        .map(|&old_i| Chamber::from_psi(&discovered[old_i]).expect("discovered chamber"))
        .collect();
    let mut edges: Vec<(usize, usize, PoleSubset)> = raw_edges
        .into_iter()
        .map(|(a, b, s)| {
            let (x, y) = (rank[a].min(rank[b]), rank[a].max(rank[b]));
            (x, y, s)
        })
        .collect();
    edges.sort_by_key(|&(a, b, s)| (a, b, s.mask()));
    edges.dedup();
    let mut adj = vec![Vec::new(); chambers.len()];
    for &(a, b, s) in &edges {
        adj[a].push((b, s));
        adj[b].push((a, s));
    }
    for l in &mut adj {
        l.sort_by_key(|&(j, s)| (s.mask(), j));
    }
    ChamberGraph { p, chambers, edges, adj }
}

// ----------------------------------------------------------------------
// Deterministic sampling
// ----------------------------------------------------------------------

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn subset_sum(lambda: &[i64], mask: u32) -> i64 {
    lambda
        .iter()
        .enumerate()
        .filter(|(j, _)| mask & (1 << j) != 0)
        .map(|(_, &x)| x)
        .sum()
}

fn integer_config(lambda: &[i64]) -> ResidueConfig {
    ResidueConfig::from_integers(lambda).expect("balanced")
}

/// Distinct chambers sampled deterministically: the standard chamber first,
/// then random integer configurations avoiding every hyperplane. Returns
/// fewer than `want` if the arrangement has fewer chambers in reach.
pub fn sample_chambers(p: usize, want: usize, rng: &mut ChaCha8Rng) -> Vec<Chamber> {
    let mut out: Vec<Chamber> = Vec::new();
    let mut seen: Vec<SignFunction> = Vec::new();
    let standard = SignFunction::standard(p);
    let witness: Vec<i64> = std::iter::once(p as i64 - 1).chain((1..p).map(|_| -1)).collect();
    seen.push(standard.clone());
    out.push(Chamber { psi: standard, witness: integer_config(&witness) });
    let full = (1u32 << p) - 1;
    let mut attempts = 0;
    while out.len() < want && attempts < 400 * want {
        attempts += 1;
        let mut lambda: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-50..=50i64)).collect();
        let tail: i64 = lambda.iter().sum();
        lambda.push(-tail);
        if (1..full).any(|m| subset_sum(&lambda, m) == 0) {
            continue;
        }
        let config = integer_config(&lambda);
        let psi = config.sign_function();
        if !seen.contains(&psi) {
            seen.push(psi.clone());
            out.push(Chamber { psi, witness: config });
        }
    }
    out
}

/// A sampled point in the relative interior of one hyperplane, with the two
/// chambers on either side.
#[derive(Debug, Clone)]
pub struct WallSample {
    pub subset: PoleSubset,
    pub wall_psi: SignFunction,
    pub wall_point: ResidueConfig,
    /// Chamber where the subset's partial sum is negative.
    pub minus: Chamber,
    /// Chamber where it is positive.
    pub plus: Chamber,
}

/// Samples a point on the hyperplane of `subset` lying on no other
/// hyperplane, and perturbs to both sides.
pub fn sample_wall(p: usize, subset: &PoleSubset, rng: &mut ChaCha8Rng) -> Result<WallSample> {
    if p == 2 {
        // the only hyperplane is the origin
        let minus = integer_config(&[-1, 1]);
        let plus = integer_config(&[1, -1]);
        let zero = integer_config(&[0, 0]);
        return Ok(WallSample {
            subset: *subset,
            wall_psi: zero.sign_function(),
            wall_point: zero,
            minus: Chamber { psi: minus.sign_function(), witness: minus },
            plus: Chamber { psi: plus.sign_function(), witness: plus },
        });
    }
    let full = (1u32 << p) - 1;
    let mask_i = subset.mask();
    let mask_ic = full & !mask_i;
    let i0 = mask_i.trailing_zeros() as usize;
    let j0 = p - 1; // canonical subsets never contain the last label
    for _ in 0..4000 {
        let mut lambda = vec![0i64; p];
        for (j, l) in lambda.iter_mut().enumerate() {
            if j != i0 && j != j0 {
                *l = rng.gen_range(-50..=50i64);
            }
        }
        let in_i: i64 = (0..p).filter(|&j| j != i0 && mask_i & (1 << j) != 0).map(|j| lambda[j]).sum();
        lambda[i0] = -in_i;
        let rest: i64 = (0..p).filter(|&j| j != j0).map(|j| lambda[j]).sum();
        lambda[j0] = -rest;
        let ok = (1..full).all(|m| {
            let s = subset_sum(&lambda, m);
            if m == mask_i || m == mask_ic {
                s == 0
            } else {
                s != 0
            }
        });
        if !ok {
            continue;
        }
        let wall_point = integer_config(&lambda);
        let wall_psi = wall_point.sign_function();
        // perturb: add (e_{i0} - e_{j0}) / 2^k, scaled to integers
        for k in 1..=40u32 {
            let scale = 1i64 << k.min(40);
            let mut plus_l: Vec<i64> = lambda.iter().map(|&x| x * scale).collect();
            plus_l[i0] += 1;
            plus_l[j0] -= 1;
            let mut minus_l: Vec<i64> = lambda.iter().map(|&x| x * scale).collect();
            minus_l[i0] -= 1;
            minus_l[j0] += 1;
            let plus_cfg = integer_config(&plus_l);
            let minus_cfg = integer_config(&minus_l);
            let plus_psi = plus_cfg.sign_function();
            let minus_psi = minus_cfg.sign_function();
            let expect_plus = wall_psi.with_sign(subset, Sign::Pos);
            let expect_minus = wall_psi.with_sign(subset, Sign::Neg);
            if plus_psi == expect_plus && minus_psi == expect_minus {
                return Ok(WallSample {
                    subset: *subset,
                    wall_psi,
                    wall_point,
                    minus: Chamber { psi: minus_psi, witness: minus_cfg },
                    plus: Chamber { psi: plus_psi, witness: plus_cfg },
                });
            }
        }
    }
    Err(Error::Infeasible)
}

/// Distinct sign functions vanishing exactly on one hyperplane, sampled
/// from different faces of that wall.
pub fn sample_wall_variants(
    p: usize,
    subset: &PoleSubset,
    want: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SignFunction>> {
    let mut out: Vec<SignFunction> = Vec::new();
    let mut attempts = 0;
    while out.len() < want && attempts < 300 * want {
        attempts += 1;
        let sample = sample_wall(p, subset, rng)?;
        if !out.contains(&sample.wall_psi) {
            out.push(sample.wall_psi);
        }
        if p == 2 {
            break; // the origin is the unique wall point
        }
    }
    if out.is_empty() {
        return Err(Error::Infeasible);
    }
    Ok(out)
}

/// Chamber adjacent to both hyperplanes of a secant pair, sampled from a
/// generic point on the intersection of the two walls and perturbed so both
/// partial sums turn negative. For secant pairs no further hyperplane
/// contains that intersection, so such points exist.
pub fn sample_secant_chamber(
    p: usize,
    i: &PoleSubset,
    j: &PoleSubset,
    rng: &mut ChaCha8Rng,
) -> Result<Chamber> {
    let full = (1u32 << p) - 1;
    let (mi, mj) = (i.mask(), j.mask());
    let zero_masks = [mi, full & !mi, mj, full & !mj];
    let i_only = mi & !mj;
    let j_only = mj & !mi;
    let outside = full & !(mi | mj);
    if i_only == 0 || j_only == 0 || outside == 0 || mi & mj == 0 {
        return Err(Error::NotApplicable("pair is not secant".into()));
    }
    let d1 = i_only.trailing_zeros() as usize;
    let d2 = j_only.trailing_zeros() as usize;
    let d0 = outside.trailing_zeros() as usize;
    for _ in 0..4000 {
        let mut lambda = vec![0i64; p];
        for (x, l) in lambda.iter_mut().enumerate() {
            if x != d1 && x != d2 && x != d0 {
                *l = rng.gen_range(-50..=50i64);
            }
        }
        let in_i: i64 = (0..p).filter(|&x| x != d1 && mi & (1 << x) != 0).map(|x| lambda[x]).sum();
        lambda[d1] = -in_i;
        let in_j: i64 = (0..p).filter(|&x| x != d2 && mj & (1 << x) != 0).map(|x| lambda[x]).sum();
        lambda[d2] = -in_j;
        let rest: i64 = (0..p).filter(|&x| x != d0).map(|x| lambda[x]).sum();
        lambda[d0] = -rest;
        let ok = (1..full).all(|m| {
            let s = subset_sum(&lambda, m);
            if zero_masks.contains(&m) {
                s == 0
            } else {
                s != 0
            }
        });
        if !ok {
            continue;
        }
        // push both partial sums negative: v = -e_d1 - e_d2 + 2 e_d0
        for k in 1..=40u32 {
            let scale = 1i64 << k;
            let cand: Vec<i64> = (0..p)
                .map(|x| {
                    lambda[x] * scale
                        + if x == d1 || x == d2 {
                            -1
                        } else if x == d0 {
                            2
                        } else {
                            0
                        }
                })
                .collect();
            let cfg = integer_config(&cand);
            let psi = cfg.sign_function();
            if psi.is_nowhere_zero()
                && psi.sign(i) == Sign::Neg
                && psi.sign(j) == Sign::Neg
                && canonical_subsets(p).iter().all(|s| {
                    let m = s.mask();
                    zero_masks.contains(&m)
                        || (subset_sum(&lambda, m) > 0) == (psi.sign(s) == Sign::Pos)
                })
            {
                debug_assert!(wall_is_facet(&psi, i) && wall_is_facet(&psi, j));
                return Ok(Chamber { psi, witness: cfg });
            }
        }
    }
    Err(Error::Infeasible)
}

/// Chamber for a parallel pair, normalized so `i_mask` and `j_mask` are
/// disjoint with nonempty remainder `K`: residues negative on both subsets,
/// positive on `K`, partial sums over the subsets equal to `-1` each. The
/// two hyperplanes are facets exactly when the corresponding subset is a
/// singleton or admits the mixed signs required by the wall; the facet
/// check is left to the caller.
pub fn sample_parallel_pattern_chamber(
    p: usize,
    i_mask: u32,
    j_mask: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Chamber> {
    let full = (1u32 << p) - 1;
    if i_mask & j_mask != 0 || i_mask | j_mask == full {
        return Err(Error::NotApplicable("normalized parallel pair required".into()));
    }
    let k_mask = full & !(i_mask | j_mask);
    for _ in 0..4000 {
        // per-block draws, rescaled so the subsets sum to -A each and the
        // remainder to +2A with A = |si|·|sj|·sk
        let mut parts = vec![0i64; p];
        for (x, part) in parts.iter_mut().enumerate() {
            let d = rng.gen_range(1..=20i64);
            *part = if 1u32 << x & k_mask != 0 { d } else { -d };
        }
        let si: i64 = (0..p).filter(|&x| i_mask & (1 << x) != 0).map(|x| parts[x]).sum();
        let sj: i64 = (0..p).filter(|&x| j_mask & (1 << x) != 0).map(|x| parts[x]).sum();
        let sk: i64 = (0..p).filter(|&x| k_mask & (1 << x) != 0).map(|x| parts[x]).sum();
        let lambda: Vec<i64> = (0..p)
            .map(|x| {
                let bit = 1u32 << x;
                if bit & i_mask != 0 {
                    parts[x] * sj.abs() * sk
                } else if bit & j_mask != 0 {
                    parts[x] * si.abs() * sk
                } else {
                    parts[x] * 2 * si.abs() * sj.abs()
                }
            })
            .collect();
        debug_assert_eq!(lambda.iter().sum::<i64>(), 0);
        if (1..full).any(|m| subset_sum(&lambda, m) == 0) {
            continue;
        }
        let cfg = integer_config(&lambda);
        let psi = cfg.sign_function();
        return Ok(Chamber { psi, witness: cfg });
    }
    Err(Error::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratum::canonical_subsets;

    #[test]
    fn sample_point_known_chamber() {
        // psi of the chamber containing (1, -1/4, -3/4)
        let psi = ResidueConfig::parse("1,-1/4,-3/4").unwrap().sign_function();
        let point = sample_point(&psi).unwrap();
        assert_eq!(point.sign_function(), psi);
    }

    #[test]
    fn sample_point_on_wall_spec() {
        // p=2, psi(1)=0: only the origin
        let zero = SignFunction::new(2, vec![Sign::Zero]).unwrap();
        let point = sample_point(&zero).unwrap();
        assert!(point.residues().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn infeasible_sign_function() {
        // psi(1)=+, psi(2)=+, psi({1,2})=-
        let psi = SignFunction::new(3, vec![Sign::Pos, Sign::Pos, Sign::Neg]).unwrap();
        assert_eq!(sample_point(&psi), Err(Error::Infeasible));
        assert!(!is_realizable(&psi));
    }

    /// The chamber used to probe simpliciality at p = 4. Restricted to the
    /// residual space (residues summing to zero) it has exactly three
    /// facets: the hyperplanes of {2}, {1,3} and {2,3}. The hyperplanes of
    /// {3} and of the fourth pole touch its closure only in codimension
    /// two, so the chamber is a simplicial cone; cross-checked against a
    /// dense sampling oracle.
    #[test]
    fn probe_chamber_facets_at_four_poles() {
        let psi = ResidueConfig::from_integers(&[5, 1, -2, -4]).unwrap().sign_function();
        let chamber = Chamber::from_psi(&psi).unwrap();
        let walls = chamber_walls(&chamber);
        let shown: Vec<String> = walls.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["2", "1,3", "2,3"]);
        assert!(is_simplicial(&chamber));
    }

    #[test]
    fn three_pole_chambers_are_simplicial() {
        let g = chamber_graph(3).unwrap();
        assert_eq!(g.chambers.len(), 6);
        for c in &g.chambers {
            let walls = chamber_walls(c);
            assert_eq!(walls.len(), 2);
            assert!(is_simplicial(c));
        }
        // 6-cycle: every chamber has exactly two neighbors
        assert!(g.adj.iter().all(|l| l.len() == 2));
        assert!(g.is_connected());
    }

    #[test]
    fn two_pole_graph() {
        let g = chamber_graph(2).unwrap();
        assert_eq!(g.chambers.len(), 2);
        assert_eq!(g.edges.len(), 1);
        let walls = g.walls();
        assert_eq!(walls.len(), 1);
        // the two sides differ exactly on the wall's subset
        let w = &walls[0];
        assert_eq!(w.sides.0.sign(&w.subset), w.sides.1.sign(&w.subset).negate());
    }

    #[test]
    fn four_pole_graph_connected_with_antipodes() {
        let g = chamber_graph(4).unwrap();
        assert_eq!(g.chambers.len(), 32);
        assert!(g.is_connected());
        for c in &g.chambers {
            assert!(g.find(&c.psi.negated()).is_some());
        }
        // every chamber of the restricted arrangement at p = 4 is
        // simplicial; non-simplicial chambers first appear at p = 5
        assert!(g.chambers.iter().all(is_simplicial));
    }

    #[test]
    fn five_pole_graph_has_non_simplicial_chambers() {
        let g = chamber_graph(5).unwrap();
        assert_eq!(g.chambers.len(), 370);
        assert!(g.is_connected());
        let facet_counts: Vec<usize> =
            g.chambers.iter().map(|c| g.adj[g.find(&c.psi).unwrap()].len()).collect();
        assert_eq!(facet_counts.iter().filter(|&&n| n == 4).count(), 350);
        assert_eq!(facet_counts.iter().filter(|&&n| n == 6).count(), 20);
    }

    #[test]
    fn graph_scale_limit() {
        assert!(matches!(chamber_graph(6), Err(Error::ScaleLimit(_))));
    }

    #[test]
    fn wall_sampling_brackets_the_wall() {
        let mut rng = rng_from_seed(7);
        for p in [3usize, 4, 5] {
            for s in canonical_subsets(p) {
                let w = sample_wall(p, &s, &mut rng).unwrap();
                assert_eq!(w.wall_psi.zero_set(), vec![s]);
                assert_eq!(w.minus.psi.sign(&s), Sign::Neg);
                assert_eq!(w.plus.psi.sign(&s), Sign::Pos);
                assert_eq!(w.minus.witness.sign_function(), w.minus.psi);
                assert_eq!(w.plus.witness.sign_function(), w.plus.psi);
            }
        }
    }

    #[test]
    fn chamber_sampling_distinct() {
        let mut rng = rng_from_seed(11);
        let chambers = sample_chambers(4, 5, &mut rng);
        assert!(chambers.len() >= 3);
        for c in &chambers {
            assert!(c.psi.is_nowhere_zero());
            assert_eq!(c.witness.sign_function(), c.psi);
        }
    }

    #[test]
    fn secant_chamber_has_both_facets() {
        let mut rng = rng_from_seed(3);
        let i = PoleSubset::new(4, &[1, 2]).unwrap();
        let j = PoleSubset::new(4, &[1, 3]).unwrap();
        let c = sample_secant_chamber(4, &i, &j, &mut rng).unwrap();
        assert!(wall_is_facet(&c.psi, &i));
        assert!(wall_is_facet(&c.psi, &j));
        assert_eq!(c.psi.sign(&i), Sign::Neg);
        assert_eq!(c.psi.sign(&j), Sign::Neg);
    }

    #[test]
    fn parallel_pattern_chamber() {
        let mut rng = rng_from_seed(5);
        // I = {2}, J = {3}, K = {1} in p = 3
        let c = sample_parallel_pattern_chamber(3, 0b010, 0b100, &mut rng).unwrap();
        assert_eq!(c.psi.sign_of_mask(0b010), Sign::Neg);
        assert_eq!(c.psi.sign_of_mask(0b100), Sign::Neg);
        assert_eq!(c.psi.sign_of_mask(0b001), Sign::Pos);
        assert!(wall_is_facet(&c.psi, &PoleSubset::from_mask(3, 0b010).unwrap()));
        assert!(wall_is_facet(&c.psi, &PoleSubset::from_mask(3, 0b100).unwrap()));
    }

    #[test]
    fn witnesses_match_signs_on_all_p3_chambers() {
        let g = chamber_graph(3).unwrap();
        for c in &g.chambers {
            assert_eq!(c.witness.sign_function(), c.psi);
        }
    }
}
