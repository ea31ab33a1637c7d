//! Fiber enumeration and counting.
//!
//! A fiber over a sign function is the set of decorated trees compatible
//! with it and free of zero-sum edges, enumerated exhaustively: labeled
//! trees come from Prüfer sequences, edges are oriented by the sign
//! function, and the rotation system at each vertex runs over all cyclic
//! orders of its edge ends and all half-edge gap fillings allowed by the
//! parity rule. Fibers at desk scale stay tiny, so correctness is preferred
//! over cleverness throughout.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::stratum::{PoleSubset, Sign, SignFunction, StratumSignature};
use crate::tree::{AttachPoint, Corner, DecoratedTree, DetachedSide};

/// A deterministically ordered fiber: the compatible, non-degenerate trees
/// for one `(signature, sign function)` pair, sorted by canonical key.
#[derive(Debug, Clone)]
pub struct FiberSet {
    pub sig: StratumSignature,
    pub psi: SignFunction,
    trees: Vec<DecoratedTree>,
    keys: Vec<String>,
}

impl FiberSet {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[DecoratedTree] {
        &self.trees
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn tree(&self, i: usize) -> &DecoratedTree {
        &self.trees[i]
    }

    /// Index of a tree by canonical key.
    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.keys.binary_search_by(|k| k.as_str().cmp(key)).ok()
    }

    /// JSON rendering with stratum, sign function and canonical keys.
    pub fn to_json(&self) -> serde_json::Value {
        let psi_map: serde_json::Map<String, serde_json::Value> =
            crate::stratum::canonical_subsets(self.psi.num_poles())
                .iter()
                .map(|s| (s.to_string(), self.psi.sign(s).as_str().into()))
                .collect();
        serde_json::json!({
            "stratum": {
                "a": self.sig.zero_order(),
                "b": self.sig.pole_orders(),
            },
            "psi": psi_map,
            "trees": self.keys,
        })
    }
}

/// Like [`enumerate_fiber`], but first demands a rational witness for the
/// sign function; abstract sign functions with no witness are rejected.
pub fn enumerate_fiber_checked(sig: &StratumSignature, psi: &SignFunction) -> Result<FiberSet> {
    if crate::arrangement::sample_point(psi).is_err() {
        return Err(Error::UnrealizableSign);
    }
    enumerate_fiber(sig, psi)
}

/// Enumerates the fiber of a signature over a sign function. Sign functions
/// with zeros are allowed: a tree is excluded as soon as one of its edges
/// cuts a vanishing partial sum, which realizes the smooth members only.
/// Realizability of the sign function is the caller's responsibility; see
/// [`enumerate_fiber_checked`].
pub fn enumerate_fiber(sig: &StratumSignature, psi: &SignFunction) -> Result<FiberSet> {
    let p = sig.num_poles();
    if psi.num_poles() != p {
        return Err(Error::BadSubset("sign function has wrong pole count".into()));
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut trees = Vec::new();
    for_each_labeled_tree(p, &mut |edges| {
        enumerate_embeddings(sig, psi, edges, &mut |t| {
            let key = t.canonical_key();
            if seen.insert(key) {
                trees.push(t);
            }
        });
    });
    let mut pairs: Vec<(String, DecoratedTree)> =
        trees.into_iter().map(|t| (t.canonical_key(), t)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (keys, trees): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(FiberSet { sig: sig.clone(), psi: psi.clone(), trees, keys })
}

/// Calls `f` with the undirected edge list of every labeled tree on
/// `{1..p}`, by decoding all Prüfer sequences.
fn for_each_labeled_tree(p: usize, f: &mut dyn FnMut(&[(u32, u32)])) {
    if p == 2 {
        f(&[(1, 2)]);
        return;
    }
    let mut seq = vec![1u32; p - 2];
    loop {
        let edges = prufer_decode(p, &seq);
        f(&edges);
        // next sequence
        let mut i = p - 2;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if seq[i] < p as u32 {
                seq[i] += 1;
                for s in &mut seq[i + 1..] {
                    *s = 1;
                }
                break;
            }
        }
    }
}

fn prufer_decode(p: usize, seq: &[u32]) -> Vec<(u32, u32)> {
    let mut degree = vec![1u32; p + 1];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::with_capacity(p - 1);
    let mut used = vec![false; p + 1];
    for &s in seq {
        let leaf = (1..=p as u32).find(|&l| degree[l as usize] == 1 && !used[l as usize]).unwrap();
        edges.push((leaf, s));
        used[leaf as usize] = true;
        degree[s as usize] -= 1;
    }
    let mut last: Vec<u32> =
        (1..=p as u32).filter(|&l| degree[l as usize] == 1 && !used[l as usize]).collect();
    debug_assert_eq!(last.len(), 2);
    let b = last.pop().unwrap();
    let a = last.pop().unwrap();
    edges.push((a, b));
    edges
}

/// Orients the edges of one labeled tree by the sign function and emits all
/// rotation systems allowed by the parity rule.
fn enumerate_embeddings(
    sig: &StratumSignature,
    psi: &SignFunction,
    undirected: &[(u32, u32)],
    emit: &mut dyn FnMut(DecoratedTree),
) {
    let p = sig.num_poles();
    // orient: source side must have strictly negative sign
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(undirected.len());
    {
        // adjacency for side computation
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); p + 1];
        for (e, &(u, v)) in undirected.iter().enumerate() {
            adj[u as usize].push((e, v));
            adj[v as usize].push((e, u));
        }
        for (e, &(u, v)) in undirected.iter().enumerate() {
            // mask of the u-side of edge e
            let mut mask = 0u32;
            let mut stack = vec![u];
            while let Some(x) = stack.pop() {
                if mask & (1 << (x - 1)) != 0 {
                    continue;
                }
                mask |= 1 << (x - 1);
                for &(e2, w) in &adj[x as usize] {
                    if e2 != e && mask & (1 << (w - 1)) == 0 {
                        stack.push(w);
                    }
                }
            }
            match psi.sign_of_mask(mask) {
                Sign::Zero => return, // degenerate partition: no smooth member
                Sign::Neg => edges.push((u, v)),
                Sign::Pos => edges.push((v, u)),
            }
        }
    }

    // per-vertex choices: cyclic orders of ends x gap fillings
    let mut per_vertex: Vec<Vec<Vec<(usize, u32)>>> = Vec::with_capacity(p);
    for label in 1..=p as u32 {
        let incident: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(s, d))| s == label || d == label)
            .map(|(e, _)| e)
            .collect();
        let hes = 2 * sig.pole_order(label) - 2;
        let mut options = Vec::new();
        let k = incident.len();
        debug_assert!(k >= 1);
        // cyclic orders: first end fixed, permute the rest
        let mut rest: Vec<usize> = incident[1..].to_vec();
        permute(&mut rest, 0, &mut |perm| {
            let order: Vec<usize> = std::iter::once(incident[0]).chain(perm.iter().copied()).collect();
            // required gap parities
            let dir = |e: usize| edges[e].0 == label;
            let mut parities = Vec::with_capacity(k);
            let mut need: u32 = 0;
            for i in 0..k {
                let odd = dir(order[i]) != dir(order[(i + 1) % k]);
                parities.push(odd as u32);
                need += odd as u32;
            }
            if need > hes || !(hes - need).is_multiple_of(2) {
                return;
            }
            let pairs = (hes - need) / 2;
            // distribute `pairs` packets of two half-edges over k gaps
            compositions(pairs, k, &mut |extra| {
                let gaps: Vec<(usize, u32)> = (0..k)
                    .map(|i| (order[i], parities[i] + 2 * extra[i]))
                    .collect();
                options.push(gaps);
            });
        });
        if options.is_empty() {
            return;
        }
        per_vertex.push(options);
    }

    // cartesian product of per-vertex options
    let mut choice = vec![0usize; p];
    loop {
        let rotations: Vec<(u32, Vec<(u32, u32)>)> = (0..p)
            .map(|v| {
                let label = v as u32 + 1;
                let rot = per_vertex[v][choice[v]]
                    .iter()
                    .map(|&(e, gap)| {
                        let (s, d) = edges[e];
                        let neighbor = if s == label { d } else { s };
                        (neighbor, gap)
                    })
                    .collect();
                (label, rot)
            })
            .collect();
        let t = DecoratedTree::from_parts(edges.clone(), &rotations).expect("assembled tree");
        emit(t);
        // advance mixed-radix counter
        let mut v = 0;
        loop {
            if v == p {
                return;
            }
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

fn compositions(total: u32, parts: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(total: u32, idx: usize, acc: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if idx + 1 == acc.len() {
            acc[idx] = total;
            f(acc);
            return;
        }
        for x in 0..=total {
            acc[idx] = x;
            rec(total - x, idx + 1, acc, f);
        }
    }
    let mut acc = vec![0u32; parts];
    rec(total, 0, &mut acc, f);
}

// ----------------------------------------------------------------------
// Closed-form counts
// ----------------------------------------------------------------------

/// Product `hi * (hi-1) * ... * (hi-len+1)` of `len` descending factors;
/// the quotient `hi! / (hi-len)!`. Zero whenever a factorial of a negative
/// integer would appear in that quotient.
pub fn falling(hi: i64, len: i64) -> u128 {
    if len < 0 || hi < len {
        return 0;
    }
    ((hi - len + 1)..=hi).map(|x| x as u128).product()
}

/// Degree of the isoresidual cover over the complement of the resonance
/// arrangement: `a! / (a + 2 - p)!`.
pub fn generic_degree(sig: &StratumSignature) -> u128 {
    let a = sig.zero_order() as i64;
    let p = sig.num_poles() as i64;
    falling(a, p - 2)
}

/// Count of trees whose subtree split matches one partition, with the class
/// structure of simultaneous reattachment positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeMarkedCount {
    pub total: u128,
    pub class_count: u128,
    pub class_size: u128,
}

/// Number of trees of a generic fiber carrying an edge that cuts out the
/// subset `I`, together with the class structure: classes collect trees
/// whose two subtree shapes coincide and differ only in the reattachment
/// corners of the connecting edge.
pub fn edge_marked_count(sig: &StratumSignature, subset: &PoleSubset) -> EdgeMarkedCount {
    let a = sig.zero_order() as i64;
    let p = sig.num_poles() as i64;
    let (c, d) = sig.resonance_degree(subset);
    let (c, d) = (c as i64, d as i64);
    let total = falling(d, c - 1) * falling(a - d, p - c - 1);
    if p == 2 {
        return EdgeMarkedCount { total: 1, class_count: 1, class_size: 1 };
    }
    let singleton_side = c == 1 || c == p - 1;
    if singleton_side {
        // normalize so the singleton is the complement
        let d_big = if c == 1 { a - d } else { d };
        EdgeMarkedCount {
            total,
            class_count: falling(d_big - 1, p - 3),
            class_size: d_big as u128,
        }
    } else {
        EdgeMarkedCount {
            total,
            class_count: falling(d - 1, c - 2) * falling(a - d - 1, p - c - 2),
            class_size: (d * (a - d)) as u128,
        }
    }
}

/// Number of elements of a fiber lying on exactly the one resonance
/// hyperplane cut out by `I`: the generic degree minus the trees that
/// degenerate there.
pub fn single_resonance_count(sig: &StratumSignature, subset: &PoleSubset) -> u128 {
    generic_degree(sig) - edge_marked_count(sig, subset).total
}

/// Fiber count over the intersection of the `p - 2` hyperplanes where the
/// residues of poles `2..p-1` all vanish: `(p-2)! * prod (b_i - 1)`.
pub fn deep_resonance_count(sig: &StratumSignature) -> u128 {
    let p = sig.num_poles();
    let fact: u128 = (1..=(p as u128 - 2)).product::<u128>().max(1);
    let prod: u128 = (2..p).map(|i| (sig.pole_orders()[i - 1] - 1) as u128).product();
    fact * prod
}

/// The sign function of the deep-resonance locus `lambda_i = 0` for
/// `i = 2..p-1`, realized by the residues `(1, 0, ..., 0, -1)`.
pub fn deep_resonance_psi(p: usize) -> SignFunction {
    let signs = crate::stratum::canonical_subsets(p)
        .iter()
        .map(|s| match (s.contains(1), s.contains(p as u32)) {
            (true, false) => Sign::Pos,
            (false, true) => Sign::Neg,
            _ => Sign::Zero,
        })
        .collect();
    SignFunction::new(p, signs).expect("sized")
}

// ----------------------------------------------------------------------
// Counting surgeries
// ----------------------------------------------------------------------

/// Attaches a new simple pole labeled `p+1` by an edge pointing into the
/// tree at the given corner. The result lives in the extended signature
/// `(a+1; b..., 1)`.
pub fn add_simple_pole(t: &DecoratedTree, corner: &Corner) -> Result<DecoratedTree> {
    if !corner.legal_incoming {
        return Err(Error::IllegalCorner);
    }
    let new_label = *t.labels().last().expect("nonempty") + 1;
    let leaf = DetachedSide {
        tree: DecoratedTree::single_vertex(new_label, 0),
        attach: AttachPoint::Bare { vertex: new_label },
    };
    let vpos = t.labels().binary_search(&corner.vertex).expect("vertex");
    debug_assert!(t.corner_legal_incoming(vpos, corner.end_index, corner.offset));
    let host = DetachedSide {
        tree: t.clone(),
        attach: AttachPoint::Corner {
            vertex: corner.vertex,
            end_index: corner.end_index,
            offset: corner.offset,
        },
    };
    Ok(DecoratedTree::attach(&leaf, &host))
}

/// Removes the leaf with the largest label (a simple pole added by
/// [`add_simple_pole`]) and returns the reduced tree.
pub fn remove_simple_pole(t: &DecoratedTree) -> Result<DecoratedTree> {
    let label = *t.labels().last().expect("nonempty");
    let ends = t.ends_of(label);
    if ends.len() != 1 || t.half_edges_at(label) != 0 {
        return Err(Error::NotApplicable(format!("vertex {label} is not a bare leaf")));
    }
    let edge = ends[0].edge;
    let (src, dst) = t.detach(edge);
    if src.tree.num_vertices() == 1 {
        Ok(dst.tree)
    } else {
        Ok(src.tree)
    }
}

/// Weight transfer: moves one unit of pole order from vertex `i` to the
/// root vertex 1 without changing the fiber count. Defined on trees of the
/// standard chamber, where every edge points toward the root. Removes the
/// half-edge just after the rootward end at `i`, the run of subtrees
/// following it, and the closing half-edge; reinserts that portion at the
/// root directly after the end of the branch containing `i`.
pub fn weight_transfer(t: &DecoratedTree, i: u32, sig: &StratumSignature) -> Result<DecoratedTree> {
    let p = sig.num_poles() as u32;
    if i < 2 || i > p {
        return Err(Error::NotApplicable(format!("vertex {i} out of range")));
    }
    if sig.pole_order(i) < 2 {
        return Err(Error::NotApplicable(format!("pole {i} has order < 2")));
    }
    for e in 0..t.edges().len() {
        if t.edge_side_mask(e) & 1 != 0 {
            return Err(Error::NotApplicable("tree is not rooted toward vertex 1".into()));
        }
    }

    let mut tree = t.clone();
    // locate the rootward (outgoing) end at vertex i
    let vpos_i = tree.labels().binary_search(&i).unwrap();
    let out_idx = tree
        .ends_of(i)
        .iter()
        .position(|end| tree.end_is_outgoing(i, end))
        .expect("rooted tree has an outgoing end at every non-root vertex");

    // carve out [h1, P, h2] following the outgoing end: h1 is the half-edge
    // right after it, P the run of ends with no half-edges in between, h2
    // the half-edge closing the run
    let block_ends: Vec<usize> = {
        let ends = tree.ends_of(i);
        let k = ends.len();
        let g0 = ends[out_idx].gap_after;
        debug_assert!(g0 >= 1, "parity guarantees a half-edge after the outgoing end");
        let mut run = Vec::new();
        if g0 == 1 {
            let mut j = (out_idx + 1) % k;
            loop {
                run.push(ends[j].edge);
                if ends[j].gap_after >= 1 {
                    break;
                }
                j = (j + 1) % k;
                debug_assert_ne!(j, out_idx, "run closes on a half-edge");
            }
        }
        run
    };

    // edge at the root leading to the branch that contains i
    let root_end_edge = {
        let mask_i = 1u32 << (i - 1);
        tree.ends_of(1)
            .iter()
            .map(|end| end.edge)
            .find(|&e| tree.edge_side_mask(e) & mask_i != 0)
            .expect("branch containing i")
    };

    // rebuild vertex i: drop h1, the run, and h2
    {
        let run_len = block_ends.len();
        let vend = tree.ends_mut(vpos_i);
        let k = vend.len();
        if run_len == 0 {
            vend[out_idx].gap_after -= 2;
        } else {
            let last_gap = vend[(out_idx + run_len) % k].gap_after;
            vend[out_idx].gap_after = last_gap - 1;
            let mut remove: Vec<usize> = (1..=run_len).map(|d| (out_idx + d) % k).collect();
            remove.sort_unstable_by(|a, b| b.cmp(a));
            for idx in remove {
                vend.remove(idx);
            }
        }
    }

    // reinsert at the root directly after the branch end: the run with zero
    // gaps, then h1 and h2 ahead of the original gap
    {
        let root_pos = tree.labels().binary_search(&1).unwrap();
        let idx = tree
            .ends_of(1)
            .iter()
            .position(|end| end.edge == root_end_edge)
            .expect("root end");
        let vend = tree.ends_mut(root_pos);
        let old_gap = vend[idx].gap_after;
        if block_ends.is_empty() {
            vend[idx].gap_after = old_gap + 2;
        } else {
            vend[idx].gap_after = 0;
            let last = block_ends.len() - 1;
            for (bi, &edge) in block_ends.iter().enumerate() {
                let gap = if bi == last { 2 + old_gap } else { 0 };
                vend.insert(idx + 1 + bi, crate::tree::End { edge, gap_after: gap });
            }
        }
    }

    // moved subtrees now hang off the root
    tree.retarget_edges(&block_ends, i, 1);
    let mut b = sig.pole_orders().to_vec();
    b[0] += 1;
    b[i as usize - 1] -= 1;
    let new_sig = StratumSignature::new(sig.zero_order(), b)?;
    tree.validate(&new_sig)?;
    Ok(tree)
}

/// Inverse of [`weight_transfer`]: moves the carried portion back from the
/// root to vertex `i`.
pub fn weight_transfer_back(
    t: &DecoratedTree,
    i: u32,
    sig: &StratumSignature,
) -> Result<DecoratedTree> {
    let p = sig.num_poles() as u32;
    if i < 2 || i > p {
        return Err(Error::NotApplicable(format!("vertex {i} out of range")));
    }
    let mut tree = t.clone();
    let root_end_idx = {
        let mask_i = 1u32 << (i - 1);
        tree.ends_of(1)
            .iter()
            .position(|end| tree.edge_side_mask(end.edge) & mask_i != 0)
            .ok_or_else(|| Error::NotApplicable("no branch contains i".into()))?
    };

    // read back the block: the maximal zero-gap run of ends after the
    // branch end, closed by a pair of half-edges
    let block_ends: Vec<usize> = {
        let ends = tree.ends_of(1);
        let k = ends.len();
        let mut run = Vec::new();
        let mut j = root_end_idx;
        while ends[j].gap_after == 0 {
            j = (j + 1) % k;
            if j == root_end_idx {
                return Err(Error::NotApplicable("root carries no half-edges".into()));
            }
            run.push(ends[j].edge);
        }
        if ends[j].gap_after < 2 {
            return Err(Error::NotApplicable("no half-edge pair closes the run".into()));
        }
        run
    };

    // rebuild root
    {
        let root_pos = tree.labels().binary_search(&1).unwrap();
        let vend = tree.ends_mut(root_pos);
        let k = vend.len();
        if block_ends.is_empty() {
            vend[root_end_idx].gap_after -= 2;
        } else {
            let last_gap = vend[(root_end_idx + block_ends.len()) % k].gap_after - 2;
            vend[root_end_idx].gap_after = last_gap;
            let mut remove: Vec<usize> =
                (1..=block_ends.len()).map(|d| (root_end_idx + d) % k).collect();
            remove.sort_unstable_by(|a, b| b.cmp(a));
            for idx in remove {
                vend.remove(idx);
            }
        }
    }

    // reinsert at vertex i right after its outgoing end
    {
        let vpos_i = tree.labels().binary_search(&i).unwrap();
        let out_idx = tree
            .ends_of(i)
            .iter()
            .position(|end| tree.end_is_outgoing(i, end))
            .ok_or_else(|| Error::NotApplicable("vertex i has no rootward end".into()))?;
        let vend = tree.ends_mut(vpos_i);
        let old_gap = vend[out_idx].gap_after;
        if block_ends.is_empty() {
            vend[out_idx].gap_after = old_gap + 2;
        } else {
            vend[out_idx].gap_after = 1;
            let last = block_ends.len() - 1;
            for (bi, &edge) in block_ends.iter().enumerate() {
                let gap = if bi == last { 1 + old_gap } else { 0 };
                vend.insert(out_idx + 1 + bi, crate::tree::End { edge, gap_after: gap });
            }
        }
    }

    tree.retarget_edges(&block_ends, 1, i);
    let mut b = sig.pole_orders().to_vec();
    b[0] -= 1;
    b[i as usize - 1] += 1;
    let new_sig = StratumSignature::new(sig.zero_order(), b)?;
    tree.validate(&new_sig)?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratum::ResidueConfig;

    fn sig(a: u32, b: &[u32]) -> StratumSignature {
        StratumSignature::new(a, b.to_vec()).unwrap()
    }

    fn std_psi(p: usize) -> SignFunction {
        SignFunction::standard(p)
    }

    #[test]
    fn generic_degrees() {
        assert_eq!(generic_degree(&sig(4, &[2, 2, 2])), 4);
        assert_eq!(generic_degree(&sig(6, &[2, 3, 3])), 6);
        assert_eq!(generic_degree(&sig(2, &[1, 1, 1, 1])), 2);
        assert_eq!(generic_degree(&sig(1, &[1, 1, 1])), 1);
    }

    #[test]
    fn enumerate_known_fiber() {
        let s = sig(4, &[2, 2, 2]);
        let psi = ResidueConfig::parse("1,-1/4,-3/4").unwrap().sign_function();
        let fiber = enumerate_fiber(&s, &psi).unwrap();
        assert_eq!(fiber.len(), 4);
        // two stars with both edges entering vertex 1, two chains
        assert!(fiber.keys().iter().any(|k| k == "1(<2(**)<3(**)**)"));
    }

    #[test]
    fn two_pole_fibers_are_single() {
        for (a, b) in [(2u32, vec![2u32, 2]), (5, vec![3, 4]), (1, vec![1, 2])] {
            let s = StratumSignature::new(a, b).unwrap();
            let fiber = enumerate_fiber(&s, &std_psi(2)).unwrap();
            assert_eq!(fiber.len(), 1);
        }
    }

    #[test]
    fn origin_fiber_is_empty() {
        let s = sig(4, &[2, 2, 2]);
        let zero = SignFunction::new(3, vec![Sign::Zero; 3]).unwrap();
        assert_eq!(enumerate_fiber(&s, &zero).unwrap().len(), 0);
    }

    #[test]
    fn wall_fiber_count_matches_formula() {
        // wall lambda_2 = 0 in H(4;-2,-2,-2): 4 - 3 = 1
        let s = sig(4, &[2, 2, 2]);
        let wall = ResidueConfig::from_integers(&[1, 0, -1]).unwrap().sign_function();
        let fiber = enumerate_fiber(&s, &wall).unwrap();
        assert_eq!(fiber.len(), 1);
        let i2 = PoleSubset::new(3, &[2]).unwrap();
        assert_eq!(single_resonance_count(&s, &i2), 1);
    }

    #[test]
    fn single_resonance_examples() {
        let s = sig(3, &[1, 1, 1, 1, 1]);
        let i = PoleSubset::new(5, &[1, 2]).unwrap();
        assert_eq!(generic_degree(&s), 6);
        assert_eq!(single_resonance_count(&s, &i), 4);
    }

    #[test]
    fn edge_marked_examples() {
        // (4,[2,2,2]), I={1,3}: singleton complement {2}; 3 trees in 1 class
        let s = sig(4, &[2, 2, 2]);
        let i13 = PoleSubset::new(3, &[1, 3]).unwrap();
        let m = edge_marked_count(&s, &i13);
        assert_eq!((m.total, m.class_count, m.class_size), (3, 1, 3));

        let s2 = sig(2, &[1, 1, 1, 1]);
        let i12 = PoleSubset::new(4, &[1, 2]).unwrap();
        let m2 = edge_marked_count(&s2, &i12);
        assert_eq!((m2.total, m2.class_count, m2.class_size), (1, 1, 1));

        let s3 = sig(3, &[2, 3]);
        let i1 = PoleSubset::new(2, &[1]).unwrap();
        assert_eq!(edge_marked_count(&s3, &i1).total, 1);
    }

    #[test]
    fn class_structure_is_consistent() {
        for (a, b) in [(4u32, vec![2u32, 2, 2]), (6, vec![2, 3, 3]), (5, vec![2, 2, 2, 1]), (3, vec![1, 1, 1, 1, 1])] {
            let s = StratumSignature::new(a, b).unwrap();
            for subset in crate::stratum::canonical_subsets(s.num_poles()) {
                let m = edge_marked_count(&s, &subset);
                assert_eq!(m.total, m.class_count * m.class_size, "{s} I={subset}");
            }
        }
    }

    #[test]
    fn falling_factorial_convention() {
        assert_eq!(falling(4, 2), 12);
        assert_eq!(falling(4, 0), 1);
        assert_eq!(falling(3, 5), 0); // negative factorial in the quotient
        assert_eq!(falling(-1, 2), 0);
    }

    #[test]
    fn deep_resonance_counts() {
        assert_eq!(deep_resonance_count(&sig(4, &[2, 2, 2])), 1);
        assert_eq!(deep_resonance_count(&sig(5, &[2, 3, 2])), 2);
        assert_eq!(deep_resonance_count(&sig(2, &[2, 2])), 1);
        // cross-check by enumeration over (1, 0, ..., 0, -1)
        for (a, b) in [
            (4u32, vec![2u32, 2, 2]),
            (5, vec![2, 3, 2]),
            (3, vec![1, 2, 2]),
            (6, vec![2, 2, 2, 2]),
            (7, vec![2, 3, 2, 2]),
            (6, vec![2, 4, 2]),
        ] {
            let s = StratumSignature::new(a, b).unwrap();
            let psi = deep_resonance_psi(s.num_poles());
            let n = enumerate_fiber(&s, &psi).unwrap().len() as u128;
            assert_eq!(n, deep_resonance_count(&s), "{s}");
        }
    }

    #[test]
    fn generic_count_matches_formula_on_samples() {
        for (a, b) in [
            (4u32, vec![2u32, 2, 2]),
            (6, vec![2, 3, 3]),
            (2, vec![1, 1, 1, 1]),
            (3, vec![1, 1, 1, 1, 1]),
            (5, vec![2, 2, 2, 1]),
            (6, vec![3, 3, 1, 1]),
        ] {
            let s = StratumSignature::new(a, b).unwrap();
            let fiber = enumerate_fiber(&s, &std_psi(s.num_poles())).unwrap();
            assert_eq!(fiber.len() as u128, generic_degree(&s), "{s}");
        }
    }

    /// The marked-tree count matches enumeration on chambers adjacent to
    /// the hyperplane. On non-adjacent chambers the count can differ: for
    /// I = {1} in H(4;-2,-2,-2) the standard chamber holds only 2 marked
    /// trees against the formula's 3, because that chamber never touches
    /// the wall away from the origin.
    #[test]
    fn edge_marked_total_matches_enumeration_on_adjacent_chambers() {
        let mut rng = crate::arrangement::rng_from_seed(23);
        for (a, b) in [(4u32, vec![2u32, 2, 2]), (5, vec![2, 2, 2, 1]), (2, vec![1, 1, 1, 1])] {
            let s = StratumSignature::new(a, b).unwrap();
            let p = s.num_poles();
            for subset in crate::stratum::canonical_subsets(p) {
                let wall = crate::arrangement::sample_wall(p, &subset, &mut rng).unwrap();
                for chamber in [&wall.minus, &wall.plus] {
                    let fiber = enumerate_fiber(&s, &chamber.psi).unwrap();
                    let marked = fiber
                        .trees()
                        .iter()
                        .filter(|t| t.edge_with_partition(&subset).is_some())
                        .count() as u128;
                    assert_eq!(marked, edge_marked_count(&s, &subset).total, "{s} I={subset}");
                }
            }
        }
    }

    #[test]
    fn edge_marked_count_depends_on_adjacency() {
        let s = sig(4, &[2, 2, 2]);
        let i1 = PoleSubset::new(3, &[1]).unwrap();
        let fiber = enumerate_fiber(&s, &std_psi(3)).unwrap();
        let marked = fiber
            .trees()
            .iter()
            .filter(|t| t.edge_with_partition(&i1).is_some())
            .count();
        // standard chamber is not adjacent to the wall of {1}
        assert_eq!(marked, 2);
        assert_eq!(edge_marked_count(&s, &i1).total, 3);
        assert!(!crate::arrangement::wall_is_facet(&std_psi(3), &i1));
    }

    #[test]
    fn add_simple_pole_factor() {
        let s = sig(4, &[2, 2, 2]);
        let psi = std_psi(3);
        let fiber = enumerate_fiber(&s, &psi).unwrap();
        let mut extended_keys = BTreeSet::new();
        for t in fiber.trees() {
            let legal: Vec<Corner> =
                t.corners().into_iter().filter(|c| c.legal_incoming).collect();
            assert_eq!(legal.len(), 5);
            for c in legal {
                let bigger = add_simple_pole(t, &c).unwrap();
                // removing the added leaf recovers t
                let back = remove_simple_pole(&bigger).unwrap();
                assert_eq!(back.canonical_key(), t.canonical_key());
                assert!(extended_keys.insert(bigger.canonical_key()));
            }
        }
        let s_ext = sig(5, &[2, 2, 2, 1]);
        let ext_fiber = enumerate_fiber(&s_ext, &std_psi(4)).unwrap();
        assert_eq!(ext_fiber.len(), 20);
        assert_eq!(extended_keys.len(), 20);
        for k in ext_fiber.keys() {
            assert!(extended_keys.contains(k));
        }
    }

    #[test]
    fn add_simple_pole_rejects_illegal_corner() {
        let s = sig(4, &[2, 2, 2]);
        let fiber = enumerate_fiber(&s, &std_psi(3)).unwrap();
        let t = fiber.tree(0);
        let illegal = t.corners().into_iter().find(|c| !c.legal_incoming).unwrap();
        assert_eq!(add_simple_pole(t, &illegal), Err(Error::IllegalCorner));
    }

    #[test]
    fn weight_transfer_is_a_bijection() {
        let s = sig(4, &[2, 2, 2]);
        let psi = std_psi(3);
        let fiber = enumerate_fiber(&s, &psi).unwrap();
        let mut images = BTreeSet::new();
        for t in fiber.trees() {
            let moved = weight_transfer(t, 2, &s).unwrap();
            let back = weight_transfer_back(&moved, 2, &sig(4, &[3, 1, 2])).unwrap();
            assert_eq!(back.canonical_key(), t.canonical_key());
            assert!(images.insert(moved.canonical_key()));
        }
        let target = enumerate_fiber(&sig(4, &[3, 1, 2]), &psi).unwrap();
        assert_eq!(images.len(), target.len());
        for k in target.keys() {
            assert!(images.contains(k));
        }
        // second transfer: (4,[3,1,2]) -> (4,[4,1,1])
        let t2 = sig(4, &[3, 1, 2]);
        let mut images2 = BTreeSet::new();
        for t in target.trees() {
            images2.insert(weight_transfer(t, 3, &t2).unwrap().canonical_key());
        }
        let final_fiber = enumerate_fiber(&sig(4, &[4, 1, 1]), &psi).unwrap();
        assert_eq!(final_fiber.len(), 4);
        assert_eq!(images2.len(), 4);
    }

    #[test]
    fn weight_transfer_requires_weight() {
        let s = sig(4, &[3, 1, 2]);
        let fiber = enumerate_fiber(&s, &std_psi(3)).unwrap();
        assert!(matches!(
            weight_transfer(fiber.tree(0), 2, &s),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn fiber_json_shape() {
        let s = sig(4, &[2, 2, 2]);
        let fiber = enumerate_fiber(&s, &std_psi(3)).unwrap();
        let v = fiber.to_json();
        assert_eq!(v["stratum"]["a"], 4);
        assert_eq!(v["trees"].as_array().unwrap().len(), 4);
    }

    /// Structural invariants over whole fibers: corner counts, key
    /// round-trips, key stability under rotations of the stored cyclic
    /// order, and detach/attach as inverse operations.
    #[test]
    fn fiber_wide_tree_invariants() {
        for (a, b) in [
            (4u32, vec![2u32, 2, 2]),
            (6, vec![2, 3, 3]),
            (5, vec![2, 2, 2, 1]),
            (3, vec![1, 1, 1, 1, 1]),
        ] {
            let s = StratumSignature::new(a, b).unwrap();
            let fiber = enumerate_fiber(&s, &std_psi(s.num_poles())).unwrap();
            for t in fiber.trees() {
                let corners = t.corners();
                assert_eq!(corners.len(), 2 * a as usize + 2);
                assert_eq!(
                    corners.iter().filter(|c| c.legal_incoming).count(),
                    a as usize + 1
                );
                let key = t.canonical_key();
                assert_eq!(DecoratedTree::decode(&key).unwrap().canonical_key(), key);
                // rotating every stored cyclic order leaves the key fixed
                let rotations: Vec<(u32, Vec<(u32, u32)>)> = t
                    .labels()
                    .iter()
                    .map(|&l| {
                        let ends = t.ends_of(l);
                        let k = ends.len();
                        let shift = (l as usize) % k;
                        let rot = (0..k)
                            .map(|idx| {
                                let end = &ends[(idx + shift) % k];
                                let (s0, d0) = t.edges()[end.edge];
                                (if s0 == l { d0 } else { s0 }, end.gap_after)
                            })
                            .collect();
                        (l, rot)
                    })
                    .collect();
                let rebuilt =
                    DecoratedTree::from_parts(t.edges().to_vec(), &rotations).unwrap();
                assert_eq!(rebuilt.canonical_key(), key);
                for e in 0..t.edges().len() {
                    let (src, dst) = t.detach(e);
                    assert_eq!(DecoratedTree::attach(&src, &dst).canonical_key(), key);
                }
            }
        }
    }
}
