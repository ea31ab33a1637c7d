//! Monodromy of the isoresidual cover.
//!
//! A meridian loop around one resonance hyperplane acts on the fiber over an
//! adjacent chamber by a local surgery: every tree carrying an edge that
//! cuts out the hyperplane's partition moves that edge's two attachments
//! simultaneously to the next allowed corner in the clockwise order, leaving
//! all other trees fixed. Crossing a wall is half of that loop: the edge's
//! orientation reverses and each attachment advances a single corner, to the
//! interleaved corner of opposite parity. Meridians based at a fixed chamber
//! are obtained by transporting the local actions along galleries of upper
//! half-crossings.

use std::collections::HashMap;

use num::BigUint;

use crate::arrangement::{chamber_graph, wall_is_facet, Chamber, ChamberGraph};
use crate::error::{Error, Result};
use crate::fiber::{edge_marked_count, enumerate_fiber, falling, generic_degree, FiberSet};
use crate::perm::{GroupKind, PermGroup, Permutation};
use crate::stratum::{canonical_subsets, PoleSubset, SignFunction, StratumSignature};
use crate::tree::{DecoratedTree, DetachedSide};

/// Global chirality: whether the clockwise corner rotation used by the
/// meridian surgery runs along the contour walk in its forward direction.
/// Calibrated once against the published wall-crossing table of the
/// six-element fiber of H(6;-2,-3,-3) and frozen.
pub const CLOCKWISE_IS_CONTOUR_FORWARD: bool = true;

/// Which half of a meridian loop a wall crossing traverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Upper,
    Lower,
}

/// Rotates the edge's two attachments by `steps` corners (positive =
/// clockwise), optionally reversing the edge's orientation.
fn rotated_tree(t: &DecoratedTree, edge: usize, steps: i64, reverse: bool) -> DecoratedTree {
    let (src, dst) = t.detach(edge);
    let src = DetachedSide { attach: src.tree.advance_attach(src.attach, steps), tree: src.tree };
    let dst = DetachedSide { attach: dst.tree.advance_attach(dst.attach, steps), tree: dst.tree };
    if reverse {
        DecoratedTree::attach(&dst, &src)
    } else {
        DecoratedTree::attach(&src, &dst)
    }
}

/// The meridian action on a fiber: trees without an edge cutting the given
/// partition are fixed; all others advance the edge by one full allowed
/// corner on both sides.
///
/// Well-defined only when the fiber's chamber has the hyperplane as a
/// facet. Adjacency keeps the signs of mixed subsets stable, so the rotated
/// trees stay compatible; on a non-adjacent chamber a rotation can carry
/// the edge across a vertex whose other branches then violate the sign
/// condition, and this function panics.
pub fn meridian_on(fiber: &FiberSet, subset: &PoleSubset) -> Permutation {
    let images: Vec<usize> = fiber
        .trees()
        .iter()
        .enumerate()
        .map(|(i, t)| match t.edge_with_partition(subset) {
            None => i,
            Some(e) => {
                let image = rotated_tree(t, e, 2, false);
                fiber
                    .index_of(&image.canonical_key())
                    .expect("meridian image stays in the fiber")
            }
        })
        .collect();
    Permutation::new(images).expect("bijection")
}

/// The meridian of the hyperplane `A_I` acting on the fiber over a chamber
/// that has it as a facet.
pub fn local_gamma(
    sig: &StratumSignature,
    chamber: &Chamber,
    subset: &PoleSubset,
) -> Result<(FiberSet, Permutation)> {
    if !wall_is_facet(&chamber.psi, subset) {
        return Err(Error::NotAdjacent(subset.to_string()));
    }
    let fiber = enumerate_fiber(sig, &chamber.psi)?;
    let perm = meridian_on(&fiber, subset);
    Ok((fiber, perm))
}

/// A half-crossing of one wall: a bijection between the fibers on the two
/// sides. Trees without an edge on the wall's partition map to the tree of
/// the same shape; the others reverse the edge and advance each attachment
/// one corner clockwise (upper) or counterclockwise (lower).
#[derive(Debug, Clone)]
pub struct WallCrossing {
    pub from: Chamber,
    pub to: Chamber,
    pub subset: PoleSubset,
    pub half: Half,
    pub from_fiber: FiberSet,
    pub to_fiber: FiberSet,
    /// Index map from `from_fiber` into `to_fiber`.
    pub map: Vec<usize>,
}

impl WallCrossing {
    pub fn inverse_map(&self) -> Vec<usize> {
        let mut inv = vec![0usize; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }
}

fn crossing_map(
    from_fiber: &FiberSet,
    to_fiber: &FiberSet,
    subset: &PoleSubset,
    half: Half,
) -> Vec<usize> {
    let steps = match half {
        Half::Upper => 1,
        Half::Lower => -1,
    };
    from_fiber
        .trees()
        .iter()
        .map(|t| {
            let key = match t.edge_with_partition(subset) {
                None => t.canonical_key(),
                Some(e) => rotated_tree(t, e, steps, true).canonical_key(),
            };
            to_fiber.index_of(&key).expect("crossing image lies in the far fiber")
        })
        .collect()
}

pub fn wall_cross(
    sig: &StratumSignature,
    chamber: &Chamber,
    subset: &PoleSubset,
    half: Half,
) -> Result<WallCrossing> {
    if !wall_is_facet(&chamber.psi, subset) {
        return Err(Error::NotAdjacent(subset.to_string()));
    }
    let to_psi = chamber.psi.with_sign(subset, chamber.psi.sign(subset).negate());
    let to = Chamber::from_psi(&to_psi)?;
    let from_fiber = enumerate_fiber(sig, &chamber.psi)?;
    let to_fiber = enumerate_fiber(sig, &to_psi)?;
    let map = crossing_map(&from_fiber, &to_fiber, subset, half);
    Ok(WallCrossing {
        from: chamber.clone(),
        to,
        subset: *subset,
        half,
        from_fiber,
        to_fiber,
        map,
    })
}

// ----------------------------------------------------------------------
// Based generators and the monodromy group
// ----------------------------------------------------------------------

/// One meridian expressed on the base fiber: the hyperplane, the chamber
/// where it acts locally, and the transported permutation.
#[derive(Debug, Clone)]
pub struct BasedGenerator {
    pub subset: PoleSubset,
    pub chamber: usize,
    pub perm: Permutation,
}

/// The full transported generator system of a stratum at a base chamber.
#[derive(Debug)]
pub struct GeneratorSet {
    pub sig: StratumSignature,
    pub graph: std::sync::Arc<ChamberGraph>,
    pub base: usize,
    pub base_fiber: FiberSet,
    pub fibers: Vec<FiberSet>,
    /// Transport maps base fiber -> chamber fiber along the BFS gallery.
    pub transports: Vec<Vec<usize>>,
    pub generators: Vec<BasedGenerator>,
}

/// Computes one meridian per (hyperplane, adjacent chamber) pair, each
/// conjugated back to the base fiber through a gallery of upper
/// half-crossings chosen by breadth-first search. `reverse_gallery_order`
/// explores neighbors in the opposite order, for transport-independence
/// checks.
pub fn based_generators_with(
    sig: &StratumSignature,
    base_psi: &SignFunction,
    reverse_gallery_order: bool,
) -> Result<GeneratorSet> {
    let p = sig.num_poles();
    let graph = chamber_graph(p)?;
    let base = graph
        .find(base_psi)
        .ok_or(Error::UnrealizableSign)?;
    let fibers: Vec<FiberSet> = graph
        .chambers
        .iter()
        .map(|c| enumerate_fiber(sig, &c.psi))
        .collect::<Result<_>>()?;
    let n = graph.chambers.len();
    let mut transports: Vec<Option<Vec<usize>>> = vec![None; n];
    transports[base] = Some((0..fibers[base].len()).collect());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(base);
    while let Some(i) = queue.pop_front() {
        let mut nbrs = graph.adj[i].clone();
        if reverse_gallery_order {
            nbrs.reverse();
        }
        for (j, wall) in nbrs {
            if transports[j].is_none() {
                let step = crossing_map(&fibers[i], &fibers[j], &wall, Half::Upper);
                let t_i = transports[i].as_ref().unwrap();
                transports[j] = Some(t_i.iter().map(|&x| step[x]).collect());
                queue.push_back(j);
            }
        }
    }
    let transports: Vec<Vec<usize>> = transports
        .into_iter()
        .map(|t| t.expect("chamber graph is connected"))
        .collect();

    let mut generators = Vec::new();
    for ci in 0..n {
        let t = &transports[ci];
        let mut t_inv = vec![0usize; t.len()];
        for (x, &y) in t.iter().enumerate() {
            t_inv[y] = x;
        }
        let mut walls: Vec<PoleSubset> = graph.adj[ci].iter().map(|&(_, w)| w).collect();
        walls.sort_by_key(|w| w.mask());
        walls.dedup();
        for wall in walls {
            let gamma = meridian_on(&fibers[ci], &wall);
            let images: Vec<usize> = (0..t.len()).map(|x| t_inv[gamma.apply(t[x])]).collect();
            generators.push(BasedGenerator {
                subset: wall,
                chamber: ci,
                perm: Permutation::new(images).expect("conjugated bijection"),
            });
        }
    }
    let base_fiber = fibers[base].clone();
    Ok(GeneratorSet {
        sig: sig.clone(),
        graph,
        base,
        base_fiber,
        fibers,
        transports,
        generators,
    })
}

pub fn based_generators(sig: &StratumSignature, base_psi: &SignFunction) -> Result<GeneratorSet> {
    based_generators_with(sig, base_psi, false)
}

/// Monodromy group report: order, transitivity, parity content and the
/// structural identification of the generated permutation group.
#[derive(Debug, Clone)]
pub struct GroupReport {
    pub fiber_size: usize,
    pub order: BigUint,
    pub transitive: bool,
    pub all_generators_even: bool,
    pub kind: GroupKind,
}

pub fn monodromy_group(
    sig: &StratumSignature,
    base_psi: &SignFunction,
) -> Result<(GeneratorSet, PermGroup, GroupReport)> {
    let gens = based_generators(sig, base_psi)?;
    let group = PermGroup::new(
        gens.base_fiber.len(),
        gens.generators.iter().map(|g| g.perm.clone()).collect(),
    )?;
    let report = GroupReport {
        fiber_size: gens.base_fiber.len(),
        order: group.order(),
        transitive: group.is_transitive(),
        all_generators_even: group.all_generators_even(),
        kind: group.identify(),
    };
    Ok((gens, group, report))
}

// ----------------------------------------------------------------------
// Predicted meridian structure
// ----------------------------------------------------------------------

/// Predicted cycle type of a meridian from the counting formulas: when one
/// side of the partition is a single pole the marked trees fall into orbits
/// whose length is the opposite side's resonance degree; otherwise orbits
/// have length `lcm(d, a-d)`.
pub fn predicted_meridian_cycle_type(sig: &StratumSignature, subset: &PoleSubset) -> Vec<usize> {
    let a = sig.zero_order() as i64;
    let p = sig.num_poles() as i64;
    let generic = generic_degree(sig);
    if p == 2 {
        return vec![1; generic as usize];
    }
    let (c, d) = sig.resonance_degree(subset);
    let (c, d) = (c as i64, d as i64);
    let marked = edge_marked_count(sig, subset);
    let (orbit_len, orbit_count) = if c == 1 || c == p - 1 {
        let d_big = if c == 1 { a - d } else { d };
        (d_big as usize, falling(d_big - 1, p - 3))
    } else {
        let g = gcd(d as u128, (a - d) as u128);
        let l = ((d as u128) * ((a - d) as u128) / g) as usize;
        (l, g * marked.class_count)
    };
    let mut cycles = Vec::new();
    let mut moved = 0u128;
    if orbit_len > 1 {
        for _ in 0..orbit_count {
            cycles.push(orbit_len);
        }
        moved = orbit_count * orbit_len as u128;
    }
    let fixed = generic - moved;
    cycles.extend(std::iter::repeat_n(1, fixed as usize));
    cycles.sort_unstable_by(|x, y| y.cmp(x));
    cycles
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether the meridian of `subset` is predicted to act trivially on
/// generic fibers; holds exactly for two-pole strata, for two-element
/// subsets of H(2;-1,-1,-1,-1), and for the hyperplane isolating the
/// order-`a` pole of H(a;-a,-1,-1).
pub fn meridian_is_trivial_predicted(sig: &StratumSignature, subset: &PoleSubset) -> bool {
    predicted_meridian_cycle_type(sig, subset).iter().all(|&l| l == 1)
}

/// Whether every meridian of the stratum is predicted even, so that the
/// monodromy group embeds into the alternating group of the fiber.
pub fn all_generators_even_predicted(sig: &StratumSignature) -> bool {
    let p = sig.num_poles();
    let a = sig.zero_order();
    let b = sig.pole_orders();
    match p {
        2 => true, // single-element fibers: the monodromy is trivial
        3 => b.iter().all(|&x| x % 2 == b[0] % 2),
        4 => b.iter().all(|&x| x % 2 == 0),
        5 | 6 => a.is_multiple_of(2),
        _ => p >= 7,
    }
}

// ----------------------------------------------------------------------
// Commutators
// ----------------------------------------------------------------------

/// Mutual position of two partitions: secant when all four pairwise
/// intersections of sides are nonempty, parallel when exactly three are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Secant,
    Parallel,
}

pub fn pair_kind(p: usize, i: &PoleSubset, j: &PoleSubset) -> Result<PairKind> {
    if i == j {
        return Err(Error::NotApplicable("equal subsets".into()));
    }
    let full = (1u32 << p) - 1;
    let (mi, mj) = (i.mask(), j.mask());
    let blocks = [mi & mj, mi & !mj & full, !mi & mj & full, !mi & !mj & full];
    let empty = blocks.iter().filter(|&&b| b == 0).count();
    match empty {
        0 => Ok(PairKind::Secant),
        1 => Ok(PairKind::Parallel),
        _ => Err(Error::NotApplicable("subsets coincide".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommutatorClass {
    Commute,
    ThreeCycles(usize),
    EvenTranspositions(usize),
    Other(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictedCommutator {
    Commute,
    ThreeCycles(u128),
    EvenTranspositions,
    Unconstrained,
}

#[derive(Debug)]
pub struct CommutatorReport {
    pub kind: PairKind,
    pub chamber: Chamber,
    pub observed: CommutatorClass,
    pub predicted: PredictedCommutator,
}

fn classify_commutator(perm: &Permutation) -> CommutatorClass {
    let mut threes = 0;
    let mut twos = 0;
    let mut other = false;
    for l in perm.cycle_type() {
        match l {
            1 => {}
            2 => twos += 1,
            3 => threes += 1,
            _ => other = true,
        }
    }
    if other || (threes > 0 && twos > 0) {
        CommutatorClass::Other(perm.cycle_type())
    } else if threes > 0 {
        CommutatorClass::ThreeCycles(threes)
    } else if twos > 0 && twos % 2 == 0 {
        CommutatorClass::EvenTranspositions(twos)
    } else if twos > 0 {
        CommutatorClass::Other(perm.cycle_type())
    } else {
        CommutatorClass::Commute
    }
}

/// `g^{-1} h^{-1} g h` applied right to left.
pub fn commutator(g: &Permutation, h: &Permutation) -> Permutation {
    h.then(g).then(&h.inverse()).then(&g.inverse())
}

/// Computes the commutator of the two local meridians on a chamber having
/// both hyperplanes as facets (preferring one where both partial sums are
/// negative) and classifies it against the predicted structure. Secant
/// pairs commute on any such chamber: no tree carries edges on two secant
/// partitions, since the partitions cut by a tree's edges are laminar.
pub fn commutator_structure(
    sig: &StratumSignature,
    i: &PoleSubset,
    j: &PoleSubset,
) -> Result<CommutatorReport> {
    let p = sig.num_poles();
    let kind = pair_kind(p, i, j)?;
    let graph = chamber_graph(p)?;
    let both_facets = |c: &Chamber| wall_is_facet(&c.psi, i) && wall_is_facet(&c.psi, j);
    let chamber = graph
        .chambers
        .iter()
        .find(|c| both_facets(c) && c.psi.sign(i) == crate::stratum::Sign::Neg && c.psi.sign(j) == crate::stratum::Sign::Neg)
        .or_else(|| graph.chambers.iter().find(|c| both_facets(c)))
        .cloned()
        .ok_or_else(|| Error::NotApplicable("no chamber touches both walls".into()))?;

    let predicted = match kind {
        PairKind::Secant => PredictedCommutator::Commute,
        PairKind::Parallel => {
            // normalize to disjoint masks with nonempty remainder
            let full = (1u32 << p) - 1;
            let (mut mi, mut mj) = (i.mask(), j.mask());
            if mi & mj != 0 {
                if mi & !mj == 0 {
                    mj = full & !mj;
                } else if mj & !mi == 0 {
                    mi = full & !mi;
                } else {
                    mi = full & !mi;
                    mj = full & !mj;
                }
            }
            let sum_d = |mask: u32| -> i64 {
                (0..p)
                    .filter(|&x| mask & (1 << x) != 0)
                    .map(|x| sig.pole_orders()[x] as i64)
                    .sum::<i64>()
                    - 1
            };
            let (di, dj) = (sum_d(mi), sum_d(mj));
            let dk = sum_d(full & !(mi | mj));
            let (ci, cj) = (mi.count_ones() as i64, mj.count_ones() as i64);
            if meridian_is_trivial_predicted(sig, i) || meridian_is_trivial_predicted(sig, j) {
                PredictedCommutator::Commute
            } else if dk == 0
                && ((di >= 1 && dj >= 1)
                    || (di == 0 && dj >= 2 && cj >= 2)
                    || (dj == 0 && di >= 2 && ci >= 2))
            {
                PredictedCommutator::ThreeCycles(falling(di, ci - 1) * falling(dj, cj - 1))
            } else if dk >= 1 && di + dj >= 1 {
                PredictedCommutator::EvenTranspositions
            } else {
                PredictedCommutator::Unconstrained
            }
        }
    };

    let fiber = enumerate_fiber(sig, &chamber.psi)?;
    let gi = meridian_on(&fiber, i);
    let gj = meridian_on(&fiber, j);
    let observed = classify_commutator(&commutator(&gi, &gj));
    Ok(CommutatorReport { kind, chamber, observed, predicted })
}

// ----------------------------------------------------------------------
// Topological classes
// ----------------------------------------------------------------------

/// The partition of a fiber into topological classes for strata of shape
/// `(a; k c_1, ..., k c_{p-2}, 1, 1)` with coprime `c`, and the cyclic
/// action induced by a simple-pole meridian.
#[derive(Debug)]
pub struct TopologicalClasses {
    pub k: usize,
    pub base_psi: SignFunction,
    pub fiber_size: usize,
    /// Class index of every fiber element.
    pub class_of: Vec<usize>,
    /// Classes as sorted index lists, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Action of the shifting meridian on class indices.
    pub shift: Permutation,
}

pub fn topological_class_partition(sig: &StratumSignature) -> Result<TopologicalClasses> {
    let p = sig.num_poles();
    let b = sig.pole_orders();
    if p < 3 || b[p - 1] != 1 || b[p - 2] != 1 {
        return Err(Error::NotApplicable(
            "signature must end with two simple poles".into(),
        ));
    }
    let k = b[..p - 2].iter().fold(0u32, |acc, &x| num::integer::gcd(acc, x)) as usize;
    if k < 2 {
        return Err(Error::NotApplicable("higher-order pole weights are coprime".into()));
    }
    // base chamber: first simple pole negative, second positive
    let lambda: Vec<i64> = (0..p)
        .map(|x| {
            if x < p - 2 {
                -2
            } else if x == p - 2 {
                -1
            } else {
                2 * p as i64 - 3
            }
        })
        .collect();
    let base = crate::stratum::ResidueConfig::from_integers(&lambda)?;
    let base_psi = base.sign_function();
    debug_assert!(base_psi.is_nowhere_zero());

    let gens = based_generators(sig, &base_psi)?;
    let n = gens.base_fiber.len();
    let shifting_masks = [1u32 << (p - 2), (1u32 << (p - 1)) - 1];
    // orbits of the class-preserving subgroup
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let nxt = parent[c];
            parent[c] = r;
            c = nxt;
        }
        r
    }
    for g in &gens.generators {
        if shifting_masks.contains(&g.subset.mask()) {
            continue;
        }
        for x in 0..n {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, g.perm.apply(x)));
            if rx != ry {
                parent[rx] = ry;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut class_of = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        let idx = match roots.iter().position(|&y| y == r) {
            Some(i) => i,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        class_of[x] = idx;
    }
    let num_classes = roots.len();
    if num_classes != k {
        return Err(Error::PartitionMismatch { found: num_classes, expected: k });
    }
    let mut classes = vec![Vec::new(); num_classes];
    for (x, &c) in class_of.iter().enumerate() {
        classes[c].push(x);
    }
    if classes.iter().any(|c| c.len() != n / k) {
        return Err(Error::PartitionMismatch { found: num_classes, expected: k });
    }

    // the shifting meridian must act as a k-cycle on classes
    let shifter = gens
        .generators
        .iter()
        .find(|g| shifting_masks.contains(&g.subset.mask()))
        .ok_or_else(|| Error::NotApplicable("no simple-pole meridian found".into()))?;
    let mut images = vec![usize::MAX; num_classes];
    for x in 0..n {
        let (c, ci) = (class_of[x], class_of[shifter.perm.apply(x)]);
        if images[c] == usize::MAX {
            images[c] = ci;
        } else if images[c] != ci {
            return Err(Error::PartitionMismatch { found: num_classes, expected: k });
        }
    }
    let shift = Permutation::new(images).map_err(|_| Error::PartitionMismatch {
        found: num_classes,
        expected: k,
    })?;
    if shift.cycle_type() != vec![k] {
        return Err(Error::PartitionMismatch { found: num_classes, expected: k });
    }
    Ok(TopologicalClasses { k, base_psi, fiber_size: n, class_of, classes, shift })
}

// ----------------------------------------------------------------------
// Sampled adjacent-chamber sweeps (shared by tests and the verify suite)
// ----------------------------------------------------------------------

/// For each hyperplane, the two chambers sampled on either side of a
/// generic wall point. The map is keyed by canonical subset index.
pub fn sampled_wall_chambers(
    p: usize,
    seed: u64,
) -> Result<HashMap<PoleSubset, (Chamber, Chamber)>> {
    let mut rng = crate::arrangement::rng_from_seed(seed);
    let mut out = HashMap::new();
    for s in canonical_subsets(p) {
        let w = crate::arrangement::sample_wall(p, &s, &mut rng)?;
        out.insert(s, (w.minus, w.plus));
    }
    Ok(out)
}

/// Checks that composing the upper half-crossing with the inverse of the
/// lower half-crossing reproduces the local meridian.
pub fn crossing_composition_matches(
    sig: &StratumSignature,
    chamber: &Chamber,
    subset: &PoleSubset,
) -> Result<bool> {
    let to_psi = chamber.psi.with_sign(subset, chamber.psi.sign(subset).negate());
    let from_fiber = enumerate_fiber(sig, &chamber.psi)?;
    let to_fiber = enumerate_fiber(sig, &to_psi)?;
    let upper = crossing_map(&from_fiber, &to_fiber, subset, Half::Upper);
    let lower = crossing_map(&from_fiber, &to_fiber, subset, Half::Lower);
    let mut lower_inv = vec![0usize; lower.len()];
    for (i, &j) in lower.iter().enumerate() {
        lower_inv[j] = i;
    }
    let composed: Vec<usize> = (0..from_fiber.len()).map(|x| lower_inv[upper[x]]).collect();
    let gamma = meridian_on(&from_fiber, subset);
    Ok(composed == gamma.images())
}
