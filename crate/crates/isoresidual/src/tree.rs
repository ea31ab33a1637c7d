//! Decorated plane trees.
//!
//! A decorated tree is a labeled tree embedded in the oriented sphere, with
//! directed edges and a number of indistinguishable half-edges attached at
//! each vertex. The embedding is stored as a rotation system: at every
//! vertex, a cyclic counterclockwise sequence of edge ends together with the
//! count of half-edges in the gap following each end. Between two cyclically
//! consecutive ends the gap must have even size when both ends have the same
//! direction status at the vertex (both incoming or both outgoing) and odd
//! size otherwise.
//!
//! Isotopy classes of such embeddings correspond exactly to rotation
//! systems, so the canonical key produced by [`DecoratedTree::canonical_key`]
//! identifies trees up to orientation-preserving isotopy of the sphere.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::stratum::{PoleSubset, Sign, SignFunction, StratumSignature};

/// One edge end in the cyclic order around a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct End {
    /// Index into the tree's edge list.
    pub edge: usize,
    /// Number of half-edges between this end and the cyclically next end.
    pub gap_after: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct VertexRot {
    /// Counterclockwise cyclic sequence of edge ends.
    ends: Vec<End>,
    /// Half-edge count for a vertex with no edge ends (single-vertex trees).
    lone_hes: u32,
}

/// A decorated tree. Vertex labels are arbitrary distinct positive integers;
/// a tree drawn from a stratum with `p` poles carries labels `1..=p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedTree {
    labels: Vec<u32>,
    verts: Vec<VertexRot>,
    /// Directed edges `(source label, target label)`.
    edges: Vec<(u32, u32)>,
}

/// A corner of a decorated tree: the angular sector at `vertex` sitting
/// `offset` half-edges after the edge end `end_index`. A valid tree on a
/// stratum with zero order `a` has `2a + 2` corners, of which `a + 1` admit
/// the insertion of an incoming edge end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: u32,
    pub end_index: usize,
    pub offset: u32,
    /// Whether the parity rule allows inserting an incoming edge end here.
    pub legal_incoming: bool,
}

/// Attachment point left behind on one side after detaching an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachPoint {
    /// The side is a single vertex with no remaining edge ends; every
    /// position between its half-edges yields the same isotopy class.
    Bare { vertex: u32 },
    Corner { vertex: u32, end_index: usize, offset: u32 },
}

impl AttachPoint {
    pub fn vertex(&self) -> u32 {
        match *self {
            AttachPoint::Bare { vertex } => vertex,
            AttachPoint::Corner { vertex, .. } => vertex,
        }
    }
}

/// One side of a detached edge: the subtree plus the corner the edge end
/// occupied.
#[derive(Debug, Clone)]
pub struct DetachedSide {
    pub tree: DecoratedTree,
    pub attach: AttachPoint,
}

/// A component of a collapsed tree together with the restriction of the
/// ambient sign function to its labels (relabeled `1..=m`); `None` when the
/// component is a single vertex.
#[derive(Debug, Clone)]
pub struct CollapsePiece {
    pub tree: DecoratedTree,
    /// Original labels of the component, ascending; position `i` is the
    /// vertex relabeled `i + 1` in the restricted sign function.
    pub labels: Vec<u32>,
    pub psi: Option<SignFunction>,
}

impl DecoratedTree {
    /// Builds a tree from directed edges and per-vertex rotations. Each
    /// rotation lists `(neighbor label, gap_after)` in counterclockwise
    /// order; every incident edge must appear exactly once.
    pub fn from_parts(
        edges: Vec<(u32, u32)>,
        rotations: &[(u32, Vec<(u32, u32)>)],
    ) -> Result<Self> {
        let mut labels: Vec<u32> = rotations.iter().map(|r| r.0).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != rotations.len() {
            return Err(Error::TreeInvalid("duplicate vertex in rotations".into()));
        }
        let mut verts = vec![VertexRot::default(); labels.len()];
        for (label, rot) in rotations {
            let vpos = labels.binary_search(label).unwrap();
            let mut ends = Vec::with_capacity(rot.len());
            for &(neighbor, gap) in rot {
                let edge = edges
                    .iter()
                    .position(|&(s, d)| (s, d) == (*label, neighbor) || (s, d) == (neighbor, *label))
                    .ok_or_else(|| {
                        Error::TreeInvalid(format!("no edge between {label} and {neighbor}"))
                    })?;
                ends.push(End { edge, gap_after: gap });
            }
            verts[vpos].ends = ends;
        }
        let tree = DecoratedTree { labels, verts, edges };
        tree.check_shape()?;
        Ok(tree)
    }

    /// A single labeled vertex carrying `hes` half-edges.
    pub fn single_vertex(label: u32, hes: u32) -> Self {
        DecoratedTree {
            labels: vec![label],
            verts: vec![VertexRot { ends: Vec::new(), lone_hes: hes }],
            edges: Vec::new(),
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn ends_of(&self, label: u32) -> &[End] {
        &self.verts[self.vpos(label)].ends
    }

    fn vpos(&self, label: u32) -> usize {
        self.labels.binary_search(&label).expect("label present")
    }

    /// Mutable access to a vertex's cyclic end sequence, for the counting
    /// surgeries.
    pub(crate) fn ends_mut(&mut self, vpos: usize) -> &mut Vec<End> {
        &mut self.verts[vpos].ends
    }

    /// Replaces the endpoint `from` by `to` in the listed edges.
    pub(crate) fn retarget_edges(&mut self, edge_ids: &[usize], from: u32, to: u32) {
        for &e in edge_ids {
            if self.edges[e].0 == from {
                self.edges[e].0 = to;
            }
            if self.edges[e].1 == from {
                self.edges[e].1 = to;
            }
        }
    }

    /// Number of half-edges attached at a vertex.
    pub fn half_edges_at(&self, label: u32) -> u32 {
        let v = &self.verts[self.vpos(label)];
        if v.ends.is_empty() {
            v.lone_hes
        } else {
            v.ends.iter().map(|e| e.gap_after).sum()
        }
    }

    /// Direction of an edge end at a vertex: `true` when outgoing.
    pub fn end_is_outgoing(&self, label: u32, end: &End) -> bool {
        self.edges[end.edge].0 == label
    }

    /// Structural sanity: edge ends consistent, graph a tree. Does not check
    /// half-edge counts against a signature; see [`DecoratedTree::validate`].
    fn check_shape(&self) -> Result<()> {
        let n = self.labels.len();
        if self.edges.len() + 1 != n {
            return Err(Error::TreeInvalid(format!(
                "{} edges on {} vertices",
                self.edges.len(),
                n
            )));
        }
        let mut seen = vec![0u8; self.edges.len()];
        for (vpos, v) in self.verts.iter().enumerate() {
            let label = self.labels[vpos];
            for end in &v.ends {
                let (s, d) = *self.edges.get(end.edge).ok_or_else(|| {
                    Error::TreeInvalid(format!("edge id {} out of range", end.edge))
                })?;
                if s != label && d != label {
                    return Err(Error::TreeInvalid(format!(
                        "edge {}->{} listed at vertex {label}",
                        s, d
                    )));
                }
                seen[end.edge] += 1;
            }
        }
        if seen.iter().any(|&c| c != 2) {
            return Err(Error::TreeInvalid("every edge needs exactly two ends".into()));
        }
        // connectivity
        if n > 1 {
            let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for &(s, d) in &self.edges {
                adj.entry(s).or_default().push(d);
                adj.entry(d).or_default().push(s);
            }
            let mut stack = vec![self.labels[0]];
            let mut visited = std::collections::BTreeSet::new();
            visited.insert(self.labels[0]);
            while let Some(u) = stack.pop() {
                for &w in adj.get(&u).into_iter().flatten() {
                    if visited.insert(w) {
                        stack.push(w);
                    }
                }
            }
            if visited.len() != n {
                return Err(Error::TreeInvalid("graph is not connected".into()));
            }
        }
        Ok(())
    }

    /// Checks the parity rule at every vertex: the gap after an end is even
    /// iff the next end has the same direction status.
    fn check_parity(&self) -> Result<()> {
        for (vpos, v) in self.verts.iter().enumerate() {
            let label = self.labels[vpos];
            let k = v.ends.len();
            for i in 0..k {
                let here = self.end_is_outgoing(label, &v.ends[i]);
                let next = self.end_is_outgoing(label, &v.ends[(i + 1) % k]);
                let want_odd = here != next;
                if (v.ends[i].gap_after % 2 == 1) != want_odd {
                    return Err(Error::TreeInvalid(format!(
                        "parity violated at vertex {label}, end {i}: gap {} between {} ends",
                        v.ends[i].gap_after,
                        if want_odd { "opposite-direction" } else { "same-direction" },
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full validation against a signature: labels `1..=p`, tree shape,
    /// `2b_j - 2` half-edges at vertex `j`, and the parity rule.
    pub fn validate(&self, sig: &StratumSignature) -> Result<()> {
        let p = sig.num_poles();
        if self.labels.len() != p || self.labels.iter().enumerate().any(|(i, &l)| l != i as u32 + 1)
        {
            return Err(Error::TreeInvalid(format!("labels must be 1..={p}")));
        }
        self.check_shape()?;
        for j in 1..=p as u32 {
            let have = self.half_edges_at(j);
            let want = 2 * sig.pole_order(j) - 2;
            if have != want {
                return Err(Error::TreeInvalid(format!(
                    "vertex {j} carries {have} half-edges, expected {want}"
                )));
            }
        }
        self.check_parity()
    }

    /// Bitmask (bit `l-1` for label `l`) of the source-side vertices of an
    /// edge: the side the orientation leaves.
    pub fn edge_side_mask(&self, edge: usize) -> u32 {
        let src = self.edges[edge].0;
        let mut mask = 0u32;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            mask |= 1 << (u - 1);
            for end in self.ends_of(u) {
                if end.edge == edge {
                    continue;
                }
                let (s, d) = self.edges[end.edge];
                let w = if s == u { d } else { s };
                if mask & (1 << (w - 1)) == 0 {
                    stack.push(w);
                }
            }
        }
        mask
    }

    /// Canonical representative of the partition cut out by an edge.
    pub fn edge_partition(&self, edge: usize) -> PoleSubset {
        PoleSubset::from_mask(self.labels.len(), self.edge_side_mask(edge)).expect("proper side")
    }

    /// The edge whose partition equals the given subset, if any. A tree has
    /// at most one such edge since distinct edges cut distinct partitions.
    pub fn edge_with_partition(&self, subset: &PoleSubset) -> Option<usize> {
        (0..self.edges.len()).find(|&e| self.edge_partition(e) == *subset)
    }

    /// Compatibility with a sign function: every edge leaves a strictly
    /// negative side and enters a strictly positive side. An edge over a
    /// vanishing partial sum makes the tree incompatible as a smooth fiber
    /// member.
    pub fn is_compatible(&self, sig: &StratumSignature, psi: &SignFunction) -> bool {
        if self.validate(sig).is_err() {
            return false;
        }
        self.edges.iter().enumerate().all(|(e, _)| {
            psi.sign_of_mask(self.edge_side_mask(e)) == Sign::Neg
        })
    }

    /// Whether some edge cuts a partition on which the sign function
    /// vanishes; such a tree corresponds to a degenerate limit object.
    pub fn is_degenerate(&self, psi: &SignFunction) -> bool {
        (0..self.edges.len()).any(|e| psi.sign_of_mask(self.edge_side_mask(e)) == Sign::Zero)
    }

    // ------------------------------------------------------------------
    // Contour walk and corners
    // ------------------------------------------------------------------

    /// Number of corners; equals `2a + 2` for a tree valid in a stratum of
    /// zero order `a`.
    pub fn corner_count(&self) -> usize {
        self.verts
            .iter()
            .map(|v| v.ends.iter().map(|e| e.gap_after as usize + 1).sum::<usize>())
            .sum()
    }

    fn end_location(&self, edge: usize, label: u32) -> (usize, usize) {
        let vpos = self.vpos(label);
        let idx = self.verts[vpos]
            .ends
            .iter()
            .position(|e| e.edge == edge)
            .expect("end present");
        (vpos, idx)
    }

    /// Next corner along the contour of the tree (the single boundary walk
    /// of the embedding, taken in the direction of the stored rotations).
    pub fn contour_next(&self, c: (usize, usize, u32)) -> (usize, usize, u32) {
        let (vpos, i, o) = c;
        let v = &self.verts[vpos];
        if o < v.ends[i].gap_after {
            return (vpos, i, o + 1);
        }
        let next_end = v.ends[(i + 1) % v.ends.len()];
        let label = self.labels[vpos];
        let (s, d) = self.edges[next_end.edge];
        let other = if s == label { d } else { s };
        let (wpos, j) = self.end_location(next_end.edge, other);
        (wpos, j, 0)
    }

    /// Previous corner along the contour.
    pub fn contour_prev(&self, c: (usize, usize, u32)) -> (usize, usize, u32) {
        let (vpos, i, o) = c;
        if o > 0 {
            return (vpos, i, o - 1);
        }
        let v = &self.verts[vpos];
        let this_end = v.ends[i];
        let label = self.labels[vpos];
        let (s, d) = self.edges[this_end.edge];
        let other = if s == label { d } else { s };
        let (wpos, j) = self.end_location(this_end.edge, other);
        let w = &self.verts[wpos];
        let prev = (j + w.ends.len() - 1) % w.ends.len();
        (wpos, prev, w.ends[prev].gap_after)
    }

    /// Whether the parity rule admits inserting an incoming edge end at the
    /// corner `offset` half-edges after end `end_index`.
    pub fn corner_legal_incoming(&self, vpos: usize, end_index: usize, offset: u32) -> bool {
        let label = self.labels[vpos];
        let outgoing = self.end_is_outgoing(label, &self.verts[vpos].ends[end_index]);
        offset.is_multiple_of(2) != outgoing
    }

    /// All corners in contour order, starting at the corner directly after
    /// the first stored end of the smallest label. The walk direction is the
    /// frozen rotation direction used by the monodromy surgeries.
    pub fn corners(&self) -> Vec<Corner> {
        let mut out = Vec::with_capacity(self.corner_count());
        if self.verts[0].ends.is_empty() {
            return out;
        }
        let start = (0usize, 0usize, 0u32);
        let mut c = start;
        loop {
            out.push(Corner {
                vertex: self.labels[c.0],
                end_index: c.1,
                offset: c.2,
                legal_incoming: self.corner_legal_incoming(c.0, c.1, c.2),
            });
            c = if crate::monodromy::CLOCKWISE_IS_CONTOUR_FORWARD {
                self.contour_next(c)
            } else {
                self.contour_prev(c)
            };
            if c == start {
                break;
            }
        }
        out
    }

    // ------------------------------------------------------------------
    // Surgery
    // ------------------------------------------------------------------

    /// Inserts an end for `edge` at the given attachment point.
    fn insert_end(&mut self, at: AttachPoint, edge: usize) {
        match at {
            AttachPoint::Bare { vertex } => {
                let vpos = self.vpos(vertex);
                let v = &mut self.verts[vpos];
                debug_assert!(v.ends.is_empty());
                v.ends.push(End { edge, gap_after: v.lone_hes });
                v.lone_hes = 0;
            }
            AttachPoint::Corner { vertex, end_index, offset } => {
                let vpos = self.vpos(vertex);
                let v = &mut self.verts[vpos];
                let old_gap = v.ends[end_index].gap_after;
                debug_assert!(offset <= old_gap);
                v.ends[end_index].gap_after = offset;
                v.ends.insert(end_index + 1, End { edge, gap_after: old_gap - offset });
            }
        }
    }

    /// Restriction of the tree to a subset of its labels, with the edges
    /// renumbered. The gap of every dropped end is merged into the gap of
    /// the cyclically previous surviving end, so no half-edge is lost.
    fn restrict_merging(&self, keep: &[u32]) -> DecoratedTree {
        let kept_edge: Vec<Option<usize>> = {
            let mut next = 0usize;
            self.edges
                .iter()
                .map(|&(s, d)| {
                    if keep.binary_search(&s).is_ok() && keep.binary_search(&d).is_ok() {
                        next += 1;
                        Some(next - 1)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| kept_edge[*e].is_some())
            .map(|(_, &ed)| ed)
            .collect();
        let verts = keep
            .iter()
            .map(|&l| {
                let v = &self.verts[self.vpos(l)];
                let mut ends: Vec<End> = Vec::new();
                let mut leading = 0u32;
                for end in &v.ends {
                    match kept_edge[end.edge] {
                        Some(ne) => ends.push(End { edge: ne, gap_after: end.gap_after }),
                        None => {
                            if let Some(last) = ends.last_mut() {
                                last.gap_after += end.gap_after;
                            } else {
                                leading += end.gap_after;
                            }
                        }
                    }
                }
                if let Some(last) = ends.last_mut() {
                    last.gap_after += leading;
                    VertexRot { ends, lone_hes: 0 }
                } else {
                    VertexRot { ends, lone_hes: leading + v.lone_hes }
                }
            })
            .collect();
        DecoratedTree { labels: keep.to_vec(), verts, edges }
    }

    /// Splits the tree along an edge into its source side and target side,
    /// each remembering the corner the removed end occupied.
    pub fn detach(&self, edge: usize) -> (DetachedSide, DetachedSide) {
        let (src, dst) = self.edges[edge];
        let src_mask = self.edge_side_mask(edge);
        let side = |on_source_side: bool, at_label: u32| -> DetachedSide {
            let keep: Vec<u32> = self
                .labels
                .iter()
                .copied()
                .filter(|&l| (src_mask & (1 << (l - 1)) != 0) == on_source_side)
                .collect();
            let tree = self.restrict_merging(&keep);
            let (vpos, idx) = self.end_location(edge, at_label);
            let orig = &self.verts[vpos];
            let k = orig.ends.len();
            let attach = if k == 1 {
                AttachPoint::Bare { vertex: at_label }
            } else {
                let prev = (idx + k - 1) % k;
                // index of `prev` after the removal, counting only kept ends
                let new_index = orig.ends[..prev]
                    .iter()
                    .filter(|e| e.edge != edge)
                    .count();
                AttachPoint::Corner {
                    vertex: at_label,
                    end_index: new_index,
                    offset: orig.ends[prev].gap_after,
                }
            };
            DetachedSide { tree, attach }
        };
        (side(true, src), side(false, dst))
    }

    /// Glues two detached sides with a new edge oriented from the source
    /// side's attachment vertex to the target side's.
    pub fn attach(source: &DetachedSide, target: &DetachedSide) -> DecoratedTree {
        let mut labels: Vec<u32> = source.tree.labels.iter().chain(&target.tree.labels).copied().collect();
        labels.sort_unstable();
        let mut edges = Vec::new();
        let mut map_side = |t: &DecoratedTree| -> Vec<usize> {
            t.edges
                .iter()
                .map(|&e| {
                    edges.push(e);
                    edges.len() - 1
                })
                .collect()
        };
        let src_map = map_side(&source.tree);
        let dst_map = map_side(&target.tree);
        let new_edge = edges.len();
        edges.push((source.attach.vertex(), target.attach.vertex()));

        let mut verts = vec![VertexRot::default(); labels.len()];
        let place = |t: &DecoratedTree, map: &[usize], labels: &[u32], verts: &mut Vec<VertexRot>| {
            for (vpos, v) in t.verts.iter().enumerate() {
                let npos = labels.binary_search(&t.labels[vpos]).unwrap();
                verts[npos] = VertexRot {
                    ends: v
                        .ends
                        .iter()
                        .map(|e| End { edge: map[e.edge], gap_after: e.gap_after })
                        .collect(),
                    lone_hes: v.lone_hes,
                };
            }
        };
        place(&source.tree, &src_map, &labels, &mut verts);
        place(&target.tree, &dst_map, &labels, &mut verts);
        let mut out = DecoratedTree { labels, verts, edges };
        out.insert_end(source.attach, new_edge);
        out.insert_end(target.attach, new_edge);
        out
    }

    /// Moves an attachment point `steps` corners along the side's contour;
    /// positive steps follow the frozen clockwise direction. Bare vertices
    /// are untouched: all their corners are isotopic.
    pub fn advance_attach(&self, at: AttachPoint, steps: i64) -> AttachPoint {
        match at {
            AttachPoint::Bare { .. } => at,
            AttachPoint::Corner { vertex, end_index, offset } => {
                let mut c = (self.vpos(vertex), end_index, offset);
                let forward = steps >= 0;
                for _ in 0..steps.unsigned_abs() {
                    c = if forward == crate::monodromy::CLOCKWISE_IS_CONTOUR_FORWARD {
                        self.contour_next(c)
                    } else {
                        self.contour_prev(c)
                    };
                }
                AttachPoint::Corner { vertex: self.labels[c.0], end_index: c.1, offset: c.2 }
            }
        }
    }

    /// Deletes every edge whose partition has sign zero and returns the
    /// resulting components with restricted sign functions.
    pub fn collapse(&self, psi: &SignFunction) -> Vec<CollapsePiece> {
        let dead: Vec<usize> = (0..self.edges.len())
            .filter(|&e| psi.sign_of_mask(self.edge_side_mask(e)) == Sign::Zero)
            .collect();
        // component find over surviving edges
        let mut comp: BTreeMap<u32, u32> = self.labels.iter().map(|&l| (l, l)).collect();
        fn find(comp: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let mut r = x;
            while comp[&r] != r {
                r = comp[&r];
            }
            let mut c = x;
            while comp[&c] != r {
                let n = comp[&c];
                comp.insert(c, r);
                c = n;
            }
            r
        }
        for (e, &(s, d)) in self.edges.iter().enumerate() {
            if !dead.contains(&e) {
                let (rs, rd) = (find(&mut comp, s), find(&mut comp, d));
                comp.insert(rs, rd);
            }
        }
        let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &l in &self.labels {
            groups.entry(find(&mut comp, l)).or_default().push(l);
        }
        groups
            .into_values()
            .map(|labels| {
                let tree = self.restrict_merging(&labels);
                let psi_restricted = if labels.len() >= 2 {
                    let m = labels.len();
                    let signs = crate::stratum::canonical_subsets(m)
                        .iter()
                        .map(|s| {
                            let mask: u32 =
                                s.iter().map(|rel| 1u32 << (labels[rel as usize - 1] - 1)).sum();
                            psi.sign_of_mask(mask)
                        })
                        .collect();
                    Some(SignFunction::new(m, signs).expect("sized"))
                } else {
                    None
                };
                CollapsePiece { tree, labels, psi: psi_restricted }
            })
            .collect()
    }

    // ------------------------------------------------------------------
    // Canonical key
    // ------------------------------------------------------------------

    /// Canonical text encoding. Two trees receive equal keys exactly when
    /// they are related by an orientation-preserving sphere isotopy
    /// respecting labels. The root is the smallest label; its slot sequence
    /// is the least rotation (edge slots compare before half-edge slots,
    /// incoming before outgoing, then by child key); children serialize
    /// starting just after the parent end.
    pub fn canonical_key(&self) -> String {
        let root = 0usize;
        if self.verts[root].ends.is_empty() {
            let mut s = format!("{}(", self.labels[root]);
            s.extend(std::iter::repeat_n('*', self.verts[root].lone_hes as usize));
            s.push(')');
            return s;
        }
        let k = self.verts[root].ends.len();
        let mut best: Option<Vec<Tok>> = None;
        for start in 0..k {
            let mut toks = Vec::new();
            for i in 0..k {
                let idx = (start + i) % k;
                let end = self.verts[root].ends[idx];
                self.push_edge_slot(root, &end, &mut toks);
                toks.extend(std::iter::repeat_n(Tok::Star, end.gap_after as usize));
            }
            if best.as_ref().is_none_or(|b| toks < *b) {
                best = Some(toks);
            }
        }
        let mut s = format!("{}(", self.labels[root]);
        render(&best.unwrap(), &mut s);
        s.push(')');
        s
    }

    fn push_edge_slot(&self, vpos: usize, end: &End, out: &mut Vec<Tok>) {
        let label = self.labels[vpos];
        let (s, d) = self.edges[end.edge];
        let (child, incoming) = if s == label { (d, false) } else { (s, true) };
        out.push(if incoming { Tok::EdgeIn(child) } else { Tok::EdgeOut(child) });
        out.push(Tok::Open);
        let (cpos, j) = self.end_location(end.edge, child);
        let ck = self.verts[cpos].ends.len();
        let mut gap = self.verts[cpos].ends[j].gap_after;
        for step in 1..ck {
            out.extend(std::iter::repeat_n(Tok::Star, gap as usize));
            let e2 = self.verts[cpos].ends[(j + step) % ck];
            self.push_edge_slot(cpos, &e2, out);
            gap = e2.gap_after;
        }
        out.extend(std::iter::repeat_n(Tok::Star, gap as usize));
        out.push(Tok::Close);
    }

    /// Parses the canonical grammar back into a tree.
    pub fn decode(key: &str) -> Result<Self> {
        let bytes = key.as_bytes();
        let mut pos = 0usize;
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut rots: Vec<(u32, Vec<RawSlot>)> = Vec::new();
        parse_tree(bytes, &mut pos, None, &mut edges, &mut rots)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input at byte {pos}")));
        }
        let mut labels: Vec<u32> = rots.iter().map(|r| r.0).collect();
        labels.sort_unstable();
        let dedup_len = {
            let mut l = labels.clone();
            l.dedup();
            l.len()
        };
        if dedup_len != labels.len() {
            return Err(Error::Parse("duplicate vertex label".into()));
        }
        let mut verts = vec![VertexRot::default(); labels.len()];
        for (label, slots) in rots {
            let vpos = labels.binary_search(&label).unwrap();
            let mut ends = Vec::new();
            let mut leading = 0u32;
            for slot in slots {
                match slot {
                    RawSlot::Star => {
                        if let Some(last) = ends.last_mut() {
                            let End { gap_after, .. } = last;
                            *gap_after += 1;
                        } else {
                            leading += 1;
                        }
                    }
                    RawSlot::End(edge) => ends.push(End { edge, gap_after: 0 }),
                }
            }
            if ends.is_empty() {
                verts[vpos] = VertexRot { ends, lone_hes: leading };
            } else {
                let n = ends.len();
                ends[n - 1].gap_after += leading;
                verts[vpos] = VertexRot { ends, lone_hes: 0 };
            }
        }
        let tree = DecoratedTree { labels, verts, edges };
        tree.check_shape()?;
        Ok(tree)
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

/// Comparison token for rotation minimization. The derived order makes edge
/// slots sort before half-edges and incoming before outgoing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Tok {
    EdgeIn(u32),
    EdgeOut(u32),
    Star,
    Open,
    Close,
}

fn render(toks: &[Tok], out: &mut String) {
    for t in toks {
        match t {
            Tok::EdgeIn(l) => {
                out.push('<');
                out.push_str(&l.to_string());
            }
            Tok::EdgeOut(l) => {
                out.push('>');
                out.push_str(&l.to_string());
            }
            Tok::Star => out.push('*'),
            Tok::Open => out.push('('),
            Tok::Close => out.push(')'),
        }
    }
}

enum RawSlot {
    Star,
    End(usize),
}

fn parse_label(bytes: &[u8], pos: &mut usize) -> Result<u32> {
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::Parse(format!("expected label at byte {start}")));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .unwrap()
        .parse()
        .map_err(|e| Error::Parse(format!("label: {e}")))
}

/// Parses `label ( slots )`; `incoming_edge` is the id of the edge arriving
/// from the parent, already pushed into `edges` with a placeholder endpoint.
fn parse_tree(
    bytes: &[u8],
    pos: &mut usize,
    parent_edge: Option<(usize, bool)>,
    edges: &mut Vec<(u32, u32)>,
    rots: &mut Vec<(u32, Vec<RawSlot>)>,
) -> Result<()> {
    let label = parse_label(bytes, pos)?;
    if let Some((e, child_is_source)) = parent_edge {
        if child_is_source {
            edges[e].0 = label;
        } else {
            edges[e].1 = label;
        }
    }
    if *pos >= bytes.len() || bytes[*pos] != b'(' {
        return Err(Error::Parse(format!("expected '(' at byte {pos}", pos = *pos)));
    }
    *pos += 1;
    let mut slots = Vec::new();
    if let Some((e, _)) = parent_edge {
        slots.push(RawSlot::End(e));
    }
    // parent end leads the cyclic order; subsequent slots follow it
    let my_rot = rots.len();
    rots.push((label, Vec::new()));
    while *pos < bytes.len() && bytes[*pos] != b')' {
        match bytes[*pos] {
            b'*' => {
                slots.push(RawSlot::Star);
                *pos += 1;
            }
            b'<' | b'>' => {
                let incoming = bytes[*pos] == b'<';
                *pos += 1;
                let e = edges.len();
                if incoming {
                    edges.push((0, label));
                } else {
                    edges.push((label, 0));
                }
                slots.push(RawSlot::End(e));
                parse_tree(bytes, pos, Some((e, incoming)), edges, rots)?;
            }
            other => {
                return Err(Error::Parse(format!("unexpected byte `{}`", other as char)));
            }
        }
    }
    if *pos >= bytes.len() {
        return Err(Error::Parse("missing ')'".into()));
    }
    *pos += 1;
    rots[my_rot].1 = slots;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratum::StratumSignature;

    fn sig(a: u32, b: &[u32]) -> StratumSignature {
        StratumSignature::new(a, b.to_vec()).unwrap()
    }

    /// The two-edge star of H(4;-2,-2,-2): edges 2->1 and 3->1 with gap 0
    /// between them at the center.
    fn star_tree() -> DecoratedTree {
        DecoratedTree::from_parts(
            vec![(2, 1), (3, 1)],
            &[
                (1, vec![(2, 0), (3, 2)]),
                (2, vec![(1, 2)]),
                (3, vec![(1, 2)]),
            ],
        )
        .unwrap()
    }

    /// The chain 3->2->1 of the same stratum.
    fn chain_tree() -> DecoratedTree {
        DecoratedTree::from_parts(
            vec![(2, 1), (3, 2)],
            &[
                (1, vec![(2, 2)]),
                (2, vec![(1, 1), (3, 1)]),
                (3, vec![(2, 2)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation_accepts_known_trees() {
        let s = sig(4, &[2, 2, 2]);
        star_tree().validate(&s).unwrap();
        chain_tree().validate(&s).unwrap();
    }

    #[test]
    fn validation_counts_half_edges() {
        let s = sig(4, &[2, 2, 2]);
        let bad = DecoratedTree::from_parts(
            vec![(2, 1), (3, 1)],
            &[
                (1, vec![(2, 1), (3, 2)]),
                (2, vec![(1, 2)]),
                (3, vec![(1, 2)]),
            ],
        )
        .unwrap();
        let err = bad.validate(&s).unwrap_err();
        assert!(matches!(err, Error::TreeInvalid(ref m) if m.contains("half-edges") || m.contains("parity")));
    }

    #[test]
    fn validation_checks_parity() {
        // two same-direction consecutive ends separated by 1 half-edge
        let bad = DecoratedTree::from_parts(
            vec![(2, 1), (3, 1)],
            &[
                (1, vec![(2, 1), (3, 1)]),
                (2, vec![(1, 2)]),
                (3, vec![(1, 2)]),
            ],
        )
        .unwrap();
        let err = bad.validate(&sig(4, &[2, 2, 2])).unwrap_err();
        assert!(matches!(err, Error::TreeInvalid(ref m) if m.contains("parity")));
    }

    #[test]
    fn canonical_key_matches_grammar() {
        assert_eq!(star_tree().canonical_key(), "1(<2(**)<3(**)**)");
        let round = DecoratedTree::decode("1(<2(**)<3(**)**)").unwrap();
        assert_eq!(round.canonical_key(), "1(<2(**)<3(**)**)");
    }

    #[test]
    fn decode_round_trip_chain() {
        let key = chain_tree().canonical_key();
        let round = DecoratedTree::decode(&key).unwrap();
        assert_eq!(round.canonical_key(), key);
        assert_eq!(round, chain_tree());
    }

    #[test]
    fn distinct_embeddings_get_distinct_keys() {
        let other_star = DecoratedTree::from_parts(
            vec![(2, 1), (3, 1)],
            &[
                (1, vec![(2, 2), (3, 0)]),
                (2, vec![(1, 2)]),
                (3, vec![(1, 2)]),
            ],
        )
        .unwrap();
        assert_ne!(star_tree().canonical_key(), other_star.canonical_key());
    }

    #[test]
    fn key_invariant_under_stored_rotation() {
        // same star with the center's cyclic order listed from the other end
        let rotated = DecoratedTree::from_parts(
            vec![(2, 1), (3, 1)],
            &[
                (1, vec![(3, 2), (2, 0)]),
                (2, vec![(1, 2)]),
                (3, vec![(1, 2)]),
            ],
        )
        .unwrap();
        assert_eq!(rotated.canonical_key(), star_tree().canonical_key());
    }

    #[test]
    fn edge_partitions() {
        let t = star_tree();
        let e31 = t.edges().iter().position(|&(s, _)| s == 3).unwrap();
        // source side {3} contains the last label, canonical form is {1,2}
        assert_eq!(t.edge_partition(e31).to_string(), "1,2");
        assert_eq!(t.edge_side_mask(e31), 0b100);
        let t2 = chain_tree();
        let e21 = t2.edges().iter().position(|&(s, d)| (s, d) == (2, 1)).unwrap();
        // source side of 2->1 is {2,3}; canonical representative is {1}
        assert_eq!(t2.edge_partition(e21).to_string(), "1");
        assert_eq!(t2.edge_side_mask(e21), 0b110);
    }

    #[test]
    fn corner_counts() {
        for t in [star_tree(), chain_tree()] {
            let corners = t.corners();
            assert_eq!(corners.len(), 10); // 2a + 2
            assert_eq!(corners.iter().filter(|c| c.legal_incoming).count(), 5); // a + 1
        }
    }

    #[test]
    fn contour_prev_inverts_next() {
        let t = chain_tree();
        let mut c = (0usize, 0usize, 0u32);
        for _ in 0..t.corner_count() {
            let n = t.contour_next(c);
            assert_eq!(t.contour_prev(n), c);
            c = n;
        }
        assert_eq!(c, (0, 0, 0));
    }

    #[test]
    fn detach_attach_round_trip() {
        for t in [star_tree(), chain_tree()] {
            for e in 0..t.edges().len() {
                let (src, dst) = t.detach(e);
                let glued = DecoratedTree::attach(&src, &dst);
                assert_eq!(glued.canonical_key(), t.canonical_key());
            }
        }
    }

    #[test]
    fn collapse_splits_on_zero_edges() {
        // wall lambda_2 = 0: residues (1, 0, -1)
        let psi = crate::stratum::ResidueConfig::from_integers(&[1, 0, -1])
            .unwrap()
            .sign_function();
        let pieces = star_tree().collapse(&psi);
        assert_eq!(pieces.len(), 2);
        let sizes: Vec<usize> = pieces.iter().map(|p| p.labels.len()).collect();
        assert!(sizes.contains(&1) && sizes.contains(&2));
        // nowhere-zero sign function: singleton forest
        let generic = crate::stratum::ResidueConfig::from_integers(&[3, -1, -2])
            .unwrap()
            .sign_function();
        assert_eq!(star_tree().collapse(&generic).len(), 1);
        assert!(star_tree().is_degenerate(&psi));
        assert!(!star_tree().is_degenerate(&generic));
        assert!(!chain_tree().is_degenerate(&psi));
    }

    #[test]
    fn compatibility_with_known_chamber() {
        let s = sig(4, &[2, 2, 2]);
        let psi = crate::stratum::ResidueConfig::parse("1,-1/4,-3/4").unwrap().sign_function();
        assert!(star_tree().is_compatible(&s, &psi));
        assert!(chain_tree().is_compatible(&s, &psi));
        assert!(!star_tree().is_compatible(&s, &psi.negated()));
        // a tree whose edge sits on a vanishing partial sum is not a smooth
        // fiber member
        let wall = crate::stratum::ResidueConfig::from_integers(&[1, 0, -1])
            .unwrap()
            .sign_function();
        assert!(!star_tree().is_compatible(&s, &wall));
        // but a zero of psi away from every edge partition is harmless: the
        // chain cut along {1,2} keeps nonzero sums on {1} and {2}
        let pair_wall = crate::stratum::ResidueConfig::from_integers(&[1, -1, 0])
            .unwrap()
            .sign_function();
        let chain_to_three = DecoratedTree::from_parts(
            vec![(2, 3), (1, 3)],
            &[
                (1, vec![(3, 2)]),
                (2, vec![(3, 2)]),
                (3, vec![(1, 0), (2, 2)]),
            ],
        )
        .unwrap();
        assert!(!chain_to_three.is_degenerate(&pair_wall));
    }

    #[test]
    fn collapse_with_two_dead_edges_gives_three_pieces() {
        // star with simple poles 2, 3, 4 on a center of order 2, over
        // residues (1, 0, 0, -1): the edges from 2 and from 3 both vanish
        let t = DecoratedTree::from_parts(
            vec![(2, 1), (3, 1), (4, 1)],
            &[
                (1, vec![(2, 0), (3, 0), (4, 2)]),
                (2, vec![(1, 0)]),
                (3, vec![(1, 0)]),
                (4, vec![(1, 0)]),
            ],
        )
        .unwrap();
        t.validate(&sig(3, &[2, 1, 1, 1])).unwrap();
        let psi = crate::stratum::ResidueConfig::from_integers(&[1, 0, 0, -1])
            .unwrap()
            .sign_function();
        let pieces = t.collapse(&psi);
        assert_eq!(pieces.len(), 3);
        let mut sizes: Vec<usize> = pieces.iter().map(|p| p.labels.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
        // restricted sign functions exist only on multi-vertex pieces
        for piece in &pieces {
            assert_eq!(piece.psi.is_some(), piece.labels.len() >= 2);
        }
    }

    #[test]
    fn single_vertex_key() {
        let t = DecoratedTree::single_vertex(5, 4);
        assert_eq!(t.canonical_key(), "5(****)");
        let back = DecoratedTree::decode("5(****)").unwrap();
        assert_eq!(back.half_edges_at(5), 4);
    }
}
