//! Permutations of `{0..n-1}` and permutation groups at small degree.
//!
//! Group orders are computed with a stabilizer chain over base points
//! `0, 1, 2, ...`, exact in big integers.

use std::collections::HashMap;
use std::fmt;

use num::BigUint;

use crate::error::{Error, Result};

/// A permutation of `{0..n-1}`, stored as the image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::BadOrder("not a bijection".into()));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition acting left-to-right on points: `(a.then(b))(x) = b(a(x))`.
    pub fn then(&self, b: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), b.degree());
        Permutation { images: self.images.iter().map(|&x| b.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x];
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// `true` for even permutations.
    pub fn is_even(&self) -> bool {
        let cycles = self.cycle_type().len();
        (self.images.len() - cycles).is_multiple_of(2)
    }

    /// Disjoint-cycle notation over point indices; fixed points omitted,
    /// identity rendered as `()`.
    pub fn cycle_notation(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&x.to_string());
                first = false;
                x = self.images[x];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parses `(0 2 5)(1 4)`; `()` is the identity.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(Permutation { images });
        }
        for cycle_s in s.split(')') {
            let cycle_s = cycle_s.trim();
            if cycle_s.is_empty() {
                continue;
            }
            let cycle_s = cycle_s
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in `{cycle_s}`")))?;
            let points = cycle_s
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("point `{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            for w in points.windows(2) {
                images[w[0]] = w[1];
            }
            if let (Some(&last), Some(&first)) = (points.last(), points.first()) {
                images[last] = first;
            }
        }
        Permutation::new(images)
    }

    /// The cycle `(points[0] points[1] ...)` at the given degree.
    pub fn from_cycle(n: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for w in points.windows(2) {
            images[w[0]] = w[1];
        }
        if points.len() > 1 {
            images[points[points.len() - 1]] = points[0];
        }
        Permutation::new(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

/// Identification of a permutation group at small degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Alternating(usize),
    Symmetric(usize),
    /// The transitive degree-6 action of the symmetric group on five
    /// letters: order 120, point stabilizer of order 20.
    ExoticS5InS6,
    Other { order: BigUint, transitive: bool },
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "Cyclic({n})"),
            GroupKind::Alternating(n) => write!(f, "Alternating({n})"),
            GroupKind::Symmetric(n) => write!(f, "Symmetric({n})"),
            GroupKind::ExoticS5InS6 => write!(f, "ExoticS5inS6"),
            GroupKind::Other { order, transitive } => {
                write!(f, "Other(order={order}, transitive={transitive})")
            }
        }
    }
}

/// A permutation group given by generators of a common degree.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

struct ChainLevel {
    base: usize,
    /// Residues stuck at this level: they stabilize all shallower bases and
    /// move this one.
    generators: Vec<Permutation>,
    transversal: HashMap<usize, Permutation>,
}

struct Chain {
    degree: usize,
    levels: Vec<ChainLevel>,
}

impl Chain {
    /// Quotients `g` by transversal representatives from `from` downward;
    /// returns the residue and the level where stripping stopped.
    fn strip(&self, g: Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g;
        let mut lvl = from;
        while lvl < self.levels.len() {
            if h.is_identity() {
                return (h, lvl);
            }
            let image = h.apply(self.levels[lvl].base);
            match self.levels[lvl].transversal.get(&image) {
                Some(rep) => {
                    h = h.then(&rep.inverse());
                    lvl += 1;
                }
                None => return (h, lvl),
            }
        }
        (h, lvl)
    }

    /// Records a stuck residue, creating the level if needed.
    fn lodge(&mut self, h: Permutation, lvl: usize) {
        if h.is_identity() {
            return;
        }
        if lvl == self.levels.len() {
            let base = (0..self.degree).find(|&x| h.apply(x) != x).expect("non-identity");
            let mut transversal = HashMap::new();
            transversal.insert(base, Permutation::identity(self.degree));
            self.levels.push(ChainLevel { base, generators: Vec::new(), transversal });
        }
        self.levels[lvl].generators.push(h);
    }

    /// Recomputes the orbit/transversal at one level under the generators
    /// of that level and every deeper one, returning the non-identity
    /// Schreier generators.
    fn close_orbit(&mut self, depth: usize) -> Vec<Permutation> {
        let base = self.levels[depth].base;
        let gens: Vec<Permutation> = self
            .levels
            .iter()
            .skip(depth)
            .flat_map(|l| l.generators.iter().cloned())
            .collect();
        let mut transversal = HashMap::new();
        transversal.insert(base, Permutation::identity(self.degree));
        let mut queue = vec![base];
        let mut schreier = Vec::new();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            let rep_x = transversal[&x].clone();
            for g in &gens {
                let y = g.apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = transversal.entry(y) {
                    e.insert(rep_x.then(g));
                    queue.push(y);
                } else {
                    // rep_x * g * rep_y^{-1} stabilizes the base
                    let s = rep_x.then(g).then(&transversal[&y].inverse());
                    if !s.is_identity() {
                        schreier.push(s);
                    }
                }
            }
        }
        self.levels[depth].transversal = transversal;
        schreier
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::BadOrder("generator degree mismatch".into()));
        }
        let mut generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        generators.sort();
        generators.dedup();
        Ok(PermGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn all_generators_even(&self) -> bool {
        self.generators.iter().all(|g| g.is_even())
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if a.then(b) != b.then(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Orbit of a point under the generators.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            i += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Exact order via a stabilizer chain with base points chosen as the
    /// first moved point of each stuck residue. The subgroup at level `i` is
    /// generated by every residue stuck at level `i` or deeper; levels are
    /// verified deepest-first, dropping back down whenever a Schreier
    /// generator fails to strip.
    pub fn order(&self) -> BigUint {
        let mut chain = Chain { degree: self.degree, levels: Vec::new() };
        for g in &self.generators {
            let (h, lvl) = chain.strip(g.clone(), 0);
            chain.lodge(h, lvl);
        }
        if chain.levels.is_empty() {
            return BigUint::from(1u32);
        }
        let mut i = chain.levels.len() - 1;
        'outer: loop {
            let schreier = chain.close_orbit(i);
            for s in schreier {
                let (h, lvl) = chain.strip(s, i + 1);
                if !h.is_identity() {
                    chain.lodge(h, lvl);
                    i = lvl;
                    continue 'outer;
                }
            }
            if i == 0 {
                break;
            }
            i -= 1;
        }
        chain
            .levels
            .iter()
            .map(|l| BigUint::from(l.transversal.len()))
            .product()
    }

    /// Brute-force element count by closure; for cross-checking at small
    /// orders only.
    pub fn order_by_closure(&self, cap: usize) -> Option<usize> {
        let mut elems: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        let mut queue = vec![Permutation::identity(self.degree)];
        elems.insert(queue[0].images().to_vec());
        while let Some(g) = queue.pop() {
            for h in &self.generators {
                let gh = g.then(h);
                if elems.insert(gh.images().to_vec()) {
                    if elems.len() > cap {
                        return None;
                    }
                    queue.push(gh);
                }
            }
        }
        Some(elems.len())
    }

    /// Structural identification: cyclic, alternating, symmetric, the exotic
    /// degree-6 action of order 120, or a report of order and transitivity.
    /// Cyclic is tested first so that regular cyclic groups of degree 2 and
    /// 3 are not reported as symmetric/alternating.
    pub fn identify(&self) -> GroupKind {
        let n = self.degree;
        let order = self.order();
        let transitive = self.is_transitive();
        let n_big = BigUint::from(n.max(1));
        if order == n_big && transitive && self.is_abelian() {
            return GroupKind::Cyclic(n);
        }
        let fact = factorial_big(n);
        if order == fact {
            return GroupKind::Symmetric(n);
        }
        if n >= 2 && order == &fact / 2u32 && self.all_generators_even() {
            return GroupKind::Alternating(n);
        }
        if n == 6 && order == BigUint::from(120u32) && transitive {
            return GroupKind::ExoticS5InS6;
        }
        GroupKind::Other { order, transitive }
    }

    /// Point stabilizer order, `|G| / |orbit|` for transitive groups.
    pub fn point_stabilizer_order(&self) -> BigUint {
        let orbit = self.orbit(0).len();
        self.order() / BigUint::from(orbit)
    }
}

pub fn factorial_big(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, pts: &[usize]) -> Permutation {
        Permutation::from_cycle(n, pts).unwrap()
    }

    #[test]
    fn cycle_types_and_parity() {
        let id = Permutation::identity(4);
        assert_eq!(id.cycle_type(), vec![1, 1, 1, 1]);
        assert!(id.is_even());
        let three = cyc(4, &[0, 1, 2]);
        assert_eq!(three.cycle_type(), vec![3, 1]);
        assert!(three.is_even());
        let four = cyc(6, &[0, 1, 2, 3]);
        assert_eq!(four.cycle_type(), vec![4, 1, 1]);
        assert!(!four.is_even());
        let double = cyc(4, &[0, 1]).then(&cyc(4, &[2, 3]));
        assert_eq!(double.cycle_type(), vec![2, 2]);
        assert!(double.is_even());
    }

    #[test]
    fn notation_round_trip() {
        let g = cyc(6, &[0, 2, 5]).then(&cyc(6, &[1, 4]));
        assert_eq!(g.cycle_notation(), "(0 2 5)(1 4)");
        assert_eq!(Permutation::parse(6, "(0 2 5)(1 4)").unwrap(), g);
        assert_eq!(Permutation::parse(3, "()").unwrap(), Permutation::identity(3));
    }

    #[test]
    fn exotic_cover_generators_have_order_120() {
        // (A B C D), (B C D E F), (A E F B) on six letters
        let g = PermGroup::new(
            6,
            vec![cyc(6, &[0, 1, 2, 3]), cyc(6, &[1, 2, 3, 4, 5]), cyc(6, &[0, 4, 5, 1])],
        )
        .unwrap();
        assert_eq!(g.order(), BigUint::from(120u32));
        assert!(g.is_transitive());
        assert_eq!(g.identify(), GroupKind::ExoticS5InS6);
        assert_eq!(g.point_stabilizer_order(), BigUint::from(20u32));
    }

    #[test]
    fn symmetric_and_alternating() {
        let s4 = PermGroup::new(4, vec![cyc(4, &[0, 1]), cyc(4, &[0, 1, 2, 3])]).unwrap();
        assert_eq!(s4.order(), BigUint::from(24u32));
        assert_eq!(s4.identify(), GroupKind::Symmetric(4));
        let a5 = PermGroup::new(5, vec![cyc(5, &[0, 1, 2]), cyc(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert_eq!(a5.identify(), GroupKind::Alternating(5));
    }

    #[test]
    fn cyclic_identification() {
        let z5 = PermGroup::new(5, vec![cyc(5, &[0, 1, 2, 3, 4])]).unwrap();
        assert_eq!(z5.identify(), GroupKind::Cyclic(5));
        let z2 = PermGroup::new(2, vec![cyc(2, &[0, 1])]).unwrap();
        assert_eq!(z2.identify(), GroupKind::Cyclic(2));
        let trivial = PermGroup::new(3, vec![]).unwrap();
        assert!(!trivial.is_transitive());
        assert_eq!(trivial.order(), BigUint::from(1u32));
    }

    #[test]
    fn chain_order_matches_closure() {
        let gens = vec![cyc(7, &[0, 1, 2, 3]), cyc(7, &[2, 3, 4, 5, 6])];
        let g = PermGroup::new(7, gens).unwrap();
        let closure = g.order_by_closure(20_000).unwrap();
        assert_eq!(g.order(), BigUint::from(closure));
    }

    #[test]
    fn standard_generating_pair_gives_full_symmetric() {
        for n in 2..=6 {
            let g = PermGroup::new(
                n,
                vec![cyc(n, &[0, 1]), cyc(n, &(0..n).collect::<Vec<_>>())],
            )
            .unwrap();
            assert_eq!(g.order(), factorial_big(n));
        }
    }
}
