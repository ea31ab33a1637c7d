//! Stratum signatures, residue configurations, pole subsets and sign functions.
//!
//! All residue arithmetic is exact rational; sign determinations never go
//! through floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};

/// The signature (a; b_1, ..., b_p) of a genus-zero stratum with a single
/// zero of order `a` and labeled poles of orders `b_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    a: u32,
    b: Vec<u32>,
}

impl StratumSignature {
    /// Validates the partition constraint `sum(b) = a + 2` with `p >= 2` and
    /// every pole order at least one.
    pub fn new(a: u32, b: Vec<u32>) -> Result<Self> {
        if a == 0 {
            return Err(Error::BadOrder("zero order a must be positive".into()));
        }
        if b.len() < 2 {
            return Err(Error::BadOrder(format!("need p >= 2 poles, got {}", b.len())));
        }
        if let Some(j) = b.iter().position(|&bj| bj == 0) {
            return Err(Error::BadOrder(format!("pole {} has order 0", j + 1)));
        }
        let sum: i64 = b.iter().map(|&x| x as i64).sum();
        if sum != a as i64 + 2 {
            return Err(Error::SumMismatch { sum, expected: a as i64 + 2 });
        }
        Ok(StratumSignature { a, b })
    }

    pub fn zero_order(&self) -> u32 {
        self.a
    }

    pub fn pole_orders(&self) -> &[u32] {
        &self.b
    }

    /// Order of the pole with the given label (1-based).
    pub fn pole_order(&self, label: u32) -> u32 {
        self.b[label as usize - 1]
    }

    pub fn num_poles(&self) -> usize {
        self.b.len()
    }

    /// Resonance data `(c_I, d_I)` of a subset: its cardinality and
    /// `d_I = -1 + sum_{j in I} b_j`. Satisfies `d_I + d_{I^c} = a` and
    /// `c_I + c_{I^c} = p`.
    pub fn resonance_degree(&self, subset: &PoleSubset) -> (u32, u32) {
        let c = subset.len() as u32;
        let sum: u32 = subset.iter().map(|j| self.pole_order(j)).sum();
        (c, sum - 1)
    }
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({};", self.a)?;
        for (i, bj) in self.b.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "-{bj}")?;
        }
        write!(f, ")")
    }
}

/// A configuration of real residues, one exact rational per pole, summing
/// to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueConfig {
    lambda: Vec<BigRational>,
}

impl ResidueConfig {
    pub fn new(lambda: Vec<BigRational>) -> Result<Self> {
        if lambda.len() < 2 {
            return Err(Error::BadOrder("need at least two residues".into()));
        }
        let sum: BigRational = lambda.iter().cloned().sum();
        if !sum.is_zero() {
            return Err(Error::ResidueSum);
        }
        Ok(ResidueConfig { lambda })
    }

    pub fn from_integers(v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn residues(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn num_poles(&self) -> usize {
        self.lambda.len()
    }

    /// Partial sum over a subset of pole labels.
    pub fn partial_sum(&self, subset: &PoleSubset) -> BigRational {
        subset.iter().map(|j| self.lambda[j as usize - 1].clone()).sum()
    }

    /// The sign function induced by this configuration, computed exactly.
    pub fn sign_function(&self) -> SignFunction {
        let p = self.lambda.len();
        let signs = canonical_subsets(p)
            .iter()
            .map(|s| {
                let sum = self.partial_sum(s);
                if sum.is_zero() {
                    Sign::Zero
                } else if sum.is_positive() {
                    Sign::Pos
                } else {
                    Sign::Neg
                }
            })
            .collect();
        SignFunction { p, signs }
    }

    /// Parses `"1,-1/4,-3/4"`.
    pub fn parse(s: &str) -> Result<Self> {
        let lambda = s
            .split(',')
            .map(|tok| {
                BigRational::from_str(tok.trim())
                    .map_err(|e| Error::Parse(format!("residue `{tok}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambda)
    }
}

impl fmt::Display for ResidueConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.lambda.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Sign of a partial residue sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-" => Ok(Sign::Neg),
            "0" => Ok(Sign::Zero),
            "+" => Ok(Sign::Pos),
            other => Err(Error::Parse(format!("sign `{other}`"))),
        }
    }
}

/// A nonempty proper subset of the pole labels `{1..p}`, stored canonically:
/// of the pair `{I, I^c}` we keep the representative not containing `p`,
/// since both cut out the same resonance hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoleSubset {
    mask: u32,
    p: u8,
}

impl PoleSubset {
    /// Builds the canonical representative from any nonempty proper subset.
    pub fn new(p: usize, labels: &[u32]) -> Result<Self> {
        if !(2..=30).contains(&p) {
            return Err(Error::BadSubset(format!("p = {p} out of range")));
        }
        let mut mask = 0u32;
        for &l in labels {
            if l == 0 || l as usize > p {
                return Err(Error::BadSubset(format!("label {l} out of 1..{p}")));
            }
            mask |= 1 << (l - 1);
        }
        Self::from_mask(p, mask)
    }

    /// Builds from a bitmask over labels (bit j-1 = label j).
    pub fn from_mask(p: usize, mask: u32) -> Result<Self> {
        let full = (1u32 << p) - 1;
        if mask == 0 || mask == full {
            return Err(Error::BadSubset("subset must be nonempty and proper".into()));
        }
        if mask & !full != 0 {
            return Err(Error::BadSubset("label out of range".into()));
        }
        let canonical = if mask & (1 << (p - 1)) != 0 { full & !mask } else { mask };
        Ok(PoleSubset { mask: canonical, p: p as u8 })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn num_poles(&self) -> usize {
        self.p as usize
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, label: u32) -> bool {
        self.mask & (1 << (label - 1)) != 0
    }

    /// The complementary subset (not canonical: contains label `p`).
    pub fn complement_mask(&self) -> u32 {
        ((1u32 << self.p) - 1) & !self.mask
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        let mask = self.mask;
        (1..=self.p as u32).filter(move |l| mask & (1 << (l - 1)) != 0)
    }

    /// Whether the canonical representative or its complement is a single pole.
    pub fn has_singleton_side(&self) -> bool {
        self.len() == 1 || self.len() == self.p as usize - 1
    }

    /// Parses `"1,3"` as labels.
    pub fn parse(p: usize, s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|tok| tok.trim().parse::<u32>().map_err(|e| Error::Parse(format!("label `{tok}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, &labels)
    }
}

impl fmt::Display for PoleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// All canonical subsets of `{1..p}` in ascending bitmask order; there are
/// `2^(p-1) - 1` of them and the order is the index used throughout.
pub fn canonical_subsets(p: usize) -> Vec<PoleSubset> {
    assert!(p >= 2);
    (1..(1u32 << (p - 1))).map(|mask| PoleSubset { mask, p: p as u8 }).collect()
}

/// Index of a canonical subset in the `canonical_subsets` order.
pub fn canonical_index(subset: &PoleSubset) -> usize {
    subset.mask as usize - 1
}

/// A total sign assignment on the canonical subsets. Querying a
/// non-canonical subset returns the negated sign of its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignFunction {
    p: usize,
    signs: Vec<Sign>,
}

impl SignFunction {
    pub fn new(p: usize, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != (1 << (p - 1)) - 1 {
            return Err(Error::BadSubset(format!(
                "sign function needs {} entries for p = {p}, got {}",
                (1 << (p - 1)) - 1,
                signs.len()
            )));
        }
        Ok(SignFunction { p, signs })
    }

    pub fn num_poles(&self) -> usize {
        self.p
    }

    pub fn sign(&self, subset: &PoleSubset) -> Sign {
        self.signs[canonical_index(subset)]
    }

    /// Sign of an arbitrary nonempty proper subset given as a bitmask.
    pub fn sign_of_mask(&self, mask: u32) -> Sign {
        let full = (1u32 << self.p) - 1;
        debug_assert!(mask != 0 && mask != full);
        if mask & (1 << (self.p - 1)) != 0 {
            self.signs[(full & !mask) as usize - 1].negate()
        } else {
            self.signs[mask as usize - 1]
        }
    }

    /// The canonical subsets on which the sign vanishes.
    pub fn zero_set(&self) -> Vec<PoleSubset> {
        canonical_subsets(self.p)
            .into_iter()
            .filter(|s| self.sign(s) == Sign::Zero)
            .collect()
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.signs.iter().all(|&s| s != Sign::Zero)
    }

    /// Negates every sign (the antipodal chamber or face).
    pub fn negated(&self) -> SignFunction {
        SignFunction { p: self.p, signs: self.signs.iter().map(|s| s.negate()).collect() }
    }

    /// Copy with the sign of one canonical subset replaced.
    pub fn with_sign(&self, subset: &PoleSubset, sign: Sign) -> SignFunction {
        let mut signs = self.signs.clone();
        signs[canonical_index(subset)] = sign;
        SignFunction { p: self.p, signs }
    }

    /// The standard chamber: positive on a subset iff it contains label 1.
    pub fn standard(p: usize) -> SignFunction {
        let signs = canonical_subsets(p)
            .iter()
            .map(|s| if s.contains(1) { Sign::Pos } else { Sign::Neg })
            .collect();
        SignFunction { p, signs }
    }

    /// Compact text form `1=+;2=-;1,2=+` over canonical subsets.
    pub fn key(&self) -> String {
        canonical_subsets(self.p)
            .iter()
            .map(|s| format!("{}={}", s, self.sign(s)))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the `key` format; entries may use non-canonical subsets, and
    /// must jointly cover every canonical subset exactly once.
    pub fn parse(p: usize, s: &str) -> Result<Self> {
        let mut map: BTreeMap<usize, Sign> = BTreeMap::new();
        for entry in s.split(';') {
            let (subset_s, sign_s) = entry
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("sign entry `{entry}`")))?;
            let labels = subset_s
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("label `{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let mut mask = 0u32;
            for &l in &labels {
                if l == 0 || l as usize > p {
                    return Err(Error::BadSubset(format!("label {l} out of 1..{p}")));
                }
                mask |= 1 << (l - 1);
            }
            let canonical = PoleSubset::from_mask(p, mask)?;
            let mut sign: Sign = sign_s.parse()?;
            if mask != canonical.mask() {
                sign = sign.negate();
            }
            if map.insert(canonical_index(&canonical), sign).is_some() {
                return Err(Error::Parse(format!("duplicate subset `{subset_s}`")));
            }
        }
        if map.len() != (1 << (p - 1)) - 1 {
            return Err(Error::Parse(format!(
                "sign map covers {} of {} canonical subsets",
                map.len(),
                (1 << (p - 1)) - 1
            )));
        }
        Ok(SignFunction { p, signs: map.into_values().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn signature_validation() {
        assert!(StratumSignature::new(4, vec![2, 2, 2]).is_ok());
        assert!(StratumSignature::new(6, vec![2, 3, 3]).is_ok());
        assert_eq!(
            StratumSignature::new(4, vec![2, 2, 1]),
            Err(Error::SumMismatch { sum: 5, expected: 6 })
        );
        assert!(matches!(StratumSignature::new(3, vec![5]), Err(Error::BadOrder(_))));
        assert!(matches!(StratumSignature::new(2, vec![0, 4]), Err(Error::BadOrder(_))));
    }

    #[test]
    fn resonance_degrees() {
        let sig = StratumSignature::new(4, vec![2, 2, 2]).unwrap();
        let i2 = PoleSubset::new(3, &[2]).unwrap();
        assert_eq!(sig.resonance_degree(&i2), (1, 1));

        let sig = StratumSignature::new(6, vec![2, 3, 3]).unwrap();
        let i1 = PoleSubset::new(3, &[1]).unwrap();
        assert_eq!(sig.resonance_degree(&i1), (1, 1));
        // complement identity: I = {1..p-1} has (p-1, a+1-b_p)
        let sig = StratumSignature::new(7, vec![3, 2, 4]).unwrap();
        let i = PoleSubset::new(3, &[1, 2]).unwrap();
        assert_eq!(sig.resonance_degree(&i), (2, 7 + 1 - 4));
    }

    #[test]
    fn canonical_subset_order() {
        let subs = canonical_subsets(3);
        let shown: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, vec!["1", "2", "1,2"]);
        assert_eq!(canonical_subsets(2).len(), 1);
        assert_eq!(canonical_subsets(4).len(), 7);
    }

    #[test]
    fn canonical_rep_excludes_last_label() {
        let s = PoleSubset::new(3, &[1, 3]).unwrap();
        assert_eq!(s.to_string(), "2");
        let t = PoleSubset::new(3, &[2]).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn sign_function_of_known_chamber() {
        // residues (1, -1/4, -3/4)
        let res = ResidueConfig::new(vec![rat(1, 1), rat(-1, 4), rat(-3, 4)]).unwrap();
        let psi = res.sign_function();
        let s = |labels: &[u32]| psi.sign(&PoleSubset::new(3, labels).unwrap());
        assert_eq!(s(&[1]), Sign::Pos);
        assert_eq!(s(&[2]), Sign::Neg);
        assert_eq!(psi.sign_of_mask(0b100), Sign::Neg); // {3}
        assert_eq!(s(&[1, 2]), Sign::Pos);
        assert_eq!(psi.sign_of_mask(0b101), Sign::Pos); // {1,3}
    }

    #[test]
    fn sign_function_on_wall() {
        let res = ResidueConfig::from_integers(&[1, 0, -1]).unwrap();
        let psi = res.sign_function();
        assert_eq!(psi.sign(&PoleSubset::new(3, &[2]).unwrap()), Sign::Zero);
        assert_eq!(psi.sign_of_mask(0b101), Sign::Zero); // {1,3}
        assert_eq!(psi.sign(&PoleSubset::new(3, &[1]).unwrap()), Sign::Pos);
        assert_eq!(psi.sign_of_mask(0b100), Sign::Neg);
        assert_eq!(psi.zero_set().len(), 1);
    }

    #[test]
    fn two_pole_configuration() {
        let res = ResidueConfig::from_integers(&[1, -1]).unwrap();
        let psi = res.sign_function();
        assert_eq!(psi.sign(&PoleSubset::new(2, &[1]).unwrap()), Sign::Pos);
        assert_eq!(psi.signs.len(), 1);
    }

    #[test]
    fn residue_parsing() {
        let res = ResidueConfig::parse("1,-1/4,-3/4").unwrap();
        assert_eq!(res.residues()[2], rat(-3, 4));
        assert!(ResidueConfig::parse("1,1").is_err());
    }

    #[test]
    fn sign_map_round_trip() {
        let psi = SignFunction::standard(3);
        let again = SignFunction::parse(3, &psi.key()).unwrap();
        assert_eq!(psi, again);
        // non-canonical entry gets negated onto the canonical representative
        let via_complement = SignFunction::parse(3, "1=+;2=-;3=-").unwrap();
        assert_eq!(via_complement, psi);
    }

    proptest! {
        #[test]
        fn degrees_of_complements_sum(b in proptest::collection::vec(1u32..5, 2..6), mask in 1u32..32) {
            let a: u32 = b.iter().sum::<u32>() - 2;
            if a == 0 { return Ok(()); }
            let p = b.len();
            let sig = StratumSignature::new(a, b).unwrap();
            let full = (1u32 << p) - 1;
            let mask = mask & full;
            if mask == 0 || mask == full { return Ok(()); }
            let s = PoleSubset::from_mask(p, mask).unwrap();
            let t = PoleSubset::from_mask(p, full & !mask).unwrap();
            prop_assert_eq!(s, t);
            let (c, d) = sig.resonance_degree(&s);
            prop_assert!((c as usize) < p);
            prop_assert!(d <= a);
            // the two sides of the partition have degrees summing to a
            let side = |m: u32| -> (u32, u32) {
                let cc = m.count_ones();
                let dd: u32 = (1..=p as u32)
                    .filter(|l| m & (1 << (l - 1)) != 0)
                    .map(|l| sig.pole_order(l))
                    .sum::<u32>() - 1;
                (cc, dd)
            };
            let (c1, d1) = side(mask);
            let (c2, d2) = side(full & !mask);
            prop_assert_eq!(d1 + d2, a);
            prop_assert_eq!(c1 + c2, p as u32);
        }

        #[test]
        fn signs_constant_on_rays(v in proptest::collection::vec(-9i64..9, 2..6), num in 1i64..7, den in 1i64..7) {
            let mut v = v;
            let tail: i64 = v.iter().skip(1).sum();
            v[0] = -tail;
            let res = ResidueConfig::from_integers(&v).unwrap();
            let scale = rat(num, den);
            let scaled = ResidueConfig::new(
                res.residues().iter().map(|x| x * &scale).collect()
            ).unwrap();
            prop_assert_eq!(res.sign_function(), scaled.sign_function());
            let negated = ResidueConfig::new(
                res.residues().iter().map(|x| -x).collect()
            ).unwrap();
            prop_assert_eq!(res.sign_function().negated(), negated.sign_function());
        }
    }

    #[test]
    fn rational_display_round_trips() {
        let r = rat(-3, 4);
        assert_eq!(BigRational::from_str(&r.to_string()).unwrap(), r);
        assert!(BigRational::one().is_positive());
    }
}
