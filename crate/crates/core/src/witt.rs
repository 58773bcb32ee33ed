//! Big Witt vectors over finite divisor-closed truncation sets, with exact
//! ring operations through ghost coordinates.
//!
//! The ghost map sends coordinates (a_d) to w_n = sum over d | n of
//! d * a_d^(n/d). It is injective over the integers, and componentwise ring
//! operations on ghost vectors pull back to integral coordinates; the
//! pull-back solves for a_n by exact division, and a division failure is an
//! IntegralityViolation (an internal assertion, not a reachable state for
//! inputs produced by the public constructors).
//!
//! Frobenius on ghosts reads off every s-th component; Verschiebung shifts
//! coordinates up by a factor of s and multiplies ghosts by s.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};

/// Cap on truncation-set entries.
pub const MAX_TRUNCATION_INDEX: u64 = 1_000_000;
/// Cap on truncation-set size.
pub const MAX_TRUNCATION_SIZE: usize = 256;

/// Finite, divisor-closed set of positive integers; always contains 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncationSet {
    elems: Vec<u64>,
}

impl fmt::Debug for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncationSet{:?}", self.elems)
    }
}

impl TruncationSet {
    /// All divisors of r.
    pub fn divisors_of(r: u64) -> Result<TruncationSet> {
        if r == 0 {
            return Err(Error::Parse("divisors-of needs a positive integer".into()));
        }
        if r > MAX_TRUNCATION_INDEX {
            return Err(Error::TruncationCapExceeded(format!(
                "{r} exceeds the index cap {MAX_TRUNCATION_INDEX}"
            )));
        }
        let mut elems = Vec::new();
        let mut d = 1u64;
        while d * d <= r {
            if r % d == 0 {
                elems.push(d);
                if d != r / d {
                    elems.push(r / d);
                }
            }
            d += 1;
        }
        elems.sort_unstable();
        Self::from_sorted(elems)
    }

    /// Builds from arbitrary entries, validating divisor-closure.
    pub fn from_elems(iter: impl IntoIterator<Item = u64>) -> Result<TruncationSet> {
        let mut elems: Vec<u64> = iter.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&n| n == 0) {
            return Err(Error::Parse("truncation sets contain positive integers".into()));
        }
        for &n in &elems {
            let mut d = 1u64;
            while d * d <= n {
                if n % d == 0 {
                    if elems.binary_search(&d).is_err() {
                        return Err(Error::NotDivisorClosed { n, d });
                    }
                    let q = n / d;
                    if elems.binary_search(&q).is_err() {
                        return Err(Error::NotDivisorClosed { n, d: q });
                    }
                }
                d += 1;
            }
        }
        Self::from_sorted(elems)
    }

    fn from_sorted(elems: Vec<u64>) -> Result<TruncationSet> {
        if elems.is_empty() || elems[0] != 1 {
            return Err(Error::Parse("a truncation set must contain 1".into()));
        }
        if elems.len() > MAX_TRUNCATION_SIZE {
            return Err(Error::TruncationCapExceeded(format!(
                "{} entries exceed the size cap {MAX_TRUNCATION_SIZE}",
                elems.len()
            )));
        }
        if *elems.last().unwrap() > MAX_TRUNCATION_INDEX {
            return Err(Error::TruncationCapExceeded(format!(
                "{} exceeds the index cap {MAX_TRUNCATION_INDEX}",
                elems.last().unwrap()
            )));
        }
        Ok(TruncationSet { elems })
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elems.binary_search(&n).is_ok()
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.elems.iter().all(|&n| other.contains(n))
    }

    /// Quotient set S/s = { n : s*n in S }. Errors when empty (s not in S).
    pub fn quotient(&self, s: u64) -> Result<TruncationSet> {
        if s == 0 {
            return Err(Error::Parse("division by zero index".into()));
        }
        let elems: Vec<u64> = self
            .elems
            .iter()
            .filter(|&&n| n % s == 0)
            .map(|&n| n / s)
            .collect();
        if elems.is_empty() {
            return Err(Error::EmptyTruncation { s });
        }
        Self::from_sorted(elems)
    }

    /// Parses "divisors-of:<r>" or "{1,2,3}".
    pub fn parse(s: &str) -> Result<TruncationSet> {
        let s = s.trim();
        if let Some(r) = s.strip_prefix("divisors-of:") {
            let r: u64 = r
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad divisors-of argument {r:?}")))?;
            return TruncationSet::divisors_of(r);
        }
        if let Some(body) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let mut elems = Vec::new();
            for tok in body.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let n: u64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad truncation entry {tok:?}")))?;
                elems.push(n);
            }
            return TruncationSet::from_elems(elems);
        }
        Err(Error::Parse(format!(
            "truncation set must be 'divisors-of:<r>' or '{{1,2,...}}', got {s:?}"
        )))
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.elems.iter().map(|n| n.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Witt vector: coordinates indexed by a truncation set; zeros not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    set: TruncationSet,
    coords: BTreeMap<u64, BigInt>,
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittVector({} on {})", self.display(), self.set.display())
    }
}

/// Ghost vector: one integer per truncation-set index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    set: TruncationSet,
    values: BTreeMap<u64, BigInt>,
}

impl GhostVector {
    pub fn new(set: TruncationSet, values: BTreeMap<u64, BigInt>) -> Result<GhostVector> {
        if values.len() != set.len() || !values.keys().all(|&n| set.contains(n)) {
            return Err(Error::Parse("ghost vector must cover the truncation set".into()));
        }
        Ok(GhostVector { set, values })
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn value(&self, n: u64) -> &BigInt {
        &self.values[&n]
    }

    pub fn values(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.values.iter().map(|(&n, v)| (n, v))
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .set
            .elems()
            .iter()
            .map(|&n| format!("{}:{}", n, self.values[&n]))
            .collect();
        parts.join(",")
    }
}

impl WittVector {
    pub fn zero(set: TruncationSet) -> WittVector {
        WittVector { set, coords: BTreeMap::new() }
    }

    /// The multiplicative unit: coordinate 1 at index 1.
    pub fn unit(set: TruncationSet) -> WittVector {
        let mut coords = BTreeMap::new();
        coords.insert(1, BigInt::one());
        WittVector { set, coords }
    }

    pub fn from_coords(
        set: TruncationSet,
        coords: impl IntoIterator<Item = (u64, BigInt)>,
    ) -> Result<WittVector> {
        let mut map = BTreeMap::new();
        for (n, v) in coords {
            if !set.contains(n) {
                return Err(Error::IndexNotInTruncation { index: n });
            }
            if !v.is_zero() {
                map.insert(n, v);
            }
        }
        Ok(WittVector { set, coords: map })
    }

    /// Image of 1 under the additive shift by s: coordinate 1 at index s.
    pub fn v_one(s: u64, set: &TruncationSet) -> Result<WittVector> {
        if !set.contains(s) {
            return Err(Error::IndexNotInTruncation { index: s });
        }
        let mut coords = BTreeMap::new();
        coords.insert(s, BigInt::one());
        Ok(WittVector { set: set.clone(), coords })
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn coord(&self, n: u64) -> BigInt {
        self.coords.get(&n).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coords(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.coords.iter().map(|(&n, v)| (n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Ghost components w_n = sum over d | n of d * a_d^(n/d).
    pub fn ghost(&self) -> GhostVector {
        let mut values = BTreeMap::new();
        for &n in self.set.elems() {
            let mut w = BigInt::zero();
            for (&d, a) in &self.coords {
                if n % d == 0 {
                    let e = (n / d) as u32;
                    w += BigInt::from(d) * a.pow(e);
                }
            }
            values.insert(n, w);
        }
        GhostVector { set: self.set.clone(), values }
    }

    /// Inverts the ghost map by solving for coordinates from the bottom up;
    /// errors with IntegralityViolation when a division is not exact.
    pub fn from_ghost(ghost: &GhostVector) -> Result<WittVector> {
        let mut coords: BTreeMap<u64, BigInt> = BTreeMap::new();
        for &n in ghost.set.elems() {
            let mut rest = BigInt::zero();
            for (&d, a) in &coords {
                if d != n && n % d == 0 {
                    let e = (n / d) as u32;
                    rest += BigInt::from(d) * a.pow(e);
                }
            }
            let num = ghost.values[&n].clone() - rest;
            let (q, r) = num.div_rem(&BigInt::from(n));
            if !r.is_zero() {
                return Err(Error::IntegralityViolation(format!(
                    "ghost component at index {n} is not realizable over the integers"
                )));
            }
            if !q.is_zero() {
                coords.insert(n, q);
            }
        }
        Ok(WittVector { set: ghost.set.clone(), coords })
    }

    fn check_same_set(&self, rhs: &WittVector) -> Result<()> {
        if self.set == rhs.set {
            Ok(())
        } else {
            Err(Error::TruncationMismatch)
        }
    }

    fn transport2(&self, rhs: &WittVector, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<WittVector> {
        self.check_same_set(rhs)?;
        let ga = self.ghost();
        let gb = rhs.ghost();
        let values = self
            .set
            .elems()
            .iter()
            .map(|&n| (n, f(&ga.values[&n], &gb.values[&n])))
            .collect();
        WittVector::from_ghost(&GhostVector { set: self.set.clone(), values })
    }

    pub fn add(&self, rhs: &WittVector) -> Result<WittVector> {
        self.transport2(rhs, |a, b| a + b)
    }

    pub fn mul(&self, rhs: &WittVector) -> Result<WittVector> {
        self.transport2(rhs, |a, b| a * b)
    }

    pub fn neg(&self) -> WittVector {
        let ga = self.ghost();
        let values = self.set.elems().iter().map(|&n| (n, -ga.values[&n].clone())).collect();
        WittVector::from_ghost(&GhostVector { set: self.set.clone(), values })
            .expect("negation preserves integrality")
    }

    pub fn sub(&self, rhs: &WittVector) -> Result<WittVector> {
        self.transport2(rhs, |a, b| a - b)
    }

    /// Additive integer multiple k*x (k copies of x added together).
    pub fn scale(&self, k: &BigInt) -> WittVector {
        let ga = self.ghost();
        let values = self.set.elems().iter().map(|&n| (n, k * &ga.values[&n])).collect();
        WittVector::from_ghost(&GhostVector { set: self.set.clone(), values })
            .expect("integer scaling preserves integrality")
    }

    /// Frobenius: lands on S/s, with ghost_n(F_s x) = ghost_{s n}(x).
    pub fn frobenius(&self, s: u64) -> Result<WittVector> {
        if s == 0 {
            return Err(Error::Parse("frobenius index must be positive".into()));
        }
        let target = self.set.quotient(s)?;
        let ga = self.ghost();
        let values = target
            .elems()
            .iter()
            .map(|&n| (n, ga.values[&(s * n)].clone()))
            .collect();
        WittVector::from_ghost(&GhostVector { set: target, values })
    }

    /// Verschiebung into `target`: requires target/s == set of self; the
    /// coordinate at s*n is the input coordinate at n, all others zero.
    pub fn verschiebung(&self, s: u64, target: &TruncationSet) -> Result<WittVector> {
        if s == 0 {
            return Err(Error::Parse("verschiebung index must be positive".into()));
        }
        let expected = target.quotient(s)?;
        if expected != self.set {
            return Err(Error::TruncationMismatch);
        }
        let coords = self.coords.iter().map(|(&n, v)| (s * n, v.clone())).collect();
        Ok(WittVector { set: target.clone(), coords })
    }

    /// Forgets coordinates outside `target`, which must be a subset.
    pub fn restrict(&self, target: &TruncationSet) -> Result<WittVector> {
        if !target.is_subset_of(&self.set) {
            return Err(Error::NotASubset);
        }
        let coords = self
            .coords
            .iter()
            .filter(|(&n, _)| target.contains(n))
            .map(|(&n, v)| (n, v.clone()))
            .collect();
        Ok(WittVector { set: target.clone(), coords })
    }

    /// Parses "n1:a1,n2:a2,..." (subset of the set; omitted indices are 0),
    /// or the literal "0" for the zero vector.
    pub fn parse(s: &str, set: &TruncationSet) -> Result<WittVector> {
        let s = s.trim();
        if s == "0" {
            return Ok(WittVector::zero(set.clone()));
        }
        let mut coords = BTreeMap::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (n, a) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected index:value, got {part:?}")))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {n:?}")))?;
            if !set.contains(n) {
                return Err(Error::IndexNotInTruncation { index: n });
            }
            let a: BigInt = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value {a:?}")))?;
            if coords.contains_key(&n) {
                return Err(Error::Parse(format!("index {n} given twice")));
            }
            if !a.is_zero() {
                coords.insert(n, a);
            }
        }
        Ok(WittVector { set: set.clone(), coords })
    }

    /// Prints every index of the set in order, e.g. "1:0,2:1,4:0";
    /// `parse(display(x))` reproduces x bit-exactly.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .set
            .elems()
            .iter()
            .map(|&n| format!("{}:{}", n, self.coord(n)))
            .collect();
        parts.join(",")
    }
}
