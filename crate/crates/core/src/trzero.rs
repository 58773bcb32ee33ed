//! Level-indexed free abelian groups on symbols V_t([g]) with t dividing the
//! level, together with the restriction, Frobenius, and Verschiebung
//! operators and their composition laws.
//!
//! Basis action, writing d = gcd(s, t) and [g] for a conjugacy class:
//!   R_s(V_t([g]))  =  V_t([g]) one level down when t still divides, else 0
//!   F_s(V_t([g]))  =  d * V_{ t/d }([g^{s/d}])
//!   V_s(V_t([g]))  =  V_{ st }([g])
//!
//! Everything is exact; coefficients are arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::groupring::HH0Vector;
use crate::groups::{ClassId, Group};
use crate::witt::TruncationSet;

/// Cap on levels.
pub const MAX_LEVEL: u64 = 1_000_000;

fn check_level(r: u64) -> Result<()> {
    if r == 0 || r > MAX_LEVEL {
        return Err(Error::LevelCapExceeded(r));
    }
    Ok(())
}

fn check_divisor(s: u64, r: u64) -> Result<()> {
    if s == 0 || r % s != 0 {
        return Err(Error::NotADivisor { s, r });
    }
    Ok(())
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Element of the level-r group: finite integer combination of keys
/// (t, class) with t | r.
#[derive(Clone)]
pub struct TRElem {
    group: Arc<Group>,
    level: u64,
    coeffs: BTreeMap<(u64, ClassId), BigInt>,
}

impl PartialEq for TRElem {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.group.same_group(&other.group)
            && self.coeffs == other.coeffs
    }
}

impl Eq for TRElem {}

impl fmt::Debug for TRElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TRElem({})", self.display())
    }
}

impl TRElem {
    pub fn zero(group: Arc<Group>, r: u64) -> Result<TRElem> {
        check_level(r)?;
        Ok(TRElem { group, level: r, coeffs: BTreeMap::new() })
    }

    /// The class symbol of a group element at level r: coefficient 1 at
    /// key (1, class of g).
    pub fn bracket(group: &Arc<Group>, g: usize, r: u64) -> Result<TRElem> {
        check_level(r)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, group.class_of(g)), BigInt::one());
        Ok(TRElem { group: Arc::clone(group), level: r, coeffs })
    }

    pub fn from_coeffs(
        group: Arc<Group>,
        r: u64,
        coeffs: impl IntoIterator<Item = ((u64, ClassId), BigInt)>,
    ) -> Result<TRElem> {
        check_level(r)?;
        let mut map: BTreeMap<(u64, ClassId), BigInt> = BTreeMap::new();
        for ((t, c), v) in coeffs {
            check_divisor(t, r)?;
            if c.0 as usize >= group.num_classes() {
                return Err(Error::Parse(format!("class id {c} out of range")));
            }
            if v.is_zero() {
                continue;
            }
            let entry = map.entry((t, c)).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                map.remove(&(t, c));
            }
        }
        Ok(TRElem { group, level: r, coeffs: map })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t: u64, c: ClassId) -> BigInt {
        self.coeffs.get(&(t, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u64, ClassId), &BigInt)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    fn check_compatible(&self, rhs: &TRElem) -> Result<()> {
        if !self.group.same_group(&rhs.group) {
            return Err(Error::GroupMismatch);
        }
        if self.level != rhs.level {
            return Err(Error::LevelMismatch { left: self.level, right: rhs.level });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &TRElem) -> Result<TRElem> {
        self.check_compatible(rhs)?;
        let mut coeffs = self.coeffs.clone();
        for (&k, v) in &rhs.coeffs {
            let entry = coeffs.entry(k).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                coeffs.remove(&k);
            }
        }
        Ok(TRElem { group: Arc::clone(&self.group), level: self.level, coeffs })
    }

    pub fn neg(&self) -> TRElem {
        let coeffs = self.coeffs.iter().map(|(&k, v)| (k, -v.clone())).collect();
        TRElem { group: Arc::clone(&self.group), level: self.level, coeffs }
    }

    pub fn sub(&self, rhs: &TRElem) -> Result<TRElem> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: &BigInt) -> TRElem {
        if k.is_zero() {
            return TRElem {
                group: Arc::clone(&self.group),
                level: self.level,
                coeffs: BTreeMap::new(),
            };
        }
        let coeffs = self.coeffs.iter().map(|(&key, v)| (key, k * v)).collect();
        TRElem { group: Arc::clone(&self.group), level: self.level, coeffs }
    }

    /// R_s: drops to level r/s; keys whose t no longer divides die.
    pub fn restriction(&self, s: u64) -> Result<TRElem> {
        check_divisor(s, self.level)?;
        let target = self.level / s;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|((t, _), _)| target % t == 0)
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        Ok(TRElem { group: Arc::clone(&self.group), level: target, coeffs })
    }

    /// F_s: drops to level r/s; on a key (t, c) with d = gcd(s, t) the
    /// image is d times the key (t/d, class of rep^(s/d)).
    pub fn frobenius(&self, s: u64) -> Result<TRElem> {
        check_divisor(s, self.level)?;
        let target = self.level / s;
        let mut coeffs: BTreeMap<(u64, ClassId), BigInt> = BTreeMap::new();
        let mut power_maps: BTreeMap<u64, crate::groups::ClassPowerMap> = BTreeMap::new();
        for (&(t, c), v) in &self.coeffs {
            let d = s.gcd(&t);
            let e = s / d;
            let pm = power_maps
                .entry(e)
                .or_insert_with(|| self.group.power_map(e));
            let key = (t / d, pm.apply(c));
            let entry = coeffs.entry(key).or_insert_with(BigInt::zero);
            *entry += BigInt::from(d) * v;
            if entry.is_zero() {
                coeffs.remove(&key);
            }
        }
        Ok(TRElem { group: Arc::clone(&self.group), level: target, coeffs })
    }

    /// V_s: raises to level r*s; keys shift (t, c) -> (st, c).
    pub fn verschiebung(&self, s: u64) -> Result<TRElem> {
        if s == 0 {
            return Err(Error::NotADivisor { s, r: self.level });
        }
        let target = self
            .level
            .checked_mul(s)
            .ok_or(Error::LevelCapExceeded(u64::MAX))?;
        check_level(target)?;
        let coeffs = self.coeffs.iter().map(|(&(t, c), v)| ((s * t, c), v.clone())).collect();
        Ok(TRElem { group: Arc::clone(&self.group), level: target, coeffs })
    }

    /// V_s after F_s at the same level; the ring-theoretic effect of
    /// multiplying by the Witt vector with coordinate 1 at index s.
    pub fn mult_by_v_one(&self, s: u64) -> Result<TRElem> {
        check_divisor(s, self.level)?;
        self.frobenius(s)?.verschiebung(s)
    }

    /// The slice of keys with t = 1, as a class-indexed vector.
    pub fn t_one_to_hh0(&self) -> HH0Vector {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|((t, _), _)| *t == 1)
            .map(|(&(_, c), v)| (c, v.clone()));
        HH0Vector::from_coeffs(Arc::clone(&self.group), coeffs)
            .expect("class ids validated at construction")
    }

    /// Format: `level=<r>; <coeff>*V<t>[<rep encoding>] + ...` in key
    /// order, or `level=<r>; 0`. Round-trips through `parse` bit-exactly.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return format!("level={}; 0", self.level);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&(t, c), v)| {
                format!("{}*V{}[{}]", v, t, self.group.class_representative_encoding(c))
            })
            .collect();
        format!("level={}; {}", self.level, terms.join(" + "))
    }

    pub fn parse(s: &str, group: &Arc<Group>) -> Result<TRElem> {
        let s = s.trim();
        let rest = s
            .strip_prefix("level=")
            .ok_or_else(|| Error::Parse(format!("expected 'level=<r>; ...', got {s:?}")))?;
        let (r, body) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("missing ';' after the level".into()))?;
        let r: u64 = r
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level {r:?}")))?;
        check_level(r)?;
        let body = body.trim();
        if body == "0" {
            return TRElem::zero(Arc::clone(group), r);
        }
        let mut coeffs = Vec::new();
        for term in body.split(" + ") {
            coeffs.push(parse_term(term, group)?);
        }
        TRElem::from_coeffs(Arc::clone(group), r, coeffs)
    }
}

/// Parses one `<coeff>*V<t>[<encoding>]` term.
pub(crate) fn parse_term(term: &str, group: &Arc<Group>) -> Result<((u64, ClassId), BigInt)> {
    let term = term.trim();
    let (coeff, rest) = term
        .split_once("*V")
        .ok_or_else(|| Error::Parse(format!("expected <coeff>*V<t>[..], got {term:?}")))?;
    let coeff: BigInt = coeff
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient {coeff:?}")))?;
    let bracket = rest
        .find('[')
        .ok_or_else(|| Error::Parse(format!("missing element in term {term:?}")))?;
    let t: u64 = rest[..bracket]
        .parse()
        .map_err(|_| Error::Parse(format!("bad index in term {term:?}")))?;
    let enc = rest[bracket..]
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unbalanced brackets in term {term:?}")))?;
    let g = group.parse_elem(enc)?;
    Ok(((t, group.class_of(g)), coeff))
}

fn divisors(r: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= r {
        if r % d == 0 {
            out.push(d);
            if d != r / d {
                out.push(r / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Outcome of the level-r exactness verification at a prime p: the kernel of
/// R_p is exactly the image of V_{p^u}, where p^u is the full power of p in
/// r, and V_{p^u} is injective.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub r: u64,
    pub p: u64,
    pub u: u32,
    pub d: u64,
    pub basis_size: usize,
    pub kernel_keys: Vec<(u64, ClassId)>,
    pub image_keys: Vec<(u64, ClassId)>,
    pub surjective: bool,
    pub kernel_matches_image: bool,
    pub injective: bool,
    pub failure: Option<String>,
}

impl ExactnessReport {
    pub fn pass(&self) -> bool {
        self.surjective && self.kernel_matches_image && self.injective
    }

    pub fn display(&self, group: &Group) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "exactness r={} p={} u={} d={} basis={}\n",
            self.r, self.p, self.u, self.d, self.basis_size
        ));
        let key_list = |keys: &[(u64, ClassId)]| {
            let parts: Vec<String> = keys
                .iter()
                .map(|&(t, c)| format!("V{}[{}]", t, group.class_representative_encoding(c)))
                .collect();
            parts.join(", ")
        };
        out.push_str(&format!("kernel: {}\n", key_list(&self.kernel_keys)));
        out.push_str(&format!("image: {}\n", key_list(&self.image_keys)));
        out.push_str(&format!(
            "surjective={} kernel=image: {} injective={}\n",
            self.surjective, self.kernel_matches_image, self.injective
        ));
        match &self.failure {
            None => out.push_str("verdict: PASS"),
            Some(w) => out.push_str(&format!("verdict: FAIL ({w})")),
        }
        out
    }
}

/// Verifies, by applying the operators to every basis element, that
///   level r/d --V_{p^u}--> level r --R_p--> level r/p --> 0
/// is exact, where r = p^u * d with p not dividing d.
pub fn exactness_check(group: &Arc<Group>, r: u64, p: u64) -> Result<ExactnessReport> {
    check_level(r)?;
    check_prime(p)?;
    check_divisor(p, r)?;
    let mut u = 0u32;
    let mut d = r;
    while d % p == 0 {
        d /= p;
        u += 1;
    }
    let pu = r / d;

    let basis = |level: u64| -> Vec<(u64, ClassId)> {
        let mut keys = Vec::new();
        for t in divisors(level) {
            for c in 0..group.num_classes() {
                keys.push((t, ClassId(c as u32)));
            }
        }
        keys
    };
    let basis_elem = |level: u64, key: (u64, ClassId)| -> TRElem {
        TRElem::from_coeffs(Arc::clone(group), level, [(key, BigInt::one())])
            .expect("key divides the level")
    };

    let level_basis = basis(r);
    let mut failure: Option<String> = None;

    // R_p on each basis element: collect the kernel and check that every
    // survivor is the expected basis element one level down.
    let mut kernel_keys = Vec::new();
    for &key in &level_basis {
        let image = basis_elem(r, key).restriction(p)?;
        if image.is_zero() {
            kernel_keys.push(key);
        } else if image != basis_elem(r / p, key) && failure.is_none() {
            failure = Some(format!("restriction moved the key ({}, {})", key.0, key.1));
        }
    }

    // Surjectivity: every basis element one level down is hit.
    let mut surjective = true;
    for &key in &basis(r / p) {
        if basis_elem(r, key).restriction(p)? != basis_elem(r / p, key) {
            surjective = false;
            if failure.is_none() {
                failure = Some(format!("key ({}, {}) not hit by restriction", key.0, key.1));
            }
        }
    }

    // V_{p^u} on each basis element at level r/p^u = d: images must be
    // pairwise distinct basis elements (injectivity on a free group).
    let mut image_keys = Vec::new();
    let mut injective = true;
    for &key in &basis(d) {
        let image = basis_elem(d, key).verschiebung(pu)?;
        debug_assert_eq!(image.level(), r);
        let mut keys: Vec<(u64, ClassId)> = image.terms().map(|(k, _)| k).collect();
        if keys.len() != 1 || !image.coeff(keys[0].0, keys[0].1).is_one() {
            injective = false;
            if failure.is_none() {
                failure = Some(format!("shift smeared the key ({}, {})", key.0, key.1));
            }
            continue;
        }
        image_keys.append(&mut keys);
    }
    let mut sorted_images = image_keys.clone();
    sorted_images.sort_unstable();
    sorted_images.dedup();
    if sorted_images.len() != image_keys.len() {
        injective = false;
        if failure.is_none() {
            failure = Some("shift identified two basis keys".into());
        }
    }

    let kernel_matches_image = kernel_keys == sorted_images;
    if !kernel_matches_image && failure.is_none() {
        failure = Some("kernel and image differ".into());
    }

    Ok(ExactnessReport {
        r,
        p,
        u,
        d,
        basis_size: level_basis.len(),
        kernel_keys,
        image_keys: sorted_images,
        surjective,
        kernel_matches_image,
        injective,
        failure,
    })
}

/// Truncation of a limit element: coefficients known at the levels of a
/// finite divisor-closed set S, with a flag asserting the full (global)
/// support lies inside S.
#[derive(Clone)]
pub struct TRLimitElem {
    group: Arc<Group>,
    set: TruncationSet,
    coeffs: BTreeMap<(u64, ClassId), BigInt>,
    full_support_declared: bool,
}

impl PartialEq for TRLimitElem {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
            && self.full_support_declared == other.full_support_declared
            && self.group.same_group(&other.group)
            && self.coeffs == other.coeffs
    }
}

impl Eq for TRLimitElem {}

impl fmt::Debug for TRLimitElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TRLimitElem(set={}, declared={}, {})",
            self.set.display(),
            self.full_support_declared,
            self.series_display()
        )
    }
}

impl TRLimitElem {
    pub fn from_parts(
        group: Arc<Group>,
        set: TruncationSet,
        coeffs: impl IntoIterator<Item = ((u64, ClassId), BigInt)>,
        full_support_declared: bool,
    ) -> Result<TRLimitElem> {
        let mut map: BTreeMap<(u64, ClassId), BigInt> = BTreeMap::new();
        for ((t, c), v) in coeffs {
            if !set.contains(t) {
                return Err(Error::IndexNotInTruncation { index: t });
            }
            if c.0 as usize >= group.num_classes() {
                return Err(Error::Parse(format!("class id {c} out of range")));
            }
            if v.is_zero() {
                continue;
            }
            let entry = map.entry((t, c)).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                map.remove(&(t, c));
            }
        }
        Ok(TRLimitElem { group, set, coeffs: map, full_support_declared })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn full_support_declared(&self) -> bool {
        self.full_support_declared
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t: u64, c: ClassId) -> BigInt {
        self.coeffs.get(&(t, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u64, ClassId), &BigInt)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    /// Projection to a single level; requires every divisor of r to lie in
    /// the truncation set, so the answer is fully determined.
    pub fn project(&self, r: u64) -> Result<TRElem> {
        check_level(r)?;
        if divisors(r).iter().any(|&t| !self.set.contains(t)) {
            return Err(Error::LevelNotCovered { r });
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|((t, _), _)| r % t == 0)
            .map(|(&k, v)| (k, v.clone()));
        TRElem::from_coeffs(Arc::clone(&self.group), r, coeffs)
    }

    /// Frobenius at a prime on the limit: the result is known on S/p, with
    /// coefficient at (u, [h]) given by the class-sum at u (when p does not
    /// divide u) plus p times the coefficient at pu:
    ///
    ///   F_p(a)(u, [h]) = [p∤u] * Σ_{[g]: [g^p] = [h]} a(u, [g]) + p * a(pu, [h])
    ///
    /// When the input declares full support, the same formula determines the
    /// result at every level via zero extension; the output keeps the
    /// declared flag exactly when those extra coefficients all vanish.
    pub fn frobenius_prime(&self, p: u64) -> Result<TRLimitElem> {
        check_prime(p)?;
        let target = self.set.quotient(p)?;
        let pm = self.group.power_map(p);

        // image coefficients over an arbitrary level set
        let image_at = |levels: &dyn Fn(u64) -> bool| -> BTreeMap<(u64, ClassId), BigInt> {
            let mut out: BTreeMap<(u64, ClassId), BigInt> = BTreeMap::new();
            let mut bump = |key: (u64, ClassId), v: BigInt| {
                if v.is_zero() {
                    return;
                }
                let entry = out.entry(key).or_insert_with(BigInt::zero);
                *entry += v;
                if entry.is_zero() {
                    out.remove(&key);
                }
            };
            for (&(t, c), v) in &self.coeffs {
                if t % p != 0 && levels(t) {
                    bump((t, pm.apply(c)), v.clone());
                }
                if t % p == 0 && levels(t / p) {
                    bump((t / p, c), BigInt::from(p) * v);
                }
            }
            out
        };

        let coeffs = image_at(&|u| target.contains(u));
        let declared = if self.full_support_declared {
            image_at(&|u| !target.contains(u)).is_empty()
        } else {
            false
        };
        Ok(TRLimitElem {
            group: Arc::clone(&self.group),
            set: target,
            coeffs,
            full_support_declared: declared,
        })
    }

    /// The series body, formatted like a level element without the level
    /// prefix: `<coeff>*V<t>[<enc>] + ...` or `0`.
    pub fn series_display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&(t, c), v)| {
                format!("{}*V{}[{}]", v, t, self.group.class_representative_encoding(c))
            })
            .collect();
        terms.join(" + ")
    }

    pub fn parse_series(
        body: &str,
        group: &Arc<Group>,
        set: &TruncationSet,
        declared: bool,
    ) -> Result<TRLimitElem> {
        let body = body.trim();
        if body == "0" {
            return TRLimitElem::from_parts(Arc::clone(group), set.clone(), [], declared);
        }
        let mut coeffs = Vec::new();
        for term in body.split(" + ") {
            coeffs.push(parse_term(term, group)?);
        }
        TRLimitElem::from_parts(Arc::clone(group), set.clone(), coeffs, declared)
    }
}
