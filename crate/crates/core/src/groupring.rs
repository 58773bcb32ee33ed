//! Integral group rings, matrices over them, and the projection of traces
//! onto conjugacy classes.
//!
//! The class-indexed vector obtained by summing coefficients over each
//! conjugacy class is a trace: it kills additive commutators ab - ba, so the
//! rank of an idempotent matrix (the projected trace of E) is invariant under
//! conjugation and additive under block sums.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{ClassId, Group};

/// Maximum matrix dimension accepted by constructors and the parser.
pub const MAX_MATRIX_DIM: usize = 16;

/// Finitely supported integer combination of group elements. Zero
/// coefficients are never stored.
#[derive(Clone)]
pub struct GroupRingElem {
    group: Arc<Group>,
    terms: BTreeMap<usize, BigInt>,
}

impl GroupRingElem {
    pub fn zero(group: Arc<Group>) -> Self {
        GroupRingElem { group, terms: BTreeMap::new() }
    }

    pub fn one(group: Arc<Group>) -> Self {
        let e = group.identity();
        GroupRingElem::term(group, BigInt::one(), e)
    }

    pub fn term(group: Arc<Group>, coeff: BigInt, elem: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(elem, coeff);
        }
        GroupRingElem { group, terms }
    }

    pub fn from_terms(
        group: Arc<Group>,
        terms: impl IntoIterator<Item = (usize, BigInt)>,
    ) -> Self {
        let mut out = GroupRingElem::zero(group);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, elem: usize, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(elem).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&elem);
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, elem: usize) -> BigInt {
        self.terms.get(&elem).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    fn check_same_group(&self, rhs: &GroupRingElem) -> Result<()> {
        if self.group.same_group(&rhs.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, rhs: &GroupRingElem) -> Result<GroupRingElem> {
        self.check_same_group(rhs)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> GroupRingElem {
        let terms = self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect();
        GroupRingElem { group: self.group.clone(), terms }
    }

    pub fn sub(&self, rhs: &GroupRingElem) -> Result<GroupRingElem> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: &BigInt) -> GroupRingElem {
        if k.is_zero() {
            return GroupRingElem::zero(self.group.clone());
        }
        let terms = self.terms.iter().map(|(&e, c)| (e, c * k)).collect();
        GroupRingElem { group: self.group.clone(), terms }
    }

    /// Convolution product.
    pub fn mul(&self, rhs: &GroupRingElem) -> Result<GroupRingElem> {
        self.check_same_group(rhs)?;
        let mut out = GroupRingElem::zero(self.group.clone());
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(self.group.mul_idx(a, b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Sums coefficients over each conjugacy class. This is the universal
    /// trace on the group ring: it sends ab and ba to the same vector.
    pub fn hh0_project(&self) -> HH0Vector {
        let mut coeffs: BTreeMap<ClassId, BigInt> = BTreeMap::new();
        for (e, c) in self.terms() {
            let cls = self.group.class_of(e);
            let entry = coeffs.entry(cls).or_insert_with(BigInt::zero);
            *entry += c;
        }
        coeffs.retain(|_, v| !v.is_zero());
        HH0Vector { group: self.group.clone(), coeffs }
    }

    /// Canonical display, e.g. "2*[1,2,3] + -1*[2,1,3]"; "0" when empty.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| format!("{}*{}", c, self.group.encoding(e)))
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for GroupRingElem {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.terms == other.terms
    }
}

impl Eq for GroupRingElem {}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElem({})", self.display())
    }
}

/// Integer vector indexed by conjugacy classes; zero entries are not stored.
#[derive(Clone)]
pub struct HH0Vector {
    group: Arc<Group>,
    coeffs: BTreeMap<ClassId, BigInt>,
}

impl HH0Vector {
    pub fn zero(group: Arc<Group>) -> Self {
        HH0Vector { group, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(
        group: Arc<Group>,
        coeffs: impl IntoIterator<Item = (ClassId, BigInt)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<ClassId, BigInt> = BTreeMap::new();
        for (c, v) in coeffs {
            if c.0 as usize >= group.num_classes() {
                return Err(Error::Parse(format!("class id {c} out of range")));
            }
            if v.is_zero() {
                continue;
            }
            let entry = map.entry(c).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                map.remove(&c);
            }
        }
        Ok(HH0Vector { group, coeffs: map })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coeff(&self, c: ClassId) -> BigInt {
        self.coeffs.get(&c).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (ClassId, &BigInt)> {
        self.coeffs.iter().map(|(&c, v)| (c, v))
    }

    /// Support away from the identity class.
    pub fn nonidentity_support(&self) -> Vec<ClassId> {
        let id = self.group.identity_class();
        self.coeffs.keys().copied().filter(|&c| c != id).collect()
    }

    pub fn add(&self, rhs: &HH0Vector) -> Result<HH0Vector> {
        if !self.group.same_group(&rhs.group) {
            return Err(Error::GroupMismatch);
        }
        let mut out = self.clone();
        for (c, v) in rhs.support() {
            let entry = out.coeffs.entry(c).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                out.coeffs.remove(&c);
            }
        }
        Ok(out)
    }

    /// Canonical display, e.g. "2*[[1,2,3]] + 1*[[2,3,1]]"; "0" when empty.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&c, v)| format!("{}*[{}]", v, self.group.class_representative_encoding(c)))
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for HH0Vector {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.coeffs == other.coeffs
    }
}

impl Eq for HH0Vector {}

impl fmt::Debug for HH0Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HH0Vector({})", self.display())
    }
}

/// Dense square matrix over the group ring, row-major.
#[derive(Clone)]
pub struct GRMatrix {
    group: Arc<Group>,
    n: usize,
    entries: Vec<GroupRingElem>,
}

impl PartialEq for GRMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.group.same_group(&other.group)
            && self.entries == other.entries
    }
}

impl Eq for GRMatrix {}

impl fmt::Debug for GRMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GRMatrix {}x{}:", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                writeln!(f, "  [{i}][{j}] = {}", self.get(i, j).display())?;
            }
        }
        Ok(())
    }
}

impl GRMatrix {
    pub fn zero(group: Arc<Group>, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_MATRIX_DIM {
            return Err(Error::DimensionMismatch { left: n, right: MAX_MATRIX_DIM });
        }
        let entries = vec![GroupRingElem::zero(group.clone()); n * n];
        Ok(GRMatrix { group, n, entries })
    }

    pub fn identity(group: Arc<Group>, n: usize) -> Result<Self> {
        let mut m = GRMatrix::zero(group.clone(), n)?;
        for i in 0..n {
            m.entries[i * n + i] = GroupRingElem::one(group.clone());
        }
        Ok(m)
    }

    /// Elementary matrix: identity plus `a` in the (i, j) slot, i != j.
    /// Its inverse is the elementary matrix with -a in the same slot.
    pub fn elementary(group: Arc<Group>, n: usize, i: usize, j: usize, a: &GroupRingElem) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::DimensionMismatch { left: i.max(j), right: n });
        }
        let mut m = GRMatrix::identity(group, n)?;
        m.entries[i * n + j] = a.clone();
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GroupRingElem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mat_mul(&self, rhs: &GRMatrix) -> Result<GRMatrix> {
        if !self.group.same_group(&rhs.group) {
            return Err(Error::GroupMismatch);
        }
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { left: self.n, right: rhs.n });
        }
        let mut out = GRMatrix::zero(self.group.clone(), self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = GroupRingElem::zero(self.group.clone());
                for k in 0..self.n {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, rhs: &GRMatrix) -> Result<GRMatrix> {
        if !self.group.same_group(&rhs.group) {
            return Err(Error::GroupMismatch);
        }
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { left: self.n, right: rhs.n });
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).add(rhs.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// Block sum: self in the top-left corner, rhs in the bottom-right.
    pub fn block_diag(&self, rhs: &GRMatrix) -> Result<GRMatrix> {
        if !self.group.same_group(&rhs.group) {
            return Err(Error::GroupMismatch);
        }
        let n = self.n + rhs.n;
        let mut out = GRMatrix::zero(self.group.clone(), n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.n {
            for j in 0..rhs.n {
                out.set(self.n + i, self.n + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Exact test of E*E = E.
    pub fn is_idempotent(&self) -> Result<bool> {
        Ok(self.mat_mul(self)? == *self)
    }

    pub fn trace(&self) -> GroupRingElem {
        let mut acc = GroupRingElem::zero(self.group.clone());
        for i in 0..self.n {
            acc = acc.add(self.get(i, i)).expect("same group by construction");
        }
        acc
    }

    /// Projected trace, defined for every matrix.
    pub fn trace_to_hh0(&self) -> HH0Vector {
        self.trace().hh0_project()
    }

    /// Projected trace of an idempotent; errors with NotIdempotent otherwise.
    pub fn hattori_stallings_rank(&self) -> Result<HH0Vector> {
        if !self.is_idempotent()? {
            return Err(Error::NotIdempotent);
        }
        Ok(self.trace_to_hh0())
    }

    /// Parses the matrix text format:
    ///
    /// ```text
    /// matrix n=<dim> group=<path>
    /// <i> <j> <coeff> <element-encoding>
    /// ```
    ///
    /// Indices are 0-based. Repeated (i, j, element) lines accumulate.
    pub fn parse(text: &str, group: Arc<Group>) -> Result<GRMatrix> {
        let (n, _path) = Self::parse_header(text)?;
        let mut m = GRMatrix::zero(group.clone(), n)?;
        for raw in text.lines().skip_while(|l| !l.trim().starts_with("matrix")).skip(1) {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(Error::Parse(format!(
                    "matrix term must be 'i j coeff element', got {line:?}"
                )));
            }
            let i: usize = toks[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad row index {:?}", toks[0])))?;
            let j: usize = toks[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad column index {:?}", toks[1])))?;
            if i >= n || j >= n {
                return Err(Error::Parse(format!("index ({i}, {j}) outside a {n}x{n} matrix")));
            }
            let coeff: BigInt = toks[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", toks[2])))?;
            let e = group.parse_elem(toks[3])?;
            let cur = m.get(i, j).clone();
            m.set(i, j, cur.add(&GroupRingElem::term(group.clone(), coeff, e))?);
        }
        Ok(m)
    }

    /// Reads `n` and the group path out of the header line.
    pub fn parse_header(text: &str) -> Result<(usize, String)> {
        let header = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "matrix" {
            return Err(Error::Parse(format!(
                "matrix header must be 'matrix n=<dim> group=<path>', got {header:?}"
            )));
        }
        let n: usize = toks[1]
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad dimension field {:?}", toks[1])))?;
        if n == 0 || n > MAX_MATRIX_DIM {
            return Err(Error::Parse(format!("dimension {n} outside 1..={MAX_MATRIX_DIM}")));
        }
        let path = toks[2]
            .strip_prefix("group=")
            .ok_or_else(|| Error::Parse(format!("bad group field {:?}", toks[2])))?;
        Ok((n, path.to_string()))
    }

    /// Canonical text form; `parse(format(m))` reproduces `m` bit-exactly.
    pub fn format(&self, group_path: &str) -> String {
        let mut out = format!("matrix n={} group={}\n", self.n, group_path);
        for i in 0..self.n {
            for j in 0..self.n {
                for (e, c) in self.get(i, j).terms() {
                    out.push_str(&format!("{} {} {} {}\n", i, j, c, self.group.encoding(e)));
                }
            }
        }
        out
    }
}
