//! Finite groups given by generators, with conjugacy-class bookkeeping.
//!
//! A group is enumerated from its generators (permutations in image-tuple
//! form, or exact rational 2x2 matrices of determinant one) and then frozen:
//! elements are sorted by their canonical encoding string, multiplication and
//! inverse tables are precomputed, and the conjugacy-class partition is fixed
//! with dense ids. Class 0 is always the class of the identity; the remaining
//! classes are ordered by (size, representative encoding).

pub mod sl2;

pub use sl2::{fmt_rat, parse_rational, rational_sqrt, RatMatrix2};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{Integer, ToPrimitive};

use crate::error::{Error, Result};

/// Default ceiling on the number of elements enumerated before giving up.
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// How a group was described.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Permutation,
    Matrix2x2,
    Catalog,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Permutation => write!(f, "permutation"),
            GroupKind::Matrix2x2 => write!(f, "matrix2x2"),
            GroupKind::Catalog => write!(f, "catalog"),
        }
    }
}

/// A group element in one of the two supported carriers.
///
/// Permutations are stored as image tuples on {1..k}: entry `i` (0-based) is
/// the image of point `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Perm(Vec<u32>),
    Mat(RatMatrix2),
}

impl Elem {
    /// Canonical encoding string; the total order on elements is the
    /// lexicographic order on these strings.
    pub fn encode(&self) -> String {
        match self {
            Elem::Perm(images) => {
                let parts: Vec<String> = images.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Elem::Mat(m) => m.encode(),
        }
    }

    fn mul(&self, rhs: &Elem) -> Elem {
        match (self, rhs) {
            (Elem::Perm(p), Elem::Perm(q)) => {
                // (p * q)(x) = p(q(x))
                Elem::Perm(q.iter().map(|&x| p[(x - 1) as usize]).collect())
            }
            (Elem::Mat(x), Elem::Mat(y)) => Elem::Mat(x.mul(y)),
            _ => unreachable!("mixed carriers in one group"),
        }
    }
}

/// Group description: a carrier kind plus generators (already resolved for
/// catalog names).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Vec<Elem>,
    pub catalog_name: Option<String>,
}

impl GroupSpec {
    pub fn permutation(gens: Vec<Vec<u32>>) -> GroupSpec {
        GroupSpec {
            kind: GroupKind::Permutation,
            generators: gens.into_iter().map(Elem::Perm).collect(),
            catalog_name: None,
        }
    }

    pub fn matrix(gens: Vec<RatMatrix2>) -> GroupSpec {
        GroupSpec {
            kind: GroupKind::Matrix2x2,
            generators: gens.into_iter().map(Elem::Mat).collect(),
            catalog_name: None,
        }
    }

    /// Resolves a catalog name ("C<n>", "S<n>", "D<n>", "Q8") to generators.
    pub fn catalog(name: &str) -> Result<GroupSpec> {
        let gens = catalog_generators(name)?;
        Ok(GroupSpec {
            kind: GroupKind::Catalog,
            generators: gens,
            catalog_name: Some(name.to_string()),
        })
    }

    /// Parses the group spec text format:
    ///
    /// ```text
    /// group catalog S3
    /// ```
    ///
    /// or a kind line followed by `gen` lines (`gen (1 2)(3 4)` for
    /// permutations, `gen a b / c d` for matrices). Blank lines and lines
    /// starting with `#` are skipped; any other directive is rejected.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut kind: Option<(GroupKind, Option<String>)> = None;
        let mut perm_gens: Vec<Vec<u32>> = Vec::new();
        let mut mat_gens: Vec<RatMatrix2> = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = match line.split_once(char::is_whitespace) {
                Some((h, r)) => (h, r.trim()),
                None => (line, ""),
            };
            match head {
                "group" => {
                    if kind.is_some() {
                        return Err(Error::Parse("duplicate group directive".into()));
                    }
                    let mut toks = rest.split_whitespace();
                    let k = toks.next().unwrap_or("");
                    match k {
                        "permutation" | "matrix2x2" => {
                            if toks.next().is_some() {
                                return Err(Error::Parse(format!(
                                    "unexpected token after 'group {k}'"
                                )));
                            }
                            let gk = if k == "permutation" {
                                GroupKind::Permutation
                            } else {
                                GroupKind::Matrix2x2
                            };
                            kind = Some((gk, None));
                        }
                        "catalog" => {
                            let name = toks
                                .next()
                                .ok_or_else(|| Error::Parse("catalog name missing".into()))?;
                            if toks.next().is_some() {
                                return Err(Error::Parse(
                                    "unexpected token after catalog name".into(),
                                ));
                            }
                            kind = Some((GroupKind::Catalog, Some(name.to_string())));
                        }
                        other => {
                            return Err(Error::Parse(format!("unknown group kind {other:?}")));
                        }
                    }
                }
                "gen" => match kind {
                    Some((GroupKind::Permutation, _)) => perm_gens.push(parse_cycles(rest)?),
                    Some((GroupKind::Matrix2x2, _)) => mat_gens.push(parse_matrix_gen(rest)?),
                    Some((GroupKind::Catalog, _)) => {
                        return Err(Error::Parse("catalog groups take no generators".into()));
                    }
                    None => {
                        return Err(Error::Parse("gen before group directive".into()));
                    }
                },
                other => {
                    return Err(Error::Parse(format!("unknown directive {other:?}")));
                }
            }
        }
        match kind {
            None => Err(Error::Parse("missing group directive".into())),
            Some((GroupKind::Permutation, _)) => Ok(GroupSpec::permutation(perm_gens)),
            Some((GroupKind::Matrix2x2, _)) => Ok(GroupSpec::matrix(mat_gens)),
            Some((GroupKind::Catalog, Some(name))) => GroupSpec::catalog(&name),
            Some((GroupKind::Catalog, None)) => unreachable!(),
        }
    }
}

/// Parses cycle notation like "(1 2)(3 4)" or "(1,2,3)" into an image tuple
/// on {1..k} where k is the largest point mentioned. Cycles are applied
/// right to left. "()" denotes the identity.
pub fn parse_cycles(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut rest = s;
    if s.is_empty() {
        return Err(Error::Parse("empty cycle expression".into()));
    }
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in cycle expression {s:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {s:?}")))?;
        let body = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let p: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {tok:?} in cycle")))?;
            if p == 0 {
                return Err(Error::Parse("points are numbered from 1".into()));
            }
            if cycle.contains(&p) {
                return Err(Error::Parse(format!("repeated point {p} in one cycle")));
            }
            cycle.push(p);
        }
        cycles.push(cycle);
        rest = rest[close + 1..].trim_start();
    }
    let k = cycles
        .iter()
        .flat_map(|c| c.iter().copied())
        .max()
        .unwrap_or(1) as usize;
    let mut images: Vec<u32> = (1..=k as u32).collect();
    // left-to-right over the text = outermost-first, so each cycle is applied
    // before the composition accumulated so far
    for cycle in &cycles {
        if cycle.len() < 2 {
            continue;
        }
        let mut next = images.clone();
        for (i, &p) in cycle.iter().enumerate() {
            let q = cycle[(i + 1) % cycle.len()];
            next[(p - 1) as usize] = images[(q - 1) as usize];
        }
        images = next;
    }
    Ok(images)
}

fn parse_matrix_gen(rest: &str) -> Result<RatMatrix2> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() != 5 || toks[2] != "/" {
        return Err(Error::Parse(format!(
            "matrix generator must be 'a b / c d', got {rest:?}"
        )));
    }
    Ok(RatMatrix2::new(
        parse_rational(toks[0])?,
        parse_rational(toks[1])?,
        parse_rational(toks[3])?,
        parse_rational(toks[4])?,
    ))
}

fn catalog_generators(name: &str) -> Result<Vec<Elem>> {
    let bad = || Error::Parse(format!("unknown catalog group {name:?}"));
    if name == "Q8" || name == "Q_8" {
        return Ok(quaternion_generators());
    }
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(bad)?;
    let digits: String = chars.collect();
    let digits = digits.strip_prefix('_').unwrap_or(&digits);
    let n: u32 = digits.parse().map_err(|_| bad())?;
    match family {
        'C' => {
            if n == 0 {
                return Err(bad());
            }
            if n == 1 {
                return Ok(Vec::new());
            }
            Ok(vec![Elem::Perm(rotation(n))])
        }
        'S' => {
            if n == 0 {
                return Err(bad());
            }
            if n == 1 {
                return Ok(Vec::new());
            }
            let mut swap: Vec<u32> = (1..=n).collect();
            swap.swap(0, 1);
            Ok(vec![Elem::Perm(swap), Elem::Perm(rotation(n))])
        }
        'D' => {
            // the dihedral construction on n points needs n >= 3
            if n < 3 {
                return Err(bad());
            }
            let reflection: Vec<u32> = (1..=n).map(|j| (n + 1 - j) % n + 1).collect();
            Ok(vec![Elem::Perm(rotation(n)), Elem::Perm(reflection)])
        }
        _ => Err(bad()),
    }
}

fn rotation(n: u32) -> Vec<u32> {
    (1..=n).map(|j| j % n + 1).collect()
}

/// Left regular representation of the quaternion group on its eight units,
/// ordered 1, -1, i, -i, j, -j, k, -k.
fn quaternion_generators() -> Vec<Elem> {
    // basis 0 = 1, 1 = i, 2 = j, 3 = k; table[a][b] = (sign, basis) for a*b
    const TABLE: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let units: Vec<(i8, usize)> = vec![
        (1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3),
    ];
    let label = |u: (i8, usize)| units.iter().position(|&v| v == u).unwrap() as u32 + 1;
    let left_mul = |g: (i8, usize)| -> Elem {
        let images: Vec<u32> = units
            .iter()
            .map(|&(s, b)| {
                let (ts, tb) = TABLE[g.1][b];
                label((g.0 * s * ts, tb))
            })
            .collect();
        Elem::Perm(images)
    };
    vec![left_mul((1, 1)), left_mul((1, 2))]
}

/// Dense conjugacy-class id. Class 0 is the identity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub u32);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One conjugacy class: dense id, minimal member as representative, and the
/// full sorted member list (element indices).
#[derive(Clone, Debug)]
pub struct ConjClass {
    pub id: ClassId,
    pub representative: usize,
    pub size: usize,
    pub members: Vec<usize>,
}

/// The map on conjugacy classes induced by g -> g^s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPowerMap {
    pub s: u64,
    map: Vec<ClassId>,
}

impl ClassPowerMap {
    pub fn apply(&self, c: ClassId) -> ClassId {
        self.map[c.0 as usize]
    }

    pub fn mapping(&self) -> &[ClassId] {
        &self.map
    }
}

/// A finite group, frozen after construction.
pub struct Group {
    kind: GroupKind,
    catalog_name: Option<String>,
    domain: usize,
    elems: Vec<Elem>,
    encodings: Vec<String>,
    index: HashMap<Elem, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    orders: Vec<u64>,
    exponent: u64,
    classes: Vec<ConjClass>,
    class_of: Vec<ClassId>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("kind", &self.kind)
            .field("catalog_name", &self.catalog_name)
            .field("order", &self.elems.len())
            .finish()
    }
}

impl Group {
    pub fn build(spec: &GroupSpec) -> Result<Arc<Group>> {
        Group::build_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn catalog(name: &str) -> Result<Arc<Group>> {
        Group::build(&GroupSpec::catalog(name)?)
    }

    pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<Arc<Group>> {
        let mut gens = spec.generators.clone();
        let carrier_is_mat = matches!(gens.first(), Some(Elem::Mat(_)))
            || (gens.is_empty() && spec.kind == GroupKind::Matrix2x2);
        let identity;
        if carrier_is_mat {
            for g in &gens {
                let Elem::Mat(m) = g else {
                    return Err(Error::NotAGroup("mixed generator carriers".into()));
                };
                if !m.is_sl2() {
                    return Err(Error::NotAGroup(format!(
                        "generator {} has determinant {}, expected 1",
                        m.encode(),
                        fmt_rat(&m.det())
                    )));
                }
            }
            identity = Elem::Mat(RatMatrix2::identity());
        } else {
            let mut k = 1usize;
            for g in &gens {
                let Elem::Perm(images) = g else {
                    return Err(Error::NotAGroup("mixed generator carriers".into()));
                };
                k = k.max(images.len());
            }
            for g in &mut gens {
                if let Elem::Perm(images) = g {
                    validate_images(images)?;
                    let len = images.len() as u32;
                    images.extend(len + 1..=k as u32);
                }
            }
            identity = Elem::Perm((1..=k as u32).collect());
        }

        // breadth-first closure under right multiplication by generators
        let mut elems: Vec<Elem> = vec![identity.clone()];
        let mut seen: HashMap<Elem, usize> = HashMap::new();
        seen.insert(identity.clone(), 0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let prod = elems[i].mul(g);
                if !seen.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    seen.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    queue.push_back(elems.len() - 1);
                }
            }
        }

        // freeze the element order: lexicographic on the encoding string
        let mut order: Vec<usize> = (0..elems.len()).collect();
        let encodings_unsorted: Vec<String> = elems.iter().map(|e| e.encode()).collect();
        order.sort_by(|&i, &j| encodings_unsorted[i].cmp(&encodings_unsorted[j]));
        let elems: Vec<Elem> = order.iter().map(|&i| elems[i].clone()).collect();
        let encodings: Vec<String> = order.iter().map(|&i| encodings_unsorted[i].clone()).collect();
        let index: HashMap<Elem, usize> =
            elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let n = elems.len();
        let identity = *index.get(&identity).unwrap();

        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = elems[i].mul(&elems[j]);
                let p = *index
                    .get(&prod)
                    .ok_or_else(|| Error::NotAGroup("carrier not closed".into()))?;
                mul[i * n + j] = p as u32;
            }
        }
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| mul[i * n + j] as usize == identity)
                .ok_or_else(|| Error::NotAGroup("element without inverse".into()))?;
            inv[i] = j as u32;
        }

        let mut orders = vec![0u64; n];
        for i in 0..n {
            let mut x = i;
            let mut ord = 1u64;
            while x != identity {
                x = mul[x * n + i] as usize;
                ord += 1;
            }
            orders[i] = ord;
        }
        let exponent = orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));

        // conjugacy partition
        let mut class_of_raw = vec![usize::MAX; n];
        let mut raw_classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of_raw[x] != usize::MAX {
                continue;
            }
            let cid = raw_classes.len();
            let mut members = Vec::new();
            for g in 0..n {
                let gx = mul[g * n + x] as usize;
                let conj = mul[gx * n + inv[g] as usize] as usize;
                if class_of_raw[conj] == usize::MAX {
                    class_of_raw[conj] = cid;
                    members.push(conj);
                }
            }
            members.sort_unstable();
            raw_classes.push(members);
        }
        let mut class_order: Vec<usize> = (0..raw_classes.len()).collect();
        class_order.sort_by(|&a, &b| {
            let ka = (raw_classes[a].len(), &encodings[raw_classes[a][0]]);
            let kb = (raw_classes[b].len(), &encodings[raw_classes[b][0]]);
            ka.cmp(&kb)
        });
        let identity_pos = class_order
            .iter()
            .position(|&c| raw_classes[c].contains(&identity))
            .unwrap();
        let identity_raw = class_order.remove(identity_pos);
        class_order.insert(0, identity_raw);

        let mut classes = Vec::with_capacity(raw_classes.len());
        let mut class_of = vec![ClassId(0); n];
        for (new_id, &raw_id) in class_order.iter().enumerate() {
            let members = raw_classes[raw_id].clone();
            for &m in &members {
                class_of[m] = ClassId(new_id as u32);
            }
            classes.push(ConjClass {
                id: ClassId(new_id as u32),
                representative: members[0],
                size: members.len(),
                members,
            });
        }

        Ok(Arc::new(Group {
            kind: spec.kind,
            catalog_name: spec.catalog_name.clone(),
            domain: match elems.first() {
                Some(Elem::Perm(im)) => im.len(),
                _ => 0,
            },
            elems,
            encodings,
            index,
            mul,
            inv,
            identity,
            orders,
            exponent,
            classes,
            class_of,
        }))
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn catalog_name(&self) -> Option<&str> {
        self.catalog_name.as_deref()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn encoding(&self, i: usize) -> &str {
        &self.encodings[i]
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.elems.len() + j] as usize
    }

    pub fn inv_idx(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn order_of(&self, i: usize) -> u64 {
        self.orders[i]
    }

    /// x^e computed through the multiplication table; e is reduced modulo the
    /// order of x, so arbitrary (also negative) exponents are exact.
    pub fn pow_idx(&self, i: usize, e: i64) -> usize {
        let ord = self.orders[i] as i64;
        let e = e.rem_euclid(ord) as u64;
        self.pow_idx_u64(i, e)
    }

    pub fn pow_idx_u64(&self, i: usize, e: u64) -> usize {
        let mut e = e % self.orders[i];
        let mut acc = self.identity;
        let mut sq = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, sq);
            }
            sq = self.mul_idx(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn pow_idx_big(&self, i: usize, e: &BigInt) -> usize {
        let ord = BigInt::from(self.orders[i]);
        let r = e.mod_floor(&ord).to_u64().unwrap();
        self.pow_idx_u64(i, r)
    }

    pub fn elem_index(&self, e: &Elem) -> Result<usize> {
        self.index
            .get(e)
            .copied()
            .ok_or_else(|| Error::UnknownElement(e.encode()))
    }

    /// Parses a canonical element encoding and resolves it in the carrier.
    pub fn parse_elem(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let elem = if self.domain > 0 {
            let inner = s
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("malformed element encoding {s:?}")))?;
            if inner.starts_with('[') {
                return Err(Error::Parse(format!(
                    "expected a permutation image tuple, got {s:?}"
                )));
            }
            let mut images = Vec::new();
            for tok in inner.split(',') {
                let x: u32 = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad image {tok:?} in {s:?}")))?;
                images.push(x);
            }
            if images.len() != self.domain {
                return Err(Error::UnknownElement(s.to_string()));
            }
            validate_images(&images)?;
            Elem::Perm(images)
        } else {
            Elem::Mat(RatMatrix2::parse(s)?)
        };
        self.elem_index(&elem)
    }

    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, i: usize) -> ClassId {
        self.class_of[i]
    }

    pub fn class(&self, c: ClassId) -> &ConjClass {
        &self.classes[c.0 as usize]
    }

    pub fn identity_class(&self) -> ClassId {
        self.class_of[self.identity]
    }

    pub fn class_representative_encoding(&self, c: ClassId) -> &str {
        &self.encodings[self.classes[c.0 as usize].representative]
    }

    /// The well-defined map on classes induced by raising to the s-th power.
    pub fn power_map(&self, s: u64) -> ClassPowerMap {
        let map = self
            .classes
            .iter()
            .map(|cl| self.class_of(self.pow_idx_u64(cl.representative, s)))
            .collect();
        ClassPowerMap { s, map }
    }

    /// Same ambient group (pointer identity or identical carrier).
    pub fn same_group(&self, other: &Group) -> bool {
        std::ptr::eq(self, other) || self.encodings == other.encodings
    }

    pub fn display_name(&self) -> String {
        match &self.catalog_name {
            Some(n) => n.clone(),
            None => format!("{} group of order {}", self.kind, self.order()),
        }
    }
}

fn validate_images(images: &[u32]) -> Result<()> {
    let k = images.len() as u32;
    let mut seen = vec![false; images.len()];
    for &x in images {
        if x == 0 || x > k {
            return Err(Error::Parse(format!("image {x} outside 1..={k}")));
        }
        if seen[(x - 1) as usize] {
            return Err(Error::Parse(format!("image {x} repeated; not a permutation")));
        }
        seen[(x - 1) as usize] = true;
    }
    Ok(())
}
