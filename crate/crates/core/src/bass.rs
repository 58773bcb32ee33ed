//! Decision procedures built on the class-symbol calculus: invariance of a
//! limit element under the Frobenius operators, the coefficient-vanishing
//! cascade above index 1, the induced permutation of the support classes,
//! the conjugacy condition on finite groups, Bezout data for the commutator
//! identity, and the unipotent conjugacy criterion in SL(2, Q).

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::groupring::HH0Vector;
use crate::groups::sl2::{fmt_rat, rational_sqrt, RatMatrix2};
use crate::groups::{ClassId, Group};
use crate::trzero::TRLimitElem;
use crate::witt::TruncationSet;

/// lcm(1..n); 1 for n <= 1. Exponent of the symmetric group on n letters.
pub fn minimal_exponent(n: usize) -> BigInt {
    let mut m = BigInt::one();
    for k in 2..=n as u64 {
        m = m.lcm(&BigInt::from(k));
    }
    m
}

/// Lifts a class-indexed vector to a limit element concentrated at index 1
/// with full support declared: the shape any trace of an idempotent takes.
pub fn trace_shadow(rank: &HH0Vector, set: &TruncationSet) -> TRLimitElem {
    let coeffs = rank.support().map(|(c, v)| ((1u64, c), v.clone()));
    TRLimitElem::from_parts(Arc::clone(rank.group()), set.clone(), coeffs, true)
        .expect("index 1 lies in every truncation set")
}

fn prime_factors(mut s: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= s {
        while s % p == 0 {
            out.push(p);
            s /= p;
        }
        p += 1;
    }
    if s > 1 {
        out.push(s);
    }
    out
}

/// True iff applying the Frobenius operators along the prime factorization
/// of s reproduces the element on the common truncation S/s.
pub fn frobenius_invariance_check(a: &TRLimitElem, s: u64) -> Result<bool> {
    if s == 0 || !a.set().contains(s) {
        return Err(Error::TruncationTooSmall { s });
    }
    if s == 1 {
        return Ok(true);
    }
    let mut image = a.clone();
    for p in prime_factors(s) {
        image = image.frobenius_prime(p)?;
    }
    for ((t, c), v) in image.terms() {
        if a.coeff(t, c) != *v {
            return Ok(false);
        }
    }
    for ((t, c), v) in a.terms() {
        if image.set().contains(t) && image.coeff(t, c) != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One checked equality a(u) = p * a(pu) inside a derivation chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub u: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// The divisibility cascade for one key: starting at (t, class), each step
/// multiplies the index by the smallest prime factor p of t until the index
/// leaves the declared support, where the coefficient is zero by
/// declaration; a closed chain certifies the starting coefficient is zero.
#[derive(Clone, Debug)]
pub struct DerivationChain {
    pub t: u64,
    pub class: ClassId,
    pub p: u64,
    pub steps: Vec<ChainStep>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VanishingVerdict {
    AllHigherVanish,
    Counterexample((u64, ClassId)),
}

#[derive(Clone, Debug)]
pub struct VanishingCertificate {
    pub chains: Vec<DerivationChain>,
    pub verdict: VanishingVerdict,
}

impl VanishingCertificate {
    pub fn display(&self, group: &Group) -> String {
        let mut out = String::new();
        for chain in &self.chains {
            let rep = group.class_representative_encoding(chain.class);
            let steps: Vec<String> = chain
                .steps
                .iter()
                .map(|st| format!("a({})={} vs {}*a({})={}", st.u, st.lhs, chain.p, chain.p * st.u, st.rhs))
                .collect();
            out.push_str(&format!(
                "chain V{}[{}] p={}: {} => {}\n",
                chain.t,
                rep,
                chain.p,
                steps.join("; "),
                if chain.closed { "closed" } else { "broken" }
            ));
        }
        match &self.verdict {
            VanishingVerdict::AllHigherVanish => out.push_str("verdict: AllHigherVanish"),
            VanishingVerdict::Counterexample((t, c)) => out.push_str(&format!(
                "verdict: Counterexample V{}[{}]",
                t,
                group.class_representative_encoding(*c)
            )),
        }
        out
    }
}

/// Runs the cascade a(u) = p * a(pu) for every key (t, class) with t > 1 in
/// the truncation set. Coefficients outside the set are zero because the
/// input declares its full support, so a chain that walks out of the set
/// closes with value zero; a failed equality is returned as a
/// counterexample key (the input then cannot be Frobenius-invariant with
/// the declared support).
pub fn vanishing_certificate(a: &TRLimitElem) -> Result<VanishingCertificate> {
    if !a.full_support_declared() {
        return Err(Error::SupportNotDeclared);
    }
    let group = a.group();
    let set = a.set();
    let mut chains = Vec::new();
    let mut counterexample: Option<(u64, ClassId)> = None;
    for &t in set.elems() {
        if t == 1 {
            continue;
        }
        let p = prime_factors(t)[0];
        for c in 0..group.num_classes() {
            let c = ClassId(c as u32);
            let mut steps = Vec::new();
            let mut closed = true;
            let mut u = t;
            while set.contains(u) {
                let lhs = a.coeff(u, c);
                let rhs = if set.contains(p * u) {
                    BigInt::from(p) * a.coeff(p * u, c)
                } else {
                    BigInt::zero()
                };
                let ok = lhs == rhs;
                steps.push(ChainStep { u, lhs, rhs });
                if !ok {
                    closed = false;
                    break;
                }
                u *= p;
            }
            if !closed && counterexample.is_none() {
                counterexample = Some((t, c));
            }
            chains.push(DerivationChain { t, class: c, p, steps, closed });
        }
    }
    let verdict = match counterexample {
        None => VanishingVerdict::AllHigherVanish,
        Some(key) => VanishingVerdict::Counterexample(key),
    };
    Ok(VanishingCertificate { chains, verdict })
}

/// Per-power-map certificate inside a permutation report.
#[derive(Clone, Debug)]
pub struct PermutationStep {
    pub s: u64,
    pub stays_inside: bool,
    pub bijective: bool,
    pub coefficients_match: bool,
    pub power_of_map_is_identity: bool,
}

impl PermutationStep {
    pub fn pass(&self) -> bool {
        self.stays_inside && self.bijective && self.coefficients_match && self.power_of_map_is_identity
    }
}

/// Whether the power maps permute the nonidentity support classes of a rank
/// vector, preserving coefficients, with the lcm(1..n) power of each
/// restricted map verified to be the identity.
#[derive(Clone, Debug)]
pub struct PermutationReport {
    pub support: Vec<ClassId>,
    pub m: BigInt,
    pub steps: Vec<PermutationStep>,
}

impl PermutationReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|c| c.pass())
    }

    pub fn display(&self, group: &Group) -> String {
        let mut out = String::new();
        let support: Vec<String> = self
            .support
            .iter()
            .map(|&c| format!("[{}]", group.class_representative_encoding(c)))
            .collect();
        out.push_str(&format!(
            "support: {{{}}}\nm = {}\n",
            support.join(", "),
            self.m
        ));
        for s in &self.steps {
            out.push_str(&format!(
                "s={}: inside={} bijective={} coefficients={} power-identity={}\n",
                s.s, s.stays_inside, s.bijective, s.coefficients_match, s.power_of_map_is_identity
            ));
        }
        out.push_str(&format!("holds: {}", self.holds()));
        out
    }
}

/// Checks, for every s up to the group exponent, that the s-th power map
/// sends the nonidentity support of the rank bijectively onto itself with
/// matching coefficients, and that its m-th iterate is the identity on the
/// support, with m = minimal_exponent(|support|).
pub fn permutation_condition(rank: &HH0Vector, group: &Arc<Group>) -> PermutationReport {
    let support = rank.nonidentity_support();
    let m = minimal_exponent(support.len());
    let exponent = group.exponent();
    let mut steps = Vec::new();
    for s in 1..=exponent {
        let pm = group.power_map(s);
        let image: Vec<ClassId> = support.iter().map(|&c| pm.apply(c)).collect();
        let stays_inside = image.iter().all(|c| support.contains(c));
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let bijective = stays_inside && sorted.len() == support.len();
        let coefficients_match = support
            .iter()
            .zip(&image)
            .all(|(&c, &ic)| rank.coeff(c) == rank.coeff(ic));
        // iterate the restricted map m times by repeated squaring on the
        // exponent; the map itself is composed, not the group elements
        let power_of_map_is_identity = if bijective {
            let composed = iterate_map_on(&support, &image, &m);
            composed == support
        } else {
            false
        };
        steps.push(PermutationStep {
            s,
            stays_inside,
            bijective,
            coefficients_match,
            power_of_map_is_identity,
        });
    }
    PermutationReport { support, m, steps }
}

/// Computes the e-th iterate of the map support[i] -> image[i] applied to
/// the support tuple, by binary exponentiation over map composition.
fn iterate_map_on(support: &[ClassId], image: &[ClassId], e: &BigInt) -> Vec<ClassId> {
    let index_of = |c: ClassId| support.iter().position(|&x| x == c).expect("image inside support");
    // permutation as index array
    let mut base: Vec<usize> = image.iter().map(|&c| index_of(c)).collect();
    let mut acc: Vec<usize> = (0..support.len()).collect();
    let mut e = e.clone();
    let two = BigInt::from(2);
    while e > BigInt::zero() {
        if (&e % &two).is_one() {
            acc = acc.iter().map(|&i| base[i]).collect();
        }
        base = base.iter().map(|&i| base[i]).collect();
        e /= &two;
    }
    acc.iter().map(|&i| support[i]).collect()
}

/// Verdict for one conjugacy class: either a uniform m making the class
/// fixed by every power map s <= exponent applied m-fold as s^m, or a
/// refuting s. Taking s = order(g) refutes every nonidentity class outright
/// because g^(s^m) = 1 for all m >= 1, so refutations are absolute, not
/// bound-relative.
#[derive(Clone, Debug)]
pub struct LinnellClassVerdict {
    pub class: ClassId,
    pub admissible: bool,
    pub witness_m: Option<u64>,
    pub refuting_s: Option<u64>,
    pub refutation_absolute: bool,
}

#[derive(Clone, Debug)]
pub struct LinnellReport {
    pub exponent: u64,
    pub m_bound: u64,
    pub verdicts: Vec<LinnellClassVerdict>,
}

impl LinnellReport {
    pub fn admissible_classes(&self) -> Vec<ClassId> {
        self.verdicts.iter().filter(|v| v.admissible).map(|v| v.class).collect()
    }

    pub fn display(&self, group: &Group) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "exponent = {}, m searched up to {}\n",
            self.exponent, self.m_bound
        ));
        for v in &self.verdicts {
            let rep = group.class_representative_encoding(v.class);
            match (v.admissible, v.witness_m, v.refuting_s) {
                (true, Some(m), _) => {
                    out.push_str(&format!("[{rep}]: admissible with m = {m}\n"));
                }
                (false, _, Some(s)) => {
                    out.push_str(&format!(
                        "[{rep}]: refuted by s = {s}{}\n",
                        if v.refutation_absolute { " (for every m)" } else { "" }
                    ));
                }
                _ => out.push_str(&format!("[{rep}]: undecided\n")),
            }
        }
        let admissible: Vec<String> = self
            .admissible_classes()
            .iter()
            .map(|&c| format!("[{}]", group.class_representative_encoding(c)))
            .collect();
        out.push_str(&format!("admissible: {{{}}}", admissible.join(", ")));
        out
    }
}

/// Decides, for each conjugacy class of a finite group, whether some
/// m <= m_bound makes the class fixed under every s^m power map. Powers of
/// s only matter modulo the group exponent, so s ranges over 1..=exponent;
/// this makes the universal quantifier over all positive s decidable.
pub fn linnell_admissible_with_bound(group: &Arc<Group>, m_bound: u64) -> LinnellReport {
    let exponent = group.exponent();
    let mut verdicts = Vec::new();
    for c in 0..group.num_classes() {
        let class = ClassId(c as u32);
        let rep = group.class(class).representative;
        let mut witness_m = None;
        'search: for m in 1..=m_bound {
            for s in 1..=exponent {
                // s^m reduced modulo the element order before powering
                let e = BigInt::from(s).pow(m as u32);
                let powered = group.pow_idx_big(rep, &e);
                if group.class_of(powered) != class {
                    continue 'search;
                }
            }
            witness_m = Some(m);
            break;
        }
        match witness_m {
            Some(m) => verdicts.push(LinnellClassVerdict {
                class,
                admissible: true,
                witness_m: Some(m),
                refuting_s: None,
                refutation_absolute: false,
            }),
            None => {
                // s = order(rep) sends the class to the identity for every m
                let s = group.order_of(rep);
                let absolute = rep != group.identity();
                verdicts.push(LinnellClassVerdict {
                    class,
                    admissible: false,
                    witness_m: None,
                    refuting_s: Some(s),
                    refutation_absolute: absolute,
                });
            }
        }
    }
    LinnellReport { exponent, m_bound, verdicts }
}

pub fn linnell_admissible(group: &Arc<Group>) -> LinnellReport {
    linnell_admissible_with_bound(group, group.exponent())
}

/// Bezout data for the commutator identity at a given m: s = 2^m - 1 and
/// integers k, l with k(2^m - 1) + l(s^m - 1) = 1. The two moduli are
/// always coprime since any prime dividing 2^m - 1 divides s, hence
/// s^m - 1 = -1 modulo it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutWitness {
    pub m: u64,
    pub s: BigInt,
    pub k: BigInt,
    pub l: BigInt,
}

impl BezoutWitness {
    pub fn two_m_minus_one(&self) -> BigInt {
        BigInt::from(2).pow(self.m as u32) - BigInt::one()
    }

    pub fn s_m_minus_one(&self) -> BigInt {
        self.s.pow(self.m as u32) - BigInt::one()
    }

    pub fn verify(&self) -> bool {
        &self.k * self.two_m_minus_one() + &self.l * self.s_m_minus_one() == BigInt::one()
    }
}

impl fmt::Display for BezoutWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} s={} k={} l={} ({}*{} + {}*{} = 1)",
            self.m,
            self.s,
            self.k,
            self.l,
            self.k,
            self.two_m_minus_one(),
            self.l,
            self.s_m_minus_one()
        )
    }
}

/// Extended-Euclid certificate for m >= 1, normalized by reducing k into
/// [0, s^m - 1) when s^m - 1 is nonzero (which forces the minimal |l|).
pub fn bezout_witness(m: u64) -> BezoutWitness {
    assert!(m >= 1, "m must be positive");
    let a = BigInt::from(2).pow(m as u32) - BigInt::one();
    let s = a.clone();
    let b = s.pow(m as u32) - BigInt::one();
    if b.is_zero() {
        return BezoutWitness { m, s, k: BigInt::one(), l: BigInt::zero() };
    }
    let ext = a.extended_gcd(&b);
    debug_assert!(ext.gcd.is_one());
    let k = ext.x.mod_floor(&b);
    let l = (BigInt::one() - &k * &a) / &b;
    let w = BezoutWitness { m, s, k, l };
    debug_assert!(w.verify());
    w
}

/// Outcome of checking g = [x,g]^k [y,g]^l against the premises
/// g^(2^m) = x g x^(-1) and g^(s^m) = y g y^(-1).
#[derive(Clone, Debug)]
pub struct CommutatorCheck {
    pub premise_x: bool,
    pub premise_y: bool,
    pub identity_holds: bool,
    pub diagnostic: Option<String>,
}

impl CommutatorCheck {
    pub fn pass(&self) -> bool {
        self.premise_x && self.premise_y && self.identity_holds
    }
}

/// Verifies the commutator expression of g from conjugators x and y
/// realizing the 2^m-th and s^m-th powers of g, with exponents from
/// bezout_witness(m). Commutator convention: [a, b] = a b a^(-1) b^(-1).
pub fn commutator_witness_check(
    group: &Arc<Group>,
    g: usize,
    x: usize,
    y: usize,
    m: u64,
) -> CommutatorCheck {
    let w = bezout_witness(m);
    let conj = |h: usize, t: usize| {
        group.mul_idx(group.mul_idx(h, t), group.inv_idx(h))
    };
    let two_m = BigInt::from(2).pow(m as u32);
    let s_m = w.s.pow(m as u32);
    let premise_x = group.pow_idx_big(g, &two_m) == conj(x, g);
    let premise_y = group.pow_idx_big(g, &s_m) == conj(y, g);
    let mut diagnostic = None;
    if !premise_x {
        diagnostic = Some("x does not conjugate g to its 2^m-th power".into());
    } else if !premise_y {
        diagnostic = Some("y does not conjugate g to its s^m-th power".into());
    }
    let commutator = |a: usize, b: usize| {
        group.mul_idx(
            group.mul_idx(a, b),
            group.mul_idx(group.inv_idx(a), group.inv_idx(b)),
        )
    };
    let lhs = g;
    let cx = commutator(x, g);
    let cy = commutator(y, g);
    let rhs = group.mul_idx(group.pow_idx_big(cx, &w.k), group.pow_idx_big(cy, &w.l));
    let identity_holds = lhs == rhs;
    if identity_holds && diagnostic.is_none() && !(premise_x && premise_y) {
        diagnostic = Some("identity holds but premises were not verified".into());
    }
    CommutatorCheck { premise_x, premise_y, identity_holds, diagnostic }
}

/// For the unipotent g = [[1,1],[0,1]], decides whether g^k (meaning
/// [[1,k],[0,1]]) is conjugate to g in SL(2, Q), returning the diagonal
/// witness when k is a square of a rational. For h = [[a,b],[c,d]] the
/// equation h g = g^k h forces c = 0, a = k d, and a d = 1, hence k = a^2;
/// so no witness exists otherwise.
pub fn sl2_unipotent_conjugacy(k: &BigRational) -> Result<Option<RatMatrix2>> {
    if k.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match rational_sqrt(k) {
        None => Ok(None),
        Some(a) => {
            let h = RatMatrix2::new(
                a.clone(),
                BigRational::zero(),
                BigRational::zero(),
                a.recip(),
            );
            let g = RatMatrix2::unipotent(&BigRational::one());
            let gk = RatMatrix2::unipotent(k);
            let conj = h.mul(&g).mul(&h.inv().expect("diagonal with nonzero entries"));
            assert_eq!(conj, gk, "witness failed exact verification for k = {}", fmt_rat(k));
            Ok(Some(h))
        }
    }
}
