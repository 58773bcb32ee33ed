//! Exact 2x2 rational matrices with determinant checks for SL(2, Q) work.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// 2x2 matrix over Q. Entries are kept reduced with positive denominators
/// (num normalizes on construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl RatMatrix2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        RatMatrix2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |n: i64| BigRational::from(BigInt::from(n));
        RatMatrix2::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        RatMatrix2::new(
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        )
    }

    /// Upper unitriangular matrix [[1, k], [0, 1]].
    pub fn unipotent(k: &BigRational) -> Self {
        RatMatrix2::new(BigRational::one(), k.clone(), BigRational::zero(), BigRational::one())
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_sl2(&self) -> bool {
        self.det().is_one()
    }

    pub fn check_sl2(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::NotInSL2(fmt_rat(&det)))
        }
    }

    pub fn mul(&self, rhs: &RatMatrix2) -> RatMatrix2 {
        RatMatrix2::new(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }

    /// Inverse of a determinant-one matrix: [[d, -b], [-c, a]].
    pub fn inv(&self) -> Result<RatMatrix2> {
        self.check_sl2()?;
        Ok(RatMatrix2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone()))
    }

    /// Integer power, negative exponents via the inverse.
    pub fn pow(&self, k: i64) -> Result<RatMatrix2> {
        self.check_sl2()?;
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = RatMatrix2::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Canonical encoding, e.g. "[[1,1],[0,1]]" or "[[1/2,0],[0,2]]".
    pub fn encode(&self) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            fmt_rat(&self.a),
            fmt_rat(&self.b),
            fmt_rat(&self.c),
            fmt_rat(&self.d)
        )
    }

    /// Parses the canonical encoding produced by `encode`.
    pub fn parse(s: &str) -> Result<RatMatrix2> {
        let inner = s
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("malformed matrix encoding {s:?}")))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("expected two rows in {s:?}")));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!("expected two entries per row in {s:?}")));
            }
            for col in cols {
                entries.push(parse_rational(col)?);
            }
        }
        let d = entries.pop().unwrap();
        let c = entries.pop().unwrap();
        let b = entries.pop().unwrap();
        let a = entries.pop().unwrap();
        Ok(RatMatrix2::new(a, b, c, d))
    }
}

/// Formats a rational as "n" or "n/d" with the sign on the numerator.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p", "-p" or "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from(n))
    }
}

/// True when the reduced rational is a square in Q; returns the positive root.
pub fn rational_sqrt(k: &BigRational) -> Option<BigRational> {
    if k.is_negative() || k.is_zero() {
        return None;
    }
    let num = k.numer();
    let den = k.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}
