//! Exact matrix arithmetic over Q, over Q_p balls, and mod p, with the
//! finite-order machinery for GL_n(Z_p).
//!
//! The torsion test rests on reduction mod p being injective on finite
//! subgroups of GL_n(Z_p) for odd p: a matrix has finite order exactly
//! when raising it to the order of its reduction gives the identity, and
//! that order is the answer. At p = 2 the kernel of reduction can contain
//! elements of order two, so the candidate orders are m0 and 2 m0; the
//! structure of that kernel (every finite-order element of I + 2 M_n(Z_2)
//! is an involution, and I + 4 M_n(Z_2) is torsion free) is what the
//! subgroup checks exercise.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::{PadicNumber, ValuationInfo};
use crate::valuation::{vp, Prime};

/// A square matrix with exact rational entries, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {}x{} entries, got {}",
                n,
                n,
                entries.len()
            )));
        }
        Ok(RationalMatrix { n, entries })
    }

    pub fn from_integer_entries(n: usize, entries: &[i64]) -> Result<Self> {
        RationalMatrix::new(
            n,
            entries
                .iter()
                .map(|&e| BigRational::from_integer(BigInt::from(e)))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        RationalMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == RationalMatrix::identity(self.n)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Parse(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(RationalMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(RationalMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * &other.entries[k * n + j];
                    entries[i * n + j] += t;
                }
            }
        }
        Ok(RationalMatrix { n, entries })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = RationalMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            e >>= 1;
        }
        acc
    }

    /// Exact determinant by Gaussian elimination over Q.
    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut flip = false;
        let mut result = BigRational::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pr != col {
                for c in 0..n {
                    m.swap(pr * n + c, col * n + c);
                }
                flip = !flip;
            }
            let piv = m[col * n + col].clone();
            result *= &piv;
            for r in (col + 1)..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let factor = &m[r * n + col] / &piv;
                for c in col..n {
                    let t = &factor * &m[col * n + c];
                    m[r * n + c] -= t;
                }
            }
        }
        if flip {
            -result
        } else {
            result
        }
    }

    /// Exact inverse, or None when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut left = self.entries.clone();
        let mut right = RationalMatrix::identity(n).entries;
        for col in 0..n {
            let pr = (col..n).find(|&r| !left[r * n + col].is_zero())?;
            if pr != col {
                for c in 0..n {
                    left.swap(pr * n + c, col * n + c);
                    right.swap(pr * n + c, col * n + c);
                }
            }
            let piv = left[col * n + col].clone();
            for c in 0..n {
                left[col * n + c] /= &piv;
                right[col * n + c] /= &piv;
            }
            for r in 0..n {
                if r == col || left[r * n + col].is_zero() {
                    continue;
                }
                let factor = left[r * n + col].clone();
                for c in 0..n {
                    let tl = &factor * &left[col * n + c];
                    left[r * n + c] -= tl;
                    let tr = &factor * &right[col * n + c];
                    right[r * n + c] -= tr;
                }
            }
        }
        Some(RationalMatrix { n, entries: right })
    }

    /// Entrywise p-integrality: no denominator divisible by p.
    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.entries
            .iter()
            .all(|e| e.is_zero() || vp(p, e).expect("nonzero") >= 0)
    }
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Parse the matrix file format: a dimension n followed by n*n rational
/// entries, whitespace separated, row major.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|_| Error::Parse("matrix file must start with its dimension".into()))?;
    if n == 0 {
        return Err(Error::Parse("matrix dimension must be positive".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} entries", n * n)))?;
        entries.push(crate::valuation::parse_rational(tok)?);
    }
    if tokens.next().is_some() {
        return Err(Error::Parse(format!("more than {} entries", n * n)));
    }
    RationalMatrix::new(n, entries)
}

/// A square matrix over F_p (or any prime modulus), entries in [0, p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GfpMatrix {
    modulus: u64,
    n: usize,
    entries: Vec<u64>,
}

fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % m as u128;
    base = 0;
    let _ = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn rational_mod(x: &BigRational, modulus: u64) -> Result<u64> {
    let m = BigInt::from(modulus);
    let den = x
        .denom()
        .mod_floor(&m)
        .to_u64()
        .expect("reduced mod u64 modulus");
    if den == 0 {
        return Err(Error::NotAUnitResidue);
    }
    let num = x
        .numer()
        .mod_floor(&m)
        .to_u64()
        .expect("reduced mod u64 modulus");
    // modulus is prime, so Fermat inversion applies
    let inv = pow_mod_u64(den, modulus - 2, modulus);
    Ok((num as u128 * inv as u128 % modulus as u128) as u64)
}

impl GfpMatrix {
    /// Reduce a rational matrix mod a prime modulus; denominators divisible
    /// by the modulus are refused.
    pub fn from_rational_matrix(a: &RationalMatrix, modulus: u64) -> Result<Self> {
        let entries = a
            .entries()
            .iter()
            .map(|e| rational_mod(e, modulus))
            .collect::<Result<Vec<u64>>>()?;
        Ok(GfpMatrix {
            modulus,
            n: a.n(),
            entries,
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % modulus;
        }
        GfpMatrix {
            modulus,
            n,
            entries,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        *self == GfpMatrix::identity(self.modulus, self.n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.n;
        let m = self.modulus as u128;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = (entries[i * n + j] as u128
                        + a * other.entries[k * n + j] as u128)
                        % m;
                    entries[i * n + j] = t as u64;
                }
            }
        }
        GfpMatrix {
            modulus: self.modulus,
            n,
            entries,
        }
    }

    /// Least k in [1, cap] with self^k = I, if any.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut power = self.clone();
        for k in 1..=cap {
            if power.is_identity() {
                return Some(k);
            }
            power = power.mul(self);
        }
        None
    }
}

/// |GL_n(F_p)|, saturating at u64::MAX; every element order divides it.
pub fn gl_group_order(p: u64, n: usize) -> u64 {
    let pn = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p));
    let Some(pn) = pn else {
        return u64::MAX;
    };
    let mut order = 1u64;
    let mut pi = 1u64;
    for _ in 0..n {
        let Some(factor) = pn.checked_sub(pi) else {
            return u64::MAX;
        };
        order = match order.checked_mul(factor) {
            Some(o) => o,
            None => return u64::MAX,
        };
        pi = match pi.checked_mul(p) {
            Some(v) => v,
            None => return u64::MAX,
        };
    }
    order
}

/// A square matrix of balls at a fixed prime.
#[derive(Clone, PartialEq, Debug)]
pub struct PadicMatrix {
    prime: Prime,
    n: usize,
    entries: Vec<PadicNumber>,
}

impl PadicMatrix {
    pub fn new(prime: Prime, n: usize, entries: Vec<PadicNumber>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {}x{} entries, got {}",
                n,
                n,
                entries.len()
            )));
        }
        for e in &entries {
            if e.prime() != prime {
                return Err(Error::PrimeMismatch(prime.get(), e.prime().get()));
            }
        }
        Ok(PadicMatrix { prime, n, entries })
    }

    pub fn from_rational_matrix(a: &RationalMatrix, prime: Prime, rel_precision: u32) -> Self {
        PadicMatrix {
            prime,
            n: a.n(),
            entries: a
                .entries()
                .iter()
                .map(|e| PadicNumber::from_rational(e, prime, rel_precision))
                .collect(),
        }
    }

    pub fn identity(prime: Prime, n: usize, rel_precision: u32) -> Self {
        let mut entries = vec![PadicNumber::exact_zero(prime); n * n];
        for i in 0..n {
            entries[i * n + i] = PadicNumber::one(prime, rel_precision);
        }
        PadicMatrix { prime, n, entries }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        if self.n != other.n {
            return Err(Error::Parse(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries,
        })
    }

    pub fn scalar_mul_rational(&self, c: &BigRational) -> Self {
        PadicMatrix {
            prime: self.prime,
            n: self.n,
            entries: self.entries.iter().map(|e| e.mul_rational(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = PadicNumber::exact_zero(self.prime);
                for k in 0..n {
                    let t = self.entries[i * n + k].mul(&other.entries[k * n + j])?;
                    acc = acc.add(&t)?;
                }
                entries.push(acc);
            }
        }
        Ok(PadicMatrix {
            prime: self.prime,
            n,
            entries,
        })
    }

    pub fn pow(&self, mut e: u64, rel_precision: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = PadicMatrix::identity(self.prime, self.n, rel_precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Every entry certified to lie in Z_p.
    pub fn entries_in_zp(&self) -> bool {
        self.entries.iter().all(|e| e.in_zp())
    }

    /// Determinant by elimination, pivoting on the entry of largest norm
    /// whose valuation is exactly known. A column whose remaining entries
    /// are all exactly zero gives determinant exactly zero; a column where
    /// the only candidates are indistinguishable from zero cannot be
    /// resolved at this precision.
    pub fn det(&self) -> Result<PadicNumber> {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut flip = false;
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let mut best: Option<(usize, i64)> = None;
            let mut any_fuzzy = false;
            for r in col..n {
                match m[r * n + col].valuation_info() {
                    ValuationInfo::Exact(v) => {
                        if best.is_none_or(|(_, bv)| v < bv) {
                            best = Some((r, v));
                        }
                    }
                    ValuationInfo::AtLeast(_) => any_fuzzy = true,
                    ValuationInfo::Infinite => {}
                }
            }
            let Some((pr, _)) = best else {
                if any_fuzzy {
                    return Err(Error::RaisePrecision);
                }
                return Ok(PadicNumber::exact_zero(self.prime));
            };
            if pr != col {
                for c in 0..n {
                    m.swap(pr * n + c, col * n + c);
                }
                flip = !flip;
            }
            let piv = m[col * n + col].clone();
            for r in (col + 1)..n {
                if m[r * n + col].is_exact_zero() {
                    continue;
                }
                let factor = m[r * n + col].div(&piv)?;
                for c in col..n {
                    let t = factor.mul(&m[col * n + c])?;
                    m[r * n + c] = m[r * n + c].sub(&t)?;
                }
            }
            pivots.push(piv);
        }
        let mut det = PadicNumber::one(self.prime, 64);
        for piv in pivots {
            det = det.mul(&piv)?;
        }
        Ok(if flip { det.neg() } else { det })
    }

    /// Membership in GL_n(Z_p): integral entries and unit determinant.
    /// Integrality of the inverse then comes for free via the adjugate.
    pub fn is_glnzp(&self) -> Result<bool> {
        for e in &self.entries {
            match e.valuation_info() {
                ValuationInfo::Exact(v) if v < 0 => return Ok(false),
                ValuationInfo::AtLeast(a) if a < 0 => {
                    return Err(Error::Undecidable(
                        "entry not certified integral at this precision".into(),
                    ))
                }
                _ => {}
            }
        }
        match self.det()?.valuation_info() {
            ValuationInfo::Exact(v) => Ok(v == 0),
            ValuationInfo::Infinite => Ok(false),
            ValuationInfo::AtLeast(a) if a >= 1 => Ok(false),
            ValuationInfo::AtLeast(_) => Err(Error::Undecidable(
                "determinant valuation unresolved at this precision".into(),
            )),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut left = self.entries.clone();
        let mut right = PadicMatrix::identity(self.prime, n, 64).entries;
        for col in 0..n {
            let mut best: Option<(usize, i64)> = None;
            let mut any_fuzzy = false;
            for r in col..n {
                match left[r * n + col].valuation_info() {
                    ValuationInfo::Exact(v) => {
                        if best.is_none_or(|(_, bv)| v < bv) {
                            best = Some((r, v));
                        }
                    }
                    ValuationInfo::AtLeast(_) => any_fuzzy = true,
                    ValuationInfo::Infinite => {}
                }
            }
            let Some((pr, _)) = best else {
                if any_fuzzy {
                    return Err(Error::RaisePrecision);
                }
                return Err(Error::HypothesisFailed("singular matrix".into()));
            };
            if pr != col {
                for c in 0..n {
                    left.swap(pr * n + c, col * n + c);
                    right.swap(pr * n + c, col * n + c);
                }
            }
            let piv_inv = left[col * n + col].invert()?;
            for c in 0..n {
                left[col * n + c] = left[col * n + c].mul(&piv_inv)?;
                right[col * n + c] = right[col * n + c].mul(&piv_inv)?;
            }
            for r in 0..n {
                if r == col || left[r * n + col].is_exact_zero() {
                    continue;
                }
                let factor = left[r * n + col].clone();
                for c in 0..n {
                    let tl = factor.mul(&left[col * n + c])?;
                    left[r * n + c] = left[r * n + c].sub(&tl)?;
                    let tr = factor.mul(&right[col * n + c])?;
                    right[r * n + c] = right[r * n + c].sub(&tr)?;
                }
            }
        }
        Ok(PadicMatrix {
            prime: self.prime,
            n,
            entries: right,
        })
    }

    /// Entrywise reduction mod p into GL-over-F_p land.
    pub fn reduce_mod_p(&self) -> Result<GfpMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                crate::residue::reduce(e, 1).map(|r| {
                    r.representative()
                        .to_u64()
                        .expect("single digit fits u64")
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(GfpMatrix {
            modulus: self.prime.get(),
            n: self.n,
            entries,
        })
    }
}

/// The multiplicative shape of a matrix congruent to the identity:
/// A = I + p^j B with j >= 1 and B carrying a unit entry.
#[derive(Clone, Debug)]
pub struct UnipotentShape {
    pub j: i64,
    pub b: PadicMatrix,
}

#[derive(Clone, Debug)]
pub enum ShapeOutcome {
    Shape(UnipotentShape),
    NotCongruentToI,
}

/// Extract j and B from A = I + p^j B, or report that A is not congruent
/// to the identity mod p. The identity itself carries no shape.
pub fn unipotent_shape(a: &PadicMatrix) -> Result<ShapeOutcome> {
    if !a.entries_in_zp() {
        return Err(Error::HypothesisFailed(
            "shape extraction needs entries certified in Z_p".into(),
        ));
    }
    let ident = PadicMatrix::identity(a.prime(), a.n(), 64);
    let d = a.sub(&ident)?;
    let mut min_exact: Option<i64> = None;
    let mut min_bound: Option<i64> = None;
    for e in d.entries() {
        match e.valuation_info() {
            ValuationInfo::Exact(v) => {
                min_exact = Some(min_exact.map_or(v, |m| m.min(v)));
            }
            ValuationInfo::AtLeast(b) => {
                min_bound = Some(min_bound.map_or(b, |m| m.min(b)));
            }
            ValuationInfo::Infinite => {}
        }
    }
    // all zero-kinds: at working precision A cannot be told apart from I
    let Some(j) = min_exact else {
        return Err(Error::IdentityMatrix);
    };
    if let Some(b) = min_bound {
        if b < j {
            return Err(Error::InsufficientPrecision(
                "a fuzzy entry of A - I may dominate the leading power".into(),
            ));
        }
    }
    if j == 0 {
        return Ok(ShapeOutcome::NotCongruentToI);
    }
    let scale = a.prime().power_rational(-j);
    Ok(ShapeOutcome::Shape(UnipotentShape {
        j,
        b: d.scalar_mul_rational(&scale),
    }))
}

/// Check the leading-term expansion A^q = I + q p^j B + O(p^(2j)) at
/// working precision, plus the exact identity A^2 = I + 4B + 4B^2 when
/// p = q = 2 and j = 1.
pub fn power_expansion_check(a: &PadicMatrix, q: Prime) -> Result<bool> {
    let shape = match unipotent_shape(a)? {
        ShapeOutcome::Shape(s) => s,
        ShapeOutcome::NotCongruentToI => {
            return Err(Error::HypothesisFailed(
                "A is not congruent to the identity mod p".into(),
            ))
        }
    };
    let p = a.prime();
    let ident = PadicMatrix::identity(p, a.n(), 64);
    let aq = a.pow(q.get(), 64)?;
    let lead = shape
        .b
        .scalar_mul_rational(&(p.power_rational(shape.j) * q.power_rational(1)));
    let err = aq.sub(&ident)?.sub(&lead)?;
    for e in err.entries() {
        match e.valuation_info() {
            ValuationInfo::Exact(v) if v < 2 * shape.j => return Ok(false),
            ValuationInfo::AtLeast(b) if b < 2 * shape.j => {
                return Err(Error::InsufficientPrecision(
                    "expansion check needs at least 2j digits".into(),
                ))
            }
            _ => {}
        }
    }
    if p.get() == 2 && q.get() == 2 && shape.j == 1 {
        let four = BigRational::from_integer(BigInt::from(4));
        let b4 = shape.b.scalar_mul_rational(&four);
        let bb4 = shape.b.mul(&shape.b)?.scalar_mul_rational(&four);
        let exact = a
            .pow(2, 64)?
            .sub(&ident)?
            .sub(&b4)?
            .sub(&bb4)?;
        for e in exact.entries() {
            if matches!(e.valuation_info(), ValuationInfo::Exact(_)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TorsionOutcome {
    Torsion { order: u64 },
    InfiniteOrder,
    NotInGLnZp,
}

impl std::fmt::Display for TorsionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorsionOutcome::Torsion { order } => write!(f, "torsion of order {order}"),
            TorsionOutcome::InfiniteOrder => write!(f, "infinite order"),
            TorsionOutcome::NotInGLnZp => write!(f, "not in GL_n(Z_p)"),
        }
    }
}

/// Decide whether a rational matrix, read inside GL_n(Z_p), has finite
/// order, and produce the exact order when it does.
///
/// m0 is the order of the reduction mod p. For odd p the only candidate is
/// m0 itself; for p = 2 the candidates are m0 and 2 m0. Everything is
/// settled by exact rational powering, so no precision questions arise.
pub fn torsion_test(a: &RationalMatrix, p: Prime) -> Result<TorsionOutcome> {
    if !a.is_p_integral(p) {
        return Ok(TorsionOutcome::NotInGLnZp);
    }
    let det = a.det();
    if det.is_zero() || vp(p, &det).expect("nonzero") != 0 {
        return Ok(TorsionOutcome::NotInGLnZp);
    }
    let reduced = GfpMatrix::from_rational_matrix(a, p.get())?;
    let cap = gl_group_order(p.get(), a.n());
    let m0 = reduced
        .order(cap)
        .expect("invertible reduction has finite order");
    if a.pow(m0).is_identity() {
        return Ok(TorsionOutcome::Torsion { order: m0 });
    }
    if p.get() == 2 && a.pow(2 * m0).is_identity() {
        return Ok(TorsionOutcome::Torsion { order: 2 * m0 });
    }
    Ok(TorsionOutcome::InfiniteOrder)
}

#[derive(Clone, Debug)]
pub struct TwoAdicReport {
    /// indices of elements congruent to I mod 2
    pub h_indices: Vec<usize>,
    pub involutions_ok: bool,
    pub abelian_ok: bool,
    /// elements of H congruent to I mod 4 must equal I exactly
    pub mod4_rigidity_ok: bool,
}

#[derive(Clone, Debug)]
pub struct SubgroupReport {
    /// pairs (i, j) whose product is missing from the list
    pub closure_failures: Vec<(usize, usize)>,
    /// indices whose inverse is missing from the list
    pub inverse_failures: Vec<usize>,
    pub all_in_glnzp: bool,
    /// primes dividing an entry denominator or carrying a non-unit det
    pub bad_primes: Vec<u64>,
    /// for odd p: reduction mod p is injective on the list
    pub injective_mod_p: Option<bool>,
    /// for p = 2: structure of the kernel-of-reduction part
    pub two_adic: Option<TwoAdicReport>,
}

impl SubgroupReport {
    pub fn closure_ok(&self) -> bool {
        self.closure_failures.is_empty() && self.inverse_failures.is_empty()
    }
}

fn trial_factor_biguint(value: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut v = value.abs();
    if v <= BigInt::one() {
        return out;
    }
    let mut d = BigInt::from(2u32);
    while &d * &d <= v {
        if (&v % &d).is_zero() {
            out.push(d.to_u64().expect("small trial divisor"));
            while (&v % &d).is_zero() {
                v /= &d;
            }
        }
        d += 1;
    }
    if v > BigInt::one() {
        out.push(v.to_u64().expect("desk-scale cofactor"));
    }
    out
}

fn matrix_glnzp(a: &RationalMatrix, p: Prime) -> bool {
    if !a.is_p_integral(p) {
        return false;
    }
    let det = a.det();
    !det.is_zero() && vp(p, &det).expect("nonzero") == 0
}

/// Verify a finite list of rational matrices as a subgroup of GL_n(Z_p)
/// and report the reduction-mod-p structure. Failures are data, not
/// errors: a broken closure shows up in the report.
pub fn subgroup_checks(elements: &[RationalMatrix], p: Prime) -> Result<SubgroupReport> {
    let Some(first) = elements.first() else {
        return Err(Error::Parse("empty element list".into()));
    };
    let n = first.n();
    for e in elements {
        if e.n() != n {
            return Err(Error::Parse("mixed matrix dimensions".into()));
        }
    }

    let mut closure_failures = Vec::new();
    let mut inverse_failures = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let prod = a.mul(b)?;
            if !elements.contains(&prod) {
                closure_failures.push((i, j));
            }
        }
        match a.inverse() {
            Some(inv) => {
                if !elements.contains(&inv) {
                    inverse_failures.push(i);
                }
            }
            None => inverse_failures.push(i),
        }
    }

    let all_in_glnzp = elements.iter().all(|e| matrix_glnzp(e, p));

    let mut bad: BTreeSet<u64> = BTreeSet::new();
    for e in elements {
        for entry in e.entries() {
            for q in trial_factor_biguint(entry.denom()) {
                bad.insert(q);
            }
        }
        let det = e.det();
        if !det.is_zero() {
            for q in trial_factor_biguint(det.numer()) {
                bad.insert(q);
            }
            for q in trial_factor_biguint(det.denom()) {
                bad.insert(q);
            }
        }
    }

    let injective_mod_p = if p.get() != 2 && all_in_glnzp {
        let reductions = elements
            .iter()
            .map(|e| GfpMatrix::from_rational_matrix(e, p.get()))
            .collect::<Result<Vec<_>>>()?;
        let mut distinct = true;
        for i in 0..reductions.len() {
            for j in (i + 1)..reductions.len() {
                if reductions[i] == reductions[j] && elements[i] != elements[j] {
                    distinct = false;
                }
            }
        }
        Some(distinct)
    } else {
        None
    };

    let two_adic = if p.get() == 2 {
        let two = Prime::new(2).expect("2 is prime");
        let congruent_to_i = |a: &RationalMatrix| -> bool {
            let d = a.sub(&RationalMatrix::identity(n)).expect("same dim");
            d.entries()
                .iter()
                .all(|e| e.is_zero() || vp(two, e).expect("nonzero") >= 1)
        };
        let h_indices: Vec<usize> = elements
            .iter()
            .enumerate()
            .filter(|(_, a)| congruent_to_i(a))
            .map(|(i, _)| i)
            .collect();
        let involutions_ok = h_indices
            .iter()
            .all(|&i| elements[i].pow(2).is_identity());
        let mut abelian_ok = true;
        for &i in &h_indices {
            for &j in &h_indices {
                let ab = elements[i].mul(&elements[j])?;
                let ba = elements[j].mul(&elements[i])?;
                if ab != ba {
                    abelian_ok = false;
                }
            }
        }
        let mod4_rigidity_ok = h_indices.iter().all(|&i| {
            let d = elements[i]
                .sub(&RationalMatrix::identity(n))
                .expect("same dim");
            let congruent_mod4 = d
                .entries()
                .iter()
                .all(|e| e.is_zero() || vp(two, e).expect("nonzero") >= 2);
            !congruent_mod4 || elements[i].is_identity()
        });
        Some(TwoAdicReport {
            h_indices,
            involutions_ok,
            abelian_ok,
            mod4_rigidity_ok,
        })
    } else {
        None
    };

    Ok(SubgroupReport {
        closure_failures,
        inverse_failures,
        all_in_glnzp,
        bad_primes: bad.into_iter().collect(),
        injective_mod_p,
        two_adic,
    })
}

/// For an exact involution A (A^2 = I), the complementary eigenprojections
/// ((I - A)/2, (I + A)/2) onto the -1 and +1 eigenspaces.
pub fn involution_projections(
    a: &RationalMatrix,
) -> Result<(RationalMatrix, RationalMatrix)> {
    let ident = RationalMatrix::identity(a.n());
    if !a.pow(2).is_identity() {
        return Err(Error::NotAnInvolution);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let minus = ident.sub(a)?.scalar_mul(&half);
    let plus = ident.add(a)?.scalar_mul(&half);
    Ok((minus, plus))
}
