//! Capped-relative-precision elements of Q_p.
//!
//! A value is one of three kinds:
//!
//! * `ExactZero` — the additive identity, known to infinite precision;
//! * `ZeroBall(a)` — the ball O(p^a), anything of absolute value <= p^(-a);
//! * `Unit { v, u, N }` — the ball p^v*u + O(p^(v+N)) with u a unit residue
//!   (0 < u < p^N, p does not divide u) and N >= 1 known digits.
//!
//! Every operation returns the tightest representable ball containing the
//! set image of the operand balls, so an exact rational carried through the
//! same expression always lies in the computed ball. Full cancellation in
//! addition demotes to `ZeroBall` rather than inventing digits.
//!
//! The unit residue is reduced mod p^N at all times; absolute precision
//! (the exponent under the O) is v+N for units, a for zero balls, and
//! infinite for the exact zero.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::valuation::{vp, Prime};

/// Constructor-time default for the number of unit digits to carry.
#[derive(Copy, Clone, Debug)]
pub struct PrecisionPolicy {
    pub default_rel_precision: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            default_rel_precision: 32,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Kind {
    ExactZero,
    ZeroBall {
        abs_precision: i64,
    },
    Unit {
        valuation: i64,
        unit: BigUint,
        rel_precision: u32,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PadicNumber {
    prime: Prime,
    kind: Kind,
}

/// Exact or one-sided information about an absolute value.
#[derive(Clone, PartialEq, Debug)]
pub enum NormBound {
    Exactly(BigRational),
    AtMost(BigRational),
}

impl NormBound {
    pub fn upper(&self) -> &BigRational {
        match self {
            NormBound::Exactly(q) | NormBound::AtMost(q) => q,
        }
    }
}

/// What is known about a valuation at the current precision.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ValuationInfo {
    Exact(i64),
    AtLeast(i64),
    Infinite,
}

fn pk(p: Prime, k: i64) -> BigUint {
    assert!(k >= 0);
    p.to_biguint().pow(k as u32)
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(modulus);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(modulus))
    } else {
        None
    }
}

fn vp_biguint(p: Prime, x: &BigUint) -> i64 {
    assert!(!x.is_zero());
    let p_big = p.to_biguint();
    let mut v = 0i64;
    let mut cur = x.clone();
    loop {
        let (q, r) = cur.div_rem(&p_big);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

impl PadicNumber {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn exact_zero(p: Prime) -> Self {
        PadicNumber {
            prime: p,
            kind: Kind::ExactZero,
        }
    }

    pub fn zero_ball(p: Prime, abs_precision: i64) -> Self {
        PadicNumber {
            prime: p,
            kind: Kind::ZeroBall { abs_precision },
        }
    }

    /// Build a unit-kind value directly from a residue. The residue is
    /// reduced mod p^N and must stay coprime to p.
    pub fn from_unit_parts(p: Prime, valuation: i64, unit: BigUint, rel_precision: u32) -> Result<Self> {
        assert!(rel_precision >= 1);
        let m = pk(p, rel_precision as i64);
        let u = &unit % &m;
        if u.is_zero() || (&u % p.to_biguint()).is_zero() {
            return Err(Error::Parse(format!(
                "residue {unit} is not a unit mod {p}^{rel_precision}"
            )));
        }
        Ok(PadicNumber {
            prime: p,
            kind: Kind::Unit {
                valuation,
                unit: u,
                rel_precision,
            },
        })
    }

    pub fn one(p: Prime, rel_precision: u32) -> Self {
        Self::from_unit_parts(p, 0, BigUint::one(), rel_precision).expect("1 is a unit")
    }

    /// Embed a rational exactly: p-part split off as the valuation, the
    /// remaining unit reduced mod p^N via modular inversion of the
    /// denominator.
    pub fn from_rational(x: &BigRational, p: Prime, rel_precision: u32) -> Self {
        assert!(rel_precision >= 1);
        if x.is_zero() {
            return Self::exact_zero(p);
        }
        let v = vp(p, x).expect("nonzero");
        let p_big = BigInt::from(p.get());
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        while (&num % &p_big).is_zero() {
            num /= &p_big;
        }
        while (&den % &p_big).is_zero() {
            den /= &p_big;
        }
        let modulus = BigInt::from(pk(p, rel_precision as i64));
        let den_inv = mod_inverse(&den.mod_floor(&modulus), &modulus)
            .expect("denominator unit after stripping p");
        let u = (num.mod_floor(&modulus) * den_inv).mod_floor(&modulus);
        let unit = u.to_biguint().expect("nonnegative residue");
        debug_assert!(!(&unit % p.to_biguint()).is_zero());
        PadicNumber {
            prime: p,
            kind: Kind::Unit {
                valuation: v,
                unit,
                rel_precision,
            },
        }
    }

    pub fn from_integer(n: i64, p: Prime, rel_precision: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)), p, rel_precision)
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.kind, Kind::ExactZero)
    }

    pub fn is_zero_kind(&self) -> bool {
        !matches!(self.kind, Kind::Unit { .. })
    }

    /// Exponent under the O; None means infinite (exact zero).
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.kind {
            Kind::ExactZero => None,
            Kind::ZeroBall { abs_precision } => Some(*abs_precision),
            Kind::Unit {
                valuation,
                rel_precision,
                ..
            } => Some(valuation + *rel_precision as i64),
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match &self.kind {
            Kind::Unit { rel_precision, .. } => Some(*rel_precision),
            _ => None,
        }
    }

    pub fn valuation_info(&self) -> ValuationInfo {
        match &self.kind {
            Kind::ExactZero => ValuationInfo::Infinite,
            Kind::ZeroBall { abs_precision } => ValuationInfo::AtLeast(*abs_precision),
            Kind::Unit { valuation, .. } => ValuationInfo::Exact(*valuation),
        }
    }

    /// Exact valuation, when the ball determines one.
    pub fn valuation(&self) -> Option<i64> {
        match &self.kind {
            Kind::Unit { valuation, .. } => Some(*valuation),
            _ => None,
        }
    }

    /// True when the ball lies inside Z_p.
    pub fn in_zp(&self) -> bool {
        match &self.kind {
            Kind::ExactZero => true,
            Kind::ZeroBall { abs_precision } => *abs_precision >= 0,
            Kind::Unit { valuation, .. } => *valuation >= 0,
        }
    }

    fn require_same_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_prime(other)?;
        let p = self.prime;
        let out = match (&self.kind, &other.kind) {
            (Kind::ExactZero, _) => other.clone(),
            (_, Kind::ExactZero) => self.clone(),
            (Kind::ZeroBall { abs_precision: a }, Kind::ZeroBall { abs_precision: b }) => {
                Self::zero_ball(p, (*a).min(*b))
            }
            (Kind::ZeroBall { abs_precision: a }, Kind::Unit { .. }) => {
                other.clone().absorb_error(*a)
            }
            (Kind::Unit { .. }, Kind::ZeroBall { abs_precision: a }) => {
                self.clone().absorb_error(*a)
            }
            (
                Kind::Unit {
                    valuation: v1,
                    unit: u1,
                    rel_precision: n1,
                },
                Kind::Unit {
                    valuation: v2,
                    unit: u2,
                    rel_precision: n2,
                },
            ) => {
                let v0 = (*v1).min(*v2);
                let k = (v1 + *n1 as i64).min(v2 + *n2 as i64);
                debug_assert!(k > v0);
                let m = pk(p, k - v0);
                let shift = |v: i64, u: &BigUint| -> BigUint {
                    let e = (v - v0).min(k - v0);
                    (u * pk(p, e)) % &m
                };
                let t = (shift(*v1, u1) + shift(*v2, u2)) % &m;
                if t.is_zero() {
                    Self::zero_ball(p, k)
                } else {
                    let w = vp_biguint(p, &t);
                    debug_assert!(w < k - v0);
                    let n = (k - v0 - w) as u32;
                    let unit = (t / pk(p, w)) % pk(p, n as i64);
                    PadicNumber {
                        prime: p,
                        kind: Kind::Unit {
                            valuation: v0 + w,
                            unit,
                            rel_precision: n,
                        },
                    }
                }
            }
        };
        Ok(out)
    }

    /// Weaken the ball with an extra O(p^a) error term.
    fn absorb_error(self, a: i64) -> Self {
        let p = self.prime;
        match self.kind {
            Kind::ExactZero => Self::zero_ball(p, a),
            Kind::ZeroBall { abs_precision } => Self::zero_ball(p, abs_precision.min(a)),
            Kind::Unit {
                valuation,
                unit,
                rel_precision,
            } => {
                let k = a.min(valuation + rel_precision as i64);
                if valuation >= k {
                    Self::zero_ball(p, k)
                } else {
                    let n = (k - valuation) as u32;
                    PadicNumber {
                        prime: p,
                        kind: Kind::Unit {
                            valuation,
                            unit: unit % pk(p, n as i64),
                            rel_precision: n,
                        },
                    }
                }
            }
        }
    }

    /// self + O(p^a): the result of a computation whose tail is only known
    /// to be that small.
    pub fn with_error_term(&self, a: i64) -> Self {
        self.clone().absorb_error(a)
    }

    pub fn neg(&self) -> Self {
        let p = self.prime;
        match &self.kind {
            Kind::Unit {
                valuation,
                unit,
                rel_precision,
            } => PadicNumber {
                prime: p,
                kind: Kind::Unit {
                    valuation: *valuation,
                    unit: pk(p, *rel_precision as i64) - unit,
                    rel_precision: *rel_precision,
                },
            },
            _ => self.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_prime(other)?;
        let p = self.prime;
        let out = match (&self.kind, &other.kind) {
            (Kind::ExactZero, _) | (_, Kind::ExactZero) => Self::exact_zero(p),
            (Kind::ZeroBall { abs_precision: a }, Kind::ZeroBall { abs_precision: b }) => {
                Self::zero_ball(p, a + b)
            }
            (Kind::ZeroBall { abs_precision: a }, Kind::Unit { valuation, .. })
            | (Kind::Unit { valuation, .. }, Kind::ZeroBall { abs_precision: a }) => {
                Self::zero_ball(p, a + valuation)
            }
            (
                Kind::Unit {
                    valuation: v1,
                    unit: u1,
                    rel_precision: n1,
                },
                Kind::Unit {
                    valuation: v2,
                    unit: u2,
                    rel_precision: n2,
                },
            ) => {
                let n = (*n1).min(*n2);
                let unit = (u1 * u2) % pk(p, n as i64);
                PadicNumber {
                    prime: p,
                    kind: Kind::Unit {
                        valuation: v1 + v2,
                        unit,
                        rel_precision: n,
                    },
                }
            }
        };
        Ok(out)
    }

    pub fn invert(&self) -> Result<Self> {
        let p = self.prime;
        match &self.kind {
            Kind::ExactZero => Err(Error::DivisionByZero),
            Kind::ZeroBall { .. } => Err(Error::InvertZeroBall),
            Kind::Unit {
                valuation,
                unit,
                rel_precision,
            } => {
                let modulus = BigInt::from(pk(p, *rel_precision as i64));
                let inv = mod_inverse(&BigInt::from(unit.clone()), &modulus)
                    .expect("unit residue is invertible");
                Ok(PadicNumber {
                    prime: p,
                    kind: Kind::Unit {
                        valuation: -valuation,
                        unit: inv.to_biguint().expect("nonnegative"),
                        rel_precision: *rel_precision,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.invert()?)
    }

    /// Multiply by an exact rational scalar; no precision is lost.
    pub fn mul_rational(&self, q: &BigRational) -> Self {
        let p = self.prime;
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let w = vp(p, q).expect("nonzero");
        match &self.kind {
            Kind::ExactZero => Self::exact_zero(p),
            Kind::ZeroBall { abs_precision } => Self::zero_ball(p, abs_precision + w),
            Kind::Unit {
                valuation,
                unit,
                rel_precision,
            } => {
                let p_big = BigInt::from(p.get());
                let mut num = q.numer().clone();
                let mut den = q.denom().clone();
                while (&num % &p_big).is_zero() {
                    num /= &p_big;
                }
                while (&den % &p_big).is_zero() {
                    den /= &p_big;
                }
                let modulus = BigInt::from(pk(p, *rel_precision as i64));
                let den_inv = mod_inverse(&den.mod_floor(&modulus), &modulus).expect("p-free");
                let scaled = (BigInt::from(unit.clone()) * num.mod_floor(&modulus) * den_inv)
                    .mod_floor(&modulus);
                PadicNumber {
                    prime: p,
                    kind: Kind::Unit {
                        valuation: valuation + w,
                        unit: scaled.to_biguint().expect("nonnegative"),
                        rel_precision: *rel_precision,
                    },
                }
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            let n = self.rel_precision().unwrap_or(1);
            return Self::one(self.prime, n);
        }
        let mut acc = self.clone();
        for bit in (0..31 - k.leading_zeros()).rev() {
            acc = acc.mul(&acc).expect("same prime");
            if (k >> bit) & 1 == 1 {
                acc = acc.mul(self).expect("same prime");
            }
        }
        acc
    }

    /// Base-p digits (exponent, digit) for j = v .. v+N-1, low to high.
    /// The leading digit is nonzero.
    pub fn digits(&self) -> Result<Vec<(i64, u32)>> {
        match &self.kind {
            Kind::Unit {
                valuation,
                unit,
                rel_precision,
            } => {
                let p_big = self.prime.to_biguint();
                let mut out = Vec::with_capacity(*rel_precision as usize);
                let mut cur = unit.clone();
                for i in 0..*rel_precision {
                    let (q, r) = cur.div_rem(&p_big);
                    out.push((valuation + i as i64, r.to_u32().expect("digit < p")));
                    cur = q;
                }
                Ok(out)
            }
            _ => Err(Error::NoDigits),
        }
    }

    /// |x|_p as far as the ball determines it.
    pub fn norm(&self) -> NormBound {
        match &self.kind {
            Kind::ExactZero => NormBound::Exactly(BigRational::zero()),
            Kind::ZeroBall { abs_precision } => {
                NormBound::AtMost(self.prime.power_rational(-abs_precision))
            }
            Kind::Unit { valuation, .. } => {
                NormBound::Exactly(self.prime.power_rational(-valuation))
            }
        }
    }

    /// d_p(x, y) = |x - y|_p at the current precision.
    pub fn dist(&self, other: &Self) -> Result<NormBound> {
        Ok(self.sub(other)?.norm())
    }

    /// Whether the two balls agree modulo p^k. Callers must supply operands
    /// carrying at least k digits of absolute precision.
    pub fn eq_mod_pk(&self, other: &Self, k: i64) -> Result<bool> {
        self.require_same_prime(other)?;
        for side in [self, other] {
            if side.abs_precision().is_some_and(|a| a < k) {
                return Err(Error::Undecidable(format!(
                    "operand has absolute precision {} < {k}",
                    side.abs_precision().expect("finite")
                )));
            }
        }
        match self.sub(other)?.kind {
            Kind::ExactZero => Ok(true),
            Kind::ZeroBall { abs_precision } => {
                debug_assert!(abs_precision >= k);
                Ok(true)
            }
            Kind::Unit { valuation, .. } => Ok(valuation >= k),
        }
    }

    /// Whether the exact rational x lies in the represented ball.
    pub fn contains_rational(&self, x: &BigRational) -> bool {
        match &self.kind {
            Kind::ExactZero => x.is_zero(),
            Kind::ZeroBall { abs_precision } => {
                x.is_zero() || vp(self.prime, x).expect("nonzero") >= *abs_precision
            }
            Kind::Unit {
                valuation,
                rel_precision,
                ..
            } => {
                let diff = x - self.rational_representative();
                diff.is_zero()
                    || vp(self.prime, &diff).expect("nonzero")
                        >= valuation + *rel_precision as i64
            }
        }
    }

    /// The canonical representative p^v * u (0 for zero kinds).
    pub fn rational_representative(&self) -> BigRational {
        match &self.kind {
            Kind::Unit {
                valuation, unit, ..
            } => self.prime.power_rational(*valuation)
                * BigRational::from_integer(BigInt::from(unit.clone())),
            _ => BigRational::zero(),
        }
    }

    /// A representative congruent to the ball mod p^t with all digits at
    /// exponents below t. Requires absolute precision >= t.
    pub fn truncated_representative(&self, t: i64) -> Result<BigRational> {
        if self.abs_precision().is_some_and(|a| a < t) {
            return Err(Error::InsufficientPrecision(format!(
                "absolute precision {} < truncation scale {t}",
                self.abs_precision().expect("finite")
            )));
        }
        match &self.kind {
            Kind::Unit {
                valuation, unit, ..
            } if *valuation < t => {
                let trimmed = unit % pk(self.prime, t - valuation);
                Ok(self.prime.power_rational(*valuation)
                    * BigRational::from_integer(BigInt::from(trimmed)))
            }
            _ => Ok(BigRational::zero()),
        }
    }

    /// Parse either the ball literal produced by Display or a plain
    /// rational `a/b`, embedded at `default_rel_precision`.
    pub fn parse(p: Prime, s: &str, default_rel_precision: u32) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("p-adic(").and_then(|r| r.strip_suffix(')')) {
            return Self::parse_ball_literal(p, inner);
        }
        let q = crate::valuation::parse_rational(s)?;
        Ok(Self::from_rational(&q, p, default_rel_precision))
    }

    fn parse_ball_literal(p: Prime, inner: &str) -> Result<Self> {
        let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
        let bad = |msg: &str| Error::Parse(format!("ball literal: {msg}"));
        let lit_p: u64 = parts
            .first()
            .ok_or_else(|| bad("missing prime"))?
            .parse()
            .map_err(|_| bad("bad prime"))?;
        if lit_p != p.get() {
            return Err(Error::PrimeMismatch(p.get(), lit_p));
        }
        match parts.len() {
            2 if parts[1] == "0" => Ok(Self::exact_zero(p)),
            2 => {
                let a = parse_big_o(parts[1], p).ok_or_else(|| bad("expected O(p^a)"))?;
                Ok(Self::zero_ball(p, a))
            }
            4 => {
                let v: i64 = parts[1].parse().map_err(|_| bad("bad valuation"))?;
                let digit_strs: Vec<&str> = parts[2].split_whitespace().collect();
                if digit_strs.is_empty() {
                    return Err(bad("no digits"));
                }
                let mut unit = BigUint::zero();
                let p_big = p.to_biguint();
                for ds in digit_strs.iter().rev() {
                    let d: u64 = ds.parse().map_err(|_| bad("bad digit"))?;
                    if d >= p.get() {
                        return Err(bad("digit out of range"));
                    }
                    unit = unit * &p_big + BigUint::from(d);
                }
                let k = parse_big_o(parts[3], p).ok_or_else(|| bad("expected O(p^k)"))?;
                let n = k - v;
                if n != digit_strs.len() as i64 || n < 1 {
                    return Err(bad("digit count does not match O(p^k)"));
                }
                Self::from_unit_parts(p, v, unit, n as u32)
            }
            _ => Err(bad("expected 2 or 4 segments")),
        }
    }
}

fn parse_big_o(s: &str, p: Prime) -> Option<i64> {
    let inner = s.strip_prefix("O(")?.strip_suffix(')')?;
    let (base, exp) = inner.split_once('^')?;
    if base.trim().parse::<u64>().ok()? != p.get() {
        return None;
    }
    exp.trim().parse().ok()
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match &self.kind {
            Kind::ExactZero => write!(f, "p-adic({p}; 0)"),
            Kind::ZeroBall { abs_precision } => {
                write!(f, "p-adic({p}; O({p}^{abs_precision}))")
            }
            Kind::Unit {
                valuation,
                rel_precision,
                ..
            } => {
                write!(f, "p-adic({p}; {valuation}; ")?;
                for (i, (_, d)) in self.digits().expect("unit kind").iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, "; O({p}^{}))", valuation + *rel_precision as i64)
            }
        }
    }
}
