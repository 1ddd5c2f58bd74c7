//! Exact p-adic valuations and absolute values on the rationals, plus a
//! decision procedure that classifies multiplicative norms on Q from a
//! finite table: a power of the usual absolute value, the trivial norm,
//! or a power of some |.|_p.
//!
//! Norm values are kept exact as products of prime powers with rational
//! exponents, so classification never touches floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A prime number, verified at construction by trial division.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime_u64(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_biguint(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// p^k for k >= 0.
    pub fn power(self, k: u64) -> BigUint {
        self.to_biguint().pow(k as u32)
    }

    /// p^k as an exact rational, k of either sign.
    pub fn power_rational(self, k: i64) -> BigRational {
        let mag = BigInt::from(self.power(k.unsigned_abs()));
        if k >= 0 {
            BigRational::from_integer(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of p in a nonzero integer.
pub fn vp_int(p: Prime, x: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p_big = BigInt::from(p.get());
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(&p_big);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        cur = q;
    }
}

/// p-adic valuation of a nonzero rational: x = p^v * r/s with p dividing
/// neither r nor s.
pub fn vp(p: Prime, x: &BigRational) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(vp_int(p, x.numer())? - vp_int(p, x.denom())?)
}

/// p-adic absolute value: 0 at 0, else exactly p^(-vp(x)).
pub fn abs_p(p: Prime, x: &BigRational) -> BigRational {
    if x.is_zero() {
        BigRational::zero()
    } else {
        let v = vp(p, x).expect("nonzero");
        p.power_rational(-v)
    }
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            let mut e = 0u32;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A positive real of the form prod_q q^(e_q) over primes q with exact
/// rational exponents. Closed under products, quotients and rational
/// powers, with exact comparison; covers every value a multiplicative
/// norm in this module's supported classes takes on the integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormValue {
    exponents: BTreeMap<u64, BigRational>,
}

impl NormValue {
    pub fn one() -> Self {
        NormValue {
            exponents: BTreeMap::new(),
        }
    }

    pub fn prime_power(p: u64, e: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !e.is_zero() {
            m.insert(p, e);
        }
        NormValue { exponents: m }
    }

    /// Factor a positive rational with u64-sized numerator and denominator.
    pub fn from_positive_rational(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Parse(format!("norm value {q} is not positive")));
        }
        let num: u64 = q
            .numer()
            .try_into()
            .map_err(|_| Error::Parse(format!("norm value {q} too large to factor")))?;
        let den: u64 = q
            .denom()
            .try_into()
            .map_err(|_| Error::Parse(format!("norm value {q} too large to factor")))?;
        let mut m = BTreeMap::new();
        for (p, e) in factor_u64(num) {
            m.insert(p, BigRational::from_integer(BigInt::from(e)));
        }
        for (p, e) in factor_u64(den) {
            m.insert(p, -BigRational::from_integer(BigInt::from(e)));
        }
        Ok(NormValue { exponents: m })
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// True when every exponent is an integer, i.e. the value is rational.
    pub fn is_rational(&self) -> bool {
        self.exponents.values().all(|e| e.denom().is_one())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        let mut acc = BigRational::one();
        for (&p, e) in &self.exponents {
            let k: i64 = e.numer().try_into().ok()?;
            let mag = BigInt::from(p).pow(k.unsigned_abs() as u32);
            if k >= 0 {
                acc *= BigRational::from_integer(mag);
            } else {
                acc /= BigRational::from_integer(mag);
            }
        }
        Some(acc)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.exponents.clone();
        for (&p, e) in &other.exponents {
            let entry = m.entry(p).or_insert_with(BigRational::zero);
            *entry += e;
        }
        m.retain(|_, e| !e.is_zero());
        NormValue { exponents: m }
    }

    pub fn recip(&self) -> Self {
        NormValue {
            exponents: self.exponents.iter().map(|(&p, e)| (p, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    pub fn pow(&self, a: &BigRational) -> Self {
        if a.is_zero() {
            return NormValue::one();
        }
        NormValue {
            exponents: self.exponents.iter().map(|(&p, e)| (p, e * a)).collect(),
        }
    }

    /// Exact comparison against 1: raise to the lcm of the exponent
    /// denominators, which turns the value into an honest rational.
    pub fn cmp_one(&self) -> std::cmp::Ordering {
        let l = self.exponent_lcm();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&p, e) in &self.exponents {
            let scaled = e * BigRational::from_integer(BigInt::from(l));
            debug_assert!(scaled.denom().is_one());
            let k: i64 = (scaled.numer()).try_into().expect("desk-scale exponent");
            let mag = BigUint::from(p).pow(k.unsigned_abs() as u32);
            if k >= 0 {
                num *= mag;
            } else {
                den *= mag;
            }
        }
        num.cmp(&den)
    }

    pub fn compare(&self, other: &Self) -> std::cmp::Ordering {
        self.div(other).cmp_one()
    }

    fn exponent_lcm(&self) -> u64 {
        let mut l = 1u64;
        for e in self.exponents.values() {
            let d: u64 = e.denom().try_into().expect("desk-scale exponent");
            l = l.lcm(&d);
        }
        l
    }

    /// Rational bracket lower <= value <= upper with width about 2*10^-digits.
    fn rational_bounds(&self, digits: u32) -> (BigRational, BigRational) {
        let l = self.exponent_lcm();
        // value^l is an exact positive rational a/b
        let mut a = BigUint::one();
        let mut b = BigUint::one();
        for (&p, e) in &self.exponents {
            let scaled = e * BigRational::from_integer(BigInt::from(l));
            let k: i64 = scaled.numer().try_into().expect("desk-scale exponent");
            let mag = BigUint::from(p).pow(k.unsigned_abs() as u32);
            if k >= 0 {
                a *= mag;
            } else {
                b *= mag;
            }
        }
        let scale = BigUint::from(10u32).pow(digits);
        let scale_l = scale.pow(l as u32);
        let floor_q = (&a * &scale_l) / &b;
        let lo_root = floor_q.nth_root(l as u32);
        let ceil_q = (&a * &scale_l + &b - BigUint::one()) / &b;
        let hi_root = ceil_q.nth_root(l as u32) + BigUint::one();
        let denom = BigInt::from(scale);
        (
            BigRational::new(BigInt::from(lo_root), denom.clone()),
            BigRational::new(BigInt::from(hi_root), denom),
        )
    }

    /// Decide exactly whether self <= c * (m_1 + ... + m_k). Exact when all
    /// the values are rational; otherwise brackets both sides and refines.
    pub fn leq_scaled_sum(&self, c: &BigRational, terms: &[&NormValue]) -> Result<bool> {
        assert!(!terms.is_empty());
        if self.is_rational() && terms.iter().all(|t| t.is_rational()) {
            let lhs = self.to_rational().expect("rational");
            let rhs: BigRational = terms
                .iter()
                .map(|t| t.to_rational().expect("rational"))
                .sum();
            return Ok(lhs <= c * rhs);
        }
        // any single dominating term settles it when c >= 1
        if *c >= BigRational::one()
            && terms
                .iter()
                .any(|t| self.compare(t) != std::cmp::Ordering::Greater)
        {
            return Ok(true);
        }
        let mut digits = 8u32;
        while digits <= 256 {
            let (lo_s, hi_s) = self.rational_bounds(digits);
            let mut lo_sum = BigRational::zero();
            let mut hi_sum = BigRational::zero();
            for t in terms {
                let (lo, hi) = t.rational_bounds(digits);
                lo_sum += lo;
                hi_sum += hi;
            }
            if hi_s <= c * &lo_sum {
                return Ok(true);
            }
            if lo_s > c * &hi_sum {
                return Ok(false);
            }
            digits *= 2;
        }
        Err(Error::Undecidable(
            "norm comparison did not separate at 256 digits".into(),
        ))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.exponents {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{p}^({e})")?;
            first = false;
        }
        Ok(())
    }
}

/// A multiplicative norm given as a finite table of exact values on the
/// integers 1..=bound. N(1) = 1 is enforced at construction; everything
/// else is the checker's business, so that broken tables can still be
/// constructed and reported on.
pub struct NormOracle {
    bound: u64,
    values: Vec<NormValue>,
}

impl NormOracle {
    pub fn from_values(values: Vec<NormValue>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Parse("oracle needs bound >= 2".into()));
        }
        if !values[0].is_one() {
            return Err(Error::InconsistentOracle("N(1) != 1".into()));
        }
        Ok(NormOracle {
            bound: values.len() as u64,
            values,
        })
    }

    pub fn from_fn(bound: u64, f: impl Fn(u64) -> NormValue) -> Result<Self> {
        Self::from_values((1..=bound).map(f).collect())
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn eval(&self, n: u64) -> &NormValue {
        assert!(n >= 1 && n <= self.bound, "oracle query out of range");
        &self.values[(n - 1) as usize]
    }

    /// N(n) = n^alpha.
    pub fn archimedean_power(bound: u64, alpha: &BigRational) -> Result<Self> {
        Self::from_fn(bound, |n| {
            let mut v = NormValue::one();
            for (p, e) in factor_u64(n) {
                v = v.mul(&NormValue::prime_power(
                    p,
                    BigRational::from_integer(BigInt::from(e)) * alpha,
                ));
            }
            v
        })
    }

    /// N(n) = 1 for all n.
    pub fn trivial(bound: u64) -> Result<Self> {
        Self::from_fn(bound, |_| NormValue::one())
    }

    /// N(n) = |n|_p^a = p^(-a * vp(n)).
    pub fn padic_power(bound: u64, p: Prime, a: &BigRational) -> Result<Self> {
        Self::from_fn(bound, |n| {
            let v = vp_int(p, &BigInt::from(n)).expect("n >= 1");
            NormValue::prime_power(p.get(), -a * BigRational::from_integer(BigInt::from(v)))
        })
    }

    /// Parse the tab-separated table format: one `n<TAB>numerator/denominator`
    /// line per entry, entries covering 1..=B in order. Values must be exact
    /// positive rationals.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (n_str, val_str) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("line {}: expected n<TAB>value", idx + 1)))?;
            let n: u64 = n_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index", idx + 1)))?;
            if n as usize != values.len() + 1 {
                return Err(Error::Parse(format!(
                    "line {}: entries must cover 1..=B in order",
                    idx + 1
                )));
            }
            let q = parse_rational(val_str.trim())?;
            values.push(NormValue::from_positive_rational(&q)?);
        }
        Self::from_values(values)
    }
}

/// Parse `a`, `a/b`, or `-a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator: {s}")));
    }
    Ok(BigRational::new(num, den))
}

/// Which triangle-type inequality to check.
#[derive(Clone, Debug)]
pub enum TriangleMode {
    Triangle,
    Ultrametric,
    Quasi(BigRational),
}

impl TriangleMode {
    fn constant(&self) -> BigRational {
        match self {
            TriangleMode::Triangle | TriangleMode::Ultrametric => BigRational::one(),
            TriangleMode::Quasi(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormViolation {
    /// N(xy) != N(x) N(y)
    Multiplicativity { x: u64, y: u64 },
    /// the selected triangle variant fails at (x, y)
    Triangle { x: u64, y: u64 },
    /// N(sum terms) > C^l * sum N(terms) for a 2^l-term tuple
    DyadicSum { terms: Vec<u64> },
}

/// Exhaustively check multiplicativity and the selected triangle variant
/// over the table, plus the 2^l-term bound on deterministic dyadic-sum
/// samples. Violations come back as data.
pub fn check_norm_axioms(oracle: &NormOracle, mode: &TriangleMode) -> Result<Vec<NormViolation>> {
    let b = oracle.bound();
    let mut out = Vec::new();
    for x in 1..=b {
        for y in x..=b {
            if x * y <= b {
                let lhs = oracle.eval(x * y);
                let rhs = oracle.eval(x).mul(oracle.eval(y));
                if *lhs != rhs {
                    out.push(NormViolation::Multiplicativity { x, y });
                }
            }
            if x + y <= b {
                let n_sum = oracle.eval(x + y);
                let violated = match mode {
                    TriangleMode::Ultrametric => {
                        let nx = oracle.eval(x);
                        let ny = oracle.eval(y);
                        let max = if nx.compare(ny) == std::cmp::Ordering::Less {
                            ny
                        } else {
                            nx
                        };
                        n_sum.compare(max) == std::cmp::Ordering::Greater
                    }
                    TriangleMode::Triangle | TriangleMode::Quasi(_) => {
                        !n_sum.leq_scaled_sum(&mode.constant(), &[oracle.eval(x), oracle.eval(y)])?
                    }
                };
                if violated {
                    out.push(NormViolation::Triangle { x, y });
                }
            }
        }
    }
    let c = mode.constant();
    for l in 1u32..=3 {
        let len = 1usize << l;
        let cl = num_traits::pow::pow(c.clone(), l as usize);
        for tuple in dyadic_samples(b, len) {
            let total: u64 = tuple.iter().sum();
            if total > b {
                continue;
            }
            let lhs = oracle.eval(total);
            let terms: Vec<&NormValue> = tuple.iter().map(|&t| oracle.eval(t)).collect();
            if !lhs.leq_scaled_sum(&cl, &terms)? {
                out.push(NormViolation::DyadicSum { terms: tuple });
            }
        }
    }
    Ok(out)
}

fn dyadic_samples(bound: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for seed in [1u64, 2, 3, 5, 7] {
        if seed * len as u64 <= bound {
            out.push(vec![seed; len]);
        }
        let ramp: Vec<u64> = (0..len as u64).map(|i| seed + i).collect();
        if ramp.iter().sum::<u64>() <= bound {
            out.push(ramp);
        }
    }
    out
}

/// Outcome of the classification: a power of the usual absolute value, the
/// trivial norm, or a power of a p-adic absolute value.
#[derive(Clone, Debug, PartialEq)]
pub enum NormClass {
    Archimedean { alpha: BigRational },
    Trivial,
    Padic { p: Prime, a: BigRational },
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormClass::Archimedean { alpha } => write!(f, "archimedean {alpha}"),
            NormClass::Trivial => write!(f, "trivial"),
            NormClass::Padic { p, a } => write!(f, "padic {p} {a}"),
        }
    }
}

/// Decide the class of a norm from its finite table and verify the decision
/// against every entry. The table must reach far enough to contain the first
/// prime the norm shrinks, if any.
pub fn classify_norm(oracle: &NormOracle) -> Result<NormClass> {
    let b = oracle.bound();
    let grows = (2..=b).any(|n| oracle.eval(n).cmp_one() == std::cmp::Ordering::Greater);
    if grows {
        // a growing norm must scale as n^alpha with one alpha throughout
        let n2 = oracle.eval(2);
        let alpha = match n2.exponents.get(&2) {
            Some(e) if n2.exponents.len() == 1 && e.is_positive() => e.clone(),
            _ => {
                return Err(Error::InconsistentOracle(
                    "growing norm but N(2) is not a positive power of 2".into(),
                ))
            }
        };
        for n in 2..=b {
            let expected = archimedean_value(n, &alpha);
            if *oracle.eval(n) != expected {
                return Err(Error::InconsistentOracle(format!(
                    "non-constant alpha at n = {n}"
                )));
            }
        }
        return Ok(NormClass::Archimedean { alpha });
    }
    if (2..=b).all(|n| oracle.eval(n).is_one()) {
        return Ok(NormClass::Trivial);
    }
    let p_candidate = (2..=b)
        .find(|&n| oracle.eval(n).cmp_one() == std::cmp::Ordering::Less)
        .expect("some value below 1");
    let p = Prime::new(p_candidate).map_err(|_| {
        Error::InconsistentOracle(format!("least shrinking integer {p_candidate} is composite"))
    })?;
    let np = oracle.eval(p_candidate);
    let a = match np.exponents.get(&p_candidate) {
        Some(e) if np.exponents.len() == 1 && e.is_negative() => -e.clone(),
        _ => {
            return Err(Error::InconsistentOracle(format!(
                "N({p_candidate}) is not a power of {p_candidate}"
            )))
        }
    };
    for n in 2..=b {
        let v = vp_int(p, &BigInt::from(n)).expect("n >= 1");
        let expected =
            NormValue::prime_power(p.get(), -&a * BigRational::from_integer(BigInt::from(v)));
        if *oracle.eval(n) != expected {
            return Err(Error::InconsistentOracle(format!(
                "table disagrees with |.|_{p}^({a}) at n = {n}"
            )));
        }
    }
    Ok(NormClass::Padic { p, a })
}

fn archimedean_value(n: u64, alpha: &BigRational) -> NormValue {
    let mut v = NormValue::one();
    for (p, e) in factor_u64(n) {
        v = v.mul(&NormValue::prime_power(
            p,
            BigRational::from_integer(BigInt::from(e)) * alpha,
        ));
    }
    v
}
