//! Cells (closed balls) in Q_p and Riemann integration over them.
//!
//! A cell of scale s is {y : |y - c|_p <= p^(-s)}; its diameter is p^(-s).
//! Centers are canonicalized to exact rational representatives truncated at
//! the scale, which a cell's geometry does not depend on, so every
//! comparison between cells is decidable. Any two cells are nested or
//! disjoint, and a cell splits into p^n equal subcells, one per residue
//! mod p^n.
//!
//! Integration evaluates the integrand on the exact rational centers of the
//! level-n subdivision. Real-valued integrands need a caller-supplied
//! modulus of uniform continuity; Q_l-valued ones use that integer powers
//! of p are l-adic units; Q_p-valued ones are weighted by a bounded
//! additive cell measure.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::number::{PadicNumber, ValuationInfo};
use crate::valuation::{vp, Prime};

#[derive(Clone, Debug)]
pub struct Cell {
    prime: Prime,
    center: BigRational,
    scale: i64,
}

/// How two cells sit relative to one another; partial overlap cannot occur.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum CellRelation {
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
    Disjoint,
}

impl std::fmt::Display for CellRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CellRelation::Equal => "Equal",
            CellRelation::FirstInsideSecond => "FirstInsideSecond",
            CellRelation::SecondInsideFirst => "SecondInsideFirst",
            CellRelation::Disjoint => "Disjoint",
        };
        write!(f, "{s}")
    }
}

impl Cell {
    /// Build a cell from a ball center; the ball must carry at least
    /// `scale` digits of absolute precision so that the cell it determines
    /// is well defined.
    pub fn new(center: &PadicNumber, scale: i64) -> Result<Self> {
        let rep = center.truncated_representative(scale)?;
        Ok(Cell {
            prime: center.prime(),
            center: rep,
            scale,
        })
    }

    pub fn from_rational_center(prime: Prime, center: &BigRational, scale: i64) -> Self {
        Cell {
            prime,
            center: truncate_rational(prime, center, scale),
            scale,
        }
    }

    /// Z_p: the unit cell, center 0 and scale 0.
    pub fn unit_cell(prime: Prime) -> Self {
        Cell {
            prime,
            center: BigRational::zero(),
            scale: 0,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// The canonical rational representative of the center (all digits at
    /// exponents below the scale).
    pub fn center_representative(&self) -> &BigRational {
        &self.center
    }

    pub fn diameter(&self) -> BigRational {
        self.prime.power_rational(-self.scale)
    }

    /// Exact membership for rational points.
    pub fn contains_rational(&self, y: &BigRational) -> bool {
        let d = y - &self.center;
        d.is_zero() || vp(self.prime, &d).expect("nonzero") >= self.scale
    }

    /// Membership for ball points; the ball must be fine enough to decide.
    pub fn contains(&self, y: &PadicNumber) -> Result<bool> {
        if y.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), y.prime().get()));
        }
        let center_ball = PadicNumber::from_rational(
            &self.center,
            self.prime,
            (self.scale.max(1) + 2) as u32 + 32,
        );
        let d = y.sub(&center_ball)?;
        match d.valuation_info() {
            ValuationInfo::Infinite => Ok(true),
            ValuationInfo::Exact(v) => Ok(v >= self.scale),
            ValuationInfo::AtLeast(a) if a >= self.scale => Ok(true),
            ValuationInfo::AtLeast(a) => Err(Error::Undecidable(format!(
                "point known only to O(p^{a}), cell needs scale {}",
                self.scale
            ))),
        }
    }

    /// Nested-or-disjoint classification; always total on well-formed cells.
    pub fn trichotomy(&self, other: &Cell) -> Result<CellRelation> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        let d = &self.center - &other.center;
        let centers_within = |s: i64| d.is_zero() || vp(self.prime, &d).expect("nonzero") >= s;
        Ok(if self.scale == other.scale {
            if centers_within(self.scale) {
                CellRelation::Equal
            } else {
                CellRelation::Disjoint
            }
        } else if self.scale > other.scale {
            // self is the smaller cell
            if centers_within(other.scale) {
                CellRelation::FirstInsideSecond
            } else {
                CellRelation::Disjoint
            }
        } else if centers_within(self.scale) {
            CellRelation::SecondInsideFirst
        } else {
            CellRelation::Disjoint
        })
    }

    /// The p^n disjoint subcells of scale s+n covering this cell, one per
    /// residue r mod p^n, with centers c + r p^s.
    pub fn subdivide(&self, n: u32) -> Vec<Cell> {
        let count = self.prime.power(n as u64);
        let mut out = Vec::new();
        let mut r = num_bigint::BigUint::zero();
        while r < count {
            let offset = BigRational::from_integer(num_bigint::BigInt::from(r.clone()))
                * self.prime.power_rational(self.scale);
            out.push(Cell {
                prime: self.prime,
                center: &self.center + offset,
                scale: self.scale + n as i64,
            });
            r += 1u32;
        }
        out
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.trichotomy(other) == Ok(CellRelation::Equal)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cell({}; {}; {})", self.prime, self.center, self.scale)
    }
}

/// Parse `cell(p; center; scale)` with a rational center.
pub fn parse_cell(s: &str) -> Result<Cell> {
    let inner = s
        .trim()
        .strip_prefix("cell(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse("expected cell(p; center; scale)".into()))?;
    let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse("expected cell(p; center; scale)".into()));
    }
    let p_val: u64 = parts[0]
        .parse()
        .map_err(|_| Error::Parse("bad prime in cell literal".into()))?;
    let prime = Prime::new(p_val)?;
    let center = crate::valuation::parse_rational(parts[1])?;
    let scale: i64 = parts[2]
        .parse()
        .map_err(|_| Error::Parse("bad scale in cell literal".into()))?;
    Ok(Cell::from_rational_center(prime, &center, scale))
}

fn truncate_rational(p: Prime, x: &BigRational, scale: i64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let v = vp(p, x).expect("nonzero");
    if v >= scale {
        return BigRational::zero();
    }
    PadicNumber::from_rational(x, p, (scale - v) as u32)
        .truncated_representative(scale)
        .expect("truncation within precision")
}

/// A level-n Riemann sum together with its uniform-continuity error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct RealIntegral {
    pub value: BigRational,
    pub error_bound: BigRational,
    pub level: u32,
}

/// Riemann sum of a rational-valued f over the cell at subdivision level n:
/// Σ f(x_j) p^(-n) diam. `omega` is the caller's modulus of uniform
/// continuity: |f(x) - f(y)| <= omega(d) whenever |x - y|_p <= d. The error
/// bound omega(p^(-(s+n))) * diam covers the distance to every deeper level
/// and to the limit.
pub fn integrate_real(
    f: impl Fn(&BigRational) -> BigRational,
    omega: impl Fn(&BigRational) -> BigRational,
    cell: &Cell,
    level: u32,
) -> RealIntegral {
    let weight = cell.diameter() * cell.prime().power_rational(-(level as i64));
    let mut total = BigRational::zero();
    for sub in cell.subdivide(level) {
        total += f(sub.center_representative());
    }
    let sub_diam = cell.prime().power_rational(-(cell.scale() + level as i64));
    RealIntegral {
        value: total * &weight,
        error_bound: omega(&sub_diam) * cell.diameter(),
        level,
    }
}

/// Riemann sum of an l-adic-valued f (l != p) over the cell. The weight
/// p^(-n) diam is an l-adic unit, so |sum|_l <= max |f|_l. When the caller
/// supplies an oscillation bound (a guarantee that the level-n sum is
/// within O(l^bound(n)) of the limit), the result ball absorbs it.
pub fn integrate_qell(
    f: impl Fn(&BigRational) -> PadicNumber,
    ell: Prime,
    cell: &Cell,
    level: u32,
    oscillation_bound: Option<&dyn Fn(u32) -> i64>,
) -> Result<PadicNumber> {
    if ell == cell.prime() {
        return Err(Error::SamePrimeIntegral);
    }
    let weight = cell.diameter() * cell.prime().power_rational(-(level as i64));
    let mut total = PadicNumber::exact_zero(ell);
    for sub in cell.subdivide(level) {
        let v = f(sub.center_representative());
        if v.prime() != ell {
            return Err(Error::PrimeMismatch(ell.get(), v.prime().get()));
        }
        total = total.add(&v.mul_rational(&weight))?;
    }
    Ok(match oscillation_bound {
        Some(bound) => total.with_error_term(bound(level)),
        None => total,
    })
}

/// A Q_p-valued finitely additive measure on cells, with an optional
/// declared bound |μ(C)|_p <= p^(-bound_exponent) on small cells.
pub struct CellMeasure<'a> {
    value: Box<dyn Fn(&Cell) -> PadicNumber + 'a>,
    bound_exponent: Option<i64>,
}

impl<'a> CellMeasure<'a> {
    pub fn new(value: impl Fn(&Cell) -> PadicNumber + 'a) -> Self {
        CellMeasure {
            value: Box::new(value),
            bound_exponent: None,
        }
    }

    pub fn with_bound(mut self, exponent: i64) -> Self {
        self.bound_exponent = Some(exponent);
        self
    }

    pub fn value(&self, c: &Cell) -> PadicNumber {
        (self.value)(c)
    }

    pub fn bound_exponent(&self) -> Option<i64> {
        self.bound_exponent
    }

    /// The diameter measure: μ(C) = diam(C) read inside Q_p.
    pub fn diameter(prime: Prime, rel_precision: u32) -> CellMeasure<'static> {
        CellMeasure::new(move |c: &Cell| {
            PadicNumber::from_rational(&c.diameter(), prime, rel_precision)
        })
    }
}

fn balls_agree(a: &PadicNumber, b: &PadicNumber) -> Result<bool> {
    Ok(!matches!(
        a.sub(b)?.valuation_info(),
        ValuationInfo::Exact(_)
    ))
}

/// Σ f(x_j) μ(C_j) over the level-n subdivision, verifying along the way
/// that μ is additive under each single subdivision step it touches.
pub fn integrate_measure(
    f: impl Fn(&BigRational) -> PadicNumber,
    mu: &CellMeasure,
    cell: &Cell,
    level: u32,
) -> Result<PadicNumber> {
    let p = cell.prime();
    // additivity sweep over every internal node of the subdivision tree
    let mut frontier = vec![cell.clone()];
    for _ in 0..level {
        let mut next = Vec::new();
        for node in &frontier {
            let children = node.subdivide(1);
            let mut child_sum = PadicNumber::exact_zero(p);
            for ch in &children {
                child_sum = child_sum.add(&mu.value(ch))?;
            }
            if !balls_agree(&mu.value(node), &child_sum)? {
                return Err(Error::MeasureInconsistent);
            }
            next.extend(children);
        }
        frontier = next;
    }
    let mut total = PadicNumber::exact_zero(p);
    for leaf in &frontier {
        let fv = f(leaf.center_representative());
        if fv.prime() != p {
            return Err(Error::PrimeMismatch(p.get(), fv.prime().get()));
        }
        total = total.add(&fv.mul(&mu.value(leaf))?)?;
    }
    Ok(total)
}
