//! Scalars of the universal Novikov ring `Λ₀` and the Novikov field `Λ = Λ₀[T⁻¹]` over `Z/2`.
//!
//! A scalar is a finite sum `T^{λ₁} + … + T^{λₖ}` with exact rational exponents stored in
//! strictly increasing order. Coefficients live in `Z/2`, so an exponent is either present or
//! not and addition is the symmetric difference of exponent sets. Genuine infinite sums are not
//! represented: all complexes in this crate have finite rank and finite support.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// An exact energy (exponent of `T`).
pub type Energy = Ratio<i64>;

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an [`Energy`].
pub fn parse_energy(s: &str) -> Result<Energy> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

/// Renders an energy as `"p/q"`, or `"p"` when integral.
pub fn format_energy(e: &Energy) -> String {
    e.to_string()
}

/// Which ring a scalar belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// The Novikov ring `Λ₀`: all exponents are non-negative.
    Ring,
    /// The Novikov field `Λ`: exponents may be negative.
    Field,
}

/// Energy valuation: the smallest exponent, or `+∞` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Energy),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<Energy> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A finite element of `Λ₀` or `Λ` with `Z/2` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    exps: Vec<Energy>,
    variant: Variant,
}

/// Result of a truncated long division in `Λ`.
///
/// `quotient` satisfies `dividend = quotient * divisor + remainder` where every exponent of the
/// remainder is at least `cutoff + valuation(divisor)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedQuotient {
    pub quotient: NovikovScalar,
    pub remainder: NovikovScalar,
    pub cutoff: Energy,
}

impl NovikovScalar {
    pub fn zero(variant: Variant) -> Self {
        NovikovScalar { exps: Vec::new(), variant }
    }

    /// The unit `1 = T⁰` of `Λ₀`.
    pub fn one() -> Self {
        NovikovScalar { exps: vec![Energy::zero()], variant: Variant::Ring }
    }

    /// `T^e` in `Λ₀`. Fails for negative `e`.
    pub fn monomial(e: Energy) -> Result<Self> {
        Self::from_exponents(Variant::Ring, [e])
    }

    /// `T^e` in `Λ`.
    pub fn field_monomial(e: Energy) -> Self {
        NovikovScalar { exps: vec![e], variant: Variant::Field }
    }

    /// Builds `Σ T^{eᵢ}`; repeated exponents cancel in pairs.
    pub fn from_exponents(variant: Variant, exps: impl IntoIterator<Item = Energy>) -> Result<Self> {
        let exps = cancel_pairs(exps.into_iter().collect());
        if variant == Variant::Ring {
            if let Some(e) = exps.iter().find(|e| e.is_negative()) {
                return Err(Error::NegativeExponent(*e));
            }
        }
        Ok(NovikovScalar { exps, variant })
    }

    /// Shorthand for a `Λ₀` element given by integer-pair exponents `(p, q)`.
    pub fn ring_from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::from_exponents(Variant::Ring, pairs.iter().map(|&(p, q)| Ratio::new(p, q)))
    }

    pub(crate) fn from_sorted_unchecked(exps: Vec<Energy>, variant: Variant) -> Self {
        debug_assert!(exps.windows(2).all(|w| w[0] < w[1]));
        NovikovScalar { exps, variant }
    }

    pub fn exponents(&self) -> &[Energy] {
        &self.exps
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.exps.len() == 1 && self.exps[0].is_zero()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Reinterprets a `Λ₀` element as an element of `Λ`.
    pub fn into_field(mut self) -> Self {
        self.variant = Variant::Field;
        self
    }

    /// Reinterprets an element of `Λ` as one of `Λ₀` if every exponent is non-negative.
    pub fn into_ring(self) -> Result<Self> {
        Self::from_exponents(Variant::Ring, self.exps)
    }

    /// `Z/2` addition. Both operands must share a variant.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.variant != other.variant {
            return Err(Error::VariantMismatch);
        }
        Ok(self.add_unchecked(other))
    }

    /// Multiplication. `Λ₀ × Λ₀ → Λ₀`; any product involving `Λ` lands in `Λ`.
    pub fn mul(&self, other: &Self) -> Self {
        let variant = if self.variant == Variant::Ring && other.variant == Variant::Ring {
            Variant::Ring
        } else {
            Variant::Field
        };
        let mut out = self.mul_unchecked(other, None);
        out.variant = variant;
        out
    }

    /// The energy valuation.
    pub fn valuation(&self) -> Valuation {
        self.exps.first().copied().map_or(Valuation::Infinity, Valuation::Finite)
    }

    /// The quotient map `Λ₀ → Λ₀/Λ₀⁺ ≅ Z/2`.
    pub fn reduce_mod_positive(&self) -> Result<bool> {
        match self.variant {
            Variant::Field => Err(Error::NoReduction),
            Variant::Ring => Ok(self.constant_term()),
        }
    }

    /// Whether the exponent `0` occurs.
    pub fn constant_term(&self) -> bool {
        self.exps.first().is_some_and(|e| e.is_zero())
    }

    /// Smallest strictly positive exponent, if any.
    pub fn min_positive_exponent(&self) -> Option<Energy> {
        self.exps.iter().find(|e| e.is_positive()).copied()
    }

    /// Largest exponent, if any.
    pub fn max_exponent(&self) -> Option<Energy> {
        self.exps.last().copied()
    }

    /// Whether the support lies in `{0} ∪ [gap, ∞)`.
    pub fn respects_gap(&self, gap: Energy) -> bool {
        self.exps.iter().all(|e| e.is_zero() || *e >= gap)
    }

    /// Multiplies by `T^e`.
    pub fn shift(&self, e: Energy) -> Result<Self> {
        Self::from_exponents(self.variant, self.exps.iter().map(|x| x + e))
    }

    /// Long division in `Λ`, peeling the leading monomial of the remainder until the next
    /// quotient exponent would reach `cutoff`.
    pub fn div_truncated(&self, divisor: &Self, cutoff: Energy) -> Result<TruncatedQuotient> {
        let lead = match divisor.valuation() {
            Valuation::Finite(v) => v,
            Valuation::Infinity => return Err(Error::DivisionByZero),
        };
        let divisor = divisor.clone().into_field();
        let mut remainder = self.clone().into_field();
        let mut quotient = Vec::new();
        while let Valuation::Finite(v) = remainder.valuation() {
            let q = v - lead;
            if q >= cutoff {
                break;
            }
            quotient.push(q);
            let step = divisor.shift(q)?;
            remainder = remainder.add_unchecked(&step);
        }
        Ok(TruncatedQuotient {
            quotient: NovikovScalar::from_sorted_unchecked(quotient, Variant::Field),
            remainder,
            cutoff,
        })
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        NovikovScalar { exps: out, variant: self.variant }
    }

    /// Product with all exponents `>= cutoff` discarded, when a cutoff is given.
    pub(crate) fn mul_unchecked(&self, other: &Self, cutoff: Option<Energy>) -> Self {
        if self.is_zero() || other.is_zero() {
            return NovikovScalar::zero(self.variant);
        }
        if self.is_one() {
            return truncate(other.clone(), cutoff);
        }
        if other.is_one() {
            return truncate(self.clone(), cutoff);
        }
        let mut sums = Vec::with_capacity(self.exps.len() * other.exps.len());
        for a in &self.exps {
            for b in &other.exps {
                let s = a + b;
                if cutoff.is_none_or(|c| s < c) {
                    sums.push(s);
                }
            }
        }
        NovikovScalar { exps: cancel_pairs(sums), variant: self.variant }
    }

    /// Drops every exponent `>= cutoff`.
    pub fn truncated(&self, cutoff: Energy) -> Self {
        truncate(self.clone(), Some(cutoff))
    }
}

fn truncate(mut s: NovikovScalar, cutoff: Option<Energy>) -> NovikovScalar {
    if let Some(c) = cutoff {
        let keep = s.exps.partition_point(|e| *e < c);
        s.exps.truncate(keep);
    }
    s
}

/// Sorts and removes exponents occurring an even number of times.
fn cancel_pairs(mut exps: Vec<Energy>) -> Vec<Energy> {
    exps.sort_unstable();
    let mut out: Vec<Energy> = Vec::with_capacity(exps.len());
    for e in exps {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "0");
        }
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "1")?;
            } else {
                write!(f, "T^({e})")?;
            }
        }
        Ok(())
    }
}
