//! Unsigned count types and the `ProofSize` measure.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

/// An exact unsigned integer used for tree sizes, proof sizes, bounds and
/// model counts.
///
/// Implemented for every type with the required arithmetic; in practice
/// `u32`, `u64`, `u128` and [`BigUint`]. Overflow is never silent: the
/// checked operations are used everywhere and overflowing a fixed-width
/// count panics with a message pointing at the wider type.
pub trait Count:
    Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| overflow())
    }

    fn add_exact(&self, other: &Self) -> Self {
        self.checked_add(other).unwrap_or_else(|| overflow())
    }

    fn mul_exact(&self, other: &Self) -> Self {
        self.checked_mul(other).unwrap_or_else(|| overflow())
    }

    fn succ(&self) -> Self {
        self.add_exact(&Self::one())
    }

    /// `2^exp`.
    fn pow2(exp: usize) -> Self {
        let two = Self::one().add_exact(&Self::one());
        num_traits::checked_pow(two, exp).unwrap_or_else(|| overflow())
    }

    /// Converts between count types. Panics if the value does not fit.
    fn convert<D: Count>(&self) -> D {
        if let Some(v) = self.to_u128() {
            if let Some(d) = D::from_u128(v) {
                return d;
            }
        }
        let digits = self.to_string();
        let mut acc = D::zero();
        let ten = D::from_u8(10).unwrap_or_else(|| overflow());
        for ch in digits.bytes() {
            let digit = D::from_u8(ch - b'0').unwrap_or_else(|| overflow());
            acc = acc.mul_exact(&ten).add_exact(&digit);
        }
        acc
    }
}

impl<T> Count for T where
    T: Clone
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[cold]
fn overflow() -> ! {
    panic!("count overflow; use a wider count type such as BigUint")
}

/// Size of an optimal proof: a natural number, or `Infinite` when no proof
/// exists (satisfiable input, or no refutation within a branching
/// restriction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProofSize<C> {
    Finite(C),
    Infinite,
}

impl<C: Count> ProofSize<C> {
    pub fn zero() -> Self {
        ProofSize::Finite(C::zero())
    }

    pub fn finite(n: u64) -> Self {
        ProofSize::Finite(C::from_u64(n).expect("count type too narrow"))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ProofSize::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&C> {
        match self {
            ProofSize::Finite(n) => Some(n),
            ProofSize::Infinite => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_finite().and_then(|n| n.to_u64())
    }

    /// Saturating addition: anything plus `Infinite` is `Infinite`.
    pub fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (ProofSize::Finite(a), ProofSize::Finite(b)) => ProofSize::Finite(a.add_exact(b)),
            _ => ProofSize::Infinite,
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        match (self, other) {
            (ProofSize::Finite(a), ProofSize::Finite(b)) => ProofSize::Finite(a.mul_exact(b)),
            _ => ProofSize::Infinite,
        }
    }

    pub fn succ(&self) -> Self {
        self.plus(&ProofSize::Finite(C::one()))
    }

    /// True iff the size is finite and at most `k`.
    pub fn within(&self, k: &C) -> bool {
        matches!(self, ProofSize::Finite(n) if n <= k)
    }

    pub fn convert<D: Count>(&self) -> ProofSize<D> {
        match self {
            ProofSize::Finite(n) => ProofSize::Finite(n.convert()),
            ProofSize::Infinite => ProofSize::Infinite,
        }
    }
}

impl<C: Count> PartialOrd for ProofSize<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Count> Ord for ProofSize<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProofSize::Finite(a), ProofSize::Finite(b)) => a.cmp(b),
            (ProofSize::Finite(_), ProofSize::Infinite) => Ordering::Less,
            (ProofSize::Infinite, ProofSize::Finite(_)) => Ordering::Greater,
            (ProofSize::Infinite, ProofSize::Infinite) => Ordering::Equal,
        }
    }
}

impl<C: Count> fmt::Display for ProofSize<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofSize::Finite(n) => write!(f, "{n}"),
            ProofSize::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses a decimal natural into any count type (arbitrary length).
pub fn parse_count<C: Count>(text: &str) -> Option<C> {
    let text = text.trim();
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let big: BigUint = text.parse().ok()?;
    if let Some(v) = big.to_u128() {
        return C::from_u128(v);
    }
    let ten = C::from_u8(10)?;
    let mut acc = C::zero();
    for ch in text.bytes() {
        acc = acc.checked_mul(&ten)?.checked_add(&C::from_u8(ch - b'0')?)?;
    }
    Some(acc)
}
