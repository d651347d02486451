//! Idylls: pointed abelian groups with a nullset of formal sums, plus their morphisms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The built-in idylls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Idyll {
    /// Krasner hyperfield {0, 1}; a sum is null unless it has exactly one term.
    Krasner,
    /// Sign hyperfield {0, 1, -1}; a sum is null if empty or holding both signs.
    Sign,
    /// Tropical hyperfield on exact nonnegative rationals; null if the maximum repeats.
    Tropical,
    /// Regular partial field F1±; null iff as many 1s as -1s.
    RegularPartialField,
    /// Prime field GF(p); null iff the sum vanishes.
    FiniteField(u32),
}

/// A carrier element. Finite idylls use `Fin` codes: Krasner {0,1}; Sign and F1± 0, 1 and
/// 2 for -1; GF(p) residues. Tropical values are `Trop`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u32),
    Trop(BigRational),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Fin(c) => *c == 0,
            Elem::Trop(r) => r.is_zero(),
        }
    }
}

const MINUS: u32 = 2;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Idyll {
    pub fn finite_field(p: u32) -> Result<Idyll> {
        if is_prime(p) {
            Ok(Idyll::FiniteField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> Elem {
        match self {
            Idyll::Tropical => Elem::Trop(BigRational::zero()),
            _ => Elem::Fin(0),
        }
    }

    pub fn one(self) -> Elem {
        match self {
            Idyll::Tropical => Elem::Trop(BigRational::one()),
            _ => Elem::Fin(1),
        }
    }

    pub fn minus_one(self) -> Elem {
        match self {
            Idyll::Krasner => Elem::Fin(1),
            Idyll::Tropical => self.one(),
            Idyll::Sign | Idyll::RegularPartialField => Elem::Fin(MINUS),
            Idyll::FiniteField(p) => Elem::Fin(p - 1),
        }
    }

    pub fn contains(self, a: &Elem) -> bool {
        match (self, a) {
            (Idyll::Tropical, Elem::Trop(r)) => !r.is_negative(),
            (Idyll::Krasner, Elem::Fin(c)) => *c <= 1,
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Fin(c)) => *c <= MINUS,
            (Idyll::FiniteField(p), Elem::Fin(c)) => *c < p,
            _ => false,
        }
    }

    /// Product of two carrier elements.
    pub fn mul(self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Idyll::Tropical, Elem::Trop(x), Elem::Trop(y)) => Elem::Trop(x * y),
            (Idyll::Krasner, Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(x & y),
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Fin(x), Elem::Fin(y)) => {
                if *x == 0 || *y == 0 {
                    Elem::Fin(0)
                } else if x == y {
                    Elem::Fin(1)
                } else {
                    Elem::Fin(MINUS)
                }
            }
            (Idyll::FiniteField(p), Elem::Fin(x), Elem::Fin(y)) => {
                Elem::Fin(((*x as u64 * *y as u64) % p as u64) as u32)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(self, a: &Elem) -> Elem {
        self.mul(&self.minus_one(), a)
    }

    pub fn inv(self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(match (self, a) {
            (Idyll::Tropical, Elem::Trop(x)) => Elem::Trop(x.recip()),
            (Idyll::FiniteField(p), Elem::Fin(x)) => Elem::Fin(pow_mod(*x as u64, p as u64 - 2, p as u64) as u32),
            // Every unit of K, S and F1± is its own inverse.
            _ => a.clone(),
        })
    }

    /// Multiplies by `-1` when `odd`.
    pub fn signed(self, a: Elem, odd: bool) -> Elem {
        if odd {
            self.neg(&a)
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self != Idyll::Tropical
    }

    /// The whole carrier in canonical order, or `None` for tropical.
    pub fn elements(self) -> Option<Vec<Elem>> {
        let n = match self {
            Idyll::Tropical => return None,
            Idyll::Krasner => 2,
            Idyll::Sign | Idyll::RegularPartialField => 3,
            Idyll::FiniteField(p) => p,
        };
        Some((0..n).map(Elem::Fin).collect())
    }

    /// Nonzero carrier elements in canonical order, or `None` for tropical.
    pub fn units(self) -> Option<Vec<Elem>> {
        self.elements().map(|v| v.into_iter().skip(1).collect())
    }

    /// Perfect idylls make vectors orthogonal to covectors; all built-ins are.
    pub fn is_perfect(self) -> bool {
        true
    }

    pub fn null_acc(self) -> NullAcc {
        match self {
            Idyll::Krasner => NullAcc::Count(0),
            Idyll::Sign => NullAcc::Signs { pos: false, neg: false },
            Idyll::RegularPartialField => NullAcc::Balance(0),
            Idyll::FiniteField(p) => NullAcc::Residue { p: p as u64, sum: 0 },
            Idyll::Tropical => NullAcc::Max { max: None, count: 0 },
        }
    }

    /// Whether the formal sum of the given terms is null; zero terms are ignored.
    pub fn is_null_terms<'a, I: IntoIterator<Item = &'a Elem>>(self, terms: I) -> bool {
        let mut acc = self.null_acc();
        for t in terms {
            acc.push(t);
        }
        acc.is_null()
    }

    pub fn parse_elem(self, s: &str) -> Result<Elem> {
        let bad = || Error::ParseElement {
            idyll: self.to_string(),
            literal: s.to_string(),
        };
        let t = s.trim();
        match self {
            Idyll::Tropical => parse_rational(t).filter(|r| !r.is_negative()).map(Elem::Trop).ok_or_else(bad),
            Idyll::FiniteField(p) => {
                let v: i64 = t.parse().map_err(|_| bad())?;
                Ok(Elem::Fin(v.rem_euclid(p as i64) as u32))
            }
            Idyll::Krasner => match t {
                "0" => Ok(Elem::Fin(0)),
                "1" | "-1" => Ok(Elem::Fin(1)),
                _ => Err(bad()),
            },
            Idyll::Sign | Idyll::RegularPartialField => match t {
                "0" => Ok(Elem::Fin(0)),
                "1" | "+1" => Ok(Elem::Fin(1)),
                "-1" => Ok(Elem::Fin(MINUS)),
                _ => Err(bad()),
            },
        }
    }

    pub fn format_elem(self, a: &Elem) -> String {
        match (self, a) {
            (_, Elem::Trop(r)) => format_rational(r),
            (Idyll::Sign | Idyll::RegularPartialField, Elem::Fin(MINUS)) => "-1".to_string(),
            (_, Elem::Fin(c)) => c.to_string(),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Parses `"3"`, `"1.25"` or `"3/4"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, d);
    Some(if neg { -r } else { r })
}

/// Decimal when the denominator divides a power of ten, `a/b` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut places = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    places += twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = places + 1);
    let (i, f) = s.split_at(s.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, i, f)
}

impl fmt::Display for Idyll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idyll::Krasner => write!(f, "K"),
            Idyll::Sign => write!(f, "S"),
            Idyll::Tropical => write!(f, "T"),
            Idyll::RegularPartialField => write!(f, "F1pm"),
            Idyll::FiniteField(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Idyll {
    type Err = Error;

    fn from_str(s: &str) -> Result<Idyll> {
        match s.trim() {
            "K" => Ok(Idyll::Krasner),
            "S" => Ok(Idyll::Sign),
            "T" => Ok(Idyll::Tropical),
            "F1pm" => Ok(Idyll::RegularPartialField),
            other => {
                let p = other
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::UnknownIdyll(other.to_string()))?;
                Idyll::finite_field(p)
            }
        }
    }
}

/// Incremental nullset test for a formal sum.
#[derive(Clone, Debug)]
pub enum NullAcc {
    Count(u32),
    Signs { pos: bool, neg: bool },
    Balance(i64),
    Residue { p: u64, sum: u64 },
    Max { max: Option<BigRational>, count: u32 },
}

impl NullAcc {
    pub fn push(&mut self, t: &Elem) {
        if t.is_zero() {
            return;
        }
        match (self, t) {
            (NullAcc::Count(c), _) => *c = (*c + 1).min(2),
            (NullAcc::Signs { pos, neg }, Elem::Fin(c)) => {
                if *c == 1 {
                    *pos = true
                } else {
                    *neg = true
                }
            }
            (NullAcc::Balance(b), Elem::Fin(c)) => *b += if *c == 1 { 1 } else { -1 },
            (NullAcc::Residue { p, sum }, Elem::Fin(c)) => *sum = (*sum + *c as u64) % *p,
            (NullAcc::Max { max, count }, Elem::Trop(r)) => match max {
                Some(m) if *m == *r => *count += 1,
                Some(m) if *m > *r => {}
                _ => {
                    *max = Some(r.clone());
                    *count = 1;
                }
            },
            _ => panic!("term does not match the accumulator's idyll"),
        }
    }

    pub fn is_null(&self) -> bool {
        match self {
            NullAcc::Count(c) => *c != 1,
            NullAcc::Signs { pos, neg } => pos == neg,
            NullAcc::Balance(b) => *b == 0,
            NullAcc::Residue { sum, .. } => *sum == 0,
            NullAcc::Max { count, .. } => *count != 1,
        }
    }
}

/// An element tagged with its idyll.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdyllElement {
    pub idyll: Idyll,
    pub value: Elem,
}

impl IdyllElement {
    pub fn new(idyll: Idyll, value: Elem) -> Result<Self> {
        if idyll.contains(&value) {
            Ok(IdyllElement { idyll, value })
        } else {
            Err(Error::ParseElement {
                idyll: idyll.to_string(),
                literal: format!("{value:?}"),
            })
        }
    }

    pub fn parse(idyll: Idyll, s: &str) -> Result<Self> {
        Ok(IdyllElement { idyll, value: idyll.parse_elem(s)? })
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.idyll == other.idyll {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(self.idyll.to_string(), other.idyll.to_string()))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(IdyllElement { idyll: self.idyll, value: self.idyll.mul(&self.value, &other.value) })
    }

    pub fn neg(&self) -> Self {
        IdyllElement { idyll: self.idyll, value: self.idyll.neg(&self.value) }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(IdyllElement { idyll: self.idyll, value: self.idyll.inv(&self.value)? })
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for IdyllElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.idyll.format_elem(&self.value))
    }
}

/// A multiset of nonzero elements, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSum {
    pub idyll: Idyll,
    terms: Vec<Elem>,
}

impl FormalSum {
    pub fn new<I: IntoIterator<Item = Elem>>(idyll: Idyll, terms: I) -> Self {
        let mut terms: Vec<Elem> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        terms.sort();
        FormalSum { idyll, terms }
    }

    pub fn terms(&self) -> &[Elem] {
        &self.terms
    }

    pub fn is_null(&self) -> bool {
        self.idyll.is_null_terms(&self.terms)
    }
}

/// `Σ X_e·Y_e` as a formal sum.
pub fn inner_product(idyll: Idyll, x: &[Elem], y: &[Elem]) -> Result<FormalSum> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("vectors of length {} and {}", x.len(), y.len())));
    }
    Ok(FormalSum::new(idyll, x.iter().zip(y).map(|(a, b)| idyll.mul(a, b))))
}

/// Whether `Σ X_e·Y_e` is null; lengths must agree.
pub fn orthogonal(idyll: Idyll, x: &[Elem], y: &[Elem]) -> bool {
    let mut acc = idyll.null_acc();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc.push(&idyll.mul(a, b));
        }
    }
    acc.is_null()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismRule {
    ToKrasner,
    Identity,
    Inclusion,
}

/// A built-in idyll morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IdyllMorphism {
    pub source: Idyll,
    pub target: Idyll,
    pub rule: MorphismRule,
}

impl IdyllMorphism {
    pub fn to_krasner(source: Idyll) -> Self {
        IdyllMorphism { source, target: Idyll::Krasner, rule: MorphismRule::ToKrasner }
    }

    pub fn identity(idyll: Idyll) -> Self {
        IdyllMorphism { source: idyll, target: idyll, rule: MorphismRule::Identity }
    }

    /// K -> T, F1± -> S and F1± -> GF(p).
    pub fn inclusion(source: Idyll, target: Idyll) -> Result<Self> {
        let ok = matches!(
            (source, target),
            (Idyll::Krasner, Idyll::Tropical)
                | (Idyll::RegularPartialField, Idyll::Sign)
                | (Idyll::RegularPartialField, Idyll::FiniteField(_))
        );
        if ok {
            Ok(IdyllMorphism { source, target, rule: MorphismRule::Inclusion })
        } else {
            Err(Error::CarrierMismatch { rule: format!("inclusion into {target}"), source_idyll: source.to_string() })
        }
    }

    /// Applies the morphism to an element of its source.
    pub fn apply(&self, a: &Elem) -> Elem {
        if a.is_zero() {
            return self.target.zero();
        }
        match self.rule {
            MorphismRule::Identity => a.clone(),
            MorphismRule::ToKrasner => Elem::Fin(1),
            MorphismRule::Inclusion => match (self.target, a) {
                (Idyll::Tropical, _) => self.target.one(),
                (Idyll::Sign, _) => a.clone(),
                (t @ Idyll::FiniteField(_), Elem::Fin(c)) => {
                    if *c == 1 {
                        t.one()
                    } else {
                        t.minus_one()
                    }
                }
                _ => unreachable!("inclusion validated at construction"),
            },
        }
    }

    pub fn push_forward_elem(&self, a: &IdyllElement) -> Result<IdyllElement> {
        if a.idyll != self.source || !self.source.contains(&a.value) {
            return Err(Error::CarrierMismatch { rule: format!("{:?}", self.rule), source_idyll: a.idyll.to_string() });
        }
        Ok(IdyllElement { idyll: self.target, value: self.apply(&a.value) })
    }
}

/// Convenience constructor for tropical elements from integers.
pub fn trop(n: i64) -> Elem {
    Elem::Trop(BigRational::from_integer(BigInt::from(n)))
}

/// Convenience constructor for tropical elements from fractions.
pub fn trop_frac(n: i64, d: i64) -> Elem {
    Elem::Trop(BigRational::new(BigInt::from(n), BigInt::from(d)))
}
