//! Exact coefficient arithmetic: prime fields, rationals, and Laurent
//! polynomials over either.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not a supported prime (must be prime and below 2^32)")]
    NotPrime(u64),
    #[error("unknown field `{0}` (expected F<p> or Q)")]
    UnknownField(String),
}

/// The coefficient field: `F_p` for a word-sized prime, or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// The field of characteristic `c`: `Q` for 0, `F_c` otherwise.
    pub fn with_characteristic(c: u64) -> Result<Self, ScalarError> {
        if c == 0 {
            Ok(FieldSpec::Rational)
        } else {
            FieldSpec::prime(c)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match *self {
            FieldSpec::Prime(p) => FieldElem::Mod {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
            FieldSpec::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match *self {
            FieldSpec::Prime(p) => {
                let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                FieldElem::Mod {
                    value: u64::try_from(r).expect("residue fits in u64"),
                    modulus: p,
                }
            }
            FieldSpec::Rational => FieldElem::Rat(BigRational::from_integer(n.clone())),
        }
    }

    /// `num / den` in this field.
    pub fn ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, ScalarError> {
        let d = self.from_bigint(den);
        Ok(self.from_bigint(num) * d.inv()?)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = t.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime(p);
            }
        }
        Err(ScalarError::UnknownField(s.to_string()))
    }
}

/// An element of a [`FieldSpec`], always in canonical form: a residue in
/// `[0, p)` or a reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Mod { value: u64, modulus: u64 },
    Rat(BigRational),
}

impl FieldElem {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElem::Mod { modulus, .. } => FieldSpec::Prime(*modulus),
            FieldElem::Rat(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Mod { value, .. } => *value == 0,
            FieldElem::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Mod { value, .. } => *value == 1,
            FieldElem::Rat(r) => r.is_one(),
        }
    }

    /// True for rationals printed with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Mod { .. } => false,
            FieldElem::Rat(r) => r.is_negative(),
        }
    }

    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Mod { value, modulus } => FieldElem::Mod {
                value: pow_mod(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            },
            FieldElem::Rat(r) => FieldElem::Rat(r.recip()),
        })
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check(&self, other: &FieldElem) -> Result<(), ScalarError> {
        if self.field() != other.field() {
            Err(ScalarError::FieldMismatch(self.field(), other.field()))
        } else {
            Ok(())
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: &'a FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Mod { value: a, modulus: p }, FieldElem::Mod { value: b, modulus: q }) if p == q => {
                let s = a + b;
                FieldElem::Mod {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                }
            }
            (FieldElem::Rat(a), FieldElem::Rat(b)) if a.is_integer() && b.is_integer() => {
                FieldElem::Rat(BigRational::from_integer(a.numer() + b.numer()))
            }
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            _ => panic!("{}", self.check(rhs).unwrap_err()),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;

    fn sub(self, rhs: &'a FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;

    fn mul(self, rhs: &'a FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Mod { value: a, modulus: p }, FieldElem::Mod { value: b, modulus: q }) if p == q => {
                FieldElem::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            (FieldElem::Rat(a), FieldElem::Rat(b)) if a.is_integer() && b.is_integer() => {
                FieldElem::Rat(BigRational::from_integer(a.numer() * b.numer()))
            }
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            _ => panic!("{}", self.check(rhs).unwrap_err()),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Mod { value, modulus } => FieldElem::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            FieldElem::Rat(r) => FieldElem::Rat(-r),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Neg,
    Mul,
    Inv,
}

/// Checked field arithmetic. Unary operations ignore `y`.
pub fn field_arith(op: FieldOp, x: &FieldElem, y: &FieldElem) -> Result<FieldElem, ScalarError> {
    match op {
        FieldOp::Add => {
            x.check(y)?;
            Ok(x + y)
        }
        FieldOp::Mul => {
            x.check(y)?;
            Ok(x * y)
        }
        FieldOp::Neg => Ok(-x),
        FieldOp::Inv => x.inv(),
    }
}

/// A Laurent polynomial `sum a_i x^i` over a [`FieldSpec`], stored sparsely.
/// The zero polynomial has no stored terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: FieldSpec,
    coeffs: BTreeMap<i64, FieldElem>,
}

impl LaurentPoly {
    pub fn zero(field: FieldSpec) -> Self {
        LaurentPoly {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FieldElem, exp: i64) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.coeffs.insert(exp, c);
        }
        p
    }

    /// The indeterminate `x`.
    pub fn x(field: FieldSpec) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> Self {
        let mut p = Self::zero(field);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.coeffs.remove(&exp);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(exp, c.clone());
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElem)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> FieldElem {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest and highest exponents, or `None` for zero.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// `x -> x^{-1}`.
    pub fn involute(&self) -> Self {
        LaurentPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        LaurentPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.field.one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(self * other)
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.field != other.field {
            Err(ScalarError::FieldMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, rhs.field, "field mismatch in Laurent addition");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

fn integer_form(p: &LaurentPoly) -> (BigInt, Vec<(i64, BigInt)>) {
    let rat = |c: &FieldElem| match c {
        FieldElem::Rat(r) => r.clone(),
        FieldElem::Mod { .. } => unreachable!("rational polynomial"),
    };
    let den = p.coeffs.values().fold(BigInt::one(), |d, c| d.lcm(rat(c).denom()));
    let terms = p
        .coeffs
        .iter()
        .map(|(e, c)| {
            let r = rat(c);
            (*e, r.numer() * (&den / r.denom()))
        })
        .collect();
    (den, terms)
}

// Integer convolution over a common denominator; avoids a gcd per term.
fn rational_convolve(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero(FieldSpec::Rational);
    }
    let (da, ta) = integer_form(a);
    let (db, tb) = integer_form(b);
    let lo = ta[0].0 + tb[0].0;
    let hi = ta[ta.len() - 1].0 + tb[tb.len() - 1].0;
    let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (e1, c1) in &ta {
        for (e2, c2) in &tb {
            acc[(e1 + e2 - lo) as usize] += c1 * c2;
        }
    }
    let den = da * db;
    let coeffs = acc
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (lo + i as i64, FieldElem::Rat(BigRational::new(c, den.clone()))))
        .collect();
    LaurentPoly {
        field: FieldSpec::Rational,
        coeffs,
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, rhs.field, "field mismatch in Laurent multiplication");
        if self.field == FieldSpec::Rational {
            return rational_convolve(self, rhs);
        }
        let mut out = LaurentPoly::zero(self.field);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            match (mag.is_one(), var.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "{var}")?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

/// Total order on field elements used only for deterministic output.
pub fn cmp_elems(a: &FieldElem, b: &FieldElem) -> Ordering {
    match (a, b) {
        (FieldElem::Mod { value: x, .. }, FieldElem::Mod { value: y, .. }) => x.cmp(y),
        (FieldElem::Rat(x), FieldElem::Rat(y)) => x.cmp(y),
        (FieldElem::Mod { .. }, FieldElem::Rat(_)) => Ordering::Less,
        (FieldElem::Rat(_), FieldElem::Mod { .. }) => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElem {
        FieldSpec::Rational.ratio(&BigInt::from(n), &BigInt::from(d)).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let f3 = FieldSpec::Prime(3);
        assert_eq!(f3.from_i64(2) + f3.from_i64(2), f3.from_i64(1));
        let f2 = FieldSpec::Prime(2);
        assert!((f2.one() + f2.one()).is_zero());
        assert_eq!(q(2, 3).inv().unwrap(), q(3, 2));
        assert_eq!(f3.zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn checked_arith_reports_mismatch() {
        let a = FieldSpec::Prime(3).one();
        let b = FieldSpec::Rational.one();
        assert!(matches!(
            field_arith(FieldOp::Add, &a, &b),
            Err(ScalarError::FieldMismatch(..))
        ));
        assert_eq!(
            field_arith(FieldOp::Inv, &FieldSpec::Prime(5).from_i64(2), &a).unwrap(),
            FieldSpec::Prime(5).from_i64(3)
        );
    }

    #[test]
    fn parse_fields() {
        assert_eq!("F2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert!("F4".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(5).to_string(), "F5");
    }

    #[test]
    fn laurent_examples() {
        let f = FieldSpec::Rational;
        let x = LaurentPoly::x(f);
        let xi = x.involute();
        assert_eq!(&x * &xi, LaurentPoly::constant(f.one()));
        let d = &x - &xi;
        assert_eq!(&d * &x, LaurentPoly::from_terms(f, [(2, f.one()), (0, f.from_i64(-1))]));
        let p = LaurentPoly::from_terms(f, [(1, f.one()), (3, f.from_i64(2))]);
        assert_eq!(p.involute().to_string(), "2*x^-3 + x^-1");
        assert_eq!(LaurentPoly::constant(f.from_i64(5)).involute().to_string(), "5");
        assert_eq!(
            LaurentPoly::from_terms(f, [(-1, f.one()), (3, f.from_i64(2))]).to_string(),
            "x^-1 + 2*x^3"
        );

        let f2 = FieldSpec::Prime(2);
        let s = &LaurentPoly::x(f2) + &LaurentPoly::x(f2).involute();
        assert_eq!(&s * &s, LaurentPoly::from_terms(f2, [(2, f2.one()), (-2, f2.one())]));
    }

    #[test]
    fn laurent_zero_is_empty() {
        let f = FieldSpec::Prime(3);
        let p = LaurentPoly::from_terms(f, [(4, f.one()), (4, f.from_i64(2))]);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
        assert_eq!(p.to_string(), "0");
    }

    fn field_strategy() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::Prime(2)),
            Just(FieldSpec::Prime(3)),
            Just(FieldSpec::Prime(5)),
            Just(FieldSpec::Rational),
        ]
    }

    fn elem(f: FieldSpec, n: i64, d: i64) -> FieldElem {
        match f {
            FieldSpec::Rational => q(n, d),
            _ => f.from_i64(n),
        }
    }

    fn laurent(f: FieldSpec, terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(f, terms.iter().map(|&(e, c)| (e, f.from_i64(c))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(f in field_strategy(),
                        a in (-20i64..20, 1i64..7), b in (-20i64..20, 1i64..7), c in (-20i64..20, 1i64..7)) {
            let (a, b, c) = (elem(f, a.0, a.1), elem(f, b.0, b.1), elem(f, c.0, c.1));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn laurent_involution_is_multiplicative(f in field_strategy(),
                ta in prop::collection::vec((-4i64..5, -3i64..4), 0..5),
                tb in prop::collection::vec((-4i64..5, -3i64..4), 0..5)) {
            let (p, r) = (laurent(f, &ta), laurent(f, &tb));
            prop_assert_eq!((&p * &r).involute(), &p.involute() * &r.involute());
            prop_assert_eq!(p.involute().involute(), p.clone());
            prop_assert_eq!(p.is_zero(), p.terms().count() == 0);
        }

        #[test]
        fn rational_product_matches_termwise(
                ta in prop::collection::vec((-4i64..5, -9i64..10, 1i64..6), 0..6),
                tb in prop::collection::vec((-4i64..5, -9i64..10, 1i64..6), 0..6)) {
            let f = FieldSpec::Rational;
            let build = |t: &[(i64, i64, i64)]| {
                LaurentPoly::from_terms(f, t.iter().map(|&(e, n, d)| (e, q(n, d))))
            };
            let (p, r) = (build(&ta), build(&tb));
            let mut want = BTreeMap::new();
            for (e1, c1) in p.terms() {
                for (e2, c2) in r.terms() {
                    let slot = want.entry(e1 + e2).or_insert_with(|| f.zero());
                    *slot = &*slot + &(c1 * c2);
                }
            }
            want.retain(|_, c: &mut FieldElem| !c.is_zero());
            let got: BTreeMap<i64, FieldElem> = (&p * &r).terms().map(|(e, c)| (e, c.clone())).collect();
            prop_assert_eq!(got, want);
        }
    }
}
