//! Exact scalars.
//!
//! [`Scalar`] covers prime fields, binary extension fields GF(2^k) and the
//! rationals. [`Dual`] and [`Series`] add a nilpotent indeterminate `o`, and
//! [`Galois`] implements the Galois rings GR(2^m, k) used to lift binary-field
//! data to a ring where 2 is not zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    Composite(u64),
    #[error("modulus {0} is outside the supported range 2..2^63")]
    ModulusRange(u64),
    #[error("polynomial {0:#x} is reducible over GF(2)")]
    Reducible(u64),
    #[error("binary degree {0} is unsupported (expected 8..=62)")]
    Degree(u32),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("cannot parse field spec `{0}` (expected p=<prime>, gf2=<k> or q)")]
    Parse(String),
}

/// Commutative ring element that carries enough context to build constants.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
}

// ---------------------------------------------------------------- integers

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

// ------------------------------------------------------- GF(2) polynomials

fn poly_degree(f: u64) -> u32 {
    63 - f.leading_zeros()
}

/// Product of `a` and `b` modulo `f` (bitmask polynomials, `deg a, deg b < deg f`).
pub fn gf2_mul_mod(mut a: u64, mut b: u64, f: u64) -> u64 {
    let k = poly_degree(f);
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> k) & 1 == 1 {
            a ^= f;
        }
    }
    acc
}

fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `f` of degree k is irreducible iff gcd(x^(2^i) - x, f) = 1 for i <= k/2.
pub fn is_irreducible_gf2(f: u64) -> bool {
    if f == 0 {
        return false;
    }
    let k = poly_degree(f);
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut h = 2u64;
    for _ in 1..=k / 2 {
        h = gf2_mul_mod(h, h, f);
        if gf2_gcd(h ^ 2, f) != 1 {
            return false;
        }
    }
    true
}

/// Numerically smallest irreducible polynomial of degree `k`.
pub fn smallest_irreducible(k: u32) -> u64 {
    let lo = (1u64 << k) | 1;
    let hi = 1u64 << (k + 1);
    (lo..hi)
        .step_by(2)
        .find(|&f| is_irreducible_gf2(f))
        .expect("an irreducible polynomial exists in every degree")
}

fn gf2k_pow(mut a: u64, mut e: u64, f: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = gf2_mul_mod(acc, a, f);
        }
        a = gf2_mul_mod(a, a, f);
        e >>= 1;
    }
    acc
}

fn gf2k_inv(a: u64, f: u64) -> u64 {
    let k = poly_degree(f);
    gf2k_pow(a, (1u64 << k) - 2, f)
}

// ------------------------------------------------------------------ Scalar

/// Element of a prime field, a binary field or the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Prime { v: u64, p: u64 },
    Binary { v: u64, poly: u64 },
    Rational(BigRational),
}

impl Scalar {
    /// Canonical integer representative (prime), bitmask (binary); `None` for rationals.
    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Scalar::Prime { v, .. } | Scalar::Binary { v, .. } => Some(*v),
            Scalar::Rational(_) => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Prime { p, .. } => *p,
            Scalar::Binary { .. } => 2,
            Scalar::Rational(_) => 0,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Bytes of the canonical form, used for fingerprints.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        match self {
            Scalar::Prime { v, .. } | Scalar::Binary { v, .. } => v.to_le_bytes().to_vec(),
            Scalar::Rational(r) => format!("{}/{}", r.numer(), r.denom()).into_bytes(),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime { v, .. } => write!(f, "{v}"),
            Scalar::Binary { v, .. } => write!(f, "{v:#x}"),
            Scalar::Rational(r) => write!(f, "{r}"),
        }
    }
}

fn mixed() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Prime { v: a, p }, Scalar::Prime { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                let s = a + b;
                Scalar::Prime {
                    v: if s >= p { s - p } else { s },
                    p,
                }
            }
            (Scalar::Binary { v: a, poly }, Scalar::Binary { v: b, .. }) => {
                Scalar::Binary { v: a ^ b, poly }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mixed(),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Prime { v: a, p }, Scalar::Prime { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Prime {
                    v: if a >= b { a - b } else { a + p - b },
                    p,
                }
            }
            (Scalar::Binary { v: a, poly }, Scalar::Binary { v: b, .. }) => {
                Scalar::Binary { v: a ^ b, poly }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mixed(),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Prime { v: a, p }, Scalar::Prime { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Prime {
                    v: mul_mod(a, b, p),
                    p,
                }
            }
            (Scalar::Binary { v: a, poly }, Scalar::Binary { v: b, .. }) => Scalar::Binary {
                v: gf2_mul_mod(a, b, poly),
                poly,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mixed(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Prime { v, p } => Scalar::Prime {
                v: if v == 0 { 0 } else { p - v },
                p,
            },
            b @ Scalar::Binary { .. } => b,
            Scalar::Rational(a) => Scalar::Rational(-a),
        }
    }
}

impl Ring for Scalar {
    fn zero_like(&self) -> Scalar {
        self.int_like(0)
    }
    fn one_like(&self) -> Scalar {
        self.int_like(1)
    }
    fn int_like(&self, n: i64) -> Scalar {
        match self {
            Scalar::Prime { p, .. } => Scalar::Prime {
                v: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
            Scalar::Binary { poly, .. } => Scalar::Binary {
                v: (n & 1) as u64,
                poly: *poly,
            },
            Scalar::Rational(_) => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } | Scalar::Binary { v, .. } => *v == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
    fn try_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Prime { v, p } => Scalar::Prime {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
            Scalar::Binary { v, poly } => Scalar::Binary {
                v: gf2k_inv(*v, *poly),
                poly: *poly,
            },
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
    }
}

// --------------------------------------------------------------- FieldSpec

/// Parsed field description: `p=<prime>`, `gf2=<k>` or `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime { modulus: u64 },
    Binary { degree: u32 },
    Rational,
}

impl FromStr for FieldSpec {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<FieldSpec, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        let s = s.trim();
        if s == "q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix("p=") {
            let modulus = rest.parse::<u64>().map_err(|_| bad())?;
            return Ok(FieldSpec::Prime { modulus });
        }
        if let Some(rest) = s.strip_prefix("gf2=") {
            let degree = rest.parse::<u32>().map_err(|_| bad())?;
            return Ok(FieldSpec::Binary { degree });
        }
        Err(bad())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { modulus } => write!(f, "p={modulus}"),
            FieldSpec::Binary { degree } => write!(f, "gf2={degree}"),
            FieldSpec::Rational => write!(f, "q"),
        }
    }
}

pub const DEFAULT_PRIME: u64 = 2_147_483_647;
pub const DEFAULT_BINARY_DEGREE: u32 = 16;

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime {
            modulus: DEFAULT_PRIME,
        }
    }
}

// ------------------------------------------------------------------- Field

/// A validated field handle; produces constants and seeded samples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime { p: u64 },
    Binary { k: u32, poly: u64 },
    Rational,
}

/// Validate a spec and build the field (primality / irreducibility checked here).
pub fn field_make(spec: &FieldSpec) -> Result<Field, FieldError> {
    match *spec {
        FieldSpec::Prime { modulus } => Field::prime(modulus),
        FieldSpec::Binary { degree } => Field::binary(degree),
        FieldSpec::Rational => Ok(Field::Rational),
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !(2..(1u64 << 63)).contains(&p) {
            return Err(FieldError::ModulusRange(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::Composite(p));
        }
        Ok(Field::Prime { p })
    }

    /// GF(2^k) with the numerically smallest irreducible polynomial of degree k.
    pub fn binary(k: u32) -> Result<Field, FieldError> {
        if !(8..=62).contains(&k) {
            return Err(FieldError::Degree(k));
        }
        Field::binary_with_poly(smallest_irreducible(k))
    }

    pub fn binary_with_poly(poly: u64) -> Result<Field, FieldError> {
        let k = poly_degree(poly);
        if poly == 0 || !(1..=62).contains(&k) {
            return Err(FieldError::Degree(k));
        }
        if !is_irreducible_gf2(poly) {
            return Err(FieldError::Reducible(poly));
        }
        Ok(Field::Binary { k, poly })
    }

    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn spec(&self) -> FieldSpec {
        match *self {
            Field::Prime { p } => FieldSpec::Prime { modulus: p },
            Field::Binary { k, .. } => FieldSpec::Binary { degree: k },
            Field::Rational => FieldSpec::Rational,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Prime { p } => p,
            Field::Binary { .. } => 2,
            Field::Rational => 0,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, Field::Binary { .. })
    }

    /// Reduction polynomial of a binary field.
    pub fn poly(&self) -> Option<u64> {
        match *self {
            Field::Binary { poly, .. } => Some(poly),
            _ => None,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u128> {
        match *self {
            Field::Prime { p } => Some(p as u128),
            Field::Binary { k, .. } => Some(1u128 << k),
            Field::Rational => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Prime {
                v: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
            Field::Binary { poly, .. } => Scalar::Binary {
                v: (n & 1) as u64,
                poly,
            },
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Binary-field element from its coefficient bitmask.
    pub fn from_bits(&self, bits: u64) -> Scalar {
        match *self {
            Field::Binary { k, poly } => Scalar::Binary {
                v: bits & ((1u64 << k) - 1),
                poly,
            },
            _ => panic!("from_bits on a non-binary field"),
        }
    }

    pub fn rational_value(&self, num: i64, den: i64) -> Scalar {
        assert!(matches!(self, Field::Rational));
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Uniform nonzero element (rationals: nonzero integers in [-2^15, 2^15]).
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Prime {
                v: rng.gen_range(1..p),
                p,
            },
            Field::Binary { k, poly } => Scalar::Binary {
                v: rng.gen_range(1..(1u64 << k)),
                poly,
            },
            Field::Rational => {
                let mut n = 0i64;
                while n == 0 {
                    n = rng.gen_range(-(1i64 << 15)..=(1i64 << 15));
                }
                self.int(n)
            }
        }
    }

    pub fn sample_any<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Prime {
                v: rng.gen_range(0..p),
                p,
            },
            Field::Binary { k, poly } => Scalar::Binary {
                v: rng.gen_range(0..(1u64 << k)),
                poly,
            },
            Field::Rational => self.int(rng.gen_range(-(1i64 << 15)..=(1i64 << 15))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

/// The RNG used everywhere: ChaCha8 seeded from a 64-bit value.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` independent uniform nonzero elements, deterministic in `seed`.
pub fn sample_generic(field: &Field, seed: u64, count: usize) -> Vec<Scalar> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| field.sample_nonzero(&mut rng)).collect()
}

/// Integer value of a rational scalar, if it is one and fits.
pub fn rational_as_i64(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Rational(r) if r.is_integer() => r.numer().to_i64(),
        _ => None,
    }
}

/// Absolute height of a rational (max of |numerator|, |denominator|) in bits.
pub fn rational_height_bits(s: &Scalar) -> u64 {
    match s {
        Scalar::Rational(r) => r.numer().abs().bits().max(r.denom().bits()),
        _ => 0,
    }
}

// -------------------------------------------------------------------- Dual

/// `a + b·o` with `o² = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct Dual<R> {
    pub a: R,
    pub b: R,
}

impl<R: Ring> Dual<R> {
    pub fn new(a: R, b: R) -> Self {
        Dual { a, b }
    }

    pub fn constant(a: R) -> Self {
        let b = a.zero_like();
        Dual { a, b }
    }

    /// Projection to the constant part (a ring homomorphism).
    pub fn constant_part(&self) -> R {
        self.a.clone()
    }
}

impl<R: Ring> Add for Dual<R> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Dual {
            a: self.a + r.a,
            b: self.b + r.b,
        }
    }
}

impl<R: Ring> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Dual {
            a: self.a - r.a,
            b: self.b - r.b,
        }
    }
}

impl<R: Ring> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let b = self.a.clone() * r.b + self.b * r.a.clone();
        Dual { a: self.a * r.a, b }
    }
}

impl<R: Ring> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl<R: Ring> Ring for Dual<R> {
    fn zero_like(&self) -> Self {
        Dual::constant(self.a.zero_like())
    }
    fn one_like(&self) -> Self {
        Dual::constant(self.a.one_like())
    }
    fn int_like(&self, n: i64) -> Self {
        Dual::constant(self.a.int_like(n))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.a.is_unit()
    }
    fn try_inv(&self) -> Option<Self> {
        dual_invert(self).ok()
    }
}

/// `(a + b·o)⁻¹ = a⁻¹ − a⁻²·b·o`.
pub fn dual_invert<R: Ring>(d: &Dual<R>) -> Result<Dual<R>, FieldError> {
    let ai = d.a.try_inv().ok_or(FieldError::NotInvertible)?;
    let b = -(ai.clone() * ai.clone() * d.b.clone());
    Ok(Dual { a: ai, b })
}

// ------------------------------------------------------------------ Series

/// Power series in `o` truncated to a fixed number of coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<R> {
    pub c: Vec<R>,
}

impl<R: Ring> Series<R> {
    pub fn new(c: Vec<R>) -> Self {
        assert!(!c.is_empty());
        Series { c }
    }

    /// `a + b·o` padded with zeros to `len` coefficients.
    pub fn linear(a: R, b: R, len: usize) -> Self {
        let z = a.zero_like();
        let mut c = vec![z; len];
        c[0] = a;
        if len > 1 {
            c[1] = b;
        }
        Series { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.c[i]
    }
}

impl<R: Ring> Add for Series<R> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Series {
            c: self.c.into_iter().zip(r.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<R: Ring> Sub for Series<R> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Series {
            c: self.c.into_iter().zip(r.c).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<R: Ring> Mul for Series<R> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let n = self.c.len();
        let mut c = vec![self.c[0].zero_like(); n];
        for i in 0..n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                c[i + j] = c[i + j].clone() + self.c[i].clone() * r.c[j].clone();
            }
        }
        Series { c }
    }
}

impl<R: Ring> Neg for Series<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Series {
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<R: Ring> Ring for Series<R> {
    fn zero_like(&self) -> Self {
        self.int_like(0)
    }
    fn one_like(&self) -> Self {
        self.int_like(1)
    }
    fn int_like(&self, n: i64) -> Self {
        let z = self.c[0].zero_like();
        let mut c = vec![z; self.c.len()];
        c[0] = self.c[0].int_like(n);
        Series { c }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn is_unit(&self) -> bool {
        self.c[0].is_unit()
    }
    fn try_inv(&self) -> Option<Self> {
        let a0 = self.c[0].try_inv()?;
        let n = self.c.len();
        let mut inv: Vec<R> = Vec::with_capacity(n);
        inv.push(a0.clone());
        for k in 1..n {
            let mut s = a0.zero_like();
            for j in 1..=k {
                s = s + self.c[j].clone() * inv[k - j].clone();
            }
            inv.push(-(a0.clone() * s));
        }
        Some(Series { c: inv })
    }
}

// ------------------------------------------------------------------ Galois

/// Element of the Galois ring GR(2^m, k) = (Z/2^m)[x] / (F), where F is the
/// coefficientwise lift of an irreducible binary polynomial of degree k.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Galois {
    c: Vec<u64>,
    m: u32,
    poly: u64,
}

impl Galois {
    fn mask(m: u32) -> u64 {
        (1u64 << m) - 1
    }

    fn degree(&self) -> usize {
        poly_degree(self.poly) as usize
    }

    /// Coefficientwise lift of a binary-field element (coefficients 0/1).
    pub fn lift(s: &Scalar, m: u32) -> Galois {
        match s {
            Scalar::Binary { v, poly } => {
                let k = poly_degree(*poly) as usize;
                Galois {
                    c: (0..k).map(|i| (v >> i) & 1).collect(),
                    m,
                    poly: *poly,
                }
            }
            _ => panic!("Galois lift of a non-binary scalar"),
        }
    }

    pub fn modulus_bits(&self) -> u32 {
        self.m
    }

    /// Reduction mod 2 back to the binary field.
    pub fn residue(&self) -> Scalar {
        let v = self
            .c
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &x)| acc | ((x & 1) << i));
        Scalar::Binary { v, poly: self.poly }
    }

    /// Reduce to GR(2^m', k) for m' <= m.
    pub fn truncate(&self, m: u32) -> Galois {
        assert!(m <= self.m);
        Galois {
            c: self.c.iter().map(|x| x & Galois::mask(m)).collect(),
            m,
            poly: self.poly,
        }
    }

    pub fn is_divisible_by_two(&self) -> bool {
        self.c.iter().all(|x| x & 1 == 0)
    }

    /// `self / 2` as an element of GR(2^(m-1), k); `None` if some coefficient is odd.
    pub fn halve(&self) -> Option<Galois> {
        if !self.is_divisible_by_two() || self.m < 2 {
            return None;
        }
        Some(Galois {
            c: self.c.iter().map(|x| x >> 1).collect(),
            m: self.m - 1,
            poly: self.poly,
        })
    }

    fn with(&self, c: Vec<u64>) -> Galois {
        let mk = Galois::mask(self.m);
        Galois {
            c: c.into_iter().map(|x| x & mk).collect(),
            m: self.m,
            poly: self.poly,
        }
    }
}

impl Add for Galois {
    type Output = Galois;
    fn add(self, r: Galois) -> Galois {
        let c = self
            .c
            .iter()
            .zip(&r.c)
            .map(|(a, b)| a.wrapping_add(*b))
            .collect();
        self.with(c)
    }
}

impl Sub for Galois {
    type Output = Galois;
    fn sub(self, r: Galois) -> Galois {
        let c = self
            .c
            .iter()
            .zip(&r.c)
            .map(|(a, b)| a.wrapping_sub(*b))
            .collect();
        self.with(c)
    }
}

impl Neg for Galois {
    type Output = Galois;
    fn neg(self) -> Galois {
        let c = self.c.iter().map(|a| a.wrapping_neg()).collect();
        self.with(c)
    }
}

impl Mul for Galois {
    type Output = Galois;
    fn mul(self, r: Galois) -> Galois {
        let k = self.degree();
        let mk = Galois::mask(self.m);
        let mut prod = vec![0u64; 2 * k];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in r.c.iter().enumerate() {
                prod[i + j] = prod[i + j].wrapping_add(a.wrapping_mul(b)) & mk;
            }
        }
        // x^k = -(F - x^k)
        for d in (k..2 * k).rev() {
            let top = prod[d];
            if top == 0 {
                continue;
            }
            prod[d] = 0;
            for bit in 0..k {
                if (self.poly >> bit) & 1 == 1 {
                    let idx = d - k + bit;
                    prod[idx] = prod[idx].wrapping_sub(top) & mk;
                }
            }
        }
        prod.truncate(k);
        self.with(prod)
    }
}

impl Ring for Galois {
    fn zero_like(&self) -> Galois {
        self.int_like(0)
    }
    fn one_like(&self) -> Galois {
        self.int_like(1)
    }
    fn int_like(&self, n: i64) -> Galois {
        let mut c = vec![0u64; self.degree()];
        c[0] = n as u64;
        self.with(c)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn is_unit(&self) -> bool {
        self.c.iter().any(|x| x & 1 == 1)
    }
    fn try_inv(&self) -> Option<Galois> {
        if !self.is_unit() {
            return None;
        }
        let r = self.residue().try_inv()?;
        let mut x = Galois::lift(&r, self.m);
        let two = self.int_like(2);
        // Newton: each step doubles the 2-adic precision.
        let mut prec = 1;
        while prec < self.m {
            x = x.clone() * (two.clone() - self.clone() * x);
            prec *= 2;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_oracle_agrees_with_trial_division() {
        for n in 0u64..2000 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), slow, "n = {n}");
        }
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(!is_prime_u64(DEFAULT_PRIME - 2));
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn field_make_validates() {
        assert!(field_make(&FieldSpec::Prime { modulus: 7 }).is_ok());
        assert!(field_make(&FieldSpec::Prime {
            modulus: DEFAULT_PRIME
        })
        .is_ok());
        assert_eq!(
            field_make(&FieldSpec::Prime { modulus: 91 }),
            Err(FieldError::Composite(91))
        );
        assert_eq!(
            Field::binary_with_poly(0x10001),
            Err(FieldError::Reducible(0x10001))
        );
        assert!(matches!(Field::binary(4), Err(FieldError::Degree(4))));
    }

    #[test]
    fn default_binary_polynomial_is_irreducible() {
        let f = Field::binary(16).unwrap();
        let poly = f.poly().unwrap();
        assert_eq!(poly_degree(poly), 16);
        assert!(is_irreducible_gf2(poly));
        // x^(2^16) = x in GF(2^16)
        let x = f.from_bits(2);
        assert_eq!(x.pow(1 << 16), x);
    }

    #[test]
    fn irreducibility_matches_factor_search() {
        // brute force: f reducible iff divisible by some polynomial of degree 1..=deg/2
        for f in 2u64..512 {
            let d = poly_degree(f);
            let reducible = (2u64..(1u64 << (d / 2 + 1)))
                .filter(|g| poly_degree(*g) >= 1 && poly_degree(*g) <= d / 2)
                .any(|g| gf2_rem(f, g) == 0);
            assert_eq!(is_irreducible_gf2(f), d >= 1 && !reducible, "f = {f:#b}");
        }
    }

    #[test]
    fn spec_round_trip() {
        for s in ["p=7", "p=2147483647", "gf2=16", "q"] {
            assert_eq!(s.parse::<FieldSpec>().unwrap().to_string(), s);
        }
        assert!("p=x".parse::<FieldSpec>().is_err());
        assert!("gf3=2".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_nonzero() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        assert!(sample_generic(&f, 5, 0).is_empty());
        assert_eq!(sample_generic(&f, 9, 50), sample_generic(&f, 9, 50));
        assert!(sample_generic(&f, 1, 10_000).iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn negative_integers_reduce() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.int(-1), f.int(6));
        assert_eq!(f.one().int_like(-15), f.int(6));
        let g = Field::binary(8).unwrap();
        assert_eq!(g.int(-1), g.one());
    }

    #[test]
    fn dual_examples() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let d = Dual::new(f.one(), f.one());
        assert_eq!(dual_invert(&d).unwrap(), Dual::new(f.one(), -f.one()));
        let e = Dual::new(f.one(), f.zero());
        assert_eq!(dual_invert(&e).unwrap(), e);
        let o = Dual::new(f.zero(), f.one());
        assert_eq!(dual_invert(&o), Err(FieldError::NotInvertible));
        assert!((o.clone() * o).is_zero());
    }

    #[test]
    fn series_inverse() {
        let f = Field::prime(101).unwrap();
        let s = Series::new(vec![f.int(3), f.int(5), f.int(7)]);
        let i = s.try_inv().unwrap();
        assert_eq!(s * i, Series::new(vec![f.one(), f.zero(), f.zero()]));
    }

    #[test]
    fn galois_ring_inverse_and_halving() {
        let f = Field::binary(16).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let a = Galois::lift(&f.sample_nonzero(&mut rng), 3);
            let b = Galois::lift(&f.sample_any(&mut rng), 3);
            let ai = a.try_inv().unwrap();
            assert_eq!(a.clone() * ai, a.one_like());
            let twice = (b.clone() + b.clone()).halve().unwrap();
            assert_eq!(twice, b.truncate(2));
            assert_eq!((a.clone() * b.clone()).residue(), a.residue() * b.residue());
        }
    }
}
