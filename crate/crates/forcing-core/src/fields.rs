//! Exact scalar arithmetic behind one field interface: arbitrary-precision
//! rationals, prime fields GF(p), and real quadratic extensions ℚ(√d).
//!
//! Everything downstream (matrices, rank, certificates) is generic over
//! [`Field`]. There is no floating point anywhere; a value that cannot be
//! represented exactly is a construction error, never a rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Fixed seed for the deterministic retry sequence in [`element_of_order`].
const ORDER_SEARCH_SEED: u64 = 0x5eed_0e0d;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: expected element of {expected}, found {found}")]
    MixedField { expected: String, found: String },
    #[error("cannot parse {input:?} as an element of {field}: {reason}")]
    Parse {
        input: String,
        field: String,
        reason: String,
    },
    #[error("GF({p}) has no element of order {n}: p is not congruent to 1 mod n")]
    NoSuchOrder { n: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid radicand {0}: need a squarefree integer > 1")]
    BadRadicand(i64),
}

/// An exact field together with its element representation.
///
/// The field instance (the modulus p, the radicand d) lives on the field
/// value, not on every element; element data stays plain. Mixing instances
/// is rejected where matrices and certificates are built, not on every
/// scalar operation.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// 0 for characteristic-zero fields, p for GF(p).
    fn characteristic(&self) -> u64;

    /// Short descriptor used in reports and file headers, e.g. `Q`, `GF(7)`.
    fn descriptor(&self) -> String;

    /// Parse one scalar in this field's textual syntax.
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// Render one scalar; `parse(render(x)) == x` must hold.
    fn render(&self, a: &Self::Elem) -> String;

    /// Exact square root when one exists in this field; `None` otherwise.
    /// Over ℚ(√d) only elements with zero √d-part are attempted, which is
    /// all the certificate constructions need.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Deterministic sampling for property suites.
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;
}

fn parse_err<F: Field>(field: &F, input: &str, reason: impl Into<String>) -> FieldError {
    FieldError::Parse {
        input: input.to_string(),
        field: field.descriptor(),
        reason: reason.into(),
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The field ℚ. Elements are reduced `BigRational`s (gcd 1, denominator > 0);
/// `num-rational` maintains that normal form after every operation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inverse(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn descriptor(&self) -> String {
        "Q".to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let t = s.trim();
        if t.contains("sqrt") || t.contains("mod") {
            return Err(parse_err(self, s, "not a rational literal"));
        }
        t.parse::<BigRational>()
            .map_err(|e| parse_err(self, s, e.to_string()))
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        rational_sqrt(a)
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> BigRational {
        let n = rng.gen_range(-24i64..=24);
        let d = rng.gen_range(1i64..=12);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

// ---------------------------------------------------------------------------
// Prime fields GF(p)
// ---------------------------------------------------------------------------

/// The prime field GF(p). Elements are reduced residues in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.p)
    }

    /// Smallest s with s·s ≡ a (mod p), or `None` when a is a non-residue.
    pub fn square_root(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if p == 2 {
            return Some(a);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        let root = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            tonelli_shanks(a, p)
        };
        Some(root.min(p - root))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn int(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inverse(&self, a: &u64) -> Result<u64, FieldError> {
        if (*a).is_multiple_of(self.p) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(*a % self.p, self.p - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn descriptor(&self) -> String {
        format!("GF({})", self.p)
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let t = s.trim();
        let (value_part, modulus_part) = match t.split_once("mod") {
            Some((v, m)) => (v.trim(), Some(m.trim())),
            None => (t, None),
        };
        if let Some(m) = modulus_part {
            let stated: u64 = m
                .parse()
                .map_err(|_| parse_err(self, s, "bad modulus"))?;
            if stated != self.p {
                return Err(FieldError::MixedField {
                    expected: self.descriptor(),
                    found: format!("GF({stated})"),
                });
            }
        }
        if value_part.contains("sqrt") || value_part.contains('/') {
            return Err(parse_err(self, s, "not a residue literal"));
        }
        let v: i64 = value_part
            .parse()
            .map_err(|_| parse_err(self, s, "bad residue"))?;
        Ok(self.reduce_i64(v))
    }
    fn render(&self, a: &u64) -> String {
        format!("{} mod {}", a % self.p, self.p)
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        self.square_root(*a)
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

// ---------------------------------------------------------------------------
// Quadratic extensions Q(sqrt d)
// ---------------------------------------------------------------------------

/// Element a + b·√d of a real quadratic field; the radicand lives on the
/// field instance.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }
}

/// The field ℚ(√d) for a squarefree integer d > 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self, FieldError> {
        if d > 1 && is_squarefree(d) {
            Ok(QuadraticField { d })
        } else {
            Err(FieldError::BadRadicand(d))
        }
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    /// The element b·√d.
    pub fn sqrt_term(&self, b: BigRational) -> QuadElem {
        QuadElem::new(BigRational::zero(), b)
    }

    pub fn from_rational(&self, a: BigRational) -> QuadElem {
        QuadElem::new(a, BigRational::zero())
    }

    fn d_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.d))
    }
}

impl Field for QuadraticField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem::new(BigRational::zero(), BigRational::zero())
    }
    fn one(&self) -> QuadElem {
        QuadElem::new(BigRational::one(), BigRational::zero())
    }
    fn int(&self, n: i64) -> QuadElem {
        QuadElem::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a + &y.a, &x.b + &y.b)
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a - &y.a, &x.b - &y.b)
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        // (a1 + b1 r)(a2 + b2 r) = a1 a2 + b1 b2 d + (a1 b2 + a2 b1) r
        QuadElem::new(
            &x.a * &y.a + &x.b * &y.b * self.d_rational(),
            &x.a * &y.b + &x.b * &y.a,
        )
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem::new(-&x.a, -&x.b)
    }
    fn inverse(&self, x: &QuadElem) -> Result<QuadElem, FieldError> {
        // Norm a^2 - b^2 d vanishes only at zero because d is not a square.
        let norm = &x.a * &x.a - &x.b * &x.b * self.d_rational();
        if norm.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(QuadElem::new(&x.a / &norm, -&x.b / &norm))
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn descriptor(&self) -> String {
        format!("Q(sqrt({}))", self.d)
    }
    fn parse(&self, s: &str) -> Result<QuadElem, FieldError> {
        parse_quadratic(self, s)
    }
    fn render(&self, x: &QuadElem) -> String {
        if x.b.is_zero() {
            return x.a.to_string();
        }
        let sqrt_part = format!("{}*sqrt({})", x.b.abs(), self.d);
        let sign = if x.b.is_negative() { "-" } else { "+" };
        if x.a.is_zero() {
            if x.b.is_negative() {
                format!("-{sqrt_part}")
            } else {
                sqrt_part
            }
        } else {
            format!("{}{sign}{sqrt_part}", x.a)
        }
    }
    fn sqrt(&self, x: &QuadElem) -> Option<QuadElem> {
        if !x.b.is_zero() {
            return None;
        }
        // Rational target q: either q is a rational square, or q/d is and
        // the root lives on the sqrt(d) axis.
        if let Some(r) = rational_sqrt(&x.a) {
            return Some(QuadElem::new(r, BigRational::zero()));
        }
        rational_sqrt(&(&x.a / self.d_rational())).map(|r| QuadElem::new(BigRational::zero(), r))
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> QuadElem {
        QuadElem::new(Rationals.sample(rng), Rationals.sample(rng))
    }
}

/// Accepts `a`, `b*sqrt(d)`, `a+b*sqrt(d)`, `a-b*sqrt(d)`, and bare
/// `sqrt(d)` with optional leading sign; a and b are rational literals.
fn parse_quadratic(field: &QuadraticField, input: &str) -> Result<QuadElem, FieldError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.contains("mod") {
        return Err(parse_err(field, input, "not a quadratic literal"));
    }
    let parse_rat = |t: &str| -> Result<BigRational, FieldError> {
        t.parse::<BigRational>()
            .map_err(|e| parse_err(field, input, e.to_string()))
    };
    let Some(sq) = s.find("sqrt(") else {
        return Ok(QuadElem::new(parse_rat(&s)?, BigRational::zero()));
    };
    let Some(close) = s[sq..].find(')') else {
        return Err(parse_err(field, input, "unterminated sqrt("));
    };
    let radicand: i64 = s[sq + 5..sq + close]
        .parse()
        .map_err(|_| parse_err(field, input, "bad radicand"))?;
    if radicand != field.d {
        return Err(FieldError::MixedField {
            expected: field.descriptor(),
            found: format!("Q(sqrt({radicand}))"),
        });
    }
    if sq + close + 1 != s.len() {
        return Err(parse_err(field, input, "trailing characters after sqrt"));
    }
    // Everything before "sqrt(" is either "", "coef*", or "a±coef*".
    let head = &s[..sq];
    let head = head.strip_suffix('*').unwrap_or(head);
    // Split the rational part from the sqrt coefficient at the sign that
    // starts the sqrt term; signs inside a rational only occur at its front.
    let mut split_at = None;
    for (i, c) in head.char_indices().skip(1) {
        if (c == '+' || c == '-') && !matches!(&head[i - 1..i], "/" | "*" | "+" | "-") {
            split_at = Some(i);
        }
    }
    let (a_str, b_str) = match split_at {
        Some(i) => (&head[..i], &head[i..]),
        None => ("", head),
    };
    let a = if a_str.is_empty() {
        BigRational::zero()
    } else {
        parse_rat(a_str)?
    };
    let b = match b_str {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        t => {
            let t = t.strip_prefix('+').unwrap_or(t);
            parse_rat(t)?
        }
    };
    Ok(QuadElem::new(a, b))
}

// ---------------------------------------------------------------------------
// Field selection for the CLI and file formats
// ---------------------------------------------------------------------------

/// Dynamic field choice: `Q`, `GFp:<p>`, or `Qsqrt:<d>`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Quadratic(i64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec, FieldError> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = t.strip_prefix("GFp:") {
            let p: u64 = p.parse().map_err(|_| FieldError::Parse {
                input: s.to_string(),
                field: "field spec".to_string(),
                reason: "bad modulus".to_string(),
            })?;
            PrimeField::new(p)?;
            return Ok(FieldSpec::Prime(p));
        }
        if let Some(d) = t.strip_prefix("Qsqrt:") {
            let d: i64 = d.parse().map_err(|_| FieldError::Parse {
                input: s.to_string(),
                field: "field spec".to_string(),
                reason: "bad radicand".to_string(),
            })?;
            QuadraticField::new(d)?;
            return Ok(FieldSpec::Quadratic(d));
        }
        Err(FieldError::Parse {
            input: s.to_string(),
            field: "field spec".to_string(),
            reason: "expected Q, GFp:<p>, or Qsqrt:<d>".to_string(),
        })
    }

    pub fn descriptor(&self) -> String {
        match self {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime(p) => format!("GF({p})"),
            FieldSpec::Quadratic(d) => format!("Q(sqrt({d}))"),
        }
    }
}

// ---------------------------------------------------------------------------
// Modular helpers
// ---------------------------------------------------------------------------

pub fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut base = (base % p) as u128;
    let m = p as u128;
    let mut acc: u128 = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_negative() {
        return None;
    }
    let num_root = a.numer().sqrt();
    let den_root = a.denom().sqrt();
    if &(&num_root * &num_root) == a.numer() && &(&den_root * &den_root) == a.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut d = d;
    let mut f = 2i64;
    while f * f <= d {
        if d % f == 0 {
            d /= f;
            if d % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    // p odd prime, a a known quadratic residue, a != 0.
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = (t2 as u128 * t2 as u128 % p as u128) as u64;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    r
}

/// An element of multiplicative order exactly n in GF(p).
///
/// Requires p ≡ 1 (mod n). Candidates are random residues raised to
/// (p−1)/n, drawn from a fixed-seed stream so the result is reproducible.
pub fn element_of_order(n: u64, p: u64) -> Result<u64, FieldError> {
    PrimeField::new(p)?;
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return Err(FieldError::NoSuchOrder { n, p });
    }
    if n == 1 {
        return Ok(1);
    }
    let exponent = (p - 1) / n;
    let n_primes = distinct_prime_factors(n);
    let mut rng = ChaCha8Rng::seed_from_u64(ORDER_SEARCH_SEED);
    loop {
        let x = rng.gen_range(2..p);
        let w = pow_mod(x, exponent, p);
        if w == 1 {
            continue;
        }
        if n_primes.iter().all(|q| pow_mod(w, n / q, p) != 1) {
            return Ok(w);
        }
    }
}
