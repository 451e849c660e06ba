use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{lcm_u32, CycloField};
use super::numeric::{self, ComplexBall};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer coefficient arithmetic shared by the machine-word fast path (`i128`,
/// checked, `None` on overflow) and the arbitrary precision path (`BigInt`).
trait Coef: Clone + fmt::Debug {
    fn czero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn nil(&self) -> bool;
}

impl Coef for i128 {
    fn czero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn nil(&self) -> bool {
        *self == 0
    }
}

impl Coef for BigInt {
    fn czero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// `(a * b) mod Phi_N` on integer numerators.
fn mul_reduce<T: Coef>(a: &[T], b: &[T], field: &CycloField) -> Option<Vec<T>> {
    let d = field.degree();
    let mut prod = vec![T::czero(); 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if x.nil() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.nil() {
                continue;
            }
            prod[i + j] = prod[i + j].add(&x.mul(y)?)?;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k].clone();
        if c.nil() {
            continue;
        }
        for &(i, phi) in field.tail() {
            let t = c.mul(&T::from_i64(phi))?;
            prod[k - d + i] = prod[k - d + i].sub(&t)?;
        }
    }
    prod.truncate(d);
    Some(prod)
}

/// `sum_k c_k * zeta^{map(k)}` on integer numerators.
fn substitute<T: Coef>(c: &[T], field: &CycloField, map: impl Fn(usize) -> i64) -> Option<Vec<T>> {
    let mut out = vec![T::czero(); field.degree()];
    for (k, x) in c.iter().enumerate() {
        if x.nil() {
            continue;
        }
        for (i, p) in field.power(map(k)).iter().enumerate() {
            if *p != 0 {
                out[i] = out[i].add(&x.mul(&T::from_i64(*p))?)?;
            }
        }
    }
    Some(out)
}

/// Canonical storage: numerators over a common positive denominator with
/// `gcd(num..., den) = 1`. Values that fit machine words are always `Small`,
/// so derived equality and hashing agree with value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

impl Repr {
    fn zero(d: usize) -> Repr {
        Repr::Small {
            num: vec![0; d],
            den: 1,
        }
    }

    fn wide(&self) -> (Vec<i128>, i128) {
        match self {
            Repr::Small { num, den } => (num.iter().map(|x| *x as i128).collect(), *den as i128),
            Repr::Big { .. } => unreachable!("wide() on big representation"),
        }
    }

    fn big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Repr::Small { num, den } => (num.iter().map(|x| BigInt::from(*x)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    fn is_small(&self) -> bool {
        matches!(self, Repr::Small { .. })
    }

    fn from_wide(mut num: Vec<i128>, mut den: i128) -> Option<Repr> {
        debug_assert!(den != 0);
        if den < 0 {
            for x in num.iter_mut() {
                *x = x.checked_neg()?;
            }
            den = den.checked_neg()?;
        }
        let mut g = den;
        for x in &num {
            if g == 1 {
                break;
            }
            g = g.gcd(x);
        }
        if num.iter().all(|x| *x == 0) {
            g = den;
        }
        if g > 1 {
            for x in num.iter_mut() {
                *x /= g;
            }
            den /= g;
        }
        let fits = |x: i128| x > i64::MIN as i128 && x <= i64::MAX as i128;
        if fits(den) && num.iter().all(|x| fits(*x)) {
            Some(Repr::Small {
                num: num.into_iter().map(|x| x as i64).collect(),
                den: den as i64,
            })
        } else {
            None
        }
    }

    fn from_big(mut num: Vec<BigInt>, mut den: BigInt) -> Repr {
        debug_assert!(!Zero::is_zero(&den));
        if den.is_negative() {
            for x in num.iter_mut() {
                *x = -&*x;
            }
            den = -den;
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if num.iter().all(Zero::is_zero) {
            g = den.clone();
        }
        if !g.is_one() {
            for x in num.iter_mut() {
                *x = &*x / &g;
            }
            den = &den / &g;
        }
        let small = |x: &BigInt| x.to_i64().filter(|v| *v != i64::MIN);
        if let (Some(d), true) = (small(&den), num.iter().all(|x| small(x).is_some())) {
            return Repr::Small {
                num: num.iter().map(|x| small(x).unwrap()).collect(),
                den: d,
            };
        }
        Repr::Big { num, den }
    }
}

/// An exact element of the cyclotomic field `Q(zeta_N)`, stored in the power
/// basis `1, zeta, ..., zeta^(deg - 1)` reduced modulo `Phi_N`.
///
/// The representation is unique, so `==` and `Hash` are value equality.
#[derive(Clone)]
pub struct CycloNumber {
    field: Arc<CycloField>,
    repr: Repr,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.repr == other.repr
    }
}

impl Eq for CycloNumber {}

impl Hash for CycloNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.repr.hash(state);
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            match (*k, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (_, true) => write!(f, "z{}^{}", self.field.order(), k)?,
                (_, false) => write!(f, "{}*z{}^{}", a, self.field.order(), k)?,
            }
        }
        Ok(())
    }
}

impl CycloNumber {
    fn with_repr(field: &Arc<CycloField>, repr: Repr) -> CycloNumber {
        CycloNumber {
            field: field.clone(),
            repr,
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> CycloNumber {
        Self::with_repr(field, Repr::zero(field.degree()))
    }

    pub fn one(field: &Arc<CycloField>) -> CycloNumber {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CycloField>, v: i64) -> CycloNumber {
        let mut num = vec![0i128; field.degree()];
        num[0] = v as i128;
        let repr = Repr::from_wide(num, 1).unwrap_or_else(|| {
            let mut num = vec![BigInt::zero(); field.degree()];
            num[0] = BigInt::from(v);
            Repr::from_big(num, BigInt::one())
        });
        Self::with_repr(field, repr)
    }

    pub fn from_rational(field: &Arc<CycloField>, q: &Rational) -> CycloNumber {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::with_repr(field, Repr::from_big(num, q.denom().clone()))
    }

    /// Builds a number from power-basis coefficients (`coeffs.len() == deg`).
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: &[Rational]) -> Result<CycloNumber> {
        if coeffs.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::with_repr(field, Repr::from_big(num, den)))
    }

    /// Sum of `c * zeta^k` over unreduced monomials; `k` may be any integer.
    pub fn from_terms(field: &Arc<CycloField>, terms: &[(i64, Rational)]) -> CycloNumber {
        terms.iter().fold(Self::zero(field), |acc, (k, c)| {
            acc + Self::root_in(field, *k).scale(c)
        })
    }

    /// `zeta_N^k` in the given field.
    pub fn root_in(field: &Arc<CycloField>, k: i64) -> CycloNumber {
        let num = field.power(k).to_vec();
        Self::with_repr(field, Repr::Small { num, den: 1 })
    }

    /// `zeta_N^k`; errors when `N` is not a positive multiple of 4.
    pub fn root_power(order: u32, k: i64) -> Result<CycloNumber> {
        let field = CycloField::get(order)?;
        Ok(Self::root_in(&field, k))
    }

    /// The imaginary unit `zeta_N^(N/4)`.
    pub fn imaginary_unit(field: &Arc<CycloField>) -> CycloNumber {
        Self::root_in(field, (field.order() / 4) as i64)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Power-basis coefficients as rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        let (num, den) = self.repr.big();
        num.into_iter().map(|n| Rational::new(n, den.clone())).collect()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        match &self.repr {
            Repr::Small { num, den } => Rational::new(BigInt::from(num[k]), BigInt::from(*den)),
            Repr::Big { num, den } => Rational::new(num[k].clone(), den.clone()),
        }
    }

    /// Nonzero `(power, coefficient)` pairs of the reduced representation.
    pub fn terms(&self) -> Vec<(usize, Rational)> {
        self.coeffs()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|x| *x == 0),
            Repr::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.field)
    }

    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|x| *x == 0),
            Repr::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Sign of the first nonzero coefficient; `Equal` for zero.
    pub fn leading_sign(&self) -> Ordering {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().find(|x| **x != 0).map_or(Ordering::Equal, |x| x.cmp(&0)),
            Repr::Big { num, .. } => num
                .iter()
                .find(|x| !Zero::is_zero(*x))
                .map_or(Ordering::Equal, |x| x.cmp(&BigInt::zero())),
        }
    }

    fn check_same(&self, other: &CycloNumber) -> Result<()> {
        if self.field.order() != other.field.order() {
            Err(Error::OrderMismatch(self.field.order(), other.field.order()))
        } else {
            Ok(())
        }
    }

    fn add_sub(&self, other: &CycloNumber, negate: bool) -> CycloNumber {
        let small = || -> Option<Repr> {
            let (a, da) = self.repr.wide();
            let (b, db) = other.repr.wide();
            let l = da.lcm(&db);
            let (fa, fb) = (l / da, l / db);
            let num = a
                .iter()
                .zip(&b)
                .map(|(x, y)| {
                    let x = x.checked_mul(fa)?;
                    let y = y.checked_mul(fb)?;
                    if negate {
                        x.checked_sub(y)
                    } else {
                        x.checked_add(y)
                    }
                })
                .collect::<Option<Vec<_>>>()?;
            Repr::from_wide(num, l)
        };
        if self.repr.is_small() && other.repr.is_small() {
            if let Some(r) = small() {
                return Self::with_repr(&self.field, r);
            }
        }
        let (a, da) = self.repr.big();
        let (b, db) = other.repr.big();
        let l = da.lcm(&db);
        let (fa, fb) = (&l / &da, &l / &db);
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| if negate { x * &fa - y * &fb } else { x * &fa + y * &fb })
            .collect();
        Self::with_repr(&self.field, Repr::from_big(num, l))
    }

    fn mul_impl(&self, other: &CycloNumber) -> CycloNumber {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        if self.is_rational() {
            return other.scale(&self.coeff(0));
        }
        if other.is_rational() {
            return self.scale(&other.coeff(0));
        }
        if self.repr.is_small() && other.repr.is_small() {
            let (a, da) = self.repr.wide();
            let (b, db) = other.repr.wide();
            let r = da
                .checked_mul(db)
                .and_then(|den| Some((mul_reduce(&a, &b, &self.field)?, den)))
                .and_then(|(num, den)| Repr::from_wide(num, den));
            if let Some(r) = r {
                return Self::with_repr(&self.field, r);
            }
        }
        let (a, da) = self.repr.big();
        let (b, db) = other.repr.big();
        let num = mul_reduce(&a, &b, &self.field).expect("big arithmetic cannot overflow");
        Self::with_repr(&self.field, Repr::from_big(num, da * db))
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &Rational) -> CycloNumber {
        if q.is_zero() {
            return Self::zero(&self.field);
        }
        if let (Repr::Small { num, den }, Some(qn), Some(qd)) = (&self.repr, q.numer().to_i64(), q.denom().to_i64()) {
            let r = num
                .iter()
                .map(|x| (*x as i128).checked_mul(qn as i128))
                .collect::<Option<Vec<_>>>()
                .and_then(|n| Repr::from_wide(n, (*den as i128).checked_mul(qd as i128)?));
            if let Some(r) = r {
                return Self::with_repr(&self.field, r);
            }
        }
        let (num, den) = self.repr.big();
        let num = num.into_iter().map(|x| x * q.numer()).collect();
        Self::with_repr(&self.field, Repr::from_big(num, den * q.denom()))
    }

    /// Image under the Galois automorphism `zeta -> zeta^k` (`gcd(k, N) = 1`).
    pub fn galois(&self, k: i64) -> CycloNumber {
        self.substitute_powers(&self.field, |i| i as i64 * k)
    }

    fn substitute_powers(&self, target: &Arc<CycloField>, map: impl Fn(usize) -> i64 + Copy) -> CycloNumber {
        if let Repr::Small { num, den } = &self.repr {
            let wide: Vec<i128> = num.iter().map(|x| *x as i128).collect();
            if let Some(r) = substitute(&wide, target, map).and_then(|n| Repr::from_wide(n, *den as i128)) {
                return Self::with_repr(target, r);
            }
        }
        let (num, den) = self.repr.big();
        let out = substitute(&num, target, map).expect("big arithmetic cannot overflow");
        Self::with_repr(target, Repr::from_big(out, den))
    }

    /// Complex conjugate: `zeta -> zeta^(N-1)`.
    pub fn conjugate(&self) -> CycloNumber {
        self.galois(-1)
    }

    /// Real part `(a + conj a) / 2`.
    pub fn real_part(&self) -> CycloNumber {
        (self + &self.conjugate()).scale(&Rational::new(1.into(), 2.into()))
    }

    /// Imaginary part `(a - conj a) / (2i)`, a real number.
    pub fn imag_part(&self) -> CycloNumber {
        let i = Self::imaginary_unit(&self.field);
        // 1/(2i) = -i/2
        (&(self - &self.conjugate()) * &i).scale(&Rational::new((-1).into(), 2.into()))
    }

    /// Embed into `Q(zeta_M)` for `N | M` via `zeta_N = zeta_M^(M/N)`.
    pub fn embed(&self, order: u32) -> Result<CycloNumber> {
        let from = self.field.order();
        if order == from {
            return Ok(self.clone());
        }
        if order % from != 0 {
            return Err(Error::NotEmbeddable { from, to: order });
        }
        let target = CycloField::get(order)?;
        let step = (order / from) as i64;
        Ok(self.substitute_powers(&target, |i| i as i64 * step))
    }

    /// Embed two numbers into the field of order `lcm(N1, N2)`.
    pub fn common_field(a: &CycloNumber, b: &CycloNumber) -> Result<(CycloNumber, CycloNumber)> {
        let l = lcm_u32(a.order(), b.order());
        Ok((a.embed(l)?, b.embed(l)?))
    }

    /// Multiplicative inverse: `a^-1 = prod_{s != 1} s(a) / Norm(a)` over the Galois group.
    pub fn inverse(&self) -> Result<CycloNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &q.recip()));
        }
        let mut cofactor = Self::one(&self.field);
        for &k in self.field.units() {
            if k != 1 {
                cofactor = &cofactor * &self.galois(k as i64);
            }
        }
        let norm = (&cofactor * self)
            .as_rational()
            .expect("field norm must be rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn checked_add(&self, other: &CycloNumber) -> Result<CycloNumber> {
        self.check_same(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn checked_sub(&self, other: &CycloNumber) -> Result<CycloNumber> {
        self.check_same(other)?;
        Ok(self.add_sub(other, true))
    }

    pub fn checked_mul(&self, other: &CycloNumber) -> Result<CycloNumber> {
        self.check_same(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn checked_div(&self, other: &CycloNumber) -> Result<CycloNumber> {
        self.check_same(other)?;
        Ok(self.mul_impl(&other.inverse()?))
    }

    pub fn pow(&self, mut e: u32) -> CycloNumber {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Certified enclosure of the complex embedding `zeta_N -> exp(2 pi i / N)`.
    pub fn numeric_eval(&self, precision_bits: u32) -> ComplexBall {
        let prec = precision_bits.max(53);
        if self.is_zero() {
            return ComplexBall::exact_zero(prec);
        }
        let balls = self.field.power_balls(prec);
        let (num, den) = self.repr.big();
        numeric::combine(num.into_iter().zip(balls.iter()), &den, prec)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        self.numeric_eval(64).mid()
    }

    /// Real part of the complex embedding as a float.
    pub fn to_f64(&self) -> f64 {
        self.numeric_eval(64).re.mid()
    }

    /// Exact sign of a real number, decided by refining enclosures until they
    /// exclude zero. Returns `None` for numbers that are not real.
    pub fn sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        let mut prec = 64;
        loop {
            match self.numeric_eval(prec).re.sign() {
                Some(1) => return Some(Ordering::Greater),
                Some(-1) => return Some(Ordering::Less),
                _ => prec *= 2,
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a CycloNumber> for &'a CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &'a CycloNumber) -> CycloNumber {
                assert_eq!(self.order(), rhs.order(), "cyclotomic order mismatch");
                $body(self, rhs)
            }
        }
        impl $trait<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &'a CycloNumber) -> CycloNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycloNumber, b: &CycloNumber| a.add_sub(b, false));
forward_binop!(Sub, sub, |a: &CycloNumber, b: &CycloNumber| a.add_sub(b, true));
forward_binop!(Mul, mul, |a: &CycloNumber, b: &CycloNumber| a.mul_impl(b));

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        let repr = match &self.repr {
            Repr::Small { num, den } => Repr::Small {
                num: num.iter().map(|x| -x).collect(),
                den: *den,
            },
            Repr::Big { num, den } => Repr::Big {
                num: num.iter().map(|x| -x).collect(),
                den: den.clone(),
            },
        };
        CycloNumber::with_repr(&self.field, repr)
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}
