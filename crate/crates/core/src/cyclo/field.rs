use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::numeric::{self, ComplexBall};
use crate::error::{Error, Result};

/// Largest supported field order. The reduced power table is `N x deg(Phi_N)`.
pub const MAX_ORDER: u32 = 2048;

/// The cyclotomic field `Q(zeta_N)` with `zeta_N = exp(2 pi i / N)`.
///
/// Holds the cyclotomic polynomial and the reduced power basis images of every
/// `zeta^k`, `0 <= k < N`. Instances are interned: [`CycloField::get`] returns the
/// same `Arc` for the same order.
pub struct CycloField {
    order: u32,
    degree: usize,
    modulus: Vec<i64>,
    /// Nonzero `(index, coefficient)` pairs of the modulus below its leading term.
    tail: Vec<(usize, i64)>,
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
    balls: Mutex<HashMap<u32, Arc<Vec<ComplexBall>>>>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

impl std::hash::Hash for CycloField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

impl CycloField {
    pub fn get(order: u32) -> Result<Arc<CycloField>> {
        if order == 0 || order % 4 != 0 || order > MAX_ORDER {
            return Err(Error::FieldOrder(order));
        }
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&order) {
            return Ok(f.clone());
        }
        // Built outside the lock; a racing thread may build the same field, the
        // first insertion wins.
        let field = Arc::new(CycloField::build(order));
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry(order).or_insert(field).clone())
    }

    fn build(order: u32) -> CycloField {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let tail = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect::<Vec<_>>();

        let mut powers = Vec::with_capacity(order as usize);
        let mut current = vec![0i64; degree];
        current[0] = 1;
        for _ in 0..order {
            powers.push(current.clone());
            let carry = current[degree - 1];
            for i in (1..degree).rev() {
                current[i] = current[i - 1];
            }
            current[0] = 0;
            if carry != 0 {
                for &(i, c) in &tail {
                    current[i] = current[i]
                        .checked_sub(carry.checked_mul(c).expect("power table overflow"))
                        .expect("power table overflow");
                }
            }
        }
        debug_assert!(current[0] == 1 && current[1..].iter().all(|c| *c == 0));

        let units = (1..order).filter(|k| gcd_u32(*k, order) == 1).collect();
        CycloField {
            order,
            degree,
            modulus,
            tail,
            powers,
            units,
            balls: Mutex::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the cyclotomic polynomial, i.e. Euler's phi of the order.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Phi_N`, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub(crate) fn tail(&self) -> &[(usize, i64)] {
        &self.tail
    }

    /// Power-basis coordinates of `zeta^k`, `k` taken mod `N`.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.order as i64) as usize]
    }

    /// Exponents `k` coprime to `N`; `zeta -> zeta^k` runs over the Galois group.
    pub(crate) fn units(&self) -> &[u32] {
        &self.units
    }

    /// Certified enclosures of `zeta^k` for `k < degree` at `prec` fractional bits.
    pub(crate) fn power_balls(&self, prec: u32) -> Arc<Vec<ComplexBall>> {
        if let Some(b) = self.balls.lock().unwrap().get(&prec) {
            return b.clone();
        }
        let balls = Arc::new(numeric::root_powers(self.order, self.degree, prec));
        self.balls.lock().unwrap().entry(prec).or_insert(balls).clone()
    }
}

pub(crate) fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `Phi_n(x) = prod_{d | n} (x^d - 1)^{mu(n/d)}`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut numerator: Vec<i128> = vec![1];
    let mut divisors = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match mobius(n / d) {
            1 => numerator = mul_binomial(&numerator, d as usize),
            -1 => divisors.push(d as usize),
            _ => {}
        }
    }
    for d in divisors {
        numerator = div_binomial(&numerator, d);
    }
    numerator
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

/// `p(x) * (x^d - 1)`.
fn mul_binomial(p: &[i128], d: usize) -> Vec<i128> {
    let mut out = vec![0i128; p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

/// Exact quotient `p(x) / (x^d - 1)`.
fn div_binomial(p: &[i128], d: usize) -> Vec<i128> {
    let mut rem = p.to_vec();
    let qlen = p.len() - d;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + d];
        q[i] = c;
        rem[i + d] = 0;
        rem[i] += c;
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "inexact binomial division");
    q
}
