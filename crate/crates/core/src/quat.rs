//! Quaternions over the real cyclotomic subfield and SO(4) elements `[l, r]`
//! acting by `x -> conj(l) x r`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloField, CycloNumber, Rational};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, Mat4, Subspace, Vec4};

/// `x1 + i x2 + j x3 + k x4` with real cyclotomic components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quaternion(pub(crate) Vec4);

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl Quaternion {
    /// Checks that every component is real.
    pub fn new(c: Vec4) -> Result<Quaternion> {
        let n = c[0].order();
        if let Some(x) = c.iter().find(|x| x.order() != n) {
            return Err(Error::OrderMismatch(n, x.order()));
        }
        if !c.iter().all(CycloNumber::is_real) {
            return Err(Error::NotReal);
        }
        Ok(Quaternion(c))
    }

    pub fn from_integers(field: &Arc<CycloField>, x: [i64; 4]) -> Quaternion {
        Quaternion(std::array::from_fn(|i| CycloNumber::from_integer(field, x[i])))
    }

    pub fn scalar(a: CycloNumber) -> Quaternion {
        let z = CycloNumber::zero(a.field());
        Quaternion([a, z.clone(), z.clone(), z])
    }

    pub fn one(field: &Arc<CycloField>) -> Quaternion {
        Quaternion(unit_vec(field, 0))
    }

    pub fn i(field: &Arc<CycloField>) -> Quaternion {
        Quaternion(unit_vec(field, 1))
    }

    pub fn j(field: &Arc<CycloField>) -> Quaternion {
        Quaternion(unit_vec(field, 2))
    }

    pub fn k(field: &Arc<CycloField>) -> Quaternion {
        Quaternion(unit_vec(field, 3))
    }

    /// The quaternion `Re z + i Im z` of a field element `z`.
    pub fn from_complex(z: &CycloNumber) -> Quaternion {
        let zero = CycloNumber::zero(z.field());
        Quaternion([z.real_part(), z.imag_part(), zero.clone(), zero])
    }

    /// `e_s = exp(i pi / s) = cos(pi/s) + i sin(pi/s)`; needs `2s | N`.
    pub fn e(field: &Arc<CycloField>, s: u32) -> Result<Quaternion> {
        let n = field.order();
        if n % (2 * s) != 0 {
            return Err(Error::NotEmbeddable { from: 2 * s, to: n });
        }
        Ok(Quaternion::from_complex(&CycloNumber::root_in(field, (n / (2 * s)) as i64)))
    }

    pub fn components(&self) -> &Vec4 {
        &self.0
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.0[0].field()
    }

    pub fn re(&self) -> &CycloNumber {
        &self.0[0]
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion([self.0[0].clone(), -&self.0[1], -&self.0[2], -&self.0[3]])
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion(std::array::from_fn(|i| -&self.0[i]))
    }

    pub fn add(&self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Quaternion) -> Quaternion {
        Quaternion(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn scale(&self, q: &Rational) -> Quaternion {
        Quaternion(std::array::from_fn(|i| self.0[i].scale(q)))
    }

    /// Hamilton product.
    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        let [a1, a2, a3, a4] = &self.0;
        let [b1, b2, b3, b4] = &o.0;
        Quaternion([
            a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
            a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
            a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
            a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
        ])
    }

    pub fn norm_sq(&self) -> CycloNumber {
        crate::linalg::dot(&self.0, &self.0)
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sq().is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(CycloNumber::is_zero)
    }

    pub fn embed(&self, order: u32) -> Result<Quaternion> {
        Ok(Quaternion([
            self.0[0].embed(order)?,
            self.0[1].embed(order)?,
            self.0[2].embed(order)?,
            self.0[3].embed(order)?,
        ]))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        crate::linalg::vec_to_f64(&self.0)
    }
}

/// The SO(4) element `[l, r]: x -> conj(l) x r`, with `[-l, -r] = [l, r]`.
///
/// Stored with the first nonzero coefficient of the concatenated components of
/// `(l, r)` positive, so equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RotationElement {
    l: Quaternion,
    r: Quaternion,
}

impl fmt::Debug for RotationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.l, self.r)
    }
}

fn leading_sign(l: &Quaternion, r: &Quaternion) -> Ordering {
    l.0.iter()
        .chain(r.0.iter())
        .map(CycloNumber::leading_sign)
        .find(|s| *s != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

impl RotationElement {
    pub fn make_element(l: Quaternion, r: Quaternion) -> Result<RotationElement> {
        if l.field().order() != r.field().order() {
            return Err(Error::OrderMismatch(l.field().order(), r.field().order()));
        }
        if !l.is_unit() || !r.is_unit() {
            return Err(Error::NotUnit);
        }
        Ok(Self::canonical(l, r))
    }

    fn canonical(l: Quaternion, r: Quaternion) -> RotationElement {
        if leading_sign(&l, &r) == Ordering::Less {
            RotationElement { l: l.neg(), r: r.neg() }
        } else {
            RotationElement { l, r }
        }
    }

    pub fn identity(field: &Arc<CycloField>) -> RotationElement {
        RotationElement {
            l: Quaternion::one(field),
            r: Quaternion::one(field),
        }
    }

    /// `x -> -x`, i.e. `[1, -1]`.
    pub fn minus_identity(field: &Arc<CycloField>) -> RotationElement {
        RotationElement {
            l: Quaternion::one(field),
            r: Quaternion::one(field).neg(),
        }
    }

    pub fn l(&self) -> &Quaternion {
        &self.l
    }

    pub fn r(&self) -> &Quaternion {
        &self.r
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.l.field()
    }

    pub fn order_n(&self) -> u32 {
        self.field().order()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    /// `[l1 l2, r1 r2]`; as maps, `g1` is applied first.
    pub fn compose(&self, o: &RotationElement) -> RotationElement {
        Self::canonical(self.l.mul(&o.l), self.r.mul(&o.r))
    }

    pub fn inverse(&self) -> RotationElement {
        Self::canonical(self.l.conj(), self.r.conj())
    }

    pub fn pow(&self, n: u32) -> RotationElement {
        (0..n).fold(Self::identity(self.field()), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, x: &Quaternion) -> Quaternion {
        self.l.conj().mul(x).mul(&self.r)
    }

    /// Columns are the images of `1, i, j, k`. Since `compose` applies the left
    /// factor first, `to_matrix(g1 g2) = to_matrix(g2) to_matrix(g1)`.
    pub fn to_matrix(&self) -> Mat4 {
        let f = self.field();
        Mat4::from_columns(std::array::from_fn(|b| self.apply(&Quaternion(unit_vec(f, b))).0))
    }

    /// Character of the natural representation, `4 Re(l) Re(r)`.
    pub fn trace_char(&self) -> CycloNumber {
        (self.l.re() * self.r.re()).scale(&Rational::from_integer(4.into()))
    }

    /// Least `n >= 1` with `g^n = 1`.
    pub fn element_order(&self, cap: usize) -> Result<usize> {
        let id = Self::identity(self.field());
        let mut x = self.clone();
        for n in 1..=cap {
            if x == id {
                return Ok(n);
            }
            x = x.compose(self);
        }
        Err(Error::OrderCap(cap))
    }

    /// Exact fixed subspace. `0` when the real parts differ, otherwise the span of
    /// `l - conj(r)` and `1 - conj(l) conj(r)`, falling back to `ker(M - 1)`.
    pub fn fixed_space(&self) -> Subspace {
        let f = self.field();
        if self.is_identity() {
            return Subspace::full(f);
        }
        if self.l.re() != self.r.re() {
            return Subspace::zero(f);
        }
        let a = self.l.sub(&self.r.conj());
        let b = Quaternion::one(f).sub(&self.l.conj().mul(&self.r.conj()));
        let s = Subspace::rref(f, &[a.0, b.0]);
        if s.dim() == 2 {
            s
        } else {
            self.fixed_space_by_kernel()
        }
    }

    /// `ker(to_matrix(g) - 1)`.
    pub fn fixed_space_by_kernel(&self) -> Subspace {
        let f = self.field();
        let m = self.to_matrix().sub(&Mat4::identity(f));
        Subspace::kernel(f, m.rows())
    }

    pub fn embed(&self, order: u32) -> Result<RotationElement> {
        Ok(Self::canonical(self.l.embed(order)?, self.r.embed(order)?))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationJson {
    l: [CycloNumber; 4],
    r: [CycloNumber; 4],
}

impl Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Components may come from different fields; they are embedded into the
/// smallest common one.
fn lift(parts: Vec<CycloNumber>) -> Result<Vec<CycloNumber>> {
    let n = parts.iter().fold(4u32, |acc, x| crate::cyclo::lcm(acc, x.order()));
    parts.iter().map(|x| x.embed(n)).collect()
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = <[CycloNumber; 4]>::deserialize(d)?;
        let v = lift(c.to_vec()).map_err(serde::de::Error::custom)?;
        Quaternion::new(v.try_into().unwrap()).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RotationElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RotationJson {
            l: self.l.0.clone(),
            r: self.r.0.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RotationElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RotationJson::deserialize(d)?;
        let build = || -> Result<RotationElement> {
            let all = lift(j.l.iter().chain(j.r.iter()).cloned().collect())?;
            let l = Quaternion::new(std::array::from_fn(|i| all[i].clone()))?;
            let r = Quaternion::new(std::array::from_fn(|i| all[i + 4].clone()))?;
            RotationElement::make_element(l, r)
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Arc<CycloField> {
        CycloField::get(n).unwrap()
    }

    fn el(l: Quaternion, r: Quaternion) -> RotationElement {
        RotationElement::make_element(l, r).unwrap()
    }

    #[test]
    fn hamilton_product() {
        let f = field(8);
        let (one, i, j, k) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f), Quaternion::k(&f));
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&one), j);
        assert_eq!(i.mul(&j).mul(&k), one.neg());
        assert_eq!(i.mul(&i), one.neg());
    }

    #[test]
    fn e_squared_doubles_the_angle() {
        let f = field(24);
        let e3 = Quaternion::e(&f, 3).unwrap();
        let sq = e3.mul(&e3).to_f64();
        let t = 2.0 * std::f64::consts::PI / 3.0;
        assert!((sq[0] - t.cos()).abs() < 1e-15 && (sq[1] - t.sin()).abs() < 1e-15);
        assert_eq!(e3.mul(&e3).mul(&e3), Quaternion::one(&f).neg());
        assert!(e3.is_unit());
    }

    #[test]
    fn make_element_examples() {
        let f = field(8);
        let one = Quaternion::one(&f);
        assert_eq!(el(one.neg(), one.neg()), RotationElement::identity(&f));
        assert_eq!(el(one.neg(), one.neg()).l(), &one);
        let jg = el(Quaternion::i(&f), one.clone());
        assert_eq!(jg.l(), &Quaternion::i(&f));
        let two = Quaternion::from_integers(&f, [2, 0, 0, 0]);
        assert_eq!(RotationElement::make_element(two, one).unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn composition_examples() {
        let f = field(24);
        let (one, i) = (Quaternion::one(&f), Quaternion::i(&f));
        let e3 = Quaternion::e(&f, 3).unwrap();
        let g = el(e3.clone(), i.clone());
        // [e_m, i]^m = [-1, +-i]
        let p = g.pow(3);
        assert!(p == el(one.neg(), i.clone()) || p == el(one.neg(), i.neg()));
        assert_eq!(el(e3.clone(), one.clone()).compose(&el(e3.clone(), one.clone())), el(e3.mul(&e3), one));
        assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    fn apply_examples() {
        let f = field(8);
        let (one, i, j, k) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f), Quaternion::k(&f));
        assert_eq!(el(one.clone(), j.clone()).apply(&one), j);
        let x = i.add(&j);
        assert_eq!(el(i.clone(), j.clone()).apply(&x), x);
        let y = one.sub(&k);
        assert_eq!(el(i, j).apply(&y), y);
        assert_eq!(RotationElement::identity(&f).apply(&x), x);
    }

    #[test]
    fn matrix_of_j() {
        let f = field(8);
        let m = el(Quaternion::i(&f), Quaternion::one(&f)).to_matrix();
        let expect = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(m.0[r][c], CycloNumber::from_integer(&f, expect[r][c]));
            }
        }
        assert!(RotationElement::identity(&f).to_matrix() == Mat4::identity(&f));
    }

    #[test]
    fn trace_examples() {
        let f = field(24);
        let (one, i, j) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f));
        assert_eq!(RotationElement::identity(&f).trace_char(), CycloNumber::from_integer(&f, 4));
        let g = el(i, j);
        assert!(g.trace_char().is_zero());
        assert_eq!(g.trace_char(), g.to_matrix().trace());
        let h = el(Quaternion::e(&f, 3).unwrap(), one);
        assert_eq!(h.trace_char(), CycloNumber::from_integer(&f, 2));
        assert_eq!(h.trace_char(), h.to_matrix().trace());
    }

    #[test]
    fn element_orders() {
        let f = field(24);
        let (one, i, j) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f));
        let e3 = Quaternion::e(&f, 3).unwrap();
        let e4 = Quaternion::e(&f, 4).unwrap();
        assert_eq!(el(e3.clone(), i).element_order(100).unwrap(), 12);
        assert_eq!(RotationElement::identity(&f).element_order(100).unwrap(), 1);
        assert_eq!(el(j.clone(), j.mul(&e4)).element_order(100).unwrap(), 2);
        assert_eq!(el(e3, one).element_order(2).unwrap_err(), Error::OrderCap(2));
    }

    #[test]
    fn fixed_space_examples() {
        let f = field(24);
        let (one, i, j, k) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f), Quaternion::k(&f));
        let g = el(i.clone(), j.clone());
        let expect = Subspace::rref(&f, &[i.add(&j).0, one.sub(&k).0]);
        assert_eq!(g.fixed_space(), expect);
        assert_eq!(g.fixed_space_by_kernel(), expect);
        let h = el(Quaternion::e(&f, 3).unwrap(), i.clone());
        for r in 1..12 {
            assert!(h.pow(r).fixed_space().is_zero(), "r = {r}");
        }
        assert!(RotationElement::identity(&f).fixed_space().is_full());
        // both closed-form vectors vanish here; the kernel fallback takes over
        let t = el(i.clone(), i.neg());
        assert_eq!(t.fixed_space(), Subspace::rref(&f, &[j.0.clone(), k.0.clone()]));
        assert!(RotationElement::minus_identity(&f).fixed_space().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = field(24);
        let g = el(Quaternion::e(&f, 3).unwrap(), Quaternion::i(&f));
        let s = serde_json::to_string(&g).unwrap();
        let h: RotationElement = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        let bad = r#"{"l": [{"N":8,"terms":[[0,"2","1"]]},{"N":8,"terms":[]},{"N":8,"terms":[]},{"N":8,"terms":[]}],
                      "r": [{"N":8,"terms":[[0,"1","1"]]},{"N":8,"terms":[]},{"N":8,"terms":[]},{"N":8,"terms":[]}]}"#;
        assert!(serde_json::from_str::<RotationElement>(bad).is_err());
    }

    #[test]
    fn mixed_field_input_is_lifted() {
        let s = r#"{"l": [{"N":4,"terms":[[0,"1","1"]]},{"N":4,"terms":[]},{"N":4,"terms":[]},{"N":4,"terms":[]}],
                    "r": [{"N":8,"terms":[[1,"1","2"],[7,"1","2"]]},{"N":8,"terms":[[1,"1","2"],[7,"1","2"]]},{"N":4,"terms":[]},{"N":4,"terms":[]}]}"#;
        let g: RotationElement = serde_json::from_str(s).unwrap();
        assert_eq!(g.order_n(), 8);
        assert_eq!(g.element_order(100).unwrap(), 8);
    }
}
