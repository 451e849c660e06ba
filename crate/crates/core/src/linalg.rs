//! Exact linear algebra on 4-vectors over the real cyclotomic subfield.

use std::fmt;
use std::sync::Arc;

use crate::cyclo::{CycloField, CycloNumber};

pub type Vec4 = [CycloNumber; 4];

/// Row-major 4x4 matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat4(pub [[CycloNumber; 4]; 4]);

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub fn zero_vec(field: &Arc<CycloField>) -> Vec4 {
    std::array::from_fn(|_| CycloNumber::zero(field))
}

pub fn unit_vec(field: &Arc<CycloField>, k: usize) -> Vec4 {
    std::array::from_fn(|i| {
        if i == k {
            CycloNumber::one(field)
        } else {
            CycloNumber::zero(field)
        }
    })
}

pub fn dot(a: &Vec4, b: &Vec4) -> CycloNumber {
    let mut acc = &a[0] * &b[0];
    for i in 1..4 {
        acc = acc + &a[i] * &b[i];
    }
    acc
}

pub fn vec_to_f64(v: &Vec4) -> [f64; 4] {
    std::array::from_fn(|i| v[i].to_f64())
}

impl Mat4 {
    pub fn identity(field: &Arc<CycloField>) -> Mat4 {
        Mat4(std::array::from_fn(|i| unit_vec(field, i)))
    }

    pub fn from_columns(cols: [Vec4; 4]) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone())))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.0[0][0].field()
    }

    pub fn rows(&self) -> &[Vec4; 4] {
        &self.0
    }

    pub fn transpose(&self) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn mul(&self, o: &Mat4) -> Mat4 {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = &self.0[i][0] * &o.0[0][j];
                for k in 1..4 {
                    acc = acc + &self.0[i][k] * &o.0[k][j];
                }
                acc
            })
        }))
    }

    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        std::array::from_fn(|i| dot(&self.0[i], v))
    }

    pub fn sub(&self, o: &Mat4) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] - &o.0[i][j])))
    }

    pub fn neg(&self) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| -&self.0[i][j])))
    }

    pub fn trace(&self) -> CycloNumber {
        (1..4).fold(self.0[0][0].clone(), |acc, i| acc + &self.0[i][i])
    }

    /// Leibniz expansion over the 24 permutations.
    pub fn det(&self) -> CycloNumber {
        let mut acc = CycloNumber::zero(self.field());
        for p in permutations4() {
            let mut t = self.0[0][p[0]].clone();
            for i in 1..4 {
                t = t * &self.0[i][p[i]];
            }
            if parity(&p) {
                acc = acc - t;
            } else {
                acc = acc + t;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].to_f64()))
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// True for odd permutations.
fn parity(p: &[usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Reduced row echelon form in place; returns the pivot columns.
/// Pivots prefer rational entries so normalization avoids a full field inverse.
fn row_reduce(rows: &mut Vec<Vec4>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..4 {
        if rank == rows.len() {
            break;
        }
        let candidates = (rank..rows.len()).filter(|r| !rows[*r][col].is_zero());
        let best = candidates
            .clone()
            .find(|r| rows[*r][col].is_rational())
            .or_else(|| candidates.clone().next());
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        if !rows[rank][col].is_one() {
            let inv = rows[rank][col].inverse().expect("pivot is nonzero");
            for x in rows[rank].iter_mut() {
                *x = &*x * &inv;
            }
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in 0..4 {
                let t = &f * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// A subspace of the 4-dimensional space, held as its unique RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Arc<CycloField>,
    rows: Vec<Vec4>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {}; ", self.dim())?;
        f.debug_list().entries(self.rows.iter()).finish()?;
        write!(f, ")")
    }
}

impl Subspace {
    pub fn rref(field: &Arc<CycloField>, vectors: &[Vec4]) -> Subspace {
        let mut rows = vectors.to_vec();
        let pivots = row_reduce(&mut rows);
        Subspace {
            field: field.clone(),
            rows,
            pivots,
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Subspace {
        Subspace::rref(field, &[])
    }

    pub fn full(field: &Arc<CycloField>) -> Subspace {
        Subspace {
            field: field.clone(),
            rows: (0..4).map(|i| unit_vec(field, i)).collect(),
            pivots: vec![0, 1, 2, 3],
        }
    }

    /// Null space of the matrix whose rows are `rows`.
    pub fn kernel(field: &Arc<CycloField>, rows: &[Vec4]) -> Subspace {
        let mut r = rows.to_vec();
        let pivots = row_reduce(&mut r);
        let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec4> = free
            .iter()
            .map(|&f| {
                let mut v = zero_vec(field);
                v[f] = CycloNumber::one(field);
                for (row, &p) in r.iter().zip(&pivots) {
                    v[p] = -&row[f];
                }
                v
            })
            .collect();
        Subspace::rref(field, &basis)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == 4
    }

    pub fn basis(&self) -> &[Vec4] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Orthogonal complement for the standard inner product.
    pub fn complement(&self) -> Subspace {
        Subspace::kernel(&self.field, &self.rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_full() {
            return self.clone();
        }
        if other.is_zero() || self.is_full() {
            return other.clone();
        }
        let mut eqs = self.complement().rows;
        eqs.extend(other.complement().rows);
        Subspace::kernel(&self.field, &eqs)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Subspace::rref(&self.field, &v)
    }

    /// Membership test by reduction against the echelon rows.
    pub fn contains(&self, v: &Vec4) -> bool {
        let mut w = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for c in 0..4 {
                let t = &f * &row[c];
                w[c] = &w[c] - &t;
            }
        }
        w.iter().all(CycloNumber::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Basis rows rendered as floats.
    pub fn to_f64(&self) -> Vec<[f64; 4]> {
        self.rows.iter().map(vec_to_f64).collect()
    }
}

/// Rank of a matrix of arbitrary shape.
pub fn rank(mut rows: Vec<Vec<CycloNumber>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let candidates = (rank..rows.len()).filter(|r| !rows[*r][col].is_zero());
        let best = candidates
            .clone()
            .find(|r| rows[*r][col].is_rational())
            .or_else(|| candidates.clone().next());
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse().expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..cols {
                let t = &f * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Rational;

    fn f8() -> Arc<CycloField> {
        CycloField::get(8).unwrap()
    }

    fn v(field: &Arc<CycloField>, x: [i64; 4]) -> Vec4 {
        std::array::from_fn(|i| CycloNumber::from_integer(field, x[i]))
    }

    #[test]
    fn rref_examples() {
        let f = f8();
        assert_eq!(Subspace::rref(&f, &[]).dim(), 0);
        let s = Subspace::rref(&f, &[v(&f, [1, 0, 0, 0]), v(&f, [2, 0, 0, 0])]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &[v(&f, [1, 0, 0, 0])]);
        // span{i + j, 1 - k}: rows (0,1,1,0), (1,0,0,-1) are already reduced after a swap
        let s = Subspace::rref(&f, &[v(&f, [0, 1, 1, 0]), v(&f, [1, 0, 0, -1])]);
        assert_eq!(s.basis(), &[v(&f, [1, 0, 0, -1]), v(&f, [0, 1, 1, 0])]);
        assert_eq!(Subspace::rref(&f, s.basis()), s);
    }

    #[test]
    fn rref_normalizes_irrational_pivots() {
        let f = f8();
        let sqrt2 = CycloNumber::root_in(&f, 1) + CycloNumber::root_in(&f, 7);
        let one = CycloNumber::one(&f);
        let z = CycloNumber::zero(&f);
        let s = Subspace::rref(&f, &[[sqrt2.clone(), one.clone(), z.clone(), z.clone()]]);
        assert!(s.basis()[0][0].is_one());
        assert_eq!(s.basis()[0][1], one.scale(&Rational::new(1.into(), 1.into())) * sqrt2.inverse().unwrap());
    }

    #[test]
    fn kernel_examples() {
        let f = f8();
        assert!(Subspace::kernel(&f, Mat4::identity(&f).rows()).is_zero());
        let zero: Vec<Vec4> = (0..4).map(|_| zero_vec(&f)).collect();
        assert!(Subspace::kernel(&f, &zero).is_full());
        let k = Subspace::kernel(&f, &[v(&f, [1, 1, 1, 1])]);
        assert_eq!(k.dim(), 3);
        assert!(k.contains(&v(&f, [1, -1, 0, 0])));
    }

    #[test]
    fn intersections() {
        let f = f8();
        let u = Subspace::rref(&f, &[v(&f, [1, 0, 0, 0]), v(&f, [0, 1, 0, 0])]);
        let w = Subspace::rref(&f, &[v(&f, [0, 1, 0, 0]), v(&f, [0, 0, 1, 0])]);
        assert_eq!(u.intersect(&u), u);
        assert!(u.intersect(&Subspace::zero(&f)).is_zero());
        assert_eq!(u.intersect(&w), Subspace::rref(&f, &[v(&f, [0, 1, 0, 0])]));
        assert_eq!(u.sum(&w).dim(), 3);
        let p = Subspace::rref(&f, &[v(&f, [0, 0, 1, 0]), v(&f, [0, 0, 0, 1])]);
        assert!(u.intersect(&p).is_zero());
    }

    #[test]
    fn determinant() {
        let f = f8();
        assert!(Mat4::identity(&f).det().is_one());
        let m = Mat4([v(&f, [0, 1, 0, 0]), v(&f, [1, 0, 0, 0]), v(&f, [0, 0, 1, 0]), v(&f, [0, 0, 0, 1])]);
        assert_eq!(m.det().as_rational(), Some(Rational::from_integer((-1).into())));
        let m = Mat4([v(&f, [2, 1, 0, 3]), v(&f, [1, 0, 4, 0]), v(&f, [0, 5, 1, 1]), v(&f, [1, 1, 1, 1])]);
        assert_eq!(m.det().as_rational(), Some(Rational::from_integer(12.into())));
    }
}
