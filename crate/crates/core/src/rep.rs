//! Characters of the natural 4-dimensional representation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloJson, CycloNumber, Rational};
use crate::error::{Error, Result};
use crate::group::{FiniteRotationGroup, Subgroup};
use crate::linalg::{rank, Subspace};

/// `sum / n` as a non-negative integer, or `NonIntegral`.
pub(crate) fn exact_average(sum: &CycloNumber, n: usize, what: &'static str) -> Result<u64> {
    let avg = sum.as_rational().map(|q| q / Rational::from_integer(n.into()));
    match avg {
        Some(q) if q.is_integer() && !q.numer().sign().eq(&num_bigint::Sign::Minus) => {
            Ok(num_traits::ToPrimitive::to_u64(q.numer()).expect("count fits in u64"))
        }
        _ => Err(Error::NonIntegral {
            what,
            value: format!("({}) / {}", sum, n),
        }),
    }
}

pub(crate) fn par_sum(field: &std::sync::Arc<crate::cyclo::CycloField>, it: impl ParallelIterator<Item = CycloNumber>) -> CycloNumber {
    let zero = CycloNumber::zero(field);
    it.reduce(|| zero.clone(), |a, b| a + b)
}

/// `(1/|G|) sum chi(g)^2`, the dimension of the commutant.
pub fn commutant_dimension(g: &FiniteRotationGroup) -> Result<u64> {
    let chars = g.characters();
    let sum = par_sum(g.field(), chars.par_iter().map(|c| c * c));
    exact_average(&sum, g.order(), "commutant dimension")
}

/// Dimension of `{X : X M = M X}` for the generator matrices, by linear algebra.
pub fn commutant_dimension_by_generators(g: &FiniteRotationGroup) -> usize {
    let f = g.field();
    let mut eqs = Vec::new();
    for s in g.generators() {
        let m = s.to_matrix().0;
        // (X M - M X)_{ab} = sum_k X_{ak} M_{kb} - M_{ak} X_{kb}, unknown X_{pq} at 4p + q
        for a in 0..4 {
            for b in 0..4 {
                let mut row = vec![CycloNumber::zero(f); 16];
                for k in 0..4 {
                    row[4 * a + k] = &row[4 * a + k] + &m[k][b];
                    row[4 * k + b] = &row[4 * k + b] - &m[a][k];
                }
                eqs.push(row);
            }
        }
    }
    16 - rank(eqs)
}

pub fn is_absolutely_irreducible(g: &FiniteRotationGroup) -> Result<bool> {
    Ok(commutant_dimension(g)? == 1)
}

/// `dim Fix(H) = (1/|H|) sum_{h in H} chi(h)`.
pub fn fix_dimension(g: &FiniteRotationGroup, h: &Subgroup) -> Result<u64> {
    let chars = g.characters();
    let sum = par_sum(g.field(), h.members().par_iter().map(|&x| chars[x].clone()));
    exact_average(&sum, h.order(), "fixed space dimension")
}

/// `Fix(H)` as the intersection of the element fixed spaces.
pub fn fix_space(g: &FiniteRotationGroup, h: &Subgroup) -> Subspace {
    let fixed = g.fixed_spaces();
    h.members()
        .iter()
        .fold(Subspace::full(g.field()), |acc, &x| if acc.is_zero() { acc } else { acc.intersect(&fixed[x]) })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassCharacter {
    pub representative: usize,
    pub size: usize,
    pub element_order: usize,
    pub value: CycloJson,
    pub value_f64: f64,
}

pub fn class_characters(g: &FiniteRotationGroup) -> Vec<ClassCharacter> {
    let chars = g.characters();
    let orders = g.element_orders();
    g.conjugacy_classes()
        .iter()
        .map(|c| ClassCharacter {
            representative: c[0],
            size: c.len(),
            element_order: orders[c[0]],
            value: CycloJson::from(&chars[c[0]]),
            value_f64: chars[c[0]].to_f64(),
        })
        .collect()
}
