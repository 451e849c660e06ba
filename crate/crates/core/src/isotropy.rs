//! Isotropy subgroups via the lattice of fixed spaces.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNumber, Rational};
use crate::error::Result;
use crate::group::{FiniteRotationGroup, Subgroup};
use crate::linalg::{Subspace, Vec4};
use crate::quat::Quaternion;
use crate::rep::{commutant_dimension, fix_dimension, fix_space};

/// Fixed spaces of nontrivial elements closed under intersection, plus the
/// whole space. The zero subspace appears only if some intersection is zero.
pub struct FixedSpaceLattice {
    pub spaces: Vec<Subspace>,
}

impl FixedSpaceLattice {
    pub fn contains_zero(&self) -> bool {
        self.spaces.iter().any(Subspace::is_zero)
    }

    pub fn planes(&self) -> usize {
        self.spaces.iter().filter(|s| s.dim() == 2).count()
    }
}

fn det2x2_block_f64(a: &[[f64; 4]], b: &[[f64; 4]]) -> f64 {
    let m: Vec<[f64; 4]> = a.iter().chain(b).copied().collect();
    // 4x4 determinant by elimination with partial pivoting
    let mut m = [m[0], m[1], m[2], m[3]];
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let f = m[r][c] / m[c][c];
            for k in c..4 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// Two 2-planes whose float basis determinant is clearly nonzero meet only in 0;
/// anything else goes through exact elimination.
fn intersect_screened(u: &Subspace, w: &Subspace, uf: &[[f64; 4]], wf: &[[f64; 4]]) -> Subspace {
    if u.dim() == 2 && w.dim() == 2 && det2x2_block_f64(uf, wf).abs() > 1e-6 {
        return Subspace::zero(u.field());
    }
    u.intersect(w)
}

pub fn fixed_space_lattice(g: &FiniteRotationGroup) -> FixedSpaceLattice {
    let mut spaces: Vec<Subspace> = Vec::new();
    let mut seen: HashSet<Subspace> = HashSet::new();
    for s in g.fixed_spaces() {
        if !s.is_zero() && seen.insert(s.clone()) {
            spaces.push(s.clone());
        }
    }
    let mut floats: Vec<Vec<[f64; 4]>> = spaces.iter().map(Subspace::to_f64).collect();
    let mut start = 0;
    loop {
        let n = spaces.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a.max(start)..n).filter(move |&b| b > a).map(move |b| (a, b))).collect();
        let found: Vec<Subspace> = pairs
            .par_iter()
            .map(|&(a, b)| intersect_screened(&spaces[a], &spaces[b], &floats[a], &floats[b]))
            .collect();
        for s in found {
            if seen.insert(s.clone()) {
                floats.push(s.to_f64());
                spaces.push(s);
            }
        }
        if spaces.len() == n {
            break;
        }
        start = n;
    }
    FixedSpaceLattice { spaces }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NormalizerAction {
    pub normalizer_order: usize,
    pub image_order: usize,
    pub cyclic: bool,
    /// Every image element has determinant 1.
    pub rotations_only: bool,
    pub acts_as_minus_identity: bool,
    /// `(p, q)` for a minimal rotation angle `p/q * pi`.
    pub rotation_angle_over_pi: Option<(i64, i64)>,
    pub trace_verified: bool,
}

#[derive(Clone, Debug)]
pub struct IsotropyType {
    pub representative: Subgroup,
    pub fix: Subspace,
    pub fix_dim: usize,
    pub class_length: usize,
    pub class: Vec<Subgroup>,
    pub normalizer: Subgroup,
    pub action: NormalizerAction,
}

impl IsotropyType {
    pub fn normalizer_order(&self) -> usize {
        self.normalizer.order()
    }
}

#[derive(Clone, Debug)]
pub struct IsotropyAnalysis {
    pub types: Vec<IsotropyType>,
    /// Stabilizer of a generic point.
    pub principal: Subgroup,
    pub principal_fix_dim: usize,
    pub lattice_size: usize,
    pub lattice_has_zero: bool,
}

/// 2x2 matrix of `n` on `W` in the coordinates given by the pivot entries of
/// the RREF basis.
fn restrict(n: &crate::quat::RotationElement, w: &Subspace) -> [[CycloNumber; 2]; 2] {
    let piv = w.pivots();
    let images: Vec<Vec4> = w
        .basis()
        .iter()
        .map(|b| n.apply(&Quaternion::new(b.clone()).expect("real basis")).components().clone())
        .collect();
    std::array::from_fn(|r| std::array::from_fn(|c| images[c][piv[r]].clone()))
}

fn mul2(a: &[[CycloNumber; 2]; 2], b: &[[CycloNumber; 2]; 2]) -> [[CycloNumber; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| &a[r][0] * &b[0][c] + &a[r][1] * &b[1][c]))
}

pub fn normalizer_action(g: &FiniteRotationGroup, h: &Subgroup, w: &Subspace) -> Result<NormalizerAction> {
    let normalizer = g.normalizer(h)?;
    Ok(action_of(g, &normalizer, w))
}

fn action_of(g: &FiniteRotationGroup, normalizer: &Subgroup, w: &Subspace) -> NormalizerAction {
    let f = g.field();
    let one = CycloNumber::one(f);
    let zero = CycloNumber::zero(f);
    let id = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    let minus = [[-&one, zero.clone()], [zero.clone(), -&one]];
    let mut image: Vec<[[CycloNumber; 2]; 2]> = Vec::new();
    let mut seen = HashSet::new();
    for &x in normalizer.members() {
        let m = restrict(g.element(x), w);
        if seen.insert(m.clone()) {
            image.push(m);
        }
    }
    let order_of = |m: &[[CycloNumber; 2]; 2]| {
        let mut p = m.clone();
        let mut k = 1;
        while p != id {
            p = mul2(&p, m);
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = image.iter().map(order_of).collect();
    let image_order = image.len();
    let generator = orders.iter().position(|&k| k == image_order);
    let rotations_only = image
        .iter()
        .all(|m| (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).is_one());
    let acts_as_minus_identity = image_order == 2 && image.contains(&minus);
    let (angle, trace_verified) = match generator {
        Some(_) if rotations_only => {
            let q = Rational::new(2.into(), (image_order as i64).into());
            let angle = (
                num_traits::ToPrimitive::to_i64(q.numer()).unwrap(),
                num_traits::ToPrimitive::to_i64(q.denom()).unwrap(),
            );
            // some generator has trace 2 cos(2 pi / order)
            let target = 2.0 * (2.0 * std::f64::consts::PI / image_order as f64).cos();
            let verified = image
                .iter()
                .zip(&orders)
                .filter(|(_, &o)| o == image_order)
                .any(|(m, _)| ((&m[0][0] + &m[1][1]).to_f64() - target).abs() < 1e-12);
            (Some(angle), verified)
        }
        _ => (None, false),
    };
    NormalizerAction {
        normalizer_order: normalizer.order(),
        image_order,
        cyclic: generator.is_some(),
        rotations_only,
        acts_as_minus_identity,
        rotation_angle_over_pi: angle,
        trace_verified,
    }
}

pub fn isotropy_types(g: &FiniteRotationGroup) -> Result<IsotropyAnalysis> {
    let lattice = fixed_space_lattice(g);
    let candidates: Vec<(Subspace, Subgroup)> = lattice
        .spaces
        .par_iter()
        .filter(|w| !w.is_zero() && !w.is_full())
        .filter_map(|w| {
            let s = g.pointwise_stabilizer(w);
            (!s.is_trivial() && fix_space(g, &s) == *w).then(|| (w.clone(), s))
        })
        .collect();

    let by_group: HashMap<Subgroup, usize> = candidates.iter().enumerate().map(|(i, (_, s))| (s.clone(), i)).collect();
    let mut assigned = vec![false; candidates.len()];
    let mut types = Vec::new();
    for i in 0..candidates.len() {
        if assigned[i] {
            continue;
        }
        let class = g.conjugates_of(&candidates[i].1);
        for c in &class {
            if let Some(&k) = by_group.get(c) {
                assigned[k] = true;
            }
        }
        let representative = class.iter().min().unwrap().clone();
        let fix = fix_space(g, &representative);
        let normalizer = g.normalizer(&representative)?;
        let action = action_of(g, &normalizer, &fix);
        debug_assert_eq!(class.len() * normalizer.order(), g.order());
        types.push(IsotropyType {
            fix_dim: fix.dim(),
            fix,
            class_length: class.len(),
            class,
            representative,
            normalizer,
            action,
        });
    }
    types.sort_by(|a, b| {
        (a.fix_dim, a.class_length, a.representative.members()).cmp(&(b.fix_dim, b.class_length, b.representative.members()))
    });

    let principal = g.pointwise_stabilizer(&Subspace::full(g.field()));
    Ok(IsotropyAnalysis {
        principal_fix_dim: fix_space(g, &principal).dim(),
        principal,
        types,
        lattice_size: lattice.spaces.len(),
        lattice_has_zero: lattice.contains_zero(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IzeVerdict {
    pub commutant_dim: u64,
    pub absolutely_irreducible: bool,
    pub has_odd_dim_fix: bool,
    /// Fix dimensions of all isotropy types, principal included.
    pub fix_dims: Vec<usize>,
    pub verdict: bool,
}

/// True verdict: absolutely irreducible with no odd-dimensional fixed space.
pub fn ize_check(g: &FiniteRotationGroup) -> Result<IzeVerdict> {
    let analysis = isotropy_types(g)?;
    ize_from(g, &analysis)
}

pub fn ize_from(g: &FiniteRotationGroup, analysis: &IsotropyAnalysis) -> Result<IzeVerdict> {
    let commutant_dim = commutant_dimension(g)?;
    let absolutely_irreducible = commutant_dim == 1;
    let mut fix_dims = vec![analysis.principal_fix_dim];
    fix_dims.extend(analysis.types.iter().map(|t| t.fix_dim));
    let has_odd_dim_fix = fix_dims.iter().any(|d| d % 2 == 1);
    Ok(IzeVerdict {
        commutant_dim,
        absolutely_irreducible,
        has_odd_dim_fix,
        fix_dims,
        verdict: absolutely_irreducible && !has_odd_dim_fix,
    })
}

/// Character average against linear algebra for every isotropy subgroup.
pub fn fix_dimensions_agree(g: &FiniteRotationGroup, analysis: &IsotropyAnalysis) -> Result<bool> {
    for t in &analysis.types {
        if fix_dimension(g, &t.representative)? as usize != t.fix_dim {
            return Ok(false);
        }
    }
    Ok(fix_dimension(g, &analysis.principal)? as usize == analysis.principal_fix_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloField;
    use crate::quat::RotationElement;
    use crate::series::{Family, FamilySpec};

    fn build(f: Family, m: u32) -> FiniteRotationGroup {
        FamilySpec::new(f, m).unwrap().build().unwrap()
    }

    #[test]
    fn lattice_examples() {
        let t = FiniteRotationGroup::trivial(&CycloField::get(8).unwrap());
        let l = fixed_space_lattice(&t);
        assert_eq!(l.spaces.len(), 1);
        assert!(l.spaces[0].is_full());
        assert_eq!(fixed_space_lattice(&build(Family::G1, 3)).planes(), 12);
        assert_eq!(fixed_space_lattice(&build(Family::G3, 3)).planes(), 18);
    }

    #[test]
    fn screened_intersection_matches_exact() {
        let g = build(Family::G3, 3);
        let planes: Vec<&Subspace> = g.fixed_spaces().iter().filter(|s| s.dim() == 2).collect();
        for a in &planes {
            for b in &planes {
                let fast = intersect_screened(a, b, &a.to_f64(), &b.to_f64());
                assert_eq!(fast, a.intersect(b));
            }
        }
    }

    #[test]
    fn g1_types() {
        let g = build(Family::G1, 5);
        let a = isotropy_types(&g).unwrap();
        assert_eq!(a.types.len(), 1);
        let t = &a.types[0];
        assert_eq!((t.representative.order(), t.fix_dim, t.class_length, t.normalizer_order()), (2, 2, 20, 4));
        assert!(a.principal.is_trivial());
        assert_eq!(a.principal_fix_dim, 4);
        assert!(fix_dimensions_agree(&g, &a).unwrap());
    }

    #[test]
    fn g2_types() {
        let g = build(Family::G2, 3);
        let a = isotropy_types(&g).unwrap();
        let mut shapes: Vec<(usize, usize)> = a.types.iter().map(|t| (t.class_length, t.normalizer_order())).collect();
        shapes.sort();
        assert_eq!(shapes, vec![(4, 12), (12, 4)]);
        // Fix(<[i, j]>) = span{1 - ij, i + j}
        let f = g.field().clone();
        let (one, i, j) = (Quaternion::one(&f), Quaternion::i(&f), Quaternion::j(&f));
        let x = g.index_of(&RotationElement::make_element(i.clone(), j.clone()).unwrap()).unwrap();
        let w = Subspace::rref(&f, &[one.sub(&i.mul(&j)).components().clone(), i.add(&j).components().clone()]);
        assert_eq!(fix_space(&g, &g.generate(&[x])), w);
        assert_eq!(g.normalizer(&g.generate(&[x])).unwrap().order(), 12);
    }

    #[test]
    fn g3_types() {
        let g = build(Family::G3, 3);
        let a = isotropy_types(&g).unwrap();
        assert_eq!(a.types.len(), 3);
        for t in &a.types {
            assert_eq!((t.class_length, t.normalizer_order()), (6, 8));
            assert_eq!(t.action.image_order, 4);
            assert!(t.action.cyclic);
        }
        // Fix(<[j, j]>) = span{1, j}
        let f = g.field().clone();
        let j = Quaternion::j(&f);
        let x = g.index_of(&RotationElement::make_element(j.clone(), j.clone()).unwrap()).unwrap();
        let s = g.pointwise_stabilizer(&g.fixed_spaces()[x]);
        assert_eq!(s.order(), 2);
        let w = Subspace::rref(&f, &[Quaternion::one(&f).components().clone(), j.components().clone()]);
        assert_eq!(fix_space(&g, &s), w);
    }

    #[test]
    fn normalizer_actions() {
        let a = isotropy_types(&build(Family::G1, 3)).unwrap();
        let act = &a.types[0].action;
        assert_eq!(act.image_order, 2);
        assert!(act.acts_as_minus_identity);
        assert_eq!(act.rotation_angle_over_pi, Some((1, 1)));

        let a = isotropy_types(&build(Family::G2, 5)).unwrap();
        let t = a.types.iter().find(|t| t.normalizer_order() == 20).unwrap();
        assert_eq!(t.action.image_order, 10);
        assert!(t.action.cyclic && t.action.trace_verified);
        assert_eq!(t.action.rotation_angle_over_pi, Some((1, 5)));
    }

    #[test]
    fn ize_examples() {
        assert!(ize_check(&build(Family::G1, 3)).unwrap().verdict);
        let v = ize_check(&build(Family::F1, 3)).unwrap();
        assert!(!v.verdict && !v.absolutely_irreducible);
        let f = CycloField::get(8).unwrap();
        let j = Quaternion::j(&f);
        let g = FiniteRotationGroup::closure(&[RotationElement::make_element(j.clone(), j).unwrap()], 10).unwrap();
        let v = ize_check(&g).unwrap();
        assert_eq!(v.commutant_dim, 8);
        assert!(!v.verdict);
    }
}
