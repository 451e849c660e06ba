//! The families `G_j(m)`, `F_j(m)`, `H(m)` and `F(m)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm, CycloField};
use crate::error::{Error, Result};
use crate::group::{FiniteRotationGroup, Subgroup, DEFAULT_CAP};
use crate::linalg::Mat4;
use crate::quat::{Quaternion, RotationElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    G1,
    G2,
    G3,
    F1,
    F2,
    F3,
    H,
    Fc,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::G1,
        Family::G2,
        Family::G3,
        Family::F1,
        Family::F2,
        Family::F3,
        Family::H,
        Family::Fc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::G3 => "g3",
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::H => "h",
            Family::Fc => "fc",
        }
    }

    /// `j` for the `G_j` / `F_j` families.
    pub fn series_index(self) -> Option<u32> {
        match self {
            Family::G1 | Family::F1 => Some(1),
            Family::G2 | Family::F2 => Some(2),
            Family::G3 | Family::F3 => Some(3),
            _ => None,
        }
    }

    pub fn g(j: u32) -> Result<Family> {
        match j {
            1 => Ok(Family::G1),
            2 => Ok(Family::G2),
            3 => Ok(Family::G3),
            _ => Err(Error::Parse(format!("series index must be 1, 2 or 3 (got {j})"))),
        }
    }

    /// The index-2 subgroup `F_j` of `G_j`.
    pub fn f_of(self) -> Option<Family> {
        match self {
            Family::G1 => Some(Family::F1),
            Family::G2 => Some(Family::F2),
            Family::G3 => Some(Family::F3),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .or_else(|| s.eq_ignore_ascii_case("fcenter").then_some(Family::Fc))
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}' (expected g1, g2, g3, f1, f2, f3, h or fc)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub m: u32,
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::G1 => "G_1",
            Family::G2 => "G_2",
            Family::G3 => "G_3",
            Family::F1 => "F_1",
            Family::F2 => "F_2",
            Family::F3 => "F_3",
            Family::H => "H",
            Family::Fc => "F",
        };
        write!(f, "{}({})", name, self.m)
    }
}

impl FamilySpec {
    pub fn new(family: Family, m: u32) -> Result<FamilySpec> {
        if m < 3 || m % 2 == 0 {
            return Err(Error::InvalidM(m));
        }
        Ok(FamilySpec { family, m })
    }

    /// Default field order `lcm(8, 4m)`.
    pub fn field_order(&self) -> u32 {
        lcm(8, 4 * self.m)
    }

    pub fn generators(&self) -> Result<Vec<RotationElement>> {
        self.generators_in(&CycloField::get(self.field_order())?)
    }

    /// Generators written in a field whose order is a multiple of `lcm(8, 4m)`.
    pub fn generators_in(&self, f: &Arc<CycloField>) -> Result<Vec<RotationElement>> {
        let m = self.m;
        let (one, i, j) = (Quaternion::one(f), Quaternion::i(f), Quaternion::j(f));
        let em = Quaternion::e(f, m)?;
        let e2m = Quaternion::e(f, 2 * m)?;
        let e4 = Quaternion::e(f, 4)?;
        let el = |l: &Quaternion, r: &Quaternion| RotationElement::make_element(l.clone(), r.clone());
        let emi = el(&em, &i)?;
        Ok(match self.family {
            Family::G1 => vec![el(&em, &one)?, el(&one, &i)?, el(&one, &j)?, el(&j, &e4)?],
            Family::G2 => vec![el(&em, &one)?, el(&one, &i)?, el(&e2m, &j)?, el(&j, &e4)?],
            Family::G3 => vec![el(&em, &one)?, el(&one, &i)?, el(&j, &one)?, el(&one, &j)?],
            Family::F1 | Family::F3 => vec![emi, el(&one, &j)?],
            Family::F2 => vec![emi, el(&e2m, &j)?],
            Family::H => vec![emi],
            Family::Fc => vec![emi.compose(&emi)],
        })
    }

    pub fn build(&self) -> Result<FiniteRotationGroup> {
        FiniteRotationGroup::closure(&self.generators()?, DEFAULT_CAP)
    }

    pub fn build_in(&self, order: u32) -> Result<FiniteRotationGroup> {
        let f = CycloField::get(order)?;
        FiniteRotationGroup::closure(&self.generators_in(&f)?, DEFAULT_CAP)
    }
}

/// `G_j(m)` with its subgroups `F_j(m)`, `H(m)` and `F(m)` located inside it.
pub struct SeriesGroups {
    pub spec: FamilySpec,
    pub g: FiniteRotationGroup,
    pub f: Subgroup,
    pub h: Subgroup,
    pub fc: Subgroup,
}

impl SeriesGroups {
    pub fn build(j: u32, m: u32) -> Result<SeriesGroups> {
        let spec = FamilySpec::new(Family::g(j)?, m)?;
        let g = spec.build()?;
        let sub = |family: Family| -> Result<Subgroup> {
            let gens = FamilySpec { family, m }.generators_in(g.field())?;
            let idx = gens.iter().map(|x| g.index_of(x).ok_or(Error::NotInGroup)).collect::<Result<Vec<_>>>()?;
            Ok(g.generate(&idx))
        };
        Ok(SeriesGroups {
            f: sub(spec.family.f_of().unwrap())?,
            h: sub(Family::H)?,
            fc: sub(Family::Fc)?,
            spec,
            g,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPartition {
    pub commuting: Vec<usize>,
    pub anticommuting: Vec<usize>,
    pub other: Vec<usize>,
}

/// `J = to_matrix([i, 1])`.
pub fn j_matrix(f: &Arc<CycloField>) -> Mat4 {
    RotationElement::make_element(Quaternion::i(f), Quaternion::one(f))
        .expect("unit")
        .to_matrix()
}

/// Splits elements by `M J = J M`, `M J = -J M` or neither.
pub fn j_commutation_partition(g: &FiniteRotationGroup) -> JPartition {
    let j = j_matrix(g.field());
    let mut p = JPartition {
        commuting: vec![],
        anticommuting: vec![],
        other: vec![],
    };
    for (idx, x) in g.elements().iter().enumerate() {
        let m = x.to_matrix();
        let (mj, jm) = (m.mul(&j), j.mul(&m));
        if mj == jm {
            p.commuting.push(idx);
        } else if mj == jm.neg() {
            p.anticommuting.push(idx);
        } else {
            p.other.push(idx);
        }
    }
    p
}

/// Whether `G_j(m)` is contained in `G_j(m2)`, compared in a common field.
pub fn divisibility_inclusion(j: u32, m: u32, m2: u32) -> Result<bool> {
    let a = FamilySpec::new(Family::g(j)?, m)?;
    let b = FamilySpec::new(Family::g(j)?, m2)?;
    let n = lcm(a.field_order(), b.field_order());
    let ga = a.build()?;
    let gb = b.build_in(n)?;
    let set: HashSet<&RotationElement> = gb.elements().iter().collect();
    for x in ga.elements() {
        if !set.contains(&x.embed(n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of order-2 elements of `a` outside `b`.
pub fn order_two_outside(g: &FiniteRotationGroup, a: &Subgroup, b: &Subgroup) -> usize {
    let orders = g.element_orders();
    a.members().iter().filter(|&&x| !b.contains(x) && orders[x] == 2).count()
}

/// Exact basis of the fixed plane carrying the bifurcating branch, together
/// with the field it lives in. `G_1` needs `e_8`, so its field is `lcm(16, 4m)`.
pub fn branch_plane(spec: &FamilySpec) -> Result<(Arc<CycloField>, [Quaternion; 2])> {
    let m = spec.m;
    match spec.family {
        Family::G1 => {
            let f = CycloField::get(lcm(16, 4 * m))?;
            let e8 = Quaternion::e(&f, 8)?;
            let b = e8.conj().mul(&Quaternion::j(&f));
            Ok((f, [e8, b]))
        }
        Family::G2 => {
            let f = CycloField::get(spec.field_order())?;
            let e2m = Quaternion::e(&f, 2 * m)?;
            let e4 = Quaternion::e(&f, 4)?;
            let a = Quaternion::one(&f).add(&e2m.mul(&e4));
            let b = e2m.add(&e4.conj()).mul(&Quaternion::j(&f));
            Ok((f, [a, b]))
        }
        Family::G3 => {
            let f = CycloField::get(spec.field_order())?;
            let (one, i) = (Quaternion::one(&f), Quaternion::i(&f));
            Ok((f.clone(), [one.sub(&i), one.add(&i).mul(&Quaternion::j(&f))]))
        }
        _ => Err(Error::BranchPrecondition(format!("no branch plane for {}", spec))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;

    fn spec(f: Family, m: u32) -> FamilySpec {
        FamilySpec::new(f, m).unwrap()
    }

    #[test]
    fn family_names_parse() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("g4".parse::<Family>().is_err());
        assert_eq!(FamilySpec::new(Family::G1, 4).unwrap_err(), Error::InvalidM(4));
        assert_eq!(FamilySpec::new(Family::G1, 1).unwrap_err(), Error::InvalidM(1));
    }

    #[test]
    fn build_examples() {
        assert_eq!(spec(Family::G2, 5).build().unwrap().order(), 80);
        let s = SeriesGroups::build(1, 3).unwrap();
        assert_eq!(s.f.order(), 24);
        assert_eq!(s.g.order() / s.f.order(), 2);
        assert_eq!(s.fc.order(), 6);
        let f1 = spec(Family::F1, 3).build().unwrap();
        let fc = f1.locate(&spec(Family::Fc, 3).build().unwrap()).unwrap();
        assert_eq!(f1.center(), fc);
    }

    #[test]
    fn j_partition_examples() {
        let s = SeriesGroups::build(1, 3).unwrap();
        let p = j_commutation_partition(&s.g);
        assert_eq!(p.commuting, s.f.members());
        assert_eq!(p.anticommuting.len(), 24);
        assert!(p.other.is_empty());
        let f = s.g.field().clone();
        let t = FiniteRotationGroup::trivial(&f);
        assert_eq!(j_commutation_partition(&t).commuting, vec![0]);
    }

    #[test]
    fn inclusions() {
        assert!(divisibility_inclusion(1, 3, 9).unwrap());
        assert!(divisibility_inclusion(2, 3, 15).unwrap());
        assert!(divisibility_inclusion(1, 3, 3).unwrap());
        assert!(!divisibility_inclusion(1, 3, 5).unwrap());
    }

    #[test]
    fn h_generator_contains_e_m_power() {
        let f = CycloField::get(24).unwrap();
        let h = spec(Family::H, 3).build().unwrap();
        assert_eq!(h.order(), 12);
        let e3 = Quaternion::e(&f, 3).unwrap();
        let e34 = e3.mul(&e3).mul(&e3).mul(&e3);
        assert!(h.contains(&RotationElement::make_element(e34, Quaternion::one(&f)).unwrap()));
    }

    #[test]
    fn branch_planes_are_fixed_planes() {
        for family in [Family::G1, Family::G2, Family::G3] {
            let s = spec(family, 3);
            let (f, [a, b]) = branch_plane(&s).unwrap();
            let g = s.build_in(f.order()).unwrap();
            let w = Subspace::rref(&f, &[a.components().clone(), b.components().clone()]);
            assert_eq!(w.dim(), 2);
            let stab = g.pointwise_stabilizer(&w);
            assert_eq!(stab.order(), 2, "{family}");
            let x = stab.members()[1];
            assert_eq!(g.fixed_spaces()[x], w, "{family}");
        }
    }
}
