//! Counting invariant polynomials and equivariant maps by character averages,
//! and the explicit low-degree invariants in complex coordinates
//! `z1 = x1 + i x2`, `z2 = x3 + i x4`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNumber, Rational};
use crate::error::{Error, Result};
use crate::group::FiniteRotationGroup;
use crate::quat::{Quaternion, RotationElement};
use crate::rep::exact_average;

/// Partitions of `d` as multiplicity vectors `i[k-1]` = number of parts equal to `k`.
pub fn partitions(d: usize) -> Vec<Vec<u32>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur[p - 1] += 1;
            go(rest - p, p, cur, out);
            cur[p - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut vec![0; d], &mut out);
    out
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::from_integer(1.into()), |acc, k| acc * Rational::from_integer(k.into()))
}

/// Character of the `d`-th symmetric power from `p[k-1] = chi(g^k)`, `k <= d`:
/// `sum over partitions of prod_k p_k^{i_k} / (k^{i_k} i_k!)`.
pub fn chi_d_from_powers(p: &[CycloNumber], d: usize) -> CycloNumber {
    let field = p[0].field();
    if d == 0 {
        return CycloNumber::one(field);
    }
    let mut acc = CycloNumber::zero(field);
    for part in partitions(d) {
        let mut term = CycloNumber::one(field);
        let mut den = Rational::from_integer(1.into());
        for (k, &i) in part.iter().enumerate() {
            if i == 0 {
                continue;
            }
            term = term * p[k].pow(i);
            den = den * Rational::from_integer(((k + 1) as i64).pow(i).into()) * factorial(i);
        }
        acc = acc + term.scale(&den.recip());
    }
    acc
}

fn power_characters(g: &RotationElement, d: usize) -> Vec<CycloNumber> {
    let mut x = g.clone();
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(x.trace_char());
        x = x.compose(g);
    }
    out
}

/// `chi_(d)(g)` for a single element.
pub fn chi_d(g: &RotationElement, d: usize) -> CycloNumber {
    if d == 0 {
        return CycloNumber::one(g.field());
    }
    chi_d_from_powers(&power_characters(g, d), d)
}

/// The displayed closed forms for `d = 2, 3, 4`.
pub fn chi_d_closed_form(p: &[CycloNumber], d: usize) -> Option<CycloNumber> {
    let q = |n: i64, m: i64| Rational::new(n.into(), m.into());
    let c = &p[0];
    match d {
        2 => Some((&p[1] + &(c * c)).scale(&q(1, 2))),
        3 => Some((c.pow(3) + (&p[1] * c).scale(&q(3, 1)) + p[2].scale(&q(2, 1))).scale(&q(1, 6))),
        4 => Some(
            (c.pow(4)
                + (&(c * c) * &p[1]).scale(&q(6, 1))
                + (&p[1] * &p[1]).scale(&q(3, 1))
                + (c * &p[2]).scale(&q(8, 1))
                + p[3].scale(&q(6, 1)))
            .scale(&q(1, 24)),
        ),
        _ => None,
    }
}

/// Elements grouped by `(chi(g), chi(g^2), ..., chi(g^d))`, with multiplicities.
fn power_classes(g: &FiniteRotationGroup, d: usize) -> Vec<(Vec<CycloNumber>, usize)> {
    let chars = g.characters();
    let keys: Vec<Vec<CycloNumber>> = (0..g.order())
        .into_par_iter()
        .map(|x| {
            let mut y = x;
            (0..d)
                .map(|_| {
                    let c = chars[y].clone();
                    y = g.mul(y, x);
                    c
                })
                .collect()
        })
        .collect();
    let mut count: HashMap<Vec<CycloNumber>, usize> = HashMap::new();
    let mut order = Vec::new();
    for k in keys {
        let e = count.entry(k.clone()).or_insert(0);
        if *e == 0 {
            order.push(k);
        }
        *e += 1;
    }
    order.into_iter().map(|k| {
        let n = count[&k];
        (k, n)
    }).collect()
}

fn average(g: &FiniteRotationGroup, d: usize, with_chi: bool, what: &'static str) -> Result<u64> {
    let field = g.field();
    if d == 0 && !with_chi {
        return Ok(1);
    }
    let classes = power_classes(g, d.max(1));
    let sum = classes
        .par_iter()
        .map(|(p, n)| {
            let mut v = chi_d_from_powers(p, d);
            if with_chi {
                v = v * &p[0];
            }
            v.scale(&Rational::from_integer((*n as i64).into()))
        })
        .reduce(|| CycloNumber::zero(field), |a, b| a + b);
    exact_average(&sum, g.order(), what)
}

/// `c_d`: dimension of the degree-`d` invariant polynomials.
pub fn count_invariants(g: &FiniteRotationGroup, d: usize) -> Result<u64> {
    average(g, d, false, "invariant count")
}

/// `C_d`: dimension of the degree-`d` equivariant polynomial maps.
pub fn count_equivariants(g: &FiniteRotationGroup, d: usize) -> Result<u64> {
    average(g, d, true, "equivariant count")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCountTable {
    pub group: String,
    pub invariants: BTreeMap<usize, u64>,
    pub equivariants: BTreeMap<usize, u64>,
}

impl DegreeCountTable {
    pub fn compute(name: &str, g: &FiniteRotationGroup, inv: &[usize], equiv: &[usize]) -> Result<DegreeCountTable> {
        let mut t = DegreeCountTable {
            group: name.to_string(),
            invariants: BTreeMap::new(),
            equivariants: BTreeMap::new(),
        };
        for &d in inv {
            t.invariants.insert(d, count_invariants(g, d)?);
        }
        for &d in equiv {
            t.equivariants.insert(d, count_equivariants(g, d)?);
        }
        Ok(t)
    }
}

/// One row of a reference table: `G` side `(e3, i4, i6, i8)`, `F` side
/// `(e1, i2, e3, i4, i6, i8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u32,
    pub g: [u64; 4],
    pub f: [u64; 6],
}

pub const G_COLUMNS: [&str; 4] = ["e3", "i4", "i6", "i8"];
pub const F_COLUMNS: [&str; 6] = ["e1", "i2", "e3", "i4", "i6", "i8"];

const TABLES: [&str; 3] = [
    include_str!("../data/table_g1.txt"),
    include_str!("../data/table_g2.txt"),
    include_str!("../data/table_g3.txt"),
];

/// Published rows for series `j`.
pub fn reference_table(j: u32) -> Result<Vec<TableRow>> {
    let text = TABLES
        .get((j as usize).wrapping_sub(1))
        .ok_or_else(|| Error::Parse(format!("no table for series {j}")))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let v = l
                .split_whitespace()
                .map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad table entry '{x}'"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != 11 {
                return Err(Error::Parse(format!("table row needs 11 fields: '{l}'")));
            }
            Ok(TableRow {
                m: v[0] as u32,
                g: [v[1], v[2], v[3], v[4]],
                f: [v[5], v[6], v[7], v[8], v[9], v[10]],
            })
        })
        .collect()
}

pub fn g_row(g: &FiniteRotationGroup) -> Result<[u64; 4]> {
    Ok([
        count_equivariants(g, 3)?,
        count_invariants(g, 4)?,
        count_invariants(g, 6)?,
        count_invariants(g, 8)?,
    ])
}

pub fn f_row(f: &FiniteRotationGroup) -> Result<[u64; 6]> {
    Ok([
        count_equivariants(f, 1)?,
        count_invariants(f, 2)?,
        count_equivariants(f, 3)?,
        count_invariants(f, 4)?,
        count_invariants(f, 6)?,
        count_invariants(f, 8)?,
    ])
}

/// Computed table row for `G_j(m)` and `F_j(m)`.
pub fn compute_row(j: u32, m: u32) -> Result<TableRow> {
    let s = crate::series::SeriesGroups::build(j, m)?;
    let f = s.g.restrict(&s.f)?;
    Ok(TableRow { m, g: g_row(&s.g)?, f: f_row(&f)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantPolynomial {
    I2,
    I41,
    I42,
    I6,
}

impl InvariantPolynomial {
    pub const ALL: [InvariantPolynomial; 4] = [Self::I2, Self::I41, Self::I42, Self::I6];

    pub fn degree(self) -> u32 {
        match self {
            Self::I2 => 2,
            Self::I41 | Self::I42 => 4,
            Self::I6 => 6,
        }
    }

    pub fn eval_exact(self, x: &Quaternion) -> CycloNumber {
        let c = x.components();
        let two = CycloNumber::from_integer(c[0].field(), 2);
        eval_generic(self, [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()], |k| {
            CycloNumber::from_integer(two.field(), k)
        })
    }

    pub fn eval_f64(self, x: &[f64; 4]) -> f64 {
        eval_generic(self, *x, |k| k as f64)
    }
}

impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I2 => "I2",
            Self::I41 => "I41",
            Self::I42 => "I42",
            Self::I6 => "I6",
        })
    }
}

impl FromStr for InvariantPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown invariant '{s}'")))
    }
}

pub(crate) fn eval_generic<T>(p: InvariantPolynomial, x: [T; 4], int: impl Fn(i64) -> T) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let [x1, x2, x3, x4] = x;
    let sq = |a: &T| a.clone() * a.clone();
    let r1 = sq(&x1) + sq(&x2);
    let r2 = sq(&x3) + sq(&x4);
    // Re and Im of z1^2 and z2^2, without the factor 2 on the imaginary parts
    let a = sq(&x1) - sq(&x2);
    let b = x1.clone() * x2.clone();
    let c = sq(&x3) - sq(&x4);
    let d = x3.clone() * x4.clone();
    match p {
        InvariantPolynomial::I2 => r1 + r2,
        InvariantPolynomial::I41 => r1 * r2,
        // 2 Re(z1^2 conj(z2)^2)
        InvariantPolynomial::I42 => int(2) * (a * c + int(4) * b * d),
        // (|z1|^2 - |z2|^2) * i (w - conj w) = -2 (|z1|^2 - |z2|^2) Im w, w = z1^2 conj(z2)^2
        InvariantPolynomial::I6 => {
            let im_w = int(2) * (b * c - d * a);
            int(-2) * (r1 - r2) * im_w
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryMode {
    Invariant,
    AntiInvariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDefect {
    /// Every defect vanishes exactly.
    pub exact_zero: bool,
    pub max_abs: f64,
}

/// Probe points: eight fixed rational vectors with pairwise distinct,
/// nonzero coordinates (no probe lies on a coordinate plane).
pub const PROBES: [[(i64, i64); 4]; 8] = [
    [(1, 1), (2, 1), (3, 1), (5, 1)],
    [(1, 2), (-1, 3), (2, 5), (7, 4)],
    [(-3, 1), (1, 7), (-2, 3), (1, 1)],
    [(2, 3), (5, 2), (-1, 1), (-4, 9)],
    [(7, 5), (-3, 4), (1, 6), (2, 1)],
    [(-1, 2), (-5, 3), (3, 7), (-1, 4)],
    [(4, 1), (1, 3), (-7, 2), (3, 5)],
    [(1, 9), (6, 5), (5, 8), (-2, 7)],
];

pub fn probe_points(field: &std::sync::Arc<crate::cyclo::CycloField>) -> Vec<Quaternion> {
    PROBES
        .iter()
        .map(|p| {
            let c = std::array::from_fn(|i| CycloNumber::from_rational(field, &Rational::new(p[i].0.into(), p[i].1.into())));
            Quaternion::new(c).expect("rational components are real")
        })
        .collect()
}

/// Largest `|p(g x) -+ p(x)|` over the given elements and the probe points.
pub fn symmetry_defect(
    p: InvariantPolynomial,
    g: &FiniteRotationGroup,
    elements: &[usize],
    mode: SymmetryMode,
) -> SymmetryDefect {
    let probes = probe_points(g.field());
    let base: Vec<CycloNumber> = probes.iter().map(|x| p.eval_exact(x)).collect();
    let defects: Vec<CycloNumber> = elements
        .par_iter()
        .flat_map_iter(|&e| {
            let el = g.element(e);
            probes
                .iter()
                .zip(&base)
                .map(|(x, v)| {
                    let y = p.eval_exact(&el.apply(x));
                    match mode {
                        SymmetryMode::Invariant => &y - v,
                        SymmetryMode::AntiInvariant => &y + v,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    SymmetryDefect {
        exact_zero: defects.iter().all(CycloNumber::is_zero),
        max_abs: defects.iter().map(|d| d.to_f64().abs()).fold(0.0, f64::max),
    }
}
