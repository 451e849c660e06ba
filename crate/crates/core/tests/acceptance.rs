//! Acceptance gate: one PASS/FAIL line per criterion, detail lines indented.
//! Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use so4sym::dynamics::{
    admissible_coefficients, branch_and_jacobian, equivariance_residual, structure_checks, Coupling, CubicCoefficients,
    DEFAULT_SAMPLES,
};
use so4sym::group::GeneratorFile;
use so4sym::invariants::{chi_d_closed_form, chi_d_from_powers, compute_row, reference_table};
use so4sym::isotropy::{ize_check, isotropy_types};
use so4sym::rep::{fix_dimension, fix_space};
use so4sym::series::{j_commutation_partition, order_two_outside, Family, FamilySpec, SeriesGroups};

const MS: [u32; 10] = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21];
const RESIDUAL_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-9;
const DIVERGENCE_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Outcome {
        Outcome { pass, summary: summary.into(), details: vec![] }
    }
}

fn all_series() -> Vec<(u32, u32)> {
    (1..=3).flat_map(|j| MS.iter().map(move |&m| (j, m))).collect()
}

fn series(j: u32, m: u32) -> SeriesGroups {
    SeriesGroups::build(j, m).expect("series group builds")
}

fn c1_orders() -> Outcome {
    let bad: Vec<String> = all_series()
        .par_iter()
        .filter_map(|&(j, m)| {
            let s = series(j, m);
            let got = [s.g.order(), s.f.order(), s.h.order(), s.fc.order()];
            let m = m as usize;
            (got != [16 * m, 8 * m, 4 * m, 2 * m]).then(|| format!("G_{j}({m}): {got:?}"))
        })
        .collect();
    let mut o = Outcome::new(bad.is_empty(), "group orders 16m, 8m, 4m, 2m for 30 series groups");
    o.details = bad;
    o
}

fn c2_tables() -> Outcome {
    let mut mismatches = Vec::new();
    for j in 1..=3 {
        let reference = reference_table(j).expect("table data");
        let rows: Vec<_> = reference.par_iter().map(|r| compute_row(j, r.m).expect("row")).collect();
        for (r, c) in reference.iter().zip(&rows) {
            if r != c {
                mismatches.push(format!(
                    "series {j}, m = {}: published G {:?} F {:?}, computed G {:?} F {:?}",
                    r.m, r.g, r.f, c.g, c.f
                ));
            }
        }
    }
    let mut o = Outcome::new(mismatches.is_empty(), format!("table reproduction, {} mismatched rows", mismatches.len()));
    o.details = mismatches;
    o
}

fn expected_types(j: u32, m: usize) -> Vec<(usize, usize)> {
    let mut v = match j {
        1 => vec![(4 * m, 4)],
        2 => vec![(4, 4 * m), (4 * m, 4)],
        _ => vec![(2 * m, 8); 3],
    };
    v.sort();
    v
}

fn expected_images(j: u32, m: usize) -> Vec<usize> {
    let mut v = match j {
        1 => vec![2],
        2 => vec![2 * m, 2],
        _ => vec![4; 3],
    };
    v.sort();
    v
}

/// Criteria 3 and 4 share the isotropy computation.
fn c3_c4_isotropy() -> (Outcome, Outcome) {
    let results: Vec<(u32, u32, Vec<String>, Vec<String>)> = all_series()
        .par_iter()
        .map(|&(j, m)| {
            let s = series(j, m);
            let a = isotropy_types(&s.g).expect("isotropy");
            let mut bad3 = vec![];
            let mut bad4 = vec![];
            if a.types.len() != j as usize {
                bad3.push(format!("{} types", a.types.len()));
            }
            for t in &a.types {
                if t.representative.order() != 2 || t.fix_dim != 2 {
                    bad3.push(format!("type of order {} with fix dim {}", t.representative.order(), t.fix_dim));
                }
            }
            let mut got: Vec<(usize, usize)> = a.types.iter().map(|t| (t.class_length, t.normalizer_order())).collect();
            got.sort();
            if got != expected_types(j, m as usize) {
                bad3.push(format!("(class length, normalizer order) = {got:?}"));
            }
            let mut images: Vec<usize> = a.types.iter().map(|t| t.action.image_order).collect();
            images.sort();
            if images != expected_images(j, m as usize) {
                bad4.push(format!("image orders {images:?}"));
            }
            if j == 1 && !a.types.iter().all(|t| t.action.acts_as_minus_identity) {
                bad4.push("image is not -identity".into());
            }
            (j, m, bad3, bad4)
        })
        .collect();
    let collect = |pick: fn(&(u32, u32, Vec<String>, Vec<String>)) -> &Vec<String>| -> Vec<String> {
        results
            .iter()
            .flat_map(|r| pick(r).iter().map(move |e| format!("G_{}({}): {e}", r.0, r.1)))
            .collect()
    };
    let (d3, d4) = (collect(|r| &r.2), collect(|r| &r.3));
    let mut o3 = Outcome::new(d3.is_empty(), "isotropy types: j types, order 2, fix dim 2, class lengths and normalizers");
    o3.details = d3;
    let mut o4 = Outcome::new(d4.is_empty(), "normalizer action images 2 / {2m, 2} / 4, G_1 acts as -identity");
    o4.details = d4;
    (o3, o4)
}

fn c5_ize() -> Outcome {
    let bad: Vec<String> = all_series()
        .par_iter()
        .flat_map_iter(|&(j, m)| {
            let mut bad = vec![];
            let g = series(j, m).g;
            let v = ize_check(&g).expect("ize");
            if !v.verdict {
                bad.push(format!("G_{j}({m}) verdict false: {v:?}"));
            }
            let f = FamilySpec::new(Family::g(j).unwrap().f_of().unwrap(), m).unwrap().build().unwrap();
            let v = ize_check(&f).expect("ize");
            if v.verdict {
                bad.push(format!("F_{j}({m}) verdict true"));
            }
            bad
        })
        .collect();
    let mut o = Outcome::new(bad.is_empty(), "Ize verdict true for 30 G_j(m), false for 30 F_j(m)");
    o.details = bad;
    o
}

fn c6_j_partition() -> Outcome {
    let bad: Vec<String> = all_series()
        .par_iter()
        .filter_map(|&(j, m)| {
            let s = series(j, m);
            let p = j_commutation_partition(&s.g);
            let complement: Vec<usize> = (0..s.g.order()).filter(|&i| !s.f.contains(i)).collect();
            let ok = p.commuting == s.f.members() && p.anticommuting == complement && p.other.is_empty();
            (!ok).then(|| {
                format!(
                    "G_{j}({m}): {} commuting, {} anticommuting, {} other",
                    p.commuting.len(),
                    p.anticommuting.len(),
                    p.other.len()
                )
            })
        })
        .collect();
    let mut o = Outcome::new(bad.is_empty(), "J-partition: commuting = F_j(m), complement anticommutes");
    o.details = bad;
    o
}

fn c7_cross_checks() -> Outcome {
    let mut bad = vec![];
    let mut examined = 0usize;
    for (f, m) in [(Family::G1, 3), (Family::G3, 5)] {
        let g = FamilySpec::new(f, m).unwrap().build().unwrap();
        for x in g.elements() {
            if x.trace_char() != x.to_matrix().trace() {
                bad.push(format!("{f}({m}): trace_char differs from matrix trace"));
            }
        }
    }
    for (j, m) in [(1, 3), (2, 3), (3, 3), (1, 5), (2, 5), (3, 5)] {
        let s = series(j, m);
        let a = isotropy_types(&s.g).unwrap();
        let mut subs = vec![s.g.whole(), s.g.trivial_subgroup(), s.f.clone(), s.h.clone(), s.fc.clone()];
        for t in &a.types {
            subs.push(t.representative.clone());
            subs.push(t.normalizer.clone());
            subs.extend(t.class.iter().cloned());
        }
        for h in &subs {
            examined += 1;
            let by_char = fix_dimension(&s.g, h).unwrap() as usize;
            let by_lin = fix_space(&s.g, h).dim();
            if by_char != by_lin {
                bad.push(format!("G_{j}({m}): subgroup of order {} has fix dims {by_char} vs {by_lin}", h.order()));
            }
        }
    }
    let g = FamilySpec::new(Family::G1, 3).unwrap().build().unwrap();
    for x in g.elements() {
        let mut p = vec![];
        let mut y = x.clone();
        for _ in 0..4 {
            p.push(y.trace_char());
            y = y.compose(x);
        }
        for d in 2..=4 {
            if chi_d_from_powers(&p, d) != chi_d_closed_form(&p, d).unwrap() {
                bad.push(format!("chi_({d}) partition formula differs from closed form"));
            }
        }
    }
    let mut o = Outcome::new(
        bad.is_empty(),
        format!("trace_char = trace, fix dims by character = by linear algebra ({examined} subgroups), chi_(d) closed forms"),
    );
    o.details = bad;
    o
}

fn c8_order_two() -> Outcome {
    let bad: Vec<String> = all_series()
        .par_iter()
        .filter_map(|&(j, m)| {
            let s = series(j, m);
            let m_ = m as usize;
            let got = order_two_outside(&s.g, &s.g.whole(), &s.f);
            let want = match j {
                3 => 6 * m_,
                _ => 4 * m_,
            };
            let mut errs = vec![];
            if got != want {
                errs.push(format!("G_{j}({m}) minus F: {got} order-2 elements, expected {want}"));
            }
            if j == 2 {
                let got = order_two_outside(&s.g, &s.f, &s.h);
                if got != 4 {
                    errs.push(format!("F_2({m}) minus H: {got}, expected 4"));
                }
            }
            (!errs.is_empty()).then(|| errs.join("; "))
        })
        .collect();
    let mut o = Outcome::new(bad.is_empty(), "order-2 censuses 4m / 4 / 4m / 6m");
    o.details = bad;
    o
}

fn c9_dynamics() -> Outcome {
    let mut details = vec![];
    let mut pass = true;

    let mut worst_equiv: f64 = 0.0;
    for (j, m) in all_series() {
        let s = series(j, m);
        let coupling = Coupling::natural_for(s.spec.family);
        let c = CubicCoefficients { lambda: -0.7, c1: 1.3, c2: 0.45, c3: -0.8, coupling };
        let r = equivariance_residual(&c, &s.g, DEFAULT_SAMPLES);
        worst_equiv = worst_equiv.max(r.group_residual).max(r.s1_residual);
    }
    let ok = worst_equiv < RESIDUAL_TOL;
    pass &= ok;
    details.push(format!("equivariance residual {worst_equiv:.2e} over 30 groups ({})", verdict(ok)));

    let mut worst_res: f64 = 0.0;
    let mut worst_stated: f64 = 0.0;
    let mut worst_corrected: f64 = 0.0;
    let mut example = None;
    for j in 1..=3 {
        let spec = FamilySpec::new(Family::g(j).unwrap(), 3).unwrap();
        let coupling = Coupling::natural_for(spec.family);
        for c in admissible_coefficients(100, 9000 + j as u64, coupling) {
            let b = branch_and_jacobian(&c, &spec).expect("admissible");
            worst_res = worst_res.max(b.residual);
            worst_stated = worst_stated.max(b.stated_deviation);
            worst_corrected = worst_corrected.max(b.corrected_deviation.unwrap());
        }
        if j == 1 {
            let c = CubicCoefficients { lambda: -1.0, c1: 1.0, c2: 0.5, c3: 0.25, coupling };
            example = Some(branch_and_jacobian(&c, &spec).unwrap());
        }
    }
    let ok = worst_res < RESIDUAL_TOL;
    pass &= ok;
    details.push(format!("branch residual {worst_res:.2e} over 3 x 100 coefficient sets ({})", verdict(ok)));
    let ok = worst_stated < EIGEN_TOL;
    pass &= ok;
    details.push(format!(
        "eigenvalues vs {{lambda (1 - (c2 + c3) / c1), -2 lambda}}: max deviation {worst_stated:.3e} ({})",
        verdict(ok)
    ));
    if let Some(b) = example {
        details.push(format!(
            "  lambda = -1, c = (1, 0.5, 0.25) on G_1(3): eigenvalues {:?}, stated {:?}",
            b.jacobian_eigenvalues.map(|e| e[0]),
            b.stated_eigenvalues
        ));
    }
    details.push(format!(
        "  eigenvalues vs {{-lambda (c2 +- c3) / c1, -2 lambda}}: max deviation {worst_corrected:.3e} (informational)"
    ));

    let s = series(1, 3);
    let c = CubicCoefficients { lambda: -1.0, c1: 1.0, c2: 0.5, c3: 0.25, coupling: Coupling::Hamiltonian };
    let r = structure_checks(&c, &s.g, &s.f).unwrap();
    let ok = r.divergence_c3 < DIVERGENCE_TOL && r.c3_identity < IDENTITY_TOL;
    pass &= ok;
    details.push(format!(
        "Hamiltonian part divergence {:.2e}, J grad I42 identity {:.2e} ({})",
        r.divergence_c3,
        r.c3_identity,
        verdict(ok)
    ));
    let mut anti_ok = true;
    for (j, m) in [(1, 3), (2, 3), (1, 5), (2, 5)] {
        let s = series(j, m);
        let r = structure_checks(&c, &s.g, &s.f).unwrap();
        anti_ok &= r.i42_symmetry_exact && r.i42_symmetry_max == 0.0 && r.j_anticommutes;
    }
    pass &= anti_ok;
    details.push(format!("I42 anti-invariance on the coset exactly zero at the probes ({})", verdict(anti_ok)));

    let mut o = Outcome::new(pass, "dynamics: equivariance, branch, Jacobian eigenvalues, Hamiltonian structure");
    o.details = details;
    o
}

fn c10_user_generators() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/g1_3.json");
    let text = std::fs::read_to_string(path).expect("generator file");
    let file: GeneratorFile = serde_json::from_str(&text).expect("generator file parses");
    let g = file.build().expect("closure");
    let v = ize_check(&g).expect("ize");
    let reference = series(1, 3).g;
    let same = g.order() == reference.order() && reference.locate(&g).is_ok();
    let mut o = Outcome::new(
        v.verdict && same,
        "ize_check on a user-supplied generator file (G_1(3) example); catalogue scans excluded",
    );
    o.details.push(format!("order {}, verdict {}, fix dims {:?}", g.order(), v.verdict, v.fix_dims));
    o
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn main() {
    let start = Instant::now();
    let mut outcomes: BTreeMap<u32, Outcome> = BTreeMap::new();
    outcomes.insert(1, c1_orders());
    outcomes.insert(2, c2_tables());
    let (o3, o4) = c3_c4_isotropy();
    outcomes.insert(3, o3);
    outcomes.insert(4, o4);
    outcomes.insert(5, c5_ize());
    outcomes.insert(6, c6_j_partition());
    outcomes.insert(7, c7_cross_checks());
    outcomes.insert(8, c8_order_two());
    outcomes.insert(9, c9_dynamics());
    outcomes.insert(10, c10_user_generators());

    let mut failed = 0;
    for (k, o) in &outcomes {
        println!("{} criterion {k:>2}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("      {d}");
        }
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
