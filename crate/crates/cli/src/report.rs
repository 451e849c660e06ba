use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use so4sym::cyclo::CycloNumber;
use so4sym::group::{FiniteRotationGroup, GeneratorFile};
use so4sym::invariants::DegreeCountTable;
use so4sym::isotropy::{fix_dimensions_agree, isotropy_types, ize_from, IzeVerdict, NormalizerAction};
use so4sym::quat::RotationElement;
use so4sym::rep::commutant_dimension;
use so4sym::series::{j_commutation_partition, FamilySpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const INVARIANT_DEGREES: [usize; 4] = [2, 4, 6, 8];
pub const EQUIVARIANT_DEGREES: [usize; 3] = [1, 3, 5];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDescriptor {
    Family { family: String, m: u32, name: String },
    File { path: String },
}

/// A group together with where it came from.
pub struct Source {
    pub descriptor: GroupDescriptor,
    pub group: FiniteRotationGroup,
}

impl Source {
    pub fn from_family(spec: FamilySpec) -> Result<Source> {
        let group = spec.build().with_context(|| format!("building {spec}"))?;
        Ok(Source {
            descriptor: GroupDescriptor::Family {
                family: spec.family.name().to_string(),
                m: spec.m,
                name: spec.to_string(),
            },
            group,
        })
    }

    pub fn from_file(path: &Path) -> Result<Source> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: GeneratorFile =
            serde_json::from_str(&text).with_context(|| format!("parsing generator file {}", path.display()))?;
        let group = file.build().with_context(|| format!("building the group of {}", path.display()))?;
        Ok(Source {
            descriptor: GroupDescriptor::File {
                path: path.display().to_string(),
            },
            group,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyTypeReport {
    pub representative_order: usize,
    /// Element indices into the group's element list.
    pub representative: Vec<usize>,
    pub elements: Vec<RotationElement>,
    pub fix_dim: usize,
    pub fix_basis: Vec<[CycloNumber; 4]>,
    pub fix_basis_f64: Vec<[f64; 4]>,
    pub class_length: usize,
    pub normalizer_order: usize,
    pub action: NormalizerAction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyReport {
    pub principal_order: usize,
    pub principal_fix_dim: usize,
    pub lattice_size: usize,
    pub lattice_has_zero: bool,
    pub fix_dims_by_character_agree: bool,
    pub types: Vec<IsotropyTypeReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JPartitionSummary {
    pub commuting: usize,
    pub anticommuting: usize,
    pub other: usize,
    pub commuting_is_index_two: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub closure_ms: f64,
    pub isotropy_ms: f64,
    pub counts_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: u32,
    pub group: GroupDescriptor,
    pub field_order: u32,
    pub order: usize,
    pub generators: Vec<RotationElement>,
    pub class_sizes: Vec<usize>,
    pub center_order: usize,
    pub commutant_dimension: u64,
    pub absolutely_irreducible: bool,
    pub isotropy: IsotropyReport,
    pub j_partition: JPartitionSummary,
    pub degree_counts: DegreeCountTable,
    pub ize: IzeVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(source: &Source, closure_ms: f64, timing: bool) -> Result<AnalysisReport> {
    let start = Instant::now();
    let g = &source.group;
    let analysis = isotropy_types(g)?;
    let isotropy_ms = ms(start);
    let types = analysis
        .types
        .iter()
        .map(|t| IsotropyTypeReport {
            representative_order: t.representative.order(),
            representative: t.representative.members().to_vec(),
            elements: t.representative.members().iter().map(|&i| g.element(i).clone()).collect(),
            fix_dim: t.fix_dim,
            fix_basis: t.fix.basis().to_vec(),
            fix_basis_f64: t.fix.to_f64(),
            class_length: t.class_length,
            normalizer_order: t.normalizer_order(),
            action: t.action.clone(),
        })
        .collect();
    let isotropy = IsotropyReport {
        principal_order: analysis.principal.order(),
        principal_fix_dim: analysis.principal_fix_dim,
        lattice_size: analysis.lattice_size,
        lattice_has_zero: analysis.lattice_has_zero,
        fix_dims_by_character_agree: fix_dimensions_agree(g, &analysis)?,
        types,
    };
    let ize = ize_from(g, &analysis)?;
    let p = j_commutation_partition(g);
    let j_partition = JPartitionSummary {
        commuting: p.commuting.len(),
        anticommuting: p.anticommuting.len(),
        other: p.other.len(),
        commuting_is_index_two: 2 * p.commuting.len() == g.order() && g.is_subgroup(&p.commuting),
    };
    let counts_start = Instant::now();
    let name = match &source.descriptor {
        GroupDescriptor::Family { name, .. } => name.clone(),
        GroupDescriptor::File { path } => path.clone(),
    };
    let degree_counts = DegreeCountTable::compute(&name, g, &INVARIANT_DEGREES, &EQUIVARIANT_DEGREES)?;
    let counts_ms = ms(counts_start);
    let mut class_sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
    class_sizes.sort_unstable();
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        group: source.descriptor.clone(),
        field_order: g.field().order(),
        order: g.order(),
        generators: g.generators().to_vec(),
        class_sizes,
        center_order: g.center().order(),
        commutant_dimension: commutant_dimension(g)?,
        absolutely_irreducible: ize.absolutely_irreducible,
        isotropy,
        j_partition,
        degree_counts,
        ize,
        timing: timing.then(|| Timing {
            closure_ms,
            isotropy_ms,
            counts_ms,
            total_ms: closure_ms + ms(start),
        }),
    })
}

pub fn print_analysis(r: &AnalysisReport) {
    let name = match &r.group {
        GroupDescriptor::Family { name, .. } => name.clone(),
        GroupDescriptor::File { path } => format!("group from {path}"),
    };
    println!("{name}: order {}, field Q(zeta_{})", r.order, r.field_order);
    println!("  conjugacy classes: {} (sizes {:?})", r.class_sizes.len(), r.class_sizes);
    println!("  center order: {}", r.center_order);
    println!(
        "  commutant dimension: {} (absolutely irreducible: {})",
        r.commutant_dimension, r.absolutely_irreducible
    );
    println!(
        "  J-partition: {} commuting, {} anticommuting, {} other",
        r.j_partition.commuting, r.j_partition.anticommuting, r.j_partition.other
    );
    println!(
        "  isotropy types: {} (principal isotropy order {}, fixed-space lattice of {} spaces)",
        r.isotropy.types.len(),
        r.isotropy.principal_order,
        r.isotropy.lattice_size
    );
    for (k, t) in r.isotropy.types.iter().enumerate() {
        println!(
            "    {}: order {}, dim Fix {}, class length {}, normalizer order {}, N/H acts with image of order {}{}",
            k + 1,
            t.representative_order,
            t.fix_dim,
            t.class_length,
            t.normalizer_order,
            t.action.image_order,
            if t.action.acts_as_minus_identity { " (as -1)" } else { "" }
        );
    }
    let inv: Vec<String> = r.degree_counts.invariants.iter().map(|(d, c)| format!("c_{d} = {c}")).collect();
    let eq: Vec<String> = r.degree_counts.equivariants.iter().map(|(d, c)| format!("C_{d} = {c}")).collect();
    println!("  invariants: {}", inv.join(", "));
    println!("  equivariants: {}", eq.join(", "));
    println!(
        "  Ize verdict: {} (fix dimensions {:?})",
        r.ize.verdict, r.ize.fix_dims
    );
    if let Some(t) = r.timing {
        println!(
            "  timing: closure {:.1} ms, isotropy {:.1} ms, counts {:.1} ms, total {:.1} ms",
            t.closure_ms, t.isotropy_ms, t.counts_ms, t.total_ms
        );
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IzeReport {
    pub schema: u32,
    pub group: GroupDescriptor,
    pub order: usize,
    pub ize: IzeVerdict,
    /// `(order, fix_dim, class_length)` for each isotropy type.
    pub witnesses: Vec<(usize, usize, usize)>,
}

pub fn ize_report(source: &Source) -> Result<IzeReport> {
    let g = &source.group;
    let analysis = isotropy_types(g)?;
    Ok(IzeReport {
        schema: SCHEMA_VERSION,
        group: source.descriptor.clone(),
        order: g.order(),
        ize: ize_from(g, &analysis)?,
        witnesses: analysis
            .types
            .iter()
            .map(|t| (t.representative.order(), t.fix_dim, t.class_length))
            .collect(),
    })
}
