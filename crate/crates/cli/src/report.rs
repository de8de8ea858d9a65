//! JSON report assembly: named exact bounds, optional certificates and the
//! family report. Rationals are serialized as decimal num/den strings and
//! a `"num/den"` display form; no value ever passes through floating point.

use crate::CliError;
use icx_core::code::CodeCertificate;
use icx_core::family::FamilyReport;
use icx_core::graph::SideInfoGraph;
use icx_core::lps::{self, BoundValue, BoundsError, FamilyPolicy, SubsetFamily};
use icx_core::oracles::{self, OracleLimits};
use icx_core::gic;
use icx_core::rat::{rint, Rat};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct GraphMeta {
    pub n: usize,
    pub arcs: usize,
    pub undirected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundJson {
    pub value: String,
    pub num: String,
    pub den: String,
    pub family_restricted: bool,
}

impl BoundJson {
    pub fn from_rat(r: &Rat, restricted: bool) -> Self {
        BoundJson {
            value: r.to_string(),
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            family_restricted: restricted,
        }
    }

    fn from_bound(b: &BoundValue) -> Self {
        Self::from_rat(&b.value, b.family_restricted)
    }

    fn from_int(v: usize) -> Self {
        Self::from_rat(&rint(v as i64), false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub graph: GraphMeta,
    pub bounds: BTreeMap<String, BoundJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CodeCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_report: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl BoundsReport {
    pub fn new(g: &SideInfoGraph, seed: u64, with_timings: bool) -> Self {
        BoundsReport {
            tool: "icx".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            graph: GraphMeta { n: g.n(), arcs: g.arc_count(), undirected: g.is_undirected() },
            bounds: BTreeMap::new(),
            certificates: Vec::new(),
            family_report: None,
            timings_ms: if with_timings { Some(BTreeMap::new()) } else { None },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Knobs shared by `bounds` and `report`.
pub struct BoundOptions {
    pub limits: OracleLimits,
    pub max_subset_size: Option<usize>,
    pub depth_cap: usize,

    /// Extra GIC structures supplied by the user, used by the `gic` bound.
    pub gic_candidates: Vec<gic::GicStructure>,
}

fn family_policy(opts: &BoundOptions) -> FamilyPolicy {
    match opts.max_subset_size {
        Some(s) => FamilyPolicy::MaxSize(s),
        None => FamilyPolicy::Auto,
    }
}

fn subset_family(g: &SideInfoGraph, opts: &BoundOptions) -> Result<SubsetFamily, BoundsError> {
    match opts.max_subset_size {
        Some(s) => SubsetFamily::with_max_size(g, s, &opts.limits),
        None => SubsetFamily::default_for(g, &opts.limits),
    }
}

/// Computes one named bound. Unknown names are input errors.
pub fn compute_bound(
    g: &SideInfoGraph,
    name: &str,
    opts: &BoundOptions,
) -> Result<BoundJson, CliError> {
    let b = |r: Result<BoundValue, BoundsError>| -> Result<BoundJson, CliError> {
        Ok(BoundJson::from_bound(&r.map_err(CliError::from_bounds)?))
    };
    match name {
        "alpha" => Ok(BoundJson::from_int(
            oracles::independence_number(g, &opts.limits).map_err(CliError::from_oracle)?,
        )),
        "mais" => Ok(BoundJson::from_int(
            oracles::mais(g, &opts.limits).map_err(CliError::from_oracle)?,
        )),
        "minrank2" => Ok(BoundJson::from_int(
            oracles::minrank_gf2(g, &opts.limits).map_err(CliError::from_oracle)?,
        )),
        "chi" => Ok(BoundJson::from_int(
            oracles::chromatic_number(g, &opts.limits).map_err(CliError::from_oracle)?,
        )),
        "omega" => Ok(BoundJson::from_int(
            oracles::clique_number(g, &opts.limits).map_err(CliError::from_oracle)?,
        )),
        "fvc" => b(lps::fvc(g)),
        "fmm" => b(lps::fmm(g)),
        "fcp" => {
            let fam = oracles::enumerate_cliques(g, None, &opts.limits)
                .map_err(CliError::from_oracle)?;
            b(lps::fcp(g, &fam))
        }
        "fcc" => {
            let fam = oracles::enumerate_cliques(g, None, &opts.limits)
                .map_err(CliError::from_oracle)?;
            b(lps::fcc(g, &fam))
        }
        "fpcc" => {
            let fam = subset_family(g, opts).map_err(CliError::from_bounds)?;
            b(lps::fractional_partial_clique_cover(g, &fam))
        }
        "flc" => {
            let fam = oracles::enumerate_cliques(g, None, &opts.limits)
                .map_err(CliError::from_oracle)?;
            b(lps::fractional_local_chromatic(g, &fam))
        }
        "lp" => {
            let fam = subset_family(g, opts).map_err(CliError::from_bounds)?;
            b(lps::local_partial_lp(g, &fam))
        }
        "recursive" => b(lps::recursive_lp(g, family_policy(opts), opts.depth_cap, &opts.limits)),
        "gic" => {
            let mut candidates = opts.gic_candidates.clone();
            if let Some(s) = gic::whole_graph_gic(g) {
                candidates.push(s);
            }
            let bound = gic::gic_cover_bound(g, &candidates).map_err(CliError::from_gic)?;
            Ok(BoundJson::from_bound(&bound))
        }
        other if other.starts_with("alphaf") => {
            let k: usize = other[6..]
                .parse()
                .map_err(|_| CliError::Input(format!("unknown bound name '{other}'")))?;
            if k < 2 {
                return Err(CliError::Input("alphaf needs k >= 2".to_string()));
            }
            b(lps::alpha_fk(g, k, &opts.limits))
        }
        other => Err(CliError::Input(format!("unknown bound name '{other}'"))),
    }
}

/// Fills the report with every requested bound, timing each stage.
pub fn compute_bounds_into(
    report: &mut BoundsReport,
    g: &SideInfoGraph,
    names: &[String],
    opts: &BoundOptions,
) -> Result<(), CliError> {
    for name in names {
        let start = Instant::now();
        let bound = compute_bound(g, name, opts)?;
        let elapsed = start.elapsed().as_millis();
        report.bounds.insert(name.clone(), bound);
        if let Some(t) = report.timings_ms.as_mut() {
            t.insert(name.clone(), elapsed);
        }
    }
    Ok(())
}

/// `report` default bound list, filtered by graph type.
pub fn default_bound_names(g: &SideInfoGraph) -> Vec<String> {
    let mut names = vec!["alpha", "mais", "fcp", "fcc", "fpcc", "flc", "lp"];
    if g.is_undirected() {
        names.extend_from_slice(&["fvc", "fmm", "alphaf2", "chi", "omega"]);
    }
    names.into_iter().map(String::from).collect()
}
