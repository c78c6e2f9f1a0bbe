//! The aggregated verification run: all counting methods, the per-region
//! contribution table, the Euler sums, and the per-tree geometric pipeline,
//! condensed into one serializable report.

use std::time::Instant;

use serde::Serialize;

use crate::bernardi::{bernardi_count, region_contributions};
use crate::contrib::all_tree_reports;
use crate::geometry::{catalan_faces_by_region, enumerate_regions, euler_sum};
use crate::oracle::regions_via_zaslavsky;
use crate::spec::OffsetSpec;
use crate::Result;

/// Region counts by the three independent methods. Large values are decimal
/// strings so the JSON schema is stable regardless of magnitude.
#[derive(Debug, Clone, Serialize)]
pub struct Counts {
    pub bernardi: String,
    pub geometric: String,
    pub zaslavsky: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub count_ms: u128,
    pub geometry_ms: u128,
    pub oracle_ms: u128,
    pub contributions_ms: u128,
}

/// One full verification run over a spec.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub spec: String,
    pub counts: Counts,
    pub counts_agree: bool,
    pub regions: usize,
    pub boxed_trees: u64,
    pub all_region_contributions_one: bool,
    pub all_euler_contributions_one: bool,
    pub trees: usize,
    pub all_tree_contributions_agree: bool,
    pub pass: bool,
    pub timings: Timings,
}

impl RunReport {
    /// Zero the timings; used to compare reports across runs.
    pub fn normalized(mut self) -> Self {
        self.timings = Timings {
            count_ms: 0,
            geometry_ms: 0,
            oracle_ms: 0,
            contributions_ms: 0,
        };
        self
    }
}

/// Run every verification the artifact offers against one spec.
pub fn build_report(spec: &OffsetSpec) -> Result<RunReport> {
    let t0 = Instant::now();
    let signed = bernardi_count(spec)?;
    let count_ms = t0.elapsed().as_millis();

    let t0 = Instant::now();
    let regions = enumerate_regions(spec);
    let rows = region_contributions(spec)?;
    let all_region_contributions_one = rows.iter().all(|r| r.contribution == 1);
    let face_map = catalan_faces_by_region(spec)?;
    let all_euler_contributions_one = face_map.len() == regions.len()
        && face_map.values().all(|fs| euler_sum(spec.n(), fs) == 1);
    let geometry_ms = t0.elapsed().as_millis();

    let t0 = Instant::now();
    let zas = regions_via_zaslavsky(spec)?;
    let oracle_ms = t0.elapsed().as_millis();

    let t0 = Instant::now();
    let tree_rows = all_tree_reports(spec)?;
    let all_tree_contributions_agree = tree_rows
        .iter()
        .all(|r| r.w_geometric == r.w_boxing && (-1..=1).contains(&r.w_geometric));
    let contributions_ms = t0.elapsed().as_millis();

    let counts = Counts {
        bernardi: signed.value.to_string(),
        geometric: regions.len().to_string(),
        zaslavsky: zas.to_string(),
    };
    let counts_agree = counts.bernardi == counts.geometric && counts.geometric == counts.zaslavsky;
    let pass = counts_agree
        && all_region_contributions_one
        && all_euler_contributions_one
        && all_tree_contributions_agree;
    Ok(RunReport {
        spec: spec.summary(),
        counts,
        counts_agree,
        regions: regions.len(),
        boxed_trees: signed.terms,
        all_region_contributions_one,
        all_euler_contributions_one,
        trees: tree_rows.len(),
        all_tree_contributions_agree,
        pass,
        timings: Timings {
            count_ms,
            geometry_ms,
            oracle_ms,
            contributions_ms,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{preset, Preset};

    #[test]
    fn braid_n3_report_passes() {
        let spec = preset(Preset::Braid, 3).unwrap();
        let report = build_report(&spec).unwrap();
        assert!(report.pass);
        assert_eq!(report.counts.bernardi, "6");
        assert_eq!(report.regions, 6);
    }

    #[test]
    fn normalized_report_json_is_stable() {
        let spec = preset(Preset::Braid, 2).unwrap();
        let a = serde_json::to_string(&build_report(&spec).unwrap().normalized()).unwrap();
        let b = serde_json::to_string(&build_report(&spec).unwrap().normalized()).unwrap();
        assert_eq!(a, b);
        let expect = concat!(
            r#"{"spec":"n=2, m=0, 1 hyperplanes","counts":{"bernardi":"2","geometric":"2","zaslavsky":"2"},"#,
            r#""counts_agree":true,"regions":2,"boxed_trees":2,"all_region_contributions_one":true,"#,
            r#""all_euler_contributions_one":true,"trees":2,"all_tree_contributions_agree":true,"pass":true,"#,
            r#""timings":{"count_ms":0,"geometry_ms":0,"oracle_ms":0,"contributions_ms":0}}"#
        );
        assert_eq!(a, expect);
    }
}
