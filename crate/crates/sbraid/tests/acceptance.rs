//! End-to-end acceptance suite. Each criterion prints exactly one
//! `criterion N ...: pass` / `... FAIL` line (run with `--nocapture` to see
//! them on success).

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num::BigInt;
use rayon::prelude::*;

use sbraid::bernardi::{bernardi_count, region_contributions};
use sbraid::contrib::{
    bounded_embedding, circular_components, classify_supports, p_t_set, surviving_faces, tau,
    tree_contribution_report, w_interval_family, y_transform, PhiTable,
};
use sbraid::geometry::{
    catalan_faces_by_region, enumerate_faces, enumerate_regions, euler_sum, face_to_marked_tree,
    region_to_tree,
};
use sbraid::oracle::{acyclic_orientations, admissible_primes, char_poly, count_points_mod_q};
use sbraid::spec::{pairs, preset, OffsetSpec, Preset};
use sbraid::trees::{
    enumerate_markings, enumerate_trees, is_s_cadet_sequence, marking_to_boxing, tree_count,
    PlaneTree,
};

/// Print the single verdict line for a criterion and fail the test on error.
fn verdict(label: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("{label}: pass"),
        Err(msg) => {
            println!("{label}: FAIL — {msg}");
            panic!("{label}: {msg}");
        }
    }
}

fn check(cond: bool, msg: impl Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Deterministic xorshift64* generator, so the "random" specs are stable.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    fn below(&mut self, k: u64) -> u64 {
        self.next() % k
    }
}

/// Ten fixed pseudo-random specs with n <= 4 and offsets in [-2..2].
fn random_specs() -> Vec<(String, OffsetSpec)> {
    let mut rng = Rng(0x9e37_79b9_7f4a_7c15);
    let mut out = Vec::new();
    while out.len() < 10 {
        let n = 2 + rng.below(3) as usize;
        let mut map: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
        for (a, b) in pairs(n) {
            let mut offsets = Vec::new();
            for s in -2i64..=2 {
                if rng.below(3) == 0 {
                    offsets.push(s);
                }
            }
            if !offsets.is_empty() {
                map.insert((a, b), offsets);
            }
        }
        if map.is_empty() {
            continue;
        }
        let spec = OffsetSpec::new(n, &map).expect("generated spec is well formed");
        out.push((format!("random-{}", out.len() + 1), spec));
    }
    out
}

/// The named specs of the agreement suite, with closed-form expected counts
/// where one exists.
fn named_specs() -> Vec<(String, OffsetSpec, Option<i64>)> {
    let mut out = Vec::new();
    for (n, expect) in [(2usize, 3i64), (3, 16), (4, 125)] {
        out.push((format!("shi n={n}"), preset(Preset::Shi, n).unwrap(), Some(expect)));
    }
    // linial counts are the alternating-tree numbers
    // 2^-n * sum_k C(n,k) (k+1)^(n-1): 2, 7, 36
    for (n, expect) in [(2usize, 2i64), (3, 7), (4, 36)] {
        out.push((format!("linial n={n}"), preset(Preset::Linial, n).unwrap(), Some(expect)));
    }
    for (n, expect) in [(2usize, 3i64), (3, 19)] {
        out.push((
            format!("semiorder n={n}"),
            preset(Preset::Semiorder, n).unwrap(),
            Some(expect),
        ));
    }
    for n in [2usize, 3] {
        // the Catalan count equals the tree count
        out.push((
            format!("catalan(2) n={n}"),
            preset(Preset::Catalan(2), n).unwrap(),
            Some(tree_count(n as u64, 2) as i64),
        ));
    }
    out
}

/// Every spec exercised by the agreement suite (named + random).
fn agreement_specs() -> Vec<(String, OffsetSpec)> {
    let mut out: Vec<(String, OffsetSpec)> = named_specs()
        .into_iter()
        .map(|(name, spec, _)| (name, spec))
        .collect();
    out.extend(random_specs());
    out
}

/// The five test graphs: a path, a cycle, K_4, and two fixed scrambles.
fn five_graphs() -> Vec<(String, usize, Vec<(usize, usize)>)> {
    vec![
        ("path P_5".into(), 5, vec![(1, 2), (2, 3), (3, 4), (4, 5)]),
        ("cycle C_5".into(), 5, vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]),
        (
            "K_4".into(),
            4,
            vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        ),
        (
            "graph A".into(),
            5,
            vec![(1, 2), (1, 4), (2, 5), (3, 4), (4, 5)],
        ),
        (
            "graph B".into(),
            5,
            vec![(1, 3), (1, 5), (2, 3), (2, 4), (3, 5), (4, 5)],
        ),
    ]
}

fn graphical_spec(n: usize, edges: &[(usize, usize)]) -> OffsetSpec {
    let map: BTreeMap<(usize, usize), Vec<i64>> =
        edges.iter().map(|&(a, b)| ((a, b), vec![0])).collect();
    OffsetSpec::new(n, &map).expect("graph edges form a valid spec")
}

/// Signed-count agreement for one spec: signed sum = geometric enumeration =
/// finite-field count. Returns the agreed count.
fn three_way_count(name: &str, spec: &OffsetSpec) -> Result<BigInt, String> {
    let start = Instant::now();
    let signed = bernardi_count(spec).map_err(err)?.value;
    let geometric = BigInt::from(enumerate_regions(spec).len());
    let zaslavsky = sbraid::oracle::regions_via_zaslavsky(spec).map_err(err)?;
    let elapsed = start.elapsed();
    check(
        signed == geometric && geometric == zaslavsky,
        || format!("{name}: counts disagree (signed {signed}, geometric {geometric}, finite-field {zaslavsky})"),
    )?;
    check(elapsed.as_secs() < 60, || {
        format!("{name}: three-way check took {elapsed:?} (limit 60 s)")
    })?;
    Ok(signed)
}

#[test]
fn criterion_1_signed_count_closed_forms() {
    let body = || -> Result<(), String> {
        for (n, expect) in [(2usize, 2i64), (3, 6), (4, 24), (5, 120)] {
            let spec = preset(Preset::Braid, n).map_err(err)?;
            let got = bernardi_count(&spec).map_err(err)?.value;
            check(got == BigInt::from(expect), || {
                format!("braid n={n}: signed count {got}, expected {expect}")
            })?;
        }
        for (n, expect) in [(1usize, 1i64), (2, 4), (3, 30), (4, 336)] {
            let spec = preset(Preset::Catalan(1), n).map_err(err)?;
            let got = bernardi_count(&spec).map_err(err)?.value;
            check(got == BigInt::from(expect), || {
                format!("catalan(1) n={n}: signed count {got}, expected {expect}")
            })?;
        }
        Ok(())
    };
    verdict("criterion 1 (signed count matches closed forms)", body());
}

#[test]
fn criterion_2_three_way_agreement() {
    let body = || -> Result<(), String> {
        for (name, spec, expect) in named_specs() {
            let got = three_way_count(&name, &spec)?;
            if let Some(e) = expect {
                check(got == BigInt::from(e), || {
                    format!("{name}: agreed count {got}, expected {e}")
                })?;
            }
        }
        for (name, spec) in random_specs() {
            three_way_count(&name, &spec)?;
        }
        Ok(())
    };
    verdict("criterion 2 (three-way count agreement)", body());
}

#[test]
fn criterion_3_every_region_contributes_one() {
    let body = || -> Result<(), String> {
        let mut specs = agreement_specs();
        for (name, n, edges) in five_graphs() {
            specs.push((name, graphical_spec(n, &edges)));
        }
        for (name, spec) in specs {
            let rows = region_contributions(&spec).map_err(err)?;
            for row in &rows {
                check(row.contribution == 1, || {
                    format!(
                        "{name}: region {:?} contributes {}",
                        row.region.key, row.contribution
                    )
                })?;
            }
            let faces = catalan_faces_by_region(&spec).map_err(err)?;
            check(faces.len() == rows.len(), || {
                format!(
                    "{name}: face map covers {} regions, expected {}",
                    faces.len(),
                    rows.len()
                )
            })?;
            for (key, list) in &faces {
                let euler = euler_sum(spec.n(), list);
                check(euler == 1, || {
                    format!("{name}: region {key:?} has signed face sum {euler}")
                })?;
            }
        }
        Ok(())
    };
    verdict("criterion 3 (per-region contribution and signed face sum are 1)", body());
}

#[test]
fn criterion_4_bijections() {
    let body = || -> Result<(), String> {
        let mut cases: Vec<(usize, i64)> = Vec::new();
        for n in 1..=3usize {
            for m in 0..=2i64 {
                cases.push((n, m));
            }
        }
        cases.push((4, 1));
        for (n, m) in cases {
            let label = format!("n={n}, m={m}");
            let catalan = preset(Preset::Catalan(m), n).map_err(err)?;
            let regions = enumerate_regions(&catalan);
            check(regions.len() as u64 == tree_count(n as u64, m as u64), || {
                format!(
                    "{label}: {} regions, expected {}",
                    regions.len(),
                    tree_count(n as u64, m as u64)
                )
            })?;
            let mut image: BTreeSet<String> = BTreeSet::new();
            for r in &regions {
                let tree = region_to_tree(m, &r.witness).map_err(err)?;
                check(image.insert(tree.encode()), || {
                    format!("{label}: tree {} hit by two regions", tree.encode())
                })?;
            }
            let all_trees: BTreeSet<String> =
                enumerate_trees(n, m).iter().map(|t| t.encode()).collect();
            check(image == all_trees, || {
                format!("{label}: region-to-tree image misses some trees")
            })?;

            // faces against valid marked trees, and dim(face) = |B|
            let faces = enumerate_faces(&catalan);
            let mut face_image: BTreeSet<(String, Vec<(usize, usize)>)> = BTreeSet::new();
            for f in &faces {
                let mt = face_to_marked_tree(m, &f.witness).map_err(err)?;
                let boxed = marking_to_boxing(&mt);
                check(f.dim == boxed.box_count(), || {
                    format!(
                        "{label}: face of dim {} maps to a {}-box tree",
                        f.dim,
                        boxed.box_count()
                    )
                })?;
                let key = (mt.tree.encode(), mt.marked.iter().copied().collect());
                check(face_image.insert(key), || {
                    format!("{label}: marked tree hit by two faces")
                })?;
            }
            let mut all_marked: BTreeSet<(String, Vec<(usize, usize)>)> = BTreeSet::new();
            for t in enumerate_trees(n, m) {
                for mt in enumerate_markings(&t) {
                    all_marked.insert((mt.tree.encode(), mt.marked.iter().copied().collect()));
                }
            }
            check(face_image == all_marked, || {
                format!("{label}: face image differs from the valid marked trees")
            })?;
        }
        Ok(())
    };
    verdict("criterion 4 (region/face bijections, dim = box count)", body());
}

/// All sequences of k distinct labels from 1..=n, for every k >= 1.
fn distinct_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == n {
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

#[test]
fn criterion_5_graphical_cadet_sequences() {
    let body = || -> Result<(), String> {
        for (name, n, edges) in five_graphs() {
            let spec = graphical_spec(n, &edges);
            let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
            for seq in distinct_sequences(n) {
                // embed the sequence as the top of a label chain
                let mut order = seq.clone();
                for v in 1..=n {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                }
                let chain = PlaneTree::chain(&order).map_err(err)?;
                let got = is_s_cadet_sequence(&spec, &chain, &seq).map_err(err)?;
                let expect = seq.windows(2).all(|w| w[0] < w[1])
                    && seq.iter().enumerate().all(|(i, &u)| {
                        seq[i + 1..]
                            .iter()
                            .all(|&v| !edge_set.contains(&(u.min(v), u.max(v))))
                    });
                check(got == expect, || {
                    format!("{name}: sequence {seq:?} classified {got}, expected {expect}")
                })?;
            }
            let count = bernardi_count(&spec).map_err(err)?.value;
            let orientations = acyclic_orientations(n, &edges);
            check(count == BigInt::from(orientations), || {
                format!("{name}: signed count {count}, acyclic orientations {orientations}")
            })?;
        }
        Ok(())
    };
    verdict("criterion 5 (graphical cadet-sequence law, orientation counts)", body());
}

#[test]
fn criterion_6_per_tree_geometry() {
    let body = || -> Result<(), String> {
        for (name, spec) in agreement_specs() {
            let n = spec.n();
            let m = spec.max_offset();
            let table = PhiTable::build(n, m).map_err(err)?;
            let trees = enumerate_trees(n, m);
            trees
                .par_iter()
                .map(|tree| -> Result<(), String> {
                    let report = tree_contribution_report(&spec, tree, &table).map_err(err)?;
                    check((-1..=1).contains(&report.w_boxing), || {
                        format!(
                            "{name}: tree {} has boxing sum {}",
                            tree.encode(),
                            report.w_boxing
                        )
                    })?;
                    check(report.w_geometric == report.w_boxing, || {
                        format!(
                            "{name}: tree {} geometric {} vs boxing {}",
                            tree.encode(),
                            report.w_geometric,
                            report.w_boxing
                        )
                    })?;
                    if n == 1 {
                        return Ok(());
                    }
                    // the equality sets of the surviving faces are exactly the
                    // interval-free proper subsets
                    let emb = bounded_embedding(tree, &table).map_err(err)?;
                    let class = classify_supports(&spec, &emb.region).map_err(err)?;
                    let yt = y_transform(&emb.region.witness).map_err(err)?;
                    let surviving = surviving_faces(&emb.region, &class.h_s()).map_err(err)?;
                    let taus: BTreeSet<BTreeSet<usize>> = surviving
                        .iter()
                        .map(|f| tau(&yt, &f.witness))
                        .collect();
                    let expect = p_t_set(n, &report.intervals);
                    check(
                        taus == expect && surviving.len() == expect.len(),
                        || {
                            format!(
                                "{name}: tree {} surviving-face equality sets differ from the interval-free subsets",
                                tree.encode()
                            )
                        },
                    )
                })
                .collect::<Result<(), String>>()?;
        }

        // a family of one interval J contributes (-1)^(|J|+1)
        for k in 1..=5usize {
            let j: BTreeSet<usize> = (1..=k).collect();
            let w = w_interval_family(&j, &[j.clone()]).map_err(err)?;
            let expect = if k % 2 == 0 { -1 } else { 1 };
            check(w == expect, || {
                format!("single interval of size {k}: w = {w}, expected {expect}")
            })?;
        }

        // circular component fixture on 8 vertices
        let intervals: Vec<BTreeSet<usize>> = [
            vec![1, 2],
            vec![2, 3],
            vec![4, 5],
            vec![6],
            vec![8, 1],
        ]
        .iter()
        .map(|v| v.iter().copied().collect())
        .collect();
        let (components, uncovered) = circular_components(8, &intervals);
        let expect_components: Vec<BTreeSet<usize>> = [
            vec![1, 2, 3, 8],
            vec![4, 5],
            vec![6],
        ]
        .iter()
        .map(|v| v.iter().copied().collect())
        .collect();
        check(components == expect_components, || {
            format!("circular components {components:?}")
        })?;
        check(uncovered == BTreeSet::from([7]), || {
            format!("uncovered vertices {uncovered:?}")
        })?;
        Ok(())
    };
    verdict("criterion 6 (per-tree geometric contribution suite)", body());
}

#[test]
fn criterion_7_held_out_prime() {
    let body = || -> Result<(), String> {
        let mut specs = agreement_specs();
        for (name, n, edges) in five_graphs() {
            specs.push((name, graphical_spec(n, &edges)));
        }
        for (name, spec) in specs {
            let n = spec.n();
            // char_poly already cross-checks at one held-out prime; verify
            // an additional one explicitly
            let poly = char_poly(&spec).map_err(|e| format!("{name}: {e}"))?;
            let q = *admissible_primes(&spec, n + 3).last().unwrap();
            let predicted = poly.eval(&BigInt::from(q));
            let counted = count_points_mod_q(&spec, q).map_err(err)?;
            check(predicted == counted, || {
                format!("{name}: polynomial predicts {predicted} points mod {q}, counted {counted}")
            })?;
        }
        Ok(())
    };
    verdict("criterion 7 (finite-field counts match at held-out primes)", body());
}
