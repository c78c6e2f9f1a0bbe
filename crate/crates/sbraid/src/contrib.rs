//! Geometric computation of a tree's contribution: classify the hyperplanes
//! supporting the tree's region, re-embed the region so it is relatively
//! bounded, apply the y-coordinate transformation, read off circular interval
//! tuples, and evaluate the product formula over circular connected
//! components. Cross-validated against the combinatorial boxing sum.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::diff::{floor_coord, frac_part, Constraint, Coord, DiffSystem, WitnessPoint};
use crate::geometry::{
    enumerate_regions, face_dim, push_cell_constraints, region_system, region_to_tree, Cell, Face,
    FaceKey, RegionKey,
};
use crate::spec::{pairs, preset, Hyperplane, OffsetSpec, Preset};
use crate::trees::{enumerate_trees, PlaneTree};
use crate::{Error, Result};

/// A region of an ambient `m`-Catalan arrangement, with an interior witness.
#[derive(Debug, Clone)]
pub struct CatalanRegion {
    pub m: i64,
    pub key: RegionKey,
    pub witness: WitnessPoint,
}

impl CatalanRegion {
    pub fn n(&self) -> usize {
        self.witness.coords.len()
    }

    fn ambient(&self) -> OffsetSpec {
        preset(Preset::Catalan(self.m), self.n()).expect("m >= 0")
    }
}

/// Lookup from tree encodings to the `m`-Catalan regions they label.
#[derive(Debug)]
pub struct PhiTable {
    n: usize,
    m: i64,
    map: HashMap<String, CatalanRegion>,
}

impl PhiTable {
    /// Enumerate the regions of the `m`-Catalan arrangement on `n` nodes and
    /// invert the region-tree bijection on each witness.
    pub fn build(n: usize, m: i64) -> Result<Self> {
        let catalan = preset(Preset::Catalan(m), n)?;
        let mut map = HashMap::new();
        for r in enumerate_regions(&catalan) {
            let tree = region_to_tree(m, &r.witness)?;
            map.insert(
                tree.encode(),
                CatalanRegion {
                    m,
                    key: r.key,
                    witness: r.witness,
                },
            );
        }
        Ok(PhiTable { n, m, map })
    }

    pub fn region_of(&self, tree: &PlaneTree) -> Result<&CatalanRegion> {
        if tree.n() != self.n || tree.m() != self.m {
            return Err(Error::usage(format!(
                "tree has n={}, m={} but table was built for n={}, m={}",
                tree.n(),
                tree.m(),
                self.n,
                self.m
            )));
        }
        self.map
            .get(&tree.encode())
            .ok_or_else(|| Error::internal("tree is not labeled by any Catalan region"))
    }
}

/// Classification of the ambient Catalan hyperplanes around one region.
#[derive(Debug, Clone)]
pub struct SupportClassification {
    /// Hyperplanes meeting the closure of the region.
    pub face_supporting: Vec<Hyperplane>,
    /// Face-supporting hyperplanes whose intersection with the closure has
    /// dimension n-1.
    pub facet_supporting: Vec<Hyperplane>,
    /// Face-supporting hyperplanes that do not separate the region from the
    /// base alcove: s > 0 with the region below, or s <= 0 with the region
    /// above.
    pub nsep: Vec<Hyperplane>,
    /// Face-supporting hyperplanes belonging to the arrangement itself.
    pub in_arrangement: Vec<Hyperplane>,
}

impl SupportClassification {
    /// The hyperplane set driving the contribution: nsep plus the
    /// arrangement's own face-supporting hyperplanes.
    pub fn h_s(&self) -> Vec<Hyperplane> {
        let mut out: Vec<Hyperplane> = self
            .nsep
            .iter()
            .chain(self.in_arrangement.iter())
            .copied()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Classify every ambient Catalan hyperplane against a region. `spec` is only
/// consulted for arrangement membership; the geometry is the region's own
/// ambient `m`-Catalan arrangement.
pub fn classify_supports(
    spec: &OffsetSpec,
    region: &CatalanRegion,
) -> Result<SupportClassification> {
    let n = region.n();
    if spec.n() != n {
        return Err(Error::usage(format!(
            "spec has n={} but region has n={n}",
            spec.n()
        )));
    }
    let ambient = region.ambient();
    let plist = pairs(n);
    let mut out = SupportClassification {
        face_supporting: Vec::new(),
        facet_supporting: Vec::new(),
        nsep: Vec::new(),
        in_arrangement: Vec::new(),
    };
    for (idx, &(a, b)) in plist.iter().enumerate() {
        for s in -region.m..=region.m {
            let h = Hyperplane { a, b, s };
            // closure of the region meets the hyperplane?
            let mut sys = region_system(&ambient, &region.key, true);
            sys.push(Constraint::eq(a, b, s));
            if sys.solve().is_none() {
                continue;
            }
            out.face_supporting.push(h);
            // facet: the intersection is n-1 dimensional iff it contains a
            // point keeping every other pair strictly inside its cell
            let mut sys = DiffSystem::new(n);
            for (jdx, &(a2, b2)) in plist.iter().enumerate() {
                if jdx == idx {
                    sys.push(Constraint::eq(a, b, s));
                } else {
                    push_cell_constraints(
                        &mut sys,
                        a2,
                        b2,
                        ambient.offsets_at(jdx),
                        &Cell::Open(region.key.0[jdx]),
                        false,
                    );
                }
            }
            if sys.solve().is_some() {
                out.facet_supporting.push(h);
            }
            // the region is below the hyperplane iff its cell's upper end is
            // at most s; offsets are [-m..m], so s sits at position s + m
            let below = region.key.0[idx] <= (s + region.m) as usize;
            if if s > 0 { below } else { !below } {
                out.nsep.push(h);
            }
            if spec.contains_hyperplane(a, b, s) {
                out.in_arrangement.push(h);
            }
        }
    }
    // a relatively bounded region always keeps a facet-supporting hyperplane
    // on the alcove side; unbounded regions may not (e.g. all differences
    // above every offset), and the pipeline never feeds those here
    let bounded = region
        .key
        .0
        .iter()
        .all(|&j| j > 0 && j < (2 * region.m + 1) as usize);
    if n >= 2
        && bounded
        && !out
            .nsep
            .iter()
            .any(|h| out.facet_supporting.contains(h))
    {
        return Err(Error::internal(
            "non-separating set contains no facet-supporting hyperplane",
        ));
    }
    Ok(out)
}

/// A tree's region re-embedded in a larger Catalan arrangement where it is
/// relatively bounded.
#[derive(Debug, Clone)]
pub struct BoundedEmbedding {
    /// The relatively bounded region, in its enlarged ambient arrangement.
    pub region: CatalanRegion,
    /// The original tree with leaf slots appended to match the new arity.
    pub tree: PlaneTree,
}

/// Widen every node of `tree` to `m2 + 1` child slots.
fn append_leaf_slots(tree: &PlaneTree, m2: i64) -> Result<PlaneTree> {
    let arity2 = (m2 + 1) as usize;
    let n = tree.n();
    let mut children = vec![vec![None; arity2]; n];
    for v in 1..=n {
        for slot in 0..tree.arity() {
            children[v - 1][slot] = tree.child(v, slot);
        }
    }
    PlaneTree::from_children(tree.root(), children)
}

/// Search the `m2`-Catalan regions refining `base` for the one labeled by
/// `target` with appended leaf slots, restricted to relatively bounded cells.
fn find_subregion(
    base: &CatalanRegion,
    m2: i64,
    target: &PlaneTree,
) -> Result<Option<CatalanRegion>> {
    let n = base.n();
    let plist = pairs(n);
    let shift = (m2 - base.m) as usize;
    let last = (2 * base.m + 1) as usize; // the unbounded-above cell at level m
    // candidate m2-cells inside each pair's cell of `base`; unbounded cells
    // refine into several, of which only the bounded ones qualify
    let options: Vec<Vec<usize>> = base
        .key
        .0
        .iter()
        .map(|&j| {
            if j == 0 {
                (1..=shift).collect()
            } else if j == last {
                ((last + shift)..(last + 2 * shift)).collect()
            } else {
                vec![j + shift]
            }
        })
        .collect();
    let ambient = preset(Preset::Catalan(m2), n)?;
    let target_ext = append_leaf_slots(target, m2)?;

    fn rec(
        ambient: &OffsetSpec,
        plist: &[(usize, usize)],
        options: &[Vec<usize>],
        m2: i64,
        target_ext: &PlaneTree,
        depth: usize,
        key: &mut Vec<usize>,
        sys: &mut DiffSystem,
    ) -> Result<Option<CatalanRegion>> {
        let witness = match sys.solve() {
            Some(w) => w,
            None => return Ok(None),
        };
        if depth == plist.len() {
            return Ok(if &region_to_tree(m2, &witness)? == target_ext {
                Some(CatalanRegion {
                    m: m2,
                    key: RegionKey(key.clone()),
                    witness,
                })
            } else {
                None
            });
        }
        let (a, b) = plist[depth];
        for &opt in &options[depth] {
            key[depth] = opt;
            let mark = sys.constraints().len();
            push_cell_constraints(sys, a, b, ambient.offsets_at(depth), &Cell::Open(opt), false);
            let found = rec(ambient, plist, options, m2, target_ext, depth + 1, key, sys)?;
            sys.truncate(mark);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    let mut key = vec![0usize; plist.len()];
    let mut sys = DiffSystem::new(n);
    rec(
        &ambient,
        &plist,
        &options,
        m2,
        &target_ext,
        0,
        &mut key,
        &mut sys,
    )
}

/// Re-embed a tree's region into the smallest enlarged Catalan arrangement
/// where the region labeled by the tree (with appended leaf slots) is
/// relatively bounded. The embedded tree is verified by inverting the
/// bijection on the found witness, so a wrong subregion can never be
/// returned silently.
pub fn bounded_embedding(tree: &PlaneTree, table: &PhiTable) -> Result<BoundedEmbedding> {
    let base = table.region_of(tree)?;
    let m = base.m;
    let n = base.n();
    // pairwise gaps achievable under the leaf-extended tree never exceed
    // (n-1)(m+2), so the search below always terminates within the cap
    let cap = m + (n as i64) * (m + 2) + 2;
    for m2 in (m + 1)..=cap {
        if let Some(region) = find_subregion(base, m2, tree)? {
            return Ok(BoundedEmbedding {
                region,
                tree: append_leaf_slots(tree, m2)?,
            });
        }
    }
    Err(Error::internal(format!(
        "no bounded embedding found for tree {} up to m={cap}",
        tree.encode()
    )))
}

/// The coordinate change sorting fractional parts: `y_i = x_{sigma(i)} -
/// floor(a_{sigma(i)})`, taken at a base point `a` with pairwise distinct
/// fractional parts. On the base point it yields `y_1 < ... < y_n < y_1 + 1`.
#[derive(Debug, Clone)]
pub struct YTransform {
    sigma: Vec<usize>,     // sigma[i-1] = label at sorted position i
    sigma_inv: Vec<usize>, // sigma_inv[v-1] = sorted position of label v
    floors: Vec<i64>,
    pub base: WitnessPoint,
}

pub fn y_transform(witness: &WitnessPoint) -> Result<YTransform> {
    let n = witness.coords.len();
    let floors: Vec<i64> = witness.coords.iter().map(floor_coord).collect();
    let fracs: Vec<Coord> = witness.coords.iter().map(frac_part).collect();
    let mut sorted = fracs.clone();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::usage(
            "tied fractional parts: point unsuitable for the y-transformation",
        ));
    }
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.sort_by_key(|&v| fracs[v - 1]);
    let mut sigma_inv = vec![0usize; n];
    for (i, &v) in sigma.iter().enumerate() {
        sigma_inv[v - 1] = i + 1;
    }
    Ok(YTransform {
        sigma,
        sigma_inv,
        floors,
        base: witness.clone(),
    })
}

impl YTransform {
    /// Sorted position (1-based) of original label `v`.
    pub fn position(&self, v: usize) -> usize {
        self.sigma_inv[v - 1]
    }

    /// Original label at sorted position `i`.
    pub fn label(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// Image of `x_a - x_b = s` as `(p, q, t)` meaning `y_p - y_q = t`:
    /// substituting `x_v = y_{position(v)} + floor_v` gives
    /// `t = s - floor_a + floor_b`.
    pub fn hyperplane(&self, h: &Hyperplane) -> (usize, usize, i64) {
        (
            self.position(h.a),
            self.position(h.b),
            h.s - self.floors[h.a - 1] + self.floors[h.b - 1],
        )
    }

    /// y-coordinates of a point (of the same region or its closure).
    pub fn apply(&self, w: &WitnessPoint) -> Vec<Coord> {
        (1..=self.sigma.len())
            .map(|i| {
                let v = self.label(i);
                w.coords[v - 1] - Coord::from_integer(self.floors[v - 1])
            })
            .collect()
    }
}

/// The index set of the transformed boundary hyperplanes a face lies on:
/// `i < n` when `y_i = y_{i+1}`, and `n` when `y_n = y_1 + 1`.
pub fn tau(yt: &YTransform, w: &WitnessPoint) -> BTreeSet<usize> {
    let y = yt.apply(w);
    let n = y.len();
    let mut out = BTreeSet::new();
    for i in 1..n {
        if y[i - 1] == y[i] {
            out.insert(i);
        }
    }
    if n >= 2 && y[n - 1] == y[0] + Coord::from_integer(1) {
        out.insert(n);
    }
    out
}

/// Circular interval of a transformed face-supporting hyperplane
/// `y_p - y_q = t`: after normalizing to `t >= 0`, the offset must be 0 (with
/// p < q, giving `{p..q-1}`) or 1 (with p > q, giving the complement of
/// `{q..p-1}`); anything else violates the face-supporting precondition.
pub fn interval_tuple(n: usize, p: usize, q: usize, t: i64) -> Result<BTreeSet<usize>> {
    let (p, q, t) = if t < 0 || (t == 0 && p > q) {
        (q, p, -t)
    } else {
        (p, q, t)
    };
    match t {
        0 if p < q => Ok((p..q).collect()),
        1 if p > q => Ok((1..=n).filter(|i| !(q..p).contains(i)).collect()),
        _ => Err(Error::internal(format!(
            "transformed hyperplane y_{p} - y_{q} = {t} is not of face-supporting form"
        ))),
    }
}

/// Keep only the inclusion-minimal sets, deduplicated, in sorted order.
pub fn minimal_intervals(sets: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for s in sets {
        if sets.iter().any(|t| t != s && t.is_subset(s)) {
            continue;
        }
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out.sort();
    out
}

/// All proper subsets of `[n]` containing none of the given intervals.
pub fn p_t_set(n: usize, intervals: &[BTreeSet<usize>]) -> BTreeSet<BTreeSet<usize>> {
    assert!(n <= 20, "subset enumeration limited to n <= 20");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) - 1 {
        let d: BTreeSet<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if intervals.iter().all(|iv| !iv.is_subset(&d)) {
            out.insert(d);
        }
    }
    out
}

/// Connected components of the circular adjacency graph on the vertices
/// covered by the intervals (edge `i ~ i+1 mod n` whenever both endpoints lie
/// in a common interval), plus the set of uncovered vertices.
pub fn circular_components(
    n: usize,
    intervals: &[BTreeSet<usize>],
) -> (Vec<BTreeSet<usize>>, BTreeSet<usize>) {
    let covered: BTreeSet<usize> = intervals.iter().flatten().copied().collect();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    if n >= 2 {
        for i in 1..=n {
            let j = i % n + 1;
            if intervals.iter().any(|iv| iv.contains(&i) && iv.contains(&j)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut by_root: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for &v in &covered {
        let r = find(&mut parent, v);
        by_root.entry(r).or_default().insert(v);
    }
    let mut components: Vec<BTreeSet<usize>> = by_root.into_values().collect();
    components.sort();
    let uncovered = (1..=n).filter(|v| !covered.contains(v)).collect();
    (components, uncovered)
}

/// Signed count of the subsets of `J` containing no member interval:
/// `w = sum over D subset of J, no I subset of D, of (-1)^|D|`.
pub fn w_interval_family(j: &BTreeSet<usize>, members: &[BTreeSet<usize>]) -> Result<i64> {
    let union: BTreeSet<usize> = members.iter().flatten().copied().collect();
    if &union != j {
        return Err(Error::usage("interval family does not cover its component"));
    }
    for (i, a) in members.iter().enumerate() {
        for (k, b) in members.iter().enumerate() {
            if i != k && a.is_subset(b) {
                return Err(Error::usage("interval family is not inclusion-minimal"));
            }
        }
    }
    let elems: Vec<usize> = j.iter().copied().collect();
    if elems.len() > 20 {
        return Err(Error::usage("component too large for direct subset enumeration"));
    }
    let mut total = 0i64;
    for mask in 0u32..(1 << elems.len()) {
        let d: BTreeSet<usize> = elems
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask >> idx & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        if members.iter().any(|iv| iv.is_subset(&d)) {
            continue;
        }
        total += if d.len() % 2 == 0 { 1 } else { -1 };
    }
    Ok(total)
}

/// All faces incident to the closure of a relatively bounded Catalan region,
/// including the region itself, each with a relative-interior witness.
pub fn incident_faces(region: &CatalanRegion) -> Result<Vec<Face>> {
    let n = region.n();
    let ambient = region.ambient();
    let plist = pairs(n);
    // per pair: stay in the open cell, or land on either bounding hyperplane
    let options: Vec<Vec<Cell>> = region
        .key
        .0
        .iter()
        .enumerate()
        .map(|(idx, &j)| {
            let offsets = ambient.offsets_at(idx);
            let mut opts = vec![Cell::Open(j)];
            if j > 0 {
                opts.push(Cell::At(offsets[j - 1]));
            }
            if j < offsets.len() {
                opts.push(Cell::At(offsets[j]));
            }
            opts
        })
        .collect();

    let mut out = Vec::new();
    let mut cells: Vec<Cell> = vec![Cell::Open(0); plist.len()];
    let mut sys = DiffSystem::new(n);
    fn rec(
        ambient: &OffsetSpec,
        plist: &[(usize, usize)],
        options: &[Vec<Cell>],
        depth: usize,
        cells: &mut Vec<Cell>,
        sys: &mut DiffSystem,
        out: &mut Vec<Face>,
    ) {
        let witness = match sys.solve() {
            Some(w) => w,
            None => return,
        };
        if depth == plist.len() {
            let key = FaceKey(cells.clone());
            out.push(Face { key, dim: 0, witness });
            return;
        }
        let (a, b) = plist[depth];
        for opt in &options[depth] {
            cells[depth] = *opt;
            let mark = sys.constraints().len();
            push_cell_constraints(sys, a, b, ambient.offsets_at(depth), opt, false);
            rec(ambient, plist, options, depth + 1, cells, sys, out);
            sys.truncate(mark);
        }
    }
    rec(&ambient, &plist, &options, 0, &mut cells, &mut sys, &mut out);
    for f in &mut out {
        f.dim = face_dim(n, &f.key);
    }
    Ok(out)
}

/// The faces of the region's closure lying on no hyperplane of `h_s`.
pub fn surviving_faces(region: &CatalanRegion, h_s: &[Hyperplane]) -> Result<Vec<Face>> {
    let n = region.n();
    let banned: BTreeSet<Hyperplane> = h_s.iter().copied().collect();
    let plist = pairs(n);
    Ok(incident_faces(region)?
        .into_iter()
        .filter(|f| {
            !plist.iter().enumerate().any(|(idx, &(a, b))| match f.key.0[idx] {
                Cell::At(s) => banned.contains(&Hyperplane { a, b, s }),
                Cell::Open(_) => false,
            })
        })
        .collect())
}

/// Everything the geometric pipeline produces for one tree.
#[derive(Debug, Clone)]
pub struct TreeContribution {
    pub tree: PlaneTree,
    /// Signed boxing sum (the combinatorial definition of w).
    pub w_boxing: i64,
    /// Product-formula value from the geometric pipeline.
    pub w_geometric: i64,
    /// Minimal circular interval tuples of the supporting hyperplanes.
    pub intervals: Vec<BTreeSet<usize>>,
    /// Circular connected components covered by the intervals.
    pub components: Vec<BTreeSet<usize>>,
    /// Vertices covered by no interval; nonempty forces w = 0.
    pub uncovered: BTreeSet<usize>,
    /// Ambient Catalan level of the bounded embedding.
    pub embedded_m: i64,
}

/// Run the full geometric pipeline for one tree and report every
/// intermediate. The product-formula value is checked internally against the
/// signed subset count over the complement family; a mismatch is an error,
/// never a silently wrong value.
pub fn tree_contribution_report(
    spec: &OffsetSpec,
    tree: &PlaneTree,
    table: &PhiTable,
) -> Result<TreeContribution> {
    let n = tree.n();
    let w_boxing = crate::bernardi::tree_contribution_by_boxing(spec, tree)?;
    if n == 1 {
        // a point is its own bounded region with no supporting hyperplanes
        return Ok(TreeContribution {
            tree: tree.clone(),
            w_boxing,
            w_geometric: 1,
            intervals: Vec::new(),
            components: Vec::new(),
            uncovered: BTreeSet::new(),
            embedded_m: tree.m(),
        });
    }
    let emb = bounded_embedding(tree, table)?;
    let class = classify_supports(spec, &emb.region)?;
    let yt = y_transform(&emb.region.witness)?;
    let mut tuples = Vec::new();
    for h in class.h_s() {
        let (p, q, t) = yt.hyperplane(&h);
        tuples.push(interval_tuple(n, p, q, t)?);
    }
    let intervals = minimal_intervals(&tuples);
    if !intervals.iter().any(|iv| iv.len() == 1) {
        return Err(Error::internal("minimal interval family lacks a singleton"));
    }
    let (components, uncovered) = circular_components(n, &intervals);
    let w_geometric = if uncovered.is_empty() {
        let mut prod = 1i64;
        for jset in &components {
            let members: Vec<BTreeSet<usize>> = intervals
                .iter()
                .filter(|iv| iv.is_subset(jset))
                .cloned()
                .collect();
            prod *= w_interval_family(jset, &members)?;
        }
        prod
    } else {
        0
    };
    // independent evaluation: signed count over the interval-free subsets
    let alt: i64 = p_t_set(n, &intervals)
        .iter()
        .map(|d| if d.len() % 2 == 0 { 1 } else { -1 })
        .sum();
    if alt != w_geometric {
        return Err(Error::internal(format!(
            "product formula gave {w_geometric} but the subset sum gave {alt} for tree {}",
            tree.encode()
        )));
    }
    Ok(TreeContribution {
        tree: tree.clone(),
        w_boxing,
        w_geometric,
        intervals,
        components,
        uncovered,
        embedded_m: emb.region.m,
    })
}

/// Geometric contribution of one tree.
pub fn tree_contribution_geometric(
    spec: &OffsetSpec,
    tree: &PlaneTree,
    table: &PhiTable,
) -> Result<i64> {
    Ok(tree_contribution_report(spec, tree, table)?.w_geometric)
}

/// Reports for every tree of the arrangement's ambient arity, in canonical
/// tree order.
pub fn all_tree_reports(spec: &OffsetSpec) -> Result<Vec<TreeContribution>> {
    let n = spec.n();
    let m = spec.max_offset();
    let table = PhiTable::build(n, m)?;
    enumerate_trees(n, m)
        .par_iter()
        .map(|t| tree_contribution_report(spec, t, &table))
        .collect()
}
