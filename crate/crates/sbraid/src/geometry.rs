//! Exact enumeration of regions and faces of an arrangement, realization of
//! the region-to-tree map (inverse of the Catalan bijection) and the
//! face-to-marked-tree map, grouping of Catalan regions into arrangement
//! regions, and Euler-characteristic sums.
//!
//! A region is identified by one open cell per pair of coordinates, recorded
//! as an index into the gaps of the pair's sorted offset set. A face may
//! additionally pin pairs to exact offsets. Feasibility of a key is always
//! certified by [`DiffSystem`] with an exact rational witness.

use std::collections::BTreeMap;

use num::Zero;

use crate::diff::{ceil_coord, fmt_coord, Constraint, Coord, DiffSystem, WitnessPoint};
use crate::spec::{pairs, OffsetSpec, Preset};
use crate::trees::{MarkedTree, PlaneTree};
use crate::{Error, Result};

/// One pair's datum in a face key: an open gap between consecutive offsets,
/// or an exact offset of the pair's set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    /// Gap index `i` in `0..=k` for a pair with `k` offsets: `i = 0` is
    /// below the smallest offset, `i = k` above the largest. A pair with no
    /// offsets has the single gap `0`.
    Open(usize),
    /// Exactly on the hyperplane at this offset.
    At(i64),
}

/// Region identity: one gap index per pair, in canonical pair order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionKey(pub Vec<usize>);

/// Face identity: one [`Cell`] per pair, in canonical pair order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceKey(pub Vec<Cell>);

impl FaceKey {
    /// The face is full-dimensional iff it pins no pair.
    pub fn is_region(&self) -> bool {
        self.0.iter().all(|c| matches!(c, Cell::Open(_)))
    }

    pub fn to_region_key(&self) -> Option<RegionKey> {
        self.0
            .iter()
            .map(|c| match c {
                Cell::Open(i) => Some(*i),
                Cell::At(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(RegionKey)
    }
}

/// A region with its feasibility witness.
#[derive(Debug, Clone)]
pub struct Region {
    pub key: RegionKey,
    pub witness: WitnessPoint,
}

/// A face with its dimension and a relative-interior witness.
#[derive(Debug, Clone)]
pub struct Face {
    pub key: FaceKey,
    pub dim: usize,
    pub witness: WitnessPoint,
}

/// Emit the constraints of one pair's cell. `closed` relaxes strict
/// inequalities to non-strict (used for closure queries).
pub fn push_cell_constraints(
    sys: &mut DiffSystem,
    a: usize,
    b: usize,
    offsets: &[i64],
    cell: &Cell,
    closed: bool,
) {
    match *cell {
        Cell::Open(i) => {
            if i > 0 {
                // x_a - x_b > offsets[i-1]
                let o = offsets[i - 1];
                sys.push(if closed {
                    Constraint::le(b, a, -o)
                } else {
                    Constraint::lt(b, a, -o)
                });
            }
            if i < offsets.len() {
                let o = offsets[i];
                sys.push(if closed {
                    Constraint::le(a, b, o)
                } else {
                    Constraint::lt(a, b, o)
                });
            }
        }
        Cell::At(s) => sys.push(Constraint::eq(a, b, s)),
    }
}

/// Build the (strict or closed) constraint system of a full face key.
pub fn key_system(spec: &OffsetSpec, key: &FaceKey, closed: bool) -> DiffSystem {
    let mut sys = DiffSystem::new(spec.n());
    for (idx, &(a, b)) in pairs(spec.n()).iter().enumerate() {
        push_cell_constraints(&mut sys, a, b, spec.offsets_at(idx), &key.0[idx], closed);
    }
    sys
}

fn region_face_key(key: &RegionKey) -> FaceKey {
    FaceKey(key.0.iter().map(|&i| Cell::Open(i)).collect())
}

/// Constraint system of a region key (strict or closed).
pub fn region_system(spec: &OffsetSpec, key: &RegionKey, closed: bool) -> DiffSystem {
    key_system(spec, &region_face_key(key), closed)
}

/// Pair indices in DFS order: sorted by `(b - a, a)` so contradictions on
/// adjacent-index chains surface early.
fn enumeration_order(n: usize) -> Vec<usize> {
    let plist = pairs(n);
    let mut idx: Vec<usize> = (0..plist.len()).collect();
    idx.sort_by_key(|&i| {
        let (a, b) = plist[i];
        (b - a, a)
    });
    idx
}

fn dfs_cells(
    spec: &OffsetSpec,
    with_equalities: bool,
    emit: &mut dyn FnMut(&[Cell], WitnessPoint),
) {
    let n = spec.n();
    let plist = pairs(n);
    let order = enumeration_order(n);
    let mut cells: Vec<Cell> = vec![Cell::Open(0); plist.len()];
    let mut sys = DiffSystem::new(n);

    fn rec(
        spec: &OffsetSpec,
        plist: &[(usize, usize)],
        order: &[usize],
        depth: usize,
        with_eq: bool,
        cells: &mut Vec<Cell>,
        sys: &mut DiffSystem,
        emit: &mut dyn FnMut(&[Cell], WitnessPoint),
    ) {
        let witness = match sys.solve() {
            Some(w) => w,
            None => return,
        };
        if depth == order.len() {
            emit(cells, witness);
            return;
        }
        let idx = order[depth];
        let (a, b) = plist[idx];
        let offsets = spec.offsets_at(idx);
        let mut options: Vec<Cell> = (0..=offsets.len()).map(Cell::Open).collect();
        if with_eq {
            options.extend(offsets.iter().map(|&s| Cell::At(s)));
        }
        for opt in options {
            cells[idx] = opt;
            let mark = sys.constraints().len();
            push_cell_constraints(sys, a, b, offsets, &opt, false);
            rec(spec, plist, order, depth + 1, with_eq, cells, sys, emit);
            sys.truncate(mark);
        }
        cells[idx] = Cell::Open(0);
    }

    rec(
        spec,
        &plist,
        &order,
        0,
        with_equalities,
        &mut cells,
        &mut sys,
        emit,
    );
}

/// Enumerate the regions of the arrangement, each with a rational witness.
/// Depth-first over pairs with infeasibility pruning; deterministic order.
pub fn enumerate_regions(spec: &OffsetSpec) -> Vec<Region> {
    let mut out = Vec::new();
    dfs_cells(spec, false, &mut |cells, witness| {
        let key = FaceKey(cells.to_vec())
            .to_region_key()
            .expect("region DFS yields open cells only");
        out.push(Region { key, witness });
    });
    out
}

/// Dimension of a face = number of connected components of its equality
/// graph.
pub fn face_dim(n: usize, key: &FaceKey) -> usize {
    equality_components(n, key)
}

/// Number of connected components of the equality graph of a face key.
fn equality_components(n: usize, key: &FaceKey) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (idx, &(a, b)) in pairs(n).iter().enumerate() {
        if matches!(key.0[idx], Cell::At(_)) {
            let (ra, rb) = (find(&mut parent, a - 1), find(&mut parent, b - 1));
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Enumerate all faces of the arrangement (relative-interior feasible
/// assignments). The dimension of a face is the number of components of its
/// equality graph; full-dimensional faces coincide with the regions.
pub fn enumerate_faces(spec: &OffsetSpec) -> Vec<Face> {
    let n = spec.n();
    let mut out = Vec::new();
    dfs_cells(spec, true, &mut |cells, witness| {
        let key = FaceKey(cells.to_vec());
        let dim = equality_components(n, &key);
        out.push(Face { key, dim, witness });
    });
    out
}

/// Region key of a point that lies on no hyperplane of `spec`.
pub fn region_key_of(spec: &OffsetSpec, w: &WitnessPoint) -> Result<RegionKey> {
    let mut key = Vec::new();
    for (idx, &(a, b)) in pairs(spec.n()).iter().enumerate() {
        let v = w.diff(a, b);
        let offsets = spec.offsets_at(idx);
        if offsets.iter().any(|&s| v == Coord::from_integer(s)) {
            return Err(Error::usage(format!(
                "point lies on a hyperplane of pair ({a},{b})"
            )));
        }
        key.push(offsets.iter().filter(|&&s| Coord::from_integer(s) < v).count());
    }
    Ok(RegionKey(key))
}

/// Face key of an arbitrary point.
pub fn face_key_of(spec: &OffsetSpec, w: &WitnessPoint) -> FaceKey {
    let mut key = Vec::new();
    for (idx, &(a, b)) in pairs(spec.n()).iter().enumerate() {
        let v = w.diff(a, b);
        let offsets = spec.offsets_at(idx);
        match offsets.iter().find(|&&s| v == Coord::from_integer(s)) {
            Some(&s) => key.push(Cell::At(s)),
            None => key.push(Cell::Open(
                offsets.iter().filter(|&&s| Coord::from_integer(s) < v).count(),
            )),
        }
    }
    FaceKey(key)
}

/// Inverse of the Catalan region-tree bijection, computed directly from a
/// generic point of an `m`-Catalan region: the root is the node of minimum
/// coordinate, and every other node `k` hangs off slot `s` of the node `j`
/// whose marker `x_j + s` is the largest marker below `x_k`.
pub fn region_to_tree(m: i64, w: &WitnessPoint) -> Result<PlaneTree> {
    let n = w.coords.len();
    let arity = (m + 1) as usize;
    // genericity: all n(m+1) marker values pairwise distinct. Points inside
    // an m-Catalan region always satisfy this (coinciding markers would put
    // the point on an arrangement hyperplane).
    let mut markers: Vec<(Coord, usize, usize)> = Vec::with_capacity(n * arity);
    for j in 1..=n {
        for s in 0..arity {
            markers.push((w.coords[j - 1] + Coord::from_integer(s as i64), j, s));
        }
    }
    markers.sort();
    if markers.windows(2).any(|p| p[0].0 == p[1].0) {
        return Err(Error::usage(
            "non-generic point: coinciding markers (point on a hyperplane?)",
        ));
    }

    let root = (1..=n)
        .min_by_key(|&j| w.coords[j - 1])
        .expect("n >= 1");
    let mut children = vec![vec![None; arity]; n];
    for k in 1..=n {
        if k == root {
            continue;
        }
        let xk = w.coords[k - 1];
        let (_, j, s) = markers
            .iter()
            .rev()
            .find(|&&(v, _, _)| v < xk)
            .copied()
            .ok_or_else(|| Error::internal("non-root node has no marker below it"))?;
        if children[j - 1][s].is_some() {
            return Err(Error::internal("marker slot chosen twice"));
        }
        children[j - 1][s] = Some(k);
    }
    PlaneTree::from_children(root, children)
}

/// Inverse of the Catalan face-tree bijection, computed from a point in the
/// relative interior of a face. Nodes are attached in order of (coordinate,
/// label); node `k` hangs off the already-placed marker `(j, s)` of maximum
/// value `x_j + s <= x_k`, ties broken by smallest `s` then largest `j`.
/// The edge is marked exactly when `x_j + s = x_k`.
pub fn face_to_marked_tree(m: i64, w: &WitnessPoint) -> Result<MarkedTree> {
    let n = w.coords.len();
    let arity = (m + 1) as usize;
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&k| (w.coords[k - 1], k));

    let root = order[0];
    let mut placed = vec![false; n];
    placed[root - 1] = true;
    let mut children = vec![vec![None; arity]; n];
    let mut marked = std::collections::BTreeSet::new();

    for &k in &order[1..] {
        let xk = w.coords[k - 1];
        // best = (value, s, j) maximizing value, then min s, then max j
        let mut best: Option<(Coord, usize, usize)> = None;
        for j in 1..=n {
            if !placed[j - 1] {
                continue;
            }
            for s in 0..arity {
                let v = w.coords[j - 1] + Coord::from_integer(s as i64);
                if v > xk {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bv, bs, bj)) => {
                        (v, std::cmp::Reverse(s), j) > (bv, std::cmp::Reverse(bs), bj)
                    }
                };
                if better {
                    best = Some((v, s, j));
                }
            }
        }
        let (v, s, j) = best.ok_or_else(|| {
            Error::internal(format!("no marker at or below node {k} during face inversion"))
        })?;
        if children[j - 1][s].is_some() {
            return Err(Error::internal(format!(
                "face inversion chose slot ({j},{s}) twice"
            )));
        }
        children[j - 1][s] = Some(k);
        if v == xk {
            marked.insert((j, k));
        }
        placed[k - 1] = true;
    }

    let tree = PlaneTree::from_children(root, children)?;
    MarkedTree::new(tree, marked).map_err(|e| Error::internal(format!("face inversion: {e}")))
}

/// An arrangement region together with the Catalan trees whose regions it
/// contains (`T_R`), plus one witness per tree.
#[derive(Debug, Clone)]
pub struct GroupedRegion {
    pub key: RegionKey,
    pub witness: WitnessPoint,
    pub trees: Vec<(PlaneTree, WitnessPoint)>,
}

/// Group the `m`-Catalan regions (`m = max_offset(spec)`) into regions of
/// the arrangement: each Catalan region's key projects onto an arrangement
/// region key, and its tree joins that region's `T_R`.
pub fn group_regions(spec: &OffsetSpec) -> Result<Vec<GroupedRegion>> {
    let m = spec.max_offset();
    let catalan = crate::spec::preset(Preset::Catalan(m), spec.n())?;
    let mut groups: BTreeMap<RegionKey, GroupedRegion> = BTreeMap::new();
    for region in enumerate_regions(&catalan) {
        let tree = region_to_tree(m, &region.witness)?;
        let skey = region_key_of(spec, &region.witness)?;
        groups
            .entry(skey.clone())
            .or_insert_with(|| GroupedRegion {
                key: skey,
                witness: region.witness.clone(),
                trees: Vec::new(),
            })
            .trees
            .push((tree, region.witness));
    }
    Ok(groups.into_values().collect())
}

/// Faces of the ambient `m`-Catalan arrangement that avoid every hyperplane
/// of `spec`, grouped by the arrangement region containing them
/// (`F_S` partitioned into the `F_S(R)`).
pub fn catalan_faces_by_region(
    spec: &OffsetSpec,
) -> Result<BTreeMap<RegionKey, Vec<(FaceKey, usize)>>> {
    let m = spec.max_offset();
    let catalan = crate::spec::preset(Preset::Catalan(m), spec.n())?;
    let mut map: BTreeMap<RegionKey, Vec<(FaceKey, usize)>> = BTreeMap::new();
    for face in enumerate_faces(&catalan) {
        if face_on_spec_hyperplane(spec, &face.key) {
            continue;
        }
        let skey = region_key_of(spec, &face.witness)?;
        map.entry(skey).or_default().push((face.key, face.dim));
    }
    Ok(map)
}

/// Whether a Catalan face key pins some pair at an offset belonging to the
/// arrangement (i.e. the face is contained in a hyperplane of `spec`).
pub fn face_on_spec_hyperplane(spec: &OffsetSpec, key: &FaceKey) -> bool {
    pairs(spec.n())
        .iter()
        .enumerate()
        .any(|(idx, &(a, b))| match key.0[idx] {
            Cell::At(s) => spec.contains_hyperplane(a, b, s),
            Cell::Open(_) => false,
        })
}

/// Faces of `F_S` lying in one region.
pub fn faces_in_region(spec: &OffsetSpec, region: &RegionKey) -> Result<Vec<(FaceKey, usize)>> {
    let map = catalan_faces_by_region(spec)?;
    Ok(map.get(region).cloned().unwrap_or_default())
}

/// Signed Euler sum `sum (-1)^(n - dim)` over a face list.
pub fn euler_sum(n: usize, faces: &[(FaceKey, usize)]) -> i64 {
    faces
        .iter()
        .map(|&(_, dim)| if (n - dim) % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// Euler contribution of one region: the signed face sum over `F_S(R)`,
/// which the contractibility of regions forces to equal 1.
pub fn euler_contribution(spec: &OffsetSpec, region: &RegionKey) -> Result<i64> {
    let faces = faces_in_region(spec, region)?;
    Ok(euler_sum(spec.n(), &faces))
}

/// Ordered partition of a braid-type face (all equalities at offset 0):
/// blocks are the equality components, ordered by coordinate.
pub fn face_to_ordered_partition(
    n: usize,
    key: &FaceKey,
    witness: &WitnessPoint,
) -> Result<Vec<Vec<usize>>> {
    for (idx, &(a, b)) in pairs(n).iter().enumerate() {
        if let Cell::At(s) = key.0[idx] {
            if s != 0 {
                return Err(Error::usage(format!(
                    "pair ({a},{b}) pinned at nonzero offset {s}: not a braid-type face"
                )));
            }
        }
    }
    let mut by_coord: BTreeMap<Coord, Vec<usize>> = BTreeMap::new();
    for v in 1..=n {
        by_coord.entry(witness.coords[v - 1]).or_default().push(v);
    }
    Ok(by_coord.into_values().collect())
}

/// Relative boundedness of a region: every pair sits in a bounded gap.
pub fn region_is_bounded(spec: &OffsetSpec, key: &RegionKey) -> bool {
    (0..key.0.len()).all(|idx| {
        let k = spec.offsets_at(idx).len();
        key.0[idx] > 0 && key.0[idx] < k
    })
}

/// Largest integer gap in a witness, used to size bounded embeddings.
pub fn max_pair_gap(w: &WitnessPoint) -> i64 {
    let n = w.coords.len();
    let mut best = 0i64;
    for (a, b) in pairs(n) {
        let d = w.diff(a, b);
        let d = if d < Coord::zero() { -d } else { d };
        best = best.max(ceil_coord(&d));
    }
    best
}

/// JSON value of a region key: map `"a,b"` to gap index.
pub fn region_key_json(n: usize, key: &RegionKey) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (idx, (a, b)) in pairs(n).iter().enumerate() {
        map.insert(format!("{a},{b}"), serde_json::json!(key.0[idx]));
    }
    serde_json::Value::Object(map)
}

/// JSON value of a face key: map `"a,b"` to gap index or `"=s"`.
pub fn face_key_json(n: usize, key: &FaceKey) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (idx, (a, b)) in pairs(n).iter().enumerate() {
        let v = match key.0[idx] {
            Cell::Open(i) => serde_json::json!(i),
            Cell::At(s) => serde_json::json!(format!("={s}")),
        };
        map.insert(format!("{a},{b}"), v);
    }
    serde_json::Value::Object(map)
}

/// Witness coordinates in exact `p/q` notation.
pub fn witness_strings(w: &WitnessPoint) -> Vec<String> {
    w.coords.iter().map(fmt_coord).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_spec, preset, Preset};

    #[test]
    fn braid_region_count() {
        let spec = preset(Preset::Braid, 3).unwrap();
        assert_eq!(enumerate_regions(&spec).len(), 6);
    }

    #[test]
    fn catalan_region_counts() {
        assert_eq!(
            enumerate_regions(&preset(Preset::Catalan(1), 2).unwrap()).len(),
            4
        );
        assert_eq!(
            enumerate_regions(&preset(Preset::Catalan(1), 3).unwrap()).len(),
            30
        );
    }

    #[test]
    fn shi_region_count() {
        let spec = preset(Preset::Shi, 3).unwrap();
        assert_eq!(enumerate_regions(&spec).len(), 16);
    }

    #[test]
    fn braid_face_count_is_fubini() {
        // faces of the braid arrangement on 3 nodes = ordered partitions of [3]
        let spec = preset(Preset::Braid, 3).unwrap();
        let faces = enumerate_faces(&spec);
        assert_eq!(faces.len(), 13);
        // full-dimensional faces = regions
        let regions: Vec<_> = faces.iter().filter(|f| f.key.is_region()).collect();
        assert_eq!(regions.len(), 6);
        for f in &faces {
            if f.key.is_region() {
                assert_eq!(f.dim, 3);
            }
        }
    }

    #[test]
    fn single_variable_has_one_face() {
        let spec = preset(Preset::Catalan(1), 1).unwrap();
        let faces = enumerate_faces(&spec);
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].dim, 1);
    }

    #[test]
    fn region_to_tree_n2_m1() {
        // region 0 < x1 - x2 < 1: root 2, child_0(2) = 1
        let spec = preset(Preset::Catalan(1), 2).unwrap();
        for region in enumerate_regions(&spec) {
            let t = region_to_tree(1, &region.witness).unwrap();
            let d = region.witness.diff(1, 2);
            if d > Coord::zero() && d < Coord::from_integer(1) {
                assert_eq!(t.root(), 2);
                assert_eq!(t.child(2, 0), Some(1));
            }
            if d > Coord::from_integer(1) {
                assert_eq!(t.root(), 2);
                assert_eq!(t.child(2, 1), Some(1));
            }
        }
    }

    #[test]
    fn region_to_tree_far_apart_chain() {
        // all gaps > 1, x1 < x2 < x3: chain 1 -slot1-> 2 -slot1-> 3
        let w = WitnessPoint {
            coords: vec![
                Coord::from_integer(0),
                Coord::from_integer(2),
                Coord::from_integer(4),
            ],
        };
        // integer coords are fine here: markers 0,1,2,3,4,5 are distinct
        let t = region_to_tree(1, &w).unwrap();
        assert_eq!(t.root(), 1);
        assert_eq!(t.child(1, 1), Some(2));
        assert_eq!(t.child(2, 1), Some(3));
    }

    #[test]
    fn region_to_tree_bijective_small() {
        for (n, m) in [(2usize, 0i64), (3, 0), (2, 1), (3, 1), (2, 2), (3, 2)] {
            let spec = preset(Preset::Catalan(m), n).unwrap();
            let regions = enumerate_regions(&spec);
            let mut seen = std::collections::HashSet::new();
            for r in &regions {
                let t = region_to_tree(m, &r.witness).unwrap();
                assert!(seen.insert(t.encode()), "duplicate tree for n={n} m={m}");
            }
            let all: std::collections::HashSet<String> = crate::trees::enumerate_trees(n, m)
                .iter()
                .map(|t| t.encode())
                .collect();
            assert_eq!(seen, all, "n={n} m={m}");
        }
    }

    #[test]
    fn face_to_marked_tree_n2_m1() {
        let spec = preset(Preset::Catalan(1), 2).unwrap();
        for face in enumerate_faces(&spec) {
            let mt = face_to_marked_tree(1, &face.witness).unwrap();
            match face.key.0[0] {
                Cell::At(0) => {
                    // x1 = x2: root 1, child_0(1) = 2, marked
                    assert_eq!(mt.tree.root(), 1);
                    assert_eq!(mt.tree.child(1, 0), Some(2));
                    assert_eq!(mt.marked, std::collections::BTreeSet::from([(1, 2)]));
                }
                Cell::At(-1) => {
                    // x2 = x1 + 1: root 1, child_1(1) = 2, marked
                    assert_eq!(mt.tree.root(), 1);
                    assert_eq!(mt.tree.child(1, 1), Some(2));
                    assert_eq!(mt.marked, std::collections::BTreeSet::from([(1, 2)]));
                }
                Cell::At(1) => {
                    // x1 = x2 + 1: root 2, child_1(2) = 1, marked
                    assert_eq!(mt.tree.root(), 2);
                    assert_eq!(mt.tree.child(2, 1), Some(1));
                    assert_eq!(mt.marked, std::collections::BTreeSet::from([(2, 1)]));
                }
                Cell::Open(_) => {
                    // regions: marking empty, tree = region_to_tree
                    assert!(mt.marked.is_empty());
                    let t = region_to_tree(1, &face.witness).unwrap();
                    assert_eq!(mt.tree, t);
                }
                Cell::At(s) => panic!("unexpected offset {s}"),
            }
        }
    }

    #[test]
    fn group_regions_catalan_is_identity() {
        let spec = preset(Preset::Catalan(1), 3).unwrap();
        let groups = group_regions(&spec).unwrap();
        assert_eq!(groups.len(), 30);
        assert!(groups.iter().all(|g| g.trees.len() == 1));
    }

    #[test]
    fn group_regions_empty_spec() {
        let spec = OffsetSpec::empty(2);
        let groups = group_regions(&spec).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].trees.len(), 2); // both unary trees
    }

    #[test]
    fn group_regions_braid_n2() {
        let spec = preset(Preset::Braid, 2).unwrap();
        let groups = group_regions(&spec).unwrap();
        assert_eq!(groups.len(), 2);
        assert!(groups.iter().all(|g| g.trees.len() == 1));
    }

    #[test]
    fn euler_contribution_is_one() {
        for spec in [
            preset(Preset::Braid, 3).unwrap(),
            preset(Preset::Shi, 3).unwrap(),
            preset(Preset::Graphical(vec![(1, 2), (2, 3)]), 3).unwrap(),
        ] {
            let faces = catalan_faces_by_region(&spec).unwrap();
            let regions = enumerate_regions(&spec);
            assert_eq!(faces.len(), regions.len());
            for r in &regions {
                let fs = &faces[&r.key];
                assert_eq!(euler_sum(spec.n(), fs), 1, "spec {}", spec.summary());
            }
        }
    }

    #[test]
    fn braid_faces_in_region() {
        // braid n=2, region x1 < x2: exactly one face (itself)
        let spec = preset(Preset::Braid, 2).unwrap();
        let regions = enumerate_regions(&spec);
        for r in &regions {
            let fs = faces_in_region(&spec, &r.key).unwrap();
            assert_eq!(fs.len(), 1);
            assert_eq!(fs[0].1, 2);
        }
    }

    #[test]
    fn catalan_faces_in_region_only_self() {
        let spec = preset(Preset::Catalan(1), 2).unwrap();
        for r in enumerate_regions(&spec) {
            let fs = faces_in_region(&spec, &r.key).unwrap();
            assert_eq!(fs.len(), 1);
        }
    }

    #[test]
    fn ordered_partition_example() {
        // face x1 = x3 < x4 < x2 of the braid arrangement on 4 nodes
        let spec = preset(Preset::Braid, 4).unwrap();
        let target: Vec<Vec<usize>> = vec![vec![1, 3], vec![4], vec![2]];
        let mut found = false;
        for f in enumerate_faces(&spec) {
            let p = face_to_ordered_partition(4, &f.key, &f.witness).unwrap();
            if p == target {
                found = true;
                assert_eq!(f.dim, 3); // = number of blocks
            }
            assert_eq!(f.dim, p.len());
        }
        assert!(found);
    }

    #[test]
    fn ordered_partition_rejects_nonzero_offset() {
        let spec = preset(Preset::Catalan(1), 2).unwrap();
        let f = enumerate_faces(&spec)
            .into_iter()
            .find(|f| f.key.0[0] == Cell::At(1))
            .unwrap();
        assert!(face_to_ordered_partition(2, &f.key, &f.witness).is_err());
    }

    #[test]
    fn figure_five_spec_contributions() {
        let spec = parse_spec(r#"{"n": 3, "pairs": {"1,3": [0, 1], "2,3": [0]}}"#).unwrap();
        let faces = catalan_faces_by_region(&spec).unwrap();
        for (_, fs) in faces {
            assert_eq!(euler_sum(3, &fs), 1);
        }
    }

    #[test]
    fn region_key_json_shape() {
        let key = RegionKey(vec![2, 3, 2]);
        let v = region_key_json(3, &key);
        assert_eq!(v["1,2"], 2);
        assert_eq!(v["1,3"], 3);
        let fkey = FaceKey(vec![Cell::Open(1), Cell::At(0), Cell::Open(2)]);
        let v = face_key_json(3, &fkey);
        assert_eq!(v["1,3"], "=0");
    }
}
