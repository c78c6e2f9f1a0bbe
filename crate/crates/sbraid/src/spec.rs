//! Arrangement specifications: the offset family `S = (S_{a,b})`, the derived
//! `S^-` sets, the maximum offset, presets, and the JSON config format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Canonical list of unordered pairs `(a, b)` with `1 <= a < b <= n`, in
/// lexicographic order. All keyed data (region/face keys) is indexed by the
/// position of a pair in this list.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for a in 1..=n {
        for b in (a + 1)..=n {
            out.push((a, b));
        }
    }
    out
}

/// Position of the pair `(a, b)` (with `a < b`) in [`pairs`]`(n)`.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(1 <= a && a < b && b <= n);
    // pairs with first coordinate < a, then offset within the a-block
    (a - 1) * n - (a - 1) * a / 2 + (b - a - 1)
}

/// A single hyperplane `x_a - x_b = s` with `a < b`. Membership in an
/// arrangement is decided against an [`OffsetSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub a: usize,
    pub b: usize,
    pub s: i64,
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{{{},{},{}}}", self.a, self.b, self.s)
    }
}

/// The derived sets `S^-_{a,b}` (field `neg`) and `S^-_{b,a}` (field `pos`)
/// for one unordered pair, per the defining formulas
/// `S^-_{a,b} = { s >= 0 | -s in S_{a,b} }` and
/// `S^-_{b,a} = { s > 0 | s in S_{a,b} } ∪ {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusSets {
    pub neg: BTreeSet<i64>,
    pub pos: BTreeSet<i64>,
}

/// A validated arrangement specification: node count `n` plus one finite
/// sorted offset set per unordered pair. Every pair has an entry (possibly
/// empty). Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetSpec {
    n: usize,
    offsets: Vec<Vec<i64>>, // indexed by pair_index
}

impl OffsetSpec {
    /// Build a spec from an explicit pair map. Pairs absent from the map get
    /// the empty set. Offset lists are sorted and deduplicated.
    pub fn new(n: usize, map: &BTreeMap<(usize, usize), Vec<i64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("node count n must be positive"));
        }
        let plist = pairs(n);
        let mut offsets = vec![Vec::new(); plist.len()];
        for (&(a, b), set) in map {
            if !(1 <= a && a < b && b <= n) {
                return Err(Error::parse(format!(
                    "pair key ({a},{b}) out of range for n={n}"
                )));
            }
            let mut s: Vec<i64> = set.clone();
            s.sort_unstable();
            s.dedup();
            offsets[pair_index(n, a, b)] = s;
        }
        Ok(OffsetSpec { n, offsets })
    }

    /// A spec with every offset set empty (the arrangement with no
    /// hyperplanes).
    pub fn empty(n: usize) -> Self {
        OffsetSpec::new(n, &BTreeMap::new()).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The sorted offset set `S_{a,b}` for `a < b`.
    pub fn offsets(&self, a: usize, b: usize) -> &[i64] {
        &self.offsets[pair_index(self.n, a, b)]
    }

    /// Offset set by pair position in [`pairs`]`(n)`.
    pub fn offsets_at(&self, idx: usize) -> &[i64] {
        &self.offsets[idx]
    }

    /// All hyperplanes of the arrangement.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut out = Vec::new();
        for (idx, &(a, b)) in pairs(self.n).iter().enumerate() {
            for &s in &self.offsets[idx] {
                out.push(Hyperplane { a, b, s });
            }
        }
        out
    }

    /// Whether `x_a - x_b = s` (a < b) is a hyperplane of this arrangement.
    pub fn contains_hyperplane(&self, a: usize, b: usize, s: i64) -> bool {
        self.offsets(a, b).binary_search(&s).is_ok()
    }

    /// The derived `S^-` sets for the pair `a < b`.
    pub fn minus_sets(&self, a: usize, b: usize) -> Result<MinusSets> {
        if !(1 <= a && a < b && b <= self.n) {
            return Err(Error::usage(format!(
                "minus_sets requires 1 <= a < b <= n, got ({a},{b})"
            )));
        }
        let set = self.offsets(a, b);
        let neg = set.iter().filter(|&&s| s <= 0).map(|&s| -s).collect();
        let mut pos: BTreeSet<i64> = set.iter().filter(|&&s| s > 0).copied().collect();
        pos.insert(0);
        Ok(MinusSets { neg, pos })
    }

    /// Membership test for `s` in `S^-_{v,w}` for an *ordered* pair of
    /// distinct labels, reading `neg` of `{v,w}` when `v < w` and `pos` when
    /// `v > w`.
    pub fn s_minus_contains(&self, v: usize, w: usize, s: i64) -> bool {
        debug_assert!(v != w && s >= 0);
        if v < w {
            // s in S^-_{v,w}  <=>  -s in S_{v,w}
            self.offsets(v, w).binary_search(&(-s)).is_ok()
        } else {
            // s in S^-_{v,w} for v > w  <=>  s = 0 or s in S_{w,v}
            s == 0 || self.offsets(w, v).binary_search(&s).is_ok()
        }
    }

    /// The maximum absolute offset `m` over all sets; 0 when all sets are
    /// empty.
    pub fn max_offset(&self) -> i64 {
        self.offsets
            .iter()
            .flat_map(|set| set.iter().map(|&s| s.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Number of hyperplanes.
    pub fn hyperplane_count(&self) -> usize {
        self.offsets.iter().map(|s| s.len()).sum()
    }

    /// One-line summary used in CLI output.
    pub fn summary(&self) -> String {
        format!(
            "n={}, m={}, {} hyperplanes",
            self.n,
            self.max_offset(),
            self.hyperplane_count()
        )
    }
}

/// Named preset families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Braid,
    Catalan(i64),
    Shi,
    Linial,
    Semiorder,
    Graphical(Vec<(usize, usize)>),
}

/// Build a preset spec on `n` nodes.
///
/// braid: `{0}`; catalan(m): `[-m..m]`; shi: `{0,1}`; linial: `{1}`;
/// semiorder: `{-1,1}`; graphical(E): `{0}` on edges of E, empty elsewhere.
pub fn preset(family: Preset, n: usize) -> Result<OffsetSpec> {
    let mut map = BTreeMap::new();
    match family {
        Preset::Braid => {
            for (a, b) in pairs(n) {
                map.insert((a, b), vec![0]);
            }
        }
        Preset::Catalan(m) => {
            if m < 0 {
                return Err(Error::usage("catalan preset requires m >= 0"));
            }
            for (a, b) in pairs(n) {
                map.insert((a, b), (-m..=m).collect());
            }
        }
        Preset::Shi => {
            for (a, b) in pairs(n) {
                map.insert((a, b), vec![0, 1]);
            }
        }
        Preset::Linial => {
            for (a, b) in pairs(n) {
                map.insert((a, b), vec![1]);
            }
        }
        Preset::Semiorder => {
            for (a, b) in pairs(n) {
                map.insert((a, b), vec![-1, 1]);
            }
        }
        Preset::Graphical(edges) => {
            for (u, v) in edges {
                if u == v || u < 1 || v < 1 || u > n || v > n {
                    return Err(Error::usage(format!(
                        "graphical edge ({u},{v}) outside [1,{n}]"
                    )));
                }
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                map.insert((a, b), vec![0]);
            }
        }
    }
    OffsetSpec::new(n, &map)
}

/// JSON config document. Either a preset reference or an explicit pair map
/// with keys `"a,b"` (a < b).
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ConfigDoc {
    Preset {
        preset: String,
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        m: Option<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<(usize, usize)>>,
    },
    Explicit {
        n: usize,
        pairs: BTreeMap<String, Vec<i64>>,
    },
}

fn parse_pair_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let err = || Error::parse(format!("bad pair key {key:?}: expected \"a,b\" with a < b"));
    let (sa, sb) = key.split_once(',').ok_or_else(err)?;
    let a: usize = sa.trim().parse().map_err(|_| err())?;
    let b: usize = sb.trim().parse().map_err(|_| err())?;
    if !(1 <= a && a < b && b <= n) {
        return Err(Error::parse(format!(
            "pair key {key:?} out of range for n={n} (need 1 <= a < b <= n)"
        )));
    }
    Ok((a, b))
}

/// Parse a JSON config document into a validated spec.
pub fn parse_spec(doc: &str) -> Result<OffsetSpec> {
    let cfg: ConfigDoc =
        serde_json::from_str(doc).map_err(|e| Error::parse(format!("bad config document: {e}")))?;
    match cfg {
        ConfigDoc::Preset {
            preset: name,
            n,
            m,
            edges,
        } => {
            let family = match name.as_str() {
                "braid" => Preset::Braid,
                "catalan" => Preset::Catalan(
                    m.ok_or_else(|| Error::parse("catalan preset requires \"m\""))?,
                ),
                "shi" => Preset::Shi,
                "linial" => Preset::Linial,
                "semiorder" => Preset::Semiorder,
                "graphical" => Preset::Graphical(
                    edges.ok_or_else(|| Error::parse("graphical preset requires \"edges\""))?,
                ),
                other => return Err(Error::parse(format!("unknown preset {other:?}"))),
            };
            preset(family, n)
        }
        ConfigDoc::Explicit { n, pairs: pmap } => {
            if n == 0 {
                return Err(Error::parse("node count n must be positive"));
            }
            let mut map = BTreeMap::new();
            for (key, set) in &pmap {
                let (a, b) = parse_pair_key(key, n)?;
                map.insert((a, b), set.clone());
            }
            OffsetSpec::new(n, &map)
        }
    }
}

/// Serialize a spec to the explicit JSON form. Empty pairs are omitted;
/// `parse_spec` restores them.
pub fn serialize_spec(spec: &OffsetSpec) -> String {
    let mut pmap = BTreeMap::new();
    for (idx, (a, b)) in pairs(spec.n()).iter().enumerate() {
        let set = spec.offsets_at(idx);
        if !set.is_empty() {
            pmap.insert(format!("{a},{b}"), set.to_vec());
        }
    }
    let doc = ConfigDoc::Explicit {
        n: spec.n(),
        pairs: pmap,
    };
    serde_json::to_string_pretty(&doc).expect("spec serialization")
}
