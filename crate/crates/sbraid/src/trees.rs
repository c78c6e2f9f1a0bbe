//! Labeled `(m+1)`-ary rooted plane trees, cadet sequences, boxings and
//! markings.
//!
//! Nodes carry labels `1..=n`. Every node has exactly `m+1` ordered child
//! slots; a slot holds either another node or a leaf. `lsib(v)` is the slot
//! index of `v` under its parent, and the cadet of `u` is the rightmost
//! non-leaf child of `u`. Cadet edges form disjoint paths covering the nodes,
//! so a boxing is a choice of segmentation of each maximal cadet path.

use std::collections::BTreeSet;

use crate::spec::OffsetSpec;
use crate::{Error, Result};

/// An `(m+1)`-ary rooted plane tree with labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    arity: usize,
    root: usize,
    children: Vec<Vec<Option<usize>>>, // children[v-1][slot]
    parent: Vec<Option<(usize, usize)>>, // parent[v-1] = (parent label, slot)
}

impl PlaneTree {
    /// Build a tree from explicit child slot arrays, validating that labels
    /// are exactly `1..=n`, each used once, and the structure is a single
    /// rooted tree.
    pub fn from_children(root: usize, children: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let n = children.len();
        if n == 0 {
            return Err(Error::usage("tree must have at least one node"));
        }
        let arity = children[0].len();
        if arity == 0 {
            return Err(Error::usage("tree arity must be at least 1"));
        }
        if root < 1 || root > n {
            return Err(Error::usage(format!("root label {root} out of range")));
        }
        let mut parent = vec![None; n];
        for v in 1..=n {
            if children[v - 1].len() != arity {
                return Err(Error::usage("all nodes must have the same number of slots"));
            }
            for (slot, &c) in children[v - 1].iter().enumerate() {
                if let Some(c) = c {
                    if c < 1 || c > n {
                        return Err(Error::usage(format!("child label {c} out of range")));
                    }
                    if parent[c - 1].is_some() || c == root {
                        return Err(Error::usage(format!("label {c} appears twice")));
                    }
                    parent[c - 1] = Some((v, slot));
                }
            }
        }
        let tree = PlaneTree {
            arity,
            root,
            children,
            parent,
        };
        // reachability from the root covers all nodes
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if seen[v - 1] {
                return Err(Error::usage("cycle in tree structure"));
            }
            seen[v - 1] = true;
            count += 1;
            for &c in tree.children[v - 1].iter().flatten() {
                stack.push(c);
            }
        }
        if count != n {
            return Err(Error::usage("tree is not connected"));
        }
        Ok(tree)
    }

    /// A unary chain `v_1 -> v_2 -> ... -> v_n` (arity 1, root `v_1`).
    pub fn chain(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut children = vec![vec![None]; n];
        for w in order.windows(2) {
            children[w[0] - 1][0] = Some(w[1]);
        }
        PlaneTree::from_children(order[0], children)
    }

    pub fn n(&self) -> usize {
        self.children.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `m = arity - 1`.
    pub fn m(&self) -> i64 {
        (self.arity - 1) as i64
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn child(&self, v: usize, slot: usize) -> Option<usize> {
        self.children[v - 1][slot]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v - 1].map(|(p, _)| p)
    }

    /// Slot index of `v` under its parent (= number of siblings to its left).
    pub fn lsib(&self, v: usize) -> i64 {
        match self.parent[v - 1] {
            Some((_, slot)) => slot as i64,
            None => 0,
        }
    }

    /// The rightmost non-leaf child of `u`, if any.
    pub fn cadet(&self, u: usize) -> Option<usize> {
        self.children[u - 1].iter().rev().flatten().next().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.n()
    }

    /// Whether `seq` is a cadet sequence of this tree.
    pub fn is_cadet_sequence(&self, seq: &[usize]) -> bool {
        !seq.is_empty()
            && seq.iter().all(|&v| 1 <= v && v <= self.n())
            && seq.windows(2).all(|w| self.cadet(w[0]) == Some(w[1]))
    }

    /// Maximal cadet paths. Every node lies on exactly one; paths are listed
    /// by ascending start label.
    pub fn cadet_chains(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut is_cadet = vec![false; n];
        for u in 1..=n {
            if let Some(c) = self.cadet(u) {
                is_cadet[c - 1] = true;
            }
        }
        let mut chains = Vec::new();
        for start in 1..=n {
            if !is_cadet[start - 1] {
                let mut chain = vec![start];
                while let Some(c) = self.cadet(*chain.last().unwrap()) {
                    chain.push(c);
                }
                chains.push(chain);
            }
        }
        chains
    }

    /// Cadet edges as `(parent, child)` pairs.
    pub fn cadet_edges(&self) -> Vec<(usize, usize)> {
        self.nodes()
            .filter_map(|u| self.cadet(u).map(|c| (u, c)))
            .collect()
    }

    /// Canonical text encoding: `label(slot,...,slot)` with `.` for leaves,
    /// e.g. `2(1(.,.),.)` for a binary tree rooted at 2.
    pub fn encode(&self) -> String {
        fn enc(t: &PlaneTree, v: usize, out: &mut String) {
            out.push_str(&v.to_string());
            out.push('(');
            for (i, slot) in t.children[v - 1].iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match slot {
                    Some(c) => enc(t, *c, out),
                    None => out.push('.'),
                }
            }
            out.push(')');
        }
        let mut out = String::new();
        enc(self, self.root, &mut out);
        out
    }

    /// Parse the canonical text encoding.
    pub fn decode(text: &str) -> Result<Self> {
        struct P<'a> {
            s: &'a [u8],
            i: usize,
        }
        impl<'a> P<'a> {
            fn peek(&self) -> Option<u8> {
                self.s.get(self.i).copied()
            }
            fn expect(&mut self, c: u8) -> Result<()> {
                if self.peek() == Some(c) {
                    self.i += 1;
                    Ok(())
                } else {
                    Err(Error::parse(format!(
                        "tree encoding: expected {:?} at byte {}",
                        c as char, self.i
                    )))
                }
            }
            fn node(
                &mut self,
                slots: &mut Vec<(usize, Vec<Option<usize>>)>,
            ) -> Result<(usize, usize)> {
                let start = self.i;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.i += 1;
                }
                if start == self.i {
                    return Err(Error::parse("tree encoding: expected node label"));
                }
                let label: usize = std::str::from_utf8(&self.s[start..self.i])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::parse("tree encoding: bad label"))?;
                self.expect(b'(')?;
                let mut kids = Vec::new();
                loop {
                    if self.peek() == Some(b'.') {
                        self.i += 1;
                        kids.push(None);
                    } else {
                        let (c, _) = self.node(slots)?;
                        kids.push(Some(c));
                    }
                    match self.peek() {
                        Some(b',') => self.i += 1,
                        Some(b')') => break,
                        _ => return Err(Error::parse("tree encoding: expected ',' or ')'")),
                    }
                }
                self.expect(b')')?;
                let arity = kids.len();
                slots.push((label, kids));
                Ok((label, arity))
            }
        }
        let mut p = P {
            s: text.as_bytes(),
            i: 0,
        };
        let mut slots = Vec::new();
        let (root, _) = p.node(&mut slots)?;
        if p.i != p.s.len() {
            return Err(Error::parse("tree encoding: trailing characters"));
        }
        let n = slots.len();
        let arity = slots[0].1.len();
        let mut children = vec![vec![None; arity]; n];
        for (label, kids) in slots {
            if label < 1 || label > n {
                return Err(Error::parse(format!("tree encoding: label {label} out of range")));
            }
            if kids.len() != arity {
                return Err(Error::parse("tree encoding: inconsistent arity"));
            }
            children[label - 1] = kids;
        }
        PlaneTree::from_children(root, children)
    }
}

/// Unlabeled shape of an `(m+1)`-ary plane tree.
#[derive(Debug, Clone)]
struct Shape(Vec<Option<Shape>>);

impl Shape {
    fn size(&self) -> usize {
        1 + self
            .0
            .iter()
            .flatten()
            .map(|s| s.size())
            .sum::<usize>()
    }
}

/// All shapes with exactly `n` nodes, in a fixed recursive order.
fn shapes(n: usize, arity: usize) -> Vec<Shape> {
    debug_assert!(n >= 1);
    let mut out = Vec::new();
    // distribute n-1 nodes over `arity` ordered subtrees
    fn rec(remaining: usize, slots_left: usize, arity: usize, acc: &mut Vec<Option<Shape>>, out: &mut Vec<Shape>) {
        if slots_left == 0 {
            if remaining == 0 {
                out.push(Shape(acc.clone()));
            }
            return;
        }
        // empty slot
        acc.push(None);
        rec(remaining, slots_left - 1, arity, acc, out);
        acc.pop();
        // non-empty slot of each feasible size
        for k in 1..=remaining {
            for sub in shapes(k, arity) {
                acc.push(Some(sub));
                rec(remaining - k, slots_left - 1, arity, acc, out);
                acc.pop();
            }
        }
    }
    let mut acc = Vec::new();
    rec(n - 1, arity, arity, &mut acc, &mut out);
    out
}

/// Assign the preorder label sequence `labels` to `shape`, producing child
/// slot arrays.
fn label_shape(shape: &Shape, labels: &[usize]) -> PlaneTree {
    let n = labels.len();
    let arity = shape.0.len();
    let mut children = vec![vec![None; arity]; n];
    fn assign(
        shape: &Shape,
        labels: &[usize],
        next: &mut usize,
        children: &mut Vec<Vec<Option<usize>>>,
    ) -> usize {
        let label = labels[*next];
        *next += 1;
        for (slot, sub) in shape.0.iter().enumerate() {
            if let Some(sub) = sub {
                let c = assign(sub, labels, next, children);
                children[label - 1][slot] = Some(c);
            }
        }
        label
    }
    let mut next = 0;
    let root = assign(shape, labels, &mut next, &mut children);
    debug_assert_eq!(next, n);
    PlaneTree {
        arity,
        root,
        children: children.clone(),
        parent: {
            let mut parent = vec![None; n];
            for v in 1..=n {
                for (slot, &c) in children[v - 1].iter().enumerate() {
                    if let Some(c) = c {
                        parent[c - 1] = Some((v, slot));
                    }
                }
            }
            parent
        },
    }
}

/// Lexicographic permutations of `1..=n`.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v - 1] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// All `(m+1)`-ary plane trees with `n` labeled nodes, each exactly once, in
/// a canonical order (shapes in a fixed recursive order, preorder label
/// assignments lexicographically). Total count is
/// `n!/(mn+1) * C((m+1)n, n)`. `n = 0` yields the empty list.
pub fn enumerate_trees(n: usize, m: i64) -> Vec<PlaneTree> {
    if n == 0 {
        return Vec::new();
    }
    let arity = (m + 1) as usize;
    let perms = permutations(n);
    let mut out = Vec::new();
    for shape in shapes(n, arity) {
        debug_assert_eq!(shape.size(), n);
        for labels in &perms {
            out.push(label_shape(&shape, labels));
        }
    }
    out
}

/// Expected tree count `n!/(mn+1) * C((m+1)n, n)` (exact, panics on
/// overflow at desk scales).
pub fn tree_count(n: u64, m: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let binom = |top: u64, k: u64| -> u128 {
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * (top - i) as u128 / (i + 1) as u128;
        }
        r
    };
    let fact: u128 = (1..=n as u128).product();
    let c = binom((m + 1) * n, n);
    u64::try_from(fact * c / (m * n + 1) as u128).expect("tree_count overflow")
}

/// Check whether `seq` is an `S`-cadet sequence of `tree`: every partial
/// `lsib` sum over a subchain must avoid the corresponding `S^-` set. Errors
/// (rather than returning `false`) when `seq` is not a cadet sequence at all.
pub fn is_s_cadet_sequence(spec: &OffsetSpec, tree: &PlaneTree, seq: &[usize]) -> Result<bool> {
    if !tree.is_cadet_sequence(seq) {
        return Err(Error::usage(format!("{seq:?} is not a cadet sequence")));
    }
    Ok(s_cadet_ok(spec, tree, seq))
}

fn s_cadet_ok(spec: &OffsetSpec, tree: &PlaneTree, seq: &[usize]) -> bool {
    let k = seq.len();
    for i in 0..k {
        let mut sum = 0i64;
        for j in (i + 1)..k {
            sum += tree.lsib(seq[j]);
            if spec.s_minus_contains(seq[i], seq[j], sum) {
                return false;
            }
        }
    }
    true
}

/// The 0-edge condition on a box: any slot-0 edge inside it must go from a
/// smaller to a larger label.
fn zero_edge_ok(tree: &PlaneTree, seq: &[usize]) -> bool {
    seq.windows(2)
        .all(|w| tree.lsib(w[1]) != 0 || w[0] < w[1])
}

/// A tree together with a partition of its nodes into cadet sequences.
/// Boxes are stored in ascending order of their first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxedTree {
    pub tree: PlaneTree,
    pub boxes: Vec<Vec<usize>>,
}

impl BoxedTree {
    /// Number of boxes `|B|`.
    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    /// Sign `(-1)^(n - |B|)` of this boxed tree in the Bernardi sum.
    pub fn sign(&self) -> i64 {
        if (self.tree.n() - self.box_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// A tree together with a set of marked cadet edges `(parent, child)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    pub tree: PlaneTree,
    pub marked: BTreeSet<(usize, usize)>,
}

impl MarkedTree {
    /// Validate the marked-tree invariants: every marked edge is a cadet
    /// edge, and marked slot-0 edges have increasing labels.
    pub fn new(tree: PlaneTree, marked: BTreeSet<(usize, usize)>) -> Result<Self> {
        for &(p, c) in &marked {
            if tree.cadet(p) != Some(c) {
                return Err(Error::usage(format!("marked edge ({p},{c}) is not a cadet edge")));
            }
            if tree.lsib(c) == 0 && p >= c {
                return Err(Error::usage(format!(
                    "marked slot-0 edge ({p},{c}) must have parent < child"
                )));
            }
        }
        Ok(MarkedTree { tree, marked })
    }

    /// `n - |marked|` = number of marked-edge components = `|B|` of the
    /// corresponding boxing.
    pub fn component_count(&self) -> usize {
        self.tree.n() - self.marked.len()
    }
}

/// Enumerate segmentations of the cadet chains of `tree` whose segments all
/// satisfy `accept`.
fn enumerate_segmentations(
    tree: &PlaneTree,
    accept: &dyn Fn(&[usize]) -> bool,
) -> Vec<Vec<Vec<usize>>> {
    let chains = tree.cadet_chains();
    // per chain: all valid segmentations
    let mut per_chain: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    for chain in &chains {
        let mut segs: Vec<Vec<Vec<usize>>> = Vec::new();
        fn rec(
            chain: &[usize],
            from: usize,
            acc: &mut Vec<Vec<usize>>,
            accept: &dyn Fn(&[usize]) -> bool,
            out: &mut Vec<Vec<Vec<usize>>>,
        ) {
            if from == chain.len() {
                out.push(acc.clone());
                return;
            }
            for to in (from + 1)..=chain.len() {
                let seg = &chain[from..to];
                if accept(seg) {
                    acc.push(seg.to_vec());
                    rec(chain, to, acc, accept, out);
                    acc.pop();
                }
            }
        }
        let mut acc = Vec::new();
        rec(chain, 0, &mut acc, accept, &mut segs);
        per_chain.push(segs);
    }
    // cartesian product across chains
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for segs in per_chain {
        let mut next = Vec::new();
        for partial in &out {
            for choice in &segs {
                let mut combined = partial.clone();
                combined.extend(choice.iter().cloned());
                next.push(combined);
            }
        }
        out = next;
    }
    for boxes in &mut out {
        boxes.sort_by_key(|b| b[0]);
    }
    out
}

/// Enumerate all `S`-boxings of `tree`: partitions of the nodes into
/// `S`-cadet sequences. The tree arity must be `max_offset(spec) + 1`.
pub fn enumerate_boxings(spec: &OffsetSpec, tree: &PlaneTree) -> Result<Vec<BoxedTree>> {
    if tree.arity() as i64 != spec.max_offset() + 1 {
        return Err(Error::usage(format!(
            "tree arity {} does not match spec arity {}",
            tree.arity(),
            spec.max_offset() + 1
        )));
    }
    Ok(enumerate_segmentations(tree, &|seg| s_cadet_ok(spec, tree, seg))
        .into_iter()
        .map(|boxes| BoxedTree {
            tree: tree.clone(),
            boxes,
        })
        .collect())
}

/// Enumerate all general boxings of `tree` (segments only need the 0-edge
/// condition), i.e. the fiber of `tree` in `U^(m)(n)`.
pub fn enumerate_general_boxings(tree: &PlaneTree) -> Vec<BoxedTree> {
    enumerate_segmentations(tree, &|seg| zero_edge_ok(tree, seg))
        .into_iter()
        .map(|boxes| BoxedTree {
            tree: tree.clone(),
            boxes,
        })
        .collect()
}

/// Marked-tree side of the boxing bijection: mark exactly the edges whose
/// endpoints share a box.
pub fn boxing_to_marking(boxed: &BoxedTree) -> MarkedTree {
    let mut marked = BTreeSet::new();
    for b in &boxed.boxes {
        for w in b.windows(2) {
            marked.insert((w[0], w[1]));
        }
    }
    MarkedTree {
        tree: boxed.tree.clone(),
        marked,
    }
}

/// Inverse of [`boxing_to_marking`]: boxes are the connected components of
/// the marked edges, read root-to-cadet.
pub fn marking_to_boxing(marked: &MarkedTree) -> BoxedTree {
    let tree = &marked.tree;
    let mut boxes = Vec::new();
    for chain in tree.cadet_chains() {
        let mut seg = vec![chain[0]];
        for w in chain.windows(2) {
            if marked.marked.contains(&(w[0], w[1])) {
                seg.push(w[1]);
            } else {
                boxes.push(std::mem::replace(&mut seg, vec![w[1]]));
            }
        }
        boxes.push(seg);
    }
    boxes.sort_by_key(|b| b[0]);
    BoxedTree {
        tree: tree.clone(),
        boxes,
    }
}

/// All valid markings of `tree` (subsets of cadet edges satisfying the
/// slot-0 condition). Used by the bijection test suites.
pub fn enumerate_markings(tree: &PlaneTree) -> Vec<MarkedTree> {
    let edges: Vec<(usize, usize)> = tree
        .cadet_edges()
        .into_iter()
        .filter(|&(p, c)| tree.lsib(c) != 0 || p < c)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        let marked: BTreeSet<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        out.push(MarkedTree {
            tree: tree.clone(),
            marked,
        });
    }
    out
}
