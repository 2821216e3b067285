//! Rank-decompositions and branch-decompositions: subcubic leaf-labeled
//! trees, exact optimum width by subset dynamic programming, and linkedness
//! checking.

use crate::chaingroup::ChainGroup;
use crate::error::{Error, Result};
use crate::fmatrix::{GroundSet, LabeledMatrix};
use crate::half::Half;
use crate::linking;
use crate::subset::{self, Subset};
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::rc::Rc;

/// A subcubic tree with a bijection between ground elements and its
/// degree <= 1 nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionTree {
    ground: GroundSet,
    nodes: usize,
    edges: Vec<(usize, usize)>,
    leaf_nodes: Vec<usize>,
}

impl DecompositionTree {
    pub fn new(
        ground: GroundSet,
        nodes: usize,
        edges: Vec<(usize, usize)>,
        leaf_nodes: Vec<usize>,
    ) -> Result<DecompositionTree> {
        let t = DecompositionTree {
            ground,
            nodes,
            edges,
            leaf_nodes,
        };
        t.validate()?;
        Ok(t)
    }

    /// The tree for a ground set with at most one element.
    pub fn trivial(ground: GroundSet) -> DecompositionTree {
        let n = ground.len();
        debug_assert!(n <= 1);
        DecompositionTree {
            ground,
            nodes: n,
            edges: Vec::new(),
            leaf_nodes: (0..n).collect(),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn leaf_nodes(&self) -> &[usize] {
        &self.leaf_nodes
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::MalformedTree { reason };
        if self.nodes == 0 {
            if !self.ground.is_empty() || !self.edges.is_empty() || !self.leaf_nodes.is_empty() {
                return Err(bad("empty tree with nonempty data".to_string()));
            }
            return Ok(());
        }
        if self.edges.len() + 1 != self.nodes {
            return Err(bad(format!(
                "{} edges for {} nodes",
                self.edges.len(),
                self.nodes
            )));
        }
        for &(u, v) in &self.edges {
            if u >= self.nodes || v >= self.nodes || u == v {
                return Err(bad(format!("bad edge ({u}, {v})")));
            }
        }
        let adj = self.adjacency();
        if adj.iter().any(|a| a.len() > 3) {
            return Err(bad("node of degree > 3".to_string()));
        }
        // connectivity
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(bad("tree is not connected".to_string()));
        }
        // leaf bijection
        if self.leaf_nodes.len() != self.ground.len() {
            return Err(bad("leaf map size differs from ground set".to_string()));
        }
        let mut used = vec![false; self.nodes];
        for &l in &self.leaf_nodes {
            if l >= self.nodes || used[l] {
                return Err(bad("leaf map is not injective".to_string()));
            }
            used[l] = true;
        }
        for u in 0..self.nodes {
            let is_leafish = adj[u].len() <= 1;
            if is_leafish != used[u] {
                return Err(bad(format!(
                    "node {u} breaks the leaf bijection (degree {})",
                    adj[u].len()
                )));
            }
        }
        Ok(())
    }

    /// Nodes on the `edges[e].0` side once edge e is removed.
    fn node_side(&self, e: usize) -> Vec<bool> {
        let (u0, v0) = self.edges[e];
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes];
        seen[u0] = true;
        let mut stack = vec![u0];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if u == u0 && v == v0 {
                    continue; // do not cross the removed edge
                }
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Ground elements on the `edges[e].0` side of edge e.
    pub fn edge_side(&self, e: usize) -> Subset {
        let side = self.node_side(e);
        let mut mask = 0u32;
        for (elem, &leaf) in self.leaf_nodes.iter().enumerate() {
            if side[leaf] {
                mask |= 1 << elem;
            }
        }
        mask
    }

    /// Canonical nested-parenthesis rendering, e.g. `((1 2) 3)`. Rooted at
    /// the leaf of the first ground element; degree-2 nodes are suppressed.
    pub fn to_paren_string(&self) -> String {
        match self.ground.len() {
            0 => return "()".to_string(),
            1 => return self.ground.label(0).to_string(),
            _ => {}
        }
        let adj = self.adjacency();
        let elem_of_node: HashMap<usize, usize> = self
            .leaf_nodes
            .iter()
            .enumerate()
            .map(|(e, &n)| (n, e))
            .collect();
        fn min_elem(
            u: usize,
            parent: usize,
            adj: &[Vec<usize>],
            elem_of_node: &HashMap<usize, usize>,
        ) -> usize {
            if let Some(&e) = elem_of_node.get(&u) {
                return e;
            }
            adj[u]
                .iter()
                .filter(|&&v| v != parent)
                .map(|&v| min_elem(v, u, adj, elem_of_node))
                .min()
                .unwrap_or(usize::MAX)
        }
        fn render(
            u: usize,
            parent: usize,
            adj: &[Vec<usize>],
            elem_of_node: &HashMap<usize, usize>,
            ground: &GroundSet,
        ) -> String {
            if let Some(&e) = elem_of_node.get(&u) {
                return ground.label(e).to_string();
            }
            let mut children: Vec<usize> = adj[u].iter().copied().filter(|&v| v != parent).collect();
            children.sort_by_key(|&v| min_elem(v, u, adj, elem_of_node));
            let parts: Vec<String> = children
                .iter()
                .map(|&v| render(v, u, adj, elem_of_node, ground))
                .collect();
            if parts.len() == 1 {
                parts.into_iter().next().unwrap()
            } else {
                format!("({})", parts.join(" "))
            }
        }
        let root_leaf = self.leaf_nodes[0];
        let anchor = adj[root_leaf][0];
        let rest = render(anchor, root_leaf, &adj, &elem_of_node, &self.ground);
        format!("({} {})", self.ground.label(0), rest)
    }
}

impl Serialize for DecompositionTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_paren_string())
    }
}

/// Parse the nested-parenthesis tree format against a ground set.
pub fn parse_tree(ground: &GroundSet, text: &str) -> Result<DecompositionTree> {
    #[derive(Debug)]
    enum Item {
        Leaf(String),
        Group(Vec<Item>),
    }
    fn tokenize(s: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            match ch {
                '(' | ')' => {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                    out.push(ch.to_string());
                }
                c if c.is_whitespace() => {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                }
                c => cur.push(c),
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    }
    fn parse_item(tokens: &[String], pos: &mut usize) -> Result<Item> {
        let err = |reason: &str| Error::ParseError {
            line: 0,
            reason: reason.to_string(),
        };
        if *pos >= tokens.len() {
            return Err(err("unexpected end of tree expression"));
        }
        if tokens[*pos] == "(" {
            *pos += 1;
            let mut items = Vec::new();
            while *pos < tokens.len() && tokens[*pos] != ")" {
                items.push(parse_item(tokens, pos)?);
            }
            if *pos >= tokens.len() {
                return Err(err("missing `)`"));
            }
            *pos += 1;
            Ok(Item::Group(items))
        } else if tokens[*pos] == ")" {
            Err(err("unexpected `)`"))
        } else {
            let label = tokens[*pos].clone();
            *pos += 1;
            Ok(Item::Leaf(label))
        }
    }

    let tokens = tokenize(text);
    let mut pos = 0usize;
    let item = parse_item(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::ParseError {
            line: 0,
            reason: "trailing tokens after tree expression".to_string(),
        });
    }

    struct Builder<'a> {
        ground: &'a GroundSet,
        edges: Vec<(usize, usize)>,
        leaf_nodes: Vec<Option<usize>>,
        next: usize,
    }
    impl Builder<'_> {
        fn node(&mut self) -> usize {
            let id = self.next;
            self.next += 1;
            id
        }
        fn build(&mut self, item: &Item) -> Result<usize> {
            match item {
                Item::Leaf(label) => {
                    let e = self.ground.position(label)?;
                    let id = self.node();
                    if self.leaf_nodes[e].is_some() {
                        return Err(Error::ParseError {
                            line: 0,
                            reason: format!("label `{label}` appears twice"),
                        });
                    }
                    self.leaf_nodes[e] = Some(id);
                    Ok(id)
                }
                Item::Group(items) => {
                    if items.len() != 2 {
                        return Err(Error::ParseError {
                            line: 0,
                            reason: "tree groups must pair exactly two subtrees".to_string(),
                        });
                    }
                    let a = self.build(&items[0])?;
                    let b = self.build(&items[1])?;
                    let id = self.node();
                    self.edges.push((id, a));
                    self.edges.push((id, b));
                    Ok(id)
                }
            }
        }
    }

    match (&item, ground.len()) {
        (Item::Group(items), 0) if items.is_empty() => {
            return DecompositionTree::new(ground.clone(), 0, Vec::new(), Vec::new())
        }
        (Item::Leaf(label), 1) => {
            ground.position(label)?;
            return DecompositionTree::new(ground.clone(), 1, Vec::new(), vec![0]);
        }
        _ => {}
    }
    // top-level group is the root edge between its two sides
    let Item::Group(items) = &item else {
        return Err(Error::ParseError {
            line: 0,
            reason: "expected a parenthesized tree".to_string(),
        });
    };
    if items.len() != 2 {
        return Err(Error::ParseError {
            line: 0,
            reason: "top-level tree must pair exactly two subtrees".to_string(),
        });
    }
    let mut b = Builder {
        ground,
        edges: Vec::new(),
        leaf_nodes: vec![None; ground.len()],
        next: 0,
    };
    let left = b.build(&items[0])?;
    let right = b.build(&items[1])?;
    b.edges.push((left, right));
    let leaf_nodes: Vec<usize> = b
        .leaf_nodes
        .iter()
        .map(|l| {
            l.ok_or(Error::ParseError {
                line: 0,
                reason: "tree does not cover every ground element".to_string(),
            })
        })
        .collect::<Result<_>>()?;
    DecompositionTree::new(ground.clone(), b.next, b.edges, leaf_nodes)
}

/// Memoized cut values for every subset of a ground set.
pub struct CutTable {
    ground: GroundSet,
    values: Vec<Half>,
}

impl CutTable {
    pub fn from_fn(ground: GroundSet, f: impl Fn(Subset) -> Half) -> CutTable {
        let n = ground.len();
        let values = (0..(1u32 << n)).map(f).collect();
        CutTable { ground, values }
    }

    pub fn cut_rank(m: &LabeledMatrix) -> CutTable {
        CutTable::from_fn(m.ground().clone(), |x| Half::from_int(m.cut_rank(x) as i64))
    }

    pub fn chain_connectivity(n: &ChainGroup) -> CutTable {
        let dims = n.times_dims();
        let dim = n.dim() as i64;
        let full = n.ground().full_mask();
        CutTable::from_fn(n.ground().clone(), |x| {
            Half::from_twice(dim - dims[(full & !x) as usize] as i64 - dims[x as usize] as i64)
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn value(&self, x: Subset) -> Half {
        self.values[x as usize]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeWidth {
    pub nodes: (usize, usize),
    pub width: Half,
}

/// A decomposition tree together with its per-edge widths and their maximum.
#[derive(Clone, Debug, Serialize)]
pub struct WidthReport {
    pub width: Half,
    pub per_edge: Vec<EdgeWidth>,
    pub tree: DecompositionTree,
}

/// Evaluate a tree against a cut-value oracle: the width of each edge is the
/// cut value of its leaf partition, and the report's width is the maximum.
pub fn decomposition_width(table: &CutTable, tree: &DecompositionTree) -> Result<WidthReport> {
    tree.validate()?;
    if tree.ground() != &table.ground {
        return Err(Error::MalformedTree {
            reason: "tree ground set does not match the oracle".to_string(),
        });
    }
    let mut per_edge = Vec::with_capacity(tree.edges.len());
    let mut width = Half::ZERO;
    for e in 0..tree.edges.len() {
        let side = tree.edge_side(e);
        let w = table.value(side);
        width = width.max(w);
        per_edge.push(EdgeWidth {
            nodes: tree.edges[e],
            width: w,
        });
    }
    Ok(WidthReport {
        width,
        per_edge,
        tree: tree.clone(),
    })
}

/// Subset DP table: `best[X]` is the least achievable maximum width of a
/// rooted subtree carrying X, counting the edge above X (of width cut(X)).
struct WidthDp {
    best: Vec<Half>,
}

impl WidthDp {
    fn new(table: &CutTable) -> WidthDp {
        let n = table.ground.len();
        let full = subset::full(n);
        let mut best = vec![Half::ZERO; 1 << n];
        for mask in 1u32..=full {
            if mask == 0 {
                continue;
            }
            if subset::size(mask) == 1 {
                best[mask as usize] = table.value(mask);
                continue;
            }
            let mut inner = None::<Half>;
            let low = mask & mask.wrapping_neg();
            let mut s = (mask - 1) & mask;
            while s > 0 {
                if s & low != 0 {
                    let m = best[s as usize].max(best[(mask & !s) as usize]);
                    inner = Some(match inner {
                        None => m,
                        Some(cur) => cur.min(m),
                    });
                }
                s = (s - 1) & mask;
            }
            best[mask as usize] = table.value(mask).max(inner.expect("split exists"));
        }
        WidthDp { best }
    }

    /// Splits of `x` (first component containing x's lowest element) whose
    /// two sides both fit under `limit`, in canonical subset order.
    fn splits_under(&self, x: Subset, limit: Half) -> Vec<(Subset, Subset)> {
        let low = x & x.wrapping_neg();
        let mut out: Vec<(Subset, Subset)> = Vec::new();
        let mut s = (x - 1) & x;
        while s > 0 {
            if s & low != 0 {
                let rest = x & !s;
                if self.best[s as usize] <= limit && self.best[rest as usize] <= limit {
                    out.push((s, rest));
                }
            }
            s = (s - 1) & x;
        }
        out.sort_by(|a, b| subset::canonical_cmp(a.0, b.0));
        out
    }
}

/// Binary fragments used while materializing trees from the DP.
#[derive(Clone)]
enum Frag {
    Leaf(usize),
    Node(Rc<Frag>, Rc<Frag>),
}

fn frag_to_tree(ground: &GroundSet, left: &Frag, right: &Frag) -> DecompositionTree {
    let n = ground.len();
    let mut edges = Vec::new();
    let mut leaf_nodes = vec![0usize; n];
    let mut next = 0usize;
    fn build(
        f: &Frag,
        edges: &mut Vec<(usize, usize)>,
        leaf_nodes: &mut [usize],
        next: &mut usize,
    ) -> usize {
        match f {
            Frag::Leaf(e) => {
                let id = *next;
                *next += 1;
                leaf_nodes[*e] = id;
                id
            }
            Frag::Node(a, b) => {
                let ra = build(a, edges, leaf_nodes, next);
                let rb = build(b, edges, leaf_nodes, next);
                let id = *next;
                *next += 1;
                edges.push((id, ra));
                edges.push((id, rb));
                id
            }
        }
    }
    let l = build(left, &mut edges, &mut leaf_nodes, &mut next);
    let r = build(right, &mut edges, &mut leaf_nodes, &mut next);
    edges.push((l, r));
    DecompositionTree {
        ground: ground.clone(),
        nodes: next,
        edges,
        leaf_nodes,
    }
}

fn first_frag(dp: &WidthDp, x: Subset, limit: Half) -> Frag {
    if subset::size(x) == 1 {
        return Frag::Leaf(x.trailing_zeros() as usize);
    }
    let (a, b) = dp.splits_under(x, limit)[0];
    Frag::Node(
        Rc::new(first_frag(dp, a, limit)),
        Rc::new(first_frag(dp, b, limit)),
    )
}

/// All rooted fragments over `x` whose edges stay under `limit`, memoized.
fn all_frags(
    dp: &WidthDp,
    x: Subset,
    limit: Half,
    memo: &mut HashMap<Subset, Rc<Vec<Rc<Frag>>>>,
) -> Rc<Vec<Rc<Frag>>> {
    if let Some(v) = memo.get(&x) {
        return v.clone();
    }
    let mut out: Vec<Rc<Frag>> = Vec::new();
    if subset::size(x) == 1 {
        out.push(Rc::new(Frag::Leaf(x.trailing_zeros() as usize)));
    } else {
        for (a, b) in dp.splits_under(x, limit) {
            let fa = all_frags(dp, a, limit, memo);
            let fb = all_frags(dp, b, limit, memo);
            for l in fa.iter() {
                for r in fb.iter() {
                    out.push(Rc::new(Frag::Node(l.clone(), r.clone())));
                }
            }
        }
    }
    let rc = Rc::new(out);
    memo.insert(x, rc.clone());
    rc
}

/// Exact optimum decomposition for an arbitrary symmetric cut oracle, with a
/// witness tree (the first optimal tree in canonical split order).
pub fn optimal_decomposition(table: &CutTable) -> Result<WidthReport> {
    let n = table.ground.len();
    if n <= 1 {
        let tree = DecompositionTree::trivial(table.ground.clone());
        return Ok(WidthReport {
            width: Half::ZERO,
            per_edge: Vec::new(),
            tree,
        });
    }
    let dp = WidthDp::new(table);
    let full = subset::full(n);
    let low = full & full.wrapping_neg();
    let mut best = None::<Half>;
    let mut s = (full - 1) & full;
    while s > 0 {
        if s & low != 0 {
            let m = dp.best[s as usize].max(dp.best[(full & !s) as usize]);
            best = Some(match best {
                None => m,
                Some(cur) => cur.min(m),
            });
        }
        s = (s - 1) & full;
    }
    let width = best.expect("nonempty split");
    let (a, b) = dp.splits_under(full, width)[0];
    let tree = frag_to_tree(
        &table.ground,
        &first_frag(&dp, a, width),
        &first_frag(&dp, b, width),
    );
    decomposition_width(table, &tree)
}

/// Exact rank-width of a matrix with a witness rank-decomposition.
/// A matrix on at most one element has rank-width 0.
pub fn rank_width(m: &LabeledMatrix) -> Result<WidthReport> {
    rank_width_with_cap(m, 12)
}

pub fn rank_width_with_cap(m: &LabeledMatrix, cap: usize) -> Result<WidthReport> {
    if m.n() > cap {
        return Err(Error::GroundSetTooLarge { n: m.n(), cap });
    }
    optimal_decomposition(&CutTable::cut_rank(m))
}

/// Exact branch-width of a chain-group with a witness branch-decomposition.
pub fn branch_width(n: &ChainGroup) -> Result<WidthReport> {
    branch_width_with_cap(n, 12)
}

pub fn branch_width_with_cap(n: &ChainGroup, cap: usize) -> Result<WidthReport> {
    if n.ground().len() > cap {
        return Err(Error::GroundSetTooLarge {
            n: n.ground().len(),
            cap,
        });
    }
    optimal_decomposition(&CutTable::chain_connectivity(n))
}

/// Far side of edge `f` away from edge `g`: the leaf elements in the
/// component of the tree minus f that does not contain g.
fn far_side(tree: &DecompositionTree, f: usize, g: usize) -> Subset {
    let side_nodes = tree.node_side(f);
    let side = tree.edge_side(f);
    if f == g {
        return side;
    }
    // g's endpoints share a component of T \ f; test one of them
    if side_nodes[tree.edges[g].0] {
        tree.ground.full_mask() & !side
    } else {
        side
    }
}

/// Far sides of two edges and the edges on the path connecting them
/// (inclusive of both).
fn edge_far_sides(tree: &DecompositionTree, f: usize, g: usize) -> (Subset, Subset, Vec<usize>) {
    let full = tree.ground.full_mask();
    let far_f = far_side(tree, f, g);
    let far_g = far_side(tree, g, f);
    // e lies between f and g iff its two sides separate far_f from far_g
    let mut path = Vec::new();
    for e in 0..tree.edges.len() {
        if e == f || e == g {
            path.push(e);
            continue;
        }
        let s = tree.edge_side(e);
        let c = full & !s;
        let separates =
            (far_f & !s == 0 && far_g & !c == 0) || (far_f & !c == 0 && far_g & !s == 0);
        if separates {
            path.push(e);
        }
    }
    (far_f, far_g, path)
}

fn is_linked_with_table(
    n: &ChainGroup,
    table: &CutTable,
    tree: &DecompositionTree,
) -> Result<bool> {
    tree.validate()?;
    if tree.ground() != n.ground() {
        return Err(Error::MalformedTree {
            reason: "tree ground set does not match the chain-group".to_string(),
        });
    }
    let m = tree.edges.len();
    for f in 0..m {
        for g in (f + 1)..m {
            let (far_f, far_g, path) = edge_far_sides(tree, f, g);
            let path_min = path
                .iter()
                .map(|&e| table.value(tree.edge_side(e)))
                .min()
                .expect("path includes f and g");
            let (best, _) = linking::min_over_range(table, far_f, far_g);
            if path_min != best {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every pair of edges of a branch-decomposition realizes the
/// linking minimum along its connecting path.
pub fn is_linked(n: &ChainGroup, tree: &DecompositionTree) -> Result<bool> {
    let table = CutTable::chain_connectivity(n);
    is_linked_with_table(n, &table, tree)
}

/// A width-optimal branch-decomposition that is linked, found by enumerating
/// optimal trees in canonical split order. Such a tree always exists;
/// exhausting the enumeration reports `ExhaustionFailure`.
pub fn find_linked_decomposition(n: &ChainGroup) -> Result<DecompositionTree> {
    find_linked_decomposition_with_cap(n, 8)
}

pub fn find_linked_decomposition_with_cap(
    n: &ChainGroup,
    cap: usize,
) -> Result<DecompositionTree> {
    let count = n.ground().len();
    if count > cap {
        return Err(Error::GroundSetTooLarge { n: count, cap });
    }
    let table = CutTable::chain_connectivity(n);
    if count <= 1 {
        return Ok(DecompositionTree::trivial(n.ground().clone()));
    }
    let report = optimal_decomposition(&table)?;
    let width = report.width;
    let dp = WidthDp::new(&table);
    let full = subset::full(count);
    let mut memo: HashMap<Subset, Rc<Vec<Rc<Frag>>>> = HashMap::new();
    for (a, b) in dp.splits_under(full, width) {
        let fa = all_frags(&dp, a, width, &mut memo);
        let fb = all_frags(&dp, b, width, &mut memo);
        for l in fa.iter() {
            for r in fb.iter() {
                let tree = frag_to_tree(n.ground(), l, r);
                if is_linked_with_table(n, &table, &tree)? {
                    return Ok(tree);
                }
            }
        }
    }
    Err(Error::ExhaustionFailure)
}
