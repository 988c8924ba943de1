//! Noncrossing trees with convex geodesics and their Boolean subposets.
//!
//! Edges are straight segments between configuration points. A forest is
//! noncrossing when no edge passes through a third point and no two edges
//! meet away from a shared endpoint. It has convex geodesics when the hull
//! of every path in it contains no configuration point off the path. The
//! subforests of such a spanning tree give a copy of a Boolean lattice
//! inside NC(P).

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::configuration::HullConfig;
use crate::error::{Error, Result};
use crate::hullposet::{self, HullElement};
use crate::lattice::{bits, join_partitions, CrossingRule, NCLattice, Partition};
use crate::oracle::{angular_cmp, ExactPoint};

/// An edge set on points `0..n`, edges stored as `(low, high)` and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Forest {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::MalformedEdges(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::MalformedEdges(format!(
                    "edge {a}-{b} out of range for {n} points"
                )));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        if out.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedEdges("repeated edge".into()));
        }
        Ok(Forest { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Forest {
            n,
            edges: Vec::new(),
        }
    }

    /// Parses `0-1;1-2;2-3`; the empty string is the empty forest.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        if text.is_empty() {
            return Ok(Forest::empty(n));
        }
        let mut edges = Vec::new();
        for item in text.split(';') {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::MalformedEdges(format!("cannot parse {item:?}")))?;
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::MalformedEdges(format!("cannot parse {item:?}")))
            };
            edges.push((num(a)?, num(b)?));
        }
        Forest::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// The forest on the edges selected by `mask`.
    pub fn subforest(&self, mask: u64) -> Forest {
        Forest {
            n: self.n,
            edges: bits(mask).map(|i| self.edges[i]).collect(),
        }
    }

    /// Applies `map[old] = new` to the endpoints.
    pub fn relabel(&self, map: &[usize]) -> Forest {
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (map[a], map[b])).collect();
        Forest::new(self.n, &edges).expect("relabeling is a bijection")
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }

    /// Connected components as bit masks, ordered by smallest point.
    pub fn components(&self) -> Vec<u64> {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut masks: HashMap<usize, u64> = HashMap::new();
        for p in 0..self.n {
            *masks.entry(uf.find(p)).or_default() |= 1 << p;
        }
        let mut out: Vec<u64> = masks.into_values().collect();
        out.sort_unstable_by_key(|m| m.trailing_zeros());
        out
    }

    /// Vertices of the path from `x` to `y`, if they are connected.
    pub fn path(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.n];
        parent[x] = x;
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        if parent[y] == usize::MAX {
            return None;
        }
        let mut path = vec![y];
        let mut v = y;
        while v != x {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Points with exactly one incident edge.
    pub fn leaves(&self) -> Vec<usize> {
        self.adjacency()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.len() == 1)
            .map(|(p, _)| p)
            .collect()
    }

    fn replace(&self, old: (usize, usize), new: (usize, usize)) -> Result<Forest> {
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&e| e != (old.0.min(old.1), old.0.max(old.1)))
            .chain(std::iter::once(new))
            .collect();
        Forest::new(self.n, &edges)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Merges the classes of `a` and `b`; false if they were already one.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Precomputed edge geometry for one configuration.
#[derive(Debug, Clone)]
pub struct TreeContext {
    config: HullConfig,
    rule: CrossingRule,
    /// `valid[a][b]`: the segment `ab` contains no third point.
    valid: Vec<Vec<bool>>,
}

impl TreeContext {
    pub fn new(config: &HullConfig) -> Self {
        let n = config.n();
        let valid: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        a != b
                            && (0..n).all(|p| p == a || p == b || !config.strictly_between(a, b, p))
                    })
                    .collect()
            })
            .collect();
        TreeContext {
            config: config.clone(),
            rule: CrossingRule::new(config),
            valid,
        }
    }

    pub fn config(&self) -> &HullConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    /// Edges that pass through no third point, sorted.
    pub fn valid_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.valid[a][b])
            .collect()
    }

    pub fn edge_is_valid(&self, a: usize, b: usize) -> bool {
        self.valid[a][b]
    }

    /// Two valid edges without a common endpoint cross.
    pub fn edges_cross(&self, e: (usize, usize), f: (usize, usize)) -> bool {
        if e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
            return false;
        }
        self.rule
            .masks_cross(1 << e.0 | 1 << e.1, 1 << f.0 | 1 << f.1)
    }

    fn check_n(&self, forest: &Forest) -> Result<()> {
        if forest.n() != self.n() {
            return Err(Error::MalformedEdges(format!(
                "forest on {} points, configuration has {}",
                forest.n(),
                self.n()
            )));
        }
        Ok(())
    }

    pub fn is_noncrossing_forest(&self, forest: &Forest) -> bool {
        let e = forest.edges();
        forest.n() == self.n()
            && e.iter().all(|&(a, b)| self.valid[a][b])
            && e.iter()
                .enumerate()
                .all(|(i, &x)| e[i + 1..].iter().all(|&y| !self.edges_cross(x, y)))
            && forest.is_acyclic()
    }

    pub fn is_noncrossing_tree(&self, forest: &Forest) -> bool {
        forest.len() + 1 == self.n() && self.is_noncrossing_forest(forest)
    }

    /// Pairwise-path test; the forest is assumed noncrossing.
    fn geodesics_convex(&self, forest: &Forest) -> bool {
        let n = self.n();
        for x in 0..n {
            for y in x + 1..n {
                if let Some(path) = forest.path(x, y) {
                    let mask = path.iter().fold(0u64, |m, &p| m | 1 << p);
                    if self.rule.hull_points(mask) != mask {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn has_convex_geodesics(&self, forest: &Forest) -> Result<bool> {
        self.check_n(forest)?;
        if !self.is_noncrossing_forest(forest) {
            return Err(Error::InvalidForest(format!(
                "{forest} is not a noncrossing forest"
            )));
        }
        Ok(self.geodesics_convex(forest))
    }

    /// A noncrossing spanning tree with convex geodesics.
    pub fn is_cg_tree(&self, forest: &Forest) -> bool {
        self.is_noncrossing_tree(forest) && self.geodesics_convex(forest)
    }

    /// All noncrossing spanning trees with convex geodesics, sorted.
    pub fn enumerate_cg_trees(&self, max_trees: usize) -> Result<Vec<Forest>> {
        let n = self.n();
        let edges = self.valid_edges();
        let m = edges.len();
        let crossing: Vec<Vec<bool>> = edges
            .iter()
            .map(|&e| edges.iter().map(|&f| self.edges_cross(e, f)).collect())
            .collect();
        let mut search = Search {
            ctx: self,
            edges: &edges,
            crossing: &crossing,
            chosen: Vec::with_capacity(n),
            comp: (0..n).map(|p| 1u64 << p).collect(),
            paths: (0..n)
                .map(|x| (0..n).map(|y| if x == y { 1u64 << x } else { 0 }).collect())
                .collect(),
            out: Vec::new(),
            max: max_trees,
        };
        if n == 1 {
            return Ok(vec![Forest::empty(1)]);
        }
        search.run(0, m)?;
        let mut out = search.out;
        out.sort();
        Ok(out)
    }

    /// Whether `partition` is `Part(mu)` for some subforest `mu` of `tree`.
    pub fn in_bool(&self, tree: &Forest, partition: &Partition) -> bool {
        in_bool(tree, partition)
    }

    fn point(&self, realized: &[ExactPoint], p: usize) -> ExactPoint {
        realized[p].clone()
    }

    /// Slides `e = {p, q}` along `f = {q, r}` in `tree`, giving `{p, r}`.
    pub fn slide(&self, tree: &Forest, e: (usize, usize), f: (usize, usize)) -> Result<Forest> {
        self.check_n(tree)?;
        if !tree.contains(e.0, e.1) || !tree.contains(f.0, f.1) {
            return Err(Error::InvalidForest(format!(
                "{e:?} or {f:?} is not an edge of {tree}"
            )));
        }
        let (p, q, r) = slide_roles(e, f)?;
        let realized = self.config.realize();
        let center = self.point(&realized, q);
        let mut around: Vec<usize> = tree
            .edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == q {
                    Some(b)
                } else if b == q {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        around.sort_by(|&a, &b| angular_cmp(&center, &realized[a], &realized[b]));
        let d = around.len();
        let ip = around
            .iter()
            .position(|&x| x == p)
            .expect("p is a neighbour of q");
        let ir = around
            .iter()
            .position(|&x| x == r)
            .expect("r is a neighbour of q");
        if (ip + 1) % d != ir && (ir + 1) % d != ip {
            return Err(Error::SlideNotAdjacent(e, f));
        }
        if tree.contains(p, r) {
            return Err(Error::SlideLeavesNoncrossing(format!(
                "edge {p}-{r} already present"
            )));
        }
        let out = tree.replace(e, (p, r))?;
        if !self.valid[p][r] {
            return Err(Error::SlideLeavesNoncrossing(format!(
                "edge {p}-{r} passes through a point"
            )));
        }
        if !self.is_noncrossing_forest(&out) {
            return Err(Error::SlideLeavesNoncrossing(format!(
                "{out} has crossing edges"
            )));
        }
        Ok(out)
    }
}

struct Search<'a> {
    ctx: &'a TreeContext,
    edges: &'a [(usize, usize)],
    crossing: &'a [Vec<bool>],
    chosen: Vec<usize>,
    /// Component mask of every point.
    comp: Vec<u64>,
    /// `paths[x][y]`: vertex mask of the path between `x` and `y` (0 if none).
    paths: Vec<Vec<u64>>,
    out: Vec<Forest>,
    max: usize,
}

impl Search<'_> {
    fn run(&mut self, next: usize, m: usize) -> Result<()> {
        let n = self.ctx.n();
        let need = n - 1 - self.chosen.len();
        if need == 0 {
            let edges: Vec<(usize, usize)> = self.chosen.iter().map(|&i| self.edges[i]).collect();
            self.out.push(Forest { n, edges });
            if self.out.len() > self.max {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} trees",
                    self.max
                )));
            }
            return Ok(());
        }
        if m - next < need {
            return Ok(());
        }
        let (u, v) = self.edges[next];
        let joinable =
            self.comp[u] >> v & 1 == 0 && self.chosen.iter().all(|&c| !self.crossing[next][c]);
        if joinable {
            let (cu, cv) = (self.comp[u], self.comp[v]);
            let mut new_paths = Vec::new();
            let mut clean = true;
            'outer: for x in bits(cu) {
                for y in bits(cv) {
                    let mask = self.paths[x][u] | self.paths[v][y];
                    if self.ctx.rule.hull_points(mask) != mask {
                        clean = false;
                        break 'outer;
                    }
                    new_paths.push((x, y, mask));
                }
            }
            if clean {
                for &(x, y, mask) in &new_paths {
                    self.paths[x][y] = mask;
                    self.paths[y][x] = mask;
                }
                let merged = cu | cv;
                for p in bits(merged) {
                    self.comp[p] = merged;
                }
                self.chosen.push(next);
                let res = self.run(next + 1, m);
                self.chosen.pop();
                for p in bits(cu) {
                    self.comp[p] = cu;
                }
                for p in bits(cv) {
                    self.comp[p] = cv;
                }
                for &(x, y, _) in &new_paths {
                    self.paths[x][y] = 0;
                    self.paths[y][x] = 0;
                }
                res?;
            }
        }
        self.run(next + 1, m)
    }
}

fn slide_roles(e: (usize, usize), f: (usize, usize)) -> Result<(usize, usize, usize)> {
    let shared: Vec<usize> = [e.0, e.1]
        .into_iter()
        .filter(|&x| x == f.0 || x == f.1)
        .collect();
    if shared.len() != 1 {
        return Err(Error::SlideNotIncident(e, f));
    }
    let q = shared[0];
    let p = if e.0 == q { e.1 } else { e.0 };
    let r = if f.0 == q { f.1 } else { f.0 };
    Ok((p, q, r))
}

/// Largest tree count returned by [`enumerate_cg_trees`].
pub const DEFAULT_MAX_TREES: usize = 2_000_000;

pub fn is_noncrossing_tree(config: &HullConfig, edges: &Forest) -> Result<bool> {
    let ctx = TreeContext::new(config);
    ctx.check_n(edges)?;
    Ok(ctx.is_noncrossing_tree(edges))
}

pub fn has_convex_geodesics(config: &HullConfig, forest: &Forest) -> Result<bool> {
    TreeContext::new(config).has_convex_geodesics(forest)
}

/// The partition into connected components.
pub fn part_of(config: &HullConfig, forest: &Forest) -> Result<Partition> {
    if !has_convex_geodesics(config, forest)? {
        return Err(Error::InvalidForest(format!(
            "{forest} lacks convex geodesics"
        )));
    }
    Ok(components_partition(forest))
}

fn components_partition(forest: &Forest) -> Partition {
    Partition::from_masks(forest.n(), forest.components()).expect("components partition the points")
}

pub fn enumerate_cg_trees(config: &HullConfig) -> Result<Vec<Forest>> {
    TreeContext::new(config).enumerate_cg_trees(DEFAULT_MAX_TREES)
}

/// Membership in `Bool(tree)`: the tree edges inside blocks of `partition`
/// must connect each block.
pub fn in_bool(tree: &Forest, partition: &Partition) -> bool {
    if tree.n() != partition.n() {
        return false;
    }
    let inside: Vec<(usize, usize)> = tree
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| partition.same_block(a, b))
        .collect();
    let mu = Forest {
        n: tree.n(),
        edges: inside,
    };
    components_partition(&mu) == *partition
}

/// The partitions of all subforests of a spanning cg tree, indexed by the
/// edge subset mask.
#[derive(Debug, Clone)]
pub struct BoolSubposet {
    pub tree: Forest,
    pub elements: Vec<Partition>,
}

impl BoolSubposet {
    /// Elements distinct, and refinement matching inclusion of edge sets.
    pub fn is_boolean(&self) -> bool {
        let m = self.elements.len();
        let distinct: HashSet<&Partition> = self.elements.iter().collect();
        distinct.len() == m
            && (0..m).all(|s| {
                (0..m).all(|t| self.elements[s].refines(&self.elements[t]) == (s & !t == 0))
            })
    }
}

pub fn bool_subposet(config: &HullConfig, tree: &Forest) -> Result<BoolSubposet> {
    let ctx = TreeContext::new(config);
    ctx.check_n(tree)?;
    if !ctx.is_cg_tree(tree) {
        return Err(Error::InvalidForest(format!(
            "{tree} is not a noncrossing tree with convex geodesics"
        )));
    }
    if tree.len() > 20 {
        return Err(Error::BudgetExceeded(
            "Boolean subposet with more than 2^20 elements".into(),
        ));
    }
    let elements = (0..1u64 << tree.len())
        .map(|mask| components_partition(&tree.subforest(mask)))
        .collect();
    Ok(BoolSubposet {
        tree: tree.clone(),
        elements,
    })
}

fn atom_edge(lattice: &NCLattice, atom: usize) -> Result<(usize, usize)> {
    let p = lattice.element(atom).map_err(|_| Error::NotAnAtom(atom))?;
    if p.rank() != 1 {
        return Err(Error::NotAnAtom(atom));
    }
    let block = p
        .masks()
        .iter()
        .copied()
        .find(|b| b.count_ones() == 2)
        .expect("rank one");
    let mut it = bits(block);
    Ok((it.next().unwrap(), it.next().unwrap()))
}

/// Every join of a subset of the atoms has rank equal to the subset size.
pub fn atoms_generate_boolean(lattice: &NCLattice, atom_set: &[usize]) -> Result<bool> {
    for &a in atom_set {
        atom_edge(lattice, a)?;
    }
    if atom_set.len() > 20 {
        return Err(Error::BudgetExceeded("more than 20 atoms".into()));
    }
    let rule = lattice.rule();
    let mut joins = vec![Partition::singletons(lattice.n())];
    for &a in atom_set {
        let atom = &lattice.elements()[a];
        let size = joins.len();
        for s in 0..size {
            let j = join_partitions(rule, &joins[s], atom);
            if j.rank() != (s as u64).count_ones() as usize + 1 {
                return Ok(false);
            }
            joins.push(j);
        }
    }
    Ok(true)
}

/// All sets of `n - 1` atoms whose subset joins are Boolean, as sorted
/// element index lists.
pub fn maximal_boolean_atom_sets(lattice: &NCLattice, max_sets: usize) -> Result<Vec<Vec<usize>>> {
    let n = lattice.n();
    if n > 16 {
        return Err(Error::BudgetExceeded(format!(
            "atom set search limited to 16 points, got {n}"
        )));
    }
    let atoms = lattice.atoms();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut joins = vec![Partition::singletons(n)];
    atom_search(
        lattice,
        &atoms,
        0,
        &mut chosen,
        &mut joins,
        &mut out,
        max_sets,
    )?;
    Ok(out)
}

fn atom_search(
    lattice: &NCLattice,
    atoms: &[usize],
    next: usize,
    chosen: &mut Vec<usize>,
    joins: &mut Vec<Partition>,
    out: &mut Vec<Vec<usize>>,
    max: usize,
) -> Result<()> {
    let need = lattice.n() - 1 - chosen.len();
    if need == 0 {
        out.push(chosen.clone());
        if out.len() > max {
            return Err(Error::BudgetExceeded(format!("more than {max} atom sets")));
        }
        return Ok(());
    }
    for t in next..atoms.len() {
        if atoms.len() - t < need {
            break;
        }
        let atom = &lattice.elements()[atoms[t]];
        let size = joins.len();
        let mut ok = true;
        for s in 0..size {
            let j = join_partitions(lattice.rule(), &joins[s], atom);
            if j.rank() != (s as u64).count_ones() as usize + 1 {
                ok = false;
                break;
            }
            joins.push(j);
        }
        if ok {
            chosen.push(atoms[t]);
            atom_search(lattice, atoms, t + 1, chosen, joins, out, max)?;
            chosen.pop();
        }
        joins.truncate(size);
    }
    Ok(())
}

/// Edge set of an atom set, as a forest.
pub fn atoms_to_forest(lattice: &NCLattice, atom_set: &[usize]) -> Result<Forest> {
    let edges = atom_set
        .iter()
        .map(|&a| atom_edge(lattice, a))
        .collect::<Result<Vec<_>>>()?;
    Forest::new(lattice.n(), &edges)
}

/// `tree` with `e` slid along `f`.
pub fn slide(
    config: &HullConfig,
    tree: &Forest,
    e: (usize, usize),
    f: (usize, usize),
) -> Result<Forest> {
    TreeContext::new(config).slide(tree, e, f)
}

/// Whether the block of `p` holds both `q` and `r` or neither.
pub fn slide_criterion(partition: &Partition, p: usize, q: usize, r: usize) -> bool {
    partition.same_block(p, q) == partition.same_block(p, r)
}

/// Membership of `partition` in `Bool(after)`, given that it lies in
/// `Bool(before)`.
pub fn slide_membership(
    config: &HullConfig,
    before: &Forest,
    after: &Forest,
    partition: &Partition,
) -> Result<bool> {
    let ctx = TreeContext::new(config);
    ctx.check_n(before)?;
    ctx.check_n(after)?;
    if !in_bool(before, partition) {
        return Err(Error::NotInBool(partition.to_string()));
    }
    Ok(in_bool(after, partition))
}

/// Result of [`boolean_union_check`]: for each lattice element, the index
/// of a tree whose Boolean subposet contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionReport {
    pub covered: bool,
    pub witnesses: Vec<Option<usize>>,
    pub missing: Option<usize>,
}

pub fn boolean_union_check(lattice: &NCLattice, trees: &[Forest]) -> UnionReport {
    let witnesses: Vec<Option<usize>> = lattice
        .elements()
        .iter()
        .map(|p| trees.iter().position(|t| in_bool(t, p)))
        .collect();
    let missing = witnesses.iter().position(Option::is_none);
    UnionReport {
        covered: missing.is_none(),
        witnesses,
        missing,
    }
}

/// Whether every leaf of `tree` is a corner (endpoints for a segment).
pub fn leaves_on_corners(config: &HullConfig, tree: &Forest) -> bool {
    tree.leaves().iter().all(|&p| config.is_corner(p))
}

/// A configuration class together with its point labels.
struct Labelled {
    ctx: TreeContext,
    /// `to_index[label] = point index`
    to_index: Vec<usize>,
    /// `to_label[index] = label`
    to_label: Vec<usize>,
}

impl Labelled {
    fn new(e: &HullElement) -> Self {
        let (config, to_label) = e.to_config();
        let mut to_index = vec![0; to_label.len()];
        for (i, &l) in to_label.iter().enumerate() {
            to_index[l] = i;
        }
        Labelled {
            ctx: TreeContext::new(&config),
            to_index,
            to_label,
        }
    }

    fn forest(&self, labelled: &Forest) -> Forest {
        labelled.relabel(&self.to_index)
    }

    fn partition(&self, labelled: &Partition) -> Partition {
        labelled.relabel(&self.to_index, labelled.n())
    }

    fn is_cg_tree(&self, labelled: &Forest) -> bool {
        self.ctx.is_cg_tree(&self.forest(labelled))
    }

    fn slide(&self, labelled: &Forest, e: (usize, usize), f: (usize, usize)) -> Result<Forest> {
        let i = |x: usize| self.to_index[x];
        let out = self
            .ctx
            .slide(&self.forest(labelled), (i(e.0), i(e.1)), (i(f.0), i(f.1)))?;
        Ok(out.relabel(&self.to_label))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RepairOptions {
    /// Search all cg trees on the collapsed configuration when the slide
    /// procedure does not reach one.
    pub exhaustive_fallback: bool,
}

/// Turns a cg tree on `q` whose Boolean subposet holds `rho` into a cg tree
/// on the collapse `p` whose Boolean subposet holds `rho`.
///
/// Trees and partitions use element labels. When the image of the tree is
/// no longer a cg tree, the collapsed corner `z` is off the geodesic between
/// its boundary neighbours; edge slides that keep `rho` in the Boolean
/// subposet bring `z` onto that geodesic.
pub fn collapse_repair(
    q: &HullElement,
    p: &HullElement,
    tree_q: &Forest,
    rho: &Partition,
    options: RepairOptions,
) -> Result<Forest> {
    if !hullposet::elementary_collapses(q)?.contains(p) {
        return Err(Error::RepairPrecondition(format!(
            "{p} is not an elementary collapse of {q}"
        )));
    }
    let lq = Labelled::new(q);
    let lp = Labelled::new(p);
    let n = q.n();
    if tree_q.n() != n || rho.n() != n {
        return Err(Error::RepairPrecondition(
            "tree, partition and configuration sizes differ".into(),
        ));
    }
    if !lq.is_cg_tree(tree_q) {
        return Err(Error::RepairPrecondition(format!(
            "{tree_q} is not a cg tree on {q}"
        )));
    }
    if !in_bool(tree_q, rho) {
        return Err(Error::RepairPrecondition(format!(
            "{rho} is not in Bool({tree_q})"
        )));
    }
    if !lp.ctx.rule.is_noncrossing_masks(lp.partition(rho).masks()) {
        return Err(Error::RepairPrecondition(format!(
            "{rho} is not noncrossing after the collapse"
        )));
    }
    let done = |t: &Forest| lp.is_cg_tree(t) && in_bool(t, rho);

    let mut tree = tree_q.clone();
    if !p.is_minimal() {
        let before: HashSet<usize> = q.corner_labels().into_iter().collect();
        let after: HashSet<usize> = p.corner_labels().into_iter().collect();
        let z = *before
            .difference(&after)
            .next()
            .expect("one corner is demoted");
        let (minus, plus) = cyclic_neighbours(q, z);
        for _ in 0..n * n {
            if done(&tree) {
                return Ok(tree);
            }
            match repair_step(&lq, &tree, rho, z, minus, plus) {
                Some(next) => tree = next,
                None => break,
            }
        }
    } else {
        // every point lands on one line; the only cg tree is the path
        let HullElement::Linear { order } = p else {
            unreachable!()
        };
        let edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        tree = Forest::new(n, &edges)?;
    }
    if done(&tree) {
        return Ok(tree);
    }
    if !p.is_minimal() {
        if let Some(t) = slide_search(&lq, &lp, tree_q, rho, SLIDE_SEARCH_LIMIT) {
            return Ok(t);
        }
    }
    if options.exhaustive_fallback {
        for t in lp.ctx.enumerate_cg_trees(DEFAULT_MAX_TREES)? {
            let t = t.relabel(&lp.to_label);
            if in_bool(&t, rho) {
                return Ok(t);
            }
        }
    }
    Err(Error::RepairFailed(format!("{tree_q} on {q} with {rho}")))
}

const SLIDE_SEARCH_LIMIT: usize = 200_000;

/// Breadth-first search over sequences of legal slides on `q`, stopping at
/// the first tree that is cg on `p`. Every intermediate tree is a cg tree
/// on `q` holding `rho`.
fn slide_search(
    lq: &Labelled,
    lp: &Labelled,
    start: &Forest,
    rho: &Partition,
    limit: usize,
) -> Option<Forest> {
    let mut seen: HashSet<Forest> = HashSet::from([start.clone()]);
    let mut queue = std::collections::VecDeque::from([start.clone()]);
    while let Some(t) = queue.pop_front() {
        let edges = t.edges().to_vec();
        for &e in &edges {
            for &f in &edges {
                let Ok((a, b, c)) = slide_roles(e, f) else {
                    continue;
                };
                if !slide_criterion(rho, a, b, c) {
                    continue;
                }
                let Ok(out) = lq.slide(&t, e, f) else {
                    continue;
                };
                if !in_bool(&out, rho) || seen.contains(&out) {
                    continue;
                }
                if lp.is_cg_tree(&out) {
                    return Some(out);
                }
                if lq.is_cg_tree(&out) {
                    if seen.len() >= limit {
                        return None;
                    }
                    seen.insert(out.clone());
                    queue.push_back(out);
                }
            }
        }
    }
    None
}

fn cyclic_neighbours(q: &HullElement, z: usize) -> (usize, usize) {
    let HullElement::Polygon { order, .. } = q else {
        unreachable!("collapses start from polygons")
    };
    let n = order.len();
    let i = order.iter().position(|&l| l == z).expect("label present");
    (order[(i + n - 1) % n], order[(i + 1) % n])
}

/// One slide (or two, in the singleton case) moving `z` towards the
/// geodesic from `minus` to `plus`; `None` when nothing applies.
fn repair_step(
    lq: &Labelled,
    tree: &Forest,
    rho: &Partition,
    z: usize,
    minus: usize,
    plus: usize,
) -> Option<Forest> {
    let geo = tree.path(minus, plus)?;
    if geo.contains(&z) {
        return None;
    }
    // the geodesic vertex where the branch holding z attaches, and the
    // first edge of that branch
    let to_geo = geo
        .iter()
        .filter_map(|&v| tree.path(z, v))
        .min_by_key(Vec::len)?;
    let attach = *to_geo.last()?;
    let j = geo.iter().position(|&v| v == attach)?;
    let vj = geo[j];
    let w = to_geo[to_geo.len() - 2];
    let legal = |t: &Forest, e: (usize, usize), f: (usize, usize)| -> Option<Forest> {
        let (p, q, r) = slide_roles(e, f).ok()?;
        if !slide_criterion(rho, p, q, r) {
            return None;
        }
        let out = lq.slide(t, e, f).ok()?;
        (lq.is_cg_tree(&out) && in_bool(&out, rho)).then_some(out)
    };
    if rho.same_block(vj, w) || !rho.is_singleton(z) {
        for k in [j.wrapping_sub(1), j + 1] {
            if let Some(&vk) = geo.get(k) {
                if let Some(out) = legal(tree, (vk, vj), (vj, w)) {
                    return Some(out);
                }
            }
        }
        return None;
    }
    // z is a singleton: walk its edge along the geodesic towards the
    // nearest vertex outside the block of v_j, then swing that edge onto z
    let mut order: Vec<isize> = (1..geo.len() as isize).flat_map(|d| [d, -d]).collect();
    order.retain(|&d| {
        let l = j as isize + d;
        l >= 0 && (l as usize) < geo.len()
    });
    for d in order {
        let l = (j as isize + d) as usize;
        if rho.same_block(geo[l], vj) {
            continue;
        }
        let step: isize = if d > 0 { 1 } else { -1 };
        let range_ok =
            (1..d.abs()).all(|s| rho.same_block(geo[(j as isize + s * step) as usize], vj));
        if !range_ok {
            continue;
        }
        let mut t = tree.clone();
        let mut at = j;
        let mut ok = true;
        while at as isize + step != l as isize {
            let nxt = (at as isize + step) as usize;
            match legal(&t, (w, geo[at]), (geo[at], geo[nxt])) {
                Some(out) => {
                    t = out;
                    at = nxt;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(out) = legal(&t, (geo[l], geo[at]), (geo[at], w)) {
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    fn cfg(s: &str) -> HullConfig {
        s.parse().unwrap()
    }

    fn forest(n: usize, s: &str) -> Forest {
        Forest::parse(n, s).unwrap()
    }

    #[test]
    fn wire_format() {
        let f = forest(4, "2-1;0-1;3-2");
        assert_eq!(f.to_string(), "0-1;1-2;2-3");
        assert!(Forest::parse(3, "0-0").is_err());
        assert!(Forest::parse(3, "0-1;1-0").is_err());
        assert!(Forest::parse(3, "0-5").is_err());
        assert!(Forest::parse(3, "0+1").is_err());
        assert!(Forest::parse(3, "").unwrap().is_empty());
    }

    #[test]
    fn noncrossing_trees() {
        assert!(is_noncrossing_tree(&cfg("segment:4"), &forest(4, "0-1;1-2;2-3")).unwrap());
        assert!(!is_noncrossing_tree(&cfg("segment:4"), &forest(4, "0-2;2-3;1-2")).unwrap());
        assert!(!is_noncrossing_tree(&cfg("[0;0;0;0]"), &forest(4, "0-2;1-3")).unwrap());
        assert!(!is_noncrossing_tree(&cfg("[0;0;0;0]"), &forest(4, "0-2;1-3;0-1")).unwrap());
        assert!(is_noncrossing_tree(&cfg("[0;0;0;0]"), &forest(4, "0-2;0-1;0-3")).unwrap());
    }

    #[test]
    fn geodesics() {
        let t = cfg("[1;1;1]");
        assert!(!has_convex_geodesics(&t, &forest(6, "0-1;1-2;2-3;3-4;4-5")).unwrap());
        assert!(!has_convex_geodesics(&t, &forest(6, "0-1;1-2;2-3;3-4;0-5")).unwrap());
        assert!(has_convex_geodesics(&cfg("segment:5"), &forest(5, "0-1;1-2;2-3;3-4")).unwrap());
        assert!(has_convex_geodesics(&t, &forest(6, "0-2;1-3")).is_err());
    }

    #[test]
    fn parts() {
        let sq = cfg("[0;0;0;0]");
        assert_eq!(
            part_of(&sq, &Forest::empty(4)).unwrap(),
            Partition::singletons(4)
        );
        assert_eq!(
            part_of(&sq, &forest(4, "0-1;1-2;2-3")).unwrap(),
            Partition::single_block(4)
        );
        assert_eq!(
            part_of(&sq, &forest(4, "0-1;2-3")).unwrap().to_string(),
            "0,1|2,3"
        );
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_cg_trees(&cfg("segment:5")).unwrap().len(), 1);
        assert_eq!(enumerate_cg_trees(&cfg("[0;0;0]")).unwrap().len(), 3);
        assert_eq!(enumerate_cg_trees(&cfg("[0;0;0;0]")).unwrap().len(), 12);
        assert_eq!(enumerate_cg_trees(&cfg("[0;0;0;0;0]")).unwrap().len(), 55);
    }

    #[test]
    fn boolean_subposets() {
        let b = bool_subposet(&cfg("segment:3"), &forest(3, "0-1;1-2")).unwrap();
        let l = build_lattice(&cfg("segment:3")).unwrap();
        let mut got = b.elements.clone();
        got.sort();
        let mut all = l.elements().to_vec();
        all.sort();
        assert_eq!(got, all);
        let b = bool_subposet(&cfg("[0;0;0;0]"), &forest(4, "0-1;1-2;2-3")).unwrap();
        assert_eq!(b.elements.len(), 8);
        assert!(b.is_boolean());
        assert!(bool_subposet(&cfg("[0;0;0;0]"), &forest(4, "0-1;1-2")).is_err());
    }

    #[test]
    fn atom_sets() {
        let seg = build_lattice(&cfg("segment:3")).unwrap();
        assert!(atoms_generate_boolean(&seg, &seg.atoms()).unwrap());
        assert!(atoms_generate_boolean(&seg, &[seg.top()]).is_err());

        let t = build_lattice(&cfg("[1;1;1]")).unwrap();
        let atoms: Vec<usize> = ["0,1", "1,2", "2,3", "3,4"]
            .iter()
            .map(|pair| {
                let (a, b) = pair.split_once(',').unwrap();
                let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
                let mut blocks: Vec<Vec<usize>> = vec![vec![a, b]];
                blocks.extend((0..6).filter(|&p| p != a && p != b).map(|p| vec![p]));
                t.index_of(&Partition::from_blocks(6, &blocks).unwrap())
                    .unwrap()
            })
            .collect();
        assert!(!atoms_generate_boolean(&t, &atoms).unwrap());

        let sq = build_lattice(&cfg("[0;0;0;0]")).unwrap();
        let sets = maximal_boolean_atom_sets(&sq, 1000).unwrap();
        assert_eq!(sets.len(), 12);
        let trees: HashSet<Forest> = enumerate_cg_trees(sq.config())
            .unwrap()
            .into_iter()
            .collect();
        for s in &sets {
            assert!(trees.contains(&atoms_to_forest(&sq, s).unwrap()));
        }
        assert_eq!(
            maximal_boolean_atom_sets(&build_lattice(&cfg("segment:5")).unwrap(), 10)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn slides() {
        let tri = cfg("[0;0;0]");
        let t = forest(3, "0-1;1-2");
        let s = slide(&tri, &t, (0, 1), (1, 2)).unwrap();
        assert_eq!(s.to_string(), "0-2;1-2");
        assert_eq!(slide(&tri, &s, (0, 2), (1, 2)).unwrap(), t);
        assert!(matches!(
            slide(&tri, &t, (0, 1), (0, 1)),
            Err(Error::SlideNotIncident(..))
        ));

        let sq = cfg("[0;0;0;0]");
        let star = forest(4, "0-1;0-2;0-3");
        // 0-1 and 0-3 are the outer edges at the corner 0, 0-2 sits between
        assert!(matches!(
            slide(&sq, &star, (0, 1), (0, 3)),
            Err(Error::SlideNotAdjacent(..)) | Err(Error::SlideLeavesNoncrossing(_))
        ));
        assert_eq!(
            slide(&sq, &star, (0, 1), (0, 2)).unwrap().to_string(),
            "0-2;0-3;1-2"
        );
    }

    #[test]
    fn slide_membership_examples() {
        let tri = cfg("[0;0;0]");
        let t = forest(3, "0-1;1-2");
        let s = forest(3, "0-2;1-2");
        let p = |x: &str| Partition::parse(3, x).unwrap();
        assert!(slide_membership(&tri, &t, &s, &p("0,1,2")).unwrap());
        assert!(!slide_membership(&tri, &t, &s, &p("0,1|2")).unwrap());
        assert!(slide_membership(&tri, &t, &s, &p("0|1,2")).unwrap());
        assert!(slide_membership(&tri, &t, &s, &p("0,2|1")).is_err());
        assert!(!slide_criterion(&p("0,1|2"), 0, 1, 2));
    }

    #[test]
    fn union_examples() {
        for s in ["[0;0;0;0]", "[1;1;1]", "segment:4"] {
            let l = build_lattice(&cfg(s)).unwrap();
            let trees = enumerate_cg_trees(l.config()).unwrap();
            let r = boolean_union_check(&l, &trees);
            assert!(r.covered, "{s}");
        }
    }

    #[test]
    fn repair_square_to_triangle() {
        let q = HullElement::polygon(vec![0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        let p = HullElement::polygon(vec![0, 1, 2, 3], &[0, 2, 3]).unwrap();
        let tree = forest(4, "0-1;1-2;2-3");
        let top = Partition::single_block(4);
        let out = collapse_repair(&q, &p, &tree, &top, RepairOptions::default()).unwrap();
        assert!(in_bool(&out, &top));
        let lp = Labelled::new(&p);
        assert!(lp.is_cg_tree(&out));

        let bent = forest(4, "0-3;0-2;1-2");
        let r = Partition::parse(4, "0,3|1|2").unwrap();
        let out = collapse_repair(&q, &p, &bent, &r, RepairOptions::default()).unwrap();
        assert!(lp.is_cg_tree(&out) && in_bool(&out, &r), "{out}");
    }

    #[test]
    fn leaf_criterion_is_a_diagnostic() {
        let sq = cfg("[0;0;0;0]");
        assert!(leaves_on_corners(&sq, &forest(4, "0-1;1-2;2-3")));
        let t = cfg("[1;1;0]");
        assert!(!leaves_on_corners(&t, &forest(5, "0-1;0-4;3-4;2-3")));
    }
}
