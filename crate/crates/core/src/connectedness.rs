//! Essential disconnection of G by K on cell/facet scenes, and
//! indecomposability of columnar sets through their piece graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::columnar::ColumnarSet;
use crate::error::{Error, Result};
use crate::grid::CellId;
use crate::interval::IntervalSet;
use crate::scene::Scene;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Component label per element, numbered by first appearance.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let mut ids = BTreeMap::new();
        let labels = (0..self.parent.len())
            .map(|x| {
                let r = self.find(x);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        (labels, ids.len())
    }
}

/// A partition `{G₊, G₋}` of the G-cells with its interface bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub plus: Vec<CellId>,
    pub minus: Vec<CellId>,
    /// Ids of scene facets joining a `G₊` cell to a `G₋` cell.
    pub interface_facets: Vec<usize>,
    /// `H^{m−1}_γ` of the interface facets not covered by K.
    pub unblocked_interface_measure: f64,
}

impl PartitionCertificate {
    /// Checks that `plus`/`minus` partition the G-cells of `scene` into two
    /// non-null parts, then measures the unblocked interface.
    pub fn evaluate(scene: &Scene, plus: &[CellId], minus: &[CellId]) -> Result<Self> {
        let g: BTreeSet<CellId> = scene.g_cells().into_iter().collect();
        let p: BTreeSet<CellId> = plus.iter().copied().collect();
        let m: BTreeSet<CellId> = minus.iter().copied().collect();
        if p.len() != plus.len() || m.len() != minus.len() {
            return Err(Error::InvalidPartition("repeated cell".into()));
        }
        if !p.is_disjoint(&m) {
            return Err(Error::InvalidPartition("G+ and G- overlap".into()));
        }
        let union: BTreeSet<CellId> = p.union(&m).copied().collect();
        if union != g {
            return Err(Error::InvalidPartition("G+ and G- do not cover exactly the G-cells".into()));
        }
        let measure = |cells: &BTreeSet<CellId>| -> f64 {
            scene.cells.iter().filter(|c| cells.contains(&c.id)).map(|c| c.gauss_measure).sum()
        };
        if measure(&p) <= 0.0 || measure(&m) <= 0.0 {
            return Err(Error::InvalidPartition("trivial partition".into()));
        }
        let (plus, minus) = (p.iter().copied().collect(), m.into_iter().collect());
        Ok(Self::measure_interface(scene, |c| p.contains(&c), plus, minus))
    }

    fn measure_interface(
        scene: &Scene,
        in_plus: impl Fn(CellId) -> bool,
        plus: Vec<CellId>,
        minus: Vec<CellId>,
    ) -> Self {
        let mut interface_facets = Vec::new();
        let mut unblocked = 0.0;
        for f in &scene.facets {
            if in_plus(f.cells[0]) != in_plus(f.cells[1]) {
                interface_facets.push(f.id);
                if !f.blocked {
                    unblocked += f.measure;
                }
            }
        }
        PartitionCertificate { plus, minus, interface_facets, unblocked_interface_measure: unblocked }
    }

    pub fn disconnects(&self) -> bool {
        self.unblocked_interface_measure == 0.0
    }
}

/// Proof of a verdict of [`essentially_disconnects`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// G is null: no non-trivial partition exists.
    Empty,
    /// Unblocked facet ids of a spanning tree of the G-cells.
    Spanning { facets: Vec<usize> },
    Partition(PartitionCertificate),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disconnection {
    pub disconnects: bool,
    pub components: usize,
    pub witness: Witness,
}

/// Whether the blocked facets essentially disconnect the G-cells. Null cells
/// are ignored.
pub fn essentially_disconnects(scene: &Scene) -> Disconnection {
    let index: BTreeMap<CellId, usize> = scene
        .cells
        .iter()
        .filter(|c| c.in_g && c.gauss_measure > 0.0)
        .map(|c| c.id)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(k, id)| (id, k))
        .collect();
    if index.is_empty() {
        return Disconnection { disconnects: false, components: 0, witness: Witness::Empty };
    }
    let mut uf = UnionFind::new(index.len());
    let mut tree = Vec::new();
    for f in &scene.facets {
        if f.blocked || f.measure <= 0.0 {
            continue;
        }
        if let (Some(&a), Some(&b)) = (index.get(&f.cells[0]), index.get(&f.cells[1])) {
            if uf.union(a, b) {
                tree.push(f.id);
            }
        }
    }
    let (labels, components) = uf.labels();
    if components == 1 {
        return Disconnection { disconnects: false, components, witness: Witness::Spanning { facets: tree } };
    }
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for (&id, &k) in &index {
        if labels[k] == 0 {
            plus.push(id);
        } else {
            minus.push(id);
        }
    }
    let plus_set: BTreeSet<CellId> = plus.iter().copied().collect();
    let cert = PartitionCertificate::measure_interface(scene, |c| plus_set.contains(&c), plus, minus);
    Disconnection { disconnects: true, components, witness: Witness::Partition(cert) }
}

/// The empty set does not essentially disconnect G.
pub fn essentially_connected(scene: &Scene) -> bool {
    !essentially_disconnects(&scene.unblocked()).disconnects
}

/// Largest scene accepted by [`brute_force_disconnects`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Tries every partition of the G-cells and returns the first one whose
/// unblocked interface is null. The lowest G-cell is kept in `G₊`.
pub fn brute_force_disconnects(scene: &Scene) -> Result<Option<PartitionCertificate>> {
    let g: Vec<CellId> = scene
        .cells
        .iter()
        .filter(|c| c.in_g && c.gauss_measure > 0.0)
        .map(|c| c.id)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if g.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooManyCells { found: g.len(), bound: BRUTE_FORCE_LIMIT });
    }
    if g.len() < 2 {
        return Ok(None);
    }
    let pos: BTreeMap<CellId, usize> = g.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let facets: Vec<(usize, usize, f64)> = scene
        .facets
        .iter()
        .filter(|f| !f.blocked)
        .filter_map(|f| Some((*pos.get(&f.cells[0])?, *pos.get(&f.cells[1])?, f.measure)))
        .collect();
    for mask in 1u64..(1u64 << (g.len() - 1)) {
        // Bit k set: g[k + 1] goes to G₋.
        let minus_bit = |k: usize| k > 0 && mask >> (k - 1) & 1 == 1;
        let unblocked: f64 =
            facets.iter().filter(|(a, b, _)| minus_bit(*a) != minus_bit(*b)).map(|(_, _, m)| m).sum();
        if unblocked == 0.0 {
            let (minus, plus): (Vec<_>, Vec<_>) = (0..g.len()).partition(|&k| minus_bit(k));
            let plus: Vec<CellId> = plus.into_iter().map(|k| g[k]).collect();
            let minus: Vec<CellId> = minus.into_iter().map(|k| g[k]).collect();
            return PartitionCertificate::evaluate(scene, &plus, &minus).map(Some);
        }
    }
    Ok(None)
}

/// One maximal interval of one column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Piece {
    cell: CellId,
    index: usize,
}

/// Components of the piece graph of `set`: pieces are the maximal intervals
/// of each section; two pieces in columns sharing a facet are joined when they
/// overlap.
fn piece_components(set: &ColumnarSet) -> Vec<Vec<Piece>> {
    let grid = set.grid();
    let mut offset = Vec::with_capacity(grid.cell_count() + 1);
    let mut pieces = Vec::new();
    for cell in grid.cells() {
        offset.push(pieces.len());
        for index in 0..set.section(cell).len() {
            pieces.push(Piece { cell, index });
        }
    }
    offset.push(pieces.len());
    let mut uf = UnionFind::new(pieces.len());
    for facet in grid.facets() {
        let (Some(a), Some(b)) = (facet.lower, facet.upper) else { continue };
        let (sa, sb) = (set.section(a).intervals(), set.section(b).intervals());
        let (mut i, mut j) = (0, 0);
        while i < sa.len() && j < sb.len() {
            if sa[i].overlaps(&sb[j]) {
                uf.union(offset[a.0] + i, offset[b.0] + j);
            }
            if sa[i].hi() < sb[j].hi() {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    let (labels, count) = uf.labels();
    let mut out = vec![Vec::new(); count];
    for (k, piece) in pieces.into_iter().enumerate() {
        out[labels[k]].push(piece);
    }
    out
}

/// Whether `set` has positive measure and a connected piece graph.
pub fn indecomposable(set: &ColumnarSet) -> bool {
    piece_components(set).len() == 1
}

/// The components of the piece graph as separate sets on the same grid,
/// ordered by their lowest cell.
pub fn decompose(set: &ColumnarSet) -> Vec<ColumnarSet> {
    piece_components(set)
        .into_iter()
        .map(|component| {
            let mut sections = vec![IntervalSet::empty(); set.grid().cell_count()];
            for piece in component {
                let iv = set.section(piece.cell).intervals()[piece.index];
                sections[piece.cell.0] = sections[piece.cell.0].union(&IntervalSet::single(iv.lo(), iv.hi()));
            }
            ColumnarSet::new(set.grid().clone(), sections).expect("same grid")
        })
        .collect()
}

/// Indecomposability of `ℝⁿ ∖ set`, taken on the grid extended by unbounded
/// end cells.
pub fn complement_indecomposable(set: &ColumnarSet) -> bool {
    indecomposable(&set.complement())
}
