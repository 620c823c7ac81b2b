//! Tensor grids over the base space `ℝ^{n−1}` (n = 2 or 3).
//!
//! End breakpoints may be infinite, so unbounded end cells are representable
//! and half-spaces carry no truncation error. Facets at infinite breakpoints
//! have zero `H^{n−2}_γ` measure and are never enumerated.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::{self, ExtReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell{}", self.0)
    }
}

/// Strictly increasing breakpoints along one base axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    breaks: Vec<ExtReal>,
}

impl Axis {
    pub fn new(breaks: Vec<ExtReal>) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidGrid("an axis needs at least one cell".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("breakpoints must be strictly increasing".into()));
        }
        let last = breaks.len() - 1;
        for (k, b) in breaks.iter().enumerate() {
            let ok = b.is_finite()
                || (k == 0 && *b == ExtReal::NEG_INFINITY)
                || (k == last && *b == ExtReal::INFINITY);
            if !ok {
                return Err(Error::InvalidGrid(format!("breakpoint {k} = {b} is not allowed")));
            }
        }
        Ok(Axis { breaks })
    }

    pub fn from_f64(breaks: &[f64]) -> Result<Self> {
        let b = breaks.iter().map(|&z| ExtReal::new(z)).collect::<Result<Vec<_>>>()?;
        Axis::new(b)
    }

    /// `n` equal cells on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid(format!("uniform axis [{lo}, {hi}] with {n} cells")));
        }
        let step = (hi - lo) / n as f64;
        let mut b: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
        b.push(hi);
        Axis::from_f64(&b)
    }

    pub fn breaks(&self) -> &[ExtReal] {
        &self.breaks
    }

    pub fn cells(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn cell_range(&self, i: usize) -> (ExtReal, ExtReal) {
        (self.breaks[i], self.breaks[i + 1])
    }

    pub fn cell_gauss(&self, i: usize) -> f64 {
        gauss::gauss_len(self.breaks[i], self.breaks[i + 1])
    }

    pub fn cell_len(&self, i: usize) -> f64 {
        gauss::lebesgue_len(self.breaks[i], self.breaks[i + 1])
    }

    /// Representative point of a cell: the midpoint, or one unit inside the
    /// finite end of an unbounded cell.
    pub fn cell_point(&self, i: usize) -> f64 {
        let (a, b) = self.cell_range(i);
        match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a.value() + b.value()),
            (false, true) => b.value() - 1.0,
            (true, false) => a.value() + 1.0,
            (false, false) => 0.0,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.breaks[0].is_finite() && self.breaks[self.breaks.len() - 1].is_finite()
    }

    /// Same axis with unbounded end cells added where the ends are finite.
    pub fn extended(&self) -> Axis {
        let mut b = self.breaks.clone();
        if b[0].is_finite() {
            b.insert(0, ExtReal::NEG_INFINITY);
        }
        if b[b.len() - 1].is_finite() {
            b.push(ExtReal::INFINITY);
        }
        Axis { breaks: b }
    }

    pub fn union(&self, other: &Axis) -> Axis {
        let mut b: Vec<ExtReal> = self.breaks.iter().chain(other.breaks.iter()).copied().collect();
        b.sort();
        b.dedup();
        Axis { breaks: b }
    }

    /// For every cell of `fine`, the cell of `self` containing it, or `None`
    /// when it lies outside `self`. Fails if `fine` does not refine `self`
    /// inside `self`'s extent.
    pub fn cell_map(&self, fine: &Axis) -> Result<Vec<Option<usize>>> {
        let first = self.breaks[0];
        let last = self.breaks[self.breaks.len() - 1];
        let mut out = Vec::with_capacity(fine.cells());
        for k in 0..fine.cells() {
            let (a, b) = fine.cell_range(k);
            if b <= first || a >= last {
                out.push(None);
                continue;
            }
            // Index of the coarse cell whose lower breakpoint is the largest ≤ a.
            let idx = self.breaks.partition_point(|z| *z <= a);
            if idx == 0 || idx > self.cells() || b > self.breaks[idx] {
                return Err(Error::GridMismatch(format!(
                    "cell ({a}, {b}) straddles a breakpoint of the coarse axis"
                )));
            }
            out.push(Some(idx - 1));
        }
        Ok(out)
    }
}

/// Identifies a facet: the axis it is normal to, the breakpoint index along
/// that axis, and the cell index along the other axis (0 for a 1-D base).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetRef {
    pub axis: usize,
    pub at: usize,
    pub transverse: usize,
}

impl FacetRef {
    pub fn new(axis: usize, at: usize, transverse: usize) -> Self {
        FacetRef { axis, at, transverse }
    }

    /// A facet of a 1-D base: a single breakpoint.
    pub fn point(at: usize) -> Self {
        FacetRef { axis: 0, at, transverse: 0 }
    }
}

impl fmt::Display for FacetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "facet[{},{},{}]", self.axis, self.at, self.transverse)
    }
}

impl Serialize for FacetRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.axis, self.at, self.transverse].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FacetRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Point(usize),
            Full([usize; 3]),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Point(at) => FacetRef::point(at),
            Repr::Full([axis, at, transverse]) => FacetRef { axis, at, transverse },
        })
    }
}

/// A codimension-one piece of the grid skeleton: a breakpoint (1-D base) or an
/// axis-aligned edge segment (2-D base).
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub id: FacetRef,
    /// Cell on the lower-coordinate side; `None` is the exterior.
    pub lower: Option<CellId>,
    /// Cell on the higher-coordinate side; `None` is the exterior.
    pub upper: Option<CellId>,
    /// Coordinate of the facet along its normal axis (always finite).
    pub position: f64,
    /// `H^{n−2}_γ` of the facet.
    pub gauss_measure: f64,
    /// `H^{n−2}` of the facet.
    pub lebesgue_measure: f64,
}

impl Facet {
    pub fn is_interior(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }
}

/// Cartesian grid with one (n = 2) or two (n = 3) axes. Cells are numbered
/// with the first axis varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!("base dimension {} unsupported", axes.len())));
        }
        Ok(Grid { axes })
    }

    pub fn line(axis: Axis) -> Self {
        Grid { axes: vec![axis] }
    }

    pub fn plane(x: Axis, y: Axis) -> Self {
        Grid { axes: vec![x, y] }
    }

    pub fn line_from_f64(breaks: &[f64]) -> Result<Self> {
        Ok(Grid::line(Axis::from_f64(breaks)?))
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn base_dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.axes[0].cells(), self.axes.get(1).map_or(1, Axis::cells)]
    }

    pub fn cell_count(&self) -> usize {
        let [a, b] = self.shape();
        a * b
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.cell_count()).map(CellId)
    }

    pub fn cell_at(&self, i: usize, j: usize) -> CellId {
        CellId(i + self.shape()[0] * j)
    }

    pub fn coords(&self, cell: CellId) -> (usize, usize) {
        let n0 = self.shape()[0];
        (cell.0 % n0, cell.0 / n0)
    }

    /// `γ_{n−1}` of a cell.
    pub fn cell_gauss_measure(&self, cell: CellId) -> f64 {
        let (i, j) = self.coords(cell);
        let mut m = self.axes[0].cell_gauss(i);
        if let Some(y) = self.axes.get(1) {
            m *= y.cell_gauss(j);
        }
        m
    }

    /// `H^{n−1}` of a cell; `+∞` for unbounded cells.
    pub fn cell_lebesgue_measure(&self, cell: CellId) -> f64 {
        let (i, j) = self.coords(cell);
        let mut m = self.axes[0].cell_len(i);
        if let Some(y) = self.axes.get(1) {
            m *= y.cell_len(j);
        }
        m
    }

    pub fn cell_point(&self, cell: CellId) -> Vec<f64> {
        let (i, j) = self.coords(cell);
        let mut p = vec![self.axes[0].cell_point(i)];
        if let Some(y) = self.axes.get(1) {
            p.push(y.cell_point(j));
        }
        p
    }

    pub fn is_bounded(&self) -> bool {
        self.axes.iter().all(Axis::is_bounded)
    }

    /// Resolves a facet reference against this grid. Facets at infinite
    /// breakpoints do not exist.
    pub fn facet(&self, id: FacetRef) -> Result<Facet> {
        let FacetRef { axis, at, transverse } = id;
        if axis >= self.base_dim() {
            return Err(Error::Location(format!("{id}: no axis {axis}")));
        }
        let normal = &self.axes[axis];
        let other_cells = if self.base_dim() == 2 { self.axes[1 - axis].cells() } else { 1 };
        if at > normal.cells() || transverse >= other_cells {
            return Err(Error::Location(format!("{id} is outside the grid")));
        }
        let position = normal.breaks()[at];
        if !position.is_finite() {
            return Err(Error::Location(format!("{id} lies at an infinite breakpoint")));
        }
        let cell = |k: usize| -> CellId {
            if axis == 0 {
                self.cell_at(k, transverse)
            } else {
                self.cell_at(transverse, k)
            }
        };
        let lower = (at > 0).then(|| cell(at - 1));
        let upper = (at < normal.cells()).then(|| cell(at));
        let w = gauss::weight(position.value());
        let (gauss_measure, lebesgue_measure) = if self.base_dim() == 1 {
            (w, 1.0)
        } else {
            let t = &self.axes[1 - axis];
            (w * t.cell_gauss(transverse), t.cell_len(transverse))
        };
        Ok(Facet { id, lower, upper, position: position.value(), gauss_measure, lebesgue_measure })
    }

    /// Every facet at a finite breakpoint, ordered by (axis, breakpoint,
    /// transverse index). Includes facets against the exterior.
    pub fn facets(&self) -> Vec<Facet> {
        let mut out = Vec::new();
        for axis in 0..self.base_dim() {
            let normal = &self.axes[axis];
            let other_cells = if self.base_dim() == 2 { self.axes[1 - axis].cells() } else { 1 };
            for at in 0..=normal.cells() {
                if !normal.breaks()[at].is_finite() {
                    continue;
                }
                for transverse in 0..other_cells {
                    if let Ok(f) = self.facet(FacetRef { axis, at, transverse }) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    /// Cells incident to a grid vertex (2-D base), `None` entries standing
    /// for the exterior.
    pub fn vertex_cells(&self, bx: usize, by: usize) -> Result<Vec<Option<CellId>>> {
        if self.base_dim() != 2 {
            return Err(Error::Location("vertices exist only on a 2-D base".into()));
        }
        let (xa, ya) = (&self.axes[0], &self.axes[1]);
        if bx > xa.cells() || by > ya.cells() {
            return Err(Error::Location(format!("vertex ({bx}, {by}) outside the grid")));
        }
        if !xa.breaks()[bx].is_finite() || !ya.breaks()[by].is_finite() {
            return Err(Error::Location(format!("vertex ({bx}, {by}) is at infinity")));
        }
        let mut out = Vec::with_capacity(4);
        for dj in [0, 1] {
            for di in [0, 1] {
                let (i, j) = (bx as isize - 1 + di, by as isize - 1 + dj);
                let inside = i >= 0 && j >= 0 && (i as usize) < xa.cells() && (j as usize) < ya.cells();
                out.push(inside.then(|| self.cell_at(i as usize, j as usize)));
            }
        }
        Ok(out)
    }

    /// Smallest common refinement of two grids of the same base dimension.
    pub fn common_refinement(&self, other: &Grid) -> Result<Grid> {
        if self.base_dim() != other.base_dim() {
            return Err(Error::GridMismatch("base dimensions differ".into()));
        }
        Ok(Grid { axes: self.axes.iter().zip(&other.axes).map(|(a, b)| a.union(b)).collect() })
    }

    /// Grid with one extra breakpoint on one axis.
    pub fn with_break(&self, axis: usize, z: f64) -> Result<Grid> {
        if axis >= self.base_dim() {
            return Err(Error::InvalidGrid(format!("no axis {axis}")));
        }
        let z = ExtReal::new(z)?;
        let mut breaks = self.axes[axis].breaks.clone();
        if !breaks.contains(&z) {
            breaks.push(z);
            breaks.sort();
        }
        let mut axes = self.axes.clone();
        axes[axis] = Axis::new(breaks)?;
        Ok(Grid { axes })
    }

    /// Same grid with unbounded end cells on every axis.
    pub fn extended(&self) -> Grid {
        Grid { axes: self.axes.iter().map(Axis::extended).collect() }
    }

    /// For every cell of `fine`, the cell of `self` that contains it.
    pub fn cell_map(&self, fine: &Grid) -> Result<Vec<Option<CellId>>> {
        if self.base_dim() != fine.base_dim() {
            return Err(Error::GridMismatch("base dimensions differ".into()));
        }
        let maps = self
            .axes
            .iter()
            .zip(&fine.axes)
            .map(|(c, f)| c.cell_map(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(fine
            .cells()
            .map(|cell| {
                let (i, j) = fine.coords(cell);
                let ci = maps[0][i]?;
                let cj = if self.base_dim() == 2 { maps[1][j]? } else { 0 };
                Some(self.cell_at(ci, cj))
            })
            .collect())
    }
}

/// Wire form: `{"breakpoints": [[…], …]}` with `"-inf"`/`"inf"` sentinels.
#[derive(Serialize, Deserialize)]
struct GridRepr {
    breakpoints: Vec<Vec<ExtReal>>,
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridRepr { breakpoints: self.axes.iter().map(|a| a.breaks.clone()).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GridRepr::deserialize(deserializer)?;
        let axes = repr
            .breakpoints
            .into_iter()
            .map(Axis::new)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Grid::new(axes).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn axis_validation() {
        assert!(Axis::from_f64(&[0.0]).is_err());
        assert!(Axis::from_f64(&[0.0, 0.0]).is_err());
        assert!(Axis::from_f64(&[1.0, 0.0]).is_err());
        assert!(Axis::from_f64(&[-INF, 0.0, INF]).is_ok());
        assert!(Axis::from_f64(&[0.0, INF, INF]).is_err());
        assert!(Axis::from_f64(&[INF, 0.0]).is_err());
    }

    #[test]
    fn one_dimensional_facets() {
        let g = Grid::line_from_f64(&[-INF, -1.0, 1.0, INF]).unwrap();
        let f = g.facets();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].lower, Some(CellId(0)));
        assert_eq!(f[0].upper, Some(CellId(1)));
        assert!((f[0].gauss_measure - (-0.5f64).exp()).abs() < 1e-16);

        let bounded = Grid::line_from_f64(&[0.0, 1.0]).unwrap();
        let f = bounded.facets();
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].lower, f[0].upper), (None, Some(CellId(0))));
        assert_eq!((f[1].lower, f[1].upper), (Some(CellId(0)), None));
        assert_eq!(f[0].gauss_measure, 1.0);
    }

    #[test]
    fn two_dimensional_facets_and_measures() {
        let g = Grid::plane(Axis::uniform(-1.0, 1.0, 2).unwrap(), Axis::uniform(-1.0, 1.0, 2).unwrap());
        assert_eq!(g.cell_count(), 4);
        // 3 vertical lines × 2 rows + 3 horizontal lines × 2 columns.
        assert_eq!(g.facets().len(), 12);
        let mid = g.facet(FacetRef::new(0, 1, 0)).unwrap();
        assert_eq!(mid.lower, Some(g.cell_at(0, 0)));
        assert_eq!(mid.upper, Some(g.cell_at(1, 0)));
        // Edge {x₁ = 0} × (−1, 0): e⁰ · γ₁((−1, 0)).
        assert!((mid.gauss_measure - 0.341_344_746_068_542_9).abs() < 1e-15);
        assert_eq!(mid.lebesgue_measure, 1.0);
        let total: f64 = g.cells().map(|c| g.cell_lebesgue_measure(c)).sum();
        assert_eq!(total, 4.0);
    }

    #[test]
    fn vertex_cells_include_exterior() {
        let g = Grid::plane(Axis::uniform(0.0, 1.0, 1).unwrap(), Axis::uniform(0.0, 1.0, 1).unwrap());
        let v = g.vertex_cells(0, 0).unwrap();
        assert_eq!(v.iter().filter(|c| c.is_some()).count(), 1);
        assert!(Grid::line_from_f64(&[0.0, 1.0]).unwrap().vertex_cells(0, 0).is_err());
    }

    #[test]
    fn refinement_maps_cells() {
        let coarse = Grid::line_from_f64(&[-INF, 0.0, 2.0]).unwrap();
        let fine = coarse.with_break(0, 1.0).unwrap().common_refinement(&Grid::line_from_f64(&[2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(fine.axis(0).cells(), 4);
        let map = coarse.cell_map(&fine).unwrap();
        assert_eq!(map, vec![Some(CellId(0)), Some(CellId(1)), Some(CellId(1)), None]);
        assert!(fine.cell_map(&coarse).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = Grid::line_from_f64(&[-INF, 0.0, INF]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"breakpoints":[["-inf",0.0,"inf"]]}"#);
        assert_eq!(serde_json::from_str::<Grid>(&text).unwrap(), g);
        assert!(serde_json::from_str::<Grid>(r#"{"breakpoints":[[1.0,0.0]]}"#).is_err());
    }
}
