//! Piecewise-constant distribution functions `v : ℝ^{n−1} → [0, 1]` on a grid.
//!
//! Each cell stores its value `v` together with its height `f = Ψ(v)`. The
//! height is authoritative for every decision that compares against 0 or 1
//! (G-membership, blocking, jumps): values such as `Φ(−40)` are exactly `1.0`
//! in floating point while their heights are still finite.
//!
//! Singular annotations declare the approximate limits `v∧ ≤ v∨` of the
//! continuum object on a facet, which a piecewise-constant sampling cannot
//! express (e.g. `v∧ = 0` on a segment with `v > 0` on both sides). Verdicts
//! read the annotations; perimeters read the sampled cell values only.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::{self, ExtReal};
use crate::grid::{Axis, CellId, Facet, FacetRef, Grid};
use crate::scene::{Scene, SceneCell, SceneFacet};

/// A value in `[0, 1]` paired with its height `Ψ(value)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    value: f64,
    height: ExtReal,
}

impl Level {
    pub const ZERO: Level = Level { value: 0.0, height: ExtReal::INFINITY };
    pub const ONE: Level = Level { value: 1.0, height: ExtReal::NEG_INFINITY };

    pub fn from_value(value: f64) -> Result<Level> {
        let height = gauss::psi(value)?;
        Ok(Level { value, height })
    }

    pub fn from_height(height: ExtReal) -> Level {
        Level { value: gauss::phi(height), height }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn height(&self) -> ExtReal {
        self.height
    }

    /// `0 < v < 1`.
    pub fn in_g(&self) -> bool {
        self.height.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.height == ExtReal::INFINITY
    }

    pub fn is_one(&self) -> bool {
        self.height == ExtReal::NEG_INFINITY
    }

    /// Smaller value, i.e. larger height.
    pub fn min(self, other: Level) -> Level {
        if other.height > self.height {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Level) -> Level {
        if other.height < self.height {
            other
        } else {
            self
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value)
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Level::from_value(f64::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// Declared approximate limits on one facet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularAnnotation {
    pub facet: FacetRef,
    pub wedge: Level,
    pub vee: Level,
}

/// Approximate lower and upper limits at a location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub wedge: Level,
    pub vee: Level,
}

impl Limits {
    pub fn values(&self) -> (f64, f64) {
        (self.wedge.value, self.vee.value)
    }

    /// `(f∧, f∨) = (Ψ(v∨), Ψ(v∧))`; the order swaps because `Ψ` decreases.
    pub fn f_limits(&self) -> (ExtReal, ExtReal) {
        (self.vee.height, self.wedge.height)
    }

    pub fn is_jump(&self) -> bool {
        let (fw, fv) = self.f_limits();
        fw < fv
    }

    /// Whether `{v∧ = 0} ∪ {v∨ = 1}` contains this location.
    pub fn blocks(&self) -> bool {
        self.wedge.is_zero() || self.vee.is_one()
    }
}

/// Where approximate limits are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Cell(CellId),
    Facet(FacetRef),
    /// Breakpoint indices `(bx, by)` of a grid vertex; 2-D base only.
    Vertex(usize, usize),
}

/// Axis-aligned unit normal `sign · e_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Normal {
    pub axis: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpInterface {
    pub facet: Facet,
    pub limits: Limits,
    /// Points from the lower-valued side to the higher-valued side.
    pub normal: Normal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    grid: Grid,
    levels: Vec<Level>,
    annotations: BTreeMap<FacetRef, SingularAnnotation>,
}

impl Profile {
    pub fn new(grid: Grid, levels: Vec<Level>, annotations: Vec<SingularAnnotation>) -> Result<Self> {
        if levels.len() != grid.cell_count() {
            return Err(Error::InvalidProfile(format!(
                "{} values for {} cells",
                levels.len(),
                grid.cell_count()
            )));
        }
        let mut map = BTreeMap::new();
        for a in annotations {
            grid.facet(a.facet)
                .map_err(|e| Error::InvalidProfile(format!("annotation support: {e}")))?;
            if a.wedge.height < a.vee.height {
                return Err(Error::InvalidProfile(format!(
                    "annotation on {} has wedge {} > vee {}",
                    a.facet, a.wedge.value, a.vee.value
                )));
            }
            if map.insert(a.facet, a).is_some() {
                return Err(Error::InvalidProfile(format!("{} annotated twice", a.facet)));
            }
        }
        Ok(Profile { grid, levels, annotations: map })
    }

    pub fn from_values(grid: Grid, values: &[f64]) -> Result<Self> {
        let levels = values.iter().map(|&v| Level::from_value(v)).collect::<Result<Vec<_>>>()?;
        Profile::new(grid, levels, Vec::new())
    }

    pub fn from_heights(grid: Grid, heights: &[ExtReal]) -> Result<Self> {
        Profile::new(grid, heights.iter().map(|&h| Level::from_height(h)).collect(), Vec::new())
    }

    pub fn with_annotations(self, annotations: Vec<SingularAnnotation>) -> Result<Self> {
        let mut all: Vec<SingularAnnotation> = self.annotations.into_values().collect();
        all.extend(annotations);
        Profile::new(self.grid, self.levels, all)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn base_dim(&self) -> usize {
        self.grid.base_dim()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, cell: CellId) -> Level {
        self.levels[cell.0]
    }

    pub fn value(&self, cell: CellId) -> f64 {
        self.levels[cell.0].value
    }

    pub fn height(&self, cell: CellId) -> ExtReal {
        self.levels[cell.0].height
    }

    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(Level::value).collect()
    }

    pub fn annotations(&self) -> impl Iterator<Item = &SingularAnnotation> {
        self.annotations.values()
    }

    pub fn annotation(&self, facet: FacetRef) -> Option<&SingularAnnotation> {
        self.annotations.get(&facet)
    }

    pub fn is_annotated(&self) -> bool {
        !self.annotations.is_empty()
    }

    /// Cells of `G = {0 < v < 1}` in id order.
    pub fn g_cells(&self) -> Vec<CellId> {
        self.grid.cells().filter(|&c| self.level(c).in_g()).collect()
    }

    fn side(&self, cell: Option<CellId>) -> Level {
        cell.map_or(Level::ZERO, |c| self.level(c))
    }

    fn facet_limits(&self, facet: &Facet) -> Limits {
        if let Some(a) = self.annotations.get(&facet.id) {
            return Limits { wedge: a.wedge, vee: a.vee };
        }
        let (lo, hi) = (self.side(facet.lower), self.side(facet.upper));
        Limits { wedge: lo.min(hi), vee: lo.max(hi) }
    }

    /// `(v∧, v∨)` at a location. Outside the grid `v = 0`.
    pub fn limits(&self, location: Location) -> Result<Limits> {
        match location {
            Location::Cell(c) => {
                if c.0 >= self.levels.len() {
                    return Err(Error::Location(format!("{c} is not a cell of the grid")));
                }
                let l = self.level(c);
                Ok(Limits { wedge: l, vee: l })
            }
            Location::Facet(id) => Ok(self.facet_limits(&self.grid.facet(id)?)),
            Location::Vertex(bx, by) => {
                let sides: Vec<Level> =
                    self.grid.vertex_cells(bx, by)?.into_iter().map(|c| self.side(c)).collect();
                let wedge = sides.iter().copied().fold(Level::ONE, Level::min);
                let vee = sides.iter().copied().fold(Level::ZERO, Level::max);
                Ok(Limits { wedge, vee })
            }
        }
    }

    pub fn approx_limits(&self, location: Location) -> Result<(f64, f64)> {
        Ok(self.limits(location)?.values())
    }

    pub fn f_limits(&self, location: Location) -> Result<(ExtReal, ExtReal)> {
        Ok(self.limits(location)?.f_limits())
    }

    /// Facets where `v∧ < v∨`, including facets against the exterior.
    pub fn jump_interfaces(&self) -> Vec<JumpInterface> {
        self.grid
            .facets()
            .into_iter()
            .filter_map(|facet| {
                let limits = self.facet_limits(&facet);
                if !limits.is_jump() {
                    return None;
                }
                let (lo, hi) = (self.side(facet.lower), self.side(facet.upper));
                let sign = if lo.height < hi.height { -1 } else { 1 };
                let normal = Normal { axis: facet.id.axis, sign };
                Some(JumpInterface { facet, limits, normal })
            })
            .collect()
    }

    /// Scene for Ehrhard rigidity: `G = {0 < v < 1}`, `K = {v∧ = 0} ∪ {v∨ = 1}`.
    pub fn scene(&self) -> Scene {
        self.scene_with(|l| l.in_g(), |lim| lim.blocks())
    }

    /// Scene for Steiner rigidity: `G = {v > 0}`, `K = {v∧ = 0}`.
    pub fn steiner_scene(&self) -> Scene {
        self.scene_with(|l| !l.is_zero(), |lim| lim.wedge.is_zero())
    }

    fn scene_with(&self, in_g: impl Fn(&Level) -> bool, blocked: impl Fn(&Limits) -> bool) -> Scene {
        let cells = self
            .grid
            .cells()
            .map(|id| SceneCell {
                id,
                in_g: in_g(&self.level(id)),
                gauss_measure: self.grid.cell_gauss_measure(id),
                lebesgue_measure: self.grid.cell_lebesgue_measure(id),
            })
            .collect::<Vec<_>>();
        let mut facets = Vec::new();
        for facet in self.grid.facets() {
            let (Some(a), Some(b)) = (facet.lower, facet.upper) else { continue };
            if !(cells[a.0].in_g && cells[b.0].in_g) || facet.gauss_measure <= 0.0 {
                continue;
            }
            facets.push(SceneFacet {
                id: facets.len(),
                facet: Some(facet.id),
                cells: [a, b],
                measure: facet.gauss_measure,
                blocked: blocked(&self.facet_limits(&facet)),
            });
        }
        Scene { base_dim: self.base_dim(), cells, facets }
    }

    /// `H^{n−2}_γ` of the grid-level topological boundary of G: facets with
    /// exactly one side in G (the exterior is not in G).
    pub fn g_boundary_measure(&self) -> f64 {
        self.grid
            .facets()
            .iter()
            .filter(|f| self.side(f.lower).in_g() != self.side(f.upper).in_g())
            .map(|f| f.gauss_measure)
            .sum()
    }

    /// The same function on a finer grid. Cells of `fine` outside this grid
    /// get `v = 0`; annotations are carried to every sub-facet.
    pub fn regrid(&self, fine: &Grid) -> Result<Profile> {
        let map = self.grid.cell_map(fine)?;
        let levels = map.iter().map(|c| self.side(*c)).collect();
        let mut annotations = Vec::new();
        if !self.annotations.is_empty() {
            for facet in fine.facets() {
                if let Some(coarse) = self.coarse_facet(fine, &facet, &map) {
                    if let Some(a) = self.annotations.get(&coarse) {
                        annotations.push(SingularAnnotation { facet: facet.id, ..*a });
                    }
                }
            }
        }
        Profile::new(fine.clone(), levels, annotations)
    }

    fn coarse_facet(&self, fine: &Grid, facet: &Facet, _map: &[Option<CellId>]) -> Option<FacetRef> {
        let axis = facet.id.axis;
        let position = ExtReal::from_f64(facet.position);
        let at = self.grid.axis(axis).breaks().iter().position(|b| *b == position)?;
        let transverse = if self.base_dim() == 2 {
            let other = 1 - axis;
            let (a, b) = fine.axis(other).cell_range(facet.id.transverse);
            let coarse: &Axis = self.grid.axis(other);
            let idx = coarse.breaks().partition_point(|z| *z <= a);
            if idx == 0 || idx > coarse.cells() || b > coarse.breaks()[idx] {
                return None;
            }
            idx - 1
        } else {
            0
        };
        Some(FacetRef { axis, at, transverse })
    }

    /// Splits one cell-row of the grid by inserting a breakpoint.
    pub fn refine(&self, axis: usize, z: f64) -> Result<Profile> {
        self.regrid(&self.grid.with_break(axis, z)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    base_dim: usize,
    breakpoints: Vec<Vec<ExtReal>>,
    values: Vec<f64>,
    #[serde(default)]
    annotations: Vec<SingularAnnotation>,
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileRepr {
            base_dim: self.base_dim(),
            breakpoints: self.grid.axes().iter().map(|a| a.breaks().to_vec()).collect(),
            values: self.values(),
            annotations: self.annotations.values().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ProfileRepr::deserialize(deserializer)?;
        if repr.base_dim != repr.breakpoints.len() {
            return Err(D::Error::custom(format!(
                "base_dim {} but {} breakpoint lists",
                repr.base_dim,
                repr.breakpoints.len()
            )));
        }
        let axes = repr
            .breakpoints
            .into_iter()
            .map(Axis::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let grid = Grid::new(axes).map_err(D::Error::custom)?;
        let levels = repr
            .values
            .iter()
            .map(|&v| Level::from_value(v))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Profile::new(grid, levels, repr.annotations).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    fn line(values: &[f64]) -> Profile {
        let n = values.len();
        let breaks: Vec<f64> = (0..=n).map(|k| k as f64 - n as f64 / 2.0).collect();
        Profile::from_values(Grid::line_from_f64(&breaks).unwrap(), values).unwrap()
    }

    #[test]
    fn level_edges() {
        assert!(Level::from_value(0.0).unwrap().is_zero());
        assert!(Level::from_value(1.0).unwrap().is_one());
        assert!(Level::from_value(1.2).is_err());
        let near_one = Level::from_height(ExtReal::from_f64(-40.0));
        assert_eq!(near_one.value(), 1.0);
        assert!(near_one.in_g());
    }

    #[test]
    fn limits_at_interface_and_interior() {
        let p = line(&[0.3, 0.7]);
        assert_eq!(p.approx_limits(Location::Facet(FacetRef::point(1))).unwrap(), (0.3, 0.7));
        assert_eq!(p.approx_limits(Location::Cell(CellId(0))).unwrap(), (0.3, 0.3));
        // Exterior counts as v = 0.
        assert_eq!(p.approx_limits(Location::Facet(FacetRef::point(0))).unwrap(), (0.0, 0.3));
        assert!(p.approx_limits(Location::Cell(CellId(7))).is_err());
        assert!(p.approx_limits(Location::Facet(FacetRef::point(9))).is_err());
        assert!(p.approx_limits(Location::Vertex(0, 0)).is_err());
    }

    #[test]
    fn f_limits_swap_order() {
        let p = line(&[0.5]);
        assert_eq!(p.f_limits(Location::Cell(CellId(0))).unwrap(), (ExtReal::ZERO, ExtReal::ZERO));
        let q = line(&[0.0, 1.0]);
        let (fw, fv) = q.f_limits(Location::Facet(FacetRef::point(1))).unwrap();
        assert_eq!(fw, ExtReal::NEG_INFINITY);
        assert_eq!(fv, ExtReal::INFINITY);
    }

    #[test]
    fn jump_interfaces_and_normals() {
        let constant = Profile::from_values(Grid::line_from_f64(&[-INF, INF]).unwrap(), &[0.4]).unwrap();
        assert!(constant.jump_interfaces().is_empty());
        let p = Profile::from_values(Grid::line_from_f64(&[-INF, 0.0, INF]).unwrap(), &[0.3, 0.7]).unwrap();
        let j = p.jump_interfaces();
        assert_eq!(j.len(), 1);
        assert_eq!(j[0].normal, Normal { axis: 0, sign: 1 });
        let q = Profile::from_values(Grid::line_from_f64(&[-INF, 0.0, INF]).unwrap(), &[0.7, 0.3]).unwrap();
        assert_eq!(q.jump_interfaces()[0].normal.sign, -1);
    }

    #[test]
    fn scene_reading() {
        let p = line(&[0.3, 1.0, 0.6]);
        let s = p.scene();
        assert_eq!(s.g_cells(), vec![CellId(0), CellId(2)]);
        assert!(s.facets.is_empty());

        let q = Profile::from_values(Grid::line_from_f64(&[-INF, 0.5, INF]).unwrap(), &[0.3, 0.7]).unwrap();
        let s = q.scene();
        assert_eq!(s.facets.len(), 1);
        assert!(!s.facets[0].blocked);
        assert!((s.facets[0].measure - (-0.125f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn annotation_overrides_and_blocks() {
        let p = line(&[0.3, 0.6])
            .with_annotations(vec![SingularAnnotation {
                facet: FacetRef::point(1),
                wedge: Level::ZERO,
                vee: Level::from_value(0.6).unwrap(),
            }])
            .unwrap();
        assert_eq!(p.approx_limits(Location::Facet(FacetRef::point(1))).unwrap(), (0.0, 0.6));
        assert!(p.scene().facets[0].blocked);
        let bad = line(&[0.3, 0.6]).with_annotations(vec![SingularAnnotation {
            facet: FacetRef::point(1),
            wedge: Level::ONE,
            vee: Level::ZERO,
        }]);
        assert!(bad.is_err());
    }

    #[test]
    fn vertex_limits_in_two_dimensions() {
        let g = Grid::plane(Axis::uniform(0.0, 2.0, 2).unwrap(), Axis::uniform(0.0, 2.0, 2).unwrap());
        let p = Profile::from_values(g, &[0.2, 0.4, 0.6, 0.8]).unwrap();
        assert_eq!(p.approx_limits(Location::Vertex(1, 1)).unwrap(), (0.2, 0.8));
        assert_eq!(p.approx_limits(Location::Vertex(0, 0)).unwrap(), (0.0, 0.2));
    }

    #[test]
    fn splitting_a_cell_keeps_limits() {
        let p = line(&[0.3, 0.7])
            .with_annotations(vec![SingularAnnotation {
                facet: FacetRef::point(1),
                wedge: Level::ZERO,
                vee: Level::from_value(0.7).unwrap(),
            }])
            .unwrap();
        let q = p.refine(0, 0.5).unwrap();
        assert_eq!(q.grid().cell_count(), 3);
        assert_eq!(q.values(), vec![0.3, 0.7, 0.7]);
        assert_eq!(q.approx_limits(Location::Facet(FacetRef::point(1))).unwrap(), (0.0, 0.7));
        assert_eq!(q.approx_limits(Location::Facet(FacetRef::point(2))).unwrap(), (0.7, 0.7));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"base_dim":1,"breakpoints":[["-inf",0.0,"inf"]],"values":[0.3,0.7],
            "annotations":[{"facet":1,"wedge":0.0,"vee":0.7}]}"#;
        let p: Profile = serde_json::from_str(text).unwrap();
        assert!(p.is_annotated());
        let back: Profile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Profile>(
            r#"{"base_dim":2,"breakpoints":[[0,1]],"values":[0.5]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<Profile>(
            r#"{"base_dim":1,"breakpoints":[[0,1]],"values":[1.5]}"#
        )
        .is_err());
    }
}
