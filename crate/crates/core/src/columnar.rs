//! Axis-aligned sets `E ⊂ ℝⁿ` described by one vertical section per base cell.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::{self, canonical_sum, ExtReal};
use crate::grid::{CellId, FacetRef, Grid};
use crate::interval::{gaussian_barycenter, IntervalSet};
use crate::profile::{Level, Normal, Profile};

/// A horizontal face `cell × {t}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorizontalFace {
    pub cell: CellId,
    pub endpoint: ExtReal,
    pub gauss: f64,
    #[serde(serialize_with = "crate::json::ext_f64::serialize")]
    pub lebesgue: f64,
    /// Sign of the outward `e_n` component.
    pub normal: i8,
}

/// The part of a vertical facet where exactly one side belongs to the set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerticalFace {
    pub facet: FacetRef,
    /// `γ₁` of the part of the symmetric difference with this normal.
    pub section_measure: f64,
    pub gauss: f64,
    #[serde(serialize_with = "crate::json::ext_f64::serialize")]
    pub lebesgue: f64,
    /// Outward normal; `+axis` where only the lower cell's section is present.
    pub normal: Normal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerimeterBreakdown {
    pub horizontal: Vec<HorizontalFace>,
    pub vertical: Vec<VerticalFace>,
    pub total_gauss: f64,
    #[serde(serialize_with = "crate::json::opt_ext_f64::serialize")]
    pub total_lebesgue: Option<f64>,
}

impl PerimeterBreakdown {
    pub fn vertical_gauss(&self) -> f64 {
        let mut parts: Vec<f64> = self.vertical.iter().map(|f| f.gauss).collect();
        canonical_sum(&mut parts)
    }

    pub fn horizontal_gauss(&self) -> f64 {
        let mut parts: Vec<f64> = self.horizontal.iter().map(|f| f.gauss).collect();
        canonical_sum(&mut parts)
    }
}

/// Per-cell reading of a section against the half-line model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalflineClass {
    /// `(f, ∞)` up to a null set.
    #[serde(rename = "G+")]
    Plus,
    /// `(−∞, −f)` up to a null set.
    #[serde(rename = "G-")]
    Minus,
    /// Null section.
    #[serde(rename = "G0")]
    Zero,
    /// Conull section.
    #[serde(rename = "G1")]
    One,
    #[serde(rename = "not-halfline")]
    NotHalfline,
}

/// Symmetric-difference tolerance used by [`ColumnarSet::halfline_classification`].
pub const HALFLINE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnarSet {
    grid: Grid,
    sections: Vec<IntervalSet>,
}

impl ColumnarSet {
    pub fn new(grid: Grid, sections: Vec<IntervalSet>) -> Result<Self> {
        if sections.len() != grid.cell_count() {
            return Err(Error::InvalidGrid(format!(
                "{} sections for {} cells",
                sections.len(),
                grid.cell_count()
            )));
        }
        Ok(ColumnarSet { grid, sections })
    }

    pub fn empty(grid: Grid) -> Self {
        let sections = vec![IntervalSet::empty(); grid.cell_count()];
        ColumnarSet { grid, sections }
    }

    /// `{x_n > t}` over the whole base.
    pub fn upper_halfspace(base_dim: usize, t: ExtReal) -> Result<Self> {
        let grid = Grid::new(vec![crate::grid::Axis::new(vec![ExtReal::NEG_INFINITY, ExtReal::INFINITY])?; base_dim])?;
        ColumnarSet::new(grid, vec![IntervalSet::upper_halfline(t)])
    }

    /// `{x_1 > t}`: a half-space bounded by a vertical plane.
    pub fn vertical_halfspace(base_dim: usize, t: f64) -> Result<Self> {
        let mut axes = vec![crate::grid::Axis::from_f64(&[f64::NEG_INFINITY, t, f64::INFINITY])?];
        if base_dim == 2 {
            axes.push(crate::grid::Axis::from_f64(&[f64::NEG_INFINITY, f64::INFINITY])?);
        }
        ColumnarSet::new(Grid::new(axes)?, vec![IntervalSet::empty(), IntervalSet::real_line()])
    }

    /// `F[v]`: sections `(Ψ(v), ∞)`.
    pub fn from_profile(p: &Profile) -> Self {
        let sections = p.levels().iter().map(level_section).collect();
        ColumnarSet { grid: p.grid().clone(), sections }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn sections(&self) -> &[IntervalSet] {
        &self.sections
    }

    pub fn section(&self, cell: CellId) -> &IntervalSet {
        &self.sections[cell.0]
    }

    pub fn base_dim(&self) -> usize {
        self.grid.base_dim()
    }

    pub fn gauss_volume(&self) -> f64 {
        let mut parts: Vec<f64> = self
            .grid
            .cells()
            .map(|c| self.grid.cell_gauss_measure(c) * self.sections[c.0].gauss_measure())
            .collect();
        canonical_sum(&mut parts)
    }

    /// Lebesgue volume; `+∞` when unbounded.
    pub fn lebesgue_volume(&self) -> f64 {
        let mut parts: Vec<f64> = self
            .grid
            .cells()
            .filter(|c| !self.sections[c.0].is_empty())
            .map(|c| self.grid.cell_lebesgue_measure(c) * self.sections[c.0].lebesgue_measure())
            .collect();
        canonical_sum(&mut parts)
    }

    fn side(&self, cell: Option<CellId>) -> &IntervalSet {
        static EMPTY: IntervalSet = IntervalSet::EMPTY;
        cell.map_or(&EMPTY, |c| &self.sections[c.0])
    }

    pub fn perimeter(&self) -> PerimeterBreakdown {
        let mut horizontal = Vec::new();
        for cell in self.grid.cells() {
            let g = self.grid.cell_gauss_measure(cell);
            let l = self.grid.cell_lebesgue_measure(cell);
            for (t, normal) in self.sections[cell.0].finite_endpoints() {
                horizontal.push(HorizontalFace {
                    cell,
                    endpoint: t,
                    gauss: gauss::weight(t.value()) * g,
                    lebesgue: l,
                    normal,
                });
            }
        }
        let mut vertical = Vec::new();
        for facet in self.grid.facets() {
            let (a, b) = (self.side(facet.lower), self.side(facet.upper));
            for (part, sign) in [(a.difference(b), 1), (b.difference(a), -1)] {
                if part.is_empty() {
                    continue;
                }
                let m = part.gauss_measure();
                vertical.push(VerticalFace {
                    facet: facet.id,
                    section_measure: m,
                    gauss: facet.gauss_measure * m,
                    lebesgue: facet.lebesgue_measure * part.lebesgue_measure(),
                    normal: Normal { axis: facet.id.axis, sign },
                });
            }
        }
        let mut g: Vec<f64> = horizontal.iter().map(|f| f.gauss).chain(vertical.iter().map(|f| f.gauss)).collect();
        let mut l: Vec<f64> =
            horizontal.iter().map(|f| f.lebesgue).chain(vertical.iter().map(|f| f.lebesgue)).collect();
        let total_lebesgue = canonical_sum(&mut l);
        PerimeterBreakdown {
            horizontal,
            vertical,
            total_gauss: canonical_sum(&mut g),
            total_lebesgue: total_lebesgue.is_finite().then_some(total_lebesgue),
        }
    }

    pub fn gauss_perimeter(&self) -> f64 {
        self.perimeter().total_gauss
    }

    /// Euclidean perimeter; `+∞` for sets with unbounded boundary.
    pub fn lebesgue_perimeter(&self) -> f64 {
        self.perimeter().total_lebesgue.unwrap_or(f64::INFINITY)
    }

    /// Image under `x_n ↦ −x_n`.
    pub fn reflect(&self) -> Self {
        ColumnarSet { grid: self.grid.clone(), sections: self.sections.iter().map(IntervalSet::reflect).collect() }
    }

    /// Per-cell level `γ₁(E_z)`. A section that is a single half-line keeps its
    /// endpoint as the exact height.
    fn section_level(section: &IntervalSet) -> Level {
        if let [iv] = section.intervals() {
            if iv.hi() == ExtReal::INFINITY {
                return Level::from_height(iv.lo());
            }
            if iv.lo() == ExtReal::NEG_INFINITY {
                return Level::from_height(-iv.hi());
            }
        }
        Level::from_value(section.gauss_measure().clamp(0.0, 1.0)).expect("clamped probability")
    }

    /// The distribution function `v(z) = γ₁(E_z)`.
    pub fn distribution(&self) -> Profile {
        let levels = self.sections.iter().map(Self::section_level).collect();
        Profile::new(self.grid.clone(), levels, Vec::new()).expect("one level per cell")
    }

    /// `F[v]` for the distribution of `self`.
    pub fn ehrhard_symmetral(&self) -> Self {
        ColumnarSet::from_profile(&self.distribution())
    }

    /// Sections replaced by centered segments of the same Lebesgue length.
    pub fn steiner_symmetral(&self) -> Self {
        let sections = self
            .sections
            .iter()
            .map(|s| {
                let len = s.lebesgue_measure();
                if len.is_infinite() {
                    IntervalSet::real_line()
                } else {
                    let h = ExtReal::from_f64(0.5 * len);
                    IntervalSet::single(-h, h)
                }
            })
            .collect();
        ColumnarSet { grid: self.grid.clone(), sections }
    }

    /// Reads each section as `G₊`, `G₋`, `G₀`, `G₁` or not a half-line. The
    /// barycenter sign picks the candidate half-line.
    pub fn halfline_classification(&self) -> Vec<HalflineClass> {
        self.sections.iter().map(classify_section).collect()
    }

    /// `γ_n(E₁ Δ E₂)` on the common refinement of both grids.
    pub fn symdiff_volume(&self, other: &ColumnarSet) -> Result<f64> {
        let grid = self.grid.common_refinement(&other.grid)?;
        let (a, b) = (self.regrid(&grid)?, other.regrid(&grid)?);
        let mut parts: Vec<f64> = grid
            .cells()
            .map(|c| grid.cell_gauss_measure(c) * a.sections[c.0].symmetric_difference(&b.sections[c.0]).gauss_measure())
            .collect();
        Ok(canonical_sum(&mut parts))
    }

    /// Same set on a finer grid; cells outside the current grid are empty.
    pub fn regrid(&self, fine: &Grid) -> Result<Self> {
        let map = self.grid.cell_map(fine)?;
        let sections = map.iter().map(|c| self.side(*c).clone()).collect();
        Ok(ColumnarSet { grid: fine.clone(), sections })
    }

    /// Keeps the sections of the cells selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(CellId) -> bool) -> Self {
        let sections = self
            .grid
            .cells()
            .map(|c| if keep(c) { self.sections[c.0].clone() } else { IntervalSet::empty() })
            .collect();
        ColumnarSet { grid: self.grid.clone(), sections }
    }

    /// `ℝⁿ ∖ E`, on the grid extended by unbounded end cells.
    pub fn complement(&self) -> Self {
        let grid = self.grid.extended();
        let inside = self.regrid(&grid).expect("extension refines the grid");
        ColumnarSet { grid, sections: inside.sections.iter().map(IntervalSet::complement).collect() }
    }
}

fn level_section(l: &Level) -> IntervalSet {
    if l.is_zero() {
        IntervalSet::empty()
    } else if l.is_one() {
        IntervalSet::real_line()
    } else {
        IntervalSet::upper_halfline(l.height())
    }
}

fn classify_section(s: &IntervalSet) -> HalflineClass {
    let m = s.gauss_measure();
    if m == 0.0 {
        return HalflineClass::Zero;
    }
    if s.complement().gauss_measure() == 0.0 {
        return HalflineClass::One;
    }
    let level = ColumnarSet::section_level(s);
    let Ok(beta) = gaussian_barycenter(s) else { return HalflineClass::NotHalfline };
    let (class, model) = if beta >= ExtReal::ZERO {
        (HalflineClass::Plus, IntervalSet::upper_halfline(level.height()))
    } else {
        (HalflineClass::Minus, IntervalSet::lower_halfline(-level.height()))
    };
    if s.symmetric_difference(&model).gauss_measure() <= HALFLINE_TOLERANCE {
        class
    } else {
        HalflineClass::NotHalfline
    }
}

#[derive(Serialize, Deserialize)]
struct ColumnarRepr {
    grid: Grid,
    sections: Vec<IntervalSet>,
}

impl Serialize for ColumnarSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ColumnarRepr { grid: self.grid.clone(), sections: self.sections.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColumnarSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ColumnarRepr::deserialize(deserializer)?;
        ColumnarSet::new(repr.grid, repr.sections).map_err(serde::de::Error::custom)
    }
}
