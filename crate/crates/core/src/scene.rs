use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellId, FacetRef};

/// A cell of the base grid as seen by connectedness queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneCell {
    pub id: CellId,
    pub in_g: bool,
    pub gauss_measure: f64,
    #[serde(with = "crate::json::ext_f64")]
    pub lebesgue_measure: f64,
}

/// A facet joining two G-cells, with its `H^{m−1}_γ` measure and whether the
/// disconnecting set K covers it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFacet {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet: Option<FacetRef>,
    pub cells: [CellId; 2],
    pub measure: f64,
    pub blocked: bool,
}

/// Cell/facet graph carrying G-membership and K-blocking.
///
/// Only facets between two G-cells are listed; facets between a G-cell and a
/// non-G cell are not in `G^{(1)}` and play no role.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub base_dim: usize,
    pub cells: Vec<SceneCell>,
    pub facets: Vec<SceneFacet>,
}

impl Scene {
    /// Checks cross references. Used on scenes read from JSON.
    pub fn validate(&self) -> Result<()> {
        let mut in_g = BTreeMap::new();
        for c in &self.cells {
            if in_g.insert(c.id, c.in_g).is_some() {
                return Err(Error::Json(format!("duplicate cell id {}", c.id.0)));
            }
            if !(c.gauss_measure >= 0.0) {
                return Err(Error::Json(format!("cell {} has invalid measure", c.id.0)));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.facets {
            if !seen.insert(f.id) {
                return Err(Error::Json(format!("duplicate facet id {}", f.id)));
            }
            for c in f.cells {
                match in_g.get(&c) {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::Json(format!("facet {} touches non-G cell {}", f.id, c.0)))
                    }
                    None => return Err(Error::Json(format!("facet {} names unknown cell {}", f.id, c.0))),
                }
            }
            if f.cells[0] == f.cells[1] {
                return Err(Error::Json(format!("facet {} joins a cell to itself", f.id)));
            }
            if !(f.measure >= 0.0) {
                return Err(Error::Json(format!("facet {} has invalid measure", f.id)));
            }
        }
        Ok(())
    }

    pub fn g_cells(&self) -> Vec<CellId> {
        let mut ids: Vec<CellId> = self.cells.iter().filter(|c| c.in_g).map(|c| c.id).collect();
        ids.sort();
        ids
    }

    /// Same scene with every blocked flag cleared (K = ∅).
    pub fn unblocked(&self) -> Scene {
        let mut s = self.clone();
        for f in &mut s.facets {
            f.blocked = false;
        }
        s
    }

    /// Total `H^{m−1}_γ` measure of the listed facets.
    pub fn facet_measure_total(&self) -> f64 {
        self.facets.iter().map(|f| f.measure).sum()
    }

    pub fn from_json(text: &str) -> Result<Scene> {
        let scene: Scene = serde_json::from_str(text)?;
        scene.validate()?;
        Ok(scene)
    }
}
