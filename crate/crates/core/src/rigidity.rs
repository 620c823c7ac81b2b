//! Rigidity verdicts for equality cases of Ehrhard's inequality, counterexample
//! synthesis and verification, the reflection gap δ, and the indecomposability
//! sufficient conditions.

use serde::Serialize;

use crate::columnar::{ColumnarSet, HalflineClass};
use crate::connectedness::{
    complement_indecomposable, essentially_disconnects, indecomposable, Disconnection, PartitionCertificate,
    Witness,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gauss::{self, log_sum_exp, ExtReal, LN_TWO};
use crate::grid::CellId;
use crate::interval::IntervalSet;
use crate::profile::Profile;

/// Default equality tolerance of [`exhaustive_search`].
pub const SEARCH_TOLERANCE: f64 = 1e-9;
/// Default equality tolerance of [`verify_equality_case`].
pub const VERIFY_TOLERANCE: f64 = 1e-10;
/// Symmetric differences at or below this volume count as null.
pub const NULL_VOLUME: f64 = 1e-12;
/// Default bound on the number of G-cells for [`exhaustive_search`].
pub const DEFAULT_MAX_CELLS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Rigid,
    NonRigid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Theorem,
    PlanarTheorem,
    ExhaustiveSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerimeterCheck {
    pub perimeter_e: f64,
    pub perimeter_f: f64,
    /// `P_γ(E) − P_γ(F[v])`.
    pub difference: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymdiffCheck {
    /// `γ_n(E Δ F[v])`.
    pub to_symmetral: f64,
    /// `γ_n(E Δ g(F[v]))`.
    pub to_reflection: f64,
}

impl SymdiffCheck {
    pub fn nontrivial(&self) -> bool {
        self.to_symmetral > NULL_VOLUME && self.to_reflection > NULL_VOLUME
    }
}

/// The set `E` obtained by reflecting `F[v]` over `G₋`, with its checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub certificate: PartitionCertificate,
    pub set: ColumnarSet,
    pub perimeter: PerimeterCheck,
    pub symdiff: SymdiffCheck,
    /// `Σ H^{n−2}_γ(facet) δ(f_a, f_b)` over the G₊/G₋ facets: the perimeter
    /// excess evaluated facet by facet.
    pub excess: f64,
    /// Natural log of `excess`, finite even where `excess` underflows.
    pub ln_excess: f64,
    /// `true` when the profile carries no annotations, so the sampled
    /// perimeters are the exact ones and `excess` must vanish.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub verdict: Verdict,
    pub method: Method,
    /// Connectivity proof for a rigid verdict by theorem.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Box<Counterexample>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions_checked: Option<u64>,
    pub annotated: bool,
    pub notes: Vec<String>,
}

impl RigidityReport {
    fn new(verdict: Verdict, method: Method, p: &Profile) -> Self {
        let mut notes = Vec::new();
        if p.is_annotated() {
            notes.push(
                "annotated profile: verdicts read the annotations, perimeters read the sampled cell values, \
                 so counterexample equality holds only in the resolution limit"
                    .to_string(),
            );
        }
        RigidityReport {
            verdict,
            method,
            connectivity: None,
            counterexample: None,
            partitions_checked: None,
            annotated: p.is_annotated(),
            notes,
        }
    }
}

/// Reflection gap `δ(α, β) = 1 − γ₁(min{−α, β}, max{−α, β}) − γ₁(α, β)`, in
/// closed form `2Φ(max{β, −α})`.
pub fn gap(alpha: ExtReal, beta: ExtReal) -> Result<f64> {
    if beta < alpha {
        return Err(Error::Domain(format!("gap needs beta >= alpha, got ({alpha}, {beta})")));
    }
    Ok(2.0 * gauss::phi(beta.max(-alpha)))
}

/// `ln δ(α, β)`.
pub fn ln_gap(alpha: ExtReal, beta: ExtReal) -> Result<f64> {
    if beta < alpha {
        return Err(Error::Domain(format!("gap needs beta >= alpha, got ({alpha}, {beta})")));
    }
    Ok(LN_TWO + gauss::ln_phi(beta.max(-alpha)))
}

/// Theorem verdict: rigid iff `{v∧ = 0} ∪ {v∨ = 1}` does not essentially
/// disconnect `{0 < v < 1}`.
pub fn rigidity_verdict(p: &Profile) -> RigidityReport {
    let scene = p.scene();
    let d = essentially_disconnects(&scene);
    finish(p, Method::Theorem, d)
}

fn finish(p: &Profile, method: Method, d: Disconnection) -> RigidityReport {
    match d.witness {
        Witness::Partition(cert) => {
            let mut report = RigidityReport::new(Verdict::NonRigid, method, p);
            let ce = counterexample(p, cert).expect("certificate from the profile's own scene");
            report.counterexample = Some(Box::new(ce));
            report
        }
        w => {
            let mut report = RigidityReport::new(Verdict::Rigid, method, p);
            report.connectivity = Some(w);
            report
        }
    }
}

/// Planar verdict (1-D base): rigid iff the G-cells form one run of adjacent
/// cells and no facet inside the run has `v∧ = 0` or `v∨ = 1`.
pub fn rigidity_verdict_planar(p: &Profile) -> Result<RigidityReport> {
    if p.base_dim() != 1 {
        return Err(Error::BaseDimension { found: p.base_dim(), expected: 1 });
    }
    let g = p.g_cells();
    let scene = p.scene();
    // Index of the first G-cell after a break in the run.
    let mut cut = None;
    for w in g.windows(2) {
        let joined = w[1].0 == w[0].0 + 1
            && scene.facets.iter().any(|f| f.cells == [w[0], w[1]] && !f.blocked && f.measure > 0.0);
        if !joined {
            cut = Some(w[1]);
            break;
        }
    }
    let Some(cut) = cut else {
        let facets = scene.facets.iter().map(|f| f.id).collect();
        let witness = if g.is_empty() { Witness::Empty } else { Witness::Spanning { facets } };
        let d = Disconnection { disconnects: false, components: usize::from(!g.is_empty()), witness };
        return Ok(finish(p, Method::PlanarTheorem, d));
    };
    let (plus, minus): (Vec<CellId>, Vec<CellId>) = g.iter().partition(|c| **c < cut);
    let cert = PartitionCertificate::evaluate(&scene, &plus, &minus)?;
    let d = Disconnection { disconnects: true, components: 2, witness: Witness::Partition(cert) };
    Ok(finish(p, Method::PlanarTheorem, d))
}

/// `E = (F ∩ ((G₊ ∪ G₁) × ℝ)) ∪ (g(F) ∩ (G₋ × ℝ))` for a partition of the
/// G-cells of `p`.
pub fn build_counterexample(p: &Profile, cert: &PartitionCertificate) -> Result<ColumnarSet> {
    let checked = PartitionCertificate::evaluate(&p.scene(), &cert.plus, &cert.minus)?;
    Ok(reflect_cells(p, &checked.minus))
}

fn reflect_cells(p: &Profile, minus: &[CellId]) -> ColumnarSet {
    let f = ColumnarSet::from_profile(p);
    let mut sections = f.sections().to_vec();
    for c in minus {
        sections[c.0] = IntervalSet::lower_halfline(-p.height(*c));
    }
    ColumnarSet::new(p.grid().clone(), sections).expect("same grid")
}

/// Builds and measures the counterexample for a certificate.
pub fn counterexample(p: &Profile, cert: PartitionCertificate) -> Result<Counterexample> {
    let set = build_counterexample(p, &cert)?;
    let f = ColumnarSet::from_profile(p);
    let (pe, pf) = (set.gauss_perimeter(), f.gauss_perimeter());
    let symdiff = SymdiffCheck { to_symmetral: set.symdiff_volume(&f)?, to_reflection: set.symdiff_volume(&f.reflect())? };
    let (excess, ln_excess) = interface_excess(p, &cert);
    Ok(Counterexample {
        certificate: cert,
        set,
        perimeter: PerimeterCheck { perimeter_e: pe, perimeter_f: pf, difference: pe - pf },
        symdiff,
        excess,
        ln_excess,
        exact: !p.is_annotated(),
    })
}

/// Perimeter excess of the reflection over `G₋`, facet by facet: only G₊/G₋
/// facets change, each by `H(facet) δ(f_a, f_b)` with sampled heights.
fn interface_excess(p: &Profile, cert: &PartitionCertificate) -> (f64, f64) {
    let scene = p.scene();
    let minus: std::collections::BTreeSet<CellId> = cert.minus.iter().copied().collect();
    let mut linear = Vec::new();
    let mut logs = Vec::new();
    for f in &scene.facets {
        let [a, b] = f.cells;
        if minus.contains(&a) == minus.contains(&b) {
            continue;
        }
        let (ha, hb) = (p.height(a), p.height(b));
        let (lo, hi) = (ha.min(hb), ha.max(hb));
        linear.push(f.measure * gap(lo, hi).expect("ordered"));
        logs.push(f.measure.ln() + ln_gap(lo, hi).expect("ordered"));
    }
    (gauss::canonical_sum(&mut linear) + 0.0, log_sum_exp(&logs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityReport {
    pub v_distributed: bool,
    pub max_distribution_error: f64,
    pub perimeter: PerimeterCheck,
    pub equality: bool,
    pub classification: Vec<HalflineClass>,
    pub classification_total: bool,
    /// An equality case must have half-line sections everywhere.
    pub necessary_condition_holds: bool,
    pub symdiff: SymdiffCheck,
}

/// Checks whether `E` is an equality case for the profile `p`.
pub fn verify_equality_case(e: &ColumnarSet, p: &Profile, tolerance: f64) -> Result<EqualityReport> {
    let f = ColumnarSet::from_profile(p);
    let grid = e.grid().common_refinement(p.grid())?;
    let (er, pr) = (e.regrid(&grid)?, p.regrid(&grid)?);
    let dist = er.distribution();
    let max_err = dist.values().iter().zip(pr.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (pe, pf) = (e.gauss_perimeter(), f.gauss_perimeter());
    let classification = e.halfline_classification();
    let total = classification.iter().all(|c| *c != HalflineClass::NotHalfline);
    let equality = (pe - pf).abs() <= tolerance;
    let strict_equality = (pe - pf).abs() <= SEARCH_TOLERANCE;
    Ok(EqualityReport {
        v_distributed: max_err <= NULL_VOLUME,
        max_distribution_error: max_err,
        perimeter: PerimeterCheck { perimeter_e: pe, perimeter_f: pf, difference: pe - pf },
        equality,
        classification,
        classification_total: total,
        necessary_condition_holds: !strict_equality || total,
        symdiff: SymdiffCheck { to_symmetral: e.symdiff_volume(&f)?, to_reflection: e.symdiff_volume(&f.reflect())? },
    })
}

/// Tries every non-trivial partition of the G-cells, in increasing mask order
/// where the least significant bit moves the last G-cell to `G₋`, and returns
/// the first equal-perimeter reflection that differs from both `F[v]` and
/// `g(F[v])`.
pub fn exhaustive_search(p: &Profile, max_cells: usize, tolerance: f64, exec: Execution) -> Result<RigidityReport> {
    let g = p.g_cells();
    if g.len() > max_cells || g.len() > 63 {
        return Err(Error::TooManyCells { found: g.len(), bound: max_cells.min(63) });
    }
    let k = g.len();
    let f = ColumnarSet::from_profile(p);
    let gf = f.reflect();
    let pf = f.gauss_perimeter();
    let masks = if k < 2 { 0 } else { (1u64 << k) - 2 };
    let minus_of = |mask: u64| -> Vec<CellId> { (0..k).filter(|i| mask >> i & 1 == 1).map(|i| g[k - 1 - i]).collect() };
    let hit = exec.find_first(1..masks + 1, |mask| {
        let e = reflect_cells(p, &minus_of(mask));
        if (e.gauss_perimeter() - pf).abs() > tolerance {
            return None;
        }
        let nontrivial = e.symdiff_volume(&f).ok()? > NULL_VOLUME && e.symdiff_volume(&gf).ok()? > NULL_VOLUME;
        nontrivial.then_some(mask)
    });
    let mut report = match hit {
        None => RigidityReport::new(Verdict::Rigid, Method::ExhaustiveSearch, p),
        Some(mask) => {
            let minus = minus_of(mask);
            let plus: Vec<CellId> = g.iter().copied().filter(|c| !minus.contains(c)).collect();
            let mut minus_sorted = minus;
            minus_sorted.sort();
            let cert = PartitionCertificate::evaluate(&p.scene(), &plus, &minus_sorted)?;
            let mut report = RigidityReport::new(Verdict::NonRigid, Method::ExhaustiveSearch, p);
            report.counterexample = Some(Box::new(counterexample(p, cert)?));
            report
        }
    };
    report.partitions_checked = Some(hit.unwrap_or(masks));
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PinoLevel {
    pub t: f64,
    pub cells: usize,
    pub indecomposable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PinoReport {
    pub levels: Vec<PinoLevel>,
    pub holds: bool,
}

/// Default levels: a fixed decreasing ladder, closed by a level below every
/// G-cell value so that the last restriction is all of G.
pub fn pino_levels(p: &Profile) -> Vec<f64> {
    let mut levels = vec![0.25, 0.1, 0.05, 0.01, 1e-3, 1e-4, 1e-6, 1e-9];
    let max_height = p
        .levels()
        .iter()
        .filter(|l| l.in_g())
        .map(|l| l.height().value().abs())
        .fold(0.0, f64::max);
    let last = 0.5 * gauss::phi(ExtReal::from_f64(max_height));
    if last > 0.0 && last < levels[levels.len() - 1] {
        levels.push(last);
    }
    levels
}

/// For each level `t`, whether `F[v] ∩ ({t < v < 1 − t} × ℝ)` is indecomposable.
pub fn check_pino(p: &Profile, levels: &[f64]) -> Result<PinoReport> {
    if levels.is_empty() {
        return Err(Error::Domain("no levels".into()));
    }
    for w in levels.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Domain("levels must be strictly decreasing".into()));
        }
    }
    let f = ColumnarSet::from_profile(p);
    let mut out = Vec::with_capacity(levels.len());
    for &t in levels {
        if !(t > 0.0 && t < 0.5) {
            return Err(Error::Domain(format!("level {t} outside (0, 1/2)")));
        }
        let bound = gauss::psi(t)?;
        let keep = |c: CellId| {
            let h = p.height(c);
            -bound < h && h < bound
        };
        let cells = p.grid().cells().filter(|c| keep(*c)).count();
        out.push(PinoLevel { t, cells, indecomposable: indecomposable(&f.restrict(keep)) });
    }
    let holds = out.iter().all(|l| l.indecomposable);
    Ok(PinoReport { levels: out, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GinoReport {
    pub set_indecomposable: bool,
    pub complement_indecomposable: bool,
    pub holds: bool,
}

/// Whether both `F[v]` and its complement are indecomposable, on any base.
pub fn gino_condition(p: &Profile) -> GinoReport {
    let f = ColumnarSet::from_profile(p);
    let a = indecomposable(&f);
    let b = complement_indecomposable(&f);
    GinoReport { set_indecomposable: a, complement_indecomposable: b, holds: a && b }
}

/// [`gino_condition`] restricted to the planar case, where it implies rigidity.
pub fn check_gino(p: &Profile) -> Result<GinoReport> {
    if p.base_dim() != 1 {
        return Err(Error::BaseDimension { found: p.base_dim(), expected: 1 });
    }
    Ok(gino_condition(p))
}

/// Steiner condition on the representable class: `{v > 0}` is non-null and
/// not essentially disconnected by `{v∧ = 0}`.
pub fn steiner_connected(p: &Profile) -> bool {
    let d = essentially_disconnects(&p.steiner_scene());
    d.components > 0 && !d.disconnects
}

/// Reads `v` as section lengths and returns the Steiner symmetral `{|x_n| < v/2}`.
pub fn steiner_profile_set(p: &Profile) -> ColumnarSet {
    let sections = p
        .values()
        .into_iter()
        .map(|v| {
            let h = ExtReal::from_f64(0.5 * v);
            IntervalSet::single(-h, h)
        })
        .collect();
    ColumnarSet::new(p.grid().clone(), sections).expect("same grid")
}
