//! Seeded generators for randomized suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::columnar::ColumnarSet;
use crate::gauss::ExtReal;
use crate::grid::{Axis, Grid};
use crate::interval::IntervalSet;
use crate::profile::Profile;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the open interval `(0, 1)`.
pub fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}

/// `n` cells: sorted breakpoints in `[−span, span]`, each end unbounded with
/// probability 1/2 unless `bounded`.
pub fn axis<R: Rng>(rng: &mut R, n: usize, span: f64, bounded: bool) -> Axis {
    loop {
        let mut b: Vec<f64> = (0..=n).map(|_| rng.gen_range(-span..span)).collect();
        b.sort_by(f64::total_cmp);
        if !bounded && rng.gen_bool(0.5) {
            b[0] = f64::NEG_INFINITY;
        }
        if !bounded && rng.gen_bool(0.5) {
            b[n] = f64::INFINITY;
        }
        if let Ok(a) = Axis::from_f64(&b) {
            return a;
        }
    }
}

/// Up to `max_intervals` intervals with endpoints in `[−4, 4]`; unbounded ends
/// are allowed unless `bounded`.
pub fn section<R: Rng>(rng: &mut R, max_intervals: usize, bounded: bool) -> IntervalSet {
    let k = rng.gen_range(0..=max_intervals);
    let mut pts: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(-4.0..4.0)).collect();
    pts.sort_by(f64::total_cmp);
    if !bounded && k > 0 {
        if rng.gen_bool(0.25) {
            pts[0] = f64::NEG_INFINITY;
        }
        if rng.gen_bool(0.25) {
            pts[2 * k - 1] = f64::INFINITY;
        }
    }
    let pairs = pts.chunks(2).map(|c| (ExtReal::from_f64(c[0]), ExtReal::from_f64(c[1])));
    IntervalSet::from_pairs(pairs)
}

/// Columnar set over a 1-D base with 1..=`max_columns` columns.
pub fn columnar_set<R: Rng>(rng: &mut R, max_columns: usize, max_intervals: usize, bounded: bool) -> ColumnarSet {
    let n = rng.gen_range(1..=max_columns);
    let grid = Grid::line(axis(rng, n, 3.0, bounded));
    let sections = (0..n).map(|_| section(rng, max_intervals, bounded)).collect();
    ColumnarSet::new(grid, sections).expect("one section per cell")
}

/// `0` or `1` with probability `p_extreme / 2` each, otherwise uniform on `(0, 1)`.
pub fn value<R: Rng>(rng: &mut R, p_extreme: f64) -> f64 {
    if rng.gen_bool(p_extreme) {
        if rng.gen_bool(0.5) {
            0.0
        } else {
            1.0
        }
    } else {
        open_unit(rng)
    }
}

/// Unannotated 1-D profile with 1..=`max_cells` cells and at most `max_g`
/// cells in `{0 < v < 1}`.
pub fn profile_1d<R: Rng>(rng: &mut R, max_cells: usize, max_g: usize, p_extreme: f64) -> Profile {
    loop {
        let n = rng.gen_range(1..=max_cells);
        let grid = Grid::line(axis(rng, n, 3.0, false));
        let values: Vec<f64> = (0..n).map(|_| value(rng, p_extreme)).collect();
        let g = values.iter().filter(|v| **v > 0.0 && **v < 1.0).count();
        if g <= max_g {
            return Profile::from_values(grid, &values).expect("values in [0, 1]");
        }
    }
}

/// Unannotated profile on a 2-D base of at most `max_side × max_side` cells.
pub fn profile_2d<R: Rng>(rng: &mut R, max_side: usize, p_extreme: f64) -> Profile {
    let (nx, ny) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
    let grid = Grid::plane(axis(rng, nx, 2.5, false), axis(rng, ny, 2.5, false));
    let values: Vec<f64> = (0..nx * ny).map(|_| value(rng, p_extreme)).collect();
    Profile::from_values(grid, &values).expect("values in [0, 1]")
}
