//! Resolution sweeps over catalog families.

use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog;
use crate::error::Result;
use crate::rigidity::{rigidity_verdict, Verdict};

pub const CSV_HEADER: &str = "label,h,perimeter_f,perimeter_e,excess,ln_excess,verdict";

/// One resolution of a family. Set-dependent columns are empty for rigid rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub label: String,
    pub h: f64,
    pub perimeter_f: f64,
    pub perimeter_e: Option<f64>,
    pub excess: Option<f64>,
    pub ln_excess: Option<f64>,
    pub verdict: Verdict,
}

/// Default resolutions: the mistico ladder, iterations 0..=4 for koch, ring
/// counts 1..=4 for g-per-finito, and halving cell widths otherwise.
pub fn default_resolutions(family: &str) -> Result<Vec<f64>> {
    catalog::default_resolution(family)?;
    Ok(match family {
        "mistico" => catalog::MISTICO_RESOLUTIONS.to_vec(),
        "fig3-01" => vec![0.25, 0.125, 0.0625],
        "koch" => (0..=4).map(f64::from).collect(),
        "g-per-finito" => (1..=4).map(f64::from).collect(),
        "fig2-top" | "fig2-bottom" => vec![2.0, 1.0, 0.5, 0.25],
        _ => vec![1.0, 0.5, 0.25],
    })
}

pub fn sweep(family: &str, resolutions: &[f64]) -> Result<Vec<SweepRow>> {
    resolutions
        .iter()
        .map(|&h| {
            let p = catalog::profile(family, h)?;
            let r = rigidity_verdict(&p);
            let pf = crate::columnar::ColumnarSet::from_profile(&p).gauss_perimeter();
            let ce = r.counterexample.as_deref();
            Ok(SweepRow {
                label: family.to_string(),
                h,
                perimeter_f: pf,
                perimeter_e: ce.map(|c| c.perimeter.perimeter_e),
                excess: ce.map(|c| c.excess),
                ln_excess: ce.map(|c| c.ln_excess),
                verdict: r.verdict,
            })
        })
        .collect()
}

fn cell(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        let _ = write!(out, "{v:e}");
    }
}

/// Fixed-column CSV with a header line.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{:e},{:e},", r.label, r.h, r.perimeter_f);
        cell(&mut out, r.perimeter_e);
        out.push(',');
        cell(&mut out, r.excess);
        out.push(',');
        cell(&mut out, r.ln_excess);
        let verdict = match r.verdict {
            Verdict::Rigid => "rigid",
            Verdict::NonRigid => "non-rigid",
        };
        let _ = writeln!(out, ",{verdict}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unannotated_family_has_no_excess() {
        let rows = sweep("fig2-top", &default_resolutions("fig2-top").unwrap()).unwrap();
        assert!(rows.iter().all(|r| r.verdict == Verdict::NonRigid));
        assert!(rows.iter().all(|r| r.excess.unwrap().abs() <= 1e-10));
        assert!(rows.iter().all(|r| (r.perimeter_e.unwrap() - r.perimeter_f).abs() <= 1e-10));
    }

    #[test]
    fn csv_shape() {
        let rows = sweep("spikes", &[1.0, 0.5]).unwrap();
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.split(',').count() == 7));
        assert!(lines[1].ends_with(",,,,rigid"));
        assert_eq!(csv, to_csv(&sweep("spikes", &[1.0, 0.5]).unwrap()));
    }
}
