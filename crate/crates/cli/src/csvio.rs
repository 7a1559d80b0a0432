//! Fixed CSV schemas, written with deterministic float formatting so equal
//! configurations produce byte-identical artifacts.
//!
//! - series: `t,k,component,norm`
//! - report: `label,k,fitted,theoretical,r2,c_lower,c_upper,verdict`
//! - band scan: `xi_mag,re_beta_plus,im_beta_plus,re_beta_minus,im_beta_minus,beta_heat,lc_ok`

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use liqlab::series::{SeriesLabel, TimeSeries};
use liqlab::symbol::{eigenvalues, lienard_chipart, FluidParams};

use crate::report::DecayReport;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_series_csv(path: &Path, series: &[TimeSeries]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["t", "k", "component", "norm"])?;
    let mut sorted: Vec<&TimeSeries> = series.iter().collect();
    sorted.sort_by(|a, b| a.label().cmp(b.label()));
    for s in sorted {
        for (t, v) in s.times().iter().zip(s.values()) {
            w.write_record([
                fmt(*t),
                s.label().k.to_string(),
                s.label().component.clone(),
                fmt(*v),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Raw `(t, k, component, norm)` rows in the series schema, for measurement
/// paths whose values may legitimately touch zero.
pub fn write_series_rows(path: &Path, rows: &[(f64, u32, String, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["t", "k", "component", "norm"])?;
    let mut sorted: Vec<&(f64, u32, String, f64)> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.2, a.1).cmp(&(&b.2, b.1)).then(a.0.partial_cmp(&b.0).unwrap())
    });
    for (t, k, component, norm) in sorted {
        w.write_record([fmt(*t), k.to_string(), component.clone(), fmt(*norm)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series_csv(path: &Path) -> Result<Vec<TimeSeries>> {
    let mut r = csv::Reader::from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let headers = r.headers()?.clone();
    let expect = ["t", "k", "component", "norm"];
    if headers.iter().collect::<Vec<_>>() != expect {
        bail!("series csv {} has header {:?}, expected {:?}", path.display(), headers, expect);
    }
    let mut buckets: BTreeMap<(String, u32), Vec<(f64, f64)>> = BTreeMap::new();
    for record in r.records() {
        let record = record?;
        let t: f64 = record[0].parse()?;
        let k: u32 = record[1].parse()?;
        let component = record[2].to_string();
        let norm: f64 = record[3].parse()?;
        buckets.entry((component, k)).or_default().push((t, norm));
    }
    let mut out = Vec::new();
    for ((component, k), mut rows) in buckets {
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let (times, values) = rows.into_iter().unzip();
        out.push(TimeSeries::new(SeriesLabel { component, k }, times, values)?);
    }
    Ok(out)
}

pub fn write_report_csv(path: &Path, reports: &[DecayReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record([
        "label", "k", "fitted", "theoretical", "r2", "c_lower", "c_upper", "verdict",
    ])?;
    for r in reports {
        w.write_record([
            r.label.component.clone(),
            r.label.k.to_string(),
            fmt(r.fitted),
            fmt(r.theoretical),
            fmt(r.r_squared),
            fmt(r.c_lower),
            fmt(r.c_upper),
            (if r.pass { "pass" } else { "fail" }).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Eigenvalue scan of the symbol over a frequency range.
pub fn write_band_scan_csv(
    path: &Path,
    params: &FluidParams,
    xi_max: f64,
    samples: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record([
        "xi_mag",
        "re_beta_plus",
        "im_beta_plus",
        "re_beta_minus",
        "im_beta_minus",
        "beta_heat",
        "lc_ok",
    ])?;
    for i in 1..=samples {
        let xi = xi_max * i as f64 / samples as f64;
        let e = eigenvalues(params, xi)?;
        let lc = lienard_chipart(params, xi)?;
        w.write_record([
            fmt(xi),
            fmt(e.plus.re),
            fmt(e.plus.im),
            fmt(e.minus.re),
            fmt(e.minus.im),
            fmt(e.heat),
            (if lc { "true" } else { "false" }).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use liqlab::series::geometric_times;

    #[test]
    fn series_round_trip() {
        let dir = std::env::temp_dir().join("liqdecay-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("series.csv");
        let times = geometric_times(1e2, 1e3, 16);
        let values: Vec<f64> = times.iter().map(|t| 2.0 / t).collect();
        let series = vec![
            TimeSeries::new(SeriesLabel { component: "density".into(), k: 0 }, times.clone(), values.clone()).unwrap(),
            TimeSeries::new(SeriesLabel { component: "director".into(), k: 2 }, times, values).unwrap(),
        ];
        write_series_csv(&path, &series).unwrap();
        let back = read_series_csv(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].label().component, "density");
        assert_eq!(back[1].label().k, 2);
        assert_eq!(back[0].times(), series[0].times());
        assert_eq!(back[0].values(), series[0].values());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn identical_inputs_give_identical_bytes() {
        let dir = std::env::temp_dir().join("liqdecay-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let a = dir.join("a.csv");
        let b = dir.join("b.csv");
        let times = geometric_times(1e2, 1e3, 8);
        let values: Vec<f64> = times.iter().map(|t| 1.0 / t).collect();
        let s = vec![TimeSeries::new(
            SeriesLabel { component: "density".into(), k: 1 },
            times,
            values,
        )
        .unwrap()];
        write_series_csv(&a, &s).unwrap();
        write_series_csv(&b, &s).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        std::fs::remove_file(&a).unwrap();
        std::fs::remove_file(&b).unwrap();
    }

    #[test]
    fn malformed_header_is_rejected() {
        let dir = std::env::temp_dir().join("liqdecay-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "time,norm\n1.0,2.0\n").unwrap();
        assert!(read_series_csv(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }
}
