//! Deterministic emitters and parsers for the pinned file formats.
//!
//! Emission is hand-rolled so field order is fixed and every float is written
//! with 17 significant digits (which round-trips f64 exactly); rerunning a
//! command with the same configuration reproduces output files byte for
//! byte. Parsing goes through serde and is order-insensitive.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::generators::{ControlKind, SweepMember};
use crate::geometry::{ExpanderSurface, Orientation, ProfileCurve, SurfaceKind};
use crate::spectral::{BoundaryCondition, SpectrumResult};
use crate::verify::{CheckRecord, VerificationReport};

/// 17-significant-digit float form used in every emitted document.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0
    debug_assert!(x.is_finite(), "non-finite value in output: {x}");
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn config_object(config: &[(String, String)]) -> String {
    let body: Vec<String> = config
        .iter()
        .map(|(k, v)| format!("\"{}\":\"{}\"", escape(k), escape(v)))
        .collect();
    format!("{{{}}}", body.join(","))
}

fn float_array(values: &[f64]) -> String {
    let body: Vec<String> = values.iter().map(|v| fmt_float(*v)).collect();
    format!("[{}]", body.join(","))
}

fn named_float_map(map: &BTreeMap<String, f64>) -> String {
    let body: Vec<String> = map
        .iter()
        .map(|(k, v)| format!("\"{}\":{}", escape(k), fmt_float(*v)))
        .collect();
    format!("{{{}}}", body.join(","))
}

// ---------------------------------------------------------------------------
// geometry documents

/// Geometry document: kind, n, ds, samples, then the full resolved config.
pub fn geometry_json(surface: &ExpanderSurface, config: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{{\"kind\":\"{}\",\"n\":{},",
        surface.kind().as_str(),
        surface.dim()
    ));
    match surface.profile() {
        Some(p) => {
            out.push_str(&format!("\"ds\":{},\"samples\":[", fmt_float(p.ds())));
            for i in 0..p.len() {
                if i > 0 {
                    out.push(',');
                }
                let x = p.positions()[i];
                let t = p.tangents()[i];
                out.push_str(&format!(
                    "{{\"s\":{},\"x\":[{},{}],\"T\":[{},{}],\"k\":{}}}",
                    fmt_float(p.s()[i]),
                    fmt_float(x[0]),
                    fmt_float(x[1]),
                    fmt_float(t[0]),
                    fmt_float(t[1]),
                    fmt_float(p.curvatures()[i])
                ));
            }
            out.push_str("],");
        }
        None => out.push_str(&format!("\"ds\":{},\"samples\":[],", fmt_float(0.0))),
    }
    let mut full_config = config.to_vec();
    full_config.push(("id".into(), surface.id().to_string()));
    if let Ok(o) = surface.orientation() {
        full_config.push(("orientation".into(), o.as_str().to_string()));
    }
    out.push_str(&format!("\"config\":{}}}", config_object(&full_config)));
    out.push('\n');
    out
}

#[derive(Deserialize)]
struct SampleDoc {
    s: f64,
    x: [f64; 2],
    #[serde(rename = "T")]
    t: [f64; 2],
    k: f64,
}

#[derive(Deserialize)]
struct GeometryDoc {
    kind: String,
    n: usize,
    ds: f64,
    samples: Vec<SampleDoc>,
    #[serde(default)]
    config: BTreeMap<String, String>,
}

/// Parse a geometry document back into a surface plus its config echo.
pub fn parse_geometry(text: &str) -> Result<(ExpanderSurface, BTreeMap<String, String>)> {
    let doc: GeometryDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("geometry: {e}")))?;
    let kind = SurfaceKind::parse(&doc.kind)?;
    let orientation = doc
        .config
        .get("orientation")
        .map(|s| Orientation::parse(s))
        .transpose()?;
    let id = doc
        .config
        .get("id")
        .cloned()
        .unwrap_or_else(|| "unnamed".to_string());
    let profile = if doc.samples.is_empty() {
        None
    } else {
        let s0 = doc.samples[0].s;
        let x: Vec<[f64; 2]> = doc.samples.iter().map(|s| s.x).collect();
        let t: Vec<[f64; 2]> = doc.samples.iter().map(|s| s.t).collect();
        let k: Vec<f64> = doc.samples.iter().map(|s| s.k).collect();
        Some(ProfileCurve::from_samples(s0, doc.ds, x, t, k)?)
    };
    if kind != SurfaceKind::Hyperplane && profile.is_none() {
        return Err(Error::Parse(format!(
            "{} document without samples",
            doc.kind
        )));
    }
    let surface = ExpanderSurface::from_parts(kind, profile, doc.n, orientation, id);
    Ok((surface, doc.config))
}

// ---------------------------------------------------------------------------
// sweep index

/// Sweep index: member files with their config and residual summary.
pub fn sweep_json(members: &[SweepMember]) -> String {
    let mut out = String::from("{\"members\":[");
    for (i, member) in members.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "{{\"file\":\"{}\",\"kind\":\"{}\",\"n\":{},\"residual_max\":{},",
            escape(&member.file_name()),
            member.surface.kind().as_str(),
            member.surface.dim(),
            fmt_float(member.residual_max)
        ));
        match member.mean_convex {
            Some(b) => out.push_str(&format!("\"mean_convex\":{b},")),
            None => out.push_str("\"mean_convex\":null,"),
        }
        match member.control {
            Some(c) => out.push_str(&format!("\"control\":\"{}\",", c.as_str())),
            None => out.push_str("\"control\":null,"),
        }
        out.push_str(&format!(
            "\"cone_angles\":{},\"config\":{}}}",
            float_array(&member.cone_angles),
            config_object(&member.config_echo)
        ));
    }
    out.push_str("]}\n");
    out
}

#[derive(Deserialize)]
struct SweepMemberDoc {
    file: String,
    #[serde(default)]
    control: Option<String>,
}

#[derive(Deserialize)]
struct SweepDoc {
    members: Vec<SweepMemberDoc>,
}

/// Parse a sweep index into (file name, control tag) pairs.
pub fn parse_sweep(text: &str) -> Result<Vec<(String, Option<ControlKind>)>> {
    let doc: SweepDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("sweep: {e}")))?;
    doc.members
        .into_iter()
        .map(|m| {
            let control = match m.control.as_deref() {
                None => None,
                Some("circle") => Some(ControlKind::Circle),
                Some("rescaled_expander") => Some(ControlKind::RescaledExpander),
                Some(other) => return Err(Error::Parse(format!("unknown control {other:?}"))),
            };
            Ok((m.file, control))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// spectrum documents

fn bc_str(bc: BoundaryCondition) -> &'static str {
    bc.as_str()
}

/// Spectrum document. Eigenvalues are in the Rayleigh convention
/// ((L + q) u + lambda u = 0); the raw operator eigenvalues are stored
/// alongside under their own tag.
pub fn spectrum_json(result: &SpectrumResult, config: &[(String, String)]) -> String {
    let mut out = String::from("{\"convention\":\"rayleigh\",");
    out.push_str(&format!(
        "\"eigenvalues\":{},",
        float_array(&result.eigenvalues)
    ));
    out.push_str(&format!("\"grid_size\":{},", result.grid_size));
    out.push_str(&format!(
        "\"domain_radius\":{},",
        fmt_float(result.domain_radius)
    ));
    out.push_str(&format!("\"bc\":\"{}\",", bc_str(result.bc)));
    out.push_str(&format!(
        "\"richardson\":{},",
        float_array(&result.richardson)
    ));
    out.push_str("\"raw_convention\":\"operator\",");
    out.push_str(&format!(
        "\"raw_eigenvalues\":{},",
        float_array(&result.raw_eigenvalues)
    ));
    out.push_str(&format!("\"flat_shift\":{},", fmt_float(result.flat_shift)));
    out.push_str(&format!("\"m\":{},", result.m));
    out.push_str(&format!("\"surface\":\"{}\",", escape(&result.surface_id)));
    out.push_str(&format!(
        "\"operator\":\"{}\",",
        result.potential_kind.as_str()
    ));
    out.push_str(&format!("\"config\":{}}}\n", config_object(config)));
    out
}

/// Eigenvector CSV: header row then (s, value) per row, 17-digit floats.
pub fn eigenvector_csv(result: &SpectrumResult, mode: usize) -> Result<String> {
    let v = result
        .eigenvectors
        .get(mode)
        .ok_or_else(|| Error::InvalidConfig(format!("mode {mode} not computed")))?;
    let mut out = String::from("s,value\n");
    for (s, val) in result.grid.iter().zip(v) {
        out.push_str(&format!("{},{}\n", fmt_float(*s), fmt_float(*val)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// verification reports

fn check_json(check: &CheckRecord) -> String {
    let mut out = format!(
        "{{\"name\":\"{}\",\"surface\":\"{}\",\"measured\":{},\"bound\":{},\"margin\":{},\"pass\":{},\"tolerance\":{}",
        escape(&check.name),
        escape(&check.surface),
        named_float_map(&check.measured),
        named_float_map(&check.bound),
        fmt_float(check.margin),
        check.pass,
        fmt_float(check.tolerance),
    );
    out.push_str(&format!(",\"expected_fail\":{}", check.expected_fail));
    if let Some(err) = &check.error {
        out.push_str(&format!(",\"error\":\"{}\"", escape(err)));
    }
    out.push('}');
    out
}

/// report.json: environment then one record per check.
pub fn report_json(report: &VerificationReport) -> String {
    let env = &report.environment;
    let mut out = format!(
        "{{\"environment\":{{\"grid_size\":{},\"domain_radius\":{},\"ds\":{},\"version\":\"{}\"",
        env.grid_size,
        fmt_float(env.domain_radius),
        fmt_float(env.ds),
        escape(&env.version)
    );
    if let Some(ts) = &env.timestamp {
        out.push_str(&format!(",\"timestamp\":\"{}\"", escape(ts)));
    }
    out.push_str("},\"checks\":[");
    for (i, check) in report.checks.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&check_json(check));
    }
    out.push_str("]}\n");
    out
}

/// Human-readable report table.
pub fn report_md(report: &VerificationReport) -> String {
    let env = &report.environment;
    let mut out = String::new();
    out.push_str("# Verification report\n\n");
    out.push_str(&format!(
        "grid {} | radius {} | ds {} | version {}\n\n",
        env.grid_size, env.domain_radius, env.ds, env.version
    ));
    out.push_str("| surface | check | margin | tolerance | status |\n");
    out.push_str("|---|---|---|---|---|\n");
    for c in &report.checks {
        let status = match (c.error.is_some(), c.pass, c.expected_fail) {
            (true, _, _) => "ERROR",
            (_, true, false) => "pass",
            (_, false, true) => "expected-fail",
            (_, true, true) => "UNEXPECTED-PASS",
            (_, false, false) => "FAIL",
        };
        out.push_str(&format!(
            "| {} | {} | {:.3e} | {:.3e} | {} |\n",
            c.surface, c.name, c.margin, c.tolerance, status
        ));
    }
    let verdict = if report.all_as_designed() {
        "all checks behaved as designed"
    } else {
        "UNEXPECTED RESULTS PRESENT"
    };
    out.push_str(&format!(
        "\n{} / {} records as designed; {}\n",
        report.count_pass(),
        report.checks.len(),
        verdict
    ));
    out
}
