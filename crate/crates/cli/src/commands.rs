use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use reservoir_topo::geostat::{
    read_conditioning, sgs_realize, KrigingMode, MarginalTransform, SgsConfig, VariogramKind,
    VariogramModel,
};
use reservoir_topo::grid::{normalize_gl, ClampPolicy, GridGeometry, ScalarField, ValueKind};
use reservoir_topo::io::{read_grid, write_atomic, write_grid, GridFormat};
use reservoir_topo::persistence::{
    bottleneck_distance, bottleneck_matrix, persistence_matrix, persistence_q0, write_matrix_csv,
    Filtration, PersistenceDiagram, PlaneNorm,
};
use reservoir_topo::topology::{betti_table, write_betti_csv, BettiRow};

use crate::args::*;
use crate::manifest::RunManifest;
use crate::{parse_alphas, CliError, CliResult};

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn format_for(arg: Option<FormatArg>, path: &Path) -> GridFormat {
    match arg {
        Some(FormatArg::Gslib) => GridFormat::GslibAscii,
        Some(FormatArg::Binary) => GridFormat::RawBinary,
        None => GridFormat::from_path(path),
    }
}

/// `out.dat` with seed 7 becomes `out-7.dat`.
fn seeded_path(out: &Path, seed: u64) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{seed}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{seed}"),
    };
    out.with_file_name(name)
}

fn elapsed(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

pub fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let geometry = GridGeometry::new([a.nx, a.ny, a.nz], [a.dx, a.dy, a.dz], [a.x0, a.y0, a.z0])
        .map_err(usage)?;
    let kind = match a.variogram {
        VariogramArg::Exp => VariogramKind::Exponential,
        VariogramArg::Gauss => VariogramKind::Gaussian,
    };
    let model = VariogramModel::new(kind, a.range, a.sill, a.mean).map_err(usage)?;
    let base = SgsConfig {
        max_points: a.max_points,
        search_radius: a.search_radius,
        mode: match a.kriging {
            KrigingArg::Ordinary => KrigingMode::Ordinary,
            KrigingArg::Simple => KrigingMode::Simple,
        },
        marginal_transform: match a.transform {
            TransformArg::GaussianCdf => MarginalTransform::GaussianCdf,
            TransformArg::None => MarginalTransform::None,
        },
        ..SgsConfig::default()
    };
    base.validate().map_err(usage)?;
    let mut seeds = a.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let format = format_for(a.format, &a.out);

    let start = Instant::now();
    let conditioning = match &a.conditioning {
        Some(p) => read_conditioning(p, &geometry)?,
        None => Vec::new(),
    };
    let paths: Vec<PathBuf> = if seeds.len() == 1 {
        vec![a.out.clone()]
    } else {
        seeds.iter().map(|&s| seeded_path(&a.out, s)).collect()
    };
    seeds
        .par_iter()
        .zip(&paths)
        .map(|(&seed, path)| {
            let config = SgsConfig {
                seed,
                ..base.clone()
            };
            let field = sgs_realize(&geometry, &model, &conditioning, &config)?;
            write_grid(&field, path, format)
        })
        .collect::<reservoir_topo::Result<Vec<()>>>()?;

    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "geometry": geometry,
            "variogram": model,
            "sgs": base,
            "format": format,
        }),
    );
    manifest.seeds = seeds;
    manifest.inputs.extend(a.conditioning.clone());
    manifest.outputs = paths.clone();
    if format == GridFormat::GslibAscii {
        manifest
            .outputs
            .extend(paths.iter().map(|p| reservoir_topo::io::sidecar_path(p)));
    }
    manifest.timings.insert("simulate".into(), elapsed(start));
    let mpath = manifest.write(&a.out)?;
    for p in &paths {
        writeln!(out, "{}", p.display())?;
    }
    writeln!(out, "{}", mpath.display())?;
    Ok(())
}

/// Read a field and bring it to alpha form.
fn load_alpha(path: &Path, input: &FieldInput) -> CliResult<ScalarField> {
    let format = format_for(input.format, path);
    let field = read_grid(path, format)?;
    let kind = match (input.kind, format) {
        (Some(KindArg::Alpha), _) => Some(ValueKind::Alpha),
        (Some(KindArg::ZValue), _) => Some(ValueKind::ZValue),
        (Some(KindArg::RawGl), _) => Some(ValueKind::RawGl),
        (None, GridFormat::RawBinary) if input.gl_min.is_some() || input.gl_max.is_some() => {
            Some(ValueKind::RawGl)
        }
        (None, GridFormat::RawBinary) => Some(ValueKind::Alpha),
        (None, GridFormat::GslibAscii) => None,
    };
    let field = match kind {
        Some(k) => field.with_kind(k),
        None => field,
    };
    match (field.kind(), input.gl_min, input.gl_max) {
        (ValueKind::Alpha, None, None) => Ok(field),
        (ValueKind::Alpha, _, _) => Err(usage(format!(
            "{} already holds alpha values; drop --gl-min/--gl-max",
            path.display()
        ))),
        (ValueKind::RawGl, Some(lo), Some(hi)) => {
            let (alpha, report) =
                normalize_gl(&field, lo, hi, ClampPolicy::Clamp).map_err(usage)?;
            if report.below_zero + report.above_one > 0 {
                eprintln!(
                    "warning: {}: {} values below gl-min and {} above gl-max were clamped",
                    path.display(),
                    report.below_zero,
                    report.above_one
                );
            }
            Ok(alpha)
        }
        (ValueKind::RawGl, _, _) => Err(usage(format!(
            "{} holds raw GL readings; pass both --gl-min and --gl-max",
            path.display()
        ))),
        (kind, _, _) => Err(CliError::Runtime(anyhow::anyhow!(
            "{} holds {} values; simulate with the gaussian-cdf transform to get alpha",
            path.display(),
            kind.name()
        ))),
    }
}

fn input_config(input: &FieldInput) -> serde_json::Value {
    json!({
        "kind": input.kind.map(|k| format!("{k:?}")),
        "format": input.format.map(|f| format!("{f:?}")),
        "gl_min": input.gl_min,
        "gl_max": input.gl_max,
    })
}

fn betti_csv(rows: &[BettiRow], scale: f64) -> Vec<u8> {
    let mut buf = Vec::new();
    write_betti_csv(rows, scale, &mut buf).expect("writing to memory");
    buf
}

fn emit(bytes: &[u8], dest: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match dest {
        Some(p) => write_atomic(p, |w| w.write_all(bytes))?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

pub fn cmd_betti(a: &BettiArgs, out: &mut dyn Write) -> CliResult<()> {
    let alphas = parse_alphas(&a.alphas)?;
    let start = Instant::now();
    let field = load_alpha(&a.input, &a.field)?;
    let read = elapsed(start);
    let rows = betti_table(&field, &alphas)?;
    let scale = if a.physical_volume {
        field.geometry().cell_volume()
    } else {
        1.0
    };
    emit(&betti_csv(&rows, scale), a.out.as_deref(), out)?;
    if let Some(dest) = &a.out {
        let mut m = RunManifest::new(
            "betti",
            json!({ "alphas": alphas, "physical_volume": a.physical_volume, "input": input_config(&a.field) }),
        );
        m.inputs.push(a.input.clone());
        m.outputs.push(dest.clone());
        m.timings.insert("read".into(), read);
        m.timings.insert("betti".into(), elapsed(start) - read);
        m.write(dest)?;
    }
    Ok(())
}

pub fn cmd_persist(a: &PersistArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.q > 2 {
        return Err(usage(format!("--q must be 0, 1 or 2, got {}", a.q)));
    }
    let method = match (a.method, a.q) {
        (MethodArg::Auto, 0) | (MethodArg::UnionFind, 0) => MethodArg::UnionFind,
        (MethodArg::UnionFind, q) => {
            return Err(usage(format!(
                "the union-find method only handles q = 0, not q = {q}"
            )))
        }
        _ => MethodArg::Matrix,
    };
    let start = Instant::now();
    let field = load_alpha(&a.input, &a.field)?;
    let filtration = Filtration::uniform(&field, a.step).map_err(usage)?;
    let diagram = match method {
        MethodArg::UnionFind => persistence_q0(&filtration),
        _ => persistence_matrix(&filtration, a.q)?,
    };
    let mut json = diagram.to_json().into_bytes();
    json.push(b'\n');
    emit(&json, a.out.as_deref(), out)?;
    if let Some(dest) = &a.out {
        let mut m = RunManifest::new(
            "persist",
            json!({ "q": a.q, "step": a.step,
                    "method": if method == MethodArg::Matrix { "matrix" } else { "union-find" },
                    "input": input_config(&a.field) }),
        );
        m.inputs.push(a.input.clone());
        m.outputs.push(dest.clone());
        m.timings.insert("persist".into(), elapsed(start));
        m.write(dest)?;
    }
    Ok(())
}

fn plane_norm(n: NormArg) -> PlaneNorm {
    match n {
        NormArg::L1 => PlaneNorm::L1,
        NormArg::Linf => PlaneNorm::Linf,
    }
}

pub fn cmd_bottleneck(a: &BottleneckArgs, out: &mut dyn Write) -> CliResult<()> {
    let norm = plane_norm(a.norm);
    if let (Some(pa), Some(pb)) = (&a.a, &a.b) {
        let u = PersistenceDiagram::read(pa)?;
        let v = PersistenceDiagram::read(pb)?;
        let d = bottleneck_distance(&u, &v, norm)
            .with_context(|| format!("comparing {} with {}", pa.display(), pb.display()))?;
        writeln!(out, "{d}")?;
        return Ok(());
    }
    let dir = a
        .matrix
        .as_ref()
        .ok_or_else(|| usage("pass --a and --b, or --matrix"))?;
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json") && !is_manifest(p))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(usage(format!("no diagram files in {}", dir.display())));
    }
    let start = Instant::now();
    let diagrams = files
        .iter()
        .map(|p| PersistenceDiagram::read(p))
        .collect::<reservoir_topo::Result<Vec<_>>>()?;
    let labels: Vec<String> = files
        .iter()
        .map(|p| {
            p.file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    let matrix = bottleneck_matrix(&diagrams, norm)?;
    let mut buf = Vec::new();
    write_matrix_csv(&labels, &matrix, &mut buf)?;
    emit(&buf, a.out.as_deref(), out)?;
    if let Some(dest) = &a.out {
        let mut m = RunManifest::new("bottleneck", json!({ "norm": norm }));
        m.inputs = files;
        m.outputs.push(dest.clone());
        m.timings.insert("bottleneck".into(), elapsed(start));
        m.write(dest)?;
    }
    Ok(())
}

fn is_manifest(p: &Path) -> bool {
    p.to_string_lossy().ends_with(".manifest.json")
}

#[derive(Debug, Serialize)]
struct FieldSummary {
    label: String,
    path: PathBuf,
    cell_volume: f64,
    /// Largest weighted b0 over the thresholds and where it occurs.
    max_b0w: f64,
    alpha_at_max_b0w: f64,
    max_b1w: f64,
    max_b2w: f64,
}

pub fn cmd_report(a: &ReportArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.inputs.is_empty() {
        return Err(usage("report needs at least one --input"));
    }
    let alphas = parse_alphas(&a.alphas)?;
    let start = Instant::now();
    let mut csv = String::from("field,alpha,volume,b0w,b1w,b2w\n");
    let mut summaries = Vec::new();
    for path in &a.inputs {
        let field = load_alpha(path, &a.field)?;
        let rows = betti_table(&field, &alphas)?;
        let cell_volume = field.geometry().cell_volume();
        let scale = if a.physical_volume { cell_volume } else { 1.0 };
        let label = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let mut s = FieldSummary {
            label: label.clone(),
            path: path.clone(),
            cell_volume,
            max_b0w: 0.0,
            alpha_at_max_b0w: f64::NAN,
            max_b1w: 0.0,
            max_b2w: 0.0,
        };
        for row in &rows {
            let w = if scale == 1.0 {
                row.summary.weighted
            } else {
                row.summary.weighted_by_cell_volume(scale)
            };
            let volume = row.summary.volume as f64 * scale;
            csv.push_str(&format!(
                "{label},{},{volume},{},{},{}\n",
                row.alpha, w[0], w[1], w[2]
            ));
            if s.alpha_at_max_b0w.is_nan() || w[0] > s.max_b0w {
                s.max_b0w = w[0];
                s.alpha_at_max_b0w = row.alpha;
            }
            s.max_b1w = s.max_b1w.max(w[1]);
            s.max_b2w = s.max_b2w.max(w[2]);
        }
        summaries.push(s);
    }
    write_atomic(&a.out, |w| w.write_all(csv.as_bytes()))?;
    let summary_path = a.summary.clone().unwrap_or_else(|| {
        let mut name = a.out.file_stem().unwrap_or_default().to_os_string();
        name.push(".summary.json");
        a.out.with_file_name(name)
    });
    let summary = serde_json::to_string_pretty(&json!({ "alphas": alphas, "fields": summaries }))
        .expect("summary serializes");
    write_atomic(&summary_path, |w| w.write_all(summary.as_bytes()))?;

    let mut m = RunManifest::new(
        "report",
        json!({ "alphas": alphas, "physical_volume": a.physical_volume, "input": input_config(&a.field) }),
    );
    m.inputs = a.inputs.clone();
    m.outputs = vec![a.out.clone(), summary_path.clone()];
    m.timings.insert("report".into(), elapsed(start));
    m.write(&a.out)?;
    writeln!(out, "{}", a.out.display())?;
    writeln!(out, "{}", summary_path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_names() {
        assert_eq!(
            seeded_path(Path::new("d/out.dat"), 7),
            Path::new("d/out-7.dat")
        );
        assert_eq!(seeded_path(Path::new("out"), 3), Path::new("out-3"));
    }
}
