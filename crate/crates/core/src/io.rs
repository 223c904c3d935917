//! Reading and writing gridded fields.
//!
//! Two layouts are supported:
//!
//! * GSLIB-style ASCII: a title line, a variable-count line (`1`), the
//!   variable name, then one value per line in x-fastest order. GSLIB files
//!   carry no geometry, so the grid comes from a sidecar JSON file
//!   `<path>.json` holding `{nx,ny,nz,dx,dy,dz,x0,y0,z0}`.
//! * Raw binary: the 8-byte magic `RTGRID01`, three little-endian `u32`
//!   counts, three `f64` spacings, three `f64` origin coordinates, then the
//!   values as little-endian `f64` in x-fastest order.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, ScalarField, ValueKind};

pub const BINARY_MAGIC: &[u8; 8] = b"RTGRID01";
/// Magic, three `u32` counts, six `f64` values.
pub const BINARY_HEADER_LEN: usize = 8 + 3 * 4 + 6 * 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridFormat {
    GslibAscii,
    RawBinary,
}

impl GridFormat {
    /// Guess from the extension: `.bin`/`.grid` are binary, anything else
    /// is treated as GSLIB text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("grid") | Some("rtgrid") => GridFormat::RawBinary,
            _ => GridFormat::GslibAscii,
        }
    }
}

/// The sidecar header that gives a GSLIB file its geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub z0: f64,
}

impl GridHeader {
    pub fn geometry(&self) -> Result<GridGeometry> {
        GridGeometry::new(
            [self.nx, self.ny, self.nz],
            [self.dx, self.dy, self.dz],
            [self.x0, self.y0, self.z0],
        )
    }
}

impl From<&GridGeometry> for GridHeader {
    fn from(g: &GridGeometry) -> Self {
        let ([nx, ny, nz], [dx, dy, dz], [x0, y0, z0]) = (g.counts(), g.spacing(), g.origin());
        GridHeader {
            nx,
            ny,
            nz,
            dx,
            dy,
            dz,
            x0,
            y0,
            z0,
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn read_grid(path: &Path, format: GridFormat) -> Result<ScalarField> {
    match format {
        GridFormat::GslibAscii => read_gslib(path),
        GridFormat::RawBinary => read_binary(path),
    }
}

/// Write a field. The target (and for GSLIB, its sidecar) is replaced
/// atomically.
pub fn write_grid(field: &ScalarField, path: &Path, format: GridFormat) -> Result<()> {
    match format {
        GridFormat::GslibAscii => {
            let header = serde_json::to_vec_pretty(&GridHeader::from(field.geometry()))
                .expect("header serializes");
            write_atomic(&sidecar_path(path), |w| w.write_all(&header))?;
            write_atomic(path, |w| write_gslib_body(field, w))
        }
        GridFormat::RawBinary => write_atomic(path, |w| write_binary_body(field, w)),
    }
}

/// Write through a temporary file in the destination directory, then rename.
pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<&mut fs::File>) -> std::io::Result<()>,
) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn write_gslib_body(field: &ScalarField, w: &mut impl Write) -> std::io::Result<()> {
    let [nx, ny, nz] = field.geometry().counts();
    writeln!(w, "reservoir field {nx}x{ny}x{nz}")?;
    writeln!(w, "1")?;
    writeln!(w, "{}", field.kind().name())?;
    for v in field.values() {
        // `{}` prints the shortest representation that parses back exactly.
        writeln!(w, "{v}")?;
    }
    Ok(())
}

fn write_binary_body(field: &ScalarField, w: &mut impl Write) -> std::io::Result<()> {
    let g = field.geometry();
    w.write_all(BINARY_MAGIC)?;
    for n in g.counts() {
        let n = u32::try_from(n).map_err(|_| {
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "count exceeds u32")
        })?;
        w.write_all(&n.to_le_bytes())?;
    }
    for x in g.spacing().into_iter().chain(g.origin()) {
        w.write_all(&x.to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_sidecar(path: &Path) -> Result<GridGeometry> {
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let header: GridHeader = serde_json::from_str(&text)
        .map_err(|e| Error::parse(&side, format!("malformed grid header: {e}")))?;
    header.geometry()
}

fn read_gslib(path: &Path) -> Result<ScalarField> {
    let geometry = read_sidecar(path)?;
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let mut next_line = |what: &str| -> Result<String> {
        match lines.next() {
            Some(Ok(l)) => Ok(l),
            Some(Err(e)) => Err(Error::io(path, e)),
            None => Err(Error::parse(path, format!("missing {what} line"))),
        }
    };
    let _title = next_line("title")?;
    let nvar = next_line("variable count")?;
    match nvar.split_whitespace().next().map(str::parse::<usize>) {
        Some(Ok(1)) => {}
        _ => {
            return Err(Error::parse(
                path,
                format!("expected a variable count of 1, found {nvar:?}"),
            ))
        }
    }
    let name = next_line("variable name")?;
    let kind = ValueKind::from_name(&name).unwrap_or(ValueKind::ZValue);

    let expected = geometry.len();
    let mut values = Vec::with_capacity(expected);
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let cell = values.len();
        if cell == expected {
            return Err(Error::parse(
                path,
                format!("more than the {expected} values the header declares"),
            ));
        }
        let v: f64 = token.parse().map_err(|_| Error::BadCell {
            path: path.into(),
            cell,
            message: format!("cannot parse {token:?} as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::BadCell {
                path: path.into(),
                cell,
                message: format!("non-finite value {token}"),
            });
        }
        values.push(v);
    }
    if values.len() < expected {
        return Err(Error::parse(
            path,
            format!(
                "expected {expected} values, found {} ({} short)",
                values.len(),
                expected - values.len()
            ),
        ));
    }
    ScalarField::new(geometry, values, kind)
}

fn read_binary(path: &Path) -> Result<ScalarField> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut header = [0u8; BINARY_HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| Error::parse(path, "truncated header"))?;
    if &header[..8] != BINARY_MAGIC {
        return Err(Error::parse(path, "bad magic, not an RTGRID01 file"));
    }
    let u = |at: usize| u32::from_le_bytes(header[at..at + 4].try_into().unwrap()) as usize;
    let f = |at: usize| f64::from_le_bytes(header[at..at + 8].try_into().unwrap());
    let counts = [u(8), u(12), u(16)];
    let spacing = [f(20), f(28), f(36)];
    let origin = [f(44), f(52), f(60)];
    let geometry = GridGeometry::new(counts, spacing, origin)
        .map_err(|e| Error::parse(path, format!("malformed header: {e}")))?;

    let expected = geometry.len();
    let mut body = Vec::new();
    r.read_to_end(&mut body).map_err(|e| Error::io(path, e))?;
    if body.len() != expected * 8 {
        let found = body.len() / 8;
        return Err(Error::parse(
            path,
            format!(
                "expected {expected} values, found {found}{}",
                if body.len() % 8 != 0 {
                    " and a partial trailing value"
                } else {
                    ""
                }
            ),
        ));
    }
    let mut values = Vec::with_capacity(expected);
    for (cell, chunk) in body.chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::BadCell {
                path: path.into(),
                cell,
                message: format!("non-finite value {v}"),
            });
        }
        values.push(v);
    }
    ScalarField::new(geometry, values, ValueKind::ZValue)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_sixty_eight_bytes() {
        assert_eq!(BINARY_HEADER_LEN, 68);
    }

    #[test]
    fn gslib_short_file_names_the_shortfall() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.gslib");
        let g = GridGeometry::unit([2, 2, 2]).unwrap();
        let field = ScalarField::from_fn(g, ValueKind::Alpha, |[i, j, k]| (i + j + k) as f64 / 3.0);
        write_grid(&field, &path, GridFormat::GslibAscii).unwrap();

        let text = fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(3 + 7).collect();
        fs::write(&path, truncated.join("\n")).unwrap();
        let err = read_grid(&path, GridFormat::GslibAscii)
            .unwrap_err()
            .to_string();
        assert!(
            err.contains("expected 8 values, found 7 (1 short)"),
            "{err}"
        );
    }

    #[test]
    fn gslib_bad_number_names_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.dat");
        fs::write(
            sidecar_path(&path),
            r#"{"nx":3,"ny":1,"nz":1,"dx":1,"dy":1,"dz":1,"x0":0,"y0":0,"z0":0}"#,
        )
        .unwrap();
        fs::write(&path, "t\n1\nalpha\n0.1\nNaN\n0.3\n").unwrap();
        match read_grid(&path, GridFormat::GslibAscii) {
            Err(Error::BadCell { cell, .. }) => assert_eq!(cell, 1),
            other => panic!("{other:?}"),
        }
        fs::write(&path, "t\n1\nalpha\n0.1\nabc\n0.3\n").unwrap();
        assert!(matches!(
            read_grid(&path, GridFormat::GslibAscii),
            Err(Error::BadCell { cell: 1, .. })
        ));
        fs::write(&path, "t\n2\nalpha\n0.1\n").unwrap();
        assert!(matches!(
            read_grid(&path, GridFormat::GslibAscii),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn binary_rejects_bad_magic_and_length() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        let g = GridGeometry::unit([2, 1, 1]).unwrap();
        let field = ScalarField::new(g, vec![0.25, 0.75], ValueKind::Alpha).unwrap();
        write_grid(&field, &path, GridFormat::RawBinary).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 68 + 16);

        fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
        let err = read_grid(&path, GridFormat::RawBinary)
            .unwrap_err()
            .to_string();
        assert!(err.contains("expected 2 values, found 1"), "{err}");

        let mut bad = bytes.clone();
        bad[0] = b'X';
        fs::write(&path, bad).unwrap();
        assert!(read_grid(&path, GridFormat::RawBinary).is_err());
    }
}
