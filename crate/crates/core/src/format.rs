//! File formats for fields and coefficient sets.
//!
//! `EWG1` (field): magic `EWG1`, `u32` nx, ny, `f64` x_min, y_min, dx, dy,
//! then nx·ny `(re, im)` pairs of `f64`, row-major. All little-endian.
//!
//! `EWC1` (coefficients): magic `EWC1`, `u32` scale count, the scales as
//! `f64`, an `EWG1` grid header (magic included), then one plane per scale
//! in scale order.
//!
//! CSV: header `x,y,re,im`, one node per row in row-major order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::ccwt::CcwtCoefficients;
use crate::error::{Error, Result};
use crate::grid::{ComplexPlaneGrid, Field, ScaleGrid};

pub const FIELD_MAGIC: &[u8; 4] = b"EWG1";
pub const COEFF_MAGIC: &[u8; 4] = b"EWC1";
const HEADER_LEN: usize = 4 + 2 * 4 + 4 * 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    Ewg,
    Csv,
}

impl std::str::FromStr for FieldFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ewg" | "ewg1" => Ok(FieldFormat::Ewg),
            "csv" => Ok(FieldFormat::Csv),
            other => Err(Error::Parse(format!("unknown format '{other}' (expected ewg or csv)"))),
        }
    }
}

fn push_grid_header(out: &mut Vec<u8>, g: &ComplexPlaneGrid) -> Result<()> {
    let nx = u32::try_from(g.nx).map_err(|_| Error::Format("nx does not fit in u32".into()))?;
    let ny = u32::try_from(g.ny).map_err(|_| Error::Format("ny does not fit in u32".into()))?;
    out.extend_from_slice(FIELD_MAGIC);
    out.extend_from_slice(&nx.to_le_bytes());
    out.extend_from_slice(&ny.to_le_bytes());
    for v in [g.x_min, g.y_min, g.dx, g.dy] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(())
}

fn push_values(out: &mut Vec<u8>, values: &[Complex64]) {
    for v in values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
}

pub fn encode_field(field: &Field) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * field.values().len());
    push_grid_header(&mut out, field.grid())?;
    push_values(&mut out, field.values());
    Ok(out)
}

pub fn encode_coefficients(coeffs: &CcwtCoefficients) -> Result<Vec<u8>> {
    let scales = coeffs.scales().values();
    let count = u32::try_from(scales.len()).map_err(|_| Error::Format("too many scales".into()))?;
    let mut out = Vec::with_capacity(8 + 8 * scales.len() + HEADER_LEN + 16 * coeffs.kappa_grid().len() * scales.len());
    out.extend_from_slice(COEFF_MAGIC);
    out.extend_from_slice(&count.to_le_bytes());
    for mu in scales {
        out.extend_from_slice(&mu.to_le_bytes());
    }
    push_grid_header(&mut out, coeffs.kappa_grid())?;
    for p in coeffs.planes() {
        push_values(&mut out, p);
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format(format!("truncated input while reading {what} at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn magic(&mut self, expect: &[u8; 4]) -> Result<()> {
        let m = self.take(4, "magic")?;
        if m != expect {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(m),
                String::from_utf8_lossy(expect)
            )));
        }
        Ok(())
    }

    fn grid(&mut self) -> Result<ComplexPlaneGrid> {
        self.magic(FIELD_MAGIC)?;
        let nx = self.u32("nx")? as usize;
        let ny = self.u32("ny")? as usize;
        let x_min = self.f64("x_min")?;
        let y_min = self.f64("y_min")?;
        let dx = self.f64("dx")?;
        let dy = self.f64("dy")?;
        ComplexPlaneGrid::new(nx, ny, x_min, y_min, dx, dy).map_err(|e| Error::Format(format!("bad grid header: {e}")))
    }

    fn values(&mut self, n: usize) -> Result<Vec<Complex64>> {
        let bytes = n.checked_mul(16).ok_or_else(|| Error::Format("grid too large".into()))?;
        let raw = self.take(bytes, "values")?;
        Ok(raw
            .chunks_exact(16)
            .map(|c| Complex64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap())))
            .collect())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", self.bytes.len() - self.pos)));
        }
        Ok(())
    }
}

fn as_format(e: Error) -> Error {
    match e {
        Error::NonFinite(m) | Error::InvalidParameter(m) => Error::Format(m),
        other => other,
    }
}

pub fn decode_field(bytes: &[u8]) -> Result<Field> {
    let mut r = Reader { bytes, pos: 0 };
    let grid = r.grid()?;
    let values = r.values(grid.len())?;
    r.finish()?;
    Field::new(grid, values).map_err(as_format)
}

pub fn decode_coefficients(bytes: &[u8]) -> Result<CcwtCoefficients> {
    let mut r = Reader { bytes, pos: 0 };
    r.magic(COEFF_MAGIC)?;
    let count = r.u32("scale count")? as usize;
    // bound the allocation by what the input can hold
    if count.saturating_mul(8) > bytes.len() {
        return Err(Error::Format("truncated input while reading scales".into()));
    }
    let scales = (0..count).map(|_| r.f64("scale")).collect::<Result<Vec<_>>>()?;
    let scales = ScaleGrid::from_values(scales).map_err(|e| Error::Format(format!("bad scale list: {e}")))?;
    let grid = r.grid()?;
    let mut planes = Vec::with_capacity(count);
    for _ in 0..count {
        planes.push(r.values(grid.len())?);
    }
    r.finish()?;
    CcwtCoefficients::new(scales, grid, planes).map_err(as_format)
}

pub fn field_to_csv(field: &Field) -> String {
    let g = field.grid();
    let mut s = String::from("x,y,re,im\n");
    for (i, j, z) in g.nodes() {
        let v = field.at(i, j);
        s.push_str(&format!("{:?},{:?},{:?},{:?}\n", z.re, z.im, v.re, v.im));
    }
    s
}

/// Reads a CSV field. Rows must be in row-major order on a uniform grid.
pub fn field_from_csv(text: &str) -> Result<Field> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("empty CSV".into()))?;
    if header.split(',').map(str::trim).collect::<Vec<_>>() != ["x", "y", "re", "im"] {
        return Err(Error::Format(format!("bad CSV header '{header}'")));
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(Error::Format(format!("CSV row {} has {} columns", k + 2, cols.len())));
        }
        let mut v = [0.0; 4];
        for (d, c) in v.iter_mut().zip(&cols) {
            *d = c.parse().map_err(|_| Error::Format(format!("CSV row {}: bad number '{c}'", k + 2)))?;
        }
        rows.push(v);
    }
    if rows.is_empty() {
        return Err(Error::Format("CSV has no rows".into()));
    }
    // y varies fastest
    let x0 = rows[0][0];
    let ny = rows.iter().take_while(|r| r[0] == x0).count();
    if rows.len() % ny != 0 {
        return Err(Error::Format("CSV rows do not form a rectangular grid".into()));
    }
    let nx = rows.len() / ny;
    let dy = if ny > 1 { (rows[ny - 1][1] - rows[0][1]) / (ny - 1) as f64 } else { 1.0 };
    let dx = if nx > 1 { (rows[rows.len() - 1][0] - x0) / (nx - 1) as f64 } else { 1.0 };
    let grid = ComplexPlaneGrid::new(nx, ny, x0, rows[0][1], dx, dy).map_err(|e| Error::Format(format!("bad CSV grid: {e}")))?;
    for (k, r) in rows.iter().enumerate() {
        let z = grid.node(k / ny, k % ny);
        let tol = 1e-9 * (dx.abs() + dy.abs() + z.norm());
        if (r[0] - z.re).abs() > tol || (r[1] - z.im).abs() > tol {
            return Err(Error::Format(format!("CSV row {} is off the uniform grid", k + 2)));
        }
    }
    let values = rows.iter().map(|r| Complex64::new(r[2], r[3])).collect();
    Field::new(grid, values).map_err(as_format)
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidParameter(format!("'{}' is not a file path", path.display())))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn save_field(path: &Path, field: &Field, format: FieldFormat) -> Result<()> {
    let bytes = match format {
        FieldFormat::Ewg => encode_field(field)?,
        FieldFormat::Csv => field_to_csv(field).into_bytes(),
    };
    write_atomic(path, &bytes)
}

/// Loads a field, detecting `EWG1` by its magic and falling back to CSV.
pub fn load_field(path: &Path) -> Result<Field> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(FIELD_MAGIC) {
        decode_field(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| Error::Format("input is neither EWG1 nor UTF-8 CSV".into()))?;
        field_from_csv(&text)
    }
}

pub fn save_coefficients(path: &Path, coeffs: &CcwtCoefficients) -> Result<()> {
    write_atomic(path, &encode_coefficients(coeffs)?)
}

pub fn load_coefficients(path: &Path) -> Result<CcwtCoefficients> {
    decode_coefficients(&fs::read(path)?)
}
