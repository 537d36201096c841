use crate::{FieldError, ScalarField, SpaceTimeField, TorusGrid, VectorField};
use ndarray::ArrayD;
use std::io::{Read, Write};
use std::path::Path;

/// On-disk field snapshot. Layout:
///
/// ```text
/// magic   "CVXF"        4 bytes
/// version u32 = 1       little-endian
/// d       u32
/// n       u32
/// comps   u32
/// n_t     u32
/// payload n_t * comps * n^d f64 values, little-endian,
///         time-major, then component, then row-major space
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub grid: TorusGrid,
    pub components: usize,
    pub n_t: usize,
    pub data: Vec<f64>,
}

const MAGIC: &[u8; 4] = b"CVXF";
const VERSION: u32 = 1;

impl Snapshot {
    pub fn new(
        grid: TorusGrid,
        components: usize,
        n_t: usize,
        data: Vec<f64>,
    ) -> Result<Self, FieldError> {
        let expected = n_t * components * grid.len();
        if data.len() != expected {
            return Err(FieldError::DimensionMismatch(format!(
                "payload holds {} values, header wants {}",
                data.len(),
                expected
            )));
        }
        Ok(Snapshot {
            grid,
            components,
            n_t,
            data,
        })
    }

    fn block(&self, t: usize, c: usize) -> &[f64] {
        let vol = self.grid.len();
        let start = (t * self.components + c) * vol;
        &self.data[start..start + vol]
    }

    pub fn from_scalar(f: &ScalarField) -> Snapshot {
        Snapshot {
            grid: f.grid(),
            components: 1,
            n_t: 1,
            data: f.values().iter().copied().collect(),
        }
    }

    pub fn from_vector(v: &VectorField) -> Snapshot {
        let mut data = Vec::with_capacity(v.grid().dim() * v.grid().len());
        for c in v.comps() {
            data.extend(c.values().iter().copied());
        }
        Snapshot {
            grid: v.grid(),
            components: v.grid().dim(),
            n_t: 1,
            data,
        }
    }

    pub fn from_scalar_series(f: &SpaceTimeField<ScalarField>) -> Snapshot {
        let mut data = Vec::with_capacity(f.n_t() * f.grid().len());
        for s in f.slices() {
            data.extend(s.values().iter().copied());
        }
        Snapshot {
            grid: f.grid(),
            components: 1,
            n_t: f.n_t(),
            data,
        }
    }

    pub fn from_vector_series(f: &SpaceTimeField<VectorField>) -> Snapshot {
        let grid = f.grid();
        let mut data = Vec::with_capacity(f.n_t() * grid.dim() * grid.len());
        for s in f.slices() {
            for c in s.comps() {
                data.extend(c.values().iter().copied());
            }
        }
        Snapshot {
            grid,
            components: grid.dim(),
            n_t: f.n_t(),
            data,
        }
    }

    fn slice_to_scalar(&self, t: usize, c: usize) -> Result<ScalarField, FieldError> {
        let values = ArrayD::from_shape_vec(self.grid.shape(), self.block(t, c).to_vec())
            .expect("block length matches grid volume by construction");
        ScalarField::from_values(self.grid, values)
    }

    pub fn to_scalar(&self) -> Result<ScalarField, FieldError> {
        if self.components != 1 || self.n_t != 1 {
            return Err(FieldError::DimensionMismatch(format!(
                "wanted a single scalar slice, snapshot holds {} components x {} times",
                self.components, self.n_t
            )));
        }
        self.slice_to_scalar(0, 0)
    }

    pub fn to_vector(&self) -> Result<VectorField, FieldError> {
        if self.components != self.grid.dim() || self.n_t != 1 {
            return Err(FieldError::DimensionMismatch(format!(
                "wanted one vector slice on a {}-d grid, snapshot holds {} components x {} times",
                self.grid.dim(),
                self.components,
                self.n_t
            )));
        }
        let comps = (0..self.components)
            .map(|c| self.slice_to_scalar(0, c))
            .collect::<Result<Vec<_>, _>>()?;
        VectorField::new(comps)
    }

    pub fn to_scalar_series(&self) -> Result<SpaceTimeField<ScalarField>, FieldError> {
        if self.components != 1 {
            return Err(FieldError::DimensionMismatch(format!(
                "wanted scalar slices, snapshot holds {} components",
                self.components
            )));
        }
        let slices = (0..self.n_t)
            .map(|t| self.slice_to_scalar(t, 0))
            .collect::<Result<Vec<_>, _>>()?;
        SpaceTimeField::new(slices)
    }

    pub fn to_vector_series(&self) -> Result<SpaceTimeField<VectorField>, FieldError> {
        if self.components != self.grid.dim() {
            return Err(FieldError::DimensionMismatch(format!(
                "wanted {}-component vector slices, snapshot holds {}",
                self.grid.dim(),
                self.components
            )));
        }
        let slices = (0..self.n_t)
            .map(|t| {
                let comps = (0..self.components)
                    .map(|c| self.slice_to_scalar(t, c))
                    .collect::<Result<Vec<_>, _>>()?;
                VectorField::new(comps)
            })
            .collect::<Result<Vec<_>, _>>()?;
        SpaceTimeField::new(slices)
    }
}

pub fn snapshot_write(path: &Path, snap: &Snapshot) -> Result<(), FieldError> {
    let mut buf =
        Vec::with_capacity(4 + 5 * 4 + snap.data.len() * 8);
    buf.extend_from_slice(MAGIC);
    for v in [
        VERSION,
        snap.grid.dim() as u32,
        snap.grid.n() as u32,
        snap.components as u32,
        snap.n_t as u32,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in &snap.data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

pub fn snapshot_read(path: &Path) -> Result<Snapshot, FieldError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;

    if bytes.len() < 24 {
        return Err(FieldError::MalformedHeader(format!(
            "file is only {} bytes, header needs 24",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(FieldError::MalformedHeader(format!(
            "bad magic {:?}",
            &bytes[0..4]
        )));
    }
    let u32_at = |off: usize| u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(FieldError::MalformedHeader(format!(
            "unsupported version {version}"
        )));
    }
    let d = u32_at(8) as usize;
    let n = u32_at(12) as usize;
    let components = u32_at(16) as usize;
    let n_t = u32_at(20) as usize;

    let grid = TorusGrid::new(d, n)
        .map_err(|e| FieldError::DimensionMismatch(format!("header grid invalid: {e}")))?;
    if components == 0 || n_t == 0 {
        return Err(FieldError::DimensionMismatch(format!(
            "components={components}, n_t={n_t}: both must be positive"
        )));
    }

    let count = n_t * components * grid.len();
    let expected = 24 + count * 8;
    if bytes.len() != expected {
        return Err(FieldError::TruncatedPayload {
            expected,
            got: bytes.len(),
        });
    }
    let data: Vec<f64> = bytes[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Snapshot::new(grid, components, n_t, data)
}
