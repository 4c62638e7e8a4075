//! Finite atomic measure spaces, grid functions and partitions.
//!
//! A [`GridMeasureSpace`] is a finite list of atoms (points in ℝⁿ or 𝕋ⁿ)
//! with positive masses. Everything else in the crate is built on top of
//! it: functions are per-atom values, integrals are weighted sums taken in
//! ascending atom order, and partitions are sets of atom indices.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// Finite atomic measure space: sample points with positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeasureSpace {
    dim: usize,
    /// Atom-major flat coordinate storage, `dim` entries per atom.
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl GridMeasureSpace {
    /// Builds a space from one coordinate vector per atom.
    pub fn new(dim: usize, points: &[Vec<f64>], weights: Vec<f64>) -> Result<Arc<Self>> {
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "atom {bad} has {} coordinates, expected {dim}",
                points[bad].len()
            )));
        }
        let coords = points.iter().flatten().copied().collect();
        Self::from_flat(dim, coords, weights)
    }

    /// Builds a space from atom-major flat coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput("a measure space needs at least one atom".into()));
        }
        if coords.len() != dim * weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not describe {} atoms in dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        if let Some(j) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "atom {j} has weight {}, weights must be finite and positive",
                weights[j]
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("coordinates must be finite".into()));
        }
        Ok(Arc::new(GridMeasureSpace { dim, coords, weights }))
    }

    /// Uniform midpoint grid on `[0,1]^dim` with `per_dim` cells per axis;
    /// every atom carries mass `per_dim^{-dim}`.
    pub fn unit_cube(dim: usize, per_dim: usize) -> Result<Arc<Self>> {
        Self::tensor_grid(dim, per_dim, |j| (j as f64 + 0.5) / per_dim as f64)
    }

    /// Uniform torus grid `x = j / N` on `𝕋^dim`, total mass 1.
    pub fn torus(dim: usize, per_dim: usize) -> Result<Arc<Self>> {
        Self::tensor_grid(dim, per_dim, |j| j as f64 / per_dim as f64)
    }

    fn tensor_grid(dim: usize, per_dim: usize, coord: impl Fn(usize) -> f64) -> Result<Arc<Self>> {
        if per_dim == 0 {
            return Err(Error::InvalidInput("grid needs at least one point per axis".into()));
        }
        let count = checked_pow(per_dim, dim)?;
        let mut coords = Vec::with_capacity(count * dim);
        for atom in 0..count {
            // Row-major: the last axis varies fastest.
            let mut rem = atom;
            let mut idx = vec![0; dim];
            for d in (0..dim).rev() {
                idx[d] = rem % per_dim;
                rem /= per_dim;
            }
            coords.extend(idx.into_iter().map(&coord));
        }
        let w = 1.0 / count as f64;
        Self::from_flat(dim, coords, vec![w; count])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, atom: usize) -> &[f64] {
        &self.coords[atom * self.dim..(atom + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass of a set of atoms, summed in the order given.
    pub fn mass_of(&self, atoms: &[usize]) -> f64 {
        atoms.iter().map(|&j| self.weights[j]).sum()
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::InvalidInput(format!("{base}^{exp} atoms overflows")))
}

/// Two handles denote the same space if they share storage or compare equal.
pub fn same_space(a: &Arc<GridMeasureSpace>, b: &Arc<GridMeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same_space(
    a: &Arc<GridMeasureSpace>,
    b: &Arc<GridMeasureSpace>,
    what: &str,
) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!(
            "{what}: operands live on different measure spaces ({} vs {} atoms)",
            a.len(),
            b.len()
        )))
    }
}

/// Complex-valued function on the atoms of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    space: Arc<GridMeasureSpace>,
    values: Vec<Complex>,
}

impl GridFunction {
    pub fn new(space: Arc<GridMeasureSpace>, values: Vec<Complex>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for a space with {} atoms",
                values.len(),
                space.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(format!("value at atom {j} is not finite")));
        }
        Ok(GridFunction { space, values })
    }

    pub fn from_real(space: Arc<GridMeasureSpace>, values: &[f64]) -> Result<Self> {
        Self::new(space, values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    /// Samples `f` at every atom coordinate.
    pub fn from_fn(space: Arc<GridMeasureSpace>, f: impl Fn(&[f64]) -> Complex) -> Result<Self> {
        let values = space.points().map(f).collect();
        Self::new(space, values)
    }

    pub fn from_real_fn(space: Arc<GridMeasureSpace>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(space, |x| Complex::new(f(x), 0.0))
    }

    pub fn constant(space: Arc<GridMeasureSpace>, c: Complex) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![c; n])
    }

    pub fn zeros(space: Arc<GridMeasureSpace>) -> Self {
        let n = space.len();
        GridFunction { space, values: vec![Complex::new(0.0, 0.0); n] }
    }

    /// Characteristic function of a set of atoms.
    pub fn indicator(space: Arc<GridMeasureSpace>, atoms: &[usize]) -> Result<Self> {
        let mut values = vec![Complex::new(0.0, 0.0); space.len()];
        for &j in atoms {
            let slot = values
                .get_mut(j)
                .ok_or_else(|| Error::InvalidInput(format!("atom index {j} out of range")))?;
            *slot = Complex::new(1.0, 0.0);
        }
        Self::new(space, values)
    }

    pub fn space(&self) -> &Arc<GridMeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// `max_j |f_j|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex) -> Self {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        GridFunction {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &GridFunction,
        what: &str,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<Self> {
        ensure_same_space(&self.space, &other.space, what)?;
        Ok(GridFunction {
            space: Arc::clone(&self.space),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, "mul", |a, b| a * b)
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: Complex, other: &GridFunction, b: Complex) -> Result<Self> {
        self.zip_with(other, "axpby", |x, y| a * x + b * y)
    }

    pub fn to_record(&self) -> GridFunctionRecord {
        GridFunctionRecord {
            dim: self.space.dim(),
            atoms: (0..self.len())
                .map(|j| AtomRecord {
                    coords: self.space.point(j).to_vec(),
                    weight: self.space.weights()[j],
                    value: [self.values[j].re, self.values[j].im],
                })
                .collect(),
        }
    }

    /// Rebuilds a function and a fresh space from a record.
    pub fn from_record(record: &GridFunctionRecord) -> Result<Self> {
        let space = record.space()?;
        Self::from_record_on(record, space)
    }

    /// Rebuilds a function on an existing space, checking that the record's
    /// atoms match it.
    pub fn from_record_on(record: &GridFunctionRecord, space: Arc<GridMeasureSpace>) -> Result<Self> {
        let described = record.space()?;
        ensure_same_space(&space, &described, "grid function record")?;
        let values = record.atoms.iter().map(|a| Complex::new(a.value[0], a.value[1])).collect();
        Self::new(space, values)
    }
}

/// One atom of a serialized grid function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub coords: Vec<f64>,
    pub weight: f64,
    /// `[re, im]`.
    pub value: [f64; 2],
}

/// Serialized grid function: one record per atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunctionRecord {
    pub dim: usize,
    pub atoms: Vec<AtomRecord>,
}

impl GridFunctionRecord {
    pub fn space(&self) -> Result<Arc<GridMeasureSpace>> {
        let coords = self.atoms.iter().flat_map(|a| a.coords.iter().copied()).collect();
        let weights = self.atoms.iter().map(|a| a.weight).collect();
        GridMeasureSpace::from_flat(self.dim, coords, weights)
    }
}

/// `Σ_j w_j f_j`, summed in ascending atom order.
pub fn integrate(f: &GridFunction) -> Complex {
    f.space
        .weights()
        .iter()
        .zip(&f.values)
        .fold(Complex::new(0.0, 0.0), |acc, (&w, &v)| acc + v * w)
}

/// Bilinear pairing `⟨f, g⟩ = ∫ f g dμ` (no conjugation).
pub fn duality_pairing(f: &GridFunction, g: &GridFunction) -> Result<Complex> {
    ensure_same_space(&f.space, &g.space, "duality pairing")?;
    Ok(f.space
        .weights()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .fold(Complex::new(0.0, 0.0), |acc, (&w, (&a, &b))| acc + a * b * w))
}

/// Finite partition of the atoms into nonempty disjoint cells.
///
/// Cells are stored in canonical form (indices ascending, cells ordered by
/// their smallest atom), so `==` is equality up to cell order.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    space: Arc<GridMeasureSpace>,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(space: Arc<GridMeasureSpace>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let mut owner = vec![usize::MAX; n];
        for (k, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidInput(format!("cell {k} is empty")));
            }
            for &j in cell {
                if j >= n {
                    return Err(Error::InvalidInput(format!("atom index {j} out of range")));
                }
                if owner[j] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "atom {j} belongs to cells {} and {k}",
                        owner[j]
                    )));
                }
                owner[j] = k;
            }
        }
        if let Some(j) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInput(format!("atom {j} is not covered by any cell")));
        }
        Ok(Self::canonical(space, cells))
    }

    fn canonical(space: Arc<GridMeasureSpace>, mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort_unstable_by_key(|c| c[0]);
        Partition { space, cells }
    }

    /// Groups atoms by label; any `usize` labels are accepted.
    pub fn from_labels(space: Arc<GridMeasureSpace>, labels: &[usize]) -> Result<Self> {
        if labels.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} atoms",
                labels.len(),
                space.len()
            )));
        }
        let mut slot: HashMap<usize, usize> = HashMap::new();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for (j, &l) in labels.iter().enumerate() {
            let k = *slot.entry(l).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[k].push(j);
        }
        Ok(Self::canonical(space, cells))
    }

    /// The trivial partition `{Ω}`.
    pub fn whole(space: Arc<GridMeasureSpace>) -> Self {
        let cells = vec![(0..space.len()).collect()];
        Partition { space, cells }
    }

    /// The finest partition: one cell per atom.
    pub fn atoms(space: Arc<GridMeasureSpace>) -> Self {
        let cells = (0..space.len()).map(|j| vec![j]).collect();
        Partition { space, cells }
    }

    /// Splits `[0,1)^n` (or `𝕋ⁿ`) into `per_axis^n` equal boxes and groups
    /// atoms by the box containing them.
    pub fn equal_intervals(space: Arc<GridMeasureSpace>, per_axis: usize) -> Result<Self> {
        if per_axis == 0 {
            return Err(Error::InvalidInput("need at least one interval per axis".into()));
        }
        let labels: Vec<usize> = space
            .points()
            .map(|x| {
                x.iter().fold(0usize, |acc, &c| {
                    let k = ((c * per_axis as f64).floor().max(0.0) as usize).min(per_axis - 1);
                    acc * per_axis + k
                })
            })
            .collect();
        Self::from_labels(space, &labels)
    }

    /// Dyadic partition with `2^depth` intervals per axis.
    pub fn dyadic(space: Arc<GridMeasureSpace>, depth: u32) -> Result<Self> {
        let per_axis = 1usize
            .checked_shl(depth)
            .ok_or_else(|| Error::InvalidInput(format!("dyadic depth {depth} too large")))?;
        Self::equal_intervals(space, per_axis)
    }

    /// Intervals of the first coordinate cut at the given breakpoints:
    /// `[−∞,b₀), [b₀,b₁), …, [b_last, ∞)`. Empty intervals are dropped.
    pub fn from_breakpoints(space: Arc<GridMeasureSpace>, breaks: &[f64]) -> Result<Self> {
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        let labels: Vec<usize> = space
            .points()
            .map(|x| breaks.iter().take_while(|&&b| b <= x[0]).count())
            .collect();
        Self::from_labels(space, &labels)
    }

    /// Level sets of `f`: atoms with bit-identical values share a cell.
    pub fn level_sets(f: &GridFunction) -> Self {
        let mut slot: HashMap<(u64, u64), usize> = HashMap::new();
        let labels: Vec<usize> = f
            .values()
            .iter()
            .map(|v| {
                // Normalise -0.0 so it lands with +0.0.
                let key = ((v.re + 0.0).to_bits(), (v.im + 0.0).to_bits());
                let next = slot.len();
                *slot.entry(key).or_insert(next)
            })
            .collect();
        Self::from_labels(Arc::clone(f.space()), &labels).expect("labels match atom count")
    }

    pub fn space(&self) -> &Arc<GridMeasureSpace> {
        &self.space
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_masses(&self) -> Vec<f64> {
        self.cells.iter().map(|c| self.space.mass_of(c)).collect()
    }

    /// `labels[j]` is the index of the cell containing atom `j`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.space.len()];
        for (k, cell) in self.cells.iter().enumerate() {
            for &j in cell {
                labels[j] = k;
            }
        }
        labels
    }

    /// Whether `f` takes a single value on every cell.
    pub fn is_constant_on_cells(&self, f: &GridFunction) -> bool {
        self.cells.iter().all(|c| c.iter().all(|&j| f.values()[j] == f.values()[c[0]]))
    }
}

/// `coarse ≤ fine`: every cell of `coarse` is a union of cells of `fine`.
pub fn partition_refines(coarse: &Partition, fine: &Partition) -> Result<bool> {
    ensure_same_space(&coarse.space, &fine.space, "partition_refines")?;
    let labels = coarse.labels();
    Ok(fine.cells.iter().all(|c| c.iter().all(|&j| labels[j] == labels[c[0]])))
}

/// Coarsest common refinement: all nonempty pairwise intersections.
pub fn common_refinement(p1: &Partition, p2: &Partition) -> Result<Partition> {
    ensure_same_space(&p1.space, &p2.space, "common_refinement")?;
    let (l1, l2) = (p1.labels(), p2.labels());
    let k2 = p2.len();
    let labels: Vec<usize> = l1.iter().zip(&l2).map(|(a, b)| a * k2 + b).collect();
    Partition::from_labels(Arc::clone(&p1.space), &labels)
}
