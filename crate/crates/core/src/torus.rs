//! Fourier analysis and toroidal quantization on uniform grids of `𝕋ⁿ`.
//!
//! Atoms sit at `x = j/N` (row-major multi-indices, weight `N^{-n}`) and
//! frequencies range over the max-norm box `|ξ_d| ≤ Ξ` in lexicographic
//! order. Pairing a grid with a box requires `N ≥ 2Ξ + 1`; then the grid
//! characters `e^{2πi x·ξ}` with `ξ` in the box are exactly orthogonal and
//! the discretised operator
//!
//! ```text
//! M[i, j] = N^{-n} Σ_ξ e^{2πi (x_i − x_j)·ξ} σ(x_i, ξ)
//! ```
//!
//! is unitarily equivalent to the frequency-truncated continuum operator,
//! so trace identities hold as exact matrix identities.
//!
//! Phases are looked up in a table of `N`-th roots of unity indexed by
//! `(j·ξ) mod N`, never computed from floating-point products.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::exponents::VariableExponent;
use crate::linalg;
use crate::measure::{checked_pow, ensure_same_space, GridFunction, GridMeasureSpace};
use crate::norms::{luxemburg_norm, DEFAULT_TOL};
use crate::nuclear::NuclearRepresentation;
use crate::Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Uniform grid `{j/N}ⁿ` on the torus.
#[derive(Clone)]
pub struct TorusGrid {
    dim: usize,
    points_per_dim: usize,
    space: Arc<GridMeasureSpace>,
    roots: Arc<Vec<Complex>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("dim", &self.dim)
            .field("points_per_dim", &self.points_per_dim)
            .finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points_per_dim == other.points_per_dim
    }
}

impl TorusGrid {
    pub fn new(dim: usize, points_per_dim: usize) -> Result<Self> {
        if dim == 0 || points_per_dim == 0 {
            return Err(Error::InvalidInput(format!(
                "torus grid needs dim ≥ 1 and N ≥ 1, got dim={dim}, N={points_per_dim}"
            )));
        }
        let space = GridMeasureSpace::torus(dim, points_per_dim)?;
        let n = points_per_dim;
        let roots = (0..n).map(|m| Complex::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
        let mut planner = FftPlanner::new();
        Ok(TorusGrid {
            dim,
            points_per_dim,
            space,
            roots: Arc::new(roots),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn space(&self) -> &Arc<GridMeasureSpace> {
        &self.space
    }

    /// Number of atoms, `Nⁿ`.
    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Errors unless the box is resolvable on this grid.
    pub fn check_box(&self, freq: &FrequencyBox) -> Result<()> {
        if freq.dim != self.dim {
            return Err(Error::DomainMismatch(format!(
                "frequency box of dimension {} on a {}-dimensional torus",
                freq.dim, self.dim
            )));
        }
        if self.points_per_dim < 2 * freq.radius + 1 {
            return Err(Error::Aliasing { points: self.points_per_dim, radius: freq.radius });
        }
        Ok(())
    }

    fn multi_index(&self, atom: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        let mut rem = atom;
        for d in (0..self.dim).rev() {
            idx[d] = rem % self.points_per_dim;
            rem /= self.points_per_dim;
        }
        idx
    }

    /// `e^{2πi x_atom·ξ}`.
    fn phase(&self, atom_index: &[usize], xi: &[i64]) -> Complex {
        let n = self.points_per_dim as i64;
        let m = atom_index
            .iter()
            .zip(xi)
            .fold(0i64, |acc, (&j, &k)| (acc + (j as i64 * k).rem_euclid(n)) % n);
        self.roots[m as usize]
    }

    /// Position of `ξ mod N` in the row-major `Nⁿ` array.
    fn wrapped(&self, xi: &[i64]) -> usize {
        let n = self.points_per_dim as i64;
        xi.iter().fold(0usize, |acc, &k| acc * self.points_per_dim + k.rem_euclid(n) as usize)
    }

    /// In-place unnormalised n-dimensional FFT over the row-major array.
    fn fft_nd(&self, data: &mut [Complex], inverse: bool) {
        let n = self.points_per_dim;
        let plan = if inverse { &self.inverse } else { &self.forward };
        let mut line = vec![ZERO; n];
        let mut scratch = vec![ZERO; plan.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            for start in 0..data.len() {
                if !(start / stride).is_multiple_of(n) {
                    continue;
                }
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + k * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
    }
}

/// Lattice points `ξ ∈ ℤⁿ` with `max_d |ξ_d| ≤ Ξ`, lexicographic order
/// (first coordinate slowest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyBox {
    dim: usize,
    radius: usize,
    points: Vec<i64>,
}

impl FrequencyBox {
    pub fn new(dim: usize, radius: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("frequency box needs dim ≥ 1".into()));
        }
        let side = 2 * radius + 1;
        let count = checked_pow(side, dim)?;
        let mut points = Vec::with_capacity(count * dim);
        for k in 0..count {
            let mut rem = k;
            let mut xi = vec![0i64; dim];
            for d in (0..dim).rev() {
                xi[d] = (rem % side) as i64 - radius as i64;
                rem /= side;
            }
            points.extend(xi);
        }
        Ok(FrequencyBox { dim, radius, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `(2Ξ + 1)ⁿ`.
    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> &[i64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Index of `ξ` in the enumeration, if inside the box.
    pub fn index_of(&self, xi: &[i64]) -> Option<usize> {
        if xi.len() != self.dim || xi.iter().any(|k| k.unsigned_abs() as usize > self.radius) {
            return None;
        }
        let side = 2 * self.radius + 1;
        Some(xi.iter().fold(0, |acc, &k| acc * side + (k + self.radius as i64) as usize))
    }

    /// Whether lattice point `k` lies on the outermost shell `|ξ|_∞ = Ξ`.
    pub fn on_outer_shell(&self, k: usize) -> bool {
        self.point(k).iter().any(|c| c.unsigned_abs() as usize == self.radius)
    }
}

/// Fourier coefficients `f̂(ξ)` over a frequency box.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub freq: FrequencyBox,
    pub values: Vec<Complex>,
}

impl FourierCoefficients {
    pub fn get(&self, xi: &[i64]) -> Option<Complex> {
        self.freq.index_of(xi).map(|k| self.values[k])
    }
}

/// `f̂(ξ) = N^{-n} Σ_j e^{−2πi x_j·ξ} f(x_j)` for every `ξ` in the box,
/// computed with an n-dimensional FFT.
pub fn dft_forward(grid: &TorusGrid, f: &GridFunction, freq: &FrequencyBox) -> Result<FourierCoefficients> {
    grid.check_box(freq)?;
    ensure_same_space(grid.space(), f.space(), "dft_forward")?;
    let mut data = f.values().to_vec();
    grid.fft_nd(&mut data, false);
    let norm = 1.0 / grid.len() as f64;
    let values = freq.points().map(|xi| data[grid.wrapped(xi)] * norm).collect();
    Ok(FourierCoefficients { freq: freq.clone(), values })
}

/// `f(x_j) = Σ_ξ e^{2πi x_j·ξ} f̂(ξ)`.
pub fn dft_inverse(coeffs: &FourierCoefficients, grid: &TorusGrid) -> Result<GridFunction> {
    grid.check_box(&coeffs.freq)?;
    if coeffs.values.len() != coeffs.freq.len() {
        return Err(Error::InvalidInput("coefficient table does not match its frequency box".into()));
    }
    let mut data = vec![ZERO; grid.len()];
    for (xi, &c) in coeffs.freq.points().zip(&coeffs.values) {
        data[grid.wrapped(xi)] = c;
    }
    grid.fft_nd(&mut data, true);
    GridFunction::new(Arc::clone(grid.space()), data)
}

/// Closed-form provenance of a symbol table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolTag {
    /// `(1 + 4π²|ξ|²)^{−τ/2}`
    Bessel { tau: f64 },
    /// `α(x)·(1 + 4π²|ξ|²)^{−τ/2}`
    ScaledBessel { tau: f64 },
}

impl SymbolTag {
    pub fn tau(&self) -> f64 {
        match *self {
            SymbolTag::Bessel { tau } | SymbolTag::ScaledBessel { tau } => tau,
        }
    }
}

/// Table `σ(x, ξ)` over grid atoms × box lattice points, row-major by atom.
#[derive(Debug, Clone, PartialEq)]
pub struct ToroidalSymbol {
    grid: TorusGrid,
    freq: FrequencyBox,
    values: Vec<Complex>,
    multiplier: bool,
    tag: Option<SymbolTag>,
    /// `(α, σ₀)` when `σ(x, ξ) = α(x) σ₀(ξ)`.
    factors: Option<(Vec<Complex>, Vec<Complex>)>,
}

impl ToroidalSymbol {
    pub fn from_fn(
        grid: &TorusGrid,
        freq: &FrequencyBox,
        sigma: impl Fn(&[f64], &[i64]) -> Complex + Sync + Send,
    ) -> Result<Self> {
        grid.check_box(freq)?;
        let rows = exec::map_range(grid.len(), |i| {
            let x = grid.space().point(i);
            freq.points().map(|xi| sigma(x, xi)).collect::<Vec<_>>()
        });
        Self::from_table(grid, freq, rows.concat(), false)
    }

    /// x-independent symbol `σ(ξ)`.
    pub fn multiplier(grid: &TorusGrid, freq: &FrequencyBox, sigma: impl Fn(&[i64]) -> Complex) -> Result<Self> {
        grid.check_box(freq)?;
        let column: Vec<Complex> = freq.points().map(sigma).collect();
        let values = column.iter().copied().cycle().take(column.len() * grid.len()).collect();
        let mut s = Self::from_table(grid, freq, values, true)?;
        s.factors = Some((vec![Complex::new(1.0, 0.0); grid.len()], column));
        Ok(s)
    }

    /// Wraps a raw table. With `multiplier` set, columns must be constant.
    pub fn from_table(grid: &TorusGrid, freq: &FrequencyBox, values: Vec<Complex>, multiplier: bool) -> Result<Self> {
        grid.check_box(freq)?;
        let (rows, cols) = (grid.len(), freq.len());
        if values.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "symbol table has {} entries, expected {rows}×{cols}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput("symbol table has non-finite entries".into()));
        }
        if multiplier && (1..rows).any(|i| values[i * cols..(i + 1) * cols] != values[..cols]) {
            return Err(Error::InvalidInput("multiplier symbol depends on x".into()));
        }
        Ok(ToroidalSymbol { grid: grid.clone(), freq: freq.clone(), values, multiplier, tag: None, factors: None })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn frequencies(&self) -> &FrequencyBox {
        &self.freq
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn is_multiplier(&self) -> bool {
        self.multiplier
    }

    pub fn tag(&self) -> Option<SymbolTag> {
        self.tag
    }

    /// `σ(x_atom, ξ_k)`.
    pub fn value(&self, atom: usize, k: usize) -> Complex {
        self.values[atom * self.freq.len() + k]
    }

    /// `σ(x_atom, ·)` over the box.
    pub fn row(&self, atom: usize) -> &[Complex] {
        let cols = self.freq.len();
        &self.values[atom * cols..(atom + 1) * cols]
    }

    /// `σ(·, ξ_k)` as a grid function.
    pub fn column(&self, k: usize) -> GridFunction {
        let values = (0..self.grid.len()).map(|i| self.value(i, k)).collect();
        GridFunction::new(Arc::clone(self.grid.space()), values).expect("validated table")
    }

    pub fn to_record(&self) -> SymbolRecord {
        SymbolRecord {
            dim: self.grid.dim,
            points_per_dim: self.grid.points_per_dim,
            radius: self.freq.radius,
            multiplier: self.multiplier,
            tag: self.tag,
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_record(record: &SymbolRecord) -> Result<Self> {
        let grid = TorusGrid::new(record.dim, record.points_per_dim)?;
        let freq = FrequencyBox::new(record.dim, record.radius)?;
        let values = record.values.iter().map(|v| Complex::new(v[0], v[1])).collect();
        let mut s = Self::from_table(&grid, &freq, values, record.multiplier)?;
        s.tag = record.tag;
        if s.multiplier {
            s.factors = Some((vec![Complex::new(1.0, 0.0); grid.len()], s.row(0).to_vec()));
        }
        Ok(s)
    }
}

/// Serialized symbol: grid and box metadata plus the row-major table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolRecord {
    pub dim: usize,
    pub points_per_dim: usize,
    pub radius: usize,
    #[serde(default)]
    pub multiplier: bool,
    #[serde(default)]
    pub tag: Option<SymbolTag>,
    /// `[re, im]` pairs, row-major (atom, lattice point).
    pub values: Vec<[f64; 2]>,
}

/// Dense matrix of `T_σ` acting on grid values. Row `i` is an FFT of
/// `ξ ↦ σ(x_i, ξ) e^{2πi x_i·ξ}`.
pub fn quantize(sigma: &ToroidalSymbol) -> DMatrix<Complex> {
    let grid = &sigma.grid;
    let size = grid.len();
    let norm = 1.0 / size as f64;
    let rows = exec::map_range(size, |i| {
        let idx = grid.multi_index(i);
        let mut data = vec![ZERO; size];
        for (k, xi) in sigma.freq.points().enumerate() {
            data[grid.wrapped(xi)] = sigma.value(i, k) * grid.phase(&idx, xi);
        }
        grid.fft_nd(&mut data, false);
        data
    });
    DMatrix::from_fn(size, size, |i, j| rows[i][j] * norm)
}

/// `T_σ f(x_i) = Σ_ξ e^{2πi x_i·ξ} σ(x_i, ξ) f̂(ξ)`, via [`dft_forward`].
pub fn apply_symbol(sigma: &ToroidalSymbol, f: &GridFunction) -> Result<GridFunction> {
    let grid = &sigma.grid;
    let coeffs = dft_forward(grid, f, &sigma.freq)?;
    let values = exec::map_range(grid.len(), |i| {
        let idx = grid.multi_index(i);
        sigma
            .freq
            .points()
            .zip(sigma.row(i))
            .zip(&coeffs.values)
            .fold(ZERO, |acc, ((xi, &s), &c)| acc + grid.phase(&idx, xi) * s * c)
    });
    GridFunction::new(Arc::clone(grid.space()), values)
}

/// One term per lattice point: `g_ξ(x) = e^{2πi x·ξ} σ(x, ξ)`,
/// `h_ξ(y) = e^{−2πi y·ξ}`.
pub fn symbol_nuclear_decomposition(sigma: &ToroidalSymbol) -> NuclearRepresentation {
    let grid = &sigma.grid;
    let space = grid.space();
    let indices: Vec<Vec<usize>> = (0..grid.len()).map(|i| grid.multi_index(i)).collect();
    let terms = exec::map_range(sigma.freq.len(), |k| {
        let xi = sigma.freq.point(k);
        let g = indices.iter().enumerate().map(|(i, idx)| grid.phase(idx, xi) * sigma.value(i, k)).collect();
        let h = indices.iter().map(|idx| grid.phase(idx, xi).conj()).collect();
        (
            GridFunction::new(Arc::clone(space), g).expect("finite"),
            GridFunction::new(Arc::clone(space), h).expect("finite"),
        )
    });
    NuclearRepresentation::new(terms).expect("box is nonempty")
}

/// `Σ_ξ ‖σ(·, ξ)‖_{p'(·)}^r` and the outermost-shell part of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summability {
    pub sum: f64,
    pub last_shell: f64,
}

pub fn symbol_summability(sigma: &ToroidalSymbol, r: f64, p_conj: &VariableExponent) -> Result<Summability> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!("r must lie in (0, 1], got {r}")));
    }
    ensure_same_space(sigma.grid.space(), p_conj.space(), "symbol_summability")?;
    let terms: Vec<f64> = match &sigma.factors {
        // ‖α σ₀(ξ)‖ = |σ₀(ξ)| ‖α‖ by homogeneity.
        Some((alpha, base)) => {
            let alpha = GridFunction::new(Arc::clone(sigma.grid.space()), alpha.clone())?;
            let a = luxemburg_norm(&alpha, p_conj, DEFAULT_TOL)?.value;
            base.iter().map(|s| (s.norm() * a).powf(r)).collect()
        }
        None => exec::try_map_range(sigma.freq.len(), |k| {
            Ok::<_, Error>(luxemburg_norm(&sigma.column(k), p_conj, DEFAULT_TOL)?.value.powf(r))
        })?,
    };
    let mut sum = 0.0;
    let mut last_shell = 0.0;
    for (k, t) in terms.iter().enumerate() {
        sum += t;
        if sigma.freq.on_outer_shell(k) {
            last_shell += t;
        }
    }
    Ok(Summability { sum, last_shell })
}

/// `Σ_{ξ∈ℤⁿ} (1 + 4π²|ξ|²)^{−rτ/2} < ∞  ⇔  rτ > n`.
pub fn summability_predicate(r: f64, tau: f64, n: usize) -> bool {
    r * tau > n as f64
}

/// Bessel potential symbol value `(1 + 4π²|ξ|²)^{−τ/2}`.
pub fn bessel_value(tau: f64, xi: &[i64]) -> f64 {
    let sq: f64 = xi.iter().map(|&k| (k * k) as f64).sum();
    (1.0 + 4.0 * PI * PI * sq).powf(-tau / 2.0)
}

/// `Σ_{|ξ|_∞ ≤ Ξ} (1 + 4π²|ξ|²)^{−rτ/2}` over `ℤⁿ`, lexicographic order.
pub fn bessel_partial_sum(tau: f64, r: f64, n: usize, radius: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    checked_pow(2 * radius + 1, n)?;
    // Odometer over the box instead of materialising it.
    let rad = radius as i64;
    let mut xi = vec![-rad; n];
    let mut sum = 0.0;
    loop {
        sum += bessel_value(r * tau, &xi);
        let mut d = n;
        loop {
            if d == 0 {
                return Ok(sum);
            }
            d -= 1;
            if xi[d] < rad {
                xi[d] += 1;
                break;
            }
            xi[d] = -rad;
        }
    }
}

/// Decay exponent of the Bessel shell sums, `log₂(G(2Ξ, 4Ξ) / G(Ξ, 2Ξ))`
/// where `G(a, b) = S(b) − S(a)`. It tends to `n − rτ`: negative for
/// summable series, `≥ 0` otherwise, independent of the series' scale.
pub fn bessel_tail_exponent(tau: f64, r: f64, n: usize, radius: usize) -> Result<f64> {
    if radius == 0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let s1 = bessel_partial_sum(tau, r, n, radius)?;
    let s2 = bessel_partial_sum(tau, r, n, 2 * radius)?;
    let s4 = bessel_partial_sum(tau, r, n, 4 * radius)?;
    Ok(((s4 - s2) / (s2 - s1)).log2())
}

/// `N^{-n} Σ_j Σ_ξ σ(x_j, ξ)`.
pub fn symbol_trace(sigma: &ToroidalSymbol) -> Complex {
    let norm = 1.0 / sigma.grid.len() as f64;
    sigma.values.iter().fold(ZERO, |acc, &v| acc + v) * norm
}

/// x-independent Bessel potential symbol on the given grid and box.
pub fn bessel_symbol(tau: f64, grid: &TorusGrid, freq: &FrequencyBox) -> Result<ToroidalSymbol> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput(format!("Bessel order τ must be positive, got {tau}")));
    }
    let mut s = ToroidalSymbol::multiplier(grid, freq, |xi| Complex::new(bessel_value(tau, xi), 0.0))?;
    s.tag = Some(SymbolTag::Bessel { tau });
    Ok(s)
}

/// Symbol of `α T_{σ₀}`: `σ(x, ξ) = α(x) σ₀(ξ)`.
pub fn multiplier_compose(alpha: &GridFunction, base: &ToroidalSymbol) -> Result<ToroidalSymbol> {
    ensure_same_space(base.grid.space(), alpha.space(), "multiplier_compose")?;
    if !base.multiplier {
        return Err(Error::Precondition("multiplier_compose needs an x-independent symbol".into()));
    }
    let column = base.row(0).to_vec();
    let values = alpha.values().iter().flat_map(|&a| column.iter().map(move |&s| a * s)).collect();
    let mut s = ToroidalSymbol::from_table(&base.grid, &base.freq, values, false)?;
    s.tag = base.tag.map(|t| SymbolTag::ScaledBessel { tau: t.tau() });
    s.factors = Some((alpha.values().to_vec(), column));
    Ok(s)
}

fn sort_spectrum(values: &mut [Complex]) {
    values.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
}

/// All eigenvalues with algebraic multiplicity, by descending modulus then
/// ascending argument.
pub fn spectrum(matrix: &DMatrix<Complex>) -> Result<Vec<Complex>> {
    let mut ev = linalg::eigenvalues(matrix)?;
    sort_spectrum(&mut ev);
    Ok(ev)
}

/// Eigenvalues with unit eigenvectors, ordered as in [`spectrum`].
pub fn spectrum_with_vectors(matrix: &DMatrix<Complex>) -> Result<Vec<(Complex, DVector<Complex>)>> {
    let mut pairs = linalg::eigenpairs(matrix)?;
    pairs.sort_by(|(a, _), (b, _)| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok(pairs)
}

/// Pairwise absolute differences between the three traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancies {
    pub eigen_vs_matrix: f64,
    pub eigen_vs_symbol: f64,
    pub matrix_vs_symbol: f64,
}

impl Discrepancies {
    pub fn max(&self) -> f64 {
        self.eigen_vs_matrix.max(self.eigen_vs_symbol).max(self.matrix_vs_symbol)
    }
}

/// Eigenvalue sum, matrix trace and symbol trace of a quantized symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Complex>,
    pub eigen_sum: Complex,
    pub matrix_trace: Complex,
    pub symbol_trace: Complex,
    pub discrepancies: Discrepancies,
    pub r: f64,
    pub tau: Option<f64>,
    pub radius: usize,
    pub points_per_dim: usize,
    pub dim: usize,
    /// `r ≤ 2/3`.
    pub grothendieck_regime: bool,
    pub warning: Option<String>,
}

pub fn lidskii_report(sigma: &ToroidalSymbol, r: f64) -> Result<SpectralReport> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!("r must lie in (0, 1], got {r}")));
    }
    let matrix = quantize(sigma);
    let eigenvalues = spectrum(&matrix)?;
    let eigen_sum = eigenvalues.iter().fold(ZERO, |acc, &v| acc + v);
    let matrix_trace = linalg::trace(&matrix);
    let sym = symbol_trace(sigma);
    let tau = sigma.tag.map(|t| t.tau());
    let n = sigma.grid.dim;
    let warning = tau.filter(|&t| !summability_predicate(r, t, n)).map(|t| {
        format!("r·τ = {} ≤ n = {n}: the Bessel series Σσ(ξ)^r diverges, r-nuclearity is not guaranteed", r * t)
    });
    Ok(SpectralReport {
        discrepancies: Discrepancies {
            eigen_vs_matrix: (eigen_sum - matrix_trace).norm(),
            eigen_vs_symbol: (eigen_sum - sym).norm(),
            matrix_vs_symbol: (matrix_trace - sym).norm(),
        },
        eigenvalues,
        eigen_sum,
        matrix_trace,
        symbol_trace: sym,
        r,
        tau,
        radius: sigma.freq.radius,
        points_per_dim: sigma.grid.points_per_dim,
        dim: n,
        grothendieck_regime: r <= 2.0 / 3.0 + 1e-12,
        warning,
    })
}
