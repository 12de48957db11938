use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Representation};

/// Largest admissible multiplier at the Nyquist wavenumber for a kernel to
/// count as resolved on a grid.
pub const RESOLUTION_GUARD: f64 = 1e-14;

/// One element `p_alpha(t, .)` of the fractional heat semigroup.
/// `alpha = 2` is the Gaussian heat kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    alpha: f64,
    time: f64,
}

impl KernelSpec {
    pub fn new(alpha: f64, time: f64) -> Result<KernelSpec> {
        check_alpha(alpha)?;
        if !(time.is_finite() && time > 0.0) {
            return Err(Error::invalid("time", format!("must be positive, got {time}")));
        }
        Ok(KernelSpec { alpha, time })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", format!("must lie in (1, 2], got {alpha}")))
    }
}

/// `|xi|^alpha`, with the square taken exactly at `alpha = 2`.
#[inline]
pub(crate) fn xi_pow(xi_abs: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        xi_abs * xi_abs
    } else {
        xi_abs.powf(alpha)
    }
}

/// Fourier symbol `exp(-t |xi|^alpha)` of the semigroup.
pub fn symbol(spec: &KernelSpec, xi_abs: f64) -> f64 {
    (-spec.time * xi_pow(xi_abs, spec.alpha)).exp()
}

/// The multiplier `exp(-t |xi|^alpha)` tabulated over a grid's lattice, in
/// spectral storage order.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    grid: Grid,
    spec: KernelSpec,
    multiplier: Vec<f64>,
}

impl SymbolTable {
    pub fn new(spec: &KernelSpec, grid: &Grid) -> SymbolTable {
        let multiplier = (0..grid.len()).map(|k| symbol(spec, grid.xi_abs(k))).collect();
        SymbolTable {
            grid: grid.clone(),
            spec: *spec,
            multiplier,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn multiplier(&self) -> &[f64] {
        &self.multiplier
    }

    /// Multiplier at the axis Nyquist wavenumber, where the lattice truncates.
    pub fn nyquist_multiplier(&self) -> f64 {
        symbol(&self.spec, self.grid.xi_nyquist())
    }
}

/// Samples `p_alpha(t, x)` on the grid by inverting the symbol.
///
/// The lattice must resolve the symbol: the multiplier at the axis Nyquist
/// wavenumber has to be below [`RESOLUTION_GUARD`].
pub fn kernel_field(spec: &KernelSpec, grid: &Grid) -> Result<Field> {
    let table = SymbolTable::new(spec, grid);
    let nyquist = table.nyquist_multiplier();
    if nyquist >= RESOLUTION_GUARD {
        return Err(Error::UnderResolvedKernel { multiplier: nyquist });
    }
    // coefficient of the kernel itself is (2 pi)^{-n/2} times the symbol
    let norm = (2.0 * PI).powf(-(grid.dim() as f64) / 2.0);
    let coeffs = table
        .multiplier
        .iter()
        .map(|&m| Complex64::new(norm * m, 0.0))
        .collect();
    let phys = Field::new(grid, coeffs, Representation::Spectral)?.inverse_transform()?;
    let peak = phys.values().iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let residue = phys.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if residue > 1e-12 * peak {
        return Err(Error::ComplexKernel {
            residue: residue / peak,
        });
    }
    Ok(phys.real_part())
}

/// Sup-relative deviation between `p_alpha(t, .)` and the rescaled profile
/// `t^{-n/alpha} P_alpha(x / t^{1/alpha})`, where `P_alpha = p_alpha(1, .)`.
///
/// Both sides come from separate inversions; the profile is evaluated off the
/// lattice by trigonometric interpolation of its samples. Only points whose
/// rescaled coordinates stay inside the box are compared.
pub fn self_similarity_check(alpha: f64, t: f64, grid: &Grid) -> Result<f64> {
    let direct = kernel_field(&KernelSpec::new(alpha, t)?, grid)?;
    let profile = kernel_field(&KernelSpec::new(alpha, 1.0)?, grid)?;
    let scale = t.powf(1.0 / alpha);
    let amplitude = scale.powi(-(grid.dim() as i32));

    let n = grid.points_per_axis();
    let l = grid.half_length();
    // rescaled axis coordinates that stay inside [-L, L)
    let targets: Vec<(usize, f64)> = (0..n)
        .map(|i| (i, grid.axis_coordinate(i) / scale))
        .filter(|(_, y)| *y >= -l && *y < l)
        .collect();
    let interp = TrigInterpolator::new(grid, &targets.iter().map(|t| t.1).collect::<Vec<_>>());

    let direct_vals = direct.real_values();
    let peak = direct_vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let rescaled = interp.evaluate(&profile.real_values());
    let mut worst: f64 = 0.0;
    match grid.dim() {
        1 => {
            for (r, &(i, _)) in targets.iter().enumerate() {
                let d = direct_vals[i] - amplitude * rescaled[r];
                worst = worst.max(d.abs());
            }
        }
        _ => {
            let m = targets.len();
            for (r1, &(i1, _)) in targets.iter().enumerate() {
                for (r2, &(i2, _)) in targets.iter().enumerate() {
                    let d = direct_vals[i1 * n + i2] - amplitude * rescaled[r1 * m + r2];
                    worst = worst.max(d.abs());
                }
            }
        }
    }
    Ok(worst / peak)
}

/// Evaluates the trigonometric interpolant of periodic grid samples at a
/// tensor product of off-grid axis coordinates.
struct TrigInterpolator<'g> {
    grid: &'g Grid,
    // per target: Some(node) when the target is exactly a grid node
    nodes: Vec<Option<usize>>,
    // per target, per axis index: exp(i xi_j (y - x_0)) / N
    weights: Vec<Vec<Complex64>>,
}

impl<'g> TrigInterpolator<'g> {
    fn new(grid: &'g Grid, targets: &[f64]) -> Self {
        let n = grid.points_per_axis();
        let dx = grid.spacing();
        let l = grid.half_length();
        let nyquist = -((n / 2) as i64);
        let mut nodes = Vec::with_capacity(targets.len());
        let mut weights = Vec::with_capacity(targets.len());
        for &y in targets {
            let pos = (y + l) / dx;
            let exact = pos.fract() == 0.0 && grid.axis_coordinate(pos as usize) == y;
            nodes.push(exact.then_some(pos as usize));
            let row = (0..n)
                .map(|i| {
                    let j = grid.mode(i);
                    if j == nyquist {
                        // real interpolant: the unpaired mode contributes a cosine
                        Complex64::new((grid.wavenumber(i) * (y + l)).cos() / n as f64, 0.0)
                    } else {
                        Complex64::from_polar(1.0 / n as f64, grid.wavenumber(i) * (y + l))
                    }
                })
                .collect();
            weights.push(row);
        }
        TrigInterpolator { grid, nodes, weights }
    }

    fn along_axis(&self, samples: &[f64]) -> Vec<f64> {
        // DFT coefficients relative to x_0 = -L
        let mut c: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let n = c.len();
        let mut planner = rustfft::FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut c);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(node, w)| match node {
                Some(i) => samples[*i],
                None => w.iter().zip(&c).map(|(a, b)| (a * b).re).sum(),
            })
            .collect()
    }

    fn evaluate(&self, samples: &[f64]) -> Vec<f64> {
        let n = self.grid.points_per_axis();
        match self.grid.dim() {
            1 => self.along_axis(samples),
            _ => {
                let m = self.nodes.len();
                // interpolate along the fast axis for every row, then columns
                let rows: Vec<Vec<f64>> = (0..n).map(|r| self.along_axis(&samples[r * n..(r + 1) * n])).collect();
                let mut out = vec![0.0; m * m];
                let mut column = vec![0.0; n];
                for c in 0..m {
                    for r in 0..n {
                        column[r] = rows[r][c];
                    }
                    for (r, v) in self.along_axis(&column).into_iter().enumerate() {
                        out[r * m + c] = v;
                    }
                }
                out
            }
        }
    }
}

/// `p_alpha(t) * u`: multiplication of the spectral coefficients by the
/// symbol. Returns a spectral field.
pub fn apply_semigroup(u: &Field, spec: &KernelSpec) -> Field {
    let spectral = u.to_spectral();
    let grid = spectral.grid().clone();
    let values = spectral
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v * symbol(spec, grid.xi_abs(k)))
        .collect();
    Field::new(&grid, values, Representation::Spectral).expect("same grid")
}

/// `(d/dx_axis) p_alpha(t) * u`: multiplication by `i xi_axis exp(-t|xi|^alpha)`.
/// The unpaired Nyquist mode of the differentiated axis is dropped so that
/// real input stays real.
pub fn apply_gradient_semigroup(u: &Field, spec: &KernelSpec, axis: usize) -> Result<Field> {
    let grid = u.grid().clone();
    if axis >= grid.dim() {
        return Err(Error::invalid(
            "direction",
            format!("axis {axis} out of range for dimension {}", grid.dim()),
        ));
    }
    let spectral = u.to_spectral();
    let nyquist = -((grid.points_per_axis() / 2) as i64);
    let values = spectral
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let idx = grid.axis_indices(k)[axis];
            if grid.mode(idx) == nyquist {
                return Complex64::new(0.0, 0.0);
            }
            let xi = grid.wavevector(k)[axis];
            v * Complex64::new(0.0, xi) * symbol(spec, grid.xi_abs(k))
        })
        .collect();
    Field::new(&grid, values, Representation::Spectral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lp_norm;

    #[test]
    fn symbol_values() {
        let s = KernelSpec::new(1.5, 1.0).unwrap();
        assert_eq!(symbol(&s, 0.0), 1.0);
        assert!((symbol(&s, 1.0) - (-1f64).exp()).abs() < 1e-16);
        let g = KernelSpec::new(2.0, 0.5).unwrap();
        assert_eq!(symbol(&g, 2.0), (-2f64).exp());
    }

    #[test]
    fn spec_validation() {
        assert!(KernelSpec::new(1.0, 1.0).is_err());
        assert!(KernelSpec::new(2.1, 1.0).is_err());
        assert!(KernelSpec::new(1.5, 0.0).is_err());
        assert!(KernelSpec::new(2.0, 1e-9).is_ok());
    }

    #[test]
    fn symbol_table_invariants() {
        let grid = Grid::new(1, 64, 8.0).unwrap();
        let table = SymbolTable::new(&KernelSpec::new(1.3, 0.7).unwrap(), &grid);
        let xi = grid.xi_abs_table();
        let mut pairs: Vec<(f64, f64)> = xi.iter().copied().zip(table.multiplier().iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert_eq!(pairs[0], (0.0, 1.0));
        for w in pairs.windows(2) {
            assert!(w[1].1 <= w[0].1);
            assert!(w[1].1 > 0.0 && w[1].1 <= 1.0);
        }
    }

    #[test]
    fn under_resolved_kernel_is_rejected() {
        let grid = Grid::new(1, 64, 32.0).unwrap();
        let err = kernel_field(&KernelSpec::new(1.5, 0.01).unwrap(), &grid).unwrap_err();
        assert!(matches!(err, Error::UnderResolvedKernel { .. }));
    }

    #[test]
    fn gaussian_kernel_matches_closed_form() {
        let grid = Grid::new(1, 1024, 32.0).unwrap();
        let t = 0.8;
        let k = kernel_field(&KernelSpec::new(2.0, t).unwrap(), &grid).unwrap();
        let vals = k.real_values();
        let peak = vals.iter().cloned().fold(0.0, f64::max);
        for (i, v) in vals.iter().enumerate() {
            let x = grid.axis_coordinate(i);
            let exact = (4.0 * PI * t).powf(-0.5) * (-x * x / (4.0 * t)).exp();
            assert!((v - exact).abs() <= 1e-8 * peak, "x = {x}");
        }
        assert!((lp_norm(&k, 1.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn self_similarity_at_unit_time_is_exact() {
        let grid = Grid::new(1, 256, 16.0).unwrap();
        assert_eq!(self_similarity_check(1.5, 1.0, &grid).unwrap(), 0.0);
    }

    #[test]
    fn gradient_rejects_bad_axis() {
        let grid = Grid::new(1, 16, 4.0).unwrap();
        let u = Field::from_fn(&grid, |x| x[0]);
        assert!(apply_gradient_semigroup(&u, &KernelSpec::new(2.0, 1.0).unwrap(), 1).is_err());
    }
}
