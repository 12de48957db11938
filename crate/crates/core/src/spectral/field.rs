use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Physical,
    Spectral,
}

/// A scalar field on a [`Grid`], held either as point samples or as
/// Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
    representation: Representation,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<Complex64>, representation: Representation) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        Ok(Field {
            grid: grid.clone(),
            values,
            representation,
        })
    }

    pub fn zeros(grid: &Grid, representation: Representation) -> Field {
        Field {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            representation,
        }
    }

    /// Samples a real function `f(x)` (with `x = [x1, x2]`, unused axes zero).
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 2]) -> f64) -> Field {
        let values = (0..grid.len())
            .map(|k| Complex64::new(f(grid.coordinates(k)), 0.0))
            .collect();
        Field {
            grid: grid.clone(),
            values,
            representation: Representation::Physical,
        }
    }

    /// Builds spectral coefficients from a function of the wavevector.
    pub fn spectral_from_fn(grid: &Grid, f: impl Fn([f64; 2]) -> Complex64) -> Field {
        let values = (0..grid.len()).map(|k| f(grid.wavevector(k))).collect();
        Field {
            grid: grid.clone(),
            values,
            representation: Representation::Spectral,
        }
    }

    pub fn from_real(grid: &Grid, values: &[f64]) -> Result<Field> {
        Field::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            Representation::Physical,
        )
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn is_physical(&self) -> bool {
        self.representation == Representation::Physical
    }

    pub fn expect(&self, representation: Representation) -> Result<()> {
        if self.representation == representation {
            Ok(())
        } else {
            Err(Error::RepresentationMismatch {
                expected: representation,
                found: self.representation,
            })
        }
    }

    pub fn forward_transform(&self) -> Result<Field> {
        self.expect(Representation::Physical)?;
        let mut values = self.values.clone();
        self.grid.forward_in_place(&mut values);
        Ok(Field {
            grid: self.grid.clone(),
            values,
            representation: Representation::Spectral,
        })
    }

    pub fn inverse_transform(&self) -> Result<Field> {
        self.expect(Representation::Spectral)?;
        let mut values = self.values.clone();
        self.grid.inverse_in_place(&mut values);
        Ok(Field {
            grid: self.grid.clone(),
            values,
            representation: Representation::Physical,
        })
    }

    /// Spectral view, transforming if needed.
    pub fn to_spectral(&self) -> Field {
        match self.representation {
            Representation::Spectral => self.clone(),
            Representation::Physical => self.forward_transform().expect("tag checked"),
        }
    }

    /// Physical view, transforming if needed.
    pub fn to_physical(&self) -> Field {
        match self.representation {
            Representation::Physical => self.clone(),
            Representation::Spectral => self.inverse_transform().expect("tag checked"),
        }
    }

    /// Real parts of the physical samples.
    pub fn real_values(&self) -> Vec<f64> {
        self.to_physical().values.iter().map(|v| v.re).collect()
    }

    /// Drops imaginary parts of a physical field.
    pub fn real_part(&self) -> Field {
        let phys = self.to_physical();
        Field {
            grid: phys.grid,
            values: phys.values.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
            representation: Representation::Physical,
        }
    }

    /// Pointwise map over stored values, keeping grid and tag.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            representation: self.representation,
        }
    }

    /// `self + scale * other` in a common representation (that of `self`).
    pub fn axpy(&self, scale: f64, other: &Field) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let other = match self.representation {
            Representation::Physical => other.to_physical(),
            Representation::Spectral => other.to_spectral(),
        };
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b * scale)
                .collect(),
            representation: self.representation,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(-1.0, other)
    }

    /// Cyclic shift of a physical field by whole cells along axis 0.
    pub fn cyclic_shift(&self, cells: usize) -> Result<Field> {
        self.expect(Representation::Physical)?;
        let n = self.grid.points_per_axis();
        let mut values = self.values.clone();
        match self.grid.dim() {
            1 => values.rotate_right(cells % n),
            _ => values.rotate_right((cells % n) * n),
        }
        Ok(Field {
            grid: self.grid.clone(),
            values,
            representation: Representation::Physical,
        })
    }

    /// Largest `|u(-xi) - conj u(xi)|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> Result<f64> {
        self.expect(Representation::Spectral)?;
        let n = self.grid.points_per_axis();
        let mirror = |i: usize| (n - i) % n;
        let mut worst: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for k in 0..self.values.len() {
            let [i, j] = self.grid.axis_indices(k);
            let m = match self.grid.dim() {
                1 => mirror(i),
                _ => mirror(i) * n + mirror(j),
            };
            worst = worst.max((self.values[m] - self.values[k].conj()).norm());
            peak = peak.max(self.values[k].norm());
        }
        Ok(if peak > 0.0 { worst / peak } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_maps_to_zero_mode() {
        let g = Grid::new(1, 32, 3.0).unwrap();
        let f = Field::from_fn(&g, |_| 2.5).forward_transform().unwrap();
        for (k, v) in f.values().iter().enumerate() {
            if g.mode(k) == 0 {
                // c * 2L / sqrt(2 pi)
                let expected = 2.5 * 6.0 / (2.0 * PI).sqrt();
                assert!((v.re - expected).abs() < 1e-12 && v.im.abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-13, "mode {} = {}", g.mode(k), v);
            }
        }
    }

    #[test]
    fn cosine_has_two_equal_coefficients() {
        let g = Grid::new(1, 8, PI).unwrap();
        let f = Field::from_fn(&g, |x| x[0].cos()).forward_transform().unwrap();
        let mut plus = None;
        let mut minus = None;
        for (k, v) in f.values().iter().enumerate() {
            match g.mode(k) {
                1 => plus = Some(*v),
                -1 => minus = Some(*v),
                _ => assert!(v.norm() < 1e-14),
            }
        }
        let (p, m) = (plus.unwrap(), minus.unwrap());
        assert!((p - m).norm() < 1e-14);
        assert!(p.norm() > 0.1);
    }

    #[test]
    fn mismatch_is_reported() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        let f = Field::zeros(&g, Representation::Spectral);
        assert!(matches!(
            f.forward_transform(),
            Err(Error::RepresentationMismatch { .. })
        ));
        let p = Field::zeros(&g, Representation::Physical);
        assert!(p.inverse_transform().is_err());
    }

    #[test]
    fn round_trip_2d() {
        let g = Grid::new(2, 16, 2.0).unwrap();
        let f = Field::from_fn(&g, |x| (-(x[0] * x[0] + 0.5 * x[1] * x[1])).exp() + 0.1 * x[1]);
        let back = f.forward_transform().unwrap().inverse_transform().unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(f.forward_transform().unwrap().hermitian_defect().unwrap() < 1e-12);
    }
}
