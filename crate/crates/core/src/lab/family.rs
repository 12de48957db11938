use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{lp_norm, Field, Grid};

/// Closed-form initial profiles, centred at `center` on the first axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    /// `A exp(-|x - c|^2 / w^2)`
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// `A exp(1 - 1 / (1 - |x - c|^2 / R^2))` inside the ball of radius `R`.
    SmoothedBump { amplitude: f64, radius: f64, center: f64 },
    /// Two Gaussians of width `w` at `c +- separation / 2`.
    TwoBump {
        amplitude: f64,
        width: f64,
        separation: f64,
        center: f64,
    },
}

impl Profile {
    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> Profile {
        Profile::Gaussian {
            amplitude,
            width,
            center,
        }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let r2 = |c: f64| (x[0] - c).powi(2) + x[1] * x[1];
        match *self {
            Profile::Gaussian {
                amplitude,
                width,
                center,
            } => amplitude * (-r2(center) / (width * width)).exp(),
            Profile::SmoothedBump {
                amplitude,
                radius,
                center,
            } => {
                let q = r2(center) / (radius * radius);
                if q < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - q)).exp()
                } else {
                    0.0
                }
            }
            Profile::TwoBump {
                amplitude,
                width,
                separation,
                center,
            } => {
                let w2 = width * width;
                amplitude * ((-r2(center - 0.5 * separation) / w2).exp() + (-r2(center + 0.5 * separation) / w2).exp())
            }
        }
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        let (scale, amp) = match *self {
            Profile::Gaussian { amplitude, width, .. } => (width, amplitude),
            Profile::SmoothedBump { amplitude, radius, .. } => (radius, amplitude),
            Profile::TwoBump { amplitude, width, .. } => (width, amplitude),
        };
        if !(scale > 0.0 && scale.is_finite() && amp.is_finite()) {
            return Err(Error::invalid(
                name,
                "profile needs a positive width and finite amplitude",
            ));
        }
        Ok(())
    }

    pub fn sample(&self, grid: &Grid) -> Field {
        Field::from_fn(grid, |x| self.eval(x))
    }
}

/// `u_{0,alpha} = u_{0,2} + c_pert (2 - alpha)^gamma phi`, `||phi||_inf = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataFamilySpec {
    pub base: Profile,
    pub gamma: f64,
    /// Shape of `phi`; rescaled to unit sup norm on the grid.
    pub perturbation: Profile,
    pub c_pert: f64,
}

impl Default for DataFamilySpec {
    fn default() -> Self {
        DataFamilySpec {
            base: Profile::gaussian(1.0, 1.0, 0.0),
            gamma: 1.0,
            perturbation: Profile::gaussian(1.0, 0.5f64.sqrt(), 1.0),
            c_pert: 0.5,
        }
    }
}

impl DataFamilySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        if !(self.c_pert >= 0.0 && self.c_pert.is_finite()) {
            return Err(Error::invalid(
                "c_pert",
                format!("must be non-negative, got {}", self.c_pert),
            ));
        }
        self.base.validate("base")?;
        self.perturbation.validate("perturbation")
    }

    /// `c_pert (2 - alpha)^gamma`
    pub fn gap(&self, alpha: f64) -> f64 {
        self.c_pert * (2.0 - alpha).powf(self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataFamily {
    pub base: Field,
    /// Unit sup-norm perturbation `phi`.
    pub perturbation: Field,
    pub members: Vec<(f64, Field)>,
}

impl DataFamily {
    pub fn member(&self, alpha: f64) -> Option<&Field> {
        self.members.iter().find(|(a, _)| *a == alpha).map(|(_, f)| f)
    }
}

pub fn make_data_family(spec: &DataFamilySpec, alphas: &[f64], grid: &Grid) -> Result<DataFamily> {
    spec.validate()?;
    let base = spec.base.sample(grid);
    let raw = spec.perturbation.sample(grid);
    let peak = lp_norm(&raw, f64::INFINITY)?;
    if peak == 0.0 {
        return Err(Error::invalid("perturbation", "vanishes on the grid"));
    }
    let perturbation = raw.map(|v| v / peak);
    let members = alphas
        .iter()
        .map(|&alpha| {
            crate::kernel::semigroup::check_alpha(alpha)?;
            Ok((alpha, base.axpy(spec.gap(alpha), &perturbation)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DataFamily {
        base,
        perturbation,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_member_is_the_base() {
        let g = Grid::new(1, 256, 16.0).unwrap();
        let fam = make_data_family(&DataFamilySpec::default(), &[2.0, 1.9], &g).unwrap();
        assert_eq!(fam.member(2.0).unwrap(), &fam.base);
    }

    #[test]
    fn gap_is_exact() {
        let g = Grid::new(1, 256, 16.0).unwrap();
        for gamma in [0.5, 1.0, 2.0] {
            let spec = DataFamilySpec {
                gamma,
                ..Default::default()
            };
            let fam = make_data_family(&spec, &[1.9], &g).unwrap();
            let gap = lp_norm(&fam.member(1.9).unwrap().sub(&fam.base).unwrap(), f64::INFINITY).unwrap();
            assert!((gap - 0.5 * 0.1f64.powf(gamma)).abs() < 1e-12);
        }
        let spec = DataFamilySpec {
            c_pert: 0.3,
            ..Default::default()
        };
        assert!((spec.gap(1.5) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        let g = Grid::new(1, 64, 8.0).unwrap();
        let spec = DataFamilySpec {
            gamma: 0.0,
            ..Default::default()
        };
        assert!(make_data_family(&spec, &[1.9], &g).is_err());
        assert!(make_data_family(&DataFamilySpec::default(), &[2.5], &g).is_err());
    }

    #[test]
    fn profiles() {
        let bump = Profile::SmoothedBump {
            amplitude: 2.0,
            radius: 1.0,
            center: 0.0,
        };
        assert_eq!(bump.eval([0.0, 0.0]), 2.0);
        assert_eq!(bump.eval([1.0, 0.0]), 0.0);
        let two = Profile::TwoBump {
            amplitude: 1.0,
            width: 0.5,
            separation: 4.0,
            center: 0.0,
        };
        assert!((two.eval([2.0, 0.0]) - 1.0).abs() < 1e-6);
        assert!(two.eval([0.0, 0.0]) < 1e-6);
    }
}
