//! Two-chart stereographic atlas of the unit sphere carrying the curvature
//! form `w_theta = scale * (1/2) * area`.
//!
//! Chart `South` projects from the south pole, `w = (X1, X2) / (1 + X3)`,
//! and preserves orientation; chart `North` projects from the north pole and
//! reverses it. The transition is `w -> w / |w|^2` in both directions.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::gauss_legendre_on;
use crate::error::{DiracError, Result};

/// Orders count Gauss-Legendre nodes per panel.
pub const MIN_ORDER: usize = 4;
pub const DEFAULT_ORDER: usize = 16;
/// Panels per axis of the composite chart rule on `[-2, 2]`.
pub const PANELS: usize = 8;
/// Relative tolerance on `|I(4q) - I(2q)|`.
pub const CONVERGENCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    North,
    South,
}

impl Chart {
    /// +1 if the chart is orientation preserving.
    pub fn orientation(self) -> f64 {
        match self {
            Chart::North => -1.0,
            Chart::South => 1.0,
        }
    }

    pub fn other(self) -> Chart {
        match self {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Full,
    /// Colatitude `<= theta0` around the north pole.
    Cap(f64),
    /// Colatitude `>= theta0`.
    Complement(f64),
}

/// Quadrature value at the finest order with `|I(4q) - I(2q)|` as the error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub orders: [usize; 3],
    pub estimates: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereAtlas {
    scale: f64,
    order: usize,
}

fn norm2(w: [f64; 2]) -> f64 {
    w[0] * w[0] + w[1] * w[1]
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// Bump in `s = |w|^2`: 1 on the unit disk, 0 outside radius 2, with the
/// transition linear in `log |w|`.
fn bump(s: f64) -> f64 {
    if s <= 1.0 {
        return 1.0;
    }
    smooth_step(1.0 - s.ln() / (2.0 * std::f64::consts::LN_2))
}

impl SphereAtlas {
    pub fn new(scale: f64, order: usize) -> Result<Self> {
        if !scale.is_finite() || scale == 0.0 {
            return Err(DiracError::Invalid("curvature scale must be finite and nonzero".into()));
        }
        if order < MIN_ORDER {
            return Err(DiracError::Invalid(format!("quadrature order must be at least {MIN_ORDER}")));
        }
        Ok(SphereAtlas { scale, order })
    }

    /// Unit Chern class normalization, `|int w_theta| = 2 pi`.
    pub fn hopf(order: usize) -> Result<Self> {
        Self::new(1.0, order)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn transition(w: [f64; 2]) -> [f64; 2] {
        let s = norm2(w);
        [w[0] / s, w[1] / s]
    }

    /// Determinant of the transition's Jacobian at `w`.
    pub fn transition_det(w: [f64; 2]) -> f64 {
        let s = norm2(w);
        let j = |i: usize, k: usize| {
            let d = if i == k { 1.0 } else { 0.0 };
            d / s - 2.0 * w[i] * w[k] / (s * s)
        };
        j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0)
    }

    /// Coefficient of `w_theta` in `dw1 ^ dw2` of the chart.
    pub fn curvature_coefficient(&self, chart: Chart, w: [f64; 2]) -> f64 {
        let d = 1.0 + norm2(w);
        self.scale * 0.5 * chart.orientation() * 4.0 / (d * d)
    }

    /// Partition-of-unity weight of `chart` at its coordinate `w`.
    pub fn partition_weight(&self, w: [f64; 2]) -> f64 {
        let s = norm2(w);
        let own = bump(s);
        if own == 0.0 {
            return 0.0;
        }
        let other = if s == 0.0 { 0.0 } else { bump(1.0 / s) };
        own / (own + other)
    }

    fn square_nodes(order: usize) -> Vec<(f64, f64)> {
        let width = 4.0 / PANELS as f64;
        (0..PANELS)
            .flat_map(|i| {
                let a = -2.0 + width * i as f64;
                gauss_legendre_on(order, a, a + width)
            })
            .collect()
    }

    /// Partition weights sum to 1 and `w_theta` transforms as a 2-form
    /// across the overlap, at every node of the chart rule.
    pub fn check_consistency(&self) -> Result<()> {
        let nodes = Self::square_nodes(self.order);
        for &(x, _) in &nodes {
            for &(y, _) in &nodes {
                let w = [x, y];
                if norm2(w) < 1e-300 {
                    continue;
                }
                let v = Self::transition(w);
                let sum = self.partition_weight(w) + self.partition_weight(v);
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(DiracError::Invalid(format!("partition of unity sums to {sum} at {w:?}")));
                }
                let here = self.curvature_coefficient(Chart::North, w);
                let there = self.curvature_coefficient(Chart::South, v) * Self::transition_det(w);
                if (here - there).abs() > 1e-10 * (1.0 + here.abs()) {
                    return Err(DiracError::Invalid(format!("curvature form inconsistent across charts at {w:?}")));
                }
            }
        }
        Ok(())
    }

    /// Full-sphere integral with the partition of unity at one order.
    fn full_at(&self, order: usize) -> f64 {
        let nodes = Self::square_nodes(order);
        [Chart::North, Chart::South]
            .iter()
            .map(|&chart| {
                let rows: Vec<f64> = nodes
                    .par_iter()
                    .map(|&(x, wx)| {
                        nodes
                            .iter()
                            .map(|&(y, wy)| {
                                let w = [x, y];
                                wx * wy * self.partition_weight(w) * self.curvature_coefficient(chart, w)
                            })
                            .sum::<f64>()
                    })
                    .collect();
                chart.orientation() * rows.iter().sum::<f64>()
            })
            .sum()
    }

    /// Integral over the disk `|w| <= tan(theta0/2)` of `chart`, in polar
    /// coordinates with `rho = tan(theta/2)`.
    fn disk_at(&self, chart: Chart, theta0: f64, order: usize) -> f64 {
        if theta0 <= 0.0 {
            return 0.0;
        }
        let radial = gauss_legendre_on(order, 0.0, theta0);
        let angular = gauss_legendre_on(order, 0.0, 2.0 * PI);
        let rows: Vec<f64> = radial
            .par_iter()
            .map(|&(th, wt)| {
                let rho = (th / 2.0).tan();
                let drho = 0.5 / (th / 2.0).cos().powi(2);
                angular
                    .iter()
                    .map(|&(phi, wp)| {
                        let w = [rho * phi.cos(), rho * phi.sin()];
                        wt * wp * self.curvature_coefficient(chart, w) * rho * drho
                    })
                    .sum::<f64>()
            })
            .collect();
        chart.orientation() * rows.iter().sum::<f64>()
    }

    /// Integral over a region at a single quadrature order.
    pub fn region_at(&self, region: Region, order: usize) -> Result<f64> {
        match region {
            Region::Full => Ok(self.full_at(order)),
            Region::Cap(t) if (0.0..PI).contains(&t) => Ok(self.disk_at(Chart::South, t, order)),
            Region::Complement(t) if t > 0.0 && t <= PI => Ok(self.disk_at(Chart::North, PI - t, order)),
            _ => Err(DiracError::Invalid(format!("colatitude out of range in {region:?}"))),
        }
    }

    /// Integral of `w_theta` over a region, checked across orders `q, 2q, 4q`.
    pub fn curvature_integral(&self, region: Region) -> Result<Estimate> {
        let orders = [self.order, 2 * self.order, 4 * self.order];
        let mut estimates = [0.0; 3];
        for (e, &o) in estimates.iter_mut().zip(&orders) {
            *e = self.region_at(region, o)?;
        }
        let error = (estimates[2] - estimates[1]).abs();
        if error > CONVERGENCE_TOL * (1.0 + estimates[2].abs()) {
            return Err(DiracError::NoConvergence {
                estimates: estimates.to_vec(),
            });
        }
        Ok(Estimate {
            value: estimates[2],
            error,
            orders,
            estimates,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sphere_is_two_pi() {
        let a = SphereAtlas::hopf(DEFAULT_ORDER).unwrap();
        a.check_consistency().unwrap();
        let e = a.curvature_integral(Region::Full).unwrap();
        assert!((e.value.abs() - 2.0 * PI).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn caps_match_closed_form() {
        let a = SphereAtlas::new(3.0, 16).unwrap();
        for t in [0.3, PI / 2.0, 2.5] {
            let cap = a.curvature_integral(Region::Cap(t)).unwrap().value;
            assert!((cap - 3.0 * PI * (1.0 - t.cos())).abs() < 1e-10);
            let rest = a.curvature_integral(Region::Complement(t)).unwrap().value;
            assert!((rest - 3.0 * PI * (1.0 + t.cos())).abs() < 1e-10);
        }
        assert_eq!(a.curvature_integral(Region::Cap(0.0)).unwrap().value, 0.0);
        assert!(a.curvature_integral(Region::Cap(PI)).is_err());
    }

    #[test]
    fn rejects_low_order() {
        assert!(SphereAtlas::new(1.0, MIN_ORDER - 1).is_err());
        assert!(SphereAtlas::new(0.0, 16).is_err());
        // too coarse to converge
        let a = SphereAtlas::new(1.0, MIN_ORDER).unwrap();
        assert!(matches!(a.curvature_integral(Region::Full), Err(DiracError::NoConvergence { .. })));
    }
}
