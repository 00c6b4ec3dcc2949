//! Monodromy obstruction for the leaves `S_r = S^2 x {r}` carrying
//! `f(r) w_theta`, with `w_theta` the curvature of a circle bundle over `S^2`.
//!
//! The restricted monodromy at `r` is generated by `g(r) = f'(r) A`, with
//! `A` the leaf area of `w_theta`. The leaves are integrable near `r`
//! exactly when this family of lattices does not collapse, so the verdict
//! reduces to locating the zeros of `f'`.

pub mod quadrature;
pub mod sphere;
pub mod sturm;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{DiracError, Result};
use crate::polycalc::Poly;
use crate::rational::{self, Q};
pub use sphere::{Chart, Estimate, Region, SphereAtlas, DEFAULT_ORDER, MIN_ORDER};
pub use sturm::{IsolatedRoot, UniPoly};
use quadrature::gauss_legendre_on;

/// Caps `Gamma_t` of colatitude `theta0` in the leaf `S_{r(t)}`, `r(t) = r0 + velocity t`.
/// The boundary of each cap is the orbit circle at that colatitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskFamily {
    pub theta0: f64,
    pub r0: f64,
    pub velocity: f64,
}

/// Largest admissible finite-difference step.
pub const MAX_STEP: f64 = 0.1;

fn check_univariate(f: &Poly) -> Result<()> {
    if f.nvars() != 1 {
        return Err(DiracError::dim(1, f.nvars(), "leaf-form profile f(r)"));
    }
    Ok(())
}

/// `d/dt` of the presymplectic area `int Gamma_t^*(f(r) w_theta)` at `t = 0`,
/// by Richardson-extrapolated central differences.
pub fn area_variation_numeric(atlas: &SphereAtlas, f: &Poly, family: &DiskFamily, step: f64) -> Result<f64> {
    check_univariate(f)?;
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(DiracError::Invalid(format!("finite-difference step must lie in (0, {MAX_STEP}]")));
    }
    let cap = atlas.curvature_integral(Region::Cap(family.theta0))?.value;
    let area = |t: f64| f.eval_f64(&[family.r0 + family.velocity * t]) * cap;
    let central = |h: f64| (area(h) - area(-h)) / (2.0 * h);
    Ok((4.0 * central(step / 2.0) - central(step)) / 3.0)
}

/// Closed form `f'(r0) * velocity * int_cap w_theta`.
pub fn area_variation_analytic(atlas: &SphereAtlas, f: &Poly, family: &DiskFamily) -> Result<f64> {
    check_univariate(f)?;
    let cap = atlas.curvature_integral(Region::Cap(family.theta0))?.value;
    Ok(f.derivative(0).eval_f64(&[family.r0]) * family.velocity * cap)
}

type LoopMap = dyn Fn(f64, f64) -> [f64; 2] + Send + Sync;

/// Homotopy `gamma(t, eps)` in the south-projection chart from the orbit
/// circle at `orbit_colatitude` (`eps = 0`) to a constant loop (`eps = 1`).
#[derive(Clone)]
pub struct Homotopy {
    pub orbit_colatitude: f64,
    map: Arc<LoopMap>,
}

impl std::fmt::Debug for Homotopy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Homotopy")
            .field("orbit_colatitude", &self.orbit_colatitude)
            .finish_non_exhaustive()
    }
}

impl Homotopy {
    pub fn new(orbit_colatitude: f64, map: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Homotopy {
            orbit_colatitude,
            map: Arc::new(map),
        }
    }

    /// Latitude circles of colatitude `(1 - eps) theta0`, traversed once.
    pub fn latitude_shrink(theta0: f64) -> Self {
        Self::new(theta0, move |t, e| {
            let rho = ((1.0 - e) * theta0 / 2.0).tan();
            let a = 2.0 * PI * t;
            [rho * a.cos(), rho * a.sin()]
        })
    }

    /// Stationary loop at chart point `w`.
    pub fn constant(w: [f64; 2]) -> Self {
        let colat = 2.0 * (w[0] * w[0] + w[1] * w[1]).sqrt().atan();
        Self::new(colat, move |_, _| w)
    }

    /// Same homotopy with the loop parameter reversed.
    pub fn reversed(&self) -> Self {
        let inner = self.map.clone();
        Self::new(self.orbit_colatitude, move |t, e| inner(1.0 - t, e))
    }

    pub fn at(&self, t: f64, e: f64) -> [f64; 2] {
        (self.map)(t, e)
    }

    fn check_endpoints(&self) -> Result<()> {
        let radius = (self.orbit_colatitude / 2.0).tan();
        let end = self.at(0.0, 1.0);
        for i in 0..=32 {
            let s = i as f64 / 32.0;
            let w = self.at(s, 0.0);
            if ((w[0] * w[0] + w[1] * w[1]).sqrt() - radius).abs() > 1e-9 {
                return Err(DiracError::HomotopyEndpoints(format!("gamma({s}, 0) is off the orbit circle")));
            }
            let c = self.at(s, 1.0);
            if (c[0] - end[0]).abs() + (c[1] - end[1]).abs() > 1e-9 {
                return Err(DiracError::HomotopyEndpoints(format!("gamma({s}, 1) is not constant")));
            }
            let (a, b) = (self.at(0.0, s), self.at(1.0, s));
            if (a[0] - b[0]).abs() + (a[1] - b[1]).abs() > 1e-9 {
                return Err(DiracError::HomotopyEndpoints(format!("gamma(., {s}) is not closed")));
            }
        }
        Ok(())
    }
}

/// Fourth-order central difference of a chart-valued map.
fn diff(g: impl Fn(f64) -> [f64; 2], x: f64) -> [f64; 2] {
    let h = 1e-3;
    let (a, b, c, d) = (g(x - 2.0 * h), g(x - h), g(x + h), g(x + 2.0 * h));
    [0, 1].map(|i| (a[i] - 8.0 * b[i] + 8.0 * c[i] - d[i]) / (12.0 * h))
}

/// `int_0^1 int_0^1 Omega(d gamma/dt, d gamma/d eps) d eps dt`, the
/// transverse holonomy integral; by Stokes it equals the curvature integral
/// over the disk the homotopy sweeps.
pub fn homotopy_double_integral(atlas: &SphereAtlas, h: &Homotopy) -> Result<f64> {
    h.check_endpoints()?;
    let rule = gauss_legendre_on(4 * atlas.order(), 0.0, 1.0);
    let mut total = 0.0;
    for &(t, wt) in &rule {
        for &(e, we) in &rule {
            let w = h.at(t, e);
            let dt = diff(|s| h.at(s, e), t);
            let de = diff(|s| h.at(t, s), e);
            let det = dt[0] * de[1] - dt[1] * de[0];
            total += wt * we * atlas.curvature_coefficient(Chart::South, w) * det;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Integrable,
    NonIntegrable,
    TriviallyIntegrable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub lo: String,
    pub hi: String,
    pub approx: f64,
}

/// `g(r) = f'(r) * A`, kept factored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub derivative: String,
    pub leaf_area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyReport {
    pub f: String,
    pub interval: [String; 2],
    pub curvature_scale: f64,
    pub leaf_area: Estimate,
    pub generator: Generator,
    pub critical_points: Vec<CriticalPoint>,
    pub endpoint_critical_points: Vec<String>,
    pub verdict: Verdict,
    /// `M_r = g(r) Z`.
    pub lattice: String,
    /// Variation of the cap bounded by the equator orbit per unit `r`-speed is `f'(r)` times this.
    pub equator_disk_area: f64,
    #[serde(skip)]
    derivative: Poly,
}

impl MonodromyReport {
    pub fn derivative(&self) -> &Poly {
        &self.derivative
    }

    pub fn g(&self, r: f64) -> f64 {
        self.derivative.eval_f64(&[r]) * self.generator.leaf_area
    }

    /// `n + 1` equally spaced samples `(r, g(r))` over the interval.
    pub fn samples(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let a = rational::to_f64(&rational::parse_q(&self.interval[0])?);
        let b = rational::to_f64(&rational::parse_q(&self.interval[1])?);
        let n = n.max(1);
        Ok((0..=n)
            .map(|i| {
                let r = a + (b - a) * i as f64 / n as f64;
                (r, self.g(r))
            })
            .collect())
    }
}

/// Root isolation width for critical points.
fn isolation_width() -> Q {
    rational::qf(1, 1 << 40)
}

/// Embeddedness verdict for the monodromy groups over `[a, b]`.
///
/// `f'` is a polynomial, so it either vanishes identically or has finitely
/// many zeros; no degenerate subintervals can occur.
pub fn monodromy_verdict(f: &Poly, interval: [Q; 2], atlas: &SphereAtlas) -> Result<MonodromyReport> {
    check_univariate(f)?;
    let [a, b] = interval;
    if a >= b {
        return Err(DiracError::Invalid("interval must satisfy a < b".into()));
    }
    let fp = f.derivative(0);
    let up = sturm::from_poly(&fp);
    let roots = sturm::roots_in_open(&up, &a, &b, &isolation_width());
    let endpoint_critical_points = [&a, &b]
        .into_iter()
        .filter(|x| !up.is_zero() && num_traits::Zero::is_zero(&up.eval(x)))
        .map(rational::fmt_q)
        .collect();
    let verdict = if up.is_zero() {
        Verdict::TriviallyIntegrable
    } else if roots.is_empty() {
        Verdict::Integrable
    } else {
        Verdict::NonIntegrable
    };
    let leaf_area = atlas.curvature_integral(Region::Full)?;
    let equator_disk_area = atlas.curvature_integral(Region::Cap(PI / 2.0))?.value;
    let names = ["r".to_string()];
    let lattice = if up.is_zero() {
        "M_r = {0}".to_string()
    } else {
        "M_r = g(r) Z".to_string()
    };
    Ok(MonodromyReport {
        f: f.display_with(&names),
        interval: [rational::fmt_q(&a), rational::fmt_q(&b)],
        curvature_scale: atlas.scale(),
        generator: Generator {
            derivative: fp.display_with(&names),
            leaf_area: leaf_area.value,
        },
        leaf_area,
        critical_points: roots
            .iter()
            .map(|r| CriticalPoint {
                lo: rational::fmt_q(&r.lo),
                hi: rational::fmt_q(&r.hi),
                approx: r.approx(),
            })
            .collect(),
        endpoint_critical_points,
        verdict,
        lattice,
        equator_disk_area,
        derivative: fp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::parse_poly;
    use crate::rational::q;

    fn f(s: &str) -> Poly {
        parse_poly(s, &["r".to_string()]).unwrap()
    }
    fn atlas() -> SphereAtlas {
        SphereAtlas::hopf(DEFAULT_ORDER).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let a = atlas();
        let r = monodromy_verdict(&f("r^2 + 1"), [q(-1), q(1)], &a).unwrap();
        assert_eq!(r.verdict, Verdict::NonIntegrable);
        assert_eq!(r.critical_points.len(), 1);
        assert_eq!(r.critical_points[0].lo, "0");
        assert!((r.g(0.5) - 2.0 * PI).abs() < 1e-8);
        let r = monodromy_verdict(&f("r + 2"), [q(-1), q(1)], &a).unwrap();
        assert_eq!(r.verdict, Verdict::Integrable);
        assert!((r.g(0.3) - r.leaf_area.value).abs() < 1e-15);
        let r = monodromy_verdict(&f("5"), [q(-1), q(1)], &a).unwrap();
        assert_eq!(r.verdict, Verdict::TriviallyIntegrable);
        assert_eq!(r.lattice, "M_r = {0}");
        let r = monodromy_verdict(&f("r^2"), [q(0), q(1)], &a).unwrap();
        assert_eq!(r.verdict, Verdict::Integrable);
        assert_eq!(r.endpoint_critical_points, vec!["0".to_string()]);
    }

    #[test]
    fn area_variation_examples() {
        let a = atlas();
        let fam = DiskFamily {
            theta0: PI / 2.0,
            r0: 0.0,
            velocity: 1.0,
        };
        let n = area_variation_numeric(&a, &f("r^2 + 1"), &fam, 0.01).unwrap();
        assert!(n.abs() < 1e-6);
        let n = area_variation_numeric(&a, &f("r + 2"), &fam, 0.01).unwrap();
        assert!((n - PI).abs() < 1e-6);
        assert!((area_variation_analytic(&a, &f("r + 2"), &fam).unwrap() - PI).abs() < 1e-10);
        assert!(area_variation_numeric(&a, &f("3"), &fam, 0.01).unwrap().abs() < 1e-10);
        assert!(area_variation_numeric(&a, &f("r"), &fam, 0.5).is_err());
    }

    #[test]
    fn homotopy_examples() {
        let a = atlas();
        let h = Homotopy::latitude_shrink(PI / 2.0);
        let v = homotopy_double_integral(&a, &h).unwrap();
        assert!((v - PI).abs() < 1e-6, "{v}");
        let rv = homotopy_double_integral(&a, &h.reversed()).unwrap();
        assert!((rv + v).abs() < 1e-9);
        assert_eq!(homotopy_double_integral(&a, &Homotopy::constant([0.0, 0.0])).unwrap(), 0.0);
        let stuck = Homotopy::new(PI / 2.0, |t, _| [(2.0 * PI * t).cos(), (2.0 * PI * t).sin()]);
        assert!(matches!(homotopy_double_integral(&a, &stuck), Err(DiracError::HomotopyEndpoints(_))));
    }
}
