use crate::error::{Error, Result};
use crate::lab::grid::GridField;

/// Points on the unit circle used to sample closed forms on ball boundaries.
pub const CIRCLE_SAMPLES: usize = 4096;

const EDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Closed ball `B̄_radius(center)` must lie inside `[-1, 1]²`.
pub fn check_ball(center: Point, radius: f64) -> Result<()> {
    let fits = radius.is_finite()
        && radius > 0.0
        && center.x.abs() + radius <= 1.0 + EDGE_SLACK
        && center.y.abs() + radius <= 1.0 + EDGE_SLACK;
    if fits {
        Ok(())
    } else {
        Err(Error::Geometry {
            x: center.x,
            y: center.y,
            radius,
        })
    }
}

/// Anything whose sup-norm on balls can be measured.
pub trait Sample {
    fn sup_on_ball(&self, center: Point, radius: f64) -> Result<f64>;
}

impl Sample for GridField {
    /// Max of `|u|` over grid nodes inside the closed ball.
    fn sup_on_ball(&self, center: Point, radius: f64) -> Result<f64> {
        check_ball(center, radius)?;
        let n = self.cells();
        let h = self.spacing();
        let index_range = |c: f64| {
            let lo = ((c - radius + 1.0) / h - 1e-9).ceil().max(0.0) as usize;
            let hi = (((c + radius + 1.0) / h + 1e-9).floor() as usize).min(n);
            lo..=hi
        };
        let r2 = radius * radius * (1.0 + EDGE_SLACK);
        let mut sup = 0.0_f64;
        for j in index_range(center.y) {
            let dy = self.coord(j) - center.y;
            for i in index_range(center.x) {
                let dx = self.coord(i) - center.x;
                if dx * dx + dy * dy <= r2 {
                    sup = sup.max(self.value(i, j).abs());
                }
            }
        }
        Ok(sup)
    }
}

/// `Re(c · z^d)` with `z = x + iy` and complex coefficient `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub degree: u32,
    pub coeff_re: f64,
    pub coeff_im: f64,
}

impl Harmonic {
    /// `Re z^d`
    pub fn monomial(degree: u32) -> Self {
        Harmonic {
            degree,
            coeff_re: 1.0,
            coeff_im: 0.0,
        }
    }

    pub fn constant(value: f64) -> Self {
        Harmonic {
            degree: 0,
            coeff_re: value,
            coeff_im: 0.0,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Harmonic {
            coeff_re: self.coeff_re * factor,
            coeff_im: self.coeff_im * factor,
            ..self
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (mut re, mut im) = (1.0, 0.0);
        for _ in 0..self.degree {
            (re, im) = (re * x - im * y, re * y + im * x);
        }
        self.coeff_re * re - self.coeff_im * im
    }
}

impl Sample for Harmonic {
    /// Harmonic, so the sup is attained on the bounding circle; sampled at
    /// [`CIRCLE_SAMPLES`] equally spaced angles starting at angle 0.
    fn sup_on_ball(&self, center: Point, radius: f64) -> Result<f64> {
        check_ball(center, radius)?;
        let step = std::f64::consts::TAU / CIRCLE_SAMPLES as f64;
        let sup = (0..CIRCLE_SAMPLES)
            .map(|k| {
                let (s, c) = (k as f64 * step).sin_cos();
                self.eval(center.x + radius * c, center.y + radius * s)
                    .abs()
            })
            .fold(self.eval(center.x, center.y).abs(), f64::max);
        Ok(sup)
    }
}

/// A grid-solved or closed-form sample.
#[derive(Debug, Clone, PartialEq)]
pub enum LabSample {
    Grid(GridField),
    Closed(Harmonic),
}

impl LabSample {
    /// Node values at resolution `cells` (grid samples keep their own grid).
    pub fn to_grid(&self, cells: usize) -> Result<GridField> {
        match self {
            LabSample::Grid(g) => Ok(g.clone()),
            LabSample::Closed(h) => GridField::from_fn(cells, |x, y| h.eval(x, y)),
        }
    }
}

impl Sample for LabSample {
    fn sup_on_ball(&self, center: Point, radius: f64) -> Result<f64> {
        match self {
            LabSample::Grid(g) => g.sup_on_ball(center, radius),
            LabSample::Closed(h) => h.sup_on_ball(center, radius),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sups() {
        let q = Harmonic::monomial(2);
        assert!((q.sup_on_ball(Point::ORIGIN, 0.5).unwrap() - 0.25).abs() < 1e-15);
        for d in 1..=10 {
            let rho: f64 = 0.3;
            let s = Harmonic::monomial(d)
                .sup_on_ball(Point::ORIGIN, rho)
                .unwrap();
            assert!((s - rho.powi(d as i32)).abs() <= 1e-15 * s, "d = {d}");
        }
        let zero = Harmonic::constant(0.0);
        assert_eq!(zero.sup_on_ball(Point::new(0.2, -0.1), 0.3).unwrap(), 0.0);
    }

    #[test]
    fn grid_sup_includes_nodes_on_circle() {
        let g = GridField::from_fn(64, |x, y| x * x - y * y).unwrap();
        // x = 0.5 is a node, so the sup on radius 0.5 is exactly 0.25
        assert_eq!(g.sup_on_ball(Point::ORIGIN, 0.5).unwrap(), 0.25);
        let zero = GridField::from_fn(32, |_, _| 0.0).unwrap();
        assert_eq!(zero.sup_on_ball(Point::new(0.5, 0.5), 0.25).unwrap(), 0.0);
    }

    #[test]
    fn ball_must_fit() {
        let g = GridField::from_fn(32, |x, _| x).unwrap();
        assert!(matches!(
            g.sup_on_ball(Point::new(0.5, 0.0), 0.6),
            Err(Error::Geometry { .. })
        ));
        assert!(g.sup_on_ball(Point::ORIGIN, 1.0).is_ok());
        assert!(g.sup_on_ball(Point::ORIGIN, 0.0).is_err());
        assert!(Harmonic::monomial(1)
            .sup_on_ball(Point::new(0.0, 0.9), 0.2)
            .is_err());
    }

    #[test]
    fn sup_grows_with_radius() {
        let g = GridField::from_fn(64, |x, y| (3.0 * x).sin() * (3.0 * y).cosh()).unwrap();
        let c = Point::new(0.1, -0.2);
        let mut prev = 0.0;
        for k in 1..=25 {
            let s = g.sup_on_ball(c, 0.03 * k as f64).unwrap();
            assert!(s >= prev);
            prev = s;
        }
    }
}
