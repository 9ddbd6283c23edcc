//! Data parameterization, least-squares control-point fitting and the error
//! metrics used as the fitness signal.

mod lsq;

use std::fmt;
use std::str::FromStr;

use crate::bspline::{BSplineCurve, KnotVector, Point};
use crate::error::{domain, Error, Result};
use crate::Scalar;

use lsq::BandedLeastSquares;

/// Smallest Euclidean distance used when forming a cost; keeps the fitness of
/// an exact fit finite.
pub const DISTANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Parameterization {
    Uniform,
    ChordLength,
    #[default]
    Centripetal,
}

impl Parameterization {
    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::ChordLength => "chord",
            Self::Centripetal => "centripetal",
        }
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameterization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "chord" | "chord_length" | "chord-length" => Ok(Self::ChordLength),
            "centripetal" => Ok(Self::Centripetal),
            other => domain(format!("unknown parameterization `{other}`")),
        }
    }
}

/// One parameter per data point: strictly increasing from exactly 0 to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterAssignment<T> {
    params: Vec<T>,
    method: Parameterization,
}

impl<T: Scalar> ParameterAssignment<T> {
    pub fn new(params: Vec<T>, method: Parameterization) -> Result<Self> {
        if params.len() < 2 {
            return domain("at least two parameters are required");
        }
        if params[0] != T::zero() || params[params.len() - 1] != T::one() {
            return domain("parameters must start at 0 and end at 1");
        }
        if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
            return domain(format!("parameters not strictly increasing at {}", i + 1));
        }
        Ok(Self { params, method })
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn method(&self) -> Parameterization {
        self.method
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

/// Assigns parameters in `[0, 1]` to an ordered point sequence.
pub fn parameterize<T: Scalar, const D: usize>(
    points: &[Point<T, D>],
    method: Parameterization,
) -> Result<ParameterAssignment<T>> {
    if points.len() < 2 {
        return domain(format!("need at least 2 points, got {}", points.len()));
    }
    let mut increments = Vec::with_capacity(points.len() - 1);
    for (i, w) in points.windows(2).enumerate() {
        let chord = w[0].distance(&w[1]);
        if chord == T::zero() {
            return domain(format!("points {i} and {} coincide", i + 1));
        }
        if !chord.is_finite() {
            return domain(format!("non-finite coordinates near point {i}"));
        }
        increments.push(match method {
            Parameterization::Uniform => T::one(),
            Parameterization::ChordLength => chord,
            Parameterization::Centripetal => chord.sqrt(),
        });
    }
    let total: T = increments.iter().copied().sum();
    let mut params = Vec::with_capacity(points.len());
    params.push(T::zero());
    let mut acc = T::zero();
    for inc in &increments[..increments.len() - 1] {
        acc = acc + *inc;
        params.push(acc / total);
    }
    params.push(T::one());
    ParameterAssignment::new(params, method)
}

/// Control points minimizing `Σ ||C(i) - P(u_i)||²`, each coordinate solved
/// independently over the full (unconstrained) control polygon.
pub fn least_squares_fit<T: Scalar, const D: usize>(
    points: &[Point<T, D>],
    assignment: &ParameterAssignment<T>,
    knot_vector: &KnotVector<T>,
) -> Result<BSplineCurve<T, D>> {
    if points.len() != assignment.len() {
        return domain(format!(
            "{} points but {} parameters",
            points.len(),
            assignment.len()
        ));
    }
    let n = knot_vector.control_point_count();
    if points.len() < n {
        return Err(Error::InfeasibleFit(format!(
            "{} points cannot determine {n} control points",
            points.len()
        )));
    }
    let width = knot_vector.degree() + 1;
    let mut lsq = BandedLeastSquares::<T, D>::new(n, width);
    let (mut basis, mut left, mut right) = (
        vec![T::zero(); width],
        vec![T::zero(); width],
        vec![T::zero(); width],
    );
    for (point, &u) in points.iter().zip(assignment.params()) {
        if !knot_vector.contains(u) {
            return domain(format!("parameter {u} outside the knot domain"));
        }
        let span = knot_vector.find_span(u);
        knot_vector.nonzero_basis_into(span, u, &mut basis, &mut left, &mut right);
        lsq.add_row(span + 1 - width, &basis, point.0);
    }
    let control_points = lsq.solve()?.into_iter().map(Point).collect();
    BSplineCurve::new(knot_vector.clone(), control_points)
}

fn squared_residuals<T: Scalar, const D: usize>(
    original: &[Point<T, D>],
    fitted: &BSplineCurve<T, D>,
    assignment: &ParameterAssignment<T>,
) -> Result<T> {
    if original.len() != assignment.len() {
        return domain(format!(
            "{} points but {} parameters",
            original.len(),
            assignment.len()
        ));
    }
    let on_curve = fitted.eval_many(assignment.params())?;
    Ok(original
        .iter()
        .zip(&on_curve)
        .map(|(c, b)| c.distance_sq(b))
        .sum())
}

/// `D = sqrt(Σ ||C(i) - B(i)||²)` with `B(i)` the curve at the i-th data parameter.
pub fn euclidean_distance<T: Scalar, const D: usize>(
    original: &[Point<T, D>],
    fitted: &BSplineCurve<T, D>,
    assignment: &ParameterAssignment<T>,
) -> Result<T> {
    squared_residuals(original, fitted, assignment).map(|s| s.sqrt())
}

/// Root mean squared point error, `D / sqrt(L)`.
pub fn rmse<T: Scalar, const D: usize>(
    original: &[Point<T, D>],
    fitted: &BSplineCurve<T, D>,
    assignment: &ParameterAssignment<T>,
) -> Result<T> {
    let d = euclidean_distance(original, fitted, assignment)?;
    Ok(d / T::from_count(original.len()).sqrt())
}

/// Metrics of one fitted curve against its data.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<T, const D: usize> {
    pub curve: BSplineCurve<T, D>,
    pub euclidean_distance: f64,
    pub rmse: f64,
    pub control_point_count: usize,
    /// `control_point_count * max(euclidean_distance, DISTANCE_FLOOR)`.
    pub cost: f64,
    /// `1 / cost`.
    pub fitness: f64,
}

impl<T: Scalar, const D: usize> FitReport<T, D> {
    pub fn new(
        curve: BSplineCurve<T, D>,
        original: &[Point<T, D>],
        assignment: &ParameterAssignment<T>,
    ) -> Result<Self> {
        let distance = euclidean_distance(original, &curve, assignment)?.as_f64();
        let control_point_count = curve.control_points().len();
        let cost = control_point_count as f64 * distance.max(DISTANCE_FLOOR);
        Ok(Self {
            rmse: distance / (original.len() as f64).sqrt(),
            euclidean_distance: distance,
            control_point_count,
            cost,
            fitness: 1.0 / cost,
            curve,
        })
    }

    /// Fits `points` on `knot_vector` and measures the result.
    pub fn fit(
        points: &[Point<T, D>],
        assignment: &ParameterAssignment<T>,
        knot_vector: &KnotVector<T>,
    ) -> Result<Self> {
        let curve = least_squares_fit(points, assignment, knot_vector)?;
        Self::new(curve, points, assignment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_clamped_knot_vector;
    use approx::assert_abs_diff_eq;

    fn pts(raw: &[[f64; 2]]) -> Vec<Point<f64, 2>> {
        raw.iter().copied().map(Point).collect()
    }

    #[test]
    fn parameterization_examples() {
        let a = parameterize(
            &pts(&[[0., 0.], [1., 0.], [2., 0.]]),
            Parameterization::Centripetal,
        )
        .unwrap();
        assert_eq!(a.params(), &[0.0, 0.5, 1.0]);
        let skewed = pts(&[[0., 0.], [4., 0.], [5., 0.]]);
        let a = parameterize(&skewed, Parameterization::Centripetal).unwrap();
        assert_abs_diff_eq!(a.params()[1], 2.0 / 3.0, epsilon = 1e-15);
        let a = parameterize(&skewed, Parameterization::ChordLength).unwrap();
        assert_abs_diff_eq!(a.params()[1], 0.8, epsilon = 1e-15);
        let a = parameterize(&skewed, Parameterization::Uniform).unwrap();
        assert_eq!(a.params(), &[0.0, 0.5, 1.0]);
        assert_eq!(a.method(), Parameterization::Uniform);
    }

    #[test]
    fn parameterization_errors() {
        assert!(parameterize(&pts(&[[0., 0.]]), Parameterization::Centripetal).is_err());
        let dup = pts(&[[0., 0.], [1., 1.], [1., 1.], [2., 0.]]);
        for m in [
            Parameterization::Uniform,
            Parameterization::ChordLength,
            Parameterization::Centripetal,
        ] {
            assert!(matches!(parameterize(&dup, m), Err(Error::Domain(_))));
        }
        assert!(
            ParameterAssignment::new(vec![0.0, 0.5, 0.5, 1.0], Parameterization::Uniform).is_err()
        );
        assert!(ParameterAssignment::new(vec![0.1, 1.0], Parameterization::Uniform).is_err());
    }

    #[test]
    fn parse_method_names() {
        assert_eq!(
            "chord".parse::<Parameterization>().unwrap(),
            Parameterization::ChordLength
        );
        assert_eq!(
            "centripetal".parse::<Parameterization>().unwrap(),
            Parameterization::Centripetal
        );
        assert!("arc".parse::<Parameterization>().is_err());
    }

    #[test]
    fn distance_examples() {
        // constant curve at (3, 4) against the origin
        let kv = build_clamped_knot_vector::<f64>(&[], 3).unwrap();
        let curve = BSplineCurve::new(kv.clone(), vec![Point([3.0, 4.0]); 4]).unwrap();
        let one = ParameterAssignment::new(vec![0.0, 1.0], Parameterization::Uniform).unwrap();
        let d = euclidean_distance(&pts(&[[0., 0.], [3., 4.]]), &curve, &one).unwrap();
        assert_abs_diff_eq!(d, 5.0, epsilon = 1e-14);

        // two points each offset by (1, 0) from a line
        let line = BSplineCurve::new(
            kv,
            vec![
                Point([0.0, 0.0]),
                Point([1.0, 0.0]),
                Point([2.0, 0.0]),
                Point([3.0, 0.0]),
            ],
        )
        .unwrap();
        let data = pts(&[[1., 0.], [4., 0.]]);
        let d = euclidean_distance(&data, &line, &one).unwrap();
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(rmse(&data, &line, &one).unwrap(), 1.0, epsilon = 1e-14);

        assert!(euclidean_distance(&data[..1], &line, &one).is_err());
    }

    #[test]
    fn rmse_of_uniform_offsets() {
        let kv = build_clamped_knot_vector::<f64>(&[], 3).unwrap();
        let curve = BSplineCurve::new(kv, vec![Point([0.0, 0.0]); 4]).unwrap();
        let a =
            ParameterAssignment::new(vec![0.0, 0.2, 0.7, 1.0], Parameterization::Uniform).unwrap();
        let data = pts(&[[2., 0.], [0., 2.], [-2., 0.], [0., -2.]]);
        assert_abs_diff_eq!(rmse(&data, &curve, &a).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            euclidean_distance(&data, &curve, &a).unwrap(),
            4.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn square_system_interpolates() {
        let data = pts(&[[0., 0.], [1., 2.], [2., -1.], [3., 3.], [5., 0.]]);
        let a = parameterize(&data, Parameterization::Centripetal).unwrap();
        let kv = build_clamped_knot_vector(&[a.params()[2]], 3).unwrap();
        let report = FitReport::fit(&data, &a, &kv).unwrap();
        assert_eq!(report.control_point_count, 5);
        assert!(report.euclidean_distance <= 1e-9);
        assert_abs_diff_eq!(
            report.cost,
            5.0 * report.euclidean_distance.max(DISTANCE_FLOOR)
        );
    }

    #[test]
    fn too_few_points_is_infeasible() {
        let data = pts(&[[0., 0.], [1., 2.], [2., -1.]]);
        let a = parameterize(&data, Parameterization::Centripetal).unwrap();
        let kv = build_clamped_knot_vector::<f64>(&[], 3).unwrap();
        assert!(matches!(
            least_squares_fit(&data, &a, &kv),
            Err(Error::InfeasibleFit(_))
        ));
    }

    #[test]
    fn collinear_data_stays_on_the_line() {
        let data: Vec<_> = (0..12)
            .map(|i| {
                let s = (i as f64).powf(1.3);
                Point([1.0 + 2.0 * s, -3.0 + 0.5 * s])
            })
            .collect();
        let a = parameterize(&data, Parameterization::Centripetal).unwrap();
        let kv = build_clamped_knot_vector(&[0.3, 0.55], 3).unwrap();
        let report = FitReport::fit(&data, &a, &kv).unwrap();
        for cp in report.curve.control_points() {
            // 0.5 x - 2 y = 6.5 on the line
            assert_abs_diff_eq!(0.5 * cp[0] - 2.0 * cp[1], 6.5, epsilon = 1e-9);
        }

        // evenly spaced samples make the parameterization affine in arc length
        let even: Vec<_> = (0..12)
            .map(|i| Point([1.0 + 2.0 * i as f64, -3.0 + 0.5 * i as f64]))
            .collect();
        let a = parameterize(&even, Parameterization::Centripetal).unwrap();
        let report = FitReport::fit(&even, &a, &kv).unwrap();
        assert!(report.euclidean_distance <= 1e-9);
    }
}
