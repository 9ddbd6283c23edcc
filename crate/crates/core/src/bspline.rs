//! B-spline basis functions, clamped knot vectors and curve evaluation.
//!
//! Basis functions use half-open spans `[t_i, t_{i+1})`, except that the last
//! non-degenerate span is closed on the right so every curve is defined on the
//! whole closed domain. Any `0/0` term of the recursion evaluates to zero.

use std::ops::{Add, Index, Mul, Sub};

use crate::error::{domain, Result};
use crate::Scalar;

/// A point (or control point) with `D` real coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T, const D: usize>(pub [T; D]);

impl<T: Scalar, const D: usize> Point<T, D> {
    pub const fn new(coords: [T; D]) -> Self {
        Self(coords)
    }

    pub fn origin() -> Self {
        Self([T::zero(); D])
    }

    pub fn coords(&self) -> &[T; D] {
        &self.0
    }

    pub fn distance_sq(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum()
    }

    pub fn distance(&self, other: &Self) -> T {
        self.distance_sq(other).sqrt()
    }
}

impl<T, const D: usize> Index<usize> for Point<T, D> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar, const D: usize> Add for Point<T, D> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a = *a + b;
        }
        self
    }
}

impl<T: Scalar, const D: usize> Sub for Point<T, D> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a = *a - b;
        }
        self
    }
}

impl<T: Scalar, const D: usize> Mul<T> for Point<T, D> {
    type Output = Self;

    fn mul(mut self, rhs: T) -> Self {
        for a in self.0.iter_mut() {
            *a = *a * rhs;
        }
        self
    }
}

impl<T, const D: usize> From<[T; D]> for Point<T, D> {
    fn from(coords: [T; D]) -> Self {
        Self(coords)
    }
}

/// Clamped, non-decreasing knot sequence of a degree-`p` B-spline.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector<T> {
    knots: Vec<T>,
    degree: usize,
}

impl<T: Scalar> KnotVector<T> {
    /// Validates a clamped knot sequence: non-decreasing, the first and last
    /// `degree + 1` knots equal, a non-empty domain, and at least `degree + 1`
    /// implied control points.
    pub fn new(knots: Vec<T>, degree: usize) -> Result<Self> {
        let order = degree + 1;
        if knots.len() < 2 * order {
            return domain(format!(
                "{} knots cannot carry a degree {degree} spline (need at least {})",
                knots.len(),
                2 * order
            ));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return domain("knots must be finite");
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] < w[0]) {
            return domain(format!("knot {} decreases", i + 1));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if !(first < last) {
            return domain("empty knot domain");
        }
        if knots[..order].iter().any(|&k| k != first)
            || knots[knots.len() - order..].iter().any(|&k| k != last)
        {
            return domain(format!("end knots must have multiplicity {order}"));
        }
        Ok(Self { knots, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn control_point_count(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Knots strictly between the clamped ends.
    pub fn interior(&self) -> &[T] {
        &self.knots[self.degree + 1..self.knots.len() - self.degree - 1]
    }

    pub fn domain(&self) -> (T, T) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn contains(&self, u: T) -> bool {
        let (lo, hi) = self.domain();
        u >= lo && u <= hi
    }

    fn check_domain(&self, u: T) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            domain(format!("parameter {u} outside knot domain [{lo}, {hi}]"))
        }
    }

    /// Index `s` of the span with `t_s <= u < t_{s+1}`; the right end of the
    /// domain maps to the last non-degenerate span. `u` must lie in the domain.
    pub fn find_span(&self, u: T) -> usize {
        let n = self.control_point_count();
        let p = self.degree;
        if u >= self.knots[n] {
            return n - 1;
        }
        if u <= self.knots[p] {
            return p;
        }
        // first knot strictly greater than u, within t_{p+1}..=t_n
        let upper = p + 1 + self.knots[p + 1..=n].partition_point(|&k| k <= u);
        upper - 1
    }

    /// The `degree + 1` basis values that can be nonzero on `span`, i.e.
    /// `N_{span-p..=span, p}(u)`, written into `out`. `left` and `right` are
    /// scratch buffers of the same length as `out`.
    pub fn nonzero_basis_into(
        &self,
        span: usize,
        u: T,
        out: &mut [T],
        left: &mut [T],
        right: &mut [T],
    ) {
        let p = self.degree;
        debug_assert!(out.len() == p + 1 && left.len() == p + 1 && right.len() == p + 1);
        // at a clamped end the triangle computes x * (1 / x), which may miss 1
        let (lo, hi) = self.domain();
        if u == lo || u == hi {
            out.iter_mut().for_each(|v| *v = T::zero());
            out[if u == lo { 0 } else { p }] = T::one();
            return;
        }
        out[0] = T::one();
        for j in 1..=p {
            left[j] = u - self.knots[span + 1 - j];
            right[j] = self.knots[span + j] - u;
            let mut saved = T::zero();
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom == T::zero() {
                    T::zero()
                } else {
                    out[r] / denom
                };
                out[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            out[j] = saved;
        }
    }

    /// Convenience wrapper around [`Self::nonzero_basis_into`]; returns the
    /// span and the nonzero basis values.
    pub fn nonzero_basis(&self, u: T) -> Result<(usize, Vec<T>)> {
        self.check_domain(u)?;
        let span = self.find_span(u);
        let n = self.degree + 1;
        let (mut out, mut left, mut right) =
            (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
        self.nonzero_basis_into(span, u, &mut out, &mut left, &mut right);
        Ok((span, out))
    }
}

/// `N_{i,p}(u)` by the Cox–de Boor recursion on `knot_vector`.
///
/// `p` may be lower than the knot vector's own degree; the recursion only
/// needs `t_i ..= t_{i+p+1}`.
pub fn basis_eval<T: Scalar>(knot_vector: &KnotVector<T>, i: usize, p: usize, u: T) -> Result<T> {
    let t = knot_vector.knots();
    if i + p + 2 > t.len() {
        return domain(format!(
            "basis index {i} out of range for degree {p} on {} knots",
            t.len()
        ));
    }
    knot_vector.check_domain(u)?;
    Ok(cox_de_boor(t, i, p, u))
}

fn cox_de_boor<T: Scalar>(t: &[T], i: usize, p: usize, u: T) -> T {
    if p == 0 {
        let last = t[t.len() - 1];
        let inside = t[i] <= u && u < t[i + 1];
        let closing = u == last && t[i] < t[i + 1] && t[i + 1] == last;
        return if inside || closing {
            T::one()
        } else {
            T::zero()
        };
    }
    let ratio = |num: T, den: T| {
        if den == T::zero() {
            T::zero()
        } else {
            num / den
        }
    };
    let left = ratio(u - t[i], t[i + p] - t[i]);
    let right = ratio(t[i + p + 1] - u, t[i + p + 1] - t[i + 1]);
    let mut value = T::zero();
    if left != T::zero() {
        value = value + left * cox_de_boor(t, i, p - 1, u);
    }
    if right != T::zero() {
        value = value + right * cox_de_boor(t, i + 1, p - 1, u);
    }
    value
}

/// `[0; p+1] ++ interior ++ [1; p+1]`.
pub fn build_clamped_knot_vector<T: Scalar>(interior: &[T], p: usize) -> Result<KnotVector<T>> {
    if let Some(k) = interior.iter().find(|&&k| !(k > T::zero() && k < T::one())) {
        return domain(format!("interior knot {k} not strictly inside (0, 1)"));
    }
    if let Some(i) = interior.windows(2).position(|w| w[1] < w[0]) {
        return domain(format!("interior knots decrease at position {}", i + 1));
    }
    let mut knots = Vec::with_capacity(interior.len() + 2 * (p + 1));
    knots.extend(std::iter::repeat_n(T::zero(), p + 1));
    knots.extend_from_slice(interior);
    knots.extend(std::iter::repeat_n(T::one(), p + 1));
    KnotVector::new(knots, p)
}

/// `P(u) = Σ p_i N_{i,p}(u)` over a clamped knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BSplineCurve<T, const D: usize> {
    knot_vector: KnotVector<T>,
    control_points: Vec<Point<T, D>>,
}

impl<T: Scalar, const D: usize> BSplineCurve<T, D> {
    pub fn new(knot_vector: KnotVector<T>, control_points: Vec<Point<T, D>>) -> Result<Self> {
        let expected = knot_vector.control_point_count();
        if control_points.len() != expected {
            return domain(format!(
                "knot vector implies {expected} control points, got {}",
                control_points.len()
            ));
        }
        Ok(Self {
            knot_vector,
            control_points,
        })
    }

    pub fn degree(&self) -> usize {
        self.knot_vector.degree()
    }

    pub fn knot_vector(&self) -> &KnotVector<T> {
        &self.knot_vector
    }

    pub fn control_points(&self) -> &[Point<T, D>] {
        &self.control_points
    }

    pub fn domain(&self) -> (T, T) {
        self.knot_vector.domain()
    }

    pub fn eval(&self, u: T) -> Result<Point<T, D>> {
        let (span, basis) = self.knot_vector.nonzero_basis(u)?;
        Ok(self.combine(span, &basis))
    }

    /// Evaluates at many parameters, reusing scratch buffers.
    pub fn eval_many(&self, params: &[T]) -> Result<Vec<Point<T, D>>> {
        let n = self.degree() + 1;
        let (mut out, mut left, mut right) =
            (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
        params
            .iter()
            .map(|&u| {
                self.knot_vector.check_domain(u)?;
                let span = self.knot_vector.find_span(u);
                self.knot_vector
                    .nonzero_basis_into(span, u, &mut out, &mut left, &mut right);
                Ok(self.combine(span, &out))
            })
            .collect()
    }

    /// `count` points at equally spaced parameters over the whole domain.
    pub fn sample(&self, count: usize) -> Vec<Point<T, D>> {
        let (lo, hi) = self.domain();
        let count = count.max(2);
        let step = (hi - lo) / T::from_count(count - 1);
        let params: Vec<T> = (0..count)
            .map(|k| {
                if k + 1 == count {
                    hi
                } else {
                    lo + step * T::from_count(k)
                }
            })
            .collect();
        self.eval_many(&params).expect("samples lie in the domain")
    }

    fn combine(&self, span: usize, basis: &[T]) -> Point<T, D> {
        let first = span - self.degree();
        basis
            .iter()
            .zip(&self.control_points[first..=span])
            .fold(Point::origin(), |acc, (&b, cp)| acc + *cp * b)
    }
}
