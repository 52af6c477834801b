//! Seeded samplers of superperiodic operators.
//!
//! * quiddity: triangulate a convex `n`-gon at random, count triangles per
//!   vertex, `L = T^{-2} + a_i T^{-1}` (exact, order 2);
//! * gale-of-quiddity: the Gale dual of the above (exact, order `n - 2`);
//! * polygon-lift: lift a random polygon on the moment curve so that all
//!   consecutive `(k+1) x (k+1)` determinants equal one and read off the
//!   recursion coefficients (floating point, any order).

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::DifferenceOperator;
use crate::superperiodic::{dual_pair, superperiodic_residual};
use crate::{rat, Operator, OperatorF64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorSource {
    Quiddity,
    PolygonLift,
    GaleOfQuiddity,
}

impl GeneratorSource {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorSource::Quiddity => "quiddity",
            GeneratorSource::PolygonLift => "polygon-lift",
            GeneratorSource::GaleOfQuiddity => "gale-of-quiddity",
        }
    }
}

impl fmt::Display for GeneratorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quiddity" | "g1" => Ok(GeneratorSource::Quiddity),
            "polygon-lift" | "g2" => Ok(GeneratorSource::PolygonLift),
            "gale-of-quiddity" | "g3" => Ok(GeneratorSource::GaleOfQuiddity),
            other => Err(Error::Parse(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratedOperator {
    Exact(Operator),
    Approx(OperatorF64),
}

/// Default acceptance tolerance of the polygon lift.
pub const LIFT_TOLERANCE: f64 = 1e-9;
const LIFT_ATTEMPTS: usize = 64;

/// Triangle counts per vertex for a list of triangles on vertices `0..n`.
pub fn quiddity_from_triangles(n: usize, triangles: &[[usize; 3]]) -> Vec<u32> {
    let mut q = vec![0; n];
    for t in triangles {
        for &v in t {
            q[v] += 1;
        }
    }
    q
}

/// All diagonals from `apex`.
pub fn fan_triangulation(n: usize, apex: usize) -> Vec<[usize; 3]> {
    (1..n - 1).map(|t| [apex, (apex + t) % n, (apex + t + 1) % n]).collect()
}

/// A random triangulation by repeated ear clipping; every vertex of a
/// convex polygon is an ear.
pub fn random_triangulation(n: usize, rng: &mut impl Rng) -> Vec<[usize; 3]> {
    let mut verts: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n.saturating_sub(2));
    while verts.len() > 3 {
        let len = verts.len();
        let t = rng.gen_range(0..len);
        out.push([verts[(t + len - 1) % len], verts[t], verts[(t + 1) % len]]);
        verts.remove(t);
    }
    if verts.len() == 3 {
        out.push([verts[0], verts[1], verts[2]]);
    }
    out
}

/// `L = T^{-2} + a_i T^{-1}`.
pub fn quiddity_operator(quiddity: &[i64]) -> Result<Operator> {
    if quiddity.is_empty() {
        return Err(Error::ZeroPeriod);
    }
    let row: Vec<Rational> = quiddity.iter().map(|&a| rat(a)).collect();
    DifferenceOperator::triangular(quiddity.len(), &[row])
}

fn check_parameters(k: usize, n: usize) -> Result<()> {
    if n.gcd(&(k + 1)) != 1 {
        return Err(Error::NotCoprime { n, order: k + 1 });
    }
    if k + 1 >= n {
        return Err(Error::OrderTooLarge { order: k + 1, n });
    }
    Ok(())
}

pub fn generate_quiddity(n: usize, seed: u64) -> Result<(Vec<u32>, Operator)> {
    check_parameters(1, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = quiddity_from_triangles(n, &random_triangulation(n, &mut rng));
    let l = quiddity_operator(&q.iter().map(|&a| a as i64).collect::<Vec<_>>())?;
    Ok((q, l))
}

pub fn generate_gale_of_quiddity(n: usize, seed: u64) -> Result<Operator> {
    let (_, l) = generate_quiddity(n, seed)?;
    Ok(dual_pair(&l)?.gale)
}

/// Floating-point sampler for arbitrary `k`; the result passes the
/// superperiodicity test to within `tolerance`.
pub fn generate_polygon_lift(k: usize, n: usize, seed: u64, tolerance: f64) -> Result<OperatorF64> {
    check_parameters(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LIFT_ATTEMPTS {
        if let Some(l) = try_lift(k, n, &mut rng, tolerance) {
            return Ok(l);
        }
    }
    Err(Error::Generator(format!("polygon lift stayed degenerate after {LIFT_ATTEMPTS} attempts")))
}

fn try_lift(k: usize, n: usize, rng: &mut impl Rng, tolerance: f64) -> Option<OperatorF64> {
    let m = k + 1;
    let ni = n as i64;
    // jittered, increasing abscissae keep every moment-curve minor positive
    let xs: Vec<f64> = (0..n)
        .map(|i| -1.0 + 2.0 * (i as f64 + 0.5 + 0.8 * (rng.gen::<f64>() - 0.5)) / n as f64)
        .collect();
    let mut points: Vec<Vec<f64>> = xs.iter().map(|&x| (0..m).map(|p| x.powi(p as i32)).collect()).collect();
    // P_{i+n} = (-1)^k P_i
    let point = |pts: &[Vec<f64>], i: i64| -> Vec<f64> {
        let (t, r) = (i.div_euclid(ni), i.rem_euclid(ni) as usize);
        let s = if (k as i64 * t) % 2 == 0 { 1.0 } else { -1.0 };
        pts[r].iter().map(|x| s * x).collect()
    };
    let minor = |pts: &[Vec<f64>], i: i64| -> f64 {
        let cols: Vec<Vec<f64>> = (0..m as i64).map(|c| point(pts, i - k as i64 + c)).collect();
        Matrix::from_fn(m, m, |r, c| cols[c][r]).field_determinant()
    };
    let mut d: Vec<f64> = (0..ni).map(|i| minor(&points, i)).collect();
    if d.iter().any(|x| x.abs() < 1e-8) || !(d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0)) {
        return None;
    }
    if d[0] < 0.0 {
        for p in &mut points {
            p[0] = -p[0];
        }
        d.iter_mut().for_each(|x| *x = -*x);
    }
    // prod_{j=0..k} t_{i-j} = 1 / d_i, solved in logarithms
    let circulant = Matrix::from_fn(n, n, |i, c| if (0..m).any(|j| (i + n - j) % n == c) { 1.0 } else { 0.0 });
    let rhs: Vec<f64> = d.iter().map(|x| -x.ln()).collect();
    let u = circulant.solve(&rhs)?;
    let lifted = |i: i64| -> Vec<f64> {
        let t = u[i.rem_euclid(ni) as usize].exp();
        point(&points, i).into_iter().map(|x| t * x).collect()
    };
    // V_i = sum_{j=1..k+1} beta_j V_{i-j}
    let mut rows = vec![vec![0.0; n]; k];
    for i in 0..ni {
        let cols: Vec<Vec<f64>> = (1..=m as i64).map(|j| lifted(i - j)).collect();
        let beta = Matrix::from_fn(m, m, |r, c| cols[c][r]).solve(&lifted(i))?;
        let last = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        if (beta[k] - last).abs() > tolerance.max(1e-12) * 1e3 {
            return None;
        }
        for j in 1..=k {
            let s = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
            rows[j - 1][i as usize] = s * beta[j - 1];
        }
    }
    let l = DifferenceOperator::triangular(n, &rows).ok()?;
    (superperiodic_residual(&l).ok()? <= tolerance).then_some(l)
}

/// Dispatches on the source; `k` is the order minus one of the result.
pub fn generate_superperiodic(k: usize, n: usize, source: GeneratorSource, seed: u64) -> Result<GeneratedOperator> {
    match source {
        GeneratorSource::Quiddity => {
            if k != 1 {
                return Err(Error::OrderMismatch { expected: 2, found: k + 1 });
            }
            Ok(GeneratedOperator::Exact(generate_quiddity(n, seed)?.1))
        }
        GeneratorSource::GaleOfQuiddity => {
            if k + 3 != n {
                return Err(Error::OrderMismatch { expected: n.saturating_sub(2), found: k + 1 });
            }
            Ok(GeneratedOperator::Exact(generate_gale_of_quiddity(n, seed)?))
        }
        GeneratorSource::PolygonLift => {
            Ok(GeneratedOperator::Approx(generate_polygon_lift(k, n, seed, LIFT_TOLERANCE)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superperiodic::is_superperiodic;

    #[test]
    fn fan_quiddity() {
        let q = quiddity_from_triangles(5, &fan_triangulation(5, 1));
        assert_eq!(q, vec![1, 3, 1, 2, 2]);
        assert!(is_superperiodic(&quiddity_operator(&[1, 3, 1, 2, 2]).unwrap()).unwrap());
    }

    #[test]
    fn random_quiddities_are_superperiodic() {
        for n in [3, 5, 7, 9, 11] {
            for seed in 0..10 {
                let (q, l) = generate_quiddity(n, seed).unwrap();
                assert_eq!(q.iter().sum::<u32>() as usize, 3 * (n - 2));
                assert!(is_superperiodic(&l).unwrap(), "n={n} seed={seed} q={q:?}");
            }
        }
        assert_eq!(generate_quiddity(4, 0).unwrap_err(), Error::NotCoprime { n: 4, order: 2 });
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(generate_quiddity(11, 42).unwrap(), generate_quiddity(11, 42).unwrap());
        let a = generate_polygon_lift(2, 7, 9, LIFT_TOLERANCE).unwrap();
        let b = generate_polygon_lift(2, 7, 9, LIFT_TOLERANCE).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gale_of_quiddity_has_order_n_minus_two() {
        let l = generate_gale_of_quiddity(7, 3).unwrap();
        assert_eq!(l.order().unwrap(), 5);
        assert!(is_superperiodic(&l).unwrap());
    }

    #[test]
    fn polygon_lift_orders() {
        for (k, n) in [(1, 5), (2, 5), (2, 7), (3, 7), (4, 7), (2, 8), (4, 9)] {
            let l = generate_polygon_lift(k, n, 5, LIFT_TOLERANCE).unwrap();
            assert_eq!(l.order().unwrap(), k + 1);
            assert!(superperiodic_residual(&l).unwrap() <= LIFT_TOLERANCE);
        }
    }

    #[test]
    fn source_names_round_trip() {
        for s in [GeneratorSource::Quiddity, GeneratorSource::PolygonLift, GeneratorSource::GaleOfQuiddity] {
            assert_eq!(s.name().parse::<GeneratorSource>().unwrap(), s);
        }
    }
}
