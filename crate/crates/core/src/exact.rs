//! Exact rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::sign::Sign;

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rat], k: &Rat) -> RatVec {
    a.iter().map(|x| x * k).collect()
}

/// `(1 - t) a + t b`
pub fn lerp(a: &[Rat], b: &[Rat], t: &Rat) -> RatVec {
    let s = Rat::one() - t;
    a.iter().zip(b).map(|(x, y)| x * &s + y * t).collect()
}

pub fn centroid(points: &[RatVec]) -> RatVec {
    assert!(!points.is_empty());
    let d = points[0].len();
    let mut c = vec![Rat::zero(); d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let k = rat(points.len() as i64);
    c.iter().map(|x| x / &k).collect()
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(m: &mut [RatVec]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RatVec]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[RatVec]) -> Rat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &factor * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    d
}

pub fn det_sign(rows: &[RatVec]) -> Sign {
    Sign::of(&det(rows))
}

/// Basis of the right null space `{x : M x = 0}`.
pub fn nullspace(rows: &[RatVec], cols: usize) -> Vec<RatVec> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); cols];
            x[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Solves the square system `M x = b`, if `M` is nonsingular.
pub fn solve(rows: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let n = rows.len();
    let mut m: Vec<RatVec> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

/// Hyperplane `a·x = b` through `d` affinely independent points of `R^d`.
/// The normal is scaled to a primitive integer vector.
pub fn hyperplane_through(points: &[RatVec]) -> Option<(RatVec, Rat)> {
    let d = points[0].len();
    if points.len() != d {
        return None;
    }
    let diffs: Vec<RatVec> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let ns = nullspace(&diffs, d);
    if ns.len() != 1 {
        return None;
    }
    let normal = primitive(&ns[0]);
    let offset = dot(&normal, &points[0]);
    Some((normal, offset))
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Rat]) -> RatVec {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}
