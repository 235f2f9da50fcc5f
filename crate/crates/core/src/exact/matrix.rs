use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().ok()?,
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(int_part * &scale + frac_part, scale);
        return Some(if negative { -mag } else { mag });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(p))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        check_dim("RationalMatrix entries", rows * cols, data.len())?;
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds from integer rows; all rows must have equal length.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim("RationalMatrix row", cols, r.len())?;
            data.extend(r.iter().map(|&v| Rational::from_integer(v.into())));
        }
        Self::new(rows.len(), cols, data)
    }

    /// Exact conversion: every finite `f64` is a dyadic rational.
    pub fn from_f64(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_dim("RationalMatrix entries", rows * cols, data.len())?;
        let data = data
            .iter()
            .map(|&v| {
                Rational::from_float(v)
                    .ok_or_else(|| Error::NotExact(format!("non-finite entry {v}")))
            })
            .collect::<Result<_>>()?;
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim("RationalMatrix::mul_vec", self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += a * vj;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn tr_mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim("RationalMatrix::tr_mul_vec", self.rows, v.len())?;
        Ok((0..self.cols)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, vi) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vi.is_zero() {
                        acc += a * vi;
                    }
                }
                acc
            })
            .collect())
    }

    /// Row-major `f64` copy, rounded to nearest.
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Indices of a maximal linearly independent subset of `vectors`, chosen
    /// greedily in order, by exact Gaussian elimination.
    pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
        let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
        let mut chosen = Vec::new();
        for (k, v) in vectors.iter().enumerate() {
            let mut w = v.clone();
            for (pivot, row) in &echelon {
                if !w[*pivot].is_zero() {
                    let f = &w[*pivot] / &row[*pivot];
                    for (wi, ri) in w.iter_mut().zip(row) {
                        if !ri.is_zero() {
                            *wi -= &f * ri;
                        }
                    }
                }
            }
            if let Some(p) = w.iter().position(|x| !x.is_zero()) {
                echelon.push((p, w));
                chosen.push(k);
            }
        }
        chosen
    }

    /// A solution of `Ax = b` with every free variable set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve_particular(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        check_dim("solve_particular rhs", self.rows, b.len())?;
        let mut r: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| {
                let mut row = self.data[i * self.cols..(i + 1) * self.cols].to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        let (pivots, rank) = rref(&mut r, self.cols);
        if r[rank..].iter().any(|row| !row[self.cols].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r[k][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Basis of `{x : Ax = 0}` from the reduced row echelon form, one
    /// vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut r: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let (pivots, _) = rref(&mut r, self.cols);
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[k][free].clone();
                }
                v
            })
            .collect()
    }
}

/// Reduces `rows` in place to reduced row echelon form, pivoting only in
/// the first `cols` columns. Returns the pivot columns and the rank.
fn rref(rows: &mut [Vec<Rational>], cols: usize) -> (Vec<usize>, usize) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows.len() {
            break;
        }
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for v in rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[row].clone();
        for (i, other) in rows.iter_mut().enumerate() {
            if i != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (o, p) in other.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *o -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (pivots, row)
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn is_nonneg(v: &Rational) -> bool {
    !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1.5"), Some(q(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = parse_rational("4/-8").unwrap();
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn products_and_transpose() {
        let a = RationalMatrix::from_int_rows(&[vec![1, -1, 0], vec![0, 0, 1]]).unwrap();
        let x = vec![q(1, 1), q(1, 1), q(0, 1)];
        assert_eq!(a.mul_vec(&x).unwrap(), vec![q(0, 1), q(0, 1)]);
        assert_eq!(
            a.tr_mul_vec(&[q(0, 1), q(1, 1)]).unwrap(),
            vec![q(0, 1), q(0, 1), q(1, 1)]
        );
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.mul_vec(&x[..2]).is_err());
    }

    #[test]
    fn exact_float_conversion() {
        let m = RationalMatrix::from_f64(1, 2, &[0.5, -3.0]).unwrap();
        assert_eq!(m.get(0, 0), &q(1, 2));
        assert!(RationalMatrix::from_f64(1, 1, &[f64::NAN]).is_err());
    }

    #[test]
    fn particular_solutions() {
        let a = RationalMatrix::from_int_rows(&[vec![1, 1, 0], vec![0, 0, 2]]).unwrap();
        let x = a.solve_particular(&[q(3, 1), q(1, 1)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![q(3, 1), q(1, 1)]);
        let dup = RationalMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(dup.solve_particular(&[q(1, 1), q(3, 1)]).unwrap(), None);
        assert!(dup.solve_particular(&[q(1, 1), q(2, 1)]).unwrap().is_some());
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = RationalMatrix::from_int_rows(&[vec![1, 2, 0, -1], vec![2, 4, 1, 0]]).unwrap();
        let basis = a.null_space();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        assert!(RationalMatrix::identity(3).null_space().is_empty());
        assert_eq!(RationalMatrix::zeros(2, 3).null_space().len(), 3);
    }

    #[test]
    fn independent_subset_picks_first_basis() {
        let v = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1)],
            vec![q(2, 1), q(1, 1)],
        ];
        assert_eq!(RationalMatrix::independent_subset(&v), vec![0, 3]);
    }
}
