//! Labeled distance matrices and quasi-metric validation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{check_point_count, Labels, PointSet};
use crate::scalar::Scalar;

/// An `n x n` matrix of distances between labeled points, stored row-major.
///
/// Construction only checks shape. Whether the entries form a quasi-metric is
/// answered by [`validate_quasi_metric`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceMatrix<T> {
    labels: Labels,
    entries: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn new(labels: Labels, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = labels.len();
        check_point_count(n)?;
        if rows.len() != n {
            return Err(Error::RowCountMismatch {
                labels: n,
                rows: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != n {
                return Err(Error::NotSquare {
                    labels: n,
                    row,
                    len: values.len(),
                });
            }
            entries.extend(values);
        }
        Ok(DistanceMatrix { labels, entries })
    }

    /// Builds a matrix from a row-major entry vector of length `n * n`.
    pub fn from_entries(labels: Labels, entries: Vec<T>) -> Result<Self> {
        let n = labels.len();
        check_point_count(n)?;
        if entries.len() != n * n {
            return Err(Error::RowCountMismatch {
                labels: n,
                rows: entries.len() / n.max(1),
            });
        }
        Ok(DistanceMatrix { labels, entries })
    }

    pub fn from_fn(labels: Labels, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let n = labels.len();
        check_point_count(n)?;
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Ok(DistanceMatrix { labels, entries })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let n = self.n();
        self.entries[i * n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.n();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn with_labels(self, labels: Labels) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                got: labels.len(),
            });
        }
        Ok(DistanceMatrix { labels, ..self })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DistanceMatrix<U> {
        DistanceMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }

    /// Moves point `i` to position `perm[i]`; labels stay in place.
    ///
    /// If `perm` is a relabeling `f`, the betweenness of the result is the
    /// image of this matrix's betweenness under `f`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.get(i, j).clone();
            }
        }
        Ok(DistanceMatrix {
            labels: self.labels.clone(),
            entries,
        })
    }

    /// Sum of all entries.
    pub fn total(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
        }
    }
}

impl<T: Scalar + std::fmt::Display> Serialize for DistanceMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<Vec<String>> = (0..self.n())
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("DistanceMatrix", 2)?;
        st.serialize_field("labels", self.labels.as_slice())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// A broken quasi-metric axiom, with the offending indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation<T> {
    /// `d(i,i) != 0`.
    NonZeroDiagonal { point: usize, value: T },
    /// `d(i,j) <= 0` for `i != j`.
    NonPositive { from: usize, to: usize, value: T },
    /// `d(from,to) > d(from,via) + d(via,to)`.
    Triangle {
        from: usize,
        via: usize,
        to: usize,
        direct: T,
        first: T,
        second: T,
    },
}

impl<T: Scalar + std::fmt::Display> Violation<T> {
    pub fn describe(&self, labels: &Labels) -> String {
        match self {
            Violation::NonZeroDiagonal { point, value } => {
                let p = labels.name(*point);
                format!("d({p},{p}) = {value}, expected 0")
            }
            Violation::NonPositive { from, to, value } => {
                format!(
                    "d({},{}) = {value}, expected > 0",
                    labels.name(*from),
                    labels.name(*to)
                )
            }
            Violation::Triangle {
                from,
                via,
                to,
                direct,
                first,
                second,
            } => {
                let (x, y, z) = (labels.name(*from), labels.name(*via), labels.name(*to));
                format!("triangle ({x},{y},{z}): d({x},{z}) = {direct} > {first} + {second}")
            }
        }
    }
}

/// Outcome of [`validate_quasi_metric`]; empty means the matrix is a quasi-metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation<T> {
    pub violations: Vec<Violation<T>>,
}

impl<T> Validation<T> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the zero diagonal, positive off-diagonal and all `n^3` triangle inequalities.
pub fn validate_quasi_metric<T: Scalar>(m: &DistanceMatrix<T>) -> Validation<T> {
    let n = m.n();
    let zero = T::zero();
    let mut violations = Vec::new();
    for i in 0..n {
        if *m.get(i, i) != zero {
            violations.push(Violation::NonZeroDiagonal {
                point: i,
                value: m.get(i, i).clone(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && *m.get(i, j) <= zero {
                violations.push(Violation::NonPositive {
                    from: i,
                    to: j,
                    value: m.get(i, j).clone(),
                });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let detour = m.get(x, y).clone() + m.get(y, z).clone();
                if *m.get(x, z) > detour {
                    violations.push(Violation::Triangle {
                        from: x,
                        via: y,
                        to: z,
                        direct: m.get(x, z).clone(),
                        first: m.get(x, y).clone(),
                        second: m.get(y, z).clone(),
                    });
                }
            }
        }
    }
    Validation { violations }
}

/// `[xy] = { z | d(x,y) = d(x,z) + d(z,y) }`.
pub fn segment<T: Scalar>(m: &DistanceMatrix<T>, x: usize, y: usize) -> Result<PointSet> {
    m.check_index(x)?;
    m.check_index(y)?;
    if x == y {
        return Err(Error::SamePoint(x));
    }
    Ok((0..m.n())
        .filter(|&z| *m.get(x, y) == m.get(x, z).clone() + m.get(z, y).clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(n: usize) -> Labels {
        Labels::alphabetic(n)
    }

    #[test]
    fn q4_is_a_quasi_metric() {
        let q4 = fixtures::q4_matrix();
        assert!(validate_quasi_metric(&q4).is_ok());
    }

    #[test]
    fn uniform_matrix_is_valid() {
        let m = DistanceMatrix::from_fn(labels(4), |i, j| i64::from(i != j)).unwrap();
        assert!(validate_quasi_metric(&m).is_ok());
    }

    #[test]
    fn reports_triangle_violation_with_witness() {
        // d(a,b)=5, d(a,c)=1, d(c,b)=1
        let m = DistanceMatrix::new(
            labels(3),
            vec![vec![0i64, 5, 1], vec![5, 0, 1], vec![1, 1, 0]],
        )
        .unwrap();
        let v = validate_quasi_metric(&m);
        assert_eq!(
            v.violations,
            vec![
                Violation::Triangle {
                    from: 0,
                    via: 2,
                    to: 1,
                    direct: 5,
                    first: 1,
                    second: 1
                },
                Violation::Triangle {
                    from: 1,
                    via: 2,
                    to: 0,
                    direct: 5,
                    first: 1,
                    second: 1
                },
            ]
        );
        assert_eq!(
            v.violations[0].describe(m.labels()),
            "triangle (a,c,b): d(a,b) = 5 > 1 + 1"
        );
    }

    #[test]
    fn reports_diagonal_and_positivity() {
        let m = DistanceMatrix::new(labels(2), vec![vec![1i64, 0], vec![2, 0]]).unwrap();
        let v = validate_quasi_metric(&m);
        assert!(v
            .violations
            .contains(&Violation::NonZeroDiagonal { point: 0, value: 1 }));
        assert!(v.violations.contains(&Violation::NonPositive {
            from: 0,
            to: 1,
            value: 0
        }));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(
            DistanceMatrix::new(labels(2), vec![vec![0i64, 1], vec![1]]),
            Err(Error::NotSquare {
                labels: 2,
                row: 1,
                len: 1
            })
        );
        assert_eq!(
            DistanceMatrix::new(labels(2), vec![vec![0i64, 1]]),
            Err(Error::RowCountMismatch { labels: 2, rows: 1 })
        );
        assert_eq!(
            DistanceMatrix::<i64>::new(labels(1), vec![vec![0]]),
            Err(Error::TooFewPoints(1))
        );
    }

    #[test]
    fn segments_of_q4() {
        let q4 = fixtures::q4_matrix();
        let l = q4.labels().clone();
        let idx = |s: &str| l.index_of(s).unwrap();
        let seg = segment(&q4, idx("p"), idx("r")).unwrap();
        assert_eq!(
            l.format_set(seg),
            l.format_set([idx("p"), idx("q"), idx("r")].into_iter().collect())
        );
        let seg = segment(&q4, idx("r"), idx("s")).unwrap();
        assert_eq!(seg.len(), 2);
        assert_eq!(segment(&q4, 1, 1), Err(Error::SamePoint(1)));
    }

    #[test]
    fn uniform_segment_is_the_pair() {
        let m = DistanceMatrix::from_fn(labels(3), |i, j| i64::from(i != j)).unwrap();
        assert_eq!(
            segment(&m, 0, 1).unwrap(),
            PointSet::empty().with(0).with(1)
        );
    }

    #[test]
    fn permuted_moves_rows_and_columns() {
        let m = DistanceMatrix::new(labels(2), vec![vec![0i64, 1], vec![2, 0]]).unwrap();
        let p = m.permuted(&[1, 0]).unwrap();
        assert_eq!(*p.get(1, 0), 1);
        assert_eq!(*p.get(0, 1), 2);
    }
}
