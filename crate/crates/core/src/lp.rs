//! Exact linear algebra over the rationals: row selection, parametrization of
//! affine solution sets, phase-one simplex with Farkas certificates, and
//! vertex enumeration by double description.

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A sparse row: `(column, coefficient)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

fn axpy(row: &SparseRow, factor: &Rational, other: &SparseRow) -> SparseRow {
    // row - factor * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, -(factor * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct EchelonRow {
    row: SparseRow,
    rhs: Rational,
    /// This row as a combination of the selected input rows.
    combo: SparseRow,
}

/// Outcome of scanning an equality system `rows . x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub enum RowSelection {
    /// Indices of a maximal linearly independent subset of the rows; the
    /// system is equivalent to this subset.
    Independent(Vec<usize>),
    /// A combination of input rows (by index) whose left side vanishes while
    /// the right side is `-1`.
    Inconsistent(SparseRow),
}

/// Picks independent rows by incremental sparse elimination, or finds a
/// combination proving the system inconsistent.
pub fn select_rows(rows: &[SparseRow], rhs: &[Rational]) -> RowSelection {
    let mut echelon: Vec<EchelonRow> = Vec::new();
    let mut pivot_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut selected = Vec::new();
    for (r, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let mut cur = row.clone();
        let mut cur_rhs = b.clone();
        let mut combo: SparseRow = vec![(r, Rational::one())];
        loop {
            let hit = cur.iter().find_map(|(c, v)| pivot_of.get(c).map(|&k| (k, v.clone())));
            let Some((k, factor)) = hit else { break };
            let ech = &echelon[k];
            cur = axpy(&cur, &factor, &ech.row);
            cur_rhs -= &factor * &ech.rhs;
            combo = axpy(&combo, &factor, &ech.combo);
        }
        if cur.is_empty() {
            if !cur_rhs.is_zero() {
                let scale = -Rational::one() / &cur_rhs;
                return RowSelection::Inconsistent(combo.into_iter().map(|(i, v)| (i, v * &scale)).collect());
            }
            continue;
        }
        let lead = cur[0].1.clone();
        let norm = |v: &Rational| v / &lead;
        let row: SparseRow = cur.iter().map(|(c, v)| (*c, norm(v))).collect();
        pivot_of.insert(row[0].0, echelon.len());
        echelon.push(EchelonRow {
            row,
            rhs: norm(&cur_rhs),
            combo: combo.iter().map(|(i, v)| (*i, norm(v))).collect(),
        });
        selected.push(r);
    }
    RowSelection::Independent(selected)
}

pub fn to_dense(row: &SparseRow, n: usize) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); n];
    for (c, v) in row {
        d[*c] = v.clone();
    }
    d
}

/// Solution set of a consistent full-row-rank system as `x_pivots = x0 - N x_free`.
#[derive(Clone, Debug)]
pub struct Parametrization {
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// Value of each pivot variable when all free variables are zero.
    pub offset: Vec<Rational>,
    /// `coeff[i][j]`: coefficient of free variable `j` in pivot `i` (subtracted).
    pub coeff: Vec<Vec<Rational>>,
}

impl Parametrization {
    /// Full solution vector for given free values.
    pub fn point(&self, n: usize, t: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (j, &f) in self.free.iter().enumerate() {
            x[f] = t[j].clone();
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            let mut v = self.offset[i].clone();
            for (j, c) in self.coeff[i].iter().enumerate() {
                if !c.is_zero() {
                    v -= c * &t[j];
                }
            }
            x[p] = v;
        }
        x
    }
}

/// Gauss-Jordan elimination of dense rows with independent left sides.
pub fn parametrize(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, n: usize) -> Parametrization {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let lead = a[r][col].clone();
        for v in a[r].iter_mut() {
            *v /= &lead;
        }
        b[r] /= &lead;
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for k in 0..n {
                    if !a[r][k].is_zero() {
                        let d = &f * &a[r][k];
                        a[i][k] -= d;
                    }
                }
                let d = &f * &b[r];
                b[i] -= d;
            }
        }
        pivots.push(col);
        r += 1;
    }
    let is_pivot: FixedBitSet = {
        let mut s = FixedBitSet::with_capacity(n);
        for &p in &pivots {
            s.insert(p);
        }
        s
    };
    let free: Vec<usize> = (0..n).filter(|c| !is_pivot.contains(*c)).collect();
    let coeff = (0..pivots.len())
        .map(|i| free.iter().map(|&f| a[i][f].clone()).collect())
        .collect();
    Parametrization {
        offset: b[..pivots.len()].to_vec(),
        pivots,
        free,
        coeff,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    /// `y` with `A^T y >= 0` componentwise and `b . y = -1`.
    Infeasible(Vec<Rational>),
}

/// Finds `x >= 0` with `A x = b` (dense, any rank) by the phase-one simplex
/// method with Bland's rule, or a Farkas certificate.
pub fn phase_one(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Feasibility {
    let m = a.len();
    // Rows with negative right side are negated so artificials start feasible.
    let sign: Vec<Rational> = b
        .iter()
        .map(|v| {
            if v.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for j in 0..n {
                row[j] = &a[i][j] * &sign[i];
            }
            row[n + i] = Rational::one();
            row[width - 1] = &b[i] * &sign[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![Rational::zero(); width];
    for j in n..n + m {
        cost[j] = Rational::one();
    }
    for row in &t {
        for j in 0..width {
            if !row[j].is_zero() {
                let d = row[j].clone();
                cost[j] -= d;
            }
        }
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let lead = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &lead;
        }
        let pivot_row = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &f * &pivot_row[j];
                    }
                }
            }
        }
        let f = cost[enter].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero() {
                cost[j] -= &f * &pivot_row[j];
            }
        }
        basis[p] = enter;
    }
    // cost[width-1] is minus the optimal sum of artificials.
    if cost[width - 1].is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                x[j] = t[i][width - 1].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // Duals of the phase-one problem: y_i = 1 - reduced cost of artificial i.
        let objective = -cost[width - 1].clone();
        let y: Vec<Rational> = (0..m)
            .map(|i| -(Rational::one() - &cost[n + i]) * &sign[i] / &objective)
            .collect();
        Feasibility::Infeasible(y)
    }
}

/// Checks a Farkas certificate: `A^T y >= 0` and `b . y < 0`.
pub fn verify_farkas(a: &[Vec<Rational>], b: &[Rational], n: usize, y: &[Rational]) -> bool {
    let by: Rational = b.iter().zip(y).map(|(p, q)| p * q).sum();
    by.is_negative()
        && (0..n).all(|j| {
            let s: Rational = a.iter().zip(y).map(|(row, q)| &row[j] * q).sum();
            !s.is_negative()
        })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

fn inverse(mut m: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let lead = m[c][c].clone();
        for k in 0..n {
            m[c][k] /= &lead;
            inv[c][k] /= &lead;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..n {
                    let d = &f * &m[c][k];
                    m[i][k] -= d;
                    let d = &f * &inv[c][k];
                    inv[i][k] -= d;
                }
            }
        }
    }
    Some(inv)
}

fn normalize(ray: &mut [Rational]) {
    if !ray[0].is_zero() {
        let l = ray[0].clone();
        for v in ray.iter_mut() {
            *v /= &l;
        }
    } else if let Some(m) = ray.iter().map(|v| v.abs()).max() {
        if !m.is_zero() {
            for v in ray.iter_mut() {
                *v /= &m;
            }
        }
    }
}

/// Vertices of the bounded polytope `{t : A t <= b}` in dimension `d`, by the
/// double description method on the homogenized cone. Returns `None` when the
/// inequalities do not have full rank (the polytope would be unbounded or the
/// method needs an initial simplex it cannot find). The result is sorted.
pub fn polytope_vertices(a: &[Vec<Rational>], b: &[Rational], d: usize) -> Option<Vec<Vec<Rational>>> {
    if d == 0 {
        return Some(if b.iter().all(|v| !v.is_negative()) {
            vec![vec![]]
        } else {
            vec![]
        });
    }
    // Cone constraints h . (lambda, t) >= 0.
    let mut h: Vec<Vec<Rational>> = vec![{
        let mut v = vec![Rational::zero(); d + 1];
        v[0] = Rational::one();
        v
    }];
    for (row, rhs) in a.iter().zip(b) {
        let mut v = Vec::with_capacity(d + 1);
        v.push(rhs.clone());
        v.extend(row.iter().map(|x| -x));
        h.push(v);
    }
    let dim = d + 1;
    // Initial simplicial cone from independent constraints.
    let mut initial: Vec<usize> = Vec::new();
    for i in 0..h.len() {
        let mut trial: Vec<Vec<Rational>> = initial.iter().map(|&k| h[k].clone()).collect();
        trial.push(h[i].clone());
        if rank(trial) == initial.len() + 1 {
            initial.push(i);
            if initial.len() == dim {
                break;
            }
        }
    }
    if initial.len() < dim {
        return None;
    }
    let inv = inverse(initial.iter().map(|&k| h[k].clone()).collect())?;
    let m = h.len();
    let mut rays: Vec<(Vec<Rational>, FixedBitSet)> = (0..dim)
        .map(|k| {
            let mut ray: Vec<Rational> = (0..dim).map(|i| inv[i][k].clone()).collect();
            normalize(&mut ray);
            let mut z = FixedBitSet::with_capacity(m);
            for (j, &c) in initial.iter().enumerate() {
                if j != k {
                    z.insert(c);
                }
            }
            (ray, z)
        })
        .collect();
    let mut done = FixedBitSet::with_capacity(m);
    for &c in &initial {
        done.insert(c);
    }
    for i in 0..m {
        if done.contains(i) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|(r, _)| dot(&h[i], r)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<(Vec<Rational>, FixedBitSet)> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let mut common = rays[p].1.clone();
                common.intersect_with(&rays[q].1);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|k| k == p || k == q || !common.is_subset(&rays[k].1));
                if !adjacent {
                    continue;
                }
                let mut ray: Vec<Rational> = (0..dim)
                    .map(|j| &vals[p] * &rays[q].0[j] - &vals[q] * &rays[p].0[j])
                    .collect();
                normalize(&mut ray);
                common.insert(i);
                next.push((ray, common));
            }
        }
        for k in 0..rays.len() {
            if vals[k].is_zero() {
                rays[k].1.insert(i);
            }
        }
        let kept: Vec<(Vec<Rational>, FixedBitSet)> = rays
            .into_iter()
            .zip(&vals)
            .filter(|(_, v)| !v.is_negative())
            .map(|(r, _)| r)
            .collect();
        rays = kept;
        rays.extend(next);
        done.insert(i);
    }
    let mut vertices: Vec<Vec<Rational>> = rays
        .into_iter()
        .filter(|(r, _)| r[0].is_positive())
        .map(|(r, _)| r[1..].to_vec())
        .collect();
    vertices.sort();
    vertices.dedup();
    Some(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ints;

    fn q(p: i64) -> Rational {
        from_ints(p, 1)
    }

    #[test]
    fn selects_independent_rows_and_detects_inconsistency() {
        let rows = vec![vec![(0, q(1)), (1, q(1))], vec![(0, q(2)), (1, q(2))], vec![(1, q(1))]];
        assert_eq!(
            select_rows(&rows, &[q(1), q(2), q(0)]),
            RowSelection::Independent(vec![0, 2])
        );
        match select_rows(&rows, &[q(1), q(3), q(0)]) {
            RowSelection::Inconsistent(combo) => {
                // -1 * (row1 - 2 row0) gives 0 = -1
                assert_eq!(combo, vec![(0, q(2)), (1, q(-1))]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn phase_one_feasible_and_infeasible() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        match phase_one(&a, &[q(1), q(0)], 2) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![from_ints(1, 2), from_ints(1, 2)]),
            other => panic!("{other:?}"),
        }
        // x0 + x1 = 1 and x0 + x1 = -1 cannot both hold
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        match phase_one(&a, &[q(1), q(-1)], 2) {
            Feasibility::Infeasible(y) => assert!(verify_farkas(&a, &[q(1), q(-1)], 2, &y)),
            other => panic!("{other:?}"),
        }
        // x0 = -1 with x0 >= 0
        let a = vec![vec![q(1)]];
        match phase_one(&a, &[q(-1)], 1) {
            Feasibility::Infeasible(y) => assert!(verify_farkas(&a, &[q(-1)], 1, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parametrizes() {
        let p = parametrize(vec![vec![q(1), q(1), q(0)]], vec![q(1)], 3);
        assert_eq!(p.pivots, vec![0]);
        assert_eq!(p.free, vec![1, 2]);
        assert_eq!(p.point(3, &[q(1), q(5)]), vec![q(0), q(1), q(5)]);
    }

    #[test]
    fn square_and_triangle_vertices() {
        // 0 <= x, y <= 1
        let a = vec![vec![q(-1), q(0)], vec![q(0), q(-1)], vec![q(1), q(0)], vec![q(0), q(1)]];
        let v = polytope_vertices(&a, &[q(0), q(0), q(1), q(1)], 2).unwrap();
        assert_eq!(
            v,
            vec![vec![q(0), q(0)], vec![q(0), q(1)], vec![q(1), q(0)], vec![q(1), q(1)]]
        );
        // add x + y <= 1
        let mut a2 = a.clone();
        a2.push(vec![q(1), q(1)]);
        let v = polytope_vertices(&a2, &[q(0), q(0), q(1), q(1), q(1)], 2).unwrap();
        assert_eq!(v, vec![vec![q(0), q(0)], vec![q(0), q(1)], vec![q(1), q(0)]]);
        // x + y <= -1 leaves nothing
        let mut a3 = a;
        a3.push(vec![q(1), q(1)]);
        assert!(polytope_vertices(&a3, &[q(0), q(0), q(1), q(1), q(-1)], 2)
            .unwrap()
            .is_empty());
    }
}
