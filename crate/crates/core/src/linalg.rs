//! Small dense exact linear algebra over Q (and fraction-free over Z).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Vector = Vec<BigRational>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vector]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    Echelon::of(vectors).rank()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols` columns.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Rows in echelon form, each with a distinct pivot scaled to 1.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn of(vectors: &[Vector]) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its projection along the stored pivots.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, r));
        true
    }
}

/// A linearly independent subset of `vectors` spanning the same space.
pub fn basis_of(vectors: &[Vector]) -> Vec<Vector> {
    let mut e = Echelon::new();
    vectors.iter().filter(|v| e.insert(v)).cloned().collect()
}

pub fn in_span(basis: &[Vector], v: &Vector) -> bool {
    Echelon::of(basis).contains(v)
}

pub fn is_subspace(small: &[Vector], big: &[Vector]) -> bool {
    let e = Echelon::of(big);
    small.iter().all(|v| e.contains(v))
}

/// Basis of `span(a) ∩ span(b)` inside an ambient space of dimension `dim`.
pub fn intersect(a: &[Vector], b: &[Vector], dim: usize) -> Vec<Vector> {
    let a = basis_of(a);
    let b = basis_of(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve Σ s_i a_i − Σ t_j b_j = 0; each kernel vector yields Σ s_i a_i.
    let cols = a.len() + b.len();
    let rows: Vec<Vector> = (0..dim)
        .map(|k| {
            a.iter()
                .map(|v| v[k].clone())
                .chain(b.iter().map(|v| -v[k].clone()))
                .collect()
        })
        .collect();
    let kernel = nullspace(&rows, cols);
    let images: Vec<Vector> = kernel
        .iter()
        .map(|s| {
            let mut v = vec![BigRational::zero(); dim];
            for (coef, av) in s.iter().zip(&a) {
                for k in 0..dim {
                    v[k] += coef * &av[k];
                }
            }
            v
        })
        .collect();
    basis_of(&images)
}

pub fn unit_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::one();
    v
}

/// Extends an independent list to a basis of `span(ambient)` using ambient vectors.
pub fn extend_basis(independent: &[Vector], ambient: &[Vector]) -> Vec<Vector> {
    let mut all = independent.to_vec();
    all.extend(ambient.iter().cloned());
    basis_of(&all)
}

/// Rank of an integer matrix by fraction-free elimination (rows kept primitive).
pub fn integer_rank(matrix: &[Vec<BigInt>]) -> usize {
    use num_integer::Integer;
    let mut a = matrix.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            if a[i][c].is_zero() {
                continue;
            }
            let (pivot, lead) = (a[r][c].clone(), a[i][c].clone());
            for j in c..ncols {
                a[i][j] = &pivot * &a[i][j] - &lead * &a[r][j];
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in a[i].iter_mut() {
                    *x /= &g;
                }
            }
        }
        r += 1;
    }
    r
}
