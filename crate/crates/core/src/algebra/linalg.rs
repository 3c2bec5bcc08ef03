use num_traits::{One, Zero};

use super::Q;

/// Subspace of `Q^ambient` in reduced row-echelon form.
///
/// Rows are sorted by pivot column and every pivot column is zero in all
/// other rows, so two subspaces are equal iff their rows are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_vectors(ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    /// Reduced echelon basis of the span of `vectors`.
    pub fn from_vectors<I: IntoIterator<Item = Vec<Q>>>(ambient: usize, vectors: I) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        debug_assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            axpy(&mut v, &c, row);
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &v[p];
        for c in v.iter_mut().skip(p) {
            if !c.is_zero() {
                *c *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                axpy(row, &c, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x = Σ a_i r_i lies in `other` iff Σ a_i reduce(r_i) = 0.
        let reduced: Vec<Vec<Q>> = self.rows.iter().map(|r| other.reduce(r)).collect();
        let n = self.rows.len();
        let eqs: Vec<Vec<Q>> = (0..self.ambient)
            .map(|j| reduced.iter().map(|r| r[j].clone()).collect())
            .collect();
        let coeffs = nullspace(&eqs, n);
        Subspace::from_vectors(
            self.ambient,
            coeffs.rows.iter().map(|a| combine(a, &self.rows, self.ambient)),
        )
    }

    /// Coordinates of a member vector in terms of `rows()`.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = combine(&coords, &self.rows, self.ambient);
        (back.as_slice() == v).then_some(coords)
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// `v -= c * w`
fn axpy(v: &mut [Q], c: &Q, w: &[Q]) {
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x -= c * y;
        }
    }
}

pub fn combine(coeffs: &[Q], rows: &[Vec<Q>], ambient: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); ambient];
    for (a, r) in coeffs.iter().zip(rows) {
        if a.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            if !x.is_zero() {
                *o += a * x;
            }
        }
    }
    out
}

/// Solutions `x` of `A x = 0`, where `A` is given by its rows over `n` unknowns.
pub fn nullspace(rows: &[Vec<Q>], n: usize) -> Subspace {
    let echelon = Subspace::from_vectors(n, rows.iter().cloned());
    let pivots = echelon.pivots();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Q::zero(); n];
        x[free] = Q::one();
        for (row, &p) in echelon.rows().iter().zip(pivots) {
            if !row[free].is_zero() {
                x[p] = -row[free].clone();
            }
        }
        basis.push(x);
    }
    Subspace::from_vectors(n, basis)
}

#[cfg(test)]
mod tests {
    use super::super::q;
    use super::*;

    fn v(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Subspace::from_vectors(2, [v(&[1, 0]), v(&[1, 1])]).dim(), 2);
        assert_eq!(Subspace::from_vectors(2, [v(&[1, 2]), v(&[2, 4])]).dim(), 1);
        assert_eq!(Subspace::from_vectors(2, Vec::<Vec<Q>>::new()).dim(), 0);
    }

    #[test]
    fn nullspace_of_single_equation() {
        let ns = nullspace(&[v(&[1, 1, 1])], 3);
        assert_eq!(ns.dim(), 2);
        for r in ns.rows() {
            assert_eq!(r.iter().cloned().sum::<Q>(), q(0));
        }
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::from_vectors(3, [v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(3, [v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::from_vectors(3, [v(&[0, 1, 0])]));
    }

    #[test]
    fn echelon_form_is_canonical() {
        let a = Subspace::from_vectors(3, [v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let b = Subspace::from_vectors(3, [v(&[1, 3, 4]), v(&[2, 5, 7])]);
        assert_eq!(a, b);
    }
}
