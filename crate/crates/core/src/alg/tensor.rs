//! Vectors, 2-tensors and dense tensors with a small contraction evaluator.


use crate::alg::altform::AltForm;
use crate::scalar::Scalar;

/// Frame vector with `dim` components.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    comps: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn zero(dim: usize) -> Self {
        Vector {
            comps: vec![S::zero(); dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.set(i, S::one());
        v
    }

    pub fn from_components(comps: Vec<S>) -> Self {
        Vector { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn get(&self, i: usize) -> &S {
        &self.comps[i]
    }

    pub fn set(&mut self, i: usize, v: S) {
        self.comps[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Vector {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector {
            comps: self.comps.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }
}

/// General (not necessarily symmetric) 2-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2<S> {
    dim: usize,
    entries: Vec<S>, // row-major
}

impl<S: Scalar> Tensor2<S> {
    pub fn zero(dim: usize) -> Self {
        Tensor2 {
            dim,
            entries: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Tensor2::zero(dim);
        for i in 0..dim {
            t.set(i, i, S::one());
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        Tensor2 {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Tensor2 {
            dim: self.dim,
            entries: self.entries.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    /// Matrix product (contraction over adjacent index).
    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut out = Tensor2::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = S::zero();
                for k in 0..self.dim {
                    acc = acc + self.get(i, k).clone() * o.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Tensor2::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn into_symmetric(self) -> SymTensor2<S> {
        assert!(self.is_symmetric(), "tensor is not symmetric");
        SymTensor2(self)
    }

    /// Symmetric part `(A + A^t)/2`. Requires 2 to be invertible in S.
    pub fn symmetrize(&self) -> SymTensor2<S> {
        let half = S::from_ratio(1, 2);
        SymTensor2(self.add(&self.transpose()).scale(&half))
    }
}

/// Symmetric 2-tensor (symmetry checked at construction).
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor2<S>(Tensor2<S>);

impl<S: Scalar> SymTensor2<S> {
    pub fn zero(dim: usize) -> Self {
        SymTensor2(Tensor2::zero(dim))
    }

    pub fn identity(dim: usize) -> Self {
        SymTensor2(Tensor2::identity(dim))
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut t = Tensor2::zero(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                t.set(i, j, v.clone());
                t.set(j, i, v);
            }
        }
        SymTensor2(t)
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let dim = entries.len();
        let mut t = Tensor2::zero(dim);
        for (i, v) in entries.into_iter().enumerate() {
            t.set(i, i, v);
        }
        SymTensor2(t)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        self.0.get(i, j)
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: S) {
        self.0.set(i, j, v.clone());
        self.0.set(j, i, v);
    }

    pub fn as_tensor2(&self) -> &Tensor2<S> {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        SymTensor2(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        SymTensor2(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &S) -> Self {
        SymTensor2(self.0.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Solve the linear system `A x = b` by Gaussian elimination with exact
/// division. Panics if `A` is singular.
pub fn solve_linear<S: Scalar>(a: &Tensor2<S>, b: &Vector<S>) -> Vector<S> {
    let n = a.dim();
    let mut m: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b.get(i).clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular system");
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].div_exact(&pivot);
            for c in col..=n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    let mut x = Vector::zero(n);
    for i in 0..n {
        x.set(i, m[i][n].div_exact(&m[i][i]));
    }
    x
}

/// Inverse and determinant by Gauss-Jordan with exact division.
pub fn invert<S: Scalar>(a: &Tensor2<S>) -> Option<(Tensor2<S>, S)> {
    let n = a.dim();
    let mut m: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = (0..n).map(|j| a.get(i, j).clone()).collect();
            for j in 0..n {
                row.push(if i == j { S::one() } else { S::zero() });
            }
            row
        })
        .collect();
    let mut det = S::one();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for c in 0..2 * n {
            m[col][c] = m[col][c].div_exact(&pivot);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..2 * n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    let mut inv = Tensor2::zero(n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, m[i][n + j].clone());
        }
    }
    Some((inv, det))
}

/// Dense tensor of arbitrary rank over a `dim`-dimensional frame, used by
/// the index-contraction evaluator.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    dim: usize,
    rank: usize,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor {
            dim,
            rank,
            data: vec![S::zero(); dim.pow(rank as u32)],
        }
    }

    pub fn scalar(dim: usize, v: S) -> Self {
        Tensor {
            dim,
            rank: 0,
            data: vec![v],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.dim, self.rank), (o.dim, o.rank));
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    /// Fully antisymmetric dense tensor from an alternating form.
    pub fn from_altform(f: &AltForm<S>) -> Self {
        let dim = f.dim() as usize;
        let rank = f.degree() as usize;
        let mut t = Tensor::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        fill_antisym(&mut t, f, &mut idx, 0);
        t
    }

    pub fn from_tensor2(m: &Tensor2<S>) -> Self {
        let dim = m.dim();
        let mut t = Tensor::zeros(dim, 2);
        for i in 0..dim {
            for j in 0..dim {
                t.set(&[i, j], m.get(i, j).clone());
            }
        }
        t
    }

    pub fn from_vector(v: &Vector<S>) -> Self {
        let dim = v.dim();
        let mut t = Tensor::zeros(dim, 1);
        for i in 0..dim {
            t.set(&[i], v.get(i).clone());
        }
        t
    }

    /// Contract one axis with a 2-tensor (e.g. raise an index with the
    /// inverse metric): result[..i..] = sum_j m[i][j] self[..j..].
    pub fn contract_axis(&self, axis: usize, m: &Tensor2<S>) -> Self {
        let mut out = Tensor::zeros(self.dim, self.rank);
        let mut idx = vec![0usize; self.rank];
        loop {
            let mut acc = S::zero();
            let mut jdx = idx.clone();
            for j in 0..self.dim {
                jdx[axis] = j;
                let v = self.get(&jdx);
                if !v.is_zero() {
                    acc = acc + m.get(idx[axis], j).clone() * v.clone();
                }
            }
            out.set(&idx, acc);
            if !advance(&mut idx, self.dim) {
                break;
            }
        }
        out
    }
}

fn advance(idx: &mut [usize], dim: usize) -> bool {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < dim {
            return true;
        }
        idx[p] = 0;
    }
    false
}

fn fill_antisym<S: Scalar>(t: &mut Tensor<S>, f: &AltForm<S>, idx: &mut Vec<usize>, pos: usize) {
    if pos == idx.len() {
        let as_u8: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
        let c = f.coeff(&as_u8);
        if !c.is_zero() {
            t.set(idx, c);
        }
        return;
    }
    for i in 0..t.dim {
        idx[pos] = i;
        fill_antisym(t, f, idx, pos + 1);
    }
}

/// Minimal einsum over dense tensors: `"abj,abk->jk"`. Every label is
/// contracted by plain summation, so callers raise indices beforehand.
pub fn einsum<S: Scalar>(pattern: &str, inputs: &[&Tensor<S>]) -> Tensor<S> {
    let (lhs, rhs) = pattern
        .split_once("->")
        .expect("malformed index pattern: missing ->");
    let specs: Vec<&str> = lhs.split(',').collect();
    assert_eq!(specs.len(), inputs.len(), "malformed index pattern: operand count");
    let dim = inputs.first().map(|t| t.dim()).unwrap_or(0);
    for (spec, t) in specs.iter().zip(inputs) {
        assert_eq!(spec.len(), t.rank(), "malformed index pattern: rank mismatch");
        assert_eq!(t.dim(), dim, "dimension mismatch");
    }
    let out_labels: Vec<char> = rhs.chars().collect();
    let mut all_labels: Vec<char> = Vec::new();
    for spec in &specs {
        for ch in spec.chars() {
            if !all_labels.contains(&ch) {
                all_labels.push(ch);
            }
        }
    }
    for ch in &out_labels {
        assert!(all_labels.contains(ch), "malformed index pattern: unknown output label");
    }
    let summed: Vec<char> = all_labels
        .iter()
        .copied()
        .filter(|c| !out_labels.contains(c))
        .collect();

    let mut out = Tensor::zeros(dim, out_labels.len());
    let mut out_idx = vec![0usize; out_labels.len()];
    loop {
        let mut acc = S::zero();
        let mut sum_idx = vec![0usize; summed.len()];
        loop {
            let assign = |ch: char| -> usize {
                if let Some(p) = out_labels.iter().position(|&c| c == ch) {
                    out_idx[p]
                } else {
                    let p = summed.iter().position(|&c| c == ch).unwrap();
                    sum_idx[p]
                }
            };
            let mut term = S::one();
            let mut zero = false;
            for (spec, t) in specs.iter().zip(inputs) {
                let idx: Vec<usize> = spec.chars().map(assign).collect();
                let v = t.get(&idx);
                if v.is_zero() {
                    zero = true;
                    break;
                }
                term = term * v.clone();
            }
            if !zero {
                acc = acc + term;
            }
            if summed.is_empty() || !advance(&mut sum_idx, dim) {
                break;
            }
        }
        out.set(&out_idx, acc);
        if out_labels.is_empty() || !advance(&mut out_idx, dim) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn solve_and_invert() {
        let mut a: Tensor2<Rat> = Tensor2::zero(2);
        a.set(0, 0, rat(2, 1));
        a.set(0, 1, rat(1, 1));
        a.set(1, 0, rat(1, 1));
        a.set(1, 1, rat(3, 1));
        let b = Vector::from_components(vec![rat(5, 1), rat(10, 1)]);
        let x = solve_linear(&a, &b);
        assert_eq!(x.get(0), &rat(1, 1));
        assert_eq!(x.get(1), &rat(3, 1));
        let (inv, det) = invert(&a).unwrap();
        assert_eq!(det, rat(5, 1));
        assert_eq!(a.matmul(&inv), Tensor2::identity(2));
    }

    #[test]
    fn einsum_matrix_trace() {
        let mut m: Tensor<Rat> = Tensor::zeros(3, 2);
        for i in 0..3 {
            m.set(&[i, i], rat(i as i64 + 1, 1));
        }
        let tr = einsum("aa->", &[&m]);
        assert_eq!(tr.get(&[]), &rat(6, 1));
    }
}
