//! Dense bit-packed linear algebra over GF(2).
//!
//! Pivoting is deterministic: the pivot of a vector is its lowest set index.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index.
    pub fn pivot(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A subspace of `F₂^n` kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        let mut s = Subspace::zero(ambient);
        for i in 0..ambient {
            s.rows.push(BitVec::unit(ambient, i));
            s.pivots.push(i);
        }
        s
    }

    pub fn spanned_by<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a BitVec>) -> Subspace {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let v = self.reduce(&v);
        let Some(p) = v.pivot() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Subspace::spanned_by(vectors[0].len(), vectors).dim()
}

/// Kernel of the linear map sending the `i`-th source basis vector to `images[i]`.
///
/// Returns kernel vectors as coefficient vectors over the source basis.
pub fn kernel(images: &[BitVec], target_dim: usize) -> Vec<BitVec> {
    let n = images.len();
    // Augmented rows [image | identity]; reduce on the image part only.
    let mut pivot_rows: Vec<(usize, BitVec, BitVec)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        debug_assert_eq!(img.len(), target_dim);
        let mut v = img.clone();
        let mut coeffs = BitVec::unit(n, i);
        for (p, row, rc) in &pivot_rows {
            if v.get(*p) {
                v.xor_assign(row);
                coeffs.xor_assign(rc);
            }
        }
        match v.pivot() {
            Some(p) => pivot_rows.push((p, v, coeffs)),
            None => kernel.push(coeffs),
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_basics() {
        let mut s = Subspace::zero(4);
        assert!(s.insert(BitVec::from_indices(4, [0, 1])));
        assert!(s.insert(BitVec::from_indices(4, [1, 2])));
        assert!(!s.insert(BitVec::from_indices(4, [0, 2])));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&BitVec::from_indices(4, [0, 2])));
        assert!(!s.contains(&BitVec::unit(4, 3)));
    }

    #[test]
    fn kernel_of_projection() {
        // e0 -> e0, e1 -> e0, e2 -> 0
        let images = vec![BitVec::unit(2, 0), BitVec::unit(2, 0), BitVec::zeros(2)];
        let k = kernel(&images, 2);
        assert_eq!(k.len(), 2);
        assert_eq!(rank(&images) + k.len(), 3);
    }

    #[test]
    fn wide_vectors() {
        let v = BitVec::from_indices(200, [3, 64, 130, 199]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 130, 199]);
        assert_eq!(v.pivot(), Some(3));
        assert_eq!(v.count_ones(), 4);
    }
}
