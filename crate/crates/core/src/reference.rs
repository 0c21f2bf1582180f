//! Slow reference implementations.
//!
//! Everything here is written straight from the definitions (dense GF(2)
//! matrices, exhaustive search, leaf-by-leaf replay) and shares no code
//! path with the fast encoder and decoders it is used to check. The CLI
//! exposes these through `--engine reference`.

use crate::bits::BitWord;
use crate::codec::{CodeSpec, GenPoly};
use crate::error::{PacError, Result};

/// Largest `K` accepted by [`ml_decode`].
pub const ML_MAX_INFO_BITS: usize = 20;

/// Dense GF(2) matrix, one packed row per entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: Vec<BitWord>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitWord::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitWord>) -> Self {
        let cols = rows.first().map_or(0, BitWord::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        self.rows[r].set(c, bit);
    }

    pub fn row(&self, r: usize) -> &BitWord {
        &self.rows[r]
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, x: &BitWord) -> BitWord {
        assert_eq!(x.len(), self.rows());
        let mut out = BitWord::zeros(self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            if x.get(i) == 1 {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows());
        Gf2Matrix {
            rows: self.rows.iter().map(|r| other.left_mul(r)).collect(),
            cols: other.cols,
        }
    }

    /// Copy of the `rows × cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Gf2Matrix {
        Gf2Matrix {
            rows: (r0..r0 + rows).map(|r| self.rows[r].slice(c0, cols)).collect(),
            cols,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows() == self.cols
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.count_ones() == 1 && r.get(i) == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitWord::is_zero)
    }

    /// True iff square, zero below the diagonal and constant along every
    /// diagonal.
    pub fn is_upper_triangular_toeplitz(&self) -> bool {
        let n = self.rows();
        if n != self.cols {
            return false;
        }
        for r in 0..n {
            for c in 0..n {
                let expect = if c < r { 0 } else { self.get(0, c - r) };
                if self.get(r, c) != expect {
                    return false;
                }
            }
        }
        true
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c) == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) == 1 {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// `N × N` upper-triangular Toeplitz precoder matrix with first row `g`
/// zero-padded (or truncated) to `N`.
pub fn gcc_matrix(g: &GenPoly, n: usize) -> Gf2Matrix {
    let taps = g.taps();
    let mut m = Gf2Matrix::zeros(n, n);
    for r in 0..n {
        for (j, &t) in taps.iter().enumerate() {
            if r + j < n && t == 1 {
                m.set(r, r + j, 1);
            }
        }
    }
    m
}

/// `F^{⊗n}` built by repeated Kronecker products of `[[1,0],[1,1]]`.
pub fn polar_matrix(n: usize) -> Result<Gf2Matrix> {
    if n == 0 || !n.is_power_of_two() {
        return Err(PacError::NotPowerOfTwo {
            what: "polar matrix size",
            len: n,
        });
    }
    let mut m = Gf2Matrix::identity(1);
    while m.rows() < n {
        let k = m.rows();
        let mut next = Gf2Matrix::zeros(2 * k, 2 * k);
        for r in 0..k {
            for c in 0..k {
                let b = m.get(r, c);
                next.set(r, c, b);
                next.set(k + r, c, b);
                next.set(k + r, k + c, b);
            }
        }
        m = next;
    }
    Ok(m)
}

/// Gauss-Jordan inverse over GF(2).
pub fn gf2_inverse(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(PacError::NotInvertible(format!(
            "matrix is {}x{}, not square",
            n,
            m.cols()
        )));
    }
    let mut a = m.rows.clone();
    let mut inv = Gf2Matrix::identity(n).rows;
    for c in 0..n {
        let p = (c..n)
            .find(|&r| a[r].get(c) == 1)
            .ok_or_else(|| PacError::NotInvertible(format!("no pivot in column {c}")))?;
        a.swap(c, p);
        inv.swap(c, p);
        let (pa, pi) = (a[c].clone(), inv[c].clone());
        for r in 0..n {
            if r != c && a[r].get(c) == 1 {
                a[r].xor_assign(&pa);
                inv[r].xor_assign(&pi);
            }
        }
    }
    Ok(Gf2Matrix { rows: inv, cols: n })
}

/// Row-vector PAC encoder `v · G_cc · G_N` from dense matrices. CRC, when
/// configured, is attached first.
pub fn encode_reference(d: &BitWord, spec: &CodeSpec) -> Result<BitWord> {
    let d = match spec.crc() {
        Some(crc) => crc.attach(d)?,
        None => d.clone(),
    };
    if d.len() != spec.info_len() {
        return Err(PacError::LengthMismatch {
            what: "data word",
            expected: spec.info_len(),
            actual: d.len(),
        });
    }
    let n = spec.block_len();
    let mut v = BitWord::zeros(n);
    for (j, &i) in spec.info_set().iter().enumerate() {
        v.set(i, d.get(j));
    }
    let g = gcc_matrix(spec.gen_poly(), n).mul(&polar_matrix(n)?);
    Ok(g.left_mul(&v))
}

fn mismatch_penalty(llr: &[f64], c: &BitWord) -> f64 {
    llr.iter()
        .enumerate()
        .filter(|&(j, &l)| (l < 0.0) != (c.get(j) == 1))
        .map(|(_, l)| l.abs())
        .sum()
}

/// Exhaustive minimum of `Σ |λ_j|` over codeword positions disagreeing with
/// the hard decision. Ties go to the lexicographically smallest data word
/// (`d_0` most significant). Returns the payload (CRC stripped) and its
/// score.
pub fn ml_decode(llr: &[f64], spec: &CodeSpec) -> Result<(BitWord, f64)> {
    let n = spec.block_len();
    if llr.len() != n {
        return Err(PacError::LengthMismatch {
            what: "LLR vector",
            expected: n,
            actual: llr.len(),
        });
    }
    let k = spec.payload_len();
    if k > ML_MAX_INFO_BITS {
        return Err(PacError::LimitExceeded {
            what: "payload bits for exhaustive ML",
            value: k,
            limit: ML_MAX_INFO_BITS,
        });
    }
    let mut best: Option<(BitWord, f64)> = None;
    for value in 0u64..(1u64 << k) {
        let bits: Vec<u8> = (0..k).map(|j| ((value >> (k - 1 - j)) & 1) as u8).collect();
        let d = BitWord::from_bits(&bits);
        let c = encode_reference(&d, spec)?;
        let score = mismatch_penalty(llr, &c);
        if best.as_ref().is_none_or(|(_, s)| score < *s) {
            best = Some((d, score));
        }
    }
    Ok(best.expect("at least one data word"))
}

fn minsum_f(a: f64, b: f64) -> f64 {
    let s = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    s * a.abs().min(b.abs())
}

fn g_step(a: f64, b: f64, beta: u8) -> f64 {
    if beta == 1 {
        b - a
    } else {
        b + a
    }
}

fn leaf_penalty(l: f64, bit: u8) -> f64 {
    if (l < 0.0) != (bit == 1) {
        l.abs()
    } else {
        0.0
    }
}

fn replay(llr: &[f64], u: &[u8]) -> (f64, Vec<u8>) {
    if llr.len() == 1 {
        return (leaf_penalty(llr[0], u[0]), vec![u[0]]);
    }
    let h = llr.len() / 2;
    let left: Vec<f64> = (0..h).map(|i| minsum_f(llr[i], llr[i + h])).collect();
    let (pl, bl) = replay(&left, &u[..h]);
    let right: Vec<f64> = (0..h).map(|i| g_step(llr[i], llr[i + h], bl[i])).collect();
    let (pr, br) = replay(&right, &u[h..]);
    let mut beta = Vec::with_capacity(llr.len());
    beta.extend(bl.iter().zip(&br).map(|(a, b)| a ^ b));
    beta.extend_from_slice(&br);
    (pl + pr, beta)
}

/// Runs the min-sum f/g recursion with every leaf forced to the given `u`
/// bit and returns the accumulated leaf-level path-metric increment.
pub fn leaf_pm_replay(llr: &[f64], u: &BitWord) -> Result<f64> {
    if llr.len() != u.len() {
        return Err(PacError::LengthMismatch {
            what: "forced u word",
            expected: llr.len(),
            actual: u.len(),
        });
    }
    if !llr.len().is_power_of_two() {
        return Err(PacError::NotPowerOfTwo {
            what: "replay length",
            len: llr.len(),
        });
    }
    Ok(replay(llr, &u.to_bits()).0)
}

/// LLR of leaf `i` computed from scratch given the decisions `u[..i]`.
fn leaf_llr(llr: &[f64], u_prefix: &[u8], i: usize) -> f64 {
    if llr.len() == 1 {
        return llr[0];
    }
    let h = llr.len() / 2;
    if i < h {
        let left: Vec<f64> = (0..h).map(|j| minsum_f(llr[j], llr[j + h])).collect();
        leaf_llr(&left, &u_prefix[..i.min(h)], i)
    } else {
        let mut beta = u_prefix[..h].to_vec();
        let mut s = 1;
        while s < h {
            for blk in (0..h).step_by(2 * s) {
                for j in blk..blk + s {
                    beta[j] ^= beta[j + s];
                }
            }
            s *= 2;
        }
        let right: Vec<f64> = (0..h).map(|j| g_step(llr[j], llr[j + h], beta[j])).collect();
        leaf_llr(&right, &u_prefix[h..], i - h)
    }
}

/// Bit-by-bit SC decoder: every leaf LLR is recomputed from the channel
/// and the decided prefix, and the precoder is stepped with a plain
/// shift-register list. Returns the decoded carrier vector `v`.
pub fn sc_decode_reference(llr: &[f64], spec: &CodeSpec) -> Result<BitWord> {
    let n = spec.block_len();
    if llr.len() != n {
        return Err(PacError::LengthMismatch {
            what: "LLR vector",
            expected: n,
            actual: llr.len(),
        });
    }
    let taps = spec.gen_poly().taps();
    let mut v = vec![0u8; n];
    let mut u = vec![0u8; n];
    for i in 0..n {
        let l = leaf_llr(llr, &u[..i], i);
        let out = |vi: u8| {
            let mut acc = vi;
            for (j, &t) in taps.iter().enumerate().skip(1) {
                if t == 1 && j <= i {
                    acc ^= v[i - j];
                }
            }
            acc
        };
        let (z0, z1) = (out(0), out(1));
        let pick = if spec.is_info(i) {
            let m0 = if z0 == 1 { -l } else { l };
            let m1 = if z1 == 1 { -l } else { l };
            u8::from(m1 > m0)
        } else {
            0
        };
        v[i] = pick;
        u[i] = if pick == 1 { z1 } else { z0 };
    }
    Ok(BitWord::from_bits(&v))
}

/// Every word of length `llr.len()` (optionally restricted to a parity),
/// sorted by node penalty. Limited to 20 bits.
pub fn exhaustive_words(llr: &[f64], parity: Option<u8>) -> Vec<(BitWord, f64)> {
    let n = llr.len();
    assert!(n <= 20, "exhaustive enumeration limited to 20 bits");
    let mut out: Vec<(BitWord, f64)> = (0u64..(1u64 << n))
        .map(|x| BitWord::from_u64(x, n))
        .filter(|w| parity.is_none_or(|p| w.parity() == p))
        .map(|w| {
            let pen = mismatch_penalty(llr, &w);
            (w, pen)
        })
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcc_shapes() {
        let ident = GenPoly::parse("1").unwrap();
        assert!(gcc_matrix(&ident, 3).is_identity());
        let g = GenPoly::parse("11").unwrap();
        let m = gcc_matrix(&g, 2);
        assert_eq!(m.row(0).to_string(), "11");
        assert_eq!(m.row(1).to_string(), "01");
    }

    #[test]
    fn inverse_of_identity_and_singular() {
        assert!(gf2_inverse(&Gf2Matrix::identity(5)).unwrap().is_identity());
        let mut m = Gf2Matrix::identity(3);
        m.set(2, 2, 0);
        assert!(matches!(gf2_inverse(&m), Err(PacError::NotInvertible(_))));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn gcc_inverse_first_row_length_16() {
        let g = GenPoly::parse("1011011").unwrap();
        let inv = gf2_inverse(&gcc_matrix(&g, 16)).unwrap();
        assert_eq!(inv.row(0).to_string(), "1011111100101010");
        assert!(inv.is_upper_triangular_toeplitz());
    }

    #[test]
    fn polar_matrix_is_involution() {
        let f = polar_matrix(16).unwrap();
        assert!(f.mul(&f).is_identity());
        assert_eq!(f.row(15).count_ones(), 16);
    }

    #[test]
    fn replay_small_cases() {
        let l = [1.0, 1.0];
        // u = (1,0) gives β = (1,0): one disagreement
        assert_eq!(leaf_pm_replay(&l, &"10".parse().unwrap()).unwrap(), 1.0);
        // u = (0,1) gives β = (1,1): two disagreements
        assert_eq!(leaf_pm_replay(&l, &"01".parse().unwrap()).unwrap(), 2.0);
        let l = [2.0, -1.0, 0.5, -3.0];
        assert_eq!(leaf_pm_replay(&l, &"0000".parse().unwrap()).unwrap() >= 0.0, true);
    }

    #[test]
    fn ml_noiseless_and_empty() {
        let g = GenPoly::parse("1011011").unwrap();
        let spec = CodeSpec::new(8, &[3, 5, 6, 7], g.clone()).unwrap();
        let d: BitWord = "1011".parse().unwrap();
        let c = encode_reference(&d, &spec).unwrap();
        let llr: Vec<f64> = c.iter().map(|b| if b == 1 { -5.0 } else { 5.0 }).collect();
        let (dh, s) = ml_decode(&llr, &spec).unwrap();
        assert_eq!((dh, s), (d, 0.0));

        let empty = CodeSpec::new(8, &[], g).unwrap();
        let (dh, _) = ml_decode(&llr, &empty).unwrap();
        assert!(dh.is_empty());
    }

    #[test]
    fn ml_guard() {
        let g = GenPoly::parse("1011011").unwrap();
        let spec = CodeSpec::new(32, &(0..21).collect::<Vec<_>>(), g).unwrap();
        assert!(matches!(
            ml_decode(&[0.0; 32], &spec),
            Err(PacError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn exhaustive_words_parity_filter() {
        let w = exhaustive_words(&[3.0, -1.0, 2.0, -4.0], Some(0));
        assert_eq!(w.len(), 8);
        assert!(w.iter().all(|(x, _)| x.parity() == 0));
        assert_eq!(w[0].1, 0.0);
    }
}
