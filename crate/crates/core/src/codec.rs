//! PAC code definition and encoding.
//!
//! A PAC code places the data bits on the information set (rate profiling),
//! runs the resulting carrier vector `v` through a rate-1 convolutional
//! precoder to get `u`, and polar-transforms `u` into the codeword
//! `c = u · F^{⊗n}` with `F = [[1,0],[1,1]]`.

use std::fmt;

use serde::Serialize;

use crate::bits::BitWord;
use crate::error::{PacError, Result};

/// Longest supported precoder memory; the shift register lives in one `u64`.
pub const MAX_MEMORY: usize = 63;

/// Convolutional generator polynomial `(g_0, ..., g_m)`.
///
/// Construction enforces `g_0 = 1` (the precoder must be invertible) and
/// `g_m = 1` (so that `m` is the true memory).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenPoly {
    taps: Vec<u8>,
    /// Bit `i - 1` set iff `g_i = 1`, for `i = 1..=m`.
    state_taps: u64,
}

impl GenPoly {
    pub fn new(taps: &[u8]) -> Result<Self> {
        if taps.is_empty() {
            return Err(PacError::InvalidSpec("generator polynomial is empty".into()));
        }
        if taps.len() - 1 > MAX_MEMORY {
            return Err(PacError::LimitExceeded {
                what: "precoder memory m",
                value: taps.len() - 1,
                limit: MAX_MEMORY,
            });
        }
        if taps.iter().any(|&t| t > 1) {
            return Err(PacError::InvalidSpec("generator taps must be 0 or 1".into()));
        }
        if taps[0] != 1 {
            return Err(PacError::NotInvertible("g_0 must be 1".into()));
        }
        if *taps.last().unwrap() != 1 {
            return Err(PacError::InvalidSpec("g_m must be 1".into()));
        }
        let state_taps = taps[1..]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &t)| acc | ((t as u64) << i));
        Ok(Self {
            taps: taps.to_vec(),
            state_taps,
        })
    }

    /// Parses `"1011011"` with `g_0` first.
    pub fn parse(s: &str) -> Result<Self> {
        let w: BitWord = s.trim().parse()?;
        Self::new(&w.to_bits())
    }

    /// Precoder memory `m`.
    pub fn memory(&self) -> usize {
        self.taps.len() - 1
    }

    pub fn taps(&self) -> &[u8] {
        &self.taps
    }

    pub(crate) fn state_taps(&self) -> u64 {
        self.state_taps
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &t in &self.taps {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenPoly({self})")
    }
}

/// Shift-register state of the precoder, most recent input first.
///
/// Bit `i` of `bits` is `state[i]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ConvState {
    bits: u64,
    len: u8,
}

impl ConvState {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_MEMORY);
        Self { bits: 0, len: m as u8 }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.len() <= MAX_MEMORY);
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (((b & 1) as u64) << i));
        Self {
            bits: packed,
            len: bits.len() as u8,
        }
    }

    pub(crate) fn from_raw(bits: u64, m: usize) -> Self {
        Self {
            bits: bits & Self::mask_for(m),
            len: m as u8,
        }
    }

    fn mask_for(m: usize) -> u64 {
        if m == 0 {
            0
        } else {
            u64::MAX >> (64 - m)
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len());
        ((self.bits >> i) & 1) as u8
    }

    pub fn raw(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Shifts `v` in as the newest bit.
    #[inline]
    pub(crate) fn push(self, v: u8) -> Self {
        Self {
            bits: ((self.bits << 1) | (v & 1) as u64) & Self::mask_for(self.len()),
            len: self.len,
        }
    }

    /// Toggles the newest bit.
    pub(crate) fn flip_newest(self) -> Self {
        if self.len == 0 {
            self
        } else {
            Self {
                bits: self.bits ^ 1,
                len: self.len,
            }
        }
    }
}

/// One precoder step: returns the output bit and the next state.
#[inline]
pub fn conv_1b_trans(v: u8, state: &ConvState, g: &GenPoly) -> (u8, ConvState) {
    debug_assert_eq!(state.len(), g.memory());
    let fb = ((state.bits & g.state_taps).count_ones() & 1) as u8;
    ((v & g.taps[0]) ^ fb, state.push(v))
}

/// Runs the precoder over `v` starting from `state`.
pub fn conv_trans(v: &BitWord, g: &GenPoly, state: &ConvState) -> (BitWord, ConvState) {
    let mut u = BitWord::zeros(v.len());
    let mut s = *state;
    for i in 0..v.len() {
        let (ui, next) = conv_1b_trans(v.get(i), &s, g);
        u.set(i, ui);
        s = next;
    }
    (u, s)
}

/// Zero-input response of the precoder from `state` over `len` steps,
/// together with the final state.
pub fn zero_input_response(len: usize, g: &GenPoly, state: &ConvState) -> (BitWord, ConvState) {
    conv_trans(&BitWord::zeros(len), g, state)
}

/// Interleave masks selecting bit `i` iff `(i mod 2s) < s`.
const BUTTERFLY_MASKS: [(usize, u64); 6] = [
    (1, 0x5555_5555_5555_5555),
    (2, 0x3333_3333_3333_3333),
    (4, 0x0f0f_0f0f_0f0f_0f0f),
    (8, 0x00ff_00ff_00ff_00ff),
    (16, 0x0000_ffff_0000_ffff),
    (32, 0x0000_0000_ffff_ffff),
];

/// In-place `x ← x · F^{⊗k}` on a packed word of length `2^k`.
pub fn polar_transform_in_place(x: &mut BitWord) -> Result<()> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(PacError::NotPowerOfTwo {
            what: "polar transform input",
            len: n,
        });
    }
    let words = x.words_mut();
    for &(s, mask) in BUTTERFLY_MASKS.iter().take_while(|(s, _)| *s < n) {
        for w in words.iter_mut() {
            *w ^= (*w >> s) & mask;
        }
    }
    let mut ws = 1;
    while ws * 64 < n {
        for block in words.chunks_mut(2 * ws) {
            let (lo, hi) = block.split_at_mut(ws);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        ws *= 2;
    }
    Ok(())
}

/// `u · F^{⊗k}`; the transform is its own inverse.
pub fn polar_transform(u: &BitWord) -> Result<BitWord> {
    let mut out = u.clone();
    polar_transform_in_place(&mut out)?;
    Ok(out)
}

/// Same butterfly on an unpacked 0/1 slice.
#[cfg(test)]
pub(crate) fn polar_transform_bytes(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut s = 1;
    while s < n {
        for block in x.chunks_mut(2 * s) {
            let (lo, hi) = block.split_at_mut(s);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        s *= 2;
    }
}

/// CRC over GF(2), polynomial given highest-degree coefficient first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Crc {
    poly: Vec<u8>,
}

impl Crc {
    pub fn new(poly: &[u8]) -> Result<Self> {
        if poly.len() < 2 || poly[0] != 1 {
            return Err(PacError::InvalidSpec(
                "CRC polynomial needs degree >= 1 and a leading 1".into(),
            ));
        }
        Ok(Self {
            poly: poly.to_vec(),
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let w: BitWord = s.trim().parse()?;
        Self::new(&w.to_bits())
    }

    /// Number of parity bits (the polynomial degree).
    pub fn len(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poly(&self) -> &[u8] {
        &self.poly
    }

    fn remainder(&self, bits: impl Iterator<Item = u8>) -> Vec<u8> {
        let r = self.len();
        let mut reg = vec![0u8; r];
        for b in bits {
            let top = reg[0] ^ b;
            reg.rotate_left(1);
            reg[r - 1] = 0;
            if top == 1 {
                for (x, &p) in reg.iter_mut().zip(&self.poly[1..]) {
                    *x ^= p;
                }
            }
        }
        reg
    }

    /// Appends the remainder of `d(x)·x^r mod poly(x)`; `d_0` is the
    /// highest-degree coefficient.
    pub fn attach(&self, d: &BitWord) -> Result<BitWord> {
        if d.is_empty() {
            return Err(PacError::InvalidInput("CRC payload is empty".into()));
        }
        let rem = self.remainder(d.iter());
        Ok(d.concat(&BitWord::from_bits(&rem)))
    }

    pub fn check(&self, word: &BitWord) -> bool {
        if word.len() <= self.len() {
            return false;
        }
        let payload = word.len() - self.len();
        let rem = self.remainder(word.iter().take(payload));
        rem.iter()
            .enumerate()
            .all(|(i, &r)| r == word.get(payload + i))
    }
}

/// Static description of a PAC code.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    n: usize,
    info_set: Vec<usize>,
    is_info: Vec<bool>,
    gen_poly: GenPoly,
    crc: Option<Crc>,
}

impl CodeSpec {
    /// `block_len` must be a power of two; `info_set` is sorted and
    /// deduplicated here and every index must be below `block_len`.
    pub fn new(block_len: usize, info_set: &[usize], gen_poly: GenPoly) -> Result<Self> {
        if block_len == 0 || !block_len.is_power_of_two() {
            return Err(PacError::NotPowerOfTwo {
                what: "block length N",
                len: block_len,
            });
        }
        let mut set = info_set.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() != info_set.len() {
            return Err(PacError::InvalidSpec("information set has duplicates".into()));
        }
        if let Some(&bad) = set.iter().find(|&&i| i >= block_len) {
            return Err(PacError::InvalidSpec(format!(
                "information index {bad} is not below N = {block_len}"
            )));
        }
        let mut is_info = vec![false; block_len];
        for &i in &set {
            is_info[i] = true;
        }
        Ok(Self {
            n: block_len.trailing_zeros() as usize,
            info_set: set,
            is_info,
            gen_poly,
            crc: None,
        })
    }

    pub fn with_crc(mut self, crc: Crc) -> Result<Self> {
        if crc.len() >= self.info_set.len() {
            return Err(PacError::InvalidSpec(format!(
                "CRC length {} leaves no payload in K = {}",
                crc.len(),
                self.info_set.len()
            )));
        }
        self.crc = Some(crc);
        Ok(self)
    }

    /// Tree depth `n` with `N = 2^n`.
    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    pub fn info_len(&self) -> usize {
        self.info_set.len()
    }

    /// Data bits per block: `K` minus the CRC length.
    pub fn payload_len(&self) -> usize {
        self.info_len() - self.crc.as_ref().map_or(0, Crc::len)
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn is_info(&self, i: usize) -> bool {
        self.is_info[i]
    }

    pub fn info_mask(&self) -> &[bool] {
        &self.is_info
    }

    pub fn gen_poly(&self) -> &GenPoly {
        &self.gen_poly
    }

    pub fn memory(&self) -> usize {
        self.gen_poly.memory()
    }

    pub fn crc(&self) -> Option<&Crc> {
        self.crc.as_ref()
    }

    /// Extracts the `K` information-position bits of a carrier vector.
    pub fn info_bits(&self, v: &BitWord) -> BitWord {
        let bits: Vec<u8> = self.info_set.iter().map(|&i| v.get(i)).collect();
        BitWord::from_bits(&bits)
    }
}

/// Places `d` on the information set, zeros elsewhere.
pub fn rate_profile(d: &BitWord, spec: &CodeSpec) -> Result<BitWord> {
    if d.len() != spec.info_len() {
        return Err(PacError::LengthMismatch {
            what: "rate-profile input",
            expected: spec.info_len(),
            actual: d.len(),
        });
    }
    let mut v = BitWord::zeros(spec.block_len());
    for (j, &i) in spec.info_set().iter().enumerate() {
        v.set(i, d.get(j));
    }
    Ok(v)
}

/// Full encoder: optional CRC, rate profile, precoder, polar transform.
pub fn pac_encode(d: &BitWord, spec: &CodeSpec) -> Result<BitWord> {
    let with_crc;
    let d = match spec.crc() {
        Some(crc) => {
            if d.len() != spec.payload_len() {
                return Err(PacError::LengthMismatch {
                    what: "data word",
                    expected: spec.payload_len(),
                    actual: d.len(),
                });
            }
            with_crc = crc.attach(d)?;
            &with_crc
        }
        None => d,
    };
    let v = rate_profile(d, spec)?;
    let (mut c, _) = conv_trans(&v, spec.gen_poly(), &ConvState::zero(spec.memory()));
    polar_transform_in_place(&mut c)?;
    Ok(c)
}

/// First row `(α_0, ..., α_{N-1})` of the inverse precoder matrix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct InversePoly {
    alpha: Vec<u8>,
}

impl InversePoly {
    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn as_bitword(&self) -> BitWord {
        BitWord::from_bits(&self.alpha)
    }
}

impl fmt::Display for InversePoly {
    /// Tuple form, e.g. `(1,0,1,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Inverse generator polynomial for node length `len`.
///
/// `α_0 = 1` and `α_j = Σ_{i=1..min(j,m)} g_i α_{j-i}`: each new coefficient
/// is the previous ones dotted with the reversed tap vector. Because the
/// recurrence never looks ahead, the length-`N` result is a prefix of the
/// length-`2N` one.
pub fn inverse_gen_poly(g: &GenPoly, len: usize) -> InversePoly {
    let taps = g.taps();
    let m = g.memory();
    let mut alpha = vec![0u8; len];
    if len > 0 {
        alpha[0] = 1;
    }
    for j in 1..len {
        let mut acc = 0u8;
        for i in 1..=m.min(j) {
            acc ^= taps[i] & alpha[j - i];
        }
        alpha[j] = acc;
    }
    InversePoly { alpha }
}

/// Solves `v · G_cc = y` by the feedback recurrence
/// `v_i = y_i + Σ_{j=1..m, g_j=1} v_{i-j}`.
pub fn conv_inverse(y: &BitWord, g: &GenPoly) -> BitWord {
    let mut v = BitWord::zeros(y.len());
    let mut s = ConvState::zero(g.memory());
    let taps = g.state_taps();
    for i in 0..y.len() {
        let vi = y.get(i) ^ ((s.raw() & taps).count_ones() & 1) as u8;
        v.set(i, vi);
        s = s.push(vi);
    }
    v
}

/// Same recurrence as [`conv_inverse`], evaluated tap by tap and returning
/// the number of XORs performed alongside the result.
pub fn conv_inverse_counted(y: &BitWord, g: &GenPoly) -> (BitWord, u64) {
    let taps = g.taps();
    let mut v = BitWord::zeros(y.len());
    let mut ops = 0u64;
    for i in 0..y.len() {
        let mut vi = y.get(i);
        for j in 1..taps.len() {
            if taps[j] == 1 && j <= i {
                vi ^= v.get(i - j);
                ops += 1;
            }
        }
        v.set(i, vi);
    }
    (v, ops)
}

/// Parses a rate-profile file: either a JSON array of indices or
/// whitespace/newline/comma separated integers. `#` starts a comment line.
pub fn parse_profile(text: &str) -> Result<Vec<usize>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str::<Vec<usize>>(trimmed)
            .map_err(|e| PacError::InvalidInput(format!("profile JSON: {e}")));
    }
    let mut out = Vec::new();
    for line in trimmed.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let idx = tok
                .parse::<usize>()
                .map_err(|_| PacError::InvalidInput(format!("profile index {tok:?}")))?;
            out.push(idx);
        }
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PacError::InvalidInput(
            "profile indices must be strictly ascending".into(),
        ));
    }
    Ok(out)
}
