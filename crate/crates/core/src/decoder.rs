//! Successive-cancellation list decoding of PAC codes.
//!
//! The decoder walks the polar tree depth first. Each path carries its own
//! partial-sum and LLR buffers, one slot per tree level, together with the
//! precoder state. Leaves expand every path into one (frozen) or two
//! (information) candidates and the list is pruned back to `L`. When a
//! [`NodePlan`] is supplied, whole subtrees are decoded in one step instead.

use crate::bits::BitWord;
use crate::codec::{conv_1b_trans, CodeSpec, ConvState, GenPoly};
use crate::error::{PacError, Result};
use crate::special::{expand_node, NodeClass, NodeExpansion, NodePlan};

/// Channel LLR magnitudes are saturated here before decoding.
pub const LLR_CLAMP: f64 = 32768.0;

/// Min-sum check-node update. A zero input counts as positive.
#[inline]
pub fn f_combine(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node update given the left partial sum.
#[inline]
pub fn g_combine(a: f64, b: f64, beta: u8) -> f64 {
    if beta & 1 == 1 {
        b - a
    } else {
        b + a
    }
}

/// Parent partial sums `(left ⊕ right, right)` from two child words.
pub fn combine_partial(left: &BitWord, right: &BitWord) -> Result<BitWord> {
    if left.len() != right.len() {
        return Err(PacError::LengthMismatch {
            what: "right partial sum",
            expected: left.len(),
            actual: right.len(),
        });
    }
    Ok(left.xor(right).concat(right))
}

/// Adds `|λ|` when `u` disagrees with the hard decision of `λ`.
#[inline]
pub fn pm_update_leaf(pm: f64, llr: f64, u: u8) -> f64 {
    if (llr < 0.0) != (u & 1 == 1) {
        pm + llr.abs()
    } else {
        pm
    }
}

/// One path extension awaiting pruning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub pm: f64,
    pub parent: usize,
    pub branch: usize,
}

/// Keeps the `list_size` candidates with the smallest metric. Ties break
/// on `(parent, branch)`, so the survivors are in a deterministic order.
pub fn expand_and_prune(mut cands: Vec<Candidate>, list_size: usize) -> Result<Vec<Candidate>> {
    if cands.is_empty() {
        return Err(PacError::DecoderState("no candidates to prune"));
    }
    if list_size == 0 {
        return Err(PacError::InvalidInput("list size must be at least 1".into()));
    }
    cands.sort_by(|a, b| {
        a.pm.total_cmp(&b.pm)
            .then(a.parent.cmp(&b.parent))
            .then(a.branch.cmp(&b.branch))
    });
    cands.truncate(list_size);
    Ok(cands)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    pub list_size: usize,
    /// Pick the best path that passes the CRC, if the code has one.
    pub crc_aided: bool,
}

impl DecoderConfig {
    pub fn sc() -> Self {
        Self {
            list_size: 1,
            crc_aided: false,
        }
    }

    pub fn list(list_size: usize) -> Self {
        Self {
            list_size,
            crc_aided: false,
        }
    }
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self::list(8)
    }
}

/// A surviving path at the end of decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodePath {
    pub pm: f64,
    pub v: BitWord,
    pub u: BitWord,
    pub codeword: BitWord,
    pub state: ConvState,
    pub crc_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutput {
    /// Decoded payload (CRC bits stripped).
    pub data: BitWord,
    pub v: BitWord,
    pub u: BitWord,
    pub codeword: BitWord,
    pub pm: f64,
    /// Index of the chosen path in `list`.
    pub selected: usize,
    /// Survivors sorted by path metric.
    pub list: Vec<DecodePath>,
}

#[derive(Clone)]
struct Path {
    pm: f64,
    state: ConvState,
    v: Vec<u8>,
    u: Vec<u8>,
    /// Level `k < n` LLRs live at `[2^k, 2^(k+1))`.
    llr: Vec<f64>,
    /// Level `k <= n` partial sums live at `[2^k, 2^(k+1))`.
    beta: Vec<u8>,
}

struct Engine<'a> {
    n: usize,
    g: &'a GenPoly,
    info: &'a [bool],
    channel: Vec<f64>,
    plan: Option<&'a NodePlan>,
    list_size: usize,
    paths: Vec<Path>,
}

impl Engine<'_> {
    fn node_input<'p>(channel: &'p [f64], p: &'p Path, level: usize, n: usize) -> &'p [f64] {
        if level == n {
            channel
        } else {
            &p.llr[1 << level..2 << level]
        }
    }

    fn decode(&mut self, level: usize, offset: usize) -> Result<()> {
        if let Some((class, z)) = self.plan.and_then(|pl| pl.get(level, offset)) {
            return self.special(level, offset, class, z);
        }
        if level == 0 {
            return self.leaf(offset);
        }
        let h = 1usize << (level - 1);
        let n = self.n;
        for p in &mut self.paths {
            let (lo, hi) = p.llr.split_at_mut(2 * h);
            let input = if level == n { &self.channel[..] } else { &hi[..2 * h] };
            for (i, out) in lo[h..].iter_mut().enumerate() {
                *out = f_combine(input[i], input[i + h]);
            }
        }
        self.decode(level - 1, offset)?;
        for p in &mut self.paths {
            let (blo, bhi) = p.beta.split_at_mut(2 * h);
            bhi[..h].copy_from_slice(&blo[h..]);
            let (lo, hi) = p.llr.split_at_mut(2 * h);
            let input = if level == n { &self.channel[..] } else { &hi[..2 * h] };
            for (i, out) in lo[h..].iter_mut().enumerate() {
                *out = g_combine(input[i], input[i + h], bhi[i]);
            }
        }
        self.decode(level - 1, offset + h)?;
        for p in &mut self.paths {
            let (blo, bhi) = p.beta.split_at_mut(2 * h);
            for i in 0..h {
                let r = blo[h + i];
                bhi[i] ^= r;
                bhi[h + i] = r;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, pos: usize) -> Result<()> {
        let branches = if self.info[pos] { 2 } else { 1 };
        let mut cands = Vec::with_capacity(self.paths.len() * branches);
        for (i, p) in self.paths.iter().enumerate() {
            let l = Self::node_input(&self.channel, p, 0, self.n)[0];
            for v in 0..branches as u8 {
                let (u, _) = conv_1b_trans(v, &p.state, self.g);
                cands.push(Candidate {
                    pm: pm_update_leaf(p.pm, l, u),
                    parent: i,
                    branch: v as usize,
                });
            }
        }
        let kept = expand_and_prune(cands, self.list_size)?;
        let g = self.g;
        self.commit(&kept, |p, _, c| {
            let v = c.branch as u8;
            let (u, next) = conv_1b_trans(v, &p.state, g);
            p.v[pos] = v;
            p.u[pos] = u;
            p.state = next;
            p.beta[1] = u;
        });
        Ok(())
    }

    fn special(&mut self, level: usize, offset: usize, class: NodeClass, z: usize) -> Result<()> {
        let mut per_path: Vec<NodeExpansion> = Vec::with_capacity(self.paths.len());
        let mut cands = Vec::new();
        for (i, p) in self.paths.iter().enumerate() {
            let input = Self::node_input(&self.channel, p, level, self.n);
            let exp = expand_node(class, input, &p.state, self.g, z)?;
            for (b, inc) in exp.pm_incs().into_iter().enumerate() {
                cands.push(Candidate {
                    pm: p.pm + inc,
                    parent: i,
                    branch: b,
                });
            }
            per_path.push(exp);
        }
        let kept = expand_and_prune(cands, self.list_size)?;
        let chosen = kept
            .iter()
            .map(|c| per_path[c.parent].candidate(c.branch, &self.paths[c.parent].state, self.g))
            .collect::<Result<Vec<_>>>()?;
        let len = 1usize << level;
        self.commit(&kept, |p, idx, _| {
            let nc = &chosen[idx];
            for j in 0..len {
                p.v[offset + j] = nc.v.get(j);
                p.u[offset + j] = nc.u.get(j);
                p.beta[len + j] = nc.beta.get(j);
            }
            p.state = nc.out_state;
        });
        Ok(())
    }

    /// Replaces the list with the survivors. A parent's buffers are moved
    /// into its last surviving child and cloned for the others.
    fn commit(&mut self, kept: &[Candidate], mut apply: impl FnMut(&mut Path, usize, &Candidate)) {
        let mut uses = vec![0usize; self.paths.len()];
        for c in kept {
            uses[c.parent] += 1;
        }
        let mut old: Vec<Option<Path>> = std::mem::take(&mut self.paths)
            .into_iter()
            .map(Some)
            .collect();
        self.paths = kept
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                uses[c.parent] -= 1;
                let mut p = if uses[c.parent] == 0 {
                    old[c.parent].take().expect("parent consumed once")
                } else {
                    old[c.parent].clone().expect("parent still live")
                };
                p.pm = c.pm;
                apply(&mut p, idx, c);
                p
            })
            .collect();
    }
}

pub(crate) fn saturate_llrs(llr: &[f64], n: usize) -> Result<Vec<f64>> {
    if llr.len() != n {
        return Err(PacError::LengthMismatch {
            what: "LLR vector",
            expected: n,
            actual: llr.len(),
        });
    }
    if llr.iter().any(|x| x.is_nan()) {
        return Err(PacError::InvalidInput("LLR vector contains NaN".into()));
    }
    Ok(llr.iter().map(|x| x.clamp(-LLR_CLAMP, LLR_CLAMP)).collect())
}

/// Shared list decoder. Without a plan every node is expanded down to its
/// leaves.
pub(crate) fn decode_with_plan(
    llr: &[f64],
    spec: &CodeSpec,
    cfg: &DecoderConfig,
    plan: Option<&NodePlan>,
) -> Result<DecodeOutput> {
    if cfg.list_size == 0 {
        return Err(PacError::InvalidInput("list size must be at least 1".into()));
    }
    let n_len = spec.block_len();
    let channel = saturate_llrs(llr, n_len)?;
    let root = Path {
        pm: 0.0,
        state: ConvState::zero(spec.memory()),
        v: vec![0; n_len],
        u: vec![0; n_len],
        llr: vec![0.0; n_len],
        beta: vec![0; 2 * n_len],
    };
    let mut engine = Engine {
        n: spec.depth(),
        g: spec.gen_poly(),
        info: spec.info_mask(),
        channel,
        plan,
        list_size: cfg.list_size,
        paths: vec![root],
    };
    engine.decode(spec.depth(), 0)?;

    let mut list: Vec<DecodePath> = engine
        .paths
        .into_iter()
        .map(|p| {
            let v = BitWord::from_bits(&p.v);
            let crc_ok = spec.crc().map(|crc| crc.check(&spec.info_bits(&v)));
            DecodePath {
                pm: p.pm,
                u: BitWord::from_bits(&p.u),
                codeword: BitWord::from_bits(&p.beta[n_len..]),
                v,
                state: p.state,
                crc_ok,
            }
        })
        .collect();
    list.sort_by(|a, b| a.pm.total_cmp(&b.pm));

    #[cfg(debug_assertions)]
    for p in &list {
        debug_assert_eq!(
            crate::codec::polar_transform(&p.u).expect("power-of-two block"),
            p.codeword,
            "partial sums disagree with the decided u"
        );
    }

    let selected = if cfg.crc_aided {
        list.iter().position(|p| p.crc_ok == Some(true)).unwrap_or(0)
    } else {
        0
    };
    let best = &list[selected];
    let data = spec.info_bits(&best.v).slice(0, spec.payload_len());
    Ok(DecodeOutput {
        data,
        v: best.v.clone(),
        u: best.u.clone(),
        codeword: best.codeword.clone(),
        pm: best.pm,
        selected,
        list,
    })
}

/// SCL decoding with list size `cfg.list_size`.
pub fn scl_decode(llr: &[f64], spec: &CodeSpec, cfg: &DecoderConfig) -> Result<DecodeOutput> {
    decode_with_plan(llr, spec, cfg, None)
}

/// Plain SC decoding (list size one).
pub fn sc_decode(llr: &[f64], spec: &CodeSpec) -> Result<DecodeOutput> {
    scl_decode(llr, spec, &DecoderConfig::sc())
}
