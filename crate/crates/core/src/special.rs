//! Special-node classification and direct constituent-code decoding.
//!
//! A node whose leaf pattern is all-frozen (Rate-0), frozen-but-last
//! (repetition), all-information (Rate-1) or frozen-first (SPC) can be
//! decoded in one step. The precoder shifts the constituent codebook by the
//! zero-input response `η` of the path's current state, so every routine
//! computes `η` once and works relative to it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::bits::BitWord;
use crate::codec::{
    conv_inverse, polar_transform, zero_input_response, CodeSpec, ConvState, GenPoly,
};
use crate::decoder::{decode_with_plan, DecodeOutput, DecoderConfig};
use crate::error::{PacError, Result};

/// Z used when nothing else is configured.
pub const DEFAULT_Z: usize = 4;

/// Largest node length allowed in exhaustive candidate mode.
pub const EXHAUSTIVE_MAX_NODE_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeClass {
    Rate0,
    Rep,
    Rate1,
    Spc,
    Generic,
}

impl NodeClass {
    pub const SPECIAL: [NodeClass; 4] = [
        NodeClass::Rate0,
        NodeClass::Rep,
        NodeClass::Rate1,
        NodeClass::Spc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NodeClass::Rate0 => "rate0",
            NodeClass::Rep => "rep",
            NodeClass::Rate1 => "rate1",
            NodeClass::Spc => "spc",
            NodeClass::Generic => "generic",
        }
    }
}

/// Classifies a node from its leaf pattern (`true` = information leaf).
///
/// Precedence is Rate-0, Rep, Rate-1, SPC, so `[I]` and `[F, I]` are Rep and
/// `[F]` is Rate-0.
pub fn classify_node(info: &[bool]) -> NodeClass {
    let n = info.len();
    let infos = info.iter().filter(|&&b| b).count();
    if infos == 0 {
        NodeClass::Rate0
    } else if infos == 1 && info[n - 1] {
        NodeClass::Rep
    } else if infos == n {
        NodeClass::Rate1
    } else if infos == n - 1 && !info[0] {
        NodeClass::Spc
    } else {
        NodeClass::Generic
    }
}

/// How many candidates Rate-1 and SPC nodes emit per path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CandidateCount {
    Fixed(usize),
    /// The whole constituent codebook: `2^Nν` words at Rate-1 and
    /// `2^(Nν-1)` at SPC nodes.
    Exhaustive,
}

/// Which nodes the simplified decoder handles directly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodePolicy {
    pub max_node_len: Option<usize>,
    pub rate0: bool,
    pub rep: bool,
    pub rate1: bool,
    pub spc: bool,
    pub candidates: CandidateCount,
}

impl Default for NodePolicy {
    fn default() -> Self {
        Self {
            max_node_len: None,
            rate0: true,
            rep: true,
            rate1: true,
            spc: true,
            candidates: CandidateCount::Fixed(DEFAULT_Z),
        }
    }
}

impl NodePolicy {
    /// Every node class disabled: decoding degenerates to plain SCL.
    pub fn disabled() -> Self {
        Self {
            rate0: false,
            rep: false,
            rate1: false,
            spc: false,
            ..Self::default()
        }
    }

    pub fn with_z(mut self, z: usize) -> Self {
        self.candidates = CandidateCount::Fixed(z);
        self
    }

    pub fn is_enabled(&self, class: NodeClass) -> bool {
        match class {
            NodeClass::Rate0 => self.rate0,
            NodeClass::Rep => self.rep,
            NodeClass::Rate1 => self.rate1,
            NodeClass::Spc => self.spc,
            NodeClass::Generic => false,
        }
    }

    /// Class of a node if this policy decodes it directly. Leaves
    /// (length 1) are never special.
    pub fn special_class(&self, info: &[bool]) -> Option<NodeClass> {
        let len = info.len();
        if len < 2 || self.max_node_len.is_some_and(|m| len > m) {
            return None;
        }
        let class = classify_node(info);
        self.is_enabled(class).then_some(class)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let CandidateCount::Fixed(0) = self.candidates {
            return Err(PacError::InvalidInput("Z must be at least 1".into()));
        }
        Ok(())
    }

    /// Candidate count for a node of the given class and length, clipped
    /// to the constituent codebook size.
    pub(crate) fn count_for(&self, class: NodeClass, len: usize) -> Result<usize> {
        let dim = match class {
            NodeClass::Rate1 => len,
            NodeClass::Spc => len - 1,
            _ => return Ok(1),
        };
        match self.candidates {
            CandidateCount::Fixed(z) => Ok(if dim >= 63 { z } else { z.min(1 << dim) }),
            CandidateCount::Exhaustive => {
                if len > EXHAUSTIVE_MAX_NODE_LEN {
                    return Err(PacError::LimitExceeded {
                        what: "node length in exhaustive candidate mode",
                        value: len,
                        limit: EXHAUSTIVE_MAX_NODE_LEN,
                    });
                }
                Ok(1 << dim)
            }
        }
    }
}

/// `pm` plus the summed magnitude of every LLR whose hard decision
/// disagrees with `beta`.
pub fn node_pm(pm: f64, llr: &[f64], beta: &BitWord) -> Result<f64> {
    if llr.len() != beta.len() {
        return Err(PacError::LengthMismatch {
            what: "node codeword",
            expected: llr.len(),
            actual: beta.len(),
        });
    }
    Ok(pm + node_penalty(llr, beta))
}

fn node_penalty(llr: &[f64], beta: &BitWord) -> f64 {
    let mut acc = 0.0;
    for (j, &l) in llr.iter().enumerate() {
        if (l < 0.0) != (beta.get(j) == 1) {
            acc += l.abs();
        }
    }
    acc
}

fn hard_decision(llr: &[f64]) -> BitWord {
    let bits: Vec<bool> = llr.iter().map(|&l| l < 0.0).collect();
    BitWord::from_bools(&bits)
}

/// One direct expansion of a special node for one path.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeCandidate {
    pub v: BitWord,
    pub u: BitWord,
    pub beta: BitWord,
    pub out_state: ConvState,
    pub pm_inc: f64,
}

/// Single candidate `v = 0`; the codeword is the polar transform of the
/// zero-input response.
pub fn process_rate0(llr: &[f64], state: &ConvState, g: &GenPoly) -> Result<NodeCandidate> {
    let n = llr.len();
    let (u, out_state) = zero_input_response(n, g, state);
    let beta = polar_transform(&u)?;
    let pm_inc = node_penalty(llr, &beta);
    Ok(NodeCandidate {
        v: BitWord::zeros(n),
        u,
        beta,
        out_state,
        pm_inc,
    })
}

/// Two candidates differing in the last carrier bit. The second is derived
/// from the first without rerunning the precoder: flip the last `u` bit,
/// the newest state bit and every codeword bit.
pub fn process_rep(llr: &[f64], state: &ConvState, g: &GenPoly) -> Result<Vec<NodeCandidate>> {
    let c0 = process_rate0(llr, state, g)?;
    let n = llr.len();
    let mut v = BitWord::zeros(n);
    v.set(n - 1, 1);
    let mut u = c0.u.clone();
    u.flip(n - 1);
    let beta = c0.beta.not();
    let pm_inc = node_penalty(llr, &beta);
    let c1 = NodeCandidate {
        v,
        u,
        beta,
        out_state: c0.out_state.flip_newest(),
        pm_inc,
    };
    Ok(vec![c0, c1])
}

/// Flip set ordered by (penalty, flip count, sorted bit indices).
#[derive(Clone, Debug)]
struct FlipSet {
    penalty: f64,
    /// Ranks into the reliability order, ascending.
    ranks: Vec<usize>,
    /// Bit indices, ascending.
    indices: Vec<usize>,
}

impl FlipSet {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.penalty
            .total_cmp(&other.penalty)
            .then(self.indices.len().cmp(&other.indices.len()))
            .then_with(|| self.indices.cmp(&other.indices))
    }
}

impl PartialEq for FlipSet {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for FlipSet {}

impl PartialOrd for FlipSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FlipSet {
    // reversed so BinaryHeap pops the smallest key
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

/// The `z` smallest-penalty flip patterns of the hard decision, confined to
/// the `min(z, len)` least reliable positions and, if `parity` is given,
/// to patterns with that many flips mod 2.
///
/// Reliability order is by `(|λ|, index)`. Enumeration is best-first over
/// subsets of that order: a subset's children either append the next rank
/// or bump its last rank by one, and neither move can decrease the key.
fn least_penalty_flips(llr: &[f64], z: usize, parity: Option<u8>) -> Vec<FlipSet> {
    let n = llr.len();
    let pool = z.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| llr[a].abs().total_cmp(&llr[b].abs()).then(a.cmp(&b)));
    order.truncate(pool);

    let make = |ranks: Vec<usize>| {
        let mut indices: Vec<usize> = ranks.iter().map(|&r| order[r]).collect();
        indices.sort_unstable();
        let penalty = indices.iter().map(|&i| llr[i].abs()).sum();
        FlipSet {
            penalty,
            ranks,
            indices,
        }
    };

    let accept = |s: &FlipSet| parity.is_none_or(|p| (s.ranks.len() % 2) as u8 == p);
    let mut out = Vec::with_capacity(z);
    let empty = make(Vec::new());
    if accept(&empty) {
        out.push(empty);
    }
    let mut heap = BinaryHeap::new();
    if pool > 0 {
        heap.push(make(vec![0]));
    }
    while out.len() < z {
        let Some(s) = heap.pop() else { break };
        let last = *s.ranks.last().unwrap();
        if last + 1 < pool {
            let mut grown = s.ranks.clone();
            grown.push(last + 1);
            heap.push(make(grown));
            let mut bumped = s.ranks.clone();
            *bumped.last_mut().unwrap() = last + 1;
            heap.push(make(bumped));
        }
        if accept(&s) {
            out.push(s);
        }
    }
    out
}

/// The `z` most likely length-`Nν` words for an unconstrained node: the
/// hard decision first, then Chase flips of the least reliable positions in
/// non-decreasing penalty order. `z` is clipped to `2^Nν`.
pub fn rate1_candidates(llr: &[f64], z: usize) -> Vec<BitWord> {
    let hard = hard_decision(llr);
    least_penalty_flips(llr, z.max(1), None)
        .into_iter()
        .map(|s| {
            let mut w = hard.clone();
            for i in s.indices {
                w.flip(i);
            }
            w
        })
        .collect()
}

/// The `z` most likely even-parity words. Candidate 0 is the Wagner
/// decision; `z` is clipped to `2^(Nν-1)`.
pub fn spc_candidates(llr: &[f64], z: usize) -> Vec<BitWord> {
    let hard = hard_decision(llr);
    least_penalty_flips(llr, z.max(1), Some(hard.parity()))
        .into_iter()
        .map(|s| {
            let mut w = hard.clone();
            for i in s.indices {
                w.flip(i);
            }
            w
        })
        .collect()
}

/// Maps a node codeword back through the polar transform and the inverse
/// precoder, and advances the state by the `q = min(Nν, m)` newest bits.
fn complete(
    state: &ConvState,
    g: &GenPoly,
    eta: &BitWord,
    beta: BitWord,
    pm_inc: f64,
) -> Result<NodeCandidate> {
    let n = beta.len();
    let m = g.memory();
    let q = n.min(m);
    let u = polar_transform(&beta)?;
    let v = conv_inverse(&u.xor(eta), g);
    let mut raw = if q >= 64 { 0 } else { state.raw() << q };
    for j in 0..q {
        raw |= (v.get(n - 1 - j) as u64) << j;
    }
    Ok(NodeCandidate {
        v,
        u,
        beta,
        out_state: ConvState::from_raw(raw, m),
        pm_inc,
    })
}

/// Candidate codewords of one node for one path. Rate-1 and SPC
/// candidates are only mapped back to `v` on request, so a list decoder
/// pays for that step on survivors only.
pub(crate) enum NodeExpansion {
    Done(Vec<NodeCandidate>),
    Deferred {
        eta: BitWord,
        betas: Vec<BitWord>,
        pm_inc: Vec<f64>,
    },
}

impl NodeExpansion {
    fn deferred(llr: &[f64], eta: BitWord, betas: Vec<BitWord>) -> Self {
        let pm_inc = betas.iter().map(|b| node_penalty(llr, b)).collect();
        NodeExpansion::Deferred { eta, betas, pm_inc }
    }

    pub(crate) fn pm_incs(&self) -> Vec<f64> {
        match self {
            NodeExpansion::Done(c) => c.iter().map(|c| c.pm_inc).collect(),
            NodeExpansion::Deferred { pm_inc, .. } => pm_inc.clone(),
        }
    }

    pub(crate) fn candidate(
        &self,
        branch: usize,
        state: &ConvState,
        g: &GenPoly,
    ) -> Result<NodeCandidate> {
        match self {
            NodeExpansion::Done(c) => Ok(c[branch].clone()),
            NodeExpansion::Deferred { eta, betas, pm_inc } => {
                complete(state, g, eta, betas[branch].clone(), pm_inc[branch])
            }
        }
    }

    fn into_candidates(self, state: &ConvState, g: &GenPoly) -> Result<Vec<NodeCandidate>> {
        match self {
            NodeExpansion::Done(c) => Ok(c),
            NodeExpansion::Deferred { eta, betas, pm_inc } => betas
                .into_iter()
                .zip(pm_inc)
                .map(|(b, p)| complete(state, g, &eta, b, p))
                .collect(),
        }
    }
}

fn expand_rate1(llr: &[f64], state: &ConvState, g: &GenPoly, z: usize) -> NodeExpansion {
    let (eta, _) = zero_input_response(llr.len(), g, state);
    NodeExpansion::deferred(llr, eta, rate1_candidates(llr, z))
}

fn expand_spc(llr: &[f64], state: &ConvState, g: &GenPoly, z: usize) -> Result<NodeExpansion> {
    let (eta, _) = zero_input_response(llr.len(), g, state);
    let eta_c = polar_transform(&eta)?;
    let shifted: Vec<f64> = llr
        .iter()
        .enumerate()
        .map(|(j, &l)| if eta_c.get(j) == 1 { -l } else { l })
        .collect();
    let betas = spc_candidates(&shifted, z)
        .into_iter()
        .map(|b| b.xor(&eta_c))
        .collect();
    Ok(NodeExpansion::deferred(llr, eta, betas))
}

/// Rate-1 node: any codeword is reachable, so candidates come straight
/// from the LLRs.
pub fn process_rate1(
    llr: &[f64],
    state: &ConvState,
    g: &GenPoly,
    z: usize,
) -> Result<Vec<NodeCandidate>> {
    expand_rate1(llr, state, g, z).into_candidates(state, g)
}

/// SPC node: the codebook is an SPC code shifted by `η_c = η·F^{⊗nν}`.
/// LLRs are sign-flipped where `η_c = 1`, decoded as a plain SPC code, and
/// shifted back.
pub fn process_spc(
    llr: &[f64],
    state: &ConvState,
    g: &GenPoly,
    z: usize,
) -> Result<Vec<NodeCandidate>> {
    expand_spc(llr, state, g, z)?.into_candidates(state, g)
}

/// Dispatches on class; `z` is ignored for Rate-0 and Rep nodes.
pub(crate) fn expand_node(
    class: NodeClass,
    llr: &[f64],
    state: &ConvState,
    g: &GenPoly,
    z: usize,
) -> Result<NodeExpansion> {
    match class {
        NodeClass::Rate0 => Ok(NodeExpansion::Done(vec![process_rate0(llr, state, g)?])),
        NodeClass::Rep => Ok(NodeExpansion::Done(process_rep(llr, state, g)?)),
        NodeClass::Rate1 => Ok(expand_rate1(llr, state, g, z)),
        NodeClass::Spc => expand_spc(llr, state, g, z),
        NodeClass::Generic => Err(PacError::DecoderState("generic node has no direct decoder")),
    }
}

/// Per-node decoding plan: the special class (if any) of every tree node,
/// indexed by `[level][offset >> level]`.
#[derive(Clone, Debug)]
pub(crate) struct NodePlan {
    pub(crate) special: Vec<Vec<Option<(NodeClass, usize)>>>,
}

impl NodePlan {
    pub(crate) fn new(spec: &CodeSpec, policy: &NodePolicy) -> Result<Self> {
        policy.validate()?;
        let n = spec.depth();
        let mask = spec.info_mask();
        let mut special = Vec::with_capacity(n + 1);
        for level in 0..=n {
            let len = 1usize << level;
            let mut row = Vec::with_capacity(mask.len() / len);
            for chunk in mask.chunks(len) {
                let entry = match policy.special_class(chunk) {
                    Some(class) => Some((class, policy.count_for(class, len)?)),
                    None => None,
                };
                row.push(entry);
            }
            special.push(row);
        }
        Ok(Self { special })
    }

    pub(crate) fn get(&self, level: usize, offset: usize) -> Option<(NodeClass, usize)> {
        self.special[level][offset >> level]
    }
}

/// Simplified SCL: the same depth-first traversal as SCL, except that
/// subtrees rooted at enabled special nodes are decoded in one step. Each
/// path expands into its node candidates and the combined list is pruned
/// once per node.
pub fn sscl_decode(
    llr: &[f64],
    spec: &CodeSpec,
    cfg: &DecoderConfig,
    policy: &NodePolicy,
) -> Result<DecodeOutput> {
    let plan = NodePlan::new(spec, policy)?;
    decode_with_plan(llr, spec, cfg, Some(&plan))
}
