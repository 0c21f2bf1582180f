//! PAC (polarization-adjusted convolutional) codes: encoding, SC/SCL and
//! simplified-SCL decoding, AWGN BLER simulation and a decoder latency model.

pub mod bits;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod decoder;
pub mod error;
pub mod reference;
pub mod latency;
pub mod special;

pub use bits::BitWord;
pub use codec::{
    conv_1b_trans, conv_inverse, conv_trans, inverse_gen_poly, pac_encode, parse_profile,
    polar_transform, rate_profile, CodeSpec, ConvState, Crc, GenPoly, InversePoly,
};
pub use decoder::{sc_decode, scl_decode, DecodeOutput, DecoderConfig};
pub use error::{PacError, Result};
pub use special::{sscl_decode, CandidateCount, NodeClass, NodePolicy};
