//! Monte Carlo ground truth.
//!
//! Two independent samplers:
//!
//! - the full-channel engine draws every H_mn with i.i.d. CN(0, 1) entries,
//!   builds each receiver's zero-forcing vectors and evaluates the SIR with
//!   the transmit power cancelled;
//! - the direct-distribution sampler draws the projected powers from their
//!   marginal laws (Gamma signal, exponential interference coefficients)
//!   with no matrix algebra.
//!
//! Trials are split into fixed-size blocks. Block `b` draws from a ChaCha8
//! stream keyed by `(seed, b)`, and block results are merged in block order,
//! so every estimate is a pure function of its inputs whatever the thread
//! count.

mod blocks;
mod channel;
mod estimate;
mod zf;

pub use blocks::{block_rng, BLOCK_SIZE};
pub use channel::{sample_channel, ChannelSet, CMatrix, ReceiverChannels};
pub use estimate::{
    direct_distribution_outage, empirical_link_outage, empirical_outage, sir_samples_direct,
    sir_samples_full, LinkEstimate, SirSample,
};
pub use zf::{zf_nulling_vector, ZfVector, RANK_TOLERANCE};
