//! OFDM waveform, array responses and echo simulation.

pub mod dump;
pub mod frame;
pub mod ofdm;
pub mod response;

pub use frame::{
    complex_gaussian, generate_transmit_frame, simulate_frame, stream_rng, synthesize_echo, Block, FrameSnapshot,
    SignalFrame, StreamPurpose,
};
pub use ofdm::{OfdmConfig, K0, SPEED_OF_LIGHT};
pub use response::{array_response, ChannelModel, ReferenceDistance, ResponseProfile};
