//! Bloch-sphere paths, the drives that realize them and their phase bookkeeping.

mod drive;
mod engineered;
mod envelope;
mod latitude;
mod ramp;
mod spec;
mod target;

pub use drive::DriveSchedule;
pub use engineered::{constant_detuning, instantaneous_detuning, EngineeredPath, PhaseRecord};
pub use envelope::{Envelope, EnvelopeShape, EnvelopeSpec};
pub use latitude::{drive_from_latitude_path, Branch, DetuningStrategy, Latitude};
pub use ramp::{Detuning, Ramp};
pub use spec::{build_invariant, dressed_pair, dressed_states, PathSegment, PathSpec, PoleJump};
pub use target::{target_unitary, GateSpec};
