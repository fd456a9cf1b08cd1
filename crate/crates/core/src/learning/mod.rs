//! Texts, automatic learners, budgeted storage devices and learning
//! sessions.

pub mod device;
pub mod learner;
pub mod session;
pub mod text;
pub mod wrappers;

pub use device::{DeviceKind, Queue, Snapshot, Stack, Tape};
pub use learner::{
    extensions_learner, intervals_learner, learner_by_name, length_bitmap_learner,
    missing_string_fat_learner, AutomaticLearner,
};
pub use session::{
    check_learns, run_automatic_learner, run_session, CycleRecord, LearnSettings, LearnVerdict,
    LearnerSpec, SessionReport,
};
pub use text::{Text, TextKind};
pub use wrappers::{
    queue_wrapper, stack_pair_wrapper, theorem35_learner, two_tape_wrapper, CycleOutput,
    DeviceLearner, Plain,
};
