//! Shift-reduce RST constituent parser with an averaged perceptron scorer,
//! organizational and stacked features, and warm-start training.

pub mod error;
pub mod features;
pub mod model;
pub mod perceptron;
pub mod stacking;
pub mod train;
pub mod transition;

pub use error::{Error, Result};
pub use features::{extract_features, Annotation, DocView, FeatureConfig, Stacking};
pub use model::Model;
pub use train::{parse, parse_tree, stratified_dev, train, warm_start, Instance, TrainConfig, TrainReport};
pub use transition::{oracle, replay, ParserState, Transition};
