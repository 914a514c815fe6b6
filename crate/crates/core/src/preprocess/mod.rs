//! Raw table to fused training data: encoding, feature alignment,
//! stratified splitting, minority oversampling, and fusion.

mod assemble;
mod encode;
mod feature_map;
mod fuse;
mod sample;
mod select;
mod smote;
mod split;

pub use assemble::{assemble, Assembled, AssembleError, AssembleSpec, SmoteBalance, SmoteScope};
pub use encode::{encode, CategoryEncoder, EncodeError};
pub use feature_map::{FeatureMap, FeatureMapError, FUSED_WIDTH};
pub use fuse::{fuse, FuseError};
pub use sample::{stratified_sample_indices, SampleError};
pub use select::{select_features, SelectError};
pub use smote::{smote, SmoteConfig, SmoteError};
pub use split::{split, split_indices, SplitError, SplitSpec};
