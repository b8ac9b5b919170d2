//! Evaluation protocol: fold-aware min-max scaling, stratified splits, LDA
//! and k-NN classifiers, accuracy and one-vs-rest macro AUC.

pub mod knn;
pub mod lda;
pub mod metrics;
pub mod protocol;
pub mod scaler;
pub mod split;

pub use knn::{knn_predict, knn_scores};
pub use lda::{lda_fit, lda_predict, LdaModel};
pub use metrics::{binary_auc, evaluate, EvalReport};
pub use protocol::{run_protocol, Classifier, FoldResult, ProtocolOutcome};
pub use scaler::{apply_minmax, fit_minmax, MinMaxScaler};
pub use split::{make_group_splits, make_splits, SplitMode, SplitPlan};
