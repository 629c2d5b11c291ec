pub mod cli;
pub mod distinctness;
pub mod error;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod plurality;
pub mod recognizer;
pub mod special;
pub mod strategy;
pub mod tableau;
pub mod validate;

pub use error::{DavError, Result};
pub use strategy::{Candidate, CandidateSet, Strategy};
pub use tableau::{Correspondence, Form, Labeling, Tableau};
