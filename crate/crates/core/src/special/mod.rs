//! The remaining polynomial regimes: `alpha = beta = 2` forms over `p >= 3`
//! candidates, and two candidates with any number of voters.

mod intervals;
mod planes;

pub use intervals::{count_intervals, recognize_form_2_2, CountInterval, IntervalRole};
pub use planes::{
    generate_n_correspondence, generate_n_form, plane_signature, recognize_n_tableau, recognize_two_candidate_form,
    threshold_winners, NCorrespondence, NForm, NTableau,
};
