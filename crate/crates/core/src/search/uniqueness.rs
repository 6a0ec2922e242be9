use super::{support_shift, MaximizerCertificate, Pair};
use crate::grid::Domain;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport<T> {
    pub unique_up_to_translation: bool,
    /// A maximizer that is not a common translate of the ball pair.
    pub witness: Option<Pair<T>>,
}

/// Checks that every maximizer is the ball pair moved by one common lattice vector.
pub fn uniqueness_check<T: Scalar>(cert: &MaximizerCertificate<T>, domain: &Domain<T>) -> UniquenessReport<T> {
    let (b1, b2) = &cert.ball_pair;
    let is_translate = |(f, g): &Pair<T>| {
        if f.domain() != domain || g.domain() != domain {
            return false;
        }
        let shift = support_shift(b1, f)
            .or_else(|| support_shift(b2, g))
            .unwrap_or([0, 0]);
        b1.shifted(shift).as_ref() == Some(f) && b2.shifted(shift).as_ref() == Some(g)
    };
    let witness = cert.argmax_list.iter().find(|p| !is_translate(p)).cloned();
    UniquenessReport {
        unique_up_to_translation: witness.is_none(),
        witness,
    }
}
