use crate::qalg::C64;

/// |exact| below this is reported as degenerate instead of divided by.
pub const DEGENERATE_FLOOR: f64 = 1e-12;

/// Relative change ε = 1 − markov/exact at one time pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonRecord {
    pub t1: f64,
    pub t2: f64,
    pub exact: C64,
    pub markov: C64,
    /// Zero when `degenerate`.
    pub epsilon: C64,
    pub epsilon_abs: f64,
    pub degenerate: bool,
}

impl EpsilonRecord {
    pub fn new(t1: f64, t2: f64, exact: C64, markov: C64) -> Self {
        let degenerate = exact.norm() < DEGENERATE_FLOOR;
        let epsilon = if degenerate { C64::new(0.0, 0.0) } else { 1.0 - markov / exact };
        EpsilonRecord {
            t1,
            t2,
            exact,
            markov,
            epsilon,
            epsilon_abs: epsilon.norm(),
            degenerate,
        }
    }
}

/// [`EpsilonRecord`] without time labels.
pub fn epsilon(exact: C64, markov: C64) -> EpsilonRecord {
    EpsilonRecord::new(0.0, 0.0, exact, markov)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_values() {
        let r = epsilon(C64::new(0.3, -0.2), C64::new(0.3, -0.2));
        assert_eq!(r.epsilon, C64::new(0.0, 0.0));
        assert!(!r.degenerate);
    }

    #[test]
    fn vanishing_markov() {
        let r = epsilon(C64::new(0.0, 2.0), C64::new(0.0, 0.0));
        assert_eq!(r.epsilon, C64::new(1.0, 0.0));
        assert_eq!(r.epsilon_abs, 1.0);
    }

    #[test]
    fn degenerate_flagged() {
        let r = epsilon(C64::new(1e-13, 0.0), C64::new(0.5, 0.0));
        assert!(r.degenerate);
        assert_eq!(r.epsilon_abs, 0.0);
    }
}
