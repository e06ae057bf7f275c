use std::cmp::Ordering;
use std::ops::Add;

/// An exact path cost on an octile grid: a count of unit-cost cardinal steps
/// plus a count of sqrt(2)-cost diagonal steps.
///
/// Comparisons are decided by exact integer arithmetic (sign analysis plus
/// squaring in wide integers), never by floating point, so equal costs are
/// exactly the componentwise-equal ones and ties cannot be mis-ordered.
/// [`Cost::INFINITY`] absorbs addition and compares greater than every
/// finite cost.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Cost {
    cardinals: u32,
    diagonals: u32,
}

impl Cost {
    pub const ZERO: Cost = Cost::new(0, 0);
    pub const INFINITY: Cost = Cost {
        cardinals: u32::MAX,
        diagonals: u32::MAX,
    };

    pub const fn new(cardinals: u32, diagonals: u32) -> Cost {
        Cost {
            cardinals,
            diagonals,
        }
    }

    pub const fn cardinal(n: u32) -> Cost {
        Cost::new(n, 0)
    }

    pub const fn diagonal(n: u32) -> Cost {
        Cost::new(0, n)
    }

    pub const fn cardinals(self) -> u32 {
        self.cardinals
    }

    pub const fn diagonals(self) -> u32 {
        self.diagonals
    }

    pub fn is_infinite(self) -> bool {
        self == Cost::INFINITY
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    pub fn to_f64(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.cardinals as f64 + self.diagonals as f64 * std::f64::consts::SQRT_2
        }
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        if self.is_infinite() || rhs.is_infinite() {
            return Cost::INFINITY;
        }
        match (
            self.cardinals.checked_add(rhs.cardinals),
            self.diagonals.checked_add(rhs.diagonals),
        ) {
            (Some(c), Some(d)) if Cost::new(c, d).is_finite() => Cost::new(c, d),
            _ => Cost::INFINITY,
        }
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            (false, false) => {}
        }
        // self < other  <=>  (c1 - c2) < (d2 - d1) * sqrt(2)
        let dc = self.cardinals as i64 - other.cardinals as i64;
        let dd = other.diagonals as i64 - self.diagonals as i64;
        match dd.cmp(&0) {
            Ordering::Equal => dc.cmp(&0),
            Ordering::Greater => {
                if dc <= 0 {
                    Ordering::Less
                } else {
                    // both sides positive: square to compare exactly
                    let lhs = (dc as i128) * (dc as i128);
                    let rhs = 2 * (dd as i128) * (dd as i128);
                    lhs.cmp(&rhs)
                }
            }
            Ordering::Less => {
                if dc >= 0 {
                    Ordering::Greater
                } else {
                    // both sides negative: squaring reverses the order
                    let lhs = (dc as i128) * (dc as i128);
                    let rhs = 2 * (dd as i128) * (dd as i128);
                    rhs.cmp(&lhs)
                }
            }
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Cost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.to_f64())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ordering_basics() {
        assert!(Cost::new(1, 0) < Cost::new(0, 1)); // 1 < sqrt(2)
        assert!(Cost::new(0, 1) < Cost::new(2, 0)); // sqrt(2) < 2
        assert!(Cost::new(3, 0) < Cost::new(0, 3));
        assert!(Cost::new(7, 0) < Cost::new(0, 5)); // 7 < 5*sqrt(2) = 7.07
        assert!(Cost::new(0, 5) < Cost::new(8, 0));
        assert_eq!(Cost::new(4, 2), Cost::new(4, 2));
        assert!(Cost::new(5, 0) < Cost::new(0, 4)); // 5 < 4*sqrt(2) = 5.66
    }

    #[test]
    fn infinity_absorbs() {
        assert!(Cost::INFINITY > Cost::new(u32::MAX - 1, u32::MAX - 1));
        assert_eq!(Cost::INFINITY + Cost::new(1, 1), Cost::INFINITY);
        assert_eq!(Cost::new(1, 1) + Cost::INFINITY, Cost::INFINITY);
        assert_eq!(Cost::INFINITY, Cost::INFINITY);
    }

    #[test]
    fn addition_componentwise() {
        assert_eq!(Cost::new(3, 4) + Cost::new(1, 2), Cost::new(4, 6));
    }

    proptest! {
        /// Exact ordering agrees with f64 whenever the f64 gap is decisive.
        #[test]
        fn ordering_matches_f64(c1 in 0u32..1_000_000, d1 in 0u32..1_000_000,
                                c2 in 0u32..1_000_000, d2 in 0u32..1_000_000) {
            let a = Cost::new(c1, d1);
            let b = Cost::new(c2, d2);
            let fa = a.to_f64();
            let fb = b.to_f64();
            if (fa - fb).abs() > 1e-9 {
                prop_assert_eq!(a < b, fa < fb);
                prop_assert_eq!(a > b, fa > fb);
            }
        }

        /// Strict total order: trichotomy and equality only on identical pairs.
        #[test]
        fn total_order(c1 in 0u32..100_000, d1 in 0u32..100_000,
                       c2 in 0u32..100_000, d2 in 0u32..100_000) {
            let a = Cost::new(c1, d1);
            let b = Cost::new(c2, d2);
            match a.cmp(&b) {
                Ordering::Equal => prop_assert_eq!(a, b),
                Ordering::Less => prop_assert!(b > a),
                Ordering::Greater => prop_assert!(b < a),
            }
        }
    }
}
