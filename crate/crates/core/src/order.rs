//! Monomial orders: degrevlex (default), lex, and block elimination orders.

use std::cmp::Ordering;

pub type Exponents = Vec<u32>;

/// Total order on monomials, compatible with multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Degree first, then reverse lexicographic (last nonzero difference negative wins).
    DegRevLex,
    /// Pure lexicographic in the ring's variable order.
    Lex,
    /// Block order eliminating the first `k` variables: degrevlex on the
    /// front block, ties broken by degrevlex on the rest.
    Elim(usize),
}

fn total_deg(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

fn cmp_degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    match total_deg(a).cmp(&total_deg(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            // later variable with smaller exponent is larger
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn cmp_lex(a: &[u32], b: &[u32]) -> Ordering {
    for i in 0..a.len() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match *self {
            MonomialOrder::DegRevLex => cmp_degrevlex(a, b),
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::Elim(k) => match cmp_degrevlex(&a[..k], &b[..k]) {
                Ordering::Equal => cmp_degrevlex(&a[k..], &b[k..]),
                o => o,
            },
        }
    }
}

pub fn exp_mul(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// a / b when b divides a.
pub fn exp_div(a: &[u32], b: &[u32]) -> Option<Exponents> {
    if a.iter().zip(b).all(|(x, y)| x >= y) {
        Some(a.iter().zip(b).map(|(x, y)| x - y).collect())
    } else {
        None
    }
}

pub fn exp_divides(b: &[u32], a: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_standard_examples() {
        let ord = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1 in two variables
        let x2 = vec![2, 0];
        let xy = vec![1, 1];
        let y2 = vec![0, 2];
        assert_eq!(ord.cmp(&x2, &xy), Ordering::Greater);
        assert_eq!(ord.cmp(&xy, &y2), Ordering::Greater);
        assert_eq!(ord.cmp(&y2, &x2), Ordering::Less);
        // degree dominates
        assert_eq!(ord.cmp(&vec![0, 3], &x2), Ordering::Greater);
    }

    #[test]
    fn elim_block_dominates() {
        let ord = MonomialOrder::Elim(1);
        // t > x^5 when t is the eliminated block
        assert_eq!(ord.cmp(&vec![1, 0], &vec![0, 5]), Ordering::Greater);
    }
}
