//! Exact count of distinct real roots by a Sturm chain over the rationals.

use num_traits::Signed;

use crate::error::Result;
use crate::poly::Polynomial;

/// Distinct-root counts from a Sturm chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SturmCount {
    pub distinct_real: usize,
    pub distinct_total: usize,
}

impl SturmCount {
    pub fn is_real_rooted(&self) -> bool {
        self.distinct_real == self.distinct_total
    }
}

/// Sturm chain `g, g', -rem(g, g'), ...` of a square-free `g`.
pub fn sturm_chain(g: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![g.clone(), g.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        if chain[n - 1].degree() == Some(0) {
            break;
        }
        let r = -&chain[n - 2].rem(&chain[n - 1]);
        chain.push(r);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

fn sign_at_infinity(p: &Polynomial, negative: bool) -> i8 {
    let Some(lead) = p.leading() else { return 0 };
    let s = if lead.is_positive() { 1 } else { -1 };
    if negative && p.degree().unwrap_or(0) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots of `f` and the number of distinct roots
/// overall (the degree of the square-free part).
pub fn sturm_real_root_count(f: &Polynomial) -> Result<SturmCount> {
    f.analysis_degree()?;
    let g = f.squarefree_part();
    let chain = sturm_chain(&g);
    let at_neg = sign_changes(chain.iter().map(|p| sign_at_infinity(p, true)));
    let at_pos = sign_changes(chain.iter().map(|p| sign_at_infinity(p, false)));
    Ok(SturmCount {
        distinct_real: at_neg - at_pos,
        distinct_total: g.degree().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn count(coeffs: &[i64]) -> (usize, usize) {
        let c = sturm_real_root_count(&Polynomial::from_integers(coeffs)).unwrap();
        (c.distinct_real, c.distinct_total)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(count(&[-1, 0, 1]), (2, 2));
        assert_eq!(count(&[1, 1, 1]), (0, 2));
        assert_eq!(count(&[1, -2, 1]), (1, 1));
    }

    #[test]
    fn mixed_cases() {
        // (t-1)^2 (t^2+1)
        assert_eq!(count(&[1, -2, 2, -2, 1]), (1, 3));
        assert_eq!(count(&[-5, 1]), (1, 1));
        let f = Polynomial::from_roots(&[-3, 0, 0, 2, 7]);
        let c = sturm_real_root_count(&f).unwrap();
        assert_eq!((c.distinct_real, c.distinct_total), (4, 4));
        assert!(c.is_real_rooted());
    }

    #[test]
    fn rejects_zero() {
        assert!(matches!(
            sturm_real_root_count(&Polynomial::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }
}
